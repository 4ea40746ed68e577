//! Directedness conditions and the interchange verifier
//! `inf_{x∈X} Φ(x) = Φ(inf X)`.
//!
//! For an order-preserving `Φ` the interchange holds exactly when `X` is
//! Φ-inf-directed: `inf Φ(X) ≤ Φ(inf X̃)` for every finite `X̃ ⊆ X`. The
//! verifier computes both sides independently of the directedness scan and
//! reports any disagreement between the two as a library invariant failure.

mod giner;
mod sequence;

pub use giner::{giner_gap_check, GinerReport};
pub use sequence::{
    analyze_prefix, check_seq_inf_continuity, verify_interchange_sequence, ContinuityReport,
    ContinuityVerdict, Generator, LimitEstimate, SequenceDetails, SequenceSpec,
    DEFAULT_DIVERGENCE_THRESHOLD,
};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext_real::{Backing, ExtReal, Scalar};
use crate::functional::{check_order_preserving, Functional};
use crate::lattice::{pointwise_inf, FnClass};

/// Largest family for which the exhaustive subset scan may be requested.
pub const MAX_EXHAUSTIVE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Literal,
    Generated,
}

/// A nonempty family of functions on one space.
#[derive(Clone, Debug)]
pub struct Family {
    members: Vec<FnClass>,
    origin: Origin,
}

impl Family {
    pub fn new(members: Vec<FnClass>) -> Result<Self> {
        Self::with_origin(members, Origin::Literal)
    }

    pub fn with_origin(members: Vec<FnClass>, origin: Origin) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::input("a family needs at least one member"))?;
        for m in &members[1..] {
            first.check_same_space(m)?;
        }
        Ok(Family { members, origin })
    }

    pub fn members(&self) -> &[FnClass] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// Pointwise infimum of the members at `indices`.
    pub fn inf_of(&self, indices: &[usize]) -> Result<FnClass> {
        let picked: Vec<FnClass> = indices.iter().map(|&i| self.members[i].clone()).collect();
        pointwise_inf(&picked)
    }

    pub fn inf(&self) -> FnClass {
        pointwise_inf(&self.members).expect("nonempty family")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfDirectedReport {
    pub directed: bool,
    /// A pair with no common lower bound inside the family.
    pub witness: Option<(usize, usize)>,
}

/// Every pair has a lower bound inside the family.
pub fn is_inf_directed(x: &Family) -> InfDirectedReport {
    let m = x.members();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            let bounded = m.iter().any(|z| {
                z.mu_leq(&m[i]).expect("same space") && z.mu_leq(&m[j]).expect("same space")
            });
            if !bounded {
                return InfDirectedReport {
                    directed: false,
                    witness: Some((i, j)),
                };
            }
        }
    }
    InfDirectedReport {
        directed: true,
        witness: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DirectedVerdict {
    Yes,
    /// `witness` lists member indices of a finite subfamily breaking the
    /// condition.
    No { witness: Vec<usize> },
    /// The left-hand side diverges to `−∞`, so the condition holds vacuously.
    Diverging,
}

impl DirectedVerdict {
    pub fn is_directed(&self) -> bool {
        !matches!(self, DirectedVerdict::No { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct InterchangeOptions {
    pub tolerance: Scalar,
    /// Families up to this size get the exhaustive subset scan.
    pub subset_budget: usize,
    /// Random subsets drawn in sampled mode, on top of singletons, pairs and
    /// the full family.
    pub sampled_subsets: usize,
    pub seed: u64,
    /// Sampled pairs used to spot-check functionals not declared order
    /// preserving.
    pub order_check_trials: usize,
    pub divergence_threshold: Option<Scalar>,
}

impl InterchangeOptions {
    pub fn for_backing(backing: Backing) -> Self {
        InterchangeOptions {
            tolerance: backing.default_tolerance(),
            subset_budget: 12,
            sampled_subsets: 256,
            seed: 0,
            order_check_trials: 200,
            divergence_threshold: None,
        }
    }
}

impl Default for InterchangeOptions {
    fn default() -> Self {
        Self::for_backing(Backing::Rational)
    }
}

/// Subsets to visit, as sorted index lists. Exhaustive mode orders them by
/// size so the first failure is a smallest witness.
pub(crate) fn candidate_subsets(n: usize, opts: &InterchangeOptions) -> Result<(ScanMode, Vec<Vec<usize>>)> {
    if opts.subset_budget > MAX_EXHAUSTIVE {
        return Err(Error::Budget {
            needed: 1u128 << opts.subset_budget,
            budget: 1u128 << MAX_EXHAUSTIVE,
        });
    }
    if n <= opts.subset_budget {
        let mut masks: Vec<u64> = (1..(1u64 << n)).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let subsets = masks
            .into_iter()
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        return Ok((ScanMode::Exhaustive, subsets));
    }
    let mut subsets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for i in 0..n {
        for j in i + 1..n {
            subsets.push(vec![i, j]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..if n >= 3 { opts.sampled_subsets } else { 0 } {
        let k = rng.random_range(3..=n);
        let mut picked = index::sample(&mut rng, n, k).into_vec();
        picked.sort_unstable();
        subsets.push(picked);
    }
    subsets.push((0..n).collect());
    Ok((ScanMode::Sampled, subsets))
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiDirectedReport {
    pub verdict: DirectedVerdict,
    pub mode: ScanMode,
    pub subsets_checked: usize,
    /// `inf_{x∈X} Φ(x)`
    pub inf_of_values: ExtReal,
    /// The condition for `X̃ = X` alone.
    pub shortcut_holds: bool,
}

fn values_of(x: &Family, phi: &Functional) -> Result<Vec<ExtReal>> {
    x.members().iter().map(|m| phi.eval(m)).collect()
}

/// Checks `inf Φ(X) ≤ Φ(inf X̃)` over finite subfamilies `X̃`.
pub fn is_phi_inf_directed(x: &Family, phi: &Functional, opts: &InterchangeOptions) -> Result<PhiDirectedReport> {
    let lhs = values_of(x, phi)?.into_iter().min().expect("nonempty");
    let (mode, subsets) = candidate_subsets(x.len(), opts)?;
    let mut verdict = DirectedVerdict::Yes;
    let mut checked = 0;
    for s in &subsets {
        checked += 1;
        let v = phi.eval(&x.inf_of(s)?)?;
        if !lhs.leq_within(&v, &opts.tolerance) {
            verdict = DirectedVerdict::No { witness: s.clone() };
            break;
        }
    }
    let shortcut_holds = lhs.leq_within(&phi.eval(&x.inf())?, &opts.tolerance);
    Ok(PhiDirectedReport {
        verdict,
        mode,
        subsets_checked: checked,
        inf_of_values: lhs,
        shortcut_holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HoldsVerdict {
    Holds,
    Fails,
    /// Both sides were obtained as limits of a generated prefix.
    HoldsInLimit,
    Inconclusive,
}

impl HoldsVerdict {
    pub fn holds(self) -> bool {
        matches!(self, HoldsVerdict::Holds | HoldsVerdict::HoldsInLimit)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InterchangeReport {
    pub functional: String,
    /// `inf_{x∈X} Φ(x)`
    pub lhs: ExtReal,
    /// `Φ(inf X)`
    pub rhs: ExtReal,
    pub phi_inf_directed: DirectedVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shortcut_agrees: Option<bool>,
    pub interchange_holds: HoldsVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceDetails>,
    pub notes: Vec<String>,
    pub invariant_failures: Vec<String>,
}

impl InterchangeReport {
    pub fn is_consistent(&self) -> bool {
        self.invariant_failures.is_empty()
    }
}

pub(crate) fn hypothesis_notes(phi: &Functional, opts: &InterchangeOptions) -> Vec<String> {
    let mut notes = Vec::new();
    let props = phi.properties();
    if !phi.is_builtin() {
        let r = check_order_preserving(phi, opts.order_check_trials, opts.seed);
        let declared = if props.order_preserving {
            "declared order preserving"
        } else {
            "not declared order preserving"
        };
        notes.push(format!(
            "{} is {declared}; monotonicity was sample-checked only ({} pairs, {} violations)",
            phi.name(),
            r.pairs_checked,
            r.violations.len()
        ));
    }
    notes
}

/// Computes both sides of the interchange formula and cross-checks the
/// verdict against the Φ-inf-directedness scan.
pub fn verify_interchange(x: &Family, phi: &Functional, opts: &InterchangeOptions) -> Result<InterchangeReport> {
    let values = values_of(x, phi)?;
    let lhs = values.iter().min().expect("nonempty").clone();
    let rhs = phi.eval(&x.inf())?;
    let holds = lhs.approx_eq(&rhs, &opts.tolerance);
    let directed = is_phi_inf_directed(x, phi, opts)?;

    let mut notes = hypothesis_notes(phi, opts);
    notes.push(
        "finite family: the infimum exists and is realized by the family itself".into(),
    );
    let mut failures = Vec::new();
    let order_preserving = phi.properties().order_preserving;
    if order_preserving && !rhs.leq_within(&lhs, &opts.tolerance) {
        failures.push(format!(
            "one-sided bound violated: Φ(inf X) = {rhs} exceeds inf Φ(X) = {lhs}"
        ));
    }
    let scan_directed = directed.verdict.is_directed();
    if order_preserving && scan_directed != holds {
        failures.push(format!(
            "equivalence violated: interchange {} but subset scan says Φ-inf-directed = {}",
            if holds { "holds" } else { "fails" },
            scan_directed
        ));
    }
    let shortcut_agrees = directed.mode == ScanMode::Exhaustive && directed.shortcut_holds == scan_directed
        || directed.mode == ScanMode::Sampled;
    if order_preserving && !shortcut_agrees {
        failures.push("finite-family shortcut disagrees with the exhaustive subset scan".into());
    }
    if directed.mode == ScanMode::Sampled {
        notes.push(format!(
            "subset scan sampled {} of 2^{} - 1 subsets",
            directed.subsets_checked,
            x.len()
        ));
    }
    Ok(InterchangeReport {
        functional: phi.name().to_string(),
        lhs,
        rhs,
        phi_inf_directed: directed.verdict,
        scan: Some(directed.mode),
        shortcut_agrees: Some(shortcut_agrees),
        interchange_holds: if holds { HoldsVerdict::Holds } else { HoldsVerdict::Fails },
        sequence: None,
        notes,
        invariant_failures: failures,
    })
}
