//! Lazily generated sequences, prefix limits and divergence detection.
//!
//! A genuinely infinite family is only ever seen through a finite prefix.
//! Limits of monotone prefixes are classified by [`analyze_prefix`]: exact when
//! the prefix hits `−∞` or stabilizes, `−∞` when it crosses the divergence
//! threshold or keeps falling without slowing down, and otherwise an
//! extrapolated value from the model `a + b/(n+1)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{hypothesis_notes, DirectedVerdict, Family, HoldsVerdict, InterchangeOptions, InterchangeReport};
use crate::error::{Error, Result};
use crate::ext_real::{ExtReal, Scalar};
use crate::functional::Functional;
use crate::lattice::FnClass;
use crate::measure::MeasureSpace;

pub const DEFAULT_DIVERGENCE_THRESHOLD: i64 = 1_000_000_000;

/// Shortest prefix for which the descent-rate test is trusted.
const MIN_RATE_PREFIX: usize = 8;

pub type Generator = Arc<dyn Fn(usize) -> Result<FnClass> + Send + Sync>;

/// Terms `x_0, x_1, ...` on one space, evaluated on `[0, prefix_len)`.
#[derive(Clone)]
pub struct SequenceSpec {
    label: String,
    space: Arc<MeasureSpace>,
    generator: Generator,
    prefix_len: usize,
    declared_limit: Option<FnClass>,
    divergence_threshold: Scalar,
}

impl fmt::Debug for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceSpec")
            .field("label", &self.label)
            .field("prefix_len", &self.prefix_len)
            .field("declared_limit", &self.declared_limit)
            .field("divergence_threshold", &self.divergence_threshold)
            .finish()
    }
}

impl SequenceSpec {
    pub fn new(
        label: impl Into<String>,
        space: Arc<MeasureSpace>,
        prefix_len: usize,
        generator: impl Fn(usize) -> Result<FnClass> + Send + Sync + 'static,
    ) -> Result<Self> {
        if prefix_len == 0 {
            return Err(Error::input("prefix length must be at least 1"));
        }
        Ok(SequenceSpec {
            label: label.into(),
            space,
            generator: Arc::new(generator),
            prefix_len,
            declared_limit: None,
            divergence_threshold: Scalar::int(DEFAULT_DIVERGENCE_THRESHOLD),
        })
    }

    pub fn with_limit(mut self, limit: FnClass) -> Result<Self> {
        if limit.space() != &self.space && **limit.space() != *self.space {
            return Err(Error::SpaceMismatch("declared limit lives on another space".into()));
        }
        self.declared_limit = Some(limit);
        Ok(self)
    }

    pub fn with_threshold(mut self, threshold: Scalar) -> Result<Self> {
        if !threshold.is_positive() {
            return Err(Error::input(format!(
                "divergence threshold must be positive, got {threshold}"
            )));
        }
        self.divergence_threshold = threshold;
        Ok(self)
    }

    pub fn with_prefix(mut self, prefix_len: usize) -> Result<Self> {
        if prefix_len == 0 {
            return Err(Error::input("prefix length must be at least 1"));
        }
        self.prefix_len = prefix_len;
        Ok(self)
    }

    /// A finite family read as an eventually constant sequence. The prefix is
    /// long enough for the tail to stabilize, and the limit is the family's
    /// infimum.
    pub fn from_family(x: &Family) -> Self {
        let members: Arc<Vec<FnClass>> = Arc::new(x.members().to_vec());
        let k = members.len();
        let space = members[0].space().clone();
        let inf = x.inf();
        let m = members.clone();
        SequenceSpec::new("finite family", space, 2 * k + 2, move |n| Ok(m[n.min(k - 1)].clone()))
            .expect("positive prefix")
            .with_limit(inf)
            .expect("same space")
    }

    /// `x_n = f` for every `n`.
    pub fn constant(f: FnClass, prefix_len: usize) -> Result<Self> {
        let space = f.space().clone();
        let g = f.clone();
        SequenceSpec::new("constant", space, prefix_len, move |_| Ok(g.clone()))?.with_limit(f)
    }

    /// `x_n = f + 1/(n+1)`, decreasing to `f`.
    pub fn shifted(f: FnClass, prefix_len: usize) -> Result<Self> {
        let space = f.space().clone();
        let g = f.clone();
        SequenceSpec::new("f + 1/(n+1)", space, prefix_len, move |n| {
            let shift = ExtReal::ratio(1, n as i64 + 1);
            Ok(g.map(|v| v.lower_add(&shift)))
        })?
        .with_limit(f)
    }

    /// `x_n = −n·1_{(n,n+1)}` for `n = 1..=prefix`, on the unit intervals of
    /// the real line truncated after the last one. The rest of the line
    /// carries zero on every term and is left out.
    pub fn shifted_bumps(prefix: usize) -> Result<Self> {
        if prefix == 0 {
            return Err(Error::input("prefix length must be at least 1"));
        }
        let atoms = (1..=prefix).map(|k| format!("({k},{})", k + 1)).collect();
        let space = MeasureSpace::new(atoms, vec![Scalar::one(); prefix])?
            .with_truncation(format!(
                "Lebesgue measure on the real line, unit intervals (n,n+1) for n <= {prefix}"
            ))
            .into_shared();
        let s = space.clone();
        SequenceSpec::new("-n on (n,n+1)", space, prefix, move |i| {
            let values = (0..s.len())
                .map(|k| if k == i { ExtReal::int(-(i as i64 + 1)) } else { ExtReal::zero() })
                .collect();
            FnClass::new(s.clone(), values)
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn declared_limit(&self) -> Option<&FnClass> {
        self.declared_limit.as_ref()
    }

    pub fn divergence_threshold(&self) -> &Scalar {
        &self.divergence_threshold
    }

    pub fn term(&self, n: usize) -> Result<FnClass> {
        let t = (self.generator)(n)?;
        if t.space() != &self.space && **t.space() != *self.space {
            return Err(Error::SpaceMismatch(format!("term {n} lives on another space")));
        }
        Ok(t)
    }

    pub fn terms(&self) -> Result<Vec<FnClass>> {
        (0..self.prefix_len).map(|n| self.term(n)).collect()
    }

    fn threshold(&self, opts: &InterchangeOptions) -> Scalar {
        opts.divergence_threshold
            .clone()
            .unwrap_or_else(|| self.divergence_threshold.clone())
    }
}

/// What a monotone prefix says about its limit.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LimitEstimate {
    /// The prefix reached `−∞` or stabilized; the limit is exact.
    Exact(ExtReal),
    Diverging,
    /// Extrapolated from `a + b/(n+1)` through the middle and last terms.
    Converging(ExtReal),
    Inconclusive,
}

impl LimitEstimate {
    pub fn value(&self) -> Option<ExtReal> {
        match self {
            LimitEstimate::Exact(v) | LimitEstimate::Converging(v) => Some(v.clone()),
            LimitEstimate::Diverging => Some(ExtReal::NegInf),
            LimitEstimate::Inconclusive => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LimitEstimate::Exact(_))
    }
}

/// Classifies the limit of a prefix that should be nonincreasing.
pub fn analyze_prefix(values: &[ExtReal], threshold: &Scalar) -> LimitEstimate {
    if values.is_empty() || values.windows(2).any(|w| w[1] > w[0]) {
        return LimitEstimate::Inconclusive;
    }
    let last = values.last().expect("nonempty");
    if last.is_neg_inf() {
        return LimitEstimate::Exact(ExtReal::NegInf);
    }
    if *last <= ExtReal::Finite(-threshold) {
        return LimitEstimate::Diverging;
    }
    let Some(start) = values.iter().position(ExtReal::is_finite) else {
        return LimitEstimate::Exact(last.clone());
    };
    let l = values.len() - 1;
    let span = l - start;
    let m = start + span / 2;
    let (s0, sm, sl) = (&values[start], &values[m], &values[l]);
    let drop = |a: &ExtReal, b: &ExtReal| a.finite_distance(b).expect("finite tail");
    if span + 1 >= MIN_RATE_PREFIX && drop(s0, sl).is_positive() {
        // per-step descent over the last two quarters; early transients
        // stay in the first half
        let q = m + (l - m) / 2;
        let head = drop(sm, &values[q]);
        let tail = drop(&values[q], sl);
        let (hl, tl) = (Scalar::int((q - m) as i64), Scalar::int((l - q) as i64));
        if head.is_positive() && &tail * &hl >= &head * &tl {
            return LimitEstimate::Diverging;
        }
    }
    if sm == sl {
        return LimitEstimate::Exact(sl.clone());
    }
    // a + b/(n+1) through (m, s_m) and (l, s_l)
    let (Some(a), Some(b)) = (sm.as_finite(), sl.as_finite()) else {
        return LimitEstimate::Inconclusive;
    };
    let mp = Scalar::int(m as i64 + 1);
    let lp = Scalar::int(l as i64 + 1);
    let num = &(b * &lp) - &(a * &mp);
    match num.checked_div(&Scalar::int((l - m) as i64)) {
        Some(limit) => LimitEstimate::Converging(ExtReal::finite(limit)),
        None => LimitEstimate::Inconclusive,
    }
}

fn running_min(values: &[ExtReal]) -> Vec<ExtReal> {
    let mut out: Vec<ExtReal> = Vec::with_capacity(values.len());
    for v in values {
        let next = match out.last() {
            Some(prev) => prev.clone().min(v.clone()),
            None => v.clone(),
        };
        out.push(next);
    }
    out
}

fn prefix_infima(terms: &[FnClass]) -> Result<Vec<FnClass>> {
    let mut out: Vec<FnClass> = Vec::with_capacity(terms.len());
    for t in terms {
        let next = match out.last() {
            Some(prev) => prev.min(t)?,
            None => t.clone(),
        };
        out.push(next);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceDetails {
    pub label: String,
    pub prefix_len: usize,
    /// `min_{k<N} Φ(x_k)`
    pub prefix_lhs: ExtReal,
    /// `Φ(min_{k<N} x_k)`
    pub prefix_rhs: ExtReal,
    pub lhs_limit: LimitEstimate,
    pub rhs_limit: LimitEstimate,
    pub divergence_threshold: Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_of: Option<String>,
}

/// The interchange check along a generated prefix.
pub fn verify_interchange_sequence(
    spec: &SequenceSpec,
    phi: &Functional,
    opts: &InterchangeOptions,
) -> Result<InterchangeReport> {
    let threshold = spec.threshold(opts);
    let terms = spec.terms()?;
    let values: Vec<ExtReal> = terms.iter().map(|t| phi.eval(t)).collect::<Result<_>>()?;
    let lhs_prefix = running_min(&values);
    let infima = prefix_infima(&terms)?;
    let rhs_prefix: Vec<ExtReal> = infima.iter().map(|t| phi.eval(t)).collect::<Result<_>>()?;

    let mut notes = hypothesis_notes(phi, opts);
    let lhs_limit = analyze_prefix(&lhs_prefix, &threshold);
    let rhs_limit = match spec.declared_limit() {
        Some(limit) => {
            let witnessed = infima.last().expect("nonempty") == limit;
            if !witnessed {
                notes.push(
                    "hypothesis unverified: the declared limit is not the infimum of the generated prefix"
                        .into(),
                );
            }
            LimitEstimate::Exact(phi.eval(limit)?)
        }
        None => {
            if !phi.properties().sequentially_inf_continuous {
                notes.push(format!(
                    "{} is not declared sequentially-inf continuous; the right-hand side is the limit of Φ along prefix infima",
                    phi.name()
                ));
            }
            analyze_prefix(&rhs_prefix, &threshold)
        }
    };
    match &lhs_limit {
        LimitEstimate::Diverging => notes.push(format!(
            "left-hand prefix crossed the divergence test; reported as -inf (threshold {threshold})"
        )),
        LimitEstimate::Converging(_) => notes.push("left-hand limit extrapolated from the prefix".into()),
        _ => {}
    }
    match &rhs_limit {
        LimitEstimate::Diverging => notes.push("right-hand prefix diverges; reported as -inf".into()),
        LimitEstimate::Converging(_) => notes.push("right-hand limit extrapolated from the prefix".into()),
        _ => {}
    }

    let tol = &opts.tolerance;
    let exact = lhs_limit.is_exact() && rhs_limit.is_exact();
    let (lhs, rhs, holds, directed) = match (lhs_limit.value(), rhs_limit.value()) {
        (Some(lhs), Some(rhs)) => {
            let equal = lhs.approx_eq(&rhs, tol);
            let holds = match (equal, exact) {
                (true, true) => HoldsVerdict::Holds,
                (true, false) => HoldsVerdict::HoldsInLimit,
                (false, _) => HoldsVerdict::Fails,
            };
            let directed = if matches!(lhs_limit, LimitEstimate::Diverging) || lhs.is_neg_inf() {
                DirectedVerdict::Diverging
            } else if lhs.leq_within(&rhs, tol) {
                DirectedVerdict::Yes
            } else {
                let n = rhs_prefix.iter().position(|b| !lhs.leq_within(b, tol));
                if n.is_none() {
                    notes.push("Φ-inf-directedness fails only in the limit; no finite witness within the prefix".into());
                }
                DirectedVerdict::No {
                    witness: n.map(|n| (0..=n).collect()).unwrap_or_default(),
                }
            };
            (lhs, rhs, holds, directed)
        }
        _ => {
            notes.push("prefix is not monotone and does not stabilize; no verdict".into());
            let lhs = lhs_prefix.last().expect("nonempty").clone();
            let rhs = rhs_prefix.last().expect("nonempty").clone();
            (lhs, rhs, HoldsVerdict::Inconclusive, DirectedVerdict::Yes)
        }
    };

    let mut failures = Vec::new();
    if phi.properties().order_preserving && holds != HoldsVerdict::Inconclusive {
        if exact && !rhs.leq_within(&lhs, tol) {
            failures.push(format!("one-sided bound violated: Φ(inf X) = {rhs} exceeds inf Φ(X) = {lhs}"));
        }
        if directed.is_directed() != holds.holds() {
            failures.push(format!(
                "equivalence violated: interchange {} but Φ-inf-directed = {}",
                if holds.holds() { "holds" } else { "fails" },
                directed.is_directed()
            ));
        }
    }

    Ok(InterchangeReport {
        functional: phi.name().to_string(),
        lhs,
        rhs,
        phi_inf_directed: directed,
        scan: None,
        shortcut_agrees: None,
        interchange_holds: holds,
        sequence: Some(SequenceDetails {
            label: spec.label.clone(),
            prefix_len: spec.prefix_len,
            prefix_lhs: lhs_prefix.last().expect("nonempty").clone(),
            prefix_rhs: rhs_prefix.last().expect("nonempty").clone(),
            lhs_limit,
            rhs_limit,
            divergence_threshold: threshold,
            truncation_of: spec.space.truncation_of().map(str::to_string),
        }),
        notes,
        invariant_failures: failures,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuityVerdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Decided from the prefix values alone.
    Prefix,
    /// Decided from an extrapolated limit.
    Extrapolated,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    pub functional: String,
    /// `inf_n Φ(x_n)` as estimated from the prefix.
    pub lhs: LimitEstimate,
    /// `Φ(limit)`
    pub rhs: ExtReal,
    pub verdict: ContinuityVerdict,
    pub basis: Basis,
    pub equality: bool,
    pub notes: Vec<String>,
}

/// Checks `inf_n Φ(x_n) ≤ Φ(inf_n x_n)` along a nonincreasing sequence.
pub fn check_seq_inf_continuity(
    phi: &Functional,
    spec: &SequenceSpec,
    opts: &InterchangeOptions,
) -> Result<ContinuityReport> {
    let terms = spec.terms()?;
    for (n, w) in terms.windows(2).enumerate() {
        if !w[1].mu_leq(&w[0])? {
            return Err(Error::Precondition(format!(
                "sequence is not nonincreasing: term {} is not below term {n}",
                n + 1
            )));
        }
    }
    let mut notes = Vec::new();
    let limit = match spec.declared_limit() {
        Some(l) => l.clone(),
        None => {
            notes.push("no declared limit: the last prefix term stands in for it".into());
            terms.last().expect("nonempty").clone()
        }
    };
    let rhs = phi.eval(&limit)?;
    let values: Vec<ExtReal> = terms.iter().map(|t| phi.eval(t)).collect::<Result<_>>()?;
    let lhs = analyze_prefix(&values, &spec.threshold(opts));
    let tol = &opts.tolerance;
    let last = values.last().expect("nonempty");

    // inf_n Φ(x_n) never exceeds the last computed value
    let (verdict, basis, equality) = if last.leq_within(&rhs, tol) {
        (ContinuityVerdict::Holds, Basis::Prefix, last.approx_eq(&rhs, tol))
    } else {
        match &lhs {
            LimitEstimate::Exact(v) => (
                if v.leq_within(&rhs, tol) { ContinuityVerdict::Holds } else { ContinuityVerdict::Fails },
                Basis::Prefix,
                v.approx_eq(&rhs, tol),
            ),
            LimitEstimate::Diverging => (ContinuityVerdict::Holds, Basis::Extrapolated, rhs.is_neg_inf()),
            LimitEstimate::Converging(v) => (
                if v.leq_within(&rhs, tol) { ContinuityVerdict::Holds } else { ContinuityVerdict::Fails },
                Basis::Extrapolated,
                v.approx_eq(&rhs, tol),
            ),
            LimitEstimate::Inconclusive => (ContinuityVerdict::Inconclusive, Basis::Prefix, false),
        }
    };
    Ok(ContinuityReport {
        functional: phi.name().to_string(),
        lhs,
        rhs,
        verdict,
        basis,
        equality,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interchange::verify_interchange;
    use crate::random;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn threshold() -> Scalar {
        Scalar::int(DEFAULT_DIVERGENCE_THRESHOLD)
    }

    fn ints(v: &[i64]) -> Vec<ExtReal> {
        v.iter().map(|&x| ExtReal::int(x)).collect()
    }

    #[test]
    fn detector_cases() {
        let linear: Vec<ExtReal> = (1..=100).map(|n| ExtReal::int(-n)).collect();
        assert_eq!(analyze_prefix(&linear, &threshold()), LimitEstimate::Diverging);
        let quadratic: Vec<ExtReal> = (1..=100).map(|n| ExtReal::int(-n * (n + 1) / 2)).collect();
        assert_eq!(analyze_prefix(&quadratic, &threshold()), LimitEstimate::Diverging);
        // a steep start before settling into a linear descent
        let settled: Vec<ExtReal> = (1..=100).map(|n| ExtReal::int(-n - 40 * n.min(3))).collect();
        assert_eq!(analyze_prefix(&settled, &threshold()), LimitEstimate::Diverging);
        assert_eq!(
            analyze_prefix(&ints(&[3, 2, 1, 1, 1, 1, 1, 1, 1, 1]), &threshold()),
            LimitEstimate::Exact(ExtReal::int(1))
        );
        assert_eq!(
            analyze_prefix(&[ExtReal::int(0), ExtReal::NegInf], &threshold()),
            LimitEstimate::Exact(ExtReal::NegInf)
        );
        assert_eq!(analyze_prefix(&ints(&[1, 2]), &threshold()), LimitEstimate::Inconclusive);
        assert_eq!(analyze_prefix(&ints(&[0, -5]), &Scalar::int(5)), LimitEstimate::Diverging);
        let harmonic: Vec<ExtReal> = (0..20).map(|n| ExtReal::ratio(7 * (n + 2), n + 1)).collect();
        // 7 + 7/(n+1) extrapolates to exactly 7
        assert_eq!(
            analyze_prefix(&harmonic, &threshold()),
            LimitEstimate::Converging(ExtReal::int(7))
        );
    }

    #[test]
    fn shifted_bumps_at_prefix_100() {
        let spec = SequenceSpec::shifted_bumps(100).unwrap();
        let r = verify_interchange_sequence(&spec, &Functional::extended_lebesgue(), &InterchangeOptions::default())
            .unwrap();
        let seq = r.sequence.as_ref().unwrap();
        assert_eq!(seq.prefix_lhs, ExtReal::int(-100));
        assert_eq!(seq.prefix_rhs, ExtReal::int(-5050));
        assert_eq!(seq.lhs_limit, LimitEstimate::Diverging);
        assert_eq!(seq.rhs_limit, LimitEstimate::Diverging);
        assert_eq!(r.lhs, ExtReal::NegInf);
        assert_eq!(r.rhs, ExtReal::NegInf);
        assert_eq!(r.interchange_holds, HoldsVerdict::HoldsInLimit);
        assert_eq!(r.phi_inf_directed, DirectedVerdict::Diverging);
        assert!(r.is_consistent());
    }

    #[test]
    fn literal_truncation_is_not_directed() {
        let spec = SequenceSpec::shifted_bumps(5).unwrap();
        let x = Family::new(spec.terms().unwrap()).unwrap();
        let r = verify_interchange(&x, &Functional::extended_lebesgue(), &InterchangeOptions::default()).unwrap();
        assert_eq!(r.lhs, ExtReal::int(-5));
        assert_eq!(r.rhs, ExtReal::int(-15));
        assert!(!r.phi_inf_directed.is_directed());
        assert!(!crate::interchange::is_inf_directed(&x).directed);
    }

    #[test]
    fn constant_sequence() {
        let s = MeasureSpace::uniform(2, Scalar::one()).unwrap().into_shared();
        let f = FnClass::from_ints(s, &[2, -1]).unwrap();
        let spec = SequenceSpec::constant(f, 5).unwrap();
        let phi = Functional::extended_lebesgue();
        let r = verify_interchange_sequence(&spec, &phi, &InterchangeOptions::default()).unwrap();
        assert_eq!(r.lhs, ExtReal::int(1));
        assert_eq!(r.rhs, ExtReal::int(1));
        assert_eq!(r.interchange_holds, HoldsVerdict::Holds);
        let c = check_seq_inf_continuity(&phi, &spec, &InterchangeOptions::default()).unwrap();
        assert_eq!(c.verdict, ContinuityVerdict::Holds);
        assert!(c.equality);
    }

    #[test]
    fn family_as_sequence_matches_family_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let opts = InterchangeOptions::default();
        for _ in 0..200 {
            let n = rng.random_range(1..=4);
            let s = random::space(&mut rng, n, true);
            let k = rng.random_range(1..=5);
            let x = Family::new(random::family(&mut rng, &s, crate::functional::Domain::PlusCone, k)).unwrap();
            for phi in [Functional::extended_lebesgue(), Functional::ess_sup()] {
                let a = verify_interchange(&x, &phi, &opts).unwrap();
                let b = verify_interchange_sequence(&SequenceSpec::from_family(&x), &phi, &opts).unwrap();
                assert_eq!(a.lhs, b.lhs);
                assert_eq!(a.rhs, b.rhs);
                assert_eq!(a.interchange_holds, b.interchange_holds);
                assert_eq!(a.phi_inf_directed.is_directed(), b.phi_inf_directed.is_directed());
                assert!(b.is_consistent(), "{:?}", b.invariant_failures);
                assert!(!b.notes.iter().any(|n| n.contains("unverified")));
            }
        }
    }

    #[test]
    fn monotone_convergence_for_shifted_sequences() {
        let s = MeasureSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![Scalar::one(), Scalar::ratio(1, 2), Scalar::int(0)],
        )
        .unwrap()
        .into_shared();
        let f = FnClass::from_ints(s.clone(), &[3, -1, 4]).unwrap();
        let spec = SequenceSpec::shifted(f, 30).unwrap();
        let opts = InterchangeOptions::default();
        for phi in [Functional::extended_lebesgue(), Functional::ess_sup()] {
            let c = check_seq_inf_continuity(&phi, &spec, &opts).unwrap();
            assert_eq!(c.verdict, ContinuityVerdict::Holds, "{}", phi.name());
            assert!(c.equality, "{}", phi.name());
        }
        let g = FnClass::new(s, vec![ExtReal::NegInf, ExtReal::int(1), ExtReal::int(0)]).unwrap();
        let spec = SequenceSpec::shifted(g, 30).unwrap();
        let c = check_seq_inf_continuity(&Functional::extended_lebesgue(), &spec, &opts).unwrap();
        assert_eq!(c.lhs, LimitEstimate::Exact(ExtReal::NegInf));
        assert_eq!(c.rhs, ExtReal::NegInf);
    }

    #[test]
    fn increasing_sequence_is_rejected() {
        let s = MeasureSpace::uniform(1, Scalar::one()).unwrap().into_shared();
        let t = s.clone();
        let spec = SequenceSpec::new("up", s, 4, move |n| FnClass::from_ints(t.clone(), &[n as i64])).unwrap();
        assert!(matches!(
            check_seq_inf_continuity(&Functional::ess_sup(), &spec, &InterchangeOptions::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn undeclared_limit_not_witnessed_is_flagged() {
        let s = MeasureSpace::uniform(1, Scalar::one()).unwrap().into_shared();
        let f = FnClass::from_ints(s.clone(), &[0]).unwrap();
        let spec = SequenceSpec::constant(f, 3)
            .unwrap()
            .with_limit(FnClass::from_ints(s, &[-1]).unwrap())
            .unwrap();
        let r = verify_interchange_sequence(&spec, &Functional::ess_sup(), &InterchangeOptions::default()).unwrap();
        assert!(r.notes.iter().any(|n| n.contains("hypothesis unverified")));
    }
}
