//! Integrand tables on `Ω × V`, selection sets, decomposability, and the
//! interchange of minimization over selections with the outer integral.
//!
//! On a finite space every table is a normal integrand and the bounded
//! patching clause of decomposability reduces to arbitrary `V`-valued
//! patches. Selections are compared modulo null atoms throughout.

mod shapiro;

pub use shapiro::{verify_shapiro, CheckStatus, HypothesisCheck, SelectionGenerator, ShapiroReport, ShapiroScenario};

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext_real::{ExtReal, Scalar};
use crate::integrals::outer_integral;
use crate::interchange::HoldsVerdict;
use crate::lattice::FnClass;
use crate::measure::MeasureSpace;

/// Default cap on `|U|` for brute-force enumeration.
pub const DEFAULT_SELECTION_BUDGET: u128 = 1_000_000;

/// A control index per atom.
pub type Selection = Vec<usize>;

/// `f(ω, v)` for every atom and control.
#[derive(Clone, Debug)]
pub struct Integrand {
    space: Arc<MeasureSpace>,
    controls: Vec<Vec<Scalar>>,
    table: Vec<Vec<ExtReal>>,
}

impl Integrand {
    /// `table[atom][control]`.
    pub fn new(space: Arc<MeasureSpace>, controls: Vec<Vec<Scalar>>, table: Vec<Vec<ExtReal>>) -> Result<Self> {
        if controls.is_empty() {
            return Err(Error::input("an integrand needs at least one control"));
        }
        let dim = controls[0].len();
        if controls.iter().any(|c| c.len() != dim) {
            return Err(Error::input("controls must all have the same dimension"));
        }
        for (i, a) in controls.iter().enumerate() {
            if controls[..i].contains(a) {
                return Err(Error::input(format!("control {i} is listed twice")));
            }
        }
        if table.len() != space.len() {
            return Err(Error::input(format!(
                "integrand table has {} rows for {} atoms",
                table.len(),
                space.len()
            )));
        }
        if let Some(i) = table.iter().position(|row| row.len() != controls.len()) {
            return Err(Error::input(format!(
                "row {i} of the integrand table has {} entries for {} controls",
                table[i].len(),
                controls.len()
            )));
        }
        Ok(Integrand { space, controls, table })
    }

    /// Scalar controls with `f` given as a closure of `(atom, control)`.
    pub fn from_fn(
        space: Arc<MeasureSpace>,
        controls: Vec<Scalar>,
        f: impl Fn(usize, &Scalar) -> ExtReal,
    ) -> Result<Self> {
        let table = (0..space.len())
            .map(|i| controls.iter().map(|v| f(i, v)).collect())
            .collect();
        Self::new(space, controls.into_iter().map(|v| vec![v]).collect(), table)
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn controls(&self) -> &[Vec<Scalar>] {
        &self.controls
    }

    pub fn n_controls(&self) -> usize {
        self.controls.len()
    }

    pub fn value(&self, atom: usize, control: usize) -> &ExtReal {
        &self.table[atom][control]
    }

    fn check_selection(&self, u: &Selection) -> Result<()> {
        if u.len() != self.space.len() || u.iter().any(|&c| c >= self.controls.len()) {
            return Err(Error::input(format!("selection {u:?} does not fit the integrand")));
        }
        Ok(())
    }

    /// `G(u) = f(·, u(·))`
    pub fn apply(&self, u: &Selection) -> Result<FnClass> {
        self.check_selection(u)?;
        let values = u.iter().enumerate().map(|(i, &c)| self.table[i][c].clone()).collect();
        FnClass::new(self.space.clone(), values)
    }

    /// `G♭(ω) = min_v f(ω, v)`
    pub fn pointwise_min(&self) -> FnClass {
        let values = self
            .table
            .iter()
            .map(|row| row.iter().min().expect("nonempty").clone())
            .collect();
        FnClass::new(self.space.clone(), values).expect("aligned")
    }

    /// Controls attaining the minimum at `atom`.
    pub fn argmin_controls(&self, atom: usize) -> Vec<usize> {
        let row = &self.table[atom];
        let m = row.iter().min().expect("nonempty");
        (0..row.len()).filter(|&c| row[c] == *m).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum SetKind {
    Explicit(Vec<Selection>),
    /// Admissible controls per atom.
    Product(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionSet {
    n_atoms: usize,
    n_controls: usize,
    kind: SetKind,
}

impl SelectionSet {
    pub fn explicit(n_atoms: usize, n_controls: usize, selections: Vec<Selection>) -> Result<Self> {
        if selections.is_empty() {
            return Err(Error::input("a selection set must be nonempty"));
        }
        for u in &selections {
            if u.len() != n_atoms || u.iter().any(|&c| c >= n_controls) {
                return Err(Error::input(format!("selection {u:?} does not map atoms into controls")));
            }
        }
        Ok(SelectionSet {
            n_atoms,
            n_controls,
            kind: SetKind::Explicit(selections),
        })
    }

    pub fn product(n_controls: usize, admissible: Vec<Vec<usize>>) -> Result<Self> {
        let mut admissible = admissible;
        for (i, s) in admissible.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || s.iter().any(|&c| c >= n_controls) {
                return Err(Error::input(format!("admissible controls at atom {i} are empty or out of range")));
            }
        }
        Ok(SelectionSet {
            n_atoms: admissible.len(),
            n_controls,
            kind: SetKind::Product(admissible),
        })
    }

    /// `V^Ω`
    pub fn full(n_atoms: usize, n_controls: usize) -> Self {
        Self::product(n_controls, vec![(0..n_controls).collect(); n_atoms]).expect("nonempty controls")
    }

    pub fn is_product(&self) -> bool {
        matches!(self.kind, SetKind::Product(_))
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn n_controls(&self) -> usize {
        self.n_controls
    }

    /// Number of listed selections (with multiplicity for explicit sets).
    pub fn count(&self) -> u128 {
        match &self.kind {
            SetKind::Explicit(v) => v.len() as u128,
            SetKind::Product(p) => p
                .iter()
                .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
                .unwrap_or(u128::MAX),
        }
    }

    pub fn check_budget(&self, budget: u128) -> Result<()> {
        let needed = self.count();
        if needed > budget {
            return Err(Error::Budget { needed, budget });
        }
        Ok(())
    }

    /// All selections. Callers check the budget first.
    pub fn enumerate(&self) -> Vec<Selection> {
        match &self.kind {
            SetKind::Explicit(v) => v.clone(),
            SetKind::Product(p) => {
                let mut out = Vec::new();
                let mut idx = vec![0usize; p.len()];
                loop {
                    out.push(idx.iter().enumerate().map(|(i, &k)| p[i][k]).collect());
                    let mut pos = 0;
                    loop {
                        if pos == p.len() {
                            return out;
                        }
                        idx[pos] += 1;
                        if idx[pos] < p[pos].len() {
                            break;
                        }
                        idx[pos] = 0;
                        pos += 1;
                    }
                }
            }
        }
    }

    pub fn contains(&self, u: &Selection) -> bool {
        match &self.kind {
            SetKind::Explicit(v) => v.contains(u),
            SetKind::Product(p) => u.len() == p.len() && u.iter().zip(p).all(|(c, s)| s.contains(c)),
        }
    }

    /// Controls used at each atom.
    pub fn projections(&self) -> Vec<Vec<usize>> {
        match &self.kind {
            SetKind::Product(p) => p.clone(),
            SetKind::Explicit(v) => (0..self.n_atoms)
                .map(|i| {
                    let mut s: Vec<usize> = v.iter().map(|u| u[i]).collect();
                    s.sort_unstable();
                    s.dedup();
                    s
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecompositionWitness {
    /// `u` on `set`, `v` elsewhere, is missing from the set.
    Patch {
        u: Selection,
        v: Selection,
        set: Vec<String>,
        patched: Selection,
    },
    /// Control `control` is never used at `atom`.
    MissingControl { atom: String, control: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub decomposable: bool,
    /// Closed under `u·1_A + v·1_{Aᶜ}` for members `u, v` and sets `A`.
    pub patch_closed: bool,
    /// Equal to the product of its per-atom projections.
    pub projection_product_equal: bool,
    /// Every control is admissible at every atom of positive weight.
    pub covers_controls: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DecompositionWitness>,
    pub invariant_failures: Vec<String>,
}

fn restrict(u: &Selection, support: &[usize]) -> Vec<usize> {
    support.iter().map(|&i| u[i]).collect()
}

/// Decomposability modulo null atoms. The set is decomposable when it is
/// closed under patching and every control is admissible on the support,
/// since a patch may take any value of `V` on any set.
pub fn is_decomposable(u: &SelectionSet, space: &MeasureSpace, budget: u128) -> Result<DecompositionReport> {
    if space.len() != u.n_atoms {
        return Err(Error::SpaceMismatch("selection set and space disagree on the atoms".into()));
    }
    let support: Vec<usize> = space.support().collect();
    let projections = u.projections();
    let mut witness = None;

    let mut covers_controls = true;
    'cover: for &i in &support {
        for c in 0..u.n_controls {
            if !projections[i].contains(&c) {
                covers_controls = false;
                witness = Some(DecompositionWitness::MissingControl {
                    atom: space.atoms()[i].clone(),
                    control: c,
                });
                break 'cover;
            }
        }
    }

    let (patch_closed, projection_product_equal) = match &u.kind {
        SetKind::Product(_) => (true, true),
        SetKind::Explicit(list) => {
            let classes: Vec<Vec<usize>> = {
                let mut seen = HashSet::new();
                list.iter()
                    .map(|s| restrict(s, &support))
                    .filter(|s| seen.insert(s.clone()))
                    .collect()
            };
            let members: HashSet<Vec<usize>> = classes.iter().cloned().collect();
            let product_size = support
                .iter()
                .try_fold(1u128, |acc, &i| acc.checked_mul(projections[i].len() as u128))
                .unwrap_or(u128::MAX);
            let equal = product_size == classes.len() as u128;

            let k = support.len();
            let cost = (classes.len() as u128).pow(2).saturating_mul(1u128 << k.min(100));
            if cost > budget.saturating_mul(16) {
                return Err(Error::Budget { needed: cost, budget: budget.saturating_mul(16) });
            }
            let mut closed = true;
            'outer: for a in &classes {
                for b in &classes {
                    for mask in 1u64..(1u64 << k) {
                        let patched: Vec<usize> =
                            (0..k).map(|j| if mask >> j & 1 == 1 { a[j] } else { b[j] }).collect();
                        if !members.contains(&patched) {
                            closed = false;
                            let set = (0..k)
                                .filter(|j| mask >> j & 1 == 1)
                                .map(|j| space.atoms()[support[j]].clone())
                                .collect();
                            // lift back to a full selection using `b` on null atoms
                            let full_b = list.iter().find(|s| restrict(s, &support) == *b).expect("member");
                            let full_a = list.iter().find(|s| restrict(s, &support) == *a).expect("member");
                            let mut lifted = full_b.clone();
                            for (j, &i) in support.iter().enumerate() {
                                lifted[i] = patched[j];
                            }
                            if witness.is_none() || covers_controls {
                                witness = Some(DecompositionWitness::Patch {
                                    u: full_a.clone(),
                                    v: full_b.clone(),
                                    set,
                                    patched: lifted,
                                });
                            }
                            break 'outer;
                        }
                    }
                }
            }
            (closed, equal)
        }
    };

    let mut invariant_failures = Vec::new();
    if patch_closed != projection_product_equal {
        invariant_failures.push(format!(
            "patch closure ({patch_closed}) disagrees with the projection-product test ({projection_product_equal})"
        ));
    }
    Ok(DecompositionReport {
        decomposable: patch_closed && covers_controls,
        patch_closed,
        projection_product_equal,
        covers_controls,
        witness,
        invariant_failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RwReport {
    /// `min_{u∈U} ∫* f(ω, u(ω)) dμ`
    pub lhs: ExtReal,
    /// `∫* min_v f(ω, v) dμ`
    pub rhs: ExtReal,
    pub interchange_holds: HoldsVerdict,
    pub decomposable: bool,
    pub selections_enumerated: u128,
    /// A selection attaining `lhs`.
    pub minimizer: Selection,
    pub notes: Vec<String>,
    pub invariant_failures: Vec<String>,
}

impl RwReport {
    pub fn is_consistent(&self) -> bool {
        self.invariant_failures.is_empty()
    }
}

fn check_shapes(f: &Integrand, u: &SelectionSet) -> Result<()> {
    if u.n_atoms != f.space.len() || u.n_controls != f.n_controls() {
        return Err(Error::SpaceMismatch(format!(
            "selection set is over {} atoms and {} controls, integrand over {} and {}",
            u.n_atoms,
            u.n_controls,
            f.space.len(),
            f.n_controls()
        )));
    }
    Ok(())
}

/// Brute-force comparison of `min_u ∫* G(u)` against `∫* G♭`.
pub fn verify_rw_interchange(f: &Integrand, u: &SelectionSet, budget: u128) -> Result<RwReport> {
    check_shapes(f, u)?;
    u.check_budget(budget)?;
    let selections = u.enumerate();
    let images: Vec<FnClass> = selections.iter().map(|s| f.apply(s)).collect::<Result<_>>()?;
    if !images.iter().any(|g| g.classify().in_plus()) {
        return Err(Error::Precondition(
            "no selection u has f(·, u(·)) with integrable positive part".into(),
        ));
    }
    let values: Vec<ExtReal> = images.iter().map(outer_integral).collect();
    let (best, lhs) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, v)| (i, v.clone()))
        .expect("nonempty");
    let gflat = f.pointwise_min();
    let rhs = outer_integral(&gflat);
    let decomposition = is_decomposable(u, &f.space, budget)?;

    let mut notes = Vec::new();
    let mut failures = decomposition.invariant_failures.clone();
    if images.iter().any(|g| !gflat.mu_leq(g).expect("same space")) {
        failures.push("pointwise minimum is not below some G(u)".into());
    }
    let equal = lhs == rhs;
    if decomposition.decomposable {
        if !equal {
            failures.push(format!("decomposable set but lhs {lhs} differs from rhs {rhs}"));
        }
    } else {
        let mut note = "hypothesis violated: the selection set is not decomposable".to_string();
        if lhs > rhs {
            note.push_str(", inequality strict");
        }
        notes.push(note);
    }
    if rhs > lhs {
        failures.push(format!("rhs {rhs} exceeds lhs {lhs}"));
    }
    Ok(RwReport {
        lhs,
        rhs,
        interchange_holds: if equal { HoldsVerdict::Holds } else { HoldsVerdict::Fails },
        decomposable: decomposition.decomposable,
        selections_enumerated: selections.len() as u128,
        minimizer: selections[best].clone(),
        notes,
        invariant_failures: failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ArgminReport {
    pub common_value: ExtReal,
    /// Selections minimizing the integral.
    pub argmin: Vec<Selection>,
    /// Selections that minimize `f(ω, ·)` on every atom of positive weight.
    pub pointwise_argmin: Vec<Selection>,
    /// Selections on which the two tests disagree.
    pub mismatches: Vec<Selection>,
    pub characterization_holds: bool,
    pub notes: Vec<String>,
}

/// Checks that a selection minimizes the integral exactly when it picks a
/// pointwise minimizer on every atom of positive weight.
pub fn verify_rw_argmin(f: &Integrand, u: &SelectionSet, budget: u128) -> Result<ArgminReport> {
    let rw = verify_rw_interchange(f, u, budget)?;
    if !rw.interchange_holds.holds() {
        return Err(Error::NotApplicable(format!(
            "lhs {} and rhs {} differ, so there is no common value",
            rw.lhs, rw.rhs
        )));
    }
    if !rw.lhs.is_finite() {
        return Err(Error::NotApplicable(format!(
            "characterization not applicable: the common value is {}",
            rw.lhs
        )));
    }
    let space = f.space();
    let pointwise: Vec<Vec<usize>> = (0..space.len()).map(|i| f.argmin_controls(i)).collect();
    let mut report = ArgminReport {
        common_value: rw.lhs.clone(),
        argmin: Vec::new(),
        pointwise_argmin: Vec::new(),
        mismatches: Vec::new(),
        characterization_holds: true,
        notes: rw.notes,
    };
    for s in u.enumerate() {
        let in_argmin = outer_integral(&f.apply(&s)?) == rw.lhs;
        let in_pointwise = space.support().all(|i| pointwise[i].contains(&s[i]));
        if in_argmin {
            report.argmin.push(s.clone());
        }
        if in_pointwise {
            report.pointwise_argmin.push(s.clone());
        }
        if in_argmin != in_pointwise {
            report.mismatches.push(s);
        }
    }
    report.characterization_holds = report.mismatches.is_empty();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(n: usize) -> Arc<MeasureSpace> {
        MeasureSpace::uniform(n, Scalar::one()).unwrap().into_shared()
    }

    fn linear(space: Arc<MeasureSpace>) -> Integrand {
        Integrand::from_fn(space, vec![Scalar::zero(), Scalar::one()], |_, v| ExtReal::Finite(v.clone())).unwrap()
    }

    #[test]
    fn decomposability_examples() {
        let s = unit(2);
        let full = SelectionSet::full(2, 2);
        assert!(is_decomposable(&full, &s, DEFAULT_SELECTION_BUDGET).unwrap().decomposable);

        let constants = SelectionSet::explicit(2, 2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        let r = is_decomposable(&constants, &s, DEFAULT_SELECTION_BUDGET).unwrap();
        assert!(!r.decomposable && !r.patch_closed && !r.projection_product_equal);
        match r.witness {
            Some(DecompositionWitness::Patch { patched, .. }) => assert!(patched == vec![0, 1] || patched == vec![1, 0]),
            other => panic!("unexpected witness {other:?}"),
        }

        let listed = SelectionSet::explicit(2, 2, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        let r = is_decomposable(&listed, &s, DEFAULT_SELECTION_BUDGET).unwrap();
        assert!(r.decomposable && r.projection_product_equal);

        let partial = SelectionSet::product(2, vec![vec![0], vec![0, 1]]).unwrap();
        let r = is_decomposable(&partial, &s, DEFAULT_SELECTION_BUDGET).unwrap();
        assert!(r.patch_closed && !r.covers_controls && !r.decomposable);
    }

    #[test]
    fn null_atoms_are_ignored() {
        let s = MeasureSpace::from_weights(vec![Scalar::one(), Scalar::zero()]).unwrap().into_shared();
        let u = SelectionSet::explicit(2, 2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        let r = is_decomposable(&u, &s, DEFAULT_SELECTION_BUDGET).unwrap();
        assert!(r.decomposable, "{r:?}");
    }

    #[test]
    fn rw_examples() {
        let s = unit(2);
        let r = verify_rw_interchange(&linear(s.clone()), &SelectionSet::full(2, 2), DEFAULT_SELECTION_BUDGET).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (ExtReal::int(0), ExtReal::int(0)));
        assert!(r.is_consistent());

        let targets = [Scalar::int(2), Scalar::int(-1)];
        let sq = Integrand::from_fn(s.clone(), (-2..=2).map(Scalar::int).collect(), |i, v| {
            let d = v - &targets[i];
            ExtReal::Finite(&d * &d)
        })
        .unwrap();
        let r = verify_rw_interchange(&sq, &SelectionSet::full(2, 5), DEFAULT_SELECTION_BUDGET).unwrap();
        assert_eq!(r.lhs, ExtReal::int(0));
        assert_eq!(r.rhs, ExtReal::int(0));
        assert_eq!(r.minimizer, vec![4, 1]);

        // rewards mixing: each atom prefers a different control
        let mix = Integrand::new(
            s,
            vec![vec![Scalar::zero()], vec![Scalar::one()]],
            vec![vec![ExtReal::int(0), ExtReal::int(1)], vec![ExtReal::int(1), ExtReal::int(0)]],
        )
        .unwrap();
        let constants = SelectionSet::explicit(2, 2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        let r = verify_rw_interchange(&mix, &constants, DEFAULT_SELECTION_BUDGET).unwrap();
        assert!(r.lhs > r.rhs);
        assert!(r.notes.iter().any(|n| n.contains("hypothesis violated") && n.contains("strict")));
        assert!(r.is_consistent());
    }

    #[test]
    fn rw_errors() {
        let s = unit(3);
        let f = Integrand::from_fn(s.clone(), (0..10).map(Scalar::int).collect(), |_, v| ExtReal::Finite(v.clone())).unwrap();
        assert!(matches!(
            verify_rw_interchange(&f, &SelectionSet::full(3, 10), 999),
            Err(Error::Budget { needed: 1000, budget: 999 })
        ));
        let inf = Integrand::from_fn(s, vec![Scalar::zero()], |_, _| ExtReal::PosInf).unwrap();
        assert!(matches!(
            verify_rw_interchange(&inf, &SelectionSet::full(3, 1), DEFAULT_SELECTION_BUDGET),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn argmin_examples() {
        let s = unit(2);
        let r = verify_rw_argmin(&linear(s.clone()), &SelectionSet::full(2, 2), DEFAULT_SELECTION_BUDGET).unwrap();
        assert_eq!(r.argmin, vec![vec![0, 0]]);
        assert!(r.characterization_holds);

        let two = Integrand::new(
            s,
            vec![vec![Scalar::zero()], vec![Scalar::one()], vec![Scalar::int(2)]],
            vec![
                vec![ExtReal::int(0), ExtReal::int(0), ExtReal::int(3)],
                vec![ExtReal::int(5), ExtReal::int(1), ExtReal::int(1)],
            ],
        )
        .unwrap();
        let r = verify_rw_argmin(&two, &SelectionSet::full(2, 3), DEFAULT_SELECTION_BUDGET).unwrap();
        assert_eq!(r.argmin.len(), 4);
        assert_eq!(r.argmin, r.pointwise_argmin);

        let t = MeasureSpace::from_weights(vec![Scalar::one(), Scalar::zero()]).unwrap().into_shared();
        let r = verify_rw_argmin(&linear(t), &SelectionSet::full(2, 2), DEFAULT_SELECTION_BUDGET).unwrap();
        assert_eq!(r.argmin.len(), 2);
        assert!(r.characterization_holds);

        let neg = Integrand::from_fn(unit(1), vec![Scalar::zero()], |_, _| ExtReal::NegInf).unwrap();
        assert!(matches!(
            verify_rw_argmin(&neg, &SelectionSet::full(1, 1), DEFAULT_SELECTION_BUDGET),
            Err(Error::NotApplicable(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn explicit_decomposability_matches_projection_product(
            n in 1usize..=3,
            v in 1usize..=3,
            picks in proptest::collection::vec(any::<u32>(), 1..12),
            null in any::<bool>(),
        ) {
            let mut w = vec![Scalar::one(); n];
            if null && n > 1 {
                w[0] = Scalar::zero();
            }
            let s = MeasureSpace::from_weights(w).unwrap();
            let sels: Vec<Selection> = picks
                .iter()
                .map(|p| (0..n).map(|i| (*p as usize >> (2 * i)) % v).collect())
                .collect();
            let u = SelectionSet::explicit(n, v, sels).unwrap();
            let r = is_decomposable(&u, &s, DEFAULT_SELECTION_BUDGET).unwrap();
            prop_assert!(r.invariant_failures.is_empty(), "{:?}", r.invariant_failures);
        }
    }
}
