//! Lebesgue, extended Lebesgue, outer/inner and Choquet integrals on atomic
//! spaces.
//!
//! Everything reduces to weighted sums `Σ μ(ω)·f(ω)` evaluated with
//! `0 × (±∞) = 0`, so values carried by null atoms never contribute.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext_real::{ExtReal, Scalar};
use crate::lattice::FnClass;
use crate::measure::{AtomSet, MeasureSpace};

/// Largest space for which a capacity is stored as a dense powerset table.
pub const MAX_TABLE_ATOMS: usize = 16;

/// `Σ μ(ω)·f(ω)` using `+∞`-absorbing addition. Callers ensure `f ≥ 0` on the
/// support; negative values on null atoms are multiplied by zero.
pub(crate) fn lebesgue_sum(f: &FnClass) -> ExtReal {
    let space = f.space();
    f.values()
        .iter()
        .zip(space.weights())
        .fold(ExtReal::zero(), |acc, (v, w)| acc.upper_add(&v.scalar_mul(w)))
}

/// Lebesgue integral of a μ-a.e. nonnegative function, in `[0, +∞]`.
pub fn lebesgue_nonneg(f: &FnClass) -> Result<ExtReal> {
    if let Some(i) = f.space().support().find(|&i| f.value(i).is_negative()) {
        return Err(Error::domain(format!(
            "lebesgue_nonneg: value {} on non-null atom {:?}",
            f.value(i),
            f.space().atoms()[i]
        )));
    }
    Ok(lebesgue_sum(f))
}

fn part_integrals(f: &FnClass) -> (ExtReal, ExtReal) {
    let (plus, minus) = f.pos_neg_parts();
    (lebesgue_sum(&plus), lebesgue_sum(&minus))
}

/// `∫f₊ + (−∫f₋)` for semi-integrable `f`.
pub fn lebesgue_extended(f: &FnClass) -> Result<ExtReal> {
    let (plus, minus) = part_integrals(f);
    plus.checked_add(&-minus).ok_or_else(|| {
        Error::domain(
            "function is not semi-integrable (both parts integrate to +inf); \
             use outer_integral or inner_integral",
        )
    })
}

/// Outer integral, `∫f₊ ∓ (−∫f₋)` with `+∞` absorbing. Total on `L⁰`.
pub fn outer_integral(f: &FnClass) -> ExtReal {
    let (plus, minus) = part_integrals(f);
    plus.upper_add(&-minus)
}

/// Inner integral, `∫f₊ ∔ (−∫f₋)` with `−∞` absorbing. Total on `L⁰`.
pub fn inner_integral(f: &FnClass) -> ExtReal {
    let (plus, minus) = part_integrals(f);
    plus.lower_add(&-minus)
}

/// A monotone set function with `c(∅) = 0`.
#[derive(Clone, Debug)]
pub struct Capacity {
    space: Arc<MeasureSpace>,
    kind: CapacityKind,
}

#[derive(Clone, Debug)]
enum CapacityKind {
    Table(HashMap<AtomSet, ExtReal>),
    /// `c(A) = (μ(A)/μ(Ω))^γ · μ(Ω)`
    Distortion { gamma: Scalar },
}

impl Capacity {
    /// Dense table over the powerset. `∅` may be omitted; every nonempty set
    /// must be present.
    pub fn table(space: Arc<MeasureSpace>, entries: Vec<(AtomSet, ExtReal)>) -> Result<Self> {
        let n = space.len();
        if n > MAX_TABLE_ATOMS {
            return Err(Error::input(format!(
                "table capacities support at most {MAX_TABLE_ATOMS} atoms, space has {n}"
            )));
        }
        let mut values = HashMap::with_capacity(1 << n);
        for (set, v) in entries {
            if set.universe_len() != n {
                return Err(Error::SpaceMismatch("capacity set over a different space".into()));
            }
            if values.insert(set.clone(), v).is_some() {
                return Err(Error::input(format!("capacity set {:?} given twice", set_label(&space, &set))));
            }
        }
        let empty = space.empty_set();
        match values.get(&empty) {
            Some(v) if !v.is_zero() => {
                return Err(Error::input(format!("capacity must vanish on the empty set, got {v}")))
            }
            Some(_) => {}
            None => {
                values.insert(empty, ExtReal::zero());
            }
        }
        for mask in 1..(1u64 << n) {
            let set = AtomSet::from_mask(n, mask);
            if !values.contains_key(&set) {
                return Err(Error::input(format!(
                    "capacity table is missing set {}",
                    set_label(&space, &set)
                )));
            }
        }
        let cap = Capacity {
            space,
            kind: CapacityKind::Table(values),
        };
        cap.validate()?;
        Ok(cap)
    }

    /// Tabulates `value` over the powerset and validates the result.
    pub fn from_fn(space: Arc<MeasureSpace>, value: impl Fn(&AtomSet) -> ExtReal) -> Result<Self> {
        let n = space.len();
        if n > MAX_TABLE_ATOMS {
            return Err(Error::input(format!(
                "table capacities support at most {MAX_TABLE_ATOMS} atoms"
            )));
        }
        let entries = (0..(1u64 << n))
            .map(|m| {
                let s = AtomSet::from_mask(n, m);
                let v = if m == 0 { ExtReal::zero() } else { value(&s) };
                (s, v)
            })
            .collect();
        Self::table(space, entries)
    }

    /// Power distortion of μ. `γ = 1` gives μ itself.
    pub fn distortion(space: Arc<MeasureSpace>, gamma: Scalar) -> Result<Self> {
        if !gamma.is_positive() {
            return Err(Error::input(format!(
                "distortion exponent must be positive, got {gamma}"
            )));
        }
        let cap = Capacity {
            space,
            kind: CapacityKind::Distortion { gamma },
        };
        if cap.space.len() <= MAX_TABLE_ATOMS {
            cap.validate()?;
        }
        Ok(cap)
    }

    pub fn from_measure(space: Arc<MeasureSpace>) -> Self {
        Capacity {
            space,
            kind: CapacityKind::Distortion { gamma: Scalar::one() },
        }
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    /// Always true: on a finite space every decreasing set sequence is
    /// eventually constant.
    pub fn is_continuous_from_above(&self) -> bool {
        true
    }

    pub fn value(&self, set: &AtomSet) -> Result<ExtReal> {
        if set.universe_len() != self.space.len() {
            return Err(Error::SpaceMismatch("set and capacity live on different spaces".into()));
        }
        match &self.kind {
            CapacityKind::Table(values) => Ok(values[set].clone()),
            CapacityKind::Distortion { gamma } => {
                let total = self.space.total_mass();
                let mass = self.space.measure(set)?;
                let mass = mass.as_finite().expect("finite measure");
                match mass.checked_div(&total) {
                    None => Ok(ExtReal::zero()),
                    Some(ratio) if ratio.is_zero() => Ok(ExtReal::zero()),
                    Some(ratio) => Ok(ExtReal::finite(&ratio.pow(gamma) * &total)),
                }
            }
        }
    }

    /// Checks `c(∅) = 0`, nonnegativity and monotonicity over the powerset.
    fn validate(&self) -> Result<()> {
        let n = self.space.len();
        for mask in 0..(1u64 << n) {
            let set = AtomSet::from_mask(n, mask);
            let v = self.value(&set)?;
            if v.is_negative() {
                return Err(Error::input(format!(
                    "capacity is negative on {}",
                    set_label(&self.space, &set)
                )));
            }
            for i in set.iter() {
                let mut smaller = set.clone();
                smaller.remove(i);
                if self.value(&smaller)? > v {
                    return Err(Error::input(format!(
                        "capacity is not monotone: c({}) > c({})",
                        set_label(&self.space, &smaller),
                        set_label(&self.space, &set)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `{a,b}` style label used by the JSON capacity format.
pub fn set_label(space: &MeasureSpace, set: &AtomSet) -> String {
    let ids: Vec<&str> = set.iter().map(|i| space.atoms()[i].as_str()).collect();
    format!("{{{}}}", ids.join(","))
}

/// Choquet integral `∫₀^∞ c(f > t) dt` of a μ-a.e. nonnegative function.
///
/// Level sets are taken over the atoms of positive weight, so the value only
/// depends on the class of `f`. With distinct finite levels
/// `0 = v₀ < v₁ < … < v_k`, the integrand is constant on each `[v_{i−1}, v_i)`,
/// giving `Σ (v_i − v_{i−1})·c(f > v_{i−1})`; atoms at `+∞` add a plateau that
/// contributes `+∞` exactly when `c(f = +∞) > 0`.
pub fn choquet(f: &FnClass, c: &Capacity) -> Result<ExtReal> {
    if !(Arc::ptr_eq(f.space(), c.space()) || **f.space() == **c.space()) {
        return Err(Error::SpaceMismatch("capacity and function live on different spaces".into()));
    }
    if !f.is_nonnegative_ae() {
        return Err(Error::domain("choquet integral needs a nonnegative function"));
    }
    let space = f.space();
    let support: Vec<usize> = space.support().collect();

    let mut levels: Vec<Scalar> = support
        .iter()
        .filter_map(|&i| f.value(i).as_finite())
        .filter(|v| v.is_positive())
        .cloned()
        .collect();
    levels.sort();
    levels.dedup();

    let above = |t: &Scalar| -> AtomSet {
        let mut set = space.empty_set();
        for &i in &support {
            if *f.value(i) > ExtReal::Finite(t.clone()) {
                set.insert(i);
            }
        }
        set
    };

    let mut total = ExtReal::zero();
    let mut prev = Scalar::zero();
    for v in &levels {
        let width = v - &prev;
        total = total.upper_add(&c.value(&above(&prev))?.scalar_mul(&width));
        prev = v.clone();
    }

    let mut at_infinity = space.empty_set();
    for &i in &support {
        if f.value(i).is_pos_inf() {
            at_infinity.insert(i);
        }
    }
    if !at_infinity.is_empty() && !c.value(&at_infinity)?.is_zero() {
        total = ExtReal::PosInf;
    }
    Ok(total)
}

/// `∫^C x dc = −∫^C (−x) dc` for μ-a.e. nonpositive `x`.
pub fn choquet_nonpositive(f: &FnClass, c: &Capacity) -> Result<ExtReal> {
    if !f.is_nonpositive_ae() {
        return Err(Error::domain(
            "choquet_nonpositive needs a nonpositive function; mixed signs are not supported",
        ));
    }
    Ok(-choquet(&f.neg(), c)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: ExtReal = ExtReal::PosInf;
    const M: ExtReal = ExtReal::NegInf;
    fn n(v: i64) -> ExtReal {
        ExtReal::int(v)
    }

    fn space(weights: &[i64]) -> Arc<MeasureSpace> {
        MeasureSpace::from_weights(weights.iter().map(|&w| Scalar::int(w)).collect())
            .unwrap()
            .into_shared()
    }

    fn f(s: &Arc<MeasureSpace>, v: Vec<ExtReal>) -> FnClass {
        FnClass::new(s.clone(), v).unwrap()
    }

    /// Supremum of `∫φ` over simple `0 ≤ φ ≤ f` whose levels are drawn from
    /// `{0, 1/q, ..., cap}`, with domination required off null atoms. Independent of the weighted-sum implementation.
    fn simple_sup(g: &FnClass, cap: i64, q: i64) -> Scalar {
        let space = g.space();
        let mut best = Scalar::zero();
        let levels: Vec<Scalar> = (0..=cap * q).map(|k| Scalar::ratio(k, q)).collect();
        let n = space.len();
        let mut idx = vec![0usize; n];
        loop {
            let phi: Vec<&Scalar> = idx.iter().map(|&k| &levels[k]).collect();
            let dominated = space
                .support()
                .all(|i| ExtReal::Finite(phi[i].clone()) <= *g.value(i));
            if dominated {
                let val = (0..n).fold(Scalar::zero(), |acc, i| &acc + &(space.weight(i) * phi[i]));
                best = best.max(val);
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return best;
                }
                idx[pos] += 1;
                if idx[pos] < levels.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn lebesgue_nonneg_examples_against_simple_oracle() {
        let s = space(&[1, 2]);
        let g = f(&s, vec![n(3), P]);
        assert_eq!(lebesgue_nonneg(&g).unwrap(), P);
        // the oracle grows without bound as the level cap grows
        let a = simple_sup(&g, 10, 1);
        let b = simple_sup(&g, 40, 1);
        assert_eq!(a, Scalar::int(3 + 2 * 10));
        assert_eq!(b, Scalar::int(3 + 2 * 40));

        let t = space(&[1, 0]);
        let g = f(&t, vec![n(3), P]);
        assert_eq!(lebesgue_nonneg(&g).unwrap(), n(3));
        assert_eq!(simple_sup(&g, 40, 1), Scalar::int(3));

        assert_eq!(lebesgue_nonneg(&f(&s, vec![n(0), n(0)])).unwrap(), n(0));
    }

    #[test]
    fn lebesgue_nonneg_matches_simple_sup_on_rational_grid() {
        let s = MeasureSpace::from_weights(vec![Scalar::ratio(1, 2), Scalar::int(1), Scalar::int(0)])
            .unwrap()
            .into_shared();
        let g = f(&s, vec![ExtReal::ratio(3, 2), ExtReal::ratio(1, 2), n(-4)]);
        let expected = simple_sup(&g, 2, 2);
        assert_eq!(lebesgue_nonneg(&g).unwrap(), ExtReal::Finite(expected));
    }

    #[test]
    fn lebesgue_nonneg_rejects_negative_on_support() {
        let s = space(&[1, 1]);
        assert!(matches!(lebesgue_nonneg(&f(&s, vec![n(-1), n(0)])), Err(Error::Domain(_))));
    }

    #[test]
    fn extended_examples() {
        let s = space(&[1, 1]);
        assert_eq!(lebesgue_extended(&f(&s, vec![n(5), M])).unwrap(), M);
        assert_eq!(lebesgue_extended(&f(&s, vec![n(1), n(-2)])).unwrap(), n(-1));
        assert!(matches!(lebesgue_extended(&f(&s, vec![M, P])), Err(Error::Domain(_))));
    }

    #[test]
    fn outer_inner_examples() {
        let s = space(&[1, 1]);
        assert_eq!(outer_integral(&f(&s, vec![P, M])), P);
        assert_eq!(outer_integral(&f(&s, vec![n(5), M])), M);
        assert_eq!(outer_integral(&f(&s, vec![n(0), n(0)])), n(0));
        assert_eq!(inner_integral(&f(&s, vec![P, M])), M);
        assert_eq!(inner_integral(&f(&s, vec![n(1), n(2)])), n(3));
        for v in [vec![P, M], vec![n(2), M], vec![n(-1), n(4)], vec![P, n(0)]] {
            let g = f(&s, v);
            assert_eq!(inner_integral(&g), -outer_integral(&g.neg()));
        }
    }

    fn ab_capacity() -> (Arc<MeasureSpace>, Capacity) {
        let s = MeasureSpace::new(vec!["a".into(), "b".into()], vec![Scalar::one(), Scalar::one()])
            .unwrap()
            .into_shared();
        let c = Capacity::table(
            s.clone(),
            vec![
                (s.atom_set(&["a"]).unwrap(), ExtReal::ratio(1, 2)),
                (s.atom_set(&["b"]).unwrap(), ExtReal::ratio(7, 10)),
                (s.full_set(), n(1)),
            ],
        )
        .unwrap();
        (s, c)
    }

    /// Left Riemann sum of `t ↦ c(f > t)` on `[0, top)` with step `1/steps_per_unit`.
    fn riemann(g: &FnClass, c: &Capacity, top: i64, steps_per_unit: i64) -> f64 {
        let h = 1.0 / steps_per_unit as f64;
        let mut acc = 0.0;
        for k in 0..top * steps_per_unit {
            let t = ExtReal::ratio(k, steps_per_unit);
            let mut set = g.space().empty_set();
            for i in g.space().support() {
                if *g.value(i) > t {
                    set.insert(i);
                }
            }
            acc += h * c.value(&set).unwrap().to_f64();
        }
        acc
    }

    #[test]
    fn choquet_two_atom_example() {
        let (s, c) = ab_capacity();
        let g = f(&s, vec![n(1), n(2)]);
        assert_eq!(choquet(&g, &c).unwrap(), ExtReal::ratio(17, 10));
        assert!((riemann(&g, &c, 3, 1000) - 1.7).abs() < 1e-9);
        assert_eq!(choquet(&f(&s, vec![n(1), n(1)]), &c).unwrap(), n(1));
        assert_eq!(choquet(&f(&s, vec![n(0), n(0)]), &c).unwrap(), n(0));
    }

    #[test]
    fn choquet_infinite_plateau() {
        let (s, c) = ab_capacity();
        assert_eq!(choquet(&f(&s, vec![P, n(1)]), &c).unwrap(), P);
        let zero_on_a = Capacity::table(
            s.clone(),
            vec![
                (s.atom_set(&["a"]).unwrap(), n(0)),
                (s.atom_set(&["b"]).unwrap(), n(1)),
                (s.full_set(), n(1)),
            ],
        )
        .unwrap();
        // c({f = +∞}) = 0, so the plateau contributes nothing
        assert_eq!(choquet(&f(&s, vec![P, n(2)]), &zero_on_a).unwrap(), n(2));
    }

    #[test]
    fn choquet_errors() {
        let (s, c) = ab_capacity();
        assert!(matches!(choquet(&f(&s, vec![n(-1), n(1)]), &c), Err(Error::Domain(_))));
        let other = space(&[1, 1, 1]);
        assert!(matches!(
            choquet(&f(&other, vec![n(1), n(1), n(1)]), &c),
            Err(Error::SpaceMismatch(_))
        ));
        assert_eq!(choquet_nonpositive(&f(&s, vec![n(-1), n(-2)]), &c).unwrap(), ExtReal::ratio(-17, 10));
        assert!(choquet_nonpositive(&f(&s, vec![n(-1), n(2)]), &c).is_err());
    }

    #[test]
    fn choquet_with_measure_is_lebesgue() {
        let s = space(&[1, 2, 0]);
        let c = Capacity::from_measure(s.clone());
        let g = f(&s, vec![n(3), n(1), n(9)]);
        assert_eq!(choquet(&g, &c).unwrap(), lebesgue_nonneg(&g).unwrap());
    }

    #[test]
    fn capacity_validation() {
        let (s, _) = ab_capacity();
        let not_monotone = Capacity::table(
            s.clone(),
            vec![
                (s.atom_set(&["a"]).unwrap(), n(2)),
                (s.atom_set(&["b"]).unwrap(), n(0)),
                (s.full_set(), n(1)),
            ],
        );
        assert!(not_monotone.is_err());
        let missing = Capacity::table(s.clone(), vec![(s.full_set(), n(1))]);
        assert!(missing.is_err());
        let nonzero_empty = Capacity::table(
            s.clone(),
            vec![
                (s.empty_set(), n(1)),
                (s.atom_set(&["a"]).unwrap(), n(1)),
                (s.atom_set(&["b"]).unwrap(), n(1)),
                (s.full_set(), n(1)),
            ],
        );
        assert!(nonzero_empty.is_err());
        assert!(Capacity::distortion(s.clone(), Scalar::int(-1)).is_err());
        let d = Capacity::distortion(s.clone(), Scalar::int(2)).unwrap();
        // μ(a)/μ(Ω) = 1/2, squared, times μ(Ω) = 2
        assert_eq!(d.value(&s.atom_set(&["a"]).unwrap()).unwrap(), ExtReal::ratio(1, 2));
        assert!(d.is_continuous_from_above());
    }
}
