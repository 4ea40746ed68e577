//! The integrable gap form of inf-directedness for real-valued families:
//! for every finite `X̃ ⊆ X`, `inf_{x∈X} ∫(x − inf X̃) ≤ 0`.
//!
//! The subtraction is only formed when every member is finite on the atoms
//! of positive weight, so no `∞ − ∞` convention is ever needed.

use serde::Serialize;

use super::{candidate_subsets, Family, InterchangeOptions, ScanMode};
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::integrals::lebesgue_extended;
use crate::lattice::FnClass;

#[derive(Clone, Debug, Serialize)]
pub struct GinerReport {
    pub integrably_inf_directed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    /// `inf_x ∫(x − inf X̃)` at the witness, or at the full family.
    pub gap: ExtReal,
    pub mode: ScanMode,
}

/// `x − y` on the support, `0` on null atoms.
fn support_difference(x: &FnClass, y: &FnClass) -> FnClass {
    let space = x.space();
    let values = (0..space.len())
        .map(|i| {
            if space.is_null_atom(i) {
                ExtReal::zero()
            } else {
                x.value(i).lower_add(&-y.value(i))
            }
        })
        .collect();
    FnClass::new(space.clone(), values).expect("aligned")
}

pub fn giner_gap_check(x: &Family, opts: &InterchangeOptions) -> Result<GinerReport> {
    if !x.members().iter().all(FnClass::is_finite_ae) {
        return Err(Error::NotApplicable(
            "the gap form needs members that are finite on every atom of positive weight".into(),
        ));
    }
    let (mode, subsets) = candidate_subsets(x.len(), opts)?;
    let mut gap_full = ExtReal::zero();
    for s in &subsets {
        let low = x.inf_of(s)?;
        let gap = x
            .members()
            .iter()
            .map(|m| lebesgue_extended(&support_difference(m, &low)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .expect("nonempty");
        if !gap.leq_within(&ExtReal::zero(), &opts.tolerance) {
            return Ok(GinerReport {
                integrably_inf_directed: false,
                witness: Some(s.clone()),
                gap,
                mode,
            });
        }
        if s.len() == x.len() {
            gap_full = gap;
        }
    }
    Ok(GinerReport {
        integrably_inf_directed: true,
        witness: None,
        gap: gap_full,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext_real::Scalar;
    use crate::functional::Functional;
    use crate::interchange::is_phi_inf_directed;
    use crate::measure::MeasureSpace;
    use crate::random;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pair_example() {
        let s = MeasureSpace::uniform(2, Scalar::one()).unwrap().into_shared();
        let x = Family::new(vec![
            FnClass::from_ints(s.clone(), &[0, 1]).unwrap(),
            FnClass::from_ints(s.clone(), &[1, 0]).unwrap(),
        ])
        .unwrap();
        let r = giner_gap_check(&x, &InterchangeOptions::default()).unwrap();
        assert!(!r.integrably_inf_directed);
        assert_eq!(r.gap, ExtReal::int(1));
        let y = Family::new(vec![FnClass::new(s, vec![ExtReal::NegInf, ExtReal::zero()]).unwrap()]).unwrap();
        assert!(matches!(giner_gap_check(&y, &InterchangeOptions::default()), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn agrees_with_direct_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let opts = InterchangeOptions::default();
        let phi = Functional::extended_lebesgue();
        for _ in 0..300 {
            let n = rng.random_range(1..=4);
            let s = random::space(&mut rng, n, true);
            let k = rng.random_range(1..=5);
            let members = (0..k).map(|_| random::finite_function(&mut rng, &s)).collect();
            let x = Family::new(members).unwrap();
            let g = giner_gap_check(&x, &opts).unwrap();
            let d = is_phi_inf_directed(&x, &phi, &opts).unwrap();
            assert_eq!(g.integrably_inf_directed, d.verdict.is_directed());
        }
    }
}
