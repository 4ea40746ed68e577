//! Seeded instance generators over small value grids.
//!
//! Every draw goes through a caller-supplied RNG so that campaigns are
//! reproducible from a single seed.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ext_real::{ExtReal, Scalar};
use crate::functional::Domain;
use crate::integrals::Capacity;
use crate::lattice::{pointwise_inf, FnClass};
use crate::measure::{AtomSet, MeasureSpace};

const WEIGHTS: [(i64, i64); 5] = [(1, 2), (1, 1), (1, 1), (2, 1), (3, 1)];

/// Finite grid values `{-3, ..., 3} ∪ {±1/2}`.
pub fn finite_value<R: Rng + ?Sized>(rng: &mut R) -> ExtReal {
    if rng.random_bool(0.2) {
        ExtReal::ratio(if rng.random_bool(0.5) { 1 } else { -1 }, 2)
    } else {
        ExtReal::int(rng.random_range(-3..=3))
    }
}

/// A grid value; each infinity appears with probability about 1/10.
pub fn grid_value<R: Rng + ?Sized>(rng: &mut R) -> ExtReal {
    match rng.random_range(0..10) {
        0 => ExtReal::NegInf,
        1 => ExtReal::PosInf,
        _ => finite_value(rng),
    }
}

fn nonneg_value<R: Rng + ?Sized>(rng: &mut R) -> ExtReal {
    match rng.random_range(0..12) {
        0 => ExtReal::PosInf,
        1 => ExtReal::ratio(1, 2),
        k => ExtReal::int((k as i64 - 2) % 4),
    }
}

/// A space of `n` atoms. With `allow_null`, some weights may be zero, but at
/// least one atom always carries mass.
pub fn space<R: Rng + ?Sized>(rng: &mut R, n: usize, allow_null: bool) -> Arc<MeasureSpace> {
    let mut weights: Vec<Scalar> = (0..n)
        .map(|_| {
            if allow_null && rng.random_bool(0.15) {
                Scalar::zero()
            } else {
                let (p, q) = WEIGHTS[rng.random_range(0..WEIGHTS.len())];
                Scalar::ratio(p, q)
            }
        })
        .collect();
    if weights.iter().all(Scalar::is_zero) {
        let i = rng.random_range(0..n);
        weights[i] = Scalar::one();
    }
    MeasureSpace::from_weights(weights).expect("valid weights").into_shared()
}

/// A function whose class lies in `domain`; values on null atoms are
/// unconstrained.
pub fn function_in<R: Rng + ?Sized>(rng: &mut R, space: &Arc<MeasureSpace>, domain: Domain) -> FnClass {
    let domain = match domain {
        Domain::SemiIntegrable if rng.random_bool(0.5) => Domain::PlusCone,
        Domain::SemiIntegrable => Domain::MinusCone,
        d => d,
    };
    let values = (0..space.len())
        .map(|i| {
            if space.is_null_atom(i) {
                return grid_value(rng);
            }
            loop {
                let v = match domain {
                    Domain::Nonnegative => nonneg_value(rng),
                    _ => grid_value(rng),
                };
                let ok = match domain {
                    Domain::PlusCone => !v.is_pos_inf(),
                    Domain::MinusCone => !v.is_neg_inf(),
                    _ => true,
                };
                if ok {
                    break v;
                }
            }
        })
        .collect();
    FnClass::new(space.clone(), values).expect("aligned")
}

/// A finite-valued function (no infinities anywhere).
pub fn finite_function<R: Rng + ?Sized>(rng: &mut R, space: &Arc<MeasureSpace>) -> FnClass {
    let values = (0..space.len()).map(|_| finite_value(rng)).collect();
    FnClass::new(space.clone(), values).expect("aligned")
}

/// Some `g` with `f ≤ g` μ-a.e.; null atoms are redrawn freely.
pub fn dominating<R: Rng + ?Sized>(rng: &mut R, f: &FnClass) -> FnClass {
    let space = f.space();
    let values = (0..space.len())
        .map(|i| {
            if space.is_null_atom(i) {
                return grid_value(rng);
            }
            let bump = match rng.random_range(0..7) {
                0 | 1 => ExtReal::zero(),
                2 => ExtReal::ratio(1, 2),
                3 => ExtReal::int(1),
                4 => ExtReal::int(2),
                5 => ExtReal::int(5),
                _ => ExtReal::PosInf,
            };
            f.value(i).upper_add(&bump)
        })
        .collect();
    FnClass::new(space.clone(), values).expect("aligned")
}

pub fn family<R: Rng + ?Sized>(
    rng: &mut R,
    space: &Arc<MeasureSpace>,
    domain: Domain,
    k: usize,
) -> Vec<FnClass> {
    (0..k).map(|_| function_in(rng, space, domain)).collect()
}

/// A shuffled chain `x₁ ≥ x₂ ≥ … ≥ x_k` inside `domain`.
pub fn chain<R: Rng + ?Sized>(
    rng: &mut R,
    space: &Arc<MeasureSpace>,
    domain: Domain,
    k: usize,
) -> Vec<FnClass> {
    let mut members = vec![function_in(rng, space, domain)];
    while members.len() < k {
        let last = members.last().expect("nonempty");
        let next = (0..16)
            .map(|_| dominating(rng, last))
            .find(|g| domain.contains(g))
            .unwrap_or_else(|| last.clone());
        members.push(next);
    }
    members.shuffle(rng);
    members
}

/// Closes `seed` under pairwise minima: every nonempty subset's infimum is
/// added, which makes the result inf-directed.
pub fn min_closure(seed: &[FnClass]) -> Vec<FnClass> {
    let n = seed.len();
    let mut out: Vec<FnClass> = Vec::new();
    for mask in 1u64..(1 << n) {
        let subset: Vec<FnClass> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| seed[i].clone())
            .collect();
        let m = pointwise_inf(&subset).expect("nonempty");
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// A random monotone capacity built from nonnegative increments, so that
/// `c(A) ≥ c(A \ {i})` holds by construction.
pub fn capacity<R: Rng + ?Sized>(rng: &mut R, space: &Arc<MeasureSpace>) -> Capacity {
    let n = space.len();
    let mut values = vec![ExtReal::zero(); 1 << n];
    for mask in 1usize..(1 << n) {
        let floor = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| values[mask & !(1 << i)].clone())
            .max()
            .expect("nonempty");
        let inc = match rng.random_range(0..6) {
            0 => ExtReal::zero(),
            1 => ExtReal::ratio(1, 4),
            2 => ExtReal::ratio(1, 2),
            3 => ExtReal::ratio(7, 10),
            _ => ExtReal::int(1),
        };
        values[mask] = floor.lower_add(&inc);
    }
    Capacity::from_fn(space.clone(), |a: &AtomSet| values[a.mask() as usize].clone())
        .expect("monotone by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.random_range(1..=5);
            let s = space(&mut rng, n, true);
            assert!(s.support().next().is_some());
            for d in [Domain::All, Domain::Nonnegative, Domain::PlusCone, Domain::MinusCone, Domain::SemiIntegrable] {
                let f = function_in(&mut rng, &s, d);
                assert!(d.contains(&f));
                assert!(f.mu_leq(&dominating(&mut rng, &f)).unwrap());
            }
            let c = chain(&mut rng, &s, Domain::PlusCone, 4);
            for a in &c {
                for b in &c {
                    assert!(a.mu_leq(b).unwrap() || b.mu_leq(a).unwrap());
                }
            }
            let _ = capacity(&mut rng, &s);
        }
    }
}
