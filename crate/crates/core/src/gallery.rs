//! Built-in worked examples, runnable by name.

use std::sync::Arc;

use serde::Serialize;

use crate::decomposable::{
    Integrand, Selection, SelectionSet, ShapiroReport, ShapiroScenario, DEFAULT_SELECTION_BUDGET,
};
use crate::error::{Error, Result};
use crate::ext_real::{ExtReal, Scalar};
use crate::functional::Functional;
use crate::integrals::Capacity;
use crate::interchange::{
    verify_interchange, verify_interchange_sequence, Family, InterchangeOptions, InterchangeReport, SequenceSpec,
};
use crate::lattice::FnClass;
use crate::measure::MeasureSpace;
use crate::scenario::{run_rw, RwCheckReport};

pub const NAMES: [&str; 6] = ["giner-pair", "chain", "example-2-6", "choquet-demo", "rw-demo", "shapiro-demo"];

/// Length of the literal truncation reported next to the sequence run.
pub const LITERAL_TRUNCATION: usize = 5;

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum GalleryReport {
    Interchange(InterchangeReport),
    Truncations {
        sequence: InterchangeReport,
        literal_prefix: usize,
        literal: InterchangeReport,
    },
    Selections {
        full_product: RwCheckReport,
        two_constants: RwCheckReport,
    },
    Shapiro {
        expectation: ShapiroReport,
        ess_sup: ShapiroReport,
    },
}

impl GalleryReport {
    pub fn invariant_failures(&self) -> Vec<String> {
        match self {
            GalleryReport::Interchange(r) => r.invariant_failures.clone(),
            GalleryReport::Truncations { sequence, literal, .. } => {
                let mut v = sequence.invariant_failures.clone();
                v.extend(literal.invariant_failures.iter().cloned());
                v
            }
            GalleryReport::Selections { full_product, two_constants } => {
                let mut v = full_product.invariant_failures();
                v.extend(two_constants.invariant_failures());
                v
            }
            GalleryReport::Shapiro { expectation, ess_sup } => {
                let mut v = expectation.invariant_failures.clone();
                v.extend(ess_sup.invariant_failures.iter().cloned());
                v
            }
        }
    }
}

fn pair_space() -> Arc<MeasureSpace> {
    MeasureSpace::new(vec!["a".into(), "b".into()], vec![Scalar::one(), Scalar::one()])
        .expect("valid")
        .into_shared()
}

/// `(0,1)` and `(1,0)` on two unit atoms: no member lies below both.
pub fn giner_pair() -> Family {
    let s = pair_space();
    Family::new(vec![
        FnClass::from_ints(s.clone(), &[0, 1]).expect("aligned"),
        FnClass::from_ints(s, &[1, 0]).expect("aligned"),
    ])
    .expect("nonempty")
}

/// A decreasing chain with an infinite top member.
pub fn chain() -> Family {
    let s = pair_space();
    Family::new(vec![
        FnClass::new(s.clone(), vec![ExtReal::PosInf, ExtReal::int(3)]).expect("aligned"),
        FnClass::from_ints(s.clone(), &[1, 2]).expect("aligned"),
        FnClass::from_ints(s, &[0, 0]).expect("aligned"),
    ])
    .expect("nonempty")
}

/// The first `n` bumps as a literal family.
pub fn truncated_bumps(n: usize) -> Result<Family> {
    Family::new(SequenceSpec::shifted_bumps(n)?.terms()?)
}

/// Three atoms with a non-additive capacity and a family that is not
/// inf-directed.
pub fn choquet_demo() -> (Family, Capacity) {
    let s = MeasureSpace::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![Scalar::one(); 3],
    )
    .expect("valid")
    .into_shared();
    let table = [
        (vec!["a"], ExtReal::ratio(1, 5)),
        (vec!["b"], ExtReal::ratio(3, 10)),
        (vec!["c"], ExtReal::ratio(1, 10)),
        (vec!["a", "b"], ExtReal::ratio(3, 5)),
        (vec!["a", "c"], ExtReal::ratio(2, 5)),
        (vec!["b", "c"], ExtReal::ratio(1, 2)),
        (vec!["a", "b", "c"], ExtReal::int(1)),
    ];
    let entries = table
        .into_iter()
        .map(|(ids, v)| (s.atom_set(&ids).expect("known atoms"), v))
        .collect();
    let c = Capacity::table(s.clone(), entries).expect("monotone");
    let x = Family::new(vec![
        FnClass::from_ints(s.clone(), &[2, 0, 1]).expect("aligned"),
        FnClass::from_ints(s.clone(), &[0, 2, 1]).expect("aligned"),
        FnClass::from_ints(s, &[1, 1, 3]).expect("aligned"),
    ])
    .expect("nonempty");
    (x, c)
}

/// `(u − target(ω))²` on controls `−2..=2`, targets `2` and `−1`.
pub fn squared_target() -> Integrand {
    let targets = [Scalar::int(2), Scalar::int(-1)];
    Integrand::from_fn(pair_space(), (-2..=2).map(Scalar::int).collect(), |i, v| {
        let d = v - &targets[i];
        ExtReal::Finite(&d * &d)
    })
    .expect("valid")
}

/// Each atom prefers a different control, and only constants are allowed.
pub fn two_constants() -> (Integrand, SelectionSet) {
    let f = Integrand::new(
        pair_space(),
        vec![vec![Scalar::zero()], vec![Scalar::one()]],
        vec![vec![ExtReal::int(0), ExtReal::int(1)], vec![ExtReal::int(1), ExtReal::int(0)]],
    )
    .expect("valid");
    let u = SelectionSet::explicit(2, 2, vec![vec![0, 0], vec![1, 1]]).expect("valid");
    (f, u)
}

/// Expectation of `u` over controls `0, 1, 1/2, ..., 1/n` on two atoms of
/// mass 1/2, with `u_k ≡ 1/(k+1)`.
pub fn shapiro_expectation(n: usize) -> ShapiroScenario {
    let s = MeasureSpace::uniform(2, Scalar::ratio(1, 2)).expect("valid").into_shared();
    let mut controls = vec![Scalar::zero()];
    controls.extend((1..=n as i64).map(|k| Scalar::ratio(1, k)));
    let f = Integrand::from_fn(s, controls, |_, v| ExtReal::Finite(v.clone())).expect("valid");
    ShapiroScenario {
        phi: Functional::extended_lebesgue(),
        p: Scalar::int(2),
        integrand: f,
        selections: SelectionSet::full(2, n + 1),
        sequence: Arc::new(move |k| vec![(k + 1).min(n); 2]),
        prefix_len: n,
        declared_minimum: None,
        budget: DEFAULT_SELECTION_BUDGET,
    }
}

/// Essential supremum of a unit bump moving to atoms of ever smaller mass:
/// the bumps converge in norm but their suprema stay at 1.
pub fn shapiro_ess_sup(n: usize) -> ShapiroScenario {
    let n = n.clamp(2, 60);
    let mut weights: Vec<Scalar> = (1..n).map(|k| Scalar::ratio(1, 1i64 << k)).collect();
    weights.push(Scalar::ratio(1, 1i64 << (n - 1)));
    let s = MeasureSpace::from_weights(weights).expect("valid").into_shared();
    let f = Integrand::from_fn(s, (0..=n as i64).map(Scalar::int).collect(), |i, v| {
        if *v == Scalar::int(i as i64 + 1) {
            ExtReal::int(1)
        } else {
            ExtReal::zero()
        }
    })
    .expect("valid");
    let seq: Vec<Selection> = (1..=n).map(|k| vec![k; n]).collect();
    ShapiroScenario {
        phi: Functional::ess_sup(),
        p: Scalar::one(),
        integrand: f,
        selections: SelectionSet::explicit(n, n + 1, seq).expect("valid"),
        sequence: Arc::new(move |k| vec![(k + 1).min(n); n]),
        prefix_len: n,
        declared_minimum: None,
        budget: DEFAULT_SELECTION_BUDGET,
    }
}

#[derive(Clone, Debug)]
pub struct GalleryOptions {
    pub prefix: Option<usize>,
    pub interchange: InterchangeOptions,
}

pub fn run(name: &str, g: &GalleryOptions) -> Result<GalleryReport> {
    let opts = &g.interchange;
    let lebesgue = Functional::extended_lebesgue();
    match name {
        "giner-pair" => Ok(GalleryReport::Interchange(verify_interchange(&giner_pair(), &lebesgue, opts)?)),
        "chain" => Ok(GalleryReport::Interchange(verify_interchange(&chain(), &lebesgue, opts)?)),
        "example-2-6" => {
            let mut spec = SequenceSpec::shifted_bumps(g.prefix.unwrap_or(100))?;
            if let Some(t) = &opts.divergence_threshold {
                spec = spec.with_threshold(t.clone())?;
            }
            let sequence = verify_interchange_sequence(&spec, &lebesgue, opts)?;
            let literal = verify_interchange(&truncated_bumps(LITERAL_TRUNCATION)?, &lebesgue, opts)?;
            Ok(GalleryReport::Truncations {
                sequence,
                literal_prefix: LITERAL_TRUNCATION,
                literal,
            })
        }
        "choquet-demo" => {
            let (x, c) = choquet_demo();
            Ok(GalleryReport::Interchange(verify_interchange(&x, &Functional::choquet(c), opts)?))
        }
        "rw-demo" => {
            let f = squared_target();
            let full = SelectionSet::full(2, f.n_controls());
            let (g2, u2) = two_constants();
            Ok(GalleryReport::Selections {
                full_product: run_rw(&f, &full, DEFAULT_SELECTION_BUDGET)?,
                two_constants: run_rw(&g2, &u2, DEFAULT_SELECTION_BUDGET)?,
            })
        }
        "shapiro-demo" => {
            let n = g.prefix.unwrap_or(12).max(2);
            Ok(GalleryReport::Shapiro {
                expectation: crate::decomposable::verify_shapiro(&shapiro_expectation(n), opts)?,
                ess_sup: crate::decomposable::verify_shapiro(&shapiro_ess_sup(n), opts)?,
            })
        }
        other => Err(Error::input(format!(
            "unknown gallery entry {other:?}; known entries: {}",
            NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interchange::{DirectedVerdict, HoldsVerdict, LimitEstimate};

    fn opts(prefix: Option<usize>) -> GalleryOptions {
        GalleryOptions {
            prefix,
            interchange: InterchangeOptions::default(),
        }
    }

    #[test]
    fn every_entry_runs_cleanly() {
        for name in NAMES {
            let r = run(name, &opts(None)).unwrap();
            assert!(r.invariant_failures().is_empty(), "{name}: {:?}", r.invariant_failures());
        }
        assert!(run("nope", &opts(None)).is_err());
    }

    #[test]
    fn bumps_sequence_and_truncation() {
        let GalleryReport::Truncations { sequence, literal, .. } = run("example-2-6", &opts(Some(100))).unwrap() else {
            panic!("wrong shape");
        };
        let d = sequence.sequence.unwrap();
        assert_eq!(d.prefix_lhs, ExtReal::int(-100));
        assert_eq!(d.lhs_limit, LimitEstimate::Diverging);
        assert_eq!(d.rhs_limit, LimitEstimate::Diverging);
        assert_eq!(sequence.interchange_holds, HoldsVerdict::HoldsInLimit);
        assert_eq!((literal.lhs, literal.rhs), (ExtReal::int(-5), ExtReal::int(-15)));
        assert!(matches!(literal.phi_inf_directed, DirectedVerdict::No { .. }));
    }

    #[test]
    fn choquet_demo_verdict() {
        let GalleryReport::Interchange(r) = run("choquet-demo", &opts(None)).unwrap() else {
            panic!("wrong shape");
        };
        // members integrate to 0.6, 0.8, 1.2; the infimum (0,0,1) to 0.1
        assert_eq!(r.lhs, ExtReal::ratio(3, 5));
        assert_eq!(r.rhs, ExtReal::ratio(1, 10));
        assert_eq!(r.interchange_holds, HoldsVerdict::Fails);
    }
}
