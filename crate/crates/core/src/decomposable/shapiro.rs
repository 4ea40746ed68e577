//! Interchange for an order-preserving functional on `L^p` over a
//! probability space, given a minimizing sequence of selections that
//! converges in norm to the pointwise minimum.

use std::sync::Arc;

use serde::Serialize;

use super::{check_shapes, Integrand, Selection, SelectionSet};
use crate::error::{Error, Result};
use crate::ext_real::{ExtReal, Scalar};
use crate::functional::Functional;
use crate::interchange::{analyze_prefix, LimitEstimate, DEFAULT_DIVERGENCE_THRESHOLD};
use crate::interchange::{HoldsVerdict, InterchangeOptions};
use crate::lattice::FnClass;

pub type SelectionGenerator = Arc<dyn Fn(usize) -> Selection + Send + Sync>;

#[derive(Clone)]
pub struct ShapiroScenario {
    pub phi: Functional,
    /// Exponent in `[1, ∞)`.
    pub p: Scalar,
    pub integrand: Integrand,
    pub selections: SelectionSet,
    /// `n ↦ u_n`, read on `0..prefix_len`.
    pub sequence: SelectionGenerator,
    pub prefix_len: usize,
    /// Overrides the computed pointwise minimum when set.
    pub declared_minimum: Option<FnClass>,
    pub budget: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Holds,
    Fails,
    Unverified,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapiroReport {
    pub functional: String,
    pub p: Scalar,
    /// `min_{u∈U} Φ(f(·, u(·)))`
    pub lhs: ExtReal,
    /// `Φ(min_v f(·, v))`
    pub rhs: ExtReal,
    pub conclusion_holds: HoldsVerdict,
    pub hypotheses: Vec<HypothesisCheck>,
    /// `‖G(u_n) − G♭‖_p` along the prefix.
    pub norm_distances: Vec<ExtReal>,
    pub norm_limit: LimitEstimate,
    /// `Φ(G(u_n))` along the prefix.
    pub phi_along_sequence: Vec<ExtReal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub liminf_phi: Option<ExtReal>,
    pub selections_enumerated: u128,
    pub notes: Vec<String>,
    pub invariant_failures: Vec<String>,
}

impl ShapiroReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.status == CheckStatus::Holds)
    }

    pub fn hypothesis_failures(&self) -> Vec<&HypothesisCheck> {
        self.hypotheses.iter().filter(|h| h.status != CheckStatus::Holds).collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.invariant_failures.is_empty()
    }
}

fn check(name: &'static str, ok: bool, detail: impl Into<String>) -> HypothesisCheck {
    HypothesisCheck {
        name,
        status: if ok { CheckStatus::Holds } else { CheckStatus::Fails },
        detail: detail.into(),
    }
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

fn is_exact(v: &ExtReal) -> bool {
    v.as_finite().is_none_or(Scalar::is_exact)
}

pub fn verify_shapiro(sc: &ShapiroScenario, opts: &InterchangeOptions) -> Result<ShapiroReport> {
    let f = &sc.integrand;
    let space = f.space();
    check_shapes(f, &sc.selections)?;
    if !space.is_probability() {
        return Err(Error::Precondition("the space must be a probability space".into()));
    }
    if sc.p < Scalar::one() {
        return Err(Error::domain(format!("p must lie in [1, inf), got {}", sc.p)));
    }
    if sc.prefix_len == 0 {
        return Err(Error::input("the selection sequence needs a nonempty prefix"));
    }
    if let Some(s) = sc.phi.space() {
        if !Arc::ptr_eq(s, space) && **s != **space {
            return Err(Error::SpaceMismatch("functional and integrand use different spaces".into()));
        }
    }
    sc.selections.check_budget(sc.budget)?;

    let computed = f.pointwise_min();
    let mut notes = Vec::new();
    let mut hypotheses = Vec::new();
    let gflat = match &sc.declared_minimum {
        Some(d) => {
            d.check_same_space(&computed)?;
            if *d != computed {
                notes.push(format!("declared minimum {d} differs from the pointwise minimum {computed}"));
            }
            d.clone()
        }
        None => computed,
    };
    let gflat_ok = gflat.is_finite_ae();
    hypotheses.push(check(
        "minimum_in_lp",
        gflat_ok,
        if gflat_ok {
            "pointwise minimum is finite on every atom of positive weight".to_string()
        } else {
            format!("pointwise minimum {gflat} is infinite on the support")
        },
    ));

    let selections = sc.selections.enumerate();
    let images: Vec<FnClass> = selections.iter().map(|s| f.apply(s)).collect::<Result<_>>()?;
    let bad = images.iter().position(|g| !g.is_finite_ae());
    hypotheses.push(check(
        "images_in_lp",
        bad.is_none(),
        match bad {
            None => format!("all {} images are finite on the support", images.len()),
            Some(i) => format!("image of selection {:?} is {}", selections[i], images[i]),
        },
    ));

    let seq: Vec<Selection> = (0..sc.prefix_len).map(|n| (sc.sequence)(n)).collect();
    let outside = seq.iter().position(|u| !sc.selections.contains(u));
    hypotheses.push(check(
        "sequence_in_selection_set",
        outside.is_none(),
        match outside {
            None => "every prefix term is an admissible selection".to_string(),
            Some(n) => format!("term {n} ({:?}) is not in the selection set", seq[n]),
        },
    ));
    let seq_images: Vec<FnClass> = seq.iter().map(|u| f.apply(u)).collect::<Result<_>>()?;

    let threshold = opts
        .divergence_threshold
        .clone()
        .unwrap_or_else(|| Scalar::int(DEFAULT_DIVERGENCE_THRESHOLD));
    let norms: Vec<ExtReal> = seq_images
        .iter()
        .map(|g| Ok(support_difference(g, &gflat).lp_norm(&sc.p)?.value))
        .collect::<Result<_>>()?;
    let mut tol = opts.tolerance.clone();
    if !norms.iter().all(is_exact) && tol < Scalar::float(1e-9)? {
        tol = Scalar::float(1e-9)?;
    }
    let norm_limit = if gflat_ok {
        analyze_prefix(&norms, &threshold)
    } else {
        LimitEstimate::Inconclusive
    };
    hypotheses.push(match norm_limit.value() {
        Some(v) => check(
            "norm_convergence",
            v.leq_within(&ExtReal::zero(), &tol),
            format!("distance to the pointwise minimum tends to {v}"),
        ),
        None => HypothesisCheck {
            name: "norm_convergence",
            status: CheckStatus::Unverified,
            detail: "distances along the prefix are not monotone".into(),
        },
    });

    let rhs = sc.phi.eval(&gflat)?;
    let phi_seq: Vec<ExtReal> = seq_images.iter().map(|g| sc.phi.eval(g)).collect::<Result<_>>()?;
    let liminf = match analyze_prefix(&phi_seq, &threshold).value() {
        Some(v) => v,
        None => {
            notes.push("functional values along the prefix are not monotone, liminf read from the tail half".into());
            phi_seq[phi_seq.len() / 2..].iter().min().expect("nonempty").clone()
        }
    };
    hypotheses.push(check(
        "lower_semicontinuity_along_sequence",
        liminf.leq_within(&rhs, &tol),
        format!("liminf along the sequence is {liminf}, value at the minimum is {rhs}"),
    ));

    let values: Vec<ExtReal> = images.iter().map(|g| sc.phi.eval(g)).collect::<Result<_>>()?;
    let lhs = values.iter().min().expect("nonempty").clone();
    let equal = lhs.approx_eq(&rhs, &tol);

    let mut invariant_failures = Vec::new();
    if images.iter().any(|g| !gflat.mu_leq(g).expect("same space")) && sc.declared_minimum.is_none() {
        invariant_failures.push("pointwise minimum is not below some image".into());
    }
    let all_hold = hypotheses.iter().all(|h| h.status == CheckStatus::Holds);
    if all_hold && !equal {
        invariant_failures.push(format!("hypotheses hold but lhs {lhs} differs from rhs {rhs}"));
    }
    if !all_hold {
        notes.push("hypothesis violated, the conclusion is reported without guarantee".into());
    }

    Ok(ShapiroReport {
        functional: sc.phi.name().to_string(),
        p: sc.p.clone(),
        lhs,
        rhs,
        conclusion_holds: if equal { HoldsVerdict::Holds } else { HoldsVerdict::Fails },
        hypotheses,
        norm_distances: norms,
        norm_limit,
        phi_along_sequence: phi_seq,
        liminf_phi: Some(liminf),
        selections_enumerated: selections.len() as u128,
        notes,
        invariant_failures,
    })
}
