//! Order-preserving functionals `Φ: L⁰ ⊇ dom Φ → ℝ̄`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext_real::{ExtReal, Scalar};
use crate::integrals::{self, Capacity};
use crate::lattice::FnClass;
use crate::measure::MeasureSpace;
use crate::random;

/// Where a functional is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    All,
    Nonnegative,
    /// `L¹⊕ ∪ L¹⊖`
    SemiIntegrable,
    /// `L¹⊕`: `∫f₊ < +∞`
    PlusCone,
    /// `L¹⊖`: `∫f₋ < +∞`
    MinusCone,
}

impl Domain {
    pub fn contains(self, f: &FnClass) -> bool {
        match self {
            Domain::All => true,
            Domain::Nonnegative => f.is_nonnegative_ae(),
            Domain::SemiIntegrable => f.classify().is_semi_integrable(),
            Domain::PlusCone => f.classify().in_plus(),
            Domain::MinusCone => f.classify().in_minus(),
        }
    }

    /// Whether finite pointwise minima of members stay inside the domain.
    pub fn closed_under_min(self) -> bool {
        !matches!(self, Domain::SemiIntegrable | Domain::MinusCone)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Properties {
    pub order_preserving: bool,
    pub sequentially_inf_continuous: bool,
}

/// A nondecreasing map `ℝ̄ → ℝ̄` used to post-compose a functional.
#[derive(Clone)]
pub enum MonotoneMap {
    /// `a ↦ scale·a + shift` with `scale ≥ 0`.
    Affine { scale: Scalar, shift: Scalar },
    MaxWith(ExtReal),
    MinWith(ExtReal),
    Custom {
        name: String,
        map: Arc<dyn Fn(&ExtReal) -> ExtReal + Send + Sync>,
    },
}

impl MonotoneMap {
    pub fn apply(&self, a: &ExtReal) -> ExtReal {
        match self {
            MonotoneMap::Affine { scale, shift } => {
                a.scalar_mul(scale).lower_add(&ExtReal::Finite(shift.clone()))
            }
            MonotoneMap::MaxWith(b) => a.clone().max(b.clone()),
            MonotoneMap::MinWith(b) => a.clone().min(b.clone()),
            MonotoneMap::Custom { map, .. } => map(a),
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonotoneMap::Affine { scale, shift } => format!("affine({scale},{shift})"),
            MonotoneMap::MaxWith(b) => format!("max_with({b})"),
            MonotoneMap::MinWith(b) => format!("min_with({b})"),
            MonotoneMap::Custom { name, .. } => name.clone(),
        }
    }

    /// Checks monotonicity on a grid from `−∞` to `+∞` through `[-20, 20]`.
    pub fn validate(&self) -> Result<()> {
        if let MonotoneMap::Affine { scale, .. } = self {
            if scale.is_negative() {
                return Err(Error::input(format!("affine map with negative scale {scale}")));
            }
        }
        let mut grid = vec![ExtReal::NegInf];
        grid.extend((-80..=80).map(|k| ExtReal::ratio(k, 4)));
        grid.push(ExtReal::PosInf);
        let images: Vec<ExtReal> = grid.iter().map(|a| self.apply(a)).collect();
        for (i, w) in images.windows(2).enumerate() {
            if w[0] > w[1] {
                return Err(Error::input(format!(
                    "post-composition {} is not nondecreasing: {} ↦ {} but {} ↦ {}",
                    self.name(),
                    grid[i],
                    w[0],
                    grid[i + 1],
                    w[1]
                )));
            }
        }
        Ok(())
    }
}

type EvalFn = Arc<dyn Fn(&FnClass) -> Result<ExtReal> + Send + Sync>;

#[derive(Clone)]
enum Kind {
    ExtendedLebesgue,
    Outer,
    Inner,
    Choquet(Capacity),
    EssSup,
    PostCompose(Box<Functional>, MonotoneMap),
    Custom(EvalFn),
}

/// Builtin selector for [`Functional::builtin`].
#[derive(Clone)]
pub enum Builtin {
    ExtendedLebesgue,
    Outer,
    Inner,
    Choquet(Capacity),
    EssSup,
    PostCompose(Box<Functional>, MonotoneMap),
}

#[derive(Clone)]
pub struct Functional {
    name: String,
    domain: Domain,
    properties: Properties,
    kind: Kind,
}

impl Functional {
    pub fn builtin(b: Builtin) -> Result<Self> {
        let (name, domain, continuous, kind) = match b {
            Builtin::ExtendedLebesgue => (
                "extended_lebesgue".to_string(),
                Domain::SemiIntegrable,
                true,
                Kind::ExtendedLebesgue,
            ),
            Builtin::Outer => ("outer".into(), Domain::All, false, Kind::Outer),
            Builtin::Inner => ("inner".into(), Domain::All, false, Kind::Inner),
            Builtin::Choquet(c) => ("choquet".into(), Domain::Nonnegative, true, Kind::Choquet(c)),
            Builtin::EssSup => ("ess_sup".into(), Domain::All, false, Kind::EssSup),
            Builtin::PostCompose(inner, map) => {
                map.validate()?;
                (
                    format!("{}∘{}", map.name(), inner.name),
                    inner.domain,
                    false,
                    Kind::PostCompose(Box::new(Functional::clone(&inner)), map),
                )
            }
        };
        let order_preserving = match &kind {
            Kind::PostCompose(inner, _) => inner.properties.order_preserving,
            _ => true,
        };
        Ok(Functional {
            name,
            domain,
            properties: Properties {
                order_preserving,
                sequentially_inf_continuous: continuous,
            },
            kind,
        })
    }

    pub fn extended_lebesgue() -> Self {
        Self::builtin(Builtin::ExtendedLebesgue).expect("builtin")
    }

    pub fn outer() -> Self {
        Self::builtin(Builtin::Outer).expect("builtin")
    }

    pub fn inner() -> Self {
        Self::builtin(Builtin::Inner).expect("builtin")
    }

    pub fn choquet(c: Capacity) -> Self {
        Self::builtin(Builtin::Choquet(c)).expect("builtin")
    }

    pub fn ess_sup() -> Self {
        Self::builtin(Builtin::EssSup).expect("builtin")
    }

    pub fn post_compose(inner: Functional, map: MonotoneMap) -> Result<Self> {
        Self::builtin(Builtin::PostCompose(Box::new(inner), map))
    }

    /// A user functional. `properties` are declarations; nothing is proven.
    pub fn custom(
        name: impl Into<String>,
        domain: Domain,
        properties: Properties,
        eval: impl Fn(&FnClass) -> Result<ExtReal> + Send + Sync + 'static,
    ) -> Self {
        Functional {
            name: name.into(),
            domain,
            properties,
            kind: Kind::Custom(Arc::new(eval)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn properties(&self) -> Properties {
        self.properties
    }

    pub fn is_builtin(&self) -> bool {
        match &self.kind {
            Kind::Custom(_) => false,
            Kind::PostCompose(inner, map) => {
                !matches!(map, MonotoneMap::Custom { .. }) && inner.is_builtin()
            }
            _ => true,
        }
    }

    /// The space a functional is tied to, if any (Choquet capacities are).
    pub fn space(&self) -> Option<&Arc<MeasureSpace>> {
        match &self.kind {
            Kind::Choquet(c) => Some(c.space()),
            Kind::PostCompose(inner, _) => inner.space(),
            _ => None,
        }
    }

    pub fn eval(&self, f: &FnClass) -> Result<ExtReal> {
        if !self.domain.contains(f) {
            return Err(Error::domain(format!(
                "{} is not defined at {f} (domain: {:?})",
                self.name, self.domain
            )));
        }
        match &self.kind {
            Kind::ExtendedLebesgue => integrals::lebesgue_extended(f),
            Kind::Outer => Ok(integrals::outer_integral(f)),
            Kind::Inner => Ok(integrals::inner_integral(f)),
            Kind::Choquet(c) => integrals::choquet(f, c),
            Kind::EssSup => Ok(ess_sup(f)),
            Kind::PostCompose(inner, map) => Ok(map.apply(&inner.eval(f)?)),
            Kind::Custom(eval) => eval(f),
        }
    }
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Functional")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("properties", &self.properties)
            .finish()
    }
}

/// Largest value over the atoms of positive weight; `−∞` on a null space.
pub fn ess_sup(f: &FnClass) -> ExtReal {
    f.support_values().cloned().max().unwrap_or(ExtReal::NegInf)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderViolation {
    pub lower: FnClass,
    pub upper: FnClass,
    pub lower_value: ExtReal,
    pub upper_value: ExtReal,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    pub functional: String,
    pub trials: usize,
    /// Pairs actually evaluated (both members in the domain).
    pub pairs_checked: usize,
    pub violations: Vec<OrderViolation>,
}

impl OrderReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples comparable pairs `f ≤ g` in the domain and checks `Φ(f) ≤ Φ(g)`.
pub fn check_order_preserving(phi: &Functional, trials: usize, seed: u64) -> OrderReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OrderReport {
        functional: phi.name.clone(),
        trials,
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for _ in 0..trials {
        let space = match phi.space() {
            Some(s) => s.clone(),
            None => {
                let n = rng.random_range(1..=4);
                random::space(&mut rng, n, true)
            }
        };
        let lower = random::function_in(&mut rng, &space, phi.domain);
        let Some(upper) = (0..8)
            .map(|_| random::dominating(&mut rng, &lower))
            .find(|g| phi.domain.contains(g))
        else {
            continue;
        };
        let (Ok(a), Ok(b)) = (phi.eval(&lower), phi.eval(&upper)) else {
            continue;
        };
        report.pairs_checked += 1;
        if a > b {
            report.violations.push(OrderViolation {
                lower,
                upper,
                lower_value: a,
                upper_value: b,
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(w: &[i64]) -> Arc<MeasureSpace> {
        MeasureSpace::from_weights(w.iter().map(|&x| Scalar::int(x)).collect())
            .unwrap()
            .into_shared()
    }

    #[test]
    fn builtin_examples() {
        let s = space(&[1, 1]);
        let f = FnClass::from_ints(s.clone(), &[1, -2]).unwrap();
        assert_eq!(Functional::extended_lebesgue().eval(&f).unwrap(), ExtReal::int(-1));

        let c = Capacity::from_fn(s.clone(), |a| if a.len() == 2 { ExtReal::int(1) } else { ExtReal::ratio(1, 2) }).unwrap();
        let one = FnClass::from_ints(s.clone(), &[1, 1]).unwrap();
        assert_eq!(Functional::choquet(c).eval(&one).unwrap(), ExtReal::int(1));

        let t = space(&[1, 0]);
        let g = FnClass::from_ints(t, &[0, 5]).unwrap();
        assert_eq!(Functional::ess_sup().eval(&g).unwrap(), ExtReal::int(0));
    }

    #[test]
    fn flags() {
        assert!(Functional::extended_lebesgue().properties().sequentially_inf_continuous);
        assert!(!Functional::ess_sup().properties().sequentially_inf_continuous);
        let s = space(&[1]);
        let c = Capacity::from_measure(s);
        assert!(Functional::choquet(c).properties().sequentially_inf_continuous);
    }

    #[test]
    fn domain_errors() {
        let s = space(&[1, 1]);
        let f = FnClass::new(s, vec![ExtReal::NegInf, ExtReal::PosInf]).unwrap();
        assert!(matches!(Functional::extended_lebesgue().eval(&f), Err(Error::Domain(_))));
        assert_eq!(Functional::outer().eval(&f).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn post_compose_rejects_decreasing_maps() {
        let neg = MonotoneMap::Affine {
            scale: Scalar::int(-1),
            shift: Scalar::zero(),
        };
        assert!(Functional::post_compose(Functional::outer(), neg).is_err());
        let flip = MonotoneMap::Custom {
            name: "flip".into(),
            map: Arc::new(|a: &ExtReal| -a),
        };
        assert!(Functional::post_compose(Functional::outer(), flip).is_err());
        let ok = MonotoneMap::MaxWith(ExtReal::int(-3));
        let phi = Functional::post_compose(Functional::extended_lebesgue(), ok).unwrap();
        let s = space(&[1, 1]);
        let f = FnClass::from_ints(s, &[-5, -5]).unwrap();
        assert_eq!(phi.eval(&f).unwrap(), ExtReal::int(-3));
    }

    #[test]
    fn builtins_pass_order_check() {
        let s = space(&[1, 2, 0]);
        let c = Capacity::distortion(s, Scalar::ratio(1, 2)).unwrap();
        let phis = [
            Functional::extended_lebesgue(),
            Functional::outer(),
            Functional::inner(),
            Functional::ess_sup(),
            Functional::choquet(c),
            Functional::post_compose(
                Functional::inner(),
                MonotoneMap::Affine {
                    scale: Scalar::int(2),
                    shift: Scalar::int(-1),
                },
            )
            .unwrap(),
        ];
        for (i, phi) in phis.iter().enumerate() {
            let r = check_order_preserving(phi, 1000, 7 + i as u64);
            assert!(r.passed(), "{}: {:?}", phi.name(), r.violations.first());
            assert!(r.pairs_checked > 500, "{} only checked {}", phi.name(), r.pairs_checked);
        }
    }

    #[test]
    fn broken_functional_is_caught() {
        let broken = Functional::custom(
            "negated_integral",
            Domain::SemiIntegrable,
            Properties {
                order_preserving: false,
                sequentially_inf_continuous: false,
            },
            |f| Ok(-integrals::lebesgue_extended(f)?),
        );
        let r = check_order_preserving(&broken, 200, 1);
        let w = r.violations.first().expect("a witness");
        assert!(w.lower.mu_leq(&w.upper).unwrap());
        assert!(w.lower_value > w.upper_value);

        let constant = Functional::custom(
            "constant",
            Domain::All,
            Properties {
                order_preserving: true,
                sequentially_inf_continuous: true,
            },
            |_| Ok(ExtReal::int(4)),
        );
        assert!(check_order_preserving(&constant, 200, 1).passed());
    }
}
