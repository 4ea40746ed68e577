//! Measurable `ℝ̄`-valued functions modulo μ-a.e. equality.
//!
//! A [`FnClass`] keeps its representative values untouched. Equality and the
//! μ-pointwise order only look at atoms of positive weight, so two classes
//! that differ on null atoms compare equal.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext_real::{ExtReal, Scalar};
use crate::integrals::lebesgue_sum;
use crate::measure::MeasureSpace;

#[derive(Clone)]
pub struct FnClass {
    space: Arc<MeasureSpace>,
    values: Vec<ExtReal>,
}

/// Which of `L¹`, `L¹⊕`, `L¹⊖` a class belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IntegrabilityTag {
    /// Both `∫f₊` and `∫f₋` finite.
    L1Full,
    /// `∫f₊ < +∞` only.
    L1Plus,
    /// `∫f₋ < +∞` only.
    L1Minus,
    /// Neither part integrable.
    L0Only,
}

impl IntegrabilityTag {
    pub fn in_plus(self) -> bool {
        matches!(self, IntegrabilityTag::L1Full | IntegrabilityTag::L1Plus)
    }

    pub fn in_minus(self) -> bool {
        matches!(self, IntegrabilityTag::L1Full | IntegrabilityTag::L1Minus)
    }

    pub fn is_semi_integrable(self) -> bool {
        self != IntegrabilityTag::L0Only
    }

    /// The tag of `−f` given the tag of `f`.
    pub fn negated(self) -> Self {
        match self {
            IntegrabilityTag::L1Plus => IntegrabilityTag::L1Minus,
            IntegrabilityTag::L1Minus => IntegrabilityTag::L1Plus,
            t => t,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpNorm {
    pub value: ExtReal,
    /// Set when some non-null atom carries an infinite value.
    pub infinite_on_support: bool,
}

impl FnClass {
    pub fn new(space: Arc<MeasureSpace>, values: Vec<ExtReal>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::input(format!(
                "function has {} values for a space of {} atoms",
                values.len(),
                space.len()
            )));
        }
        Ok(FnClass { space, values })
    }

    pub fn constant(space: Arc<MeasureSpace>, value: ExtReal) -> Self {
        let values = vec![value; space.len()];
        FnClass { space, values }
    }

    pub fn from_ints(space: Arc<MeasureSpace>, values: &[i64]) -> Result<Self> {
        Self::new(space, values.iter().map(|&v| ExtReal::int(v)).collect())
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> &ExtReal {
        &self.values[atom]
    }

    pub fn into_values(self) -> Vec<ExtReal> {
        self.values
    }

    /// Values on atoms of positive weight.
    pub fn support_values(&self) -> impl Iterator<Item = &ExtReal> + '_ {
        self.space.support().map(move |i| &self.values[i])
    }

    pub fn shares_space(&self, other: &FnClass) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space
    }

    pub fn check_same_space(&self, other: &FnClass) -> Result<()> {
        if self.shares_space(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(
                "functions are defined on different measure spaces".into(),
            ))
        }
    }

    /// The μ-pointwise order: `f ≤ g` on every atom of positive weight.
    pub fn mu_leq(&self, other: &FnClass) -> Result<bool> {
        self.check_same_space(other)?;
        Ok(self
            .space
            .support()
            .all(|i| self.values[i] <= other.values[i]))
    }

    fn zip_with(&self, other: &FnClass, op: impl Fn(&ExtReal, &ExtReal) -> ExtReal) -> Result<FnClass> {
        self.check_same_space(other)?;
        Ok(FnClass {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }

    pub fn map(&self, op: impl Fn(&ExtReal) -> ExtReal) -> FnClass {
        FnClass {
            space: self.space.clone(),
            values: self.values.iter().map(op).collect(),
        }
    }

    pub fn min(&self, other: &FnClass) -> Result<FnClass> {
        self.zip_with(other, |a, b| a.clone().min(b.clone()))
    }

    pub fn max(&self, other: &FnClass) -> Result<FnClass> {
        self.zip_with(other, |a, b| a.clone().max(b.clone()))
    }

    pub fn lower_add(&self, other: &FnClass) -> Result<FnClass> {
        self.zip_with(other, ExtReal::lower_add)
    }

    pub fn upper_add(&self, other: &FnClass) -> Result<FnClass> {
        self.zip_with(other, ExtReal::upper_add)
    }

    pub fn neg(&self) -> FnClass {
        self.map(|v| -v)
    }

    pub fn scale(&self, lambda: &Scalar) -> FnClass {
        self.map(|v| v.scalar_mul(lambda))
    }

    /// `(f₊, f₋)` with `f = f₊ + (−f₋)` atomwise.
    pub fn pos_neg_parts(&self) -> (FnClass, FnClass) {
        (self.map(ExtReal::pos_part), self.map(ExtReal::neg_part))
    }

    pub fn is_nonnegative_ae(&self) -> bool {
        self.support_values().all(|v| !v.is_negative())
    }

    pub fn is_nonpositive_ae(&self) -> bool {
        self.support_values().all(|v| *v <= ExtReal::zero())
    }

    pub fn is_finite_ae(&self) -> bool {
        self.support_values().all(ExtReal::is_finite)
    }

    /// Integrability class from the finiteness of `∫f₊` and `∫f₋`.
    pub fn classify(&self) -> IntegrabilityTag {
        let (plus, minus) = self.pos_neg_parts();
        let plus_finite = lebesgue_sum(&plus).is_finite();
        let minus_finite = lebesgue_sum(&minus).is_finite();
        match (plus_finite, minus_finite) {
            (true, true) => IntegrabilityTag::L1Full,
            (true, false) => IntegrabilityTag::L1Plus,
            (false, true) => IntegrabilityTag::L1Minus,
            (false, false) => IntegrabilityTag::L0Only,
        }
    }

    /// `(Σ μ(ω)·|f(ω)|^p)^(1/p)` for `p ∈ [1, ∞)`.
    pub fn lp_norm(&self, p: &Scalar) -> Result<LpNorm> {
        if *p < Scalar::one() {
            return Err(Error::domain(format!("L^p norm needs p >= 1, got {p}")));
        }
        let infinite = self.support_values().any(|v| !v.is_finite());
        if infinite {
            return Ok(LpNorm {
                value: ExtReal::PosInf,
                infinite_on_support: true,
            });
        }
        let mut sum = Scalar::zero();
        for i in self.space.support() {
            let v = self.values[i].as_finite().expect("finite on support");
            sum = &sum + &(self.space.weight(i) * &v.abs().pow(p));
        }
        Ok(LpNorm {
            value: ExtReal::finite(sum.root(p)),
            infinite_on_support: false,
        })
    }
}

impl PartialEq for FnClass {
    fn eq(&self, other: &Self) -> bool {
        self.shares_space(other)
            && self
                .space
                .support()
                .all(|i| self.values[i] == other.values[i])
    }
}

impl fmt::Debug for FnClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnClass{self}")
    }
}

impl fmt::Display for FnClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Greatest lower bound for the μ-pointwise order: the per-atom minimum.
pub fn pointwise_inf(family: &[FnClass]) -> Result<FnClass> {
    let (first, rest) = family
        .split_first()
        .ok_or_else(|| Error::input("infimum of an empty family"))?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.min(f))
}

pub fn pointwise_sup(family: &[FnClass]) -> Result<FnClass> {
    let (first, rest) = family
        .split_first()
        .ok_or_else(|| Error::input("supremum of an empty family"))?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.max(f))
}
