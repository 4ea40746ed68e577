//! Finite atomic measure spaces.
//!
//! The σ-algebra is the powerset of the atoms and μ is determined by one
//! nonnegative finite weight per atom. Null sets are exactly the sets of
//! zero-weight atoms.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext_real::{ExtReal, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpace {
    atoms: Vec<String>,
    weights: Vec<Scalar>,
    truncation_of: Option<String>,
}

impl MeasureSpace {
    pub fn new(atoms: Vec<String>, weights: Vec<Scalar>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::input("a measure space needs at least one atom"));
        }
        if atoms.len() != weights.len() {
            return Err(Error::input(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        let mut seen = HashSet::new();
        for a in &atoms {
            if !seen.insert(a.as_str()) {
                return Err(Error::input(format!("duplicate atom identifier {a:?}")));
            }
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::input(format!(
                "negative weight {w} on atom {:?}",
                atoms[i]
            )));
        }
        Ok(MeasureSpace {
            atoms,
            weights,
            truncation_of: None,
        })
    }

    /// Atoms named `w0, w1, ...`.
    pub fn from_weights(weights: Vec<Scalar>) -> Result<Self> {
        let atoms = (0..weights.len()).map(|i| format!("w{i}")).collect();
        Self::new(atoms, weights)
    }

    pub fn uniform(n: usize, weight: Scalar) -> Result<Self> {
        Self::from_weights(vec![weight; n])
    }

    pub fn with_truncation(mut self, label: impl Into<String>) -> Self {
        self.truncation_of = Some(label.into());
        self
    }

    pub fn into_shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> &Scalar {
        &self.weights[atom]
    }

    pub fn truncation_of(&self) -> Option<&str> {
        self.truncation_of.as_deref()
    }

    pub fn atom_index(&self, id: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == id)
    }

    pub fn is_null_atom(&self, atom: usize) -> bool {
        self.weights[atom].is_zero()
    }

    /// Indices of atoms with positive weight.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| !self.is_null_atom(i))
    }

    pub fn total_mass(&self) -> Scalar {
        self.weights.iter().fold(Scalar::zero(), |acc, w| &acc + w)
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass() == Scalar::one()
    }

    pub fn empty_set(&self) -> AtomSet {
        AtomSet {
            members: vec![false; self.len()],
        }
    }

    pub fn full_set(&self) -> AtomSet {
        AtomSet {
            members: vec![true; self.len()],
        }
    }

    /// Builds a set from atom identifiers.
    pub fn atom_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<AtomSet> {
        let mut set = self.empty_set();
        for id in ids {
            let id = id.as_ref();
            let i = self
                .atom_index(id)
                .ok_or_else(|| Error::input(format!("unknown atom identifier {id:?}")))?;
            set.members[i] = true;
        }
        Ok(set)
    }

    /// Builds a set from atom indices.
    pub fn atom_set_from_indices(&self, indices: impl IntoIterator<Item = usize>) -> Result<AtomSet> {
        let mut set = self.empty_set();
        for i in indices {
            if i >= self.len() {
                return Err(Error::input(format!("atom index {i} out of range")));
            }
            set.members[i] = true;
        }
        Ok(set)
    }

    fn check_set(&self, s: &AtomSet) -> Result<()> {
        if s.members.len() == self.len() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!(
                "atom set over {} atoms used with a space of {} atoms",
                s.members.len(),
                self.len()
            )))
        }
    }

    /// μ(s).
    pub fn measure(&self, s: &AtomSet) -> Result<ExtReal> {
        self.check_set(s)?;
        let total = s
            .iter()
            .fold(Scalar::zero(), |acc, i| &acc + &self.weights[i]);
        Ok(ExtReal::finite(total))
    }

    pub fn is_null(&self, s: &AtomSet) -> Result<bool> {
        self.check_set(s)?;
        Ok(s.iter().all(|i| self.is_null_atom(i)))
    }
}

/// A subset of the atoms of one space, stored as a membership vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomSet {
    members: Vec<bool>,
}

impl AtomSet {
    /// The set with bit `i` of `mask` as membership of atom `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        AtomSet {
            members: (0..len).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn from_members(members: Vec<bool>) -> Self {
        AtomSet { members }
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.members.get(atom).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, atom: usize) {
        self.members[atom] = true;
    }

    pub fn remove(&mut self, atom: usize) {
        self.members[atom] = false;
    }

    pub fn universe_len(&self) -> usize {
        self.members.len()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !a || b)
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        AtomSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| a || b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        AtomSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }

    pub fn complement(&self) -> AtomSet {
        AtomSet {
            members: self.members.iter().map(|&m| !m).collect(),
        }
    }

    /// Bitmask encoding; only meaningful for universes of at most 64 atoms.
    pub fn mask(&self) -> u64 {
        self.iter().fold(0, |acc, i| acc | 1 << i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn abc() -> MeasureSpace {
        MeasureSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![Scalar::int(1), Scalar::int(0), Scalar::int(2)],
        )
        .unwrap()
    }

    #[test]
    fn measure_examples() {
        let s = abc();
        assert_eq!(s.measure(&s.atom_set(&["a", "c"]).unwrap()).unwrap(), ExtReal::int(3));
        assert_eq!(s.measure(&s.empty_set()).unwrap(), ExtReal::int(0));
        assert_eq!(s.measure(&s.atom_set(&["b"]).unwrap()).unwrap(), ExtReal::int(0));
    }

    #[test]
    fn null_examples() {
        let s = abc();
        assert!(s.is_null(&s.atom_set(&["b"]).unwrap()).unwrap());
        assert!(s.is_null(&s.empty_set()).unwrap());
        assert!(!s.is_null(&s.atom_set(&["a"]).unwrap()).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let s = abc();
        assert!(matches!(s.atom_set(&["z"]), Err(Error::Input(_))));
        assert!(MeasureSpace::new(vec![], vec![]).is_err());
        assert!(MeasureSpace::new(vec!["a".into(), "a".into()], vec![Scalar::one(); 2]).is_err());
        assert!(MeasureSpace::new(vec!["a".into()], vec![Scalar::int(-1)]).is_err());
        assert!(matches!(
            s.measure(&AtomSet::from_mask(2, 1)),
            Err(Error::SpaceMismatch(_))
        ));
    }

    proptest! {
        #[test]
        fn additive_and_monotone(
            weights in proptest::collection::vec(0i64..5, 1..7),
            m1 in any::<u64>(),
            m2 in any::<u64>(),
        ) {
            let n = weights.len();
            let s = MeasureSpace::from_weights(weights.into_iter().map(Scalar::int).collect()).unwrap();
            let a = AtomSet::from_mask(n, m1);
            let b = AtomSet::from_mask(n, m2 & !m1);
            let ab = a.union(&b);
            let sum = s.measure(&a).unwrap().lower_add(&s.measure(&b).unwrap());
            prop_assert_eq!(s.measure(&ab).unwrap(), sum);
            prop_assert!(s.measure(&a).unwrap() <= s.measure(&ab).unwrap());
        }
    }
}
