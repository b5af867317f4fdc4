//! Upward-closed exponent sets given by their minimal generators.
//!
//! On a chart, a toroidal ideal is exactly a monomial ideal in the boundary
//! coordinates, so this is the representation used for hulls and for the
//! per-stratum semigroups.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::ExponentVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("exponent arity {found} does not match ideal arity {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operation undefined on the zero ideal")]
    ZeroIdeal,
    #[error("coordinate index {0} out of range")]
    IndexOutOfRange(usize),
}

/// A monomial ideal in `N^arity`, stored as its antichain of minimal
/// generators in ascending graded-lex order. No generators means the zero ideal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    arity: usize,
    generators: Vec<ExponentVector>,
}

impl MonomialIdeal {
    /// The unique antichain of componentwise-minimal elements of `exps`.
    pub fn minimal_generators(
        arity: usize,
        exps: impl IntoIterator<Item = ExponentVector>,
    ) -> Result<Self, IdealError> {
        let mut all: Vec<ExponentVector> = exps.into_iter().collect();
        if let Some(bad) = all.iter().find(|e| e.len() != arity) {
            return Err(IdealError::ArityMismatch { expected: arity, found: bad.len() });
        }
        // In graded-lex order nothing can dominate an earlier element unless equal.
        all.sort();
        all.dedup();
        let mut kept: Vec<ExponentVector> = Vec::new();
        for e in all {
            if !kept.iter().any(|g| e.dominates(g)) {
                kept.push(e);
            }
        }
        Ok(MonomialIdeal { arity, generators: kept })
    }

    pub fn zero(arity: usize) -> Self {
        MonomialIdeal { arity, generators: Vec::new() }
    }

    pub fn unit(arity: usize) -> Self {
        MonomialIdeal { arity, generators: vec![ExponentVector::zeros(arity)] }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_zero()
    }

    pub fn contains(&self, e: &ExponentVector) -> Result<bool, IdealError> {
        if e.len() != self.arity {
            return Err(IdealError::ArityMismatch { expected: self.arity, found: e.len() });
        }
        Ok(self.generators.iter().any(|g| e.dominates(g)))
    }

    fn check_positions(&self, positions: &[usize]) -> Result<(), IdealError> {
        match positions.iter().find(|&&i| i >= self.arity) {
            Some(&i) => Err(IdealError::IndexOutOfRange(i)),
            None => Ok(()),
        }
    }

    /// Order along the coordinate stratum `{x_i = 0 : i ∈ positions}`: the
    /// minimum over generators of their coordinate sum on `positions`.
    pub fn multiplicity_along(&self, positions: &[usize]) -> Result<u64, IdealError> {
        self.check_positions(positions)?;
        self.generators
            .iter()
            .map(|g| g.degree_on(positions))
            .min()
            .ok_or(IdealError::ZeroIdeal)
    }

    /// Forgets the coordinates outside `positions` and re-minimalizes. The
    /// result has arity `positions.len()` with coordinates in the given order.
    pub fn project(&self, positions: &[usize]) -> Result<MonomialIdeal, IdealError> {
        self.check_positions(positions)?;
        if self.is_zero() {
            return Err(IdealError::ZeroIdeal);
        }
        Self::minimal_generators(positions.len(), self.generators.iter().map(|g| g.select(positions)))
    }

    /// The ideal without its `index`-th minimal generator.
    pub fn without_generator(&self, index: usize) -> MonomialIdeal {
        let mut generators = self.generators.clone();
        generators.remove(index);
        MonomialIdeal { arity: self.arity, generators }
    }

    /// Generators as plain integer arrays (serialized form).
    pub fn to_arrays(&self) -> Vec<Vec<u32>> {
        self.generators.iter().map(|g| g.as_slice().to_vec()).collect()
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "MonomialIdeal(0)");
        }
        write!(f, "MonomialIdeal{:?}", self.generators)
    }
}

/// Boundary-subset-indexed family of monomial ideals: `M_T ⊂ N^T`.
///
/// Keys are sorted index sets; the ideal at key `T` has arity `|T|` with
/// coordinates in key order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StratumSemigroupFamily<K: Ord> {
    members: BTreeMap<Vec<K>, MonomialIdeal>,
}

impl<K: Ord + Clone> StratumSemigroupFamily<K> {
    pub fn new() -> Self {
        StratumSemigroupFamily { members: BTreeMap::new() }
    }

    pub fn insert(&mut self, key: Vec<K>, ideal: MonomialIdeal) {
        debug_assert_eq!(key.len(), ideal.arity());
        self.members.insert(key, ideal);
    }

    pub fn get(&self, key: &[K]) -> Option<&MonomialIdeal> {
        self.members.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<K>, &MonomialIdeal)> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Checks `project(M_T', T) = M_T` for every pair of keys `T ⊆ T'`.
    /// Returns the first violating pair.
    pub fn compatibility_violation(&self) -> Option<(Vec<K>, Vec<K>)> {
        for (big, big_ideal) in &self.members {
            for (small, small_ideal) in &self.members {
                if small.len() > big.len() || !small.iter().all(|k| big.contains(k)) {
                    continue;
                }
                let positions: Vec<usize> =
                    small.iter().map(|k| big.iter().position(|b| b == k).unwrap()).collect();
                match big_ideal.project(&positions) {
                    Ok(p) if &p == small_ideal => {}
                    _ => return Some((small.clone(), big.clone())),
                }
            }
        }
        None
    }
}

/// The family of all coordinate projections of a single ideal.
pub fn projection_family(ideal: &MonomialIdeal) -> Result<StratumSemigroupFamily<usize>, IdealError> {
    let r = ideal.arity();
    let mut fam = StratumSemigroupFamily::new();
    for mask in 0u64..(1u64 << r) {
        let subset: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
        fam.insert(subset.clone(), ideal.project(&subset)?);
    }
    Ok(fam)
}
