use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PolyError;

/// Per-variable nonnegative exponents of one monomial.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// comparison of the entries. Arity is fixed by the owning variable table.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    pub fn zeros(arity: usize) -> Self {
        ExponentVector(vec![0; arity])
    }

    pub fn unit(arity: usize, index: usize, power: u32) -> Self {
        let mut v = vec![0; arity];
        v[index] = power;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Sum of the entries at `positions`.
    pub fn degree_on(&self, positions: &[usize]) -> u64 {
        positions.iter().map(|&i| self.0[i] as u64).sum()
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &ExponentVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn checked_add(&self, other: &ExponentVector) -> Result<ExponentVector, PolyError> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(PolyError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }

    /// Keeps only the entries at `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> ExponentVector {
        ExponentVector(positions.iter().map(|&i| self.0[i]).collect())
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = ExponentVector::new(vec![2, 0]);
        let b = ExponentVector::new(vec![1, 1]);
        let c = ExponentVector::new(vec![0, 3]);
        assert!(b < a);
        assert!(a < c);
        assert!(ExponentVector::zeros(2) < b);
    }

    #[test]
    fn overflow_is_an_error() {
        let a = ExponentVector::new(vec![u32::MAX]);
        let b = ExponentVector::new(vec![1]);
        assert_eq!(a.checked_add(&b), Err(PolyError::ExponentOverflow));
    }
}
