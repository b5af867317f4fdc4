//! Ring maps acting on polynomials: monomial substitutions (blow-up charts),
//! and the boundary-preserving automorphisms used by invariance checks.

use std::sync::Arc;

use crate::field::Scalar;

use super::{ExponentVector, PolyError, Polynomial, VarTable};

/// Sends every source variable to a coefficient-1 monomial over a target table.
///
/// Exponent vectors transform additively: `e ↦ Σ_i e_i · image_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    source: Arc<VarTable>,
    target: Arc<VarTable>,
    images: Vec<ExponentVector>,
}

impl MonomialMap {
    pub fn new(
        source: Arc<VarTable>,
        target: Arc<VarTable>,
        images: Vec<ExponentVector>,
    ) -> Result<Self, PolyError> {
        if images.len() != source.len() {
            return Err(PolyError::ArityMismatch { expected: source.len(), found: images.len() });
        }
        if let Some(bad) = images.iter().find(|e| e.len() != target.len()) {
            return Err(PolyError::ArityMismatch { expected: target.len(), found: bad.len() });
        }
        Ok(MonomialMap { source, target, images })
    }

    /// Builds a map from polynomial images, each of which must be a bare monomial.
    pub fn from_polynomials(source: Arc<VarTable>, images: &[Polynomial]) -> Result<Self, PolyError> {
        if images.len() != source.len() {
            return Err(PolyError::ArityMismatch { expected: source.len(), found: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.vars().clone(),
            None => source.clone(),
        };
        let mut exps = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            if img.vars() != &target {
                return Err(PolyError::VarTableMismatch);
            }
            match img.as_unit_monomial() {
                Some(e) => exps.push(e.clone()),
                None => return Err(PolyError::ImageNotMonomial(source.name(i).to_string())),
            }
        }
        Self::new(source, target, exps)
    }

    pub fn identity(vars: Arc<VarTable>) -> Self {
        let n = vars.len();
        let images = (0..n).map(|i| ExponentVector::unit(n, i, 1)).collect();
        MonomialMap { source: vars.clone(), target: vars, images }
    }

    pub fn source(&self) -> &Arc<VarTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VarTable> {
        &self.target
    }

    pub fn images(&self) -> &[ExponentVector] {
        &self.images
    }

    /// Image of a single exponent vector.
    pub fn apply(&self, e: &ExponentVector) -> Result<ExponentVector, PolyError> {
        let mut out = vec![0u32; self.target.len()];
        for (k, img) in e.as_slice().iter().zip(&self.images) {
            if *k == 0 {
                continue;
            }
            for (slot, &a) in out.iter_mut().zip(img.as_slice()) {
                let add = a.checked_mul(*k).ok_or(PolyError::ExponentOverflow)?;
                *slot = slot.checked_add(add).ok_or(PolyError::ExponentOverflow)?;
            }
        }
        Ok(ExponentVector::new(out))
    }
}

impl Polynomial {
    /// Pushes the polynomial through a monomial map. Coefficients are carried
    /// over; terms landing on the same exponent are summed.
    pub fn substitute_monomial_map(&self, map: &MonomialMap) -> Result<Polynomial, PolyError> {
        if self.vars() != map.source() {
            return Err(PolyError::VarTableMismatch);
        }
        let mut terms = Vec::with_capacity(self.len());
        for (e, c) in self.terms() {
            terms.push((map.apply(e)?, c.clone()));
        }
        Ok(Polynomial::from_terms(map.target().clone(), self.field(), terms))
    }

    /// General substitution `x_i ↦ images[i]`, fully expanded over the images' table.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.arity() {
            return Err(PolyError::ArityMismatch { expected: self.arity(), found: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.vars().clone(),
            None => self.vars().clone(),
        };
        for img in images {
            if img.field() != self.field() {
                return Err(PolyError::FieldMismatch(self.field(), img.field()));
            }
            if img.vars() != &target {
                return Err(PolyError::VarTableMismatch);
            }
        }
        // Cache powers per variable; exponents in practice are small.
        let mut powers: Vec<Vec<Polynomial>> =
            vec![vec![Polynomial::one(target.clone(), self.field())]; images.len()];
        let mut out = Polynomial::zero(target.clone(), self.field());
        for (e, c) in self.terms() {
            let mut term = Polynomial::constant(target.clone(), self.field(), c.clone());
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Replaces each listed non-boundary variable `x_j` by `x_j + c_j`.
    pub fn translate_nonboundary(&self, shifts: &[(usize, Scalar)]) -> Result<Polynomial, PolyError> {
        let mut images: Vec<Polynomial> = (0..self.arity())
            .map(|i| Polynomial::variable(self.vars().clone(), self.field(), i))
            .collect();
        for (j, c) in shifts {
            let j = *j;
            if j >= self.arity() {
                return Err(PolyError::IndexOutOfRange(j));
            }
            if self.vars().get(j).boundary {
                return Err(PolyError::ShiftOnBoundary(self.vars().name(j).to_string()));
            }
            let shift = Polynomial::constant(self.vars().clone(), self.field(), c.clone());
            images[j] = images[j].add(&shift)?;
        }
        self.compose(&images)
    }

    /// Replaces each listed variable `x_j` by `c_j · x_j`.
    pub fn scale_variables(&self, scalings: &[(usize, Scalar)]) -> Result<Polynomial, PolyError> {
        let mut factors: Vec<Option<&Scalar>> = vec![None; self.arity()];
        for (j, c) in scalings {
            if *j >= self.arity() {
                return Err(PolyError::IndexOutOfRange(*j));
            }
            factors[*j] = Some(c);
        }
        let terms = self.terms().map(|(e, c)| {
            let mut coeff = c.clone();
            for (i, &k) in e.as_slice().iter().enumerate() {
                if let (Some(s), true) = (factors[i], k > 0) {
                    coeff = &coeff * &s.pow(k);
                }
            }
            (e.clone(), coeff)
        });
        Ok(Polynomial::from_terms(self.vars().clone(), self.field(), terms.collect::<Vec<_>>()))
    }

    /// Linear change among the variables at `positions`:
    /// `x_{p_i} ↦ Σ_j matrix[i][j] · x_{p_j}`. The matrix must be invertible.
    pub fn linear_change(&self, positions: &[usize], matrix: &[Vec<Scalar>]) -> Result<Polynomial, PolyError> {
        let k = positions.len();
        if matrix.len() != k || matrix.iter().any(|row| row.len() != k) {
            return Err(PolyError::ArityMismatch { expected: k, found: matrix.len() });
        }
        if let Some(&bad) = positions.iter().find(|&&p| p >= self.arity()) {
            return Err(PolyError::IndexOutOfRange(bad));
        }
        if !is_invertible(matrix) {
            return Err(PolyError::SingularMatrix);
        }
        let vars = self.vars().clone();
        let field = self.field();
        let mut images: Vec<Polynomial> =
            (0..self.arity()).map(|i| Polynomial::variable(vars.clone(), field, i)).collect();
        for (row, &p) in matrix.iter().zip(positions) {
            let terms = row
                .iter()
                .zip(positions)
                .map(|(c, &q)| (ExponentVector::unit(vars.len(), q, 1), c.clone()))
                .collect::<Vec<_>>();
            images[p] = Polynomial::from_terms(vars.clone(), field, terms);
        }
        self.compose(&images)
    }
}

/// Gaussian elimination over the scalars' field.
pub(crate) fn is_invertible(matrix: &[Vec<Scalar>]) -> bool {
    let n = matrix.len();
    if n == 0 {
        return true;
    }
    let mut m: Vec<Vec<Scalar>> = matrix.to_vec();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return false;
        };
        m.swap(col, pivot);
        let inv = m[col][col].inverse().expect("pivot is nonzero");
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            let pivot_row = m[col].clone();
            for (dst, src) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                *dst = &*dst - &(&factor * src);
            }
        }
    }
    true
}
