//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`ExponentVector`] (graded-lex), so
//! iteration, printing and every downstream tie-break are deterministic. Zero
//! coefficients are never stored.

mod exponent;
mod maps;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, Scalar};

pub use exponent::ExponentVector;
pub use maps::MonomialMap;
pub(crate) use maps::is_invertible;
pub use parse::{parse_polynomial, ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live over different variable tables")]
    VarTableMismatch,
    #[error("polynomials live over different coefficient fields ({0} vs {1})")]
    FieldMismatch(Field, Field),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("image of `{0}` is not a monomial with coefficient 1")]
    ImageNotMonomial(String),
    #[error("map has {found} images, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("`{0}` is a boundary variable and cannot be translated")]
    ShiftOnBoundary(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not divisible by {var}^{power}")]
    NotDivisible { var: String, power: u32 },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("variable index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("linear change of variables is not invertible")]
    SingularMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub boundary: bool,
}

impl Variable {
    pub fn boundary(name: impl Into<String>) -> Self {
        Variable { name: name.into(), boundary: true }
    }

    pub fn free(name: impl Into<String>) -> Self {
        Variable { name: name.into(), boundary: false }
    }
}

/// Ordered variable names with boundary flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    vars: Vec<Variable>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarTable {
    pub fn new(vars: Vec<Variable>) -> Result<Self, PolyError> {
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(&v.name) {
                return Err(PolyError::InvalidVariableName(v.name.clone()));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(PolyError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(VarTable { vars })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn get(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Variable> {
        self.vars.iter()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    pub fn boundary_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.vars[i].boundary).collect()
    }

    pub fn free_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.vars[i].boundary).collect()
    }

    /// A table of the given positions only, in the given order.
    pub fn restrict(&self, positions: &[usize]) -> VarTable {
        VarTable {
            vars: positions.iter().map(|&i| self.vars[i].clone()).collect(),
        }
    }
}

/// A sparse polynomial over a fixed variable table and coefficient field.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Arc<VarTable>,
    field: Field,
    terms: BTreeMap<ExponentVector, Scalar>,
}

impl Polynomial {
    pub fn zero(vars: Arc<VarTable>, field: Field) -> Self {
        Polynomial { vars, field, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<VarTable>, field: Field, c: Scalar) -> Self {
        let arity = vars.len();
        Self::monomial(vars, field, ExponentVector::zeros(arity), c)
    }

    pub fn one(vars: Arc<VarTable>, field: Field) -> Self {
        Self::constant(vars, field, field.one())
    }

    pub fn variable(vars: Arc<VarTable>, field: Field, index: usize) -> Self {
        let arity = vars.len();
        Self::monomial(vars, field, ExponentVector::unit(arity, index, 1), field.one())
    }

    pub fn monomial(vars: Arc<VarTable>, field: Field, exp: ExponentVector, coeff: Scalar) -> Self {
        assert_eq!(exp.len(), vars.len(), "exponent arity must match the variable table");
        assert!(field.contains(&coeff), "coefficient outside the model field");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Polynomial { vars, field, terms }
    }

    /// Sums the given terms; repeated exponents are combined and zeros pruned.
    pub fn from_terms(
        vars: Arc<VarTable>,
        field: Field,
        terms: impl IntoIterator<Item = (ExponentVector, Scalar)>,
    ) -> Self {
        let mut p = Polynomial::zero(vars, field);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent arity must match the variable table");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: ExponentVector, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order (the printing order).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.keys().rev()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Option<&Scalar> {
        self.terms.get(e)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_zero())
    }

    /// The constant value, if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(self.field.zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// `Some(e)` when the polynomial is exactly `x^e` with coefficient 1.
    pub fn as_unit_monomial(&self) -> Option<&ExponentVector> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        c.is_one().then_some(e)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.total_degree()).max()
    }

    /// Minimum over terms of the exponent sum at `positions`: the order of
    /// vanishing along the coordinate subspace cut out by those variables.
    /// `None` for the zero polynomial.
    pub fn order_along(&self, positions: &[usize]) -> Option<u64> {
        self.terms.keys().map(|e| e.degree_on(positions)).min()
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field, other.field));
        }
        if !Arc::ptr_eq(&self.vars, &other.vars) && self.vars != other.vars {
            return Err(PolyError::VarTableMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = Polynomial::zero(self.vars.clone(), self.field);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.checked_add(eb)?, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        assert!(self.field.contains(c), "scalar outside the polynomial's field");
        if c.is_zero() {
            return Polynomial::zero(self.vars.clone(), self.field);
        }
        Polynomial {
            vars: self.vars.clone(),
            field: self.field,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::one(self.vars.clone(), self.field);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact division by `x_var^power`; fails if some term has a smaller exponent.
    pub fn divide_by_variable_power(&self, var: usize, power: u32) -> Result<Polynomial, PolyError> {
        if var >= self.arity() {
            return Err(PolyError::IndexOutOfRange(var));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.get(var) < power {
                return Err(PolyError::NotDivisible {
                    var: self.vars.name(var).to_string(),
                    power,
                });
            }
            let mut v = e.clone().into_vec();
            v[var] -= power;
            terms.insert(ExponentVector::new(v), c.clone());
        }
        Ok(Polynomial { vars: self.vars.clone(), field: self.field, terms })
    }

    /// Groups terms by their exponents on `boundary`:
    /// `f = Σ_e f_e · x_B^e` with each `f_e` a nonzero polynomial in the
    /// remaining variables. Pairs come in descending graded-lex order of `e`.
    pub fn boundary_decomposition(
        &self,
        boundary: &[usize],
    ) -> Result<Vec<(ExponentVector, Polynomial)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if let Some(&bad) = boundary.iter().find(|&&i| i >= self.arity()) {
            return Err(PolyError::IndexOutOfRange(bad));
        }
        let rest: Vec<usize> = (0..self.arity()).filter(|i| !boundary.contains(i)).collect();
        let rest_vars = Arc::new(self.vars.restrict(&rest));
        let mut groups: BTreeMap<ExponentVector, Vec<(ExponentVector, Scalar)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            groups
                .entry(e.select(boundary))
                .or_default()
                .push((e.select(&rest), c.clone()));
        }
        Ok(groups
            .into_iter()
            .rev()
            .map(|(b, ts)| (b, Polynomial::from_terms(rest_vars.clone(), self.field, ts)))
            .collect())
    }

    /// Boundary exponents occurring in the polynomial (the keys of
    /// [`boundary_decomposition`](Self::boundary_decomposition)).
    pub fn boundary_exponents(&self, boundary: &[usize]) -> Vec<ExponentVector> {
        let mut out: Vec<ExponentVector> = self.terms.keys().map(|e| e.select(boundary)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Largest monomial in the `positions` variables dividing every term.
    pub fn monomial_content(&self, positions: &[usize]) -> ExponentVector {
        let mut content = vec![u32::MAX; positions.len()];
        for e in self.terms.keys() {
            for (slot, &i) in content.iter_mut().zip(positions) {
                *slot = (*slot).min(e.get(i));
            }
        }
        if self.is_zero() {
            content.iter_mut().for_each(|c| *c = 0);
        }
        ExponentVector::new(content)
    }

    /// Same polynomial, re-expressed over an equal-length variable table.
    /// Used when only names or flags differ.
    pub fn with_vars(&self, vars: Arc<VarTable>) -> Result<Polynomial, PolyError> {
        if vars.len() != self.arity() {
            return Err(PolyError::ArityMismatch { expected: self.arity(), found: vars.len() });
        }
        Ok(Polynomial { vars, field: self.field, terms: self.terms.clone() })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.is_zero() {
                factors.push(mag.to_string());
            }
            for (j, &k) in e.as_slice().iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(self.vars.name(j).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(j), k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({} over {})", self, self.field)
    }
}
