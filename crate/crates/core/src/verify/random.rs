//! Seeded random inputs. Each instance gets its own ChaCha stream, so suites
//! produce the same instances whether they run sequentially or in parallel.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fan::{declared_table, IdealSheafModel};
use crate::field::{Field, Scalar};
use crate::poly::{is_invertible, ExponentVector, Polynomial, VarTable};

pub type InstanceRng = ChaCha8Rng;

/// The generator for instance `index` of a run with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> InstanceRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

const BOUNDARY_NAMES: [&str; 4] = ["x", "y", "z", "w"];
const FREE_NAMES: [&str; 2] = ["u", "v"];

fn boundary_name(i: usize) -> String {
    BOUNDARY_NAMES.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string())
}

fn free_name(i: usize) -> String {
    FREE_NAMES.get(i).map_or_else(|| format!("u{i}"), |s| s.to_string())
}

/// Shape of random polynomial ideals.
#[derive(Clone, Debug)]
pub struct IdealShape {
    pub boundary: RangeInclusive<usize>,
    pub free: RangeInclusive<usize>,
    pub max_degree: u32,
    pub generators: RangeInclusive<usize>,
    pub terms: RangeInclusive<usize>,
    pub coeff_bound: i64,
}

impl Default for IdealShape {
    fn default() -> Self {
        IdealShape {
            boundary: 2..=3,
            free: 0..=2,
            max_degree: 5,
            generators: 1..=4,
            terms: 1..=4,
            coeff_bound: 3,
        }
    }
}

fn table(b: usize, f: usize) -> Arc<VarTable> {
    let boundary: Vec<String> = (0..b).map(boundary_name).collect();
    let names: Vec<String> = boundary.iter().cloned().chain((0..f).map(free_name)).collect();
    declared_table(&names, &boundary).expect("fixed names are valid")
}

/// Exponent vector of total degree at most `max_degree`.
fn random_exponent<R: Rng>(rng: &mut R, arity: usize, max_degree: u32) -> ExponentVector {
    let budget = rng.gen_range(0..=max_degree);
    let mut v = vec![0u32; arity];
    for _ in 0..budget {
        v[rng.gen_range(0..arity)] += 1;
    }
    ExponentVector::new(v)
}

/// A nonzero scalar `±1..=±bound` (retried until nonzero in the field).
pub fn random_nonzero<R: Rng>(rng: &mut R, field: Field, bound: i64) -> Scalar {
    loop {
        let mut v = rng.gen_range(1..=bound);
        if rng.gen_bool(0.5) {
            v = -v;
        }
        let s = field.from_i64(v);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Random invertible `k × k` matrix with small entries.
pub fn random_free_matrix<R: Rng>(rng: &mut R, field: Field, k: usize) -> Vec<Vec<Scalar>> {
    loop {
        let m: Vec<Vec<Scalar>> =
            (0..k).map(|_| (0..k).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect()).collect();
        if is_invertible(&m) {
            return m;
        }
    }
}

fn random_polynomial<R: Rng>(rng: &mut R, vars: &Arc<VarTable>, field: Field, shape: &IdealShape) -> Polynomial {
    loop {
        let n = rng.gen_range(shape.terms.clone());
        let boundary = vars.boundary_indices();
        let mut terms: BTreeMap<ExponentVector, Scalar> = BTreeMap::new();
        for _ in 0..n {
            let mut e = random_exponent(rng, vars.len(), shape.max_degree);
            // Terms free of boundary variables make the hull the unit ideal;
            // keep them, but rarely, so most instances have work to do.
            for _ in 0..3 {
                if e.degree_on(&boundary) > 0 {
                    break;
                }
                e = random_exponent(rng, vars.len(), shape.max_degree);
            }
            let c = random_nonzero(rng, field, shape.coeff_bound);
            terms.entry(e).or_insert(c);
        }
        let p = Polynomial::from_terms(vars.clone(), field, terms.into_iter().collect::<Vec<_>>());
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random initial model with polynomial generators.
pub fn random_ideal_model<R: Rng>(rng: &mut R, shape: &IdealShape, field: Field) -> Result<IdealSheafModel> {
    let b = rng.gen_range(shape.boundary.clone());
    let f = rng.gen_range(shape.free.clone());
    let vars = table(b, f);
    let k = rng.gen_range(shape.generators.clone());
    let gens = (0..k).map(|_| random_polynomial(rng, &vars, field, shape)).collect();
    IdealSheafModel::initial(vars, gens, field)
}

/// Coefficient-1 monomial generators over `arity` boundary variables and no
/// free ones, exponents in `0..=max_exponent`.
pub fn random_monomial_exponents<R: Rng>(rng: &mut R, arity: usize, max_exponent: u32) -> Vec<Vec<u32>> {
    let k = rng.gen_range(1..=4);
    (0..k)
        .map(|_| (0..arity).map(|_| rng.gen_range(0..=max_exponent)).collect())
        .collect()
}

pub fn monomial_model(exponents: &[Vec<u32>], field: Field) -> Result<IdealSheafModel> {
    let arity = exponents[0].len();
    let vars = table(arity, 0);
    let gens = exponents
        .iter()
        .map(|e| Polynomial::monomial(vars.clone(), field, ExponentVector::new(e.clone()), field.one()))
        .collect();
    IdealSheafModel::initial(vars, gens, field)
}

/// A random monomial model with boundary arity in `1..=max_arity`.
pub fn random_monomial_model<R: Rng>(
    rng: &mut R,
    max_arity: usize,
    max_exponent: u32,
    field: Field,
) -> Result<IdealSheafModel> {
    let arity = rng.gen_range(1..=max_arity);
    monomial_model(&random_monomial_exponents(rng, arity, max_exponent), field)
}

/// A random principal model whose generator is divisible by no boundary
/// coordinate: the boundary-monomial content is divided out.
pub fn random_principal_model<R: Rng>(rng: &mut R, shape: &IdealShape, field: Field) -> Result<IdealSheafModel> {
    let b = rng.gen_range(shape.boundary.clone());
    let f = rng.gen_range(shape.free.clone());
    let vars = table(b, f);
    let mut p = random_polynomial(rng, &vars, field, shape);
    let boundary = vars.boundary_indices();
    let content = p.monomial_content(&boundary);
    for (&pos, &c) in boundary.iter().zip(content.as_slice()) {
        if c > 0 {
            p = p.divide_by_variable_power(pos, c)?;
        }
    }
    IdealSheafModel::initial(vars, vec![p], field)
}
