//! Toroidal hulls.
//!
//! In a chart with boundary coordinates `x_1..x_r`, write each generator as
//! `f = Σ_e f_e(free vars) · x^e`. The hull is the monomial ideal generated by
//! every `x^e` with `f_e ≢ 0`. Stratum multiplicities of the ideal are read
//! off the generator terms directly; they agree with those of the hull.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fan::{Chart, Cone, IdealSheafModel};
use crate::field::Field;
use crate::monomial_ideal::{MonomialIdeal, StratumSemigroupFamily};
use crate::poly::{ExponentVector, Polynomial};

/// The hull of one chart with, for each minimal generator, the index of the
/// first chart generator whose boundary decomposition contains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartHull {
    pub chart: Cone,
    pub ideal: MonomialIdeal,
    pub provenance: Vec<(ExponentVector, usize)>,
}

/// Hull of the ideal generated by `generators`, over the coordinates at `boundary`.
pub fn hull_ideal(generators: &[Polynomial], boundary: &[usize]) -> Result<MonomialIdeal> {
    if generators.is_empty() || generators.iter().all(|g| g.is_zero()) {
        return Err(Error::ZeroIdeal);
    }
    let exps = generators.iter().flat_map(|g| g.boundary_exponents(boundary));
    Ok(MonomialIdeal::minimal_generators(boundary.len(), exps)?)
}

pub fn toroidal_hull(chart: &Chart) -> Result<ChartHull> {
    let boundary = chart.boundary_positions();
    let mut first_source: BTreeMap<ExponentVector, usize> = BTreeMap::new();
    for (i, g) in chart.generators().iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        for (e, _) in g.boundary_decomposition(&boundary)? {
            first_source.entry(e).or_insert(i);
        }
    }
    if first_source.is_empty() {
        return Err(Error::ZeroIdeal);
    }
    let ideal = MonomialIdeal::minimal_generators(boundary.len(), first_source.keys().cloned())?;
    let provenance = ideal
        .generators()
        .iter()
        .map(|g| (g.clone(), first_source[g]))
        .collect();
    Ok(ChartHull { chart: chart.cone().clone(), ideal, provenance })
}

/// Multiplicity of the chart ideal along the stratum `face`: the least
/// exponent sum on the face's coordinates over all terms of all generators.
pub fn stratum_multiplicity(chart: &Chart, face: &Cone) -> Result<u64> {
    let positions = chart
        .positions_of(face)
        .ok_or_else(|| Error::ConeNotInFan(face.clone()))?;
    chart
        .generators()
        .iter()
        .filter_map(|g| g.order_along(&positions))
        .min()
        .ok_or(Error::ZeroIdeal)
}

/// Global hull data: every chart's hull and the stratum semigroups `M_σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafHull {
    pub charts: BTreeMap<Cone, ChartHull>,
    /// `M_σ` taken from the first chart containing `σ`, keyed by ray ids.
    pub family: StratumSemigroupFamily<u32>,
    /// Every chart's answer for every cone it contains.
    pub answers: BTreeMap<Cone, Vec<(Cone, MonomialIdeal)>>,
}

impl SheafHull {
    /// Cones on which two charts produce different semigroups.
    pub fn inconsistent_cones(&self) -> Vec<Cone> {
        self.answers
            .iter()
            .filter(|(_, answers)| answers.windows(2).any(|w| w[0].1 != w[1].1))
            .map(|(cone, _)| cone.clone())
            .collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistent_cones().is_empty()
    }
}

pub fn sheaf_hull(model: &IdealSheafModel) -> Result<SheafHull> {
    let mut charts = BTreeMap::new();
    let mut answers: BTreeMap<Cone, Vec<(Cone, MonomialIdeal)>> = BTreeMap::new();
    for chart in model.charts() {
        let h = toroidal_hull(chart)?;
        for face in chart.cone().faces() {
            let positions = chart.positions_of(&face).expect("face of the chart");
            answers
                .entry(face)
                .or_default()
                .push((chart.cone().clone(), h.ideal.project(&positions)?));
        }
        charts.insert(chart.cone().clone(), h);
    }
    let mut family = StratumSemigroupFamily::new();
    for (cone, list) in &answers {
        family.insert(cone.ids(), list[0].1.clone());
    }
    Ok(SheafHull { charts, family, answers })
}

/// The same fan with every chart's generators replaced by its hull monomials.
pub fn hull_model(model: &IdealSheafModel) -> Result<IdealSheafModel> {
    let mut charts = BTreeMap::new();
    for chart in model.charts() {
        let gens = monomial_generators(chart.hull(), chart.vars(), model.field());
        let c = Chart::new(chart.cone().clone(), chart.vars().clone(), gens)?;
        charts.insert(chart.cone().clone(), Arc::new(c));
    }
    Ok(model.with_charts(model.registry().clone(), charts, model.step()))
}

/// Coefficient-1 monomials `x^g` for the minimal generators `g` of `ideal`,
/// padded with zero exponents on the free variables.
pub fn monomial_generators(
    ideal: &MonomialIdeal,
    vars: &Arc<crate::poly::VarTable>,
    field: Field,
) -> Vec<Polynomial> {
    ideal
        .generators()
        .iter()
        .map(|g| {
            let mut v = g.as_slice().to_vec();
            v.resize(vars.len(), 0);
            Polynomial::monomial(vars.clone(), field, ExponentVector::new(v), field.one())
        })
        .collect()
}
