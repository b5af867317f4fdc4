//! Equimultiplicity and the controlled transform `π⁻¹_* J = O(mE) · π* J`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{Chart, ChildChart, Cone, DivisorId, IdealSheafModel};
use crate::monomial_ideal::MonomialIdeal;
use crate::par::Execution;
use crate::poly::{ExponentVector, MonomialMap, PolyError};

/// How one child chart arose: parent chart, exceptional coordinate, and the
/// exponent images of the parent's variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildRecord {
    pub parent: Cone,
    pub chart: Cone,
    pub exceptional: DivisorId,
    pub images: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpStep {
    pub index: usize,
    pub center: Cone,
    pub center_names: Vec<String>,
    pub multiplicity: u64,
    /// The new exceptional divisor, or the center's own divisor for a
    /// codimension-1 center.
    pub new_divisor: DivisorId,
    pub children: Vec<ChildRecord>,
}

/// Multiplicity of the model's ideal along the stratum `cone`, read from the
/// hull of the first chart containing it.
pub fn cone_multiplicity(model: &IdealSheafModel, cone: &Cone) -> Result<u64> {
    let chart = model
        .charts_containing(cone)
        .next()
        .ok_or_else(|| Error::ConeNotInFan(cone.clone()))?;
    let positions = chart.positions_of(cone).expect("containing chart");
    Ok(chart.hull().multiplicity_along(&positions)?)
}

/// `(equimultiple, m)`: `m` is the multiplicity along `cone`, and the flag is
/// true iff every stratum inside it (every cone containing `cone`) has the
/// same multiplicity in every chart.
pub fn is_toroidally_equimultiple(model: &IdealSheafModel, cone: &Cone) -> Result<(bool, u64)> {
    let m = cone_multiplicity(model, cone)?;
    for chart in model.charts_containing(cone) {
        for face in chart.cone().faces() {
            if !cone.is_face_of(&face) {
                continue;
            }
            let positions = chart.positions_of(&face).expect("face of chart");
            if chart.hull().multiplicity_along(&positions)? != m {
                return Ok((false, m));
            }
        }
    }
    Ok((true, m))
}

pub fn controlled_transform(model: &IdealSheafModel, center: &Cone) -> Result<(IdealSheafModel, BlowUpStep)> {
    controlled_transform_with(model, center, Execution::default())
}

/// Blows up `center` and replaces the ideal by its controlled transform.
/// Child charts are computed independently; the new model is returned only
/// if all of them succeed.
pub fn controlled_transform_with(
    model: &IdealSheafModel,
    center: &Cone,
    exec: Execution,
) -> Result<(IdealSheafModel, BlowUpStep)> {
    if center.is_empty() {
        return Err(Error::EmptyCenter);
    }
    let (equimultiple, m) = is_toroidally_equimultiple(model, center)?;
    if !equimultiple {
        return Err(Error::NotEquimultiple { cone: center.clone(), multiplicity: m });
    }
    if m == 0 {
        return Err(Error::TrivialCenter(center.clone()));
    }
    let power = u32::try_from(m).map_err(|_| PolyError::ExponentOverflow)?;
    let sub = model.star_subdivide(center)?;
    let built: Vec<Result<Chart>> = exec.map(&sub.children, |child| {
        let parent = model.chart(&child.parent).expect("parent chart exists");
        transform_chart(parent, child, power)
    });
    let mut charts: BTreeMap<Cone, Arc<Chart>> = model
        .chart_map()
        .iter()
        .filter(|(k, _)| !center.is_face_of(k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    for chart in built {
        let chart = chart?;
        charts.insert(chart.cone().clone(), Arc::new(chart));
    }
    let step = BlowUpStep {
        index: model.step(),
        center: center.clone(),
        center_names: model.cone_names(center),
        multiplicity: m,
        new_divisor: sub.new_divisor,
        children: sub
            .children
            .iter()
            .map(|c| ChildRecord {
                parent: c.parent.clone(),
                chart: c.cone.clone(),
                exceptional: sub.new_divisor,
                images: c.map.images().iter().map(|e| e.as_slice().to_vec()).collect(),
            })
            .collect(),
    };
    let next = model.with_charts(sub.registry, charts, model.step() + 1);
    Ok((next, step))
}

fn transform_chart(parent: &Chart, child: &ChildChart, power: u32) -> Result<Chart> {
    let mut gens = Vec::with_capacity(parent.generators().len());
    for g in parent.generators() {
        let pulled = g.substitute_monomial_map(&child.map)?;
        let divided = pulled
            .divide_by_variable_power(child.exceptional_position, power)
            .map_err(|source| Error::Divisibility { chart: child.cone.clone(), source })?;
        gens.push(divided);
    }
    Chart::new(child.cone.clone(), child.map.target().clone(), gens)
}

/// Controlled transform of a monomial ideal over the boundary coordinates:
/// each generator is pushed through the chart map and `m` is subtracted from
/// its exceptional coordinate.
pub fn monomial_transform(
    ideal: &MonomialIdeal,
    map: &MonomialMap,
    exceptional_position: usize,
    m: u64,
) -> Result<MonomialIdeal> {
    let source_len = map.source().len();
    let boundary = ideal.arity();
    let target_boundary: Vec<usize> = map.target().boundary_indices();
    let m = u32::try_from(m).map_err(|_| PolyError::ExponentOverflow)?;
    let mut out = Vec::with_capacity(ideal.generators().len());
    for g in ideal.generators() {
        let mut padded = g.as_slice().to_vec();
        padded.resize(source_len, 0);
        debug_assert!(padded[boundary..].iter().all(|&e| e == 0));
        let image = map.apply(&ExponentVector::new(padded))?;
        let mut v = image.select(&target_boundary).into_vec();
        v[exceptional_position] = v[exceptional_position].checked_sub(m).ok_or_else(|| {
            Error::Divisibility {
                chart: Cone::default(),
                source: PolyError::NotDivisible {
                    var: map.target().name(exceptional_position).to_string(),
                    power: m,
                },
            }
        })?;
        out.push(ExponentVector::new(v));
    }
    Ok(MonomialIdeal::minimal_generators(target_boundary.len(), out)?)
}
