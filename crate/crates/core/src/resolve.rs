//! Center selection and the resolution driver.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{Cone, IdealSheafModel};
use crate::hull::hull_model;
use crate::par::Execution;
use crate::transform::{controlled_transform_with, BlowUpStep};

pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CenterChoice {
    Resolved,
    Center { cone: Cone, multiplicity: u64 },
}

/// A deterministic rule picking the next blow-up center.
///
/// Implementations must only return centers along which the ideal is
/// toroidally equimultiple with positive multiplicity, and should read only
/// hull data so that an ideal and its hull get the same sequence.
pub trait Strategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn select_center(&self, model: &IdealSheafModel) -> Result<CenterChoice>;
}

/// Among the cones of maximal multiplicity, the first in graded-lex order of
/// divisor ids. The first such cone is automatically inclusion-minimal.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinMaxMult;

impl Strategy for MinMaxMult {
    fn name(&self) -> &'static str {
        "min-max-mult"
    }

    fn select_center(&self, model: &IdealSheafModel) -> Result<CenterChoice> {
        let mults = cone_multiplicities(model, Execution::default())?;
        let max = mults.values().copied().max().unwrap_or(0);
        if max == 0 {
            return Ok(CenterChoice::Resolved);
        }
        let (cone, m) = mults
            .into_iter()
            .find(|(_, m)| *m == max)
            .expect("maximum is attained");
        Ok(CenterChoice::Center { cone, multiplicity: m })
    }
}

pub fn strategy_by_name(name: &str) -> Result<Box<dyn Strategy>> {
    match name {
        "min-max-mult" => Ok(Box::new(MinMaxMult)),
        other => Err(Error::UnknownStrategy(other.to_string())),
    }
}

pub const STRATEGY_NAMES: &[&str] = &["min-max-mult"];

/// Multiplicity of every nonempty cone lying in a chart with non-unit hull,
/// computed from chart hulls. Cones seen only in unit-hull charts have
/// multiplicity 0 and are omitted.
pub fn cone_multiplicities(model: &IdealSheafModel, exec: Execution) -> Result<BTreeMap<Cone, u64>> {
    let active: Vec<_> = model.charts().filter(|c| !c.hull().is_unit()).cloned().collect();
    let per_chart = exec.map(&active, |chart| {
        chart
            .cone()
            .faces()
            .into_iter()
            .filter(|f| !f.is_empty())
            .map(|face| {
                let positions = chart.positions_of(&face).expect("face of chart");
                chart.hull().multiplicity_along(&positions).map(|m| (face, m))
            })
            .collect::<std::result::Result<Vec<_>, _>>()
    });
    let mut out = BTreeMap::new();
    for list in per_chart {
        for (cone, m) in list? {
            if let Some(prev) = out.insert(cone.clone(), m) {
                if prev != m {
                    return Err(Error::InconsistentCharts(cone));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Resolved,
    StepCapExceeded,
}

/// A recorded run of the driver: every center, the final model and why it stopped.
#[derive(Clone, Debug)]
pub struct BlowUpTrace {
    pub strategy: String,
    pub max_steps: usize,
    pub initial: IdealSheafModel,
    pub steps: Vec<BlowUpStep>,
    pub final_model: IdealSheafModel,
    pub status: Status,
}

impl BlowUpTrace {
    pub fn centers(&self) -> Vec<(Cone, u64)> {
        self.steps.iter().map(|s| (s.center.clone(), s.multiplicity)).collect()
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.steps.iter().map(|s| s.multiplicity).collect()
    }
}

pub fn resolve_sequence(model: &IdealSheafModel, strategy: &dyn Strategy, max_steps: usize) -> Result<BlowUpTrace> {
    resolve_sequence_with(model, strategy, max_steps, |_, _, _| {})
}

/// Runs the driver, calling `observer(before, step, after)` after every step.
pub fn resolve_sequence_with<F>(
    model: &IdealSheafModel,
    strategy: &dyn Strategy,
    max_steps: usize,
    mut observer: F,
) -> Result<BlowUpTrace>
where
    F: FnMut(&IdealSheafModel, &BlowUpStep, &IdealSheafModel),
{
    let mut current = model.clone();
    let mut steps = Vec::new();
    loop {
        let choice = strategy.select_center(&current)?;
        let cone = match choice {
            CenterChoice::Resolved => {
                return Ok(finish(strategy, max_steps, model, steps, current, Status::Resolved));
            }
            CenterChoice::Center { cone, .. } => cone,
        };
        if steps.len() >= max_steps {
            return Ok(finish(strategy, max_steps, model, steps, current, Status::StepCapExceeded));
        }
        let (next, step) = controlled_transform_with(&current, &cone, Execution::default())?;
        observer(&current, &step, &next);
        steps.push(step);
        current = next;
    }
}

fn finish(
    strategy: &dyn Strategy,
    max_steps: usize,
    initial: &IdealSheafModel,
    steps: Vec<BlowUpStep>,
    final_model: IdealSheafModel,
    status: Status,
) -> BlowUpTrace {
    BlowUpTrace {
        strategy: strategy.name().to_string(),
        max_steps,
        initial: initial.clone(),
        steps,
        final_model,
        status,
    }
}

/// Re-applies a list of centers to the initial model.
pub fn replay(initial: &IdealSheafModel, centers: &[Cone]) -> Result<IdealSheafModel> {
    let mut current = initial.clone();
    for c in centers {
        current = controlled_transform_with(&current, c, Execution::default())?.0;
    }
    Ok(current)
}

#[derive(Clone, Debug)]
pub struct PairOutcome {
    pub ideal: BlowUpTrace,
    pub hull: BlowUpTrace,
    /// Same centers with the same multiplicities and the same status.
    pub equal: bool,
}

/// Resolves an ideal and its hull model with the same strategy and compares
/// the center sequences.
pub fn resolve_pair(
    ideal_model: &IdealSheafModel,
    hull_model: &IdealSheafModel,
    strategy: &dyn Strategy,
    max_steps: usize,
) -> Result<PairOutcome> {
    let ideal = resolve_sequence(ideal_model, strategy, max_steps)?;
    let hull = resolve_sequence(hull_model, strategy, max_steps)?;
    let equal = ideal.status == hull.status && ideal.centers() == hull.centers();
    Ok(PairOutcome { ideal, hull, equal })
}

/// [`resolve_pair`] with the hull model derived from `model`.
pub fn resolve_with_hull(model: &IdealSheafModel, strategy: &dyn Strategy, max_steps: usize) -> Result<PairOutcome> {
    resolve_pair(model, &hull_model(model)?, strategy, max_steps)
}
