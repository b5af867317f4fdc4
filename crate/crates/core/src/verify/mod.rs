//! Executable checks for the hull, transform and resolution properties, plus
//! the seeded randomized suites built from them.

mod random;
mod suite;

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Signed};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{Chart, Cone, IdealSheafModel};
use crate::hull::{hull_ideal, sheaf_hull, stratum_multiplicity, toroidal_hull};
use crate::monomial_ideal::MonomialIdeal;
use crate::par::Execution;
use crate::poly::{ExponentVector, MonomialMap, Polynomial};
use crate::resolve::{resolve_sequence_with, resolve_with_hull, Status, Strategy};
use crate::transform::{controlled_transform_with, monomial_transform, BlowUpStep};

pub use random::{
    random_free_matrix, random_ideal_model, random_monomial_model, random_nonzero, random_principal_model,
    instance_rng, monomial_model, random_monomial_exponents, IdealShape, InstanceRng,
};
pub use suite::{
    characteristic_suite, commutation_suite, divisor_suite, equivalence_suite, hull_suite, termination_suite,
    SuiteConfig, SuiteOutcome,
};

pub const DEFAULT_SEED: u64 = 0x7051_da1e;

/// Minimal data needed to re-run a failing check by hand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reproducer {
    pub chart: Vec<u32>,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<Vec<u32>>,
}

impl Reproducer {
    pub fn from_chart(chart: &Chart, cone: Option<&Cone>) -> Self {
        Reproducer {
            chart: chart.cone().ids(),
            variables: chart.vars().names(),
            generators: chart.generators().iter().map(|g| g.to_string()).collect(),
            cone: cone.map(|c| c.ids()),
        }
    }

    pub(crate) fn from_model(model: &IdealSheafModel, cone: Option<&Cone>) -> Self {
        let chart = match cone {
            Some(c) => model.charts_containing(c).next(),
            None => None,
        }
        .or_else(|| model.charts().next())
        .expect("a model has charts");
        Reproducer::from_chart(chart, cone)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    /// The property the check asserts, in words.
    pub property: String,
    pub passed: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reproducer: Option<Reproducer>,
}

impl CheckEntry {
    pub(crate) fn pass(name: &str, property: &str, detail: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            property: property.into(),
            passed: true,
            detail: detail.into(),
            reproducer: None,
        }
    }

    pub(crate) fn fail(name: &str, property: &str, detail: impl Into<String>, reproducer: Reproducer) -> Self {
        CheckEntry {
            name: name.into(),
            property: property.into(),
            passed: false,
            detail: detail.into(),
            reproducer: Some(reproducer),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn new(seed: u64) -> Self {
        VerificationReport { seed, entries: Vec::new() }
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    /// Writes the failing entries (with their reproducers) as JSON. Does
    /// nothing when everything passed.
    pub fn persist_failures(&self, path: &Path) -> std::io::Result<bool> {
        let failing: Vec<&CheckEntry> = self.failures().collect();
        if failing.is_empty() {
            return Ok(false);
        }
        let body = serde_json::json!({ "seed": self.seed, "failures": failing });
        let mut text = serde_json::to_string_pretty(&body).expect("report serializes");
        text.push('\n');
        crate::trace::write_atomic(path, text.as_bytes())?;
        Ok(true)
    }
}

/// Names and property statements of every check.
pub mod checks {
    pub const RESOLVED_EQUIVALENCE: (&str, &str) = (
        "resolved-equivalence",
        "every chart hull is the unit ideal iff every maximal cone has multiplicity 0",
    );
    pub const EXTENSIVITY: (&str, &str) =
        ("hull-extensivity", "every boundary exponent of every generator lies in the hull");
    pub const IDEMPOTENCE: (&str, &str) = ("hull-idempotence", "the hull of the hull is the hull");
    pub const MINIMALITY: (&str, &str) = (
        "hull-minimality",
        "dropping any minimal hull generator loses some boundary exponent of some generator",
    );
    pub const MULTIPLICITY: (&str, &str) = (
        "multiplicity-preservation",
        "the ideal and its hull have the same multiplicity along every stratum",
    );
    pub const INVARIANCE: (&str, &str) = (
        "local-isomorphism-invariance",
        "the hull is unchanged by boundary scalings, free translations and free linear changes",
    );
    pub const PRESENTATION: (&str, &str) = (
        "generator-independence",
        "adding combinations of the generators does not change the hull",
    );
    pub const COMMUTATION: (&str, &str) = (
        "hull-commutation",
        "the hull of the controlled transform is the monomial transform of the hull",
    );
    pub const EXCEPTIONAL_BOUND: (&str, &str) = (
        "exceptional-bound",
        "after a step of multiplicity m, strata on the new divisor have multiplicity at most m",
    );
    pub const SMOOTHNESS: (&str, &str) = ("fan-smoothness", "every maximal cone has a unimodular ray matrix");
    pub const GLUING: (&str, &str) = (
        "gluing-consistency",
        "charts sharing a stratum give the same semigroup, and the family is projection-compatible",
    );
    pub const SEQUENCE: (&str, &str) = (
        "sequence-equivalence",
        "the ideal and its hull get identical center sequences",
    );
    pub const DIVISOR: (&str, &str) = (
        "divisor-corollary",
        "the strict transform of a hypersurface containing no boundary divisor misses every stratum",
    );
    pub const TERMINATION: (&str, &str) = ("termination", "the strategy resolves within the step cap");
    pub const CHARACTERISTIC: (&str, &str) = (
        "characteristic-independence",
        "monomial inputs give identical sequences over Q and small prime fields",
    );
    pub const SOUNDNESS: (&str, &str) = (
        "center-soundness",
        "each center is equimultiple with positive multiplicity and the maximal multiplicity never grows",
    );
}

/// Every chart hull is the unit ideal.
pub fn is_toroidally_resolved(model: &IdealSheafModel) -> bool {
    model.charts().all(|c| c.hull().is_unit())
}

/// Compares [`is_toroidally_resolved`] with the term-level multiplicity of
/// every maximal cone.
pub fn check_resolved_equivalence(model: &IdealSheafModel) -> Result<CheckEntry> {
    let (name, property) = checks::RESOLVED_EQUIVALENCE;
    let by_hull = is_toroidally_resolved(model);
    let mut by_mult = true;
    for chart in model.charts() {
        if stratum_multiplicity(chart, chart.cone())? != 0 {
            by_mult = false;
            break;
        }
    }
    if by_hull == by_mult {
        Ok(CheckEntry::pass(name, property, format!("resolved = {by_hull}")))
    } else {
        Ok(CheckEntry::fail(
            name,
            property,
            format!("hull test says {by_hull}, multiplicity test says {by_mult}"),
            Reproducer::from_model(model, None),
        ))
    }
}

fn hull_from_scratch(chart: &Chart) -> Result<MonomialIdeal> {
    Ok(toroidal_hull(chart)?.ideal)
}

pub fn check_hull_extensivity(chart: &Chart) -> Result<CheckEntry> {
    let (name, property) = checks::EXTENSIVITY;
    let hull = hull_from_scratch(chart)?;
    let boundary = chart.boundary_positions();
    for g in chart.generators() {
        for (e, _) in g.terms() {
            let b = e.select(&boundary);
            if !hull.contains(&b)? {
                return Ok(CheckEntry::fail(
                    name,
                    property,
                    format!("exponent {:?} of `{g}` is outside the hull", b.as_slice()),
                    Reproducer::from_chart(chart, None),
                ));
            }
        }
    }
    Ok(CheckEntry::pass(name, property, ""))
}

pub fn check_hull_idempotence(chart: &Chart) -> Result<CheckEntry> {
    let (name, property) = checks::IDEMPOTENCE;
    let hull = hull_from_scratch(chart)?;
    let monomials = crate::hull::monomial_generators(&hull, chart.vars(), chart.field());
    let again = hull_ideal(&monomials, &chart.boundary_positions())?;
    if again == hull {
        Ok(CheckEntry::pass(name, property, ""))
    } else {
        Ok(CheckEntry::fail(
            name,
            property,
            format!("{:?} became {:?}", hull.to_arrays(), again.to_arrays()),
            Reproducer::from_chart(chart, None),
        ))
    }
}

pub fn check_hull_minimality(chart: &Chart) -> Result<CheckEntry> {
    let (name, property) = checks::MINIMALITY;
    let h = toroidal_hull(chart)?;
    let boundary = chart.boundary_positions();
    for (i, (gen, source)) in h.provenance.iter().enumerate() {
        let smaller = h.ideal.without_generator(i);
        // The generator that contributed `gen` must witness the loss.
        let witness = &chart.generators()[*source];
        let mut lost = false;
        for (e, _) in witness.terms() {
            let b = e.select(&boundary);
            if b == *gen && !smaller.contains(&b)? {
                lost = true;
                break;
            }
        }
        if !lost {
            return Ok(CheckEntry::fail(
                name,
                property,
                format!("generator {:?} is redundant", gen.as_slice()),
                Reproducer::from_chart(chart, None),
            ));
        }
    }
    Ok(CheckEntry::pass(name, property, ""))
}

pub fn check_multiplicity_preservation(chart: &Chart) -> Result<CheckEntry> {
    let (name, property) = checks::MULTIPLICITY;
    let hull = hull_from_scratch(chart)?;
    for face in chart.cone().faces() {
        let positions = chart.positions_of(&face).expect("face of the chart");
        let of_ideal = stratum_multiplicity(chart, &face)?;
        let of_hull = hull.multiplicity_along(&positions)?;
        if of_ideal != of_hull {
            return Ok(CheckEntry::fail(
                name,
                property,
                format!("along {face}: ideal {of_ideal}, hull {of_hull}"),
                Reproducer::from_chart(chart, Some(&face)),
            ));
        }
    }
    Ok(CheckEntry::pass(name, property, ""))
}

/// Runs `trials` random stratification-preserving coordinate changes: a
/// boundary scaling, a translation of the free variables and (when there are
/// free variables) an invertible linear change among them.
pub fn check_local_isomorphism_invariance<R: Rng>(chart: &Chart, trials: usize, rng: &mut R) -> Result<CheckEntry> {
    let (name, property) = checks::INVARIANCE;
    let hull = hull_from_scratch(chart)?;
    let boundary = chart.boundary_positions();
    let free = chart.vars().free_indices();
    let field = chart.field();
    for trial in 0..trials {
        let scalings: Vec<_> = boundary.iter().map(|&i| (i, random_nonzero(rng, field, 5))).collect();
        let shifts: Vec<_> = free.iter().map(|&j| (j, field.from_i64(rng.gen_range(-5..=5)))).collect();
        let matrix = random_free_matrix(rng, field, free.len());
        let mut moved = Vec::with_capacity(chart.generators().len());
        for g in chart.generators() {
            let mut h = g.scale_variables(&scalings)?.translate_nonboundary(&shifts)?;
            if !free.is_empty() {
                h = h.linear_change(&free, &matrix)?;
            }
            moved.push(h);
        }
        let after = hull_ideal(&moved, &boundary)?;
        if after != hull {
            return Ok(CheckEntry::fail(
                name,
                property,
                format!("trial {trial}: {:?} became {:?}", hull.to_arrays(), after.to_arrays()),
                Reproducer::from_chart(chart, None),
            ));
        }
    }
    Ok(CheckEntry::pass(name, property, format!("{trials} trials")))
}

/// Appends random combinations `Σ c_i · m_i · g_i` (monomial multipliers) to
/// the generators and recomputes the hull.
pub fn check_generator_independence<R: Rng>(chart: &Chart, extra: usize, rng: &mut R) -> Result<CheckEntry> {
    let (name, property) = checks::PRESENTATION;
    let hull = hull_from_scratch(chart)?;
    let vars = chart.vars().clone();
    let field = chart.field();
    let mut gens = chart.generators().to_vec();
    for _ in 0..extra {
        let mut combo = Polynomial::zero(vars.clone(), field);
        for g in chart.generators() {
            if rng.gen_bool(0.3) {
                continue;
            }
            let e: Vec<u32> = (0..vars.len()).map(|_| rng.gen_range(0..=1)).collect();
            let m = Polynomial::monomial(vars.clone(), field, ExponentVector::new(e), random_nonzero(rng, field, 3));
            combo = combo.add(&m.mul(g)?)?;
        }
        if !combo.is_zero() {
            gens.push(combo);
        }
    }
    let after = hull_ideal(&gens, &chart.boundary_positions())?;
    if after == hull {
        Ok(CheckEntry::pass(name, property, format!("{} generators", gens.len())))
    } else {
        Ok(CheckEntry::fail(
            name,
            property,
            format!("{:?} became {:?}", hull.to_arrays(), after.to_arrays()),
            Reproducer::from_chart(chart, None),
        ))
    }
}

/// Blows up `center` and compares, in every child chart, the freshly
/// recomputed hull of the transform with the monomial transform of the
/// freshly recomputed parent hull.
pub fn check_hull_commutation(model: &IdealSheafModel, center: &Cone) -> Result<CheckEntry> {
    let (name, property) = checks::COMMUTATION;
    let (next, step) = controlled_transform_with(model, center, Execution::Sequential)?;
    let sub = model.star_subdivide(center)?;
    for child in &sub.children {
        let parent = model.chart(&child.parent).expect("parent chart");
        let parent_hull = hull_from_scratch(parent)?;
        let lhs = hull_from_scratch(next.chart(&child.cone).expect("child chart"))?;
        let rhs = monomial_transform(&parent_hull, &child.map, child.exceptional_position, step.multiplicity)?;
        if lhs != rhs {
            return Ok(CheckEntry::fail(
                name,
                property,
                format!(
                    "chart {}: hull of transform {:?}, transform of hull {:?}",
                    child.cone,
                    lhs.to_arrays(),
                    rhs.to_arrays()
                ),
                Reproducer::from_chart(parent, Some(center)),
            ));
        }
    }
    Ok(CheckEntry::pass(name, property, format!("{} charts", sub.children.len())))
}

/// Finds a cone containing the step's new divisor whose multiplicity after
/// the step exceeds the step's multiplicity.
pub fn exceptional_bound_violation(after: &IdealSheafModel, step: &BlowUpStep) -> Result<Option<(Cone, u64)>> {
    let ray = Cone::new(vec![step.new_divisor]);
    for chart in after.charts_containing(&ray) {
        for face in chart.cone().faces() {
            if !face.contains(step.new_divisor) {
                continue;
            }
            let m = stratum_multiplicity(chart, &face)?;
            if m > step.multiplicity {
                return Ok(Some((face, m)));
            }
        }
    }
    Ok(None)
}

pub fn check_exceptional_bound(after: &IdealSheafModel, step: &BlowUpStep) -> Result<CheckEntry> {
    let (name, property) = checks::EXCEPTIONAL_BOUND;
    match exceptional_bound_violation(after, step)? {
        None => Ok(CheckEntry::pass(name, property, format!("step {}", step.index))),
        Some((cone, m)) => Ok(CheckEntry::fail(
            name,
            property,
            format!("step {}: multiplicity {m} > {} along {cone}", step.index, step.multiplicity),
            Reproducer::from_model(after, Some(&cone)),
        )),
    }
}

pub fn check_smoothness(model: &IdealSheafModel) -> CheckEntry {
    let (name, property) = checks::SMOOTHNESS;
    match model
        .chart_map()
        .keys()
        .find(|c| c.len() != model.boundary_count() || !model.ray_determinant(c).abs().is_one())
    {
        None => CheckEntry::pass(name, property, format!("{} maximal cones", model.chart_count())),
        Some(c) => CheckEntry::fail(
            name,
            property,
            format!("cone {c} has determinant {}", model.ray_determinant(c)),
            Reproducer::from_model(model, Some(c)),
        ),
    }
}

pub fn check_gluing(model: &IdealSheafModel) -> Result<CheckEntry> {
    let (name, property) = checks::GLUING;
    let sh = sheaf_hull(model)?;
    if let Some(cone) = sh.inconsistent_cones().into_iter().next() {
        return Ok(CheckEntry::fail(
            name,
            property,
            format!("charts disagree along {cone}"),
            Reproducer::from_model(model, Some(&cone)),
        ));
    }
    if let Some((small, big)) = sh.family.compatibility_violation() {
        let cone = Cone::from_ids(&small);
        return Ok(CheckEntry::fail(
            name,
            property,
            format!("M along {small:?} is not the projection of M along {big:?}"),
            Reproducer::from_model(model, Some(&cone)),
        ));
    }
    Ok(CheckEntry::pass(name, property, format!("{} strata", sh.family.len())))
}

/// Cap on the resolution run inside [`check_divisor_corollary`].
pub const DIVISOR_MAX_STEPS: usize = 1_000;

/// For a principal ideal `(f)` with `f` divisible by no boundary coordinate:
/// resolves, then in every final chart pulls `f` back through the composed
/// chart maps, strips its boundary-monomial content and requires the result
/// to have unit hull and to agree with the stripped controlled transform.
pub fn check_divisor_corollary(model: &IdealSheafModel, strategy: &dyn Strategy) -> Result<CheckEntry> {
    check_divisor_corollary_audited(model, strategy, None)
}

/// [`check_divisor_corollary`], also feeding every step to `audit`.
pub fn check_divisor_corollary_audited(
    model: &IdealSheafModel,
    strategy: &dyn Strategy,
    mut audit: Option<&mut StepAudit>,
) -> Result<CheckEntry> {
    let (name, property) = checks::DIVISOR;
    if model.step() != 0 || model.chart_count() != 1 {
        return Err(Error::InvalidDocument("the divisor check starts from an initial model".into()));
    }
    let start = model.charts().next().expect("one chart").clone();
    let [f] = start.generators() else {
        return Err(Error::NotPrincipal);
    };
    let boundary = start.boundary_positions();
    let content = f.monomial_content(&boundary);
    if let Some(i) = content.as_slice().iter().position(|&c| c > 0) {
        return Err(Error::BoundaryDivisible(start.vars().name(boundary[i]).to_string()));
    }

    // Images of the initial chart's variables in each current chart.
    let n = start.vars().len();
    let mut lineage: BTreeMap<Cone, Vec<ExponentVector>> = BTreeMap::new();
    lineage.insert(start.cone().clone(), (0..n).map(|i| ExponentVector::unit(n, i, 1)).collect());
    let mut audit_error = None;
    let trace = resolve_sequence_with(model, strategy, DIVISOR_MAX_STEPS, |before, step, after| {
        if let (Some(a), None) = (audit.as_deref_mut(), &audit_error) {
            audit_error = a.observe(before, step, after).err();
        }
        let mut next = lineage.clone();
        for child in &step.children {
            next.remove(&child.parent);
        }
        for child in &step.children {
            let parent = &lineage[&child.parent];
            let images: Vec<ExponentVector> = parent
                .iter()
                .map(|a| compose_exponent(a, &child.images))
                .collect();
            next.insert(child.chart.clone(), images);
        }
        lineage = next;
    })?;
    if let Some(e) = audit_error {
        return Err(e);
    }
    if trace.status != Status::Resolved {
        return Ok(CheckEntry::fail(
            name,
            property,
            format!("not resolved within {DIVISOR_MAX_STEPS} steps"),
            Reproducer::from_chart(&start, None),
        ));
    }
    for chart in trace.final_model.charts() {
        let images = lineage.get(chart.cone()).ok_or(Error::InconsistentCharts(chart.cone().clone()))?;
        let map = MonomialMap::new(start.vars().clone(), chart.vars().clone(), images.clone())?;
        let strict = strip_boundary_content(&f.substitute_monomial_map(&map)?, chart)?;
        let controlled = strip_boundary_content(&chart.generators()[0], chart)?;
        let strict_hull = hull_ideal(std::slice::from_ref(&strict), &chart.boundary_positions())?;
        if strict != controlled || !strict_hull.is_unit() {
            return Ok(CheckEntry::fail(
                name,
                property,
                format!("chart {}: strict transform `{strict}` meets a stratum", chart.cone()),
                Reproducer::from_chart(chart, None),
            ));
        }
    }
    Ok(CheckEntry::pass(
        name,
        property,
        format!("{} steps, {} charts", trace.steps.len(), trace.final_model.chart_count()),
    ))
}

fn compose_exponent(a: &ExponentVector, images: &[Vec<u32>]) -> ExponentVector {
    let width = images.first().map_or(0, |v| v.len());
    let mut out = vec![0u32; width];
    for (k, &ak) in a.as_slice().iter().enumerate() {
        if ak == 0 {
            continue;
        }
        for (slot, &v) in out.iter_mut().zip(&images[k]) {
            *slot += ak * v;
        }
    }
    ExponentVector::new(out)
}

fn strip_boundary_content(f: &Polynomial, chart: &Chart) -> Result<Polynomial> {
    let boundary = chart.boundary_positions();
    let content = f.monomial_content(&boundary);
    let mut g = f.clone();
    for (&pos, &c) in boundary.iter().zip(content.as_slice()) {
        if c > 0 {
            g = g.divide_by_variable_power(pos, c)?;
        }
    }
    Ok(g)
}

pub fn check_sequence_equivalence(model: &IdealSheafModel, strategy: &dyn Strategy, max_steps: usize) -> Result<CheckEntry> {
    let (name, property) = checks::SEQUENCE;
    let out = resolve_with_hull(model, strategy, max_steps)?;
    if out.equal {
        Ok(CheckEntry::pass(name, property, format!("{} steps", out.ideal.steps.len())))
    } else {
        let first = out
            .ideal
            .centers()
            .iter()
            .zip(out.hull.centers().iter())
            .position(|(a, b)| a != b)
            .unwrap_or(out.ideal.steps.len().min(out.hull.steps.len()));
        Ok(CheckEntry::fail(
            name,
            property,
            format!("sequences diverge at step {first}"),
            Reproducer::from_model(model, None),
        ))
    }
}

/// Every check that applies to a single input, run along its resolution.
pub fn verify_model(
    model: &IdealSheafModel,
    strategy: &dyn Strategy,
    max_steps: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rng = instance_rng(seed, 0);
    let mut report = VerificationReport::new(seed);
    for chart in model.charts() {
        report.push(check_hull_extensivity(chart)?);
        report.push(check_hull_idempotence(chart)?);
        report.push(check_hull_minimality(chart)?);
        report.push(check_multiplicity_preservation(chart)?);
        report.push(check_local_isomorphism_invariance(chart, 10, &mut rng)?);
        report.push(check_generator_independence(chart, 3, &mut rng)?);
    }
    let mut along: Vec<CheckEntry> = vec![check_smoothness(model), check_gluing(model)?];
    let mut audit = StepAudit::default();
    let mut failure: Option<Error> = None;
    let trace = resolve_sequence_with(model, strategy, max_steps, |before, step, after| {
        if failure.is_some() {
            return;
        }
        let r = (|| -> Result<()> {
            along.push(check_hull_commutation(before, &step.center)?);
            along.push(check_exceptional_bound(after, step)?);
            along.push(check_smoothness(after));
            along.push(check_gluing(after)?);
            audit.observe(before, step, after)?;
            Ok(())
        })();
        if let Err(e) = r {
            failure = Some(e);
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    report.entries.extend(summarize_steps(along));
    report.push(audit.center_soundness_entry());
    report.push(check_resolved_equivalence(&trace.final_model)?);
    report.push(check_sequence_equivalence(model, strategy, max_steps)?);
    let (name, property) = checks::TERMINATION;
    report.push(match trace.status {
        Status::Resolved => CheckEntry::pass(name, property, format!("{} steps", trace.steps.len())),
        Status::StepCapExceeded => CheckEntry::fail(
            name,
            property,
            format!("cap of {max_steps} steps reached"),
            Reproducer::from_model(&trace.final_model, None),
        ),
    });
    if let Some(entry) = divisor_corollary_if_applicable(model, strategy)? {
        report.push(entry);
    }
    Ok(report)
}

fn divisor_corollary_if_applicable(model: &IdealSheafModel, strategy: &dyn Strategy) -> Result<Option<CheckEntry>> {
    match check_divisor_corollary(model, strategy) {
        Ok(entry) => Ok(Some(entry)),
        Err(Error::NotPrincipal | Error::BoundaryDivisible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Collapses repeated entries into one entry per check name, keeping the
/// first failure.
fn summarize_steps(entries: Vec<CheckEntry>) -> Vec<CheckEntry> {
    let mut order: Vec<String> = Vec::new();
    let mut grouped: BTreeMap<String, (CheckEntry, usize)> = BTreeMap::new();
    for e in entries {
        match grouped.get_mut(&e.name) {
            None => {
                order.push(e.name.clone());
                grouped.insert(e.name.clone(), (e, 1));
            }
            Some((kept, count)) => {
                *count += 1;
                if kept.passed && !e.passed {
                    *kept = e;
                }
            }
        }
    }
    order
        .into_iter()
        .map(|n| {
            let (mut e, count) = grouped.remove(&n).expect("grouped");
            if e.passed {
                e.detail = format!("{count} checks");
            }
            e
        })
        .collect()
}

/// Per-step bookkeeping shared by all suites: exceptional bound, fan
/// smoothness, center soundness and monotonicity of the top multiplicity.
#[derive(Clone, Debug, Default)]
pub struct StepAudit {
    pub steps: usize,
    pub exceptional_violations: usize,
    pub smoothness_violations: usize,
    pub soundness_violations: usize,
    pub first_exceptional: Option<Reproducer>,
    pub first_smoothness: Option<Reproducer>,
    pub first_soundness: Option<Reproducer>,
}

impl StepAudit {
    pub fn observe(&mut self, before: &IdealSheafModel, step: &BlowUpStep, after: &IdealSheafModel) -> Result<()> {
        self.steps += 1;
        if let Some((cone, _)) = exceptional_bound_violation(after, step)? {
            self.exceptional_violations += 1;
            self.first_exceptional.get_or_insert_with(|| Reproducer::from_model(after, Some(&cone)));
        }
        if !after.is_smooth() {
            self.smoothness_violations += 1;
            self.first_smoothness.get_or_insert_with(|| Reproducer::from_model(after, None));
        }
        let (eq, m) = crate::transform::is_toroidally_equimultiple(before, &step.center)?;
        let max_before = top_multiplicity(before)?;
        let max_after = top_multiplicity(after)?;
        if !eq || m == 0 || m != step.multiplicity || max_after > max_before {
            self.soundness_violations += 1;
            self.first_soundness
                .get_or_insert_with(|| Reproducer::from_model(before, Some(&step.center)));
        }
        Ok(())
    }

    pub fn merge(&mut self, other: StepAudit) {
        self.steps += other.steps;
        self.exceptional_violations += other.exceptional_violations;
        self.smoothness_violations += other.smoothness_violations;
        self.soundness_violations += other.soundness_violations;
        if self.first_exceptional.is_none() {
            self.first_exceptional = other.first_exceptional;
        }
        if self.first_smoothness.is_none() {
            self.first_smoothness = other.first_smoothness;
        }
        if self.first_soundness.is_none() {
            self.first_soundness = other.first_soundness;
        }
    }

    fn entry(name_property: (&str, &str), steps: usize, violations: usize, first: &Option<Reproducer>) -> CheckEntry {
        let (name, property) = name_property;
        let detail = format!("{steps} steps, {violations} violations");
        match first {
            Some(r) if violations > 0 => CheckEntry::fail(name, property, detail, r.clone()),
            _ => CheckEntry::pass(name, property, detail),
        }
    }

    pub fn exceptional_entry(&self) -> CheckEntry {
        Self::entry(checks::EXCEPTIONAL_BOUND, self.steps, self.exceptional_violations, &self.first_exceptional)
    }

    pub fn smoothness_entry(&self) -> CheckEntry {
        Self::entry(checks::SMOOTHNESS, self.steps, self.smoothness_violations, &self.first_smoothness)
    }

    pub fn center_soundness_entry(&self) -> CheckEntry {
        Self::entry(checks::SOUNDNESS, self.steps, self.soundness_violations, &self.first_soundness)
    }
}

/// Largest stratum multiplicity over all cones, read from the chart terms.
pub fn top_multiplicity(model: &IdealSheafModel) -> Result<u64> {
    let mut top = 0;
    for chart in model.charts() {
        top = top.max(stratum_multiplicity(chart, chart.cone())?);
    }
    Ok(top)
}
