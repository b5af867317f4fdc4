//! Randomized suites. Instance `i` of a suite with seed `s` is drawn from
//! stream `i` of `ChaCha8(s)`, so results do not depend on the execution mode.

use crate::error::Result;
use crate::fan::IdealSheafModel;
use crate::field::Field;
use crate::hull::hull_model;
use crate::par::Execution;
use crate::resolve::{cone_multiplicities, resolve_sequence, resolve_sequence_with, MinMaxMult, Status};
use crate::trace::sequence_document;
use crate::transform::controlled_transform_with;

use super::random::{instance_rng, monomial_model, random_monomial_exponents};
use super::{
    check_divisor_corollary_audited, check_generator_independence, check_gluing, check_hull_commutation,
    check_hull_extensivity, check_hull_idempotence, check_hull_minimality, check_local_isomorphism_invariance,
    check_multiplicity_preservation, check_resolved_equivalence, checks, random_ideal_model, random_principal_model,
    CheckEntry, IdealShape, Reproducer, StepAudit, VerificationReport,
};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub instances: usize,
    pub exec: Execution,
    /// Step cap for resolution runs inside the suite.
    pub max_steps: usize,
    /// Random coordinate changes per instance in the hull suite.
    pub trials: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64, instances: usize, max_steps: usize) -> Self {
        SuiteConfig { seed, instances, exec: Execution::default(), max_steps, trials: 10 }
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub report: VerificationReport,
    pub audit: StepAudit,
    pub instances: usize,
    /// Instances left out of the main check (for example, runs that hit the cap).
    pub skipped: usize,
    /// Number of times the main check was evaluated.
    pub checked: usize,
    /// Longest resolution seen, in steps.
    pub longest: usize,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.report.entries.iter().find(|e| e.name == name)
    }
}

#[derive(Default)]
struct InstanceResult {
    entries: Vec<CheckEntry>,
    audit: StepAudit,
    skipped: bool,
    checked: usize,
    steps: usize,
}

/// Per-check pass/fail counts in first-seen order, keeping the first failure.
#[derive(Default)]
struct Tally {
    rows: Vec<(CheckEntry, usize, usize)>,
}

impl Tally {
    fn add(&mut self, e: CheckEntry) {
        match self.rows.iter_mut().find(|(k, _, _)| k.name == e.name) {
            Some((kept, pass, fail)) => {
                if e.passed {
                    *pass += 1;
                } else {
                    *fail += 1;
                    if kept.passed {
                        *kept = e;
                    }
                }
            }
            None => {
                let (p, f) = if e.passed { (1, 0) } else { (0, 1) };
                self.rows.push((e, p, f));
            }
        }
    }

    fn finish(self, report: &mut VerificationReport) {
        for (mut e, pass, fail) in self.rows {
            let summary = format!("{pass} passed, {fail} failed");
            e.detail = if e.passed { summary } else { format!("{summary}; first: {}", e.detail) };
            report.push(e);
        }
    }
}

fn run<F>(cfg: &SuiteConfig, per_instance: F) -> Result<SuiteOutcome>
where
    F: Fn(u64) -> Result<InstanceResult> + Sync + Send,
{
    let results = cfg.exec.map_range(cfg.instances, |i| per_instance(i as u64));
    let mut tally = Tally::default();
    let mut audit = StepAudit::default();
    let (mut skipped, mut checked, mut longest) = (0, 0, 0);
    for r in results {
        let r = r?;
        r.entries.into_iter().for_each(|e| tally.add(e));
        audit.merge(r.audit);
        skipped += usize::from(r.skipped);
        checked += r.checked;
        longest = longest.max(r.steps);
    }
    let mut report = VerificationReport::new(cfg.seed);
    tally.finish(&mut report);
    if audit.steps > 0 {
        report.push(audit.exceptional_entry());
        report.push(audit.smoothness_entry());
        report.push(audit.center_soundness_entry());
    }
    Ok(SuiteOutcome { report, audit, instances: cfg.instances, skipped, checked, longest })
}

/// The random polynomial instance shared by the hull, commutation and
/// equivalence suites.
pub fn suite_instance(seed: u64, index: u64) -> Result<IdealSheafModel> {
    random_ideal_model(&mut instance_rng(seed, index), &IdealShape::default(), Field::Rational)
}

/// Extensivity, idempotence, minimality, multiplicity preservation,
/// coordinate-change invariance and presentation independence of the hull.
pub fn hull_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    run(cfg, |i| {
        let model = suite_instance(cfg.seed, i)?;
        // Separate stream for the coordinate changes.
        let mut rng = instance_rng(cfg.seed ^ 0x5eed, i);
        let chart = model.charts().next().expect("one chart");
        let entries = vec![
            check_hull_extensivity(chart)?,
            check_hull_idempotence(chart)?,
            check_hull_minimality(chart)?,
            check_multiplicity_preservation(chart)?,
            check_local_isomorphism_invariance(chart, cfg.trials, &mut rng)?,
            check_generator_independence(chart, 3, &mut rng)?,
            check_resolved_equivalence(&model)?,
        ];
        Ok(InstanceResult { entries, checked: 1, ..Default::default() })
    })
}

/// Hull commutation at every cone of maximal multiplicity of every instance.
pub fn commutation_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    run(cfg, |i| {
        let model = suite_instance(cfg.seed, i)?;
        let mults = cone_multiplicities(&model, Execution::Sequential)?;
        let top = mults.values().copied().max().unwrap_or(0);
        let mut out = InstanceResult::default();
        if top == 0 {
            out.skipped = true;
            return Ok(out);
        }
        for (cone, _) in mults.iter().filter(|(_, m)| **m == top) {
            out.entries.push(check_hull_commutation(&model, cone)?);
            let (next, step) = controlled_transform_with(&model, cone, Execution::Sequential)?;
            out.audit.observe(&model, &step, &next)?;
            out.checked += 1;
        }
        Ok(out)
    })
}

/// Identical center sequences for each instance and its hull, among the
/// instances that resolve within the cap.
pub fn equivalence_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    run(cfg, |i| {
        let model = suite_instance(cfg.seed, i)?;
        let mut out = InstanceResult::default();
        let mut audit = StepAudit::default();
        let mut err = None;
        let ideal = resolve_sequence_with(&model, &MinMaxMult, cfg.max_steps, |b, s, a| {
            if err.is_none() {
                err = audit.observe(b, s, a).err();
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        out.audit = audit;
        out.steps = ideal.steps.len();
        if ideal.status != Status::Resolved {
            out.skipped = true;
            return Ok(out);
        }
        let hull = resolve_sequence(&hull_model(&model)?, &MinMaxMult, cfg.max_steps)?;
        let (name, property) = checks::SEQUENCE;
        out.entries.push(if hull.status == ideal.status && hull.centers() == ideal.centers() {
            CheckEntry::pass(name, property, "")
        } else {
            CheckEntry::fail(name, property, format!("instance {i}"), Reproducer::from_model(&model, None))
        });
        out.entries.push(check_resolved_equivalence(&ideal.final_model)?);
        out.entries.push(check_gluing(&ideal.final_model)?);
        out.checked = 1;
        Ok(out)
    })
}

/// Random monomial inputs over at most three boundary variables with
/// exponents up to `max_exponent` must resolve within the cap.
pub fn termination_suite(cfg: &SuiteConfig, max_arity: usize, max_exponent: u32) -> Result<SuiteOutcome> {
    run(cfg, |i| {
        let mut rng = instance_rng(cfg.seed, i);
        let arity = rand::Rng::gen_range(&mut rng, 1..=max_arity);
        let exps = random_monomial_exponents(&mut rng, arity, max_exponent);
        let model = monomial_model(&exps, Field::Rational)?;
        let mut out = InstanceResult::default();
        let mut audit = StepAudit::default();
        let mut err = None;
        let trace = resolve_sequence_with(&model, &MinMaxMult, cfg.max_steps, |b, s, a| {
            if err.is_none() {
                err = audit.observe(b, s, a).err();
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        let (name, property) = checks::TERMINATION;
        out.entries.push(match trace.status {
            Status::Resolved => CheckEntry::pass(name, property, ""),
            Status::StepCapExceeded => CheckEntry::fail(
                name,
                property,
                format!("exponents {exps:?} hit the cap of {}", cfg.max_steps),
                Reproducer::from_model(&model, None),
            ),
        });
        out.entries.push(check_resolved_equivalence(&trace.final_model)?);
        out.audit = audit;
        out.steps = trace.steps.len();
        out.checked = 1;
        Ok(out)
    })
}

pub const CHARACTERISTIC_FIELDS: [Field; 4] = [Field::Rational, Field::Prime(2), Field::Prime(3), Field::Prime(5)];

/// The serialized sequence (statuses, divisors, steps, final charts) of a
/// monomial input must not depend on the field.
pub fn characteristic_suite(cfg: &SuiteConfig, max_arity: usize, max_exponent: u32) -> Result<SuiteOutcome> {
    run(cfg, |i| {
        let mut rng = instance_rng(cfg.seed, i);
        let arity = rand::Rng::gen_range(&mut rng, 1..=max_arity);
        let exps = random_monomial_exponents(&mut rng, arity, max_exponent);
        let mut out = InstanceResult::default();
        let mut encoded: Vec<Vec<u8>> = Vec::new();
        for field in CHARACTERISTIC_FIELDS {
            let model = monomial_model(&exps, field)?;
            let mut err = None;
            let audit = &mut out.audit;
            let trace = resolve_sequence_with(&model, &MinMaxMult, cfg.max_steps, |b, s, a| {
                if err.is_none() {
                    err = audit.observe(b, s, a).err();
                }
            })?;
            if let Some(e) = err {
                return Err(e);
            }
            out.steps = out.steps.max(trace.steps.len());
            encoded.push(serde_json::to_vec_pretty(&sequence_document(&trace)).expect("sequence serializes"));
        }
        let (name, property) = checks::CHARACTERISTIC;
        out.entries.push(match encoded.iter().position(|e| *e != encoded[0]) {
            None => CheckEntry::pass(name, property, ""),
            Some(k) => CheckEntry::fail(
                name,
                property,
                format!("exponents {exps:?}: {} differs from q", CHARACTERISTIC_FIELDS[k]),
                Reproducer::from_model(&monomial_model(&exps, Field::Rational)?, None),
            ),
        });
        out.checked = 1;
        Ok(out)
    })
}

/// Strict transforms of principal inputs: the given fixed inputs first, then
/// `cfg.instances` random ones.
pub fn divisor_suite(cfg: &SuiteConfig, fixed: &[IdealSheafModel]) -> Result<SuiteOutcome> {
    let total = SuiteConfig { instances: fixed.len() + cfg.instances, ..cfg.clone() };
    run(&total, |i| {
        let model = match fixed.get(i as usize) {
            Some(m) => m.clone(),
            None => random_principal_model(&mut instance_rng(cfg.seed, i), &IdealShape::default(), Field::Rational)?,
        };
        let mut out = InstanceResult::default();
        let entry = check_divisor_corollary_audited(&model, &MinMaxMult, Some(&mut out.audit))?;
        out.entries.push(entry);
        out.steps = out.audit.steps;
        out.checked = 1;
        Ok(out)
    })
}
