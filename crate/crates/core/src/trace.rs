//! Input and trace documents (JSON).
//!
//! Struct fields serialize in declaration order and every collection is
//! emitted from ordered data, so equal runs give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fan::{declared_table, Cone, DivisorRecord, IdealSheafModel};
use crate::field::Field;
use crate::poly::parse_polynomial;
use crate::resolve::{replay, BlowUpTrace, Status};
use crate::transform::BlowUpStep;
use crate::verify::VerificationReport;

pub const TRACE_FORMAT: &str = "toroidal-trace";
pub const TRACE_VERSION: u32 = 1;

fn default_field() -> String {
    "q".to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub variables: Vec<String>,
    pub boundary: Vec<String>,
    pub generators: Vec<String>,
    #[serde(default = "default_field")]
    pub field: String,
}

impl ModelDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))
    }

    pub fn field(&self) -> Result<Field> {
        Ok(self.field.parse::<Field>()?)
    }

    /// Checks the document invariants and builds the initial model.
    pub fn to_model(&self) -> Result<IdealSheafModel> {
        let field = self.field()?;
        if self.generators.is_empty() {
            return Err(Error::InvalidDocument("at least one generator is required".into()));
        }
        for (i, b) in self.boundary.iter().enumerate() {
            if self.boundary[..i].contains(b) {
                return Err(Error::InvalidDocument(format!("boundary variable `{b}` listed twice")));
            }
        }
        let vars = declared_table(&self.variables, &self.boundary)?;
        let gens = self
            .generators
            .iter()
            .map(|g| parse_polynomial(g, &vars, field))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        IdealSheafModel::initial(vars, gens, field)
    }

    pub fn with_field(&self, field: Field) -> Self {
        ModelDocument { field: field.to_string(), ..self.clone() }
    }

    /// SHA-256 of the compact JSON encoding.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("document serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartDocument {
    pub cone: Vec<u32>,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    pub hull: Vec<Vec<u32>>,
    pub unit: bool,
}

impl ChartDocument {
    pub fn list(model: &IdealSheafModel) -> Vec<ChartDocument> {
        model
            .charts()
            .map(|c| ChartDocument {
                cone: c.cone().ids(),
                variables: c.vars().names(),
                generators: c.generators().iter().map(|g| g.to_string()).collect(),
                hull: c.hull().to_arrays(),
                unit: c.hull().is_unit(),
            })
            .collect()
    }
}

/// Everything in a trace that is determined by the blow-up sequence itself,
/// independent of how the input was written down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceDocument {
    pub status: Status,
    pub divisors: Vec<DivisorRecord>,
    pub steps: Vec<BlowUpStep>,
    pub final_charts: Vec<ChartDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub format: String,
    pub version: u32,
    pub model: ModelDocument,
    pub model_sha256: String,
    pub strategy: String,
    pub max_steps: usize,
    #[serde(flatten)]
    pub sequence: SequenceDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
}

impl TraceDocument {
    pub fn new(model: &ModelDocument, trace: &BlowUpTrace) -> Self {
        TraceDocument {
            format: TRACE_FORMAT.to_string(),
            version: TRACE_VERSION,
            model: model.clone(),
            model_sha256: model.digest(),
            strategy: trace.strategy.clone(),
            max_steps: trace.max_steps,
            sequence: sequence_document(trace),
            verification: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TraceDocument = serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))?;
        if doc.format != TRACE_FORMAT || doc.version != TRACE_VERSION {
            return Err(Error::InvalidDocument(format!(
                "unsupported trace format {} v{}",
                doc.format, doc.version
            )));
        }
        if doc.model.digest() != doc.model_sha256 {
            return Err(Error::InvalidDocument("model digest does not match".into()));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("trace serializes");
        s.push('\n');
        s
    }

    pub fn centers(&self) -> Vec<Cone> {
        self.sequence.steps.iter().map(|s| s.center.clone()).collect()
    }

    /// Rebuilds the input model, re-applies every center and checks that the
    /// result matches the recorded final charts and divisors.
    pub fn replay(&self) -> Result<IdealSheafModel> {
        let initial = self.model.to_model()?;
        let model = replay(&initial, &self.centers())?;
        let divisors: Vec<DivisorRecord> = model.registry().iter().cloned().collect();
        if divisors != self.sequence.divisors || ChartDocument::list(&model) != self.sequence.final_charts {
            return Err(Error::InvalidDocument("replayed model differs from the recorded final charts".into()));
        }
        Ok(model)
    }
}

pub fn sequence_document(trace: &BlowUpTrace) -> SequenceDocument {
    SequenceDocument {
        status: trace.status,
        divisors: trace.final_model.registry().iter().cloned().collect(),
        steps: trace.steps.clone(),
        final_charts: ChartDocument::list(&trace.final_model),
    }
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}
