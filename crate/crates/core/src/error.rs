use thiserror::Error;

use crate::fan::Cone;
use crate::field::FieldError;
use crate::monomial_ideal::IdealError;
use crate::poly::{ParseError, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("the ideal is zero")]
    ZeroIdeal,
    #[error("no boundary variables given")]
    EmptyBoundary,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cone {0} is not in the fan")]
    ConeNotInFan(Cone),
    #[error("the empty cone cannot be blown up")]
    EmptyCenter,
    #[error("ideal is not toroidally equimultiple along {cone} (multiplicity {multiplicity})")]
    NotEquimultiple { cone: Cone, multiplicity: u64 },
    #[error("center {0} has multiplicity 0")]
    TrivialCenter(Cone),
    #[error("controlled transform in chart {chart}: {source}")]
    Divisibility { chart: Cone, source: PolyError },
    #[error("inconsistent chart substitution: {0}")]
    InconsistentSubstitution(String),
    #[error("ray coordinates overflowed")]
    RayOverflow,
    #[error("charts disagree on the multiplicity along {0}")]
    InconsistentCharts(Cone),
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("ideal must be principal")]
    NotPrincipal,
    #[error("generator is divisible by the boundary coordinate `{0}`")]
    BoundaryDivisible(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
