use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("the class k = 0 has no projected lattice")]
    ZeroClass,
    #[error("vector {0:?} is not primitive")]
    NotPrimitive([i64; 3]),
    #[error("parameter lattice needs 1 or 2 generators, got {0}")]
    BadRank(usize),
    #[error("parameter lattice generators are linearly dependent")]
    DependentGenerators,
    #[error("vector {0:?} does not lie in the saturated lattice")]
    NotInSaturation([i64; 3]),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("operation needs a nontrivial Spin^c structure")]
    TrivialStructure,
    #[error("cutoff must be positive, got {0}")]
    NonPositiveCutoff(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("loop vector must be nonzero")]
    ZeroLoop,
    #[error("at least 16 samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("numeric flow {numeric} disagrees with closed form {closed}")]
    Mismatch { numeric: i64, closed: i64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SectionError {
    #[error("spectral sections do not exist: index element {0:?} is nonzero")]
    NoSections(Vec<i64>),
    #[error("R = {r} is not below the gap bound {bound}")]
    RadiusTooLarge { r: f64, bound: f64 },
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("descriptor cases do not match")]
    CaseMismatch,
    #[error("beta must be nonzero")]
    ZeroBeta,
    #[error("sample {index} is not a Hermitian idempotent (defect {defect:e})")]
    NotProjector { index: usize, defect: f64 },
    #[error("projector rank changes from {expected} to {found} at sample {index}")]
    RankJump {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("boundary mismatch {mismatch:e} at sample {index}")]
    BoundaryMismatch { index: usize, mismatch: f64 },
    #[error("integer rounding residual {residual} too large; refine the grid")]
    Residual { residual: f64 },
    #[error("grid too coarse: {0}")]
    Grid(String),
    #[error("spectral section check failed at sample {index} ({coords:?}): {what}")]
    Check {
        index: usize,
        coords: Vec<f64>,
        what: String,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid lattice parameters: {0}")]
    Parameters(String),
    #[error("level clustering inconclusive: {0}; increase N")]
    Inconclusive(String),
    #[error("eigensolver failed: {0}")]
    Solver(String),
}

/// Crate-level error, tagged with the module that raised it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("torus_geometry: {0}")]
    Geometry(#[from] GeometryError),
    #[error("spectrum_engine: {0}")]
    Spectrum(#[from] SpectrumError),
    #[error("flow_index: {0}")]
    Flow(#[from] FlowError),
    #[error("spectral_sections: {0}")]
    Section(#[from] SectionError),
    #[error("lattice_oracle: {0}")]
    Oracle(#[from] OracleError),
}

impl Error {
    pub fn module(&self) -> &'static str {
        match self {
            Error::Geometry(_) => "torus_geometry",
            Error::Spectrum(_) => "spectrum_engine",
            Error::Flow(_) => "flow_index",
            Error::Section(_) => "spectral_sections",
            Error::Oracle(_) => "lattice_oracle",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
