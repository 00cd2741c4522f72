use alloc::string::String;
use core::fmt;

/// Cell position `(i, j)` in interior index space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellIndex {
    pub i: usize,
    pub j: usize,
}

impl CellIndex {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }
}

impl fmt::Display for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// Optional cell location carried by state errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Location(pub Option<CellIndex>);

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(c) => write!(f, " at cell {c}"),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite state{location}")]
    NonFinite { location: Location },

    #[error("unphysical state{location}: rho = {rho:e}, p = {p:e}")]
    Unphysical { location: Location, rho: f64, p: f64 },

    #[error("face normal is not unit length (|n| = {norm})")]
    NonUnitNormal { norm: f64 },

    #[error("unphysical interface average: sound speed squared = {a2:e}")]
    UnphysicalInterface { a2: f64 },

    #[error("degenerate wave speeds: s_l = {s_l:e}, s_r = {s_r:e}")]
    DegenerateWaveSpeeds { s_l: f64, s_r: f64 },

    #[error("ratio of specific heats must exceed 1 (got {0})")]
    InvalidGamma(f64),

    #[error("pressure sensor needs positive pressures (got {p_l:e}, {p_r:e})")]
    NonPositivePressure { p_l: f64, p_r: f64 },

    #[error("upstream Mach number must be at least 1 (got {0})")]
    SubsonicShock(f64),

    #[error("initial data generates vacuum")]
    Vacuum,

    #[error("{what} failed to converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("degenerate mesh: cell {cell} has area {area:e}")]
    DegenerateCell { cell: CellIndex, area: f64 },

    #[error("non-finite residual in stability column {column}")]
    NonFiniteColumn { column: usize },

    #[error("unknown {kind} '{name}'; valid values: {valid}")]
    UnknownName {
        kind: &'static str,
        name: String,
        valid: String,
    },

    #[error("invalid {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl Error {
    /// Attach a cell location to state errors that do not carry one yet.
    pub fn at(self, cell: CellIndex) -> Self {
        match self {
            Error::NonFinite { location: Location(None) } => Error::NonFinite {
                location: Location(Some(cell)),
            },
            Error::Unphysical {
                location: Location(None),
                rho,
                p,
            } => Error::Unphysical {
                location: Location(Some(cell)),
                rho,
                p,
            },
            other => other,
        }
    }

    /// The cell a state error refers to, when known.
    pub fn cell(&self) -> Option<CellIndex> {
        match self {
            Error::NonFinite { location } | Error::Unphysical { location, .. } => location.0,
            Error::DegenerateCell { cell, .. } => Some(*cell),
            _ => None,
        }
    }
}
