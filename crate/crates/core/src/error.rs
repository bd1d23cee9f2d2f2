use thiserror::Error;

/// Errors raised by state construction, optical elements and fringe analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ket has {found} modes, expected {expected}")]
    ModeCountMismatch { expected: usize, found: usize },

    #[error("duplicate basis ket {0}")]
    DuplicateKet(String),

    #[error("negative occupation {value} in mode {mode}")]
    NegativeOccupation { mode: usize, value: i64 },

    #[error("mode index {mode} out of range for {mode_count} modes")]
    ModeOutOfRange { mode: usize, mode_count: usize },

    #[error("mode count must be positive")]
    NoModes,

    #[error("operation undefined on the zero state")]
    ZeroState,

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("beam splitter needs two distinct modes, got ({0}, {1})")]
    DegenerateModePair(usize, usize),

    #[error("phase must be finite")]
    NonFinitePhase,

    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
    },

    #[error("{0} photons exceed the supported maximum of {max}", max = crate::fock::MAX_PHOTONS)]
    TooManyPhotons(u32),

    #[error("pair amplitude magnitude {0} must be below 1")]
    AlphaOutOfRange(f64),

    #[error("photon number must be positive")]
    ZeroPhotons,

    #[error("grid needs at least {min} points, got {got}")]
    GridTooSmall { min: usize, got: usize },

    #[error("phase grid is not uniform over one period")]
    NonUniformGrid,

    #[error("series length {series} does not match grid length {grid}")]
    SeriesLength { series: usize, grid: usize },

    #[error("series is empty")]
    EmptySeries,

    #[error("series contains negative value {0}")]
    NegativeValue(f64),

    #[error("series is identically zero")]
    AllZeroSeries,
}

pub type Result<T> = std::result::Result<T, Error>;
