use core::fmt;

/// Errors raised by the spectral and beam-splitter numerics.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Grid point counts must be odd so that `ν` and `−ν` are both grid points.
    EvenPointCount(usize),
    TooFewPoints(usize),
    NonPositiveSpan(f64),
    /// A parameter that must be finite (and possibly positive) was not.
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// An amplitude matrix contained NaN or infinity at `(row, col)`.
    NonFinite {
        row: usize,
        col: usize,
    },
    /// Amplitude matrix does not match the `n × n` grid.
    ShapeMismatch {
        expected: usize,
        found: usize,
    },
    /// The sampled spectrum has (numerically) zero norm.
    DegenerateSpectrum,
    /// Model spectra that need the grid centred on the carrier frequency.
    GridNotCentered {
        grid_center: f64,
        model_center: f64,
    },
    /// The two frequencies of an antisymmetric pair resolve to the same cell.
    CoincidentFrequencies {
        index: usize,
    },
    /// The norm factor of a closed-form probability vanished.
    VanishingNormFactor(f64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EvenPointCount(n) => {
                write!(f, "odd point count required, got {n}")
            }
            Error::TooFewPoints(n) => write!(f, "at least 3 grid points required, got {n}"),
            Error::NonPositiveSpan(s) => write!(f, "half span must be positive, got {s}"),
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid {name} = {value}: {reason}"),
            Error::NonFinite { row, col } => {
                write!(f, "non-finite amplitude at row {row}, column {col}")
            }
            Error::ShapeMismatch { expected, found } => write!(
                f,
                "amplitude matrix has {found} entries, expected {expected}"
            ),
            Error::DegenerateSpectrum => write!(f, "degenerate spectrum: zero norm"),
            Error::GridNotCentered {
                grid_center,
                model_center,
            } => write!(
                f,
                "grid centre {grid_center} does not match model centre {model_center}"
            ),
            Error::CoincidentFrequencies { index } => write!(
                f,
                "both frequencies fall on grid cell {index}; the antisymmetric state is zero"
            ),
            Error::VanishingNormFactor(b) => write!(f, "norm factor B = {b} vanishes"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}
