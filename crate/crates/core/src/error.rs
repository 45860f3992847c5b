use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimensions: subsequence length {m} exceeds ambient length {n}")]
    InvalidDimensions { n: usize, m: usize },
    #[error("invalid block length {b} for a string of length {len}")]
    InvalidBlockLength { b: usize, len: usize },
    #[error("invalid bit string: {0}")]
    InvalidBitString(String),
    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("{name} = {value} lies outside {domain}")]
    OutOfDomain { name: &'static str, value: f64, domain: &'static str },
    #[error("series diverges at (x, y) = ({x}, {y})")]
    DivergentSeries { x: f64, y: f64 },
    #[error("series did not reach tolerance within {shells} shells")]
    SeriesDiverged { shells: usize },
    #[error("({n}, {m}) is outside the exact range n <= {max}")]
    OutOfOracleRange { n: usize, m: usize, max: usize },
    #[error("no interior minimum found")]
    NoInteriorMinimum,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid sample size: {0}")]
    InvalidSampleSize(String),
}

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::OutOfDomain { name, value, domain: "(0, 1)" })
    }
}

pub(crate) fn check_closed_unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfDomain { name, value, domain: "[0, 1]" })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::OutOfDomain { name, value, domain: "(0, inf)" })
    }
}
