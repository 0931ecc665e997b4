use thiserror::Error;

/// Errors raised by series arithmetic, map construction and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid truncation order {order}: {reason}")]
    InvalidOrder { order: usize, reason: &'static str },

    #[error("series is not invertible: |c_0| = {modulus:e} is below {floor:e}")]
    NonInvertible { modulus: f64, floor: f64 },

    #[error("degenerate strip angle beta = {beta}: sin(beta) must be nonzero, need 0 < beta < pi")]
    DegenerateStrip { beta: f64 },

    #[error("shear is degenerate: |1 + sign * exp(-2i gamma) * w(0)| = {modulus:e}")]
    ShearDegenerate { modulus: f64 },

    #[error("degenerate harmonic map: |h'(0)| = {modulus:e}")]
    DegenerateMap { modulus: f64 },

    #[error("parameter {name} = {value} is outside {range}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("{0}")]
    Precondition(String),

    #[error("hypothesis of {theorem} violated: {detail}")]
    Hypothesis { theorem: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > -1.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterRange {
            name,
            value,
            range: "(-1, 1)",
        })
    }
}

pub(crate) fn check_full_turn(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && (0.0..std::f64::consts::TAU).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterRange {
            name,
            value,
            range: "[0, 2pi)",
        })
    }
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterRange {
            name,
            value,
            range: "the finite reals",
        })
    }
}
