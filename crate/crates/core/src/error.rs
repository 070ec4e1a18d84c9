use thiserror::Error;

use crate::arith::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not rational: {0}")]
    NotRational(String),
    #[error("unstable type (g, n) = ({g}, {n}): need 2g - 2 + n > 0")]
    Unstable { g: u32, n: usize },
    #[error("series precision exhausted: coefficient of degree {requested} requested, known below {precision}")]
    PrecisionExhausted { requested: i64, precision: i64 },
    #[error("composition requires an inner series of positive valuation")]
    Valuation,
    #[error("pole at the expansion point")]
    PoleAtExpansionPoint,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("degree {d} is not divisible by r = {r}")]
    NotDivisible { d: u64, r: u32 },
    #[error("degree {d} exceeds the enumeration ceiling {ceiling}")]
    AboveCeiling { d: u64, ceiling: u64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cache i/o: {0}")]
    Io(String),
}

impl Error {
    pub fn not_rational(x: impl std::fmt::Display) -> Self {
        Error::NotRational(x.to_string())
    }
}

pub(crate) fn check_stable(g: u32, n: usize) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 > 0 {
        Ok(())
    } else {
        Err(Error::Unstable { g, n })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

#[allow(dead_code)]
pub(crate) fn show(q: &Rational) -> String {
    q.to_string()
}
