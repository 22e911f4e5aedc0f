//! Extended real numbers on `[-inf, +inf]`.
//!
//! Infinities are explicit variants so that the branch structure of a
//! perspective at `eta = 0` never depends on IEEE infinity/NaN propagation.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A point of the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Lifts an `f64`, mapping IEEE infinities onto the infinite variants.
    ///
    /// NaN has no extended-real counterpart; it is mapped to `+inf` so that a
    /// failed evaluation (e.g. `inf - inf` at an overflowed argument) is
    /// treated as "outside the domain".
    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() || x == f64::INFINITY {
            ExtReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(x)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_pos_inf(self) -> bool {
        matches!(self, ExtReal::PosInf)
    }

    /// Finite payload, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// Lossy conversion to `f64` with IEEE infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// Extended addition. `(+inf) + (-inf)` is rejected.
    pub fn checked_add(self, other: ExtReal) -> Result<ExtReal> {
        ext_add(self, other)
    }

    /// Multiplication by a strictly positive real.
    pub fn scale(self, lambda: f64) -> Result<ExtReal> {
        ext_scale(lambda, self)
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::from_f64(x)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Some(Ordering::Equal),
            (NegInf, _) | (_, PosInf) => Some(Ordering::Less),
            (_, NegInf) | (PosInf, _) => Some(Ordering::Greater),
            (Finite(a), Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::PosInf => write!(f, "inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
        }
    }
}

/// Extended addition on `]-inf, +inf]` plus the guard value `-inf`.
pub fn ext_add(a: ExtReal, b: ExtReal) -> Result<ExtReal> {
    use ExtReal::*;
    match (a, b) {
        (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::IndeterminateSum),
        (PosInf, _) | (_, PosInf) => Ok(PosInf),
        (NegInf, _) | (_, NegInf) => Ok(NegInf),
        (Finite(x), Finite(y)) => Ok(ExtReal::from_f64(x + y)),
    }
}

/// `lambda * a` for `lambda > 0`. Zero and negative scales are rejected so that
/// `0 * inf` never gets silently evaluated.
pub fn ext_scale(lambda: f64, a: ExtReal) -> Result<ExtReal> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::BadScale(lambda));
    }
    Ok(match a {
        ExtReal::Finite(x) => ExtReal::from_f64(lambda * x),
        inf => inf,
    })
}

/// Sum of a sequence of extended reals with Neumaier-compensated accumulation of
/// the finite part. Terms are accumulated in iteration order.
pub fn ext_sum<I>(terms: I) -> Result<ExtReal>
where
    I: IntoIterator<Item = ExtReal>,
{
    let mut acc = CompensatedSum::default();
    let mut pos = false;
    let mut neg = false;
    for t in terms {
        match t {
            ExtReal::Finite(x) => acc.add(x),
            ExtReal::PosInf => pos = true,
            ExtReal::NegInf => neg = true,
        }
    }
    match (pos, neg) {
        (true, true) => Err(Error::IndeterminateSum),
        (true, false) => Ok(ExtReal::PosInf),
        (false, true) => Ok(ExtReal::NegInf),
        (false, false) => Ok(ExtReal::from_f64(acc.value())),
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
