//! The base-function interface: a member of Gamma_0(R^n) described by oracles.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::linalg::{euclidean_norm, sub};

type ValueOracle = Arc<dyn Fn(&[f64]) -> ExtReal + Send + Sync>;
type SubgradientOracle = Arc<dyn Fn(&[f64]) -> Option<SubgradientSet> + Send + Sync>;

/// Closed-form description of a subdifferential `∂φ(y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgradientSet {
    /// Convex hull of finitely many generators. No generators means the
    /// subdifferential is empty; a single generator is a gradient.
    Hull { generators: Vec<Vec<f64>> },
    /// Closed ball `B(center; radius)`.
    Ball { center: Vec<f64>, radius: f64 },
}

impl SubgradientSet {
    pub fn empty() -> Self {
        SubgradientSet::Hull { generators: vec![] }
    }

    pub fn point(u: Vec<f64>) -> Self {
        SubgradientSet::Hull {
            generators: vec![u],
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SubgradientSet::Hull { generators } if generators.is_empty())
    }

    /// A finite set of elements that represents the set for testing purposes:
    /// the generators of a hull, or the center and `2n` axis-aligned boundary
    /// points of a ball.
    pub fn representatives(&self) -> Vec<Vec<f64>> {
        match self {
            SubgradientSet::Hull { generators } => generators.clone(),
            SubgradientSet::Ball { center, radius } => {
                let mut out = vec![center.clone()];
                if *radius > 0.0 {
                    for i in 0..center.len() {
                        for s in [-1.0, 1.0] {
                            let mut p = center.clone();
                            p[i] += s * radius;
                            out.push(p);
                        }
                    }
                }
                out
            }
        }
    }

    /// Maps every element through `u -> a * u + b`, `a >= 0`.
    pub fn affine_image(&self, a: f64, b: &[f64]) -> SubgradientSet {
        let map = |u: &Vec<f64>| -> Vec<f64> { u.iter().zip(b).map(|(x, y)| a * x + y).collect() };
        match self {
            SubgradientSet::Hull { generators } => SubgradientSet::Hull {
                generators: generators.iter().map(map).collect(),
            },
            SubgradientSet::Ball { center, radius } => SubgradientSet::Ball {
                center: map(center),
                radius: a * radius,
            },
        }
    }

    /// Membership test for ball descriptors and single-point hulls. Hulls with
    /// several generators are tested against the segment they span only when
    /// there are exactly two generators.
    pub fn contains(&self, u: &[f64], tol: f64) -> bool {
        match self {
            SubgradientSet::Ball { center, radius } => {
                euclidean_norm(&sub(u, center)) <= radius + tol
            }
            SubgradientSet::Hull { generators } => match generators.as_slice() {
                [] => false,
                [g] => euclidean_norm(&sub(u, g)) <= tol,
                [a, b] => {
                    let d = sub(b, a);
                    let dd = crate::linalg::dot(&d, &d);
                    let t = if dd == 0.0 {
                        0.0
                    } else {
                        (crate::linalg::dot(&sub(u, a), &d) / dd).clamp(0.0, 1.0)
                    };
                    let p: Vec<f64> = a.iter().zip(&d).map(|(ai, di)| ai + t * di).collect();
                    euclidean_norm(&sub(u, &p)) <= tol
                }
                _ => generators.iter().any(|g| euclidean_norm(&sub(u, g)) <= tol),
            },
        }
    }
}

/// Structural properties a base function advertises.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub supercoercive: bool,
    pub positively_homogeneous: bool,
    pub even: bool,
    pub full_domain: bool,
    pub nonneg_and_zero_at_zero: bool,
}

/// A proper lower semicontinuous convex function `φ: R^n -> ]-inf, +inf]`.
///
/// Only the value oracle is mandatory; subgradients, recession function and
/// conjugate are attached when closed forms exist. Cloning is cheap.
#[derive(Clone)]
pub struct ConvexFunction {
    name: String,
    dim: usize,
    value: ValueOracle,
    subgradient: Option<SubgradientOracle>,
    recession: Option<ValueOracle>,
    conjugate: Option<ValueOracle>,
    flags: Flags,
    witness: Vec<f64>,
}

impl fmt::Debug for ConvexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexFunction")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("subgradient", &self.subgradient.is_some())
            .field("recession", &self.recession.is_some())
            .field("conjugate", &self.conjugate.is_some())
            .field("flags", &self.flags)
            .finish()
    }
}

impl ConvexFunction {
    /// Wraps a value oracle. `witness` must be a point where the value is
    /// finite; this is the properness check.
    pub fn new<F>(name: impl Into<String>, dim: usize, witness: &[f64], value: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> ExtReal + Send + Sync + 'static,
    {
        let name = name.into();
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        if witness.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: witness.len(),
            });
        }
        if !value(witness).is_finite() {
            return Err(Error::NotProper(format!(
                "{name} is not finite at the supplied witness {witness:?}"
            )));
        }
        Ok(ConvexFunction {
            name,
            dim,
            value: Arc::new(value),
            subgradient: None,
            recession: None,
            conjugate: None,
            flags: Flags::default(),
            witness: witness.to_vec(),
        })
    }

    pub fn with_subgradient<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> Option<SubgradientSet> + Send + Sync + 'static,
    {
        self.subgradient = Some(Arc::new(f));
        self
    }

    pub fn with_recession<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> ExtReal + Send + Sync + 'static,
    {
        self.recession = Some(Arc::new(f));
        self
    }

    pub fn with_conjugate<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> ExtReal + Send + Sync + 'static,
    {
        self.conjugate = Some(Arc::new(f));
        self
    }

    /// Attaches property flags. A supercoercive function with a closed-form
    /// recession must report the indicator of `{0}`.
    pub fn with_flags(mut self, flags: Flags) -> Result<Self> {
        if flags.supercoercive {
            if let Some(rec) = &self.recession {
                let zero = vec![0.0; self.dim];
                let mut e1 = zero.clone();
                e1[0] = 1.0;
                if rec(&zero) != ExtReal::ZERO || rec(&e1) != ExtReal::PosInf {
                    return Err(Error::FlagViolation(format!(
                        "{} is flagged supercoercive but its recession is not the indicator of {{0}}",
                        self.name
                    )));
                }
            }
        }
        self.flags = flags;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    /// A point of the domain supplied at construction.
    pub fn witness(&self) -> &[f64] {
        &self.witness
    }

    pub fn value(&self, y: &[f64]) -> ExtReal {
        debug_assert_eq!(y.len(), self.dim, "{}: wrong input dimension", self.name);
        (self.value)(y)
    }

    pub fn has_subgradient(&self) -> bool {
        self.subgradient.is_some()
    }

    pub fn has_recession(&self) -> bool {
        self.recession.is_some()
    }

    pub fn has_conjugate(&self) -> bool {
        self.conjugate.is_some()
    }

    /// `None` when no oracle is attached; `Some(None)` when the oracle exists
    /// but cannot describe `∂φ(y)` in closed form.
    pub fn subgradient(&self, y: &[f64]) -> Option<Option<SubgradientSet>> {
        self.subgradient.as_ref().map(|f| f(y))
    }

    /// Closed-form recession value, if attached.
    pub fn recession(&self, y: &[f64]) -> Option<ExtReal> {
        self.recession.as_ref().map(|f| f(y))
    }

    /// Closed-form conjugate value, if attached.
    pub fn conjugate(&self, u: &[f64]) -> Option<ExtReal> {
        self.conjugate.as_ref().map(|f| f(u))
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ConvexFunction {
        ConvexFunction::new("sq", 1, &[0.0], |y| (y[0] * y[0]).into()).unwrap()
    }

    #[test]
    fn properness_is_checked_at_witness() {
        let indicator_pos = |y: &[f64]| {
            if y[0] > 0.0 {
                ExtReal::ZERO
            } else {
                ExtReal::PosInf
            }
        };
        assert!(matches!(
            ConvexFunction::new("ind", 1, &[-1.0], indicator_pos),
            Err(Error::NotProper(_))
        ));
        assert!(ConvexFunction::new("ind", 1, &[1.0], indicator_pos).is_ok());
        assert!(matches!(
            ConvexFunction::new("x", 2, &[1.0], indicator_pos),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn supercoercive_flag_requires_indicator_recession() {
        let bad = square().with_recession(|y| y[0].abs().into());
        let flags = Flags {
            supercoercive: true,
            ..Flags::default()
        };
        assert!(matches!(
            bad.with_flags(flags),
            Err(Error::FlagViolation(_))
        ));
        let good = square().with_recession(|y| {
            if y[0] == 0.0 {
                ExtReal::ZERO
            } else {
                ExtReal::PosInf
            }
        });
        assert!(good.with_flags(flags).is_ok());
    }

    #[test]
    fn subgradient_set_helpers() {
        let ball = SubgradientSet::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        };
        assert_eq!(ball.representatives().len(), 5);
        assert!(ball.contains(&[0.6, 0.8], 1e-12));
        assert!(!ball.contains(&[1.0, 1.0], 1e-12));
        let seg = SubgradientSet::Hull {
            generators: vec![vec![0.0], vec![1.0]],
        };
        assert!(seg.contains(&[0.5], 0.0));
        assert!(!seg.contains(&[1.5], 1e-12));
        assert!(SubgradientSet::empty().is_empty());
        let img = ball.affine_image(2.0, &[1.0, 1.0]);
        assert_eq!(
            img,
            SubgradientSet::Ball {
                center: vec![1.0, 1.0],
                radius: 2.0
            }
        );
    }
}
