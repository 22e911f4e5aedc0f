//! φ-divergences between finite vectors, with zero-mass entries handled by
//! the recession function of the generator.
//!
//! `Φ(x, y) = Σ_{ξᵢ = 0} (rec φ)(ηᵢ) + Σ_{ξᵢ > 0} ξᵢ φ(ηᵢ/ξᵢ)`, and `+inf` as
//! soon as some `ξᵢ < 0`.

use crate::catalog::{check_p, pow_abs};
use crate::error::{Error, Result};
use crate::extreal::{ext_scale, ext_sum, CompensatedSum, ExtReal};
use crate::function::ConvexFunction;
use crate::linalg::Vector;
use crate::perspective::Perspective;

/// Reference vector `x = (ξᵢ)` of a divergence, partitioned by the sign of its
/// entries. Zero detection is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVector {
    entries: Vector,
}

impl WeightedVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        Ok(WeightedVector {
            entries: Vector::new(entries)?,
        })
    }

    pub fn entries(&self) -> &[f64] {
        self.entries.as_slice()
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    /// `I₋(x) = {i : ξᵢ < 0}`.
    pub fn negative(&self) -> Vec<usize> {
        self.indices(|v| v < 0.0)
    }

    /// `I₀(x) = {i : ξᵢ = 0}`.
    pub fn zero(&self) -> Vec<usize> {
        self.indices(|v| v == 0.0)
    }

    /// `I₊(x) = {i : ξᵢ > 0}`.
    pub fn positive(&self) -> Vec<usize> {
        self.indices(|v| v > 0.0)
    }

    fn indices(&self, pred: impl Fn(f64) -> bool) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| pred(**v))
            .map(|(i, _)| i)
            .collect()
    }
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if let Some((index, value)) = y.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite {
            index,
            value: *value,
        });
    }
    Ok(())
}

/// `Σᵢ wᵢ φ̃(ξᵢ, ηᵢ)`, with unit weights when `weights` is `None`. Entries with
/// zero weight are skipped; negative or non-finite weights are rejected.
pub fn phi_divergence(
    phi: &ConvexFunction,
    x: &WeightedVector,
    y: &[f64],
    weights: Option<&[f64]>,
) -> Result<ExtReal> {
    phi.check_dim(1)?;
    check_pair(x.entries(), y)?;
    if let Some(w) = weights {
        if w.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: y.len(),
                got: w.len(),
            });
        }
        if let Some(bad) = w.iter().find(|v| **v < 0.0 || !v.is_finite()) {
            return Err(Error::BadWeights(format!(
                "weight {bad} is not a finite nonnegative number"
            )));
        }
    }
    if !x.negative().is_empty() {
        return Ok(ExtReal::PosInf);
    }
    let p = Perspective::new(phi.clone());
    let mut terms = Vec::with_capacity(y.len());
    for (i, (xi, yi)) in x.entries().iter().zip(y).enumerate() {
        let w = weights.map_or(1.0, |w| w[i]);
        if w == 0.0 {
            continue;
        }
        let term = p.value(*xi, &[*yi])?;
        terms.push(if w == 1.0 { term } else { ext_scale(w, term)? });
    }
    ext_sum(terms)
}

/// Kullback–Leibler divergence `Σ ηᵢ ln(ηᵢ/ξᵢ)`, i.e. the divergence generated
/// by `t ln t`. It is `+inf` when some `ξᵢ < 0`, or `ξᵢ = 0` with `ηᵢ ≠ 0`, or
/// `ξᵢ > 0` with `ηᵢ < 0`; terms with `ηᵢ = 0` vanish.
pub fn kl(x: &[f64], y: &[f64]) -> Result<ExtReal> {
    check_pair(x, y)?;
    let x = WeightedVector::new(x.to_vec())?;
    let mut sum = CompensatedSum::default();
    for (&xi, &yi) in x.entries().iter().zip(y) {
        if xi < 0.0 || (xi == 0.0 && yi != 0.0) || (xi > 0.0 && yi < 0.0) {
            return Ok(ExtReal::PosInf);
        }
        if xi > 0.0 && yi > 0.0 {
            sum.add(yi * (yi / xi).ln());
        }
    }
    Ok(ExtReal::from_f64(sum.value()))
}

fn root(t: f64, p: f64) -> f64 {
    if p == 1.0 {
        t
    } else if p == 2.0 {
        t.sqrt()
    } else {
        t.powf(1.0 / p)
    }
}

/// Power divergence generated by `|t^{1/p} − 1|^p` (Kolmogorov variational
/// distance for `p = 1`, Hellinger for `p = 2`):
/// `Σ_{ξᵢ = 0, ηᵢ > 0} ηᵢ + Σ_{ξᵢ > 0} |ηᵢ^{1/p} − ξᵢ^{1/p}|^p`, and `+inf`
/// when some `ξᵢ < 0` or some `ηᵢ < 0`.
pub fn power_divergence(p: f64, x: &[f64], y: &[f64]) -> Result<ExtReal> {
    check_p(p)?;
    check_pair(x, y)?;
    let x = WeightedVector::new(x.to_vec())?;
    let mut sum = CompensatedSum::default();
    for (&xi, &yi) in x.entries().iter().zip(y) {
        if xi < 0.0 || yi < 0.0 {
            return Ok(ExtReal::PosInf);
        }
        if xi == 0.0 {
            sum.add(yi);
        } else {
            sum.add(pow_abs(root(yi, p) - root(xi, p), p));
        }
    }
    Ok(ExtReal::from_f64(sum.value()))
}
