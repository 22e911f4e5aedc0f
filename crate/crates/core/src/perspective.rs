//! The lower semicontinuous perspective `φ̃(η, y)`.
//!
//! ```text
//! φ̃(η, y) = η φ(y/η)      if η > 0
//!          = (rec φ)(y)    if η = 0
//!          = +inf          if η < 0
//! ```
//!
//! The recession branch is taken from the base function's closed form when it
//! has one, and otherwise estimated from the difference quotients
//! `q(α) = [φ(z + α y) − φ(z)] / α` along a geometric `α` ladder.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extreal::{ext_add, ext_scale, ExtReal};
use crate::function::{ConvexFunction, SubgradientSet};
use crate::linalg::{axpy, dot};

/// Default `α` ladder for the numeric recession estimator: `1e2, 1e3, ..., 1e10`.
pub const DEFAULT_ALPHA_SCHEDULE: [f64; 9] = [1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10];
/// Successive quotients closer than `STABILIZATION_TOL * (1 + |q|)` are accepted.
pub const STABILIZATION_TOL: f64 = 1e-8;
/// A quotient above this threshold is reported as `+inf`.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;
/// Absolute tolerance of [`Perspective::conjugate_membership`].
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// A point `(η, y)` of `R × R^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerspectivePoint {
    pub eta: f64,
    pub y: Vec<f64>,
}

impl PerspectivePoint {
    pub fn new(eta: f64, y: Vec<f64>) -> Self {
        PerspectivePoint { eta, y }
    }
}

/// An element `(μ, u)` of `R × R^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgradientPair {
    pub mu: f64,
    pub u: Vec<f64>,
}

/// How the `η = 0` branch is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum RecessionMode {
    ClosedForm,
    Numeric {
        witness: Vec<f64>,
        schedule: Vec<f64>,
    },
}

/// Deliberate defects for mutation testing of the check suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Defect {
    /// The recession branch returns 0 everywhere.
    ZeroRecession,
    /// `η < 0` evaluates `η φ(y/η)` instead of `+inf`.
    NegativeEtaBranch,
    /// Every returned subgradient has its `μ` shifted by the given amount.
    ShiftedMu(f64),
}

impl Defect {
    /// The three defects of the mutant suite, numbered from 1.
    pub fn from_index(k: u32) -> Option<Defect> {
        match k {
            1 => Some(Defect::ZeroRecession),
            2 => Some(Defect::NegativeEtaBranch),
            3 => Some(Defect::ShiftedMu(1.0)),
            _ => None,
        }
    }
}

/// The set `C = {(μ, u) : μ + φ*(u) ≤ 0}`, represented by its membership test.
#[derive(Debug, Clone)]
pub struct ConjugateSet {
    base: ConvexFunction,
}

impl ConjugateSet {
    pub fn contains(&self, pair: &SubgradientPair, tol: f64) -> Result<bool> {
        self.base.check_dim(pair.u.len())?;
        let conj = self
            .base
            .conjugate(&pair.u)
            .ok_or(Error::MissingOracle("conjugate"))?;
        let lhs = ext_add(ExtReal::Finite(pair.mu), conj)?;
        Ok(lhs <= ExtReal::Finite(tol))
    }
}

/// `∂φ̃(η, y)` in one of its closed-form shapes.
#[derive(Debug, Clone)]
pub enum PerspectiveSubdifferential {
    Empty,
    /// `η > 0`: the image of `∂φ(y/η)` under `u ↦ (φ(y/η) − ⟨y,u⟩/η, u)`.
    Lifted {
        eta: f64,
        y: Vec<f64>,
        base_value: f64,
        set: SubgradientSet,
        mu_shift: f64,
    },
    /// `η = 0, y = 0`: the whole set `C`.
    Cone(ConjugateSet),
}

impl PerspectiveSubdifferential {
    pub fn is_empty(&self) -> bool {
        match self {
            PerspectiveSubdifferential::Empty => true,
            PerspectiveSubdifferential::Lifted { set, .. } => set.is_empty(),
            PerspectiveSubdifferential::Cone(_) => false,
        }
    }

    /// Representative elements: all generators of a lifted hull, or the lifted
    /// center and axis points of a lifted ball. Empty for `C`, which is only
    /// available through [`contains`](Self::contains).
    pub fn pairs(&self) -> Vec<SubgradientPair> {
        match self {
            PerspectiveSubdifferential::Lifted {
                eta,
                y,
                base_value,
                set,
                mu_shift,
            } => set
                .representatives()
                .into_iter()
                .map(|u| SubgradientPair {
                    mu: base_value - dot(y, &u) / eta + mu_shift,
                    u,
                })
                .collect(),
            _ => vec![],
        }
    }

    pub fn contains(&self, pair: &SubgradientPair, tol: f64) -> Result<bool> {
        match self {
            PerspectiveSubdifferential::Empty => Ok(false),
            PerspectiveSubdifferential::Lifted {
                eta,
                y,
                base_value,
                set,
                mu_shift,
            } => {
                let mu = base_value - dot(y, &pair.u) / eta + mu_shift;
                Ok(set.contains(&pair.u, tol) && (pair.mu - mu).abs() <= tol * (1.0 + mu.abs()))
            }
            PerspectiveSubdifferential::Cone(c) => c.contains(pair, tol),
        }
    }
}

/// The perspective of a base function.
#[derive(Debug, Clone)]
pub struct Perspective {
    base: ConvexFunction,
    mode: RecessionMode,
    defect: Option<Defect>,
}

impl Perspective {
    /// Uses the base function's closed-form recession when present, otherwise
    /// the numeric estimator anchored at the base function's witness.
    pub fn new(base: ConvexFunction) -> Self {
        let mode = if base.has_recession() {
            RecessionMode::ClosedForm
        } else {
            RecessionMode::Numeric {
                witness: base.witness().to_vec(),
                schedule: DEFAULT_ALPHA_SCHEDULE.to_vec(),
            }
        };
        Perspective {
            base,
            mode,
            defect: None,
        }
    }

    /// Forces the numeric recession estimator with the given anchor `z ∈ dom φ`.
    pub fn numeric(base: ConvexFunction, witness: &[f64], schedule: &[f64]) -> Result<Self> {
        if witness.len() != base.dim() || !base.value(witness).is_finite() {
            return Err(Error::NoWitness);
        }
        if schedule.is_empty() || schedule.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::Unsupported(
                "alpha schedule must be a nonempty list of positive reals".into(),
            ));
        }
        Ok(Perspective {
            base,
            mode: RecessionMode::Numeric {
                witness: witness.to_vec(),
                schedule: schedule.to_vec(),
            },
            defect: None,
        })
    }

    /// Injects a defect; used only to verify that the check suite notices it.
    pub fn with_defect(mut self, defect: Option<Defect>) -> Self {
        self.defect = defect;
        self
    }

    pub fn base(&self) -> &ConvexFunction {
        &self.base
    }

    pub fn mode(&self) -> &RecessionMode {
        &self.mode
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// `φ̃(η, y)`.
    pub fn value(&self, eta: f64, y: &[f64]) -> Result<ExtReal> {
        self.base.check_dim(y.len())?;
        if eta > 0.0 {
            if self.base.flags().positively_homogeneous {
                // η φ(y/η) = φ(y): skip the two roundings
                return Ok(self.base.value(y));
            }
            let w: Vec<f64> = y.iter().map(|yi| yi / eta).collect();
            ext_scale(eta, self.base.value(&w))
        } else if eta == 0.0 {
            if self.defect == Some(Defect::ZeroRecession) {
                return Ok(ExtReal::ZERO);
            }
            self.recession_value(y)
        } else if eta < 0.0 {
            if self.defect == Some(Defect::NegativeEtaBranch) {
                let w: Vec<f64> = y.iter().map(|yi| yi / eta).collect();
                return Ok(match self.base.value(&w) {
                    ExtReal::Finite(v) => ExtReal::from_f64(eta * v),
                    _ => ExtReal::PosInf,
                });
            }
            Ok(ExtReal::PosInf)
        } else {
            Err(Error::NonFinite {
                index: 0,
                value: eta,
            })
        }
    }

    pub fn value_at(&self, pt: &PerspectivePoint) -> Result<ExtReal> {
        self.value(pt.eta, &pt.y)
    }

    /// `(rec φ)(y)`, closed form or numeric.
    pub fn recession_value(&self, y: &[f64]) -> Result<ExtReal> {
        self.base.check_dim(y.len())?;
        match &self.mode {
            RecessionMode::ClosedForm => self
                .base
                .recession(y)
                .ok_or(Error::MissingOracle("recession")),
            RecessionMode::Numeric { witness, schedule } => {
                estimate_recession(&self.base, witness, y, schedule)
            }
        }
    }

    /// `∂φ̃(η, y)`.
    pub fn subdifferential(&self, eta: f64, y: &[f64]) -> Result<PerspectiveSubdifferential> {
        self.base.check_dim(y.len())?;
        if eta < 0.0 {
            return Ok(PerspectiveSubdifferential::Empty);
        }
        if eta == 0.0 {
            if y.iter().all(|v| *v == 0.0) {
                if !self.base.has_conjugate() {
                    return Err(Error::MissingOracle("conjugate"));
                }
                return Ok(PerspectiveSubdifferential::Cone(ConjugateSet {
                    base: self.base.clone(),
                }));
            }
            if self.base.flags().supercoercive {
                return Ok(PerspectiveSubdifferential::Empty);
            }
            return Err(Error::Unsupported(format!(
                "subdifferential of the perspective of {} at eta = 0, y != 0 needs support-point data",
                self.base.name()
            )));
        }
        if !eta.is_finite() {
            return Err(Error::NonFinite {
                index: 0,
                value: eta,
            });
        }
        if !self.base.has_subgradient() {
            return Err(Error::MissingOracle("subgradient"));
        }
        let w: Vec<f64> = y.iter().map(|yi| yi / eta).collect();
        let base_value = match self.base.value(&w) {
            ExtReal::Finite(v) => v,
            _ => return Ok(PerspectiveSubdifferential::Empty),
        };
        let set = self.base.subgradient(&w).flatten().ok_or_else(|| {
            Error::Unsupported(format!(
                "{} has no closed-form subdifferential at {w:?}",
                self.base.name()
            ))
        })?;
        if set.is_empty() {
            return Ok(PerspectiveSubdifferential::Empty);
        }
        let mu_shift = match self.defect {
            Some(Defect::ShiftedMu(d)) => d,
            _ => 0.0,
        };
        Ok(PerspectiveSubdifferential::Lifted {
            eta,
            y: y.to_vec(),
            base_value,
            set,
            mu_shift,
        })
    }

    /// Whether `(μ, u)` lies in `C = {μ + φ*(u) ≤ 0}`, i.e. in the domain of
    /// `(φ̃)*`, up to [`MEMBERSHIP_TOL`].
    pub fn conjugate_membership(&self, pair: &SubgradientPair) -> Result<bool> {
        ConjugateSet {
            base: self.base.clone(),
        }
        .contains(pair, MEMBERSHIP_TOL)
    }

    /// `μ + φ*(u)`, the quantity tested by [`conjugate_membership`](Self::conjugate_membership).
    pub fn conjugate_gap(&self, pair: &SubgradientPair) -> Result<ExtReal> {
        self.base.check_dim(pair.u.len())?;
        let conj = self
            .base
            .conjugate(&pair.u)
            .ok_or(Error::MissingOracle("conjugate"))?;
        ext_add(ExtReal::Finite(pair.mu), conj)
    }
}

/// `q(α) = [φ(z + α y) − φ(z)] / α`.
pub fn recession_quotient(
    base: &ConvexFunction,
    z: &[f64],
    y: &[f64],
    alpha: f64,
) -> Result<ExtReal> {
    let fz = base.value(z).finite().ok_or(Error::NoWitness)?;
    let p = axpy(alpha, y, z);
    Ok(match base.value(&p) {
        ExtReal::Finite(v) => ExtReal::from_f64((v - fz) / alpha),
        other => other,
    })
}

/// Numeric limit of the difference quotients along `schedule`.
pub fn estimate_recession(
    base: &ConvexFunction,
    z: &[f64],
    y: &[f64],
    schedule: &[f64],
) -> Result<ExtReal> {
    if z.len() != base.dim() || !base.value(z).is_finite() {
        return Err(Error::NoWitness);
    }
    base.check_dim(y.len())?;
    let mut prev: Option<f64> = None;
    let mut last = f64::NAN;
    for &alpha in schedule {
        let q = match recession_quotient(base, z, y, alpha)? {
            ExtReal::Finite(q) => q,
            // z + αy left the domain; by convexity it stays out for larger α
            ExtReal::PosInf => return Ok(ExtReal::PosInf),
            ExtReal::NegInf => return Ok(ExtReal::NegInf),
        };
        if q > DIVERGENCE_THRESHOLD {
            return Ok(ExtReal::PosInf);
        }
        if let Some(p) = prev {
            if (q - p).abs() <= STABILIZATION_TOL * (1.0 + q.abs()) {
                return Ok(ExtReal::Finite(q));
            }
        }
        prev = Some(q);
        last = q;
    }
    Err(Error::NotConverged { last })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use proptest::prelude::*;

    fn sq1() -> Perspective {
        Perspective::new(make_norm_power(1, 2.0, 1.0).unwrap())
    }

    #[test]
    fn value_examples() {
        let p = sq1();
        assert_eq!(p.value(2.0, &[4.0]).unwrap(), ExtReal::Finite(8.0));
        assert_eq!(p.value(0.0, &[0.0]).unwrap(), ExtReal::ZERO);
        assert_eq!(p.value(-1.0, &[1.0]).unwrap(), ExtReal::PosInf);
        let h = Perspective::new(make_huber(1, 1.0).unwrap());
        assert_eq!(h.value(2.0, &[3.0]).unwrap(), ExtReal::Finite(2.0));
        let b = Perspective::new(make_berhu(1, 1.0).unwrap());
        assert_eq!(b.value(1.0, &[2.0]).unwrap(), ExtReal::Finite(2.5));
        assert!(matches!(
            p.value(1.0, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(p.value(f64::NAN, &[1.0]).is_err());
    }

    #[test]
    fn tiny_eta_does_not_produce_nan() {
        let p = sq1();
        assert_eq!(p.value(1e-320, &[0.0]).unwrap(), ExtReal::ZERO);
        assert_eq!(p.value(1e-320, &[1.0]).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn recession_closed_form_examples() {
        let n = Perspective::new(make_norm(2).unwrap());
        assert_eq!(
            n.recession_value(&[3.0, 4.0]).unwrap(),
            ExtReal::Finite(5.0)
        );
        let s = Perspective::new(make_norm_power(2, 2.0, 1.0).unwrap());
        assert_eq!(s.recession_value(&[1.0, 0.0]).unwrap(), ExtReal::PosInf);
        let v = Perspective::new(make_vapnik(2, 1.0).unwrap());
        assert_eq!(
            v.recession_value(&[0.0, 2.0]).unwrap(),
            ExtReal::Finite(2.0)
        );
    }

    #[test]
    fn recession_numeric_examples() {
        let sched = DEFAULT_ALPHA_SCHEDULE;
        let n = Perspective::numeric(make_norm(2).unwrap(), &[0.0, 0.0], &sched).unwrap();
        let r = n.recession_value(&[3.0, 4.0]).unwrap().finite().unwrap();
        assert!((r - 5.0).abs() < 1e-12);
        // q(α) = α for the squared norm: it never passes 1e12 on the default ladder
        let s = Perspective::numeric(make_norm_power(2, 2.0, 1.0).unwrap(), &[0.0, 0.0], &sched)
            .unwrap();
        assert_eq!(
            s.recession_value(&[1.0, 0.0]).unwrap_err(),
            Error::NotConverged { last: 1e10 }
        );
        let long = [1e2, 1e4, 1e8, 1e16];
        let s = Perspective::numeric(make_norm_power(2, 2.0, 1.0).unwrap(), &[0.0, 0.0], &long)
            .unwrap();
        assert_eq!(s.recession_value(&[1.0, 0.0]).unwrap(), ExtReal::PosInf);
        let v = Perspective::numeric(make_vapnik(2, 1.0).unwrap(), &[0.0, 0.0], &sched).unwrap();
        let r = v.recession_value(&[0.0, 2.0]).unwrap().finite().unwrap();
        assert!((r - 2.0).abs() < 1e-8);
        // leaving the domain is detected immediately
        let e = Perspective::numeric(make_entropy().unwrap(), &[1.0], &sched).unwrap();
        assert_eq!(e.recession_value(&[-1.0]).unwrap(), ExtReal::PosInf);
        assert_eq!(e.recession_value(&[0.0]).unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn recession_numeric_errors() {
        let e = make_entropy().unwrap();
        assert_eq!(
            Perspective::numeric(e.clone(), &[-1.0], &DEFAULT_ALPHA_SCHEDULE).unwrap_err(),
            Error::NoWitness
        );
        // t ln t grows like ln α along positive directions: neither stable nor
        // above the divergence threshold on the default ladder
        let p = Perspective::numeric(e, &[1.0], &DEFAULT_ALPHA_SCHEDULE).unwrap();
        assert!(matches!(
            p.recession_value(&[1.0]),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn power_generator_recession_converges_slowly() {
        // from z = 0, q(α) = d − 2 sqrt(d/α) for p = 2 while the closed form is d
        let f = make_power_divergence_generator(2.0).unwrap();
        assert_eq!(f.recession(&[3.0]), Some(ExtReal::Finite(3.0)));
        let q = recession_quotient(&f, &[0.0], &[3.0], 1e10)
            .unwrap()
            .finite()
            .unwrap();
        let predicted = 3.0 - 2.0 * (3.0f64 / 1e10).sqrt();
        assert!((q - predicted).abs() < 1e-12);
        assert!((q - 3.0).abs() < 1e-4);
    }

    #[test]
    fn fair_recession_for_p1_matches_limit() {
        // rec of rho|t| - ln(1 + rho|t|) is rho|t|: confirm on the limit estimator
        for rho in [0.5, 1.0, 3.0] {
            let f = make_fair(rho, 1.0).unwrap();
            for d in [-2.0, -0.3, 0.7, 4.0] {
                let q = recession_quotient(&f, &[0.0], &[d], 1e12)
                    .unwrap()
                    .finite()
                    .unwrap();
                assert!(
                    (q - rho * f64::abs(d)).abs() < 1e-9,
                    "rho={rho} d={d} q={q}"
                );
            }
        }
    }

    #[test]
    fn subdifferential_examples() {
        let p = sq1();
        let s = p.subdifferential(1.0, &[1.0]).unwrap();
        assert_eq!(
            s.pairs(),
            vec![SubgradientPair {
                mu: -1.0,
                u: vec![2.0]
            }]
        );
        assert!(p.subdifferential(0.0, &[1.0]).unwrap().is_empty());
        assert!(p.subdifferential(-1.0, &[0.0]).unwrap().is_empty());
        match p.subdifferential(0.0, &[0.0]).unwrap() {
            PerspectiveSubdifferential::Cone(c) => {
                assert!(c
                    .contains(
                        &SubgradientPair {
                            mu: -1.0,
                            u: vec![2.0]
                        },
                        0.0
                    )
                    .unwrap());
                assert!(!c
                    .contains(
                        &SubgradientPair {
                            mu: 0.0,
                            u: vec![2.0]
                        },
                        0.0
                    )
                    .unwrap());
            }
            other => panic!("expected C, got {other:?}"),
        }
    }

    #[test]
    fn subdifferential_errors() {
        // non-supercoercive base at eta = 0, y != 0
        let h = Perspective::new(make_huber(1, 1.0).unwrap());
        assert!(matches!(
            h.subdifferential(0.0, &[1.0]),
            Err(Error::Unsupported(_))
        ));
        // no conjugate oracle for the cone
        let f = Perspective::new(make_fair(1.0, 2.0).unwrap());
        assert_eq!(
            f.subdifferential(0.0, &[0.0]).unwrap_err(),
            Error::MissingOracle("conjugate")
        );
        let bare = ConvexFunction::new("bare", 1, &[0.0], |y| (y[0] * y[0]).into()).unwrap();
        assert_eq!(
            Perspective::new(bare)
                .subdifferential(1.0, &[1.0])
                .unwrap_err(),
            Error::MissingOracle("subgradient")
        );
        // p = 1 power generator at t = 0 has an unbounded subdifferential
        let g = Perspective::new(make_power_divergence_generator(1.0).unwrap());
        assert!(matches!(
            g.subdifferential(1.0, &[0.0]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn subdifferential_of_norm_at_origin_is_lifted_ball() {
        let p = Perspective::new(make_norm(2).unwrap());
        let s = p.subdifferential(1.0, &[0.0, 0.0]).unwrap();
        let pairs = s.pairs();
        assert_eq!(pairs.len(), 5);
        for pair in &pairs {
            assert_eq!(pair.mu, 0.0);
            assert!(s.contains(pair, 1e-12).unwrap());
        }
        assert!(!s
            .contains(
                &SubgradientPair {
                    mu: 0.0,
                    u: vec![1.0, 1.0]
                },
                1e-12
            )
            .unwrap());
    }

    #[test]
    fn conjugate_membership_examples() {
        let p = sq1();
        let m = |mu: f64, u: f64| {
            p.conjugate_membership(&SubgradientPair { mu, u: vec![u] })
                .unwrap()
        };
        assert!(m(-1.0, 2.0));
        assert!(!m(0.0, 2.0));
        assert!(m(-5.0, 0.0));
        let f = Perspective::new(make_fair(1.0, 1.0).unwrap());
        assert_eq!(
            f.conjugate_membership(&SubgradientPair {
                mu: 0.0,
                u: vec![0.0]
            })
            .unwrap_err(),
            Error::MissingOracle("conjugate")
        );
    }

    #[test]
    fn defects_change_the_branches() {
        let p = sq1();
        let z = p.clone().with_defect(Some(Defect::ZeroRecession));
        assert_eq!(z.value(0.0, &[1.0]).unwrap(), ExtReal::ZERO);
        let n = p.clone().with_defect(Some(Defect::NegativeEtaBranch));
        assert_eq!(n.value(-1.0, &[1.0]).unwrap(), ExtReal::Finite(-1.0));
        let m = p.with_defect(Some(Defect::ShiftedMu(1.0)));
        assert_eq!(m.subdifferential(1.0, &[1.0]).unwrap().pairs()[0].mu, 0.0);
        assert_eq!(Defect::from_index(4), None);
    }

    proptest! {
        #[test]
        fn homogeneity_of_squared_norm(eta in 0.0..10.0f64, y in -10.0..10.0f64, lambda in 1e-3..10.0f64) {
            let p = sq1();
            let a = p.value(lambda * eta, &[lambda * y]).unwrap();
            let b = p.value(eta, &[y]).unwrap();
            match (a, b) {
                (ExtReal::Finite(a), ExtReal::Finite(b)) => {
                    prop_assert!((a - lambda * b).abs() <= 1e-12 * a.abs().max(1.0));
                }
                (a, b) => prop_assert_eq!(a, b),
            }
        }

        #[test]
        fn base_consistency(y in -50.0..50.0f64, z in -50.0..50.0f64) {
            for f in [make_huber(2, 1.3).unwrap(), make_berhu(2, 0.7).unwrap(), make_vapnik(2, 2.0).unwrap()] {
                let p = Perspective::new(f.clone());
                prop_assert_eq!(p.value(1.0, &[y, z]).unwrap(), f.value(&[y, z]));
            }
        }

        #[test]
        fn quotient_is_nondecreasing(d in -5.0..5.0f64, z in -0.5..0.5f64) {
            for f in [make_huber(1, 1.0).unwrap(), make_fair(2.0, 1.0).unwrap(), make_vapnik(1, 0.5).unwrap()] {
                let qs: Vec<ExtReal> = DEFAULT_ALPHA_SCHEDULE
                    .iter()
                    .map(|a| recession_quotient(&f, &[z], &[d], *a).unwrap())
                    .collect();
                for w in qs.windows(2) {
                    let (a, b) = (w[0].to_f64(), w[1].to_f64());
                    prop_assert!(b >= a - 1e-12 * (1.0 + a.abs()), "{a} then {b}");
                }
            }
        }
    }
}
