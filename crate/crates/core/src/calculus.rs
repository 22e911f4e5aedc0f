//! Combinators that build new convex functions whose perspectives follow from
//! the perspectives of their ingredients, plus a few explicit perspective
//! formulas (affine composition, TREX, expectations, marginals, constrained
//! and generalized Huber perspectives).

use crate::catalog::{check_p, check_positive, indicator_zero, pow_abs};
use crate::error::{Error, Result};
use crate::extreal::{ext_add, ext_scale, ext_sum, CompensatedSum, ExtReal};
use crate::function::{ConvexFunction, Flags, SubgradientSet};
use crate::linalg::{dot, euclidean_norm, Matrix};
use crate::perspective::Perspective;

/// Upper bound on the number of generators produced by Minkowski sums and
/// Cartesian products of hulls.
const MAX_GENERATORS: usize = 4096;

fn minkowski_sum(lambda: f64, a: &SubgradientSet, b: &SubgradientSet) -> Option<SubgradientSet> {
    use SubgradientSet::*;
    if a.is_empty() || b.is_empty() {
        return Some(SubgradientSet::empty());
    }
    let comb = |x: &[f64], y: &[f64]| -> Vec<f64> {
        x.iter().zip(y).map(|(p, q)| lambda * p + q).collect()
    };
    match (a, b) {
        (Hull { generators: ga }, Hull { generators: gb }) => {
            if ga.len() * gb.len() > MAX_GENERATORS {
                return None;
            }
            let mut generators = Vec::with_capacity(ga.len() * gb.len());
            for x in ga {
                for y in gb {
                    generators.push(comb(x, y));
                }
            }
            Some(Hull { generators })
        }
        (Hull { generators: ga }, Ball { center, radius }) if ga.len() == 1 => Some(Ball {
            center: comb(&ga[0], center),
            radius: *radius,
        }),
        (Ball { center, radius }, Hull { generators: gb }) if gb.len() == 1 => Some(Ball {
            center: comb(center, &gb[0]),
            radius: lambda * radius,
        }),
        (
            Ball {
                center: ca,
                radius: ra,
            },
            Ball {
                center: cb,
                radius: rb,
            },
        ) => Some(Ball {
            center: comb(ca, cb),
            radius: lambda * ra + rb,
        }),
        _ => None,
    }
}

/// `λφ + ψ`. Its perspective is `λφ̃ + ψ̃`.
pub fn scale_add(
    lambda: f64,
    phi: &ConvexFunction,
    psi: &ConvexFunction,
    witness: &[f64],
) -> Result<ConvexFunction> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::BadScale(lambda));
    }
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            got: psi.dim(),
        });
    }
    phi.check_dim(witness.len())?;
    if !phi.value(witness).is_finite() || !psi.value(witness).is_finite() {
        return Err(Error::EmptyIntersection);
    }
    let combine = move |a: ExtReal, b: ExtReal| -> ExtReal {
        ext_scale(lambda, a)
            .and_then(|a| ext_add(a, b))
            .unwrap_or(ExtReal::PosInf)
    };
    let (f, g) = (phi.clone(), psi.clone());
    let mut out = ConvexFunction::new(
        format!("{lambda}*{}+{}", phi.name(), psi.name()),
        phi.dim(),
        witness,
        move |y| combine(f.value(y), g.value(y)),
    )?;
    if phi.has_subgradient() && psi.has_subgradient() {
        let (f, g) = (phi.clone(), psi.clone());
        out = out.with_subgradient(move |y| {
            let a = f.subgradient(y).flatten()?;
            let b = g.subgradient(y).flatten()?;
            minkowski_sum(lambda, &a, &b)
        });
    }
    if phi.has_recession() && psi.has_recession() {
        let (f, g) = (phi.clone(), psi.clone());
        out =
            out.with_recession(move |y| combine(f.recession(y).unwrap(), g.recession(y).unwrap()));
    }
    let (a, b) = (phi.flags(), psi.flags());
    out.with_flags(Flags {
        supercoercive: a.supercoercive || b.supercoercive,
        positively_homogeneous: a.positively_homogeneous && b.positively_homogeneous,
        even: a.even && b.even,
        full_domain: a.full_domain && b.full_domain,
        nonneg_and_zero_at_zero: a.nonneg_and_zero_at_zero && b.nonneg_and_zero_at_zero,
    })
}

/// `x ↦ φ(Λx)` for an `m × n` matrix `Λ` with `m = dim φ`. Its perspective is
/// `(ξ, x) ↦ φ̃(ξ, Λx)` and its recession function is `(rec φ) ∘ Λ`.
pub fn precompose_linear(
    phi: &ConvexFunction,
    lin: &Matrix,
    witness: &[f64],
) -> Result<ConvexFunction> {
    phi.check_dim(lin.rows())?;
    if witness.len() != lin.cols() {
        return Err(Error::DimensionMismatch {
            expected: lin.cols(),
            got: witness.len(),
        });
    }
    if !phi.value(&lin.apply(witness)).is_finite() {
        return Err(Error::EmptyIntersection);
    }
    let (f, m) = (phi.clone(), lin.clone());
    let mut out = ConvexFunction::new(
        format!("{}∘Λ", phi.name()),
        lin.cols(),
        witness,
        move |x| f.value(&m.apply(x)),
    )?;
    // the chain rule holds with equality whenever dom φ is the whole space
    if phi.has_subgradient() && phi.flags().full_domain {
        let (f, m) = (phi.clone(), lin.clone());
        out = out.with_subgradient(move |x| match f.subgradient(&m.apply(x)).flatten()? {
            SubgradientSet::Hull { generators } => Some(SubgradientSet::Hull {
                generators: generators.iter().map(|u| m.apply_transpose(u)).collect(),
            }),
            SubgradientSet::Ball { .. } => None,
        });
    }
    if phi.has_recession() {
        let (f, m) = (phi.clone(), lin.clone());
        out = out.with_recession(move |x| f.recession(&m.apply(x)).unwrap());
    }
    let a = phi.flags();
    out.with_flags(Flags {
        supercoercive: false,
        positively_homogeneous: a.positively_homogeneous,
        even: a.even,
        full_domain: a.full_domain,
        nonneg_and_zero_at_zero: a.nonneg_and_zero_at_zero,
    })
}

/// `y ↦ ϕ(φ(y))` for a positively homogeneous full-domain `φ` and a
/// univariate `ϕ` that is increasing on the range of `φ` with `0 ∈ dom ϕ`.
/// Its perspective is `(η, y) ↦ ϕ̃(η, φ(y))`, including `η = 0` where it is
/// `(rec ϕ)(φ(y))`. Monotonicity of `ϕ` is a documented precondition and is
/// not verified.
pub fn compose_monotone(outer: &ConvexFunction, inner: &ConvexFunction) -> Result<ConvexFunction> {
    outer.check_dim(1)?;
    let fl = inner.flags();
    if !fl.positively_homogeneous || !fl.full_domain {
        return Err(Error::FlagViolation(format!(
            "inner function {} must be positively homogeneous with full domain",
            inner.name()
        )));
    }
    if !outer.value(&[0.0]).is_finite() {
        return Err(Error::FlagViolation(format!(
            "0 is not in the domain of {}",
            outer.name()
        )));
    }
    let witness = vec![0.0; inner.dim()];
    let (f, g) = (outer.clone(), inner.clone());
    let mut out = ConvexFunction::new(
        format!("{}∘{}", outer.name(), inner.name()),
        inner.dim(),
        &witness,
        move |y| match g.value(y) {
            ExtReal::Finite(t) => f.value(&[t]),
            other => other,
        },
    )?;
    if outer.has_subgradient() && inner.has_subgradient() {
        let (f, g) = (outer.clone(), inner.clone());
        out = out.with_subgradient(move |y| {
            let t = g.value(y).finite()?;
            let slopes = f.subgradient(&[t]).flatten()?;
            let inner_set = g.subgradient(y).flatten()?;
            if slopes.is_empty() || inner_set.is_empty() {
                return Some(SubgradientSet::empty());
            }
            let zero = vec![0.0; y.len()];
            match slopes {
                SubgradientSet::Hull { generators } if generators.len() == 1 => {
                    let a = generators[0][0];
                    (a >= 0.0).then(|| inner_set.affine_image(a, &zero))
                }
                SubgradientSet::Hull { generators } => match inner_set {
                    SubgradientSet::Hull { generators: vs } if vs.len() == 1 => {
                        Some(SubgradientSet::Hull {
                            generators: generators
                                .iter()
                                .map(|a| vs[0].iter().map(|v| a[0] * v).collect())
                                .collect(),
                        })
                    }
                    _ => None,
                },
                SubgradientSet::Ball { .. } => None,
            }
        });
    }
    if outer.has_recession() {
        let (f, g) = (outer.clone(), inner.clone());
        out = out.with_recession(move |y| match g.value(y) {
            ExtReal::Finite(t) => f.recession(&[t]).unwrap(),
            other => other,
        });
    }
    let a = outer.flags();
    out.with_flags(Flags {
        supercoercive: false,
        positively_homogeneous: a.positively_homogeneous,
        even: fl.even,
        full_domain: a.full_domain,
        nonneg_and_zero_at_zero: a.nonneg_and_zero_at_zero && fl.nonneg_and_zero_at_zero,
    })
}

fn block_offsets(parts: &[ConvexFunction]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(parts.len() + 1);
    let mut acc = 0;
    offsets.push(0);
    for p in parts {
        acc += p.dim();
        offsets.push(acc);
    }
    offsets
}

/// The separable sum `(y₁, ..., y_k) ↦ Σ φᵢ(yᵢ)` on the concatenated space. Its
/// perspective is `Σ φ̃ᵢ(η, yᵢ)` with the same `η` in every block.
pub fn direct_sum(parts: &[ConvexFunction]) -> Result<ConvexFunction> {
    if parts.is_empty() {
        return Err(Error::EmptyVector);
    }
    let offsets = block_offsets(parts);
    let dim = *offsets.last().unwrap();
    let witness: Vec<f64> = parts.iter().flat_map(|p| p.witness().to_vec()).collect();
    let name = parts.iter().map(|p| p.name()).collect::<Vec<_>>().join("⊕");

    let (ps, offs) = (parts.to_vec(), offsets.clone());
    let mut out = ConvexFunction::new(name, dim, &witness, move |y| {
        ext_sum(
            ps.iter()
                .enumerate()
                .map(|(i, p)| p.value(&y[offs[i]..offs[i + 1]])),
        )
        .unwrap_or(ExtReal::PosInf)
    })?;
    if parts.iter().all(|p| p.has_recession()) {
        let (ps, offs) = (parts.to_vec(), offsets.clone());
        out = out.with_recession(move |y| {
            ext_sum(
                ps.iter()
                    .enumerate()
                    .map(|(i, p)| p.recession(&y[offs[i]..offs[i + 1]]).unwrap()),
            )
            .unwrap_or(ExtReal::PosInf)
        });
    }
    if parts.iter().all(|p| p.has_conjugate()) {
        let (ps, offs) = (parts.to_vec(), offsets.clone());
        out = out.with_conjugate(move |u| {
            ext_sum(
                ps.iter()
                    .enumerate()
                    .map(|(i, p)| p.conjugate(&u[offs[i]..offs[i + 1]]).unwrap()),
            )
            .unwrap_or(ExtReal::PosInf)
        });
    }
    if parts.iter().all(|p| p.has_subgradient()) {
        let (ps, offs) = (parts.to_vec(), offsets);
        out = out.with_subgradient(move |y| {
            let mut generators: Vec<Vec<f64>> = vec![vec![]];
            for (i, p) in ps.iter().enumerate() {
                let block = match p.subgradient(&y[offs[i]..offs[i + 1]]).flatten()? {
                    SubgradientSet::Hull { generators } => generators,
                    SubgradientSet::Ball { .. } => return None,
                };
                if block.is_empty() {
                    return Some(SubgradientSet::empty());
                }
                if generators.len() * block.len() > MAX_GENERATORS {
                    return None;
                }
                generators = generators
                    .iter()
                    .flat_map(|prefix| {
                        block.iter().map(move |g| {
                            let mut v = prefix.clone();
                            v.extend_from_slice(g);
                            v
                        })
                    })
                    .collect();
            }
            Some(SubgradientSet::Hull { generators })
        });
    }
    let all = |f: fn(&Flags) -> bool| parts.iter().all(|p| f(&p.flags()));
    out.with_flags(Flags {
        supercoercive: all(|f| f.supercoercive),
        positively_homogeneous: all(|f| f.positively_homogeneous),
        even: all(|f| f.even),
        full_domain: all(|f| f.full_domain),
        nonneg_and_zero_at_zero: all(|f| f.nonneg_and_zero_at_zero),
    })
}

/// The affine map `A: x ↦ (⟨x, u⟩ − ρ, Lx − r)` from `R^n` to `R × R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    l: Matrix,
    r: Vec<f64>,
    u: Vec<f64>,
    rho: f64,
}

impl AffineMap {
    pub fn new(l: Matrix, r: Vec<f64>, u: Vec<f64>, rho: f64) -> Result<Self> {
        if r.len() != l.rows() {
            return Err(Error::DimensionMismatch {
                expected: l.rows(),
                got: r.len(),
            });
        }
        if u.len() != l.cols() {
            return Err(Error::DimensionMismatch {
                expected: l.cols(),
                got: u.len(),
            });
        }
        for (index, value) in r.iter().chain(&u).chain(std::iter::once(&rho)).enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    index,
                    value: *value,
                });
            }
        }
        Ok(AffineMap { l, r, u, rho })
    }

    pub fn input_dim(&self) -> usize {
        self.l.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.l.rows()
    }

    /// `(⟨x, u⟩ − ρ, Lx − r)`.
    pub fn apply(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let t = dot(x, &self.u) - self.rho;
        let w = self
            .l
            .apply(x)
            .iter()
            .zip(&self.r)
            .map(|(a, b)| a - b)
            .collect();
        (t, w)
    }
}

/// `x ↦ φ̃(⟨x, u⟩ − ρ, Lx − r)`.
#[derive(Debug, Clone)]
pub struct AffinePerspective {
    perspective: Perspective,
    map: AffineMap,
}

impl AffinePerspective {
    pub fn value(&self, x: &[f64]) -> Result<ExtReal> {
        if x.len() != self.map.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.map.input_dim(),
                got: x.len(),
            });
        }
        let (t, w) = self.map.apply(x);
        self.perspective.value(t, &w)
    }

    pub fn dim(&self) -> usize {
        self.map.input_dim()
    }
}

/// Builds `φ̃ ∘ A`. The witness must satisfy `⟨z,u⟩ ≥ ρ` and
/// `Lz − r ∈ (⟨z,u⟩ − ρ) dom φ`; on the boundary `⟨z,u⟩ = ρ` this means
/// `Lz = r` exactly.
pub fn affine_perspective(
    phi: &ConvexFunction,
    map: &AffineMap,
    witness: &[f64],
) -> Result<AffinePerspective> {
    phi.check_dim(map.output_dim())?;
    if witness.len() != map.input_dim() {
        return Err(Error::BadWitness(format!(
            "witness has dimension {}, expected {}",
            witness.len(),
            map.input_dim()
        )));
    }
    let (t, w) = map.apply(witness);
    if t > 0.0 {
        let scaled: Vec<f64> = w.iter().map(|v| v / t).collect();
        if !phi.value(&scaled).is_finite() {
            return Err(Error::BadWitness(format!(
                "(Lz - r)/t is outside dom {} at t = {t}",
                phi.name()
            )));
        }
    } else if t == 0.0 {
        if w.iter().any(|v| *v != 0.0) {
            return Err(Error::BadWitness("<z,u> = rho requires Lz = r".into()));
        }
    } else {
        return Err(Error::BadWitness(format!("<z,u> - rho = {t} is negative")));
    }
    Ok(AffinePerspective {
        perspective: Perspective::new(phi.clone()),
        map: map.clone(),
    })
}

fn check_weights(weights: &[f64]) -> Result<()> {
    match weights.iter().find(|w| **w <= 0.0 || !w.is_finite()) {
        Some(w) => Err(Error::BadParam {
            name: "norm_weights",
            value: *w,
            reason: "weights must be strictly positive and finite",
        }),
        None => Ok(()),
    }
}

/// `|||y|||^q` for the weighted Euclidean norm `|||y||| = ‖diag(w) y‖`, `q ≥ 1`.
pub fn make_weighted_norm_power(weights: &[f64], q: f64) -> Result<ConvexFunction> {
    if weights.is_empty() {
        return Err(Error::EmptyVector);
    }
    check_weights(weights)?;
    check_p(q)?;
    let n = weights.len();
    let w = weights.to_vec();
    let norm = move |y: &[f64]| -> f64 {
        let v: Vec<f64> = y.iter().zip(&w).map(|(a, b)| a * b).collect();
        euclidean_norm(&v)
    };
    let w = weights.to_vec();
    let dual_norm = move |u: &[f64]| -> f64 {
        let v: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a / b).collect();
        euclidean_norm(&v)
    };
    let nv = norm.clone();
    let f = ConvexFunction::new(
        format!("weighted_norm_pow(q={q})"),
        n,
        &vec![0.0; n],
        move |y| pow_abs(nv(y), q).into(),
    )?;
    let (nv, w) = (norm.clone(), weights.to_vec());
    let f = f.with_subgradient(move |y| {
        let r = nv(y);
        if r == 0.0 {
            return if q > 1.0 {
                Some(SubgradientSet::point(vec![0.0; y.len()]))
            } else {
                None
            };
        }
        let c = q * pow_abs(r, q - 2.0);
        Some(SubgradientSet::point(
            y.iter().zip(&w).map(|(a, b)| c * b * b * a).collect(),
        ))
    });
    let nv = norm;
    let f = if q > 1.0 {
        f.with_recession(indicator_zero).with_conjugate(move |u| {
            let s = dual_norm(u);
            ((q - 1.0) * pow_abs(s / q, q / (q - 1.0))).into()
        })
    } else {
        f.with_recession(move |y| nv(y).into())
            .with_conjugate(move |u| {
                if dual_norm(u) <= 1.0 + crate::catalog::BALL_SLACK {
                    ExtReal::ZERO
                } else {
                    ExtReal::PosInf
                }
            })
    };
    f.with_flags(Flags {
        supercoercive: q > 1.0,
        positively_homogeneous: q == 1.0,
        even: true,
        full_domain: true,
        nonneg_and_zero_at_zero: true,
    })
}

/// The generalized TREX objective
///
/// ```text
/// h(x) = |||Lx − r|||^{qs} / (⟨x,u⟩ − ρ)^{(q−1)s}   if ⟨x,u⟩ > ρ
///      = 0                                         if Lx = r and ⟨x,u⟩ = ρ
///      = +inf                                      otherwise
/// ```
///
/// with `|||·|||` the weighted Euclidean norm (unit weights by default). It is
/// evaluated as `(t |||(Lx − r)/t|||^q)^s`, the `s`-th power of the affine
/// perspective of `|||·|||^q`.
pub fn trex(
    l: &Matrix,
    r: &[f64],
    u: &[f64],
    rho: f64,
    q: f64,
    s: f64,
    norm_weights: Option<&[f64]>,
) -> Result<ConvexFunction> {
    if q <= 1.0 || !q.is_finite() {
        return Err(Error::BadParam {
            name: "q",
            value: q,
            reason: "must satisfy 1 < q < inf",
        });
    }
    if s < 1.0 || !s.is_finite() {
        return Err(Error::BadParam {
            name: "s",
            value: s,
            reason: "must satisfy 1 <= s < inf",
        });
    }
    let map = AffineMap::new(l.clone(), r.to_vec(), u.to_vec(), rho)?;
    let weights = match norm_weights {
        Some(w) => {
            if w.len() != l.rows() {
                return Err(Error::DimensionMismatch {
                    expected: l.rows(),
                    got: w.len(),
                });
            }
            check_weights(w)?;
            w.to_vec()
        }
        None => vec![1.0; l.rows()],
    };
    let uu = dot(u, u);
    let witness = if uu > 0.0 {
        let c = rho / uu + 1.0;
        u.iter().map(|v| c * v).collect::<Vec<f64>>()
    } else if rho < 0.0 {
        vec![0.0; u.len()]
    } else {
        return Err(Error::BadParam {
            name: "u",
            value: 0.0,
            reason: "u = 0 with rho >= 0 leaves no point where <x,u> > rho",
        });
    };
    ConvexFunction::new(
        format!("trex(q={q},s={s})"),
        map.input_dim(),
        &witness,
        move |x| {
            let (t, w) = map.apply(x);
            if t > 0.0 {
                let scaled: Vec<f64> = w.iter().zip(&weights).map(|(a, b)| b * a / t).collect();
                let base = t * pow_abs(euclidean_norm(&scaled), q);
                ExtReal::from_f64(if s == 1.0 { base } else { base.powf(s) })
            } else if t == 0.0 && w.iter().all(|v| *v == 0.0) {
                ExtReal::ZERO
            } else {
                ExtReal::PosInf
            }
        },
    )
}

/// A probability vector: nonnegative finite entries summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityWeights(Vec<f64>);

impl ProbabilityWeights {
    /// Accepts a sum within `1e-12 · n` of 1.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::BadWeights("no weights".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| **w < 0.0 || !w.is_finite())
        {
            return Err(Error::BadWeights(format!("weight {i} is {w}")));
        }
        let mut sum = CompensatedSum::default();
        weights.iter().for_each(|w| sum.add(*w));
        let total = sum.value();
        if (total - 1.0).abs() > 1e-12 * weights.len() as f64 {
            return Err(Error::BadWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(ProbabilityWeights(weights))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        ProbabilityWeights::new(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `E[X] φ(X / E[X])` for a discrete random variable with outcomes `x` and
/// probabilities `weights`: with `m = Σ wᵢ xᵢ` this is `Σ wᵢ φ̃(m, xᵢ)`, i.e.
/// `m Σ wᵢ φ(xᵢ/m)` if `m > 0`, `Σ wᵢ (rec φ)(xᵢ)` if `m = 0` and `+inf` if
/// `m < 0`. Outcomes with zero probability do not contribute.
pub fn expectation_perspective(
    weights: &ProbabilityWeights,
    phi: &ConvexFunction,
    x: &[f64],
) -> Result<ExtReal> {
    phi.check_dim(1)?;
    let w = weights.as_slice();
    if w.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            got: x.len(),
        });
    }
    if let Some((index, value)) = x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite {
            index,
            value: *value,
        });
    }
    let mut mean = CompensatedSum::default();
    w.iter().zip(x).for_each(|(a, b)| mean.add(a * b));
    let m = mean.value();
    if m < 0.0 {
        return Ok(ExtReal::PosInf);
    }
    let p = Perspective::new(phi.clone());
    let mut terms = Vec::with_capacity(x.len());
    for (wi, xi) in w.iter().zip(x) {
        if *wi > 0.0 {
            terms.push(ext_scale(*wi, p.value(m, &[*xi])?)?);
        }
    }
    ext_sum(terms)
}

/// A compact interval `[lo, hi] ⊂ [0, +inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalK {
    lo: f64,
    hi: f64,
}

impl IntervalK {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo < 0.0 || !lo.is_finite() {
            return Err(Error::BadParam {
                name: "lo",
                value: lo,
                reason: "must be finite and nonnegative",
            });
        }
        if hi < lo || !hi.is_finite() {
            return Err(Error::BadParam {
                name: "hi",
                value: hi,
                reason: "must be finite and at least lo",
            });
        }
        Ok(IntervalK { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Minimizer and minimal value of `η ↦ φ̃(η, y)` over `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalMinimum {
    pub eta: f64,
    pub value: f64,
}

/// Number of equal sub-intervals of `K` probed for a finite value before the
/// ternary search starts.
const MARGINAL_PROBES: usize = 64;

/// `inf_{η ∈ K} φ̃(η, y)` by ternary search on the convex function
/// `η ↦ φ̃(η, y)`, down to a bracket of width `1e-10 (1 + hi)`. When `lo = 0`
/// the recession value `φ̃(0, y)` takes part as an ordinary candidate.
pub fn marginal(p: &Perspective, k: &IntervalK, y: &[f64]) -> Result<MarginalMinimum> {
    let f = |eta: f64| p.value(eta, y);
    let mut best = MarginalMinimum {
        eta: f64::NAN,
        value: f64::INFINITY,
    };
    let mut record = |eta: f64, v: ExtReal| {
        if let ExtReal::Finite(v) = v {
            if v < best.value {
                best = MarginalMinimum { eta, value: v };
            }
        }
    };

    let (lo, hi) = (k.lo, k.hi);
    let probes: Vec<f64> = (0..=MARGINAL_PROBES)
        .map(|i| {
            if i == MARGINAL_PROBES {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / MARGINAL_PROBES as f64)
            }
        })
        .collect();
    let mut values = Vec::with_capacity(probes.len());
    for &eta in &probes {
        let v = f(eta)?;
        record(eta, v);
        values.push(v);
    }
    let finite: Vec<usize> = (0..probes.len())
        .filter(|&i| values[i].is_finite())
        .collect();
    let (first, last) = match (finite.first(), finite.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::AllInfinite),
    };
    let width = 1e-10 * (1.0 + hi);

    // the finite set of a convex function is an interval: locate its ends
    let mut a = probes[first];
    if first > 0 {
        let mut out = probes[first - 1];
        while a - out > width {
            let mid = 0.5 * (a + out);
            let v = f(mid)?;
            record(mid, v);
            if v.is_finite() {
                a = mid;
            } else {
                out = mid;
            }
        }
    }
    let mut b = probes[last];
    if last + 1 < probes.len() {
        let mut out = probes[last + 1];
        while out - b > width {
            let mid = 0.5 * (b + out);
            let v = f(mid)?;
            record(mid, v);
            if v.is_finite() {
                b = mid;
            } else {
                out = mid;
            }
        }
    }

    while b - a > width {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        let (v1, v2) = (f(m1)?, f(m2)?);
        record(m1, v1);
        record(m2, v2);
        if v1.to_f64() <= v2.to_f64() {
            b = m2;
        } else {
            a = m1;
        }
    }
    let mid = 0.5 * (a + b);
    record(mid, f(mid)?);
    Ok(best)
}

/// The closed ball `B(0; radius)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    radius: f64,
}

impl Ball {
    pub fn new(radius: f64) -> Result<Self> {
        check_positive("radius", radius)?;
        Ok(Ball { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        euclidean_norm(v) <= self.radius
    }

    /// Metric projection onto the ball.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let n = euclidean_norm(v);
        if n <= self.radius {
            v.to_vec()
        } else {
            v.iter().map(|x| x * (self.radius / n)).collect()
        }
    }

    /// Support function `σ_B(y) = radius ‖y‖`.
    pub fn support(&self, y: &[f64]) -> f64 {
        self.radius * euclidean_norm(y)
    }
}

/// Perspective of `ψ + ι_C` for a centered ball `C`:
/// `η ψ(y/η)` if `η > 0` and `y/η ∈ C`, `(rec ψ)(0) = 0` at `(0, 0)` and
/// `+inf` otherwise (the recession cone of a ball is `{0}`).
pub fn constrained_perspective(
    psi: &ConvexFunction,
    ball: &Ball,
    eta: f64,
    y: &[f64],
) -> Result<ExtReal> {
    psi.check_dim(y.len())?;
    if eta > 0.0 {
        let w: Vec<f64> = y.iter().map(|v| v / eta).collect();
        if !ball.contains(&w) {
            return Ok(ExtReal::PosInf);
        }
        ext_scale(eta, psi.value(&w))
    } else if eta == 0.0 {
        Ok(indicator_zero(y))
    } else if eta < 0.0 {
        Ok(ExtReal::PosInf)
    } else {
        Err(Error::NonFinite {
            index: 0,
            value: eta,
        })
    }
}

/// Perspective of the generalized Huber function
/// `φ(y) = ⟨y, P_C y⟩ − ‖P_C y‖²/2` for a centered ball `C = B(0; ρ)`:
/// `⟨y, P_C(y/η)⟩ − η ‖P_C(y/η)‖²/2` if `η > 0`, `σ_C(y) = ρ‖y‖` if `η = 0`,
/// `+inf` if `η < 0`.
pub fn generalized_huber_perspective(ball: &Ball, eta: f64, y: &[f64]) -> ExtReal {
    if eta > 0.0 {
        let w: Vec<f64> = y.iter().map(|v| v / eta).collect();
        let p = ball.project(&w);
        ExtReal::from_f64(dot(y, &p) - eta * dot(&p, &p) / 2.0)
    } else if eta == 0.0 {
        ExtReal::from_f64(ball.support(y))
    } else {
        ExtReal::PosInf
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn val(e: ExtReal) -> f64 {
        e.to_f64()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    fn zero_fn(n: usize) -> ConvexFunction {
        ConvexFunction::new("zero", n, &vec![0.0; n], |_| ExtReal::ZERO)
            .unwrap()
            .with_recession(|_| ExtReal::ZERO)
    }

    #[test]
    fn scale_add_examples() {
        let sq = make_norm_power(1, 2.0, 1.0).unwrap();
        let nrm = make_norm(1).unwrap();
        let f = scale_add(1.0, &sq, &nrm, &[0.0]).unwrap();
        assert_eq!(f.value(&[2.0]), ExtReal::Finite(6.0));
        let g = scale_add(2.0, &sq, &zero_fn(1), &[0.0]).unwrap();
        assert_eq!(
            Perspective::new(g).value(2.0, &[4.0]).unwrap(),
            ExtReal::Finite(16.0)
        );
        assert_eq!(
            scale_add(0.0, &sq, &nrm, &[0.0]).unwrap_err(),
            Error::BadScale(0.0)
        );
        let lb = make_log_barrier(2.0).unwrap();
        assert_eq!(
            scale_add(1.0, &sq, &lb, &[3.0]).unwrap_err(),
            Error::EmptyIntersection
        );
    }

    #[test]
    fn scale_add_subgradients_and_flags() {
        let sq = make_norm_power(2, 2.0, 1.0).unwrap();
        let nrm = make_norm(2).unwrap();
        let f = scale_add(0.5, &sq, &nrm, &[0.0, 0.0]).unwrap();
        assert_eq!(
            f.subgradient(&[0.0, 0.0]).flatten().unwrap(),
            SubgradientSet::Ball {
                center: vec![0.0, 0.0],
                radius: 1.0
            }
        );
        assert_eq!(
            f.subgradient(&[3.0, 4.0]).flatten().unwrap(),
            SubgradientSet::point(vec![3.0 + 0.6, 4.0 + 0.8])
        );
        assert!(f.flags().supercoercive);
        assert_eq!(f.recession(&[1.0, 0.0]), Some(ExtReal::PosInf));
    }

    #[test]
    fn precompose_examples() {
        let sq = make_norm_power(2, 2.0, 1.0).unwrap();
        let lin = Matrix::from_rows(&[vec![1.0], vec![0.0]]).unwrap();
        let f = precompose_linear(&sq, &lin, &[0.0]).unwrap();
        assert_eq!(f.value(&[3.0]), ExtReal::Finite(9.0));
        let pf = Perspective::new(f);
        assert_eq!(pf.value(3.0, &[3.0]).unwrap(), ExtReal::Finite(3.0));
        assert_eq!(
            Perspective::new(sq).value(3.0, &lin.apply(&[3.0])).unwrap(),
            ExtReal::Finite(3.0)
        );
        let e = make_entropy().unwrap();
        let zero = Matrix::zeros(1, 3);
        let g = precompose_linear(&e, &zero, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(g.value(&[5.0, -7.0, 1.0]), ExtReal::ZERO);
        let neg = Matrix::from_rows(&[vec![-1.0]]).unwrap();
        assert_eq!(
            precompose_linear(&e, &neg, &[1.0]).unwrap_err(),
            Error::EmptyIntersection
        );
    }

    #[test]
    fn precompose_recession_at_zero_eta() {
        let h = make_huber(2, 1.5).unwrap();
        let lin = Matrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![0.0, -1.0, 3.0]]).unwrap();
        let f = precompose_linear(&h, &lin, &[0.0; 3]).unwrap();
        let x = [0.3, -1.2, 2.0];
        let lhs = Perspective::new(f).value(0.0, &x).unwrap();
        let rhs = Perspective::new(h).value(0.0, &lin.apply(&x)).unwrap();
        assert!(close(val(lhs), val(rhs), 1e-15));
    }

    #[test]
    fn compose_examples() {
        let nrm = make_norm(2).unwrap();
        let fair = make_fair(1.0, 1.0).unwrap();
        let f = compose_monotone(&fair, &nrm).unwrap();
        let v = val(Perspective::new(f).value(1.0, &[1.0, 0.0]).unwrap());
        assert!(close(v, 1.0 - 2f64.ln(), 1e-15));

        let lb = make_log_barrier(2.0).unwrap();
        let g = compose_monotone(&lb, &nrm).unwrap();
        let v = val(Perspective::new(g).value(2.0, &[1.0, 0.0]).unwrap());
        // p η ln η − η ln(η^p − ‖y‖^p) at η = 2, ‖y‖ = 1, p = 2
        let oracle = 2.0 * 2.0 * 2f64.ln() - 2.0 * 3f64.ln();
        assert!(close(v, oracle, 1e-14));
        assert!(close(oracle, 2.0 * 4f64.ln() - 2.0 * 3f64.ln(), 1e-15));
    }

    #[test]
    fn compose_reproduces_vapnik() {
        let eps = 0.7;
        let generator = make_vapnik(1, eps).unwrap();
        let nrm = make_norm(3).unwrap();
        let composed = Perspective::new(compose_monotone(&generator, &nrm).unwrap());
        let vapnik = Perspective::new(make_vapnik(3, eps).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let eta = if rng.gen_bool(0.1) {
                0.0
            } else {
                rng.gen_range(0.0..3.0)
            };
            let y: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let a = val(composed.value(eta, &y).unwrap());
            let b = val(vapnik.value(eta, &y).unwrap());
            assert!(close(a, b, 1e-12), "eta={eta} y={y:?}: {a} vs {b}");
        }
    }

    #[test]
    fn compose_flag_violations() {
        let h = make_huber(1, 1.0).unwrap();
        let fair = make_fair(1.0, 1.0).unwrap();
        assert!(matches!(
            compose_monotone(&fair, &h),
            Err(Error::FlagViolation(_))
        ));
        let neg_log = ConvexFunction::new("neg_log", 1, &[1.0], |t| {
            if t[0] > 0.0 {
                (-t[0].ln()).into()
            } else {
                ExtReal::PosInf
            }
        })
        .unwrap();
        let nrm = make_norm(1).unwrap();
        assert!(matches!(
            compose_monotone(&neg_log, &nrm),
            Err(Error::FlagViolation(_))
        ));
    }

    #[test]
    fn compose_subgradient_chain_rule() {
        let nrm = make_norm(2).unwrap();
        let sq = make_norm_power(1, 2.0, 1.0).unwrap();
        let f = compose_monotone(&sq, &nrm).unwrap();
        let set = f.subgradient(&[3.0, 4.0]).flatten().unwrap();
        assert!(set.contains(&[6.0, 8.0], 1e-14));
    }

    #[test]
    fn direct_sum_examples() {
        let sq = make_norm_power(1, 2.0, 1.0).unwrap();
        let f = direct_sum(&[sq.clone(), sq.clone()]).unwrap();
        let p = Perspective::new(f.clone());
        assert_eq!(p.value(2.0, &[4.0, 2.0]).unwrap(), ExtReal::Finite(10.0));
        assert_eq!(p.value(0.0, &[0.0, 0.0]).unwrap(), ExtReal::ZERO);
        assert_eq!(p.value(0.0, &[1.0, 0.0]).unwrap(), ExtReal::PosInf);
        assert!(f.flags().supercoercive);
        assert_eq!(direct_sum(&[]).unwrap_err(), Error::EmptyVector);
        assert_eq!(f.conjugate(&[2.0, 4.0]), Some(ExtReal::Finite(5.0)));
        assert_eq!(
            f.subgradient(&[1.0, -1.0]).flatten().unwrap(),
            SubgradientSet::point(vec![2.0, -2.0])
        );
    }

    #[test]
    fn direct_sum_mixed_blocks() {
        let parts = [
            make_huber(2, 1.0).unwrap(),
            make_entropy().unwrap(),
            make_vapnik(1, 0.5).unwrap(),
        ];
        let f = Perspective::new(direct_sum(&parts).unwrap());
        let ps: Vec<Perspective> = parts.iter().cloned().map(Perspective::new).collect();
        let y = [1.5, -0.5, 2.0, -3.0];
        for eta in [0.0, 0.7, 2.0, -1.0] {
            let lhs = f.value(eta, &y).unwrap();
            let rhs = ext_sum([
                ps[0].value(eta, &y[0..2]).unwrap(),
                ps[1].value(eta, &y[2..3]).unwrap(),
                ps[2].value(eta, &y[3..4]).unwrap(),
            ])
            .unwrap();
            match (lhs, rhs) {
                (ExtReal::Finite(a), ExtReal::Finite(b)) => assert!(close(a, b, 1e-14)),
                (a, b) => assert_eq!(a, b),
            }
        }
    }

    fn first_coord_map() -> AffineMap {
        AffineMap::new(
            Matrix::from_rows(&[vec![1.0, 0.0]]).unwrap(),
            vec![0.0],
            vec![0.0, 1.0],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn affine_perspective_examples() {
        let sq = make_norm_power(1, 2.0, 1.0).unwrap();
        let f = affine_perspective(&sq, &first_coord_map(), &[0.0, 1.0]).unwrap();
        assert_eq!(f.value(&[2.0, 1.0]).unwrap(), ExtReal::Finite(4.0));
        assert_eq!(f.value(&[2.0, -1.0]).unwrap(), ExtReal::PosInf);
        assert_eq!(f.value(&[0.0, 0.0]).unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn affine_perspective_witness_rules() {
        let sq = make_norm_power(1, 2.0, 1.0).unwrap();
        let map = first_coord_map();
        assert!(affine_perspective(&sq, &map, &[0.0, 0.0]).is_ok());
        assert!(matches!(
            affine_perspective(&sq, &map, &[1.0, 0.0]),
            Err(Error::BadWitness(_))
        ));
        assert!(matches!(
            affine_perspective(&sq, &map, &[0.0, -1.0]),
            Err(Error::BadWitness(_))
        ));
        let lb = make_log_barrier(2.0).unwrap();
        assert!(matches!(
            affine_perspective(&lb, &map, &[2.0, 1.0]),
            Err(Error::BadWitness(_))
        ));
        assert!(affine_perspective(&lb, &map, &[0.5, 1.0]).is_ok());
    }

    #[test]
    fn trex_examples() {
        let l = Matrix::from_rows(&[vec![1.0, 0.0]]).unwrap();
        let h1 = trex(&l, &[0.0], &[0.0, 1.0], 0.0, 2.0, 1.0, None).unwrap();
        assert_eq!(h1.value(&[2.0, 1.0]), ExtReal::Finite(4.0));
        assert_eq!(h1.value(&[0.0, 0.0]), ExtReal::ZERO);
        assert_eq!(h1.value(&[1.0, 0.0]), ExtReal::PosInf);
        let h2 = trex(&l, &[0.0], &[0.0, 1.0], 0.0, 2.0, 2.0, None).unwrap();
        assert_eq!(h2.value(&[2.0, 1.0]), ExtReal::Finite(16.0));
        assert!(matches!(
            trex(&l, &[0.0], &[0.0, 1.0], 0.0, 1.0, 1.0, None),
            Err(Error::BadParam { name: "q", .. })
        ));
        assert!(matches!(
            trex(&l, &[0.0], &[0.0, 1.0], 0.0, 2.0, 0.5, None),
            Err(Error::BadParam { name: "s", .. })
        ));
        assert!(matches!(
            trex(&l, &[0.0], &[0.0, 1.0], 0.0, 2.0, 1.0, Some(&[-1.0])),
            Err(Error::BadParam { .. })
        ));
    }

    #[test]
    fn trex_matches_affine_perspective_for_s_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let l = Matrix::from_rows(&[vec![1.0, -2.0, 0.5], vec![0.0, 1.0, 1.0]]).unwrap();
        let (r, u, rho) = (vec![0.3, -0.1], vec![1.0, 0.5, -0.25], 0.2);
        let weights = [0.5, 2.0];
        for q in [1.5, 2.0, 3.0] {
            let h = trex(&l, &r, &u, rho, q, 1.0, Some(&weights)).unwrap();
            let base = make_weighted_norm_power(&weights, q).unwrap();
            let map = AffineMap::new(l.clone(), r.clone(), u.clone(), rho).unwrap();
            let f = affine_perspective(&base, &map, h.witness()).unwrap();
            for _ in 0..200 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let (a, b) = (h.value(&x), f.value(&x).unwrap());
                match (a, b) {
                    (ExtReal::Finite(a), ExtReal::Finite(b)) => {
                        assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()))
                    }
                    (a, b) => assert_eq!(a, b),
                }
            }
        }
    }

    #[test]
    fn weighted_norm_power_conjugate_is_consistent() {
        // Fenchel-Young equality at a gradient: f(y) + f*(∇f(y)) = <y, ∇f(y)>
        let f = make_weighted_norm_power(&[0.5, 2.0, 1.0], 3.0).unwrap();
        let y = [1.0, -0.4, 2.0];
        let g = match f.subgradient(&y).flatten().unwrap() {
            SubgradientSet::Hull { generators } => generators[0].clone(),
            other => panic!("{other:?}"),
        };
        let lhs = val(f.value(&y)) + val(f.conjugate(&g).unwrap());
        assert!(close(lhs, dot(&y, &g), 1e-13));
    }

    #[test]
    fn expectation_examples() {
        let w = ProbabilityWeights::new(vec![0.5, 0.5]).unwrap();
        let sq = make_norm_power(1, 2.0, 1.0).unwrap();
        assert_eq!(
            expectation_perspective(&w, &sq, &[2.0, 0.0]).unwrap(),
            ExtReal::Finite(2.0)
        );
        let e = make_entropy().unwrap();
        assert_eq!(
            expectation_perspective(&w, &e, &[1.0, 1.0]).unwrap(),
            ExtReal::ZERO
        );
        assert_eq!(
            expectation_perspective(&w, &sq, &[1.0, -1.0]).unwrap(),
            ExtReal::PosInf
        );
        assert_eq!(
            expectation_perspective(&w, &sq, &[-1.0, -1.0]).unwrap(),
            ExtReal::PosInf
        );
        let nrm = make_norm(1).unwrap();
        assert_eq!(
            expectation_perspective(&w, &nrm, &[1.0, -1.0]).unwrap(),
            ExtReal::Finite(1.0)
        );
    }

    #[test]
    fn expectation_skips_null_outcomes() {
        let w = ProbabilityWeights::new(vec![1.0, 0.0]).unwrap();
        let e = make_entropy().unwrap();
        // the null outcome would be outside dom φ after scaling
        assert_eq!(
            expectation_perspective(&w, &e, &[2.0, -5.0]).unwrap(),
            ExtReal::ZERO
        );
    }

    #[test]
    fn bad_weights() {
        assert!(matches!(
            ProbabilityWeights::new(vec![0.5, 0.6]),
            Err(Error::BadWeights(_))
        ));
        assert!(matches!(
            ProbabilityWeights::new(vec![1.5, -0.5]),
            Err(Error::BadWeights(_))
        ));
        assert!(matches!(
            ProbabilityWeights::new(vec![]),
            Err(Error::BadWeights(_))
        ));
        assert!(ProbabilityWeights::uniform(3).is_ok());
    }

    #[test]
    fn marginal_examples() {
        let sq = Perspective::new(make_norm_power(1, 2.0, 1.0).unwrap());
        let m = marginal(&sq, &IntervalK::new(1.0, 2.0).unwrap(), &[4.0]).unwrap();
        assert!((m.value - 8.0).abs() < 1e-9 && (m.eta - 2.0).abs() < 1e-9);
        let m = marginal(&sq, &IntervalK::new(0.0, 1.0).unwrap(), &[0.0]).unwrap();
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn marginal_huber_matches_grid() {
        let h = Perspective::new(make_huber(1, 1.0).unwrap());
        let k = IntervalK::new(0.0, 10.0).unwrap();
        for y in [3.0, -0.5, 12.0, 0.0] {
            let m = marginal(&h, &k, &[y]).unwrap();
            let mut grid = f64::INFINITY;
            for i in 0..=100_000 {
                let eta = i as f64 * 1e-4;
                grid = grid.min(val(h.value(eta, &[y]).unwrap()));
            }
            assert!(
                (m.value - grid).abs() <= 1e-6,
                "y={y}: {} vs {grid}",
                m.value
            );
        }
    }

    #[test]
    fn marginal_uses_recession_at_zero() {
        // η ↦ φ̃(η, y) is increasing for the entropy when y > 0 is small
        let e = Perspective::new(make_entropy().unwrap());
        let m = marginal(&e, &IntervalK::new(0.0, 1.0).unwrap(), &[0.0]).unwrap();
        assert_eq!((m.eta, m.value), (0.0, 0.0));
        let v = Perspective::new(make_vapnik(1, 1.0).unwrap());
        let m = marginal(&v, &IntervalK::new(0.0, 4.0).unwrap(), &[3.0]).unwrap();
        assert!((m.value - 0.0).abs() < 1e-9, "{m:?}");
    }

    #[test]
    fn marginal_with_narrow_domain() {
        // finite only for η > |y| = 0.9 inside K = [0, 1]
        let lb = Perspective::new(make_log_barrier(2.0).unwrap());
        let m = marginal(&lb, &IntervalK::new(0.0, 1.0).unwrap(), &[0.9]).unwrap();
        let oracle = -(1.0f64 - 0.81).ln();
        assert!((m.value - oracle).abs() < 1e-9, "{m:?}");
        assert_eq!(
            marginal(&lb, &IntervalK::new(0.0, 1.0).unwrap(), &[5.0]).unwrap_err(),
            Error::AllInfinite
        );
    }

    #[test]
    fn interval_validation() {
        assert!(IntervalK::new(-1.0, 1.0).is_err());
        assert!(IntervalK::new(2.0, 1.0).is_err());
        assert!(IntervalK::new(0.0, f64::INFINITY).is_err());
        assert!(IntervalK::new(1.0, 1.0).is_ok());
    }

    #[test]
    fn constrained_examples() {
        let sq = make_norm_power(1, 2.0, 1.0).unwrap();
        let c = Ball::new(1.0).unwrap();
        assert_eq!(
            constrained_perspective(&sq, &c, 2.0, &[1.0]).unwrap(),
            ExtReal::Finite(0.5)
        );
        assert_eq!(
            constrained_perspective(&sq, &c, 1.0, &[2.0]).unwrap(),
            ExtReal::PosInf
        );
        assert_eq!(
            constrained_perspective(&sq, &c, 0.0, &[0.0]).unwrap(),
            ExtReal::ZERO
        );
        assert_eq!(
            constrained_perspective(&sq, &c, 0.0, &[0.1]).unwrap(),
            ExtReal::PosInf
        );
        assert_eq!(
            constrained_perspective(&sq, &c, -1.0, &[0.0]).unwrap(),
            ExtReal::PosInf
        );
        assert!(Ball::new(0.0).is_err());
    }

    #[test]
    fn generalized_huber_examples() {
        let c = Ball::new(1.0).unwrap();
        assert_eq!(
            generalized_huber_perspective(&c, 2.0, &[3.0]),
            ExtReal::Finite(2.0)
        );
        assert_eq!(
            generalized_huber_perspective(&c, 2.0, &[1.0]),
            ExtReal::Finite(0.25)
        );
        assert_eq!(
            generalized_huber_perspective(&c, 0.0, &[4.0]),
            ExtReal::Finite(4.0)
        );
        assert_eq!(
            generalized_huber_perspective(&c, -1.0, &[4.0]),
            ExtReal::PosInf
        );
    }

    #[test]
    fn generalized_huber_matches_catalog_huber() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let rho = rng.gen_range(0.1..3.0);
            let c = Ball::new(rho).unwrap();
            let h = Perspective::new(make_huber(2, rho).unwrap());
            let eta = match rng.gen_range(0..10) {
                0 => 0.0,
                1 => -rng.gen_range(0.0..1.0),
                _ => rng.gen_range(0.0..5.0),
            };
            let y = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            match (
                generalized_huber_perspective(&c, eta, &y),
                h.value(eta, &y).unwrap(),
            ) {
                (ExtReal::Finite(a), ExtReal::Finite(b)) => {
                    assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "{a} vs {b}")
                }
                (a, b) => assert_eq!(a, b),
            }
        }
    }
}
