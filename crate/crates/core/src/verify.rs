//! Randomized property checks for perspectives and the calculus, plus the
//! minimizing-sequence and lower-semicontinuity demonstrations.
//!
//! Every check draws from a `ChaCha8` generator seeded by the caller and
//! returns a [`CheckReport`] listing each violated relation.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::{compose_monotone, direct_sum, precompose_linear, scale_add};
use crate::catalog::{
    make_fair, make_huber, make_norm, make_norm_power, representative_entries, CatalogEntry,
};
use crate::error::{Error, Result};
use crate::extreal::{ext_add, ext_scale, ExtReal};
use crate::function::ConvexFunction;
use crate::linalg::{dot, sub, Matrix};
use crate::perspective::{Defect, Perspective, PerspectiveSubdifferential, SubgradientPair};

pub const DEFAULT_SEED: u64 = 0x5EED_2015;
pub const DEFAULT_TRIALS: usize = 1000;
/// Rejection-sampling budget for one finite-valued point.
pub const SAMPLER_ATTEMPTS: usize = 100_000;
pub const CHORD_TOL: f64 = 1e-9;
pub const HOMOGENEITY_TOL: f64 = 1e-12;
pub const IDENTITY_TOL: f64 = 1e-9;
pub const FENCHEL_YOUNG_TOL: f64 = 1e-9;
pub const LSC_TOL: f64 = 1e-9;
pub const MINSEQ_TOL: f64 = 1e-12;
/// Values along a segment above this bound count as diverging to `+inf`.
pub const SEGMENT_DIVERGENCE: f64 = 1e6;

/// One violated relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub input: Vec<f64>,
    pub relation: String,
    pub observed: String,
}

/// Outcome of a check; `passed` holds exactly when `failures` is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<Failure>,
    pub passed: bool,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, trials: usize, seed: u64, failures: Vec<Failure>) -> Self {
        let passed = failures.is_empty();
        CheckReport {
            name: name.into(),
            trials,
            seed,
            failures,
            passed,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(
                f,
                "PASS {} ({} trials, seed {})",
                self.name, self.trials, self.seed
            )
        } else {
            write!(
                f,
                "FAIL {} ({} violations in {} trials, seed {})",
                self.name,
                self.failures.len(),
                self.trials,
                self.seed
            )?;
            if let Some(first) = self.failures.first() {
                write!(
                    f,
                    "; first: {} at {:?}, observed {}",
                    first.relation, first.input, first.observed
                )?;
            }
            Ok(())
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|a − b| / max(|a|, |b|)`, and 0 when both vanish.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `|a − b| / max(|a|, |b|, 1)`: relative above 1, absolute below.
pub fn mixed_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Extended reals agree when both are the same infinity or both are finite
/// with `gap(a, b) <= tol`.
fn ext_agree(a: ExtReal, b: ExtReal, tol: f64, gap: fn(f64, f64) -> f64) -> bool {
    match (a, b) {
        (ExtReal::Finite(x), ExtReal::Finite(y)) => gap(x, y) <= tol,
        (x, y) => x == y,
    }
}

/// Draws from `sampler` until `f` is finite.
fn sample_finite<F, S>(rng: &mut ChaCha8Rng, sampler: &mut S, f: &F) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> Result<ExtReal>,
    S: FnMut(&mut ChaCha8Rng) -> Vec<f64>,
{
    for _ in 0..SAMPLER_ATTEMPTS {
        let z = sampler(rng);
        if let ExtReal::Finite(v) = f(&z)? {
            return Ok((z, v));
        }
    }
    Err(Error::SamplerExhausted {
        attempts: SAMPLER_ATTEMPTS,
    })
}

fn draw_eta(rng: &mut ChaCha8Rng) -> f64 {
    match rng.gen_range(0..10) {
        0 => 0.0,
        1 => -rng.gen_range(0.05..2.0),
        _ => rng.gen_range(0.05..5.0),
    }
}

fn draw_y(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<f64> {
    if rng.gen_range(0..10) == 0 {
        vec![0.0; dim]
    } else {
        (0..dim).map(|_| rng.gen_range(-radius..radius)).collect()
    }
}

/// Points `(η, y) ∈ R × R^dim`: η is 0 or negative with probability 1/10
/// each and otherwise uniform on `[0.05, 5]`; y is 0 with probability 1/10 and
/// otherwise uniform on `[-5, 5]^dim`.
pub fn perspective_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let mut z = vec![draw_eta(rng)];
    z.extend(draw_y(rng, dim, 5.0));
    z
}

/// Checks `f(θa + (1−θ)b) ≤ θ f(a) + (1−θ) f(b) + tol` on `trials` random
/// pairs of finite-valued points and `θ` uniform on `(0, 1)`.
pub fn convexity_chord_check<F, S>(
    name: &str,
    f: F,
    mut sampler: S,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport>
where
    F: Fn(&[f64]) -> Result<ExtReal>,
    S: FnMut(&mut ChaCha8Rng) -> Vec<f64>,
{
    let mut rng = rng(seed);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let (a, fa) = sample_finite(&mut rng, &mut sampler, &f)?;
        let (b, fb) = sample_finite(&mut rng, &mut sampler, &f)?;
        let theta: f64 = loop {
            let t: f64 = rng.gen();
            if t > 0.0 {
                break t;
            }
        };
        let mid: Vec<f64> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| theta * x + (1.0 - theta) * y)
            .collect();
        let bound = theta * fa + (1.0 - theta) * fb;
        let fm = f(&mid)?;
        let ok = match fm {
            ExtReal::Finite(v) => v <= bound + tol,
            ExtReal::NegInf => true,
            ExtReal::PosInf => false,
        };
        if !ok {
            let mut input = a.clone();
            input.extend(&b);
            input.push(theta);
            failures.push(Failure {
                input,
                relation: format!("f(θa+(1−θ)b) ≤ θf(a)+(1−θ)f(b)+{tol:e}"),
                observed: format!("{fm} > {bound}"),
            });
        }
    }
    Ok(CheckReport::new(name, trials, seed, failures))
}

/// Chord test of `(η, y) ↦ φ̃(η, y)` on [`perspective_point`] samples.
pub fn perspective_chord_check(
    name: &str,
    p: &Perspective,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let dim = p.dim();
    convexity_chord_check(
        name,
        |z: &[f64]| p.value(z[0], &z[1..]),
        |r: &mut ChaCha8Rng| perspective_point(r, dim),
        trials,
        CHORD_TOL,
        seed,
    )
}

/// Checks `φ̃(λη, λy) = λ φ̃(η, y)` within relative `tol` for λ uniform on
/// `(0, 10]` at finite-valued [`perspective_point`] samples.
pub fn homogeneity_check(
    name: &str,
    p: &Perspective,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng(seed);
    let dim = p.dim();
    let f = |z: &[f64]| p.value(z[0], &z[1..]);
    let mut sampler = |r: &mut ChaCha8Rng| perspective_point(r, dim);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let (z, v) = sample_finite(&mut rng, &mut sampler, &f)?;
        let lambda = 10.0 * (1.0 - rng.gen::<f64>());
        let scaled: Vec<f64> = z.iter().map(|c| lambda * c).collect();
        let lhs = f(&scaled)?;
        let rhs = lambda * v;
        let ok = matches!(lhs, ExtReal::Finite(a) if relative_gap(a, rhs) <= tol);
        if !ok {
            let mut input = z;
            input.push(lambda);
            failures.push(Failure {
                input,
                relation: format!("φ̃(λη,λy) = λφ̃(η,y) within relative {tol:e}"),
                observed: format!("{lhs} vs {rhs}"),
            });
        }
    }
    Ok(CheckReport::new(name, trials, seed, failures))
}

/// Points with `η` uniform on `[0.1, 5]` and `y` as in [`perspective_point`].
fn positive_eta_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let mut z = vec![rng.gen_range(0.1..5.0)];
    z.extend(draw_y(rng, dim, 5.0));
    z
}

fn subgradient_pairs(p: &Perspective, eta: f64, y: &[f64]) -> Result<Vec<SubgradientPair>> {
    match p.subdifferential(eta, y)? {
        PerspectiveSubdifferential::Cone(_) => Ok(vec![]),
        s => Ok(s.pairs()),
    }
}

fn require_oracles(p: &Perspective) -> Result<()> {
    if !p.base().has_subgradient() {
        return Err(Error::MissingOracle("subgradient"));
    }
    if !p.base().has_conjugate() {
        return Err(Error::MissingOracle("conjugate"));
    }
    Ok(())
}

/// For finite-valued `(η, y)` with `η > 0`, every returned subgradient pair
/// `(μ, u)` must satisfy `φ̃(η, y) = ημ + ⟨y, u⟩` and `μ + φ*(u) ≤ tol`.
pub fn fenchel_young_check(
    name: &str,
    p: &Perspective,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    require_oracles(p)?;
    let mut rng = rng(seed);
    let dim = p.dim();
    let f = |z: &[f64]| p.value(z[0], &z[1..]);
    let mut sampler = |r: &mut ChaCha8Rng| positive_eta_point(r, dim);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let (z, v) = sample_finite(&mut rng, &mut sampler, &f)?;
        let (eta, y) = (z[0], &z[1..]);
        for pair in subgradient_pairs(p, eta, y)? {
            let identity = eta * pair.mu + dot(y, &pair.u);
            let gap = p.conjugate_gap(&pair)?;
            let mut input = z.clone();
            input.push(pair.mu);
            input.extend(&pair.u);
            if (identity - v).abs() > tol {
                failures.push(Failure {
                    input: input.clone(),
                    relation: format!("φ̃(η,y) = ημ + ⟨y,u⟩ within {tol:e}"),
                    observed: format!("{v} vs {identity}"),
                });
            }
            if gap > ExtReal::Finite(tol) {
                failures.push(Failure {
                    input,
                    relation: format!("μ + φ*(u) ≤ {tol:e}"),
                    observed: gap.to_string(),
                });
            }
        }
    }
    Ok(CheckReport::new(name, trials, seed, failures))
}

/// For each returned pair `(μ, u)` at a finite-valued `(η, y)` with `η > 0`
/// and `probes` random `(η′, y′)`:
/// `φ̃(η′, y′) ≥ φ̃(η, y) + μ(η′ − η) + ⟨u, y′ − y⟩ − tol`.
pub fn subgradient_inequality_check(
    name: &str,
    p: &Perspective,
    trials: usize,
    probes: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    if !p.base().has_subgradient() {
        return Err(Error::MissingOracle("subgradient"));
    }
    let mut rng = rng(seed);
    let dim = p.dim();
    let f = |z: &[f64]| p.value(z[0], &z[1..]);
    let mut sampler = |r: &mut ChaCha8Rng| positive_eta_point(r, dim);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let (z, v) = sample_finite(&mut rng, &mut sampler, &f)?;
        let pairs = subgradient_pairs(p, z[0], &z[1..])?;
        for _ in 0..probes {
            let w = perspective_point(&mut rng, dim);
            let fw = match f(&w)? {
                ExtReal::Finite(x) => x,
                _ => continue,
            };
            for pair in &pairs {
                let d = sub(&w[1..], &z[1..]);
                let bound = v + pair.mu * (w[0] - z[0]) + dot(&pair.u, &d);
                if fw < bound - tol {
                    let mut input = z.clone();
                    input.extend(&w);
                    failures.push(Failure {
                        input,
                        relation: format!("subgradient inequality within {tol:e}"),
                        observed: format!("{fw} < {bound}"),
                    });
                }
            }
        }
    }
    Ok(CheckReport::new(name, trials, seed, failures))
}

/// One row of the minimizing-sequence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinSeqRow {
    pub n: u64,
    pub gap: f64,
    pub distance: f64,
}

/// Rows `n = 0, ..., count − 1` for `xₙ = ((n+1)^{p+2}, n+1)` and
/// `g = [|·|²]~`: the optimality gap `g(xₙ) − min g = g(xₙ)` and the distance
/// from `xₙ` to `Argmin g = [0, +inf) × {0}`.
pub fn minimizing_sequence_demo(p: f64, count: u64) -> Result<Vec<MinSeqRow>> {
    if p < 1.0 || !p.is_finite() {
        return Err(Error::BadParam {
            name: "p",
            value: p,
            reason: "must satisfy 1 <= p < inf",
        });
    }
    let g = Perspective::new(make_norm_power(1, 2.0, 1.0)?);
    let mut rows = Vec::with_capacity(count as usize);
    for n in 0..count {
        let m = (n + 1) as f64;
        let xi1 = m.powf(p + 2.0);
        let xi2 = m;
        if !xi1.is_finite() || !m.powf(-(p + 1.0)).is_normal() {
            return Err(Error::Overflow(format!(
                "(n+1)^(p+2) leaves the double range at n = {n}, p = {p}"
            )));
        }
        let gap = g.value(xi1, &[xi2])?.finite().ok_or_else(|| {
            Error::Overflow(format!("perspective value is not finite at n = {n}"))
        })?;
        // projection of (ξ₁, ξ₂) onto [0, +inf) × {0} is (max(ξ₁, 0), 0)
        let distance = (xi1.min(0.0)).hypot(xi2);
        rows.push(MinSeqRow { n, gap, distance });
    }
    Ok(rows)
}

/// Compares [`minimizing_sequence_demo`] with `1/(n+1)^p` and `n+1`.
pub fn minimizing_sequence_check(p: f64, count: u64, tol: f64) -> Result<CheckReport> {
    let rows = minimizing_sequence_demo(p, count)?;
    let mut failures = Vec::new();
    for r in &rows {
        let m = (r.n + 1) as f64;
        let gap = 1.0 / m.powf(p);
        if relative_gap(r.gap, gap) > tol || relative_gap(r.distance, m) > tol {
            failures.push(Failure {
                input: vec![r.n as f64, p],
                relation: format!("gap = 1/(n+1)^p and distance = n+1 within relative {tol:e}"),
                observed: format!("gap {} (expected {gap}), distance {}", r.gap, r.distance),
            });
        }
    }
    Ok(CheckReport::new(
        format!("minseq/p={p}"),
        rows.len(),
        0,
        failures,
    ))
}

/// One step of the lower-semicontinuity path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LscStep {
    pub n: u32,
    pub alpha: f64,
    pub eta: f64,
    pub value: f64,
}

/// Path values `φ̃(αₙ^{p/(p−1)}, αₙ e₁)` for `αₙ = 2^{−n}`, `n = 0..=steps`,
/// stopping early once `αₙ^{p/(p−1)}` is no longer a normal double.
pub fn lsc_path(p: &Perspective, exponent: f64, steps: u32) -> Result<Vec<LscStep>> {
    if exponent <= 1.0 || !exponent.is_finite() {
        return Err(Error::BadParam {
            name: "p",
            value: exponent,
            reason: "the path needs 1 < p < inf",
        });
    }
    let mut out = Vec::new();
    for n in 0..=steps {
        let alpha = 2f64.powi(-(n as i32));
        let eta = alpha.powf(exponent / (exponent - 1.0));
        if !eta.is_normal() {
            break;
        }
        let mut y = vec![0.0; p.dim()];
        y[0] = alpha;
        out.push(LscStep {
            n,
            alpha,
            eta,
            value: p.value(eta, &y)?.to_f64(),
        });
    }
    Ok(out)
}

/// For the perspective of `‖·‖^p`, `p > 1`: the path values equal 1 within
/// [`LSC_TOL`], `φ̃(0, 0) = 0`, and along the segments `t ↦ (t, ±e₁)` the
/// value at `t = 0` matches the limit of the values at `t = 2^{−k}` (a limit
/// above [`SEGMENT_DIVERGENCE`] must be matched by `+inf`).
pub fn lsc_path_check(
    name: &str,
    p: &Perspective,
    exponent: f64,
    steps: u32,
) -> Result<CheckReport> {
    let path = lsc_path(p, exponent, steps)?;
    let mut failures = Vec::new();
    for s in &path {
        if (s.value - 1.0).abs() > LSC_TOL {
            failures.push(Failure {
                input: vec![s.eta, s.alpha],
                relation: format!("path value = 1 within {LSC_TOL:e}"),
                observed: s.value.to_string(),
            });
        }
    }
    let origin = p.value(0.0, &vec![0.0; p.dim()])?;
    if origin != ExtReal::ZERO {
        failures.push(Failure {
            input: vec![0.0; p.dim() + 1],
            relation: "φ̃(0, 0) = 0".into(),
            observed: origin.to_string(),
        });
    }
    for sign in [1.0, -1.0] {
        let mut y = vec![0.0; p.dim()];
        y[0] = sign;
        let mut last = ExtReal::ZERO;
        for k in (0..=60).step_by(4) {
            last = p.value(2f64.powi(-k), &y)?;
        }
        let at_zero = p.value(0.0, &y)?;
        let ok = match last {
            ExtReal::Finite(v) if v.abs() > SEGMENT_DIVERGENCE => at_zero.is_pos_inf(),
            ExtReal::Finite(v) => {
                matches!(at_zero, ExtReal::Finite(w) if (w - v).abs() <= 1e-6 * (1.0 + v.abs()))
            }
            other => at_zero == other,
        };
        if !ok {
            let mut input = vec![0.0];
            input.extend(&y);
            failures.push(Failure {
                input,
                relation: "φ̃(0, y) = lim_{t↓0} φ̃(t, y)".into(),
                observed: format!("{at_zero} vs limit estimate {last}"),
            });
        }
    }
    Ok(CheckReport::new(name, path.len() + 3, 0, failures))
}

fn identity_failure(z: &[f64], relation: &str, lhs: ExtReal, rhs: ExtReal) -> Failure {
    Failure {
        input: z.to_vec(),
        relation: relation.to_string(),
        observed: format!("{lhs} vs {rhs}"),
    }
}

/// `[λφ + ψ]~ = λφ̃ + ψ̃` with `ψ = huber(0.7)` and λ uniform on `[0.1, 5]`.
pub fn scale_add_identity_check(
    name: &str,
    phi: &ConvexFunction,
    defect: Option<Defect>,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng(seed);
    let psi = make_huber(phi.dim(), 0.7)?;
    let witness = vec![0.0; phi.dim()];
    let (pp, ps) = (
        Perspective::new(phi.clone()).with_defect(defect),
        Perspective::new(psi.clone()).with_defect(defect),
    );
    let mut failures = Vec::new();
    for _ in 0..trials {
        let lambda = rng.gen_range(0.1..5.0);
        let sum = Perspective::new(scale_add(lambda, phi, &psi, &witness)?).with_defect(defect);
        let z = perspective_point(&mut rng, phi.dim());
        let (eta, y) = (z[0], &z[1..]);
        let lhs = sum.value(eta, y)?;
        let rhs = ext_add(ext_scale(lambda, pp.value(eta, y)?)?, ps.value(eta, y)?)?;
        if !ext_agree(lhs, rhs, IDENTITY_TOL, mixed_gap) {
            let mut input = z.clone();
            input.push(lambda);
            failures.push(identity_failure(&input, "[λφ+ψ]~ = λφ̃ + ψ̃", lhs, rhs));
        }
    }
    Ok(CheckReport::new(name, trials, seed, failures))
}

/// `[φ∘Λ]~(ξ, x) = φ̃(ξ, Λx)` for random `Λ ∈ [−1, 1]^{n×k}`, `k ∈ {1, 2, 3}`.
pub fn precompose_identity_check(
    name: &str,
    phi: &ConvexFunction,
    defect: Option<Defect>,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng(seed);
    let n = phi.dim();
    let pp = Perspective::new(phi.clone()).with_defect(defect);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let k = rng.gen_range(1..=3);
        let data: Vec<f64> = (0..n * k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lin = Matrix::new(n, k, data)?;
        let composed =
            Perspective::new(precompose_linear(phi, &lin, &vec![0.0; k])?).with_defect(defect);
        let eta = draw_eta(&mut rng);
        let x = draw_y(&mut rng, k, 3.0);
        let lhs = composed.value(eta, &x)?;
        let rhs = pp.value(eta, &lin.apply(&x))?;
        if !ext_agree(lhs, rhs, IDENTITY_TOL, mixed_gap) {
            let mut input = vec![eta];
            input.extend(&x);
            failures.push(identity_failure(&input, "[φ∘Λ]~(ξ,x) = φ̃(ξ,Λx)", lhs, rhs));
        }
    }
    Ok(CheckReport::new(name, trials, seed, failures))
}

/// The pair `(ϕ, φ)` used to exercise `[ϕ∘φ]~ = ϕ̃(·, φ(·))` for a catalog
/// function: as the outer function (one-dimensional, even, minimal at 0, so
/// increasing on `[0, +inf)`) composed with `‖·‖` on `R²`, or as the inner
/// function (positively homogeneous with full domain) under `fair(1, 1)`.
/// `None` when the function satisfies neither set of hypotheses.
pub fn compose_pair(phi: &ConvexFunction) -> Result<Option<(ConvexFunction, ConvexFunction)>> {
    let fl = phi.flags();
    if phi.dim() == 1 && fl.even && fl.nonneg_and_zero_at_zero && phi.value(&[0.0]).is_finite() {
        return Ok(Some((phi.clone(), make_norm(2)?)));
    }
    if fl.positively_homogeneous && fl.full_domain {
        return Ok(Some((make_fair(1.0, 1.0)?, phi.clone())));
    }
    Ok(None)
}

/// `[ϕ∘φ]~(η, y) = ϕ̃(η, φ(y))` on random points, all three `η` regimes.
pub fn compose_identity_check(
    name: &str,
    outer: &ConvexFunction,
    inner: &ConvexFunction,
    defect: Option<Defect>,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng(seed);
    let composed = Perspective::new(compose_monotone(outer, inner)?).with_defect(defect);
    let po = Perspective::new(outer.clone()).with_defect(defect);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let z = perspective_point(&mut rng, inner.dim());
        let (eta, y) = (z[0], &z[1..]);
        let lhs = composed.value(eta, y)?;
        let rhs = match inner.value(y) {
            ExtReal::Finite(t) => po.value(eta, &[t])?,
            other => other,
        };
        if !ext_agree(lhs, rhs, IDENTITY_TOL, mixed_gap) {
            failures.push(identity_failure(&z, "[ϕ∘φ]~(η,y) = ϕ̃(η,φ(y))", lhs, rhs));
        }
    }
    Ok(CheckReport::new(name, trials, seed, failures))
}

/// `(φ ⊕ ψ)~(η, (y₁, y₂)) = φ̃(η, y₁) + ψ̃(η, y₂)` with `ψ = huber(0.7)` on R.
pub fn direct_sum_identity_check(
    name: &str,
    phi: &ConvexFunction,
    defect: Option<Defect>,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng(seed);
    let psi = make_huber(1, 0.7)?;
    let sum = Perspective::new(direct_sum(&[phi.clone(), psi.clone()])?).with_defect(defect);
    let (pp, ps) = (
        Perspective::new(phi.clone()).with_defect(defect),
        Perspective::new(psi).with_defect(defect),
    );
    let n = phi.dim();
    let mut failures = Vec::new();
    for _ in 0..trials {
        let z = perspective_point(&mut rng, n + 1);
        let (eta, y) = (z[0], &z[1..]);
        let lhs = sum.value(eta, y)?;
        let rhs = ext_add(pp.value(eta, &y[..n])?, ps.value(eta, &y[n..])?)?;
        if !ext_agree(lhs, rhs, IDENTITY_TOL, mixed_gap) {
            failures.push(identity_failure(
                &z,
                "(φ⊕ψ)~(η,y) = φ̃(η,y₁) + ψ̃(η,y₂)",
                lhs,
                rhs,
            ));
        }
    }
    Ok(CheckReport::new(name, trials, seed, failures))
}

/// Configuration of [`run_all`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub defect: Option<Defect>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            defect: None,
        }
    }
}

fn entry_label(e: &CatalogEntry) -> String {
    let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{}({})/d{}", e.name, params.join(","), e.function.dim())
}

/// Chord, homogeneity and calculus-identity checks for one catalog entry.
pub fn entry_checks(entry: &CatalogEntry, config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let label = entry_label(entry);
    let f = &entry.function;
    let p = Perspective::new(f.clone()).with_defect(config.defect);
    let (t, s) = (config.trials, config.seed);
    let mut out = vec![
        perspective_chord_check(&format!("chord/{label}"), &p, t, s)?,
        homogeneity_check(&format!("homogeneity/{label}"), &p, t, HOMOGENEITY_TOL, s)?,
        scale_add_identity_check(&format!("scale_add/{label}"), f, config.defect, t, s)?,
        precompose_identity_check(&format!("precompose/{label}"), f, config.defect, t, s)?,
        direct_sum_identity_check(&format!("direct_sum/{label}"), f, config.defect, t, s)?,
    ];
    if let Some((outer, inner)) = compose_pair(f)? {
        out.push(compose_identity_check(
            &format!("compose/{label}"),
            &outer,
            &inner,
            config.defect,
            t,
            s,
        )?);
    }
    Ok(out)
}

/// The Fenchel–Young and subgradient-inequality checks on `‖·‖²`, `‖·‖` and
/// `huber(1)` in `R²`.
pub fn subgradient_checks(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let bases = [
        ("norm_pow(p=2)/d2", make_norm_power(2, 2.0, 1.0)?),
        ("norm/d2", make_norm(2)?),
        ("huber(rho=1)/d2", make_huber(2, 1.0)?),
    ];
    let mut out = Vec::new();
    for (label, f) in bases {
        let p = Perspective::new(f).with_defect(config.defect);
        out.push(fenchel_young_check(
            &format!("fenchel_young/{label}"),
            &p,
            config.trials,
            FENCHEL_YOUNG_TOL,
            config.seed,
        )?);
        out.push(subgradient_inequality_check(
            &format!("subgradient_inequality/{label}"),
            &p,
            (config.trials / 10).max(1),
            100,
            FENCHEL_YOUNG_TOL,
            config.seed,
        )?);
    }
    Ok(out)
}

/// Lower-semicontinuity path checks for `‖·‖^p`, `p ∈ {1.5, 2, 3}`, and the
/// minimizing-sequence table for `p ∈ {1, 2, 3}`, `n ≤ 100`.
pub fn pathology_checks(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        let persp = Perspective::new(make_norm_power(1, p, 1.0)?).with_defect(config.defect);
        out.push(lsc_path_check(&format!("lsc/p={p}"), &persp, p, 40)?);
    }
    for p in [1.0, 2.0, 3.0] {
        out.push(minimizing_sequence_check(p, 101, MINSEQ_TOL)?);
    }
    Ok(out)
}

/// Every check of the suite over the representative catalog entries.
pub fn run_all(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for entry in representative_entries() {
        out.extend(entry_checks(&entry, config)?);
    }
    out.extend(subgradient_checks(config)?);
    out.extend(pathology_checks(config)?);
    Ok(out)
}
