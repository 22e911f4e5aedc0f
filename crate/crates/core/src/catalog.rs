//! Closed-form base functions with exact recession functions, conjugates and
//! subgradients.
//!
//! Every constructor validates its parameters and attaches the structural
//! flags consumed by the perspective and calculus modules. Names and parameter
//! keys used by [`build`] are part of the command-line contract.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::function::{ConvexFunction, Flags, SubgradientSet};
use crate::linalg::{dot, euclidean_norm, scaled};

/// Relative slack applied when an indicator of a ball is evaluated at a
/// computed point, e.g. `u = y/||y||` whose norm is `1 ± ulp`.
pub const BALL_SLACK: f64 = 1e-12;

/// Names accepted by [`build`].
pub const NAMES: [&str; 9] = [
    "huber",
    "berhu",
    "vapnik",
    "norm_pow",
    "entropy",
    "power_div",
    "fair",
    "log_barrier",
    "homog_mix",
];

/// A named, parameterized catalog function.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub function: ConvexFunction,
}

pub(crate) fn indicator_zero(y: &[f64]) -> ExtReal {
    if y.iter().all(|x| *x == 0.0) {
        ExtReal::ZERO
    } else {
        ExtReal::PosInf
    }
}

fn in_ball(u: &[f64], radius: f64) -> bool {
    euclidean_norm(u) <= radius * (1.0 + BALL_SLACK)
}

/// `|x|^p` with exact products for the common small integer exponents.
pub(crate) fn pow_abs(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else if p == 3.0 {
        a * a * a
    } else {
        a.powf(p)
    }
}

/// `s - ln(1 + s)` for `s >= 0` without cancellation near zero.
pub(crate) fn x_minus_ln1p(s: f64) -> f64 {
    if s < 0.25 {
        // alternating series sum_{k>=2} (-1)^k s^k / k
        let mut term = s * s;
        let mut sum = 0.0f64;
        let mut k = 2.0;
        let mut sign = 1.0;
        while term / k > f64::EPSILON * 1e-3 * sum.abs().max(f64::MIN_POSITIVE) {
            sum += sign * term / k;
            term *= s;
            k += 1.0;
            sign = -sign;
            if k > 200.0 {
                break;
            }
        }
        sum
    } else {
        s - s.ln_1p()
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p < 1.0 || !p.is_finite() {
        return Err(Error::BadParam {
            name: "p",
            value: p,
            reason: "must satisfy 1 <= p < inf",
        });
    }
    Ok(())
}

pub(crate) fn check_positive(name: &'static str, x: f64) -> Result<()> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::BadParam {
            name,
            value: x,
            reason: "must be strictly positive and finite",
        });
    }
    Ok(())
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    Ok(())
}

const NORMLIKE: Flags = Flags {
    supercoercive: false,
    positively_homogeneous: false,
    even: true,
    full_domain: true,
    nonneg_and_zero_at_zero: true,
};

/// `y -> scale * ||y||^p`.
pub fn make_norm_power(n: usize, p: f64, scale: f64) -> Result<ConvexFunction> {
    check_dim(n)?;
    check_p(p)?;
    check_positive("scale", scale)?;
    let f = ConvexFunction::new(
        format!("norm_pow(p={p},scale={scale})"),
        n,
        &vec![0.0; n],
        move |y| (scale * pow_abs(euclidean_norm(y), p)).into(),
    )?
    .with_subgradient(move |y| {
        let r = euclidean_norm(y);
        Some(if p == 1.0 {
            if r == 0.0 {
                SubgradientSet::Ball {
                    center: vec![0.0; y.len()],
                    radius: scale,
                }
            } else {
                SubgradientSet::point(scaled(y, scale / r))
            }
        } else if r == 0.0 {
            SubgradientSet::point(vec![0.0; y.len()])
        } else {
            SubgradientSet::point(scaled(y, scale * p * r.powf(p - 2.0)))
        })
    });
    let f = if p == 1.0 {
        f.with_recession(move |y| (scale * euclidean_norm(y)).into())
            .with_conjugate(move |u| {
                if in_ball(u, scale) {
                    ExtReal::ZERO
                } else {
                    ExtReal::PosInf
                }
            })
    } else {
        f.with_recession(indicator_zero).with_conjugate(move |u| {
            let r = euclidean_norm(u);
            if p == 2.0 {
                return (r * r / (4.0 * scale)).into();
            }
            ((1.0 - 1.0 / p) * r * (r / (scale * p)).powf(1.0 / (p - 1.0))).into()
        })
    };
    f.with_flags(Flags {
        supercoercive: p > 1.0,
        positively_homogeneous: p == 1.0,
        ..NORMLIKE
    })
}

/// Euclidean norm on `R^n`.
pub fn make_norm(n: usize) -> Result<ConvexFunction> {
    make_norm_power(n, 1.0, 1.0)
}

/// Generalized Huber function: the Moreau envelope of `rho * ||.||`.
pub fn make_huber(n: usize, rho: f64) -> Result<ConvexFunction> {
    check_dim(n)?;
    check_positive("rho", rho)?;
    ConvexFunction::new(format!("huber(rho={rho})"), n, &vec![0.0; n], move |y| {
        let r = euclidean_norm(y);
        if r > rho {
            (rho * r - rho * rho / 2.0).into()
        } else {
            (r * r / 2.0).into()
        }
    })?
    .with_subgradient(move |y| {
        let r = euclidean_norm(y);
        Some(SubgradientSet::point(if r > rho {
            scaled(y, rho / r)
        } else {
            y.to_vec()
        }))
    })
    .with_recession(move |y| (rho * euclidean_norm(y)).into())
    .with_conjugate(move |u| {
        if in_ball(u, rho) {
            (dot(u, u) / 2.0).into()
        } else {
            ExtReal::PosInf
        }
    })
    .with_flags(NORMLIKE)
}

/// Berhu (reverse Huber) function: linear inside `B(0; rho)`, quadratic outside.
pub fn make_berhu(n: usize, rho: f64) -> Result<ConvexFunction> {
    check_dim(n)?;
    check_positive("rho", rho)?;
    ConvexFunction::new(format!("berhu(rho={rho})"), n, &vec![0.0; n], move |y| {
        let r = euclidean_norm(y);
        if r > rho {
            ((r * r + rho * rho) / (2.0 * rho)).into()
        } else {
            r.into()
        }
    })?
    .with_subgradient(move |y| {
        let r = euclidean_norm(y);
        Some(if r == 0.0 {
            SubgradientSet::Ball {
                center: vec![0.0; y.len()],
                radius: 1.0,
            }
        } else if r > rho {
            SubgradientSet::point(scaled(y, 1.0 / rho))
        } else {
            SubgradientSet::point(scaled(y, 1.0 / r))
        })
    })
    .with_recession(indicator_zero)
    // (d_C^2/(2 rho) + ||.||)^* = (sigma_C + rho q) inf-convolved with the unit-ball indicator
    .with_conjugate(move |u| {
        let d = (euclidean_norm(u) - 1.0).max(0.0);
        (rho * (d + d * d / 2.0)).into()
    })
    .with_flags(Flags {
        supercoercive: true,
        ..NORMLIKE
    })
}

/// Vapnik's epsilon-insensitive loss `max{||y|| - eps, 0}`.
pub fn make_vapnik(n: usize, eps: f64) -> Result<ConvexFunction> {
    check_dim(n)?;
    check_positive("eps", eps)?;
    ConvexFunction::new(format!("vapnik(eps={eps})"), n, &vec![0.0; n], move |y| {
        (euclidean_norm(y) - eps).max(0.0).into()
    })?
    .with_subgradient(move |y| {
        let r = euclidean_norm(y);
        Some(if r < eps {
            SubgradientSet::point(vec![0.0; y.len()])
        } else if r == eps {
            SubgradientSet::Hull {
                generators: vec![vec![0.0; y.len()], scaled(y, 1.0 / r)],
            }
        } else {
            SubgradientSet::point(scaled(y, 1.0 / r))
        })
    })
    .with_recession(|y| euclidean_norm(y).into())
    .with_conjugate(move |u| {
        if in_ball(u, 1.0) {
            (eps * euclidean_norm(u)).into()
        } else {
            ExtReal::PosInf
        }
    })
    .with_flags(NORMLIKE)
}

/// Boltzmann-Shannon entropy kernel `t ln t` on `[0, inf[`, with `0 ln 0 = 0`.
pub fn make_entropy() -> Result<ConvexFunction> {
    ConvexFunction::new("entropy", 1, &[1.0], |y| {
        let t = y[0];
        if t > 0.0 {
            (t * t.ln()).into()
        } else if t == 0.0 {
            ExtReal::ZERO
        } else {
            ExtReal::PosInf
        }
    })?
    .with_subgradient(|y| {
        let t = y[0];
        Some(if t > 0.0 {
            SubgradientSet::point(vec![t.ln() + 1.0])
        } else {
            SubgradientSet::empty()
        })
    })
    .with_recession(indicator_zero)
    .with_conjugate(|u| (u[0] - 1.0).exp().into())
    .with_flags(Flags {
        supercoercive: true,
        ..Flags::default()
    })
}

/// Generator `|t^{1/p} - 1|^p` on `[0, inf[` of the power divergences
/// (Kolmogorov for `p = 1`, Hellinger for `p = 2`).
pub fn make_power_divergence_generator(p: f64) -> Result<ConvexFunction> {
    check_p(p)?;
    let root = move |t: f64| {
        if p == 1.0 {
            t
        } else if p == 2.0 {
            t.sqrt()
        } else {
            t.powf(1.0 / p)
        }
    };
    ConvexFunction::new(format!("power_div(p={p})"), 1, &[1.0], move |y| {
        let t = y[0];
        if t >= 0.0 {
            pow_abs(root(t) - 1.0, p).into()
        } else {
            ExtReal::PosInf
        }
    })?
    .with_subgradient(move |y| {
        let t = y[0];
        if t < 0.0 {
            return Some(SubgradientSet::empty());
        }
        if t == 0.0 {
            // p = 1 gives the unbounded ]-inf, -1]; p > 1 has an infinite slope
            return if p == 1.0 {
                None
            } else {
                Some(SubgradientSet::empty())
            };
        }
        if t == 1.0 && p == 1.0 {
            return Some(SubgradientSet::Hull {
                generators: vec![vec![-1.0], vec![1.0]],
            });
        }
        let s = root(t);
        let d = s - 1.0;
        let g = d.signum() * pow_abs(d, p - 1.0) * s.powf(1.0 - p);
        Some(SubgradientSet::point(vec![if d == 0.0 { 0.0 } else { g }]))
    })
    .with_recession(|y| {
        let d = y[0];
        if d >= 0.0 {
            d.into()
        } else {
            ExtReal::PosInf
        }
    })
    .with_flags(Flags::default())
}

/// `rho |t|^p - ln(1 + rho |t|^p)`.
pub fn make_fair(rho: f64, p: f64) -> Result<ConvexFunction> {
    check_positive("rho", rho)?;
    check_p(p)?;
    let f = ConvexFunction::new(format!("fair(rho={rho},p={p})"), 1, &[0.0], move |y| {
        x_minus_ln1p(rho * pow_abs(y[0], p)).into()
    })?
    .with_subgradient(move |y| {
        let t = y[0];
        if t == 0.0 {
            return Some(SubgradientSet::point(vec![0.0]));
        }
        let s = rho * pow_abs(t, p);
        let ds = rho * p * pow_abs(t, p - 1.0) * t.signum();
        Some(SubgradientSet::point(vec![s / (1.0 + s) * ds]))
    });
    let f = if p == 1.0 {
        f.with_recession(move |y| (rho * y[0].abs()).into())
    } else {
        f.with_recession(indicator_zero)
    };
    f.with_flags(Flags {
        supercoercive: p > 1.0,
        even: true,
        full_domain: true,
        nonneg_and_zero_at_zero: true,
        positively_homogeneous: false,
    })
}

/// `-ln(1 - |t|^p)` on `]-1, 1[`.
pub fn make_log_barrier(p: f64) -> Result<ConvexFunction> {
    check_p(p)?;
    ConvexFunction::new(format!("log_barrier(p={p})"), 1, &[0.0], move |y| {
        let a = y[0].abs();
        if a < 1.0 {
            (-(-pow_abs(a, p)).ln_1p()).into()
        } else {
            ExtReal::PosInf
        }
    })?
    .with_subgradient(move |y| {
        let t = y[0];
        let a = t.abs();
        Some(if a >= 1.0 {
            SubgradientSet::empty()
        } else if t == 0.0 && p == 1.0 {
            SubgradientSet::Ball {
                center: vec![0.0],
                radius: 1.0,
            }
        } else if t == 0.0 {
            SubgradientSet::point(vec![0.0])
        } else {
            SubgradientSet::point(vec![
                p * pow_abs(a, p - 1.0) * t.signum() / (1.0 - pow_abs(a, p)),
            ])
        })
    })
    .with_recession(indicator_zero)
    .with_flags(Flags {
        supercoercive: true,
        even: true,
        full_domain: false,
        nonneg_and_zero_at_zero: true,
        positively_homogeneous: false,
    })
}

/// `y -> delta + <y, v> + (rho + psi(y)^p)^{1/p}` for a nonnegative positively
/// homogeneous `psi`. Its perspective at `eta >= 0` is
/// `delta*eta + <y,v> + (rho*eta^p + psi(y)^p)^{1/p}`.
pub fn make_homogeneous_mix(
    psi: &ConvexFunction,
    delta: f64,
    rho: f64,
    p: f64,
    v: &[f64],
) -> Result<ConvexFunction> {
    let fl = psi.flags();
    if !fl.positively_homogeneous || !fl.nonneg_and_zero_at_zero {
        return Err(Error::FlagViolation(format!(
            "{} must be positively homogeneous and nonnegative",
            psi.name()
        )));
    }
    check_p(p)?;
    if rho < 0.0 || !rho.is_finite() {
        return Err(Error::BadParam {
            name: "rho",
            value: rho,
            reason: "must be nonnegative and finite",
        });
    }
    if !delta.is_finite() {
        return Err(Error::BadParam {
            name: "delta",
            value: delta,
            reason: "must be finite",
        });
    }
    psi.check_dim(v.len())?;
    let n = psi.dim();
    let v = v.to_vec();
    // delta + (rho + s^p)^{1/p} is evaluated as offset + excess(s) with
    // excess(s) = (rho + s^p)^{1/p} - rho^{1/p}, which avoids cancellation near
    // s = 0 when delta = -rho^{1/p} (pseudo-Huber, Fischer-Burmeister)
    let rho_root = if p == 1.0 {
        rho
    } else if p == 2.0 {
        rho.sqrt()
    } else {
        rho.powf(1.0 / p)
    };
    let offset = delta + rho_root;
    let excess = move |s: f64| -> f64 {
        if rho == 0.0 || p == 1.0 {
            s
        } else if p == 2.0 {
            s * s / (rho.sqrt() + rho.sqrt().hypot(s))
        } else {
            rho_root * ((s.powf(p) / rho).ln_1p() / p).exp_m1()
        }
    };
    let value_psi = psi.clone();
    let vv = v.clone();
    let f = ConvexFunction::new(
        format!("homog_mix(delta={delta},rho={rho},p={p})"),
        n,
        psi.witness(),
        move |y| match value_psi.value(y) {
            ExtReal::Finite(s) => (offset + dot(y, &vv) + excess(s)).into(),
            other => other,
        },
    )?;
    let f = if psi.has_subgradient() {
        let sg_psi = psi.clone();
        let vv = v.clone();
        f.with_subgradient(move |y| {
            let s = sg_psi.value(y).finite()?;
            let inner = sg_psi.subgradient(y)??;
            let c = if rho == 0.0 || p == 1.0 {
                1.0
            } else if s == 0.0 {
                0.0
            } else {
                s.powf(p - 1.0) / (rho + s.powf(p)).powf((p - 1.0) / p)
            };
            Some(inner.affine_image(c, &vv))
        })
    } else {
        f
    };
    let rec_psi = psi.clone();
    let vv = v.clone();
    f.with_recession(move |y| match rec_psi.value(y) {
        ExtReal::Finite(s) => (dot(y, &vv) + s).into(),
        other => other,
    })
    .with_flags(Flags {
        supercoercive: false,
        positively_homogeneous: delta == 0.0 && rho == 0.0,
        even: false,
        full_domain: fl.full_domain,
        nonneg_and_zero_at_zero: false,
    })
}

fn param(params: &BTreeMap<String, f64>, key: &'static str, default: Option<f64>) -> Result<f64> {
    match (params.get(key), default) {
        (Some(v), _) => Ok(*v),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(Error::BadParam {
            name: key,
            value: f64::NAN,
            reason: "required parameter is missing",
        }),
    }
}

fn reject_unknown(params: &BTreeMap<String, f64>, allowed: &[&str]) -> Result<()> {
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Unsupported(format!("unknown parameter `{k}`")));
    }
    Ok(())
}

/// Builds a catalog function from its command-line name and `key=value`
/// parameters. `dim` is the ambient dimension; one-dimensional families reject
/// any other value.
///
/// `homog_mix` uses `psi = ||.||` and broadcasts the scalar `v` to every
/// coordinate.
pub fn build(name: &str, params: &BTreeMap<String, f64>, dim: usize) -> Result<CatalogEntry> {
    let one_d = |dim: usize| -> Result<()> {
        if dim != 1 {
            Err(Error::DimensionMismatch {
                expected: 1,
                got: dim,
            })
        } else {
            Ok(())
        }
    };
    let mut used = BTreeMap::new();
    let mut get = |key: &'static str, default: Option<f64>| -> Result<f64> {
        let v = param(params, key, default)?;
        used.insert(key.to_string(), v);
        Ok(v)
    };
    let function = match name {
        "huber" => {
            reject_unknown(params, &["rho"])?;
            make_huber(dim, get("rho", None)?)?
        }
        "berhu" => {
            reject_unknown(params, &["rho"])?;
            make_berhu(dim, get("rho", None)?)?
        }
        "vapnik" => {
            reject_unknown(params, &["eps"])?;
            make_vapnik(dim, get("eps", None)?)?
        }
        "norm_pow" => {
            reject_unknown(params, &["p", "scale"])?;
            make_norm_power(dim, get("p", None)?, get("scale", Some(1.0))?)?
        }
        "entropy" => {
            reject_unknown(params, &[])?;
            one_d(dim)?;
            make_entropy()?
        }
        "power_div" => {
            reject_unknown(params, &["p"])?;
            one_d(dim)?;
            make_power_divergence_generator(get("p", None)?)?
        }
        "fair" => {
            reject_unknown(params, &["rho", "p"])?;
            one_d(dim)?;
            make_fair(get("rho", None)?, get("p", Some(1.0))?)?
        }
        "log_barrier" => {
            reject_unknown(params, &["p"])?;
            one_d(dim)?;
            make_log_barrier(get("p", None)?)?
        }
        "homog_mix" => {
            reject_unknown(params, &["delta", "rho", "p", "v"])?;
            let psi = make_norm(dim)?;
            let v = get("v", Some(0.0))?;
            make_homogeneous_mix(
                &psi,
                get("delta", Some(0.0))?,
                get("rho", None)?,
                get("p", None)?,
                &vec![v; dim],
            )?
        }
        other => return Err(Error::Unsupported(format!("unknown function `{other}`"))),
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        params: used,
        function,
    })
}

/// Representative instances of every catalog family, used by the check suite.
pub fn representative_entries() -> Vec<CatalogEntry> {
    type Instance<'a> = (&'a str, &'a [(&'a str, f64)], usize);
    let spec: &[Instance] = &[
        ("norm_pow", &[("p", 1.0), ("scale", 1.0)], 2),
        ("norm_pow", &[("p", 2.0), ("scale", 1.0)], 2),
        ("norm_pow", &[("p", 3.0), ("scale", 0.5)], 1),
        ("huber", &[("rho", 1.0)], 2),
        ("berhu", &[("rho", 1.0)], 2),
        ("vapnik", &[("eps", 1.0)], 2),
        ("entropy", &[], 1),
        ("power_div", &[("p", 1.0)], 1),
        ("power_div", &[("p", 2.0)], 1),
        ("fair", &[("rho", 1.0), ("p", 1.0)], 1),
        ("fair", &[("rho", 1.0), ("p", 2.0)], 1),
        ("log_barrier", &[("p", 1.0)], 1),
        ("log_barrier", &[("p", 2.0)], 1),
        // pseudo-Huber
        (
            "homog_mix",
            &[("delta", -1.0), ("rho", 1.0), ("p", 2.0), ("v", 0.0)],
            2,
        ),
        // Fischer-Burmeister
        (
            "homog_mix",
            &[("delta", -1.0), ("rho", 1.0), ("p", 2.0), ("v", -1.0)],
            1,
        ),
    ];
    spec.iter()
        .map(|(name, params, dim)| {
            let params: BTreeMap<String, f64> =
                params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            build(name, &params, *dim).expect("representative catalog parameters are valid")
        })
        .collect()
}
