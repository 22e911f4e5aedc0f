//! Command-line interface over the library.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on usage or validation
//! errors, 3 on data errors. Numbers print with 17 significant digits and
//! `+inf` prints as `inf`; `--json` switches every command to JSON output.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::calculus::{marginal, IntervalK};
use crate::catalog::{build, CatalogEntry};
use crate::divergences::{kl, phi_divergence, power_divergence, WeightedVector};
use crate::error::Error;
use crate::extreal::ExtReal;
use crate::function::SubgradientSet;
use crate::functionals::{fisher_information, total_variation, Grid};
use crate::io::{read_table, read_vector};
use crate::perspective::{Defect, Perspective, PerspectiveSubdifferential, SubgradientPair};
use crate::verify::{
    entry_checks, lsc_path, minimizing_sequence_demo, run_all, CheckReport, SuiteConfig,
    DEFAULT_SEED, DEFAULT_TRIALS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(
    name = "perspectra",
    version,
    about = "Perspective functions of convex functions"
)]
pub struct CliConfig {
    /// Print results as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// A catalog function and its parameters.
#[derive(Debug, Args)]
pub struct FunctionSpec {
    /// Catalog function name.
    #[arg(long = "fn", value_name = "NAME")]
    pub name: String,
    /// Function parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

/// A vector given inline or read from a CSV/JSON file.
#[derive(Debug, Args)]
pub struct YArg {
    /// Comma-separated coordinates, or a path to a CSV/JSON file.
    #[arg(long, allow_hyphen_values = true, value_name = "VALUES|PATH")]
    pub y: Option<String>,
    /// Path to a CSV/JSON file holding the vector.
    #[arg(long, value_name = "PATH", conflicts_with = "y")]
    pub y_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate φ(y).
    Eval {
        #[command(flatten)]
        function: FunctionSpec,
        #[command(flatten)]
        y: YArg,
    },
    /// Evaluate the perspective φ̃(η, y).
    Persp {
        #[command(flatten)]
        function: FunctionSpec,
        #[arg(long, allow_hyphen_values = true)]
        eta: f64,
        #[command(flatten)]
        y: YArg,
    },
    /// Subdifferential of the perspective at (η, y).
    Subdiff {
        #[command(flatten)]
        function: FunctionSpec,
        #[arg(long, allow_hyphen_values = true)]
        eta: f64,
        #[command(flatten)]
        y: YArg,
    },
    /// φ-divergence between two vectors.
    Div {
        /// `kl`, `power_div` (closed form, needs `--param p=...`) or a
        /// one-dimensional catalog function used as generator.
        #[arg(long)]
        phi: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Reference vector: comma-separated values or a file path.
        #[arg(long, allow_hyphen_values = true, value_name = "VALUES|PATH")]
        x: Option<String>,
        #[arg(long, value_name = "PATH", conflicts_with = "x")]
        x_file: Option<PathBuf>,
        #[command(flatten)]
        y: YArg,
        /// Nonnegative weights, comma-separated or a file path.
        #[arg(long, value_name = "VALUES|PATH")]
        weights: Option<String>,
    },
    /// Discretized Fisher information of a grid.
    Fisher {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        h: f64,
    },
    /// Discretized total variation of a grid.
    Tv {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        h: f64,
    },
    /// Minimize η ↦ φ̃(η, y) over an interval.
    Marginal {
        #[command(flatten)]
        function: FunctionSpec,
        #[arg(long, allow_hyphen_values = true)]
        k_lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        k_hi: f64,
        #[command(flatten)]
        y: YArg,
    },
    /// Run the randomized property checks.
    #[command(group(ArgGroup::new("target").required(true).args(["all", "name"])))]
    Check {
        /// Every check over the representative catalog entries.
        #[arg(long)]
        all: bool,
        /// Check a single catalog function.
        #[arg(long = "fn", value_name = "NAME")]
        name: Option<String>,
        #[arg(long = "param", value_name = "KEY=VALUE", requires = "name")]
        params: Vec<String>,
        /// Dimension of a single checked function.
        #[arg(long, default_value_t = 1, requires = "name")]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, env = "PERSPECTRA_SEED")]
        seed: Option<u64>,
        /// Activate defect number k (1 to 3) to exercise the checks.
        #[arg(long, hide = true, value_name = "K")]
        inject_defect: Option<u32>,
    },
    /// Pathology demonstrations.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Minimizing sequence of the perspective of |·|² that runs off to infinity.
    Minseq {
        #[arg(long)]
        p: f64,
        /// Number of rows, starting at n = 0.
        #[arg(long)]
        n: u64,
    },
    /// Path along which the perspective of |·|^p stays at 1 while the limit
    /// point has value 0.
    Lsc {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        steps: u32,
    },
}

/// A failure with its exit code and message for standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

/// Exit code for a library error: data and numerical failures map to 3,
/// everything caused by arguments maps to 2.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Data(_)
        | Error::BadGrid(_)
        | Error::IndeterminateSum
        | Error::NotConverged { .. }
        | Error::AllInfinite
        | Error::SamplerExhausted { .. } => EXIT_DATA,
        _ => EXIT_USAGE,
    }
}

/// `%.17g` with trailing zeros removed; infinities print as `inf`/`-inf`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn format_ext(x: ExtReal) -> String {
    format_number(x.to_f64())
}

/// JSON number, or the strings `"inf"`/`"-inf"`.
pub fn json_number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(format_number(x))
    }
}

fn json_ext(x: ExtReal) -> Value {
    json_number(x.to_f64())
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| format_number(*x))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>, Failure> {
    let mut out = BTreeMap::new();
    for p in raw {
        let (k, v) = p.split_once('=').ok_or_else(|| {
            Failure::usage(format!("parameter `{p}` is not of the form key=value"))
        })?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("parameter `{k}` has non-numeric value `{v}`")))?;
        if out.insert(k.trim().to_string(), value).is_some() {
            return Err(Failure::usage(format!("parameter `{k}` given twice")));
        }
    }
    Ok(out)
}

fn parse_inline(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().ok()).collect()
}

/// Inline comma list, or a file path when `inline` does not parse as numbers.
fn vector_arg(inline: Option<&str>, file: Option<&Path>, flag: &str) -> Result<Vec<f64>, Failure> {
    match (inline, file) {
        (Some(s), None) => match parse_inline(s) {
            Some(v) => Ok(v),
            None => Ok(read_vector(Path::new(s))?),
        },
        (None, Some(path)) => Ok(read_vector(path)?),
        (None, None) => Err(Failure::usage(format!("missing --{flag} or --{flag}-file"))),
        (Some(_), Some(_)) => Err(Failure::usage(format!(
            "--{flag} and --{flag}-file are exclusive"
        ))),
    }
}

fn y_vector(y: &YArg) -> Result<Vec<f64>, Failure> {
    vector_arg(y.y.as_deref(), y.y_file.as_deref(), "y")
}

fn entry(function: &FunctionSpec, dim: usize) -> Result<CatalogEntry, Failure> {
    let params = parse_params(&function.params)?;
    Ok(build(&function.name, &params, dim)?)
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(&config, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| Failure {
        code: EXIT_DATA,
        message: format!("cannot write output: {e}"),
    })
}

fn emit_value(out: &mut dyn Write, json: bool, v: ExtReal) -> Result<i32, Failure> {
    if json {
        emit(out, &json!({ "value": json_ext(v) }).to_string())?;
    } else {
        emit(out, &format_ext(v))?;
    }
    Ok(EXIT_OK)
}

fn dispatch(config: &CliConfig, out: &mut dyn Write) -> Result<i32, Failure> {
    let json = config.json;
    match &config.command {
        Command::Eval { function, y } => {
            let y = y_vector(y)?;
            let e = entry(function, y.len())?;
            emit_value(out, json, e.function.value(&y))
        }
        Command::Persp { function, eta, y } => {
            let y = y_vector(y)?;
            let e = entry(function, y.len())?;
            emit_value(out, json, Perspective::new(e.function).value(*eta, &y)?)
        }
        Command::Subdiff { function, eta, y } => {
            let y = y_vector(y)?;
            let e = entry(function, y.len())?;
            let s = Perspective::new(e.function).subdifferential(*eta, &y)?;
            emit(
                out,
                &if json {
                    subdiff_json(&s).to_string()
                } else {
                    subdiff_text(&s)
                },
            )?;
            Ok(EXIT_OK)
        }
        Command::Div {
            phi,
            params,
            x,
            x_file,
            y,
            weights,
        } => {
            let xv = vector_arg(x.as_deref(), x_file.as_deref(), "x")?;
            let yv = y_vector(y)?;
            if weights.is_some() && matches!(phi.as_str(), "kl" | "power_div") {
                return Err(Failure::usage(
                    "--weights applies to catalog generators only",
                ));
            }
            let params = parse_params(params)?;
            let value = match phi.as_str() {
                "kl" => kl(&xv, &yv)?,
                "power_div" => {
                    let p = *params
                        .get("p")
                        .ok_or_else(|| Failure::usage("power_div needs --param p=..."))?;
                    power_divergence(p, &xv, &yv)?
                }
                name => {
                    let e = build(name, &params, 1)?;
                    let w = weights
                        .as_deref()
                        .map(|w| vector_arg(Some(w), None, "weights"))
                        .transpose()?;
                    phi_divergence(&e.function, &WeightedVector::new(xv)?, &yv, w.as_deref())?
                }
            };
            emit_value(out, json, value)
        }
        Command::Fisher { grid, h } => {
            let g = Grid::from_table(read_table(grid)?, *h)?;
            emit_value(out, json, fisher_information(&g)?)
        }
        Command::Tv { grid, h } => {
            let g = Grid::from_table(read_table(grid)?, *h)?;
            emit_value(out, json, total_variation(&g)?)
        }
        Command::Marginal {
            function,
            k_lo,
            k_hi,
            y,
        } => {
            let y = y_vector(y)?;
            let e = entry(function, y.len())?;
            let m = marginal(
                &Perspective::new(e.function),
                &IntervalK::new(*k_lo, *k_hi)?,
                &y,
            )?;
            if json {
                emit(
                    out,
                    &json!({ "eta": json_number(m.eta), "value": json_number(m.value) })
                        .to_string(),
                )?;
            } else {
                emit(
                    out,
                    &format!(
                        "eta\t{}\nvalue\t{}",
                        format_number(m.eta),
                        format_number(m.value)
                    ),
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Check {
            all,
            name,
            params,
            dim,
            trials,
            seed,
            inject_defect,
        } => {
            let defect = match inject_defect {
                None => None,
                Some(k) => Some(Defect::from_index(*k).ok_or_else(|| {
                    Failure::usage(format!("--inject-defect must be 1, 2 or 3, got {k}"))
                })?),
            };
            if *trials == 0 {
                return Err(Failure::usage("--trials must be positive"));
            }
            let config = SuiteConfig {
                seed: seed.unwrap_or(DEFAULT_SEED),
                trials: *trials,
                defect,
            };
            let reports = if *all {
                run_all(&config)?
            } else {
                let spec = FunctionSpec {
                    name: name.clone().unwrap_or_default(),
                    params: params.clone(),
                };
                entry_checks(&entry(&spec, *dim)?, &config)?
            };
            emit_reports(out, json, &reports)
        }
        Command::Demo { which } => match which {
            Demo::Minseq { p, n } => {
                let rows = minimizing_sequence_demo(*p, *n)?;
                if json {
                    let rows: Vec<Value> = rows
                        .iter()
                        .map(|r| json!({ "n": r.n, "gap": json_number(r.gap), "distance": json_number(r.distance) }))
                        .collect();
                    emit(out, &Value::Array(rows).to_string())?;
                } else {
                    for r in rows {
                        emit(
                            out,
                            &format!(
                                "{}\t{}\t{}",
                                r.n,
                                format_number(r.gap),
                                format_number(r.distance)
                            ),
                        )?;
                    }
                }
                Ok(EXIT_OK)
            }
            Demo::Lsc { p, steps } => {
                let base = crate::catalog::make_norm_power(1, *p, 1.0)?;
                let persp = Perspective::new(base);
                let path = lsc_path(&persp, *p, *steps)?;
                let origin = persp.value(0.0, &[0.0])?;
                if json {
                    let rows: Vec<Value> = path
                        .iter()
                        .map(|s| {
                            json!({ "n": s.n, "alpha": json_number(s.alpha), "eta": json_number(s.eta), "value": json_number(s.value) })
                        })
                        .collect();
                    emit(
                        out,
                        &json!({ "path": rows, "origin": json_ext(origin) }).to_string(),
                    )?;
                } else {
                    for s in &path {
                        emit(
                            out,
                            &format!(
                                "{}\t{}\t{}\t{}",
                                s.n,
                                format_number(s.alpha),
                                format_number(s.eta),
                                format_number(s.value)
                            ),
                        )?;
                    }
                    emit(out, &format!("origin\t{}", format_ext(origin)))?;
                }
                Ok(EXIT_OK)
            }
        },
    }
}

fn emit_reports(out: &mut dyn Write, json: bool, reports: &[CheckReport]) -> Result<i32, Failure> {
    let failed = reports.iter().filter(|r| !r.passed).count();
    if json {
        let text = serde_json::to_string(reports).map_err(|e| Failure {
            code: EXIT_DATA,
            message: e.to_string(),
        })?;
        emit(out, &text)?;
    } else {
        for r in reports {
            emit(out, &r.to_string())?;
        }
        emit(out, &format!("{} checks, {} failed", reports.len(), failed))?;
    }
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn pair_text(p: &SubgradientPair) -> String {
    format!("{}\t{}", format_number(p.mu), join(&p.u))
}

fn subdiff_text(s: &PerspectiveSubdifferential) -> String {
    match s {
        PerspectiveSubdifferential::Empty => "empty".into(),
        PerspectiveSubdifferential::Cone(_) => "cone\t{(mu, u) : mu + conj(u) <= 0}".into(),
        PerspectiveSubdifferential::Lifted { set, .. } if set.is_empty() => "empty".into(),
        PerspectiveSubdifferential::Lifted {
            eta,
            y,
            base_value,
            set: SubgradientSet::Ball { center, radius },
            mu_shift,
        } => {
            let mu = base_value - crate::linalg::dot(y, center) / eta + mu_shift;
            format!(
                "ball\t{}\nradius\t{}\nmu\t{} - <y, u - center>/eta",
                pair_text(&SubgradientPair {
                    mu,
                    u: center.clone()
                }),
                format_number(*radius),
                format_number(mu)
            )
        }
        lifted => {
            let lines: Vec<String> = lifted.pairs().iter().map(pair_text).collect();
            format!("hull\n{}", lines.join("\n"))
        }
    }
}

fn pair_json(p: &SubgradientPair) -> Value {
    json!({ "mu": json_number(p.mu), "u": p.u.iter().map(|x| json_number(*x)).collect::<Vec<_>>() })
}

fn subdiff_json(s: &PerspectiveSubdifferential) -> Value {
    match s {
        PerspectiveSubdifferential::Empty => json!({ "kind": "empty" }),
        PerspectiveSubdifferential::Cone(_) => json!({ "kind": "cone" }),
        PerspectiveSubdifferential::Lifted { set, .. } if set.is_empty() => {
            json!({ "kind": "empty" })
        }
        PerspectiveSubdifferential::Lifted {
            eta,
            y,
            base_value,
            set: SubgradientSet::Ball { center, radius },
            mu_shift,
        } => {
            let mu = base_value - crate::linalg::dot(y, center) / eta + mu_shift;
            json!({
                "kind": "ball",
                "center": pair_json(&SubgradientPair { mu, u: center.clone() }),
                "radius": json_number(*radius),
            })
        }
        lifted => json!({
            "kind": "hull",
            "pairs": lifted.pairs().iter().map(pair_json).collect::<Vec<_>>(),
        }),
    }
}
