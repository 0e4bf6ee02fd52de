//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failures, 2 usage or computation error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::hint::black_box;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use sphereheat_core::heatkernel::{
    distance, heat_integral, heat_integral_nodes, heat_series_truncated, reproducing_kernel, ExponentSign,
    HeatConfig, SpherePoint, DEFAULT_MAX_TERMS,
};
use sphereheat_core::hypergeom::{jacobi_from_f21, pochhammer};
use sphereheat_core::identity_lab::{Grid, IdentityId, NodePolicy, VerifyOptions};
use sphereheat_core::orthopoly::{gegenbauer, jacobi, legendre_eval};
use sphereheat_core::quadrature::{gauss_chebyshev_rule, gauss_jacobi_rule};

use crate::parallel::{ordered_map, thread_pool, verify_grid_parallel};
use crate::ranges::{parse_count, parse_int_range, parse_real, parse_real_range};
use crate::report::{write_report, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
struct IntList(Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
struct RealList(Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
struct PointPairs(Vec<(SpherePoint, SpherePoint)>);

fn int_list(s: &str) -> Result<IntList, String> {
    parse_int_range(s).map(IntList).map_err(|e| format!("{e:#}"))
}

fn real_list(s: &str) -> Result<RealList, String> {
    parse_real_range(s).map(RealList).map_err(|e| format!("{e:#}"))
}

fn count(s: &str) -> Result<usize, String> {
    parse_count(s).map_err(|e| format!("{e:#}"))
}

fn real(s: &str) -> Result<f64, String> {
    parse_real(s).map_err(|e| format!("{e:#}"))
}

fn format_arg(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: anyhow::Error| e.to_string())
}

fn complex(s: &str) -> Result<SpherePoint, String> {
    let z: Complex64 = s.trim().parse().map_err(|_| format!("`{s}` is not a complex literal like 0.3-1.2i"))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(SpherePoint::Finite(z))
}

/// `z0,w0;z1,w1;...`
fn point_pairs(s: &str) -> Result<PointPairs, String> {
    s.split(';')
        .map(|pair| {
            let (z, w) = pair.split_once(',').ok_or_else(|| format!("`{pair}` is not a `z,w` pair"))?;
            Ok((complex(z)?, complex(w)?))
        })
        .collect::<Result<Vec<_>, String>>()
        .map(PointPairs)
}

#[derive(Debug, Parser)]
#[command(name = "sphereheat", version, about = "Jacobi integral representations and monopole heat kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare both sides of an integral representation over a parameter grid.
    Verify(VerifyArgs),
    /// Tabulate polynomials or reproducing kernels.
    Eval(EvalArgs),
    /// Tabulate the heat kernel as a spectral series and as a theta integral.
    Heat(HeatArgs),
    /// Dump a Gauss rule for the weight (1 - v^2)^a.
    Quad(QuadArgs),
    /// Time the series and integral forms of the heat kernel.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SelfTest {
    /// Double every Gamma prefactor; a sound suite must then fail.
    Perturb,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// dirichlet_mehler, prop22, lemma24, eq_ii, theorem25, dk_eq11, dk_product or cd_lemma21.
    #[arg(long, value_parser = |s: &str| s.parse::<IdentityId>().map_err(|e| e.to_string()))]
    identity: IdentityId,
    /// Integer range such as 0..20 or 1,3,5.
    #[arg(long, value_parser = int_list)]
    ell: Option<IntList>,
    #[arg(long, value_parser = int_list)]
    n: Option<IntList>,
    #[arg(long, value_parser = int_list)]
    m: Option<IntList>,
    /// Real range such as 0.1:1.5:0.1 or -0.25,0,0.5.
    #[arg(long, value_parser = real_list, allow_hyphen_values = true)]
    alpha: Option<RealList>,
    #[arg(long, value_parser = real_list, allow_hyphen_values = true)]
    beta: Option<RealList>,
    #[arg(long, value_parser = real_list, allow_hyphen_values = true)]
    theta: Option<RealList>,
    #[arg(long, value_parser = real_list, allow_hyphen_values = true)]
    s: Option<RealList>,
    #[arg(long, value_parser = real_list, allow_hyphen_values = true)]
    t: Option<RealList>,
    #[arg(long, value_parser = real_list, allow_hyphen_values = true)]
    x: Option<RealList>,
    /// Fixed node count; defaults to the oscillation rule max(64, 4·degree + 32).
    #[arg(long, value_parser = count)]
    nodes: Option<usize>,
    #[arg(long, value_parser = real, default_value = "1e-8")]
    tol_abs: f64,
    #[arg(long, value_parser = real, default_value = "1e-8")]
    tol_rel: f64,
    #[arg(long, value_enum)]
    self_test: Option<SelfTest>,
    /// json or csv; defaults to the extension of --out, else json.
    #[arg(long, value_parser = format_arg)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Function {
    Jacobi,
    Gegenbauer,
    Legendre,
    Kernel,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    function: Function,
    /// Polynomial degree, or the level ℓ of the kernel.
    #[arg(long, value_parser = int_list, default_value = "0..5")]
    degree: IntList,
    #[arg(long, value_parser = real, allow_hyphen_values = true, default_value = "0")]
    alpha: f64,
    #[arg(long, value_parser = real, allow_hyphen_values = true, default_value = "0")]
    beta: f64,
    #[arg(long, value_parser = real, allow_hyphen_values = true, default_value = "1")]
    lambda: f64,
    #[arg(long, value_parser = real_list, allow_hyphen_values = true, default_value = "-1:1:0.25")]
    x: RealList,
    /// Magnetic strength for the kernel.
    #[arg(long, value_parser = int_list, default_value = "0")]
    nu: IntList,
    /// `z0,w0;z1,w1;...` with complex literals such as 0.3-1.2i.
    #[arg(long, value_parser = point_pairs, allow_hyphen_values = true)]
    points: Option<PointPairs>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HeatArgs {
    #[arg(long, value_parser = int_list, default_value = "0")]
    nu: IntList,
    #[arg(long, value_parser = real_list)]
    t: RealList,
    /// Distances d, placed at z = 0 and w = tan d.
    #[arg(long, value_parser = real_list, conflicts_with = "points")]
    distance: Option<RealList>,
    /// `z0,w0;z1,w1;...` with complex literals such as 0.3-1.2i.
    #[arg(long, value_parser = point_pairs, allow_hyphen_values = true)]
    points: Option<PointPairs>,
    #[arg(long, value_parser = real, default_value = "1e-12")]
    eps: f64,
    /// Chebyshev nodes for the theta integral; defaults to exact integration of the truncated series.
    #[arg(long, value_parser = count)]
    nodes: Option<usize>,
    #[arg(long, value_parser = count, default_value_t = DEFAULT_MAX_TERMS)]
    max_terms: usize,
    /// Use the growing e^{+νt} factor instead of the decaying e^{-νt}.
    #[arg(long = "paper-sign")]
    growing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QuadArgs {
    /// Exponent a of the weight (1 - v^2)^a, a > -1.
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    weight: f64,
    #[arg(long, value_parser = count)]
    nodes: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_parser = count, default_value = "30")]
    reps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    EXIT_OK
                }
                _ => {
                    let text = e.to_string();
                    let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
                    eprintln!("{}", line.trim());
                    EXIT_ERROR
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Verify(a) => verify(a),
        Command::Eval(a) => eval(a),
        Command::Heat(a) => heat(a),
        Command::Quad(a) => quad(a),
        Command::Bench(a) => bench(a),
    }
}

/// Writes `bytes` to `out`, or to standard output.
fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn verify(a: VerifyArgs) -> Result<i32> {
    let mut grid = Grid::default_for(a.identity);
    let ints = [(&mut grid.ell, a.ell), (&mut grid.n, a.n), (&mut grid.m, a.m)];
    for (axis, flag) in ints {
        if let Some(IntList(v)) = flag {
            *axis = v;
        }
    }
    let reals = [
        (&mut grid.alpha, a.alpha),
        (&mut grid.beta, a.beta),
        (&mut grid.theta, a.theta),
        (&mut grid.s, a.s),
        (&mut grid.t, a.t),
        (&mut grid.x, a.x),
    ];
    for (axis, flag) in reals {
        if let Some(RealList(v)) = flag {
            *axis = v;
        }
    }
    let opts = VerifyOptions {
        nodes: a.nodes.map_or(NodePolicy::Oscillation, NodePolicy::Fixed),
        tol_abs: a.tol_abs,
        tol_rel: a.tol_rel,
        perturb: a.self_test == Some(SelfTest::Perturb),
    };
    if a.nodes == Some(0) {
        bail!("--nodes must be positive");
    }
    let pool = thread_pool()?;
    let reports = verify_grid_parallel(&pool, a.identity, &grid, &opts)?;
    let format = a.format.unwrap_or_else(|| a.out.as_deref().map_or(Format::Json, Format::from_path));
    let mut buf = Vec::new();
    write_report(&reports, format, &mut buf)?;
    emit(a.out.as_ref(), &buf)?;
    let failures = reports.iter().filter(|r| !r.pass).count();
    if failures > 0 {
        eprintln!("{failures} of {} points failed", reports.len());
        Ok(EXIT_FAILURES)
    } else {
        Ok(EXIT_OK)
    }
}

/// `P_n^{(α,β)}` through the terminating hypergeometric series, for cross-checking the recurrence.
fn polynomial_by_series(function: Function, degree: usize, a: &EvalArgs, x: f64) -> Result<f64> {
    Ok(match function {
        Function::Jacobi => jacobi_from_f21(degree, a.alpha, a.beta, x)?,
        Function::Legendre => jacobi_from_f21(degree, 0.0, 0.0, x)?,
        // C_n^{(λ)} = (2λ)_n / (λ+1/2)_n · P_n^{(λ-1/2, λ-1/2)}
        _ => {
            let l = a.lambda;
            pochhammer(2.0 * l, degree) / pochhammer(l + 0.5, degree) * jacobi_from_f21(degree, l - 0.5, l - 0.5, x)?
        }
    })
}

fn eval(a: EvalArgs) -> Result<i32> {
    let mut out = String::new();
    if a.function == Function::Kernel {
        let PointPairs(pairs) = a.points.clone().ok_or_else(|| anyhow!("--function kernel needs --points"))?;
        out.push_str("nu,ell,z_re,z_im,w_re,w_im,d,kernel_re,kernel_im\n");
        for &nu in &a.nu.0 {
            let nu = u32::try_from(nu).context("--nu is too large")?;
            for &ell in &a.degree.0 {
                for &(z, w) in &pairs {
                    let k = reproducing_kernel(nu, ell, z, w)?;
                    let (zc, wc) = (z.coordinate()?, w.coordinate()?);
                    let d = distance(z, w);
                    writeln!(out, "{nu},{ell},{:?},{:?},{:?},{:?},{d:?},{:?},{:?}", zc.re, zc.im, wc.re, wc.im, k.re, k.im)?;
                }
            }
        }
    } else {
        out.push_str("function,degree,x,recurrence,hypergeometric,abs_diff\n");
        let name = a.function.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
        for &degree in &a.degree.0 {
            for &x in &a.x.0 {
                let value = match a.function {
                    Function::Jacobi => jacobi(degree, a.alpha, a.beta, x)?,
                    Function::Gegenbauer => gegenbauer(degree, a.lambda, x)?,
                    _ => legendre_eval(degree, x)?,
                };
                let series = polynomial_by_series(a.function, degree, &a, x)?;
                writeln!(out, "{name},{degree},{x:?},{value:?},{series:?},{:?}", (value - series).abs())?;
            }
        }
    }
    emit(a.out.as_ref(), out.as_bytes())?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy)]
struct HeatJob {
    t: f64,
    nu: u32,
    z: SpherePoint,
    w: SpherePoint,
}

fn heat_row(job: &HeatJob, a: &HeatArgs) -> Result<String> {
    let sign = if a.growing { ExponentSign::Growing } else { ExponentSign::Decaying };
    let cfg = HeatConfig::new(job.nu, job.t, a.eps)?.with_max_terms(a.max_terms)?.with_sign(sign);
    let order = cfg.truncation()?;
    let series = heat_series_truncated(&cfg, job.z, job.w, order)?;
    let nodes = a.nodes.unwrap_or_else(|| heat_integral_nodes(job.nu, order));
    let d = distance(job.z, job.w);
    let integral = heat_integral(&cfg, job.z, job.w, nodes).with_context(|| format!("t={} d={d} nu={}", job.t, job.nu))?;
    Ok(format!(
        "{:?},{d:?},{},{order},{:?},{:?},{:?},{:?},{:?}\n",
        job.t,
        job.nu,
        series.re,
        series.im,
        integral.re,
        integral.im,
        (series - integral).norm()
    ))
}

fn heat(a: HeatArgs) -> Result<i32> {
    let pairs: Vec<(SpherePoint, SpherePoint)> = match (&a.points, &a.distance) {
        (Some(PointPairs(p)), _) => p.clone(),
        (None, Some(RealList(d))) => d.iter().map(|&d| (SpherePoint::real(0.0), SpherePoint::real(d.tan()))).collect(),
        (None, None) => bail!("heat needs --distance or --points"),
    };
    let mut jobs = Vec::new();
    for &t in &a.t.0 {
        for &(z, w) in &pairs {
            for &nu in &a.nu.0 {
                let nu = u32::try_from(nu).context("--nu is too large")?;
                jobs.push(HeatJob { t, nu, z, w });
            }
        }
    }
    let pool = thread_pool()?;
    let rows = ordered_map(&pool, &jobs, |job| heat_row(job, &a));
    let mut out = String::from("t,d,nu,L,series_re,series_im,integral_re,integral_im,abs_diff\n");
    for row in rows {
        out.push_str(&row?);
    }
    emit(a.out.as_ref(), out.as_bytes())?;
    Ok(EXIT_OK)
}

fn quad(a: QuadArgs) -> Result<i32> {
    let rule = if a.weight == -0.5 { gauss_chebyshev_rule(a.nodes)? } else { gauss_jacobi_rule(a.nodes, a.weight)? };
    let mut out = String::from("index,node,weight\n");
    for (i, (x, w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        writeln!(out, "{i},{x:?},{w:?}")?;
    }
    emit(a.out.as_ref(), out.as_bytes())?;
    Ok(EXIT_OK)
}

fn mean_and_stddev(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 { samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

fn bench(a: BenchArgs) -> Result<i32> {
    if a.reps == 0 {
        bail!("--reps must be positive");
    }
    let mut out = String::from("method,params,mean_ns,stddev_ns\n");
    let origin = SpherePoint::real(0.0);
    for nu in [0u32, 1, 3] {
        for t in [0.05, 0.5] {
            for d in [0.2f64, 0.9] {
                let cfg = HeatConfig::new(nu, t, 1e-12)?;
                let order = cfg.truncation()?;
                let nodes = heat_integral_nodes(nu, order);
                let w = SpherePoint::real(d.tan());
                let params = format!("nu={nu};t={t};d={d}");
                let mut series_ns = Vec::with_capacity(a.reps);
                let mut integral_ns = Vec::with_capacity(a.reps);
                for _ in 0..a.reps {
                    let start = Instant::now();
                    black_box(heat_series_truncated(&cfg, black_box(origin), black_box(w), order)?);
                    series_ns.push(start.elapsed().as_nanos() as f64);
                    let start = Instant::now();
                    black_box(heat_integral(&cfg, black_box(origin), black_box(w), nodes)?);
                    integral_ns.push(start.elapsed().as_nanos() as f64);
                }
                for (method, samples) in [("heat_series", &series_ns), ("heat_integral", &integral_ns)] {
                    let (mean, sd) = mean_and_stddev(samples);
                    writeln!(out, "{method},{params},{mean:.1},{sd:.1}")?;
                }
            }
        }
    }
    emit(a.out.as_ref(), out.as_bytes())?;
    Ok(EXIT_OK)
}
