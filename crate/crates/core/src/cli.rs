//! Command surface: argument parsing, dispatch, JSON and CSV output.
//!
//! Every command prints one JSON document to stdout of the form
//! `{"schema": "expode/1", "command": ..., "result": ...}`. Domain errors
//! print `{"schema": "expode/1", "error": {"code", "kind", "message"}}` and
//! exit with 1; usage errors exit with 2.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::rat_string;
use crate::error::{Error, Result};
use crate::expoly::ExpPoly;
use crate::parse::{parse_constant, parse_expoly, parse_poly, parse_ratfunc, parse_rational};
use crate::{banklaine, classn, hfun, indicator, nevanlinna, tc};

pub const SCHEMA: &str = "expode/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "expode", version, about = "Exponential polynomials, H-functions and growth of ODE solutions")]
struct Cli {
    /// Also write the JSON document here.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
    /// Write bulk samples as CSV (`r,theta,re,im,log_abs`).
    #[arg(long, global = true, value_name = "PATH")]
    csv_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Growth and decay sectors of e^p.
    Sectors {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Evaluate H(z) = int_0^z beta(t) e^{p(z)-p(t)} dt and its sector asymptotics.
    #[command(subcommand)]
    Hfun(HfunCmd),
    /// Exact solutions of f^n + P(f) = b1 e^{p1} + b2 e^{p2}.
    #[command(subcommand)]
    Tc(TcCmd),
    /// Bank-Laine constructions for f'' + A f = 0.
    #[command(subcommand)]
    Banklaine(BanklaineCmd),
    /// Nevanlinna characteristic and growth fits.
    #[command(subcommand)]
    Nev(NevCmd),
    /// Ray integration of F' = R1 e^q F + R2.
    #[command(subcommand)]
    Classn(ClassnCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PathArg {
    Segment,
    TwoLeg,
}

#[derive(Args, Debug)]
struct HArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    #[arg(long, value_enum, default_value_t = PathArg::Segment)]
    path: PathArg,
}

impl HArgs {
    fn config(&self) -> hfun::HEvalConfig {
        let path = match self.path {
            PathArg::Segment => hfun::PathKind::Segment,
            PathArg::TwoLeg => hfun::PathKind::TwoLegViaCircle,
        };
        hfun::HEvalConfig { rel_tol: self.rel_tol, ..Default::default() }.with_path(path)
    }
}

#[derive(Subcommand, Debug)]
enum HfunCmd {
    /// H(z) = int_0^z beta(t) e^{p(z)-p(t)} dt at the given points.
    Eval {
        #[command(flatten)]
        h: HArgs,
        /// A point such as "3", "-2i" or "1.5+2i"; repeatable.
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Sector-wise comparison of H with a_j e^p.
    Verify {
        #[command(flatten)]
        h: HArgs,
        #[arg(long, default_value_t = 20.0)]
        rmax: f64,
        /// Defaults to rmax/4.
        #[arg(long)]
        rmin: Option<f64>,
        #[arg(long, default_value_t = 8)]
        count: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
}

#[derive(Args, Debug)]
struct TcArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    b1: String,
    #[arg(long, allow_hyphen_values = true)]
    b2: String,
    #[arg(long, allow_hyphen_values = true)]
    p1: String,
    /// Defaults to alpha * p1.
    #[arg(long, allow_hyphen_values = true)]
    p2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
}

impl TcArgs {
    fn problem(&self) -> Result<tc::TCProblem> {
        let p1 = parse_poly(&self.p1)?;
        let alpha = self.alpha.as_deref().map(parse_rational).transpose()?;
        let p2 = match (&self.p2, &alpha) {
            (Some(s), _) => parse_poly(s)?,
            (None, Some(a)) => p1.scale_rat(a),
            (None, None) => return Err(Error::InvalidInput("give --p2 or --alpha".into())),
        };
        let prob = tc::TCProblem::new(self.n, parse_poly(&self.b1)?, parse_poly(&self.b2)?, p1, p2)?;
        if let Some(a) = alpha {
            if &a != prob.alpha() {
                return Err(Error::InvalidInput(format!(
                    "--alpha {} disagrees with the leading ratio {} of p2/p1",
                    a,
                    prob.alpha()
                )));
            }
        }
        Ok(prob)
    }
}

#[derive(Subcommand, Debug)]
enum TcCmd {
    /// Smallest m >= 0 with alpha <= ((m+1)n - 1)/((m+1)n).
    M {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Coefficients c_0..c_m of the binomial-type expansion.
    Coeffs {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
    },
    /// Build a solution f and its exact residual.
    Construct {
        #[command(flatten)]
        args: TcArgs,
    },
    /// Construct, then check the witness exactly; optionally add gamma to f.
    Verify {
        #[command(flatten)]
        args: TcArgs,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum BanklaineCmd {
    /// Forward construction for p2 = p1/2.
    Half {
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        b1: String,
    },
    /// The one-parameter family with p1 = z, p2 = 3z/4.
    Threequarter {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Exact residual of g'' + A g for g = kappa e^h.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        hprime: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        kappa: String,
    },
}

#[derive(Subcommand, Debug)]
enum NevCmd {
    /// T(r, f) on a radius grid with a fitted order.
    Characteristic {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 5.0)]
        rmin: f64,
        #[arg(long, default_value_t = 100.0)]
        rmax: f64,
        #[arg(long, default_value_t = 12)]
        count: usize,
        /// Circle samples per radius in the CSV output.
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Constant C in T(r, b1 e^{p1} + b2 e^{p2}) ~ C r^k.
    Steinmetz {
        #[arg(long, allow_hyphen_values = true)]
        b1: String,
        #[arg(long, allow_hyphen_values = true)]
        b2: String,
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        #[arg(long, allow_hyphen_values = true)]
        p2: String,
        #[arg(long, default_value_t = 50.0)]
        r: f64,
    },
}

#[derive(Args, Debug)]
struct OdeArgs {
    #[arg(long, allow_hyphen_values = true)]
    r1: String,
    #[arg(long, allow_hyphen_values = true)]
    r2: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, default_value_t = 25.0)]
    rmax: f64,
    #[arg(long, default_value_t = 1e-10)]
    rtol: f64,
}

#[derive(Subcommand, Debug)]
enum ClassnCmd {
    /// Integrate F' = R1 e^q F + R2 along one ray.
    Ray {
        #[command(flatten)]
        ode: OdeArgs,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        f0: String,
        /// Defaults to just outside the poles of R1, R2.
        #[arg(long)]
        r0: Option<f64>,
    },
    /// Central rays of every sector from three generic starts.
    Dichotomy {
        #[command(flatten)]
        ode: OdeArgs,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
}

/// One CSV row.
#[derive(Serialize)]
struct Sample {
    r: f64,
    theta: f64,
    re: Option<f64>,
    im: Option<f64>,
    log_abs: f64,
}

impl Sample {
    fn from_value(z: Complex64, v: Complex64) -> Self {
        Sample { r: z.norm(), theta: z.arg(), re: Some(v.re), im: Some(v.im), log_abs: v.norm().ln() }
    }
}

struct Output {
    command: &'static str,
    result: Value,
    samples: Vec<Sample>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn parse_point(s: &str) -> Result<Complex64> {
    Ok(parse_constant(s)?.to_complex())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(Error::InvalidInput(format!("need 0 < rmin < rmax and count >= 2, got {lo}, {hi}, {n}")));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn geomspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    linspace(lo, hi, n)?;
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect())
}

fn sectors(p: &str) -> Result<Output> {
    let p = parse_poly(p)?;
    let map = indicator::sector_map(&p)?;
    let detail: Vec<Value> = (0..map.len())
        .map(|j| {
            let (lo, hi) = map.bounds(j);
            json!({"sector": j, "sign": map.sign[j], "theta_lo": lo, "theta_hi": hi, "central": map.central_angle(j)})
        })
        .collect();
    Ok(Output {
        command: "sectors",
        result: json!({"p": to_value(&p), "map": to_value(&map), "sectors": detail}),
        samples: vec![],
    })
}

fn hfun_cmd(cmd: HfunCmd) -> Result<Output> {
    match cmd {
        HfunCmd::Eval { h, z } => {
            let p = parse_poly(&h.p)?;
            let beta = parse_expoly(&h.beta)?;
            let cfg = h.config();
            let mut rows = Vec::new();
            let mut samples = Vec::new();
            for s in &z {
                let z = parse_point(s)?;
                let v = hfun::eval_H(&p, &beta, z, &cfg)?;
                rows.push(json!({"z": complex_pair(z), "h": complex_pair(v)}));
                samples.push(Sample::from_value(z, v));
            }
            Ok(Output {
                command: "hfun eval",
                result: json!({"p": to_value(&p), "beta": to_value(&beta), "config": to_value(&cfg), "values": rows}),
                samples,
            })
        }
        HfunCmd::Verify { h, rmax, rmin, count, epsilon } => {
            let p = parse_poly(&h.p)?;
            let beta = parse_expoly(&h.beta)?;
            let cfg = h.config();
            let radii = linspace(rmin.unwrap_or(rmax / 4.0), rmax, count)?;
            let reports = hfun::verify_sector_asymptotics(&p, &beta, &cfg, &radii, epsilon)?;
            let mut samples = Vec::new();
            for rep in &reports {
                let theta = 0.5 * (rep.theta_lo + rep.theta_hi);
                for &r in &radii {
                    let z = Complex64::from_polar(r, theta);
                    samples.push(Sample::from_value(z, hfun::sector_deviation(&p, &beta, z, &cfg)?));
                }
            }
            Ok(Output {
                command: "hfun verify",
                result: json!({
                    "p": to_value(&p),
                    "beta": to_value(&beta),
                    "config": to_value(&cfg),
                    "epsilon": epsilon,
                    "reports": to_value(&reports),
                }),
                samples,
            })
        }
    }
}

fn tc_cmd(cmd: TcCmd) -> Result<Output> {
    match cmd {
        TcCmd::M { n, alpha } => {
            let a = parse_rational(&alpha)?;
            let m = tc::smallest_m(n, &a)?;
            Ok(Output {
                command: "tc m",
                result: json!({"n": n, "alpha": rat_string(&a), "m": m}),
                samples: vec![],
            })
        }
        TcCmd::Coeffs { n, m } => {
            if n < 2 {
                return Err(Error::InvalidInput(format!("n = {n} must be at least 2")));
            }
            let c = tc::solve_coefficients(n, m);
            Ok(Output { command: "tc coeffs", result: json!({"n": n, "m": m, "c": to_value(&c)}), samples: vec![] })
        }
        TcCmd::Construct { args } => {
            let prob = args.problem()?;
            let w = tc::construct(&prob)?;
            Ok(Output {
                command: "tc construct",
                result: json!({
                    "problem": to_value(&prob),
                    "alpha": rat_string(prob.alpha()),
                    "witness": to_value(&w),
                }),
                samples: vec![],
            })
        }
        TcCmd::Verify { args, gamma } => {
            let prob = args.problem()?;
            let w = tc::construct(&prob)?;
            let gamma = gamma.as_deref().map(parse_expoly).transpose()?;
            let report = tc::verify_tc(&w, &prob, gamma.as_ref())?;
            Ok(Output {
                command: "tc verify",
                result: json!({"problem": to_value(&prob), "witness": to_value(&w), "report": to_value(&report)}),
                samples: vec![],
            })
        }
    }
}

fn banklaine_cmd(cmd: BanklaineCmd) -> Result<Output> {
    match cmd {
        BanklaineCmd::Half { p1, kappa, gamma, b1 } => {
            let kappa = parse_poly(&kappa)?;
            let w = banklaine::construct_half(&parse_poly(&p1)?, &kappa, &parse_poly(&gamma)?, &parse_poly(&b1)?)?;
            let residual = banklaine::banklaine_residual(&w.a, &w.hprime, &kappa);
            Ok(Output {
                command: "banklaine half",
                result: json!({
                    "witness": to_value(&w),
                    "residual": to_value(&residual),
                    "residual_zero": residual.is_zero(),
                }),
                samples: vec![],
            })
        }
        BanklaineCmd::Threequarter { c } => {
            let w = banklaine::three_quarter_family(&parse_constant(&c)?)?;
            Ok(Output { command: "banklaine threequarter", result: to_value(&w), samples: vec![] })
        }
        BanklaineCmd::Verify { a, hprime, kappa } => {
            let a = parse_expoly(&a)?;
            let hprime = parse_expoly(&hprime)?;
            let kappa = parse_poly(&kappa)?;
            let residual = banklaine::banklaine_residual(&a, &hprime, &kappa);
            Ok(Output {
                command: "banklaine verify",
                result: json!({"residual": to_value(&residual), "residual_zero": residual.is_zero()}),
                samples: vec![],
            })
        }
    }
}

fn circle_samples(f: &ExpPoly, r: f64, n: usize) -> Vec<Sample> {
    (0..n)
        .filter_map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / n as f64;
            let z = Complex64::from_polar(r, theta);
            let log_abs = f.log_abs(z).ok()?;
            let v = f.eval(z).ok().filter(|v| v.is_finite());
            Some(Sample { r, theta, re: v.map(|v| v.re), im: v.map(|v| v.im), log_abs })
        })
        .collect()
}

fn nev_cmd(cmd: NevCmd) -> Result<Output> {
    match cmd {
        NevCmd::Characteristic { f, rmin, rmax, count, samples } => {
            let f = parse_expoly(&f)?;
            let radii = geomspace(rmin, rmax, count)?;
            let curve = nevanlinna::growth_curve(&f, &radii)?;
            let rows = radii.iter().flat_map(|&r| circle_samples(&f, r, samples)).collect();
            Ok(Output {
                command: "nev characteristic",
                result: json!({"f": to_value(&f), "curve": to_value(&curve)}),
                samples: rows,
            })
        }
        NevCmd::Steinmetz { b1, b2, p1, p2, r } => {
            let rep = nevanlinna::steinmetz_check(
                &parse_poly(&b1)?,
                &parse_poly(&b2)?,
                &parse_poly(&p1)?,
                &parse_poly(&p2)?,
                r,
            )?;
            Ok(Output { command: "nev steinmetz", result: to_value(&rep), samples: vec![] })
        }
    }
}

fn trace_samples(t: &classn::RayTrace) -> Vec<Sample> {
    t.r_values
        .iter()
        .zip(&t.log_f)
        .map(|(&r, u)| {
            let f = Complex64::new(u[0], u[1]).exp();
            let ok = f.is_finite();
            Sample { r, theta: t.theta, re: ok.then_some(f.re), im: ok.then_some(f.im), log_abs: u[0] }
        })
        .collect()
}

fn classn_cmd(cmd: ClassnCmd) -> Result<Output> {
    let load = |o: &OdeArgs| -> Result<_> {
        let cfg = classn::RayConfig { rtol: o.rtol, ..Default::default() };
        Ok((parse_ratfunc(&o.r1)?, parse_ratfunc(&o.r2)?, parse_poly(&o.q)?, cfg))
    };
    match cmd {
        ClassnCmd::Ray { ode, theta, f0, r0 } => {
            let (r1, r2, q, cfg) = load(&ode)?;
            let r0 = r0.unwrap_or_else(|| classn::default_r0(&r1, &r2));
            let trace = classn::integrate_ray(&r1, &r2, &q, theta, parse_point(&f0)?, r0, ode.rmax, &cfg)?;
            let samples = trace_samples(&trace);
            Ok(Output { command: "classn ray", result: json!({"r0": r0, "trace": to_value(&trace)}), samples })
        }
        ClassnCmd::Dichotomy { ode, epsilon } => {
            let (r1, r2, q, cfg) = load(&ode)?;
            let rep = classn::dichotomy_report(&r1, &r2, &q, epsilon, ode.rmax, &cfg)?;
            let samples = rep.sectors.iter().flat_map(|s| s.traces.iter().flat_map(trace_samples)).collect();
            Ok(Output { command: "classn dichotomy", result: to_value(&rep), samples })
        }
    }
}

fn dispatch(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Sectors { p } => sectors(&p),
        Command::Hfun(c) => hfun_cmd(c),
        Command::Tc(c) => tc_cmd(c),
        Command::Banklaine(c) => banklaine_cmd(c),
        Command::Nev(c) => nev_cmd(c),
        Command::Classn(c) => classn_cmd(c),
    }
}

fn write_csv(path: &Path, rows: &[Sample]) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidInput(format!("writing {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    if rows.is_empty() {
        w.write_record(["r", "theta", "re", "im", "log_abs"]).map_err(io)?;
    }
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(format!("writing {}: {e}", path.display())))
}

/// The JSON document for a domain error.
pub fn error_document(e: &Error) -> Value {
    json!({"schema": SCHEMA, "error": {"code": e.code(), "kind": e.kind(), "message": e.to_string()}})
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var("EXPODE_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("EXPODE_THREADS must be a positive integer, got '{v}'"))?;
    if n == 0 {
        return Err("EXPODE_THREADS must be at least 1".into());
    }
    // a pool built earlier in the same process wins
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Run the command line `argv` (including the program name) and return the
/// exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    let (doc, code) = match dispatch(cli.command) {
        Ok(o) => {
            let csv = match &cli.csv_out {
                Some(path) => write_csv(path, &o.samples),
                None => Ok(()),
            };
            match csv {
                Ok(()) => (json!({"schema": SCHEMA, "command": o.command, "result": o.result}), EXIT_OK),
                Err(e) => (error_document(&e), EXIT_DOMAIN),
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            (error_document(&e), EXIT_DOMAIN)
        }
    };
    let text = serde_json::to_string_pretty(&doc).expect("json values serialize");
    let _ = writeln!(out, "{text}");
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            let _ = writeln!(err, "error: writing {}: {e}", path.display());
            return EXIT_DOMAIN;
        }
    }
    code
}
