//! Command-line interface.
//!
//! Every subcommand prints a human-readable summary on standard output and,
//! with `--json <path>`, writes the machine-readable record to `path` (`-`
//! for standard output instead of the summary). Exit codes: 0 success, 1
//! verification failure or numerical error, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::characteristics::{enumerate, gopel_systems, Characteristic, ParityFilter};
use crate::error::{Error, Result};
use crate::exactpoly::formal::{self, FormalOutcome};
use crate::fourier::{order_limit, thetanull_qexp, Coefficient};
use crate::halphen::{integrate, HalphenState};
use crate::identities::{registry, run_checks, CheckConfig, IdentityCheck, Status};
use crate::siegel::SiegelPoint;
use crate::theta::{theta_jet, DEFAULT_EPS};
use crate::Complex64;

/// Environment variable for the default worker count.
pub const WORKERS_ENV: &str = "SIEGEL_THETA_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "siegel-theta", version, about = "Siegel theta functions and thetanull identities")]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = WORKERS_ENV, default_value_t = 0)]
    pub workers: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate theta_a(z, tau) with gradient, Hessian and tail bound.
    Eval(EvalArgs),
    /// Run numeric identity checks.
    Verify(VerifyArgs),
    /// Exact polynomial identities over the rationals.
    Formal(FormalArgs),
    /// Genus-1 Halphen system.
    Halphen(HalphenArgs),
    /// Exact q-expansion of a thetanull.
    Fourier(FourierArgs),
    /// List Göpel systems.
    Gopel(GopelArgs),
    /// Full campaign: every check at every supported genus plus the formal identities.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct JsonOut {
    /// Write JSON to this path (`-` for standard output).
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Characteristic, e.g. `(1;0)`, `(1,0;0,1)` or a genus-2 label `21`.
    #[arg(long = "char", value_name = "A")]
    pub characteristic: String,
    /// Comma-separated entries of tau: upper triangle (1, 3 or 6 values) or
    /// row-major (4 or 9 values). Complex numbers as `0.1+1.2i`.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: String,
    /// Comma-separated z (defaults to 0).
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    #[command(flatten)]
    pub out: JsonOut,
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    /// Restrict to one genus (default: every supported genus).
    #[arg(long)]
    pub genus: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    /// Override every check's default relative tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Random Gamma(4,8) elements for the transformation checks.
    #[arg(long, default_value_t = 10)]
    pub gammas: usize,
}

impl CampaignArgs {
    fn config(&self) -> CheckConfig {
        let mut c = CheckConfig::new(self.seed, self.samples);
        c.eps = self.eps;
        c.tolerance = self.tol;
        c.gamma_count = self.gammas;
        c
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Identity name from the registry, or `all`.
    pub name: String,
    #[command(flatten)]
    pub campaign: CampaignArgs,
    #[command(flatten)]
    pub out: JsonOut,
}

#[derive(Debug, Args)]
pub struct FormalArgs {
    /// `chi`, `8b`, `gopel-sum`, `controls` or `all`.
    pub which: String,
    #[command(flatten)]
    pub out: JsonOut,
}

#[derive(Debug, Args)]
pub struct HalphenArgs {
    #[command(subcommand)]
    pub action: HalphenAction,
}

#[derive(Debug, Subcommand)]
pub enum HalphenAction {
    /// RK4 along a straight segment, seeded from theta-evaluated psi.
    Integrate {
        #[arg(long, allow_hyphen_values = true, default_value = "0+1i")]
        from: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0+2i")]
        to: String,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[command(flatten)]
        out: JsonOut,
    },
    /// The genus-1 checks.
    Check {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: JsonOut,
    },
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    #[arg(long = "char", value_name = "A")]
    pub characteristic: String,
    /// Include lattice points with |m|^2 <= order.
    #[arg(long, default_value_t = 20)]
    pub order: u32,
    #[command(flatten)]
    pub out: JsonOut,
}

#[derive(Debug, Args)]
pub struct GopelArgs {
    #[arg(long, default_value_t = 2)]
    pub genus: usize,
    #[command(flatten)]
    pub out: JsonOut,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub campaign: CampaignArgs,
    /// Skip the exact polynomial identities.
    #[arg(long)]
    pub no_formal: bool,
    #[command(flatten)]
    pub out: JsonOut,
}

/// Parses `a+bi`, `a-bi`, `bi`, `i`, `-i` or a real number.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidArgument(format!("cannot parse complex number {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
}

fn parse_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(parse_complex).collect()
}

/// `tau` from upper-triangle or row-major entries; the genus follows from the count.
pub fn parse_tau(s: &str) -> Result<SiegelPoint> {
    let v = parse_list(s)?;
    match v.len() {
        1 => SiegelPoint::from_upper(1, v),
        3 => SiegelPoint::from_upper(2, v),
        6 => SiegelPoint::from_upper(3, v),
        4 => SiegelPoint::from_row_major(2, &v),
        9 => SiegelPoint::from_row_major(3, &v),
        n => Err(Error::InvalidArgument(format!("tau needs 1, 3, 4, 6 or 9 entries, got {n}"))),
    }
}

fn parse_characteristic(s: &str, genus: Option<usize>) -> Result<Characteristic> {
    let a: Characteristic = s.parse()?;
    if let Some(g) = genus {
        if a.genus() != g {
            return Err(Error::GenusMismatch { left: a.genus(), right: g });
        }
    }
    Ok(a)
}

/// Errors caused by the invocation rather than by the computation.
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::UnsupportedGenus { .. }
            | Error::GenusMismatch { .. }
            | Error::WrongParity { .. }
            | Error::ParseCharacteristic(_)
            | Error::InvalidSiegelPoint(_)
            | Error::InvalidArgument(_)
            | Error::OrderTooLarge { .. }
            | Error::UnknownIdentity { .. }
    )
}

#[derive(Debug, Serialize)]
pub struct CheckTiming {
    pub name: String,
    pub genus: usize,
    pub seconds: f64,
}

/// Wall-clock data, kept apart so the rest of the report is reproducible.
#[derive(Debug, Serialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub checks: Vec<CheckTiming>,
}

#[derive(Debug, Serialize)]
pub struct CampaignReport {
    pub tool_version: &'static str,
    pub config: CheckConfig,
    pub genus: Option<usize>,
    pub checks: Vec<IdentityCheck>,
    pub formal: Vec<FormalOutcome>,
    pub formal_controls: Vec<FormalOutcome>,
    pub overall_status: Status,
    pub timing: Timing,
}

struct Output<'a> {
    stdout: &'a mut (dyn Write + Send),
    json: Option<PathBuf>,
}

impl Output<'_> {
    /// The human summary is suppressed when JSON goes to standard output.
    fn human(&mut self, text: &str) -> Result<()> {
        if self.json.as_deref() != Some(Path::new("-")) {
            write!(self.stdout, "{text}").map_err(io_error)?;
        }
        Ok(())
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let Some(path) = &self.json else { return Ok(()) };
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(e.to_string()))? + "\n";
        if path == Path::new("-") {
            write!(self.stdout, "{text}").map_err(io_error)
        } else {
            fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("output error: {e}"))
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.16e} {:+.16e}i", z.re, z.im)
}

fn status_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn check_table(checks: &[IdentityCheck]) -> String {
    let mut s = String::new();
    for c in checks {
        s += &format!(
            "{:<4} {:<22} g={} samples={:<3} max_rel={:.3e} tol={:.1e}\n",
            status_word(c.passed()),
            c.name,
            c.genus,
            c.sample_count,
            c.max_rel_residual,
            c.tolerance
        );
        if !c.passed() {
            if let Some(w) = &c.witness {
                s += &format!("       worst: sample {} [{}] {} rel={:.3e}\n", w.sample, w.component, w.detail, w.rel_residual);
            }
        }
    }
    s
}

fn formal_table(outcomes: &[FormalOutcome], expect_zero: bool) -> String {
    outcomes
        .iter()
        .map(|o| {
            format!(
                "{:<4} {:<18} zero={} result_terms={} peak_terms={}\n",
                status_word(o.holds == expect_zero),
                o.name,
                o.holds,
                o.result_terms,
                o.peak_terms
            )
        })
        .collect()
}

fn run_eval(args: &EvalArgs, out: &mut Output) -> Result<i32> {
    let tau = parse_tau(&args.tau)?;
    let a = parse_characteristic(&args.characteristic, Some(tau.genus()))?;
    let z = match &args.z {
        Some(s) => parse_list(s)?,
        None => vec![Complex64::new(0.0, 0.0); tau.genus()],
    };
    if z.len() != tau.genus() {
        return Err(Error::GenusMismatch { left: z.len(), right: tau.genus() });
    }
    let jet = theta_jet(&a, &z, &tau, args.eps)?;
    let json = jet.to_json();
    if out.json.is_none() {
        out.json = Some(PathBuf::from("-"));
    }
    out.json(&json)?;
    Ok(EXIT_OK)
}

fn run_verify(args: &VerifyArgs, out: &mut Output) -> Result<i32> {
    let config = args.campaign.config();
    let checks = run_checks(&args.name, args.campaign.genus, &config)?;
    out.human(&check_table(&checks))?;
    let pass = checks.iter().all(IdentityCheck::passed);
    out.human(&format!("{} of {} checks passed\n", checks.iter().filter(|c| c.passed()).count(), checks.len()))?;
    out.json(&checks)?;
    Ok(if pass { EXIT_OK } else { EXIT_FAILURE })
}

fn formal_selection(which: &str) -> Result<(Vec<FormalOutcome>, Vec<FormalOutcome>)> {
    Ok(match which {
        "chi" => (vec![formal::verify_chi_identity()], vec![]),
        "8b" => (vec![formal::verify_8b_identity()], vec![]),
        "gopel-sum" => (vec![formal::verify_gopel_sum_lemma()?], vec![]),
        "controls" => (vec![], formal::mutation_controls()?),
        "all" => (formal::verify_all()?, formal::mutation_controls()?),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown formal identity {other:?} (expected chi, 8b, gopel-sum, controls or all)"
            )))
        }
    })
}

#[derive(Serialize)]
struct FormalReport {
    identities: Vec<FormalOutcome>,
    controls: Vec<FormalOutcome>,
}

fn run_formal(args: &FormalArgs, out: &mut Output) -> Result<i32> {
    let (identities, controls) = formal_selection(&args.which)?;
    out.human(&formal_table(&identities, true))?;
    out.human(&formal_table(&controls, false))?;
    let pass = identities.iter().all(|o| o.holds) && controls.iter().all(|o| !o.holds);
    out.json(&FormalReport { identities, controls })?;
    Ok(if pass { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct IntegrationRecord {
    from: Complex64,
    to: Complex64,
    steps: usize,
    start: HalphenState,
    end: HalphenState,
    theta_end: HalphenState,
    max_error: f64,
}

fn run_halphen(args: &HalphenArgs, out: &mut Output) -> Result<i32> {
    match &args.action {
        HalphenAction::Integrate { from, to, steps, eps, .. } => {
            let (from, to) = (parse_complex(from)?, parse_complex(to)?);
            let start = HalphenState::from_theta(from, *eps)?;
            let end = integrate(&start, to, *steps)?;
            let theta_end = HalphenState::from_theta(to, *eps)?;
            let record = IntegrationRecord {
                from,
                to,
                steps: *steps,
                start,
                end,
                theta_end,
                max_error: end.distance(&theta_end),
            };
            let names = ["psi_10", "psi_00", "psi_01"];
            let mut text = String::new();
            for (k, name) in names.iter().enumerate() {
                text += &format!("{name}: rk4 {}  theta {}\n", fmt_c(end.psi()[k]), fmt_c(theta_end.psi()[k]));
            }
            text += &format!("max |rk4 - theta| = {:.3e}\n", record.max_error);
            out.human(&text)?;
            out.json(&record)?;
            Ok(EXIT_OK)
        }
        HalphenAction::Check { samples, seed, tol, .. } => {
            let mut config = CheckConfig::new(*seed, *samples);
            config.tolerance = *tol;
            let names = ["halphen-system", "halphen-integration", "theta4-differences", "legendre-lambda", "hypergeometric-periods"];
            let mut checks = Vec::new();
            for n in names {
                checks.extend(run_checks(n, Some(1), &config)?);
            }
            out.human(&check_table(&checks))?;
            out.json(&checks)?;
            Ok(if checks.iter().all(IdentityCheck::passed) { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

fn run_fourier(args: &FourierArgs, out: &mut Output) -> Result<i32> {
    let a = parse_characteristic(&args.characteristic, None)?;
    order_limit(a.genus())?;
    let q = thetanull_qexp(&a, args.order)?;
    let list: Vec<Coefficient> = q.coefficient_list();
    if out.json.is_none() {
        out.json = Some(PathBuf::from("-"));
    }
    out.json(&list)?;
    Ok(EXIT_OK)
}

fn run_gopel(args: &GopelArgs, out: &mut Output) -> Result<i32> {
    let systems = gopel_systems(args.genus)?;
    let even = enumerate(args.genus, ParityFilter::Even)?;
    let mut text = String::new();
    for s in &systems {
        text += &format!("{s}\n");
    }
    out.human(&text)?;
    let labels: Vec<Vec<String>> = systems.iter().map(|s| s.members().iter().map(|a| a.to_string()).collect()).collect();
    out.json(&labels)?;
    let membership_ok = even.iter().all(|a| systems.iter().filter(|s| s.contains(a)).count() == 6);
    Ok(if systems.len() == 15 && membership_ok { EXIT_OK } else { EXIT_FAILURE })
}

fn run_report(args: &ReportArgs, out: &mut Output) -> Result<i32> {
    let config = args.campaign.config();
    config.validate()?;
    let started = Instant::now();
    let mut checks = Vec::new();
    let mut timings = Vec::new();
    for entry in registry() {
        let genera: Vec<usize> = match args.campaign.genus {
            Some(g) if entry.genera.contains(&g) => vec![g],
            Some(_) => continue,
            None => entry.genera.to_vec(),
        };
        for g in genera {
            let t = Instant::now();
            let check = (entry.run)(&config, g)?;
            timings.push(CheckTiming {
                name: entry.name.to_string(),
                genus: g,
                seconds: t.elapsed().as_secs_f64(),
            });
            checks.push(check);
        }
    }
    let (formal, formal_controls) = if args.no_formal {
        (vec![], vec![])
    } else {
        formal_selection("all")?
    };
    let pass = checks.iter().all(IdentityCheck::passed)
        && formal.iter().all(|o| o.holds)
        && formal_controls.iter().all(|o| !o.holds);
    let report = CampaignReport {
        tool_version: env!("CARGO_PKG_VERSION"),
        config,
        genus: args.campaign.genus,
        checks,
        formal,
        formal_controls,
        overall_status: if pass { Status::Pass } else { Status::Fail },
        timing: Timing {
            total_seconds: started.elapsed().as_secs_f64(),
            checks: timings,
        },
    };
    out.human(&check_table(&report.checks))?;
    out.human(&formal_table(&report.formal, true))?;
    out.human(&formal_table(&report.formal_controls, false))?;
    out.human(&format!("overall: {}\n", status_word(pass)))?;
    out.json(&report)?;
    Ok(if pass { EXIT_OK } else { EXIT_FAILURE })
}

fn dispatch(cli: &Cli, stdout: &mut (dyn Write + Send)) -> Result<i32> {
    let json = match &cli.command {
        Command::Eval(a) => a.out.json.clone(),
        Command::Verify(a) => a.out.json.clone(),
        Command::Formal(a) => a.out.json.clone(),
        Command::Halphen(a) => match &a.action {
            HalphenAction::Integrate { out, .. } | HalphenAction::Check { out, .. } => out.json.clone(),
        },
        Command::Fourier(a) => a.out.json.clone(),
        Command::Gopel(a) => a.out.json.clone(),
        Command::Report(a) => a.out.json.clone(),
    };
    let mut out = Output { stdout, json };
    match &cli.command {
        Command::Eval(a) => run_eval(a, &mut out),
        Command::Verify(a) => run_verify(a, &mut out),
        Command::Formal(a) => run_formal(a, &mut out),
        Command::Halphen(a) => run_halphen(a, &mut out),
        Command::Fourier(a) => run_fourier(a, &mut out),
        Command::Gopel(a) => run_gopel(a, &mut out),
        Command::Report(a) => run_report(a, &mut out),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker pool: {e}");
            return EXIT_FAILURE;
        }
    };
    match pool.install(|| dispatch(&cli, stdout)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if is_usage_error(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["siegel-theta"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn complex_parsing() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("0+1i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2.5").unwrap(), c(2.5, 0.0));
        assert_eq!(parse_complex("-0.5-2i").unwrap(), c(-0.5, -2.0));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex(" 0.1 + 1.2i ").unwrap(), c(0.1, 1.2));
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn tau_parsing_infers_genus() {
        assert_eq!(parse_tau("i").unwrap().genus(), 1);
        assert_eq!(parse_tau("i,0.1,1.2i").unwrap().genus(), 2);
        assert_eq!(parse_tau("i,0.1,0.1,i").unwrap().genus(), 2);
        assert!(parse_tau("i,0.1").is_err());
        assert!(parse_tau("-i").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["verify", "no-such-identity"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["gopel", "--genus", "3"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["fourier", "--char", "00", "--order", "41"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["eval", "--char", "(1;0)", "--tau", "1+i,0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["formal", "nope"]).0, EXIT_USAGE);
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify"));
    }

    #[test]
    fn gopel_prints_fifteen_lines() {
        let (code, out, _) = run_capture(&["gopel", "--genus", "2"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 15);
    }

    #[test]
    fn eval_prints_jet_json() {
        let (code, out, _) = run_capture(&["eval", "--char", "(0;0)", "--tau", "0+1i"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let re = v["value"][0].as_f64().unwrap();
        assert!((re - 1.086_434_811_213_308).abs() < 1e-14);
        assert_eq!(v["grad"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn fourier_prints_coefficients() {
        let (code, out, _) = run_capture(&["fourier", "--char", "(0;0)", "--order", "9"]);
        assert_eq!(code, EXIT_OK);
        let v: Vec<Coefficient> = serde_json::from_str::<Vec<serde_json::Value>>(&out)
            .unwrap()
            .into_iter()
            .map(|x| Coefficient {
                exponent: vec![x["exponent"][0].as_i64().unwrap()],
                coeff: x["coeff"].as_i64().unwrap(),
            })
            .collect();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], Coefficient { exponent: vec![0], coeff: 1 });
        assert_eq!(v[3], Coefficient { exponent: vec![36], coeff: 2 });
    }
}
