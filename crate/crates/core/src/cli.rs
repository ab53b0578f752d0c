//! Command-line front end: each subcommand writes one CSV or JSON artifact
//! (to `--out` or stdout) and, when asked, a JSON run manifest with the
//! parameters and SHA-256 digests of everything written.
//!
//! Exit codes: 0 success, 1 oracle mismatch or other failure, 2 invalid
//! arguments, 3 size above a feasibility or enumeration cap, 4 sampler
//! acceptance collapse.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::asym::{self, ln_bigint, ln_wright_pn, CONSTANTS};
use crate::expand::{
    expand_m_delta_float_jet, expand_m_delta_half, expand_m_delta_jet, expand_m_delta_laurent,
    expand_macmahon,
};
use crate::format::{float17, round15};
use crate::moments::{self, moment_report, raw_moment, MomentError, MomentSource};
use crate::partitions::{refined_poly_oracle, PartitionError, DEFAULT_CAP};
use crate::qseries::LaurentPoly;
use crate::sampler::{sample_conditioned, SamplerConfig, SamplerError};

/// Largest `n_max` accepted per ring mode. Laurent supports grow like `n²`
/// and the jet routes are quadratic in `n_max` with growing integers.
pub const LAURENT_CAP: usize = 400;
pub const JET_CAP: usize = 8192;
pub const FLOAT_JET_CAP: usize = 20_000;
pub const COUNT_CAP: usize = 20_000;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "refined-dt",
    version,
    about = "Weighted plane-partition series, moments, asymptotics and sampling"
)]
pub struct Cli {
    /// RNG seed (sample); overrides the seed of a config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (sample); overrides the config file.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Output file; stdout when absent. A manifest is written next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Manifest path (default `<out>.manifest.json`).
    #[arg(long = "json-manifest", global = true)]
    pub json_manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingMode {
    /// Full Laurent polynomials `p_n(q)`.
    Laurent,
    /// Exact derivatives `∂^j p_n(1)`, `j ≤ order`.
    Jet,
    /// Floating-point jets: log count and moment ratios.
    FloatJet,
    /// Plane-partition counts `p_n(1)`.
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMode {
    Jet,
    Laurent,
    Oracle,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Coefficients of M_δ(t, q) for n ≤ nmax.
    Expand {
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        delta: i64,
        #[arg(long)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = RingMode::Laurent)]
        ring: RingMode,
        /// Jet order for the jet modes.
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Exponents in units of q^{1/2}, i.e. M_δ(t, q^{1/2}) (Laurent mode).
        #[arg(long)]
        half_power: bool,
    },
    /// Compares the expansion with brute-force enumeration.
    OracleCheck {
        #[arg(long, default_value_t = 10)]
        ncap: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0i64, 1, 3], allow_negative_numbers = true)]
        deltas: Vec<i64>,
        /// Corrupts the expansion at n = ncap for the first delta.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Raw and normalized moments of w₊ - w₋ against the Gaussian limit.
    Moments {
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, value_enum, default_value_t = MomentMode::Jet)]
        mode: MomentMode,
    },
    /// Exact log counts against Wright's formula, with the constants.
    Asymptotics {
        #[arg(long, value_delimiter = ',', default_values_t = [25usize, 100, 400])]
        n_list: Vec<usize>,
        /// Exact counts are computed for n up to this bound.
        #[arg(long, default_value_t = 2000)]
        exact_max: usize,
    },
    /// Conditioned samples of (size, stat, trace).
    Sample {
        /// JSON sampler config; excludes the other sampler flags.
        #[arg(long, conflicts_with_all = ["n", "radius", "window", "target", "attempt_budget"])]
        config: Option<PathBuf>,
        #[arg(long, required_unless_present = "config")]
        n: Option<u64>,
        /// Radius N (default: saddle radius of n).
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        window: Option<u64>,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long)]
        attempt_budget: Option<u64>,
    },
    /// The special values and derived constants as JSON.
    Constants {
        /// Twist for the reported mean constant μ(δ).
        #[arg(long, default_value_t = 3.0)]
        delta: f64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Expand { .. } => "expand",
            Command::OracleCheck { .. } => "oracle-check",
            Command::Moments { .. } => "moments",
            Command::Asymptotics { .. } => "asymptotics",
            Command::Sample { .. } => "sample",
            Command::Constants { .. } => "constants",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Cap(String),
    #[error("oracle mismatch: {0}")]
    Mismatch(String),
    #[error("sampler: {0}")]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Moment(#[from] MomentError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Mismatch(_) => 1,
            CliError::Sampler(SamplerError::AcceptanceCollapse(_)) => 4,
            CliError::Sampler(SamplerError::InvalidConfig(_) | SamplerError::Json(_)) => 2,
            CliError::Moment(MomentError::Partition(PartitionError::CapExceeded { .. }))
            | CliError::Partition(PartitionError::CapExceeded { .. }) => 3,
            CliError::Moment(MomentError::JetOrderTooLow { .. }) => 2,
            _ => 1,
        }
    }
}

/// Per-output record of a manifest.
#[derive(Debug, Clone, Serialize)]
pub struct OutputDigest {
    /// File path, or `-` for stdout.
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub subcommand: &'static str,
    pub params: &'a Cli,
    pub version: &'static str,
    pub wall_time_seconds: f64,
    pub outputs: Vec<OutputDigest>,
}

/// What a subcommand produced: the main artifact and optional side files
/// (`<out>.<suffix>`, or stderr without `--out`).
struct Artifacts {
    main: Vec<u8>,
    side: Vec<(&'static str, Vec<u8>)>,
}

impl Artifacts {
    fn main(main: Vec<u8>) -> Self {
        Artifacts {
            main,
            side: Vec::new(),
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code. Errors are reported on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    // Oracle mismatches still write the report before failing.
    let (artifacts, failure) = match dispatch(cli) {
        Ok(a) => (a, None),
        Err((Some(a), e)) => (a, Some(e)),
        Err((None, e)) => return Err(e),
    };
    let outputs = write_artifacts(cli.out.as_deref(), &artifacts)?;
    let manifest_path = cli
        .json_manifest
        .clone()
        .or_else(|| cli.out.as_ref().map(|p| suffixed(p, "manifest.json")));
    if let Some(path) = manifest_path {
        let manifest = RunManifest {
            subcommand: cli.command.name(),
            params: cli,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_seconds: start.elapsed().as_secs_f64(),
            outputs,
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(path, text)?;
    }
    failure.map_or(Ok(()), Err)
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn digest(path: String, bytes: &[u8]) -> OutputDigest {
    OutputDigest {
        path,
        bytes: bytes.len(),
        sha256: hex::encode(Sha256::digest(bytes)),
    }
}

fn write_artifacts(out: Option<&Path>, a: &Artifacts) -> Result<Vec<OutputDigest>, CliError> {
    let mut digests = Vec::new();
    match out {
        Some(path) => {
            fs::write(path, &a.main)?;
            digests.push(digest(path.display().to_string(), &a.main));
            for (suffix, bytes) in &a.side {
                let p = suffixed(path, suffix);
                fs::write(&p, bytes)?;
                digests.push(digest(p.display().to_string(), bytes));
            }
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(&a.main)?;
            stdout.flush()?;
            digests.push(digest("-".into(), &a.main));
            let mut stderr = io::stderr().lock();
            for (_, bytes) in &a.side {
                stderr.write_all(bytes)?;
            }
        }
    }
    Ok(digests)
}

type Dispatch = Result<Artifacts, (Option<Artifacts>, CliError)>;

fn dispatch(cli: &Cli) -> Dispatch {
    let plain = |r: Result<Artifacts, CliError>| r.map_err(|e| (None, e));
    match &cli.command {
        Command::Expand {
            delta,
            nmax,
            ring,
            order,
            half_power,
        } => plain(cmd_expand(*delta, *nmax, *ring, *order, *half_power)),
        Command::OracleCheck {
            ncap,
            deltas,
            inject_fault,
        } => cmd_oracle_check(*ncap, deltas, *inject_fault),
        Command::Moments { kmax, n_list, mode } => plain(cmd_moments(*kmax, n_list, *mode)),
        Command::Asymptotics { n_list, exact_max } => plain(cmd_asymptotics(n_list, *exact_max)),
        Command::Sample { .. } => plain(sampler_config(cli).and_then(|c| cmd_sample(&c))),
        Command::Constants { delta } => plain(cmd_constants(*delta)),
    }
}

fn check_cap(what: &str, n: usize, cap: usize) -> Result<(), CliError> {
    if n > cap {
        return Err(CliError::Cap(format!(
            "{what}: n = {n} exceeds the cap {cap}"
        )));
    }
    Ok(())
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, CliError> {
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(io::Error::other(e))
}

fn cmd_expand(
    delta: i64,
    nmax: usize,
    ring: RingMode,
    order: usize,
    half: bool,
) -> Result<Artifacts, CliError> {
    if half && ring != RingMode::Laurent {
        return Err(CliError::Usage("--half-power needs --ring laurent".into()));
    }
    if ring == RingMode::Count && delta != 0 {
        return Err(CliError::Usage(
            "--ring count is M_δ at q = 1 and takes no --delta".into(),
        ));
    }
    let mut w = csv_writer();
    match ring {
        RingMode::Laurent => {
            check_cap("laurent expansion", nmax, LAURENT_CAP)?;
            let series = if half {
                expand_m_delta_half(delta, nmax)
            } else {
                expand_m_delta_laurent(delta, nmax)
            };
            let exp_col = if half { "half_exponent" } else { "exponent" };
            w.write_record(["n", exp_col, "coefficient"])
                .map_err(csv_err)?;
            for (n, p) in series.iter() {
                for (e, c) in p.terms() {
                    w.write_record([n.to_string(), e.to_string(), c.to_string()])
                        .map_err(csv_err)?;
                }
            }
        }
        RingMode::Jet => {
            check_cap("jet expansion", nmax, JET_CAP)?;
            let series = expand_m_delta_jet(delta, nmax, order);
            w.write_record(["n", "j", "derivative_at_one"])
                .map_err(csv_err)?;
            for (n, jet) in series.iter() {
                for (j, c) in jet.coeffs().iter().enumerate() {
                    w.write_record([n.to_string(), j.to_string(), c.to_string()])
                        .map_err(csv_err)?;
                }
            }
        }
        RingMode::FloatJet => {
            check_cap("float jet expansion", nmax, FLOAT_JET_CAP)?;
            let series = expand_m_delta_float_jet(delta, nmax, order);
            w.write_record(["n", "j", "ln_count", "moment_ratio"])
                .map_err(csv_err)?;
            for (n, jet) in series.iter() {
                let ln = float17(jet.ln_count());
                for j in 0..=order {
                    w.write_record([
                        n.to_string(),
                        j.to_string(),
                        ln.clone(),
                        float17(jet.moment_ratio(j)),
                    ])
                    .map_err(csv_err)?;
                }
            }
        }
        RingMode::Count => {
            check_cap("count expansion", nmax, COUNT_CAP)?;
            let series = expand_macmahon::<BigInt>(nmax);
            w.write_record(["n", "count"]).map_err(csv_err)?;
            for (n, c) in series.iter() {
                w.write_record([n.to_string(), c.to_string()])
                    .map_err(csv_err)?;
            }
        }
    }
    Ok(Artifacts::main(finish(w)?))
}

/// First exponent where two polynomials differ, with both coefficients.
fn first_difference(a: &LaurentPoly, b: &LaurentPoly) -> Option<(i64, BigInt, BigInt)> {
    let mut exps: Vec<i64> = a.terms().iter().chain(b.terms()).map(|(e, _)| *e).collect();
    exps.sort_unstable();
    exps.dedup();
    exps.into_iter()
        .map(|e| (e, a.coeff(e), b.coeff(e)))
        .find(|(_, x, y)| x != y)
}

fn cmd_oracle_check(ncap: usize, deltas: &[i64], inject_fault: bool) -> Dispatch {
    check_cap("oracle-check", ncap, DEFAULT_CAP).map_err(|e| (None, e))?;
    let mut w = csv_writer();
    let mut first_failure = None;
    let run = |w: &mut csv::Writer<Vec<u8>>,
               first_failure: &mut Option<String>|
     -> Result<(), CliError> {
        w.write_record([
            "n",
            "delta",
            "status",
            "first_diff_exponent",
            "expansion_coeff",
            "oracle_coeff",
        ])
        .map_err(csv_err)?;
        for (i, &delta) in deltas.iter().enumerate() {
            let series = expand_m_delta_laurent(delta, ncap);
            for n in 0..=ncap {
                let mut got = series.coeff(n).clone();
                if inject_fault && i == 0 && n == ncap {
                    let e = got.max_exponent().unwrap_or(0) + 1;
                    got = &got + &LaurentPoly::monomial(e);
                }
                let want = refined_poly_oracle(n, delta)?;
                let row = match first_difference(&got, &want) {
                    None => vec![
                        n.to_string(),
                        delta.to_string(),
                        "PASS".into(),
                        String::new(),
                        String::new(),
                        String::new(),
                    ],
                    Some((e, x, y)) => {
                        if first_failure.is_none() {
                            *first_failure = Some(format!(
                                "n = {n}, delta = {delta}: first differing exponent {e} (expansion {x}, enumeration {y})"
                            ));
                        }
                        vec![
                            n.to_string(),
                            delta.to_string(),
                            "FAIL".into(),
                            e.to_string(),
                            x.to_string(),
                            y.to_string(),
                        ]
                    }
                };
                w.write_record(&row).map_err(csv_err)?;
            }
        }
        Ok(())
    };
    run(&mut w, &mut first_failure).map_err(|e| (None, e))?;
    let artifacts = Artifacts::main(finish(w).map_err(|e| (None, e))?);
    match first_failure {
        None => Ok(artifacts),
        Some(msg) => Err((Some(artifacts), CliError::Mismatch(msg))),
    }
}

fn cmd_moments(kmax: u32, n_list: &[usize], mode: MomentMode) -> Result<Artifacts, CliError> {
    let n_max = n_list.iter().copied().max().unwrap_or(0);
    let ks = 1..=kmax;
    let reports = match mode {
        MomentMode::Jet => {
            check_cap("jet moments", n_max, JET_CAP)?;
            let jets = expand_m_delta_jet(0, n_max, kmax as usize);
            let mut out = Vec::new();
            for k in ks {
                out.extend(moments::convergence_report_from_jets(&jets, k, n_list)?);
            }
            out
        }
        MomentMode::Laurent => {
            check_cap("laurent moments", n_max, LAURENT_CAP)?;
            let series = expand_m_delta_laurent(0, n_max);
            let mut out = Vec::new();
            for k in ks {
                for &n in n_list {
                    out.push(moment_report(
                        n,
                        k,
                        raw_moment(n, k, MomentSource::Laurent(series.coeff(n)))?,
                    ));
                }
            }
            out
        }
        MomentMode::Oracle => {
            check_cap("oracle moments", n_max, DEFAULT_CAP)?;
            let polys: Vec<LaurentPoly> = n_list
                .iter()
                .map(|&n| refined_poly_oracle(n, 0))
                .collect::<Result<_, _>>()?;
            let mut out = Vec::new();
            for k in ks {
                for (&n, p) in n_list.iter().zip(&polys) {
                    out.push(moment_report(
                        n,
                        k,
                        raw_moment(n, k, MomentSource::Laurent(p))?,
                    ));
                }
            }
            out
        }
    };
    let mut buf = Vec::new();
    moments::write_reports_csv(&mut buf, &reports)?;
    Ok(Artifacts::main(buf))
}

/// Constants block shared by `constants` and the `asymptotics` header.
#[derive(Debug, Serialize)]
pub struct ConstantsReport {
    pub zeta2: f64,
    pub zeta3: f64,
    pub zeta_prime_minus1: f64,
    pub euler_gamma: f64,
    pub delta: f64,
    pub mu: f64,
    pub sigma2: f64,
    pub trace_mean_a: f64,
    pub trace_sd_b: f64,
    pub wright_rate: f64,
}

pub fn constants_report(delta: f64) -> ConstantsReport {
    let (mu, sigma2) = asym::theorem1_params(delta);
    let (a, b) = asym::km_params();
    ConstantsReport {
        zeta2: round15(CONSTANTS.zeta2),
        zeta3: round15(CONSTANTS.zeta3),
        zeta_prime_minus1: round15(CONSTANTS.zeta_prime_minus1),
        euler_gamma: round15(CONSTANTS.euler_gamma),
        delta,
        mu: round15(mu),
        sigma2: round15(sigma2),
        trace_mean_a: round15(a),
        trace_sd_b: round15(b),
        wright_rate: round15(asym::wright_rate()),
    }
}

fn cmd_asymptotics(n_list: &[usize], exact_max: usize) -> Result<Artifacts, CliError> {
    check_cap("exact counts", exact_max, COUNT_CAP)?;
    let exact_n = n_list.iter().copied().filter(|&n| n <= exact_max).max();
    let counts = exact_n.map(expand_macmahon::<BigInt>);
    let mut buf = Vec::new();
    writeln!(
        buf,
        "# constants: {}",
        serde_json::to_string(&constants_report(3.0))?
    )?;
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(["n", "ln_exact", "ln_wright", "ratio"])
        .map_err(csv_err)?;
    for &n in n_list {
        let ln_w = ln_wright_pn(n as f64);
        let (ln_exact, ratio) = match &counts {
            Some(c) if n <= c.n_max() => {
                let l = ln_bigint(c.coeff(n));
                (float17(l), float17((l - ln_w).exp()))
            }
            _ => (String::new(), String::new()),
        };
        w.write_record([n.to_string(), ln_exact, float17(ln_w), ratio])
            .map_err(csv_err)?;
    }
    Ok(Artifacts::main(finish(w)?))
}

fn sampler_config(cli: &Cli) -> Result<SamplerConfig, CliError> {
    let Command::Sample {
        config,
        n,
        radius,
        window,
        target,
        attempt_budget,
    } = &cli.command
    else {
        unreachable!("sample config requested for another subcommand");
    };
    let mut cfg = match (config, n) {
        (Some(path), _) => SamplerConfig::from_json(&fs::read_to_string(path)?)?,
        (None, Some(n)) => {
            let mut c = SamplerConfig::new(*n);
            if let Some(r) = radius {
                c = c.with_radius(*r);
            }
            if let Some(e) = window {
                c = c.with_window(*e);
            }
            if let Some(t) = target {
                c = c.with_target(*t);
            }
            if let Some(b) = attempt_budget {
                c = c.with_attempt_budget(*b);
            }
            c.with_seed(0)
        }
        (None, None) => return Err(CliError::Usage("sample needs --n or --config".into())),
    };
    if let Some(seed) = cli.seed {
        cfg = cfg.with_seed(seed);
    }
    if let Some(t) = cli.threads {
        cfg = cfg.with_workers(t as usize);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_sample(cfg: &SamplerConfig) -> Result<Artifacts, CliError> {
    let run = sample_conditioned(cfg)?;
    let mut main = Vec::new();
    run.write_csv(&mut main)?;
    let mut summary = Vec::new();
    run.write_summary(&mut summary)?;
    Ok(Artifacts {
        main,
        side: vec![("summary.csv", summary)],
    })
}

fn cmd_constants(delta: f64) -> Result<Artifacts, CliError> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(CliError::Usage(format!(
            "--delta must be a finite value ≥ 0, got {delta}"
        )));
    }
    let mut text = serde_json::to_string_pretty(&constants_report(delta))?;
    text.push('\n');
    Ok(Artifacts::main(text.into_bytes()))
}
