//! The `pls` command line.
//!
//! Exit codes: 0 success, 1 input error, 2 non-viable investment,
//! 3 verification failure.

pub mod contract_file;
pub mod format;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::domain::{Allocation, ContractSpec, RiskProfile};
use crate::error::Error;
use crate::oracle::{verify_allocation, VerificationReport};
use crate::ratio;
use crate::risk::{
    empirical_profile, gbm_closed_form, monte_carlo_profile, parse_draws, two_point_profile,
    AssetModel, EmpiricalSample, GbmParams, McConfig, TwoPointScenario,
};
pub use contract_file::{ContractFile, LoadedContract, ModelSpec};
use format::sig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_VIABLE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Digits in human-readable reports.
const REPORT_DIGITS: usize = 4;
/// Digits in sweep CSV output.
const CSV_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "pls",
    version,
    about = "c-fair profit-sharing ratios for profit-and-loss sharing contracts"
)]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,

    /// Monte Carlo seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Estimate gbm / two-point models by Monte Carlo with this many paths
    /// instead of the closed form.
    #[arg(long, global = true)]
    pub paths: Option<u64>,

    /// Relative verification tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Risk profile (E+, E-, rho, delta) of an asset model.
    Risk(RiskArgs),
    /// Ratios, payment and payoffs for a contract file.
    Allocate { file: PathBuf },
    /// Ratios over an evenly spaced range of rho, as CSV.
    Sweep(SweepArgs),
    /// Check user-supplied ratios against a contract file.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Gbm,
    TwoPoint,
    Empirical,
}

#[derive(Debug, Args)]
pub struct RiskArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long = "T")]
    pub horizon: Option<f64>,
    #[arg(long = "L")]
    pub capital: f64,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub r_plus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r_minus: Option<f64>,
    /// Draws file for the empirical model, one value per line.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub rho_from: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho_to: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Output path; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub gammas: Vec<f64>,
    /// Periodic payment, for wakalah contracts.
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    NotViable(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotViable { .. } => Failure::NotViable(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (program name first) and runs the command. Reports go to
/// `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::NotViable(msg)) => {
            let _ = writeln!(err, "not viable: {msg}");
            EXIT_NOT_VIABLE
        }
        Err(Failure::Verification) => {
            let _ = writeln!(err, "verification failed");
            EXIT_VERIFY_FAILED
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let mc = match cli.paths {
        Some(n) => Some(McConfig::new(n, cli.seed)?),
        None => None,
    };
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Err(Failure::Input(format!(
            "--tol must be >= 0, got {}",
            cli.tol
        )));
    }
    match &cli.command {
        Command::Risk(args) => cmd_risk(args, mc.as_ref(), cli.json, out),
        Command::Allocate { file } => cmd_allocate(file, mc.as_ref(), cli.tol, cli.json, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::Verify(args) => cmd_verify(args, mc.as_ref(), cli.tol, cli.json, out),
    }
}

fn need(value: Option<f64>, flag: &str) -> std::result::Result<f64, Failure> {
    value.ok_or_else(|| Failure::Input(format!("missing --{flag}")))
}

fn cmd_risk(args: &RiskArgs, mc: Option<&McConfig>, json: bool, out: &mut dyn Write) -> CmdResult {
    let model = match args.model {
        ModelKind::Gbm => Some(AssetModel::Gbm(GbmParams::new(
            need(args.mu, "mu")?,
            need(args.sigma, "sigma")?,
            need(args.horizon, "T")?,
            args.capital,
        )?)),
        ModelKind::TwoPoint => Some(AssetModel::TwoPoint(TwoPointScenario::new(
            need(args.beta, "beta")?,
            need(args.r_plus, "r-plus")?,
            need(args.r_minus, "r-minus")?,
            args.capital,
        )?)),
        ModelKind::Empirical => None,
    };
    let profile = match (model, mc) {
        (Some(m), Some(cfg)) => monte_carlo_profile(&m, cfg)?,
        (Some(AssetModel::Gbm(g)), None) => gbm_closed_form(&g)?,
        (Some(AssetModel::TwoPoint(s)), None) => two_point_profile(&s)?,
        (None, _) => {
            let path = args
                .file
                .as_ref()
                .ok_or_else(|| Failure::Input("missing --file for the empirical model".into()))?;
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
            empirical_profile(&EmpiricalSample::new(parse_draws(&text)?, args.capital)?)?
        }
    };
    if json {
        let doc = json!({ "profile": profile, "viable": profile.viable() });
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("profile serializes")
        )?;
    } else {
        write_profile(&profile, out)?;
    }
    if profile.viable() {
        Ok(())
    } else {
        Err(Failure::NotViable(format!(
            "rho = {} > 1",
            sig(profile.rho(), REPORT_DIGITS)
        )))
    }
}

fn write_profile(p: &RiskProfile, out: &mut dyn Write) -> std::io::Result<()> {
    let d = REPORT_DIGITS;
    writeln!(
        out,
        "expected profit  E(R_T - L)^+  {}",
        sig(p.e_profit(), d)
    )?;
    writeln!(out, "expected loss    E(L - R_T)^+  {}", sig(p.e_loss(), d))?;
    writeln!(out, "investment risk  rho           {}", sig(p.rho(), d))?;
    writeln!(out, "expected profit  delta         {}", sig(p.delta(), d))?;
    if let Some(se) = p.std_errors() {
        writeln!(
            out,
            "standard errors  E+ {}  E- {}  rho {}  delta {}",
            sig(se.profit, d),
            sig(se.loss, d),
            sig(se.rho, d),
            sig(se.delta, d)
        )?;
    }
    writeln!(
        out,
        "viability        {}",
        if p.viable() { "viable" } else { "not viable" }
    )
}

fn load(file: &Path) -> std::result::Result<(LoadedContract, ContractSpec), Failure> {
    let contract = LoadedContract::load(file)?;
    let spec = contract.spec()?;
    Ok((contract, spec))
}

fn cmd_allocate(
    file: &Path,
    mc: Option<&McConfig>,
    tol: f64,
    json: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let (contract, spec) = load(file)?;
    let profile = contract.profile(mc)?;
    let alloc = ratio::allocate(&spec, &profile)?;
    let report = verify_allocation(&alloc, &spec, &profile, tol)?;
    if json {
        let doc = json!({
            "variant": spec.variant(),
            "profile": profile,
            "allocation": alloc,
            "verification": report,
        });
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("allocation serializes")
        )?;
    } else {
        write_allocation(&spec, &profile, &alloc, &report, out)?;
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn write_allocation(
    spec: &ContractSpec,
    profile: &RiskProfile,
    alloc: &Allocation,
    report: &VerificationReport,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let d = REPORT_DIGITS;
    let variant = serde_json::to_value(spec.variant()).expect("variant serializes");
    writeln!(
        out,
        "contract  {} ({} partners)",
        variant.as_str().unwrap_or_default(),
        spec.ratings().len()
    )?;
    writeln!(
        out,
        "risk      rho {}  delta {}",
        sig(profile.rho(), d),
        sig(profile.delta(), d)
    )?;
    writeln!(out, "partner  rating  capital  gamma    payoff")?;
    let kappa = spec.capital_of_all();
    for (i, c) in spec.ratings().values().iter().enumerate() {
        let gamma = alloc.gammas.get(i).map_or("-".to_string(), |g| sig(*g, d));
        writeln!(
            out,
            "{:<8} {:<7} {:<8} {:<8} {}",
            i + 1,
            sig(*c, d),
            sig(kappa.values()[i], d),
            gamma,
            sig(alloc.payoffs[i], d)
        )?;
    }
    if let Some(p) = alloc.periodic_payment {
        writeln!(out, "periodic payment p  {}", sig(p, d))?;
    }
    writeln!(
        out,
        "payoffs valued at  {}",
        match alloc.valuation {
            crate::domain::Valuation::Maturity => "maturity (undiscounted)",
            crate::domain::Valuation::PresentValue => "time 0 (present value)",
        }
    )?;
    write_verification(report, out)
}

fn write_verification(r: &VerificationReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "verification  fairness residual {} (relative {})  simplex residual {}  tol {}  {}",
        sig(r.max_fairness_residual, REPORT_DIGITS),
        sig(r.relative_fairness_residual, REPORT_DIGITS),
        sig(r.simplex_residual, REPORT_DIGITS),
        sig(r.tolerance, REPORT_DIGITS),
        if r.pass { "PASS" } else { "FAIL" }
    )
}

/// Sweep rows `(ρ, γ_1, …)` at `steps` equally spaced values of `ρ`.
pub fn sweep_rows(
    spec: &ContractSpec,
    rho_from: f64,
    rho_to: f64,
    steps: usize,
) -> crate::error::Result<Vec<(f64, Vec<f64>)>> {
    if !(0.0 <= rho_from && rho_from < rho_to && rho_to <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= rho-from < rho-to <= 1, got {rho_from} and {rho_to}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    (0..steps)
        .map(|i| {
            let rho = if i == steps - 1 {
                rho_to
            } else {
                rho_from + (rho_to - rho_from) * i as f64 / (steps - 1) as f64
            };
            let alloc = ratio::allocate(spec, &RiskProfile::from_rho(rho, None)?)?;
            Ok((rho, alloc.gammas))
        })
        .collect()
}

/// RFC 4180 CSV with LF line endings and 12 significant digits.
pub fn write_sweep_csv(rows: &[(f64, Vec<f64>)], out: &mut dyn Write) -> std::io::Result<()> {
    let width = rows.first().map_or(0, |(_, g)| g.len());
    let mut header = String::from("rho");
    for i in 1..=width {
        header.push_str(&format!(",gamma_{i}"));
    }
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for (rho, gammas) in rows {
        let mut line = sig(*rho, CSV_DIGITS);
        for g in gammas {
            line.push(',');
            line.push_str(&sig(*g, CSV_DIGITS));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> CmdResult {
    let (_, spec) = load(&args.file)?;
    let rows = sweep_rows(&spec, args.rho_from, args.rho_to, args.steps)?;
    match &args.output {
        Some(path) => {
            let mut buf = Vec::new();
            write_sweep_csv(&rows, &mut buf)?;
            fs::write(path, buf)
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        }
        None => write_sweep_csv(&rows, out)?,
    }
    Ok(())
}

fn cmd_verify(
    args: &VerifyArgs,
    mc: Option<&McConfig>,
    tol: f64,
    json: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let (contract, spec) = load(&args.file)?;
    let profile = contract.profile(mc)?;
    let candidate = Allocation::candidate(args.gammas.clone(), args.p);
    let report = verify_allocation(&candidate, &spec, &profile, tol)?;
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        )?;
    } else {
        write_verification(&report, out)?;
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
