//! `chn-twist`: command-line driver for the twisted-form toolkit.
//!
//! Four subcommands: `verify` (the full check suite), `flow` (RK4 magnetic
//! or geodesic trajectories), `contact-scan` (boundary verdicts for one
//! (a, b) pair or the full grid), and `curvature-check` (FD curvature
//! oracle). Reports are deterministic: identical config + seed produce
//! byte-identical output. Exit codes: 0 all-pass, 1 check failure,
//! 2 usage/config error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use chn_twist::checks::{self, CheckResult};
use chn_twist::contact::{self, ContactReport, ContactVerdict};
use chn_twist::dynamics::{self, FlowMode, Trajectory, TrajectoryStatus};
use chn_twist::model::{self, CurvatureMode};
use chn_twist::sample::Sampler;
use chn_twist::sasaki::PhasePoint;
use chn_twist::ModelParams;

/// Levels scanned on each axis of the (a, b) grid, as multiples of c.
const GRID_FACTORS: [f64; 7] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.75, 2.5];

/// Per-level sample cap in grid mode, keeping the 98-report scan fast.
const GRID_SAMPLE_CAP: usize = 25;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "chn-twist",
    version,
    about = "Twisted symplectic forms on tangent bundles of complex hyperbolic space: \
             verification suite, magnetic flow, and contact boundary scans"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full verification suite and report one record per check.
    ///
    /// Note: for n ≥ 2 the `symplectic_det_critical` check fails by
    /// measurement — the assembled two-form is degenerate on the level
    /// ‖v‖² = c (det ω = (1 − c/‖v‖²)^{2n−2}) — so the command exits 1.
    Verify(CommonArgs),
    /// Integrate one seeded trajectory of the magnetic (or geodesic) flow.
    Flow(FlowArgs),
    /// Evaluate contact-type verdicts for one (a, b) pair or the full grid.
    ContactScan(ContactArgs),
    /// Cross-check the closed-form curvature against finite differences.
    CurvatureCheck(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Complex dimension n (real dimension 2n).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Holomorphic sectional curvature magnitude: the model has K_hol = −c.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Seed for the command's random stream.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sample count per check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Finite-difference step for oracle comparisons.
    #[arg(long = "fd-step", default_value_t = 1e-5)]
    fd_step: f64,
    /// Tolerance for finite-difference agreements.
    #[arg(long = "tol-fd", default_value_t = 1e-5)]
    tol_fd: f64,
    /// Tolerance for exact identities.
    #[arg(long = "tol-exact", default_value_t = 1e-10)]
    tol_exact: f64,
    /// Output file path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: json, except `flow` which defaults to csv).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct FlowArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Integration step.
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Total integration time.
    #[arg(long = "T", default_value_t = 10.0)]
    t_total: f64,
    /// Kinetic energy ‖v‖² of the start state (default 0.25·c).
    #[arg(long)]
    energy: Option<f64>,
    /// Which force law to integrate.
    #[arg(long, value_enum, default_value_t = CliMode::Magnetic)]
    mode: CliMode,
}

#[derive(Args)]
struct ContactArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Inner boundary level ‖v‖² = a (with --b: single-pair mode).
    #[arg(long)]
    a: Option<f64>,
    /// Outer boundary level ‖v‖² = b (with --a: single-pair mode).
    #[arg(long)]
    b: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum CliMode {
    Magnetic,
    Geodesic,
}

impl From<CliMode> for FlowMode {
    fn from(m: CliMode) -> Self {
        match m {
            CliMode::Magnetic => FlowMode::Magnetic,
            CliMode::Geodesic => FlowMode::Geodesic,
        }
    }
}

impl CommonArgs {
    fn params(&self) -> anyhow::Result<ModelParams> {
        let mut params = ModelParams::new(self.n, self.c)?;
        params.fd_step = self.fd_step;
        params.tol_fd = self.tol_fd;
        params.tol_exact = self.tol_exact;
        params.validate()?;
        if self.samples == 0 {
            anyhow::bail!("--samples must be at least 1");
        }
        Ok(params)
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit(&self, content: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, content)?,
            None => print!("{content}"),
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Verify(args) => cmd_verify(&args),
        Cmd::Flow(args) => cmd_flow(&args),
        Cmd::ContactScan(args) => cmd_contact_scan(&args),
        Cmd::CurvatureCheck(args) => cmd_curvature_check(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

// ---------------------------------------------------------------------------
// verify

#[derive(Serialize)]
struct VerifyReport {
    schema_version: u32,
    command: &'static str,
    n: usize,
    c: f64,
    seed: u64,
    samples: usize,
    fd_step: f64,
    tol_fd: f64,
    tol_exact: f64,
    all_pass: bool,
    checks: Vec<CheckResult>,
}

fn cmd_verify(args: &CommonArgs) -> anyhow::Result<u8> {
    let params = args.params()?;
    let results = checks::run_verify_suite(&params, args.seed, args.samples)?;
    let all_pass = checks::all_pass(&results);
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        n: args.n,
        c: args.c,
        seed: args.seed,
        samples: args.samples,
        fd_step: args.fd_step,
        tol_fd: args.tol_fd,
        tol_exact: args.tol_exact,
        all_pass,
        checks: results,
    };
    let content = match args.format_or(Format::Json) {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut out = String::from("id,samples,value,tolerance,kind,pass\n");
            for r in &report.checks {
                let kind = match r.kind {
                    checks::CheckKind::ResidualBelow => "residual_below",
                    checks::CheckKind::MagnitudeAbove => "magnitude_above",
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.id, r.samples, r.value, r.tolerance, kind, r.pass
                )?;
            }
            out
        }
    };
    args.emit(&content)?;
    Ok(if all_pass { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// flow

#[derive(Serialize)]
struct FlowReport {
    schema_version: u32,
    command: &'static str,
    n: usize,
    c: f64,
    seed: u64,
    dt: f64,
    t_total: f64,
    energy: f64,
    mode: FlowMode,
    status: TrajectoryStatus,
    energy_drift: f64,
    samples: Vec<dynamics::TrajectorySample>,
}

fn cmd_flow(args: &FlowArgs) -> anyhow::Result<u8> {
    let params = args.common.params()?;
    let energy = args.energy.unwrap_or(0.25 * params.c);
    if !(energy > 0.0 && energy.is_finite()) {
        anyhow::bail!("--energy must be finite and positive, got {energy}");
    }
    let mut sampler = Sampler::new(params, args.common.seed)?;
    let x0 = sampler.base_point_within(0.3);
    let v0 = sampler.unit_tangent(&x0)? * energy.sqrt();
    let start = PhasePoint::new(x0, v0)?;
    let traj = dynamics::integrate_flow(&params, &start, args.mode.into(), args.dt, args.t_total)?;

    let content = match args.common.format_or(Format::Csv) {
        Format::Csv => flow_csv(args, &params, energy, &traj)?,
        Format::Json => {
            let report = FlowReport {
                schema_version: SCHEMA_VERSION,
                command: "flow",
                n: params.n,
                c: params.c,
                seed: args.common.seed,
                dt: args.dt,
                t_total: args.t_total,
                energy,
                mode: args.mode.into(),
                status: traj.status,
                energy_drift: traj.energy_drift,
                samples: traj.samples,
            };
            to_json(&report)?
        }
    };
    args.common.emit(&content)?;
    Ok(0)
}

fn flow_csv(
    args: &FlowArgs,
    params: &ModelParams,
    energy: f64,
    traj: &Trajectory,
) -> anyhow::Result<String> {
    let d = params.real_dim();
    let mode = match traj.mode {
        FlowMode::Magnetic => "magnetic",
        FlowMode::Geodesic => "geodesic",
    };
    let mut out = String::new();
    writeln!(
        out,
        "# chn-twist flow n={} c={} seed={} dt={} T={} energy={} mode={}",
        params.n, params.c, args.common.seed, args.dt, args.t_total, energy, mode
    )?;
    let xs: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
    let vs: Vec<String> = (0..d).map(|i| format!("v{i}")).collect();
    writeln!(out, "t,{},{},energy,drift", xs.join(","), vs.join(","))?;
    let e0 = traj.samples.first().map_or(energy, |s| s.energy);
    for s in &traj.samples {
        let xs: Vec<String> = s.x.iter().map(|v| v.to_string()).collect();
        let vs: Vec<String> = s.v.iter().map(|v| v.to_string()).collect();
        writeln!(
            out,
            "{},{},{},{},{}",
            s.t,
            xs.join(","),
            vs.join(","),
            s.energy,
            format_args!("{:e}", (s.energy - e0).abs())
        )?;
    }
    match traj.status {
        TrajectoryStatus::Completed => {
            writeln!(out, "# status=completed energy_drift={:e}", traj.energy_drift)?
        }
        TrajectoryStatus::Truncated { t } => writeln!(
            out,
            "# status=truncated t={t} energy_drift={:e} (base point reached the domain guard)",
            traj.energy_drift
        )?,
        TrajectoryStatus::NonFinite { t } => writeln!(
            out,
            "# status=non_finite t={t} energy_drift={:e}",
            traj.energy_drift
        )?,
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// contact-scan

#[derive(Serialize)]
struct ContactSingleReport {
    schema_version: u32,
    command: &'static str,
    mode: &'static str,
    report: ContactReport,
}

#[derive(Serialize)]
struct GridMismatch {
    a: f64,
    b: f64,
    expected_contact: bool,
    verdict: ContactVerdict,
}

#[derive(Serialize)]
struct ContactGridReport {
    schema_version: u32,
    command: &'static str,
    mode: &'static str,
    n: usize,
    c: f64,
    seed: u64,
    samples_per_level: usize,
    grid_values: Vec<f64>,
    grid_consistent: bool,
    mismatches: Vec<GridMismatch>,
    reports: Vec<ContactReport>,
}

fn cmd_contact_scan(args: &ContactArgs) -> anyhow::Result<u8> {
    let params = args.common.params()?;
    match (args.a, args.b) {
        (Some(a), Some(b)) => {
            let report =
                contact::contact_report(&params, a, b, args.common.samples, args.common.seed)?;
            let wrapped = ContactSingleReport {
                schema_version: SCHEMA_VERSION,
                command: "contact_scan",
                mode: "single",
                report,
            };
            let content = match args.common.format_or(Format::Json) {
                Format::Json => to_json(&wrapped)?,
                Format::Csv => contact_csv(std::slice::from_ref(&wrapped.report), params.c),
            };
            args.common.emit(&content)?;
            Ok(0)
        }
        (None, None) => {
            let samples = args.common.samples.min(GRID_SAMPLE_CAP);
            let values: Vec<f64> = GRID_FACTORS.iter().map(|f| f * params.c).collect();
            let mut reports = Vec::new();
            let mut mismatches = Vec::new();
            for (i, &a) in values.iter().enumerate() {
                for (j, &b) in values.iter().enumerate() {
                    let seed = args
                        .common
                        .seed
                        .wrapping_add(((i * values.len() + j) as u64).wrapping_mul(0x9E37));
                    let report = contact::contact_report(&params, a, b, samples, seed)?;
                    let expected_contact = a < params.c && params.c < b;
                    let got_contact = report.verdict == ContactVerdict::ContactDisconnected;
                    if expected_contact != got_contact {
                        mismatches.push(GridMismatch {
                            a,
                            b,
                            expected_contact,
                            verdict: report.verdict,
                        });
                    }
                    reports.push(report);
                }
            }
            let grid_consistent = mismatches.is_empty();
            let wrapped = ContactGridReport {
                schema_version: SCHEMA_VERSION,
                command: "contact_scan",
                mode: "grid",
                n: params.n,
                c: params.c,
                seed: args.common.seed,
                samples_per_level: samples,
                grid_values: values,
                grid_consistent,
                mismatches,
                reports,
            };
            let content = match args.common.format_or(Format::Json) {
                Format::Json => to_json(&wrapped)?,
                Format::Csv => contact_csv(&wrapped.reports, params.c),
            };
            args.common.emit(&content)?;
            Ok(if grid_consistent { 0 } else { 1 })
        }
        _ => anyhow::bail!("--a and --b must be given together (or both omitted for grid mode)"),
    }
}

fn contact_csv(reports: &[ContactReport], c: f64) -> String {
    let mut out =
        String::from("a,b,n,c,verdict,max_dalpha_dev,max_dhx_identity_dev,expected_contact,matches\n");
    for r in reports {
        let verdict = match r.verdict {
            ContactVerdict::ContactDisconnected => "contact_disconnected",
            ContactVerdict::Degenerate => "degenerate",
            ContactVerdict::Fails => "fails",
        };
        let expected = r.a < c && c < r.b;
        let got = r.verdict == ContactVerdict::ContactDisconnected;
        let dalpha = r.max_dalpha_dev.map_or(String::new(), |v| format!("{v:e}"));
        let dhx = r.max_dhx_identity_dev.map_or(String::new(), |v| format!("{v:e}"));
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.a,
            r.b,
            r.n,
            r.c,
            verdict,
            dalpha,
            dhx,
            expected,
            expected == got
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// curvature-check

#[derive(Serialize)]
struct CurvatureReport {
    schema_version: u32,
    command: &'static str,
    n: usize,
    c: f64,
    seed: u64,
    samples: usize,
    fd_step: f64,
    tol_fd: f64,
    max_rel_dev: f64,
    max_hsc_dev: f64,
    pass: bool,
}

fn cmd_curvature_check(args: &CommonArgs) -> anyhow::Result<u8> {
    let params = args.params()?;
    let mut sampler = Sampler::new(params, args.seed)?;
    let numeric = model::CurvatureEval { mode: CurvatureMode::Numeric, params };
    let algebraic = model::CurvatureEval { mode: CurvatureMode::Algebraic, params };
    let j = model::complex_structure(&params);
    // Keep base points far enough inside the ball that x ± fd_step stays
    // within the FD domain even for deliberately coarse steps.
    let rmax = (0.95 - params.fd_step).clamp(0.1, 0.6);
    let mut max_rel_dev = 0.0f64;
    let mut max_hsc_dev = 0.0f64;
    for _ in 0..args.samples {
        let x = sampler.base_point_within(rmax);
        let (a, b, z, w) = (
            sampler.tangent(),
            sampler.tangent(),
            sampler.tangent(),
            sampler.tangent(),
        );
        let num = numeric.eval(&x, &a, &b, &z, &w)?;
        let alg = algebraic.eval(&x, &a, &b, &z, &w)?;
        max_rel_dev = max_rel_dev.max((num - alg).abs() / alg.abs().max(1.0));

        let u = sampler.unit_tangent(&x)?;
        let ju = &j * &u;
        let hol = numeric.eval(&x, &u, &ju, &u, &ju)?;
        max_hsc_dev = max_hsc_dev.max((hol + params.c).abs());
    }
    let pass = max_rel_dev < params.tol_fd && max_hsc_dev < params.tol_fd;
    let report = CurvatureReport {
        schema_version: SCHEMA_VERSION,
        command: "curvature_check",
        n: params.n,
        c: params.c,
        seed: args.seed,
        samples: args.samples,
        fd_step: params.fd_step,
        tol_fd: params.tol_fd,
        max_rel_dev,
        max_hsc_dev,
        pass,
    };
    let content = match args.format_or(Format::Json) {
        Format::Json => to_json(&report)?,
        Format::Csv => format!(
            "n,c,seed,samples,fd_step,tol_fd,max_rel_dev,max_hsc_dev,pass\n{},{},{},{},{},{},{},{},{}\n",
            report.n,
            report.c,
            report.seed,
            report.samples,
            report.fd_step,
            report.tol_fd,
            report.max_rel_dev,
            report.max_hsc_dev,
            report.pass
        ),
    };
    args.emit(&content)?;
    Ok(if pass { 0 } else { 1 })
}

// ---------------------------------------------------------------------------

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
