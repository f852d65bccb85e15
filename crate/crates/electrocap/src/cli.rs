//! Batch command-line front end: material presets, flat-file configuration
//! and deterministic CSV/JSON emission.
//!
//! Exit codes: 0 success, 2 no convergence, 3 above the limit potential,
//! 4 bad configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::droplet;
use crate::error::Error;
use crate::meniscus::{
    self, derive_problem, solve_tolman, MaterialPreset, MeniscusProfile,
};
use crate::tolman::TensionKind;
use crate::variational;

#[derive(Parser)]
#[command(
    name = "electrocap",
    about = "Equilibrium shapes of charged fluid interfaces with curvature-dependent surface tension",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct MaterialArgs {
    /// Material preset: large (R = 0.745 mm), small (R = 0.745 um) or custom.
    #[arg(long, default_value = "large")]
    preset: String,

    /// Flat `key = value` config file overriding preset parameters.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Numerical tolerance override for root finding.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized minimal radii of a charged drop vs potential (CSV).
    DropletTable {
        #[arg(long, default_value_t = droplet::KAPPA_DEFAULT)]
        kappa: f64,
        #[arg(long, default_value_t = droplet::RHO_N_DEFAULT)]
        rho_n: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Drop potentials in microvolts, comma-separated.
        #[arg(long, default_value = "0,0.1,0.3,0.5,1.0,2.0")]
        u0_list: String,
        #[arg(long, default_value = "droplet_table.csv")]
        out: PathBuf,
    },
    /// Solve one meniscus: profile CSV plus a JSON summary on stdout.
    Solve {
        #[command(flatten)]
        material: MaterialArgs,
        /// Potential drop in volts.
        #[arg(long)]
        u0: f64,
        /// Surface-tension law: g0 | g1 | g2 | g3.
        #[arg(long, default_value = "g0")]
        gamma: String,
        #[arg(long, default_value = "profile.csv")]
        out: PathBuf,
        /// Output format for the profile file.
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Tip heights over a grid of potentials and tension laws (CSV).
    Sweep {
        #[command(flatten)]
        material: MaterialArgs,
        /// Potentials in volts, comma-separated.
        #[arg(long)]
        u0_list: String,
        /// Tension laws, comma-separated (default: all four).
        #[arg(long, default_value = "g0,g1,g2,g3")]
        gamma: String,
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Largest potential admitting an equilibrium meniscus (JSON on stdout).
    Limit {
        #[command(flatten)]
        material: MaterialArgs,
        #[arg(long, default_value = "g0")]
        gamma: String,
        #[arg(long, default_value_t = 0.0)]
        u_lo: f64,
        #[arg(long, default_value_t = 10000.0)]
        u_hi: f64,
    },
    /// Variational (parabolic-trial) tip heights; optional calibration of
    /// the effective radius against the shooting solver (JSON on stdout).
    Variational {
        #[command(flatten)]
        material: MaterialArgs,
        /// Fit the effective radius to a shooting sweep over the potentials.
        #[arg(long)]
        calibrate: bool,
        #[arg(long, default_value = "0,1000,2000,3000,4000,5000")]
        u0_list: String,
        /// Effective radius R_eff/R used when not calibrating.
        #[arg(long, default_value_t = 0.31)]
        reff: f64,
    },
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e))
        }
    }
}

/// Run with explicit arguments; returns the process exit code. Used by the
/// integration tests.
pub fn run_from<I, S>(args: I) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match dispatch(cli.command) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                error_exit_code(&e)
            }
        },
        Err(e) => {
            eprintln!("{e}");
            4
        }
    }
}

fn error_exit_code(e: &Error) -> u8 {
    match e {
        Error::NoSolution | Error::NoInteriorMinimum => 3,
        Error::StepFailure { .. }
        | Error::Diverged { .. }
        | Error::NoBracket { .. }
        | Error::SingularTension { .. } => 2,
        _ => 4,
    }
}

fn dispatch(command: Command) -> crate::Result<()> {
    match command {
        Command::DropletTable {
            kappa,
            rho_n,
            alpha,
            u0_list,
            out,
        } => cmd_droplet_table(kappa, rho_n, alpha, &parse_list(&u0_list)?, &out),
        Command::Solve {
            material,
            u0,
            gamma,
            out,
            format,
        } => cmd_solve(&material, u0, &gamma, &out, &format),
        Command::Sweep {
            material,
            u0_list,
            gamma,
            out,
            format,
        } => cmd_sweep(&material, &parse_list(&u0_list)?, &gamma, &out, &format),
        Command::Limit {
            material,
            gamma,
            u_lo,
            u_hi,
        } => cmd_limit(&material, &gamma, u_lo, u_hi),
        Command::Variational {
            material,
            calibrate,
            u0_list,
            reff,
        } => cmd_variational(&material, calibrate, &parse_list(&u0_list)?, reff),
    }
}

fn parse_list(s: &str) -> crate::Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::ConfigError(format!("bad number `{tok}` in list")))
        })
        .collect()
}

fn parse_kinds(s: &str) -> crate::Result<Vec<TensionKind>> {
    s.split(',')
        .map(|tok| TensionKind::from_label(tok.trim()))
        .collect()
}

/// Resolve the material parameters from a preset name plus optional config
/// file overrides.
fn resolve_preset(args: &MaterialArgs) -> crate::Result<MaterialPreset> {
    let mut preset = match args.preset.as_str() {
        "large" => MaterialPreset::large(),
        // Custom starts from the large defaults; the config file supplies
        // the intended values.
        "small" => MaterialPreset::small(),
        "custom" => MaterialPreset::large(),
        other => {
            return Err(Error::ConfigError(format!(
                "unknown preset `{other}` (expected large|small|custom)"
            )))
        }
    };
    if let Some(path) = &args.config {
        apply_config_file(&mut preset, path)?;
    }
    preset.validate()?;
    Ok(preset)
}

fn apply_config_file(preset: &mut MaterialPreset, path: &Path) -> crate::Result<()> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::ConfigError(format!("cannot read {}: {e}", path.display())))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::ConfigError(format!("line {}: expected key = value", lineno + 1)))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::ConfigError(format!("line {}: bad number", lineno + 1)))?;
        match key.trim() {
            "gamma0_N_per_m" => preset.gamma0 = value,
            "rho_kg_per_m3" => preset.rho_l = value,
            "H_m" => preset.h_head = value,
            "d_m" => preset.d_plate = value,
            "R_m" => preset.r_cap = value,
            "R0_m" => preset.r0 = value,
            "epsilon_F_per_m" => preset.epsilon = value,
            "g_m_per_s2" => preset.g_accel = value,
            "alpha" => preset.alpha = value,
            other => {
                return Err(Error::ConfigError(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(())
}

/// Six significant digits, fixed-point where reasonable.
fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

fn write_file(path: &Path, contents: &str) -> crate::Result<()> {
    fs::write(path, contents)
        .map_err(|e| Error::ConfigError(format!("cannot write {}: {e}", path.display())))
}

fn cmd_droplet_table(
    kappa: f64,
    rho_n: f64,
    alpha: f64,
    u_list: &[f64],
    out: &Path,
) -> crate::Result<()> {
    let rows = droplet::rmin_table(u_list, kappa, rho_n, alpha)?;
    let mut csv = String::from("U_microvolts,x_gamma0,x_gamma1,x_gamma2\n");
    for row in &rows {
        writeln!(
            csv,
            "{},{},{},{}",
            format_sig(row.u),
            format_sig(row.x_constant),
            format_sig(row.x_exponential),
            format_sig(row.x_tanh_increasing)
        )
        .unwrap();
    }
    write_file(out, &csv)?;
    println!("wrote {} ({} rows)", out.display(), rows.len());
    Ok(())
}

#[derive(Serialize)]
struct SolveSummary {
    z_m: f64,
    residual: f64,
    converged: bool,
    tolman_iterations: usize,
    #[serde(rename = "U0_volts")]
    u0_volts: f64,
    kind: String,
}

fn profile_csv(profile: &MeniscusProfile) -> String {
    let mut csv = String::from("r,z,dz_dr,sigma_hat,gamma_hat\n");
    for s in &profile.samples {
        writeln!(
            csv,
            "{},{},{},{},{}",
            format_sig(s.r),
            format_sig(s.z),
            format_sig(s.dz_dr),
            format_sig(s.sigma_hat),
            format_sig(s.gamma_hat)
        )
        .unwrap();
    }
    csv
}

fn cmd_solve(
    material: &MaterialArgs,
    u0: f64,
    gamma: &str,
    out: &Path,
    format: &str,
) -> crate::Result<()> {
    let preset = resolve_preset(material)?;
    let kind = TensionKind::from_label(gamma)?;
    let problem = derive_problem(&preset, u0, kind)?;
    let (profile, report) = solve_tolman(&problem)?;
    if profile.z_m > 1.0 + 1e-6 {
        return Err(Error::NoSolution);
    }
    profile.validate()?;
    match format {
        "csv" => write_file(out, &profile_csv(&profile))?,
        "json" => {
            let rows: Vec<_> = profile
                .samples
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "r": s.r, "z": s.z, "dz_dr": s.dz_dr,
                        "sigma_hat": s.sigma_hat, "gamma_hat": s.gamma_hat
                    })
                })
                .collect();
            write_file(out, &serde_json::to_string_pretty(&rows).unwrap())?;
        }
        other => {
            return Err(Error::ConfigError(format!(
                "unknown format `{other}` (expected csv|json)"
            )))
        }
    }
    let summary = SolveSummary {
        z_m: profile.z_m,
        residual: profile.residual,
        converged: report.converged,
        tolman_iterations: report.tolman_iterations,
        u0_volts: u0,
        kind: kind.label().to_string(),
    };
    println!("{}", serde_json::to_string(&summary).unwrap());
    Ok(())
}

fn cmd_sweep(
    material: &MaterialArgs,
    u_list: &[f64],
    gamma: &str,
    out: &Path,
    format: &str,
) -> crate::Result<()> {
    let preset = resolve_preset(material)?;
    let kinds = parse_kinds(gamma)?;
    let table = meniscus::sweep(&preset, u_list, &kinds)?;

    let mut header = String::from("U0_volts");
    for kind in &table.kinds {
        write!(header, ",zm_gamma{}", &kind.label()[1..]).unwrap();
    }
    let mut csv = header.clone();
    csv.push('\n');
    let mut any_ok = false;
    for (i, &u) in table.u_list.iter().enumerate() {
        let mut line = format_sig(u);
        for cell in &table.cells[i] {
            line.push(',');
            if let Some(zm) = cell {
                any_ok = true;
                line.push_str(&format_sig(*zm));
            }
        }
        csv.push_str(&line);
        csv.push('\n');
    }
    match format {
        "csv" => write_file(out, &csv)?,
        "json" => {
            let rows: Vec<_> = table
                .u_list
                .iter()
                .enumerate()
                .map(|(i, &u)| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("U0_volts".into(), u.into());
                    for (j, kind) in table.kinds.iter().enumerate() {
                        let key = format!("zm_gamma{}", &kind.label()[1..]);
                        obj.insert(
                            key,
                            table.cells[i][j].map(serde_json::Value::from).unwrap_or(
                                serde_json::Value::Null,
                            ),
                        );
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            write_file(out, &serde_json::to_string_pretty(&rows).unwrap())?;
        }
        other => {
            return Err(Error::ConfigError(format!(
                "unknown format `{other}` (expected csv|json)"
            )))
        }
    }
    if !u_list.is_empty() && !any_ok {
        return Err(Error::NoSolution);
    }
    println!("wrote {} ({} rows)", out.display(), u_list.len());
    Ok(())
}

#[derive(Serialize)]
struct LimitSummary {
    #[serde(rename = "U_lim_volts")]
    u_lim_volts: f64,
    z_m_at_limit: f64,
}

fn cmd_limit(material: &MaterialArgs, gamma: &str, u_lo: f64, u_hi: f64) -> crate::Result<()> {
    let preset = resolve_preset(material)?;
    let kind = TensionKind::from_label(gamma)?;
    let (u_lim, zm) = meniscus::limit_potential(&preset, kind, u_lo, u_hi)?;
    let summary = LimitSummary {
        u_lim_volts: u_lim,
        z_m_at_limit: zm,
    };
    println!("{}", serde_json::to_string(&summary).unwrap());
    Ok(())
}

#[derive(Serialize)]
struct VariationalPoint {
    #[serde(rename = "U0_volts")]
    u0_volts: f64,
    /// `null` above the variational limit potential (no interior minimum).
    zm_var: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zm_shoot: Option<f64>,
}

#[derive(Serialize)]
struct VariationalSummary {
    reff_hat: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rms_error: Option<f64>,
    curve: Vec<VariationalPoint>,
}

fn cmd_variational(
    material: &MaterialArgs,
    calibrate: bool,
    u_list: &[f64],
    reff: f64,
) -> crate::Result<()> {
    let preset = resolve_preset(material)?;
    let derive = |u: f64| derive_problem(&preset, u, TensionKind::Constant);
    let summary = if calibrate {
        if u_list.len() < 2 {
            return Err(Error::DegenerateFit(
                "calibration needs at least two potentials".into(),
            ));
        }
        let mut shoot_curve = Vec::with_capacity(u_list.len());
        let mut seed = None;
        for &u in u_list {
            let (profile, _) = meniscus::solve_tolman_seeded(&derive(u)?, seed)?;
            seed = Some(profile.z_m);
            shoot_curve.push((u, profile.z_m));
        }
        let cal = variational::calibrate_reff(&shoot_curve, derive)?;
        let curve = shoot_curve
            .iter()
            .map(|&(u, zm_shoot)| {
                Ok(VariationalPoint {
                    u0_volts: u,
                    zm_var: variational::minimize_energy(&derive(u)?, cal.reff_hat).ok(),
                    zm_shoot: Some(zm_shoot),
                })
            })
            .collect::<crate::Result<Vec<_>>>()?;
        VariationalSummary {
            reff_hat: cal.reff_hat,
            rms_error: Some(cal.rms_error),
            curve,
        }
    } else {
        let curve = u_list
            .iter()
            .map(|&u| {
                Ok(VariationalPoint {
                    u0_volts: u,
                    zm_var: Some(variational::minimize_energy(&derive(u)?, reff)?),
                    zm_shoot: None,
                })
            })
            .collect::<crate::Result<Vec<_>>>()?;
        VariationalSummary {
            reff_hat: reff,
            rms_error: None,
            curve,
        }
    };
    println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    Ok(())
}
