//! Command-line front end: sweep scenarios, run the built-in presets, and
//! export absorption or modulation-noise tables as CSV.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};

use thzqkd::atmosphere::{
    parse_hitran_records, save_spectrum_table, total_absorption_spectrum, builtin_water_lines,
    ContinuumCoefficients, MoistAir,
};
use thzqkd::error::{Error, Result};
use thzqkd::modnoise::{modulation_noise, worst_modulation_noise, CarrierPlan, ModulatorParams};
use thzqkd::scenarios::presets::{modulation_noise_preset, preset_groups, preset_scenarios};
use thzqkd::scenarios::{csv_string, parse_scenario, run_sweep, Scenario};

#[derive(Parser)]
#[command(
    name = "thzqkd",
    version,
    about = "Secret-key-rate simulator for multi-carrier CVQKD over terahertz links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one scenario described by a JSON file and write its CSV curve.
    Simulate {
        /// Path to the scenario JSON document.
        scenario: PathBuf,
        /// Directory receiving the CSV (and any cached spectrum tables).
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also emit one r_k_<k> column per subcarrier.
        #[arg(long)]
        wide: bool,
        /// Worker threads for the sweep (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a built-in preset family, one CSV per curve.
    Preset {
        /// Family or curve name, e.g. `fig4a` or `fig9_n12`.
        name: Option<String>,
        /// List the available families instead of running one.
        #[arg(long)]
        list: bool,
        /// Directory receiving the CSVs.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Tabulate the atmospheric absorption coefficient over a frequency band.
    #[command(group(ArgGroup::new("water").required(true).args(["rh", "pw"])))]
    Absorption {
        /// First grid frequency in Hz.
        #[arg(long)]
        start: f64,
        /// Last grid frequency in Hz (included when the step lands on it).
        #[arg(long)]
        stop: f64,
        /// Grid spacing in Hz.
        #[arg(long)]
        step: f64,
        /// Relative humidity in percent (alternative to --pw).
        #[arg(long)]
        rh: Option<f64>,
        /// Water-vapour partial pressure in Torr (alternative to --rh).
        #[arg(long)]
        pw: Option<f64>,
        /// Air temperature in kelvin.
        #[arg(long)]
        temp: f64,
        /// Spectral-line table in 160-column fixed-width format
        /// (default: the bundled water-vapour list).
        #[arg(long)]
        lines: Option<PathBuf>,
        /// Self-broadening continuum coefficient override.
        #[arg(long)]
        cs: Option<f64>,
        /// Foreign-broadening continuum coefficient override.
        #[arg(long)]
        cf: Option<f64>,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate per-subcarrier modulation noise for one frequency plan.
    Modnoise {
        /// Number of subcarriers.
        #[arg(long)]
        n: u32,
        /// Modulation index.
        #[arg(long)]
        mu: f64,
        /// I/Q amplitude imbalance.
        #[arg(long)]
        kappa: f64,
        /// I/Q phase imbalance in radians.
        #[arg(long)]
        theta: f64,
        /// Modulation variance in shot-noise units.
        #[arg(long)]
        vmod: f64,
        /// Intermediate frequency in Hz.
        #[arg(long)]
        fi: f64,
        /// Subcarrier spacing in Hz.
        #[arg(long)]
        df: f64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            e.print().expect("stderr is writable");
            std::process::exit(1);
        }
        Err(e) => {
            // --help and --version land here; clap prints to stdout.
            e.print().expect("stdout is writable");
            std::process::exit(0);
        }
    };
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate { scenario, out, wide, threads } => {
            if let Some(k) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global()
                    .expect("thread pool is configured before first use");
            }
            let bytes = fs::read(&scenario).map_err(|e| Error::io(scenario.clone(), e))?;
            let parsed = parse_scenario(&bytes)?;
            write_curve(&parsed, &out, wide)
        }
        Command::Preset { name, list, out } => {
            if list {
                for (group, description) in preset_groups() {
                    println!("{group:<8} {description}");
                }
                return Ok(());
            }
            let name = name.ok_or_else(|| {
                Error::validation("preset name required (or --list to see them)".to_string())
            })?;
            if name == "fig2" {
                return write_modulation_noise_family(&out);
            }
            let curves = preset_scenarios(&name);
            if curves.is_empty() {
                return Err(Error::validation(format!(
                    "unknown preset '{name}'; --list shows the available families"
                )));
            }
            for scenario in &curves {
                write_curve(scenario, &out, false)?;
            }
            Ok(())
        }
        Command::Absorption { start, stop, step, rh, pw, temp, lines, cs, cf, out } => {
            let air = match (rh, pw) {
                (Some(rh), None) => MoistAir::at_relative_humidity(rh, temp)?,
                (None, Some(pw)) => MoistAir::new(pw, 760.0 - pw, temp)?,
                _ => unreachable!("clap enforces exactly one of --rh/--pw"),
            };
            let parsed_lines;
            let lines = match lines {
                Some(path) => {
                    let text =
                        fs::read_to_string(&path).map_err(|e| Error::io(path.clone(), e))?;
                    parsed_lines = parse_hitran_records(&text)?;
                    &parsed_lines[..]
                }
                None => builtin_water_lines(),
            };
            let defaults = ContinuumCoefficients::default();
            let coeffs = ContinuumCoefficients {
                c_self: cs.unwrap_or(defaults.c_self),
                c_foreign: cf.unwrap_or(defaults.c_foreign),
            };
            let grid = frequency_grid(start, stop, step)?;
            let spectrum = total_absorption_spectrum(&grid, lines, &air, &coeffs)?;
            emit(out.as_deref(), save_spectrum_table(&spectrum))
        }
        Command::Modnoise { n, mu, kappa, theta, vmod, fi, df, out } => {
            let plan = CarrierPlan { f_i_hz: fi, delta_f_hz: df, n };
            let params =
                ModulatorParams { mu, a_sig: 1.0, kappa, theta_rad: theta, v_mod: vmod };
            plan.validate()?;
            params.validate()?;
            let mut csv = String::from("n,k,eps_mod_snu\n");
            for k in 1..=n {
                let eps = modulation_noise(&plan, &params, k)?;
                csv.push_str(&format!("{n},{k},{eps}\n"));
            }
            let (k_worst, eps_worst) = worst_modulation_noise(&plan, &params)?;
            csv.push_str(&format!("# worst_k={k_worst} eps_worst_snu={eps_worst}\n"));
            emit(out.as_deref(), csv)
        }
    }
}

/// Sweep one scenario and write `<out>/<name>.csv`, reporting the path.
fn write_curve(scenario: &Scenario, out: &Path, wide: bool) -> Result<()> {
    let result = run_sweep(scenario, Some(out))?;
    fs::create_dir_all(out).map_err(|e| Error::io(out.to_path_buf(), e))?;
    let path = out.join(format!("{}.csv", scenario.name));
    fs::write(&path, csv_string(&result, wide)).map_err(|e| Error::io(path.clone(), e))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// The channel-free preset: one per-subcarrier noise curve for each N, plus
/// a worst-case summary across the family.
fn write_modulation_noise_family(out: &Path) -> Result<()> {
    let preset = modulation_noise_preset();
    fs::create_dir_all(out).map_err(|e| Error::io(out.to_path_buf(), e))?;
    let mut summary = String::from("n,k_worst,eps_worst_snu\n");
    for &n in &preset.n_values {
        let plan = preset.plan(n);
        let mut csv = String::from("k,eps_mod_snu\n");
        for k in 1..=n {
            let eps = modulation_noise(&plan, &preset.modulator, k)?;
            csv.push_str(&format!("{k},{eps}\n"));
        }
        let path = out.join(format!("fig2_n{n}.csv"));
        fs::write(&path, csv).map_err(|e| Error::io(path.clone(), e))?;
        println!("wrote {}", path.display());
        let (k_worst, eps_worst) = worst_modulation_noise(&plan, &preset.modulator)?;
        summary.push_str(&format!("{n},{k_worst},{eps_worst}\n"));
    }
    let path = out.join("fig2_worst.csv");
    fs::write(&path, summary).map_err(|e| Error::io(path.clone(), e))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Ascending grid from `start` by `step`, ending at the last point that fits
/// at or before `stop` (with a small tolerance so a `stop` that lies exactly
/// on the grid survives rounding).
fn frequency_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start > 0.0) || !start.is_finite() {
        return Err(Error::validation(format!("--start must be > 0 Hz, got {start}")));
    }
    if !(stop >= start) || !stop.is_finite() {
        return Err(Error::validation(format!(
            "--stop must be at least --start, got {stop} (start {start})"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::validation(format!("--step must be > 0 Hz, got {step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn emit(path: Option<&Path>, content: String) -> Result<()> {
    match path {
        Some(path) => {
            fs::write(path, content).map_err(|e| Error::io(path.to_path_buf(), e))?;
            println!("wrote {}", path.display());
        }
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))?;
        }
    }
    Ok(())
}
