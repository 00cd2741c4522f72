use std::path::{Path, PathBuf};
use std::process::ExitCode;

use allmach::commands::{self, Riemann1dArgs, StabilityArgs, SweepArgs};
use allmach::config::{load_config, parse_config_with};
use allmach::output::prepare_dir;
use allmach_core::analysis::{Amplitudes, Difference, PerturbationSetup, TransverseBoundary};
use allmach_core::cases::CASE_NAMES;
use allmach_core::flux::{CoefficientOverrides, CoefficientStrategy, SchemeConfig};
use allmach_core::reconstruct::ReconstructionConfig;
use allmach_core::solver::TimeIntegrator;
use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};

/// HLL-family all-Mach Euler solver.
#[derive(Parser)]
#[command(version = allmach::BUILD_ID, about)]
struct Cli {
    /// Directory that relative output paths are placed under.
    #[arg(long, global = true, env = allmach::OUTPUT_ROOT_VAR)]
    output_root: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a case and write snapshots, metrics and the residual history.
    ///
    /// Settings come from the run file (all keys optional; an empty or
    /// missing file runs `sod` with `hllem_fp`), then the flags, then
    /// `--override key=value` settings. See the repository README for the keys.
    Run {
        /// TOML run file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Preset case name.
        #[arg(long)]
        case: Option<String>,
        /// Flux scheme name.
        #[arg(long)]
        scheme: Option<String>,
        /// Spatial order: 1 (piecewise constant) or 2 (MUSCL, van Leer).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: Option<u8>,
        /// Extra `key=value` settings, e.g. `--override iterations=500`.
        #[arg(long = "override", visible_alias = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Print progress every N iterations (0 disables).
        #[arg(long, default_value_t = 1000)]
        progress: usize,
    },
    /// Largest real eigenvalue of the steady-shock stability matrix per scheme and Mach number.
    Stability {
        #[arg(long, value_delimiter = ',', default_value = "hlle,hllem_park,hllem_fp")]
        schemes: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,10,15,20")]
        mach: Vec<f64>,
        #[arg(long, default_value_t = 11)]
        ni: usize,
        #[arg(long, default_value_t = 11)]
        nj: usize,
        /// Top/bottom boundary of the stability domain.
        #[arg(long, value_enum, default_value_t = Transverse::Periodic)]
        transverse: Transverse,
        /// Finite-difference stencil of the Jacobian.
        #[arg(long, value_enum, default_value_t = Stencil::Central)]
        difference: Stencil,
        /// Seeded random perturbation amplitude of the base state.
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "output")]
        out: PathBuf,
    },
    /// Shock tube against the exact Riemann solution.
    Riemann1d {
        #[arg(long, default_value = "severe_shock_tube")]
        case: String,
        #[arg(long, default_value = "hllem")]
        scheme: String,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
        order: u8,
        /// Force the face-normal anti-diffusion coefficient.
        #[arg(long)]
        delta_n: Option<f64>,
        #[arg(long, default_value = "output")]
        out: PathBuf,
    },
    /// One-step saw-tooth perturbation factors for the four low-dissipation schemes.
    Perturb {
        /// Acoustic CFL number a dt / dy.
        #[arg(long, default_value_t = 0.2)]
        nu: f64,
        /// Mean shear velocity.
        #[arg(long, default_value_t = 0.0)]
        u0: f64,
        /// Forced sensor values for the FP schemes.
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1")]
        fp1: Vec<f64>,
        #[arg(long, default_value = "output")]
        out: PathBuf,
    },
    /// Low-Mach cylinder pressure fluctuation over a Mach ladder, with log-log slopes.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "hllem_fp,hllcps_fp,hllem,hllcps")]
        schemes: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001")]
        mach: Vec<f64>,
        #[arg(long)]
        end_time: Option<f64>,
        #[arg(long, value_enum, default_value_t = Integrator::Euler)]
        integrator: Integrator,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "output")]
        out: PathBuf,
    },
    /// List presets, or print one as a case file.
    Cases { name: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum Transverse {
    Periodic,
    ZeroGradient,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stencil {
    Central,
    Forward,
}

#[derive(Clone, Copy, ValueEnum)]
enum Integrator {
    Euler,
    Rk2,
}

fn schemes(names: &[String]) -> Result<Vec<CoefficientStrategy>> {
    names.iter().map(|n| Ok(CoefficientStrategy::from_name(n)?)).collect()
}

fn order(order: u8) -> ReconstructionConfig {
    if order == 2 {
        ReconstructionConfig::MUSCL_VAN_LEER
    } else {
        ReconstructionConfig::FIRST_ORDER
    }
}

fn emit(table: &allmach::output::CsvTable, dir: &Path, name: &str) -> Result<()> {
    let path = dir.join(name);
    table.write(&path)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    let root = cli.output_root.as_deref();
    match cli.command {
        Command::Run {
            config,
            case,
            scheme,
            order,
            set,
            progress,
        } => {
            let mut overrides = Vec::new();
            if let Some(c) = case {
                overrides.push(format!("case={c}"));
            }
            if let Some(s) = scheme {
                overrides.push(format!("scheme={s}"));
            }
            if let Some(o) = order {
                overrides.push(format!("reconstruction.order={}", if o == 2 { "muscl" } else { "first" }));
            }
            overrides.extend(set);
            let cfg = match &config {
                Some(path) => load_config(path, &overrides)?,
                None => parse_config_with("", &overrides)?,
            };
            eprintln!(
                "running {} with {} ({:?}, stop {:?})",
                cfg.case.name,
                cfg.scheme_name(),
                cfg.solver.reconstruction.order,
                cfg.case.stop
            );
            let out = commands::run(&cfg, root, |info| {
                if progress > 0 && info.iteration % progress == 0 {
                    eprintln!("  it {:>7}  t {:.6e}  residual {:.3e}", info.iteration, info.time, info.residual_rho);
                }
            })?;
            let s = &out.outcome.summary;
            println!("case={} scheme={} iterations={} time={:e} stop={:?}", cfg.case.name, cfg.scheme_name(), s.iterations, s.time, s.reason);
            for (name, v) in &out.outcome.report.metrics {
                println!("{name}={v:e}");
            }
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
        }
        Command::Stability {
            schemes: names,
            mach,
            ni,
            nj,
            transverse,
            difference,
            noise,
            seed,
            jobs,
            out,
        } => {
            let args = StabilityArgs {
                schemes: schemes(&names)?,
                machs: mach,
                ni,
                nj,
                transverse: match transverse {
                    Transverse::Periodic => TransverseBoundary::Periodic,
                    Transverse::ZeroGradient => TransverseBoundary::ZeroGradient,
                },
                difference: match difference {
                    Stencil::Central => Difference::Central,
                    Stencil::Forward => Difference::Forward,
                },
                noise,
                seed,
                jobs,
            };
            let rows = commands::stability(&args)?;
            let table = commands::stability_table(&rows, &args);
            print!("{}", table.as_str());
            emit(&table, &prepare_dir(root, &out)?, "stability.csv")?;
        }
        Command::Riemann1d {
            case,
            scheme,
            cells,
            order: o,
            delta_n,
            out,
        } => {
            let strategy = CoefficientStrategy::from_name(&scheme)?;
            let mut args = Riemann1dArgs {
                case: allmach::presets::preset(&case)?,
                scheme: SchemeConfig::new(strategy).with_overrides(CoefficientOverrides {
                    delta_n,
                    ..Default::default()
                }),
                reconstruction: order(o),
                integrator: TimeIntegrator::Rk2,
            };
            if let Some(n) = cells {
                args = args.with_cells(n)?;
            }
            let (outcome, cmp) = commands::riemann1d(&args)?;
            let (profile, metrics) = commands::riemann1d_tables(&args, &outcome, &cmp);
            print!("{}", metrics.as_str());
            let dir = prepare_dir(root, &out)?;
            let stem = format!("{}_{}", args.case.name, strategy.name());
            emit(&profile, &dir, &format!("{stem}_profile.csv"))?;
            emit(&metrics, &dir, &format!("{stem}_metrics.csv"))?;
        }
        Command::Perturb { nu, u0, fp1, out } => {
            let setup = PerturbationSetup {
                nu,
                u0,
                amplitudes: Amplitudes { ..PerturbationSetup::default().amplitudes },
                fp1: None,
            };
            let runs = commands::perturb(&setup, &fp1)?;
            let table = commands::perturb_table(&runs, &setup);
            print!("{}", table.as_str());
            emit(&table, &prepare_dir(root, &out)?, "perturbation.csv")?;
        }
        Command::Sweep {
            schemes: names,
            mach,
            end_time,
            integrator,
            jobs,
            out,
        } => {
            let args = SweepArgs {
                schemes: schemes(&names)?,
                machs: mach,
                end_time,
                integrator: match integrator {
                    Integrator::Euler => TimeIntegrator::Euler,
                    Integrator::Rk2 => TimeIntegrator::Rk2,
                },
                jobs,
            };
            let (points, slopes) = commands::sweep(&args)?;
            let (p, s) = commands::sweep_tables(&points, &slopes, &args);
            print!("{}", s.as_str());
            let dir = prepare_dir(root, &out)?;
            emit(&p, &dir, "sweep.csv")?;
            emit(&s, &dir, "sweep_slopes.csv")?;
        }
        Command::Cases { name: None } => {
            for n in CASE_NAMES {
                println!("{n}");
            }
        }
        Command::Cases { name: Some(n) } => {
            print!("{}", allmach::presets::preset_text(&n)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
