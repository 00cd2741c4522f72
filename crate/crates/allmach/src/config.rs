//! Run configuration files.
//!
//! A run file is TOML. Every key is optional and unknown keys are rejected;
//! an empty file runs the `sod` preset with `hllem_fp`.
//!
//! ```toml
//! case = "blunt_body"          # preset name, see `allmach cases`
//! # case_file = "my_case.toml" # full case definition instead of a preset
//! # mach = 0.01                # free-stream Mach, low_mach_cylinder only
//! scheme = "hllem_fp"
//! # averaging = "roe"          # anti-diffusion average: "roe" or "arithmetic";
//!                              # default roe, arithmetic for the hllcps family
//! # speed_averaging = "roe"    # average inside the Einfeldt wave speeds
//! integrator = "rk2"           # or "euler"
//! state_policy = "strict"      # or "floor"
//! # cfl = 0.5                  # default: the case's CFL
//! # end_time = 0.2             # replaces the case's stop rule ...
//! # iterations = 5000          # ... or this, optionally with
//! # tolerance = 1e-6           #     a residual-drop convergence test
//! output_dir = "output"
//! snapshot_interval = 0        # iterations between snapshots, 0 = final only
//! formats = ["csv", "vtk_legacy"]
//! seed = 0
//!
//! [reconstruction]
//! order = "muscl"              # or "first"
//! kappa = 0.3333333333333333
//! limiter = "van_leer"         # or "none"
//!
//! [coefficients]               # forced anti-diffusion inputs
//! # delta_n = 0.0
//! # fp1 = 1.0
//! # mach_function = 1.0
//!
//! [boundaries]                 # replace a whole side with a simple condition
//! # east = "zero_gradient"     # zero_gradient, extrapolation, reflective_wall, periodic
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use allmach_core::average::AveragingKind;
use allmach_core::boundary::{BoundaryKind, BoundaryPatch, Side};
use allmach_core::cases::{CaseDefinition, Diagnostic};
use allmach_core::flux::{CoefficientOverrides, CoefficientStrategy, SchemeConfig};
use allmach_core::reconstruct::ReconstructionConfig;
use allmach_core::solver::{SolverConfig, StatePolicy, StopRule, TimeIntegrator};
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::presets::{preset, set_cylinder_mach};
use crate::snapshot::SnapshotFormat;

/// Raw contents of a run file, before names are resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunFile {
    pub case: String,
    pub case_file: Option<PathBuf>,
    pub mach: Option<f64>,
    pub scheme: String,
    pub averaging: Option<AveragingKind>,
    pub speed_averaging: Option<AveragingKind>,
    pub coefficients: CoefficientOverrides,
    pub reconstruction: ReconstructionConfig,
    pub integrator: TimeIntegrator,
    pub state_policy: StatePolicy,
    pub cfl: Option<f64>,
    pub end_time: Option<f64>,
    pub iterations: Option<usize>,
    pub tolerance: Option<f64>,
    pub boundaries: BTreeMap<String, String>,
    pub output_dir: PathBuf,
    pub snapshot_interval: usize,
    pub formats: Vec<SnapshotFormat>,
    pub seed: u64,
}

impl Default for RunFile {
    fn default() -> Self {
        Self {
            case: "sod".into(),
            case_file: None,
            mach: None,
            scheme: "hllem_fp".into(),
            averaging: None,
            speed_averaging: None,
            coefficients: CoefficientOverrides::default(),
            reconstruction: ReconstructionConfig::FIRST_ORDER,
            integrator: TimeIntegrator::Rk2,
            state_policy: StatePolicy::Strict,
            cfl: None,
            end_time: None,
            iterations: None,
            tolerance: None,
            boundaries: BTreeMap::new(),
            output_dir: "output".into(),
            snapshot_interval: 0,
            formats: vec![SnapshotFormat::Csv, SnapshotFormat::VtkLegacy],
            seed: 0,
        }
    }
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub case: CaseDefinition,
    pub solver: SolverConfig,
    pub output_dir: PathBuf,
    pub snapshot_interval: usize,
    pub formats: Vec<SnapshotFormat>,
    pub seed: u64,
}

impl RunConfig {
    pub fn scheme_name(&self) -> &'static str {
        self.solver.scheme.strategy.name()
    }

    /// Stem shared by every file of this run, e.g. `blunt_body_hllem_fp`.
    pub fn file_stem(&self) -> String {
        format!("{}_{}", self.case.name, self.scheme_name())
    }
}

/// Parse run-file text with `key=value` overrides applied on top.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<RunConfig> {
    parse_config_in(text, overrides, Path::new("."))
}

/// Parse run-file text with no overrides.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, &[])
}

/// Read and parse a run file; `case_file` paths are relative to its directory.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config_in(&text, overrides, base).with_context(|| format!("in {}", path.display()))
}

fn parse_config_in(text: &str, overrides: &[String], base: &Path) -> Result<RunConfig> {
    let mut table: toml::Table = toml::from_str(text).context("run file is not valid TOML")?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let file: RunFile = toml::Value::Table(table).try_into().context("invalid run configuration")?;
    resolve(file, base)
}

/// Merge one `key=value` (dotted keys allowed) into a TOML table.
///
/// The value is read as TOML; anything that does not parse is taken as a string,
/// so `scheme=hllem_fp` and `scheme="hllem_fp"` are equivalent.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let Some((key, value)) = assignment.split_once('=') else {
        bail!("override '{assignment}' is not of the form key=value");
    };
    let (key, value) = (key.trim(), value.trim());
    if key.is_empty() {
        bail!("override '{assignment}' has an empty key");
    }
    let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().unwrap();
    let mut target = table;
    for p in parts {
        let entry = target
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        target = match entry {
            toml::Value::Table(t) => t,
            _ => bail!("override '{assignment}': '{p}' is not a table"),
        };
    }
    target.insert(last.to_string(), parsed);
    Ok(())
}

/// Boundary names accepted in the `[boundaries]` table.
pub const SIMPLE_BOUNDARIES: [&str; 4] = ["zero_gradient", "extrapolation", "reflective_wall", "periodic"];

fn simple_boundary(name: &str) -> Result<BoundaryKind> {
    Ok(match name {
        "zero_gradient" => BoundaryKind::ZeroGradient,
        "extrapolation" => BoundaryKind::Extrapolation,
        "reflective_wall" => BoundaryKind::ReflectiveWall,
        "periodic" => BoundaryKind::Periodic,
        other => bail!(
            "unknown boundary condition '{other}'; valid: {} (conditions carrying a state need a case_file)",
            SIMPLE_BOUNDARIES.join(", ")
        ),
    })
}

fn side(name: &str) -> Result<Side> {
    Ok(match name {
        "west" => Side::West,
        "east" => Side::East,
        "south" => Side::South,
        "north" => Side::North,
        other => bail!("unknown boundary side '{other}'; valid: west, east, south, north"),
    })
}

fn resolve(file: RunFile, base: &Path) -> Result<RunConfig> {
    let strategy = CoefficientStrategy::from_name(&file.scheme)?;
    let mut scheme = SchemeConfig::new(strategy).with_overrides(file.coefficients);
    if let Some(a) = file.averaging {
        scheme = scheme.with_averaging(a);
    }
    if let Some(a) = file.speed_averaging {
        scheme = scheme.with_speed_averaging(a);
    }

    let mut case: CaseDefinition = match &file.case_file {
        Some(path) => {
            let path = base.join(path);
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str(&text).with_context(|| format!("invalid case file {}", path.display()))?
        }
        None => preset(&file.case)?,
    };
    if let Some(m) = file.mach {
        if case.name != "low_mach_cylinder" {
            bail!("'mach' only applies to the low_mach_cylinder case");
        }
        if !(m > 0.0 && m < 1.0) {
            bail!("cylinder Mach number must lie in (0, 1), got {m}");
        }
        set_cylinder_mach(&mut case, m)?;
    }

    for (name, kind) in &file.boundaries {
        let side = side(name)?;
        let kind = simple_boundary(kind)?;
        case.boundaries.retain(|p| p.side != side);
        case.boundaries.push(BoundaryPatch::whole(side, kind));
    }

    case.stop = stop_rule(&file, case.stop)?;
    if case.diagnostics.contains(&Diagnostic::ExactRiemann) && !matches!(case.stop, StopRule::Time(_)) {
        bail!("conflicting stop rules: case '{}' compares against an exact solution and needs end_time", case.name);
    }
    if let Some(cfl) = file.cfl {
        case.cfl = cfl;
    }
    case.validate()?;

    let r = &file.reconstruction;
    if !(r.kappa.is_finite() && (-1.0..=1.0).contains(&r.kappa)) {
        bail!("reconstruction kappa must lie in [-1, 1], got {}", r.kappa);
    }
    if let Some(f) = file.coefficients.fp1.filter(|f| !(0.0..=1.0).contains(f)) {
        bail!("forced fp1 must lie in [0, 1], got {f}");
    }
    if file.formats.is_empty() {
        bail!("at least one snapshot format is required");
    }

    let solver = SolverConfig {
        scheme,
        reconstruction: file.reconstruction,
        integrator: file.integrator,
        cfl: case.cfl,
        policy: file.state_policy,
    };
    Ok(RunConfig {
        case,
        solver,
        output_dir: file.output_dir,
        snapshot_interval: file.snapshot_interval,
        formats: file.formats,
        seed: file.seed,
    })
}

fn stop_rule(file: &RunFile, preset: StopRule) -> Result<StopRule> {
    Ok(match (file.end_time, file.iterations, file.tolerance) {
        (Some(_), Some(_), _) => bail!("conflicting stop rules: both end_time and iterations are set"),
        (Some(_), None, Some(_)) => bail!("conflicting stop rules: tolerance applies to iterations, not end_time"),
        (Some(t), None, None) => StopRule::Time(t),
        (None, Some(max), tolerance) => StopRule::Iterations { max, tolerance },
        (None, None, Some(tol)) => match preset {
            StopRule::Iterations { max, .. } => StopRule::Iterations { max, tolerance: Some(tol) },
            StopRule::Time(_) => bail!("conflicting stop rules: tolerance given but the case stops at a fixed time"),
        },
        (None, None, None) => preset,
    })
}
