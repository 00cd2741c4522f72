//! Canonical flow problems: mesh, initial data, boundaries and stop rule.
//!
//! A [`CaseDefinition`] is plain data and serializable, so presets can be
//! shipped as text files and tweaked field by field. [`build_case`] returns
//! the built-in presets; [`run_case`] drives one to its stop rule and
//! evaluates the diagnostics it lists.

mod diagnostics;
mod grid;

pub use diagnostics::{
    centerline_pressure, cp_field, odd_even_asymmetry, p_fluc, post_shock_pressure, shock_kink_metric,
    stagnation_point_pressure, KinkOptions, ProfilePoint, SHOCK_CELL_RATIO,
};
pub use grid::{generate_grid, GridRecipe};

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::analysis::{exact_riemann_solution, monotonicity_check, MonotonicityMetrics};
use crate::boundary::{BoundaryConditions, BoundaryKind, BoundaryPatch, MovingShock, Side};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::math;
use crate::mesh::StructuredMesh;
use crate::solver::{RunSummary, Solver, SolverConfig, StepInfo, StopRule};
use crate::state::{Gas, Primitive};

/// Names of the built-in presets.
pub const CASE_NAMES: [&str; 10] = [
    "sod",
    "severe_shock_tube",
    "planar_shock",
    "dmr",
    "dmr_t_a",
    "dmr_t_b",
    "forward_step",
    "blunt_body",
    "supersonic_corner",
    "low_mach_cylinder",
];

/// Initial flow field.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields))]
pub enum InitialCondition {
    Uniform { state: Primitive },
    /// `left` for cell centres with `x < x0`, `right` otherwise.
    Split { x0: f64, left: Primitive, right: Primitive },
    /// Post-shock state behind an oblique moving shock at `t = 0`.
    ObliqueShock { shock: MovingShock },
}

impl InitialCondition {
    pub fn state_at(&self, c: [f64; 2]) -> Primitive {
        match *self {
            InitialCondition::Uniform { state } => state,
            InitialCondition::Split { x0, left, right } => {
                if c[0] < x0 {
                    left
                } else {
                    right
                }
            }
            InitialCondition::ObliqueShock { shock } => shock.state_at(c[0], c[1], 0.0),
        }
    }

    fn states(&self) -> Vec<Primitive> {
        match *self {
            InitialCondition::Uniform { state } => vec![state],
            InitialCondition::Split { left, right, .. } => vec![left, right],
            InitialCondition::ObliqueShock { shock } => vec![shock.pre, shock.post],
        }
    }
}

/// Case-specific evaluation performed after a run.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields))]
pub enum Diagnostic {
    /// Density profile against the exact Riemann solution of a `Split` initial state.
    ExactRiemann,
    /// [`odd_even_asymmetry`] normalised by `rho_ref`.
    OddEvenAsymmetry { rho_ref: f64 },
    /// Centreline pressure, post-shock and stagnation values.
    CenterlinePressure,
    /// [`shock_kink_metric`] of the front selected by the options.
    ShockKink { options: KinkOptions },
    /// [`p_fluc`] over the whole field.
    PressureFluctuation,
    /// Density residual per iteration.
    ResidualHistory,
}

/// Published reference values, or values that follow from the case data.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ReferenceValues {
    /// Free stream used for `cp` and far-field conditions.
    pub free_stream: Option<Primitive>,
    pub post_shock_pressure: Option<f64>,
    pub stagnation_pressure: Option<f64>,
    pub post_shock_density: Option<f64>,
    /// Mach numbers of a scaling sweep.
    pub mach_ladder: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct CaseDefinition {
    pub name: String,
    pub gamma: f64,
    pub grid: GridRecipe,
    pub initial: InitialCondition,
    pub boundaries: Vec<BoundaryPatch>,
    pub stop: StopRule,
    pub cfl: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub diagnostics: Vec<Diagnostic>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub reference: ReferenceValues,
}

/// Everything needed to start integrating a case.
#[derive(Debug, Clone)]
pub struct CaseSetup {
    pub mesh: StructuredMesh,
    pub bc: BoundaryConditions,
    pub field: Field,
    pub gas: Gas,
}

impl CaseDefinition {
    pub fn gas(&self) -> Result<Gas> {
        Gas::new(self.gamma)
    }

    /// Check the invariants that do not need a mesh: physical initial
    /// states and a finite stop rule.
    pub fn validate(&self) -> Result<()> {
        self.gas()?;
        for w in self.initial.states() {
            w.check()?;
        }
        let finite = match self.stop {
            StopRule::Time(t) => t.is_finite() && t > 0.0,
            StopRule::Iterations { max, tolerance } => max > 0 && tolerance.is_none_or(|t| t.is_finite() && t > 0.0),
        };
        if !finite {
            return Err(Error::Invalid(alloc::format!("stop rule of case '{}'", self.name)));
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(Error::Invalid(alloc::format!("CFL {} of case '{}'", self.cfl, self.name)));
        }
        Ok(())
    }

    pub fn setup(&self) -> Result<CaseSetup> {
        self.validate()?;
        let gas = self.gas()?;
        let mut mesh = generate_grid(&self.grid)?;
        let periodic = |side: Side| {
            self.boundaries
                .iter()
                .any(|p| p.side == side && p.kind == BoundaryKind::Periodic)
        };
        if periodic(Side::West) && !mesh.periodic_i() {
            mesh = mesh.with_periodic_i(true);
        }
        if periodic(Side::South) && !mesh.periodic_j() {
            mesh = mesh.with_periodic_j(true);
        }
        let bc = BoundaryConditions::new(&mesh, self.boundaries.clone())?;
        let field = Field::from_fn(&mesh, &gas, |c| self.initial.state_at(c));
        Ok(CaseSetup { mesh, bc, field, gas })
    }
}

/// State behind a shock moving along `normal` at Mach `mach` relative to `pre`,
/// with the shock speed in the lab frame.
pub fn moving_shock_state(pre: &Primitive, mach: f64, normal: [f64; 2], gas: &Gas) -> Result<(Primitive, f64)> {
    if !(mach >= 1.0) {
        return Err(Error::SubsonicShock(mach));
    }
    let g = gas.gamma;
    let a = gas.sound_speed(pre.rho, pre.p);
    let un = pre.u * normal[0] + pre.v * normal[1];
    let speed = un + mach * a;
    let m2 = mach * mach;
    let rho = pre.rho * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
    let p = pre.p * (1.0 + 2.0 * g / (g + 1.0) * (m2 - 1.0));
    let du = (speed - un) * (1.0 - pre.rho / rho);
    Ok((Primitive::new(rho, pre.u + du * normal[0], pre.v + du * normal[1], p), speed))
}

fn rectangle(ni: usize, nj: usize, x1: f64, y1: f64) -> GridRecipe {
    GridRecipe::Rectangle {
        ni,
        nj,
        x0: 0.0,
        x1,
        y0: 0.0,
        y1,
    }
}

fn shock_tube(name: &str, left: Primitive, right: Primitive, x0: f64, t_end: f64, cells: usize) -> CaseDefinition {
    CaseDefinition {
        name: name.to_string(),
        gamma: 1.4,
        grid: rectangle(cells, 1, 1.0, 1.0 / cells as f64),
        initial: InitialCondition::Split { x0, left, right },
        boundaries: vec![
            BoundaryPatch::whole(Side::West, BoundaryKind::ZeroGradient),
            BoundaryPatch::whole(Side::East, BoundaryKind::ZeroGradient),
            BoundaryPatch::whole(Side::South, BoundaryKind::ZeroGradient),
            BoundaryPatch::whole(Side::North, BoundaryKind::ZeroGradient),
        ],
        stop: StopRule::Time(t_end),
        cfl: 0.5,
        diagnostics: vec![Diagnostic::ExactRiemann],
        reference: ReferenceValues::default(),
    }
}

const QUIESCENT: Primitive = Primitive::new(1.4, 0.0, 0.0, 1.0);

fn dmr(name: &str, t_end: f64) -> Result<CaseDefinition> {
    let gas = Gas::AIR;
    let angle = PI / 3.0;
    let normal = [math::sin(angle), -math::cos(angle)];
    let (post, speed) = moving_shock_state(&QUIESCENT, 10.0, normal, &gas)?;
    let shock = MovingShock {
        foot_x: 1.0 / 6.0,
        angle,
        speed,
        pre: QUIESCENT,
        post,
    };
    let (ni, nj) = (480, 120);
    let foot = math::round(ni as f64 * shock.foot_x / 4.0) as usize;
    Ok(CaseDefinition {
        name: name.to_string(),
        gamma: 1.4,
        grid: rectangle(ni, nj, 4.0, 1.0),
        initial: InitialCondition::ObliqueShock { shock },
        boundaries: vec![
            BoundaryPatch::whole(Side::West, BoundaryKind::PrescribedPostShock(post)),
            BoundaryPatch::whole(Side::East, BoundaryKind::ZeroGradient),
            BoundaryPatch::range(Side::South, 0, foot, BoundaryKind::PrescribedPostShock(post)),
            BoundaryPatch::range(Side::South, foot, ni, BoundaryKind::ReflectiveWall),
            BoundaryPatch::whole(Side::North, BoundaryKind::MovingShock(shock)),
        ],
        stop: StopRule::Time(t_end),
        cfl: 0.5,
        diagnostics: vec![Diagnostic::ShockKink {
            options: KinkOptions {
                rows: (0, 12),
                threshold: 0.5 * (QUIESCENT.rho + post.rho),
            },
        }],
        reference: ReferenceValues {
            post_shock_density: Some(post.rho),
            ..Default::default()
        },
    })
}

/// Free stream of the low-Mach cylinder: unit density and sound speed.
pub fn cylinder_free_stream(mach: f64, gas: &Gas) -> Primitive {
    Primitive::new(1.0, mach, 0.0, 1.0 / gas.gamma)
}

/// Low-Mach cylinder preset at free-stream Mach `mach`.
pub fn low_mach_cylinder(mach: f64) -> CaseDefinition {
    let gas = Gas::AIR;
    let free = cylinder_free_stream(mach, &gas);
    CaseDefinition {
        name: "low_mach_cylinder".to_string(),
        gamma: gas.gamma,
        grid: GridRecipe::OGrid {
            ni: 96,
            nj: 72,
            radius: 0.5,
            far_radius: 20.0,
        },
        initial: InitialCondition::Uniform { state: free },
        boundaries: vec![
            BoundaryPatch::whole(Side::West, BoundaryKind::Periodic),
            BoundaryPatch::whole(Side::East, BoundaryKind::Periodic),
            BoundaryPatch::whole(Side::South, BoundaryKind::ReflectiveWall),
            BoundaryPatch::whole(Side::North, BoundaryKind::FarField(free)),
        ],
        stop: StopRule::Time(CYLINDER_END_TIME),
        cfl: 0.8,
        diagnostics: vec![Diagnostic::PressureFluctuation],
        reference: ReferenceValues {
            free_stream: Some(free),
            mach_ladder: vec![0.1, 0.01, 0.001],
            ..Default::default()
        },
    }
}

/// Acoustic time units the cylinder runs for; the far field is 20 units away,
/// so start-up waves have crossed the domain several times.
pub const CYLINDER_END_TIME: f64 = 60.0;

/// Built-in preset by name.
pub fn build_case(name: &str) -> Result<CaseDefinition> {
    let gas = Gas::AIR;
    let case = match name.trim() {
        "sod" => shock_tube(
            "sod",
            Primitive::new(1.0, 0.0, 0.0, 1.0),
            Primitive::new(0.125, 0.0, 0.0, 0.1),
            0.5,
            0.2,
            400,
        ),
        "severe_shock_tube" => shock_tube(
            "severe_shock_tube",
            Primitive::new(1.0, -19.59745, 0.0, 1000.0),
            Primitive::new(1.0, -19.59475, 0.0, 0.01),
            0.8,
            0.012,
            400,
        ),
        "planar_shock" => {
            let (post, _) = moving_shock_state(&QUIESCENT, 6.0, [1.0, 0.0], &gas)?;
            CaseDefinition {
                name: "planar_shock".to_string(),
                gamma: 1.4,
                grid: GridRecipe::PerturbedMidline {
                    ni: 800,
                    nj: 20,
                    x0: 0.0,
                    x1: 800.0,
                    y0: 0.0,
                    y1: 20.0,
                    line: 10,
                    amplitude: 1e-3,
                },
                initial: InitialCondition::Split {
                    x0: 5.0,
                    left: post,
                    right: QUIESCENT,
                },
                boundaries: vec![
                    BoundaryPatch::whole(Side::West, BoundaryKind::PrescribedPostShock(post)),
                    BoundaryPatch::whole(Side::East, BoundaryKind::ZeroGradient),
                    BoundaryPatch::whole(Side::South, BoundaryKind::ReflectiveWall),
                    BoundaryPatch::whole(Side::North, BoundaryKind::ReflectiveWall),
                ],
                stop: StopRule::Time(55.0),
                cfl: 0.5,
                diagnostics: vec![Diagnostic::OddEvenAsymmetry { rho_ref: post.rho }],
                reference: ReferenceValues {
                    post_shock_density: Some(post.rho),
                    ..Default::default()
                },
            }
        }
        "dmr" | "dmr_t_a" => {
            let mut c = dmr("dmr_t_a", 0.20026)?;
            c.name = name.trim().to_string();
            c
        }
        "dmr_t_b" => dmr("dmr_t_b", 0.020026)?,
        "forward_step" => {
            let free = Primitive::new(1.4, 3.0, 0.0, 1.0);
            CaseDefinition {
                name: "forward_step".to_string(),
                gamma: 1.4,
                grid: GridRecipe::Step {
                    ni: 480,
                    nj: 160,
                    x0: 0.0,
                    x1: 3.0,
                    y0: 0.0,
                    y1: 1.0,
                    step_x: 0.6,
                    step_height: 0.2,
                },
                initial: InitialCondition::Uniform { state: free },
                boundaries: vec![
                    BoundaryPatch::whole(Side::West, BoundaryKind::SupersonicInflow(free)),
                    BoundaryPatch::whole(Side::East, BoundaryKind::ZeroGradient),
                    BoundaryPatch::whole(Side::South, BoundaryKind::ReflectiveWall),
                    BoundaryPatch::whole(Side::North, BoundaryKind::ReflectiveWall),
                ],
                stop: StopRule::Time(4.0),
                cfl: 0.5,
                diagnostics: vec![],
                reference: ReferenceValues {
                    free_stream: Some(free),
                    ..Default::default()
                },
            }
        }
        "blunt_body" => {
            let free = Primitive::new(1.4, 20.0, 0.0, 1.0);
            let (post, _) = moving_shock_state(&Primitive::new(1.4, 0.0, 0.0, 1.0), 20.0, [1.0, 0.0], &gas)?;
            CaseDefinition {
                name: "blunt_body".to_string(),
                gamma: 1.4,
                grid: GridRecipe::BluntBody {
                    ni: 40,
                    nj: 320,
                    nose_radius: 1.0,
                    upstream: 2.0,
                    lateral: 3.0,
                },
                initial: InitialCondition::Uniform { state: free },
                boundaries: vec![
                    BoundaryPatch::whole(Side::West, BoundaryKind::SupersonicInflow(free)),
                    BoundaryPatch::whole(Side::East, BoundaryKind::ReflectiveWall),
                    BoundaryPatch::whole(Side::South, BoundaryKind::ZeroGradient),
                    BoundaryPatch::whole(Side::North, BoundaryKind::ZeroGradient),
                ],
                stop: StopRule::Iterations {
                    max: 100_000,
                    tolerance: None,
                },
                cfl: 0.5,
                diagnostics: vec![Diagnostic::CenterlinePressure, Diagnostic::ResidualHistory],
                reference: ReferenceValues {
                    free_stream: Some(free),
                    post_shock_pressure: Some(post.p),
                    stagnation_pressure: Some(rayleigh_pitot_pressure(&free, &gas)),
                    ..Default::default()
                },
            }
        }
        "supersonic_corner" => {
            let (post, _) = moving_shock_state(&QUIESCENT, 5.09, [1.0, 0.0], &gas)?;
            let (ni, nj) = (400, 400);
            let above = math::round(nj as f64 * 0.45) as usize;
            CaseDefinition {
                name: "supersonic_corner".to_string(),
                gamma: 1.4,
                grid: GridRecipe::Corner {
                    ni,
                    nj,
                    x0: 0.0,
                    x1: 1.0,
                    y0: 0.0,
                    y1: 1.0,
                    corner_x: 0.05,
                    corner_y: 0.45,
                },
                initial: InitialCondition::Split {
                    x0: 0.05,
                    left: post,
                    right: QUIESCENT,
                },
                boundaries: vec![
                    BoundaryPatch::whole(Side::West, BoundaryKind::ReflectiveWall),
                    BoundaryPatch::range(Side::West, above, nj, BoundaryKind::SupersonicInflow(post)),
                    BoundaryPatch::whole(Side::East, BoundaryKind::ZeroGradient),
                    BoundaryPatch::whole(Side::South, BoundaryKind::Extrapolation),
                    BoundaryPatch::whole(Side::North, BoundaryKind::ReflectiveWall),
                ],
                stop: StopRule::Time(0.1561),
                cfl: 0.8,
                diagnostics: vec![],
                reference: ReferenceValues {
                    post_shock_density: Some(post.rho),
                    ..Default::default()
                },
            }
        }
        "low_mach_cylinder" => low_mach_cylinder(0.1),
        other => {
            return Err(Error::UnknownName {
                kind: "case",
                name: other.to_string(),
                valid: CASE_NAMES.join(", "),
            })
        }
    };
    Ok(case)
}

/// Stagnation pressure behind a normal shock (Rayleigh pitot formula).
pub fn rayleigh_pitot_pressure(free: &Primitive, gas: &Gas) -> f64 {
    let g = gas.gamma;
    let m = free.mach(gas);
    if m <= 1.0 {
        return free.p * math::powf(1.0 + 0.5 * (g - 1.0) * m * m, g / (g - 1.0));
    }
    let m2 = m * m;
    let a = math::powf(0.5 * (g + 1.0) * m2, g / (g - 1.0));
    let b = math::powf((g + 1.0) / (2.0 * g * m2 - (g - 1.0)), 1.0 / (g - 1.0));
    free.p * a * b
}

/// Named scalars and profiles computed from a finished run.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiagnosticReport {
    pub case: String,
    pub scheme: String,
    pub iterations: usize,
    pub time: f64,
    pub metrics: Vec<(String, f64)>,
    pub profiles: Vec<(String, Vec<f64>)>,
}

impl DiagnosticReport {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn profile(&self, name: &str) -> Option<&[f64]> {
        self.profiles.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

/// Result of [`run_case`].
#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub mesh: StructuredMesh,
    pub field: Field,
    pub gas: Gas,
    pub summary: RunSummary,
    pub report: DiagnosticReport,
}

/// Integrate a case with `config` (its CFL is replaced by the case's) and evaluate its diagnostics.
pub fn run_case(
    case: &CaseDefinition,
    config: SolverConfig,
    mut observe: impl FnMut(&StepInfo, &Field),
) -> Result<CaseOutcome> {
    let CaseSetup { mesh, bc, mut field, gas } = case.setup()?;
    let mut config = config;
    config.cfl = case.cfl;
    let mut solver = Solver::new(mesh, bc, gas, config);
    let keep_history = case.diagnostics.contains(&Diagnostic::ResidualHistory);
    let mut history = Vec::new();
    let summary = solver.run(&mut field, 0.0, case.stop, |info, f| {
        if keep_history {
            history.push(info.residual_rho);
        }
        observe(info, f);
    })?;
    let mesh = solver.mesh().clone();
    let mut report = evaluate_diagnostics(case, &mesh, &field, &gas)?;
    report.scheme = config.scheme.strategy.name().to_string();
    report.iterations = summary.iterations;
    report.time = summary.time;
    if keep_history {
        report.profiles.push(("residual_rho".to_string(), history));
    }
    Ok(CaseOutcome {
        mesh,
        field,
        gas,
        summary,
        report,
    })
}

/// Evaluate the diagnostics a case lists on a finished field.
pub fn evaluate_diagnostics(
    case: &CaseDefinition,
    mesh: &StructuredMesh,
    field: &Field,
    gas: &Gas,
) -> Result<DiagnosticReport> {
    let mut report = DiagnosticReport {
        case: case.name.clone(),
        ..Default::default()
    };
    let mut metric = |name: &str, v: f64| report.metrics.push((name.to_string(), v));
    let mut profiles = Vec::new();
    for d in &case.diagnostics {
        match *d {
            Diagnostic::ExactRiemann => {
                let t = shock_tube_comparison(case, mesh, field, gas)?;
                metric("overshoot", t.density.overshoot);
                metric("relative_overshoot", t.density.relative_overshoot);
                metric("undershoot", t.density.undershoot);
                metric("spurious_extrema", t.density.spurious_extrema as f64);
                profiles.push(("x".to_string(), t.x));
                profiles.push(("rho".to_string(), t.numeric.iter().map(|w| w.rho).collect()));
                profiles.push(("rho_exact".to_string(), t.exact.iter().map(|w| w.rho).collect()));
            }
            Diagnostic::OddEvenAsymmetry { rho_ref } => metric("odd_even_asymmetry", odd_even_asymmetry(field, mesh, rho_ref)),
            Diagnostic::CenterlinePressure => {
                let prof = centerline_pressure(field, mesh, gas)?;
                if let Some(p) = post_shock_pressure(&prof) {
                    metric("post_shock_pressure", p);
                }
                if let Some(p) = stagnation_point_pressure(&prof) {
                    metric("stagnation_pressure", p);
                }
                profiles.push(("centerline_x".to_string(), prof.iter().map(|q| q.x).collect()));
                profiles.push(("centerline_p".to_string(), prof.iter().map(|q| q.p).collect()));
            }
            Diagnostic::ShockKink { options } => {
                if let Some(k) = shock_kink_metric(field, mesh, &options) {
                    metric("shock_kink", k);
                }
            }
            Diagnostic::PressureFluctuation => metric("p_fluc", p_fluc(field, mesh, gas)?),
            Diagnostic::ResidualHistory => {}
        }
    }
    report.profiles = profiles;
    Ok(report)
}

/// Numerical 1D profile along the first cell row next to the exact solution.
#[derive(Debug, Clone)]
pub struct ShockTubeComparison {
    pub x: Vec<f64>,
    pub numeric: Vec<Primitive>,
    pub exact: Vec<Primitive>,
    pub density: MonotonicityMetrics,
}

/// Compare a shock-tube run with the exact Riemann solution at the run's end time.
pub fn shock_tube_comparison(
    case: &CaseDefinition,
    mesh: &StructuredMesh,
    field: &Field,
    gas: &Gas,
) -> Result<ShockTubeComparison> {
    let InitialCondition::Split { x0, left, right } = case.initial else {
        return Err(Error::Invalid("exact Riemann comparison needs a split initial state".into()));
    };
    let StopRule::Time(t) = case.stop else {
        return Err(Error::Invalid("exact Riemann comparison needs a time stop rule".into()));
    };
    let x: Vec<f64> = (0..mesh.ni).map(|i| mesh.center(i, 0)[0]).collect();
    let samples: Vec<f64> = x.iter().map(|xi| (xi - x0) / t).collect();
    let exact = exact_riemann_solution(left, right, &samples, gas)?;
    let numeric = (0..mesh.ni)
        .map(|i| field.primitive(i, 0, gas))
        .collect::<Result<Vec<_>>>()?;
    let rho: Vec<f64> = numeric.iter().map(|w| w.rho).collect();
    let rho_exact: Vec<f64> = exact.iter().map(|w| w.rho).collect();
    let density = monotonicity_check(&rho, &rho_exact);
    Ok(ShockTubeComparison {
        x,
        numeric,
        exact,
        density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::CoefficientStrategy;
    use approx::assert_relative_eq;

    #[test]
    fn every_preset_builds_and_validates() {
        for name in CASE_NAMES {
            let c = build_case(name).unwrap();
            c.validate().unwrap();
            assert!(!c.boundaries.is_empty());
        }
        assert!(matches!(build_case("bogus"), Err(Error::UnknownName { .. })));
    }

    #[test]
    fn preset_parameters() {
        let tube = build_case("severe_shock_tube").unwrap();
        match tube.initial {
            InitialCondition::Split { left, right, .. } => {
                assert_eq!(left.p, 1000.0);
                assert_eq!(left.u, -19.59745);
                assert_eq!(right.u, -19.59475);
                assert_eq!(right.p, 0.01);
            }
            _ => panic!("shock tube must be split"),
        }
        assert_eq!(tube.grid.dims(), (400, 1));
        assert_eq!(build_case("supersonic_corner").unwrap().cfl, 0.8);
        assert_eq!(build_case("low_mach_cylinder").unwrap().cfl, 0.8);
        assert_eq!(build_case("low_mach_cylinder").unwrap().grid.dims(), (96, 72));
        assert_eq!(build_case("planar_shock").unwrap().grid.dims(), (800, 20));
        assert_eq!(build_case("dmr").unwrap().grid.dims(), (480, 120));
        assert_eq!(build_case("dmr_t_b").unwrap().stop, StopRule::Time(0.020026));
        assert_eq!(build_case("dmr_t_a").unwrap().stop, StopRule::Time(0.20026));
        assert_eq!(build_case("forward_step").unwrap().grid.dims(), (480, 160));
        let blunt = build_case("blunt_body").unwrap();
        assert_eq!(blunt.grid.dims(), (40, 320));
        assert_eq!(
            blunt.stop,
            StopRule::Iterations {
                max: 100_000,
                tolerance: None
            }
        );
    }

    #[test]
    fn planar_shock_midline_alternates() {
        let setup = build_case("planar_shock").unwrap().setup().unwrap();
        assert_relative_eq!(setup.mesh.node(0, 10)[1], 10.001, max_relative = 1e-14);
        assert_relative_eq!(setup.mesh.node(1, 10)[1], 9.999, max_relative = 1e-14);
        assert_relative_eq!(setup.mesh.node(2, 10)[1], 10.001, max_relative = 1e-14);
    }

    #[test]
    fn moving_shock_relations() {
        let gas = Gas::AIR;
        let (post, speed) = moving_shock_state(&QUIESCENT, 10.0, [1.0, 0.0], &gas).unwrap();
        assert_relative_eq!(post.rho, 8.0, max_relative = 1e-12);
        assert_relative_eq!(post.u, 8.25, max_relative = 1e-12);
        assert_relative_eq!(post.p, 116.5, max_relative = 1e-12);
        assert_relative_eq!(speed, 10.0, max_relative = 1e-12);
        assert!(moving_shock_state(&QUIESCENT, 0.5, [1.0, 0.0], &gas).is_err());
    }

    #[test]
    fn blunt_body_reference_pressures() {
        let c = build_case("blunt_body").unwrap();
        assert_relative_eq!(c.reference.post_shock_pressure.unwrap(), 466.5, max_relative = 1e-4);
        assert_relative_eq!(c.reference.stagnation_pressure.unwrap(), 515.5, max_relative = 1e-3);
    }

    #[test]
    fn dmr_initial_state_matches_shock() {
        let setup = build_case("dmr").unwrap().setup().unwrap();
        let gas = setup.gas;
        let behind = setup.field.primitive(0, 0, &gas).unwrap();
        assert_relative_eq!(behind.rho, 8.0, max_relative = 1e-12);
        assert_relative_eq!(behind.u, 8.25 * math::cos(PI / 6.0), max_relative = 1e-12);
        assert_relative_eq!(behind.v, -8.25 * 0.5, max_relative = 1e-12);
        let ahead = setup.field.primitive(479, 0, &gas).unwrap();
        assert_eq!(ahead, QUIESCENT);
    }

    #[test]
    fn sod_run_is_close_to_exact() {
        let case = build_case("sod").unwrap();
        let out = run_case(&case, SolverConfig::new(CoefficientStrategy::HllemPark), |_, _| {}).unwrap();
        let t = shock_tube_comparison(&case, &out.mesh, &out.field, &out.gas).unwrap();
        let l1: f64 = t
            .numeric
            .iter()
            .zip(&t.exact)
            .map(|(a, b)| (a.rho - b.rho).abs())
            .sum::<f64>()
            / 400.0;
        assert!(l1 < 0.01, "L1 density error {l1}");
        assert_eq!(out.report.case, "sod");
        assert!(out.report.metric("overshoot").is_some());
    }
}
