//! Subcommand implementations, independent of argument parsing.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use allmach_core::analysis::{
    loglog_slope, perturbation_table, shock_stability, steady_shock_state, Difference, PerturbationRun,
    PerturbationSetup, ShockStability, TransverseBoundary,
};
use allmach_core::cases::{
    low_mach_cylinder, run_case, shock_tube_comparison, CaseDefinition, CaseOutcome, GridRecipe, ShockTubeComparison,
};
use allmach_core::flux::{CoefficientStrategy, SchemeConfig};
use allmach_core::reconstruct::ReconstructionConfig;
use allmach_core::solver::{SolverConfig, StepInfo, TimeIntegrator};
use allmach_core::state::Gas;
use anyhow::{bail, Context, Result};

use crate::config::RunConfig;
use crate::output::{num, prepare_dir, CsvTable, Header};
use crate::snapshot::{write_snapshot, Snapshot};

/// Run `f` over `items` on up to `jobs` threads, keeping input order.
pub fn fan_out<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> Result<R> + Sync) -> Result<Vec<R>> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<R>>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(k) else { break };
                let r = f(item);
                slots.lock().unwrap()[k] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every item is processed"))
        .collect()
}

/// Files and results of `run`.
#[derive(Debug)]
pub struct RunOutput {
    pub outcome: CaseOutcome,
    pub files: Vec<PathBuf>,
}

/// Integrate the configured case, writing snapshots, metrics and the residual history.
pub fn run(cfg: &RunConfig, root: Option<&Path>, mut progress: impl FnMut(&StepInfo)) -> Result<RunOutput> {
    let dir = prepare_dir(root, &cfg.output_dir)?;
    let stem = cfg.file_stem();
    let scheme = cfg.scheme_name();
    let free = cfg.case.reference.free_stream;
    let mesh = cfg.case.setup()?.mesh;
    let header = |iteration: usize, time: f64| Header::new(&cfg.case.name, scheme, iteration, time).with_seed(cfg.seed);

    let mut files = Vec::new();
    let mut history = CsvTable::new(&header(0, 0.0), &["iteration", "time", "dt", "residual_rho"]);
    let mut failure = None;
    let outcome = run_case(&cfg.case, cfg.solver, |info, field| {
        history.row(&[info.iteration.to_string(), num(info.time), num(info.dt), num(info.residual_rho)]);
        progress(info);
        if cfg.snapshot_interval > 0 && info.iteration % cfg.snapshot_interval == 0 && failure.is_none() {
            let snap = Snapshot::new(&mesh, field, Gas::new(cfg.case.gamma).unwrap(), free, header(info.iteration, info.time));
            for &format in &cfg.formats {
                let path = dir.join(format!("{stem}_{:07}.{}", info.iteration, format.extension()));
                match write_snapshot(&snap, format, &path) {
                    Ok(()) => files.push(path),
                    Err(e) => failure = Some(e),
                }
            }
        }
    })
    .with_context(|| format!("running case '{}' with {scheme}", cfg.case.name))?;
    if let Some(e) = failure {
        return Err(e);
    }

    let s = &outcome.summary;
    let head = header(s.iterations, s.time);
    let snap = Snapshot::new(&outcome.mesh, &outcome.field, outcome.gas, free, head.clone());
    for &format in &cfg.formats {
        let path = dir.join(format!("{stem}_final.{}", format.extension()));
        write_snapshot(&snap, format, &path)?;
        files.push(path);
    }

    let mut metrics = CsvTable::new(&head.clone().with("stop", format!("{:?}", s.reason)), &["metric", "value"]);
    metrics.row(&["iterations".to_string(), s.iterations.to_string()]);
    metrics.row(&["time".to_string(), num(s.time)]);
    metrics.row(&["first_residual".to_string(), num(s.first_residual)]);
    metrics.row(&["last_residual".to_string(), num(s.last_residual)]);
    metrics.row(&["state_fallbacks".to_string(), s.fallbacks.to_string()]);
    for (name, value) in &outcome.report.metrics {
        metrics.row(&[name.clone(), num(*value)]);
    }
    let path = dir.join(format!("{stem}_metrics.csv"));
    metrics.write(&path)?;
    files.push(path);

    let path = dir.join(format!("{stem}_history.csv"));
    history.write(&path)?;
    files.push(path);

    if !outcome.report.profiles.is_empty() {
        let mut profiles = CsvTable::new(&head, &["profile", "index", "value"]);
        for (name, values) in &outcome.report.profiles {
            for (k, v) in values.iter().enumerate() {
                profiles.row(&[name.clone(), k.to_string(), num(*v)]);
            }
        }
        let path = dir.join(format!("{stem}_profiles.csv"));
        profiles.write(&path)?;
        files.push(path);
    }
    Ok(RunOutput { outcome, files })
}

#[derive(Debug, Clone)]
pub struct StabilityArgs {
    pub schemes: Vec<CoefficientStrategy>,
    pub machs: Vec<f64>,
    pub ni: usize,
    pub nj: usize,
    pub transverse: TransverseBoundary,
    pub difference: Difference,
    /// Amplitude of a seeded random perturbation of the base state.
    pub noise: Option<f64>,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for StabilityArgs {
    fn default() -> Self {
        Self {
            schemes: vec![CoefficientStrategy::Hlle, CoefficientStrategy::HllemPark, CoefficientStrategy::HllemFp],
            machs: vec![2.0, 3.0, 5.0, 7.0, 10.0, 15.0, 20.0],
            ni: 11,
            nj: 11,
            transverse: TransverseBoundary::Periodic,
            difference: Difference::Central,
            noise: None,
            seed: 0,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRow {
    pub scheme: CoefficientStrategy,
    pub mach: f64,
    pub result: ShockStability,
}

/// Largest real eigenvalue of the linearised residual for every scheme and Mach number.
pub fn stability(args: &StabilityArgs) -> Result<Vec<StabilityRow>> {
    if args.schemes.is_empty() || args.machs.is_empty() {
        bail!("stability needs at least one scheme and one Mach number");
    }
    let gas = Gas::AIR;
    let jobs: Vec<(CoefficientStrategy, f64)> = args
        .schemes
        .iter()
        .flat_map(|&s| args.machs.iter().map(move |&m| (s, m)))
        .collect();
    fan_out(&jobs, args.jobs, |&(scheme, mach)| {
        let mut setup = steady_shock_state(mach, &gas)?;
        setup.ni = args.ni;
        setup.nj = args.nj;
        setup.transverse = args.transverse;
        setup.difference = args.difference;
        setup.base_noise = args.noise.map(|a| (args.seed, a));
        let result = shock_stability(&setup, &SchemeConfig::new(scheme), &gas)
            .with_context(|| format!("stability of {scheme} at Mach {mach}"))?;
        Ok(StabilityRow { scheme, mach, result })
    })
}

pub fn stability_table(rows: &[StabilityRow], args: &StabilityArgs) -> CsvTable {
    let header = Header::new("steady_shock", "multiple", 0, 0.0)
        .with_seed(args.seed)
        .with("grid", format!("{}x{}", args.ni, args.nj))
        .with("transverse", format!("{:?}", args.transverse).to_lowercase())
        .with("difference", format!("{:?}", args.difference).to_lowercase())
        .with("noise", args.noise.map_or("none".to_string(), num));
    let mut t = CsvTable::new(&header, &["scheme", "mach", "max_real", "norm", "relative", "unstable"]);
    for r in rows {
        t.row(&[
            r.scheme.name().to_string(),
            num(r.mach),
            num(r.result.max_real),
            num(r.result.norm),
            num(r.result.relative()),
            r.result.is_unstable().to_string(),
        ]);
    }
    t
}

#[derive(Debug, Clone)]
pub struct Riemann1dArgs {
    pub case: CaseDefinition,
    pub scheme: SchemeConfig,
    pub reconstruction: ReconstructionConfig,
    pub integrator: TimeIntegrator,
}

impl Riemann1dArgs {
    /// Replace the number of cells of a one-row shock tube.
    pub fn with_cells(mut self, cells: usize) -> Result<Self> {
        match &mut self.case.grid {
            GridRecipe::Rectangle { ni, nj: 1, x0, x1, y0, y1 } => {
                *ni = cells;
                *y1 = *y0 + (*x1 - *x0) / cells as f64;
            }
            _ => bail!("case '{}' is not a one-dimensional tube", self.case.name),
        }
        Ok(self)
    }
}

/// Run a shock tube and compare it with the exact solution.
pub fn riemann1d(args: &Riemann1dArgs) -> Result<(CaseOutcome, ShockTubeComparison)> {
    let mut cfg = SolverConfig::new(args.scheme);
    cfg.reconstruction = args.reconstruction;
    cfg.integrator = args.integrator;
    let outcome = run_case(&args.case, cfg, |_, _| {})?;
    let cmp = shock_tube_comparison(&args.case, &outcome.mesh, &outcome.field, &outcome.gas)?;
    Ok((outcome, cmp))
}

pub fn riemann1d_tables(args: &Riemann1dArgs, outcome: &CaseOutcome, cmp: &ShockTubeComparison) -> (CsvTable, CsvTable) {
    let s = &outcome.summary;
    let header = Header::new(&args.case.name, args.scheme.strategy.name(), s.iterations, s.time);
    let mut profile = CsvTable::new(&header, &["x", "rho", "u", "p", "rho_exact", "u_exact", "p_exact"]);
    for ((x, w), e) in cmp.x.iter().zip(&cmp.numeric).zip(&cmp.exact) {
        profile.row(&[num(*x), num(w.rho), num(w.u), num(w.p), num(e.rho), num(e.u), num(e.p)]);
    }
    let l1 = cmp.numeric.iter().zip(&cmp.exact).map(|(w, e)| (w.rho - e.rho).abs()).sum::<f64>() / cmp.x.len() as f64;
    let d = &cmp.density;
    let mut metrics = CsvTable::new(&header, &["metric", "value"]);
    metrics.row(&["overshoot".to_string(), num(d.overshoot)]);
    metrics.row(&["relative_overshoot".to_string(), num(d.relative_overshoot)]);
    metrics.row(&["undershoot".to_string(), num(d.undershoot)]);
    metrics.row(&["spurious_extrema".to_string(), d.spurious_extrema.to_string()]);
    metrics.row(&["l1_density_error".to_string(), num(l1)]);
    (profile, metrics)
}

/// One-step saw-tooth experiment for every scheme of the comparison table.
pub fn perturb(setup: &PerturbationSetup, fp1_values: &[f64]) -> Result<Vec<PerturbationRun>> {
    Ok(perturbation_table(setup, fp1_values, &Gas::AIR)?)
}

pub fn perturb_table(runs: &[PerturbationRun], setup: &PerturbationSetup) -> CsvTable {
    let gamma = Gas::AIR.gamma;
    let header = Header::new("sawtooth", "multiple", 1, 0.0)
        .with("nu", num(setup.nu))
        .with("u0", num(setup.u0));
    let mut t = CsvTable::new(
        &header,
        &[
            "scheme",
            "fp1",
            "nu",
            "nu_measured",
            "rho_before",
            "rho_after",
            "rho_predicted",
            "u_factor",
            "u_factor_predicted",
            "p_factor",
            "p_factor_predicted",
        ],
    );
    for r in runs {
        // Predictions use the nu recovered from the same run.
        let pred = PerturbationRun { nu: r.nu_from_pressure, ..*r }.predicted(gamma);
        t.row(&[
            r.scheme.name().to_string(),
            r.fp1.map_or(String::new(), num),
            num(r.nu),
            num(r.nu_from_pressure),
            num(r.before.rho),
            num(r.after.rho),
            num(pred.rho),
            num(r.after.u / r.before.u),
            num(pred.u / r.before.u),
            num(r.after.p / r.before.p),
            num(pred.p / r.before.p),
        ]);
    }
    t
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub schemes: Vec<CoefficientStrategy>,
    pub machs: Vec<f64>,
    pub end_time: Option<f64>,
    pub integrator: TimeIntegrator,
    pub jobs: usize,
}

impl Default for SweepArgs {
    fn default() -> Self {
        Self {
            schemes: vec![
                CoefficientStrategy::HllemFp,
                CoefficientStrategy::HllCpsFp,
                CoefficientStrategy::HllemPark,
                CoefficientStrategy::HllCps,
            ],
            machs: low_mach_cylinder(0.1).reference.mach_ladder,
            end_time: None,
            integrator: TimeIntegrator::Euler,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub scheme: CoefficientStrategy,
    pub mach: f64,
    pub p_fluc: f64,
    pub iterations: usize,
}

/// Cylinder pressure fluctuation at every Mach number, with the log-log slope per scheme.
/// Fitted log-log slope per scheme; `None` with fewer than two usable points.
pub type Slopes = Vec<(CoefficientStrategy, Option<f64>)>;

pub fn sweep(args: &SweepArgs) -> Result<(Vec<SweepPoint>, Slopes)> {
    if args.machs.iter().any(|m| !(*m > 0.0 && *m < 1.0)) {
        bail!("sweep Mach numbers must lie in (0, 1)");
    }
    let jobs: Vec<(CoefficientStrategy, f64)> = args
        .schemes
        .iter()
        .flat_map(|&s| args.machs.iter().map(move |&m| (s, m)))
        .collect();
    let points = fan_out(&jobs, args.jobs, |&(scheme, mach)| {
        let mut case = low_mach_cylinder(mach);
        if let Some(t) = args.end_time {
            case.stop = allmach_core::solver::StopRule::Time(t);
        }
        let mut cfg = SolverConfig::new(scheme);
        cfg.integrator = args.integrator;
        let out = run_case(&case, cfg, |_, _| {}).with_context(|| format!("cylinder at Mach {mach} with {scheme}"))?;
        let p_fluc = out.report.metric("p_fluc").context("p_fluc missing from the cylinder report")?;
        Ok(SweepPoint {
            scheme,
            mach,
            p_fluc,
            iterations: out.summary.iterations,
        })
    })?;
    let slopes = args
        .schemes
        .iter()
        .map(|&s| {
            let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.scheme == s).map(|p| (p.mach, p.p_fluc)).collect();
            (s, loglog_slope(&pts))
        })
        .collect();
    Ok((points, slopes))
}

pub fn sweep_tables(points: &[SweepPoint], slopes: &[(CoefficientStrategy, Option<f64>)], args: &SweepArgs) -> (CsvTable, CsvTable) {
    let header = Header::new("low_mach_cylinder", "multiple", 0, args.end_time.unwrap_or(allmach_core::cases::CYLINDER_END_TIME))
        .with("integrator", format!("{:?}", args.integrator).to_lowercase());
    let mut p = CsvTable::new(&header, &["scheme", "mach", "p_fluc", "iterations"]);
    for pt in points {
        p.row(&[pt.scheme.name().to_string(), num(pt.mach), num(pt.p_fluc), pt.iterations.to_string()]);
    }
    let mut s = CsvTable::new(&header, &["scheme", "slope"]);
    for (scheme, slope) in slopes {
        s.row(&[scheme.name().to_string(), slope.map_or(String::new(), num)]);
    }
    (p, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan_out_keeps_order_and_reports_errors() {
        let items: Vec<usize> = (0..17).collect();
        let out = fan_out(&items, 4, |&k| Ok(k * k)).unwrap();
        assert_eq!(out, items.iter().map(|k| k * k).collect::<Vec<_>>());
        let err = fan_out(&items, 3, |&k| if k == 5 { bail!("five") } else { Ok(k) });
        assert_eq!(err.unwrap_err().to_string(), "five");
    }

    #[test]
    fn cells_override_only_applies_to_tubes() {
        let args = Riemann1dArgs {
            case: allmach_core::cases::build_case("sod").unwrap(),
            scheme: SchemeConfig::new(CoefficientStrategy::Hlle),
            reconstruction: ReconstructionConfig::FIRST_ORDER,
            integrator: TimeIntegrator::Rk2,
        };
        let a = args.clone().with_cells(50).unwrap();
        assert_eq!(a.case.grid.dims(), (50, 1));
        let mut b = args;
        b.case = allmach_core::cases::build_case("dmr").unwrap();
        assert!(b.with_cells(50).is_err());
    }
}
