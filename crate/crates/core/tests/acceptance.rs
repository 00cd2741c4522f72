//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion.
//!
//! `ALLMACH_AC=1,3` runs a subset. The process exits non-zero on a failed
//! criterion only when `ALLMACH_ACCEPTANCE_STRICT` is set, so known
//! failures stay visible without breaking `cargo test`.

use std::time::Instant;

use allmach_core::analysis::{perturbation_table, shock_stability, steady_shock_state, Difference, PerturbationSetup, TransverseBoundary};
use allmach_core::average::InterfaceAverage;
use allmach_core::boundary::{BoundaryConditions, BoundaryKind};
use allmach_core::cases::{build_case, low_mach_cylinder, run_case, CaseDefinition, CaseOutcome};
use allmach_core::field::Field;
use allmach_core::flux::{
    all_mach_additive_correction, anti_diffusion_coeffs, hll_family_flux, hllcps_flux, hllcps_flux_split_form,
    interface_flux, CoefficientContext, CoefficientOverrides, CoefficientStrategy as S, SchemeConfig, WaveSpeeds,
};
use allmach_core::mesh::StructuredMesh;
use allmach_core::solver::{Solver, SolverConfig, StopRule, TimeIntegrator};
use allmach_core::state::{physical_flux, unrotate_flux};
use allmach_core::{Flux, Gas, Normal, Primitive, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GAS: Gas = Gas::AIR;

// AC1
const TUBE_OVERSHOOT_LIMIT: f64 = 0.005;
// AC3
const PERTURB_REL_TOL: f64 = 1e-6;
// AC4
const STAGNATION_REF: f64 = 515.5;
const POST_SHOCK_REF: f64 = 466.5;
const STAGNATION_TOL: f64 = 0.01;
const POST_SHOCK_TOL: f64 = 0.02;
const CARBUNCLE_DEVIATION: f64 = 0.20;
const BLUNT_FP_BUDGET: usize = 40_000;
const BLUNT_FP_TOLERANCE: f64 = 1e-5;
const BLUNT_HLLEM_BUDGET: usize = 20_000;
// AC5
const ASYMMETRY_LIMIT: f64 = 0.01;
const ASYMMETRY_RATIO: f64 = 10.0;
// AC6
const FP_SLOPE: (f64, f64) = (2.0, 0.3);
const BASE_SLOPE: (f64, f64) = (1.0, 0.4);
// AC7
const PROPERTY_SAMPLES: usize = 2000;
const CONSISTENCY_TOL: f64 = 1e-13;
const EQUIVALENCE_TOL: f64 = 1e-12;
const FREE_STREAM_TOL: f64 = 1e-11;
// AC8: residual history over this many equal segments must decrease.
const HISTORY_SEGMENTS: usize = 10;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { pass, detail: detail.into() })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ac1() -> Result<Verdict> {
    let case = build_case("severe_shock_tube")?;
    let run = |scheme: SchemeConfig| -> Result<_> {
        let out = run_case(&case, SolverConfig::new(scheme), |_, _| {})?;
        Ok((out.report.metric("relative_overshoot").unwrap(), out.report.metric("spurious_extrema").unwrap()))
    };
    let (em, em_ext) = run(SchemeConfig::new(S::HllemPark))?;
    let (cps, _) = run(SchemeConfig::new(S::HllCps))?;
    let no_dn = SchemeConfig::new(S::HllCps).with_overrides(CoefficientOverrides { delta_n: Some(0.0), ..Default::default() });
    let (cps0, _) = run(no_dn)?;
    verdict(
        em <= TUBE_OVERSHOOT_LIMIT && em_ext == 0.0 && cps > TUBE_OVERSHOOT_LIMIT && cps0 <= TUBE_OVERSHOOT_LIMIT,
        format!(
            "overshoot hllem {:.3}% ({em_ext} extrema), hllcps {:.3}%, hllcps dn=0 {:.3}%",
            em * 100.0,
            cps * 100.0,
            cps0 * 100.0
        ),
    )
}

fn ac2() -> Result<Verdict> {
    const MACHS: [f64; 7] = [2.0, 3.0, 5.0, 7.0, 10.0, 15.0, 20.0];
    let mut lines = Vec::new();
    let mut pass = true;
    for (scheme, want_stable) in [(S::Hlle, true), (S::HllemFp, true), (S::HllCpsFp, true), (S::HllemPark, false), (S::HllCps, false)] {
        let mut unstable = Vec::new();
        let mut worst = f64::NEG_INFINITY;
        for m in MACHS {
            let mut setup = steady_shock_state(m, &GAS)?;
            setup.transverse = TransverseBoundary::Periodic;
            setup.difference = Difference::Central;
            let r = shock_stability(&setup, &SchemeConfig::new(scheme), &GAS)?;
            worst = worst.max(r.relative());
            if r.is_unstable() {
                unstable.push(m);
            }
        }
        let ok = if want_stable { unstable.is_empty() } else { !unstable.is_empty() };
        pass &= ok;
        lines.push(format!("{scheme} unstable at M={unstable:?} (max rel {worst:.1e}){}", if ok { "" } else { " !" }));
    }
    verdict(pass, lines.join("; "))
}

fn ac3() -> Result<Verdict> {
    let setup = PerturbationSetup::default();
    let runs = perturbation_table(&setup, &[0.0, 0.5, 1.0], &GAS)?;
    let mut worst: f64 = 0.0;
    let mut shear_exact = true;
    for r in &runs {
        // Calibrate nu from the pressure row, then compare the other rows.
        worst = worst.max(rel(r.nu_from_pressure, setup.nu));
        let calibrated = allmach_core::analysis::PerturbationRun { nu: r.nu_from_pressure, ..*r };
        let want = calibrated.predicted(GAS.gamma);
        worst = worst.max(rel(r.after.p, want.p));
        if matches!(r.scheme, S::HllemFp | S::HllCpsFp | S::HllemPark | S::HllCps) {
            worst = worst.max(rel(r.after.rho, want.rho)).max(rel(r.after.u, want.u));
        }
        if r.scheme == S::HllemPark {
            shear_exact &= rel(r.after.u, r.before.u) <= 1e-12;
        }
    }
    verdict(
        worst <= PERTURB_REL_TOL && shear_exact,
        format!("{} runs, worst relative error {worst:.2e}, hllem shear factor exact: {shear_exact}", runs.len()),
    )
}

fn blunt(scheme: S, stop: StopRule) -> Result<CaseOutcome> {
    let mut case = build_case("blunt_body")?;
    case.stop = stop;
    let mut cfg = SolverConfig::new(scheme);
    cfg.integrator = TimeIntegrator::Euler;
    run_case(&case, cfg, |_, _| {})
}

fn ac4_and_history() -> Result<(Verdict, Verdict)> {
    let mut lines = Vec::new();
    let mut pass = true;
    let mut histories = Vec::new();
    for scheme in [S::HllemFp, S::HllCpsFp] {
        let out = blunt(scheme, StopRule::Iterations { max: BLUNT_FP_BUDGET, tolerance: Some(BLUNT_FP_TOLERANCE) })?;
        let stag = out.report.metric("stagnation_pressure").unwrap();
        let post = out.report.metric("post_shock_pressure").unwrap();
        let ok = rel(stag, STAGNATION_REF) <= STAGNATION_TOL && rel(post, POST_SHOCK_REF) <= POST_SHOCK_TOL;
        pass &= ok;
        lines.push(format!(
            "{scheme} stagnation {stag:.1} ({:+.2}%) post-shock {post:.1} ({:+.2}%) after {} it",
            100.0 * (stag / STAGNATION_REF - 1.0),
            100.0 * (post / POST_SHOCK_REF - 1.0),
            out.summary.iterations
        ));
        histories.push((scheme, out.report.profile("residual_rho").unwrap().to_vec()));
    }
    let out = blunt(S::HllemPark, StopRule::Iterations { max: BLUNT_HLLEM_BUDGET, tolerance: None })?;
    let stag = out.report.metric("stagnation_pressure").unwrap();
    let carbuncle = rel(stag, STAGNATION_REF) > CARBUNCLE_DEVIATION;
    pass &= carbuncle;
    lines.push(format!("hllem_park stagnation {stag:.1} ({:+.1}%)", 100.0 * (stag / STAGNATION_REF - 1.0)));

    let mut h_pass = true;
    let mut h_lines = Vec::new();
    for (scheme, h) in &histories {
        let seg = h.len() / HISTORY_SEGMENTS;
        let means: Vec<f64> = (0..HISTORY_SEGMENTS)
            .map(|k| {
                let s = &h[k * seg..(k + 1) * seg];
                (s.iter().map(|r| r.ln()).sum::<f64>() / s.len() as f64).exp()
            })
            .collect();
        let monotone = means.windows(2).all(|w| w[1] <= w[0]);
        h_pass &= monotone;
        h_lines.push(format!("{scheme} segment means {:.1e} -> {:.1e} monotone: {monotone}", means[0], means[HISTORY_SEGMENTS - 1]));
    }
    h_lines.push("contour figures, convergence depth and the viscous flat plate are excluded".into());
    Ok((
        Verdict { pass, detail: lines.join("; ") },
        Verdict { pass: h_pass, detail: h_lines.join("; ") },
    ))
}

fn ac5() -> Result<Verdict> {
    let case = build_case("planar_shock")?;
    let mut values = Vec::new();
    for scheme in [S::HllCps, S::HllCpsFp, S::HllemFp, S::HllemPark] {
        let out = run_case(&case, SolverConfig::new(scheme), |_, _| {})?;
        values.push((scheme, out.report.metric("odd_even_asymmetry").unwrap()));
    }
    let stable_max = values[..3].iter().map(|v| v.1).fold(0.0, f64::max);
    let hllem = values[3].1;
    let detail = values.iter().map(|(s, v)| format!("{s} {v:.2e}")).collect::<Vec<_>>().join(", ");
    verdict(stable_max < ASYMMETRY_LIMIT && hllem > ASYMMETRY_RATIO * stable_max, detail)
}

fn ac6() -> Result<Verdict> {
    let machs = build_case("low_mach_cylinder")?.reference.mach_ladder;
    let mut lines = Vec::new();
    let mut pass = true;
    for (scheme, (target, tol)) in [(S::HllemFp, FP_SLOPE), (S::HllCpsFp, FP_SLOPE), (S::HllemPark, BASE_SLOPE), (S::HllCps, BASE_SLOPE)] {
        let mut pts = Vec::new();
        for &m in &machs {
            let case: CaseDefinition = low_mach_cylinder(m);
            let mut cfg = SolverConfig::new(scheme);
            cfg.integrator = TimeIntegrator::Euler;
            let out = run_case(&case, cfg, |_, _| {})?;
            pts.push((m, out.report.metric("p_fluc").unwrap()));
        }
        let slope = allmach_core::analysis::loglog_slope(&pts).unwrap_or(f64::NAN);
        let ok = (slope - target).abs() <= tol;
        pass &= ok;
        lines.push(format!("{scheme} slope {slope:.2}"));
    }
    verdict(pass, lines.join(", "))
}

fn random_state(rng: &mut ChaCha8Rng) -> Primitive {
    Primitive::new(
        rng.random_range(0.05..20.0),
        rng.random_range(-5.0..5.0),
        rng.random_range(-5.0..5.0),
        rng.random_range(0.05..50.0),
    )
}

fn close(a: &Flux, b: &Flux, tol: f64) -> bool {
    let s = a.iter().chain(b).fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * s)
}

fn ac7() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failed: Vec<&str> = Vec::new();
    let mut check = |ok: bool, name: &'static str| {
        if !ok && !failed.contains(&name) {
            failed.push(name);
        }
    };
    for _ in 0..PROPERTY_SAMPLES {
        let (l, r) = (random_state(&mut rng), random_state(&mut rng));
        let t = rng.random_range(0.0..std::f64::consts::TAU);
        let n = Normal::new(t.cos(), t.sin())?;
        let (wl, wr) = (l.rotate(n), r.rotate(n));
        let fp1 = rng.random_range(0.0..=1.0);
        for s in S::ALL {
            let scheme = SchemeConfig::new(s);
            check(close(&interface_flux(&wl, &wl, &scheme, fp1, &GAS)?, &physical_flux(&wl, &GAS), CONSISTENCY_TOL), "consistency");
            let out = unrotate_flux(&interface_flux(&wl, &wr, &scheme, fp1, &GAS)?, n);
            let back = unrotate_flux(&interface_flux(&r.rotate(n.reversed()), &l.rotate(n.reversed()), &scheme, fp1, &GAS)?, n.reversed());
            check(close(&out, &back.map(|v| -v), EQUIVALENCE_TOL), "conjugate faces");
        }
        let avg = InterfaceAverage::new(&wl, &wr, Default::default(), &GAS)?;
        let ctx = CoefficientContext {
            avg,
            speeds: WaveSpeeds::einfeldt(&wl, &wr, &avg, &GAS),
            mach_l: wl.mach(&GAS),
            mach_r: wr.mach(&GAS),
            fp1,
            gamma: GAS.gamma,
        };
        for s in S::ALL {
            let c = anti_diffusion_coeffs(s, &ctx, None);
            check([c.delta2, c.delta3, c.delta_n].iter().all(|d| (0.0..=1.0).contains(d)), "coefficient bounds");
        }
        let forced = |fp1, f| {
            SchemeConfig::new(S::HllemFp).with_overrides(CoefficientOverrides { fp1: Some(fp1), mach_function: f, delta_n: None })
        };
        let park = hll_family_flux(&wl, &wr, &SchemeConfig::new(S::HllemPark), fp1, &GAS)?;
        let hlle = hll_family_flux(&wl, &wr, &SchemeConfig::new(S::Hlle), fp1, &GAS)?;
        check(hll_family_flux(&wl, &wr, &forced(1.0, Some(1.0)), fp1, &GAS)? == park, "fp reduction");
        check(hll_family_flux(&wl, &wr, &forced(0.0, None), fp1, &GAS)? == hlle, "fp reduction");
        let split = hllcps_flux_split_form(&wl, &wr, &GAS)?;
        check(close(&hllcps_flux(&wl, &wr, &SchemeConfig::new(S::HllCps), 1.0, &GAS)?, &split, EQUIVALENCE_TOL), "hllcps forms");
        let direct = hll_family_flux(&wl, &wr, &SchemeConfig::new(S::HllemFp), fp1, &GAS)?;
        check(close(&all_mach_additive_correction(&park, &wl, &wr, &avg, fp1, &GAS), &direct, EQUIVALENCE_TOL), "additive correction");
    }
    // Stationary contact: one update of a density jump at rest.
    let mesh = StructuredMesh::rectangle(8, 1, 0.0, 1.0, 0.0, 0.125)?;
    let bc = BoundaryConditions::uniform(&mesh, BoundaryKind::ReflectiveWall)?;
    let fp_contact = SchemeConfig::new(S::HllemFp).with_overrides(CoefficientOverrides { fp1: Some(1.0), mach_function: Some(0.0), delta_n: None });
    for scheme in [SchemeConfig::new(S::HllemPark), SchemeConfig::new(S::HllCps), fp_contact] {
        let mut solver = Solver::new(mesh.clone(), bc.clone(), GAS, SolverConfig::new(scheme));
        let mut f = Field::from_fn(&mesh, &GAS, |c| Primitive::new(if c[0] < 0.5 { 3.0 } else { 0.2 }, 0.0, 0.0, 2.0));
        let before = f.clone();
        let dt = solver.time_step(&f)?;
        solver.step(&mut f, 0.0, dt)?;
        let moved = (0..8).any(|i| before.get(i, 0).to_array().iter().zip(f.get(i, 0).to_array()).any(|(a, b)| (a - b).abs() > EQUIVALENCE_TOL));
        check(!moved, "stationary contact");
    }
    // Free stream on a distorted mesh.
    let (ni, nj) = (8, 6);
    let mut nodes = Vec::new();
    for j in 0..=nj {
        for i in 0..=ni {
            let interior = i > 0 && i < ni && j > 0 && j < nj;
            let d = if interior { [rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1)] } else { [0.0, 0.0] };
            nodes.push([(i as f64 + d[0]) / ni as f64, (j as f64 + d[1]) / ni as f64]);
        }
    }
    let mesh = StructuredMesh::from_nodes(ni, nj, nodes)?;
    let w = Primitive::new(1.3, 0.7, -0.4, 0.8);
    let bc = BoundaryConditions::uniform(&mesh, BoundaryKind::SupersonicInflow(w))?;
    for s in S::ALL {
        let mut solver = Solver::new(mesh.clone(), bc.clone(), GAS, SolverConfig::new(s));
        let mut f = Field::from_fn(&mesh, &GAS, |_| w);
        check(solver.residual(&mut f, 0.0)?.iter().flatten().all(|v| v.abs() <= FREE_STREAM_TOL), "free stream");
    }
    let pass = failed.is_empty();
    verdict(
        pass,
        if pass {
            format!("{PROPERTY_SAMPLES} random face pairs x 10 schemes, stationary contact, distorted-mesh free stream")
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

fn main() {
    let selected: Option<Vec<u32>> = std::env::var("ALLMACH_AC")
        .ok()
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let wanted = |n: u32| selected.as_ref().is_none_or(|s| s.contains(&n));
    let strict = std::env::var_os("ALLMACH_ACCEPTANCE_STRICT").is_some();
    let mut failures = 0;
    let mut print = |n: u32, title: &str, started: Instant, v: Result<Verdict>| {
        let secs = started.elapsed().as_secs_f64();
        match v {
            Ok(v) => {
                failures += usize::from(!v.pass);
                println!("[{}] AC{n} {title}: {} ({secs:.0} s)", if v.pass { "PASS" } else { "FAIL" }, v.detail);
            }
            Err(e) => {
                failures += 1;
                println!("[FAIL] AC{n} {title}: error: {e} ({secs:.0} s)");
            }
        }
    };
    type Criterion = (u32, &'static str, fn() -> Result<Verdict>);
    let simple: [Criterion; 6] = [
        (7, "property suite", ac7),
        (1, "severe shock tube monotonicity", ac1),
        (2, "matrix stability sign pattern", ac2),
        (3, "perturbation factors", ac3),
        (5, "planar shock odd-even decoupling", ac5),
        (6, "low-Mach cylinder pressure scaling", ac6),
    ];
    for (n, title, f) in simple {
        if wanted(n) {
            let t = Instant::now();
            print(n, title, t, f());
        }
    }
    if wanted(4) || wanted(8) {
        let t = Instant::now();
        match ac4_and_history() {
            Ok((a4, a8)) => {
                print(4, "blunt body pressures and carbuncle", t, Ok(a4));
                print(8, "excluded items; residual history decreases", t, Ok(a8));
            }
            Err(e) => {
                let msg = e.to_string();
                print(4, "blunt body pressures and carbuncle", t, Err(e));
                println!("[FAIL] AC8 excluded items; residual history decreases: blunt-body runs failed: {msg}");
            }
        }
    }
    println!("acceptance: {failures} criterion/criteria failed");
    if strict && failures > 0 {
        std::process::exit(1);
    }
}
