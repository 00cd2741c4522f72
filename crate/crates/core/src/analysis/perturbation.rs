//! Linear evolution of a saw-tooth perturbation across grid lines.
//!
//! A uniform state `rho = 1, p = 1, u = u0, v = 0` carries perturbations
//! that alternate in sign from one cell row to the next. The faces between
//! rows have normal `y`, so `u` is the shear velocity. After one explicit
//! first-order step the perturbation amplitudes are read back; runs with
//! opposite signs are combined to cancel second-order effects.

use alloc::vec;

use crate::boundary::{BoundaryConditions, BoundaryKind};
use crate::error::Result;
use crate::field::Field;
use crate::flux::{CoefficientOverrides, CoefficientStrategy, SchemeConfig};
use crate::math;
use crate::mesh::StructuredMesh;
use crate::solver::{Solver, SolverConfig, TimeIntegrator};
use crate::state::{Gas, Primitive};

/// Perturbation amplitudes `(rho, u, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSetup {
    /// Mean shear velocity.
    pub u0: f64,
    pub amplitudes: Amplitudes,
    /// `a dt / dy` with the mean sound speed.
    pub nu: f64,
    /// Forced value of the multi-dimensional sensor.
    pub fp1: Option<f64>,
}

impl Default for PerturbationSetup {
    fn default() -> Self {
        Self {
            u0: 0.0,
            amplitudes: Amplitudes {
                rho: 1e-8,
                u: 0.7e-8,
                p: 0.5e-8,
            },
            nu: 0.2,
            fp1: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationRun {
    pub scheme: CoefficientStrategy,
    pub nu: f64,
    pub fp1: Option<f64>,
    pub before: Amplitudes,
    pub after: Amplitudes,
    /// `nu` recovered from the pressure row, `(1 - p'/p) / 2`.
    pub nu_from_pressure: f64,
}

impl PerturbationRun {
    /// Closed-form amplitudes after one step for the run's scheme.
    pub fn predicted(&self, gamma: f64) -> Amplitudes {
        let nu = self.nu;
        let b = self.before;
        let fp1 = self.fp1.unwrap_or(1.0);
        let (rho, u) = match self.scheme {
            CoefficientStrategy::HllemPark => (b.rho - 2.0 * nu / gamma * b.p, b.u),
            CoefficientStrategy::HllCps => (b.rho - 2.0 * nu / gamma * b.p, b.u * (1.0 - 2.0 * nu / gamma)),
            CoefficientStrategy::HllemFp | CoefficientStrategy::HllCpsFp => (
                b.rho * (1.0 - 2.0 * nu * (1.0 - fp1)) - 2.0 * nu / gamma * fp1 * b.p,
                b.u * (1.0 - 2.0 * nu * (1.0 - fp1)),
            ),
            CoefficientStrategy::Hlle => (b.rho * (1.0 - 2.0 * nu), b.u * (1.0 - 2.0 * nu)),
            _ => (f64::NAN, f64::NAN),
        };
        Amplitudes {
            rho,
            u,
            p: b.p * (1.0 - 2.0 * nu),
        }
    }
}

const ROWS: usize = 4;

/// One step from a signed perturbation; returns the amplitude of row 0.
fn one_step(strategy: CoefficientStrategy, setup: &PerturbationSetup, sign: f64, gas: &Gas) -> Result<Amplitudes> {
    let mesh = StructuredMesh::rectangle(1, ROWS, 0.0, 1.0, 0.0, 1.0)?
        .with_periodic_i(true)
        .with_periodic_j(true);
    let bc = BoundaryConditions::uniform(&mesh, BoundaryKind::Periodic)?;
    let dy = 1.0 / ROWS as f64;
    let a = Amplitudes {
        rho: sign * setup.amplitudes.rho,
        u: sign * setup.amplitudes.u,
        p: sign * setup.amplitudes.p,
    };
    let mut field = Field::from_fn(&mesh, gas, |c| {
        let row = (c[1] / dy) as usize;
        let s = if row.is_multiple_of(2) { 1.0 } else { -1.0 };
        Primitive::new(1.0 + s * a.rho, setup.u0 + s * a.u, 0.0, 1.0 + s * a.p)
    });
    let scheme = SchemeConfig::new(strategy).with_overrides(CoefficientOverrides {
        fp1: setup.fp1,
        ..Default::default()
    });
    let mut cfg = SolverConfig::new(scheme);
    cfg.integrator = TimeIntegrator::Euler;
    let mut solver = Solver::new(mesh, bc, *gas, cfg);
    let dt = setup.nu * dy / math::sqrt(gas.gamma);
    solver.step(&mut field, 0.0, dt)?;
    let w = field.primitive(0, 0, gas)?;
    Ok(Amplitudes {
        rho: w.rho - 1.0,
        u: w.u - setup.u0,
        p: w.p - 1.0,
    })
}

/// Measure the one-step evolution of the saw-tooth amplitudes.
pub fn perturbation_experiment(
    strategy: CoefficientStrategy,
    setup: &PerturbationSetup,
    gas: &Gas,
) -> Result<PerturbationRun> {
    let plus = one_step(strategy, setup, 1.0, gas)?;
    let minus = one_step(strategy, setup, -1.0, gas)?;
    let after = Amplitudes {
        rho: 0.5 * (plus.rho - minus.rho),
        u: 0.5 * (plus.u - minus.u),
        p: 0.5 * (plus.p - minus.p),
    };
    let before = setup.amplitudes;
    Ok(PerturbationRun {
        scheme: strategy,
        nu: setup.nu,
        fp1: setup.fp1,
        before,
        after,
        nu_from_pressure: 0.5 * (1.0 - after.p / before.p),
    })
}

/// Runs for every scheme of the table and every forced sensor value.
pub fn perturbation_table(setup: &PerturbationSetup, fp1_values: &[f64], gas: &Gas) -> Result<alloc::vec::Vec<PerturbationRun>> {
    let mut out = vec![];
    for s in [CoefficientStrategy::HllCps, CoefficientStrategy::HllemPark] {
        out.push(perturbation_experiment(s, &PerturbationSetup { fp1: None, ..*setup }, gas)?);
    }
    for s in [CoefficientStrategy::HllCpsFp, CoefficientStrategy::HllemFp] {
        for &f in fp1_values {
            out.push(perturbation_experiment(s, &PerturbationSetup { fp1: Some(f), ..*setup }, gas)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn zero_courant_leaves_perturbations() {
        let gas = Gas::AIR;
        let setup = PerturbationSetup {
            nu: 0.0,
            ..Default::default()
        };
        let r = perturbation_experiment(CoefficientStrategy::HllemFp, &setup, &gas).unwrap();
        assert!(rel(r.after.rho, r.before.rho) < 1e-7);
        assert!(rel(r.after.u, r.before.u) < 1e-7);
        assert!(rel(r.after.p, r.before.p) < 1e-7);
    }

    #[test]
    fn hllem_keeps_shear_and_density_without_pressure() {
        let gas = Gas::AIR;
        let setup = PerturbationSetup {
            amplitudes: Amplitudes {
                rho: 1e-8,
                u: 1e-8,
                p: 0.0,
            },
            ..Default::default()
        };
        let r = perturbation_experiment(CoefficientStrategy::HllemPark, &setup, &gas).unwrap();
        assert!(rel(r.after.rho, 1e-8) < 1e-6);
        assert!(rel(r.after.u, 1e-8) < 1e-6);
    }

    #[test]
    fn strong_shock_limit_damps_like_hlle() {
        let gas = Gas::AIR;
        let setup = PerturbationSetup {
            fp1: Some(0.0),
            ..Default::default()
        };
        let r = perturbation_experiment(CoefficientStrategy::HllemFp, &setup, &gas).unwrap();
        assert!(rel(r.after.rho, r.before.rho * (1.0 - 2.0 * setup.nu)) < 1e-6);
    }

    #[test]
    fn measured_rows_match_closed_forms() {
        let gas = Gas::AIR;
        let setup = PerturbationSetup {
            u0: 0.3,
            ..Default::default()
        };
        for r in perturbation_table(&setup, &[0.0, 0.5, 1.0], &gas).unwrap() {
            let p = r.predicted(gas.gamma);
            assert!(rel(r.after.p, p.p) < 1e-6, "{:?}", r);
            assert!(rel(r.after.rho, p.rho) < 1e-6, "{:?} vs {:?}", r, p);
            assert!(rel(r.after.u, p.u) < 1e-6, "{:?} vs {:?}", r, p);
        }
    }
}
