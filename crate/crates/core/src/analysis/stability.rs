//! Matrix stability analysis of a grid-aligned steady shock.
//!
//! The semi-discrete residual `dU/dt = R(U)` is linearised about a thin
//! normal shock by finite differences; the shock is unstable under the
//! scheme when the resulting matrix has an eigenvalue with positive real
//! part beyond [`NEUTRAL_TOLERANCE`].
//!
//! At the shock face the Roe-averaged speed `u - a` vanishes exactly, so
//! the Einfeldt speed `min(0, ..)` sits on a kink. A one-sided difference
//! picks one branch per column and the resulting matrix mixes them, which
//! makes even HLLE look unstable. Central differences average the two
//! branches and are the default.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::{max_real_eigenvalue, DenseMatrix};
use crate::boundary::{BoundaryConditions, BoundaryKind, BoundaryPatch, Side};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::flux::SchemeConfig;
use crate::mesh::StructuredMesh;
use crate::solver::{Solver, SolverConfig};
use crate::state::{Conserved, Gas, Primitive};

/// Density and pressure ratio factors `(f, g)` of a normal shock at upstream Mach `mach`.
pub fn rankine_hugoniot_factors(mach: f64, gas: &Gas) -> (f64, f64) {
    let g = gas.gamma;
    let m2 = mach * mach;
    let f = 1.0 / (2.0 / ((g + 1.0) * m2) + (g - 1.0) / (g + 1.0));
    let p = 2.0 * g * m2 / (g + 1.0) - (g - 1.0) / (g + 1.0);
    (f, p)
}

/// Treatment of the top and bottom boundaries of the stability domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TransverseBoundary {
    #[default]
    ZeroGradient,
    Periodic,
}

/// Finite-difference stencil used for the Jacobian columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Difference {
    Forward,
    #[default]
    Central,
}

/// Relative size, against `|S|_inf`, below which a positive eigenvalue
/// counts as neutral (shock translation and finite-difference noise).
pub const NEUTRAL_TOLERANCE: f64 = 1e-8;

/// Normal shock standing at `x = 0.5` in the unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyShockSetup {
    pub mach: f64,
    pub left: Primitive,
    pub right: Primitive,
    pub ni: usize,
    pub nj: usize,
    /// Finite-difference step on conserved variables.
    pub epsilon: f64,
    pub difference: Difference,
    pub transverse: TransverseBoundary,
    /// Optional seeded random perturbation `(seed, amplitude)` of the base state.
    pub base_noise: Option<(u64, f64)>,
}

/// Upstream `(1, 1, 0, 1 / (gamma M^2))`, downstream from the jump relations.
///
/// `mach = 1` is accepted and gives two identical states.
pub fn steady_shock_state(mach: f64, gas: &Gas) -> Result<SteadyShockSetup> {
    if !(mach >= 1.0) || !mach.is_finite() {
        return Err(Error::SubsonicShock(mach));
    }
    let (f, g) = rankine_hugoniot_factors(mach, gas);
    let p0 = 1.0 / (gas.gamma * mach * mach);
    Ok(SteadyShockSetup {
        mach,
        left: Primitive::new(1.0, 1.0, 0.0, p0),
        right: Primitive::new(f, 1.0 / f, 0.0, g * p0),
        ni: 11,
        nj: 11,
        epsilon: 1e-6,
        difference: Difference::Central,
        transverse: TransverseBoundary::ZeroGradient,
        base_noise: None,
    })
}

impl SteadyShockSetup {
    /// Mesh, boundary conditions and base field on the unit square.
    ///
    /// Cells `i < ni / 2` take the upstream state, the rest the downstream
    /// state, so the shock sits on a single face with no intermediate cell.
    pub fn build(&self, gas: &Gas) -> Result<(StructuredMesh, BoundaryConditions, Field)> {
        let periodic = self.transverse == TransverseBoundary::Periodic;
        let mesh = StructuredMesh::rectangle(self.ni, self.nj, 0.0, 1.0, 0.0, 1.0)?.with_periodic_j(periodic);
        let side = if periodic {
            BoundaryKind::Periodic
        } else {
            BoundaryKind::ZeroGradient
        };
        let bc = BoundaryConditions::new(
            &mesh,
            vec![
                BoundaryPatch::whole(Side::West, BoundaryKind::SupersonicInflow(self.left)),
                BoundaryPatch::whole(Side::East, BoundaryKind::ZeroGradient),
                BoundaryPatch::whole(Side::South, side),
                BoundaryPatch::whole(Side::North, side),
            ],
        )?;
        let split = self.ni / 2;
        let mut field = Field::from_fn(&mesh, gas, |_| self.left);
        for j in 0..self.nj {
            for i in split..self.ni {
                field.set(i, j, self.right.to_conserved(gas));
            }
        }
        if let Some((seed, amp)) = self.base_noise {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for j in 0..self.nj {
                for i in 0..self.ni {
                    let u = field.get(i, j).to_array();
                    let mut v = [0.0; 4];
                    for k in 0..4 {
                        v[k] = u[k] + amp * rng.random_range(-1.0..1.0);
                    }
                    field.set(i, j, Conserved::from_array(v));
                }
            }
        }
        Ok((mesh, bc, field))
    }
}

/// Finite-difference Jacobian of the first-order residual about the setup's base state.
///
/// Unknown `4 * (i + j * ni) + k` is conserved component `k` of cell `(i, j)`.
pub fn build_stability_matrix(setup: &SteadyShockSetup, scheme: &SchemeConfig, gas: &Gas) -> Result<DenseMatrix> {
    let (mesh, bc, base) = setup.build(gas)?;
    let cells = mesh.cell_count();
    let n = 4 * cells;
    let ni = mesh.ni;
    let mut solver = Solver::new(mesh, bc, *gas, SolverConfig::new(*scheme));
    let mut work = base.clone();
    let r0: Vec<[f64; 4]> = solver.residual(&mut work, 0.0)?.to_vec();
    let mut s = DenseMatrix::zeros(n);
    let mut col = vec![0.0; n];
    let eps = setup.epsilon;
    for c in 0..cells {
        let (i, j) = (c % ni, c / ni);
        for k in 0..4 {
            work.clone_from(&base);
            let mut u = work.get(i, j).to_array();
            u[k] += eps;
            work.set(i, j, Conserved::from_array(u));
            let rp = solver.residual(&mut work, 0.0)?.to_vec();
            let (rm, h) = match setup.difference {
                Difference::Forward => (r0.clone(), eps),
                Difference::Central => {
                    work.clone_from(&base);
                    u[k] -= 2.0 * eps;
                    work.set(i, j, Conserved::from_array(u));
                    (solver.residual(&mut work, 0.0)?.to_vec(), 2.0 * eps)
                }
            };
            let column = 4 * c + k;
            for (m, (a, b)) in rp.iter().zip(&rm).enumerate() {
                for q in 0..4 {
                    col[4 * m + q] = (a[q] - b[q]) / h;
                }
            }
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteColumn { column });
            }
            s.set_column(column, &col);
        }
    }
    Ok(s)
}

/// Stability indicator `max Re(lambda)` for one scheme and Mach number.
pub fn shock_stability(setup: &SteadyShockSetup, scheme: &SchemeConfig, gas: &Gas) -> Result<ShockStability> {
    let s = build_stability_matrix(setup, scheme, gas)?;
    Ok(ShockStability {
        max_real: max_real_eigenvalue(&s)?,
        norm: s.norm_inf(),
    })
}

/// Largest real part of the stability spectrum with the matrix norm it is judged against.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShockStability {
    pub max_real: f64,
    pub norm: f64,
}

impl ShockStability {
    pub fn relative(&self) -> f64 {
        self.max_real / self.norm
    }

    /// True when a mode grows faster than the neutral tolerance allows.
    pub fn is_unstable(&self) -> bool {
        self.max_real > NEUTRAL_TOLERANCE * self.norm
    }
}
