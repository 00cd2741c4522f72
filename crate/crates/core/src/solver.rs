//! Residual assembly and explicit time integration.

use alloc::vec;
use alloc::vec::Vec;

use crate::boundary::BoundaryConditions;
use crate::error::{CellIndex, Error, Result};
use crate::field::{Field, GHOSTS};
use crate::flux::{interface_flux, pressure_sensor, FaceSensorField, SchemeConfig};
use crate::math;
use crate::mesh::{FaceGeometry, StructuredMesh};
use crate::reconstruct::ReconstructionConfig;
use crate::state::{unrotate_flux, Conserved, Gas, Primitive};

/// Density and pressure floor used by [`StatePolicy::Floor`].
pub const STATE_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TimeIntegrator {
    /// Single forward-Euler stage.
    Euler,
    /// Two-stage strong-stability-preserving Runge-Kutta.
    #[default]
    Rk2,
}

/// What to do with a cell that leaves the physical state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StatePolicy {
    /// Abort with the offending cell.
    #[default]
    Strict,
    /// Clamp density and pressure to [`STATE_FLOOR`].
    Floor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub scheme: SchemeConfig,
    pub reconstruction: ReconstructionConfig,
    pub integrator: TimeIntegrator,
    pub cfl: f64,
    pub policy: StatePolicy,
}

impl SolverConfig {
    pub fn new(scheme: impl Into<SchemeConfig>) -> Self {
        Self {
            scheme: scheme.into(),
            reconstruction: ReconstructionConfig::FIRST_ORDER,
            integrator: TimeIntegrator::Rk2,
            cfl: 0.5,
            policy: StatePolicy::Strict,
        }
    }
}

/// When a run ends.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StopRule {
    /// Integrate to exactly this time; the last step is shortened to land on it.
    Time(f64),
    /// Fixed step budget. With a tolerance, stop early once the L2 density
    /// residual has dropped by that factor relative to the first step.
    Iterations { max: usize, tolerance: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    TimeReached,
    BudgetExhausted,
    Converged,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub iteration: usize,
    pub time: f64,
    pub dt: f64,
    /// RMS of d(rho)/dt over fluid cells at the start of the step.
    pub residual_rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub iterations: usize,
    pub time: f64,
    pub reason: StopReason,
    pub first_residual: f64,
    pub last_residual: f64,
    pub fallbacks: u64,
}

/// Explicit finite-volume solver bound to one mesh and set of boundary conditions.
#[derive(Debug, Clone)]
pub struct Solver {
    mesh: StructuredMesh,
    bc: BoundaryConditions,
    gas: Gas,
    config: SolverConfig,
    prim: Vec<Primitive>,
    sensor: FaceSensorField,
    dudt: Vec<[f64; 4]>,
    stage: Option<Field>,
    fallbacks: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CellKind {
    Fluid,
    Solid,
    Ghost,
}

impl Solver {
    pub fn new(mesh: StructuredMesh, bc: BoundaryConditions, gas: Gas, config: SolverConfig) -> Self {
        let (ni, nj) = (mesh.ni, mesh.nj);
        Self {
            prim: vec![Primitive::default(); (ni + 2 * GHOSTS) * (nj + 2 * GHOSTS)],
            sensor: FaceSensorField::uniform(ni, nj),
            dudt: vec![[0.0; 4]; ni * nj],
            stage: None,
            fallbacks: 0,
            mesh,
            bc,
            gas,
            config,
        }
    }

    pub fn mesh(&self) -> &StructuredMesh {
        &self.mesh
    }

    pub fn boundary_conditions(&self) -> &BoundaryConditions {
        &self.bc
    }

    pub fn gas(&self) -> &Gas {
        &self.gas
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn config_mut(&mut self) -> &mut SolverConfig {
        &mut self.config
    }

    /// Faces where a reconstructed state was unphysical and first order was used instead.
    pub fn fallbacks(&self) -> u64 {
        self.fallbacks
    }

    /// Sensor values from the most recent residual evaluation.
    pub fn sensor(&self) -> &FaceSensorField {
        &self.sensor
    }

    #[inline]
    fn kind(&self, i: isize, j: isize) -> CellKind {
        let (ni, nj) = (self.mesh.ni as isize, self.mesh.nj as isize);
        if i < 0 || j < 0 || i >= ni || j >= nj {
            CellKind::Ghost
        } else if self.mesh.is_solid(i as usize, j as usize) {
            CellKind::Solid
        } else {
            CellKind::Fluid
        }
    }

    #[inline]
    fn pidx(&self, i: isize, j: isize) -> usize {
        (i + GHOSTS as isize) as usize + (j + GHOSTS as isize) as usize * (self.mesh.ni + 2 * GHOSTS)
    }

    /// Fill ghosts, then compute `dU/dt` for every interior cell (zero in solid cells).
    pub fn residual(&mut self, field: &mut Field, t: f64) -> Result<&[[f64; 4]]> {
        self.bc.apply(field, &self.mesh, &self.gas, t);
        self.update_primitives(field)?;
        if self.config.scheme.needs_sensor() {
            self.update_sensor()?;
        }
        self.assemble()?;
        Ok(&self.dudt)
    }

    fn update_primitives(&mut self, field: &Field) -> Result<()> {
        let (ni, nj) = (self.mesh.ni as isize, self.mesh.nj as isize);
        let g = GHOSTS as isize;
        for j in -g..nj + g {
            for i in -g..ni + g {
                let k = self.pidx(i, j);
                let u = field.raw()[field.index(i, j)];
                let kind = self.kind(i, j);
                let w = if kind == CellKind::Solid {
                    Primitive::new(1.0, 0.0, 0.0, 1.0)
                } else {
                    let w = u.to_primitive_unchecked(&self.gas);
                    match (w.check(), self.config.policy) {
                        (Ok(()), _) => w,
                        (Err(e), StatePolicy::Strict) => {
                            let corner = (i < 0 || i >= ni) && (j < 0 || j >= nj);
                            if corner {
                                w
                            } else if kind == CellKind::Fluid {
                                return Err(e.at(CellIndex::new(i as usize, j as usize)));
                            } else {
                                return Err(e);
                            }
                        }
                        (Err(_), StatePolicy::Floor) => w.floored(STATE_FLOOR),
                    }
                };
                self.prim[k] = w;
            }
        }
        Ok(())
    }

    fn update_sensor(&mut self) -> Result<()> {
        let (ni, nj) = (self.mesh.ni, self.mesh.nj);
        for j in 0..nj {
            for fi in 0..=ni {
                let (l, r) = ((fi as isize - 1, j as isize), (fi as isize, j as isize));
                match self.face_kind(l, r) {
                    FaceKind::Interior => {
                        let fp = pressure_sensor(self.prim[self.pidx(l.0, l.1)].p, self.prim[self.pidx(r.0, r.1)].p)?;
                        self.sensor.set_fp_i(fi, j, fp);
                    }
                    FaceKind::WallLeft | FaceKind::WallRight => self.sensor.set_fp_i(fi, j, 1.0),
                    FaceKind::Inactive => self.sensor.deactivate_i(fi, j),
                }
            }
        }
        for fj in 0..=nj {
            for i in 0..ni {
                let (l, r) = ((i as isize, fj as isize - 1), (i as isize, fj as isize));
                match self.face_kind(l, r) {
                    FaceKind::Interior => {
                        let fp = pressure_sensor(self.prim[self.pidx(l.0, l.1)].p, self.prim[self.pidx(r.0, r.1)].p)?;
                        self.sensor.set_fp_j(i, fj, fp);
                    }
                    FaceKind::WallLeft | FaceKind::WallRight => self.sensor.set_fp_j(i, fj, 1.0),
                    FaceKind::Inactive => self.sensor.deactivate_j(i, fj),
                }
            }
        }
        self.sensor
            .update_stencil_min(self.mesh.periodic_i(), self.mesh.periodic_j());
        Ok(())
    }

    #[inline]
    fn face_kind(&self, l: (isize, isize), r: (isize, isize)) -> FaceKind {
        match (self.kind(l.0, l.1), self.kind(r.0, r.1)) {
            (CellKind::Solid, CellKind::Fluid) => FaceKind::WallLeft,
            (CellKind::Fluid, CellKind::Solid) => FaceKind::WallRight,
            (CellKind::Solid, _) | (_, CellKind::Solid) => FaceKind::Inactive,
            _ => FaceKind::Interior,
        }
    }

    fn assemble(&mut self) -> Result<()> {
        let (ni, nj) = (self.mesh.ni, self.mesh.nj);
        for d in self.dudt.iter_mut() {
            *d = [0.0; 4];
        }
        let sensor_on = self.config.scheme.needs_sensor();
        for j in 0..nj {
            for fi in 0..=ni {
                let fp1 = if sensor_on { self.sensor.fp1_i_face(fi, j) } else { 1.0 };
                let jj = j as isize;
                let cells = [
                    (fi as isize - 2, jj),
                    (fi as isize - 1, jj),
                    (fi as isize, jj),
                    (fi as isize + 1, jj),
                ];
                let geom = *self.mesh.i_face(fi, j);
                self.face_flux(cells, &geom, fp1)?;
            }
        }
        for fj in 0..=nj {
            for i in 0..ni {
                let fp1 = if sensor_on { self.sensor.fp1_j_face(i, fj) } else { 1.0 };
                let ii = i as isize;
                let cells = [
                    (ii, fj as isize - 2),
                    (ii, fj as isize - 1),
                    (ii, fj as isize),
                    (ii, fj as isize + 1),
                ];
                let geom = *self.mesh.j_face(i, fj);
                self.face_flux(cells, &geom, fp1)?;
            }
        }
        for j in 0..nj {
            for i in 0..ni {
                let inv = 1.0 / self.mesh.area(i, j);
                let d = &mut self.dudt[i + j * ni];
                for v in d.iter_mut() {
                    *v *= inv;
                }
            }
        }
        Ok(())
    }

    /// Flux through one face, accumulated into its fluid neighbours.
    fn face_flux(&mut self, cells: [(isize, isize); 4], geom: &FaceGeometry, fp1: f64) -> Result<()> {
        let (l, r) = (cells[1], cells[2]);
        let n = geom.normal;
        let (wl, wr) = match self.face_kind(l, r) {
            FaceKind::Inactive => return Ok(()),
            FaceKind::WallRight => {
                let w = self.prim[self.pidx(l.0, l.1)].rotate(n);
                (w, w.mirrored())
            }
            FaceKind::WallLeft => {
                let w = self.prim[self.pidx(r.0, r.1)].rotate(n);
                (w.mirrored(), w)
            }
            FaceKind::Interior => {
                let rec = &self.config.reconstruction;
                let second = !rec.is_first_order() && cells.iter().all(|c| self.kind(c.0, c.1) != CellKind::Solid);
                let line = cells.map(|c| &self.prim[self.pidx(c.0, c.1)]);
                let (mut pl, mut pr) = (*line[1], *line[2]);
                if second {
                    let (a, b) = rec.face_states(line);
                    if a.check().is_ok() && b.check().is_ok() {
                        pl = a;
                        pr = b;
                    } else {
                        self.fallbacks += 1;
                    }
                }
                (pl.rotate(n), pr.rotate(n))
            }
        };
        let f = interface_flux(&wl, &wr, &self.config.scheme, fp1, &self.gas).map_err(|e| {
            let (c, _) = if self.kind(l.0, l.1) == CellKind::Fluid { (l, r) } else { (r, l) };
            match e {
                Error::UnphysicalInterface { .. } | Error::DegenerateWaveSpeeds { .. } => e,
                other => other.at(CellIndex::new(c.0.max(0) as usize, c.1.max(0) as usize)),
            }
        })?;
        let f = unrotate_flux(&f, n);
        let ni = self.mesh.ni;
        if self.kind(l.0, l.1) == CellKind::Fluid {
            let d = &mut self.dudt[l.0 as usize + l.1 as usize * ni];
            for k in 0..4 {
                d[k] -= f[k] * geom.length;
            }
        }
        if self.kind(r.0, r.1) == CellKind::Fluid {
            let d = &mut self.dudt[r.0 as usize + r.1 as usize * ni];
            for k in 0..4 {
                d[k] += f[k] * geom.length;
            }
        }
        Ok(())
    }

    /// Stable time step for the current field.
    pub fn time_step(&self, field: &Field) -> Result<f64> {
        compute_time_step(field, &self.mesh, self.config.cfl, &self.gas)
    }

    /// RMS of the density residual over fluid cells from the last evaluation.
    pub fn density_residual_rms(&self) -> f64 {
        let mut sum = 0.0;
        let mut n = 0usize;
        for j in 0..self.mesh.nj {
            for i in 0..self.mesh.ni {
                if !self.mesh.is_solid(i, j) {
                    let r = self.dudt[i + j * self.mesh.ni][0];
                    sum += r * r;
                    n += 1;
                }
            }
        }
        math::sqrt(sum / n.max(1) as f64)
    }

    /// Advance `field` by one step of size `dt` from time `t`.
    ///
    /// Returns the density residual of the first stage.
    pub fn step(&mut self, field: &mut Field, t: f64, dt: f64) -> Result<f64> {
        self.residual(field, t)?;
        let res0 = self.density_residual_rms();
        match self.config.integrator {
            TimeIntegrator::Euler => {
                self.update(field, dt, None)?;
            }
            TimeIntegrator::Rk2 => {
                let mut base = self.stage.take().unwrap_or_else(|| field.clone());
                base.clone_from(field);
                self.update(field, dt, None)?;
                self.residual(field, t + dt)?;
                self.update(field, dt, Some(&base))?;
                self.stage = Some(base);
            }
        }
        Ok(res0)
    }

    /// `U <- U + dt L` or, with a base state, `U <- (U_base + U + dt L) / 2`.
    fn update(&self, field: &mut Field, dt: f64, base: Option<&Field>) -> Result<()> {
        let ni = self.mesh.ni;
        for j in 0..self.mesh.nj {
            for i in 0..ni {
                if self.mesh.is_solid(i, j) {
                    continue;
                }
                let d = &self.dudt[i + j * ni];
                let mut u = field.get(i, j).axpy(dt, d);
                if let Some(b) = base {
                    let b = b.get(i, j);
                    u = Conserved::new(
                        0.5 * (b.rho + u.rho),
                        0.5 * (b.mom_x + u.mom_x),
                        0.5 * (b.mom_y + u.mom_y),
                        0.5 * (b.energy + u.energy),
                    );
                }
                if let Err(e) = u.to_primitive(&self.gas) {
                    match self.config.policy {
                        StatePolicy::Strict => return Err(e.at(CellIndex::new(i, j))),
                        StatePolicy::Floor => {
                            if !u.is_finite() {
                                return Err(e.at(CellIndex::new(i, j)));
                            }
                            u = u
                                .to_primitive_unchecked(&self.gas)
                                .floored(STATE_FLOOR)
                                .to_conserved(&self.gas);
                        }
                    }
                }
                field.set(i, j, u);
            }
        }
        Ok(())
    }

    /// Integrate until the stop rule fires, reporting every step to `observe`.
    pub fn run(
        &mut self,
        field: &mut Field,
        t0: f64,
        stop: StopRule,
        mut observe: impl FnMut(&StepInfo, &Field),
    ) -> Result<RunSummary> {
        let mut t = t0;
        let mut it = 0usize;
        let mut first = None;
        let mut last = 0.0;
        let reason = loop {
            let mut dt = self.time_step(field)?;
            match stop {
                StopRule::Time(end) => {
                    let remaining = end - t;
                    if remaining <= 1e-14 * end.abs().max(1.0) {
                        break StopReason::TimeReached;
                    }
                    dt = dt.min(remaining);
                }
                StopRule::Iterations { max, .. } => {
                    if it >= max {
                        break StopReason::BudgetExhausted;
                    }
                }
            }
            let r = self.step(field, t, dt)?;
            if !r.is_finite() {
                return Err(Error::NonFinite { location: Default::default() });
            }
            t += dt;
            it += 1;
            let r0 = *first.get_or_insert(r);
            last = r;
            observe(
                &StepInfo {
                    iteration: it,
                    time: t,
                    dt,
                    residual_rho: r,
                },
                field,
            );
            if let StopRule::Iterations { tolerance: Some(tol), .. } = stop {
                if r0 > 0.0 && r <= tol * r0 {
                    break StopReason::Converged;
                }
            }
        };
        Ok(RunSummary {
            iterations: it,
            time: t,
            reason,
            first_residual: first.unwrap_or(0.0),
            last_residual: last,
            fallbacks: self.fallbacks,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FaceKind {
    Interior,
    /// Solid cell on the left.
    WallLeft,
    /// Solid cell on the right.
    WallRight,
    Inactive,
}

/// `cfl * min(area / sum((|u_n| + a) * length))` over fluid cells.
pub fn compute_time_step(field: &Field, mesh: &StructuredMesh, cfl: f64, gas: &Gas) -> Result<f64> {
    let mut dt = f64::INFINITY;
    for j in 0..mesh.nj {
        for i in 0..mesh.ni {
            if mesh.is_solid(i, j) {
                continue;
            }
            let w = field.primitive(i, j, gas)?;
            let a = gas.sound_speed(w.rho, w.p);
            let mut s = 0.0;
            for f in [mesh.i_face(i, j), mesh.i_face(i + 1, j), mesh.j_face(i, j), mesh.j_face(i, j + 1)] {
                let un = w.u * f.normal.nx + w.v * f.normal.ny;
                s += (un.abs() + a) * f.length;
            }
            dt = dt.min(mesh.area(i, j) / s);
        }
    }
    Ok(cfl * dt)
}

/// One two-stage SSP Runge-Kutta step for a generic system `u' = L(u)`.
pub fn rk2_advance(u: &[f64], dt: f64, mut l: impl FnMut(&[f64]) -> Vec<f64>) -> Vec<f64> {
    let k0 = l(u);
    let u1: Vec<f64> = u.iter().zip(&k0).map(|(a, b)| a + dt * b).collect();
    let k1 = l(&u1);
    u.iter()
        .zip(u1.iter().zip(&k1))
        .map(|(a, (b, c))| 0.5 * a + 0.5 * (b + dt * c))
        .collect()
}
