//! Ghost-cell boundary conditions.
//!
//! Each side of the mesh is covered by one or more patches. A patch spans a
//! half-open range of cell indices along its side; later patches override
//! earlier ones where they overlap.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Field, GHOSTS};
use crate::math;
use crate::mesh::StructuredMesh;
use crate::state::{Gas, Normal, Primitive};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    /// `i = 0`
    West,
    /// `i = ni`
    East,
    /// `j = 0`
    South,
    /// `j = nj`
    North,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::West, Side::East, Side::South, Side::North];

    fn slot(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::West => Side::East,
            Side::East => Side::West,
            Side::South => Side::North,
            Side::North => Side::South,
        }
    }
}

/// Straight shock moving at constant speed along its normal.
///
/// At `t = 0` the shock crosses `y = 0` at `foot_x` and makes angle `angle`
/// (radians) with the x axis. Points left of the front are post-shock.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct MovingShock {
    pub foot_x: f64,
    pub angle: f64,
    pub speed: f64,
    pub pre: Primitive,
    pub post: Primitive,
}

impl MovingShock {
    /// x position of the front at height `y` and time `t`.
    pub fn front_x(&self, y: f64, t: f64) -> f64 {
        let (s, c) = (math::sin(self.angle), math::cos(self.angle));
        self.foot_x + (y * c + self.speed * t) / s
    }

    pub fn state_at(&self, x: f64, y: f64, t: f64) -> Primitive {
        if x < self.front_x(y, t) {
            self.post
        } else {
            self.pre
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BoundaryKind {
    /// Every ghost holds the given state.
    SupersonicInflow(Primitive),
    /// Every ghost holds the given post-shock state.
    PrescribedPostShock(Primitive),
    /// Ghosts copy the adjacent interior cell.
    ZeroGradient,
    /// Linear extrapolation of primitives; copies the interior where that is unphysical.
    Extrapolation,
    /// Mirror image with the normal velocity reversed.
    ReflectiveWall,
    /// Riemann-invariant far field around the given free stream.
    FarField(Primitive),
    /// Ghosts copy cells from the opposite side.
    Periodic,
    /// Pre- or post-shock state by position relative to a moving shock.
    MovingShock(MovingShock),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct BoundaryPatch {
    pub side: Side,
    /// Cell range along the side; `None` covers the whole side.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub range: Option<(usize, usize)>,
    pub kind: BoundaryKind,
}

impl BoundaryPatch {
    pub fn whole(side: Side, kind: BoundaryKind) -> Self {
        Self { side, range: None, kind }
    }

    pub fn range(side: Side, start: usize, end: usize, kind: BoundaryKind) -> Self {
        Self {
            side,
            range: Some((start, end)),
            kind,
        }
    }
}

/// Resolved boundary conditions for one mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryConditions {
    patches: Vec<BoundaryPatch>,
    /// Patch index for each cell along each side.
    owner: [Vec<usize>; 4],
}

fn side_len(mesh: &StructuredMesh, side: Side) -> usize {
    match side {
        Side::West | Side::East => mesh.nj,
        Side::South | Side::North => mesh.ni,
    }
}

impl BoundaryConditions {
    /// Validate patch coverage and periodic pairing against `mesh`.
    pub fn new(mesh: &StructuredMesh, patches: Vec<BoundaryPatch>) -> Result<Self> {
        let mut owner: [Vec<usize>; 4] = Side::ALL.map(|s| vec![usize::MAX; side_len(mesh, s)]);
        for (k, p) in patches.iter().enumerate() {
            let n = side_len(mesh, p.side);
            let (a, b) = p.range.unwrap_or((0, n));
            if a >= b || b > n {
                return Err(Error::Invalid(format!(
                    "boundary patch range {a}..{b} on {:?} side of length {n}",
                    p.side
                )));
            }
            for o in &mut owner[p.side.slot()][a..b] {
                *o = k;
            }
        }
        for side in Side::ALL {
            if owner[side.slot()].contains(&usize::MAX) {
                return Err(Error::Invalid(format!("{side:?} boundary not fully covered")));
            }
            let periodic = owner[side.slot()]
                .iter()
                .map(|o| matches!(patches[*o].kind, BoundaryKind::Periodic))
                .collect::<Vec<_>>();
            let any = periodic.iter().any(|p| *p);
            if any && !periodic.iter().all(|p| *p) {
                return Err(Error::Invalid(format!(
                    "{side:?} boundary mixes periodic and non-periodic patches"
                )));
            }
            let flag = match side {
                Side::West | Side::East => mesh.periodic_i(),
                Side::South | Side::North => mesh.periodic_j(),
            };
            if any != flag {
                return Err(Error::Invalid(format!(
                    "{side:?} boundary periodicity does not match the mesh"
                )));
            }
        }
        Ok(Self { patches, owner })
    }

    /// Same kind on all four sides.
    pub fn uniform(mesh: &StructuredMesh, kind: BoundaryKind) -> Result<Self> {
        Self::new(mesh, Side::ALL.map(|s| BoundaryPatch::whole(s, kind)).to_vec())
    }

    pub fn patches(&self) -> &[BoundaryPatch] {
        &self.patches
    }

    pub fn kind_at(&self, side: Side, k: usize) -> &BoundaryKind {
        &self.patches[self.owner[side.slot()][k]].kind
    }

    /// Fill both ghost layers on every side for time `t`.
    pub fn apply(&self, field: &mut Field, mesh: &StructuredMesh, gas: &Gas, t: f64) {
        for side in Side::ALL {
            for k in 0..side_len(mesh, side) {
                let kind = *self.kind_at(side, k);
                apply_one(field, mesh, gas, t, side, k, &kind);
            }
        }
    }
}

/// Interior cell at depth `l` from the boundary, and the ghost mirroring it.
fn cells(mesh: &StructuredMesh, side: Side, k: usize, l: usize) -> ((isize, isize), (isize, isize)) {
    let (k, l) = (k as isize, l as isize);
    let (ni, nj) = (mesh.ni as isize, mesh.nj as isize);
    match side {
        Side::West => ((l, k), (-1 - l, k)),
        Side::East => ((ni - 1 - l, k), (ni + l, k)),
        Side::South => ((k, l), (k, -1 - l)),
        Side::North => ((k, nj - 1 - l), (k, nj + l)),
    }
}

/// Boundary face normal pointing out of the domain, and the face centre.
fn outward(mesh: &StructuredMesh, side: Side, k: usize) -> (Normal, [f64; 2]) {
    match side {
        Side::West => {
            let f = mesh.i_face(0, k);
            (f.normal.reversed(), f.center)
        }
        Side::East => {
            let f = mesh.i_face(mesh.ni, k);
            (f.normal, f.center)
        }
        Side::South => {
            let f = mesh.j_face(k, 0);
            (f.normal.reversed(), f.center)
        }
        Side::North => {
            let f = mesh.j_face(k, mesh.nj);
            (f.normal, f.center)
        }
    }
}

fn apply_one(
    field: &mut Field,
    mesh: &StructuredMesh,
    gas: &Gas,
    t: f64,
    side: Side,
    k: usize,
    kind: &BoundaryKind,
) {
    let prim = |field: &Field, c: (isize, isize)| field.at(c.0, c.1).to_primitive_unchecked(gas);
    for l in 0..GHOSTS {
        let (inner, ghost) = cells(mesh, side, k, l);
        let value = match kind {
            BoundaryKind::SupersonicInflow(w) | BoundaryKind::PrescribedPostShock(w) => w.to_conserved(gas),
            BoundaryKind::ZeroGradient => *field.at(cells(mesh, side, k, 0).0 .0, cells(mesh, side, k, 0).0 .1),
            BoundaryKind::Extrapolation => {
                let (c0, _) = cells(mesh, side, k, 0);
                let (c1, _) = cells(mesh, side, k, 1);
                let w0 = prim(field, c0);
                let w1 = prim(field, c1);
                let s = (l + 1) as f64;
                let w = Primitive::new(
                    w0.rho + s * (w0.rho - w1.rho),
                    w0.u + s * (w0.u - w1.u),
                    w0.v + s * (w0.v - w1.v),
                    w0.p + s * (w0.p - w1.p),
                );
                if w.check().is_ok() { w } else { w0 }.to_conserved(gas)
            }
            BoundaryKind::ReflectiveWall => {
                let (n, _) = outward(mesh, side, k);
                prim(field, inner).rotate(n).mirrored().unrotate(n).to_conserved(gas)
            }
            BoundaryKind::FarField(inf) => {
                let (n, _) = outward(mesh, side, k);
                let (c0, _) = cells(mesh, side, k, 0);
                far_field_state(&prim(field, c0), inf, n, gas).to_conserved(gas)
            }
            BoundaryKind::Periodic => {
                let (ni, nj) = (mesh.ni as isize, mesh.nj as isize);
                let (gi, gj) = ghost;
                let src = match side {
                    Side::West | Side::East => (gi.rem_euclid(ni), gj),
                    Side::South | Side::North => (gi, gj.rem_euclid(nj)),
                };
                *field.at(src.0, src.1)
            }
            BoundaryKind::MovingShock(s) => {
                let (_, c) = outward(mesh, side, k);
                s.state_at(c[0], c[1], t).to_conserved(gas)
            }
        };
        *field.at_mut(ghost.0, ghost.1) = value;
    }
}

/// Characteristic far-field state from Riemann invariants normal to the boundary.
///
/// `n` points out of the domain. The outgoing invariant comes from the
/// interior, the incoming one from the free stream; entropy and tangential
/// velocity are taken from whichever side the flow enters from.
pub fn far_field_state(interior: &Primitive, free: &Primitive, n: Normal, gas: &Gas) -> Primitive {
    let g = gas.gamma;
    let wi = interior.rotate(n);
    let wf = free.rotate(n);
    let ai = gas.sound_speed(interior.rho, interior.p);
    let af = gas.sound_speed(free.rho, free.p);
    let r_out = wi.un + 2.0 * ai / (g - 1.0);
    let r_in = wf.un - 2.0 * af / (g - 1.0);
    let un = 0.5 * (r_out + r_in);
    let a = 0.25 * (g - 1.0) * (r_out - r_in);
    let (src, ut) = if un < 0.0 { (free, wf.ut) } else { (interior, wi.ut) };
    let entropy = src.p / math::powf(src.rho, g);
    let rho = math::powf(a * a / (g * entropy), 1.0 / (g - 1.0));
    let p = rho * a * a / g;
    crate::state::FaceState::new(rho, un, ut, p).unrotate(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Conserved;
    use approx::assert_relative_eq;

    fn mesh() -> StructuredMesh {
        StructuredMesh::rectangle(4, 3, 0.0, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn wall_ghost_mirrors_normal_velocity() {
        let m = mesh();
        let gas = Gas::AIR;
        let mut f = Field::from_fn(&m, &gas, |_| Primitive::new(1.0, 2.0, 3.0, 1.0));
        let bc = BoundaryConditions::uniform(&m, BoundaryKind::ReflectiveWall).unwrap();
        bc.apply(&mut f, &m, &gas, 0.0);
        // West wall, normal along x: u_n = u flips, tangential v kept
        let w = f.at(-1, 1).to_primitive(&gas).unwrap();
        assert_relative_eq!(w.u, -2.0);
        assert_relative_eq!(w.v, 3.0);
        assert_relative_eq!(w.rho, 1.0);
        assert_relative_eq!(w.p, 1.0, max_relative = 1e-14);
        let w = f.at(2, 4).to_primitive(&gas).unwrap();
        assert_relative_eq!(w.u, 2.0);
        assert_relative_eq!(w.v, -3.0);
    }

    #[test]
    fn zero_gradient_copies_adjacent_cell() {
        let m = mesh();
        let gas = Gas::AIR;
        let mut f = Field::from_fn(&m, &gas, |c| Primitive::new(1.0 + c[0], 0.0, 0.0, 1.0));
        let bc = BoundaryConditions::uniform(&m, BoundaryKind::ZeroGradient).unwrap();
        bc.apply(&mut f, &m, &gas, 0.0);
        assert_eq!(f.at(4, 1), f.get(3, 1));
        assert_eq!(f.at(5, 1), f.get(3, 1));
        assert_eq!(f.at(-2, 0), f.get(0, 0));
    }

    #[test]
    fn periodic_copies_opposite_side() {
        let m = mesh().with_periodic_i(true);
        let gas = Gas::AIR;
        let mut f = Field::from_fn(&m, &gas, |c| Primitive::new(1.0 + c[0], 0.0, 0.0, 1.0));
        let patches = vec![
            BoundaryPatch::whole(Side::West, BoundaryKind::Periodic),
            BoundaryPatch::whole(Side::East, BoundaryKind::Periodic),
            BoundaryPatch::whole(Side::South, BoundaryKind::ZeroGradient),
            BoundaryPatch::whole(Side::North, BoundaryKind::ZeroGradient),
        ];
        let bc = BoundaryConditions::new(&m, patches).unwrap();
        bc.apply(&mut f, &m, &gas, 0.0);
        assert_eq!(f.at(-1, 2), f.get(3, 2));
        assert_eq!(f.at(-2, 2), f.get(2, 2));
        assert_eq!(f.at(4, 2), f.get(0, 2));
        assert_eq!(f.at(5, 2), f.get(1, 2));
    }

    #[test]
    fn coverage_and_periodicity_are_validated() {
        let m = mesh();
        let partial = vec![BoundaryPatch::range(Side::West, 0, 2, BoundaryKind::ZeroGradient)];
        assert!(BoundaryConditions::new(&m, partial).is_err());
        assert!(BoundaryConditions::uniform(&m, BoundaryKind::Periodic).is_err());
    }

    #[test]
    fn later_patch_overrides_earlier() {
        let m = mesh();
        let inflow = Primitive::new(2.0, 1.0, 0.0, 1.0);
        let mut patches: Vec<_> = Side::ALL
            .map(|s| BoundaryPatch::whole(s, BoundaryKind::ZeroGradient))
            .to_vec();
        patches.push(BoundaryPatch::range(Side::South, 1, 3, BoundaryKind::SupersonicInflow(inflow)));
        let bc = BoundaryConditions::new(&m, patches).unwrap();
        assert_eq!(*bc.kind_at(Side::South, 0), BoundaryKind::ZeroGradient);
        assert_eq!(*bc.kind_at(Side::South, 2), BoundaryKind::SupersonicInflow(inflow));
        let gas = Gas::AIR;
        let mut f = Field::uniform(4, 3, Conserved::new(1.0, 0.0, 0.0, 2.5));
        bc.apply(&mut f, &m, &gas, 0.0);
        assert_eq!(*f.at(1, -1), inflow.to_conserved(&gas));
    }

    #[test]
    fn moving_shock_foot_on_top_wall() {
        let s = MovingShock {
            foot_x: 1.0 / 6.0,
            angle: core::f64::consts::FRAC_PI_3,
            speed: 10.0,
            pre: Primitive::new(1.4, 0.0, 0.0, 1.0),
            post: Primitive::new(8.0, 7.1447, -4.125, 116.5),
        };
        let expected = 1.0 / 6.0 + 1.0 / core::f64::consts::FRAC_PI_3.tan();
        assert_relative_eq!(s.front_x(1.0, 0.0), expected, max_relative = 1e-14);
        assert_relative_eq!(s.front_x(1.0, 0.1), 1.0 / 6.0 + 3.0 / 3f64.sqrt(), max_relative = 1e-14);
        assert_eq!(s.state_at(0.5, 1.0, 0.0), s.post);
        assert_eq!(s.state_at(0.8, 1.0, 0.0), s.pre);
    }

    #[test]
    fn far_field_reproduces_free_stream() {
        let gas = Gas::AIR;
        let free = Primitive::new(1.0, 0.1, 0.0, 1.0 / 1.4);
        for n in [Normal::X, Normal::Y, Normal::X.reversed(), Normal::from_vector(0.6, -0.8)] {
            let w = far_field_state(&free, &free, n, &gas);
            assert_relative_eq!(w.rho, free.rho, max_relative = 1e-13);
            assert_relative_eq!(w.u, free.u, max_relative = 1e-12);
            assert!(w.v.abs() < 1e-13);
            assert_relative_eq!(w.p, free.p, max_relative = 1e-13);
        }
    }
}
