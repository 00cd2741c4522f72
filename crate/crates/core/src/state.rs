//! Gas model, state vectors and the physical flux.

use crate::error::{Error, Location, Result};
use crate::math;

/// A 4-component flux or conserved-variable increment, ordered
/// (mass, normal/x momentum, tangential/y momentum, energy).
pub type Flux = [f64; 4];

/// Calorically perfect gas.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Gas {
    pub gamma: f64,
}

impl Default for Gas {
    fn default() -> Self {
        Self::AIR
    }
}

impl Gas {
    pub const AIR: Gas = Gas { gamma: 1.4 };

    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 1.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::InvalidGamma(gamma))
        }
    }

    #[inline]
    pub fn sound_speed(&self, rho: f64, p: f64) -> f64 {
        math::sqrt(self.gamma * p / rho)
    }

    /// Pressure from conserved variables via the perfect-gas equation of state.
    pub fn pressure(&self, u: &Conserved) -> Result<f64> {
        if !u.is_finite() {
            return Err(Error::NonFinite { location: Location(None) });
        }
        if u.rho <= 0.0 {
            return Err(Error::Unphysical {
                location: Location(None),
                rho: u.rho,
                p: f64::NAN,
            });
        }
        Ok(self.pressure_unchecked(u))
    }

    #[inline]
    pub(crate) fn pressure_unchecked(&self, u: &Conserved) -> f64 {
        let kinetic = 0.5 * (u.mom_x * u.mom_x + u.mom_y * u.mom_y) / u.rho;
        (self.gamma - 1.0) * (u.energy - kinetic)
    }
}

/// Cell-averaged conserved variables (rho, rho u, rho v, rho E).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Conserved {
    pub rho: f64,
    pub mom_x: f64,
    pub mom_y: f64,
    pub energy: f64,
}

impl Conserved {
    pub const fn new(rho: f64, mom_x: f64, mom_y: f64, energy: f64) -> Self {
        Self {
            rho,
            mom_x,
            mom_y,
            energy,
        }
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.rho, self.mom_x, self.mom_y, self.energy]
    }

    #[inline]
    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.mom_x.is_finite() && self.mom_y.is_finite() && self.energy.is_finite()
    }

    /// Primitive variables; fails on non-finite input or non-positive density/pressure.
    pub fn to_primitive(&self, gas: &Gas) -> Result<Primitive> {
        let p = gas.pressure(self)?;
        let w = Primitive {
            rho: self.rho,
            u: self.mom_x / self.rho,
            v: self.mom_y / self.rho,
            p,
        };
        w.check()?;
        Ok(w)
    }

    #[inline]
    pub(crate) fn to_primitive_unchecked(self, gas: &Gas) -> Primitive {
        Primitive {
            rho: self.rho,
            u: self.mom_x / self.rho,
            v: self.mom_y / self.rho,
            p: gas.pressure_unchecked(&self),
        }
    }

    #[inline]
    pub fn axpy(&self, a: f64, d: &[f64; 4]) -> Self {
        Self::new(
            self.rho + a * d[0],
            self.mom_x + a * d[1],
            self.mom_y + a * d[2],
            self.energy + a * d[3],
        )
    }
}

/// Primitive variables (rho, u, v, p) in the global frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl Primitive {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self { rho, u, v, p }
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.u.is_finite() && self.v.is_finite() && self.p.is_finite()
    }

    /// Rejects non-finite values and non-positive density or pressure.
    pub fn check(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite { location: Location(None) });
        }
        if self.rho <= 0.0 || self.p <= 0.0 {
            return Err(Error::Unphysical {
                location: Location(None),
                rho: self.rho,
                p: self.p,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn speed_squared(&self) -> f64 {
        self.u * self.u + self.v * self.v
    }

    #[inline]
    pub fn mach(&self, gas: &Gas) -> f64 {
        math::sqrt(self.speed_squared()) / gas.sound_speed(self.rho, self.p)
    }

    #[inline]
    pub fn to_conserved(&self, gas: &Gas) -> Conserved {
        Conserved {
            rho: self.rho,
            mom_x: self.rho * self.u,
            mom_y: self.rho * self.v,
            energy: self.p / (gas.gamma - 1.0) + 0.5 * self.rho * self.speed_squared(),
        }
    }

    /// Express the state in the frame of a face with unit normal `n`.
    #[inline]
    pub fn rotate(&self, n: Normal) -> FaceState {
        FaceState {
            rho: self.rho,
            un: self.u * n.nx + self.v * n.ny,
            ut: -self.u * n.ny + self.v * n.nx,
            p: self.p,
        }
    }

    /// Clamp density and pressure from below.
    pub fn floored(&self, floor: f64) -> Self {
        Self {
            rho: self.rho.max(floor),
            p: self.p.max(floor),
            ..*self
        }
    }
}

/// Unit face normal.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Normal {
    pub nx: f64,
    pub ny: f64,
}

impl Normal {
    pub const X: Normal = Normal { nx: 1.0, ny: 0.0 };
    pub const Y: Normal = Normal { nx: 0.0, ny: 1.0 };

    /// Validated unit normal (|n| = 1 within 1e-12).
    pub fn new(nx: f64, ny: f64) -> Result<Self> {
        let norm = math::hypot(nx, ny);
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitNormal { norm });
        }
        Ok(Self { nx, ny })
    }

    /// Normalise an arbitrary non-zero vector.
    pub(crate) fn from_vector(x: f64, y: f64) -> Self {
        let len = math::hypot(x, y);
        Self {
            nx: x / len,
            ny: y / len,
        }
    }

    pub fn reversed(self) -> Self {
        Self {
            nx: -self.nx,
            ny: -self.ny,
        }
    }
}

/// State in a face-aligned frame: normal and tangential velocity components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FaceState {
    pub rho: f64,
    pub un: f64,
    pub ut: f64,
    pub p: f64,
}

impl FaceState {
    pub const fn new(rho: f64, un: f64, ut: f64, p: f64) -> Self {
        Self { rho, un, ut, p }
    }

    /// Back to the global frame.
    #[inline]
    pub fn unrotate(&self, n: Normal) -> Primitive {
        Primitive {
            rho: self.rho,
            u: self.un * n.nx - self.ut * n.ny,
            v: self.un * n.ny + self.ut * n.nx,
            p: self.p,
        }
    }

    #[inline]
    pub fn speed_squared(&self) -> f64 {
        self.un * self.un + self.ut * self.ut
    }

    #[inline]
    pub fn sound_speed(&self, gas: &Gas) -> f64 {
        gas.sound_speed(self.rho, self.p)
    }

    #[inline]
    pub fn mach(&self, gas: &Gas) -> f64 {
        math::sqrt(self.speed_squared()) / self.sound_speed(gas)
    }

    #[inline]
    pub fn total_energy(&self, gas: &Gas) -> f64 {
        self.p / (gas.gamma - 1.0) + 0.5 * self.rho * self.speed_squared()
    }

    /// Face-frame conserved vector (rho, rho u_n, rho u_t, rho E).
    #[inline]
    pub fn conserved(&self, gas: &Gas) -> [f64; 4] {
        [
            self.rho,
            self.rho * self.un,
            self.rho * self.ut,
            self.total_energy(gas),
        ]
    }

    /// Mirror image across a wall: normal velocity reversed.
    #[inline]
    pub fn mirrored(&self) -> Self {
        Self { un: -self.un, ..*self }
    }
}

/// Physical flux normal to a face, in the face frame.
#[inline]
pub fn physical_flux(w: &FaceState, gas: &Gas) -> Flux {
    let mass = w.rho * w.un;
    [
        mass,
        mass * w.un + w.p,
        mass * w.ut,
        (w.total_energy(gas) + w.p) * w.un,
    ]
}

/// Global-frame Cartesian fluxes F (x) and G (y) of a primitive state.
pub fn cartesian_fluxes(w: &Primitive, gas: &Gas) -> (Flux, Flux) {
    let e = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * w.speed_squared();
    let f = [
        w.rho * w.u,
        w.rho * w.u * w.u + w.p,
        w.rho * w.u * w.v,
        (e + w.p) * w.u,
    ];
    let g = [
        w.rho * w.v,
        w.rho * w.u * w.v,
        w.rho * w.v * w.v + w.p,
        (e + w.p) * w.v,
    ];
    (f, g)
}

/// Rotate a face-frame flux back into global components.
#[inline]
pub fn unrotate_flux(f: &Flux, n: Normal) -> Flux {
    [
        f[0],
        f[1] * n.nx - f[2] * n.ny,
        f[1] * n.ny + f[2] * n.nx,
        f[3],
    ]
}
