//! Interface averages used by the anti-diffusion terms.

use crate::error::{Error, Result};
use crate::math;
use crate::state::{FaceState, Gas};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AveragingKind {
    /// sqrt(rho)-weighted velocities and enthalpy.
    #[default]
    Roe,
    /// Plain means of the primitive variables.
    Arithmetic,
}

/// Averaged interface state in the face frame.
///
/// `q2` is the speed-squared used in the contact eigenvector. For Roe
/// averaging it is `un^2 + ut^2` of the averaged velocity; for arithmetic
/// averaging it is the mean of the two sides' `q^2`, which makes the wave
/// decomposition of the split (convective/pressure) flux exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceAverage {
    pub rho: f64,
    pub un: f64,
    pub ut: f64,
    pub a: f64,
    pub q2: f64,
    pub kind: AveragingKind,
}

impl InterfaceAverage {
    pub fn new(wl: &FaceState, wr: &FaceState, kind: AveragingKind, gas: &Gas) -> Result<Self> {
        match kind {
            AveragingKind::Roe => roe(wl, wr, gas),
            AveragingKind::Arithmetic => Ok(arithmetic(wl, wr, gas)),
        }
    }
}

fn roe(wl: &FaceState, wr: &FaceState, gas: &Gas) -> Result<InterfaceAverage> {
    let sl = math::sqrt(wl.rho);
    let sr = math::sqrt(wr.rho);
    let inv = 1.0 / (sl + sr);
    let hl = (wl.total_energy(gas) + wl.p) / wl.rho;
    let hr = (wr.total_energy(gas) + wr.p) / wr.rho;
    let un = (sl * wl.un + sr * wr.un) * inv;
    let ut = (sl * wl.ut + sr * wr.ut) * inv;
    let h = (sl * hl + sr * hr) * inv;
    let q2 = un * un + ut * ut;
    let a2 = (gas.gamma - 1.0) * (h - 0.5 * q2);
    if !(a2 > 0.0) {
        return Err(Error::UnphysicalInterface { a2 });
    }
    Ok(InterfaceAverage {
        rho: sl * sr,
        un,
        ut,
        a: math::sqrt(a2),
        q2,
        kind: AveragingKind::Roe,
    })
}

fn arithmetic(wl: &FaceState, wr: &FaceState, gas: &Gas) -> InterfaceAverage {
    let rho = 0.5 * (wl.rho + wr.rho);
    let p = 0.5 * (wl.p + wr.p);
    InterfaceAverage {
        rho,
        un: 0.5 * (wl.un + wr.un),
        ut: 0.5 * (wl.ut + wr.ut),
        a: gas.sound_speed(rho, p),
        q2: 0.5 * (wl.speed_squared() + wr.speed_squared()),
        kind: AveragingKind::Arithmetic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identical_states_reproduce_input() {
        let gas = Gas::AIR;
        let w = FaceState::new(1.3, 0.7, -0.4, 2.1);
        for kind in [AveragingKind::Roe, AveragingKind::Arithmetic] {
            let avg = InterfaceAverage::new(&w, &w, kind, &gas).unwrap();
            assert_relative_eq!(avg.rho, w.rho, epsilon = 1e-14);
            assert_relative_eq!(avg.un, w.un, epsilon = 1e-14);
            assert_relative_eq!(avg.ut, w.ut, epsilon = 1e-14);
            assert_relative_eq!(avg.a, w.sound_speed(&gas), epsilon = 1e-14);
            assert_relative_eq!(avg.q2, w.speed_squared(), epsilon = 1e-14);
        }
    }

    #[test]
    fn roe_velocity_is_sqrt_density_weighted() {
        let gas = Gas::AIR;
        let wl = FaceState::new(1.0, 0.0, 0.0, 1.0);
        let wr = FaceState::new(4.0, 3.0, 0.0, 1.0);
        let avg = InterfaceAverage::new(&wl, &wr, AveragingKind::Roe, &gas).unwrap();
        assert_relative_eq!(avg.un, 2.0, epsilon = 1e-15);
        assert_relative_eq!(avg.rho, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn arithmetic_velocity_is_mean() {
        let gas = Gas::AIR;
        let wl = FaceState::new(1.0, 1.0, 0.0, 1.0);
        let wr = FaceState::new(1.0, 3.0, 0.0, 1.0);
        let avg = InterfaceAverage::new(&wl, &wr, AveragingKind::Arithmetic, &gas).unwrap();
        assert_eq!(avg.un, 2.0);
        assert_eq!(avg.q2, 5.0);
    }
}
