use super::{CoefficientStrategy, WaveSpeeds};
use crate::average::InterfaceAverage;
use crate::state::FaceState;

/// Anti-diffusion coefficients for the contact (`delta2`), shear
/// (`delta3`) and face-normal velocity (`delta_n`) jumps.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AntiDiffusionCoeffs {
    pub delta2: f64,
    pub delta3: f64,
    pub delta_n: f64,
}

impl AntiDiffusionCoeffs {
    pub const ZERO: Self = Self {
        delta2: 0.0,
        delta3: 0.0,
        delta_n: 0.0,
    };

    pub const fn new(delta2: f64, delta3: f64, delta_n: f64) -> Self {
        Self {
            delta2,
            delta3,
            delta_n,
        }
    }
}

/// Interface data the coefficient strategies draw on.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientContext {
    pub avg: InterfaceAverage,
    pub speeds: WaveSpeeds,
    /// Local Mach numbers of the two sides.
    pub mach_l: f64,
    pub mach_r: f64,
    /// Multi-dimensional pressure sensor, in [0, 1].
    pub fp1: f64,
    pub gamma: f64,
}

/// HLLE+ treats a face as "around a shock" below this sensor value.
pub(crate) const HLLE_PLUS_SHOCK_THRESHOLD: f64 = 0.9;

/// Coefficients of a strategy; `mach_function` replaces f(M) when given.
pub fn anti_diffusion_coeffs(
    strategy: CoefficientStrategy,
    ctx: &CoefficientContext,
    mach_function: Option<f64>,
) -> AntiDiffusionCoeffs {
    use CoefficientStrategy::*;
    let a = ctx.avg.a;
    let contact = a / (a + ctx.avg.un.abs());
    let fp1 = ctx.fp1;
    let normal_fp = || {
        let f = mach_function.unwrap_or_else(|| ctx.mach_l.max(ctx.mach_r).min(1.0));
        (1.0 - f) * fp1
    };
    match strategy {
        Hlle => AntiDiffusionCoeffs::ZERO,
        HllemEinfeldt => {
            let d = a / (a + (0.5 * (ctx.speeds.s_r + ctx.speeds.s_l)).abs());
            AntiDiffusionCoeffs::new(d, d, 0.0)
        }
        HllemPark => AntiDiffusionCoeffs::new(contact, contact, 0.0),
        Hllec => AntiDiffusionCoeffs::new(contact, 0.0, 0.0),
        Hlles => AntiDiffusionCoeffs::new(0.0, contact, 0.0),
        HllePlus => {
            if fp1 < HLLE_PLUS_SHOCK_THRESHOLD {
                AntiDiffusionCoeffs::new(0.5, 0.5, 0.0)
            } else {
                AntiDiffusionCoeffs::new(contact, contact, 0.0)
            }
        }
        HllCps => {
            let d = (ctx.gamma - 1.0) / ctx.gamma;
            AntiDiffusionCoeffs::new(1.0, d, d)
        }
        HllemFp | HllCpsFp => AntiDiffusionCoeffs::new(contact * fp1, contact * fp1, normal_fp()),
        HllCpsFpAlt => AntiDiffusionCoeffs::new(fp1, fp1, normal_fp()),
    }
}

/// The anti-diffusion vector `B dU` in the face frame.
#[inline]
pub fn anti_diffusion_term(
    c: &AntiDiffusionCoeffs,
    avg: &InterfaceAverage,
    wl: &FaceState,
    wr: &FaceState,
) -> [f64; 4] {
    let d_rho = wr.rho - wl.rho;
    let d_p = wr.p - wl.p;
    let d_un = wr.un - wl.un;
    let d_ut = wr.ut - wl.ut;
    let contact = c.delta2 * (d_rho - d_p / (avg.a * avg.a));
    let shear = c.delta3 * avg.rho * d_ut;
    let normal = c.delta_n * avg.rho * d_un;
    [
        contact,
        contact * avg.un + normal,
        contact * avg.ut + shear,
        contact * 0.5 * avg.q2 + shear * avg.ut + normal * avg.un,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::average::AveragingKind;
    use crate::state::Gas;
    use approx::assert_relative_eq;

    fn ctx(wl: FaceState, wr: FaceState, fp1: f64) -> CoefficientContext {
        let gas = Gas::AIR;
        let avg = InterfaceAverage::new(&wl, &wr, AveragingKind::Roe, &gas).unwrap();
        CoefficientContext {
            avg,
            speeds: WaveSpeeds::einfeldt(&wl, &wr, &avg, &gas),
            mach_l: wl.mach(&gas),
            mach_r: wr.mach(&gas),
            fp1,
            gamma: gas.gamma,
        }
    }

    #[test]
    fn hlle_has_no_anti_diffusion() {
        let w = FaceState::new(1.0, 0.3, 0.1, 1.0);
        let c = anti_diffusion_coeffs(CoefficientStrategy::Hlle, &ctx(w, w, 1.0), None);
        assert_eq!(c, AntiDiffusionCoeffs::ZERO);
    }

    #[test]
    fn park_at_zero_contact_speed() {
        let w = FaceState::new(1.0, 0.0, 0.5, 1.0);
        let c = anti_diffusion_coeffs(CoefficientStrategy::HllemPark, &ctx(w, w, 1.0), None);
        assert_eq!(c, AntiDiffusionCoeffs::new(1.0, 1.0, 0.0));
    }

    #[test]
    fn fp_normal_coefficient_limits() {
        // Supersonic on both sides: f(M) = 1, dn = 0.
        let w = FaceState::new(1.0, 2.0, 0.0, 1.0 / 1.4);
        let c = anti_diffusion_coeffs(CoefficientStrategy::HllemFp, &ctx(w, w, 1.0), None);
        assert_eq!(c.delta_n, 0.0);
        // At rest with fp1 = 1 everything is fully anti-diffusive.
        let w = FaceState::new(1.0, 0.0, 0.0, 1.0);
        let c = anti_diffusion_coeffs(CoefficientStrategy::HllemFp, &ctx(w, w, 1.0), None);
        assert_eq!(c, AntiDiffusionCoeffs::new(1.0, 1.0, 1.0));
    }

    #[test]
    fn hllcps_uses_derivation_value() {
        let w = FaceState::new(1.0, 0.0, 0.0, 1.0);
        let c = anti_diffusion_coeffs(CoefficientStrategy::HllCps, &ctx(w, w, 1.0), None);
        assert_relative_eq!(c.delta3, 0.4 / 1.4);
        assert_eq!(c.delta3, c.delta_n);
        assert_eq!(c.delta2, 1.0);
    }

    #[test]
    fn hlle_plus_halves_near_shocks() {
        let w = FaceState::new(1.0, 0.5, 0.0, 1.0);
        let near = anti_diffusion_coeffs(CoefficientStrategy::HllePlus, &ctx(w, w, 0.2), None);
        assert_eq!(near, AntiDiffusionCoeffs::new(0.5, 0.5, 0.0));
        let far = anti_diffusion_coeffs(CoefficientStrategy::HllePlus, &ctx(w, w, 1.0), None);
        let park = anti_diffusion_coeffs(CoefficientStrategy::HllemPark, &ctx(w, w, 1.0), None);
        assert_eq!(far, park);
    }

    #[test]
    fn term_vanishes_for_equal_states() {
        let w = FaceState::new(1.2, 0.3, -0.2, 0.9);
        let c = ctx(w, w, 1.0);
        let b = anti_diffusion_term(&AntiDiffusionCoeffs::new(1.0, 1.0, 1.0), &c.avg, &w, &w);
        assert_eq!(b, [0.0; 4]);
    }

    #[test]
    fn stationary_contact_term() {
        let wl = FaceState::new(1.0, 0.0, 0.0, 1.0);
        let wr = FaceState::new(1.5, 0.0, 0.0, 1.0);
        let c = ctx(wl, wr, 1.0);
        let b = anti_diffusion_term(&AntiDiffusionCoeffs::new(1.0, 0.0, 0.0), &c.avg, &wl, &wr);
        assert_eq!(b, [0.5, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn pure_shear_term() {
        let wl = FaceState::new(1.0, 0.0, 0.2, 1.0);
        let wr = FaceState::new(1.0, 0.0, 0.7, 1.0);
        let c = ctx(wl, wr, 1.0);
        let b = anti_diffusion_term(&AntiDiffusionCoeffs::new(0.0, 1.0, 0.0), &c.avg, &wl, &wr);
        let ut = c.avg.ut;
        let expected = [0.0, 0.0, 0.5, 0.5 * ut];
        for k in 0..4 {
            assert_relative_eq!(b[k], expected[k], epsilon = 1e-15);
        }
    }
}
