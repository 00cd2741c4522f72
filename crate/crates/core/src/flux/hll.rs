use super::{anti_diffusion_term, sub4, AntiDiffusionCoeffs, CoefficientContext, SchemeConfig, WaveSpeeds};
use crate::average::InterfaceAverage;
use crate::error::{Error, Result};
use crate::state::{physical_flux, FaceState, Flux, Gas};

const MIN_FAN_WIDTH: f64 = 1e-12;

/// HLL flux plus the configured anti-diffusion term.
pub fn hll_family_flux(
    wl: &FaceState,
    wr: &FaceState,
    scheme: &SchemeConfig,
    fp1: f64,
    gas: &Gas,
) -> Result<Flux> {
    let avg = InterfaceAverage::new(wl, wr, scheme.averaging, gas)?;
    let speeds = scheme.wave_speeds(wl, wr, &avg, gas)?;
    let coeffs = scheme.coefficients(&CoefficientContext {
        avg,
        speeds,
        mach_l: wl.mach(gas),
        mach_r: wr.mach(gas),
        fp1,
        gamma: gas.gamma,
    });
    hll_flux_with_coeffs(wl, wr, &avg, &speeds, &coeffs, gas)
}

/// HLL-family flux for explicitly supplied average, speeds and coefficients.
#[inline]
pub fn hll_flux_with_coeffs(
    wl: &FaceState,
    wr: &FaceState,
    avg: &InterfaceAverage,
    speeds: &WaveSpeeds,
    coeffs: &AntiDiffusionCoeffs,
    gas: &Gas,
) -> Result<Flux> {
    let WaveSpeeds { s_l, s_r } = *speeds;
    let width = s_r - s_l;
    if !(width > MIN_FAN_WIDTH) {
        return Err(Error::DegenerateWaveSpeeds { s_l, s_r });
    }
    let fl = physical_flux(wl, gas);
    let fr = physical_flux(wr, gas);
    let du = sub4(&wr.conserved(gas), &wl.conserved(gas));
    let b = anti_diffusion_term(coeffs, avg, wl, wr);
    let inv = 1.0 / width;
    let jump = s_r * s_l * inv;
    let mut f = [0.0; 4];
    for k in 0..4 {
        f[k] = (s_r * fl[k] - s_l * fr[k]) * inv + jump * (du[k] - b[k]);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::CoefficientStrategy;
    use approx::assert_relative_eq;

    #[test]
    fn consistency_for_equal_states() {
        let gas = Gas::AIR;
        let w = FaceState::new(1.4, 3.0, 0.5, 1.0);
        let exact = physical_flux(&w, &gas);
        for s in CoefficientStrategy::ALL {
            let f = hll_family_flux(&w, &w, &SchemeConfig::new(s), 1.0, &gas).unwrap();
            for k in 0..4 {
                assert_relative_eq!(f[k], exact[k], max_relative = 1e-13, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn park_preserves_stationary_contact() {
        let gas = Gas::AIR;
        let wl = FaceState::new(1.0, 0.0, 0.0, 1.0);
        let wr = FaceState::new(0.25, 0.0, 0.0, 1.0);
        let f = hll_family_flux(&wl, &wr, &SchemeConfig::new(CoefficientStrategy::HllemPark), 1.0, &gas)
            .unwrap();
        assert_eq!(f[0], 0.0);
        assert_relative_eq!(f[1], 1.0, epsilon = 1e-15);
        assert_eq!(f[3], 0.0);
    }

    #[test]
    fn hlle_diffuses_stationary_contact() {
        let gas = Gas::AIR;
        let wl = FaceState::new(1.0, 0.0, 0.0, 1.0);
        let wr = FaceState::new(0.25, 0.0, 0.0, 1.0);
        let scheme = SchemeConfig::new(CoefficientStrategy::Hlle);
        let f = hll_family_flux(&wl, &wr, &scheme, 1.0, &gas).unwrap();
        let avg = InterfaceAverage::new(&wl, &wr, scheme.averaging, &gas).unwrap();
        let s = WaveSpeeds::einfeldt(&wl, &wr, &avg, &gas);
        let expected = (s.s_r * s.s_l / (s.s_r - s.s_l)).abs() * (wl.rho - wr.rho);
        assert!(f[0] > 0.0);
        assert_relative_eq!(f[0], expected, epsilon = 1e-15);
    }
}
