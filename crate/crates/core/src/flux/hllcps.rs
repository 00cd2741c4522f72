use super::{anti_diffusion_term, sub4, CoefficientContext, SchemeConfig, WaveSpeeds};
use crate::average::InterfaceAverage;
use crate::error::{Error, Result};
use crate::math;
use crate::state::{FaceState, Flux, Gas};

/// Convective and pressure contributions of the HLL-CPS flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpsParts {
    pub convective: Flux,
    pub pressure: Flux,
}

impl CpsParts {
    pub fn total(&self) -> Flux {
        let mut f = self.convective;
        for (a, b) in f.iter_mut().zip(self.pressure) {
            *a += b;
        }
        f
    }
}

/// HLL-CPS flux with the anti-diffusion of the configured strategy.
pub fn hllcps_flux(
    wl: &FaceState,
    wr: &FaceState,
    scheme: &SchemeConfig,
    fp1: f64,
    gas: &Gas,
) -> Result<Flux> {
    Ok(hllcps_parts(wl, wr, scheme, fp1, gas)?.total())
}

/// Upwinded convective flux and the HLL-form pressure flux with anti-diffusion.
pub fn hllcps_parts(
    wl: &FaceState,
    wr: &FaceState,
    scheme: &SchemeConfig,
    fp1: f64,
    gas: &Gas,
) -> Result<CpsParts> {
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
    let convective = convective_flux(wl, wr, &speeds, gas)?;
    let (hll, jump) = pressure_hll(wl, wr, &speeds)?;
    let du = sub4(&wr.conserved(gas), &wl.conserved(gas));
    let b = anti_diffusion_term(&coeffs, &avg, wl, wr);
    let mut pressure = hll;
    for k in 0..4 {
        pressure[k] += jump * (du[k] - b[k]);
    }
    Ok(CpsParts {
        convective,
        pressure,
    })
}

/// The original HLL-CPS flux written with explicit pressure jumps instead of
/// wave strengths. Independent of the anti-diffusion machinery; used to
/// cross-check [`hllcps_flux`] with the `HllCps` strategy.
pub fn hllcps_flux_split_form(wl: &FaceState, wr: &FaceState, gas: &Gas) -> Result<Flux> {
    let rho = 0.5 * (wl.rho + wr.rho);
    let p = 0.5 * (wl.p + wr.p);
    let a = gas.sound_speed(rho, p);
    let al = wl.sound_speed(gas);
    let ar = wr.sound_speed(gas);
    // Einfeldt speeds from Roe averages.
    let (sl, sr) = (math::sqrt(wl.rho), math::sqrt(wr.rho));
    let roe = |l: f64, r: f64| (sl * l + sr * r) / (sl + sr);
    let (un_roe, ut_roe) = (roe(wl.un, wr.un), roe(wl.ut, wr.ut));
    let h = roe(
        (wl.total_energy(gas) + wl.p) / wl.rho,
        (wr.total_energy(gas) + wr.p) / wr.rho,
    );
    let a_roe = math::sqrt((gas.gamma - 1.0) * (h - 0.5 * (un_roe * un_roe + ut_roe * ut_roe)));
    let speeds = WaveSpeeds {
        s_l: 0f64.min(wl.un - al).min(un_roe - a_roe),
        s_r: 0f64.max(wr.un + ar).max(un_roe + a_roe),
    };
    let convective = convective_flux(wl, wr, &speeds, gas)?;
    let (hll, jump) = pressure_hll(wl, wr, &speeds)?;
    let a2 = a * a;
    let dp = wr.p - wl.p;
    let dpun = wr.p * wr.un - wl.p * wl.un;
    let dput = wr.p * wr.ut - wl.p * wl.ut;
    let dpq2 = wr.p * wr.speed_squared() - wl.p * wl.speed_squared();
    let dissipation = [
        dp / a2,
        dpun / a2,
        dput / a2,
        dp / (gas.gamma - 1.0) + 0.5 * dpq2 / a2,
    ];
    let mut f = convective;
    for k in 0..4 {
        f[k] += hll[k] + jump * dissipation[k];
    }
    Ok(f)
}

fn convective_flux(wl: &FaceState, wr: &FaceState, speeds: &WaveSpeeds, gas: &Gas) -> Result<Flux> {
    let un = 0.5 * (wl.un + wr.un);
    // Mass flux M_nK a_K with the donor state K chosen by the mean normal velocity.
    let (upwind, mass_speed) = if un >= 0.0 {
        (wl, un * (wl.un - speeds.s_l) / (un - speeds.s_l))
    } else {
        (wr, un * (wr.un - speeds.s_r) / (un - speeds.s_r))
    };
    if !mass_speed.is_finite() {
        return Err(Error::DegenerateWaveSpeeds {
            s_l: speeds.s_l,
            s_r: speeds.s_r,
        });
    }
    let u = upwind.conserved(gas);
    Ok([
        mass_speed * u[0],
        mass_speed * u[1],
        mass_speed * u[2],
        mass_speed * u[3],
    ])
}

/// HLL average of the pressure fluxes (0, p, 0, p u_n) and the jump weight.
fn pressure_hll(wl: &FaceState, wr: &FaceState, speeds: &WaveSpeeds) -> Result<(Flux, f64)> {
    let WaveSpeeds { s_l, s_r } = *speeds;
    let width = s_r - s_l;
    if !(width > 1e-12) {
        return Err(Error::DegenerateWaveSpeeds { s_l, s_r });
    }
    let inv = 1.0 / width;
    let f = [
        0.0,
        (s_r * wl.p - s_l * wr.p) * inv,
        0.0,
        (s_r * wl.p * wl.un - s_l * wr.p * wr.un) * inv,
    ];
    Ok((f, s_r * s_l * inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::CoefficientStrategy;
    use crate::state::physical_flux;
    use approx::assert_relative_eq;

    #[test]
    fn consistency_for_equal_states() {
        let gas = Gas::AIR;
        for w in [
            FaceState::new(1.4, 3.0, 0.5, 1.0),
            FaceState::new(0.8, -0.4, 0.1, 2.0),
            FaceState::new(1.0, 0.0, 0.0, 1.0),
        ] {
            let exact = physical_flux(&w, &gas);
            for s in [
                CoefficientStrategy::HllCps,
                CoefficientStrategy::HllCpsFp,
                CoefficientStrategy::HllCpsFpAlt,
            ] {
                let f = hllcps_flux(&w, &w, &SchemeConfig::new(s), 0.7, &gas).unwrap();
                for k in 0..4 {
                    assert_relative_eq!(f[k], exact[k], max_relative = 1e-13, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn stationary_contact_has_no_mass_flux() {
        let gas = Gas::AIR;
        let wl = FaceState::new(2.0, 0.0, 0.0, 1.0);
        let wr = FaceState::new(0.5, 0.0, 0.0, 1.0);
        let f = hllcps_flux(&wl, &wr, &SchemeConfig::new(CoefficientStrategy::HllCps), 1.0, &gas).unwrap();
        assert_eq!(f[0], 0.0);
        assert_eq!(f[3], 0.0);
    }

    #[test]
    fn wave_form_matches_split_form() {
        let gas = Gas::AIR;
        let wl = FaceState::new(1.3, 0.4, -0.2, 1.7);
        let wr = FaceState::new(0.6, -0.9, 0.8, 0.5);
        let a = hllcps_flux(&wl, &wr, &SchemeConfig::new(CoefficientStrategy::HllCps), 1.0, &gas).unwrap();
        let b = hllcps_flux_split_form(&wl, &wr, &gas).unwrap();
        for k in 0..4 {
            assert_relative_eq!(a[k], b[k], epsilon = 1e-13);
        }
    }
}
