//! Split of a numerical flux into its central part and numerical dissipation.

use crate::error::Result;
use crate::flux::{hllcps_parts, interface_flux, FluxFamily, SchemeConfig};
use crate::state::{physical_flux, FaceState, Flux, Gas};

/// `F = central + dissipation` with `central = (F(W_l) + F(W_r)) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationSplit {
    pub central: Flux,
    pub dissipation: Flux,
    /// For convective-pressure split schemes: dissipation of the convective
    /// and pressure parts separately.
    pub convective: Option<Flux>,
    pub pressure: Option<Flux>,
}

impl DissipationSplit {
    /// Magnitude of the mass-equation dissipation.
    pub fn mass(&self) -> f64 {
        self.dissipation[0].abs()
    }

    /// Magnitude of the face-normal momentum dissipation.
    pub fn normal_momentum(&self) -> f64 {
        self.dissipation[1].abs()
    }
}

fn convective_physical(w: &FaceState, gas: &Gas) -> Flux {
    let u = w.conserved(gas);
    [w.un * u[0], w.un * u[1], w.un * u[2], w.un * u[3]]
}

fn pressure_physical(w: &FaceState) -> Flux {
    [0.0, w.p, 0.0, w.p * w.un]
}

fn minus_mean(f: &Flux, a: &Flux, b: &Flux) -> Flux {
    core::array::from_fn(|k| f[k] - 0.5 * (a[k] + b[k]))
}

pub fn dissipation_split(
    scheme: &SchemeConfig,
    wl: &FaceState,
    wr: &FaceState,
    fp1: f64,
    gas: &Gas,
) -> Result<DissipationSplit> {
    let fl = physical_flux(wl, gas);
    let fr = physical_flux(wr, gas);
    let central = core::array::from_fn(|k| 0.5 * (fl[k] + fr[k]));
    let f = interface_flux(wl, wr, scheme, fp1, gas)?;
    let dissipation = minus_mean(&f, &fl, &fr);
    let (convective, pressure) = match scheme.family() {
        FluxFamily::Hll => (None, None),
        FluxFamily::ConvectivePressureSplit => {
            let parts = hllcps_parts(wl, wr, scheme, fp1, gas)?;
            (
                Some(minus_mean(
                    &parts.convective,
                    &convective_physical(wl, gas),
                    &convective_physical(wr, gas),
                )),
                Some(minus_mean(&parts.pressure, &pressure_physical(wl), &pressure_physical(wr))),
            )
        }
    };
    Ok(DissipationSplit {
        central,
        dissipation,
        convective,
        pressure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::CoefficientStrategy;

    #[test]
    fn equal_states_have_no_dissipation() {
        let gas = Gas::AIR;
        let w = FaceState::new(1.2, 0.3, -0.2, 0.9);
        for s in CoefficientStrategy::ALL {
            let d = dissipation_split(&SchemeConfig::new(s), &w, &w, 1.0, &gas).unwrap();
            assert!(d.dissipation.iter().all(|v| v.abs() < 1e-14), "{s}");
        }
    }

    #[test]
    fn fp_scheme_removes_normal_velocity_dissipation_at_low_mach() {
        let gas = Gas::AIR;
        let p = 1.0 / gas.gamma;
        let m = 1e-3;
        // pressure and velocity fluctuations of the low-Mach scales
        let wl = FaceState::new(1.0, m * (1.0 + 1e-2), 0.0, p * (1.0 + 1e-2 * m * m));
        let wr = FaceState::new(1.0, m * (1.0 - 1e-2), 0.0, p * (1.0 - 1e-2 * m * m));
        let d = |s| dissipation_split(&SchemeConfig::new(s), &wl, &wr, 1.0, &gas).unwrap();
        let (orig, fp) = (d(CoefficientStrategy::HllemPark), d(CoefficientStrategy::HllemFp));
        assert!(fp.normal_momentum() < 1e-2 * orig.normal_momentum());
        // the contact coefficient is untouched, so mass dissipation stays the same
        assert!((fp.mass() - orig.mass()).abs() <= 1e-12 * orig.mass().max(1e-300) + 1e-18);
    }

    #[test]
    fn split_parts_add_up() {
        let gas = Gas::AIR;
        let wl = FaceState::new(1.0, 0.4, 0.1, 1.0);
        let wr = FaceState::new(0.7, 0.2, -0.3, 0.6);
        let d = dissipation_split(&SchemeConfig::new(CoefficientStrategy::HllCps), &wl, &wr, 1.0, &gas).unwrap();
        let (c, p) = (d.convective.unwrap(), d.pressure.unwrap());
        for k in 0..4 {
            assert!((c[k] + p[k] - d.dissipation[k]).abs() < 1e-13);
        }
    }
}
