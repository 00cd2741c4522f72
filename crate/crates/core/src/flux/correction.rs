use super::{anti_diffusion_coeffs, CoefficientContext, CoefficientStrategy, WaveSpeeds};
use crate::average::InterfaceAverage;
use crate::state::{FaceState, Flux, Gas};

/// All-Mach correction added to a flux computed with the original HLLEM
/// coefficients (d2 = d3 = a / (a + |un|), dn = 0).
///
/// The correction is
///
/// ```text
/// -s_r s_l / (s_r - s_l) * ((fp1 - 1) sum_k d_k a_k R_k + dn_new rho dun (0, 1, 0, un))
/// ```
///
/// so the sum reproduces the HLLEM-FP flux exactly: the jump term enters the
/// HLL flux as `-s_r s_l / (s_r - s_l) B dU`.
pub fn all_mach_additive_correction(
    base_flux: &Flux,
    wl: &FaceState,
    wr: &FaceState,
    avg: &InterfaceAverage,
    fp1: f64,
    gas: &Gas,
) -> Flux {
    let speeds = WaveSpeeds::einfeldt(wl, wr, avg, gas);
    let ctx = CoefficientContext {
        avg: *avg,
        speeds,
        mach_l: wl.mach(gas),
        mach_r: wr.mach(gas),
        fp1,
        gamma: gas.gamma,
    };
    let original = anti_diffusion_coeffs(CoefficientStrategy::HllemPark, &ctx, None);
    let dn_new = anti_diffusion_coeffs(CoefficientStrategy::HllemFp, &ctx, None).delta_n;

    let d_rho = wr.rho - wl.rho;
    let d_p = wr.p - wl.p;
    let contact = original.delta2 * (d_rho - d_p / (avg.a * avg.a));
    let shear = original.delta3 * avg.rho * (wr.ut - wl.ut);
    let normal = dn_new * avg.rho * (wr.un - wl.un);
    let scale = fp1 - 1.0;
    let extra = [
        scale * contact,
        scale * contact * avg.un + normal,
        scale * (contact * avg.ut + shear),
        scale * (contact * 0.5 * avg.q2 + shear * avg.ut) + normal * avg.un,
    ];
    let w = -speeds.jump_weight();
    let mut f = *base_flux;
    for k in 0..4 {
        f[k] += w * extra[k];
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::average::AveragingKind;
    use crate::flux::{hll_family_flux, SchemeConfig};

    #[test]
    fn supersonic_smooth_limit_is_identity() {
        let gas = Gas::AIR;
        let wl = FaceState::new(1.0, 3.0, 0.2, 0.5);
        let wr = FaceState::new(1.1, 3.1, 0.1, 0.52);
        let avg = InterfaceAverage::new(&wl, &wr, AveragingKind::Roe, &gas).unwrap();
        let base = hll_family_flux(&wl, &wr, &SchemeConfig::new(CoefficientStrategy::HllemPark), 1.0, &gas)
            .unwrap();
        assert_eq!(all_mach_additive_correction(&base, &wl, &wr, &avg, 1.0, &gas), base);
    }
}
