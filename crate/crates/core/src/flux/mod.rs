//! HLL-family interface fluxes.
//!
//! Every scheme is written as the HLL flux plus an anti-diffusion term
//!
//! ```text
//! F = (s_r F_l - s_l F_r) / (s_r - s_l) + s_r s_l / (s_r - s_l) (dU - B dU)
//! B dU = d2 a2 R2 + d3 a3 R3 + dn rho dun (0, 1, 0, un)
//! ```
//!
//! and the schemes differ only in their coefficients `(d2, d3, dn)`, chosen
//! by a [`CoefficientStrategy`]. HLL-CPS additionally upwinds the convective
//! part and applies the HLL form to the pressure part only.

mod coeffs;
mod correction;
mod hll;
mod hllcps;
mod sensor;
mod speeds;

pub use coeffs::{anti_diffusion_coeffs, anti_diffusion_term, AntiDiffusionCoeffs, CoefficientContext};
pub use correction::all_mach_additive_correction;
pub use hll::{hll_family_flux, hll_flux_with_coeffs};
pub use hllcps::{hllcps_flux, hllcps_flux_split_form, hllcps_parts, CpsParts};
pub use sensor::{pressure_sensor, pressure_sensor_multidim, FaceSensorField};
pub use speeds::WaveSpeeds;

use alloc::string::String;
use alloc::vec::Vec;

use crate::average::{AveragingKind, InterfaceAverage};
use crate::error::{Error, Result};
use crate::state::{FaceState, Flux, Gas};

/// Anti-diffusion coefficient strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CoefficientStrategy {
    /// No anti-diffusion.
    Hlle,
    /// Contact speed estimated as (s_r + s_l) / 2.
    HllemEinfeldt,
    /// Contact speed from the Roe-averaged normal velocity.
    HllemPark,
    /// Contact wave only.
    Hllec,
    /// Shear wave only.
    Hlles,
    /// Halved coefficients where the pressure sensor flags a shock.
    HllePlus,
    /// Convective-pressure split flux: d2 = 1, d3 = dn = (gamma - 1) / gamma.
    HllCps,
    /// HLLEM with sensor-scaled contact/shear coefficients and low-Mach normal anti-diffusion.
    HllemFp,
    /// HLL-CPS with the same coefficients as [`CoefficientStrategy::HllemFp`].
    HllCpsFp,
    /// HLL-CPS-FP with d2 = d3 = fp1.
    HllCpsFpAlt,
}

/// Base flux form a strategy plugs its coefficients into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxFamily {
    Hll,
    ConvectivePressureSplit,
}

impl CoefficientStrategy {
    pub const ALL: [CoefficientStrategy; 10] = [
        Self::Hlle,
        Self::HllemEinfeldt,
        Self::HllemPark,
        Self::Hllec,
        Self::Hlles,
        Self::HllePlus,
        Self::HllCps,
        Self::HllemFp,
        Self::HllCpsFp,
        Self::HllCpsFpAlt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Hlle => "hlle",
            Self::HllemEinfeldt => "hllem_einfeldt",
            Self::HllemPark => "hllem_park",
            Self::Hllec => "hllec",
            Self::Hlles => "hlles",
            Self::HllePlus => "hlleplus",
            Self::HllCps => "hllcps",
            Self::HllemFp => "hllem_fp",
            Self::HllCpsFp => "hllcps_fp",
            Self::HllCpsFpAlt => "hllcps_fp_alt",
        }
    }

    /// Parse a scheme name, ignoring case, `-` and `_`; `hllem` is an alias of `hllem_park`.
    pub fn from_name(name: &str) -> Result<Self> {
        let key = |s: &str| s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        let wanted = key(name);
        if wanted == "hllem" {
            return Ok(Self::HllemPark);
        }
        Self::ALL
            .into_iter()
            .find(|s| key(s.name()) == wanted)
            .ok_or_else(|| Error::UnknownName {
                kind: "scheme",
                name: String::from(name),
                valid: valid_names(),
            })
    }

    pub fn family(self) -> FluxFamily {
        match self {
            Self::HllCps | Self::HllCpsFp | Self::HllCpsFpAlt => FluxFamily::ConvectivePressureSplit,
            _ => FluxFamily::Hll,
        }
    }

    /// Whether the coefficients depend on the multi-dimensional pressure sensor.
    pub fn uses_sensor(self) -> bool {
        matches!(
            self,
            Self::HllePlus | Self::HllemFp | Self::HllCpsFp | Self::HllCpsFpAlt
        )
    }

    pub fn default_averaging(self) -> AveragingKind {
        match self.family() {
            FluxFamily::Hll => AveragingKind::Roe,
            FluxFamily::ConvectivePressureSplit => AveragingKind::Arithmetic,
        }
    }
}

fn valid_names() -> String {
    let names: Vec<&str> = CoefficientStrategy::ALL.iter().map(|s| s.name()).collect();
    names.join(", ")
}

impl core::fmt::Display for CoefficientStrategy {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for CoefficientStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_name(s)
    }
}

/// Forced values replacing parts of the coefficient computation.
///
/// Used by the reduction-chain checks and the analysis experiments
/// (e.g. HLL-CPS with `delta_n` forced to zero).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct CoefficientOverrides {
    /// Replaces the multi-dimensional sensor value fp1.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub fp1: Option<f64>,
    /// Replaces the Mach function f(M) = min(max(M_l, M_r), 1).
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub mach_function: Option<f64>,
    /// Replaces the final face-normal coefficient.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub delta_n: Option<f64>,
}

/// Flux scheme: coefficient strategy, averaging and optional overrides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub strategy: CoefficientStrategy,
    /// Average used in the anti-diffusion term and its coefficients.
    pub averaging: AveragingKind,
    /// Average used in the Einfeldt wave speeds.
    pub speed_averaging: AveragingKind,
    pub overrides: CoefficientOverrides,
}

impl SchemeConfig {
    pub fn new(strategy: CoefficientStrategy) -> Self {
        Self {
            strategy,
            averaging: strategy.default_averaging(),
            speed_averaging: AveragingKind::Roe,
            overrides: CoefficientOverrides::default(),
        }
    }

    pub fn with_overrides(mut self, overrides: CoefficientOverrides) -> Self {
        self.overrides = overrides;
        self
    }

    pub fn with_averaging(mut self, averaging: AveragingKind) -> Self {
        self.averaging = averaging;
        self
    }

    pub fn with_speed_averaging(mut self, averaging: AveragingKind) -> Self {
        self.speed_averaging = averaging;
        self
    }

    /// Einfeldt speeds, from `avg` when the two averaging choices agree.
    #[inline]
    pub(crate) fn wave_speeds(&self, wl: &FaceState, wr: &FaceState, avg: &InterfaceAverage, gas: &Gas) -> Result<WaveSpeeds> {
        if self.speed_averaging == self.averaging {
            return Ok(WaveSpeeds::einfeldt(wl, wr, avg, gas));
        }
        let s = InterfaceAverage::new(wl, wr, self.speed_averaging, gas)?;
        Ok(WaveSpeeds::einfeldt(wl, wr, &s, gas))
    }

    pub fn family(&self) -> FluxFamily {
        self.strategy.family()
    }

    /// Whether a sensor field must be computed before the flux pass.
    pub fn needs_sensor(&self) -> bool {
        self.strategy.uses_sensor() && self.overrides.fp1.is_none()
    }

    /// Coefficients with overrides applied.
    pub fn coefficients(&self, ctx: &CoefficientContext) -> AntiDiffusionCoeffs {
        let ctx = CoefficientContext {
            fp1: self.overrides.fp1.unwrap_or(ctx.fp1),
            ..*ctx
        };
        let mut c = anti_diffusion_coeffs(self.strategy, &ctx, self.overrides.mach_function);
        if let Some(dn) = self.overrides.delta_n {
            c.delta_n = dn;
        }
        c
    }
}

impl From<CoefficientStrategy> for SchemeConfig {
    fn from(s: CoefficientStrategy) -> Self {
        Self::new(s)
    }
}

/// Face-frame interface flux for any configured scheme.
///
/// `fp1` is the multi-dimensional pressure sensor at this face; it is
/// ignored by strategies that do not use it.
#[inline]
pub fn interface_flux(
    wl: &FaceState,
    wr: &FaceState,
    scheme: &SchemeConfig,
    fp1: f64,
    gas: &Gas,
) -> Result<Flux> {
    match scheme.family() {
        FluxFamily::Hll => hll_family_flux(wl, wr, scheme, fp1, gas),
        FluxFamily::ConvectivePressureSplit => hllcps_flux(wl, wr, scheme, fp1, gas),
    }
}

#[inline]
pub(crate) fn sub4(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in CoefficientStrategy::ALL {
            assert_eq!(CoefficientStrategy::from_name(s.name()).unwrap(), s);
        }
        assert_eq!(
            CoefficientStrategy::from_name("HLLEM").unwrap(),
            CoefficientStrategy::HllemPark
        );
        assert_eq!(
            CoefficientStrategy::from_name("hll-cps-fp").unwrap(),
            CoefficientStrategy::HllCpsFp
        );
    }

    #[test]
    fn unknown_scheme_lists_valid_names() {
        let err = CoefficientStrategy::from_name("bogus").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bogus"));
        assert!(msg.contains("hllem_fp"));
        assert!(msg.contains("hllcps"));
    }
}
