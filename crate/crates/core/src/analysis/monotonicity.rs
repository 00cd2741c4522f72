//! Overshoot and spurious-extremum measures of a 1D profile against a reference.

/// Over/undershoot and oscillation counts of a numerical profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityMetrics {
    /// Amount by which the profile exceeds the reference maximum (0 if it does not).
    pub overshoot: f64,
    /// Amount by which the profile falls below the reference minimum.
    pub undershoot: f64,
    /// `overshoot` relative to the reference maximum.
    pub relative_overshoot: f64,
    /// Direction changes of the profile beyond those of the reference.
    pub spurious_extrema: usize,
}

/// Relative step size, as a fraction of the reference range, below which
/// differences are ignored when counting extrema.
pub const EXTREMUM_TOLERANCE: f64 = 1e-3;

/// Number of sign changes among significant consecutive differences.
pub fn direction_changes(profile: &[f64], tolerance: f64) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for w in profile.windows(2) {
        let d = w[1] - w[0];
        if d.abs() <= tolerance {
            continue;
        }
        if last != 0.0 && d.signum() != last {
            changes += 1;
        }
        last = d.signum();
    }
    changes
}

pub fn monotonicity_check(profile: &[f64], exact: &[f64]) -> MonotonicityMetrics {
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let (emax, emin) = (max(exact), min(exact));
    let overshoot = (max(profile) - emax).max(0.0);
    let undershoot = (emin - min(profile)).max(0.0);
    let tol = EXTREMUM_TOLERANCE * (emax - emin).abs().max(f64::MIN_POSITIVE);
    let spurious = direction_changes(profile, tol).saturating_sub(direction_changes(exact, tol));
    MonotonicityMetrics {
        overshoot,
        undershoot,
        relative_overshoot: if emax != 0.0 { overshoot / emax.abs() } else { overshoot },
        spurious_extrema: spurious,
    }
}
