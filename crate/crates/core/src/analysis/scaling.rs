//! Log-log scaling fits.

use crate::math;

/// Least-squares slope of `ln y` against `ln x`; non-positive or non-finite points are skipped.
///
/// Returns `None` with fewer than two usable points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: alloc::vec::Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (math::ln(*x), math::ln(*y)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn power_laws() {
        let quad: alloc::vec::Vec<_> = [0.1, 0.01, 0.001].iter().map(|m| (*m, 3.0 * m * m)).collect();
        assert_relative_eq!(loglog_slope(&quad).unwrap(), 2.0, max_relative = 1e-12);
        let lin = [(0.1, 0.05), (0.01, 0.005)];
        assert_relative_eq!(loglog_slope(&lin).unwrap(), 1.0, max_relative = 1e-12);
        assert_eq!(loglog_slope(&[(0.1, 1.0)]), None);
        assert_eq!(loglog_slope(&[(0.1, 1.0), (0.01, f64::NAN)]), None);
    }
}
