//! MUSCL reconstruction of primitive variables.

use alloc::vec::Vec;

use crate::state::Primitive;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Order {
    #[default]
    First,
    Muscl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Limiter {
    None,
    #[default]
    VanLeer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ReconstructionConfig {
    pub order: Order,
    /// Upwind/central blend of the unlimited scheme.
    pub kappa: f64,
    pub limiter: Limiter,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        Self::FIRST_ORDER
    }
}

impl ReconstructionConfig {
    pub const FIRST_ORDER: Self = Self {
        order: Order::First,
        kappa: 1.0 / 3.0,
        limiter: Limiter::VanLeer,
    };

    pub const MUSCL_VAN_LEER: Self = Self {
        order: Order::Muscl,
        kappa: 1.0 / 3.0,
        limiter: Limiter::VanLeer,
    };

    pub fn is_first_order(&self) -> bool {
        self.order == Order::First
    }

    /// Value at the face between `c` and `p`, seen from `c`.
    #[inline]
    pub fn extrapolate_toward(&self, m: f64, c: f64, p: f64) -> f64 {
        let dm = c - m;
        let dp = p - c;
        match self.order {
            Order::First => c,
            Order::Muscl => match self.limiter {
                Limiter::None => c + 0.25 * ((1.0 - self.kappa) * dm + (1.0 + self.kappa) * dp),
                Limiter::VanLeer => c + 0.5 * van_leer(dm, dp),
            },
        }
    }

    /// Left and right states at the face between `line[1]` and `line[2]`.
    #[inline]
    pub fn face_states(&self, line: [&Primitive; 4]) -> (Primitive, Primitive) {
        if self.is_first_order() {
            return (*line[1], *line[2]);
        }
        let [a, b, c, d] = line;
        let l = |f: fn(&Primitive) -> f64| self.extrapolate_toward(f(a), f(b), f(c));
        let r = |f: fn(&Primitive) -> f64| self.extrapolate_toward(f(d), f(c), f(b));
        (
            Primitive::new(l(|w| w.rho), l(|w| w.u), l(|w| w.v), l(|w| w.p)),
            Primitive::new(r(|w| w.rho), r(|w| w.u), r(|w| w.v), r(|w| w.p)),
        )
    }
}

/// Van Leer limited slope: harmonic mean of equal-signed differences, else zero.
#[inline]
pub fn van_leer(dm: f64, dp: f64) -> f64 {
    let prod = dm * dp;
    if prod > 0.0 {
        2.0 * prod / (dm + dp)
    } else {
        0.0
    }
}

/// Reconstruct along a line of cell values.
///
/// Returns `(left, right)` states for each face between `values[k]` and
/// `values[k + 1]`, `k = 1..len - 2`; the first and last value act as
/// stencil padding.
pub fn muscl_reconstruct(values: &[f64], config: &ReconstructionConfig) -> Vec<(f64, f64)> {
    if values.len() < 4 {
        return Vec::new();
    }
    values
        .windows(4)
        .map(|w| {
            (
                config.extrapolate_toward(w[0], w[1], w[2]),
                config.extrapolate_toward(w[3], w[2], w[1]),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unlimited() -> ReconstructionConfig {
        ReconstructionConfig {
            limiter: Limiter::None,
            ..ReconstructionConfig::MUSCL_VAN_LEER
        }
    }

    #[test]
    fn uniform_data_is_unchanged() {
        for cfg in [ReconstructionConfig::FIRST_ORDER, ReconstructionConfig::MUSCL_VAN_LEER, unlimited()] {
            for (l, r) in muscl_reconstruct(&[2.0; 6], &cfg) {
                assert_eq!((l, r), (2.0, 2.0));
            }
        }
    }

    #[test]
    fn linear_data_is_exact() {
        let v: Vec<f64> = (0..8).map(|j| j as f64).collect();
        for cfg in [ReconstructionConfig::MUSCL_VAN_LEER, unlimited()] {
            for (k, (l, r)) in muscl_reconstruct(&v, &cfg).into_iter().enumerate() {
                let face = k as f64 + 1.5;
                assert_relative_eq!(l, face, max_relative = 1e-15);
                assert_relative_eq!(r, face, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn van_leer_flattens_extrema() {
        assert_eq!(van_leer(1.0, -1.0), 0.0);
        assert_eq!(van_leer(0.0, 1.0), 0.0);
        let cfg = ReconstructionConfig::MUSCL_VAN_LEER;
        let faces = muscl_reconstruct(&[0.0, 1.0, 3.0, 1.0, 0.0], &cfg);
        // face between the peak (3.0) and its right neighbour
        assert_eq!(faces[1].0, 3.0);
        // face between the left neighbour and the peak, seen from the peak
        assert_eq!(faces[0].1, 3.0);
    }

    #[test]
    fn first_order_ignores_kappa_and_limiter() {
        let cfg = ReconstructionConfig {
            kappa: -1.0,
            limiter: Limiter::None,
            ..ReconstructionConfig::FIRST_ORDER
        };
        assert_eq!(muscl_reconstruct(&[0.0, 1.0, 4.0, 9.0], &cfg), vec![(1.0, 4.0)]);
    }
}
