//! Exact solution of the one-dimensional Riemann problem for a perfect gas.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::state::{Gas, Primitive};

const TOLERANCE: f64 = 1e-12;
const MAX_NEWTON: usize = 100;

/// Self-similar solution `W(x / t)`; `u` is the direction of propagation and
/// `v` is carried passively across the contact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRiemann {
    pub left: Primitive,
    pub right: Primitive,
    pub p_star: f64,
    pub u_star: f64,
    gas: Gas,
}

/// Wave curve through `(rho_k, p_k)`: velocity change and its derivative at pressure `p`.
fn wave_curve(p: f64, w: &Primitive, g: f64) -> (f64, f64) {
    let a = math::sqrt(g * w.p / w.rho);
    if p > w.p {
        let ak = 2.0 / ((g + 1.0) * w.rho);
        let bk = (g - 1.0) / (g + 1.0) * w.p;
        let q = math::sqrt(ak / (p + bk));
        let f = (p - w.p) * q;
        (f, q * (1.0 - 0.5 * (p - w.p) / (bk + p)))
    } else {
        let e = (g - 1.0) / (2.0 * g);
        let r = math::powf(p / w.p, e);
        let f = 2.0 * a / (g - 1.0) * (r - 1.0);
        (f, r / (w.rho * a) * w.p / p)
    }
}

impl ExactRiemann {
    pub fn new(left: Primitive, right: Primitive, gas: &Gas) -> Result<Self> {
        left.check()?;
        right.check()?;
        let g = gas.gamma;
        let al = gas.sound_speed(left.rho, left.p);
        let ar = gas.sound_speed(right.rho, right.p);
        let du = right.u - left.u;
        if 2.0 * (al + ar) / (g - 1.0) <= du {
            return Err(Error::Vacuum);
        }
        // two-rarefaction guess, always positive
        let e = (g - 1.0) / (2.0 * g);
        let num = al + ar - 0.5 * (g - 1.0) * du;
        let den = al / math::powf(left.p, e) + ar / math::powf(right.p, e);
        let mut p = math::powf(num / den, 1.0 / e).max(1e-14 * left.p.min(right.p));
        let mut converged = false;
        for _ in 0..MAX_NEWTON {
            let (fl, dl) = wave_curve(p, &left, g);
            let (fr, dr) = wave_curve(p, &right, g);
            let mut next = p - (fl + fr + du) / (dl + dr);
            if next <= 0.0 {
                next = 0.1 * p;
            }
            let change = 2.0 * (next - p).abs() / (next + p);
            p = next;
            if change < TOLERANCE {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                what: "star-pressure Newton iteration",
                iterations: MAX_NEWTON,
            });
        }
        let (fl, _) = wave_curve(p, &left, g);
        let (fr, _) = wave_curve(p, &right, g);
        Ok(Self {
            left,
            right,
            p_star: p,
            u_star: 0.5 * (left.u + right.u) + 0.5 * (fr - fl),
            gas: *gas,
        })
    }

    /// Density just left and right of the contact.
    pub fn star_densities(&self) -> (f64, f64) {
        (self.star_density(&self.left), self.star_density(&self.right))
    }

    fn star_density(&self, w: &Primitive) -> f64 {
        let g = self.gas.gamma;
        let r = self.p_star / w.p;
        if r > 1.0 {
            let k = (g - 1.0) / (g + 1.0);
            w.rho * (r + k) / (r * k + 1.0)
        } else {
            w.rho * math::powf(r, 1.0 / g)
        }
    }

    /// Speed of the shock on the given side, if that wave is a shock.
    pub fn shock_speed(&self, left_side: bool) -> Option<f64> {
        let g = self.gas.gamma;
        let (w, s) = if left_side { (&self.left, -1.0) } else { (&self.right, 1.0) };
        if self.p_star <= w.p {
            return None;
        }
        let a = self.gas.sound_speed(w.rho, w.p);
        let r = self.p_star / w.p;
        Some(w.u + s * a * math::sqrt((g + 1.0) / (2.0 * g) * r + (g - 1.0) / (2.0 * g)))
    }

    /// State at similarity coordinate `s = (x - x0) / t`.
    pub fn sample(&self, s: f64) -> Primitive {
        let g = self.gas.gamma;
        let on_left = s <= self.u_star;
        let (w, dir) = if on_left { (&self.left, 1.0) } else { (&self.right, -1.0) };
        let a = self.gas.sound_speed(w.rho, w.p);
        // dir = +1 for the left wave, whose speeds are u - a
        let rho_star = self.star_density(w);
        let star = Primitive::new(rho_star, self.u_star, w.v, self.p_star);
        if self.p_star > w.p {
            let shock = self.shock_speed(on_left).unwrap_or(w.u);
            if (on_left && s <= shock) || (!on_left && s >= shock) {
                *w
            } else {
                star
            }
        } else {
            let head = w.u - dir * a;
            let a_star = a * math::powf(self.p_star / w.p, (g - 1.0) / (2.0 * g));
            let tail = self.u_star - dir * a_star;
            let outside = if on_left { s <= head } else { s >= head };
            let inside_star = if on_left { s >= tail } else { s <= tail };
            if outside {
                *w
            } else if inside_star {
                star
            } else {
                let c = 2.0 / (g + 1.0) + dir * (g - 1.0) / ((g + 1.0) * a) * (w.u - s);
                let rho = w.rho * math::powf(c, 2.0 / (g - 1.0));
                let u = 2.0 / (g + 1.0) * (dir * a + 0.5 * (g - 1.0) * w.u + s);
                Primitive::new(rho, u, w.v, w.p * math::powf(c, 2.0 * g / (g - 1.0)))
            }
        }
    }
}

/// Sample the exact solution at similarity coordinates `samples`.
pub fn exact_riemann_solution(left: Primitive, right: Primitive, samples: &[f64], gas: &Gas) -> Result<Vec<Primitive>> {
    let rp = ExactRiemann::new(left, right, gas)?;
    Ok(samples.iter().map(|s| rp.sample(*s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sod_star_pressure() {
        let rp = ExactRiemann::new(
            Primitive::new(1.0, 0.0, 0.0, 1.0),
            Primitive::new(0.125, 0.0, 0.0, 0.1),
            &Gas::AIR,
        )
        .unwrap();
        assert_relative_eq!(rp.p_star, 0.30313, max_relative = 1e-4);
        assert_relative_eq!(rp.u_star, 0.92745, max_relative = 1e-4);
        let (dl, dr) = rp.star_densities();
        assert_relative_eq!(dl, 0.42632, max_relative = 1e-4);
        assert_relative_eq!(dr, 0.26557, max_relative = 1e-4);
    }

    #[test]
    fn severe_data_has_resting_contact() {
        let rp = ExactRiemann::new(
            Primitive::new(1.0, -19.59745, 0.0, 1000.0),
            Primitive::new(1.0, -19.59475, 0.0, 0.01),
            &Gas::AIR,
        )
        .unwrap();
        // the two velocities differ by 2.7e-3, so the contact drifts very slowly
        assert!(rp.u_star.abs() < 5e-3, "u* = {}", rp.u_star);
        assert_relative_eq!(rp.p_star, 460.894, max_relative = 1e-4);
        assert!(rp.shock_speed(false).unwrap() > 0.0);
    }

    #[test]
    fn identical_states_give_uniform_profile() {
        let w = Primitive::new(1.3, 0.4, 0.1, 2.0);
        let out = exact_riemann_solution(w, w, &[-3.0, -0.5, 0.0, 0.4, 0.41, 5.0], &Gas::AIR).unwrap();
        for s in out {
            assert_relative_eq!(s.rho, w.rho, max_relative = 1e-12);
            assert_relative_eq!(s.u, w.u, epsilon = 1e-12);
            assert_relative_eq!(s.p, w.p, max_relative = 1e-12);
        }
    }

    #[test]
    fn vacuum_rejected() {
        let r = ExactRiemann::new(
            Primitive::new(1.0, -20.0, 0.0, 1.0),
            Primitive::new(1.0, 20.0, 0.0, 1.0),
            &Gas::AIR,
        );
        assert_eq!(r.unwrap_err(), Error::Vacuum);
    }
}
