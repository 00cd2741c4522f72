use crate::average::InterfaceAverage;
use crate::state::{FaceState, Gas};

/// Leftmost and rightmost signal speeds bounding the Riemann fan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpeeds {
    /// Always <= 0.
    pub s_l: f64,
    /// Always >= 0.
    pub s_r: f64,
}

impl WaveSpeeds {
    /// Einfeldt's estimates, clipped so the fan always contains the face.
    #[inline]
    pub fn einfeldt(wl: &FaceState, wr: &FaceState, avg: &InterfaceAverage, gas: &Gas) -> Self {
        let al = wl.sound_speed(gas);
        let ar = wr.sound_speed(gas);
        Self {
            s_l: 0f64.min(wl.un - al).min(avg.un - avg.a),
            s_r: 0f64.max(wr.un + ar).max(avg.un + avg.a),
        }
    }

    /// s_r s_l / (s_r - s_l), the (non-positive) weight of the jump term.
    #[inline]
    pub fn jump_weight(&self) -> f64 {
        self.s_r * self.s_l / (self.s_r - self.s_l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::average::AveragingKind;
    use approx::assert_relative_eq;

    fn speeds(wl: FaceState, wr: FaceState) -> WaveSpeeds {
        let gas = Gas::AIR;
        let avg = InterfaceAverage::new(&wl, &wr, AveragingKind::Roe, &gas).unwrap();
        WaveSpeeds::einfeldt(&wl, &wr, &avg, &gas)
    }

    #[test]
    fn symmetric_rest_state() {
        let w = FaceState::new(1.0, 0.0, 0.0, 1.0);
        let s = speeds(w, w);
        assert_relative_eq!(s.s_l, -1.4f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(s.s_r, 1.4f64.sqrt(), epsilon = 1e-15);
        assert_eq!(s.s_l, -s.s_r);
    }

    #[test]
    fn supersonic_state_clips_left_speed() {
        // a = 1 requires p = rho / gamma.
        let w = FaceState::new(1.0, 3.0, 0.0, 1.0 / 1.4);
        let s = speeds(w, w);
        assert_eq!(s.s_l, 0.0);
        assert_relative_eq!(s.s_r, 4.0, epsilon = 1e-14);
    }
}
