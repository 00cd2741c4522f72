//! Pressure-ratio shock sensors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mesh::StructuredMesh;

/// `fp = min(p_l / p_r, p_r / p_l)^3`, in `(0, 1]`.
pub fn pressure_sensor(p_l: f64, p_r: f64) -> Result<f64> {
    if !(p_l > 0.0 && p_r > 0.0) {
        return Err(Error::NonPositivePressure { p_l, p_r });
    }
    let r = if p_l < p_r { p_l / p_r } else { p_r / p_l };
    Ok(r * r * r)
}

/// Face sensor values over a structured mesh.
///
/// Layout matches [`StructuredMesh`]: i-faces are indexed `fi + j * (ni + 1)`,
/// j-faces `i + fj * ni`. Faces that take no part in the flux computation
/// (between two solid cells, or a solid cell and the domain boundary) hold
/// `1.0` and are excluded from stencil minima.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceSensorField {
    ni: usize,
    nj: usize,
    pub fp_i: Vec<f64>,
    pub fp_j: Vec<f64>,
    pub fp1_i: Vec<f64>,
    pub fp1_j: Vec<f64>,
    active_i: Vec<bool>,
    active_j: Vec<bool>,
}

impl FaceSensorField {
    /// All faces active with `fp = fp1 = 1`.
    pub fn uniform(ni: usize, nj: usize) -> Self {
        let ci = (ni + 1) * nj;
        let cj = ni * (nj + 1);
        Self {
            ni,
            nj,
            fp_i: vec![1.0; ci],
            fp_j: vec![1.0; cj],
            fp1_i: vec![1.0; ci],
            fp1_j: vec![1.0; cj],
            active_i: vec![true; ci],
            active_j: vec![true; cj],
        }
    }

    pub fn ni(&self) -> usize {
        self.ni
    }

    pub fn nj(&self) -> usize {
        self.nj
    }

    #[inline]
    pub fn i_index(&self, fi: usize, j: usize) -> usize {
        fi + j * (self.ni + 1)
    }

    #[inline]
    pub fn j_index(&self, i: usize, fj: usize) -> usize {
        i + fj * self.ni
    }

    #[inline]
    pub fn fp1_i_face(&self, fi: usize, j: usize) -> f64 {
        self.fp1_i[self.i_index(fi, j)]
    }

    #[inline]
    pub fn fp1_j_face(&self, i: usize, fj: usize) -> f64 {
        self.fp1_j[self.j_index(i, fj)]
    }

    pub fn set_fp_i(&mut self, fi: usize, j: usize, fp: f64) {
        let k = self.i_index(fi, j);
        self.fp_i[k] = fp;
        self.active_i[k] = true;
    }

    pub fn set_fp_j(&mut self, i: usize, fj: usize, fp: f64) {
        let k = self.j_index(i, fj);
        self.fp_j[k] = fp;
        self.active_j[k] = true;
    }

    pub fn deactivate_i(&mut self, fi: usize, j: usize) {
        let k = self.i_index(fi, j);
        self.fp_i[k] = 1.0;
        self.active_i[k] = false;
    }

    pub fn deactivate_j(&mut self, i: usize, fj: usize) {
        let k = self.j_index(i, fj);
        self.fp_j[k] = 1.0;
        self.active_j[k] = false;
    }

    /// Recompute `fp1` from the current `fp` values.
    ///
    /// An i-face takes the minimum of itself and the four j-faces bounding
    /// the two cells it separates; j-faces are handled symmetrically. Cells
    /// outside the mesh are skipped unless the direction is periodic.
    pub fn update_stencil_min(&mut self, periodic_i: bool, periodic_j: bool) {
        let (ni, nj) = (self.ni, self.nj);
        let wrap = |c: isize, n: usize, periodic: bool| -> Option<usize> {
            if c >= 0 && (c as usize) < n {
                Some(c as usize)
            } else if periodic {
                Some(c.rem_euclid(n as isize) as usize)
            } else {
                None
            }
        };
        let jface = |s: &Self, i: usize, fj: usize| {
            let k = s.j_index(i, fj);
            if s.active_j[k] { s.fp_j[k] } else { 1.0 }
        };
        let iface = |s: &Self, fi: usize, j: usize| {
            let k = s.i_index(fi, j);
            if s.active_i[k] { s.fp_i[k] } else { 1.0 }
        };
        for j in 0..nj {
            for fi in 0..=ni {
                let mut m = self.fp_i[self.i_index(fi, j)];
                for c in [fi as isize - 1, fi as isize] {
                    if let Some(ci) = wrap(c, ni, periodic_i) {
                        m = m.min(jface(self, ci, j)).min(jface(self, ci, j + 1));
                    }
                }
                let k = self.i_index(fi, j);
                self.fp1_i[k] = m;
            }
        }
        for fj in 0..=nj {
            for i in 0..ni {
                let mut m = self.fp_j[self.j_index(i, fj)];
                for c in [fj as isize - 1, fj as isize] {
                    if let Some(cj) = wrap(c, nj, periodic_j) {
                        m = m.min(iface(self, i, cj)).min(iface(self, i + 1, cj));
                    }
                }
                let k = self.j_index(i, fj);
                self.fp1_j[k] = m;
            }
        }
    }

    /// Whether every entry lies in `[0, 1]` and `fp1 <= fp` face by face.
    pub fn is_consistent(&self) -> bool {
        let ok = |fp: &[f64], fp1: &[f64]| {
            fp.iter()
                .zip(fp1)
                .all(|(a, b)| (0.0..=1.0).contains(a) && (0.0..=1.0).contains(b) && b <= a)
        };
        ok(&self.fp_i, &self.fp1_i) && ok(&self.fp_j, &self.fp1_j)
    }
}

/// Apply the five-face stencil minimum to a field of face `fp` values.
pub fn pressure_sensor_multidim(mesh: &StructuredMesh, fp: &FaceSensorField) -> FaceSensorField {
    let mut out = fp.clone();
    out.update_stencil_min(mesh.periodic_i(), mesh.periodic_j());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn face_sensor_examples() {
        assert_eq!(pressure_sensor(1.0, 1.0).unwrap(), 1.0);
        assert_relative_eq!(pressure_sensor(1.0, 2.0).unwrap(), 0.125);
        assert_relative_eq!(pressure_sensor(1000.0, 0.01).unwrap(), 1e-15, max_relative = 1e-12);
        assert!(pressure_sensor(0.0, 1.0).is_err());
        assert!(pressure_sensor(1.0, -1.0).is_err());
    }

    #[test]
    fn uniform_field_stays_one() {
        let mesh = StructuredMesh::rectangle(3, 3, 0.0, 1.0, 0.0, 1.0).unwrap();
        let f = pressure_sensor_multidim(&mesh, &FaceSensorField::uniform(3, 3));
        assert!(f.fp1_i.iter().chain(&f.fp1_j).all(|v| *v == 1.0));
    }

    #[test]
    fn single_low_j_face_reaches_adjacent_i_faces() {
        let mesh = StructuredMesh::rectangle(4, 4, 0.0, 1.0, 0.0, 1.0).unwrap();
        let mut f = FaceSensorField::uniform(4, 4);
        // j-face on top of cell (1, 1)
        f.set_fp_j(1, 2, 0.2);
        let f = pressure_sensor_multidim(&mesh, &f);
        // i-faces of cell (1,1) and of cell (1,2) see it
        assert_eq!(f.fp1_i_face(1, 1), 0.2);
        assert_eq!(f.fp1_i_face(2, 1), 0.2);
        assert_eq!(f.fp1_i_face(1, 2), 0.2);
        assert_eq!(f.fp1_i_face(2, 2), 0.2);
        assert_eq!(f.fp1_i_face(3, 1), 1.0);
        assert_eq!(f.fp1_i_face(1, 0), 1.0);
        // the j-face itself keeps its own value, its neighbours stay at 1
        assert_eq!(f.fp1_j_face(1, 2), 0.2);
        assert_eq!(f.fp1_j_face(0, 2), 1.0);
        assert!(f.is_consistent());
    }

    #[test]
    fn periodic_wrap_reaches_across_seam() {
        let mesh = StructuredMesh::rectangle(4, 3, 0.0, 1.0, 0.0, 1.0)
            .unwrap()
            .with_periodic_i(true);
        let mut f = FaceSensorField::uniform(4, 3);
        f.set_fp_j(3, 1, 0.5);
        let f = pressure_sensor_multidim(&mesh, &f);
        // face fi = 0 separates cell -1 (= 3 periodically) and cell 0
        assert_eq!(f.fp1_i_face(0, 0), 0.5);
        assert_eq!(f.fp1_i_face(4, 1), 0.5);
    }
}
