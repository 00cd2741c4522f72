//! Logically rectangular quadrilateral meshes.
//!
//! Nodes are indexed `(i, j)` with `0 <= i <= ni`, `0 <= j <= nj`; cell
//! `(i, j)` is bounded by nodes `i..=i+1`, `j..=j+1`. "i-faces" separate
//! cells along the i direction (`(ni + 1) * nj` of them), "j-faces" along
//! the j direction (`ni * (nj + 1)`). Face normals point toward increasing
//! index; meshes must be right-handed so that every cell area is positive.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CellIndex, Error, Result};
use crate::math;
use crate::state::Normal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceGeometry {
    pub normal: Normal,
    pub length: f64,
    pub center: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct StructuredMesh {
    pub ni: usize,
    pub nj: usize,
    nodes: Vec<[f64; 2]>,
    centers: Vec<[f64; 2]>,
    areas: Vec<f64>,
    i_faces: Vec<FaceGeometry>,
    j_faces: Vec<FaceGeometry>,
    solid: Vec<bool>,
    periodic_i: bool,
    periodic_j: bool,
}

impl StructuredMesh {
    /// Build a mesh from `(ni + 1) * (nj + 1)` nodes stored with `i` fastest.
    pub fn from_nodes(ni: usize, nj: usize, nodes: Vec<[f64; 2]>) -> Result<Self> {
        if ni == 0 || nj == 0 || nodes.len() != (ni + 1) * (nj + 1) {
            return Err(Error::Invalid(alloc::format!(
                "mesh of {ni}x{nj} cells needs {} nodes, got {}",
                (ni + 1) * (nj + 1),
                nodes.len()
            )));
        }
        let node = |i: usize, j: usize| nodes[i + j * (ni + 1)];
        let mut centers = Vec::with_capacity(ni * nj);
        let mut areas = Vec::with_capacity(ni * nj);
        for j in 0..nj {
            for i in 0..ni {
                let p0 = node(i, j);
                let p1 = node(i + 1, j);
                let p2 = node(i + 1, j + 1);
                let p3 = node(i, j + 1);
                let area = 0.5 * ((p2[0] - p0[0]) * (p3[1] - p1[1]) - (p3[0] - p1[0]) * (p2[1] - p0[1]));
                if !(area > 0.0) || !area.is_finite() {
                    return Err(Error::DegenerateCell {
                        cell: CellIndex::new(i, j),
                        area,
                    });
                }
                areas.push(area);
                centers.push([
                    0.25 * (p0[0] + p1[0] + p2[0] + p3[0]),
                    0.25 * (p0[1] + p1[1] + p2[1] + p3[1]),
                ]);
            }
        }
        let edge = |a: [f64; 2], b: [f64; 2], toward_i: bool| {
            let dx = b[0] - a[0];
            let dy = b[1] - a[1];
            let (nx, ny) = if toward_i { (dy, -dx) } else { (-dy, dx) };
            FaceGeometry {
                normal: Normal::from_vector(nx, ny),
                length: math::hypot(dx, dy),
                center: [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])],
            }
        };
        let mut i_faces = Vec::with_capacity((ni + 1) * nj);
        for j in 0..nj {
            for fi in 0..=ni {
                i_faces.push(edge(node(fi, j), node(fi, j + 1), true));
            }
        }
        let mut j_faces = Vec::with_capacity(ni * (nj + 1));
        for fj in 0..=nj {
            for i in 0..ni {
                j_faces.push(edge(node(i, fj), node(i + 1, fj), false));
            }
        }
        Ok(Self {
            ni,
            nj,
            nodes,
            centers,
            areas,
            i_faces,
            j_faces,
            solid: vec![false; ni * nj],
            periodic_i: false,
            periodic_j: false,
        })
    }

    /// Uniform Cartesian mesh on `[x0, x1] x [y0, y1]`.
    pub fn rectangle(ni: usize, nj: usize, x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let mut nodes = Vec::with_capacity((ni + 1) * (nj + 1));
        for j in 0..=nj {
            let y = y0 + (y1 - y0) * j as f64 / nj as f64;
            for i in 0..=ni {
                nodes.push([x0 + (x1 - x0) * i as f64 / ni as f64, y]);
            }
        }
        Self::from_nodes(ni, nj, nodes)
    }

    /// Mark cells as solid where `is_solid(center)` holds.
    pub fn with_solid_region(mut self, is_solid: impl Fn([f64; 2]) -> bool) -> Self {
        for (s, c) in self.solid.iter_mut().zip(&self.centers) {
            *s = is_solid(*c);
        }
        self
    }

    pub fn with_periodic_i(mut self, periodic: bool) -> Self {
        self.periodic_i = periodic;
        self
    }

    pub fn with_periodic_j(mut self, periodic: bool) -> Self {
        self.periodic_j = periodic;
        self
    }

    pub fn periodic_i(&self) -> bool {
        self.periodic_i
    }

    pub fn periodic_j(&self) -> bool {
        self.periodic_j
    }

    pub fn cell_count(&self) -> usize {
        self.ni * self.nj
    }

    pub fn fluid_cell_count(&self) -> usize {
        self.solid.iter().filter(|s| !**s).count()
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        self.nodes[i + j * (self.ni + 1)]
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        self.centers[i + j * self.ni]
    }

    #[inline]
    pub fn area(&self, i: usize, j: usize) -> f64 {
        self.areas[i + j * self.ni]
    }

    #[inline]
    pub fn is_solid(&self, i: usize, j: usize) -> bool {
        self.solid[i + j * self.ni]
    }

    /// Face between cells `(fi - 1, j)` and `(fi, j)`.
    #[inline]
    pub fn i_face(&self, fi: usize, j: usize) -> &FaceGeometry {
        &self.i_faces[fi + j * (self.ni + 1)]
    }

    /// Face between cells `(i, fj - 1)` and `(i, fj)`.
    #[inline]
    pub fn j_face(&self, i: usize, fj: usize) -> &FaceGeometry {
        &self.j_faces[i + fj * self.ni]
    }

    /// Sum of outward `n * length` over the four faces of a cell; zero for a closed cell.
    pub fn closure_defect(&self, i: usize, j: usize) -> [f64; 2] {
        let w = self.i_face(i, j);
        let e = self.i_face(i + 1, j);
        let s = self.j_face(i, j);
        let n = self.j_face(i, j + 1);
        let mut sum = [0.0; 2];
        for (f, sign) in [(e, 1.0), (w, -1.0), (n, 1.0), (s, -1.0)] {
            sum[0] += sign * f.normal.nx * f.length;
            sum[1] += sign * f.normal.ny * f.length;
        }
        sum
    }

    /// Smallest cell area.
    pub fn min_area(&self) -> f64 {
        self.areas.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rectangle_geometry() {
        let m = StructuredMesh::rectangle(4, 2, 0.0, 2.0, 0.0, 1.0).unwrap();
        assert_eq!(m.cell_count(), 8);
        assert_relative_eq!(m.area(0, 0), 0.25);
        assert_eq!(m.i_face(0, 0).normal, Normal::X);
        assert_eq!(m.j_face(0, 0).normal, Normal::Y);
        assert_relative_eq!(m.i_face(2, 1).length, 0.5);
        assert_relative_eq!(m.center(3, 1)[0], 1.75);
        for j in 0..2 {
            for i in 0..4 {
                let d = m.closure_defect(i, j);
                assert!(d[0].abs() < 1e-15 && d[1].abs() < 1e-15);
            }
        }
    }

    #[test]
    fn left_handed_mesh_rejected() {
        let nodes = vec![[0.0, 0.0], [1.0, 0.0], [0.0, -1.0], [1.0, -1.0]];
        assert!(matches!(
            StructuredMesh::from_nodes(1, 1, nodes),
            Err(Error::DegenerateCell { .. })
        ));
    }

    #[test]
    fn solid_region_marks_cells() {
        let m = StructuredMesh::rectangle(4, 4, 0.0, 1.0, 0.0, 1.0)
            .unwrap()
            .with_solid_region(|c| c[0] > 0.5 && c[1] < 0.5);
        assert!(m.is_solid(3, 0));
        assert!(!m.is_solid(1, 0));
        assert_eq!(m.fluid_cell_count(), 12);
    }
}
