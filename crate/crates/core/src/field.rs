//! Cell-centred conserved field with two ghost layers on every side.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CellIndex, Result};
use crate::mesh::StructuredMesh;
use crate::state::{Conserved, Gas, Primitive};

/// Number of ghost layers.
pub const GHOSTS: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    ni: usize,
    nj: usize,
    data: Vec<Conserved>,
}

impl Field {
    pub fn uniform(ni: usize, nj: usize, value: Conserved) -> Self {
        Self {
            ni,
            nj,
            data: vec![value; (ni + 2 * GHOSTS) * (nj + 2 * GHOSTS)],
        }
    }

    /// Field initialised from a function of the cell centre.
    pub fn from_fn(mesh: &StructuredMesh, gas: &Gas, init: impl Fn([f64; 2]) -> Primitive) -> Self {
        let mut f = Self::uniform(mesh.ni, mesh.nj, Conserved::default());
        for j in 0..mesh.nj {
            for i in 0..mesh.ni {
                f.set(i, j, init(mesh.center(i, j)).to_conserved(gas));
            }
        }
        // Ghosts start as copies of the nearest interior cell.
        for j in -(GHOSTS as isize)..(mesh.nj + GHOSTS) as isize {
            for i in -(GHOSTS as isize)..(mesh.ni + GHOSTS) as isize {
                let ci = i.clamp(0, mesh.ni as isize - 1);
                let cj = j.clamp(0, mesh.nj as isize - 1);
                let v = *f.at(ci, cj);
                *f.at_mut(i, j) = v;
            }
        }
        f
    }

    pub fn ni(&self) -> usize {
        self.ni
    }

    pub fn nj(&self) -> usize {
        self.nj
    }

    #[inline]
    pub(crate) fn stride(&self) -> usize {
        self.ni + 2 * GHOSTS
    }

    /// Storage index of a (possibly ghost) cell.
    #[inline]
    pub(crate) fn index(&self, i: isize, j: isize) -> usize {
        (i + GHOSTS as isize) as usize + (j + GHOSTS as isize) as usize * self.stride()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Conserved {
        &self.data[self.index(i as isize, j as isize)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, u: Conserved) {
        let k = self.index(i as isize, j as isize);
        self.data[k] = u;
    }

    /// Access including ghost cells (`-2 <= i < ni + 2`).
    #[inline]
    pub fn at(&self, i: isize, j: isize) -> &Conserved {
        &self.data[self.index(i, j)]
    }

    #[inline]
    pub fn at_mut(&mut self, i: isize, j: isize) -> &mut Conserved {
        let k = self.index(i, j);
        &mut self.data[k]
    }

    pub(crate) fn raw(&self) -> &[Conserved] {
        &self.data
    }

    /// Primitive state of an interior cell, with its index attached to errors.
    pub fn primitive(&self, i: usize, j: usize, gas: &Gas) -> Result<Primitive> {
        self.get(i, j).to_primitive(gas).map_err(|e| e.at(CellIndex::new(i, j)))
    }

    /// Sum of `U * area` over fluid cells.
    pub fn totals(&self, mesh: &StructuredMesh) -> [f64; 4] {
        let mut t = [0.0; 4];
        for j in 0..self.nj {
            for i in 0..self.ni {
                if mesh.is_solid(i, j) {
                    continue;
                }
                let a = mesh.area(i, j);
                let u = self.get(i, j).to_array();
                for k in 0..4 {
                    t[k] += a * u[k];
                }
            }
        }
        t
    }

    /// Interior primitive values in row-major `(j, i)` order; solid cells give `None`.
    pub fn primitives(&self, mesh: &StructuredMesh, gas: &Gas) -> Vec<Option<Primitive>> {
        let mut out = Vec::with_capacity(self.ni * self.nj);
        for j in 0..self.nj {
            for i in 0..self.ni {
                out.push(if mesh.is_solid(i, j) {
                    None
                } else {
                    Some(self.get(i, j).to_primitive_unchecked(gas))
                });
            }
        }
        out
    }
}
