//! Mesh recipes for the canonical cases.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;
use crate::mesh::StructuredMesh;

/// Description of a structured mesh, independent of the flow state.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields))]
pub enum GridRecipe {
    /// Uniform Cartesian cells on `[x0, x1] x [y0, y1]`.
    Rectangle {
        ni: usize,
        nj: usize,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    /// Rectangle whose node row `line` is shifted by `+amplitude` at even
    /// node columns and `-amplitude` at odd ones.
    PerturbedMidline {
        ni: usize,
        nj: usize,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        line: usize,
        amplitude: f64,
    },
    /// Rectangle with the cells of `x > step_x, y < step_height` masked out.
    Step {
        ni: usize,
        nj: usize,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        step_x: f64,
        step_height: f64,
    },
    /// Rectangle with the cells of `x < corner_x, y < corner_y` masked out.
    Corner {
        ni: usize,
        nj: usize,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        corner_x: f64,
        corner_y: f64,
    },
    /// O-grid around a circle centred at the origin.
    ///
    /// `i` runs clockwise from the leading point `(-radius, 0)` and is
    /// periodic; `j` runs outward with radii growing geometrically from
    /// `radius` to `far_radius`, which keeps cells close to square.
    OGrid {
        ni: usize,
        nj: usize,
        radius: f64,
        far_radius: f64,
    },
    /// Half-cylinder nose of radius `nose_radius` facing `-x`, centred at
    /// the origin, with an elliptic outer boundary `upstream` ahead of the
    /// nose and `lateral` beyond it at `x = 0`.
    ///
    /// `i` runs from the outer boundary (`i = 0`) to the body (`i = ni`),
    /// `j` from the lower end (`y < 0`) to the upper end.
    BluntBody {
        ni: usize,
        nj: usize,
        nose_radius: f64,
        upstream: f64,
        lateral: f64,
    },
}

impl GridRecipe {
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            GridRecipe::Rectangle { ni, nj, .. }
            | GridRecipe::PerturbedMidline { ni, nj, .. }
            | GridRecipe::Step { ni, nj, .. }
            | GridRecipe::Corner { ni, nj, .. }
            | GridRecipe::OGrid { ni, nj, .. }
            | GridRecipe::BluntBody { ni, nj, .. } => (ni, nj),
        }
    }
}

pub fn generate_grid(recipe: &GridRecipe) -> Result<StructuredMesh> {
    match *recipe {
        GridRecipe::Rectangle { ni, nj, x0, x1, y0, y1 } => StructuredMesh::rectangle(ni, nj, x0, x1, y0, y1),
        GridRecipe::PerturbedMidline {
            ni,
            nj,
            x0,
            x1,
            y0,
            y1,
            line,
            amplitude,
        } => {
            if line == 0 || line >= nj {
                return Err(Error::Invalid(alloc::format!(
                    "perturbed line {line} must be an interior node row (1..{nj})"
                )));
            }
            let nodes = nodes_from(ni, nj, |i, j| {
                let x = x0 + (x1 - x0) * i as f64 / ni as f64;
                let mut y = y0 + (y1 - y0) * j as f64 / nj as f64;
                if j == line {
                    y += if i % 2 == 0 { amplitude } else { -amplitude };
                }
                [x, y]
            });
            StructuredMesh::from_nodes(ni, nj, nodes)
        }
        GridRecipe::Step {
            ni,
            nj,
            x0,
            x1,
            y0,
            y1,
            step_x,
            step_height,
        } => Ok(StructuredMesh::rectangle(ni, nj, x0, x1, y0, y1)?
            .with_solid_region(|c| c[0] > step_x && c[1] < step_height)),
        GridRecipe::Corner {
            ni,
            nj,
            x0,
            x1,
            y0,
            y1,
            corner_x,
            corner_y,
        } => Ok(StructuredMesh::rectangle(ni, nj, x0, x1, y0, y1)?
            .with_solid_region(|c| c[0] < corner_x && c[1] < corner_y)),
        GridRecipe::OGrid {
            ni,
            nj,
            radius,
            far_radius,
        } => {
            if !(radius > 0.0 && far_radius > radius) {
                return Err(Error::Invalid(alloc::format!(
                    "O-grid needs 0 < radius < far_radius (got {radius}, {far_radius})"
                )));
            }
            let ratio = far_radius / radius;
            let nodes = nodes_from(ni, nj, |i, j| {
                // The seam node is written from i = 0 so both ends coincide exactly.
                let theta = PI - 2.0 * PI * (i % ni) as f64 / ni as f64;
                let r = if j == nj {
                    far_radius
                } else {
                    radius * math::powf(ratio, j as f64 / nj as f64)
                };
                [r * math::cos(theta), r * math::sin(theta)]
            });
            Ok(StructuredMesh::from_nodes(ni, nj, nodes)?.with_periodic_i(true))
        }
        GridRecipe::BluntBody {
            ni,
            nj,
            nose_radius,
            upstream,
            lateral,
        } => {
            if !(nose_radius > 0.0 && upstream > 0.0 && lateral > 0.0) {
                return Err(Error::Invalid("blunt-body dimensions must be positive".into()));
            }
            let nodes = nodes_from(ni, nj, |i, j| {
                let phi = -0.5 * PI + PI * j as f64 / nj as f64;
                let (s, c) = (math::sin(phi), math::cos(phi));
                let body = [-nose_radius * c, nose_radius * s];
                let outer = [-(nose_radius + upstream) * c, (nose_radius + lateral) * s];
                let f = i as f64 / ni as f64;
                [outer[0] + f * (body[0] - outer[0]), outer[1] + f * (body[1] - outer[1])]
            });
            StructuredMesh::from_nodes(ni, nj, nodes)
        }
    }
}

fn nodes_from(ni: usize, nj: usize, node: impl Fn(usize, usize) -> [f64; 2]) -> Vec<[f64; 2]> {
    let mut nodes = Vec::with_capacity((ni + 1) * (nj + 1));
    for j in 0..=nj {
        for i in 0..=ni {
            nodes.push(node(i, j));
        }
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn planar_shock_rectangle() {
        let m = generate_grid(&GridRecipe::Rectangle {
            ni: 800,
            nj: 20,
            x0: 0.0,
            x1: 800.0,
            y0: 0.0,
            y1: 20.0,
        })
        .unwrap();
        assert_eq!(m.cell_count(), 16000);
        for j in 0..20 {
            for i in 0..800 {
                assert_relative_eq!(m.area(i, j), 1.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn perturbed_midline_keeps_total_area() {
        let recipe = GridRecipe::PerturbedMidline {
            ni: 8,
            nj: 20,
            x0: 0.0,
            x1: 8.0,
            y0: 0.0,
            y1: 20.0,
            line: 10,
            amplitude: 1e-3,
        };
        let m = generate_grid(&recipe).unwrap();
        assert_relative_eq!(m.node(0, 10)[1], 10.001, max_relative = 1e-14);
        assert_relative_eq!(m.node(1, 10)[1], 9.999, max_relative = 1e-14);
        assert_relative_eq!(m.total_area(), 160.0, max_relative = 1e-13);
        // The cells on either side of the line alternate between thin and thick.
        assert!((m.area(0, 9) - m.area(1, 9)).abs() < 1e-12);
        assert_relative_eq!(m.area(0, 9), 1.0, max_relative = 1e-12);
        let column: f64 = (0..20).map(|j| m.area(3, j)).sum();
        assert_relative_eq!(column, 20.0, max_relative = 1e-13);
    }

    #[test]
    fn o_grid_closes_on_itself() {
        let m = generate_grid(&GridRecipe::OGrid {
            ni: 96,
            nj: 72,
            radius: 0.5,
            far_radius: 20.0,
        })
        .unwrap();
        assert!(m.periodic_i());
        for j in 0..=72 {
            assert_eq!(m.node(0, j), m.node(96, j));
        }
        let annulus = PI * (20.0f64 * 20.0 - 0.25);
        // Polygonal boundaries lose a little area against the exact annulus.
        assert_relative_eq!(m.total_area(), annulus, max_relative = 1e-2);
        assert_relative_eq!(m.node(0, 0)[0], -0.5, max_relative = 1e-14);
    }

    #[test]
    fn blunt_body_is_right_handed() {
        let m = generate_grid(&GridRecipe::BluntBody {
            ni: 40,
            nj: 320,
            nose_radius: 1.0,
            upstream: 2.0,
            lateral: 3.0,
        })
        .unwrap();
        assert!(m.min_area() > 0.0);
        assert_relative_eq!(m.node(40, 160)[0], -1.0, max_relative = 1e-14);
        assert_relative_eq!(m.node(0, 160)[0], -3.0, max_relative = 1e-14);
    }

    #[test]
    fn masked_regions() {
        let step = generate_grid(&GridRecipe::Step {
            ni: 480,
            nj: 160,
            x0: 0.0,
            x1: 3.0,
            y0: 0.0,
            y1: 1.0,
            step_x: 0.6,
            step_height: 0.2,
        })
        .unwrap();
        assert_eq!(step.cell_count() - step.fluid_cell_count(), 384 * 32);
        let corner = generate_grid(&GridRecipe::Corner {
            ni: 400,
            nj: 400,
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
            corner_x: 0.05,
            corner_y: 0.45,
        })
        .unwrap();
        assert_eq!(corner.cell_count() - corner.fluid_cell_count(), 20 * 180);
    }

    #[test]
    fn bad_recipes_are_rejected() {
        assert!(generate_grid(&GridRecipe::OGrid {
            ni: 8,
            nj: 4,
            radius: 1.0,
            far_radius: 0.5
        })
        .is_err());
        assert!(generate_grid(&GridRecipe::PerturbedMidline {
            ni: 4,
            nj: 4,
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
            line: 4,
            amplitude: 0.01
        })
        .is_err());
    }
}
