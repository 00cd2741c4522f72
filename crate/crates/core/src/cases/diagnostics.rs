//! Scalar and profile diagnostics computed from a finished field.
//!
//! All functions are pure in `(field, mesh)`; solid cells are skipped.

use alloc::vec::Vec;

use crate::error::Result;
use crate::field::Field;
use crate::math;
use crate::mesh::StructuredMesh;
use crate::state::{Gas, Primitive};

/// Worst column-wise density spread: the maximum over `i` of the standard
/// deviation over `j` of `rho(i, j)`, divided by `rho_ref`.
pub fn odd_even_asymmetry(field: &Field, mesh: &StructuredMesh, rho_ref: f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..mesh.ni {
        let column: Vec<f64> = (0..mesh.nj)
            .filter(|&j| !mesh.is_solid(i, j))
            .map(|j| field.get(i, j).rho)
            .collect();
        if column.len() < 2 {
            continue;
        }
        let n = column.len() as f64;
        let mean = column.iter().sum::<f64>() / n;
        let var = column.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n;
        worst = worst.max(math::sqrt(var));
    }
    worst / rho_ref
}

/// Point of a pressure profile.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfilePoint {
    pub x: f64,
    pub y: f64,
    pub p: f64,
}

/// Pressure along the `j` line(s) whose cell centres lie closest to `y = 0`,
/// ordered by `i`. With two equally close lines (even `nj` on a symmetric
/// mesh) their values are averaged.
pub fn centerline_pressure(field: &Field, mesh: &StructuredMesh, gas: &Gas) -> Result<Vec<ProfilePoint>> {
    let i_ref = mesh.ni - 1;
    let dist = |j: usize| mesh.center(i_ref, j)[1].abs();
    let best = (0..mesh.nj).map(dist).fold(f64::INFINITY, f64::min);
    let lines: Vec<usize> = (0..mesh.nj)
        .filter(|&j| dist(j) <= best + 1e-9 * (1.0 + best))
        .collect();
    let mut out = Vec::with_capacity(mesh.ni);
    for i in 0..mesh.ni {
        let mut p = 0.0;
        let mut c = [0.0; 2];
        for &j in &lines {
            p += field.primitive(i, j, gas)?.p;
            let cj = mesh.center(i, j);
            c[0] += cj[0];
            c[1] += cj[1];
        }
        let n = lines.len() as f64;
        out.push(ProfilePoint {
            x: c[0] / n,
            y: c[1] / n,
            p: p / n,
        });
    }
    Ok(out)
}

/// Pressure in the wall-adjacent cell at the end of a centreline profile.
pub fn stagnation_point_pressure(profile: &[ProfilePoint]) -> Option<f64> {
    profile.last().map(|q| q.p)
}

/// A point whose pressure is below this fraction of the next one's is
/// treated as lying inside the captured shock.
pub const SHOCK_CELL_RATIO: f64 = 0.95;

/// Post-shock pressure of a profile running from the free stream to the body.
///
/// The shock is the steepest rise between neighbouring points. Points still
/// rising steeply after it (see [`SHOCK_CELL_RATIO`]) belong to the captured
/// shock; the first point past them is the post-shock value.
pub fn post_shock_pressure(profile: &[ProfilePoint]) -> Option<f64> {
    let n = profile.len();
    if n < 3 {
        return None;
    }
    let k = (0..n - 1).max_by(|&a, &b| {
        let da = profile[a + 1].p - profile[a].p;
        let db = profile[b + 1].p - profile[b].p;
        da.total_cmp(&db)
    })?;
    let mut start = k + 1;
    while start + 1 < n && profile[start].p < SHOCK_CELL_RATIO * profile[start + 1].p {
        start += 1;
    }
    Some(profile[start].p)
}

/// Pressure coefficient `(p - p_inf) / (rho_inf u_inf^2 / 2)` per cell, `None` in solid cells.
pub fn cp_field(field: &Field, mesh: &StructuredMesh, gas: &Gas, free: &Primitive) -> Result<Vec<Option<f64>>> {
    let q = 0.5 * free.rho * free.speed_squared();
    let mut out = Vec::with_capacity(mesh.cell_count());
    for j in 0..mesh.nj {
        for i in 0..mesh.ni {
            out.push(if mesh.is_solid(i, j) {
                None
            } else {
                Some((field.primitive(i, j, gas)?.p - free.p) / q)
            });
        }
    }
    Ok(out)
}

/// `(p_max - p_min) / p_max` over fluid cells.
pub fn p_fluc(field: &Field, mesh: &StructuredMesh, gas: &Gas) -> Result<f64> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for j in 0..mesh.nj {
        for i in 0..mesh.ni {
            if !mesh.is_solid(i, j) {
                let p = field.primitive(i, j, gas)?.p;
                lo = lo.min(p);
                hi = hi.max(p);
            }
        }
    }
    Ok((hi - lo) / hi)
}

/// Rows and density level used to trace a near-vertical shock front.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KinkOptions {
    /// Half-open range of `j` rows spanning the front segment.
    pub rows: (usize, usize),
    /// Density level marking the front.
    pub threshold: f64,
}

fn median(v: &mut [f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Largest deviation, in cells, of a traced shock front from a robust straight-line fit.
///
/// In every row the front is the last crossing of `threshold` found
/// scanning toward increasing `i`, located by linear interpolation between
/// cell centres. Rows without a crossing are skipped; fewer than three
/// traced rows give `None`.
pub fn shock_kink_metric(field: &Field, mesh: &StructuredMesh, options: &KinkOptions) -> Option<f64> {
    let mut pts = Vec::new();
    let mut spacing = 0.0;
    for j in options.rows.0..options.rows.1.min(mesh.nj) {
        let rho = |i: usize| field.get(i, j).rho;
        let Some(crossing) = (0..mesh.ni - 1).rev().find(|&i| {
            !mesh.is_solid(i, j) && !mesh.is_solid(i + 1, j) && rho(i) >= options.threshold && rho(i + 1) < options.threshold
        }) else {
            continue;
        };
        let (a, b) = (rho(crossing), rho(crossing + 1));
        let s = (a - options.threshold) / (a - b);
        let (ca, cb) = (mesh.center(crossing, j), mesh.center(crossing + 1, j));
        let x = ca[0] + s * (cb[0] - ca[0]);
        spacing += cb[0] - ca[0];
        pts.push((ca[1], x));
    }
    if pts.len() < 3 {
        return None;
    }
    let dx = spacing / pts.len() as f64;
    // Theil-Sen fit: a localized kink does not drag the reference line.
    let mut slopes = Vec::new();
    for (a, p) in pts.iter().enumerate() {
        for q in &pts[a + 1..] {
            if q.0 != p.0 {
                slopes.push((q.1 - p.1) / (q.0 - p.0));
            }
        }
    }
    let slope = median(&mut slopes).unwrap_or(0.0);
    let mut offsets: Vec<f64> = pts.iter().map(|&(y, x)| x - slope * y).collect();
    let offset = median(&mut offsets)?;
    let dev = pts
        .iter()
        .map(|&(y, x)| (x - (offset + slope * y)).abs())
        .fold(0.0, f64::max);
    Some(dev / dx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use approx::assert_relative_eq;

    fn rect(ni: usize, nj: usize) -> StructuredMesh {
        StructuredMesh::rectangle(ni, nj, 0.0, ni as f64, 0.0, nj as f64).unwrap()
    }

    #[test]
    fn asymmetry_of_uniform_and_checkerboard_fields() {
        let gas = Gas::AIR;
        let mesh = rect(6, 4);
        let uniform = Field::from_fn(&mesh, &gas, |_| Primitive::new(7.0, 1.0, 0.0, 40.0));
        assert_eq!(odd_even_asymmetry(&uniform, &mesh, 7.0), 0.0);
        let delta = 0.05;
        let checker = Field::from_fn(&mesh, &gas, |c| {
            let parity = (c[0] as i64 + c[1] as i64) % 2;
            Primitive::new(if parity == 0 { 7.0 + delta } else { 7.0 - delta }, 1.0, 0.0, 40.0)
        });
        assert_relative_eq!(odd_even_asymmetry(&checker, &mesh, 7.0), delta / 7.0, max_relative = 1e-12);
    }

    #[test]
    fn uniform_field_has_no_pressure_fluctuation() {
        let gas = Gas::AIR;
        let mesh = rect(5, 5);
        let free = Primitive::new(1.0, 0.1, 0.0, 1.0 / 1.4);
        let f = Field::from_fn(&mesh, &gas, |_| free);
        assert_eq!(p_fluc(&f, &mesh, &gas).unwrap(), 0.0);
        for cp in cp_field(&f, &mesh, &gas, &free).unwrap() {
            assert!(cp.unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn stagnation_cp_is_one_for_bernoulli_pressure() {
        let gas = Gas::AIR;
        let mesh = rect(1, 1);
        let free = Primitive::new(1.0, 0.01, 0.0, 1.0 / 1.4);
        let stag = Primitive::new(1.0, 0.0, 0.0, free.p + 0.5 * free.rho * free.speed_squared());
        let f = Field::from_fn(&mesh, &gas, |_| stag);
        assert_relative_eq!(cp_field(&f, &mesh, &gas, &free).unwrap()[0].unwrap(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn centerline_profile_and_pressures() {
        let gas = Gas::AIR;
        let mesh = StructuredMesh::rectangle(10, 4, 0.0, 10.0, -2.0, 2.0).unwrap();
        let f = Field::from_fn(&mesh, &gas, |c| {
            let p = if c[0] < 4.0 { 1.0 } else { 466.0 + (c[0] - 4.0) * 5.0 };
            Primitive::new(1.0, 0.0, 0.0, p)
        });
        let prof = centerline_pressure(&f, &mesh, &gas).unwrap();
        assert_eq!(prof.len(), 10);
        assert!(prof.iter().all(|q| q.y.abs() < 1e-12));
        assert_relative_eq!(stagnation_point_pressure(&prof).unwrap(), 466.0 + 5.5 * 5.0);
        // Sharp jump between x = 3.5 and 4.5.
        assert_relative_eq!(post_shock_pressure(&prof).unwrap(), 466.0 + 0.5 * 5.0);
        // A smeared shock cell is skipped.
        let mut smeared = prof.clone();
        smeared[4].p = 300.0;
        assert_relative_eq!(post_shock_pressure(&smeared).unwrap(), 466.0 + 1.5 * 5.0);
    }

    fn front_field(mesh: &StructuredMesh, gas: &Gas, front: impl Fn(f64) -> f64) -> Field {
        Field::from_fn(mesh, gas, |c| {
            let rho = if c[0] < front(c[1]) { 8.0 } else { 1.4 };
            Primitive::new(rho, 0.0, 0.0, 1.0)
        })
    }

    #[test]
    fn straight_and_kinked_fronts() {
        let gas = Gas::AIR;
        let mesh = rect(40, 20);
        let opts = KinkOptions {
            rows: (0, 20),
            threshold: 4.7,
        };
        let straight = front_field(&mesh, &gas, |_| 20.0);
        assert!(shock_kink_metric(&straight, &mesh, &opts).unwrap() < 0.5);
        let slanted = front_field(&mesh, &gas, |y| 15.0 + 0.5 * y);
        assert!(shock_kink_metric(&slanted, &mesh, &opts).unwrap() < 0.5);
        let kinked = front_field(&mesh, &gas, |y| if y > 8.0 && y < 12.0 { 22.0 } else { 20.0 });
        assert!(shock_kink_metric(&kinked, &mesh, &opts).unwrap() >= 2.0);
        let jog = front_field(&mesh, &gas, |y| if y < 16.0 { 20.0 } else { 22.0 });
        assert!(shock_kink_metric(&jog, &mesh, &opts).unwrap() >= 2.0);
    }

    #[test]
    fn diagnostics_are_repeatable() {
        let gas = Gas::AIR;
        let mesh = rect(12, 6);
        let f = front_field(&mesh, &gas, |y| 5.0 + 0.3 * y);
        let a = (odd_even_asymmetry(&f, &mesh, 1.4), p_fluc(&f, &mesh, &gas).unwrap());
        let b = (odd_even_asymmetry(&f, &mesh, 1.4), p_fluc(&f, &mesh, &gas).unwrap());
        assert_eq!(a, b);
    }
}
