//! Field snapshots in CSV and legacy VTK.
//!
//! Both formats are ASCII and written with Rust's shortest round-trip float
//! formatting (`{:e}`), so identical fields give identical bytes.
//!
//! CSV: one `#` header line, then a column line
//! `i,j,x_center,y_center,rho,u,v,p,mach,cp` and one row per cell in
//! `j`-major order (`i` fastest). Solid cells and `cp` without a reference
//! state are left empty.
//!
//! VTK: `STRUCTURED_GRID` with `(ni+1) x (nj+1) x 1` points and `CELL_DATA`
//! scalars `rho, u, v, p, mach`, `cp` when a reference state is known, and
//! `fluid` (1 for fluid cells, 0 for masked cells, whose other scalars are 0).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use allmach_core::field::Field;
use allmach_core::mesh::StructuredMesh;
use allmach_core::state::{Gas, Primitive};
use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::output::Header;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnapshotFormat {
    Csv,
    VtkLegacy,
}

impl SnapshotFormat {
    pub fn extension(self) -> &'static str {
        match self {
            SnapshotFormat::Csv => "csv",
            SnapshotFormat::VtkLegacy => "vtk",
        }
    }
}

/// Mesh and primitive fields at one time level.
#[derive(Debug, Clone)]
pub struct Snapshot<'a> {
    pub mesh: &'a StructuredMesh,
    /// Per cell, `None` where the cell is masked out.
    pub cells: Vec<Option<Primitive>>,
    pub gas: Gas,
    /// Reference state for the pressure coefficient.
    pub free_stream: Option<Primitive>,
    pub header: Header,
}

/// Derived scalars of one cell.
struct CellValues {
    rho: f64,
    u: f64,
    v: f64,
    p: f64,
    mach: f64,
    cp: Option<f64>,
}

impl<'a> Snapshot<'a> {
    pub fn new(mesh: &'a StructuredMesh, field: &Field, gas: Gas, free_stream: Option<Primitive>, header: Header) -> Self {
        Self {
            mesh,
            cells: field.primitives(mesh, &gas),
            gas,
            free_stream,
            header,
        }
    }

    fn values(&self, w: &Primitive) -> CellValues {
        let cp = self.free_stream.and_then(|f| {
            let q = 0.5 * f.rho * f.speed_squared();
            (q > 0.0).then(|| (w.p - f.p) / q)
        });
        CellValues {
            rho: w.rho,
            u: w.u,
            v: w.v,
            p: w.p,
            mach: w.mach(&self.gas),
            cp,
        }
    }

    pub fn to_csv(&self) -> String {
        let m = self.mesh;
        let mut s = String::with_capacity(96 * m.cell_count());
        let _ = writeln!(s, "# {}", self.header.line());
        s.push_str("i,j,x_center,y_center,rho,u,v,p,mach,cp\n");
        for j in 0..m.nj {
            for i in 0..m.ni {
                let c = m.center(i, j);
                let _ = write!(s, "{i},{j},{:e},{:e}", c[0], c[1]);
                match &self.cells[j * m.ni + i] {
                    Some(w) => {
                        let v = self.values(w);
                        let _ = write!(s, ",{:e},{:e},{:e},{:e},{:e},", v.rho, v.u, v.v, v.p, v.mach);
                        if let Some(cp) = v.cp {
                            let _ = write!(s, "{cp:e}");
                        }
                    }
                    None => s.push_str(",,,,,,"),
                }
                s.push('\n');
            }
        }
        s
    }

    pub fn to_vtk(&self) -> String {
        let m = self.mesh;
        let n = m.cell_count();
        let mut s = String::with_capacity(40 * (m.nodes().len() + 7 * n));
        s.push_str("# vtk DataFile Version 3.0\n");
        let _ = writeln!(s, "{}", self.header.line());
        s.push_str("ASCII\nDATASET STRUCTURED_GRID\n");
        let _ = writeln!(s, "DIMENSIONS {} {} 1", m.ni + 1, m.nj + 1);
        let _ = writeln!(s, "POINTS {} double", m.nodes().len());
        for p in m.nodes() {
            let _ = writeln!(s, "{:e} {:e} 0", p[0], p[1]);
        }
        let _ = writeln!(s, "CELL_DATA {n}");
        let values: Vec<Option<CellValues>> = self.cells.iter().map(|c| c.as_ref().map(|w| self.values(w))).collect();
        let mut scalar = |name: &str, get: &dyn Fn(&CellValues) -> f64| {
            let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
            for v in &values {
                let _ = writeln!(s, "{:e}", v.as_ref().map_or(0.0, get));
            }
        };
        scalar("rho", &|v| v.rho);
        scalar("u", &|v| v.u);
        scalar("v", &|v| v.v);
        scalar("p", &|v| v.p);
        scalar("mach", &|v| v.mach);
        if self.free_stream.is_some() {
            scalar("cp", &|v| v.cp.unwrap_or(0.0));
        }
        s.push_str("SCALARS fluid int 1\nLOOKUP_TABLE default\n");
        for v in &values {
            s.push_str(if v.is_some() { "1\n" } else { "0\n" });
        }
        s
    }

    pub fn render(&self, format: SnapshotFormat) -> String {
        match format {
            SnapshotFormat::Csv => self.to_csv(),
            SnapshotFormat::VtkLegacy => self.to_vtk(),
        }
    }
}

pub fn write_snapshot(snapshot: &Snapshot<'_>, format: SnapshotFormat, path: &Path) -> Result<()> {
    fs::write(path, snapshot.render(format)).with_context(|| format!("writing snapshot {}", path.display()))
}

/// Cell count declared in a legacy VTK file's `CELL_DATA` line.
pub fn vtk_cell_count(text: &str) -> Option<usize> {
    text.lines()
        .find_map(|l| l.strip_prefix("CELL_DATA "))
        .and_then(|n| n.trim().parse().ok())
}
