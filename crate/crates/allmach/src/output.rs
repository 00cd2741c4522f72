//! File headers, output locations and small CSV tables.

use std::fmt::{Display, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Environment variable naming the directory relative output paths are placed under.
pub const OUTPUT_ROOT_VAR: &str = "ALLMACH_OUTPUT_ROOT";

/// Identifier of this build: crate version and commit.
pub const BUILD_ID: &str = env!("ALLMACH_BUILD_ID");

/// Self-description written as the first line of every output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub case: String,
    pub scheme: String,
    pub iteration: usize,
    pub time: f64,
    pub seed: Option<u64>,
    /// Extra `key=value` pairs appended verbatim.
    pub extra: Vec<(String, String)>,
}

impl Header {
    pub fn new(case: impl Into<String>, scheme: impl Into<String>, iteration: usize, time: f64) -> Self {
        Self {
            case: case.into(),
            scheme: scheme.into(),
            iteration,
            time,
            seed: None,
            extra: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with(mut self, key: &str, value: impl Display) -> Self {
        self.extra.push((key.to_string(), value.to_string()));
        self
    }

    pub fn line(&self) -> String {
        let mut s = format!(
            "allmach build={BUILD_ID} case={} scheme={} iteration={} time={:e} units=nondimensional",
            self.case, self.scheme, self.iteration, self.time
        );
        if let Some(seed) = self.seed {
            let _ = write!(s, " seed={seed}");
        }
        for (k, v) in &self.extra {
            let _ = write!(s, " {k}={v}");
        }
        s
    }
}

/// Resolve a relative output directory against `root` (or leave it as is) and create it.
pub fn prepare_dir(root: Option<&Path>, dir: &Path) -> Result<PathBuf> {
    let dir = match root {
        Some(r) if dir.is_relative() => r.join(dir),
        _ => dir.to_path_buf(),
    };
    fs::create_dir_all(&dir).with_context(|| format!("creating output directory {}", dir.display()))?;
    Ok(dir)
}

/// CSV text built row by row behind a `#` header line.
#[derive(Debug, Clone)]
pub struct CsvTable {
    text: String,
    columns: usize,
    rows: usize,
}

impl CsvTable {
    pub fn new(header: &Header, columns: &[&str]) -> Self {
        let mut text = format!("# {}\n", header.line());
        text.push_str(&columns.join(","));
        text.push('\n');
        Self {
            text,
            columns: columns.len(),
            rows: 0,
        }
    }

    /// Append a row; floats should already be formatted (see [`num`]).
    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        debug_assert_eq!(cells.len(), self.columns);
        for (k, c) in cells.iter().enumerate() {
            if k > 0 {
                self.text.push(',');
            }
            self.text.push_str(c.as_ref());
        }
        self.text.push('\n');
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, &self.text).with_context(|| format!("writing {}", path.display()))
    }
}

/// Shortest round-trip scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_names_case_scheme_and_build() {
        let h = Header::new("sod", "hlle", 3, 0.25).with_seed(7).with("mach", 0.1);
        let l = h.line();
        assert!(l.starts_with("allmach build="));
        assert!(l.contains(" case=sod scheme=hlle iteration=3 time=2.5e-1 "));
        assert!(l.ends_with(" seed=7 mach=0.1"));
    }

    #[test]
    fn relative_dirs_go_under_the_root() {
        let tmp = tempfile::tempdir().unwrap();
        let d = prepare_dir(Some(tmp.path()), Path::new("a/b")).unwrap();
        assert_eq!(d, tmp.path().join("a/b"));
        assert!(d.is_dir());
        let abs = tmp.path().join("c");
        assert_eq!(prepare_dir(Some(Path::new("/nonexistent")), &abs).unwrap(), abs);
    }
}
