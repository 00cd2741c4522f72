//! Built-in case files.
//!
//! The preset definitions shipped in `cases/*.toml` are compiled into the
//! binary, so `--case <name>` works from any directory and every geometric
//! choice can be read (and copied into a `case_file`) as plain text.

use allmach_core::cases::{cylinder_free_stream, CaseDefinition};
use allmach_core::state::Gas;
use allmach_core::Error;
use anyhow::{Context, Result};

macro_rules! presets {
    ($($name:literal),* $(,)?) => {
        /// `(name, file contents)` of every preset.
        pub const PRESETS: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../../cases/", $name, ".toml")))),*
        ];
    };
}

presets!(
    "sod",
    "severe_shock_tube",
    "planar_shock",
    "dmr",
    "dmr_t_a",
    "dmr_t_b",
    "forward_step",
    "blunt_body",
    "supersonic_corner",
    "low_mach_cylinder",
);

/// Text of a preset case file.
pub fn preset_text(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name.trim())
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            let valid: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            Error::UnknownName {
                kind: "case",
                name: name.to_string(),
                valid: valid.join(", "),
            }
            .into()
        })
}

/// Parse a preset case file.
pub fn preset(name: &str) -> Result<CaseDefinition> {
    let text = preset_text(name)?;
    toml::from_str(text).with_context(|| format!("built-in case file '{name}' is invalid"))
}

/// Move the cylinder case to free-stream Mach `mach`, replacing every
/// occurrence of its current free stream (initial state, far field, reference).
pub fn set_cylinder_mach(case: &mut CaseDefinition, mach: f64) -> Result<()> {
    use allmach_core::boundary::BoundaryKind;
    use allmach_core::cases::InitialCondition;

    let gas = Gas::new(case.gamma)?;
    let old = case.reference.free_stream.context("case has no reference free stream")?;
    let new = cylinder_free_stream(mach, &gas);
    if let InitialCondition::Uniform { state } = &mut case.initial {
        if *state == old {
            *state = new;
        }
    }
    for p in &mut case.boundaries {
        if p.kind == BoundaryKind::FarField(old) {
            p.kind = BoundaryKind::FarField(new);
        }
    }
    case.reference.free_stream = Some(new);
    Ok(())
}
