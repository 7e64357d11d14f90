//! Built-in presentations.

use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::presentation::{parse_document, Algebra, Presentation};

pub const PRESET_NAMES: &[&str] = &["bergsol-ex5", "monomial-xyx", "monomial-x<N>", "sym2", "ext2"];

/// Input text of a preset. `monomial-x<N>` (for example `monomial-x3`)
/// is the one-generator algebra `k<x>/(x^N)`.
pub fn preset_text(name: &str) -> Result<String> {
    let text = match name {
        "bergsol-ex5" => "gens x y\nN 2\nrel y*x\nrel y*y - x*y\n".to_string(),
        "monomial-xyx" => "gens x y\nN 3\nrel x*y*x\n".to_string(),
        "sym2" => "gens x y\nN 2\nrel x*y - y*x\n".to_string(),
        "ext2" => "gens x y\nN 2\nrel x*x\nrel x*y + y*x\nrel y*y\n".to_string(),
        other => {
            let k = other
                .strip_prefix("monomial-x")
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&k| k >= 2)
                .ok_or_else(|| Error::UnknownPreset(other.to_string()))?;
            format!("gens x\nN {k}\nrel x^{k}\n")
        }
    };
    Ok(format!("field Q\n{text}"))
}

pub fn preset_presentation<F: Field>(name: &str, field: &F) -> Result<Presentation<F>> {
    let doc = parse_document(&preset_text(name)?)?;
    Presentation::from_document(field, &doc)
}

pub fn preset_algebra<F: Field>(name: &str, field: &F) -> Result<Algebra<F>> {
    Ok(Algebra::new(preset_presentation(name, field)?))
}
