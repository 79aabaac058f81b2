//! Bundled algebras and normal forms, addressable by name on the command
//! line. Anything else is treated as a path.

use anyhow::{Context, Result};
use serde_json::Value;

pub const ALGEBRAS: [(&str, &str); 3] = [
    ("nil", include_str!("../../../data/algebras/nil.json")),
    ("solv", include_str!("../../../data/algebras/solv.json")),
    ("abelian", include_str!("../../../data/algebras/abelian.json")),
];

pub const FORMS: [(&str, &str); 16] = [
    ("standard", include_str!("../../../data/forms/omega-standard.json")),
    ("gl/O-", include_str!("../../../data/forms/gl/O-.json")),
    ("gl/O+", include_str!("../../../data/forms/gl/O+.json")),
    ("gl/O0", include_str!("../../../data/forms/gl/O0.json")),
    ("gl/O1", include_str!("../../../data/forms/gl/O1.json")),
    ("gl/O3", include_str!("../../../data/forms/gl/O3.json")),
    ("gl/O6", include_str!("../../../data/forms/gl/O6.json")),
    ("sp/O-+", include_str!("../../../data/forms/sp/O-+.json")),
    ("sp/O--", include_str!("../../../data/forms/sp/O--.json")),
    ("sp/O+", include_str!("../../../data/forms/sp/O+.json")),
    ("sp/O0+", include_str!("../../../data/forms/sp/O0+.json")),
    ("sp/O0-", include_str!("../../../data/forms/sp/O0-.json")),
    ("sp/O1+", include_str!("../../../data/forms/sp/O1+.json")),
    ("sp/O1-", include_str!("../../../data/forms/sp/O1-.json")),
    ("sp/O3", include_str!("../../../data/forms/sp/O3.json")),
    ("sp/O6", include_str!("../../../data/forms/sp/O6.json")),
];

fn lookup(table: &[(&str, &str)], name: &str) -> Option<Value> {
    table
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| serde_json::from_str(text).expect("bundled data is valid JSON"))
}

pub fn form_json(arg: &str) -> Result<Value> {
    match lookup(&FORMS, arg) {
        Some(v) => Ok(v),
        None => {
            crate::read_file(arg).with_context(|| format!("\"{arg}\" is neither a bundled form nor a readable file"))
        }
    }
}

/// The bundled algebra name, if `arg` is one, and the JSON.
pub fn algebra_json(arg: &str) -> Result<(Option<&'static str>, Value)> {
    if let Some((name, _)) = ALGEBRAS.iter().find(|(n, _)| *n == arg) {
        return Ok((Some(name), lookup(&ALGEBRAS, arg).expect("listed")));
    }
    let v =
        crate::read_file(arg).with_context(|| format!("\"{arg}\" is neither a bundled algebra nor a readable file"))?;
    Ok((None, v))
}
