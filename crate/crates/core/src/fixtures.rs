//! Built-in triangulations.
//!
//! The JSON files under `fixtures/` are compiled into the library. Setting
//! the environment variable `TETRINDEX_FIXTURES` to a directory makes
//! `<dir>/<id>.json` take precedence, which also allows user-supplied
//! fixtures under new names.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::triangulation::{parse_gluing, GluingData};

/// Environment variable naming an override directory.
pub const FIXTURE_DIR_VAR: &str = "TETRINDEX_FIXTURES";

const BUILTIN: &[(&str, &str)] = &[
    ("standard_cusp", include_str!("../fixtures/standard_cusp.json")),
    ("m004", include_str!("../fixtures/m004.json")),
    ("torus_link", include_str!("../fixtures/torus_link.json")),
    ("cPcbbbdei", include_str!("../fixtures/cPcbbbdei.json")),
    ("lst112", include_str!("../fixtures/lst112.json")),
    ("lst011", include_str!("../fixtures/lst011.json")),
];

/// Names of the built-in fixtures.
pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|(n, _)| *n).collect()
}

/// Raw JSON text of a built-in fixture.
pub fn builtin_source(id: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == id).map(|(_, s)| *s)
}

/// Loads a fixture, honouring the override directory.
pub fn load(id: &str) -> Result<GluingData> {
    if let Ok(dir) = std::env::var(FIXTURE_DIR_VAR) {
        let path = PathBuf::from(dir).join(format!("{id}.json"));
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            return parse_gluing(&text);
        }
    }
    let src = builtin_source(id).ok_or_else(|| Error::UnknownFixture(id.to_string()))?;
    parse_gluing(src)
}
