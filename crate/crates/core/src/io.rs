//! Configuration documents: canonical JSON and the ASCII grid format.
//!
//! JSON: `{"size":<w>,"holes":[[x,y],...]}` with holes in ascending
//! `(x, y)` order. ASCII: a header line `w=<w>` followed by `w + 1` rows from
//! `y = w` down to `y = 0`, each `w + 1` characters of `.` (node) or `#`
//! (hole), every line terminated by `\n`. Writing a configuration and reading
//! it back yields the same configuration, and writing a parsed canonical
//! document reproduces it byte for byte.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{validate, ConfigError, Configuration, Position};

/// Failures while reading a configuration document.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed JSON configuration: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed ASCII configuration: {0}")]
    Ascii(String),
    #[error(transparent)]
    Invalid(#[from] ConfigError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    size: i64,
    holes: Vec<(i32, i32)>,
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ConfigDoc { size: self.size() as i64, holes: self.holes().iter().map(|h| (h.x, h.y)).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = ConfigDoc::deserialize(deserializer)?;
        let holes: Vec<Position> = doc.holes.into_iter().map(Position::from).collect();
        validate(doc.size, &holes).map_err(serde::de::Error::custom)
    }
}

/// Canonical JSON text (no trailing newline).
pub fn to_json(c: &Configuration) -> String {
    serde_json::to_string(c).expect("configuration documents always serialize")
}

/// Parses and validates a JSON configuration document.
pub fn from_json(text: &str) -> Result<Configuration, ParseError> {
    let doc: ConfigDoc = serde_json::from_str(text)?;
    let holes: Vec<Position> = doc.holes.into_iter().map(Position::from).collect();
    Ok(validate(doc.size, &holes)?)
}

/// ASCII grid text, every line newline-terminated.
pub fn to_ascii(c: &Configuration) -> String {
    format!("w={}\n{}", c.size(), c.render())
}

/// Parses and validates an ASCII grid document. A missing final newline is
/// tolerated; any other deviation from the format is rejected.
pub fn from_ascii(text: &str) -> Result<Configuration, ParseError> {
    let bad = |msg: String| ParseError::Ascii(msg);
    let mut lines = text.strip_suffix('\n').unwrap_or(text).split('\n');
    let header = lines.next().ok_or_else(|| bad("empty document".into()))?;
    let w: i64 = header
        .strip_prefix("w=")
        .and_then(|s| s.trim_end_matches('\r').parse().ok())
        .ok_or_else(|| bad(format!("expected header `w=<size>`, found {header:?}")))?;
    if !(1..=1 << 20).contains(&w) {
        return Err(ConfigError::InvalidSize(w).into());
    }
    let rows: Vec<&str> = lines.map(|l| l.trim_end_matches('\r')).collect();
    if rows.len() != (w + 1) as usize {
        return Err(bad(format!("expected {} rows, found {}", w + 1, rows.len())));
    }
    let mut holes = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let y = w as i32 - i as i32;
        if row.chars().count() != (w + 1) as usize {
            return Err(bad(format!("row for y={y} has {} characters, expected {}", row.chars().count(), w + 1)));
        }
        for (x, ch) in row.chars().enumerate() {
            match ch {
                '.' => {}
                '#' => holes.push(Position::new(x as i32, y)),
                other => return Err(bad(format!("unexpected character {other:?} at ({x}, {y})"))),
            }
        }
    }
    Ok(validate(w, &holes)?)
}

/// Reads either format, choosing by the first non-blank character.
pub fn parse_any(text: &str) -> Result<Configuration, ParseError> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_ascii(text)
    }
}
