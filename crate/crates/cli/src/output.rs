//! Output plumbing: the JSON envelope and atomic file writes.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::{CliError, RunConfig, SeedSource, SCHEMA};

/// Common metadata echoed into every JSON document.
#[derive(Serialize)]
pub struct Meta {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_bits: Option<u32>,
    pub seed: u64,
    pub seed_source: SeedSource,
}

/// Wraps a payload in the versioned envelope, flattening its fields next to
/// the schema key.
pub fn envelope(meta: Meta, payload: Value) -> Value {
    let mut doc = json!({
        "schema": SCHEMA,
        "meta": meta,
    });
    if let (Value::Object(doc), Value::Object(fields)) = (&mut doc, payload) {
        for (k, v) in fields {
            doc.insert(k, v);
        }
    }
    doc
}

/// Serialises to pretty JSON with a trailing newline; field order follows
/// struct declaration order, so identical inputs give identical bytes.
pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

/// Writes to `--out` atomically (temp file in the same directory, then
/// rename) or to stdout.
pub fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| CliError::usage(format!("cannot create temp file in {dir:?}: {e}")))?;
            tmp.write_all(content.as_bytes())
                .map_err(|e| CliError::usage(format!("write failed: {e}")))?;
            tmp.persist(path)
                .map_err(|e| CliError::usage(format!("cannot write {path:?}: {e}")))?;
            Ok(())
        }
    }
}

/// The format actually in effect, defaulting per command.
pub fn effective_format(run: &RunConfig, default: &str) -> String {
    run.format.clone().unwrap_or_else(|| default.to_string())
}

/// A simple CSV builder; fields never need quoting in this crate's outputs.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { buf: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Formats a float the way serde_json does (shortest round trip), keeping
/// CSV and JSON output consistent.
pub fn fmt_f64(v: f64) -> String {
    serde_json::to_string(&v).unwrap_or_else(|_| v.to_string())
}
