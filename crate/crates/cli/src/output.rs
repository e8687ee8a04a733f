use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::{UsageError, VERSION};

/// Seed and parameters of a run, echoed so it can be reproduced.
pub struct Manifest {
    command: &'static str,
    seed: u64,
    params: Vec<(&'static str, Value)>,
}

impl Manifest {
    pub fn new(command: &'static str, seed: u64) -> Self {
        Self {
            command,
            seed,
            params: Vec::new(),
        }
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.params.push((key, value.into()));
        self
    }

    pub fn line(&self) -> String {
        let mut out = format!("# qshare {VERSION} {} seed={}", self.command, self.seed);
        for (k, v) in &self.params {
            out.push_str(&format!(" {k}={v}"));
        }
        out
    }

    fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("version".into(), json!(VERSION));
        map.insert("command".into(), json!(self.command));
        map.insert("seed".into(), json!(self.seed));
        for (k, v) in &self.params {
            map.insert((*k).into(), v.clone());
        }
        Value::Object(map)
    }

    /// Structured document with the manifest under `manifest`.
    pub fn wrap(&self, body: Value) -> String {
        let mut doc = match body {
            Value::Object(map) => map,
            other => {
                let mut map = Map::new();
                map.insert("data".into(), other);
                map
            }
        };
        doc.insert("manifest".into(), self.to_value());
        serde_json::to_string_pretty(&Value::Object(doc)).expect("json serializes") + "\n"
    }
}

/// Destination for machine-readable output: a file written atomically, or stdout.
pub struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    pub fn new(path: Option<PathBuf>) -> Self {
        Self { path }
    }

    /// Body to the file (manifest line on stdout) or to stdout (manifest
    /// line on stderr).
    pub fn emit(&self, body: &str, manifest: Option<&Manifest>) -> Result<(), UsageError> {
        match &self.path {
            Some(path) => {
                self.write_file(body)?;
                if let Some(m) = manifest {
                    println!("{}", m.line());
                }
                println!("wrote {}", path.display());
            }
            None => {
                if let Some(m) = manifest {
                    eprintln!("{}", m.line());
                }
                print!("{body}");
            }
        }
        Ok(())
    }

    pub fn write_file(&self, body: &str) -> Result<(), UsageError> {
        let path = self.path.as_deref().expect("write_file needs an output path");
        write_atomic(path, body.as_bytes())
            .map_err(|e| UsageError(format!("output {}: {e}", path.display())))
    }
}

/// Write to a temporary file in the target directory, then rename over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Aligned columns: first column left-aligned, the rest right-aligned.
pub fn table<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let rows: Vec<Vec<String>> = rows.into_iter().collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let render = |cells: Vec<&str>| {
        let mut line = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i == 0 {
                line.push_str(&format!("{cell:<w$}"));
            } else {
                line.push_str(&format!("  {cell:>w$}"));
            }
        }
        line.truncate(line.trim_end().len());
        line.push('\n');
        line
    };
    let mut out = render(header.to_vec());
    for row in &rows {
        out.push_str(&render(row.iter().map(String::as_str).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_alignment() {
        let t = table(&["a", "bb"], [vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    bb\nxyz   1\n");
    }

    #[test]
    fn atomic_write_replaces_target() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"first\n").unwrap();
        write_atomic(&path, b"second\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn manifest_line_and_wrap() {
        let m = Manifest::new("fig4", 3).with("grid", 61);
        assert_eq!(m.line(), format!("# qshare {VERSION} fig4 seed=3 grid=61"));
        let v: Value = serde_json::from_str(&m.wrap(json!({"rows": []}))).unwrap();
        assert_eq!(v["manifest"]["seed"], 3);
        assert_eq!(v["manifest"]["grid"], 61);
    }
}
