use std::io::Write;
use std::path::Path;

use gaborkit::{Complex64, Error};
use serde_json::{json, Map, Value};

/// Everything one subcommand reports. Keys serialise in sorted order.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub tag: &'static str,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub tolerances: Map<String, Value>,
    pub checks: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str, tag: &'static str) -> Self {
        Self {
            command,
            tag,
            inputs: Map::new(),
            outputs: Map::new(),
            tolerances: Map::new(),
            checks: Map::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    pub fn output(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.into(), v.into());
        self
    }

    pub fn tolerance(&mut self, key: &str, v: f64) -> &mut Self {
        self.tolerances.insert(key.into(), v.into());
        self
    }

    pub fn check(&mut self, key: &str, ok: bool) -> &mut Self {
        self.checks.insert(key.into(), ok.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|v| v.as_bool() == Some(true))
    }

    pub fn to_json(&self, wall_time: Option<f64>, error: Option<&Error>) -> String {
        let mut root = Map::new();
        root.insert("command".into(), self.command.into());
        root.insert("tag".into(), self.tag.into());
        root.insert("inputs".into(), Value::Object(self.inputs.clone()));
        root.insert("outputs".into(), Value::Object(self.outputs.clone()));
        root.insert("tolerances".into(), Value::Object(self.tolerances.clone()));
        root.insert("checks".into(), Value::Object(self.checks.clone()));
        root.insert("pass".into(), (self.passed() && error.is_none()).into());
        if let Some(e) = error {
            root.insert("error".into(), e.to_string().into());
        }
        if let Some(t) = wall_time {
            root.insert("wall_time_s".into(), t.into());
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("json values serialise");
        text.push('\n');
        text
    }
}

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_list(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
