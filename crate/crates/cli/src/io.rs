use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::args::Format;

#[derive(Debug)]
pub enum CliError {
    Library(calibra::Error),
    Input(String),
}

impl From<calibra::Error> for CliError {
    fn from(e: calibra::Error) -> Self {
        CliError::Library(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    /// 3 for tripwires, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_tripwire() => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Library(e) => {
                let debug = format!("{e:?}");
                debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
            }
            CliError::Input(_) => "Input".to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Reads input files and accumulates their digest.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn read_json<T: DeserializeOwned>(&mut self, path: &Path) -> CliResult<T> {
        let bytes = fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(&bytes);
        serde_json::from_slice(&bytes).map_err(|e| CliError::Input(format!("malformed JSON in {}: {e}", path.display())))
    }

    pub fn digest(self) -> String {
        self.hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A command result: JSON document plus optional per-row CSV.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
}

impl Report {
    pub fn new<T: Serialize>(value: &T) -> CliResult<Self> {
        Ok(Report { json: to_value(value)?, csv: None })
    }

    pub fn with_rows<T: Serialize, R: Serialize>(value: &T, rows: &[R]) -> CliResult<Self> {
        Ok(Report { json: to_value(value)?, csv: Some(csv_rows(rows)?) })
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(&self.json).map_err(|e| CliError::Input(e.to_string()))?;
                text.push('\n');
                Ok(text)
            }
            Format::Csv => match &self.csv {
                Some(text) => Ok(text.clone()),
                None => flat_csv(&self.json),
            },
        }
    }
}

pub fn to_value<T: Serialize>(value: &T) -> CliResult<Value> {
    serde_json::to_value(value).map_err(|e| CliError::Input(format!("cannot serialize result: {e}")))
}

fn csv_rows<R: Serialize>(rows: &[R]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Input(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(e.to_string()))
}

/// One row of the top-level scalar fields; arrays of scalars are joined
/// with `;`, nested objects are skipped.
fn flat_csv(value: &Value) -> CliResult<String> {
    let Value::Object(map) = value else {
        return Err(CliError::Input("CSV output needs an object result".into()));
    };
    let cell = |v: &Value| -> Option<String> {
        match v {
            Value::Null => Some(String::new()),
            Value::Bool(b) => Some(b.to_string()),
            Value::Number(n) => Some(n.to_string()),
            Value::String(s) => Some(s.clone()),
            Value::Array(items) => items
                .iter()
                .map(|x| match x {
                    Value::Number(n) => Some(n.to_string()),
                    Value::Bool(b) => Some(b.to_string()),
                    Value::String(s) => Some(s.clone()),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()
                .map(|xs| xs.join(";")),
            Value::Object(_) => None,
        }
    };
    let fields: Vec<(&String, String)> = map.iter().filter_map(|(k, v)| cell(v).map(|c| (k, c))).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Input(e.to_string());
    w.write_record(fields.iter().map(|(k, _)| k.as_str())).map_err(to_err)?;
    w.write_record(fields.iter().map(|(_, v)| v.as_str())).map_err(to_err)?;
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(e.to_string()))
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub parameters: Value,
    pub input_digest: String,
    pub timestamp: u64,
    pub outputs: Vec<String>,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Writes the rendered result and its manifest.
pub fn persist(out: &Path, text: &str, command: &str, seed: u64, parameters: Value, input_digest: String) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Input(format!("cannot write {}: {e}", out.display()));
    fs::write(out, text).map_err(io)?;
    let manifest = RunManifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        parameters,
        input_digest,
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        outputs: vec![out.display().to_string()],
    };
    let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Input(e.to_string()))?;
    text.push('\n');
    fs::write(manifest_path(out), text).map_err(io)
}

/// Parameters object without the output-only flags.
pub fn parameters(cli: &Value) -> Value {
    let mut map = Map::new();
    if let Value::Object(top) = cli {
        for (k, v) in top {
            if k == "common" {
                if let Value::Object(common) = v {
                    for (ck, cv) in common {
                        if ck != "out" {
                            map.insert(ck.clone(), cv.clone());
                        }
                    }
                }
            } else {
                map.insert(k.clone(), v.clone());
            }
        }
    }
    Value::Object(map)
}
