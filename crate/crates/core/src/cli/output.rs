//! File formats: CSV with `# key=value` header lines, or pretty JSON.
//!
//! CSV numbers carry 17 significant digits (`{:.16e}`); JSON numbers use the
//! shortest representation that round-trips. Either way a profile re-loads
//! to bitwise-identical values. The only line that varies between identical
//! runs is `generated_unix`.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::cylinder::PeriodicProfile;

use super::CliError;

pub use crate::verify::SCHEMA_VERSION;

pub fn generated_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}").to_lowercase()
    }
}

/// Header block shared by every CSV file.
pub fn csv_header(kind: &str, fields: &[(&str, String)]) -> String {
    let mut s = format!(
        "# schema_version={SCHEMA_VERSION}\n# generated_unix={}\n# kind={kind}\n",
        generated_unix()
    );
    for (k, v) in fields {
        s += &format!("# {k}={v}\n");
    }
    s
}

/// Envelope around every JSON document.
#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub generated_unix: u64,
    pub kind: String,
    #[serde(flatten)]
    pub body: T,
}

pub fn to_json<T: Serialize>(kind: &str, body: T) -> Result<String, CliError> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        generated_unix: generated_unix(),
        kind: kind.to_string(),
        body,
    };
    let mut s =
        serde_json::to_string_pretty(&env).map_err(|e| CliError::Numerical(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Write to `path` through a temporary sibling and a rename, or to stdout.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e));
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, contents).map_err(|e| CliError::io(path, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileBody {
    pub n: u32,
    pub gamma: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "N")]
    pub grid_n: usize,
    pub t: Vec<f64>,
    pub v: Vec<f64>,
}

impl ProfileBody {
    pub fn new(n: u32, gamma: f64, p: &PeriodicProfile) -> Self {
        Self {
            n,
            gamma,
            l: p.l,
            grid_n: p.n(),
            t: (0..p.n()).map(|j| p.grid_point(j)).collect(),
            v: p.values.clone(),
        }
    }
}

pub fn profile_csv(n: u32, gamma: f64, p: &PeriodicProfile, extra: &[(&str, String)]) -> String {
    let mut fields = vec![
        ("n", n.to_string()),
        ("gamma", num(gamma)),
        ("L", num(p.l)),
        ("N", p.n().to_string()),
    ];
    fields.extend(extra.iter().cloned());
    let mut s = csv_header("profile", &fields);
    s += "t,v\n";
    for (j, v) in p.values.iter().enumerate() {
        s += &format!("{},{}\n", num(p.grid_point(j)), num(*v));
    }
    s
}

/// Load a profile written by `solve`, in either format.
pub fn read_profile(path: &Path) -> Result<PeriodicProfile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |what: String| CliError::Usage(format!("{}: {what}", path.display()));
    if text.trim_start().starts_with('{') {
        let body: ProfileBody = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        return Ok(PeriodicProfile::new(body.l, body.v)?);
    }
    let mut l = None;
    let mut values = Vec::new();
    let mut seen_columns = false;
    for line in text.lines() {
        if let Some(h) = line.strip_prefix("# ") {
            if let Some(v) = h.strip_prefix("L=") {
                l = Some(v.parse::<f64>().map_err(|e| bad(format!("bad L: {e}")))?);
            }
        } else if line == "t,v" {
            seen_columns = true;
        } else if seen_columns && !line.is_empty() {
            let (_, v) = line.split_once(',').ok_or_else(|| bad(format!("bad row {line:?}")))?;
            values.push(v.parse::<f64>().map_err(|e| bad(format!("bad value {v:?}: {e}")))?);
        }
    }
    let l = l.ok_or_else(|| bad("missing `# L=` header".into()))?;
    Ok(PeriodicProfile::new(l, values)?)
}
