//! `key = value` configuration files, merged under command-line flags.
//!
//! Every key is parsed into its final type when the file is loaded, so a
//! corrupted file is rejected before any computation starts.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bifurcation::Method;

use super::{CliError, Format, GridSpec};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub n: Option<u32>,
    pub gamma: Option<f64>,
    pub l: Option<f64>,
    pub grid_n: Option<usize>,
    pub l_grid: Option<GridSpec>,
    pub xi: Option<Vec<f64>>,
    pub xi_grid: Option<GridSpec>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub max_iter: Option<usize>,
    pub refine: Option<f64>,
    pub method: Option<Method>,
    pub quick: Option<bool>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

fn parse<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Usage(format!("config line {line}: bad value {value:?} for {key}: {e}")))
}

fn set<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<(), CliError> {
    if slot.is_some() {
        return Err(CliError::Usage(format!("config line {line}: duplicate key {key}")));
    }
    *slot = Some(value);
    Ok(())
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self, CliError> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {ln}: expected `key = value`, got {raw:?}"
                )));
            };
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "n" => set(&mut c.n, parse(&key, value, ln)?, &key, ln)?,
                "gamma" => set(&mut c.gamma, parse(&key, value, ln)?, &key, ln)?,
                "L" => set(&mut c.l, parse(&key, value, ln)?, &key, ln)?,
                "N" => set(&mut c.grid_n, parse(&key, value, ln)?, &key, ln)?,
                "L-grid" => set(&mut c.l_grid, parse(&key, value, ln)?, &key, ln)?,
                "xi" => {
                    let xs = value
                        .split(',')
                        .map(|v| parse::<f64>(&key, v.trim(), ln))
                        .collect::<Result<Vec<_>, _>>()?;
                    set(&mut c.xi, xs, &key, ln)?
                }
                "xi-grid" => set(&mut c.xi_grid, parse(&key, value, ln)?, &key, ln)?,
                "tol" => set(&mut c.tol, parse(&key, value, ln)?, &key, ln)?,
                "seed" => set(&mut c.seed, parse(&key, value, ln)?, &key, ln)?,
                "max-iter" => set(&mut c.max_iter, parse(&key, value, ln)?, &key, ln)?,
                "refine" => set(&mut c.refine, parse(&key, value, ln)?, &key, ln)?,
                "method" => set(&mut c.method, parse(&key, value, ln)?, &key, ln)?,
                "quick" => set(&mut c.quick, parse(&key, value, ln)?, &key, ln)?,
                "format" => set(&mut c.format, parse(&key, value, ln)?, &key, ln)?,
                "out" => set(&mut c.out, PathBuf::from(value), &key, ln)?,
                "summary" => set(&mut c.summary, PathBuf::from(value), &key, ln)?,
                _ => return Err(CliError::Usage(format!("config line {ln}: unknown key {key:?}"))),
            }
        }
        Ok(c)
    }
}
