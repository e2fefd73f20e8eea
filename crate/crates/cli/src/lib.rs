//! Driver for the `hallforge` binary: run configuration, commands, suites and
//! the exit-code contract.

pub mod commands;
pub mod suites;

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use hallforge::algebra::{builtin, AlgebraJson, AlgebraTable};
use hallforge::field::Field;
use hallforge::hall::Caps;
use hallforge::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_UNDECIDED: i32 = 4;

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> CliError {
        CliError { code: EXIT_USAGE, message: msg.into() }
    }
    pub fn failed(msg: impl Into<String>) -> CliError {
        CliError { code: EXIT_FAIL, message: msg.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::CapExceeded(_) => EXIT_CAP,
            Error::Undecided(_) => EXIT_UNDECIDED,
            Error::Interpolation(_) | Error::Inconsistent(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::usage(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Where the algebra comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum AlgebraSource {
    Builtin(String),
    Json(PathBuf),
}

impl AlgebraSource {
    /// `builtin:<name>` or a path to an algebra JSON file.
    pub fn parse(s: &str) -> AlgebraSource {
        match s.strip_prefix("builtin:") {
            Some(name) => AlgebraSource::Builtin(name.to_string()),
            None => AlgebraSource::Json(PathBuf::from(s)),
        }
    }

    pub fn builtin_name(&self) -> CliResult<&str> {
        match self {
            AlgebraSource::Builtin(n) => Ok(n),
            AlgebraSource::Json(p) => {
                Err(CliError::usage(format!("{} is not a builtin algebra; this command needs builtin:<name>", p.display())))
            }
        }
    }

    /// Load over `GF(q)`; JSON algebras carry their own field, which must match
    /// `q` when one is requested.
    pub fn load(&self, q: Option<u64>) -> CliResult<Arc<AlgebraTable>> {
        match self {
            AlgebraSource::Builtin(name) => Ok(builtin(name, &Field::of_order(q.unwrap_or(2))?)?),
            AlgebraSource::Json(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
                let json: AlgebraJson = serde_json::from_str(&text)
                    .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
                let alg = AlgebraTable::from_json(&json)?;
                let own = alg.field().q() as u64;
                if let Some(q) = q.filter(|&q| q != own) {
                    return Err(CliError::usage(format!("{} is defined over GF({own}), not GF({q})", path.display())));
                }
                Ok(Arc::new(alg))
            }
        }
    }
}

impl fmt::Display for AlgebraSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraSource::Builtin(n) => write!(f, "builtin:{n}"),
            AlgebraSource::Json(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Everything that determines a run's output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algebra: AlgebraSource,
    /// Fields for per-field checks.
    pub fields: Vec<u64>,
    /// Interpolation points and hold-out fields; `None` uses the command's
    /// default schedule.
    pub points: Option<Vec<u64>>,
    pub holdout: Option<Vec<u64>>,
    pub cap_submodules: u64,
    pub cap_cocycles: u64,
    pub seed: u64,
    pub format: Format,
    pub suite: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let caps = Caps::default();
        RunConfig {
            algebra: AlgebraSource::Builtin("kronecker-dup".into()),
            fields: vec![2, 3],
            points: None,
            holdout: None,
            cap_submodules: caps.submodules,
            cap_cocycles: caps.cocycles,
            seed: 0,
            format: Format::Json,
            suite: None,
        }
    }
}

impl RunConfig {
    pub fn caps(&self) -> Caps {
        Caps { submodules: self.cap_submodules, cocycles: self.cap_cocycles }
    }
}

/// Parse `p^r` or a plain prime power.
pub fn parse_field(s: &str) -> CliResult<u64> {
    let s = s.trim();
    let q = match s.split_once('^') {
        Some((p, r)) => {
            let p: u64 = p.trim().parse().map_err(|_| CliError::usage(format!("bad field {s:?}")))?;
            let r: u32 = r.trim().parse().map_err(|_| CliError::usage(format!("bad field {s:?}")))?;
            p.checked_pow(r).ok_or_else(|| CliError::usage(format!("field {s} too large")))?
        }
        None => s.parse().map_err(|_| CliError::usage(format!("bad field {s:?}")))?,
    };
    if hallforge::field::prime_power(q).is_none() {
        return Err(CliError::usage(format!("{q} is not a prime power")));
    }
    Ok(q)
}

pub fn parse_fields(s: &str) -> CliResult<Vec<u64>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_field).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_parse() {
        assert_eq!(parse_fields("2,3^2, 5").unwrap(), vec![2, 9, 5]);
        assert_eq!(parse_field("2^3").unwrap(), 8);
        assert_eq!(parse_field("6").unwrap_err().code, EXIT_USAGE);
        assert!(parse_field("x").is_err());
    }

    #[test]
    fn config_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.algebra = AlgebraSource::Json("alg.json".into());
        cfg.suite = Some("assoc".into());
        cfg.format = Format::Csv;
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&s).unwrap(), cfg);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::CapExceeded("x".into())).code, EXIT_CAP);
        assert_eq!(CliError::from(Error::Undecided("x".into())).code, EXIT_UNDECIDED);
        assert_eq!(CliError::from(Error::Parse("x".into())).code, EXIT_USAGE);
    }
}
