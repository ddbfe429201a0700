use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use qna_core::Encoding;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
    Disagreement(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Disagreement(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Disagreement(m) => write!(f, "backend disagreement: {m}"),
        }
    }
}

impl From<qna_core::Error> for CliError {
    fn from(e: qna_core::Error) -> Self {
        match e {
            qna_core::Error::Numeric(_) | qna_core::Error::Invariant(_) => {
                CliError::Numeric(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn read(path: &Path) -> CliResult<(String, Self)> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let digest = hex::encode(Sha256::digest(&bytes));
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
        Ok((
            text,
            Self {
                path: path.display().to_string(),
                sha256: digest,
            },
        ))
    }
}

#[derive(Debug, Serialize)]
pub struct EncodingInfo {
    pub range: [f64; 2],
    pub scale: u32,
    pub bits: u32,
}

impl From<&Encoding> for EncodingInfo {
    fn from(e: &Encoding) -> Self {
        let (lo, hi) = e.range();
        Self {
            range: [lo, hi],
            scale: e.scale(),
            bits: e.bit_width(),
        }
    }
}

/// Wall time is kept in its own trailing field; everything before it is a
/// pure function of inputs and seed.
#[derive(Debug, Serialize)]
pub struct Timing {
    pub wall_time_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub command: &'static str,
    pub inputs: BTreeMap<String, InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub encoding: Option<EncodingInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub result: T,
    pub timing: Timing,
}

impl<T: Serialize> RunReport<T> {
    pub fn print(&self) {
        let text = serde_json::to_string_pretty(self).expect("report serializes");
        // a closed pipe downstream is not our failure
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
}

pub fn elapsed_ms(start: Instant) -> Timing {
    Timing {
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}
