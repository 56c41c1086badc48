//! Run configuration documents.
//!
//! ```json
//! {"positions": ["0", "1", "3", "7"], "f": 2, "algorithm": "ssi"}
//! ```
//!
//! Optional fields: `mode` (`"exactly"` or `"at-most"`) and `epsilon`
//! (a scalar, used by `scaled_doubling`). Unknown fields are rejected.

use std::io::Read;
use std::path::Path;

use byzline_core::evaluation::{EvalRequest, Mode};
use byzline_core::exactnum::{parse_scalar, Scalar};
use byzline_core::{Configuration, StrategyKind};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    positions: Vec<String>,
    f: usize,
    algorithm: String,
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    epsilon: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algorithm: StrategyKind,
    pub request: EvalRequest,
    pub epsilon: Option<Scalar>,
}

/// FRR's theorem is stated for exactly `f` faults; every other strategy
/// defaults to at most `f`.
pub fn default_mode(kind: StrategyKind) -> Mode {
    match kind {
        StrategyKind::Frr => Mode::Exactly,
        _ => Mode::AtMost,
    }
}

pub fn parse_mode(text: &str) -> CliResult<Mode> {
    text.parse().map_err(|_| CliError::Config(format!("unknown mode `{text}`; expected exactly or at-most")))
}

pub fn parse_epsilon(text: &str) -> CliResult<Scalar> {
    parse_scalar(text).map_err(|e| CliError::Config(format!("epsilon: {e}")))
}

/// Reads a config from `path`, or from stdin when `path` is `-`.
pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?
    };
    parse_config(&text)
}

pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::Config(format!("at `{}`: {}", e.path(), e.inner())))?;

    let positions = raw
        .positions
        .iter()
        .enumerate()
        .map(|(i, p)| parse_scalar(p).map_err(|e| CliError::Config(format!("at `positions[{i}]`: {e}"))))
        .collect::<CliResult<Vec<_>>>()?;
    let algorithm: StrategyKind = raw
        .algorithm
        .parse()
        .map_err(|_| CliError::Config(format!("at `algorithm`: unknown algorithm `{}`", raw.algorithm)))?;
    let mode = match &raw.mode {
        Some(m) => parse_mode(m)?,
        None => default_mode(algorithm),
    };
    let epsilon = raw.epsilon.as_deref().map(parse_epsilon).transpose()?;
    let config = Configuration::new(positions).map_err(|e| CliError::Config(format!("at `positions`: {e}")))?;
    let request = EvalRequest::new(config, raw.f, mode).map_err(|e| CliError::Config(format!("at `f`: {e}")))?;
    Ok(RunConfig { algorithm, request, epsilon })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_minimal_document() {
        let cfg = parse_config(r#"{"positions":["0","1","3","7"],"f":2,"algorithm":"ssi"}"#).unwrap();
        assert_eq!(cfg.algorithm, StrategyKind::Ssi);
        assert_eq!(cfg.request.mode, Mode::AtMost);
        assert_eq!(cfg.request.config.len(), 4);
    }

    #[test]
    fn frr_defaults_to_exactly() {
        let cfg = parse_config(r#"{"positions":["0","1/4","3/4","1"],"f":2,"algorithm":"frr"}"#).unwrap();
        assert_eq!(cfg.request.mode, Mode::Exactly);
    }

    #[test]
    fn error_paths() {
        let msg = |t: &str| parse_config(t).unwrap_err().to_string();
        assert!(msg(r#"{"positions":["0","1"],"f":0,"algorithm":"ssi","extra":1}"#).contains("extra"));
        assert!(msg(r#"{"positions":["0","x"],"f":0,"algorithm":"ssi"}"#).contains("positions[1]"));
        assert!(msg(r#"{"positions":["0","1"],"f":3,"algorithm":"ssi"}"#).contains("`f`"));
        assert!(msg(r#"{"positions":[0],"f":0,"algorithm":"ssi"}"#).contains("positions[0]"));
        assert!(msg(r#"{"positions":["0","1"],"f":0,"algorithm":"zigzag"}"#).contains("algorithm"));
    }
}
