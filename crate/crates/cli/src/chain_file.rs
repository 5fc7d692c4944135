//! Chain-spec JSON files.
//!
//! ```json
//! { "states": ["a", "b"], "matrix": [["1/2", "1/2"], ["1", "0"]], "initial": ["1", "0"] }
//! ```
//!
//! Entries are rational strings (`"a/b"` or `"a"`); bare JSON integers are
//! accepted, floats are not.

use std::path::Path;

use sbchain::{Chain, ChainError, Rational, StateSpace};
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChainFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid chain spec JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Entry { field: String, message: String },
    #[error("invalid chain: {0}")]
    Chain(#[from] ChainError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpecFile {
    pub states: Vec<String>,
    pub matrix: Vec<Vec<Value>>,
    #[serde(default)]
    pub initial: Option<Vec<Value>>,
}

fn parse_entry(value: &Value, field: impl Fn() -> String) -> Result<Rational, ChainFileError> {
    let fail = |message: String| ChainFileError::Entry {
        field: field(),
        message,
    };
    match value {
        Value::String(s) => s.parse().map_err(|e| fail(format!("{e}"))),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i)),
            None => Err(fail(format!(
                "`{n}` is not exact; write rationals as strings like \"1/3\""
            ))),
        },
        other => Err(fail(format!("expected a rational string, found {other}"))),
    }
}

impl ChainSpecFile {
    pub fn from_json(text: &str) -> Result<Self, ChainFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn into_chain(self) -> Result<Chain, ChainFileError> {
        let matrix = self
            .matrix
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, v)| parse_entry(v, || format!("matrix row {r} entry {c}")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let initial = self
            .initial
            .as_ref()
            .map(|w| {
                w.iter()
                    .enumerate()
                    .map(|(i, v)| parse_entry(v, || format!("initial entry {i}")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let states = StateSpace::new(self.states)?;
        Ok(Chain::new(states, matrix, initial)?)
    }
}

pub fn load(path: &Path) -> Result<Chain, ChainFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| ChainFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ChainSpecFile::from_json(&text)?.into_chain()
}

#[cfg(test)]
mod tests {
    use super::*;
    use sbchain::q;

    fn parse(text: &str) -> Result<Chain, ChainFileError> {
        ChainSpecFile::from_json(text)?.into_chain()
    }

    #[test]
    fn parses_strings_and_integers() {
        let chain =
            parse(r#"{"states":["a","b"],"matrix":[["1/2","1/2"],[1,0]],"initial":["1/4","3/4"]}"#).unwrap();
        assert_eq!(chain.matrix().row(0), &[q!(1, 2), q!(1, 2)]);
        assert_eq!(chain.initial().unwrap().weights(), &[q!(1, 4), q!(3, 4)]);
    }

    #[test]
    fn rejects_floats_with_location() {
        let err = parse(r#"{"states":["a","b"],"matrix":[["1/2","1/2"],["1", 0.0]]}"#).unwrap_err();
        assert!(err.to_string().contains("matrix row 1 entry 1"), "{err}");
        let err = parse(r#"{"states":["a"],"matrix":[["0.5"]]}"#).unwrap_err();
        assert!(matches!(err, ChainFileError::Entry { .. }));
    }

    #[test]
    fn syntax_errors_carry_line() {
        let err = parse("{\n\"states\": [\"a\"],\n\"matrix\": [[\"1\"]\n").unwrap_err();
        let ChainFileError::Json(e) = err else {
            panic!("{err}")
        };
        assert!(e.line() >= 3);
    }

    #[test]
    fn invalid_chains_are_reported_as_chain_errors() {
        let err = parse(r#"{"states":["a","b"],"matrix":[["1/2","1/2"],["1/3","1/3"]]}"#).unwrap_err();
        assert!(matches!(
            err,
            ChainFileError::Chain(ChainError::NonStochasticRow { row: 1, .. })
        ));
        let err = parse(r#"{"states":["a","a"],"matrix":[["1","0"],["0","1"]]}"#).unwrap_err();
        assert!(matches!(
            err,
            ChainFileError::Chain(ChainError::DuplicateState(_))
        ));
    }
}
