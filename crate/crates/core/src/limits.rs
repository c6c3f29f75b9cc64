//! Resource caps shared by the library and the CLI.

use thiserror::Error;

pub const LIMITS_ENV: &str = "COMMFORGE_LIMITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `gens^cap` a Magnus expansion may range over.
    pub monomial_limit: u128,
    /// Largest number of witness sets verified exhaustively.
    pub witness_cap: usize,
    /// Rounds of lowest-degree peeling allowed in `decompose`; `None` means `2n`.
    pub decompose_budget: Option<usize>,
    /// Largest table of simple commutators kept for exact peeling.
    pub dictionary_limit: usize,
    /// Node budget of the exact peeling search.
    pub search_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            monomial_limit: 10_000_000,
            witness_cap: 20,
            decompose_budget: None,
            dictionary_limit: 200_000,
            search_nodes: 20_000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LimitsError {
    #[error("malformed limit entry `{0}` (expected key=value)")]
    Malformed(String),
    #[error("unknown limit `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {value}")]
    BadValue { key: String, value: String },
}

impl Limits {
    /// Apply a comma-separated `key=value` list on top of `self`.
    pub fn with_overrides(mut self, text: &str) -> Result<Self, LimitsError> {
        for entry in text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (key, value) =
                entry.split_once('=').ok_or_else(|| LimitsError::Malformed(entry.to_string()))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || LimitsError::BadValue { key: key.to_string(), value: value.to_string() };
            match key {
                "monomial_limit" => self.monomial_limit = value.parse().map_err(|_| bad())?,
                "witness_cap" => self.witness_cap = value.parse().map_err(|_| bad())?,
                "decompose_budget" => self.decompose_budget = Some(value.parse().map_err(|_| bad())?),
                "dictionary_limit" => self.dictionary_limit = value.parse().map_err(|_| bad())?,
                "search_nodes" => self.search_nodes = value.parse().map_err(|_| bad())?,
                other => return Err(LimitsError::UnknownKey(other.to_string())),
            }
        }
        Ok(self)
    }

    /// Defaults overridden by `COMMFORGE_LIMITS`, if set.
    pub fn from_env() -> Result<Self, LimitsError> {
        match std::env::var(LIMITS_ENV) {
            Ok(text) => Limits::default().with_overrides(&text),
            Err(_) => Ok(Limits::default()),
        }
    }

    pub fn budget_for(&self, n: usize) -> usize {
        self.decompose_budget.unwrap_or(2 * n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let l = Limits::default().with_overrides("monomial_limit=5, witness_cap=3,decompose_budget=9").unwrap();
        assert_eq!(l.monomial_limit, 5);
        assert_eq!(l.witness_cap, 3);
        assert_eq!(l.budget_for(2), 9);
        assert_eq!(Limits::default().budget_for(3), 6);
        assert_eq!(Limits::default().with_overrides(""), Ok(Limits::default()));
        assert!(matches!(Limits::default().with_overrides("foo=1"), Err(LimitsError::UnknownKey(_))));
        assert!(matches!(Limits::default().with_overrides("witness_cap"), Err(LimitsError::Malformed(_))));
        assert!(matches!(Limits::default().with_overrides("witness_cap=-1"), Err(LimitsError::BadValue { .. })));
    }
}
