//! Names shared by manifests, the search configuration and the CLI.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Registered evaluation functions. Lower values are better for all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvaluatorId {
    /// Number of goto instructions.
    F1,
    /// Summed Euclidean distance of the last reached states to the goals.
    H5,
    /// Landmarks not yet accepted.
    Flm,
    /// Planning actions outside the helpful-action set.
    Fha,
    /// Defined instructions other than goto, test and cmp.
    Fln,
    /// Atoms or register pairs never inspected.
    Fcn,
}

impl EvaluatorId {
    pub const ALL: [EvaluatorId; 6] = [
        EvaluatorId::F1,
        EvaluatorId::H5,
        EvaluatorId::Flm,
        EvaluatorId::Fha,
        EvaluatorId::Fln,
        EvaluatorId::Fcn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvaluatorId::F1 => "f1",
            EvaluatorId::H5 => "h5",
            EvaluatorId::Flm => "flm",
            EvaluatorId::Fha => "fha",
            EvaluatorId::Fln => "fln",
            EvaluatorId::Fcn => "fcn",
        }
    }

    /// Short label used in configuration names such as `P(v)_{lm,1,ha}`.
    pub fn short(self) -> &'static str {
        match self {
            EvaluatorId::F1 => "1",
            EvaluatorId::H5 => "5",
            EvaluatorId::Flm => "lm",
            EvaluatorId::Fha => "ha",
            EvaluatorId::Fln => "ln",
            EvaluatorId::Fcn => "cn",
        }
    }

    /// Evaluators that only make sense on STRIPS problems.
    pub fn strips_only(self) -> bool {
        matches!(self, EvaluatorId::Flm | EvaluatorId::Fha)
    }

    pub fn parse_list(text: &str) -> Result<Vec<EvaluatorId>, Error> {
        let list: Vec<EvaluatorId> = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        if list.is_empty() {
            return Err(Error::Config("empty evaluator list".into()));
        }
        Ok(list)
    }
}

impl fmt::Display for EvaluatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvaluatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key = s.trim().to_ascii_lowercase().replace('_', "");
        let found = EvaluatorId::ALL
            .into_iter()
            .find(|e| e.name() == key || e.short() == key);
        found.ok_or_else(|| {
            Error::Config(format!(
                "unknown evaluator {s:?} (expected one of f1, h5, flm, fha, fln, fcn)"
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchMode {
    /// Best-first search over all instances at once.
    Bfs,
    /// Progressive search that activates instances on demand.
    Pgp,
}

impl SearchMode {
    pub fn name(self) -> &'static str {
        match self {
            SearchMode::Bfs => "bfs",
            SearchMode::Pgp => "pgp",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bfs" => Ok(SearchMode::Bfs),
            "pgp" => Ok(SearchMode::Pgp),
            other => Err(Error::Config(format!("unknown mode {other:?} (expected bfs or pgp)"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluator_names_parse_in_both_forms() {
        for e in EvaluatorId::ALL {
            assert_eq!(e.name().parse::<EvaluatorId>().unwrap(), e);
            assert_eq!(e.short().parse::<EvaluatorId>().unwrap(), e);
        }
        assert_eq!("f_lm".parse::<EvaluatorId>().unwrap(), EvaluatorId::Flm);
        assert!("h2".parse::<EvaluatorId>().is_err());
        assert_eq!(
            EvaluatorId::parse_list("flm, f1,fha").unwrap(),
            vec![EvaluatorId::Flm, EvaluatorId::F1, EvaluatorId::Fha]
        );
    }
}
