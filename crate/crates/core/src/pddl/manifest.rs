//! GP-problem manifests and numeric instance files (key=value text).

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{EvaluatorId, SearchMode};
use crate::error::{Error, ParseError, Position, Result};
use crate::model::{numeric_domain, Domain, GpProblem, Instance, NumericInstance};

/// Where the domain of a manifest comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainSource {
    Builtin(String),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpManifest {
    pub domain: DomainSource,
    /// Instance files in activation order, resolved against the manifest directory.
    pub instances: Vec<PathBuf>,
    /// Held-out instances used only for validation.
    pub validation: Vec<PathBuf>,
    pub pointers: usize,
    pub lines: usize,
    pub v: usize,
    pub evaluators: Vec<EvaluatorId>,
    pub mode: SearchMode,
}

/// Iterates `key=value` lines, skipping blanks and `#` comments.
fn key_values(text: &str) -> impl Iterator<Item = Result<(Position, &str, &str), ParseError>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            return None;
        }
        let pos = Position { line: i + 1, column: 1 };
        Some(match line.split_once('=') {
            Some((k, v)) => Ok((pos, k.trim(), v.trim())),
            None => Err(ParseError::syntax(pos, format!("expected key=value, found {line:?}"))),
        })
    })
}

fn number(pos: Position, key: &str, value: &str) -> Result<usize, ParseError> {
    value
        .parse()
        .map_err(|_| ParseError::semantic(pos, format!("{key} must be a non-negative integer, found {value:?}")))
}

fn path_list(base: &Path, value: &str) -> Vec<PathBuf> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| base.join(s))
        .collect()
}

impl GpManifest {
    /// Parses manifest text; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<GpManifest> {
        let mut domain = None;
        let mut instances = None;
        let mut validation = Vec::new();
        let mut pointers = None;
        let mut lines = None;
        let mut v = None;
        let mut evaluators = None;
        let mut mode = SearchMode::Pgp;
        for kv in key_values(text) {
            let (pos, key, value) = kv?;
            let at = |e: Error| match e {
                Error::Config(m) => Error::Parse(ParseError::semantic(pos, m)),
                other => other,
            };
            match key {
                "domain" => {
                    domain = Some(if value.ends_with(".pddl") || numeric_domain(value).is_none() {
                        DomainSource::File(base.join(value))
                    } else {
                        DomainSource::Builtin(value.to_string())
                    })
                }
                "instances" => instances = Some(path_list(base, value)),
                "validation" => validation = path_list(base, value),
                "pointers" => pointers = Some(number(pos, key, value)?),
                "lines" => lines = Some(number(pos, key, value)?),
                "v" => v = Some(number(pos, key, value)?),
                "evaluators" => evaluators = Some(EvaluatorId::parse_list(value).map_err(at)?),
                "mode" => mode = value.parse().map_err(at)?,
                other => {
                    return Err(ParseError::semantic(pos, format!("unknown manifest key {other:?}")).into())
                }
            }
        }
        let missing = |k: &str| Error::Config(format!("manifest lacks {k}="));
        let instances = instances.ok_or_else(|| missing("instances"))?;
        if instances.is_empty() {
            return Err(Error::Config("manifest lists no instances".into()));
        }
        Ok(GpManifest {
            domain: domain.ok_or_else(|| missing("domain"))?,
            instances,
            validation,
            pointers: pointers.ok_or_else(|| missing("pointers"))?,
            lines: lines.ok_or_else(|| missing("lines"))?,
            v: v.ok_or_else(|| missing("v"))?,
            evaluators: evaluators.unwrap_or_else(|| vec![EvaluatorId::H5, EvaluatorId::F1]),
            mode,
        })
    }

    pub fn read(path: &Path) -> Result<GpManifest> {
        let text = read_text(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        GpManifest::parse(&text, base).map_err(|e| Error::in_file(path.display().to_string(), e))
    }

    /// Manifest text with paths written relative to `base` when possible.
    pub fn to_text(&self, base: &Path) -> String {
        let rel = |p: &PathBuf| p.strip_prefix(base).unwrap_or(p).display().to_string();
        let domain = match &self.domain {
            DomainSource::Builtin(n) => n.clone(),
            DomainSource::File(p) => rel(p),
        };
        let join = |ps: &[PathBuf]| ps.iter().map(rel).collect::<Vec<_>>().join(",");
        let mut out = format!(
            "domain={domain}\ninstances={}\n",
            join(&self.instances)
        );
        if !self.validation.is_empty() {
            out.push_str(&format!("validation={}\n", join(&self.validation)));
        }
        let evals: Vec<&str> = self.evaluators.iter().map(|e| e.name()).collect();
        out.push_str(&format!(
            "pointers={}\nlines={}\nv={}\nevaluators={}\nmode={}\n",
            self.pointers,
            self.lines,
            self.v,
            evals.join(","),
            self.mode
        ));
        out
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses `name=`, `domain=`, `registers=` and `goal=idx:val,...` lines.
/// Returns the instance and the domain name it declares.
pub fn parse_numeric_instance(text: &str) -> Result<(NumericInstance, String)> {
    let mut name = None;
    let mut domain = None;
    let mut registers = None;
    let mut goal = Vec::new();
    let mut last = Position { line: 1, column: 1 };
    for kv in key_values(text) {
        let (pos, key, value) = kv?;
        last = pos;
        let int = |s: &str| -> Result<i64, ParseError> {
            s.trim()
                .parse()
                .map_err(|_| ParseError::semantic(pos, format!("{s:?} is not an integer")))
        };
        match key {
            "name" => name = Some(value.to_string()),
            "domain" => domain = Some(value.to_ascii_lowercase()),
            "registers" => {
                registers = Some(value.split(',').map(int).collect::<Result<Vec<_>, _>>()?);
            }
            "goal" => {
                for g in value.split(',').filter(|g| !g.trim().is_empty()) {
                    let (i, v) = g
                        .split_once(':')
                        .ok_or_else(|| ParseError::syntax(pos, format!("goal entry {g:?} is not idx:val")))?;
                    let i = usize::try_from(int(i)?)
                        .map_err(|_| ParseError::semantic(pos, "negative goal register"))?;
                    goal.push((i, int(v)?));
                }
            }
            other => {
                return Err(ParseError::semantic(pos, format!("unknown key {other:?}")).into())
            }
        }
    }
    let missing = |k: &str| ParseError::semantic(last, format!("numeric instance lacks {k}="));
    let name = name.ok_or_else(|| missing("name"))?;
    let domain = domain.ok_or_else(|| missing("domain"))?;
    let registers = registers.ok_or_else(|| missing("registers"))?;
    let inst = NumericInstance::new(name, registers, goal)
        .map_err(|e| ParseError::semantic(last, e.to_string()))?;
    Ok((inst, domain))
}

pub fn print_numeric_instance(inst: &NumericInstance, domain: &str) -> String {
    let regs: Vec<String> = inst.registers.iter().map(i64::to_string).collect();
    let goal: Vec<String> = inst.goal.iter().map(|(i, v)| format!("{i}:{v}")).collect();
    format!(
        "name={}\ndomain={domain}\nregisters={}\ngoal={}\n",
        inst.name,
        regs.join(","),
        goal.join(",")
    )
}

pub fn load_domain(source: &DomainSource) -> Result<Domain> {
    match source {
        DomainSource::Builtin(name) => numeric_domain(name)
            .map(Domain::Numeric)
            .ok_or_else(|| Error::Config(format!("unknown builtin domain {name:?}"))),
        DomainSource::File(path) => {
            let text = read_text(path)?;
            super::parse_domain(&text)
                .map(Domain::Strips)
                .map_err(|e| Error::in_file(path.display().to_string(), e))
        }
    }
}

pub fn load_instance(domain: &Domain, path: &Path) -> Result<Instance> {
    let text = read_text(path)?;
    let wrap = |e: Error| Error::in_file(path.display().to_string(), e);
    match domain {
        Domain::Strips(d) => super::parse_instance(&text, d)
            .map(Instance::Strips)
            .map_err(|e| wrap(e.into())),
        Domain::Numeric(d) => {
            let (inst, name) = parse_numeric_instance(&text).map_err(wrap)?;
            if name != d.name {
                return Err(wrap(Error::Model(format!(
                    "instance belongs to domain {name}, expected {}",
                    d.name
                ))));
            }
            Ok(Instance::Numeric(inst))
        }
    }
}

/// Loads the domain and all training instances in manifest order.
pub fn load_gp_problem(manifest: &GpManifest) -> Result<GpProblem> {
    let domain = load_domain(&manifest.domain)?;
    let instances = manifest
        .instances
        .iter()
        .map(|p| load_instance(&domain, p))
        .collect::<Result<Vec<_>>>()?;
    GpProblem::new(domain, instances, manifest.pointers, manifest.lines)
}

/// Loads the held-out instances of a manifest.
pub fn load_validation(manifest: &GpManifest, domain: &Domain) -> Result<Vec<Instance>> {
    manifest
        .validation
        .iter()
        .map(|p| load_instance(domain, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_manifest_parses() {
        let m = GpManifest::parse(
            "domain=fibo\ninstances=a.num, b.num\npointers=2\nlines=7\nv=2\nevaluators=h5,f1\nmode=bfs\n",
            Path::new("/x"),
        )
        .unwrap();
        assert_eq!(m.domain, DomainSource::Builtin("fibo".into()));
        assert_eq!(m.instances, vec![PathBuf::from("/x/a.num"), PathBuf::from("/x/b.num")]);
        assert_eq!((m.pointers, m.lines, m.v), (2, 7, 2));
        assert_eq!(m.mode, SearchMode::Bfs);
        let again = GpManifest::parse(&m.to_text(Path::new("/x")), Path::new("/x")).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn manifest_errors() {
        let base = Path::new(".");
        assert!(GpManifest::parse("domain=fibo\ninstances=\npointers=2\nlines=7\nv=1", base).is_err());
        let e = GpManifest::parse("domain=fibo\ninstances=a\npointers=2\nlines=7\nv=1\nevaluators=f9", base)
            .unwrap_err();
        assert!(e.to_string().contains("unknown evaluator"));
        assert!(GpManifest::parse("domain fibo", base).is_err());
    }

    #[test]
    fn numeric_instance_round_trip() {
        let text = "name=f3\ndomain=fibo\nregisters=0,1,0,0\ngoal=3:2\n";
        let (inst, d) = parse_numeric_instance(text).unwrap();
        assert_eq!(d, "fibo");
        assert_eq!(inst.registers, vec![0, 1, 0, 0]);
        assert_eq!(inst.goal, vec![(3, 2)]);
        assert_eq!(print_numeric_instance(&inst, "fibo"), text);
        assert!(parse_numeric_instance("name=x\ndomain=fibo\nregisters=1\ngoal=4:1").is_err());
    }
}
