//! The regression corpus: `.geo` files with `.expected.json` sidecars.
//!
//! A sidecar lists the expected verdict of every statement of its file and,
//! optionally, expected relations, comparisons, loci, envelopes and
//! discovered groups:
//!
//! ```json
//! { "statements": { "main": "TRUE" },
//!   "relations": [ { "expr1": "length(A, X)", "expr2": "length(A, C)", "ratio": "1/4" } ],
//!   "loci": [ { "statement": "gm", "tracer": "C", "components": ["x^2 + y^2 - x"] } ] }
//! ```

use crate::commands::{execute, Request};
use crate::{ServiceError, Settings};
use mg_core::construction::{parse, Construction};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default)]
    pub statements: BTreeMap<String, String>,
    #[serde(default)]
    pub relations: Vec<ExpectedRelation>,
    #[serde(default)]
    pub comparisons: Vec<ExpectedComparison>,
    #[serde(default)]
    pub loci: Vec<ExpectedLocus>,
    #[serde(default)]
    pub envelopes: Vec<ExpectedEnvelope>,
    #[serde(default)]
    pub discoveries: Vec<ExpectedDiscovery>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedRelation {
    pub expr1: String,
    pub expr2: String,
    /// For equalities `e1 = ratio * e2`.
    pub ratio: Option<String>,
    /// Otherwise the selected relation polynomial in `w1`, `w2`.
    pub relation: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedComparison {
    pub expr1: String,
    pub expr2: String,
    pub direction: String,
    pub minimal_polynomial: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedLocus {
    pub statement: String,
    pub tracer: String,
    /// Components that must all be present.
    pub components: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedEnvelope {
    pub curve: String,
    pub moving: Option<String>,
    /// Components that must all be present.
    pub components: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedDiscovery {
    pub target: String,
    /// Group keys that must all be certified.
    pub keys: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub file: String,
    /// What was checked, e.g. `statement main` or `relate length(A, X) : length(A, C)`.
    pub item: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
    pub timing_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub files: usize,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    /// One row per check.
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.file.len() + c.item.len() + 1).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let what = format!("{} {}", c.file, c.item);
            let mark = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!("{mark} {what:<width$}  {:>6} ms  {}", c.timing_ms, c.actual));
            if !c.passed {
                out.push_str(&format!("  (expected {})", c.expected));
            }
            out.push('\n');
        }
        out.push_str(&format!("{} files, {} passed, {} failed\n", self.files, self.passed, self.failed));
        out
    }
}

/// `.geo` files of a directory, sorted by name.
pub fn files(dir: &Path) -> Result<Vec<PathBuf>, ServiceError> {
    let entries = std::fs::read_dir(dir).map_err(|e| ServiceError::File { path: dir.display().to_string(), message: e.to_string() })?;
    let mut out: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "geo")).collect();
    out.sort();
    Ok(out)
}

pub fn read(path: &Path) -> Result<String, ServiceError> {
    std::fs::read_to_string(path).map_err(|e| ServiceError::File {
        path: path.display().to_string(),
        message: if e.kind() == std::io::ErrorKind::NotFound { "file not found".into() } else { e.to_string() },
    })
}

/// The sidecar of `name.geo` is `name.expected.json`.
pub fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("expected.json")
}

fn load(path: &Path) -> Result<(Construction, Expected), ServiceError> {
    let c = parse(&read(path)?)?;
    let side = sidecar(path);
    let text = read(&side)?;
    let expected = serde_json::from_str(&text).map_err(|e| ServiceError::File { path: side.display().to_string(), message: e.to_string() })?;
    Ok((c, expected))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().map(|a| a.iter().filter_map(|s| s.as_str().map(str::to_string)).collect()).unwrap_or_default()
}

fn text(v: &Value, key: &str) -> String {
    v.get(key).and_then(Value::as_str).unwrap_or("none").to_string()
}

fn missing(expected: &[String], actual: &[String]) -> Vec<String> {
    expected.iter().filter(|e| !actual.contains(e)).cloned().collect()
}

struct Runner<'a> {
    file: String,
    c: &'a Construction,
    settings: &'a Settings,
    checks: Vec<Check>,
}

impl Runner<'_> {
    fn run(&mut self, item: String, expected: String, req: Request, judge: impl FnOnce(&Value) -> (String, bool)) {
        let start = Instant::now();
        let (actual, passed) = match execute(self.c, &req, self.settings) {
            Ok(o) => judge(&o.body),
            Err(e) => (format!("error: {e}"), false),
        };
        let timing_ms = start.elapsed().as_millis() as u64;
        self.checks.push(Check { file: self.file.clone(), item, expected, actual, passed, timing_ms });
    }
}

/// Runs every check of one corpus file.
pub fn run_file(path: &Path, settings: &Settings) -> Vec<Check> {
    let file = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let (c, expected) = match load(path) {
        Ok(x) => x,
        Err(e) => {
            return vec![Check { file, item: "load".into(), expected: "ok".into(), actual: format!("error: {e}"), passed: false, timing_ms: 0 }]
        }
    };
    let mut r = Runner { file, c: &c, settings, checks: vec![] };
    for s in &c.statements {
        let want = expected.statements.get(&s.label).cloned().unwrap_or_else(|| "(no expectation)".into());
        let w = want.clone();
        r.run(format!("statement {}", s.label), want, Request::Prove { statement: Some(s.label.clone()) }, |v| {
            let got = text(v, "verdict");
            let ok = got == w;
            (got, ok)
        });
    }
    for label in expected.statements.keys().filter(|l| c.statement(l).is_none()) {
        r.checks.push(Check {
            file: r.file.clone(),
            item: format!("statement {label}"),
            expected: expected.statements[label].clone(),
            actual: "no such statement".into(),
            passed: false,
            timing_ms: 0,
        });
    }
    for e in &expected.relations {
        let want = e.ratio.clone().map(|q| format!("ratio {q}")).or_else(|| e.relation.clone()).unwrap_or_default();
        let req = Request::Relate { expr1: e.expr1.clone(), expr2: e.expr2.clone() };
        r.run(format!("relate {} : {}", e.expr1, e.expr2), want, req, |v| {
            let certified = v.get("certified").and_then(Value::as_bool) == Some(true);
            match &e.ratio {
                Some(q) => {
                    let got = text(v, "ratio");
                    let ok = certified && got == *q;
                    (format!("ratio {got}"), ok)
                }
                None => {
                    let got = text(v, "relation");
                    let ok = certified && Some(&got) == e.relation.as_ref();
                    (got, ok)
                }
            }
        });
    }
    for e in &expected.comparisons {
        let want = format!("{} {}", e.direction, e.minimal_polynomial);
        let req = Request::Compare { expr1: e.expr1.clone(), expr2: e.expr2.clone() };
        r.run(format!("compare {} : {}", e.expr1, e.expr2), want.clone(), req, |v| {
            let bounds: Vec<String> = v["bounds"]
                .as_array()
                .map(|b| b.iter().map(|b| format!("{} {}", text(b, "direction"), text(b, "minimal_polynomial"))).collect())
                .unwrap_or_default();
            let ok = bounds.contains(&want);
            (bounds.join("; "), ok)
        });
    }
    for e in &expected.loci {
        let req = Request::Locus { statement: e.statement.clone(), tracer: e.tracer.clone() };
        r.run(format!("locus {} / {}", e.statement, e.tracer), e.components.join(", "), req, |v| {
            let got = strings(&v["components"]);
            let ok = missing(&e.components, &got).is_empty();
            (got.join(", "), ok)
        });
    }
    for e in &expected.envelopes {
        let req = Request::Envelope { curve: e.curve.clone(), moving: e.moving.clone() };
        r.run(format!("envelope {}", e.curve), e.components.join(", "), req, |v| {
            let got = strings(&v["components"]);
            let ok = missing(&e.components, &got).is_empty();
            (got.join(", "), ok)
        });
    }
    for e in &expected.discoveries {
        let req = Request::Discover { target: e.target.clone() };
        r.run(format!("discover {}", e.target), e.keys.join(", "), req, |v| {
            let got: Vec<String> = v["certified"].as_array().map(|a| a.iter().map(|g| text(g, "key")).collect()).unwrap_or_default();
            let ok = missing(&e.keys, &got).is_empty();
            (format!("{} groups", got.len()), ok)
        });
    }
    r.checks
}

/// Runs the corpus in `dir`.
pub fn run(dir: &Path, settings: &Settings) -> Result<Report, ServiceError> {
    let files = files(dir)?;
    let checks: Vec<Check> = files.iter().flat_map(|f| run_file(f, settings)).collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(Report { files: files.len(), failed: checks.len() - passed, passed, checks })
}
