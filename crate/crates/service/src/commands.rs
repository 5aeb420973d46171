//! The command layer shared by the CLI and the HTTP service, and the JSON
//! wire format of its results.

use crate::{ServiceError, Settings};
use mg_core::construction::{parse_measure, parse_predicate, Construction, MeasureExpr, Predicate, PredicateKind};
use mg_core::instance::{sample_instance, Geometry, Instance};
use mg_core::reason::{self, Certificate, Curve, DiscoveredStatement, Discovery, Relation, ReasoningResult, Verdict};
use mg_core::Scalar;
use mg_poly::{Polynomial, Rat, VarNames};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::time::Duration;

/// One reasoning request against a construction.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case", deny_unknown_fields)]
pub enum Request {
    /// `statement` is a label or predicate text; `None` proves every statement.
    Prove { statement: Option<String> },
    Conditions { statement: String },
    Discover { target: String },
    DiscoverAll { kind: String },
    Relate { expr1: String, expr2: String },
    Compare { expr1: String, expr2: String },
    Locus { statement: String, tracer: String },
    Envelope { curve: String, moving: Option<String> },
}

impl Request {
    pub const NAMES: [&'static str; 8] = ["prove", "conditions", "discover", "discover_all", "relate", "compare", "locus", "envelope"];

    pub fn name(&self) -> &'static str {
        match self {
            Request::Prove { .. } => "prove",
            Request::Conditions { .. } => "conditions",
            Request::Discover { .. } => "discover",
            Request::DiscoverAll { .. } => "discover_all",
            Request::Relate { .. } => "relate",
            Request::Compare { .. } => "compare",
            Request::Locus { .. } => "locus",
            Request::Envelope { .. } => "envelope",
        }
    }
}

/// A computed answer. `unknown` is set when some verdict is UNKNOWN, which
/// the front ends report like a resource limit.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub body: Value,
    pub unknown: bool,
}

fn ms(d: Duration) -> u64 {
    d.as_millis() as u64
}

fn polys(names: &VarNames, ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| names.format(p)).collect()
}

fn statement(c: &Construction, text: &str) -> Result<(String, Predicate), ServiceError> {
    if let Some(s) = c.statement(text) {
        return Ok((s.label.clone(), s.predicate.clone()));
    }
    parse_predicate(text, c)
        .map(|p| (text.to_string(), p))
        .map_err(|e| ServiceError::Invalid(format!("`{text}` is neither a statement label nor a valid predicate: {}", e.message)))
}

fn measure(c: &Construction, text: &str) -> Result<MeasureExpr, ServiceError> {
    parse_measure(text, c).map_err(|e| ServiceError::Invalid(format!("invalid measure expression `{text}`: {}", e.message)))
}

fn object(c: &Construction, id: &str) -> Result<(), ServiceError> {
    match c.step(id) {
        Some(_) => Ok(()),
        None => Err(ServiceError::Invalid(format!("unknown object `{id}`"))),
    }
}

pub fn certificate_json(cert: &Certificate) -> Value {
    let names = &cert.names;
    json!({
        "test": cert.test.as_str(),
        "variables": names.vars().map(|v| names.name(v)).collect::<Vec<_>>(),
        "dependent": cert.dep_vars.iter().map(|v| names.name(*v)).collect::<Vec<_>>(),
        "hypotheses": polys(names, &cert.hypotheses),
        "saturated_by": polys(names, &cert.saturated_by),
        "thesis": polys(names, &cert.thesis),
        "eliminated": polys(names, &cert.eliminated),
        "dimension": cert.dimension,
        "expected_dimension": cert.expected_dimension,
        "signs": cert.signs.iter().map(|(v, q, s)| json!({
            "variable": names.name(*v),
            "root": names.format(q),
            "sign": s,
        })).collect::<Vec<_>>(),
    })
}

pub fn prove_json(label: &str, p: &Predicate, r: &ReasoningResult) -> Value {
    json!({
        "statement": label,
        "predicate": p.to_string(),
        "verdict": r.verdict.as_str(),
        "conditions": r.formatted_conditions(),
        "certificate": certificate_json(&r.certificate),
        "timing_ms": ms(r.elapsed),
    })
}

fn group_json(s: &DiscoveredStatement) -> Value {
    json!({
        "kind": s.kind.name(),
        "key": s.key,
        "members": s.members,
        "statements": s.statements.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "verdict": s.verdict.as_str(),
    })
}

pub fn discovery_json(d: &Discovery) -> Value {
    json!({
        "certified": d.certified.iter().map(group_json).collect::<Vec<_>>(),
        "uncertified": d.uncertified.iter().map(group_json).collect::<Vec<_>>(),
        "candidates": d.candidates,
        "survivors": d.survivors,
        "timing_ms": ms(d.elapsed),
    })
}

fn rat(r: &Rat) -> String {
    r.to_string()
}

pub fn relation_json(r: &Relation, e1: &str, e2: &str) -> Value {
    let bounds: Vec<Value> = r
        .bounds
        .iter()
        .map(|b| {
            json!({
                "direction": b.direction.as_str(),
                "constant": b.constant,
                "minimal_polynomial": b.recognized.as_ref().map(|k| k.polynomial_text()),
                "unrecognized": b.recognized.is_none(),
                "witness": b.witness,
            })
        })
        .collect();
    json!({
        "kind": r.kind.as_str(),
        "certified": r.certified,
        "ratio": r.ratio.as_ref().map(rat),
        "relation": r.polynomial.as_ref().map(|p| r.format(p)),
        "factors": polys(&r.names, &r.factors),
        "variables": { "w1": e1, "w2": e2 },
        "bounds": bounds,
        "samples": r.samples,
        "timing_ms": ms(r.elapsed),
    })
}

pub fn curve_json(c: &Curve) -> Value {
    json!({
        "variables": c.names.vars().map(|v| c.names.name(v)).collect::<Vec<_>>(),
        "factors": c.factors.iter().map(|f| json!({
            "polynomial": c.format(&f.polynomial),
            "multiplicity": f.multiplicity,
            "degenerate": f.degenerate,
        })).collect::<Vec<_>>(),
        "components": c.components().into_iter().map(|p| c.format(p)).collect::<Vec<_>>(),
        "equation": c.format(&c.equation()),
        "complete": c.complete,
        "timing_ms": ms(c.elapsed),
    })
}

fn floats(v: &[Scalar]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

/// Objects of an instance for rendering; helper objects are left out.
pub fn instance_json(c: &Construction, inst: &Instance) -> Value {
    let mut objects = Map::new();
    for (id, g) in &inst.objects {
        if id.contains("__") {
            continue;
        }
        let kind = c.kind_of(id).map_or("point", |k| k.keyword());
        let mut o = match g {
            Geometry::Point(p) => json!({ "coordinates": floats(p) }),
            Geometry::Line { base, dir } => json!({ "base": floats(base), "direction": floats(dir) }),
            Geometry::Circle { center, radius_sq } => json!({ "center": floats(center), "radius": radius_sq.to_f64().sqrt() }),
        };
        o["kind"] = json!(kind);
        if let Some((a, b)) = c.defining_points(id).filter(|_| kind == "segment") {
            o["endpoints"] = json!([a, b]);
        }
        objects.insert(id.clone(), o);
    }
    json!({ "seed": inst.seed, "dimension": inst.dimension, "objects": objects })
}

/// Samples an instance with some free points pinned.
pub fn instance(c: &Construction, seed: u64, pins: &BTreeMap<String, Vec<Rat>>) -> Result<Value, ServiceError> {
    let inst = sample_instance(c, seed, pins).map_err(|e| ServiceError::Invalid(e.to_string()))?;
    Ok(instance_json(c, &inst))
}

/// Summary of a parsed construction.
pub fn construction_json(c: &Construction) -> Value {
    let steps: Vec<Value> = c
        .steps
        .iter()
        .filter(|s| !s.id.contains("__"))
        .map(|s| {
            json!({
                "id": s.id,
                "kind": s.object_kind().keyword(),
                "text": s.to_string(),
                "depends_on": s.dependencies(),
                "random": s.is_random(),
            })
        })
        .collect();
    json!({
        "dimension": c.dimension,
        "steps": steps,
        "statements": c.statements.iter().map(|s| json!({ "label": s.label, "predicate": s.predicate.to_string() })).collect::<Vec<_>>(),
        "measures": c.measures.iter().map(|m| json!({ "name": m.name, "expr": m.expr.to_string() })).collect::<Vec<_>>(),
    })
}

/// Runs one request. Every front end goes through here.
pub fn execute(c: &Construction, req: &Request, settings: &Settings) -> Result<Outcome, ServiceError> {
    let opts = settings.options();
    let mut unknown = false;
    let mut body = match req {
        Request::Prove { statement: Some(text) } => {
            let (label, p) = statement(c, text)?;
            let r = reason::prove(c, &p, &opts)?;
            unknown = r.verdict == Verdict::Unknown;
            prove_json(&label, &p, &r)
        }
        Request::Prove { statement: None } => {
            if c.statements.is_empty() {
                return Err(ServiceError::Invalid("the construction has no statements".into()));
            }
            let mut results = Vec::new();
            for s in &c.statements {
                let r = reason::prove(c, &s.predicate, &opts)?;
                unknown |= r.verdict == Verdict::Unknown;
                results.push(prove_json(&s.label, &s.predicate, &r));
            }
            json!({ "results": results })
        }
        Request::Conditions { statement: text } => {
            let (label, p) = statement(c, text)?;
            let r = reason::discover_conditions(c, &p, &opts)?;
            json!({
                "statement": label,
                "predicate": p.to_string(),
                "conditions": r.formatted(),
                "rejected": polys(&r.names, &r.rejected),
            })
        }
        Request::Discover { target } => {
            object(c, target)?;
            let mut v = discovery_json(&reason::discover(c, target, &opts)?);
            v["target"] = json!(target);
            v
        }
        Request::DiscoverAll { kind } => {
            let k = PredicateKind::from_name(kind).ok_or_else(|| ServiceError::Invalid(format!("unknown predicate kind `{kind}`")))?;
            let mut v = discovery_json(&reason::discover_all(c, k, &opts)?);
            v["predicate_kind"] = json!(k.name());
            v
        }
        Request::Relate { expr1, expr2 } | Request::Compare { expr1, expr2 } => {
            let (e1, e2) = (measure(c, expr1)?, measure(c, expr2)?);
            let r = if matches!(req, Request::Relate { .. }) {
                reason::relate(c, &e1, &e2, &opts)?
            } else {
                reason::compare(c, &e1, &e2, &opts)?
            };
            relation_json(&r, &e1.to_string(), &e2.to_string())
        }
        Request::Locus { statement: text, tracer } => {
            let (label, p) = statement(c, text)?;
            object(c, tracer)?;
            let mut v = curve_json(&reason::locus_equation(c, &p, tracer, &opts)?);
            v["statement"] = json!(label);
            v["tracer"] = json!(tracer);
            v
        }
        Request::Envelope { curve, moving } => {
            object(c, curve)?;
            if let Some(m) = moving {
                object(c, m)?;
            }
            let mut v = curve_json(&reason::envelope(c, curve, moving.as_deref(), &opts)?);
            v["curve"] = json!(curve);
            v
        }
    };
    body["status"] = json!("ok");
    body["command"] = json!(req.name());
    Ok(Outcome { body, unknown })
}

/// Removes every `timing_ms` field, leaving the deterministic part.
pub fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("timing_ms");
            m.values_mut().for_each(strip_timings);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

/// Parses `D=1/2,3/4;E=0,1` into pinned coordinates; decimals are exact.
pub fn parse_pins(text: &str) -> Result<BTreeMap<String, Vec<Rat>>, ServiceError> {
    let mut pins = BTreeMap::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (id, coords) = item.split_once('=').ok_or_else(|| ServiceError::BadRequest(format!("pin `{item}` is not `ID=x,y`")))?;
        let values = coords.split(',').map(|x| parse_number(x.trim())).collect::<Result<Vec<_>, _>>()?;
        pins.insert(id.trim().to_string(), values);
    }
    Ok(pins)
}

fn parse_number(s: &str) -> Result<Rat, ServiceError> {
    let bad = || ServiceError::BadRequest(format!("`{s}` is not a number"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: Rat = if int.is_empty() || int == "-" { Rat::from_int(0) } else { int.parse().map_err(|_| bad())? };
        let digits: i64 = frac.parse().map_err(|_| bad())?;
        let f = Rat::new(digits, 10i64.pow(frac.len() as u32));
        return Ok(if negative { whole - f } else { whole + f });
    }
    s.parse().map_err(|_| bad())
}
