//! Reasoning commands built on the kernel and the algebraizer: proving,
//! discovery of conditions and statements, loci, envelopes, relations and
//! numeric comparison.

mod discover;
mod locus;
mod prove;
mod recognize;
mod relate;

pub use discover::{discover, discover_all, DiscoveredStatement, Discovery};
pub use locus::{envelope, locus_equation, Curve, CurveFactor};
pub use prove::{discover_conditions, prove, prove_statement, Conditions};
pub use recognize::{recognize_quadratic, Recognized};
pub use relate::{compare, relate, Bound, Direction, Relation, RelationKind};

use crate::algebra::{AlgebraError, AlgebraicModel, MeasureDefinition};
use crate::construction::{Construction, Predicate, Primitive, SegRef};
use crate::instance::{sample_instance, Instance, InstanceError};
use mg_poly::{
    factor_squarefree, polynomial_sqrt, reduce, saturate, Ideal, KernelError, LimitKind, Limits, MonomialOrder, Polynomial, Var,
    VarNames,
};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Duration;
use thiserror::Error;

#[derive(Clone, Debug)]
pub struct Options {
    /// Place the first two free points at the origin and on the x-axis.
    pub wlog: bool,
    /// Base seed; numeric filters use `seed, seed+1, ...`.
    pub seed: u64,
    pub filter_seeds: usize,
    /// Scale-invariant tolerance of the numeric filters.
    pub tolerance: f64,
    /// Wall-clock budget for a whole command.
    pub timeout: Option<Duration>,
    pub limits: Limits,
    pub compare_samples: usize,
    pub refine_sweeps: usize,
    pub candidate_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            wlog: true,
            seed: 1,
            filter_seeds: 5,
            tolerance: 1e-8,
            timeout: None,
            limits: Limits::default(),
            compare_samples: 10_000,
            refine_sweeps: 64,
            candidate_cap: 20_000,
        }
    }
}

impl Options {
    /// Kernel limits for one command, with the deadline starting now.
    pub fn limits(&self) -> Limits {
        match self.timeout {
            Some(t) => self.limits.with_timeout(t.min(self.limits.timeout)).with_deadline_from_now(t),
            None => self.limits,
        }
    }

    pub fn filter_seed_list(&self) -> Vec<u64> {
        (0..self.filter_seeds as u64).map(|i| self.seed.wrapping_add(i)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    True,
    False,
    TrueOnParts,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "TRUE",
            Verdict::False => "FALSE",
            Verdict::TrueOnParts => "TRUE_ON_PARTS",
            Verdict::Unknown => "UNKNOWN",
        }
    }

    pub fn from_name(s: &str) -> Option<Verdict> {
        [Verdict::True, Verdict::False, Verdict::TrueOnParts, Verdict::Unknown].into_iter().find(|v| v.as_str() == s)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReasonError {
    #[error("contradictory construction: the hypotheses have no nondegenerate solution")]
    Contradictory,
    #[error("resource limit exceeded ({0})")]
    ResourceLimit(LimitKind),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unknown statement `{0}`")]
    UnknownStatement(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("`{0}` is not an unpinned free point")]
    NotTracer(String),
    #[error("trivial locus: the statement does not constrain the tracer")]
    TrivialLocus,
    #[error("empty locus: the statement never holds")]
    EmptyLocus,
    #[error("no envelope: elimination leaves no equation")]
    NoEnvelope,
    #[error("`{0}` is not a line or circle")]
    NotCurve(String),
    #[error("cannot determine the family parameter: {0}")]
    NoParameter(String),
    #[error("envelopes are computed in the plane only")]
    SpatialEnvelope,
    #[error("no relation: the measures are algebraically independent")]
    NoRelation,
    #[error("{count} candidates exceed the cap of {cap}")]
    CandidateOverflow { count: usize, cap: usize },
    #[error("discovery of `{0}` statements is not supported")]
    UnsupportedKind(String),
}

impl From<KernelError> for ReasonError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::ResourceLimit(k) => ReasonError::ResourceLimit(k),
        }
    }
}

/// Which kernel test decided a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Test {
    /// Every thesis polynomial lies in the radical of the saturated hypotheses.
    RadicalMembership,
    /// The hypotheses plus the thesis generate the unit ideal.
    NeverTrue,
    /// Eliminating the dependent variables from hypotheses plus thesis
    /// leaves a nonzero condition on the free variables.
    GenericallyFalse,
    /// None of the above: the thesis holds on some components only.
    Components,
    ResourceLimit(LimitKind),
}

impl Test {
    pub fn as_str(self) -> &'static str {
        match self {
            Test::RadicalMembership => "radical_membership",
            Test::NeverTrue => "unit_ideal",
            Test::GenericallyFalse => "generic_elimination",
            Test::Components => "components",
            Test::ResourceLimit(_) => "resource_limit",
        }
    }
}

/// Enough data to re-run the deciding kernel test.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub test: Test,
    pub names: VarNames,
    /// Hypotheses as used, after sign resolution of length variables.
    pub hypotheses: Vec<Polynomial>,
    /// Nondegeneracy factors the hypotheses were saturated by, in order.
    pub saturated_by: Vec<Polynomial>,
    pub thesis: Vec<Polynomial>,
    /// Conditions on the free variables found by elimination.
    pub eliminated: Vec<Polynomial>,
    pub dep_vars: Vec<Var>,
    /// Dimension of the saturated hypothesis ideal.
    pub dimension: Option<i64>,
    pub expected_dimension: usize,
    /// Length variables whose sign was fixed: `(variable, root, sign)`.
    pub signs: Vec<(Var, Polynomial, i8)>,
}

impl Certificate {
    /// Re-runs the deciding test from the recorded hypotheses. Returns
    /// whether it still yields the recorded outcome.
    pub fn replay(&self, limits: &Limits) -> Result<bool, KernelError> {
        let mut ideal = Ideal::new(self.hypotheses.iter().cloned());
        for f in &self.saturated_by {
            ideal = Ideal::new(saturate(&ideal, f, limits)?);
        }
        match self.test {
            Test::RadicalMembership => {
                for t in &self.thesis {
                    if !mg_poly::radical_membership(t, &ideal, limits)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Test::NeverTrue => ideal.extended(self.thesis.iter().cloned()).is_unit(limits),
            Test::GenericallyFalse => {
                let drop: BTreeSet<Var> = self.dep_vars.iter().copied().collect();
                let elim = mg_poly::eliminate(&ideal.extended(self.thesis.iter().cloned()), &drop, limits)?;
                for e in &elim {
                    if !ideal.normal_form(e, limits)?.is_zero() {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Test::Components | Test::ResourceLimit(_) => Ok(true),
        }
    }

    pub fn format(&self, p: &Polynomial) -> String {
        self.names.format(p)
    }
}

#[derive(Clone, Debug)]
pub struct ReasoningResult {
    pub verdict: Verdict,
    /// For TRUE_ON_PARTS: generators of the thesis components beyond the hypotheses.
    pub conditions: Vec<Polynomial>,
    pub certificate: Certificate,
    pub elapsed: Duration,
}

impl ReasoningResult {
    pub fn formatted_conditions(&self) -> Vec<String> {
        self.conditions.iter().map(|p| self.certificate.format(p)).collect()
    }
}

/// The numeric instances used by filters, in the given seeds.
pub(crate) fn filter_instances(c: &Construction, seeds: &[u64]) -> Result<Vec<Instance>, InstanceError> {
    seeds.iter().map(|s| sample_instance(c, *s, &BTreeMap::new())).collect()
}

/// Distinct irreducible factors of the nondegeneracy polynomials, cheapest first.
pub(crate) fn nondegeneracy_factors(polys: &[Polynomial]) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = Vec::new();
    for p in polys {
        if p.is_zero() || p.is_constant() {
            continue;
        }
        for (f, _) in factor_squarefree(p).factors {
            if !f.is_constant() && !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then(a.len().cmp(&b.len())).then_with(|| a.to_string().cmp(&b.to_string())));
    out
}

/// Squared lengths of the segments a predicate names: the predicate is
/// only meaningful where they do not vanish.
pub(crate) fn predicate_nondegeneracy(m: &AlgebraicModel, p: &Predicate) -> Vec<Polynomial> {
    let seg = |s: &SegRef| -> Option<Polynomial> {
        match s {
            SegRef::Points(a, b) => {
                let (pa, pb) = (m.point(a), m.point(b));
                Some(pa.iter().zip(pb).fold(Polynomial::zero(&MonomialOrder::DegRevLex), |acc, (x, y)| {
                    let d = y - x;
                    acc + &d * &d
                }))
            }
            SegRef::Object(_) => None,
        }
    };
    match p {
        Predicate::Parallel(s, t) | Predicate::Perpendicular(s, t) | Predicate::EqualLength(s, t) => {
            [seg(s), seg(t)].into_iter().flatten().filter(|p| !p.is_constant()).collect()
        }
        _ => vec![],
    }
}

/// Whether `f` divides one of `polys`.
pub(crate) fn divides_any(f: &Polynomial, polys: &[Polynomial]) -> bool {
    polys.iter().any(|g| !g.is_zero() && mg_poly::exact_div(g, f).is_some())
}

/// A model whose hypotheses have been saturated by the nondegeneracy
/// factors, with length signs resolved where possible.
#[derive(Clone, Debug)]
pub(crate) struct Prepared {
    pub model: AlgebraicModel,
    /// Hypotheses after sign resolution (before saturation).
    pub hypotheses: Vec<Polynomial>,
    pub factors: Vec<Polynomial>,
    pub saturated: Ideal,
    pub signs: Vec<(Var, Polynomial, i8)>,
}

impl Prepared {
    /// `instances` are used only to choose the signs of length variables.
    pub fn new(model: AlgebraicModel, instances: &[Instance], limits: &Limits) -> Result<Prepared, ReasonError> {
        let n_measure = model.measures.len();
        let n_geom = model.hypotheses.len() - n_measure;
        let geometric: Vec<Polynomial> = model.hypotheses[..n_geom].to_vec();
        let factors = nondegeneracy_factors(&model.nondegeneracy);
        let mut ideal = Ideal::new(geometric.iter().cloned());
        let mut used = Vec::new();
        for f in &factors {
            limits.check_deadline()?;
            if f.vars().is_disjoint(&ideal.vars()) {
                continue;
            }
            ideal = Ideal::new(saturate(&ideal, f, limits)?);
            used.push(f.clone());
        }
        if ideal.is_unit(limits)? {
            return Err(ReasonError::Contradictory);
        }
        if n_measure == 0 {
            return Ok(Prepared { model, hypotheses: geometric, factors: used, saturated: ideal, signs: vec![] });
        }

        let mut measure_polys: Vec<Polynomial> = model.hypotheses[n_geom..].to_vec();
        let signs = resolve_signs(&model, &ideal, instances, limits)?;
        for (var, root, sign) in &signs {
            let i = model.measures.iter().position(|m| m.var == *var).expect("measure variable");
            let o = MonomialOrder::DegRevLex;
            measure_polys[i] = Polynomial::var(*var, &o) - root.scale(&mg_poly::Rat::from_int(i64::from(*sign)));
        }
        let mut extra_factors = Vec::new();
        for m in &model.measures {
            if let MeasureDefinition::Primitive(Primitive::Circumradius(a, b, c)) = &m.definition {
                let area = model.translate_predicate(&Predicate::Collinear(a.clone(), b.clone(), c.clone()))?;
                extra_factors.extend(area);
            }
        }
        let mut full = Ideal::new(ideal.groebner(limits)?.iter().cloned().chain(measure_polys.iter().cloned()));
        for f in nondegeneracy_factors(&extra_factors) {
            full = Ideal::new(saturate(&full, &f, limits)?);
            used.push(f);
        }
        if full.is_unit(limits)? {
            return Err(ReasonError::Contradictory);
        }
        let hypotheses = geometric.into_iter().chain(measure_polys).collect();
        Ok(Prepared { model, hypotheses, factors: used, saturated: full, signs })
    }

    pub fn certificate(&self, test: Test, thesis: &[Polynomial]) -> Certificate {
        Certificate {
            test,
            names: self.model.names.clone(),
            hypotheses: self.hypotheses.clone(),
            saturated_by: self.factors.clone(),
            thesis: thesis.to_vec(),
            eliminated: vec![],
            dep_vars: self.model.dep_vars.clone(),
            dimension: None,
            expected_dimension: self.model.free_vars.len(),
            signs: self.signs.clone(),
        }
    }
}

/// For each length variable `l` with `l^2 = d`, looks for a polynomial `q`
/// with `d = q^2` modulo the saturated hypotheses and a sign `s` with
/// `l = s*q` at every numeric instance.
fn resolve_signs(
    model: &AlgebraicModel,
    geometric: &Ideal,
    instances: &[Instance],
    limits: &Limits,
) -> Result<Vec<(Var, Polynomial, i8)>, ReasonError> {
    let lengths: Vec<_> = model
        .measures
        .iter()
        .filter(|m| matches!(m.definition, MeasureDefinition::Primitive(Primitive::Length(..))))
        .collect();
    if lengths.is_empty() || instances.is_empty() {
        return Ok(vec![]);
    }
    let measure_vars: BTreeSet<Var> = model.measures.iter().map(|m| m.var).collect();
    let dep: Vec<Var> = model.dep_vars.iter().copied().filter(|v| !measure_vars.contains(v)).collect();
    let order = MonomialOrder::block(dep, MonomialOrder::DegRevLex);
    let basis = geometric.groebner_in(&order, limits)?;
    let values: Vec<BTreeMap<Var, f64>> = instances.iter().map(|i| model.values_at(i)).collect();
    let mut out = Vec::new();
    for m in lengths {
        let o = MonomialOrder::DegRevLex;
        let d = Polynomial::var(m.var, &o).pow(2) - &m.polynomials[0];
        let r = reduce(&d.with_order(&order), &basis).with_order(&o);
        let Some(q) = polynomial_sqrt(&r) else { continue };
        let mut sign: Option<i8> = None;
        let mut consistent = true;
        for vals in &values {
            let l = vals[&m.var];
            let qv = q.eval_f64(|v| vals[&v]);
            let tol = 1e-7 * l.abs().max(1.0);
            if l.abs() <= tol {
                continue;
            }
            let s = if (qv - l).abs() <= tol {
                1
            } else if (qv + l).abs() <= tol {
                -1
            } else {
                consistent = false;
                break;
            };
            if sign.is_some_and(|x| x != s) {
                consistent = false;
                break;
            }
            sign = Some(s);
        }
        if let (true, Some(s)) = (consistent, sign) {
            out.push((m.var, q, s));
        }
    }
    Ok(out)
}

/// The model for a predicate: WLOG as requested, measure variables
/// attached for `eq` statements.
pub(crate) fn model_for(c: &Construction, p: &Predicate, wlog: bool) -> Result<(AlgebraicModel, Vec<Polynomial>), ReasonError> {
    Ok(crate::algebra::algebraize(c, wlog).with_predicate(p)?)
}

/// Numeric instances, tolerating unsatisfiable seeds.
pub(crate) fn instances_or_empty(c: &Construction, opts: &Options) -> Vec<Instance> {
    filter_instances(c, &opts.filter_seed_list()).unwrap_or_default()
}
