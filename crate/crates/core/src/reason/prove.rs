//! Proving statements and discovering the conditions that make them hold.

use super::{
    divides_any, instances_or_empty, model_for, predicate_nondegeneracy, Certificate, Options, Prepared, ReasonError, ReasoningResult, Test,
    Verdict,
};
use crate::construction::{Construction, Predicate};
use mg_poly::{dimension, eliminate, factor_squarefree, radical_membership, Ideal, KernelError, Limits, Polynomial, Var, VarNames};
use std::collections::BTreeSet;
use std::time::Instant;

pub(crate) struct Decision {
    pub verdict: Verdict,
    pub test: Test,
    pub conditions: Vec<Polynomial>,
    pub eliminated: Vec<Polynomial>,
    pub dimension: Option<i64>,
}

/// Whether every thesis polynomial vanishes on the saturated hypotheses.
pub(crate) fn holds(ideal: &Ideal, thesis: &[Polynomial], limits: &Limits) -> Result<bool, KernelError> {
    for t in thesis {
        if !radical_membership(t, ideal, limits)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The verdict pipeline on prepared hypotheses, optionally with extra
/// hypotheses (used to re-check discovered conditions).
pub(crate) fn decide(p: &Prepared, thesis: &[Polynomial], extra: &[Polynomial], limits: &Limits) -> Result<Decision, KernelError> {
    let ideal = if extra.is_empty() { p.saturated.clone() } else { p.saturated.extended(extra.iter().cloned()) };
    let universe: BTreeSet<Var> = p.model.all_vars().into_iter().collect();
    let dim = if extra.is_empty() { Some(dimension(&ideal, &universe, limits)?) } else { None };
    let expected = p.model.free_vars.len() as i64;
    if holds(&ideal, thesis, limits)? {
        let verdict = if dim.is_some_and(|d| d != expected) { Verdict::TrueOnParts } else { Verdict::True };
        return Ok(Decision { verdict, test: Test::RadicalMembership, conditions: vec![], eliminated: vec![], dimension: dim });
    }
    let with_thesis = ideal.extended(thesis.iter().cloned());
    if with_thesis.is_unit(limits)? {
        return Ok(Decision { verdict: Verdict::False, test: Test::NeverTrue, conditions: vec![], eliminated: vec![], dimension: dim });
    }
    let drop: BTreeSet<Var> = p.model.dep_vars.iter().copied().collect();
    let mut eliminated = Vec::new();
    for e in eliminate(&with_thesis, &drop, limits)? {
        if !ideal.normal_form(&e, limits)?.is_zero() {
            eliminated.push(e);
        }
    }
    if !eliminated.is_empty() {
        return Ok(Decision { verdict: Verdict::False, test: Test::GenericallyFalse, conditions: vec![], eliminated, dimension: dim });
    }
    let mut conditions = Vec::new();
    for g in with_thesis.groebner(limits)? {
        if !ideal.normal_form(g, limits)?.is_zero() {
            conditions.push(g.clone());
        }
    }
    Ok(Decision { verdict: Verdict::TrueOnParts, test: Test::Components, conditions, eliminated: vec![], dimension: dim })
}

fn unknown(names: VarNames, thesis: Vec<Polynomial>, kind: mg_poly::LimitKind, expected: usize, start: Instant) -> ReasoningResult {
    ReasoningResult {
        verdict: Verdict::Unknown,
        conditions: vec![],
        certificate: Certificate {
            test: Test::ResourceLimit(kind),
            names,
            hypotheses: vec![],
            saturated_by: vec![],
            thesis,
            eliminated: vec![],
            dep_vars: vec![],
            dimension: None,
            expected_dimension: expected,
            signs: vec![],
        },
        elapsed: start.elapsed(),
    }
}

/// Decides a predicate over the construction.
pub fn prove(c: &Construction, p: &Predicate, opts: &Options) -> Result<ReasoningResult, ReasonError> {
    let start = Instant::now();
    let limits = opts.limits();
    let (model, thesis) = model_for(c, p, opts.wlog)?;
    let instances = if model.measures.is_empty() { vec![] } else { instances_or_empty(c, opts) };
    let (names, expected) = (model.names.clone(), model.free_vars.len());
    let prepared = match Prepared::new(model, &instances, &limits) {
        Ok(p) => p,
        Err(ReasonError::ResourceLimit(k)) => return Ok(unknown(names, thesis, k, expected, start)),
        Err(e) => return Err(e),
    };
    match decide(&prepared, &thesis, &[], &limits) {
        Ok(d) => {
            let mut certificate = prepared.certificate(d.test, &thesis);
            certificate.eliminated = d.eliminated;
            certificate.dimension = d.dimension;
            Ok(ReasoningResult { verdict: d.verdict, conditions: d.conditions, certificate, elapsed: start.elapsed() })
        }
        Err(KernelError::ResourceLimit(k)) => Ok(unknown(names, thesis, k, expected, start)),
    }
}

/// Proves the statement with the given label.
pub fn prove_statement(c: &Construction, label: &str, opts: &Options) -> Result<ReasoningResult, ReasonError> {
    let s = c.statement(label).ok_or_else(|| ReasonError::UnknownStatement(label.to_string()))?;
    prove(c, &s.predicate, opts)
}

/// Conditions on the free variables under which a statement holds.
#[derive(Clone, Debug)]
pub struct Conditions {
    pub names: VarNames,
    /// Nondegenerate factors that survived re-verification, by degree.
    pub factors: Vec<Polynomial>,
    /// Factors of a nondegeneracy polynomial or failing re-verification.
    pub rejected: Vec<Polynomial>,
}

impl Conditions {
    pub fn formatted(&self) -> Vec<String> {
        self.factors.iter().map(|f| self.names.format(f)).collect()
    }
}

pub(crate) fn sort_polys(polys: &mut [Polynomial], names: &VarNames) {
    polys.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| names.format(a).cmp(&names.format(b))));
}

/// Necessary conditions on the free coordinates for the statement to
/// hold: the dependent variables are eliminated from hypotheses plus
/// thesis and the result is split into irreducible factors.
pub fn discover_conditions(c: &Construction, p: &Predicate, opts: &Options) -> Result<Conditions, ReasonError> {
    let limits = opts.limits();
    let (model, thesis) = model_for(c, p, opts.wlog)?;
    let extra = predicate_nondegeneracy(&model, p);
    let instances = if model.measures.is_empty() { vec![] } else { instances_or_empty(c, opts) };
    let prepared = Prepared::new(model, &instances, &limits)?;
    let ideal = &prepared.saturated;
    let with_thesis = ideal.extended(thesis.iter().cloned());
    let drop: BTreeSet<Var> = prepared.model.dep_vars.iter().copied().collect();
    let mut candidates: Vec<Polynomial> = Vec::new();
    for e in eliminate(&with_thesis, &drop, &limits)? {
        if ideal.normal_form(&e, &limits)?.is_zero() {
            continue;
        }
        for (f, _) in factor_squarefree(&e).factors {
            if !f.is_constant() && !candidates.contains(&f) {
                candidates.push(f);
            }
        }
    }
    let degenerate: Vec<Polynomial> = prepared.model.nondegeneracy.iter().cloned().chain(extra).collect();
    let mut factors = Vec::new();
    let mut rejected = Vec::new();
    for f in candidates {
        if divides_any(&f, &degenerate) {
            rejected.push(f);
            continue;
        }
        let d = decide(&prepared, &thesis, std::slice::from_ref(&f), &limits)?;
        if d.verdict == Verdict::False {
            rejected.push(f);
        } else {
            factors.push(f);
        }
    }
    let names = prepared.model.names.clone();
    sort_polys(&mut factors, &names);
    sort_polys(&mut rejected, &names);
    Ok(Conditions { names, factors, rejected })
}
