//! Loci of free points and envelopes of one-parameter families.

use super::{instances_or_empty, model_for, predicate_nondegeneracy, divides_any, Options, Prepared, ReasonError};
use crate::algebra::algebraize;
use crate::construction::{Construction, ObjectKind, Predicate, StepKind};
use mg_poly::{eliminate, exact_div, factor_squarefree, radical_membership, Ideal, Limits, MonomialOrder, Polynomial, Var, VarNames};
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFactor {
    pub polynomial: Polynomial,
    pub multiplicity: u32,
    /// The factor lies where the construction degenerates.
    pub degenerate: bool,
}

/// A plane algebraic curve given by its irreducible factors, in the
/// variables `x`, `y` (and `z` for spatial loci) followed by any free
/// variables left in the problem.
#[derive(Clone, Debug)]
pub struct Curve {
    pub names: VarNames,
    pub factors: Vec<CurveFactor>,
    /// False when factoring hit its search bounds.
    pub complete: bool,
    pub elapsed: Duration,
}

impl Curve {
    pub fn format(&self, p: &Polynomial) -> String {
        self.names.format(p)
    }

    /// Nondegenerate factors.
    pub fn components(&self) -> Vec<&Polynomial> {
        self.factors.iter().filter(|f| !f.degenerate).map(|f| &f.polynomial).collect()
    }

    /// Product of the nondegenerate factors.
    pub fn equation(&self) -> Polynomial {
        self.components().into_iter().fold(Polynomial::one(&MonomialOrder::DegRevLex), |acc, f| &acc * f)
    }
}

/// Factors the generators of an elimination ideal and flags the factors
/// on which some nondegeneracy polynomial vanishes identically.
fn factor_curve(
    generators: &[Polynomial],
    base: &Ideal,
    nondegenerate: &[Polynomial],
    keep: &[Var],
    required: &[Var],
    display: Vec<String>,
    limits: &Limits,
) -> Result<(Vec<CurveFactor>, bool, VarNames), ReasonError> {
    let mut found: Vec<(Polynomial, u32)> = Vec::new();
    let mut complete = true;
    for g in generators {
        let fz = factor_squarefree(g);
        complete &= fz.complete;
        for (f, m) in fz.factors {
            if f.is_constant() {
                continue;
            }
            match found.iter_mut().find(|(h, _)| *h == f) {
                Some(e) => e.1 = e.1.max(m),
                None => found.push((f, m)),
            }
        }
    }
    let mut out = Vec::new();
    for (f, multiplicity) in found {
        let mut degenerate = !required.iter().any(|v| f.contains_var(*v)) || divides_any(&f, nondegenerate);
        if !degenerate {
            let on_f = base.extended([f.clone()]);
            for g in nondegenerate {
                if radical_membership(g, &on_f, limits)? {
                    degenerate = true;
                    break;
                }
            }
        }
        out.push(CurveFactor { polynomial: f, multiplicity, degenerate });
    }
    // rename the kept variables to 0, 1, ...
    let index: BTreeMap<Var, u32> = keep.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
    let mut names = VarNames::new();
    for n in &display {
        names.intern(n);
    }
    for f in &mut out {
        f.polynomial = f.polynomial.map_vars(|v| Var(index[&v])).with_order(&MonomialOrder::DegRevLex);
    }
    out.sort_by(|a, b| {
        a.degenerate
            .cmp(&b.degenerate)
            .then(a.polynomial.total_degree().cmp(&b.polynomial.total_degree()))
            .then_with(|| names.format(&a.polynomial).cmp(&names.format(&b.polynomial)))
    });
    Ok((out, complete, names))
}

const AXES: [&str; 3] = ["x", "y", "z"];

/// The positions of a free point at which a statement holds: every other
/// variable is eliminated from hypotheses plus thesis.
pub fn locus_equation(c: &Construction, p: &Predicate, tracer: &str, opts: &Options) -> Result<Curve, ReasonError> {
    let start = Instant::now();
    if !matches!(c.step(tracer).map(|s| &s.kind), Some(StepKind::FreePoint { at: None })) {
        return Err(ReasonError::NotTracer(tracer.to_string()));
    }
    let limits = opts.limits();
    let (model, thesis) = model_for(c, p, false)?;
    let extra = predicate_nondegeneracy(&model, p);
    let instances = if model.measures.is_empty() { vec![] } else { instances_or_empty(c, opts) };
    let prepared = Prepared::new(model, &instances, &limits)?;
    let model = &prepared.model;
    let keep: Vec<Var> = AXES[..c.dimension].iter().map(|a| model.names.get(&format!("{tracer}_{a}")).expect("tracer variables")).collect();
    let drop: BTreeSet<Var> = model.all_vars().into_iter().filter(|v| !keep.contains(v)).collect();
    let with_thesis = prepared.saturated.extended(thesis);
    let elim = eliminate(&with_thesis, &drop, &limits)?;
    if elim.iter().any(Polynomial::is_constant) {
        return Err(ReasonError::EmptyLocus);
    }
    if elim.is_empty() {
        return Err(ReasonError::TrivialLocus);
    }
    let nondegenerate: Vec<Polynomial> =
        model.nondegeneracy.iter().cloned().chain(extra).chain(prepared.factors.iter().cloned()).filter(|g| !g.is_constant()).collect();
    let display = AXES[..c.dimension].iter().map(|s| s.to_string()).collect();
    let (factors, complete, names) = factor_curve(&elim, &with_thesis, &nondegenerate, &keep, &keep, display, &limits)?;
    Ok(Curve { names, factors, complete, elapsed: start.elapsed() })
}

/// Fraction-free (Bareiss) determinant.
pub(crate) fn determinant(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let o = MonomialOrder::DegRevLex;
    let n = m.len();
    if n == 0 {
        return Polynomial::one(&o);
    }
    let mut negate = false;
    let mut prev = Polynomial::one(&o);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Polynomial::zero(&o);
            };
            m.swap(k, i);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = exact_div(&num, &prev).expect("Bareiss quotients are exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Envelope of the lines or circles `curve` as the moving point
/// `moving` (or the only free variable) runs along its path.
pub fn envelope(c: &Construction, curve: &str, moving: Option<&str>, opts: &Options) -> Result<Curve, ReasonError> {
    let start = Instant::now();
    if c.dimension != 2 {
        return Err(ReasonError::SpatialEnvelope);
    }
    let kind = c.kind_of(curve).ok_or_else(|| ReasonError::UnknownObject(curve.to_string()))?;
    if kind == ObjectKind::Point {
        return Err(ReasonError::NotCurve(curve.to_string()));
    }
    let limits = opts.limits();
    let mut model = algebraize(c, false);
    let t = match moving {
        Some(p) => model.param(p).ok_or_else(|| ReasonError::NoParameter(format!("`{p}` is not a point on a line or circle")))?,
        None => match model.free_vars.as_slice() {
            [v] => *v,
            vs => return Err(ReasonError::NoParameter(format!("the family has {} free variables; name the moving point", vs.len()))),
        },
    };
    let o = MonomialOrder::DegRevLex;
    let x = Polynomial::var(model.names.intern("x"), &o);
    let y = Polynomial::var(model.names.intern("y"), &o);
    let family = if kind == ObjectKind::Circle {
        let (center, r2) = model.circle(curve);
        let (dx, dy) = (&x - &center[0], &y - &center[1]);
        &dx * &dx + &dy * &dy - r2
    } else {
        let (base, dir) = model.line(curve);
        (&x - &base[0]) * dir[1].clone() - (&y - &base[1]) * dir[0].clone()
    };
    let unknowns: Vec<Var> = model.dep_vars.iter().copied().chain([t]).collect();
    let equations: Vec<Polynomial> = model.hypotheses.iter().cloned().chain([family.clone()]).collect();
    if equations.len() != unknowns.len() {
        return Err(ReasonError::NoParameter(format!(
            "the family has {} equations in {} unknowns",
            equations.len(),
            unknowns.len()
        )));
    }
    let jacobian = determinant(equations.iter().map(|e| unknowns.iter().map(|u| e.derivative(*u)).collect()).collect());
    let (xv, yv) = (model.names.get("x").expect("interned"), model.names.get("y").expect("interned"));
    let nondegenerate: Vec<Polynomial> = model.nondegeneracy.iter().filter(|&g| !g.is_constant()).cloned().collect();
    let prepared = Prepared::new(model, &[], &limits)?;
    let system = prepared.saturated.extended([family, jacobian]);
    let drop: BTreeSet<Var> = unknowns.iter().copied().collect();
    let elim = eliminate(&system, &drop, &limits)?;
    if elim.is_empty() || elim.iter().any(Polynomial::is_constant) {
        return Err(ReasonError::NoEnvelope);
    }
    let mut keep = vec![xv, yv];
    let mut display = vec!["x".to_string(), "y".to_string()];
    for v in prepared.model.all_vars() {
        if !drop.contains(&v) && !keep.contains(&v) {
            keep.push(v);
            display.push(prepared.model.var_name(v));
        }
    }
    let nondegenerate: Vec<Polynomial> = nondegenerate.into_iter().chain(prepared.factors.iter().cloned()).collect();
    let (factors, complete, names) = factor_curve(&elim, &system, &nondegenerate, &keep, &[xv, yv], display, &limits)?;
    Ok(Curve { names, factors, complete, elapsed: start.elapsed() })
}
