//! Relations between two measures: certified polynomial relations by
//! elimination, and conjectured inequalities by numeric optimization.

use super::recognize::{recognize_quadratic, Recognized};
use super::{filter_instances, Options, Prepared, ReasonError};
use crate::algebra::algebraize;
use crate::construction::{Construction, MeasureExpr};
use crate::instance::{evaluate, measure_value, sample_instance, FreeValue, Instance};
use crate::Scalar;
use mg_poly::{eliminate, factor_squarefree, MonomialOrder, Polynomial, Rat, Var, VarNames};
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    /// `e1 = ratio * e2`, certified.
    Equality,
    /// A certified polynomial relation between `w1 = e1` and `w2 = e2`.
    Polynomial,
    /// Numeric bounds on `e1 / e2`, never certified.
    Inequality,
    /// Elimination produced relations, but none holds at the numeric
    /// instances with non-negative lengths.
    Unknown,
}

impl RelationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::Equality => "equality",
            RelationKind::Polynomial => "polynomial",
            RelationKind::Inequality => "conjectured_inequality",
            RelationKind::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `e1 <= constant * e2`
    AtMost,
    /// `e1 >= constant * e2`
    AtLeast,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::AtMost => "at_most",
            Direction::AtLeast => "at_least",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Bound {
    pub direction: Direction,
    /// Extremal value of `e1 / e2` found.
    pub constant: f64,
    /// The constant as an algebraic number, when recognized.
    pub recognized: Option<Recognized>,
    /// Point coordinates of the sample attaining the extremum.
    pub witness: BTreeMap<String, Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub kind: RelationKind,
    pub certified: bool,
    /// For equalities: `e1 = ratio * e2`.
    pub ratio: Option<Rat>,
    /// The selected relation in `w1`, `w2`.
    pub polynomial: Option<Polynomial>,
    /// Every irreducible factor of the eliminated relations.
    pub factors: Vec<Polynomial>,
    pub names: VarNames,
    pub bounds: Vec<Bound>,
    pub samples: usize,
    pub elapsed: Duration,
}

impl Relation {
    pub fn format(&self, p: &Polynomial) -> String {
        self.names.format(p)
    }
}

fn measure_names() -> VarNames {
    let mut names = VarNames::new();
    names.intern("w1");
    names.intern("w2");
    names
}

/// Relates `e1` and `e2` by eliminating everything but their variables.
pub fn relate(c: &Construction, e1: &MeasureExpr, e2: &MeasureExpr, opts: &Options) -> Result<Relation, ReasonError> {
    let start = Instant::now();
    let limits = opts.limits();
    let (model, ws) = algebraize(c, opts.wlog).attach_measures(&[e1.clone(), e2.clone()])?;
    let instances = filter_instances(c, &opts.filter_seed_list())?;
    let prepared = Prepared::new(model, &instances, &limits)?;
    let (w1, w2) = (ws[0].var, ws[1].var);
    let drop: BTreeSet<Var> = prepared.model.all_vars().into_iter().filter(|v| *v != w1 && *v != w2).collect();
    let elim = eliminate(&prepared.saturated, &drop, &limits)?;
    if elim.is_empty() {
        return Err(ReasonError::NoRelation);
    }
    let rename = |p: &Polynomial| p.map_vars(|v| if v == w1 { Var(0) } else { Var(1) }).with_order(&MonomialOrder::DegRevLex);
    let mut factors: Vec<Polynomial> = Vec::new();
    for g in &elim {
        for (f, _) in factor_squarefree(g).factors {
            let f = rename(&f);
            if !f.is_constant() && !factors.contains(&f) {
                factors.push(f);
            }
        }
    }
    let points: Vec<(f64, f64)> = instances
        .iter()
        .map(|i| (measure_value(e1, i), measure_value(e2, i)))
        .collect();
    let vanishes = |f: &Polynomial| {
        points.iter().all(|&(a, b)| {
            let at = |v: Var| if v.0 == 0 { a } else { b };
            f.eval_f64(at).abs() <= 1e-8 * f.eval_abs_f64(at).max(f64::MIN_POSITIVE)
        })
    };
    let mut survivors: Vec<&Polynomial> = factors.iter().filter(|f| vanishes(f)).collect();
    survivors.sort_by_key(|f| (f.vars().len() != 2, f.total_degree(), f.len()));
    let names = measure_names();
    let mut rel = Relation {
        kind: RelationKind::Unknown,
        certified: false,
        ratio: None,
        polynomial: None,
        factors: factors.clone(),
        names,
        bounds: vec![],
        samples: instances.len(),
        elapsed: Duration::ZERO,
    };
    if let Some(f) = survivors.first() {
        let f = (*f).clone();
        rel.certified = true;
        rel.kind = RelationKind::Polynomial;
        if f.total_degree() == 1 && f.vars().len() == 2 && f.constant_value().is_none() && f.len() == 2 {
            let a = f.coefficient(&mg_poly::Monomial::var(Var(0)));
            let b = f.coefficient(&mg_poly::Monomial::var(Var(1)));
            rel.kind = RelationKind::Equality;
            rel.ratio = Some(-(&b / &a));
        }
        rel.polynomial = Some(f);
    }
    rel.elapsed = start.elapsed();
    Ok(rel)
}

/// Free values flattened to a parameter vector.
struct Params {
    keys: Vec<(String, usize)>,
    template: BTreeMap<String, FreeValue>,
}

impl Params {
    fn new(free: &BTreeMap<String, FreeValue>) -> (Params, Vec<f64>) {
        let mut keys = Vec::new();
        let mut x = Vec::new();
        for (id, v) in free {
            match v {
                FreeValue::Point(p) => {
                    for (i, s) in p.iter().enumerate() {
                        keys.push((id.clone(), i));
                        x.push(s.to_f64());
                    }
                }
                FreeValue::LineParam(t) => {
                    keys.push((id.clone(), 0));
                    x.push(t.to_f64());
                }
                FreeValue::CircleParam { u, .. } => {
                    keys.push((id.clone(), 0));
                    x.push(u.to_f64());
                }
            }
        }
        (Params { keys, template: free.clone() }, x)
    }

    fn free(&self, x: &[f64]) -> BTreeMap<String, FreeValue> {
        let mut free = self.template.clone();
        for ((id, i), v) in self.keys.iter().zip(x) {
            match free.get_mut(id).expect("known key") {
                FreeValue::Point(p) => p[*i] = Scalar::Float(*v),
                FreeValue::LineParam(t) => *t = Scalar::Float(*v),
                FreeValue::CircleParam { u, .. } => *u = Scalar::Float(v.clamp(-1.0, 1.0)),
            }
        }
        free
    }
}

fn ratio_at(c: &Construction, free: BTreeMap<String, FreeValue>, e1: &MeasureExpr, e2: &MeasureExpr) -> Option<(f64, Instance)> {
    let objects = evaluate(c, &free).ok()?;
    let inst = Instance { seed: 0, dimension: c.dimension, objects, free };
    let (a, b) = (measure_value(e1, &inst), measure_value(e2, &inst));
    let r = a / b;
    (r.is_finite() && b != 0.0).then_some((r, inst))
}

/// Coordinate-wise golden-section ascent of `sign * e1/e2`.
fn refine(c: &Construction, start: &Instance, e1: &MeasureExpr, e2: &MeasureExpr, sign: f64, sweeps: usize) -> (f64, Instance) {
    let (params, mut x) = Params::new(&start.free);
    let score = |x: &[f64]| ratio_at(c, params.free(x), e1, e2).map_or(f64::NEG_INFINITY, |(r, _)| sign * r);
    let mut best = score(&x);
    let mut h = 1.0;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..sweeps {
        for k in 0..x.len() {
            let (mut lo, mut hi) = (x[k] - h, x[k] + h);
            let at = |x: &mut Vec<f64>, v: f64| {
                let old = x[k];
                x[k] = v;
                let s = score(x);
                x[k] = old;
                s
            };
            let mut a = hi - phi * (hi - lo);
            let mut b = lo + phi * (hi - lo);
            let (mut fa, mut fb) = (at(&mut x, a), at(&mut x, b));
            for _ in 0..40 {
                if fa >= fb {
                    hi = b;
                    b = a;
                    fb = fa;
                    a = hi - phi * (hi - lo);
                    fa = at(&mut x, a);
                } else {
                    lo = a;
                    a = b;
                    fa = fb;
                    b = lo + phi * (hi - lo);
                    fb = at(&mut x, b);
                }
            }
            let (cand, fc) = if fa >= fb { (a, fa) } else { (b, fb) };
            if fc > best {
                best = fc;
                x[k] = cand;
            }
        }
        h *= 0.7;
    }
    let (_, inst) = ratio_at(c, params.free(&x), e1, e2).unwrap_or_else(|| (0.0, start.clone()));
    (sign * best, inst)
}

/// Above this the ratio is taken to be unbounded.
const UNBOUNDED: f64 = 1e6;

/// Compares `e1` with `e2`: a certified equality when [`relate`] finds
/// one, otherwise numeric bounds on `e1 / e2` with recognized constants.
pub fn compare(c: &Construction, e1: &MeasureExpr, e2: &MeasureExpr, opts: &Options) -> Result<Relation, ReasonError> {
    let start = Instant::now();
    let certified = match relate(c, e1, e2, opts) {
        Ok(r) if r.kind == RelationKind::Equality => return Ok(r),
        Ok(r) => Some(r),
        Err(ReasonError::NoRelation | ReasonError::ResourceLimit(_) | ReasonError::Contradictory) => None,
        Err(e) => return Err(e),
    };
    let mut best_max: Option<(f64, Instance)> = None;
    let mut best_min: Option<(f64, Instance)> = None;
    let mut ratios = Vec::new();
    for i in 0..opts.compare_samples as u64 {
        let Ok(inst) = sample_instance(c, opts.seed.wrapping_add(1_000_003).wrapping_add(i), &BTreeMap::new()) else { continue };
        let (a, b) = (measure_value(e1, &inst), measure_value(e2, &inst));
        let r = a / b;
        if !r.is_finite() || b == 0.0 {
            continue;
        }
        ratios.push(r.abs());
        if best_max.as_ref().is_none_or(|(m, _)| r > *m) {
            best_max = Some((r, inst.clone()));
        }
        if best_min.as_ref().is_none_or(|(m, _)| r < *m) {
            best_min = Some((r, inst));
        }
    }
    let mut bounds = Vec::new();
    if let (Some((_, imax)), Some((_, imin))) = (best_max, best_min) {
        let (max, wmax) = refine(c, &imax, e1, e2, 1.0, opts.refine_sweeps);
        let (min, wmin) = refine(c, &imin, e1, e2, -1.0, opts.refine_sweeps);
        let bounded = max.abs() < UNBOUNDED;
        if bounded {
            bounds.push(Bound {
                direction: Direction::AtMost,
                constant: max,
                recognized: recognize_quadratic(max, 1000, 1e-9),
                witness: wmax.coordinates(),
            });
        }
        ratios.sort_by(f64::total_cmp);
        let typical = ratios[ratios.len() / 2];
        let trivial = min.abs() < 1e-6 * typical;
        if !trivial && min.abs() < UNBOUNDED {
            bounds.push(Bound {
                direction: Direction::AtLeast,
                constant: min,
                recognized: recognize_quadratic(min, 1000, 1e-9),
                witness: wmin.coordinates(),
            });
        }
    }
    let (polynomial, factors) = match certified {
        Some(r) if r.certified => (r.polynomial, r.factors),
        Some(r) => (None, r.factors),
        None => (None, vec![]),
    };
    Ok(Relation {
        kind: RelationKind::Inequality,
        certified: false,
        ratio: None,
        polynomial,
        factors,
        names: measure_names(),
        bounds,
        samples: ratios.len(),
        elapsed: start.elapsed(),
    })
}

