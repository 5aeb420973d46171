//! Discovery: enumerate candidate statements, keep those that hold at
//! every filter instance, certify them symbolically and group equivalent
//! ones.

use super::prove::{decide, holds};
use super::{filter_instances, Options, Prepared, ReasonError, Verdict};
use crate::algebra::algebraize;
use crate::construction::{Construction, ObjectKind, Predicate, PredicateKind, SegRef, StepKind};
use crate::instance::{predicate_residual, Instance};
use mg_poly::KernelError;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

/// A group of certified statements of one kind, e.g. a maximal set of
/// collinear points or a class of parallel segments.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscoveredStatement {
    pub kind: PredicateKind,
    /// Canonical key, unique within a result list.
    pub key: String,
    /// Points, segments or objects of the group, sorted.
    pub members: Vec<String>,
    /// The certified statements the group was built from.
    pub statements: Vec<Predicate>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct Discovery {
    pub certified: Vec<DiscoveredStatement>,
    /// Numerically true statements whose certification ran out of resources.
    pub uncertified: Vec<DiscoveredStatement>,
    pub candidates: usize,
    pub survivors: usize,
    pub elapsed: Duration,
}

fn seg(a: &str, b: &str) -> SegRef {
    if a <= b {
        SegRef::Points(a.into(), b.into())
    } else {
        SegRef::Points(b.into(), a.into())
    }
}

fn seg_key(s: &SegRef) -> String {
    match s {
        SegRef::Points(a, b) => format!("seg({a},{b})"),
        SegRef::Object(id) => id.clone(),
    }
}

fn pairs(points: &[&str]) -> Vec<SegRef> {
    let mut out = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            out.push(seg(a, b));
        }
    }
    out
}

fn segment_pair_candidates(kinds: &[PredicateKind], s: &SegRef, r: &SegRef, out: &mut Vec<Predicate>) {
    for k in kinds {
        out.push(match k {
            PredicateKind::Parallel => Predicate::Parallel(s.clone(), r.clone()),
            PredicateKind::Perpendicular => Predicate::Perpendicular(s.clone(), r.clone()),
            PredicateKind::EqualLength => Predicate::EqualLength(s.clone(), r.clone()),
            _ => continue,
        });
    }
}

/// Candidates involving `target`.
fn target_candidates(c: &Construction, target: &str) -> Result<Vec<Predicate>, ReasonError> {
    let kind = c.kind_of(target).ok_or_else(|| ReasonError::UnknownObject(target.to_string()))?;
    let pts = c.visible_points();
    let all_pairs = pairs(&pts);
    let seg_kinds = [PredicateKind::Parallel, PredicateKind::Perpendicular, PredicateKind::EqualLength];
    let mut out = Vec::new();
    match kind {
        ObjectKind::Point => {
            let others: Vec<&str> = pts.iter().copied().filter(|p| *p != target).collect();
            for (i, p) in others.iter().enumerate() {
                out.push(Predicate::Coincide(target.into(), p.to_string()));
                for q in &others[i + 1..] {
                    out.push(Predicate::Collinear(target.into(), p.to_string(), q.to_string()));
                }
            }
            let own: Vec<SegRef> = others.iter().map(|p| seg(target, p)).collect();
            for (i, s) in own.iter().enumerate() {
                for r in &all_pairs {
                    // pairs of target segments are generated once
                    if own[..=i].contains(r) {
                        continue;
                    }
                    segment_pair_candidates(&seg_kinds, s, r, &mut out);
                }
            }
            if c.dimension == 2 {
                for (i, p) in others.iter().enumerate() {
                    for (j, q) in others.iter().enumerate().skip(i + 1) {
                        for r in &others[j + 1..] {
                            out.push(Predicate::Concyclic(target.into(), p.to_string(), q.to_string(), r.to_string()));
                        }
                    }
                }
            }
        }
        ObjectKind::Line | ObjectKind::Segment => {
            let own = SegRef::Object(target.to_string());
            let defining = c.defining_points(target).map(|(a, b)| seg(a, b));
            let kinds: &[PredicateKind] = if kind == ObjectKind::Segment { &seg_kinds } else { &seg_kinds[..2] };
            for r in &all_pairs {
                if Some(r) != defining.as_ref() {
                    segment_pair_candidates(kinds, &own, r, &mut out);
                }
            }
            for p in &pts {
                if !defining_point(c, target, p) {
                    out.push(Predicate::PointOn(p.to_string(), target.into()));
                }
            }
        }
        ObjectKind::Circle => {
            for p in &pts {
                out.push(Predicate::PointOn(p.to_string(), target.into()));
            }
        }
    }
    Ok(out)
}

fn defining_point(c: &Construction, obj: &str, p: &str) -> bool {
    c.defining_points(obj).is_some_and(|(a, b)| a == p || b == p)
}

/// Candidates of one kind over the whole figure.
fn kind_candidates(c: &Construction, kind: PredicateKind, cap: usize) -> Result<Vec<Predicate>, ReasonError> {
    let pts = c.visible_points();
    let n = pts.len();
    let all_pairs = pairs(&pts);
    let m = all_pairs.len();
    let choose = |n: usize, k: usize| -> usize { (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1)) };
    let count = match kind {
        PredicateKind::Collinear => choose(n, 3),
        PredicateKind::Parallel | PredicateKind::Perpendicular | PredicateKind::EqualLength => choose(m, 2),
        PredicateKind::Concyclic if c.dimension == 2 => choose(n, 4),
        PredicateKind::Concyclic => 0,
        PredicateKind::Coincide => choose(n, 2),
        PredicateKind::MidpointOf => n * choose(n.saturating_sub(1), 2),
        PredicateKind::PointOn => n * c.steps.iter().filter(|s| s.object_kind() != ObjectKind::Point).count(),
        PredicateKind::Equal => return Err(ReasonError::UnsupportedKind(kind.name().into())),
    };
    if count > cap {
        return Err(ReasonError::CandidateOverflow { count, cap });
    }
    let mut out = Vec::new();
    match kind {
        PredicateKind::Collinear | PredicateKind::Concyclic | PredicateKind::Coincide => {
            let k = match kind {
                PredicateKind::Collinear => 3,
                PredicateKind::Concyclic => 4,
                _ => 2,
            };
            if kind == PredicateKind::Concyclic && c.dimension != 2 {
                return Ok(out);
            }
            for combo in combinations(n, k) {
                let p: Vec<String> = combo.iter().map(|&i| pts[i].to_string()).collect();
                out.push(match kind {
                    PredicateKind::Collinear => Predicate::Collinear(p[0].clone(), p[1].clone(), p[2].clone()),
                    PredicateKind::Concyclic => Predicate::Concyclic(p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()),
                    _ => Predicate::Coincide(p[0].clone(), p[1].clone()),
                });
            }
        }
        PredicateKind::Parallel | PredicateKind::Perpendicular | PredicateKind::EqualLength => {
            for (i, s) in all_pairs.iter().enumerate() {
                for r in &all_pairs[i + 1..] {
                    segment_pair_candidates(&[kind], s, r, &mut out);
                }
            }
        }
        PredicateKind::MidpointOf => {
            for mid in &pts {
                let rest: Vec<&str> = pts.iter().copied().filter(|p| p != mid).collect();
                for combo in combinations(rest.len(), 2) {
                    out.push(Predicate::MidpointOf(mid.to_string(), rest[combo[0]].into(), rest[combo[1]].into()));
                }
            }
        }
        PredicateKind::PointOn => {
            for s in c.steps.iter().filter(|s| s.object_kind() != ObjectKind::Point && !s.id.contains("__")) {
                for p in &pts {
                    if !defining_point(c, &s.id, p) && !matches!(&c.step(p).map(|x| &x.kind), Some(StepKind::PointOnLine(l) | StepKind::PointOnCircle(l)) if *l == s.id) {
                        out.push(Predicate::PointOn(p.to_string(), s.id.clone()));
                    }
                }
            }
        }
        PredicateKind::Equal => unreachable!("rejected above"),
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Points named by a predicate.
fn points_of(p: &Predicate) -> Vec<&str> {
    fn seg_pts(s: &SegRef) -> Vec<&str> {
        match s {
            SegRef::Points(a, b) => vec![a.as_str(), b.as_str()],
            SegRef::Object(_) => vec![],
        }
    }
    match p {
        Predicate::Collinear(a, b, c) | Predicate::MidpointOf(a, b, c) => vec![a, b, c],
        Predicate::Concyclic(a, b, c, d) => vec![a, b, c, d],
        Predicate::Parallel(s, t) | Predicate::Perpendicular(s, t) | Predicate::EqualLength(s, t) => {
            seg_pts(s).into_iter().chain(seg_pts(t)).collect()
        }
        Predicate::PointOn(a, _) | Predicate::Coincide(a, _) => vec![a],
        Predicate::Equal(..) => vec![],
    }
}

/// Whether a candidate is vacuous at the instance: two of its points
/// coincide, or a parallel pair lies on one line.
fn vacuous(p: &Predicate, inst: &Instance, tol: f64) -> bool {
    if matches!(p, Predicate::Coincide(..)) {
        return false;
    }
    let pts = points_of(p);
    let scale = inst.scale();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if a != b {
                let (pa, pb) = (inst.point_f64(a), inst.point_f64(b));
                let d: f64 = pa.iter().zip(&pb).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                if d <= tol * scale {
                    return true;
                }
            }
        }
    }
    if let Predicate::Parallel(SegRef::Points(a, b), SegRef::Points(c, d)) = p {
        let on = |x: &String| predicate_residual(&Predicate::Collinear(a.clone(), b.clone(), x.clone()), inst) <= tol;
        if (c == a || c == b || on(c)) && (d == a || d == b || on(d)) {
            return true;
        }
    }
    false
}

enum Outcome {
    Certified(Verdict),
    Rejected,
    Uncertified,
}

fn run(c: &Construction, candidates: Vec<Predicate>, opts: &Options) -> Result<Discovery, ReasonError> {
    let start = Instant::now();
    let limits = opts.limits();
    let instances = filter_instances(c, &opts.filter_seed_list())?;
    let count = candidates.len();
    let survivors: Vec<Predicate> = candidates
        .into_iter()
        .filter(|p| {
            !instances.first().is_some_and(|i| vacuous(p, i, opts.tolerance))
                && instances.iter().all(|i| predicate_residual(p, i) <= opts.tolerance)
        })
        .collect();
    let n_survivors = survivors.len();
    let mut certified = Vec::new();
    let mut uncertified = Vec::new();
    if !survivors.is_empty() {
        let prepared = Prepared::new(algebraize(c, opts.wlog), &[], &limits)?;
        // the shared basis is computed once before the parallel section
        prepared.saturated.groebner(&limits)?;
        let outcomes: Vec<Outcome> = survivors
            .par_iter()
            .map(|p| {
                let thesis = match prepared.model.translate_predicate(p) {
                    Ok(t) => t,
                    Err(_) => return Outcome::Rejected,
                };
                let result = holds(&prepared.saturated, &thesis, &limits).and_then(|ok| {
                    if ok {
                        Ok(Verdict::True)
                    } else {
                        decide(&prepared, &thesis, &[], &limits).map(|d| d.verdict)
                    }
                });
                match result {
                    Ok(Verdict::True) => Outcome::Certified(Verdict::True),
                    Ok(Verdict::TrueOnParts) => Outcome::Certified(Verdict::TrueOnParts),
                    Ok(_) => Outcome::Rejected,
                    Err(KernelError::ResourceLimit(_)) => Outcome::Uncertified,
                }
            })
            .collect();
        for (p, o) in survivors.into_iter().zip(outcomes) {
            match o {
                Outcome::Certified(v) => certified.push((p, v)),
                Outcome::Uncertified => uncertified.push((p, Verdict::Unknown)),
                Outcome::Rejected => {}
            }
        }
    }
    Ok(Discovery {
        certified: group(certified),
        uncertified: group(uncertified),
        candidates: count,
        survivors: n_survivors,
        elapsed: start.elapsed(),
    })
}

/// All statements involving `target` that hold in the figure.
pub fn discover(c: &Construction, target: &str, opts: &Options) -> Result<Discovery, ReasonError> {
    let candidates = target_candidates(c, target)?;
    if candidates.len() > opts.candidate_cap {
        return Err(ReasonError::CandidateOverflow { count: candidates.len(), cap: opts.candidate_cap });
    }
    run(c, candidates, opts)
}

/// All statements of one kind that hold in the figure.
pub fn discover_all(c: &Construction, kind: PredicateKind, opts: &Options) -> Result<Discovery, ReasonError> {
    let candidates = kind_candidates(c, kind, opts.candidate_cap)?;
    run(c, candidates, opts)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let r = self.find(self.parent[i]);
            self.parent[i] = r;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups statements: collinear sets sharing two points and concyclic
/// sets sharing three are merged, parallel, equal-length and coincidence
/// statements form equivalence classes, the rest stay single.
fn group(found: Vec<(Predicate, Verdict)>) -> Vec<DiscoveredStatement> {
    let mut by_kind: BTreeMap<PredicateKind, Vec<(Predicate, Verdict)>> = BTreeMap::new();
    for (p, v) in found {
        by_kind.entry(p.kind()).or_default().push((p, v));
    }
    let mut out = Vec::new();
    for (kind, items) in by_kind {
        match kind {
            PredicateKind::Collinear | PredicateKind::Concyclic => {
                let overlap = if kind == PredicateKind::Collinear { 2 } else { 3 };
                let mut sets: Vec<(BTreeSet<String>, Vec<Predicate>, Verdict)> = items
                    .into_iter()
                    .map(|(p, v)| (points_of(&p).into_iter().map(String::from).collect(), vec![p], v))
                    .collect();
                loop {
                    let mut merged = false;
                    'outer: for i in 0..sets.len() {
                        for j in i + 1..sets.len() {
                            if sets[i].0.intersection(&sets[j].0).count() >= overlap {
                                let (s, ps, v) = sets.remove(j);
                                sets[i].0.extend(s);
                                sets[i].1.extend(ps);
                                sets[i].2 = combine(sets[i].2, v);
                                merged = true;
                                break 'outer;
                            }
                        }
                    }
                    if !merged {
                        break;
                    }
                }
                for (members, statements, verdict) in sets {
                    let members: Vec<String> = members.into_iter().collect();
                    let key = format!("{}:{}", kind.name(), members.join(","));
                    out.push(DiscoveredStatement { kind, key, members, statements, verdict });
                }
            }
            PredicateKind::Parallel | PredicateKind::EqualLength | PredicateKind::Coincide => {
                let endpoints = |p: &Predicate| -> (String, String) {
                    match p {
                        Predicate::Parallel(s, t) | Predicate::EqualLength(s, t) => (seg_key(s), seg_key(t)),
                        Predicate::Coincide(a, b) => (a.clone(), b.clone()),
                        _ => unreachable!("grouped by kind"),
                    }
                };
                let mut ids: BTreeMap<String, usize> = BTreeMap::new();
                for (p, _) in &items {
                    let (a, b) = endpoints(p);
                    for x in [a, b] {
                        let n = ids.len();
                        ids.entry(x).or_insert(n);
                    }
                }
                let mut uf = UnionFind { parent: (0..ids.len()).collect() };
                for (p, _) in &items {
                    let (a, b) = endpoints(p);
                    uf.union(ids[&a], ids[&b]);
                }
                let mut classes: BTreeMap<usize, (BTreeSet<String>, Vec<Predicate>, Verdict)> = BTreeMap::new();
                for (p, v) in items {
                    let (a, b) = endpoints(&p);
                    let root = uf.find(ids[&a]);
                    let e = classes.entry(root).or_insert_with(|| (BTreeSet::new(), vec![], Verdict::True));
                    e.0.insert(a);
                    e.0.insert(b);
                    e.1.push(p);
                    e.2 = combine(e.2, v);
                }
                for (_, (members, statements, verdict)) in classes {
                    let members: Vec<String> = members.into_iter().collect();
                    let key = format!("{}:{}", kind.name(), members.join("|"));
                    out.push(DiscoveredStatement { kind, key, members, statements, verdict });
                }
            }
            _ => {
                for (p, verdict) in items {
                    let members: Vec<String> = match &p {
                        Predicate::Perpendicular(s, t) => {
                            let mut v = vec![seg_key(s), seg_key(t)];
                            v.sort();
                            v
                        }
                        Predicate::PointOn(a, o) => vec![a.clone(), o.clone()],
                        Predicate::MidpointOf(m, a, b) => vec![m.clone(), a.clone(), b.clone()],
                        _ => points_of(&p).into_iter().map(String::from).collect(),
                    };
                    let key = format!("{}:{}", kind.name(), members.join("|"));
                    out.push(DiscoveredStatement { kind, key, members, statements: vec![p], verdict });
                }
            }
        }
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out.dedup_by(|a, b| a.key == b.key);
    out
}

fn combine(a: Verdict, b: Verdict) -> Verdict {
    if a == Verdict::True && b == Verdict::True {
        Verdict::True
    } else if a == Verdict::Unknown || b == Verdict::Unknown {
        Verdict::Unknown
    } else {
        Verdict::TrueOnParts
    }
}
