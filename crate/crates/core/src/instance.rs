//! Numeric instances of constructions and the numeric reading of
//! predicates and measures.
//!
//! Free points are drawn from the grid `{k/16 : -160 <= k <= 160}`, so every
//! step with a rational closed form is evaluated exactly; only steps that
//! take square roots (line-circle intersections, points on circles) fall
//! back to floats.

use crate::construction::{Construction, MeasureExpr, Predicate, Primitive, SegRef, StepKind};
use crate::Scalar;
use mg_poly::Rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

pub type Vector = Vec<Scalar>;

/// Reseeds allowed per random step before giving up.
const MAX_RESEEDS: u32 = 32;
/// Relative size below which a float determinant counts as zero.
const DEGENERATE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub enum Geometry {
    Point(Vector),
    /// Lines and segments: the points `base + t*dir`.
    Line { base: Vector, dir: Vector },
    Circle { center: Vector, radius_sq: Scalar },
}

/// Values chosen for the random steps of a construction.
#[derive(Clone, Debug, PartialEq)]
pub enum FreeValue {
    Point(Vector),
    /// Position `base + t*dir` on a line.
    LineParam(Scalar),
    /// Position `center + r*(u, ±sqrt(1 - u^2))` on a circle.
    CircleParam { u: Scalar, upper: bool },
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub dimension: usize,
    pub objects: BTreeMap<String, Geometry>,
    pub free: BTreeMap<String, FreeValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("unsatisfiable instance: step `{0}` degenerates for every sampled position")]
    Unsatisfiable(String),
    #[error("`{0}` is not a free point and cannot be pinned")]
    NotFree(String),
    #[error("pinned point `{0}` needs {1} coordinates")]
    PinArity(String, usize),
}

/// The step at which evaluation broke down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degenerate(pub String);

impl Instance {
    pub fn point(&self, id: &str) -> &[Scalar] {
        match self.objects.get(id) {
            Some(Geometry::Point(p)) => p,
            _ => panic!("`{id}` is not a point of the instance"),
        }
    }

    pub fn point_f64(&self, id: &str) -> Vec<f64> {
        self.point(id).iter().map(Scalar::to_f64).collect()
    }

    /// Float coordinates of every point.
    pub fn coordinates(&self) -> BTreeMap<String, Vec<f64>> {
        self.objects
            .iter()
            .filter_map(|(id, g)| match g {
                Geometry::Point(p) => Some((id.clone(), p.iter().map(Scalar::to_f64).collect())),
                _ => None,
            })
            .collect()
    }

    /// Base point and direction of a line or segment.
    pub fn line_f64(&self, id: &str) -> (Vec<f64>, Vec<f64>) {
        match self.objects.get(id) {
            Some(Geometry::Line { base, dir }) => (to_f64(base), to_f64(dir)),
            _ => panic!("`{id}` is not a line of the instance"),
        }
    }

    /// Largest distance of a point from the centroid of all points; the
    /// length scale used to normalize coincidence residuals.
    pub fn scale(&self) -> f64 {
        let pts: Vec<Vec<f64>> = self.coordinates().into_values().collect();
        if pts.is_empty() {
            return 1.0;
        }
        let n = pts.len() as f64;
        let centroid: Vec<f64> = (0..self.dimension).map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / n).collect();
        let s = pts.iter().map(|p| norm(&sub(p, &centroid))).fold(0.0, f64::max);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }
}

fn to_f64(v: &[Scalar]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for the random values of step `id`, attempt `attempt`.
fn rng_for(seed: u64, id: &str, attempt: u32) -> ChaCha8Rng {
    let mut h = mix(seed);
    for b in id.bytes() {
        h = mix(h ^ u64::from(b));
    }
    ChaCha8Rng::seed_from_u64(mix(h ^ (u64::from(attempt) << 32)))
}

fn grid(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rat {
    Rat::new(rng.gen_range(lo..=hi), 16)
}

/// Draws the random values of one step.
fn draw(c: &Construction, id: &str, kind: &StepKind, rng: &mut ChaCha8Rng) -> FreeValue {
    match kind {
        StepKind::FreePoint { .. } => FreeValue::Point((0..c.dimension).map(|_| Scalar::Exact(grid(rng, -160, 160))).collect()),
        StepKind::PointOnLine(l) => {
            let t = if matches!(c.step(l).map(|s| &s.kind), Some(StepKind::Segment(..))) {
                grid(rng, 1, 15)
            } else {
                loop {
                    let t = grid(rng, -32, 48);
                    if !t.is_zero() && !t.is_one() {
                        break t;
                    }
                }
            };
            FreeValue::LineParam(Scalar::Exact(t))
        }
        StepKind::PointOnCircle(_) => FreeValue::CircleParam { u: Scalar::Exact(grid(rng, -15, 15)), upper: rng.gen() },
        _ => unreachable!("`{id}` is not a random step"),
    }
}

/// Samples an instance. Pinned coordinates override free points; a step
/// that degenerates triggers a reseed of the latest random step it depends on.
pub fn sample_instance(c: &Construction, seed: u64, pinned: &BTreeMap<String, Vec<Rat>>) -> Result<Instance, InstanceError> {
    for (id, coords) in pinned {
        match c.step(id).map(|s| &s.kind) {
            Some(StepKind::FreePoint { .. }) => {}
            _ => return Err(InstanceError::NotFree(id.clone())),
        }
        if coords.len() != c.dimension {
            return Err(InstanceError::PinArity(id.clone(), c.dimension));
        }
    }
    let ancestors = random_ancestors(c, pinned);
    let mut attempts: BTreeMap<String, u32> = BTreeMap::new();
    loop {
        let mut free = BTreeMap::new();
        for s in &c.steps {
            if let Some(p) = pinned.get(&s.id) {
                free.insert(s.id.clone(), FreeValue::Point(p.iter().cloned().map(Scalar::Exact).collect()));
            } else if s.is_random() {
                let mut rng = rng_for(seed, &s.id, attempts.get(&s.id).copied().unwrap_or(0));
                free.insert(s.id.clone(), draw(c, &s.id, &s.kind, &mut rng));
            }
        }
        match evaluate(c, &free) {
            Ok(objects) => return Ok(Instance { seed, dimension: c.dimension, objects, free }),
            Err(Degenerate(step)) => {
                let Some(culprit) = ancestors.get(&step).and_then(|a| a.last()) else {
                    return Err(InstanceError::Unsatisfiable(step));
                };
                let n = attempts.entry(culprit.clone()).or_insert(0);
                *n += 1;
                if *n > MAX_RESEEDS {
                    return Err(InstanceError::Unsatisfiable(step));
                }
            }
        }
    }
}

/// For each step, the random (unpinned) steps it depends on, in step order.
fn random_ancestors(c: &Construction, pinned: &BTreeMap<String, Vec<Rat>>) -> BTreeMap<String, Vec<String>> {
    let order: BTreeMap<&str, usize> = c.steps.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
    let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for s in &c.steps {
        let mut set: Vec<String> = s.dependencies().iter().flat_map(|d| out[*d].clone()).collect();
        if s.is_random() && !pinned.contains_key(&s.id) {
            set.push(s.id.clone());
        }
        set.sort_by_key(|id| order[id.as_str()]);
        set.dedup();
        out.insert(s.id.clone(), set);
    }
    out
}

fn vsub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn vadd(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn vscale(a: &[Scalar], k: &Scalar) -> Vector {
    a.iter().map(|x| x.mul(k)).collect()
}

fn vdot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::int(0), |acc, (x, y)| acc.add(&x.mul(y)))
}

fn rot90(a: &[Scalar]) -> Vector {
    vec![a[1].neg(), a[0].clone()]
}

/// Whether `x`, a quantity of the same magnitude as `scale`, is zero.
fn vanishes(x: &Scalar, scale: f64) -> bool {
    x.is_negligible(DEGENERATE * scale)
}

/// Evaluates every step from the given random values.
pub fn evaluate(c: &Construction, free: &BTreeMap<String, FreeValue>) -> Result<BTreeMap<String, Geometry>, Degenerate> {
    let mut objs: BTreeMap<String, Geometry> = BTreeMap::new();
    for s in &c.steps {
        let bad = || Degenerate(s.id.clone());
        let point = |id: &str| -> Vector {
            match &objs[id] {
                Geometry::Point(p) => p.clone(),
                _ => unreachable!("validated"),
            }
        };
        let line = |id: &str| -> (Vector, Vector) {
            match &objs[id] {
                Geometry::Line { base, dir } => (base.clone(), dir.clone()),
                _ => unreachable!("validated"),
            }
        };
        let circle = |id: &str| -> (Vector, Scalar) {
            match &objs[id] {
                Geometry::Circle { center, radius_sq } => (center.clone(), radius_sq.clone()),
                _ => unreachable!("validated"),
            }
        };
        let g = match &s.kind {
            StepKind::FreePoint { .. } => match free.get(&s.id) {
                Some(FreeValue::Point(p)) => Geometry::Point(p.clone()),
                _ => match &s.kind {
                    StepKind::FreePoint { at: Some(at) } => Geometry::Point(at.iter().cloned().map(Scalar::Exact).collect()),
                    _ => panic!("no value for free point `{}`", s.id),
                },
            },
            StepKind::PointOnLine(l) => {
                let (base, dir) = line(l);
                let Some(FreeValue::LineParam(t)) = free.get(&s.id) else { panic!("no parameter for `{}`", s.id) };
                Geometry::Point(vadd(&base, &vscale(&dir, t)))
            }
            StepKind::PointOnCircle(ci) => {
                let (center, r2) = circle(ci);
                let Some(FreeValue::CircleParam { u, upper }) = free.get(&s.id) else {
                    panic!("no parameter for `{}`", s.id)
                };
                let r = r2.sqrt();
                let v = Scalar::int(1).sub(&u.mul(u)).sqrt();
                let v = if *upper { v } else { v.neg() };
                Geometry::Point(vec![center[0].add(&r.mul(u)), center[1].add(&r.mul(&v))])
            }
            StepKind::Midpoint(a, b) => Geometry::Point(vscale(&vadd(&point(a), &point(b)), &Scalar::Exact(Rat::new(1, 2)))),
            StepKind::Line(a, b) | StepKind::Segment(a, b) => {
                let (pa, pb) = (point(a), point(b));
                let dir = vsub(&pb, &pa);
                if vanishes(&vdot(&dir, &dir), norm2s(&pa).max(norm2s(&pb))) {
                    return Err(bad());
                }
                Geometry::Line { base: pa, dir }
            }
            StepKind::Circle(o, p) => {
                let (po, pp) = (point(o), point(p));
                let d = vsub(&pp, &po);
                let r2 = vdot(&d, &d);
                if vanishes(&r2, norm2s(&po).max(norm2s(&pp))) {
                    return Err(bad());
                }
                Geometry::Circle { center: po, radius_sq: r2 }
            }
            StepKind::CircleDiameter(p, q) => {
                let (pp, pq) = (point(p), point(q));
                let d = vsub(&pq, &pp);
                let r2 = vdot(&d, &d).scale(&Rat::new(1, 4));
                if vanishes(&r2, norm2s(&pp).max(norm2s(&pq))) {
                    return Err(bad());
                }
                let center = vscale(&vadd(&pp, &pq), &Scalar::Exact(Rat::new(1, 2)));
                Geometry::Circle { center, radius_sq: r2 }
            }
            StepKind::IntersectLines(l, m) => {
                let (b1, d1) = line(l);
                let (b2, d2) = line(m);
                Geometry::Point(intersect_lines(&b1, &d1, &b2, &d2).ok_or_else(bad)?)
            }
            StepKind::IntersectLineCircle(l, ci, branch) => {
                let (base, dir) = line(l);
                let (center, r2) = circle(ci);
                let w = vsub(&base, &center);
                let a = vdot(&dir, &dir);
                let b = vdot(&dir, &w);
                let cc = vdot(&w, &w).sub(&r2);
                // t = (-b ± sqrt(b^2 - a*cc)) / a
                let disc = b.mul(&b).sub(&a.mul(&cc));
                let scale = b.to_f64().powi(2).max((a.mul(&cc)).to_f64().abs());
                if disc.to_f64() < 0.0 || vanishes(&disc, scale) {
                    return Err(bad());
                }
                let root = disc.sqrt();
                let root = if *branch == 1 { root } else { root.neg() };
                let t = b.neg().add(&root).div(&a);
                Geometry::Point(vadd(&base, &vscale(&dir, &t)))
            }
            StepKind::Foot(p, l) => {
                let (base, dir) = line(l);
                Geometry::Point(foot(&point(p), &base, &dir))
            }
            StepKind::PerpendicularLine(p, l) => {
                let (_, dir) = line(l);
                Geometry::Line { base: point(p), dir: rot90(&dir) }
            }
            StepKind::ParallelLine(p, l) => {
                let (_, dir) = line(l);
                Geometry::Line { base: point(p), dir }
            }
            StepKind::Reflect(p, about) => {
                let pp = point(p);
                let center = match &objs[about] {
                    Geometry::Point(q) => q.clone(),
                    Geometry::Line { base, dir } => foot(&pp, base, dir),
                    Geometry::Circle { .. } => unreachable!("validated"),
                };
                Geometry::Point(vsub(&vscale(&center, &Scalar::int(2)), &pp))
            }
            StepKind::Rotate90(p, o, sign) => {
                let (pp, po) = (point(p), point(o));
                let r = rot90(&vsub(&pp, &po));
                let r = if *sign > 0 { r } else { vscale(&r, &Scalar::int(-1)) };
                Geometry::Point(vadd(&po, &r))
            }
            StepKind::Divide(a, b, i, n) => {
                let (pa, pb) = (point(a), point(b));
                let k = Scalar::Exact(Rat::new(i64::from(*i), i64::from(*n)));
                Geometry::Point(vadd(&pa, &vscale(&vsub(&pb, &pa), &k)))
            }
        };
        objs.insert(s.id.clone(), g);
    }
    Ok(objs)
}

fn norm2s(p: &[Scalar]) -> f64 {
    p.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().max(1.0)
}

fn foot(p: &[Scalar], base: &[Scalar], dir: &[Scalar]) -> Vector {
    let t = vdot(&vsub(p, base), dir).div(&vdot(dir, dir));
    vadd(base, &vscale(dir, &t))
}

/// Intersection of `b1 + s*d1` and `b2 + u*d2`; `None` for parallel or
/// skew lines.
fn intersect_lines(b1: &[Scalar], d1: &[Scalar], b2: &[Scalar], d2: &[Scalar]) -> Option<Vector> {
    let n = b1.len();
    let scale = norm2s(d1).sqrt() * norm2s(d2).sqrt();
    // solve in the coordinate plane where the lines are most transversal
    let mut best: Option<(usize, usize, Scalar)> = None;
    for i in 0..n {
        for j in i + 1..n {
            let det = d1[i].mul(&d2[j]).sub(&d1[j].mul(&d2[i]));
            if best.as_ref().is_none_or(|(_, _, b)| det.to_f64().abs() > b.to_f64().abs()) {
                best = Some((i, j, det));
            }
        }
    }
    let (i, j, det) = best?;
    if vanishes(&det, scale) {
        return None;
    }
    let w = vsub(b2, b1);
    let s = w[i].mul(&d2[j]).sub(&w[j].mul(&d2[i])).div(&det);
    let x = vadd(b1, &vscale(d1, &s));
    if n == 3 {
        let u = x[i].sub(&b2[i]).mul(&d2[i]).add(&x[j].sub(&b2[j]).mul(&d2[j])).div(&d2[i].mul(&d2[i]).add(&d2[j].mul(&d2[j])));
        let y = vadd(b2, &vscale(d2, &u));
        let gap = vsub(&x, &y);
        if !vanishes(&vdot(&gap, &gap), norm2s(&x)) {
            return None;
        }
    }
    Some(x)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Norm of the cross product (2D: absolute determinant).
fn cross_norm(a: &[f64], b: &[f64]) -> f64 {
    if a.len() == 2 {
        (a[0] * b[1] - a[1] * b[0]).abs()
    } else {
        let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        norm(&c)
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Base point and direction of a segment argument.
fn segment(s: &SegRef, inst: &Instance) -> (Vec<f64>, Vec<f64>) {
    match s {
        SegRef::Points(a, b) => {
            let pa = inst.point_f64(a);
            let d = sub(&inst.point_f64(b), &pa);
            (pa, d)
        }
        SegRef::Object(id) => inst.line_f64(id),
    }
}

/// Scale-invariant residual of a predicate: 0 when it holds exactly.
pub fn predicate_residual(p: &Predicate, inst: &Instance) -> f64 {
    let pt = |id: &str| inst.point_f64(id);
    match p {
        Predicate::Collinear(a, b, c) => {
            let (u, v) = (sub(&pt(b), &pt(a)), sub(&pt(c), &pt(a)));
            ratio(cross_norm(&u, &v), norm(&u) * norm(&v))
        }
        Predicate::Parallel(s, t) => {
            let (d1, d2) = (segment(s, inst).1, segment(t, inst).1);
            ratio(cross_norm(&d1, &d2), norm(&d1) * norm(&d2))
        }
        Predicate::Perpendicular(s, t) => {
            let (d1, d2) = (segment(s, inst).1, segment(t, inst).1);
            ratio(dot(&d1, &d2).abs(), norm(&d1) * norm(&d2))
        }
        Predicate::EqualLength(s, t) => {
            let (l1, l2) = (norm(&segment(s, inst).1), norm(&segment(t, inst).1));
            ratio((l1 - l2).abs(), l1.max(l2))
        }
        Predicate::Concyclic(a, b, c, d) => {
            let pts = [pt(a), pt(b), pt(c), pt(d)];
            let centroid: Vec<f64> = (0..2).map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / 4.0).collect();
            let rows: Vec<[f64; 4]> = pts
                .iter()
                .map(|p| {
                    let (x, y) = (p[0] - centroid[0], p[1] - centroid[1]);
                    [x, y, x * x + y * y, 1.0]
                })
                .collect();
            let mut diam: f64 = 0.0;
            for p in &pts {
                for q in &pts {
                    diam = diam.max(norm(&sub(p, q)));
                }
            }
            ratio(det4(&rows).abs(), diam.powi(4))
        }
        Predicate::PointOn(q, o) => match &inst.objects[o] {
            Geometry::Point(_) => ratio(norm(&sub(&pt(q), &pt(o))), inst.scale()),
            Geometry::Line { .. } => {
                let (base, dir) = inst.line_f64(o);
                let w = sub(&pt(q), &base);
                ratio(cross_norm(&w, &dir), norm(&w) * norm(&dir))
            }
            Geometry::Circle { center, radius_sq } => {
                let d = sub(&pt(q), &to_f64(center));
                let (d2, r2) = (dot(&d, &d), radius_sq.to_f64());
                ratio((d2 - r2).abs(), d2.max(r2))
            }
        },
        Predicate::Coincide(a, b) => ratio(norm(&sub(&pt(a), &pt(b))), inst.scale()),
        Predicate::MidpointOf(m, a, b) => {
            let (pm, pa, pb) = (pt(m), pt(a), pt(b));
            let gap: Vec<f64> = (0..pm.len()).map(|i| 2.0 * pm[i] - pa[i] - pb[i]).collect();
            ratio(norm(&gap), 2.0 * inst.scale())
        }
        Predicate::Equal(e1, e2) => {
            let (v1, v2) = (measure_value(e1, inst), measure_value(e2, inst));
            ratio((v1 - v2).abs(), v1.abs().max(v2.abs()))
        }
    }
}

/// Whether the predicate holds at `inst` up to the scale-invariant tolerance.
pub fn eval_predicate_numeric(p: &Predicate, inst: &Instance, tol: f64) -> bool {
    predicate_residual(p, inst) <= tol
}

fn det4(m: &[[f64; 4]]) -> f64 {
    let mut a: Vec<[f64; 4]> = m.to_vec();
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
        }
    }
    det
}

/// Numeric value of a primitive measure; lengths and circumradii are
/// non-negative, areas are signed.
pub fn primitive_value(p: &Primitive, inst: &Instance) -> f64 {
    let pt = |id: &str| inst.point_f64(id);
    match p {
        Primitive::Length(a, b) => norm(&sub(&pt(a), &pt(b))),
        Primitive::SqDist(a, b) => {
            let d = sub(&pt(a), &pt(b));
            dot(&d, &d)
        }
        Primitive::Area(a, b, c) => {
            let (u, v) = (sub(&pt(b), &pt(a)), sub(&pt(c), &pt(a)));
            (u[0] * v[1] - u[1] * v[0]) / 2.0
        }
        Primitive::Circumradius(a, b, c) => {
            let (pa, pb, pc) = (pt(a), pt(b), pt(c));
            let (x, y, z) = (norm(&sub(&pb, &pc)), norm(&sub(&pa, &pc)), norm(&sub(&pa, &pb)));
            let (u, v) = (sub(&pb, &pa), sub(&pc, &pa));
            let area = (u[0] * v[1] - u[1] * v[0]).abs() / 2.0;
            x * y * z / (4.0 * area)
        }
    }
}

pub fn measure_value(e: &MeasureExpr, inst: &Instance) -> f64 {
    e.eval(&mut |p| primitive_value(p, inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::parse;

    fn pins(list: &[(&str, &[i64])]) -> BTreeMap<String, Vec<Rat>> {
        list.iter().map(|(id, c)| (id.to_string(), c.iter().map(|&v| Rat::from_int(v)).collect())).collect()
    }

    #[test]
    fn midpoint_is_exact() {
        let c = parse("point A free\npoint B free\npoint M = midpoint(A, B)").unwrap();
        let inst = sample_instance(&c, 1, &pins(&[("A", &[0, 0]), ("B", &[2, 4])])).unwrap();
        assert_eq!(inst.point("M"), &[Scalar::int(1), Scalar::int(2)]);
    }

    #[test]
    fn identical_lines_are_unsatisfiable() {
        let c = parse("point A free\npoint B free\nline l = line(A, B)\nline m = line(A, B)\npoint X = intersect(l, m)").unwrap();
        assert_eq!(sample_instance(&c, 3, &BTreeMap::new()).unwrap_err(), InstanceError::Unsatisfiable("X".into()));
    }

    #[test]
    fn division_point() {
        let c = parse(
            "point A free at (0, 0)\npoint B free at (1, 0)\npoint C free at (1, 1)\npoint D free at (0, 1)\n\
             point A1 = divide(A, B, 1, 3)",
        )
        .unwrap();
        let inst = sample_instance(&c, 0, &BTreeMap::new()).unwrap();
        assert_eq!(inst.point("A1"), &[Scalar::Exact(Rat::new(1, 3)), Scalar::int(0)]);
    }

    #[test]
    fn sampling_is_deterministic() {
        let c = parse("point A free\npoint B free\npoint C = equilateral(A, B)\nsegment s = segment(A, C)\npoint P = on_line(s)").unwrap();
        let a = sample_instance(&c, 42, &BTreeMap::new()).unwrap();
        let b = sample_instance(&c, 42, &BTreeMap::new()).unwrap();
        assert_eq!(a.coordinates(), b.coordinates());
        assert_ne!(a.coordinates(), sample_instance(&c, 43, &BTreeMap::new()).unwrap().coordinates());
    }

    #[test]
    fn numeric_predicates() {
        let c = parse("point A free\npoint B free\npoint C free\npoint D free").unwrap();
        let at = |pts: [(f64, f64); 4]| {
            let mut inst = sample_instance(&c, 0, &BTreeMap::new()).unwrap();
            for (id, (x, y)) in ["A", "B", "C", "D"].iter().zip(pts) {
                inst.objects.insert(id.to_string(), Geometry::Point(vec![Scalar::Float(x), Scalar::Float(y)]));
            }
            inst
        };
        let seg = |a: &str, b: &str| SegRef::Points(a.into(), b.into());
        let inst = at([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.0, 1.0)]);
        assert!(eval_predicate_numeric(&Predicate::Collinear("A".into(), "B".into(), "C".into()), &inst, 1e-8));
        assert!(eval_predicate_numeric(&Predicate::Perpendicular(seg("A", "B"), seg("A", "D")), &inst, 1e-8));
        let inst = at([(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.5, 0.866025)]);
        let eq = Predicate::EqualLength(seg("A", "B"), seg("C", "D"));
        assert!(eval_predicate_numeric(&eq, &inst, 1e-4));
        assert!(!eval_predicate_numeric(&eq, &inst, 1e-9));
        let inst = at([(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]);
        let cyc = Predicate::Concyclic("A".into(), "B".into(), "C".into(), "D".into());
        assert!(predicate_residual(&cyc, &inst) < 1e-15);
        let inst = at([(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (2.0, 2.0)]);
        assert!(predicate_residual(&cyc, &inst) > 1e-3);
    }
}
