//! Compilation of constructions into polynomial systems.
//!
//! Every point gets one variable per coordinate (`A_x`, `A_y`, `A_z`),
//! points on lines get a parameter `P_t`, and lines and circles are
//! represented by polynomials in those variables (base point and direction,
//! center and squared radius). Dependent variables get the smallest ids,
//! latest step first, so that they are the largest variables in every order.

use crate::construction::{Construction, MeasureExpr, Predicate, Primitive, SegRef, StepKind};
use crate::instance::{measure_value, primitive_value, FreeValue, Geometry, Instance};
use crate::Scalar;
use mg_poly::{MonomialOrder, Polynomial, Rat, Var, VarNames};
use std::collections::BTreeMap;
use thiserror::Error;

const AXES: [&str; 3] = ["x", "y", "z"];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("concyclic is only defined in the plane")]
    SpatialConcyclic,
    #[error("measure expression `{0}` is not linear in lengths and circumradii")]
    NonlinearMeasure(String),
    #[error("signed areas and circumradii are only defined in the plane")]
    SpatialMeasure,
}

/// What a measure variable stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureDefinition {
    Primitive(Primitive),
    /// A named combination of primitive measures.
    Expression(MeasureExpr),
}

#[derive(Clone, Debug)]
pub struct MeasureVar {
    pub var: Var,
    pub name: String,
    pub definition: MeasureDefinition,
    /// Defining polynomials, also appended to the hypotheses.
    pub polynomials: Vec<Polynomial>,
    /// Lengths and circumradii are non-negative; ideals cannot say so.
    pub nonnegative: bool,
}

#[derive(Clone, Debug)]
struct LineRep {
    base: Vec<Polynomial>,
    dir: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
struct CircleRep {
    center: Vec<Polynomial>,
    radius_sq: Polynomial,
}

#[derive(Clone, Debug)]
pub struct AlgebraicModel {
    pub names: VarNames,
    pub free_vars: Vec<Var>,
    pub dep_vars: Vec<Var>,
    pub hypotheses: Vec<Polynomial>,
    /// Polynomials that must not vanish; applied by saturation.
    pub nondegeneracy: Vec<Polynomial>,
    pub wlog_applied: bool,
    pub measures: Vec<MeasureVar>,
    /// Step id (or measure name) that contributed each hypothesis.
    pub origins: Vec<String>,
    dimension: usize,
    points: BTreeMap<String, Vec<Polynomial>>,
    lines: BTreeMap<String, LineRep>,
    circles: BTreeMap<String, CircleRep>,
    /// Path parameter of each point on a line or circle.
    params: BTreeMap<String, Var>,
    /// The points placed at the origin and on the positive x-axis.
    frame: Option<(String, String)>,
}

fn order() -> MonomialOrder {
    MonomialOrder::DegRevLex
}

fn konst(r: Rat) -> Polynomial {
    Polynomial::constant(r, &order())
}

fn int(n: i64) -> Polynomial {
    konst(Rat::from_int(n))
}

fn sub_v(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[Polynomial], b: &[Polynomial]) -> Polynomial {
    a.iter().zip(b).fold(int(0), |acc, (x, y)| acc + x * y)
}

/// The 2x2 minors of the matrix with rows `a` and `b`: one polynomial in
/// the plane, three in space.
fn minors(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    if a.len() == 2 {
        vec![&a[0] * &b[1] - &a[1] * &b[0]]
    } else {
        vec![
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ]
    }
}

fn rot90(a: &[Polynomial]) -> Vec<Polynomial> {
    vec![-a[1].clone(), a[0].clone()]
}

/// Role of a free point under WLOG placement.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Placement {
    General,
    Origin,
    Axis,
}

/// Compiles `c`. With `wlog`, and when no point is pinned, the first free
/// point becomes the origin and the second lies on the x-axis.
pub fn algebraize(c: &Construction, wlog: bool) -> AlgebraicModel {
    let d = c.dimension;
    let frame = match c.unpinned_free_points().as_slice() {
        [a, b, ..] if wlog && !c.has_pinned_points() => Some((a.to_string(), b.to_string())),
        _ => None,
    };
    let placement = |id: &str| match &frame {
        Some((a, _)) if a == id => Placement::Origin,
        Some((_, b)) if b == id => Placement::Axis,
        _ => Placement::General,
    };

    // variable plan: (name, dependent)
    let mut plan: Vec<Vec<(String, bool)>> = Vec::new();
    for s in &c.steps {
        let coords = |dep: bool| -> Vec<(String, bool)> { AXES[..d].iter().map(|a| (format!("{}_{a}", s.id), dep)).collect() };
        plan.push(match &s.kind {
            StepKind::FreePoint { at: Some(_) } => vec![],
            StepKind::FreePoint { at: None } => match placement(&s.id) {
                Placement::Origin => vec![],
                Placement::Axis => vec![(format!("{}_x", s.id), false)],
                Placement::General => coords(false),
            },
            StepKind::PointOnLine(_) => {
                let mut v = coords(true);
                v.push((format!("{}_t", s.id), false));
                v
            }
            StepKind::PointOnCircle(_) => vec![(format!("{}_x", s.id), false), (format!("{}_y", s.id), true)],
            _ if s.object_kind() == crate::construction::ObjectKind::Point => coords(true),
            _ => vec![],
        });
    }
    let mut names = VarNames::new();
    let mut dep_vars = Vec::new();
    for vars in plan.iter().rev() {
        for (n, dep) in vars {
            if *dep {
                dep_vars.push(names.intern(n));
            }
        }
    }
    let mut free_vars = Vec::new();
    for vars in &plan {
        for (n, dep) in vars {
            if !*dep {
                free_vars.push(names.intern(n));
            }
        }
    }
    dep_vars.sort();
    free_vars.sort();

    let mut m = AlgebraicModel {
        names,
        free_vars,
        dep_vars,
        hypotheses: Vec::new(),
        nondegeneracy: Vec::new(),
        wlog_applied: frame.is_some(),
        measures: Vec::new(),
        origins: Vec::new(),
        dimension: d,
        points: BTreeMap::new(),
        lines: BTreeMap::new(),
        circles: BTreeMap::new(),
        params: BTreeMap::new(),
        frame: frame.clone(),
    };
    for s in &c.steps {
        m.emit(&s.id, &s.kind, placement(&s.id));
    }
    m
}

impl AlgebraicModel {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    fn var(&self, name: &str) -> Polynomial {
        Polynomial::var(self.names.get(name).unwrap_or_else(|| panic!("unplanned variable {name}")), &order())
    }

    fn coord_vars(&self, id: &str) -> Vec<Polynomial> {
        AXES[..self.dimension].iter().map(|a| self.var(&format!("{id}_{a}"))).collect()
    }

    fn hyp(&mut self, origin: &str, p: Polynomial) {
        if !p.is_zero() {
            self.hypotheses.push(p);
            self.origins.push(origin.to_string());
        }
    }

    fn nondeg(&mut self, p: Polynomial) {
        if !p.is_constant() && !self.nondegeneracy.contains(&p) {
            self.nondegeneracy.push(p);
        }
    }

    pub fn point(&self, id: &str) -> &[Polynomial] {
        &self.points[id]
    }

    /// Base point and direction of a line or segment.
    pub fn line(&self, id: &str) -> (&[Polynomial], &[Polynomial]) {
        let l = &self.lines[id];
        (&l.base, &l.dir)
    }

    pub fn circle(&self, id: &str) -> (&[Polynomial], &Polynomial) {
        let c = &self.circles[id];
        (&c.center, &c.radius_sq)
    }

    /// Path parameter of a point on a line (`P_t`) or circle (`P_x`).
    pub fn param(&self, id: &str) -> Option<Var> {
        self.params.get(id).copied()
    }

    /// The points fixed by WLOG placement: (origin, point on the x-axis).
    pub fn frame(&self) -> Option<(&str, &str)> {
        self.frame.as_ref().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn all_vars(&self) -> Vec<Var> {
        self.names.vars().collect()
    }

    pub fn var_name(&self, v: Var) -> String {
        self.names.name(v)
    }

    pub fn format(&self, p: &Polynomial) -> String {
        self.names.format(p)
    }

    fn emit(&mut self, id: &str, kind: &StepKind, placement: Placement) {
        let d = self.dimension;
        match kind {
            StepKind::FreePoint { at: Some(at) } => {
                self.points.insert(id.into(), at.iter().cloned().map(konst).collect());
            }
            StepKind::FreePoint { at: None } => {
                let coords = match placement {
                    Placement::Origin => vec![int(0); d],
                    Placement::Axis => {
                        let mut v = vec![int(0); d];
                        v[0] = self.var(&format!("{id}_x"));
                        v
                    }
                    Placement::General => self.coord_vars(id),
                };
                self.points.insert(id.into(), coords);
            }
            StepKind::PointOnLine(l) => {
                let p = self.coord_vars(id);
                let t = self.var(&format!("{id}_t"));
                let LineRep { base, dir } = self.lines[l].clone();
                for i in 0..d {
                    self.hyp(id, &p[i] - &base[i] - &t * &dir[i]);
                }
                self.params.insert(id.into(), self.names.get(&format!("{id}_t")).expect("planned"));
                self.points.insert(id.into(), p);
            }
            StepKind::PointOnCircle(ci) => {
                let p = vec![self.var(&format!("{id}_x")), self.var(&format!("{id}_y"))];
                let CircleRep { center, radius_sq } = self.circles[ci].clone();
                let w = sub_v(&p, &center);
                self.hyp(id, dot(&w, &w) - radius_sq);
                self.params.insert(id.into(), self.names.get(&format!("{id}_x")).expect("planned"));
                self.points.insert(id.into(), p);
            }
            StepKind::Midpoint(a, b) => {
                let p = self.coord_vars(id);
                let (pa, pb) = (self.points[a].clone(), self.points[b].clone());
                for i in 0..d {
                    self.hyp(id, &p[i].scale(&Rat::from_int(2)) - &pa[i] - &pb[i]);
                }
                self.points.insert(id.into(), p);
            }
            StepKind::Line(a, b) | StepKind::Segment(a, b) => {
                let base = self.points[a].clone();
                let dir = sub_v(&self.points[b], &base);
                self.nondeg(dot(&dir, &dir));
                self.lines.insert(id.into(), LineRep { base, dir });
            }
            StepKind::Circle(o, p) => {
                let center = self.points[o].clone();
                let w = sub_v(&self.points[p], &center);
                let radius_sq = dot(&w, &w);
                self.nondeg(radius_sq.clone());
                self.circles.insert(id.into(), CircleRep { center, radius_sq });
            }
            StepKind::CircleDiameter(p, q) => {
                let (pp, pq) = (self.points[p].clone(), self.points[q].clone());
                let half = Rat::new(1, 2);
                let center: Vec<Polynomial> = pp.iter().zip(&pq).map(|(x, y)| (x + y).scale(&half)).collect();
                let w = sub_v(&pq, &pp);
                let diam_sq = dot(&w, &w);
                self.nondeg(diam_sq.clone());
                self.circles.insert(id.into(), CircleRep { center, radius_sq: diam_sq.scale(&Rat::new(1, 4)) });
            }
            StepKind::IntersectLines(l, m) => {
                let p = self.coord_vars(id);
                let (l1, l2) = (self.lines[l].clone(), self.lines[m].clone());
                for h in minors(&sub_v(&p, &l1.base), &l1.dir).into_iter().chain(minors(&sub_v(&p, &l2.base), &l2.dir)) {
                    self.hyp(id, h);
                }
                let cross = minors(&l1.dir, &l2.dir);
                // In space one nonvanishing minor stands for the whole cross product.
                let witness = cross.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(|| cross[0].clone());
                self.nondeg(witness);
                self.points.insert(id.into(), p);
            }
            StepKind::IntersectLineCircle(l, ci, _) => {
                let p = self.coord_vars(id);
                let LineRep { base, dir } = self.lines[l].clone();
                let CircleRep { center, radius_sq } = self.circles[ci].clone();
                for h in minors(&sub_v(&p, &base), &dir) {
                    self.hyp(id, h);
                }
                let w = sub_v(&p, &center);
                self.hyp(id, dot(&w, &w) - radius_sq);
                self.points.insert(id.into(), p);
            }
            StepKind::Foot(q, l) => {
                let p = self.coord_vars(id);
                let LineRep { base, dir } = self.lines[l].clone();
                for h in minors(&sub_v(&p, &base), &dir) {
                    self.hyp(id, h);
                }
                let pq = self.points[q].clone();
                self.hyp(id, dot(&sub_v(&p, &pq), &dir));
                self.points.insert(id.into(), p);
            }
            StepKind::PerpendicularLine(q, l) => {
                let dir = rot90(&self.lines[l].dir);
                self.lines.insert(id.into(), LineRep { base: self.points[q].clone(), dir });
            }
            StepKind::ParallelLine(q, l) => {
                let dir = self.lines[l].dir.clone();
                self.lines.insert(id.into(), LineRep { base: self.points[q].clone(), dir });
            }
            StepKind::Reflect(q, about) => {
                let p = self.coord_vars(id);
                let pq = self.points[q].clone();
                if let Some(center) = self.points.get(about).cloned() {
                    for i in 0..d {
                        self.hyp(id, &p[i] + &pq[i] - center[i].scale(&Rat::from_int(2)));
                    }
                } else {
                    let LineRep { base, dir } = self.lines[about].clone();
                    let mid2: Vec<Polynomial> = (0..d).map(|i| &p[i] + &pq[i] - base[i].scale(&Rat::from_int(2))).collect();
                    for h in minors(&mid2, &dir) {
                        self.hyp(id, h);
                    }
                    self.hyp(id, dot(&sub_v(&p, &pq), &dir));
                }
                self.points.insert(id.into(), p);
            }
            StepKind::Rotate90(q, o, sign) => {
                let p = self.coord_vars(id);
                let (pq, po) = (self.points[q].clone(), self.points[o].clone());
                let s = Rat::from_int(i64::from(*sign));
                self.hyp(id, &p[0] - &po[0] + (&pq[1] - &po[1]).scale(&s));
                self.hyp(id, &p[1] - &po[1] - (&pq[0] - &po[0]).scale(&s));
                self.points.insert(id.into(), p);
            }
            StepKind::Divide(a, b, i, n) => {
                let p = self.coord_vars(id);
                let (pa, pb) = (self.points[a].clone(), self.points[b].clone());
                let (i, n) = (Rat::from_int(i64::from(*i)), Rat::from_int(i64::from(*n)));
                let rest = &n - &i;
                for k in 0..d {
                    self.hyp(id, p[k].scale(&n) - pa[k].scale(&rest) - pb[k].scale(&i));
                }
                self.points.insert(id.into(), p);
            }
        }
    }

    fn direction(&self, s: &SegRef) -> Vec<Polynomial> {
        match s {
            SegRef::Points(a, b) => sub_v(&self.points[b], &self.points[a]),
            SegRef::Object(id) => self.lines[id].dir.clone(),
        }
    }

    /// Thesis polynomials of a predicate. Lengths and circumradii inside
    /// `eq` need measure variables; see [`AlgebraicModel::with_predicate`].
    pub fn translate_predicate(&self, p: &Predicate) -> Result<Vec<Polynomial>, AlgebraError> {
        let pt = |id: &str| self.points[id].clone();
        let polys = match p {
            Predicate::Collinear(a, b, c) => minors(&sub_v(&pt(b), &pt(a)), &sub_v(&pt(c), &pt(a))),
            Predicate::Parallel(s, t) => minors(&self.direction(s), &self.direction(t)),
            Predicate::Perpendicular(s, t) => vec![dot(&self.direction(s), &self.direction(t))],
            Predicate::EqualLength(s, t) => {
                let (d1, d2) = (self.direction(s), self.direction(t));
                vec![dot(&d1, &d1) - dot(&d2, &d2)]
            }
            Predicate::Concyclic(a, b, c, d) => {
                if self.dimension != 2 {
                    return Err(AlgebraError::SpatialConcyclic);
                }
                let pa = pt(a);
                let rows: Vec<Vec<Polynomial>> = [b, c, d]
                    .iter()
                    .map(|q| {
                        let w = sub_v(&pt(q), &pa);
                        let n = dot(&w, &w);
                        vec![w[0].clone(), w[1].clone(), n]
                    })
                    .collect();
                vec![det3(&rows)]
            }
            Predicate::PointOn(q, o) => {
                if let Some(p) = self.points.get(o) {
                    sub_v(&pt(q), p)
                } else if let Some(l) = self.lines.get(o) {
                    minors(&sub_v(&pt(q), &l.base), &l.dir)
                } else {
                    let c = &self.circles[o];
                    let w = sub_v(&pt(q), &c.center);
                    vec![dot(&w, &w) - &c.radius_sq]
                }
            }
            Predicate::Coincide(a, b) => sub_v(&pt(a), &pt(b)),
            Predicate::MidpointOf(m, a, b) => {
                let (pm, pa, pb) = (pt(m), pt(a), pt(b));
                (0..self.dimension).map(|i| pm[i].scale(&Rat::from_int(2)) - &pa[i] - &pb[i]).collect()
            }
            Predicate::Equal(e1, e2) => vec![self.expr_polynomial(&e1.sub(e2), true)?],
        };
        Ok(polys.into_iter().filter(|p| !p.is_zero()).collect())
    }

    /// The model extended by the measure variables the predicate needs,
    /// with the predicate's thesis polynomials.
    pub fn with_predicate(&self, p: &Predicate) -> Result<(AlgebraicModel, Vec<Polynomial>), AlgebraError> {
        let mut m = self.clone();
        if let Predicate::Equal(e1, e2) = p {
            for prim in e1.primitives().into_iter().chain(e2.primitives()) {
                if !prim.is_polynomial() {
                    m.primitive_var(prim)?;
                }
            }
        }
        let polys = m.translate_predicate(p)?;
        Ok((m, polys))
    }

    /// Polynomial in the coordinates for polynomial primitives.
    fn primitive_polynomial(&self, p: &Primitive) -> Result<Polynomial, AlgebraError> {
        let pt = |id: &str| self.points[id].clone();
        Ok(match p {
            Primitive::SqDist(a, b) => {
                let w = sub_v(&pt(b), &pt(a));
                dot(&w, &w)
            }
            Primitive::Area(a, b, c) => {
                if self.dimension != 2 {
                    return Err(AlgebraError::SpatialMeasure);
                }
                minors(&sub_v(&pt(b), &pt(a)), &sub_v(&pt(c), &pt(a)))[0].scale(&Rat::new(1, 2))
            }
            _ => unreachable!("not a polynomial primitive"),
        })
    }

    /// The measure variable of a primitive, if attached.
    pub fn measure_var(&self, p: &Primitive) -> Option<&MeasureVar> {
        let p = p.clone().canonical();
        self.measures.iter().find(|m| m.definition == MeasureDefinition::Primitive(p.clone()))
    }

    /// `expr` as a polynomial; with `inline`, squared distances and areas
    /// are expanded in the coordinates instead of using variables.
    fn expr_polynomial(&self, e: &MeasureExpr, inline: bool) -> Result<Polynomial, AlgebraError> {
        let mut acc = int(0);
        for (prod, c) in e.terms() {
            let mut term = konst(c.clone());
            for (prim, k) in prod {
                let f = if inline && prim.is_polynomial() {
                    self.primitive_polynomial(prim)?
                } else {
                    let mv = self.measure_var(prim).expect("measure variable attached");
                    Polynomial::var(mv.var, &order())
                };
                term = term * f.pow(*k);
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    fn new_measure(&mut self, name: &str, definition: MeasureDefinition, nonnegative: bool, defining: impl Fn(Polynomial) -> Polynomial) -> Var {
        let var = self.names.intern(name);
        let poly = defining(Polynomial::var(var, &order()));
        self.dep_vars.push(var);
        self.hyp(name, poly.clone());
        self.measures.push(MeasureVar { var, name: name.to_string(), definition, polynomials: vec![poly], nonnegative });
        var
    }

    fn primitive_var(&mut self, p: &Primitive) -> Result<Var, AlgebraError> {
        if let Some(m) = self.measure_var(p) {
            return Ok(m.var);
        }
        let p = p.clone().canonical();
        let name = format!("{}_{}", short_name(&p), p.points().join("_"));
        let def = MeasureDefinition::Primitive(p.clone());
        Ok(match &p {
            Primitive::SqDist(..) | Primitive::Area(..) => {
                let f = self.primitive_polynomial(&p)?;
                self.new_measure(&name, def, false, |v| v - &f)
            }
            Primitive::Length(a, b) => {
                let f = self.primitive_polynomial(&Primitive::SqDist(a.clone(), b.clone()))?;
                self.new_measure(&name, def, true, |v| v.pow(2) - &f)
            }
            Primitive::Circumradius(a, b, c) => {
                // 16 area^2 R^2 = a^2 b^2 c^2
                let area2 = self.primitive_polynomial(&Primitive::Area(a.clone(), b.clone(), c.clone()))?.scale(&Rat::from_int(2));
                let side = |x: &str, y: &str| self.primitive_polynomial(&Primitive::SqDist(x.into(), y.into()));
                let sides = side(b, c)? * side(a, c)? * side(a, b)?;
                self.new_measure(&name, def, true, |v| area2.pow(2).scale(&Rat::from_int(4)) * v.pow(2) - &sides)
            }
        })
    }

    /// Attaches one variable per primitive measure and one per expression
    /// (`w1`, `w2`, ...). Returns the extended model and the expression
    /// variables in order.
    pub fn attach_measures(&self, exprs: &[MeasureExpr]) -> Result<(AlgebraicModel, Vec<MeasureVar>), AlgebraError> {
        let mut m = self.clone();
        let mut out = Vec::new();
        for e in exprs {
            if e.has_nonlinear_radicals() {
                return Err(AlgebraError::NonlinearMeasure(e.to_string()));
            }
            for p in e.primitives() {
                m.primitive_var(p)?;
            }
            let f = m.expr_polynomial(e, false)?;
            let n = m.measures.iter().filter(|v| matches!(v.definition, MeasureDefinition::Expression(_))).count();
            let name = format!("w{}", n + 1);
            m.new_measure(&name, MeasureDefinition::Expression(e.clone()), false, |v| v - &f);
            out.push(m.measures.last().expect("just pushed").clone());
        }
        Ok((m, out))
    }

    /// The instance moved into the model's frame: with WLOG placement the
    /// origin point goes to 0 and the axis point to the positive x-axis.
    pub fn framed(&self, inst: &Instance) -> Instance {
        let Some((o, a)) = &self.frame else { return inst.clone() };
        let p0 = inst.point_f64(o);
        let u: Vec<f64> = inst.point_f64(a).iter().zip(&p0).map(|(x, y)| x - y).collect();
        let already = p0.iter().all(|x| *x == 0.0) && u[0] >= 0.0 && u[1..].iter().all(|x| *x == 0.0);
        if already {
            return inst.clone();
        }
        let rot = rotation_to_x_axis(&u);
        let apply = |v: &[Scalar], translate: bool| -> Vec<Scalar> {
            let w: Vec<f64> = v.iter().enumerate().map(|(i, x)| x.to_f64() - if translate { p0[i] } else { 0.0 }).collect();
            rot.iter().map(|row| Scalar::Float(row.iter().zip(&w).map(|(r, x)| r * x).sum())).collect()
        };
        let objects = inst
            .objects
            .iter()
            .map(|(id, g)| {
                let g = match g {
                    Geometry::Point(p) => Geometry::Point(apply(p, true)),
                    Geometry::Line { base, dir } => Geometry::Line { base: apply(base, true), dir: apply(dir, false) },
                    Geometry::Circle { center, radius_sq } => {
                        Geometry::Circle { center: apply(center, true), radius_sq: radius_sq.clone() }
                    }
                };
                (id.clone(), g)
            })
            .collect();
        Instance { seed: inst.seed, dimension: inst.dimension, objects, free: inst.free.clone() }
    }

    /// Values of every model variable at an instance (in the model's frame).
    pub fn values_at(&self, inst: &Instance) -> BTreeMap<Var, f64> {
        let inst = self.framed(inst);
        let mut out = BTreeMap::new();
        for v in self.names.vars() {
            let name = self.names.name(v);
            if let Some(m) = self.measures.iter().find(|m| m.var == v) {
                let value = match &m.definition {
                    MeasureDefinition::Primitive(p) => primitive_value(p, &inst),
                    MeasureDefinition::Expression(e) => measure_value(e, &inst),
                };
                out.insert(v, value);
                continue;
            }
            let (id, axis) = name.rsplit_once('_').expect("coordinate variable names contain `_`");
            let value = if axis == "t" {
                match inst.free.get(id) {
                    Some(FreeValue::LineParam(t)) => t.to_f64(),
                    _ => f64::NAN,
                }
            } else {
                let k = AXES.iter().position(|a| *a == axis).expect("known axis");
                inst.point_f64(id)[k]
            };
            out.insert(v, value);
        }
        out
    }

    /// Exact values of every variable, when the instance is exact and
    /// already in the model's frame.
    pub fn exact_values_at(&self, inst: &Instance) -> Option<BTreeMap<Var, Rat>> {
        let mut out = BTreeMap::new();
        for v in self.names.vars() {
            if self.measures.iter().any(|m| m.var == v) {
                return None;
            }
            let name = self.names.name(v);
            let (id, axis) = name.rsplit_once('_')?;
            let value = if axis == "t" {
                match inst.free.get(id) {
                    Some(FreeValue::LineParam(t)) => t.exact()?.clone(),
                    _ => return None,
                }
            } else {
                let k = AXES.iter().position(|a| *a == axis)?;
                inst.point(id)[k].exact()?.clone()
            };
            out.insert(v, value);
        }
        if let Some((o, a)) = &self.frame {
            let origin = inst.point(o).iter().all(|x| x.exact().is_some_and(Rat::is_zero));
            let axis = inst.point(a)[1..].iter().all(|x| x.exact().is_some_and(Rat::is_zero));
            if !origin || !axis {
                return None;
            }
        }
        Some(out)
    }
}

fn short_name(p: &Primitive) -> &'static str {
    match p {
        Primitive::Length(..) => "len",
        Primitive::SqDist(..) => "sq",
        Primitive::Area(..) => "area",
        Primitive::Circumradius(..) => "R",
    }
}

fn det3(m: &[Vec<Polynomial>]) -> Polynomial {
    &m[0][0] * &(&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * &(&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * &(&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// A proper rotation taking the direction of `u` to the positive x-axis.
fn rotation_to_x_axis(u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dim = u.len();
    let identity: Vec<Vec<f64>> = (0..dim).map(|i| (0..dim).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    if n == 0.0 {
        return identity;
    }
    let u: Vec<f64> = u.iter().map(|x| x / n).collect();
    if dim == 2 {
        return vec![vec![u[0], u[1]], vec![-u[1], u[0]]];
    }
    // Rodrigues rotation about u × e1
    let k = [0.0, u[2], -u[1]];
    let s = (k[1] * k[1] + k[2] * k[2]).sqrt();
    let c = u[0];
    if s < 1e-15 {
        return if c > 0.0 { identity } else { vec![vec![-1.0, 0.0, 0.0], vec![0.0, -1.0, 0.0], vec![0.0, 0.0, 1.0]] };
    }
    let kx = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
    let f = (1.0 - c) / (s * s);
    (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let kk: f64 = (0..3).map(|l| kx[i][l] * kx[l][j]).sum();
                    identity[i][j] + kx[i][j] + f * kk
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::parse;
    use crate::instance::sample_instance;

    #[test]
    fn midpoint_model() {
        let c = parse("point A free\npoint B free\npoint M = midpoint(A, B)").unwrap();
        let m = algebraize(&c, false);
        assert_eq!(m.free_vars.len(), 4);
        assert_eq!(m.dep_vars.len(), 2);
        assert_eq!(m.hypotheses.len(), 2);
        assert_eq!(m.format(&m.hypotheses[0]), "2*M_x - A_x - B_x");
        let w = algebraize(&c, true);
        assert!(w.wlog_applied);
        assert_eq!(w.free_vars.iter().map(|v| w.var_name(*v)).collect::<Vec<_>>(), ["B_x"]);
    }

    #[test]
    fn dependent_variables_come_first() {
        let c = parse("point A free\npoint B free\npoint M = midpoint(A, B)\npoint N = midpoint(A, M)").unwrap();
        let m = algebraize(&c, true);
        let names: Vec<String> = m.all_vars().into_iter().map(|v| m.var_name(v)).collect();
        assert_eq!(names, ["N_x", "N_y", "M_x", "M_y", "B_x"]);
    }

    #[test]
    fn rotation_frames_are_proper() {
        for u in [[3.0, 4.0, 12.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 2.0]] {
            let r = rotation_to_x_axis(&u);
            let v: Vec<f64> = r.iter().map(|row| row.iter().zip(&u).map(|(a, b)| a * b).sum()).collect();
            let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((v[0] - n).abs() < 1e-12 && v[1].abs() < 1e-12 && v[2].abs() < 1e-12, "{v:?}");
            let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
            assert!((det - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hypotheses_vanish_at_instances() {
        let c = parse(
            "point A free\npoint B free\npoint C free\nline l = line(A, B)\npoint F = foot(C, l)\n\
             circle k = circle(A, C)\npoint P = on_circle(k)\npoint R = reflect(C, l)\npoint Q = rotate90(C, F, -1)",
        )
        .unwrap();
        for wlog in [false, true] {
            let m = algebraize(&c, wlog);
            for seed in 0..5 {
                let inst = sample_instance(&c, seed, &BTreeMap::new()).unwrap();
                let vals = m.values_at(&inst);
                for h in &m.hypotheses {
                    let scale = h.eval_abs_f64(|v| vals[&v]).max(1.0);
                    assert!(h.eval_f64(|v| vals[&v]).abs() <= 1e-9 * scale, "{}", m.format(h));
                }
            }
        }
    }
}
