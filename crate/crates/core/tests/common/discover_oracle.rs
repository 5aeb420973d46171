//! Brute-force enumeration of the statements that hold about one point of
//! a figure, computed from independently sampled coordinates.

use mg_core::construction::{parse, Predicate, PredicateKind, SegRef};
use mg_core::reason::{discover, prove, Options, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

pub const VARIGNON: &str = "point A free
point B free
point C free
point D free
point P = midpoint(A, B)
point Q = midpoint(B, C)
point R = midpoint(C, D)
point S = midpoint(D, A)";

pub const SQUARE: &str = "point A free
point B free
point C = rotate90(A, B, -1)
point D = rotate90(B, A, 1)
line ac = line(A, C)
line bd = line(B, D)
point O = intersect(ac, bd)";

pub type Figure = BTreeMap<&'static str, [f64; 2]>;

fn mid(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
}

pub fn varignon_figure(rng: &mut ChaCha8Rng) -> Figure {
    let mut p = || [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
    let (a, b, c, d) = (p(), p(), p(), p());
    Figure::from([("A", a), ("B", b), ("C", c), ("D", d), ("P", mid(a, b)), ("Q", mid(b, c)), ("R", mid(c, d)), ("S", mid(d, a))])
}

/// `rotate90(A, B, -1)` turns A about B clockwise.
pub fn square_figure(rng: &mut ChaCha8Rng) -> Figure {
    let mut p = || [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
    let (a, b) = (p(), p());
    let c = [b[0] + (a[1] - b[1]), b[1] - (a[0] - b[0])];
    let d = [a[0] - (b[1] - a[1]), a[1] + (b[0] - a[0])];
    Figure::from([("A", a), ("B", b), ("C", c), ("D", d), ("O", mid(a, c))])
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

fn dot(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[0] + u[1] * v[1]
}

/// One atomic fact: a kind and its point tuples, each tuple sorted and the
/// list of tuples sorted, so that argument order does not matter.
type Fact = (&'static str, Vec<Vec<String>>);

fn seg_fact(kind: &'static str, s: [&str; 2], t: [&str; 2]) -> Fact {
    let mut s: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    let mut t: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    s.sort();
    t.sort();
    let mut v = vec![s, t];
    v.sort();
    (kind, v)
}

fn set_fact(kind: &'static str, pts: &[&str]) -> Fact {
    let mut v: Vec<String> = pts.iter().map(|x| x.to_string()).collect();
    v.sort();
    (kind, vec![v])
}

/// Every nonvacuous collinear, parallel, perpendicular, equal-length and
/// concyclic statement involving `target` that holds in all `figures`.
fn oracle(figures: &[Figure], target: &str) -> BTreeSet<Fact> {
    let names: Vec<&'static str> = figures[0].keys().copied().collect();
    let others: Vec<&'static str> = names.iter().copied().filter(|p| *p != target).collect();
    let t: &'static str = names.iter().copied().find(|p| *p == target).unwrap();
    let tol = 1e-9;
    let all = |f: &dyn Fn(&Figure) -> bool| figures.iter().all(f);
    let mut out = BTreeSet::new();

    for (i, &p) in others.iter().enumerate() {
        for (j, &q) in others.iter().enumerate().skip(i + 1) {
            if all(&|g| cross(sub(g[p], g[t]), sub(g[q], g[t])).abs() < tol) {
                out.insert(set_fact("collinear", &[t, p, q]));
            }
            for &r in &others[j + 1..] {
                let concyclic = |g: &Figure| {
                    let row = |x: &str| {
                        let v = sub(g[x], g[t]);
                        [v[0], v[1], dot(v, v)]
                    };
                    let (a, b, c) = (row(p), row(q), row(r));
                    let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
                    det.abs() < tol
                };
                let lined = |g: &Figure| [(p, q), (p, r), (q, r)].iter().any(|&(x, y)| cross(sub(g[x], g[t]), sub(g[y], g[t])).abs() < tol);
                if all(&concyclic) && !lined(&figures[0]) {
                    out.insert(set_fact("concyclic", &[t, p, q, r]));
                }
            }
        }
    }

    let mut segs: Vec<[&'static str; 2]> = Vec::new();
    for (i, &a) in names.iter().enumerate() {
        for &b in &names[i + 1..] {
            segs.push([a, b]);
        }
    }
    for (i, s) in segs.iter().enumerate() {
        for r in &segs[i + 1..] {
            if !s.contains(&t) && !r.contains(&t) {
                continue;
            }
            let u = |g: &Figure| sub(g[s[1]], g[s[0]]);
            let v = |g: &Figure| sub(g[r[1]], g[r[0]]);
            let g0 = &figures[0];
            let same_line = cross(u(g0), sub(g0[r[0]], g0[s[0]])).abs() < tol && cross(u(g0), sub(g0[r[1]], g0[s[0]])).abs() < tol;
            if all(&|g| cross(u(g), v(g)).abs() < tol) && !same_line {
                out.insert(seg_fact("parallel", *s, *r));
            }
            if all(&|g| dot(u(g), v(g)).abs() < tol) {
                out.insert(seg_fact("perpendicular", *s, *r));
            }
            if all(&|g| (dot(u(g), u(g)) - dot(v(g), v(g))).abs() < tol) {
                out.insert(seg_fact("equal_length", *s, *r));
            }
        }
    }
    out
}

fn seg_points(s: &str) -> [String; 2] {
    let inner = s.strip_prefix("seg(").and_then(|s| s.strip_suffix(')')).expect("segment member");
    let (a, b) = inner.split_once(',').unwrap();
    [a.to_string(), b.to_string()]
}

/// The atomic facts involving `target` that the discovered groups assert.
fn facts_of(c_src: &str, target: &str, seed: u64) -> Result<BTreeSet<Fact>, String> {
    let c = parse(c_src).map_err(|e| e.to_string())?;
    let d = discover(&c, target, &Options { seed, ..Options::default() }).map_err(|e| e.to_string())?;
    if !d.uncertified.is_empty() {
        return Err(format!("{} groups uncertified", d.uncertified.len()));
    }
    let mut out = BTreeSet::new();
    for g in &d.certified {
        if g.verdict != Verdict::True {
            return Err(format!("{} is {}", g.key, g.verdict));
        }
        let kind = g.kind.name();
        let static_kind: &'static str = ["collinear", "concyclic", "parallel", "perpendicular", "equal_length"]
            .into_iter()
            .find(|k| *k == kind)
            .ok_or_else(|| format!("unexpected kind {kind}"))?;
        match g.kind {
            PredicateKind::Collinear | PredicateKind::Concyclic => {
                let k = if g.kind == PredicateKind::Collinear { 3 } else { 4 };
                for combo in subsets(&g.members, k) {
                    if combo.iter().any(|m| m == target) {
                        let refs: Vec<&str> = combo.iter().map(String::as_str).collect();
                        out.insert(set_fact(static_kind, &refs));
                    }
                }
            }
            _ => {
                for (i, s) in g.members.iter().enumerate() {
                    for r in &g.members[i + 1..] {
                        let (s, r) = (seg_points(s), seg_points(r));
                        if s.iter().chain(&r).any(|p| p == target) {
                            out.insert(seg_fact(static_kind, [&s[0], &s[1]], [&r[0], &r[1]]));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn subsets(items: &[String], k: usize) -> Vec<Vec<String>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x.clone());
            out.push(rest);
        }
    }
    out
}

fn predicate_of(f: &Fact) -> Predicate {
    let seg = |v: &Vec<String>| SegRef::Points(v[0].clone(), v[1].clone());
    let t = &f.1;
    match f.0 {
        "collinear" => Predicate::Collinear(t[0][0].clone(), t[0][1].clone(), t[0][2].clone()),
        "concyclic" => Predicate::Concyclic(t[0][0].clone(), t[0][1].clone(), t[0][2].clone(), t[0][3].clone()),
        "parallel" => Predicate::Parallel(seg(&t[0]), seg(&t[1])),
        "perpendicular" => Predicate::Perpendicular(seg(&t[0]), seg(&t[1])),
        "equal_length" => Predicate::EqualLength(seg(&t[0]), seg(&t[1])),
        k => panic!("unexpected kind {k}"),
    }
}

/// Compares `discover` on `target` with the brute-force oracle and with
/// individual proofs, over three seed tuples. Returns the number of facts.
pub fn check_against_oracle(src: &str, target: &str, figure: fn(&mut ChaCha8Rng) -> Figure) -> Result<usize, String> {
    let c = parse(src).map_err(|e| e.to_string())?;
    let mut count = 0;
    for tuple in [1u64, 2, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(tuple);
        let figures: Vec<Figure> = (0..3).map(|_| figure(&mut rng)).collect();
        let expected = oracle(&figures, target);
        if expected.is_empty() {
            return Err("the oracle found nothing".into());
        }
        for f in &expected {
            let r = prove(&c, &predicate_of(f), &Options::default()).map_err(|e| e.to_string())?;
            if r.verdict != Verdict::True {
                return Err(format!("{f:?} is {}", r.verdict));
            }
        }
        let found = facts_of(src, target, tuple * 101)?;
        if found != expected {
            let missing: Vec<_> = expected.difference(&found).collect();
            let extra: Vec<_> = found.difference(&expected).collect();
            return Err(format!("seed tuple {tuple}: missing {missing:?}, extra {extra:?}"));
        }
        count = expected.len();
    }
    Ok(count)
}
