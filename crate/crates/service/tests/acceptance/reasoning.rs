//! Criteria on the reasoning commands, each against its own oracle.

use crate::discover_oracle::{check_against_oracle, square_figure, varignon_figure, SQUARE, VARIGNON};
use crate::oracles::{normalized, resultant};
use crate::{corpus_dir, corpus_source, ensure, Outcome};
use mg_core::construction::{parse, parse_measure, Construction};
use mg_core::reason::{compare, envelope, locus_equation, relate, Curve, Direction, Options};
use mg_poly::{exact_div, gcd, MonomialOrder, Polynomial, Rat, VarNames};
use mg_service::{corpus, Settings};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const VERDICT_BUDGET_MS: u64 = 60_000;

fn options() -> Options {
    Settings::default().options()
}

fn load(name: &str) -> Construction {
    parse(&corpus_source(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn xy_names() -> VarNames {
    let mut n = VarNames::new();
    n.intern("x");
    n.intern("y");
    n
}

/// A curve's polynomial re-read over the names `x`, `y`.
fn reread(curve: &Curve, p: &Polynomial, names: &VarNames) -> Polynomial {
    names.parse(&curve.format(p)).unwrap_or_else(|e| panic!("{}: {e}", curve.format(p)))
}

pub fn theorem_corpus() -> Outcome {
    let report = corpus::run(&corpus_dir(), &Settings::default()).map_err(|e| e.to_string())?;
    let statements: Vec<_> = report.checks.iter().filter(|c| c.item.starts_with("statement ")).collect();
    for c in &statements {
        ensure(c.passed, || format!("{} {}: expected {}, got {}", c.file, c.item, c.expected, c.actual))?;
        ensure(c.actual != "UNKNOWN", || format!("{} {} is UNKNOWN", c.file, c.item))?;
        ensure(c.timing_ms <= VERDICT_BUDGET_MS, || format!("{} {} took {} ms", c.file, c.item, c.timing_ms))?;
    }
    let true_files: std::collections::BTreeSet<&str> = statements.iter().filter(|c| c.actual == "TRUE").map(|c| c.file.as_str()).collect();
    let falses = statements.iter().filter(|c| c.actual == "FALSE").count();
    for required in ["varignon", "midsegment", "perpendicular_bisectors", "thales", "clough", "tetrahedron"] {
        ensure(true_files.contains(required), || format!("no TRUE verdict for {required}"))?;
    }
    for label in ["concurrent", "bisects13", "bisects24", "bisects56"] {
        let item = format!("statement {label}");
        ensure(statements.iter().any(|c| c.file == "tetrahedron" && c.item == item && c.actual == "TRUE"), || format!("tetrahedron {label} is not TRUE"))?;
    }
    ensure(true_files.len() >= 10, || format!("only {} constructions proved", true_files.len()))?;
    ensure(falses >= 3, || format!("only {falses} false statements refuted"))?;
    let slowest = statements.iter().map(|c| c.timing_ms).max().unwrap_or(0);
    Ok(format!("{} constructions with TRUE verdicts, {falses} refuted, no UNKNOWN, slowest verdict {slowest} ms", true_files.len()))
}

/// Parameter `s` with `X = A + s (C - A)` where line `D P` meets `A C`,
/// for the unit square `A = (0, 0)`, `B = (1, 0)`, `C = (1, 1)`, `D = (0, 1)`
/// and `P = (k / 3, 0)`.
fn icmi_parameter(k: i64) -> Rat {
    let r = Rat::from_int;
    let (a, c, d, p) = ([r(0), r(0)], [r(1), r(1)], [r(0), r(1)], [Rat::new(k, 3), r(0)]);
    // a + s (c - a) = d + u (p - d), solved by Cramer's rule
    let e = [&c[0] - &a[0], &c[1] - &a[1]];
    let f = [&d[0] - &p[0], &d[1] - &p[1]];
    let g = [&d[0] - &a[0], &d[1] - &a[1]];
    let det = &(&e[0] * &f[1]) - &(&e[1] * &f[0]);
    let num = &(&g[0] * &f[1]) - &(&g[1] * &f[0]);
    &num / &det
}

pub fn relation_exactness() -> Outcome {
    let opts = options();
    let c = load("clough");
    let (feet, side) = (parse_measure("feet", &c).unwrap(), parse_measure("length(A, B)", &c).unwrap());
    let r = relate(&c, &feet, &side, &opts).map_err(|e| e.to_string())?;
    ensure(r.certified, || "Clough relation is not certified".into())?;
    ensure(r.ratio == Some(Rat::new(3, 2)), || format!("Clough ratio is {:?}", r.ratio.as_ref().map(Rat::to_string)))?;

    let c = load("icmi");
    let ac = parse_measure("length(A, C)", &c).unwrap();
    let mut found = Vec::new();
    for (k, point, paper) in [(1, "X", Rat::new(1, 4)), (2, "Y", Rat::new(2, 5))] {
        let oracle = icmi_parameter(k);
        ensure(oracle == paper, || format!("oracle gives {oracle} for {point}, expected {paper}"))?;
        let e = parse_measure(&format!("length(A, {point})"), &c).unwrap();
        let r = relate(&c, &e, &ac, &opts).map_err(|e| e.to_string())?;
        ensure(r.certified && r.ratio.as_ref() == Some(&oracle), || format!("{point}: ratio {:?}, oracle {oracle}", r.ratio.as_ref().map(Rat::to_string)))?;
        found.push(oracle.to_string());
    }
    Ok(format!("Clough ratio 3/2 certified; diagonal parameters {} match the exact intersection oracle", found.join(" and ")))
}

/// Points of the geometric-mean locus from bisection on the signed
/// residual `y^4 - x^2 (1 - x)^2` along 50 vertical lines.
fn traced_points() -> Vec<(f64, f64)> {
    let residual = |x: f64, y: f64| y.powi(4) - (x * (1.0 - x)).powi(2);
    (0..50)
        .filter_map(|i| {
            let x = -1.0 + 3.0 * (i as f64 + 0.5) / 50.0;
            let (mut lo, mut hi) = (0.0, 4.0);
            if residual(x, lo) >= 0.0 || residual(x, hi) <= 0.0 {
                return None;
            }
            for _ in 0..200 {
                let m = (lo + hi) / 2.0;
                if residual(x, m) < 0.0 {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            Some((x, (lo + hi) / 2.0))
        })
        .collect()
}

pub fn locus() -> Outcome {
    let names = xy_names();
    // hand elimination: with F = (x, 0), |CF|^4 = |AF|^2 |FB|^2 reads y^4 = x^2 (1 - x)^2
    let hand = names.parse("y^4 - x^2*(1 - x)^2").unwrap();
    let expected: Vec<Polynomial> = ["x^2 + y^2 - x", "x^2 - y^2 - x"].iter().map(|s| names.parse(s).unwrap()).collect();
    ensure(normalized(&(&expected[0] * &expected[1])) == normalized(&hand), || "the two components do not multiply to the hand elimination".into())?;

    let c = load("geometric_mean");
    let stmt = c.statement("mean").unwrap();
    let curve = locus_equation(&c, &stmt.predicate, "C", &options()).map_err(|e| e.to_string())?;
    let comps: Vec<Polynomial> = curve.components().into_iter().map(|p| reread(&curve, p, &names)).collect();
    for e in &expected {
        ensure(comps.iter().any(|p| normalized(p) == normalized(e)), || format!("{} missing from {:?}", names.format(e), comps.iter().map(|p| names.format(p)).collect::<Vec<_>>()))?;
    }

    let points = traced_points();
    ensure(points.len() == 50, || format!("only {} traced points", points.len()))?;
    let (x, y) = (names.get("x").unwrap(), names.get("y").unwrap());
    let mut worst = 0.0f64;
    for (px, py) in &points {
        let at = |v| if v == x { *px } else if v == y { *py } else { f64::NAN };
        let best = expected.iter().map(|f| f.eval_f64(at).abs()).fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    ensure(worst <= 1e-9, || format!("a traced point is {worst:e} off the locus"))?;
    Ok(format!("components x^2 + y^2 - x and x^2 - y^2 - x found, 50 traced points within {worst:.1e}"))
}

/// Maximum of `perimeter / circumradius = 2 (sin a + sin b + sin c)` over
/// triangles, by nested golden-section search on two angles.
fn max_perimeter_ratio() -> f64 {
    let pi = std::f64::consts::PI;
    let golden = |lo: f64, hi: f64, f: &dyn Fn(f64) -> f64| -> (f64, f64) {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let (c, d) = (b - r * (b - a), a + r * (b - a));
            if f(c) > f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let m = (a + b) / 2.0;
        (m, f(m))
    };
    let ratio = |a: f64, b: f64| 2.0 * (a.sin() + b.sin() + (pi - a - b).sin());
    let best_for = |a: f64| golden(0.0, pi - a, &|b| ratio(a, b)).1;
    golden(0.0, pi, &best_for).1
}

fn circumradius_ratio(p: &[[f64; 2]; 3]) -> Option<f64> {
    let d = |i: usize, j: usize| ((p[i][0] - p[j][0]).powi(2) + (p[i][1] - p[j][1]).powi(2)).sqrt();
    let (a, b, c) = (d(1, 2), d(2, 0), d(0, 1));
    let area = ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])).abs() / 2.0;
    if area < 1e-9 {
        return None;
    }
    Some((a + b + c) / (a * b * c / (4.0 * area)))
}

pub fn compare_conjecture() -> Outcome {
    let oracle = max_perimeter_ratio();
    ensure((oracle - 5.196152).abs() < 1e-6, || format!("numeric maximum {oracle}"))?;

    let c = load("perimeter_circumradius");
    let (e1, e2) = (parse_measure("perimeter", &c).unwrap(), parse_measure("circumradius(A, B, C)", &c).unwrap());
    let r = compare(&c, &e1, &e2, &options()).map_err(|e| e.to_string())?;
    let bound = r.bounds.iter().find(|b| b.direction == Direction::AtMost).ok_or("no upper bound")?;
    let k = bound.recognized.as_ref().ok_or("the upper bound was not recognized")?;
    ensure(k.polynomial_text() == "k^2 - 27", || format!("minimal polynomial {}", k.polynomial_text()))?;
    ensure((k.root - oracle).abs() < 1e-6 && (bound.constant - oracle).abs() < 1e-6, || format!("bound {} (root {}) against oracle {oracle}", bound.constant, k.root))?;

    let w: Vec<[f64; 2]> = ["A", "B", "C"].iter().map(|p| bound.witness.get(*p).map(|v| [v[0], v[1]])).collect::<Option<_>>().ok_or("witness lacks a vertex")?;
    let side = |i: usize, j: usize| ((w[i][0] - w[j][0]).powi(2) + (w[i][1] - w[j][1]).powi(2)).sqrt();
    let sides = [side(0, 1), side(1, 2), side(2, 0)];
    let spread = sides.iter().cloned().fold(0.0, f64::max) / sides.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    ensure(spread < 1e-3, || format!("witness sides {sides:?} are not equal"))?;

    let mut rng = StdRng::seed_from_u64(100_000);
    let mut tested = 0;
    let mut worst = 0.0f64;
    while tested < 100_000 {
        let mut pt = || [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let tri = [pt(), pt(), pt()];
        if let Some(q) = circumradius_ratio(&tri) {
            worst = worst.max(q);
            tested += 1;
        }
    }
    ensure(worst <= k.root * (1.0 + 1e-12), || format!("a sample reaches {worst}, above {}", k.root))?;
    Ok(format!("perimeter/R <= {:.9} with minimal polynomial k^2 - 27, equilateral witness, 100000 samples below it (max {worst:.6})", k.root))
}

pub fn discover_soundness() -> Outcome {
    let v = check_against_oracle(VARIGNON, "P", varignon_figure)?;
    let s = check_against_oracle(SQUARE, "O", square_figure)?;
    Ok(format!("Varignon ({v} facts) and square center ({s} facts) match the brute-force oracle on 3 seed tuples"))
}

/// Envelope of `F(t, x, y) = 0` as the resultant of `F` and `dF/dt` in `t`,
/// with the factors of the leading coefficient in `t` removed and repeated
/// factors collapsed.
fn envelope_oracle(family: &str) -> Polynomial {
    let mut names = xy_names();
    let t = names.intern("t");
    let f = names.parse(family).unwrap();
    let mut r = resultant(&f, &f.derivative(t), t);
    let lead = f.coefficients_in(t).last().cloned().unwrap();
    loop {
        let g = gcd(&r, &lead);
        if g.is_constant() {
            break;
        }
        r = exact_div(&r, &g).unwrap();
    }
    let (x, y) = (names.get("x").unwrap(), names.get("y").unwrap());
    let repeated = gcd(&gcd(&r, &r.derivative(x)), &r.derivative(y));
    normalized(&exact_div(&r, &repeated).unwrap().with_order(&MonomialOrder::DegRevLex))
}

pub fn envelopes() -> Outcome {
    // P = (t, 0) with unit radius; lines through (t, 0) perpendicular to the
    // direction to (0, 1); the line through the feet of the rational point
    // ((1 - t^2) / (1 + t^2), 2t / (1 + t^2)) on the unit circle.
    let cases = [
        ("envelope_circles", "k", None, "(x - t)^2 + y^2 - 1"),
        ("envelope_parabola", "l", Some("P"), "y - t*x + t^2"),
        ("envelope_astroid", "l", Some("P"), "2*t*(1 + t^2)*x + (1 - t^4)*y - 2*t*(1 - t^2)"),
    ];
    let names = xy_names();
    let mut shown = Vec::new();
    for (file, curve, moving, family) in cases {
        let oracle = envelope_oracle(family);
        let c = load(file);
        let result = envelope(&c, curve, moving, &options()).map_err(|e| format!("{file}: {e}"))?;
        let ours = normalized(&reread(&result, &result.equation(), &names));
        // x and y are the first two names on both sides
        ensure(ours == oracle, || format!("{file}: {} against oracle {}", names.format(&ours), names.format(&oracle)))?;
        shown.push(names.format(&ours));
    }
    let short: Vec<String> = shown.iter().map(|s| if s.len() > 24 { format!("{}...", &s[..24]) } else { s.clone() }).collect();
    Ok(format!("{} match their resultant oracles", short.join("; ")))
}
