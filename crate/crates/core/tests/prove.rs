use mg_core::construction::parse;
use mg_core::reason::{discover_conditions, prove_statement, Options, Verdict};

fn verdict(src: &str, label: &str) -> Verdict {
    let c = parse(src).unwrap();
    let r = prove_statement(&c, label, &Options::default()).unwrap();
    assert!(r.certificate.replay(&Options::default().limits()).unwrap(), "certificate replays");
    r.verdict
}

const VARIGNON: &str = "point A free
point B free
point C free
point D free
point P = midpoint(A, B)
point Q = midpoint(B, C)
point R = midpoint(C, D)
point S = midpoint(D, A)
statement pq_sr = parallel(seg(P, Q), seg(S, R))
statement ps_qr = parallel(seg(P, S), seg(Q, R))
statement diag = perpendicular(seg(A, C), seg(B, D))";

#[test]
fn varignon_parallelogram() {
    assert_eq!(verdict(VARIGNON, "pq_sr"), Verdict::True);
    assert_eq!(verdict(VARIGNON, "ps_qr"), Verdict::True);
    assert_eq!(verdict(VARIGNON, "diag"), Verdict::False);
}

#[test]
fn midsegment_and_thales() {
    let src = "point A free
point B free
point C free
point M = midpoint(A, B)
point N = midpoint(A, C)
statement mid = parallel(seg(M, N), seg(B, C))
statement half = eq(4*sqdist(M, N), sqdist(B, C))
statement wrong = eq(sqdist(M, N), sqdist(B, C))";
    assert_eq!(verdict(src, "mid"), Verdict::True);
    assert_eq!(verdict(src, "half"), Verdict::True);
    assert_eq!(verdict(src, "wrong"), Verdict::False);
    let thales = "point A free
point B free
circle k = circle_diameter(A, B)
point P = on_circle(k)
statement right = perpendicular(seg(P, A), seg(P, B))";
    assert_eq!(verdict(thales, "right"), Verdict::True);
}

#[test]
fn perpendicular_bisectors_concur() {
    let src = "point A free
point B free
point C free
point Mab = midpoint(A, B)
point Mbc = midpoint(B, C)
point Mca = midpoint(C, A)
line lab = line(A, B)
line lbc = line(B, C)
line lca = line(C, A)
line pab = perpendicular(Mab, lab)
line pbc = perpendicular(Mbc, lbc)
line pca = perpendicular(Mca, lca)
point O = intersect(pab, pbc)
statement concur = point_on(O, pca)
statement equi = equal_length(seg(O, A), seg(O, C))";
    assert_eq!(verdict(src, "concur"), Verdict::True);
    assert_eq!(verdict(src, "equi"), Verdict::True);
}

#[test]
fn tetrahedron_midpoints() {
    let src = "dimension 3
point A free
point B free
point C free
point D free
point P = midpoint(A, B)
point Q = midpoint(C, D)
point R = midpoint(A, C)
point S = midpoint(B, D)
point G = midpoint(P, Q)
statement g = midpoint_of(G, R, S)
statement coplanar = collinear(P, Q, R)";
    assert_eq!(verdict(src, "g"), Verdict::True);
    assert_eq!(verdict(src, "coplanar"), Verdict::False);
}

#[test]
fn conditions_for_perpendicular_diagonals() {
    let src = "point A free
point B free
point C free
point M = midpoint(B, C)
statement iso = perpendicular(seg(A, M), seg(B, C))";
    let c = parse(src).unwrap();
    assert_eq!(prove_statement(&c, "iso", &Options::default()).unwrap().verdict, Verdict::False);
    let conds = discover_conditions(&c, &c.statements[0].predicate, &Options::default()).unwrap();
    assert_eq!(conds.formatted(), ["B_x^2 - C_x^2 - C_y^2"]);
}
