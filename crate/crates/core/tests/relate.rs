use mg_core::construction::{parse, parse_measure};
use mg_core::reason::{compare, relate, Direction, Options, RelationKind};
use mg_poly::Rat;

const CLOUGH: &str = "point A free
point B free
point C = equilateral(A, B)
segment s = segment(B, C)
point P = on_line(s)
segment m = segment(A, P)
point D = on_line(m)
line a = line(B, C)
line b = line(C, A)
line c = line(A, B)
point E = foot(D, b)
point F = foot(D, a)
point G = foot(D, c)
statement main = eq(2*(length(E, C) + length(F, B) + length(G, A)), 3*length(A, B))";

#[test]
fn clough_ratio() {
    let c = parse(CLOUGH).unwrap();
    let e1 = parse_measure("length(E, C) + length(F, B) + length(G, A)", &c).unwrap();
    let e2 = parse_measure("length(A, B)", &c).unwrap();
    let r = relate(&c, &e1, &e2, &Options::default()).unwrap();
    assert_eq!(r.kind, RelationKind::Equality, "{:?}", r.factors.iter().map(|f| r.format(f)).collect::<Vec<_>>());
    assert!(r.certified);
    assert_eq!(r.ratio, Some(Rat::new(3, 2)));
}

const ICMI: &str = "point A free
point B free
point C = rotate90(A, B, -1)
point D = rotate90(B, A, 1)
point P1 = divide(A, B, 1, 3)
point P2 = divide(A, B, 2, 3)
line diag = line(A, C)
line d1 = line(D, P1)
line d2 = line(D, P2)
point X = intersect(d1, diag)
point Y = intersect(d2, diag)";

#[test]
fn icmi_diagonal_parameters() {
    let c = parse(ICMI).unwrap();
    let ac = parse_measure("length(A, C)", &c).unwrap();
    for (point, ratio) in [("X", Rat::new(1, 4)), ("Y", Rat::new(2, 5))] {
        let e = parse_measure(&format!("length(A, {point})"), &c).unwrap();
        let r = relate(&c, &e, &ac, &Options::default()).unwrap();
        assert_eq!(r.kind, RelationKind::Equality, "{:?}", r.factors.iter().map(|f| r.format(f)).collect::<Vec<_>>());
        assert_eq!(r.ratio, Some(ratio));
    }
}

#[test]
fn midsegment_and_self_comparison() {
    let c = parse("point A free\npoint B free\npoint C free\npoint M = midpoint(A, B)\npoint N = midpoint(A, C)").unwrap();
    let mn = parse_measure("length(M, N)", &c).unwrap();
    let bc = parse_measure("length(B, C)", &c).unwrap();
    assert_eq!(relate(&c, &mn, &bc, &Options::default()).unwrap().ratio, Some(Rat::new(1, 2)));
    let same = compare(&c, &bc, &bc, &Options::default()).unwrap();
    assert_eq!((same.kind, same.ratio), (RelationKind::Equality, Some(Rat::from_int(1))));
}

#[test]
fn perimeter_against_circumradius() {
    let c = parse("point A free\npoint B free\npoint C free").unwrap();
    let p = parse_measure("length(A, B) + length(B, C) + length(C, A)", &c).unwrap();
    let r = parse_measure("circumradius(A, B, C)", &c).unwrap();
    let rel = compare(&c, &p, &r, &Options::default()).unwrap();
    assert_eq!(rel.kind, RelationKind::Inequality);
    assert!(!rel.certified);
    let upper = rel.bounds.iter().find(|b| b.direction == Direction::AtMost).expect("upper bound");
    assert!((upper.constant - 27f64.sqrt()).abs() < 1e-6, "{}", upper.constant);
    assert_eq!(upper.recognized.as_ref().unwrap().polynomial_text(), "k^2 - 27");
}

#[test]
fn triangle_inequality() {
    let c = parse("point A free\npoint B free\npoint C free").unwrap();
    let e1 = parse_measure("length(A, B) + length(B, C)", &c).unwrap();
    let e2 = parse_measure("length(A, C)", &c).unwrap();
    let rel = compare(&c, &e1, &e2, &Options::default()).unwrap();
    let lower = rel.bounds.iter().find(|b| b.direction == Direction::AtLeast).unwrap_or_else(|| panic!("{:?}", rel.bounds));
    assert_eq!(lower.recognized.as_ref().unwrap().polynomial_text(), "k - 1");
    assert!(rel.bounds.iter().all(|b| b.direction == Direction::AtLeast), "{:?}", rel.bounds);
}
