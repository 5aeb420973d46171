//! Exact division and multivariate gcd over Q (recursive primitive
//! pseudo-remainder sequences).

use crate::monomial::{Monomial, Var};
use crate::order::MonomialOrder;
use crate::polynomial::Polynomial;
use crate::rational::Rat;

/// `a / b` when `b` divides `a` exactly, `None` otherwise.
pub fn exact_div(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    assert!(!b.is_zero(), "division by zero polynomial");
    let b = b.with_order(a.order());
    let (lm, lc) = b.leading_term().unwrap();
    let mut rem = a.clone();
    let mut quot = Vec::new();
    while let Some((m, c)) = rem.leading_term() {
        let q = m.div(lm)?;
        let k = c / lc;
        rem = rem.sub_mul_term(&k, &q, &b);
        quot.push((q, k));
    }
    Some(Polynomial::from_terms(quot, a.order()))
}

/// Normalizes a gcd: integer coefficients, content 1, positive leading
/// coefficient (degrevlex).
fn normalize(p: Polynomial) -> Polynomial {
    p.with_order(&MonomialOrder::DegRevLex).primitive()
}

/// Greatest common divisor, normalized as by [`Polynomial::primitive`].
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let o = MonomialOrder::DegRevLex;
    if a.is_zero() {
        return normalize(b.clone());
    }
    if b.is_zero() {
        return normalize(a.clone());
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(&o);
    }
    let (a, b) = (normalize(a.clone()), normalize(b.clone()));
    if a == b {
        return a;
    }
    let (va, vb) = (a.vars(), b.vars());
    let shared = va.intersection(&vb).min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v)).copied();
    let v = shared.unwrap_or_else(|| *va.union(&vb).next().unwrap());
    match (a.contains_var(v), b.contains_var(v)) {
        (true, false) => gcd(&content_in(&a, v), &b),
        (false, true) => gcd(&a, &content_in(&b, v)),
        _ => {
            let (ca, cb) = (content_in(&a, v), content_in(&b, v));
            let c = gcd(&ca, &cb);
            let pa = exact_div(&a, &ca).unwrap();
            let pb = exact_div(&b, &cb).unwrap();
            let g = primitive_prs(pa, pb, v);
            normalize(&c * &g)
        }
    }
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Polynomial, v: Var) -> Polynomial {
    let mut coeffs = p.coefficients_in(v);
    coeffs.retain(|c| !c.is_zero());
    coeffs.sort_by_key(|c| c.len());
    let mut g = Polynomial::zero(&MonomialOrder::DegRevLex);
    for c in coeffs {
        g = gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g
}

/// Primitive part of `p` with respect to `v`, with integer content removed.
pub fn primitive_in(p: &Polynomial, v: Var) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    normalize(exact_div(p, &content_in(p, v)).unwrap())
}

/// gcd of two polynomials that are primitive in `v`, via the subresultant
/// remainder sequence (coefficient growth stays polynomial).
fn primitive_prs(a: Polynomial, b: Polynomial, v: Var) -> Polynomial {
    let o = MonomialOrder::DegRevLex;
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    let mut g = Polynomial::one(&o);
    let mut h = Polynomial::one(&o);
    loop {
        let d = a.degree_in(v) - b.degree_in(v);
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            return primitive_in(&b, v);
        }
        if r.degree_in(v) == 0 {
            return Polynomial::one(&o);
        }
        let denom = &g * &h.pow(d);
        a = b;
        b = exact_div(&r, &denom).expect("subresultant division is exact");
        g = a.coefficients_in(v).pop().unwrap();
        h = if d == 0 { h } else { exact_div(&g.pow(d), &h.pow(d - 1)).expect("exact") };
    }
}

/// Pseudo-remainder of `a` by `b` in `v`: `lc(b)^(deg a - deg b + 1) * a mod b`.
pub fn pseudo_rem(a: &Polynomial, b: &Polynomial, v: Var) -> Polynomial {
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    let o = a.order().clone();
    if da < db {
        return a.clone();
    }
    let lb = b.coefficients_in(v).pop().unwrap();
    let b = b.with_order(&o);
    let mut r = a.clone();
    let mut steps = 0;
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coefficients_in(v).pop().unwrap();
        let shift = Polynomial::monomial(Monomial::var_pow(v, dr - db), Rat::one(), &o);
        r = &(&lb * &r) - &(&(&lr * &shift) * &b);
        steps += 1;
    }
    &r * &lb.pow(da - db + 1 - steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::names::VarNames;

    fn names() -> VarNames {
        let mut n = VarNames::new();
        for v in ["x", "y", "z"] {
            n.intern(v);
        }
        n
    }

    #[test]
    fn gcd_examples() {
        let n = names();
        let p = |s: &str| n.parse(s).unwrap();
        assert_eq!(gcd(&p("x^2 - y^2"), &p("x^2 + 2*x*y + y^2")), p("x + y"));
        assert_eq!(gcd(&p("6*x*y"), &p("4*x^2")), p("x"));
        assert_eq!(gcd(&p("x + 1"), &p("y + 1")), p("1"));
        let a = p("(x*y + z)^2*(x - z)");
        let b = p("(x*y + z)*(y + 1)*(x - z)^3");
        assert_eq!(gcd(&a, &b), p("(x*y + z)*(x - z)"));
    }

    #[test]
    fn division() {
        let n = names();
        let p = |s: &str| n.parse(s).unwrap();
        assert_eq!(exact_div(&p("x^2 - y^2"), &p("x - y")), Some(p("x + y")));
        assert_eq!(exact_div(&p("x^2 + 1"), &p("x - y")), None);
        assert_eq!(content_in(&p("x*y^2 + x*y"), n.get("y").unwrap()), p("x"));
    }
}
