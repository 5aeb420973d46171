//! Bounded factorization over Q.
//!
//! The polynomial is split into integer content, monomial content and a
//! squarefree decomposition (Yun, one variable at a time). Each squarefree
//! part is then split by Kronecker's method generalized to several
//! variables: a factor of degree `d` in the main variable is interpolated
//! from its values at `d + 1` integer points, where each value must divide
//! the (recursively factored) specialization of the input. The search is
//! capped; when a cap is hit the part is kept whole and the result is
//! marked incomplete.

use crate::gcd::{content_in, exact_div, gcd};
use crate::monomial::{Monomial, Var};
use crate::order::MonomialOrder;
use crate::polynomial::Polynomial;
use crate::rational::Rat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Largest main-variable degree of a factor that is searched for.
const MAX_FACTOR_DEGREE: u32 = 4;
/// Cap on the number of interpolation candidates per search.
const MAX_CANDIDATES: u64 = 50_000;
/// Integer contents above this are not factored into divisors.
const MAX_CONTENT: i64 = 1_000_000_000_000;
/// Univariate parts above this degree are not split.
const MAX_UNIVARIATE_DEGREE: usize = 16;
/// Number of integer specializations tried for interpolation points.
const POINT_POOL: i64 = 12;
/// Multivariate splitting attempts per factorization, counted across the
/// recursive factorizations of specializations.
const MAX_SPLITS: u32 = 400;

struct Work(std::cell::Cell<u32>);

impl Work {
    fn spend(&self) -> bool {
        let left = self.0.get();
        if left == 0 {
            return false;
        }
        self.0.set(left - 1);
        true
    }
}

/// `unit * Π factor^multiplicity`, with each factor having integer
/// coefficients, content 1 and a positive degrevlex leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rat,
    pub factors: Vec<(Polynomial, u32)>,
    /// False when a search bound was exceeded; some factor may then be
    /// reducible, but the product is still exact.
    pub complete: bool,
}

impl Factorization {
    pub fn expand(&self) -> Polynomial {
        let o = MonomialOrder::DegRevLex;
        let mut acc = Polynomial::constant(self.unit.clone(), &o);
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }
}

/// Factors `f` (nonzero) into irreducible factors with multiplicities.
pub fn factor_squarefree(f: &Polynomial) -> Factorization {
    factor_within(f, &Work(std::cell::Cell::new(MAX_SPLITS)))
}

fn factor_within(f: &Polynomial, work: &Work) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let o = MonomialOrder::DegRevLex;
    let f = f.with_order(&o);
    let mut complete = true;
    let (_, mut p) = f.primitive_integer();
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();

    for v in p.vars() {
        let e = p.terms().iter().map(|(m, _)| m.exponent(v)).min().unwrap_or(0);
        if e > 0 {
            factors.push((Polynomial::var(v, &o), e));
            p = exact_div(&p, &Polynomial::monomial(Monomial::var_pow(v, e), Rat::one(), &o)).unwrap();
        }
    }
    for (q, m) in squarefree_parts(&p) {
        for g in irreducible_factors(&q, &mut complete, work) {
            factors.push((g, m));
        }
    }

    let mut merged: BTreeMap<String, (Polynomial, u32)> = BTreeMap::new();
    for (g, m) in factors {
        let g = g.primitive();
        merged.entry(sort_key(&g)).and_modify(|e| e.1 += m).or_insert((g, m));
    }
    let factors: Vec<(Polynomial, u32)> = merged.into_values().collect();
    let mut fz = Factorization { unit: Rat::one(), factors, complete };
    let prod = fz.expand();
    fz.unit = f.leading_coeff().unwrap() / prod.leading_coeff().unwrap();
    fz
}

fn sort_key(p: &Polynomial) -> String {
    format!("{:06}|{:06}|{}", p.total_degree(), p.len(), p)
}

/// Squarefree decomposition of a primitive polynomial: pairs `(q, m)`
/// with pairwise coprime squarefree `q` and `p = c * Π q^m`.
fn squarefree_parts(p: &Polynomial) -> Vec<(Polynomial, u32)> {
    if p.is_constant() {
        return Vec::new();
    }
    let v = *p.vars().iter().next().unwrap();
    let c = content_in(p, v);
    let pp = exact_div(p, &c).unwrap();
    let mut out = squarefree_parts(&c);
    out.extend(yun(&pp, v));
    out
}

/// Yun's algorithm for `f` primitive in `v`.
fn yun(f: &Polynomial, v: Var) -> Vec<(Polynomial, u32)> {
    let mut out = Vec::new();
    let df = f.derivative(v);
    let a = gcd(f, &df);
    let mut b = exact_div(f, &a).unwrap();
    let c = exact_div(&df, &a).unwrap();
    let mut d = &c - &b.derivative(v);
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        let c = exact_div(&d, &a).unwrap();
        b = exact_div(&b, &a).unwrap();
        d = &c - &b.derivative(v);
        i += 1;
    }
    out
}

/// Irreducible factors of a squarefree primitive polynomial.
fn irreducible_factors(q: &Polynomial, complete: &mut bool, work: &Work) -> Vec<Polynomial> {
    if q.is_constant() {
        return Vec::new();
    }
    let vars = q.vars();
    for &v in &vars {
        let c = content_in(q, v);
        if !c.is_constant() {
            let mut out = irreducible_factors(&c, complete, work);
            out.extend(irreducible_factors(&exact_div(q, &c).unwrap(), complete, work));
            return out;
        }
    }
    // primitive and linear in some variable: irreducible
    if vars.iter().any(|&v| q.degree_in(v) == 1) {
        return vec![q.clone()];
    }
    if vars.len() == 1 {
        let v = *vars.iter().next().unwrap();
        return match univariate_factors(q, v) {
            Some(fs) => fs,
            None => {
                *complete = false;
                vec![q.clone()]
            }
        };
    }
    if !work.spend() {
        *complete = false;
        return vec![q.clone()];
    }
    let v = *vars.iter().min_by_key(|&&v| (q.degree_in(v), v)).unwrap();
    let deg = q.degree_in(v);
    if deg / 2 > MAX_FACTOR_DEGREE {
        *complete = false;
    }
    let mut pool: Vec<PointDivisors> = Vec::new();
    for k in 0..POINT_POOL {
        let a = if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 };
        if let Some(pd) = point_divisors(q, v, a, work) {
            pool.push(pd);
        }
    }
    pool.sort_by_key(|p| (p.divisors.len(), p.at.abs(), p.at));
    for d in 1..=(deg / 2).min(MAX_FACTOR_DEGREE) {
        match kronecker_search(q, v, d, &pool) {
            Search::Found(g) => {
                let rest = exact_div(q, &g).unwrap();
                let mut out = vec![g.primitive()];
                out.extend(irreducible_factors(&rest, complete, work));
                return out;
            }
            Search::None => {}
            Search::GaveUp => {
                *complete = false;
                return vec![q.clone()];
            }
        }
    }
    vec![q.clone()]
}

/// Factors a squarefree primitive univariate polynomial by grouping its
/// numerically computed complex roots: every factor over Z is, up to
/// scaling by the leading coefficient, a product of `x - r` over a subset
/// of roots with integer coefficients. Candidates are verified exactly.
fn univariate_factors(q: &Polynomial, v: Var) -> Option<Vec<Polynomial>> {
    let o = MonomialOrder::DegRevLex;
    let n = q.degree_in(v) as usize;
    if n <= 1 {
        return Some(vec![q.clone()]);
    }
    if n > MAX_UNIVARIATE_DEGREE {
        return None;
    }
    let coeffs: Vec<f64> = q.coefficients_in(v).iter().map(|c| c.constant_value().unwrap_or_default().to_f64()).collect();
    if coeffs.iter().any(|c| !c.is_finite() || c.abs() > 1e15) {
        return None;
    }
    let mut roots = polynomial_roots(&coeffs)?;
    let lc = coeffs[n];
    let mut rest = q.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while size * 2 <= roots.len() {
        let mut found = None;
        for subset in subsets(roots.len(), size) {
            let chosen: Vec<Complex64> = subset.iter().map(|&i| roots[i]).collect();
            if let Some(g) = integer_candidate(&chosen, lc, v, &o) {
                if exact_div(&rest, &g).is_some() {
                    found = Some((subset, g));
                    break;
                }
            }
        }
        match found {
            Some((subset, g)) => {
                rest = exact_div(&rest, &g).unwrap();
                out.push(g.primitive());
                for i in subset.into_iter().rev() {
                    roots.remove(i);
                }
            }
            None => size += 1,
        }
    }
    out.push(rest.primitive());
    Some(out)
}

/// `lc * Π (x - r)` rounded to integer coefficients, if it is close to one.
fn integer_candidate(roots: &[Complex64], lc: f64, v: Var, o: &MonomialOrder) -> Option<Polynomial> {
    let mut c = vec![Complex64::new(lc, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * r;
        }
        c = next;
    }
    let mut ints = Vec::with_capacity(c.len());
    for ck in &c {
        let tol = 1e-6 * (1.0 + ck.norm());
        let rounded = ck.re.round();
        if ck.im.abs() > tol || (ck.re - rounded).abs() > tol || rounded.abs() > 1e15 {
            return None;
        }
        ints.push(Polynomial::constant(Rat::from_int(rounded as i64), o));
    }
    let g = Polynomial::from_coefficients(v, &ints, o);
    (g.degree_in(v) as usize == roots.len()).then_some(g)
}

/// All complex roots via the Aberth-Ehrlich iteration; `None` when the
/// iteration fails to converge.
fn polynomial_roots(coeffs: &[f64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lc = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| Complex64::new(c / lc, 0.0)).collect();
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound * 0.7, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if i != j {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            return Some(z);
        }
    }
    // accept slow convergence when the residuals are tiny
    let ok = z.iter().all(|&x| eval(x).0.norm() <= 1e-8 * (1.0 + x.norm()).powi(n as i32));
    ok.then_some(z)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
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

enum Search {
    Found(Polynomial),
    None,
    GaveUp,
}

/// The possible values `g(a)` of a factor `g` of `q` at one point, up to sign.
struct PointDivisors {
    at: i64,
    divisors: Vec<Polynomial>,
}

fn point_divisors(q: &Polynomial, v: Var, a: i64, work: &Work) -> Option<PointDivisors> {
    let o = MonomialOrder::DegRevLex;
    let value = q.substitute_values(&BTreeMap::from([(v, Rat::from_int(a))]));
    if value.is_zero() {
        return None;
    }
    let fz = factor_within(&value, work);
    if !fz.complete {
        return None;
    }
    let content = fz.unit.abs();
    if !content.is_integer() {
        return None;
    }
    let ints = integer_divisors(content.numer())?;
    let mut divisors: Vec<Polynomial> = ints.into_iter().map(|k| Polynomial::constant(Rat::from_bigint(k), &o)).collect();
    for (f, m) in &fz.factors {
        let mut next = Vec::with_capacity(divisors.len() * (*m as usize + 1));
        for d in &divisors {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..*m {
                acc = &acc * f;
                next.push(acc.clone());
            }
        }
        divisors = next;
    }
    Some(PointDivisors { at: a, divisors })
}

fn integer_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_i64().filter(|&k| k <= MAX_CONTENT)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1i64;
    while k * k <= n {
        if n % k == 0 {
            small.push(BigInt::from(k));
            if k * k != n {
                large.push(BigInt::from(n / k));
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

fn kronecker_search(q: &Polynomial, v: Var, d: u32, pool: &[PointDivisors]) -> Search {
    let o = MonomialOrder::DegRevLex;
    let needed = d as usize + 1;
    if pool.len() < needed {
        return Search::GaveUp;
    }
    let pool = &pool[..needed];
    let mut total: u64 = 1;
    for (i, p) in pool.iter().enumerate() {
        let n = p.divisors.len() as u64 * if i == 0 { 1 } else { 2 };
        total = total.saturating_mul(n);
    }
    if total > MAX_CANDIDATES {
        return Search::GaveUp;
    }

    // Lagrange basis in v over the chosen points
    let xs: Vec<i64> = pool.iter().map(|p| p.at).collect();
    let basis: Vec<Polynomial> = (0..needed)
        .map(|i| {
            let mut l = Polynomial::one(&o);
            for j in 0..needed {
                if i != j {
                    let lin = &Polynomial::var(v, &o) - &Polynomial::constant(Rat::from_int(xs[j]), &o);
                    l = (&l * &lin).scale(&Rat::new(1, xs[i] - xs[j]));
                }
            }
            l
        })
        .collect();

    let mut idx = vec![0usize; needed];
    let mut signs = vec![false; needed];
    loop {
        let mut g = Polynomial::zero(&o);
        for i in 0..needed {
            let val = &pool[i].divisors[idx[i]];
            let term = &basis[i] * val;
            g = if signs[i] { &g - &term } else { &g + &term };
        }
        if g.degree_in(v) == d && !g.is_constant() && exact_div(q, &g).is_some() {
            return Search::Found(g);
        }
        // odometer over (divisor, sign) choices; the first point keeps +
        let mut i = needed;
        loop {
            if i == 0 {
                return Search::None;
            }
            i -= 1;
            if i > 0 && !signs[i] {
                signs[i] = true;
                break;
            }
            signs[i] = false;
            idx[i] += 1;
            if idx[i] < pool[i].divisors.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Exact square root of a perfect square.
pub fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact square root of a rational that is a perfect square.
pub fn rational_sqrt(r: &Rat) -> Option<Rat> {
    Some(Rat::from_big(integer_sqrt(r.numer())?, integer_sqrt(r.denom())?))
}

/// `q` with `q^2 = p` and positive leading coefficient, when one exists over Q.
///
/// Each step divides the leading term of the current remainder by twice the
/// leading term of the root, which recovers the next term of `q`.
pub fn polynomial_sqrt(p: &Polynomial) -> Option<Polynomial> {
    let o = p.order().clone();
    if p.is_zero() {
        return Some(p.clone());
    }
    let (lm, lc) = p.leading_term().cloned()?;
    if lm.iter().any(|(_, e)| e % 2 == 1) {
        return None;
    }
    let head_m = Monomial::from_pairs(lm.iter().map(|(v, e)| (v, e / 2)));
    let head_c = rational_sqrt(&lc)?;
    let twice_head = (head_m.clone(), &head_c + &head_c);
    let mut q = Polynomial::monomial(head_m, head_c, &o);
    for _ in 0..=p.len() {
        let r = p - &(&q * &q);
        let Some((rm, rc)) = r.leading_term() else {
            return Some(q);
        };
        let m = rm.div(&twice_head.0)?;
        // the next root term must sit strictly below the ones found so far
        if let Some(last) = q.terms().last() {
            if o.cmp(&m, &last.0) != std::cmp::Ordering::Less {
                return None;
            }
        }
        let c = rc / &twice_head.1;
        q = &q + &Polynomial::monomial(m, c, &o);
    }
    None
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

    fn factors_of(n: &VarNames, s: &str) -> (Vec<(String, u32)>, bool) {
        let f = n.parse(s).unwrap();
        let fz = factor_squarefree(&f);
        assert_eq!(fz.expand(), f, "product must reproduce the input");
        let mut out: Vec<(String, u32)> = fz.factors.iter().map(|(p, m)| (n.format(p), *m)).collect();
        out.sort();
        (out, fz.complete)
    }

    #[test]
    fn square_roots() {
        let n = names();
        let p = |s: &str| n.parse(s).unwrap();
        assert_eq!(polynomial_sqrt(&p("x^2 - 2*x*y + y^2")), Some(p("x - y")));
        assert_eq!(polynomial_sqrt(&p("9/4*x^2*z^2")), Some(p("3/2*x*z")));
        assert_eq!(polynomial_sqrt(&p("(x^2 + y - 3*z)^2")), Some(p("x^2 + y - 3*z")));
        assert_eq!(polynomial_sqrt(&p("x^2 + 1")), None);
        assert_eq!(polynomial_sqrt(&p("2*x^2")), None);
        assert_eq!(rational_sqrt(&Rat::new(9, 16)), Some(Rat::new(3, 4)));
    }

    #[test]
    fn small_cases() {
        let n = names();
        assert_eq!(factors_of(&n, "x^2").0, vec![("x".into(), 2)]);
        assert_eq!(factors_of(&n, "x^2 - y^2").0, vec![("x + y".into(), 1), ("x - y".into(), 1)]);
        assert_eq!(factors_of(&n, "2*x^2 + 7*x + 3").0, vec![("2*x + 1".into(), 1), ("x + 3".into(), 1)]);
        assert_eq!(factors_of(&n, "x^2 + 1").0, vec![("x^2 + 1".into(), 1)]);
    }

    #[test]
    fn product_of_conics() {
        let n = names();
        let (f, complete) = factors_of(&n, "(x^2 + y^2 - x)*(x^2 - y^2 - x)");
        assert!(complete);
        assert_eq!(f, vec![("x^2 + y^2 - x".into(), 1), ("x^2 - y^2 - x".into(), 1)]);
    }

    #[test]
    fn multiplicities_and_content() {
        let n = names();
        let (f, _) = factors_of(&n, "-6*x^3*(y - 1)^2*(x*y + z)");
        assert_eq!(f, vec![("x".into(), 3), ("x*y + z".into(), 1), ("y - 1".into(), 2)]);
    }

    #[test]
    fn irreducible_sextic() {
        let n = names();
        let (f, complete) = factors_of(&n, "(x^2 + y^2 - 1)^3 + 27*x^2*y^2");
        assert!(complete);
        assert_eq!(f.len(), 1);
    }
}
