//! Independent algebra used to check the kernel: schoolbook division,
//! Sylvester resultants and squarefree parts.

use mg_poly::{exact_div, gcd, Monomial, MonomialOrder, Polynomial, Rat, Var};

/// Remainder of multivariate division of `f` by `divisors`.
pub fn divide(f: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let o = f.order().clone();
    let mut p = f.clone();
    let mut rem = Polynomial::zero(&o);
    while let Some((m, c)) = p.leading_term().cloned() {
        let hit = divisors.iter().find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m)));
        match hit {
            Some(g) => {
                let q = m.div(g.leading_monomial().unwrap()).unwrap();
                let k = &c / g.leading_coeff().unwrap();
                p = p.sub_mul_term(&k, &q, g);
            }
            None => {
                let t = Polynomial::monomial(m, c, &o);
                rem = &rem + &t;
                p = &p - &t;
            }
        }
    }
    rem
}

pub fn s_poly(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = lf.lcm(lg);
    let one = Rat::one();
    let a = f.mul_term(&l.div(lf).unwrap(), &(&one / f.leading_coeff().unwrap()));
    let b = g.mul_term(&l.div(lg).unwrap(), &(&one / g.leading_coeff().unwrap()));
    &a - &b
}

/// Whether every S-polynomial of `basis` divides out to zero.
pub fn s_pairs_vanish(basis: &[Polynomial]) -> bool {
    (0..basis.len()).all(|i| (i + 1..basis.len()).all(|j| divide(&s_poly(&basis[i], &basis[j]), basis).is_zero()))
}

/// Reduced: monic, and no term of one element is divisible by the leading
/// monomial of another.
pub fn is_reduced(basis: &[Polynomial]) -> bool {
    basis.iter().enumerate().all(|(i, g)| {
        g.leading_coeff().is_some_and(|c| *c == Rat::one())
            && basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .all(|(_, h)| g.terms().iter().all(|(m, _)| !h.leading_monomial().unwrap().divides(m)))
    })
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(mut m: Vec<Vec<Polynomial>>, o: &MonomialOrder) -> Polynomial {
    let n = m.len();
    let mut negate = false;
    let mut prev = Polynomial::one(o);
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Polynomial::zero(o),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = exact_div(&num, &prev).expect("Bareiss steps divide exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.scale(&Rat::from_int(-1))
    } else {
        d
    }
}

/// Resultant of `f` and `g` with respect to `v`, from the Sylvester matrix.
pub fn resultant(f: &Polynomial, g: &Polynomial, v: Var) -> Polynomial {
    let o = f.order().clone();
    let (a, b) = (f.coefficients_in(v), g.coefficients_in(v));
    let (p, q) = (a.len() - 1, b.len() - 1);
    let size = p + q;
    let mut rows = Vec::with_capacity(size);
    for (coeffs, shifts) in [(&a, q), (&b, p)] {
        for s in 0..shifts {
            let mut row = vec![Polynomial::zero(&o); size];
            for (k, c) in coeffs.iter().rev().enumerate() {
                row[s + k] = c.clone();
            }
            rows.push(row);
        }
    }
    determinant(rows, &o)
}

/// `p / gcd(p, dp/dv)`, made monic.
pub fn squarefree_part(p: &Polynomial, v: Var) -> Polynomial {
    if p.is_constant() {
        return Polynomial::one(p.order());
    }
    let g = gcd(p, &p.derivative(v));
    exact_div(p, &g).expect("gcd divides").monic()
}

/// `p` scaled to integer coefficients with content 1 and positive leading
/// coefficient, so that equality means equality up to a rational constant.
pub fn normalized(p: &Polynomial) -> Polynomial {
    p.with_order(&MonomialOrder::DegRevLex).primitive()
}

pub fn monomial(pairs: &[(Var, u32)]) -> Monomial {
    Monomial::from_pairs(pairs.iter().copied())
}
