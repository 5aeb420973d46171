//! Sparse multivariate polynomials with exact rational coefficients.

use crate::monomial::{Monomial, Var};
use crate::order::MonomialOrder;
use crate::rational::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Term = (Monomial, Rat);

/// A polynomial whose terms are kept sorted in decreasing order under its
/// attached monomial order. Coefficients are never zero.
#[derive(Clone)]
pub struct Polynomial {
    terms: Vec<Term>,
    order: MonomialOrder,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.terms == other.terms;
        }
        self.terms.len() == other.terms.len() && self.terms == other.with_order(&self.order).terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(order: &MonomialOrder) -> Self {
        Polynomial { terms: Vec::new(), order: order.clone() }
    }

    pub fn constant(c: Rat, order: &MonomialOrder) -> Self {
        Self::monomial(Monomial::one(), c, order)
    }

    pub fn one(order: &MonomialOrder) -> Self {
        Self::constant(Rat::one(), order)
    }

    pub fn var(v: Var, order: &MonomialOrder) -> Self {
        Self::monomial(Monomial::var(v), Rat::one(), order)
    }

    pub fn monomial(m: Monomial, c: Rat, order: &MonomialOrder) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { terms, order: order.clone() }
    }

    /// Collects arbitrary terms: like monomials are combined, zeros dropped.
    pub fn from_terms<I: IntoIterator<Item = Term>>(terms: I, order: &MonomialOrder) -> Self {
        let mut map: BTreeMap<MonoKey, (Monomial, Rat)> = BTreeMap::new();
        for (m, c) in terms {
            let key = MonoKey::of(&m);
            match map.get_mut(&key) {
                Some(entry) => entry.1 = &entry.1 + &c,
                None => {
                    map.insert(key, (m, c));
                }
            }
        }
        let mut terms: Vec<Term> = map.into_values().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { terms, order: order.clone() }
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<Term>, order: &MonomialOrder) -> Self {
        Polynomial { terms, order: order.clone() }
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// The same polynomial re-sorted under another order.
    pub fn with_order(&self, order: &MonomialOrder) -> Polynomial {
        if *order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { terms, order: order.clone() }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.contains_var(v))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms
            .iter()
            .find(|(x, _)| x == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.order);
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
            order: self.order.clone(),
        }
    }

    /// `c * m * self`; multiplication by a monomial preserves term order.
    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.order);
        }
        Polynomial {
            terms: self.terms.iter().map(|(x, y)| (x.mul(m), y * c)).collect(),
            order: self.order.clone(),
        }
    }

    /// `self - c * m * g`, computed by a single merge.
    pub fn sub_mul_term(&self, c: &Rat, m: &Monomial, g: &Polynomial) -> Polynomial {
        let order = &self.order;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let (a, b) = (&self.terms, &g.terms);
        let (mut i, mut j) = (0, 0);
        let mut bj: Option<Term> = b.first().map(|(x, y)| (x.mul(m), -(y * c)));
        while i < a.len() || bj.is_some() {
            let take = match (&a.get(i), &bj) {
                (Some(ta), Some(tb)) => order.cmp(&ta.0, &tb.0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match take {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bj.take().unwrap());
                    j += 1;
                    bj = b.get(j).map(|(x, y)| (x.mul(m), -(y * c)));
                }
                Ordering::Equal => {
                    let (mono, cb) = bj.take().unwrap();
                    let s = &a[i].1 + &cb;
                    if !s.is_zero() {
                        out.push((mono, s));
                    }
                    i += 1;
                    j += 1;
                    bj = b.get(j).map(|(x, y)| (x.mul(m), -(y * c)));
                }
            }
        }
        Polynomial { terms: out, order: order.clone() }
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let other = other.with_order(&self.order);
        let order = &self.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        let sign = |c: &Rat| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &a[i].1 + &sign(&b[j].1);
                    if !s.is_zero() {
                        out.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Polynomial { terms: out, order: order.clone() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    /// Integer coefficients with gcd 1 and a positive leading coefficient,
    /// together with the rational `u` such that `self = u * result`.
    pub fn primitive_integer(&self) -> (Rat, Polynomial) {
        if self.is_zero() {
            return (Rat::one(), self.clone());
        }
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&den / c.denom());
            g = g.gcd(&n);
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        let unit = Rat::from_big(g.clone(), den.clone());
        let p = self.scale(&unit.recip());
        (unit, p)
    }

    pub fn primitive(&self) -> Polynomial {
        self.primitive_integer().1
    }

    /// Every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(_, c)| c.numer().abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn derivative(&self, v: Var) -> Polynomial {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            if e == 0 {
                return None;
            }
            let (rest, _) = m.without(v);
            let mono = rest.mul(&Monomial::var_pow(v, e - 1));
            Some((mono, c * &Rat::from_int(e as i64)))
        });
        Polynomial::from_terms(terms, &self.order)
    }

    /// Substitutes `v := value`.
    pub fn substitute(&self, v: Var, value: &Polynomial) -> Polynomial {
        let value = value.with_order(&self.order);
        let max_e = self.degree_in(v);
        let mut powers = vec![Polynomial::one(&self.order)];
        for k in 1..=max_e as usize {
            let next = &powers[k - 1] * &value;
            powers.push(next);
        }
        let mut acc = Polynomial::zero(&self.order);
        // group by exponent to keep the number of multiplications small
        let mut by_exp: BTreeMap<u32, Vec<Term>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            by_exp.entry(e).or_default().push((rest, c.clone()));
        }
        for (e, ts) in by_exp {
            let coeff = Polynomial::from_terms(ts, &self.order);
            acc = &acc + &(&coeff * &powers[e as usize]);
        }
        acc
    }

    /// Substitutes several variables by constants.
    pub fn substitute_values(&self, values: &BTreeMap<Var, Rat>) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (v, e) in m.iter() {
                match values.get(&v) {
                    Some(x) => coeff = &coeff * &x.pow(e),
                    None => rest.push((v, e)),
                }
            }
            (Monomial::from_pairs(rest), coeff)
        });
        Polynomial::from_terms(terms, &self.order)
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())), &self.order)
    }

    /// Coefficients with respect to `v`: entry `k` multiplies `v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Polynomial> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<Term>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets
            .into_iter()
            .map(|ts| Polynomial::from_sorted_unchecked(ts, &self.order))
            .collect()
    }

    /// Inverse of [`Polynomial::coefficients_in`].
    pub fn from_coefficients(v: Var, coeffs: &[Polynomial], order: &MonomialOrder) -> Polynomial {
        let terms = coeffs.iter().enumerate().flat_map(|(k, p)| {
            let vk = Monomial::var_pow(v, k as u32);
            p.terms.iter().map(move |(m, c)| (m.mul(&vk), c.clone()))
        });
        Polynomial::from_terms(terms, order)
    }

    pub fn eval_f64(&self, value: impl Fn(Var) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64() * m.iter().map(|(v, e)| value(v).powi(e as i32)).product::<f64>())
            .sum()
    }

    /// Sum of the absolute values of the evaluated terms; the natural scale
    /// against which [`Polynomial::eval_f64`] residuals are judged.
    pub fn eval_abs_f64(&self, value: impl Fn(Var) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| (c.to_f64() * m.iter().map(|(v, e)| value(v).powi(e as i32)).product::<f64>()).abs())
            .sum()
    }

    pub fn eval_rat(&self, value: impl Fn(Var) -> Rat) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                t = &t * &value(v).pow(e);
            }
            acc = &acc + &t;
        }
        acc
    }

    pub(crate) fn approx_bytes(&self) -> usize {
        self.terms.iter().map(|(m, c)| m.approx_bytes() + c.approx_bytes()).sum::<usize>() + 32
    }
}

/// Order-independent key used while collecting terms.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct MonoKey(Vec<(u32, u32)>);

impl MonoKey {
    fn of(m: &Monomial) -> Self {
        MonoKey(m.iter().map(|(v, e)| (v.0, e)).collect())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, true)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&Rat::from_int(-1))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let rhs = rhs.with_order(&self.order);
        let (small, big) = if self.terms.len() <= rhs.terms.len() { (self, &rhs) } else { (&rhs, self) };
        let mut acc = Polynomial::zero(&self.order);
        for (m, c) in &small.terms {
            acc = acc.sub_mul_term(&-c, m, big);
        }
        acc
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        (&self).neg()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::names::format_polynomial(self, &|v: Var| format!("x{}", v.0)))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
