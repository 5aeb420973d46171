//! Multivariate division and Buchberger's algorithm.
//!
//! Pairs are managed with the Gebauer-Moeller update, which applies both
//! Buchberger criteria (coprime leading monomials and the chain criterion).
//! Pairs are selected by the normal strategy: smallest lcm first.

use crate::limits::{KernelError, KernelResult, LimitKind, Limits};
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::polynomial::{Polynomial, Term};
use crate::rational::Rat;
use std::borrow::Cow;
use std::cmp::Ordering;
use std::time::Instant;

/// Normal form of `f` with respect to `basis`.
///
/// The largest reducible term is always eliminated first, using the first
/// basis element (in list order) whose leading monomial divides it. The
/// result has no term divisible by any leading monomial of `basis`.
pub fn reduce(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    match reduce_until(f, basis, None) {
        Ok(p) => p,
        Err(_) => unreachable!("reduction without deadline cannot fail"),
    }
}

pub(crate) fn reduce_until(
    f: &Polynomial,
    basis: &[Polynomial],
    deadline: Option<Instant>,
) -> KernelResult<Polynomial> {
    let order = f.order().clone();
    let basis: Vec<Cow<'_, Polynomial>> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| if *g.order() == order { Cow::Borrowed(g) } else { Cow::Owned(g.with_order(&order)) })
        .collect();
    if basis.is_empty() {
        return Ok(f.clone());
    }
    let leads: Vec<(&Monomial, &Rat)> = basis.iter().map(|g| {
        let (m, c) = g.leading_term().unwrap();
        (m, c)
    }).collect();

    let mut done: Vec<Term> = Vec::new();
    let mut rem: Vec<Term> = f.terms().to_vec();
    let mut pos = 0;
    let mut steps = 0u64;
    while pos < rem.len() {
        let (m, c) = &rem[pos];
        let hit = leads.iter().position(|(lm, _)| lm.divides(m));
        match hit {
            None => {
                done.push(rem[pos].clone());
                pos += 1;
            }
            Some(k) => {
                let g = &basis[k];
                let (lm, lc) = leads[k];
                let q = m.div(lm).expect("divisibility checked");
                let coef = c / lc;
                rem = sub_mul_tail(&rem[pos + 1..], &coef, &q, &g.terms()[1..], &order);
                pos = 0;
                steps += 1;
                if steps.is_multiple_of(64) {
                    if let Some(d) = deadline {
                        if Instant::now() > d {
                            return Err(KernelError::ResourceLimit(LimitKind::Time));
                        }
                    }
                }
            }
        }
    }
    Ok(Polynomial::from_sorted_unchecked(done, &order))
}

/// `a - c*m*b` for sorted term slices.
fn sub_mul_tail(a: &[Term], c: &Rat, m: &Monomial, b: &[Term], order: &MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let scaled = |t: &Term| (t.0.mul(m), -(&t.1 * c));
    let mut bj = b.first().map(scaled);
    while i < a.len() || bj.is_some() {
        let ord = match (a.get(i), &bj) {
            (Some(ta), Some(tb)) => order.cmp(&ta.0, &tb.0),
            (Some(_), None) => Ordering::Greater,
            _ => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(bj.take().unwrap());
                j += 1;
                bj = b.get(j).map(scaled);
            }
            Ordering::Equal => {
                let (mono, cb) = bj.take().unwrap();
                let s = &a[i].1 + &cb;
                if !s.is_zero() {
                    out.push((mono, s));
                }
                i += 1;
                j += 1;
                bj = b.get(j).map(scaled);
            }
        }
    }
    out
}

/// S-polynomial of two nonzero polynomials under their (shared) order.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, cf) = f.leading_term().expect("nonzero");
    let (mg, cg) = g.leading_term().expect("nonzero");
    let l = mf.lcm(mg);
    let a = f.mul_term(&l.div(mf).unwrap(), &cf.recip());
    a.sub_mul_term(&cg.recip(), &l.div(mg).unwrap(), g)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Buchberger<'a> {
    order: MonomialOrder,
    limits: &'a Limits,
    deadline: Instant,
    polys: Vec<Polynomial>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    reductions: u64,
    bytes: usize,
}

impl Buchberger<'_> {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().unwrap()
    }

    fn check(&self) -> KernelResult<()> {
        if self.reductions > self.limits.max_pair_reductions {
            return Err(KernelError::ResourceLimit(LimitKind::PairReductions));
        }
        if self.bytes > self.limits.max_memory_bytes {
            return Err(KernelError::ResourceLimit(LimitKind::Memory));
        }
        if Instant::now() > self.deadline {
            return Err(KernelError::ResourceLimit(LimitKind::Time));
        }
        Ok(())
    }

    fn active_polys(&self) -> Vec<Polynomial> {
        self.active.iter().map(|&i| self.polys[i].clone()).collect()
    }

    /// Gebauer-Moeller installation of a new, fully reduced, monic `h`.
    fn update(&mut self, h: Polynomial) {
        self.bytes += h.approx_bytes();
        let hi = self.polys.len();
        self.polys.push(h);
        let lh = self.lm(hi).clone();

        let mut c: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| Pair { i: g, j: hi, lcm: self.lm(g).lcm(&lh) })
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        while !c.is_empty() {
            let p = c.remove(0);
            let coprime = self.lm(p.i).is_coprime(&lh);
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d.into_iter().filter(|p| !self.lm(p.i).is_coprime(&lh)).collect();

        let old = std::mem::take(&mut self.pairs);
        let mut kept = Vec::with_capacity(old.len() + e.len());
        for p in old {
            let drop = lh.divides(&p.lcm)
                && self.lm(p.i).lcm(&lh) != p.lcm
                && self.lm(p.j).lcm(&lh) != p.lcm;
            if !drop {
                kept.push(p);
            }
        }
        kept.extend(e);
        self.pairs = kept;

        let polys = &self.polys;
        self.active.retain(|&g| !lh.divides(polys[g].leading_monomial().unwrap()));
        self.active.push(hi);
    }

    fn select(&mut self) -> Pair {
        let order = &self.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let ord = order.cmp(&a.lcm, &b.lcm).then_with(|| (a.j, a.i).cmp(&(b.j, b.i)));
            if ord == Ordering::Less {
                best = k;
            }
        }
        self.pairs.swap_remove(best)
    }
}

/// Reduced Groebner basis of the ideal generated by `gens` under `order`:
/// monic, inter-reduced and sorted by leading monomial, largest first.
/// The zero ideal yields an empty basis and the unit ideal yields `[1]`.
pub fn groebner_basis(gens: &[Polynomial], order: &MonomialOrder, limits: &Limits) -> KernelResult<Vec<Polynomial>> {
    let start = Instant::now();
    limits.check_deadline()?;
    let mut bb = Buchberger {
        order: order.clone(),
        limits,
        deadline: limits.effective_deadline(start),
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        reductions: 0,
        bytes: 0,
    };

    let mut inputs: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.with_order(order).monic())
        .collect();
    if inputs.iter().any(|g| g.is_constant()) {
        return Ok(vec![Polynomial::one(order)]);
    }
    // smaller inputs first keeps early reductions cheap
    inputs.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for f in inputs {
        let r = reduce_until(&f, &bb.active_polys(), Some(bb.deadline))?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::one(order)]);
        }
        bb.update(r.monic());
    }

    while !bb.pairs.is_empty() {
        bb.check()?;
        let p = bb.select();
        let s = s_polynomial(&bb.polys[p.i], &bb.polys[p.j]);
        bb.reductions += 1;
        let r = reduce_until(&s, &bb.active_polys(), Some(bb.deadline))?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::one(order)]);
        }
        bb.update(r.monic());
    }

    let minimal = bb.active_polys();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (k, g) in minimal.iter().enumerate() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, p)| p.clone())
            .collect();
        let r = reduce_until(g, &others, Some(bb.deadline))?;
        reduced.push(r.monic());
    }
    reduced.sort_by(|a, b| order.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    Ok(reduced)
}

/// True when every S-polynomial of `basis` reduces to zero against it.
pub fn is_groebner_basis(basis: &[Polynomial]) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if !reduce(&s_polynomial(&basis[i], &basis[j]), basis).is_zero() {
                return false;
            }
        }
    }
    true
}
