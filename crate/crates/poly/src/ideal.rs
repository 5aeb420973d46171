//! Ideals and the operations built on Groebner bases: membership, radical
//! membership, elimination, saturation and Krull dimension.

use crate::groebner::{groebner_basis, reduce_until};
use crate::limits::{KernelResult, Limits};
use crate::monomial::Var;
use crate::order::MonomialOrder;
use crate::polynomial::Polynomial;
use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

/// A finitely generated ideal. The degrevlex basis is computed lazily and
/// cached; bases for other orders are recomputed on request.
#[derive(Debug, Default)]
pub struct Ideal {
    gens: Vec<Polynomial>,
    basis: OnceLock<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let basis = OnceLock::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(b.clone());
        }
        Ideal { gens: self.gens.clone(), basis }
    }
}

impl Ideal {
    pub fn new(gens: impl IntoIterator<Item = Polynomial>) -> Self {
        Ideal { gens: gens.into_iter().filter(|g| !g.is_zero()).collect(), basis: OnceLock::new() }
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Variables occurring in some generator.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.gens.iter().flat_map(|g| g.vars()).collect()
    }

    /// The ideal with `extra` appended to the generators.
    pub fn extended(&self, extra: impl IntoIterator<Item = Polynomial>) -> Ideal {
        Ideal::new(self.gens.iter().cloned().chain(extra))
    }

    /// Reduced degrevlex basis (cached after the first success).
    pub fn groebner(&self, limits: &Limits) -> KernelResult<&[Polynomial]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let b = groebner_basis(&self.gens, &MonomialOrder::DegRevLex, limits)?;
        let _ = self.basis.set(b);
        Ok(self.basis.get().expect("just set"))
    }

    /// Reduced basis under an arbitrary order (not cached).
    pub fn groebner_in(&self, order: &MonomialOrder, limits: &Limits) -> KernelResult<Vec<Polynomial>> {
        if *order == MonomialOrder::DegRevLex {
            return self.groebner(limits).map(|b| b.to_vec());
        }
        groebner_basis(&self.gens, order, limits)
    }

    pub fn is_unit(&self, limits: &Limits) -> KernelResult<bool> {
        Ok(self.groebner(limits)?.iter().any(|g| g.is_constant()))
    }

    /// Normal form of `f` modulo this ideal (degrevlex).
    pub fn normal_form(&self, f: &Polynomial, limits: &Limits) -> KernelResult<Polynomial> {
        let basis = self.groebner(limits)?;
        let f = f.with_order(&MonomialOrder::DegRevLex);
        reduce_until(&f, basis, Some(limits.effective_deadline(Instant::now())))
    }
}

fn fresh_var<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> Var {
    let max = polys.into_iter().flat_map(|p| p.vars()).map(|v| v.0).max();
    Var(max.map_or(0, |m| m + 1))
}

/// Whether `f` lies in `ideal`.
pub fn ideal_membership(f: &Polynomial, ideal: &Ideal, limits: &Limits) -> KernelResult<bool> {
    Ok(ideal.normal_form(f, limits)?.is_zero())
}

/// Whether `f` vanishes on the whole variety of `ideal`, decided with the
/// Rabinowitsch trick: `1` lies in `I + <1 - z*f>` for a fresh `z`.
pub fn radical_membership(f: &Polynomial, ideal: &Ideal, limits: &Limits) -> KernelResult<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let o = MonomialOrder::DegRevLex;
    let z = fresh_var(ideal.generators().iter().chain(std::iter::once(f)));
    let rab = &Polynomial::one(&o) - &(&Polynomial::var(z, &o) * f);
    ideal.extended([rab]).is_unit(limits)
}

/// Generators of the elimination ideal `I ∩ Q[remaining variables]`.
pub fn eliminate(ideal: &Ideal, drop: &BTreeSet<Var>, limits: &Limits) -> KernelResult<Vec<Polynomial>> {
    if drop.is_empty() {
        return ideal.groebner(limits).map(|b| b.to_vec());
    }
    let order = MonomialOrder::block(drop.iter().copied(), MonomialOrder::DegRevLex);
    let basis = ideal.groebner_in(&order, limits)?;
    Ok(basis
        .into_iter()
        .filter(|g| !g.vars().iter().any(|v| drop.contains(v)))
        .map(|g| g.with_order(&MonomialOrder::DegRevLex))
        .collect())
}

/// Generators of the saturation `I : f^∞`.
pub fn saturate(ideal: &Ideal, f: &Polynomial, limits: &Limits) -> KernelResult<Vec<Polynomial>> {
    let o = MonomialOrder::DegRevLex;
    let z = fresh_var(ideal.generators().iter().chain(std::iter::once(f)));
    let rab = &Polynomial::one(&o) - &(&Polynomial::var(z, &o) * f);
    eliminate(&ideal.extended([rab]), &BTreeSet::from([z]), limits)
}

/// Krull dimension of `Q[universe] / I`: the size of a largest variable set
/// containing the support of no leading monomial. `-1` for the unit ideal.
pub fn dimension(ideal: &Ideal, universe: &BTreeSet<Var>, limits: &Limits) -> KernelResult<i64> {
    Ok(dimension_of_basis(ideal.groebner(limits)?, universe))
}

/// [`dimension`] computed from a basis under `order` instead of degrevlex.
pub fn dimension_in(ideal: &Ideal, universe: &BTreeSet<Var>, order: &MonomialOrder, limits: &Limits) -> KernelResult<i64> {
    Ok(dimension_of_basis(&ideal.groebner_in(order, limits)?, universe))
}

fn dimension_of_basis(basis: &[Polynomial], universe: &BTreeSet<Var>) -> i64 {
    if basis.iter().any(|g| g.is_constant()) {
        return -1;
    }
    let all: BTreeSet<Var> = universe.iter().copied().chain(basis.iter().flat_map(|g| g.vars())).collect();
    let vars: Vec<Var> = all.into_iter().collect();
    let supports: Vec<Vec<usize>> = basis
        .iter()
        .map(|g| {
            g.leading_monomial()
                .unwrap()
                .vars()
                .map(|v| vars.binary_search(&v).expect("variable in universe"))
                .collect()
        })
        .collect();
    let cover = min_hitting_set(&supports, vars.len());
    (vars.len() - cover) as i64
}

/// Size of a smallest variable set meeting every support.
fn min_hitting_set(supports: &[Vec<usize>], n: usize) -> usize {
    let mut sets: Vec<Vec<usize>> = supports.to_vec();
    sets.sort_by_key(|s| s.len());
    // a superset of another support is hit whenever the smaller one is
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for s in sets {
        if !minimal.iter().any(|m| m.iter().all(|v| s.contains(v))) {
            minimal.push(s);
        }
    }
    let mut chosen = vec![false; n];
    let mut best = n;
    search(&minimal, &mut chosen, 0, &mut best);
    best
}

fn search(sets: &[Vec<usize>], chosen: &mut [bool], size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    let unhit = sets
        .iter()
        .filter(|s| !s.iter().any(|&v| chosen[v]))
        .min_by_key(|s| s.len());
    let Some(s) = unhit else {
        *best = size;
        return;
    };
    // pairwise-disjoint unhit sets give a lower bound on what remains
    let mut used = vec![false; chosen.len()];
    let mut lower = 0;
    for t in sets.iter().filter(|t| !t.iter().any(|&v| chosen[v])) {
        if !t.iter().any(|&v| used[v]) {
            lower += 1;
            for &v in t {
                used[v] = true;
            }
        }
    }
    if size + lower >= *best {
        return;
    }
    for &v in s {
        chosen[v] = true;
        search(sets, chosen, size + 1, best);
        chosen[v] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::names::VarNames;

    fn setup(vars: &[&str]) -> VarNames {
        let mut n = VarNames::new();
        for v in vars {
            n.intern(v);
        }
        n
    }

    fn ideal(n: &VarNames, gens: &[&str]) -> Ideal {
        Ideal::new(gens.iter().map(|g| n.parse(g).unwrap()))
    }

    #[test]
    fn membership() {
        let n = setup(&["x", "y"]);
        let l = Limits::default();
        assert!(ideal_membership(&n.parse("x^2").unwrap(), &ideal(&n, &["x"]), &l).unwrap());
        assert!(!ideal_membership(&n.parse("x + 1").unwrap(), &ideal(&n, &["x"]), &l).unwrap());
        let i = ideal(&n, &["x^2 - y^2", "x + y"]);
        assert!(!ideal_membership(&n.parse("x - y").unwrap(), &i, &l).unwrap());
    }

    #[test]
    fn radical() {
        let n = setup(&["x", "y"]);
        let l = Limits::default();
        assert!(radical_membership(&n.parse("x").unwrap(), &ideal(&n, &["x^2"]), &l).unwrap());
        assert!(!radical_membership(&n.parse("x + 1").unwrap(), &ideal(&n, &["x^2"]), &l).unwrap());
        assert!(radical_membership(&n.parse("x*y").unwrap(), &ideal(&n, &["x^2", "y^3"]), &l).unwrap());
    }

    #[test]
    fn elimination() {
        let n = setup(&["x", "y", "z", "t"]);
        let l = Limits::default();
        let x = BTreeSet::from([n.get("x").unwrap()]);
        let e = eliminate(&ideal(&n, &["y - x^2", "z - x^3"]), &x, &l).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].primitive(), n.parse("y^3 - z^2").unwrap().primitive());
        let t = BTreeSet::from([n.get("t").unwrap()]);
        let e = eliminate(&ideal(&n, &["x - t", "y - t"]), &t, &l).unwrap();
        assert_eq!(e, vec![n.parse("x - y").unwrap()]);
        let y = BTreeSet::from([n.get("y").unwrap()]);
        assert!(eliminate(&ideal(&n, &["x^2 + y^2 - 1"]), &y, &l).unwrap().is_empty());
    }

    #[test]
    fn saturation() {
        let n = setup(&["x", "y"]);
        let l = Limits::default();
        let s = saturate(&ideal(&n, &["x*y"]), &n.parse("x").unwrap(), &l).unwrap();
        assert_eq!(s, vec![n.parse("y").unwrap()]);
        let s = saturate(&ideal(&n, &["x"]), &n.parse("y").unwrap(), &l).unwrap();
        assert_eq!(s, vec![n.parse("x").unwrap()]);
        let s = saturate(&ideal(&n, &["x^2"]), &n.parse("x").unwrap(), &l).unwrap();
        assert_eq!(s, vec![n.parse("1").unwrap()]);
    }

    #[test]
    fn dimensions() {
        let n = setup(&["x", "y", "z"]);
        let l = Limits::default();
        let xy: BTreeSet<Var> = [n.get("x").unwrap(), n.get("y").unwrap()].into();
        let xyz: BTreeSet<Var> = n.vars().collect();
        assert_eq!(dimension(&Ideal::new([]), &xyz, &l).unwrap(), 3);
        assert_eq!(dimension(&ideal(&n, &["x"]), &xy, &l).unwrap(), 1);
        assert_eq!(dimension(&ideal(&n, &["x*y - 1"]), &xy, &l).unwrap(), 1);
        assert_eq!(dimension(&ideal(&n, &["x*y", "x*z"]), &xyz, &l).unwrap(), 2);
        assert_eq!(dimension(&ideal(&n, &["x", "x - 1"]), &xy, &l).unwrap(), -1);
    }
}
