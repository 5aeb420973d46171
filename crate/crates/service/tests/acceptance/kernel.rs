//! Random ideals: reduced bases, elimination against resultants and
//! dimension under two orders.

use crate::oracles::{divide, is_reduced, monomial, resultant, s_pairs_vanish, squarefree_part};
use crate::{ensure, Outcome};
use mg_poly::{dimension_in, eliminate, exact_div, groebner_basis, Ideal, Limits, MonomialOrder, Polynomial, Rat, Var};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;
use std::time::Instant;

const IDEALS: usize = 50;
const PAIRS: usize = 20;
const BUDGET_SECS: f64 = 60.0;

/// A term with total degree at most `max_deg` in `vars`, and degree below
/// `x_cap` in `vars[0]` when given.
fn random_term(rng: &mut StdRng, vars: &[Var], max_deg: u32, x_cap: Option<u32>) -> (Vec<(Var, u32)>, i64) {
    loop {
        let mut left = rng.gen_range(0..=max_deg);
        let mut pairs = Vec::new();
        for &v in vars {
            let e = rng.gen_range(0..=left);
            left -= e;
            if e > 0 {
                pairs.push((v, e));
            }
        }
        let x_deg = pairs.iter().find(|(v, _)| *v == vars[0]).map_or(0, |p| p.1);
        if x_cap.is_some_and(|cap| x_deg >= cap) {
            continue;
        }
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3..=3);
        }
        return (pairs, c);
    }
}

fn random_poly(rng: &mut StdRng, vars: &[Var], o: &MonomialOrder) -> Polynomial {
    loop {
        let n = rng.gen_range(1..=3);
        let mut p = Polynomial::zero(o);
        for _ in 0..n {
            let (m, c) = random_term(rng, vars, 3, None);
            p = &p + &Polynomial::monomial(monomial(&m), Rat::from_int(c), o);
        }
        if !p.is_constant() {
            return p;
        }
    }
}

/// `x^a` plus lower terms in `x`, so the leading coefficient in `x` is 1.
fn monic_in_x(rng: &mut StdRng, x: Var, y: Var, o: &MonomialOrder) -> Polynomial {
    let a = rng.gen_range(1..=3);
    let mut p = Polynomial::monomial(monomial(&[(x, a)]), Rat::one(), o);
    for _ in 0..rng.gen_range(1..=3) {
        let (m, c) = random_term(rng, &[x, y], 3, Some(a));
        p = &p + &Polynomial::monomial(monomial(&m), Rat::from_int(c), o);
    }
    p
}

fn check_basis(gens: &[Polynomial], basis: &[Polynomial], label: &str) -> Result<(), String> {
    ensure(s_pairs_vanish(basis), || format!("{label}: an S-polynomial does not reduce to zero"))?;
    ensure(is_reduced(basis), || format!("{label}: basis is not reduced"))?;
    ensure(gens.iter().all(|g| divide(g, basis).is_zero()), || format!("{label}: a generator is not in the span"))
}

pub fn criterion() -> Outcome {
    let start = Instant::now();
    let limits = Limits::default();
    let (drl, lex) = (MonomialOrder::DegRevLex, MonomialOrder::Lex);
    let vars: Vec<Var> = (0..4).map(Var).collect();
    let mut rng = StdRng::seed_from_u64(20_240_611);
    let mut largest = 0;
    let mut dims = BTreeSet::new();

    for i in 0..IDEALS {
        let nvars = rng.gen_range(1..=4);
        let ngens = rng.gen_range(1..=3);
        let gens: Vec<Polynomial> = (0..ngens).map(|_| random_poly(&mut rng, &vars[..nvars], &drl)).collect();
        let basis = groebner_basis(&gens, &drl, &limits).map_err(|e| format!("ideal {i}: {e}"))?;
        check_basis(&gens, &basis, &format!("ideal {i} degrevlex"))?;
        let ideal = Ideal::new(gens.clone());
        let lex_basis = ideal.groebner_in(&lex, &limits).map_err(|e| format!("ideal {i}: {e}"))?;
        let lex_gens: Vec<Polynomial> = gens.iter().map(|g| g.with_order(&lex)).collect();
        check_basis(&lex_gens, &lex_basis, &format!("ideal {i} lex"))?;
        let universe: BTreeSet<Var> = vars[..nvars].iter().copied().collect();
        let d1 = dimension_in(&ideal, &universe, &drl, &limits).map_err(|e| e.to_string())?;
        let d2 = dimension_in(&ideal, &universe, &lex, &limits).map_err(|e| e.to_string())?;
        ensure(d1 == d2, || format!("ideal {i}: dimension {d1} under degrevlex, {d2} under lex"))?;
        largest = largest.max(lex_basis.len());
        dims.insert(d1);
    }

    let (x, y) = (Var(0), Var(1));
    let mut pairs = 0;
    while pairs < PAIRS {
        let (f, g) = (monic_in_x(&mut rng, x, y, &drl), monic_in_x(&mut rng, x, y, &drl));
        let r = resultant(&f, &g, x);
        if r.is_zero() {
            continue;
        }
        let elim = eliminate(&Ideal::new(vec![f.clone(), g.clone()]), &BTreeSet::from([x]), &limits).map_err(|e| e.to_string())?;
        ensure(elim.len() == 1, || format!("pair {pairs}: elimination ideal has {} generators", elim.len()))?;
        let h = &elim[0].with_order(&drl);
        ensure(h.vars().iter().all(|v| *v == y), || format!("pair {pairs}: {h} still involves x"))?;
        ensure(exact_div(&r, h).is_some(), || format!("pair {pairs}: {h} does not divide the resultant {r}"))?;
        ensure(squarefree_part(h, y) == squarefree_part(&r, y), || format!("pair {pairs}: {h} and resultant {r} have different roots"))?;
        pairs += 1;
    }

    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= BUDGET_SECS, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "{IDEALS} random ideals reduced and closed under S-pairs (largest lex basis {largest}), {PAIRS} eliminations match resultants, dimensions {dims:?} agree across orders"
    ))
}
