//! Monomial orders: lex, degree reverse lex and two-block elimination orders.

use crate::monomial::{Monomial, Var};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A multiplicative total order on monomials. Variable priority follows the
/// variable ids (`Var(0)` is the largest variable).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    DegRevLex,
    /// Every monomial containing an elimination variable is larger than every
    /// monomial free of them. Within the elimination block degrevlex is used;
    /// ties are broken by `tail`.
    Block(Arc<BlockOrder>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockOrder {
    elim: BTreeSet<Var>,
    mask: Vec<bool>,
    tail: MonomialOrder,
}

impl BlockOrder {
    pub fn elim_vars(&self) -> &BTreeSet<Var> {
        &self.elim
    }

    pub fn tail(&self) -> &MonomialOrder {
        &self.tail
    }

    #[inline]
    fn is_elim(&self, v: Var) -> bool {
        self.mask.get(v.index()).copied().unwrap_or(false)
    }
}

impl MonomialOrder {
    /// Elimination order with `elim` as the first block and `tail` on the rest.
    pub fn block(elim: impl IntoIterator<Item = Var>, tail: MonomialOrder) -> Self {
        let elim: BTreeSet<Var> = elim.into_iter().collect();
        let size = elim.iter().next_back().map(|v| v.index() + 1).unwrap_or(0);
        let mut mask = vec![false; size];
        for v in &elim {
            mask[v.index()] = true;
        }
        MonomialOrder::Block(Arc::new(BlockOrder { elim, mask, tail }))
    }

    /// Variables that this order eliminates first (empty unless block).
    pub fn elim_vars(&self) -> BTreeSet<Var> {
        match self {
            MonomialOrder::Block(b) => b.elim.clone(),
            _ => BTreeSet::new(),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::DegRevLex => {
                a.degree().cmp(&b.degree()).then_with(|| revlex_filtered(a, b, |_| true))
            }
            MonomialOrder::Block(blk) => {
                let da: u32 = a.iter().filter(|(v, _)| blk.is_elim(*v)).map(|(_, e)| e).sum();
                let db: u32 = b.iter().filter(|(v, _)| blk.is_elim(*v)).map(|(_, e)| e).sum();
                da.cmp(&db)
                    .then_with(|| revlex_filtered(a, b, |v| blk.is_elim(v)))
                    .then_with(|| blk.tail.cmp(a, b))
            }
        }
    }
}

fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    let (x, y) = (a.exps(), b.exps());
    let mut i = 0;
    while i < x.len() && i < y.len() {
        let ((va, ea), (vb, eb)) = (x[i], y[i]);
        if va != vb {
            // the monomial carrying the higher-priority variable wins
            return if va < vb { Ordering::Greater } else { Ordering::Less };
        }
        if ea != eb {
            return ea.cmp(&eb);
        }
        i += 1;
    }
    x.len().cmp(&y.len())
}

/// Reverse-lex tie break restricted to variables accepted by `keep`: the
/// monomial with the smaller exponent on the lowest-priority differing
/// variable is larger. Callers compare the (filtered) degrees first.
fn revlex_filtered(a: &Monomial, b: &Monomial, keep: impl Fn(Var) -> bool) -> Ordering {
    let mut xa = a.exps().iter().rev().filter(|(v, _)| keep(*v)).peekable();
    let mut xb = b.exps().iter().rev().filter(|(v, _)| keep(*v)).peekable();
    loop {
        match (xa.peek(), xb.peek()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                if va == vb {
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    xa.next();
                    xb.next();
                } else if va > vb {
                    // a uses a lower-priority variable that b lacks
                    return Ordering::Less;
                } else {
                    return Ordering::Greater;
                }
            }
        }
    }
}

impl fmt::Debug for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::DegRevLex => write!(f, "degrevlex"),
            MonomialOrder::Block(b) => write!(f, "block({:?}; {:?})", b.elim, b.tail),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(p.iter().map(|(v, e)| (Var(*v), *e)))
    }

    #[test]
    fn lex_basics() {
        let o = MonomialOrder::Lex;
        // x > y^5
        assert_eq!(o.cmp(&m(&[(0, 1)]), &m(&[(1, 5)])), Ordering::Greater);
        // x*y > x
        assert_eq!(o.cmp(&m(&[(0, 1), (1, 1)]), &m(&[(0, 1)])), Ordering::Greater);
        assert_eq!(o.cmp(&Monomial::one(), &m(&[(2, 1)])), Ordering::Less);
    }

    #[test]
    fn degrevlex_basics() {
        let o = MonomialOrder::DegRevLex;
        // x*z < y^2 in degrevlex with x > y > z
        assert_eq!(o.cmp(&m(&[(0, 1), (2, 1)]), &m(&[(1, 2)])), Ordering::Less);
        // x^2 > x*y > y^2 > x*z
        assert_eq!(o.cmp(&m(&[(0, 2)]), &m(&[(0, 1), (1, 1)])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[(0, 1), (1, 1)]), &m(&[(1, 2)])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[(2, 3)]), &m(&[(0, 2)])), Ordering::Greater);
    }

    #[test]
    fn block_eliminates() {
        let o = MonomialOrder::block([Var(2)], MonomialOrder::DegRevLex);
        // z > x^10 because z is in the elimination block
        assert_eq!(o.cmp(&m(&[(2, 1)]), &m(&[(0, 10)])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[(0, 2)]), &m(&[(0, 1), (1, 1)])), Ordering::Greater);
    }
}
