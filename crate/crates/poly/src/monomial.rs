//! Sparse monomials over integer variable ids.

use smallvec::SmallVec;
use std::fmt;

/// A polynomial variable. Lower ids have higher priority in every order
/// (`Var(0) > Var(1) > ...`).
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

pub(crate) type Exps = SmallVec<[(Var, u32); 4]>;

/// Power product `prod v^e`. Stored sorted by variable id with no zero
/// exponents; the total degree is cached.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    deg: u32,
    exps: Exps,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut exps = Exps::new();
        exps.push((v, e));
        Monomial { deg: e, exps }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs; duplicates add up.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(Var, u32)> = pairs.into_iter().filter(|(_, e)| *e > 0).collect();
        v.sort_by_key(|(var, _)| *var);
        let mut exps = Exps::new();
        for (var, e) in v {
            match exps.last_mut() {
                Some((last, le)) if *last == var => *le += e,
                _ => exps.push((var, e)),
            }
        }
        let deg = exps.iter().map(|(_, e)| e).sum();
        Monomial { deg, exps }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.exps.binary_search_by_key(&v, |(x, _)| *x) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    /// `(var, exp)` pairs in increasing variable id.
    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub(crate) fn exps(&self) -> &[(Var, u32)] {
        &self.exps
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|(v, _)| *v)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.exponent(v) > 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Exps::with_capacity(self.exps.len() + other.exps.len());
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    exps.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    exps.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    exps.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&a[i..]);
        exps.extend_from_slice(&b[j..]);
        Monomial { deg: self.deg + other.deg, exps }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial {
            deg: self.deg * e,
            exps: if e == 0 {
                Exps::new()
            } else {
                self.exps.iter().map(|(v, x)| (*v, x * e)).collect()
            },
        }
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        if self.deg > other.deg || self.exps.len() > other.exps.len() {
            return false;
        }
        let b = &other.exps;
        let mut j = 0;
        for &(v, e) in &self.exps {
            while j < b.len() && b[j].0 < v {
                j += 1;
            }
            if j == b.len() || b[j].0 != v || b[j].1 < e {
                return false;
            }
            j += 1;
        }
        true
    }

    /// `other / self` when `self` divides `other`.
    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        let mut exps = Exps::new();
        let mut j = 0;
        let d = &divisor.exps;
        for &(v, e) in &self.exps {
            let mut sub = 0;
            if j < d.len() && d[j].0 == v {
                sub = d[j].1;
                j += 1;
            }
            if e > sub {
                exps.push((v, e - sub));
            }
        }
        Some(Monomial { deg: self.deg - divisor.deg, exps })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, u32::max)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, u32::min)
    }

    fn merge_with(&self, other: &Monomial, f: fn(u32, u32) -> u32) -> Monomial {
        let mut exps = Exps::new();
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (v, ea, eb) = if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, a[i - 1].1, 0)
            } else if i == a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, 0, b[j - 1].1)
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, a[i - 1].1, b[j - 1].1)
            };
            let e = f(ea, eb);
            if e > 0 {
                exps.push((v, e));
            }
        }
        let deg = exps.iter().map(|(_, e)| e).sum();
        Monomial { deg, exps }
    }

    /// No variable in common.
    pub fn is_coprime(&self, other: &Monomial) -> bool {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Removes `v` from the monomial, returning its former exponent.
    pub fn without(&self, v: Var) -> (Monomial, u32) {
        let e = self.exponent(v);
        if e == 0 {
            return (self.clone(), 0);
        }
        let exps: Exps = self.exps.iter().copied().filter(|(x, _)| *x != v).collect();
        (Monomial { deg: self.deg - e, exps }, e)
    }

    /// Renames variables through `f`; the result is re-sorted.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|(v, e)| (f(*v), *e)))
    }

    pub(crate) fn approx_bytes(&self) -> usize {
        8 + self.exps.len() * 8
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(p.iter().map(|(v, e)| (Var(*v), *e)))
    }

    #[test]
    fn arithmetic() {
        let a = m(&[(0, 2), (2, 1)]);
        let b = m(&[(1, 1), (2, 3)]);
        assert_eq!(a.mul(&b), m(&[(0, 2), (1, 1), (2, 4)]));
        assert_eq!(a.lcm(&b), m(&[(0, 2), (1, 1), (2, 3)]));
        assert_eq!(a.gcd(&b), m(&[(2, 1)]));
        assert!(m(&[(2, 1)]).divides(&a));
        assert!(!b.divides(&a));
        assert_eq!(a.div(&m(&[(0, 1)])), Some(m(&[(0, 1), (2, 1)])));
        assert!(m(&[(0, 1)]).is_coprime(&m(&[(1, 2)])));
        assert_eq!(a.degree(), 3);
    }

    #[test]
    fn no_zero_exponents() {
        let a = m(&[(0, 0), (3, 2)]);
        assert_eq!(a.exps().len(), 1);
        assert_eq!(a.div(&a), Some(Monomial::one()));
    }
}
