//! Measure expressions: polynomials with rational coefficients in lengths,
//! squared distances, signed areas and circumradii.

use mg_poly::Rat;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Primitive {
    Length(String, String),
    SqDist(String, String),
    /// Signed area of the triangle, positive when counterclockwise.
    Area(String, String, String),
    Circumradius(String, String, String),
}

impl Primitive {
    /// Puts the arguments in canonical order: symmetric arguments sorted,
    /// signed areas rotated so the smallest point comes first.
    pub fn canonical(self) -> Primitive {
        match self {
            Primitive::Length(a, b) => {
                let (a, b) = sort2(a, b);
                Primitive::Length(a, b)
            }
            Primitive::SqDist(a, b) => {
                let (a, b) = sort2(a, b);
                Primitive::SqDist(a, b)
            }
            Primitive::Area(a, b, c) => {
                if a <= b && a <= c {
                    Primitive::Area(a, b, c)
                } else if b <= a && b <= c {
                    Primitive::Area(b, c, a)
                } else {
                    Primitive::Area(c, a, b)
                }
            }
            Primitive::Circumradius(a, b, c) => {
                let mut v = [a, b, c];
                v.sort();
                let [a, b, c] = v;
                Primitive::Circumradius(a, b, c)
            }
        }
    }

    pub fn points(&self) -> Vec<&str> {
        match self {
            Primitive::Length(a, b) | Primitive::SqDist(a, b) => vec![a, b],
            Primitive::Area(a, b, c) | Primitive::Circumradius(a, b, c) => vec![a, b, c],
        }
    }

    /// Whether the primitive is a polynomial in the coordinates (and so
    /// needs no auxiliary variable).
    pub fn is_polynomial(&self) -> bool {
        matches!(self, Primitive::SqDist(..) | Primitive::Area(..))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Primitive::Length(..) => "length",
            Primitive::SqDist(..) => "sqdist",
            Primitive::Area(..) => "area",
            Primitive::Circumradius(..) => "circumradius",
        }
    }
}

fn sort2(a: String, b: String) -> (String, String) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.points().join(", "))
    }
}

/// A product of primitive powers, sorted by primitive.
pub type Product = Vec<(Primitive, u32)>;

/// Sum of `coefficient * product` terms; the empty product is the constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeasureExpr {
    terms: BTreeMap<Product, Rat>,
}

impl MeasureExpr {
    pub fn constant(c: Rat) -> Self {
        let mut e = MeasureExpr::default();
        if !c.is_zero() {
            e.terms.insert(Vec::new(), c);
        }
        e
    }

    pub fn primitive(p: Primitive) -> Self {
        let mut e = MeasureExpr::default();
        e.terms.insert(vec![(p.canonical(), 1)], Rat::one());
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Product, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the expression has no primitives.
    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Distinct primitives, in canonical order.
    pub fn primitives(&self) -> Vec<&Primitive> {
        let mut v: Vec<&Primitive> = self.terms.keys().flat_map(|p| p.iter().map(|(q, _)| q)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Whether some term multiplies two non-polynomial primitives (or
    /// raises one to a power), which the auxiliary-variable scheme for
    /// lengths does not support.
    pub fn has_nonlinear_radicals(&self) -> bool {
        self.terms.keys().any(|prod| {
            let deg: u32 = prod.iter().filter(|(p, _)| !p.is_polynomial()).map(|(_, e)| *e).sum();
            deg > 1
        })
    }

    fn add_term(&mut self, prod: Product, c: Rat) {
        let entry = self.terms.entry(prod).or_insert_with(Rat::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &MeasureExpr) -> MeasureExpr {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> MeasureExpr {
        if k.is_zero() {
            return MeasureExpr::default();
        }
        MeasureExpr { terms: self.terms.iter().map(|(p, c)| (p.clone(), c * k)).collect() }
    }

    pub fn sub(&self, other: &MeasureExpr) -> MeasureExpr {
        self.add(&other.scale(&Rat::from_int(-1)))
    }

    pub fn mul(&self, other: &MeasureExpr) -> MeasureExpr {
        let mut out = MeasureExpr::default();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(mul_products(p, q), a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MeasureExpr {
        let mut acc = MeasureExpr::constant(Rat::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates with the given primitive values.
    pub fn eval(&self, value: &mut dyn FnMut(&Primitive) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(prod, c)| prod.iter().fold(c.to_f64(), |acc, (p, e)| acc * value(p).powi(*e as i32)))
            .sum()
    }
}

fn mul_products(a: &Product, b: &Product) -> Product {
    let mut map: BTreeMap<Primitive, u32> = BTreeMap::new();
    for (p, e) in a.iter().chain(b) {
        *map.entry(p.clone()).or_insert(0) += e;
    }
    map.into_iter().collect()
}

impl fmt::Display for MeasureExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // constant term last, as it reads more naturally
        let mut ordered: Vec<(&Product, &Rat)> = self.terms.iter().filter(|(p, _)| !p.is_empty()).collect();
        ordered.extend(self.terms.iter().filter(|(p, _)| p.is_empty()));
        for (i, (prod, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = prod
                .iter()
                .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
                .collect();
            if prod.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
