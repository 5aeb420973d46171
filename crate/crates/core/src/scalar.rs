//! Numbers that stay exact rationals until an operation forces a float.

use mg_poly::{rational_sqrt, Rat};
use std::fmt;

#[derive(Clone, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Float(f64),
}

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar::Exact(Rat::from_int(n))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Float(self.to_f64() + o.to_f64()),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => Scalar::Float(self.to_f64() - o.to_f64()),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_f64() * o.to_f64()),
        }
    }

    /// Quotient; the caller rules out a zero divisor.
    pub fn div(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a / b),
            _ => Scalar::Float(self.to_f64() / o.to_f64()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }

    pub fn scale(&self, k: &Rat) -> Scalar {
        self.mul(&Scalar::Exact(k.clone()))
    }

    /// Square root of a non-negative value, exact when it is a rational square.
    pub fn sqrt(&self) -> Scalar {
        if let Scalar::Exact(r) = self {
            if let Some(s) = rational_sqrt(r) {
                return Scalar::Exact(s);
            }
        }
        Scalar::Float(self.to_f64().max(0.0).sqrt())
    }

    /// Exact zero test for rationals; for floats, `|x| <= tol`.
    pub fn is_negligible(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => x.abs() <= tol,
        }
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}
