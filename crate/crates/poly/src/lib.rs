//! Exact multivariate polynomials over the rationals and the Groebner-basis
//! machinery built on them: reduction, bases, membership, radical
//! membership, elimination, saturation, dimension and bounded factoring.

mod factor;
mod gcd;
mod groebner;
mod ideal;
mod limits;
mod monomial;
mod names;
mod order;
mod polynomial;
mod rational;

pub use factor::{factor_squarefree, integer_sqrt, polynomial_sqrt, rational_sqrt, Factorization};
pub use gcd::{content_in, exact_div, gcd, primitive_in, pseudo_rem};
pub use groebner::{groebner_basis, is_groebner_basis, reduce, s_polynomial};
pub use ideal::{dimension, dimension_in, eliminate, ideal_membership, radical_membership, saturate, Ideal};
pub use limits::{KernelError, KernelResult, LimitKind, Limits};
pub use monomial::{Monomial, Var};
pub use names::{parse_polynomial, ParsePolyError, VarNames};
pub use order::{BlockOrder, MonomialOrder};
pub use polynomial::{Polynomial, Term};
pub use rational::{big_gcd, big_lcm, ParseRatError, Rat};
