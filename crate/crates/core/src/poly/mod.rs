//! Exact polynomial kernel over the rationals.

mod gcd;
mod groebner;
mod ideal;
mod linsolve;
mod monomial;
mod order;
mod parse;
mod polynomial;
mod quotient;
mod ratfun;
pub mod univariate;
mod vars;

pub use gcd::poly_gcd;
pub use groebner::{complete, groebner, groebner_with_cofactors, Completion, Limits};
pub use ideal::{integral_dependence, is_regular_on, normal_form, Ideal, IntegralRelation};
pub use linsolve::LinearSystem;
pub use monomial::{Monomial, Var};
pub use order::MonomialOrder;
pub use parse::{eval_ratfun, parse_expr, parse_poly, parse_ratfun, Expr};
pub use polynomial::Poly;
pub use quotient::{char_poly, matmul, quotient_algebra, BaseField, QuotientAlgebra};
pub use ratfun::RationalFunction;
pub use vars::VarTable;

/// Exact rational number.
pub type Q = num_rational::BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
