//! Exact arithmetic over Q and Q(x1..xr).

pub mod field;
pub mod gcd;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod roots;
pub mod vars;

pub use field::FieldElem;
pub use poly::{Monomial, MultiPoly};
pub use rational::Rational;
pub use vars::Vars;
