//! Exact arithmetic for Drinfeld `F_q[t]`-modules and shtukas over artinian
//! coefficient rings: local L-factors and Goss L-values, exponentials and
//! logarithms, Taelman units and class modules, and checkers for the Anderson
//! and artinian trace formulas.

pub mod drinfeld;
pub mod error;
pub mod field;
pub mod irreducible;
pub mod laurent;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod quotient;
pub mod ring;
pub mod shtuka;
pub mod skew;
pub mod special_values;
pub mod taelman;

pub use error::{Error, Result};
pub use field::{Fq, FqElem};
pub use poly::{Poly, PolyRing};
pub use ring::{ExactDiv, FiniteRing, Ring};
