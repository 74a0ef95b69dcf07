//! Exact polynomial arithmetic and elimination over the rationals.

pub mod bpoly;
pub mod decompose;
pub mod elim;
pub mod linalg;
pub mod rat;
pub mod roots;
pub mod upoly;

pub use bpoly::{BPoly, Var};
pub use decompose::up_decompose;
pub use elim::{gcd, resultant, squarefree_part};
pub use rat::{rat, ratio, Rat};
pub use roots::{up_roots_numeric, CPoint};
pub use upoly::UPoly;
