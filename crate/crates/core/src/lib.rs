//! Exact finite-level verification engine for the algebraic K-theory of the
//! Segre cone `k[x1..x4]/(x1 x2 - x3 x4)`.
//!
//! Every object here is graded by characters of the torus acting on the
//! cone, so all linear algebra splits into small exact blocks.

pub mod exactla;
pub mod monoid;
pub mod polyring;
pub mod kaehler;
pub mod prosys;
pub mod sheafcalc;
pub mod ktheory;
