//! Exact symbolic engine for free-field vertex algebras.
//!
//! The Fock space `B(T, g) ⊗ F(T, g)` over a finite-dimensional inner-product
//! space is built with exact rational coefficients. On top of the n-th products
//! sit the (super)conformal structures, the A/B twists, BRST cohomology on
//! truncated blocks, graded characters, and the special-holonomy states.

pub mod brst;
pub mod characters;
pub mod conventions;
pub mod error;
pub mod expr;
pub mod holonomy;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod space;
pub mod state;
pub mod structures;
pub mod vertex;

pub use error::{Error, Result};
pub use rational::Rational;
pub use space::{Gen, Grading, Letter, Mode, Sector, SpaceSpec};
pub use state::{Monomial, State};
