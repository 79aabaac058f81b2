//! Three-forms on six-dimensional symplectic vector spaces and on
//! six-dimensional Lie algebras: the equivariant polynomials K, F, Q, orbit
//! classification under GL and Sp, integrability conditions for invariant
//! forms, the reduced Type IIA flow, and the Hessian geometry of the
//! Lagrangian-foliation example.
//!
//! Everything algebraic is generic over [`Scalar`], with exact rationals and
//! `f64` as backends.

pub mod error;
pub mod exterior;
pub mod flow;
pub mod hessian;
pub mod invariants;
pub mod io;
pub mod liealg;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use exterior::{Form, LinearMap6, MultiIndex, Vector6};
pub use invariants::{GlOrbit, PrimitiveCoords, SpLabel, SpOrbit, SymplecticForm, Tolerance};
pub use liealg::{InvariantSetup, LieAlgebra6};
pub use linalg::{Matrix, SignatureTriple};
pub use scalar::{Rational, Scalar};
