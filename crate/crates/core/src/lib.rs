//! Exact arithmetic for instanton bundles on Fano threefolds.
//!
//! The crate is organised around a small catalog of Fano threefolds with
//! their integral cohomology rings ([`chow`]), a formal Chern-class calculus
//! with Riemann-Roch ([`bundles`]), instanton-specific bookkeeping such as
//! quantum-number bounds, cohomology tables and moduli dimensions
//! ([`instanton`]), slope/stability case analyses ([`stability`]), exact
//! dense linear algebra over the rationals and a small prime field
//! ([`linalg`]), and explicit monads on the smooth quadric threefold with
//! jumping-line detection ([`monad`]).
//!
//! All coefficients are exact rationals; nothing in this crate uses floating
//! point. Randomised routines take explicit seeds and are reproducible.

pub mod bundles;
pub mod chow;
pub mod instanton;
pub mod linalg;
pub mod monad;
pub mod rat;
pub mod stability;

pub use chow::{build_catalog, Catalog, CycleClass, CycleRing, FanoThreefold};
pub use rat::Rat;
