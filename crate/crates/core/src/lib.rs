//! Exact-arithmetic verification of finite-dimensional claims from symplectic
//! linear algebra, graded sl2 representation theory, symmetric pairs and the
//! commutator incidence geometry behind multiplicity-one for GL_n.
//!
//! Everything is computed over Q or over a prime field F_p; there is no
//! floating point and no tolerance anywhere. The crate is organized as
//! library layers (`exact`, `symplectic`, `sl2`, `sympair`, `keylemma`) plus
//! deterministic verification suites (`suites`) consumed by the CLI.
//!
//! The finite-field enumerations and polynomial-identity grids are
//! data-parallel; the `parallel` feature (on by default) runs them on rayon,
//! and disabling it falls back to sequential loops with identical output.

pub mod exact;
pub mod keylemma;
pub mod report;
pub mod sl2;
pub mod suites;
pub mod sympair;
pub mod symplectic;
