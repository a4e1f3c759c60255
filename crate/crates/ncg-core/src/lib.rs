//! Exact computer algebra for derivation-based differential geometry on two
//! noncommutative model algebras.
//!
//! Everything here is computed over exact scalars — arbitrary-precision
//! Gaussian rationals ℚ(i) and Laurent scalars ℚ(i)[q, q⁻¹] with a formal,
//! transcendental q. There is no floating point anywhere in the crate; every
//! claimed identity is verified with residuals that are exactly zero.
//!
//! The two model algebras:
//!
//! * the generalized Kronecker algebra `K_N` ([`kronecker`]): the path algebra
//!   of the quiver with two vertices and `N` parallel arrows. Its derivation
//!   Lie algebra, derivation-based differential calculi, hermitian forms,
//!   connections, and Levi-Civita problems are all finite dimensional and
//!   solved exactly ([`derivation`], [`calculus`], [`form`], [`connection`],
//!   [`levi_civita`]);
//! * the noncommutative torus with formal deformation parameter q
//!   ([`torus`]): finitely supported elements Σ c_{kl} U^k V^l with VU = qUV,
//!   the free bimodule of one-forms over the central basis (ω, η), metric
//!   connections, and windowed de Rham cohomology.
//!
//! [`linalg`] supplies the deterministic exact linear algebra (fraction-free
//! elimination, reduced echelon forms, kernels, affine solution families)
//! that the rest of the crate is built on. [`verify`] exposes the named check
//! suites used by the CLI and the acceptance tests, and [`batch`] routes
//! independent checks through rayon when the `parallel` feature (default on)
//! is enabled.

// Tensor and matrix formulas are written with explicit indices on purpose:
// `t[a][b][c]` mirrors the Γ^b_{ac} notation they implement, which iterator
// chains would bury.
#![allow(clippy::needless_range_loop)]

pub mod batch;
pub mod calculus;
pub mod connection;
pub mod derivation;
pub mod form;
pub mod kronecker;
pub mod levi_civita;
pub mod linalg;
pub mod sample;
pub mod scalar;
pub mod torus;
pub mod verify;

pub use scalar::{GaussianRational, LaurentScalar, ScalarError};
