//! Explicit orthonormal eigenbases of the Laplacian on the 3-sphere and its
//! lens-space and prism-space quotients.
//!
//! The library constructs the separated-variable eigenmodes Ψ_{kℓm} of S³ in
//! toroidal coordinates, normalizes them with exact factorial norm constants,
//! converts them to exact-rational homogeneous harmonic polynomials, and
//! applies integer selection rules to produce orthonormal eigenbases — and
//! hence multiplicity spectra — for every lens space L(p,q) and every prism
//! space S³/D*ₙ. Numerical oracles (product Gauss quadrature, finite
//! differences, invariance residuals) cross-check the exact constructions;
//! the closed forms are always the source of truth and the numerics only
//! verify them.
//!
//! Modules:
//! * [`geometry`] — toroidal coordinates and torus-aligned isometries with
//!   exact rational angles,
//! * [`jacobi`] — Jacobi polynomials from their explicit binomial sum and the
//!   factorial norm factor,
//! * [`modes`] — the eigenmodes, normalization and the basis B_k,
//! * [`polynomial`] — exact homogeneous-polynomial forms and the symbolic
//!   harmonicity check,
//! * [`symmetry`] — the action of isometries on eigenspaces, fixed-subspace
//!   bases and the quarter-turn sign rule,
//! * [`quotient`] — lens and prism eigenbases, multiplicities, spectra and
//!   Ikeda's closed form,
//! * [`validation`] — quadrature, Gram matrices, residual checks and the
//!   reference spectra,
//! * [`cli`] — the `spaceform` command-line interface.

// Parity tests read better as `k % 2 == 0`, and small-matrix arithmetic
// reads better with indexed loops.
#![allow(clippy::manual_is_multiple_of, clippy::needless_range_loop)]

pub mod cli;
pub mod geometry;
pub mod jacobi;
pub mod modes;
pub mod polynomial;
pub mod quotient;
pub mod symmetry;
pub mod validation;

pub use geometry::{
    apply_isometry, from_cartesian, isometry_matrix, to_cartesian, CartesianPoint, ToroidalPoint,
    TorusIsometry,
};
pub use jacobi::{binomial, jacobi_eval, jacobi_norm_factor, JacobiParams};
pub use modes::{
    circular_phi, circular_theta, enumerate_basis, mode_normalized, mode_unnormalized,
    normalization_constant, radial, BasisVector, Coefficient, ModeIndex,
};
pub use polynomial::{
    euclidean_laplacian, evaluate_polynomial, is_homogeneous_harmonic, to_polynomial,
    HarmonicPolynomial,
};
pub use quotient::{
    ikeda_multiplicity, lens_basis, lens_multiplicity, prism_basis, prism_multiplicity, spectrum,
    QuotientSpace, Spectrum,
};
pub use symmetry::{
    action_matrix, character_trace, fixed_subspace_basis, quarter_turn, sigma, z4_image,
    SubspaceBlock,
};
pub use validation::{
    build_rule, gram_matrix, helmholtz_residual, inner_product, invariance_residual,
    QuadratureRule, VerificationReport,
};
