//! A numerical laboratory for operators on the two-norm pair H1_0 in L2.
//!
//! The solution operator A of the Helmholtz problem `u - lap u = f`,
//! `u = 0` on the boundary, is diagonal in its own eigenbasis, and the
//! weights gamma_k = sqrt(1 + mu_k) (mu_k the Dirichlet Laplace eigenvalues)
//! link the Sobolev-orthonormal and L2-orthonormal eigenbases. Finite
//! Galerkin truncation in that basis turns the group of invertible
//! Sobolev-bounded operators preserving the L2 inner product, its Lie
//! algebra of (i times) symmetrizable operators, and the associated
//! Schatten-Finsler geometry into concrete dense matrix computations:
//!
//! * [`domains`] — model domains and their Laplace spectra (interval, unit
//!   disk via Bessel zeros, Weyl-law model, Fourier grids);
//! * [`operator`] — truncated operators, the diagonal similarity between the
//!   two representations, membership predicates, extension map, intertwiner;
//! * [`constructors`] — multiplication/composition operators, rank-one
//!   phases, unitary blocks, doubling shifts, seeded random draws;
//! * [`spectra`] — dual-norm spectra, resolvent norms, pseudospectral
//!   truncation ladders;
//! * [`geodesics`] — group logarithms, eigenvalue trimming, Schatten-p
//!   lengths, minimal-curve experiments;
//! * [`experiments`] — named reproducible experiment drivers;
//! * [`report`] — deterministic CSV/JSON emission.

// Force linkage of the BLAS backend for ndarray's matrix products.
extern crate blas_src;

pub mod bessel;
pub mod constructors;
pub mod domains;
pub mod error;
pub mod experiments;
pub mod geodesics;
pub mod linalg;
pub mod operator;
pub mod quadrature;
pub mod report;
pub mod spectra;

pub use error::{Error, Result};
