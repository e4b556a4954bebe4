//! Exact computation and verification for ternary cyclotomic polynomials
//! `Phi_pqr` with odd primes `p < q < r`.
//!
//! The central object is the integer sequence `F_k` built from the CRT
//! residues of `k` ([`fkseq`]). Counting its zeros over a sliding window gives
//! every coefficient ([`coeffs`]); its structure yields the height bounds
//! checked in [`bounds`]. [`stats`] enumerates the bounds over residue
//! classes, and [`verify`] runs every identity against an independent
//! power-series oracle.

pub mod arith;
pub mod bounds;
pub mod coeffs;
pub mod error;
pub mod exec;
pub mod fkseq;
pub mod stats;
pub mod sweep;
pub mod verify;

pub use arith::{crt_residues, is_prime, mod_inverse, primes_in, ResidueVector, TernaryTriple};
pub use bounds::{BoundReport, CaseCounts, CaseLabel};
pub use coeffs::{
    all_coefficients, coefficient_at, extrema, oracle_coefficients, CoefficientVector,
    ExtremaSummary,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fkseq::FkContext;
pub use stats::{Rational, ResidueGrid};
pub use sweep::SweepRow;
