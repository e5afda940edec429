//! Exact-arithmetic invariants of complex line/plane arrangements.
//!
//! The library computes, without any floating point:
//!
//! - intersection lattices, multiplicities and Poincaré polynomials of line
//!   arrangements given by linear forms over ℚ or a small number field
//!   ([`arrangement`]);
//! - braid-monodromy presentations of the fundamental group of the complement,
//!   via generic slices of complexified-real arrangements or user-supplied
//!   braid words ([`braidgroup`]);
//! - Alexander matrices by Fox calculus, Gassner matrices, linearized
//!   Alexander matrices (two independent routes), and homology of finite-index
//!   kernels by the permutation-Jacobian method ([`foxcalc`]);
//! - characteristic and resonance varieties by exact torsion-point
//!   enumeration over finite fields, cyclotomic fields, or multi-prime
//!   modular evaluation ([`jumpingloci`]);
//! - first Betti numbers of congruence covers and Hirzebruch covering
//!   surfaces, Chern numbers, and polynomial-periodicity detection
//!   ([`covers`]);
//! - Hall invariants, low-index subgroup counts, Witt numbers and the
//!   resonance-based rank formulas ([`counting`]).
//!
//! A bundled corpus of twelve arrangements with their published invariants
//! lives in [`corpus`] and backs the `verify-corpus` command of the CLI.

pub mod exactalg;
pub mod arrangement;
pub mod braidgroup;
pub mod foxcalc;
pub mod jumpingloci;
pub mod covers;
pub mod counting;
pub mod corpus;
pub mod report;

use thiserror::Error;

/// Crate-level error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field specification: {0}")]
    FieldSpec(String),
    #[error("mixed-field or mismatched operands: {0}")]
    Mixed(String),
    #[error("invalid arrangement: {0}")]
    Arrangement(String),
    #[error("genericity not achieved after {0} retries")]
    Genericity(usize),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
