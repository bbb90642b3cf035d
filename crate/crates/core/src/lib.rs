//! Lattice partition multiple access (LPMA).
//!
//! Users' linear codes over prime fields are superimposed into one
//! multilevel lattice codeword through a Chinese-remainder mapping into
//! `R / (θ₁⋯θ_L)R`, with `R` one of Z, Z[i] or Z[ω]. Each receiver strips the
//! other users' levels with modulo-lattice folding, either successively
//! (SIC), in parallel (PIC), or with a mix of both.
//!
//! The crate also carries the NOMA/OMA rate baselines, a single-cell channel
//! model, user pairing for the scheduling study, and a seeded Monte Carlo
//! harness driven by the `lpma` binary.

pub mod acceptance;
pub mod assignment;
pub mod baseline;
pub mod channel;
pub mod code;
pub mod codec;
pub mod error;
pub mod harness;
pub mod pairing;
pub mod ring;

pub use error::{Error, Result};
