//! Mod-p Hecke algebras of weight-k cusp forms on Gamma0(N), computed from
//! Manin-symbol presentations, split into local factors, and summarised by
//! residue-degree statistics over sweeps of prime levels.

pub mod arith;
pub mod degen;
pub mod error;
pub mod exactint;
pub mod ffalg;
pub mod hecke;
pub mod localdec;
pub mod modsym;
pub mod survey;

pub use error::{Error, Result};
