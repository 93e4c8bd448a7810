//! Equivariant Euler characteristics of finite group actions on simplicial
//! complexes, computed exactly two ways: a Lefschetz-trace oracle and a
//! stratified orbit-type formula. Also evaluates equivariant and basic index
//! formulas from per-stratum analytic data.

pub mod assembler;
pub mod cyclotomic;
pub mod error;
pub mod finedecomp;
pub mod gcomplex;
pub mod grouprep;
pub mod io;
pub mod lefschetz;
pub mod strataformula;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
