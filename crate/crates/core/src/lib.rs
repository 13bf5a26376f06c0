//! Core of a subkey-recovery workbench for 6-round Feistel-2* ciphers.
//!
//! This crate is `no_std` (it needs `alloc`) and contains every algorithmic
//! piece of the workbench:
//!
//! * [`cipher`] and [`schedule`]: a width-parametric Feistel-2* structure with
//!   the Simeck round function (full Simeck32/64 plus toy widths) and seeded
//!   table-driven round functions.
//! * [`attack`]: chosen-plaintext generation, the difference functions that
//!   turn 6-round key recovery into a two-equation claw problem, the per-subkey
//!   check predicates and the staged recovery pipeline.
//! * [`claw`]: claw problems, the multi-equation concatenation and classical
//!   claw finders (exhaustive census and sort-and-match).
//! * [`quantum`]: Grover statevector simulation and the quantum-walk claw
//!   finder, simulated either on the full basis or on a symmetry-reduced
//!   class basis, with exact oracle-query accounting.
//!
//! IO, reports and the command line live in the `asr-workbench` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod attack;
pub mod cipher;
pub mod claw;
mod error;
mod math;
pub mod quantum;
pub mod schedule;
mod word;

pub use error::{Error, Result};
pub use word::{rotl, Block, Word, MAX_WIDTH, MIN_WIDTH};
