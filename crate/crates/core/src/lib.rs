//! Irregular repeat-accumulate (IRA) codes built on a dithered relative-prime
//! interleaver whose small dither table comes from the Grünbaum graph.
//!
//! The crate is split along the data flow of a simulation run:
//!
//! - [`graph`]: the Grünbaum graph, Hamiltonian-path search and dither derivation.
//! - [`interleaver`]: dither tables, the relative-prime map and the full 1344-entry interleaver.
//! - [`code`]: degree realization, Tanner graph construction and the systematic encoder.
//! - [`decoder`]: flooding and turbo-scheduled belief propagation plus an exhaustive MAP oracle.
//! - [`baseline`]: the K=9 rate-1/4 convolutional code and its soft Viterbi decoder.
//! - [`channel`]: BPSK, seeded AWGN and LLR computation.
//! - [`analysis`]: 4-cycle counting, stopping-set search and the (p, s) search.
//! - [`sim`]: the Monte-Carlo harness with CSV and SVG output.

pub mod analysis;
pub mod baseline;
pub mod channel;
pub mod code;
pub mod decoder;
pub mod error;
pub mod graph;
pub mod interleaver;
pub mod sim;

pub use error::{Error, Result};

/// Hard bit, always 0 or 1.
pub type Bit = u8;
