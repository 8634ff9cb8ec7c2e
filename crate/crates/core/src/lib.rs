//! Bond percolation on uniformly random simple graphs with a prescribed
//! degree sequence.
//!
//! The crate is organised bottom-up:
//!
//! - [`degseq`]: degree-sequence analytics (tail conditions, critical
//!   quantities, classification, power-law construction).
//! - [`graph`]: labelled simple graphs, the edge-switch Markov chain and the
//!   brute-force enumeration oracle.
//! - [`percolation`]: bond percolation and union-find component analysis.
//! - [`exploration`]: the sequential component exploration process with
//!   free/backward degree bookkeeping.
//! - [`harness`]: seeded, parallel Monte Carlo experiments built on the above.
//! - [`io`]: the text formats used by the command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod degseq;
pub mod error;
pub mod exploration;
pub mod graph;
pub mod harness;
pub mod io;
pub mod percolation;
pub mod rng;
pub mod stats;

pub use degseq::{Classification, CriticalProfile, DegreeSequence, Regime, TailConditionReport};
pub use error::{Error, Result};
pub use graph::{LabeledGraph, Switch, SwitchOutcome};
pub use percolation::{Partition, PercolationSample};
