//! Operator ranges: exact cardinal decisions about disjoint unitary images,
//! exact sequence-space membership, and a dense finite-dimensional backend
//! for the numeric constructions.

pub mod cardinal;
pub mod cli;
pub mod matrix_core;
pub mod range_rep;
pub mod seqspace;
pub mod tolerances;
pub mod unitary;
