//! Unambiguous star-free regular languages: partially-ordered two-way
//! DFAs, five deterministic temporal logics, and the constructive
//! translations between them, validated end to end by brute-force
//! semantic oracles and bounded language-equivalence checks.
//!
//! The pieces and the arrows between them:
//!
//! ```text
//!   tlrec  <-->  tlfp  -->  tlxy  -->  po2dfa  -->  duds  -->  uitlpm
//!                                        ^                       |
//!                                        +---- (via tlxy) -------+
//! ```
//!
//! Every logic has a direct evaluator that serves as the oracle for the
//! compiled/translated artifacts; [`difftest`] hosts the generators and
//! the bounded equivalence driver used by the test suites.
//!
//! See the crate examples for runnable tours of each capability, and the
//! `ul` binary for the file-level command line interface.

pub mod alphabet;
pub mod cli;
pub mod difftest;
pub mod duds;
pub mod ete;
pub mod files;
pub mod po2dfa;
pub mod sexpr;
pub mod tlfp;
pub mod tlrec;
pub mod tlxy;
pub mod uitlpm;
