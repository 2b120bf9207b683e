//! Reductions from 3k-clique detection to CFG recognition, RNA folding and
//! Dyck edit distance, with the reference solvers for each target problem.

pub mod dyck;
pub mod folding;
pub mod grammars;
pub mod graphs;
pub mod harness;
pub mod recognition;
pub mod reductions;
pub mod tokens;
