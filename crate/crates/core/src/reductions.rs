//! Graph-to-string builders for the three target problems.

mod cfg;
mod dyck;
mod rna;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{encode_node, Graph};
use crate::tokens::TokenSequence;

pub use cfg::{build_cfg_string, cfg_gadgets, cfg_metadata};
pub use dyck::{
    build_dyck_instance, build_dyck_instance_with_budget, dyck_alphabet, dyck_gadgets, dyck_instance_length,
    DyckGadgets, DyckInstance, DyckPadding, DEFAULT_TOKEN_BUDGET,
};
pub use rna::{build_rna_instance, rna_gadgets, RnaGadgets, RnaInstance, RnaParams};

/// Bumped whenever builder output changes.
pub const BUILDER_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("token `{0}` is already marked")]
    AlreadyMarked(String),
    #[error("instance would have {length} tokens, over the budget of {budget}")]
    OverBudget { length: String, budget: u64 },
    #[error("padding lengths must be even, at least 2 and strictly increasing: {0:?}")]
    BadPadding(Vec<u128>),
    #[error("scale separation violated: {0}")]
    Separation(String),
}

/// One of the three type pairs used to mark letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeMark {
    AlphaBeta,
    AlphaGamma,
    BetaGamma,
}

impl TypeMark {
    pub const ALL: [TypeMark; 3] = [TypeMark::AlphaBeta, TypeMark::AlphaGamma, TypeMark::BetaGamma];

    pub fn suffix(self) -> &'static str {
        match self {
            TypeMark::AlphaBeta => "ab",
            TypeMark::AlphaGamma => "ag",
            TypeMark::BetaGamma => "bg",
        }
    }
}

fn split_prime(token: &str) -> (&str, bool) {
    match token.strip_suffix('\'') {
        Some(base) => (base, true),
        None => (token, false),
    }
}

fn is_marked(base: &str) -> bool {
    TypeMark::ALL.iter().any(|m| base.len() > 3 && base.ends_with(&format!("_{}", m.suffix())))
}

/// Marks every letter: `σ` becomes `σ_xy` and `σ'` becomes `σ_xy'`.
pub fn mark(s: &TokenSequence, xy: TypeMark) -> Result<TokenSequence, ReductionError> {
    s.iter()
        .map(|t| {
            let (base, primed) = split_prime(t);
            if is_marked(base) {
                return Err(ReductionError::AlreadyMarked(t.clone()));
            }
            Ok(format!("{base}_{}{}", xy.suffix(), if primed { "'" } else { "" }))
        })
        .collect()
}

/// Swaps every letter with its partner: `σ ↔ σ'`.
pub fn prime(s: &TokenSequence) -> TokenSequence {
    s.iter()
        .map(|t| match split_prime(t) {
            (base, true) => base.to_owned(),
            (base, false) => format!("{base}'"),
        })
        .collect()
}

pub fn reverse(s: &TokenSequence) -> TokenSequence {
    s.iter().rev().cloned().collect()
}

/// `p(s)ᴿ`
pub(crate) fn prime_reverse(s: &TokenSequence) -> TokenSequence {
    prime(&reverse(s))
}

pub(crate) fn bits(v: usize, n: usize) -> TokenSequence {
    TokenSequence::from_tokens(encode_node(v, n).expect("node in range").tokens())
}

pub(crate) fn repeat(s: &TokenSequence, times: usize) -> TokenSequence {
    let mut out = TokenSequence::new();
    for _ in 0..times {
        out.extend_from(s);
    }
    out
}

/// Score thresholds of an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub e1: u64,
    pub e2: u64,
    pub e3: u64,
    /// Cost of one closed gadget of each type (Dyck only).
    pub el: Option<[u64; 3]>,
    pub ec: u64,
    /// Number of k-cliques.
    pub cliques: usize,
}

/// Sidecar written next to every built token file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildMetadata {
    pub problem: String,
    pub builder_version: String,
    pub n: usize,
    pub k: usize,
    pub cliques: usize,
    pub tokens: usize,
    pub graph_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Thresholds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<std::collections::BTreeMap<String, u64>>,
}

impl BuildMetadata {
    pub(crate) fn new(problem: &str, g: &Graph, k: usize, cliques: usize, tokens: usize) -> Self {
        Self {
            problem: problem.to_owned(),
            builder_version: BUILDER_VERSION.to_owned(),
            n: g.n(),
            k,
            cliques,
            tokens,
            graph_digest: g.digest(),
            schedule: None,
            base: None,
            ell: None,
            thresholds: None,
            weights: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("metadata serializes");
        s.push('\n');
        s
    }
}
