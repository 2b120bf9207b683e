//! CFG recognizers over CNF grammars: CYK, a Valiant-style recognizer driven
//! by boolean matrix multiplication, and a row-oriented chart recognizer
//! for long inputs.

mod bmm;
mod chart;
mod cyk;
mod valiant;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::grammars::CnfGrammar;
use crate::tokens::TokenSequence;

pub use bmm::{bmm_four_russians, bmm_naive, bmm_packed, BoolMatrix, DimensionMismatch, Kernel};
pub use chart::chart_recognize;
pub use cyk::{cyk, cyk_table, RecognitionTable};
pub use valiant::{valiant_recognize, valiant_recognize_with_cutoff, DEFAULT_CUTOFF};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognitionError {
    #[error("unknown token `{token}` at position {position}")]
    UnknownToken { position: usize, token: String },
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
}

/// Which recognizer to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Recognizer {
    Cyk,
    Valiant(Kernel),
    #[default]
    Chart,
}

impl Recognizer {
    pub fn recognize(self, g: &CnfGrammar, tokens: &TokenSequence) -> Result<bool, RecognitionError> {
        match self {
            Recognizer::Cyk => cyk(g, tokens),
            Recognizer::Valiant(k) => valiant_recognize(g, tokens, k),
            Recognizer::Chart => chart_recognize(g, tokens),
        }
    }

    pub fn name(self) -> String {
        match self {
            Recognizer::Cyk => "cyk".into(),
            Recognizer::Valiant(k) => format!("valiant-{}", k.name()),
            Recognizer::Chart => "chart".into(),
        }
    }
}

impl std::str::FromStr for Recognizer {
    type Err = String;

    /// Accepts `cyk`, `chart` and `valiant-<kernel>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cyk" => Ok(Recognizer::Cyk),
            "chart" => Ok(Recognizer::Chart),
            other => other
                .strip_prefix("valiant-")
                .and_then(|k| Kernel::ALL.into_iter().find(|kernel| kernel.name() == k))
                .map(Recognizer::Valiant)
                .ok_or_else(|| format!("unknown recognizer `{s}`")),
        }
    }
}

impl Serialize for Recognizer {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Recognizer {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn token_ids(g: &CnfGrammar, tokens: &TokenSequence) -> Result<Vec<u32>, RecognitionError> {
    tokens
        .iter()
        .enumerate()
        .map(|(position, t)| {
            g.terminal_id(t)
                .ok_or_else(|| RecognitionError::UnknownToken { position, token: t.clone() })
        })
        .collect()
}

/// Indices of the set bits of a packed word slice.
pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = u32> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            Some(wi as u32 * 64 + b)
        })
    })
}

/// Rule tables indexed for the recognizers.
pub(crate) struct Compiled {
    pub words: usize,
    pub nonterminals: usize,
    /// `by_left[B]` lists `(C, A)` for every rule `A -> B C`.
    pub by_left: Vec<Vec<(u32, u32)>>,
    /// Packed union of right symbols per left symbol.
    right: Vec<u64>,
    /// Packed `{A : A -> σ}` per terminal.
    terminal: Vec<u64>,
}

impl Compiled {
    pub fn new(g: &CnfGrammar) -> Self {
        let nn = g.nonterminals().len();
        let words = nn.div_ceil(64).max(1);
        let mut by_left = vec![Vec::new(); nn];
        let mut right = vec![0u64; nn * words];
        for (a, b, c) in g.binary_rules() {
            by_left[b as usize].push((c, a));
            right[b as usize * words + c as usize / 64] |= 1 << (c % 64);
        }
        let mut terminal = vec![0u64; g.terminals().len() * words];
        for (a, t) in g.terminal_rules() {
            terminal[t as usize * words + a as usize / 64] |= 1 << (a % 64);
        }
        Self { words, nonterminals: nn, by_left, right, terminal }
    }

    #[inline]
    pub fn right_mask(&self, b: u32) -> &[u64] {
        &self.right[b as usize * self.words..(b as usize + 1) * self.words]
    }

    #[inline]
    pub fn terminal_mask(&self, t: u32) -> &[u64] {
        &self.terminal[t as usize * self.words..(t as usize + 1) * self.words]
    }

    #[inline]
    pub fn intersects(&self, x: &[u64], y: &[u64]) -> bool {
        x.iter().zip(y).any(|(a, b)| a & b != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammars::{to_cnf, Grammar};

    fn parens() -> CnfGrammar {
        to_cnf(&Grammar::parse("start: S\nS -> ( S ) S\nS -> eps\n").unwrap())
    }

    #[test]
    fn balanced_parens() {
        let g = parens();
        for r in [Recognizer::Cyk, Recognizer::Chart, Recognizer::Valiant(Kernel::Packed)] {
            assert!(r.recognize(&g, &TokenSequence::parse("( )")).unwrap());
            assert!(!r.recognize(&g, &TokenSequence::parse(") (")).unwrap());
            assert!(r.recognize(&g, &TokenSequence::parse("( ( ) ) ( )")).unwrap());
            assert!(r.recognize(&g, &TokenSequence::new()).unwrap());
        }
    }

    #[test]
    fn unknown_token_position() {
        let g = parens();
        for r in [Recognizer::Cyk, Recognizer::Chart, Recognizer::Valiant(Kernel::Naive)] {
            let e = r.recognize(&g, &TokenSequence::parse("( x )")).unwrap_err();
            assert_eq!(e, RecognitionError::UnknownToken { position: 1, token: "x".into() });
        }
    }

    #[test]
    fn table_cells() {
        let g = parens();
        let t = cyk_table(&g, &TokenSequence::parse("( ) ( )")).unwrap();
        assert!(t.contains(0, 3, g.start()));
        assert!(t.contains(0, 1, g.start()));
        assert!(!t.contains(1, 2, g.start()));
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn bit_iteration() {
        let v: Vec<u32> = bits(&[0b1010, 1 << 63 | 1]).collect();
        assert_eq!(v, vec![1, 3, 64, 127]);
    }
}
