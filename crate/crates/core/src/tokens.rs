//! Token sequences and paired alphabets shared by the solvers and builders.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A whitespace-separated stream of token names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self(tokens.into_iter().map(Into::into).collect())
    }

    /// Splits `text` on ASCII whitespace. Never fails.
    pub fn parse(text: &str) -> Self {
        Self(text.split_whitespace().map(str::to_owned).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn push(&mut self, token: impl Into<String>) {
        self.0.push(token.into());
    }

    pub fn extend_from(&mut self, other: &TokenSequence) {
        self.0.extend(other.0.iter().cloned());
    }

    /// Appends `count` copies of `token`.
    pub fn push_repeated(&mut self, token: &str, count: usize) {
        self.0.extend(std::iter::repeat(token.to_owned()).take(count));
    }

    pub fn into_vec(self) -> Vec<String> {
        self.0
    }

    /// File form: tokens joined by single spaces, newline-terminated.
    pub fn to_text(&self) -> String {
        let mut out = self.0.join(" ");
        out.push('\n');
        out
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

impl FromStr for TokenSequence {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self::parse(s))
    }
}

impl FromIterator<String> for TokenSequence {
    fn from_iter<T: IntoIterator<Item = String>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TokenSequence {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("unknown token `{token}` at position {position}")]
    UnknownToken { position: usize, token: String },
    #[error("token `{0}` is declared twice")]
    Duplicate(String),
}

/// An alphabet of letters that come in opening/closing pairs.
///
/// For RNA folding a pair is a letter and its complement; for Dyck
/// distance it is an opening and the matching closing bracket. Letters
/// are encoded as `2 * pair + side` with side 0 for the opening token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedAlphabet {
    pairs: Vec<(String, String)>,
    index: HashMap<String, u32>,
}

pub type MatchedAlphabet = PairedAlphabet;
pub type BracketAlphabet = PairedAlphabet;

const ASCII_BRACKETS: [(&str, &str); 4] = [("(", ")"), ("[", "]"), ("{", "}"), ("<", ">")];

impl PairedAlphabet {
    pub fn from_pairs<I, A, B>(pairs: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut alphabet = Self { pairs: Vec::new(), index: HashMap::new() };
        for (open, close) in pairs {
            alphabet.insert(open.into(), close.into())?;
        }
        Ok(alphabet)
    }

    /// Pairs every base letter `σ` with its primed copy `σ'`.
    pub fn primed<I, S>(bases: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_pairs(bases.into_iter().map(|b| {
            let b = b.into();
            let p = format!("{b}'");
            (b, p)
        }))
    }

    /// Builds the alphabet from the tokens that actually occur.
    ///
    /// ASCII brackets pair up as usual; any other token `σ'` closes `σ`.
    pub fn infer(seq: &TokenSequence) -> Self {
        let mut alphabet = Self { pairs: Vec::new(), index: HashMap::new() };
        for token in seq {
            if alphabet.index.contains_key(token) {
                continue;
            }
            let pair = ASCII_BRACKETS
                .iter()
                .find(|(o, c)| o == token || c == token)
                .map(|(o, c)| (o.to_string(), c.to_string()))
                .unwrap_or_else(|| {
                    let base = token.strip_suffix('\'').unwrap_or(token).to_owned();
                    let primed = format!("{base}'");
                    (base, primed)
                });
            // Cannot collide: neither side is present yet.
            let _ = alphabet.insert(pair.0, pair.1);
        }
        alphabet
    }

    fn insert(&mut self, open: String, close: String) -> Result<(), AlphabetError> {
        for t in [&open, &close] {
            if self.index.contains_key(t) {
                return Err(AlphabetError::Duplicate(t.clone()));
            }
        }
        if open == close {
            return Err(AlphabetError::Duplicate(open));
        }
        let id = self.pairs.len() as u32;
        self.index.insert(open.clone(), 2 * id);
        self.index.insert(close.clone(), 2 * id + 1);
        self.pairs.push((open, close));
        Ok(())
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn code(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, code: u32) -> &str {
        let (o, c) = &self.pairs[(code / 2) as usize];
        if code % 2 == 0 {
            o
        } else {
            c
        }
    }

    pub fn encode(&self, seq: &TokenSequence) -> Result<Vec<u32>, AlphabetError> {
        seq.iter()
            .enumerate()
            .map(|(position, t)| {
                self.code(t)
                    .ok_or_else(|| AlphabetError::UnknownToken { position, token: t.clone() })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let s = TokenSequence::parse("  a  b'\n\tc ");
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_string(), "a b' c");
        assert_eq!(TokenSequence::parse(&s.to_text()), s);
    }

    #[test]
    fn infer_pairs_primes_and_brackets() {
        let a = PairedAlphabet::infer(&TokenSequence::parse("( x' ] x"));
        assert_eq!(a.code("("), Some(0));
        assert_eq!(a.code(")"), Some(1));
        assert_eq!(a.code("x"), Some(2));
        assert_eq!(a.code("x'"), Some(3));
        assert_eq!(a.code("["), Some(4));
        assert_eq!(a.token(5), "]");
    }

    #[test]
    fn encode_reports_position() {
        let a = PairedAlphabet::primed(["a"]).unwrap();
        let err = a.encode(&TokenSequence::parse("a a' b")).unwrap_err();
        assert_eq!(err, AlphabetError::UnknownToken { position: 2, token: "b".into() });
    }

    #[test]
    fn duplicate_pairs_rejected() {
        assert!(PairedAlphabet::from_pairs([("a", "b"), ("b", "c")]).is_err());
        assert!(PairedAlphabet::from_pairs([("a", "a")]).is_err());
    }
}
