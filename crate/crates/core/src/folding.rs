//! RNA folding: maximum non-crossing matchings over a paired alphabet.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tokens::{AlphabetError, MatchedAlphabet, TokenSequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoldError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("no weight for letter `{0}`")]
    MissingWeight(String),
    #[error("weight of `{0}` must be positive")]
    ZeroWeight(String),
    #[error("sequence of length {len} exceeds the brute-force cap {cap}")]
    TooLong { len: usize, cap: usize },
    #[error("primed letter `{0}` in an LCS input")]
    PrimedInput(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldResult {
    pub score: u64,
    /// Matched index pairs, when reconstruction was requested.
    pub pairs: Option<Vec<(usize, usize)>>,
}

/// Token sequence with a positive weight per base letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSequence {
    pub tokens: TokenSequence,
    pub alphabet: MatchedAlphabet,
    /// Weight per pair index of `alphabet`.
    weights: Vec<u64>,
}

impl WeightedSequence {
    /// `weights` is keyed by base (opening) letters. Every letter of the
    /// alphabet needs a positive weight.
    pub fn new(
        tokens: TokenSequence,
        alphabet: MatchedAlphabet,
        weights: &BTreeMap<String, u64>,
    ) -> Result<Self, FoldError> {
        alphabet.encode(&tokens)?;
        let mut w = Vec::with_capacity(alphabet.pair_count());
        for (base, _) in alphabet.pairs() {
            match weights.get(base) {
                None => return Err(FoldError::MissingWeight(base.clone())),
                Some(0) => return Err(FoldError::ZeroWeight(base.clone())),
                Some(&x) => w.push(x),
            }
        }
        Ok(Self { tokens, alphabet, weights: w })
    }

    /// Uses the alphabet inferred from the tokens.
    pub fn inferred(tokens: TokenSequence, weights: &BTreeMap<String, u64>) -> Result<Self, FoldError> {
        let alphabet = MatchedAlphabet::infer(&tokens);
        Self::new(tokens, alphabet, weights)
    }

    pub fn weight_of(&self, token: &str) -> Option<u64> {
        self.alphabet.code(token).map(|c| self.weights[(c / 2) as usize])
    }

    pub fn weights(&self) -> BTreeMap<String, u64> {
        self.alphabet.pairs().iter().map(|(b, _)| b.clone()).zip(self.weights.iter().copied()).collect()
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// Sum of the weights of all tokens.
    pub fn total_weight(&self) -> u64 {
        self.tokens.iter().map(|t| self.weight_of(t).unwrap_or(0)).sum()
    }

    /// Sidecar text: one `letter weight` line per base letter.
    pub fn weights_text(&self) -> String {
        self.weights().iter().map(|(b, w)| format!("{b} {w}\n")).collect()
    }
}

/// Parses `letter weight` lines; blank lines and `//` comments are skipped.
pub fn parse_weights(text: &str) -> Result<BTreeMap<String, u64>, FoldError> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let err = |message: String| FoldError::Parse { line: idx + 1, message };
        let mut parts = line.split_whitespace();
        let (Some(letter), Some(w), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(format!("expected `letter weight`, found `{line}`")));
        };
        let w: u64 = w.parse().map_err(|_| err(format!("bad weight `{w}`")))?;
        if out.insert(letter.to_owned(), w).is_some() {
            return Err(err(format!("letter `{letter}` listed twice")));
        }
    }
    Ok(out)
}

pub fn rna_fold(s: &TokenSequence, alpha: &MatchedAlphabet) -> Result<FoldResult, FoldError> {
    let codes = alpha.encode(s)?;
    let ones = vec![1u64; alpha.pair_count()];
    Ok(FoldResult { score: fold_codes(&codes, &ones), pairs: None })
}

pub fn wrna_fold(ws: &WeightedSequence) -> Result<FoldResult, FoldError> {
    let codes = ws.alphabet.encode(&ws.tokens)?;
    Ok(FoldResult { score: fold_codes(&codes, &ws.weights), pairs: None })
}

/// Like [`wrna_fold`] but also returns one optimal pair set.
pub fn wrna_fold_with_pairs(ws: &WeightedSequence) -> Result<FoldResult, FoldError> {
    let codes = ws.alphabet.encode(&ws.tokens)?;
    let n = codes.len();
    let table = fold_table(&codes, &ws.weights);
    let mut pairs = Vec::new();
    let mut stack = vec![(0usize, n)];
    // (i, j) denotes the half-open interval i..j
    while let Some((i, j)) = stack.pop() {
        if j <= i + 1 {
            continue;
        }
        let best = table.get_open(i, j);
        if best == table.get_open(i, j - 1) {
            stack.push((i, j - 1));
            continue;
        }
        let last = codes[j - 1];
        let gain = ws.weights[(last / 2) as usize];
        let k = (i..j - 1)
            .find(|&k| {
                codes[k] ^ last == 1
                    && table.get_open(i, k) + table.get_open(k + 1, j - 1) + gain == best
            })
            .expect("DP value has a witness");
        pairs.push((k, j - 1));
        stack.push((i, k));
        stack.push((k + 1, j - 1));
    }
    pairs.sort_unstable();
    Ok(FoldResult { score: table.get_open(0, n), pairs: Some(pairs) })
}

/// Square table over closed intervals; `get(i, j)` is the optimum of
/// `codes[i..=j]` and reads 0 for empty intervals.
struct FoldTable {
    n: usize,
    v: Vec<u64>,
}

impl FoldTable {
    #[inline]
    fn get(&self, i: usize, j: usize) -> u64 {
        if self.n == 0 || j < i {
            0
        } else {
            self.v[i * self.n + j]
        }
    }

    /// Optimum of the half-open interval `i..j`.
    #[inline]
    fn get_open(&self, i: usize, j: usize) -> u64 {
        if j <= i {
            0
        } else {
            self.get(i, j - 1)
        }
    }
}

fn fold_table(codes: &[u32], weights: &[u64]) -> FoldTable {
    let n = codes.len();
    let mut v = vec![0u64; n * n];
    // by_code[c]: positions seen so far holding letter c
    let mut by_code: Vec<Vec<usize>> = vec![Vec::new(); 2 * weights.len()];
    for j in 0..n {
        let partner = codes[j] ^ 1;
        let candidates = &by_code[partner as usize];
        let gain = weights[(codes[j] / 2) as usize];
        for i in (0..=j).rev() {
            let mut best = if j > i { v[i * n + j - 1] } else { 0 };
            let start = candidates.partition_point(|&k| k < i);
            for &k in &candidates[start..] {
                let left = if k > i { v[i * n + k - 1] } else { 0 };
                let inner = if k + 1 < j { v[(k + 1) * n + j - 1] } else { 0 };
                best = best.max(left + inner + gain);
            }
            v[i * n + j] = best;
        }
        by_code[codes[j] as usize].push(j);
    }
    FoldTable { n, v }
}

fn fold_codes(codes: &[u32], weights: &[u64]) -> u64 {
    if codes.is_empty() {
        return 0;
    }
    fold_table(codes, weights).get(0, codes.len() - 1)
}

/// Repeats every token `w(token)` times.
pub fn expand_weighted(ws: &WeightedSequence) -> TokenSequence {
    let mut out = TokenSequence::new();
    for t in &ws.tokens {
        let w = ws.weight_of(t).expect("tokens are validated at construction");
        out.push_repeated(t, w as usize);
    }
    out
}

pub const BRUTEFORCE_CAP: usize = 16;

/// Exhaustive search: the first letter is either left unpaired or paired
/// with each compatible later letter in turn.
pub fn rna_bruteforce(s: &TokenSequence) -> Result<u64, FoldError> {
    if s.len() > BRUTEFORCE_CAP {
        return Err(FoldError::TooLong { len: s.len(), cap: BRUTEFORCE_CAP });
    }
    let alpha = MatchedAlphabet::infer(s);
    let codes = alpha.encode(s)?;
    fn go(c: &[u32]) -> u64 {
        let Some((&first, rest)) = c.split_first() else {
            return 0;
        };
        let mut best = go(rest);
        for (k, &x) in rest.iter().enumerate() {
            if x ^ first == 1 {
                best = best.max(1 + go(&rest[..k]) + go(&rest[k + 1..]));
            }
        }
        best
    }
    Ok(go(&codes))
}

/// LCS of `x` and `y` read off the folding of `x ∘ ŷ`, where ŷ is `y`
/// reversed with every letter primed.
pub fn lcs_via_rna(x: &TokenSequence, y: &TokenSequence) -> Result<u64, FoldError> {
    if let Some(t) = x.iter().chain(y).find(|t| t.ends_with('\'')) {
        return Err(FoldError::PrimedInput(t.clone()));
    }
    let mut joined = x.clone();
    for t in y.iter().rev() {
        joined.push(format!("{t}'"));
    }
    let alpha = MatchedAlphabet::infer(&joined);
    Ok(rna_fold(&joined, &alpha)?.score)
}
