//! Dyck edit distance in the alignment model: a non-crossing set of index
//! pairs costs one per mismatched pair plus one per unpaired letter.

use thiserror::Error;

mod tiled;

use crate::tokens::{AlphabetError, BracketAlphabet, TokenSequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyckError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("sequence of length {len} exceeds the brute-force cap {cap}")]
    TooLong { len: usize, cap: usize },
    #[error("invalid alignment: {0}")]
    InvalidAlignment(String),
}

/// Non-crossing pairs `(i, j)` with `i < j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alignment {
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlignmentCost {
    pub mismatches: usize,
    pub deletions: usize,
}

impl AlignmentCost {
    pub fn total(self) -> usize {
        self.mismatches + self.deletions
    }
}

impl Alignment {
    /// Checks bounds, disjointness and the non-crossing condition, then
    /// counts mismatched pairs and unpaired letters.
    pub fn cost(&self, s: &TokenSequence, alpha: &BracketAlphabet) -> Result<AlignmentCost, DyckError> {
        let codes = alpha.encode(s)?;
        let n = codes.len();
        let mut used = vec![false; n];
        for &(i, j) in &self.pairs {
            if i >= j || j >= n {
                return Err(DyckError::InvalidAlignment(format!("pair ({i}, {j}) out of order or range")));
            }
            for x in [i, j] {
                if std::mem::replace(&mut used[x], true) {
                    return Err(DyckError::InvalidAlignment(format!("index {x} used twice")));
                }
            }
        }
        for (a, &(i1, j1)) in self.pairs.iter().enumerate() {
            for &(i2, j2) in &self.pairs[a + 1..] {
                let crossing = (i1 < i2 && i2 < j1 && j1 < j2) || (i2 < i1 && i1 < j2 && j2 < j1);
                if crossing {
                    return Err(DyckError::InvalidAlignment(format!(
                        "pairs ({i1}, {j1}) and ({i2}, {j2}) cross"
                    )));
                }
            }
        }
        let mismatches = self.pairs.iter().filter(|&&(i, j)| !is_match(codes[i], codes[j])).count();
        Ok(AlignmentCost { mismatches, deletions: n - 2 * self.pairs.len() })
    }
}

#[inline]
fn is_match(open: u32, close: u32) -> bool {
    open % 2 == 0 && close == open + 1
}

trait Cell: Copy + Ord {
    const ZERO: Self;
    const ONE: Self;
    const MAX: Self;
    fn add(self, other: Self) -> Self;
}

impl Cell for u16 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    const MAX: Self = Self::MAX;
    #[inline(always)]
    fn add(self, other: Self) -> Self {
        self.wrapping_add(other)
    }
}

impl Cell for u32 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    const MAX: Self = Self::MAX;
    #[inline(always)]
    fn add(self, other: Self) -> Self {
        self.wrapping_add(other)
    }
}

/// Table kept twice, row-major and column-major, so that the split
/// minimum runs over two contiguous slices.
struct Tables<T> {
    n: usize,
    row: Vec<T>,
}

impl<T: Cell> Tables<T> {
    fn fill(codes: &[u32]) -> Self {
        let n = codes.len();
        let mut row = vec![T::ZERO; n * n];
        let mut col = vec![T::ZERO; n * n];
        for i in 0..n {
            row[i * n + i] = T::ONE;
            col[i * n + i] = T::ONE;
        }
        for len in 2..=n {
            for i in 0..=n - len {
                let j = i + len - 1;
                let inner = if len == 2 { T::ZERO } else { row[(i + 1) * n + j - 1] };
                let mut best = if is_match(codes[i], codes[j]) { inner } else { inner.add(T::ONE) };
                let left = &row[i * n + i..i * n + j];
                let right = &col[j * n + i + 1..j * n + j + 1];
                let split = left.iter().zip(right).map(|(&a, &b)| a.add(b)).min();
                if let Some(s) = split {
                    best = best.min(s);
                }
                row[i * n + j] = best;
                col[j * n + i] = best;
            }
        }
        Self { n, row }
    }

    fn get(&self, i: usize, j: usize) -> T {
        if j < i {
            T::ZERO
        } else {
            self.row[i * self.n + j]
        }
    }
}

/// Bytes of table memory the DP needs for a sequence of length `n`.
pub fn dyck_table_bytes(n: usize) -> usize {
    let cell = if n < 1 << 15 { 2 } else { 4 };
    2 * n * n * cell
}

pub fn dyck_distance(s: &TokenSequence, alpha: &BracketAlphabet) -> Result<u64, DyckError> {
    let codes = alpha.encode(s)?;
    Ok(distance_codes(&codes))
}

fn distance_codes(codes: &[u32]) -> u64 {
    let n = codes.len();
    if n == 0 {
        return 0;
    }
    if n < 1 << 15 {
        u64::from(tiled::distance::<u16>(codes))
    } else {
        u64::from(tiled::distance::<u32>(codes))
    }
}

/// Optimal alignment together with its cost.
pub fn dyck_alignment(s: &TokenSequence, alpha: &BracketAlphabet) -> Result<(u64, Alignment), DyckError> {
    let codes = alpha.encode(s)?;
    let n = codes.len();
    if n == 0 {
        return Ok((0, Alignment::default()));
    }
    let t = Tables::<u32>::fill(&codes);
    let mut pairs = Vec::new();
    let mut stack = vec![(0usize, n - 1)];
    while let Some((i, j)) = stack.pop() {
        if j < i || i == j {
            continue;
        }
        let best = t.get(i, j);
        let inner = if j == i + 1 { 0 } else { t.get(i + 1, j - 1) };
        let pair_cost = inner + u32::from(!is_match(codes[i], codes[j]));
        if pair_cost == best {
            pairs.push((i, j));
            stack.push((i + 1, j - 1));
            continue;
        }
        let k = (i..j).find(|&k| t.get(i, k) + t.get(k + 1, j) == best).expect("split witness");
        stack.push((i, k));
        stack.push((k + 1, j));
    }
    pairs.sort_unstable();
    Ok((t.get(0, n - 1) as u64, Alignment { pairs }))
}

pub const BRUTEFORCE_CAP: usize = 12;

/// Exhaustive search: the first letter is deleted or aligned with each
/// later letter in turn.
pub fn dyck_bruteforce(s: &TokenSequence) -> Result<u64, DyckError> {
    if s.len() > BRUTEFORCE_CAP {
        return Err(DyckError::TooLong { len: s.len(), cap: BRUTEFORCE_CAP });
    }
    let alpha = BracketAlphabet::infer(s);
    let codes = alpha.encode(s)?;
    fn go(c: &[u32]) -> u64 {
        let Some((&first, rest)) = c.split_first() else {
            return 0;
        };
        let mut best = 1 + go(rest);
        for (k, &x) in rest.iter().enumerate() {
            let pair = u64::from(!is_match(first, x));
            best = best.min(pair + go(&rest[..k]) + go(&rest[k + 1..]));
        }
        best
    }
    Ok(go(&codes))
}
