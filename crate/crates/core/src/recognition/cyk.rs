use crate::grammars::CnfGrammar;
use crate::tokens::TokenSequence;

use super::{Compiled, RecognitionError};

/// Upper-triangular CYK table; each cell is a packed nonterminal set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecognitionTable {
    n: usize,
    words: usize,
    cells: Vec<u64>,
}

impl RecognitionTable {
    fn new(n: usize, words: usize) -> Self {
        Self { n, words, cells: vec![0; n * (n + 1) / 2 * words] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        // row i holds cells (i, i..n) and starts after n + (n-1) + ... + (n-i+1)
        let before = i * (2 * self.n + 1 - i) / 2;
        (before + (j - i)) * self.words
    }

    /// Nonterminal set deriving tokens `i..=j` (0-based, inclusive).
    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> &[u64] {
        let o = self.offset(i, j);
        &self.cells[o..o + self.words]
    }

    #[inline]
    fn cell_mut(&mut self, i: usize, j: usize) -> &mut [u64] {
        let o = self.offset(i, j);
        &mut self.cells[o..o + self.words]
    }

    pub fn contains(&self, i: usize, j: usize, a: u32) -> bool {
        self.cell(i, j)[a as usize / 64] >> (a % 64) & 1 == 1
    }

    /// Members of cell `(i, j)` in increasing index order.
    pub fn members(&self, i: usize, j: usize) -> Vec<u32> {
        super::bits(self.cell(i, j)).collect()
    }
}

pub fn cyk(g: &CnfGrammar, tokens: &TokenSequence) -> Result<bool, RecognitionError> {
    if tokens.is_empty() {
        return Ok(g.start_derives_empty());
    }
    let table = cyk_table(g, tokens)?;
    Ok(table.contains(0, tokens.len() - 1, g.start()))
}

pub fn cyk_table(g: &CnfGrammar, tokens: &TokenSequence) -> Result<RecognitionTable, RecognitionError> {
    let ids = super::token_ids(g, tokens)?;
    let c = Compiled::new(g);
    let n = ids.len();
    let w = c.words;
    let mut table = RecognitionTable::new(n, w);
    // Split points are tested 64 at a time: `ends[B][i]` has bit `k` when
    // B derives `i..=k`, `starts[C][j]` has bit `s - 1` when C derives `s..=j`.
    let wn = n.div_ceil(64);
    let nn = c.nonterminals;
    let mut ends = vec![0u64; nn * n * wn];
    let mut starts = vec![0u64; nn * n * wn];
    let rules: Vec<(u32, u32, u32)> = g.binary_rules().collect();
    let record = |table: &mut RecognitionTable, ends: &mut [u64], starts: &mut [u64], i, j, set: &[u64]| {
        table.cell_mut(i, j).copy_from_slice(set);
        for a in super::bits(set) {
            let a = a as usize;
            ends[(a * n + i) * wn + j / 64] |= 1 << (j % 64);
            if i > 0 {
                starts[(a * n + j) * wn + (i - 1) / 64] |= 1 << ((i - 1) % 64);
            }
        }
    };
    for (i, &t) in ids.iter().enumerate() {
        record(&mut table, &mut ends, &mut starts, i, i, c.terminal_mask(t));
    }
    let mut acc = vec![0u64; w];
    for i in (0..n).rev() {
        for j in i + 1..n {
            acc.iter_mut().for_each(|x| *x = 0);
            let words = i / 64..(j - 1) / 64 + 1;
            for &(a, b, cc) in &rules {
                let (aw, abit) = (a as usize / 64, 1u64 << (a % 64));
                if acc[aw] & abit != 0 {
                    continue;
                }
                let row = &ends[(b as usize * n + i) * wn..][words.clone()];
                let col = &starts[(cc as usize * n + j) * wn..][words.clone()];
                if row.iter().zip(col).any(|(&x, &y)| x & y != 0) {
                    acc[aw] |= abit;
                }
            }
            record(&mut table, &mut ends, &mut starts, i, j, &acc);
        }
    }
    Ok(table)
}
