//! Divide-and-conquer recognition in the formulation where the table is
//! indexed by fenceposts `0..=n` and `T[i][j]` holds the nonterminals
//! deriving tokens `i..j`. The sub-table for a pair of blocks is completed
//! recursively, with the contributions of split points inside the blocks
//! supplied by matrix products, one per binary rule.

use crate::grammars::CnfGrammar;
use crate::tokens::TokenSequence;

use super::{BoolMatrix, Compiled, Kernel, RecognitionError};

/// Blocks with at most this many rows are filled cell by cell.
pub const DEFAULT_CUTOFF: usize = 32;

pub fn valiant_recognize(
    g: &CnfGrammar,
    tokens: &TokenSequence,
    kernel: Kernel,
) -> Result<bool, RecognitionError> {
    valiant_recognize_with_cutoff(g, tokens, kernel, DEFAULT_CUTOFF)
}

/// As [`valiant_recognize`]; `cutoff = 1` runs the recursion all the way
/// down to single cells.
pub fn valiant_recognize_with_cutoff(
    g: &CnfGrammar,
    tokens: &TokenSequence,
    kernel: Kernel,
    cutoff: usize,
) -> Result<bool, RecognitionError> {
    let ids = super::token_ids(g, tokens)?;
    if ids.is_empty() {
        return Ok(g.start_derives_empty());
    }
    let compiled = Compiled::new(g);
    let size = (ids.len() + 1).next_power_of_two();
    let mut state = State::new(&compiled, g, kernel, cutoff.max(1), size);
    for (i, &t) in ids.iter().enumerate() {
        let set = compiled.terminal_mask(t).to_vec();
        state.store(i, i + 1, &set);
    }
    state.compute(0, size)?;
    let s = g.start() as usize;
    Ok(state.cell(0, ids.len())[s / 64] >> (s % 64) & 1 == 1)
}

struct State<'a> {
    c: &'a Compiled,
    rules: Vec<(u32, u32, u32)>,
    heads: Vec<u32>,
    kernel: Kernel,
    cutoff: usize,
    size: usize,
    t: Vec<BoolMatrix>,
    p: Vec<BoolMatrix>,
    cells: Vec<u64>,
}

impl<'a> State<'a> {
    fn new(c: &'a Compiled, g: &CnfGrammar, kernel: Kernel, cutoff: usize, size: usize) -> Self {
        let rules: Vec<_> = g.binary_rules().collect();
        let mut heads: Vec<u32> = rules.iter().map(|r| r.0).collect();
        heads.sort_unstable();
        heads.dedup();
        let nn = c.nonterminals;
        Self {
            c,
            rules,
            heads,
            kernel,
            cutoff,
            size,
            t: vec![BoolMatrix::square(size); nn],
            p: vec![BoolMatrix::square(size); nn],
            cells: vec![0; size * size * c.words],
        }
    }

    fn cell(&self, i: usize, j: usize) -> &[u64] {
        let o = (i * self.size + j) * self.c.words;
        &self.cells[o..o + self.c.words]
    }

    fn store(&mut self, i: usize, j: usize, set: &[u64]) {
        let o = (i * self.size + j) * self.c.words;
        self.cells[o..o + self.c.words].copy_from_slice(set);
        for a in super::bits(set) {
            self.t[a as usize].set(i, j, true);
        }
    }

    fn compute(&mut self, l: usize, m: usize) -> Result<(), RecognitionError> {
        let mid = (l + m) / 2;
        if m - l >= 4 {
            self.compute(l, mid)?;
            self.compute(mid, m)?;
        }
        self.complete(l, mid, mid, m)
    }

    /// Completes rows `l..m` × columns `l2..m2`, given every split point
    /// in `m..l2` already accounted for in `p`.
    fn complete(&mut self, l: usize, m: usize, l2: usize, m2: usize) -> Result<(), RecognitionError> {
        let s = m - l;
        if s <= self.cutoff {
            self.fill_directly(l, m, l2, m2);
            return Ok(());
        }
        let h = s / 2;
        let (b, c) = (l, l + h);
        let (d, e) = (l2, l2 + h);
        self.complete(c, m, d, e)?;
        self.multiply(b, c, d, h)?;
        self.complete(b, c, d, e)?;
        self.multiply(c, d, e, h)?;
        self.complete(c, m, e, m2)?;
        self.multiply(b, c, e, h)?;
        self.multiply(b, d, e, h)?;
        self.complete(b, c, e, m2)
    }

    /// `P[rows, cols] |= T[rows, mid] × T[mid, cols]` for every rule.
    fn multiply(&mut self, rows: usize, mid: usize, cols: usize, h: usize) -> Result<(), RecognitionError> {
        let nn = self.c.nonterminals;
        let mut left: Vec<Option<BoolMatrix>> = vec![None; nn];
        let mut right: Vec<Option<BoolMatrix>> = vec![None; nn];
        for i in 0..self.rules.len() {
            let (a, b, c) = self.rules[i];
            let x = left[b as usize].get_or_insert_with(|| self.t[b as usize].block(rows, mid, h, h));
            if x.is_zero() {
                continue;
            }
            let y = right[c as usize].get_or_insert_with(|| self.t[c as usize].block(mid, cols, h, h));
            if y.is_zero() {
                continue;
            }
            let prod = self.kernel.multiply(x, y)?;
            self.p[a as usize].or_block(rows, cols, &prod);
        }
        Ok(())
    }

    fn fill_directly(&mut self, l: usize, m: usize, l2: usize, m2: usize) {
        let w = self.c.words;
        let mut acc = vec![0u64; w];
        for i in (l..m).rev() {
            for j in l2..m2 {
                if j == i + 1 {
                    continue;
                }
                acc.iter_mut().for_each(|x| *x = 0);
                for &a in &self.heads {
                    if self.p[a as usize].get(i, j) {
                        acc[a as usize / 64] |= 1 << (a % 64);
                    }
                }
                for k in (i + 1..m).chain(l2..j) {
                    let left = self.cell(i, k);
                    let right = self.cell(k, j);
                    for b in super::bits(left) {
                        if !self.c.intersects(right, self.c.right_mask(b)) {
                            continue;
                        }
                        for &(cc, a) in &self.c.by_left[b as usize] {
                            if right[cc as usize / 64] >> (cc % 64) & 1 == 1 {
                                acc[a as usize / 64] |= 1 << (a % 64);
                            }
                        }
                    }
                }
                if acc.iter().any(|&x| x != 0) {
                    let set = acc.clone();
                    self.store(i, j, &set);
                }
            }
        }
    }
}
