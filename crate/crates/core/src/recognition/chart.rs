//! Row-oriented chart recognizer.
//!
//! Start positions are processed from right to left. For each start `i`
//! and nonterminal `A` the chart keeps the set of end positions `j` with
//! `A ⇒* tokens[i..=j]` as a windowed bitset. A new item `(B, e)` at start
//! `i` is combined with every rule `A -> B C` by OR-ing the finished row of
//! `C` at start `e + 1` into the row of `A` at `i`. Cost is proportional to
//! the number of chart items times the row width in words, which stays
//! small when most rows are sparse.

use crate::grammars::CnfGrammar;
use crate::tokens::TokenSequence;

use super::{Compiled, RecognitionError};

#[derive(Clone, Default)]
struct Row {
    lo: usize,
    words: Vec<u64>,
}

impl Row {
    fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    fn cover(&mut self, lo: usize, hi: usize) {
        if self.words.is_empty() {
            self.lo = lo;
            self.words = vec![0; hi - lo];
            return;
        }
        if lo < self.lo {
            self.words.splice(0..0, std::iter::repeat(0).take(self.lo - lo));
            self.lo = lo;
        }
        let end = self.lo + self.words.len();
        if hi > end {
            self.words.resize(hi - self.lo, 0);
        }
    }

    fn insert(&mut self, bit: usize) -> bool {
        let w = bit / 64;
        self.cover(w, w + 1);
        let word = &mut self.words[w - self.lo];
        let fresh = *word >> (bit % 64) & 1 == 0;
        *word |= 1 << (bit % 64);
        fresh
    }

    /// ORs `src` in and reports each newly set bit.
    fn merge(&mut self, src: &Row, mut fresh: impl FnMut(usize)) {
        self.cover(src.lo, src.lo + src.words.len());
        let offset = src.lo - self.lo;
        for (k, (&s, d)) in src.words.iter().zip(&mut self.words[offset..]).enumerate() {
            let mut new = s & !*d;
            *d |= s;
            while new != 0 {
                fresh((src.lo + k) * 64 + new.trailing_zeros() as usize);
                new &= new - 1;
            }
        }
    }

    fn contains(&self, bit: usize) -> bool {
        let w = bit / 64;
        w >= self.lo && w < self.lo + self.words.len() && self.words[w - self.lo] >> (bit % 64) & 1 == 1
    }
}

pub fn chart_recognize(g: &CnfGrammar, tokens: &TokenSequence) -> Result<bool, RecognitionError> {
    let ids = super::token_ids(g, tokens)?;
    let n = ids.len();
    if n == 0 {
        return Ok(g.start_derives_empty());
    }
    let c = Compiled::new(g);
    let nn = c.nonterminals;
    let mut rows: Vec<Row> = vec![Row::default(); n * nn];
    let mut queue: Vec<(u32, usize)> = Vec::new();
    for i in (0..n).rev() {
        let (here, later) = rows.split_at_mut((i + 1) * nn);
        let here = &mut here[i * nn..];
        for a in super::bits(c.terminal_mask(ids[i])) {
            if here[a as usize].insert(i) {
                queue.push((a, i));
            }
        }
        while let Some((b, e)) = queue.pop() {
            if e + 1 >= n {
                continue;
            }
            let base = (e - i) * nn;
            for &(cc, a) in &c.by_left[b as usize] {
                let src = &later[base + cc as usize];
                if src.is_empty() {
                    continue;
                }
                here[a as usize].merge(src, |j| queue.push((a, j)));
            }
        }
    }
    Ok(rows[g.start() as usize].contains(n - 1))
}
