use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot multiply {a_rows}x{a_cols} by {b_rows}x{b_cols}")]
pub struct DimensionMismatch {
    pub a_rows: usize,
    pub a_cols: usize,
    pub b_rows: usize,
    pub b_cols: usize,
}

/// Boolean matrix with rows packed into 64-bit words.
#[derive(Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        Self { rows, cols, stride, words: vec![0; rows * stride] }
    }

    pub fn square(n: usize) -> Self {
        Self::zeros(n, n)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::square(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.words[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.words[i * self.stride + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Copy of the block `rows × cols` starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            let src = r0 + i;
            for j in 0..cols {
                if self.get(src, c0 + j) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// ORs `other` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn or_block(&mut self, r0: usize, c0: usize, other: &BoolMatrix) {
        for i in 0..other.rows {
            for j in 0..other.cols {
                if other.get(i, j) {
                    self.set(r0 + i, c0 + j, true);
                }
            }
        }
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn check(a: &BoolMatrix, b: &BoolMatrix) -> Result<(), DimensionMismatch> {
    if a.cols != b.rows {
        return Err(DimensionMismatch { a_rows: a.rows, a_cols: a.cols, b_rows: b.rows, b_cols: b.cols });
    }
    Ok(())
}

/// Entry-by-entry triple loop.
pub fn bmm_naive(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix, DimensionMismatch> {
    check(a, b)?;
    Ok(BoolMatrix::from_fn(a.rows, b.cols, |i, j| (0..a.cols).any(|k| a.get(i, k) && b.get(k, j))))
}

/// Row `i` of the product is the OR of the rows `k` of `b` with `a[i][k]` set.
pub fn bmm_packed(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix, DimensionMismatch> {
    check(a, b)?;
    let mut c = BoolMatrix::zeros(a.rows, b.cols);
    let stride = c.stride;
    for i in 0..a.rows {
        let out = &mut c.words[i * stride..(i + 1) * stride];
        for (wi, &word) in a.row(i).iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let k = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                for (o, &x) in out.iter_mut().zip(b.row(k)) {
                    *o |= x;
                }
            }
        }
    }
    Ok(c)
}

const GROUP: usize = 8;

/// Four Russians: rows of `b` are combined in groups of eight through a
/// 256-entry table of precomputed unions.
pub fn bmm_four_russians(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix, DimensionMismatch> {
    check(a, b)?;
    let mut c = BoolMatrix::zeros(a.rows, b.cols);
    let stride = c.stride;
    let mut table = vec![0u64; (1 << GROUP) * stride];
    for g0 in (0..a.cols).step_by(GROUP) {
        let width = GROUP.min(a.cols - g0);
        for mask in 1usize..1 << width {
            let low = mask.trailing_zeros() as usize;
            let prev = mask & (mask - 1);
            let (head, tail) = table.split_at_mut(mask * stride);
            let entry = &mut tail[..stride];
            entry.copy_from_slice(&head[prev * stride..(prev + 1) * stride]);
            for (e, &x) in entry.iter_mut().zip(b.row(g0 + low)) {
                *e |= x;
            }
        }
        for i in 0..a.rows {
            let word = a.row(i)[g0 / 64] >> (g0 % 64);
            let mask = (word as usize) & ((1 << width) - 1);
            if mask == 0 {
                continue;
            }
            let src = &table[mask * stride..(mask + 1) * stride];
            for (o, &x) in c.words[i * stride..(i + 1) * stride].iter_mut().zip(src) {
                *o |= x;
            }
        }
    }
    Ok(c)
}

/// Selectable multiplication kernel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Kernel {
    Naive,
    #[default]
    Packed,
    FourRussians,
}

impl Kernel {
    pub const ALL: [Kernel; 3] = [Kernel::Naive, Kernel::Packed, Kernel::FourRussians];

    pub fn multiply(self, a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix, DimensionMismatch> {
        match self {
            Kernel::Naive => bmm_naive(a, b),
            Kernel::Packed => bmm_packed(a, b),
            Kernel::FourRussians => bmm_four_russians(a, b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Naive => "naive",
            Kernel::Packed => "packed",
            Kernel::FourRussians => "four-russians",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_neutral() {
        let m = BoolMatrix::from_fn(5, 5, |i, j| (i * 7 + j * 3) % 4 == 0);
        for k in Kernel::ALL {
            assert_eq!(k.multiply(&BoolMatrix::identity(5), &m).unwrap(), m);
        }
    }

    #[test]
    fn ones_times_ones() {
        let ones = BoolMatrix::from_fn(3, 3, |_, _| true);
        for k in Kernel::ALL {
            assert_eq!(k.multiply(&ones, &ones).unwrap(), ones);
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let a = BoolMatrix::zeros(2, 3);
        let b = BoolMatrix::zeros(2, 2);
        for k in Kernel::ALL {
            assert!(k.multiply(&a, &b).is_err());
        }
    }

    #[test]
    fn blocks() {
        let m = BoolMatrix::from_fn(70, 70, |i, j| i == j + 1);
        let b = m.block(64, 63, 4, 4);
        assert!(b.get(0, 0));
        assert!(b.get(1, 1));
        let mut z = BoolMatrix::square(70);
        z.or_block(64, 63, &b);
        assert!(z.get(64, 63));
        assert_eq!(z.count_ones(), 4);
    }
}
