//! Cache-blocked fill of the interval table over fenceposts.
//!
//! `F(i, e)` is the cost of the substring `[i, e)`. Tiles of `B × B`
//! fenceposts are filled in order of block distance. Splits inside the
//! blocks strictly between the tile's row and column blocks form a
//! min-plus product; the remaining splits and the pair term are pushed
//! row by row inside the tile.

use super::{is_match, Cell};

const B: usize = 128;

#[inline(always)]
fn relax<T: Cell>(acc: &mut [T], x: T, src: &[T]) {
    if let (Ok(acc), Ok(src)) = (<&mut [T; B]>::try_from(&mut *acc), <&[T; B]>::try_from(src)) {
        for (a, &b) in acc.iter_mut().zip(src) {
            *a = (*a).min(x.add(b));
        }
        return;
    }
    for (a, &b) in acc.iter_mut().zip(src) {
        *a = (*a).min(x.add(b));
    }
}

#[inline(always)]
fn fill<T: Cell>(codes: &[u32]) -> T {
    let n = codes.len();
    let m = n + 1;
    let mut f = vec![T::MAX; m * m];
    for i in 0..m {
        f[i * m + i] = T::ZERO;
    }
    let blocks = m.div_ceil(B);
    let range = |b: usize| b * B..((b + 1) * B).min(m);
    for d in 0..blocks {
        for bi in 0..blocks - d {
            let bj = bi + d;
            let (rows, cols) = (range(bi), range(bj));
            if d > 1 {
                for bk in bi + 1..bj {
                    for i in rows.clone() {
                        let (head, tail) = f.split_at_mut((i + 1) * m);
                        let row = &mut head[i * m..(i + 1) * m];
                        let mut acc = [T::MAX; B];
                        let acc = &mut acc[..cols.len()];
                        acc.copy_from_slice(&row[cols.clone()]);
                        for s in range(bk) {
                            let src = &tail[(s - i - 1) * m..];
                            relax(acc, row[s], &src[cols.clone()]);
                        }
                        row[cols.clone()].copy_from_slice(acc);
                    }
                }
            }
            for i in rows.clone().rev() {
                let (head, tail) = f.split_at_mut((i + 1) * m);
                let row = &mut head[i * m..];
                let below = |s: usize| &tail[(s - i - 1) * m..(s - i) * m];
                let lo = cols.start.max(i + 1);
                if lo >= cols.end {
                    continue;
                }
                if d > 0 {
                    for s in i + 1..rows.end {
                        let x = row[s];
                        let (acc, src) = (&mut row[lo..cols.end], &below(s)[lo..cols.end]);
                        relax(acc, x, src);
                    }
                }
                // pair term, then push each finished cell as a split point
                for e in lo..cols.end {
                    let v = if e == i + 1 {
                        T::ONE
                    } else {
                        let inner = below(i + 1)[e - 1];
                        let pair = if is_match(codes[i], codes[e - 1]) { inner } else { inner.add(T::ONE) };
                        row[e].min(pair)
                    };
                    row[e] = v;
                    if e > i && e + 1 < cols.end {
                        let (acc, src) = (&mut row[e + 1..cols.end], &below(e)[e + 1..cols.end]);
                        relax(acc, v, src);
                    }
                }
            }
        }
    }
    f[n]
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f,avx512bw,avx2")]
unsafe fn fill_avx512<T: Cell>(codes: &[u32]) -> T {
    fill::<T>(codes)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn fill_avx2<T: Cell>(codes: &[u32]) -> T {
    fill::<T>(codes)
}

/// Cost of the whole sequence.
pub(super) fn distance<T: Cell>(codes: &[u32]) -> T {
    if codes.is_empty() {
        return T::ZERO;
    }
    #[cfg(target_arch = "x86_64")]
    {
        if is_x86_feature_detected!("avx512bw") {
            // SAFETY: the features were detected at runtime.
            return unsafe { fill_avx512::<T>(codes) };
        }
        if is_x86_feature_detected!("avx2") {
            // SAFETY: as above.
            return unsafe { fill_avx2::<T>(codes) };
        }
    }
    fill::<T>(codes)
}
