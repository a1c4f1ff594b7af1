//! Row-major matrices over `F_q` and reduced row echelon form.

use super::field::FieldDesc;
use super::{GfqError, MAX_AMBIENT};

/// Dense row-major matrix with entries encoded as field-element indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from entry rows. All rows must share one length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, entries: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Stacks `self` on top of `other`.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch");
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        entries.extend_from_slice(&self.entries);
        entries.extend_from_slice(&other.entries);
        Matrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    fn validate(&self, f: &FieldDesc) -> Result<(), GfqError> {
        if self.cols > MAX_AMBIENT {
            return Err(GfqError::AmbientTooLarge(self.cols));
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !f.is_element(v) {
                    return Err(GfqError::InvalidEntry { row: r, col: c, value: v, q: f.q() });
                }
            }
        }
        Ok(())
    }
}

/// Reduced row echelon form.
///
/// Returns the canonical matrix with zero rows removed, its rank, and the
/// strictly increasing pivot columns. The row space is preserved and the
/// function is idempotent on its own output.
pub fn rref(m: &Matrix, f: &FieldDesc) -> Result<(Matrix, usize, Vec<usize>), GfqError> {
    m.validate(f)?;
    let mut work = m.clone();
    let (rank, pivots) = rref_in_place(&mut work, f);
    let canonical = Matrix {
        rows: rank,
        cols: work.cols,
        entries: work.entries[..rank * work.cols].to_vec(),
    };
    Ok((canonical, rank, pivots))
}

/// In-place elimination; zero rows end up at the bottom. Entries are
/// assumed valid. Dispatches to a word-packed xor path for `F_2`.
pub(crate) fn rref_in_place(m: &mut Matrix, f: &FieldDesc) -> (usize, Vec<usize>) {
    if f.q() == 2 {
        return rref_in_place_gf2(m);
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m.get(i, c) != 0) else { continue };
        if pr != r {
            for j in 0..cols {
                let (a, b) = (m.get(r, j), m.get(pr, j));
                m.set(r, j, b);
                m.set(pr, j, a);
            }
        }
        let scale = f.inv(m.get(r, c));
        if scale != 1 {
            for j in 0..cols {
                m.set(r, j, f.mul(m.get(r, j), scale));
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if factor == 0 {
                continue;
            }
            for j in 0..cols {
                let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (r, pivots)
}

// --- F_2 fast path: rows packed as u64 words, bit i = column i reversed so
// --- the leading column is the most significant set bit.

#[inline]
pub(crate) fn pack_row_gf2(row: &[u8], cols: usize) -> u64 {
    let mut w = 0u64;
    for (j, &v) in row.iter().enumerate() {
        if v != 0 {
            w |= 1 << (cols - 1 - j);
        }
    }
    w
}

fn unpack_row_gf2(w: u64, cols: usize, out: &mut [u8]) {
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = ((w >> (cols - 1 - j)) & 1) as u8;
    }
}

/// Eliminates packed `F_2` rows in place, returning the rank. Rows come
/// out sorted by leading column with zero words at the end.
pub(crate) fn eliminate_gf2(words: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..words.len() {
        let mut row = words[i];
        for r in 0..rank {
            let lead = 63 - words[r].leading_zeros();
            if row >> lead & 1 == 1 {
                row ^= words[r];
            }
        }
        if row == 0 {
            continue;
        }
        // Insert keeping basis rows ordered by descending leading bit,
        // then clear that bit from the earlier rows.
        let lead = 63 - row.leading_zeros();
        let pos = (0..rank).find(|&r| 63 - words[r].leading_zeros() < lead).unwrap_or(rank);
        for r in (pos..rank).rev() {
            words[r + 1] = words[r];
        }
        words[pos] = row;
        rank += 1;
        for r in 0..pos {
            if words[r] >> lead & 1 == 1 {
                words[r] ^= row;
            }
        }
    }
    for w in words.iter_mut().skip(rank) {
        *w = 0;
    }
    rank
}

fn rref_in_place_gf2(m: &mut Matrix) -> (usize, Vec<usize>) {
    let cols = m.cols;
    let mut words: Vec<u64> = (0..m.rows).map(|r| pack_row_gf2(m.row(r), cols)).collect();
    let rank = eliminate_gf2(&mut words);
    let mut pivots = Vec::with_capacity(rank);
    for (r, &w) in words.iter().take(rank).enumerate() {
        pivots.push(cols - 1 - (63 - w.leading_zeros()) as usize);
        let start = r * cols;
        unpack_row_gf2(w, cols, &mut m.entries[start..start + cols]);
    }
    for v in m.entries[rank * cols..].iter_mut() {
        *v = 0;
    }
    (rank, pivots)
}

/// Rank via leading-bit indexed elimination: no sorting, no reduced form,
/// just row echelon accumulation. This is the hot kernel behind every
/// meet/containment query at q = 2.
#[inline]
pub(crate) fn rank_gf2_fast(rows: impl IntoIterator<Item = u64>, cols: usize) -> usize {
    debug_assert!(cols <= 64);
    let mut basis = [0u64; 64];
    let mut rank = 0usize;
    for mut row in rows {
        while row != 0 {
            let lead = 63 - row.leading_zeros() as usize;
            let slot = &mut basis[lead];
            if *slot == 0 {
                *slot = row;
                rank += 1;
                break;
            }
            row ^= *slot;
        }
    }
    rank
}

/// Rank of entry rows over an arbitrary supported field, on a caller
/// scratch buffer (`rows * cols` entries).
pub(crate) fn rank_generic(scratch: &mut [u8], rows: usize, cols: usize, f: &FieldDesc) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&i| scratch[i * cols + c] != 0) else { continue };
        if pr != rank {
            for j in c..cols {
                scratch.swap(rank * cols + j, pr * cols + j);
            }
        }
        let scale = f.inv(scratch[rank * cols + c]);
        if scale != 1 {
            for j in c..cols {
                scratch[rank * cols + j] = f.mul(scratch[rank * cols + j], scale);
            }
        }
        for i in rank + 1..rows {
            let factor = scratch[i * cols + c];
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                let v = f.sub(scratch[i * cols + j], f.mul(factor, scratch[rank * cols + j]));
                scratch[i * cols + j] = v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
