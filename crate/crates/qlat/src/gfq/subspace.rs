//! Subspaces as canonical reduced-row-echelon bases.

use std::cmp::Ordering;

use super::field::FieldDesc;
use super::matrix::{rank_generic, rank_gf2_fast, rref, Matrix};
use super::{GfqError, MAX_AMBIENT};

/// A subspace of `F_q^n`, stored as its unique reduced-row-echelon basis.
///
/// Two values compare equal exactly when they are the same subspace of the
/// same ambient space over the same field. Ordering is by pivot-column
/// tuple first and then by the packed basis rows, which is also the order
/// lattice enumeration emits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    q: u64,
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
    /// Per-row base-q codes, most significant digit = column 0. For q = 2
    /// these double as the packed words used by the xor elimination path.
    codes: Vec<u64>,
}

pub(crate) fn row_code(row: &[u8], q: u64) -> u64 {
    let mut v = 0u64;
    for &e in row {
        v = v * q + e as u64;
    }
    v
}

impl Subspace {
    /// Canonicalizes the row space of `m`.
    pub fn from_matrix(m: &Matrix, f: &FieldDesc) -> Result<Subspace, GfqError> {
        let (basis, _, pivots) = rref(m, f)?;
        Ok(Subspace::from_canonical(basis, pivots, f))
    }

    /// Wraps an already reduced basis. Callers must guarantee RREF.
    pub(crate) fn from_canonical(basis: Matrix, pivots: Vec<usize>, f: &FieldDesc) -> Subspace {
        let q = f.q();
        let codes = (0..basis.rows()).map(|r| row_code(basis.row(r), q)).collect();
        debug_assert_eq!(basis.rows(), pivots.len());
        Subspace { q, ambient: basis.cols(), basis, pivots, codes }
    }

    pub fn from_rows(rows: &[Vec<u8>], f: &FieldDesc) -> Result<Subspace, GfqError> {
        Subspace::from_matrix(&Matrix::from_rows(rows), f)
    }

    /// The zero subspace of `F_q^n`.
    pub fn zero(n: usize, f: &FieldDesc) -> Subspace {
        assert!(n <= MAX_AMBIENT);
        Subspace::from_canonical(Matrix::zero(0, n), Vec::new(), f)
    }

    /// The whole space `F_q^n`.
    pub fn full(n: usize, f: &FieldDesc) -> Subspace {
        assert!(n <= MAX_AMBIENT);
        Subspace::from_canonical(Matrix::identity(n), (0..n).collect(), f)
    }

    /// Coordinate subspace spanned by the first `d` standard basis vectors.
    pub fn coordinate(n: usize, d: usize, f: &FieldDesc) -> Subspace {
        assert!(d <= n && n <= MAX_AMBIENT);
        let mut m = Matrix::zero(d, n);
        for i in 0..d {
            m.set(i, i, 1);
        }
        Subspace::from_canonical(m, (0..d).collect(), f)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub(crate) fn codes(&self) -> &[u64] {
        &self.codes
    }

    /// Basis rows as digit strings, e.g. `"1100"`.
    pub fn digit_rows(&self) -> Vec<String> {
        (0..self.dim())
            .map(|r| self.basis.row(r).iter().map(|e| char::from(b'0' + e)).collect())
            .collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), GfqError> {
        if self.ambient != other.ambient {
            return Err(GfqError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.ambient, self.dim(), &self.pivots, &self.codes).cmp(&(
            other.q,
            other.ambient,
            other.dim(),
            &other.pivots,
            &other.codes,
        ))
    }
}

/// Rank of the stacked bases of `a` and `b` without allocating, used by
/// every meet/join/containment query.
fn stacked_rank(a: &Subspace, b: &Subspace, f: &FieldDesc) -> usize {
    let rows = a.dim() + b.dim();
    if f.q() == 2 {
        rank_gf2_fast(
            a.codes().iter().chain(b.codes()).copied(),
            a.ambient(),
        )
    } else {
        let cols = a.ambient;
        let mut scratch = [0u8; 2 * MAX_AMBIENT * MAX_AMBIENT];
        scratch[..a.dim() * cols].copy_from_slice(a.basis.entries());
        scratch[a.dim() * cols..rows * cols].copy_from_slice(b.basis.entries());
        rank_generic(&mut scratch[..rows * cols], rows, cols, f)
    }
}

/// Dimension of `a ∩ b`, via `dim a + dim b − rank(a stacked on b)`.
pub fn dim_meet(a: &Subspace, b: &Subspace, f: &FieldDesc) -> Result<usize, GfqError> {
    a.check_ambient(b)?;
    Ok(a.dim() + b.dim() - stacked_rank(a, b, f))
}

/// Canonical sum `a + b`.
pub fn join(a: &Subspace, b: &Subspace, f: &FieldDesc) -> Result<Subspace, GfqError> {
    a.check_ambient(b)?;
    Subspace::from_matrix(&a.basis().stack(b.basis()), f)
}

/// Whether `b ⊆ a`.
pub fn contains(a: &Subspace, b: &Subspace, f: &FieldDesc) -> Result<bool, GfqError> {
    a.check_ambient(b)?;
    Ok(stacked_rank(a, b, f) == a.dim())
}

/// Explicit intersection basis. Slower than [`dim_meet`]; only used where
/// the meet itself is needed (global meets, witnesses, covers).
pub fn meet(a: &Subspace, b: &Subspace, f: &FieldDesc) -> Result<Subspace, GfqError> {
    a.check_ambient(b)?;
    // Zassenhaus: eliminate [A|A; B|0]; rows with zero left half carry the
    // intersection in the right half.
    let n = a.ambient;
    let rows = a.dim() + b.dim();
    let mut work = Matrix::zero(rows, 2 * n);
    for r in 0..a.dim() {
        for c in 0..n {
            let v = a.basis().get(r, c);
            work.set(r, c, v);
            work.set(r, n + c, v);
        }
    }
    for r in 0..b.dim() {
        for c in 0..n {
            work.set(a.dim() + r, c, b.basis().get(r, c));
        }
    }
    let (rank, _) = super::matrix::rref_in_place(&mut work, f);
    let mut meet_rows = Vec::new();
    for r in 0..rank {
        if (0..n).all(|c| work.get(r, c) == 0) {
            meet_rows.push(work.row(r)[n..].to_vec());
        }
    }
    Subspace::from_rows(&meet_rows, f)
}

#[cfg(test)]
mod tests {
    use super::super::field::field_make;
    use super::*;
    use std::collections::BTreeSet;

    fn line(n: usize, axis: usize, f: &FieldDesc) -> Subspace {
        let mut m = Matrix::zero(1, n);
        m.set(0, axis, 1);
        Subspace::from_matrix(&m, f).unwrap()
    }

    #[test]
    fn meet_of_equal_spaces_is_their_dimension() {
        let f = field_make(2).unwrap();
        let s = Subspace::from_rows(&[vec![1, 0, 1, 0], vec![0, 1, 1, 0]], &f).unwrap();
        assert_eq!(dim_meet(&s, &s, &f).unwrap(), 2);
    }

    #[test]
    fn complementary_coordinate_planes_meet_trivially() {
        let f = field_make(2).unwrap();
        let a = Subspace::from_rows(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]], &f).unwrap();
        let b = Subspace::from_rows(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1]], &f).unwrap();
        assert_eq!(dim_meet(&a, &b, &f).unwrap(), 0);
        assert_eq!(join(&a, &b, &f).unwrap(), Subspace::full(4, &f));
    }

    // All vectors of `s`, by spanning the basis; independent of the
    // elimination used by dim_meet.
    fn all_vectors(s: &Subspace, f: &FieldDesc) -> BTreeSet<Vec<u8>> {
        let q = f.q() as usize;
        let k = s.dim();
        let mut out = BTreeSet::new();
        let mut coeffs = vec![0usize; k];
        loop {
            let mut v = vec![0u8; s.ambient()];
            for (i, &c) in coeffs.iter().enumerate() {
                for j in 0..s.ambient() {
                    v[j] = f.add(v[j], f.mul(c as u8, s.basis().get(i, j)));
                }
            }
            out.insert(v);
            let mut i = 0;
            while i < k {
                coeffs[i] += 1;
                if coeffs[i] < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out
    }

    #[test]
    fn meet_dimension_matches_vector_intersection_oracle() {
        for q in [2u64, 3] {
            let f = field_make(q).unwrap();
            let a = Subspace::from_rows(&[vec![1, 0, 1, 0], vec![0, 1, 0, 1]], &f).unwrap();
            let b = Subspace::from_rows(&[vec![1, 1, 1, 1], vec![0, 0, 1, 1]], &f).unwrap();
            let common = all_vectors(&a, &f).intersection(&all_vectors(&b, &f)).count();
            let d = dim_meet(&a, &b, &f).unwrap();
            assert_eq!(common as u64, q.pow(d as u32));
            let m = meet(&a, &b, &f).unwrap();
            assert_eq!(m.dim(), d);
            assert!(contains(&a, &m, &f).unwrap());
            assert!(contains(&b, &m, &f).unwrap());
        }
    }

    #[test]
    fn distinct_planes_in_three_space_meet_in_a_line() {
        // Any two distinct 2-subspaces of F_2^3 intersect in dimension 1;
        // confirm over every pair by enumeration of row spaces.
        let f = field_make(2).unwrap();
        let mut planes = BTreeSet::new();
        let vecs: Vec<Vec<u8>> = (1..8u8).map(|v| vec![v >> 2 & 1, v >> 1 & 1, v & 1]).collect();
        for x in &vecs {
            for y in &vecs {
                let s = Subspace::from_rows(&[x.clone(), y.clone()], &f).unwrap();
                if s.dim() == 2 {
                    planes.insert(s);
                }
            }
        }
        assert_eq!(planes.len(), 7);
        for a in &planes {
            for b in &planes {
                if a != b {
                    assert_eq!(dim_meet(a, b, &f).unwrap(), 1);
                }
            }
        }
    }

    #[test]
    fn join_of_axes_is_the_plane() {
        let f = field_make(2).unwrap();
        let a = line(3, 0, &f);
        let b = line(3, 1, &f);
        assert_eq!(join(&a, &a, &f).unwrap(), a);
        let plane = join(&a, &b, &f).unwrap();
        assert_eq!(plane, Subspace::from_rows(&[vec![1, 0, 0], vec![0, 1, 0]], &f).unwrap());
    }

    #[test]
    fn containment_basics() {
        let f = field_make(2).unwrap();
        let a = Subspace::from_rows(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]], &f).unwrap();
        assert!(contains(&a, &a, &f).unwrap());
        let full = Subspace::full(4, &f);
        assert!(!contains(&a, &full, &f).unwrap());
        assert!(contains(&full, &a, &f).unwrap());
        let other = line(3, 0, &f);
        assert_eq!(contains(&a, &other, &f).unwrap_err(), GfqError::AmbientMismatch(4, 3));
    }

    #[test]
    fn modular_law_on_random_pairs() {
        let f = field_make(3).unwrap();
        let a = Subspace::from_rows(&[vec![1, 2, 0, 1], vec![0, 1, 1, 2]], &f).unwrap();
        let b = Subspace::from_rows(&[vec![2, 1, 1, 0], vec![1, 0, 0, 1]], &f).unwrap();
        let meet_d = dim_meet(&a, &b, &f).unwrap();
        let join_s = join(&a, &b, &f).unwrap();
        assert_eq!(a.dim() + b.dim(), meet_d + join_s.dim());
    }
}
