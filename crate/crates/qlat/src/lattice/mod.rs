//! Enumeration of the subspace lattice of `F_q^n`.
//!
//! Slices are produced directly in canonical form by walking RREF pivot
//! patterns: choose the pivot columns, then run an odometer over the free
//! entries. Nothing is generated twice, so no dedup pass is needed, and
//! the emission order (pivot columns lexicographic, then packed rows
//! ascending) is the same order [`Subspace`] sorts by, which keeps every
//! downstream report diff-stable.

mod cache;

pub use cache::{cache_header, cache_load, cache_path, cache_save, CacheHeader, CACHE_VERSION};

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::gfq::{contains, dim_meet, FieldDesc, GfqError, Matrix, Subspace, MAX_AMBIENT};
use crate::qcount::{count_containing, gauss_binom, CountValue, QcountError};

/// Default ceiling on how many subspaces a single enumeration may emit.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("enumeration of {required} elements refused (budget {budget})")]
    BudgetExceeded { required: CountValue, budget: u64 },
    #[error("subspaces are not nested with compatible dimensions")]
    NotNested,
    #[error("i/o failure: {0}")]
    IoFailure(#[from] std::io::Error),
    #[error("checksum mismatch or corrupt cache body")]
    ChecksumMismatch,
    #[error("cache format version {found} not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error(transparent)]
    Gfq(#[from] GfqError),
    #[error(transparent)]
    Qcount(#[from] QcountError),
}

/// One full dimension level of the lattice, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSlice {
    q: u64,
    ambient: usize,
    dim: usize,
    elements: Vec<Subspace>,
}

impl LatticeSlice {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Subspace> {
        self.elements
    }

    /// Assembles a slice-like container from already canonical, sorted
    /// elements (the family serializer reuses the cache format).
    pub fn from_parts(q: u64, ambient: usize, dim: usize, elements: Vec<Subspace>) -> Self {
        LatticeSlice { q, ambient, dim, elements }
    }
}

fn check_budget(count: &BigUint, budget: u64) -> Result<u64, LatticeError> {
    match count.to_u64() {
        Some(c) if c <= budget => Ok(c),
        _ => Err(LatticeError::BudgetExceeded { required: count.clone(), budget }),
    }
}

/// Enumerates every `k`-subspace of `F_q^n` exactly once.
pub fn enumerate_slice(
    n: usize,
    k: usize,
    f: &FieldDesc,
    budget: u64,
) -> Result<LatticeSlice, LatticeError> {
    let q = f.q();
    assert!(k <= n, "k must be at most n");
    let expected = gauss_binom(n as i64, k as i64, q)?;
    let capacity = check_budget(&expected, budget)? as usize;
    if n > MAX_AMBIENT {
        return Err(GfqError::AmbientTooLarge(n).into());
    }

    let mut elements = Vec::with_capacity(capacity);
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        emit_pivot_block(n, k, &pivots, f, &mut elements);
        if !next_combination(&mut pivots, n) {
            break;
        }
    }
    debug_assert_eq!(BigUint::from(elements.len()), expected);
    debug_assert!(elements.windows(2).all(|w| w[0] < w[1]), "emission order not canonical");
    Ok(LatticeSlice { q, ambient: n, dim: k, elements })
}

/// Advances `combo` to the next k-combination of `0..n` in lex order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Emits every RREF matrix with the given pivot columns, odometer over
/// the free cells with the row-major last cell cycling fastest.
fn emit_pivot_block(
    n: usize,
    k: usize,
    pivots: &[usize],
    f: &FieldDesc,
    out: &mut Vec<Subspace>,
) {
    let q = f.q() as u8;
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &c in pivots {
            v[c] = true;
        }
        v
    };
    let mut free: Vec<(usize, usize)> = Vec::new();
    for (i, &c) in pivots.iter().enumerate() {
        for j in c + 1..n {
            if !is_pivot[j] {
                free.push((i, j));
            }
        }
    }

    let mut base = Matrix::zero(k, n);
    for (i, &c) in pivots.iter().enumerate() {
        base.set(i, c, 1);
    }
    let mut digits = vec![0u8; free.len()];
    loop {
        out.push(Subspace::from_canonical(base.clone(), pivots.to_vec(), f));
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < q {
                let (r, c) = free[pos];
                base.set(r, c, digits[pos]);
                break;
            }
            digits[pos] = 0;
            let (r, c) = free[pos];
            base.set(r, c, 0);
        }
    }
}

/// Process-wide memo of fully enumerated slices. Slices are immutable
/// once built, so sharing them across closure rounds and search seeds is
/// free; the budget is still honored per call.
pub fn shared_slice(
    n: usize,
    k: usize,
    f: &FieldDesc,
    budget: u64,
) -> Result<Arc<Vec<Subspace>>, LatticeError> {
    static MEMO: RwLock<Option<HashMap<(u64, usize, usize), Arc<Vec<Subspace>>>>> =
        RwLock::new(None);
    let expected = gauss_binom(n as i64, k as i64, f.q())?;
    check_budget(&expected, budget)?;
    let key = (f.q(), n, k);
    if let Some(map) = MEMO.read().expect("slice memo poisoned").as_ref() {
        if let Some(hit) = map.get(&key) {
            return Ok(Arc::clone(hit));
        }
    }
    let built = Arc::new(enumerate_slice(n, k, f, budget)?.into_elements());
    let mut guard = MEMO.write().expect("slice memo poisoned");
    let map = guard.get_or_insert_with(HashMap::new);
    Ok(Arc::clone(map.entry(key).or_insert(built)))
}

/// All `b`-subspaces `B` with `a ⊆ B ⊆ c`, enumerated in the quotient
/// `c/a` and lifted. The result is sorted canonically and its length is
/// always `[dim c − dim a ch b − dim a]`.
pub fn enumerate_between(
    a: &Subspace,
    c: &Subspace,
    b: usize,
    f: &FieldDesc,
) -> Result<Vec<Subspace>, LatticeError> {
    if a.dim() > b || b > c.dim() || !contains(c, a, f)? {
        return Err(LatticeError::NotNested);
    }
    let n = a.ambient();
    let quotient_dim = c.dim() - a.dim();
    let rel_dim = b - a.dim();

    // Complement of a inside c: reduce c's basis rows against a's pivots
    // and keep an independent set.
    let mut reduced: Vec<Vec<u8>> = Vec::new();
    for r in 0..c.dim() {
        let mut v = c.basis().row(r).to_vec();
        for (i, &p) in a.pivots().iter().enumerate() {
            let coef = v[p];
            if coef != 0 {
                for j in 0..n {
                    v[j] = f.sub(v[j], f.mul(coef, a.basis().get(i, j)));
                }
            }
        }
        if v.iter().any(|&x| x != 0) {
            reduced.push(v);
        }
    }
    let complement = Subspace::from_rows(&reduced, f)?;
    debug_assert_eq!(complement.dim(), quotient_dim);

    let rel = enumerate_slice(quotient_dim, rel_dim, f, u64::MAX)?;
    let mut out = Vec::with_capacity(rel.len());
    for w in rel.elements() {
        let mut rows: Vec<Vec<u8>> = Vec::with_capacity(b);
        for r in 0..a.dim() {
            rows.push(a.basis().row(r).to_vec());
        }
        for wr in 0..w.dim() {
            let mut v = vec![0u8; n];
            for j in 0..quotient_dim {
                let coef = w.basis().get(wr, j);
                if coef != 0 {
                    for col in 0..n {
                        v[col] = f.add(v[col], f.mul(coef, complement.basis().get(j, col)));
                    }
                }
            }
            rows.push(v);
        }
        let lifted = Subspace::from_rows(&rows, f)?;
        debug_assert_eq!(lifted.dim(), b);
        out.push(lifted);
    }
    out.sort_unstable();
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    debug_assert_eq!(
        BigUint::from(out.len()),
        count_containing(a.dim() as i64, b as i64, c.dim() as i64, f.q())?
    );
    Ok(out)
}

/// All `m`-subspaces whose intersection with `anchor` has dimension `h`.
pub fn enumerate_type(
    m: usize,
    h: usize,
    anchor: &Subspace,
    f: &FieldDesc,
    budget: u64,
) -> Result<Vec<Subspace>, LatticeError> {
    let n = anchor.ambient();
    let slice = enumerate_slice(n, m, f, budget)?;
    let mut out = Vec::new();
    for u in slice.into_elements() {
        if dim_meet(&u, anchor, f)? == h {
            out.push(u);
        }
    }
    Ok(out)
}
