//! Arithmetic tables for the supported field orders.

use std::sync::OnceLock;

use super::GfqError;

/// Field orders the kernel supports. Desk-scale lattice enumeration is
/// infeasible beyond these anyway.
pub const SUPPORTED_ORDERS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

const MAX_Q: usize = 9;

/// Irreducible moduli for the extension fields, ascending coefficients
/// over F_p with monic leading term. These are the Conway polynomials,
/// so canonical forms are reproducible across builds.
///
///   F_4: x^2 + x + 1        F_8: x^3 + x + 1        F_9: x^2 + 2x + 2
const EXT_MODULI: [(u64, &[u8]); 3] = [(4, &[1, 1, 1]), (8, &[1, 1, 0, 1]), (9, &[2, 2, 1])];

/// Description of a finite field `F_q` with full arithmetic tables.
///
/// Elements are encoded as integers `0..q`. For extension fields the
/// integer is the base-`p` digit vector of the polynomial representative,
/// least significant digit first, so `0` and `1` are always the additive
/// and multiplicative identities.
#[derive(Clone)]
pub struct FieldDesc {
    q: u64,
    p: u64,
    e: u32,
    modulus: Vec<u8>,
    add: [[u8; MAX_Q]; MAX_Q],
    mul: [[u8; MAX_Q]; MAX_Q],
    neg: [u8; MAX_Q],
    inv: [u8; MAX_Q],
}

impl std::fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldDesc")
            .field("q", &self.q)
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn prime_power_split(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            return (rest == 1).then_some((p, e));
        }
        p += 1;
    }
    Some((q, 1))
}

/// Builds the field of order `q`.
///
/// Fails with `NotAPrimePower` when no `(p, e)` with `q = p^e` exists and
/// with `UnsupportedOrder` for prime powers outside [`SUPPORTED_ORDERS`].
pub fn field_make(q: u64) -> Result<FieldDesc, GfqError> {
    let (p, e) = prime_power_split(q).ok_or(GfqError::NotAPrimePower(q))?;
    if !SUPPORTED_ORDERS.contains(&q) {
        return Err(GfqError::UnsupportedOrder(q));
    }
    let modulus: Vec<u8> = if e == 1 {
        Vec::new()
    } else {
        EXT_MODULI
            .iter()
            .find(|(order, _)| *order == q)
            .expect("supported extension order")
            .1
            .to_vec()
    };

    let qu = q as usize;
    let mut add = [[0u8; MAX_Q]; MAX_Q];
    let mut mul = [[0u8; MAX_Q]; MAX_Q];
    for a in 0..qu {
        for b in 0..qu {
            add[a][b] = base_add(a, b, p, e);
            mul[a][b] = base_mul(a, b, p, e, &modulus);
        }
    }
    let mut neg = [0u8; MAX_Q];
    let mut inv = [0u8; MAX_Q];
    for a in 0..qu {
        neg[a] = (0..qu).find(|&b| add[a][b] == 0).expect("additive inverse") as u8;
        if a != 0 {
            inv[a] = (1..qu).find(|&b| mul[a][b] == 1).expect("multiplicative inverse") as u8;
        }
    }
    Ok(FieldDesc { q, p, e, modulus, add, mul, neg, inv })
}

fn to_digits(a: usize, p: u64, e: u32) -> Vec<u64> {
    let mut digits = vec![0u64; e as usize];
    let mut rest = a as u64;
    for d in digits.iter_mut() {
        *d = rest % p;
        rest /= p;
    }
    digits
}

fn from_digits(digits: &[u64], p: u64) -> u8 {
    let mut value = 0u64;
    for &d in digits.iter().rev() {
        value = value * p + d;
    }
    value as u8
}

fn base_add(a: usize, b: usize, p: u64, e: u32) -> u8 {
    let (da, db) = (to_digits(a, p, e), to_digits(b, p, e));
    let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
    from_digits(&sum, p)
}

fn base_mul(a: usize, b: usize, p: u64, e: u32, modulus: &[u8]) -> u8 {
    let (da, db) = (to_digits(a, p, e), to_digits(b, p, e));
    // Schoolbook product, then reduce by the monic modulus.
    let mut prod = vec![0u64; 2 * e as usize];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (e as usize..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &m) in modulus.iter().enumerate().take(e as usize) {
            // x^i = x^(i-e) * (-modulus minus leading term)
            let idx = i - e as usize + j;
            prod[idx] = (prod[idx] + c * (p - m as u64) % p) % p;
        }
    }
    prod.truncate(e as usize);
    from_digits(&prod, p)
}

impl FieldDesc {
    /// Field order.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Characteristic.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree over the prime field.
    pub fn ext_degree(&self) -> u32 {
        self.e
    }

    /// Modulus coefficients (ascending), empty for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize][b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize][self.neg[b as usize] as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize][b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert_ne!(a, 0, "zero has no inverse");
        self.inv[a as usize]
    }

    #[inline]
    pub fn is_element(&self, a: u8) -> bool {
        (a as u64) < self.q
    }

    /// Shared immutable descriptor for a supported order.
    pub fn get(q: u64) -> Result<&'static FieldDesc, GfqError> {
        static CACHE: OnceLock<Vec<FieldDesc>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| {
            SUPPORTED_ORDERS
                .iter()
                .map(|&q| field_make(q).expect("supported order"))
                .collect()
        });
        let idx = SUPPORTED_ORDERS
            .iter()
            .position(|&order| order == q)
            .ok_or_else(|| match prime_power_split(q) {
                Some(_) => GfqError::UnsupportedOrder(q),
                None => GfqError::NotAPrimePower(q),
            })?;
        Ok(&cache[idx])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_prime_powers() {
        assert_eq!(field_make(6).unwrap_err(), GfqError::NotAPrimePower(6));
        assert_eq!(field_make(0).unwrap_err(), GfqError::NotAPrimePower(0));
        assert_eq!(field_make(1).unwrap_err(), GfqError::NotAPrimePower(1));
        assert_eq!(field_make(12).unwrap_err(), GfqError::NotAPrimePower(12));
    }

    #[test]
    fn rejects_unsupported_prime_powers() {
        assert_eq!(field_make(11).unwrap_err(), GfqError::UnsupportedOrder(11));
        assert_eq!(field_make(16).unwrap_err(), GfqError::UnsupportedOrder(16));
        assert_eq!(field_make(25).unwrap_err(), GfqError::UnsupportedOrder(25));
    }

    #[test]
    fn gf2_addition_is_xor() {
        let f = field_make(2).unwrap();
        for a in 0..2u8 {
            for b in 0..2u8 {
                assert_eq!(f.add(a, b), a ^ b);
            }
        }
    }

    #[test]
    fn gf4_matches_polynomial_tables() {
        // F_4 = F_2[x]/(x^2+x+1); elements 0, 1, x=2, x+1=3.
        let f = field_make(4).unwrap();
        assert_eq!(f.p(), 2);
        assert_eq!(f.ext_degree(), 2);
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.mul(2, 2), 3); // x^2 = x + 1
        assert_eq!(f.mul(2, 3), 1); // x(x+1) = x^2 + x = 1
        assert_eq!(f.add(2, 3), 1);
        assert_eq!(f.inv(2), 3);
    }

    // Exhaustive field-axiom check over every supported order. The 9^3
    // worst case is 729 triples, so just test them all.
    #[test]
    fn field_axioms_exhaustive() {
        for &q in SUPPORTED_ORDERS.iter() {
            let f = field_make(q).unwrap();
            let els: Vec<u8> = (0..q as u8).collect();
            for &a in &els {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.mul(a, 0), 0);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "inverse failed for {a} in F_{q}");
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "distributivity failed for ({a},{b},{c}) in F_{q}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn shared_descriptors_match_fresh_ones() {
        for &q in SUPPORTED_ORDERS.iter() {
            let cached = FieldDesc::get(q).unwrap();
            let fresh = field_make(q).unwrap();
            for a in 0..q as u8 {
                for b in 0..q as u8 {
                    assert_eq!(cached.add(a, b), fresh.add(a, b));
                    assert_eq!(cached.mul(a, b), fresh.mul(a, b));
                }
            }
        }
        assert_eq!(FieldDesc::get(6).unwrap_err(), GfqError::NotAPrimePower(6));
    }
}
