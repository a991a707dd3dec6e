//! Small finite fields GF(q) with table-driven arithmetic.
//!
//! Prime fields use modular arithmetic. For `q = p^e` with `e > 1`, elements
//! are polynomials over GF(p) of degree `< e` encoded in base `p`; addition
//! is digitwise and multiplication goes through log/antilog tables built
//! from a primitive polynomial found by search.

use crate::error::{Error, Result};

pub const MAX_FIELD_SIZE: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    q: u32,
    p: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl GaloisField {
    pub fn new(q: u32) -> Result<Self> {
        if q > MAX_FIELD_SIZE {
            return Err(Error::UnsupportedField(q as u64));
        }
        let (p, e) = prime_power(q).ok_or(Error::UnsupportedField(q as u64))?;
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        for a in 0..q {
            for b in 0..q {
                add[(a * q + b) as usize] = digitwise_add(a, b, p, e) as u8;
            }
        }
        let mul = if e == 1 {
            let mut mul = vec![0u8; qs * qs];
            for a in 0..q {
                for b in 0..q {
                    mul[(a * q + b) as usize] = (a * b % p) as u8;
                }
            }
            mul
        } else {
            extension_mul_table(p, e)
        };
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b as u8;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u8;
                }
            }
        }
        Ok(GaloisField {
            q,
            p,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    /// Multiplicative inverse; zero maps to zero.
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// Dimension of the span of `vectors` (all of equal length).
    pub fn rank<'a>(&self, vectors: impl IntoIterator<Item = &'a [u8]>) -> usize {
        let mut rows: Vec<Vec<u8>> = vectors.into_iter().map(|v| v.to_vec()).collect();
        self.rank_in_place(&mut rows)
    }

    pub fn rank_in_place(&self, rows: &mut [Vec<u8>]) -> usize {
        let Some(width) = rows.first().map(|r| r.len()) else {
            return 0;
        };
        let mut rank = 0;
        for col in 0..width {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let scale = self.inv(rows[rank][col]);
            for c in col..width {
                rows[rank][c] = self.mul(rows[rank][c], scale);
            }
            for r in 0..rows.len() {
                if r != rank && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for c in col..width {
                        let t = self.mul(f, rows[rank][c]);
                        rows[r][c] = self.sub(rows[r][c], t);
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// All `q^n` vectors of GF(q)^n. Vector `idx` has coordinate `j`
    /// (0-based) equal to the `j`-th base-`q` digit of `idx`, so the zero
    /// vector comes first and `A ↦ A ⊕ 0` keeps indices unchanged.
    pub fn all_vectors(&self, n: usize) -> Vec<Vec<u8>> {
        let count = (self.q as usize).pow(n as u32);
        (0..count).map(|idx| self.vector_of_index(idx, n)).collect()
    }

    pub fn vector_of_index(&self, mut idx: usize, n: usize) -> Vec<u8> {
        let q = self.q as usize;
        let mut v = vec![0u8; n];
        for c in v.iter_mut() {
            *c = (idx % q) as u8;
            idx /= q;
        }
        v
    }

    pub fn index_of_vector(&self, v: &[u8]) -> usize {
        v.iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.q as usize + c as usize)
    }
}

fn digitwise_add(mut a: u32, mut b: u32, p: u32, e: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    for _ in 0..e {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Multiplies base-`p` encoded polynomials modulo the monic polynomial whose
/// low coefficients are `modulus` (degree `e`).
fn poly_mul_mod(a: u32, b: u32, p: u32, e: u32, modulus: &[u32]) -> u32 {
    let digits = |mut x: u32| {
        let mut d = vec![0u32; e as usize];
        for c in d.iter_mut() {
            *c = x % p;
            x /= p;
        }
        d
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u32; 2 * e as usize];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // x^e = -(modulus) reduces high terms
    for deg in (e as usize..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in modulus.iter().enumerate() {
            let idx = deg - e as usize + i;
            prod[idx] = (prod[idx] + (p - m % p) * c) % p;
        }
    }
    prod[..e as usize]
        .iter()
        .rev()
        .fold(0, |acc, &c| acc * p + c)
}

fn extension_mul_table(p: u32, e: u32) -> Vec<u8> {
    let q = p.pow(e);
    let order = q - 1;
    // candidates: monic degree-e polynomials, low coefficients encoded in base p
    for code in 0..q {
        let modulus: Vec<u32> = {
            let mut c = code;
            (0..e)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect()
        };
        if modulus[0] == 0 {
            continue;
        }
        // x is encoded as p (coefficient 1 at degree 1)
        let x = p;
        let mut exp = Vec::with_capacity(order as usize);
        let mut cur = 1u32;
        let mut ok = true;
        for i in 0..order {
            if i > 0 && cur == 1 {
                ok = false;
                break;
            }
            exp.push(cur);
            cur = poly_mul_mod(cur, x, p, e, &modulus);
        }
        if !ok || cur != 1 {
            continue;
        }
        let mut log = vec![0u32; q as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        let qs = q as usize;
        let mut mul = vec![0u8; qs * qs];
        for a in 1..q {
            for b in 1..q {
                let s = (log[a as usize] + log[b as usize]) % order;
                mul[(a * q + b) as usize] = exp[s as usize] as u8;
            }
        }
        return mul;
    }
    unreachable!("every finite field has a primitive polynomial")
}
