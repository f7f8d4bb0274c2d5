//! Arithmetic in F_q, q = p^k.
//!
//! Elements are dense integer codes in `[0, q)`: the base-p digits of a code
//! are the coefficients of the representing polynomial, constant term least
//! significant. The same type serves both the matrix entries (the defining
//! field F_q) and the coefficient fields F_{l^d} used for verification.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Extension fields with at most this many elements get full add/mul tables.
const TABLE_LIMIT: u32 = 256;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

/// A finite field F_{p^k} given by a monic irreducible modulus over F_p.
#[derive(Clone, Serialize, Deserialize)]
#[serde(into = "FieldSpecRepr", try_from = "FieldSpecRepr")]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldSpecRepr {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
}

impl From<FieldSpec> for FieldSpecRepr {
    fn from(f: FieldSpec) -> Self {
        FieldSpecRepr { p: f.p, k: f.k, modulus: f.modulus }
    }
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = Error;

    fn try_from(r: FieldSpecRepr) -> Result<Self> {
        FieldSpec::new(r.p, r.k, r.modulus)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec").field("p", &self.p).field("k", &self.k).field("modulus", &self.modulus).finish()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.k)
        }
    }
}

impl FieldSpec {
    /// Builds a field from an explicit modulus (coefficients low degree first).
    pub fn new(p: u32, k: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::InvalidField("degree must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{k} does not fit in 32 bits")))? as u32;
        if modulus.len() != k as usize + 1 {
            return Err(Error::InvalidField(format!(
                "modulus must have {} coefficients, got {}",
                k + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if modulus[k as usize] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        let mut spec = FieldSpec { p, k, q, modulus, tables: None };
        if k > 1 && q <= TABLE_LIMIT {
            spec.tables = Some(Arc::new(spec.build_tables()));
        }
        Ok(spec)
    }

    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, vec![0, 1])
    }

    /// F_{p^k} with the lexicographically smallest monic irreducible modulus,
    /// comparing coefficient lists low degree first.
    pub fn find(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::InvalidField("degree must be at least 1".into()));
        }
        let count = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{k} does not fit in 32 bits")))?;
        for idx in 0..count {
            // idx enumerates (c_0, ..., c_{k-1}) with c_0 most significant.
            let mut lower = vec![0u32; k as usize];
            let mut rest = idx;
            for slot in lower.iter_mut().rev() {
                *slot = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            let mut modulus = lower;
            modulus.push(1);
            if is_irreducible(p, &modulus) {
                return Self::new(p, k, modulus);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn contains(&self, x: u32) -> bool {
        x < self.q
    }

    pub fn digits(&self, mut code: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            d.push(code % self.p);
            code /= self.p;
        }
        d
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d % self.p)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a as u64 + b as u64;
            return (s % self.p as u64) as u32;
        }
        if let Some(t) = &self.tables {
            return t.add[(a * self.q + b) as usize];
        }
        self.add_digits(a, b)
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let d: Vec<u32> = self.digits(a).into_iter().map(|x| (self.p - x) % self.p).collect();
        self.from_digits(&d)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if let Some(t) = &self.tables {
            return t.mul[(a * self.q + b) as usize];
        }
        self.mul_poly(a, b)
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            return Ok(t.inv[a as usize]);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// Absolute trace F_q -> F_p, returned as an integer in `[0, p)`.
    pub fn trace(&self, x: u32) -> u32 {
        let mut acc = 0;
        let mut term = x;
        for _ in 0..self.k {
            acc = self.add(acc, term);
            term = self.frobenius(term);
        }
        debug_assert!(acc < self.p, "trace must land in the prime subfield");
        acc
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            a /= self.p;
            b /= self.p;
            place = place.wrapping_mul(self.p);
        }
        out
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let idx = deg - k + j;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.from_digits(&digits)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        let mut inv = vec![0u32; q];
        for a in 0..self.q {
            for b in 0..self.q {
                let idx = (a as usize) * q + b as usize;
                add[idx] = self.add_digits(a, b);
                let m = self.mul_poly(a, b);
                mul[idx] = m;
                if m == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        Tables { add, mul, inv }
    }
}

// Polynomials over F_p as coefficient vectors, low degree first.

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn poly_rem(p: u32, num: &[u32], den: &[u32]) -> Vec<u32> {
    let p64 = p as u64;
    let den = trim(den.to_vec());
    let mut r = trim(num.to_vec());
    let dlead = *den.last().unwrap() as u64;
    let dlead_inv = (1..p64).find(|x| x * dlead % p64 == 1).unwrap();
    while r.len() >= den.len() && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - den.len();
        let c = *r.last().unwrap() as u64 * dlead_inv % p64;
        for (j, &d) in den.iter().enumerate() {
            let idx = shift + j;
            r[idx] = ((r[idx] as u64 + (p64 - c) * d as u64) % p64) as u32;
        }
        r = trim(r);
        if r.len() == 1 && r[0] == 0 {
            break;
        }
    }
    r
}

/// Irreducibility by trial division against every monic polynomial of
/// degree 1..=deg/2.
pub(crate) fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let poly = trim(poly.to_vec());
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                div.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            div.push(1);
            let r = poly_rem(p, &poly, &div);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}
