//! Exact coefficient rings: Z[1/p, zeta_p], Z[1/p], and finite fields
//! F_{l^d} with l != p.
//!
//! Cyclotomic values are stored in the power basis `1, zeta, ..., zeta^(p-2)`
//! over a denominator `p^k`. The basis is an integral basis of Z[zeta], so the
//! normal form "k = 0 or some numerator coordinate is prime to p" is unique.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::finite_field::{is_prime, FieldSpec};

/// `(sum_j num[j] zeta^j) / p^den_exp` with `num.len() == p - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicValue {
    p: u32,
    num: Vec<BigInt>,
    den_exp: u32,
}

/// `num / p^den_exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalZpValue {
    p: u32,
    num: BigInt,
    den_exp: u32,
}

fn p_pow(p: u32, e: u32) -> BigInt {
    Pow::pow(BigInt::from(p), e)
}

impl RationalZpValue {
    pub fn new(p: u32, num: BigInt, den_exp: u32) -> Self {
        let mut v = RationalZpValue { p, num, den_exp };
        v.normalize();
        v
    }

    pub fn zero(p: u32) -> Self {
        Self::new(p, BigInt::zero(), 0)
    }

    pub fn one(p: u32) -> Self {
        Self::new(p, BigInt::one(), 0)
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        Self::new(p, BigInt::from(n), 0)
    }

    /// `p^(-k)`.
    pub fn inv_p_pow(p: u32, k: u32) -> Self {
        Self::new(p, BigInt::one(), k)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_normalized(&self) -> bool {
        self.den_exp == 0 || !self.num.is_multiple_of(&BigInt::from(self.p))
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den_exp = 0;
            return;
        }
        let p = BigInt::from(self.p);
        while self.den_exp > 0 {
            let (q, r) = self.num.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            self.num = q;
            self.den_exp -= 1;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let e = self.den_exp.max(other.den_exp);
        let a = &self.num * p_pow(self.p, e - self.den_exp);
        let b = &other.num * p_pow(self.p, e - other.den_exp);
        Self::new(self.p, a + b, e)
    }

    pub fn neg(&self) -> Self {
        RationalZpValue { p: self.p, num: -&self.num, den_exp: self.den_exp }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.p, &self.num * &other.num, self.den_exp + other.den_exp)
    }
}

impl CyclotomicValue {
    /// Builds and normalizes a value; `num` must have length `p - 1`.
    pub fn new(p: u32, num: Vec<BigInt>, den_exp: u32) -> Self {
        assert_eq!(num.len(), p as usize - 1, "cyclotomic numerator length must be p - 1");
        let mut v = CyclotomicValue { p, num, den_exp };
        v.normalize();
        v
    }

    pub fn zero(p: u32) -> Self {
        Self::new(p, vec![BigInt::zero(); p as usize - 1], 0)
    }

    pub fn one(p: u32) -> Self {
        Self::from_rational(&RationalZpValue::one(p))
    }

    pub fn from_rational(r: &RationalZpValue) -> Self {
        let mut num = vec![BigInt::zero(); r.p as usize - 1];
        num[0] = r.num.clone();
        Self::new(r.p, num, r.den_exp)
    }

    /// `zeta^(j mod p)`.
    pub fn zeta_power(p: u32, j: i64) -> Self {
        let j = j.rem_euclid(p as i64) as usize;
        let mut full = vec![BigInt::zero(); p as usize];
        full[j] = BigInt::one();
        Self::from_full(p, full, 0)
    }

    /// Reduces a vector of length p (coefficients of 1..zeta^(p-1)) using
    /// zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)).
    fn from_full(p: u32, mut full: Vec<BigInt>, den_exp: u32) -> Self {
        let top = full.pop().expect("length p");
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        Self::new(p, full, den_exp)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn num(&self) -> &[BigInt] {
        &self.num
    }

    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_normalized(&self) -> bool {
        let p = BigInt::from(self.p);
        if self.is_zero() {
            return self.den_exp == 0;
        }
        self.den_exp == 0 || self.num.iter().any(|c| !c.is_multiple_of(&p))
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.den_exp = 0;
            return;
        }
        let p = BigInt::from(self.p);
        while self.den_exp > 0 && self.num.iter().all(|c| c.is_multiple_of(&p)) {
            for c in self.num.iter_mut() {
                *c /= &p;
            }
            self.den_exp -= 1;
        }
    }

    /// Coordinate `j` of the power basis, as an element of Z[1/p].
    pub fn component(&self, j: usize) -> RationalZpValue {
        RationalZpValue::new(self.p, self.num[j].clone(), self.den_exp)
    }

    /// The coefficient of the basis vector 1.
    pub fn project_rational(&self) -> RationalZpValue {
        self.component(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let e = self.den_exp.max(other.den_exp);
        let sa = p_pow(self.p, e - self.den_exp);
        let sb = p_pow(self.p, e - other.den_exp);
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &sa + b * &sb).collect();
        Self::new(self.p, num, e)
    }

    pub fn neg(&self) -> Self {
        CyclotomicValue { p: self.p, num: self.num.iter().map(|c| -c).collect(), den_exp: self.den_exp }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % p] += a * b;
            }
        }
        Self::from_full(self.p, full, self.den_exp + other.den_exp)
    }
}

/// An element of one of the supported coefficient rings. Field elements are
/// codes of the ring's [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingValue {
    Cyclotomic(CyclotomicValue),
    Rational(RationalZpValue),
    Field(u32),
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingValue::Rational(r) => write!(f, "{}/{}^{}", r.num, r.p, r.den_exp),
            RingValue::Cyclotomic(c) => {
                let parts: Vec<String> = c.num.iter().map(|x| x.to_string()).collect();
                write!(f, "({})/{}^{}", parts.join(","), c.p, c.den_exp)
            }
            RingValue::Field(x) => write!(f, "{x}"),
        }
    }
}

/// F_{l^d} viewed as an algebra over Z[1/p]; caches 1/p and the chosen
/// primitive p-th root of unity (if any).
#[derive(Clone, Debug)]
pub struct PrimeFieldRing {
    p: u32,
    field: FieldSpec,
    p_inv: u32,
    zeta: Option<u32>,
}

impl PartialEq for PrimeFieldRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.field == other.field
    }
}

impl Eq for PrimeFieldRing {}

impl PrimeFieldRing {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// The element of multiplicative order p with the smallest code.
    pub fn zeta(&self) -> Option<u32> {
        self.zeta
    }

    pub fn p_inverse(&self) -> u32 {
        self.p_inv
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingDescriptor {
    Cyclotomic { p: u32 },
    RationalZp { p: u32 },
    PrimeField(PrimeFieldRing),
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Cyclotomic { p } => write!(f, "Z[1/{p},zeta_{p}]"),
            RingDescriptor::RationalZp { p } => write!(f, "Z[1/{p}]"),
            RingDescriptor::PrimeField(pf) => write!(f, "{}", pf.field),
        }
    }
}

impl RingDescriptor {
    pub fn cyclotomic(p: u32) -> Result<Self> {
        check_prime(p)?;
        Ok(RingDescriptor::Cyclotomic { p })
    }

    pub fn rational(p: u32) -> Result<Self> {
        check_prime(p)?;
        Ok(RingDescriptor::RationalZp { p })
    }

    /// F_{l^d} as a Z[1/p]-algebra; requires l != p.
    pub fn prime_field(p: u32, field: FieldSpec) -> Result<Self> {
        check_prime(p)?;
        if field.p() == p {
            return Err(Error::InvalidRing(format!("{field} has characteristic {p}, so {p} is not invertible")));
        }
        let p_inv = field.inv(field.from_int(p as i64))?;
        let zeta = field.elements().skip(2).find(|&x| field.pow(x, p as u64) == 1);
        Ok(RingDescriptor::PrimeField(PrimeFieldRing { p, field, p_inv, zeta }))
    }

    /// Parses `cyclotomic`, `rational` or `fp:l[:d]`.
    pub fn from_selector(selector: &str, p: u32) -> Result<Self> {
        match selector {
            "cyclotomic" => Self::cyclotomic(p),
            "rational" => Self::rational(p),
            s if s.starts_with("fp:") => {
                let parts: Vec<&str> = s[3..].split(':').collect();
                let parse = |t: &str| {
                    t.parse::<u32>().map_err(|_| Error::InvalidRing(format!("bad ring selector {selector:?}")))
                };
                let (l, d) = match parts.as_slice() {
                    [l] => (parse(l)?, 1),
                    [l, d] => (parse(l)?, parse(d)?),
                    _ => return Err(Error::InvalidRing(format!("bad ring selector {selector:?}"))),
                };
                Self::prime_field(p, FieldSpec::find(l, d)?)
            }
            _ => Err(Error::InvalidRing(format!("bad ring selector {selector:?}"))),
        }
    }

    /// The defining characteristic p (the prime inverted in this ring).
    pub fn p(&self) -> u32 {
        match self {
            RingDescriptor::Cyclotomic { p } | RingDescriptor::RationalZp { p } => *p,
            RingDescriptor::PrimeField(pf) => pf.p,
        }
    }

    pub fn has_zeta(&self) -> bool {
        match self {
            RingDescriptor::Cyclotomic { .. } => true,
            // zeta_2 = -1 is rational.
            RingDescriptor::RationalZp { p } => *p == 2,
            RingDescriptor::PrimeField(pf) => pf.zeta.is_some(),
        }
    }

    pub fn contains(&self, v: &RingValue) -> bool {
        match (self, v) {
            (RingDescriptor::Cyclotomic { p }, RingValue::Cyclotomic(c)) => c.p == *p,
            (RingDescriptor::RationalZp { p }, RingValue::Rational(r)) => r.p == *p,
            (RingDescriptor::PrimeField(pf), RingValue::Field(x)) => pf.field.contains(*x),
            _ => false,
        }
    }

    fn check(&self, v: &RingValue) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{v} is not an element of {self}")))
        }
    }

    pub fn zero(&self) -> RingValue {
        self.from_int(0)
    }

    pub fn one(&self) -> RingValue {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingValue {
        match self {
            RingDescriptor::Cyclotomic { p } => {
                RingValue::Cyclotomic(CyclotomicValue::from_rational(&RationalZpValue::from_int(*p, n)))
            }
            RingDescriptor::RationalZp { p } => RingValue::Rational(RationalZpValue::from_int(*p, n)),
            RingDescriptor::PrimeField(pf) => RingValue::Field(pf.field.from_int(n)),
        }
    }

    /// `p^(-k)`.
    pub fn inv_p_pow(&self, k: u32) -> RingValue {
        match self {
            RingDescriptor::Cyclotomic { p } => {
                RingValue::Cyclotomic(CyclotomicValue::from_rational(&RationalZpValue::inv_p_pow(*p, k)))
            }
            RingDescriptor::RationalZp { p } => RingValue::Rational(RationalZpValue::inv_p_pow(*p, k)),
            RingDescriptor::PrimeField(pf) => RingValue::Field(pf.field.pow(pf.p_inv, k as u64)),
        }
    }

    /// `1/n`, when n is a unit: a power of p in the characteristic-zero rings,
    /// prime to l in F_{l^d}.
    pub fn inverse_of_count(&self, n: u64) -> Result<RingValue> {
        let not_invertible = || Error::NotInvertible { value: n.to_string(), ring: self.to_string() };
        match self {
            RingDescriptor::Cyclotomic { p } | RingDescriptor::RationalZp { p } => {
                let mut m = n;
                let mut k = 0;
                while m > 1 && m.is_multiple_of(*p as u64) {
                    m /= *p as u64;
                    k += 1;
                }
                if m != 1 {
                    return Err(not_invertible());
                }
                Ok(self.inv_p_pow(k))
            }
            RingDescriptor::PrimeField(pf) => {
                let l = pf.field.p() as u64;
                let r = pf.field.from_int((n % l) as i64);
                pf.field.inv(r).map(RingValue::Field).map_err(|_| not_invertible())
            }
        }
    }

    /// `zeta^(j mod p)`.
    pub fn zeta_power(&self, j: i64) -> Result<RingValue> {
        let p = self.p();
        match self {
            RingDescriptor::Cyclotomic { .. } => Ok(RingValue::Cyclotomic(CyclotomicValue::zeta_power(p, j))),
            RingDescriptor::RationalZp { .. } if p == 2 => Ok(self.from_int(if j.rem_euclid(2) == 0 { 1 } else { -1 })),
            RingDescriptor::RationalZp { .. } => Err(Error::NoRootOfUnity { p, ring: self.to_string() }),
            RingDescriptor::PrimeField(pf) => match pf.zeta {
                Some(z) => Ok(RingValue::Field(pf.field.pow(z, j.rem_euclid(p as i64) as u64))),
                None => Err(Error::NoRootOfUnity { p, ring: self.to_string() }),
            },
        }
    }

    pub fn is_zero(&self, v: &RingValue) -> bool {
        match v {
            RingValue::Cyclotomic(c) => c.is_zero(),
            RingValue::Rational(r) => r.is_zero(),
            RingValue::Field(x) => *x == 0,
        }
    }

    pub fn add(&self, a: &RingValue, b: &RingValue) -> Result<RingValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn sub(&self, a: &RingValue, b: &RingValue) -> Result<RingValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, &self.neg_unchecked(b)))
    }

    pub fn mul(&self, a: &RingValue, b: &RingValue) -> Result<RingValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub fn neg(&self, a: &RingValue) -> Result<RingValue> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub fn eq(&self, a: &RingValue, b: &RingValue) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(a == b)
    }

    // The unchecked variants are for hot loops whose operands were already
    // validated (or produced) by this ring.

    pub(crate) fn add_unchecked(&self, a: &RingValue, b: &RingValue) -> RingValue {
        match (self, a, b) {
            (_, RingValue::Cyclotomic(x), RingValue::Cyclotomic(y)) => RingValue::Cyclotomic(x.add(y)),
            (_, RingValue::Rational(x), RingValue::Rational(y)) => RingValue::Rational(x.add(y)),
            (RingDescriptor::PrimeField(pf), RingValue::Field(x), RingValue::Field(y)) => {
                RingValue::Field(pf.field.add(*x, *y))
            }
            _ => panic!("operands outside {self}"),
        }
    }

    pub(crate) fn neg_unchecked(&self, a: &RingValue) -> RingValue {
        match (self, a) {
            (_, RingValue::Cyclotomic(x)) => RingValue::Cyclotomic(x.neg()),
            (_, RingValue::Rational(x)) => RingValue::Rational(x.neg()),
            (RingDescriptor::PrimeField(pf), RingValue::Field(x)) => RingValue::Field(pf.field.neg(*x)),
            _ => panic!("operand outside {self}"),
        }
    }

    pub(crate) fn mul_unchecked(&self, a: &RingValue, b: &RingValue) -> RingValue {
        match (self, a, b) {
            (_, RingValue::Cyclotomic(x), RingValue::Cyclotomic(y)) => RingValue::Cyclotomic(x.mul(y)),
            (_, RingValue::Rational(x), RingValue::Rational(y)) => RingValue::Rational(x.mul(y)),
            (RingDescriptor::PrimeField(pf), RingValue::Field(x), RingValue::Field(y)) => {
                RingValue::Field(pf.field.mul(*x, *y))
            }
            _ => panic!("operands outside {self}"),
        }
    }

    /// Maps `v` into this ring along the canonical morphisms
    /// Z[1/p] -> Z[1/p, zeta] -> F_{l^d}. Fails when no morphism exists.
    pub fn coerce(&self, v: &RingValue) -> Result<RingValue> {
        if self.contains(v) {
            return Ok(v.clone());
        }
        let p = self.p();
        let mismatch = || Error::RingIncompatible(format!("cannot map {v} into {self}"));
        match (self, v) {
            (RingDescriptor::Cyclotomic { .. }, RingValue::Rational(r)) if r.p == p => {
                Ok(RingValue::Cyclotomic(CyclotomicValue::from_rational(r)))
            }
            (RingDescriptor::RationalZp { .. }, RingValue::Cyclotomic(c)) if c.p == p && p == 2 => {
                Ok(RingValue::Rational(c.project_rational()))
            }
            (RingDescriptor::PrimeField(_), RingValue::Rational(r)) if r.p == p => embed(v, self),
            (RingDescriptor::PrimeField(_), RingValue::Cyclotomic(c)) if c.p == p => embed(v, self),
            _ => Err(mismatch()),
        }
    }
}

fn check_prime(p: u32) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::NotPrime(p as u64))
    }
}

fn bigint_mod(n: &BigInt, l: u32) -> u32 {
    n.mod_floor(&BigInt::from(l)).to_u32().expect("residue fits")
}

/// Ring morphism from Z[1/p] or Z[1/p, zeta] into a prime-power field:
/// integers reduce mod l, 1/p goes to the inverse of p, zeta goes to
/// `zeta_power(target, 1)`.
pub fn embed(v: &RingValue, target: &RingDescriptor) -> Result<RingValue> {
    let RingDescriptor::PrimeField(pf) = target else {
        return Err(Error::RingIncompatible(format!("embedding target {target} is not a finite field")));
    };
    let f = &pf.field;
    let l = f.p();
    match v {
        RingValue::Rational(r) => {
            if r.p != pf.p {
                return Err(Error::RingMismatch(format!("{v} is over p = {}, target over p = {}", r.p, pf.p)));
            }
            let n = f.from_int(bigint_mod(&r.num, l) as i64);
            Ok(RingValue::Field(f.mul(n, f.pow(pf.p_inv, r.den_exp as u64))))
        }
        RingValue::Cyclotomic(c) => {
            if c.p != pf.p {
                return Err(Error::RingMismatch(format!("{v} is over p = {}, target over p = {}", c.p, pf.p)));
            }
            let zeta = pf.zeta.ok_or(Error::NoRootOfUnity { p: pf.p, ring: target.to_string() })?;
            let mut acc = 0u32;
            let mut z = 1u32;
            for coeff in &c.num {
                let n = f.from_int(bigint_mod(coeff, l) as i64);
                acc = f.add(acc, f.mul(n, z));
                z = f.mul(z, zeta);
            }
            Ok(RingValue::Field(f.mul(acc, f.pow(pf.p_inv, c.den_exp as u64))))
        }
        RingValue::Field(_) => Err(Error::RingIncompatible("value is already a field element".into())),
    }
}

/// The coefficient of 1 in the power basis.
pub fn project_rational(v: &CyclotomicValue) -> RationalZpValue {
    v.project_rational()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(p: u32, num: &[i64], den: u32) -> CyclotomicValue {
        CyclotomicValue::new(p, num.iter().map(|&x| BigInt::from(x)).collect(), den)
    }

    #[test]
    fn cyclotomic_relation_p3() {
        let one_plus_zeta = cyc(3, &[1, 1], 0);
        let zeta = CyclotomicValue::zeta_power(3, 1);
        // zeta + zeta^2 = -1
        assert_eq!(one_plus_zeta.mul(&zeta), cyc(3, &[-1, 0], 0));
        let z3 = zeta.mul(&zeta).mul(&zeta);
        assert_eq!(z3, CyclotomicValue::one(3));
    }

    #[test]
    fn zeta_power_wraps() {
        let z = CyclotomicValue::zeta_power(5, 7);
        assert_eq!(z, cyc(5, &[0, 0, 1, 0], 0));
        assert_eq!(CyclotomicValue::zeta_power(5, 0), CyclotomicValue::one(5));
        assert_eq!(CyclotomicValue::zeta_power(5, 4), cyc(5, &[-1, -1, -1, -1], 0));
        assert_eq!(CyclotomicValue::zeta_power(2, 1), cyc(2, &[-1], 0));
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for p in [2u32, 3, 5, 7] {
            let s = (0..p as i64).fold(CyclotomicValue::zero(p), |acc, j| acc.add(&CyclotomicValue::zeta_power(p, j)));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn roots_of_unity_pairwise_distinct() {
        for p in [3u32, 5, 7] {
            let powers: Vec<_> = (0..p as i64).map(|j| CyclotomicValue::zeta_power(p, j)).collect();
            for i in 0..powers.len() {
                for j in 0..i {
                    assert_ne!(powers[i], powers[j]);
                }
                let next = powers[i].mul(&powers[1]);
                assert_eq!(next, powers[(i + 1) % p as usize]);
            }
        }
    }

    #[test]
    fn halves_add_to_one() {
        let half = RationalZpValue::inv_p_pow(2, 1);
        let s = half.add(&half);
        assert_eq!(s, RationalZpValue::one(2));
        assert_eq!(s.den_exp(), 0);
    }

    #[test]
    fn projection_examples() {
        assert_eq!(cyc(3, &[2, 5], 1).project_rational(), RationalZpValue::new(3, BigInt::from(2), 1));
        assert!(CyclotomicValue::zeta_power(3, 1).project_rational().is_zero());
        let v = cyc(2, &[7], 3);
        assert_eq!(v.project_rational(), RationalZpValue::new(2, BigInt::from(7), 3));
    }

    #[test]
    fn normal_form() {
        let v = cyc(3, &[3, 6], 1);
        assert_eq!(v, cyc(3, &[1, 2], 0));
        let z = cyc(5, &[0, 0, 0, 0], 4);
        assert_eq!(z.den_exp(), 0);
        assert!(z.is_normalized());
        assert_eq!(RationalZpValue::new(2, BigInt::from(4), 3), RationalZpValue::new(2, BigInt::from(1), 1));
    }

    #[test]
    fn prime_field_zeta_is_smallest_order_p_element() {
        // Exhaustive search of F_7 for elements of multiplicative order 3.
        let f7 = FieldSpec::prime(7).unwrap();
        let mut order3: Vec<u32> = (1..7u32).filter(|&x| x * x * x % 7 == 1 && x != 1).collect();
        order3.sort();
        assert_eq!(order3, vec![2, 4]);
        let ring = RingDescriptor::prime_field(3, f7).unwrap();
        assert_eq!(ring.zeta_power(1).unwrap(), RingValue::Field(2));
        assert_eq!(ring.zeta_power(0).unwrap(), RingValue::Field(1));
        assert_eq!(ring.zeta_power(2).unwrap(), RingValue::Field(4));
    }

    #[test]
    fn prime_field_without_root_of_unity() {
        // 3 does not divide 5 - 1.
        let ring = RingDescriptor::prime_field(3, FieldSpec::prime(5).unwrap()).unwrap();
        assert!(matches!(ring.zeta_power(1), Err(Error::NoRootOfUnity { .. })));
        // but F_25 has one: 3 | 24
        let ring = RingDescriptor::prime_field(3, FieldSpec::find(5, 2).unwrap()).unwrap();
        assert!(ring.zeta_power(1).is_ok());
    }

    #[test]
    fn rejects_characteristic_p() {
        assert!(RingDescriptor::prime_field(2, FieldSpec::prime(2).unwrap()).is_err());
        assert!(RingDescriptor::from_selector("fp:2", 2).is_err());
        assert!(RingDescriptor::from_selector("fp:4", 3).is_err());
        assert!(RingDescriptor::from_selector("bogus", 3).is_err());
        assert!(RingDescriptor::from_selector("fp:2:2", 3).is_ok());
    }

    #[test]
    fn embed_examples() {
        let f7 = RingDescriptor::prime_field(2, FieldSpec::prime(7).unwrap()).unwrap();
        let half = RingValue::Rational(RationalZpValue::inv_p_pow(2, 1));
        assert_eq!(embed(&half, &f7).unwrap(), RingValue::Field(4));
        let one = RingValue::Rational(RationalZpValue::one(2));
        assert_eq!(embed(&one, &f7).unwrap(), RingValue::Field(1));

        let f7p3 = RingDescriptor::prime_field(3, FieldSpec::prime(7).unwrap()).unwrap();
        let zeta = RingValue::Cyclotomic(CyclotomicValue::zeta_power(3, 1));
        assert_eq!(embed(&zeta, &f7p3).unwrap(), RingValue::Field(2));
        let f5p3 = RingDescriptor::prime_field(3, FieldSpec::prime(5).unwrap()).unwrap();
        assert!(matches!(embed(&zeta, &f5p3), Err(Error::NoRootOfUnity { .. })));
    }

    #[test]
    fn mixed_ring_operands_rejected() {
        let r = RingDescriptor::cyclotomic(3).unwrap();
        let a = r.one();
        let b = RingValue::Rational(RationalZpValue::one(3));
        assert!(matches!(r.add(&a, &b), Err(Error::RingMismatch(_))));
        let c = RingValue::Cyclotomic(CyclotomicValue::one(5));
        assert!(matches!(r.mul(&a, &c), Err(Error::RingMismatch(_))));
        assert!(r.eq(&a, &a).unwrap());
    }

    #[test]
    fn inverse_of_count() {
        let r = RingDescriptor::cyclotomic(3).unwrap();
        assert_eq!(r.inverse_of_count(9).unwrap(), r.inv_p_pow(2));
        assert!(r.inverse_of_count(6).is_err());
        let f = RingDescriptor::prime_field(2, FieldSpec::prime(5).unwrap()).unwrap();
        assert_eq!(f.inverse_of_count(168).unwrap(), RingValue::Field(2)); // 168 = 3 mod 5
        assert!(f.inverse_of_count(10).is_err());
    }
}
