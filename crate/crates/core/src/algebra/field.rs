//! Exact coefficient fields.
//!
//! Every algorithm in this crate is generic over [`Field`]. Two
//! implementations ship with the crate: arbitrary-precision rationals
//! ([`Rational`]) and residues modulo a word-sized odd prime ([`Fp`]).
//!
//! A field may need runtime data to build its constants (the modulus of
//! `F_p`), so constructors take a [`Field::Ctx`] descriptor. Containers
//! (polynomials, series, programs) carry the descriptor and compare it to
//! detect field mismatches.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// An exact commutative field.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// Runtime description of the field (unit for `Q`, the modulus for `F_p`).
    type Ctx: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;
    /// `num / den` embedded in the field, or `None` when `den` vanishes there.
    fn from_ratio(ctx: &Self::Ctx, num: &BigInt, den: &BigInt) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    /// Whether the canonical rendering starts with a minus sign.
    fn is_negative(&self) -> bool {
        false
    }

    /// Returns `len` slots where slot `k` is the sum of `a[i] * b[j]` over
    /// the triples `(i, j, k)`. Series products funnel through here so a
    /// field can defer normalization.
    fn sum_products(ctx: &Self::Ctx, a: &[&Self], b: &[&Self], triples: &[(u32, u32, u32)], len: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(ctx); len];
        for &(i, j, k) in triples {
            let slot = &mut out[k as usize];
            let acc = std::mem::replace(slot, Self::zero(ctx));
            *slot = acc + a[i as usize].clone() * b[j as usize];
        }
        out
    }
}

impl Field for Rational {
    type Ctx = RationalField;

    fn ctx(&self) -> RationalField {
        RationalField
    }

    fn zero(_: &RationalField) -> Self {
        Zero::zero()
    }

    fn one(_: &RationalField) -> Self {
        One::one()
    }

    fn from_i64(_: &RationalField, n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_ratio(_: &RationalField, num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(Rational::new(num.clone(), den.clone()))
        }
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    // Integer accumulation over common denominators, one reduction per slot.
    fn sum_products(_: &RationalField, a: &[&Self], b: &[&Self], triples: &[(u32, u32, u32)], len: usize) -> Vec<Self> {
        let (an, ad) = common_denominator(a);
        let (bn, bd) = common_denominator(b);
        let mut acc = vec![BigInt::zero(); len];
        for &(i, j, k) in triples {
            acc[k as usize] += &an[i as usize] * &bn[j as usize];
        }
        let den = ad * bd;
        acc.into_iter().map(|n| Rational::new(n, den.clone())).collect()
    }
}

fn common_denominator(xs: &[&Rational]) -> (Vec<BigInt>, BigInt) {
    let l = xs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let nums = xs.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    (nums, l)
}

/// Descriptor of the rational field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalField;

impl fmt::Display for RationalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("rational")
    }
}

/// An odd prime below 2^63.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, Error> {
        if !(3..1 << 63).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeModulus(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    fn reduce_bigint(self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.0));
        r.to_u64().expect("residue fits in u64")
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fp:{}", self.0)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Residue modulo a prime, always reduced into `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: PrimeModulus,
}

impl Fp {
    pub fn new(value: u64, modulus: PrimeModulus) -> Self {
        Fp {
            value: value % modulus.0,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    /// Reduces a rational number modulo `p`; `None` if `p` divides the denominator.
    pub fn from_rational(r: &Rational, modulus: PrimeModulus) -> Option<Self> {
        Fp::from_ratio(&modulus, r.numer(), r.denom())
    }

    pub fn pow(self, exp: u64) -> Self {
        Fp {
            value: pow_mod(self.value, exp, self.modulus.0),
            modulus: self.modulus,
        }
    }

    fn check(self, other: Fp) -> u64 {
        assert_eq!(
            self.modulus, other.modulus,
            "arithmetic between different prime fields"
        );
        self.modulus.0
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let p = self.check(rhs);
        let s = self.value + rhs.value;
        Fp {
            value: if s >= p { s - p } else { s },
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let p = self.check(rhs);
        Fp {
            value: if self.value >= rhs.value {
                self.value - rhs.value
            } else {
                self.value + p - rhs.value
            },
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let p = self.check(rhs);
        Fp {
            value: mul_mod(self.value, rhs.value, p),
            modulus: self.modulus,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 {
                0
            } else {
                self.modulus.0 - self.value
            },
            modulus: self.modulus,
        }
    }
}

impl<'a> Add<&'a Fp> for Fp {
    type Output = Fp;
    fn add(self, rhs: &'a Fp) -> Fp {
        self + *rhs
    }
}

impl<'a> Sub<&'a Fp> for Fp {
    type Output = Fp;
    fn sub(self, rhs: &'a Fp) -> Fp {
        self - *rhs
    }
}

impl<'a> Mul<&'a Fp> for Fp {
    type Output = Fp;
    fn mul(self, rhs: &'a Fp) -> Fp {
        self * *rhs
    }
}

impl Field for Fp {
    type Ctx = PrimeModulus;

    fn ctx(&self) -> PrimeModulus {
        self.modulus
    }

    fn zero(ctx: &PrimeModulus) -> Self {
        Fp::new(0, *ctx)
    }

    fn one(ctx: &PrimeModulus) -> Self {
        Fp::new(1, *ctx)
    }

    fn from_i64(ctx: &PrimeModulus, n: i64) -> Self {
        let p = ctx.0 as i128;
        Fp::new((n as i128).rem_euclid(p) as u64, *ctx)
    }

    fn from_ratio(ctx: &PrimeModulus, num: &BigInt, den: &BigInt) -> Option<Self> {
        let d = Fp::new(ctx.reduce_bigint(den), *ctx).inv()?;
        Some(Fp::new(ctx.reduce_bigint(num), *ctx) * d)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn is_one(&self) -> bool {
        self.value == 1
    }

    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(Fp {
                value: pow_mod(self.value, self.modulus.0 - 2, self.modulus.0),
                modulus: self.modulus,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn primality() {
        let primes = [3u64, 5, 7, 101, 32003, 1_000_000_007, 2_305_843_009_213_693_951];
        for p in primes {
            assert!(PrimeModulus::new(p).is_ok(), "{p}");
        }
        for n in [0u64, 1, 2, 4, 9, 561, 1_000_000_008, 3_215_031_751] {
            assert!(PrimeModulus::new(n).is_err(), "{n}");
        }
    }

    #[test]
    fn rational_lowest_terms() {
        let r = Rational::from_ratio(&RationalField, &BigInt::from(6), &BigInt::from(-4)).unwrap();
        assert_eq!(r, q(-3, 2));
        assert_eq!(*r.denom(), BigInt::from(2));
        assert!(Rational::from_ratio(&RationalField, &BigInt::from(1), &BigInt::zero()).is_none());
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(q(4, 2).to_string(), "2");
    }

    #[test]
    fn prime_field_ops() {
        let p = PrimeModulus::new(7).unwrap();
        let a = Fp::from_i64(&p, -1);
        assert_eq!(a.value(), 6);
        assert_eq!((a + Fp::new(3, p)).value(), 2);
        assert_eq!((Fp::new(2, p) - Fp::new(5, p)).value(), 4);
        assert_eq!((Fp::new(3, p) * Fp::new(5, p)).value(), 1);
        assert_eq!(Fp::new(3, p).inv().unwrap().value(), 5);
        assert!(Fp::zero(&p).inv().is_none());
        assert_eq!((-Fp::new(0, p)).value(), 0);
        assert_eq!(Fp::new(3, p).pow(6).value(), 1);
    }

    #[test]
    fn rational_reduction_mod_p() {
        let p = PrimeModulus::new(101).unwrap();
        let r = q(-1, 3);
        let x = Fp::from_rational(&r, p).unwrap();
        assert_eq!((x * Fp::new(3, p)).value(), 100);
        assert!(Fp::from_rational(&q(1, 101), p).is_none());
    }

    #[test]
    fn large_modulus_does_not_overflow() {
        let p = PrimeModulus::new(2_305_843_009_213_693_951).unwrap();
        let a = Fp::from_i64(&p, -2);
        let b = a * a;
        assert_eq!(b.value(), 4);
        assert_eq!((a + a).value(), p.get() - 4);
    }
}
