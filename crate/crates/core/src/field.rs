//! Exact scalar fields: residues modulo a prime and arbitrary-precision rationals.
//!
//! Elements are plain values; all arithmetic goes through a [`Field`] context so
//! that matrices over different fields cannot be mixed by construction.

use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::Error;
use crate::linalg::Matrix;

/// A prime just below 2^31 (the Mersenne prime 2^31 - 1).
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Environment variable consulted by [`PrimeField::from_env`].
pub const PRIME_ENV_VAR: &str = "WARING_PRIME";

pub trait Field: Copy + Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Maps an exact rational into the field; fails when the denominator is not invertible.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, Error>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, Error>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Canonical string form of an element (decimal or `num/den`).
    fn format(&self, a: &Self::Elem) -> String;

    /// Short descriptor: `rational` or `prime:<p>`.
    fn describe(&self) -> String;

    fn is_prime_field(&self) -> bool;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Error> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn from_u64(&self, v: u64) -> Self::Elem {
        match i64::try_from(v) {
            Ok(s) => self.from_i64(s),
            Err(_) => {
                let q = BigRational::from_integer(BigInt::from(v));
                self.from_rational(&q).expect("integers always embed")
            }
        }
    }

    /// Rank of a matrix over this field. Rationals override this with a
    /// fraction-free elimination.
    fn rank(&self, m: &Matrix<Self>) -> usize {
        m.rref().pivots.len()
    }
}

/// Integers modulo an odd prime `p < 2^32`, so that products fit in `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, Error> {
        if p <= 3 || p >= (1 << 32) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Self { p })
    }

    /// The field for [`DEFAULT_PRIME`], or for the prime named by `WARING_PRIME`.
    pub fn from_env() -> Result<Self, Error> {
        match std::env::var(PRIME_ENV_VAR) {
            Ok(s) => {
                let p = s.trim().parse::<u64>().map_err(|_| Error::Parse {
                    field: PRIME_ENV_VAR.to_string(),
                    message: format!("not an integer: {s:?}"),
                })?;
                Self::new(p)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Uniform element of the field.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    /// Uniform nonzero element of the field.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_PRIME }
    }
}

impl Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn from_rational(&self, q: &BigRational) -> Result<u64, Error> {
        let p = BigInt::from(self.p);
        let num = q.numer().mod_floor(&p).to_u64().unwrap();
        let den = q.denom().mod_floor(&p).to_u64().unwrap();
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul(&num, &self.inv(&den)?))
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Result<u64, Error> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i64) as u64)
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn describe(&self) -> String {
        format!("prime:{}", self.p)
    }

    fn is_prime_field(&self) -> bool {
        true
    }
}

/// The rational numbers, with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rational(&self, q: &BigRational) -> Result<BigRational, Error> {
        Ok(q.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational, Error> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }

    fn describe(&self) -> String {
        "rational".to_string()
    }

    fn is_prime_field(&self) -> bool {
        false
    }

    fn rank(&self, m: &Matrix<Self>) -> usize {
        crate::linalg::bareiss_rank(m)
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses an exact scalar: an optionally signed integer or `num/den`.
/// Anything else (decimals, exponents, whitespace inside) is rejected.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    fn parse_int(t: &str, allow_sign: bool) -> Result<BigInt, String> {
        let (neg, digits) = match t.as_bytes().first() {
            Some(b'-') if allow_sign => (true, &t[1..]),
            Some(b'+') if allow_sign => (false, &t[1..]),
            _ => (false, t),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("not an exact scalar: {t:?}"));
        }
        let v = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(|| format!("bad integer {t:?}"))?;
        Ok(if neg { -v } else { v })
    }
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s, true)?)),
        Some((num, den)) => {
            let num = parse_int(num, true)?;
            let den = parse_int(den, false)?;
            if den.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

/// Clears the denominators of a rational row, returning primitive integers.
pub(crate) fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}
