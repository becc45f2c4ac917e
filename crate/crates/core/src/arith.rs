//! Exact rationals and the small amount of elementary number theory the rest
//! of the crate leans on: primality, valuations, multiplicative orders and
//! unit groups modulo `D`.
//!
//! Nothing here touches floating point.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `n/d` in lowest terms. Fails only on `d = 0`.
    pub fn new(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let d = d.into();
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(n.into(), d)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Denominator as a machine integer, for the modular arithmetic on
    /// residues that only ever involves small parameter denominators.
    pub fn denom_u64(&self) -> Option<u64> {
        self.denom().to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `{x} = x - floor(x)`, always in `[0, 1)`.
    pub fn fract(&self) -> Rational {
        Rational(&self.0 - self.0.floor())
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational> {
        Rational::one().checked_div(self)
    }

    /// Exponent of `p` in the factorization of `self`.
    pub fn valuation(&self, p: Prime) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinity;
        }
        let up = bigint_valuation(self.numer(), p.get());
        let down = bigint_valuation(self.denom(), p.get());
        Valuation::Finite(up as i64 - down as i64)
    }

    /// True when `p` does not divide the denominator.
    pub fn is_p_integral(&self, p: Prime) -> bool {
        !(self.denom() % p.get()).is_zero()
    }
}

fn bigint_valuation(n: &BigInt, p: u64) -> u64 {
    let mut m = n.magnitude().clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&BigUint::from(p));
        if !r.is_zero() || m.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// `make_rational`: reduced canonical fraction `n/d`.
pub fn make_rational(n: i64, d: i64) -> Result<Rational> {
    Rational::new(n, d)
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `n` or `n/d` with an optional leading `-`; no whitespace, no `+`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |position: usize| Error::Parse {
            text: text.to_string(),
            position,
        };
        let (num_text, den_text) = match text.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (text, None),
        };
        let digits_start = usize::from(num_text.starts_with('-'));
        let num_digits = &num_text[digits_start..];
        if num_digits.is_empty() {
            return Err(bad(digits_start));
        }
        if let Some(i) = num_digits.bytes().position(|b| !b.is_ascii_digit()) {
            return Err(bad(digits_start + i));
        }
        let mut numer: BigInt = num_digits.parse().map_err(|_| bad(digits_start))?;
        if digits_start == 1 {
            numer = -numer;
        }
        let denom: BigInt = match den_text {
            None => BigInt::one(),
            Some(d) => {
                let offset = num_text.len() + 1;
                if d.is_empty() {
                    return Err(bad(offset));
                }
                if let Some(i) = d.bytes().position(|b| !b.is_ascii_digit()) {
                    return Err(bad(offset + i));
                }
                d.parse().map_err(|_| bad(offset))?
            }
        };
        Rational::new(numer, denom)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as for the primitive types; use `checked_div`
// where the divisor is not known to be nonzero.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// A p-adic valuation: an integer, or `+inf` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinity
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_i64(*v),
            Valuation::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// `valuation(x, p)`: rejects composite `p`.
pub fn valuation(x: &Rational, p: u64) -> Result<Valuation> {
    Ok(x.valuation(Prime::new(p)?))
}

/// A rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigUint {
        BigUint::from(self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1;
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

/// Inverse of `a` modulo `m`, if it exists.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin; these bases are exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
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

/// Primes in increasing order, starting at the least prime `>= from`.
pub fn primes_from(from: u64) -> impl Iterator<Item = Prime> {
    (from..).filter(|&n| is_prime(n)).map(Prime)
}

/// Primes `<= limit`.
pub fn primes_up_to(limit: u64) -> impl Iterator<Item = Prime> {
    primes_from(2).take_while(move |p| p.get() <= limit)
}

/// Primes `q > after` with `q = residue (mod modulus)`, by trial division
/// over the progression.
pub fn primes_in_class(residue: u64, modulus: u64, after: u64) -> impl Iterator<Item = Prime> {
    let modulus = modulus.max(1);
    let residue = residue % modulus;
    let start = after + 1;
    let first = start + (residue + modulus - start % modulus) % modulus;
    (0u64..)
        .map(move |k| first + k * modulus)
        .filter(|&n| is_prime(n))
        .map(Prime)
}

/// Least `M >= 1` with `base^M = 1 (mod modulus)`; 1 when `modulus = 1`.
pub fn multiplicative_order(base: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 || base.gcd(&modulus) != 1 {
        return Err(Error::NotCoprime { base, modulus });
    }
    if modulus == 1 {
        return Ok(1);
    }
    let b = base % modulus;
    let mut x = b;
    let mut order = 1;
    while x != 1 {
        x = mul_mod(x, b, modulus);
        order += 1;
    }
    Ok(order)
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            while m.is_multiple_of(q) {
                m /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// `v_p(n!)` by Legendre's formula.
pub fn factorial_valuation(n: &BigUint, p: Prime) -> BigUint {
    let p = p.big();
    let mut total = BigUint::zero();
    let mut q = n / &p;
    while !q.is_zero() {
        total += &q;
        q /= &p;
    }
    total
}

/// The units of `Z/DZ` in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitGroup {
    modulus: u64,
    units: Vec<u64>,
}

impl UnitGroup {
    /// For `D = 1` the group has a single class, represented by residue 0.
    pub fn new(modulus: u64) -> UnitGroup {
        assert!(modulus >= 1, "unit group modulus must be positive");
        let units = if modulus == 1 {
            vec![0]
        } else {
            (1..modulus).filter(|u| u.gcd(&modulus) == 1).collect()
        };
        UnitGroup { modulus, units }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn units(&self) -> &[u64] {
        &self.units
    }

    /// `phi(D)`.
    pub fn order(&self) -> u64 {
        self.units.len() as u64
    }

    /// The cyclic subgroup generated by `u`, starting from `u` itself.
    pub fn cyclic_subgroup(&self, u: u64) -> Vec<u64> {
        if self.modulus == 1 {
            return vec![0];
        }
        let mut out = vec![u % self.modulus];
        let mut x = mul_mod(u, u, self.modulus);
        while x != out[0] {
            out.push(x);
            x = mul_mod(x, u, self.modulus);
        }
        out
    }
}

pub fn unit_group(modulus: u64) -> UnitGroup {
    UnitGroup::new(modulus)
}

/// Least common multiple of the denominators of `xs`.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
