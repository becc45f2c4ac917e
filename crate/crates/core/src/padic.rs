//! Base-`p` digit expansions of elements of `Z_(p)`, truncations, carry
//! counting, and Kummer's valuation of binomial polynomials.
//!
//! Every rational with `p`-free denominator has an eventually periodic
//! expansion `x = sum x_i p^i`. We keep it as a preperiod followed by a
//! repeating block, both of minimal length.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factorial_valuation, inverse_mod, multiplicative_order, Prime, Rational, Valuation};
use crate::error::{Error, Result};

/// A canonical eventually periodic `p`-adic expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicExpansion {
    prime: Prime,
    preperiod: Vec<u64>,
    period: Vec<u64>,
    value: Rational,
}

impl PAdicExpansion {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// The digit at position `i` (coefficient of `p^i`).
    pub fn digit(&self, i: usize) -> u64 {
        match i.checked_sub(self.preperiod.len()) {
            None => self.preperiod[i],
            Some(k) => self.period[k % self.period.len()],
        }
    }

    pub fn digits(&self) -> impl Iterator<Item = u64> + '_ {
        (0..).map(|i| self.digit(i))
    }

    /// Rebuilds the value from the digits:
    /// `sum pre_i p^i + p^L * y / (1 - p^M)` with `y` the integer whose
    /// base-`p` digits are the period.
    pub fn reconstruct(&self) -> Rational {
        let p = BigInt::from(self.prime.get());
        let head = digits_to_int(&self.preperiod, &p);
        let block = digits_to_int(&self.period, &p);
        let shift = p.clone().pow(self.preperiod.len());
        let cycle = BigInt::one() - p.pow(self.period.len());
        Rational::from_integer(head) + Rational::new(shift * block, cycle).expect("p^M > 1")
    }
}

fn digits_to_int(digits: &[u64], p: &BigInt) -> BigInt {
    digits
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &d| acc * p + BigInt::from(d))
}

fn join_digits(digits: &[u64]) -> String {
    digits
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for PAdicExpansion {
    /// `x @ p = pre|(period)`, least significant digit first; the `pre|`
    /// part is omitted for purely periodic expansions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {} = ", self.value, self.prime)?;
        if !self.preperiod.is_empty() {
            write!(f, "{}|", join_digits(&self.preperiod))?;
        }
        write!(f, "({})", join_digits(&self.period))
    }
}

fn require_integral(x: &Rational, p: Prime) -> Result<()> {
    if x.is_p_integral(p) {
        Ok(())
    } else {
        Err(Error::NotPIntegral {
            x: x.to_string(),
            p: p.get(),
        })
    }
}

/// `x mod p` for `x` in `Z_(p)`.
fn first_digit(x: &Rational, p: u64) -> u64 {
    let n = x.numer().mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let d = x.denom().mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let inv = inverse_mod(d, p).expect("denominator is a unit mod p");
    ((n as u128 * inv as u128) % p as u128) as u64
}

/// Digit extraction `x_0 = tau_1(x)`, `x <- (x - x_0)/p`, stopping at the
/// first repeated state. The state after `i` steps is the value of the
/// digit tail from position `i`, so the first repeat gives the minimal
/// preperiod and period.
pub fn expand(x: &Rational, p: Prime) -> Result<PAdicExpansion> {
    require_integral(x, p)?;
    let p_rat = Rational::from_integer(p.get());
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut state = x.clone();
    loop {
        if let Some(&start) = seen.get(&state) {
            let period = digits.split_off(start);
            return Ok(PAdicExpansion {
                prime: p,
                preperiod: digits,
                period,
                value: x.clone(),
            });
        }
        seen.insert(state.clone(), digits.len());
        let d = first_digit(&state, p.get());
        digits.push(d);
        state = (state - Rational::from_integer(d)) / &p_rat;
    }
}

/// The `j`-th digit of the purely periodic expansion of `x - 1`, read off as
/// `floor({-p^(M-1-j) x} p)` without extracting digits. Requires `0 < x < 1`
/// and `x - 1` a `p`-adic unit; `M` is the order of `p` mod `denom(x)`.
pub fn digit_closed_form(x: &Rational, p: Prime, j: usize) -> Result<u64> {
    let shifted = x - Rational::one();
    let in_unit_interval = !x.is_negative() && !x.is_zero() && shifted.is_negative();
    let unit = shifted.is_p_integral(p) && !(shifted.numer() % p.get()).is_zero();
    if !in_unit_interval || !unit {
        return Err(Error::DigitPrecondition {
            x: x.to_string(),
            p: p.get(),
        });
    }
    let d = x.denom();
    let d_small = d.to_u64().ok_or_else(|| Error::DigitPrecondition {
        x: x.to_string(),
        p: p.get(),
    })?;
    let period = multiplicative_order(p.get(), d_small)? as usize;
    if j >= period {
        return Err(Error::IndexOutOfRange { index: j, period });
    }
    let shift = BigInt::from(p.get()).modpow(&BigInt::from(period - 1 - j), d);
    let r = (-(x.numer() * shift)).mod_floor(d);
    Ok((r * p.get() / d).to_u64().expect("digit below p"))
}

/// `tau_j(x)`: the representative of `x mod p^j` in `[0, p^j)`.
pub fn truncate(x: &Rational, p: Prime, j: usize) -> Result<BigUint> {
    require_integral(x, p)?;
    let modulus = BigInt::from(p.get()).pow(j);
    if modulus.is_one() {
        return Ok(BigUint::zero());
    }
    let inv = x.denom().extended_gcd(&modulus).x;
    let r = (x.numer() * inv).mod_floor(&modulus);
    Ok(r.to_biguint().expect("nonnegative residue"))
}

/// Number of carries in a base-`p` addition; infinite when the carry never
/// dies out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CarryCount {
    Finite(u64),
    Infinite,
}

impl CarryCount {
    pub fn finite(self) -> Option<u64> {
        match self {
            CarryCount::Finite(c) => Some(c),
            CarryCount::Infinite => None,
        }
    }
}

impl From<CarryCount> for Valuation {
    fn from(c: CarryCount) -> Valuation {
        match c {
            CarryCount::Finite(c) => Valuation::Finite(c as i64),
            CarryCount::Infinite => Valuation::Infinity,
        }
    }
}

/// Base-`p` digits of `n`, least significant first.
pub fn base_digits(n: &BigUint, p: Prime) -> Vec<u64> {
    let base = p.big();
    let mut rest = n.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&base);
        out.push(r.to_u64().expect("digit below p"));
        rest = q;
    }
    out
}

/// `c_p(x, n)`: carries when adding the nonnegative integer `n` to `x`.
pub fn carries(x: &PAdicExpansion, n: &BigUint) -> CarryCount {
    carries_with_digits(x, &base_digits(n, x.prime), n)
}

/// As [`carries`] with the digits of `n` precomputed; the valuation formula
/// evaluates several parameters against the same `n`.
pub(crate) fn carries_with_digits(x: &PAdicExpansion, n_digits: &[u64], n: &BigUint) -> CarryCount {
    let value = x.value();
    if value.is_integer() && value.is_negative() {
        let magnitude = value.numer().abs().to_biguint().unwrap();
        if &magnitude <= n {
            return CarryCount::Infinite;
        }
    }
    let p = x.prime.get();
    let mut count = 0;
    let mut carry = 0;
    for (i, &nd) in n_digits.iter().enumerate() {
        let s = x.digit(i) + nd + carry;
        carry = u64::from(s >= p);
        count += carry;
    }
    // Past the top digit of n only a pending carry can continue, and only
    // through digits equal to p-1. A full period of p-1 beyond the preperiod
    // would make x a negative integer in the infinite case excluded above.
    let limit = n_digits.len() + x.preperiod.len() + x.period.len();
    let mut i = n_digits.len();
    while carry == 1 && x.digit(i) == p - 1 {
        count += 1;
        i += 1;
        if i > limit {
            return CarryCount::Infinite;
        }
    }
    CarryCount::Finite(count)
}

/// `v_p` of the binomial polynomial `C(x+n, n)` via Kummer's carry count.
pub fn binom_valuation(x: &Rational, n: &BigUint, p: Prime) -> Result<Valuation> {
    Ok(carries(&expand(x, p)?, n).into())
}

/// The same valuation by brute force:
/// `sum_{i=1..n} v_p(x+i) - v_p(n!)`, with Legendre's formula for `n!`.
pub fn binom_valuation_by_product(x: &Rational, n: u64, p: Prime) -> Result<Valuation> {
    require_integral(x, p)?;
    let mut total = 0i64;
    for i in 1..=n {
        match (x + Rational::from_integer(i)).valuation(p) {
            Valuation::Finite(v) => total += v,
            Valuation::Infinity => return Ok(Valuation::Infinity),
        }
    }
    let fact = factorial_valuation(&BigUint::from(n), p).to_i64().unwrap();
    Ok(Valuation::Finite(total - fact))
}
