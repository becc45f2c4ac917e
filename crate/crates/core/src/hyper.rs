//! Parameters of `nF(n-1)`, the exact coefficient oracle, and the carry
//! formula
//!
//! ```text
//! v_p(A_m) = sum_j c_p(alpha_j - 1, m) - sum_k c_p(beta_k - 1, m)
//! ```
//!
//! valid whenever every `alpha_j - 1` and `beta_k - 1` lies in `Z_(p)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{multiplicative_order, Prime, Rational, Valuation};
use crate::error::{Error, Result};
use crate::padic::{base_digits, carries_with_digits, expand, CarryCount, PAdicExpansion};

/// Rational parameters `(alpha_1..alpha_n; beta_1..beta_{n-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HyperParams {
    alphas: Vec<Rational>,
    betas: Vec<Rational>,
}

impl HyperParams {
    /// Fails if the shape is wrong or some `beta_k` is a non-positive
    /// integer (a pole of the series).
    pub fn new(alphas: Vec<Rational>, betas: Vec<Rational>) -> Result<HyperParams> {
        if alphas.is_empty() || betas.len() + 1 != alphas.len() {
            return Err(Error::WrongShape {
                expected: betas.len() + 1,
                got: alphas.len(),
            });
        }
        if let Some(pole) = betas
            .iter()
            .find(|b| b.is_integer() && !(b.numer() > &BigInt::zero()))
        {
            return Err(Error::LowerParameterPole(pole.to_string()));
        }
        Ok(HyperParams { alphas, betas })
    }

    /// `2F1(a, b; c)`.
    pub fn gauss(a: Rational, b: Rational, c: Rational) -> Result<HyperParams> {
        HyperParams::new(vec![a, b], vec![c])
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alphas
    }

    pub fn betas(&self) -> &[Rational] {
        &self.betas
    }

    /// `n` in `nF(n-1)`.
    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    /// All parameters strictly inside `(0, 1)` and no `alpha_j = beta_k`.
    pub fn is_admissible(&self) -> bool {
        self.admissibility_failure().is_none()
    }

    fn admissibility_failure(&self) -> Option<String> {
        let zero = Rational::zero();
        let one = Rational::one();
        if let Some(x) = self
            .alphas
            .iter()
            .chain(&self.betas)
            .find(|x| **x <= zero || **x >= one)
        {
            return Some(format!("{x} is not strictly between 0 and 1"));
        }
        for a in &self.alphas {
            if self.betas.contains(a) {
                return Some(format!("{a} is both an upper and a lower parameter"));
            }
        }
        None
    }

    /// Each `x - 1` paired with `+1` for upper and `-1` for lower parameters.
    fn shifted(&self) -> impl Iterator<Item = (Rational, i64)> + '_ {
        let one = Rational::one();
        self.alphas
            .iter()
            .map(move |a| (a - &Rational::one(), 1))
            .chain(self.betas.iter().map(move |b| (b - &one, -1)))
    }

    /// `v_p(x - 1) = 0` for every parameter `x`.
    pub fn is_good_prime(&self, p: Prime) -> bool {
        self.shifted()
            .all(|(x, _)| x.valuation(p) == Valuation::Finite(0))
    }

    fn require_good(&self, p: Prime) -> Result<()> {
        if self.is_good_prime(p) {
            Ok(())
        } else {
            Err(Error::NotGoodPrime {
                p: p.get(),
                params: self.to_string(),
            })
        }
    }

    /// lcm over the parameters of the order of `p` modulo `denom(x - 1)`.
    pub fn period(&self, p: Prime) -> Result<u64> {
        self.require_good(p)?;
        let mut m = 1u64;
        for (x, _) in self.shifted() {
            let d = x.denom_u64().expect("parameter denominators fit in u64");
            m = m.lcm(&multiplicative_order(p.get(), d)?);
        }
        Ok(m)
    }

    /// `A_0, ..., A_{m_max}` by the recurrence
    /// `A_{m+1} = A_m prod(alpha_j + m) / (prod(beta_k + m) (m + 1))`.
    pub fn coefficient_oracle(&self, m_max: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(m_max + 1);
        let mut a = Rational::one();
        out.push(a.clone());
        for m in 0..m_max {
            let shift = Rational::from_integer(m as i64);
            let up = self
                .alphas
                .iter()
                .fold(Rational::one(), |acc, x| acc * (x + &shift));
            let down = self
                .betas
                .iter()
                .fold(Rational::from_integer(m as i64 + 1), |acc, x| acc * (x + &shift));
            a = a * up / down;
            out.push(a.clone());
        }
        out
    }

    /// `v_p(A_0), ..., v_p(A_{m_max})` accumulated from the valuations of
    /// the recurrence factors. Works at every prime, good or not, and never
    /// forms the coefficients themselves.
    pub fn factor_valuations(&self, p: Prime, m_max: usize) -> Vec<Valuation> {
        let small = |x: &Rational| Some((x.numer().to_i128()?, x.denom().to_i128()?));
        let uppers: Option<Vec<_>> = self.alphas.iter().map(small).collect();
        let lowers: Option<Vec<_>> = self.betas.iter().map(small).collect();
        let (Some(uppers), Some(lowers)) = (uppers, lowers) else {
            return self.factor_valuations_big(p, m_max);
        };
        let p = p.get() as i128;
        let val = |mut n: i128| {
            let mut v = 0i64;
            while n % p == 0 {
                n /= p;
                v += 1;
            }
            v
        };
        // v_p(n/d + m) = v_p(n + m d) - v_p(d); None for a zero factor.
        let factor = |&(n, d): &(i128, i128), m: i128| {
            let top = n + m * d;
            (top != 0).then(|| val(top) - val(d))
        };
        let mut out = Vec::with_capacity(m_max + 1);
        let mut v = Valuation::Finite(0);
        out.push(v);
        for m in 0..m_max as i128 {
            if let Valuation::Finite(acc) = v {
                let mut next = acc - val(m + 1);
                let mut vanished = false;
                for x in &uppers {
                    match factor(x, m) {
                        Some(k) => next += k,
                        None => vanished = true,
                    }
                }
                for x in &lowers {
                    next -= factor(x, m).expect("beta is not a pole");
                }
                v = if vanished {
                    Valuation::Infinity
                } else {
                    Valuation::Finite(next)
                };
            }
            out.push(v);
        }
        out
    }

    fn factor_valuations_big(&self, p: Prime, m_max: usize) -> Vec<Valuation> {
        let mut out = Vec::with_capacity(m_max + 1);
        let mut v = Valuation::Finite(0);
        out.push(v);
        for m in 0..m_max {
            let shift = Rational::from_integer(m as i64);
            let step = self
                .alphas
                .iter()
                .map(|a| (a + &shift).valuation(p))
                .fold(Valuation::Finite(0), |acc, k| acc + k);
            v = match (v, step) {
                (Valuation::Finite(acc), Valuation::Finite(up)) => {
                    let down: i64 = self
                        .betas
                        .iter()
                        .map(|b| (b + &shift).valuation(p).finite().expect("beta is not a pole"))
                        .sum();
                    let fact = Rational::from_integer(m as i64 + 1).valuation(p).finite().unwrap();
                    Valuation::Finite(acc + up - down - fact)
                }
                _ => Valuation::Infinity,
            };
            out.push(v);
        }
        out
    }

    /// The carry formula at `p`. Requires `v_p(x - 1) >= 0` for every
    /// parameter; goodness is not needed.
    pub fn valuation_formula(&self, p: Prime) -> Result<KummerFormula> {
        let mut terms = Vec::with_capacity(2 * self.order() - 1);
        for (x, sign) in self.shifted() {
            if !x.is_p_integral(p) {
                return Err(Error::FormulaHypothesis {
                    x: (&x + &Rational::one()).to_string(),
                    p: p.get(),
                });
            }
            terms.push((expand(&x, p)?, sign));
        }
        Ok(KummerFormula { prime: p, terms })
    }

    /// `v_p(A_m)` by the carry formula.
    pub fn coeff_valuation(&self, p: Prime, m: &BigUint) -> Result<Valuation> {
        Ok(self.valuation_formula(p)?.at(m))
    }

    /// `v_p(A_m)` for `m = 0..=m_max` by the carry formula.
    pub fn valuation_profile(&self, p: Prime, m_max: u64) -> Result<ValuationProfile> {
        let formula = self.valuation_formula(p)?;
        let entries = (0..=m_max)
            .map(|m| (m, formula.at(&BigUint::from(m))))
            .collect();
        Ok(ValuationProfile { prime: p, entries })
    }
}

impl fmt::Display for HyperParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Rational]| {
            xs.iter()
                .map(Rational::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "({};{})", join(&self.alphas), join(&self.betas))
    }
}

/// Parameters known to be admissible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct AdmissibleParams(HyperParams);

impl AdmissibleParams {
    pub fn params(&self) -> &HyperParams {
        &self.0
    }

    /// `N_r = p^(Mr) - p^(M(r-1)) - ... - p^M - 1` and `v_p(A_{N_r})`,
    /// which should come out as exactly `M r`.
    pub fn sup_witness(&self, p: Prime, r: u32) -> Result<(BigUint, Valuation)> {
        let period = self.0.period(p)? as usize;
        let step = p.big().pow(period);
        let mut n = step.clone().pow(r);
        let mut block = BigUint::one();
        for _ in 0..r {
            n -= &block;
            block *= &step;
        }
        let v = self.0.coeff_valuation(p, &n)?;
        Ok((n, v))
    }
}

impl TryFrom<HyperParams> for AdmissibleParams {
    type Error = Error;

    fn try_from(params: HyperParams) -> Result<AdmissibleParams> {
        match params.admissibility_failure() {
            None => Ok(AdmissibleParams(params)),
            Some(why) => Err(Error::NotAdmissible(why)),
        }
    }
}

impl std::ops::Deref for AdmissibleParams {
    type Target = HyperParams;

    fn deref(&self) -> &HyperParams {
        &self.0
    }
}

impl fmt::Display for AdmissibleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Expansions of every `x - 1` at one prime, ready to evaluate `v_p(A_m)`.
#[derive(Clone, Debug)]
pub struct KummerFormula {
    prime: Prime,
    terms: Vec<(PAdicExpansion, i64)>,
}

impl KummerFormula {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn at(&self, m: &BigUint) -> Valuation {
        let digits = base_digits(m, self.prime);
        let mut total = 0i64;
        for (x, sign) in &self.terms {
            match carries_with_digits(x, &digits, m) {
                CarryCount::Finite(c) => total += sign * c as i64,
                // Only an upper parameter in Z_{<=0} can do this: A_m = 0.
                CarryCount::Infinite => return Valuation::Infinity,
            }
        }
        Valuation::Finite(total)
    }
}

/// Fractional-part shift of `(a, b; c)` to admissible parameters. The shift
/// preserves the set of unbounded primes provided none of `a, b, c, a - c,
/// b - c` is an integer.
pub fn normalize_shift(a: &Rational, b: &Rational, c: &Rational) -> Result<AdmissibleParams> {
    let checks: [(&'static str, Rational); 5] = [
        ("a", a.clone()),
        ("b", b.clone()),
        ("c", c.clone()),
        ("a-c", a - c),
        ("b-c", b - c),
    ];
    if let Some((name, _)) = checks.iter().find(|(_, x)| x.is_integer()) {
        return Err(Error::IntegralShift(name));
    }
    AdmissibleParams::try_from(HyperParams::gauss(a.fract(), b.fract(), c.fract())?)
}

/// `-(n-1) L <= v <= n L` with `L = floor(log_p m) + 1` the number of base-`p`
/// digits of `m`, the carry-count form of the logarithmic bound. Needs `m >= 1`.
pub fn within_log_bounds(n: usize, p: Prime, m: &BigUint, v: i64) -> bool {
    let len = base_digits(m, p).len() as i64;
    -(n as i64 - 1) * len <= v && v <= n as i64 * len
}

/// `v_p(A_m)` for a run of `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationProfile {
    pub prime: Prime,
    pub entries: Vec<(u64, Valuation)>,
}

impl ValuationProfile {
    /// CSV with header `m,v`; an infinite valuation prints as `inf`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["m", "v"]).unwrap();
        for (m, v) in &self.entries {
            w.write_record([m.to_string(), v.to_string()]).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    /// JSON array of `[m, v]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.entries).unwrap()
    }

    pub fn min(&self) -> Option<Valuation> {
        self.entries.iter().map(|(_, v)| *v).min()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn gauss(a: &str, b: &str, c: &str) -> HyperParams {
        HyperParams::gauss(q(a), q(b), q(c)).unwrap()
    }

    #[test]
    fn admissibility() {
        assert!(gauss("1/6", "5/6", "1/5").is_admissible());
        assert!(!gauss("1/2", "1/2", "1").is_admissible());
        assert!(gauss("1/5", "1/3", "1/2").is_admissible());
        assert!(!gauss("1/5", "1/3", "1/5").is_admissible());
        assert!(matches!(
            HyperParams::gauss(q("1/2"), q("1/2"), q("-2")),
            Err(Error::LowerParameterPole(_))
        ));
        assert!(HyperParams::gauss(q("1/2"), q("1/2"), q("0")).is_err());
        assert!(HyperParams::new(vec![q("1/2")], vec![q("1/3")]).is_err());
    }

    #[test]
    fn good_primes_and_period() {
        let p = gauss("1/6", "5/6", "1/5");
        assert!(p.is_good_prime(prime(7)));
        assert!(!p.is_good_prime(prime(5)));
        assert!(!p.is_good_prime(prime(3)));
        assert_eq!(p.period(prime(7)).unwrap(), 4);
        assert_eq!(gauss("1/5", "1/3", "1/2").period(prime(7)).unwrap(), 4);
        assert_eq!(gauss("1/2", "1/2", "1/2").period(prime(3)).unwrap(), 1);
        assert!(p.period(prime(5)).is_err());
    }

    #[test]
    fn oracle_values() {
        let legendre = gauss("1/2", "1/2", "1").coefficient_oracle(2);
        assert_eq!(legendre[0], Rational::one());
        assert_eq!(legendre[2], q("9/64"));
        assert_eq!(gauss("1/6", "5/6", "1/5").coefficient_oracle(1)[1], q("25/36"));
        assert_eq!(gauss("1/5", "1/3", "1/2").coefficient_oracle(1)[1], q("2/15"));
    }

    #[test]
    fn formula_values() {
        let m = |k: u32| BigUint::from(k);
        let legendre = gauss("1/2", "1/2", "1");
        assert_eq!(legendre.coeff_valuation(prime(3), &m(2)).unwrap(), Valuation::Finite(2));
        assert_eq!(legendre.coeff_valuation(prime(3), &m(0)).unwrap(), Valuation::Finite(0));
        let g = gauss("1/5", "1/3", "1/2");
        assert_eq!(g.coeff_valuation(prime(17), &m(1)).unwrap(), Valuation::Finite(0));
        // 1/5 - 1 = -4/5 has negative 5-adic valuation.
        assert!(matches!(
            g.coeff_valuation(prime(5), &m(3)),
            Err(Error::FormulaHypothesis { .. })
        ));
        // An upper parameter in Z_{<=0} truncates the series.
        let poly = gauss("-2", "1/2", "1/3");
        assert_eq!(poly.coeff_valuation(prime(5), &m(3)).unwrap(), Valuation::Infinity);
        assert_eq!(poly.factor_valuations(prime(5), 3)[3], Valuation::Infinity);
    }

    #[test]
    fn sup_witness_small() {
        let g = AdmissibleParams::try_from(gauss("1/5", "1/3", "1/2")).unwrap();
        let (n, v) = g.sup_witness(prime(7), 1).unwrap();
        assert_eq!(n, BigUint::from(2400u32));
        assert_eq!(v, Valuation::Finite(4));
        let (n, v) = g.sup_witness(prime(7), 2).unwrap();
        assert_eq!(n, BigUint::from(7u64.pow(8) - 7u64.pow(4) - 1));
        assert_eq!(v, Valuation::Finite(8));
        assert!(AdmissibleParams::try_from(gauss("1/2", "1/2", "1")).is_err());
    }

    #[test]
    fn shifts() {
        let n = normalize_shift(&q("7/6"), &q("5/6"), &q("6/5")).unwrap();
        assert_eq!(n.params(), &gauss("1/6", "5/6", "1/5"));
        let n = normalize_shift(&q("-1/6"), &q("1/6"), &q("1/2")).unwrap();
        assert_eq!(n.params(), &gauss("5/6", "1/6", "1/2"));
        assert_eq!(
            normalize_shift(&q("1/2"), &q("3/2"), &q("1")),
            Err(Error::IntegralShift("c"))
        );
        assert_eq!(
            normalize_shift(&q("1/2"), &q("1/3"), &q("3/2")),
            Err(Error::IntegralShift("a-c"))
        );
    }

    #[test]
    fn log_bounds() {
        let p = prime(3);
        assert!(within_log_bounds(2, p, &BigUint::from(9u32), 6));
        assert!(!within_log_bounds(2, p, &BigUint::from(8u32), 5));
        assert!(within_log_bounds(2, p, &BigUint::from(8u32), -2));
        assert!(!within_log_bounds(2, p, &BigUint::from(8u32), -3));

        // v_7(A_2) = 1 exceeds 2 log_7(2) but not 2 * (one digit).
        let params = gauss("1/6", "5/6", "1/5");
        let v = params.coeff_valuation(prime(7), &BigUint::from(2u32)).unwrap();
        assert_eq!(v, Valuation::Finite(1));
        assert!(7u32.pow(1) > 2u32.pow(2));
        assert!(within_log_bounds(2, prime(7), &BigUint::from(2u32), 1));
    }

    #[test]
    fn profile_serialization() {
        let profile = gauss("1/2", "1/2", "1").valuation_profile(prime(3), 3).unwrap();
        assert_eq!(profile.to_csv(), "m,v\n0,0\n1,0\n2,2\n3,0\n");
        assert_eq!(profile.to_json().to_string(), "[[0,0],[1,0],[2,2],[3,0]]");
    }
}
