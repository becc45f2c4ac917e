//! The `2F1` boundedness criterion and everything built on it.
//!
//! For admissible `(a, b; c)` and a good prime `p`, the coefficients are
//! p-adically unbounded exactly when some truncation of `c - 1` strictly
//! exceeds the truncations of both `a - 1` and `b - 1`. Above the common
//! denominator `D` the verdict depends only on `p mod D`, which gives the
//! set of unbounded primes a Dirichlet density `alpha / phi(D)`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{primes_in_class, primes_up_to, unit_group, Prime, Rational, Valuation};
use crate::error::{Error, Result};
use crate::hyper::{AdmissibleParams, HyperParams};
use crate::padic::{expand, PAdicExpansion};

/// Admissible `2F1` parameters `(a, b; c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleTriple {
    params: AdmissibleParams,
    modulus: u64,
}

impl AdmissibleTriple {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<AdmissibleTriple> {
        AdmissibleTriple::from_params(AdmissibleParams::try_from(HyperParams::gauss(a, b, c)?)?)
    }

    pub fn from_params(params: AdmissibleParams) -> Result<AdmissibleTriple> {
        if params.order() != 2 {
            return Err(Error::WrongShape {
                expected: 2,
                got: params.order(),
            });
        }
        let modulus = crate::arith::common_denominator(params.alphas().iter().chain(params.betas()))
            .to_u64()
            .expect("parameter denominators fit in u64");
        Ok(AdmissibleTriple { params, modulus })
    }

    pub fn a(&self) -> &Rational {
        &self.params.alphas()[0]
    }

    pub fn b(&self) -> &Rational {
        &self.params.alphas()[1]
    }

    pub fn c(&self) -> &Rational {
        &self.params.betas()[0]
    }

    pub fn params(&self) -> &AdmissibleParams {
        &self.params
    }

    /// `D`, the lcm of the denominators of `a`, `b`, `c`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn shifted_expansions(&self, p: Prime) -> [PAdicExpansion; 3] {
        let one = Rational::one();
        [self.a(), self.b(), self.c()].map(|x| expand(&(x - &one), p).expect("good prime"))
    }
}

impl fmt::Display for AdmissibleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.params.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    /// `witness_index` is the least `j` with `tau_j(c-1) > tau_j(a-1), tau_j(b-1)`.
    Unbounded { witness_index: usize },
    BoundedIntegral,
    NotGood,
}

impl Verdict {
    pub fn is_unbounded(self) -> bool {
        matches!(self, Verdict::Unbounded { .. })
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Unbounded { .. } => "Unbounded",
            Verdict::BoundedIntegral => "BoundedIntegral",
            Verdict::NotGood => "NotGood",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeClassification {
    pub prime: Prime,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// Decides boundedness at `p` by comparing truncations for `j` in `1..=2M`.
///
/// All three digit streams are purely periodic with period dividing `M`, and
/// distinct streams differ somewhere in every window of `M` positions, so the
/// outcome of each comparison is periodic in `j` once `j >= M`.
pub fn classify_prime(triple: &AdmissibleTriple, p: Prime) -> PrimeClassification {
    let verdict = match triple.params.period(p) {
        Err(_) => Verdict::NotGood,
        Ok(period) => {
            let [a, b, c] = triple.shifted_expansions(p);
            let mut tau = [BigUint::zero(), BigUint::zero(), BigUint::zero()];
            let mut place = BigUint::one();
            let mut verdict = Verdict::BoundedIntegral;
            for j in 1..=2 * period as usize {
                for (t, x) in tau.iter_mut().zip([&a, &b, &c]) {
                    *t += &place * x.digit(j - 1);
                }
                place *= p.get();
                if tau[2] > tau[0] && tau[2] > tau[1] {
                    verdict = Verdict::Unbounded { witness_index: j };
                    break;
                }
            }
            verdict
        }
    };
    PrimeClassification { prime: p, verdict }
}

/// Which construction produced the witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum WitnessCase {
    /// `c_{j-1}` beats both other digits.
    Single,
    /// `c` ties one parameter on positions `start..j` and beats it at `start - 1`.
    Run { start: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub r: u32,
    #[serde(serialize_with = "as_decimal")]
    pub m: BigUint,
    pub valuation: Valuation,
}

impl Witness {
    /// `v_p(A_{m_r}) <= -(r + 1)`.
    pub fn meets_bound(&self) -> bool {
        match self.valuation {
            Valuation::Finite(v) => v < -(self.r as i64),
            Valuation::Infinity => false,
        }
    }
}

fn as_decimal<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnboundedWitnesses {
    pub prime: Prime,
    pub period: u64,
    pub witness_index: usize,
    #[serde(flatten)]
    pub case: WitnessCase,
    pub witnesses: Vec<Witness>,
}

/// The indices `m_0, ..., m_r_max` along which `v_p(A_m)` drops below
/// `-(r + 1)`, each checked with the carry formula.
pub fn unbounded_witnesses(
    triple: &AdmissibleTriple,
    p: Prime,
    r_max: u32,
) -> Result<UnboundedWitnesses> {
    let j = match classify_prime(triple, p).verdict {
        Verdict::Unbounded { witness_index } => witness_index,
        Verdict::NotGood => {
            return Err(Error::NotGoodPrime {
                p: p.get(),
                params: triple.to_string(),
            })
        }
        Verdict::BoundedIntegral => {
            return Err(Error::BoundedPrime {
                p: p.get(),
                params: triple.to_string(),
            })
        }
    };
    let period = triple.params.period(p)?;
    let [a, b, c] = triple.shifted_expansions(p);
    let top = j - 1;
    let pp = p.get();

    // One block of digits of m, repeated every M positions.
    let (case, block) = if c.digit(top) > a.digit(top) && c.digit(top) > b.digit(top) {
        let block = BigUint::from(pp - c.digit(top)) * p.big().pow(top as u32);
        (WitnessCase::Single, block)
    } else {
        // By minimality of j, c ties exactly one of a, b at the top digit
        // and beats the other one there.
        let tied = if c.digit(top) == a.digit(top) { &a } else { &b };
        let mut low = top;
        while c.digit(low) == tied.digit(low) {
            low -= 1;
        }
        let start = low + 1;
        let mut block = BigUint::from(pp - c.digit(low)) * p.big().pow(low as u32);
        for i in start..=top {
            block += BigUint::from(pp - c.digit(i) - 1) * p.big().pow(i as u32);
        }
        (WitnessCase::Run { start }, block)
    };

    let formula = triple.params.valuation_formula(p)?;
    let stride = p.big().pow(period as u32);
    let mut m = BigUint::zero();
    let mut shift = BigUint::one();
    let mut witnesses = Vec::with_capacity(r_max as usize + 1);
    for r in 0..=r_max {
        m += &block * &shift;
        shift *= &stride;
        witnesses.push(Witness {
            r,
            valuation: formula.at(&m),
            m: m.clone(),
        });
    }
    Ok(UnboundedWitnesses {
        prime: p,
        period,
        witness_index: j,
        case,
        witnesses,
    })
}

/// "Every prime `q >= p` with `q = p (mod D)` is unbounded."
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropagationClaim {
    pub params: String,
    pub prime: Prime,
    pub modulus: u64,
    pub residue: u64,
}

impl PropagationClaim {
    /// Classifies the next `count` primes of the progression after `prime`.
    pub fn sample(&self, triple: &AdmissibleTriple, count: usize) -> Vec<PrimeClassification> {
        primes_in_class(self.residue, self.modulus, self.prime.get())
            .take(count)
            .map(|q| classify_prime(triple, q))
            .collect()
    }
}

/// Lifts an unbounded verdict at a prime `p > D` to its whole residue class.
pub fn propagate(
    triple: &AdmissibleTriple,
    classification: &PrimeClassification,
) -> Result<PropagationClaim> {
    let p = classification.prime;
    let modulus = triple.modulus();
    if p.get() <= modulus {
        return Err(Error::PrimeTooSmall {
            p: p.get(),
            modulus,
        });
    }
    if !classify_prime(triple, p).verdict.is_unbounded() || !classification.verdict.is_unbounded() {
        return Err(Error::BoundedPrime {
            p: p.get(),
            params: triple.to_string(),
        });
    }
    Ok(PropagationClaim {
        params: triple.to_string(),
        prime: p,
        modulus,
        residue: p.get() % modulus,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassOutcome {
    EventuallyUnbounded,
    EventuallyBounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub u: u64,
    pub prime: Prime,
    pub verdict: ClassOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    #[serde(rename = "D")]
    pub modulus: u64,
    pub phi: u64,
    pub classes: Vec<ClassVerdict>,
    pub density: Rational,
    /// Largest prime examined while assigning class verdicts.
    pub threshold: u64,
    /// Good primes `p <= D`, classified one by one and kept out of the density.
    pub small_primes: Vec<PrimeClassification>,
}

impl DensityReport {
    fn assemble(triple: &AdmissibleTriple, classes: Vec<ClassVerdict>) -> DensityReport {
        let modulus = triple.modulus();
        let phi = classes.len() as u64;
        let unbounded = classes
            .iter()
            .filter(|c| c.verdict == ClassOutcome::EventuallyUnbounded)
            .count();
        let threshold = classes.iter().map(|c| c.prime.get()).max().unwrap_or(modulus);
        let small_primes = primes_up_to(modulus)
            .map(|p| classify_prime(triple, p))
            .filter(|c| c.verdict != Verdict::NotGood)
            .collect();
        DensityReport {
            modulus,
            phi,
            classes,
            density: Rational::new(unbounded as i64, phi as i64).expect("phi >= 1"),
            threshold,
            small_primes,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap()
    }

    /// One row per class: `u,prime,verdict`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["u", "prime", "verdict"]).unwrap();
        for c in &self.classes {
            w.write_record([c.u.to_string(), c.prime.to_string(), format!("{:?}", c.verdict)])
                .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn unbounded_residues(&self) -> Vec<u64> {
        self.classes
            .iter()
            .filter(|c| c.verdict == ClassOutcome::EventuallyUnbounded)
            .map(|c| c.u)
            .collect()
    }
}

/// Primes examined per class before giving up.
pub const SEARCH_CAP: u64 = 1_000_000;

/// `min_{0<=j<M} min_{x != y} |{-p^(M-1-j) x} - {-p^(M-1-j) y}|` over
/// distinct `x, y` in `{a, b, c}`. Depends on `p` only through `p mod D`.
pub fn digit_separation(triple: &AdmissibleTriple, p: Prime) -> Result<Rational> {
    let period = triple.params.period(p)?;
    let d = triple.modulus();
    let xs = [triple.a(), triple.b(), triple.c()];
    let mut best: Option<Rational> = None;
    let mut w = 1u64;
    for _ in 0..period {
        let wq = Rational::from_integer(w as i64);
        let fr: Vec<Rational> = xs.iter().map(|x| (-(&wq * *x)).fract()).collect();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if xs[i] == xs[j] {
                continue;
            }
            let gap = (&fr[i] - &fr[j]).abs();
            if best.as_ref().is_none_or(|b| gap < *b) {
                best = Some(gap);
            }
        }
        w = crate::arith::mul_mod(w, p.get() % d, d);
    }
    Ok(best.expect("period >= 1"))
}

/// Density by classifying one prime per unit class: the least good prime
/// `p > D` in the class with `1/p` below [`digit_separation`].
pub fn density_by_sampling(triple: &AdmissibleTriple) -> Result<DensityReport> {
    let d = triple.modulus();
    let mut classes = Vec::new();
    for &u in unit_group(d).units() {
        let prime = primes_in_class(u, d, d)
            .take_while(|p| p.get() <= SEARCH_CAP)
            .find(|&p| {
                triple.params.is_good_prime(p)
                    && digit_separation(triple, p)
                        .map(|gap| gap * Rational::from_integer(p.get() as i64) > Rational::one())
                        .unwrap_or(false)
            })
            .ok_or(Error::SearchExhausted {
                residue: u,
                modulus: d,
                cap: SEARCH_CAP,
            })?;
        let verdict = if classify_prime(triple, prime).verdict.is_unbounded() {
            ClassOutcome::EventuallyUnbounded
        } else {
            ClassOutcome::EventuallyBounded
        };
        classes.push(ClassVerdict { u, prime, verdict });
    }
    Ok(DensityReport::assemble(triple, classes))
}

fn frac_times(w: u64, x: &Rational) -> Rational {
    (Rational::from_integer(w as i64) * x).fract()
}

/// Density from the unit group alone: class `u` is unbounded iff some `w`
/// in `<u>` has `{wc} < {wa}` and `{wc} < {wb}`.
pub fn density_by_group(triple: &AdmissibleTriple) -> Result<DensityReport> {
    let d = triple.modulus();
    let group = unit_group(d);
    let mut classes = Vec::new();
    for &u in group.units() {
        let unbounded = group.cyclic_subgroup(u).into_iter().any(|w| {
            let wc = frac_times(w, triple.c());
            wc < frac_times(w, triple.a()) && wc < frac_times(w, triple.b())
        });
        let prime = primes_in_class(u, d, d)
            .take_while(|p| p.get() <= SEARCH_CAP)
            .next()
            .ok_or(Error::SearchExhausted {
                residue: u,
                modulus: d,
                cap: SEARCH_CAP,
            })?;
        let verdict = if unbounded {
            ClassOutcome::EventuallyUnbounded
        } else {
            ClassOutcome::EventuallyBounded
        };
        classes.push(ClassVerdict { u, prime, verdict });
    }
    Ok(DensityReport::assemble(triple, classes))
}

/// Interlacing: for every unit `u mod D`, `{uc}` lies strictly between
/// `{ua}` and `{ub}`. Equivalent to finite monodromy and to finitely many
/// unbounded primes.
pub fn is_finite_monodromy(triple: &AdmissibleTriple) -> bool {
    unit_group(triple.modulus()).units().iter().all(|&u| {
        let (ua, ub, uc) = (
            frac_times(u, triple.a()),
            frac_times(u, triple.b()),
            frac_times(u, triple.c()),
        );
        (ua < uc && uc < ub) || (ub < uc && uc < ua)
    })
}

/// `c < a` and `c < b`; then every good prime above
/// `max(1/(a-c), 1/(b-c))` is unbounded.
pub fn is_full_density(triple: &AdmissibleTriple) -> (bool, Option<Rational>) {
    let (a, b, c) = (triple.a(), triple.b(), triple.c());
    if c < a && c < b {
        let bound = (a - c).recip().unwrap().max((b - c).recip().unwrap());
        (true, Some(bound))
    } else {
        (false, None)
    }
}
