#![allow(dead_code)]

use hypergeom_padic::arith::{primes_up_to, Prime, Rational};
use hypergeom_padic::classify::AdmissibleTriple;
use hypergeom_padic::hyper::HyperParams;

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// The standing corpus: two worked examples, the Legendre family, and a
/// density-one triple.
pub const CORPUS: [[&str; 3]; 4] = [
    ["1/6", "5/6", "1/5"],
    ["1/5", "1/3", "1/2"],
    ["1/2", "1/2", "1"],
    ["1/2", "1/3", "1/5"],
];

pub fn gauss(t: [&str; 3]) -> HyperParams {
    HyperParams::gauss(q(t[0]), q(t[1]), q(t[2])).unwrap()
}

pub fn corpus() -> Vec<HyperParams> {
    CORPUS.iter().map(|&t| gauss(t)).collect()
}

pub fn admissible_corpus() -> Vec<AdmissibleTriple> {
    CORPUS
        .iter()
        .filter_map(|t| AdmissibleTriple::new(q(t[0]), q(t[1]), q(t[2])).ok())
        .collect()
}

pub fn good_primes(params: &HyperParams, limit: u64) -> Vec<Prime> {
    primes_up_to(limit).filter(|&p| params.is_good_prime(p)).collect()
}

/// Primes where the carry formula applies: every `x - 1` is `p`-integral.
pub fn formula_primes(params: &HyperParams, limit: u64) -> Vec<Prime> {
    primes_up_to(limit)
        .filter(|&p| params.valuation_formula(p).is_ok())
        .collect()
}

/// Random admissible triple with every denominator dividing `d`.
pub fn admissible_from(d: i64, ka: i64, kb: i64, kc: i64) -> Option<AdmissibleTriple> {
    let f = |k: i64| Rational::new(k, d).unwrap();
    AdmissibleTriple::new(f(ka), f(kb), f(kc)).ok()
}
