mod common;

use common::{corpus, formula_primes, gauss, good_primes, q};
use hypergeom_padic::arith::Valuation;
use hypergeom_padic::classify::{classify_prime, unbounded_witnesses, AdmissibleTriple, Verdict};
use hypergeom_padic::hyper::{normalize_shift, within_log_bounds, AdmissibleParams};
use num_bigint::BigUint;

#[test]
fn formula_matches_factor_oracle() {
    for params in corpus() {
        for p in formula_primes(&params, 50) {
            let oracle = params.factor_valuations(p, 3000);
            let profile = params.valuation_profile(p, 3000).unwrap();
            for (m, v) in &profile.entries {
                assert_eq!(*v, oracle[*m as usize], "{params} at {p}, m={m}");
            }
        }
    }
}

#[test]
fn valuation_bounds() {
    for params in corpus() {
        let n = params.order();
        for p in formula_primes(&params, 50) {
            let profile = params.valuation_profile(p, 2000).unwrap();
            for (m, v) in profile.entries.iter().skip(1) {
                let v = v.finite().unwrap();
                assert!(within_log_bounds(n, p, &BigUint::from(*m), v), "{params} at {p}, m={m}, v={v}");
            }
        }
    }
}

#[test]
fn sup_witness_across_corpus() {
    for params in corpus() {
        let Ok(adm) = AdmissibleParams::try_from(params.clone()) else {
            continue;
        };
        for p in good_primes(&params, 30) {
            let m = adm.period(p).unwrap() as i64;
            for r in 1..=5u32 {
                let (_, v) = adm.sup_witness(p, r).unwrap();
                assert_eq!(v, Valuation::Finite(m * r as i64), "{params} at {p}, r={r}");
            }
        }
    }
}

/// Integer shifts preserve boundedness. Unbounded: along the witnesses of
/// the normalized triple the shifted series falls by one per step. Bounded:
/// the shifted series stays within a fixed distance of zero.
#[test]
fn shift_preserves_boundedness() {
    let shifted = [
        ["7/6", "-1/6", "6/5"],
        ["-4/5", "4/3", "3/2"],
        ["6/5", "-2/3", "-1/2"],
        ["5/2", "1/3", "-4/5"],
    ];
    for t in shifted {
        let params = gauss(t);
        let norm = normalize_shift(&q(t[0]), &q(t[1]), &q(t[2])).unwrap();
        let triple = AdmissibleTriple::from_params(norm.clone()).unwrap();
        for p in good_primes(&norm, 50) {
            match classify_prime(&triple, p).verdict {
                Verdict::Unbounded { .. } => {
                    let w = unbounded_witnesses(&triple, p, 5).unwrap();
                    let vs: Vec<i64> = w
                        .witnesses
                        .iter()
                        .map(|w| params.coeff_valuation(p, &w.m).unwrap().finite().unwrap())
                        .collect();
                    assert!(vs.windows(2).all(|s| s[1] == s[0] - 1), "{params} at {p}: {vs:?}");
                    assert!(vs[5] <= -4, "{params} at {p}: {vs:?}");
                }
                Verdict::BoundedIntegral => {
                    let low = params.factor_valuations(p, 2000).into_iter().min().unwrap();
                    assert!(low >= Valuation::Finite(-3), "{params} at {p}: {low}");
                }
                Verdict::NotGood => unreachable!(),
            }
        }
    }
}

#[test]
fn shift_rejects_integral_differences() {
    assert!(normalize_shift(&q("1/2"), &q("1/3"), &q("3/2")).is_err());
    assert!(normalize_shift(&q("2"), &q("1/3"), &q("1/2")).is_err());
}
