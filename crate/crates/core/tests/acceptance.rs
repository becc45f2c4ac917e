//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{admissible_corpus, admissible_from, corpus, formula_primes, gauss, good_primes, prime, q};
use hypergeom_padic::arith::{primes_in_class, primes_up_to, unit_group, Rational, Valuation};
use hypergeom_padic::classify::{
    classify_prime, density_by_group, density_by_sampling, is_finite_monodromy, is_full_density,
    propagate, unbounded_witnesses, AdmissibleTriple, Verdict,
};
use hypergeom_padic::hyper::AdmissibleParams;
use hypergeom_padic::padic::{binom_valuation, binom_valuation_by_product, carries, expand, CarryCount};
use hypergeom_padic::schwarz::{certify_finite, essential_pairs, verify_table};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn triple(a: &str, b: &str, c: &str) -> AdmissibleTriple {
    AdmissibleTriple::new(q(a), q(b), q(c)).unwrap()
}

fn kummer_equivalence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let primes = [2u64, 3, 5, 7, 11, 13];
    let mut done = 0;
    while done < 1000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let den: i64 = rng.gen_range(1..=500);
        if (den as u64).is_multiple_of(p) {
            continue;
        }
        let x = Rational::new(rng.gen_range(-1500i64..=1500), den).unwrap();
        let n: u64 = rng.gen_range(0..=300);
        let top = &x - &Rational::one();
        let lhs = binom_valuation(&top, &BigUint::from(n), prime(p)).unwrap();
        let rhs = binom_valuation_by_product(&top, n, prime(p)).unwrap();
        ensure!(lhs == rhs, "x={x}, n={n}, p={p}: carries {lhs} vs product {rhs}");
        done += 1;
    }
    Ok("1000 samples".into())
}

fn formula_vs_oracle() -> Result<String, String> {
    let mut checked = 0;
    for params in corpus() {
        let coeffs = params.coefficient_oracle(1000);
        for p in formula_primes(&params, 50) {
            let profile = params.valuation_profile(p, 1000).unwrap();
            for (m, v) in &profile.entries {
                let exact = coeffs[*m as usize].valuation(p);
                ensure!(exact == *v, "{params} at {p}, m={m}: formula {v} vs exact {exact}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} coefficients"))
}

fn residue_class_list() -> Result<String, String> {
    let t = triple("1/5", "1/3", "1/2");
    let mut count = 0;
    for p in primes_up_to(5000).filter(|p| p.get() >= 7) {
        let v = classify_prime(&t, p).verdict;
        if v == Verdict::NotGood {
            continue;
        }
        let listed = [2, 8, 14].contains(&(p.get() % 15));
        ensure!(v.is_unbounded() == listed, "p={p}: {}", v.name());
        count += 1;
    }
    let s = density_by_sampling(&t).unwrap().density;
    let g = density_by_group(&t).unwrap().density;
    ensure!(s == q("3/8") && g == q("3/8"), "density {s} / {g}");
    Ok(format!("{count} good primes, density 3/8"))
}

fn finite_monodromy_example() -> Result<String, String> {
    let t = triple("1/6", "5/6", "1/5");
    for p in primes_up_to(5000) {
        let v = classify_prime(&t, p).verdict;
        ensure!(!v.is_unbounded(), "p={p} unbounded");
    }
    ensure!(is_finite_monodromy(&t), "not interlacing");
    ensure!(density_by_sampling(&t).unwrap().density.is_zero(), "sampling density nonzero");
    ensure!(density_by_group(&t).unwrap().density.is_zero(), "group density nonzero");
    let coeffs = t.params().coefficient_oracle(2000);
    for p in [7, 11, 13] {
        for (m, a) in coeffs.iter().enumerate() {
            ensure!(a.valuation(prime(p)) >= Valuation::Finite(0), "v_{p}(A_{m}) < 0");
        }
    }
    Ok("bounded to 5000, density 0, integral at 7, 11, 13".into())
}

fn legendre_identity() -> Result<String, String> {
    let params = gauss(["1/2", "1/2", "1"]);
    let coeffs = params.coefficient_oracle(1000);
    let mut count = 0;
    for p in primes_up_to(100).filter(|p| p.get() > 2) {
        let half = expand(&q("-1/2"), p).unwrap();
        for (m, a) in coeffs.iter().enumerate() {
            let c = match carries(&half, &BigUint::from(m)) {
                CarryCount::Finite(c) => c as i64,
                CarryCount::Infinite => return Err(format!("infinite carries at p={p}, m={m}")),
            };
            let v = a.valuation(p);
            ensure!(v == Valuation::Finite(2 * c), "p={p}, m={m}: {v} vs 2*{c}");
        }
        count += 1;
    }
    Ok(format!("{count} odd primes"))
}

fn periodicity() -> Result<String, String> {
    let mut count = 0;
    for t in admissible_corpus() {
        let params = t.params();
        for p in good_primes(params, 50) {
            let formula = params.valuation_formula(p).unwrap();
            let step = p.big().pow(params.period(p).unwrap() as u32);
            for m in 0..=200u32 {
                let m = BigUint::from(m);
                let (lhs, rhs) = (formula.at(&(&m * &step)), formula.at(&m));
                ensure!(lhs == rhs, "{params} at {p}, m={m}: {lhs} vs {rhs}");
            }
            count += 1;
        }
    }
    Ok(format!("{count} (params, prime) pairs"))
}

fn sup_witness() -> Result<String, String> {
    let mut count = 0;
    for t in admissible_corpus() {
        let params: &AdmissibleParams = t.params();
        for p in [7, 11].map(prime).into_iter().filter(|&p| params.is_good_prime(p)) {
            let m = params.period(p).unwrap() as i64;
            for r in 1..=5u32 {
                let (_, v) = params.sup_witness(p, r).unwrap();
                ensure!(v == Valuation::Finite(m * r as i64), "{params} at {p}, r={r}: {v}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} witnesses"))
}

fn unbounded_witness_bound() -> Result<String, String> {
    let t = triple("1/5", "1/3", "1/2");
    for p in [17, 23, 47].map(prime) {
        let w = unbounded_witnesses(&t, p, 4).map_err(|e| format!("p={p}: {e}"))?;
        for x in &w.witnesses {
            ensure!(x.meets_bound(), "p={p}, r={}: v={}", x.r, x.valuation);
        }
    }
    Ok("p = 17, 23, 47; r <= 4".into())
}

fn method_agreement() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut done = 0;
    while done < 100 {
        let d = rng.gen_range(2..=60);
        let [a, b, c] = [0; 3].map(|_| rng.gen_range(1..d));
        let Some(t) = admissible_from(d, a, b, c) else {
            continue;
        };
        let s = density_by_sampling(&t).map_err(|e| e.to_string())?;
        let g = density_by_group(&t).map_err(|e| e.to_string())?;
        let vs: Vec<_> = s.classes.iter().map(|c| (c.u, c.verdict)).collect();
        let vg: Vec<_> = g.classes.iter().map(|c| (c.u, c.verdict)).collect();
        ensure!(vs == vg, "({}, {}; {}) disagrees", t.a(), t.b(), t.c());
        done += 1;
    }
    Ok("100 random triples".into())
}

fn density_one() -> Result<String, String> {
    let t = triple("1/2", "1/3", "1/5");
    let (full, bound) = is_full_density(&t);
    ensure!(full && bound == Some(q("15/2")), "full density {full}, bound {bound:?}");
    let mut count = 0;
    for p in primes_up_to(5000).filter(|p| p.get() >= 8) {
        let v = classify_prime(&t, p).verdict;
        if v != Verdict::NotGood {
            ensure!(v.is_unbounded(), "p={p}: {}", v.name());
            count += 1;
        }
    }
    ensure!(density_by_sampling(&t).unwrap().density == Rational::one(), "sampling density");
    ensure!(density_by_group(&t).unwrap().density == Rational::one(), "group density");
    Ok(format!("{count} good primes above 15/2, density 1"))
}

fn schwarz_list() -> Result<String, String> {
    let report = verify_table().map_err(|e| e.to_string())?;
    ensure!(report.rows == 54, "{} rows", report.rows);
    let pairs = essential_pairs();
    ensure!(pairs.len() == 9, "{} pairs", pairs.len());
    for pair in &pairs {
        let cert = certify_finite(pair, 1000).map_err(|e| e.to_string())?;
        ensure!(cert.is_finite(), "{pair} not certified");
        ensure!(cert.triples.iter().all(|t| t.density.is_zero()), "{pair} density");
    }
    Ok("54 rows, 9 pairs, all density 0".into())
}

fn propagation() -> Result<String, String> {
    let t = triple("1/5", "1/3", "1/2");
    for &u in unit_group(30).units() {
        let v: Vec<_> = primes_in_class(u, 30, 30)
            .filter(|&p| t.params().is_good_prime(p))
            .take(2)
            .map(|p| classify_prime(&t, p))
            .collect();
        ensure!(
            v[0].verdict.is_unbounded() == v[1].verdict.is_unbounded(),
            "class {u}: {} at {} vs {} at {}",
            v[0].verdict.name(), v[0].prime, v[1].verdict.name(), v[1].prime
        );
    }
    let claim = propagate(&t, &classify_prime(&t, prime(47))).map_err(|e| e.to_string())?;
    ensure!(
        claim.sample(&t, 5).iter().all(|c| c.verdict.is_unbounded()),
        "a sampled prime after 47 is bounded"
    );
    Ok("8 classes agree; 47 propagates".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 12] = [
        ("Kummer equivalence", kummer_equivalence),
        ("valuation formula vs exact coefficients", formula_vs_oracle),
        ("class list 2, 8, 14 mod 15", residue_class_list),
        ("finite monodromy (1/6,5/6;1/5)", finite_monodromy_example),
        ("Legendre identity", legendre_identity),
        ("periodicity", periodicity),
        ("sup witness", sup_witness),
        ("unbounded witnesses", unbounded_witness_bound),
        ("sampling vs group densities", method_agreement),
        ("density one (1/2,1/3;1/5)", density_one),
        ("Schwarz list", schwarz_list),
        ("propagation mod 30", propagation),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
