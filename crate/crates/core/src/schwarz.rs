//! The level-one modular Schwarz list: the 54 irreducible two-dimensional
//! representations of `SL_2(Z)` with finite image, grouped into five orbits
//! under twisting by characters.
//!
//! Each row records the exponents `m1, m2` of the eigenvalues of `rho(T)`,
//! the level `N`, the minimal weight `k0` and the hypergeometric parameters
//! `a = 1/12 + (m1 - m2)/2`, `b = 1/12 - (m1 - m2)/2` (with `c = 2/3`
//! throughout). The tables are data; we check them against the formula and
//! certify that every series they produce has finitely many unbounded
//! primes.

use std::fmt;

use serde::Serialize;

use crate::arith::{primes_up_to, Prime, Rational, Valuation};
use crate::classify::{classify_prime, density_by_group, is_finite_monodromy, AdmissibleTriple, ClassVerdict, Verdict};
use crate::error::{Error, Result};
use crate::hyper::normalize_shift;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Orbit {
    Dihedral,
    Tetrahedral,
    Octahedral,
    Icosahedral1,
    Icosahedral2,
}

impl Orbit {
    pub const ALL: [Orbit; 5] = [
        Orbit::Dihedral,
        Orbit::Tetrahedral,
        Orbit::Octahedral,
        Orbit::Icosahedral1,
        Orbit::Icosahedral2,
    ];
}

/// `(m1, m2, N, k0, a, b)` as printed.
type RawRow = (&'static str, &'static str, u64, i64, &'static str, &'static str);

const DIHEDRAL: [RawRow; 6] = [
    ("0", "1/2", 2, 2, "-1/6", "1/3"),
    ("1/12", "7/12", 12, 3, "-1/6", "1/3"),
    ("1/6", "2/3", 6, 4, "-1/6", "1/3"),
    ("1/4", "3/4", 4, 5, "-1/6", "1/3"),
    ("1/3", "5/6", 6, 6, "-1/6", "1/3"),
    ("5/12", "11/12", 12, 7, "-1/6", "1/3"),
];

const TETRAHEDRAL: [RawRow; 12] = [
    ("0", "2/3", 3, 3, "-1/4", "5/12"),
    ("1/12", "3/4", 12, 4, "-1/4", "5/12"),
    ("1/6", "5/6", 6, 5, "-1/4", "5/12"),
    ("1/4", "11/12", 12, 6, "-1/4", "5/12"),
    ("1/3", "0", 3, 1, "1/4", "-1/12"),
    ("5/12", "1/12", 12, 2, "1/4", "-1/12"),
    ("1/2", "1/6", 6, 3, "1/4", "-1/12"),
    ("7/12", "1/4", 12, 4, "1/4", "-1/12"),
    ("2/3", "1/3", 3, 5, "1/4", "-1/12"),
    ("3/4", "5/12", 12, 6, "1/4", "-1/12"),
    ("5/6", "1/2", 6, 7, "1/4", "-1/12"),
    ("11/12", "7/12", 12, 8, "1/4", "-1/12"),
];

const OCTAHEDRAL: [RawRow; 12] = [
    ("1/24", "19/24", 24, 4, "-7/24", "11/24"),
    ("1/8", "7/8", 8, 5, "-7/24", "11/24"),
    ("5/24", "23/24", 24, 6, "-7/24", "11/24"),
    ("7/24", "1/24", 24, 1, "5/24", "-1/24"),
    ("3/8", "1/8", 8, 2, "5/24", "-1/24"),
    ("11/24", "5/24", 24, 3, "5/24", "-1/24"),
    ("13/24", "7/24", 24, 4, "5/24", "-1/24"),
    ("5/8", "3/8", 8, 5, "5/24", "-1/24"),
    ("17/24", "11/24", 24, 6, "5/24", "-1/24"),
    ("19/24", "13/24", 24, 7, "5/24", "-1/24"),
    ("7/8", "5/8", 8, 8, "5/24", "-1/24"),
    ("23/24", "17/24", 24, 9, "5/24", "-1/24"),
];

const ICOSAHEDRAL_1: [RawRow; 12] = [
    ("1/30", "19/30", 30, 3, "-13/60", "23/60"),
    ("7/60", "43/60", 60, 4, "-13/60", "23/60"),
    ("1/5", "4/5", 5, 5, "-13/60", "23/60"),
    ("17/60", "53/60", 24, 6, "-13/60", "23/60"),
    ("11/30", "29/30", 30, 7, "-13/60", "23/60"),
    ("9/20", "1/20", 20, 2, "17/60", "-7/60"),
    ("8/15", "2/15", 15, 3, "17/60", "-7/60"),
    ("37/60", "13/60", 60, 4, "17/60", "-7/60"),
    ("7/10", "3/10", 10, 5, "17/60", "-7/60"),
    ("47/60", "23/60", 60, 6, "17/60", "-7/60"),
    ("13/15", "7/15", 15, 7, "17/60", "-7/60"),
    ("19/20", "11/20", 20, 8, "17/60", "-7/60"),
];

const ICOSAHEDRAL_2: [RawRow; 12] = [
    ("1/60", "49/60", 60, 4, "-19/60", "29/60"),
    ("1/10", "9/10", 10, 5, "-19/60", "29/60"),
    ("11/60", "59/60", 60, 6, "-19/60", "29/60"),
    ("4/15", "1/15", 15, 1, "11/60", "-1/60"),
    ("7/20", "3/20", 20, 2, "11/60", "-1/60"),
    ("13/30", "7/30", 30, 3, "11/60", "-1/60"),
    ("31/60", "19/60", 60, 4, "11/60", "-1/60"),
    ("3/5", "2/5", 5, 5, "11/60", "-1/60"),
    ("41/60", "29/60", 60, 6, "11/60", "-1/60"),
    ("23/30", "17/30", 30, 7, "11/60", "-1/60"),
    ("17/20", "13/20", 20, 8, "11/60", "-1/60"),
    ("14/15", "11/15", 15, 9, "11/60", "-1/60"),
];

fn q(s: &str) -> Rational {
    s.parse().expect("table entries are well-formed")
}

/// Representation data for one row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepRecord {
    pub m1: Rational,
    pub m2: Rational,
    pub level: u64,
    pub weight: i64,
    pub orbit: Orbit,
}

impl RepRecord {
    /// Rejects `m1 = m2` and exponents outside `[0, 1)`.
    pub fn new(m1: Rational, m2: Rational, level: u64, weight: i64, orbit: Orbit) -> Result<RepRecord> {
        if m1 == m2 {
            return Err(Error::DegenerateRecord(m1.to_string()));
        }
        for m in [&m1, &m2] {
            if m.is_negative() || *m >= Rational::one() {
                return Err(Error::DegenerateRecord(format!("{m} outside [0, 1)")));
            }
        }
        Ok(RepRecord {
            m1,
            m2,
            level,
            weight,
            orbit,
        })
    }
}

/// A printed row: the record plus the `(a, b)` columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub record: RepRecord,
    pub a: Rational,
    pub b: Rational,
}

/// All 54 rows, in table order.
pub fn table() -> Vec<TableRow> {
    let blocks: [(Orbit, &[RawRow]); 5] = [
        (Orbit::Dihedral, &DIHEDRAL),
        (Orbit::Tetrahedral, &TETRAHEDRAL),
        (Orbit::Octahedral, &OCTAHEDRAL),
        (Orbit::Icosahedral1, &ICOSAHEDRAL_1),
        (Orbit::Icosahedral2, &ICOSAHEDRAL_2),
    ];
    blocks
        .iter()
        .flat_map(|(orbit, rows)| {
            rows.iter().map(move |&(m1, m2, level, weight, a, b)| TableRow {
                record: RepRecord::new(q(m1), q(m2), level, weight, *orbit).expect("valid table row"),
                a: q(a),
                b: q(b),
            })
        })
        .collect()
}

/// The two series `2F1(a, 1/3 + a; 1 + a - b)` and `2F1(b, 1/3 + b; 1 + b - a)`,
/// stored in a canonical order so that pairs differing by `a <-> b` compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EssentialPair {
    pub first: [Rational; 3],
    pub second: [Rational; 3],
}

impl EssentialPair {
    pub fn from_ab(a: &Rational, b: &Rational) -> EssentialPair {
        let third = Rational::new(1, 3).unwrap();
        let one = Rational::one();
        let series = |x: &Rational, y: &Rational| [x.clone(), &third + x, &one + x - y];
        let (s, t) = (series(a, b), series(b, a));
        if s <= t {
            EssentialPair { first: s, second: t }
        } else {
            EssentialPair { first: t, second: s }
        }
    }

    pub fn triples(&self) -> [&[Rational; 3]; 2] {
        [&self.first, &self.second]
    }
}

impl fmt::Display for EssentialPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |t: &[Rational; 3]| format!("2F1({},{};{})", t[0], t[1], t[2]);
        write!(f, "{} & {}", show(&self.first), show(&self.second))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedParams {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub pair: EssentialPair,
}

pub fn derive_params(record: &RepRecord) -> Result<DerivedParams> {
    if record.m1 == record.m2 {
        return Err(Error::DegenerateRecord(record.m1.to_string()));
    }
    let twelfth = Rational::new(1, 12).unwrap();
    let half_gap = (&record.m1 - &record.m2) / Rational::from_integer(2);
    let a = &twelfth + &half_gap;
    let b = &twelfth - &half_gap;
    let pair = EssentialPair::from_ab(&a, &b);
    Ok(DerivedParams {
        a,
        b,
        c: Rational::new(2, 3).unwrap(),
        pair,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub rows: usize,
    pub orbit_sizes: Vec<(Orbit, usize)>,
    pub essential_pairs: Vec<EssentialPair>,
}

/// Recomputes `(a, b)` for every row; the first mismatch is an error naming
/// the row (1-based, in table order).
pub fn verify_table() -> Result<TableReport> {
    let rows = table();
    let mut pairs = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let derived = derive_params(&row.record)?;
        if derived.a != row.a || derived.b != row.b {
            return Err(Error::TableMismatch {
                row: i + 1,
                detail: format!(
                    "derived (a, b) = ({}, {}), printed ({}, {})",
                    derived.a, derived.b, row.a, row.b
                ),
            });
        }
        if !pairs.contains(&derived.pair) {
            pairs.push(derived.pair);
        }
    }
    let orbit_sizes = Orbit::ALL
        .iter()
        .map(|&o| (o, rows.iter().filter(|r| r.record.orbit == o).count()))
        .collect();
    Ok(TableReport {
        rows: rows.len(),
        orbit_sizes,
        essential_pairs: pairs,
    })
}

/// Distinct essential pairs over the whole list.
pub fn essential_pairs() -> Vec<EssentialPair> {
    let mut pairs: Vec<EssentialPair> = table()
        .iter()
        .map(|row| derive_params(&row.record).expect("valid table row").pair)
        .collect();
    pairs.sort();
    pairs.dedup();
    pairs
}

/// A prime that needs separate mention in a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ExceptionalPrime {
    /// Not good for the normalized triple; `min_valuation` is the least
    /// `v_p(A_m)` seen for `m <= EMPIRICAL_RANGE`.
    NotGood { prime: Prime, min_valuation: Valuation },
    /// A good prime with unbounded coefficients.
    Unbounded { prime: Prime },
}

/// How far the empirical valuation scan at non-good primes runs.
pub const EMPIRICAL_RANGE: usize = 500;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleCertificate {
    pub original: [Rational; 3],
    pub normalized: [Rational; 3],
    #[serde(rename = "D")]
    pub modulus: u64,
    pub finite_monodromy: bool,
    pub density: Rational,
    pub classes: Vec<ClassVerdict>,
    pub prime_limit: u64,
    pub exceptional_primes: Vec<ExceptionalPrime>,
}

impl TripleCertificate {
    /// Interlacing holds, the density is zero, and no good prime up to the
    /// limit is unbounded.
    pub fn is_finite(&self) -> bool {
        self.finite_monodromy
            && self.density.is_zero()
            && !self
                .exceptional_primes
                .iter()
                .any(|e| matches!(e, ExceptionalPrime::Unbounded { .. }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCertificate {
    pub pair: String,
    pub triples: Vec<TripleCertificate>,
}

impl PairCertificate {
    pub fn is_finite(&self) -> bool {
        self.triples.iter().all(TripleCertificate::is_finite)
    }
}

fn certify_triple(original: &[Rational; 3], prime_limit: u64) -> Result<TripleCertificate> {
    let [a, b, c] = original;
    let params = normalize_shift(a, b, c)?;
    let triple = AdmissibleTriple::from_params(params)?;
    let report = density_by_group(&triple)?;
    let mut exceptional_primes = Vec::new();
    for p in primes_up_to(prime_limit) {
        match classify_prime(&triple, p).verdict {
            Verdict::BoundedIntegral => {}
            Verdict::Unbounded { .. } => exceptional_primes.push(ExceptionalPrime::Unbounded { prime: p }),
            Verdict::NotGood => {
                let min_valuation = triple
                    .params()
                    .factor_valuations(p, EMPIRICAL_RANGE)
                    .into_iter()
                    .min()
                    .expect("nonempty");
                exceptional_primes.push(ExceptionalPrime::NotGood { prime: p, min_valuation });
            }
        }
    }
    Ok(TripleCertificate {
        original: original.clone(),
        normalized: [triple.a().clone(), triple.b().clone(), triple.c().clone()],
        modulus: triple.modulus(),
        finite_monodromy: is_finite_monodromy(&triple),
        density: report.density,
        classes: report.classes,
        prime_limit,
        exceptional_primes,
    })
}

/// Certifies both series of an essential pair: each is shifted to admissible
/// parameters, checked for interlacing and zero density, and every prime up
/// to `prime_limit` is classified.
pub fn certify_finite(pair: &EssentialPair, prime_limit: u64) -> Result<PairCertificate> {
    let triples = pair
        .triples()
        .into_iter()
        .map(|t| certify_triple(t, prime_limit))
        .collect::<Result<_>>()?;
    Ok(PairCertificate {
        pair: pair.to_string(),
        triples,
    })
}
