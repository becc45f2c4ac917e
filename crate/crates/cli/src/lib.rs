//! Command-line adapter over `hypergeom-padic`. Each verb parses its
//! arguments, calls one chain of library operations and serializes the result.

use std::fmt;

use clap::{Parser, Subcommand, ValueEnum};
use hypergeom_padic::arith::{primes_up_to, Prime, Rational};
use hypergeom_padic::classify::{
    classify_prime, density_by_group, density_by_sampling, is_finite_monodromy, is_full_density,
    unbounded_witnesses, AdmissibleTriple, Verdict, WitnessCase,
};
use hypergeom_padic::hyper::HyperParams;
use hypergeom_padic::padic::expand;
use hypergeom_padic::schwarz::{certify_finite, essential_pairs, verify_table};
use hypergeom_padic::Error;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "hgpadic", version, about = "p-adic boundedness of hypergeometric coefficients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    /// Write run metadata (verb, arguments, version, time) to this file.
    #[arg(long, global = true)]
    pub meta: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Periodic base-p expansion of a rational.
    Expand {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        prime: u64,
    },
    /// v_p(A_m) for m = 0..=max-m of the 2F1 with parameters a,b,c.
    ValuationProfile {
        #[arg(allow_hyphen_values = true)]
        params: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 100)]
        max_m: u64,
    },
    /// Bounded/unbounded verdict at one prime, or at every prime up to --max-prime.
    Classify {
        #[arg(allow_hyphen_values = true)]
        params: String,
        #[arg(long, required_unless_present = "max_prime")]
        prime: Option<u64>,
        #[arg(long, conflicts_with = "prime")]
        max_prime: Option<u64>,
    },
    /// Dirichlet density of the unbounded primes.
    Density {
        #[arg(allow_hyphen_values = true)]
        params: String,
        #[arg(long, value_enum, default_value_t = Method::Sampling)]
        method: Method,
    },
    /// Interlacing (finite monodromy) and full-density tests.
    Monodromy {
        #[arg(allow_hyphen_values = true)]
        params: String,
    },
    /// Check the embedded Schwarz list and certify every essential pair.
    SchwarzVerify {
        #[arg(long, default_value_t = 1000)]
        max_prime: u64,
    },
    /// Indices m_0..m_r with v_p(A_{m_r}) <= -(r+1) at an unbounded prime.
    Witness {
        #[arg(allow_hyphen_values = true)]
        params: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 3)]
        r: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Sampling,
    Group,
}

/// Why a command did not produce a report.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or an unmet precondition: exit 2.
    Precondition(String),
    /// A check the library promises did not hold: exit 1.
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Precondition(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Precondition(m) => write!(f, "error: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::TableMismatch { .. } | Error::SearchExhausted { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

/// `"a,b,c"` to three rationals. No whitespace is accepted; parse errors
/// report the byte offset within the whole argument.
pub fn parse_triple(text: &str) -> Result<[Rational; 3], Error> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Arity {
            expected: 3,
            got: parts.len(),
        });
    }
    let mut out = Vec::with_capacity(3);
    let mut offset = 0;
    for part in parts {
        let x = part.parse::<Rational>().map_err(|e| match e {
            Error::Parse { position, .. } => Error::Parse {
                text: text.to_string(),
                position: offset + position,
            },
            other => other,
        })?;
        out.push(x);
        offset += part.len() + 1;
    }
    Ok(out.try_into().expect("three components"))
}

fn prime(p: u64) -> Result<Prime, Failure> {
    Ok(Prime::new(p)?)
}

fn gauss(text: &str) -> Result<HyperParams, Failure> {
    let [a, b, c] = parse_triple(text)?;
    Ok(HyperParams::gauss(a, b, c)?)
}

fn admissible(text: &str) -> Result<AdmissibleTriple, Failure> {
    let [a, b, c] = parse_triple(text)?;
    Ok(AdmissibleTriple::new(a, b, c)?)
}

fn csv_rows<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn verdict_row(c: &hypergeom_padic::PrimeClassification) -> Vec<String> {
    let j = match c.verdict {
        Verdict::Unbounded { witness_index } => witness_index.to_string(),
        _ => String::new(),
    };
    vec![c.prime.to_string(), c.verdict.name().to_string(), j]
}

fn render(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

/// Runs one command and returns what goes to standard output.
pub fn run(cli: &Cli) -> Result<String, Failure> {
    let format = cli.format;
    let out = match &cli.command {
        Command::Expand { x, prime: p } => {
            let x: Rational = x.parse()?;
            let e = expand(&x, prime(*p)?)?;
            if e.reconstruct() != x {
                return Err(Failure::Internal(format!("expansion {e} does not reconstruct")));
            }
            match format {
                Format::Json => render(json!({
                    "x": e.value(),
                    "prime": e.prime(),
                    "preperiod": e.preperiod(),
                    "period": e.period(),
                    "display": e.to_string(),
                })),
                Format::Csv => {
                    let pre = e.preperiod().iter().map(|d| ("pre", d));
                    let per = e.period().iter().map(|d| ("period", d));
                    csv_rows(
                        &["index", "digit", "part"],
                        pre.chain(per)
                            .enumerate()
                            .map(|(i, (part, d))| vec![i.to_string(), d.to_string(), part.to_string()]),
                    )
                }
            }
        }
        Command::ValuationProfile { params, prime: p, max_m } => {
            let profile = gauss(params)?.valuation_profile(prime(*p)?, *max_m)?;
            match format {
                Format::Json => render(profile.to_json()),
                Format::Csv => profile.to_csv(),
            }
        }
        Command::Classify { params, prime: p, max_prime } => {
            let triple = admissible(params)?;
            let results: Vec<_> = match (p, max_prime) {
                (Some(p), _) => vec![classify_prime(&triple, prime(*p)?)],
                (None, Some(limit)) => primes_up_to(*limit).map(|p| classify_prime(&triple, p)).collect(),
                (None, None) => unreachable!("clap requires one of --prime, --max-prime"),
            };
            match format {
                Format::Json if p.is_some() => render(serde_json::to_value(results[0]).unwrap()),
                Format::Json => render(serde_json::to_value(&results).unwrap()),
                Format::Csv => csv_rows(&["prime", "verdict", "witness_index"], results.iter().map(verdict_row)),
            }
        }
        Command::Density { params, method } => {
            let triple = admissible(params)?;
            let report = match method {
                Method::Sampling => density_by_sampling(&triple)?,
                Method::Group => density_by_group(&triple)?,
            };
            match format {
                Format::Json => render(report.to_json()),
                Format::Csv => report.to_csv(),
            }
        }
        Command::Monodromy { params } => {
            let triple = admissible(params)?;
            let finite = is_finite_monodromy(&triple);
            let (full, bound) = is_full_density(&triple);
            match format {
                Format::Json => render(json!({
                    "params": triple.to_string(),
                    "D": triple.modulus(),
                    "finite_monodromy": finite,
                    "full_density": full,
                    "bound": bound,
                })),
                Format::Csv => csv_rows(
                    &["params", "D", "finite_monodromy", "full_density", "bound"],
                    [vec![
                        triple.to_string(),
                        triple.modulus().to_string(),
                        finite.to_string(),
                        full.to_string(),
                        bound.map(|b| b.to_string()).unwrap_or_default(),
                    ]],
                ),
            }
        }
        Command::SchwarzVerify { max_prime } => {
            let report = verify_table()?;
            let certificates = essential_pairs()
                .iter()
                .map(|pair| certify_finite(pair, *max_prime))
                .collect::<Result<Vec<_>, _>>()?;
            match format {
                Format::Json => render(json!({
                    "rows": report.rows,
                    "orbit_sizes": report.orbit_sizes,
                    "essential_pairs": report.essential_pairs.len(),
                    "all_finite": certificates.iter().all(|c| c.is_finite()),
                    "certificates": certificates,
                })),
                Format::Csv => csv_rows(
                    &["pair", "normalized", "D", "finite_monodromy", "density", "finite"],
                    certificates.iter().flat_map(|c| {
                        c.triples.iter().map(move |t| {
                            vec![
                                c.pair.clone(),
                                t.normalized.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"),
                                t.modulus.to_string(),
                                t.finite_monodromy.to_string(),
                                t.density.to_string(),
                                t.is_finite().to_string(),
                            ]
                        })
                    }),
                ),
            }
        }
        Command::Witness { params, prime: p, r } => {
            let triple = admissible(params)?;
            let w = unbounded_witnesses(&triple, prime(*p)?, *r)?;
            if let Some(bad) = w.witnesses.iter().find(|x| !x.meets_bound()) {
                return Err(Failure::Internal(format!(
                    "witness m_{} = {} has valuation {}",
                    bad.r, bad.m, bad.valuation
                )));
            }
            match format {
                Format::Json => render(serde_json::to_value(&w).unwrap()),
                Format::Csv => {
                    let case = match w.case {
                        WitnessCase::Single => "single".to_string(),
                        WitnessCase::Run { start } => format!("run from {start}"),
                    };
                    csv_rows(
                        &["r", "m", "valuation", "case"],
                        w.witnesses
                            .iter()
                            .map(|x| vec![x.r.to_string(), x.m.to_string(), x.valuation.to_string(), case.clone()]),
                    )
                }
            }
        }
    };
    Ok(out)
}

/// The sidecar record for `--meta`. Kept out of the report so reports stay
/// byte-stable.
pub fn metadata(args: &[String], status: u8) -> Value {
    let unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "tool": "hgpadic",
        "version": env!("CARGO_PKG_VERSION"),
        "args": args,
        "exit_status": status,
        "unix_time": unix,
    })
}
