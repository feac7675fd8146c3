//! `patsym`: pattern counts, k-symmetry, divisibility tables, inflatability
//! targets, expectation oracles and pattern-count searches, from one binary.
//!
//! Every subcommand prints aligned text by default and a machine-readable
//! JSON report with `--json`. Reports are byte-identical across runs with
//! the same inputs and seed, except for the trailing `timing_ms` field.
//! Exit codes: 0 success, 2 input error, 3 resource/budget error.

mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use patsym_core::inflate::{self, Mode};
use patsym_core::numtheory;
use patsym_core::pattern;
use patsym_core::perm::Permutation;
use patsym_core::search::{self, SearchSpec, TargetSpec};
use patsym_core::verify::{self, McSpec, ReportSubject};
use patsym_core::{Error, Result};

use render::{computed, fmt_rational, poly_json, provenance_value, rational_values_json, Rendered};

#[derive(Parser)]
#[command(
    name = "patsym",
    version,
    about = "Permutation pattern statistics and symmetry search"
)]
struct Cli {
    /// Emit the JSON report instead of aligned text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count all k-patterns of a permutation.
    Count {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        k: usize,
    },
    /// Decide whether all k! pattern counts are equal.
    CheckSym {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        k: usize,
    },
    /// The orbit of a permutation under inverse, reverse and complement.
    Gamma {
        #[arg(long)]
        perm: String,
    },
    /// Tensor (Kronecker) product of two permutations.
    Tensor {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Contract a permutation along a consistent interval partition.
    Contract {
        #[arg(long)]
        perm: String,
        /// Blocks separated by '|', e.g. 12|3|4.
        #[arg(long)]
        partition: String,
    },
    /// Divisibility machinery: valuations, exponents, moduli, residues.
    #[command(subcommand)]
    Nt(NtCommand),
    /// Target polynomials and vectors for inflatable permutations.
    #[command(subcommand)]
    Inflate(InflateCommand),
    /// Expectation oracles for tensor products with random permutations.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Searches for permutations with prescribed pattern counts.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Reference tables.
    #[command(subcommand)]
    Tables(TablesCommand),
}

#[derive(Subcommand)]
enum NtCommand {
    /// p-adic valuation of an integer.
    Valuation {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        x: i64,
    },
    /// Exponent of p in n! (Legendre's formula).
    Legendre {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
    },
    /// Valuation of a binomial coefficient C(x, y) by the carry criterion.
    Kummer {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
    },
    /// The exponent a_p(k).
    Apk {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
    },
    /// The minimal modulus T(k).
    Modulus {
        #[arg(long)]
        k: u64,
    },
    /// Admissible residues of alldiv_k modulo T(k).
    Residues {
        #[arg(long)]
        k: u64,
    },
    /// The least n >= k with alldiv_k(n).
    Least {
        #[arg(long)]
        k: u64,
    },
    /// The a_p(k), T(k) and f(k) tables as CSV.
    Tables(TableArgs),
}

#[derive(Args)]
struct TableArgs {
    /// Largest k for the a_p(k) table (max 20).
    #[arg(long, default_value_t = 17)]
    kmax_a: u64,
    /// Largest k for the T(k) table (max 10).
    #[arg(long, default_value_t = 10)]
    kmax_t: u64,
    /// Largest k for the f(k) table (max 8).
    #[arg(long, default_value_t = 8)]
    kmax_f: u64,
}

#[derive(Subcommand)]
enum InflateCommand {
    /// Target polynomials Y_tau(m) for every pattern of size k.
    Targets {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        mode: String,
    },
    /// Target vector at a concrete host size m.
    Vector {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        mode: String,
    },
    /// Minimal modulus and residue classes of integral host sizes.
    Admissible {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        mode: String,
    },
    /// Check sum_tau Y_tau(m) = C(m, k) as an exact polynomial identity.
    SumCheck {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        mode: String,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Exact expectation of the pattern counts of sigma (x) rho over all rho.
    Exact {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Product-form expectation from the contraction expansion.
    Product {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Monte-Carlo density estimate over seeded random rho.
    Mc {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Discrepancy report adjudicating both target modes.
    Report {
        #[arg(long, conflicts_with = "m")]
        perm: Option<String>,
        /// Bare host size instead of a concrete permutation.
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        k: usize,
        /// Exact sections are computed for 1..=n (budget permitting).
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Add a sampled section with this many samples (needs --seed).
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
        /// Inner size for the sampled section.
        #[arg(long, default_value_t = 50)]
        mc_n: usize,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// `uniform` or a path to a target file (one `<pattern> <count>` line
    /// per pattern of size k).
    #[arg(long)]
    target: String,
    /// Node budget; omission means exhaustive.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Resume file listing completed task prefixes.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Unrestricted search over all of S_n.
    Run(SearchArgs),
    /// Search within the self-dual class (inverse = reverse = complement).
    Restricted(SearchArgs),
}

#[derive(Subcommand)]
enum TablesCommand {
    /// All three reference tables.
    All(TableArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let command_echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match dispatch(&cli.command) {
        Ok(rendered) => {
            let body = if cli.json {
                let mut report = json!({
                    "command": command_echo,
                    "version": env!("CARGO_PKG_VERSION"),
                    "inputs": rendered.inputs,
                });
                let object = report.as_object_mut().expect("report is an object");
                if let Some(mode) = &rendered.mode {
                    object.insert("mode".into(), json!(mode));
                }
                if let Some(seed) = rendered.seed {
                    object.insert("seed".into(), json!(seed));
                }
                object.insert("outputs".into(), rendered.outputs);
                object.insert(
                    "timing_ms".into(),
                    json!(started.elapsed().as_secs_f64() * 1e3),
                );
                serde_json::to_string_pretty(&report).expect("report serialises") + "\n"
            } else {
                rendered.text
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, body) {
                        eprintln!("error[input]: cannot write {path:?}: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => print!("{body}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (code, kind) = match &e {
                Error::Input(_) => (2, "input"),
                Error::Unsupported(_) => (2, "unsupported"),
                Error::Resource(_) => (3, "resource"),
            };
            let message = match &e {
                Error::Input(m) | Error::Unsupported(m) | Error::Resource(m) => m,
            };
            eprintln!("error[{kind}]: {message}");
            ExitCode::from(code)
        }
    }
}

fn parse_perm(s: &str) -> Result<Permutation> {
    Permutation::from_str(s)
}

fn parse_mode(s: &str) -> Result<Mode> {
    Mode::from_str(s)
}

fn dispatch(command: &Command) -> Result<Rendered> {
    match command {
        Command::Count { perm, k } => count_cmd(perm, *k),
        Command::CheckSym { perm, k } => check_sym_cmd(perm, *k),
        Command::Gamma { perm } => gamma_cmd(perm),
        Command::Tensor { a, b } => tensor_cmd(a, b),
        Command::Contract { perm, partition } => contract_cmd(perm, partition),
        Command::Nt(nt) => nt_cmd(nt),
        Command::Inflate(cmd) => inflate_cmd(cmd),
        Command::Verify(cmd) => verify_cmd(cmd),
        Command::Search(cmd) => search_cmd(cmd),
        Command::Tables(TablesCommand::All(args)) => tables_cmd(args),
    }
}

fn count_cmd(perm: &str, k: usize) -> Result<Rendered> {
    let sigma = parse_perm(perm)?;
    let counts = pattern::count_patterns_fast(&sigma, k)?;
    let mut text = String::new();
    let mut entries = Vec::new();
    for (tau, count) in counts.iter() {
        text.push_str(&format!("{tau} {count}\n"));
        entries.push(json!({ "pattern": tau.to_string(), "count": count }));
    }
    text.push_str(&format!("total {}\n", counts.total()));
    Ok(Rendered {
        inputs: json!({ "perm": sigma.to_string(), "k": k }),
        outputs: json!({
            "counts": provenance_value(json!(entries)),
            "total": computed(json!(counts.total() as u64)),
        }),
        mode: None,
        seed: None,
        text,
    })
}

fn check_sym_cmd(perm: &str, k: usize) -> Result<Rendered> {
    let sigma = parse_perm(perm)?;
    let witness = pattern::is_k_symmetric(&sigma, k)?;
    let kind = if !witness.symmetric {
        "not-symmetric"
    } else if witness.trivial {
        "trivially-symmetric"
    } else {
        "symmetric"
    };
    let mut text = format!("{sigma} is {kind} at k={k}\n");
    for (tau, count) in witness.counts.iter() {
        text.push_str(&format!("{tau} {count}\n"));
    }
    let counts: Vec<Value> = witness
        .counts
        .iter()
        .map(|(tau, c)| json!({ "pattern": tau.to_string(), "count": c }))
        .collect();
    Ok(Rendered {
        inputs: json!({ "perm": sigma.to_string(), "k": k }),
        outputs: json!({
            "symmetric": witness.symmetric,
            "trivial": witness.trivial,
            "counts": provenance_value(json!(counts)),
        }),
        mode: None,
        seed: None,
        text,
    })
}

fn gamma_cmd(perm: &str) -> Result<Rendered> {
    let tau = parse_perm(perm)?;
    let orbit: Vec<String> = tau.gamma_orbit().iter().map(|p| p.to_string()).collect();
    let mut text = String::new();
    for member in &orbit {
        text.push_str(member);
        text.push('\n');
    }
    Ok(Rendered {
        inputs: json!({ "perm": tau.to_string() }),
        outputs: json!({
            "orbit": orbit,
            "orbit_size": computed(json!(orbit.len())),
        }),
        mode: None,
        seed: None,
        text,
    })
}

fn tensor_cmd(a: &str, b: &str) -> Result<Rendered> {
    let pa = parse_perm(a)?;
    let pb = parse_perm(b)?;
    let product = pa.tensor(&pb)?;
    Ok(Rendered {
        inputs: json!({ "a": pa.to_string(), "b": pb.to_string() }),
        outputs: json!({
            "product": product.to_string(),
            "size": computed(json!(product.size())),
        }),
        mode: None,
        seed: None,
        text: format!("{product}\n"),
    })
}

fn contract_cmd(perm: &str, partition: &str) -> Result<Rendered> {
    let tau = parse_perm(perm)?;
    let part: patsym_core::IntervalPartition = partition.parse()?;
    let contracted = tau.contract(&part)?;
    Ok(Rendered {
        inputs: json!({ "perm": tau.to_string(), "partition": part.to_string() }),
        outputs: json!({ "contracted": contracted.to_string() }),
        mode: None,
        seed: None,
        text: format!("{contracted}\n"),
    })
}

fn nt_cmd(nt: &NtCommand) -> Result<Rendered> {
    match nt {
        NtCommand::Valuation { p, x } => {
            let v = numtheory::p_valuation(*p, *x)?;
            Ok(Rendered {
                inputs: json!({ "p": p, "x": x }),
                outputs: json!({ "valuation": computed(json!(v.to_string())) }),
                mode: None,
                seed: None,
                text: format!("{v}\n"),
            })
        }
        NtCommand::Legendre { p, n } => {
            if !numtheory::is_prime(*p) {
                return Err(Error::input(format!("{p} is not prime")));
            }
            let e = numtheory::legendre(*p, *n);
            Ok(Rendered {
                inputs: json!({ "p": p, "n": n }),
                outputs: json!({ "exponent": computed(json!(e)) }),
                mode: None,
                seed: None,
                text: format!("{e}\n"),
            })
        }
        NtCommand::Kummer { p, x, y } => {
            let v = numtheory::kummer_valuation(*p, *x, *y)?;
            Ok(Rendered {
                inputs: json!({ "p": p, "x": x, "y": y }),
                outputs: json!({ "valuation": computed(json!(v)) }),
                mode: None,
                seed: None,
                text: format!("{v}\n"),
            })
        }
        NtCommand::Apk { p, k } => {
            if !numtheory::is_prime(*p) {
                return Err(Error::input(format!("{p} is not prime")));
            }
            let a = numtheory::a_exponent(*p, *k);
            Ok(Rendered {
                inputs: json!({ "p": p, "k": k }),
                outputs: json!({ "a": computed(json!(a)) }),
                mode: None,
                seed: None,
                text: format!("{a}\n"),
            })
        }
        NtCommand::Modulus { k } => {
            let t = numtheory::minimal_modulus(*k);
            Ok(Rendered {
                inputs: json!({ "k": k }),
                outputs: json!({ "modulus": computed(json!(t.to_string())) }),
                mode: None,
                seed: None,
                text: format!("{t}\n"),
            })
        }
        NtCommand::Residues { k } => {
            let residues = numtheory::admissible_residues(*k)?;
            let modulus = numtheory::minimal_modulus(*k);
            let text = format!(
                "modulus {modulus}\nresidues {}\n",
                residues
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            Ok(Rendered {
                inputs: json!({ "k": k }),
                outputs: json!({
                    "modulus": computed(json!(modulus.to_string())),
                    "residues": computed(json!(residues)),
                }),
                mode: None,
                seed: None,
                text,
            })
        }
        NtCommand::Least { k } => {
            let least = numtheory::least_admissible(*k)?;
            let text = match least {
                Some(n) => format!("{n}\n"),
                None => "none\n".to_string(),
            };
            Ok(Rendered {
                inputs: json!({ "k": k }),
                outputs: json!({ "least": computed(json!(least)) }),
                mode: None,
                seed: None,
                text,
            })
        }
        NtCommand::Tables(args) => tables_cmd(args),
    }
}

fn tables_cmd(args: &TableArgs) -> Result<Rendered> {
    if args.kmax_a > 20 || args.kmax_t > 10 || args.kmax_f > 8 {
        return Err(Error::resource(
            "table ranges are capped at kmax-a <= 20, kmax-t <= 10, kmax-f <= 8",
        ));
    }
    let mut text = String::new();

    // a_p(k) for primes p <= kmax_a, k = 2..=kmax_a.
    let primes = numtheory::primes_up_to(args.kmax_a);
    let ks: Vec<u64> = (2..=args.kmax_a).collect();
    text.push_str("a_p(k)");
    for k in &ks {
        text.push_str(&format!(",{k}"));
    }
    text.push('\n');
    let mut a_rows = Vec::new();
    for &p in &primes {
        text.push_str(&p.to_string());
        let mut row = Vec::new();
        for &k in &ks {
            let a = numtheory::a_exponent(p, k);
            text.push_str(&format!(",{a}"));
            row.push(a);
        }
        text.push('\n');
        a_rows.push(json!({ "p": p, "values": row }));
    }

    // T(k) for k = 1..=kmax_t.
    text.push_str("\nk,T(k)\n");
    let mut t_rows = Vec::new();
    for k in 1..=args.kmax_t {
        let t = numtheory::minimal_modulus(k);
        text.push_str(&format!("{k},{t}\n"));
        t_rows.push(json!({ "k": k, "T": t.to_string() }));
    }

    // f(k) for k = 1..=kmax_f.
    text.push_str("\nk,f(k)\n");
    let mut f_rows = Vec::new();
    for k in 1..=args.kmax_f {
        let f = numtheory::least_admissible(k)?
            .ok_or_else(|| Error::resource(format!("no admissible residue for k={k}")))?;
        text.push_str(&format!("{k},{f}\n"));
        f_rows.push(json!({ "k": k, "f": f }));
    }

    Ok(Rendered {
        inputs: json!({
            "kmax_a": args.kmax_a,
            "kmax_t": args.kmax_t,
            "kmax_f": args.kmax_f,
        }),
        outputs: json!({
            "a_table": { "k": ks, "rows": a_rows, "provenance": "computed" },
            "t_table": computed(json!(t_rows)),
            "f_table": computed(json!(f_rows)),
        }),
        mode: None,
        seed: None,
        text,
    })
}

fn inflate_cmd(cmd: &InflateCommand) -> Result<Rendered> {
    match cmd {
        InflateCommand::Targets { k, mode } => {
            let mode = parse_mode(mode)?;
            let polys = inflate::target_polynomials(*k, mode)?;
            let mut text = String::new();
            let mut entries = Vec::new();
            for (rank, poly) in polys.iter().enumerate() {
                let tau = pattern::lex_unrank(*k, rank);
                // The k = 3 paper-mode base is a published table, not a
                // recomputation.
                let provenance = if mode == Mode::Paper && *k == 3 {
                    "paper-table"
                } else {
                    "computed"
                };
                text.push_str(&format!("Y({tau}) = {poly}\n"));
                let mut entry = poly_json(poly);
                let object = entry.as_object_mut().expect("poly_json is an object");
                object.insert("pattern".into(), json!(tau.to_string()));
                object.insert("provenance".into(), json!(provenance));
                entries.push(entry);
            }
            Ok(Rendered {
                inputs: json!({ "k": k }),
                outputs: json!({ "targets": entries }),
                mode: Some(mode.to_string()),
                seed: None,
                text,
            })
        }
        InflateCommand::Vector { k, m, mode } => {
            let mode = parse_mode(mode)?;
            let vector = inflate::target_vector(*k, *m, mode)?;
            let mut text = String::new();
            for (tau, value) in vector.iter() {
                text.push_str(&format!("{tau} {}\n", fmt_rational(value)));
            }
            Ok(Rendered {
                inputs: json!({ "k": k, "m": m }),
                outputs: json!({
                    "values": rational_values_json(*k, &vector.values),
                    "integral": vector.integral,
                }),
                mode: Some(mode.to_string()),
                seed: None,
                text,
            })
        }
        InflateCommand::Admissible { k, mode } => {
            let mode = parse_mode(mode)?;
            let classes = inflate::admissible_m(*k, mode)?;
            let first = classes.first(*k as u64);
            let text = format!(
                "modulus {}\nresidues {}\nfirst m >= {k}: {}\n",
                classes.modulus,
                classes
                    .residues
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                first.map_or("none".to_string(), |m| m.to_string()),
            );
            Ok(Rendered {
                inputs: json!({ "k": k }),
                outputs: json!({
                    "modulus": computed(json!(classes.modulus)),
                    "residues": computed(json!(classes.residues)),
                    "first": computed(json!(first)),
                }),
                mode: Some(mode.to_string()),
                seed: None,
                text,
            })
        }
        InflateCommand::SumCheck { k, mode } => {
            let mode = parse_mode(mode)?;
            let check = inflate::sum_identity_check(*k, mode)?;
            let text = if check.holds {
                format!("sum identity holds for k={k}\n")
            } else {
                format!(
                    "sum identity FAILS for k={k}: residual {}\n",
                    check.residual
                )
            };
            Ok(Rendered {
                inputs: json!({ "k": k }),
                outputs: json!({
                    "holds": check.holds,
                    "residual": poly_json(&check.residual),
                }),
                mode: Some(mode.to_string()),
                seed: None,
                text,
            })
        }
    }
}

fn verify_cmd(cmd: &VerifyCommand) -> Result<Rendered> {
    match cmd {
        VerifyCommand::Exact { perm, k, n } => {
            let sigma = parse_perm(perm)?;
            let values = verify::exact_expectation(&sigma, *k, *n)?;
            let mut text = String::new();
            for (rank, value) in values.iter().enumerate() {
                let tau = pattern::lex_unrank(*k, rank);
                text.push_str(&format!("{tau} {}\n", fmt_rational(value)));
            }
            Ok(Rendered {
                inputs: json!({ "perm": sigma.to_string(), "k": k, "n": n }),
                outputs: json!({ "expectation": rational_values_json(*k, &values) }),
                mode: None,
                seed: None,
                text,
            })
        }
        VerifyCommand::Product { perm, k, n } => {
            let sigma = parse_perm(perm)?;
            let values = verify::product_form_expectation(&sigma, *k, *n)?;
            let mut text = String::new();
            for (rank, value) in values.iter().enumerate() {
                let tau = pattern::lex_unrank(*k, rank);
                text.push_str(&format!("{tau} {}\n", fmt_rational(value)));
            }
            Ok(Rendered {
                inputs: json!({ "perm": sigma.to_string(), "k": k, "n": n }),
                outputs: json!({ "expectation": rational_values_json(*k, &values) }),
                mode: None,
                seed: None,
                text,
            })
        }
        VerifyCommand::Mc {
            perm,
            k,
            n,
            samples,
            seed,
            threads,
        } => {
            let sigma = parse_perm(perm)?;
            let est = verify::mc_estimate(&sigma, *k, *n, *samples, *seed, *threads)?;
            let mut text = String::new();
            let mut entries = Vec::new();
            for (rank, &(mean, hw)) in est.stats.iter().enumerate() {
                let tau = pattern::lex_unrank(*k, rank);
                text.push_str(&format!("{tau} {mean:.8} +- {hw:.8}\n"));
                entries.push(json!({
                    "pattern": tau.to_string(),
                    "mean": mean,
                    "ci95": hw,
                }));
            }
            Ok(Rendered {
                inputs: json!({
                    "perm": sigma.to_string(), "k": k, "n": n, "samples": samples,
                }),
                outputs: json!({
                    "host_subsets": computed(json!(est.host_subsets.to_string())),
                    "densities": provenance_value(json!(entries)),
                }),
                mode: None,
                seed: Some(*seed),
                text,
            })
        }
        VerifyCommand::Report {
            perm,
            m,
            k,
            n,
            samples,
            seed,
            mc_n,
            threads,
        } => {
            let subject = match (perm, m) {
                (Some(p), None) => ReportSubject::Sigma(parse_perm(p)?),
                (None, Some(m)) => ReportSubject::Size(*m),
                _ => {
                    return Err(Error::input(
                        "verify report needs exactly one of --perm or --m",
                    ))
                }
            };
            let ns: Vec<usize> = (1..=*n).collect();
            let mc = match (samples, seed) {
                (Some(samples), Some(seed)) => Some(McSpec {
                    n: *mc_n,
                    samples: *samples,
                    seed: *seed,
                    threads: *threads,
                }),
                (Some(_), None) => return Err(Error::input("--samples requires --seed")),
                _ => None,
            };
            let report = verify::discrepancy_report(subject, *k, &ns, mc)?;
            Ok(render::render_report(&report, *k, seed.as_ref().copied()))
        }
    }
}

fn parse_target_file(path: &str, k: usize) -> Result<Vec<u64>> {
    let body =
        fs::read_to_string(path).map_err(|e| Error::input(format!("target file {path:?}: {e}")))?;
    let slots = pattern::FACTORIALS[k];
    let mut counts: Vec<Option<u64>> = vec![None; slots];
    for line in body.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(pattern_text), Some(count_text), None) =
            (parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::input(format!(
                "target line {line:?} is not `<pattern> <count>`"
            )));
        };
        let tau: Permutation = pattern_text.parse()?;
        if tau.size() != k {
            return Err(Error::input(format!(
                "target pattern {tau} has size {}, expected {k}",
                tau.size()
            )));
        }
        let count: u64 = count_text
            .parse()
            .map_err(|_| Error::input(format!("bad count {count_text:?}")))?;
        let rank = pattern::lex_rank(tau.entries());
        if counts[rank].replace(count).is_some() {
            return Err(Error::input(format!("pattern {tau} listed twice")));
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(rank, c)| {
            c.ok_or_else(|| {
                Error::input(format!(
                    "target file misses pattern {}",
                    pattern::lex_unrank(k, rank)
                ))
            })
        })
        .collect()
}

fn search_cmd(cmd: &SearchCommand) -> Result<Rendered> {
    let (args, restricted) = match cmd {
        SearchCommand::Run(args) => (args, false),
        SearchCommand::Restricted(args) => (args, true),
    };
    if args.k > pattern::MAX_PATTERN_SIZE {
        return Err(Error::unsupported(format!(
            "search supports k <= {}",
            pattern::MAX_PATTERN_SIZE
        )));
    }
    let target = if args.target == "uniform" {
        TargetSpec::Uniform
    } else {
        TargetSpec::Counts(parse_target_file(&args.target, args.k)?)
    };
    let spec = SearchSpec {
        n: args.n,
        k: args.k,
        target,
        restricted,
        budget: args.budget,
        threads: args.threads,
    };
    let result = search::run_with_checkpoint(&spec, args.checkpoint.as_deref())?;
    let matches: Vec<String> = result.matches.iter().map(|p| p.to_string()).collect();
    let mut text = String::new();
    for m in &matches {
        text.push_str(m);
        text.push('\n');
    }
    text.push_str(&format!(
        "matches {} nodes {} exhausted {}\n",
        matches.len(),
        result.nodes_explored,
        result.exhausted
    ));
    Ok(Rendered {
        inputs: json!({
            "n": args.n,
            "k": args.k,
            "target": args.target,
            "restricted": restricted,
            "budget": args.budget,
        }),
        outputs: json!({
            "matches": matches,
            "match_count": computed(json!(result.matches.len())),
            "nodes_explored": computed(json!(result.nodes_explored)),
            "exhausted": result.exhausted,
        }),
        mode: None,
        seed: None,
        text,
    })
}
