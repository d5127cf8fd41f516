//! CLI surface over the modpoly library. Every command is deterministic
//! given its inputs and the seed (--seed, falling back to MODPOLY_SEED,
//! falling back to 0).
//!
//! Exit codes: 0 success, 1 precondition violations the caller can fix,
//! 2 internal tripwires (theorems say these cannot fire on valid inputs),
//! 64 usage errors.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use modpoly::bench::run_bench;
use modpoly::bivariate::BivariatePoly;
use modpoly::classical::{classical_phi, growth_report};
use modpoly::crtlift::crt_lift;
use modpoly::curves::Curve;
use modpoly::fields::{FieldDescriptor, FieldElement};
use modpoly::globalphi::modular_poly_mod_p;
use modpoly::localphi::{local_modular_poly, random_l_isogeny};
use modpoly::ssinit::{hilbert_class_poly, supersingular_j};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use num_traits::{One, Zero};
use std::fmt::Display;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "modpoly", version, about = "Modular polynomials via supersingular isogeny graphs")]
struct Cli {
    /// Seed for every randomized step; MODPOLY_SEED is the fallback, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the primary output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Progress notes on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute φ_ℓ(x, y) mod p by walking the supersingular graph.
    PhiModP {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Lift φ_ℓ(x, y) to the integers by CRT over many primes.
    PhiInt {
        #[arg(long)]
        ell: u64,
        /// Explicit primes (comma separated); defaults to the ascending
        /// stream of valid primes until stabilization.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// One local computation: φ_ℓ(x, j) mod p with its root multiset.
    Local {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        /// j ∈ F_{p²} as comma-separated coordinates, e.g. "5" or "5,1".
        #[arg(long)]
        j: String,
    },
    /// A supersingular j-invariant in F_{p²}.
    Ssj {
        #[arg(long)]
        p: u64,
    },
    /// Hilbert class polynomial H_D over the integers.
    Hilbert {
        /// Negative discriminant, e.g. --d=-23.
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Integer φ_ℓ from the q-expansion linear system (small ℓ).
    OraclePhi {
        #[arg(long)]
        ell: u64,
    },
    /// Growth table for the Fourier coefficients of j^k.
    AppendixGrowth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        /// Write the CSV here (stdout when omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the k=1 asymptotic-ratio table.
        #[arg(long)]
        petersson_csv: Option<PathBuf>,
    },
    /// Quotient a curve by a random order-ℓ subgroup.
    RandomIsogeny {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        /// Starting j ∈ F_{p²} (defaults to a supersingular seed).
        #[arg(long)]
        j: Option<String>,
    },
    /// Wall-clock scaling over ascending ℓ at fixed p.
    Bench {
        #[arg(long, value_delimiter = ',')]
        ells: Vec<u64>,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "3")]
        reps: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let seed = cli.seed.unwrap_or_else(|| {
        std::env::var("MODPOLY_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0)
    });
    match run(&cli, seed) {
        Ok(out) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, out) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(1);
                }
            } else {
                print!("{out}");
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(if e.is_internal() { 2 } else { 1 });
        }
    }
}

fn rng_for(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn parse_fp2(p: u64, text: &str) -> modpoly::Result<FieldElement> {
    let fp2 = FieldDescriptor::quadratic(p)?;
    let mut coords: Vec<u64> = Vec::new();
    for part in text.split(',') {
        coords.push(part.trim().parse().map_err(|_| {
            modpoly::Error::InvalidParameter(format!("bad coordinate {part:?}"))
        })?);
    }
    if coords.len() == 1 {
        coords.push(0);
    }
    fp2.element_from_coeffs(coords)
}

fn grid_json<C>(ell: u64, modulus: Option<u64>, grid: &BivariatePoly<C>) -> String
where
    C: Display + Zero + One + Clone + PartialEq,
{
    let rows: Vec<Vec<String>> = (0..grid.size())
        .map(|k| (0..grid.size()).map(|m| grid.get(k, m).to_string()).collect())
        .collect();
    let value = serde_json::json!({
        "ell": ell,
        "modulus": modulus,
        "grid": rows,
    });
    format!("{}\n", serde_json::to_string_pretty(&value).unwrap())
}

fn curve_dump(curve: &Curve) -> String {
    format!(
        "a1: {}\na2: {}\na3: {}\na4: {}\na6: {}\n",
        curve.a1.serialize(),
        curve.a2.serialize(),
        curve.a3.serialize(),
        curve.a4.serialize(),
        curve.a6.serialize()
    )
}

fn run(cli: &Cli, seed: u64) -> modpoly::Result<String> {
    let mut rng = rng_for(seed);
    match &cli.command {
        Command::PhiModP { ell, p, format } => {
            let grid = modular_poly_mod_p(*p, *ell, &mut rng)?;
            Ok(match format {
                Format::Text => grid.to_kmc_lines(),
                Format::Json => grid_json(*ell, Some(*p), &grid),
            })
        }
        Command::PhiInt { ell, primes, format } => {
            if cli.verbose {
                eprintln!("lifting phi_{ell} over ascending primes...");
            }
            let grid = crt_lift(*ell, primes.as_deref(), &mut rng)?;
            Ok(match format {
                Format::Text => grid.to_kmc_lines(),
                Format::Json => grid_json(*ell, None, &grid),
            })
        }
        Command::Local { p, ell, j } => {
            let j = parse_fp2(*p, j)?;
            let lp = local_modular_poly(&j, *ell, &mut rng)?;
            let mut out = String::new();
            writeln!(out, "j: {}", lp.j.serialize()).unwrap();
            for (k, c) in lp.coeffs.iter().enumerate() {
                writeln!(out, "coeff {k}: {}", c.serialize()).unwrap();
            }
            for r in &lp.roots {
                writeln!(out, "root: {}", r.serialize()).unwrap();
            }
            Ok(out)
        }
        Command::Ssj { p } => {
            let j = supersingular_j(*p, &mut rng)?;
            Ok(format!("{}\n", j.serialize()))
        }
        Command::Hilbert { d } => {
            let hd = hilbert_class_poly(*d)?;
            let mut out = String::new();
            for c in &hd.coeffs {
                writeln!(out, "{c}").unwrap();
            }
            Ok(out)
        }
        Command::OraclePhi { ell } => {
            let grid = classical_phi(*ell)?;
            Ok(grid.to_kmc_lines())
        }
        Command::AppendixGrowth { n, k, csv, petersson_csv } => {
            let report = growth_report(*n, *k)?;
            let mut body = String::from("n,k,logcoeff,upper,ratio\n");
            for row in &report.rows {
                writeln!(
                    body,
                    "{},{},{:.6},{:.6},{:.6}",
                    row.n, row.k, row.log_coeff, row.upper, row.ratio
                )
                .unwrap();
            }
            if let Some(path) = petersson_csv {
                let mut pt = String::from("n,petersson_ratio\n");
                for (n, ratio) in &report.petersson {
                    writeln!(pt, "{n},{ratio:.6}").unwrap();
                }
                std::fs::write(path, pt).map_err(|e| {
                    modpoly::Error::InvalidParameter(format!("cannot write petersson csv: {e}"))
                })?;
            }
            match csv {
                Some(path) => {
                    std::fs::write(path, &body).map_err(|e| {
                        modpoly::Error::InvalidParameter(format!("cannot write csv: {e}"))
                    })?;
                    Ok(format!("wrote {} rows\n", report.rows.len()))
                }
                None => Ok(body),
            }
        }
        Command::RandomIsogeny { p, ell, j } => {
            let j = match j {
                Some(text) => parse_fp2(*p, text)?,
                None => supersingular_j(*p, &mut rng)?,
            };
            let curve = modpoly::curves::curve_from_j(&j)?;
            let (image, j_new) = random_l_isogeny(&curve, *ell, None, &mut rng)?;
            let mut out = String::new();
            writeln!(out, "j: {}", j.serialize()).unwrap();
            writeln!(out, "j': {}", j_new.serialize()).unwrap();
            out.push_str(&curve_dump(&image));
            Ok(out)
        }
        Command::Bench { ells, p, reps, csv } => {
            if cli.verbose {
                eprintln!("benchmarking l in {ells:?} at p = {p}, {reps} reps");
            }
            let report = run_bench(ells, *p, *reps, seed)?;
            let mut body = String::from("kind,ell,n_used,seconds,slope\n");
            for row in &report.rows {
                writeln!(body, "local,{},{},{:.6},", row.ell, row.n_used, row.local_seconds)
                    .unwrap();
                writeln!(
                    body,
                    "pipeline,{},{},{:.6},",
                    row.ell,
                    6 * (row.ell - 1),
                    row.pipeline_seconds
                )
                .unwrap();
            }
            writeln!(body, "local_slope,,,,{:.4}", report.local_slope).unwrap();
            writeln!(body, "pipeline_slope,,,,{:.4}", report.pipeline_slope).unwrap();
            match csv {
                Some(path) => {
                    std::fs::write(path, &body).map_err(|e| {
                        modpoly::Error::InvalidParameter(format!("cannot write csv: {e}"))
                    })?;
                    Ok(String::new())
                }
                None => Ok(body),
            }
        }
    }
}
