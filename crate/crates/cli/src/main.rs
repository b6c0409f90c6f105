//! `cateig`: homology, mapping cones and eigenvalue certificates for chain
//! complexes stored as JSON.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use cateig::arith::RingSpec;
use cateig::cert::{certify_homology_eigenvalue, decide_eigenvalue, EigenCertificate, Verdict};
use cateig::complex::{ChainComplex, GradedMap};
use cateig::cone::{is_contractible, mapping_cone, verify_homotopy};
use cateig::decomposition::{decompose, homology};
use cateig::generate::{eigen_case, random_complex, ComplexShape, EigenFamily};
use cateig::io::{self, to_canonical_json};
use cateig::linalg::Matrix;
use cateig::oracle::{brute_homology_f2, homotopy_system_solvable, MAX_ENUMERATION_DIM};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_STRUCTURAL: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "cateig",
    version,
    about = "Exact homology, mapping cones and eigenvalue certificates for chain complexes",
    after_help = "EXIT CODES:\n\
                  \n  0   success, or the pair is an eigenvalue\
                  \n  1   not an eigenvalue, or a verification failed\
                  \n  2   malformed or inconsistent input\
                  \n  64  usage error"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print Betti numbers and torsion of a complex
    Homology { complex: PathBuf },
    /// Print the splitting F = G ⊕ Im d with adapted bases, as JSON
    Decompose { complex: PathBuf },
    /// Write the mapping cone of α : λ -> F with its block layout
    Cone {
        complex: PathBuf,
        lambda: PathBuf,
        alpha: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether (λ, α) is an eigenvalue and write a certificate
    #[command(after_help = "Without --lambda/--alpha, λ is the homology of F and α picks\n\
                            cycle representatives. The certificate goes to --out, or to\n\
                            stdout when --out is absent.")]
    Certify {
        complex: PathBuf,
        #[arg(long, requires = "alpha")]
        lambda: Option<PathBuf>,
        #[arg(long, requires = "lambda")]
        alpha: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check f - g = dΨ + Ψd on a complex (default f = 0, g = id)
    VerifyHomotopy {
        complex: PathBuf,
        homotopy: PathBuf,
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long)]
        g: Option<PathBuf>,
    },
    /// Run the randomized oracle-equivalence suites
    Proptest {
        /// q, z, f2, or fP for a prime P
        #[arg(long, default_value = "f2")]
        ring: RingArg,
        /// Largest total rank of a generated complex
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy)]
struct RingArg(RingSpec);

impl FromStr for RingArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let ring = match lower.as_str() {
            "q" => RingSpec::Rationals,
            "z" => RingSpec::Integers,
            _ => {
                let p = lower
                    .strip_prefix('f')
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| format!("unknown ring {s:?}; expected q, z, f2, f3, ..."))?;
                RingSpec::prime_field(p).map_err(|e| e.to_string())?
            }
        };
        Ok(RingArg(ring))
    }
}

/// A failed check, as opposed to an input that could not be processed.
#[derive(Debug)]
struct CheckFailed;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_complex(path: &Path) -> Result<ChainComplex> {
    io::read_complex(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_map(path: &Path) -> Result<GradedMap> {
    io::read_map(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(a: &Matrix) -> Vec<Vec<String>> {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(ToString::to_string).collect())
        .collect()
}

fn cmd_homology(path: &Path) -> Result<()> {
    let f = load_complex(path)?;
    let h = homology(&f);
    println!("ring {}, {} convention", h.ring, json!(h.convention).as_str().unwrap_or(""));
    for d in &h.degrees {
        let mut line = format!("H_{}: rank {}", d.degree, d.betti);
        if !d.torsion.is_empty() {
            let t: Vec<String> = d.torsion.iter().map(ToString::to_string).collect();
            let _ = write!(line, ", torsion [{}]", t.join(", "));
        }
        println!("{line}");
    }
    Ok(())
}

fn cmd_decompose(path: &Path) -> Result<()> {
    let f = load_complex(path)?;
    let dec = decompose(&f)?;
    let mut degrees: Vec<_> = dec
        .iter()
        .map(|(m, d)| {
            json!({
                "degree": dec.user_degree(m),
                "g": d.g_dim(),
                "im": d.im_dim(),
                "ker_delta": d.basis_ker_delta.dim(),
                "basis": render(&d.adapted_basis),
            })
        })
        .collect();
    degrees.sort_by_key(|v| v["degree"].as_i64());
    let out = json!({ "convention": f.convention(), "degrees": degrees });
    print!("{}", to_canonical_json(&out));
    Ok(())
}

fn cmd_cone(complex: &Path, lambda: &Path, alpha: &Path, out: Option<&Path>) -> Result<()> {
    let f = load_complex(complex)?;
    let l = load_complex(lambda)?;
    let a = load_map(alpha)?;
    io::check_eigenmap(&a, &l, &f)?;
    let cone = mapping_cone(&l, &f, &a)?;
    emit(&io::write_cone(&cone), out)
}

fn summarize(cert: &EigenCertificate) -> String {
    let ranks: Vec<String> = cert
        .lambda_ranks
        .iter()
        .map(|(d, r)| format!("{d}:{r}"))
        .collect();
    let mut s = format!("{:?} (λ ranks {{{}}})", cert.verdict, ranks.join(", "));
    if let Some(r) = &cert.failure_reason {
        let _ = write!(s, ": {r}");
    }
    s
}

fn cmd_certify(
    complex: &Path,
    given: Option<(&Path, &Path)>,
    out: Option<&Path>,
) -> Result<Result<(), CheckFailed>> {
    let f = load_complex(complex)?;
    let cert = match given {
        Some((lambda, alpha)) => {
            let l = load_complex(lambda)?;
            let a = load_map(alpha)?;
            io::check_eigenmap(&a, &l, &f)?;
            decide_eigenvalue(&f, &l, &a)?
        }
        None => certify_homology_eigenvalue(&f)?,
    };
    if !cert.reverify() {
        bail!("internal error: certificate does not re-verify");
    }
    emit(&io::write_certificate(&cert), out)?;
    if out.is_some() {
        println!("{}", summarize(&cert));
    } else {
        eprintln!("{}", summarize(&cert));
    }
    Ok(match cert.verdict {
        Verdict::Eigenvalue => Ok(()),
        Verdict::NotEigenvalue => Err(CheckFailed),
    })
}

fn cmd_verify_homotopy(
    complex: &Path,
    homotopy: &Path,
    f: Option<&Path>,
    g: Option<&Path>,
) -> Result<Result<(), CheckFailed>> {
    let x = load_complex(complex)?;
    let psi = io::read_homotopy(&read(homotopy)?)
        .with_context(|| format!("in {}", homotopy.display()))?;
    let f = match f {
        Some(p) => load_map(p)?,
        None => GradedMap::zero(x.ring(), 0),
    };
    let g = match g {
        Some(p) => load_map(p)?,
        None => GradedMap::identity(&x),
    };
    match verify_homotopy(&x, &f, &g, &psi) {
        Ok(()) => {
            println!("ok");
            Ok(Ok(()))
        }
        Err(v) => {
            println!("FAIL: {v}");
            Ok(Err(CheckFailed))
        }
    }
}

#[derive(Default)]
struct Tally {
    forward: (usize, usize),
    homology: (usize, usize),
    biconditional: (usize, usize),
    contrapositive: (usize, usize),
    failures: Vec<String>,
}

impl Tally {
    fn record(slot: &mut (usize, usize), failures: &mut Vec<String>, ok: bool, what: String) {
        slot.1 += 1;
        if ok {
            slot.0 += 1;
        } else {
            failures.push(what);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in [
            (&mut self.forward, other.forward),
            (&mut self.homology, other.homology),
            (&mut self.biconditional, other.biconditional),
            (&mut self.contrapositive, other.contrapositive),
        ] {
            a.0 += b.0;
            a.1 += b.1;
        }
        self.failures.extend(other.failures);
        self
    }
}

fn run_trial(ring: RingSpec, shape: ComplexShape, seed: u64, index: u64) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let f = random_complex(&mut rng, ring, shape);
    let mut t = Tally::default();
    let tag = |what: &str| format!("trial {index}: {what}");

    match certify_homology_eigenvalue(&f) {
        Ok(cert) => {
            let ok = cert.verdict == Verdict::Eigenvalue && cert.reverify();
            Tally::record(&mut t.forward, &mut t.failures, ok, tag("homology eigenvalue not certified"));
        }
        // torsion over ℤ puts the complex outside the theorem
        Err(cateig::Error::TorsionHomology { .. }) => {}
        Err(e) => t.failures.push(tag(&format!("certify: {e}"))),
    }

    if ring == RingSpec::f2() && f.total_dim() <= MAX_ENUMERATION_DIM {
        let ok = brute_homology_f2(&f).is_ok_and(|b| b == homology(&f).betti_numbers());
        Tally::record(&mut t.homology, &mut t.failures, ok, tag("homology disagrees with enumeration"));
    }

    let family = EigenFamily::ALL[rng.gen_range(0..EigenFamily::ALL.len())];
    let Some(case) = eigen_case(&mut rng, &f, family) else {
        return t;
    };
    let cert = match decide_eigenvalue(&f, &case.lambda, &case.alpha) {
        Ok(c) => c,
        Err(e) => {
            t.failures.push(tag(&format!("{family}: {e}")));
            return t;
        }
    };
    let eigen = cert.verdict == Verdict::Eigenvalue;
    if ring.is_field() {
        let z = &cert.cone.underlying;
        match homotopy_system_solvable(z, &GradedMap::zero(ring, 0), &GradedMap::identity(z)) {
            Ok(sol) => Tally::record(
                &mut t.biconditional,
                &mut t.failures,
                sol.is_some() == eigen,
                tag(&format!("{family}: verdict {:?} disagrees with linear system", cert.verdict)),
            ),
            Err(e) => t.failures.push(tag(&format!("oracle: {e}"))),
        }
    }
    if !eigen {
        let ok = !is_contractible(&cert.cone.underlying).contractible;
        Tally::record(&mut t.contrapositive, &mut t.failures, ok, tag(&format!("{family}: failing cone is contractible")));
    }
    t
}

fn cmd_proptest(ring: RingSpec, max_dim: usize, trials: u64, seed: u64) -> Result<(), CheckFailed> {
    let shape = ComplexShape {
        max_len: 6,
        max_rank: 4,
        max_total: max_dim,
    };
    let tally = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(ring, shape, seed, i))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    println!("ring {ring}, max dim {max_dim}, {trials} trials, seed {seed}");
    for (name, (ok, total)) in [
        ("forward", tally.forward),
        ("homology oracle", tally.homology),
        ("biconditional", tally.biconditional),
        ("contrapositive", tally.contrapositive),
    ] {
        println!("  {name}: {ok}/{total}");
    }
    if tally.failures.is_empty() {
        println!("all checks passed");
        Ok(())
    } else {
        for f in tally.failures.iter().take(20) {
            println!("  FAIL {f}");
        }
        println!("{} failures", tally.failures.len());
        Err(CheckFailed)
    }
}

fn run(cli: Cli) -> Result<Result<(), CheckFailed>> {
    match cli.command {
        Command::Homology { complex } => cmd_homology(&complex).map(Ok),
        Command::Decompose { complex } => cmd_decompose(&complex).map(Ok),
        Command::Cone {
            complex,
            lambda,
            alpha,
            out,
        } => cmd_cone(&complex, &lambda, &alpha, out.as_deref()).map(Ok),
        Command::Certify {
            complex,
            lambda,
            alpha,
            out,
        } => {
            let given = lambda.as_deref().zip(alpha.as_deref());
            cmd_certify(&complex, given, out.as_deref())
        }
        Command::VerifyHomotopy {
            complex,
            homotopy,
            f,
            g,
        } => cmd_verify_homotopy(&complex, &homotopy, f.as_deref(), g.as_deref()),
        Command::Proptest {
            ring,
            max_dim,
            trials,
            seed,
        } => Ok(cmd_proptest(ring.0, max_dim, trials, seed)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CheckFailed)) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_STRUCTURAL)
        }
    }
}
