//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cateig::arith::RingSpec;
use cateig::cert::{
    analyze_homotopy_blocks, certify_homology_eigenvalue, decide_eigenvalue, EigenCertificate,
    FailureReason, Verdict,
};
use cateig::complex::{ChainComplex, Convention, GradedMap};
use cateig::cone::{is_contractible, verify_null_homotopy, ConeComplex, Homotopy};
use cateig::decomposition::{decompose, decompose_adapted, homology};
use cateig::generate::{
    eigen_case, random_complex, random_integer_matrix, ComplexShape, EigenFamily,
};
use cateig::io::{read_complex, read_simplicial, simplicial_to_chain};
use cateig::linalg::{smith_normal_form, Matrix};
use cateig::oracle::{brute_homology_f2, homotopy_system_solvable};
use cateig::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const S1: &str = include_str!("../fixtures/s1.json");
const TRIANGLE: &str = include_str!("../fixtures/triangle.json");

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

/// Null-homotopies collected from the other suites for the block analysis.
struct Witnessed {
    target: ChainComplex,
    lambda: ChainComplex,
    alpha: GradedMap,
    cone: ConeComplex,
    psi: Homotopy,
}

impl Witnessed {
    fn from_cert(cert: &EigenCertificate, psi: Homotopy) -> Self {
        Witnessed {
            target: cert.cone.target.clone(),
            lambda: cert.cone.lambda.clone(),
            alpha: cert.cone.alpha.clone(),
            cone: cert.cone.clone(),
            psi,
        }
    }
}

fn z(rows: &[&[i64]]) -> Matrix {
    Matrix::from_i64(RingSpec::Integers, rows)
}

fn minus_identity(ring: RingSpec, n: usize) -> Matrix {
    -&Matrix::identity(ring, n)
}

/// `d Ψ + Ψ d + id`, computed directly, is zero in every degree.
fn is_null_homotopy(x: &ChainComplex, psi: &Homotopy) -> bool {
    x.degrees().all(|m| {
        let lhs = &(&x.diff(m - 1) * &psi.block_on(x, m)) + &(&psi.block_on(x, m + 1) * &x.diff(m));
        lhs == minus_identity(x.ring(), x.rank(m))
    })
}

// ---- independent 𝔽₂ arithmetic on bit rows ----

fn f2_rows(a: &Matrix) -> Vec<u64> {
    (0..a.rows())
        .map(|i| {
            (0..a.cols()).fold(0u64, |acc, j| {
                if a.get(i, j).to_string() == "1" {
                    acc | 1 << j
                } else {
                    acc
                }
            })
        })
        .collect()
}

fn f2_rank(a: &Matrix) -> usize {
    let mut rows = f2_rows(a);
    let mut rank = 0;
    for bit in 0..a.cols() {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i] >> bit & 1 == 1 {
                rows[i] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

/// Total 𝔽₂ homology dimension: `Σ dim X_n - 2 Σ rank d_n`.
fn f2_total_homology(x: &ChainComplex) -> usize {
    let ranks: usize = x.user_diffs().values().map(f2_rank).sum();
    x.total_dim() - 2 * ranks
}

// ---- independent integer determinant (fraction-free elimination) ----

fn bareiss_det(a: &Matrix) -> BigInt {
    let n = a.rows();
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).as_integer().unwrap().clone()).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

// ---- criteria ----

fn criterion_1(witnessed: &mut Vec<Witnessed>) -> Outcome {
    let f = match read_complex(S1) {
        Ok(f) => f,
        Err(e) => return fail(format!("fixture: {e}")),
    };
    let h = homology(&f);
    if h.betti_numbers() != BTreeMap::from([(0, 1), (1, 1)]) || h.first_torsion().is_some() {
        return fail(format!("homology {:?}", h.betti_numbers()));
    }
    let cert = match certify_homology_eigenvalue(&f) {
        Ok(c) => c,
        Err(e) => return fail(format!("certify: {e}")),
    };
    let Some(psi) = cert.witness.clone() else {
        return fail("no witness");
    };
    let x = &cert.cone.underlying;
    let diffs = x.user_diffs();
    let d2 = diffs.get(&2).cloned().unwrap_or_else(|| Matrix::zeros(x.ring(), 0, 0));
    let d1 = diffs.get(&1).cloned().unwrap_or_else(|| Matrix::zeros(x.ring(), 0, 0));
    let psi1 = psi.block_on(x, x.internal_degree(1));
    let psi0 = psi.block_on(x, x.internal_degree(0));
    let checks = [
        ("∂₂^Z", d2 == z(&[&[0], &[1], &[1], &[1]])),
        ("∂₁^Z", d1 == z(&[&[1, 0, 0, 0], &[0, 1, 0, -1], &[0, 0, 1, -1]])),
        ("Ψ¹", psi1 == z(&[&[0, 0, 0, -1]])),
        ("Ψ⁰", psi0 == z(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1], &[0, 0, 0]])),
        ("Ψ¹∂₂^Z = -1", &psi1 * &d2 == z(&[&[-1]])),
        ("∂₂^ZΨ¹ + Ψ⁰∂₁^Z = -I₄", &(&d2 * &psi1) + &(&psi0 * &d1) == minus_identity(RingSpec::Integers, 4)),
        ("∂₁^ZΨ⁰ = -I₃", &d1 * &psi0 == minus_identity(RingSpec::Integers, 3)),
    ];
    if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
        return fail(format!("{name} differs"));
    }
    witnessed.push(Witnessed::from_cert(&cert, psi));
    pass("H = (ℤ, ℤ), cone differentials, Ψ and the three identities match")
}

fn criterion_2(witnessed: &mut Vec<Witnessed>) -> Outcome {
    let shape = ComplexShape {
        max_len: 6,
        max_rank: 4,
        max_total: 24,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut count = 0;
    for ring in [RingSpec::Rationals, RingSpec::f2()] {
        for i in 0..1000 {
            let f = random_complex(&mut rng, ring, shape);
            let cert = match certify_homology_eigenvalue(&f) {
                Ok(c) => c,
                Err(e) => return fail(format!("{ring} #{i}: {e}")),
            };
            if cert.verdict != Verdict::Eigenvalue || !cert.reverify() {
                return fail(format!("{ring} #{i}: verdict {:?}", cert.verdict));
            }
            let psi = cert.witness.clone().unwrap();
            if !is_null_homotopy(&cert.cone.underlying, &psi) {
                return fail(format!("{ring} #{i}: dΦ + Φd ≠ -id"));
            }
            if i % 10 == 0 {
                witnessed.push(Witnessed::from_cert(&cert, psi));
            }
            count += 1;
        }
    }
    pass(format!("{count} complexes over Q and F_2 certified and re-verified"))
}

struct Suite3 {
    not_eigen: Vec<EigenCertificate>,
}

fn criterion_3(witnessed: &mut Vec<Witnessed>, suite: &mut Suite3) -> Outcome {
    let ring = RingSpec::f2();
    let shape = ComplexShape {
        max_len: 5,
        max_rank: 4,
        max_total: 8,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut instances = 0;
    let mut kinds: BTreeMap<&str, usize> = BTreeMap::new();
    let mut eigen = 0;
    for complex_no in 0..80 {
        let f = random_complex(&mut rng, ring, shape);
        for family in EigenFamily::ALL {
            let Some(case) = eigen_case(&mut rng, &f, family) else {
                continue;
            };
            let cert = match decide_eigenvalue(&f, &case.lambda, &case.alpha) {
                Ok(c) => c,
                Err(e) => return fail(format!("#{complex_no} {family}: {e}")),
            };
            let x = &cert.cone.underlying;
            let solution =
                match homotopy_system_solvable(x, &GradedMap::zero(ring, 0), &GradedMap::identity(x)) {
                    Ok(s) => s,
                    Err(e) => return fail(format!("oracle: {e}")),
                };
            let is_eigen = cert.verdict == Verdict::Eigenvalue;
            if solution.is_some() != is_eigen {
                return fail(format!("#{complex_no} {family}: verdict {:?} vs oracle", cert.verdict));
            }
            if (f2_total_homology(x) == 0) != is_eigen {
                return fail(format!("#{complex_no} {family}: verdict {:?} vs cone homology", cert.verdict));
            }
            instances += 1;
            match &cert.failure_reason {
                None => {
                    eigen += 1;
                    let w = cert.witness.clone().unwrap();
                    if !is_null_homotopy(x, &w) {
                        return fail(format!("#{complex_no} {family}: witness does not verify"));
                    }
                    witnessed.push(Witnessed::from_cert(&cert, w));
                    witnessed.push(Witnessed::from_cert(&cert, solution.unwrap()));
                }
                Some(r) => {
                    let kind = match r {
                        FailureReason::RankMismatch { .. } => "rank mismatch",
                        FailureReason::AlphaNotInjective { .. } => "not injective",
                        FailureReason::AlphaNotIntoG { .. } => "not into G",
                        FailureReason::Torsion { .. } => "torsion",
                        FailureReason::NotSaturated { .. } => "not saturated",
                    };
                    *kinds.entry(kind).or_default() += 1;
                    suite.not_eigen.push(cert);
                }
            }
        }
    }
    let mismatched = kinds.get("rank mismatch").copied().unwrap_or(0);
    let non_injective = kinds.get("not injective").copied().unwrap_or(0);
    if instances < 200 || mismatched == 0 || non_injective == 0 {
        return fail(format!("corpus too thin: {instances} instances, {kinds:?}"));
    }
    pass(format!(
        "{instances} instances ({eigen} eigenvalues, failures {kinds:?}) agree with the linear system"
    ))
}

fn criterion_4(suite: &Suite3) -> Outcome {
    for (i, cert) in suite.not_eigen.iter().enumerate() {
        let x = &cert.cone.underlying;
        if is_contractible(x).contractible || cert.cone_contractible {
            return fail(format!("case {i}: cone reported contractible"));
        }
        if f2_total_homology(x) == 0 {
            return fail(format!("case {i}: cone homology vanishes"));
        }
    }
    pass(format!("{} failing cones are non-contractible with nonzero homology", suite.not_eigen.len()))
}

fn criterion_5(witnessed: &[Witnessed]) -> Outcome {
    for (i, w) in witnessed.iter().enumerate() {
        if verify_null_homotopy(&w.cone.underlying, &w.psi).is_err() {
            return fail(format!("homotopy {i} does not verify"));
        }
        let dec = match decompose_adapted(&w.target, Some((&w.alpha, &w.lambda))) {
            Ok(d) => d,
            Err(e) => return fail(format!("homotopy {i}: {e}")),
        };
        let analysis = match analyze_homotopy_blocks(&w.cone, &w.psi, &dec) {
            Ok(a) => a,
            Err(e) => return fail(format!("homotopy {i}: {e}")),
        };
        if !analysis.equations_hold() {
            return fail(format!("homotopy {i}: block equations fail"));
        }
        if !analysis.conclusions_hold() {
            return fail(format!("homotopy {i}: A = 0, D = 0 or Im α = ker δ fails"));
        }
    }
    pass(format!("{} null-homotopies satisfy the block equations and conclusions", witnessed.len()))
}

fn criterion_6() -> Outcome {
    let zz = RingSpec::Integers;
    let two = BigInt::from(2);
    let f = ChainComplex::new(
        zz,
        Convention::Chain,
        &BTreeMap::from([(0, 1), (1, 1)]),
        &BTreeMap::from([(1, z(&[&[2]]))]),
    )
    .unwrap();
    let torsion = homology(&f).first_torsion().map(|d| d.torsion.clone());
    if torsion != Some(vec![two.clone()]) {
        return fail(format!("homology torsion {torsion:?}"));
    }
    match certify_homology_eigenvalue(&f) {
        Err(Error::TorsionHomology { factors, .. }) if factors == vec![two.clone()] => {}
        other => return fail(format!("certify gave {other:?}")),
    }
    match decompose(&f) {
        Err(Error::NotSaturated { factors, .. }) if factors == vec![two.clone()] => {}
        other => return fail(format!("decompose gave {other:?}")),
    }
    let lambda = ChainComplex::scalar_object(zz, Convention::Chain, &BTreeMap::from([(0, 1)]));
    match decide_eigenvalue(&f, &lambda, &GradedMap::zero(zz, 0)) {
        Ok(cert) if cert.verdict == Verdict::NotEigenvalue => {
            if !matches!(&cert.failure_reason, Some(FailureReason::Torsion { factors, .. }) if *factors == vec![two.clone()]) {
                return fail(format!("decide gave {:?}", cert.failure_reason));
            }
        }
        other => return fail(format!("decide gave {other:?}")),
    }

    let sc = read_simplicial(TRIANGLE).unwrap();
    let tri = simplicial_to_chain(&sc, zz).unwrap();
    let d1 = tri.complex.user_diffs()[&1].clone();
    let snf = smith_normal_form(&d1).unwrap();
    let diagonal: Vec<BigInt> = (0..3).map(|i| snf.s.get(i, i).as_integer().unwrap().clone()).collect();
    if diagonal != [1, 1, 0].map(BigInt::from) {
        return fail(format!("triangle SNF diagonal {diagonal:?}"));
    }
    pass("torsion factor 2 detected; triangle boundary has SNF [1, 1, 0]")
}

fn criterion_7() -> Outcome {
    let shape = ComplexShape {
        max_len: 6,
        max_rank: 4,
        max_total: 12,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for i in 0..600 {
        let f = random_complex(&mut rng, RingSpec::f2(), shape);
        let brute = match brute_homology_f2(&f) {
            Ok(b) => b,
            Err(e) => return fail(format!("#{i}: {e}")),
        };
        if brute != homology(&f).betti_numbers() {
            return fail(format!("#{i}: enumeration {brute:?}"));
        }
    }
    pass("600 F_2 complexes of total dimension ≤ 12 agree with enumeration")
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for i in 0..500 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let a = random_integer_matrix(&mut rng, r, c, -9, 9);
        let snf = match smith_normal_form(&a) {
            Ok(s) => s,
            Err(e) => return fail(format!("#{i}: {e}")),
        };
        if &(&snf.u * &a) * &snf.v != snf.s {
            return fail(format!("#{i}: U·A·V ≠ S"));
        }
        if bareiss_det(&snf.u).abs() != BigInt::one() || bareiss_det(&snf.v).abs() != BigInt::one() {
            return fail(format!("#{i}: U or V not unimodular"));
        }
        let mut diagonal = Vec::new();
        for p in 0..r {
            for q in 0..c {
                let v = snf.s.get(p, q).as_integer().unwrap().clone();
                if p != q && !v.is_zero() {
                    return fail(format!("#{i}: S is not diagonal"));
                }
                if p == q {
                    diagonal.push(v);
                }
            }
        }
        let nonzero: Vec<&BigInt> = diagonal.iter().take_while(|d| !d.is_zero()).collect();
        if diagonal[nonzero.len()..].iter().any(|d| !d.is_zero())
            || nonzero.iter().any(|d| !d.is_positive())
            || nonzero.windows(2).any(|w| !w[1].is_multiple_of(w[0]))
        {
            return fail(format!("#{i}: divisibility chain broken: {diagonal:?}"));
        }
    }
    pass("500 integer matrices: U·A·V = S, |det U| = |det V| = 1, d_i | d_(i+1)")
}

fn report(n: usize, name: &str, limit: Option<Duration>, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut outcome = run();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            outcome = fail(format!("took {elapsed:.2?}, limit {limit:?}; {}", outcome.detail));
        }
    }
    let status = if outcome.ok { "PASS" } else { "FAIL" };
    println!("criterion {n} [{name}]: {status} ({elapsed:.2?}) {}", outcome.detail);
    outcome.ok
}

fn main() -> ExitCode {
    let mut witnessed = Vec::new();
    let mut suite = Suite3 {
        not_eigen: Vec::new(),
    };
    let secs = Duration::from_secs;
    let results = [
        report(1, "S1 golden", Some(secs(1)), || criterion_1(&mut witnessed)),
        report(2, "forward direction", Some(secs(60)), || criterion_2(&mut witnessed)),
        report(3, "biconditional vs oracle", None, || criterion_3(&mut witnessed, &mut suite)),
        report(4, "failing cones", None, || criterion_4(&suite)),
        report(5, "block equations", None, || criterion_5(&witnessed)),
        report(6, "integer hypotheses", None, criterion_6),
        report(7, "homology vs enumeration", Some(secs(120)), criterion_7),
        report(8, "Smith normal form", Some(secs(30)), criterion_8),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
