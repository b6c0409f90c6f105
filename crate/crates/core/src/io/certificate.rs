use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::complex_file::{
    complex_from_file, complex_to_file, cone_to_file, homotopy_from_file, homotopy_to_file,
    map_from_file, map_to_file, parse_matrix, render_matrix, BlockEntry, ComplexFile, DegreeRank,
    MapFile, RingTag,
};
use super::{parse_json, to_canonical_json, IoError};
use crate::cert::{EigenCertificate, FailureReason, Verdict};
use crate::complex::Convention;
use crate::cone::{BlockLayout, BlockSizes, ConeComplex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyEntry {
    pub degree: i64,
    pub betti: usize,
    #[serde(default)]
    pub torsion: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InjectivityEntry {
    pub degree: i64,
    pub injective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureEntry {
    pub kind: String,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub verdict: String,
    pub ring: RingTag,
    pub convention: Convention,
    pub eigenobject: String,
    pub lambda_ranks: Vec<DegreeRank>,
    pub homology: Vec<HomologyEntry>,
    pub alpha_injective: Vec<InjectivityEntry>,
    pub failure_reason: Option<FailureEntry>,
    pub cone_contractible: bool,
    /// The cone with its block layout.
    pub cone: ComplexFile,
    pub lambda: ComplexFile,
    pub target: ComplexFile,
    pub alpha: MapFile,
    pub witness: Option<MapFile>,
    /// `[G | Im d]` bases of the target, by degree.
    pub bases: Vec<BlockEntry>,
}

fn render_factors(f: &[BigInt]) -> Vec<String> {
    f.iter().map(ToString::to_string).collect()
}

fn parse_factors(f: &[String]) -> Result<Vec<BigInt>, IoError> {
    f.iter()
        .map(|s| {
            s.parse::<BigInt>()
                .map_err(|_| IoError::Validation(format!("bad invariant factor {s:?}")))
        })
        .collect()
}

fn failure_to_entry(r: &FailureReason) -> FailureEntry {
    let (kind, factors) = match r {
        FailureReason::RankMismatch { .. } => ("RankMismatch", Vec::new()),
        FailureReason::Torsion { factors, .. } => ("Torsion", render_factors(factors)),
        FailureReason::AlphaNotInjective { .. } => ("AlphaNotInjective", Vec::new()),
        FailureReason::AlphaNotIntoG { .. } => ("AlphaNotIntoG", Vec::new()),
        FailureReason::NotSaturated { factors, .. } => ("NotSaturated", render_factors(factors)),
    };
    FailureEntry {
        kind: kind.into(),
        degree: r.degree(),
        factors,
    }
}

fn failure_from_entry(e: &FailureEntry) -> Result<FailureReason, IoError> {
    let degree = e.degree;
    let factors = parse_factors(&e.factors)?;
    Ok(match e.kind.as_str() {
        "RankMismatch" => FailureReason::RankMismatch { degree },
        "Torsion" => FailureReason::Torsion { degree, factors },
        "AlphaNotInjective" => FailureReason::AlphaNotInjective { degree },
        "AlphaNotIntoG" => FailureReason::AlphaNotIntoG { degree },
        "NotSaturated" => FailureReason::NotSaturated { degree, factors },
        other => {
            return Err(IoError::Validation(format!("unknown failure kind {other:?}")));
        }
    })
}

pub fn certificate_to_file(c: &EigenCertificate) -> CertificateFile {
    let conv = c.convention;
    let homology = c
        .homology_ranks
        .iter()
        .map(|(&degree, &betti)| HomologyEntry {
            degree,
            betti,
            torsion: c.torsion.get(&degree).map_or_else(Vec::new, |t| render_factors(t)),
        })
        .collect();
    CertificateFile {
        verdict: match c.verdict {
            Verdict::Eigenvalue => "Eigenvalue".into(),
            Verdict::NotEigenvalue => "NotEigenvalue".into(),
        },
        ring: RingTag::from_ring(c.ring),
        convention: conv,
        eigenobject: c.eigenobject.clone(),
        lambda_ranks: c
            .lambda_ranks
            .iter()
            .map(|(&degree, &rank)| DegreeRank { degree, rank })
            .collect(),
        homology,
        alpha_injective: c
            .alpha_injective
            .iter()
            .map(|(&degree, &injective)| InjectivityEntry { degree, injective })
            .collect(),
        failure_reason: c.failure_reason.as_ref().map(failure_to_entry),
        cone_contractible: c.cone_contractible,
        cone: cone_to_file(&c.cone),
        lambda: complex_to_file(&c.cone.lambda),
        target: complex_to_file(&c.cone.target),
        alpha: map_to_file(&c.cone.alpha, conv),
        witness: c.witness.as_ref().map(|w| homotopy_to_file(w, conv)),
        bases: c
            .bases
            .iter()
            .map(|(&degree, b)| BlockEntry {
                degree,
                entries: render_matrix(b),
            })
            .collect(),
    }
}

pub fn certificate_from_file(file: &CertificateFile) -> Result<EigenCertificate, IoError> {
    let ring = file.ring.to_ring()?;
    let verdict = match file.verdict.as_str() {
        "Eigenvalue" => Verdict::Eigenvalue,
        "NotEigenvalue" => Verdict::NotEigenvalue,
        other => return Err(IoError::Validation(format!("unknown verdict {other:?}"))),
    };
    let underlying = complex_from_file(&file.cone)?;
    let lambda = complex_from_file(&file.lambda)?;
    let target = complex_from_file(&file.target)?;
    let alpha = map_from_file(&file.alpha)?;
    for x in [&underlying, &lambda, &target] {
        if x.ring() != ring || x.convention() != file.convention {
            return Err(IoError::Validation(
                "embedded complexes disagree with the certificate's ring or convention".into(),
            ));
        }
    }
    let layout = BlockLayout::new(
        file.cone
            .layout
            .iter()
            .map(|l| {
                let sizes = BlockSizes {
                    lambda: l.lambda,
                    g: l.g,
                    im: l.im,
                };
                (underlying.internal_degree(l.degree), sizes)
            })
            .collect(),
    );
    let mut torsion = BTreeMap::new();
    let mut homology_ranks = BTreeMap::new();
    for h in &file.homology {
        homology_ranks.insert(h.degree, h.betti);
        if !h.torsion.is_empty() {
            torsion.insert(h.degree, parse_factors(&h.torsion)?);
        }
    }
    let mut bases = BTreeMap::new();
    for b in &file.bases {
        let what = format!("basis at degree {}", b.degree);
        bases.insert(b.degree, parse_matrix(ring, &b.entries, None, &what)?);
    }
    Ok(EigenCertificate {
        verdict,
        ring,
        convention: file.convention,
        eigenobject: file.eigenobject.clone(),
        lambda_ranks: file.lambda_ranks.iter().map(|d| (d.degree, d.rank)).collect(),
        homology_ranks,
        torsion,
        alpha_injective: file
            .alpha_injective
            .iter()
            .map(|e| (e.degree, e.injective))
            .collect(),
        witness: file.witness.as_ref().map(homotopy_from_file).transpose()?,
        failure_reason: file.failure_reason.as_ref().map(failure_from_entry).transpose()?,
        cone_contractible: file.cone_contractible,
        cone: ConeComplex {
            underlying,
            layout,
            lambda,
            target,
            alpha,
        },
        bases,
    })
}

pub fn read_certificate(text: &str) -> Result<EigenCertificate, IoError> {
    certificate_from_file(&parse_json(text)?)
}

pub fn write_certificate(c: &EigenCertificate) -> String {
    to_canonical_json(&certificate_to_file(c))
}
