use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{parse_json, to_canonical_json, IoError};
use crate::arith::RingSpec;
use crate::complex::{validate_chain_map, ChainComplex, Convention, GradedMap};
use crate::cone::{ConeComplex, Homotopy};
use crate::linalg::Matrix;

/// `"Q"`, `"Z"`, or `{"Fp": p}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingTag {
    Named(String),
    PrimeField {
        #[serde(rename = "Fp")]
        p: u64,
    },
}

impl RingTag {
    pub fn from_ring(ring: RingSpec) -> Self {
        match ring {
            RingSpec::Rationals => RingTag::Named("Q".into()),
            RingSpec::Integers => RingTag::Named("Z".into()),
            RingSpec::PrimeField(p) => RingTag::PrimeField { p: p.get() },
        }
    }

    pub fn to_ring(&self) -> Result<RingSpec, IoError> {
        match self {
            RingTag::Named(s) if s == "Q" => Ok(RingSpec::Rationals),
            RingTag::Named(s) if s == "Z" => Ok(RingSpec::Integers),
            RingTag::Named(s) => Err(IoError::Validation(format!(
                "unknown ring {s:?}; expected \"Q\", \"Z\" or {{\"Fp\": p}}"
            ))),
            RingTag::PrimeField { p } => RingSpec::prime_field(*p)
                .map_err(|e| IoError::Validation(format!("ring: {e}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeRank {
    pub degree: i64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffEntry {
    pub from_degree: i64,
    pub entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeLabels {
    pub degree: i64,
    pub labels: Vec<String>,
}

/// Block sizes of a cone term: `lambda` is the shifted λ part, then `g`
/// and `im` split the target term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutEntry {
    pub degree: i64,
    pub lambda: usize,
    pub g: usize,
    pub im: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub ring: RingTag,
    pub convention: Convention,
    pub degrees: Vec<DegreeRank>,
    #[serde(default)]
    pub diffs: Vec<DiffEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<DegreeLabels>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub layout: Vec<LayoutEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    pub degree: i64,
    pub entries: Vec<Vec<String>>,
}

/// A graded map. `shift` and block degrees are in the file's convention:
/// the block at `degree` n maps `X_n` to `Y_{n + shift}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub ring: RingTag,
    pub convention: Convention,
    pub shift: i64,
    #[serde(default)]
    pub blocks: Vec<BlockEntry>,
}

pub(crate) fn render_matrix(a: &Matrix) -> Vec<Vec<String>> {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(ToString::to_string).collect())
        .collect()
}

/// Parses rows of scalar strings. `cols` fixes the width when there are no
/// rows to infer it from.
pub(crate) fn parse_matrix(
    ring: RingSpec,
    rows: &[Vec<String>],
    cols: Option<usize>,
    what: &str,
) -> Result<Matrix, IoError> {
    let width = rows.first().map_or(cols.unwrap_or(0), Vec::len);
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(IoError::Validation(format!(
                "{what}: row {i} has {} entries, expected {width}",
                row.len()
            )));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, s)| {
                ring.parse_scalar(s)
                    .map_err(|e| IoError::Validation(format!("{what}: entry ({i}, {j}): {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(parsed);
    }
    Ok(Matrix::from_rows(ring, width, out))
}

pub fn complex_to_file(x: &ChainComplex) -> ComplexFile {
    let mut degrees: Vec<DegreeRank> = x
        .user_ranks()
        .into_iter()
        .map(|(degree, rank)| DegreeRank { degree, rank })
        .collect();
    degrees.sort_by_key(|d| d.degree);
    ComplexFile {
        ring: RingTag::from_ring(x.ring()),
        convention: x.convention(),
        degrees,
        diffs: x
            .user_diffs()
            .into_iter()
            .map(|(from_degree, d)| DiffEntry {
                from_degree,
                entries: render_matrix(&d),
            })
            .collect(),
        labels: Vec::new(),
        layout: Vec::new(),
    }
}

/// Builds and validates the complex described by a file.
pub fn complex_from_file(file: &ComplexFile) -> Result<ChainComplex, IoError> {
    let ring = file.ring.to_ring()?;
    let conv = file.convention;
    let mut ranks = BTreeMap::new();
    for d in &file.degrees {
        if ranks.insert(d.degree, d.rank).is_some() {
            return Err(IoError::Validation(format!("degree {} listed twice", d.degree)));
        }
    }
    let rank_at = |n: i64| ranks.get(&n).copied().unwrap_or(0);
    let mut diffs = BTreeMap::new();
    for d in &file.diffs {
        let target = conv.internal(conv.internal(d.from_degree) + 1);
        let what = format!("differential from degree {}", d.from_degree);
        let m = parse_matrix(ring, &d.entries, Some(rank_at(d.from_degree)), &what)?;
        let expected = (rank_at(target), rank_at(d.from_degree));
        if m.shape() != expected && !(m.rows() == 0 && expected.0 == 0) {
            return Err(IoError::Validation(format!(
                "{what} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                expected.0,
                expected.1
            )));
        }
        if !ranks.contains_key(&d.from_degree) || !ranks.contains_key(&target) {
            if m.is_zero() {
                continue;
            }
            return Err(IoError::Validation(format!("{what} leaves the listed degrees")));
        }
        if diffs.insert(d.from_degree, m).is_some() {
            return Err(IoError::Validation(format!("{what} listed twice")));
        }
    }
    let x = ChainComplex::new(ring, conv, &ranks, &diffs)
        .map_err(|e| IoError::Validation(e.to_string()))?;
    x.validate()
        .map_err(|v| IoError::Validation(format!("d∘d ≠ 0: {v}")))?;
    Ok(x)
}

pub fn read_complex_file(text: &str) -> Result<ComplexFile, IoError> {
    parse_json(text)
}

pub fn read_complex(text: &str) -> Result<ChainComplex, IoError> {
    complex_from_file(&read_complex_file(text)?)
}

pub fn write_complex(x: &ChainComplex) -> String {
    to_canonical_json(&complex_to_file(x))
}

pub fn cone_to_file(cone: &ConeComplex) -> ComplexFile {
    let z = &cone.underlying;
    let mut file = complex_to_file(z);
    file.layout = cone
        .layout
        .iter()
        .map(|(m, s)| LayoutEntry {
            degree: z.user_degree(m),
            lambda: s.lambda,
            g: s.g,
            im: s.im,
        })
        .collect();
    file.layout.sort_by_key(|l| l.degree);
    file
}

pub fn write_cone(cone: &ConeComplex) -> String {
    to_canonical_json(&cone_to_file(cone))
}

pub fn map_to_file(f: &GradedMap, convention: Convention) -> MapFile {
    let mut blocks: Vec<BlockEntry> = f
        .blocks()
        .filter(|(_, b)| b.rows() * b.cols() > 0)
        .map(|(m, b)| BlockEntry {
            degree: convention.internal(m),
            entries: render_matrix(b),
        })
        .collect();
    blocks.sort_by_key(|b| b.degree);
    MapFile {
        ring: RingTag::from_ring(f.ring()),
        convention,
        shift: convention.internal_shift(f.shift()),
        blocks,
    }
}

pub fn map_from_file(file: &MapFile) -> Result<GradedMap, IoError> {
    let ring = file.ring.to_ring()?;
    let conv = file.convention;
    let mut f = GradedMap::new(ring, conv.internal_shift(file.shift));
    for b in &file.blocks {
        let m = conv.internal(b.degree);
        if f.get(m).is_some() {
            return Err(IoError::Validation(format!("block at degree {} listed twice", b.degree)));
        }
        let what = format!("block at degree {}", b.degree);
        f.insert(m, parse_matrix(ring, &b.entries, None, &what)?);
    }
    Ok(f)
}

pub fn read_map(text: &str) -> Result<GradedMap, IoError> {
    map_from_file(&parse_json(text)?)
}

pub fn write_map(f: &GradedMap, convention: Convention) -> String {
    to_canonical_json(&map_to_file(f, convention))
}

pub fn homotopy_to_file(psi: &Homotopy, convention: Convention) -> MapFile {
    map_to_file(psi.as_map(), convention)
}

pub fn homotopy_from_file(file: &MapFile) -> Result<Homotopy, IoError> {
    Homotopy::from_map(map_from_file(file)?).map_err(|e| IoError::Validation(e.to_string()))
}

pub fn read_homotopy(text: &str) -> Result<Homotopy, IoError> {
    homotopy_from_file(&parse_json(text)?)
}

pub fn write_homotopy(psi: &Homotopy, convention: Convention) -> String {
    to_canonical_json(&homotopy_to_file(psi, convention))
}

/// Checks that `alpha` read from a file is a chain map `lambda -> f`.
pub fn check_eigenmap(
    alpha: &GradedMap,
    lambda: &ChainComplex,
    f: &ChainComplex,
) -> Result<(), IoError> {
    validate_chain_map(alpha, lambda, f)
        .map_err(|v| IoError::Validation(format!("not a chain map: {v}")))
}
