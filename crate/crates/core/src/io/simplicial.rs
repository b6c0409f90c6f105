use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{parse_json, IoError};
use crate::arith::RingSpec;
use crate::complex::{ChainComplex, Convention};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Vertices {
    Count(usize),
    Labels(Vec<String>),
}

/// Facets as lists of vertex indices. Each simplex is oriented by the
/// vertex order in which it is first written (directly or as a face of an
/// earlier facet).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialComplexFile {
    pub vertices: Vertices,
    pub facets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialChain {
    /// Chain convention, degrees `0..=dim`.
    pub complex: ChainComplex,
    /// Basis labels by degree, in basis order.
    pub labels: BTreeMap<i64, Vec<String>>,
}

/// Largest facet accepted, in vertices. Each facet contributes `2^k - 1`
/// faces.
pub const MAX_FACET_VERTICES: usize = 16;

pub fn read_simplicial(text: &str) -> Result<SimplicialComplexFile, IoError> {
    parse_json(text)
}

fn permutation_sign(from: &[usize], to: &[usize]) -> i64 {
    let pos: Vec<usize> = from
        .iter()
        .map(|v| to.iter().position(|w| w == v).expect("same vertex set"))
        .collect();
    let mut inversions = 0;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            if pos[i] > pos[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

struct Simplices {
    by_dim: Vec<Vec<Vec<usize>>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Simplices {
    fn add(&mut self, simplex: &[usize]) {
        let mut key = simplex.to_vec();
        key.sort_unstable();
        if self.index.contains_key(&key) {
            return;
        }
        let dim = simplex.len() - 1;
        if self.by_dim.len() <= dim {
            self.by_dim.resize(dim + 1, Vec::new());
        }
        self.index.insert(key, self.by_dim[dim].len());
        self.by_dim[dim].push(simplex.to_vec());
        if dim > 0 {
            for i in (0..simplex.len()).rev() {
                self.add(&face(simplex, i));
            }
        }
    }

    fn stored(&self, simplex: &[usize]) -> (usize, &[usize]) {
        let mut key = simplex.to_vec();
        key.sort_unstable();
        let i = self.index[&key];
        (i, &self.by_dim[simplex.len() - 1][i])
    }
}

fn face(simplex: &[usize], i: usize) -> Vec<usize> {
    let mut f = simplex.to_vec();
    f.remove(i);
    f
}

/// Simplicial chain complex with `∂[v_0..v_k] = Σ (-1)^i [.. v̂_i ..]`,
/// each face re-expressed in its stored orientation.
pub fn simplicial_to_chain(
    sc: &SimplicialComplexFile,
    ring: RingSpec,
) -> Result<SimplicialChain, IoError> {
    let vertex_labels: Vec<String> = match &sc.vertices {
        Vertices::Count(n) => (0..*n).map(|i| format!("v{i}")).collect(),
        Vertices::Labels(l) => l.clone(),
    };
    let n = vertex_labels.len();
    for (k, facet) in sc.facets.iter().enumerate() {
        if facet.is_empty() {
            return Err(IoError::Validation(format!("facet {k} is empty")));
        }
        if facet.len() > MAX_FACET_VERTICES {
            return Err(IoError::Validation(format!(
                "facet {k} has {} vertices, more than {MAX_FACET_VERTICES}",
                facet.len()
            )));
        }
        if let Some(&index) = facet.iter().find(|&&v| v >= n) {
            return Err(IoError::BadIndex {
                facet: k,
                index,
                vertices: n,
            });
        }
        let mut sorted = facet.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != facet.len() {
            return Err(IoError::Validation(format!("facet {k} repeats a vertex")));
        }
    }

    let mut s = Simplices {
        by_dim: vec![(0..n).map(|v| vec![v]).collect()],
        index: (0..n).map(|v| (vec![v], v)).collect(),
    };
    for facet in &sc.facets {
        s.add(facet);
    }

    let ranks: BTreeMap<i64, usize> = s
        .by_dim
        .iter()
        .enumerate()
        .map(|(k, list)| (k as i64, list.len()))
        .collect();
    let mut diffs = BTreeMap::new();
    for k in 1..s.by_dim.len() {
        let mut d = Matrix::zeros(ring, s.by_dim[k - 1].len(), s.by_dim[k].len());
        for (col, simplex) in s.by_dim[k].iter().enumerate() {
            for i in 0..simplex.len() {
                let f = face(simplex, i);
                let (row, stored) = s.stored(&f);
                let sign = if i % 2 == 0 { 1 } else { -1 } * permutation_sign(&f, stored);
                let v = d.get(row, col) + &ring.from_i64(sign);
                d.set(row, col, v);
            }
        }
        diffs.insert(k as i64, d);
    }
    let complex = ChainComplex::new(ring, Convention::Chain, &ranks, &diffs)
        .map_err(|e| IoError::Validation(e.to_string()))?;

    let joiner = if vertex_labels.iter().all(|l| l.chars().count() == 1) {
        ""
    } else {
        ","
    };
    let labels = s
        .by_dim
        .iter()
        .enumerate()
        .map(|(k, list)| {
            let names = list
                .iter()
                .map(|simplex| {
                    let parts: Vec<&str> =
                        simplex.iter().map(|&v| vertex_labels[v].as_str()).collect();
                    format!("[{}]", parts.join(joiner))
                })
                .collect();
            (k as i64, names)
        })
        .collect();
    Ok(SimplicialChain { complex, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::homology;

    fn labelled(facets: &[&[usize]]) -> SimplicialComplexFile {
        SimplicialComplexFile {
            vertices: Vertices::Labels(vec!["A".into(), "B".into(), "C".into()]),
            facets: facets.iter().map(|f| f.to_vec()).collect(),
        }
    }

    #[test]
    fn triangle_boundary() {
        let sc = labelled(&[&[0, 1], &[1, 2], &[2, 0]]);
        let out = simplicial_to_chain(&sc, RingSpec::Integers).unwrap();
        let x = &out.complex;
        assert_eq!(
            x.diff(x.internal_degree(1)),
            Matrix::from_i64(RingSpec::Integers, &[&[-1, 0, 1], &[1, -1, 0], &[0, 1, -1]])
        );
        assert_eq!(out.labels[&1], vec!["[AB]", "[BC]", "[CA]"]);
        assert_eq!(out.labels[&0], vec!["[A]", "[B]", "[C]"]);
        let h = homology(x);
        assert_eq!(h.betti_numbers(), BTreeMap::from([(0, 1), (1, 1)]));
        assert!(h.first_torsion().is_none());
    }

    #[test]
    fn single_vertex() {
        let sc = SimplicialComplexFile {
            vertices: Vertices::Count(1),
            facets: vec![vec![0]],
        };
        let out = simplicial_to_chain(&sc, RingSpec::Integers).unwrap();
        assert_eq!(homology(&out.complex).betti_numbers(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn full_two_simplex() {
        let sc = labelled(&[&[0, 1, 2]]);
        let out = simplicial_to_chain(&sc, RingSpec::Integers).unwrap();
        assert_eq!(out.labels[&1], vec!["[AB]", "[AC]", "[BC]"]);
        let h = homology(&out.complex);
        assert_eq!(h.betti_numbers(), BTreeMap::from([(0, 1), (1, 0), (2, 0)]));
        assert!(h.first_torsion().is_none());
    }

    #[test]
    fn bad_index() {
        let sc = labelled(&[&[0, 3]]);
        assert!(matches!(
            simplicial_to_chain(&sc, RingSpec::Integers),
            Err(IoError::BadIndex { facet: 0, index: 3, vertices: 3 })
        ));
    }

    #[test]
    fn repeated_empty_and_oversized_facets() {
        assert!(simplicial_to_chain(&labelled(&[&[1, 1]]), RingSpec::Integers).is_err());
        let big = SimplicialComplexFile {
            vertices: Vertices::Count(40),
            facets: vec![(0..40).collect()],
        };
        assert!(matches!(
            simplicial_to_chain(&big, RingSpec::Integers),
            Err(IoError::Validation(_))
        ));
        assert!(simplicial_to_chain(&labelled(&[&[]]), RingSpec::Integers).is_err());
    }

    #[test]
    fn parses_both_vertex_forms() {
        let a = read_simplicial(r#"{"vertices": 2, "facets": [[0, 1]]}"#).unwrap();
        assert_eq!(a.vertices, Vertices::Count(2));
        let b = read_simplicial(r#"{"vertices": ["x", "y"], "facets": [[1, 0]]}"#).unwrap();
        let out = simplicial_to_chain(&b, RingSpec::Rationals).unwrap();
        assert_eq!(out.labels[&1], vec!["[yx]"]);
    }
}
