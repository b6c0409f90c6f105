//! JSON formats for complexes, graded maps, homotopies, cones and
//! certificates, plus the simplicial-complex reader.
//!
//! Every scalar is a JSON string in the ring's text form. Output is
//! canonical: object keys sorted, lists ordered by degree, two-space
//! indentation and a trailing newline, so `write(read(f)) == f` for any
//! file already in canonical form.

mod certificate;
mod complex_file;
mod simplicial;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

pub use certificate::{certificate_from_file, certificate_to_file, read_certificate, write_certificate, CertificateFile};
pub use complex_file::{
    check_eigenmap, complex_from_file, complex_to_file, cone_to_file, homotopy_from_file, homotopy_to_file,
    map_from_file, map_to_file, read_complex, read_complex_file, read_homotopy, read_map,
    write_complex, write_cone, write_homotopy, write_map, BlockEntry, ComplexFile, DegreeLabels,
    DegreeRank, DiffEntry, LayoutEntry, MapFile, RingTag,
};
pub use simplicial::{
    read_simplicial, simplicial_to_chain, SimplicialChain, SimplicialComplexFile, Vertices,
    MAX_FACET_VERTICES,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("facet {facet} refers to vertex {index}, but there are only {vertices} vertices")]
    BadIndex {
        facet: usize,
        index: usize,
        vertices: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub(crate) fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// Canonical serialization: sorted keys, pretty-printed, newline-terminated.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("file models always serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values always serialize");
    s.push('\n');
    s
}
