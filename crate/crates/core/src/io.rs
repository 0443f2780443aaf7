//! JSON forms: the b-matrix input file and dense complex matrices as
//! row-major `[re, im]` pairs.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::C64;

/// `{"n": <int>, "entries": [[[re, im], ...], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BMatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl BMatrixFile {
    pub fn from_matrix(m: &CMat) -> Self {
        Self { n: m.nrows(), entries: dense_rows(m) }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        if self.entries.len() != self.n {
            return Err(Error::InvalidInput(format!("expected {} rows, found {}", self.n, self.entries.len())));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::InvalidInput(format!("row {i} has {} entries, expected {}", row.len(), self.n)));
            }
        }
        Ok(CMat::from_fn(self.n, self.n, |r, c| {
            let [re, im] = self.entries[r][c];
            C64::new(re, im)
        }))
    }
}

pub fn parse_b_matrix(json: &str) -> Result<CMat> {
    let file: BMatrixFile =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("b-matrix file: {e}")))?;
    file.to_matrix()
}

pub fn dense_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

/// A dense matrix in the report format.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&CMat> for DenseMatrixJson {
    fn from(m: &CMat) -> Self {
        Self { rows: m.nrows(), cols: m.ncols(), entries: dense_rows(m) }
    }
}

/// Serialises a complex scalar as `[re, im]`.
pub fn serialize_complex<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub fn serialize_complex_opt<S: Serializer>(z: &Option<C64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    z.map(|z| [z.re, z.im]).serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_kls_b() {
        let json = r#"{"n": 3, "entries": [[[0,0],[0,0],[2,0]],[[0,0],[1,0],[0,0]],[[0.5,0],[0,0],[0,0]]]}"#;
        let b = parse_b_matrix(json).unwrap();
        assert_eq!(b[(0, 2)], C64::new(2.0, 0.0));
        assert_eq!(b[(2, 0)], C64::new(0.5, 0.0));
        assert_eq!(BMatrixFile::from_matrix(&b).to_matrix().unwrap(), b);
    }

    #[test]
    fn rejects_bad_shapes() {
        let short_row = r#"{"n": 2, "entries": [[[1,0],[0,0]],[[0,0]]]}"#;
        assert!(matches!(parse_b_matrix(short_row), Err(Error::InvalidInput(_))));
        let missing_row = r#"{"n": 2, "entries": [[[1,0],[0,0]]]}"#;
        assert!(matches!(parse_b_matrix(missing_row), Err(Error::InvalidInput(_))));
        assert!(parse_b_matrix("{\"n\": 2}").is_err());
    }
}
