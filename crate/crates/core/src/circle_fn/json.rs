//! Symbol file format.
//!
//! ```json
//! {"rows": 2, "cols": 2, "kind": "laurent",
//!  "terms": [{"power": -2, "matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]}]}
//! ```
//! Rational symbols add `"denominator": [{"power": k, "value": [re, im]}]`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CircleFunction, SymbolKind};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    Laurent,
    Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub power: i64,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenominatorTerm {
    pub power: i64,
    pub value: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolFile {
    pub rows: usize,
    pub cols: usize,
    pub kind: KindTag,
    pub terms: Vec<TermFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<Vec<DenominatorTerm>>,
}

impl SymbolFile {
    pub fn into_function(self) -> Result<CircleFunction> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            if t.matrix.len() != self.rows || t.matrix.iter().any(|r| r.len() != self.cols) {
                return Err(Error::InvalidSymbol(format!(
                    "coefficient of z^{} does not have shape {}x{}",
                    t.power, self.rows, self.cols
                )));
            }
            let m = CMatrix::from_fn(self.rows, self.cols, |i, j| {
                let [re, im] = t.matrix[i][j];
                Complex64::new(re, im)
            });
            terms.push((t.power, m));
        }
        match (self.kind, self.denominator) {
            (KindTag::Laurent, None) => CircleFunction::laurent(self.rows, self.cols, terms),
            (KindTag::Laurent, Some(_)) => Err(Error::InvalidSymbol(
                "laurent symbols must not carry a denominator".into(),
            )),
            (KindTag::Rational, None) => Err(Error::InvalidSymbol(
                "rational symbols need a denominator".into(),
            )),
            (KindTag::Rational, Some(den)) => CircleFunction::rational(
                self.rows,
                self.cols,
                terms,
                den.into_iter()
                    .map(|d| (d.power, Complex64::new(d.value[0], d.value[1])))
                    .collect(),
            ),
        }
    }

    pub fn from_function(f: &CircleFunction) -> Self {
        let terms = f
            .terms()
            .iter()
            .map(|(k, m)| TermFile {
                power: *k,
                matrix: (0..m.nrows())
                    .map(|i| {
                        (0..m.ncols())
                            .map(|j| [m[(i, j)].re, m[(i, j)].im])
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        let denominator = f.denominator().map(|p| {
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| DenominatorTerm {
                    power: k as i64,
                    value: [c.re, c.im],
                })
                .collect()
        });
        SymbolFile {
            rows: f.rows(),
            cols: f.cols(),
            kind: match f.kind() {
                SymbolKind::Laurent => KindTag::Laurent,
                SymbolKind::Rational => KindTag::Rational,
            },
            terms,
            denominator,
        }
    }
}

impl CircleFunction {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: SymbolFile = serde_json::from_str(s)?;
        file.into_function()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&SymbolFile::from_function(self))
            .expect("plain data serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }
}
