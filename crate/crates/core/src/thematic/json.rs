//! Bundle file format.
//!
//! ```json
//! {"m": 2, "n": 2,
//!  "left":  [{"offset": 0, "v": <symbol>, "theta": <symbol>, "side": "left"}, ...],
//!  "diag":  [{"t": 1.0, "u": <symbol>}, ...],
//!  "right": [{"offset": 0, "v": <symbol>, "theta": <symbol>, "side": "right"}, ...],
//!  "residual": <symbol> | null}
//! ```
//! `theta` is `null` for `1 × 1` blocks.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{lift, DiagEntry, FactorBundle, LiftedBlock, Side, ThematicBlock};
use crate::circle_fn::SymbolFile;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockFile {
    pub offset: usize,
    pub v: SymbolFile,
    pub theta: Option<SymbolFile>,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagFile {
    pub t: f64,
    pub u: SymbolFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub m: usize,
    pub n: usize,
    pub left: Vec<BlockFile>,
    pub diag: Vec<DiagFile>,
    pub right: Vec<BlockFile>,
    pub residual: Option<SymbolFile>,
}

impl BlockFile {
    fn into_block(self) -> Result<LiftedBlock> {
        let theta = self.theta.map(SymbolFile::into_function).transpose()?;
        Ok(lift(
            ThematicBlock::new(self.v.into_function()?, theta, self.side)?,
            self.offset,
        ))
    }

    fn from_block(b: &LiftedBlock) -> Self {
        BlockFile {
            offset: b.offset,
            v: SymbolFile::from_function(b.inner.v()),
            theta: b.inner.theta().map(SymbolFile::from_function),
            side: b.side(),
        }
    }
}

impl BundleFile {
    pub fn into_bundle(self) -> Result<FactorBundle> {
        let blocks = |v: Vec<BlockFile>| {
            v.into_iter()
                .map(BlockFile::into_block)
                .collect::<Result<Vec<_>>>()
        };
        let diag = self
            .diag
            .into_iter()
            .map(|d| {
                Ok(DiagEntry {
                    t: d.t,
                    u: d.u.into_function()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let residual = self.residual.map(SymbolFile::into_function).transpose()?;
        FactorBundle::new(
            self.m,
            self.n,
            blocks(self.left)?,
            diag,
            blocks(self.right)?,
            residual,
        )
    }

    pub fn from_bundle(b: &FactorBundle) -> Self {
        BundleFile {
            m: b.m(),
            n: b.n(),
            left: b.left().iter().map(BlockFile::from_block).collect(),
            diag: b
                .diag()
                .iter()
                .map(|d| DiagFile {
                    t: d.t,
                    u: SymbolFile::from_function(&d.u),
                })
                .collect(),
            right: b.right().iter().map(BlockFile::from_block).collect(),
            residual: b.residual().map(SymbolFile::from_function),
        }
    }
}

impl FactorBundle {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: BundleFile = serde_json::from_str(s)?;
        file.into_bundle()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&BundleFile::from_bundle(self)).expect("plain data serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }
}
