//! JSON input formats.
//!
//! Manifold files are either explicit blocks
//!
//! ```json
//! {"genus": 1, "blocks": {"R": [[1]], "P": [[2]], "S": [[1]], "Q": [[1]]}}
//! ```
//!
//! or constructions that resolve to blocks before anything is computed:
//!
//! ```json
//! {"construct": "lens", "p": 5, "q": 2}
//! {"construct": "connected_sum", "parts": [ ... ]}
//! {"construct": "stabilize", "base": { ... }}
//! ```
//!
//! Link files carry the class and the framing:
//!
//! ```json
//! {"homology_class": [1], "framing_mode": "direct", "p_fold_self_linking": 0}
//! {"homology_class": [1], "framing_mode": "decomposed",
//!  "self_linking_trivial": 0, "boundary_intersections": [0]}
//! ```

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exactalg::{ExactAlgError, IntMatrix};
use crate::gluing::{self, GluingData, GluingError};
use crate::invariants::LinkPresentation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ManifoldFile {
    Explicit(ExplicitManifold),
    Constructed(Construction),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitManifold {
    pub genus: usize,
    pub blocks: Blocks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Blocks {
    #[serde(rename = "R")]
    pub r: Vec<Vec<i64>>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<i64>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<i64>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construct", rename_all = "snake_case", deny_unknown_fields)]
pub enum Construction {
    Lens { p: i64, q: i64 },
    ConnectedSum { parts: Vec<ManifoldFile> },
    Stabilize { base: Box<ManifoldFile> },
}

#[derive(Debug, thiserror::Error)]
pub enum ResolveError {
    #[error("connected_sum needs at least one part")]
    EmptyConnectedSum,
    #[error("block {block}: {source}")]
    Matrix { block: char, source: ExactAlgError },
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error("matrix entry {0} does not fit in a 64-bit JSON integer")]
    EntryTooLarge(BigInt),
}

fn block(name: char, rows: &[Vec<i64>]) -> Result<IntMatrix, ResolveError> {
    IntMatrix::from_rows(rows).map_err(|source| ResolveError::Matrix {
        block: name,
        source,
    })
}

impl ManifoldFile {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Resolves constructions to explicit, validated gluing data.
    pub fn resolve(&self) -> Result<GluingData, ResolveError> {
        match self {
            ManifoldFile::Explicit(e) => {
                let b = &e.blocks;
                Ok(gluing::validate(
                    e.genus,
                    block('R', &b.r)?,
                    block('P', &b.p)?,
                    block('S', &b.s)?,
                    block('Q', &b.q)?,
                )?)
            }
            ManifoldFile::Constructed(Construction::Lens { p, q }) => Ok(GluingData::lens(*p, *q)?),
            ManifoldFile::Constructed(Construction::ConnectedSum { parts }) => {
                let mut resolved = parts.iter().map(ManifoldFile::resolve);
                let first = resolved.next().ok_or(ResolveError::EmptyConnectedSum)??;
                resolved.try_fold(first, |acc, part| Ok(acc.connected_sum(&part?)))
            }
            ManifoldFile::Constructed(Construction::Stabilize { base }) => {
                Ok(base.resolve()?.stabilize())
            }
        }
    }

    /// Explicit-block file for `gd`.
    pub fn from_gluing(gd: &GluingData) -> Result<Self, ResolveError> {
        let rows = |m: &IntMatrix| -> Result<Vec<Vec<i64>>, ResolveError> {
            m.to_rows()
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|x| i64::try_from(&x).map_err(|_| ResolveError::EntryTooLarge(x)))
                        .collect()
                })
                .collect()
        };
        Ok(ManifoldFile::Explicit(ExplicitManifold {
            genus: gd.genus(),
            blocks: Blocks {
                r: rows(gd.r())?,
                p: rows(gd.p())?,
                s: rows(gd.s())?,
                q: rows(gd.q())?,
            },
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "framing_mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum LinkFile {
    Direct {
        homology_class: Vec<i64>,
        p_fold_self_linking: i64,
    },
    Decomposed {
        homology_class: Vec<i64>,
        self_linking_trivial: i64,
        boundary_intersections: Vec<i64>,
    },
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().copied().map(BigInt::from).collect()
}

impl LinkFile {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_presentation(&self) -> LinkPresentation {
        match self {
            LinkFile::Direct {
                homology_class,
                p_fold_self_linking,
            } => LinkPresentation::direct(big(homology_class), *p_fold_self_linking),
            LinkFile::Decomposed {
                homology_class,
                self_linking_trivial,
                boundary_intersections,
            } => LinkPresentation::decomposed(
                big(homology_class),
                *self_linking_trivial,
                big(boundary_intersections),
            ),
        }
    }
}
