use serde::{Deserialize, Serialize};

use super::{Kind, Matroid};
use crate::error::{Error, Result};

/// File representation of a matroid.
///
/// `union` parts are laid out one after another: part `i` occupies the labels
/// following those of parts `0..i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MatroidDescriptor {
    Uniform {
        n: usize,
        r: usize,
    },
    Partition {
        blocks: Vec<Vec<usize>>,
        capacities: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
    Linear {
        field_prime: u64,
        columns: Vec<Vec<i64>>,
    },
    Free {
        n: usize,
    },
    Union {
        parts: Vec<MatroidDescriptor>,
    },
    CopyCap {
        base: Box<MatroidDescriptor>,
        origin: Vec<usize>,
    },
}

impl MatroidDescriptor {
    pub fn build(&self) -> Result<Matroid> {
        match self {
            Self::Uniform { n, r } => Ok(Matroid::uniform(*n, *r)),
            Self::Partition { blocks, capacities } => {
                Matroid::partition(blocks.clone(), capacities.clone())
            }
            Self::Graphic { vertices, edges } => {
                Matroid::graphic(*vertices, edges.iter().map(|&[u, v]| (u, v)).collect())
            }
            Self::Linear {
                field_prime,
                columns,
            } => Matroid::linear(*field_prime, columns.clone()),
            Self::Free { n } => Ok(Matroid::free(*n)),
            Self::Union { parts } => {
                let mut offset = 0;
                let mut built = Vec::with_capacity(parts.len());
                for part in parts {
                    let m = part.build()?;
                    let width = m.len();
                    built.push(m.shifted(offset));
                    offset += width;
                }
                Matroid::union(&built)
            }
            Self::CopyCap { base, origin } => Matroid::copy_cap(&base.build()?, origin.clone()),
        }
    }
}

impl Matroid {
    /// File descriptor for this oracle. Restrictions, contractions and coloop
    /// extensions have none.
    pub fn descriptor(&self) -> Result<MatroidDescriptor> {
        let n = self.len();
        match &self.node.kind {
            Kind::Free => Ok(MatroidDescriptor::Free { n }),
            Kind::Uniform { rank } => Ok(MatroidDescriptor::Uniform { n, r: *rank }),
            Kind::Partition {
                blocks, capacities, ..
            } => Ok(MatroidDescriptor::Partition {
                blocks: blocks.clone(),
                capacities: capacities.clone(),
            }),
            Kind::Graphic { vertices, edges } => Ok(MatroidDescriptor::Graphic {
                vertices: *vertices,
                edges: edges.iter().map(|&(u, v)| [u, v]).collect(),
            }),
            Kind::Linear(matrix) => Ok(MatroidDescriptor::Linear {
                field_prime: matrix.prime(),
                columns: matrix.raw_columns().to_vec(),
            }),
            Kind::Union { parts, .. } => {
                let mut expected = 0;
                let mut out = Vec::with_capacity(parts.len());
                for part in parts {
                    let (inner, offset) = match &part.node.kind {
                        Kind::Shifted { base, offset } => (base, *offset),
                        _ => (part, 0),
                    };
                    if offset != expected || !inner.ground().is_contiguous() {
                        return Err(Error::NotSerializable("union"));
                    }
                    expected += inner.len();
                    out.push(inner.descriptor()?);
                }
                Ok(MatroidDescriptor::Union { parts: out })
            }
            Kind::CopyCap { base, origin } => {
                if !base.ground().is_contiguous() {
                    return Err(Error::NotSerializable("copy_cap"));
                }
                Ok(MatroidDescriptor::CopyCap {
                    base: Box::new(base.descriptor()?),
                    origin: origin.clone(),
                })
            }
            Kind::Shifted { .. } => Err(Error::NotSerializable("shifted")),
            Kind::Restricted { .. } => Err(Error::NotSerializable("restricted")),
            Kind::Contracted { .. } => Err(Error::NotSerializable("contracted")),
            Kind::Coloops { .. } => Err(Error::NotSerializable("coloops")),
        }
    }
}
