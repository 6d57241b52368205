use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{make_disjoint, ParityInstance};
use crate::error::{Error, Result};
use crate::matroid::MatroidDescriptor;
use crate::scalar::Scalar;

/// JSON instance schema. Weights are strings so they stay exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub k: usize,
    pub vertices: usize,
    pub edges: Vec<EdgeRecord>,
    pub matroid: MatroidDescriptor,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub verts: Vec<usize>,
    #[serde(with = "crate::scalar::ratio_string")]
    pub w: BigRational,
}

impl InstanceFile {
    pub fn from_instance<W: Scalar>(instance: &ParityInstance<W>) -> Result<Self> {
        Ok(Self {
            k: instance.k(),
            vertices: instance.vertex_count(),
            edges: instance
                .edges()
                .iter()
                .zip(instance.weights())
                .map(|(verts, w)| EdgeRecord {
                    verts: verts.clone(),
                    w: w.to_ratio(),
                })
                .collect(),
            matroid: instance.matroid().descriptor()?,
        })
    }

    /// Builds the instance exactly as written, without normalization.
    pub fn to_raw_instance<W: Scalar>(&self) -> Result<ParityInstance<W>> {
        let weights = self
            .edges
            .iter()
            .map(|e| {
                W::from_ratio(&e.w)
                    .ok_or_else(|| Error::Parse(format!("weight {} does not fit the scalar type", e.w)))
            })
            .collect::<Result<Vec<W>>>()?;
        ParityInstance::new(
            self.k,
            self.vertices,
            self.edges.iter().map(|e| e.verts.clone()).collect(),
            weights,
            self.matroid.build()?,
        )
    }

    /// Builds the instance and brings it into disjoint normal form.
    pub fn to_instance<W: Scalar>(&self) -> Result<ParityInstance<W>> {
        Ok(make_disjoint(&self.to_raw_instance()?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl<W: Scalar> ParityInstance<W> {
    pub fn to_json(&self) -> Result<String> {
        Ok(InstanceFile::from_instance(self)?.to_json())
    }

    /// Parses the JSON schema and normalizes to disjoint form.
    pub fn from_json(text: &str) -> Result<Self> {
        InstanceFile::from_json(text)?.to_instance()
    }
}
