//! The JSON complex document:
//! `{"format": 1, "facets": [[..]], "facet_weights": [..]?, "partition": {"v": side}?, "metadata": {..}?}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::simplex::Simplex;
use crate::weights::{extend_top_weight, WeightedComplex};

pub const FORMAT_VERSION: u32 = 1;
/// Largest dimension a document may declare.
pub const MAX_DOCUMENT_DIMENSION: usize = 8;

fn default_format() -> u32 {
    FORMAT_VERSION
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    #[serde(default = "default_format")]
    pub format: u32,
    pub facets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facet_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<BTreeMap<usize, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Map<String, Value>>,
}

/// Parses and validates a document.
pub fn parse_complex(text: &str) -> Result<ComplexDocument> {
    let doc: ComplexDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.validate()?;
    Ok(doc)
}

impl ComplexDocument {
    pub fn new(
        complex: &SimplicialComplex,
        facet_weights: Option<Vec<f64>>,
        partition: Option<&Partition>,
        metadata: Option<Map<String, Value>>,
    ) -> Self {
        ComplexDocument {
            format: FORMAT_VERSION,
            facets: complex.facets().iter().map(|f| f.vertices().to_vec()).collect(),
            facet_weights,
            partition: partition.map(|p| p.map().clone()),
            metadata,
        }
    }

    /// Structural checks, then a full build.
    pub fn validate(&self) -> Result<()> {
        if self.format != FORMAT_VERSION {
            return Err(Error::Validation(format!(
                "unsupported format {}, expected {FORMAT_VERSION}",
                self.format
            )));
        }
        if self.facets.is_empty() {
            return Err(Error::Validation("no facets".into()));
        }
        let size = self.facets[0].len();
        if size == 0 || size > MAX_DOCUMENT_DIMENSION + 1 {
            return Err(Error::Validation(format!(
                "facet size {size} outside 1..={}",
                MAX_DOCUMENT_DIMENSION + 1
            )));
        }
        let mut seen = BTreeSet::new();
        for (i, f) in self.facets.iter().enumerate() {
            if f.len() != size {
                return Err(Error::Validation(format!(
                    "facet {i} has {} vertices, expected {size}",
                    f.len()
                )));
            }
            let s = Simplex::new(f.clone())
                .map_err(|_| Error::Validation(format!("facet {i} repeats a vertex")))?;
            if !seen.insert(s) {
                return Err(Error::Validation(format!("facet {i} listed twice")));
            }
        }
        if let Some(w) = &self.facet_weights {
            if w.len() != self.facets.len() {
                return Err(Error::Validation(format!(
                    "{} facet weights for {} facets",
                    w.len(),
                    self.facets.len()
                )));
            }
            if let Some((i, v)) = w.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::Validation(format!("facet weight {i} is {v}, must be positive")));
            }
        }
        self.build().map(|_| ()).map_err(|e| match e {
            Error::Validation(_) => e,
            other => Error::Validation(other.to_string()),
        })
    }

    /// The weighted complex (homogeneous unless facet weights are given) and partition.
    pub fn build(&self) -> Result<(WeightedComplex, Option<Partition>)> {
        let x = SimplicialComplex::from_facets(self.facets.iter().cloned())?;
        let wc = match &self.facet_weights {
            None => WeightedComplex::homogeneous(x),
            Some(w) => {
                let top = self
                    .facets
                    .iter()
                    .zip(w)
                    .map(|(f, &v)| Ok((Simplex::new(f.clone())?, v)))
                    .collect::<Result<BTreeMap<Simplex, f64>>>()?;
                let m = extend_top_weight(&x, &top)?;
                WeightedComplex::new(x, m)?
            }
        };
        let partition = match &self.partition {
            None => None,
            Some(map) => {
                let p = Partition::from_map(map.clone());
                p.validate(wc.complex())?;
                Some(p)
            }
        };
        Ok((wc, partition))
    }

    /// Indented JSON, one facet per line, with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut fields = vec![format!("  \"format\": {}", self.format)];
        let facets: Vec<String> = self.facets.iter().map(|f| format!("    {}", compact(f))).collect();
        fields.push(format!("  \"facets\": [\n{}\n  ]", facets.join(",\n")));
        if let Some(w) = &self.facet_weights {
            fields.push(format!("  \"facet_weights\": {}", compact(w)));
        }
        if let Some(p) = &self.partition {
            fields.push(format!("  \"partition\": {}", nested(p)));
        }
        if let Some(m) = &self.metadata {
            fields.push(format!("  \"metadata\": {}", nested(m)));
        }
        format!("{{\n{}\n}}\n", fields.join(",\n"))
    }
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("document serializes")
}

/// Pretty JSON indented to sit one level inside the document object.
fn nested<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v)
        .expect("document serializes")
        .replace('\n', "\n  ")
}
