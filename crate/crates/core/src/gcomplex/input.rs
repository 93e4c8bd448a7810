use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouprep::FiniteGroup;

use super::action::GComplex;
use super::complex::SimplicialComplex;

/// A vertex label as written in the input: a string or an integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexLabel {
    Int(i64),
    Name(String),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Int(i) => write!(f, "{i}"),
            VertexLabel::Name(s) => write!(f, "{s}"),
        }
    }
}

/// Complex input file.
///
/// ```json
/// {"vertices": ["a", "b", "c"],
///  "maximal_simplices": [["a", "b"], ["b", "c"]],
///  "action": {"generator_images": [["c", "b", "a"]]}}
/// ```
///
/// `generator_images[i]` lists the images of `vertices` (in order) under the
/// `i`-th generator of the group file. A missing `action` means the trivial action.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub vertices: Vec<VertexLabel>,
    pub maximal_simplices: Vec<Vec<VertexLabel>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub generator_images: Vec<Vec<VertexLabel>>,
}

impl ComplexSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn vertex_index(&self) -> Result<HashMap<&VertexLabel, usize>> {
        let mut index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v, i).is_some() {
                return Err(Error::InvalidComplex(format!("vertices[{i}]: duplicate label {v}")));
            }
        }
        Ok(index)
    }

    pub fn build_complex(&self) -> Result<SimplicialComplex> {
        let index = self.vertex_index()?;
        let mut maximal = Vec::with_capacity(self.maximal_simplices.len());
        for (i, s) in self.maximal_simplices.iter().enumerate() {
            let ids = s
                .iter()
                .map(|v| {
                    index.get(v).copied().ok_or_else(|| {
                        Error::InvalidComplex(format!("maximal_simplices[{i}]: unknown vertex {v}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            maximal.push(ids);
        }
        let labels = self.vertices.iter().map(ToString::to_string).collect();
        Ok(SimplicialComplex::from_maximal(labels, &maximal)?.with_manifold_flag(self.manifold))
    }

    /// The complex with the action of `group`, validated but not regularized.
    pub fn build(&self, group: &FiniteGroup) -> Result<GComplex> {
        let complex = self.build_complex()?;
        let index = self.vertex_index()?;
        match &self.action {
            None => {
                if group.order() == 1 || group.generators().is_empty() {
                    Ok(GComplex::trivial_action(complex, group.clone()))
                } else {
                    GComplex::new(complex, group.clone(), &vec![(0..self.vertices.len()).collect(); group.generators().len()])
                }
            }
            Some(action) => {
                let images = action
                    .generator_images
                    .iter()
                    .enumerate()
                    .map(|(i, img)| {
                        if img.len() != self.vertices.len() {
                            return Err(Error::InvalidAction(format!(
                                "generator_images[{i}] has {} entries for {} vertices",
                                img.len(),
                                self.vertices.len()
                            )));
                        }
                        img.iter()
                            .map(|v| {
                                index.get(v).copied().ok_or_else(|| {
                                    Error::InvalidAction(format!("generator_images[{i}]: unknown vertex {v}"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                GComplex::new(complex, group.clone(), &images)
            }
        }
    }
}
