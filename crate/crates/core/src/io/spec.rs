//! The `.zipper` text format.
//!
//! ```toml
//! name = "koch"
//! dimension = 2
//! signature = [0, 0, 0, 0]
//! vertices = [[0.0, 0.0], [0.3333333333333333, 0.0], ...]
//!
//! [maps]
//! kind = "from-vertices"
//! reflect = [false, false, false, false]
//! ```
//!
//! Explicit maps use `kind = "explicit"` with one `[[maps.list]]` table per
//! map holding `ratio`, `orthogonal` (rows) and `translation`. Floats are
//! written in shortest round-trip form, so parse and serialize are inverse.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::similarity::{Point, Similarity};
use crate::zipper::{zipper_from_vertices_2d, Signature, Zipper};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZipperSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub signature: Vec<u8>,
    pub vertices: Vec<Vec<f64>>,
    pub maps: MapsSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapsSpec {
    /// Planar maps sending the chord `z_0 z_m` onto each edge.
    FromVertices {
        reflect: Vec<bool>,
    },
    Explicit {
        list: Vec<MapSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub ratio: f64,
    pub orthogonal: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

fn spec_error(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Spec { field: field.into(), message: message.into() }
}

impl ZipperSpec {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let field = match e.span() {
                Some(span) => format!("line {}", text[..span.start].lines().count().max(1)),
                None => "document".to_string(),
            };
            spec_error(field, e.message().trim_end())
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec fields are plain TOML values")
    }

    /// An explicit-maps spec reproducing `zipper` bit for bit.
    pub fn from_zipper(zipper: &Zipper, name: Option<String>) -> Self {
        let list = zipper
            .maps()
            .iter()
            .map(|s| MapSpec {
                ratio: s.ratio(),
                orthogonal: s.orthogonal().row_iter().map(|r| r.iter().copied().collect()).collect(),
                translation: s.translation().coords().to_vec(),
            })
            .collect();
        ZipperSpec {
            name,
            dimension: zipper.dim(),
            signature: zipper.signature().bits(),
            vertices: zipper.vertices().iter().map(|v| v.coords().to_vec()).collect(),
            maps: MapsSpec::Explicit { list },
        }
    }

    /// Validates every field and builds the zipper.
    pub fn build(&self) -> Result<Zipper> {
        let n = self.dimension;
        if n == 0 {
            return Err(spec_error("dimension", "must be at least 1"));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != n {
                return Err(spec_error(
                    format!("vertices[{i}]"),
                    format!("expected {n} coordinates, found {}", v.len()),
                ));
            }
        }
        if self.vertices.len() < 3 {
            return Err(spec_error("vertices", format!("need at least 3 vertices, found {}", self.vertices.len())));
        }
        let m = self.vertices.len() - 1;
        if self.signature.len() != m {
            return Err(spec_error(
                "signature",
                format!("expected {m} bits (one per map), found {}", self.signature.len()),
            ));
        }
        let signature = Signature::from_bits(&self.signature).map_err(|e| spec_error("signature", e.to_string()))?;
        let vertices: Vec<Point> = self.vertices.iter().map(|v| Point::new(v.clone())).collect();
        let zipper = match &self.maps {
            MapsSpec::FromVertices { reflect } => {
                if n != 2 {
                    return Err(spec_error("maps.kind", format!("from-vertices needs dimension 2, got {n}")));
                }
                if reflect.len() != m {
                    return Err(spec_error("maps.reflect", format!("expected {m} flags, found {}", reflect.len())));
                }
                zipper_from_vertices_2d(vertices, signature, reflect)
            }
            MapsSpec::Explicit { list } => {
                if list.len() != m {
                    return Err(spec_error("maps.list", format!("expected {m} maps, found {}", list.len())));
                }
                let maps = list
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.build(n).map_err(|e| spec_error(format!("maps.list[{i}]"), e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                Zipper::new(maps, vertices, signature)
            }
        };
        zipper.map_err(|e| match e {
            Error::VertexConditionViolated { index, .. } | Error::NonContracting { index, .. } => {
                spec_error(format!("maps[{}]", index - 1), e.to_string())
            }
            other => spec_error("maps", other.to_string()),
        })
    }
}

impl MapSpec {
    fn build(&self, n: usize) -> Result<Similarity> {
        if self.translation.len() != n {
            return Err(Error::LengthMismatch { field: "translation", expected: n, found: self.translation.len() });
        }
        if self.orthogonal.len() != n || self.orthogonal.iter().any(|r| r.len() != n) {
            return Err(Error::LengthMismatch {
                field: "orthogonal",
                expected: n,
                found: self.orthogonal.iter().map(Vec::len).find(|&l| l != n).unwrap_or(self.orthogonal.len()),
            });
        }
        let o = DMatrix::from_fn(n, n, |r, c| self.orthogonal[r][c]);
        Similarity::new(self.ratio, o, Point::new(self.translation.clone()))
    }
}

/// Reads and validates a `.zipper` file. Diagnostics name the file.
pub fn parse_spec(path: &Path) -> Result<Zipper> {
    read_spec(path)?.build().map_err(|e| with_path(path, e))
}

/// Reads a `.zipper` file without building the zipper.
pub fn read_spec(path: &Path) -> Result<ZipperSpec> {
    let text = std::fs::read_to_string(path)?;
    ZipperSpec::parse(&text).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Spec { field, message } => Error::Spec { field: format!("{}: {field}", path.display()), message },
        other => other,
    }
}
