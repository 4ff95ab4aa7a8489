//! JSON documents for instances and verification reports.
//!
//! Reals are written in the shortest form that parses back to the same
//! `f64`, so `load(save(i)) == i` bit for bit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::coverage::CoverageReport;
use crate::geom::{Ball, GeomError, ShadowInstance, SphereConstraint, ValidityReport, Vector};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("SchemaError: {0}")]
    Schema(String),
    #[error("DimensionMismatch: {0}")]
    Geometry(#[from] GeomError),
}

fn schema(msg: impl Into<String>) -> IoError {
    IoError::Schema(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallDocument {
    pub center: Vec<f64>,
    pub radius: f64,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereDocument {
    pub center: Vec<f64>,
    pub radius: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub restrict_radii: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub schema_version: u32,
    pub point: Vec<f64>,
    pub balls: Vec<BallDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere: Option<SphereDocument>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

/// Raw top level; balls stay untyped so errors can name the offending index.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    schema_version: u32,
    point: Vec<f64>,
    balls: Vec<Value>,
    #[serde(default)]
    sphere: Option<Value>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

impl InstanceDocument {
    pub fn from_instance(inst: &ShadowInstance, metadata: BTreeMap<String, String>) -> Self {
        InstanceDocument {
            schema_version: SCHEMA_VERSION,
            point: inst.point().coords().to_vec(),
            balls: inst
                .balls()
                .iter()
                .map(|b| BallDocument {
                    center: b.center().coords().to_vec(),
                    radius: b.radius(),
                    closed: b.is_closed(),
                })
                .collect(),
            sphere: inst.sphere().map(|s| SphereDocument {
                center: s.center.coords().to_vec(),
                radius: s.radius,
                restrict_radii: s.restrict_radii,
            }),
            metadata,
        }
    }

    pub fn to_instance(&self) -> Result<ShadowInstance, IoError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(format!(
                "schema_version: expected {SCHEMA_VERSION}, found {}",
                self.schema_version
            )));
        }
        let n = self.point.len();
        let balls = self
            .balls
            .iter()
            .enumerate()
            .map(|(i, b)| {
                if b.center.len() != n {
                    return Err(IoError::Geometry(GeomError::DimensionMismatch {
                        expected: n,
                        found: b.center.len(),
                    }));
                }
                Ball::new(Vector::from(b.center.clone()), b.radius, b.closed)
                    .map_err(|e| schema(format!("balls[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut inst = ShadowInstance::new(Vector::from(self.point.clone()), balls)?;
        if let Some(s) = &self.sphere {
            inst = inst
                .with_sphere(SphereConstraint {
                    center: Vector::from(s.center.clone()),
                    radius: s.radius,
                    restrict_radii: s.restrict_radii,
                })
                .map_err(|e| match e {
                    e @ GeomError::DimensionMismatch { .. } => IoError::Geometry(e),
                    e => schema(format!("sphere: {e}")),
                })?;
        }
        Ok(inst)
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        let balls = raw
            .balls
            .into_iter()
            .enumerate()
            .map(|(i, v)| serde_json::from_value::<BallDocument>(v).map_err(|e| schema(format!("balls[{i}]: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let sphere = raw
            .sphere
            .map(|v| serde_json::from_value::<SphereDocument>(v).map_err(|e| schema(format!("sphere: {e}"))))
            .transpose()?;
        Ok(InstanceDocument {
            schema_version: raw.schema_version,
            point: raw.point,
            balls,
            sphere,
            metadata: raw.metadata,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance documents hold only finite reals");
        s.push('\n');
        s
    }
}

/// Parses an instance document and returns the instance with its metadata.
pub fn load_document(text: &str) -> Result<(ShadowInstance, BTreeMap<String, String>), IoError> {
    let doc = InstanceDocument::parse(text)?;
    let inst = doc.to_instance()?;
    Ok((inst, doc.metadata))
}

pub fn load_instance(text: &str) -> Result<ShadowInstance, IoError> {
    load_document(text).map(|(inst, _)| inst)
}

pub fn save_instance(inst: &ShadowInstance) -> String {
    save_instance_with(inst, BTreeMap::new())
}

pub fn save_instance_with(inst: &ShadowInstance, metadata: BTreeMap<String, String>) -> String {
    InstanceDocument::from_instance(inst, metadata).to_json()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub verdict: String,
    pub method: String,
    pub worst_margin: f64,
    pub witness: Option<Vec<f64>>,
    pub samples_used: u64,
    pub uncovered_count: Option<u64>,
    pub uncovered_fraction_estimate: Option<f64>,
    pub seed: Option<u64>,
    pub tolerance_critical: bool,
    /// Validity findings of the verified instance, contacts included.
    pub validity: Vec<String>,
}

impl ReportDocument {
    pub fn new(report: &CoverageReport, validity: &ValidityReport) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            verdict: report.verdict.as_str().to_string(),
            method: report.method.as_str().to_string(),
            worst_margin: report.worst_margin,
            witness: report.witness.as_ref().map(|w| w.coords().to_vec()),
            samples_used: report.samples_used,
            uncovered_count: report.uncovered_count,
            uncovered_fraction_estimate: report.uncovered_fraction_estimate,
            seed: report.seed,
            tolerance_critical: report.tolerance_critical,
            validity: validity.findings(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports hold only finite reals");
        s.push('\n');
        s
    }
}
