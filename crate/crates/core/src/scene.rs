//! Versioned scene files: JSON descriptions of plane domains, triangle
//! complexes and the built-in spherical-cap counterexample.

use crate::complex::{TriComplex, Triangle};
use crate::error::{GeomError, Result};
use crate::model::Kappa;
use crate::polygon::PolygonDomain;
use crate::predicates::Point;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug)]
pub enum ScenePayload {
    Planar(PolygonDomain),
    Complex(TriComplex),
    /// Closed spherical cap on the unit sphere with boundary samples.
    SphericalCap { radius: f64, samples: usize },
}

#[derive(Debug)]
pub struct Scene {
    pub name: String,
    pub seed: u64,
    pub kappa: Kappa,
    pub payload: ScenePayload,
}

fn ring_from_value(v: &Value) -> Result<Vec<Point>> {
    v.as_array()
        .ok_or_else(|| GeomError::BadInput("ring must be an array".into()))?
        .iter()
        .map(|p| {
            let xy = p
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| GeomError::BadInput("ring point must be [x, y]".into()))?;
            match (xy[0].as_f64(), xy[1].as_f64()) {
                (Some(x), Some(y)) => Ok(Point::new(x, y)),
                _ => Err(GeomError::BadInput("ring coordinates must be numbers".into())),
            }
        })
        .collect()
}

fn ring_to_value(ring: &[Point]) -> Value {
    Value::Array(ring.iter().map(|p| json!([p.x, p.y])).collect())
}

impl Scene {
    pub fn from_value(v: &Value) -> Result<Scene> {
        let schema = v
            .get("schema")
            .and_then(Value::as_u64)
            .ok_or_else(|| GeomError::BadInput("missing schema version".into()))?;
        if schema != SCHEMA_VERSION {
            return Err(GeomError::BadInput(format!(
                "unsupported schema version {schema}"
            )));
        }
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| GeomError::BadInput("missing scene kind".into()))?;
        let kappa = Kappa::new(v.get("kappa").and_then(Value::as_f64).unwrap_or(0.0));
        let meta = v.get("metadata").cloned().unwrap_or_else(|| json!({}));
        let name = meta
            .get("name")
            .and_then(Value::as_str)
            .unwrap_or("unnamed")
            .to_string();
        let seed = meta.get("seed").and_then(Value::as_u64).unwrap_or(0);
        let payload = v
            .get("payload")
            .ok_or_else(|| GeomError::BadInput("missing payload".into()))?;
        let payload = match kind {
            "plane-domain" => {
                let outer = ring_from_value(
                    payload
                        .get("outer")
                        .ok_or_else(|| GeomError::BadInput("plane-domain needs outer".into()))?,
                )?;
                let holes = match payload.get("holes") {
                    None => Vec::new(),
                    Some(h) => h
                        .as_array()
                        .ok_or_else(|| GeomError::BadInput("holes must be an array".into()))?
                        .iter()
                        .map(ring_from_value)
                        .collect::<Result<Vec<_>>>()?,
                };
                ScenePayload::Planar(PolygonDomain::new(outer, holes)?)
            }
            "complex" => {
                let tris = payload
                    .get("triangles")
                    .and_then(Value::as_array)
                    .ok_or_else(|| GeomError::BadInput("complex needs triangles".into()))?
                    .iter()
                    .map(|t| {
                        let vs = t.get("vertices").and_then(Value::as_array);
                        let ls = t.get("lengths").and_then(Value::as_array);
                        match (vs, ls) {
                            (Some(vs), Some(ls)) if vs.len() == 3 && ls.len() == 3 => {
                                let mut vertices = [0usize; 3];
                                let mut lengths = [0.0f64; 3];
                                for k in 0..3 {
                                    vertices[k] = vs[k].as_u64().ok_or_else(|| {
                                        GeomError::BadInput("vertex id must be integer".into())
                                    })? as usize;
                                    lengths[k] = ls[k].as_f64().ok_or_else(|| {
                                        GeomError::BadInput("length must be a number".into())
                                    })?;
                                }
                                Ok(Triangle { vertices, lengths })
                            }
                            _ => Err(GeomError::BadInput(
                                "triangle needs 3 vertices and 3 lengths".into(),
                            )),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                ScenePayload::Complex(TriComplex::new(kappa.clone(), tris)?)
            }
            "spherical-cap" => {
                let radius = payload
                    .get("radius")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| GeomError::BadInput("spherical-cap needs radius".into()))?;
                let samples = payload
                    .get("samples")
                    .and_then(Value::as_u64)
                    .unwrap_or(24) as usize;
                ScenePayload::SphericalCap { radius, samples }
            }
            other => {
                return Err(GeomError::BadInput(format!("unknown scene kind {other}")));
            }
        };
        Ok(Scene {
            name,
            seed,
            kappa,
            payload,
        })
    }

    pub fn from_str(text: &str) -> Result<Scene> {
        let v: Value = serde_json::from_str(text)?;
        Scene::from_value(&v)
    }

    pub fn to_value(&self) -> Value {
        let (kind, payload) = match &self.payload {
            ScenePayload::Planar(d) => (
                "plane-domain",
                json!({
                    "outer": ring_to_value(d.outer()),
                    "holes": d.holes().iter().map(|h| ring_to_value(h)).collect::<Vec<_>>(),
                }),
            ),
            ScenePayload::Complex(c) => (
                "complex",
                json!({
                    "triangles": c.triangles().iter().map(|t| {
                        json!({"vertices": t.vertices, "lengths": t.lengths})
                    }).collect::<Vec<_>>(),
                }),
            ),
            ScenePayload::SphericalCap { radius, samples } => (
                "spherical-cap",
                json!({"radius": radius, "samples": samples}),
            ),
        };
        json!({
            "schema": SCHEMA_VERSION,
            "kind": kind,
            "kappa": self.kappa.value(),
            "metadata": {"name": self.name, "seed": self.seed},
            "payload": payload,
        })
    }

    /// Built-in counterexample: square annulus, not CAT(0).
    pub fn annulus() -> Scene {
        let outer = vec![
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(3.0, 3.0),
            Point::new(0.0, 3.0),
        ];
        let hole = vec![
            Point::new(1.0, 1.0),
            Point::new(2.0, 1.0),
            Point::new(2.0, 2.0),
            Point::new(1.0, 2.0),
        ];
        Scene {
            name: "annulus".into(),
            seed: 0,
            kappa: Kappa::flat(),
            payload: ScenePayload::Planar(PolygonDomain::new(outer, vec![hole]).unwrap()),
        }
    }

    /// Built-in counterexample: spherical cap of radius 2.0, not CAT(1).
    pub fn spherical_cap() -> Scene {
        Scene {
            name: "spherical-cap".into(),
            seed: 0,
            kappa: Kappa::new(1.0),
            payload: ScenePayload::SphericalCap {
                radius: 2.0,
                samples: 24,
            },
        }
    }
}
