//! Coloring definition files.
//!
//! ```json
//! {"type":"strip","scale":1.0,"boundary_rule":"upper-closed"}
//! {"type":"zebra","profile":[[0,0],[0.5,0.1],[1,0]],"x_hat":[1,0],
//!  "parity_rule":"even-black","boundary_parity":"even-black"}
//! {"type":"halfplane","normal":[0,1],"offset":0,"closed_color":"black"}
//! {"type":"polygonal","segments":[{"p":[0,0],"q":[1,0],"q_unbounded":true}],
//!  "seeds":[{"point":[0,1],"color":"black"}],"boundary_colors":["black"]}
//! ```

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::colorings::{
    Coloring, ColoringError, HalfPlaneColoring, Parity, PolySegment, PolygonalColoring, Seed, StripBoundaryRule,
    StripColoring, ZebraColoring, ZebraProfile,
};
use crate::geom::{Point, UnitVector};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

fn schema(field: &str, message: impl Into<String>) -> LoadError {
    LoadError::Schema { field: field.to_string(), message: message.into() }
}

fn invariant(e: ColoringError) -> LoadError {
    LoadError::Invariant(e.to_string())
}

struct Fields<'a> {
    obj: &'a Map<String, Value>,
}

impl Fields<'_> {
    fn get<T: DeserializeOwned>(&self, name: &str) -> Result<Option<T>, LoadError> {
        match self.obj.get(name) {
            None => Ok(None),
            Some(v) => serde_json::from_value(v.clone()).map(Some).map_err(|e| schema(name, e.to_string())),
        }
    }

    fn required<T: DeserializeOwned>(&self, name: &str) -> Result<T, LoadError> {
        self.get(name)?.ok_or_else(|| schema(name, "missing field"))
    }

    fn only(&self, allowed: &[&str]) -> Result<(), LoadError> {
        match self.obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(schema(k, "unknown field")),
            None => Ok(()),
        }
    }
}

fn unit_vector(field: &str, v: [f64; 2]) -> Result<UnitVector, LoadError> {
    UnitVector::new(v[0], v[1], 1e-9).map_err(|e| schema(field, e.to_string()))
}

pub fn parse_coloring_str(text: &str) -> Result<Coloring, LoadError> {
    let value: Value = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    parse_coloring_value(&value)
}

pub fn parse_coloring_value(value: &Value) -> Result<Coloring, LoadError> {
    let obj = value.as_object().ok_or_else(|| schema("type", "top level must be an object"))?;
    let f = Fields { obj };
    let kind: String = f.required("type")?;
    match kind.as_str() {
        "strip" => {
            f.only(&["type", "scale", "boundary_rule"])?;
            let scale: f64 = f.get("scale")?.unwrap_or(1.0);
            if !(scale.is_finite() && scale > 0.0) {
                return Err(schema("scale", format!("must be positive, got {scale}")));
            }
            let rule = f.get("boundary_rule")?.unwrap_or(StripBoundaryRule::UpperClosed);
            Ok(StripColoring::new(scale, rule).map_err(invariant)?.into())
        }
        "zebra" => {
            f.only(&["type", "profile", "x_hat", "parity_rule", "boundary_parity"])?;
            let profile: Vec<[f64; 2]> = f.required("profile")?;
            let x_hat = unit_vector("x_hat", f.get("x_hat")?.unwrap_or([1.0, 0.0]))?;
            let parity = f.get("parity_rule")?.unwrap_or(Parity::EvenBlack);
            let boundary = f.get("boundary_parity")?.unwrap_or(Parity::EvenBlack);
            let profile = ZebraProfile::new(profile).map_err(invariant)?;
            Ok(ZebraColoring::new(profile, x_hat, parity, boundary).map_err(invariant)?.into())
        }
        "halfplane" => {
            f.only(&["type", "normal", "offset", "closed_color"])?;
            let normal = unit_vector("normal", f.required("normal")?)?;
            let offset: f64 = f.get("offset")?.unwrap_or(0.0);
            if !offset.is_finite() {
                return Err(schema("offset", "must be finite"));
            }
            let closed = f.required("closed_color")?;
            Ok(HalfPlaneColoring::new(normal, offset, closed).into())
        }
        "polygonal" => {
            f.only(&["type", "segments", "seeds", "boundary_colors"])?;
            let segments: Vec<PolySegment> = f.required("segments")?;
            let seeds: Vec<Seed> = f.required("seeds")?;
            let colors = f.required("boundary_colors")?;
            Ok(PolygonalColoring::new(segments, seeds, colors).map_err(invariant)?.into())
        }
        other => Err(schema("type", format!("unknown coloring type `{other}`"))),
    }
}

pub fn load_coloring(path: &Path) -> Result<Coloring, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io { path: path.to_path_buf(), source: e })?;
    parse_coloring_str(&text)
}

pub fn coloring_to_value(c: &Coloring) -> Value {
    let pair = |p: Point| json!([p.x, p.y]);
    match c {
        Coloring::Strip(s) => json!({"type": "strip", "scale": s.scale(), "boundary_rule": s.rule()}),
        Coloring::Zebra(z) => json!({
            "type": "zebra",
            "profile": z.profile().breakpoints().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
            "x_hat": pair(z.x_hat().as_point()),
            "parity_rule": z.parity_rule(),
            "boundary_parity": z.boundary_parity(),
        }),
        Coloring::HalfPlane(h) => json!({
            "type": "halfplane",
            "normal": pair(h.normal().as_point()),
            "offset": h.offset(),
            "closed_color": h.closed_color(),
        }),
        Coloring::Polygonal(p) => json!({
            "type": "polygonal",
            "segments": p.segments(),
            "seeds": p.seeds(),
            "boundary_colors": p.boundary_colors(),
        }),
    }
}

pub fn coloring_to_string(c: &Coloring) -> String {
    serde_json::to_string_pretty(&coloring_to_value(c)).expect("json values serialize")
}
