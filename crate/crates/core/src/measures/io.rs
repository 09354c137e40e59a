//! Measure file format (shared repo-wide): JSON with all reals serialized as
//! shortest-round-trip decimal strings, so files survive tooling that would
//! otherwise re-round floats.
//!
//! ```text
//! {"nodes": ["0.5", ...], "cell_widths": [...], "masses": [...], "meta": {...}}
//! {"atoms": [["-1", "1.2732395447351628"], ...]}
//! ```

use super::{DiscreteMeasure, GridMeasure};
use crate::{CoreError, Result};
use serde_json::{json, Map, Value};
use std::path::Path;

fn f2s(x: f64) -> Value {
    Value::String(format!("{x}"))
}

fn s2f(v: &Value, what: &str) -> Result<f64> {
    match v {
        Value::String(s) => s
            .parse::<f64>()
            .map_err(|e| CoreError::InvalidInput(format!("bad {what} `{s}`: {e}"))),
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| CoreError::InvalidInput(format!("bad {what}: {n}"))),
        _ => Err(CoreError::InvalidInput(format!(
            "{what} must be a decimal string"
        ))),
    }
}

fn vec2json(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| f2s(x)).collect())
}

fn json2vec(v: &Value, what: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| CoreError::InvalidInput(format!("{what} must be an array")))?
        .iter()
        .map(|x| s2f(x, what))
        .collect()
}

pub fn grid_to_json(mu: &GridMeasure, meta: Value) -> Value {
    json!({
        "nodes": vec2json(mu.nodes()),
        "cell_widths": vec2json(mu.cell_widths()),
        "masses": vec2json(mu.masses()),
        "meta": meta,
    })
}

pub fn grid_from_json(v: &Value) -> Result<(GridMeasure, Value)> {
    let obj = v
        .as_object()
        .ok_or_else(|| CoreError::InvalidInput("grid measure must be a JSON object".into()))?;
    let nodes = json2vec(
        obj.get("nodes")
            .ok_or_else(|| CoreError::InvalidInput("missing `nodes`".into()))?,
        "node",
    )?;
    let widths = json2vec(
        obj.get("cell_widths")
            .ok_or_else(|| CoreError::InvalidInput("missing `cell_widths`".into()))?,
        "cell width",
    )?;
    let masses = json2vec(
        obj.get("masses")
            .ok_or_else(|| CoreError::InvalidInput("missing `masses`".into()))?,
        "mass",
    )?;
    let meta = obj.get("meta").cloned().unwrap_or(Value::Object(Map::new()));
    Ok((GridMeasure::new(nodes, widths, masses)?, meta))
}

pub fn discrete_to_json(mu: &DiscreteMeasure) -> Value {
    json!({
        "atoms": Value::Array(
            mu.atoms()
                .iter()
                .map(|&(l, w)| Value::Array(vec![f2s(l), f2s(w)]))
                .collect(),
        ),
    })
}

pub fn discrete_from_json(v: &Value) -> Result<DiscreteMeasure> {
    let arr = v
        .get("atoms")
        .and_then(|a| a.as_array())
        .ok_or_else(|| CoreError::InvalidInput("missing `atoms` array".into()))?;
    let mut atoms = Vec::with_capacity(arr.len());
    for pair in arr {
        let p = pair
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| CoreError::InvalidInput("atom must be [loc, weight]".into()))?;
        atoms.push((s2f(&p[0], "atom location")?, s2f(&p[1], "atom weight")?));
    }
    DiscreteMeasure::new(atoms)
}

pub fn write_grid(path: &Path, mu: &GridMeasure, meta: Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&grid_to_json(mu, meta))?)?;
    Ok(())
}

pub fn read_grid(path: &Path) -> Result<(GridMeasure, Value)> {
    let text = std::fs::read_to_string(path)?;
    grid_from_json(&serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_round_trip_is_exact() {
        // Awkward binary fractions survive the decimal-string round trip.
        let mu = GridMeasure::uniform(0.1, 0.7, 7, std::f64::consts::PI).unwrap();
        let v = grid_to_json(&mu, json!({"label": "test"}));
        let (back, meta) = grid_from_json(&v).unwrap();
        assert_eq!(mu, back);
        assert_eq!(meta["label"], "test");
    }

    #[test]
    fn discrete_round_trip_is_exact() {
        let mu = DiscreteMeasure::new(vec![(-9.0, 4.0 / std::f64::consts::PI), (-1.0, 1.3)])
            .unwrap();
        let v = discrete_to_json(&mu);
        let back = discrete_from_json(&v).unwrap();
        assert_eq!(mu, back);
    }
}
