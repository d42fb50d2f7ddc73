//! JSON constructor-tree format for transfunctions.
//!
//! Every document is a tree of node objects tagged by `"kind"`. Leaf kinds
//! (`pushforward`, `matrix`, `countable_matrix`, `kernel`) declare their
//! `domain` and `codomain` spaces inline; combinator kinds derive spaces from
//! their children. Parsing is strict: unknown fields and unknown kinds are
//! rejected, and every diagnostic carries the node path as slash-separated
//! child indices (the root is `/`).
//!
//! Label maps serialize only nonzero entries; atom pairs are keyed `"u,v"`,
//! which is unambiguous because atom labels may not contain commas.

use std::collections::BTreeMap;

use measure_core::{Measure, SpaceDoc, Space};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::transfunction::Node;
use crate::{TransfunError, Transfunction};

/// Errors from reading a spec document. `Schema` means the JSON does not
/// match the document format; `Invalid` means it parsed but fails validation.
#[derive(Debug, Error)]
pub enum SpecDocError {
    #[error("parse error at node {path}: {reason}")]
    Schema { path: String, reason: String },

    #[error("invalid spec at node {path}: {source}")]
    Invalid {
        path: String,
        #[source]
        source: TransfunError,
    },

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn schema(path: &str, reason: impl Into<String>) -> SpecDocError {
    SpecDocError::Schema {
        path: path.to_string(),
        reason: reason.into(),
    }
}

fn invalid(path: &str, source: TransfunError) -> SpecDocError {
    SpecDocError::Invalid {
        path: path.to_string(),
        source,
    }
}

fn child_path(path: &str, index: usize) -> String {
    if path == "/" {
        format!("/{index}")
    } else {
        format!("{path}/{index}")
    }
}

/// Parses a spec document from a JSON string.
pub fn parse_spec_str(text: &str) -> Result<Transfunction, SpecDocError> {
    let value: Value = serde_json::from_str(text)?;
    parse_spec_value(&value)
}

/// Parses a spec document from a JSON value.
pub fn parse_spec_value(value: &Value) -> Result<Transfunction, SpecDocError> {
    parse_node(value, "/")
}

/// Serializes a transfunction to its canonical JSON value.
pub fn spec_to_value(spec: &Transfunction) -> Value {
    node_to_value(spec)
}

/// Serializes a transfunction to pretty-printed JSON with a trailing newline.
pub fn spec_to_string(spec: &Transfunction) -> String {
    let mut text =
        serde_json::to_string_pretty(&spec_to_value(spec)).expect("spec values are plain JSON");
    text.push('\n');
    text
}

// ----- parsing helpers ---------------------------------------------------

fn as_object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>, SpecDocError> {
    value
        .as_object()
        .ok_or_else(|| schema(path, "expected a JSON object"))
}

fn check_fields(
    obj: &Map<String, Value>,
    allowed: &[&str],
    path: &str,
) -> Result<(), SpecDocError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema(path, format!("unknown field '{key}'")));
        }
    }
    Ok(())
}

fn get<'a>(
    obj: &'a Map<String, Value>,
    field: &str,
    path: &str,
) -> Result<&'a Value, SpecDocError> {
    obj.get(field)
        .ok_or_else(|| schema(path, format!("missing field '{field}'")))
}

fn get_str<'a>(
    obj: &'a Map<String, Value>,
    field: &str,
    path: &str,
) -> Result<&'a str, SpecDocError> {
    get(obj, field, path)?
        .as_str()
        .ok_or_else(|| schema(path, format!("field '{field}' must be a string")))
}

fn get_f64(obj: &Map<String, Value>, field: &str, path: &str) -> Result<f64, SpecDocError> {
    get(obj, field, path)?
        .as_f64()
        .ok_or_else(|| schema(path, format!("field '{field}' must be a number")))
}

fn parse_space(obj: &Map<String, Value>, field: &str, path: &str) -> Result<Space, SpecDocError> {
    let value = get(obj, field, path)?;
    let doc: SpaceDoc = serde_json::from_value(value.clone())
        .map_err(|e| schema(path, format!("field '{field}': {e}")))?;
    doc.to_space().map_err(|e| invalid(path, e.into()))
}

fn parse_number_map(
    value: &Value,
    field: &str,
    path: &str,
) -> Result<BTreeMap<String, f64>, SpecDocError> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema(path, format!("field '{field}' must be an object")))?;
    let mut out = BTreeMap::new();
    for (key, v) in obj {
        let number = v.as_f64().ok_or_else(|| {
            schema(path, format!("field '{field}': '{key}' must be a number"))
        })?;
        out.insert(key.clone(), number);
    }
    Ok(out)
}

fn parse_string_map(
    value: &Value,
    field: &str,
    path: &str,
) -> Result<BTreeMap<String, String>, SpecDocError> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema(path, format!("field '{field}' must be an object")))?;
    let mut out = BTreeMap::new();
    for (key, v) in obj {
        let s = v.as_str().ok_or_else(|| {
            schema(path, format!("field '{field}': '{key}' must be a string"))
        })?;
        out.insert(key.clone(), s.to_string());
    }
    Ok(out)
}

fn split_pair_key<'a>(key: &'a str, field: &str, path: &str) -> Result<(&'a str, &'a str), SpecDocError> {
    key.split_once(',')
        .ok_or_else(|| schema(path, format!("field '{field}': key '{key}' is not a 'u,v' pair")))
}

fn parse_labels(value: &Value, field: &str, path: &str) -> Result<Vec<String>, SpecDocError> {
    let arr = value
        .as_array()
        .ok_or_else(|| schema(path, format!("field '{field}' must be an array")))?;
    arr.iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| schema(path, format!("field '{field}' must contain strings")))
        })
        .collect()
}

fn parse_matrix_entries(
    value: &Value,
    field: &str,
    path: &str,
) -> Result<Vec<Vec<f64>>, SpecDocError> {
    let rows = value
        .as_array()
        .ok_or_else(|| schema(path, format!("field '{field}' must be an array of arrays")))?;
    rows.iter()
        .map(|row| {
            let row = row.as_array().ok_or_else(|| {
                schema(path, format!("field '{field}' must be an array of arrays"))
            })?;
            row.iter()
                .map(|v| {
                    v.as_f64().ok_or_else(|| {
                        schema(path, format!("field '{field}' must contain numbers"))
                    })
                })
                .collect()
        })
        .collect()
}

fn bind_embedded_measure(
    value: &Value,
    space: &Space,
    field: &str,
    path: &str,
) -> Result<Measure, SpecDocError> {
    let masses = parse_number_map(value, field, path)?;
    Measure::from_entries(space, masses.iter().map(|(l, &m)| (l.clone(), m)))
        .map_err(|e| invalid(path, e.into()))
}

fn parse_node(value: &Value, path: &str) -> Result<Transfunction, SpecDocError> {
    let obj = as_object(value, path)?;
    let kind = get_str(obj, "kind", path)?;
    match kind {
        "pushforward" => {
            check_fields(obj, &["kind", "domain", "codomain", "map"], path)?;
            let domain = parse_space(obj, "domain", path)?;
            let codomain = parse_space(obj, "codomain", path)?;
            let map = parse_string_map(get(obj, "map", path)?, "map", path)?;
            Transfunction::pushforward(&domain, &codomain, &map).map_err(|e| invalid(path, e))
        }
        "matrix" => {
            check_fields(obj, &["kind", "domain", "codomain", "entries"], path)?;
            let domain = parse_space(obj, "domain", path)?;
            let codomain = parse_space(obj, "codomain", path)?;
            let entries = parse_matrix_entries(get(obj, "entries", path)?, "entries", path)?;
            Transfunction::matrix(&domain, &codomain, entries).map_err(|e| invalid(path, e))
        }
        "countable_matrix" => {
            check_fields(
                obj,
                &["kind", "domain", "codomain", "columns", "bound"],
                path,
            )?;
            let domain = parse_space(obj, "domain", path)?;
            let codomain = parse_space(obj, "codomain", path)?;
            let bound = get_f64(obj, "bound", path)?;
            let columns_value = get(obj, "columns", path)?;
            let columns_obj = columns_value
                .as_object()
                .ok_or_else(|| schema(path, "field 'columns' must be an object"))?;
            let mut columns = BTreeMap::new();
            for (label, column) in columns_obj {
                columns.insert(
                    label.clone(),
                    parse_number_map(column, "columns", path)?,
                );
            }
            Transfunction::countable_matrix(&domain, &codomain, &columns, bound)
                .map_err(|e| invalid(path, e))
        }
        "kernel" => {
            check_fields(obj, &["kind", "domain", "codomain", "phi", "rho"], path)?;
            let domain = parse_space(obj, "domain", path)?;
            let codomain = parse_space(obj, "codomain", path)?;
            let rho = bind_embedded_measure(get(obj, "rho", path)?, &codomain, "rho", path)?;
            let phi_map = parse_number_map(get(obj, "phi", path)?, "phi", path)?;
            let mut phi = BTreeMap::new();
            for (key, value) in phi_map {
                let (x, y) = split_pair_key(&key, "phi", path)?;
                phi.insert((x.to_string(), y.to_string()), value);
            }
            Transfunction::kernel(&domain, &phi, &rho).map_err(|e| invalid(path, e))
        }
        "output_multiplier" => {
            check_fields(obj, &["kind", "density", "inner"], path)?;
            let inner = parse_node(get(obj, "inner", path)?, &child_path(path, 0))?;
            let density = parse_number_map(get(obj, "density", path)?, "density", path)?;
            Transfunction::output_multiplier(&density, inner).map_err(|e| invalid(path, e))
        }
        "input_multiplier" => {
            check_fields(obj, &["kind", "density", "inner"], path)?;
            let inner = parse_node(get(obj, "inner", path)?, &child_path(path, 0))?;
            let density = parse_number_map(get(obj, "density", path)?, "density", path)?;
            Transfunction::input_multiplier(inner, &density).map_err(|e| invalid(path, e))
        }
        "max_with" => {
            check_fields(obj, &["kind", "rho", "inner"], path)?;
            let inner = parse_node(get(obj, "inner", path)?, &child_path(path, 0))?;
            let rho =
                bind_embedded_measure(get(obj, "rho", path)?, inner.codomain(), "rho", path)?;
            Transfunction::max_with(inner, rho).map_err(|e| invalid(path, e))
        }
        "pre_project" => {
            check_fields(obj, &["kind", "keep", "inner"], path)?;
            let inner = parse_node(get(obj, "inner", path)?, &child_path(path, 0))?;
            let keep = parse_labels(get(obj, "keep", path)?, "keep", path)?;
            Transfunction::pre_project(&keep, inner).map_err(|e| invalid(path, e))
        }
        "post_project" => {
            check_fields(obj, &["kind", "keep", "inner"], path)?;
            let inner = parse_node(get(obj, "inner", path)?, &child_path(path, 0))?;
            let keep = parse_labels(get(obj, "keep", path)?, "keep", path)?;
            Transfunction::post_project(&keep, inner).map_err(|e| invalid(path, e))
        }
        "semigroup_product" => {
            check_fields(obj, &["kind", "left", "right", "op"], path)?;
            let left = parse_node(get(obj, "left", path)?, &child_path(path, 0))?;
            let right = parse_node(get(obj, "right", path)?, &child_path(path, 1))?;
            let op_map = parse_string_map(get(obj, "op", path)?, "op", path)?;
            let mut op = BTreeMap::new();
            for (key, target) in op_map {
                let (u, v) = split_pair_key(&key, "op", path)?;
                op.insert((u.to_string(), v.to_string()), target);
            }
            Transfunction::semigroup_product(left, right, &op).map_err(|e| invalid(path, e))
        }
        "compose" => {
            check_fields(obj, &["kind", "outer", "inner"], path)?;
            let outer = parse_node(get(obj, "outer", path)?, &child_path(path, 0))?;
            let inner = parse_node(get(obj, "inner", path)?, &child_path(path, 1))?;
            Transfunction::compose(outer, inner).map_err(|e| invalid(path, e))
        }
        other => Err(schema(path, format!("unknown node kind '{other}'"))),
    }
}

// ----- serialization helpers ----------------------------------------------

fn number(value: f64) -> Value {
    Value::from(value)
}

fn space_value(space: &Space) -> Value {
    serde_json::to_value(SpaceDoc::from_space(space)).expect("space serialization")
}

/// Nonzero entries of a mass/density vector, keyed by atom label.
fn weights_value(space: &Space, weights: &[f64]) -> Value {
    let mut map = Map::new();
    for (label, &w) in space.atoms().iter().zip(weights) {
        if w != 0.0 {
            map.insert(label.clone(), number(w));
        }
    }
    Value::Object(map)
}

fn kept_labels(space: &Space, mask: &[bool]) -> Value {
    Value::Array(
        space
            .atoms()
            .iter()
            .zip(mask)
            .filter(|&(_, &keep)| keep)
            .map(|(label, _)| Value::String(label.clone()))
            .collect(),
    )
}

fn node_to_value(spec: &Transfunction) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".to_string(), Value::String(spec.kind().to_string()));
    match &spec.node {
        Node::Pushforward { map } => {
            obj.insert("domain".to_string(), space_value(spec.domain()));
            obj.insert("codomain".to_string(), space_value(spec.codomain()));
            let mut table = Map::new();
            for (i, &j) in map.iter().enumerate() {
                table.insert(
                    spec.domain().label(i).to_string(),
                    Value::String(spec.codomain().label(j).to_string()),
                );
            }
            obj.insert("map".to_string(), Value::Object(table));
        }
        Node::Matrix { entries } => {
            obj.insert("domain".to_string(), space_value(spec.domain()));
            obj.insert("codomain".to_string(), space_value(spec.codomain()));
            let rows = entries
                .iter()
                .map(|row| Value::Array(row.iter().map(|&v| number(v)).collect()))
                .collect();
            obj.insert("entries".to_string(), Value::Array(rows));
        }
        Node::CountableMatrix { columns, bound } => {
            obj.insert("domain".to_string(), space_value(spec.domain()));
            obj.insert("codomain".to_string(), space_value(spec.codomain()));
            let mut table = Map::new();
            for (i, column) in columns.iter().enumerate() {
                if let Some(masses) = column {
                    table.insert(
                        spec.domain().label(i).to_string(),
                        weights_value(spec.codomain(), masses),
                    );
                }
            }
            obj.insert("columns".to_string(), Value::Object(table));
            obj.insert("bound".to_string(), number(*bound));
        }
        Node::Kernel { phi, rho } => {
            obj.insert("domain".to_string(), space_value(spec.domain()));
            obj.insert("codomain".to_string(), space_value(spec.codomain()));
            let mut table = Map::new();
            for (x, row) in phi.iter().enumerate() {
                for (y, &v) in row.iter().enumerate() {
                    if v != 0.0 {
                        let key =
                            format!("{},{}", spec.domain().label(x), spec.codomain().label(y));
                        table.insert(key, number(v));
                    }
                }
            }
            obj.insert("phi".to_string(), Value::Object(table));
            obj.insert(
                "rho".to_string(),
                weights_value(spec.codomain(), rho.masses()),
            );
        }
        Node::OutputMultiplier { weights, inner } => {
            obj.insert(
                "density".to_string(),
                weights_value(spec.codomain(), weights),
            );
            obj.insert("inner".to_string(), node_to_value(inner));
        }
        Node::InputMultiplier { weights, inner } => {
            obj.insert(
                "density".to_string(),
                weights_value(spec.domain(), weights),
            );
            obj.insert("inner".to_string(), node_to_value(inner));
        }
        Node::MaxWith { rho, inner } => {
            obj.insert(
                "rho".to_string(),
                weights_value(spec.codomain(), rho.masses()),
            );
            obj.insert("inner".to_string(), node_to_value(inner));
        }
        Node::PreProject { mask, inner } => {
            obj.insert("keep".to_string(), kept_labels(spec.domain(), mask));
            obj.insert("inner".to_string(), node_to_value(inner));
        }
        Node::PostProject { mask, inner } => {
            obj.insert("keep".to_string(), kept_labels(spec.codomain(), mask));
            obj.insert("inner".to_string(), node_to_value(inner));
        }
        Node::SemigroupProduct { left, right, op } => {
            obj.insert("left".to_string(), node_to_value(left));
            obj.insert("right".to_string(), node_to_value(right));
            let mut table = Map::new();
            for (u, row) in op.iter().enumerate() {
                for (v, &w) in row.iter().enumerate() {
                    let key =
                        format!("{},{}", spec.codomain().label(u), spec.codomain().label(v));
                    table.insert(key, Value::String(spec.codomain().label(w).to_string()));
                }
            }
            obj.insert("op".to_string(), Value::Object(table));
        }
        Node::Compose { outer, inner } => {
            obj.insert("outer".to_string(), node_to_value(outer));
            obj.insert("inner".to_string(), node_to_value(inner));
        }
    }
    Value::Object(obj)
}
