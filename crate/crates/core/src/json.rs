//! Canonical JSON text and the graph file format.
//!
//! Canonical text has sorted object keys, no insignificant whitespace, and
//! every non-integer float written with 17 significant digits.

use serde_json::{Map, Value};

use crate::geom::{Axis, Point};
use crate::vdigraph::{Edge, Provenance, VDigraph, Vertex};

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

pub fn canonical(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(&map[k], out);
            }
            out.push('}');
        }
    }
}

fn point_value(p: Point) -> Value {
    serde_json::json!([p.x, p.y])
}

fn provenance_value(p: &Provenance) -> Value {
    match p {
        Provenance::Pole { circle, point } => serde_json::json!({
            "kind": "pole", "circle": circle, "point": point_value(*point)
        }),
        Provenance::RegularPole { circle, point } => serde_json::json!({
            "kind": "regular_pole", "circle": circle, "point": point_value(*point)
        }),
        Provenance::Corner { circles, point } => serde_json::json!({
            "kind": "corner", "circles": circles, "point": point_value(*point)
        }),
    }
}

pub fn graph_to_value(g: &VDigraph) -> Value {
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            serde_json::json!({
                "id": v.id,
                "value": v.value,
                "degree": g.degree(i),
                "provenance": v.provenance.iter().map(provenance_value).collect::<Vec<_>>(),
            })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| serde_json::json!({"src": g.vertices[e.src].id, "dst": g.vertices[e.dst].id}))
        .collect();
    serde_json::json!({"axis": g.axis.name(), "vertices": vertices, "edges": edges})
}

pub fn graph_to_json(g: &VDigraph) -> String {
    canonical(&graph_to_value(g))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("bad graph file: {0}")]
pub struct GraphFileError(pub String);

fn parse_point(v: &Value) -> Result<Point, GraphFileError> {
    let arr = v.as_array().filter(|a| a.len() == 2);
    let xy: Option<Vec<f64>> = arr.map(|a| a.iter().filter_map(Value::as_f64).collect());
    match xy {
        Some(xy) if xy.len() == 2 => Ok(Point::new(xy[0], xy[1])),
        _ => Err(GraphFileError(format!("bad point {v}"))),
    }
}

fn parse_provenance(v: &Value) -> Result<Provenance, GraphFileError> {
    let err = || GraphFileError(format!("bad provenance {v}"));
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(err)?;
    let point = parse_point(v.get("point").ok_or_else(err)?)?;
    let circle = || v.get("circle").and_then(Value::as_str).map(str::to_owned).ok_or_else(err);
    match kind {
        "pole" => Ok(Provenance::Pole { circle: circle()?, point }),
        "regular_pole" => Ok(Provenance::RegularPole { circle: circle()?, point }),
        "corner" => {
            let cs: Vec<String> = v
                .get("circles")
                .and_then(Value::as_array)
                .ok_or_else(err)?
                .iter()
                .filter_map(|c| c.as_str().map(str::to_owned))
                .collect();
            let circles: [String; 2] = cs.try_into().map_err(|_| err())?;
            Ok(Provenance::Corner { circles, point })
        }
        _ => Err(err()),
    }
}

/// Reads a graph file. Declared degrees are kept for invariant checking.
pub fn graph_from_value(v: &Value) -> Result<VDigraph, GraphFileError> {
    let obj: &Map<String, Value> = v.as_object().ok_or_else(|| GraphFileError("not an object".into()))?;
    let axis: Axis = obj
        .get("axis")
        .and_then(Value::as_str)
        .unwrap_or("x")
        .parse()
        .map_err(GraphFileError)?;
    let mut g = VDigraph::new(axis);
    let vertices = obj
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| GraphFileError("missing vertices".into()))?;
    for vv in vertices {
        let id = vv
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| GraphFileError(format!("vertex without id: {vv}")))?;
        if g.index_of(id).is_some() {
            return Err(GraphFileError(format!("duplicate vertex id {id}")));
        }
        let value = vv
            .get("value")
            .and_then(Value::as_f64)
            .ok_or_else(|| GraphFileError(format!("vertex {id} has no numeric value")))?;
        let provenance = match vv.get("provenance").and_then(Value::as_array) {
            Some(ps) => ps.iter().map(parse_provenance).collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        g.vertices.push(Vertex {
            id: id.to_owned(),
            value,
            provenance,
            declared_degree: vv.get("degree").and_then(Value::as_u64).map(|d| d as usize),
        });
    }
    let edges = obj
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| GraphFileError("missing edges".into()))?;
    for ev in edges {
        let end = |key: &str| -> Result<usize, GraphFileError> {
            let id = ev
                .get(key)
                .and_then(Value::as_str)
                .ok_or_else(|| GraphFileError(format!("edge without {key}: {ev}")))?;
            g.index_of(id).ok_or_else(|| GraphFileError(format!("edge names unknown vertex {id}")))
        };
        let (src, dst) = (end("src")?, end("dst")?);
        g.edges.push(Edge { src, dst });
    }
    Ok(g)
}

pub fn graph_from_json(text: &str) -> Result<VDigraph, GraphFileError> {
    let v: Value = serde_json::from_str(text).map_err(|e| GraphFileError(e.to_string()))?;
    graph_from_value(&v)
}
