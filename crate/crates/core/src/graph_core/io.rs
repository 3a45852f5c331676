//! JSON file format for labeled graphs, directed structures, decorations and
//! coverings. Output is canonical: keys sorted, vertices and edges sorted by id.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{DirectedStructure, EdgeSpec, HalfEdge, LabeledGraph};
use crate::covering::BranchedCovering;
use crate::error::{GbsError, GbsResult};

/// Optional per-vertex / per-edge integer decorations (lengths, degrees).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decorations {
    pub length: BTreeMap<String, u64>,
    pub degree: BTreeMap<String, u64>,
}

impl Decorations {
    pub fn is_empty(&self) -> bool {
        self.length.is_empty() && self.degree.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDocument {
    pub graph: LabeledGraph,
    pub plus: Option<DirectedStructure>,
    pub decorations: Decorations,
}

impl GraphDocument {
    pub fn plain(graph: LabeledGraph) -> GraphDocument {
        GraphDocument { graph, plus: None, decorations: Decorations::default() }
    }
}

fn perr(location: impl Into<String>, message: impl Into<String>) -> GbsError {
    GbsError::Parse { location: location.into(), message: message.into() }
}

fn parse_value(text: &str) -> GbsResult<Value> {
    serde_json::from_str(text)
        .map_err(|e| perr(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

fn as_object<'a>(v: &'a Value, at: &str) -> GbsResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(at, "expected an object"))
}

fn as_str<'a>(v: &'a Value, at: &str) -> GbsResult<&'a str> {
    v.as_str().ok_or_else(|| perr(at, "expected a string"))
}

fn as_i64(v: &Value, at: &str) -> GbsResult<i64> {
    v.as_i64().ok_or_else(|| perr(at, "expected an integer"))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], at: &str) -> GbsResult<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(perr(format!("{at}.{k}"), "unknown key"));
        }
    }
    Ok(())
}

fn positive_map(v: &Value, at: &str) -> GbsResult<BTreeMap<String, u64>> {
    let obj = as_object(v, at)?;
    let mut out = BTreeMap::new();
    for (k, val) in obj {
        let loc = format!("{at}.{k}");
        let n = val.as_u64().filter(|&n| n > 0).ok_or_else(|| perr(&loc, "expected a positive integer"))?;
        out.insert(k.clone(), n);
    }
    Ok(out)
}

fn document_from_value(root: &Value, at: &str) -> GbsResult<GraphDocument> {
    let obj = as_object(root, at)?;
    reject_unknown(obj, &["vertices", "edges", "decorations"], at)?;
    let vloc = format!("{at}.vertices");
    let vertices = obj.get("vertices").ok_or_else(|| perr(&vloc, "missing"))?;
    let vertices = vertices.as_array().ok_or_else(|| perr(&vloc, "expected an array"))?;
    let mut names = Vec::with_capacity(vertices.len());
    let mut seen = std::collections::BTreeSet::new();
    for (i, v) in vertices.iter().enumerate() {
        let loc = format!("{vloc}[{i}]");
        let name = as_str(v, &loc)?;
        if !seen.insert(name.to_string()) {
            return Err(perr(loc, format!("duplicate vertex id `{name}`")));
        }
        names.push(name.to_string());
    }
    let eloc = format!("{at}.edges");
    let edges = match obj.get("edges") {
        Some(e) => e.as_array().ok_or_else(|| perr(&eloc, "expected an array"))?.as_slice(),
        None => &[],
    };
    let mut specs = Vec::with_capacity(edges.len());
    let mut plus_flags: Vec<Option<bool>> = Vec::with_capacity(edges.len());
    let mut edge_ids = std::collections::BTreeSet::new();
    for (i, e) in edges.iter().enumerate() {
        let loc = format!("{eloc}[{i}]");
        let rec = as_object(e, &loc)?;
        reject_unknown(rec, &["id", "from", "to", "labelAtFrom", "labelAtTo", "plus"], &loc)?;
        let field = |k: &str| rec.get(k).ok_or_else(|| perr(format!("{loc}.{k}"), "missing"));
        let id = as_str(field("id")?, &format!("{loc}.id"))?;
        if !edge_ids.insert(id.to_string()) {
            return Err(perr(format!("{loc}.id"), format!("duplicate edge id `{id}`")));
        }
        if seen.contains(id) {
            return Err(perr(format!("{loc}.id"), format!("edge id `{id}` is also a vertex id")));
        }
        let from = as_str(field("from")?, &format!("{loc}.from"))?;
        let to = as_str(field("to")?, &format!("{loc}.to"))?;
        for (k, name) in [("from", from), ("to", to)] {
            if !seen.contains(name) {
                return Err(perr(format!("{loc}.{k}"), format!("unknown vertex `{name}`")));
            }
        }
        let a = as_i64(field("labelAtFrom")?, &format!("{loc}.labelAtFrom"))?;
        let b = as_i64(field("labelAtTo")?, &format!("{loc}.labelAtTo"))?;
        let plus = match rec.get("plus") {
            None => None,
            Some(p) => Some(p.as_bool().ok_or_else(|| perr(format!("{loc}.plus"), "expected a boolean"))?),
        };
        plus_flags.push(plus);
        specs.push(EdgeSpec::new(id, from, to, a, b));
    }
    let graph = LabeledGraph::new(&names, &specs).map_err(|e| perr(at, e.to_string()))?;
    let plus = if plus_flags.iter().all(Option::is_none) {
        None
    } else if plus_flags.iter().all(Option::is_some) {
        // Graph edges are sorted by id; re-key the flags accordingly.
        let by_id: BTreeMap<&str, bool> =
            specs.iter().zip(&plus_flags).map(|(s, f)| (s.id.as_str(), f.unwrap())).collect();
        let flags = graph.edges().iter().map(|e| by_id[e.id.as_str()]).collect();
        Some(DirectedStructure::from_forward_flags(flags))
    } else {
        return Err(perr(&eloc, "`plus` must be given on every edge or on none"));
    };
    let mut decorations = Decorations::default();
    if let Some(d) = obj.get("decorations") {
        let dloc = format!("{at}.decorations");
        let dobj = as_object(d, &dloc)?;
        reject_unknown(dobj, &["length", "degree"], &dloc)?;
        if let Some(l) = dobj.get("length") {
            decorations.length = positive_map(l, &format!("{dloc}.length"))?;
        }
        if let Some(l) = dobj.get("degree") {
            decorations.degree = positive_map(l, &format!("{dloc}.degree"))?;
        }
        for (kind, map) in [("length", &decorations.length), ("degree", &decorations.degree)] {
            for k in map.keys() {
                if graph.vertex_index(k).is_none() && graph.edge_index(k).is_none() {
                    return Err(perr(format!("{dloc}.{kind}.{k}"), "key is neither a vertex nor an edge id"));
                }
            }
        }
    }
    Ok(GraphDocument { graph, plus, decorations })
}

pub fn parse_document(text: &str) -> GbsResult<GraphDocument> {
    document_from_value(&parse_value(text)?, "$")
}

pub fn parse_graph(text: &str) -> GbsResult<LabeledGraph> {
    Ok(parse_document(text)?.graph)
}

fn document_value(doc: &GraphDocument) -> Value {
    let g = &doc.graph;
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut rec = json!({
                "id": e.id,
                "from": g.vertex_name(e.from),
                "to": g.vertex_name(e.to),
                "labelAtFrom": e.label_from,
                "labelAtTo": e.label_to,
            });
            if let Some(p) = &doc.plus {
                rec["plus"] = Value::Bool(p.forward_flags()[i]);
            }
            rec
        })
        .collect();
    let mut out = json!({ "vertices": g.vertices(), "edges": edges });
    if !doc.decorations.is_empty() {
        let mut d = Map::new();
        if !doc.decorations.length.is_empty() {
            d.insert("length".into(), json!(doc.decorations.length));
        }
        if !doc.decorations.degree.is_empty() {
            d.insert("degree".into(), json!(doc.decorations.degree));
        }
        out["decorations"] = Value::Object(d);
    }
    out
}

pub fn serialize_document(doc: &GraphDocument) -> String {
    let mut s = serde_json::to_string_pretty(&document_value(doc)).expect("json values serialize");
    s.push('\n');
    s
}

pub fn serialize_graph(g: &LabeledGraph) -> String {
    serialize_document(&GraphDocument::plain(g.clone()))
}

pub fn parse_covering(text: &str) -> GbsResult<BranchedCovering> {
    let root = parse_value(text)?;
    let obj = as_object(&root, "$")?;
    reject_unknown(obj, &["source", "target", "vertexMap", "edgeMap", "degree"], "$")?;
    let get = |k: &str| obj.get(k).ok_or_else(|| perr(format!("$.{k}"), "missing"));
    let source = document_from_value(get("source")?, "$.source")?.graph;
    let target = document_from_value(get("target")?, "$.target")?.graph;
    let vmap = as_object(get("vertexMap")?, "$.vertexMap")?;
    let mut vertex_map = vec![usize::MAX; source.vertex_count()];
    for (k, v) in vmap {
        let loc = format!("$.vertexMap.{k}");
        let s = source.vertex_index(k).ok_or_else(|| perr(&loc, "unknown source vertex"))?;
        let t = target.vertex_index(as_str(v, &loc)?).ok_or_else(|| perr(&loc, "unknown target vertex"))?;
        vertex_map[s] = t;
    }
    if let Some(i) = vertex_map.iter().position(|&t| t == usize::MAX) {
        return Err(perr("$.vertexMap", format!("no image for vertex `{}`", source.vertex_name(i))));
    }
    let emap = as_object(get("edgeMap")?, "$.edgeMap")?;
    let mut edge_map: Vec<Option<HalfEdge>> = vec![None; source.edge_count()];
    for (k, v) in emap {
        let loc = format!("$.edgeMap.{k}");
        let s = source.edge_index(k).ok_or_else(|| perr(&loc, "unknown source edge"))?;
        let t = target.half_edge_by_name(as_str(v, &loc)?).ok_or_else(|| perr(&loc, "unknown target half-edge"))?;
        edge_map[s] = Some(t);
    }
    let edge_map = edge_map
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| perr("$.edgeMap", format!("no image for edge `{}`", source.edges()[i].id))))
        .collect::<GbsResult<Vec<_>>>()?;
    let degree = positive_map(get("degree")?, "$.degree")?;
    let mut vertex_degree = Vec::with_capacity(source.vertex_count());
    for v in source.vertices() {
        vertex_degree.push(*degree.get(v).ok_or_else(|| perr("$.degree", format!("no degree for vertex `{v}`")))?);
    }
    let mut edge_degree = Vec::with_capacity(source.edge_count());
    for e in source.edges() {
        edge_degree.push(*degree.get(&e.id).ok_or_else(|| perr("$.degree", format!("no degree for edge `{}`", e.id)))?);
    }
    for k in degree.keys() {
        if source.vertex_index(k).is_none() && source.edge_index(k).is_none() {
            return Err(perr(format!("$.degree.{k}"), "unknown source id"));
        }
    }
    Ok(BranchedCovering { source, target, vertex_map, edge_map, vertex_degree, edge_degree })
}

pub fn serialize_covering(c: &BranchedCovering) -> String {
    let s = &c.source;
    let vmap: BTreeMap<&str, &str> = (0..s.vertex_count())
        .map(|v| (s.vertex_name(v), c.target.vertex_name(c.vertex_map[v])))
        .collect();
    let emap: BTreeMap<&str, String> =
        s.edges().iter().enumerate().map(|(i, e)| (e.id.as_str(), c.target.half_edge_name(c.edge_map[i]))).collect();
    let mut degree: BTreeMap<&str, u64> = BTreeMap::new();
    for v in 0..s.vertex_count() {
        degree.insert(s.vertex_name(v), c.vertex_degree[v]);
    }
    for (i, e) in s.edges().iter().enumerate() {
        degree.insert(e.id.as_str(), c.edge_degree[i]);
    }
    let v = json!({
        "source": document_value(&GraphDocument::plain(c.source.clone())),
        "target": document_value(&GraphDocument::plain(c.target.clone())),
        "vertexMap": vmap,
        "edgeMap": emap,
        "degree": degree,
    });
    let mut out = serde_json::to_string_pretty(&v).expect("json values serialize");
    out.push('\n');
    out
}
