//! JSON graph files: parsing with JSON-pointer diagnostics, and export.

use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Automorphisms, ComponentSpec, LabeledGraph};
use crate::word::Alphabet;

/// A parsed input file: the graph as declared and its folded form.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub raw: LabeledGraph,
    pub folded: LabeledGraph,
    pub automorphisms: Automorphisms,
    pub warnings: Vec<String>,
}

impl ParsedGraph {
    pub fn was_folded(&self) -> bool {
        self.raw.is_folded()
    }
}

pub fn parse_graph_file(path: &Path) -> Result<ParsedGraph> {
    let text = std::fs::read_to_string(path)?;
    parse_graph_str(&text)
}

pub fn parse_graph_str(text: &str) -> Result<ParsedGraph> {
    let value: Value = serde_json::from_str(text)?;
    let raw = graph_from_value(&value)?;
    let report = raw.fold();
    let mut warnings = Vec::new();
    if report.changed {
        warnings.push(format!(
            "input was not folded; folding merged {} vertices into {}",
            raw.vertex_count(),
            report.graph.vertex_count()
        ));
    }
    let automorphisms = report.graph.label_automorphisms()?;
    Ok(ParsedGraph { raw, folded: report.graph, automorphisms, warnings })
}

fn schema(pointer: &str, message: &str) -> Error {
    Error::Schema(format!("{pointer}: {message}"))
}

fn as_str<'a>(v: &'a Value, pointer: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(pointer, "expected a string"))
}

fn as_usize(v: &Value, pointer: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(pointer, "expected a nonnegative integer"))
}

fn as_array<'a>(v: &'a Value, pointer: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(pointer, "expected an array"))
}

/// Build the declared (possibly unfolded) graph from a parsed JSON document.
pub fn graph_from_value(value: &Value) -> Result<LabeledGraph> {
    let obj = value.as_object().ok_or_else(|| schema("", "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "alphabet" | "letter_order" | "components") {
            return Err(schema(&format!("/{key}"), "unknown field"));
        }
    }
    let names = as_array(obj.get("alphabet").ok_or_else(|| schema("/alphabet", "missing"))?, "/alphabet")?
        .iter()
        .enumerate()
        .map(|(i, g)| as_str(g, &format!("/alphabet/{i}")).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let mut alphabet = Alphabet::new(&names)?;
    if let Some(order) = obj.get("letter_order") {
        let order = as_array(order, "/letter_order")?
            .iter()
            .enumerate()
            .map(|(i, l)| as_str(l, &format!("/letter_order/{i}")).map(str::to_string))
            .collect::<Result<Vec<_>>>()?;
        alphabet = alphabet.with_order(&order)?;
    }
    let comps = as_array(obj.get("components").ok_or_else(|| schema("/components", "missing"))?, "/components")?;
    let mut specs = Vec::with_capacity(comps.len());
    for (ci, c) in comps.iter().enumerate() {
        let p = format!("/components/{ci}");
        let co = c.as_object().ok_or_else(|| schema(&p, "expected an object"))?;
        for key in co.keys() {
            if !matches!(key.as_str(), "name" | "vertices" | "edges") {
                return Err(schema(&format!("{p}/{key}"), "unknown field"));
            }
        }
        let name = match co.get("name") {
            Some(n) => as_str(n, &format!("{p}/name"))?.to_string(),
            None => format!("G{}", ci + 1),
        };
        let vertices = as_usize(co.get("vertices").ok_or_else(|| schema(&format!("{p}/vertices"), "missing"))?, &format!("{p}/vertices"))?;
        let edges_v = as_array(co.get("edges").ok_or_else(|| schema(&format!("{p}/edges"), "missing"))?, &format!("{p}/edges"))?;
        let mut edges = Vec::with_capacity(edges_v.len());
        for (ei, e) in edges_v.iter().enumerate() {
            let ep = format!("{p}/edges/{ei}");
            let triple = as_array(e, &ep)?;
            if triple.len() != 3 {
                return Err(schema(&ep, "expected [source, target, letter]"));
            }
            let u = as_usize(&triple[0], &format!("{ep}/0"))?;
            let v = as_usize(&triple[1], &format!("{ep}/1"))?;
            let label = alphabet.parse_letter(as_str(&triple[2], &format!("{ep}/2"))?)?;
            edges.push((u, v, label));
        }
        specs.push(ComponentSpec { name, vertices, edges });
    }
    if names.is_empty() {
        return Err(schema("/alphabet", "alphabet is empty"));
    }
    LabeledGraph::new(alphabet, specs)
}

/// Serialize a graph in the input file format.
pub fn graph_to_value(graph: &LabeledGraph) -> Value {
    let al = graph.alphabet();
    let components: Vec<Value> = graph
        .components()
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let edges: Vec<Value> = graph
                .component_darts(ci)
                .filter(|d| d % 2 == 0)
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .map(|d| {
                    let dart = graph.dart(d);
                    json!([dart.source - c.first, dart.target - c.first, al.letter_name(dart.label)])
                })
                .collect();
            json!({ "name": c.name, "vertices": c.count, "edges": edges })
        })
        .collect();
    let mut out = json!({
        "alphabet": al.generators(),
        "components": components,
    });
    if !al.is_default_order() {
        out["letter_order"] = json!(al.letters().iter().map(|&l| al.letter_name(l)).collect::<Vec<_>>());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle_file() {
        let p = parse_graph_str(r#"{"alphabet":["a","b"],"components":[{"name":"T","vertices":3,"edges":[[0,1,"a"],[1,2,"a"],[2,0,"b"]]}]}"#).unwrap();
        assert_eq!(p.folded.components().len(), 1);
        assert_eq!(p.folded.girth(0), Some(3));
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn inverse_labels_round_trip() {
        let text = r#"{"alphabet":["a","b"],"components":[{"name":"T","vertices":3,"edges":[[0,1,"a"],[1,2,"b^-1"],[2,0,"b^-1"]]}]}"#;
        let p = parse_graph_str(text).unwrap();
        let b_inv = p.folded.alphabet().parse_letter("b^-1").unwrap();
        let d = p.folded.follow(1, b_inv).unwrap();
        assert_eq!(p.folded.dart(d).target, 2);
        let again = graph_from_value(&graph_to_value(&p.folded)).unwrap();
        assert_eq!(again, p.folded);
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let err = parse_graph_str(r#"{"alphabet":["a"],"components":[{"vertices":2,"edges":[[0,1]]}]}"#).unwrap_err();
        assert!(err.to_string().contains("/components/0/edges/0"), "{err}");
        let err = parse_graph_str(r#"{"alphabet":["a"],"components":[{"vertices":2,"edges":[[0,1,"c"]]}]}"#).unwrap_err();
        assert!(matches!(err, Error::UnknownLetter(_)));
    }

    #[test]
    fn isomorphic_components_rejected() {
        let text = r#"{"alphabet":["a"],"components":[
            {"name":"x","vertices":2,"edges":[[0,1,"a"],[1,0,"a"]]},
            {"name":"y","vertices":2,"edges":[[1,0,"a"],[0,1,"a"]]}]}"#;
        assert!(matches!(parse_graph_str(text), Err(Error::DuplicateComponent { .. })));
    }

    #[test]
    fn unfolded_input_is_folded_with_warning() {
        let text = r#"{"alphabet":["a"],"components":[{"name":"x","vertices":3,"edges":[[0,1,"a"],[0,2,"a"]]}]}"#;
        let p = parse_graph_str(text).unwrap();
        assert!(!p.was_folded());
        assert_eq!(p.folded.vertex_count(), 2);
        assert_eq!(p.warnings.len(), 1);
    }
}
