//! The JSON cut report shared by the sequential, distributed and oracle paths.

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph, Vertex};

pub const SCHEMA: &str = "smallcut-report/1";

/// One cut class: a dense id, its edges, and optionally the shared φ value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutClass {
    pub id: usize,
    pub edges: Vec<EdgeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

/// Versioned cut report. Absent fields were not computed.
///
/// Label maps are canonical: vertex labels are the smallest vertex of the
/// class, block labels the smallest edge index of the block, and class ids
/// are dense in order of each class's first edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutReport {
    pub schema: String,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_edges: Option<Vec<EdgeId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_classes: Option<Vec<CutClass>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_pair_edges: Option<Vec<EdgeId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_vertices: Option<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_ecc: Option<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub three_ecc: Option<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<EdgeId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

impl CutReport {
    pub fn empty(g: &Graph) -> Self {
        CutReport {
            schema: SCHEMA.to_string(),
            n: g.n(),
            m: g.m(),
            cut_edges: None,
            cut_classes: None,
            cut_pair_edges: None,
            cut_vertices: None,
            two_ecc: None,
            three_ecc: None,
            blocks: None,
            verified: None,
        }
    }

    /// Set classes from edge groups and derive `cut_pair_edges`.
    pub fn set_classes(&mut self, groups: Vec<(Option<String>, Vec<EdgeId>)>) {
        let classes = canonical_classes(groups);
        let mut pair_edges: Vec<EdgeId> = classes.iter().flat_map(|c| c.edges.clone()).collect();
        pair_edges.sort_unstable();
        self.cut_pair_edges = Some(pair_edges);
        self.cut_classes = Some(classes);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Names of fields present in both reports whose contents differ.
    /// Class values are ignored; only class membership is compared.
    pub fn diff(&self, other: &CutReport) -> Vec<String> {
        let mut out = Vec::new();
        if (self.n, self.m) != (other.n, other.m) {
            out.push("shape".to_string());
        }
        fn cmp<T: PartialEq>(out: &mut Vec<String>, name: &str, a: &Option<T>, b: &Option<T>) {
            if let (Some(a), Some(b)) = (a, b) {
                if a != b {
                    out.push(name.to_string());
                }
            }
        }
        cmp(&mut out, "cut_edges", &self.cut_edges, &other.cut_edges);
        let strip = |c: &Option<Vec<CutClass>>| {
            c.as_ref()
                .map(|v| v.iter().map(|k| k.edges.clone()).collect::<Vec<_>>())
        };
        cmp(&mut out, "cut_classes", &strip(&self.cut_classes), &strip(&other.cut_classes));
        cmp(&mut out, "cut_pair_edges", &self.cut_pair_edges, &other.cut_pair_edges);
        cmp(&mut out, "cut_vertices", &self.cut_vertices, &other.cut_vertices);
        cmp(&mut out, "two_ecc", &self.two_ecc, &other.two_ecc);
        cmp(&mut out, "three_ecc", &self.three_ecc, &other.three_ecc);
        cmp(&mut out, "blocks", &self.blocks, &other.blocks);
        out
    }
}

/// Sort each group, order groups by first edge and number them densely.
pub fn canonical_classes(groups: Vec<(Option<String>, Vec<EdgeId>)>) -> Vec<CutClass> {
    let mut groups: Vec<_> = groups
        .into_iter()
        .map(|(v, mut e)| {
            e.sort_unstable();
            (v, e)
        })
        .filter(|(_, e)| !e.is_empty())
        .collect();
    groups.sort_by_key(|(_, e)| e[0]);
    groups
        .into_iter()
        .enumerate()
        .map(|(id, (value, edges))| CutClass { id, edges, value })
        .collect()
}

/// Relabel so each element maps to the smallest element sharing its label.
pub fn canonical_labels<L: Ord + Clone>(labels: &[L]) -> Vec<usize> {
    let mut first = std::collections::BTreeMap::new();
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| *first.entry(l.clone()).or_insert(i))
        .collect()
}
