//! Finite metric windows: group balls, quotient balls, and abstract point
//! sets, with basepoint distances and the distance-1 edge graph.
//!
//! Snapshots are immutable after construction and deterministic: vertices
//! are sorted lexicographically by canonical key, never by insertion order,
//! so identical inputs give identical snapshots regardless of scheduling.

use std::collections::HashMap;

use serde_json::json;

use crate::coset::CosetKey;
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::presentation::FibredPresentation;

/// Default cap on enumerated vertices.
pub const DEFAULT_VERTEX_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotKind {
    Group,
    Quotient,
    Abstract,
}

impl SnapshotKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SnapshotKind::Group => "group",
            SnapshotKind::Quotient => "quotient",
            SnapshotKind::Abstract => "abstract",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKey {
    Element(GroupElement),
    Coset(CosetKey),
    Point(Vec<i64>),
}

#[derive(Debug, Clone)]
pub(crate) enum SnapshotSource {
    Group(FibredPresentation),
    Quotient(FibredPresentation),
    Points(Vec<Vec<i64>>),
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub(crate) kind: SnapshotKind,
    pub(crate) source: SnapshotSource,
    keys: Vec<VertexKey>,
    dist: Vec<u32>,
    adj: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
    radius: u32,
    index: HashMap<VertexKey, u32>,
}

impl Snapshot {
    /// Assembles a snapshot from an enumerated vertex->distance map and a
    /// neighbor function used to place the distance-1 edges.
    pub(crate) fn assemble(
        kind: SnapshotKind,
        source: SnapshotSource,
        map: HashMap<VertexKey, u32>,
        radius: u32,
        neighbors: impl Fn(&VertexKey) -> Vec<VertexKey>,
    ) -> Self {
        let mut keys: Vec<VertexKey> = map.keys().cloned().collect();
        keys.sort();
        let index: HashMap<VertexKey, u32> = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i as u32))
            .collect();
        let dist: Vec<u32> = keys.iter().map(|k| map[k]).collect();
        let mut edges = Vec::new();
        for (i, key) in keys.iter().enumerate() {
            for nb in neighbors(key) {
                if let Some(&j) = index.get(&nb) {
                    let (a, b) = (i as u32, j);
                    if a < b {
                        edges.push((a, b));
                    }
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); keys.len()];
        for &(a, b) in &edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self {
            kind,
            source,
            keys,
            dist,
            adj,
            edges,
            radius,
            index,
        }
    }

    /// Abstract snapshot on explicit points of Z^m with the l1 metric.
    /// The first point is the basepoint; edges join pairs at distance 1.
    pub fn from_l1_points(points: Vec<Vec<i64>>) -> Self {
        assert!(!points.is_empty());
        let base = points[0].clone();
        let mut map = HashMap::new();
        for p in &points {
            map.insert(VertexKey::Point(p.clone()), l1(p, &base));
        }
        let radius = map.values().copied().max().unwrap_or(0);
        let all = points.clone();
        Self::assemble(
            SnapshotKind::Abstract,
            SnapshotSource::Points(points),
            map,
            radius,
            |key| {
                let VertexKey::Point(p) = key else { unreachable!() };
                all.iter()
                    .filter(|q| l1(p, q) == 1)
                    .map(|q| VertexKey::Point(q.clone()))
                    .collect()
            },
        )
    }

    pub fn kind(&self) -> SnapshotKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn keys(&self) -> &[VertexKey] {
        &self.keys
    }

    pub fn dist(&self, v: u32) -> u32 {
        self.dist[v as usize]
    }

    pub fn dists(&self) -> &[u32] {
        &self.dist
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn index_of(&self, key: &VertexKey) -> Option<u32> {
        self.index.get(key).copied()
    }

    /// Interior vertices have their complete neighbor set present.
    pub fn is_interior(&self, v: u32) -> bool {
        self.dist[v as usize] < self.radius
    }

    /// Sphere sizes by basepoint distance, 0..=radius.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.radius as usize + 1];
        for &d in &self.dist {
            sizes[d as usize] += 1;
        }
        sizes
    }

    pub fn label(&self, v: u32) -> String {
        match (&self.keys[v as usize], &self.source) {
            (VertexKey::Element(e), SnapshotSource::Group(p)) => p.element_string(e),
            (VertexKey::Coset(k), SnapshotSource::Quotient(p)) => k.coset_string(p),
            (VertexKey::Point(pt), _) => {
                let coords: Vec<String> = pt.iter().map(|c| c.to_string()).collect();
                format!("({})", coords.join(","))
            }
            _ => unreachable!("key kind does not match snapshot source"),
        }
    }

    /// Ambient distances from vertex `v` to every snapshot member within
    /// `scale`, measured in the space the snapshot was cut from (word metric
    /// for group balls, quotient graph for quotient balls, l1 for point
    /// sets). Wandering outside the window is allowed.
    pub fn ambient_neighborhood(
        &self,
        v: u32,
        scale: u32,
        budget: usize,
    ) -> Result<Vec<(u32, u32)>> {
        let mut found = Vec::new();
        match &self.source {
            SnapshotSource::Points(points) => {
                let VertexKey::Point(p) = &self.keys[v as usize] else {
                    unreachable!()
                };
                for (j, q) in points.iter().enumerate() {
                    let d = l1(p, q);
                    if d <= scale {
                        // Point snapshots index vertices by sorted key order.
                        let key = VertexKey::Point(q.clone());
                        let idx = self.index[&key];
                        let _ = j;
                        found.push((idx, d));
                    }
                }
            }
            SnapshotSource::Group(pres) => {
                let VertexKey::Element(start) = &self.keys[v as usize] else {
                    unreachable!()
                };
                let gens = pres.generators();
                let map = truncated_bfs(start.clone(), scale, budget, |e| {
                    gens.iter().map(|g| pres.apply_generator(e, g)).collect()
                })?;
                for (e, d) in map {
                    if let Some(&idx) = self.index.get(&VertexKey::Element(e)) {
                        found.push((idx, d));
                    }
                }
            }
            SnapshotSource::Quotient(pres) => {
                let VertexKey::Coset(start) = &self.keys[v as usize] else {
                    unreachable!()
                };
                let map = truncated_bfs(start.clone(), scale, budget, |k| {
                    pres.quotient_neighbors(k)
                        .into_iter()
                        .map(|(nb, _)| nb)
                        .collect()
                })?;
                for (k, d) in map {
                    if let Some(&idx) = self.index.get(&VertexKey::Coset(k)) {
                        found.push((idx, d));
                    }
                }
            }
        }
        found.sort_unstable();
        Ok(found)
    }

    /// JSON export: `{vertices, dist, edges, radius, kind}`.
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<String> = (0..self.len() as u32).map(|v| self.label(v)).collect();
        json!({
            "kind": self.kind.as_str(),
            "radius": self.radius,
            "vertices": vertices,
            "dist": self.dist,
            "edges": self.edges.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
        })
    }

    /// DOT export: undirected graph, labels are canonical key strings.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("graph {name} {{\n"));
        for v in 0..self.len() as u32 {
            out.push_str(&format!(
                "  v{} [label=\"{}\" dist={}];\n",
                v,
                self.label(v).replace('"', "\\\""),
                self.dist(v)
            ));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  v{a} -- v{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn l1(a: &[i64], b: &[i64]) -> u32 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x.abs_diff(*y))
        .sum::<u64>()
        .try_into()
        .expect("l1 distance overflow")
}

/// Breadth-first enumeration truncated at `depth`, with a vertex budget.
/// Deterministic: the result map is a plain value; callers order it.
pub(crate) fn truncated_bfs<K, F>(
    start: K,
    depth: u32,
    budget: usize,
    neighbors: F,
) -> Result<HashMap<K, u32>>
where
    K: Clone + Eq + std::hash::Hash,
    F: Fn(&K) -> Vec<K>,
{
    let mut map = HashMap::new();
    map.insert(start.clone(), 0u32);
    let mut frontier = vec![start];
    let mut level = 0u32;
    while level < depth && !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for v in &frontier {
            for w in neighbors(v) {
                if !map.contains_key(&w) {
                    if map.len() >= budget {
                        return Err(Error::BudgetExceeded {
                            used: map.len(),
                            limit: budget,
                            unit: "vertices",
                        });
                    }
                    map.insert(w.clone(), level);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    Ok(map)
}
