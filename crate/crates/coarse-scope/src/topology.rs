//! Coarse-topology probes: Rips 2-skeletons with Z_2 homology, ends at
//! scale, coarse complementary components, and the fibre/base component
//! correspondence.
//!
//! Homology stops at dimension 1; the computable statements in scope are
//! 1-acyclicity of a Rips scale relative to a coarser one. Unknown distances
//! (cap or budget exhaustion during ambient probes) exclude a simplex rather
//! than abort, which under-approximates the complex monotonically and is
//! flagged on the report.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::coset::CosetKey;
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::gf2::{self, Eliminator};
use crate::presentation::FibredPresentation;
use crate::snapshot::{truncated_bfs, Snapshot, VertexKey};

/// Default cap on enumerated triangles.
pub const DEFAULT_TRIANGLE_BUDGET: usize = 5_000_000;

/// Rips 2-skeleton of a snapshot at a scale: edges join ambient-distance-
/// at-most-r pairs, triangles are pairwise-close triples.
#[derive(Debug, Clone)]
pub struct RipsComplex2 {
    pub scale: u32,
    pub vertex_count: usize,
    pub edges: Vec<(u32, u32)>,
    pub triangles: Vec<(u32, u32, u32)>,
    edge_index: HashMap<(u32, u32), u32>,
    /// True when some pairwise probe exhausted its budget and the pair was
    /// treated as farther than the scale.
    pub truncated: bool,
}

impl RipsComplex2 {
    pub fn edge_id(&self, a: u32, b: u32) -> Option<u32> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edge_index.get(&key).copied()
    }

    /// Boundary of a triangle: its three edge ids, sorted.
    pub fn triangle_boundary(&self, t: &(u32, u32, u32)) -> Vec<u32> {
        let mut ids = vec![
            self.edge_id(t.0, t.1).unwrap(),
            self.edge_id(t.0, t.2).unwrap(),
            self.edge_id(t.1, t.2).unwrap(),
        ];
        ids.sort_unstable();
        ids
    }

    /// Columns of the edge boundary map (vertex indices per edge).
    pub fn d1_columns(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.edges.iter().map(|&(a, b)| vec![a, b])
    }

    /// Columns of the triangle boundary map (edge ids per triangle).
    pub fn d2_columns(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.triangles.iter().map(|t| self.triangle_boundary(t))
    }

    /// Sparse triplet text export of a boundary matrix:
    /// header `rows cols nnz`, then one `row col` pair per line.
    pub fn boundary_triplets(&self, dimension: u8) -> String {
        let (rows, cols): (usize, Vec<Vec<u32>>) = match dimension {
            1 => (self.vertex_count, self.d1_columns().collect()),
            2 => (self.edges.len(), self.d2_columns().collect()),
            _ => panic!("only dimensions 1 and 2 are stored"),
        };
        let nnz: usize = cols.iter().map(|c| c.len()).sum();
        let mut out = format!("{} {} {}\n", rows, cols.len(), nnz);
        for (j, col) in cols.iter().enumerate() {
            for &i in col {
                out.push_str(&format!("{i} {j}\n"));
            }
        }
        out
    }
}

/// Builds the Rips 2-skeleton of a snapshot at the given scale. Pairwise
/// distances come from the snapshot's ambient metric, probed on demand.
pub fn rips(snapshot: &Snapshot, scale: u32, budget: usize) -> Result<RipsComplex2> {
    let n = snapshot.len();
    let probes: Vec<(Vec<(u32, u32)>, bool)> = (0..n as u32)
        .into_par_iter()
        .map(|v| match snapshot.ambient_neighborhood(v, scale, budget) {
            Ok(list) => (list, false),
            Err(Error::BudgetExceeded { .. }) => (Vec::new(), true),
            Err(_) => (Vec::new(), true),
        })
        .collect();
    let truncated = probes.iter().any(|(_, t)| *t);
    let neighbor_sets: Vec<std::collections::HashSet<u32>> = probes
        .iter()
        .map(|(list, _)| list.iter().map(|&(w, _)| w).collect())
        .collect();

    let mut edges = Vec::new();
    for (v, (list, _)) in probes.iter().enumerate() {
        for &(w, _) in list {
            if (v as u32) < w {
                edges.push((v as u32, w));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let edge_index: HashMap<(u32, u32), u32> = edges
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i as u32))
        .collect();

    let mut triangles = Vec::new();
    for &(v, w) in &edges {
        // Triangles (v, w, u) with u > w adjacent to both.
        for &(u, _) in probes[v as usize].0.iter() {
            if u > w && neighbor_sets[w as usize].contains(&u) {
                if triangles.len() >= budget {
                    return Err(Error::BudgetExceeded {
                        used: triangles.len(),
                        limit: budget,
                        unit: "triangles",
                    });
                }
                triangles.push((v, w, u));
            }
        }
    }
    triangles.sort_unstable();
    Ok(RipsComplex2 {
        scale,
        vertex_count: n,
        edges,
        triangles,
        edge_index,
        truncated,
    })
}

/// Z_2 Betti numbers (b0, b1) of a Rips 2-skeleton.
pub fn betti_z2(complex: &RipsComplex2) -> (usize, usize) {
    let rank_d1 = gf2::rank(complex.d1_columns());
    let rank_d2 = gf2::rank(complex.d2_columns());
    let b0 = complex.vertex_count - rank_d1;
    let b1 = complex.edges.len() - rank_d1 - rank_d2;
    (b0, b1)
}

/// Outcome of the relative 1-acyclicity probe.
#[derive(Debug, Clone)]
pub struct RelativeAcyclicity {
    pub holds: bool,
    /// A non-bounding 1-cycle of the inner complex, as vertex-index edge
    /// pairs into the inner snapshot, when `holds` is false.
    pub witness: Option<Vec<(u32, u32)>>,
    pub inner_cycles: usize,
    pub truncated: bool,
}

/// Checks that every 1-cycle of `rips(inner, r)` bounds in
/// `rips(outer, r')`. Preconditions: the inner vertex set embeds in the
/// outer one (checked), and `r <= r'`.
pub fn relative_acyclicity(
    inner: (&Snapshot, u32),
    outer: (&Snapshot, u32),
    budget: usize,
) -> Result<RelativeAcyclicity> {
    let (snap_in, r_in) = inner;
    let (snap_out, r_out) = outer;
    assert!(r_in <= r_out, "inner scale must not exceed outer scale");
    // Vertex embedding inner -> outer.
    let embed: Vec<u32> = snap_in
        .keys()
        .iter()
        .map(|k| {
            snap_out.index_of(k).ok_or_else(|| Error::DimensionMismatch {
                context: "inner snapshot vertex missing from outer snapshot".into(),
            })
        })
        .collect::<Result<_>>()?;

    let rips_in = rips(snap_in, r_in, budget)?;
    let rips_out = rips(snap_out, r_out, budget)?;

    // Fundamental cycle basis of the inner 1-skeleton: BFS forest plus one
    // cycle per non-tree edge.
    let n = snap_in.len();
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n]; // (neighbor, edge id)
    for (id, &(a, b)) in rips_in.edges.iter().enumerate() {
        adj[a as usize].push((b, id as u32));
        adj[b as usize].push((a, id as u32));
    }
    let mut parent: Vec<Option<(u32, u32)>> = vec![None; n]; // (parent vertex, edge id)
    let mut visited = vec![false; n];
    let mut tree_edges = vec![false; rips_in.edges.len()];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = std::collections::VecDeque::from([root as u32]);
        while let Some(v) = queue.pop_front() {
            for &(w, eid) in &adj[v as usize] {
                if !visited[w as usize] {
                    visited[w as usize] = true;
                    parent[w as usize] = Some((v, eid));
                    tree_edges[eid as usize] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    // Eliminate the outer triangle boundaries once, then test each cycle.
    let mut eliminator = Eliminator::new();
    for col in rips_out.d2_columns() {
        eliminator.insert(col);
    }

    let path_to_root = |mut v: u32| -> Vec<u32> {
        let mut edges = Vec::new();
        while let Some((p, eid)) = parent[v as usize] {
            edges.push(eid);
            v = p;
        }
        edges
    };

    let mut inner_cycles = 0usize;
    for (id, &(a, b)) in rips_in.edges.iter().enumerate() {
        if tree_edges[id] {
            continue;
        }
        inner_cycles += 1;
        // Cycle = edge + tree paths to the common root (XOR cancels the
        // shared prefix).
        let mut cycle_inner_edges = vec![id as u32];
        for e in path_to_root(a) {
            cycle_inner_edges.push(e);
        }
        for e in path_to_root(b) {
            cycle_inner_edges.push(e);
        }
        cycle_inner_edges.sort_unstable();
        // XOR out duplicated edges (shared path segments).
        let mut cycle = Vec::new();
        let mut i = 0;
        while i < cycle_inner_edges.len() {
            if i + 1 < cycle_inner_edges.len()
                && cycle_inner_edges[i] == cycle_inner_edges[i + 1]
            {
                i += 2;
            } else {
                cycle.push(cycle_inner_edges[i]);
                i += 1;
            }
        }
        // Map to outer edge ids.
        let outer_cycle: Vec<u32> = cycle
            .iter()
            .map(|&eid| {
                let (a, b) = rips_in.edges[eid as usize];
                rips_out
                    .edge_id(embed[a as usize], embed[b as usize])
                    .expect("inner edge present at coarser scale")
            })
            .collect();
        let mut sorted = outer_cycle;
        sorted.sort_unstable();
        if !eliminator.spans(sorted) {
            let witness: Vec<(u32, u32)> = cycle
                .iter()
                .map(|&eid| rips_in.edges[eid as usize])
                .collect();
            return Ok(RelativeAcyclicity {
                holds: false,
                witness: Some(witness),
                inner_cycles,
                truncated: rips_in.truncated || rips_out.truncated,
            });
        }
    }
    Ok(RelativeAcyclicity {
        holds: true,
        witness: None,
        inner_cycles,
        truncated: rips_in.truncated || rips_out.truncated,
    })
}

/// One connected piece of the complement of a ball.
#[derive(Debug, Clone)]
pub struct ComponentInfo {
    pub size: usize,
    /// Touches the outer sphere of the snapshot.
    pub deep: bool,
    /// Smallest vertex index in the component (lex-min canonical key).
    pub representative: u32,
}

#[derive(Debug, Clone)]
pub struct ComponentReport {
    pub inner_radius: u32,
    pub components: Vec<ComponentInfo>,
    pub deep_count: usize,
}

/// Connected components of the induced subgraph on vertices at basepoint
/// distance >= r (the open ball of radius r removed), flagged deep when
/// they reach the snapshot boundary. Counting deep components across
/// r = 1..R is the ends-at-scale evidence stream.
pub fn ends_at_scale(snapshot: &Snapshot, r: u32) -> ComponentReport {
    let keep: Vec<bool> = snapshot.dists().iter().map(|&d| d >= r).collect();
    components_of(snapshot, &keep, r)
}

fn components_of(snapshot: &Snapshot, keep: &[bool], inner_radius: u32) -> ComponentReport {
    let n = snapshot.len();
    let mut comp = vec![usize::MAX; n];
    let mut infos: Vec<ComponentInfo> = Vec::new();
    for start in 0..n {
        if !keep[start] || comp[start] != usize::MAX {
            continue;
        }
        let id = infos.len();
        let mut size = 0usize;
        let mut deep = false;
        let mut queue = std::collections::VecDeque::from([start]);
        comp[start] = id;
        while let Some(v) = queue.pop_front() {
            size += 1;
            if snapshot.dist(v as u32) == snapshot.radius() {
                deep = true;
            }
            for &w in snapshot.neighbors(v as u32) {
                if keep[w as usize] && comp[w as usize] == usize::MAX {
                    comp[w as usize] = id;
                    queue.push_back(w as usize);
                }
            }
        }
        infos.push(ComponentInfo {
            size,
            deep,
            representative: start as u32,
        });
    }
    let deep_count = infos.iter().filter(|c| c.deep).count();
    ComponentReport {
        inner_radius,
        components: infos,
        deep_count,
    }
}

/// Full ends table for r = 0..=r_max.
pub fn ends_table(snapshot: &Snapshot, r_max: u32) -> Vec<ComponentReport> {
    (0..=r_max).map(|r| ends_at_scale(snapshot, r)).collect()
}

/// Hopf-style evidence from a deep-component count: 0, 1, 2 are reported as
/// themselves; 3 or more is evidence for infinitely many ends.
pub fn hopf_evidence(deep_count: usize) -> &'static str {
    match deep_count {
        0 => "0 ends at scale",
        1 => "1 end at scale",
        2 => "2 ends at scale",
        _ => ">=3 deep components => classified infinite (Hopf)",
    }
}

#[derive(Debug, Clone)]
pub struct CccReport {
    /// Deep components of ball(R_total) minus the open A-neighborhood of
    /// the fibre.
    pub total_deep: usize,
    /// Deep components of quotient_ball(R_quotient) minus the open A-ball
    /// at the base coset.
    pub quotient_deep: usize,
    pub matched: bool,
}

/// Fibre/base correspondence of coarse complementary components: the deep
/// count around the fibre upstairs against the deep count around the
/// basepoint downstairs.
pub fn ccc_correspondence(
    pres: &FibredPresentation,
    r_total: u32,
    neighborhood: u32,
    r_quotient: u32,
    budget: usize,
) -> Result<CccReport> {
    let ball = pres.ball(r_total, budget)?;
    // Graph distance from the fibre inside the ball (multi-source BFS).
    let n = ball.len();
    let mut fibre_dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for v in 0..n as u32 {
        let VertexKey::Element(e) = &ball.keys()[v as usize] else {
            unreachable!()
        };
        if e.in_fibre() {
            fibre_dist[v as usize] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in ball.neighbors(v) {
            if fibre_dist[w as usize] == u32::MAX {
                fibre_dist[w as usize] = fibre_dist[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    let keep: Vec<bool> = fibre_dist.iter().map(|&d| d >= neighborhood).collect();
    let total = components_of(&ball, &keep, neighborhood);

    let quotient = pres.quotient_ball(r_quotient, budget)?;
    let q_report = ends_at_scale(&quotient, neighborhood);

    Ok(CccReport {
        total_deep: total.deep_count,
        quotient_deep: q_report.deep_count,
        matched: total.deep_count == q_report.deep_count,
    })
}

/// Image of simplices under the quotient map `[g_0..g_k] -> [g_0 H..g_k H]`.
#[derive(Debug, Clone)]
pub struct ImageSimplex {
    pub keys: Vec<CosetKey>,
    /// Distinct keys, sorted; the collapsed simplex.
    pub collapsed: Vec<CosetKey>,
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct QuotientImage {
    pub simplices: Vec<ImageSimplex>,
    /// Smallest scale at which every mapped edge is a quotient edge: the
    /// max quotient-graph distance over mapped vertex pairs.
    pub scale: u32,
}

pub fn quotient_simplicial_image(
    pres: &FibredPresentation,
    simplices: &[Vec<GroupElement>],
    cap: u32,
    budget: usize,
) -> Result<QuotientImage> {
    let mut out = Vec::new();
    let mut scale = 0u32;
    for simplex in simplices {
        let keys: Vec<CosetKey> = simplex.iter().map(|g| pres.coset_key(g)).collect();
        let mut collapsed = keys.clone();
        collapsed.sort();
        collapsed.dedup();
        for i in 0..collapsed.len() {
            for j in (i + 1)..collapsed.len() {
                let d = quotient_distance(pres, &collapsed[i], &collapsed[j], cap, budget)?
                    .ok_or(Error::BudgetExceeded {
                        used: cap as usize,
                        limit: cap as usize,
                        unit: "quotient distance cap",
                    })?;
                scale = scale.max(d);
            }
        }
        out.push(ImageSimplex {
            degenerate: collapsed.len() < keys.len(),
            keys,
            collapsed,
        });
    }
    Ok(QuotientImage {
        simplices: out,
        scale,
    })
}

/// Quotient-graph distance between two cosets, if at most `cap`.
pub fn quotient_distance(
    pres: &FibredPresentation,
    a: &CosetKey,
    b: &CosetKey,
    cap: u32,
    budget: usize,
) -> Result<Option<u32>> {
    if a == b {
        return Ok(Some(0));
    }
    let map = truncated_bfs(a.clone(), cap, budget, |k| {
        pres.quotient_neighbors(k)
            .into_iter()
            .map(|(nb, _)| nb)
            .collect()
    })?;
    Ok(map.get(b).copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snapshot::DEFAULT_VERTEX_BUDGET;

    const BUDGET: usize = DEFAULT_VERTEX_BUDGET;

    fn unit_square() -> Snapshot {
        Snapshot::from_l1_points(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
    }

    #[test]
    fn square_rips_counts() {
        let s = unit_square();
        let c1 = rips(&s, 1, BUDGET).unwrap();
        assert_eq!(c1.edges.len(), 4);
        assert_eq!(c1.triangles.len(), 0);
        let c2 = rips(&s, 2, BUDGET).unwrap();
        assert_eq!(c2.edges.len(), 6);
        assert_eq!(c2.triangles.len(), 4);
    }

    #[test]
    fn square_betti() {
        let s = unit_square();
        assert_eq!(betti_z2(&rips(&s, 1, BUDGET).unwrap()), (1, 1));
        assert_eq!(betti_z2(&rips(&s, 2, BUDGET).unwrap()), (1, 0));
    }

    #[test]
    fn single_vertex_complex() {
        let s = Snapshot::from_l1_points(vec![vec![0]]);
        let c = rips(&s, 3, BUDGET).unwrap();
        assert_eq!(betti_z2(&c), (1, 0));
        assert!(c.edges.is_empty());
    }

    #[test]
    fn d1_d2_compose_to_zero() {
        let g = FibredPresentation::preset("z^2").unwrap();
        let snap = g.ball(2, BUDGET).unwrap();
        let c = rips(&snap, 2, BUDGET).unwrap();
        // Boundary of every triangle boundary is empty over GF(2).
        for t in &c.triangles {
            let edge_ids = c.triangle_boundary(t);
            let mut vertex_sum: Vec<u32> = Vec::new();
            for eid in edge_ids {
                let (a, b) = c.edges[eid as usize];
                vertex_sum = gf2::xor_columns(&vertex_sum, &[a.min(b), a.max(b)]);
            }
            assert!(vertex_sum.is_empty());
        }
    }

    #[test]
    fn b0_equals_component_count_at_scale_one() {
        let g = FibredPresentation::preset("bs(1,3)").unwrap();
        let snap = g.quotient_ball(3, BUDGET).unwrap();
        let c = rips(&snap, 1, BUDGET).unwrap();
        let (b0, b1) = betti_z2(&c);
        assert_eq!(b0, 1);
        assert_eq!(b1, 0); // tree certificate
    }

    #[test]
    fn relative_acyclicity_square_fails_into_itself() {
        let s = unit_square();
        let r = relative_acyclicity((&s, 1), (&s, 1), BUDGET).unwrap();
        assert!(!r.holds);
        let witness = r.witness.unwrap();
        assert_eq!(witness.len(), 4); // the 4-cycle
    }

    #[test]
    fn relative_acyclicity_square_fills_at_two() {
        let s = unit_square();
        let r = relative_acyclicity((&s, 1), (&s, 2), BUDGET).unwrap();
        assert!(r.holds);
        assert_eq!(r.inner_cycles, 1);
    }

    #[test]
    fn relative_acyclicity_plane() {
        let g = FibredPresentation::preset("z^2").unwrap();
        let inner = g.ball(3, BUDGET).unwrap();
        let outer = g.ball(5, BUDGET).unwrap();
        let r = relative_acyclicity((&inner, 1), (&outer, 2), BUDGET).unwrap();
        assert!(r.holds);
        assert!(r.inner_cycles > 0);
        // Monotone filling: a coarser outer scale still fills.
        let r = relative_acyclicity((&inner, 1), (&outer, 3), BUDGET).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn tree_quotients_are_acyclic() {
        for preset in ["bs(1,3)", "f2xZ", "bs(1,1)"] {
            let g = FibredPresentation::preset(preset).unwrap();
            let snap = g.quotient_ball(4, BUDGET).unwrap();
            let r = relative_acyclicity((&snap, 1), (&snap, 1), BUDGET).unwrap();
            assert!(r.holds, "{preset}");
            assert_eq!(r.inner_cycles, 0, "{preset}");
        }
    }

    #[test]
    fn ends_bs13() {
        let g = FibredPresentation::preset("bs(1,3)").unwrap();
        let snap = g.quotient_ball(5, BUDGET).unwrap();
        assert_eq!(ends_at_scale(&snap, 1).deep_count, 4);
        assert_eq!(ends_at_scale(&snap, 2).deep_count, 12);
        assert_eq!(ends_at_scale(&snap, 3).deep_count, 36);
    }

    #[test]
    fn ends_line() {
        let g = FibredPresentation::preset("bs(1,1)").unwrap();
        let snap = g.quotient_ball(6, BUDGET).unwrap();
        assert_eq!(snap.len(), 13);
        for r in 1..=3 {
            assert_eq!(ends_at_scale(&snap, r).deep_count, 2, "r={r}");
        }
    }

    #[test]
    fn ends_point() {
        let g = FibredPresentation::preset("z^2").unwrap();
        let snap = g.quotient_ball(6, BUDGET).unwrap();
        for r in 0..=3 {
            assert_eq!(ends_at_scale(&snap, r).deep_count, 0, "r={r}");
        }
    }

    #[test]
    fn ccc_bs13_and_f2xz() {
        for preset in ["bs(1,3)", "f2xZ"] {
            let g = FibredPresentation::preset(preset).unwrap();
            let report = ccc_correspondence(&g, 7, 1, 6, BUDGET).unwrap();
            assert_eq!(report.total_deep, 4, "{preset}");
            assert_eq!(report.quotient_deep, 4, "{preset}");
            assert!(report.matched, "{preset}");
        }
    }

    #[test]
    fn ccc_no_letter_group() {
        let g = FibredPresentation::preset("z^2").unwrap();
        let report = ccc_correspondence(&g, 4, 1, 4, BUDGET).unwrap();
        assert_eq!(report.total_deep, 0);
        assert_eq!(report.quotient_deep, 0);
        assert!(report.matched);
    }

    #[test]
    fn simplicial_image_examples() {
        let g = FibredPresentation::preset("bs(1,3)").unwrap();
        let e = g.identity();
        let t = g.parse_word("t").unwrap();
        let x = g.parse_word("x1").unwrap();
        // Edge [e, t] maps to the quotient edge [H, tH] at scale 1.
        let img = quotient_simplicial_image(&g, &[vec![e.clone(), t.clone()]], 8, BUDGET).unwrap();
        assert_eq!(img.scale, 1);
        assert!(!img.simplices[0].degenerate);
        // 2-simplex [e, x1, t]: repeated vertex collapses.
        let img = quotient_simplicial_image(&g, &[vec![e.clone(), x, t]], 8, BUDGET).unwrap();
        assert!(img.simplices[0].degenerate);
        assert_eq!(img.simplices[0].collapsed.len(), 2);
        assert_eq!(img.scale, 1);
        // All vertices in H: fully degenerate.
        let v5 = g.parse_word("x1^5").unwrap();
        let img = quotient_simplicial_image(&g, &[vec![e, v5]], 8, BUDGET).unwrap();
        assert_eq!(img.simplices[0].collapsed.len(), 1);
        assert_eq!(img.scale, 0);
    }

    #[test]
    fn triplet_export_shape() {
        let s = unit_square();
        let c = rips(&s, 2, BUDGET).unwrap();
        let d2 = c.boundary_triplets(2);
        let mut lines = d2.lines();
        assert_eq!(lines.next().unwrap(), "6 4 12");
        assert_eq!(d2.lines().count(), 13);
    }
}
