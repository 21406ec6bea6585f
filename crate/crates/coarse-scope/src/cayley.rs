//! Word-metric geometry of the group: ball enumeration, exact distances,
//! quasi-geodesic t-chains, and growth tables.
//!
//! The generating set is fixed to the standard basis vectors and the stable
//! letters, `S = {±e_1..±e_n} ∪ {t_i^{±1}}`; all reported values are exact
//! for this set.

use std::collections::HashMap;

use crate::element::{Generator, GroupElement};
use crate::error::{Error, Result};
use crate::presentation::FibredPresentation;
use crate::snapshot::{truncated_bfs, Snapshot, SnapshotKind, SnapshotSource, VertexKey};

/// Exact distance, or the marker that it exceeds the probe cap.
/// The marker is a value, not an error: callers routinely probe past
/// feasible radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceResult {
    Exact(u32),
    ExceedsCap,
}

impl DistanceResult {
    pub fn exact(self) -> Option<u32> {
        match self {
            DistanceResult::Exact(d) => Some(d),
            DistanceResult::ExceedsCap => None,
        }
    }
}

impl FibredPresentation {
    /// BFS ball of radius `radius` around the identity. Distances are exact
    /// word lengths; vertices are deduplicated by canonical form.
    pub fn ball(&self, radius: u32, budget: usize) -> Result<Snapshot> {
        self.ball_with_generators(radius, budget, &self.generators())
    }

    pub(crate) fn ball_with_generators(
        &self,
        radius: u32,
        budget: usize,
        gens: &[Generator],
    ) -> Result<Snapshot> {
        let map = truncated_bfs(self.identity(), radius, budget, |e| {
            gens.iter().map(|g| self.apply_generator(e, g)).collect()
        })?;
        let map: HashMap<VertexKey, u32> = map
            .into_iter()
            .map(|(e, d)| (VertexKey::Element(e), d))
            .collect();
        let pres = self.clone();
        let gens = gens.to_vec();
        Ok(Snapshot::assemble(
            SnapshotKind::Group,
            SnapshotSource::Group(self.clone()),
            map,
            radius,
            move |key| {
                let VertexKey::Element(e) = key else {
                    unreachable!()
                };
                gens.iter()
                    .map(|g| VertexKey::Element(pres.apply_generator(e, g)))
                    .collect()
            },
        ))
    }

    /// Sphere sizes 0..=radius; their sum is the ball size.
    pub fn growth(&self, radius: u32, budget: usize) -> Result<Vec<usize>> {
        Ok(self.ball(radius, budget)?.sphere_sizes())
    }

    /// Exact word distance between two elements, if at most `cap`.
    /// Left-invariance reduces to a search from the identity to `g^{-1}h`;
    /// the search itself is a meet-in-the-middle bidirectional BFS.
    pub fn distance(
        &self,
        g: &GroupElement,
        h: &GroupElement,
        cap: u32,
        budget: usize,
    ) -> Result<DistanceResult> {
        Ok(self.bidirectional(g, h, cap, budget)?.0)
    }

    /// A t-chain from `g` to `h`: points `x_0 = g, ..., x_m = h` with
    /// `d(x_{j-1}, x_j) <= t_step` and `m <= d(g, h)`, extracted from a
    /// discrete geodesic and then coarsened. `None` when the distance
    /// exceeds `cap`.
    pub fn t_chain(
        &self,
        g: &GroupElement,
        h: &GroupElement,
        t_step: u32,
        cap: u32,
        budget: usize,
    ) -> Result<Option<Vec<GroupElement>>> {
        assert!(t_step >= 1, "t_step must be at least 1");
        let (result, geodesic) = self.bidirectional(g, h, cap, budget)?;
        match result {
            DistanceResult::ExceedsCap => Ok(None),
            DistanceResult::Exact(d) => {
                let path = geodesic.expect("geodesic accompanies an exact distance");
                debug_assert_eq!(path.len() as u32, d + 1);
                let mut chain = Vec::new();
                let mut i = 0usize;
                while i < path.len() {
                    chain.push(path[i].clone());
                    i += t_step as usize;
                }
                if *chain.last().unwrap() != *path.last().unwrap() {
                    chain.push(path.last().unwrap().clone());
                }
                Ok(Some(chain))
            }
        }
    }

    /// Bidirectional BFS from the identity to `g^{-1} h`, returning the
    /// distance marker and, when exact, a full discrete geodesic from `g`
    /// to `h` (already translated back by `g`).
    fn bidirectional(
        &self,
        g: &GroupElement,
        h: &GroupElement,
        cap: u32,
        budget: usize,
    ) -> Result<(DistanceResult, Option<Vec<GroupElement>>)> {
        let target = self.multiply(&self.invert(g)?, h)?;
        if target.is_identity() {
            return Ok((DistanceResult::Exact(0), Some(vec![g.clone()])));
        }
        let gens = self.generators();
        // parent: element -> predecessor on its own side.
        let mut fwd: HashMap<GroupElement, Option<GroupElement>> = HashMap::new();
        let mut bwd: HashMap<GroupElement, Option<GroupElement>> = HashMap::new();
        let mut fdist: HashMap<GroupElement, u32> = HashMap::new();
        let mut bdist: HashMap<GroupElement, u32> = HashMap::new();
        fwd.insert(self.identity(), None);
        bwd.insert(target.clone(), None);
        fdist.insert(self.identity(), 0);
        bdist.insert(target.clone(), 0);
        let mut ffront = vec![self.identity()];
        let mut bfront = vec![target.clone()];
        let (mut lf, mut lb) = (0u32, 0u32);
        let mut best: Option<(u32, GroupElement)> = None;

        while (best.is_none() || lf + lb < best.as_ref().unwrap().0) && lf + lb < cap {
            let expand_forward = if ffront.is_empty() {
                false
            } else if bfront.is_empty() {
                true
            } else {
                ffront.len() <= bfront.len()
            };
            if ffront.is_empty() && bfront.is_empty() {
                break;
            }
            let (front, level, own_dist, own_parent, other_dist) = if expand_forward {
                (&mut ffront, &mut lf, &mut fdist, &mut fwd, &bdist)
            } else {
                (&mut bfront, &mut lb, &mut bdist, &mut bwd, &fdist)
            };
            *level += 1;
            let mut next = Vec::new();
            for v in front.iter() {
                for gen in &gens {
                    let w = self.apply_generator(v, gen);
                    if own_dist.contains_key(&w) {
                        continue;
                    }
                    if own_dist.len() >= budget {
                        return Err(Error::BudgetExceeded {
                            used: own_dist.len(),
                            limit: budget,
                            unit: "vertices",
                        });
                    }
                    own_dist.insert(w.clone(), *level);
                    own_parent.insert(w.clone(), Some(v.clone()));
                    if let Some(&od) = other_dist.get(&w) {
                        let total = *level + od;
                        if best.as_ref().map_or(true, |(b, _)| total < *b) {
                            best = Some((total, w.clone()));
                        }
                    }
                    next.push(w);
                }
            }
            *front = next;
        }

        match best {
            Some((d, meet)) if d <= cap => {
                // Forward half: identity -> meet.
                let mut path = Vec::new();
                let mut cur = Some(meet.clone());
                while let Some(v) = cur {
                    cur = fwd[&v].clone();
                    path.push(v);
                }
                path.reverse();
                // Backward half: meet -> target.
                let mut cur = bwd[&meet].clone();
                while let Some(v) = cur {
                    cur = bwd[&v].clone();
                    path.push(v);
                }
                let translated: Result<Vec<GroupElement>> =
                    path.iter().map(|p| self.multiply(g, p)).collect();
                Ok((DistanceResult::Exact(d), Some(translated?)))
            }
            _ => Ok((DistanceResult::ExceedsCap, None)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snapshot::DEFAULT_VERTEX_BUDGET;

    const BUDGET: usize = DEFAULT_VERTEX_BUDGET;

    #[test]
    fn line_ball() {
        let g = FibredPresentation::preset("z").unwrap();
        let snap = g.ball(3, BUDGET).unwrap();
        assert_eq!(snap.len(), 7);
        assert_eq!(snap.sphere_sizes(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn plane_ball_counts() {
        // l1 ball in Z^2 has 2r^2 + 2r + 1 points.
        let g = FibredPresentation::preset("z^2").unwrap();
        for r in 0..5u32 {
            let snap = g.ball(r, BUDGET).unwrap();
            let expect = (2 * r * r + 2 * r + 1) as usize;
            assert_eq!(snap.len(), expect, "radius {r}");
        }
        let snap = g.ball(4, BUDGET).unwrap();
        let sizes = snap.sphere_sizes();
        for r in 1..=4usize {
            assert_eq!(sizes[r], 4 * r, "sphere {r}");
        }
    }

    #[test]
    fn bs13_small_ball() {
        let g = FibredPresentation::preset("bs(1,3)").unwrap();
        let snap = g.ball(1, BUDGET).unwrap();
        assert_eq!(snap.len(), 5);
    }

    #[test]
    fn budget_is_enforced() {
        let g = FibredPresentation::preset("z^2").unwrap();
        assert!(matches!(
            g.ball(40, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn distances_bs13() {
        let g = FibredPresentation::preset("bs(1,3)").unwrap();
        let e = g.identity();
        let t = g.parse_word("t").unwrap();
        assert_eq!(
            g.distance(&e, &t, 5, BUDGET).unwrap(),
            DistanceResult::Exact(1)
        );
        let a3 = g.parse_word("x1^3").unwrap();
        assert_eq!(
            g.distance(&e, &a3, 10, BUDGET).unwrap(),
            DistanceResult::Exact(3)
        );
        let a9 = g.parse_word("x1^9").unwrap();
        assert_eq!(
            g.distance(&e, &a9, 10, BUDGET).unwrap(),
            DistanceResult::Exact(5)
        );
    }

    #[test]
    fn distance_exceeds_cap() {
        let g = FibredPresentation::preset("z").unwrap();
        let e = g.identity();
        let far = g.parse_word("x1^40").unwrap();
        assert_eq!(
            g.distance(&e, &far, 10, BUDGET).unwrap(),
            DistanceResult::ExceedsCap
        );
    }

    #[test]
    fn bidirectional_matches_ball_distances() {
        // Every ball vertex's recorded distance is reproduced by the
        // bidirectional search (BFS exactness).
        for preset in ["bs(1,3)", "f2xZ", "leary-minasyan"] {
            let g = FibredPresentation::preset(preset).unwrap();
            let snap = g.ball(3, BUDGET).unwrap();
            let e = g.identity();
            for v in 0..snap.len() as u32 {
                let VertexKey::Element(el) = &snap.keys()[v as usize] else {
                    unreachable!()
                };
                assert_eq!(
                    g.distance(&e, el, 3, BUDGET).unwrap(),
                    DistanceResult::Exact(snap.dist(v)),
                    "{preset}: vertex {}",
                    snap.label(v)
                );
            }
        }
    }

    #[test]
    fn t_chain_on_plane() {
        let g = FibredPresentation::preset("z^2").unwrap();
        let a = g.identity();
        let b = g.parse_word("x1^4").unwrap();
        let chain = g.t_chain(&a, &b, 2, 10, BUDGET).unwrap().unwrap();
        assert_eq!(chain.len(), 3); // length 2 chain: x_0, x_1, x_2
        assert_eq!(chain[0], a);
        assert_eq!(*chain.last().unwrap(), b);
        for pair in chain.windows(2) {
            let d = g.distance(&pair[0], &pair[1], 4, BUDGET).unwrap();
            assert!(matches!(d, DistanceResult::Exact(x) if x <= 2));
        }
    }

    #[test]
    fn t_chain_trivial_and_geodesic() {
        let g = FibredPresentation::preset("bs(1,3)").unwrap();
        let t = g.parse_word("t").unwrap();
        let chain = g.t_chain(&t, &t, 1, 5, BUDGET).unwrap().unwrap();
        assert_eq!(chain, vec![t]);

        let e = g.identity();
        let a9 = g.parse_word("x1^9").unwrap();
        let chain = g.t_chain(&e, &a9, 1, 10, BUDGET).unwrap().unwrap();
        assert_eq!(chain.len(), 6); // discrete geodesic of length 5
        assert_eq!(chain[0], e);
        assert_eq!(*chain.last().unwrap(), a9);
        for pair in chain.windows(2) {
            let d = g.distance(&pair[0], &pair[1], 2, BUDGET).unwrap();
            assert_eq!(d, DistanceResult::Exact(1));
        }
    }

    #[test]
    fn edges_connect_adjacent_levels() {
        let g = FibredPresentation::preset("bs(1,2)").unwrap();
        let snap = g.ball(4, BUDGET).unwrap();
        for &(a, b) in snap.edges() {
            let diff = snap.dist(a).abs_diff(snap.dist(b));
            assert!(diff <= 1);
        }
    }

    #[test]
    fn enumeration_order_independent_of_generator_order() {
        let g = FibredPresentation::preset("bs(1,3)").unwrap();
        let gens = g.generators();
        let mut shuffled = gens.clone();
        shuffled.reverse();
        let a = g.ball_with_generators(4, BUDGET, &gens).unwrap();
        let b = g.ball_with_generators(4, BUDGET, &shuffled).unwrap();
        assert_eq!(a.keys(), b.keys());
        assert_eq!(a.dists(), b.dists());
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn bs12_growth_is_superlinear() {
        let g = FibredPresentation::preset("bs(1,2)").unwrap();
        let sizes = g.growth(8, BUDGET).unwrap();
        for w in sizes.windows(2).skip(1) {
            assert!(w[1] > w[0], "sphere sizes should strictly increase");
        }
        // Super-linear by radius 8: the last sphere dwarfs a linear trend.
        assert!(sizes[8] > 4 * 8);
    }
}
