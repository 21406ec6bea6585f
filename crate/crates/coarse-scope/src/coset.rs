//! The quotient space G/H for the fibre H = Z^n: canonical coset names,
//! the rough Cayley graph, Hausdorff-distance lower bounds between cosets,
//! and the approximate closest-point projection.
//!
//! The quotient metric implemented everywhere is the rough-Cayley-graph path
//! metric (edges `(gH, g s H)` over the fixed generating set); the Hausdorff
//! metric on cosets is exposed only through ball-truncated lower bounds,
//! reported with an explicit stabilization radius and never claimed exact.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::element::{GroupElement, Sign, Syllable};
use crate::error::{Error, Result};
use crate::presentation::FibredPresentation;
use crate::snapshot::{truncated_bfs, Snapshot, SnapshotKind, SnapshotSource, VertexKey};

/// Canonical name of a left Z^n-coset: the tail-stripped normal form.
/// `coset_key(g·v) == coset_key(g)` for every fibre vector `v`, and distinct
/// keys name distinct cosets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CosetKey {
    pub(crate) stamp: u64,
    pub(crate) syllables: Vec<Syllable>,
}

impl CosetKey {
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_base(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Printable canonical name, e.g. `H`, `t H`, `x1 t H`.
    pub fn coset_string(&self, pres: &FibredPresentation) -> String {
        let rep = pres.coset_representative(self);
        if rep.is_identity() {
            "H".to_string()
        } else {
            format!("{} H", pres.element_string(&rep))
        }
    }
}

/// One-sided Hausdorff estimate: a number, or `Unknown` when the probe cap
/// was exhausted before a coset member was found. Never silently truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Value(u32),
    Unknown,
}

impl Bound {
    pub fn value(self) -> Option<u32> {
        match self {
            Bound::Value(v) => Some(v),
            Bound::Unknown => None,
        }
    }

    fn max(self, other: Bound) -> Bound {
        match (self, other) {
            (Bound::Value(a), Bound::Value(b)) => Bound::Value(a.max(b)),
            _ => Bound::Unknown,
        }
    }
}

/// Ball-truncated lower bounds on the Hausdorff distance between `H` and a
/// coset `gH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HausdorffBounds {
    /// sup over fibre points in the sample ball of d(point, gH).
    pub fibre_to_coset: Bound,
    /// sup over coset members in the sample ball of d(point, H).
    pub coset_to_fibre: Bound,
    /// Max of the two one-sided bounds.
    pub max: Bound,
    /// Smallest sample radius after which `max` stopped changing within this
    /// run. Empirical; no claim that larger windows cannot move it.
    pub stabilized_at: Option<u32>,
    pub sample_radius: u32,
}

impl FibredPresentation {
    /// Canonical coset name: drop the tail of the normal form.
    pub fn coset_key(&self, g: &GroupElement) -> CosetKey {
        CosetKey {
            stamp: g.stamp,
            syllables: g.syllables.clone(),
        }
    }

    /// The tail-zero representative of a coset.
    pub fn coset_representative(&self, key: &CosetKey) -> GroupElement {
        GroupElement {
            stamp: key.stamp,
            syllables: key.syllables.clone(),
            tail: vec![BigInt::zero(); self.rank()],
        }
    }

    pub fn base_coset(&self) -> CosetKey {
        self.coset_key(&self.identity())
    }

    /// Neighbors of a coset in the rough Cayley graph, with the generator
    /// label that realizes each edge. For each letter, the `t^{+1}` edges
    /// run over a transversal of Z^n/C and the `t^{-1}` edges over a
    /// transversal of Z^n/B; duplicates are merged and vector generators
    /// contribute no edges (they fix the coset).
    pub fn quotient_neighbors_labeled(&self, key: &CosetKey) -> Vec<(CosetKey, String)> {
        let rep = self.coset_representative(key);
        let mut out: Vec<(CosetKey, String)> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, letter) in self.letters().iter().enumerate() {
            for sign in [Sign::Plus, Sign::Minus] {
                let transversal = match sign {
                    Sign::Plus => letter.image_transversal(),
                    Sign::Minus => letter.source_transversal(),
                };
                for r in transversal {
                    let mut e = rep.clone();
                    self.push_vector(&mut e, r);
                    self.push_letter(&mut e, i, sign);
                    let nb = self.coset_key(&e);
                    if seen.insert(nb.clone()) {
                        let suffix = match sign {
                            Sign::Plus => letter.name.clone(),
                            Sign::Minus => format!("{}^-1", letter.name),
                        };
                        let label = if r.iter().all(|c| c.is_zero()) {
                            suffix
                        } else {
                            let v = self.vector_element(r.clone());
                            format!("{} {}", self.element_string(&v), suffix)
                        };
                        out.push((nb, label));
                    }
                }
            }
        }
        out
    }

    pub fn quotient_neighbors(&self, key: &CosetKey) -> Vec<(CosetKey, String)> {
        self.quotient_neighbors_labeled(key)
    }

    /// BFS ball in the rough Cayley graph from the base coset `H`, with
    /// exact quotient-graph distances.
    pub fn quotient_ball(&self, radius: u32, budget: usize) -> Result<Snapshot> {
        let map = truncated_bfs(self.base_coset(), radius, budget, |k| {
            self.quotient_neighbors(k)
                .into_iter()
                .map(|(nb, _)| nb)
                .collect()
        })?;
        let map: HashMap<VertexKey, u32> = map
            .into_iter()
            .map(|(k, d)| (VertexKey::Coset(k), d))
            .collect();
        let pres = self.clone();
        Ok(Snapshot::assemble(
            SnapshotKind::Quotient,
            SnapshotSource::Quotient(self.clone()),
            map,
            radius,
            move |key| {
                let VertexKey::Coset(k) = key else { unreachable!() };
                pres.quotient_neighbors(k)
                    .into_iter()
                    .map(|(nb, _)| VertexKey::Coset(nb))
                    .collect()
            },
        ))
    }

    /// Exact word distance from an element to the nearest member of a coset,
    /// if at most `cap`: a BFS that terminates on the first coset member.
    pub fn distance_to_coset(
        &self,
        from: &GroupElement,
        target: &CosetKey,
        cap: u32,
        budget: usize,
    ) -> Result<Bound> {
        if self.coset_key(from) == *target {
            return Ok(Bound::Value(0));
        }
        let gens = self.generators();
        let mut seen: HashMap<GroupElement, ()> = HashMap::new();
        seen.insert(from.clone(), ());
        let mut frontier = vec![from.clone()];
        let mut level = 0u32;
        while level < cap && !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for v in &frontier {
                for gen in &gens {
                    let w = self.apply_generator(v, gen);
                    if seen.contains_key(&w) {
                        continue;
                    }
                    if self.coset_key(&w) == *target {
                        return Ok(Bound::Value(level));
                    }
                    if seen.len() >= budget {
                        return Err(Error::BudgetExceeded {
                            used: seen.len(),
                            limit: budget,
                            unit: "vertices",
                        });
                    }
                    seen.insert(w.clone(), ());
                    next.push(w);
                }
            }
            frontier = next;
        }
        Ok(Bound::Unknown)
    }

    /// Ball-truncated lower bounds on d_Haus(H, gH). Each point-to-coset
    /// distance is exact (capped BFS); the returned values are lower bounds
    /// for the true Hausdorff distance and are nondecreasing in the sample
    /// radius.
    pub fn coset_hausdorff_lb(
        &self,
        key: &CosetKey,
        sample_radius: u32,
        search_cap: u32,
        budget: usize,
    ) -> Result<HausdorffBounds> {
        let ball = self.ball(sample_radius, budget)?;
        let base = self.base_coset();
        // Collect (basepoint distance, point) for both sample sets.
        let mut fibre_points = Vec::new();
        let mut coset_points = Vec::new();
        for v in 0..ball.len() as u32 {
            let VertexKey::Element(e) = &ball.keys()[v as usize] else {
                unreachable!()
            };
            let k = self.coset_key(e);
            if k == base {
                fibre_points.push((ball.dist(v), e.clone()));
            }
            if k == *key {
                coset_points.push((ball.dist(v), e.clone()));
            }
        }
        use rayon::prelude::*;
        let fibre_d: Vec<(u32, Bound)> = fibre_points
            .par_iter()
            .map(|(r, e)| Ok((*r, self.distance_to_coset(e, key, search_cap, budget)?)))
            .collect::<Result<_>>()?;
        let coset_d: Vec<(u32, Bound)> = coset_points
            .par_iter()
            .map(|(r, e)| Ok((*r, self.distance_to_coset(e, &base, search_cap, budget)?)))
            .collect::<Result<_>>()?;

        let sup_at = |data: &[(u32, Bound)], radius: u32| -> Bound {
            data.iter()
                .filter(|(r, _)| *r <= radius)
                .map(|(_, b)| *b)
                .fold(Bound::Value(0), Bound::max)
        };
        let max_at = |radius: u32| sup_at(&fibre_d, radius).max(sup_at(&coset_d, radius));
        let final_max = max_at(sample_radius);
        let mut stabilized_at = None;
        for r in (0..=sample_radius).rev() {
            if max_at(r) == final_max {
                stabilized_at = Some(r);
            } else {
                break;
            }
        }
        Ok(HausdorffBounds {
            fibre_to_coset: sup_at(&fibre_d, sample_radius),
            coset_to_fibre: sup_at(&coset_d, sample_radius),
            max: final_max,
            stabilized_at,
            sample_radius,
        })
    }

    /// The approximate closest-point projection of a fibre vector into `gH`:
    /// `g · floor(A_g · v)` for the tail-zero representative `g`. The result
    /// lies in `gH` by construction.
    pub fn projection_approx(&self, key: &CosetKey, v: &[BigInt]) -> GroupElement {
        assert_eq!(v.len(), self.rank());
        let rep = self.coset_representative(key);
        let a = self
            .matrix_a(&rep)
            .expect("representative belongs to this presentation");
        let image = a.apply_floor(v);
        let mut out = rep;
        self.push_vector(&mut out, &image);
        out
    }

    /// Worst-case gap of the approximate projection against the true
    /// distance to the coset, over fibre vectors with |v|_1 <= range:
    /// max of d(v, projection(v)) - d(v, gH). `Ok(None)` when a probe
    /// exhausted its cap.
    pub fn projection_quality(
        &self,
        key: &CosetKey,
        range: u32,
        cap: u32,
        budget: usize,
    ) -> Result<Option<u32>> {
        let vectors = l1_ball_vectors(self.rank(), range);
        use rayon::prelude::*;
        let gaps: Vec<Option<u32>> = vectors
            .par_iter()
            .map(|v| -> Result<Option<u32>> {
                let point = self.vector_element(v.clone());
                let proj = self.projection_approx(key, v);
                let d_proj = match self.distance(&point, &proj, cap, budget)? {
                    crate::cayley::DistanceResult::Exact(d) => d,
                    crate::cayley::DistanceResult::ExceedsCap => return Ok(None),
                };
                let d_coset = match self.distance_to_coset(&point, key, cap, budget)? {
                    Bound::Value(d) => d,
                    Bound::Unknown => return Ok(None),
                };
                debug_assert!(d_proj >= d_coset);
                Ok(Some(d_proj - d_coset))
            })
            .collect::<Result<_>>()?;
        let mut best = 0u32;
        for g in gaps {
            match g {
                Some(v) => best = best.max(v),
                None => return Ok(None),
            }
        }
        Ok(Some(best))
    }
}

/// All integer vectors of l1 norm at most `range`, in lexicographic order.
pub fn l1_ball_vectors(rank: usize, range: u32) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut current = vec![BigInt::zero(); rank];
    fn rec(
        out: &mut Vec<Vec<BigInt>>,
        current: &mut Vec<BigInt>,
        pos: usize,
        remaining: i64,
        rank: usize,
    ) {
        if pos == rank {
            out.push(current.clone());
            return;
        }
        for c in -remaining..=remaining {
            current[pos] = BigInt::from(c);
            rec(out, current, pos + 1, remaining - c.abs(), rank);
        }
        current[pos] = BigInt::zero();
    }
    rec(&mut out, &mut current, 0, range as i64, rank);
    out.sort();
    out.dedup();
    out
}
