//! Height and fibre-distortion invariants.
//!
//! Fibre distortion is computed from the closed formula for free-abelian
//! fibres, `F(gH) = |log ||A_g||_1|`, with the norm kept as an exact
//! rational and floats appearing only for display. Because the lower
//! distortion constant of the projection may be governed by `||A_g^{-1}||_1`
//! rather than `||A_g||_1` for non-symmetric matrices, the symmetrized value
//! `log max(||A_g||_1, ||A_g^{-1}||_1)` is always reported alongside.
//!
//! Profiles over quotient balls never enumerate cosets: the quotient graph
//! of this family is the Bass-Serre tree, so per-radius statistics follow
//! exactly from a dynamic program over (A-matrix, incoming-edge) classes
//! with multiplicities. A test equates the DP against direct enumeration at
//! small radius.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coset::CosetKey;
use crate::element::{GroupElement, Sign, Syllable};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::presentation::FibredPresentation;

/// Natural log of a positive big integer, stable far past f64 range.
fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 52;
    let mantissa: BigInt = x >> shift;
    mantissa.to_f64().unwrap().ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    assert!(x.is_positive());
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Exact height datum: the positive rational |p/q| with its display log.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightValue {
    pub ratio: BigRational,
    pub log_value: f64,
}

/// Exact distortion datum of a coset.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionValue {
    /// ||A_g||_1, exact.
    pub norm: BigRational,
    /// |log norm|.
    pub f: f64,
    /// max(||A_g||_1, ||A_g^{-1}||_1), exact; at least 1.
    pub sym_norm: BigRational,
    /// log sym_norm, nonnegative.
    pub f_sym: f64,
}

impl DistortionValue {
    fn from_matrix(a: &RationalMatrix) -> Self {
        let norm = a.one_norm();
        let inv_norm = a.inverse().one_norm();
        let sym_norm = if inv_norm > norm {
            inv_norm
        } else {
            norm.clone()
        };
        Self {
            f: ln_rational(&norm).abs(),
            f_sym: ln_rational(&sym_norm),
            norm,
            sym_norm,
        }
    }

    /// Exact comparison key: F(a) < F(b) iff distance of the norm from 1 is
    /// smaller multiplicatively, i.e. max(norm, 1/norm) compares.
    fn deviation(&self) -> BigRational {
        let recip = self.norm.recip();
        if recip > self.norm {
            recip
        } else {
            self.norm.clone()
        }
    }
}

impl FibredPresentation {
    /// Height of an element of a rank-1 presentation: |p/q| for
    /// `a^q = g a^p g^{-1}`, which is the absolute value of the single
    /// entry of `A_g`. A homomorphism to the positive rationals.
    pub fn height(&self, g: &GroupElement) -> Result<HeightValue> {
        if self.rank() != 1 {
            return Err(Error::RankNotOne { rank: self.rank() });
        }
        let a = self.matrix_a(g)?;
        let ratio = a.entry(0, 0).abs();
        Ok(HeightValue {
            log_value: ln_rational(&ratio),
            ratio,
        })
    }

    /// Fibre distortion of a coset, from the syllables alone.
    pub fn fibre_distortion(&self, key: &CosetKey) -> DistortionValue {
        let a = self.matrix_a_of_syllables(key.syllables().iter().map(|s| (s.letter, s.sign)));
        DistortionValue::from_matrix(&a)
    }

    /// Per-radius distortion profile over the quotient ball of radius
    /// `radius`, with verdict and ball-bounded identity-kernel scan.
    pub fn distortion_profile(&self, radius: u32, budget: usize) -> Result<DistortionProfile> {
        let mut dp = TreeDp::root(self);
        let mut rows = Vec::new();
        let mut ball_max: Option<(DistortionValue, CosetKey)> = None;
        let mut ball_max_per_radius = Vec::new();
        let mut all_unit_norm = true;
        let mut aiq: Option<(u32, CosetKey)> = None;
        let mut classes_scanned = 0usize;

        for r in 0..=radius {
            if r > 0 {
                dp.step(self, budget)?;
            }
            classes_scanned += dp.states.len();
            let row = dp.sphere_row(self, r);
            if let Some(state_max) = dp.max_state(self) {
                let dv = DistortionValue::from_matrix(&state_max.0);
                let replace = ball_max
                    .as_ref()
                    .map_or(true, |(cur, _)| dv.deviation() > cur.deviation());
                if replace {
                    ball_max = Some((dv, state_max.1));
                }
            }
            if r > 0 && aiq.is_none() {
                if let Some(key) = dp.identity_state_witness(self) {
                    aiq = Some((r, key));
                }
            }
            // The ball is closed under inversion, so checking each state's
            // own norm suffices for the zero verdict.
            if dp.states.values().any(|s| !s.matrix.one_norm().is_one()) {
                all_unit_norm = false;
            }
            ball_max_per_radius.push(
                ball_max
                    .as_ref()
                    .map(|(dv, _)| dv.f)
                    .unwrap_or(0.0),
            );
            rows.push(row);
        }

        let verdict = Verdict::classify(radius, all_unit_norm, &ball_max_per_radius);
        Ok(DistortionProfile {
            radius,
            rows,
            verdict,
            ball_max: ball_max.map(|(dv, key)| (dv, key)),
            aiq_identity_kernel: aiq,
            classes_scanned,
        })
    }

    /// Evidence for quasi-isometry stability of F under left translation by
    /// `k`: observed = max over the quotient ball of |F(k gH) - F(gH)|,
    /// against the submultiplicativity bound
    /// `max(|log||A_k||_1|, |log||A_k^{-1}||_1|) + |log(||A_k||_1 ||A_k^{-1}||_1)|`.
    pub fn qi_stability_check(
        &self,
        k: &GroupElement,
        radius: u32,
        budget: usize,
    ) -> Result<QiStability> {
        let a_k = self.matrix_a(k)?;
        let n1 = a_k.one_norm();
        let n2 = a_k.inverse().one_norm();
        let bound = ln_rational(&n1).abs().max(ln_rational(&n2).abs())
            + ln_rational(&(&n1 * &n2)).abs();

        let mut dp = TreeDp::root(self);
        let mut observed: f64 = 0.0;
        for r in 0..=radius {
            if r > 0 {
                dp.step(self, budget)?;
            }
            for state in dp.states.values() {
                let f_here = ln_rational(&state.matrix.one_norm()).abs();
                let translated = state.matrix.mul(&a_k);
                let f_there = ln_rational(&translated.one_norm()).abs();
                observed = observed.max((f_there - f_here).abs());
            }
        }
        debug_assert!(observed <= bound + 1e-9);
        Ok(QiStability {
            observed,
            bound,
            norm_k: n1,
            norm_k_inv: n2,
        })
    }
}

#[derive(Debug, Clone)]
pub struct QiStability {
    pub observed: f64,
    pub bound: f64,
    pub norm_k: BigRational,
    pub norm_k_inv: BigRational,
}

/// Scale-qualified verdict over the enumerated ball; never a claim about
/// the infinite group.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    ZeroAtScale,
    BoundedAtScale { bound: f64 },
    GrowingAtScale { slope: f64 },
}

impl Verdict {
    fn classify(radius: u32, all_unit_norm: bool, ball_max_per_radius: &[f64]) -> Self {
        if all_unit_norm {
            return Verdict::ZeroAtScale;
        }
        let last = *ball_max_per_radius.last().unwrap_or(&0.0);
        if radius < 2 {
            return Verdict::BoundedAtScale { bound: last };
        }
        let half = (radius / 2) as usize;
        let at_half = ball_max_per_radius[half];
        let growth = last - at_half;
        if growth > 0.1 * last + 1e-12 {
            Verdict::GrowingAtScale {
                slope: growth / (radius as f64 - half as f64),
            }
        } else {
            Verdict::BoundedAtScale { bound: last }
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ZeroAtScale => "ZeroAtScale",
            Verdict::BoundedAtScale { .. } => "BoundedAtScale",
            Verdict::GrowingAtScale { .. } => "GrowingAtScale",
        }
    }
}

/// F-histogram bucket width.
pub const HISTOGRAM_BUCKET_WIDTH: f64 = 0.5;
/// Threshold for the properness diagnostic count.
pub const F_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct ProfileRow {
    pub radius: u32,
    pub sphere_size: BigUint,
    /// Max-F coset on the sphere: exact norm plus witness key.
    pub max: Option<(DistortionValue, CosetKey)>,
    pub min: Option<(DistortionValue, CosetKey)>,
    /// Histogram over F in buckets of width 0.5: (bucket index, count).
    pub histogram: Vec<(u32, BigUint)>,
    /// Number of sphere cosets with F <= F_THRESHOLD.
    pub below_threshold: BigUint,
}

#[derive(Debug, Clone)]
pub struct DistortionProfile {
    pub radius: u32,
    pub rows: Vec<ProfileRow>,
    pub verdict: Verdict,
    /// Max-F over the whole ball with witness.
    pub ball_max: Option<(DistortionValue, CosetKey)>,
    /// First nontrivial coset in the ball whose matrix is the identity, if
    /// any: the ball-bounded kernel search of the almost-injective-quotient
    /// diagnostic.
    pub aiq_identity_kernel: Option<(u32, CosetKey)>,
    pub classes_scanned: usize,
}

/// One DP class: all cosets at the current radius sharing the commensuration
/// matrix and the incoming edge type.
#[derive(Debug, Clone)]
struct DpState {
    matrix: RationalMatrix,
    count: BigUint,
    /// Lexicographically first concrete coset realizing the class.
    witness: Vec<Syllable>,
}

/// Exact multiplicity DP over the quotient tree. States are keyed by the
/// canonical matrix string and incoming edge type; counts are exact.
struct TreeDp {
    states: BTreeMap<(String, Option<(usize, Sign)>), DpState>,
}

impl TreeDp {
    fn root(pres: &FibredPresentation) -> Self {
        let mut states = BTreeMap::new();
        states.insert(
            (RationalMatrix::identity(pres.rank()).canonical_string(), None),
            DpState {
                matrix: RationalMatrix::identity(pres.rank()),
                count: BigUint::one(),
                witness: Vec::new(),
            },
        );
        Self { states }
    }

    /// Advances one tree level: children per letter and sign, minus the
    /// backtracking slot toward the parent.
    fn step(&mut self, pres: &FibredPresentation, budget: usize) -> Result<()> {
        let mut next: BTreeMap<(String, Option<(usize, Sign)>), DpState> = BTreeMap::new();
        for ((_, incoming), state) in &self.states {
            for (j, letter) in pres.letters().iter().enumerate() {
                for sign in [Sign::Plus, Sign::Minus] {
                    let (index, transversal) = match sign {
                        Sign::Plus => (letter.image.index(), letter.image_transversal()),
                        Sign::Minus => (letter.source.index(), letter.source_transversal()),
                    };
                    let backtracks = *incoming == Some((j, sign.flip()));
                    let slots = if backtracks {
                        index - BigInt::one()
                    } else {
                        index.clone()
                    };
                    if slots.is_zero() {
                        continue;
                    }
                    let slots: BigUint = slots.to_biguint().expect("indices are positive");
                    let factor = match sign {
                        Sign::Plus => &letter.matrix_inv,
                        Sign::Minus => &letter.matrix,
                    };
                    let child_matrix = factor.mul(&state.matrix);
                    // Witness: first transversal slot that does not backtrack.
                    let residue = transversal
                        .iter()
                        .find(|r| !(backtracks && r.iter().all(|c| c.is_zero())))
                        .expect("at least one non-backtracking slot")
                        .clone();
                    let mut witness = state.witness.clone();
                    witness.push(Syllable {
                        letter: j,
                        sign,
                        residue,
                    });
                    let key = (child_matrix.canonical_string(), Some((j, sign)));
                    match next.get_mut(&key) {
                        Some(existing) => {
                            existing.count += &state.count * &slots;
                            if witness < existing.witness {
                                existing.witness = witness;
                            }
                        }
                        None => {
                            if next.len() >= budget {
                                return Err(Error::BudgetExceeded {
                                    used: next.len(),
                                    limit: budget,
                                    unit: "matrix classes",
                                });
                            }
                            next.insert(
                                key,
                                DpState {
                                    matrix: child_matrix,
                                    count: &state.count * &slots,
                                    witness,
                                },
                            );
                        }
                    }
                }
            }
        }
        self.states = next;
        Ok(())
    }

    fn witness_key(&self, pres: &FibredPresentation, state: &DpState) -> CosetKey {
        let mut e = pres.identity();
        for s in &state.witness {
            pres.push_vector(&mut e, &s.residue);
            pres.push_letter(&mut e, s.letter, s.sign);
        }
        pres.coset_key(&e)
    }

    /// The class with maximal F on the current sphere, exact comparison.
    fn max_state(&self, pres: &FibredPresentation) -> Option<(RationalMatrix, CosetKey)> {
        let mut best: Option<(&DpState, BigRational)> = None;
        for state in self.states.values() {
            let dv = DistortionValue::from_matrix(&state.matrix);
            let dev = dv.deviation();
            if best.as_ref().map_or(true, |(_, b)| dev > *b) {
                best = Some((state, dev));
            }
        }
        best.map(|(s, _)| (s.matrix.clone(), self.witness_key(pres, s)))
    }

    /// Nontrivial coset on the current level whose matrix is the identity.
    fn identity_state_witness(&self, pres: &FibredPresentation) -> Option<CosetKey> {
        self.states
            .values()
            .find(|s| s.matrix.is_identity() && !s.witness.is_empty())
            .map(|s| self.witness_key(pres, s))
    }

    fn sphere_row(&self, pres: &FibredPresentation, radius: u32) -> ProfileRow {
        let mut sphere_size = BigUint::zero();
        let mut max: Option<(DistortionValue, CosetKey, BigRational)> = None;
        let mut min: Option<(DistortionValue, CosetKey, BigRational)> = None;
        let mut histogram: BTreeMap<u32, BigUint> = BTreeMap::new();
        let mut below = BigUint::zero();
        for state in self.states.values() {
            let dv = DistortionValue::from_matrix(&state.matrix);
            let dev = dv.deviation();
            sphere_size += &state.count;
            let bucket = (dv.f / HISTOGRAM_BUCKET_WIDTH).floor() as u32;
            *histogram.entry(bucket).or_default() += &state.count;
            if dv.f <= F_THRESHOLD {
                below += &state.count;
            }
            if max.as_ref().map_or(true, |(_, _, b)| dev > *b) {
                max = Some((dv.clone(), self.witness_key(pres, state), dev.clone()));
            }
            if min.as_ref().map_or(true, |(_, _, b)| dev < *b) {
                min = Some((dv, self.witness_key(pres, state), dev));
            }
        }
        ProfileRow {
            radius,
            sphere_size,
            max: max.map(|(dv, k, _)| (dv, k)),
            min: min.map(|(dv, k, _)| (dv, k)),
            histogram: histogram.into_iter().collect(),
            below_threshold: below,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snapshot::{VertexKey, DEFAULT_VERTEX_BUDGET};

    const BUDGET: usize = DEFAULT_VERTEX_BUDGET;

    fn bs13() -> FibredPresentation {
        FibredPresentation::preset("bs(1,3)").unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn height_of_t_in_bs13() {
        let g = bs13();
        let h = g.height(&g.parse_word("t").unwrap()).unwrap();
        assert_eq!(h.ratio, rat(1, 3));
        assert!((h.log_value + 3f64.ln()).abs() < 1e-12);
        let h = g.height(&g.parse_word("x1^5").unwrap()).unwrap();
        assert_eq!(h.ratio, rat(1, 1));
    }

    #[test]
    fn height_requires_rank_one() {
        let g = FibredPresentation::preset("leary-minasyan").unwrap();
        assert!(matches!(
            g.height(&g.identity()),
            Err(Error::RankNotOne { rank: 2 })
        ));
    }

    #[test]
    fn height_is_homomorphism_spot() {
        let g = bs13();
        let a = g.parse_word("t x1").unwrap();
        let b = g.parse_word("t^-1 x1 t").unwrap();
        let ab = g.multiply(&a, &b).unwrap();
        let lhs = g.height(&ab).unwrap().ratio;
        let rhs = g.height(&a).unwrap().ratio * g.height(&b).unwrap().ratio;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn distortion_ladder_bs13() {
        let g = bs13();
        for k in -6i32..=6 {
            let key = g.coset_key(&g.parse_word(&format!("t^{k}")).unwrap());
            let dv = g.fibre_distortion(&key);
            let expected_norm = rat(1, 3).pow(k);
            assert_eq!(dv.norm, expected_norm, "k={k}");
            assert!(
                (dv.f - (k.abs() as f64) * 3f64.ln()).abs() < 1e-9,
                "k={k}"
            );
        }
    }

    #[test]
    fn distortion_leary_minasyan_t() {
        let g = FibredPresentation::preset("leary-minasyan").unwrap();
        let key = g.coset_key(&g.parse_word("t").unwrap());
        let dv = g.fibre_distortion(&key);
        assert_eq!(dv.norm, rat(17, 13));
        assert!((dv.f - (17f64 / 13f64).ln()).abs() < 1e-12);
        assert!((dv.f - 0.26826).abs() < 1e-5);
    }

    #[test]
    fn distortion_depends_only_on_coset() {
        let g = bs13();
        let a = g.parse_word("t x1^7").unwrap();
        let b = g.parse_word("t").unwrap();
        assert_eq!(
            g.fibre_distortion(&g.coset_key(&a)),
            g.fibre_distortion(&g.coset_key(&b))
        );
    }

    #[test]
    fn profile_counts_match_enumeration() {
        // Dual route: DP sphere sizes against quotient-ball enumeration,
        // and DP max-F against the max over enumerated coset keys.
        for preset in ["bs(1,3)", "f2xZ", "leary-minasyan", "bs(1,1)"] {
            let g = FibredPresentation::preset(preset).unwrap();
            let radius = if preset == "leary-minasyan" { 2 } else { 4 };
            let profile = g.distortion_profile(radius, BUDGET).unwrap();
            let snap = g.quotient_ball(radius, BUDGET).unwrap();
            let mut sphere_sizes = vec![BigUint::zero(); radius as usize + 1];
            let mut max_f_enum = vec![0f64; radius as usize + 1];
            for v in 0..snap.len() as u32 {
                let VertexKey::Coset(k) = &snap.keys()[v as usize] else {
                    unreachable!()
                };
                let d = snap.dist(v) as usize;
                sphere_sizes[d] += BigUint::one();
                let f = g.fibre_distortion(k).f;
                if f > max_f_enum[d] {
                    max_f_enum[d] = f;
                }
            }
            for r in 0..=radius as usize {
                assert_eq!(
                    profile.rows[r].sphere_size, sphere_sizes[r],
                    "{preset} sphere {r}"
                );
                let dp_max = profile.rows[r].max.as_ref().map(|(dv, _)| dv.f).unwrap();
                assert!(
                    (dp_max - max_f_enum[r]).abs() < 1e-12,
                    "{preset} max at {r}: dp={dp_max} enum={}",
                    max_f_enum[r]
                );
            }
        }
    }

    #[test]
    fn profile_verdicts() {
        let f2 = FibredPresentation::preset("f2xZ").unwrap();
        let p = f2.distortion_profile(6, BUDGET).unwrap();
        assert_eq!(p.verdict, Verdict::ZeroAtScale);

        let bs = bs13();
        let p = bs.distortion_profile(6, BUDGET).unwrap();
        assert!(matches!(p.verdict, Verdict::GrowingAtScale { .. }));
        let max_f = p.rows[6].max.as_ref().unwrap().0.f;
        assert!((max_f - 6.0 * 3f64.ln()).abs() < 1e-9);

        let lm = FibredPresentation::preset("leary-minasyan").unwrap();
        let p = lm.distortion_profile(8, BUDGET).unwrap();
        assert!(matches!(p.verdict, Verdict::BoundedAtScale { .. }));
        let ball_max = p.ball_max.as_ref().unwrap().0.f;
        assert!(ball_max <= 0.5f64.ln().abs() + 1e-9); // log sqrt(2)
    }

    #[test]
    fn profile_row_witnesses_have_matching_f() {
        let g = bs13();
        let p = g.distortion_profile(4, BUDGET).unwrap();
        for row in &p.rows {
            if let Some((dv, key)) = &row.max {
                let recomputed = g.fibre_distortion(key);
                assert_eq!(recomputed.norm, dv.norm);
                assert_eq!(key.syllables().len(), row.radius as usize);
            }
        }
    }

    #[test]
    fn aiq_kernel_scan() {
        // BS(1,3) has nontrivial identity-matrix cosets (balanced words);
        // the first appears at radius 2.
        let g = bs13();
        let p = g.distortion_profile(3, BUDGET).unwrap();
        let (r, key) = p.aiq_identity_kernel.as_ref().unwrap();
        assert_eq!(*r, 2);
        let a = g.matrix_a_of_syllables(key.syllables().iter().map(|s| (s.letter, s.sign)));
        assert!(a.is_identity());
    }

    #[test]
    fn qi_stability_bs13() {
        let g = bs13();
        let t = g.parse_word("t").unwrap();
        let s = g.qi_stability_check(&t, 5, BUDGET).unwrap();
        assert!((s.observed - 3f64.ln()).abs() < 1e-9);
        assert!((s.bound - 3f64.ln()).abs() < 1e-9);
        assert!(s.observed <= s.bound + 1e-12);

        let e = g.identity();
        let s = g.qi_stability_check(&e, 4, BUDGET).unwrap();
        assert_eq!(s.observed, 0.0);
        assert_eq!(s.bound, 0.0);

        let v = g.parse_word("x1^4").unwrap();
        let s = g.qi_stability_check(&v, 4, BUDGET).unwrap();
        assert_eq!(s.observed, 0.0);
    }

    #[test]
    fn ln_rational_handles_huge_values() {
        let huge = BigInt::from(3).pow(400u32);
        let r = BigRational::new(huge.clone(), BigInt::one());
        assert!((ln_rational(&r) - 400.0 * 3f64.ln()).abs() < 1e-6);
        let tiny = BigRational::new(BigInt::one(), huge);
        assert!((ln_rational(&tiny) + 400.0 * 3f64.ln()).abs() < 1e-6);
    }
}
