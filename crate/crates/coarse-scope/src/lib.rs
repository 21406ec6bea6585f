//! Exact-arithmetic toolkit for multiple HNN extensions of Z^n by invertible
//! rational matrices: canonical normal forms and the word problem, word-
//! metric balls, the quotient space over the fibre Z^n with its rough Cayley
//! graph, height and fibre-distortion invariants, and coarse-topology probes
//! (Rips complexes over Z_2, ends at scale, complementary-component
//! correspondence).
//!
//! All group-theoretic arithmetic is exact; floating point appears only in
//! display values derived from exact rationals. Every operation is a pure
//! deterministic function of its inputs, and results are independent of
//! thread scheduling.

pub mod cayley;
pub mod coset;
pub mod element;
pub mod error;
pub mod gf2;
pub mod invariants;
pub mod lattice;
pub mod matrix;
pub mod presentation;
pub mod snapshot;
pub mod topology;

pub use cayley::DistanceResult;
pub use coset::{Bound, CosetKey, HausdorffBounds};
pub use element::{GroupElement, Sign, Syllable, WordItem};
pub use error::{Error, Result};
pub use invariants::{DistortionProfile, DistortionValue, HeightValue, QiStability, Verdict};
pub use lattice::LatticeBasis;
pub use matrix::RationalMatrix;
pub use presentation::{FibredPresentation, LetterDoc, PresentationDoc};
pub use snapshot::{Snapshot, SnapshotKind, VertexKey, DEFAULT_VERTEX_BUDGET};
pub use topology::{
    betti_z2, ccc_correspondence, ends_at_scale, ends_table, hopf_evidence, quotient_distance,
    quotient_simplicial_image, relative_acyclicity, rips, RipsComplex2,
};
