//! The group family: multiple HNN extensions of Z^n by invertible rational
//! matrices, with the fibre Z^n as almost normal subgroup.
//!
//! A presentation document is validated into a [`FibredPresentation`], which
//! precomputes for every stable letter `t` with matrix `M` the source lattice
//! `B = {v : M v in Z^n}`, the image lattice `C = M(B)`, and their indices.
//! The relation realized is `t v t^{-1} = M v` for `v in B`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::matrix::RationalMatrix;

/// Raw presentation document, the JSON surface format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub rank: usize,
    #[serde(default)]
    pub letters: Vec<LetterDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LetterDoc {
    pub name: String,
    pub num: Vec<Vec<i64>>,
    pub den: i64,
}

/// One stable letter with its matrix and derived lattice data.
#[derive(Debug, Clone)]
pub struct Letter {
    pub name: String,
    /// Edge matrix: `t v t^{-1} = M v` on the source lattice.
    pub matrix: RationalMatrix,
    pub matrix_inv: RationalMatrix,
    /// `B = {v : M v in Z^n}`, the domain of the relation.
    pub source: LatticeBasis,
    /// `C = M(B)`, the image of the relation.
    pub image: LatticeBasis,
    source_transversal: std::sync::OnceLock<Vec<Vec<BigInt>>>,
    image_transversal: std::sync::OnceLock<Vec<Vec<BigInt>>>,
}

impl Letter {
    /// Transversal of Z^n modulo B, computed once on first use.
    pub fn source_transversal(&self) -> &[Vec<BigInt>] {
        self.source_transversal
            .get_or_init(|| self.source.transversal())
    }

    /// Transversal of Z^n modulo C, computed once on first use.
    pub fn image_transversal(&self) -> &[Vec<BigInt>] {
        self.image_transversal
            .get_or_init(|| self.image.transversal())
    }
}

/// Validated group datum. Immutable after construction; all operations on
/// elements are methods of this type.
#[derive(Debug, Clone)]
pub struct FibredPresentation {
    rank: usize,
    letters: Vec<Letter>,
    hash: String,
    stamp: u64,
}

impl FibredPresentation {
    /// Validates a raw document into a presentation. Rejects singular
    /// matrices, dimension mismatches, and duplicate or reserved names.
    pub fn validate(doc: &PresentationDoc) -> Result<Self> {
        if doc.rank == 0 {
            return Err(Error::BadDocument {
                reason: "rank must be at least 1".into(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut letters = Vec::new();
        for l in &doc.letters {
            if l.name.is_empty()
                || !l
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_')
                || l.name.chars().next().unwrap().is_ascii_digit()
            {
                return Err(Error::BadDocument {
                    reason: format!("letter name `{}` is not an identifier", l.name),
                });
            }
            // Vector generators x1..xn are reserved, as is the identity word.
            let reserved = l.name == "e"
                || (l.name.starts_with('x')
                    && l.name[1..].parse::<usize>().map(|i| i >= 1 && i <= doc.rank)
                        == Ok(true));
            if reserved || !seen.insert(l.name.clone()) {
                return Err(Error::DuplicateName {
                    name: l.name.clone(),
                });
            }
            if l.num.len() != doc.rank || l.num.iter().any(|r| r.len() != doc.rank) {
                return Err(Error::DimensionMismatch {
                    context: format!(
                        "letter `{}` has a {}x{} matrix in a rank-{} presentation",
                        l.name,
                        l.num.len(),
                        l.num.first().map_or(0, |r| r.len()),
                        doc.rank
                    ),
                });
            }
            let matrix = RationalMatrix::from_num_den(&l.num, l.den, &l.name)?;
            let source = LatticeBasis::congruence_kernel(&matrix);
            let image = source.image_under(&matrix);
            assert_eq!(source.dim(), doc.rank);
            assert_eq!(image.dim(), doc.rank);
            letters.push(Letter {
                name: l.name.clone(),
                matrix_inv: matrix.inverse(),
                matrix,
                source,
                image,
                source_transversal: std::sync::OnceLock::new(),
                image_transversal: std::sync::OnceLock::new(),
            });
        }
        let hash = presentation_hash(doc.rank, &letters);
        let stamp = u64::from_str_radix(&hash[0..16], 16).unwrap();
        Ok(Self {
            rank: doc.rank,
            letters,
            hash,
            stamp,
        })
    }

    /// Parses a JSON document string and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PresentationDoc = serde_json::from_str(text).map_err(|e| Error::BadDocument {
            reason: e.to_string(),
        })?;
        Self::validate(&doc)
    }

    /// Expands a named preset or parses inline JSON. Recognized presets:
    /// `bs(1,k)`, `f2xZ` / `f2xZ^n`, `leary-minasyan`,
    /// `zn-semidirect(d; r11,r12; r21,r22; ...)`, `z^n` / `z`, `zxz`.
    pub fn preset(name: &str) -> Result<Self> {
        let doc = preset_doc(name)?;
        Self::validate(&doc)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.name == name)
    }

    /// Hex digest identifying the presentation; carried by every CLI record.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub(crate) fn stamp(&self) -> u64 {
        self.stamp
    }

    /// Upper bound for the rough Cayley graph degree:
    /// sum over letters of [Z^n:B] + [Z^n:C].
    pub fn quotient_degree_bound(&self) -> BigInt {
        self.letters
            .iter()
            .map(|l| l.source.index() + l.image.index())
            .sum()
    }
}

fn presentation_hash(rank: usize, letters: &[Letter]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("rank={rank};"));
    for l in letters {
        hasher.update(format!("{}={};", l.name, l.matrix.canonical_string()));
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Expands a preset name into a raw document.
pub fn preset_doc(name: &str) -> Result<PresentationDoc> {
    let trimmed = name.trim();
    let bad = || Error::BadDocument {
        reason: format!("unknown preset `{trimmed}`"),
    };
    if trimmed == "leary-minasyan" {
        return Ok(PresentationDoc {
            rank: 2,
            letters: vec![LetterDoc {
                name: "t".into(),
                num: vec![vec![5, 12], vec![-12, 5]],
                den: 13,
            }],
        });
    }
    if trimmed == "zxz" {
        return Ok(PresentationDoc {
            rank: 1,
            letters: vec![LetterDoc {
                name: "t".into(),
                num: vec![vec![1]],
                den: 1,
            }],
        });
    }
    if let Some(rest) = trimmed.strip_prefix("bs(") {
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 2 || parts[0] != "1" {
            return Err(bad());
        }
        let k: i64 = parts[1].parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(Error::BadDocument {
                reason: "bs(1,0) is singular".into(),
            });
        }
        return Ok(PresentationDoc {
            rank: 1,
            letters: vec![LetterDoc {
                name: "t".into(),
                num: vec![vec![k]],
                den: 1,
            }],
        });
    }
    if trimmed == "f2xZ" || trimmed.starts_with("f2xZ^") {
        let n = if trimmed == "f2xZ" {
            1
        } else {
            trimmed[5..].parse::<usize>().map_err(|_| bad())?
        };
        if n == 0 {
            return Err(bad());
        }
        let ident = |name: &str| LetterDoc {
            name: name.into(),
            num: (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect(),
            den: 1,
        };
        return Ok(PresentationDoc {
            rank: n,
            letters: vec![ident("t"), ident("s")],
        });
    }
    if trimmed == "z" || trimmed.starts_with("z^") {
        let n = if trimmed == "z" {
            1
        } else {
            trimmed[2..].parse::<usize>().map_err(|_| bad())?
        };
        if n == 0 {
            return Err(bad());
        }
        return Ok(PresentationDoc {
            rank: n,
            letters: vec![],
        });
    }
    if let Some(rest) = trimmed.strip_prefix("zn-semidirect(") {
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let mut segments = inner.split(';').map(str::trim);
        let den: i64 = segments
            .next()
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        let rows: Vec<Vec<i64>> = segments
            .map(|seg| {
                seg.split(',')
                    .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
                    .collect()
            })
            .collect::<Result<_>>()?;
        if rows.is_empty() {
            return Err(bad());
        }
        return Ok(PresentationDoc {
            rank: rows.len(),
            letters: vec![LetterDoc {
                name: "t".into(),
                num: rows,
                den,
            }],
        });
    }
    Err(bad())
}

/// Resolves a group argument: a preset name, inline JSON (starts with `{`),
/// or a path to a JSON document.
pub fn resolve_group(arg: &str) -> Result<FibredPresentation> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        return FibredPresentation::from_json(trimmed);
    }
    if let Ok(p) = FibredPresentation::preset(trimmed) {
        return Ok(p);
    }
    match std::fs::read_to_string(trimmed) {
        Ok(text) => FibredPresentation::from_json(&text),
        Err(_) => Err(Error::BadDocument {
            reason: format!("`{trimmed}` is neither a preset, inline JSON, nor a readable file"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn bs13_indices() {
        let g = FibredPresentation::preset("bs(1,3)").unwrap();
        assert_eq!(g.rank(), 1);
        let l = &g.letters()[0];
        assert_eq!(l.source.index(), &BigInt::from(1));
        assert_eq!(l.image.index(), &BigInt::from(3));
        assert_eq!(g.quotient_degree_bound(), BigInt::from(4));
    }

    #[test]
    fn identity_letter_has_unit_indices() {
        let g = FibredPresentation::from_json(
            r#"{"rank": 2, "letters": [{"name": "t", "num": [[1,0],[0,1]], "den": 1}]}"#,
        )
        .unwrap();
        let l = &g.letters()[0];
        assert_eq!(l.source.index(), &BigInt::from(1));
        assert_eq!(l.image.index(), &BigInt::from(1));
    }

    #[test]
    fn leary_minasyan_indices() {
        let g = FibredPresentation::preset("leary-minasyan").unwrap();
        let l = &g.letters()[0];
        assert_eq!(l.source.index(), &BigInt::from(13));
        assert_eq!(l.image.index(), &BigInt::from(13));
        assert_eq!(g.quotient_degree_bound(), BigInt::from(26));
    }

    #[test]
    fn rejects_duplicate_and_reserved_names() {
        let doc = PresentationDoc {
            rank: 1,
            letters: vec![
                LetterDoc {
                    name: "t".into(),
                    num: vec![vec![2]],
                    den: 1,
                },
                LetterDoc {
                    name: "t".into(),
                    num: vec![vec![3]],
                    den: 1,
                },
            ],
        };
        assert!(matches!(
            FibredPresentation::validate(&doc),
            Err(Error::DuplicateName { .. })
        ));
        let doc = PresentationDoc {
            rank: 1,
            letters: vec![LetterDoc {
                name: "x1".into(),
                num: vec![vec![2]],
                den: 1,
            }],
        };
        assert!(matches!(
            FibredPresentation::validate(&doc),
            Err(Error::DuplicateName { .. })
        ));
    }

    #[test]
    fn rejects_singular_matrix() {
        let doc = PresentationDoc {
            rank: 1,
            letters: vec![LetterDoc {
                name: "t".into(),
                num: vec![vec![0]],
                den: 1,
            }],
        };
        assert!(matches!(
            FibredPresentation::validate(&doc),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn presets_expand() {
        assert_eq!(FibredPresentation::preset("f2xZ").unwrap().letters().len(), 2);
        assert_eq!(FibredPresentation::preset("z^3").unwrap().rank(), 3);
        assert!(FibredPresentation::preset("z^3").unwrap().letters().is_empty());
        let lm = FibredPresentation::preset("zn-semidirect(13; 5,12; -12,5)").unwrap();
        assert_eq!(lm.hash(), FibredPresentation::preset("leary-minasyan").unwrap().hash());
        assert_eq!(
            FibredPresentation::preset("zxz").unwrap().hash(),
            FibredPresentation::preset("bs(1,1)").unwrap().hash()
        );
    }

    #[test]
    fn hash_is_stable_and_distinguishes() {
        let a = FibredPresentation::preset("bs(1,3)").unwrap();
        let b = FibredPresentation::preset("bs(1,3)").unwrap();
        let c = FibredPresentation::preset("bs(1,2)").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
    }
}
