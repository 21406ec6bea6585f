//! Canonical group elements: right-pushed, pinch-free HNN normal forms.
//!
//! An element is a syllable list plus a tail vector, spelling
//! `r_1 t_{i_1}^{e_1} r_2 t_{i_2}^{e_2} ... r_k t_{i_k}^{e_k} * tail`,
//! where each residue `r_j` stands LEFT of its letter and is the canonical
//! transversal representative (mod C_i for e = +1, mod B_i for e = -1).
//! Right multiplication by a fibre vector touches only the tail, so coset
//! keys fall out of an element by dropping the tail.
//!
//! Rewriting rules applied to termination by the append operations:
//!   v t  = r t (M^{-1} c)   for v = c + r, c in C, r the C-representative
//!   v t' = r t' (M b)       for v = b + r, b in B, r the B-representative
//!   t w t'  -> M w          when w in B   (pinch)
//!   t' w t  -> M^{-1} w     when w in C   (pinch)
//! with `t'` denoting the inverse letter. Uniqueness of the resulting form
//! is the HNN normal form theorem.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::presentation::FibredPresentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub letter: usize,
    pub sign: Sign,
    /// Residue vector standing left of the letter; transversal-reduced.
    pub residue: Vec<BigInt>,
}

/// Canonical element key. Two elements are equal in the group iff their
/// `(syllables, tail)` agree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub(crate) stamp: u64,
    pub(crate) syllables: Vec<Syllable>,
    pub(crate) tail: Vec<BigInt>,
}

impl GroupElement {
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn tail(&self) -> &[BigInt] {
        &self.tail
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty() && self.tail.iter().all(|c| c.is_zero())
    }

    /// True when the element lies in the fibre Z^n.
    pub fn in_fibre(&self) -> bool {
        self.syllables.is_empty()
    }
}

/// One item of a raw (unnormalized) word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordItem {
    Vector(Vec<BigInt>),
    Letter(usize, Sign),
}

impl FibredPresentation {
    pub fn identity(&self) -> GroupElement {
        GroupElement {
            stamp: self.stamp(),
            syllables: Vec::new(),
            tail: vec![BigInt::zero(); self.rank()],
        }
    }

    /// The fibre element with the given tail vector.
    pub fn vector_element(&self, v: Vec<BigInt>) -> GroupElement {
        assert_eq!(v.len(), self.rank());
        GroupElement {
            stamp: self.stamp(),
            syllables: Vec::new(),
            tail: v,
        }
    }

    fn check_stamp(&self, g: &GroupElement) -> Result<()> {
        if g.stamp != self.stamp() {
            return Err(Error::PresentationMismatch);
        }
        Ok(())
    }

    /// Appends a fibre vector on the right: only the tail moves.
    pub(crate) fn push_vector(&self, g: &mut GroupElement, v: &[BigInt]) {
        for (t, x) in g.tail.iter_mut().zip(v) {
            *t += x;
        }
    }

    /// Appends a letter on the right, maintaining the canonical form.
    pub(crate) fn push_letter(&self, g: &mut GroupElement, letter: usize, sign: Sign) {
        let l = &self.letters()[letter];
        // Pinch: the tail sits between an opposite-sign syllable of the same
        // letter and the incoming one.
        if let Some(last) = g.syllables.last() {
            if last.letter == letter && last.sign == sign.flip() {
                let (lattice, conj): (_, &RationalMatrix) = match sign {
                    // pattern t w t^{-1} with w in B: becomes M w
                    Sign::Minus => (&l.source, &l.matrix),
                    // pattern t^{-1} w t with w in C: becomes M^{-1} w
                    Sign::Plus => (&l.image, &l.matrix_inv),
                };
                if lattice.contains(&g.tail) {
                    let conjugated = conj.apply_integral(&g.tail);
                    let last = g.syllables.pop().unwrap();
                    g.tail = last.residue;
                    self.push_vector(g, &conjugated);
                    return;
                }
            }
        }
        // Push the tail right through the letter.
        let (lattice, conj): (_, &RationalMatrix) = match sign {
            Sign::Plus => (&l.image, &l.matrix_inv),
            Sign::Minus => (&l.source, &l.matrix),
        };
        let residue = lattice.reduce(&g.tail);
        let lattice_part: Vec<BigInt> = g.tail.iter().zip(&residue).map(|(v, r)| v - r).collect();
        let moved = conj.apply_integral(&lattice_part);
        g.syllables.push(Syllable {
            letter,
            sign,
            residue,
        });
        g.tail = moved;
    }

    /// Normalizes a raw syllable/vector sequence to the canonical form.
    /// Total on valid input and idempotent.
    pub fn normalize(&self, items: &[WordItem]) -> GroupElement {
        let mut g = self.identity();
        for item in items {
            match item {
                WordItem::Vector(v) => {
                    assert_eq!(v.len(), self.rank(), "vector of wrong dimension");
                    self.push_vector(&mut g, v);
                }
                WordItem::Letter(i, s) => {
                    assert!(*i < self.letters().len(), "letter index out of range");
                    self.push_letter(&mut g, *i, *s);
                }
            }
        }
        g
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_stamp(a)?;
        self.check_stamp(b)?;
        let mut g = a.clone();
        for syl in &b.syllables {
            self.push_vector(&mut g, &syl.residue);
            self.push_letter(&mut g, syl.letter, syl.sign);
        }
        self.push_vector(&mut g, &b.tail);
        Ok(g)
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_stamp(a)?;
        let mut g = self.identity();
        let neg: Vec<BigInt> = a.tail.iter().map(|c| -c).collect();
        self.push_vector(&mut g, &neg);
        for syl in a.syllables.iter().rev() {
            self.push_letter(&mut g, syl.letter, syl.sign.flip());
            let neg: Vec<BigInt> = syl.residue.iter().map(|c| -c).collect();
            self.push_vector(&mut g, &neg);
        }
        Ok(g)
    }

    /// Right-multiplies by a single generator, given as an index into
    /// [`FibredPresentation::generators`].
    pub(crate) fn apply_generator(&self, g: &GroupElement, gen: &Generator) -> GroupElement {
        let mut out = g.clone();
        match gen {
            Generator::Vector(j, sign) => {
                let mut v = vec![BigInt::zero(); self.rank()];
                v[*j] = BigInt::from(sign.as_i8());
                self.push_vector(&mut out, &v);
            }
            Generator::Letter(i, sign) => self.push_letter(&mut out, *i, *sign),
        }
        out
    }

    /// The fixed symmetric generating set: `±e_1..±e_n`, then letters and
    /// their inverses, in presentation order.
    pub fn generators(&self) -> Vec<Generator> {
        let mut gens = Vec::new();
        for j in 0..self.rank() {
            gens.push(Generator::Vector(j, Sign::Plus));
            gens.push(Generator::Vector(j, Sign::Minus));
        }
        for i in 0..self.letters().len() {
            gens.push(Generator::Letter(i, Sign::Plus));
            gens.push(Generator::Letter(i, Sign::Minus));
        }
        gens
    }

    /// The commensuration matrix `A_g`: columns determined by
    /// `v_j^{q_j} = g (prod_i v_i^{p_ij}) g^{-1}` with entries `p_ij / q_j`.
    /// Computed as the left-composed product of `M_i^{-e}` over the
    /// syllables read left to right, so that `A_{gk} = A_k A_g` exactly.
    pub fn matrix_a(&self, g: &GroupElement) -> Result<RationalMatrix> {
        self.check_stamp(g)?;
        Ok(self.matrix_a_of_syllables(g.syllables.iter().map(|s| (s.letter, s.sign))))
    }

    pub(crate) fn matrix_a_of_syllables(
        &self,
        syllables: impl Iterator<Item = (usize, Sign)>,
    ) -> RationalMatrix {
        let mut acc = RationalMatrix::identity(self.rank());
        for (letter, sign) in syllables {
            let l = &self.letters()[letter];
            let factor = match sign {
                Sign::Plus => &l.matrix_inv,
                Sign::Minus => &l.matrix,
            };
            acc = factor.mul(&acc);
        }
        acc
    }

    /// Indices of the commensuration: `L_g = {v : g v g^{-1} in Z^n}`
    /// equals `A_g(Z^n) ∩ Z^n`; returns `([Z^n : L_g], [Z^n : g L_g g^{-1}])`.
    /// Both are finite for every element (almost normality of the fibre).
    pub fn commensuration_indices(&self, g: &GroupElement) -> Result<(BigInt, BigInt)> {
        self.check_stamp(g)?;
        let a = self.matrix_a(g)?;
        // Conjugation by g acts on the fibre as A_g^{-1}.
        let conj = a.inverse();
        let source = crate::lattice::LatticeBasis::congruence_kernel(&conj);
        let image = source.image_under(&conj);
        Ok((source.index().clone(), image.index().clone()))
    }

    /// Parses a word in the presentation's generators. Tokens are letter
    /// names with optional integer exponents (`t`, `t^-2`), vector
    /// generators (`x1`, `x2^3`), or explicit vectors (`v[1,-2]`, also with
    /// exponents). Whitespace separates tokens; the empty word is the
    /// identity.
    pub fn parse_word(&self, text: &str) -> Result<GroupElement> {
        self.parse_word_with_limit(text, DEFAULT_EXPONENT_LIMIT)
    }

    pub fn parse_word_with_limit(&self, text: &str, limit: i64) -> Result<GroupElement> {
        let mut g = self.identity();
        for token in text.split_whitespace() {
            let (base, exp) = split_exponent(token, limit)?;
            if let Some(vec_text) = base.strip_prefix("v[") {
                let inner = vec_text.strip_suffix(']').ok_or(Error::MalformedVector {
                    text: token.to_string(),
                })?;
                let coords: Vec<BigInt> = inner
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<i64>()
                            .map(BigInt::from)
                            .map_err(|_| Error::MalformedVector {
                                text: token.to_string(),
                            })
                    })
                    .collect::<Result<_>>()?;
                if coords.len() != self.rank() {
                    return Err(Error::MalformedVector {
                        text: token.to_string(),
                    });
                }
                let scaled: Vec<BigInt> = coords.iter().map(|c| c * exp).collect();
                self.push_vector(&mut g, &scaled);
                continue;
            }
            if let Some(j) = parse_vector_generator(base, self.rank()) {
                let mut v = vec![BigInt::zero(); self.rank()];
                v[j] = BigInt::from(exp);
                self.push_vector(&mut g, &v);
                continue;
            }
            if base == "e" {
                continue;
            }
            if let Some(i) = self.letter_index(base) {
                let sign = if exp >= 0 { Sign::Plus } else { Sign::Minus };
                for _ in 0..exp.unsigned_abs() {
                    self.push_letter(&mut g, i, sign);
                }
                continue;
            }
            return Err(Error::UnknownToken {
                token: token.to_string(),
            });
        }
        Ok(g)
    }

    /// Renders the canonical form as a parseable word.
    pub fn element_string(&self, g: &GroupElement) -> String {
        let mut parts: Vec<String> = Vec::new();
        for syl in &g.syllables {
            push_vector_string(&mut parts, &syl.residue);
            let name = &self.letters()[syl.letter].name;
            match syl.sign {
                Sign::Plus => parts.push(name.clone()),
                Sign::Minus => parts.push(format!("{name}^-1")),
            }
        }
        push_vector_string(&mut parts, &g.tail);
        if parts.is_empty() {
            "e".to_string()
        } else {
            parts.join(" ")
        }
    }
}

/// Default bound on parsed exponents; keeps letter expansion bounded.
pub const DEFAULT_EXPONENT_LIMIT: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `±e_j`.
    Vector(usize, Sign),
    /// `t_i^{±1}`.
    Letter(usize, Sign),
}

impl Generator {
    pub fn label(&self, pres: &FibredPresentation) -> String {
        match self {
            Generator::Vector(j, Sign::Plus) => format!("x{}", j + 1),
            Generator::Vector(j, Sign::Minus) => format!("x{}^-1", j + 1),
            Generator::Letter(i, Sign::Plus) => pres.letters()[*i].name.clone(),
            Generator::Letter(i, Sign::Minus) => format!("{}^-1", pres.letters()[*i].name),
        }
    }
}

fn split_exponent(token: &str, limit: i64) -> Result<(&str, i64)> {
    match token.rsplit_once('^') {
        None => Ok((token, 1)),
        Some((base, exp_text)) => {
            let exp: i64 = exp_text.parse().map_err(|_| Error::UnknownToken {
                token: token.to_string(),
            })?;
            if exp.abs() > limit {
                return Err(Error::ExponentOutOfRange {
                    exponent: exp,
                    limit,
                });
            }
            Ok((base, exp))
        }
    }
}

fn parse_vector_generator(base: &str, rank: usize) -> Option<usize> {
    let rest = base.strip_prefix('x')?;
    let idx: usize = rest.parse().ok()?;
    (idx >= 1 && idx <= rank).then(|| idx - 1)
}

fn push_vector_string(parts: &mut Vec<String>, v: &[BigInt]) {
    for (j, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c == &BigInt::from(1) {
            parts.push(format!("x{}", j + 1));
        } else {
            parts.push(format!("x{}^{}", j + 1, c));
        }
    }
}
