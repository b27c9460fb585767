//! Exact exterior algebra on a finite set of generator slots, with Gaussian
//! integer coefficients and the quantum-degree bookkeeping of arc algebra
//! pieces.
//!
//! Monomials are square-free subsets of slots stored as bitmasks; all signs
//! are Koszul signs of sorting permutations, computed by popcount prefixes.

use crate::coeff::GaussInt;
use std::collections::BTreeMap;
use std::fmt;

/// A wedge monomial: bit `g` set means generator `g` occurs.
pub type Monomial = u64;

#[derive(Debug, thiserror::Error)]
pub enum ExtError {
    #[error("generator sets differ: {0:#x} vs {1:#x}")]
    GeneratorMismatch(u64, u64),
    #[error("generator {0} is not live in this element")]
    UnknownGenerator(u32),
    #[error("substitution target {0} outside the generator set")]
    UnmappedGenerator(u32),
}

/// Result of a degree query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QDeg {
    /// The zero element (degree of every grade).
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

/// An element of the exterior algebra over the live generator set `gens`.
///
/// The quantum degree of a monomial of word-length `k` is
/// `2k - m + qdeg_offset`, where `m` is the number of live generators.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtElement {
    gens: u64,
    qdeg_offset: i64,
    terms: BTreeMap<Monomial, GaussInt>,
}

/// Parity of the sorting permutation that merges two disjoint sorted
/// monomials: counts pairs (i in a, j in b) with j < i.
pub fn merge_sign(a: Monomial, b: Monomial) -> i32 {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        // Generators of `a` strictly above j must hop over b's generator j.
        inversions += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl ExtElement {
    pub fn zero(gens: u64, qdeg_offset: i64) -> Self {
        ExtElement { gens, qdeg_offset, terms: BTreeMap::new() }
    }

    pub fn unit(gens: u64, qdeg_offset: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, GaussInt::one());
        ExtElement { gens, qdeg_offset, terms }
    }

    pub fn generator(g: u32, gens: u64, qdeg_offset: i64) -> Self {
        assert!(gens >> g & 1 == 1, "generator {g} not live");
        let mut terms = BTreeMap::new();
        terms.insert(1u64 << g, GaussInt::one());
        ExtElement { gens, qdeg_offset, terms }
    }

    pub fn monomial(mask: Monomial, gens: u64, qdeg_offset: i64) -> Self {
        assert_eq!(mask & !gens, 0, "monomial uses dead generators");
        let mut terms = BTreeMap::new();
        terms.insert(mask, GaussInt::one());
        ExtElement { gens, qdeg_offset, terms }
    }

    pub fn from_terms(gens: u64, qdeg_offset: i64, it: impl IntoIterator<Item = (Monomial, GaussInt)>) -> Self {
        let mut e = ExtElement::zero(gens, qdeg_offset);
        for (m, c) in it {
            e.add_term(m, c);
        }
        e
    }

    pub fn gens(&self) -> u64 {
        self.gens
    }

    pub fn gen_count(&self) -> u32 {
        self.gens.count_ones()
    }

    pub fn qdeg_offset(&self) -> i64 {
        self.qdeg_offset
    }

    pub fn with_offset(mut self, qdeg_offset: i64) -> Self {
        self.qdeg_offset = qdeg_offset;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: Monomial) -> GaussInt {
        self.terms.get(&m).cloned().unwrap_or_else(GaussInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussInt) {
        debug_assert_eq!(m & !self.gens, 0, "term uses dead generators");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(GaussInt::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &ExtElement) -> Result<ExtElement, ExtError> {
        if self.gens != other.gens {
            return Err(ExtError::GeneratorMismatch(self.gens, other.gens));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> ExtElement {
        self.scale(&GaussInt::from_int(-1))
    }

    pub fn sub(&self, other: &ExtElement) -> Result<ExtElement, ExtError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussInt) -> ExtElement {
        if c.is_zero() {
            return ExtElement::zero(self.gens, self.qdeg_offset);
        }
        let mut out = ExtElement::zero(self.gens, self.qdeg_offset);
        for (m, k) in &self.terms {
            out.terms.insert(*m, k * c);
        }
        out
    }

    /// The exterior product. Both factors must live on the same generators.
    pub fn wedge(&self, other: &ExtElement) -> Result<ExtElement, ExtError> {
        if self.gens != other.gens {
            return Err(ExtError::GeneratorMismatch(self.gens, other.gens));
        }
        let mut out = ExtElement::zero(self.gens, self.qdeg_offset);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue; // repeated generator annihilates
                }
                let sign = merge_sign(*ma, *mb);
                let mut c = ca * cb;
                if sign < 0 {
                    c = -c;
                }
                out.add_term(ma | mb, c);
            }
        }
        Ok(out)
    }

    /// Re-expresses the element on a larger generator set (injection of
    /// exterior algebras; no signs involved).
    pub fn extend_gens(&self, gens: u64) -> Result<ExtElement, ExtError> {
        if self.gens & !gens != 0 {
            return Err(ExtError::GeneratorMismatch(self.gens, gens));
        }
        let mut out = ExtElement::zero(gens, self.qdeg_offset);
        for (m, c) in &self.terms {
            out.terms.insert(*m, c.clone());
        }
        Ok(out)
    }

    /// Applies a generator identification `old -> map(old)` on every monomial,
    /// renormalizing with Koszul signs; repeated images annihilate the term.
    /// `new_gens` is the live set after the substitution.
    pub fn substitute(&self, new_gens: u64, map: impl Fn(u32) -> u32) -> Result<ExtElement, ExtError> {
        let mut out = ExtElement::zero(new_gens, self.qdeg_offset);
        'terms: for (m, c) in &self.terms {
            // Build the image sequence in ascending old-generator order.
            let mut images: Vec<u32> = Vec::with_capacity(m.count_ones() as usize);
            let mut mm = *m;
            while mm != 0 {
                let g = mm.trailing_zeros();
                let img = map(g);
                if new_gens >> img & 1 != 1 {
                    return Err(ExtError::UnmappedGenerator(g));
                }
                images.push(img);
                mm &= mm - 1;
            }
            // Sort, tracking the permutation parity; bail on repeats.
            let mut sign = 1i32;
            for i in 1..images.len() {
                let mut j = i;
                while j > 0 && images[j - 1] >= images[j] {
                    if images[j - 1] == images[j] {
                        continue 'terms;
                    }
                    images.swap(j - 1, j);
                    sign = -sign;
                    j -= 1;
                }
            }
            let mut mask: Monomial = 0;
            for g in images {
                mask |= 1 << g;
            }
            let mut coeff = c.clone();
            if sign < 0 {
                coeff = -coeff;
            }
            out.add_term(mask, coeff);
        }
        Ok(out)
    }

    /// Interior product with the dual of `g`: monomials without `g` die; `g`
    /// is removed from the rest with the sign of moving it to the front.
    pub fn contract(&self, g: u32) -> Result<ExtElement, ExtError> {
        if self.gens >> g & 1 != 1 {
            return Err(ExtError::UnknownGenerator(g));
        }
        let bit = 1u64 << g;
        let below = bit - 1;
        let mut out = ExtElement::zero(self.gens & !bit, self.qdeg_offset);
        for (m, c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            let sign = if (m & below).count_ones() % 2 == 0 { 1 } else { -1 };
            let mut coeff = c.clone();
            if sign < 0 {
                coeff = -coeff;
            }
            out.add_term(m & !bit, coeff);
        }
        Ok(out)
    }

    /// Quantum degree: `2k - m + offset` when all monomials share length `k`.
    pub fn qdeg(&self) -> QDeg {
        let mut lengths = self.terms.keys().map(|m| m.count_ones());
        let Some(k) = lengths.next() else { return QDeg::Zero };
        if lengths.all(|l| l == k) {
            QDeg::Homogeneous(2 * k as i64 - self.gen_count() as i64 + self.qdeg_offset)
        } else {
            QDeg::Inhomogeneous
        }
    }

    /// Word-length parity, defined for monomial-length-homogeneous elements.
    pub fn parity(&self) -> Option<u8> {
        let mut lengths = self.terms.keys().map(|m| m.count_ones());
        let Some(k) = lengths.next() else { return Some(0) };
        if lengths.all(|l| l % 2 == k % 2) {
            Some((k % 2) as u8)
        } else {
            None
        }
    }

    /// All coefficients reduced mod 2 (real parts; imaginary parts must vanish).
    pub fn mod2_terms(&self) -> BTreeMap<Monomial, u8> {
        self.terms.iter().filter(|(_, c)| c.re_mod2() == 1).map(|(m, _)| (*m, 1)).collect()
    }
}

/// The odd TQFT's inert elementary maps, exposed for completeness: these are
/// not reachable from contraction cobordisms but are part of the local
/// calculus (a birth is the unit inclusion, deaths are signed contractions,
/// a twist is the permutation of two generators).
pub mod elementary {
    use super::*;

    /// Birth of generator `g`: the inclusion `v -> 1 ^ v` into the larger algebra.
    pub fn birth(x: &ExtElement, g: u32) -> Result<ExtElement, ExtError> {
        if x.gens() >> g & 1 == 1 {
            return Err(ExtError::GeneratorMismatch(x.gens(), x.gens() | (1 << g)));
        }
        x.extend_gens(x.gens() | (1 << g))
    }

    /// Positive death of `g`: contraction with the dual generator.
    pub fn death_pos(x: &ExtElement, g: u32) -> Result<ExtElement, ExtError> {
        x.contract(g)
    }

    /// Negative death of `g`: the opposite of the positive one.
    pub fn death_neg(x: &ExtElement, g: u32) -> Result<ExtElement, ExtError> {
        Ok(x.contract(g)?.neg())
    }

    /// Twist: swaps two generators.
    pub fn twist(x: &ExtElement, g1: u32, g2: u32) -> Result<ExtElement, ExtError> {
        x.substitute(x.gens(), |g| {
            if g == g1 {
                g2
            } else if g == g2 {
                g1
            } else {
                g
            }
        })
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mono = if *m == 0 {
                "1".to_string()
            } else {
                let mut parts = Vec::new();
                let mut mm = *m;
                while mm != 0 {
                    let g = mm.trailing_zeros();
                    parts.push(format!("g{}", g + 1));
                    mm &= mm - 1;
                }
                parts.join("^")
            };
            let (sign, abs) = display_split(c);
            if first {
                if sign < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if abs == "1" && *m != 0 {
                write!(f, "{mono}")?;
            } else if *m == 0 {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}·{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Splits a coefficient into a display sign and magnitude string: real
/// negative and pure-negative-imaginary values pull the sign out front.
fn display_split(c: &GaussInt) -> (i32, String) {
    use num_traits::{Signed, Zero};
    if c.im.is_zero() && c.re.is_negative() {
        return (-1, (-c).to_string());
    }
    if c.re.is_zero() && c.im.is_negative() {
        return (-1, (-c).to_string());
    }
    (1, c.to_string())
}
