//! The odd polynomial ring in `2n` anticommuting degree-2 variables, the odd
//! partially symmetric generators, and the free quotient presenting the odd
//! cohomology of the `(n,n)`-Springer variety.
//!
//! Squares of variables lie in the ideal, so the quotient is computed in the
//! square-free monomial basis; the span of the ideal is unchanged by reducing
//! the generators and their left monomial multiples modulo squares.

use crate::diagram::binomial;
use crate::exterior::merge_sign;
use crate::linalg::{smith_normal_form, Mat, TrailingEchelon};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum SpringerError {
    #[error("subset size {got} is not n+k for k in 1..={n}")]
    BadSubsetSize { got: usize, n: usize },
    #[error("r = {r} outside the admissible range {lo}..={hi}")]
    BadR { r: usize, lo: usize, hi: usize },
    #[error("subset contains a point outside 1..={0} or a repeat")]
    BadSubset(usize),
    #[error("torsion detected: elementary divisor {0} in degree {1}")]
    Torsion(BigInt, usize),
    #[error("non-unit pivot in degree {0}; relation lattice not coordinate-split")]
    NonUnitPivot(usize),
    #[error("total rank {got}, expected binomial(2n, n) = {want}")]
    RankMismatch { got: usize, want: usize },
}

/// A skew polynomial with square-free monomials over `x_1..x_{2n}`;
/// monomial bit `i` stands for `x_{i+1}`, `deg x_i = 2`.
#[derive(Clone, PartialEq, Eq)]
pub struct SkewPoly {
    nvars: usize,
    terms: BTreeMap<u32, BigInt>,
}

impl SkewPoly {
    pub fn zero(nvars: usize) -> Self {
        SkewPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, BigInt::from(1));
        SkewPoly { nvars, terms }
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        assert!((1..=nvars).contains(&i));
        let mut terms = BTreeMap::new();
        terms.insert(1 << (i - 1), BigInt::from(1));
        SkewPoly { nvars, terms }
    }

    pub fn monomial(mask: u32, nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mask, BigInt::from(1));
        SkewPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mask: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &SkewPoly) -> SkewPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> SkewPoly {
        let mut out = SkewPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(*m, -c);
        }
        out
    }

    pub fn sub(&self, other: &SkewPoly) -> SkewPoly {
        self.add(&other.neg())
    }

    /// Product with the anticommutation signs; overlapping monomials vanish
    /// (their lifts are square multiples, which lie in the ideal anyway).
    pub fn mul(&self, other: &SkewPoly) -> SkewPoly {
        let mut out = SkewPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(*ma as u64, *mb as u64);
                let c = ca * cb;
                out.add_term(ma | mb, if sign < 0 { -c } else { c });
            }
        }
        out
    }

    /// Word length when homogeneous (q-degree is twice this).
    pub fn word_length(&self) -> Option<u32> {
        let mut ls = self.terms.keys().map(|m| m.count_ones());
        let first = ls.next()?;
        ls.all(|l| l == first).then_some(first)
    }
}

impl fmt::Display for SkewPoly {
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
                    let i = mm.trailing_zeros();
                    parts.push(format!("x{}", i + 1));
                    mm &= mm - 1;
                }
                parts.join("")
            };
            use num_traits::Signed;
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if abs == BigInt::from(1) && *m != 0 {
                write!(f, "{mono}")?;
            } else if *m == 0 {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The odd partially symmetric function for an ordered subset `s` (positions
/// `S(i)` count from 1 in the order given): the sum over all `r`-subsets of
/// the signed variables `(-1)^{S(i)-1} x_i`.
pub fn epsilon(n: usize, r: usize, s: &[usize]) -> Result<SkewPoly, SpringerError> {
    let nvars = 2 * n;
    let size = s.len();
    if size <= n || size > 2 * n {
        return Err(SpringerError::BadSubsetSize { got: size, n });
    }
    let k = size - n;
    let lo = n + 1 - k;
    let hi = n + k;
    if r < lo || r > hi {
        return Err(SpringerError::BadR { r, lo, hi });
    }
    let mut seen = 0u32;
    for &p in s {
        if p < 1 || p > nvars || seen >> (p - 1) & 1 == 1 {
            return Err(SpringerError::BadSubset(nvars));
        }
        seen |= 1 << (p - 1);
    }
    // Signed variables in the subset's order.
    let signed: Vec<SkewPoly> = s
        .iter()
        .enumerate()
        .map(|(pos, &p)| {
            let v = SkewPoly::var(p, nvars);
            if pos % 2 == 0 {
                v
            } else {
                v.neg()
            }
        })
        .collect();
    // Sum over r-element index subsets (in increasing index order).
    let mut out = SkewPoly::zero(nvars);
    let mut choose = vec![0usize; r];
    fn rec(
        signed: &[SkewPoly],
        r: usize,
        start: usize,
        depth: usize,
        choose: &mut Vec<usize>,
        out: &mut SkewPoly,
    ) {
        if depth == r {
            let mut prod = SkewPoly::one(signed[0].nvars());
            for &i in choose.iter() {
                prod = prod.mul(&signed[i]);
            }
            *out = out.add(&prod);
            return;
        }
        for i in start..signed.len() {
            choose[depth] = i;
            rec(signed, r, i + 1, depth + 1, choose, out);
        }
    }
    rec(&signed, r, 0, 0, &mut choose, &mut out);
    Ok(out)
}

/// All admissible `(r, S)` pairs for a given `n` (subsets in ascending order).
pub fn all_generators(n: usize) -> Vec<SkewPoly> {
    let nvars = 2 * n;
    let mut out = Vec::new();
    for k in 1..=n {
        let size = n + k;
        let mut subset: Vec<usize> = (1..=size).collect();
        loop {
            for r in (n + 1 - k)..=(n + k) {
                out.push(epsilon(n, r, &subset).expect("admissible by construction"));
            }
            // next combination of {1..nvars} of this size
            let mut i = size;
            loop {
                if i == 0 {
                    break;
                }
                if subset[i - 1] < nvars - (size - i) {
                    subset[i - 1] += 1;
                    for j in i..size {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
                i -= 1;
            }
            if i == 0 {
                break;
            }
        }
    }
    out
}

/// Per-degree data of the quotient: the reduced relation lattice and the
/// non-pivot (representative) monomials.
pub struct DegreeBlock {
    pub word_length: usize,
    pub monomials: Vec<u32>,
    pub echelon: TrailingEchelon,
    pub representatives: Vec<u32>,
}

/// The quotient `OPol_{2n} / OI_n` with an explicit free basis and normal
/// forms, one block per word length.
pub struct QuotientBasis {
    pub n: usize,
    pub blocks: Vec<DegreeBlock>,
}

impl QuotientBasis {
    pub fn graded_rank(&self) -> crate::even::GradedRank {
        let mut map = BTreeMap::new();
        for b in &self.blocks {
            if !b.representatives.is_empty() {
                *map.entry(2 * b.word_length as i64).or_insert(0) += b.representatives.len();
            }
        }
        crate::even::GradedRank(map)
    }

    pub fn total_rank(&self) -> usize {
        self.blocks.iter().map(|b| b.representatives.len()).sum()
    }

    /// Basis monomials across all degrees, low degree first.
    pub fn basis_monomials(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| b.representatives.iter().copied()).collect()
    }

    /// The canonical representative of a polynomial modulo the ideal.
    pub fn normal_form(&self, p: &SkewPoly) -> SkewPoly {
        let mut out = SkewPoly::zero(p.nvars());
        // Reduce degree by degree (the ideal is homogeneous).
        for block in &self.blocks {
            let mut vec = vec![BigInt::zero(); block.monomials.len()];
            let mut any = false;
            for (m, c) in p.terms() {
                if m.count_ones() as usize == block.word_length {
                    let pos = block.monomials.binary_search(m).expect("monomial in range");
                    vec[pos] = c.clone();
                    any = true;
                }
            }
            if !any {
                continue;
            }
            let red = block.echelon.reduce(vec);
            for (pos, c) in red.into_iter().enumerate() {
                out.add_term(block.monomials[pos], c);
            }
        }
        out
    }
}

/// The ideal's relation rows in one word-length: all left monomial multiples
/// of the generators, as coefficient rows over the degree's monomial list.
pub fn relation_rows(n: usize, ell: usize) -> (Vec<u32>, Vec<Vec<BigInt>>) {
    let nvars = 2 * n;
    let monomials: Vec<u32> =
        (0u32..(1 << nvars)).filter(|m| m.count_ones() as usize == ell).collect();
    let mut rows = Vec::new();
    for g in &all_generators(n) {
        let Some(r) = g.word_length() else { continue };
        let r = r as usize;
        if r > ell {
            continue;
        }
        let mult = ell - r;
        for m in 0u32..(1 << nvars) {
            if m.count_ones() as usize != mult {
                continue;
            }
            let prod = SkewPoly::monomial(m, nvars).mul(g);
            if prod.is_zero() {
                continue;
            }
            let mut row = vec![BigInt::zero(); monomials.len()];
            for (mm, c) in prod.terms() {
                let pos = monomials.binary_search(mm).expect("degree bookkeeping");
                row[pos] = c.clone();
            }
            rows.push(row);
        }
    }
    (monomials, rows)
}

/// Builds the quotient: spans the ideal degree by degree with all left
/// monomial multiples of the generators, reduces to echelon form, and checks
/// freeness by Smith normal form (any nonunit elementary divisor aborts).
pub fn quotient_basis(n: usize) -> Result<QuotientBasis, SpringerError> {
    let nvars = 2 * n;
    let mut blocks = Vec::new();
    for ell in 0..=nvars {
        let (monomials, raw_rows) = relation_rows(n, ell);
        let mut echelon = TrailingEchelon::new(monomials.len());
        for row in &raw_rows {
            echelon.insert(row.clone());
        }
        // Freeness: all elementary divisors of the relation matrix are units.
        if !raw_rows.is_empty() {
            let snf = smith_normal_form(&Mat::from_rows(raw_rows));
            for d in snf.divisors() {
                if !crate::linalg::EucRing::is_unit(&d) {
                    return Err(SpringerError::Torsion(d, ell));
                }
            }
            if snf.rank != echelon.rank() {
                return Err(SpringerError::NonUnitPivot(ell));
            }
        }
        echelon.finalize().map_err(|_| SpringerError::NonUnitPivot(ell))?;
        let pivots: std::collections::BTreeSet<usize> = echelon.pivot_cols().into_iter().collect();
        let representatives: Vec<u32> = monomials
            .iter()
            .enumerate()
            .filter(|(i, _)| !pivots.contains(i))
            .map(|(_, m)| *m)
            .collect();
        blocks.push(DegreeBlock { word_length: ell, monomials, echelon, representatives });
    }
    let qb = QuotientBasis { n, blocks };
    let want = binomial(2 * n, n);
    let got = qb.total_rank();
    if got != want {
        return Err(SpringerError::RankMismatch { got, want });
    }
    Ok(qb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_examples() {
        // n = 2, S = {1,2,3,4}, r = 1: x1 - x2 + x3 - x4.
        let e = epsilon(2, 1, &[1, 2, 3, 4]).unwrap();
        let mut want = SkewPoly::var(1, 4);
        want = want.sub(&SkewPoly::var(2, 4));
        want = want.add(&SkewPoly::var(3, 4));
        want = want.sub(&SkewPoly::var(4, 4));
        assert_eq!(e, want);
        // n = 2, S = {i,j,k}, r = 2: -xixj + xixk - xjxk.
        for s in [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]] {
            let e = epsilon(2, 2, &s).unwrap();
            let m = |i: usize, j: usize| SkewPoly::var(i, 4).mul(&SkewPoly::var(j, 4));
            let want = m(s[0], s[1]).neg().add(&m(s[0], s[2])).sub(&m(s[1], s[2]));
            assert_eq!(e, want, "S = {s:?}");
        }
        // n = 2, S = {1,2,3,4}, r = 4: x1x2x3x4.
        let e = epsilon(2, 4, &[1, 2, 3, 4]).unwrap();
        assert_eq!(e, SkewPoly::monomial(0b1111, 4));
    }

    #[test]
    fn epsilon_rejects_bad_parameters() {
        assert!(epsilon(2, 1, &[1, 2, 3]).is_err()); // r below range for k = 1
        assert!(epsilon(2, 4, &[1, 2, 3]).is_err()); // r above range for k = 1
        assert!(epsilon(2, 2, &[1, 2]).is_err()); // |S| = n is not admissible
        assert!(epsilon(2, 2, &[1, 1, 3]).is_err()); // repeats
    }

    #[test]
    fn quotient_ranks() {
        let q1 = quotient_basis(1).unwrap();
        assert_eq!(q1.total_rank(), 2);
        assert_eq!(q1.basis_monomials(), vec![0b0, 0b1]);
        let q2 = quotient_basis(2).unwrap();
        assert_eq!(q2.total_rank(), 6);
        assert_eq!(q2.graded_rank().to_poly_string(), "1 + 3q^2 + 2q^4");
        let q3 = quotient_basis(3).unwrap();
        assert_eq!(q3.total_rank(), 20);
    }

    #[test]
    fn generators_reduce_to_zero() {
        for n in 1..=2 {
            let qb = quotient_basis(n).unwrap();
            for g in all_generators(n) {
                assert!(qb.normal_form(&g).is_zero(), "generator {g} survived");
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let qb = quotient_basis(2).unwrap();
        // x4 = x1 - x2 + x3 via the degree-2 relation.
        let nf = qb.normal_form(&SkewPoly::var(4, 4));
        let want = SkewPoly::var(1, 4).sub(&SkewPoly::var(2, 4)).add(&SkewPoly::var(3, 4));
        assert_eq!(nf, want);
        assert!(qb.normal_form(&SkewPoly::zero(4)).is_zero());
        // Idempotent and linear.
        let p = SkewPoly::monomial(0b0110, 4).add(&SkewPoly::var(2, 4));
        let nf1 = qb.normal_form(&p);
        assert_eq!(qb.normal_form(&nf1), nf1);
    }

    #[test]
    fn skew_sign_rules() {
        let x1 = SkewPoly::var(1, 4);
        let x2 = SkewPoly::var(2, 4);
        assert_eq!(x1.mul(&x2), x2.mul(&x1).neg());
        assert!(x1.mul(&x1).is_zero());
    }
}
