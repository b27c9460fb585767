//! The even arc algebra built from the rank-2 Frobenius algebra
//! `Z[X]/(X^2)`: merges multiply, splits comultiply with
//! `D(1) = X(x)1 + 1(x)X` and `D(X) = X(x)X`. Used as the sign-free shadow
//! of the odd algebra (they agree mod 2) and for its center.

use crate::chronology::{Chronology, ChoiceC, Orientation};
use crate::diagram::Arena;
use crate::linalg::{smith_normal_form, Mat};
use crate::tqft::{Executor, TqftValue};
use num_bigint::BigInt;
use num_traits::Zero;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

/// An element of `A^{(x) m}`: monomials mark the tensor factors carrying `X`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrobElement {
    circles: u64,
    terms: BTreeMap<u64, BigInt>,
}

impl FrobElement {
    pub fn zero(circles: u64) -> Self {
        FrobElement { circles, terms: BTreeMap::new() }
    }

    pub fn unit(circles: u64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, BigInt::from(1));
        FrobElement { circles, terms }
    }

    pub fn monomial(mask: u64, circles: u64) -> Self {
        assert_eq!(mask & !circles, 0);
        let mut terms = BTreeMap::new();
        terms.insert(mask, BigInt::from(1));
        FrobElement { circles, terms }
    }

    pub fn circles(&self) -> u64 {
        self.circles
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mask: u64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &FrobElement) -> FrobElement {
        assert_eq!(self.circles, other.circles);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> FrobElement {
        let mut out = FrobElement::zero(self.circles);
        if c.is_zero() {
            return out;
        }
        for (m, k) in &self.terms {
            out.terms.insert(*m, k * c);
        }
        out
    }

    /// Degree of a monomial with `j` marked factors on `m` circles: `2j - m`
    /// (plus the ambient shift, handled by callers).
    pub fn qdeg_raw(&self) -> Option<i64> {
        let m = self.circles.count_ones() as i64;
        let mut degs = self.terms.keys().map(|t| 2 * t.count_ones() as i64 - m);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

impl TqftValue for FrobElement {
    fn merge(&mut self, survivor: u32, dead: u32) {
        let sbit = 1u64 << survivor;
        let dbit = 1u64 << dead;
        let mut out = FrobElement::zero(self.circles & !dbit);
        for (m, c) in &self.terms {
            if m & sbit != 0 && m & dbit != 0 {
                continue; // X.X = 0
            }
            let mut mask = m & !dbit;
            if m & dbit != 0 {
                mask |= sbit;
            }
            out.add_term(mask, c.clone());
        }
        *self = out;
    }

    fn split(&mut self, left: u32, right: u32, _orientation: Orientation) {
        let lbit = 1u64 << left;
        let rbit = 1u64 << right;
        let mut out = FrobElement::zero(self.circles | rbit);
        for (m, c) in &self.terms {
            if m & lbit != 0 {
                // D(X) = X (x) X
                out.add_term(m | rbit, c.clone());
            } else {
                // D(1) = X (x) 1 + 1 (x) X
                out.add_term(m | lbit, c.clone());
                out.add_term(m | rbit, c.clone());
            }
        }
        *self = out;
    }

    fn reindex(&mut self, map: &BTreeMap<u32, u32>, count: u32) {
        let circles = if count == 64 { u64::MAX } else { (1u64 << count) - 1 };
        let mut out = FrobElement::zero(circles);
        for (m, c) in &self.terms {
            let mut mask = 0u64;
            let mut mm = *m;
            while mm != 0 {
                let g = mm.trailing_zeros();
                mask |= 1 << map[&g];
                mm &= mm - 1;
            }
            out.add_term(mask, c.clone());
        }
        *self = out;
    }
}

/// Element of `H^n`: nonzero pieces by `(upper, lower)` matching IDs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvenElement {
    n: usize,
    pieces: BTreeMap<(usize, usize), FrobElement>,
}

impl EvenElement {
    pub fn zero(n: usize) -> Self {
        EvenElement { n, pieces: BTreeMap::new() }
    }

    pub fn basis(arena: &Arena, upper: usize, lower: usize, mask: u64) -> Self {
        let m = arena.closure(upper, lower).circle_count() as u32;
        let mut pieces = BTreeMap::new();
        pieces.insert((upper, lower), FrobElement::monomial(mask, (1u64 << m) - 1));
        EvenElement { n: arena.n(), pieces }
    }

    pub fn set_piece(&mut self, upper: usize, lower: usize, e: FrobElement) {
        if e.is_zero() {
            self.pieces.remove(&(upper, lower));
        } else {
            self.pieces.insert((upper, lower), e);
        }
    }

    pub fn piece(&self, upper: usize, lower: usize) -> Option<&FrobElement> {
        self.pieces.get(&(upper, lower))
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&(usize, usize), &FrobElement)> {
        self.pieces.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn add_assign(&mut self, other: &EvenElement) {
        for (&k, e) in &other.pieces {
            let merged = match self.pieces.get(&k) {
                Some(mine) => mine.add(e),
                None => e.clone(),
            };
            if merged.is_zero() {
                self.pieces.remove(&k);
            } else {
                self.pieces.insert(k, merged);
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> EvenElement {
        let pieces = self.pieces.iter().map(|(&k, e)| (k, e.scale(c))).collect();
        EvenElement { n: self.n, pieces }
    }

    pub fn neg(&self) -> EvenElement {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &EvenElement) -> EvenElement {
        let mut out = self.clone();
        out.add_assign(&other.neg());
        out
    }
}

/// The even arc algebra `H^n`, with structure constants cached per triple.
pub struct EvenArcAlgebra<'a> {
    arena: &'a Arena,
    choice: ChoiceC,
    tables: RefCell<HashMap<(usize, usize, usize), Rc<Vec<Vec<FrobElement>>>>>,
}

impl<'a> EvenArcAlgebra<'a> {
    pub fn new(arena: &'a Arena) -> Self {
        EvenArcAlgebra { arena, choice: ChoiceC::canonical(arena), tables: RefCell::new(HashMap::new()) }
    }

    pub fn arena(&self) -> &Arena {
        self.arena
    }

    pub fn n(&self) -> usize {
        self.arena.n()
    }

    fn execute(&self, chron: &Chronology, x: &FrobElement) -> FrobElement {
        let (c, b, a) = chron.triple;
        let mut exec =
            Executor::new(vec![self.arena.closure(c, b).clone(), self.arena.closure(b, a).clone()]);
        let mut v = x.clone();
        exec.run(0, &chron.steps, &mut v).expect("even execution");
        exec.finalize(self.arena.closure(c, a), &mut v).expect("even finalize");
        v
    }

    pub fn triple_table(&self, c: usize, b: usize, a: usize) -> Rc<Vec<Vec<FrobElement>>> {
        if let Some(t) = self.tables.borrow().get(&(c, b, a)) {
            return Rc::clone(t);
        }
        let m_up = self.arena.closure(c, b).circle_count() as u32;
        let m_lo = self.arena.closure(b, a).circle_count() as u32;
        let chron = self.choice.get(c, b, a);
        let mut products = Vec::new();
        for mx in 0..(1u64 << m_up) {
            let mut row = Vec::new();
            for my in 0..(1u64 << m_lo) {
                // x on the upper circles, y shifted onto the lower slots.
                let mask = mx | (my << m_up);
                let x = FrobElement::monomial(mask, (1u64 << (m_up + m_lo)) - 1);
                row.push(self.execute(chron, &x));
            }
            products.push(row);
        }
        let t = Rc::new(products);
        self.tables.borrow_mut().insert((c, b, a), Rc::clone(&t));
        t
    }

    pub fn multiply_basis(&self, x: (usize, usize, u64), y: (usize, usize, u64)) -> EvenElement {
        let (c, bx, mx) = x;
        let (by, a, my) = y;
        if bx != by {
            return EvenElement::zero(self.n());
        }
        let table = self.triple_table(c, bx, a);
        let mut out = EvenElement::zero(self.n());
        out.set_piece(c, a, table[mx as usize][my as usize].clone());
        out
    }

    pub fn multiply(&self, x: &EvenElement, y: &EvenElement) -> EvenElement {
        let mut out = EvenElement::zero(self.n());
        for (&(c, bx), ex) in x.pieces() {
            for (&(by, a), ey) in y.pieces() {
                if bx != by {
                    continue;
                }
                let table = self.triple_table(c, bx, a);
                let mut acc = FrobElement::zero(
                    (1u64 << self.arena.closure(c, a).circle_count()) - 1,
                );
                for (mx, cx) in ex.terms() {
                    for (my, cy) in ey.terms() {
                        acc = acc.add(&table[*mx as usize][*my as usize].scale(&(cx * cy)));
                    }
                }
                let mut t = EvenElement::zero(self.n());
                t.set_piece(c, a, acc);
                out.add_assign(&t);
            }
        }
        out
    }

    pub fn basis_vectors(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for upper in 0..self.arena.size() {
            for lower in 0..self.arena.size() {
                let m = self.arena.closure(upper, lower).circle_count() as u32;
                for mask in 0..(1u64 << m) {
                    out.push((upper, lower, mask));
                }
            }
        }
        out
    }

    pub fn unit(&self) -> EvenElement {
        let mut out = EvenElement::zero(self.n());
        for a in 0..self.arena.size() {
            let m = self.arena.closure(a, a).circle_count() as u32;
            out.set_piece(a, a, FrobElement::unit((1u64 << m) - 1));
        }
        out
    }
}

/// Graded rank as coefficients by quantum degree (only even gaps occur).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedRank(pub BTreeMap<i64, usize>);

impl GradedRank {
    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    /// Renders as a polynomial in q, e.g. "1 + 3q^2 + 2q^4".
    pub fn to_poly_string(&self) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (&d, &r) in &self.0 {
            if r == 0 {
                continue;
            }
            let part = match (d, r) {
                (0, r) => format!("{r}"),
                (1, 1) => "q".into(),
                (1, r) => format!("{r}q"),
                (d, 1) => format!("q^{d}"),
                (d, r) => format!("{r}q^{d}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

/// The center of `H^n`: solves `zx = xz` over all basis `x` with `z` running
/// over the full algebra basis, degree by degree. Returns the kernel vectors
/// (coordinates in the full basis) with their degrees.
pub struct EvenCenter {
    pub basis_index: Vec<(usize, usize, u64)>,
    pub degrees: Vec<i64>,
    pub vectors: Vec<(i64, Vec<BigInt>)>,
}

impl EvenCenter {
    pub fn graded_rank(&self) -> GradedRank {
        let mut map = BTreeMap::new();
        for (d, _) in &self.vectors {
            *map.entry(*d).or_insert(0) += 1;
        }
        GradedRank(map)
    }
}

pub fn even_center(alg: &EvenArcAlgebra) -> EvenCenter {
    let arena = alg.arena();
    let n = arena.n() as i64;
    let all = alg.basis_vectors();
    let deg_of = |&(u, l, mask): &(usize, usize, u64)| {
        2 * (mask.count_ones() as i64) - arena.closure(u, l).circle_count() as i64 + n
    };
    let degrees: Vec<i64> = all.iter().map(deg_of).collect();
    let mut vectors = Vec::new();
    let mut degs: Vec<i64> = degrees.clone();
    degs.sort();
    degs.dedup();
    for &d in &degs {
        let idx: Vec<usize> = (0..all.len()).filter(|&i| degrees[i] == d).collect();
        if idx.is_empty() {
            continue;
        }
        // Commutation with every basis element, projected on the full basis.
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for &x in &all {
            let xe = EvenElement::basis(arena, x.0, x.1, x.2);
            let mut cols: Vec<EvenElement> = Vec::new();
            for &zi in &idx {
                let z = all[zi];
                let ze = EvenElement::basis(arena, z.0, z.1, z.2);
                cols.push(alg.multiply(&ze, &xe).sub(&alg.multiply(&xe, &ze)));
            }
            // Rows indexed by output basis elements appearing anywhere.
            let mut out_keys = std::collections::BTreeSet::new();
            for col in &cols {
                for (&(u, l), e) in col.pieces() {
                    for (m, _) in e.terms() {
                        out_keys.insert((u, l, *m));
                    }
                }
            }
            for key in out_keys {
                let row: Vec<BigInt> = cols
                    .iter()
                    .map(|col| {
                        col.piece(key.0, key.1)
                            .and_then(|e| e.terms().find(|(m, _)| **m == key.2).map(|(_, c)| c.clone()))
                            .unwrap_or_else(BigInt::zero)
                    })
                    .collect();
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            for &zi in &idx {
                let mut v = vec![BigInt::zero(); all.len()];
                v[zi] = BigInt::from(1);
                vectors.push((d, v));
            }
            continue;
        }
        let mat = Mat::from_rows(rows);
        let snf = smith_normal_form(&mat);
        for k in snf.kernel_basis() {
            let mut v = vec![BigInt::zero(); all.len()];
            for (pos, &zi) in idx.iter().enumerate() {
                v[zi] = k[pos].clone();
            }
            vectors.push((d, v));
        }
    }
    EvenCenter { basis_index: all, degrees, vectors }
}

/// Compares the structure constants of the odd and even algebras mod 2 under
/// the basis identification (X-marked circles <-> wedge factors). Returns the
/// number of basis pairs compared.
pub fn mod2_structure_agreement(
    odd: &crate::arc::OddArcAlgebra,
    even: &EvenArcAlgebra,
) -> Result<usize, String> {
    let arena = odd.arena();
    let size = arena.size();
    let mut compared = 0;
    for c in 0..size {
        for b in 0..size {
            for a in 0..size {
                let ot = odd.triple_table(c, b, a);
                let et = even.triple_table(c, b, a);
                let m_up = arena.closure(c, b).circle_count() as u32;
                let m_lo = arena.closure(b, a).circle_count() as u32;
                for mx in 0..(1usize << m_up) {
                    for my in 0..(1usize << m_lo) {
                        let odd_mod2 = ot.products[mx][my].mod2_terms();
                        let even_mod2: std::collections::BTreeMap<u64, u8> = et[mx][my]
                            .terms()
                            .filter(|(_, co)| !(*co % BigInt::from(2)).is_zero())
                            .map(|(m, _)| (*m, 1))
                            .collect();
                        if odd_mod2 != even_mod2 {
                            return Err(format!(
                                "triple ({c},{b},{a}), masks ({mx:#b},{my:#b}): odd {odd_mod2:?} vs even {even_mod2:?}"
                            ));
                        }
                        compared += 1;
                    }
                }
            }
        }
    }
    Ok(compared)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_rules() {
        // X.X = 0 under a merge.
        let mut x = FrobElement::monomial(0b11, 0b11);
        x.merge(0, 1);
        assert!(x.is_zero());
        // 1.X = X.
        let mut x = FrobElement::monomial(0b10, 0b11);
        x.merge(0, 1);
        assert_eq!(x, FrobElement::monomial(0b1, 0b1));
        // D(1) = X(x)1 + 1(x)X.
        let mut u = FrobElement::unit(0b1);
        u.split(0, 1, Orientation::LeftToRight);
        let expect = FrobElement::monomial(0b01, 0b11).add(&FrobElement::monomial(0b10, 0b11));
        assert_eq!(u, expect);
        // D(X) = X(x)X.
        let mut x = FrobElement::monomial(0b1, 0b1);
        x.split(0, 1, Orientation::LeftToRight);
        assert_eq!(x, FrobElement::monomial(0b11, 0b11));
    }

    #[test]
    fn unit_law_and_idempotents() {
        let arena = Arena::new(2).unwrap();
        let alg = EvenArcAlgebra::new(&arena);
        let unit = alg.unit();
        for v in alg.basis_vectors() {
            let x = EvenElement::basis(&arena, v.0, v.1, v.2);
            assert_eq!(alg.multiply(&unit, &x), x);
            assert_eq!(alg.multiply(&x, &unit), x);
        }
    }

    #[test]
    fn one_ba_times_one_ab_is_delta() {
        // 1_ba . 1_ab in W(b)b: one merge then one split applied to the unit:
        // X on the outer + X on the inner circle.
        let arena = Arena::new(2).unwrap();
        let alg = EvenArcAlgebra::new(&arena);
        let got = alg.multiply_basis((1, 0, 0), (0, 1, 0));
        let expect = FrobElement::monomial(0b01, 0b11).add(&FrobElement::monomial(0b10, 0b11));
        assert_eq!(got.piece(1, 1).unwrap(), &expect);
    }

    #[test]
    fn even_multiplication_is_associative() {
        for n in 1..=2 {
            let arena = Arena::new(n).unwrap();
            let alg = EvenArcAlgebra::new(&arena);
            let basis = alg.basis_vectors();
            for &x in &basis {
                for &y in &basis {
                    for &z in &basis {
                        let xe = EvenElement::basis(&arena, x.0, x.1, x.2);
                        let ye = EvenElement::basis(&arena, y.0, y.1, y.2);
                        let ze = EvenElement::basis(&arena, z.0, z.1, z.2);
                        let l = alg.multiply(&alg.multiply(&xe, &ye), &ze);
                        let r = alg.multiply(&xe, &alg.multiply(&ye, &ze));
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn center_ranks() {
        // H^1 = A is commutative: rank 2.
        let arena = Arena::new(1).unwrap();
        let alg = EvenArcAlgebra::new(&arena);
        let z = even_center(&alg);
        assert_eq!(z.graded_rank().total(), 2);
        // Z(H^2) has graded rank 1 + 3q^2 + 2q^4.
        let arena = Arena::new(2).unwrap();
        let alg = EvenArcAlgebra::new(&arena);
        let z = even_center(&alg);
        assert_eq!(z.graded_rank().to_poly_string(), "1 + 3q^2 + 2q^4");
    }
}
