//! The odd arc algebra: pieces indexed by pairs of matchings, multiplication
//! through contraction cobordisms, the diagrammatic basis and the rank-2
//! multiplication tables.

use crate::chronology::ChoiceC;
use crate::coeff::GaussInt;
use crate::diagram::Arena;
use crate::exterior::{ExtElement, QDeg};
use crate::tqft::{multiply_pieces, split_count};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

/// A basis vector of one piece: the diagram `W(upper)lower` with the circles
/// in `mask` drawn plain (wedge factors in left-to-right order).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct BasisVector {
    pub upper: usize,
    pub lower: usize,
    pub mask: u64,
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:", self.upper, self.lower)?;
        if self.mask == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        let mut m = self.mask;
        while m != 0 {
            let g = m.trailing_zeros();
            if !first {
                write!(f, "^")?;
            }
            write!(f, "g{}", g + 1)?;
            first = false;
            m &= m - 1;
        }
        Ok(())
    }
}

/// An element of `OH^n_C`: finitely many nonzero pieces.
#[derive(Clone, PartialEq, Eq)]
pub struct ArcElement {
    n: usize,
    pieces: BTreeMap<(usize, usize), ExtElement>,
}

impl ArcElement {
    pub fn zero(n: usize) -> Self {
        ArcElement { n, pieces: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The basis element with the given plain-circle set.
    pub fn basis(arena: &Arena, v: BasisVector) -> Self {
        let m = arena.closure(v.upper, v.lower).circle_count() as u32;
        let gens = (1u64 << m) - 1;
        assert_eq!(v.mask & !gens, 0, "mask outside the circles of the piece");
        let mut pieces = BTreeMap::new();
        pieces.insert((v.upper, v.lower), ExtElement::monomial(v.mask, gens, arena.n() as i64));
        ArcElement { n: arena.n(), pieces }
    }

    /// The unit: the sum of the units of all diagonal pieces.
    pub fn unit(arena: &Arena) -> Self {
        let mut pieces = BTreeMap::new();
        for a in 0..arena.size() {
            let m = arena.closure(a, a).circle_count() as u32;
            pieces.insert((a, a), ExtElement::unit((1u64 << m) - 1, arena.n() as i64));
        }
        ArcElement { n: arena.n(), pieces }
    }

    pub fn set_piece(&mut self, upper: usize, lower: usize, e: ExtElement) {
        if e.is_zero() {
            self.pieces.remove(&(upper, lower));
        } else {
            self.pieces.insert((upper, lower), e);
        }
    }

    pub fn piece(&self, upper: usize, lower: usize) -> Option<&ExtElement> {
        self.pieces.get(&(upper, lower))
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&(usize, usize), &ExtElement)> {
        self.pieces.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn add_assign(&mut self, other: &ArcElement) {
        assert_eq!(self.n, other.n);
        for (&key, e) in &other.pieces {
            match self.pieces.get_mut(&key) {
                Some(mine) => {
                    let sum = mine.add(e).expect("same piece, same generators");
                    if sum.is_zero() {
                        self.pieces.remove(&key);
                    } else {
                        *mine = sum;
                    }
                }
                None => {
                    self.pieces.insert(key, e.clone());
                }
            }
        }
    }

    pub fn add(&self, other: &ArcElement) -> ArcElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn neg(&self) -> ArcElement {
        self.scale(&GaussInt::from_int(-1))
    }

    pub fn sub(&self, other: &ArcElement) -> ArcElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussInt) -> ArcElement {
        if c.is_zero() {
            return ArcElement::zero(self.n);
        }
        let pieces = self.pieces.iter().map(|(&k, e)| (k, e.scale(c))).collect();
        ArcElement { n: self.n, pieces }
    }

    /// Quantum degree when all pieces agree on it.
    pub fn qdeg(&self) -> QDeg {
        let mut degs = self.pieces.values().map(ExtElement::qdeg);
        let Some(first) = degs.next() else { return QDeg::Zero };
        if degs.all(|d| d == first) {
            first
        } else {
            QDeg::Inhomogeneous
        }
    }

    /// Word-length parity; `None` if mixed.
    pub fn parity(&self) -> Option<u8> {
        let mut ps = self.pieces.values().map(ExtElement::parity);
        let Some(first) = ps.next() else { return Some(0) };
        let first = first?;
        for p in ps {
            if p? != first {
                return None;
            }
        }
        Some(first)
    }
}

impl fmt::Display for ArcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(b, a), e) in &self.pieces {
            if !first {
                write!(f, "  ")?;
            }
            write!(f, "[{b}:{a}| {e}]")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ArcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Structure constants of one triple `(c, b, a)`: products of all basis
/// monomial pairs, already reindexed onto `close(c, a)`.
pub struct TripleTable {
    pub products: Vec<Vec<ExtElement>>,
}

/// The odd arc algebra for a fixed choice `C`, with cached structure
/// constants per triple (built on first use, then shared read-only).
pub struct OddArcAlgebra<'a> {
    arena: &'a Arena,
    choice: ChoiceC,
    tables: RefCell<HashMap<(usize, usize, usize), Rc<TripleTable>>>,
}

impl<'a> OddArcAlgebra<'a> {
    pub fn new(arena: &'a Arena, choice: ChoiceC) -> Self {
        assert_eq!(arena.n(), choice.n());
        OddArcAlgebra { arena, choice, tables: RefCell::new(HashMap::new()) }
    }

    pub fn canonical(arena: &'a Arena) -> Self {
        OddArcAlgebra::new(arena, ChoiceC::canonical(arena))
    }

    pub fn arena(&self) -> &Arena {
        self.arena
    }

    pub fn choice(&self) -> &ChoiceC {
        &self.choice
    }

    pub fn n(&self) -> usize {
        self.arena.n()
    }

    pub fn triple_table(&self, c: usize, b: usize, a: usize) -> Rc<TripleTable> {
        if let Some(t) = self.tables.borrow().get(&(c, b, a)) {
            return Rc::clone(t);
        }
        let chron = self.choice.get(c, b, a);
        let m_up = self.arena.closure(c, b).circle_count() as u32;
        let m_lo = self.arena.closure(b, a).circle_count() as u32;
        let n = self.arena.n() as i64;
        let mut products = Vec::with_capacity(1 << m_up);
        for mx in 0..(1u64 << m_up) {
            let x = ExtElement::monomial(mx, (1u64 << m_up) - 1, n);
            let mut row = Vec::with_capacity(1 << m_lo);
            for my in 0..(1u64 << m_lo) {
                let y = ExtElement::monomial(my, (1u64 << m_lo) - 1, n);
                let prod = multiply_pieces(self.arena, chron, &x, &y).expect("structure constant");
                crate::tqft::assert_degree_preserving(&x, &y, &prod);
                row.push(prod);
            }
            products.push(row);
        }
        let table = Rc::new(TripleTable { products });
        self.tables.borrow_mut().insert((c, b, a), Rc::clone(&table));
        table
    }

    /// Product of two basis vectors (zero unless the middle matchings agree).
    pub fn multiply_basis(&self, x: BasisVector, y: BasisVector) -> ArcElement {
        if x.lower != y.upper {
            return ArcElement::zero(self.n());
        }
        let table = self.triple_table(x.upper, x.lower, y.lower);
        let piece = table.products[x.mask as usize][y.mask as usize].clone();
        let mut out = ArcElement::zero(self.n());
        out.set_piece(x.upper, y.lower, piece);
        out
    }

    /// Bilinear extension of the basis product.
    pub fn multiply(&self, x: &ArcElement, y: &ArcElement) -> ArcElement {
        let mut out = ArcElement::zero(self.n());
        for (&(c, bx), ex) in x.pieces() {
            for (&(by, a), ey) in y.pieces() {
                if bx != by {
                    continue;
                }
                let table = self.triple_table(c, bx, a);
                let mut acc: Option<ExtElement> = None;
                for (mx, cx) in ex.terms() {
                    for (my, cy) in ey.terms() {
                        let contrib = table.products[*mx as usize][*my as usize].scale(&(cx * cy));
                        acc = Some(match acc {
                            None => contrib,
                            Some(prev) => prev.add(&contrib).expect("same piece"),
                        });
                    }
                }
                if let Some(p) = acc {
                    if !p.is_zero() {
                        let mut t = ArcElement::zero(self.n());
                        t.set_piece(c, a, p);
                        out.add_assign(&t);
                    }
                }
            }
        }
        out
    }

    /// All basis vectors of the algebra, pieces in `(upper, lower)` order.
    pub fn basis_vectors(&self) -> Vec<BasisVector> {
        let mut out = Vec::new();
        for upper in 0..self.arena.size() {
            for lower in 0..self.arena.size() {
                let m = self.arena.closure(upper, lower).circle_count() as u32;
                for mask in 0..(1u64 << m) {
                    out.push(BasisVector { upper, lower, mask });
                }
            }
        }
        out
    }

    pub fn basis_element(&self, v: BasisVector) -> ArcElement {
        ArcElement::basis(self.arena, v)
    }

    pub fn unit(&self) -> ArcElement {
        ArcElement::unit(self.arena)
    }

    pub fn split_count(&self, c: usize, b: usize, a: usize) -> usize {
        split_count(self.arena, c, b, a)
    }
}

/// The parity of a piece basis vector, cross-checked against the degree
/// formula `(deg - n + |W(b)a|)/2`.
pub fn basis_parity(arena: &Arena, v: BasisVector) -> u8 {
    let m = arena.closure(v.upper, v.lower).circle_count() as i64;
    let k = v.mask.count_ones() as i64;
    let deg = 2 * k - m + arena.n() as i64;
    let p = (deg - arena.n() as i64 + m) / 2;
    debug_assert_eq!(p, k);
    (p % 2) as u8
}

/// One multiplication table of `OH^2_C` in the layout of the rank-2 example:
/// rows are the basis of `*(OH^2)s`, columns the basis of `s(OH^2)*`.
pub struct Oh2Table {
    pub side: usize,
    pub rows: Vec<BasisVector>,
    pub cols: Vec<BasisVector>,
    pub entries: Vec<Vec<ArcElement>>,
}

/// Builds the `OH^2` table for `side` (0 = the parallel-arcs matching `a`,
/// 1 = the nested matching `b`).
pub fn oh2_table(alg: &OddArcAlgebra, side: usize) -> Oh2Table {
    assert_eq!(alg.n(), 2, "tables are the rank-2 example");
    let s = side;
    let t = 1 - side;
    let mut rows = Vec::new();
    for mask in 0..4u64 {
        rows.push(BasisVector { upper: s, lower: s, mask });
    }
    for mask in 0..2u64 {
        rows.push(BasisVector { upper: t, lower: s, mask });
    }
    let mut cols = Vec::new();
    for mask in 0..4u64 {
        cols.push(BasisVector { upper: s, lower: s, mask });
    }
    for mask in 0..2u64 {
        cols.push(BasisVector { upper: s, lower: t, mask });
    }
    let entries = rows
        .iter()
        .map(|&x| cols.iter().map(|&y| alg.multiply_basis(x, y)).collect())
        .collect();
    Oh2Table { side, rows, cols, entries }
}

/// The nonassociativity witness: `x = b1` in the nested diagonal piece,
/// `y` and `z` the two off-diagonal units (with extra parallel arcs appended
/// for n > 2). Returns `(x, y, z, (xy)z, x(yz))`.
pub fn nonassoc_witness(
    alg: &OddArcAlgebra,
) -> (ArcElement, ArcElement, ArcElement, ArcElement, ArcElement) {
    let arena = alg.arena();
    let n = arena.n();
    assert!(n >= 2, "nonassociativity needs n >= 2");
    let mut a_arcs = vec![(1, 2), (3, 4)];
    let mut b_arcs = vec![(1, 4), (2, 3)];
    for k in 2..n {
        a_arcs.push((2 * k + 1, 2 * k + 2));
        b_arcs.push((2 * k + 1, 2 * k + 2));
    }
    let a_id = arena
        .id_of(&crate::diagram::Matching::new(n, a_arcs).unwrap())
        .expect("padded parallel matching");
    let b_id = arena
        .id_of(&crate::diagram::Matching::new(n, b_arcs).unwrap())
        .expect("padded nested matching");
    // b1 is the outer circle of W(b)b, first in left-to-right order.
    let x = alg.basis_element(BasisVector { upper: b_id, lower: b_id, mask: 0b1 });
    let y = alg.basis_element(BasisVector { upper: b_id, lower: a_id, mask: 0 });
    let z = alg.basis_element(BasisVector { upper: a_id, lower: b_id, mask: 0 });
    let xy_z = alg.multiply(&alg.multiply(&x, &y), &z);
    let x_yz = alg.multiply(&x, &alg.multiply(&y, &z));
    (x, y, z, xy_z, x_yz)
}

/// Verifies that every diagonal piece multiplies as the plain exterior
/// algebra (no split terms); returns the offending `(a, mask_x, mask_y)` if not.
pub fn diagonal_subalgebra_check(alg: &OddArcAlgebra) -> Result<(), (usize, u64, u64)> {
    let arena = alg.arena();
    for a in 0..arena.size() {
        let m = arena.closure(a, a).circle_count() as u32;
        let gens = (1u64 << m) - 1;
        let n = arena.n() as i64;
        for mx in 0..(1u64 << m) {
            for my in 0..(1u64 << m) {
                let prod = alg.multiply_basis(
                    BasisVector { upper: a, lower: a, mask: mx },
                    BasisVector { upper: a, lower: a, mask: my },
                );
                let expected = ExtElement::monomial(mx, gens, n)
                    .wedge(&ExtElement::monomial(my, gens, n))
                    .unwrap();
                let got = prod.piece(a, a).cloned().unwrap_or_else(|| ExtElement::zero(gens, n));
                if got != expected {
                    return Err((a, mx, my));
                }
            }
        }
    }
    Ok(())
}
