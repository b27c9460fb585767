//! Exact linear algebra: Smith normal form over Euclidean rings, integer
//! echelon reduction, GF(2) elimination and a complete `Z/4` linear solver.
//!
//! Everything here is dense; the matrices arising from arc algebras at desk
//! scale (n <= 4) are small enough that simplicity wins over sparsity.

use crate::coeff::GaussInt;
use num_bigint::BigInt;
use num_traits::Signed;

/// Ring with a Euclidean division, enough to drive Smith normal form.
pub trait EucRing: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Euclidean division: `self = q*d + r` with `size(r) < size(d)`.
    fn div_rem(&self, d: &Self) -> (Self, Self);
    /// The Euclidean size function (nonnegative).
    fn size(&self) -> BigInt;
    /// Whether the element is a unit.
    fn is_unit(&self) -> bool;
}

impl EucRing for BigInt {
    fn zero() -> Self {
        BigInt::from(0)
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        // Symmetric remainder keeps intermediates small.
        let q0 = self / d;
        let r0 = self - &q0 * d;
        if num_traits::Zero::is_zero(&r0) {
            return (q0, r0);
        }
        let half = d.abs();
        if &r0.abs() * 2 > half {
            let adj = if (r0.is_positive()) == (d.is_positive()) { BigInt::from(1) } else { BigInt::from(-1) };
            let q = &q0 + &adj;
            let r = self - &q * d;
            (q, r)
        } else {
            (q0, r0)
        }
    }
    fn size(&self) -> BigInt {
        self.abs()
    }
    fn is_unit(&self) -> bool {
        self.abs() == BigInt::from(1)
    }
}

impl EucRing for GaussInt {
    fn zero() -> Self {
        GaussInt::zero()
    }
    fn one() -> Self {
        GaussInt::one()
    }
    fn is_zero(&self) -> bool {
        GaussInt::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        GaussInt::div_rem(self, d)
    }
    fn size(&self) -> BigInt {
        self.norm()
    }
    fn is_unit(&self) -> bool {
        GaussInt::is_unit(self)
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug)]
pub struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<E>,
}

impl<E: EucRing> Mat<E> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![E::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = E::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &E) {
        for k in 0..self.cols {
            let t = self[(j, k)].mul(q);
            self[(i, k)] = self[(i, k)].sub(&t);
        }
    }

    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &E) {
        for r in 0..self.rows {
            let t = self[(r, j)].mul(q);
            self[(r, i)] = self[(r, i)].sub(&t);
        }
    }

    pub fn mul_vec(&self, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = E::zero();
                for k in 0..self.cols {
                    if !self[(i, k)].is_zero() && !v[k].is_zero() {
                        acc = acc.add(&self[(i, k)].mul(&v[k]));
                    }
                }
                acc
            })
            .collect()
    }
}

impl<E> std::ops::Index<(usize, usize)> for Mat<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> std::ops::IndexMut<(usize, usize)> for Mat<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `U * A * V = D` with unimodular `U`, `V`.
pub struct Snf<E> {
    pub d: Mat<E>,
    pub u: Mat<E>,
    pub v: Mat<E>,
    pub rank: usize,
}

impl<E: EucRing> Snf<E> {
    /// Diagonal entries `d_1 | d_2 | ... | d_r`.
    pub fn divisors(&self) -> Vec<E> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn all_divisors_unit(&self) -> bool {
        self.divisors().iter().all(EucRing::is_unit)
    }

    /// Basis of `{x : A x = 0}`: the trailing columns of `V`.
    pub fn kernel_basis(&self) -> Vec<Vec<E>> {
        (self.rank..self.v.cols)
            .map(|j| (0..self.v.rows).map(|i| self.v[(i, j)].clone()).collect())
            .collect()
    }
}

/// Computes the Smith normal form of `a` by alternating row/column reduction.
pub fn smith_normal_form<E: EucRing>(a: &Mat<E>) -> Snf<E> {
    let mut d = a.clone();
    let mut u = Mat::identity(d.rows);
    let mut v = Mat::identity(d.cols);
    let lim = d.rows.min(d.cols);
    let mut t = 0;
    while t < lim {
        let Some((pi, pj)) = smallest_nonzero(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..d.rows {
                if !d[(i, t)].is_zero() {
                    let (q, _) = d[(i, t)].div_rem(&d[(t, t)]);
                    d.row_sub(i, t, &q);
                    u.row_sub(i, t, &q);
                    if !d[(i, t)].is_zero() {
                        // Remainder is strictly smaller: promote it to the pivot.
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..d.cols {
                if !d[(t, j)].is_zero() {
                    let (q, _) = d[(t, j)].div_rem(&d[(t, t)]);
                    d.col_sub(j, t, &q);
                    v.col_sub(j, t, &q);
                    if !d[(t, j)].is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        // Enforce the divisibility chain: fold any non-multiple into the pivot.
        let mut redo = false;
        for i in t + 1..d.rows {
            for j in t + 1..d.cols {
                if !d[(i, j)].is_zero() {
                    let (_, r) = d[(i, j)].div_rem(&d[(t, t)]);
                    if !r.is_zero() {
                        // Add row i to row t and restart the pivot cleanup.
                        let m1 = E::one().neg();
                        d.row_sub(t, i, &m1);
                        u.row_sub(t, i, &m1);
                        redo = true;
                        break;
                    }
                }
            }
            if redo {
                break;
            }
        }
        if redo {
            continue;
        }
        t += 1;
    }
    let mut rank = 0;
    while rank < lim && !d[(rank, rank)].is_zero() {
        rank += 1;
    }
    Snf { d, u, v, rank }
}

fn smallest_nonzero<E: EucRing>(d: &Mat<E>, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in from..d.rows {
        for j in from..d.cols {
            if !d[(i, j)].is_zero() {
                let s = d[(i, j)].size();
                if best.as_ref().map_or(true, |(_, _, b)| s < *b) {
                    best = Some((i, j, s));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Solves `A x = b` exactly over the ring, if a solution exists.
pub fn solve_exact<E: EucRing>(a: &Mat<E>, b: &[E]) -> Option<Vec<E>> {
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let mut y = vec![E::zero(); a.cols];
    for i in 0..a.rows {
        if i < snf.rank {
            let (q, r) = ub[i].div_rem(&snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Integer row echelon with pivots on the *highest* columns.
///
/// Rows span a sublattice of `Z^cols`; `reduce` computes the canonical
/// representative of a vector modulo the row span, eliminating the largest
/// monomial coordinates first. Requires all pivots to end up as units, which
/// holds for the relation lattices in this crate (checked at build time).
pub struct TrailingEchelon {
    pub cols: usize,
    /// (pivot column, row), sorted by descending pivot column; pivot entry is 1.
    pub rows: Vec<(usize, Vec<BigInt>)>,
}

#[derive(Debug, thiserror::Error)]
#[error("non-unit pivot {pivot} in column {col}: lattice is not coordinate-split")]
pub struct NonUnitPivot {
    pub col: usize,
    pub pivot: BigInt,
}

impl TrailingEchelon {
    pub fn new(cols: usize) -> Self {
        TrailingEchelon { cols, rows: Vec::new() }
    }

    /// Inserts a row, maintaining echelon shape via Euclidean elimination.
    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        assert_eq!(v.len(), self.cols);
        loop {
            let Some(pc) = trailing_nonzero(&v) else { return };
            match self.rows.iter().position(|(c, _)| *c == pc) {
                None => {
                    // gcd-combine against nothing: just normalize sign and store
                    if v[pc].is_negative() {
                        for e in v.iter_mut() {
                            *e = -&*e;
                        }
                    }
                    self.rows.push((pc, v));
                    self.rows.sort_by(|x, y| y.0.cmp(&x.0));
                    return;
                }
                Some(ri) => {
                    let d = self.rows[ri].1[pc].clone();
                    let (q, r) = EucRing::div_rem(&v[pc], &d);
                    for k in 0..self.cols {
                        let t = &self.rows[ri].1[k] * &q;
                        v[k] -= t;
                    }
                    if num_traits::Zero::is_zero(&r) {
                        continue; // move on to the next (lower) pivot column
                    }
                    // Remainder beats the stored pivot: swap and keep going.
                    std::mem::swap(&mut self.rows[ri].1, &mut v);
                }
            }
        }
    }

    /// Back-substitutes so every pivot column occurs in exactly one row, then
    /// demands all pivots be 1. Call once after all `insert`s.
    pub fn finalize(&mut self) -> Result<(), NonUnitPivot> {
        for (c, row) in &self.rows {
            if row[*c] != BigInt::from(1) {
                return Err(NonUnitPivot { col: *c, pivot: row[*c].clone() });
            }
        }
        // Clear pivot columns from the other rows (rows sorted by descending pivot).
        for i in 0..self.rows.len() {
            for j in 0..i {
                let pc = self.rows[i].0;
                let coef = self.rows[j].1[pc].clone();
                if !num_traits::Zero::is_zero(&coef) {
                    for k in 0..self.cols {
                        let t = &self.rows[i].1[k] * &coef;
                        self.rows[j].1[k] -= t;
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical representative of `v` modulo the row span.
    pub fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (pc, row) in &self.rows {
            if !num_traits::Zero::is_zero(&v[*pc]) {
                let q = v[*pc].clone();
                for k in 0..self.cols {
                    let t = &row[k] * &q;
                    v[k] -= t;
                }
            }
        }
        v
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }
}

fn trailing_nonzero(v: &[BigInt]) -> Option<usize> {
    (0..v.len()).rev().find(|&i| !num_traits::Zero::is_zero(&v[i]))
}

/// Row-reduced GF(2) matrix on bit-packed rows.
#[derive(Clone)]
pub struct Gf2Rref {
    ncols: usize,
    words: usize,
    /// (pivot column, packed row)
    rows: Vec<(usize, Vec<u64>)>,
    pivot_of_col: Vec<Option<usize>>,
}

impl Gf2Rref {
    pub fn new(ncols: usize) -> Self {
        Gf2Rref { ncols, words: ncols.div_ceil(64), rows: Vec::new(), pivot_of_col: vec![None; ncols] }
    }

    fn reduce_row(&self, row: &mut [u64]) {
        for (pc, prow) in &self.rows {
            if row[pc / 64] >> (pc % 64) & 1 == 1 {
                for w in 0..self.words {
                    row[w] ^= prow[w];
                }
            }
        }
    }

    /// Inserts a row; returns false if it was dependent (reduced to zero).
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        self.reduce_row(&mut row);
        let Some(pc) = first_set_bit(&row, self.ncols) else { return false };
        // Clear the new pivot column in earlier rows to keep full RREF.
        for (_, prow) in self.rows.iter_mut() {
            if prow[pc / 64] >> (pc % 64) & 1 == 1 {
                for w in 0..self.words {
                    prow[w] ^= row[w];
                }
            }
        }
        self.pivot_of_col[pc] = Some(self.rows.len());
        self.rows.push((pc, row));
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Kernel basis: one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let mut basis = Vec::new();
        for c in 0..self.ncols {
            if self.pivot_of_col[c].is_some() {
                continue;
            }
            let mut v = vec![0u64; self.words];
            v[c / 64] |= 1 << (c % 64);
            for (pc, prow) in &self.rows {
                if prow[c / 64] >> (c % 64) & 1 == 1 {
                    v[pc / 64] |= 1 << (pc % 64);
                }
            }
            basis.push(v);
        }
        basis
    }
}

fn first_set_bit(row: &[u64], ncols: usize) -> Option<usize> {
    for (w, &word) in row.iter().enumerate() {
        if word != 0 {
            let c = w * 64 + word.trailing_zeros() as usize;
            if c < ncols {
                return Some(c);
            }
        }
    }
    None
}

/// Sparse row over GF(2) plus right-hand side, as (column indices, rhs bit).
pub struct Gf2System {
    ncols: usize,
    rref: Gf2Rref,
}

impl Gf2System {
    pub fn new(ncols: usize) -> Self {
        // One extra column carries the right-hand side.
        Gf2System { ncols, rref: Gf2Rref::new(ncols + 1) }
    }

    pub fn add_equation(&mut self, cols: &[usize], rhs: bool) {
        let words = (self.ncols + 1).div_ceil(64);
        let mut row = vec![0u64; words];
        for &c in cols {
            debug_assert!(c < self.ncols);
            row[c / 64] ^= 1 << (c % 64);
        }
        if rhs {
            row[self.ncols / 64] ^= 1 << (self.ncols % 64);
        }
        self.rref.insert(row);
    }

    /// A particular solution together with a kernel basis of the homogeneous
    /// system, or `None` if inconsistent (a row reduced to `0 = 1`).
    pub fn solve(&self) -> Option<(Vec<bool>, Vec<Vec<bool>>)> {
        let rhs_col = self.ncols;
        let mut part = vec![false; self.ncols];
        for (pc, row) in &self.rref.rows {
            if *pc == rhs_col {
                return None; // 0 = 1
            }
            if row[rhs_col / 64] >> (rhs_col % 64) & 1 == 1 {
                part[*pc] = true;
            }
        }
        let mut kernel = Vec::new();
        for c in 0..self.ncols {
            if self.rref.pivot_of_col[c].is_some() {
                continue;
            }
            let mut v = vec![false; self.ncols];
            v[c] = true;
            for (pc, row) in &self.rref.rows {
                if *pc < self.ncols && row[c / 64] >> (c % 64) & 1 == 1 {
                    v[*pc] = true;
                }
            }
            kernel.push(v);
        }
        Some((part, kernel))
    }
}

/// A sparse linear system over `Z/4`: rows of `(col, coefficient)` pairs.
///
/// Solved by a complete two-step lift: solve mod 2, then solve the residual
/// mod 2 with the kernel directions adjoined as extra unknowns. If the lifted
/// system is inconsistent, the mod-4 system has no solution at all.
pub struct Mod4System {
    ncols: usize,
    rows: Vec<(Vec<(usize, i64)>, u8)>,
}

impl Mod4System {
    pub fn new(ncols: usize) -> Self {
        Mod4System { ncols, rows: Vec::new() }
    }

    pub fn add_equation(&mut self, terms: Vec<(usize, i64)>, rhs: u8) {
        self.rows.push((terms, rhs % 4));
    }

    pub fn solve(&self) -> Option<Vec<u8>> {
        // Step 1: the system mod 2.
        let mut gf2 = Gf2System::new(self.ncols);
        for (terms, rhs) in &self.rows {
            let mut cols = Vec::new();
            for &(c, coef) in terms {
                if coef.rem_euclid(2) == 1 {
                    cols.push(c);
                }
            }
            gf2.add_equation(&cols, rhs % 2 == 1);
        }
        let (tau0, kernel) = gf2.solve()?;

        // Step 2: residual r = (b - A tau0)/2, solve A tau1 + K_hat t = r (mod 2)
        // where K_hat_j = (A K_j)/2 mod 2.
        let nk = kernel.len();
        let mut lift = Gf2System::new(self.ncols + nk);
        for (terms, rhs) in &self.rows {
            let mut acc: i64 = -(*rhs as i64);
            let mut cols = Vec::new();
            for &(c, coef) in terms {
                if tau0[c] {
                    acc += coef;
                }
                if coef.rem_euclid(2) == 1 {
                    cols.push(c);
                }
            }
            debug_assert_eq!(acc.rem_euclid(2), 0);
            for (j, kv) in kernel.iter().enumerate() {
                let mut s: i64 = 0;
                for &(c, coef) in terms {
                    if kv[c] {
                        s += coef;
                    }
                }
                debug_assert_eq!(s.rem_euclid(2), 0);
                if (s / 2).rem_euclid(2) != 0 {
                    cols.push(self.ncols + j);
                }
            }
            // A tau0 + K t + 2 tau1 solves mod 4 iff
            // A tau1 + (A K / 2) t = (b - A tau0)/2 (mod 2); acc = A tau0 - b
            // and the sign washes out mod 2.
            let rhs_bit = (acc / 2).rem_euclid(2) != 0;
            lift.add_equation(&cols, rhs_bit);
        }
        let (sol, _) = lift.solve()?;
        let mut tau = vec![0u8; self.ncols];
        for c in 0..self.ncols {
            let t0 = tau0[c] as u8;
            let t1 = sol[c] as u8;
            tau[c] = (t0 + 2 * t1) % 4;
        }
        // Fold the chosen kernel directions into the mod-2 part.
        for (j, kv) in kernel.iter().enumerate() {
            if sol[self.ncols + j] {
                for c in 0..self.ncols {
                    if kv[c] {
                        tau[c] = (tau[c] + 1) % 4;
                    }
                }
            }
        }
        // Adding a kernel vector can bump a coordinate from 1 to 2 etc.; the
        // arithmetic above is plain addition mod 4, which is exactly right:
        // tau = tau0 + K t + 2 tau1 as integers, reduced mod 4.
        Some(tau)
    }

    /// Checks a candidate solution.
    pub fn verify(&self, tau: &[u8]) -> bool {
        self.rows.iter().all(|(terms, rhs)| {
            let mut acc: i64 = 0;
            for &(c, coef) in terms {
                acc += coef * tau[c] as i64;
            }
            acc.rem_euclid(4) == *rhs as i64
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn snf_diagonalizes_and_tracks_transforms() {
        let a = Mat::from_rows(vec![
            vec![bi(2), bi(4), bi(4)],
            vec![bi(-6), bi(6), bi(12)],
            vec![bi(10), bi(4), bi(16)],
        ]);
        let snf = smith_normal_form(&a);
        // U A V = D must hold.
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = bi(0);
                for k in 0..3 {
                    for l in 0..3 {
                        acc += &snf.u[(i, k)] * &a[(k, l)] * &snf.v[(l, j)];
                    }
                }
                assert_eq!(acc, snf.d[(i, j)]);
                if i != j {
                    assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
        // Invariant factors (up to sign), with the divisibility chain.
        let divs: Vec<BigInt> = snf.divisors().iter().map(|d| d.abs()).collect();
        assert_eq!(divs, vec![bi(2), bi(2), bi(156)]);
        for w in divs.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn snf_kernel() {
        // x + y - z = 0 has kernel rank 2.
        let a = Mat::from_rows(vec![vec![bi(1), bi(1), bi(-1)]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.rank, 1);
        let ker = snf.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!((&v[0] + &v[1] - &v[2]).is_zero());
        }
    }

    #[test]
    fn snf_over_gaussians() {
        let g = |re: i64, im: i64| GaussInt::new(re, im);
        let a = Mat::from_rows(vec![vec![g(1, 1), g(2, 0)], vec![g(0, 2), g(1, -1)]]);
        let snf = smith_normal_form(&a);
        // det = (1+i)(1-i) - 2*2i = 2 - 4i, norm 20 != 0: full rank.
        assert_eq!(snf.rank, 2);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = GaussInt::zero();
                for k in 0..2 {
                    for l in 0..2 {
                        acc += &(&(&snf.u[(i, k)] * &a[(k, l)]) * &snf.v[(l, j)]);
                    }
                }
                assert_eq!(acc, snf.d[(i, j)]);
            }
        }
    }

    #[test]
    fn solve_exact_finds_integral_solutions() {
        let a = Mat::from_rows(vec![vec![bi(2), bi(3)], vec![bi(1), bi(1)]]);
        let x = solve_exact(&a, &[bi(7), bi(3)]).unwrap();
        assert_eq!(x, vec![bi(2), bi(1)]);
        // 2x = 1 has no integral solution.
        let a2 = Mat::from_rows(vec![vec![bi(2)]]);
        assert!(solve_exact(&a2, &[bi(1)]).is_none());
    }

    #[test]
    fn trailing_echelon_reduces_against_largest_pivot() {
        // Single relation x1 - x2 + x3 - x4 = 0, pivot on x4.
        let mut ech = TrailingEchelon::new(4);
        ech.insert(vec![bi(1), bi(-1), bi(1), bi(-1)]);
        ech.finalize().unwrap();
        let nf = ech.reduce(vec![bi(0), bi(0), bi(0), bi(1)]);
        assert_eq!(nf, vec![bi(1), bi(-1), bi(1), bi(0)]);
    }

    #[test]
    fn gf2_solevery() {
        let mut sys = Gf2System::new(3);
        sys.add_equation(&[0, 1], true);
        sys.add_equation(&[1, 2], false);
        sys.add_equation(&[0, 2], true);
        let (sol, kernel) = sys.solve().unwrap();
        assert_eq!((sol[0] as u8 + sol[1] as u8) % 2, 1);
        assert_eq!((sol[1] as u8 + sol[2] as u8) % 2, 0);
        assert!(kernel.is_empty() || kernel.iter().all(|v| v.len() == 3));
        // Inconsistent system.
        let mut bad = Gf2System::new(2);
        bad.add_equation(&[0, 1], false);
        bad.add_equation(&[0, 1], true);
        assert!(bad.solve().is_none());
    }

    #[test]
    fn mod4_solver_handles_zero_divisors() {
        // 2x = 2 (mod 4) is solvable (x odd) though 2 is a zero divisor.
        let mut sys = Mod4System::new(1);
        sys.add_equation(vec![(0, 2)], 2);
        let sol = sys.solve().unwrap();
        assert!(sys.verify(&sol));
        // 2x = 1 (mod 4) is not solvable.
        let mut bad = Mod4System::new(1);
        bad.add_equation(vec![(0, 2)], 1);
        assert!(bad.solve().is_none());
    }

    #[test]
    fn mod4_solver_random_consistency() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let ncols = 6;
            let secret: Vec<u8> = (0..ncols).map(|_| rng.gen_range(0..4)).collect();
            let mut sys = Mod4System::new(ncols);
            for _ in 0..10 {
                let mut terms: Vec<(usize, i64)> = Vec::new();
                for c in 0..ncols {
                    if rng.gen_bool(0.5) {
                        terms.push((c, rng.gen_range(-2..=2)));
                    }
                }
                let rhs: i64 = terms.iter().map(|&(c, k)| k * secret[c] as i64).sum();
                sys.add_equation(terms, rhs.rem_euclid(4) as u8);
            }
            let sol = sys.solve().expect("consistent by construction");
            assert!(sys.verify(&sol));
        }
    }
}
