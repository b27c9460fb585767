//! Crossingless matchings of `2n` points, closure diagrams `W(b)a` and
//! stacked diagrams, with the left-to-right circle order used everywhere else.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Hard cap on `n`; bitmask bookkeeping assumes `2n <= 16`.
pub const MAX_N: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum DiagramError {
    #[error("n = {0} out of supported range 1..={MAX_N}")]
    SizeOutOfRange(usize),
    #[error("matchings have different sizes: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
}

/// A crossingless matching of the points `1..=2n` by arcs below the line.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matching {
    n: usize,
    /// Arcs `(i, j)` with `i < j`, sorted by left endpoint.
    arcs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(n: usize, mut arcs: Vec<(usize, usize)>) -> Result<Self, DiagramError> {
        if n == 0 || n > MAX_N {
            return Err(DiagramError::SizeOutOfRange(n));
        }
        for a in arcs.iter_mut() {
            if a.0 > a.1 {
                *a = (a.1, a.0);
            }
        }
        arcs.sort();
        if arcs.len() != n {
            return Err(DiagramError::InvalidMatching(format!("expected {n} arcs, got {}", arcs.len())));
        }
        let mut seen = vec![false; 2 * n + 1];
        for &(i, j) in &arcs {
            if i < 1 || j > 2 * n || i == j {
                return Err(DiagramError::InvalidMatching(format!("arc ({i},{j}) out of range")));
            }
            for p in [i, j] {
                if seen[p] {
                    return Err(DiagramError::InvalidMatching(format!("point {p} used twice")));
                }
                seen[p] = true;
            }
        }
        for &(i, j) in &arcs {
            for &(k, l) in &arcs {
                if i < k && k < j && j < l {
                    return Err(DiagramError::InvalidMatching(format!("arcs ({i},{j}) and ({k},{l}) cross")));
                }
            }
        }
        Ok(Matching { n, arcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// The point paired with `p`.
    pub fn partner(&self, p: usize) -> usize {
        for &(i, j) in &self.arcs {
            if i == p {
                return j;
            }
            if j == p {
                return i;
            }
        }
        unreachable!("point {p} not in matching")
    }

    /// The arc containing `p`, as stored (left endpoint first).
    pub fn arc_of(&self, p: usize) -> (usize, usize) {
        for &(i, j) in &self.arcs {
            if i == p || j == p {
                return (i, j);
            }
        }
        unreachable!("point {p} not in matching")
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matching{:?}", self.arcs)
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.arcs.iter().map(|(i, j)| format!("({i},{j})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All crossingless matchings of `2n` points, in the canonical order given by
/// the recursive first-arc decomposition: the arc at point 1 ends at `2k`,
/// enumerated for increasing `k`, with the interior block enumerated before
/// the exterior one. The position in this list is the matching's canonical ID.
pub fn enumerate_matchings(n: usize) -> Result<Vec<Matching>, DiagramError> {
    if n == 0 || n > MAX_N {
        return Err(DiagramError::SizeOutOfRange(n));
    }
    let points: Vec<usize> = (1..=2 * n).collect();
    let sets = enumerate_on(&points);
    Ok(sets.into_iter().map(|arcs| Matching { n, arcs }).collect())
}

fn enumerate_on(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let first = points[0];
    // The partner of the first point must leave an even interior.
    for k in (1..points.len()).step_by(2) {
        let partner = points[k];
        let interior = &points[1..k];
        let exterior = &points[k + 1..];
        for inner in enumerate_on(interior) {
            for outer in enumerate_on(exterior) {
                let mut arcs = vec![(first, partner)];
                arcs.extend(inner.iter().copied());
                arcs.extend(outer.iter().copied());
                arcs.sort();
                out.push(arcs);
            }
        }
    }
    out
}

/// The number of circle components is at most `n`; each circle is the set of
/// line points it passes through, stored as a bitmask (bit `p-1` for point `p`).
pub type CircleMask = u32;

/// The closed diagram `W(top)bottom`: `bottom`'s arcs below the line, the
/// reflection of `top` above it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosedDiagram {
    top: Matching,
    bottom: Matching,
    /// Circles sorted by minimal endpoint ("left to right").
    circles: Vec<CircleMask>,
}

impl ClosedDiagram {
    pub fn top(&self) -> &Matching {
        &self.top
    }

    pub fn bottom(&self) -> &Matching {
        &self.bottom
    }

    pub fn n(&self) -> usize {
        self.bottom.n
    }

    pub fn circles(&self) -> &[CircleMask] {
        &self.circles
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    /// Index (in left-to-right order) of the circle through point `p`.
    pub fn circle_of_point(&self, p: usize) -> usize {
        let bit = 1u32 << (p - 1);
        self.circles.iter().position(|c| c & bit != 0).expect("point out of range")
    }
}

/// Closes `bottom` against the reflection of `top`, tracing circles.
pub fn close(top: &Matching, bottom: &Matching) -> Result<ClosedDiagram, DiagramError> {
    if top.n != bottom.n {
        return Err(DiagramError::SizeMismatch(top.n, bottom.n));
    }
    let n2 = 2 * top.n;
    let mut visited = vec![false; n2 + 1];
    let mut circles = Vec::new();
    for start in 1..=n2 {
        if visited[start] {
            continue;
        }
        let mut mask: CircleMask = 0;
        let mut p = start;
        loop {
            visited[p] = true;
            mask |= 1 << (p - 1);
            let q = bottom.partner(p);
            visited[q] = true;
            mask |= 1 << (q - 1);
            p = top.partner(q);
            if p == start {
                break;
            }
        }
        circles.push(mask);
    }
    circles.sort_by_key(|m| m.trailing_zeros());
    Ok(ClosedDiagram { top: top.clone(), bottom: bottom.clone(), circles })
}

/// Two closed diagrams, `upper` drawn above `lower`; the global circle index
/// runs through the upper circles first, then the lower ones.
#[derive(Clone, Debug)]
pub struct StackedDiagram {
    pub upper: ClosedDiagram,
    pub lower: ClosedDiagram,
}

pub fn stack(upper: ClosedDiagram, lower: ClosedDiagram) -> Result<StackedDiagram, DiagramError> {
    if upper.n() != lower.n() {
        return Err(DiagramError::SizeMismatch(upper.n(), lower.n()));
    }
    Ok(StackedDiagram { upper, lower })
}

impl StackedDiagram {
    pub fn circle_count(&self) -> usize {
        self.upper.circle_count() + self.lower.circle_count()
    }
}

/// Cached enumeration and closures for one size `n`; everything downstream
/// works with matching IDs into this table.
pub struct Arena {
    n: usize,
    matchings: Vec<Matching>,
    closures: Vec<Vec<ClosedDiagram>>,
}

impl Arena {
    pub fn new(n: usize) -> Result<Self, DiagramError> {
        let matchings = enumerate_matchings(n)?;
        let mut closures = Vec::with_capacity(matchings.len());
        for top in &matchings {
            let mut row = Vec::with_capacity(matchings.len());
            for bottom in &matchings {
                row.push(close(top, bottom)?);
            }
            closures.push(row);
        }
        Ok(Arena { n, matchings, closures })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.matchings.len()
    }

    pub fn matching(&self, id: usize) -> &Matching {
        &self.matchings[id]
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    pub fn id_of(&self, m: &Matching) -> Option<usize> {
        self.matchings.iter().position(|x| x == m)
    }

    /// The closed diagram `W(top)bottom` by IDs.
    pub fn closure(&self, top: usize, bottom: usize) -> &ClosedDiagram {
        &self.closures[top][bottom]
    }

    /// Canonical printed ID, "n:k".
    pub fn print_id(&self, id: usize) -> String {
        format!("{}:{}", self.n, id)
    }
}

/// Catalan number, for rank assertions.
pub fn catalan(n: usize) -> usize {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c as usize
}

/// Binomial coefficient.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (n as u128 - i) / (i + 1);
    }
    c as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, arcs: &[(usize, usize)]) -> Matching {
        Matching::new(n, arcs.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_counts_are_catalan() {
        assert_eq!(enumerate_matchings(1).unwrap().len(), 1);
        assert_eq!(enumerate_matchings(2).unwrap().len(), 2);
        assert_eq!(enumerate_matchings(3).unwrap().len(), 5);
        assert_eq!(enumerate_matchings(4).unwrap().len(), 14);
        assert_eq!(enumerate_matchings(5).unwrap().len(), 42);
    }

    #[test]
    fn enumeration_order_is_first_arc_recursive() {
        let b1 = enumerate_matchings(1).unwrap();
        assert_eq!(b1[0], m(1, &[(1, 2)]));
        let b2 = enumerate_matchings(2).unwrap();
        assert_eq!(b2[0], m(2, &[(1, 2), (3, 4)]));
        assert_eq!(b2[1], m(2, &[(1, 4), (2, 3)]));
        // Stability: enumerating twice gives the identical list.
        assert_eq!(enumerate_matchings(3).unwrap(), enumerate_matchings(3).unwrap());
    }

    #[test]
    fn rejects_bad_sizes_and_crossings() {
        assert!(enumerate_matchings(0).is_err());
        assert!(enumerate_matchings(MAX_N + 1).is_err());
        assert!(Matching::new(2, vec![(1, 3), (2, 4)]).is_err());
        assert!(Matching::new(2, vec![(1, 2), (2, 3)]).is_err());
    }

    #[test]
    fn closures_for_n2() {
        let a = m(2, &[(1, 2), (3, 4)]);
        let b = m(2, &[(1, 4), (2, 3)]);
        let waa = close(&a, &a).unwrap();
        assert_eq!(waa.circles(), &[0b0011, 0b1100]);
        let wba = close(&b, &a).unwrap();
        assert_eq!(wba.circles(), &[0b1111]);
        let wbb = close(&b, &b).unwrap();
        // Outer circle {1,4} comes first, then nested {2,3}.
        assert_eq!(wbb.circles(), &[0b1001, 0b0110]);
    }

    #[test]
    fn closure_size_bounds() {
        for n in 1..=4 {
            let ms = enumerate_matchings(n).unwrap();
            for x in &ms {
                for y in &ms {
                    let c = close(x, y).unwrap();
                    assert!(c.circle_count() >= 1 && c.circle_count() <= n);
                    assert_eq!(c.circle_count() == n, x == y);
                    // Reflection symmetry of circle counts.
                    assert_eq!(c.circle_count(), close(y, x).unwrap().circle_count());
                    // Circles partition the endpoints.
                    let all: u32 = c.circles().iter().fold(0, |acc, m| acc | m);
                    assert_eq!(all, (1u32 << (2 * n)) - 1);
                    let sum: u32 = c.circles().iter().map(|m| m.count_ones()).sum();
                    assert_eq!(sum, 2 * n as u32);
                }
            }
        }
    }

    #[test]
    fn stacking_counts() {
        let a = m(2, &[(1, 2), (3, 4)]);
        let b = m(2, &[(1, 4), (2, 3)]);
        let s = stack(close(&b, &a).unwrap(), close(&a, &b).unwrap()).unwrap();
        assert_eq!(s.circle_count(), 2);
        let s2 = stack(close(&a, &a).unwrap(), close(&a, &a).unwrap()).unwrap();
        assert_eq!(s2.circle_count(), 4);
        let s3 = stack(close(&b, &b).unwrap(), close(&b, &a).unwrap()).unwrap();
        assert_eq!(s3.circle_count(), 3);
    }

    #[test]
    fn total_rank_of_oh2_pieces() {
        // Sum of 2^{|W(b)a|} over all pairs = 4+2+2+4 = 12 for n = 2.
        let arena = Arena::new(2).unwrap();
        let total: usize =
            (0..2).flat_map(|b| (0..2).map(move |a| (b, a))).map(|(b, a)| 1 << arena.closure(b, a).circle_count()).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn catalan_and_binomial() {
        assert_eq!(catalan(5), 42);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(8, 4), 70);
    }
}
