//! The odd center of the arc algebra, the evaluation map from the odd
//! Springer quotient, and the desk-scale verification that it is an
//! isomorphism.

use crate::arc::{ArcElement, BasisVector, OddArcAlgebra};
use crate::coeff::GaussInt;
use crate::diagram::{binomial, Arena};
use crate::exterior::ExtElement;
use crate::linalg::{smith_normal_form, solve_exact, Mat};
use crate::springer::{all_generators, QuotientBasis, SkewPoly};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Flat index over the diagonal basis: `(a, mask)` pairs in order.
#[derive(Clone)]
pub struct DiagonalIndex {
    pub n: usize,
    pub entries: Vec<(usize, u64)>,
}

impl DiagonalIndex {
    pub fn new(arena: &Arena) -> Self {
        let mut entries = Vec::new();
        for a in 0..arena.size() {
            for mask in 0..(1u64 << arena.n()) {
                entries.push((a, mask));
            }
        }
        DiagonalIndex { n: arena.n(), entries }
    }

    pub fn position(&self, a: usize, mask: u64) -> usize {
        a * (1 << self.n) + mask as usize
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Assembles a coordinate vector into the diagonal arc element.
    pub fn to_element(&self, arena: &Arena, coords: &[BigInt]) -> ArcElement {
        let mut out = ArcElement::zero(self.n);
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, mask) = self.entries[i];
            out.add_assign(
                &ArcElement::basis(arena, BasisVector { upper: a, lower: a, mask })
                    .scale(&GaussInt { re: c.clone(), im: BigInt::zero() }),
            );
        }
        out
    }

    /// Extracts diagonal coordinates from an arc element (must be diagonal
    /// with integer coefficients).
    pub fn coords_of(&self, x: &ArcElement) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.len()];
        for (&(b, a), e) in x.pieces() {
            assert_eq!(b, a, "element not supported on the diagonal");
            for (m, c) in e.terms() {
                assert!(c.is_real());
                v[self.position(a, *m)] = c.re.clone();
            }
        }
        v
    }
}

/// The odd center, solved degree by degree from the equalizer condition
/// `z_b 1_{ba} = 1_{ba} z_a` over all ordered pairs.
pub struct OddCenter {
    pub index: DiagonalIndex,
    /// `(quantum degree, coordinates)` per basis vector.
    pub vectors: Vec<(i64, Vec<BigInt>)>,
}

impl OddCenter {
    pub fn graded_rank(&self) -> crate::even::GradedRank {
        let mut map = BTreeMap::new();
        for (d, _) in &self.vectors {
            *map.entry(*d).or_insert(0) += 1;
        }
        crate::even::GradedRank(map)
    }

    pub fn total_rank(&self) -> usize {
        self.vectors.len()
    }
}

/// The products `z_b 1_{ba}` and `1_{ba} z_a` use only split-free cobordisms,
/// so the defining system is the same for every choice C.
pub fn odd_center(alg: &OddArcAlgebra) -> OddCenter {
    let arena = alg.arena();
    let n = arena.n();
    let index = DiagonalIndex::new(arena);
    let mut vectors = Vec::new();
    for k in 0..=n {
        let deg = 2 * k as i64;
        let unknowns: Vec<usize> = (0..index.len())
            .filter(|&i| index.entries[i].1.count_ones() as usize == k)
            .collect();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for b in 0..arena.size() {
            for a in 0..arena.size() {
                if b == a {
                    continue;
                }
                // Output piece (b, a); row per monomial of word length k.
                let left = alg.triple_table(b, b, a);
                let right = alg.triple_table(b, a, a);
                let m_ba = arena.closure(b, a).circle_count() as u32;
                let out_masks: Vec<u64> =
                    (0..(1u64 << m_ba)).filter(|m| m.count_ones() as usize == k).collect();
                for &om in &out_masks {
                    let mut row = vec![BigInt::zero(); unknowns.len()];
                    let mut nonzero = false;
                    for (pos, &ui) in unknowns.iter().enumerate() {
                        let (da, mask) = index.entries[ui];
                        let mut coef = BigInt::zero();
                        if da == b {
                            let prod = &left.products[mask as usize][0];
                            let c = prod.coeff(om);
                            assert!(c.is_real());
                            coef += c.re;
                        }
                        if da == a {
                            let prod = &right.products[0][mask as usize];
                            let c = prod.coeff(om);
                            assert!(c.is_real());
                            coef -= c.re;
                        }
                        if !coef.is_zero() {
                            nonzero = true;
                        }
                        row[pos] = coef;
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
        if rows.is_empty() {
            for &ui in &unknowns {
                let mut v = vec![BigInt::zero(); index.len()];
                v[ui] = BigInt::from(1);
                vectors.push((deg, v));
            }
            continue;
        }
        let snf = smith_normal_form(&Mat::from_rows(rows));
        for kvec in snf.kernel_basis() {
            let mut v = vec![BigInt::zero(); index.len()];
            for (pos, &ui) in unknowns.iter().enumerate() {
                v[ui] = kvec[pos].clone();
            }
            vectors.push((deg, v));
        }
    }
    OddCenter { index, vectors }
}

/// The image of a skew monomial under `h_a`: wedge of the generators of the
/// circles of `W(a)a` through the monomial's points, in point order.
pub fn h_a_monomial(arena: &Arena, a: usize, var_mask: u32) -> ExtElement {
    let diag = arena.closure(a, a);
    let gens = (1u64 << diag.circle_count()) - 1;
    let mut seq = Vec::new();
    let mut mm = var_mask;
    while mm != 0 {
        let p = mm.trailing_zeros() as usize + 1;
        seq.push(diag.circle_of_point(p) as u32);
        mm &= mm - 1;
    }
    let mut out = ExtElement::unit(gens, arena.n() as i64);
    for g in seq {
        let gen = ExtElement::generator(g, gens, arena.n() as i64);
        out = out.wedge(&gen).expect("same algebra");
    }
    out
}

/// `h_a` on a whole polynomial.
pub fn h_a_poly(arena: &Arena, a: usize, p: &SkewPoly) -> ExtElement {
    let diag = arena.closure(a, a);
    let gens = (1u64 << diag.circle_count()) - 1;
    let mut out = ExtElement::zero(gens, arena.n() as i64);
    for (m, c) in p.terms() {
        let img = h_a_monomial(arena, a, *m).scale(&GaussInt { re: c.clone(), im: BigInt::zero() });
        out = out.add(&img).unwrap();
    }
    out
}

/// `h = sum_a h_a`, landing in the diagonal part of the arc algebra.
pub fn h_poly(arena: &Arena, p: &SkewPoly) -> ArcElement {
    let mut out = ArcElement::zero(arena.n());
    for a in 0..arena.size() {
        let img = h_a_poly(arena, a, p);
        if !img.is_zero() {
            let mut piece = ArcElement::zero(arena.n());
            piece.set_piece(a, a, img);
            out.add_assign(&piece);
        }
    }
    out
}

/// Report of the isomorphism verification.
#[derive(Debug)]
pub struct IsoReport {
    pub generators_killed: usize,
    pub center_rank: usize,
    pub quotient_rank: usize,
    pub multiplicative_pairs: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum IsoError {
    #[error("h does not kill the generator {0}")]
    GeneratorSurvives(String),
    #[error("h({0}) is not in the span of the odd center")]
    NotInCenter(String),
    #[error("transition matrix is not unimodular (divisor {0})")]
    NotUnimodular(BigInt),
    #[error("rank mismatch: center {center}, quotient {quotient}")]
    RankMismatch { center: usize, quotient: usize },
    #[error("h is not multiplicative on ({0}) * ({1})")]
    NotMultiplicative(String, String),
    #[error("graded ranks differ: center {center}, quotient image {image}")]
    GradedMismatch { center: String, image: String },
}

/// Checks that `h` kills every generator, lands in the odd center, maps the
/// quotient basis to a basis (unimodular transition), preserves the grading,
/// and is multiplicative on all basis pairs.
pub fn verify_iso(
    alg: &OddArcAlgebra,
    qb: &QuotientBasis,
    center: &OddCenter,
) -> Result<IsoReport, IsoError> {
    let arena = alg.arena();
    let n = arena.n();

    // (1) every admissible epsilon dies under every h_a.
    let gens = all_generators(n);
    for g in &gens {
        for a in 0..arena.size() {
            if !h_a_poly(arena, a, g).is_zero() {
                return Err(IsoError::GeneratorSurvives(format!("{g} at diagonal {a}")));
            }
        }
    }

    // (2) + (3): express each h(basis monomial) in the center basis.
    let dim = center.index.len();
    let rank = center.total_rank();
    let quotient_basis = qb.basis_monomials();
    if rank != quotient_basis.len() {
        return Err(IsoError::RankMismatch { center: rank, quotient: quotient_basis.len() });
    }
    // Center basis as the columns of a dim x rank matrix.
    let mut kmat = Mat::<BigInt>::zero(dim, rank);
    for (j, (_, v)) in center.vectors.iter().enumerate() {
        for i in 0..dim {
            kmat[(i, j)] = v[i].clone();
        }
    }
    let mut transition = Mat::<BigInt>::zero(rank, rank);
    let mut image_rank: BTreeMap<i64, usize> = BTreeMap::new();
    for (col, &mono) in quotient_basis.iter().enumerate() {
        let img = h_poly(arena, &SkewPoly::monomial(mono, 2 * n));
        let coords = center.index.coords_of(&img);
        let sol = solve_exact(&kmat, &coords)
            .ok_or_else(|| IsoError::NotInCenter(format!("x-monomial {mono:#b}")))?;
        for (row, c) in sol.iter().enumerate() {
            transition[(row, col)] = c.clone();
        }
        *image_rank.entry(2 * mono.count_ones() as i64).or_insert(0) += 1;
    }
    let snf = smith_normal_form(&transition);
    if snf.rank < rank {
        return Err(IsoError::RankMismatch { center: rank, quotient: snf.rank });
    }
    for d in snf.divisors() {
        if !crate::linalg::EucRing::is_unit(&d) {
            return Err(IsoError::NotUnimodular(d));
        }
    }
    // Graded comparison: image degrees match the center's graded rank.
    let center_rank = center.graded_rank();
    let image_rank = crate::even::GradedRank(image_rank);
    if center_rank != image_rank {
        return Err(IsoError::GradedMismatch {
            center: center_rank.to_poly_string(),
            image: image_rank.to_poly_string(),
        });
    }

    // (4) multiplicativity on all pairs of quotient basis monomials, with the
    // product on the left computed by normal form in the quotient and on the
    // right by the actual arc algebra multiplication.
    let mut pairs = 0;
    for &m1 in &quotient_basis {
        for &m2 in &quotient_basis {
            let p1 = SkewPoly::monomial(m1, 2 * n);
            let p2 = SkewPoly::monomial(m2, 2 * n);
            let lhs = h_poly(arena, &qb.normal_form(&p1.mul(&p2)));
            let rhs = alg.multiply(&h_poly(arena, &p1), &h_poly(arena, &p2));
            if lhs != rhs {
                return Err(IsoError::NotMultiplicative(p1.to_string(), p2.to_string()));
            }
            pairs += 1;
        }
    }

    Ok(IsoReport {
        generators_killed: gens.len(),
        center_rank: rank,
        quotient_rank: quotient_basis.len(),
        multiplicative_pairs: pairs,
    })
}

/// Asserts that the structure constants entering the center's defining system
/// (triples `(b, b, a)` and `(b, a, a)`, which are split-free) are literally
/// identical across the given chronologies of a triple.
pub fn choice_independent_triple(arena: &Arena, triple: (usize, usize, usize)) -> bool {
    let choices = match crate::tqft::enumerate_triple_choices(arena, triple) {
        Ok(c) => c,
        Err(_) => return true, // size guard; nothing to compare
    };
    let m_up = arena.closure(triple.0, triple.1).circle_count() as u32;
    let m_lo = arena.closure(triple.1, triple.2).circle_count() as u32;
    let n = arena.n() as i64;
    let mut reference: Option<Vec<Vec<ExtElement>>> = None;
    for ch in &choices {
        let mut table = Vec::new();
        for mx in 0..(1u64 << m_up) {
            let mut row = Vec::new();
            for my in 0..(1u64 << m_lo) {
                let x = ExtElement::monomial(mx, (1u64 << m_up) - 1, n);
                let y = ExtElement::monomial(my, (1u64 << m_lo) - 1, n);
                row.push(crate::tqft::multiply_pieces(arena, ch, &x, &y).unwrap());
            }
            table.push(row);
        }
        match &reference {
            None => reference = Some(table),
            Some(r) => {
                if *r != table {
                    return false;
                }
            }
        }
    }
    true
}

/// `Z(H) ⊂ OZ(OH)`-style check and the supercommutation definition itself:
/// verifies `z x = (-1)^{p(x)p(z)} x z` for every center vector and basis `x`.
pub fn center_supercommutes(alg: &OddArcAlgebra, center: &OddCenter) -> bool {
    let arena = alg.arena();
    for (_, v) in &center.vectors {
        let z = center.index.to_element(arena, v);
        let pz = z.parity().expect("center vectors are parity homogeneous");
        for x in alg.basis_vectors() {
            let xe = alg.basis_element(x);
            let px = crate::arc::basis_parity(arena, x);
            let zx = alg.multiply(&z, &xe);
            let xz = alg.multiply(&xe, &z);
            let want = if pz * px == 1 { xz.neg() } else { xz };
            if zx != want {
                return false;
            }
        }
    }
    true
}

/// Checks `rank OZ(OH^n) = C(2n, n)` and that the kernel vectors are a basis
/// of a full direct summand (they always are; asserted via Smith form).
pub fn center_rank_certificate(center: &OddCenter, n: usize) -> Result<(), String> {
    let want = binomial(2 * n, n);
    if center.total_rank() != want {
        return Err(format!("center rank {} != C(2n,n) = {want}", center.total_rank()));
    }
    let dim = center.index.len();
    let mut mat = Mat::<BigInt>::zero(dim, center.total_rank());
    for (j, (_, v)) in center.vectors.iter().enumerate() {
        for i in 0..dim {
            mat[(i, j)] = v[i].clone();
        }
    }
    let snf = smith_normal_form(&mat);
    if snf.rank != center.total_rank() {
        return Err("center vectors are dependent".into());
    }
    for d in snf.divisors() {
        if !crate::linalg::EucRing::is_unit(&d) {
            return Err(format!("non-unit elementary divisor {d}: not a direct summand"));
        }
    }
    Ok(())
}
