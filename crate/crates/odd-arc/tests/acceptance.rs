//! Acceptance suite: one test per headline claim, each printing a pass line.
//!
//! Expected values quoted in the assertions are the published rank-2
//! multiplication tables and ranks; anything labelled "derived" was computed
//! by an independent oracle in this file.

use odd_arc::arc::{nonassoc_witness, oh2_table, ArcElement, BasisVector, OddArcAlgebra};
use odd_arc::center::{center_rank_certificate, odd_center, verify_iso};
use odd_arc::chronology::ChoiceC;
use odd_arc::coeff::GaussInt;
use odd_arc::diagram::{binomial, Arena};
use odd_arc::even::{even_center, mod2_structure_agreement, EvenArcAlgebra};
use odd_arc::quasi::{
    classify_sigma, d_sigma, paper_twist_n2, solve_mu, solve_twist, triple_sign, twisted_center,
    twisted_multiply, verify_twist, ClassifyOutcome, Degree, Quasi, SigmaClass,
};
use odd_arc::springer::{all_generators, quotient_basis};
use odd_arc::tqft::enumerate_triple_choices;
use rand::{Rng, SeedableRng};

/// Shorthand: a signed combination of basis vectors as an ArcElement.
fn combo(arena: &Arena, terms: &[(i64, BasisVector)]) -> ArcElement {
    let mut out = ArcElement::zero(arena.n());
    for &(c, v) in terms {
        out.add_assign(&ArcElement::basis(arena, v).scale(&GaussInt::from_int(c)));
    }
    out
}

fn bv(upper: usize, lower: usize, mask: u64) -> BasisVector {
    BasisVector { upper, lower, mask }
}

/// Criterion 1: the two OH^2 multiplication tables, entry for entry.
#[test]
fn criterion_1_oh2_tables() {
    let arena = Arena::new(2).unwrap();
    let alg = OddArcAlgebra::canonical(&arena);

    // Matching 0 is {(1,2),(3,4)} (the "a" of the example), matching 1 is
    // {(1,4),(2,3)} (the "b"). Circle slots are left-to-right: in W(a)a,
    // g1 = a1, g2 = a2; in W(b)b, g1 = b1 (outer), g2 = b2 (inner).
    let idaa = bv(0, 0, 0b00);
    let aoid = bv(0, 0, 0b01);
    let idat = bv(0, 0, 0b10);
    let aoat = bv(0, 0, 0b11);
    let idab = bv(0, 1, 0);
    let xo = bv(0, 1, 1);
    let idbb = bv(1, 1, 0b00);
    let boid = bv(1, 1, 0b01);
    let idbt = bv(1, 1, 0b10);
    let bobt = bv(1, 1, 0b11);
    let idba = bv(1, 0, 0);
    let yo = bv(1, 0, 1);

    // The a-side table: rows x in *(OH^2)a, columns y in a(OH^2)*.
    let a_rows = [idaa, aoid, idat, aoat, idba, yo];
    let a_cols = [idaa, aoid, idat, aoat, idab, xo];
    let a_expected: [[&[(i64, BasisVector)]; 6]; 6] = [
        [&[(1, idaa)], &[(1, aoid)], &[(1, idat)], &[(1, aoat)], &[(1, idab)], &[(1, xo)]],
        [&[(1, aoid)], &[], &[(1, aoat)], &[], &[(1, xo)], &[]],
        [&[(1, idat)], &[(-1, aoat)], &[], &[], &[(1, xo)], &[]],
        [&[(1, aoat)], &[], &[], &[], &[], &[]],
        [&[(1, idba)], &[(1, yo)], &[(1, yo)], &[], &[(1, idbt), (-1, boid)], &[(-1, bobt)]],
        [&[(1, yo)], &[], &[], &[], &[(-1, bobt)], &[]],
    ];

    // The b-side table: rows x in *(OH^2)b, columns y in b(OH^2)*.
    let b_rows = [idbb, boid, idbt, bobt, idab, xo];
    let b_cols = [idbb, boid, idbt, bobt, idba, yo];
    let b_expected: [[&[(i64, BasisVector)]; 6]; 6] = [
        [&[(1, idbb)], &[(1, boid)], &[(1, idbt)], &[(1, bobt)], &[(1, idba)], &[(1, yo)]],
        [&[(1, boid)], &[], &[(1, bobt)], &[], &[(1, yo)], &[]],
        [&[(1, idbt)], &[(-1, bobt)], &[], &[], &[(1, yo)], &[]],
        [&[(1, bobt)], &[], &[], &[], &[], &[]],
        [&[(1, idab)], &[(1, xo)], &[(1, xo)], &[], &[(1, aoid), (-1, idat)], &[(1, aoat)]],
        [&[(1, xo)], &[], &[], &[], &[(1, aoat)], &[]],
    ];

    let mut checked = 0;
    for (rows, cols, expected) in
        [(&a_rows, &a_cols, &a_expected), (&b_rows, &b_cols, &b_expected)]
    {
        for (i, &x) in rows.iter().enumerate() {
            for (j, &y) in cols.iter().enumerate() {
                let got = alg.multiply_basis(x, y);
                let want = combo(&arena, expected[i][j]);
                assert_eq!(got, want, "entry x = {x}, y = {y}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 72);

    // The generated table structs agree with the same data.
    for side in [0usize, 1] {
        let table = oh2_table(&alg, side);
        let (rows, cols, expected): (&[BasisVector], &[BasisVector], _) = if side == 0 {
            (&a_rows, &a_cols, &a_expected)
        } else {
            (&b_rows, &b_cols, &b_expected)
        };
        assert_eq!(table.rows, rows);
        assert_eq!(table.cols, cols);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(table.entries[i][j], combo(&arena, expected[i][j]));
            }
        }
    }
    println!("PASS criterion 1: OH^2 multiplication tables match entry-for-entry (72 + 72 entries)");
}

/// Criterion 2: the (xy)z = -x(yz) != 0 witness, over every enumerated choice
/// for n = 2 and the canonical choice for n = 3, 4.
#[test]
fn criterion_2_nonassociativity() {
    // n = 2: quantify over all choices of the three triples the witness uses;
    // the remaining triples of a full C never enter the computation.
    let arena = Arena::new(2).unwrap();
    let involved = [(1, 1, 0), (1, 0, 1), (1, 1, 1)];
    let all_choices: Vec<Vec<_>> =
        involved.iter().map(|&t| enumerate_triple_choices(&arena, t).unwrap()).collect();
    let mut combos = 0;
    for c0 in &all_choices[0] {
        for c1 in &all_choices[1] {
            for c2 in &all_choices[2] {
                let choice = ChoiceC::canonical(&arena)
                    .with_override(c0.clone())
                    .with_override(c1.clone())
                    .with_override(c2.clone());
                let alg = OddArcAlgebra::new(&arena, choice);
                let (_, _, _, xy_z, x_yz) = nonassoc_witness(&alg);
                assert!(!xy_z.is_zero());
                assert_eq!(xy_z, x_yz.neg());
                combos += 1;
            }
        }
    }
    assert_eq!(combos, 2 * 4 * 2);

    for n in [3, 4] {
        let arena = Arena::new(n).unwrap();
        let alg = OddArcAlgebra::canonical(&arena);
        let (_, _, _, xy_z, x_yz) = nonassoc_witness(&alg);
        assert!(!xy_z.is_zero());
        assert_eq!(xy_z, x_yz.neg(), "n = {n}");
    }
    println!("PASS criterion 2: (xy)z = -x(yz) != 0 for all 16 relevant C at n=2 and canonical C at n=3,4");
}

/// Criterion 3: structure constants of H^n and OH^n agree mod 2, exhaustively
/// over basis pairs of pieces for n <= 3.
#[test]
fn criterion_3_mod2_agreement() {
    let mut total = 0;
    for n in 1..=3 {
        let arena = Arena::new(n).unwrap();
        let odd = OddArcAlgebra::canonical(&arena);
        let even = EvenArcAlgebra::new(&arena);
        total += mod2_structure_agreement(&odd, &even).unwrap();
    }
    println!("PASS criterion 3: odd and even structure constants agree mod 2 ({total} basis pairs, n <= 3)");
}

/// Criterion 4: rank OZ(OH^n) = C(2n,n) for n = 1, 2, 3, free with unit
/// elementary divisors, and genuinely supercommuting.
#[test]
fn criterion_4_odd_center_rank() {
    for n in 1..=3 {
        let arena = Arena::new(n).unwrap();
        let alg = OddArcAlgebra::canonical(&arena);
        let center = odd_center(&alg);
        assert_eq!(center.total_rank(), binomial(2 * n, n), "n = {n}");
        center_rank_certificate(&center, n).unwrap();
        assert!(odd_arc::center::center_supercommutes(&alg, &center), "n = {n}");
    }
    println!("PASS criterion 4: rank OZ(OH^n) = C(2n,n) for n = 1,2,3 (2, 6, 20), free and supercommuting");
}

/// Optional long variant of criterion 4: n = 4 gives rank 70.
#[test]
#[ignore = "long-running optional check (~2 min)"]
fn criterion_4_optional_n4() {
    let arena = Arena::new(4).unwrap();
    let alg = OddArcAlgebra::canonical(&arena);
    let center = odd_center(&alg);
    assert_eq!(center.total_rank(), 70);
    center_rank_certificate(&center, 4).unwrap();
    println!("PASS criterion 4 (optional): rank OZ(OH^4) = 70, free");
}

/// Criterion 5: the Springer quotient is free of rank C(2n,n) for n <= 3,
/// with graded rank 1 + 3q^2 + 2q^4 at n = 2, and every generator reduces to 0.
#[test]
fn criterion_5_springer_quotient() {
    for n in 1..=3 {
        let qb = quotient_basis(n).unwrap();
        assert_eq!(qb.total_rank(), binomial(2 * n, n), "n = {n}");
        for g in all_generators(n) {
            assert!(qb.normal_form(&g).is_zero(), "n = {n}: generator {g} survived");
        }
        if n == 2 {
            assert_eq!(qb.graded_rank().to_poly_string(), "1 + 3q^2 + 2q^4");
        }
        // Graded rank agrees with the even center's mod 2 (they agree on the
        // nose at desk scale).
        let arena = Arena::new(n).unwrap();
        let even = EvenArcAlgebra::new(&arena);
        let zc = even_center(&even).graded_rank();
        assert_eq!(qb.graded_rank(), zc, "n = {n}: springer vs Z(H^n) graded rank");
    }
    println!("PASS criterion 5: OH(B_nn) free of rank 2, 6, 20 with the published graded rank at n = 2");
}

/// Criterion 6: the evaluation map is an isomorphism of graded algebras
/// between the Springer quotient and the odd center, for n = 1, 2, 3.
#[test]
fn criterion_6_theorem_iso() {
    for n in 1..=3 {
        let arena = Arena::new(n).unwrap();
        let alg = OddArcAlgebra::canonical(&arena);
        let qb = quotient_basis(n).unwrap();
        let center = odd_center(&alg);
        let report = verify_iso(&alg, &qb, &center).unwrap();
        assert_eq!(report.center_rank, binomial(2 * n, n));
        assert_eq!(report.quotient_rank, binomial(2 * n, n));
    }
    println!("PASS criterion 6: h kills all generators, is multiplicative and a graded bijection onto OZ (n = 1,2,3)");
}

/// Criterion 7: the 5-term cocycle identity for psi_C, exhaustive over arc
/// parts with quantum parts mod 4, for n = 2 and 3.
#[test]
fn criterion_7_cocycle_identity() {
    let mut total = 0;
    for n in [2usize, 3] {
        let arena = Arena::new(n).unwrap();
        let alg = OddArcAlgebra::canonical(&arena);
        let q = Quasi::new(&alg).unwrap();
        total += q.verify_cocycle().unwrap();
    }
    println!("PASS criterion 7: psi_C satisfies the 5-term identity ({total} instances, n = 2,3)");
}

fn degree_of(arena: &Arena, v: BasisVector) -> Degree {
    Degree {
        pair: (v.upper, v.lower),
        q: 2 * v.mask.count_ones() as i64 - arena.closure(v.upper, v.lower).circle_count() as i64
            + arena.n() as i64,
    }
}

/// Criterion 8: a twist exists for n = 2, 3; twisted associativity holds
/// exhaustively at n = 2 and on 10^5 sampled triples at n = 3; the explicit
/// published twist for n = 2 satisfies dtau = psi and reproduces the changed
/// table entries.
#[test]
fn criterion_8_twist() {
    // n = 2: solver twist + exhaustive associativity.
    let arena2 = Arena::new(2).unwrap();
    let alg2 = OddArcAlgebra::canonical(&arena2);
    let q2 = Quasi::new(&alg2).unwrap();
    let tw2 = solve_twist(&q2).unwrap();
    verify_twist(&q2, &tw2).unwrap();
    let basis2 = alg2.basis_vectors();
    for &x in &basis2 {
        for &y in &basis2 {
            if x.lower != y.upper {
                continue;
            }
            for &z in &basis2 {
                if y.lower != z.upper {
                    continue;
                }
                let (xe, ye, ze) =
                    (alg2.basis_element(x), alg2.basis_element(y), alg2.basis_element(z));
                let l = twisted_multiply(&alg2, &tw2, &twisted_multiply(&alg2, &tw2, &xe, &ye), &ze);
                let r = twisted_multiply(&alg2, &tw2, &xe, &twisted_multiply(&alg2, &tw2, &ye, &ze));
                assert_eq!(l, r);
            }
        }
    }

    // The published explicit twist: dtau_C = psi_C on the whole nerve...
    let paper = paper_twist_n2();
    verify_twist(&q2, &paper).unwrap();
    // ... and the twisted a-side table: three entries change as highlighted,
    // everything else (including the whole b-side table) stays.
    let table = oh2_table(&alg2, 0);
    for (i, &x) in table.rows.iter().enumerate() {
        for (j, &y) in table.cols.iter().enumerate() {
            let got = twisted_multiply(&alg2, &paper, &alg2.basis_element(x), &alg2.basis_element(y));
            let untwisted = &table.entries[i][j];
            let changed = [
                (bv(0, 0, 0b01), bv(0, 1, 0)), // a1 . 1_ab -> -xo
                (bv(0, 0, 0b10), bv(0, 1, 0)), // a2 . 1_ab -> -xo
                (bv(1, 0, 1), bv(0, 1, 0)),    // yo . 1_ab -> +bobt
            ];
            if changed.contains(&(x, y)) {
                assert_eq!(got, untwisted.neg(), "twisted entry at ({x}, {y})");
            } else {
                assert_eq!(got, *untwisted, "entry at ({x}, {y}) must not change");
            }
        }
    }
    let btable = oh2_table(&alg2, 1);
    for (i, &x) in btable.rows.iter().enumerate() {
        for (j, &y) in btable.cols.iter().enumerate() {
            let got = twisted_multiply(&alg2, &paper, &alg2.basis_element(x), &alg2.basis_element(y));
            assert_eq!(got, btable.entries[i][j], "b-side entry at ({x}, {y})");
        }
    }

    // n = 3: solve, verify the coboundary equation, and sample associativity.
    let arena3 = Arena::new(3).unwrap();
    let alg3 = OddArcAlgebra::canonical(&arena3);
    let q3 = Quasi::new(&alg3).unwrap();
    let tw3 = solve_twist(&q3).unwrap();
    verify_twist(&q3, &tw3).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0dda_2c);
    let size = arena3.size();
    let mut checked = 0usize;
    while checked < 100_000 {
        let (d, c, b, a) = (
            rng.gen_range(0..size),
            rng.gen_range(0..size),
            rng.gen_range(0..size),
            rng.gen_range(0..size),
        );
        let mx = rng.gen_range(0..(1u64 << arena3.closure(d, c).circle_count()));
        let my = rng.gen_range(0..(1u64 << arena3.closure(c, b).circle_count()));
        let mz = rng.gen_range(0..(1u64 << arena3.closure(b, a).circle_count()));
        let x = alg3.basis_element(bv(d, c, mx));
        let y = alg3.basis_element(bv(c, b, my));
        let z = alg3.basis_element(bv(b, a, mz));
        let l = twisted_multiply(&alg3, &tw3, &twisted_multiply(&alg3, &tw3, &x, &y), &z);
        let r = twisted_multiply(&alg3, &tw3, &x, &twisted_multiply(&alg3, &tw3, &y, &z));
        assert_eq!(l, r);
        checked += 1;
    }
    println!("PASS criterion 8: twists solved for n = 2,3; associativity exhaustive (n=2) and on {checked} sampled triples (n=3); published twist verified with its table");
}

/// Enumerates the sign classes of choices for n = 2: per-triple signs against
/// the canonical chronology, with a representative chronology for each sign.
fn n2_sigma_classes(
    arena: &Arena,
) -> (Vec<SigmaClass>, std::collections::HashMap<(usize, usize, usize, u8), odd_arc::chronology::Chronology>) {
    let mut reps = std::collections::HashMap::new();
    let mut split_triples = Vec::new();
    for c in 0..2 {
        for b in 0..2 {
            for a in 0..2 {
                let mut signs = std::collections::BTreeSet::new();
                for ch in enumerate_triple_choices(arena, (c, b, a)).unwrap() {
                    let s = triple_sign(arena, &ch).unwrap();
                    reps.entry((c, b, a, s)).or_insert(ch);
                    signs.insert(s);
                }
                match signs.len() {
                    1 => assert_eq!(signs.iter().next(), Some(&0), "merge-only triples are canonical"),
                    2 => split_triples.push((c, b, a)),
                    _ => unreachable!(),
                }
            }
        }
    }
    assert_eq!(split_triples, vec![(0, 1, 0), (1, 0, 1)]);
    let mut classes = Vec::new();
    for bits in 0..(1u32 << split_triples.len()) {
        let mut sigma = SigmaClass::new();
        for (k, &t) in split_triples.iter().enumerate() {
            if bits >> k & 1 == 1 {
                sigma.insert(t, 1);
            }
        }
        classes.push(sigma);
    }
    (classes, reps)
}

fn choice_for_sigma(
    arena: &Arena,
    sigma: &SigmaClass,
    reps: &std::collections::HashMap<(usize, usize, usize, u8), odd_arc::chronology::Chronology>,
) -> ChoiceC {
    let mut choice = ChoiceC::canonical(arena);
    for (&(c, b, a), &s) in sigma {
        if s == 1 {
            choice = choice.with_override(reps[&(c, b, a, 1)].clone());
        }
    }
    choice
}

/// Criterion 9: classification. Every pair of sign classes with equal
/// associators yields an explicit quasialgebra isomorphism (rescaling by
/// lambda); every pair of twisted algebras is isomorphic (rescaling by mu),
/// including a pair of different twists over the same choice.
#[test]
fn criterion_9_classification() {
    let arena = Arena::new(2).unwrap();
    let (classes, reps) = n2_sigma_classes(&arena);
    assert_eq!(classes.len(), 4, "1024 choices collapse onto 4 sign classes");

    // Honest check of d eta = phi'^ch - phi^ch at evaluation-determined
    // quadruples, for every ordered pair of representatives.
    let algs: Vec<OddArcAlgebra> = classes
        .iter()
        .map(|s| OddArcAlgebra::new(&arena, choice_for_sigma(&arena, s, &reps)))
        .collect();
    let quasis: Vec<Quasi> = algs.iter().map(|a| Quasi::new(a).unwrap()).collect();
    for (i, qi) in quasis.iter().enumerate() {
        for (j, qj) in quasis.iter().enumerate() {
            for d in 0..2 {
                for c in 0..2 {
                    for b in 0..2 {
                        for a in 0..2 {
                            let quad = (d, c, b, a);
                            if !(qi.is_determined(quad) && qj.is_determined(quad)) {
                                continue;
                            }
                            let eta = |t: (usize, usize, usize)| {
                                (classes[i].get(&t).copied().unwrap_or(0)
                                    + classes[j].get(&t).copied().unwrap_or(0))
                                    % 2
                            };
                            let deta = (eta((c, b, a)) + eta((d, b, a)) + eta((d, c, a)) + eta((d, c, b))) % 2;
                            let lhs = (qj.phi_ch(d, c, b, a).unwrap() + 2
                                - qi.phi_ch(d, c, b, a).unwrap())
                                % 2;
                            assert_eq!(deta, lhs, "d eta = phi' - phi at {quad:?} for classes {i},{j}");
                        }
                    }
                }
            }
        }
    }

    let mut iso_pairs = 0;
    let mut differing = 0;
    for (i, si) in classes.iter().enumerate() {
        for (j, sj) in classes.iter().enumerate() {
            match classify_sigma(&arena, si, sj).unwrap() {
                ClassifyOutcome::Isomorphic { lambda } => {
                    // rho(x) = (-1)^{lambda(|x|_B)} x intertwines the products.
                    let basis = algs[i].basis_vectors();
                    let sgn = |v: BasisVector| lambda.get(&(v.upper, v.lower)).copied().unwrap_or(0);
                    for &x in &basis {
                        for &y in &basis {
                            if x.lower != y.upper {
                                continue;
                            }
                            let xe = algs[i].basis_element(x);
                            let ye = algs[i].basis_element(y);
                            let prod_c = algs[i].multiply(&xe, &ye);
                            let prod_cp = algs[j].multiply(&xe, &ye);
                            // rho(x .C y) = rho(x) .C' rho(y)
                            let lever = (sgn(x) + sgn(y)) % 2;
                            let mut lhs = prod_c.clone();
                            // rho acts on the product piece (x.upper, y.lower).
                            if lambda.get(&(x.upper, y.lower)).copied().unwrap_or(0) == 1 {
                                lhs = lhs.neg();
                            }
                            let rhs = if lever == 1 { prod_cp.neg() } else { prod_cp };
                            assert_eq!(lhs, rhs, "classes ({i},{j}) at x={x}, y={y}");
                        }
                    }
                    iso_pairs += 1;
                }
                ClassifyOutcome::AssociatorsDiffer => {
                    // The associators must genuinely differ: d(sigma xor sigma') != 0.
                    let mut delta = SigmaClass::new();
                    for t in si.keys().chain(sj.keys()) {
                        let v = (si.get(t).copied().unwrap_or(0) + sj.get(t).copied().unwrap_or(0)) % 2;
                        if v == 1 {
                            delta.insert(*t, 1);
                        } else {
                            delta.remove(t);
                        }
                    }
                    let mut nonzero = false;
                    for d in 0..2 {
                        for c in 0..2 {
                            for b in 0..2 {
                                for a in 0..2 {
                                    if d_sigma(&delta, (d, c, b, a)) != 0 {
                                        nonzero = true;
                                    }
                                }
                            }
                        }
                    }
                    assert!(nonzero);
                    differing += 1;
                }
            }
        }
    }
    assert_eq!(iso_pairs + differing, 16);
    assert!(iso_pairs >= 4, "at least the diagonal pairs are isomorphic");

    // Twisted classification: all pairs of (choice, twist) yield an
    // isomorphism x -> i^{mu(|x|)} x.
    let q_can = Quasi::new(&algs[0]).unwrap();
    let tau_can = solve_twist(&q_can).unwrap();
    let sigma_of = |cl: &SigmaClass| {
        let mut m = std::collections::HashMap::new();
        for (&t, &v) in cl {
            m.insert(t, v);
        }
        m
    };
    let mut twisted_iso_pairs = 0;
    for (i, si) in classes.iter().enumerate() {
        for (j, sj) in classes.iter().enumerate() {
            let tau_i = tau_can.plus_two_sigma(&sigma_of(si));
            let tau_j = tau_can.plus_two_sigma(&sigma_of(sj));
            // Sanity: each tau twists its own algebra associative.
            let qi = &quasis[i];
            let qj = &quasis[j];
            verify_twist(qi, &tau_i).unwrap();
            verify_twist(qj, &tau_j).unwrap();
            let eta = |t: (usize, usize, usize)| {
                (si.get(&t).copied().unwrap_or(0) + sj.get(&t).copied().unwrap_or(0)) % 2
            };
            let theta = |g: &Degree, h: &Degree| -> i64 {
                let t = (g.pair.0, g.pair.1, h.pair.1);
                tau_i.value(g, h) as i64 + 2 * eta(t) as i64 - tau_j.value(g, h) as i64
            };
            let mu = solve_mu(&arena, theta).expect("theta is a coboundary");
            let mu_of = |dg: &Degree| {
                if dg.pair.0 == dg.pair.1 && dg.q.rem_euclid(4) == 0 {
                    0u8
                } else {
                    mu.get(&(dg.pair.0, dg.pair.1, dg.q.rem_euclid(4) as u8)).copied().unwrap_or(0)
                }
            };
            // rho(x) = i^{mu(|x|)} x is an isomorphism of the twisted algebras.
            let basis = algs[i].basis_vectors();
            for &x in &basis {
                for &y in &basis {
                    if x.lower != y.upper {
                        continue;
                    }
                    let xe = algs[i].basis_element(x);
                    let ye = algs[i].basis_element(y);
                    let dx = degree_of(&arena, x);
                    let dy = degree_of(&arena, y);
                    let lhs = twisted_multiply(&algs[i], &tau_i, &xe, &ye)
                        .scale(&GaussInt::i_pow(mu_of(&dx.compose(&dy))));
                    let rhs = twisted_multiply(&algs[j], &tau_j, &xe, &ye)
                        .scale(&GaussInt::i_pow((mu_of(&dx) + mu_of(&dy)) % 4));
                    assert_eq!(lhs, rhs, "twisted classes ({i},{j}) at x={x}, y={y}");
                }
            }
            twisted_iso_pairs += 1;
        }
    }
    assert_eq!(twisted_iso_pairs, 16);

    // Two different twists over the same choice are also isomorphic.
    let paper = paper_twist_n2();
    let theta = |g: &Degree, h: &Degree| -> i64 {
        tau_can.value(g, h) as i64 - paper.value(g, h) as i64
    };
    let mu = solve_mu(&arena, theta).expect("difference of twists is a coboundary");
    assert!(mu.len() < 64);
    println!("PASS criterion 9: {iso_pairs} sign-class pairs isomorphic, {differing} correctly reported as differing associators; all {twisted_iso_pairs} twisted pairs isomorphic");
}

/// Criterion 10: non-isomorphism evidence. OZ(OH^2_tau) has graded rank
/// 1 + 2q^2 + 2q^4 with exactly the five published generators; the ordinary
/// center of the twisted algebra has rank 0 in degree 2, against 3 for Z(H^2).
#[test]
fn criterion_10_non_isomorphism() {
    let arena = Arena::new(2).unwrap();
    let alg = OddArcAlgebra::canonical(&arena);
    let paper = paper_twist_n2();

    let oz = twisted_center(&alg, &paper, true);
    assert_eq!(oz.graded_rank().to_poly_string(), "1 + 2q^2 + 2q^4");
    // The five published generators span exactly the computed center: each
    // generator lies in the kernel lattice and the transition is unimodular.
    let gens: Vec<ArcElement> = vec![
        ArcElement::basis(&arena, bv(0, 0, 0)).add(&ArcElement::basis(&arena, bv(1, 1, 0))),
        combo(&arena, &[(1, bv(0, 0, 0b01)), (-1, bv(0, 0, 0b10))]),
        combo(&arena, &[(1, bv(1, 1, 0b01)), (-1, bv(1, 1, 0b10))]),
        ArcElement::basis(&arena, bv(0, 0, 0b11)),
        ArcElement::basis(&arena, bv(1, 1, 0b11)),
    ];
    use odd_arc::linalg::{smith_normal_form, solve_exact, Mat};
    let dim = oz.basis_order.len();
    let rank = oz.vectors.len();
    assert_eq!(rank, 5);
    let mut kmat = Mat::<GaussInt>::zero(dim, rank);
    for (j, (_, v)) in oz.vectors.iter().enumerate() {
        for i in 0..dim {
            kmat[(i, j)] = v[i].clone();
        }
    }
    let mut transition = Mat::<GaussInt>::zero(rank, gens.len());
    for (col, g) in gens.iter().enumerate() {
        let coords = oz.coords_of(g);
        let sol = solve_exact(&kmat, &coords).expect("generator lies in the center lattice");
        for (row, c) in sol.into_iter().enumerate() {
            transition[(row, col)] = c;
        }
    }
    let snf = smith_normal_form(&transition);
    assert_eq!(snf.rank, 5);
    assert!(snf.all_divisors_unit(), "published generators span the center exactly");

    // Every center vector supercommutes under the twisted product.
    for (_, v) in &oz.vectors {
        let z = oz.to_element(&arena, v);
        let pz = z.parity().unwrap();
        for x in alg.basis_vectors() {
            let xe = alg.basis_element(x);
            let px = (x.mask.count_ones() % 2) as u8;
            let zx = twisted_multiply(&alg, &paper, &z, &xe);
            let xz = twisted_multiply(&alg, &paper, &xe, &z);
            let want = if pz * px == 1 { xz.neg() } else { xz };
            assert_eq!(zx, want);
        }
    }

    let z_tau = twisted_center(&alg, &paper, false);
    assert_eq!(z_tau.rank_in_degree(2), 0, "degree-2 part of Z(OH^2_tau) vanishes");

    let even = EvenArcAlgebra::new(&arena);
    let zh2 = even_center(&even);
    assert_eq!(zh2.graded_rank().to_poly_string(), "1 + 3q^2 + 2q^4");
    assert_eq!(zh2.graded_rank().0.get(&2), Some(&3));

    // The twisted diagonal keeps anticommuting in single-generator degrees.
    for a in 0..2 {
        for i in 0..2u32 {
            for j in 0..2u32 {
                let x = alg.basis_element(bv(a, a, 1 << i));
                let y = alg.basis_element(bv(a, a, 1 << j));
                let xy = twisted_multiply(&alg, &paper, &x, &y);
                let yx = twisted_multiply(&alg, &paper, &y, &x);
                assert_eq!(xy, yx.neg());
            }
        }
    }
    println!("PASS criterion 10: OZ(OH^2_tau) = 1 + 2q^2 + 2q^4 with exactly the five published generators; deg-2 of Z(OH^2_tau) is 0 vs 3 for Z(H^2)");
}
