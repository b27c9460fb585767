//! The groupoid grading of the odd arc algebra, its associator 3-cocycle,
//! the coboundary twist making the algebra associative over the Gaussian
//! integers, and the classification of the resulting algebras.
//!
//! Degrees are pairs (arc part, quantum part). The arc part of a piece
//! element of `W(c)b` is the ordered pair `(c, b)`; composition is
//! `(c, b) o (b, a) = (c, a)`. Quantum parts are reduced mod 4 throughout the
//! cochain computations, which is faithful for the associator.

use crate::arc::{ArcElement, BasisVector, OddArcAlgebra};
use crate::chronology::Chronology;
use crate::coeff::GaussInt;
use crate::diagram::Arena;
use crate::exterior::ExtElement;
use crate::linalg::{Gf2System, Mod4System};
use crate::tqft::{split_count, Executor};
use std::collections::{BTreeMap, HashMap};

/// A homogeneous degree in the grading groupoid.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Degree {
    /// `(upper, lower)` matching IDs: the diagram `W(upper)lower`.
    pub pair: (usize, usize),
    /// Quantum degree.
    pub q: i64,
}

impl Degree {
    pub fn composable(&self, rhs: &Degree) -> bool {
        self.pair.1 == rhs.pair.0
    }

    pub fn compose(&self, rhs: &Degree) -> Degree {
        debug_assert!(self.composable(rhs));
        Degree { pair: (self.pair.0, rhs.pair.1), q: self.q + rhs.q }
    }

    pub fn is_identity(&self) -> bool {
        self.pair.0 == self.pair.1 && self.q == 0
    }

    /// Twice the parity: `q - n + |W(pair)|`, well defined mod 4.
    pub fn twice_parity(&self, arena: &Arena) -> i64 {
        self.q - arena.n() as i64 + arena.closure(self.pair.0, self.pair.1).circle_count() as i64
    }
}

#[derive(Debug, thiserror::Error)]
pub enum QuasiError {
    #[error("the two composite evaluations are not proportional by a sign (quadruple {0:?})")]
    NotProportional((usize, usize, usize, usize)),
    #[error("both composite evaluations vanish identically (quadruple {0:?})")]
    BothZero((usize, usize, usize, usize)),
    #[error("cocycle identity fails at {0:?}")]
    CocycleViolation(String),
    #[error("no twist exists for the given system")]
    NoTwist,
    #[error("associators differ; no isomorphism attempted")]
    AssociatorsDiffer,
    #[error("chronology comparison failed: maps not proportional")]
    EtaUndefined,
    #[error(transparent)]
    Tqft(#[from] crate::tqft::TqftError),
}

/// Associator bookkeeping for one choice C.
///
/// The chronology-change sign of a quadruple is read off by evaluating the
/// two composite cobordisms on the full basis of the triple stack. Composites
/// of positive genus are killed by the odd functor, so a few quadruples are
/// not determined by evaluation; their signs are completed by solving the
/// 5-term identity (a small GF(2) system, solvable because the genuine
/// chronology-change signs satisfy it).
pub struct Quasi<'a, 'b> {
    pub alg: &'b OddArcAlgebra<'a>,
    phi_table: HashMap<(usize, usize, usize, usize), u8>,
    /// Quadruples whose sign was fixed by evaluation (not by completion).
    determined: std::collections::HashSet<(usize, usize, usize, usize)>,
}

impl<'a, 'b> Quasi<'a, 'b> {
    pub fn new(alg: &'b OddArcAlgebra<'a>) -> Result<Self, QuasiError> {
        let mut q = Quasi { alg, phi_table: HashMap::new(), determined: std::collections::HashSet::new() };
        q.build_phi_table()?;
        Ok(q)
    }

    pub fn arena(&self) -> &Arena {
        self.alg.arena()
    }

    /// Fills the sign table. The evaluation-determined part is computed for
    /// this choice directly. For the canonical choice, undetermined signs are
    /// completed by solving the 5-term identity; for any other choice the
    /// completed canonical table is transported along the per-triple signs
    /// (`phi_C = phi_can + d sigma`), which keeps the tables of different
    /// choices mutually coherent. Where evaluation does determine this
    /// choice's sign, agreement with the transported value is asserted.
    fn build_phi_table(&mut self) -> Result<(), QuasiError> {
        let size = self.arena().size();
        let mut raw: HashMap<(usize, usize, usize, usize), u8> = HashMap::new();
        for d in 0..size {
            for c in 0..size {
                for b in 0..size {
                    for a in 0..size {
                        if let Some(s) = self.phi_ch_eval(d, c, b, a)? {
                            raw.insert((d, c, b, a), s);
                            self.determined.insert((d, c, b, a));
                        }
                    }
                }
            }
        }

        let alg = self.alg;
        let arena: &Arena = alg.arena();
        let canonical = (0..size)
            .flat_map(|c| (0..size).flat_map(move |b| (0..size).map(move |a| (c, b, a))))
            .all(|(c, b, a)| {
                *alg.choice().get(c, b, a) == Chronology::canonical((c, b, a), arena.matching(b))
            });

        if canonical {
            self.phi_table = complete_by_pentagon(arena, &raw)?;
        } else {
            // sigma(t) = sign of this choice's chronology against canonical.
            let mut sigma: SigmaClass = SigmaClass::new();
            for c in 0..size {
                for b in 0..size {
                    for a in 0..size {
                        let s = triple_sign(arena, alg.choice().get(c, b, a))?;
                        if s == 1 {
                            sigma.insert((c, b, a), 1);
                        }
                    }
                }
            }
            let canon_alg = OddArcAlgebra::canonical(arena);
            let canon_quasi = Quasi::new(&canon_alg)?;
            for d in 0..size {
                for c in 0..size {
                    for b in 0..size {
                        for a in 0..size {
                            let quad = (d, c, b, a);
                            let v = (canon_quasi.phi_table[&quad] + d_sigma(&sigma, quad)) % 2;
                            if let Some(&r) = raw.get(&quad) {
                                if r != v {
                                    return Err(QuasiError::CocycleViolation(format!(
                                        "transported sign disagrees with evaluation at {quad:?}"
                                    )));
                                }
                            }
                            self.phi_table.insert(quad, v);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the quadruple's sign came from evaluation (as opposed to the
    /// 5-term completion).
    pub fn is_determined(&self, quad: (usize, usize, usize, usize)) -> bool {
        self.determined.contains(&quad)
    }

    /// Evaluates one association route on an element of the triple stack
    /// `W(d)c W(c)b W(b)a`, landing on `close(d, a)`.
    ///   - `upper_first`: contract the arcs of `c` (cobordism of `(d,c,b)`)
    ///     and then the arcs of `b` (cobordism of `(d,b,a)`);
    ///   - otherwise: arcs of `b` (cobordism of `(c,b,a)`), then arcs of `c`
    ///     (cobordism of `(d,c,a)`).
    pub fn route_eval(
        &self,
        quad: (usize, usize, usize, usize),
        x: &ExtElement,
        upper_first: bool,
    ) -> Result<ExtElement, QuasiError> {
        let (d, c, b, a) = quad;
        let arena = self.arena();
        let choice = self.alg.choice();
        let mut exec = Executor::new(vec![
            arena.closure(d, c).clone(),
            arena.closure(c, b).clone(),
            arena.closure(b, a).clone(),
        ]);
        let mut v = x.clone();
        if upper_first {
            exec.run(0, &choice.get(d, c, b).steps, &mut v)?;
            exec.run(1, &choice.get(d, b, a).steps, &mut v)?;
        } else {
            exec.run(1, &choice.get(c, b, a).steps, &mut v)?;
            exec.run(0, &choice.get(d, c, a).steps, &mut v)?;
        }
        exec.finalize(arena.closure(d, a), &mut v)?;
        Ok(v)
    }

    /// Evaluates both composite maps on the full basis of the triple stack
    /// and extracts the global sign relating them; `None` when both maps
    /// vanish identically (positive-genus composites).
    fn phi_ch_eval(&self, d: usize, c: usize, b: usize, a: usize) -> Result<Option<u8>, QuasiError> {
        let arena = self.arena();
        let total = arena.closure(d, c).circle_count()
            + arena.closure(c, b).circle_count()
            + arena.closure(b, a).circle_count();
        let gens = (1u64 << total) - 1;
        let mut sign: Option<u8> = None;
        for mask in 0..(1u64 << total) {
            let x = ExtElement::monomial(mask, gens, 0);
            let r1 = self.route_eval((d, c, b, a), &x, true)?;
            let r2 = self.route_eval((d, c, b, a), &x, false)?;
            if r1.is_zero() && r2.is_zero() {
                continue;
            }
            let this = if r1 == r2 {
                0
            } else if r1 == r2.neg() {
                1
            } else {
                return Err(QuasiError::NotProportional((d, c, b, a)));
            };
            match sign {
                None => sign = Some(this),
                Some(s) if s == this => {}
                _ => return Err(QuasiError::NotProportional((d, c, b, a))),
            }
        }
        Ok(sign)
    }

    /// The chronology-change sign of a quadruple.
    pub fn phi_ch(&self, d: usize, c: usize, b: usize, a: usize) -> Result<u8, QuasiError> {
        Ok(self.phi_table[&(d, c, b, a)])
    }

    /// The supercommutation part of the associator, in `Z/4`.
    pub fn phi_com(&self, gx: &Degree, gy: &Degree, gz: &Degree) -> u8 {
        debug_assert!(gx.composable(gy) && gy.composable(gz));
        let arena = self.arena();
        let s = split_count(arena, gy.pair.0, gy.pair.1, gz.pair.1) as i64;
        (gx.twice_parity(arena) * s).rem_euclid(4) as u8
    }

    /// The full associator `psi_C = 2 phi^ch + phi^com` in `Z/4`.
    pub fn psi(&self, gx: &Degree, gy: &Degree, gz: &Degree) -> Result<u8, QuasiError> {
        debug_assert!(gx.composable(gy) && gy.composable(gz));
        let ch = self.phi_ch(gx.pair.0, gx.pair.1, gy.pair.1, gz.pair.1)?;
        Ok((2 * ch + self.phi_com(gx, gy, gz)) % 4)
    }

    /// The sign associator on the parity subgroupoid, `phi_C` in `Z/2`
    /// (only meaningful when the parities are integral, i.e. psi is even).
    pub fn phi(&self, gx: &Degree, gy: &Degree, gz: &Degree) -> Result<u8, QuasiError> {
        let psi = self.psi(gx, gy, gz)?;
        debug_assert_eq!(psi % 2, 0, "phi is defined on the subgroupoid where psi is even");
        Ok((psi / 2) % 2)
    }

    /// Checks the 5-term cocycle identity for `psi_C` over all composable
    /// arc quadruples, with quantum parts exhaustive mod 4.
    pub fn verify_cocycle(&self) -> Result<usize, QuasiError> {
        let size = self.arena().size();
        let mut checked = 0;
        for e in 0..size {
            for d in 0..size {
                for c in 0..size {
                    for b in 0..size {
                        for a in 0..size {
                            for q in 0..256u32 {
                                let (k1, k2, k3, k4) =
                                    ((q & 3) as i64, (q >> 2 & 3) as i64, (q >> 4 & 3) as i64, (q >> 6 & 3) as i64);
                                let g = Degree { pair: (e, d), q: k1 };
                                let h = Degree { pair: (d, c), q: k2 };
                                let k = Degree { pair: (c, b), q: k3 };
                                let l = Degree { pair: (b, a), q: k4 };
                                let lhs = (self.psi(&h, &k, &l)? as i64
                                    + self.psi(&g, &h.compose(&k), &l)? as i64
                                    + self.psi(&g, &h, &k)? as i64)
                                    .rem_euclid(4);
                                let rhs = (self.psi(&g.compose(&h), &k, &l)? as i64
                                    + self.psi(&g, &h, &k.compose(&l))? as i64)
                                    .rem_euclid(4);
                                if lhs != rhs {
                                    return Err(QuasiError::CocycleViolation(format!(
                                        "arcs ({e},{d},{c},{b},{a}), quanta ({k1},{k2},{k3},{k4}): {lhs} != {rhs}"
                                    )));
                                }
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
        Ok(checked)
    }
}

/// A twist: a normalized 2-cochain on composable degree pairs with values in
/// `Z/4` (the exponent of `i`), 4-periodic in both quantum parts.
#[derive(Clone, Debug, Default)]
pub struct Twist {
    /// Keyed by `(c, b, a, q_left mod 4, q_right mod 4)` for the pair
    /// `((c,b), qg) , ((b,a), qh)`. Missing keys are 0.
    pub values: HashMap<(usize, usize, usize, u8, u8), u8>,
}

impl Twist {
    pub fn value(&self, g: &Degree, h: &Degree) -> u8 {
        debug_assert!(g.composable(h));
        let key =
            (g.pair.0, g.pair.1, h.pair.1, g.q.rem_euclid(4) as u8, h.q.rem_euclid(4) as u8);
        self.values.get(&key).copied().unwrap_or(0)
    }

    pub fn set(&mut self, key: (usize, usize, usize, u8, u8), v: u8) {
        if v % 4 != 0 {
            self.values.insert(key, v % 4);
        } else {
            self.values.remove(&key);
        }
    }

    /// Adds `2 * sigma` on the arc pairs in `sigma` (quantum-independent).
    pub fn plus_two_sigma(&self, sigma: &HashMap<(usize, usize, usize), u8>) -> Twist {
        let mut out = self.clone();
        for (&(c, b, a), &s) in sigma {
            if s % 2 == 1 {
                for k in 0..4u8 {
                    for l in 0..4u8 {
                        let key = (c, b, a, k, l);
                        let cur = out.values.get(&key).copied().unwrap_or(0);
                        out.set(key, (cur + 2) % 4);
                    }
                }
            }
        }
        out
    }
}

/// The coboundary equation used throughout:
/// `dtau(g,h,f) = tau(g,h) - tau(g,hf) + tau(gh,f) - tau(h,f)`.
pub fn dtau(tw: &Twist, g: &Degree, h: &Degree, f: &Degree) -> i64 {
    let a = tw.value(g, h) as i64;
    let b = tw.value(g, &h.compose(f)) as i64;
    let c = tw.value(&g.compose(h), f) as i64;
    let d = tw.value(h, f) as i64;
    (a - b + c - d).rem_euclid(4)
}

/// Verifies `dtau = psi_C` on the whole nerve (arc parts exhaustive, quantum
/// parts mod 4). Returns the number of triples checked.
pub fn verify_twist(q: &Quasi, tw: &Twist) -> Result<usize, QuasiError> {
    let size = q.arena().size();
    let mut checked = 0;
    for d in 0..size {
        for c in 0..size {
            for b in 0..size {
                for a in 0..size {
                    for quanta in 0..64u32 {
                        let (k, l, m) =
                            ((quanta & 3) as i64, (quanta >> 2 & 3) as i64, (quanta >> 4 & 3) as i64);
                        let g = Degree { pair: (d, c), q: k };
                        let h = Degree { pair: (c, b), q: l };
                        let f = Degree { pair: (b, a), q: m };
                        let want = q.psi(&g, &h, &f)? as i64;
                        if dtau(tw, &g, &h, &f) != want {
                            return Err(QuasiError::CocycleViolation(format!(
                                "dtau != psi at arcs ({d},{c},{b},{a}), quanta ({k},{l},{m})"
                            )));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Solves `dtau = psi_C` over `Z/4` with the identity normalization
/// `tau(-, id) = tau(id, -) = 0`, quantum parts in the 4-periodic ansatz.
pub fn solve_twist(q: &Quasi) -> Result<Twist, QuasiError> {
    let size = q.arena().size();
    // Unknown index: (c, b, a, k4, l4) minus the normalized ones.
    let mut index: HashMap<(usize, usize, usize, u8, u8), usize> = HashMap::new();
    let mut keys = Vec::new();
    for c in 0..size {
        for b in 0..size {
            for a in 0..size {
                for k in 0..4u8 {
                    for l in 0..4u8 {
                        if c == b && k == 0 {
                            continue; // left identity: forced 0
                        }
                        if b == a && l == 0 {
                            continue; // right identity: forced 0
                        }
                        let key = (c, b, a, k, l);
                        index.insert(key, keys.len());
                        keys.push(key);
                    }
                }
            }
        }
    }
    let mut sys = Mod4System::new(keys.len());
    for d in 0..size {
        for c in 0..size {
            for b in 0..size {
                for a in 0..size {
                    for quanta in 0..64u32 {
                        let (k, l, m) =
                            ((quanta & 3) as i64, (quanta >> 2 & 3) as i64, (quanta >> 4 & 3) as i64);
                        let g = Degree { pair: (d, c), q: k };
                        let h = Degree { pair: (c, b), q: l };
                        let f = Degree { pair: (b, a), q: m };
                        let mut terms: Vec<(usize, i64)> = Vec::new();
                        let push = |gg: &Degree, hh: &Degree, coef: i64, terms: &mut Vec<(usize, i64)>| {
                            let key = (
                                gg.pair.0,
                                gg.pair.1,
                                hh.pair.1,
                                gg.q.rem_euclid(4) as u8,
                                hh.q.rem_euclid(4) as u8,
                            );
                            if let Some(&i) = index.get(&key) {
                                terms.push((i, coef));
                            }
                        };
                        push(&g, &h, 1, &mut terms);
                        push(&g, &h.compose(&f), -1, &mut terms);
                        push(&g.compose(&h), &f, 1, &mut terms);
                        push(&h, &f, -1, &mut terms);
                        let rhs = q.psi(&g, &h, &f)?;
                        sys.add_equation(terms, rhs);
                    }
                }
            }
        }
    }
    let sol = sys.solve().ok_or(QuasiError::NoTwist)?;
    debug_assert!(sys.verify(&sol));
    let mut tw = Twist::default();
    for (i, key) in keys.iter().enumerate() {
        tw.set(*key, sol[i]);
    }
    Ok(tw)
}

/// The explicit rank-2 twist of the worked example: on `(W(a)a, q) , (W(a)b, *)`
/// pairs the value is `q`, on `(W(b)a, q) , (W(a)b, *)` pairs it is `q - 1`,
/// and 0 elsewhere (matching IDs: a = 0, b = 1).
pub fn paper_twist_n2() -> Twist {
    let mut tw = Twist::default();
    for q in 0..4u8 {
        for l in 0..4u8 {
            tw.set((0, 0, 1, q, l), q % 4);
            tw.set((1, 0, 1, q, l), (q + 3) % 4);
        }
    }
    tw
}

/// Twisted multiplication `x *_tau y = i^{tau(|x|,|y|)} x y`, extended
/// bilinearly over (piece, monomial) bidegrees.
pub fn twisted_multiply(
    alg: &OddArcAlgebra,
    tw: &Twist,
    x: &ArcElement,
    y: &ArcElement,
) -> ArcElement {
    let arena = alg.arena();
    let n = arena.n() as i64;
    let mut out = ArcElement::zero(arena.n());
    for (&(c, bx), ex) in x.pieces() {
        for (&(by, a), ey) in y.pieces() {
            if bx != by {
                continue;
            }
            let m_x = arena.closure(c, bx).circle_count() as i64;
            let m_y = arena.closure(by, a).circle_count() as i64;
            for (mx, cx) in ex.terms() {
                for (my, cy) in ey.terms() {
                    let gx = Degree { pair: (c, bx), q: 2 * mx.count_ones() as i64 - m_x + n };
                    let gy = Degree { pair: (by, a), q: 2 * my.count_ones() as i64 - m_y + n };
                    let factor = GaussInt::i_pow(tw.value(&gx, &gy));
                    let coeff = &(cx * cy) * &factor;
                    let base = alg.multiply_basis(
                        BasisVector { upper: c, lower: bx, mask: *mx },
                        BasisVector { upper: by, lower: a, mask: *my },
                    );
                    out.add_assign(&base.scale(&coeff));
                }
            }
        }
    }
    out
}

/// Per-triple chronology signs against the canonical chronology: every
/// enumerated chronology's evaluation map is plus or minus the canonical one.
pub fn triple_sign(arena: &Arena, ch: &Chronology) -> Result<u8, QuasiError> {
    let (c, b, a) = ch.triple;
    let canon = Chronology::canonical((c, b, a), arena.matching(b));
    let m_up = arena.closure(c, b).circle_count() as u32;
    let m_lo = arena.closure(b, a).circle_count() as u32;
    let n = arena.n() as i64;
    let mut sign: Option<u8> = None;
    for mx in 0..(1u64 << m_up) {
        for my in 0..(1u64 << m_lo) {
            let x = ExtElement::monomial(mx, (1u64 << m_up) - 1, n);
            let y = ExtElement::monomial(my, (1u64 << m_lo) - 1, n);
            let p1 = crate::tqft::multiply_pieces(arena, ch, &x, &y)?;
            let p2 = crate::tqft::multiply_pieces(arena, &canon, &x, &y)?;
            if p1.is_zero() && p2.is_zero() {
                continue;
            }
            let this = if p1 == p2 {
                0u8
            } else if p1 == p2.neg() {
                1u8
            } else {
                return Err(QuasiError::EtaUndefined);
            };
            match sign {
                None => sign = Some(this),
                Some(s) if s == this => {}
                _ => return Err(QuasiError::EtaUndefined),
            }
        }
    }
    sign.ok_or(QuasiError::EtaUndefined)
}

/// A sign class of choices: the per-triple sign vector against canonical,
/// as a 2-cochain on composable arc pairs.
pub type SigmaClass = BTreeMap<(usize, usize, usize), u8>;

/// `d sigma (g,h,f) = sigma(h,f) - sigma(gh,f) + sigma(g,hf) - sigma(g,h)`
/// in `Z/2` (signs, so orientation of terms does not matter mod 2).
pub fn d_sigma(sigma: &SigmaClass, quad: (usize, usize, usize, usize)) -> u8 {
    let (d, c, b, a) = quad;
    let get = |t: (usize, usize, usize)| sigma.get(&t).copied().unwrap_or(0);
    (get((c, b, a)) + get((d, b, a)) + get((d, c, a)) + get((d, c, b))) % 2
}

/// Result of a quasialgebra classification attempt.
pub enum ClassifyOutcome {
    /// A rescaling isomorphism `x -> (-1)^{lambda(|x|_B)} x`.
    Isomorphic { lambda: BTreeMap<(usize, usize), u8> },
    AssociatorsDiffer,
}

/// Classifies two sign classes: when the chronology associators agree, finds
/// `lambda` with `d lambda = eta` and returns the rescaling isomorphism.
pub fn classify_sigma(
    arena: &Arena,
    sigma_c: &SigmaClass,
    sigma_cp: &SigmaClass,
) -> Result<ClassifyOutcome, QuasiError> {
    let size = arena.size();
    // eta(g, h) = sigma_C - sigma_C' on each composable pair (triple).
    let eta = |t: (usize, usize, usize)| {
        (sigma_c.get(&t).copied().unwrap_or(0) + sigma_cp.get(&t).copied().unwrap_or(0)) % 2
    };
    // The associators agree iff d(sigma xor sigma') = 0 on every quadruple.
    let mut delta = SigmaClass::new();
    for c in 0..size {
        for b in 0..size {
            for a in 0..size {
                let v = eta((c, b, a));
                if v == 1 {
                    delta.insert((c, b, a), 1);
                }
            }
        }
    }
    for d in 0..size {
        for c in 0..size {
            for b in 0..size {
                for a in 0..size {
                    if d_sigma(&delta, (d, c, b, a)) != 0 {
                        return Ok(ClassifyOutcome::AssociatorsDiffer);
                    }
                }
            }
        }
    }
    // Solve eta = d lambda on 1-cochains over GF(2):
    // d lambda (g, h) = lambda(g) + lambda(h) + lambda(gh).
    let pair_index = |b: usize, a: usize| b * size + a;
    let mut sys = Gf2System::new(size * size);
    for c in 0..size {
        for b in 0..size {
            for a in 0..size {
                sys.add_equation(
                    &[pair_index(c, b), pair_index(b, a), pair_index(c, a)],
                    eta((c, b, a)) == 1,
                );
            }
        }
    }
    let (sol, _) = sys.solve().ok_or(QuasiError::NoTwist)?;
    let mut lambda = BTreeMap::new();
    for b in 0..size {
        for a in 0..size {
            if sol[pair_index(b, a)] {
                lambda.insert((b, a), 1u8);
            }
        }
    }
    Ok(ClassifyOutcome::Isomorphic { lambda })
}

/// Solves `theta = d mu` over `Z/4` on the quantum-graded nerve, for the
/// twisted-algebra isomorphisms `x -> i^{mu(|x|)} x`. The 2-cochain `theta`
/// is given as a callback on composable degree pairs.
pub fn solve_mu(
    arena: &Arena,
    theta: impl Fn(&Degree, &Degree) -> i64,
) -> Option<BTreeMap<(usize, usize, u8), u8>> {
    let size = arena.size();
    let mut keys = Vec::new();
    let mut index = HashMap::new();
    for b in 0..size {
        for a in 0..size {
            for k in 0..4u8 {
                if b == a && k == 0 {
                    continue; // normalize mu(identity) = 0
                }
                index.insert((b, a, k), keys.len());
                keys.push((b, a, k));
            }
        }
    }
    let mut sys = Mod4System::new(keys.len());
    for c in 0..size {
        for b in 0..size {
            for a in 0..size {
                for quanta in 0..16u32 {
                    let (k, l) = ((quanta & 3) as i64, (quanta >> 2 & 3) as i64);
                    let g = Degree { pair: (c, b), q: k };
                    let h = Degree { pair: (b, a), q: l };
                    // d mu (g, h) = mu(g) + mu(h) - mu(gh)
                    let mut terms: Vec<(usize, i64)> = Vec::new();
                    let push = |bb: usize, aa: usize, qq: i64, coef: i64, terms: &mut Vec<(usize, i64)>| {
                        if let Some(&i) = index.get(&(bb, aa, qq.rem_euclid(4) as u8)) {
                            terms.push((i, coef));
                        }
                    };
                    push(c, b, k, 1, &mut terms);
                    push(b, a, l, 1, &mut terms);
                    push(c, a, k + l, -1, &mut terms);
                    sys.add_equation(terms, theta(&g, &h).rem_euclid(4) as u8);
                }
            }
        }
    }
    let sol = sys.solve()?;
    let mut mu = BTreeMap::new();
    for (i, key) in keys.iter().enumerate() {
        if sol[i] % 4 != 0 {
            mu.insert(*key, sol[i] % 4);
        }
    }
    Some(mu)
}

/// Completes an evaluation-determined sign table to all quadruples by
/// solving the 5-term identity
///   ch(e,d,c,b) + ch(e,d,b,a) + ch(d,c,b,a) + ch(e,c,b,a) + ch(e,d,c,a)
///     = s(e,d,c) * s(c,b,a)  (mod 2)
/// over all quintuples.
fn complete_by_pentagon(
    arena: &Arena,
    raw: &HashMap<(usize, usize, usize, usize), u8>,
) -> Result<HashMap<(usize, usize, usize, usize), u8>, QuasiError> {
    let size = arena.size();
    let mut unknowns: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut unknown_index: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    for d in 0..size {
        for c in 0..size {
            for b in 0..size {
                for a in 0..size {
                    if !raw.contains_key(&(d, c, b, a)) {
                        unknown_index.insert((d, c, b, a), unknowns.len());
                        unknowns.push((d, c, b, a));
                    }
                }
            }
        }
    }
    let mut table = raw.clone();
    if unknowns.is_empty() {
        return Ok(table);
    }
    let mut sys = Gf2System::new(unknowns.len());
    for e in 0..size {
        for d in 0..size {
            for c in 0..size {
                for b in 0..size {
                    for a in 0..size {
                        let quads =
                            [(e, d, c, b), (e, d, b, a), (d, c, b, a), (e, c, b, a), (e, d, c, a)];
                        let mut cols = Vec::new();
                        let mut rhs =
                            (split_count(arena, e, d, c) * split_count(arena, c, b, a)) % 2 == 1;
                        for quad in quads {
                            match table.get(&quad) {
                                Some(&v) => {
                                    if v == 1 {
                                        rhs = !rhs;
                                    }
                                }
                                None => cols.push(unknown_index[&quad]),
                            }
                        }
                        sys.add_equation(&cols, rhs);
                    }
                }
            }
        }
    }
    let (sol, _) = sys
        .solve()
        .ok_or_else(|| QuasiError::CocycleViolation("sign completion system is inconsistent".into()))?;
    for (i, quad) in unknowns.iter().enumerate() {
        table.insert(*quad, sol[i] as u8);
    }
    Ok(table)
}

/// All basis vectors grouped by quantum degree.
pub fn graded_basis(arena: &Arena) -> BTreeMap<i64, Vec<BasisVector>> {
    let n = arena.n() as i64;
    let mut out: BTreeMap<i64, Vec<BasisVector>> = BTreeMap::new();
    for upper in 0..arena.size() {
        for lower in 0..arena.size() {
            let m = arena.closure(upper, lower).circle_count() as u32;
            for mask in 0..(1u64 << m) {
                let d = 2 * mask.count_ones() as i64 - m as i64 + n;
                out.entry(d).or_default().push(BasisVector { upper, lower, mask });
            }
        }
    }
    out
}

/// A center of a twisted algebra over the Gaussian integers, solved on the
/// full basis (no diagonal-support assumption): vectors are coordinates over
/// `basis_order`.
pub struct TwistedCenter {
    pub basis_order: Vec<BasisVector>,
    /// `(quantum degree, coordinates)` per kernel vector.
    pub vectors: Vec<(i64, Vec<GaussInt>)>,
}

impl TwistedCenter {
    pub fn graded_rank(&self) -> crate::even::GradedRank {
        let mut map = BTreeMap::new();
        for (d, _) in &self.vectors {
            *map.entry(*d).or_insert(0) += 1;
        }
        crate::even::GradedRank(map)
    }

    pub fn rank_in_degree(&self, d: i64) -> usize {
        self.vectors.iter().filter(|(deg, _)| *deg == d).count()
    }

    pub fn to_element(&self, arena: &Arena, coords: &[GaussInt]) -> ArcElement {
        let mut out = ArcElement::zero(arena.n());
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out.add_assign(&ArcElement::basis(arena, self.basis_order[i]).scale(c));
            }
        }
        out
    }

    pub fn coords_of(&self, x: &ArcElement) -> Vec<GaussInt> {
        let mut v = vec![GaussInt::zero(); self.basis_order.len()];
        for (i, bvec) in self.basis_order.iter().enumerate() {
            if let Some(e) = x.piece(bvec.upper, bvec.lower) {
                v[i] = e.coeff(bvec.mask);
            }
        }
        v
    }
}

/// Solves the (super)center of the twisted algebra: `signed` selects the odd
/// center (`z x = (-1)^{p(x)p(z)} x z`), otherwise the ordinary one.
pub fn twisted_center(alg: &OddArcAlgebra, tw: &Twist, signed: bool) -> TwistedCenter {
    use crate::linalg::{smith_normal_form, Mat};
    let arena = alg.arena();
    let basis_order: Vec<BasisVector> = graded_basis(arena).into_values().flatten().collect();
    let position: HashMap<BasisVector, usize> =
        basis_order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let all = alg.basis_vectors();
    let mut vectors = Vec::new();
    for (deg, vecs) in graded_basis(arena) {
        // When solving the odd center, split the degree block by parity.
        let parities: Vec<u8> = if signed { vec![0, 1] } else { vec![2] };
        for want_p in parities {
            let unknowns: Vec<BasisVector> = vecs
                .iter()
                .copied()
                .filter(|v| !signed || (v.mask.count_ones() % 2) as u8 == want_p)
                .collect();
            if unknowns.is_empty() {
                continue;
            }
            let mut rows: Vec<Vec<GaussInt>> = Vec::new();
            for &x in &all {
                let px = (x.mask.count_ones() % 2) as u8;
                let xe = alg.basis_element(x);
                let mut cols: Vec<ArcElement> = Vec::new();
                for &z in &unknowns {
                    let pz = (z.mask.count_ones() % 2) as u8;
                    let ze = alg.basis_element(z);
                    let zx = twisted_multiply(alg, tw, &ze, &xe);
                    let xz = twisted_multiply(alg, tw, &xe, &ze);
                    let rhs = if signed && px * pz == 1 { xz.neg() } else { xz };
                    cols.push(zx.sub(&rhs));
                }
                let mut out_keys = std::collections::BTreeSet::new();
                for col in &cols {
                    for (&(u, l), e) in col.pieces() {
                        for (m, _) in e.terms() {
                            out_keys.insert(BasisVector { upper: u, lower: l, mask: *m });
                        }
                    }
                }
                for key in out_keys {
                    let row: Vec<GaussInt> = cols
                        .iter()
                        .map(|col| {
                            col.piece(key.upper, key.lower)
                                .map(|e| e.coeff(key.mask))
                                .unwrap_or_else(GaussInt::zero)
                        })
                        .collect();
                    rows.push(row);
                }
            }
            if rows.is_empty() {
                for &z in &unknowns {
                    let mut v = vec![GaussInt::zero(); basis_order.len()];
                    v[position[&z]] = GaussInt::one();
                    vectors.push((deg, v));
                }
                continue;
            }
            let snf = smith_normal_form(&Mat::from_rows(rows));
            for kvec in snf.kernel_basis() {
                let mut v = vec![GaussInt::zero(); basis_order.len()];
                for (pos, &z) in unknowns.iter().enumerate() {
                    v[position[&z]] = kvec[pos].clone();
                }
                vectors.push((deg, v));
            }
        }
    }
    TwistedCenter { basis_order, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::OddArcAlgebra;
    use crate::diagram::Arena;

    #[test]
    fn phi_ch_is_normalized_and_matches_nonassoc() {
        let arena = Arena::new(2).unwrap();
        let alg = OddArcAlgebra::canonical(&arena);
        let q = Quasi::new(&alg).unwrap();
        // Identity in the middle lane forces 0 for every choice.
        for d in 0..2 {
            for b in 0..2 {
                for a in 0..2 {
                    assert_eq!(q.phi_ch(d, b, b, a).unwrap(), 0);
                }
            }
        }
        // The nonassociativity witness triple: x = b1 in (b,b), y = 1_ba,
        // z = 1_ab gives psi = 2, i.e. the sign -1.
        let g = Degree { pair: (1, 1), q: 2 };
        let h = Degree { pair: (1, 0), q: 1 };
        let k = Degree { pair: (0, 1), q: 1 };
        assert_eq!(q.psi(&g, &h, &k).unwrap(), 2);
    }

    #[test]
    fn quasi_associativity_on_all_basis_triples_n2() {
        let arena = Arena::new(2).unwrap();
        let alg = OddArcAlgebra::canonical(&arena);
        let q = Quasi::new(&alg).unwrap();
        let basis = alg.basis_vectors();
        let n = arena.n() as i64;
        let mut nonzero = 0;
        for &x in &basis {
            for &y in &basis {
                if x.lower != y.upper {
                    continue;
                }
                for &z in &basis {
                    if y.lower != z.upper {
                        continue;
                    }
                    let xe = alg.basis_element(x);
                    let ye = alg.basis_element(y);
                    let ze = alg.basis_element(z);
                    let lhs = alg.multiply(&alg.multiply(&xe, &ye), &ze);
                    let rhs = alg.multiply(&xe, &alg.multiply(&ye, &ze));
                    let deg = |v: BasisVector| Degree {
                        pair: (v.upper, v.lower),
                        q: 2 * v.mask.count_ones() as i64
                            - arena.closure(v.upper, v.lower).circle_count() as i64
                            + n,
                    };
                    let phi = q.phi(&deg(x), &deg(y), &deg(z)).unwrap();
                    let want = if phi == 1 { rhs.neg() } else { rhs };
                    assert_eq!(lhs, want, "x={x} y={y} z={z}");
                    if !lhs.is_zero() {
                        nonzero += 1;
                    }
                }
            }
        }
        assert!(nonzero > 50);
    }

    #[test]
    fn cocycle_identity_n2() {
        let arena = Arena::new(2).unwrap();
        let alg = OddArcAlgebra::canonical(&arena);
        let q = Quasi::new(&alg).unwrap();
        let checked = q.verify_cocycle().unwrap();
        assert_eq!(checked, 32 * 256);
    }

    #[test]
    fn paper_twist_verifies() {
        let arena = Arena::new(2).unwrap();
        let alg = OddArcAlgebra::canonical(&arena);
        let q = Quasi::new(&alg).unwrap();
        let tw = paper_twist_n2();
        let checked = verify_twist(&q, &tw).unwrap();
        assert_eq!(checked, 16 * 64);
    }

    #[test]
    fn solver_twist_verifies_and_is_associative_n2() {
        let arena = Arena::new(2).unwrap();
        let alg = OddArcAlgebra::canonical(&arena);
        let q = Quasi::new(&alg).unwrap();
        let tw = solve_twist(&q).unwrap();
        verify_twist(&q, &tw).unwrap();
        // Exhaustive twisted associativity on basis triples.
        let basis = alg.basis_vectors();
        for &x in &basis {
            for &y in &basis {
                if x.lower != y.upper {
                    continue;
                }
                for &z in &basis {
                    if y.lower != z.upper {
                        continue;
                    }
                    let xe = alg.basis_element(x);
                    let ye = alg.basis_element(y);
                    let ze = alg.basis_element(z);
                    let l = twisted_multiply(&alg, &tw, &twisted_multiply(&alg, &tw, &xe, &ye), &ze);
                    let r = twisted_multiply(&alg, &tw, &xe, &twisted_multiply(&alg, &tw, &ye, &ze));
                    assert_eq!(l, r, "x={x} y={y} z={z}");
                }
            }
        }
    }

    #[test]
    fn unit_survives_twisting() {
        let arena = Arena::new(2).unwrap();
        let alg = OddArcAlgebra::canonical(&arena);
        let tw = paper_twist_n2();
        let unit = alg.unit();
        for v in alg.basis_vectors() {
            let x = alg.basis_element(v);
            assert_eq!(twisted_multiply(&alg, &tw, &unit, &x), x);
            assert_eq!(twisted_multiply(&alg, &tw, &x, &unit), x);
        }
    }
}
