//! Evaluation of the odd functor on contraction cobordisms.
//!
//! A contraction cobordism is executed as a sequence of saddle moves on a
//! tower of closed diagrams. The executor tracks the circle components of the
//! evolving 1-manifold; each saddle either merges two circles (quotient
//! identification of the two generators) or splits one (left wedge by the
//! oriented difference of the two new generators).

use crate::chronology::{Chronology, ContractionStep, Orientation};
use crate::diagram::{Arena, ClosedDiagram};
use crate::exterior::{ExtElement, QDeg};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum TqftError {
    #[error("arc ({0},{1}) is not an uncontracted arc of interface {2}")]
    ArcNotPresent(usize, usize, usize),
    #[error("state inconsistency: {0}")]
    StateInconsistency(String),
    #[error(transparent)]
    Ext(#[from] crate::exterior::ExtError),
}

/// What a saddle did to the circle set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaddleKind {
    Merge,
    Split,
}

/// A value the executor can push through saddle moves. Circle IDs are the
/// executor's persistent generator slots.
pub trait TqftValue: Clone {
    /// Circles `survivor` and `dead` became one (keeping `survivor`'s slot).
    fn merge(&mut self, survivor: u32, dead: u32);
    /// Circle `left` split; the left part keeps the slot, the right part is
    /// the fresh slot `right`.
    fn split(&mut self, left: u32, right: u32, orientation: Orientation);
    /// Renames the surviving slots onto `0..count` at the end of execution.
    fn reindex(&mut self, map: &BTreeMap<u32, u32>, count: u32);
}

impl TqftValue for ExtElement {
    fn merge(&mut self, survivor: u32, dead: u32) {
        let new_gens = self.gens() & !(1u64 << dead);
        *self = self
            .substitute(new_gens, |g| if g == dead { survivor } else { g })
            .expect("merge substitution cannot fail");
    }

    fn split(&mut self, left: u32, right: u32, orientation: Orientation) {
        let gens = self.gens() | (1u64 << right);
        let extended = self.extend_gens(gens).expect("fresh slot extension");
        let gl = ExtElement::generator(left, gens, extended.qdeg_offset());
        let gr = ExtElement::generator(right, gens, extended.qdeg_offset());
        let factor = match orientation {
            Orientation::LeftToRight => gl.sub(&gr).unwrap(),
            Orientation::RightToLeft => gr.sub(&gl).unwrap(),
        };
        *self = factor.wedge(&extended).expect("split factor wedge");
    }

    fn reindex(&mut self, map: &BTreeMap<u32, u32>, count: u32) {
        let new_gens = if count == 64 { u64::MAX } else { (1u64 << count) - 1 };
        *self = self.substitute(new_gens, |g| map[&g]).expect("final reindex");
    }
}

/// Node handle: `level * 2n + (point - 1)`.
type Node = usize;

/// Executor state for a tower of closed diagrams (level 0 topmost).
pub struct Executor {
    n: usize,
    levels: Vec<ClosedDiagram>,
    up_nb: Vec<Node>,
    down_nb: Vec<Node>,
    circle_of_node: Vec<u32>,
    nodes_of_circle: BTreeMap<u32, Vec<Node>>,
    next_id: u32,
}

impl Executor {
    pub fn new(levels: Vec<ClosedDiagram>) -> Self {
        let n = levels[0].n();
        assert!(levels.iter().all(|d| d.n() == n));
        let n2 = 2 * n;
        let total_nodes = levels.len() * n2;
        let node = |l: usize, p: usize| l * n2 + (p - 1);
        let mut up_nb = vec![0; total_nodes];
        let mut down_nb = vec![0; total_nodes];
        let mut circle_of_node = vec![0u32; total_nodes];
        let mut nodes_of_circle = BTreeMap::new();
        let mut next_id = 0u32;
        for (l, diag) in levels.iter().enumerate() {
            for p in 1..=n2 {
                up_nb[node(l, p)] = node(l, diag.top().partner(p));
                down_nb[node(l, p)] = node(l, diag.bottom().partner(p));
            }
            for circle in diag.circles() {
                let id = next_id;
                next_id += 1;
                let mut members = Vec::new();
                for p in 1..=n2 {
                    if circle >> (p - 1) & 1 == 1 {
                        circle_of_node[node(l, p)] = id;
                        members.push(node(l, p));
                    }
                }
                nodes_of_circle.insert(id, members);
            }
        }
        Executor { n, levels, up_nb, down_nb, circle_of_node, nodes_of_circle, next_id }
    }

    pub fn initial_circles(&self) -> u32 {
        self.levels.iter().map(|d| d.circle_count() as u32).sum()
    }

    pub fn live_gens(&self) -> u64 {
        self.nodes_of_circle.keys().fold(0u64, |acc, id| acc | (1 << id))
    }

    fn node(&self, level: usize, p: usize) -> Node {
        level * 2 * self.n + (p - 1)
    }

    /// Walks the circle through `start`, collecting its nodes. Leaves each
    /// node by the edge it did not arrive on (for a 2-node circle both edges
    /// lead back, which closes the walk correctly).
    fn walk_cycle(&self, start: Node) -> Vec<Node> {
        let mut nodes = vec![start];
        let mut prev = start;
        let mut cur = self.down_nb[start];
        while cur != start {
            nodes.push(cur);
            let next = if self.down_nb[cur] != prev { self.down_nb[cur] } else { self.up_nb[cur] };
            prev = cur;
            cur = next;
        }
        nodes
    }

    /// Contracts arc `(i, j)` of the interface between `level` and `level+1`,
    /// pushing the value through the induced merge or split.
    pub fn contract<V: TqftValue>(
        &mut self,
        interface: usize,
        step: &ContractionStep,
        value: &mut V,
    ) -> Result<SaddleKind, TqftError> {
        let (i, j) = step.arc;
        let (ui, uj) = (self.node(interface, i), self.node(interface, j));
        let (li, lj) = (self.node(interface + 1, i), self.node(interface + 1, j));
        if self.down_nb[ui] != uj || self.down_nb[uj] != ui {
            return Err(TqftError::ArcNotPresent(i, j, interface));
        }
        if self.up_nb[li] != lj || self.up_nb[lj] != li {
            return Err(TqftError::ArcNotPresent(i, j, interface));
        }
        let cu = self.circle_of_node[ui];
        let cl = self.circle_of_node[li];
        // Replace the arc and its mirror by vertical strands.
        self.down_nb[ui] = li;
        self.up_nb[li] = ui;
        self.down_nb[uj] = lj;
        self.up_nb[lj] = uj;
        if cu != cl {
            // Merge; the smaller slot survives.
            let survivor = cu.min(cl);
            let dead = cu.max(cl);
            let dead_nodes = self.nodes_of_circle.remove(&dead).expect("live circle");
            for &nd in &dead_nodes {
                self.circle_of_node[nd] = survivor;
            }
            self.nodes_of_circle.get_mut(&survivor).unwrap().extend(dead_nodes);
            value.merge(survivor, dead);
            Ok(SaddleKind::Merge)
        } else {
            // Split; the part through the left endpoint keeps the slot.
            let old_nodes = self.nodes_of_circle.remove(&cu).expect("live circle");
            let left_nodes = self.walk_cycle(ui);
            if left_nodes.contains(&uj) {
                return Err(TqftError::StateInconsistency(format!(
                    "split at ({i},{j}) did not separate the circle"
                )));
            }
            let right_nodes: Vec<Node> =
                old_nodes.iter().copied().filter(|nd| !left_nodes.contains(nd)).collect();
            if left_nodes.len() + right_nodes.len() != old_nodes.len() {
                return Err(TqftError::StateInconsistency("split lost track of nodes".into()));
            }
            let fresh = self.next_id;
            self.next_id += 1;
            for &nd in &right_nodes {
                self.circle_of_node[nd] = fresh;
            }
            for &nd in &left_nodes {
                self.circle_of_node[nd] = cu;
            }
            self.nodes_of_circle.insert(cu, left_nodes);
            self.nodes_of_circle.insert(fresh, right_nodes);
            value.split(cu, fresh, step.orientation);
            Ok(SaddleKind::Split)
        }
    }

    /// Runs a whole chronology at one interface.
    pub fn run<V: TqftValue>(
        &mut self,
        interface: usize,
        steps: &[ContractionStep],
        value: &mut V,
    ) -> Result<usize, TqftError> {
        let mut splits = 0;
        for step in steps {
            if self.contract(interface, step, value)? == SaddleKind::Split {
                splits += 1;
            }
        }
        Ok(splits)
    }

    /// After all interfaces are contracted the surviving circles match the
    /// closure of (topmost top, bottommost bottom); renames slots onto its
    /// left-to-right circle order.
    pub fn finalize<V: TqftValue>(&self, target: &ClosedDiagram, value: &mut V) -> Result<(), TqftError> {
        let bottom_level = self.levels.len() - 1;
        let n2 = 2 * self.n;
        let mut map = BTreeMap::new();
        let mut seen = vec![false; target.circle_count()];
        for (&id, nodes) in &self.nodes_of_circle {
            let mut points: u32 = 0;
            for &nd in nodes {
                if nd / n2 == bottom_level {
                    points |= 1 << (nd % n2);
                }
            }
            let idx = target
                .circles()
                .iter()
                .position(|&c| c == points)
                .ok_or_else(|| TqftError::StateInconsistency(format!(
                    "surviving circle {points:#b} not a circle of the target diagram"
                )))?;
            seen[idx] = true;
            map.insert(id, idx as u32);
        }
        if !seen.iter().all(|&s| s) {
            return Err(TqftError::StateInconsistency("circle count mismatch at finalize".into()));
        }
        value.reindex(&map, target.circle_count() as u32);
        Ok(())
    }
}

/// Evaluates `OF(C_cba)` on an element of the stacked diagram
/// `W(c)b W(b)a` (upper circles first) and lands on `close(c, a)` with the
/// quantum-degree offset `n`.
pub fn execute(arena: &Arena, chron: &Chronology, x: &ExtElement) -> Result<ExtElement, TqftError> {
    let (c, b, a) = chron.triple;
    let upper = arena.closure(c, b).clone();
    let lower = arena.closure(b, a).clone();
    let total = upper.circle_count() + lower.circle_count();
    let expect_gens = (1u64 << total) - 1;
    if x.gens() != expect_gens {
        return Err(TqftError::StateInconsistency(format!(
            "input on {:#x}, expected the stacked generator set {expect_gens:#x}",
            x.gens()
        )));
    }
    let mut exec = Executor::new(vec![upper, lower]);
    let mut value = x.clone();
    exec.run(0, &chron.steps, &mut value)?;
    let target = arena.closure(c, a);
    exec.finalize(target, &mut value)?;
    Ok(value.with_offset(arena.n() as i64))
}

/// Multiplies two piece elements `x` in `OF(W(c)b){n}` and `y` in
/// `OF(W(b)a){n}`: stacks them (x upper), wedges, executes `OF(C_cba)`.
pub fn multiply_pieces(
    arena: &Arena,
    chron: &Chronology,
    x: &ExtElement,
    y: &ExtElement,
) -> Result<ExtElement, TqftError> {
    let (c, b, a) = chron.triple;
    let m_up = arena.closure(c, b).circle_count() as u32;
    let m_lo = arena.closure(b, a).circle_count() as u32;
    let total = m_up + m_lo;
    let gens = (1u64 << total) - 1;
    // Upper diagram's circles take the low slots, lower circles follow.
    let xg = x.extend_gens(gens)?.with_offset(2 * arena.n() as i64);
    let yg = y.substitute(gens, |g| g + m_up)?.with_offset(2 * arena.n() as i64);
    let wedged = xg.wedge(&yg)?;
    execute(arena, chron, &wedged)
}

/// The number of split saddles in `C_cba`, which depends only on the triple:
/// `(|W(c)a| + n - |W(c)b| - |W(b)a|) / 2`.
pub fn split_count(arena: &Arena, c: usize, b: usize, a: usize) -> usize {
    let m_cb = arena.closure(c, b).circle_count() as i64;
    let m_ba = arena.closure(b, a).circle_count() as i64;
    let m_ca = arena.closure(c, a).circle_count() as i64;
    let s = m_ca + arena.n() as i64 - m_cb - m_ba;
    debug_assert!(s >= 0 && s % 2 == 0);
    (s / 2) as usize
}

/// Degree check helper: products of homogeneous pieces must be homogeneous of
/// the sum degree.
pub fn assert_degree_preserving(x: &ExtElement, y: &ExtElement, product: &ExtElement) {
    if let (QDeg::Homogeneous(dx), QDeg::Homogeneous(dy)) = (x.qdeg(), y.qdeg()) {
        match product.qdeg() {
            QDeg::Homogeneous(dp) => assert_eq!(dp, dx + dy, "product degree drifted"),
            QDeg::Zero => {}
            QDeg::Inhomogeneous => panic!("product of homogeneous pieces is inhomogeneous"),
        }
    }
}

/// Which step indices of a chronology are splits, found by a dry run.
pub fn split_steps_of(arena: &Arena, ch: &Chronology) -> Vec<usize> {
    let (c, b, a) = ch.triple;
    let mut exec = Executor::new(vec![arena.closure(c, b).clone(), arena.closure(b, a).clone()]);
    let m = exec.initial_circles();
    let mut v = ExtElement::unit((1u64 << m) - 1, 0);
    let mut out = Vec::new();
    for (idx, step) in ch.steps.iter().enumerate() {
        if exec.contract(0, step, &mut v).unwrap() == SaddleKind::Split {
            out.push(idx);
        }
    }
    out
}

/// All chronologies for one triple (valid orders times split orientations).
pub fn enumerate_triple_choices(
    arena: &Arena,
    triple: (usize, usize, usize),
) -> Result<Vec<Chronology>, crate::chronology::ChronologyError> {
    crate::chronology::enumerate_choices(arena, triple, |ch| split_steps_of(arena, ch))
}
