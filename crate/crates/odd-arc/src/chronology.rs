//! Chronological data for contraction cobordisms: per-triple orderings of the
//! arc contractions of `bW(b)` and orientations for the splits.

use crate::diagram::{Arena, DiagramError, Matching};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "LR")]
    LeftToRight,
    #[serde(rename = "RL")]
    RightToLeft,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::LeftToRight => Orientation::RightToLeft,
            Orientation::RightToLeft => Orientation::LeftToRight,
        }
    }
}

/// One arc contraction; the orientation is consulted only when the step turns
/// out to be a split during execution (merge orientations are immaterial).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ContractionStep {
    pub arc: (usize, usize),
    #[serde(rename = "or")]
    pub orientation: Orientation,
}

/// The chronology for one triple `(c, b, a)`: the order in which the arcs of
/// the middle matching `b` are contracted.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Chronology {
    /// Matching IDs `(c, b, a)` into the arena.
    pub triple: (usize, usize, usize),
    pub steps: Vec<ContractionStep>,
}

#[derive(Debug, thiserror::Error)]
pub enum ChronologyError {
    #[error("steps are not a permutation of the middle matching's arcs")]
    NotAPermutation,
    #[error("arc ({},{}) contracted after two arcs it surrounds: ({},{}) and ({},{})",
            outer.0, outer.1, first.0, first.1, second.0, second.1)]
    NestingViolation { outer: (usize, usize), first: (usize, usize), second: (usize, usize) },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("enumeration capped at n <= {0}")]
    EnumerationCap(usize),
}

/// Checks that `steps` is a permutation of `middle.arcs()` and the nesting
/// rule: when an arc is contracted, the arcs strictly inside it that were
/// contracted earlier must form a chain under inclusion (contracting two
/// side-by-side arcs before the one surrounding them is illegal; a telescope
/// of nested arcs contracted inside-out is fine).
pub fn validate(middle: &Matching, steps: &[ContractionStep]) -> Result<(), ChronologyError> {
    let mut sorted: Vec<(usize, usize)> = steps.iter().map(|s| s.arc).collect();
    sorted.sort();
    if sorted != middle.arcs() {
        return Err(ChronologyError::NotAPermutation);
    }
    for (pos, step) in steps.iter().enumerate() {
        let (o1, o2) = step.arc;
        let inside: Vec<(usize, usize)> =
            steps[..pos].iter().map(|s| s.arc).filter(|&(i, j)| o1 < i && j < o2).collect();
        if let Some(pair) = incomparable_pair(&inside) {
            return Err(ChronologyError::NestingViolation { outer: step.arc, first: pair.0, second: pair.1 });
        }
    }
    Ok(())
}

/// Two arcs with neither inside the other, if present.
fn incomparable_pair(arcs: &[(usize, usize)]) -> Option<((usize, usize), (usize, usize))> {
    for (k, &x) in arcs.iter().enumerate() {
        for &y in &arcs[k + 1..] {
            let x_in_y = y.0 < x.0 && x.1 < y.1;
            let y_in_x = x.0 < y.0 && y.1 < x.1;
            if !x_in_y && !y_in_x {
                return Some((x, y));
            }
        }
    }
    None
}

impl Chronology {
    /// Left-to-right order with all splits oriented left-to-right.
    pub fn canonical(triple: (usize, usize, usize), middle: &Matching) -> Self {
        let steps = middle
            .arcs()
            .iter()
            .map(|&arc| ContractionStep { arc, orientation: Orientation::LeftToRight })
            .collect();
        Chronology { triple, steps }
    }
}

/// A choice `C`: one chronology per triple `(c, b, a)` of matchings.
#[derive(Clone, Debug)]
pub struct ChoiceC {
    n: usize,
    map: HashMap<(usize, usize, usize), Chronology>,
}

impl ChoiceC {
    /// The standard choice: contract on first encounter scanning the end
    /// points of `b` left to right, splits oriented left-to-right.
    pub fn canonical(arena: &Arena) -> Self {
        let k = arena.size();
        let mut map = HashMap::new();
        for c in 0..k {
            for b in 0..k {
                for a in 0..k {
                    map.insert((c, b, a), Chronology::canonical((c, b, a), arena.matching(b)));
                }
            }
        }
        ChoiceC { n: arena.n(), map }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, c: usize, b: usize, a: usize) -> &Chronology {
        &self.map[&(c, b, a)]
    }

    /// A copy with one triple's chronology replaced.
    pub fn with_override(&self, ch: Chronology) -> Self {
        let mut out = self.clone();
        out.map.insert(ch.triple, ch);
        out
    }
}

/// All permutations of `arcs` satisfying the nesting rule.
fn valid_orders(arcs: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        arcs: &[(usize, usize)],
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if current.len() == arcs.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..arcs.len() {
            if used[i] {
                continue;
            }
            let (o1, o2) = arcs[i];
            let inside: Vec<(usize, usize)> =
                current.iter().copied().filter(|&(x, y)| o1 < x && y < o2).collect();
            if incomparable_pair(&inside).is_some() {
                continue;
            }
            used[i] = true;
            current.push(arcs[i]);
            rec(arcs, used, current, out);
            current.pop();
            used[i] = false;
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut used = vec![false; arcs.len()];
    rec(arcs, &mut used, &mut current, &mut out);
    out
}

/// Enumerates the chronologies for one triple: every valid order, with every
/// orientation assignment on the steps that are splits when executed. Merge
/// steps are fixed to `LeftToRight` (their orientation is ignored anyway), so
/// the list has no observationally duplicate entries from merges.
pub fn enumerate_choices(
    arena: &Arena,
    triple: (usize, usize, usize),
    split_steps: impl Fn(&Chronology) -> Vec<usize>,
) -> Result<Vec<Chronology>, ChronologyError> {
    if arena.n() > 3 {
        return Err(ChronologyError::EnumerationCap(3));
    }
    let middle = arena.matching(triple.1);
    let mut out = Vec::new();
    for order in valid_orders(middle.arcs()) {
        let base = Chronology {
            triple,
            steps: order
                .iter()
                .map(|&arc| ContractionStep { arc, orientation: Orientation::LeftToRight })
                .collect(),
        };
        let splits = split_steps(&base);
        for bits in 0..(1usize << splits.len()) {
            let mut ch = base.clone();
            for (k, &idx) in splits.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    ch.steps[idx].orientation = Orientation::RightToLeft;
                }
            }
            out.push(ch);
        }
    }
    Ok(out)
}
