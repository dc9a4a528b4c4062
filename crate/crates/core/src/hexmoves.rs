//! Hexagonal moves: local rewrites of a triangulated sub-hexagon that
//! preserve the `F_2` coloring.
//!
//! A sub-hexagon `v0 < v1 < ... < v5` is eligible when all six boundary
//! chords belong to the triangulation (as diagonals or polygon sides), so it
//! is a union of four triangles. Positions below are relative to that
//! hexagon's own labeling.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::coloring::{f2_coloring, PointX};
use crate::error::{Error, Result};
use crate::polygon::{enumerate_triangulations, Diagonal, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    /// `v1-v3-v0-v4` to `v1-v5-v2-v4` (rotated); the antipodal pair stays.
    ZigzagAToB,
    ZigzagBToA,
    /// Inscribed triangle `{v1,v3,v5}` to `{v0,v2,v4}`.
    TriangleOddToEven,
    TriangleEvenToOdd,
}

impl MoveKind {
    pub fn inverse(self) -> MoveKind {
        match self {
            MoveKind::ZigzagAToB => MoveKind::ZigzagBToA,
            MoveKind::ZigzagBToA => MoveKind::ZigzagAToB,
            MoveKind::TriangleOddToEven => MoveKind::TriangleEvenToOdd,
            MoveKind::TriangleEvenToOdd => MoveKind::TriangleOddToEven,
        }
    }
}

type Pattern = [(usize, usize); 3];

fn zigzag_a(r: usize) -> Pattern {
    [(r + 1, r + 3), (r + 3, r), (r, r + 4)]
}

fn zigzag_b(r: usize) -> Pattern {
    [(r + 1, r + 5), (r + 5, r + 2), (r + 2, r + 4)]
}

const TRIANGLE_ODD: Pattern = [(1, 3), (3, 5), (1, 5)];
const TRIANGLE_EVEN: Pattern = [(0, 2), (2, 4), (0, 4)];

/// Bitmask over the 15 position pairs of a hexagon.
fn pattern_mask(p: Pattern) -> u16 {
    p.iter().fold(0, |acc, &(a, b)| acc | pair_bit(a % 6, b % 6))
}

fn pair_bit(a: usize, b: usize) -> u16 {
    let (a, b) = (a.min(b), a.max(b));
    // Index of (a, b) among pairs of 0..6 in lexicographic order.
    let idx = a * 6 - a * (a + 1) / 2 + (b - a - 1);
    1 << idx
}

/// A move on one sub-hexagon. `rotation` selects the antipodal pair
/// `(v_r+1, v_r+4)` of a zig-zag and is 0 for triangle moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HexMove {
    pub hexagon: [usize; 6],
    pub kind: MoveKind,
    pub rotation: usize,
}

impl HexMove {
    fn patterns(&self) -> (Pattern, Pattern) {
        let r = self.rotation;
        match self.kind {
            MoveKind::ZigzagAToB => (zigzag_a(r), zigzag_b(r)),
            MoveKind::ZigzagBToA => (zigzag_b(r), zigzag_a(r)),
            MoveKind::TriangleOddToEven => (TRIANGLE_ODD, TRIANGLE_EVEN),
            MoveKind::TriangleEvenToOdd => (TRIANGLE_EVEN, TRIANGLE_ODD),
        }
    }

    fn place(&self, p: Pattern) -> [Diagonal; 3] {
        p.map(|(a, b)| {
            let (x, y) = (self.hexagon[a % 6], self.hexagon[b % 6]);
            Diagonal::raw(x.min(y), x.max(y))
        })
    }

    /// Diagonals removed by the move.
    pub fn removed(&self) -> [Diagonal; 3] {
        self.place(self.patterns().0)
    }

    /// Diagonals introduced by the move.
    pub fn added(&self) -> [Diagonal; 3] {
        self.place(self.patterns().1)
    }

    pub fn inverse(&self) -> HexMove {
        HexMove {
            kind: self.kind.inverse(),
            ..*self
        }
    }
}

fn classify(mask: u16) -> Option<(MoveKind, usize)> {
    if mask == pattern_mask(TRIANGLE_ODD) {
        return Some((MoveKind::TriangleOddToEven, 0));
    }
    if mask == pattern_mask(TRIANGLE_EVEN) {
        return Some((MoveKind::TriangleEvenToOdd, 0));
    }
    (0..3).find_map(|r| {
        if mask == pattern_mask(zigzag_a(r)) {
            Some((MoveKind::ZigzagAToB, r))
        } else if mask == pattern_mask(zigzag_b(r)) {
            Some((MoveKind::ZigzagBToA, r))
        } else {
            None
        }
    })
}

/// All hexagonal moves applicable to `t`, sorted.
pub fn find_hex_moves(t: &Triangulation) -> Vec<HexMove> {
    let adj = t.adjacency();
    let mut out = Vec::new();
    let mut hexagon = [0usize; 6];
    for v0 in 0..=t.m() {
        hexagon[0] = v0;
        extend_cycle(&adj, &mut hexagon, 1, &mut out);
    }
    out.sort_unstable();
    out
}

/// Depth-first search over increasing vertex sequences joined by edges of
/// the triangulation graph; a closed 6-cycle bounds an eligible hexagon.
fn extend_cycle(adj: &[u64], hexagon: &mut [usize; 6], depth: usize, out: &mut Vec<HexMove>) {
    let prev = hexagon[depth - 1];
    let mut next = adj[prev] & !((2u64 << prev) - 1);
    while next != 0 {
        let v = next.trailing_zeros() as usize;
        next &= next - 1;
        hexagon[depth] = v;
        if depth < 5 {
            extend_cycle(adj, hexagon, depth + 1, out);
        } else if adj[v] & (1 << hexagon[0]) != 0 {
            let mut mask = 0u16;
            for a in 0..6 {
                for b in a + 2..6 {
                    if a == 0 && b == 5 {
                        continue;
                    }
                    if adj[hexagon[a]] & (1 << hexagon[b]) != 0 {
                        mask |= pair_bit(a, b);
                    }
                }
            }
            if let Some((kind, rotation)) = classify(mask) {
                out.push(HexMove {
                    hexagon: *hexagon,
                    kind,
                    rotation,
                });
            }
        }
    }
}

/// Applies `mv`, replacing its three source diagonals by the three target ones.
pub fn apply_hex_move(t: &Triangulation, mv: &HexMove) -> Result<Triangulation> {
    let valid_hexagon = mv.hexagon.windows(2).all(|w| w[0] < w[1]) && mv.hexagon[5] <= t.m();
    if !valid_hexagon || (mv.kind as u8 <= 1 && mv.rotation > 2) {
        return Err(Error::InvalidMove(format!("malformed move {mv:?}")));
    }
    if !find_hex_moves(t).contains(mv) {
        return Err(Error::InvalidMove(format!(
            "{:?} on hexagon {:?} does not match {t}",
            mv.kind, mv.hexagon
        )));
    }
    let removed = mv.removed();
    let mut diagonals: Vec<Diagonal> = t
        .diagonals()
        .iter()
        .copied()
        .filter(|d| !removed.contains(d))
        .chain(mv.added())
        .collect();
    diagonals.sort_unstable();
    Triangulation::new(t.m(), diagonals)
}

/// Move-equivalence classes of all triangulations of `P_{m+1}`, each sorted,
/// ordered by least member.
pub fn hex_classes(m: usize) -> Result<Vec<Vec<Triangulation>>> {
    if m > 12 {
        return Err(Error::ResourceLimit(format!(
            "hex_classes enumerates Catalan(m-1) triangulations; m = {m} exceeds 12"
        )));
    }
    hex_classes_unguarded(m)
}

/// [`hex_classes`] without the size guard.
pub fn hex_classes_unguarded(m: usize) -> Result<Vec<Vec<Triangulation>>> {
    let all = enumerate_triangulations(m)?;
    let index: HashMap<&Triangulation, usize> =
        all.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let mut class_of = vec![usize::MAX; all.len()];
    let mut classes = Vec::new();
    for start in 0..all.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[start] = id;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            for mv in find_hex_moves(&all[k]) {
                let next = apply_hex_move_unchecked(&all[k], &mv);
                let j = index[&next];
                if class_of[j] == usize::MAX {
                    class_of[j] = id;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        members.sort_unstable();
        classes.push(members.into_iter().map(|k| all[k].clone()).collect());
    }
    Ok(classes)
}

fn apply_hex_move_unchecked(t: &Triangulation, mv: &HexMove) -> Triangulation {
    let removed = mv.removed();
    let mut diagonals: Vec<Diagonal> = t
        .diagonals()
        .iter()
        .copied()
        .filter(|d| !removed.contains(d))
        .chain(mv.added())
        .collect();
    diagonals.sort_unstable();
    Triangulation::from_sorted_unchecked(t.m(), diagonals)
}

/// Shortest sequence of moves from `from` to `to`, if one exists.
pub fn move_path(from: &Triangulation, to: &Triangulation) -> Result<Option<Vec<HexMove>>> {
    if from.m() != to.m() {
        return Err(Error::MismatchedPolygon(from.m(), to.m()));
    }
    let mut parent: HashMap<Triangulation, Option<(Triangulation, HexMove)>> = HashMap::new();
    parent.insert(from.clone(), None);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(t) = queue.pop_front() {
        if &t == to {
            let mut path = Vec::new();
            let mut cur = t;
            while let Some(Some((prev, mv))) = parent.get(&cur).cloned() {
                path.push(mv);
                cur = prev;
            }
            path.reverse();
            return Ok(Some(path));
        }
        for mv in find_hex_moves(&t) {
            let next = apply_hex_move_unchecked(&t, &mv);
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((t.clone(), mv)));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// One class together with its common image under `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub point: PointX,
    pub size: usize,
    pub members: Vec<Triangulation>,
}

/// Classes annotated with their colorings, ordered as in [`hex_classes`].
pub fn annotated_classes(m: usize) -> Result<Vec<ClassEntry>> {
    Ok(annotate(hex_classes(m)?))
}

pub fn annotate(classes: Vec<Vec<Triangulation>>) -> Vec<ClassEntry> {
    classes
        .into_iter()
        .map(|members| ClassEntry {
            point: f2_coloring(&members[0]),
            size: members.len(),
            members,
        })
        .collect()
}

/// Comparison of move classes against fibers of `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub m: usize,
    pub triangulations: usize,
    pub classes: usize,
    pub fibers: usize,
    pub equal: bool,
    /// Class size to number of classes of that size.
    pub histogram: BTreeMap<usize, usize>,
    /// Classes whose members do not all share one coloring.
    pub mixed_classes: usize,
}

/// Checks that hexagonal-move classes coincide with the fibers of `c`.
pub fn verify_theorem_main(m: usize) -> Result<TheoremReport> {
    if m > 11 {
        return Err(Error::ResourceLimit(format!(
            "verify_theorem_main needs m <= 11, got {m}"
        )));
    }
    verify_theorem_unguarded(m)
}

/// [`verify_theorem_main`] without the size guard.
pub fn verify_theorem_unguarded(m: usize) -> Result<TheoremReport> {
    let classes = hex_classes_unguarded(m)?;
    let triangulations = classes.iter().map(Vec::len).sum();
    let mut fibers: BTreeMap<PointX, Vec<Triangulation>> = BTreeMap::new();
    for t in classes.iter().flatten() {
        fibers.entry(f2_coloring(t)).or_default().push(t.clone());
    }
    let mixed_classes = classes
        .iter()
        .filter(|class| {
            let c0 = f2_coloring(&class[0]);
            class.iter().any(|t| f2_coloring(t) != c0)
        })
        .count();
    let mut fiber_sets: Vec<Vec<Triangulation>> = fibers
        .into_values()
        .map(|mut f| {
            f.sort_unstable();
            f
        })
        .collect();
    fiber_sets.sort_unstable();
    let mut class_sets = classes.clone();
    class_sets.sort_unstable();
    let mut histogram = BTreeMap::new();
    for class in &classes {
        *histogram.entry(class.len()).or_insert(0) += 1;
    }
    Ok(TheoremReport {
        m,
        triangulations,
        classes: classes.len(),
        fibers: fiber_sets.len(),
        equal: class_sets == fiber_sets,
        histogram,
        mixed_classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_masks_are_distinct() {
        let mut masks: Vec<u16> = (0..3)
            .flat_map(|r| [pattern_mask(zigzag_a(r)), pattern_mask(zigzag_b(r))])
            .chain([pattern_mask(TRIANGLE_ODD), pattern_mask(TRIANGLE_EVEN)])
            .collect();
        masks.sort_unstable();
        masks.dedup();
        assert_eq!(masks.len(), 8);
        assert!(masks.iter().all(|m| m.count_ones() == 3));
    }

    #[test]
    fn zigzag_rotation_is_periodic() {
        assert_eq!(pattern_mask(zigzag_a(0)), pattern_mask(zigzag_a(3)));
        assert_eq!(pattern_mask(zigzag_b(1)), pattern_mask(zigzag_b(4)));
    }

    #[test]
    fn zigzag_pair() {
        // Both zig-zags leave out the antipodal pair 0-3.
        let left = Triangulation::from_pairs(5, &[(1, 3), (1, 4), (0, 4)]).unwrap();
        let right = Triangulation::from_pairs(5, &[(3, 5), (2, 5), (0, 2)]).unwrap();
        let moves = find_hex_moves(&left);
        assert_eq!(moves.len(), 1);
        assert_eq!(apply_hex_move(&left, &moves[0]).unwrap(), right);
        assert_eq!(find_hex_moves(&right).len(), 1);
    }

    #[test]
    fn triangle_pair() {
        let odd = Triangulation::from_pairs(5, &[(1, 3), (3, 5), (1, 5)]).unwrap();
        let even = Triangulation::from_pairs(5, &[(0, 2), (2, 4), (0, 4)]).unwrap();
        let moves = find_hex_moves(&odd);
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].kind, MoveKind::TriangleOddToEven);
        assert_eq!(apply_hex_move(&odd, &moves[0]).unwrap(), even);
    }

    #[test]
    fn fans_admit_no_moves() {
        for apex in 0..=7 {
            assert!(find_hex_moves(&Triangulation::fan(7, apex).unwrap()).is_empty());
        }
    }

    #[test]
    fn inapplicable_move_is_rejected() {
        let fan = Triangulation::fan(5, 0).unwrap();
        let mv = HexMove {
            hexagon: [0, 1, 2, 3, 4, 5],
            kind: MoveKind::TriangleOddToEven,
            rotation: 0,
        };
        assert!(matches!(apply_hex_move(&fan, &mv), Err(Error::InvalidMove(_))));
    }

    #[test]
    fn hexagon_classes() {
        let classes = hex_classes(5).unwrap();
        assert_eq!(classes.len(), 10);
        assert_eq!(classes.iter().filter(|c| c.len() == 2).count(), 4);
        assert_eq!(hex_classes(3).unwrap().len(), 2);
        assert!(matches!(hex_classes(13), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn injective_small_cases() {
        for m in 3..=4 {
            let report = verify_theorem_main(m).unwrap();
            assert!(report.equal);
            assert_eq!(report.histogram.keys().copied().collect::<Vec<_>>(), vec![1]);
        }
    }
}
