//! The labeling model `X_F(m)`: vertices of `P_{m+1}` colored by points of
//! the projective line over `F_q`.
//!
//! Colors are opaque indices `0..=q`: `0` is the zero point, `q` is the point
//! at infinity and `1` is `[1:1]`. Only equality of colors is ever used.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{enumerate_triangulations, Diagonal, Triangulation, MAX_M};

/// Largest supported field size; colors fit in a `u64` mask.
pub const MAX_Q: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjLabel(pub u8);

impl ProjLabel {
    pub const ZERO: ProjLabel = ProjLabel(0);
    pub const ONE: ProjLabel = ProjLabel(1);

    pub fn infinity(q: usize) -> ProjLabel {
        ProjLabel(q as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An element of `X_F(m)`: `labels[0] = 0`, `labels[m] = inf`, neighbors differ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "PointRepr")]
pub struct PointX {
    m: usize,
    q: usize,
    labels: Vec<ProjLabel>,
}

#[derive(Deserialize)]
struct PointRepr {
    m: usize,
    q: usize,
    labels: Vec<u8>,
}

impl TryFrom<PointRepr> for PointX {
    type Error = Error;

    fn try_from(repr: PointRepr) -> Result<Self> {
        let point = PointX::new(repr.q, repr.labels)?;
        if point.m != repr.m {
            return Err(Error::InvalidPoint(format!(
                "declared m = {} but {} labels were given",
                repr.m,
                point.labels.len()
            )));
        }
        Ok(point)
    }
}

impl PointX {
    pub fn new(q: usize, labels: Vec<u8>) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::InvalidParameter(format!(
                "field size q = {q} must lie in 2..={MAX_Q}"
            )));
        }
        if labels.len() < 2 || labels.len() > MAX_M + 1 {
            return Err(Error::InvalidPoint(format!(
                "expected between 2 and {} labels, got {}",
                MAX_M + 1,
                labels.len()
            )));
        }
        let m = labels.len() - 1;
        if let Some(bad) = labels.iter().find(|&&l| l as usize > q) {
            return Err(Error::InvalidPoint(format!("label {bad} exceeds q = {q}")));
        }
        if labels[0] != 0 || labels[m] as usize != q {
            return Err(Error::InvalidPoint(
                "endpoints must be pinned to 0 and infinity".into(),
            ));
        }
        if let Some(k) = labels.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::InvalidPoint(format!(
                "adjacent labels at {k} and {} coincide",
                k + 1
            )));
        }
        Ok(PointX {
            m,
            q,
            labels: labels.into_iter().map(ProjLabel).collect(),
        })
    }

    /// The alternating `0, inf, 0, inf, ...` point; exists only for odd `m`.
    pub fn alternating(m: usize, q: usize) -> Option<PointX> {
        if m % 2 == 0 {
            return None;
        }
        let labels = (0..=m).map(|k| if k % 2 == 0 { 0 } else { q as u8 }).collect();
        PointX::new(q, labels).ok()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn labels(&self) -> &[ProjLabel] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> ProjLabel {
        self.labels[v]
    }

    pub fn raw_labels(&self) -> Vec<u8> {
        self.labels.iter().map(|l| l.0).collect()
    }

    pub fn is_zero(&self, v: usize) -> bool {
        self.labels[v] == ProjLabel::ZERO
    }

    pub fn is_infinity(&self, v: usize) -> bool {
        self.labels[v].index() == self.q
    }

    /// Neither zero nor infinity.
    pub fn is_generic(&self, v: usize) -> bool {
        !self.is_zero(v) && !self.is_infinity(v)
    }

    /// True for the unique point outside every cluster torus (odd `m` only).
    pub fn is_alternating(&self) -> bool {
        (0..=self.m).all(|v| {
            if v % 2 == 0 {
                self.is_zero(v)
            } else {
                self.is_infinity(v)
            }
        })
    }

    /// Re-reads an `F_2` point inside `X_F(m)` for a larger field via `1 = [1:1]`.
    pub fn embed(&self, q: usize) -> Result<PointX> {
        if self.q != 2 {
            return Err(Error::InvalidParameter(format!(
                "only F_2 points embed; this point has q = {}",
                self.q
            )));
        }
        let labels = self
            .labels
            .iter()
            .map(|l| if l.index() == 2 { q as u8 } else { l.0 })
            .collect();
        PointX::new(q, labels)
    }

    /// The `F_2` point with the same labels, if every label is `0`, `1` or `inf`.
    pub fn restrict_to_f2(&self) -> Option<PointX> {
        let labels = self
            .labels
            .iter()
            .map(|l| match l.index() {
                0 => Some(0),
                1 => Some(1),
                x if x == self.q => Some(2),
                _ => None,
            })
            .collect::<Option<Vec<u8>>>()?;
        PointX::new(2, labels).ok()
    }

    fn color_mask(&self, vertices: impl Iterator<Item = usize>) -> u64 {
        vertices.fold(0u64, |mask, v| mask | 1 << self.labels[v].0)
    }
}

impl fmt::Display for PointX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, l) in self.labels.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            match l.index() {
                0 => write!(f, "0")?,
                x if x == self.q => write!(f, "inf")?,
                x => write!(f, "{x}")?,
            }
        }
        write!(f, ")")
    }
}

/// Every point of `X_{F_q}(m)` in lexicographic label order.
pub fn enumerate_points(m: usize, q: usize) -> Result<Vec<PointX>> {
    if !(1..=MAX_M).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "enumerate_points needs 1 <= m <= {MAX_M}, got {m}"
        )));
    }
    if !(2..=MAX_Q).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "field size q = {q} must lie in 2..={MAX_Q}"
        )));
    }
    let inf = q as u8;
    let mut out = Vec::new();
    let mut labels = vec![0u8; m + 1];
    labels[m] = inf;
    fill(1, m, q, &mut labels, &mut out);
    Ok(out)
}

fn fill(pos: usize, m: usize, q: usize, labels: &mut Vec<u8>, out: &mut Vec<PointX>) {
    if pos == m {
        if labels[m - 1] != labels[m] {
            out.push(PointX {
                m,
                q,
                labels: labels.iter().copied().map(ProjLabel).collect(),
            });
        }
        return;
    }
    for c in 0..=q as u8 {
        if c == labels[pos - 1] {
            continue;
        }
        labels[pos] = c;
        fill(pos + 1, m, q, labels, out);
    }
}

/// Points outside the alternating deep point.
pub fn enumerate_manifold_points(m: usize, q: usize) -> Result<Vec<PointX>> {
    Ok(enumerate_points(m, q)?
        .into_iter()
        .filter(|y| !y.is_alternating())
        .collect())
}

fn check_same_polygon(t: &Triangulation, y: &PointX) -> Result<()> {
    if t.m() != y.m() {
        return Err(Error::MismatchedPolygon(t.m(), y.m()));
    }
    Ok(())
}

/// True iff `y` lies in the cluster torus of `t`: endpoints of every diagonal differ.
pub fn is_proper(t: &Triangulation, y: &PointX) -> Result<bool> {
    check_same_polygon(t, y)?;
    Ok(proper_unchecked(t, y))
}

pub(crate) fn proper_unchecked(t: &Triangulation, y: &PointX) -> bool {
    t.diagonals()
        .iter()
        .all(|d| y.labels[d.i()] != y.labels[d.j()])
}

/// The map `c`: the unique proper `F_2` coloring of `t` with `0` and `inf`
/// pinned on the distinguished side.
///
/// Triangles are visited breadth-first from the one resting on `(0, m)`;
/// each forces its apex to the color missing from its base.
pub fn f2_coloring(t: &Triangulation) -> PointX {
    const UNSET: u8 = u8::MAX;
    let m = t.m();
    let adj = t.adjacency();
    let mut colors = vec![UNSET; m + 1];
    colors[0] = 0;
    colors[m] = 2;
    let mut queue = VecDeque::from([(0usize, m)]);
    while let Some((i, j)) = queue.pop_front() {
        if j - i < 2 {
            continue;
        }
        let between = ((1u64 << j) - 1) & !((2u64 << i) - 1);
        let apex_mask = adj[i] & adj[j] & between;
        assert!(
            apex_mask.count_ones() == 1,
            "invalid triangulation {t}: span ({i}, {j}) has no unique apex"
        );
        let k = apex_mask.trailing_zeros() as usize;
        let (a, b) = (colors[i], colors[j]);
        assert!(a != b, "invalid triangulation {t}: coloring contradiction at ({i}, {j})");
        let forced = 3 - a - b;
        assert!(
            colors[k] == UNSET || colors[k] == forced,
            "invalid triangulation {t}: vertex {k} forced twice"
        );
        colors[k] = forced;
        queue.push_back((i, k));
        queue.push_back((k, j));
    }
    PointX {
        m,
        q: 2,
        labels: colors.into_iter().map(ProjLabel).collect(),
    }
}

/// The set `I(y)`, sorted: diagonals with equal endpoint labels, or cutting
/// off a sub-polygon (endpoints included) whose labels take at most two values.
pub fn invalid_diagonals(y: &PointX) -> Vec<Diagonal> {
    let m = y.m;
    let mut out = Vec::new();
    for i in 0..=m {
        for j in i + 2..=m {
            if i == 0 && j == m {
                continue;
            }
            let d = Diagonal::new(m, i, j).expect("enumerated chords are diagonals");
            if !valid_unchecked(y, d) {
                out.push(d);
            }
        }
    }
    out
}

fn valid_unchecked(y: &PointX, d: Diagonal) -> bool {
    let (i, j) = d.endpoints();
    if y.labels[i] == y.labels[j] {
        return false;
    }
    let inner = y.color_mask(i..=j);
    let outer = y.color_mask((j..=y.m).chain(0..=i));
    inner.count_ones() >= 3 && outer.count_ones() >= 3
}

/// True iff some triangulation containing `d` admits `y` properly.
pub fn is_valid_diagonal(y: &PointX, d: Diagonal) -> Result<bool> {
    if d.j() > y.m || (d.i() == 0 && d.j() == y.m) {
        return Err(Error::InvalidDiagonal(format!(
            "{d} is not a diagonal of P_{}",
            y.m + 1
        )));
    }
    Ok(valid_unchecked(y, d))
}

/// Interval dynamic program: does any triangulation admit `y`?
///
/// `ok[i][j]` holds when the span `i..=j` (with `y_i != y_j`) can be
/// triangulated using only chords joining distinct labels.
pub fn admits_some_triangulation(y: &PointX) -> bool {
    let m = y.m;
    let n = m + 1;
    let mut ok = vec![vec![false; n]; n];
    for i in 0..m {
        ok[i][i + 1] = true;
    }
    for len in 2..=m {
        for i in 0..=m - len {
            let j = i + len;
            if y.labels[i] == y.labels[j] {
                continue;
            }
            ok[i][j] = (i + 1..j).any(|k| {
                y.labels[k] != y.labels[i]
                    && y.labels[k] != y.labels[j]
                    && ok[i][k]
                    && ok[k][j]
            });
        }
    }
    ok[0][m]
}

/// Points of `X_{F_q}(m)` admitted by no triangulation, by exhaustive search
/// over all triangulations.
pub fn deep_points(m: usize, q: usize) -> Result<Vec<PointX>> {
    if !(2..=10).contains(&m) {
        return Err(Error::ResourceLimit(format!(
            "deep_points is exhaustive and needs 2 <= m <= 10, got {m}"
        )));
    }
    if !(2..=4).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "deep_points supports q in 2..=4, got {q}"
        )));
    }
    let triangulations = enumerate_triangulations(m)?;
    Ok(enumerate_points(m, q)?
        .into_iter()
        .filter(|y| !triangulations.iter().any(|t| proper_unchecked(t, y)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(q: usize, labels: &[u8]) -> PointX {
        PointX::new(q, labels.to_vec()).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(PointX::new(2, vec![0, 2, 1, 2]).is_ok());
        assert!(PointX::new(2, vec![1, 2]).is_err());
        assert!(PointX::new(2, vec![0, 1, 1, 2]).is_err());
        assert!(PointX::new(2, vec![0, 3, 2]).is_err());
        assert!(PointX::new(1, vec![0, 1]).is_err());
    }

    #[test]
    fn small_point_counts() {
        assert_eq!(enumerate_points(5, 2).unwrap().len(), 11);
        assert_eq!(enumerate_points(3, 2).unwrap().len(), 3);
        assert_eq!(enumerate_points(5, 3).unwrap().len(), 61);
        assert_eq!(enumerate_points(1, 2).unwrap().len(), 1);
    }

    #[test]
    fn points_are_sorted() {
        let pts = enumerate_points(6, 3).unwrap();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn proper_points_of_a_hexagon_triangulation() {
        let t = Triangulation::from_pairs(5, &[(0, 4), (1, 4), (1, 3)]).unwrap();
        // y_1 = y_3 while 13 is a diagonal.
        let y = pt(2, &[0, 2, 1, 2, 1, 2]);
        assert!(!is_proper(&t, &y).unwrap());
        assert!(is_proper(&t, &pt(2, &[0, 2, 1, 0, 1, 2])).unwrap());
        assert!(is_proper(&t, &f2_coloring(&t)).unwrap());
        let bad = pt(2, &[0, 1, 0, 2, 1, 2]);
        let with_02 = Triangulation::fan(5, 0).unwrap();
        assert!(!is_proper(&with_02, &bad).unwrap());
    }

    #[test]
    fn mismatched_polygons() {
        let t = Triangulation::fan(5, 0).unwrap();
        let y = pt(2, &[0, 1, 2]);
        assert_eq!(is_proper(&t, &y), Err(Error::MismatchedPolygon(5, 2)));
    }

    #[test]
    fn square_coloring() {
        let t = Triangulation::from_pairs(3, &[(0, 2)]).unwrap();
        assert_eq!(f2_coloring(&t).raw_labels(), vec![0, 2, 1, 2]);
    }

    #[test]
    fn fan_at_zero_coloring() {
        // Every vertex touches 0, so the rest alternates 1/inf ending at inf.
        let t = Triangulation::fan(5, 0).unwrap();
        assert_eq!(f2_coloring(&t).raw_labels(), vec![0, 2, 1, 2, 1, 2]);
    }

    #[test]
    fn invalid_diagonal_examples() {
        let y = pt(2, &[0, 2, 1, 2, 1, 2]);
        let d = |i, j| Diagonal::new(5, i, j).unwrap();
        assert!(!is_valid_diagonal(&y, d(2, 4)).unwrap());
        assert!(!is_valid_diagonal(&y, d(1, 3)).unwrap());
        let z = pt(2, &[0, 1, 2, 1, 0, 2]);
        assert!(is_valid_diagonal(&z, d(0, 2)).unwrap());
        let alt = PointX::alternating(5, 2).unwrap();
        assert_eq!(invalid_diagonals(&alt).len(), 9);
    }

    #[test]
    fn embedding_round_trip() {
        let z = pt(2, &[0, 1, 2, 1, 0, 2]);
        let e = z.embed(3).unwrap();
        assert_eq!(e.raw_labels(), vec![0, 1, 3, 1, 0, 3]);
        assert_eq!(e.restrict_to_f2().unwrap(), z);
        assert!(pt(3, &[0, 2, 3]).restrict_to_f2().is_none());
    }

    #[test]
    fn json_shape() {
        let y = pt(2, &[0, 2, 1, 2, 1, 2]);
        let s = serde_json::to_string(&y).unwrap();
        assert_eq!(s, r#"{"m":5,"q":2,"labels":[0,2,1,2,1,2]}"#);
        assert_eq!(serde_json::from_str::<PointX>(&s).unwrap(), y);
        assert!(serde_json::from_str::<PointX>(r#"{"m":4,"q":2,"labels":[0,2,1,2,1,2]}"#).is_err());
    }

    #[test]
    fn deep_locus_small() {
        assert_eq!(
            deep_points(5, 2).unwrap(),
            vec![PointX::alternating(5, 2).unwrap()]
        );
        assert!(deep_points(4, 2).unwrap().is_empty());
    }
}
