//! Triangulations of the convex polygon `P_{m+1}`.
//!
//! Vertices are numbered `0..=m` clockwise. The side `(m, 0)` is the
//! distinguished side and is never a diagonal.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{IceQuiver, QuiverVertex};

/// Largest supported polygon parameter; vertex sets fit in a `u64` mask.
pub const MAX_M: usize = 62;

/// A chord `(i, j)` of `P_{m+1}` with `i < j`, `j - i >= 2` and `(i, j) != (0, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct Diagonal {
    i: u8,
    j: u8,
}

impl Diagonal {
    /// Builds a diagonal of `P_{m+1}`, normalizing the endpoint order.
    pub fn new(m: usize, a: usize, b: usize) -> Result<Self> {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if m > MAX_M || j > m {
            return Err(Error::InvalidDiagonal(format!(
                "({a}, {b}) is out of range for m = {m}"
            )));
        }
        if j - i < 2 || (i == 0 && j == m) {
            return Err(Error::InvalidDiagonal(format!(
                "({a}, {b}) is a side of the polygon, not a diagonal"
            )));
        }
        Ok(Diagonal::raw(i, j))
    }

    pub(crate) fn raw(i: usize, j: usize) -> Self {
        debug_assert!(i < j);
        Diagonal {
            i: i as u8,
            j: j as u8,
        }
    }

    pub fn i(&self) -> usize {
        self.i as usize
    }

    pub fn j(&self) -> usize {
        self.j as usize
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.i(), self.j())
    }

    /// True iff `v` lies strictly between the endpoints (on the `i+1..j-1` side).
    pub fn separates(&self, v: usize) -> bool {
        self.i() < v && v < self.j()
    }
}

impl From<Diagonal> for [usize; 2] {
    fn from(d: Diagonal) -> Self {
        [d.i(), d.j()]
    }
}

impl TryFrom<[usize; 2]> for Diagonal {
    type Error = Error;

    // The polygon parameter is not known here; the enclosing
    // triangulation re-validates against its own m.
    fn try_from([a, b]: [usize; 2]) -> Result<Self> {
        Diagonal::new(MAX_M, a, b)
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// True iff the open chords intersect.
pub fn crosses(d1: Diagonal, d2: Diagonal) -> bool {
    let inside = |v: usize| d1.separates(v);
    let shares = d1.i == d2.i || d1.i == d2.j || d1.j == d2.i || d1.j == d2.j;
    !shares && (inside(d2.i()) != inside(d2.j()))
}

/// A maximal non-crossing set of diagonals of `P_{m+1}`, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(try_from = "TriangulationRepr")]
pub struct Triangulation {
    m: usize,
    diagonals: Vec<Diagonal>,
}

#[derive(Deserialize)]
struct TriangulationRepr {
    m: usize,
    diagonals: Vec<[usize; 2]>,
}

impl TryFrom<TriangulationRepr> for Triangulation {
    type Error = Error;

    fn try_from(repr: TriangulationRepr) -> Result<Self> {
        let diagonals = repr
            .diagonals
            .iter()
            .map(|&[a, b]| Diagonal::new(repr.m, a, b))
            .collect::<Result<Vec<_>>>()?;
        Triangulation::new(repr.m, diagonals)
    }
}

impl Triangulation {
    /// Validates and canonicalizes a set of diagonals.
    pub fn new(m: usize, mut diagonals: Vec<Diagonal>) -> Result<Self> {
        if !(2..=MAX_M).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "polygon parameter m = {m} must lie in 2..={MAX_M}"
            )));
        }
        diagonals.sort_unstable();
        diagonals.dedup();
        for d in &diagonals {
            if d.j() > m || (d.i() == 0 && d.j() == m) {
                return Err(Error::InvalidTriangulation(format!(
                    "{d} is not a diagonal of P_{}",
                    m + 1
                )));
            }
        }
        if diagonals.len() != m - 2 {
            return Err(Error::InvalidTriangulation(format!(
                "expected {} diagonals, found {}",
                m - 2,
                diagonals.len()
            )));
        }
        for (k, &a) in diagonals.iter().enumerate() {
            if let Some(&b) = diagonals[k + 1..].iter().find(|&&b| crosses(a, b)) {
                return Err(Error::InvalidTriangulation(format!("{a} crosses {b}")));
            }
        }
        Ok(Triangulation { m, diagonals })
    }

    pub(crate) fn from_sorted_unchecked(m: usize, diagonals: Vec<Diagonal>) -> Self {
        debug_assert!(diagonals.windows(2).all(|w| w[0] < w[1]));
        Triangulation { m, diagonals }
    }

    /// Builds from raw pairs, convenient in tests and examples.
    pub fn from_pairs(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let diagonals = pairs
            .iter()
            .map(|&(a, b)| Diagonal::new(m, a, b))
            .collect::<Result<Vec<_>>>()?;
        Triangulation::new(m, diagonals)
    }

    /// The fan with every diagonal incident to `apex`.
    pub fn fan(m: usize, apex: usize) -> Result<Self> {
        if apex > m {
            return Err(Error::InvalidParameter(format!(
                "fan apex {apex} is not a vertex of P_{}",
                m + 1
            )));
        }
        let diagonals = (0..=m)
            .filter(|&v| v != apex)
            .filter_map(|v| Diagonal::new(m, apex, v).ok())
            .collect();
        Triangulation::new(m, diagonals)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    pub fn contains(&self, d: Diagonal) -> bool {
        self.diagonals.binary_search(&d).is_ok()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.diagonals.iter().map(Diagonal::endpoints).collect()
    }

    /// Adjacency masks of the graph formed by the diagonals and all polygon sides.
    pub fn adjacency(&self) -> Vec<u64> {
        let m = self.m;
        let mut adj = vec![0u64; m + 1];
        let mut link = |a: usize, b: usize| {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        };
        for v in 0..m {
            link(v, v + 1);
        }
        link(m, 0);
        for d in &self.diagonals {
            link(d.i(), d.j());
        }
        adj
    }

    /// All triangles `(a, b, c)` with `a < b < c`, sorted.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let adj = self.adjacency();
        let mut out = Vec::with_capacity(self.m - 1);
        for a in 0..=self.m {
            for b in a + 1..=self.m {
                if adj[a] & (1 << b) == 0 {
                    continue;
                }
                let mut common = adj[a] & adj[b] & !((2u64 << b) - 1);
                while common != 0 {
                    let c = common.trailing_zeros() as usize;
                    common &= common - 1;
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    /// The shared vertex when every diagonal meets one vertex.
    pub fn fan_apex(&self) -> Option<usize> {
        if self.diagonals.is_empty() {
            return None;
        }
        let first = self.diagonals[0];
        [first.i(), first.j()].into_iter().find(|&v| {
            self.diagonals
                .iter()
                .all(|d| d.i() == v || d.j() == v)
        })
    }

    /// Fans, including the degenerate triangle and square cases.
    pub fn is_fan(&self) -> bool {
        self.diagonals.len() <= 1 || self.fan_apex().is_some()
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} {{", self.m)?;
        for (k, d) in self.diagonals.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Triangulation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Triangulation", 2)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("diagonals", &self.pairs().iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>())?;
        st.end()
    }
}

/// Every triangulation of `P_{m+1}`, in lexicographic order of sorted diagonal lists.
///
/// Ear decomposition on the distinguished side: choose the apex of the
/// triangle on `(0, m)`, then triangulate the two sub-polygons.
pub fn enumerate_triangulations(m: usize) -> Result<Vec<Triangulation>> {
    if !(2..=MAX_M).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "enumerate_triangulations needs 2 <= m <= {MAX_M}, got {m}"
        )));
    }
    // Triangulations of the span 0..=len, memoized by span length.
    let mut memo: HashMap<usize, Vec<Vec<(usize, usize)>>> = HashMap::new();
    let shapes = spans(m, &mut memo);
    let mut out: Vec<Triangulation> = shapes
        .iter()
        .map(|pairs| {
            let mut diagonals: Vec<Diagonal> =
                pairs.iter().map(|&(i, j)| Diagonal::raw(i, j)).collect();
            diagonals.sort_unstable();
            Triangulation::from_sorted_unchecked(m, diagonals)
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

fn spans(
    len: usize,
    memo: &mut HashMap<usize, Vec<Vec<(usize, usize)>>>,
) -> &Vec<Vec<(usize, usize)>> {
    if !memo.contains_key(&len) {
        let mut result = Vec::new();
        if len < 2 {
            result.push(Vec::new());
        } else {
            for apex in 1..len {
                let left = spans(apex, memo).clone();
                let right = spans(len - apex, memo).clone();
                for l in &left {
                    for r in &right {
                        let mut pairs = Vec::with_capacity(len - 1);
                        if apex >= 2 {
                            pairs.push((0, apex));
                        }
                        if len - apex >= 2 {
                            pairs.push((apex, len));
                        }
                        pairs.extend(l.iter().copied());
                        pairs.extend(r.iter().map(|&(i, j)| (i + apex, j + apex)));
                        result.push(pairs);
                    }
                }
            }
        }
        memo.insert(len, result);
    }
    &memo[&len]
}

/// The two apexes of the triangles on either side of `d`.
fn quadrilateral_apexes(t: &Triangulation, d: Diagonal) -> (usize, usize) {
    let adj = t.adjacency();
    let common = adj[d.i()] & adj[d.j()];
    let mut inner = None;
    let mut outer = None;
    let mut bits = common;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if d.separates(v) {
            inner.get_or_insert(v);
        } else {
            outer.get_or_insert(v);
        }
    }
    (
        inner.expect("diagonal of a triangulation has a triangle on each side"),
        outer.expect("diagonal of a triangulation has a triangle on each side"),
    )
}

/// Replaces `d` by the other diagonal of its quadrilateral.
pub fn flip(t: &Triangulation, d: Diagonal) -> Result<Triangulation> {
    if !t.contains(d) {
        return Err(Error::NotADiagonal(d.i(), d.j()));
    }
    let (a, b) = quadrilateral_apexes(t, d);
    let replacement = Diagonal::raw(a.min(b), a.max(b));
    let mut diagonals: Vec<Diagonal> = t
        .diagonals
        .iter()
        .copied()
        .filter(|&x| x != d)
        .chain(std::iter::once(replacement))
        .collect();
    diagonals.sort_unstable();
    Ok(Triangulation::from_sorted_unchecked(t.m, diagonals))
}

/// The diagonal introduced by flipping `d`.
pub fn flip_partner(t: &Triangulation, d: Diagonal) -> Result<Diagonal> {
    if !t.contains(d) {
        return Err(Error::NotADiagonal(d.i(), d.j()));
    }
    let (a, b) = quadrilateral_apexes(t, d);
    Ok(Diagonal::raw(a.min(b), a.max(b)))
}

/// Ice quiver of a triangulation.
///
/// Mutable vertices `1..=m-2` follow the sorted diagonal order; the single
/// frozen vertex `m-1` sits on the side `(m-1, m)`. Each triangle
/// `a < b < c` carries the counterclockwise cycle
/// `(a,c) -> (b,c) -> (a,b) -> (a,c)`, restricted to edges that carry a vertex.
pub fn quiver_of(t: &Triangulation) -> IceQuiver {
    let m = t.m;
    let frozen_id = (m - 1) as u32;
    let id_of = |a: usize, b: usize| -> Option<u32> {
        if b == a + 1 && b == m {
            return Some(frozen_id);
        }
        t.diagonals
            .binary_search(&Diagonal { i: a as u8, j: b as u8 })
            .ok()
            .map(|k| k as u32 + 1)
    };
    let mut vertices: Vec<QuiverVertex> = (1..=t.diagonals.len() as u32)
        .map(|id| QuiverVertex { id, frozen: false })
        .collect();
    vertices.push(QuiverVertex {
        id: frozen_id,
        frozen: true,
    });
    let mut arrows = Vec::new();
    for [a, b, c] in t.triangles() {
        let cycle = [id_of(a, c), id_of(b, c), id_of(a, b)];
        for k in 0..3 {
            if let (Some(s), Some(tgt)) = (cycle[k], cycle[(k + 1) % 3]) {
                arrows.push((s, tgt));
            }
        }
    }
    arrows.sort_unstable();
    IceQuiver::from_parts_unchecked(vertices, arrows)
}
