//! Ice quivers: loop-free multidigraphs with a mutable/frozen vertex split.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuiverVertex {
    pub id: u32,
    pub frozen: bool,
}

/// Arrows are stored as ordered `(source, target)` id pairs; repeated pairs
/// encode multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuiverRepr")]
pub struct IceQuiver {
    vertices: Vec<QuiverVertex>,
    arrows: Vec<(u32, u32)>,
}

#[derive(Deserialize)]
struct QuiverRepr {
    vertices: Vec<QuiverVertex>,
    arrows: Vec<(u32, u32)>,
}

impl TryFrom<QuiverRepr> for IceQuiver {
    type Error = Error;

    fn try_from(repr: QuiverRepr) -> Result<Self> {
        IceQuiver::new(repr.vertices, repr.arrows)
    }
}

impl IceQuiver {
    /// Validates: unique ids, known endpoints, no loops, no 2-cycles,
    /// no frozen-frozen arrows and no isolated mutable vertex.
    pub fn new(vertices: Vec<QuiverVertex>, arrows: Vec<(u32, u32)>) -> Result<Self> {
        let q = IceQuiver::from_parts_unchecked(vertices, arrows);
        q.validate()?;
        Ok(q)
    }

    pub(crate) fn from_parts_unchecked(
        mut vertices: Vec<QuiverVertex>,
        mut arrows: Vec<(u32, u32)>,
    ) -> Self {
        vertices.sort_unstable();
        arrows.sort_unstable();
        IceQuiver { vertices, arrows }
    }

    fn validate(&self) -> Result<()> {
        let mut frozen = BTreeMap::new();
        for v in &self.vertices {
            if frozen.insert(v.id, v.frozen).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex id {}", v.id)));
            }
        }
        let pairs: BTreeSet<(u32, u32)> = self.arrows.iter().copied().collect();
        for &(s, t) in &pairs {
            let (Some(&fs), Some(&ft)) = (frozen.get(&s), frozen.get(&t)) else {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {s} -> {t} references an unknown vertex"
                )));
            };
            if s == t {
                return Err(Error::InvalidQuiver(format!("loop at vertex {s}")));
            }
            if pairs.contains(&(t, s)) {
                return Err(Error::InvalidQuiver(format!(
                    "directed 2-cycle between {s} and {t}"
                )));
            }
            if fs && ft {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {s} -> {t} joins two frozen vertices"
                )));
            }
        }
        for v in self.vertices.iter().filter(|v| !v.frozen) {
            if !pairs.iter().any(|&(s, t)| s == v.id || t == v.id) {
                return Err(Error::InvalidQuiver(format!(
                    "mutable vertex {} is isolated; it must be frozen",
                    v.id
                )));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[QuiverVertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(u32, u32)] {
        &self.arrows
    }

    pub fn mutable_count(&self) -> usize {
        self.vertices.iter().filter(|v| !v.frozen).count()
    }

    pub fn frozen_count(&self) -> usize {
        self.vertices.len() - self.mutable_count()
    }

    /// Mutable ids in increasing order; positions in this list index the
    /// bitmasks of [`MutablePart`].
    pub fn mutable_ids(&self) -> Vec<u32> {
        self.vertices.iter().filter(|v| !v.frozen).map(|v| v.id).collect()
    }

    /// The full subquiver on the mutable vertices, as bitmasks.
    pub fn mutable_part(&self) -> Result<MutablePart> {
        let ids = self.mutable_ids();
        if ids.len() > 64 {
            return Err(Error::ResourceLimit(format!(
                "{} mutable vertices exceed the 64-vertex limit",
                ids.len()
            )));
        }
        let index: BTreeMap<u32, usize> = ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
        let n = ids.len();
        let mut out_mask = vec![0u64; n];
        let mut in_mask = vec![0u64; n];
        for &(s, t) in &self.arrows {
            if let (Some(&a), Some(&b)) = (index.get(&s), index.get(&t)) {
                out_mask[a] |= 1 << b;
                in_mask[b] |= 1 << a;
            }
        }
        Ok(MutablePart {
            n,
            out_mask,
            in_mask,
        })
    }

    /// True iff the mutable part has no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        self.mutable_part().map(|p| p.is_acyclic()).unwrap_or(false)
    }
}

/// Directed graph on `n <= 64` mutable vertices, stored as neighbor masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutablePart {
    pub n: usize,
    pub out_mask: Vec<u64>,
    pub in_mask: Vec<u64>,
}

impl MutablePart {
    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.out_mask[v] | self.in_mask[v]
    }

    /// Kahn-style peeling of sinks.
    pub fn is_acyclic(&self) -> bool {
        let mut alive = self.full_mask();
        loop {
            if alive == 0 {
                return true;
            }
            let mut peeled = false;
            let mut bits = alive;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if self.out_mask[v] & alive == 0 {
                    alive &= !(1 << v);
                    peeled = true;
                }
            }
            if !peeled {
                return false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mutable(id: u32) -> QuiverVertex {
        QuiverVertex { id, frozen: false }
    }

    fn frozen(id: u32) -> QuiverVertex {
        QuiverVertex { id, frozen: true }
    }

    #[test]
    fn rejects_bad_quivers() {
        let loops = IceQuiver::new(vec![mutable(1), mutable(2)], vec![(1, 1), (1, 2)]);
        assert!(matches!(loops, Err(Error::InvalidQuiver(_))));
        let two_cycle = IceQuiver::new(vec![mutable(1), mutable(2)], vec![(1, 2), (2, 1)]);
        assert!(matches!(two_cycle, Err(Error::InvalidQuiver(_))));
        let frozen_pair = IceQuiver::new(
            vec![mutable(1), frozen(2), frozen(3)],
            vec![(1, 2), (2, 3)],
        );
        assert!(matches!(frozen_pair, Err(Error::InvalidQuiver(_))));
        let isolated = IceQuiver::new(vec![mutable(1)], vec![]);
        assert!(matches!(isolated, Err(Error::InvalidQuiver(_))));
        let unknown = IceQuiver::new(vec![mutable(1)], vec![(1, 9)]);
        assert!(matches!(unknown, Err(Error::InvalidQuiver(_))));
    }

    #[test]
    fn multiplicity_is_kept() {
        let q = IceQuiver::new(vec![mutable(1), mutable(2)], vec![(1, 2), (1, 2)]).unwrap();
        assert_eq!(q.arrows().len(), 2);
        let part = q.mutable_part().unwrap();
        assert_eq!(part.out_mask, vec![0b10, 0]);
    }

    #[test]
    fn detects_cycles() {
        let tri = IceQuiver::new(
            vec![mutable(1), mutable(2), mutable(3)],
            vec![(1, 2), (2, 3), (3, 1)],
        )
        .unwrap();
        assert!(!tri.is_acyclic());
        let path = IceQuiver::new(
            vec![mutable(1), mutable(2), mutable(3)],
            vec![(1, 2), (2, 3), (1, 3)],
        )
        .unwrap();
        assert!(path.is_acyclic());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"vertices":[{"id":1,"frozen":false},{"id":2,"frozen":true}],"arrows":[[1,2]]}"#;
        let q: IceQuiver = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), text);
    }
}
