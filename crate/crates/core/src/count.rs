//! `F_2` point counts of acyclic cluster varieties.
//!
//! Frozen variables evaluate to 1 at every `F_2` point, so both counting
//! routes work on the mutable part only.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{IceQuiver, MutablePart, QuiverVertex};

/// Default guard for the exhaustive solver.
pub const BRUTE_FORCE_MAX_MUTABLE: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    Recursion,
    BruteForce,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub count: u128,
    pub method: CountMethod,
}

/// Vertex elimination policy for the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elimination {
    /// Lowest-index sink or source.
    First,
    /// Pseudo-random admissible vertex, seeded.
    Seeded(u64),
}

/// Counts `F_2` points by repeatedly removing a sink or source `i`:
/// `#V(Q) = #V(Q - i) + 2 #V(Q - N(i))`, with the empty quiver counting 1.
pub fn f2_count_recursive(q: &IceQuiver) -> Result<CountResult> {
    f2_count_recursive_with(q, Elimination::First)
}

pub fn f2_count_recursive_with(q: &IceQuiver, order: Elimination) -> Result<CountResult> {
    let part = q.mutable_part()?;
    if !part.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    let mut solver = Recursion {
        part: &part,
        memo: HashMap::new(),
        order,
    };
    let count = solver.count(part.full_mask());
    Ok(CountResult {
        count,
        method: CountMethod::Recursion,
    })
}

struct Recursion<'a> {
    part: &'a MutablePart,
    // Keyed by the surviving vertex subset of the input's mutable part.
    memo: HashMap<u64, u128>,
    order: Elimination,
}

impl Recursion<'_> {
    fn count(&mut self, alive: u64) -> u128 {
        if alive == 0 {
            return 1;
        }
        if let Some(&c) = self.memo.get(&alive) {
            return c;
        }
        let v = self.pick(alive);
        let without = alive & !(1 << v);
        let without_nbhd = without & !self.part.neighbors(v);
        let c = self.count(without) + 2 * self.count(without_nbhd);
        self.memo.insert(alive, c);
        c
    }

    fn pick(&self, alive: u64) -> usize {
        let mut admissible = Vec::new();
        let mut bits = alive;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if self.part.out_mask[v] & alive == 0 || self.part.in_mask[v] & alive == 0 {
                admissible.push(v);
            }
        }
        assert!(!admissible.is_empty(), "acyclic subquiver without sink or source");
        match self.order {
            Elimination::First => admissible[0],
            Elimination::Seeded(seed) => {
                // splitmix64 of (seed, subset) so the choice varies per subproblem.
                let mut z = seed ^ alive.wrapping_mul(0x9E37_79B9_7F4A_7C15);
                z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
                z ^= z >> 31;
                admissible[(z % admissible.len() as u64) as usize]
            }
        }
    }
}

/// Enumerates every assignment of `F_2` values to `x_1..x_n, x'_1..x'_n`
/// (frozens fixed to 1) and counts those satisfying all exchange relations
/// `x_k x'_k = prod_{k->t} x_t + prod_{s->k} x_s`.
pub fn f2_count_bruteforce(q: &IceQuiver) -> Result<CountResult> {
    f2_count_bruteforce_with_limit(q, BRUTE_FORCE_MAX_MUTABLE)
}

pub fn f2_count_bruteforce_with_limit(q: &IceQuiver, max_mutable: usize) -> Result<CountResult> {
    let part = q.mutable_part()?;
    if !part.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    let n = part.n;
    if n > max_mutable || n > 31 {
        return Err(Error::ResourceLimit(format!(
            "brute force over 2^{} assignments exceeds the limit of {max_mutable} mutable vertices",
            2 * n
        )));
    }
    let size = 1u64 << n;
    let mut count: u128 = 0;
    for x in 0..size {
        // Bit k of rhs is the right-hand side of relation k at this x.
        let mut rhs = 0u64;
        for k in 0..n {
            let out_prod = (x & part.out_mask[k]) == part.out_mask[k];
            let in_prod = (x & part.in_mask[k]) == part.in_mask[k];
            if out_prod ^ in_prod {
                rhs |= 1 << k;
            }
        }
        for x_prime in 0..size {
            if x & x_prime == rhs {
                count += 1;
            }
        }
    }
    Ok(CountResult {
        count,
        method: CountMethod::BruteForce,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DynkinType {
    A,
    D,
    E,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DynkinType::A => "A",
            DynkinType::D => "D",
            DynkinType::E => "E",
        };
        f.write_str(s)
    }
}

impl FromStr for DynkinType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(DynkinType::A),
            "D" | "d" => Ok(DynkinType::D),
            "E" | "e" => Ok(DynkinType::E),
            other => Err(Error::InvalidParameter(format!("unknown Dynkin type {other:?}"))),
        }
    }
}

fn check_rank(ty: DynkinType, n: usize) -> Result<()> {
    let ok = match ty {
        DynkinType::A => n >= 1,
        DynkinType::D => n >= 4,
        DynkinType::E => (6..=8).contains(&n),
    };
    if !ok {
        return Err(Error::InvalidParameter(format!("unsupported rank {ty}{n}")));
    }
    Ok(())
}

/// Undirected Dynkin diagram edges on vertices `1..=n`.
pub fn dynkin_edges(ty: DynkinType, n: usize) -> Result<Vec<(u32, u32)>> {
    check_rank(ty, n)?;
    if n > 64 {
        return Err(Error::ResourceLimit(format!("rank {n} exceeds 64 vertices")));
    }
    let n = n as u32;
    let edges = match ty {
        DynkinType::A => (1..n).map(|k| (k, k + 1)).collect(),
        DynkinType::D => {
            let mut e: Vec<(u32, u32)> = (1..n - 2).map(|k| (k, k + 1)).collect();
            e.push((n - 1, n - 2));
            e.push((n, n - 2));
            e
        }
        DynkinType::E => {
            let mut e: Vec<(u32, u32)> = (1..n - 1).map(|k| (k, k + 1)).collect();
            e.push((n, 3));
            e
        }
    };
    Ok(edges)
}

/// Dynkin quiver with a fixed acyclic orientation: the path `1 -> 2 -> ...`,
/// the two D-tail leaves pointing into `n-2`, and the E branch pointing into
/// vertex 3. `A_1` gets one frozen neighbor so the mutable vertex is not isolated.
pub fn dynkin_quiver(ty: DynkinType, n: usize) -> Result<IceQuiver> {
    let edges = dynkin_edges(ty, n)?;
    let mut vertices: Vec<QuiverVertex> = (1..=n as u32)
        .map(|id| QuiverVertex { id, frozen: false })
        .collect();
    let mut arrows = edges;
    if ty == DynkinType::A && n == 1 {
        vertices.push(QuiverVertex { id: 2, frozen: true });
        arrows.push((1, 2));
    }
    IceQuiver::new(vertices, arrows)
}

/// Closed-form F_2 point count: `(2^{n+2} + (-1)^{n+1})/3` for `A_n`,
/// `(5 * 2^n + 7(-1)^n)/3` for `D_n`, and 381 for `E_8`.
pub fn closed_form(ty: DynkinType, n: usize) -> Result<BigUint> {
    check_rank(ty, n)?;
    let sign = |odd: bool| if odd { BigInt::from(-1) } else { BigInt::from(1) };
    let value: BigInt = match ty {
        DynkinType::A => ((BigInt::from(1) << (n + 2)) + sign((n + 1) % 2 == 1)) / 3,
        DynkinType::D => (BigInt::from(5) * (BigInt::from(1) << n) + 7 * sign(n % 2 == 1)) / 3,
        DynkinType::E if n == 8 => BigInt::from(381),
        DynkinType::E => return Err(Error::NoClosedForm(format!("E{n}"))),
    };
    Ok(value.to_biguint().expect("point counts are positive"))
}

/// Number of seeds: `C(2n+3, n+1)/(2n+3)` for `A_n`,
/// `(3n-2)/n * C(2n-2, n-1)` for `D_n`, and 25080 for `E_8`.
pub fn seed_count(ty: DynkinType, n: usize) -> Result<BigUint> {
    check_rank(ty, n)?;
    let value = match ty {
        DynkinType::A => binomial(2 * n + 3, n + 1) / BigUint::from(2 * n + 3),
        DynkinType::D => BigUint::from(3 * n - 2) * binomial(2 * n - 2, n - 1) / BigUint::from(n),
        DynkinType::E if n == 8 => BigUint::from(25080u32),
        DynkinType::E => return Err(Error::NoClosedForm(format!("seeds of E{n}"))),
    };
    Ok(value)
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// Parses `dynkin:T:n`, e.g. `dynkin:D:5`.
pub fn parse_builder(spec: &str) -> Result<IceQuiver> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["dynkin", ty, n] => {
            let ty: DynkinType = ty.parse()?;
            let n: usize = n
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad rank in {spec:?}")))?;
            dynkin_quiver(ty, n)
        }
        _ => Err(Error::InvalidParameter(format!(
            "expected a builder of the form dynkin:T:n, got {spec:?}"
        ))),
    }
}
