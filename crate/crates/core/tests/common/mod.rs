//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cluster_f2::{is_proper, Diagonal, PointX, Triangulation};

/// Catalan numbers by the convolution recurrence.
pub fn catalan(n: usize) -> u128 {
    let mut c = vec![1u128];
    for k in 1..=n {
        c.push((0..k).map(|i| c[i] * c[k - 1 - i]).sum());
    }
    c[n]
}

/// `#X_{F_q}(m)` by dynamic programming over the last label.
pub fn point_count(m: usize, q: usize) -> u128 {
    let mut ways = vec![0u128; q + 1];
    ways[0] = 1;
    for _ in 0..m {
        let total: u128 = ways.iter().sum();
        ways = ways.iter().map(|w| total - w).collect();
    }
    ways[q]
}

/// `(2^m - (-1)^m)/3`, minus the deep point when `m` is odd.
pub fn manifold_f2_count(m: usize) -> usize {
    let full = ((1i128 << m) - if m % 2 == 0 { 1 } else { -1 }) / 3;
    (full - (m % 2) as i128) as usize
}

/// The label sequence `0, inf, 0, inf, ...`.
pub fn alternates(y: &PointX) -> bool {
    let inf = y.q() as u8;
    y.raw_labels()
        .iter()
        .enumerate()
        .all(|(k, &l)| l == if k % 2 == 0 { 0 } else { inf })
}

/// Diagonals that lie in at least one triangulation properly colored by `y`.
pub fn admitted_diagonals(y: &PointX, all: &[Triangulation]) -> BTreeSet<Diagonal> {
    all.iter()
        .filter(|t| is_proper(t, y).unwrap())
        .flat_map(|t| t.diagonals().iter().copied())
        .collect()
}

pub fn admitted_by_some(y: &PointX, all: &[Triangulation]) -> bool {
    all.iter().any(|t| is_proper(t, y).unwrap())
}

/// Every diagonal of the `(m+1)`-gon.
pub fn all_diagonals(m: usize) -> Vec<Diagonal> {
    (0..=m)
        .flat_map(|i| (i + 2..=m).map(move |j| (i, j)))
        .filter_map(|(i, j)| Diagonal::new(m, i, j).ok())
        .collect()
}
