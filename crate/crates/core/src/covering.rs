//! Covering sets of seeds: the fan construction `Upsilon`, its `F_2`
//! shadow, coverage/minimality checks and the 12-gon counterexample.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{
    enumerate_manifold_points, f2_coloring, invalid_diagonals, proper_unchecked, PointX,
};
use crate::error::{Error, Result};
use crate::polygon::{enumerate_triangulations, Diagonal, Triangulation};

/// The triangulation `Upsilon(y)` of the alternating-pivot fan construction.
///
/// Pivots `i_1 < i_2 < ...` alternate between the first generic label
/// (neither 0 nor infinity) and the first zero label after the previous
/// pivot. Pivot `i_k` is joined to `m` and to every vertex from `i_{k-1}`
/// up to itself. When the next pivot does not exist, the last fan is
/// replaced by one of two repairs that finish the polygon.
pub fn algorithm_a(y: &PointX) -> Result<Triangulation> {
    if y.is_alternating() {
        return Err(Error::NoCover(y.to_string()));
    }
    let m = y.m();
    // One fan per pivot, so the last one can be retracted.
    let mut fans: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut pivots = vec![0usize];
    loop {
        let last = *pivots.last().unwrap();
        let want_generic = pivots.len() % 2 == 1;
        let next = (last + 1..m).find(|&v| {
            if want_generic {
                y.is_generic(v)
            } else {
                y.is_zero(v)
            }
        });
        match next {
            Some(p) => {
                let mut fan = vec![(p, m)];
                fan.extend((last..p).map(|j| (j, p)));
                fans.push(fan);
                pivots.push(p);
                if p == m - 1 {
                    break;
                }
            }
            None if !want_generic => {
                // A generic pivot with no zero after it.
                let prev = pivots[pivots.len() - 2];
                fans.pop();
                let ell = (0..m).rev().find(|&v| y.is_zero(v)).unwrap();
                let mut repair: Vec<(usize, usize)> = (ell + 1..m).map(|j| (ell, j)).collect();
                repair.extend((prev..=ell).map(|j| (j, m - 1)));
                fans.push(repair);
                break;
            }
            None => {
                // A zero pivot with no generic label after it.
                let zero_pivot = last;
                let prev = pivots[pivots.len() - 2];
                fans.pop();
                let mut repair: Vec<(usize, usize)> =
                    (zero_pivot..=m).map(|j| (prev, j)).collect();
                repair.extend((prev..zero_pivot).map(|j| (j, zero_pivot)));
                fans.push(repair);
                break;
            }
        }
    }
    let diagonals: BTreeSet<Diagonal> = fans
        .into_iter()
        .flatten()
        .filter_map(|(a, b)| Diagonal::new(m, a, b).ok())
        .collect();
    let t = Triangulation::new(m, diagonals.into_iter().collect())
        .expect("the fan construction always closes to a triangulation");
    Ok(t)
}

/// `c(Upsilon(y))` computed directly by rewriting labels, without building
/// the triangulation. Returns an `F_2` point.
pub fn algorithm_b(y: &PointX) -> Result<PointX> {
    if y.is_alternating() {
        return Err(Error::NoCover(y.to_string()));
    }
    const ZERO: u8 = 0;
    const ONE: u8 = 1;
    const INF: u8 = 2;
    let m = y.m();
    let copy = |v: usize| if y.is_zero(v) { ZERO } else { INF };
    let mut z = vec![u8::MAX; m + 1];
    z[0] = ZERO;
    z[m] = INF;
    let mut pivots = vec![0usize];
    loop {
        let last = *pivots.last().unwrap();
        let want_generic = pivots.len() % 2 == 1;
        let next = (last + 1..m).find(|&v| {
            if want_generic {
                y.is_generic(v)
            } else {
                y.is_zero(v)
            }
        });
        match next {
            Some(p) => {
                if want_generic {
                    for v in last + 1..p {
                        z[v] = copy(v);
                    }
                    z[p] = ONE;
                } else {
                    for (k, v) in (last + 1..p).enumerate() {
                        z[v] = if k % 2 == 0 { INF } else { ONE };
                    }
                    z[p] = ZERO;
                }
                pivots.push(p);
                if p == m - 1 {
                    break;
                }
            }
            None if !want_generic => {
                let prev = pivots[pivots.len() - 2];
                let ell = (0..m).rev().find(|&v| y.is_zero(v)).unwrap();
                for v in prev + 1..=ell {
                    z[v] = copy(v);
                }
                // Alternate 1/inf backwards from z_m = inf.
                for v in ell + 1..=m {
                    z[v] = if (m - v) % 2 == 0 { INF } else { ONE };
                }
                break;
            }
            None => {
                let zero_pivot = last;
                let prev = pivots[pivots.len() - 2];
                for (k, v) in (prev..zero_pivot).enumerate() {
                    z[v] = if k % 2 == 0 { ONE } else { INF };
                }
                z[zero_pivot] = ZERO;
                for v in zero_pivot + 1..=m {
                    z[v] = copy(v);
                }
                break;
            }
        }
    }
    PointX::new(2, z)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub point: PointX,
    /// Indices into the cover of every member admitting the point.
    pub members: Vec<usize>,
}

/// Outcome of checking a set of triangulations against `X'_{F_q}(m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub m: usize,
    pub q: usize,
    pub cover: Vec<Triangulation>,
    /// `|X'_{F_q}(m)|`.
    pub total_points: usize,
    pub covered_count: usize,
    pub uncovered: Vec<PointX>,
    pub covering: bool,
    /// `|X'_{F_2}(m)|`, the least possible size of a covering.
    pub f2_points: usize,
    pub size_matches_f2: bool,
    /// No member can be dropped without uncovering an `F_2` point.
    pub minimal: bool,
    /// Members whose removal leaves every `F_2` point covered.
    pub redundant_members: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<Assignment>>,
}

/// Exhaustive coverage and minimality check. Members are deduplicated and sorted.
pub fn verify_covering(cover: &[Triangulation], m: usize, q: usize) -> Result<CoverReport> {
    verify_covering_with(cover, m, q, false)
}

pub fn verify_covering_with(
    cover: &[Triangulation],
    m: usize,
    q: usize,
    with_assignment: bool,
) -> Result<CoverReport> {
    if let Some(t) = cover.iter().find(|t| t.m() != m) {
        return Err(Error::MismatchedPolygon(t.m(), m));
    }
    let cover: Vec<Triangulation> = cover
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let points = enumerate_manifold_points(m, q)?;
    let first_hit: Vec<Option<usize>> = points
        .par_iter()
        .map(|y| cover.iter().position(|t| proper_unchecked(t, y)))
        .collect();
    let uncovered: Vec<PointX> = points
        .iter()
        .zip(&first_hit)
        .filter(|(_, hit)| hit.is_none())
        .map(|(y, _)| y.clone())
        .collect();
    let covered_count = points.len() - uncovered.len();

    let f2 = enumerate_manifold_points(m, 2)?;
    let mut essential = vec![false; cover.len()];
    for z in &f2 {
        let z = z.embed(q)?;
        let mut hits = cover
            .iter()
            .enumerate()
            .filter(|(_, t)| proper_unchecked(t, &z))
            .map(|(k, _)| k);
        if let (Some(only), None) = (hits.next(), hits.next()) {
            essential[only] = true;
        }
    }
    let redundant_members: Vec<usize> = (0..cover.len()).filter(|&k| !essential[k]).collect();
    let assignment = with_assignment.then(|| {
        points
            .par_iter()
            .map(|y| Assignment {
                point: y.clone(),
                members: (0..cover.len())
                    .filter(|&k| proper_unchecked(&cover[k], y))
                    .collect(),
            })
            .collect()
    });
    Ok(CoverReport {
        m,
        q,
        total_points: points.len(),
        covered_count,
        covering: uncovered.is_empty(),
        uncovered,
        f2_points: f2.len(),
        size_matches_f2: cover.len() == f2.len(),
        minimal: !cover.is_empty() && redundant_members.is_empty(),
        redundant_members,
        assignment,
        cover,
    })
}

/// `{Upsilon(y) : y in X'_{F_q}(m)}` and its coverage report.
pub fn upsilon_cover(m: usize, q: usize) -> Result<CoverReport> {
    if !(2..=11).contains(&m) {
        return Err(Error::ResourceLimit(format!(
            "upsilon_cover needs 2 <= m <= 11, got {m}"
        )));
    }
    if !(2..=4).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "upsilon_cover supports q in 2..=4, got {q}"
        )));
    }
    upsilon_cover_unguarded(m, q)
}

pub fn upsilon_cover_unguarded(m: usize, q: usize) -> Result<CoverReport> {
    let image = upsilon_image(m, q)?;
    verify_covering(&image, m, q)
}

/// Sorted, deduplicated image of `Upsilon` on `X'_{F_q}(m)`.
pub fn upsilon_image(m: usize, q: usize) -> Result<Vec<Triangulation>> {
    let points = enumerate_manifold_points(m, q)?;
    let image: Vec<Triangulation> = points
        .par_iter()
        .map(algorithm_a)
        .collect::<Result<Vec<_>>>()?;
    Ok(image.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
}

/// Pointwise checks of the identities relating `Upsilon`, `c` and Algorithm B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub m: usize,
    pub q: usize,
    pub points: usize,
    /// Points with `Upsilon(y) != Upsilon(c(Upsilon(y)))`.
    pub composition_failures: usize,
    /// Points where Algorithm B differs from `c(Upsilon(y))`.
    pub algorithm_b_failures: usize,
    /// Points where `Upsilon(y)` does not admit `y`.
    pub improper: usize,
}

pub fn check_identities(m: usize, q: usize) -> Result<IdentityReport> {
    let points = enumerate_manifold_points(m, q)?;
    let failures: Vec<(bool, bool, bool)> = points
        .par_iter()
        .map(|y| -> Result<(bool, bool, bool)> {
            let t = algorithm_a(y)?;
            let z = f2_coloring(&t);
            let composed = algorithm_a(&z)?;
            Ok((composed != t, algorithm_b(y)? != z, !proper_unchecked(&t, y)))
        })
        .collect::<Result<_>>()?;
    Ok(IdentityReport {
        m,
        q,
        points: points.len(),
        composition_failures: failures.iter().filter(|f| f.0).count(),
        algorithm_b_failures: failures.iter().filter(|f| f.1).count(),
        improper: failures.iter().filter(|f| f.2).count(),
    })
}

/// Labels of the 12-gon witness `(0,a,inf,a,b,0,inf,b,a,0,b,inf)` with `a = 1`, `b = 2`.
pub fn counterexample_witness(q: usize) -> Result<PointX> {
    if q < 3 {
        return Err(Error::InvalidParameter(format!(
            "the counterexample needs two distinct generic colors, so q >= 3; got {q}"
        )));
    }
    let inf = q as u8;
    PointX::new(q, vec![0, 1, inf, 1, 2, 0, inf, 2, 1, 0, 2, inf])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub q: usize,
    pub witness: PointX,
    pub witness_invalid: Vec<Diagonal>,
    /// Every `F_2` point `z` has a diagonal in `I(y)` that is valid for `z`.
    pub separated_from_all_f2: bool,
    /// `F_2` points `z` with `I(y)` contained in `I(z)`.
    pub unseparated: Vec<PointX>,
    /// Cover members admitting the witness; empty for a genuine counterexample.
    pub members_admitting_witness: Vec<usize>,
    /// Coverage of `X'_{F_2}(11)` by the constructed set.
    pub f2_report: CoverReport,
}

/// For each `z` in `X'_{F_2}(11)`, picks the least diagonal of `I(y) \ I(z)`
/// and the least triangulation containing it that admits `z`. The resulting
/// set covers every `F_2` point yet misses the witness `y`.
pub fn counterexample_cover(q: usize) -> Result<CounterexampleReport> {
    const M: usize = 11;
    let witness = counterexample_witness(q)?;
    let witness_invalid = invalid_diagonals(&witness);
    let all = enumerate_triangulations(M)?;
    let f2 = enumerate_manifold_points(M, 2)?;
    let picks: Vec<std::result::Result<Triangulation, PointX>> = f2
        .par_iter()
        .map(|z| {
            let z_invalid = invalid_diagonals(z);
            let Some(&d) = witness_invalid.iter().find(|d| !z_invalid.contains(d)) else {
                return Err(z.clone());
            };
            let t = all
                .iter()
                .find(|t| t.contains(d) && proper_unchecked(t, z))
                .expect("a valid diagonal lies in some admitting triangulation");
            Ok(t.clone())
        })
        .collect();
    let unseparated: Vec<PointX> = picks.iter().filter_map(|p| p.clone().err()).collect();
    let cover: Vec<Triangulation> = picks.into_iter().filter_map(|p| p.ok()).collect();
    let f2_report = verify_covering(&cover, M, 2)?;
    let members_admitting_witness = f2_report
        .cover
        .iter()
        .enumerate()
        .filter(|(_, t)| proper_unchecked(t, &witness))
        .map(|(k, _)| k)
        .collect();
    Ok(CounterexampleReport {
        q,
        witness,
        witness_invalid,
        separated_from_all_f2: unseparated.is_empty(),
        unseparated,
        members_admitting_witness,
        f2_report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_proper;

    fn pt(q: usize, labels: &[u8]) -> PointX {
        PointX::new(q, labels.to_vec()).unwrap()
    }

    // Twelve-gon inputs over q = 3 with a = 1, b = 2, inf = 3.
    const ROW_PLAIN: [u8; 12] = [0, 1, 3, 1, 2, 0, 3, 2, 1, 0, 2, 3];
    const ROW_CASE_ONE: [u8; 12] = [0, 1, 3, 1, 2, 0, 3, 0, 1, 2, 1, 3];
    const ROW_CASE_TWO: [u8; 12] = [0, 1, 3, 1, 2, 1, 0, 3, 0, 3, 0, 3];

    #[test]
    fn fans_without_repair() {
        let t = algorithm_a(&pt(3, &ROW_PLAIN)).unwrap();
        assert_eq!(
            t.pairs(),
            vec![(1, 5), (1, 11), (2, 5), (3, 5), (5, 7), (5, 11), (7, 9), (7, 11), (9, 11)]
        );
    }

    #[test]
    fn repair_after_last_generic_pivot() {
        let t = algorithm_a(&pt(3, &ROW_CASE_ONE)).unwrap();
        assert_eq!(
            t.pairs(),
            vec![(1, 5), (1, 11), (2, 5), (3, 5), (5, 10), (5, 11), (6, 10), (7, 9), (7, 10)]
        );
    }

    #[test]
    fn repair_after_last_zero_pivot() {
        let t = algorithm_a(&pt(3, &ROW_CASE_TWO)).unwrap();
        assert_eq!(
            t.pairs(),
            vec![(1, 6), (1, 7), (1, 8), (1, 9), (1, 10), (1, 11), (2, 6), (3, 6), (4, 6)]
        );
    }

    #[test]
    fn label_rewriting_outputs() {
        assert_eq!(
            algorithm_b(&pt(3, &ROW_PLAIN)).unwrap().raw_labels(),
            vec![0, 1, 2, 1, 2, 0, 2, 1, 2, 0, 1, 2]
        );
        assert_eq!(
            algorithm_b(&pt(3, &ROW_CASE_ONE)).unwrap().raw_labels(),
            vec![0, 1, 2, 1, 2, 0, 2, 0, 1, 2, 1, 2]
        );
        assert_eq!(
            algorithm_b(&pt(3, &ROW_CASE_TWO)).unwrap().raw_labels(),
            vec![0, 1, 2, 1, 2, 1, 0, 2, 0, 2, 0, 2]
        );
    }

    #[test]
    fn square_example() {
        let y = pt(2, &[0, 1, 0, 2]);
        assert_eq!(algorithm_a(&y).unwrap().pairs(), vec![(1, 3)]);
    }

    #[test]
    fn deep_point_has_no_cover() {
        let alt = PointX::alternating(7, 3).unwrap();
        assert!(matches!(algorithm_a(&alt), Err(Error::NoCover(_))));
        assert!(matches!(algorithm_b(&alt), Err(Error::NoCover(_))));
    }

    #[test]
    fn fan_coloring_round_trip() {
        for apex in 0..=6 {
            let y = f2_coloring(&Triangulation::fan(6, apex).unwrap());
            let t = algorithm_a(&y).unwrap();
            assert!(is_proper(&t, &y).unwrap());
        }
    }

    #[test]
    fn hexagon_cover() {
        let report = upsilon_cover(5, 2).unwrap();
        assert_eq!(report.cover.len(), 10);
        assert!(report.covering && report.minimal && report.size_matches_f2);
    }

    #[test]
    fn full_set_is_not_minimal() {
        let all = enumerate_triangulations(5).unwrap();
        let report = verify_covering(&all, 5, 2).unwrap();
        assert!(report.covering);
        assert!(!report.minimal);
    }

    #[test]
    fn dropping_a_member_uncovers_its_point() {
        let mut cover = upsilon_cover(5, 2).unwrap().cover;
        let removed = cover.remove(3);
        let report = verify_covering(&cover, 5, 2).unwrap();
        assert!(!report.covering);
        assert_eq!(report.uncovered, vec![f2_coloring(&removed)]);
    }

    #[test]
    fn empty_cover() {
        let report = verify_covering(&[], 4, 2).unwrap();
        assert_eq!(report.uncovered.len(), 5);
        assert_eq!(report.covered_count, 0);
        assert!(!report.minimal);
    }

    #[test]
    fn assignment_is_optional() {
        let image = upsilon_image(4, 3).unwrap();
        let plain = verify_covering(&image, 4, 3).unwrap();
        assert!(plain.assignment.is_none());
        let verbose = verify_covering_with(&image, 4, 3, true).unwrap();
        let assignment = verbose.assignment.unwrap();
        assert_eq!(assignment.len(), verbose.total_points);
        assert!(assignment.iter().all(|a| !a.members.is_empty()));
    }

    #[test]
    fn counterexample_needs_a_bigger_field() {
        assert!(matches!(counterexample_cover(2), Err(Error::InvalidParameter(_))));
    }
}
