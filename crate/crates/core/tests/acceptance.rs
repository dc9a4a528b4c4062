//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails or overruns its time budget.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use cluster_f2::count::f2_count_bruteforce_with_limit;
use cluster_f2::{
    algorithm_a, check_identities, closed_form, counterexample_cover, deep_points, dynkin_quiver,
    enumerate_manifold_points, enumerate_points, enumerate_triangulations, f2_count_bruteforce,
    f2_count_recursive, find_hex_moves, invalid_diagonals, is_proper, is_valid_diagonal,
    seed_count, upsilon_cover, verify_theorem_main, DynkinType,
};
use common::{
    admitted_by_some, admitted_diagonals, all_diagonals, alternates, catalan, manifold_f2_count,
};

type Outcome = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: u128) -> BigUint {
    BigUint::from(v)
}

fn table1_a() -> Outcome {
    for n in 1..=10 {
        let q = dynkin_quiver(DynkinType::A, n).map_err(|e| e.to_string())?;
        let rec = f2_count_recursive(&q).map_err(|e| e.to_string())?.count;
        let brute = f2_count_bruteforce(&q).map_err(|e| e.to_string())?.count;
        let closed = closed_form(DynkinType::A, n).map_err(|e| e.to_string())?;
        let points = enumerate_points(n + 2, 2).map_err(|e| e.to_string())?.len() as u128;
        ensure(
            big(rec) == closed && rec == brute && rec == points,
            || format!("A{n}: recursion {rec}, brute {brute}, closed {closed}, points {points}"),
        )?;
        if n == 3 {
            ensure(rec == 11, || format!("A3 gave {rec}"))?;
        }
    }
    Ok(())
}

fn table1_d() -> Outcome {
    for n in 4..=7 {
        let q = dynkin_quiver(DynkinType::D, n).map_err(|e| e.to_string())?;
        let rec = f2_count_recursive(&q).map_err(|e| e.to_string())?.count;
        let brute = f2_count_bruteforce(&q).map_err(|e| e.to_string())?.count;
        let closed = closed_form(DynkinType::D, n).map_err(|e| e.to_string())?;
        let sign: i128 = if n % 2 == 0 { 7 } else { -7 };
        let oracle = ((5i128 << n) + sign) / 3;
        ensure(
            big(rec) == closed && rec == brute && rec as i128 == oracle,
            || format!("D{n}: recursion {rec}, brute {brute}, closed {closed}, oracle {oracle}"),
        )?;
    }
    let d4 = dynkin_quiver(DynkinType::D, 4).map_err(|e| e.to_string())?;
    let c = f2_count_recursive(&d4).map_err(|e| e.to_string())?.count;
    ensure(c == 29, || format!("D4 gave {c}"))
}

fn table1_e8() -> Outcome {
    let q = dynkin_quiver(DynkinType::E, 8).map_err(|e| e.to_string())?;
    let rec = f2_count_recursive(&q).map_err(|e| e.to_string())?.count;
    let brute = f2_count_bruteforce_with_limit(&q, 8)
        .map_err(|e| e.to_string())?
        .count;
    let closed = closed_form(DynkinType::E, 8).map_err(|e| e.to_string())?;
    ensure(rec == 381 && brute == 381 && closed == big(381), || {
        format!("E8: recursion {rec}, brute {brute}, closed {closed}")
    })
}

fn seeds_column() -> Outcome {
    for n in 1..=8 {
        let seeds = seed_count(DynkinType::A, n).map_err(|e| e.to_string())?;
        let enumerated = enumerate_triangulations(n + 2).map_err(|e| e.to_string())?.len() as u128;
        let cat = catalan(n + 1);
        ensure(seeds == big(cat) && enumerated == cat, || {
            format!("A{n}: seeds {seeds}, enumerated {enumerated}, Catalan {cat}")
        })?;
    }
    let a3 = seed_count(DynkinType::A, 3).map_err(|e| e.to_string())?;
    ensure(a3 == big(14), || format!("A3 seeds {a3}"))?;
    let e8 = seed_count(DynkinType::E, 8).map_err(|e| e.to_string())?;
    ensure(e8 == big(25080), || format!("E8 seeds {e8}"))?;
    for (n, want) in [(4, 50u128), (5, 182), (6, 672), (7, 2508)] {
        let d = seed_count(DynkinType::D, n).map_err(|e| e.to_string())?;
        ensure(d == big(want), || format!("D{n} seeds {d}, expected {want}"))?;
    }
    Ok(())
}

fn hex_partition() -> Outcome {
    for m in 3..=10 {
        let report = verify_theorem_main(m).map_err(|e| e.to_string())?;
        ensure(report.equal && report.mixed_classes == 0, || {
            format!(
                "m={m}: {} classes vs {} fibers, {} mixed",
                report.classes, report.fibers, report.mixed_classes
            )
        })?;
        ensure(report.fibers == manifold_f2_count(m), || {
            format!("m={m}: {} fibers", report.fibers)
        })?;
        if m == 5 {
            let hist: Vec<(usize, usize)> = report.histogram.into_iter().collect();
            ensure(hist == vec![(1, 6), (2, 4)], || format!("m=5 histogram {hist:?}"))?;
        }
    }
    Ok(())
}

fn fan_corollary() -> Outcome {
    for m in 2..=8 {
        for t in enumerate_triangulations(m).map_err(|e| e.to_string())? {
            let stuck = find_hex_moves(&t).is_empty();
            // Fan: some vertex lies on every diagonal.
            let fan = (0..=m).any(|v| t.diagonals().iter().all(|d| d.i() == v || d.j() == v));
            ensure(stuck == fan, || format!("m={m}: {:?} stuck={stuck} fan={fan}", t.pairs()))?;
        }
    }
    Ok(())
}

fn upsilon_minimal_cover() -> Outcome {
    for q in 2..=4 {
        for m in 2..=9 {
            let report = upsilon_cover(m, q).map_err(|e| e.to_string())?;
            let want = manifold_f2_count(m);
            ensure(report.cover.len() == want, || {
                format!("q={q} m={m}: |image| {} vs {want}", report.cover.len())
            })?;
            ensure(report.covering && report.minimal, || {
                format!(
                    "q={q} m={m}: covering {} minimal {} ({} uncovered)",
                    report.covering,
                    report.minimal,
                    report.uncovered.len()
                )
            })?;
            let ids = check_identities(m, q).map_err(|e| e.to_string())?;
            ensure(
                ids.composition_failures == 0 && ids.algorithm_b_failures == 0 && ids.improper == 0,
                || format!("q={q} m={m}: {ids:?}"),
            )?;
        }
    }
    Ok(())
}

fn counterexample() -> Outcome {
    let report = counterexample_cover(3).map_err(|e| e.to_string())?;
    let y = &report.witness;
    let iy = invalid_diagonals(y);
    ensure(iy.len() == 12, || format!("|I(y)| = {}", iy.len()))?;
    // Each invalid diagonal joins equal labels, four labels three times each.
    ensure(iy.iter().all(|d| y.label(d.i()) == y.label(d.j())), || {
        "an invalid diagonal joins different labels".into()
    })?;
    let all = enumerate_triangulations(11).map_err(|e| e.to_string())?;
    let admitted = admitted_diagonals(y, &all);
    let oracle: Vec<_> = all_diagonals(11)
        .into_iter()
        .filter(|d| !admitted.contains(d))
        .collect();
    ensure(oracle == iy, || format!("oracle invalid set {oracle:?}"))?;
    let mut per_label = [0usize; 4];
    for d in &iy {
        per_label[y.label(d.i()).index()] += 1;
    }
    ensure(per_label == [3, 3, 3, 3], || format!("label split {per_label:?}"))?;
    let f2 = enumerate_manifold_points(11, 2).map_err(|e| e.to_string())?;
    ensure(f2.len() == 682, || format!("|X'_F2(11)| = {}", f2.len()))?;
    for z in &f2 {
        let iz = invalid_diagonals(z);
        ensure(!iy.iter().all(|d| iz.contains(d)), || format!("I(y) inside I({z})"))?;
    }
    ensure(report.separated_from_all_f2, || "unseparated points".into())?;
    let cover = &report.f2_report.cover;
    ensure(cover.len() == 682, || format!("cover size {}", cover.len()))?;
    ensure(report.f2_report.covering, || {
        format!("{} F2 points uncovered", report.f2_report.uncovered.len())
    })?;
    for t in cover {
        ensure(!is_proper(t, y).unwrap(), || format!("{:?} admits the witness", t.pairs()))?;
    }
    Ok(())
}

fn validity_oracle() -> Outcome {
    for q in 2..=3 {
        for m in 3..=7 {
            let all = enumerate_triangulations(m).map_err(|e| e.to_string())?;
            let diagonals = all_diagonals(m);
            for y in enumerate_points(m, q).map_err(|e| e.to_string())? {
                let admitted = admitted_diagonals(&y, &all);
                for &d in &diagonals {
                    let valid = is_valid_diagonal(&y, d).map_err(|e| e.to_string())?;
                    ensure(valid == admitted.contains(&d), || {
                        format!("q={q} {y} {d:?}: predicate {valid}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn deep_locus() -> Outcome {
    for q in 2..=3 {
        for m in 2..=9 {
            let all = enumerate_triangulations(m).map_err(|e| e.to_string())?;
            let points = enumerate_points(m, q).map_err(|e| e.to_string())?;
            let deep: Vec<_> = points
                .iter()
                .filter(|y| !admitted_by_some(y, &all))
                .cloned()
                .collect();
            let expected: Vec<_> = points.iter().filter(|y| alternates(y)).cloned().collect();
            ensure(expected.len() == m % 2, || format!("m={m}: alternating count"))?;
            ensure(deep == expected, || format!("q={q} m={m}: deep locus {deep:?}"))?;
            let lib = deep_points(m, q).map_err(|e| e.to_string())?;
            ensure(lib == expected, || format!("q={q} m={m}: deep_points {lib:?}"))?;
            if let Some(alt) = expected.first() {
                ensure(algorithm_a(alt).is_err(), || "Upsilon accepted the deep point".into())?;
            }
        }
    }
    Ok(())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "A_n counts: closed form, recursion, brute force, enumeration (n<=10)", budget: Duration::from_secs(10), run: table1_a },
        Criterion { id: 2, name: "D_n counts agree with (5*2^n+7(-1)^n)/3 (n=4..7)", budget: Duration::from_secs(5), run: table1_d },
        Criterion { id: 3, name: "E8 counts 381 by recursion and brute force", budget: Duration::from_secs(5), run: table1_e8 },
        Criterion { id: 4, name: "seed counts: A_n = Catalan(n+1) by enumeration (n<=8), E8, D_n", budget: Duration::from_secs(10), run: seeds_column },
        Criterion { id: 5, name: "hexagonal-move classes equal c-fibers (m=3..10), m=5 histogram {1:6, 2:4}", budget: Duration::from_secs(120), run: hex_partition },
        Criterion { id: 6, name: "no hexagonal move iff fan (m<=8)", budget: Duration::from_secs(30), run: fan_corollary },
        Criterion { id: 7, name: "Upsilon image is a minimal covering of the F2 size, Upsilon = Upsilon c Upsilon (q=2..4, m<=9)", budget: Duration::from_secs(60), run: upsilon_minimal_cover },
        Criterion { id: 8, name: "12-gon witness: |I(y)|=12, separated from all 682 F2 points, cover misses y", budget: Duration::from_secs(120), run: counterexample },
        Criterion { id: 9, name: "validity predicate matches the triangulation oracle (m<=7, q=2,3)", budget: Duration::from_secs(30), run: validity_oracle },
        Criterion { id: 10, name: "deep locus is the alternating point for odd m, empty for even m (m<=9, q=2,3)", budget: Duration::from_secs(60), run: deep_locus },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= c.budget, || {
                format!("took {elapsed:.2?}, budget {:?}", c.budget)
            })
        });
        match outcome {
            Ok(()) => println!("PASS criterion {:>2}: {} [{elapsed:.2?}]", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {} [{elapsed:.2?}]: {why}", c.id, c.name);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
