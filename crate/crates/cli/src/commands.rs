use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::Value;

use cluster_f2::count::{
    dynkin_edges, f2_count_bruteforce_with_limit, parse_builder, BRUTE_FORCE_MAX_MUTABLE,
};
use cluster_f2::covering::{upsilon_cover_unguarded, verify_covering_with};
use cluster_f2::hexmoves::{annotate, hex_classes_unguarded, verify_theorem_unguarded};
use cluster_f2::{
    closed_form, counterexample_cover, dynkin_quiver, enumerate_manifold_points, enumerate_points,
    enumerate_triangulations, f2_coloring, f2_count_recursive, seed_count, upsilon_image,
    DynkinType, Error, IceQuiver, PointX, Triangulation,
};

use crate::output::{labels_cell, pairs_cell, Report};

/// Polygon size limit for commands that enumerate every triangulation.
pub const MAX_ENUMERATE_M: usize = 12;
/// Limit for the hexagonal-move partition and theorem check.
pub const MAX_PARTITION_M: usize = 12;
pub const MAX_THEOREM_M: usize = 11;
pub const MAX_COVER_M: usize = 11;

pub struct Guard {
    pub force: bool,
}

impl Guard {
    /// Passes when `ok`; with `--force` warns and passes anyway.
    pub fn check(&self, ok: bool, what: impl FnOnce() -> String) -> anyhow::Result<()> {
        if ok {
            return Ok(());
        }
        let msg = what();
        if self.force {
            eprintln!("warning: {msg}; continuing because --force was given");
            Ok(())
        } else {
            Err(Error::ResourceLimit(format!("{msg} (pass --force to override)")).into())
        }
    }
}

fn check_q(q: usize) -> anyhow::Result<()> {
    if !(2..=4).contains(&q) {
        bail!(Error::InvalidParameter(format!("q must be 2, 3 or 4, got {q}")));
    }
    Ok(())
}

/// Big integers are written as JSON numbers.
fn big_number(v: &BigUint) -> Value {
    serde_json::from_str(&v.to_string()).expect("decimal integers are valid JSON")
}

#[derive(Serialize)]
struct TriangulationList {
    kind: String,
    m: usize,
    count: usize,
    triangulations: Vec<Triangulation>,
}

#[derive(Serialize)]
struct PointList {
    kind: &'static str,
    m: usize,
    q: usize,
    count: usize,
    points: Vec<PointX>,
}

fn emit(path: &Path, report: &Report) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(&report.json)? + "\n";
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn emitted_summary(kind: &str, m: usize, count: usize, path: &Path) -> Report {
    #[derive(Serialize)]
    struct Emitted<'a> {
        kind: &'a str,
        m: usize,
        count: usize,
        emitted: String,
    }
    Report::new(
        Emitted {
            kind,
            m,
            count,
            emitted: path.display().to_string(),
        },
        true,
    )
    .table(
        vec!["kind", "m", "count", "emitted"],
        vec![vec![kind.into(), m.to_string(), count.to_string(), path.display().to_string()]],
    )
}

fn triangulation_report(m: usize, list: Vec<Triangulation>) -> Report {
    let rows = list
        .iter()
        .enumerate()
        .map(|(k, t)| vec![k.to_string(), pairs_cell(&t.pairs())])
        .collect();
    Report::new(
        TriangulationList {
            kind: "triangulations".into(),
            m,
            count: list.len(),
            triangulations: list,
        },
        true,
    )
    .table(vec!["index", "diagonals"], rows)
}

pub fn enumerate(
    guard: &Guard,
    m: usize,
    points: bool,
    q: usize,
    manifold: bool,
    emit_to: Option<&PathBuf>,
) -> anyhow::Result<Report> {
    guard.check(m <= MAX_ENUMERATE_M, || {
        format!("enumerate supports m <= {MAX_ENUMERATE_M}, got {m}")
    })?;
    let report = if points {
        check_q(q)?;
        let list = if manifold {
            enumerate_manifold_points(m, q)?
        } else {
            enumerate_points(m, q)?
        };
        let rows = list
            .iter()
            .enumerate()
            .map(|(k, y)| vec![k.to_string(), labels_cell(&y.raw_labels())])
            .collect();
        Report::new(
            PointList {
                kind: "points",
                m,
                q,
                count: list.len(),
                points: list,
            },
            true,
        )
        .table(vec!["index", "labels"], rows)
    } else {
        triangulation_report(m, enumerate_triangulations(m)?)
    };
    match emit_to {
        Some(path) => {
            emit(path, &report)?;
            let kind = if points { "points" } else { "triangulations" };
            let count = report.json["count"].as_u64().unwrap_or(0) as usize;
            Ok(emitted_summary(kind, m, count, path))
        }
        None => Ok(report),
    }
}

/// Triangulations from a file: an `enumerate`/`cover --emit` document, a
/// bare array, or a single triangulation.
pub fn read_triangulations(path: &Path) -> anyhow::Result<Vec<Triangulation>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: Value = serde_json::from_str(&text)
        .with_context(|| format!("{} is not valid JSON", path.display()))?;
    let list = match &value {
        Value::Array(_) => value,
        Value::Object(map) if map.contains_key("triangulations") => map["triangulations"].clone(),
        Value::Object(map) if map.contains_key("cover") => map["cover"].clone(),
        Value::Object(map) if map.contains_key("diagonals") => Value::Array(vec![value.clone()]),
        _ => bail!("{}: expected triangulations", path.display()),
    };
    serde_json::from_value(list)
        .with_context(|| format!("{}: malformed triangulation data", path.display()))
}

fn parse_diagonals(m: usize, text: &str) -> anyhow::Result<Triangulation> {
    let mut pairs = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = item
            .split_once('-')
            .ok_or_else(|| anyhow!("diagonal {item:?} is not of the form i-j"))?;
        pairs.push((a.trim().parse()?, b.trim().parse()?));
    }
    Ok(Triangulation::from_pairs(m, &pairs)?)
}

pub fn color(
    m: Option<usize>,
    diagonals: Option<&str>,
    file: Option<&PathBuf>,
) -> anyhow::Result<Report> {
    let list = match (file, diagonals, m) {
        (Some(path), None, _) => read_triangulations(path)?,
        (None, Some(text), Some(m)) => vec![parse_diagonals(m, text)?],
        (None, Some(_), None) => bail!("--diagonals needs --m"),
        _ => bail!("give exactly one of --file or --diagonals"),
    };
    #[derive(Serialize)]
    struct Colored {
        triangulation: Triangulation,
        point: PointX,
    }
    let colored: Vec<Colored> = list
        .into_iter()
        .map(|t| Colored {
            point: f2_coloring(&t),
            triangulation: t,
        })
        .collect();
    let rows = colored
        .iter()
        .map(|c| vec![pairs_cell(&c.triangulation.pairs()), labels_cell(&c.point.raw_labels())])
        .collect();
    #[derive(Serialize)]
    struct Body {
        colorings: Vec<Colored>,
    }
    Ok(Report::new(Body { colorings: colored }, true).table(vec!["diagonals", "labels"], rows))
}

fn load_quiver(spec: &str) -> anyhow::Result<(IceQuiver, Option<(DynkinType, usize)>)> {
    if spec.starts_with("dynkin:") {
        let q = parse_builder(spec)?;
        let mut parts = spec.split(':').skip(1);
        let ty: DynkinType = parts.next().unwrap_or_default().parse()?;
        let n: usize = parts.next().unwrap_or_default().parse()?;
        return Ok((q, Some((ty, n))));
    }
    let text = fs::read_to_string(spec).with_context(|| format!("cannot read quiver {spec}"))?;
    let q: IceQuiver =
        serde_json::from_str(&text).with_context(|| format!("{spec}: malformed quiver"))?;
    Ok((q, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    All,
    Recursion,
    BruteForce,
    ClosedForm,
}

pub fn count(guard: &Guard, spec: &str, method: Method) -> anyhow::Result<Report> {
    let (quiver, dynkin) = load_quiver(spec)?;
    let n = quiver.mutable_count();
    let mut results: BTreeMap<&str, Value> = BTreeMap::new();
    let mut values: Vec<BigUint> = Vec::new();
    if matches!(method, Method::All | Method::Recursion) {
        let c = f2_count_recursive(&quiver)?.count;
        results.insert("recursion", big_number(&BigUint::from(c)));
        values.push(BigUint::from(c));
    }
    if matches!(method, Method::All | Method::BruteForce) {
        let run = n <= BRUTE_FORCE_MAX_MUTABLE || method == Method::BruteForce;
        if run {
            guard.check(n <= BRUTE_FORCE_MAX_MUTABLE, || {
                format!("brute force supports n <= {BRUTE_FORCE_MAX_MUTABLE} mutable vertices, got {n}")
            })?;
            let c = f2_count_bruteforce_with_limit(&quiver, n.max(BRUTE_FORCE_MAX_MUTABLE))?.count;
            results.insert("brute-force", big_number(&BigUint::from(c)));
            values.push(BigUint::from(c));
        }
    }
    if matches!(method, Method::All | Method::ClosedForm) {
        match dynkin.map(|(ty, n)| closed_form(ty, n)) {
            Some(Ok(v)) => {
                results.insert("closed-form", big_number(&v));
                values.push(v);
            }
            Some(Err(e @ Error::NoClosedForm(_))) if method == Method::All => {
                eprintln!("note: {e}");
            }
            Some(Err(e)) => return Err(e.into()),
            None if method == Method::ClosedForm => {
                bail!("closed forms exist only for dynkin:T:n builders")
            }
            None => {}
        }
    }
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let rows = results
        .iter()
        .map(|(k, v)| vec![(*k).to_string(), v.to_string()])
        .collect();
    #[derive(Serialize)]
    struct Body<'a> {
        quiver: &'a str,
        mutable: usize,
        frozen: usize,
        counts: BTreeMap<&'a str, Value>,
        agree: bool,
    }
    Ok(Report::new(
        Body {
            quiver: spec,
            mutable: n,
            frozen: quiver.frozen_count(),
            counts: results,
            agree,
        },
        agree,
    )
    .table(vec!["method", "count"], rows))
}

pub fn classes(guard: &Guard, m: usize) -> anyhow::Result<Report> {
    guard.check(m <= MAX_PARTITION_M, || {
        format!("classes supports m <= {MAX_PARTITION_M}, got {m}")
    })?;
    let entries = annotate(hex_classes_unguarded(m)?);
    let rows = entries
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let members: Vec<String> = e.members.iter().map(|t| pairs_cell(&t.pairs())).collect();
            vec![
                k.to_string(),
                e.size.to_string(),
                labels_cell(&e.point.raw_labels()),
                members.join("; "),
            ]
        })
        .collect();
    #[derive(Serialize)]
    struct Body {
        m: usize,
        count: usize,
        classes: Vec<cluster_f2::hexmoves::ClassEntry>,
    }
    Ok(Report::new(
        Body {
            m,
            count: entries.len(),
            classes: entries,
        },
        true,
    )
    .table(vec!["class", "size", "point", "members"], rows))
}

pub fn verify_theorem(guard: &Guard, m: usize) -> anyhow::Result<Report> {
    guard.check(m <= MAX_THEOREM_M, || {
        format!("verify-theorem supports m <= {MAX_THEOREM_M}, got {m}")
    })?;
    let report = verify_theorem_unguarded(m)?;
    let histogram = report
        .histogram
        .iter()
        .map(|(size, n)| format!("{size}:{n}"))
        .collect::<Vec<_>>()
        .join(", ");
    let summary = format!(
        "{} partitions; histogram {{{histogram}}}",
        if report.equal { "equal" } else { "different" }
    );
    let ok = report.equal && report.mixed_classes == 0;
    let row = vec![
        m.to_string(),
        report.triangulations.to_string(),
        report.classes.to_string(),
        report.fibers.to_string(),
        report.equal.to_string(),
        histogram.clone(),
    ];
    #[derive(Serialize)]
    struct Body {
        #[serde(flatten)]
        report: cluster_f2::TheoremReport,
        summary: String,
    }
    Ok(Report::new(Body { report, summary }, ok).table(
        vec!["m", "triangulations", "classes", "fibers", "equal", "histogram"],
        vec![row],
    ))
}

fn cover_row(r: &cluster_f2::CoverReport) -> Vec<String> {
    vec![
        r.m.to_string(),
        r.q.to_string(),
        r.cover.len().to_string(),
        r.total_points.to_string(),
        r.covered_count.to_string(),
        r.uncovered.len().to_string(),
        r.covering.to_string(),
        r.f2_points.to_string(),
        r.minimal.to_string(),
    ]
}

const COVER_HEADER: [&str; 9] = [
    "m",
    "q",
    "cover_size",
    "points",
    "covered",
    "uncovered",
    "covering",
    "f2_points",
    "minimal",
];

pub fn cover(
    guard: &Guard,
    m: usize,
    q: usize,
    emit_to: Option<&PathBuf>,
    verbose: bool,
) -> anyhow::Result<Report> {
    check_q(q)?;
    guard.check(m <= MAX_COVER_M, || format!("cover supports m <= {MAX_COVER_M}, got {m}"))?;
    let report = if verbose {
        verify_covering_with(&upsilon_image(m, q)?, m, q, true)?
    } else {
        upsilon_cover_unguarded(m, q)?
    };
    if let Some(path) = emit_to {
        emit(path, &triangulation_report(m, report.cover.clone()))?;
    }
    let ok = report.covering && report.minimal && report.size_matches_f2;
    let row = cover_row(&report);
    Ok(Report::new(report, ok).table(COVER_HEADER.to_vec(), vec![row]))
}

pub fn verify_cover(
    path: &Path,
    q: usize,
    m: Option<usize>,
    verbose: bool,
    guard: &Guard,
) -> anyhow::Result<Report> {
    check_q(q)?;
    let list = read_triangulations(path)?;
    let m = match (m, list.first()) {
        (Some(m), _) => m,
        (None, Some(t)) => t.m(),
        (None, None) => bail!("{}: empty cover; pass --m", path.display()),
    };
    guard.check(m <= MAX_COVER_M, || {
        format!("verify-cover supports m <= {MAX_COVER_M}, got {m}")
    })?;
    let report = verify_covering_with(&list, m, q, verbose)?;
    let ok = report.covering;
    let row = cover_row(&report);
    Ok(Report::new(report, ok).table(COVER_HEADER.to_vec(), vec![row]))
}

pub fn counterexample(q: usize, full: bool) -> anyhow::Result<Report> {
    check_q(q)?;
    if q < 3 {
        bail!(Error::InvalidParameter(
            "the counterexample needs q >= 3".into()
        ));
    }
    let report = counterexample_cover(q)?;
    let f2 = &report.f2_report;
    let mut ok = report.separated_from_all_f2
        && report.members_admitting_witness.is_empty()
        && f2.covering
        && f2.cover.len() == f2.f2_points;
    #[derive(Serialize)]
    struct FullCheck {
        points: usize,
        covered: usize,
        uncovered: usize,
        witness_uncovered: bool,
    }
    let full_check = if full {
        let r = verify_covering_with(&f2.cover, 11, q, false)?;
        let witness_uncovered = r.uncovered.contains(&report.witness);
        ok &= witness_uncovered;
        Some(FullCheck {
            points: r.total_points,
            covered: r.covered_count,
            uncovered: r.uncovered.len(),
            witness_uncovered,
        })
    } else {
        None
    };
    let row = vec![
        q.to_string(),
        labels_cell(&report.witness.raw_labels()),
        report.witness_invalid.len().to_string(),
        report.separated_from_all_f2.to_string(),
        f2.cover.len().to_string(),
        f2.covering.to_string(),
        report.members_admitting_witness.len().to_string(),
    ];
    #[derive(Serialize)]
    struct Body {
        #[serde(flatten)]
        report: cluster_f2::CounterexampleReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        full_field_check: Option<FullCheck>,
    }
    Ok(Report::new(
        Body {
            report,
            full_field_check: full_check,
        },
        ok,
    )
    .table(
        vec![
            "q",
            "witness",
            "invalid_diagonals",
            "separated",
            "cover_size",
            "covers_f2",
            "members_admitting_witness",
        ],
        vec![row],
    ))
}

#[derive(Serialize)]
struct Row {
    n: usize,
    closed_form: Value,
    recursion: Value,
    brute_force: Value,
    seeds: Value,
    agree: bool,
}

pub fn table1(ty: DynkinType, max_rank: usize, guard: &Guard) -> anyhow::Result<Report> {
    let min_rank = match ty {
        DynkinType::A => 1,
        DynkinType::D => 4,
        DynkinType::E => 6,
    };
    let max_rank = match ty {
        DynkinType::E if max_rank > 8 => {
            eprintln!("note: type E stops at rank 8");
            8
        }
        _ => max_rank,
    };
    if max_rank < min_rank {
        bail!(Error::InvalidParameter(format!(
            "{ty} starts at rank {min_rank}, got --max-rank {max_rank}"
        )));
    }
    let brute_limit = if guard.force { 64 } else { BRUTE_FORCE_MAX_MUTABLE };
    let mut rows = Vec::new();
    for n in min_rank..=max_rank {
        let closed = match closed_form(ty, n) {
            Ok(v) => Some(v),
            Err(Error::NoClosedForm(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let seeds = match seed_count(ty, n) {
            Ok(v) => Some(v),
            Err(Error::NoClosedForm(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let quiver = if dynkin_edges(ty, n).is_ok() {
            Some(dynkin_quiver(ty, n)?)
        } else {
            None
        };
        let recursion = match &quiver {
            Some(q) => Some(BigUint::from(f2_count_recursive(q)?.count)),
            None => None,
        };
        let brute = match &quiver {
            Some(q) if n <= brute_limit => Some(BigUint::from(
                f2_count_bruteforce_with_limit(q, brute_limit)?.count,
            )),
            _ => None,
        };
        let known: Vec<&BigUint> = [&closed, &recursion, &brute]
            .into_iter()
            .flatten()
            .collect();
        let agree = known.windows(2).all(|w| w[0] == w[1]);
        let num = |v: &Option<BigUint>| v.as_ref().map_or(Value::Null, big_number);
        rows.push(Row {
            n,
            closed_form: num(&closed),
            recursion: num(&recursion),
            brute_force: num(&brute),
            seeds: num(&seeds),
            agree,
        });
    }
    let ok = rows.iter().all(|r| r.agree);
    let cell = |v: &Value| if v.is_null() { String::new() } else { v.to_string() };
    let table = rows
        .iter()
        .map(|r| {
            vec![
                format!("{ty}{}", r.n),
                cell(&r.closed_form),
                cell(&r.recursion),
                cell(&r.brute_force),
                cell(&r.seeds),
                r.agree.to_string(),
            ]
        })
        .collect();
    #[derive(Serialize)]
    struct Body {
        r#type: String,
        rows: Vec<Row>,
        agree: bool,
    }
    Ok(Report::new(
        Body {
            r#type: ty.to_string(),
            rows,
            agree: ok,
        },
        ok,
    )
    .table(
        vec!["type", "closed_form", "recursion", "brute_force", "seeds", "agree"],
        table,
    ))
}
