//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p nsqs-core --test acceptance`.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nsqs_core::analysis::{difference_census, CandidateClass, ColumnEntry};
use nsqs_core::catalog::{bool8, catalog, catalog_get, sqs10_uniform, sqs8_uniform};
use nsqs_core::design::all_pairs;
use nsqs_core::search::{Limits, SearchStatus};
use nsqs_core::{
    boolean_sqs, classify, doubling_a, doubling_b, feasibility_table, one_factorization, pair_census,
    rotational_expand, search_nesting, search_rotational, validate_bounds, verify_steiner, Error,
    NestedBlock, NestedDesign, NestingKind, Pair, PairCensus, Point, SearchSpec, Target,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn histogram(c: &PairCensus) -> BTreeMap<u32, usize> {
    c.histogram()
}

fn hist(entries: &[(u32, usize)]) -> BTreeMap<u32, usize> {
    entries.iter().copied().collect()
}

fn c1_boolean_construction() -> Outcome {
    for (n, expected) in [(2u32, 1usize), (3, 14), (4, 140), (5, 1240)] {
        let v = 1u64 << n;
        ensure!(expected as u64 == v * (v - 1) * (v - 2) / 24, "block-count oracle disagrees for n={n}");
        let d = boolean_sqs(n, None).map_err(|e| e.to_string())?;
        ensure!(d.len() == expected, "n={n}: {} blocks, expected {expected}", d.len());
        ensure!(verify_steiner(&d).passed, "n={n}: verify_steiner failed");
    }
    let mut ours = boolean_sqs(3, None).map_err(|e| e.to_string())?.quads();
    let mut listed = bool8().quads();
    ours.sort();
    listed.sort();
    ensure!(ours == listed, "n=3 block set differs from the Bool8 listing");
    Ok("1/14/140/1240 blocks, n=3 matches Bool8".into())
}

fn c2_census_reproduction() -> Outcome {
    let b8 = pair_census(&bool8());
    ensure!(histogram(&b8) == hist(&[(2, 8), (3, 4)]), "bool8 census {:?}", histogram(&b8));
    let s8 = pair_census(&sqs8_uniform());
    ensure!(histogram(&s8) == hist(&[(1, 28)]), "sqs8 census {:?}", histogram(&s8));
    Ok("bool8 4@3 + 8@2, sqs8 28@1".into())
}

fn c3_catalog_expansions() -> Outcome {
    let rows: [(&str, usize, u64, u32, u64); 5] = [
        ("ro20", 285, 190, 3, 570),
        ("ro26", 650, 325, 4, 1300),
        ("ro38", 2109, 703, 6, 4218),
        ("ro62", 9455, 1891, 10, 18910),
        ("bool32", 1240, 496, 5, 2480),
    ];
    let mut notes = Vec::new();
    for (name, blocks, m, mu, slots) in rows {
        let start = Instant::now();
        let d = catalog_get(name).and_then(|e| e.design()).map_err(|e| format!("{name}: {e}"))?;
        ensure!(verify_steiner(&d).passed, "{name}: not an SQS");
        let c = pair_census(&d);
        let k = classify(&d);
        let t = start.elapsed();
        ensure!(d.len() == blocks, "{name}: {} blocks, expected {blocks}", d.len());
        ensure!(c.total() == slots, "{name}: total slots {}, expected {slots}", c.total());
        ensure!(
            k.kind == NestingKind::CompleteUniform && k.nd_pairs == m && k.mu_min == mu && k.mu_max == mu,
            "{name}: got {k}, expected complete-uniform M={m} mu={mu}"
        );
        ensure!(t < Duration::from_secs(5), "{name}: took {:.2}s", t.as_secs_f64());
        let note = if name == "ro26" { " (third base block corrected)" } else { "" };
        notes.push(format!("{name} {:.2}s{note}", t.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn c4_doubling_a() -> Outcome {
    let d = doubling_a(&sqs8_uniform(), &one_factorization(8).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure!(verify_steiner(&d).passed, "output is not an SQS(16)");
    let k = classify(&d);
    ensure!(
        k.kind == NestingKind::MinimumUniform && k.nd_pairs == 56 && k.mu_min == 5 && k.mu_max == 5,
        "got {k}"
    );
    let h = k.half_partition.ok_or("no half-partition")?;
    let copy = |i: u32| (0..8).map(|x| Point(x + 8 * i)).collect::<Vec<_>>();
    ensure!(h.first == copy(0) && h.second == copy(1), "halves {:?} / {:?}", h.first, h.second);
    Ok("minimum-uniform M=56 mu=5, halves Q×{0}, Q×{1}".into())
}

fn c5_doubling_b() -> Outcome {
    let d = doubling_b(&sqs8_uniform()).map_err(|e| e.to_string())?;
    ensure!(verify_steiner(&d).passed, "output is not an SQS(16)");
    let c = pair_census(&d);
    ensure!(histogram(&c) == hist(&[(2, 112), (7, 8)]), "census {:?}", histogram(&c));
    ensure!(c.nd_pair_count() == 120, "{} ND-pairs", c.nd_pair_count());
    ensure!(c.total() == 280, "total {}", c.total());
    Ok("112@2 + 8@7, 120 ND-pairs, 280 slots".into())
}

fn resplit(d: &NestedDesign, moves: &[[u32; 4]]) -> Result<NestedDesign, String> {
    let mut out = d.clone();
    for &[a, b, c, e] in moves {
        let nb = NestedBlock::from_points(a, b, c, e).map_err(|e| e.to_string())?;
        let idx = out.position(&nb.quad()).ok_or(format!("{} is not a block", nb.quad()))?;
        out = out.repartition(idx, nb).map_err(|e| e.to_string())?;
    }
    Ok(out)
}

fn c6_many_quasi_script() -> Outcome {
    let base = doubling_b(&sqs8_uniform()).map_err(|e| e.to_string())?;
    let v = 8;
    // [{(i,0),(j,0)} | {(i,1),(j,1)}] for j = i+1, i+2 (mod 8)
    let mut moves = Vec::new();
    for step in [1, 2] {
        for i in 0..v {
            let j = (i + step) % v;
            moves.push([i, j, i + v, j + v]);
        }
    }
    ensure!(moves.len() == 16, "{} moves", moves.len());
    let scripted = resplit(&base, &moves)?;
    ensure!(verify_steiner(&scripted).passed, "scripted design is not an SQS");
    let h1 = histogram(&pair_census(&scripted));
    ensure!(h1 == hist(&[(2, 80), (3, 40)]), "scripted census {h1:?}");

    // [{(x,0),(y,1)} | {(x,1),(y,0)}] on every Type II block
    let mut alt = Vec::new();
    for y in 1..v {
        for x in 0..y {
            alt.push([x, y + v, x + v, y]);
        }
    }
    let alternate = resplit(&base, &alt)?;
    let c = pair_census(&alternate);
    let h2 = histogram(&c);
    let non_nd = all_pairs(16).filter(|p| !c.is_nd(*p)).count();
    ensure!(h2 == hist(&[(2, 56), (3, 56)]), "alternate census {h2:?}");
    ensure!(non_nd == 8, "{non_nd} non-ND pairs");
    Ok("scripted 80@2/40@3; alternate 56@2/56@3 with 8 non-ND".into())
}

/// Table transcription: `v slots | minimum | complete | intermediates`.
/// Cells are `M[marker][(mu)]`; a cell with a multiplicity is a candidate.
const TABLE: &str = "
8 28 | 12x | 28a(1) |
10 60 | 20b | 45z | 30c(2)
14 182 | 42x | 91?(2) |
16 280 | 56d(5) | 120z |
20 570 | 90x | 190e(3) |
22 770 | 110b | 231z | 154?(5)
26 1300 | 156x | 325f(4) | 260?(5)
28 1638 | 182(9) | 378z |
32 2480 | 240x | 496g(5) |
34 2992 | 272b | 561z | 374?(8)
38 4218 | 342x | 703h(6) |
40 4940 | 380d(13) | 780z |
44 6622 | 462x | 946?(7) |
46 7590 | 506b | 1035z | 690?(11) 759?(10)
50 9800 | 600x | 1225?(8) | 700?(14)
52 11050 | 650d(17) | 1326z |
56 13860 | 756x | 1540(9) | 924?(15) 1260?(11)
58 15428 | 812b | 1653z | 1102?(14)
62 18910 | 930x | 1891i(10) |
64 20832 | 992d(21) | 2016z |
";

fn parse_cell(cell: &str) -> (u64, String, Option<u64>) {
    let digits: String = cell.chars().take_while(char::is_ascii_digit).collect();
    let rest = &cell[digits.len()..];
    let (marker, mu) = match rest.split_once('(') {
        Some((m, mu)) => (m.to_string(), Some(mu.trim_end_matches(')').parse().unwrap())),
        None => (rest.to_string(), None),
    };
    (digits.parse().unwrap(), marker, mu)
}

fn render(e: &ColumnEntry) -> (u64, String, Option<u64>) {
    (e.nd_pairs, e.marker.clone(), if e.candidate { e.multiplicity } else { None })
}

fn c7_feasibility_table() -> Outcome {
    let rows = feasibility_table(8, 64);
    let expected: Vec<&str> = TABLE.lines().filter(|l| !l.trim().is_empty()).collect();
    ensure!(rows.len() == expected.len(), "{} rows, expected {}", rows.len(), expected.len());
    for (row, line) in rows.iter().zip(expected) {
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        let head: Vec<u64> = parts[0].split_whitespace().map(|t| t.parse().unwrap()).collect();
        ensure!(row.v == head[0] && row.total_pair_slots == head[1], "row v={}: head {line}", row.v);
        let want_min = parse_cell(parts[1]);
        let want_max = parse_cell(parts[2]);
        let want_mid: Vec<_> = parts[3].split_whitespace().map(parse_cell).collect();
        ensure!(render(&row.minimum) == want_min, "v={}: minimum {:?} vs {:?}", row.v, render(&row.minimum), want_min);
        ensure!(render(&row.complete) == want_max, "v={}: complete {:?} vs {:?}", row.v, render(&row.complete), want_max);
        let got_mid: Vec<_> = row.intermediate.iter().map(render).collect();
        ensure!(got_mid == want_mid, "v={}: intermediates {got_mid:?} vs {want_mid:?}", row.v);
        ensure!(
            row.minimum.class == CandidateClass::Minimum && row.complete.class == CandidateClass::Complete,
            "v={}: column classes",
            row.v
        );
    }
    for v in [10u64, 22, 34, 46, 58] {
        let row = rows.iter().find(|r| r.v == v).unwrap();
        ensure!(!row.minimum.candidate && row.minimum.marker == "b", "v={v}: minimum not excluded");
    }
    let r10 = rows.iter().find(|r| r.v == 10).unwrap();
    ensure!(
        !r10.candidates().iter().any(|c| c.nd_pairs == 20),
        "v=10: M=20 survived the v²/4 bound"
    );
    Ok("20 rows match, v ∈ {10,22,34,46,58} minimum excluded".into())
}

fn strip_splits(spec: &nsqs_core::RotationalSpec) -> nsqs_core::RotationalSpec {
    let plain: Vec<NestedBlock> = spec.base_quads().iter().map(|q| q.splits()[0]).collect();
    spec.with_splits(plain).expect("same quads")
}

fn c8_search_success() -> Outcome {
    let limits = Limits { max_nodes: 10_000_000, max_time: Duration::from_secs(60), ..Limits::default() };
    let spec = catalog_get("ro20").unwrap().rotational_spec().unwrap().unwrap();
    let rot = search_rotational(&strip_splits(&spec), &SearchSpec::new(Target::CompleteUniform).with_limits(limits.clone()))
        .map_err(|e| e.to_string())?;
    ensure!(rot.status == SearchStatus::Found, "ro20: {} after {:?}", rot.status.as_str(), rot.stats);
    let k = classify(rot.witness.as_ref().unwrap());
    ensure!(k.kind == NestingKind::CompleteUniform && k.mu_min == 3, "ro20 witness: {k}");

    let flat = search_nesting(&sqs10_uniform(), &SearchSpec::new(Target::Uniform { mu: 2 }).with_limits(limits))
        .map_err(|e| e.to_string())?;
    ensure!(flat.status == SearchStatus::Found, "sqs10: {} after {:?}", flat.status.as_str(), flat.stats);
    let k = classify(flat.witness.as_ref().unwrap());
    ensure!(k.mu_min == 2 && k.mu_max == 2 && k.nd_pairs == 30, "sqs10 witness: {k}");
    Ok(format!(
        "ro20 {} nodes {:.2}s; sqs10 {} nodes {:.2}s",
        rot.stats.nodes,
        rot.elapsed.as_secs_f64(),
        flat.stats.nodes,
        flat.elapsed.as_secs_f64()
    ))
}

fn c9_search_refusal() -> Outcome {
    let out = search_nesting(&sqs10_uniform(), &SearchSpec::new(Target::Uniform { mu: 3 }))
        .map_err(|e| e.to_string())?;
    ensure!(out.status == SearchStatus::Refused, "status {}", out.status.as_str());
    let r = out.refusal.ok_or("no refusal reason")?;
    ensure!(r.condition == "v²/4 lower bound", "cited {r}");
    ensure!(out.stats.nodes == 0, "{} nodes expanded", out.stats.nodes);
    Ok(format!("refused: {r}"))
}

fn random_resplit(d: &NestedDesign, rng: &mut ChaCha8Rng) -> NestedDesign {
    let blocks = d.quads().iter().map(|q| q.splits()[rng.gen_range(0..3)]).collect();
    if d.has_infinity() {
        NestedDesign::with_infinity(d.v(), blocks).unwrap()
    } else {
        NestedDesign::new(d.v(), blocks).unwrap()
    }
}

/// Pair counts straight from the blocks, without `pair_census`.
fn count_pairs(d: &NestedDesign) -> BTreeMap<Pair, u32> {
    let mut m = BTreeMap::new();
    for b in d.blocks() {
        for p in b.pairs() {
            *m.entry(p).or_default() += 1;
        }
    }
    m
}

fn doubling_a_law(input: &NestedDesign) -> Result<(), String> {
    let v = input.v();
    let out = doubling_a(input, &one_factorization(v).unwrap()).map_err(|e| e.to_string())?;
    let inner = count_pairs(input);
    let outer = count_pairs(&out);
    for p in all_pairs(2 * v) {
        let (a, b) = (p.lo().0, p.hi().0);
        let got = outer.get(&p).copied().unwrap_or(0);
        let want = if (a < v) == (b < v) {
            let q = Pair::new(a % v, b % v).unwrap();
            v / 2 + inner.get(&q).copied().unwrap_or(0)
        } else {
            0
        };
        ensure!(got == want, "doubling A of v={v}: pair {p} has {got}, law gives {want}");
    }
    Ok(())
}

fn doubling_b_law(input: &NestedDesign) -> Result<(), String> {
    let v = input.v();
    let out = doubling_b(input).map_err(|e| e.to_string())?;
    let inner = count_pairs(input);
    let outer = count_pairs(&out);
    for p in all_pairs(2 * v) {
        let (a, b) = (p.lo().0 % v, p.hi().0 % v);
        let got = outer.get(&p).copied().unwrap_or(0);
        let want = if a == b { v - 1 } else { 2 * inner[&Pair::new(a, b).unwrap()] };
        ensure!(got == want, "doubling B of v={v}: pair {p} has {got}, law gives {want}");
    }
    Ok(())
}

fn c10_property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut trials = 0;
    for entry in catalog() {
        let d = entry.design().map_err(|e| e.to_string())?;
        for _ in 0..200 {
            let r = random_resplit(&d, &mut rng);
            let violations = validate_bounds(&r).map_err(|e| e.to_string())?;
            ensure!(violations.is_empty(), "{}: random re-split violates {:?}", entry.name, violations);
            trials += 1;
        }
        if let Some(spec) = entry.rotational_spec().map_err(|e| e.to_string())? {
            let predicted = difference_census(&spec).map_err(|e| e.to_string())?;
            let census = pair_census(&rotational_expand(&spec).map_err(|e| e.to_string())?);
            for p in all_pairs(spec.v()) {
                ensure!(
                    predicted.predicted(p) == census.count(p) as u64,
                    "{}: pair {p} predicted {}, expanded {}",
                    entry.name,
                    predicted.predicted(p),
                    census.count(p)
                );
            }
        }
    }
    for input in [bool8(), sqs8_uniform(), sqs10_uniform()] {
        doubling_a_law(&input)?;
    }
    doubling_b_law(&sqs8_uniform())?;
    for input in [bool8(), sqs10_uniform()] {
        match doubling_b(&input) {
            Err(Error::MissingNdPair(_)) => {}
            other => return Err(format!("doubling B of v={} gave {:?}", input.v(), other.map(|d| d.len()))),
        }
    }
    Ok(format!("{trials} random re-splits, difference censuses, doubling laws"))
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "boolean construction", limit: Duration::from_secs(1), run: c1_boolean_construction },
        Criterion { id: 2, title: "census reproduction", limit: Duration::from_secs(1), run: c2_census_reproduction },
        Criterion { id: 3, title: "catalog expansions", limit: Duration::from_secs(25), run: c3_catalog_expansions },
        Criterion { id: 4, title: "doubling A", limit: Duration::from_secs(1), run: c4_doubling_a },
        Criterion { id: 5, title: "doubling B", limit: Duration::from_secs(1), run: c5_doubling_b },
        Criterion { id: 6, title: "repartition script", limit: Duration::from_secs(1), run: c6_many_quasi_script },
        Criterion { id: 7, title: "feasibility table", limit: Duration::from_secs(1), run: c7_feasibility_table },
        Criterion { id: 8, title: "search success", limit: Duration::from_secs(120), run: c8_search_success },
        Criterion { id: 9, title: "search refusal", limit: Duration::from_secs(1), run: c9_search_refusal },
        Criterion { id: 10, title: "property suites", limit: Duration::from_secs(60), run: c10_property_suites },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.run));
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(Ok(d)) if elapsed <= c.limit => (true, d),
            Ok(Ok(d)) => (false, format!("{d}; over the {:?} limit", c.limit)),
            Ok(Err(e)) => (false, e),
            Err(p) => (
                false,
                p.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into()),
            ),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<22} {} ({:.3}s) {}",
            c.id,
            c.title,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            detail
        );
    }
    let _ = panic::take_hook();
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
