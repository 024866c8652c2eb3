use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nsqs_core::analysis::{DifferenceClass, FeasibilityRow};
use nsqs_core::catalog::{catalog, catalog_get, BOOL32_POLYNOMIAL};
use nsqs_core::construct::{boolean_to_rotational, BooleanRelabel};
use nsqs_core::design::PairCensus;
use nsqs_core::format::parse_design_partial;
use nsqs_core::search::{Limits, SearchStatus};
use nsqs_core::{
    block_classes, boolean_sqs, bounds_profile, classify, cyclotomic_cosets, difference_census,
    doubling_a, doubling_b, feasibility_table, local_balance, one_factorization, pair_census, parse_design,
    parse_rotational_spec, rotational_expand, search_nesting, search_rotational, serialize_design,
    serialize_rotational_spec, verify_steiner, Gf2nField, NestedDesign, Point, RotationalSpec, SearchOutcome, SearchSpec,
    Target,
};

/// Nested Steiner quadruple systems: construct, verify, classify and search.
#[derive(Parser)]
#[command(name = "nsqs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a design and print it.
    #[command(subcommand)]
    Construct(Construct),
    /// Expand a rotational spec into a flat design.
    Expand {
        /// Built-in catalog entry.
        #[arg(long, conflicts_with = "base")]
        catalog: Option<String>,
        /// Rotational spec file (`-` for stdin).
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// List catalog entries, or print one entry.
    Catalog {
        name: Option<String>,
        /// Print the rotational spec instead of the expanded design.
        #[arg(long)]
        spec: bool,
    },
    /// Check that every triple lies in exactly one block.
    Verify {
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Pair multiplicities of a design, or difference-class multiplicities
    /// of a rotational spec.
    Census {
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Classify a design's nesting.
    Classify {
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Bounds on the pair census for an order.
    Bounds {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        json: bool,
    },
    /// Feasibility table for admissible orders in a range.
    Table {
        #[arg(long, default_value_t = 8)]
        min: u64,
        #[arg(long, default_value_t = 64)]
        max: u64,
        #[arg(long)]
        json: bool,
    },
    /// Search for a nesting of a design or rotational spec.
    Search {
        file: Option<PathBuf>,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long)]
        json: bool,
    },
    /// Re-split blocks greedily until every ND-pair lies in [lo, hi].
    Balance {
        file: Option<PathBuf>,
        #[arg(long)]
        lo: u32,
        #[arg(long)]
        hi: u32,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Cyclotomic cosets of 2 modulo an odd number.
    Cosets {
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Boolean SQS(2^n).
    Boolean {
        #[arg(long)]
        n: u32,
        /// Primitive polynomial, decimal or 0x/0b prefixed.
        #[arg(long, value_parser = parse_int)]
        poly: Option<u32>,
        #[arg(long, value_enum, default_value_t = Nest::None)]
        nest: Nest,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// SQS(2v) from an SQS(v); both halves keep their nesting.
    DoublingA {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// SQS(2v) from a complete nesting of an SQS(v).
    DoublingB {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Nest {
    /// Default split: two smallest points against two largest.
    None,
    /// Use the catalog nesting for this order.
    Catalog,
    /// Search for a complete uniform nesting.
    Search,
}

#[derive(Copy, Clone, ValueEnum)]
enum TargetKind {
    CompleteUniform,
    MinimumUniform,
    Uniform,
    QuasiUniform,
    Band,
}

#[derive(Args)]
struct TargetArgs {
    #[arg(long, value_enum)]
    target: TargetKind,
    /// Multiplicity for `uniform` and `quasi-uniform`.
    #[arg(long)]
    mu: Option<u32>,
    #[arg(long)]
    lo: Option<u32>,
    #[arg(long)]
    hi: Option<u32>,
}

impl TargetArgs {
    fn target(&self) -> Result<Target> {
        let need_mu = || self.mu.ok_or_else(|| anyhow!("--mu is required for this target"));
        Ok(match self.target {
            TargetKind::CompleteUniform => Target::CompleteUniform,
            TargetKind::MinimumUniform => Target::MinimumUniform,
            TargetKind::Uniform => Target::Uniform { mu: need_mu()? },
            TargetKind::QuasiUniform => Target::QuasiUniform { mu: need_mu()? },
            TargetKind::Band => Target::Band {
                lo: self.lo.ok_or_else(|| anyhow!("--lo is required for band"))?,
                hi: self.hi.ok_or_else(|| anyhow!("--hi is required for band"))?,
            },
        })
    }
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Node budget.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 300)]
    time: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_nodes: self.budget,
            max_time: Duration::from_secs(self.time),
            seed: self.seed,
            workers: self.workers.max(1),
        }
    }
}

/// Bad input, as opposed to a negative answer.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    Usage(e.to_string()).into()
}

fn parse_int(s: &str) -> Result<u32, String> {
    let r = if let Some(h) = s.strip_prefix("0x") {
        u32::from_str_radix(h, 16)
    } else if let Some(b) = s.strip_prefix("0b") {
        u32::from_str_radix(b, 2)
    } else {
        s.parse()
    };
    r.map_err(|e| format!("invalid integer '{s}': {e}"))
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).map_err(usage)
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(usage)?;
            Ok(s)
        }
    }
}

enum Input {
    Flat(NestedDesign),
    Rotational(RotationalSpec),
}

fn read_any(path: &Option<PathBuf>) -> Result<Input> {
    let text = read_input(path)?;
    if text.trim_start().starts_with("rsqs") {
        parse_rotational_spec(&text).map(Input::Rotational).map_err(usage)
    } else {
        parse_design(&text).map(Input::Flat).map_err(usage)
    }
}

fn read_design(path: &Option<PathBuf>) -> Result<NestedDesign> {
    match read_any(path)? {
        Input::Flat(d) => Ok(d),
        Input::Rotational(s) => rotational_expand(&s).map_err(usage),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn census_json(c: &PairCensus) -> Value {
    let histogram: serde_json::Map<String, Value> =
        c.histogram().into_iter().map(|(m, n)| (m.to_string(), json!(n))).collect();
    let pairs: Vec<Value> = c.nd_pairs().map(|(p, n)| json!([p.lo().0, p.hi().0, n])).collect();
    json!({
        "v": c.v(),
        "total_pair_slots": c.total(),
        "nd_pairs": c.nd_pair_count(),
        "min_mult": c.min_mult(),
        "max_mult": c.max_mult(),
        "histogram": histogram,
        "pairs": pairs,
    })
}

fn class_label(c: &DifferenceClass) -> String {
    match c {
        DifferenceClass::Finite(d) => format!("d{d}"),
        DifferenceClass::Infinity => "inf".into(),
    }
}

fn table_cell(e: &nsqs_core::analysis::ColumnEntry) -> String {
    let mut s = format!("{}{}", e.nd_pairs, e.marker);
    if let Some(mu) = e.multiplicity {
        s += &format!("({mu})");
    }
    s
}

fn table_line(r: &FeasibilityRow) -> String {
    let mid: Vec<String> = r.intermediate.iter().map(table_cell).collect();
    format!(
        "{:>3} {:>6} | {:<8} | {:<9} | {}",
        r.v,
        r.total_pair_slots,
        table_cell(&r.minimum),
        table_cell(&r.complete),
        mid.join(" ")
    )
    .trim_end()
    .to_string()
}

fn report_search(out: &SearchOutcome, json_out: bool) -> Result<ExitCode> {
    if json_out {
        print_json(out)?;
    } else {
        eprintln!(
            "{}: {} nodes, {:.2}s",
            out.status.as_str(),
            out.stats.nodes,
            out.elapsed.as_secs_f64()
        );
        if let Some(r) = &out.refusal {
            eprintln!("refused by {}: {}", r.condition, r.detail);
        }
        if let Some(w) = &out.witness {
            eprintln!("{}", classify(w));
            emit(&serialize_design(w))?;
        }
    }
    Ok(if out.status == SearchStatus::Found { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Map a log-labelled Boolean design back to vector labels.
fn to_vectors(relabel: &BooleanRelabel, d: &NestedDesign) -> Result<NestedDesign> {
    Ok(d.relabel(|p| Point(relabel.unmap(p)))?)
}

fn construct_boolean(n: u32, poly: Option<u32>, nest: Nest, limits: &LimitArgs) -> Result<ExitCode> {
    let flat = boolean_sqs(n, poly).map_err(usage)?;
    let design = match nest {
        Nest::None => flat,
        Nest::Catalog => match n {
            3 => catalog_get("bool8")?.design()?,
            5 if poly.is_none_or(|p| p == BOOL32_POLYNOMIAL) => {
                let field = Gf2nField::new(5, BOOL32_POLYNOMIAL)?;
                to_vectors(&boolean_to_rotational(&field), &catalog_get("bool32")?.design()?)?
            }
            _ => return Err(usage(format!("no catalog nesting for n={n} with this polynomial"))),
        },
        Nest::Search => {
            let spec = SearchSpec::new(Target::CompleteUniform).with_limits(limits.limits());
            let out = if n % 2 == 1 && n > 3 {
                let field = match poly {
                    Some(p) => Gf2nField::new(n, p)?,
                    None => Gf2nField::with_default_polynomial(n)?,
                };
                let classes = block_classes(&field)?;
                let mut out = search_rotational(&classes.representative_spec()?, &spec)?;
                let relabel = boolean_to_rotational(&field);
                out.witness = out.witness.map(|w| to_vectors(&relabel, &w)).transpose()?;
                out
            } else {
                search_nesting(&flat, &spec)?
            };
            return report_search(&out, false);
        }
    };
    emit(&serialize_design(&design))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Construct(Construct::Boolean { n, poly, nest, limits }) => {
            return construct_boolean(n, poly, nest, &limits);
        }
        Command::Construct(Construct::DoublingA { input }) => {
            let d = read_design(&input)?;
            let f = one_factorization(d.v()).map_err(usage)?;
            emit(&serialize_design(&doubling_a(&d, &f).map_err(usage)?))?;
        }
        Command::Construct(Construct::DoublingB { input }) => {
            let d = read_design(&input)?;
            emit(&serialize_design(&doubling_b(&d).map_err(usage)?))?;
        }
        Command::Expand { catalog, base } => {
            let spec = match (catalog, base) {
                (Some(name), None) => catalog_get(&name)
                    .map_err(usage)?
                    .rotational_spec()?
                    .ok_or_else(|| usage(format!("{name} is a flat design, not a rotational spec")))?,
                (None, base) => match read_any(&base)? {
                    Input::Rotational(s) => s,
                    Input::Flat(_) => bail!(usage("expected a rotational spec ('rsqs' header)")),
                },
                (Some(_), Some(_)) => unreachable!("clap rejects both"),
            };
            emit(&serialize_design(&rotational_expand(&spec).map_err(usage)?))?;
        }
        Command::Catalog { name: None, .. } => {
            for e in catalog() {
                println!("{:<7} {:<18} v={:<3} {}", e.name, e.kind(), e.expected.v, e.description);
            }
        }
        Command::Catalog { name: Some(name), spec } => {
            let e = catalog_get(&name).map_err(usage)?;
            if spec {
                let s = e.rotational_spec()?.ok_or_else(|| usage(format!("{name} has no rotational spec")))?;
                emit(&serialize_rotational_spec(&s))?;
            } else {
                emit(&serialize_design(&e.design()?))?;
            }
        }
        Command::Verify { file, json } => {
            let text = read_input(&file)?;
            let d = if text.trim_start().starts_with("rsqs") {
                rotational_expand(&parse_rotational_spec(&text).map_err(usage)?).map_err(usage)?
            } else {
                let (f, declared) = parse_design_partial(&text).map_err(usage)?;
                if declared != f.design.len() && !json {
                    println!("header declares {declared} blocks, file has {}", f.design.len());
                }
                f.design
            };
            let r = verify_steiner(&d);
            if json {
                print_json(&r)?;
            } else if r.passed {
                println!("ok: SQS({}) with {} blocks", r.v, r.block_count);
            } else {
                println!(
                    "FAIL: v={} blocks={} (expected {}), {} uncovered and {} overcovered triples",
                    r.v, r.block_count, r.expected_block_count, r.uncovered_triples, r.overcovered_triples
                );
                if let Some(w) = &r.witness {
                    let [a, b, c] = w.triple;
                    println!("witness: triple {{{a},{b},{c}}} covered {} times", w.coverage);
                }
            }
            if !r.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Census { file, json } => match read_any(&file)? {
            Input::Flat(d) => {
                let c = pair_census(&d);
                if json {
                    print_json(&census_json(&c))?;
                } else {
                    println!("v={} slots={} nd_pairs={}", c.v(), c.total(), c.nd_pair_count());
                    for (m, n) in c.histogram() {
                        println!("{n} pairs at multiplicity {m}");
                    }
                }
            }
            Input::Rotational(s) => {
                let dc = difference_census(&s).map_err(usage)?;
                if json {
                    let counts: serde_json::Map<String, Value> =
                        dc.counts.iter().map(|(c, n)| (class_label(c), json!(n))).collect();
                    print_json(&json!({ "p": dc.p, "classes": counts }))?;
                } else {
                    for (c, n) in &dc.counts {
                        println!("{} {n}", class_label(c));
                    }
                }
            }
        },
        Command::Classify { file, json } => {
            let k = classify(&read_design(&file)?);
            if json {
                print_json(&k)?;
            } else {
                println!("{k}");
            }
        }
        Command::Bounds { v, json } => {
            let b = bounds_profile(v).map_err(usage)?;
            if json {
                print_json(&b)?;
            } else {
                let value = serde_json::to_value(&b)?;
                for (k, x) in value.as_object().expect("struct") {
                    println!("{k}: {x}");
                }
            }
        }
        Command::Table { min, max, json } => {
            if min > max {
                bail!(usage(format!("--min {min} exceeds --max {max}")));
            }
            let rows = feasibility_table(min, max);
            if json {
                print_json(&rows)?;
            } else {
                for r in &rows {
                    println!("{}", table_line(r));
                }
            }
        }
        Command::Search { file, target, limits, json } => {
            let spec = SearchSpec::new(target.target().map_err(usage)?).with_limits(limits.limits());
            let out = match read_any(&file)? {
                Input::Flat(d) => search_nesting(&d, &spec).map_err(usage)?,
                Input::Rotational(s) => search_rotational(&s, &spec).map_err(usage)?,
            };
            return report_search(&out, json);
        }
        Command::Balance { file, lo, hi, limits } => {
            let d = read_design(&file)?;
            let out = local_balance(&d, lo, hi, &limits.limits()).map_err(usage)?;
            return report_search(&out, false);
        }
        Command::Cosets { modulus, json } => {
            let c = cyclotomic_cosets(modulus).map_err(usage)?;
            if json {
                print_json(&c)?;
            } else {
                for coset in &c.cosets {
                    let s: Vec<String> = coset.iter().map(u64::to_string).collect();
                    println!("({})", s.join(" "));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
