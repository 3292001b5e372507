//! Thin command line front end; all real work happens in the library.
//!
//! Exit codes: 0 success/found/valid, 1 not-found/invalid, 2 unknown,
//! 64 usage or input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use knel::embedding::{class_membership, subgraph_embed, weak_embed, Membership};
use knel::enumerate::{
    enumerate_levels, read_catalog_file, write_catalog_file, Catalog, DEFAULT_VERTEX_CAP,
};
use knel::error::Error;
use knel::forcing::{is_condition, sample_chain, Condition, ConditionVerdict};
use knel::interlace::{interlace_graph, shift_graph, TupleGraph};
use knel::invariants::{
    chromatic_number, girth, is_bipartite, odd_girth, reduct, reduct_dot, InvariantRecord,
};
use knel::structures::{AmalgamStructure, InterlaceType};

#[derive(Parser)]
#[command(
    name = "knel",
    version,
    about = "Interlaced amalgamation classes: enumeration, queries, invariants, conditions",
    after_help = "Interlace types are passed as bitstrings (--e 0101), read left to right as \
                  positions 1..2n. Record output is the stable interface; --human is for eyes."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate catalogs for levels 0..=T and write a catalog file
    Enum(EnumArgs),
    /// Per-level size summaries of a catalog file
    Stats(StatsArgs),
    /// Chromatic number and odd girth of every member's reduct
    Chi(SelectArgs),
    /// Girth, odd girth, and bipartiteness of every member's reduct
    Girth(SelectArgs),
    /// Search for a weak embedding of structure A into structure B
    Embed(EmbedArgs),
    /// Bounded class membership of a structure against a catalog
    Member(MemberArgs),
    /// Build an interlace graph on increasing tuples
    InterlaceGraph(InterlaceGraphArgs),
    /// Build a shift graph on increasing tuples
    ShiftGraph(ShiftGraphArgs),
    /// Check or sample forcing-style conditions
    #[command(subcommand)]
    Condition(ConditionCmd),
    /// Write DOT files for the reducts of catalog members
    ExportDot(ExportDotArgs),
}

#[derive(Args)]
struct EnumArgs {
    /// Arity n (must match --e)
    #[arg(long)]
    n: usize,
    /// Interlace bitstring, e.g. 0101
    #[arg(long)]
    e: String,
    /// Highest level to generate
    #[arg(long)]
    levels: usize,
    /// Output file (.knel)
    #[arg(long)]
    out: PathBuf,
    /// Per-level total vertex cap
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    catalog: PathBuf,
    /// Restrict to one level
    #[arg(long)]
    level: Option<usize>,
    /// Also count distinct members accumulated across levels
    #[arg(long)]
    cumulative: bool,
    /// Human-readable table instead of records
    #[arg(long)]
    human: bool,
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long)]
    catalog: PathBuf,
    /// Restrict to one level
    #[arg(long)]
    level: Option<usize>,
    /// Human-readable table instead of records
    #[arg(long)]
    human: bool,
}

#[derive(Args)]
struct EmbedArgs {
    /// File holding the structure record to embed
    #[arg(long)]
    a: PathBuf,
    /// File holding the host structure record
    #[arg(long)]
    b: PathBuf,
    /// Compare the plain graph reducts instead of the structures
    #[arg(long)]
    graph: bool,
}

#[derive(Args)]
struct MemberArgs {
    /// File holding the structure record to locate
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    catalog: PathBuf,
}

#[derive(Args)]
struct InterlaceGraphArgs {
    /// Ground set size
    #[arg(long)]
    m: usize,
    /// Tuple arity
    #[arg(long)]
    n: usize,
    /// Interlace bitstring
    #[arg(long)]
    e: String,
    /// Print DOT instead of a summary record
    #[arg(long)]
    dot: bool,
    /// Include the chromatic number in the summary
    #[arg(long)]
    chi: bool,
}

#[derive(Args)]
struct ShiftGraphArgs {
    /// Ground set size
    #[arg(long)]
    m: usize,
    /// Tuple arity
    #[arg(long)]
    n: usize,
    /// Print DOT instead of a summary record
    #[arg(long)]
    dot: bool,
    /// Include the chromatic number in the summary
    #[arg(long)]
    chi: bool,
}

#[derive(Subcommand)]
enum ConditionCmd {
    /// Check the hereditary clause of a condition against a catalog
    Check(ConditionCheckArgs),
    /// Grow a random condition by admissible extensions
    Sample(ConditionSampleArgs),
}

#[derive(Args)]
struct ConditionCheckArgs {
    /// Condition file: a {"n":..,"e":..} header line plus a record line
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    catalog: PathBuf,
    /// Check all subsets up to this size (capped at the vertex count)
    #[arg(long, default_value_t = 4)]
    max_subset: usize,
}

#[derive(Args)]
struct ConditionSampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    e: String,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    catalog: PathBuf,
    /// Write the final condition here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportDotArgs {
    #[arg(long)]
    catalog: PathBuf,
    /// Restrict to one level
    #[arg(long)]
    level: Option<usize>,
    /// Directory receiving one DOT file per member
    #[arg(long)]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            eprint!("{err}");
            return ExitCode::from(64);
        }
    };
    match run(cli.cmd) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(64)
        }
    }
}

fn parse_interlace(n: usize, e: &str) -> Result<InterlaceType, Error> {
    let interlace = InterlaceType::parse(e)?;
    if interlace.arity() != n {
        return Err(Error::ArityMismatch { left: n, right: interlace.arity() });
    }
    Ok(interlace)
}

fn load_structure(path: &PathBuf) -> Result<AmalgamStructure, Error> {
    let text = fs::read_to_string(path)?;
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Format(format!("{}: empty file", path.display())))?;
    AmalgamStructure::from_record(line)
}

fn selected<'c>(catalogs: &'c [Catalog], level: Option<usize>) -> Vec<&'c Catalog> {
    catalogs
        .iter()
        .filter(|c| level.map_or(true, |t| c.level() == t))
        .collect()
}

fn run(cmd: Cmd) -> Result<ExitCode, Error> {
    match cmd {
        Cmd::Enum(args) => {
            let interlace = parse_interlace(args.n, &args.e)?;
            let run = enumerate_levels(&interlace, args.levels, args.cap);
            write_catalog_file(&args.out, &run.catalogs)?;
            if let Some(level) = run.truncated_at {
                eprintln!(
                    "truncated: level {level} would exceed the vertex cap {}; wrote levels 0..={}",
                    args.cap,
                    run.catalogs.last().map(|c| c.level()).unwrap_or(0)
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Stats(args) => {
            let catalogs = read_catalog_file(&args.catalog)?;
            let mut cumulative: std::collections::BTreeSet<AmalgamStructure> =
                std::collections::BTreeSet::new();
            for c in &catalogs {
                if args.cumulative {
                    cumulative.extend(c.members().cloned());
                }
                if args.level.map_or(false, |t| c.level() != t) {
                    continue;
                }
                let stats = c.stats();
                if args.human {
                    println!(
                        "level {:>2}: {:>6} members, |V| {}..{}, |U| {}..{}, |X| {}..{} (bound {})",
                        stats.level,
                        stats.count,
                        stats.min_vertices,
                        stats.max_vertices,
                        stats.min_marked,
                        stats.max_marked,
                        stats.min_edges,
                        stats.max_edges,
                        stats.edge_bound
                    );
                } else if args.cumulative {
                    let mut value = serde_json::to_value(&stats)?;
                    value["cumulative_count"] = serde_json::json!(cumulative.len());
                    println!("{}", serde_json::to_string(&value)?);
                } else {
                    println!("{}", stats.to_record());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Chi(args) => {
            let catalogs = read_catalog_file(&args.catalog)?;
            for c in selected(&catalogs, args.level) {
                for (index, member) in c.members().enumerate() {
                    let g = reduct(member);
                    let record = InvariantRecord {
                        level: c.level(),
                        index,
                        chi: chromatic_number(&g),
                        odd_girth: odd_girth(&g),
                    };
                    if args.human {
                        println!(
                            "level {:>2} member {:>4}: chi = {}, odd girth = {}",
                            record.level,
                            record.index,
                            record.chi,
                            record.odd_girth.map_or("-".into(), |v| v.to_string())
                        );
                    } else {
                        println!("{}", record.to_record());
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Girth(args) => {
            let catalogs = read_catalog_file(&args.catalog)?;
            for c in selected(&catalogs, args.level) {
                for (index, member) in c.members().enumerate() {
                    let g = reduct(member);
                    if args.human {
                        println!(
                            "level {:>2} member {:>4}: girth = {}, odd girth = {}, bipartite = {}",
                            c.level(),
                            index,
                            girth(&g).map_or("-".into(), |v| v.to_string()),
                            odd_girth(&g).map_or("-".into(), |v| v.to_string()),
                            is_bipartite(&g)
                        );
                    } else {
                        println!(
                            "{}",
                            serde_json::json!({
                                "level": c.level(),
                                "index": index,
                                "girth": girth(&g),
                                "odd_girth": odd_girth(&g),
                                "bipartite": is_bipartite(&g),
                            })
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Embed(args) => {
            let a = load_structure(&args.a)?;
            let b = load_structure(&args.b)?;
            if args.graph {
                match subgraph_embed(&reduct(&a), &reduct(&b)) {
                    Some(map) => {
                        println!("{}", serde_json::json!({ "map": map }));
                        Ok(ExitCode::SUCCESS)
                    }
                    None => {
                        eprintln!("no graph embedding");
                        Ok(ExitCode::from(1))
                    }
                }
            } else {
                match weak_embed(&a, &b)? {
                    Some(witness) => {
                        println!("{}", witness.to_record());
                        Ok(ExitCode::SUCCESS)
                    }
                    None => {
                        eprintln!("no weak embedding");
                        Ok(ExitCode::from(1))
                    }
                }
            }
        }
        Cmd::Member(args) => {
            let a = load_structure(&args.a)?;
            let catalogs = read_catalog_file(&args.catalog)?;
            match class_membership(&a, &catalogs)? {
                Membership::Yes { level, member, witness } => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "verdict": "yes",
                            "level": level,
                            "member": member,
                            "map": witness.map(),
                        })
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Membership::RefutedByMarkers { edge } => {
                    println!(
                        "{}",
                        serde_json::json!({ "verdict": "refuted", "edge": [edge.0, edge.1] })
                    );
                    Ok(ExitCode::from(1))
                }
                Membership::Unknown { max_level } => {
                    println!(
                        "{}",
                        serde_json::json!({ "verdict": "unknown", "max_level": max_level })
                    );
                    Ok(ExitCode::from(2))
                }
            }
        }
        Cmd::InterlaceGraph(args) => {
            let interlace = parse_interlace(args.n, &args.e)?;
            let g = interlace_graph(args.m, args.n, &interlace)?;
            print_tuple_graph(&g, Some(&args.e), args.dot, args.chi);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ShiftGraph(args) => {
            let g = shift_graph(args.m, args.n)?;
            print_tuple_graph(&g, None, args.dot, args.chi);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Condition(ConditionCmd::Check(args)) => {
            let text = fs::read_to_string(&args.input)?;
            let q = Condition::from_lines(&text)?;
            let catalogs = read_catalog_file(&args.catalog)?;
            let verdict = is_condition(&q, &catalogs, args.max_subset)?;
            match &verdict {
                ConditionVerdict::Valid => {
                    println!("{}", serde_json::json!({ "verdict": "valid" }));
                }
                ConditionVerdict::Invalid { witness } => {
                    println!(
                        "{}",
                        serde_json::json!({ "verdict": "invalid", "witness": witness })
                    );
                }
                ConditionVerdict::Unknown { max_level } => {
                    println!(
                        "{}",
                        serde_json::json!({ "verdict": "unknown", "max_level": max_level })
                    );
                }
            }
            Ok(ExitCode::from(verdict.exit_code()))
        }
        Cmd::Condition(ConditionCmd::Sample(args)) => {
            let interlace = parse_interlace(args.n, &args.e)?;
            let catalogs = read_catalog_file(&args.catalog)?;
            let outcome = sample_chain(&interlace, args.steps, args.seed, &catalogs)?;
            let s = outcome.condition.structure();
            let g = reduct(s);
            println!(
                "{}",
                serde_json::json!({
                    "steps": outcome.moves.len(),
                    "vertices": s.vertex_count(),
                    "marked": s.marked().len(),
                    "edges": s.edges().len(),
                    "chi": chromatic_number(&g),
                })
            );
            if let Some(path) = args.out {
                fs::write(path, outcome.condition.to_lines())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ExportDot(args) => {
            let catalogs = read_catalog_file(&args.catalog)?;
            fs::create_dir_all(&args.out_dir)?;
            for c in selected(&catalogs, args.level) {
                for (index, member) in c.members().enumerate() {
                    let name = format!("level{}_member{}", c.level(), index);
                    let path = args.out_dir.join(format!("{name}.dot"));
                    fs::write(path, reduct_dot(member, &name))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_tuple_graph(g: &TupleGraph, pattern: Option<&str>, dot: bool, chi: bool) {
    if dot {
        print!("{}", g.dot("tuples"));
        return;
    }
    let mut record = serde_json::json!({
        "m": g.ground,
        "n": g.arity,
        "vertices": g.graph.vertex_count,
        "edges": g.graph.edges.len(),
    });
    if let Some(e) = pattern {
        record["e"] = serde_json::json!(e);
    }
    if chi {
        record["chi"] = serde_json::json!(chromatic_number(&g.graph));
    }
    println!("{record}");
}
