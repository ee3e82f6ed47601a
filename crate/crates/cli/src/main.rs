//! `sgao`: command-line front end for exact acyclic-orientation counts on
//! generalized Sierpinski gaskets.

mod report;
mod systems;
mod tables;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sgao_core::cache::SystemCache;
use sgao_core::derive::{
    derive_direct, derive_recursion_dp_with, derive_recursion_with_stats, diff_systems, initial_vector, Derivation,
    DEFAULT_MAX_FRONTIER_STATES,
};
use sgao_core::gasket::{build_gasket, count_edges, read_edge_list, write_edge_list};
use sgao_core::growth::{bounds, converge, growth_table};
use sgao_core::oracle::{
    classify_orientations_capped, count_bruteforce_capped, count_chromatic_with, ChromaticOptions,
    DEFAULT_BRUTE_FORCE_EDGES, DEFAULT_CHROMATIC_EDGES,
};
use sgao_core::precision::DEFAULT_DIGITS;
use sgao_core::verify::{run_suite, VerifyOptions};
use sgao_core::{builtin_system, iterate, GasketSpec, RecursionSystem};

use report::{Cell, Format, Report};
use systems::{load_file, Systems};
use tables::Which;

#[derive(Parser, Debug)]
#[command(name = "sgao", version, about = "Exact acyclic-orientation counts on generalized Sierpinski gaskets")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Exit with status 0 even when requested entries were skipped.
    #[arg(long, global = true)]
    allow_skip: bool,
    /// Directory for derived recursion systems (default: $SGAO_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build gasket graphs.
    #[command(subcommand)]
    Gasket(GasketCmd),
    /// Count or classify acyclic orientations of an edge-list graph.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Derive the recursion system for SG_{d,b}, or check a saved one.
    Derive(DeriveArgs),
    /// Evaluate a recursion system to stage n.
    Count(CountArgs),
    /// Bounds on the growth constant.
    Growth(GrowthArgs),
    /// Reproduce a reference table and diff it against the embedded values.
    Tables(TablesArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct Shape {
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, default_value_t = 2)]
    b: u32,
}

#[derive(Subcommand, Debug)]
enum GasketCmd {
    /// Write SG_{d,b}(n) as an edge list.
    Build {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Brute,
    Chromatic,
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    Count {
        #[arg(long, value_enum, default_value = "chromatic")]
        method: Method,
        #[arg(long)]
        graph: PathBuf,
        /// Edge cap; defaults to the method's built-in limit.
        #[arg(long)]
        max_edges: Option<usize>,
    },
    /// Count acyclic orientations per corner poset.
    Classify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_EDGES)]
        max_edges: usize,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct DeriveArgs {
    #[command(subcommand)]
    action: Option<DeriveCmd>,
    #[command(flatten)]
    shape: Shape,
    /// Force the frontier DP (d = 2 only).
    #[arg(long)]
    dp: bool,
    /// Force direct enumeration.
    #[arg(long, conflicts_with = "dp")]
    direct: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_FRONTIER_STATES)]
    max_states: usize,
    /// Write the system as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum DeriveCmd {
    /// Check a saved system against the oracles and the built-in relations.
    Verify {
        #[arg(long)]
        system: PathBuf,
        /// Largest stage-1 graph classified exhaustively.
        #[arg(long, default_value_t = 27)]
        classify_edges: usize,
    },
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long)]
    n: u32,
    /// `builtin`, `derived`, or a system JSON file.
    #[arg(long, default_value = "builtin")]
    system: String,
    /// Shorthand for `--format csv`.
    #[arg(long)]
    csv: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct GrowthArgs {
    #[command(subcommand)]
    table: Option<GrowthTable>,
    #[command(flatten)]
    shape: Shape,
    #[arg(long, default_value_t = 5)]
    m_max: u32,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    digits: u32,
    /// Significant digits printed.
    #[arg(long, default_value_t = 16)]
    sig: u32,
    /// `builtin`, `derived`, or a system JSON file; defaults to built-in when available.
    #[arg(long)]
    system: Option<String>,
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum GrowthTable {
    /// Stage-zero bounds for SG_d, d = 2..10.
    Table4,
    /// Stage-zero bounds for SG_{2,b}, b = 3..10, with the limit.
    Table6,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[arg(value_enum)]
    which: Vec<Which>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Allow derivations that take minutes (SG_{3,2}).
    #[arg(long)]
    expensive: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Include the multi-minute exhaustive sweeps.
    #[arg(long)]
    thorough: bool,
}

struct RunConfig {
    allow_skip: bool,
    cache: Option<SystemCache>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let ctx = RunConfig {
        allow_skip: cli.allow_skip,
        cache: cli.cache_dir.map(SystemCache::new).or_else(SystemCache::from_env),
    };
    match cli.command {
        Command::Gasket(GasketCmd::Build { shape, n, out }) => gasket_build(shape, n, out.as_deref()),
        Command::Oracle(cmd) => oracle(cmd),
        Command::Derive(args) => derive(args, &ctx),
        Command::Count(args) => count(args, &ctx),
        Command::Growth(args) => growth(args, &ctx),
        Command::Tables(args) => tables_cmd(args, &ctx),
        Command::Verify(args) => verify(args, &ctx),
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn spec(shape: Shape, n: u32) -> Result<GasketSpec> {
    Ok(GasketSpec::new(shape.d, shape.b, n)?)
}

fn gasket_build(shape: Shape, n: u32, out: Option<&Path>) -> Result<bool> {
    let g = build_gasket(spec(shape, n)?)?;
    let mut w = output(out)?;
    write_edge_list(&g, &mut w)?;
    w.flush()?;
    if out.is_some() {
        eprintln!("SG_{{{},{}}}({n}): {} vertices, {} edges", shape.d, shape.b, g.vertex_count(), g.edge_count());
    }
    Ok(true)
}

fn read_graph(path: &Path) -> Result<sgao_core::gasket::ParsedGraph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_edge_list(BufReader::new(file))?)
}

fn oracle(cmd: OracleCmd) -> Result<bool> {
    match cmd {
        OracleCmd::Count { method, graph, max_edges } => {
            let g = read_graph(&graph)?.graph;
            let count = match method {
                Method::Brute => count_bruteforce_capped(&g, max_edges.unwrap_or(DEFAULT_BRUTE_FORCE_EDGES))?,
                Method::Chromatic => count_chromatic_with(
                    &g,
                    &ChromaticOptions {
                        max_edges: max_edges.unwrap_or(DEFAULT_CHROMATIC_EDGES),
                        ..Default::default()
                    },
                )?,
            };
            println!("{count}");
            Ok(true)
        }
        OracleCmd::Classify { graph, out, max_edges } => {
            let parsed = read_graph(&graph)?;
            let labeled = classify_orientations_capped(&parsed.graph, max_edges)?;
            let mut w = output(out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &labeled.to_json())?;
            writeln!(w)?;
            w.flush()?;
            let table = sgao_core::states::standard_classes(labeled.k)?;
            let sums = labeled.class_sums(table)?;
            let names = table.names();
            let summary: Vec<String> = names.iter().zip(&sums).map(|(n, s)| format!("{n}={s}")).collect();
            eprintln!("total {} over classes: {}", labeled.total(), summary.join(" "));
            Ok(true)
        }
    }
}

fn derive(args: DeriveArgs, ctx: &RunConfig) -> Result<bool> {
    if let Some(DeriveCmd::Verify { system, classify_edges }) = args.action {
        return derive_verify(&system, classify_edges);
    }
    let Shape { d, b } = args.shape;
    let start = Instant::now();
    let Derivation { system, stats } = if args.dp {
        derive_recursion_dp_with(d, b, args.max_states)?
    } else if args.direct {
        derive_direct(d, b)?
    } else {
        derive_recursion_with_stats(d, b)?
    };
    eprint!(
        "derived SG_{{{d},{b}}} in {:.2}s: {} accepted assignments, {} work units",
        start.elapsed().as_secs_f64(),
        stats.accepted,
        stats.work
    );
    if stats.peak_states > 0 {
        eprint!(", peak {} frontier states", stats.peak_states);
    }
    eprintln!();
    if let Some(cache) = &ctx.cache {
        let path = cache.store(&system)?;
        eprintln!("cached at {}", path.display());
    }
    match &args.out {
        Some(path) => {
            let mut w = output(Some(path))?;
            serde_json::to_writer_pretty(&mut w, &system.to_json())?;
            writeln!(w)?;
            w.flush()?;
        }
        None => print!("{}", system.pretty()),
    }
    Ok(true)
}

fn derive_verify(path: &Path, classify_edges: usize) -> Result<bool> {
    let system = load_file(path)?;
    let (d, b) = (system.d, system.b);
    let mut ok = true;
    let mut line = |name: &str, pass: bool, detail: String| {
        ok &= pass;
        println!("{}  {name}{detail}", if pass { "PASS" } else { "FAIL" });
    };
    line("system is well formed", true, String::new());
    if let Ok(builtin) = builtin_system(d, b) {
        let diff = diff_systems(&system, &builtin);
        let detail = diff.first().map(|f| format!(": {} differences, first {f}", diff.len())).unwrap_or_default();
        line("matches the built-in relations", diff.is_empty(), detail);
    }
    let stage1 = spec(Shape { d, b }, 1)?;
    let init = initial_vector(system.variables.len());
    let predicted = system.apply(&init)?;
    let f1: num_bigint::BigUint = predicted.iter().zip(system.class_weights()?).map(|(x, w)| x * w).sum();
    if count_edges(&stage1) <= num_bigint::BigUint::from(DEFAULT_CHROMATIC_EDGES) {
        let g = build_gasket(stage1)?.graph;
        let oracle = count_chromatic_with(&g, &ChromaticOptions::default())?;
        line("stage-1 total equals the chromatic count", f1 == oracle, format!(" ({f1} vs {oracle})"));
        if g.edge_count() <= classify_edges {
            let observed = sgao_core::derive::oracle_class_values(&g, system.class_table()?)?;
            line("stage-1 class vector equals classification", predicted == observed, String::new());
        }
    }
    Ok(ok)
}

fn count(args: CountArgs, ctx: &RunConfig) -> Result<bool> {
    let Shape { d, b } = args.shape;
    spec(args.shape, args.n)?;
    let systems = Systems::new(ctx.cache.clone(), true);
    let system = systems.resolve(&args.system, d, b)?;
    let seq = iterate(&system, args.n)?;
    let mut headers = vec!["n".to_owned(), "f".to_owned()];
    headers.extend(system.variables.iter().cloned());
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    let mut report = Report::new(format!("SG_{{{d},{b}}}(n)"), &header_refs);
    for n in 0..=args.n {
        let mut row = vec![Cell::plain(n.to_string()), Cell::plain(seq.f(n)?.to_string())];
        row.extend(seq.stage(n)?.values.iter().map(|v| Cell::plain(v.to_string())));
        report.push(row);
    }
    let format = if args.csv { Format::Csv } else { args.format };
    let mut w = output(None)?;
    report.write(format, &mut w)?;
    w.flush()?;
    Ok(true)
}

/// Stages beyond `--m-max` tried when certifying the limit for the ratio column.
const CONVERGE_EXTRA: u32 = 3;

fn default_source(d: u32, b: u32) -> &'static str {
    if builtin_system(d, b).is_ok() {
        "builtin"
    } else {
        "derived"
    }
}

fn growth(args: GrowthArgs, ctx: &RunConfig) -> Result<bool> {
    let report = match args.table {
        Some(GrowthTable::Table4) => tables::build(Which::Iv, &Systems::new(None, false))?,
        Some(GrowthTable::Table6) => tables::build(Which::Vi, &Systems::new(None, false))?,
        None => growth_report(&args, ctx)?,
    };
    let mut w = output(None)?;
    report.write(args.format, &mut w)?;
    w.flush()?;
    Ok(report.mismatches().is_empty())
}

fn growth_report(args: &GrowthArgs, ctx: &RunConfig) -> Result<Report> {
    let Shape { d, b } = args.shape;
    spec(args.shape, 0)?;
    if args.digits < 10 {
        bail!("--digits must be at least 10");
    }
    let source = args.system.clone().unwrap_or_else(|| default_source(d, b).to_owned());
    let system: RecursionSystem = Systems::new(ctx.cache.clone(), true).resolve(&source, d, b)?;
    let converged = converge(&system, args.digits, args.m_max + CONVERGE_EXTRA).ok();
    let mut seq = iterate(&system, args.m_max)?;
    let title = match &converged {
        Some((c, _)) => format!(
            "SG_{{{d},{b}}}: z = {} (bounds agree below 1e-{} at m = {})",
            c.z(),
            c.digits,
            c.m
        ),
        None => format!("SG_{{{d},{b}}}: bounds have not met by m = {}", args.m_max),
    };
    let mut report = Report::new(title, &["m", "upper", "lower", "ratio"]);
    let fmt = |v: &sgao_core::precision::HighPrecision| v.to_significant(args.sig);
    match &converged {
        Some((c, _)) => {
            seq.extend_to(args.m_max)?;
            for row in growth_table(&seq, args.m_max, &c.upper, args.digits)? {
                report.push(vec![
                    Cell::plain(row.m.to_string()),
                    Cell::plain(fmt(&row.upper)),
                    Cell::plain(row.lower.as_ref().map(fmt).unwrap_or_else(|| "-".into())),
                    Cell::plain(fmt(&row.ratio)),
                ]);
            }
        }
        None => {
            for m in 0..=args.m_max {
                let est = bounds(&seq, m, args.digits)?;
                report.push(vec![
                    Cell::plain(m.to_string()),
                    Cell::plain(fmt(&est.upper)),
                    Cell::plain(est.lower.as_ref().map(fmt).unwrap_or_else(|| "-".into())),
                    Cell::plain("-"),
                ]);
            }
        }
    }
    Ok(report)
}

fn tables_cmd(args: TablesArgs, ctx: &RunConfig) -> Result<bool> {
    let which = if args.which.is_empty() {
        vec![Which::I, Which::Ii, Which::Iii, Which::Iv, Which::V, Which::Vi]
    } else {
        args.which
    };
    let systems = Systems::new(ctx.cache.clone(), args.expensive);
    let mut ok = true;
    let mut w = output(None)?;
    for (i, t) in which.into_iter().enumerate() {
        let report = tables::build(t, &systems)?;
        if i > 0 && args.format == Format::Table {
            writeln!(w)?;
        }
        report.write(args.format, &mut w)?;
        ok &= report.mismatches().is_empty() && (ctx.allow_skip || report.skipped().is_empty());
    }
    w.flush()?;
    Ok(ok)
}

fn verify(args: VerifyArgs, ctx: &RunConfig) -> Result<bool> {
    let opts = VerifyOptions {
        thorough: args.thorough,
        cache: ctx.cache.clone(),
        ..Default::default()
    };
    let report = run_suite(&opts);
    for c in &report.checks {
        println!("{c}");
    }
    println!(
        "{} passed, {} failed, {} skipped",
        report.passed(),
        report.failed(),
        report.skipped()
    );
    Ok(report.success(ctx.allow_skip))
}
