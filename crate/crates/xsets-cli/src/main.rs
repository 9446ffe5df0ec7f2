//! Command-line driver: generate datasets, canonicalize them, extract
//! minimal itemsets, cross-check the engines, and benchmark them.
//!
//! Exit codes: 0 on success and agreement, 1 on runtime errors or engine
//! disagreement, 2 on usage errors.

use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Cursor, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use xsets::generator::{generate, inject_mixed, GeneratorConfig};
use xsets::io::{canonicalize, parse_binary, parse_text, write_binary, write_text, RemapMode};
use xsets::lex;
use xsets::memo::{self, ReusePolicy};
use xsets::model::Dataset;
use xsets::oracle::{self, MinimalityFlags};
use xsets::parallel;
use xsets::RangeSearchStats;

#[derive(Parser)]
#[command(name = "xsets", version, about = "Find the minimal itemsets of integer set families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset; reports generation metadata as JSON on
    /// stderr
    Gen(GenArgs),
    /// Renumber and sort a dataset into canonical order
    Canon(CanonArgs),
    /// Print the minimal itemsets of a dataset in canonical order
    Min(MinArgs),
    /// Cross-check engines on generated datasets; exits nonzero on any
    /// disagreement
    Verify(VerifyArgs),
    /// Time engines on a dataset or a generated grid and print a comparison
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Bin,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RemapArg {
    /// Keep item ids unchanged
    None,
    /// Smallest ids to the least frequent items
    FreqAsc,
    /// Smallest ids to the most frequent items
    FreqDesc,
}

impl From<RemapArg> for RemapMode {
    fn from(arg: RemapArg) -> RemapMode {
        match arg {
            RemapArg::None => RemapMode::None,
            RemapArg::FreqAsc => RemapMode::FrequencyAscending,
            RemapArg::FreqDesc => RemapMode::FrequencyDescending,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    /// Quadratic pairwise reference
    Naive,
    /// Range searches over the sorted family
    Lex,
    /// Range searches with call-graph reuse
    Memo,
    /// The lex queries spread over worker threads
    Par,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Naive => "naive",
            Algo::Lex => "lex",
            Algo::Memo => "memo",
            Algo::Par => "par",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    /// Drop the stored graph after every true result
    Discard,
    /// Keep graphs across true results via unexplored-range placeholders
    FrontierResume,
}

impl From<PolicyArg> for ReusePolicy {
    fn from(arg: PolicyArg) -> ReusePolicy {
        match arg {
            PolicyArg::Discard => ReusePolicy::Discard,
            PolicyArg::FrontierResume => ReusePolicy::FrontierResume,
        }
    }
}

impl fmt::Display for PolicyArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolicyArg::Discard => "discard",
            PolicyArg::FrontierResume => "frontier-resume",
        })
    }
}

fn main() -> std::process::ExitCode {
    // Die quietly when a pipe consumer stops reading, like any filter.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Canon(args) => cmd_canon(args),
        Command::Min(args) => cmd_min(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::ExitCode::FAILURE
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Number of itemset slots to draw; slots left empty are dropped
    #[arg(long)]
    n: usize,
    /// Alphabet size: items are the ids 1..=alphabet
    #[arg(long)]
    alphabet: u32,
    /// Lower bound of the per-item frequency draw, in [0, 1]
    #[arg(long)]
    fmin: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let cfg = GeneratorConfig {
        itemsets: args.n,
        alphabet: args.alphabet,
        min_frequency: args.fmin,
        seed: args.seed,
    };
    let g = generate(&cfg)?;
    let mut out = open_out(args.out.as_deref())?;
    match args.format {
        Format::Text => write_text(&g.dataset, &mut out)?,
        Format::Bin => write_binary(&g.dataset, &mut out)?,
    }
    out.flush()?;
    let meta = serde_json::json!({
        "itemsets": g.dataset.len(),
        "dropped_empty_slots": g.dropped_empty_slots,
        "item_stats": g.item_stats,
    });
    eprintln!("{meta}");
    Ok(())
}

#[derive(Args)]
struct CanonArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Output file; stdout when omitted. The input's format (text or
    /// binary) is kept.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Item renumbering applied before sorting
    #[arg(long, value_enum, default_value_t = RemapArg::None)]
    remap: RemapArg,
}

fn cmd_canon(args: CanonArgs) -> Result<()> {
    let (d, binary) = load_dataset(&args.input)?;
    let (c, remapping) = canonicalize(&d, args.remap.into());
    let mut out = open_out(args.out.as_deref())?;
    if binary {
        write_binary(&c, &mut out)?;
    } else {
        write_text(&c, &mut out)?;
    }
    out.flush()?;
    if args.remap != RemapArg::None {
        eprintln!("{}", serde_json::to_string(&remapping)?);
    }
    Ok(())
}

#[derive(Args)]
struct MinArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Lex)]
    algo: Algo,
    /// Worker count for --algo par; when omitted, XSETS_THREADS and then
    /// the machine's available parallelism decide
    #[arg(long)]
    threads: Option<usize>,
    /// Sort a non-canonical input instead of rejecting it
    #[arg(long)]
    canonicalize: bool,
    /// Graph reuse policy for --algo memo
    #[arg(long, value_enum, default_value_t = PolicyArg::Discard)]
    memo_policy: PolicyArg,
    /// Debug dump: one JSON line per subset query with its call graph
    /// (--algo memo only; slows the run and can be very large)
    #[arg(long, value_name = "FILE")]
    dump_graphs: Option<PathBuf>,
    /// Output file for the minimal itemsets; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the stats JSON here as well (it always goes to stderr)
    #[arg(long, value_name = "FILE")]
    stats_json: Option<PathBuf>,
}

fn cmd_min(args: MinArgs) -> Result<()> {
    let (mut d, _) = load_dataset(&args.input)?;
    if !d.verify_canonical() {
        if args.canonicalize {
            d = canonicalize(&d, RemapMode::None).0;
        } else {
            bail!(
                "{} is not in canonical order; pass --canonicalize or run `xsets canon` first",
                args.input.display()
            );
        }
    }
    if args.dump_graphs.is_some() && args.algo != Algo::Memo {
        bail!("--dump-graphs applies only to --algo memo");
    }

    // Parsing and canonicalization are deliberately outside the clock.
    let started = Instant::now();
    let (flags, stats) = match args.dump_graphs {
        Some(ref path) => {
            let file = fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            let mut io_err: Option<io::Error> = None;
            let r = memo::minimal_itemsets_observed(&d, args.memo_policy.into(), |i, graph| {
                let line = serde_json::json!({ "i": i, "graph": memo::call_graph_json(graph) });
                if let Err(e) = writeln!(w, "{line}") {
                    io_err.get_or_insert(e);
                }
            });
            w.flush()?;
            if let Some(e) = io_err {
                return Err(e).context("writing the graph dump");
            }
            r
        }
        None => run_algo(args.algo, &d, args.threads, args.memo_policy.into())?,
    };
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let mut out = open_out(args.out.as_deref())?;
    write_retained(&d, &flags, &mut out)?;
    out.flush()?;

    let stats_obj = serde_json::json!({
        "next_item_calls": stats.next_item_calls,
        "next_begin_range_calls": stats.next_begin_range_calls,
        "next_end_range_calls": stats.next_end_range_calls,
        "subset_queries": stats.subset_queries,
        "wall_ms": wall_ms,
        "result_count": flags.count_retained(),
    });
    eprintln!("{stats_obj}");
    if let Some(path) = args.stats_json {
        fs::write(&path, format!("{stats_obj}\n"))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

#[derive(Args)]
struct VerifyArgs {
    /// Engines to cross-check, comma separated
    #[arg(long, value_delimiter = ',', value_enum,
          default_values_t = vec![Algo::Naive, Algo::Lex, Algo::Memo, Algo::Par])]
    algos: Vec<Algo>,
    #[arg(long, default_value_t = 50)]
    trials: u64,
    /// Itemset slots per generated trial dataset
    #[arg(long, default_value_t = 150)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    alphabet: u32,
    /// Frequency floors cycled across trials, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.3, 0.5])]
    fmin_grid: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rate of injected duplicate rows
    #[arg(long, default_value_t = 0.2)]
    dup_rate: f64,
    /// Rate of injected proper-prefix rows
    #[arg(long, default_value_t = 0.2)]
    prefix_rate: f64,
    /// Skip the quadratic reference on datasets larger than this
    #[arg(long, default_value_t = 2000)]
    oracle_cap: usize,
    #[arg(long)]
    threads: Option<usize>,
    /// Graph reuse policy for the memo engine
    #[arg(long, value_enum, default_value_t = PolicyArg::FrontierResume)]
    memo_policy: PolicyArg,
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    if args.algos.is_empty() {
        bail!("--algos must name at least one engine");
    }
    if args.fmin_grid.is_empty() {
        bail!("--fmin-grid must contain at least one frequency");
    }
    let mut capped = 0u64;
    for trial in 0..args.trials {
        let fmin = args.fmin_grid[(trial % args.fmin_grid.len() as u64) as usize];
        let cfg = GeneratorConfig {
            itemsets: args.n,
            alphabet: args.alphabet,
            min_frequency: fmin,
            seed: args.seed.wrapping_add(trial),
        };
        let base = generate(&cfg)?.dataset;
        let d = inject_mixed(&base, args.seed ^ trial, args.dup_rate, args.prefix_rate);

        let mut baseline: Option<(Algo, MinimalityFlags)> = None;
        for &algo in &args.algos {
            if algo == Algo::Naive && d.len() > args.oracle_cap {
                capped += 1;
                continue;
            }
            let (flags, _) = run_algo(algo, &d, args.threads, args.memo_policy.into())?;
            match &baseline {
                None => baseline = Some((algo, flags)),
                Some((ref_algo, ref_flags)) => {
                    if &flags != ref_flags {
                        let at = (0..d.len())
                            .find(|&i| flags.get(i) != ref_flags.get(i))
                            .expect("flags differ");
                        let row: Vec<String> =
                            d.get(at).iter().map(|x| x.0.to_string()).collect();
                        bail!(
                            "trial {trial} (n={}, alphabet={}, fmin={fmin}, seed={}): \
                             {algo} disagrees with {ref_algo} at position {at} \
                             (itemset `{}`): {} vs {}",
                            args.n,
                            args.alphabet,
                            cfg.seed,
                            row.join(" "),
                            flags.get(at),
                            ref_flags.get(at)
                        );
                    }
                }
            }
        }
    }
    let names: Vec<String> = args.algos.iter().map(|a| a.to_string()).collect();
    print!("verified {} trials across {{{}}}: all agree", args.trials, names.join(", "));
    if capped > 0 {
        print!(" (naive skipped on {capped} trials above --oracle-cap)");
    }
    println!();
    Ok(())
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset file to benchmark
    #[arg(long = "in", value_name = "FILE",
          conflicts_with = "gen_grid", required_unless_present = "gen_grid")]
    input: Option<PathBuf>,
    /// Generate the datasets instead, one per frequency:
    /// "n=100000,alphabet=140,fmin=0.5:0.7:0.9,seed=9"
    #[arg(long, value_name = "GRID")]
    gen_grid: Option<String>,
    /// Engines to time, comma separated
    #[arg(long, value_delimiter = ',', value_enum,
          default_values_t = vec![Algo::Lex, Algo::Memo])]
    algos: Vec<Algo>,
    #[arg(long)]
    threads: Option<usize>,
    /// Graph reuse policy for the memo engine
    #[arg(long, value_enum, default_value_t = PolicyArg::Discard)]
    memo_policy: PolicyArg,
    /// Timed repetitions per engine; the mean is reported
    #[arg(long, default_value_t = 3)]
    reps: u32,
    #[arg(long, value_name = "FILE")]
    json_out: Option<PathBuf>,
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if args.algos.is_empty() {
        bail!("--algos must name at least one engine");
    }
    if args.reps == 0 {
        bail!("--reps must be at least 1");
    }

    // (label, dataset, milliseconds spent parsing or generating)
    let mut datasets: Vec<(String, Dataset, f64)> = Vec::new();
    if let Some(path) = &args.input {
        let prep = Instant::now();
        let (mut d, _) = load_dataset(path)?;
        if !d.verify_canonical() {
            d = canonicalize(&d, RemapMode::None).0;
        }
        datasets.push((path.display().to_string(), d, prep.elapsed().as_secs_f64() * 1e3));
    } else {
        for cfg in parse_gen_grid(args.gen_grid.as_deref().unwrap())? {
            let prep = Instant::now();
            let d = generate(&cfg)?.dataset;
            let label = format!(
                "n={},alphabet={},fmin={},seed={}",
                cfg.itemsets, cfg.alphabet, cfg.min_frequency, cfg.seed
            );
            datasets.push((label, d, prep.elapsed().as_secs_f64() * 1e3));
        }
    }

    let mut report = Vec::new();
    for (label, d, prep_ms) in &datasets {
        println!("dataset {label}: {} itemsets, prepared in {prep_ms:.1} ms", d.len());
        println!(
            "{:<8} {:>12} {:>16} {:>14} {:>12} {:>10} {:>9}",
            "algo", "wall_ms", "range_searches", "next_item", "queries", "minimal", "speedup"
        );
        let mut rows = Vec::new();
        let mut reference: Option<MinimalityFlags> = None;
        for &algo in &args.algos {
            let mut total = 0.0;
            let mut run = None;
            for _ in 0..args.reps {
                let started = Instant::now();
                let r = run_algo(algo, d, args.threads, args.memo_policy.into())?;
                total += started.elapsed().as_secs_f64() * 1e3;
                run = Some(r);
            }
            let (flags, stats) = run.unwrap();
            match &reference {
                None => reference = Some(flags.clone()),
                Some(ref_flags) => {
                    if &flags != ref_flags {
                        bail!("{algo} disagrees with {} on {label}", args.algos[0]);
                    }
                }
            }
            rows.push((algo, total / args.reps as f64, stats, flags.count_retained()));
        }
        let lex_ms = rows.iter().find(|(a, ..)| *a == Algo::Lex).map(|&(_, ms, ..)| ms);
        let mut engines_json = Vec::new();
        for (algo, ms, stats, count) in &rows {
            let speedup = lex_ms.map(|l| l / ms);
            println!(
                "{:<8} {:>12.2} {:>16} {:>14} {:>12} {:>10} {:>9}",
                algo.to_string(),
                ms,
                stats.range_search_calls(),
                stats.next_item_calls,
                stats.subset_queries,
                count,
                speedup.map_or_else(|| "-".to_string(), |s| format!("{s:.2}")),
            );
            engines_json.push(serde_json::json!({
                "algo": algo.to_string(),
                "reps": args.reps,
                "wall_ms_mean": ms,
                "next_item_calls": stats.next_item_calls,
                "next_begin_range_calls": stats.next_begin_range_calls,
                "next_end_range_calls": stats.next_end_range_calls,
                "subset_queries": stats.subset_queries,
                "result_count": count,
                "speedup_vs_lex": speedup,
            }));
        }
        println!();
        report.push(serde_json::json!({
            "dataset": label,
            "itemsets": d.len(),
            "prep_ms": prep_ms,
            "engines": engines_json,
        }));
    }

    if let Some(path) = args.json_out {
        let json = serde_json::Value::Array(report);
        fs::write(&path, format!("{json:#}\n"))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

/// Parses "n=..,alphabet=..,fmin=f1:f2:..,seed=.." into one config per
/// frequency.
fn parse_gen_grid(grid: &str) -> Result<Vec<GeneratorConfig>> {
    let mut n = None;
    let mut alphabet = None;
    let mut fmins: Option<Vec<f64>> = None;
    let mut seed = 0u64;
    for part in grid.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("--gen-grid entry {part:?} is not key=value"))?;
        match key.trim() {
            "n" => n = Some(value.trim().parse().context("parsing n")?),
            "alphabet" => alphabet = Some(value.trim().parse().context("parsing alphabet")?),
            "fmin" => {
                let list: Result<Vec<f64>, _> =
                    value.split(':').map(|v| v.trim().parse::<f64>()).collect();
                fmins = Some(list.context("parsing fmin list")?);
            }
            "seed" => seed = value.trim().parse().context("parsing seed")?,
            other => bail!("--gen-grid key {other:?} is not one of n, alphabet, fmin, seed"),
        }
    }
    let n = n.ok_or_else(|| anyhow!("--gen-grid is missing n=<count>"))?;
    let alphabet = alphabet.ok_or_else(|| anyhow!("--gen-grid is missing alphabet=<size>"))?;
    let fmins = fmins.ok_or_else(|| anyhow!("--gen-grid is missing fmin=<f1:f2:..>"))?;
    Ok(fmins
        .into_iter()
        .map(|f| GeneratorConfig { itemsets: n, alphabet, min_frequency: f, seed })
        .collect())
}

fn run_algo(
    algo: Algo,
    d: &Dataset,
    threads: Option<usize>,
    policy: ReusePolicy,
) -> Result<(MinimalityFlags, RangeSearchStats)> {
    Ok(match algo {
        Algo::Naive => (oracle::naive_minimal(d), RangeSearchStats::default()),
        Algo::Lex => lex::minimal_itemsets(d),
        Algo::Memo => memo::minimal_itemsets_with_policy(d, policy),
        Algo::Par => parallel::minimal_itemsets(d, resolve_threads(threads)?)?,
    })
}

fn resolve_threads(cli: Option<usize>) -> Result<usize> {
    let workers = match cli {
        Some(w) => w,
        None => match std::env::var("XSETS_THREADS") {
            Ok(v) => v
                .trim()
                .parse()
                .with_context(|| format!("XSETS_THREADS={v:?} is not a worker count"))?,
            Err(_) => std::thread::available_parallelism().map(|c| c.get()).unwrap_or(1),
        },
    };
    if workers == 0 {
        bail!("worker count must be at least 1");
    }
    Ok(workers)
}

fn load_dataset(path: &Path) -> Result<(Dataset, bool)> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let binary = bytes.starts_with(b"XSET");
    let d = if binary {
        parse_binary(Cursor::new(&bytes))
    } else {
        parse_text(Cursor::new(&bytes))
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    Ok((d, binary))
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_retained(d: &Dataset, flags: &MinimalityFlags, out: &mut dyn Write) -> Result<()> {
    let mut line = String::new();
    for i in flags.retained_positions() {
        line.clear();
        for (k, item) in d.get(i).iter().enumerate() {
            if k > 0 {
                line.push(' ');
            }
            line.push_str(&item.0.to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}
