//! `ldr`: feature selection, cross-validated evaluation and rank statistics
//! from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use ldr_fs::evalkit::stats::{average_ranks, rank_table};
use ldr_fs::evalkit::{
    bonferroni_dunn_cd, evaluate_selection, friedman_stats, load_csv, minmax_normalize, Dataset,
    DoubleCircle, ErfsSelector, EvalReport, EvalSettings, LdrSelector, NoSelection, Selector,
    DEFAULT_FOLDS, DEFAULT_KNN_K,
};
use ldr_fs::ldr::{default_dim, run_feature_selection, LdrConfig, PARAM_GRID};

#[derive(Parser, Debug)]
#[command(
    name = "ldr",
    version,
    about = "Fuzzy low-dimensional-representation feature selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank features on a whole dataset.
    Select(SelectArgs),
    /// Cross-validate a selector with a k-NN classifier.
    Eval(EvalArgs),
    /// Friedman and Bonferroni–Dunn statistics from a score table.
    Stats(StatsArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Toy {
    DoubleCircle,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// CSV file: header row, numeric features, label in the last column.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Built-in synthetic dataset.
    #[arg(long, value_enum)]
    toy: Option<Toy>,
}

#[derive(Args, Debug)]
struct Hyper {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Number of fuzzy rules (default: number of classes).
    #[arg(long)]
    rules: Option<usize>,
    /// Latent dimension (default: a third of the features).
    #[arg(long)]
    dim: Option<usize>,
    /// Maximum outer iterations.
    #[arg(long)]
    max_iter: Option<usize>,
}

impl Hyper {
    fn config(&self, seed: u64) -> LdrConfig {
        let base = LdrConfig::default();
        LdrConfig {
            alpha: self.alpha.unwrap_or(base.alpha),
            beta: self.beta.unwrap_or(base.beta),
            gamma: self.gamma.unwrap_or(base.gamma),
            rules: self.rules,
            latent_dim: self.dim,
            max_outer: self.max_iter.unwrap_or(base.max_outer),
            seed,
            ..base
        }
    }
}

#[derive(Args, Debug)]
struct SelectArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    hyper: Hyper,
    /// Features to keep (default: a third of the features).
    #[arg(long)]
    select: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SelectorKind {
    Ldr,
    Erfs,
    None,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    hyper: Hyper,
    #[arg(long, value_enum, default_value_t = SelectorKind::Ldr)]
    selector: SelectorKind,
    #[arg(long)]
    select: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_FOLDS)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_KNN_K)]
    knn_k: usize,
    /// Sweep α, β and γ over the full grid (ldr only).
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct StatsArgs {
    /// CSV with a header of dataset names; one row per method, name first.
    #[arg(long)]
    scores: PathBuf,
    /// Critical value of the Bonferroni–Dunn test.
    #[arg(long, default_value_t = 2.638)]
    q: f64,
    /// Treat smaller scores as better (errors, ranks).
    #[arg(long)]
    lower_is_better: bool,
}

fn load(source: &Source, seed: u64) -> Result<Dataset> {
    match (&source.data, source.toy) {
        (Some(path), _) => load_csv(path).with_context(|| format!("reading {}", path.display())),
        (None, Some(Toy::DoubleCircle)) => Ok(DoubleCircle::with_seed(seed).generate()?),
        (None, None) => bail!("either --data or --toy is required"),
    }
}

fn resolve_select(select: Option<usize>, features: usize) -> Result<usize> {
    let k = select.unwrap_or_else(|| default_dim(features));
    if k == 0 || k > features {
        bail!("--select must lie in 1..={features}, got {k}");
    }
    Ok(k)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct RankingFile<'a> {
    dataset: &'a str,
    alpha: f64,
    beta: f64,
    gamma: f64,
    seed: u64,
    iterations: usize,
    converged: bool,
    /// Kept features, best first.
    selected: &'a [usize],
    /// Per-feature flag in column order.
    mask: Vec<bool>,
    order: &'a [usize],
    scores: &'a [f64],
    feature_names: Vec<&'a str>,
}

fn cmd_select(args: &SelectArgs) -> Result<()> {
    let ds = load(&args.source, args.seed)?;
    let select = resolve_select(args.select, ds.features())?;
    // toy data stay in generator coordinates, CSV data are scaled to [0, 1]
    let x = if args.source.toy.is_some() {
        ds.x.clone()
    } else {
        let all: Vec<usize> = (0..ds.samples()).collect();
        minmax_normalize(&ds.x, &all)?.0
    };
    let cfg = args.hyper.config(args.seed);
    let out = run_feature_selection(&x, &ds.labels_f64(), &cfg)?;
    let ranking = &out.ranking;
    let selected = ranking.top(select);

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let file = RankingFile {
        dataset: &ds.name,
        alpha: cfg.alpha,
        beta: cfg.beta,
        gamma: cfg.gamma,
        seed: cfg.seed,
        iterations: out.trace.objective.len(),
        converged: out.trace.converged,
        selected,
        mask: (0..ds.features()).map(|j| selected.contains(&j)).collect(),
        order: &ranking.order,
        scores: &ranking.scores,
        feature_names: ranking
            .order
            .iter()
            .map(|&j| ds.feature_names[j].as_str())
            .collect(),
    };
    write(
        &args.out.join("ranking.json"),
        &(serde_json::to_string_pretty(&file)? + "\n"),
    )?;

    let path = args.out.join("ranking.csv");
    let mut csv =
        csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
    csv.write_record(["rank", "feature", "name", "score", "selected"])?;
    for (rank, (&j, s)) in ranking.order.iter().zip(&ranking.scores).enumerate() {
        csv.write_record([
            (rank + 1).to_string(),
            j.to_string(),
            ds.feature_names[j].clone(),
            format!("{s:e}"),
            (rank < select).to_string(),
        ])?;
    }
    csv.flush()?;

    let mut trace = String::from("iteration,objective,mu,min_f\n");
    for (t, ((obj, mu), f)) in out
        .trace
        .objective
        .iter()
        .zip(&out.trace.mu)
        .zip(&out.trace.min_f)
        .enumerate()
    {
        trace += &format!("{t},{obj:e},{mu:e},{f:e}\n");
    }
    write(&args.out.join("trace.csv"), &trace)?;

    println!(
        "selected {:?} from {} features of {}",
        selected,
        ds.features(),
        ds.name
    );
    Ok(())
}

fn selector(kind: SelectorKind, cfg: LdrConfig) -> Box<dyn Selector> {
    match kind {
        SelectorKind::Ldr => Box::new(LdrSelector { config: cfg }),
        SelectorKind::Erfs => Box::new(ErfsSelector::default()),
        SelectorKind::None => Box::new(NoSelection),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var("LDR_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .with_context(|| format!("LDR_THREADS must be a count, got {v:?}"))?,
        Err(_) => 0,
    };
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?)
}

fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let ds = load(&args.source, args.seed)?;
    let settings = EvalSettings {
        select_count: resolve_select(args.select, ds.features())?,
        folds: args.folds,
        seed: args.seed,
        knn_k: args.knn_k,
    };
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let base = args.hyper.config(args.seed);

    if args.grid {
        if args.selector != SelectorKind::Ldr {
            bail!("--grid only applies to the ldr selector");
        }
        let cells: Vec<(f64, f64, f64)> = PARAM_GRID
            .iter()
            .flat_map(|&a| {
                PARAM_GRID
                    .iter()
                    .flat_map(move |&b| PARAM_GRID.iter().map(move |&g| (a, b, g)))
            })
            .collect();
        let reports: Vec<Result<EvalReport>> = thread_pool()?.install(|| {
            cells
                .par_iter()
                .map(|&(alpha, beta, gamma)| {
                    let sel = LdrSelector {
                        config: LdrConfig {
                            alpha,
                            beta,
                            gamma,
                            ..base.clone()
                        },
                    };
                    evaluate_selection(&ds, &sel, &settings)
                        .with_context(|| format!("alpha {alpha}, beta {beta}, gamma {gamma}"))
                })
                .collect()
        });
        let mut csv = String::from(
            "alpha,beta,gamma,mean_accuracy,std_accuracy,mean_macro_f1,std_macro_f1\n",
        );
        for (&(a, b, g), report) in cells.iter().zip(reports) {
            let r = report?;
            csv += &format!(
                "{a},{b},{g},{},{},{},{}\n",
                r.mean_accuracy, r.std_accuracy, r.mean_macro_f1, r.std_macro_f1
            );
        }
        write(&args.out.join("grid.csv"), &csv)?;
        println!("wrote {} grid cells", cells.len());
        return Ok(());
    }

    let report = evaluate_selection(&ds, selector(args.selector, base).as_ref(), &settings)?;
    write(
        &args.out.join("eval.json"),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    println!(
        "{} on {}: accuracy {:.4} ± {:.4}, macro-F1 {:.4} ± {:.4}",
        report.selector,
        report.dataset,
        report.mean_accuracy,
        report.std_accuracy,
        report.mean_macro_f1,
        report.std_macro_f1
    );
    Ok(())
}

fn read_scores(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut names = Vec::new();
    let mut table = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let mut cells = record.iter();
        names.push(cells.next().unwrap_or_default().trim().to_owned());
        let row = cells
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .with_context(|| format!("row {}: bad score {c:?}", i + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    Ok((names, table))
}

fn cmd_stats(args: &StatsArgs) -> Result<()> {
    let (names, scores) = read_scores(&args.scores)?;
    let higher = !args.lower_is_better;
    let stats = friedman_stats(&scores, higher)?;
    let ranks = average_ranks(&rank_table(&scores, higher)?);
    let cd = bonferroni_dunn_cd(stats.methods, stats.datasets, args.q);
    println!("methods {} datasets {}", stats.methods, stats.datasets);
    println!("chi2 {:.4}", stats.chi2);
    println!("F {:.4}", stats.f);
    println!("CD {:.4}", cd);
    for (name, r) in names.iter().zip(ranks) {
        println!("rank {name} {r:.4}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Select(a) => cmd_select(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
