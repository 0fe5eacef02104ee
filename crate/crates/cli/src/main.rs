use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use kpvo::features::{build_dataset, featurize, RankingDataset};
use kpvo::instance::{generate_with_split, read_instance};
use kpvo::io::{read_to_string, write_atomic};
use kpvo::metrics::read_records;
use kpvo::pipeline::{
    evaluate, heuristic_ratios, label_map, load_corpus, run_pipeline, train_candidates, tune_labels,
    tune_shared, write_corpus, write_reports, NamedMethod, PipelineConfig, SPLITS,
};
use kpvo::ranker::{importance_csv, select_model, Candidate, FeatureSchema, ModelKind, RankModel};
use kpvo::tuner::{read_labels, write_labels, TunerConfig};
use kpvo::{compile, enumerate_pf, CostMode, Heuristic, MkpInstance, VariableOrder};

#[derive(Parser)]
#[command(name = "kpvo", version, about = "Pareto frontiers of multiobjective knapsacks via decision diagrams, and learned variable orderings")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random instances.
    Gen(GenArgs),
    /// Compile one instance and enumerate its Pareto frontier.
    Solve(SolveArgs),
    /// Tune property weights to produce label files.
    Tune(TuneArgs),
    /// Write the feature dataset of a corpus.
    Featurize(FeaturizeArgs),
    /// Train ranking models on a dataset.
    Train(TrainArgs),
    /// Two-step model selection on a validation corpus.
    Select(SelectArgs),
    /// Run ordering methods on a corpus and write report tables.
    Eval(EvalArgs),
    /// Rebuild report tables from a records file.
    Report(ReportArgs),
    /// Split-count feature importance of a tree model.
    Importance(ImportanceArgs),
    /// Run every stage from a config file.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Generate all sizes and splits of this config under --out instead.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(short, default_value_t = 3)]
    p: usize,
    #[arg(short, default_value_t = 15)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// First generator seed; instance k uses seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Split tag recorded in the instance ids.
    #[arg(long, default_value = "gen")]
    split: String,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Ordering name (lex, min_weight, max_ratio, random(s), ...) or a file
    /// holding a 1-based variable sequence.
    #[arg(long, default_value = "lex")]
    order: String,
    #[arg(long, default_value = "checks")]
    cost: CostMode,
    /// Also write the frontier CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the diagram's nodes and arcs to stderr.
    #[arg(long)]
    dump: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum TuneMode {
    /// One weight vector per instance (labels).
    Instance,
    /// One shared weight vector for the whole corpus.
    Dataset,
}

#[derive(Args)]
struct TuneArgs {
    #[arg(long, value_enum, default_value_t = TuneMode::Instance)]
    mode: TuneMode,
    #[arg(long)]
    corpus: PathBuf,
    /// Label file to write.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    budget: Option<usize>,
    /// Comma-separated search seeds.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long, default_value = "checks")]
    cost: CostMode,
    #[arg(long)]
    perturbation_sd: Option<f64>,
    #[arg(long)]
    restart_fraction: Option<f64>,
}

#[derive(Args)]
struct FeaturizeArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Label file; rows are left unlabeled without it.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Model kinds, comma-separated, or `all`.
    #[arg(long, default_value = "all")]
    kind: String,
    /// Hyperparameter grid such as `max_depth=3,6;rounds=50,100`.
    #[arg(long, default_value = "")]
    grid: String,
    /// `variable` or `all`; defaults per kind.
    #[arg(long)]
    schema: Option<String>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SelectArgs {
    /// Candidate model files.
    #[arg(long, num_args = 1.., required = true)]
    models: Vec<PathBuf>,
    /// Validation corpus.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, default_value = "checks")]
    cost: CostMode,
    /// Selection report CSV.
    #[arg(long)]
    out: PathBuf,
    /// Copy the winning model here.
    #[arg(long)]
    winner: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Comma-separated methods: lex, min_weight, max_ratio, any ordering
    /// name, smacd:<label file>, ml:<model file>.
    #[arg(long, default_value = "lex,min_weight,max_ratio")]
    methods: String,
    #[arg(long, default_value = "checks")]
    cost: CostMode,
    /// Runs over this many checks count as unsolved.
    #[arg(long)]
    check_limit: Option<u64>,
    /// Random orderings per instance for the heuristic ratio table (0 skips it).
    #[arg(long, default_value_t = 0)]
    k_random: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    records: PathBuf,
    #[arg(long, default_value = "checks")]
    cost: CostMode,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ImportanceArgs {
    model: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    /// TOML config; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's global seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("setting up the thread pool")?;
    }
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Tune(a) => tune(a),
        Command::Featurize(a) => featurize_cmd(a),
        Command::Train(a) => train_cmd(a),
        Command::Select(a) => select(a),
        Command::Eval(a) => eval(a),
        Command::Report(a) => report(a),
        Command::Importance(a) => importance(a),
        Command::Pipeline(a) => pipeline(a),
    }
}

fn gen(a: GenArgs) -> Result<()> {
    if let Some(path) = a.config {
        let mut cfg = PipelineConfig::load(&path)?;
        cfg.output_dir = a.out.clone();
        for &size in &cfg.sizes {
            for split in SPLITS {
                let count = match split {
                    "train" => cfg.train,
                    "validation" => cfg.validation,
                    _ => cfg.test,
                };
                let insts = kpvo::pipeline::generate_split(cfg.seed, size, split, count);
                write_corpus(&insts, &cfg.corpus_dir(size, split))?;
            }
        }
        return Ok(());
    }
    if a.p < 1 || a.n < 1 {
        bail!("need -p >= 1 and -n >= 1");
    }
    let insts: Vec<_> = (0..a.count as u64)
        .map(|k| generate_with_split(a.seed + k, a.p, a.n, &a.split))
        .collect();
    write_corpus(&insts, &a.out)?;
    Ok(())
}

fn resolve_order(spec: &str, inst: &MkpInstance) -> Result<VariableOrder> {
    match spec.parse::<Heuristic>() {
        Ok(h) => Ok(h.order(inst)),
        Err(_) if Path::new(spec).is_file() => {
            let text = read_to_string(Path::new(spec))?;
            let order = VariableOrder::parse_one_based(&text).with_context(|| format!("order file {spec}"))?;
            if order.len() != inst.n() {
                bail!("order file {spec} has {} variables, instance has {}", order.len(), inst.n());
            }
            Ok(order)
        }
        Err(e) => Err(e.into()),
    }
}

fn solve(a: SolveArgs) -> Result<()> {
    let inst = read_instance(&a.instance)?;
    let order = resolve_order(&a.order, &inst)?;
    let bdd = compile(&inst, &order)?;
    if a.dump {
        eprint!("{}", bdd.dump());
    }
    let stats = bdd.stats();
    let rep = enumerate_pf(&bdd, &inst)?;
    let csv = rep.frontier.to_csv();
    print!("{csv}");
    if let Some(out) = &a.out {
        write_atomic(out, csv.as_bytes())?;
    }
    eprintln!(
        "order {order}\nnodes {}\narcs {}\nwidth {}\nfrontier {}\nchecks {}\ncost {}",
        stats.num_nodes,
        stats.num_arcs,
        stats.width,
        rep.frontier.len(),
        rep.checks,
        rep.cost(a.cost)
    );
    Ok(())
}

fn tune(a: TuneArgs) -> Result<()> {
    let insts = load_corpus(&a.corpus)?;
    let mut cfg = TunerConfig { objective: a.cost, ..TunerConfig::default() };
    if let Some(b) = a.budget {
        cfg.budget = b;
    }
    if !a.seeds.is_empty() {
        cfg.seeds = a.seeds;
    }
    if let Some(sd) = a.perturbation_sd {
        cfg.perturbation_sd = sd;
    }
    if let Some(r) = a.restart_fraction {
        cfg.restart_fraction = r;
    }
    let labels = match a.mode {
        TuneMode::Instance => tune_labels(&insts, &cfg)?,
        TuneMode::Dataset => tune_shared(&insts, &cfg)?,
    };
    write_labels(&labels, &a.out)?;
    Ok(())
}

fn featurize_cmd(a: FeaturizeArgs) -> Result<()> {
    let insts = load_corpus(&a.corpus)?;
    let ds = match &a.labels {
        Some(path) => build_dataset(&insts, &label_map(&read_labels(path)?))?,
        None => RankingDataset { rows: insts.iter().flat_map(featurize).collect() },
    };
    ds.write(&a.out)?;
    Ok(())
}

fn parse_kinds(spec: &str) -> Result<Vec<ModelKind>> {
    if spec == "all" {
        return Ok(ModelKind::ALL.to_vec());
    }
    spec.split(',').map(|k| Ok(k.trim().parse()?)).collect()
}

fn train_cmd(a: TrainArgs) -> Result<()> {
    let ds = RankingDataset::read(&a.dataset)?;
    let kinds = parse_kinds(&a.kind)?;
    let schema = a.schema.as_deref().map(str::parse::<FeatureSchema>).transpose()?;
    let trained = train_candidates(&ds, &kinds, |_| a.grid.clone(), schema)?;
    for (c, t) in &trained {
        let path = a.out_dir.join(format!("{}.model", c.name));
        c.model.save(&path)?;
        write_atomic(&a.out_dir.join(format!("{}.log.csv", c.name)), t.log_csv().as_bytes())?;
        let last = t.log.last().map(|r| r.satisfied_pairs).unwrap_or(f64::NAN);
        eprintln!("{}: satisfied training pairs {last:.4}", path.display());
    }
    Ok(())
}

fn select(a: SelectArgs) -> Result<()> {
    let candidates = a
        .models
        .iter()
        .map(|p| {
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(Candidate { name, model: RankModel::load(p)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let insts = load_corpus(&a.corpus)?;
    let labels = label_map(&read_labels(&a.labels)?);
    let report = select_model(&candidates, &insts, &labels, a.cost)?;
    write_atomic(&a.out, report.to_csv().as_bytes())?;
    let w = report.winner();
    eprintln!("selected {} ({}) tau {:.4} cost {}", w.name, w.kind, w.mean_tau, report.winner_cost());
    if let Some(dst) = &a.winner {
        candidates[report.winner].model.save(dst)?;
    }
    Ok(())
}

fn eval(a: EvalArgs) -> Result<()> {
    let insts = load_corpus(&a.corpus)?;
    let methods = a
        .methods
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(NamedMethod::parse)
        .collect::<kpvo::Result<Vec<_>>>()?;
    if methods.is_empty() {
        bail!("no methods given");
    }
    let mut names: HashMap<&str, usize> = HashMap::new();
    for m in &methods {
        *names.entry(&m.name).or_default() += 1;
    }
    if let Some((dup, _)) = names.iter().find(|(_, &c)| c > 1) {
        bail!("method `{dup}` is given more than once");
    }
    let records = evaluate(&insts, &methods, a.check_limit, a.cost)?;
    let ratios = if a.k_random > 0 {
        let mut sizes: Vec<[usize; 2]> = insts.iter().map(|i| [i.p(), i.n()]).collect();
        sizes.sort_unstable();
        sizes.dedup();
        let mut rows = Vec::new();
        for size in sizes {
            let group: Vec<_> = insts.iter().filter(|i| [i.p(), i.n()] == size).cloned().collect();
            rows.extend(heuristic_ratios(&group, size, a.k_random, a.seed, a.cost)?);
        }
        Some(rows)
    } else {
        None
    };
    if !methods.iter().any(|m| m.name == kpvo::metrics::LEX) {
        bail!("eval needs the `lex` method as the baseline of the relative table");
    }
    write_reports(&records, ratios.as_deref(), a.cost, &a.out_dir)?;
    Ok(())
}

fn report(a: ReportArgs) -> Result<()> {
    let records = read_records(&a.records)?;
    write_reports(&records, None, a.cost, &a.out_dir)?;
    Ok(())
}

fn importance(a: ImportanceArgs) -> Result<()> {
    let model = RankModel::load(&a.model)?;
    let csv = importance_csv(&model)?;
    match &a.out {
        Some(out) => write_atomic(out, csv.as_bytes())?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn pipeline(a: PipelineArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(out) = a.out {
        cfg.output_dir = out;
    }
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let outcome = run_pipeline(&cfg)?;
    for s in &outcome.sizes {
        let w = s.selection.winner();
        eprintln!(
            "({},{}): selected {} tau {:.4} validation cost {}",
            s.size[0],
            s.size[1],
            w.name,
            w.mean_tau,
            s.selection.winner_cost()
        );
    }
    eprintln!("reports in {}", cfg.reports_dir().display());
    Ok(())
}
