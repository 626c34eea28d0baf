use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use josabpp::bench::{self, BenchRow, SelectionRow};
use josabpp::exact::{exact_solve, ExactLimits};
use josabpp::generator::{generate, GenParams, ManifestEntry, Preset};
use josabpp::{load_instance, save_instance, solve, validate, Algorithm, Instance, Solution, SolverConfig};

const SCHEMA_NOTE: &str = "\
Instance and solution files are UTF-8 JSON carrying \"format_version\": \"1.0\"; \
files with another major version are rejected.

Exit codes: 0 success, 1 invalid input or infeasible solution, 2 usage error.";

#[derive(Parser)]
#[command(name = "josabpp", version, about = "Warehouse order selection, batching and picking toolkit", after_help = SCHEMA_NOTE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded benchmark instances and a manifest.
    Generate(GenerateArgs),
    /// Solve an instance with DGA or RDGA.
    Solve {
        #[arg(long, value_parser = parse_algorithm)]
        algorithm: Algorithm,
        #[arg(long)]
        instance: PathBuf,
        /// RDGA random seed; recorded for DGA too.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Solution JSON path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution; prints a JSON report, exits 1 when infeasible.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Solve a tiny instance to optimality by enumeration.
    Exact {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = josabpp::exact::MAX_ITEMS)]
        max_items: usize,
        #[arg(long, default_value_t = josabpp::exact::MAX_ORDER_ARTICLES)]
        max_order_articles: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every algorithm on every instance file of a directory.
    Bench {
        #[arg(long)]
        instances: PathBuf,
        /// Comma-separated list of dga, rdga.
        #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, default_value = "dga,rdga")]
        algorithms: Vec<Algorithm>,
        /// Seed handed to every solver run.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Threads for validating finished solutions; solver runs stay serial.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce an experiment.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Subcommand)]
enum Experiment {
    /// Full order pool versus pools trimmed down to the item goal.
    Selection {
        /// May be given several times.
        #[arg(long, required = true)]
        instance: Vec<PathBuf>,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        /// Trimmed pool r uses seed + r.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_preset)]
    preset: Preset,
    /// Instance k uses seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    orders_per_batch: Option<usize>,
    #[arg(long)]
    picklist_volume: Option<f64>,
    #[arg(long)]
    ig_ratio: Option<f64>,
    #[arg(long)]
    items: Option<usize>,
    #[arg(long)]
    orders: Option<usize>,
    #[arg(long)]
    zones: Option<usize>,
    #[arg(long)]
    aisles: Option<u32>,
    #[arg(long)]
    racks: Option<u32>,
    #[arg(long)]
    articles: Option<usize>,
    #[arg(long)]
    mean_order_size: Option<f64>,
    #[arg(long)]
    max_order_size: Option<usize>,
    #[arg(long)]
    volume_min: Option<u32>,
    #[arg(long)]
    volume_max: Option<u32>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse()
}

fn read_instance(path: &Path) -> Result<Instance> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    load_instance(BufReader::new(file)).with_context(|| format!("loading {}", path.display()))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn run_generate(args: GenerateArgs) -> Result<()> {
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut manifest = Vec::with_capacity(args.count);
    for k in 0..args.count {
        let mut params = GenParams::preset(args.preset, args.seed.wrapping_add(k as u64));
        params.name = format!("{}-{k}", args.preset);
        params.orders_per_batch = args.orders_per_batch.unwrap_or(params.orders_per_batch);
        params.picklist_volume = args.picklist_volume.unwrap_or(params.picklist_volume);
        params.ig_ratio = args.ig_ratio.unwrap_or(params.ig_ratio);
        params.items = args.items.unwrap_or(params.items);
        params.orders = args.orders.unwrap_or(params.orders);
        params.zones = args.zones.unwrap_or(params.zones);
        params.aisles = args.aisles.unwrap_or(params.aisles);
        params.racks = args.racks.unwrap_or(params.racks);
        params.articles = args.articles.unwrap_or(params.articles);
        params.mean_order_size = args.mean_order_size.unwrap_or(params.mean_order_size);
        params.max_order_size = args.max_order_size.unwrap_or(params.max_order_size);
        params.volume_range = (
            args.volume_min.unwrap_or(params.volume_range.0),
            args.volume_max.unwrap_or(params.volume_range.1),
        );

        let instance = generate(&params)?;
        let file = format!("{}.json", instance.name());
        let mut sink = create(&args.out.join(&file))?;
        save_instance(&instance, &mut sink)?;
        sink.flush()?;
        eprintln!(
            "{}: {} items, {} orders, {} total order articles, IG {}",
            instance.name(),
            instance.items().len(),
            instance.orders().len(),
            instance.total_order_articles(),
            instance.item_goal()
        );
        manifest.push(ManifestEntry::new(&params, &instance, file));
    }
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    write_text(Some(&args.out.join("manifest.json")), &text)
}

/// Instance files of a directory in name order, skipping the manifest.
fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    files.retain(|p| {
        p.extension().is_some_and(|e| e == "json") && p.file_name().is_some_and(|n| n != "manifest.json")
    });
    files.sort();
    if files.is_empty() {
        bail!("no instance files in {}", dir.display());
    }
    Ok(files)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate(args) => run_generate(args)?,
        Command::Solve {
            algorithm,
            instance,
            seed,
            out,
        } => {
            let instance = read_instance(&instance)?;
            let solution = solve(&instance, &SolverConfig { algorithm, seed })?;
            write_text(out.as_deref(), &solution.to_json())?;
        }
        Command::Validate { instance, solution } => {
            let instance = read_instance(&instance)?;
            let file = File::open(&solution).with_context(|| format!("opening {}", solution.display()))?;
            let solution = Solution::from_json(BufReader::new(file))?;
            let report = validate(&instance, &solution);
            write_text(None, &report.to_json())?;
            eprint!("{report}");
            if !report.feasible {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Exact {
            instance,
            max_items,
            max_order_articles,
            out,
        } => {
            let instance = read_instance(&instance)?;
            let limits = ExactLimits {
                max_total_order_articles: max_order_articles,
                max_items,
            };
            let solution = exact_solve(&instance, &limits)?;
            write_text(out.as_deref(), &solution.to_json())?;
        }
        Command::Bench {
            instances,
            algorithms,
            seed,
            jobs,
            out,
        } => {
            let instances = instance_files(&instances)?
                .iter()
                .map(|p| read_instance(p))
                .collect::<Result<Vec<_>>>()?;
            let configs: Vec<SolverConfig> = algorithms
                .into_iter()
                .map(|algorithm| SolverConfig { algorithm, seed })
                .collect();
            let rows: Vec<BenchRow> = bench::run_benchmark(&instances, &configs, jobs)?;
            bench::write_csv(&rows, create(&out)?)?;
            print!("{}", bench::format_bench_table(&rows));
        }
        Command::Experiment(Experiment::Selection {
            instance,
            repeats,
            seed,
            out,
        }) => {
            let mut rows: Vec<SelectionRow> = Vec::new();
            for path in &instance {
                let instance = read_instance(path)?;
                rows.push(bench::run_selection_study(&instance, repeats, seed)?);
            }
            bench::write_csv(&rows, create(&out)?)?;
            print!("{}", bench::format_selection_table(&rows));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            for cause in err.chain().skip(1) {
                eprintln!("  caused by: {cause}");
            }
            ExitCode::from(1)
        }
    }
}
