//! Command-line front end for bounded tree edit distance.

pub mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tedk::engine::{self, EngineConfig};
use tedk::gen::{self, Plant};
use tedk::{ted_exact, ted_threshold, Forest, Interner, TedValue};

/// Exit status for input that does not parse.
pub const EXIT_PARSE: i32 = 2;
/// Exit status for invalid flags or arguments.
pub const EXIT_USAGE: i32 = 3;
/// Exit status when `--verify` finds a disagreement or a self-test fails.
pub const EXIT_FAILED: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "tedk", version, about = "Bounded tree edit distance of labeled ordered forests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute ted≤k of two forests.
    Compute(ComputeArgs),
    /// Compute the distance with the exact dynamic program.
    Oracle(OracleArgs),
    /// Generate a random forest, optionally with a planted edit script.
    Gen(GenArgs),
    /// Run the acceptance suites.
    Selftest {
        #[arg(value_enum, default_value_t = selftest::Level::Quick)]
        level: selftest::Level,
    },
    /// Time the engine on identical and near-identical forests; prints CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Paren,
    Json,
}

/// `auto` or a fixed number of rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounds {
    Auto,
    Fixed(usize),
}

impl FromStr for Rounds {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Rounds::Auto);
        }
        s.parse()
            .map(Rounds::Fixed)
            .map_err(|_| format!("expected `auto` or a non-negative integer, got `{s}`"))
    }
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    pub f: PathBuf,
    pub g: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "auto")]
    pub rounds: Rounds,
    #[arg(long, value_enum, default_value_t = Format::Paren)]
    pub format: Format,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    /// Use the exact dynamic program instead of the engine.
    #[arg(long, conflicts_with = "verify")]
    pub oracle: bool,
    /// Run the engine and the exact dynamic program and compare.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub f: PathBuf,
    pub g: PathBuf,
    /// Threshold; the unbounded distance is printed when omitted.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Paren)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlantArg {
    None,
    Horizontal,
    Vertical,
    Both,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 16)]
    pub height: usize,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub sigma: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Planted periodicity, sized for threshold `--k`.
    #[arg(long, value_enum, default_value_t = PlantArg::None)]
    pub plant: PlantArg,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Number of random edits applied to obtain the second forest.
    #[arg(long)]
    pub edits: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Paren)]
    pub format: Format,
    /// Output file for the first forest.
    #[arg(long)]
    pub out: PathBuf,
    /// Output file for the second forest (requires `--edits` or `--plant`).
    #[arg(long)]
    pub out_g: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Forest sizes.
    #[arg(long, value_delimiter = ',', default_value = "100000,200000,400000")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Random edits between the two forests.
    #[arg(long, default_value_t = 0)]
    pub edits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    /// Lines still printed on standard output.
    pub output: Vec<String>,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            output: Vec::new(),
        }
    }
}

fn read_forest(path: &Path, format: Format, interner: &mut Interner) -> Result<Forest, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let parsed = match format {
        Format::Paren => tedk::parse_paren_text(&text, interner),
        Format::Json => tedk::parse_json(&text, interner),
    };
    parsed.map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn write_forest(path: &Path, f: &Forest, format: Format, interner: &Interner) -> Result<(), Failure> {
    let mut text = match format {
        Format::Paren => tedk::to_paren_text(f, interner),
        Format::Json => tedk::to_json(f, interner),
    };
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn show(v: TedValue) -> String {
    match v {
        TedValue::Finite(d) => d.to_string(),
        TedValue::Infinity => "INF".into(),
    }
}

/// Runs one invocation, returning the lines printed on standard output.
pub fn run(cli: Cli) -> Result<Vec<String>, Failure> {
    match cli.command {
        Command::Compute(a) => compute(a),
        Command::Oracle(a) => oracle(a),
        Command::Gen(a) => generate(a),
        Command::Selftest { level } => {
            let results = selftest::run_all(level);
            let lines: Vec<String> = results.iter().map(|r| r.line()).collect();
            if results.iter().all(|r| r.passed) {
                Ok(lines)
            } else {
                let mut f = Failure::new(EXIT_FAILED, "self-test failed");
                f.output = lines;
                Err(f)
            }
        }
        Command::Bench(a) => bench(a),
    }
}

fn compute(a: ComputeArgs) -> Result<Vec<String>, Failure> {
    let mut interner = Interner::new();
    let f = read_forest(&a.f, a.format, &mut interner)?;
    let g = read_forest(&a.g, a.format, &mut interner)?;
    if a.oracle {
        let v = ted_threshold(&f, &g, a.k);
        return Ok(vec![format!("{}\t{}\t{}\t0", show(v), a.k, a.seed)]);
    }
    let cfg = EngineConfig {
        k: a.k,
        seed: a.seed,
        rounds: match a.rounds {
            Rounds::Auto => None,
            Rounds::Fixed(r) => Some(r),
        },
        height_cap: None,
        threads: a.threads as usize,
        shortcuts: true,
    };
    let report = engine::run(&f, &g, &cfg).map_err(|e| Failure::new(EXIT_FAILED, e.to_string()))?;
    log::info!(
        "route {:?}, reduced sizes {:?}, timings {:?}",
        report.route,
        report.reduced,
        report.timings
    );
    let line = format!("{}\t{}\t{}\t{}", show(report.value), a.k, a.seed, report.rounds.len());
    if a.verify {
        let want = ted_threshold(&f, &g, a.k);
        if want != report.value {
            return Err(Failure::new(
                EXIT_FAILED,
                format!("verification failed: engine {} oracle {}", show(report.value), show(want)),
            ));
        }
    }
    Ok(vec![line])
}

fn oracle(a: OracleArgs) -> Result<Vec<String>, Failure> {
    let mut interner = Interner::new();
    let f = read_forest(&a.f, a.format, &mut interner)?;
    let g = read_forest(&a.g, a.format, &mut interner)?;
    let v = match a.k {
        Some(k) => show(ted_threshold(&f, &g, k)),
        None => ted_exact(&f, &g).to_string(),
    };
    Ok(vec![v])
}

fn generate(a: GenArgs) -> Result<Vec<String>, Failure> {
    let paired = a.edits.is_some() || a.plant != PlantArg::None;
    if paired != a.out_g.is_some() {
        return Err(Failure::new(
            EXIT_USAGE,
            "--out-g is required exactly when --edits or --plant is given",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let edits = a.edits.unwrap_or(0);
    let (f, g) = match a.plant {
        PlantArg::None => {
            let f = gen::random_forest(&mut rng, a.n, a.height, a.sigma);
            let g = gen::edit_script(&mut rng, &f, edits, a.sigma);
            (f, g)
        }
        p => {
            let plant = match p {
                PlantArg::Horizontal => Plant::Horizontal,
                PlantArg::Vertical => Plant::Vertical,
                _ => Plant::Both,
            };
            gen::planted_pair(&mut rng, a.n, a.k.max(1), plant, a.sigma, edits)
        }
    };
    let interner = Interner::new();
    write_forest(&a.out, &f, a.format, &interner)?;
    if let Some(path) = &a.out_g {
        write_forest(path, &g, a.format, &interner)?;
        return Ok(vec![format!("{}\t{}\t{}", f.len(), g.len(), edits)]);
    }
    Ok(vec![f.len().to_string()])
}

fn bench(a: BenchArgs) -> Result<Vec<String>, Failure> {
    let mut lines = vec!["n,k,wall_ms,reduction_ms,anchor_ms,rounds_ms,residual_ms,value".to_string()];
    let ms = |d: std::time::Duration| format!("{:.3}", d.as_secs_f64() * 1e3);
    for &n in &a.n {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let f = gen::random_forest(&mut rng, n, 40, 4);
        let g = gen::edit_script(&mut rng, &f, a.edits, 4);
        let mut cfg = EngineConfig::new(a.k);
        cfg.seed = a.seed;
        cfg.threads = a.threads as usize;
        cfg.shortcuts = false;
        let start = Instant::now();
        let r = engine::run(&f, &g, &cfg).map_err(|e| Failure::new(EXIT_FAILED, e.to_string()))?;
        let wall = start.elapsed();
        lines.push(format!(
            "{n},{},{},{},{},{},{},{}",
            a.k,
            ms(wall),
            ms(r.timings.reduction),
            ms(r.timings.anchor),
            ms(r.timings.solve),
            ms(r.timings.residual),
            show(r.value)
        ));
    }
    Ok(lines)
}
