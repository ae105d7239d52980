mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ppbwt", version, about = "Online parameterized BWT index: build, query, verify, bench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Input text file (UTF-8; every code point is one symbol)
    #[arg(short = 'i', long = "input")]
    pub input: PathBuf,
    /// Alphabet file, or `infer` for the built-in rule
    #[arg(short = 'a', long = "alphabet", default_value = "infer")]
    pub alphabet: String,
    /// Strip trailing newline characters from the input
    #[arg(long)]
    pub trim: bool,
    /// Locate sampling period
    #[arg(short = 's', long = "sample-rate", default_value_t = ppbwt::DEFAULT_SAMPLE_RATE)]
    pub sample_rate: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an index by prepending the input right to left and save it
    Build {
        #[command(flatten)]
        input: InputArgs,
        /// Snapshot to write
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Maximum text length the snapshot may grow to (default: input length + 1)
        #[arg(long)]
        capacity: Option<usize>,
        /// Print F, L, LCP and the suffix ranks
        #[arg(long)]
        dump: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count occurrences of patterns
    Count(QueryArgs),
    /// List the 1-based start positions of occurrences of patterns
    Locate {
        #[command(flatten)]
        query: QueryArgs,
        /// Report at most this many positions per pattern
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Build online and compare every stage with the brute-force reference
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Compare only after every N-th prepend (and after the last)
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
    /// Time builds and queries on random p-strings, as CSV
    Bench {
        /// Comma-separated text lengths
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Number of parameter symbols
        #[arg(long, default_value_t = 8)]
        sigma_p: u32,
        /// Number of static symbols
        #[arg(long, default_value_t = 8)]
        sigma_s: u32,
        /// Fraction of parameter symbols in the text
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Queries per size
        #[arg(long, default_value_t = 200)]
        queries: usize,
        /// Pattern length
        #[arg(long, default_value_t = 8)]
        pattern_len: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Locate sampling period
        #[arg(short = 's', long = "sample-rate", default_value_t = ppbwt::DEFAULT_SAMPLE_RATE)]
        sample_rate: usize,
    },
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    /// Snapshot written by `build`
    #[arg(short = 'x', long = "index")]
    pub index: PathBuf,
    /// Pattern (repeatable)
    #[arg(short = 'p', long = "pattern")]
    pub patterns: Vec<String>,
    /// File with one pattern per line
    #[arg(long)]
    pub patterns_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = &mut std::io::stdout().lock();
    let result = match cli.command {
        Command::Build { input, output, capacity, dump, format } => {
            commands::build(stdout, &input, &output, capacity, dump, format)
        }
        Command::Count(q) => commands::query(stdout, &q, None, false),
        Command::Locate { query, limit } => commands::query(stdout, &query, limit, true),
        Command::Verify { input, every } => commands::verify(stdout, &input, every),
        Command::Bench { sizes, sigma_p, sigma_s, density, queries, pattern_len, seed, sample_rate } => {
            let shape = bench::Shape { sigma_s, sigma_p, density, queries, pattern_len, seed, sample_rate };
            bench::run(stdout, &sizes, &shape)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
