mod cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "higgins")]
#[command(about = "Coset automatic structures and Higgins normal forms for graphs of groups")]
#[command(version)]
struct Cli {
    /// Worker threads for certifier sweeps
    #[arg(long, global = true, env = "HIGGINS_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LanguageKind {
    Higgins,
    Coset,
    Component,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CertifyWhat {
    Coset,
    Automatic,
    Hypotheses,
    SyncFilter,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TheoremArg {
    Async,
    Sync,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GeneratorsArg {
    /// x, y from xyx = yxy
    Xy,
    /// a, b from a^2 = b^3
    Ab,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration and its graph of groups
    Validate { config: PathBuf },

    /// Normal form of a word in the fundamental group
    Nf {
        config: PathBuf,
        #[arg(long)]
        word: String,
        /// Base vertex (default: the first declared vertex)
        #[arg(long)]
        base: Option<String>,
        /// Coset normal form for the subgroup of this edge
        #[arg(long)]
        coset_edge: Option<String>,
        /// Print the cascade log
        #[arg(long)]
        trace: bool,
    },

    /// List a language in shortlex order
    Enum {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "higgins")]
        language: LanguageKind,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long)]
        base: Option<String>,
        /// Edge for `--language coset`
        #[arg(long)]
        coset_edge: Option<String>,
        /// Vertex for `--language component`
        #[arg(long)]
        vertex: Option<String>,
        /// Subgroup for `--language component`: list its coset language
        #[arg(long)]
        subgroup: Option<String>,
        /// Check that no two listed words are equal (or in the same coset)
        #[arg(long)]
        check_unique: bool,
    },

    /// Run certificate sweeps and hypothesis checks
    Certify {
        config: PathBuf,
        #[arg(long, value_enum)]
        what: CertifyWhat,
        /// Defaults to `radius` in [params], then 4
        #[arg(long)]
        radius: Option<usize>,
        /// Crossover constant; also runs limited crossover for `--what coset`
        #[arg(long)]
        lambda: Option<usize>,
        /// Stability constant
        #[arg(long)]
        mu: Option<usize>,
        #[arg(long, value_enum, default_value = "async")]
        theorem: TheoremArg,
        /// Only this [coset] declaration
        #[arg(long)]
        coset: Option<String>,
        /// Also write the report here
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// The trefoil crossover experiment
    Experiment {
        #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4, 5])]
        radius: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        lambda_max: usize,
        #[arg(long, value_enum, default_value = "xy")]
        generators: GeneratorsArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Automaton operations on DFA text files
    Fsa {
        #[command(subcommand)]
        op: FsaOp,
    },
}

#[derive(Subcommand)]
pub enum FsaOp {
    Min {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Concat {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Intersect {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Enum {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Validate { config } => cmd::validate(&config),
        Command::Nf {
            config,
            word,
            base,
            coset_edge,
            trace,
        } => cmd::normal_form(&config, &word, base.as_deref(), coset_edge.as_deref(), trace),
        Command::Enum {
            config,
            language,
            max_len,
            base,
            coset_edge,
            vertex,
            subgroup,
            check_unique,
        } => cmd::enumerate(
            &config,
            cmd::EnumArgs {
                language,
                max_len,
                base,
                coset_edge,
                vertex,
                subgroup,
                check_unique,
            },
        ),
        Command::Certify {
            config,
            what,
            radius,
            lambda,
            mu,
            theorem,
            coset,
            out,
        } => cmd::certify(
            &config,
            cmd::CertifyArgs {
                what,
                radius,
                lambda,
                mu,
                theorem,
                coset,
                out,
            },
        ),
        Command::Experiment {
            radius,
            lambda_max,
            generators,
            out,
        } => cmd::experiment(&radius, lambda_max, generators, out.as_deref()),
        Command::Fsa { op } => cmd::fsa(op),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
