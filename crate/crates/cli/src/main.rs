mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::{Failure, Outcome};

#[derive(Parser, Debug)]
#[command(name = "thurston-kit", version, about = "Thurston obstruction analysis for combinatorial branched self-covers of the sphere")]
struct Cli {
    /// Print the machine-readable document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the machine-readable document to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the branch data and restriction words of a presentation.
    Validate { file: PathBuf },
    /// Lift one curve and list the preimage components.
    Lift {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Face tree of a multicurve and the preimage topology of each disk face.
    Faces {
        file: PathBuf,
        #[arg(long)]
        multicurve: Option<PathBuf>,
    },
    /// Pull back seed curves until the set of classes stops changing.
    Saturate {
        file: PathBuf,
        /// Seed curve word; repeat for several.
        #[arg(long = "seed", required = true)]
        seeds: Vec<String>,
        #[arg(long, default_value_t = 64)]
        max_iter: usize,
        #[arg(long, default_value_t = 256)]
        max_size: usize,
        #[arg(long, default_value_t = 4096)]
        max_word_len: usize,
    },
    /// Transition matrix, eigenvalue bounds, irreducibility, Levy cycles and case analysis.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        multicurve: Option<PathBuf>,
        /// Depth of the degenerate/removable Levy classification.
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Check that a certified irreducible obstruction of a cubic map with two
    /// fixed critical points contains a Levy cycle.
    Verify {
        file: PathBuf,
        #[arg(long)]
        multicurve: Option<PathBuf>,
    },
    /// Generate instances, saturate from round seed curves and verify every obstruction found.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Overridden by THURSTON_KIT_SEED when that is set.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Levy classification depth; 0 skips classification.
        #[arg(long, default_value_t = 0)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::Cubic)]
        family: FamilyArg,
    },
    /// The shipped example corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    /// List entries and their expected properties.
    List,
    /// Check entries against their expected properties.
    Run { name: Option<String> },
    /// Print the presentation file of an entry.
    Show { name: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Cubic,
    Quadratic,
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Validate { file } => commands::validate(file),
        Command::Lift { file, curve } => commands::lift(file, curve),
        Command::Faces { file, multicurve } => commands::faces(file, multicurve.as_deref()),
        Command::Saturate { file, seeds, max_iter, max_size, max_word_len } => {
            commands::saturate(file, seeds, *max_iter, *max_size, *max_word_len)
        }
        Command::Analyze { file, multicurve, depth } => commands::analyze(file, multicurve.as_deref(), *depth),
        Command::Verify { file, multicurve } => commands::verify(file, multicurve.as_deref()),
        Command::Fuzz { count, seed, depth, family } => {
            let seed = match std::env::var("THURSTON_KIT_SEED") {
                Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("THURSTON_KIT_SEED={v:?} is not an integer")))?,
                Err(_) => *seed,
            };
            let family = match family {
                FamilyArg::Cubic => thurston_core::Family::CubicTwoFixed,
                FamilyArg::Quadratic => thurston_core::Family::Quadratic,
            };
            commands::fuzz(*count, seed, *depth, family)
        }
        Command::Corpus { action } => match action {
            CorpusAction::List => commands::corpus_list(),
            CorpusAction::Run { name } => commands::corpus_run(name.as_deref()),
            CorpusAction::Show { name } => commands::corpus_show(name),
        },
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Lift { .. } => "lift",
        Command::Faces { .. } => "faces",
        Command::Saturate { .. } => "saturate",
        Command::Analyze { .. } => "analyze",
        Command::Verify { .. } => "verify",
        Command::Fuzz { .. } => "fuzz",
        Command::Corpus { .. } => "corpus",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = command_name(&cli.command);
    let (code, text, failed, document) = match run(&cli.command) {
        Ok(out) => (out.code, out.text, false, json!({ "command": name, "exit_code": out.code, "result": out.result })),
        Err(f) => {
            let code = f.exit_code();
            let doc = json!({
                "command": name,
                "exit_code": code,
                "error": { "kind": f.kind(), "message": f.message() },
            });
            (code, format!("error: {}\n", f.message()), true, doc)
        }
    };
    let rendered = serde_json::to_string_pretty(&document).expect("documents are plain JSON");
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, format!("{rendered}\n")) {
            eprintln!("error: cannot write report {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    // A closed pipe downstream (e.g. `| head`) is not an error worth reporting.
    let _ = if cli.json {
        writeln!(std::io::stdout(), "{rendered}")
    } else if failed {
        write!(std::io::stderr(), "{text}")
    } else {
        write!(std::io::stdout(), "{text}")
    };
    ExitCode::from(code)
}
