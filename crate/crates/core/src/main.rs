use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use flatcoh::cli::{self, Command, Options, EXIT_OK, EXIT_USAGE};
use flatcoh::corpus;
use flatcoh::homology::Coefficients;
use flatcoh::intersection::PerversityChoice;
use flatcoh::io::{complex_file, parse_complex};
use flatcoh::normalization::normalize;

#[derive(Parser, Debug)]
#[command(name = "flatcoh", version, about = "Pseudomanifolds, intersection homology and flat norms")]
struct Args {
    /// Print only the JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// top | zero | custom:<p(2)>,<p(3)>,...
    #[arg(long, global = true, default_value = "top")]
    perversity: PerversityChoice,
    /// int | rat
    #[arg(long, global = true, default_value = "int")]
    coefficients: Coefficients,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Pseudomanifold and normality tests.
    Check { input: String },
    Homology { input: String },
    Cohomology { input: String },
    /// Intersection homology for the chosen perversity.
    Ih { input: String },
    /// Normalize; `-o` also writes the normalized complex file.
    Normalize {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Flat norm of a chain (inline JSON or a path).
    Flatnorm {
        input: String,
        #[arg(long)]
        chain: String,
    },
    /// Compare top-perversity IH with the cohomology of the normalization.
    Verify { input: String },
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

#[derive(Subcommand, Debug)]
enum CorpusCmd {
    List,
    Emit { name: String },
}

fn read_input(path: &str) -> std::io::Result<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read(path)
    }
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return exit(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };

    let (command, input, chain, output) = match args.command {
        Cmd::Corpus(CorpusCmd::List) => {
            for name in corpus::NAMES {
                let entry = corpus::entry(name).expect("listed");
                if args.json {
                    println!("{}", serde_json::json!({ "name": name, "f_vector": entry.complex.f_vector() }));
                } else {
                    println!("{name:<22} {:?}", entry.complex.f_vector());
                }
            }
            return exit(EXIT_OK);
        }
        Cmd::Corpus(CorpusCmd::Emit { name }) => match corpus::entry(&name) {
            Some(entry) => {
                print!("{}", cli::emit_complex(&entry.complex));
                return exit(EXIT_OK);
            }
            None => {
                eprintln!("error: unknown corpus entry {name:?} (try `flatcoh corpus list`)");
                return exit(EXIT_USAGE);
            }
        },
        Cmd::Check { input } => (Command::Check, input, None, None),
        Cmd::Homology { input } => (Command::Homology, input, None, None),
        Cmd::Cohomology { input } => (Command::Cohomology, input, None, None),
        Cmd::Ih { input } => (Command::Ih, input, None, None),
        Cmd::Normalize { input, output } => (Command::Normalize, input, None, output),
        Cmd::Flatnorm { input, chain } => (Command::Flatnorm, input, Some(chain), None),
        Cmd::Verify { input } => (Command::Verify, input, None, None),
    };

    let bytes = match read_input(&input) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read {input}: {e}");
            return exit(EXIT_USAGE);
        }
    };
    let chain = match chain {
        Some(c) if c.trim_start().starts_with('{') => Some(c),
        Some(path) => match std::fs::read_to_string(&path) {
            Ok(text) => Some(text),
            Err(e) => {
                eprintln!("error: cannot read chain {path}: {e}");
                return exit(EXIT_USAGE);
            }
        },
        None => None,
    };
    let opts = Options { perversity: args.perversity, coefficients: args.coefficients, chain };
    let outcome = cli::run(command, &bytes, &opts);

    if let (Some(path), Some(_)) = (&output, &outcome.report) {
        // Re-derive the file rather than picking fields out of the report.
        let written = std::str::from_utf8(&bytes)
            .ok()
            .and_then(|t| parse_complex(t).ok())
            .and_then(|p| normalize(&p.complex).ok())
            .map(|n| {
                let mut file = complex_file(&n.normalized);
                file.projection = Some(n.projection.iter().map(|(a, b)| (a.key(), b.key())).collect());
                serde_json::to_string_pretty(&file).expect("serializes") + "\n"
            });
        if let Some(text) = written {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return exit(EXIT_USAGE);
            }
        }
    }

    let mut stdout = std::io::stdout().lock();
    if let Some(report) = &outcome.report {
        if args.json {
            let _ = stdout.write_all(report.to_json().as_bytes());
        } else {
            for w in &report.warnings {
                let _ = writeln!(stdout, "warning: {w}");
            }
            let _ = stdout.write_all(outcome.human.as_bytes());
        }
    }
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
    }
    exit(outcome.exit_code)
}
