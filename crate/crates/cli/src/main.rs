use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vcosmos_cli::{bundled, run, Options, Scenario};

#[derive(Parser)]
#[command(name = "vcosmos", version, about = "Run enriched-category scenarios and write verification reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file, or a bundled scenario by name.
    Run {
        scenario: String,
        /// Where to write the JSON report [default: <out-dir>/report.json].
        #[arg(long)]
        json: Option<PathBuf>,
        /// Print certificate summaries for every check.
        #[arg(long)]
        verbose: bool,
        /// Largest dimension a constructed object may reach.
        #[arg(long)]
        max_dim: Option<usize>,
        /// Seed for randomized probes.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for report.json and report.txt.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// List the bundled scenarios.
    List,
}

fn load(arg: &str) -> Result<(String, String), String> {
    let path = Path::new(arg);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
        let name = path.file_stem().map_or(arg.to_string(), |s| s.to_string_lossy().into_owned());
        return Ok((name, text));
    }
    bundled::get(arg)
        .map(|t| (arg.to_string(), t.to_string()))
        .ok_or_else(|| format!("{arg}: no such file or bundled scenario"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for (name, _) in bundled::SCENARIOS {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            scenario,
            json,
            verbose,
            max_dim,
            seed,
            out_dir,
        } => {
            let (name, text) = match load(&scenario) {
                Ok(x) => x,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let report = Scenario::parse(&text, &name).and_then(|s| run(&s, &Options { seed, max_dim }));
            let report = match report {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {scenario}: {e}");
                    return ExitCode::from(2);
                }
            };
            let text = report.to_text(verbose);
            let json_path = json.unwrap_or_else(|| out_dir.join("report.json"));
            let written = fs::create_dir_all(&out_dir)
                .and_then(|()| fs::write(out_dir.join("report.txt"), &text))
                .and_then(|()| fs::write(&json_path, report.to_json()));
            if let Err(e) = written {
                eprintln!("error: writing reports: {e}");
                return ExitCode::from(2);
            }
            print!("{text}");
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
