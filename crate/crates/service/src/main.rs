use clap::{Parser, Subcommand};
use mg_core::construction::parse;
use mg_service::commands::{execute, instance, parse_pins, Request};
use mg_service::http::{serve, AppState};
use mg_service::{corpus, ServiceError, Settings};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Proves, discovers and relates statements about geometric constructions.
#[derive(Parser)]
#[command(name = "mg", version)]
struct Cli {
    /// Base seed of the numeric instances.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Per-command time budget; defaults to MG_TIMEOUT_MS or 60000.
    #[arg(long, global = true)]
    timeout_ms: Option<u64>,
    /// Keep every free coordinate symbolic.
    #[arg(long, global = true)]
    no_wlog: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one statement, or every statement of the file.
    Prove {
        file: PathBuf,
        #[arg(long)]
        statement: Option<String>,
    },
    /// Conditions on the free points under which a statement holds.
    Conditions {
        file: PathBuf,
        #[arg(long)]
        statement: String,
    },
    /// Certified statements involving one object.
    Discover {
        file: PathBuf,
        #[arg(long)]
        target: String,
    },
    /// Certified statements of one kind over the whole figure.
    DiscoverAll {
        file: PathBuf,
        #[arg(long)]
        kind: String,
    },
    /// Polynomial relation between two measures.
    Relate {
        file: PathBuf,
        #[arg(long)]
        expr1: String,
        #[arg(long)]
        expr2: String,
    },
    /// Certified equality or conjectured bounds on expr1 / expr2.
    Compare {
        file: PathBuf,
        #[arg(long)]
        expr1: String,
        #[arg(long)]
        expr2: String,
    },
    /// Positions of a free point at which a statement holds.
    Locus {
        file: PathBuf,
        #[arg(long)]
        statement: String,
        #[arg(long)]
        tracer: String,
    },
    /// Envelope of a one-parameter family of lines or circles.
    Envelope {
        file: PathBuf,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        moving: Option<String>,
    },
    /// Coordinates of a numeric instance.
    Instance {
        file: PathBuf,
        /// Pinned free points, e.g. `D=1/2,1/3;E=0,1`.
        #[arg(long)]
        pins: Option<String>,
    },
    /// Run every .geo file of a directory against its .expected.json.
    Corpus {
        dir: PathBuf,
        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn fail(e: &ServiceError) -> ExitCode {
    eprintln!("error: {e}");
    print(&e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn run_request(file: &Path, req: Request, settings: &Settings) -> ExitCode {
    let result = corpus::read(file).and_then(|src| Ok(parse(&src)?)).and_then(|c| execute(&c, &req, settings));
    match result {
        Ok(o) => {
            print(&o.body);
            if o.unknown {
                eprintln!("verdict UNKNOWN: resource limit reached");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(&e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut settings = Settings::from_env();
    if let Some(s) = cli.seed {
        settings.seed = s;
    }
    if let Some(t) = cli.timeout_ms {
        settings.timeout_ms = t;
    }
    settings.wlog = !cli.no_wlog;
    let s = &settings;
    match cli.command {
        Command::Prove { file, statement } => run_request(&file, Request::Prove { statement }, s),
        Command::Conditions { file, statement } => run_request(&file, Request::Conditions { statement }, s),
        Command::Discover { file, target } => run_request(&file, Request::Discover { target }, s),
        Command::DiscoverAll { file, kind } => run_request(&file, Request::DiscoverAll { kind }, s),
        Command::Relate { file, expr1, expr2 } => run_request(&file, Request::Relate { expr1, expr2 }, s),
        Command::Compare { file, expr1, expr2 } => run_request(&file, Request::Compare { expr1, expr2 }, s),
        Command::Locus { file, statement, tracer } => run_request(&file, Request::Locus { statement, tracer }, s),
        Command::Envelope { file, curve, moving } => run_request(&file, Request::Envelope { curve, moving }, s),
        Command::Instance { file, pins } => {
            let result = corpus::read(&file)
                .and_then(|src| Ok(parse(&src)?))
                .and_then(|c| instance(&c, s.seed, &parse_pins(pins.as_deref().unwrap_or(""))?));
            match result {
                Ok(v) => {
                    print(&v);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Command::Corpus { dir, json } => match corpus::run(&dir, s) {
            Ok(report) => {
                if json {
                    print(&serde_json::to_value(&report).expect("reports serialize"));
                } else {
                    print!("{}", report.table());
                }
                if report.ok() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
            Err(e) => fail(&e),
        },
        Command::Serve { port, host } => {
            let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
            match runtime.block_on(serve((host, port).into(), AppState::new(settings.clone()))) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
