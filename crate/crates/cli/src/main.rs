use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agent_convergence::analysis::{cmd_analyze, cmd_crosscheck};
use agent_convergence::export::{cmd_export, render, Format};
use agent_convergence::model::check_last_obs_condition;
use agent_convergence::product::build_product;
use agent_convergence::scenario::{list_builders, override_seed, parse_scenario, resolve, Resolved};
use agent_convergence::Error;
use clap::{Args, Parser, Subcommand};

const EXIT_INPUT: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

/// Convergence analysis of finite-state agents in finite environments.
#[derive(Parser)]
#[command(name = "agentconv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the size and distortion sequences and print the report.
    Analyze(RunArgs),
    /// Compare the engine against brute-force oracles.
    Crosscheck {
        #[command(flatten)]
        run: RunArgs,
        /// History depth for the distortion oracle (default: from the scenario).
        #[arg(long)]
        oracle_depth: Option<usize>,
    },
    /// Analyze and write the report to a file.
    Export(RunArgs),
    /// Load and validate a scenario without analyzing it.
    Validate(ScenarioArgs),
    /// List the agent and environment builders scenario files may use.
    ListBuilders,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Replace every seed stored in the scenario.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: ScenarioArgs,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Io(_) | Error::Unsupported(_) => EXIT_INPUT,
        Error::Validation(_) | Error::Invariant(_) => EXIT_VALIDATION,
        Error::Resource(_) => EXIT_RESOURCE,
    }
}

fn load(args: &ScenarioArgs) -> Result<(Resolved, PathBuf), Error> {
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", args.scenario.display())))?;
    let mut scenario = parse_scenario(&text)?;
    if let Some(seed) = args.seed {
        override_seed(&mut scenario, seed);
    }
    let dir = args.scenario.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((resolve(scenario)?, dir))
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::ListBuilders => print!("{}", list_builders()),
        Command::Validate(args) => {
            let (r, _) = load(&args)?;
            let g = build_product(&r.interface, &r.agent, &r.environment)?;
            let (last_obs, _) = check_last_obs_condition(&r.agent);
            println!("scenario      {}", r.scenario.name);
            println!("digest        {}", r.digest);
            println!("agent states  {}", r.agent.num_states());
            println!("env states    {}", r.environment.num_states());
            println!("product nodes {}", g.len());
            println!("last-obs      {last_obs}");
        }
        Command::Analyze(args) => {
            let format: Format = args.format.parse()?;
            let (r, dir) = load(&args.input)?;
            let report = cmd_analyze(&r, args.workers)?;
            match &args.out {
                Some(path) => cmd_export(&report, format, path)?,
                None => print!("{}", render(&report, format)),
            }
            if let Some(csv) = &r.scenario.outputs.csv {
                cmd_export(&report, Format::Csv, dir.join(csv))?;
            }
            if let Some(json) = &r.scenario.outputs.json {
                cmd_export(&report, Format::Json, dir.join(json))?;
            }
        }
        Command::Export(args) => {
            let format: Format = args.format.parse()?;
            let (r, dir) = load(&args.input)?;
            let target = match (&args.out, format) {
                (Some(p), _) => Some(p.clone()),
                (None, Format::Csv) => r.scenario.outputs.csv.as_ref().map(|p| dir.join(p)),
                (None, Format::Json) => r.scenario.outputs.json.as_ref().map(|p| dir.join(p)),
            }
            .ok_or_else(|| Error::Input("export needs --out or an output target in the scenario".into()))?;
            let report = cmd_analyze(&r, args.workers)?;
            cmd_export(&report, format, &target)?;
            eprintln!("wrote {}", target.display());
        }
        Command::Crosscheck { run, oracle_depth } => {
            let (r, _) = load(&run.input)?;
            let depth = oracle_depth.unwrap_or(r.scenario.analysis.oracle_depth);
            let report = cmd_crosscheck(&r, depth, run.workers)?;
            print!("{report}");
            if report.has_mismatch() {
                eprintln!("crosscheck: {} mismatch(es)", report.mismatches().count());
                return Ok(EXIT_MISMATCH);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
