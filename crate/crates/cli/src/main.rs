use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use clonebound::Tolerances;
use clonebound_cli::{run, CliError, Command, OutputFormat, Params, RunConfig, Sweep};

#[derive(Clone, Copy, ValueEnum)]
enum CommandArg {
    /// Relative-error lower bound for a pure pair or a scenario file
    Bound,
    /// The four optimality criteria for two equiprobable pure states
    Criteria,
    /// Asymptotic expansions of the criteria near f = 0 and f = 1
    Table1,
    /// Build the optimal cloning circuit and verify it by simulation
    Simulate,
    /// Solve a sine-sum program and compare it with the pairwise bound
    Optimize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Relative-error bounds and optimal circuits for state-dependent cloning.
///
/// Angles are in radians. Tolerance overrides are read from CLONEBOUND_TOL as
/// comma-separated key=value pairs, e.g. CLONEBOUND_TOL="saturation=1e-9".
#[derive(Parser)]
#[command(name = "clonebound", version, about)]
struct Cli {
    command: CommandArg,

    /// Number of originals
    #[arg(long = "N")]
    originals: Option<usize>,
    /// Number of copies
    #[arg(long = "L")]
    copies: Option<usize>,
    /// Half-angle of the input pair, |phi_+-> = cos a |0> +- sin a |1>
    #[arg(long)]
    alpha0: Option<f64>,
    /// Half-angle of the ancilla pair (default 0, no ancilla information)
    #[arg(long)]
    theta: Option<f64>,
    /// Overlap of the two input states
    #[arg(long)]
    f: Option<f64>,
    /// Overlap of the two ancilla states (default 1)
    #[arg(long)]
    phi: Option<f64>,
    /// Prior of the second state (default 0.5)
    #[arg(long = "p-minus")]
    p_minus: Option<f64>,
    /// Distance from the ends of the overlap range for table1 (default 1e-3)
    #[arg(long)]
    eps: Option<f64>,
    /// Scenario JSON file
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Sine-sum program JSON file (optimize)
    #[arg(long)]
    program: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Sweep one parameter: name:start:stop:steps
    #[arg(long)]
    sweep: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Cli {
    fn config(&self) -> Result<RunConfig, CliError> {
        let command = match self.command {
            CommandArg::Bound => Command::Bound,
            CommandArg::Criteria => Command::Criteria,
            CommandArg::Table1 => Command::Table1,
            CommandArg::Simulate => Command::Simulate,
            CommandArg::Optimize => Command::Optimize,
        };
        Ok(RunConfig {
            command,
            input_path: self.scenario.clone(),
            program_path: self.program.clone(),
            output_format: match self.format {
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Csv => OutputFormat::Csv,
            },
            sweep: self.sweep.as_deref().map(str::parse::<Sweep>).transpose()?,
            tolerances: Tolerances::from_env().map_err(|e| CliError::Parse(e.to_string()))?,
            params: Params {
                originals: self.originals,
                copies: self.copies,
                alpha0: self.alpha0,
                theta: self.theta,
                f: self.f,
                phi: self.phi,
                p_minus: self.p_minus,
                eps: self.eps,
            },
        })
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let output = match cli.config().and_then(|c| run(&c)) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &output.text)
            .map_err(|source| CliError::Io { path: path.clone(), source }),
        None => std::io::stdout()
            .write_all(output.text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    };
    if let Err(e) = written {
        return fail(&e);
    }
    for v in &output.violations {
        eprintln!("invariant violated: {v}");
    }
    ExitCode::from(output.exit_code())
}
