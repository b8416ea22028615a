use std::collections::BTreeSet;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lv_cli::error::exit;
use lv_cli::run::run_scenario;
use lv_cli::scenario::{find_preset, Analysis, Scenario, ScenarioInput, PRESETS};
use lv_cli::{ConfigError, RunError};
use lv_core::scheme::{PhiFunction, SchemeId};

#[derive(Debug, Parser)]
#[command(
    name = "lvlab",
    version,
    about = "Lotka-Volterra discretization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one trajectory and write CSV, JSON and SVG outputs.
    Simulate(ScenarioArgs),
    /// Simulate and run the selected analyses.
    Analyze {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        analyses: AnalysisArgs,
    },
    /// Run built-in figure presets by name, or `all`.
    Preset {
        #[arg(required = true, value_name = "NAME")]
        names: Vec<String>,
        /// Number of presets run concurrently.
        #[arg(long, default_value = "1")]
        jobs: NonZeroUsize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Print the built-in presets.
    ListPresets,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Euler,
    Mickens,
    Rk4,
}

impl From<SchemeArg> for SchemeId {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Euler => SchemeId::Euler,
            SchemeArg::Mickens => SchemeId::Mickens,
            SchemeArg::Rk4 => SchemeId::ReferenceRK4,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PhiArg {
    Identity,
    Expm1,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReferenceArg {
    Rk4,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output directory.
    #[arg(long, env = "LV_OUT_DIR", default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    #[arg(long, value_enum, default_value = "mickens")]
    scheme: SchemeArg,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.075, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, default_value_t = 0.75, allow_negative_numbers = true)]
    delta: f64,
    /// Step size.
    #[arg(long = "h", default_value_t = 0.01, allow_negative_numbers = true)]
    h: f64,
    /// Denominator function of the Mickens scheme.
    #[arg(long, value_enum, default_value = "identity")]
    phi: PhiArg,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    x0: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    y0: f64,
    #[arg(long, default_value_t = 3000)]
    steps: usize,
    /// Scenario name, used as the output file stem.
    #[arg(long, default_value = "custom")]
    name: String,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct AnalysisArgs {
    #[arg(long)]
    stability: bool,
    #[arg(long)]
    direction: bool,
    #[arg(long)]
    positivity: bool,
    #[arg(long)]
    closure: bool,
    /// Compare against a fine reference run.
    #[arg(long, value_enum)]
    overlay_ref: Option<ReferenceArg>,
    /// Reference step size (default h/100).
    #[arg(long, requires = "overlay_ref", allow_negative_numbers = true)]
    overlay_h: Option<f64>,
}

impl ScenarioArgs {
    fn input(&self, analyses: BTreeSet<Analysis>, reference_h: Option<f64>) -> ScenarioInput {
        ScenarioInput {
            name: self.name.clone(),
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            delta: self.delta,
            scheme: self.scheme.into(),
            h: self.h,
            phi: match self.phi {
                PhiArg::Identity => PhiFunction::Identity,
                PhiArg::Expm1 => PhiFunction::OneMinusExp,
            },
            starts: vec![(self.x0, self.y0)],
            n_steps: self.steps,
            analyses,
            reference_h,
        }
    }
}

impl AnalysisArgs {
    fn selected(&self) -> BTreeSet<Analysis> {
        [
            (self.stability, Analysis::Stability),
            (self.direction, Analysis::Direction),
            (self.positivity, Analysis::Positivity),
            (self.closure, Analysis::Closure),
            (self.overlay_ref.is_some(), Analysis::Overlay),
        ]
        .into_iter()
        .filter_map(|(on, a)| on.then_some(a))
        .collect()
    }
}

fn report_error(context: &str, e: &RunError) {
    eprintln!("lvlab: {context}: {e}");
}

fn run_one(sc: &Scenario, out: &Path) -> i32 {
    match run_scenario(sc, out) {
        Ok(report) => {
            println!(
                "{}: wrote {} trajectory file(s), {}.json and {} to {}",
                sc.name,
                report.runs.len(),
                sc.name,
                report.phase_portrait_file,
                out.display()
            );
            exit::SUCCESS
        }
        Err(e) => {
            report_error(&sc.name, &e);
            e.exit_code()
        }
    }
}

fn resolve_presets(names: &[String]) -> Result<Vec<Scenario>, ConfigError> {
    let mut selected = Vec::new();
    for name in names {
        if name == "all" {
            selected.extend(PRESETS.iter());
        } else {
            let preset = find_preset(name).ok_or_else(|| {
                ConfigError::new(format!(
                    "unknown preset `{name}` (see `lvlab list-presets`)"
                ))
            })?;
            selected.push(preset);
        }
    }
    let mut seen = BTreeSet::new();
    selected.retain(|p| seen.insert(p.name));
    Ok(selected.into_iter().map(|p| p.scenario()).collect())
}

/// Runs scenarios on up to `jobs` threads; status lines and the returned
/// code follow the input order regardless of completion order.
fn run_many(scenarios: &[Scenario], out: &Path, jobs: usize) -> i32 {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<String, RunError>>>> =
        Mutex::new((0..scenarios.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(scenarios.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(sc) = scenarios.get(i) else { break };
                let r = run_scenario(sc, out).map(|rep| rep.phase_portrait_file);
                results.lock().unwrap_or_else(|e| e.into_inner())[i] = Some(r);
            });
        }
    });
    let results = results.into_inner().unwrap_or_else(|e| e.into_inner());
    let mut code = exit::SUCCESS;
    for (sc, r) in scenarios.iter().zip(results) {
        match r {
            Some(Ok(svg)) => println!("{}: ok ({svg})", sc.name),
            Some(Err(e)) => {
                report_error(&sc.name, &e);
                if code == exit::SUCCESS {
                    code = e.exit_code();
                }
            }
            None => unreachable!("every scenario index is claimed by a worker"),
        }
    }
    code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() {
                exit::INVALID_CONFIG
            } else {
                exit::SUCCESS
            };
            return ExitCode::from(code as u8);
        }
    };
    let code = match cli.command {
        Command::ListPresets => {
            for p in PRESETS {
                println!("{:<24} {}", p.name, p.description);
            }
            exit::SUCCESS
        }
        Command::Simulate(args) => match args.input(BTreeSet::new(), None).validate() {
            Ok(sc) => run_one(&sc, &args.out.out),
            Err(e) => {
                report_error("simulate", &e.into());
                exit::INVALID_CONFIG
            }
        },
        Command::Analyze { scenario, analyses } => {
            match scenario
                .input(analyses.selected(), analyses.overlay_h)
                .validate()
            {
                Ok(sc) => run_one(&sc, &scenario.out.out),
                Err(e) => {
                    report_error("analyze", &e.into());
                    exit::INVALID_CONFIG
                }
            }
        }
        Command::Preset { names, jobs, out } => match resolve_presets(&names) {
            Ok(scenarios) => run_many(&scenarios, &out.out, jobs.get()),
            Err(e) => {
                report_error("preset", &e.into());
                exit::INVALID_CONFIG
            }
        },
    };
    ExitCode::from(code as u8)
}
