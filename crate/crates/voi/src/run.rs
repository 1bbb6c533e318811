use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use voi_core::cases::ashp::{build_ashp_problem, AshpParams};
use voi_core::cases::gshp::{build_gshp_problem_with, synthesize_load, GshpParams};
use voi_core::cases::ventilation::{build_ventilation_problem, VentilationParams};
use voi_core::{solve_exact, DecisionProblem, Execution, MonteCarlo, TraceRow, VoiEstimate};

use crate::args::{Format, RunArgs};
use crate::error::CliError;
use crate::load_csv::read_load_profile_file;
use crate::overrides;
use crate::report::{trace_csv, ResultDocument};
use crate::tabular::parse_tabular;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseKind {
    Ventilation,
    Ashp,
    Gshp,
    Tabular(PathBuf),
}

impl CaseKind {
    fn parse(args: &RunArgs) -> Result<Self, CliError> {
        let kind = match args.case.as_str() {
            "ventilation" => CaseKind::Ventilation,
            "ashp" => CaseKind::Ashp,
            "gshp" => CaseKind::Gshp,
            "tabular" => CaseKind::Tabular(
                args.path.clone().ok_or_else(|| CliError::config("`tabular` needs a problem file path"))?,
            ),
            other if other.ends_with(".json") => CaseKind::Tabular(PathBuf::from(other)),
            other => {
                return Err(CliError::config(format!(
                    "unknown case `{other}`; expected ventilation, ashp, gshp, tabular or a .json file"
                )))
            }
        };
        if args.path.is_some() && !matches!(args.case.as_str(), "tabular") {
            return Err(CliError::config("a problem file is only accepted with `tabular`"));
        }
        if args.load_csv.is_some() && kind != CaseKind::Gshp {
            return Err(CliError::config("`--load-csv` only applies to gshp"));
        }
        if !args.set.is_empty() && matches!(kind, CaseKind::Tabular(_)) {
            return Err(CliError::config("tabular problems take no `--set` overrides"));
        }
        Ok(kind)
    }

    fn name(&self) -> String {
        match self {
            CaseKind::Ventilation => "ventilation".into(),
            CaseKind::Ashp => "ashp".into(),
            CaseKind::Gshp => "gshp".into(),
            CaseKind::Tabular(path) => format!("tabular:{}", path.display()),
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::config(e.to_string()))
}

struct Solved {
    mc: VoiEstimate,
    trace: Option<Vec<TraceRow>>,
}

fn solve<P: DecisionProblem>(problem: &P, mc: &MonteCarlo, stride: Option<usize>) -> Result<Solved, CliError> {
    let estimate = mc.voi(problem)?;
    let trace = stride.map(|s| mc.trace(problem, s)).transpose()?;
    Ok(Solved { mc: estimate, trace })
}

/// Build and solve the configured problem; the document is not written.
pub fn execute(args: &RunArgs) -> Result<ResultDocument, CliError> {
    let started = Instant::now();
    let kind = CaseKind::parse(args)?;
    if args.samples < 2 {
        return Err(CliError::config(format!(
            "--samples must be at least 2 (got {}); the standard errors need two samples",
            args.samples
        )));
    }
    if args.trace == Some(0) {
        return Err(CliError::config("--trace stride must be at least 1"));
    }
    let execution = if args.workers <= 1 { Execution::Serial } else { Execution::Parallel { workers: args.workers } };
    let mc = MonteCarlo { n_samples: args.samples, seed: args.seed, execution };

    let mut load_profile = None;
    let mut exact = None;
    let (parameters, solved) = match &kind {
        CaseKind::Ventilation => {
            let params: VentilationParams = overrides::apply(&VentilationParams::default(), &args.set)?;
            let problem = build_ventilation_problem(&params)?;
            (to_value(&params)?, solve(&problem, &mc, args.trace)?)
        }
        CaseKind::Ashp => {
            let params: AshpParams = overrides::apply(&AshpParams::default(), &args.set)?;
            let problem = build_ashp_problem(&params)?;
            (to_value(&params)?, solve(&problem, &mc, args.trace)?)
        }
        CaseKind::Gshp => {
            let params: GshpParams = overrides::apply(&GshpParams::default(), &args.set)?;
            params.validate()?;
            let load = match &args.load_csv {
                Some(path) => {
                    let (load, warnings) = read_load_profile_file(path)?;
                    for w in warnings {
                        eprintln!("warning: {}: {w}", path.display());
                    }
                    load_profile = Some(path.display().to_string());
                    load
                }
                None => synthesize_load(&params.load)?,
            };
            let problem = build_gshp_problem_with(&params, &load, execution)?;
            (to_value(&params)?, solve(&problem, &mc, args.trace)?)
        }
        CaseKind::Tabular(path) => {
            let (file, problem) = parse_tabular(path)?;
            exact = Some(solve_exact(&problem));
            (to_value(&file)?, solve(&problem, &mc, args.trace)?)
        }
    };
    Ok(ResultDocument {
        problem: kind.name(),
        parameters,
        load_profile,
        mc: solved.mc,
        exact,
        trace: solved.trace,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

/// Execute and emit the document to `--output` or stdout.
pub fn run(args: &RunArgs) -> Result<ResultDocument, CliError> {
    let doc = execute(args)?;
    let text = match args.format {
        Format::Json => doc.to_json()?,
        Format::Csv => doc.to_csv()?,
    };
    match &args.output {
        Some(path) => {
            write(path, &text)?;
            if let Some(rows) = &doc.trace {
                let mut trace_path = path.as_os_str().to_owned();
                trace_path.push(".trace.csv");
                write(Path::new(&trace_path), &trace_csv(rows)?)?;
            }
        }
        None => print!("{text}"),
    }
    Ok(doc)
}
