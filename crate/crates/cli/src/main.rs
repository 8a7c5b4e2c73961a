//! `qir-opt`: rewrite a QIR program so that a database evaluates as much of
//! it as possible.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qir::capabilities::emit_plan;
use qir::exhaustive::DEFAULT_BUDGET;
use qir::heuristic::DEFAULT_FUEL;
use qir::{desugar, explore_reductions, measure_of, min_red, parse, print, resugar, Expr, Measure, SqlCapabilities};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "qir-opt", version, about = "Measure-guided rewriting of QIR query programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a .qir file and print the result.
    Reduce(ReduceArgs),
}

#[derive(clap::Args)]
struct ReduceArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Strategy::Heuristic)]
    strategy: Strategy,
    /// Heuristic fuel.
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: usize,
    /// Maximum number of distinct terms the exhaustive strategy explores.
    #[arg(long, default_value_t = DEFAULT_BUDGET as u64, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Emit::Qir)]
    emit: Emit,
    /// Only report the measure of the input.
    #[arg(long)]
    measure_only: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Exhaustive,
    Heuristic,
}

impl Strategy {
    fn name(self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Heuristic => "heuristic",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Qir,
    Sql,
    Json,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunReport {
    strategy: &'static str,
    fuel: Option<usize>,
    budget: Option<u64>,
    input_measure: [usize; 2],
    output_measure: [usize; 2],
    steps: usize,
    elapsed_millis: u128,
    exhausted: Option<bool>,
    term: String,
}

struct Outcome {
    result: Expr,
    steps: usize,
    exhausted: Option<bool>,
}

fn pair(m: Measure) -> [usize; 2] {
    [m.op_minus_comp, m.frag]
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
    match cli.command {
        Command::Reduce(args) => reduce(&args),
    }
}

fn reduce(args: &ReduceArgs) -> ExitCode {
    let file = args.file.display();
    let source = match std::fs::read_to_string(&args.file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{file}: {e}");
            return ExitCode::from(1);
        }
    };
    let input = match parse(&source) {
        Ok(e) => desugar(&e),
        Err(e) => {
            eprintln!("{file}:{e}");
            return ExitCode::from(1);
        }
    };
    let caps = SqlCapabilities;
    let input_measure = measure_of(&caps, &input);

    let start = Instant::now();
    let outcome = if args.measure_only {
        Outcome {
            result: input.clone(),
            steps: 0,
            exhausted: None,
        }
    } else {
        match args.strategy {
            Strategy::Heuristic => {
                let out = min_red(&caps, &input, args.fuel);
                Outcome {
                    steps: out.trace.len(),
                    result: out.result,
                    exhausted: None,
                }
            }
            Strategy::Exhaustive => {
                let out = explore_reductions(&caps, &input, args.budget as usize);
                Outcome {
                    steps: out.best_trace.len(),
                    result: out.best,
                    exhausted: Some(out.exhausted),
                }
            }
        }
    };
    let elapsed = start.elapsed();
    let output_measure = measure_of(&caps, &outcome.result);
    let term = print(&resugar(&outcome.result));

    let mut out = String::new();
    match args.emit {
        Emit::Json => {
            let report = RunReport {
                strategy: args.strategy.name(),
                fuel: (args.strategy == Strategy::Heuristic).then_some(args.fuel),
                budget: (args.strategy == Strategy::Exhaustive).then_some(args.budget),
                input_measure: pair(input_measure),
                output_measure: pair(output_measure),
                steps: outcome.steps,
                elapsed_millis: elapsed.as_millis(),
                exhausted: outcome.exhausted,
                term,
            };
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            )
            .unwrap();
        }
        Emit::Qir if args.measure_only => writeln!(out, "{input_measure}").unwrap(),
        Emit::Qir => {
            writeln!(out, "{term}").unwrap();
            let mut stats = format!(
                "strategy={} input={input_measure} output={output_measure} steps={} elapsed={}ms",
                args.strategy.name(),
                outcome.steps,
                elapsed.as_millis()
            );
            if let Some(x) = outcome.exhausted {
                stats.push_str(&format!(" exhausted={x}"));
            }
            eprintln!("{stats}");
        }
        Emit::Sql => {
            let plan = emit_plan(&caps, &outcome.result);
            if plan.sql_parts.is_empty() {
                eprintln!("{file}: no fragment of the program can be translated to SQL");
                return ExitCode::from(2);
            }
            if plan.sql_parts.len() == 1 && plan.bindings.is_empty() && plan.residual.as_var().is_some() {
                writeln!(out, "{};", plan.sql_parts[0].sql).unwrap();
            } else {
                for part in &plan.sql_parts {
                    writeln!(out, "-- {}\n{};", part.name, part.sql).unwrap();
                }
                for (name, e) in &plan.bindings {
                    writeln!(out, "-- {name} (evaluated by the host)\n{}", print(&resugar(e))).unwrap();
                }
                writeln!(out, "-- result\n{}", print(&resugar(&plan.residual))).unwrap();
            }
        }
    }
    // A closed pipe on stdout is not an error of the run.
    let _ = std::io::stdout().write_all(out.as_bytes());
    ExitCode::SUCCESS
}
