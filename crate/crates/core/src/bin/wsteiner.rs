use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wsteiner::heuristic::{solve_with_order, MergePolicy, Ordering, Phase, RelaxObjective, SolveConfig};
use wsteiner::io::{
    assumption2_experiment, generate_random_instance, mirrored_triangles_template, read_instance, render_trace,
    render_tree, serialize_instance, to_json, write_atomic, OracleJson, RenderSpec, SolveJson, WmstJson,
};
use wsteiner::oracle::oracle_wsmt;
use wsteiner::wmst::{plane_weighted_mst, weighted_mst};
use wsteiner::Error;

#[derive(Parser)]
#[command(name = "wsteiner", version, about = "Soap-film heuristic for weighted Steiner minimal trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the heuristic on an instance file.
    Solve {
        instance: PathBuf,
        /// Allowed deficit below 120 degrees, as a fraction.
        #[arg(long, default_value_t = 0.022)]
        tolerance: f64,
        #[arg(long, value_enum, default_value_t = OrderingArg::Input)]
        ordering: OrderingArg,
        #[arg(long = "merge-policy", value_enum, default_value_t = MergeArg::Keep)]
        merge_policy: MergeArg,
        /// Tilt applied to a Steiner–Steiner edge on stagnation, in degrees.
        #[arg(long, default_value_t = 1.3)]
        tilt: f64,
        /// Objective minimised between structural steps.
        #[arg(long, value_enum, default_value_t = RelaxArg::Euclidean)]
        relax: RelaxArg,
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Weighted minimum spanning tree, optionally without crossings.
    Wmst {
        instance: PathBuf,
        #[arg(long)]
        plane: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Exact weighted Steiner minimal tree for at most seven terminals.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a random instance in [0,100]^2 with integer weights.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        wmin: u32,
        #[arg(long, default_value_t = 77)]
        wmax: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Planarity experiment on the seven-vertex mirrored-triangle template.
    Assumption2 {
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Input,
    Acutest,
}

#[derive(Clone, Copy, ValueEnum)]
enum MergeArg {
    Keep,
    Adopt,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelaxArg {
    Euclidean,
    Weighted,
}

enum Failure {
    Usage(String),
    Infeasible(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } | Error::InfeasiblePlaneTree { .. } => Failure::Infeasible(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Infeasible(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

/// Writes to `path` when given, otherwise to stdout.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()).map_err(Failure::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_svg(path: Option<&PathBuf>, svg: impl FnOnce() -> String) -> Result<(), Failure> {
    if let Some(p) = path {
        write_atomic(p, svg().as_bytes())?;
    }
    Ok(())
}

/// Ok(false) means results were written but the solver did not converge.
fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Solve {
            instance,
            tolerance,
            ordering,
            merge_policy,
            tilt,
            relax,
            max_iterations,
            svg,
            json,
        } => {
            let inst = read_instance(&instance)?;
            let cfg = SolveConfig {
                angle_tolerance_fraction: tolerance,
                tilt_degrees: tilt,
                ordering: match ordering {
                    OrderingArg::Input => Ordering::InputOrder,
                    OrderingArg::Acutest => Ordering::AcutestFirst,
                },
                merge_policy: match merge_policy {
                    MergeArg::Keep => MergePolicy::TerminalKeepsWeight,
                    MergeArg::Adopt => MergePolicy::TerminalAdoptsSteinerWeight,
                },
                relax_objective: match relax {
                    RelaxArg::Euclidean => RelaxObjective::Euclidean,
                    RelaxArg::Weighted => RelaxObjective::Weighted,
                },
                max_iterations,
                ..SolveConfig::default()
            };
            let sol = solve_with_order(&inst.terminals, &inst.insertion_order(), &cfg)?;
            write_svg(svg.as_ref(), || {
                let spec = RenderSpec {
                    phases: vec![Phase::PlaneWmst, Phase::Slide, Phase::Detach, Phase::Final, Phase::Overlay],
                    ..RenderSpec::default()
                };
                render_trace(&sol.trace, &spec)
            })?;
            emit(json.as_deref(), &to_json(&SolveJson::new(&sol, &cfg)))?;
            if !sol.report.planarity_violations.is_empty() {
                eprintln!(
                    "warning: final tree has {} crossing edge pairs",
                    sol.report.planarity_violations.len()
                );
            }
            if !sol.report.converged {
                eprintln!("warning: stopped after {} iterations without converging", sol.report.iterations);
            }
            Ok(sol.report.converged)
        }
        Command::Wmst {
            instance,
            plane,
            svg,
            json,
        } => {
            let inst = read_instance(&instance)?;
            let tree = if plane {
                plane_weighted_mst(&inst.terminals, &inst.insertion_order())?
            } else {
                weighted_mst(&inst.terminals)?
            };
            let phase = if plane { Phase::PlaneWmst } else { Phase::Wmst };
            write_svg(svg.as_ref(), || render_tree(&tree, &RenderSpec::single(phase)))?;
            emit(json.as_deref(), &to_json(&WmstJson::new(&tree, plane)))?;
            Ok(true)
        }
        Command::Oracle { instance, svg, json } => {
            let inst = read_instance(&instance)?;
            let result = oracle_wsmt(&inst.terminals)?;
            write_svg(svg.as_ref(), || render_tree(&result.best_tree, &RenderSpec::single(Phase::Final)))?;
            emit(json.as_deref(), &to_json(&OracleJson::new(&result)))?;
            Ok(result.converged)
        }
        Command::Gen {
            n,
            wmin,
            wmax,
            seed,
            out,
        } => {
            let inst = generate_random_instance(n, wmin, wmax, seed)?;
            write_atomic(&out, serialize_instance(&inst).as_bytes())?;
            Ok(true)
        }
        Command::Assumption2 { trials, seed, json } => {
            let stats = assumption2_experiment(&mirrored_triangles_template(), trials, seed, &SolveConfig::default())?;
            eprintln!(
                "{} trials: {} weighted MSTs with crossings, {} heuristic outputs with crossings",
                stats.trials, stats.wmst_pattern_count, stats.heuristic_violation_count
            );
            emit(json.as_deref(), &to_json(&stats))?;
            Ok(true)
        }
    }
}
