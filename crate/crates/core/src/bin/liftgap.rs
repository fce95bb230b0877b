//! Command-line front end. Exit status: 0 when every check passes, 1 on a
//! verification failure, 2 on usage or budget errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use liftgap::instances::{
    build_cfl_proper_instance, build_example1_instance, build_lbfl_gap_instance, build_ls_instance, random_instance,
    LabeledInstance, Mode,
};
use liftgap::ls_hierarchy::{integral_points, micro_cfl_polytope, micro_grid, oracle_crosscheck, brute_membership};
use liftgap::rational::{parse_q, Q};
use liftgap::relaxations::{constellation_lp, standard_lp, star_lp, ClassSet};
use liftgap::solver::{integrality_gap, SolveOptions, DEFAULT_SUBSET_BUDGET};
use liftgap::witnesses::{build_tree, root_solution, zeroing_path, LsParams, Strategy, Var};
use liftgap::Error;

#[derive(Parser)]
#[command(name = "liftgap", version, about = "Exact relaxation and lift-and-project gap verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Ls,
    LbflGap,
    CflProper,
    Example1,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cfl,
    Lbfl,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    AllChildren,
    Sample,
    Zeroing,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON.
    Gen {
        #[arg(value_enum)]
        generator: Generator,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long = "H")]
        h: Option<String>,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long = "D")]
        d: Option<String>,
        #[arg(long)]
        facilities: Option<usize>,
        #[arg(long)]
        clients: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long = "U")]
        u: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a relaxation and compare with the integral optimum.
    Gap {
        instance: PathBuf,
        /// classic, star, or constellation:<classset.json>
        #[arg(long, default_value = "classic")]
        relaxation: String,
        #[arg(long, default_value_t = 200_000)]
        budget_stars: u128,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget_subsets: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify the witness tree of the LS instance.
    LsVerify {
        /// Instance file from `gen ls`; otherwise built from --n --l --H.
        instance: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long = "H")]
        h: Option<String>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::AllChildren)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Children kept per node by the sampling strategy.
        #[arg(long, default_value_t = 4)]
        width: usize,
        /// Include every node in the report.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the two one-round membership oracles on a micro polytope.
    OracleCrosscheck {
        /// Grid spacing is 1/steps.
        #[arg(long, default_value_t = 4)]
        steps: u32,
        /// Rounds for the integral-vertex survival check.
        #[arg(long, default_value_t = 2)]
        rounds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Verification(Value),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing --{flag}")))
}

fn rational(s: Option<String>, flag: &str) -> Result<Q, Failure> {
    Ok(parse_q(&need(s, flag)?)?)
}

fn solve_options() -> SolveOptions {
    std::env::var("LIFTGAP_BUDGET_MB")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .map(SolveOptions::with_memory_mb)
        .unwrap_or_default()
}

fn emit(doc: &Value, out: &Option<PathBuf>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(doc).map_err(Error::from)?;
    match out {
        Some(p) => std::fs::write(p, text).map_err(Error::from)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn load(path: &PathBuf) -> Result<LabeledInstance, Failure> {
    Ok(LabeledInstance::from_json(&std::fs::read_to_string(path).map_err(Error::from)?)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen {
            generator,
            n,
            l,
            h,
            c,
            d,
            facilities,
            clients,
            mode,
            u,
            seed,
            out,
        } => {
            let inst = match generator {
                Generator::Ls => build_ls_instance(need(n, "n")?, need(l, "l")?, &rational(h, "H")?)?,
                Generator::LbflGap => build_lbfl_gap_instance(
                    need(n, "n")?,
                    c.unwrap_or(2),
                    &d.map(|s| parse_q(&s)).transpose()?.unwrap_or_else(|| Q::from_integer(1.into())),
                )?,
                Generator::CflProper => build_cfl_proper_instance(need(n, "n")?)?,
                Generator::Example1 => build_example1_instance(),
                Generator::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mode = match need(mode, "mode")? {
                        ModeArg::Cfl => Mode::Cfl,
                        ModeArg::Lbfl => Mode::Lbfl,
                    };
                    let mut li = LabeledInstance::plain(random_instance(
                        &mut rng,
                        need(facilities, "facilities")?,
                        need(clients, "clients")?,
                        mode,
                        need(u, "U")?,
                    )?);
                    li.params.insert("seed".into(), Q::from_integer(seed.into()));
                    li
                }
            };
            let text = inst.to_json()?;
            match &out {
                Some(p) => std::fs::write(p, text).map_err(Error::from)?,
                None => println!("{text}"),
            }
            eprintln!(
                "{} facilities, {} clients, {:?}, bound {}",
                inst.base.n_facilities, inst.base.n_clients, inst.base.mode, inst.base.capacity_or_bound
            );
            Ok(())
        }
        Command::Gap {
            instance,
            relaxation,
            budget_stars,
            budget_subsets,
            out,
        } => {
            let inst = load(&instance)?;
            let lp = if relaxation == "classic" {
                standard_lp(&inst.base)
            } else if relaxation == "star" {
                star_lp(&inst.base, None, budget_stars)?.0
            } else if let Some(path) = relaxation.strip_prefix("constellation:") {
                let cs = ClassSet::from_json(&std::fs::read_to_string(path).map_err(Error::from)?)?;
                constellation_lp(&inst.base, &cs)
            } else {
                return Err(Failure::Usage(format!("unknown relaxation `{relaxation}`")));
            };
            let report = integrality_gap(&inst.base, &lp, &relaxation, solve_options(), budget_subsets)?;
            emit(
                &json!({
                    "config": {"instance": instance, "relaxation": relaxation,
                               "budget_stars": budget_stars.to_string(), "budget_subsets": budget_subsets.to_string()},
                    "report": report,
                }),
                &out,
            )
        }
        Command::LsVerify {
            instance,
            n,
            l,
            h,
            depth,
            strategy,
            seed,
            width,
            full,
            out,
        } => {
            let inst = match &instance {
                Some(p) => load(p)?,
                None => build_ls_instance(need(n, "n")?, need(l, "l")?, &rational(h, "H")?)?,
            };
            let p = LsParams::from_instance(&inst)?;
            let root = root_solution(&inst)?;
            let config = json!({"n": p.n, "l": p.l, "depth": depth, "seed": seed, "width": width,
                                "strategy": strategy.to_possible_value().map(|v| v.get_name().to_string())});
            let (doc, passed) = match strategy {
                StrategyArg::Zeroing => {
                    let set: Vec<Var> = p.costly().map(Var::Y).collect();
                    let path = zeroing_path(&root, &p, &set)?;
                    let ok = path.first_infeasible.is_some_and(|s| s <= p.l);
                    (json!({"config": config, "zeroing": path}), ok)
                }
                StrategyArg::AllChildren | StrategyArg::Sample => {
                    let s = match strategy {
                        StrategyArg::Sample => Strategy::RandomSample { seed, width },
                        _ => Strategy::AllChildrenPerNode,
                    };
                    let mut tree = build_tree(&root, &p, depth, &s)?;
                    let ok = tree.all_passed;
                    if !full {
                        tree.nodes.retain(|nd| !nd.passed);
                    }
                    (json!({"config": config, "tree": tree}), ok)
                }
            };
            if passed {
                emit(&doc, &out)
            } else {
                emit(&doc, &out)?;
                Err(Failure::Verification(json!({"failed": "ls-verify"})))
            }
        }
        Command::OracleCrosscheck { steps, rounds, out } => {
            let k = micro_cfl_polytope();
            let grid = micro_grid(steps);
            let report = oracle_crosscheck(&k, &grid)?;
            let verts = integral_points(&k)?;
            let mut survived = 0;
            for v in &verts {
                if brute_membership(&k, v, rounds)? {
                    survived += 1;
                }
            }
            let ok = report.all_agree && survived == verts.len();
            let doc = json!({
                "config": {"steps": steps, "rounds": rounds},
                "crosscheck": report,
                "integral_vertices": verts.len(),
                "vertices_surviving": survived,
            });
            emit(&doc, &out)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification(json!({"failed": "oracle-crosscheck"})))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(v)) => {
            eprintln!("{v}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
