//! `smlat`: command-line front end for the `smlat` library.
//!
//! Every command builds a [`Report`]; it is printed as text, or as JSON with
//! `--json`. Exit status is 0 when every verdict passes, 1 when one fails and
//! 2 on usage or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smlat::compound::{
    build_compound, firm_optimal_compound, worker_optimal_compound, CompoundOutcome,
};
use smlat::instance::{blocking_pairs, family_delta, show_pairs, Instance, Matching};
use smlat::lattice::{
    build_rotation_poset, compression_from_membership, firm_optimal_of, oracle_cap_from_env,
    stable_under_all, union_edge_sets, worker_optimal_of, LatticeError,
};
use smlat::lp::{build_lp, parse_rational, solve_feasible, theta_round, LpError};
use smlat::multiroom::{
    firm_multiroom_traced, firm_optimal_multiroom, worker_multiroom_traced,
    worker_optimal_multiroom, MultiRoomOutcome, Rounds,
};
use smlat::verify::{run_fuzz, run_paper_examples, FuzzConfig, Report};
use smlat::{firm_da, is_stable, parse_instance, worker_da};

#[derive(Parser)]
#[command(
    name = "smlat",
    version,
    about = "Stable matchings shared by nearby instances"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an instance and print its extreme stable matchings.
    Check {
        instance: PathBuf,
        /// Also test this matching, e.g. `M: 2 1 3` or `1b 2a 3c`.
        #[arg(long)]
        matching: Option<String>,
    },
    /// List the stable matchings of one instance via its rotation poset.
    Enumerate {
        instance: PathBuf,
        /// Print the rotation poset instead of the matchings.
        #[arg(long)]
        poset: bool,
    },
    /// Print the rotation poset of one instance.
    Poset { instance: PathBuf },
    /// Matchings stable under every given instance.
    Intersect(IntersectArgs),
    /// Solve the stability LP of one or more instances exactly.
    Lp {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        /// Round the solution at this θ in (0, 1), written `p/q`.
        #[arg(long, value_name = "P/Q")]
        round_theta: Option<String>,
        /// Print the constraints.
        #[arg(long)]
        export: bool,
    },
    /// Recompute every fact of the bundled worked examples.
    PaperExamples,
    /// Check seeded random families against the brute-force oracle.
    Fuzz(FuzzArgs),
}

#[derive(Args)]
#[group(id = "mode", required = true, multiple = false)]
struct IntersectMode {
    #[arg(long)]
    worker_opt: bool,
    #[arg(long)]
    firm_opt: bool,
    #[arg(long)]
    enumerate: bool,
    /// Print the compressed rotation poset generating the intersection.
    #[arg(long)]
    poset: bool,
}

#[derive(Args)]
struct IntersectArgs {
    #[arg(required = true, num_args = 2..)]
    instances: Vec<PathBuf>,
    #[command(flatten)]
    mode: IntersectMode,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: u64,
    /// Changed workers and firms per member, `p,q`.
    #[arg(long, value_name = "P,Q", value_parser = parse_pq)]
    pq: (usize, usize),
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Instances per family, base included.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// θ values sampled per rounding check.
    #[arg(long, default_value_t = 30)]
    thetas: usize,
    /// Condition families so lattice-closure failures can appear.
    #[arg(long)]
    search: bool,
}

fn parse_pq(s: &str) -> Result<(usize, usize), String> {
    let (p, q) = s.split_once(',').ok_or("expected p,q")?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(p)?, num(q)?))
}

/// A failure to produce a report at all.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn load(path: &PathBuf) -> Result<Instance, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let inst = parse_instance(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok(inst.with_name(stem))
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<Instance>, UsageError> {
    paths.iter().map(load).collect()
}

fn names(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

fn check(path: &PathBuf, matching: Option<&str>) -> Result<Report, UsageError> {
    let inst = load(path)?;
    let mut r = Report::new("check", names(std::slice::from_ref(path)));
    r.witness("instance", "n", inst.n());
    r.witness("instance", "worker-optimal", worker_da(&inst));
    r.witness("instance", "firm-optimal", firm_da(&inst));
    if let Some(text) = matching {
        let m: Matching = text.parse()?;
        if m.n() != inst.n() {
            return Err(UsageError(format!(
                "matching has {} workers, instance {}",
                m.n(),
                inst.n()
            )));
        }
        let bp = blocking_pairs(&inst, &m);
        let detail = if bp.is_empty() {
            String::new()
        } else {
            format!("blocking pairs {}", show_pairs(&bp))
        };
        r.verdict("instance", format!("{m} is stable"), bp.is_empty(), detail);
    }
    Ok(r)
}

fn enumerate(path: &PathBuf, poset_only: bool, cap: usize) -> Result<Report, UsageError> {
    let inst = load(path)?;
    let poset = build_rotation_poset(&inst);
    let mut r = Report::new(
        if poset_only { "poset" } else { "enumerate" },
        names(std::slice::from_ref(path)),
    );
    if poset_only {
        r.witness("instance", "rotation poset", poset.export());
        return Ok(r);
    }
    let found: Vec<Matching> = poset.enumerate().collect();
    for (i, m) in found.iter().enumerate() {
        r.witness("instance", format!("stable {}", i + 1), m);
    }
    if inst.n() <= cap {
        let oracle = stable_under_all(std::slice::from_ref(&inst), cap)?;
        let same = found.len() == oracle.len() && found.iter().all(|m| oracle.contains(m));
        r.verdict(
            "oracle",
            "closed sets match brute force",
            same,
            format!("{} stable matchings", oracle.len()),
        );
    }
    Ok(r)
}

/// Engine result for the family: compound when no worker list changes,
/// multi-room otherwise. With two or more changed workers the rooms may end
/// apart, returned as `Err` with their matchings.
fn engine_extreme(
    family: &[Instance],
    top: bool,
) -> Result<Result<Option<Matching>, String>, UsageError> {
    let delta = family_delta(family)?;
    if delta.p == 0 {
        let x = build_compound(family)?;
        let out = if top {
            worker_optimal_compound(&x)
        } else {
            firm_optimal_compound(&x)
        };
        return Ok(Ok(match out {
            CompoundOutcome::Matched(m) => Some(m),
            CompoundOutcome::NoMatch => None,
        }));
    }
    let outcome = if delta.p == 1 {
        if top {
            worker_optimal_multiroom(family)?
        } else {
            firm_optimal_multiroom(family)?
        }
    } else {
        let run = if top {
            worker_multiroom_traced
        } else {
            firm_multiroom_traced
        };
        run(family, Rounds::Repaired)?.outcome
    };
    Ok(match outcome {
        MultiRoomOutcome::Matched(m) => Ok(Some(m)),
        MultiRoomOutcome::NoMatch => Ok(None),
        MultiRoomOutcome::NoIdea { rooms } => {
            let rs: Vec<String> = rooms.iter().map(|m| m.to_string()).collect();
            Err(format!("no idea: rooms end at {}", rs.join(" / ")))
        }
    })
}

fn intersect(args: &IntersectArgs, cap: usize) -> Result<Report, UsageError> {
    let family = load_all(&args.instances)?;
    let delta = family_delta(&family)?;
    let mode = &args.mode;
    let command = if mode.worker_opt {
        "intersect --worker-opt"
    } else if mode.firm_opt {
        "intersect --firm-opt"
    } else if mode.enumerate {
        "intersect --enumerate"
    } else {
        "intersect --poset"
    };
    let mut r = Report::new(command, names(&args.instances));
    r.witness("family", "changed agents (p, q)", &delta);
    let oracle = if family[0].n() <= cap {
        Some(stable_under_all(&family, cap)?)
    } else {
        None
    };

    if mode.worker_opt || mode.firm_opt {
        let top = mode.worker_opt;
        let label = if top {
            "worker-optimal"
        } else {
            "firm-optimal"
        };
        let got = engine_extreme(&family, top)?;
        let shown = match &got {
            Ok(Some(m)) => m.to_string(),
            Ok(None) => "no common stable matching".to_string(),
            Err(e) => e.clone(),
        };
        r.witness("family", label, shown);
        if let Some(common) = &oracle {
            let want = if top {
                worker_optimal_of(&family[0], common)
            } else {
                firm_optimal_of(&family[0], common)
            };
            if delta.p <= 1 {
                let ok = got.as_ref().is_ok_and(|m| *m == want);
                r.verdict(
                    "oracle",
                    format!("{label} matches brute force"),
                    ok,
                    format!("{} common", common.len()),
                );
            } else {
                // outside the proven range: show the oracle's answer, judge nothing
                let w = want.map_or("none".to_string(), |m| m.to_string());
                r.witness("oracle", format!("{label} under the first instance"), w);
            }
        }
        return Ok(r);
    }

    let poset = build_rotation_poset(&family[0]);
    let parts: Result<Vec<_>, LatticeError> = family[1..]
        .iter()
        .map(|b| compression_from_membership(&poset, |m| is_stable(b, m)))
        .collect();
    let comp = parts.and_then(|ps| union_edge_sets(&poset, &ps));
    match (&comp, mode.poset) {
        (Ok(c), true) => r.witness(
            "family",
            "compression of the first instance's poset",
            c.export(&poset),
        ),
        (Ok(c), false) => {
            for (i, m) in c.enumerate(&poset).enumerate() {
                r.witness("family", format!("common {}", i + 1), m);
            }
        }
        (Err(e), _) => r.witness("family", "compression", format!("none: {e}")),
    }
    if let Some(common) = &oracle {
        match &comp {
            Ok(c) => {
                let got: Vec<Matching> = c.enumerate(&poset).collect();
                let same = got.len() == common.len() && got.iter().all(|m| common.contains(m));
                r.verdict(
                    "oracle",
                    "compression generates the intersection",
                    same,
                    format!("{} common", common.len()),
                );
            }
            // not a sublattice of the first lattice: list the intersection directly
            Err(_) if !mode.poset => {
                for (i, m) in common.iter().enumerate() {
                    r.witness("oracle", format!("common {}", i + 1), m);
                }
            }
            Err(_) => {}
        }
    }
    Ok(r)
}

fn lp(paths: &[PathBuf], theta: Option<&str>, export: bool) -> Result<Report, UsageError> {
    let family = load_all(paths)?;
    let model = build_lp(&family)?;
    let mut r = Report::new("lp", names(paths));
    if export {
        r.witness("model", "constraints", model.export());
    }
    let sol = solve_feasible(&model);
    let Some(x) = sol.point() else {
        r.witness("model", "solution", "infeasible");
        return Ok(r);
    };
    r.witness("model", "vertex", x);
    r.verdict(
        "model",
        "vertex satisfies every constraint",
        x.satisfies(&model),
        "",
    );
    if let Some(text) = theta {
        let t = parse_rational(text).ok_or_else(|| UsageError(format!("θ `{text}` is not p/q")))?;
        let mut rounded = Vec::new();
        for inst in &family {
            match theta_round(x, inst, &t) {
                Ok(m) => {
                    r.witness("rounding", format!("under {}", inst.name()), &m);
                    rounded.push(m);
                }
                Err(e @ (LpError::BoundaryTheta { .. } | LpError::ThetaOutOfRange { .. })) => {
                    return Err(e.into())
                }
                Err(e) => {
                    r.verdict(
                        "rounding",
                        format!("rounding under {}", inst.name()),
                        false,
                        e.to_string(),
                    );
                }
            }
        }
        let agree = rounded.windows(2).all(|w| w[0] == w[1]);
        r.verdict(
            "rounding",
            format!("θ = {t} rounds alike under every instance"),
            agree,
            "",
        );
    }
    Ok(r)
}

fn run(cli: &Cli) -> Result<Report, UsageError> {
    let cap = oracle_cap_from_env();
    match &cli.command {
        Command::Check { instance, matching } => check(instance, matching.as_deref()),
        Command::Enumerate { instance, poset } => enumerate(instance, *poset, cap),
        Command::Poset { instance } => enumerate(instance, true, cap),
        Command::Intersect(args) => intersect(args, cap),
        Command::Lp {
            instances,
            round_theta,
            export,
        } => lp(instances, round_theta.as_deref(), *export),
        Command::PaperExamples => Ok(run_paper_examples()),
        Command::Fuzz(a) => {
            let cfg = FuzzConfig {
                n: a.n,
                trials: a.trials,
                p: a.pq.0,
                q: a.pq.1,
                k: a.k,
                seed: a.seed,
                thetas: a.thetas,
                cap,
                search: a.search,
            };
            Ok(run_fuzz(&cfg)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{}", report.render());
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("smlat: {msg}");
            ExitCode::from(2)
        }
    }
}
