//! Seeded random families checked against the oracle, trials in parallel.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{self, CheckResult, Trial};
use super::report::{Report, Repro, VerifyError};
use crate::instance::{dominates, is_stable, FirmId, Instance, Matching, WorkerId};
use crate::lattice::{enumerate_stable_capped, LatticeError, DEFAULT_ORACLE_CAP};
use crate::lp::{theta_samples, Rational};
use crate::random::{random_family, random_instance, redraw, trial_rng};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub n: usize,
    pub trials: u64,
    /// Workers and firms redrawn in every non-base member.
    pub p: usize,
    pub q: usize,
    /// Family size, base instance included.
    pub k: usize,
    pub seed: u64,
    /// θ values tried per rounding check.
    pub thetas: usize,
    pub cap: usize,
    /// Draw families where a lattice-closure failure is possible: the base
    /// has two incomparable stable matchings and every member keeps both
    /// stable. Uniform families almost never show one.
    pub search: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            n: 5,
            trials: 200,
            p: 0,
            q: 2,
            k: 2,
            seed: 1,
            thetas: 30,
            cap: DEFAULT_ORACLE_CAP,
            search: false,
        }
    }
}

impl FuzzConfig {
    fn repro(&self, trial: u64) -> Repro {
        Repro {
            seed: self.seed,
            trial,
            n: self.n,
            k: self.k,
            p: self.p,
            q: self.q,
            search: self.search,
        }
    }

    fn inputs(&self) -> Vec<String> {
        vec![
            format!("n={}", self.n),
            format!("trials={}", self.trials),
            format!("pq={},{}", self.p, self.q),
            format!("k={}", self.k),
            format!("seed={}", self.seed),
            format!("search={}", self.search),
        ]
    }
}

/// Rounding checks must see at least this many non-boundary θ values.
pub const MIN_INTERIOR_THETAS: usize = 20;

struct TrialOutcome {
    checks: Vec<(&'static str, CheckResult)>,
    findings: Vec<(String, String)>,
    family: String,
}

const SEARCH_BASE_TRIES: usize = 10_000;
const SEARCH_REDRAWS: usize = 2_000;

/// Agents drawn from `preferred` when it has enough of them.
fn pick(n: usize, count: usize, preferred: &[usize], rng: &mut impl Rng) -> Vec<usize> {
    if preferred.len() >= count {
        index::sample(rng, preferred.len(), count)
            .into_iter()
            .map(|i| preferred[i])
            .collect()
    } else {
        index::sample(rng, n, count).into_vec()
    }
}

/// A family conditioned on two incomparable matchings stable under its base
/// staying stable under every member. Changed agents are taken from those
/// the two matchings treat differently. Falls back to an unconditioned draw
/// when the base has a chain lattice or no redraw keeps both stable.
fn search_family(cfg: &FuzzConfig, rng: &mut impl Rng) -> Vec<Instance> {
    let mut base = None;
    for _ in 0..SEARCH_BASE_TRIES {
        let a = random_instance(cfg.n, rng);
        let stable: Vec<Matching> = enumerate_stable_capped(&a, cfg.cap)
            .expect("n within cap")
            .into_iter()
            .collect();
        let pair = stable.iter().enumerate().find_map(|(i, x)| {
            stable[i + 1..]
                .iter()
                .find(|y| !dominates(&a, x, y) && !dominates(&a, y, x))
                .map(|y| (x.clone(), y.clone()))
        });
        if let Some((m1, m2)) = pair {
            base = Some((a, m1, m2));
            break;
        }
    }
    let Some((a, m1, m2)) = base else {
        return random_family(cfg.n, cfg.k, cfg.p, cfg.q, rng);
    };
    let a = a.with_name("A");
    let moved: Vec<usize> = WorkerId::all(cfg.n)
        .filter(|&w| m1.firm_of(w) != m2.firm_of(w))
        .map(|w| w.index())
        .collect();
    let moved_firms: Vec<usize> = moved
        .iter()
        .map(|&w| m1.firm_of(WorkerId::new(w)).index())
        .collect();
    let workers: Vec<WorkerId> = pick(cfg.n, cfg.p, &moved, rng)
        .into_iter()
        .map(WorkerId::new)
        .collect();
    let firms: Vec<FirmId> = pick(cfg.n, cfg.q, &moved_firms, rng)
        .into_iter()
        .map(FirmId::new)
        .collect();
    let mut family = vec![a.clone()];
    for i in 1..cfg.k {
        let mut b = redraw(&a, &workers, &firms, rng);
        for _ in 0..SEARCH_REDRAWS {
            if is_stable(&b, &m1) && is_stable(&b, &m2) {
                break;
            }
            b = redraw(&a, &workers, &firms, rng);
        }
        family.push(b.with_name(format!("B{i}")));
    }
    family
}

fn run_trial(cfg: &FuzzConfig, t: u64, thetas: &[Rational]) -> TrialOutcome {
    let mut rng = trial_rng(cfg.seed, t);
    let family = if cfg.search {
        search_family(cfg, &mut rng)
    } else {
        random_family(cfg.n, cfg.k, cfg.p, cfg.q, &mut rng)
    };
    let text = family
        .iter()
        .map(|i| format!("# {}\n{}", i.name(), i.to_text()))
        .collect::<Vec<_>>()
        .join("");
    let trial = Trial::new(family, cfg.cap).expect("size checked against the cap");
    let mut out = TrialOutcome {
        checks: Vec::new(),
        findings: Vec::new(),
        family: text,
    };

    for inst in &trial.family {
        out.checks.push((
            "rotation poset matches the oracle",
            checks::poset_bijection(inst, cfg.cap),
        ));
    }
    out.checks.push((
        "single-instance LP vertex is stable",
        checks::lp_single(trial.base(), cfg.cap, thetas),
    ));

    let (p, q) = (trial.delta.p, trial.delta.q);
    if p == 0 {
        out.checks.push((
            "compound engines match the oracle",
            checks::compound_engines(&trial),
        ));
        if cfg.n <= 6 {
            out.checks.push((
                "strong stability is stability under all",
                checks::strong_stability(&trial),
            ));
        }
    }
    if p <= 1 {
        match checks::multiroom_engines(&trial) {
            Ok((s, notes)) => {
                out.checks
                    .push(("multi-room engines match the oracle", Ok(s)));
                out.findings.extend(
                    notes
                        .into_iter()
                        .map(|n| ("literal multi-room rounds".to_string(), n)),
                );
            }
            Err(e) => out
                .checks
                .push(("multi-room engines match the oracle", Err(e))),
        }
        match checks::hybrid_identity(&trial, cfg.cap) {
            Ok((s, notes)) => {
                out.checks
                    .push(("hybrids preserve the intersection", Ok(s)));
                out.findings.extend(
                    notes
                        .into_iter()
                        .map(|n| ("two-sided hybrids".to_string(), n)),
                );
            }
            Err(e) => out
                .checks
                .push(("hybrids preserve the intersection", Err(e))),
        }
        out.checks.push((
            "union of hybrid compressions is the intersection",
            checks::compression_union(&trial),
        ));
        out.checks.push((
            "joint LP feasibility and rounding",
            checks::lp_joint(&trial, thetas, MIN_INTERIOR_THETAS.min(thetas.len())),
        ));
        out.checks.push((
            "meet and join agree across instances",
            checks::join_meet_agreement(&trial),
        ));
    }
    if p <= 1 || q <= 1 {
        out.checks.push((
            "intersection is a sublattice",
            checks::sublattice_closure(&trial),
        ));
    } else {
        out.findings.extend(checks::research(&trial, thetas));
    }
    out
}

/// Runs `cfg.trials` independent trials. Each check becomes one verdict
/// carrying the first failing trial; research-mode observations become
/// findings. The report only depends on the configuration.
pub fn run_fuzz(cfg: &FuzzConfig) -> Result<Report, VerifyError> {
    if cfg.n > cfg.cap {
        return Err(LatticeError::CapExceeded {
            n: cfg.n,
            cap: cfg.cap,
        }
        .into());
    }
    if cfg.p > cfg.n || cfg.q > cfg.n || cfg.k == 0 || cfg.n == 0 {
        return Err(VerifyError::Config(format!(
            "cannot draw a family with n = {}, k = {}, (p, q) = ({}, {})",
            cfg.n, cfg.k, cfg.p, cfg.q
        )));
    }
    let mut report = Report::new("fuzz", cfg.inputs());
    let thetas = theta_samples(cfg.thetas, cfg.seed);
    let outcomes: Vec<TrialOutcome> = report.timed("trials", |_| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, t, &thetas))
            .collect()
    });

    // (name, trials run, first failure)
    type Tally = (&'static str, u64, Option<(u64, String)>);
    let mut tally: Vec<Tally> = Vec::new();
    for (t, o) in (0..).zip(&outcomes) {
        let mut failed = false;
        for (name, result) in &o.checks {
            let idx = match tally.iter().position(|e| e.0 == *name) {
                Some(i) => i,
                None => {
                    tally.push((name, 0, None));
                    tally.len() - 1
                }
            };
            tally[idx].1 += 1;
            if let Err(e) = result {
                failed = true;
                tally[idx].2.get_or_insert((t, e.clone()));
            }
        }
        for (kind, detail) in &o.findings {
            report.finding("fuzz", Some(t), kind.clone(), detail.clone());
        }
        if failed {
            report.witness("fuzz", format!("trial {t} family"), &o.family);
        }
    }
    for (name, runs, failure) in tally {
        match failure {
            None => report.verdict("fuzz", name, true, format!("{runs} checks")),
            Some((t, detail)) => {
                report.verdict("fuzz", name, false, detail);
                report.verdicts.last_mut().expect("just pushed").repro = Some(cfg.repro(t));
            }
        }
    }
    Ok(report)
}
