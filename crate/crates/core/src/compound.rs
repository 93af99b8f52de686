//! Families that differ only in firm preferences: the compound instance,
//! strong stability, and the two deferred-acceptance variants that find the
//! extreme matchings stable under every member of the family.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{
    common_size, FirmId, Instance, InstanceError, Matching, PreferenceList, WorkerId,
};
use crate::lattice::{check_sublattice, stable_under_all, ClosureVerdict, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompoundError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(
        "worker {worker} has different lists across the family; firms-only changes are required"
    )]
    WorkerListsDiffer { worker: WorkerId },
}

/// Workers keep total orders; firm `f` prefers `a` to `b` only when every
/// source instance agrees.
#[derive(Clone, Debug)]
pub struct CompoundInstance {
    worker_prefs: Vec<PreferenceList>,
    // above[f][a][b]: f strictly prefers worker a to worker b
    above: Vec<Vec<Vec<bool>>>,
}

impl CompoundInstance {
    pub fn n(&self) -> usize {
        self.worker_prefs.len()
    }

    pub fn worker_list(&self, w: WorkerId) -> &PreferenceList {
        &self.worker_prefs[w.index()]
    }

    #[inline]
    pub fn firm_prefers(&self, f: FirmId, a: WorkerId, b: WorkerId) -> bool {
        self.above[f.index()][a.index()][b.index()]
    }

    /// Distinct workers neither of which `f` prefers.
    pub fn indifferent(&self, f: FirmId, a: WorkerId, b: WorkerId) -> bool {
        a != b && !self.firm_prefers(f, a, b) && !self.firm_prefers(f, b, a)
    }

    /// Whether every firm order is total.
    pub fn is_total(&self) -> bool {
        let n = self.n();
        FirmId::all(n).all(|f| {
            WorkerId::all(n).all(|a| WorkerId::all(n).all(|b| a == b || !self.indifferent(f, a, b)))
        })
    }
}

pub fn build_compound(instances: &[Instance]) -> Result<CompoundInstance, CompoundError> {
    let n = common_size(instances)?;
    let first = &instances[0];
    for w in WorkerId::all(n) {
        if instances
            .iter()
            .any(|i| i.worker_list(w) != first.worker_list(w))
        {
            return Err(CompoundError::WorkerListsDiffer { worker: w });
        }
    }
    let above = FirmId::all(n)
        .map(|f| {
            (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| instances.iter().all(|i| i.firm_list(f).prefers(a, b)))
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(CompoundInstance {
        worker_prefs: first.worker_lists().to_vec(),
        above,
    })
}

/// `w` prefers `f` to its partner and `f` does not prefer its partner to `w`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StrongBlockingPair {
    pub worker: WorkerId,
    pub firm: FirmId,
}

impl fmt::Display for StrongBlockingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.worker.number(), self.firm.number())
    }
}

pub fn strong_blocking_pairs(x: &CompoundInstance, m: &Matching) -> Vec<StrongBlockingPair> {
    let mut out = Vec::new();
    for w in WorkerId::all(x.n()) {
        let wl = x.worker_list(w);
        for pos in 0..wl.rank(m.firm_of(w).index()) {
            let f = FirmId::new(wl.at(pos));
            if !x.firm_prefers(f, m.worker_of(f), w) {
                out.push(StrongBlockingPair { worker: w, firm: f });
            }
        }
    }
    out
}

pub fn is_strongly_stable(x: &CompoundInstance, m: &Matching) -> bool {
    strong_blocking_pairs(x, m).is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompoundOutcome {
    Matched(Matching),
    NoMatch,
}

impl CompoundOutcome {
    pub fn matching(&self) -> Option<&Matching> {
        match self {
            CompoundOutcome::Matched(m) => Some(m),
            CompoundOutcome::NoMatch => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompoundTrace {
    pub outcome: CompoundOutcome,
    pub rejections: Vec<(WorkerId, FirmId)>,
    pub rounds: usize,
}

/// Workers propose; a firm holds a proposal only while it is strictly better
/// than every proposal the firm has ever received.
pub fn worker_optimal_compound_traced(x: &CompoundInstance) -> CompoundTrace {
    let n = x.n();
    let mut next = vec![0usize; n];
    let mut held: Vec<Option<usize>> = vec![None; n];
    let mut received: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut free: Vec<usize> = (0..n).collect();
    let mut inbox: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut rejections = Vec::new();
    let mut rounds = 0;

    while !free.is_empty() {
        rounds += 1;
        for &w in &free {
            if next[w] == n {
                return CompoundTrace {
                    outcome: CompoundOutcome::NoMatch,
                    rejections,
                    rounds,
                };
            }
            inbox[x.worker_list(WorkerId::new(w)).at(next[w])].push(w);
        }
        free.clear();
        for (f, proposals) in inbox.iter_mut().enumerate() {
            if proposals.is_empty() {
                continue;
            }
            let firm = FirmId::new(f);
            received[f].extend(proposals.iter().copied());
            let ever = &received[f];
            let best = ever.iter().copied().find(|&a| {
                ever.iter()
                    .all(|&b| a == b || x.firm_prefers(firm, WorkerId::new(a), WorkerId::new(b)))
            });
            let contenders: Vec<usize> = held[f].into_iter().chain(proposals.drain(..)).collect();
            held[f] = None;
            for w in contenders {
                if Some(w) == best {
                    held[f] = Some(w);
                } else {
                    rejections.push((WorkerId::new(w), firm));
                    next[w] += 1;
                    free.push(w);
                }
            }
        }
        free.sort_unstable();
    }

    let mut partners = vec![0; n];
    for (f, h) in held.iter().enumerate() {
        partners[h.expect("every worker is held")] = f;
    }
    let m = Matching::from_worker_partners(partners).expect("each firm holds at most one worker");
    CompoundTrace {
        outcome: CompoundOutcome::Matched(m),
        rejections,
        rounds,
    }
}

/// Firms propose to all their maximal uncrossed workers at once; workers keep
/// the best proposal. Stops after a round without rejections.
pub fn firm_optimal_compound_traced(x: &CompoundInstance) -> CompoundTrace {
    let n = x.n();
    let mut crossed = vec![vec![false; n]; n]; // crossed[f][w]
    let mut rejections = Vec::new();
    let mut rounds = 0;

    loop {
        rounds += 1;
        let mut inbox: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (f, row) in crossed.iter().enumerate() {
            let firm = FirmId::new(f);
            let open: Vec<usize> = (0..n).filter(|&w| !row[w]).collect();
            if open.is_empty() {
                return CompoundTrace {
                    outcome: CompoundOutcome::NoMatch,
                    rejections,
                    rounds,
                };
            }
            for &w in &open {
                if !open
                    .iter()
                    .any(|&v| x.firm_prefers(firm, WorkerId::new(v), WorkerId::new(w)))
                {
                    inbox[w].push(f);
                }
            }
        }

        let mut rejected_any = false;
        let mut partner = vec![usize::MAX; n];
        for (w, proposals) in inbox.iter().enumerate() {
            let wl = x.worker_list(WorkerId::new(w));
            let Some(&best) = proposals.iter().min_by_key(|&&f| wl.rank(f)) else {
                continue;
            };
            partner[w] = best;
            for &f in proposals.iter().filter(|&&f| f != best) {
                crossed[f][w] = true;
                rejections.push((WorkerId::new(w), FirmId::new(f)));
                rejected_any = true;
            }
        }
        if !rejected_any {
            // every firm made at least one proposal and every worker holds at
            // most one, so there were exactly n of them
            let m = Matching::from_worker_partners(partner)
                .expect("one proposal per firm and per worker");
            return CompoundTrace {
                outcome: CompoundOutcome::Matched(m),
                rejections,
                rounds,
            };
        }
    }
}

pub fn worker_optimal_compound(x: &CompoundInstance) -> CompoundOutcome {
    worker_optimal_compound_traced(x).outcome
}

pub fn firm_optimal_compound(x: &CompoundInstance) -> CompoundOutcome {
    firm_optimal_compound_traced(x).outcome
}

/// Closure of the brute-force intersection under every member's meet and
/// join. The first violation found is returned.
pub fn intersection_is_sublattice_check(
    instances: &[Instance],
    cap: usize,
) -> Result<ClosureVerdict, LatticeError> {
    let common: BTreeSet<Matching> = stable_under_all(instances, cap)?;
    for i in instances {
        let verdict = check_sublattice(i, &common)?;
        if !verdict.is_closed() {
            return Ok(verdict);
        }
    }
    Ok(ClosureVerdict::Closed)
}
