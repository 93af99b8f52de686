//! Families where at most one worker changes its list: deferred acceptance
//! run in one room per instance, with rejections shared between rooms.
//!
//! Read literally, the proposal rounds can settle on a matching that some
//! member instance blocks: a rejection from another room crosses a pair off
//! without the firm (or worker) ever seeing it in this room. So when the
//! rooms settle, [`Rounds::Repaired`] checks each room's matching against its
//! own instance and turns every blocking pair into one more cross-off that no
//! common stable matching can use, then resumes. [`Rounds::Literal`] keeps the
//! plain rounds for comparison.
//!
//! The gated entry points refuse families with two or more changed workers.
//! The `*_traced` functions accept any family; on those inputs the rooms may
//! end with different matchings, reported as [`MultiRoomOutcome::NoIdea`].

use serde::{Deserialize, Serialize};

use crate::instance::{
    blocking_pairs, common_size, family_delta, join, meet, FirmId, Instance, Matching, PQDelta,
    WorkerId,
};
use crate::lattice::LatticeError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultiRoomOutcome {
    Matched(Matching),
    NoMatch,
    /// Every room ended with a perfect matching, but not the same one.
    NoIdea {
        rooms: Vec<Matching>,
    },
}

impl MultiRoomOutcome {
    pub fn matching(&self) -> Option<&Matching> {
        match self {
            MultiRoomOutcome::Matched(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rounds {
    /// Stop as soon as a round produces no rejection.
    Literal,
    /// Also cross off pairs exposed by blocking pairs of the settled rooms.
    Repaired,
}

#[derive(Clone, Debug)]
pub struct MultiRoomTrace {
    pub outcome: MultiRoomOutcome,
    /// `(worker, firm, room)` for each rejection, preemptive ones and repairs
    /// included.
    pub rejections: Vec<(WorkerId, FirmId, usize)>,
    pub rounds: usize,
    /// Cross-offs added by the repair step.
    pub repairs: usize,
}

/// Gate for this engine: at most one worker's list varies across the family.
pub fn check_one_side_fixed(instances: &[Instance]) -> Result<PQDelta, LatticeError> {
    common_size(instances)?;
    let delta = family_delta(instances)?;
    if delta.p >= 2 {
        return Err(LatticeError::NotOneN { p: delta.p });
    }
    Ok(delta)
}

fn finish(rooms: Vec<Matching>) -> MultiRoomOutcome {
    if rooms.windows(2).all(|w| w[0] == w[1]) {
        MultiRoomOutcome::Matched(rooms.into_iter().next().expect("at least one room"))
    } else {
        MultiRoomOutcome::NoIdea { rooms }
    }
}

/// Workers propose in every room to their best firm not yet crossed off;
/// a rejection in any room crosses the firm off for that worker everywhere.
///
/// Repair: if `(w, f)` blocks room `I`'s matching `μ` under `I`, then in any
/// common stable matching `f` must get someone it prefers to `w`, hence to
/// `μ(f)`, so `(μ(f), f)` is crossed off.
pub fn worker_multiroom_traced(
    instances: &[Instance],
    mode: Rounds,
) -> Result<MultiRoomTrace, LatticeError> {
    let n = common_size(instances)?;
    let mut crossed = vec![vec![false; n]; n]; // crossed[w][f]
    let mut rejections = Vec::new();
    let mut rounds = 0;
    let mut repairs = 0;

    loop {
        rounds += 1;
        let mut rooms = Vec::with_capacity(instances.len());
        let mut fresh = Vec::new();
        for (r, inst) in instances.iter().enumerate() {
            let mut inbox: Vec<Vec<usize>> = vec![Vec::new(); n];
            for (w, row) in crossed.iter().enumerate() {
                let target = inst
                    .worker_list(WorkerId::new(w))
                    .order()
                    .iter()
                    .copied()
                    .find(|&f| !row[f]);
                match target {
                    Some(f) => inbox[f].push(w),
                    None => {
                        return Ok(MultiRoomTrace {
                            outcome: MultiRoomOutcome::NoMatch,
                            rejections,
                            rounds,
                            repairs,
                        })
                    }
                }
            }
            let mut partners = vec![usize::MAX; n];
            for (f, proposals) in inbox.iter().enumerate() {
                let fl = inst.firm_list(FirmId::new(f));
                let Some(&best) = proposals.iter().min_by_key(|&&w| fl.rank(w)) else {
                    continue;
                };
                partners[best] = f;
                for &w in proposals.iter().filter(|&&w| w != best) {
                    fresh.push((w, f));
                    rejections.push((WorkerId::new(w), FirmId::new(f), r));
                }
            }
            rooms.push(partners);
        }
        // sync once all rooms have acted
        if fresh.is_empty() {
            let rooms: Vec<Matching> = rooms
                .into_iter()
                .map(|p| {
                    Matching::from_worker_partners(p)
                        .expect("no rejection means one proposal per firm")
                })
                .collect();
            if mode == Rounds::Repaired {
                for (r, (inst, m)) in instances.iter().zip(&rooms).enumerate() {
                    for (_, f) in blocking_pairs(inst, m) {
                        let w = m.worker_of(f);
                        fresh.push((w.index(), f.index()));
                        rejections.push((w, f, r));
                    }
                }
                fresh.sort_unstable();
                fresh.dedup();
                repairs += fresh.len();
            }
            if fresh.is_empty() {
                return Ok(MultiRoomTrace {
                    outcome: finish(rooms),
                    rejections,
                    rounds,
                    repairs,
                });
            }
        }
        for (w, f) in fresh {
            crossed[w][f] = true;
        }
    }
}

/// Firms propose in every room to their best worker not yet crossed off.
/// Each worker keeps its best proposal in the room and rejects it together
/// with every firm it ranks strictly below, even firms that never proposed.
///
/// Repair: if `(w, f)` blocks room `I`'s matching `μ` under `I`, then in any
/// common stable matching `w` must get a firm it prefers to `f`, hence to
/// `μ(w)`, so `μ(w)` crosses `w` off.
pub fn firm_multiroom_traced(
    instances: &[Instance],
    mode: Rounds,
) -> Result<MultiRoomTrace, LatticeError> {
    let n = common_size(instances)?;
    let mut crossed = vec![vec![false; n]; n]; // crossed[f][w]
    let mut rejections = Vec::new();
    let mut rounds = 0;
    let mut repairs = 0;

    loop {
        rounds += 1;
        let mut rooms = Vec::with_capacity(instances.len());
        let mut fresh = Vec::new();
        for (r, inst) in instances.iter().enumerate() {
            let mut inbox: Vec<Vec<usize>> = vec![Vec::new(); n];
            for (f, row) in crossed.iter().enumerate() {
                let target = inst
                    .firm_list(FirmId::new(f))
                    .order()
                    .iter()
                    .copied()
                    .find(|&w| !row[w]);
                match target {
                    Some(w) => inbox[w].push(f),
                    None => {
                        return Ok(MultiRoomTrace {
                            outcome: MultiRoomOutcome::NoMatch,
                            rejections,
                            rounds,
                            repairs,
                        })
                    }
                }
            }
            let mut partners = vec![usize::MAX; n];
            for (w, proposals) in inbox.iter().enumerate() {
                let wl = inst.worker_list(WorkerId::new(w));
                let Some(&best) = proposals.iter().min_by_key(|&&f| wl.rank(f)) else {
                    continue;
                };
                partners[w] = best;
                for &f in &wl.order()[wl.rank(best) + 1..] {
                    if !crossed[f][w] {
                        fresh.push((f, w));
                        rejections.push((WorkerId::new(w), FirmId::new(f), r));
                    }
                }
            }
            rooms.push(partners);
        }
        fresh.sort_unstable();
        fresh.dedup();
        if fresh.is_empty() {
            let rooms: Vec<Matching> = rooms
                .into_iter()
                .map(|p| {
                    Matching::from_worker_partners(p)
                        .expect("no rejection means one proposal per worker")
                })
                .collect();
            if mode == Rounds::Repaired {
                for (r, (inst, m)) in instances.iter().zip(&rooms).enumerate() {
                    for (w, _) in blocking_pairs(inst, m) {
                        let f = m.firm_of(w);
                        fresh.push((f.index(), w.index()));
                        rejections.push((w, f, r));
                    }
                }
                fresh.sort_unstable();
                fresh.dedup();
                repairs += fresh.len();
            }
            if fresh.is_empty() {
                return Ok(MultiRoomTrace {
                    outcome: finish(rooms),
                    rejections,
                    rounds,
                    repairs,
                });
            }
        }
        for (f, w) in fresh {
            crossed[f][w] = true;
        }
    }
}

pub fn worker_optimal_multiroom(instances: &[Instance]) -> Result<MultiRoomOutcome, LatticeError> {
    check_one_side_fixed(instances)?;
    Ok(worker_multiroom_traced(instances, Rounds::Repaired)?.outcome)
}

pub fn firm_optimal_multiroom(instances: &[Instance]) -> Result<MultiRoomOutcome, LatticeError> {
    check_one_side_fixed(instances)?;
    Ok(firm_multiroom_traced(instances, Rounds::Repaired)?.outcome)
}

/// Whether meet and join of `m1`, `m2` come out the same under every member.
/// A member under which they are not both defined counts as disagreement.
pub fn verify_join_meet_agree(instances: &[Instance], m1: &Matching, m2: &Matching) -> bool {
    let results: Vec<_> = instances
        .iter()
        .map(|i| (meet(i, m1, m2), join(i, m1, m2)))
        .collect();
    results.iter().all(|r| r.0.is_ok() && r.1.is_ok()) && results.windows(2).all(|w| w[0] == w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::da::{firm_da, worker_da};
    use crate::instance::parse_instance;
    use crate::lattice::{firm_optimal_of, stable_under_all, worker_optimal_of};

    fn load(text: &str) -> Instance {
        parse_instance(text).unwrap()
    }

    #[test]
    fn gate() {
        let a6 = load(include_str!("../fixtures/a6.txt"));
        let b6 = load(include_str!("../fixtures/b6.txt"));
        assert_eq!(
            check_one_side_fixed(&[a6.clone(), b6.clone()]).unwrap_err(),
            LatticeError::NotOneN { p: 2 }
        );
        assert!(worker_optimal_multiroom(&[a6.clone(), b6]).is_err());
        let a = load(include_str!("../fixtures/a5b.txt"));
        let b = load(include_str!("../fixtures/b5b.txt"));
        assert_eq!(check_one_side_fixed(&[a.clone(), b]).unwrap().p, 1);
        assert_eq!(check_one_side_fixed(&[a.clone(), a]).unwrap().p, 0);
    }

    #[test]
    fn identical_rooms_are_plain_da() {
        let a = load(include_str!("../fixtures/a6.txt"));
        let fam = [a.clone(), a.clone()];
        assert_eq!(
            worker_optimal_multiroom(&fam).unwrap(),
            MultiRoomOutcome::Matched(worker_da(&a))
        );
        assert_eq!(
            firm_optimal_multiroom(&fam).unwrap(),
            MultiRoomOutcome::Matched(firm_da(&a))
        );
    }

    #[test]
    fn one_one_example_matches_oracle() {
        let a = load(include_str!("../fixtures/a5b.txt"));
        let b = load(include_str!("../fixtures/b5b.txt"));
        let fam = [a.clone(), b.clone()];
        let common = stable_under_all(&fam, 8).unwrap();
        let top = worker_optimal_of(&a, &common).unwrap();
        assert_eq!(worker_optimal_of(&b, &common).as_ref(), Some(&top));
        let w = worker_multiroom_traced(&fam, Rounds::Repaired).unwrap();
        let f = firm_multiroom_traced(&fam, Rounds::Repaired).unwrap();
        assert_eq!(w.outcome, MultiRoomOutcome::Matched(top));
        assert_eq!(
            f.outcome,
            MultiRoomOutcome::Matched(firm_optimal_of(&a, &common).unwrap())
        );
        for &(wk, fm, _) in w.rejections.iter().chain(&f.rejections) {
            assert!(common.iter().all(|m| !m.contains(wk, fm)));
        }
        for m1 in &common {
            for m2 in &common {
                assert!(verify_join_meet_agree(&fam, m1, m2));
            }
        }
    }

    #[test]
    fn literal_rounds_can_settle_on_a_blocked_matching() {
        // worker 2 is the only change; its room-B rejection of firm a keeps
        // a from ever proposing to it in room A
        let a: Instance =
            "n 3\nw 1: 2 3 1\nw 2: 1 3 2\nw 3: 3 2 1\nf 1: 3 2 1\nf 2: 3 2 1\nf 3: 2 1 3"
                .parse()
                .unwrap();
        let b = a.with_worker_list_from(
            WorkerId::new(1),
            &"n 3\nw 1: 2 3 1\nw 2: 3 2 1\nw 3: 3 2 1\nf 1: 3 2 1\nf 2: 3 2 1\nf 3: 2 1 3"
                .parse()
                .unwrap(),
        );
        let fam = [a.clone(), b];
        assert!(stable_under_all(&fam, 8).unwrap().is_empty());
        let literal = firm_multiroom_traced(&fam, Rounds::Literal).unwrap();
        let m = literal
            .outcome
            .matching()
            .expect("literal rounds report a matching");
        assert_eq!(
            blocking_pairs(&a, m),
            vec![(WorkerId::new(1), FirmId::new(0))]
        );
        let repaired = firm_multiroom_traced(&fam, Rounds::Repaired).unwrap();
        assert_eq!(repaired.outcome, MultiRoomOutcome::NoMatch);
        assert!(repaired.repairs > 0);
    }

    #[test]
    fn twisted_pair_disagrees() {
        let a = load(include_str!("../fixtures/a6.txt"));
        let b = load(include_str!("../fixtures/b6.txt"));
        let m1: Matching = "1b 2a 3d 4c 5e 6f".parse().unwrap();
        let m2: Matching = "1a 2b 3c 4d 5f 6e".parse().unwrap();
        assert!(verify_join_meet_agree(std::slice::from_ref(&a), &m1, &m2));
        assert!(!verify_join_meet_agree(&[a, b], &m1, &m2));
    }
}
