//! Gale–Shapley deferred acceptance for a single instance.

use crate::instance::{FirmId, Instance, Matching, PreferenceList, WorkerId};

/// Result of one deferred-acceptance run, with every rejection it made.
#[derive(Clone, Debug)]
pub struct DaTrace {
    pub matching: Matching,
    /// Rejected pairs, in the order the rejections happened.
    pub rejections: Vec<(WorkerId, FirmId)>,
    pub rounds: usize,
}

/// Synchronous rounds: every free proposer (ascending id) proposes to its
/// next receiver, then every receiver keeps its best proposal so far.
/// Returns `proposer -> receiver` and the rejected `(proposer, receiver)` pairs.
fn run(
    proposers: &[PreferenceList],
    receivers: &[PreferenceList],
) -> (Vec<usize>, Vec<(usize, usize)>, usize) {
    let n = proposers.len();
    let mut next = vec![0usize; n];
    let mut held: Vec<Option<usize>> = vec![None; n];
    let mut free: Vec<usize> = (0..n).collect();
    let mut rejections = Vec::new();
    let mut rounds = 0;
    let mut inbox: Vec<Vec<usize>> = vec![Vec::new(); n];

    while !free.is_empty() {
        rounds += 1;
        for &p in &free {
            let r = proposers[p].at(next[p]);
            inbox[r].push(p);
        }
        free.clear();
        for (r, proposals) in inbox.iter_mut().enumerate() {
            if proposals.is_empty() {
                continue;
            }
            let list = &receivers[r];
            let mut best = held[r];
            for &p in proposals.iter() {
                best = match best {
                    Some(b) if list.prefers(b, p) => Some(b),
                    _ => Some(p),
                };
            }
            let keep = best.expect("non-empty inbox");
            for &p in held[r].iter().chain(proposals.iter()) {
                if p != keep {
                    rejections.push((p, r));
                    next[p] += 1;
                    free.push(p);
                }
            }
            held[r] = Some(keep);
            proposals.clear();
        }
        free.sort_unstable();
    }

    let mut partner = vec![usize::MAX; n];
    for (r, h) in held.iter().enumerate() {
        partner[h.expect("complete lists leave nobody unmatched")] = r;
    }
    (partner, rejections, rounds)
}

/// Worker-proposing deferred acceptance with its rejection log.
pub fn worker_da_traced(instance: &Instance) -> DaTrace {
    let (partner, rejected, rounds) = run(instance.worker_lists(), instance.firm_lists());
    DaTrace {
        matching: Matching::from_worker_partners(partner)
            .expect("deferred acceptance yields a bijection"),
        rejections: rejected
            .into_iter()
            .map(|(w, f)| (WorkerId::new(w), FirmId::new(f)))
            .collect(),
        rounds,
    }
}

/// Firm-proposing deferred acceptance with its rejection log.
pub fn firm_da_traced(instance: &Instance) -> DaTrace {
    let (firm_partner, rejected, rounds) = run(instance.firm_lists(), instance.worker_lists());
    let mut partner = vec![0; instance.n()];
    for (f, &w) in firm_partner.iter().enumerate() {
        partner[w] = f;
    }
    DaTrace {
        matching: Matching::from_worker_partners(partner)
            .expect("deferred acceptance yields a bijection"),
        rejections: rejected
            .into_iter()
            .map(|(f, w)| (WorkerId::new(w), FirmId::new(f)))
            .collect(),
        rounds,
    }
}

/// The worker-optimal stable matching.
pub fn worker_da(instance: &Instance) -> Matching {
    worker_da_traced(instance).matching
}

/// The firm-optimal stable matching.
pub fn firm_da(instance: &Instance) -> Matching {
    firm_da_traced(instance).matching
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{is_stable, parse_instance};

    fn identity_instance(n: usize) -> Instance {
        let lists: Vec<Vec<usize>> = (0..n).map(|_| (0..n).collect()).collect();
        Instance::new(lists.clone(), lists).unwrap()
    }

    #[test]
    fn identity_instance_matches_diagonal() {
        for n in 1..6 {
            let i = identity_instance(n);
            assert_eq!(worker_da(&i), Matching::identity(n));
            assert_eq!(firm_da(&i), Matching::identity(n));
        }
    }

    #[test]
    fn single_agent() {
        let i = parse_instance("n 1\nw 1: 1\nf 1: 1\n").unwrap();
        assert_eq!(worker_da(&i), Matching::identity(1));
        assert_eq!(firm_da(&i), Matching::identity(1));
    }

    #[test]
    fn outputs_are_stable_and_bounded() {
        let i = parse_instance(include_str!("../fixtures/a6.txt")).unwrap();
        let t = worker_da_traced(&i);
        assert!(is_stable(&i, &t.matching));
        assert!(t.rounds <= 36);
        let t = firm_da_traced(&i);
        assert!(is_stable(&i, &t.matching));
        assert!(t.rounds <= 36);
    }

    #[test]
    fn two_sided_conflict() {
        // workers want opposite firms from what firms want: two stable matchings
        let i = parse_instance("n 2\nw 1: 1 2\nw 2: 2 1\nf 1: 2 1\nf 2: 1 2\n").unwrap();
        assert_eq!(worker_da(&i).to_string(), "{1a, 2b}");
        assert_eq!(firm_da(&i).to_string(), "{1b, 2a}");
    }
}
