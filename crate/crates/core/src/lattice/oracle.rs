//! Brute force over all `n!` perfect matchings. This is the reference every
//! engine is checked against, so it deliberately shares nothing with them
//! beyond `is_stable`.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;

use super::LatticeError;
use crate::instance::{common_size, is_stable, Instance, Matching, WorkerId};

pub const DEFAULT_ORACLE_CAP: usize = 8;
pub const ORACLE_CAP_ENV: &str = "SMLAT_ORACLE_CAP";

/// The cap from `SMLAT_ORACLE_CAP`, falling back to [`DEFAULT_ORACLE_CAP`].
pub fn oracle_cap_from_env() -> usize {
    std::env::var(ORACLE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
}

/// Every perfect matching on `n` agents, in lexicographic order.
pub fn all_matchings(n: usize) -> impl Iterator<Item = Matching> {
    (0..n)
        .permutations(n)
        .map(|p| Matching::from_worker_partners(p).expect("permutation"))
}

/// All matchings stable under every instance in `instances`.
pub fn stable_under_all(
    instances: &[Instance],
    cap: usize,
) -> Result<BTreeSet<Matching>, LatticeError> {
    let n = common_size(instances)?;
    if n > cap {
        return Err(LatticeError::CapExceeded { n, cap });
    }
    // split on worker 1's firm so blocks can be checked in parallel
    let found: Vec<Vec<Matching>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let rest: Vec<usize> = (0..n).filter(|&f| f != first).collect();
            rest.iter()
                .copied()
                .permutations(rest.len())
                .filter_map(|tail| {
                    let mut partners = Vec::with_capacity(n);
                    partners.push(first);
                    partners.extend(tail);
                    let m = Matching::from_worker_partners(partners).expect("permutation");
                    instances.iter().all(|i| is_stable(i, &m)).then_some(m)
                })
                .collect()
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

pub fn enumerate_stable_capped(
    instance: &Instance,
    cap: usize,
) -> Result<BTreeSet<Matching>, LatticeError> {
    stable_under_all(std::slice::from_ref(instance), cap)
}

/// Stable set of `instance` with the cap taken from the environment.
pub fn enumerate_stable_bruteforce(
    instance: &Instance,
) -> Result<BTreeSet<Matching>, LatticeError> {
    enumerate_stable_capped(instance, oracle_cap_from_env())
}

/// The element of `set` every worker weakly prefers to all others, if any.
pub fn worker_optimal_of<'a>(
    instance: &Instance,
    set: impl IntoIterator<Item = &'a Matching> + Clone,
) -> Option<Matching> {
    extreme(instance, set, true)
}

/// The element of `set` every worker weakly disprefers to all others, if any.
pub fn firm_optimal_of<'a>(
    instance: &Instance,
    set: impl IntoIterator<Item = &'a Matching> + Clone,
) -> Option<Matching> {
    extreme(instance, set, false)
}

fn extreme<'a>(
    instance: &Instance,
    set: impl IntoIterator<Item = &'a Matching> + Clone,
    top: bool,
) -> Option<Matching> {
    let n = instance.n();
    set.clone()
        .into_iter()
        .find(|cand| {
            set.clone().into_iter().all(|other| {
                WorkerId::all(n).all(|w| {
                    let (c, o) = (cand.firm_of(w), other.firm_of(w));
                    c == o || instance.worker_prefers(w, c, o) == top
                })
            })
        })
        .cloned()
}
