//! Checks of one family against the brute-force oracle, shared by the fuzz
//! harness, the fixture suite and the integration tests. Each returns a short
//! summary on success and the offending detail on failure.

use std::collections::{BTreeSet, HashSet};

use crate::compound::{
    build_compound, firm_optimal_compound_traced, is_strongly_stable,
    worker_optimal_compound_traced, CompoundOutcome,
};
use crate::da::{firm_da, worker_da};
use crate::instance::{
    blocking_pairs, diff_pq, family_delta, is_stable, join, meet, show_pair, show_pairs, FirmId,
    Instance, Matching, PQDelta, WorkerId,
};
use crate::lattice::{
    all_matchings, build_rotation_poset, check_sublattice, compression_from_membership, eliminate,
    enumerate_stable_capped, firm_optimal_of, hybrid_instances_one_side, hybrid_instances_two_side,
    stable_under_all, union_edge_sets, worker_optimal_of, LatticeError,
};
use crate::lp::{
    build_lp, rounding_agreement, solve_feasible, Agreement, FractionalMatching, LpSolution,
    Rational,
};
use crate::multiroom::{
    firm_multiroom_traced, verify_join_meet_agree, worker_multiroom_traced, MultiRoomOutcome,
    MultiRoomTrace, Rounds,
};

pub type CheckResult = Result<String, String>;

/// A family with its oracle intersection computed once.
#[derive(Clone, Debug)]
pub struct Trial {
    pub family: Vec<Instance>,
    pub delta: PQDelta,
    pub common: BTreeSet<Matching>,
}

impl Trial {
    pub fn new(family: Vec<Instance>, cap: usize) -> Result<Self, LatticeError> {
        let common = stable_under_all(&family, cap)?;
        let delta = family_delta(&family)?;
        Ok(Self {
            family,
            delta,
            common,
        })
    }

    pub fn base(&self) -> &Instance {
        &self.family[0]
    }

    /// The oracle's worker-optimal common matching, required to be the same
    /// under every member's dominance order.
    fn extreme(&self, top: bool) -> Result<Option<Matching>, String> {
        let pick = |i: &Instance| {
            if top {
                worker_optimal_of(i, &self.common)
            } else {
                firm_optimal_of(i, &self.common)
            }
        };
        let first = pick(self.base());
        if !self.common.is_empty() && first.is_none() {
            return Err(format!(
                "intersection has no {} extreme under {}",
                side(top),
                self.base().name()
            ));
        }
        for i in &self.family[1..] {
            if pick(i) != first {
                return Err(format!(
                    "{} extreme differs between {} and {}",
                    side(top),
                    self.base().name(),
                    i.name()
                ));
            }
        }
        Ok(first)
    }

    fn hybrids(&self) -> Result<Vec<Vec<Instance>>, LatticeError> {
        let a = self.base();
        self.family[1..]
            .iter()
            .map(|b| {
                if self.delta.p == 0 {
                    hybrid_instances_one_side(a, b)
                } else {
                    hybrid_instances_two_side(a, b)
                }
            })
            .collect()
    }
}

fn side(top: bool) -> &'static str {
    if top {
        "worker-optimal"
    } else {
        "firm-optimal"
    }
}

fn show(set: &BTreeSet<Matching>) -> String {
    let items: Vec<String> = set.iter().map(|m| m.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

/// Closed sets of the rotation poset against the brute-force stable set:
/// bijection, no repeated output, one rotation per pair, and the same
/// matching for every elimination order of a closed set.
pub fn poset_bijection(instance: &Instance, cap: usize) -> CheckResult {
    let oracle = enumerate_stable_capped(instance, cap).map_err(|e| e.to_string())?;
    let poset = build_rotation_poset(instance);
    ensure(poset.top() == &worker_da(instance), || {
        "poset top is not worker DA".into()
    })?;
    ensure(poset.bottom() == &firm_da(instance), || {
        "poset bottom is not firm DA".into()
    })?;

    let emitted: Vec<Matching> = poset.enumerate().collect();
    let distinct: BTreeSet<Matching> = emitted.iter().cloned().collect();
    ensure(distinct.len() == emitted.len(), || {
        format!("{} outputs, {} distinct", emitted.len(), distinct.len())
    })?;
    ensure(distinct == oracle, || {
        format!(
            "closed sets give {}, oracle {}",
            show(&distinct),
            show(&oracle)
        )
    })?;

    let mut seen = HashSet::new();
    for (i, r) in poset.rotations().iter().enumerate() {
        for pair in r.pairs() {
            ensure(seen.insert(*pair), || {
                format!(
                    "pair {} recurs in rotation {}",
                    show_pair(pair.0, pair.1),
                    i + 1
                )
            })?;
        }
    }

    let order = poset.order();
    for (closed, m) in poset.closed_sets() {
        // greedy topological order that prefers the highest index available
        let mut done = vec![false; closed.len()];
        let mut current = poset.top().clone();
        loop {
            let next = (0..closed.len()).rev().find(|&i| {
                closed[i] && !done[i] && (0..closed.len()).all(|j| !order.precedes(j, i) || done[j])
            });
            let Some(i) = next else { break };
            current =
                eliminate(instance, &current, &poset.rotations()[i]).map_err(|e| e.to_string())?;
            done[i] = true;
        }
        ensure(done == closed, || {
            "closed set could not be eliminated completely".into()
        })?;
        ensure(current == m, || {
            format!("elimination orders disagree: {current} vs {m}")
        })?;
    }
    Ok(format!(
        "{} stable, {} rotations",
        oracle.len(),
        poset.len()
    ))
}

fn check_rejections(
    common: &BTreeSet<Matching>,
    rejected: impl IntoIterator<Item = (WorkerId, FirmId)>,
) -> Result<(), String> {
    for (w, f) in rejected {
        if let Some(m) = common.iter().find(|m| m.contains(w, f)) {
            return Err(format!(
                "rejected pair {} is used by common matching {m}",
                show_pair(w, f)
            ));
        }
    }
    Ok(())
}

fn compare(label: &str, got: Option<&Matching>, want: &Option<Matching>) -> Result<(), String> {
    ensure(got == want.as_ref(), || {
        let fmt = |m: Option<&Matching>| m.map_or("no match".to_string(), |m| m.to_string());
        format!(
            "{label}: engine gives {}, oracle {}",
            fmt(got),
            fmt(want.as_ref())
        )
    })
}

/// Compound engines against the oracle extremes, with rejection soundness.
/// Needs a family whose worker lists all agree.
pub fn compound_engines(trial: &Trial) -> CheckResult {
    let x = build_compound(&trial.family).map_err(|e| e.to_string())?;
    for top in [true, false] {
        let t = if top {
            worker_optimal_compound_traced(&x)
        } else {
            firm_optimal_compound_traced(&x)
        };
        let want = trial.extreme(top)?;
        ensure(
            (t.outcome == CompoundOutcome::NoMatch) == trial.common.is_empty(),
            || {
                format!(
                    "{}: outcome {:?} with {} common matchings",
                    side(top),
                    t.outcome,
                    trial.common.len()
                )
            },
        )?;
        compare(side(top), t.outcome.matching(), &want)?;
        check_rejections(&trial.common, t.rejections.iter().copied())?;
    }
    Ok(format!("{} common", trial.common.len()))
}

/// Strong stability in the compound instance is stability under every member.
pub fn strong_stability(trial: &Trial) -> CheckResult {
    let x = build_compound(&trial.family).map_err(|e| e.to_string())?;
    for m in all_matchings(x.n()) {
        let strong = is_strongly_stable(&x, &m);
        let all = trial.common.contains(&m);
        ensure(strong == all, || {
            format!("{m}: strongly stable = {strong}, stable under all = {all}")
        })?;
    }
    Ok("all matchings agree".into())
}

fn multiroom_outcome(trial: &Trial, top: bool, mode: Rounds) -> Result<MultiRoomTrace, String> {
    let run = if top {
        worker_multiroom_traced
    } else {
        firm_multiroom_traced
    };
    run(&trial.family, mode).map_err(|e| e.to_string())
}

/// Repaired multi-room engines against the oracle extremes. Returns the
/// discrepancies of the literal rounds as notes.
pub fn multiroom_engines(trial: &Trial) -> Result<(String, Vec<String>), String> {
    let mut notes = Vec::new();
    let mut repairs = 0;
    for top in [true, false] {
        let want = trial.extreme(top)?;
        let t = multiroom_outcome(trial, top, Rounds::Repaired)?;
        if let MultiRoomOutcome::NoIdea { rooms } = &t.outcome {
            return Err(format!("{}: rooms disagree: {rooms:?}", side(top)));
        }
        ensure(
            (t.outcome == MultiRoomOutcome::NoMatch) == trial.common.is_empty(),
            || {
                format!(
                    "{}: outcome {:?} with {} common matchings",
                    side(top),
                    t.outcome,
                    trial.common.len()
                )
            },
        )?;
        compare(side(top), t.outcome.matching(), &want)?;
        check_rejections(&trial.common, t.rejections.iter().map(|&(w, f, _)| (w, f)))?;
        repairs += t.repairs;

        let literal = multiroom_outcome(trial, top, Rounds::Literal)?;
        if literal.outcome.matching() != want.as_ref() || literal.outcome != t.outcome {
            notes.push(format!(
                "literal {} rounds give {:?}, oracle {:?}",
                side(top),
                literal.outcome,
                want
            ));
        }
    }
    Ok((
        format!("{} common, {repairs} repair cross-offs", trial.common.len()),
        notes,
    ))
}

/// Matchings stable under `A` and every hybrid are stable under the family.
/// The converse is required for one-sided families and for a single changed
/// firm; with one changed worker and several changed firms a hybrid can pair
/// the worker's new list with another firm's old one and block a common
/// matching, so a strict inclusion there is returned as a note.
pub fn hybrid_identity(trial: &Trial, cap: usize) -> Result<(String, Vec<String>), String> {
    let per_pair = trial.hybrids().map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    let mut all = vec![trial.base().clone()];
    for (b, hybrids) in trial.family[1..].iter().zip(&per_pair) {
        let mut fam = vec![trial.base().clone()];
        fam.extend(hybrids.iter().cloned());
        let via = stable_under_all(&fam, cap).map_err(|e| e.to_string())?;
        let direct =
            stable_under_all(&[trial.base().clone(), b.clone()], cap).map_err(|e| e.to_string())?;
        ensure(via.is_subset(&direct), || {
            format!(
                "hybrids of {} admit {} beyond {}",
                b.name(),
                show(&via),
                show(&direct)
            )
        })?;
        if via != direct {
            let missing: BTreeSet<Matching> = direct.difference(&via).cloned().collect();
            let detail = missing
                .iter()
                .map(|m| {
                    let by: Vec<String> = hybrids
                        .iter()
                        .filter_map(|h| {
                            let bp = blocking_pairs(h, m);
                            (!bp.is_empty())
                                .then(|| format!("{} blocks it by {}", h.name(), show_pairs(&bp)))
                        })
                        .collect();
                    format!("{m}: {}", by.join("; "))
                })
                .collect::<Vec<_>>()
                .join(" | ");
            let delta = diff_pq(trial.base(), b).map_err(|e| e.to_string())?;
            ensure(delta.p == 1 && delta.q >= 2, || {
                format!("hybrids of {} lose {detail}", b.name())
            })?;
            notes.push(format!(
                "hybrids of {} ({delta}) lose common matchings: {detail}",
                b.name()
            ));
        }
        all.extend(hybrids.iter().cloned());
    }
    let via = stable_under_all(&all, cap).map_err(|e| e.to_string())?;
    ensure(via.is_subset(&trial.common), || {
        format!(
            "all hybrids admit {}, oracle {}",
            show(&via),
            show(&trial.common)
        )
    })?;
    ensure(!notes.is_empty() || via == trial.common, || {
        format!(
            "all hybrids give {}, oracle {}",
            show(&via),
            show(&trial.common)
        )
    })?;
    Ok((format!("{} hybrids", all.len() - 1), notes))
}

/// Compressions of `A`'s poset joined by edge-set union regenerate the oracle
/// intersection. One-sided families contribute one compression per hybrid;
/// families with a changed worker one per member, since each `(A, B_i)` is a
/// sublattice of `A`'s lattice but its two-sided hybrids need not split it.
pub fn compression_union(trial: &Trial) -> CheckResult {
    let a = trial.base();
    let poset = build_rotation_poset(a);
    let parts: Vec<Instance> = if trial.delta.p == 0 {
        trial
            .hybrids()
            .map_err(|e| e.to_string())?
            .into_iter()
            .flatten()
            .collect()
    } else {
        trial.family[1..].to_vec()
    };
    let mut comps = Vec::new();
    for h in &parts {
        let c = compression_from_membership(&poset, |m| is_stable(h, m))
            .map_err(|e| format!("{}: {e}", h.name()))?;
        let got: Vec<Matching> = c.enumerate(&poset).collect();
        let set: BTreeSet<Matching> = got.iter().cloned().collect();
        let want: BTreeSet<Matching> = poset.enumerate().filter(|m| is_stable(h, m)).collect();
        ensure(set.len() == got.len() && set == want, || {
            format!("compression for {} gives {}", h.name(), show(&set))
        })?;
        comps.push(c);
    }
    let union = union_edge_sets(&poset, &comps).map_err(|e| e.to_string())?;
    let got: Vec<Matching> = union.enumerate(&poset).collect();
    let set: BTreeSet<Matching> = got.iter().cloned().collect();
    ensure(set.len() == got.len(), || {
        "union compression repeats a matching".into()
    })?;
    ensure(set == trial.common, || {
        format!("union gives {}, oracle {}", show(&set), show(&trial.common))
    })?;
    Ok(format!(
        "{} compressions, {} common",
        comps.len(),
        set.len()
    ))
}

/// A single instance: the phase-one vertex is an integral stable matching,
/// and rounding the average of all stable matchings stays in the stable set.
pub fn lp_single(instance: &Instance, cap: usize, thetas: &[Rational]) -> CheckResult {
    let stable = enumerate_stable_capped(instance, cap).map_err(|e| e.to_string())?;
    let model = build_lp(std::slice::from_ref(instance)).map_err(|e| e.to_string())?;
    let LpSolution::Feasible(x) = solve_feasible(&model) else {
        return Err("single-instance model is infeasible".into());
    };
    let m = x
        .to_matching()
        .ok_or_else(|| format!("vertex is fractional:\n{x}"))?;
    ensure(stable.contains(&m), || format!("vertex {m} is not stable"))?;
    let avg = FractionalMatching::average(&stable).expect("stable set is nonempty");
    let checked = rounded_within(&avg, std::slice::from_ref(instance), thetas, &stable)?;
    Ok(format!("vertex {m}, {checked} roundings"))
}

fn rounded_within(
    x: &FractionalMatching,
    family: &[Instance],
    thetas: &[Rational],
    within: &BTreeSet<Matching>,
) -> Result<usize, String> {
    match rounding_agreement(x, family, thetas).map_err(|e| e.to_string())? {
        Agreement::Agree {
            checked, matchings, ..
        } => {
            let stray: BTreeSet<Matching> = matchings.difference(within).cloned().collect();
            ensure(stray.is_empty(), || {
                format!("roundings {} fall outside the oracle set", show(&stray))
            })?;
            Ok(checked)
        }
        Agreement::Disagree { theta, roundings } => {
            let rs: Vec<String> = roundings.iter().map(|m| m.to_string()).collect();
            Err(format!("θ = {theta} rounds to {}", rs.join(" / ")))
        }
    }
}

/// The joint model is feasible exactly when the intersection is nonempty,
/// and rounding its vertex and the average of the intersection agrees across
/// members on at least `min_checked` interior θ.
pub fn lp_joint(trial: &Trial, thetas: &[Rational], min_checked: usize) -> CheckResult {
    let model = build_lp(&trial.family).map_err(|e| e.to_string())?;
    let sol = solve_feasible(&model);
    ensure(sol.point().is_some() != trial.common.is_empty(), || {
        format!(
            "LP feasible = {}, {} common matchings",
            sol.point().is_some(),
            trial.common.len()
        )
    })?;
    let Some(x) = sol.point() else {
        return Ok("infeasible, intersection empty".into());
    };
    ensure(x.is_doubly_stochastic() && x.satisfies(&model), || {
        "returned point violates the model".into()
    })?;
    let mut total = 0;
    let avg = FractionalMatching::average(&trial.common).expect("nonempty");
    for point in [x, &avg] {
        let checked = rounded_within(point, &trial.family, thetas, &trial.common)?;
        ensure(checked >= min_checked, || {
            format!("only {checked} interior θ values")
        })?;
        total += checked;
    }
    Ok(format!("feasible, {total} roundings agree"))
}

/// The intersection is closed under each member's meet and join.
pub fn sublattice_closure(trial: &Trial) -> CheckResult {
    for i in &trial.family {
        let v = check_sublattice(i, &trial.common).map_err(|e| e.to_string())?;
        if let Some(w) = v.witness() {
            return Err(format!("under {}: {w}", i.name()));
        }
    }
    Ok(format!("{} common", trial.common.len()))
}

/// Meet and join of common matchings do not depend on the member used.
pub fn join_meet_agreement(trial: &Trial) -> CheckResult {
    let items: Vec<&Matching> = trial.common.iter().collect();
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            ensure(verify_join_meet_agree(&trial.family, a, b), || {
                format!("meet/join of {a} and {b} depend on the instance")
            })?;
        }
    }
    Ok(format!(
        "{} pairs",
        items.len() * items.len().saturating_sub(1) / 2
    ))
}

/// Outside the proven range: everything is observed, nothing judged.
/// Returns `(kind, detail)` findings.
pub fn research(trial: &Trial, thetas: &[Rational]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for i in &trial.family {
        if let Ok(v) = check_sublattice(i, &trial.common) {
            if let Some(w) = v.witness() {
                let pairs = |m: &Matching| {
                    trial
                        .family
                        .iter()
                        .filter(|j| !is_stable(j, m))
                        .map(|j| j.name().to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                out.push((
                    "not a sublattice".into(),
                    format!(
                        "under {}: {w}; result unstable under {}",
                        i.name(),
                        pairs(&w.result)
                    ),
                ));
                break;
            }
        }
    }
    for top in [true, false] {
        if let Ok(t) = multiroom_outcome(trial, top, Rounds::Repaired) {
            let want = trial.extreme(top).ok().flatten();
            match &t.outcome {
                MultiRoomOutcome::NoIdea { rooms } => {
                    let rs: Vec<String> = rooms.iter().map(|m| m.to_string()).collect();
                    out.push((
                        "multiroom no idea".into(),
                        format!("{}: rooms end at {}", side(top), rs.join(" / ")),
                    ));
                }
                o if o.matching() != want.as_ref() => {
                    out.push((
                        "multiroom mismatch".into(),
                        format!("{}: {o:?}, oracle {want:?}", side(top)),
                    ));
                }
                _ => {}
            }
        }
    }
    if let Ok(model) = build_lp(&trial.family) {
        if let Some(x) = solve_feasible(&model).point() {
            if trial.common.is_empty() {
                out.push((
                    "fractional joint point".into(),
                    format!("LP feasible with empty intersection:\n{x}"),
                ));
            } else if !x.is_integral() {
                out.push(("fractional joint vertex".into(), x.to_string()));
            }
            if let Ok(Agreement::Disagree { theta, roundings }) =
                rounding_agreement(x, &trial.family, thetas)
            {
                let rs: Vec<String> = roundings.iter().map(|m| m.to_string()).collect();
                out.push((
                    "rounding disagreement".into(),
                    format!("θ = {theta}: {}", rs.join(" / ")),
                ));
            }
        }
    }
    out
}

/// Meet and join under one instance, for the fixture suite.
pub fn meet_join(
    instance: &Instance,
    a: &Matching,
    b: &Matching,
) -> Result<(Matching, Matching), String> {
    Ok((
        meet(instance, a, b).map_err(|e| e.to_string())?,
        join(instance, a, b).map_err(|e| e.to_string())?,
    ))
}
