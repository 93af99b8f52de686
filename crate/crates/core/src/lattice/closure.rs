use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::instance::{join, meet, Instance, InstanceError, Matching};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeOp {
    Meet,
    Join,
}

impl fmt::Display for LatticeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeOp::Meet => "meet",
            LatticeOp::Join => "join",
        })
    }
}

/// Two members whose meet or join falls outside the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureWitness {
    pub first: Matching,
    pub second: Matching,
    pub op: LatticeOp,
    pub result: Matching,
}

impl fmt::Display for ClosureWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} of {} and {} is {}",
            self.op, self.first, self.second, self.result
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureVerdict {
    Closed,
    Violated(ClosureWitness),
}

impl ClosureVerdict {
    pub fn is_closed(&self) -> bool {
        matches!(self, ClosureVerdict::Closed)
    }

    pub fn witness(&self) -> Option<&ClosureWitness> {
        match self {
            ClosureVerdict::Closed => None,
            ClosureVerdict::Violated(w) => Some(w),
        }
    }
}

fn check(
    instance: &Instance,
    set: &BTreeSet<Matching>,
    ops: &[LatticeOp],
) -> Result<ClosureVerdict, InstanceError> {
    let items: Vec<&Matching> = set.iter().collect();
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            for &op in ops {
                let result = match op {
                    LatticeOp::Meet => meet(instance, a, b)?,
                    LatticeOp::Join => join(instance, a, b)?,
                };
                if !set.contains(&result) {
                    return Ok(ClosureVerdict::Violated(ClosureWitness {
                        first: (*a).clone(),
                        second: (*b).clone(),
                        op,
                        result,
                    }));
                }
            }
        }
    }
    Ok(ClosureVerdict::Closed)
}

/// Whether `set` (stable matchings of `instance`) is closed under both lattice operations.
pub fn check_sublattice(
    instance: &Instance,
    set: &BTreeSet<Matching>,
) -> Result<ClosureVerdict, InstanceError> {
    check(instance, set, &[LatticeOp::Join, LatticeOp::Meet])
}

/// Whether `set` is closed under the one operation `op`.
pub fn check_semisublattice(
    instance: &Instance,
    set: &BTreeSet<Matching>,
    op: LatticeOp,
) -> Result<ClosureVerdict, InstanceError> {
    check(instance, set, &[op])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{is_stable, parse_instance};
    use crate::lattice::enumerate_stable_capped;

    #[test]
    fn full_stable_set_is_closed() {
        let a = parse_instance(include_str!("../../fixtures/a6.txt")).unwrap();
        let all = enumerate_stable_capped(&a, 8).unwrap();
        assert!(check_sublattice(&a, &all).unwrap().is_closed());
    }

    #[test]
    fn difference_sets_of_the_examples_are_not_closed() {
        for (a, b) in [
            (
                include_str!("../../fixtures/a5a.txt"),
                include_str!("../../fixtures/b5a.txt"),
            ),
            (
                include_str!("../../fixtures/a5b.txt"),
                include_str!("../../fixtures/b5b.txt"),
            ),
        ] {
            let a = parse_instance(a).unwrap();
            let b = parse_instance(b).unwrap();
            let diff: BTreeSet<_> = enumerate_stable_capped(&a, 8)
                .unwrap()
                .into_iter()
                .filter(|m| !is_stable(&b, m))
                .collect();
            for op in [LatticeOp::Join, LatticeOp::Meet] {
                let v = check_semisublattice(&a, &diff, op).unwrap();
                let w = v.witness().expect("witness");
                assert_eq!(w.op, op);
                assert!(is_stable(&b, &w.result));
            }
        }
    }

    #[test]
    fn singleton_is_closed() {
        let a = parse_instance(include_str!("../../fixtures/a4.txt")).unwrap();
        let s: BTreeSet<_> = [Matching::from_worker_partners(vec![0, 1, 2, 3]).unwrap()].into();
        assert!(check_sublattice(&a, &s).unwrap().is_closed());
    }
}
