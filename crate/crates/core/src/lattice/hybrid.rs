//! Splitting a nearby pair `(A, B)` into instances that each differ from `A`
//! in as few agents as possible, such that the matchings stable under `A`
//! and all hybrids are those stable under both `A` and `B`.
//!
//! The one-sided split is exact. The two-sided split is exact with a single
//! changed firm; with several, only one inclusion holds: a hybrid pairs the
//! changed worker's new list with the old lists of the other changed firms,
//! and such a pair can block a matching stable under both `A` and `B`.

use super::LatticeError;
use crate::instance::{diff_pq, Instance};

/// For a `(0, q)` pair: one hybrid per changed firm `f`, equal to `A` except
/// that `f` uses its list from `B`.
pub fn hybrid_instances_one_side(
    a: &Instance,
    b: &Instance,
) -> Result<Vec<Instance>, LatticeError> {
    let delta = diff_pq(a, b)?;
    if delta.p != 0 {
        return Err(LatticeError::NotZeroN { p: delta.p });
    }
    Ok(delta
        .changed_firms
        .iter()
        .map(|&f| {
            a.with_firm_list_from(f, b)
                .with_name(format!("{}[{f}]", b.name()))
        })
        .collect())
}

/// For a `(1, q)` pair with changed worker `w`: one hybrid per changed firm
/// `f`, equal to `A` except that both `w` and `f` use their lists from `B`.
///
/// Every matching stable under `A` and all hybrids is stable under `B`; the
/// converse needs `q <= 1` (see the module notes).
///
/// With no changed firm the single hybrid is `A` with `w`'s list from `B`
/// (that is, `B` itself). A `(0, q)` pair falls back to the one-sided split.
pub fn hybrid_instances_two_side(
    a: &Instance,
    b: &Instance,
) -> Result<Vec<Instance>, LatticeError> {
    let delta = diff_pq(a, b)?;
    let worker = match delta.p {
        0 => return hybrid_instances_one_side(a, b),
        1 => *delta.changed_workers.iter().next().expect("p = 1"),
        p => return Err(LatticeError::NotOneN { p }),
    };
    let with_worker = a.with_worker_list_from(worker, b);
    if delta.changed_firms.is_empty() {
        return Ok(vec![
            with_worker.with_name(format!("{}[{worker}]", b.name()))
        ]);
    }
    Ok(delta
        .changed_firms
        .iter()
        .map(|&f| {
            with_worker
                .with_firm_list_from(f, b)
                .with_name(format!("{}[{worker},{f}]", b.name()))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{blocking_pairs, parse_instance, FirmId, Matching, WorkerId};
    use crate::lattice::stable_under_all;

    fn load(text: &str) -> Instance {
        parse_instance(text).unwrap()
    }

    #[test]
    fn one_sided_example_has_two_hybrids() {
        let a = load(include_str!("../../fixtures/a5a.txt"));
        let b = load(include_str!("../../fixtures/b5a.txt"));
        let hs = hybrid_instances_one_side(&a, &b).unwrap();
        assert_eq!(hs.len(), 2);
        assert_eq!(hs[0].firm_list(FirmId::new(1)), b.firm_list(FirmId::new(1)));
        assert_eq!(hs[0].firm_list(FirmId::new(2)), a.firm_list(FirmId::new(2)));

        let mut family = vec![a.clone()];
        family.extend(hs);
        assert_eq!(
            stable_under_all(&family, 8).unwrap(),
            stable_under_all(&[a, b], 8).unwrap()
        );
    }

    #[test]
    fn identical_pair_has_no_hybrids() {
        let a = load(include_str!("../../fixtures/a6.txt"));
        assert!(hybrid_instances_one_side(&a, &a).unwrap().is_empty());
        assert!(hybrid_instances_two_side(&a, &a).unwrap().is_empty());
    }

    #[test]
    fn one_one_example_has_b_as_its_hybrid() {
        let a = load(include_str!("../../fixtures/a5b.txt"));
        let b = load(include_str!("../../fixtures/b5b.txt"));
        let hs = hybrid_instances_two_side(&a, &b).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].to_text(), b.to_text());
    }

    #[test]
    fn two_sided_split_can_lose_common_matchings() {
        let a = load(
            "n 4\nw 1: 3 2 1 4\nw 2: 1 4 2 3\nw 3: 1 4 3 2\nw 4: 2 3 4 1\n\
                      f 1: 2 1 3 4\nf 2: 4 2 3 1\nf 3: 3 2 1 4\nf 4: 3 2 4 1\n",
        );
        // worker 2 and firms b, c change
        let b = load(
            "n 4\nw 1: 3 2 1 4\nw 2: 3 2 1 4\nw 3: 1 4 3 2\nw 4: 2 3 4 1\n\
                      f 1: 2 1 3 4\nf 2: 1 3 4 2\nf 3: 1 2 4 3\nf 4: 3 2 4 1\n",
        );
        let d = diff_pq(&a, &b).unwrap();
        assert_eq!((d.p, d.q), (1, 2));

        let direct = stable_under_all(&[a.clone(), b.clone()], 8).unwrap();
        let hs = hybrid_instances_two_side(&a, &b).unwrap();
        let mut family = vec![a.clone()];
        family.extend(hs.iter().cloned());
        let split = stable_under_all(&family, 8).unwrap();
        assert!(split.is_subset(&direct));

        let lost: Matching = "1c 2a 3d 4b".parse().unwrap();
        assert!(direct.contains(&lost) && !split.contains(&lost));
        // worker 2's new list with firm c's old one
        let blocked_in = hs
            .iter()
            .find(|h| !blocking_pairs(h, &lost).is_empty())
            .unwrap();
        assert_eq!(
            blocking_pairs(blocked_in, &lost),
            vec![(WorkerId::new(1), FirmId::new(2))]
        );
        assert_eq!(
            blocked_in.firm_list(FirmId::new(2)),
            a.firm_list(FirmId::new(2))
        );
        assert_eq!(
            blocked_in.worker_list(WorkerId::new(1)),
            b.worker_list(WorkerId::new(1))
        );
    }

    #[test]
    fn gates() {
        let a = load(include_str!("../../fixtures/a4.txt"));
        let b = load(include_str!("../../fixtures/b4.txt"));
        assert_eq!(
            hybrid_instances_one_side(&a, &b).unwrap_err(),
            LatticeError::NotZeroN { p: 2 }
        );
        assert_eq!(
            hybrid_instances_two_side(&a, &b).unwrap_err(),
            LatticeError::NotOneN { p: 2 }
        );
        let a = load(include_str!("../../fixtures/a5b.txt"));
        let b = load(include_str!("../../fixtures/b5b.txt"));
        assert_eq!(
            hybrid_instances_one_side(&a, &b).unwrap_err(),
            LatticeError::NotZeroN { p: 1 }
        );
    }
}
