//! Every engine output against the brute-force intersection.

use smlat::compound::{
    build_compound, firm_optimal_compound_traced, worker_optimal_compound_traced,
};
use smlat::lattice::{firm_optimal_of, stable_under_all, worker_optimal_of};
use smlat::multiroom::{firm_multiroom_traced, worker_multiroom_traced, MultiRoomOutcome, Rounds};
use smlat::random::{random_family, trial_rng};

#[test]
fn compound_engine_on_firm_only_families() {
    for k in [2, 3] {
        for t in 0..150 {
            let fam = random_family(5, k, 0, 2, &mut trial_rng(11 + k as u64, t));
            let common = stable_under_all(&fam, 8).unwrap();
            let x = build_compound(&fam).unwrap();
            let w = worker_optimal_compound_traced(&x);
            let f = firm_optimal_compound_traced(&x);
            assert_eq!(
                w.outcome.matching(),
                worker_optimal_of(&fam[0], &common).as_ref(),
                "trial {t}"
            );
            assert_eq!(
                f.outcome.matching(),
                firm_optimal_of(&fam[0], &common).as_ref(),
                "trial {t}"
            );
            for (wk, fm) in w.rejections.iter().chain(&f.rejections) {
                assert!(common.iter().all(|m| !m.contains(*wk, *fm)), "trial {t}");
            }
        }
    }
}

#[test]
fn multiroom_engine_on_one_worker_families() {
    for (k, q) in [(2, 3), (3, 2), (2, 5)] {
        for t in 0..150 {
            let fam = random_family(
                5,
                k,
                1,
                q,
                &mut trial_rng(100 + k as u64 * 10 + q as u64, t),
            );
            let common = stable_under_all(&fam, 8).unwrap();
            let w = worker_multiroom_traced(&fam, Rounds::Repaired).unwrap();
            let f = firm_multiroom_traced(&fam, Rounds::Repaired).unwrap();
            assert!(
                !matches!(w.outcome, MultiRoomOutcome::NoIdea { .. }),
                "trial {t}"
            );
            assert!(
                !matches!(f.outcome, MultiRoomOutcome::NoIdea { .. }),
                "trial {t}"
            );
            for i in &fam {
                assert_eq!(
                    w.outcome.matching(),
                    worker_optimal_of(i, &common).as_ref(),
                    "k={k} q={q} trial {t}"
                );
                assert_eq!(
                    f.outcome.matching(),
                    firm_optimal_of(i, &common).as_ref(),
                    "k={k} q={q} trial {t}"
                );
            }
            for &(wk, fm, _) in w.rejections.iter().chain(&f.rejections) {
                assert!(common.iter().all(|m| !m.contains(wk, fm)), "trial {t}");
            }
        }
    }
}
