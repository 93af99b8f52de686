//! The LP against the brute-force oracle on random instances and families.

use smlat::instance::is_stable;
use smlat::lattice::{enumerate_stable_capped, stable_under_all};
use smlat::lp::{
    build_lp, rounding_agreement, solve_feasible, theta_round, theta_samples, Agreement,
    FractionalMatching,
};
use smlat::random::{random_family, random_instance, trial_rng};

#[test]
fn single_instance_vertices_are_stable_matchings() {
    for t in 0..100u64 {
        let n = 2 + (t % 5) as usize;
        let inst = random_instance(n, &mut trial_rng(31, t));
        let model = build_lp(std::slice::from_ref(&inst)).unwrap();
        let x = solve_feasible(&model)
            .point()
            .cloned()
            .expect("a stable matching always exists");
        assert!(x.is_doubly_stochastic() && x.satisfies(&model), "trial {t}");
        let m = x
            .to_matching()
            .unwrap_or_else(|| panic!("trial {t}: fractional vertex\n{x}"));
        assert!(is_stable(&inst, &m), "trial {t}");
    }
}

#[test]
fn rounding_a_fractional_point_gives_stable_matchings() {
    let thetas = theta_samples(25, 5);
    for t in 0..40u64 {
        let inst = random_instance(5, &mut trial_rng(32, t));
        let all = enumerate_stable_capped(&inst, 8).unwrap();
        let x = FractionalMatching::average(&all).unwrap();
        for th in &thetas {
            if let Ok(m) = theta_round(&x, &inst, th) {
                assert!(all.contains(&m), "trial {t} theta {th}");
            }
        }
    }
}

#[test]
fn joint_feasibility_tracks_the_intersection() {
    let thetas = theta_samples(24, 6);
    let (mut feasible, mut infeasible) = (0, 0);
    for t in 0..60u64 {
        let fam = random_family(5, 2, 1, 2, &mut trial_rng(33, t));
        let common = stable_under_all(&fam, 8).unwrap();
        let model = build_lp(&fam).unwrap();
        let sol = solve_feasible(&model);
        assert_eq!(sol.point().is_some(), !common.is_empty(), "trial {t}");
        let Some(x) = sol.point() else {
            infeasible += 1;
            continue;
        };
        feasible += 1;
        for point in [x.clone(), FractionalMatching::average(&common).unwrap()] {
            match rounding_agreement(&point, &fam, &thetas).unwrap() {
                Agreement::Agree {
                    checked, matchings, ..
                } => {
                    assert!(checked >= 20, "trial {t}: only {checked} interior samples");
                    assert!(matchings.is_subset(&common), "trial {t}");
                }
                d => panic!("trial {t}: {d:?}"),
            }
        }
    }
    assert!(feasible > 0 && infeasible > 0);
}
