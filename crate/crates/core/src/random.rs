//! Seeded random instances and nearby families.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{FirmId, Instance, WorkerId};

fn shuffled(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Every list an independent uniform permutation.
pub fn random_instance(n: usize, rng: &mut impl Rng) -> Instance {
    let workers = (0..n).map(|_| shuffled(n, rng)).collect();
    let firms = (0..n).map(|_| shuffled(n, rng)).collect();
    Instance::new(workers, firms).expect("permutations are valid lists")
}

/// `base` with the given agents' lists redrawn. A redraw can land on the old
/// list, so the realized distance may be smaller than requested.
pub fn redraw(
    base: &Instance,
    workers: &[WorkerId],
    firms: &[FirmId],
    rng: &mut impl Rng,
) -> Instance {
    let n = base.n();
    let mut wl: Vec<Vec<usize>> = base
        .worker_lists()
        .iter()
        .map(|l| l.order().to_vec())
        .collect();
    let mut fl: Vec<Vec<usize>> = base
        .firm_lists()
        .iter()
        .map(|l| l.order().to_vec())
        .collect();
    for w in workers {
        wl[w.index()] = shuffled(n, rng);
    }
    for f in firms {
        fl[f.index()] = shuffled(n, rng);
    }
    Instance::new(wl, fl).expect("permutations are valid lists")
}

/// A base instance plus `k - 1` others, each redrawing the lists of the same
/// `p` workers and `q` firms (chosen uniformly). The whole family is then at
/// most `(p, q)` apart.
pub fn random_family(n: usize, k: usize, p: usize, q: usize, rng: &mut impl Rng) -> Vec<Instance> {
    assert!(p <= n && q <= n, "cannot change more agents than exist");
    let base = random_instance(n, rng).with_name("A");
    let workers: Vec<WorkerId> = index::sample(rng, n, p)
        .into_iter()
        .map(WorkerId::new)
        .collect();
    let firms: Vec<FirmId> = index::sample(rng, n, q)
        .into_iter()
        .map(FirmId::new)
        .collect();
    let mut family = vec![base.clone()];
    for i in 1..k {
        family.push(redraw(&base, &workers, &firms, rng).with_name(format!("B{i}")));
    }
    family
}

/// The generator used for trial `trial` of a run seeded with `seed`; trials
/// are independent of each other and of the order they run in.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
