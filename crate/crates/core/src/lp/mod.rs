//! The fractional stable-matching polytope of one or more instances, solved
//! exactly, and the θ-rounding that turns a fractional point into a stable
//! matching.

mod model;
mod simplex;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use model::{build_lp, Constraint, ConstraintKind, LpModel, Sense};

use crate::instance::{FirmId, Instance, InstanceError, Matching, WorkerId};
use crate::random::trial_rng;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("theta = {theta} is an interval endpoint")]
    BoundaryTheta { theta: Rational },
    #[error("theta = {theta} is outside [0, 1]")]
    ThetaOutOfRange { theta: Rational },
    #[error("rounding is not a bijection: {0}")]
    RoundingInconsistent(String),
}

/// Parses `p/q` or an integer.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| Rational::new(p, q))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

/// An `n × n` matrix of exact weights, `x[w][f]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalMatching {
    x: Vec<Vec<Rational>>,
}

impl FractionalMatching {
    pub fn from_rows(x: Vec<Vec<Rational>>) -> Self {
        Self { x }
    }

    pub fn from_matching(m: &Matching) -> Self {
        let n = m.n();
        let mut x = vec![vec![Rational::zero(); n]; n];
        for (w, f) in m.pairs() {
            x[w.index()][f.index()] = Rational::one();
        }
        Self { x }
    }

    /// Equal-weight average of the given matchings.
    pub fn average<'a>(ms: impl IntoIterator<Item = &'a Matching>) -> Option<Self> {
        let ms: Vec<_> = ms.into_iter().collect();
        let n = ms.first()?.n();
        let share = Rational::new(BigInt::one(), BigInt::from(ms.len()));
        let mut x = vec![vec![Rational::zero(); n]; n];
        for m in ms {
            for (w, f) in m.pairs() {
                x[w.index()][f.index()] += &share;
            }
        }
        Some(Self { x })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn get(&self, w: WorkerId, f: FirmId) -> &Rational {
        &self.x[w.index()][f.index()]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.x
    }

    pub fn is_integral(&self) -> bool {
        self.x.iter().flatten().all(|v| v.is_integer())
    }

    /// The matching this is the indicator of, if it is integral.
    pub fn to_matching(&self) -> Option<Matching> {
        if !self.is_integral() {
            return None;
        }
        let partners = self
            .x
            .iter()
            .map(|row| row.iter().position(|v| v.is_one()))
            .collect::<Option<Vec<_>>>()?;
        Matching::from_worker_partners(partners).ok()
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        let n = self.n();
        let one = Rational::one();
        self.x
            .iter()
            .all(|row| row.len() == n && row.iter().sum::<Rational>() == one)
            && (0..n).all(|f| self.x.iter().map(|row| &row[f]).sum::<Rational>() == one)
            && self.x.iter().flatten().all(|v| !v.is_negative())
    }

    /// Every constraint of `model` holds exactly.
    pub fn satisfies(&self, model: &LpModel) -> bool {
        let n = model.n();
        if self.n() != n {
            return false;
        }
        model.constraints().iter().all(|c| {
            let lhs: Rational = c
                .terms
                .iter()
                .map(|&(v, k)| &self.x[v / n][v % n] * Rational::from_integer(k.into()))
                .sum();
            let rhs = Rational::from_integer(c.rhs.into());
            match c.sense {
                Sense::Eq => lhs == rhs,
                Sense::Le => lhs <= rhs,
                Sense::Ge => lhs >= rhs,
            }
        })
    }
}

impl fmt::Display for FractionalMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.x {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpSolution {
    Feasible(FractionalMatching),
    Infeasible,
}

impl LpSolution {
    pub fn point(&self) -> Option<&FractionalMatching> {
        match self {
            LpSolution::Feasible(x) => Some(x),
            LpSolution::Infeasible => None,
        }
    }
}

/// A vertex of the model's polytope, found by phase-one simplex.
pub fn solve_feasible(model: &LpModel) -> LpSolution {
    let n = model.n();
    match simplex::phase_one(model) {
        None => LpSolution::Infeasible,
        Some(flat) => {
            let mut it = flat.into_iter();
            let x = (0..n).map(|_| it.by_ref().take(n).collect()).collect();
            LpSolution::Feasible(FractionalMatching { x })
        }
    }
}

/// The agent owning interval position `theta`, given weights listed in
/// interval order. `Err(())` when `theta` hits an endpoint.
fn locate<'a>(
    theta: &Rational,
    weights: impl Iterator<Item = (usize, &'a Rational)>,
) -> Result<Option<usize>, ()> {
    let mut start = Rational::zero();
    if *theta == start {
        return Err(());
    }
    for (agent, len) in weights {
        // zero-length pieces own nothing
        if len.is_zero() {
            continue;
        }
        let end = &start + len;
        if *theta == end {
            return Err(());
        }
        if *theta < end {
            return Ok(Some(agent));
        }
        start = end;
    }
    Ok(None)
}

/// `μ_θ`: each worker's unit interval is cut into pieces `x[w][f]` from its
/// best firm to its worst, each firm's from its worst worker to its best,
/// and everyone takes the piece containing `θ`.
pub fn theta_round(
    x: &FractionalMatching,
    instance: &Instance,
    theta: &Rational,
) -> Result<Matching, LpError> {
    if theta.is_negative() || *theta > Rational::one() {
        return Err(LpError::ThetaOutOfRange {
            theta: theta.clone(),
        });
    }
    let n = instance.n();
    if x.n() != n {
        return Err(InstanceError::SizeMismatch {
            left: x.n(),
            right: n,
        }
        .into());
    }
    let boundary = || LpError::BoundaryTheta {
        theta: theta.clone(),
    };
    let mut worker_side = Vec::with_capacity(n);
    for w in WorkerId::all(n) {
        let order = instance.worker_list(w).order();
        let f = locate(theta, order.iter().map(|&f| (f, &x.x[w.index()][f])))
            .map_err(|_| boundary())?;
        worker_side.push(f.ok_or_else(|| {
            LpError::RoundingInconsistent(format!("{w} has total weight below theta"))
        })?);
    }
    let mut firm_side = Vec::with_capacity(n);
    for f in FirmId::all(n) {
        let order = instance.firm_list(f).order();
        let w = locate(theta, order.iter().rev().map(|&w| (w, &x.x[w][f.index()])))
            .map_err(|_| boundary())?;
        firm_side.push(w.ok_or_else(|| {
            LpError::RoundingInconsistent(format!("{f} has total weight below theta"))
        })?);
    }
    if let Some(w) = (0..n).find(|&w| firm_side[worker_side[w]] != w) {
        return Err(LpError::RoundingInconsistent(format!(
            "w{} takes f{} but f{} takes w{}",
            w + 1,
            worker_side[w] + 1,
            worker_side[w] + 1,
            firm_side[worker_side[w]] + 1
        )));
    }
    Matching::from_worker_partners(worker_side)
        .map_err(|e| LpError::RoundingInconsistent(e.to_string()))
}

/// Outcome of rounding one point under every member of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Agreement {
    /// Every non-boundary θ gave the same matching under every instance.
    Agree {
        checked: usize,
        skipped: usize,
        matchings: BTreeSet<Matching>,
    },
    Disagree {
        theta: String,
        roundings: Vec<Matching>,
    },
}

impl Agreement {
    pub fn is_agree(&self) -> bool {
        matches!(self, Agreement::Agree { .. })
    }
}

/// Rounds `x` under each instance at each θ; boundary values are skipped.
pub fn rounding_agreement(
    x: &FractionalMatching,
    instances: &[Instance],
    thetas: &[Rational],
) -> Result<Agreement, LpError> {
    let (mut checked, mut skipped) = (0, 0);
    let mut matchings = BTreeSet::new();
    'theta: for theta in thetas {
        let mut roundings = Vec::with_capacity(instances.len());
        for inst in instances {
            match theta_round(x, inst, theta) {
                Ok(m) => roundings.push(m),
                Err(LpError::BoundaryTheta { .. }) => {
                    skipped += 1;
                    continue 'theta;
                }
                Err(e) => return Err(e),
            }
        }
        if roundings.windows(2).any(|w| w[0] != w[1]) {
            return Ok(Agreement::Disagree {
                theta: theta.to_string(),
                roundings,
            });
        }
        checked += 1;
        matchings.extend(roundings.into_iter().next());
    }
    Ok(Agreement::Agree {
        checked,
        skipped,
        matchings,
    })
}

/// `count` values in (0, 1): a fixed grid `k / (g + 1)` first, then seeded
/// random `p / 1000003`.
pub fn theta_samples(count: usize, seed: u64) -> Vec<Rational> {
    const GRID: i64 = 12;
    const DENOM: i64 = 1_000_003;
    let mut out: Vec<Rational> = (1..GRID)
        .take(count)
        .map(|k| Rational::new(BigInt::from(k), BigInt::from(GRID)))
        .collect();
    let mut rng = trial_rng(seed, u64::MAX);
    while out.len() < count {
        out.push(Rational::new(
            BigInt::from(rng.gen_range(1..DENOM)),
            BigInt::from(DENOM),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{is_stable, parse_instance};
    use crate::lattice::{enumerate_stable_capped, stable_under_all};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn load(text: &str) -> Instance {
        parse_instance(text).unwrap()
    }

    #[test]
    fn row_counts() {
        let a = load(include_str!("../../fixtures/a4.txt"));
        let b = load(include_str!("../../fixtures/b4.txt"));
        let one = build_lp(std::slice::from_ref(&a)).unwrap();
        assert_eq!(one.constraints().len(), 2 * 4 + 16 + 16);
        assert_eq!(one.equality_count(), 8);
        assert_eq!(one.stability_count(), 16);
        let two = build_lp(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(two.constraints().len(), one.constraints().len() + 16);
        let three = build_lp(&[a.clone(), b, a]).unwrap();
        assert_eq!(three.stability_count(), 48);
        assert!(one.export().lines().count() > 40);
    }

    #[test]
    fn single_instance_vertex_is_a_stable_matching() {
        let a = load(include_str!("../../fixtures/a4.txt"));
        let model = build_lp(std::slice::from_ref(&a)).unwrap();
        let x = solve_feasible(&model).point().cloned().expect("feasible");
        assert!(x.satisfies(&model));
        let m = x.to_matching().expect("integral vertex");
        assert!(enumerate_stable_capped(&a, 8).unwrap().contains(&m));
    }

    #[test]
    fn joint_model_of_the_one_one_example() {
        let a = load(include_str!("../../fixtures/a5b.txt"));
        let b = load(include_str!("../../fixtures/b5b.txt"));
        let fam = [a.clone(), b.clone()];
        let model = build_lp(&fam).unwrap();
        let common = stable_under_all(&fam, 8).unwrap();
        let x = solve_feasible(&model)
            .point()
            .cloned()
            .expect("intersection is nonempty");
        assert!(common.contains(&x.to_matching().unwrap()));
        // a genuinely fractional point of the joint polytope
        let avg = FractionalMatching::average(&common).unwrap();
        assert!(avg.satisfies(&model) && !avg.is_integral());
        match rounding_agreement(&avg, &fam, &[r(1, 3), r(1, 2), r(2, 3), r(1, 7)]).unwrap() {
            Agreement::Agree {
                checked, matchings, ..
            } => {
                assert!(checked >= 2);
                assert!(matchings.is_subset(&common));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn integral_points_round_to_themselves() {
        let a = load(include_str!("../../fixtures/a6.txt"));
        for m in enumerate_stable_capped(&a, 8).unwrap() {
            let x = FractionalMatching::from_matching(&m);
            for t in theta_samples(5, 3) {
                assert_eq!(theta_round(&x, &a, &t).unwrap(), m);
            }
        }
    }

    #[test]
    fn boundaries_and_range() {
        let a = load(include_str!("../../fixtures/a6.txt"));
        let all = enumerate_stable_capped(&a, 8).unwrap();
        let x = FractionalMatching::average(&all).unwrap();
        assert!(matches!(
            theta_round(&x, &a, &r(0, 1)),
            Err(LpError::BoundaryTheta { .. })
        ));
        assert!(matches!(
            theta_round(&x, &a, &r(1, 1)),
            Err(LpError::BoundaryTheta { .. })
        ));
        assert!(matches!(
            theta_round(&x, &a, &r(1, 2)),
            Err(LpError::BoundaryTheta { .. })
        ));
        assert!(matches!(
            theta_round(&x, &a, &r(3, 2)),
            Err(LpError::ThetaOutOfRange { .. })
        ));
        let m = theta_round(&x, &a, &r(1, 3)).unwrap();
        assert!(is_stable(&a, &m));
    }

    #[test]
    fn samples_are_interior_and_reproducible() {
        let s = theta_samples(30, 9);
        assert_eq!(s.len(), 30);
        assert!(s.iter().all(|t| t.is_positive() && *t < Rational::one()));
        assert_eq!(s, theta_samples(30, 9));
        assert_eq!(parse_rational("2/6"), Some(r(1, 3)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
