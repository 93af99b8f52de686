use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::instance::{common_size, FirmId, Instance, InstanceError, WorkerId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Eq,
    Le,
    Ge,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintKind {
    /// Worker `w` is fully matched.
    RowSum {
        worker: WorkerId,
    },
    /// Firm `f` is fully matched.
    ColSum {
        firm: FirmId,
    },
    /// `(w, f)` does not block under instance number `instance`: the weight
    /// `w` puts on firms below `f` is at most the weight `f` puts on workers
    /// above `w`.
    Stability {
        instance: usize,
        worker: WorkerId,
        firm: FirmId,
    },
    NonNegative {
        worker: WorkerId,
        firm: FirmId,
    },
}

/// `Σ coeff · x_var  <sense>  rhs` over the variables `x_{wf}`, numbered `w * n + f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpModel {
    n: usize,
    instance_names: Vec<String>,
    constraints: Vec<Constraint>,
}

impl LpModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variable_count(&self) -> usize {
        self.n * self.n
    }

    pub fn var(&self, w: WorkerId, f: FirmId) -> usize {
        w.index() * self.n + f.index()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn instance_count(&self) -> usize {
        self.instance_names.len()
    }

    pub fn equality_count(&self) -> usize {
        self.constraints
            .iter()
            .filter(|c| c.sense == Sense::Eq)
            .count()
    }

    pub fn stability_count(&self) -> usize {
        self.constraints
            .iter()
            .filter(|c| matches!(c.kind, ConstraintKind::Stability { .. }))
            .count()
    }

    /// One constraint per line, e.g. `stab[A] w1 f2: x1,3 + x1,4 - x1,2 <= 0`.
    pub fn export(&self) -> String {
        let mut out = format!(
            "# {} variables x<w>,<f>; {} constraints\n",
            self.variable_count(),
            self.constraints.len()
        );
        for c in &self.constraints {
            let label = match c.kind {
                ConstraintKind::RowSum { worker } => format!("row {worker}"),
                ConstraintKind::ColSum { firm } => format!("col {firm}"),
                ConstraintKind::Stability {
                    instance,
                    worker,
                    firm,
                } => {
                    format!("stab[{}] {worker} {firm}", self.instance_names[instance])
                }
                ConstraintKind::NonNegative { worker, firm } => format!("nonneg {worker} {firm}"),
            };
            let mut expr = String::new();
            for (k, &(v, c)) in c.terms.iter().enumerate() {
                let (w, f) = (v / self.n + 1, v % self.n + 1);
                let sign = match (k, c < 0) {
                    (0, false) => "",
                    (0, true) => "-",
                    (_, false) => " + ",
                    (_, true) => " - ",
                };
                let mag = if c.abs() == 1 {
                    String::new()
                } else {
                    format!("{} ", c.abs())
                };
                let _ = write!(expr, "{sign}{mag}x{w},{f}");
            }
            if expr.is_empty() {
                expr.push('0');
            }
            let sense = match c.sense {
                Sense::Eq => "=",
                Sense::Le => "<=",
                Sense::Ge => ">=",
            };
            let _ = writeln!(out, "{label}: {expr} {sense} {}", c.rhs);
        }
        out
    }
}

/// Row and column sums, one stability family per instance, nonnegativity.
pub fn build_lp(instances: &[Instance]) -> Result<LpModel, InstanceError> {
    let n = common_size(instances)?;
    let var = |w: usize, f: usize| w * n + f;
    let mut constraints = Vec::new();
    for w in WorkerId::all(n) {
        constraints.push(Constraint {
            kind: ConstraintKind::RowSum { worker: w },
            terms: (0..n).map(|f| (var(w.index(), f), 1)).collect(),
            sense: Sense::Eq,
            rhs: 1,
        });
    }
    for f in FirmId::all(n) {
        constraints.push(Constraint {
            kind: ConstraintKind::ColSum { firm: f },
            terms: (0..n).map(|w| (var(w, f.index()), 1)).collect(),
            sense: Sense::Eq,
            rhs: 1,
        });
    }
    for (k, inst) in instances.iter().enumerate() {
        for w in WorkerId::all(n) {
            let wl = inst.worker_list(w);
            for f in FirmId::all(n) {
                let fl = inst.firm_list(f);
                let mut terms: Vec<(usize, i64)> = wl.order()[wl.rank(f.index()) + 1..]
                    .iter()
                    .map(|&g| (var(w.index(), g), 1))
                    .collect();
                terms.extend(
                    fl.order()[..fl.rank(w.index())]
                        .iter()
                        .map(|&v| (var(v, f.index()), -1)),
                );
                constraints.push(Constraint {
                    kind: ConstraintKind::Stability {
                        instance: k,
                        worker: w,
                        firm: f,
                    },
                    terms,
                    sense: Sense::Le,
                    rhs: 0,
                });
            }
        }
    }
    for w in WorkerId::all(n) {
        for f in FirmId::all(n) {
            constraints.push(Constraint {
                kind: ConstraintKind::NonNegative { worker: w, firm: f },
                terms: vec![(var(w.index(), f.index()), 1)],
                sense: Sense::Ge,
                rhs: 0,
            });
        }
    }
    let instance_names = instances
        .iter()
        .enumerate()
        .map(|(k, i)| {
            if i.name().is_empty() {
                format!("I{}", k + 1)
            } else {
                i.name().to_string()
            }
        })
        .collect();
    Ok(LpModel {
        n,
        instance_names,
        constraints,
    })
}
