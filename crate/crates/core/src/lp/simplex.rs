//! Phase-one simplex over exact rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::model::{ConstraintKind, LpModel, Sense};
use super::Rational;

/// A basic feasible point of `{x >= 0 : constraints}`, or `None` if the set is empty.
pub(crate) fn phase_one(model: &LpModel) -> Option<Vec<Rational>> {
    let nx = model.variable_count();
    // nonnegativity is built into the standard form
    let rows: Vec<_> = model
        .constraints()
        .iter()
        .filter(|c| !matches!(c.kind, ConstraintKind::NonNegative { .. }))
        .collect();
    let m = rows.len();

    let extra = rows.iter().filter(|c| c.sense != Sense::Eq).count();
    let first_art = nx + extra;
    let mut next_extra = nx;
    let mut art_rows = Vec::new();

    let mut basis = vec![usize::MAX; m];
    // filled after we know how many artificials are needed
    let mut body: Vec<Vec<(usize, Rational)>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for (i, c) in rows.iter().enumerate() {
        let flip = c.rhs < 0;
        let sgn = |v: i64| Rational::from_integer(if flip { -v } else { v }.into());
        let mut terms: Vec<(usize, Rational)> = c.terms.iter().map(|&(v, k)| (v, sgn(k))).collect();
        let sense = match (c.sense, flip) {
            (Sense::Le, true) => Sense::Ge,
            (Sense::Ge, true) => Sense::Le,
            (s, _) => s,
        };
        match c.sense {
            Sense::Eq => {}
            _ => {
                let coeff = if sense == Sense::Le {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                if sense == Sense::Le {
                    basis[i] = next_extra;
                }
                terms.push((next_extra, coeff));
                next_extra += 1;
            }
        }
        if basis[i] == usize::MAX {
            art_rows.push(i);
        }
        body.push(terms);
        rhs.push(sgn(c.rhs));
    }
    let width = first_art + art_rows.len();
    let mut t: Vec<Vec<Rational>> = vec![vec![Rational::zero(); width]; m];
    for (i, terms) in body.into_iter().enumerate() {
        for (j, v) in terms {
            t[i][j] += v;
        }
    }
    for (k, &i) in art_rows.iter().enumerate() {
        t[i][first_art + k] = Rational::one();
        basis[i] = first_art + k;
    }

    // reduced costs of `min Σ artificials`
    let mut obj = vec![Rational::zero(); width];
    let mut obj_rhs = Rational::zero();
    for &i in &art_rows {
        for j in 0..first_art {
            if !t[i][j].is_zero() {
                obj[j] -= &t[i][j];
            }
        }
        obj_rhs -= &rhs[i];
    }

    while let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (r, _) = leave.expect("phase one is bounded below by zero");
        pivot(&mut t, &mut rhs, &mut obj, &mut obj_rhs, r, enter);
        basis[r] = enter;
    }

    if !obj_rhs.is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); nx];
    for (i, &b) in basis.iter().enumerate() {
        if b < nx {
            x[b] = rhs[i].clone();
        }
    }
    Some(x)
}

fn pivot(
    t: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    obj: &mut [Rational],
    obj_rhs: &mut Rational,
    r: usize,
    c: usize,
) {
    let p = t[r][c].clone();
    if !p.is_one() {
        for v in t[r].iter_mut().filter(|v| !v.is_zero()) {
            *v /= &p;
        }
        rhs[r] /= &p;
    }
    let support: Vec<usize> = (0..t[r].len()).filter(|&j| !t[r][j].is_zero()).collect();
    let row = t[r].clone();
    let row_rhs = rhs[r].clone();
    for i in 0..t.len() {
        if i == r || t[i][c].is_zero() {
            continue;
        }
        let factor = t[i][c].clone();
        for &j in &support {
            let d = &factor * &row[j];
            t[i][j] -= d;
        }
        rhs[i] -= &factor * &row_rhs;
    }
    if !obj[c].is_zero() {
        let factor = obj[c].clone();
        for &j in &support {
            let d = &factor * &row[j];
            obj[j] -= d;
        }
        *obj_rhs -= &factor * &row_rhs;
    }
}
