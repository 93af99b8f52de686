use std::fmt;

use super::LatticeError;
use crate::instance::{FirmId, Instance, Matching, WorkerId};

/// A cyclic sequence of matched pairs `(w_0 f_0, ..., w_{r-1} f_{r-1})`.
/// Eliminating it moves each `w_i` to `f_{i+1}`.
///
/// Stored rotated so that the smallest worker comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation {
    pairs: Vec<(WorkerId, FirmId)>,
}

impl Rotation {
    pub fn new(mut pairs: Vec<(WorkerId, FirmId)>) -> Self {
        if let Some(start) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, (w, _))| *w)
            .map(|(i, _)| i)
        {
            pairs.rotate_left(start);
        }
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(WorkerId, FirmId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `(w_i, f_i, f_{i+1})` for every position.
    pub fn moves(&self) -> impl Iterator<Item = (WorkerId, FirmId, FirmId)> + '_ {
        let r = self.pairs.len();
        (0..r).map(move |i| (self.pairs[i].0, self.pairs[i].1, self.pairs[(i + 1) % r].1))
    }

    /// Applies the rotation without checking exposure.
    pub(crate) fn apply_unchecked(&self, partners: &mut [usize]) {
        for (w, _, to) in self.moves() {
            partners[w.index()] = to.index();
        }
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, firm) in &self.pairs {
            write!(f, "({},{})", w.number(), firm.number())?;
        }
        Ok(())
    }
}

/// First firm on `w`'s list that strictly prefers `w` to its partner in `m`.
fn successor_firm(instance: &Instance, m: &Matching, w: WorkerId) -> Option<FirmId> {
    instance
        .worker_list(w)
        .order()
        .iter()
        .map(|&f| FirmId::new(f))
        .find(|&f| instance.firm_prefers(f, w, m.worker_of(f)))
}

/// Rotations exposed in the stable matching `m`: the cycles of
/// `w -> partner in m of (first firm that would rather have w)`.
pub fn exposed_rotations(instance: &Instance, m: &Matching) -> Vec<Rotation> {
    let n = instance.n();
    let next: Vec<Option<WorkerId>> = WorkerId::all(n)
        .map(|w| successor_firm(instance, m, w).map(|f| m.worker_of(f)))
        .collect();

    // 0 = unvisited, 1 = on current walk, 2 = done
    let mut state = vec![0u8; n];
    let mut out = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = Some(start);
        while let Some(w) = cur {
            if state[w] != 0 {
                break;
            }
            state[w] = 1;
            walk.push(w);
            cur = next[w].map(|x| x.index());
        }
        if let Some(w) = cur {
            if state[w] == 1 {
                let pos = walk.iter().position(|&x| x == w).expect("on walk");
                let pairs = walk[pos..]
                    .iter()
                    .map(|&x| (WorkerId::new(x), m.firm_of(WorkerId::new(x))))
                    .collect();
                out.push(Rotation::new(pairs));
            }
        }
        for w in walk {
            state[w] = 2;
        }
    }
    out.sort();
    out
}

/// `m / rotation`: each `w_i` moves to `f_{i+1}`, everyone else stays.
pub fn eliminate(
    instance: &Instance,
    m: &Matching,
    rotation: &Rotation,
) -> Result<Matching, LatticeError> {
    let not_exposed = || LatticeError::NotExposed {
        rotation: rotation.to_string(),
        matching: m.clone(),
    };
    if rotation.len() < 2 {
        return Err(not_exposed());
    }
    for (w, from, to) in rotation.moves() {
        if m.firm_of(w) != from || successor_firm(instance, m, w) != Some(to) {
            return Err(not_exposed());
        }
    }
    let mut partners = m.worker_partners().to_vec();
    rotation.apply_unchecked(&mut partners);
    Ok(Matching::from_worker_partners(partners)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::da::{firm_da, worker_da};
    use crate::instance::{is_stable, parse_instance};

    #[test]
    fn nothing_exposed_at_the_bottom() {
        let i = parse_instance(include_str!("../../fixtures/a6.txt")).unwrap();
        assert!(exposed_rotations(&i, &firm_da(&i)).is_empty());
        let one = parse_instance("n 1\nw 1: 1\nf 1: 1\n").unwrap();
        assert!(exposed_rotations(&one, &worker_da(&one)).is_empty());
    }

    #[test]
    fn two_element_lattice_has_one_rotation() {
        let i = parse_instance("n 2\nw 1: 1 2\nw 2: 2 1\nf 1: 2 1\nf 2: 1 2\n").unwrap();
        let top = worker_da(&i);
        let rots = exposed_rotations(&i, &top);
        assert_eq!(rots.len(), 1);
        assert_eq!(rots[0].to_string(), "(1,1)(2,2)");
        let bottom = eliminate(&i, &top, &rots[0]).unwrap();
        assert_eq!(bottom, firm_da(&i));
        assert!(eliminate(&i, &bottom, &rots[0]).is_err());
    }

    #[test]
    fn chain_from_top_reaches_bottom() {
        let i = parse_instance(include_str!("../../fixtures/a6.txt")).unwrap();
        let mut m = worker_da(&i);
        let mut steps = 0;
        loop {
            let rots = exposed_rotations(&i, &m);
            let Some(r) = rots.first() else { break };
            m = eliminate(&i, &m, r).unwrap();
            assert!(is_stable(&i, &m));
            steps += 1;
        }
        assert_eq!(m, firm_da(&i));
        assert_eq!(steps, 3);
    }
}
