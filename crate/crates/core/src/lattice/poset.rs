use std::collections::HashMap;

use super::order::StrictOrder;
use super::rotation::{eliminate, exposed_rotations, Rotation};
use crate::da::{firm_da, worker_da};
use crate::instance::{Instance, Matching};

/// Rotations of an instance with their precedence order.
///
/// Rotation indices follow one elimination chain from the worker-optimal
/// matching to the firm-optimal one, so index order is a linear extension of
/// the precedence order.
#[derive(Clone, Debug)]
pub struct RotationPoset {
    top: Matching,
    bottom: Matching,
    rotations: Vec<Rotation>,
    order: StrictOrder,
}

impl RotationPoset {
    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn order(&self) -> &StrictOrder {
        &self.order
    }

    /// Worker-optimal matching, generated by the empty closed set.
    pub fn top(&self) -> &Matching {
        &self.top
    }

    pub fn bottom(&self) -> &Matching {
        &self.bottom
    }

    pub fn hasse(&self) -> Vec<(usize, usize)> {
        self.order.hasse()
    }

    /// The stable matching of a closed set: start at the top and eliminate
    /// the chosen rotations in index order.
    pub fn matching_of(&self, closed: &[bool]) -> Matching {
        debug_assert!(self.order.is_closed(closed));
        let mut partners = self.top.worker_partners().to_vec();
        for (r, _) in self.rotations.iter().zip(closed).filter(|(_, &c)| c) {
            r.apply_unchecked(&mut partners);
        }
        Matching::from_worker_partners(partners).expect("rotations preserve perfection")
    }

    /// Every stable matching, once each.
    pub fn enumerate(&self) -> impl Iterator<Item = Matching> + '_ {
        self.order.ideals().map(move |c| self.matching_of(&c))
    }

    /// Closed sets paired with the matchings they generate.
    pub fn closed_sets(&self) -> impl Iterator<Item = (Vec<bool>, Matching)> + '_ {
        self.order.ideals().map(move |c| {
            let m = self.matching_of(&c);
            (c, m)
        })
    }

    /// One line per rotation, then the covering edges.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (k, r) in self.rotations.iter().enumerate() {
            out.push_str(&format!("class {k}: {r}\n"));
        }
        for (a, b) in self.hasse() {
            out.push_str(&format!("edge {a} {b}\n"));
        }
        out
    }
}

/// Finds all rotations along one elimination chain, then orders them by the
/// two move rules: a rotation that moves `w` to `f` precedes the one moving
/// `w` away from `f`, and a rotation that moves `f` above `w` precedes any
/// rotation that moves `w` below `f`.
pub fn build_rotation_poset(instance: &Instance) -> RotationPoset {
    let top = worker_da(instance);
    let bottom = firm_da(instance);

    let mut rotations = Vec::new();
    let mut current = top.clone();
    while let Some(r) = exposed_rotations(instance, &current).into_iter().next() {
        current = eliminate(instance, &current, &r).expect("exposed rotation");
        rotations.push(r);
    }
    debug_assert_eq!(current, bottom);

    // (w, f) -> rotation moving w to f
    let mut moves_to: HashMap<(usize, usize), usize> = HashMap::new();
    // (f, w) -> rotation moving f above w
    let mut moves_above: HashMap<(usize, usize), usize> = HashMap::new();
    for (idx, r) in rotations.iter().enumerate() {
        let pairs = r.pairs();
        let len = pairs.len();
        for i in 0..len {
            let (w, _) = pairs[i];
            let to = pairs[(i + 1) % len].1;
            moves_to.insert((w.index(), to.index()), idx);

            // f_i goes from w_i up to w_{i-1}
            let (w_old, f) = pairs[i];
            let w_new = pairs[(i + len - 1) % len].0;
            let fl = instance.firm_list(f);
            for pos in fl.rank(w_new.index()) + 1..=fl.rank(w_old.index()) {
                moves_above.insert((f.index(), fl.at(pos)), idx);
            }
        }
    }

    let mut edges = Vec::new();
    for (idx, r) in rotations.iter().enumerate() {
        for (w, from, to) in r.moves() {
            if let Some(&prev) = moves_to.get(&(w.index(), from.index())) {
                edges.push((prev, idx));
            }
            let wl = instance.worker_list(w);
            for pos in wl.rank(from.index())..wl.rank(to.index()) {
                if let Some(&prev) = moves_above.get(&(wl.at(pos), w.index())) {
                    if prev != idx {
                        edges.push((prev, idx));
                    }
                }
            }
        }
    }
    debug_assert!(
        edges.iter().all(|&(a, b)| a < b),
        "chain order must extend precedence"
    );
    let order =
        StrictOrder::from_edges(rotations.len(), edges).expect("rotation precedence is acyclic");
    RotationPoset {
        top,
        bottom,
        rotations,
        order,
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::instance::parse_instance;
    use crate::lattice::enumerate_stable_capped;

    #[test]
    fn singleton_lattice_gives_empty_poset() {
        let lists: Vec<Vec<usize>> = (0..4).map(|_| (0..4).collect()).collect();
        let i = Instance::new(lists.clone(), lists).unwrap();
        let p = build_rotation_poset(&i);
        assert!(p.is_empty());
        assert_eq!(
            p.enumerate().collect::<Vec<_>>(),
            vec![Matching::identity(4)]
        );
        assert_eq!(p.export(), "");
    }

    #[test]
    fn fixtures_biject_with_oracle() {
        for text in [
            include_str!("../../fixtures/a4.txt"),
            include_str!("../../fixtures/b4.txt"),
            include_str!("../../fixtures/a5a.txt"),
            include_str!("../../fixtures/a5b.txt"),
            include_str!("../../fixtures/a6.txt"),
            include_str!("../../fixtures/b6.txt"),
        ] {
            let i = parse_instance(text).unwrap();
            let p = build_rotation_poset(&i);
            let listed: Vec<_> = p.enumerate().collect();
            let set: BTreeSet<_> = listed.iter().cloned().collect();
            assert_eq!(set.len(), listed.len());
            assert_eq!(set, enumerate_stable_capped(&i, 8).unwrap());
        }
    }

    #[test]
    fn all_rotations_reach_the_bottom() {
        let i = parse_instance(include_str!("../../fixtures/a5a.txt")).unwrap();
        let p = build_rotation_poset(&i);
        assert_eq!(&p.matching_of(&vec![true; p.len()]), p.bottom());
        assert_eq!(&p.matching_of(&vec![false; p.len()]), p.top());
    }
}
