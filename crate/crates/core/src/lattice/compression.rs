//! Compressions of a rotation poset: rotations grouped into meta-rotations,
//! some frozen in or out, with an order on the groups. The closed sets of a
//! compression generate a sublattice of the host lattice.
//!
//! A compression is also described by an [`EdgeSet`] added to the host's
//! Hasse diagram. Two extra nodes carry the frozen rotations: every closed
//! set contains [`Node::Source`] and avoids [`Node::Sink`], so a rotation
//! below the source is always eliminated and one above the sink never is.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::closure::{ClosureWitness, LatticeOp};
use super::order::StrictOrder;
use super::poset::RotationPoset;
use super::LatticeError;
use crate::instance::Matching;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Rotation(usize),
    Source,
    Sink,
}

/// Directed edges `(a, b)` meaning `a` must be eliminated before `b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeSet {
    pub edges: BTreeSet<(Node, Node)>,
}

impl EdgeSet {
    pub fn union<'a>(sets: impl IntoIterator<Item = &'a EdgeSet>) -> EdgeSet {
        EdgeSet {
            edges: sets
                .into_iter()
                .flat_map(|s| s.edges.iter().copied())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaRotationPoset {
    rotation_count: usize,
    classes: Vec<Vec<usize>>,
    always_in: Vec<usize>,
    never_in: Vec<usize>,
    order: StrictOrder,
    empty: bool,
}

impl MetaRotationPoset {
    /// The compression generating no matching at all.
    pub fn empty(rotation_count: usize) -> Self {
        Self {
            rotation_count,
            classes: Vec::new(),
            always_in: Vec::new(),
            never_in: (0..rotation_count).collect(),
            order: StrictOrder::antichain(0),
            empty: true,
        }
    }

    /// The trivial compression: every rotation its own class, host order kept.
    pub fn identity(poset: &RotationPoset) -> Self {
        let r = poset.len();
        Self {
            rotation_count: r,
            classes: (0..r).map(|i| vec![i]).collect(),
            always_in: Vec::new(),
            never_in: Vec::new(),
            order: poset.order().clone(),
            empty: false,
        }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn always_in(&self) -> &[usize] {
        &self.always_in
    }

    pub fn never_in(&self) -> &[usize] {
        &self.never_in
    }

    pub fn order(&self) -> &StrictOrder {
        &self.order
    }

    /// Generates the empty set of matchings.
    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Rotation-level closed sets of the host poset, one per generated matching.
    pub fn closed_sets(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        let ideals = (!self.empty).then(|| self.order.ideals());
        ideals.into_iter().flatten().map(move |chosen| {
            let mut set = vec![false; self.rotation_count];
            for &r in &self.always_in {
                set[r] = true;
            }
            for (class, _) in self.classes.iter().zip(&chosen).filter(|(_, &c)| c) {
                for &r in class {
                    set[r] = true;
                }
            }
            set
        })
    }

    /// The matchings of the sublattice, each once.
    pub fn enumerate<'a>(
        &'a self,
        poset: &'a RotationPoset,
    ) -> impl Iterator<Item = Matching> + 'a {
        self.closed_sets().map(move |c| poset.matching_of(&c))
    }

    /// An edge set that, added to the host's Hasse diagram, yields this compression.
    pub fn edge_set(&self) -> EdgeSet {
        let mut edges = BTreeSet::new();
        if self.empty {
            edges.insert((Node::Sink, Node::Source));
            return EdgeSet { edges };
        }
        for class in &self.classes {
            for (i, &r) in class.iter().enumerate() {
                let next = class[(i + 1) % class.len()];
                if next != r {
                    edges.insert((Node::Rotation(r), Node::Rotation(next)));
                }
            }
        }
        for (a, b) in self.order.hasse() {
            edges.insert((
                Node::Rotation(self.classes[a][0]),
                Node::Rotation(self.classes[b][0]),
            ));
        }
        for &r in &self.always_in {
            edges.insert((Node::Rotation(r), Node::Source));
            edges.insert((Node::Source, Node::Rotation(r)));
        }
        for &r in &self.never_in {
            edges.insert((Node::Rotation(r), Node::Sink));
            edges.insert((Node::Sink, Node::Rotation(r)));
        }
        EdgeSet { edges }
    }

    /// Same layout as [`RotationPoset::export`], plus the frozen rotations.
    pub fn export(&self, poset: &RotationPoset) -> String {
        let rots = poset.rotations();
        let list = |idx: &[usize]| {
            idx.iter()
                .map(|&r| rots[r].to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::new();
        if self.empty {
            out.push_str("empty\n");
            return out;
        }
        for (k, class) in self.classes.iter().enumerate() {
            out.push_str(&format!("class {k}: {}\n", list(class)));
        }
        for (a, b) in self.order.hasse() {
            out.push_str(&format!("edge {a} {b}\n"));
        }
        if !self.always_in.is_empty() {
            out.push_str(&format!("always: {}\n", list(&self.always_in)));
        }
        if !self.never_in.is_empty() {
            out.push_str(&format!("never: {}\n", list(&self.never_in)));
        }
        out
    }
}

/// Compression for the sublattice `{M : member(M)}` of the poset's lattice.
///
/// Enumerates the host lattice, so it is meant for small instances. Rotations
/// are grouped by the set of member closed sets containing them; a group
/// precedes another when it occurs in every member where the other does.
pub fn compression_from_membership(
    poset: &RotationPoset,
    member: impl Fn(&Matching) -> bool,
) -> Result<MetaRotationPoset, LatticeError> {
    let r = poset.len();
    let members: Vec<(Vec<bool>, Matching)> =
        poset.closed_sets().filter(|(_, m)| member(m)).collect();
    if members.is_empty() {
        return Ok(MetaRotationPoset::empty(r));
    }

    let present: HashSet<&Vec<bool>> = members.iter().map(|(c, _)| c).collect();
    for (i, (a, ma)) in members.iter().enumerate() {
        for (b, mb) in &members[i + 1..] {
            for op in [LatticeOp::Join, LatticeOp::Meet] {
                let combined: Vec<bool> = a
                    .iter()
                    .zip(b)
                    .map(|(&x, &y)| {
                        if op == LatticeOp::Join {
                            x || y
                        } else {
                            x && y
                        }
                    })
                    .collect();
                if !present.contains(&combined) {
                    return Err(LatticeError::NotASublattice(Box::new(ClosureWitness {
                        first: ma.clone(),
                        second: mb.clone(),
                        op,
                        result: poset.matching_of(&combined),
                    })));
                }
            }
        }
    }

    let mut always_in = Vec::new();
    let mut never_in = Vec::new();
    let mut groups: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for rot in 0..r {
        let occurrence: Vec<bool> = members.iter().map(|(c, _)| c[rot]).collect();
        if occurrence.iter().all(|&x| x) {
            always_in.push(rot);
        } else if occurrence.iter().all(|&x| !x) {
            never_in.push(rot);
        } else {
            groups.entry(occurrence).or_default().push(rot);
        }
    }
    let mut grouped: Vec<(Vec<bool>, Vec<usize>)> = groups.into_iter().collect();
    grouped.sort_by_key(|(_, rots)| rots[0]);

    let subset = |small: &[bool], big: &[bool]| small.iter().zip(big).all(|(&s, &b)| !s || b);
    let k = grouped.len();
    let mut edges = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a != b && subset(&grouped[b].0, &grouped[a].0) {
                edges.push((a, b));
            }
        }
    }
    let order = StrictOrder::from_edges(k, edges)
        .expect("distinct occurrence patterns are strictly ordered");
    Ok(MetaRotationPoset {
        rotation_count: r,
        classes: grouped.into_iter().map(|(_, rots)| rots).collect(),
        always_in,
        never_in,
        order,
        empty: false,
    })
}

/// The compression obtained by adding `edges` to the poset's Hasse diagram
/// and contracting strongly connected components.
pub fn compression_from_edges(
    poset: &RotationPoset,
    edges: &EdgeSet,
) -> Result<MetaRotationPoset, LatticeError> {
    let r = poset.len();
    let (source, sink) = (r, r + 1);
    let id = |node: Node| -> Result<usize, LatticeError> {
        match node {
            Node::Rotation(i) if i < r => Ok(i),
            Node::Rotation(i) => Err(LatticeError::UnknownRotation { index: i, len: r }),
            Node::Source => Ok(source),
            Node::Sink => Ok(sink),
        }
    };

    let total = r + 2;
    let mut reach = vec![vec![false; total]; total];
    for (a, b) in poset.hasse() {
        reach[a][b] = true;
    }
    for &(a, b) in &edges.edges {
        reach[id(a)?][id(b)?] = true;
    }
    reach[source][sink] = true;
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..total {
        let row_k = reach[k].clone();
        for row in reach.iter_mut().filter(|row| row[k]) {
            for (x, &y) in row.iter_mut().zip(&row_k) {
                *x |= y;
            }
        }
    }

    if reach[sink][source] {
        return Ok(MetaRotationPoset::empty(r));
    }
    let always_in: Vec<usize> = (0..r).filter(|&x| reach[x][source]).collect();
    let never_in: Vec<usize> = (0..r).filter(|&x| reach[sink][x]).collect();

    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; r];
    for x in (0..r).filter(|&x| !reach[x][source] && !reach[sink][x]) {
        if assigned[x] {
            continue;
        }
        let class: Vec<usize> = (x..r).filter(|&y| reach[x][y] && reach[y][x]).collect();
        for &y in &class {
            assigned[y] = true;
        }
        classes.push(class);
    }
    let k = classes.len();
    let mut order_edges = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a != b && reach[classes[a][0]][classes[b][0]] {
                order_edges.push((a, b));
            }
        }
    }
    let order = StrictOrder::from_edges(k, order_edges).expect("condensation is acyclic");
    Ok(MetaRotationPoset {
        rotation_count: r,
        classes,
        always_in,
        never_in,
        order,
        empty: false,
    })
}

/// Compression defined by the union of the compressions' edge sets; it
/// generates the intersection of their sublattices.
pub fn union_edge_sets(
    poset: &RotationPoset,
    compressions: &[MetaRotationPoset],
) -> Result<MetaRotationPoset, LatticeError> {
    let edges = EdgeSet::union(
        compressions
            .iter()
            .map(|c| c.edge_set())
            .collect::<Vec<_>>()
            .iter(),
    );
    compression_from_edges(poset, &edges)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::instance::{is_stable, parse_instance};
    use crate::lattice::{build_rotation_poset, stable_under_all};

    #[test]
    fn everything_member_is_the_identity_compression() {
        let a = parse_instance(include_str!("../../fixtures/a6.txt")).unwrap();
        let p = build_rotation_poset(&a);
        let c = compression_from_membership(&p, |_| true).unwrap();
        assert_eq!(c, MetaRotationPoset::identity(&p));
        let again = compression_from_edges(&p, &c.edge_set()).unwrap();
        assert_eq!(again, c);
        assert_eq!(union_edge_sets(&p, &[]).unwrap(), c);
    }

    #[test]
    fn intersection_of_one_sided_pair() {
        let a = parse_instance(include_str!("../../fixtures/a5a.txt")).unwrap();
        let b = parse_instance(include_str!("../../fixtures/b5a.txt")).unwrap();
        let p = build_rotation_poset(&a);
        let c = compression_from_membership(&p, |m| is_stable(&b, m)).unwrap();
        let got: BTreeSet<_> = c.enumerate(&p).collect();
        assert_eq!(got, stable_under_all(&[a.clone(), b.clone()], 8).unwrap());
        assert_eq!(compression_from_edges(&p, &c.edge_set()).unwrap(), c);
        assert_eq!(union_edge_sets(&p, &[c.clone(), c.clone()]).unwrap(), c);
    }

    #[test]
    fn two_sided_pair_is_not_a_sublattice() {
        let a = parse_instance(include_str!("../../fixtures/a4.txt")).unwrap();
        let b = parse_instance(include_str!("../../fixtures/b4.txt")).unwrap();
        let p = build_rotation_poset(&a);
        let err = compression_from_membership(&p, |m| is_stable(&b, m)).unwrap_err();
        assert!(matches!(err, LatticeError::NotASublattice(_)));
    }

    #[test]
    fn empty_membership() {
        let a = parse_instance(include_str!("../../fixtures/a6.txt")).unwrap();
        let p = build_rotation_poset(&a);
        let c = compression_from_membership(&p, |_| false).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.enumerate(&p).count(), 0);
        let full = MetaRotationPoset::identity(&p);
        assert!(union_edge_sets(&p, &[full, c]).unwrap().is_empty());
    }

    #[test]
    fn unknown_rotation_is_reported() {
        let a = parse_instance(include_str!("../../fixtures/a4.txt")).unwrap();
        let p = build_rotation_poset(&a);
        let mut e = EdgeSet::default();
        e.edges.insert((Node::Rotation(99), Node::Source));
        assert!(matches!(
            compression_from_edges(&p, &e),
            Err(LatticeError::UnknownRotation { .. })
        ));
    }
}
