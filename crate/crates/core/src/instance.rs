//! Instances, matchings and the lattice operations on stable matchings.
//!
//! Agents are stored zero-based. [`WorkerId`] and [`FirmId`] print and parse
//! one-based, which is also what the text format uses.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{agent}: {message}")]
    Validation { agent: String, message: String },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("not a perfect matching: {0}")]
    NotAMatching(String),
}

fn parse_err(line: usize, message: impl Into<String>) -> InstanceError {
    InstanceError::Parse {
        line,
        message: message.into(),
    }
}

macro_rules! agent_id {
    ($name:ident, $prefix:literal) => {
        #[derive(
            Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(usize);

        impl $name {
            /// Zero-based constructor.
            pub const fn new(index: usize) -> Self {
                Self(index)
            }

            /// One-based constructor, as used in files and on the command line.
            pub fn from_number(number: usize) -> Option<Self> {
                number.checked_sub(1).map(Self)
            }

            pub const fn index(self) -> usize {
                self.0
            }

            pub const fn number(self) -> usize {
                self.0 + 1
            }

            pub fn all(n: usize) -> impl Iterator<Item = Self> {
                (0..n).map(Self)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{}", $prefix, self.number())
            }
        }
    };
}

agent_id!(WorkerId, "w");
agent_id!(FirmId, "f");

/// A complete strict ranking of the opposite side, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceList {
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl PreferenceList {
    /// Builds a list from zero-based indices. Fails unless `order` is a
    /// permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self, String> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &x) in order.iter().enumerate() {
            if x >= n {
                return Err(format!("entry {} out of range 1..={n}", x + 1));
            }
            if rank[x] != usize::MAX {
                return Err(format!("entry {} listed twice", x + 1));
            }
            rank[x] = pos;
        }
        Ok(Self { order, rank })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Position of `x` in the list; 0 is the favourite.
    #[inline]
    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    /// `a` strictly preferred to `b`.
    #[inline]
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }

    #[inline]
    pub fn at(&self, pos: usize) -> usize {
        self.order[pos]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

/// Complete strict preferences for `n` workers and `n` firms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    name: String,
    worker_prefs: Vec<PreferenceList>,
    firm_prefs: Vec<PreferenceList>,
}

impl Instance {
    /// Builds an instance from zero-based lists.
    pub fn new(
        worker_lists: Vec<Vec<usize>>,
        firm_lists: Vec<Vec<usize>>,
    ) -> Result<Self, InstanceError> {
        let n = worker_lists.len();
        if n == 0 {
            return Err(InstanceError::Validation {
                agent: "instance".into(),
                message: "n must be at least 1".into(),
            });
        }
        if firm_lists.len() != n {
            return Err(InstanceError::SizeMismatch {
                left: n,
                right: firm_lists.len(),
            });
        }
        let build =
            |lists: Vec<Vec<usize>>, prefix: char| -> Result<Vec<PreferenceList>, InstanceError> {
                lists
                    .into_iter()
                    .enumerate()
                    .map(|(i, list)| {
                        let agent = format!("{prefix}{}", i + 1);
                        if list.len() != n {
                            return Err(InstanceError::Validation {
                                agent,
                                message: format!("list has {} entries, expected {n}", list.len()),
                            });
                        }
                        PreferenceList::new(list)
                            .map_err(|message| InstanceError::Validation { agent, message })
                    })
                    .collect()
            };
        Ok(Self {
            name: String::new(),
            worker_prefs: build(worker_lists, 'w')?,
            firm_prefs: build(firm_lists, 'f')?,
        })
    }

    /// Builds an instance from one-based lists, as written in the text format.
    pub fn from_numbers(
        worker_lists: &[Vec<usize>],
        firm_lists: &[Vec<usize>],
    ) -> Result<Self, InstanceError> {
        let shift =
            |lists: &[Vec<usize>], prefix: char| -> Result<Vec<Vec<usize>>, InstanceError> {
                lists
                    .iter()
                    .enumerate()
                    .map(|(i, l)| {
                        l.iter()
                            .map(|&x| {
                                x.checked_sub(1).ok_or_else(|| InstanceError::Validation {
                                    agent: format!("{prefix}{}", i + 1),
                                    message: "ids start at 1".into(),
                                })
                            })
                            .collect()
                    })
                    .collect()
            };
        Self::new(shift(worker_lists, 'w')?, shift(firm_lists, 'f')?)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.worker_prefs.len()
    }

    pub fn worker_list(&self, w: WorkerId) -> &PreferenceList {
        &self.worker_prefs[w.index()]
    }

    pub fn firm_list(&self, f: FirmId) -> &PreferenceList {
        &self.firm_prefs[f.index()]
    }

    pub fn worker_lists(&self) -> &[PreferenceList] {
        &self.worker_prefs
    }

    pub fn firm_lists(&self) -> &[PreferenceList] {
        &self.firm_prefs
    }

    /// Worker `w` strictly prefers `a` to `b`.
    #[inline]
    pub fn worker_prefers(&self, w: WorkerId, a: FirmId, b: FirmId) -> bool {
        self.worker_prefs[w.index()].prefers(a.index(), b.index())
    }

    /// Firm `f` strictly prefers `a` to `b`.
    #[inline]
    pub fn firm_prefers(&self, f: FirmId, a: WorkerId, b: WorkerId) -> bool {
        self.firm_prefs[f.index()].prefers(a.index(), b.index())
    }

    /// Copy of `self` with worker `w`'s list taken from `other`.
    pub fn with_worker_list_from(&self, w: WorkerId, other: &Instance) -> Instance {
        let mut out = self.clone();
        out.worker_prefs[w.index()] = other.worker_prefs[w.index()].clone();
        out
    }

    /// Copy of `self` with firm `f`'s list taken from `other`.
    pub fn with_firm_list_from(&self, f: FirmId, other: &Instance) -> Instance {
        let mut out = self.clone();
        out.firm_prefs[f.index()] = other.firm_prefs[f.index()].clone();
        out
    }

    /// Canonical text form; `parse_instance(&i.to_text())` reproduces `i`.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        let mut write = |prefix: char, lists: &[PreferenceList]| {
            for (i, list) in lists.iter().enumerate() {
                out.push_str(&format!("{prefix} {}:", i + 1));
                for &x in list.order() {
                    out.push_str(&format!(" {}", x + 1));
                }
                out.push('\n');
            }
        };
        write('w', &self.worker_prefs);
        write('f', &self.firm_prefs);
        out
    }
}

/// Parses the line-oriented instance format:
///
/// ```text
/// n 2
/// w 1: 1 2
/// w 2: 2 1
/// f 1: 2 1
/// f 2: 1 2
/// ```
///
/// `#` starts a comment and blank lines are skipped.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut n: Option<usize> = None;
    let mut workers: Vec<Option<Vec<usize>>> = Vec::new();
    let mut firms: Vec<Option<Vec<usize>>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(size) = n else {
            let mut parts = line.split_whitespace();
            if parts.next() != Some("n") {
                return Err(parse_err(lineno, "expected `n <N>` header"));
            }
            let value = parts
                .next()
                .ok_or_else(|| parse_err(lineno, "missing size"))?;
            let value: usize = value
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad size `{value}`")))?;
            if parts.next().is_some() {
                return Err(parse_err(lineno, "trailing tokens after size"));
            }
            if value == 0 {
                return Err(parse_err(lineno, "n must be at least 1"));
            }
            n = Some(value);
            workers = vec![None; value];
            firms = vec![None; value];
            continue;
        };

        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| parse_err(lineno, "expected `w <i>: ...` or `f <j>: ...`"))?;
        let mut head_parts = head.split_whitespace();
        let side = head_parts.next().unwrap_or("");
        let id = head_parts
            .next()
            .ok_or_else(|| parse_err(lineno, "missing agent id"))?;
        if head_parts.next().is_some() {
            return Err(parse_err(lineno, "unexpected tokens before `:`"));
        }
        let id: usize = id
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad agent id `{id}`")))?;
        let (slots, prefix) = match side {
            "w" => (&mut workers, 'w'),
            "f" => (&mut firms, 'f'),
            other => return Err(parse_err(lineno, format!("unknown side `{other}`"))),
        };
        if id == 0 || id > size {
            return Err(InstanceError::Validation {
                agent: format!("{prefix}{id}"),
                message: format!("id out of range 1..={size} (line {lineno})"),
            });
        }
        if slots[id - 1].is_some() {
            return Err(InstanceError::Validation {
                agent: format!("{prefix}{id}"),
                message: format!("list given twice (line {lineno})"),
            });
        }
        let list = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| parse_err(lineno, format!("bad entry `{tok}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        slots[id - 1] = Some(list);
    }

    let n = n.ok_or_else(|| parse_err(0, "empty input"))?;
    let collect =
        |slots: Vec<Option<Vec<usize>>>, prefix: char| -> Result<Vec<Vec<usize>>, InstanceError> {
            slots
                .into_iter()
                .enumerate()
                .map(|(i, s)| {
                    s.ok_or_else(|| InstanceError::Validation {
                        agent: format!("{prefix}{}", i + 1),
                        message: "missing list".into(),
                    })
                })
                .collect()
        };
    let workers = collect(workers, 'w')?;
    let firms = collect(firms, 'f')?;
    debug_assert_eq!(workers.len(), n);
    Instance::from_numbers(&workers, &firms)
}

impl FromStr for Instance {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_instance(s)
    }
}

/// A perfect worker/firm bijection.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    // Ordering and equality only look at this vector; `firm_partner` is its inverse.
    worker_partner: Vec<usize>,
    firm_partner: Vec<usize>,
}

impl Matching {
    /// `partners[w]` is the zero-based firm of worker `w`.
    pub fn from_worker_partners(partners: Vec<usize>) -> Result<Self, InstanceError> {
        let n = partners.len();
        let mut firm_partner = vec![usize::MAX; n];
        for (w, &f) in partners.iter().enumerate() {
            if f >= n {
                return Err(InstanceError::NotAMatching(format!(
                    "firm {} out of range",
                    f + 1
                )));
            }
            if firm_partner[f] != usize::MAX {
                return Err(InstanceError::NotAMatching(format!(
                    "firm {} assigned twice",
                    f + 1
                )));
            }
            firm_partner[f] = w;
        }
        Ok(Self {
            worker_partner: partners,
            firm_partner,
        })
    }

    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = (WorkerId, FirmId)>,
    ) -> Result<Self, InstanceError> {
        let mut partners = vec![usize::MAX; n];
        for (w, f) in pairs {
            if w.index() >= n {
                return Err(InstanceError::NotAMatching(format!(
                    "worker {} out of range",
                    w.number()
                )));
            }
            if partners[w.index()] != usize::MAX {
                return Err(InstanceError::NotAMatching(format!(
                    "worker {} assigned twice",
                    w.number()
                )));
            }
            partners[w.index()] = f.index();
        }
        if let Some(w) = partners.iter().position(|&f| f == usize::MAX) {
            return Err(InstanceError::NotAMatching(format!(
                "worker {} unmatched",
                w + 1
            )));
        }
        Self::from_worker_partners(partners)
    }

    /// The matching pairing worker `i` with firm `i`.
    pub fn identity(n: usize) -> Self {
        Self {
            worker_partner: (0..n).collect(),
            firm_partner: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.worker_partner.len()
    }

    #[inline]
    pub fn firm_of(&self, w: WorkerId) -> FirmId {
        FirmId::new(self.worker_partner[w.index()])
    }

    #[inline]
    pub fn worker_of(&self, f: FirmId) -> WorkerId {
        WorkerId::new(self.firm_partner[f.index()])
    }

    pub fn contains(&self, w: WorkerId, f: FirmId) -> bool {
        self.worker_partner[w.index()] == f.index()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (WorkerId, FirmId)> + '_ {
        self.worker_partner
            .iter()
            .enumerate()
            .map(|(w, &f)| (WorkerId::new(w), FirmId::new(f)))
    }

    pub fn worker_partners(&self) -> &[usize] {
        &self.worker_partner
    }

    /// `M: <f for w1> <f for w2> ...`, one-based.
    pub fn to_line(&self) -> String {
        let mut s = String::from("M:");
        for &f in &self.worker_partner {
            s.push_str(&format!(" {}", f + 1));
        }
        s
    }
}

/// Firm numbers up to 26 print as letters, the way the examples in the
/// literature write them (`{1a, 2b}`).
/// `(2, c)`, in the notation matchings print with.
pub fn show_pair(w: WorkerId, f: FirmId) -> String {
    match u8::try_from(f.index()) {
        Ok(i) if i < 26 => format!("({}, {})", w.index() + 1, (b'a' + i) as char),
        _ => format!("({}, {})", w.index() + 1, f.index() + 1),
    }
}

/// `{(2, c), (4, b)}`.
pub fn show_pairs(pairs: &[(WorkerId, FirmId)]) -> String {
    let items: Vec<String> = pairs.iter().map(|&(w, f)| show_pair(w, f)).collect();
    format!("{{{}}}", items.join(", "))
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.n() <= 26;
        write!(f, "{{")?;
        for (w, &firm) in self.worker_partner.iter().enumerate() {
            if w > 0 {
                write!(f, ", ")?;
            }
            if letters {
                write!(f, "{}{}", w + 1, (b'a' + firm as u8) as char)?;
            } else {
                write!(f, "{}:{}", w + 1, firm + 1)?;
            }
        }
        write!(f, "}}")
    }
}

impl Serialize for Matching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Matching {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Accepts either the file form `M: 2 1 3` or pair lists such as
/// `{1b, 2a, 3c}` / `1b 2a 3c` / `1:2 2:1 3:3`.
impl FromStr for Matching {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("M:") {
            let partners = rest
                .split_whitespace()
                .map(|tok| match tok.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(parse_err(1, format!("bad firm `{tok}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Self::from_worker_partners(partners);
        }
        let body = s.trim_start_matches('{').trim_end_matches('}');
        let mut pairs = Vec::new();
        for tok in body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let (w, f) = if let Some((w, f)) = tok.split_once(':') {
                (w.parse::<usize>().ok(), f.parse::<usize>().ok())
            } else {
                let split = tok.find(|c: char| !c.is_ascii_digit()).unwrap_or(tok.len());
                let (w, f) = tok.split_at(split);
                let firm = match f.as_bytes() {
                    [c @ b'a'..=b'z'] => Some((c - b'a') as usize + 1),
                    _ => None,
                };
                (w.parse::<usize>().ok(), firm)
            };
            match (
                w.and_then(WorkerId::from_number),
                f.and_then(FirmId::from_number),
            ) {
                (Some(w), Some(f)) => pairs.push((w, f)),
                _ => return Err(parse_err(1, format!("bad pair `{tok}`"))),
            }
        }
        Self::from_pairs(pairs.len(), pairs)
    }
}

/// All `(w, f)` outside `m` where both sides prefer each other to their partners.
pub fn blocking_pairs(instance: &Instance, m: &Matching) -> Vec<(WorkerId, FirmId)> {
    let n = instance.n();
    debug_assert_eq!(m.n(), n);
    let mut out = Vec::new();
    for w in WorkerId::all(n) {
        let current = m.firm_of(w);
        let wl = instance.worker_list(w);
        // only firms above the current partner can block
        for pos in 0..wl.rank(current.index()) {
            let f = FirmId::new(wl.at(pos));
            if instance.firm_prefers(f, w, m.worker_of(f)) {
                out.push((w, f));
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn is_stable(instance: &Instance, m: &Matching) -> bool {
    let n = instance.n();
    WorkerId::all(n).all(|w| {
        let wl = instance.worker_list(w);
        (0..wl.rank(m.firm_of(w).index())).all(|pos| {
            let f = FirmId::new(wl.at(pos));
            !instance.firm_prefers(f, w, m.worker_of(f))
        })
    })
}

fn combine(
    instance: &Instance,
    a: &Matching,
    b: &Matching,
    better: bool,
) -> Result<Matching, InstanceError> {
    if a.n() != instance.n() || b.n() != instance.n() {
        return Err(InstanceError::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let partners = WorkerId::all(instance.n())
        .map(|w| {
            let (fa, fb) = (a.firm_of(w), b.firm_of(w));
            let a_wins = instance.worker_prefers(w, fa, fb) == better;
            if fa == fb || a_wins {
                fa.index()
            } else {
                fb.index()
            }
        })
        .collect();
    Matching::from_worker_partners(partners)
}

/// Every worker takes its preferred partner of the two.
pub fn meet(instance: &Instance, a: &Matching, b: &Matching) -> Result<Matching, InstanceError> {
    combine(instance, a, b, true)
}

/// Every worker takes its less preferred partner of the two.
pub fn join(instance: &Instance, a: &Matching, b: &Matching) -> Result<Matching, InstanceError> {
    combine(instance, a, b, false)
}

/// Every worker weakly prefers its partner in `a` to the one in `b`.
pub fn dominates(instance: &Instance, a: &Matching, b: &Matching) -> bool {
    WorkerId::all(instance.n()).all(|w| !instance.worker_prefers(w, b.firm_of(w), a.firm_of(w)))
}

/// Which agents' lists differ between instances.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PQDelta {
    pub p: usize,
    pub q: usize,
    pub changed_workers: BTreeSet<WorkerId>,
    pub changed_firms: BTreeSet<FirmId>,
}

impl PQDelta {
    fn from_sets(changed_workers: BTreeSet<WorkerId>, changed_firms: BTreeSet<FirmId>) -> Self {
        Self {
            p: changed_workers.len(),
            q: changed_firms.len(),
            changed_workers,
            changed_firms,
        }
    }
}

impl fmt::Display for PQDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

pub fn diff_pq(a: &Instance, b: &Instance) -> Result<PQDelta, InstanceError> {
    family_delta(&[a.clone(), b.clone()])
}

/// Agents whose list is not identical across the whole family.
pub fn family_delta(instances: &[Instance]) -> Result<PQDelta, InstanceError> {
    let Some(first) = instances.first() else {
        return Ok(PQDelta::default());
    };
    let n = first.n();
    if let Some(other) = instances.iter().find(|i| i.n() != n) {
        return Err(InstanceError::SizeMismatch {
            left: n,
            right: other.n(),
        });
    }
    let workers = WorkerId::all(n)
        .filter(|&w| {
            instances
                .iter()
                .any(|i| i.worker_list(w) != first.worker_list(w))
        })
        .collect();
    let firms = FirmId::all(n)
        .filter(|&f| {
            instances
                .iter()
                .any(|i| i.firm_list(f) != first.firm_list(f))
        })
        .collect();
    Ok(PQDelta::from_sets(workers, firms))
}

/// Every instance has the same `n`; returns it.
pub fn common_size(instances: &[Instance]) -> Result<usize, InstanceError> {
    let first = instances.first().ok_or_else(|| InstanceError::Validation {
        agent: "family".into(),
        message: "at least one instance is required".into(),
    })?;
    match instances.iter().find(|i| i.n() != first.n()) {
        Some(other) => Err(InstanceError::SizeMismatch {
            left: first.n(),
            right: other.n(),
        }),
        None => Ok(first.n()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fix(text: &str) -> Instance {
        parse_instance(text).unwrap()
    }

    const A4: &str = include_str!("../fixtures/a4.txt");
    const B4: &str = include_str!("../fixtures/b4.txt");
    const A5A: &str = include_str!("../fixtures/a5a.txt");
    const B5A: &str = include_str!("../fixtures/b5a.txt");
    const A5B: &str = include_str!("../fixtures/a5b.txt");
    const B5B: &str = include_str!("../fixtures/b5b.txt");
    const A6: &str = include_str!("../fixtures/a6.txt");
    const B6: &str = include_str!("../fixtures/b6.txt");

    fn m(s: &str) -> Matching {
        s.parse().unwrap()
    }

    #[test]
    fn smallest_instance_parses() {
        let i = fix("n 1\nw 1: 1\nf 1: 1\n");
        assert_eq!(i.n(), 1);
        assert!(is_stable(&i, &Matching::identity(1)));
    }

    #[test]
    fn six_agent_example_parses() {
        let a = fix(A6);
        assert_eq!(a.n(), 6);
        assert_eq!(a.worker_list(WorkerId::new(4)).order(), &[4, 5, 0, 1, 2, 3]);
        assert_eq!(a.firm_list(FirmId::new(0)).order(), &[1, 0, 2, 3, 4, 5]);
    }

    #[test]
    fn duplicate_entry_is_rejected() {
        let err = parse_instance(
            "n 3\nw 1: 3 3 1\nw 2: 1 2 3\nw 3: 1 2 3\nf 1: 1 2 3\nf 2: 1 2 3\nf 3: 1 2 3\n",
        )
        .unwrap_err();
        match err {
            InstanceError::Validation { agent, message } => {
                assert_eq!(agent, "w1");
                assert!(message.contains("twice"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse_instance(""),
            Err(InstanceError::Parse { .. })
        ));
        assert!(matches!(
            parse_instance("m 2"),
            Err(InstanceError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance("n 2\nw 1: 1 2\nw 3: 1 2\n"),
            Err(InstanceError::Validation { agent, .. }) if agent == "w3"
        ));
        assert!(matches!(
            parse_instance("n 2\nw 1: 1\nw 2: 1 2\nf 1: 1 2\nf 2: 1 2\n"),
            Err(InstanceError::Validation { agent, .. }) if agent == "w1"
        ));
        assert!(matches!(
            parse_instance("n 2\nw 1: 1 2\nw 2: 1 2\nf 1: 1 2\n"),
            Err(InstanceError::Validation { agent, .. }) if agent == "f2"
        ));
        assert!(matches!(
            parse_instance("n 2\n\nw 1 1 2\n"),
            Err(InstanceError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_instance("n 2\nw 1: 1 x\n"),
            Err(InstanceError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("n 2\nw 1: 1 3\nw 2: 1 2\nf 1: 1 2\nf 2: 1 2\n"),
            Err(InstanceError::Validation { .. })
        ));
    }

    #[test]
    fn serialize_roundtrip_on_fixtures() {
        for text in [A4, B4, A5A, B5A, A5B, B5B, A6, B6] {
            let i = fix(text);
            assert_eq!(fix(&i.to_text()), i);
        }
    }

    #[test]
    fn matching_notation() {
        let x = m("{1b, 2a, 3c}");
        assert_eq!(x.firm_of(WorkerId::new(0)), FirmId::new(1));
        assert_eq!(x.worker_of(FirmId::new(0)), WorkerId::new(1));
        assert_eq!(x.to_string(), "{1b, 2a, 3c}");
        assert_eq!(x.to_line(), "M: 2 1 3");
        assert_eq!(m("M: 2 1 3"), x);
        assert_eq!(m("1:2 2:1 3:3"), x);
        assert!("1a 2a".parse::<Matching>().is_err());
        assert!("1a 3b".parse::<Matching>().is_err());
    }

    #[test]
    fn blocking_pairs_from_the_examples() {
        let b4 = fix(B4);
        let bad = m("1a 2b 3d 4c");
        assert!(blocking_pairs(&b4, &bad).contains(&(WorkerId::new(3), FirmId::new(0))));
        assert!(!is_stable(&b4, &bad));

        let b5a = fix(B5A);
        let m1 = m("1b 2a 3c 4d 5e");
        assert!(blocking_pairs(&b5a, &m1).contains(&(WorkerId::new(4), FirmId::new(2))));
    }

    #[test]
    fn stable_under_both_small() {
        let (a, b) = (fix(A4), fix(B4));
        let m1 = m("1a 2b 3c 4d");
        assert!(is_stable(&a, &m1) && is_stable(&b, &m1));
    }

    #[test]
    fn meet_and_join_on_the_twisted_example() {
        let (a, b) = (fix(A6), fix(B6));
        let m1 = m("1b 2a 3d 4c 5e 6f");
        let m2 = m("1a 2b 3c 4d 5f 6e");
        assert_eq!(meet(&a, &m1, &m2).unwrap(), m("1a 2b 3c 4d 5e 6f"));
        assert_eq!(join(&a, &m1, &m2).unwrap(), m("1b 2a 3d 4c 5f 6e"));
        assert_eq!(meet(&b, &m1, &m2).unwrap(), m("1b 2a 3c 4d 5e 6f"));
        assert_eq!(join(&b, &m1, &m2).unwrap(), m("1a 2b 3d 4c 5f 6e"));
        assert_eq!(meet(&a, &m1, &m1).unwrap(), m1);
        assert_eq!(join(&a, &m2, &m2).unwrap(), m2);
    }

    #[test]
    fn meet_of_unstable_inputs_can_fail() {
        let i = fix("n 2\nw 1: 1 2\nw 2: 1 2\nf 1: 1 2\nf 2: 1 2\n");
        let err = meet(&i, &m("1a 2b"), &m("1b 2a")).unwrap_err();
        assert!(matches!(err, InstanceError::NotAMatching(_)));
    }

    #[test]
    fn pq_deltas() {
        let d = diff_pq(&fix(A4), &fix(B4)).unwrap();
        assert_eq!((d.p, d.q), (2, 2));
        assert_eq!(
            d.changed_workers
                .iter()
                .map(|w| w.number())
                .collect::<Vec<_>>(),
            vec![3, 4]
        );
        let d = diff_pq(&fix(A5B), &fix(B5B)).unwrap();
        assert_eq!((d.p, d.q), (1, 1));
        let d = diff_pq(&fix(A5A), &fix(B5A)).unwrap();
        assert_eq!((d.p, d.q), (0, 2));
        let d = diff_pq(&fix(A6), &fix(A6)).unwrap();
        assert_eq!((d.p, d.q), (0, 0));
        assert!(matches!(
            diff_pq(&fix(A4), &fix(A6)),
            Err(InstanceError::SizeMismatch { .. })
        ));
    }
}
