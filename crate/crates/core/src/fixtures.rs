//! The worked example pairs, shipped as instance files under `fixtures/`.

use crate::instance::{parse_instance, Instance};

/// A named pair of nearby instances.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub a: Instance,
    pub b: Instance,
}

const SOURCES: [(&str, &str, &str); 4] = [
    (
        "a4-b4",
        include_str!("../fixtures/a4.txt"),
        include_str!("../fixtures/b4.txt"),
    ),
    (
        "a5a-b5a",
        include_str!("../fixtures/a5a.txt"),
        include_str!("../fixtures/b5a.txt"),
    ),
    (
        "a5b-b5b",
        include_str!("../fixtures/a5b.txt"),
        include_str!("../fixtures/b5b.txt"),
    ),
    (
        "a6-b6",
        include_str!("../fixtures/a6.txt"),
        include_str!("../fixtures/b6.txt"),
    ),
];

fn load(name: &'static str) -> Fixture {
    let (_, a, b) = SOURCES.iter().find(|s| s.0 == name).expect("known fixture");
    Fixture {
        name,
        a: parse_instance(a).expect("fixture parses").with_name("A"),
        b: parse_instance(b).expect("fixture parses").with_name("B"),
    }
}

/// Two workers and two firms change; the intersection is not a sublattice.
pub fn two_sided() -> Fixture {
    load("a4-b4")
}

/// Only firms b and c change.
pub fn one_sided() -> Fixture {
    load("a5a-b5a")
}

/// Worker 3 and firm c change.
pub fn one_one() -> Fixture {
    load("a5b-b5b")
}

/// Workers 1, 2 and firms a, b change; meet and join depend on the instance.
pub fn twisted() -> Fixture {
    load("a6-b6")
}

pub fn all() -> Vec<Fixture> {
    SOURCES.iter().map(|s| load(s.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::diff_pq;

    #[test]
    fn deltas() {
        let d: Vec<(usize, usize)> = all()
            .iter()
            .map(|f| {
                let d = diff_pq(&f.a, &f.b).unwrap();
                (d.p, d.q)
            })
            .collect();
        assert_eq!(d, vec![(2, 2), (0, 2), (1, 1), (2, 2)]);
    }
}
