//! Finite strict partial orders and enumeration of their closed (lower) sets.

/// Strict partial order on `0..len`, stored as its transitive closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictOrder {
    lt: Vec<Vec<bool>>,
}

impl StrictOrder {
    pub fn antichain(len: usize) -> Self {
        Self {
            lt: vec![vec![false; len]; len],
        }
    }

    /// Transitive closure of `edges` (`(a, b)` means `a` precedes `b`).
    /// Returns `None` if the edges contain a cycle.
    pub fn from_edges(len: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Option<Self> {
        let mut lt = vec![vec![false; len]; len];
        for (a, b) in edges {
            lt[a][b] = true;
        }
        for k in 0..len {
            let row_k = lt[k].clone();
            for row in lt.iter_mut().filter(|row| row[k]) {
                for (x, &y) in row.iter_mut().zip(&row_k) {
                    *x |= y;
                }
            }
        }
        (0..len).all(|i| !lt[i][i]).then_some(Self { lt })
    }

    pub fn len(&self) -> usize {
        self.lt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lt.is_empty()
    }

    #[inline]
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.lt[a][b]
    }

    /// Covering pairs: `a < b` with nothing strictly between.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt[a][b] && !(0..n).any(|c| self.lt[a][c] && self.lt[c][b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_closed(&self, set: &[bool]) -> bool {
        let n = self.len();
        (0..n).all(|b| !set[b] || (0..n).all(|a| !self.lt[a][b] || set[a]))
    }

    /// Lazily enumerates every closed set exactly once.
    pub fn ideals(&self) -> Ideals<'_> {
        Ideals {
            order: self,
            stack: vec![Frame {
                included: vec![false; self.len()],
                excluded: vec![false; self.len()],
            }],
        }
    }
}

struct Frame {
    included: Vec<bool>,
    excluded: Vec<bool>,
}

/// Closed sets by binary branching on a minimal undecided element: either
/// take it, or drop it together with everything above it. Both branches
/// always contain at least one closed set, so the work between two outputs
/// is bounded by the depth of the search (at most `len` branchings).
pub struct Ideals<'a> {
    order: &'a StrictOrder,
    stack: Vec<Frame>,
}

impl Iterator for Ideals<'_> {
    type Item = Vec<bool>;

    fn next(&mut self) -> Option<Vec<bool>> {
        let order = self.order;
        let n = order.len();
        let mut frame = self.stack.pop()?;
        loop {
            let minimal = (0..n).find(|&x| {
                !frame.included[x]
                    && !frame.excluded[x]
                    && (0..n).all(|p| !order.lt[p][x] || frame.included[p])
            });
            let Some(x) = minimal else {
                return Some(frame.included);
            };
            let mut excluded = frame.excluded.clone();
            excluded[x] = true;
            for (y, ex) in excluded.iter_mut().enumerate() {
                if order.lt[x][y] {
                    *ex = true;
                }
            }
            self.stack.push(Frame {
                included: frame.included.clone(),
                excluded,
            });
            frame.included[x] = true;
        }
    }
}
