//! Ordering constraints between the worlds of one branch.
//!
//! Worlds sit on a single timeline; a branch is realizable when its worlds can
//! be laid out as a total preorder that respects every `≤`/`<` constraint and
//! keeps apart each pair of worlds carrying complementary literals.

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Rel {
    None,
    Le,
    Lt,
}

/// Transitively closed `≤`/`<` relation over worlds `0..n`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Ordering {
    rel: Vec<Vec<Rel>>,
    inconsistent: bool,
}

impl Ordering {
    pub(crate) fn add_world(&mut self) -> usize {
        let n = self.rel.len();
        for row in &mut self.rel {
            row.push(Rel::None);
        }
        let mut row = vec![Rel::None; n + 1];
        row[n] = Rel::Le;
        self.rel.push(row);
        n
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.rel.len()
    }

    /// Adds `u ≤ v` (or `u < v` when `strict`) and closes transitively.
    pub(crate) fn add(&mut self, u: usize, v: usize, strict: bool) {
        let n = self.rel.len();
        let before: Vec<(usize, Rel)> = (0..n)
            .filter(|&a| self.rel[a][u] != Rel::None)
            .map(|a| (a, self.rel[a][u]))
            .collect();
        let after: Vec<(usize, Rel)> = (0..n)
            .filter(|&b| self.rel[v][b] != Rel::None)
            .map(|b| (b, self.rel[v][b]))
            .collect();
        for &(a, ra) in &before {
            for &(b, rb) in &after {
                let r = if strict || ra == Rel::Lt || rb == Rel::Lt {
                    Rel::Lt
                } else {
                    Rel::Le
                };
                if r > self.rel[a][b] {
                    self.rel[a][b] = r;
                }
            }
        }
        if (0..n).any(|a| self.rel[a][a] == Rel::Lt) {
            self.inconsistent = true;
        }
    }

    /// True if `u ≤ v` is entailed.
    pub(crate) fn entails_le(&self, u: usize, v: usize) -> bool {
        self.rel[u][v] != Rel::None
    }

    /// True if `u < v` is entailed.
    pub(crate) fn entails_lt(&self, u: usize, v: usize) -> bool {
        self.rel[u][v] == Rel::Lt
    }

    /// True if every layout puts `u` and `v` at the same time point.
    pub(crate) fn forced_equal(&self, u: usize, v: usize) -> bool {
        u == v || (self.entails_le(u, v) && self.entails_le(v, u))
    }

    pub(crate) fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worlds(n: usize) -> Ordering {
        let mut o = Ordering::default();
        for _ in 0..n {
            o.add_world();
        }
        o
    }

    #[test]
    fn transitive_closure() {
        let mut o = worlds(3);
        o.add(0, 1, false);
        o.add(1, 2, true);
        assert!(o.entails_lt(0, 2));
        assert!(o.entails_le(0, 1) && !o.entails_lt(0, 1));
        assert!(!o.is_inconsistent());
    }

    #[test]
    fn le_cycle_forces_equality() {
        let mut o = worlds(2);
        o.add(0, 1, false);
        o.add(1, 0, false);
        assert!(o.forced_equal(0, 1));
        assert!(!o.is_inconsistent());
    }

    #[test]
    fn strict_cycle_is_inconsistent() {
        let mut o = worlds(3);
        o.add(0, 1, false);
        o.add(1, 2, false);
        o.add(2, 0, true);
        assert!(o.is_inconsistent());
        let mut o = worlds(1);
        o.add(0, 0, true);
        assert!(o.is_inconsistent());
    }

    #[test]
    fn late_worlds_join_closure() {
        let mut o = worlds(1);
        let a = o.add_world();
        o.add(0, a, false);
        let b = o.add_world();
        o.add(a, b, true);
        assert!(o.entails_lt(0, b));
        assert_eq!(o.len(), 3);
    }
}
