//! Test oracles for the tableaux prover.
//!
//! [`bounded_satisfiable`] decides satisfiability by searching every path of
//! `B = count(F in nnf) + 1` states whose last state repeats forever. It
//! evaluates the formula directly on paths and shares no code with the
//! prover. [`FormulaGen`] produces seeded random formulas for property
//! suites.

use std::collections::{BTreeSet, HashMap};

use ltlpark_core::Formula;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Number of `F` operators after pushing negations inward, computed without
/// building the normal form.
pub fn eventualities_in_nnf(f: &Formula) -> usize {
    fn count(f: &Formula, positive: bool) -> usize {
        match f {
            Formula::Atom(_) => 0,
            Formula::Not(g) => count(g, !positive),
            Formula::And(l, r) | Formula::Or(l, r) => count(l, positive) + count(r, positive),
            Formula::Implies(l, r) => count(l, !positive) + count(r, positive),
            Formula::Iff(l, r) => {
                count(l, true) + count(r, true) + count(l, false) + count(r, false)
            }
            Formula::Eventually(g) => usize::from(positive) + count(g, positive),
            Formula::Always(g) => usize::from(!positive) + count(g, positive),
        }
    }
    count(f, true)
}

/// Path length used by the oracle.
pub fn path_bound(f: &Formula) -> usize {
    eventualities_in_nnf(f) + 1
}

/// Truth of `f` at `pos` of `path`, where the last state repeats forever.
/// Each state is the set of atoms true in it.
pub fn holds(f: &Formula, path: &[BTreeSet<String>], pos: usize) -> bool {
    match f {
        Formula::Atom(name) => path[pos].contains(name),
        Formula::Not(g) => !holds(g, path, pos),
        Formula::And(l, r) => holds(l, path, pos) && holds(r, path, pos),
        Formula::Or(l, r) => holds(l, path, pos) || holds(r, path, pos),
        Formula::Implies(l, r) => !holds(l, path, pos) || holds(r, path, pos),
        Formula::Iff(l, r) => holds(l, path, pos) == holds(r, path, pos),
        Formula::Eventually(g) => (pos..path.len()).any(|j| holds(g, path, j)),
        Formula::Always(g) => (pos..path.len()).all(|j| holds(g, path, j)),
    }
}

fn states(atoms: &[String]) -> Vec<BTreeSet<String>> {
    (0..1usize << atoms.len())
        .map(|mask| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect()
}

/// Literal enumeration of all `2^(atoms·B)` paths. Only usable for small
/// inputs; returns `None` when the search space exceeds `limit` paths.
pub fn enumerate_satisfiable(f: &Formula, limit: u64) -> Option<bool> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let len = path_bound(f);
    let per_state = states(&atoms);
    let total = (per_state.len() as u64).checked_pow(len as u32)?;
    if total > limit {
        return None;
    }
    let mut path = vec![per_state[0].clone(); len];
    for mut code in 0..total {
        for slot in path.iter_mut() {
            *slot = per_state[(code % per_state.len() as u64) as usize].clone();
            code /= per_state.len() as u64;
        }
        if holds(f, &path, 0) {
            return Some(true);
        }
    }
    Some(false)
}

/// Subformulas in post-order; children precede parents.
fn subformulas(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Atom(_) => {}
        Formula::Not(g) | Formula::Eventually(g) | Formula::Always(g) => subformulas(g, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            subformulas(l, out);
            subformulas(r, out);
        }
    }
    if !out.contains(f) {
        out.push(f.clone());
    }
}

/// Same search as [`enumerate_satisfiable`], computed backwards over the
/// truth vectors of all subformulas so that paths sharing a suffix are
/// evaluated once. Exact for every input size.
pub fn bounded_satisfiable(f: &Formula) -> bool {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let len = path_bound(f);
    let mut subs = Vec::new();
    subformulas(f, &mut subs);
    let index: HashMap<&Formula, usize> = subs.iter().enumerate().map(|(i, s)| (s, i)).collect();

    // Truth vector at a position from the state there and the vector at the
    // next position (`None` for the repeating last state).
    let vector = |state: &BTreeSet<String>, next: Option<&Vec<bool>>| -> Vec<bool> {
        let mut v = vec![false; subs.len()];
        for (i, s) in subs.iter().enumerate() {
            let at = |g: &Formula| v[index[g]];
            v[i] = match s {
                Formula::Atom(name) => state.contains(name),
                Formula::Not(g) => !at(g),
                Formula::And(l, r) => at(l) && at(r),
                Formula::Or(l, r) => at(l) || at(r),
                Formula::Implies(l, r) => !at(l) || at(r),
                Formula::Iff(l, r) => at(l) == at(r),
                Formula::Eventually(g) => at(g) || next.is_some_and(|n| n[i]),
                Formula::Always(g) => at(g) && next.is_none_or(|n| n[i]),
            };
        }
        v
    };

    let all_states = states(&atoms);
    let mut layer: BTreeSet<Vec<bool>> = all_states.iter().map(|s| vector(s, None)).collect();
    for _ in 1..len {
        layer = layer
            .iter()
            .flat_map(|next| all_states.iter().map(move |s| (s, next)))
            .map(|(s, next)| vector(s, Some(next)))
            .collect();
    }
    let root = index[f];
    layer.iter().any(|v| v[root])
}

/// Shape limits for random formulas.
#[derive(Debug, Clone, Copy)]
pub struct GenLimits {
    pub atoms: usize,
    pub max_connectives: usize,
    pub max_temporal_depth: usize,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits {
            atoms: 4,
            max_connectives: 12,
            max_temporal_depth: 2,
        }
    }
}

/// Seeded generator of random formulas within [`GenLimits`].
pub struct FormulaGen {
    rng: ChaCha8Rng,
    limits: GenLimits,
}

const ATOMS: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

impl FormulaGen {
    pub fn new(seed: u64, limits: GenLimits) -> Self {
        assert!(limits.atoms >= 1 && limits.atoms <= ATOMS.len());
        FormulaGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            limits,
        }
    }

    pub fn next_formula(&mut self) -> Formula {
        let budget = self.rng.gen_range(0..=self.limits.max_connectives);
        self.build(budget, self.limits.max_temporal_depth)
    }

    // Uses exactly `budget` connectives.
    fn build(&mut self, budget: usize, temporal: usize) -> Formula {
        if budget == 0 {
            let i = self.rng.gen_range(0..self.limits.atoms);
            return Formula::atom(ATOMS[i]);
        }
        let unary_only = budget == 1;
        let choice = self.rng.gen_range(0..if unary_only { 3 } else { 8 });
        match choice {
            0 => Formula::not(self.build(budget - 1, temporal)),
            1 | 2 if temporal > 0 => {
                let body = self.build(budget - 1, temporal - 1);
                if choice == 1 {
                    Formula::eventually(body)
                } else {
                    Formula::always(body)
                }
            }
            1 | 2 => Formula::not(self.build(budget - 1, temporal)),
            _ => {
                let left = self.rng.gen_range(0..budget);
                let l = self.build(left, temporal);
                let r = self.build(budget - 1 - left, temporal);
                match choice {
                    3 | 4 => Formula::and(l, r),
                    5 => Formula::or(l, r),
                    6 => Formula::implies(l, r),
                    _ => Formula::iff(l, r),
                }
            }
        }
    }
}

impl Iterator for FormulaGen {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        Some(self.next_formula())
    }
}
