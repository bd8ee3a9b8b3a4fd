//! Tree construction.
//!
//! The input is lowered to negation normal form in an arena so that every `F`
//! occurrence has a stable identity. Each occurrence gets exactly one named
//! state per branch, shared by all of its instances. `G` over literals and
//! conjunctions stays under a universal label; `G` over a disjunction or an
//! `F` is instantiated at every state of the branch, splitting on whether the
//! state comes before the `G` was asserted.
//!
//! α-rules and the non-branching temporal rules run when a formula is added;
//! β-splits are queued, universal instances are taken last.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::order::Ordering;
use super::{
    Branch, BranchStatus, LabelKind, LabeledLiteral, NodeContent, OrderFact, TreeNode, TruthTree,
    WorldLabel,
};
use crate::ltl::Formula;

#[derive(Debug, Clone)]
enum Kind {
    Lit { atom: String, positive: bool },
    And(usize, usize),
    Or(usize, usize),
    Eventually(usize),
    Always(usize),
}

#[derive(Debug)]
struct ArenaNode {
    kind: Kind,
    /// Source formula this node was lowered from, for display.
    display: Formula,
}

#[derive(Debug, Default)]
struct Arena {
    nodes: Vec<ArenaNode>,
}

impl Arena {
    fn push(&mut self, kind: Kind, display: Formula) -> usize {
        self.nodes.push(ArenaNode { kind, display });
        self.nodes.len() - 1
    }

    fn lower(&mut self, f: &Formula, positive: bool) -> usize {
        let display = if positive {
            f.clone()
        } else {
            Formula::not(f.clone())
        };
        match f {
            Formula::Atom(name) => self.push(
                Kind::Lit {
                    atom: name.clone(),
                    positive,
                },
                display,
            ),
            Formula::Not(inner) => self.lower(inner, !positive),
            Formula::And(l, r) | Formula::Or(l, r) => {
                let a = self.lower(l, positive);
                let b = self.lower(r, positive);
                let conj = matches!(f, Formula::And(..)) == positive;
                self.push(
                    if conj {
                        Kind::And(a, b)
                    } else {
                        Kind::Or(a, b)
                    },
                    display,
                )
            }
            Formula::Implies(l, r) => {
                let a = self.lower(l, !positive);
                let b = self.lower(r, positive);
                self.push(
                    if positive {
                        Kind::Or(a, b)
                    } else {
                        Kind::And(a, b)
                    },
                    display,
                )
            }
            Formula::Iff(l, r) => {
                let (l1, r1, l2, r2) = if positive {
                    (true, true, false, false)
                } else {
                    (true, false, false, true)
                };
                let a = self.lower(l, l1);
                let b = self.lower(r, r1);
                let first = self.push(Kind::And(a, b), conj_display(l, l1, r, r1));
                let c = self.lower(l, l2);
                let d = self.lower(r, r2);
                let second = self.push(Kind::And(c, d), conj_display(l, l2, r, r2));
                self.push(Kind::Or(first, second), display)
            }
            Formula::Eventually(inner) | Formula::Always(inner) => {
                let body = self.lower(inner, positive);
                let eventually = matches!(f, Formula::Eventually(_)) == positive;
                self.push(
                    if eventually {
                        Kind::Eventually(body)
                    } else {
                        Kind::Always(body)
                    },
                    display,
                )
            }
        }
    }

    /// Peels `F`/`G` and reports whether a literal is underneath.
    fn collapses_to_literal(&self, mut id: usize) -> bool {
        loop {
            match self.nodes[id].kind {
                Kind::Lit { .. } => return true,
                Kind::Eventually(b) | Kind::Always(b) => id = b,
                _ => return false,
            }
        }
    }

    #[cfg(test)]
    fn to_formula(&self, id: usize) -> Formula {
        match &self.nodes[id].kind {
            Kind::Lit { atom, positive } => {
                let a = Formula::Atom(atom.clone());
                if *positive {
                    a
                } else {
                    Formula::not(a)
                }
            }
            Kind::And(a, b) => Formula::and(self.to_formula(*a), self.to_formula(*b)),
            Kind::Or(a, b) => Formula::or(self.to_formula(*a), self.to_formula(*b)),
            Kind::Eventually(b) => Formula::eventually(self.to_formula(*b)),
            Kind::Always(b) => Formula::always(self.to_formula(*b)),
        }
    }
}

fn conj_display(l: &Formula, lp: bool, r: &Formula, rp: bool) -> Formula {
    let side = |f: &Formula, p: bool| {
        if p {
            f.clone()
        } else {
            Formula::not(f.clone())
        }
    };
    Formula::and(side(l, lp), side(r, rp))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Place {
    /// At one state.
    At(usize),
    /// At every state from this one on.
    From(usize),
}

#[derive(Debug, Clone)]
struct Pending {
    node: usize,
    from: usize,
}

#[derive(Debug, Clone)]
struct State {
    /// Named-label path of every state; index 0 is the initial state.
    worlds: Vec<Vec<String>>,
    ordering: Ordering,
    occurrence_world: BTreeMap<usize, usize>,
    ground: Vec<(String, bool, usize)>,
    universal: Vec<(String, bool, usize)>,
    /// Pairs of states that must not coincide.
    apart: Vec<(usize, usize)>,
    literals: Vec<LabeledLiteral>,
    facts: Vec<OrderFact>,
    seen: BTreeSet<(usize, Place)>,
    beta: VecDeque<(usize, usize)>,
    pending: Vec<Pending>,
    instantiated: BTreeSet<(usize, usize)>,
    closed: bool,
    tip: usize,
    hide_root_literal: bool,
}

impl State {
    fn label_at(&self, world: usize) -> WorldLabel {
        let path = &self.worlds[world];
        match path.split_last() {
            None => WorldLabel::root(),
            Some((last, prefix)) => WorldLabel {
                prefix: prefix.to_vec(),
                kind: LabelKind::Named(last.clone()),
            },
        }
    }

    fn label_from(&self, world: usize, letter: &str) -> WorldLabel {
        WorldLabel {
            prefix: self.worlds[world].clone(),
            kind: LabelKind::Universal(letter.to_string()),
        }
    }

    fn recheck(&mut self) {
        if self.ordering.is_inconsistent()
            || self
                .apart
                .iter()
                .any(|&(u, v)| self.ordering.forced_equal(u, v))
        {
            self.closed = true;
        }
    }

    fn order(&mut self, earlier: usize, later: usize, strict: bool) {
        self.ordering.add(earlier, later, strict);
        self.recheck();
    }

    fn next_instance(&self) -> Option<(usize, usize)> {
        (0..self.pending.len())
            .flat_map(|p| (0..self.worlds.len()).map(move |w| (p, w)))
            .find(|key| !self.instantiated.contains(key))
    }
}

fn letter(base: &[char], n: usize) -> String {
    let c = base[n % base.len()];
    match n / base.len() {
        0 => c.to_string(),
        k => format!("{c}{}", k + 1),
    }
}

const NAMED: [char; 23] = [
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r', 's',
    't', 'u', 'v', 'w',
];
const UNIVERSAL: [char; 3] = ['x', 'y', 'z'];

struct Builder {
    arena: Arena,
    nodes: Vec<TreeNode>,
    branches: Vec<Branch>,
    named: usize,
    universals: usize,
}

impl Builder {
    fn push_node(&mut self, st: &mut State, content: NodeContent) {
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            content,
            children: Vec::new(),
            leaf: None,
        });
        self.nodes[st.tip].children.push(id);
        st.tip = id;
    }

    fn ground_literal(&mut self, st: &mut State, atom: &str, positive: bool, world: usize) {
        if st
            .ground
            .iter()
            .any(|(a, p, w)| a == atom && *p == positive && *w == world)
            || st
                .universal
                .iter()
                .any(|(a, p, w)| a == atom && *p == positive && *w == world)
        {
            return;
        }
        let lit = LabeledLiteral::new(positive, atom, st.label_at(world));
        st.literals.push(lit.clone());
        if st.hide_root_literal {
            st.hide_root_literal = false;
        } else {
            self.push_node(st, NodeContent::Literal(lit));
        }
        let clashes: Vec<usize> = st
            .ground
            .iter()
            .filter(|(a, p, _)| a == atom && *p != positive)
            .map(|&(_, _, w)| w)
            .collect();
        for other in clashes {
            st.apart.push((other, world));
        }
        let froms: Vec<usize> = st
            .universal
            .iter()
            .filter(|(a, p, _)| a == atom && *p != positive)
            .map(|&(_, _, w)| w)
            .collect();
        st.ground.push((atom.to_string(), positive, world));
        for from in froms {
            st.ordering.add(world, from, true);
        }
        st.recheck();
    }

    fn universal_literal(
        &mut self,
        st: &mut State,
        atom: &str,
        positive: bool,
        from: usize,
        letter: &str,
    ) {
        if st
            .universal
            .iter()
            .any(|(a, p, w)| a == atom && *p == positive && *w == from)
        {
            return;
        }
        let lit = LabeledLiteral::new(positive, atom, st.label_from(from, letter));
        st.literals.push(lit.clone());
        self.push_node(st, NodeContent::Literal(lit));
        if st
            .universal
            .iter()
            .any(|(a, p, _)| a == atom && *p != positive)
        {
            st.closed = true;
        }
        let grounds: Vec<usize> = st
            .ground
            .iter()
            .filter(|(a, p, _)| a == atom && *p != positive)
            .map(|&(_, _, w)| w)
            .collect();
        st.universal.push((atom.to_string(), positive, from));
        for world in grounds {
            st.ordering.add(world, from, true);
        }
        st.recheck();
    }

    fn insert(&mut self, st: &mut State, id: usize, world: usize) {
        if st.closed || !st.seen.insert((id, Place::At(world))) {
            return;
        }
        match self.arena.nodes[id].kind.clone() {
            Kind::Lit { atom, positive } => self.ground_literal(st, &atom, positive, world),
            Kind::And(a, b) => {
                self.insert(st, a, world);
                self.insert(st, b, world);
            }
            Kind::Or(..) => st.beta.push_back((id, world)),
            Kind::Eventually(body) => {
                let target = match st.occurrence_world.get(&id) {
                    Some(&w) => w,
                    None => {
                        let mut path = st.worlds[world].clone();
                        path.push(letter(&NAMED, self.named));
                        self.named += 1;
                        st.worlds.push(path);
                        let w = st.ordering.add_world();
                        st.occurrence_world.insert(id, w);
                        w
                    }
                };
                if target != world {
                    st.order(world, target, false);
                }
                self.insert(st, body, target);
            }
            Kind::Always(body) => {
                let name = letter(&UNIVERSAL, self.universals);
                self.universals += 1;
                self.insert_from(st, body, world, &name);
            }
        }
    }

    fn insert_from(&mut self, st: &mut State, id: usize, from: usize, name: &str) {
        if st.closed || !st.seen.insert((id, Place::From(from))) {
            return;
        }
        match self.arena.nodes[id].kind.clone() {
            Kind::Lit { atom, positive } => self.universal_literal(st, &atom, positive, from, name),
            Kind::And(a, b) => {
                self.insert_from(st, a, from, name);
                self.insert_from(st, b, from, name);
            }
            Kind::Always(body) => self.insert_from(st, body, from, name),
            Kind::Or(..) | Kind::Eventually(_) => st.pending.push(Pending { node: id, from }),
        }
    }

    fn formula_node(&mut self, st: &mut State, id: usize, world: usize) {
        let content = NodeContent::Formula {
            label: st.label_at(world),
            formula: self.arena.nodes[id].display.clone(),
        };
        self.push_node(st, content);
    }

    fn open_head(&mut self, st: &mut State, id: usize, world: usize) {
        if self.arena.collapses_to_literal(id) {
            let tip = st.tip;
            self.insert(st, id, world);
            if st.tip == tip {
                self.formula_node(st, id, world);
            }
        } else {
            self.formula_node(st, id, world);
            self.insert(st, id, world);
        }
    }

    fn finish(&mut self, st: State, status: BranchStatus) {
        self.nodes[st.tip].leaf = Some(status);
        self.branches.push(Branch {
            literals: st.literals,
            order: st.facts,
            status,
            leaf: st.tip,
        });
    }

    fn expand(&mut self, mut st: State) {
        loop {
            if st.closed {
                return self.finish(st, BranchStatus::Closed);
            }
            if let Some((id, world)) = st.beta.pop_front() {
                let Kind::Or(a, b) = self.arena.nodes[id].kind else {
                    unreachable!("only disjunctions are queued")
                };
                if st.seen.contains(&(a, Place::At(world)))
                    || st.seen.contains(&(b, Place::At(world)))
                {
                    continue;
                }
                for side in [a, b] {
                    let mut child = st.clone();
                    self.open_head(&mut child, side, world);
                    self.expand(child);
                }
                return;
            }
            if let Some((p, world)) = st.next_instance() {
                st.instantiated.insert((p, world));
                let Pending { node, from } = st.pending[p].clone();
                if st.seen.contains(&(node, Place::At(world)))
                    || st.ordering.entails_lt(world, from)
                {
                    continue;
                }
                if world == from || st.ordering.entails_le(from, world) {
                    self.formula_node(&mut st, node, world);
                    self.insert(&mut st, node, world);
                    continue;
                }
                let mut before = st.clone();
                let fact = OrderFact {
                    earlier: before.label_at(world),
                    later: before.label_at(from),
                    strict: true,
                };
                before.facts.push(fact.clone());
                self.push_node(&mut before, NodeContent::Order(fact));
                before.order(world, from, true);
                self.expand(before);

                let fact = OrderFact {
                    earlier: st.label_at(from),
                    later: st.label_at(world),
                    strict: false,
                };
                st.facts.push(fact.clone());
                self.push_node(&mut st, NodeContent::Order(fact));
                st.order(from, world, false);
                self.formula_node(&mut st, node, world);
                self.insert(&mut st, node, world);
                continue;
            }
            return self.finish(st, BranchStatus::Open);
        }
    }
}

/// Builds the finished truth tree of `f`.
///
/// Construction is deterministic: equal formulas give identical trees,
/// including the generated label names.
pub fn build_tree(f: &Formula) -> TruthTree {
    let mut arena = Arena::default();
    let root = arena.lower(f, true);
    let mut builder = Builder {
        arena,
        nodes: vec![TreeNode {
            content: NodeContent::Root(f.clone()),
            children: Vec::new(),
            leaf: None,
        }],
        branches: Vec::new(),
        named: 0,
        universals: 0,
    };
    let mut ordering = Ordering::default();
    ordering.add_world();
    let mut st = State {
        worlds: vec![Vec::new()],
        ordering,
        occurrence_world: BTreeMap::new(),
        ground: Vec::new(),
        universal: Vec::new(),
        apart: Vec::new(),
        literals: Vec::new(),
        facts: Vec::new(),
        seen: BTreeSet::new(),
        beta: VecDeque::new(),
        pending: Vec::new(),
        instantiated: BTreeSet::new(),
        closed: false,
        tip: 0,
        hide_root_literal: f.is_literal(),
    };
    builder.insert(&mut st, root, 0);
    builder.expand(st);
    TruthTree {
        root: f.clone(),
        nodes: builder.nodes,
        branches: builder.branches,
    }
}
