//! Labeled semantic tableaux (truth trees) for the `F`/`G` fragment.
//!
//! Every literal on a branch carries a [`WorldLabel`]: `1` is the initial
//! state, `1.[a]` a state introduced by an `F` formula and `1.[x]` the
//! universally quantified "every state from here on" introduced by `G`.
//! Formulas are interpreted over paths whose last state repeats forever, so
//! two universal labels always meet in that final state.
//!
//! A branch is closed when no placement of its named states on a single
//! timeline keeps all complementary literals apart. A finished tree with an
//! open branch witnesses satisfiability; a closed tree for `!f` proves `f`
//! valid.

mod build;
mod export;
mod order;

use std::collections::BTreeSet;
use std::fmt;

use crate::ltl::Formula;

pub use build::build_tree;
pub use export::{export_tree, TreeFormat, UnknownFormat};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelKind {
    /// The initial state, printed as `1`.
    Root,
    /// A specific state introduced by `F`.
    Named(String),
    /// Every state from the prefix onwards, introduced by `G`.
    Universal(String),
}

/// Position annotation of a tableau entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldLabel {
    /// Named labels leading to the state this label hangs off.
    pub prefix: Vec<String>,
    pub kind: LabelKind,
}

impl WorldLabel {
    pub fn root() -> Self {
        WorldLabel {
            prefix: Vec::new(),
            kind: LabelKind::Root,
        }
    }

    pub fn named(prefix: &[&str], name: &str) -> Self {
        WorldLabel {
            prefix: prefix.iter().map(|s| s.to_string()).collect(),
            kind: LabelKind::Named(name.to_string()),
        }
    }

    pub fn universal(prefix: &[&str], name: &str) -> Self {
        WorldLabel {
            prefix: prefix.iter().map(|s| s.to_string()).collect(),
            kind: LabelKind::Universal(name.to_string()),
        }
    }

    pub fn is_root(&self) -> bool {
        self.kind == LabelKind::Root
    }

    pub fn is_named(&self) -> bool {
        matches!(self.kind, LabelKind::Named(_))
    }

    pub fn is_universal(&self) -> bool {
        matches!(self.kind, LabelKind::Universal(_))
    }
}

impl fmt::Display for WorldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("1")?;
        for p in &self.prefix {
            write!(f, ".[{p}]")?;
        }
        match &self.kind {
            LabelKind::Root => Ok(()),
            LabelKind::Named(n) | LabelKind::Universal(n) => write!(f, ".[{n}]"),
        }
    }
}

/// A possibly negated atom at a label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledLiteral {
    pub positive: bool,
    pub atom: String,
    pub label: WorldLabel,
}

impl LabeledLiteral {
    pub fn new(positive: bool, atom: &str, label: WorldLabel) -> Self {
        LabeledLiteral {
            positive,
            atom: atom.to_string(),
            label,
        }
    }
}

impl fmt::Display for LabeledLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.label.is_root() {
            write!(f, "{}: ", self.label)?;
        }
        if !self.positive {
            f.write_str("!")?;
        }
        f.write_str(&self.atom)
    }
}

/// `earlier < later` (or `≤` when not strict) on the timeline.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderFact {
    pub earlier: WorldLabel,
    pub later: WorldLabel,
    pub strict: bool,
}

impl fmt::Display for OrderFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.strict { "<" } else { "<=" };
        write!(f, "{} {} {}", self.earlier, op, self.later)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchStatus {
    Open,
    Closed,
}

impl BranchStatus {
    /// `○` for open, `×` for closed.
    pub fn marker(self) -> char {
        match self {
            BranchStatus::Open => '○',
            BranchStatus::Closed => '×',
        }
    }
}

/// One root-to-leaf path of a finished tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub literals: Vec<LabeledLiteral>,
    /// Ordering decisions taken on this branch.
    pub order: Vec<OrderFact>,
    pub status: BranchStatus,
    /// Index of the leaf in [`TruthTree::nodes`].
    pub leaf: usize,
}

impl Branch {
    pub fn literal_set(&self) -> BTreeSet<LabeledLiteral> {
        self.literals.iter().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeContent {
    Root(Formula),
    Literal(LabeledLiteral),
    Formula { label: WorldLabel, formula: Formula },
    Order(OrderFact),
}

impl fmt::Display for NodeContent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeContent::Root(formula) => write!(f, "{formula}"),
            NodeContent::Literal(lit) => write!(f, "{lit}"),
            NodeContent::Formula { label, formula } if label.is_root() => write!(f, "{formula}"),
            NodeContent::Formula { label, formula } => write!(f, "{label}: {formula}"),
            NodeContent::Order(fact) => write!(f, "{fact}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub content: NodeContent,
    pub children: Vec<usize>,
    /// Set on leaves.
    pub leaf: Option<BranchStatus>,
}

/// A finished truth tree. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTree {
    pub root: Formula,
    pub nodes: Vec<TreeNode>,
    pub branches: Vec<Branch>,
}

impl TruthTree {
    pub fn is_open(&self) -> bool {
        self.branches.iter().any(|b| b.status == BranchStatus::Open)
    }

    pub fn is_closed(&self) -> bool {
        !self.is_open()
    }

    pub fn open_branches(&self) -> impl Iterator<Item = &Branch> {
        self.branches
            .iter()
            .filter(|b| b.status == BranchStatus::Open)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Satisfiability {
    Satisfiable,
    Unsatisfiable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    NotValid,
}

pub fn is_satisfiable(f: &Formula) -> Satisfiability {
    if build_tree(f).is_open() {
        Satisfiability::Satisfiable
    } else {
        Satisfiability::Unsatisfiable
    }
}

/// `f` is valid iff the tree for `!f` closes.
pub fn is_valid(f: &Formula) -> Validity {
    if build_tree(&Formula::not(f.clone())).is_closed() {
        Validity::Valid
    } else {
        Validity::NotValid
    }
}

/// For every open branch, the atoms asserted positively at named (`F`
/// introduced) states. Branch indices are 1-based over all leaves, left to
/// right.
pub fn open_consequences(tree: &TruthTree) -> Vec<(usize, BTreeSet<String>)> {
    tree.branches
        .iter()
        .enumerate()
        .filter(|(_, b)| b.status == BranchStatus::Open)
        .map(|(i, b)| {
            let atoms = b
                .literals
                .iter()
                .filter(|l| l.positive && l.label.is_named())
                .map(|l| l.atom.clone())
                .collect();
            (i + 1, atoms)
        })
        .collect()
}
