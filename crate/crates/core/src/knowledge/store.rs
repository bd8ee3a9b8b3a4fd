use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{KnowledgeError, UserId};
use crate::ltl::{parse, Formula};

/// A mined formula for one user, with how often it was observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecTriple {
    pub user: UserId,
    pub formula: Formula,
    pub r: u32,
}

/// Per-user specification store; a (user, formula) pair occurs at most once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecStore {
    users: BTreeMap<UserId, BTreeMap<Formula, u32>>,
}

impl SpecStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Increments r for an existing pair or inserts it with r = 1.
    /// Returns the new r.
    pub fn upsert(&mut self, user: &str, f: Formula) -> u32 {
        let r = self
            .users
            .entry(user.to_string())
            .or_default()
            .entry(f)
            .or_insert(0);
        *r += 1;
        *r
    }

    /// Inserts a triple with an explicit count; the pair must be new.
    pub fn insert(&mut self, user: &str, f: Formula, r: u32) -> Result<(), KnowledgeError> {
        if r == 0 {
            return Err(KnowledgeError::ZeroCount(f.to_string()));
        }
        let entry = self.users.entry(user.to_string()).or_default();
        if entry.contains_key(&f) {
            return Err(KnowledgeError::DuplicateTriple {
                user: user.to_string(),
                formula: f.to_string(),
            });
        }
        entry.insert(f, r);
        Ok(())
    }

    pub fn remove(&mut self, user: &str, f: &Formula) -> Option<u32> {
        let entry = self.users.get_mut(user)?;
        let r = entry.remove(f);
        if entry.is_empty() {
            self.users.remove(user);
        }
        r
    }

    pub fn get(&self, user: &str, f: &Formula) -> Option<u32> {
        self.users.get(user)?.get(f).copied()
    }

    pub fn len(&self) -> usize {
        self.users.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn users(&self) -> impl Iterator<Item = &UserId> {
        self.users.keys()
    }

    /// The user's triples, highest r first, ties by formula text.
    pub fn triples(&self, user: &str) -> Vec<SpecTriple> {
        let mut out: Vec<SpecTriple> = self
            .users
            .get(user)
            .into_iter()
            .flatten()
            .map(|(f, &r)| SpecTriple {
                user: user.to_string(),
                formula: f.clone(),
                r,
            })
            .collect();
        out.sort_by_cached_key(|t| (std::cmp::Reverse(t.r), t.formula.to_string()));
        out
    }

    /// Every triple, grouped by user in id order.
    pub fn all_triples(&self) -> Vec<SpecTriple> {
        self.users.keys().flat_map(|u| self.triples(u)).collect()
    }

    /// Multiplies every r by `factor`.
    pub fn scale(&mut self, factor: u32) {
        for r in self.users.values_mut().flat_map(BTreeMap::values_mut) {
            *r *= factor;
        }
    }

    /// `user TAB formula TAB r` per line, sorted by user, then descending r,
    /// then formula text.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for t in self.all_triples() {
            writeln!(out, "{}\t{}\t{}", t.user, t.formula, t.r).unwrap();
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, KnowledgeError> {
        let mut store = SpecStore::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| KnowledgeError::Tsv {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split('\t').collect();
            let [user, formula, r] = fields[..] else {
                return Err(err(format!(
                    "expected 3 tab-separated fields, found {}",
                    fields.len()
                )));
            };
            let formula = parse(formula).map_err(|e| err(e.to_string()))?;
            let r: u32 = r
                .trim()
                .parse()
                .map_err(|_| err(format!("invalid count `{r}`")))?;
            store
                .insert(user.trim(), formula, r)
                .map_err(|e| err(e.to_string()))?;
        }
        Ok(store)
    }
}
