use super::Formula;

/// Negation normal form: `->` and `<->` are eliminated and negations are
/// pushed down to atoms using De Morgan and the `F`/`G` dualities.
///
/// `a <-> b` becomes `(a & b) | (!a & !b)`; its negation
/// `(a & !b) | (!a & b)`.
pub fn nnf(f: &Formula) -> Formula {
    pos(f)
}

fn pos(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(inner) => neg(inner),
        Formula::And(l, r) => Formula::and(pos(l), pos(r)),
        Formula::Or(l, r) => Formula::or(pos(l), pos(r)),
        Formula::Implies(l, r) => Formula::or(neg(l), pos(r)),
        Formula::Iff(l, r) => {
            Formula::or(Formula::and(pos(l), pos(r)), Formula::and(neg(l), neg(r)))
        }
        Formula::Eventually(inner) => Formula::eventually(pos(inner)),
        Formula::Always(inner) => Formula::always(pos(inner)),
    }
}

fn neg(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => Formula::not(f.clone()),
        Formula::Not(inner) => pos(inner),
        Formula::And(l, r) => Formula::or(neg(l), neg(r)),
        Formula::Or(l, r) => Formula::and(neg(l), neg(r)),
        Formula::Implies(l, r) => Formula::and(pos(l), neg(r)),
        Formula::Iff(l, r) => {
            Formula::or(Formula::and(pos(l), neg(r)), Formula::and(neg(l), pos(r)))
        }
        Formula::Eventually(inner) => Formula::always(neg(inner)),
        Formula::Always(inner) => Formula::eventually(neg(inner)),
    }
}
