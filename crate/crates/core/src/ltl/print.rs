use std::fmt::{self, Write};

use super::Formula;

// Binding strength, loosest first.
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        _ => 5,
    }
}

fn operand<W: Write>(w: &mut W, f: &Formula, parens: bool) -> fmt::Result {
    if parens {
        w.write_char('(')?;
        write_formula(w, f)?;
        w.write_char(')')
    } else {
        write_formula(w, f)
    }
}

/// Minimal-parenthesis printer; output reparses to an equal tree.
pub(super) fn write_formula<W: Write>(w: &mut W, f: &Formula) -> fmt::Result {
    let p = precedence(f);
    match f {
        Formula::Atom(name) => w.write_str(name),
        Formula::Not(inner) => {
            w.write_char('!')?;
            operand(w, inner, precedence(inner) < 5)
        }
        Formula::Eventually(inner) => {
            w.write_str("F ")?;
            operand(w, inner, precedence(inner) < 5)
        }
        Formula::Always(inner) => {
            w.write_str("G ")?;
            operand(w, inner, precedence(inner) < 5)
        }
        Formula::And(l, r) | Formula::Or(l, r) => {
            operand(w, l, precedence(l) < p)?;
            w.write_str(if matches!(f, Formula::And(..)) {
                " & "
            } else {
                " | "
            })?;
            operand(w, r, precedence(r) <= p)
        }
        Formula::Implies(l, r) => {
            operand(w, l, precedence(l) <= p)?;
            w.write_str(" -> ")?;
            operand(w, r, precedence(r) < p)
        }
        Formula::Iff(l, r) => {
            operand(w, l, precedence(l) <= p)?;
            w.write_str(" <-> ")?;
            operand(w, r, precedence(r) <= p)
        }
    }
}
