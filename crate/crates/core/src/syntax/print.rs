//! Canonical text rendering.  Binary connectives are always parenthesized
//! so that `parse_formula(print_formula(f))` reproduces `f` exactly.

use super::{Formula, Level, Term};
use num::One;
use std::fmt;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(v) => write!(f, "{v}"),
            Term::Constant(c) => write!(f, "{c}"),
            Term::Apply(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.value();
        if r.denom().is_one() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(p, args) => {
                if args.is_empty() {
                    write!(f, "{p}")
                } else {
                    write!(f, "{p}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")
                }
            }
            Formula::Equal(a, b) => write!(f, "{a} = {b}"),
            // a != b reads better than ~a = b and parses back identically
            Formula::Not(g) => match g.as_ref() {
                Formula::Equal(a, b) => write!(f, "{a} != {b}"),
                _ => write!(f, "~{g}"),
            },
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} => {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <=> {b})"),
            Formula::Forall(x, g) => write!(f, "forall {x} {g}"),
            Formula::Exists(x, g) => write!(f, "exists {x} {g}"),
            Formula::Cond(a, b) => write!(f, "({a} ~> {b})"),
            Formula::CondLevel(a, b, r) => write!(f, "({a} ~>[{r}] {b})"),
        }
    }
}

/// Canonical rendering of a formula; inverse of `parse_formula` up to
/// structural equality.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}
