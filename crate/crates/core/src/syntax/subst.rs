//! Substitution of terms for free variables, with the two substitutability
//! checks the proof rules rely on: quantifier capture, and the rigidity
//! restriction that only variables may be substituted into formulas that
//! contain a conditional (terms denote per world, variables do not).

use super::{Formula, Term};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("substituting `{term}` for `{var}` would capture a free variable under `{binder}`")]
    Capture {
        var: String,
        term: String,
        binder: String,
    },
    #[error("`{term}` is not a variable and cannot be substituted into a formula containing `~>`")]
    NotRigid { term: String },
}

fn subst_term(t: &Term, var: &str, repl: &Term) -> Term {
    match t {
        Term::Variable(v) if v == var => repl.clone(),
        Term::Variable(_) | Term::Constant(_) => t.clone(),
        Term::Apply(f, args) => Term::Apply(
            f.clone(),
            args.iter().map(|a| subst_term(a, var, repl)).collect(),
        ),
    }
}

fn subst_formula(
    f: &Formula,
    var: &str,
    repl: &Term,
    repl_vars: &std::collections::BTreeSet<String>,
) -> Result<Formula, SubstError> {
    Ok(match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(p, args) => Formula::Atom(
            p.clone(),
            args.iter().map(|a| subst_term(a, var, repl)).collect(),
        ),
        Formula::Equal(a, b) => {
            Formula::Equal(subst_term(a, var, repl), subst_term(b, var, repl))
        }
        Formula::Not(g) => Formula::not(subst_formula(g, var, repl, repl_vars)?),
        Formula::And(a, b) => Formula::and(
            subst_formula(a, var, repl, repl_vars)?,
            subst_formula(b, var, repl, repl_vars)?,
        ),
        Formula::Or(a, b) => Formula::or(
            subst_formula(a, var, repl, repl_vars)?,
            subst_formula(b, var, repl, repl_vars)?,
        ),
        Formula::Implies(a, b) => Formula::implies(
            subst_formula(a, var, repl, repl_vars)?,
            subst_formula(b, var, repl, repl_vars)?,
        ),
        Formula::Iff(a, b) => Formula::iff(
            subst_formula(a, var, repl, repl_vars)?,
            subst_formula(b, var, repl, repl_vars)?,
        ),
        Formula::Cond(a, b) => Formula::cond(
            subst_formula(a, var, repl, repl_vars)?,
            subst_formula(b, var, repl, repl_vars)?,
        ),
        Formula::CondLevel(a, b, r) => Formula::cond_level(
            subst_formula(a, var, repl, repl_vars)?,
            subst_formula(b, var, repl, repl_vars)?,
            r.clone(),
        ),
        Formula::Forall(y, body) | Formula::Exists(y, body) => {
            let rebuild = |inner: Formula| match f {
                Formula::Forall(..) => Formula::forall(y, inner),
                _ => Formula::exists(y, inner),
            };
            if y == var {
                // the variable is shadowed; nothing free below
                f.clone()
            } else if body.free_vars().contains(var) && repl_vars.contains(y) {
                return Err(SubstError::Capture {
                    var: var.to_owned(),
                    term: repl.to_string(),
                    binder: y.clone(),
                });
            } else {
                rebuild(subst_formula(body, var, repl, repl_vars)?)
            }
        }
    })
}

/// Replace every free occurrence of `var` in `f` by `term`.
///
/// Fails with [`SubstError::Capture`] if a free variable of `term` would be
/// captured by a quantifier of `f`, and with [`SubstError::NotRigid`] if `f`
/// contains a conditional and `term` is not itself a variable.
pub fn substitute(f: &Formula, var: &str, term: &Term) -> Result<Formula, SubstError> {
    if f.contains_conditional() && !matches!(term, Term::Variable(_)) {
        return Err(SubstError::NotRigid {
            term: term.to_string(),
        });
    }
    let repl_vars = term.vars();
    subst_formula(f, var, term, &repl_vars)
}

#[cfg(test)]
mod tests {
    use super::super::{Formula, Term};
    use super::*;

    #[test]
    fn capture_is_rejected() {
        // forall x exists y (x != y), substituting y for x
        let f = Formula::forall(
            "x",
            Formula::exists(
                "y",
                Formula::not_equal(Term::var("x"), Term::var("y")),
            ),
        );
        let Formula::Forall(_, body) = &f else { unreachable!() };
        let r = substitute(body, "x", &Term::var("y"));
        assert!(matches!(r, Err(SubstError::Capture { .. })));
    }

    #[test]
    fn non_variable_into_modal_context_is_rejected() {
        // ~N P(x), substituting the constant c for x
        let f = Formula::not(Formula::almost_surely(Formula::atom(
            "P",
            vec![Term::var("x")],
        )));
        let r = substitute(&f, "x", &Term::constant("c"));
        assert_eq!(
            r,
            Err(SubstError::NotRigid {
                term: "c".to_owned()
            })
        );
        // a variable is fine
        assert!(substitute(&f, "x", &Term::var("z")).is_ok());
    }

    #[test]
    fn first_order_substitution() {
        let f = Formula::atom("P", vec![Term::var("x")]);
        let t = Term::apply("f1", vec![Term::constant("c")]);
        assert_eq!(
            substitute(&f, "x", &t).unwrap(),
            Formula::atom("P", vec![t.clone()])
        );
    }

    #[test]
    fn shadowing_stops_substitution() {
        let f = Formula::and(
            Formula::atom("P", vec![Term::var("x")]),
            Formula::forall("x", Formula::atom("P", vec![Term::var("x")])),
        );
        let out = substitute(&f, "x", &Term::constant("c")).unwrap();
        assert_eq!(
            out,
            Formula::and(
                Formula::atom("P", vec![Term::constant("c")]),
                Formula::forall("x", Formula::atom("P", vec![Term::var("x")])),
            )
        );
    }
}
