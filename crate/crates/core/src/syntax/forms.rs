//! Formula constructions used by the sequent rules: domain-size formulas,
//! complete equality statements, and the interpretation-independence test.

use super::{Formula, Term};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("domain-size formula requires k >= 1")]
    ZeroSize,
    #[error("equality statements require a nonempty list of distinct variables")]
    BadVariables,
}

/// `∃x₁…∃x_k ⋀_{i<j} xᵢ≠xⱼ`: there are at least `k` distinct domain
/// elements.  For `k = 1` the empty conjunction leaves `∃x₁ true`.
pub fn dist_formula(k: usize) -> Result<Formula, FormError> {
    if k == 0 {
        return Err(FormError::ZeroSize);
    }
    let vars: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    let mut conjuncts = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            conjuncts.push(Formula::not_equal(
                Term::Variable(vars[i].clone()),
                Term::Variable(vars[j].clone()),
            ));
        }
    }
    let mut body = conjoin(conjuncts);
    for v in vars.iter().rev() {
        body = Formula::Exists(v.clone(), Box::new(body));
    }
    Ok(body)
}

fn conjoin(mut conjuncts: Vec<Formula>) -> Formula {
    if conjuncts.is_empty() {
        return Formula::True;
    }
    let mut out = conjuncts.remove(0);
    for c in conjuncts {
        out = Formula::and(out, c);
    }
    out
}

/// True iff the formula is first-order and mentions no predicate, function,
/// or constant symbols, so its only atoms are equalities between variables.
pub fn is_interpretation_independent(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False => true,
        Formula::Atom(..) => false,
        Formula::Equal(a, b) => {
            matches!(a, Term::Variable(_)) && matches!(b, Term::Variable(_))
        }
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => {
            is_interpretation_independent(g)
        }
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Iff(a, b) => {
            is_interpretation_independent(a) && is_interpretation_independent(b)
        }
        Formula::Cond(..) | Formula::CondLevel(..) => false,
    }
}

/// All satisfiable complete equality statements over `vars`: one conjunction
/// per partition of the variables into equivalence classes, fixing `=` or
/// `≠` for every pair.  Every valuation satisfies exactly one of them.
///
/// Only transitively consistent pair assignments are produced, so the count
/// is the Bell number of `vars.len()`.
pub fn equality_statements(vars: &[&str]) -> Result<Vec<Formula>, FormError> {
    if vars.is_empty() {
        return Err(FormError::BadVariables);
    }
    for (i, v) in vars.iter().enumerate() {
        if vars[i + 1..].contains(v) {
            return Err(FormError::BadVariables);
        }
    }
    let n = vars.len();
    // enumerate set partitions via restricted growth strings
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        out.push(statement_for_partition(vars, &rgs));
        // advance to the next restricted growth string
        let mut i = n;
        loop {
            if i == 1 {
                return Ok(out);
            }
            i -= 1;
            let max_prev = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prev {
                rgs[i] += 1;
                for r in rgs[i + 1..].iter_mut() {
                    *r = 0;
                }
                break;
            }
        }
    }
}

fn statement_for_partition(vars: &[&str], class: &[usize]) -> Formula {
    let mut conjuncts = Vec::new();
    for i in 0..vars.len() {
        for j in (i + 1)..vars.len() {
            let (a, b) = (Term::var(vars[i]), Term::var(vars[j]));
            conjuncts.push(if class[i] == class[j] {
                Formula::Equal(a, b)
            } else {
                Formula::not_equal(a, b)
            });
        }
    }
    conjoin(conjuncts)
}

#[cfg(test)]
mod tests {
    use super::super::FormulaClass;
    use super::*;

    #[test]
    fn dist_shapes() {
        assert_eq!(dist_formula(0), Err(FormError::ZeroSize));
        assert_eq!(
            dist_formula(1).unwrap(),
            Formula::exists("x1", Formula::True)
        );
        assert_eq!(
            dist_formula(2).unwrap(),
            Formula::exists(
                "x1",
                Formula::exists(
                    "x2",
                    Formula::not_equal(Term::var("x1"), Term::var("x2"))
                )
            )
        );
        // three pairs for k = 3
        let f3 = dist_formula(3).unwrap();
        let mut count = 0;
        let mut stack = vec![&f3];
        while let Some(g) = stack.pop() {
            match g {
                Formula::Not(inner) => {
                    assert!(matches!(inner.as_ref(), Formula::Equal(..)));
                    count += 1;
                }
                Formula::And(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                Formula::Exists(_, b) => stack.push(b),
                other => panic!("unexpected {other:?}"),
            }
        }
        assert_eq!(count, 3);
    }

    #[test]
    fn dist_is_fo_and_interpretation_independent() {
        for k in 1..6 {
            let f = dist_formula(k).unwrap();
            assert_eq!(f.classify(), FormulaClass::FirstOrder);
            assert!(is_interpretation_independent(&f));
        }
    }

    #[test]
    fn interpretation_independence_examples() {
        let vx = Term::var("x");
        let vy = Term::var("y");
        let f = Formula::or(
            Formula::Equal(vx.clone(), vy.clone()),
            Formula::not_equal(vx, vy),
        );
        assert!(is_interpretation_independent(&f));
        // constants disqualify
        let g = Formula::or(
            Formula::Equal(Term::constant("b1"), Term::constant("b2")),
            Formula::Equal(Term::constant("b1"), Term::constant("b3")),
        );
        assert!(!is_interpretation_independent(&g));
        // so do predicate atoms
        assert!(!is_interpretation_independent(&Formula::atom(
            "P",
            vec![Term::var("x")]
        )));
    }

    #[test]
    fn equality_statement_counts_are_bell_numbers() {
        assert_eq!(equality_statements(&["x"]).unwrap(), vec![Formula::True]);
        let two = equality_statements(&["x", "y"]).unwrap();
        assert_eq!(
            two,
            vec![
                Formula::Equal(Term::var("x"), Term::var("y")),
                Formula::not_equal(Term::var("x"), Term::var("y")),
            ]
        );
        assert_eq!(equality_statements(&["x", "y", "z"]).unwrap().len(), 5);
        assert_eq!(equality_statements(&["x", "y", "z", "w"]).unwrap().len(), 15);
        assert!(equality_statements(&[]).is_err());
        assert!(equality_statements(&["x", "x"]).is_err());
    }

    #[test]
    fn bell_3_matches_brute_force_over_pair_assignments() {
        // independently: enumerate all 2^3 assignments of {=, !=} to the
        // pairs of three variables and keep the transitively consistent ones
        let mut consistent = 0;
        for mask in 0..8u32 {
            let xy = mask & 1 != 0;
            let xz = mask & 2 != 0;
            let yz = mask & 4 != 0;
            let ok = !(xy && xz && !yz) && !(xy && yz && !xz) && !(xz && yz && !xy);
            if ok {
                consistent += 1;
            }
        }
        assert_eq!(consistent, 5);
        assert_eq!(equality_statements(&["x", "y", "z"]).unwrap().len(), consistent);
    }

    #[test]
    fn statements_are_interpretation_independent() {
        for f in equality_statements(&["x", "y", "z"]).unwrap() {
            assert!(is_interpretation_independent(&f));
        }
    }
}
