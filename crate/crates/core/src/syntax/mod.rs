//! Formula data model: terms, formulas, vocabularies, levels, and the
//! syntactic operations everything else is built on.

pub mod forms;
pub mod parse;
pub mod print;
pub mod subst;

pub use forms::{dist_formula, equality_statements, is_interpretation_independent};
pub use parse::{parse_formula, parse_level, parse_term};
pub use subst::{substitute, SubstError};

use num::{BigRational, One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use thiserror::Error;

/// A finite first-order vocabulary: predicate and function symbols with
/// their arities, and constant symbols.  Names are disjoint across the
/// three classes; functions have arity at least one, predicates may be
/// nullary (propositional letters).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    predicates: BTreeMap<String, usize>,
    functions: BTreeMap<String, usize>,
    constants: BTreeSet<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VocabError {
    #[error("symbol `{0}` declared more than once")]
    DuplicateSymbol(String),
    #[error("function `{0}` must have arity >= 1")]
    NullaryFunction(String),
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<(), VocabError> {
        self.check_fresh(name)?;
        self.predicates.insert(name.to_owned(), arity);
        Ok(())
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), VocabError> {
        if arity == 0 {
            return Err(VocabError::NullaryFunction(name.to_owned()));
        }
        self.check_fresh(name)?;
        self.functions.insert(name.to_owned(), arity);
        Ok(())
    }

    pub fn declare_constant(&mut self, name: &str) -> Result<(), VocabError> {
        self.check_fresh(name)?;
        self.constants.insert(name.to_owned());
        Ok(())
    }

    fn check_fresh(&self, name: &str) -> Result<(), VocabError> {
        if self.predicates.contains_key(name)
            || self.functions.contains_key(name)
            || self.constants.contains(name)
        {
            return Err(VocabError::DuplicateSymbol(name.to_owned()));
        }
        Ok(())
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    pub fn predicates(&self) -> &BTreeMap<String, usize> {
        &self.predicates
    }

    pub fn functions(&self) -> &BTreeMap<String, usize> {
        &self.functions
    }

    pub fn constants(&self) -> &BTreeSet<String> {
        &self.constants
    }

    /// Union of two vocabularies; clashing declarations must agree.
    pub fn merge(&self, other: &Vocabulary) -> Result<Vocabulary, VocabError> {
        let mut out = self.clone();
        for (p, a) in &other.predicates {
            match out.predicate_arity(p) {
                Some(b) if b == *a => {}
                Some(_) => return Err(VocabError::DuplicateSymbol(p.clone())),
                None => out.declare_predicate(p, *a)?,
            }
        }
        for (f, a) in &other.functions {
            match out.function_arity(f) {
                Some(b) if b == *a => {}
                Some(_) => return Err(VocabError::DuplicateSymbol(f.clone())),
                None => out.declare_function(f, *a)?,
            }
        }
        for c in &other.constants {
            if !out.is_constant(c) {
                out.declare_constant(c)?;
            }
        }
        Ok(out)
    }
}

/// First-order terms: variables, constants, and function applications.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Variable(String),
    Constant(String),
    Apply(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Variable(name.to_owned())
    }

    pub fn constant(name: &str) -> Term {
        Term::Constant(name.to_owned())
    }

    pub fn apply(name: &str, args: Vec<Term>) -> Term {
        Term::Apply(name.to_owned(), args)
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Variable(v) => {
                out.insert(v.clone());
            }
            Term::Constant(_) => {}
            Term::Apply(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }
}

/// An exact rational error bound in `[0, 1]`, the `r` of a leveled
/// conditional.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Level(BigRational);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("level {0} is outside [0, 1]")]
pub struct LevelError(String);

impl Level {
    pub fn new(r: BigRational) -> Result<Level, LevelError> {
        if r.is_negative() || r > BigRational::one() {
            return Err(LevelError(r.to_string()));
        }
        Ok(Level(r))
    }

    /// Build from an integer fraction; `den` must be positive.
    pub fn from_ratio(num: i64, den: i64) -> Result<Level, LevelError> {
        Level::new(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Level {
        Level(BigRational::zero())
    }

    pub fn one() -> Level {
        Level(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `min(self + other, 1)`.
    pub fn saturating_add(&self, other: &Level) -> Level {
        let sum = &self.0 + &other.0;
        if sum > BigRational::one() {
            Level::one()
        } else {
            Level(sum)
        }
    }
}

impl Hash for Level {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.numer().hash(state);
        self.0.denom().hash(state);
    }
}

/// Formulas of the full conditional language, including the leveled
/// conditional of the quantitative fragment.  `N φ` is sugar for
/// `Cond(¬φ, false)` and is expanded at parse time.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<Term>),
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    Cond(Box<Formula>, Box<Formula>),
    CondLevel(Box<Formula>, Box<Formula>, Level),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(var.to_owned(), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.to_owned(), Box::new(body))
    }

    pub fn cond(ant: Formula, cons: Formula) -> Formula {
        Formula::Cond(Box::new(ant), Box::new(cons))
    }

    pub fn cond_level(ant: Formula, cons: Formula, level: Level) -> Formula {
        Formula::CondLevel(Box::new(ant), Box::new(cons), level)
    }

    /// `N φ`: almost-surely φ, i.e. `¬φ ~> false`.
    pub fn almost_surely(f: Formula) -> Formula {
        Formula::cond(Formula::not(f), Formula::False)
    }

    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.to_owned(), args)
    }

    pub fn equal(a: Term, b: Term) -> Formula {
        Formula::Equal(a, b)
    }

    pub fn not_equal(a: Term, b: Term) -> Formula {
        Formula::not(Formula::Equal(a, b))
    }

    /// Does any conditional (leveled or not) occur anywhere in the formula?
    pub fn contains_conditional(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Equal(..) => false,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => {
                f.contains_conditional()
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.contains_conditional() || b.contains_conditional(),
            Formula::Cond(..) | Formula::CondLevel(..) => true,
        }
    }

    pub fn contains_quantifier(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Equal(..) => false,
            Formula::Forall(..) | Formula::Exists(..) => true,
            Formula::Not(f) => f.contains_quantifier(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Cond(a, b)
            | Formula::CondLevel(a, b, _) => a.contains_quantifier() || b.contains_quantifier(),
        }
    }

    fn collect_free_vars(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => {
                for t in args {
                    for v in t.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Equal(a, b) => {
                for t in [a, b] {
                    for v in t.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Not(f) => f.collect_free_vars(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Cond(a, b)
            | Formula::CondLevel(a, b, _) => {
                a.collect_free_vars(bound, out);
                b.collect_free_vars(bound, out);
            }
            Formula::Forall(x, f) | Formula::Exists(x, f) => {
                bound.push(x.clone());
                f.collect_free_vars(bound, out);
                bound.pop();
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All variable names occurring in the formula, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn walk(f: &Formula, out: &mut BTreeSet<String>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Atom(_, args) => {
                    for t in args {
                        t.collect_vars(out);
                    }
                }
                Formula::Equal(a, b) => {
                    a.collect_vars(out);
                    b.collect_vars(out);
                }
                Formula::Not(g) => walk(g, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b)
                | Formula::Cond(a, b)
                | Formula::CondLevel(a, b, _) => {
                    walk(a, out);
                    walk(b, out);
                }
                Formula::Forall(x, g) | Formula::Exists(x, g) => {
                    out.insert(x.clone());
                    walk(g, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    /// Classify into the smallest applicable language fragment.
    pub fn classify(&self) -> FormulaClass {
        if !self.contains_conditional() {
            return FormulaClass::FirstOrder;
        }
        let (prefix, core) = self.strip_universal_prefix();
        match core {
            Formula::Cond(a, b)
                if !a.contains_conditional() && !b.contains_conditional() =>
            {
                if prefix.is_empty() && self.is_closed() {
                    FormulaClass::CondClosed
                } else {
                    FormulaClass::CondUniversal
                }
            }
            Formula::CondLevel(a, b, _)
                if !a.contains_conditional() && !b.contains_conditional() =>
            {
                FormulaClass::QuantUniversal
            }
            _ => FormulaClass::Full,
        }
    }

    /// Split `∀x₁…∀xₙ φ` into the prefix variables (outermost first) and the
    /// first non-`∀` subformula.
    pub fn strip_universal_prefix(&self) -> (Vec<&str>, &Formula) {
        let mut vars = Vec::new();
        let mut cur = self;
        while let Formula::Forall(x, body) = cur {
            vars.push(x.as_str());
            cur = body;
        }
        (vars, cur)
    }

    /// Universal closure over the free variables, in sorted name order.
    pub fn universal_closure(&self) -> Formula {
        let mut out = self.clone();
        for v in self.free_vars().into_iter().rev() {
            out = Formula::Forall(v, Box::new(out));
        }
        out
    }
}

/// Language fragments, smallest-first for classification purposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FormulaClass {
    /// Pure first-order: no conditionals at all.
    FirstOrder,
    /// A closed, unquantified conditional between first-order formulas.
    CondClosed,
    /// `∀x₁…∀xₙ (φ ~> ψ)` with first-order φ, ψ; open formulas permitted.
    CondUniversal,
    /// Everything else in the unleveled language (nested or negated
    /// conditionals, boolean combinations of conditionals, ...).
    Full,
    /// `∀x₁…∀xₙ (φ ~>[r] ψ)` with first-order φ, ψ.
    QuantUniversal,
}

/// A first-order theory: a set of closed first-order sentences that every
/// world of a structure is required to satisfy.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    sentences: Vec<Formula>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error("theory sentence `{0}` is not first-order")]
    NotFirstOrder(String),
    #[error("theory sentence `{0}` is not closed")]
    NotClosed(String),
}

impl Theory {
    pub fn empty() -> Theory {
        Theory::default()
    }

    pub fn new(sentences: Vec<Formula>) -> Result<Theory, TheoryError> {
        for s in &sentences {
            if s.classify() != FormulaClass::FirstOrder {
                return Err(TheoryError::NotFirstOrder(s.to_string()));
            }
            if !s.is_closed() {
                return Err(TheoryError::NotClosed(s.to_string()));
            }
        }
        Ok(Theory { sentences })
    }

    pub fn sentences(&self) -> &[Formula] {
        &self.sentences
    }
}

/// A variable name not occurring in any of the given formulas, derived from
/// `base` by appending a counter if needed.
pub fn fresh_variable(base: &str, avoid: &[&Formula]) -> String {
    let used: BTreeSet<String> = avoid.iter().flat_map(|f| f.all_vars()).collect();
    if !used.contains(base) {
        return base.to_owned();
    }
    for i in 0.. {
        let cand = format!("{base}{i}");
        if !used.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

/// Structural equality modulo renaming of the outermost universal prefix.
pub fn prefix_alpha_eq(a: &Formula, b: &Formula) -> bool {
    compare_up_to_prefix(a, b, &|x, y| x == y)
}

/// Like [`prefix_alpha_eq`] but with a custom comparison on the prefix-free
/// cores (used by the quantitative checker to compare levels by bound).
pub fn compare_up_to_prefix(
    a: &Formula,
    b: &Formula,
    core_cmp: &dyn Fn(&Formula, &Formula) -> bool,
) -> bool {
    let (pa, ca) = a.strip_universal_prefix();
    let (pb, cb) = b.strip_universal_prefix();
    if pa.len() != pb.len() {
        return false;
    }
    if pa == pb {
        return core_cmp(ca, cb);
    }
    let n = pa.len();
    let mut used: BTreeSet<String> = a.all_vars();
    used.extend(b.all_vars());
    let fresh: Vec<String> = {
        let mut out = Vec::with_capacity(n);
        let mut i = 0;
        while out.len() < n {
            let cand = format!("_p{i}");
            i += 1;
            if !used.contains(&cand) {
                out.push(cand);
            }
        }
        out
    };
    let rename = |prefix: &[&str], core: &Formula| -> Option<Formula> {
        let mut cur = core.clone();
        // innermost binder first so shadowed occurrences resolve correctly
        for (i, v) in prefix.iter().enumerate().rev() {
            cur = subst::substitute(&cur, v, &Term::Variable(fresh[i].clone())).ok()?;
        }
        Some(cur)
    };
    match (rename(&pa, ca), rename(&pb, cb)) {
        (Some(x), Some(y)) => core_cmp(&x, &y),
        _ => false,
    }
}

/// Symbol usage extracted from formulas: which predicates, functions, and
/// constants occur, with arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolUse {
    pub predicates: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
}

impl SymbolUse {
    pub fn collect<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> SymbolUse {
        let mut out = SymbolUse::default();
        for f in formulas {
            out.add_formula(f);
        }
        out
    }

    fn add_formula(&mut self, f: &Formula) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom(p, args) => {
                self.predicates.insert(p.clone(), args.len());
                for t in args {
                    self.add_term(t);
                }
            }
            Formula::Equal(a, b) => {
                self.add_term(a);
                self.add_term(b);
            }
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => {
                self.add_formula(g)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Cond(a, b)
            | Formula::CondLevel(a, b, _) => {
                self.add_formula(a);
                self.add_formula(b);
            }
        }
    }

    fn add_term(&mut self, t: &Term) {
        match t {
            Term::Variable(_) => {}
            Term::Constant(c) => {
                self.constants.insert(c.clone());
            }
            Term::Apply(f, args) => {
                self.functions.insert(f.clone(), args.len());
                for a in args {
                    self.add_term(a);
                }
            }
        }
    }

    pub fn to_vocabulary(&self) -> Result<Vocabulary, VocabError> {
        let mut v = Vocabulary::new();
        for (p, a) in &self.predicates {
            v.declare_predicate(p, *a)?;
        }
        for (f, a) in &self.functions {
            v.declare_function(f, *a)?;
        }
        for c in &self.constants {
            v.declare_constant(c)?;
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        let mut v = Vocabulary::new();
        v.declare_predicate("P", 1).unwrap();
        v.declare_predicate("Q", 2).unwrap();
        v.declare_constant("c").unwrap();
        v
    }

    #[test]
    fn vocabulary_rejects_clashes() {
        let mut v = vocab();
        assert_eq!(
            v.declare_function("P", 1),
            Err(VocabError::DuplicateSymbol("P".into()))
        );
        assert_eq!(
            v.declare_function("g", 0),
            Err(VocabError::NullaryFunction("g".into()))
        );
    }

    #[test]
    fn level_bounds() {
        assert!(Level::from_ratio(1, 10).is_ok());
        assert!(Level::from_ratio(-1, 10).is_err());
        assert!(Level::from_ratio(11, 10).is_err());
        assert_eq!(Level::from_ratio(2, 4).unwrap(), Level::from_ratio(1, 2).unwrap());
    }

    #[test]
    fn classify_examples() {
        let p = Formula::atom("P", vec![Term::constant("c")]);
        let q = Formula::atom("Q", vec![Term::constant("c"), Term::constant("c")]);
        // P(c) ~> Q(c,c): closed conditional
        let closed = Formula::cond(p.clone(), q.clone());
        assert_eq!(closed.classify(), FormulaClass::CondClosed);
        // forall x (P(x) ~> P(x))
        let px = Formula::atom("P", vec![Term::var("x")]);
        let univ = Formula::forall("x", Formula::cond(px.clone(), px.clone()));
        assert_eq!(univ.classify(), FormulaClass::CondUniversal);
        // negated conditional is Full
        assert_eq!(Formula::not(closed.clone()).classify(), FormulaClass::Full);
        // open unprefixed conditional still counts as universal-fragment
        assert_eq!(
            Formula::cond(px.clone(), px.clone()).classify(),
            FormulaClass::CondUniversal
        );
        assert_eq!(p.classify(), FormulaClass::FirstOrder);
        let lev = Formula::cond_level(p.clone(), q, Level::from_ratio(1, 2).unwrap());
        assert_eq!(lev.classify(), FormulaClass::QuantUniversal);
        // leveled conditional nested under negation is Full
        assert_eq!(Formula::not(lev).classify(), FormulaClass::Full);
        assert_eq!(px.classify(), FormulaClass::FirstOrder);
    }

    #[test]
    fn free_and_bound_vars() {
        let f = Formula::forall(
            "x",
            Formula::exists(
                "y",
                Formula::and(
                    Formula::equal(Term::var("x"), Term::var("y")),
                    Formula::atom("P", vec![Term::var("z")]),
                ),
            ),
        );
        assert_eq!(f.free_vars(), BTreeSet::from(["z".to_owned()]));
        assert_eq!(
            f.all_vars(),
            BTreeSet::from(["x".to_owned(), "y".to_owned(), "z".to_owned()])
        );
        assert!(!f.is_closed());
    }

    #[test]
    fn prefix_alpha_equality() {
        let body = |v: &str| {
            Formula::cond(
                Formula::atom("P", vec![Term::var(v)]),
                Formula::atom("P", vec![Term::var(v)]),
            )
        };
        let a = Formula::forall("x", body("x"));
        let b = Formula::forall("y", body("y"));
        assert!(prefix_alpha_eq(&a, &b));
        let c = Formula::forall("y", body("x"));
        assert!(!prefix_alpha_eq(&a, &c));
        // shadowed prefix variables stay distinct
        let d = Formula::forall("x", Formula::forall("x", body("x")));
        let e = Formula::forall("y", Formula::forall("x", body("x")));
        assert!(prefix_alpha_eq(&d, &e));
    }

    #[test]
    fn theory_members_must_be_closed_fo() {
        let open = Formula::atom("P", vec![Term::var("x")]);
        assert!(matches!(
            Theory::new(vec![open]),
            Err(TheoryError::NotClosed(_))
        ));
        let modal = Formula::cond(Formula::True, Formula::True);
        assert!(matches!(
            Theory::new(vec![modal]),
            Err(TheoryError::NotFirstOrder(_))
        ));
    }

    #[test]
    fn fresh_variable_avoids_occurrences() {
        let f = Formula::forall("z", Formula::atom("P", vec![Term::var("z0")]));
        assert_eq!(fresh_variable("z", &[&f]), "z1");
        assert_eq!(fresh_variable("w", &[&f]), "w");
    }
}
