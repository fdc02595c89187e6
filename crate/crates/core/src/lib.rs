//! Toolkit for first-order conditional logic over finite probability-sequence
//! structures.
//!
//! The crate is organized around five pieces:
//!
//! * [`syntax`] — terms, formulas, vocabularies, a concrete grammar with
//!   parser and printer, substitution with modal rigidity checks, and the
//!   formula constructions used by the sequent rules.
//! * [`exppoly`] — exact arithmetic on finite sums `Σ a·n^k·c^n` and the
//!   eventual-comparison decisions they support.
//! * [`model`] — finite weighted-world structures, exact evaluation of the
//!   limit, super-polynomial, and level semantics, validation, and bounded
//!   countermodel search.
//! * [`oracle`] — a budgeted three-valued decision procedure for the
//!   first-order side conditions of the proof rules.
//! * [`kernel`] and [`compile`] — replay checkers for the qualitative and
//!   quantitative sequent systems and the Hilbert-style axiom system, plus
//!   the compiler that turns a checked qualitative derivation into a
//!   quantitative one for a requested error budget.

pub mod compile;
pub mod exppoly;
pub mod kernel;
pub mod model;
pub mod oracle;
pub mod syntax;
