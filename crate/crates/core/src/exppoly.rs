//! Exact arithmetic on exp-poly functions: finite sums `Σ a·n^k·cⁿ` with
//! rational coefficients `a`, nonnegative integer powers `k`, and positive
//! rational bases `c`.
//!
//! The class is closed under addition and subtraction, admits exact
//! pointwise evaluation, and the sign of a nonzero member is eventually the
//! sign of its leading term, which makes "eventually ≥" decidable.  That is
//! enough to settle all three conditional semantics exactly.

use num::traits::Pow;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

/// One summand `a·n^k·cⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyTerm {
    pub coeff: BigRational,
    pub power: u32,
    pub base: BigRational,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpPolyError {
    #[error("exp-poly base must be positive, got {0}")]
    NonPositiveBase(String),
}

/// Canonical form: terms sorted by (base desc, power desc), no duplicate
/// (power, base) pair, no zero coefficients.  The first term dominates for
/// large `n`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExpPoly {
    terms: Vec<PolyTerm>,
}

impl ExpPoly {
    pub fn zero() -> ExpPoly {
        ExpPoly::default()
    }

    pub fn constant(a: BigRational) -> ExpPoly {
        ExpPoly::normalize(vec![PolyTerm {
            coeff: a,
            power: 0,
            base: BigRational::one(),
        }])
    }

    pub fn constant_int(a: i64) -> ExpPoly {
        ExpPoly::constant(BigRational::from(BigInt::from(a)))
    }

    /// A single term `a·n^k·cⁿ`; `c` must be positive.
    pub fn term(a: BigRational, k: u32, c: BigRational) -> Result<ExpPoly, ExpPolyError> {
        if !c.is_positive() {
            return Err(ExpPolyError::NonPositiveBase(c.to_string()));
        }
        Ok(ExpPoly::normalize(vec![PolyTerm {
            coeff: a,
            power: k,
            base: c,
        }]))
    }

    pub fn from_terms(terms: Vec<PolyTerm>) -> Result<ExpPoly, ExpPolyError> {
        for t in &terms {
            if !t.base.is_positive() {
                return Err(ExpPolyError::NonPositiveBase(t.base.to_string()));
            }
        }
        Ok(ExpPoly::normalize(terms))
    }

    fn normalize(mut terms: Vec<PolyTerm>) -> ExpPoly {
        terms.sort_by(|x, y| {
            y.base
                .cmp(&x.base)
                .then_with(|| y.power.cmp(&x.power))
        });
        let mut out: Vec<PolyTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.base == t.base && last.power == t.power {
                    last.coeff += t.coeff;
                    continue;
                }
            }
            out.push(t);
        }
        out.retain(|t| !t.coeff.is_zero());
        ExpPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[PolyTerm] {
        &self.terms
    }

    /// The dominant term, if any.
    pub fn leading(&self) -> Option<&PolyTerm> {
        self.terms.first()
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ExpPoly::normalize(terms)
    }

    pub fn sub(&self, other: &ExpPoly) -> ExpPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExpPoly {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| PolyTerm {
                    coeff: -t.coeff.clone(),
                    power: t.power,
                    base: t.base.clone(),
                })
                .collect(),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> ExpPoly {
        if factor.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| PolyTerm {
                    coeff: &t.coeff * factor,
                    power: t.power,
                    base: t.base.clone(),
                })
                .collect(),
        }
    }

    /// Multiply by `n^j`.
    pub fn shift_power(&self, j: u32) -> ExpPoly {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| PolyTerm {
                    coeff: t.coeff.clone(),
                    power: t.power + j,
                    base: t.base.clone(),
                })
                .collect(),
        }
    }

    /// Exact value at `n`.
    pub fn eval(&self, n: u32) -> BigRational {
        let nn = BigInt::from(n);
        let mut acc = BigRational::zero();
        for t in &self.terms {
            let n_pow: BigInt = Pow::pow(&nn, t.power);
            // base is reduced, so numer^n / denom^n is already reduced
            let base_pow = BigRational::new_raw(
                Pow::pow(t.base.numer(), n),
                Pow::pow(t.base.denom(), n),
            );
            acc += &t.coeff * BigRational::from(n_pow) * base_pow;
        }
        acc
    }
}

/// Outcome of an eventual comparison: how `a` relates to `b` for all
/// `n ≥ witness_n0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventualOrder {
    /// `a(n) ≥ b(n)` from the witness on (strictly greater in the limit).
    GreaterEq,
    /// `a(n) < b(n)` from the witness on.
    Less,
    /// `a = b` identically.
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualComparison {
    pub verdict: EventualOrder,
    pub witness_n0: u64,
}

// Evaluation range guard for witness refinement; thresholds beyond this are
// returned unrefined.
const SCAN_CAP: u64 = 4096;
const MAX_THRESHOLD: u64 = 1 << 24;

/// Decide the eventual order of `a` versus `b` and produce a concrete
/// threshold from which it holds.  The threshold is sound (the relation
/// provably holds for every `n` beyond it) and is refined downward by exact
/// evaluation to the smallest point of the final sign run when that run is
/// short enough to scan.
pub fn compare_eventually(a: &ExpPoly, b: &ExpPoly) -> EventualComparison {
    let d = a.sub(b);
    let Some(lead) = d.leading() else {
        return EventualComparison {
            verdict: EventualOrder::Equal,
            witness_n0: 0,
        };
    };
    let verdict = if lead.coeff.is_positive() {
        EventualOrder::GreaterEq
    } else {
        EventualOrder::Less
    };
    let holds = |n: u64| {
        let v = d.eval(n as u32);
        match verdict {
            EventualOrder::GreaterEq => !v.is_negative(),
            EventualOrder::Less => v.is_negative(),
            EventualOrder::Equal => unreachable!(),
        }
    };
    let sound = sound_sign_threshold(&d);
    let mut n0 = sound;
    let mut budget = SCAN_CAP;
    while n0 > 0 && budget > 0 && holds(n0 - 1) {
        n0 -= 1;
        budget -= 1;
    }
    debug_assert!(holds(n0) && holds(n0 + 1));
    EventualComparison {
        verdict,
        witness_n0: n0,
    }
}

/// A threshold beyond which the sign of the (nonzero) exp-poly equals the
/// sign of its leading coefficient: each subordinate term is bounded to at
/// most `|a₁|/(2m)` of the leading monomial, and those bounds persist
/// because the term ratios are decreasing from the returned point on.
fn sound_sign_threshold(d: &ExpPoly) -> u64 {
    let lead = d.leading().expect("nonzero exp-poly");
    let rest = &d.terms()[1..];
    if rest.is_empty() {
        return 1;
    }
    let m = BigInt::from(rest.len() as u64);
    let mut worst = 1u64;
    for t in rest {
        let bound = lead.coeff.abs() / (BigRational::from(m.clone() * 2) * t.coeff.abs());
        worst = worst.max(subordinate_threshold(t, lead, &bound));
    }
    worst
}

// smallest doubling point n (with the ratio known to be decreasing from it)
// where (c_t/c_lead)^n * n^(k_t - k_lead) <= bound
fn subordinate_threshold(t: &PolyTerm, lead: &PolyTerm, bound: &BigRational) -> u64 {
    let base_ratio = &t.base / &lead.base;
    debug_assert!(base_ratio < BigRational::one() || t.power < lead.power);
    let ratio_at = |n: u64| -> BigRational {
        let n32 = u32::try_from(n).expect("comparison threshold exceeds supported range");
        let pow = |x: &BigInt| Pow::pow(x, n32);
        let r = BigRational::new_raw(pow(base_ratio.numer()), pow(base_ratio.denom()));
        let np = BigRational::from(Pow::pow(&BigInt::from(n32), t.power));
        let lp = BigRational::from(Pow::pow(&BigInt::from(n32), lead.power));
        r * np / lp
    };
    // point from which ratio(n+1)/ratio(n) = (c_t/c_lead)·((n+1)/n)^(k_t-k_lead) <= 1
    let mut start = 1u64;
    if t.power > lead.power {
        let dk = t.power - lead.power;
        let inv = &lead.base / &t.base; // > 1 here
        let growth_ok = |n: u64| {
            let n32 = u32::try_from(n).expect("comparison threshold exceeds supported range");
            let step = BigRational::new(BigInt::from(n32) + 1, BigInt::from(n32));
            Pow::pow(&step, dk) <= inv
        };
        while !growth_ok(start) {
            start = start
                .checked_mul(2)
                .filter(|&n| n <= MAX_THRESHOLD)
                .expect("comparison threshold exceeds supported range");
        }
    }
    let mut n = start;
    while ratio_at(n) > *bound {
        n = n
            .checked_mul(2)
            .filter(|&v| v <= MAX_THRESHOLD)
            .expect("comparison threshold exceeds supported range");
    }
    n
}

/// Lexicographic order on leading (base, power): how fast the functions grow.
pub fn growth_order(a: &ExpPoly, b: &ExpPoly) -> Ordering {
    match (a.leading(), b.leading()) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.base.cmp(&y.base).then_with(|| x.power.cmp(&y.power)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// n - 1
    fn n_minus_one() -> ExpPoly {
        ExpPoly::term(rat(1, 1), 1, rat(1, 1))
            .unwrap()
            .add(&ExpPoly::constant_int(-1))
    }

    #[test]
    fn normalization_merges_and_drops_zeros() {
        let a = ExpPoly::term(rat(1, 2), 1, rat(2, 1)).unwrap();
        let b = ExpPoly::term(rat(-1, 2), 1, rat(2, 1)).unwrap();
        assert!(a.add(&b).is_zero());
        let c = a.add(&a);
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.terms()[0].coeff, rat(1, 1));
    }

    #[test]
    fn leading_term_orders_by_base_then_power() {
        let p = ExpPoly::from_terms(vec![
            PolyTerm { coeff: rat(1, 1), power: 100, base: rat(1, 1) },
            PolyTerm { coeff: rat(1, 1), power: 0, base: rat(2, 1) },
        ])
        .unwrap();
        let lead = p.leading().unwrap();
        assert_eq!(lead.base, rat(2, 1));
        assert_eq!(lead.power, 0);
    }

    #[test]
    fn eval_is_exact() {
        // (n - 1) at n = 4 is 3; 2^n - 1 at n = 10 is 1023
        assert_eq!(n_minus_one().eval(4), rat(3, 1));
        let two_n = ExpPoly::term(rat(1, 1), 0, rat(2, 1)).unwrap();
        assert_eq!(two_n.sub(&ExpPoly::constant_int(1)).eval(10), rat(1023, 1));
        // (1/2)^n at n = 3
        let half_n = ExpPoly::term(rat(1, 1), 0, rat(1, 2)).unwrap();
        assert_eq!(half_n.eval(3), rat(1, 8));
    }

    #[test]
    fn witness_for_linear_gap_is_minimal() {
        // a = n - 1 versus b = (7/10)·n: a - b = (3/10)n - 1 >= 0 iff n >= 4
        let b = ExpPoly::term(rat(7, 10), 1, rat(1, 1)).unwrap();
        let cmp = compare_eventually(&n_minus_one(), &b);
        assert_eq!(cmp.verdict, EventualOrder::GreaterEq);
        assert_eq!(cmp.witness_n0, 4);
    }

    #[test]
    fn exponential_beats_polynomial() {
        let two_n = ExpPoly::term(rat(1, 1), 0, rat(2, 1)).unwrap();
        let n100 = ExpPoly::term(rat(1, 1), 100, rat(1, 1)).unwrap();
        let cmp = compare_eventually(&two_n, &n100);
        assert_eq!(cmp.verdict, EventualOrder::GreaterEq);
        // confirmed at the witness and just below it
        let d = two_n.sub(&n100);
        assert!(!d.eval(cmp.witness_n0 as u32).is_negative());
        assert!(d.eval(cmp.witness_n0 as u32 - 1).is_negative());
    }

    #[test]
    fn equal_polys_compare_equal_at_zero() {
        let p = n_minus_one();
        let cmp = compare_eventually(&p, &p.clone());
        assert_eq!(cmp.verdict, EventualOrder::Equal);
        assert_eq!(cmp.witness_n0, 0);
    }

    #[test]
    fn less_direction() {
        let one = ExpPoly::constant_int(1);
        let n = ExpPoly::term(rat(1, 1), 1, rat(1, 1)).unwrap();
        let cmp = compare_eventually(&one, &n);
        assert_eq!(cmp.verdict, EventualOrder::Less);
        // 1 < n first holds at n = 2 and forever after
        assert_eq!(cmp.witness_n0, 2);
    }

    #[test]
    fn decaying_base_threshold() {
        // n^3·(1/2)^n versus 1: eventually less despite early dominance
        let spike = ExpPoly::term(rat(1, 1), 3, rat(1, 2)).unwrap();
        let one = ExpPoly::constant_int(1);
        let cmp = compare_eventually(&spike, &one);
        assert_eq!(cmp.verdict, EventualOrder::Less);
        let d = spike.sub(&one);
        assert!(d.eval(cmp.witness_n0 as u32).is_negative());
        assert!(d.eval(cmp.witness_n0 as u32 + 1).is_negative());
        // the run really starts there: n = 9 gives 729/512 > 1
        assert!(!d.eval(cmp.witness_n0 as u32 - 1).is_negative());
    }

    #[test]
    fn shift_and_scale() {
        let p = n_minus_one();
        assert_eq!(p.shift_power(1).eval(4), rat(12, 1));
        assert_eq!(p.scale(&rat(1, 3)).eval(4), rat(1, 1));
    }
}
