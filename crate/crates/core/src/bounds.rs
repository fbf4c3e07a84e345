//! The Ackermann function and the realization bound `C(r, m, n)`.
//!
//! `C(0, m, 1) = 0`, `C(r, m, 1) = A(m - 1, C(r - 1, m, 1))` and
//! `C(r, m, n) = C(C(r, m, n - 1), m, 1)`. A kernel of length `r` in `n`
//! coordinates that prolongs to length `C(r, m, n)` has a regular
//! realization.
//!
//! All values are exact. Every result is checked against a [`BitBudget`];
//! values that would not fit are reported as [`Error::Resource`], never
//! truncated.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type BigNat = BigUint;

/// Default cap on the size of any intermediate value, in bits.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 20;

/// Environment variable overriding [`DEFAULT_BIT_BUDGET`].
pub const BIT_BUDGET_ENV: &str = "DCFAX_BIT_BUDGET";

/// Above this many iterations the inner `C(·, m, 1)` recursion switches to
/// composing the affine step `c ↦ A(m - 1, c)` in closed form (m ≤ 3 only).
const NAIVE_ITERATION_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitBudget {
    max_bits: u64,
}

impl Default for BitBudget {
    fn default() -> Self {
        BitBudget {
            max_bits: DEFAULT_BIT_BUDGET,
        }
    }
}

impl BitBudget {
    pub fn new(max_bits: u64) -> Self {
        BitBudget { max_bits }
    }

    /// Reads [`BIT_BUDGET_ENV`], falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BIT_BUDGET_ENV) {
            Ok(s) => s.trim().parse::<u64>().map(BitBudget::new).map_err(|_| {
                Error::InvalidDimension(format!("{BIT_BUDGET_ENV}={s:?} is not a bit count"))
            }),
            Err(_) => Ok(BitBudget::default()),
        }
    }

    pub fn max_bits(&self) -> u64 {
        self.max_bits
    }

    fn admit_bits(&self, bits: u64, what: impl FnOnce() -> String) -> Result<()> {
        if bits > self.max_bits {
            Err(Error::Resource(format!(
                "{} needs {} bits, budget is {}",
                what(),
                bits,
                self.max_bits
            )))
        } else {
            Ok(())
        }
    }

    fn admit(&self, value: BigUint, what: impl FnOnce() -> String) -> Result<BigUint> {
        self.admit_bits(value.bits(), what)?;
        Ok(value)
    }
}

/// `A(x, y)` for machine-sized arguments.
pub fn ackermann(x: u64, y: u64, budget: BitBudget) -> Result<BigNat> {
    ackermann_big(x, &BigUint::from(y), budget)
}

/// `A(x, y)` with an arbitrary-precision second argument.
///
/// Rows `x ≤ 3` use their closed forms; higher rows unfold the recursion
/// with a memo table that lives for the duration of the call.
pub fn ackermann_big(x: u64, y: &BigUint, budget: BitBudget) -> Result<BigNat> {
    AckermannMemo::new(budget).eval(x, y)
}

struct AckermannMemo {
    budget: BitBudget,
    cache: HashMap<(u64, BigUint), BigUint>,
}

impl AckermannMemo {
    fn new(budget: BitBudget) -> Self {
        AckermannMemo {
            budget,
            cache: HashMap::new(),
        }
    }

    fn eval(&mut self, x: u64, y: &BigUint) -> Result<BigUint> {
        if x <= 3 {
            return closed_row(x, y, self.budget);
        }
        if let Some(v) = self.cache.get(&(x, y.clone())) {
            return Ok(v.clone());
        }
        // A(x, 0) = A(x-1, 1); A(x, j) = A(x-1, A(x, j-1)). Each step grows
        // the value at least exponentially, so the budget stops the loop
        // after a handful of iterations even for huge `y`.
        let mut value = self.eval(x - 1, &BigUint::one())?;
        self.cache.insert((x, BigUint::zero()), value.clone());
        let mut j = BigUint::zero();
        while &j < y {
            j += 1u32;
            value = self.eval(x - 1, &value)?;
            self.cache.insert((x, j.clone()), value.clone());
        }
        Ok(value)
    }
}

fn closed_row(x: u64, y: &BigUint, budget: BitBudget) -> Result<BigUint> {
    let what = || format!("A({x}, {y})");
    match x {
        0 => budget.admit(y + 1u32, what),
        1 => budget.admit(y + 2u32, what),
        2 => budget.admit(y * 2u32 + 3u32, what),
        3 => {
            // 2^(y+3) - 3 has exactly y + 3 bits
            let exp = y
                .to_u64()
                .and_then(|e| e.checked_add(3))
                .ok_or_else(|| Error::Resource(format!("{} exponent does not fit", what())))?;
            budget.admit_bits(exp, what)?;
            Ok((BigUint::one() << exp) - 3u32)
        }
        _ => unreachable!("closed forms cover rows 0..=3"),
    }
}

/// The realization bound `C(r, m, n)`.
pub fn bound_c(r: u64, m: u64, n: u64, budget: BitBudget) -> Result<BigNat> {
    if m == 0 {
        return Err(Error::InvalidDimension("m must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    let mut value = BigUint::from(r);
    for _ in 0..n {
        value = bound_c_single(&value, m, budget)?;
    }
    Ok(value)
}

/// `C(r, m, 1)`: `r`-fold iteration of `c ↦ A(m - 1, c)` starting at 0.
fn bound_c_single(r: &BigUint, m: u64, budget: BitBudget) -> Result<BigUint> {
    let what = || format!("C({r}, {m}, 1)");
    let iterations = r.to_u64().filter(|&k| k <= NAIVE_ITERATION_LIMIT);
    match iterations {
        Some(k) => {
            let mut memo = AckermannMemo::new(budget);
            let mut value = BigUint::zero();
            for _ in 0..k {
                value = memo.eval(m - 1, &value)?;
            }
            Ok(value)
        }
        None => match m {
            // A(0, c) = c + 1 and A(1, c) = c + 2: r-fold sum of the step
            1 => budget.admit(r.clone(), what),
            2 => budget.admit(r * 2u32, what),
            // A(2, c) = 2c + 3, iterated r times from 0 gives 3 (2^r - 1)
            3 => {
                let exp = r
                    .to_u64()
                    .ok_or_else(|| Error::Resource(format!("{} exponent does not fit", what())))?;
                budget.admit_bits(exp.saturating_add(2), what)?;
                Ok(((BigUint::one() << exp) - 1u32) * 3u32)
            }
            // A(m-1, c) ≥ 2^c here, so r iterations from 0 blow any budget
            // of fewer than r bits.
            _ => Err(Error::Resource(format!(
                "{} exceeds the {}-bit budget",
                what(),
                budget.max_bits()
            ))),
        },
    }
}

/// The known closed forms of `C(r, m, n)`, when one applies:
/// `r` for m = 1, `2^n r` for m = 2 and `3 (2^r - 1)` for m = 3, n = 1.
pub fn closed_form(r: u64, m: u64, n: u64) -> Option<(&'static str, BigNat)> {
    match (m, n) {
        (1, _) => Some(("r", BigUint::from(r))),
        (2, _) => Some(("2^n*r", BigUint::from(r) << n)),
        (3, 1) => Some(("3*(2^r-1)", ((BigUint::one() << r) - 1u32) * 3u32)),
        _ => None,
    }
}

/// `binom(n, k)` over arbitrary-precision naturals.
pub fn binomial(n: &BigUint, k: u64) -> BigNat {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// The numeric data `(C, alpha, beta)` of the axiom instance for `(n, m)`:
/// `C = C(1, m, n)`, `alpha = n binom(C + m, m)`, `beta = n binom(C - 1 + m, m)`.
pub fn shape_dimensions(n: u64, m: u64, budget: BitBudget) -> Result<(BigNat, BigNat, BigNat)> {
    let c = bound_c(1, m, n, budget)?;
    let alpha = binomial(&(&c + m), m) * n;
    let beta = binomial(&(&c + m - 1u32), m) * n;
    let alpha = budget.admit(alpha, || format!("alpha({n}, {m})"))?;
    let beta = budget.admit(beta, || format!("beta({n}, {m})"))?;
    Ok((c, alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(x: u64, y: u64) -> BigUint {
        ackermann(x, y, BitBudget::default()).unwrap()
    }

    fn c(r: u64, m: u64, n: u64) -> BigUint {
        bound_c(r, m, n, BitBudget::default()).unwrap()
    }

    #[test]
    fn ackermann_examples() {
        assert_eq!(a(0, 7), BigUint::from(8u32));
        assert_eq!(a(2, 2), BigUint::from(7u32));
        assert_eq!(a(3, 3), BigUint::from(61u32));
        assert_eq!(a(4, 0), BigUint::from(13u32));
        assert_eq!(a(4, 1), BigUint::from(65533u32));
        assert_eq!(a(5, 0), BigUint::from(65533u32));
        assert_eq!(a(4, 2), (BigUint::one() << 65536u32) - 3u32);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(c(5, 1, 3), BigUint::from(5u32));
        assert_eq!(c(3, 2, 2), BigUint::from(12u32));
        assert_eq!(c(2, 3, 1), BigUint::from(9u32));
        assert_eq!(c(1, 4, 1), BigUint::from(5u32));
        assert_eq!(c(0, 3, 2), BigUint::zero());
        assert_eq!(c(3, 4, 1), (BigUint::one() << 256u32) - 3u32);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            ackermann(4, 3, BitBudget::default()),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            bound_c(4, 4, 1, BitBudget::default()),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            ackermann(3, 100, BitBudget::new(64)),
            Err(Error::Resource(_))
        ));
        assert!(ackermann(3, 60, BitBudget::new(64)).is_ok());
    }

    #[test]
    fn zero_dimensions_rejected() {
        assert!(matches!(
            bound_c(1, 0, 1, BitBudget::default()),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            bound_c(1, 1, 0, BitBudget::default()),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn accelerated_iteration_matches_naive() {
        // one step past the naive limit lands on the affine shortcut
        let big = NAIVE_ITERATION_LIMIT + 1;
        assert_eq!(c(big, 1, 1), BigUint::from(big));
        assert_eq!(c(big, 2, 1), BigUint::from(2 * big));
        assert_eq!(c(1, 2, 20), BigUint::from(1u64 << 20));
        let m3 = c(big, 3, 1);
        assert_eq!(m3, closed_form(big, 3, 1).unwrap().1);
    }

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(&BigUint::from(5u32), 3), BigUint::from(10u32));
        assert_eq!(binomial(&BigUint::from(3u32), 5), BigUint::zero());
        assert_eq!(binomial(&BigUint::from(6u32), 0), BigUint::one());
    }

    #[test]
    fn shape_dimension_examples() {
        let b = BitBudget::default();
        let (c, alpha, beta) = shape_dimensions(2, 2, b).unwrap();
        assert_eq!((c, alpha, beta), (4u32.into(), 30u32.into(), 20u32.into()));
        let (c, alpha, beta) = shape_dimensions(1, 1, b).unwrap();
        assert_eq!((c, alpha, beta), (1u32.into(), 2u32.into(), 1u32.into()));
    }
}
