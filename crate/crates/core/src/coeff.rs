//! The coefficient field `K`.
//!
//! Two fixed modes are supported: constants mode (`K = ℚ`, every `δ_k`
//! vanishes) and rational mode (`K = ℚ(t_1, …, t_m)` with `δ_k = ∂/∂t_k`).
//! Elements are stored as a quotient of integer polynomials in the base
//! variables. Fractions are reduced by integer content, monomial content
//! and exact polynomial division when it happens to succeed; there is no
//! multivariate GCD, so equality is always decided by cross-multiplication.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Which derivations `K` carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    /// `K = ℚ` with zero derivations.
    Constants,
    /// `K = ℚ(t_1..t_m)` with `δ_k = ∂/∂t_k`.
    Rational,
}

impl FieldMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FieldMode::Constants => "constants",
            FieldMode::Rational => "rational",
        }
    }
}

impl std::str::FromStr for FieldMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constants" => Ok(FieldMode::Constants),
            "rational" => Ok(FieldMode::Rational),
            other => Err(Error::syntax(0, format!("unknown field mode `{other}`"))),
        }
    }
}

/// Exponent vector over `t_1, t_2, …` with trailing zeros stripped, so that
/// equal monomials have equal keys regardless of `m`.
type BaseMonomial = Vec<u32>;

fn trim(mut e: BaseMonomial) -> BaseMonomial {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn mono_mul(a: &[u32], b: &[u32]) -> BaseMonomial {
    let mut out = vec![0; a.len().max(b.len())];
    for (j, e) in a.iter().enumerate() {
        out[j] += e;
    }
    for (j, e) in b.iter().enumerate() {
        out[j] += e;
    }
    out
}

fn mono_div(a: &[u32], b: &[u32]) -> Option<BaseMonomial> {
    if b.len() > a.len() && b[a.len()..].iter().any(|&e| e > 0) {
        return None;
    }
    let mut out = a.to_vec();
    for (j, e) in b.iter().enumerate() {
        if out[j] < *e {
            return None;
        }
        out[j] -= e;
    }
    Some(trim(out))
}

/// Integer polynomial in the base variables `t_k`. The BTreeMap key order is
/// lexicographic, so the last entry is the lex-leading term.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BasePoly {
    terms: BTreeMap<BaseMonomial, BigInt>,
}

impl BasePoly {
    pub fn zero() -> Self {
        BasePoly::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        BasePoly { terms }
    }

    /// The base variable `t_k` (1-based).
    pub fn var(k: usize) -> Self {
        let mut e = vec![0; k];
        e[k - 1] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        BasePoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest base-variable index mentioned.
    pub fn max_var(&self) -> usize {
        self.terms.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    fn leading_coefficient(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    fn add_term(&mut self, mono: BaseMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn divide_integer(&self, c: &BigInt) -> BasePoly {
        BasePoly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v / c)).collect(),
        }
    }

    fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn min_exponents(&self) -> BaseMonomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Vec::new();
        };
        let mut out = first.clone();
        for k in it {
            out.truncate(k.len());
            for (j, e) in k.iter().enumerate().take(out.len()) {
                out[j] = out[j].min(*e);
            }
        }
        trim(out)
    }

    fn divide_monomial(&self, mono: &[u32]) -> BasePoly {
        BasePoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    (
                        mono_div(k, mono).expect("common monomial factor"),
                        v.clone(),
                    )
                })
                .collect(),
        }
    }

    /// `∂/∂t_k`.
    pub fn derivative(&self, k: usize) -> BasePoly {
        let mut out = BasePoly::zero();
        for (mono, c) in &self.terms {
            let Some(&e) = mono.get(k - 1) else { continue };
            if e == 0 {
                continue;
            }
            let mut d = mono.clone();
            d[k - 1] -= 1;
            out.add_term(trim(d), c * BigInt::from(e));
        }
        out
    }

    /// Exact quotient over ℚ, returned as `(q, l)` with `self = (q / l) * divisor`
    /// and `q` integral, or `None` when the division leaves a remainder.
    fn exact_quotient(&self, divisor: &BasePoly) -> Option<(BasePoly, BigInt)> {
        let (lead_d, lc_d) = divisor.terms.iter().next_back()?;
        let lc_d = BigRational::from_integer(lc_d.clone());
        let mut rem: BTreeMap<BaseMonomial, BigRational> = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), BigRational::from_integer(v.clone())))
            .collect();
        let mut quot: BTreeMap<BaseMonomial, BigRational> = BTreeMap::new();
        while let Some((lead_r, lc_r)) = rem.iter().next_back() {
            let q_mono = mono_div(lead_r, lead_d)?;
            let q_coef = lc_r / &lc_d;
            for (k, v) in &divisor.terms {
                let key = trim(mono_mul(k, &q_mono));
                let delta = &q_coef * BigRational::from_integer(v.clone());
                let entry = rem.entry(key.clone()).or_insert_with(BigRational::zero);
                *entry -= delta;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.insert(q_mono, q_coef);
        }
        let l = quot
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let q = BasePoly {
            terms: quot
                .into_iter()
                .map(|(k, v)| (k, (v * BigRational::from_integer(l.clone())).to_integer()))
                .collect(),
        };
        Some((q, l))
    }
}

impl Add for &BasePoly {
    type Output = BasePoly;

    fn add(self, rhs: &BasePoly) -> BasePoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Neg for &BasePoly {
    type Output = BasePoly;

    fn neg(self) -> BasePoly {
        BasePoly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl Sub for &BasePoly {
    type Output = BasePoly;

    fn sub(self, rhs: &BasePoly) -> BasePoly {
        self + &(-rhs)
    }
}

impl Mul for &BasePoly {
    type Output = BasePoly;

    fn mul(self, rhs: &BasePoly) -> BasePoly {
        let mut out = BasePoly::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                out.add_term(trim(mono_mul(ka, kb)), va * vb);
            }
        }
        out
    }
}

/// Graded order used only for printing base polynomials.
fn base_print_order(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl fmt::Display for BasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| base_print_order(a.0, b.0));
        for (j, (mono, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (j, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = mono
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        format!("t{}", v + 1)
                    } else {
                        format!("t{}^{}", v + 1, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// An element of `K`.
#[derive(Debug, Clone)]
pub struct Coefficient(Repr);

#[derive(Debug, Clone)]
enum Repr {
    /// Element of ℚ.
    Rat(BigRational),
    /// `num / den` with at least one side non-constant and `den`'s
    /// lex-leading coefficient positive.
    Frac(BasePoly, BasePoly),
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient(Repr::Rat(BigRational::zero()))
    }

    pub fn one() -> Self {
        Coefficient(Repr::Rat(BigRational::one()))
    }

    pub fn from_int(v: i64) -> Self {
        Coefficient(Repr::Rat(BigRational::from_integer(v.into())))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Coefficient(Repr::Rat(BigRational::from_integer(v)))
    }

    pub fn from_rational(v: BigRational) -> Self {
        Coefficient(Repr::Rat(v))
    }

    pub fn ratio(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Coefficient(Repr::Rat(BigRational::new(p.into(), q.into()))))
    }

    /// The base variable `t_k` (1-based).
    pub fn base_var(k: usize) -> Self {
        Coefficient(Repr::Frac(
            BasePoly::var(k),
            BasePoly::constant(BigInt::one()),
        ))
    }

    pub fn from_parts(num: BasePoly, den: BasePoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(normalize(num, den))
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rat(q) => q.is_zero(),
            Repr::Frac(n, _) => n.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Rat(q) if q.is_one())
    }

    /// The value as a rational number, when it lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rat(q) => Some(q),
            Repr::Frac(..) => None,
        }
    }

    pub fn numerator(&self) -> BasePoly {
        match &self.0 {
            Repr::Rat(q) => BasePoly::constant(q.numer().clone()),
            Repr::Frac(n, _) => n.clone(),
        }
    }

    pub fn denominator(&self) -> BasePoly {
        match &self.0 {
            Repr::Rat(q) => BasePoly::constant(q.denom().clone()),
            Repr::Frac(_, d) => d.clone(),
        }
    }

    /// Highest base-variable index mentioned.
    pub fn max_base_var(&self) -> usize {
        match &self.0 {
            Repr::Rat(_) => 0,
            Repr::Frac(n, d) => n.max_var().max(d.max_var()),
        }
    }

    /// True when the numerator's lex-leading coefficient is negative.
    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Rat(q) => q.is_negative(),
            Repr::Frac(n, _) => n.leading_coefficient().is_some_and(|c| c.is_negative()),
        }
    }

    pub fn checked_div(&self, rhs: &Coefficient) -> Result<Coefficient> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (&self.0, &rhs.0) {
            (Repr::Rat(a), Repr::Rat(b)) => Ok(Coefficient(Repr::Rat(a / b))),
            _ => Ok(normalize(
                &self.numerator() * &rhs.denominator(),
                &self.denominator() * &rhs.numerator(),
            )),
        }
    }

    pub fn inv(&self) -> Result<Coefficient> {
        Coefficient::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Coefficient {
        let mut acc = Coefficient::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `δ_k` applied to this element.
    pub fn derive_base(&self, k: usize, mode: FieldMode) -> Coefficient {
        if mode == FieldMode::Constants {
            return Coefficient::zero();
        }
        match &self.0 {
            Repr::Rat(_) => Coefficient::zero(),
            Repr::Frac(n, d) => {
                let num = &(&n.derivative(k) * d) - &(n * &d.derivative(k));
                normalize(num, d * d)
            }
        }
    }
}

fn normalize(mut num: BasePoly, mut den: BasePoly) -> Coefficient {
    debug_assert!(!den.is_zero());
    if num.is_zero() {
        return Coefficient::zero();
    }
    if let (Some(a), Some(b)) = (num.as_constant(), den.as_constant()) {
        return Coefficient(Repr::Rat(BigRational::new(a, b)));
    }
    let common = trim(mono_mul_min(&num.min_exponents(), &den.min_exponents()));
    if !common.is_empty() {
        num = num.divide_monomial(&common);
        den = den.divide_monomial(&common);
    }
    if den.as_constant().is_none() {
        if let Some((q, l)) = num.exact_quotient(&den) {
            num = q;
            den = BasePoly::constant(l);
        } else if let Some((q, l)) = den.exact_quotient(&num) {
            num = BasePoly::constant(l);
            den = q;
        }
    }
    let g = num.content().gcd(&den.content());
    if !g.is_one() {
        num = num.divide_integer(&g);
        den = den.divide_integer(&g);
    }
    if den.leading_coefficient().is_some_and(|c| c.is_negative()) {
        num = -&num;
        den = -&den;
    }
    if let (Some(a), Some(b)) = (num.as_constant(), den.as_constant()) {
        return Coefficient(Repr::Rat(BigRational::new(a, b)));
    }
    Coefficient(Repr::Frac(num, den))
}

fn mono_mul_min(a: &[u32], b: &[u32]) -> BaseMonomial {
    a.iter().zip(b).map(|(x, y)| *x.min(y)).collect()
}

impl PartialEq for Coefficient {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Rat(a), Repr::Rat(b)) => a == b,
            _ => {
                &self.numerator() * &other.denominator() == &other.numerator() * &self.denominator()
            }
        }
    }
}

impl Eq for Coefficient {}

impl Add for &Coefficient {
    type Output = Coefficient;

    fn add(self, rhs: &Coefficient) -> Coefficient {
        match (&self.0, &rhs.0) {
            (Repr::Rat(a), Repr::Rat(b)) => Coefficient(Repr::Rat(a + b)),
            _ => {
                let (an, ad, bn, bd) = (
                    self.numerator(),
                    self.denominator(),
                    rhs.numerator(),
                    rhs.denominator(),
                );
                if ad == bd {
                    normalize(&an + &bn, ad)
                } else {
                    normalize(&(&an * &bd) + &(&bn * &ad), &ad * &bd)
                }
            }
        }
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;

    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        match &self.0 {
            Repr::Rat(a) => Coefficient(Repr::Rat(-a)),
            Repr::Frac(n, d) => Coefficient(Repr::Frac(-n, d.clone())),
        }
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;

    fn mul(self, rhs: &Coefficient) -> Coefficient {
        match (&self.0, &rhs.0) {
            (Repr::Rat(a), Repr::Rat(b)) => Coefficient(Repr::Rat(a * b)),
            _ => {
                if self.is_zero() || rhs.is_zero() {
                    return Coefficient::zero();
                }
                normalize(
                    &self.numerator() * &rhs.numerator(),
                    &self.denominator() * &rhs.denominator(),
                )
            }
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rat(q) => write!(f, "{q}"),
            Repr::Frac(n, d) => {
                let num = if n.len() > 1 {
                    format!("({n})")
                } else {
                    n.to_string()
                };
                match d.as_constant() {
                    Some(c) if c.is_one() => write!(f, "{n}"),
                    _ => {
                        if needs_parens_as_divisor(d) {
                            write!(f, "{num}/({d})")
                        } else {
                            write!(f, "{num}/{d}")
                        }
                    }
                }
            }
        }
    }
}

/// A divisor prints bare only when it is a single integer or a single
/// power of one base variable.
fn needs_parens_as_divisor(d: &BasePoly) -> bool {
    if d.len() != 1 {
        return true;
    }
    let (mono, c) = d.terms().next().expect("one term");
    if mono.is_empty() {
        return false;
    }
    !c.is_one() || mono.iter().filter(|&&e| e > 0).count() > 1
}
