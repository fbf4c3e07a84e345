//! Differential polynomials: polynomials over [`Coefficient`] in the
//! indeterminates `x_i^ξ`.
//!
//! Monomials are sparse exponent lists sorted by [`Var`] order, where a
//! smaller variable is more significant. Auxiliary variables (Rabinowitsch
//! variables and the like) sort after every `x_i^ξ`.

mod parse;
mod print;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::coeff::{Coefficient, FieldMode};
use crate::error::{Error, Result};
use crate::indexcomb::MultiIndex;

pub use parse::{parse_poly, parse_poly_with, Syntax};
pub(crate) use parse::{Parser, Token};
pub use print::{print_poly, print_poly_with};

/// The indeterminate `x_i^ξ` (1-based `i`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiffVar {
    pub xi: MultiIndex,
    pub i: u32,
}

impl DiffVar {
    pub fn new(i: u32, xi: MultiIndex) -> Self {
        DiffVar { xi, i }
    }

    /// `x_i^{ξ+𝐤}`.
    pub fn shifted(&self, k: usize) -> DiffVar {
        DiffVar {
            xi: self.xi.shifted(k),
            i: self.i,
        }
    }

    pub fn level(&self) -> u32 {
        self.xi.degree()
    }
}

impl fmt::Display for DiffVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}_{}", self.i, self.xi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(DiffVar),
    Aux(u32),
}

impl Var {
    pub fn x(i: u32, xi: &[u32]) -> Var {
        Var::X(DiffVar::new(i, MultiIndex::new(xi.to_vec())))
    }

    pub fn as_diff(&self) -> Option<&DiffVar> {
        match self {
            Var::X(v) => Some(v),
            Var::Aux(_) => None,
        }
    }
}

impl From<DiffVar> for Var {
    fn from(v: DiffVar) -> Self {
        Var::X(v)
    }
}

/// Ambient data for parsing and validating polynomials: `n` coordinates,
/// `m` derivations and the coefficient field mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Context {
    pub n: usize,
    pub m: usize,
    pub mode: FieldMode,
}

impl Context {
    pub fn new(n: usize, m: usize, mode: FieldMode) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidDimension("n and m must be at least 1".into()));
        }
        Ok(Context { n, m, mode })
    }

    pub fn check_var(&self, v: &Var) -> Result<()> {
        match v {
            Var::X(d) => {
                if d.i == 0 || d.i as usize > self.n {
                    return Err(Error::IndexOutOfRange(format!(
                        "coordinate {} outside 1..={}",
                        d.i, self.n
                    )));
                }
                if d.xi.m() != self.m {
                    return Err(Error::IndexOutOfRange(format!(
                        "multi-index {} has length {}, expected {}",
                        d.xi,
                        d.xi.m(),
                        self.m
                    )));
                }
                Ok(())
            }
            Var::Aux(_) => Err(Error::ContextMismatch(
                "auxiliary variable outside its computation".into(),
            )),
        }
    }

    pub fn check_coefficient(&self, c: &Coefficient) -> Result<()> {
        let k = c.max_base_var();
        if k == 0 {
            return Ok(());
        }
        match self.mode {
            FieldMode::Constants => Err(Error::ContextMismatch(
                "base variables are not available in constants mode".into(),
            )),
            FieldMode::Rational if k > self.m => Err(Error::IndexOutOfRange(format!(
                "base variable t{k} outside t1..t{}",
                self.m
            ))),
            FieldMode::Rational => Ok(()),
        }
    }

    /// Checks every variable and coefficient of `f` against this context.
    pub fn check(&self, f: &Polynomial) -> Result<()> {
        for (mono, c) in f.terms() {
            self.check_coefficient(c)?;
            for (v, _) in mono.factors() {
                self.check_var(v)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn factors(&self) -> impl Iterator<Item = &(Var, u32)> {
        self.0.iter()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|j| self.0[j].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => {
                        out.push((va.clone(), *ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb.clone(), *eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va.clone(), ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(x), None) => {
                    out.push((*x).clone());
                    a.next();
                }
                (None, Some(y)) => {
                    out.push((*y).clone());
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// The monomial with the exponent of `v` lowered by one, along with the
    /// old exponent, or `None` when `v` does not occur.
    fn lower(&self, v: &Var) -> Option<(Monomial, u32)> {
        let j = self.0.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.0[j].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(j);
        } else {
            out[j].1 -= 1;
        }
        Some((Monomial(out), e))
    }
}

/// Degree-reverse-lexicographic comparison under the [`Var`] ranking.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let by_degree = a.degree().cmp(&b.degree());
    if by_degree != Ordering::Equal {
        return by_degree;
    }
    let (mut ia, mut ib) = (a.0.iter().rev().peekable(), b.0.iter().rev().peekable());
    loop {
        match (ia.peek(), ib.peek()) {
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                // a carries a less significant variable that b lacks
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(ea);
                    }
                    ia.next();
                    ib.next();
                }
            },
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (None, None) => return Ordering::Equal,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Coefficient>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Coefficient::one())
    }

    pub fn constant(c: Coefficient) -> Self {
        Polynomial::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(Monomial::var(v), Coefficient::one())
    }

    pub fn term(mono: Monomial, c: Coefficient) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Coefficient)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Coefficient)> {
        self.terms.into_iter()
    }

    /// The value when `self` has no variables.
    pub fn as_constant(&self) -> Option<Coefficient> {
        match self.terms.len() {
            0 => Some(Coefficient::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, mono: &Monomial) -> Coefficient {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(Coefficient::zero)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Total degree counting only variables in `set`.
    pub fn degree_in(&self, set: impl Fn(&Var) -> bool) -> u32 {
        self.terms
            .keys()
            .map(|m| m.0.iter().filter(|(v, _)| set(v)).map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The leading coefficient under grevlex, used to normalize witnesses.
    pub fn leading_coefficient(&self) -> Option<&Coefficient> {
        self.terms
            .iter()
            .max_by(|a, b| grevlex_cmp(a.0, b.0))
            .map(|(_, c)| c)
    }

    /// `∂f/∂v`.
    pub fn partial_derivative(&self, v: &Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (mono, c) in &self.terms {
            if let Some((lowered, e)) = mono.lower(v) {
                out.add_term(lowered, c * &Coefficient::from_int(e as i64));
            }
        }
        out
    }

    /// `f^{δ_k}`: `δ_k` applied to every coefficient, monomials fixed.
    pub fn coeff_derivative(&self, k: usize, mode: FieldMode) -> Polynomial {
        let mut out = Polynomial::zero();
        for (mono, c) in &self.terms {
            out.add_term(mono.clone(), c.derive_base(k, mode));
        }
        out
    }

    /// Simultaneous substitution; variables missing from `assignment` stay.
    pub fn substitute(&self, assignment: &BTreeMap<Var, Polynomial>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (mono, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = Polynomial::constant(c.clone());
            for (v, e) in &mono.0 {
                match assignment.get(v) {
                    Some(image) => acc = &acc * &image.pow(*e),
                    None => kept.push((v.clone(), *e)),
                }
            }
            let kept = Polynomial::term(Monomial(kept), Coefficient::one());
            out = &out + &(&acc * &kept);
        }
        out
    }

    /// Renames variables through `f`. `f` must be injective on `self.vars()`.
    pub fn rename(&self, f: impl Fn(&Var) -> Var) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            (
                Monomial::from_factors(m.0.iter().map(|(v, e)| (f(v), *e))),
                c.clone(),
            )
        }))
    }
}

/// Substitution with every image checked against `ctx`.
pub fn substitute(
    f: &Polynomial,
    assignment: &BTreeMap<Var, Polynomial>,
    ctx: &Context,
) -> Result<Polynomial> {
    ctx.check(f)?;
    for (v, image) in assignment {
        ctx.check_var(v)?;
        ctx.check(image)?;
    }
    Ok(f.substitute(assignment))
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx1(n: usize) -> Context {
        Context::new(n, 1, FieldMode::Rational).unwrap()
    }

    fn p(text: &str, ctx: &Context) -> Polynomial {
        parse_poly(text, ctx).unwrap()
    }

    #[test]
    fn partial_derivative_examples() {
        let c = ctx1(1);
        let x0 = Var::x(1, &[0]);
        let x1 = Var::x(1, &[1]);
        assert_eq!(p("x1_[0]^2", &c).partial_derivative(&x0), p("2*x1_[0]", &c));
        assert_eq!(
            p("x1_[0]*x1_[1]", &c).partial_derivative(&x1),
            p("x1_[0]", &c)
        );
        assert_eq!(
            p("t1*x1_[0]^3", &c).partial_derivative(&x0),
            p("3*t1*x1_[0]^2", &c)
        );
    }

    #[test]
    fn coeff_derivative_examples() {
        let c = ctx1(1);
        let k = Context::new(1, 1, FieldMode::Constants).unwrap();
        assert!(p("3*x1_[0]^2 - 1/2", &k)
            .coeff_derivative(1, FieldMode::Constants)
            .is_zero());
        assert_eq!(
            p("x1_[0]^2 - t1", &c).coeff_derivative(1, FieldMode::Rational),
            p("-1", &c)
        );
        let c2 = Context::new(1, 2, FieldMode::Rational).unwrap();
        assert!(p("t2*x1_[0,0]", &c2)
            .coeff_derivative(1, FieldMode::Rational)
            .is_zero());
    }

    #[test]
    fn substitute_examples() {
        let c = Context::new(2, 2, FieldMode::Rational).unwrap();
        let x = Var::x(1, &[0, 0]);
        let y = Var::x(2, &[0, 0]);
        let one: BTreeMap<_, _> = [(x.clone(), Polynomial::one())].into();
        assert_eq!(p("x1_[0,0]^2", &c).substitute(&one), Polynomial::one());

        let rename: BTreeMap<_, _> = [(y.clone(), p("x1_[1,0]", &c))].into();
        assert_eq!(
            p("x2_[0,0] - 1", &c).substitute(&rename),
            p("x1_[1,0] - 1", &c)
        );

        let point: BTreeMap<_, _> = [(x, p("t1", &c)), (y, p("1/(2*t1)", &c))].into();
        assert!(p("2*x1_[0,0]*x2_[0,0] - 1", &c)
            .substitute(&point)
            .is_zero());
    }

    #[test]
    fn substitute_checks_context() {
        let c = Context::new(1, 1, FieldMode::Constants).unwrap();
        let bad: BTreeMap<_, _> = [(Var::x(2, &[0]), Polynomial::one())].into();
        assert!(matches!(
            substitute(&p("x1_[0]", &c), &bad, &c),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn grevlex_basics() {
        let c = Context::new(3, 1, FieldMode::Constants).unwrap();
        let m = |s: &str| p(s, &c).terms().next().unwrap().0.clone();
        // x1 ≻ x2 ≻ x3
        assert_eq!(grevlex_cmp(&m("x1_[0]"), &m("x2_[0]")), Ordering::Greater);
        assert_eq!(
            grevlex_cmp(&m("x1_[0]*x3_[0]"), &m("x2_[0]^2")),
            Ordering::Less
        );
        assert_eq!(
            grevlex_cmp(&m("x3_[0]^3"), &m("x1_[0]^2")),
            Ordering::Greater
        );
    }
}
