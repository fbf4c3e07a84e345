//! Differential kernels.
//!
//! A kernel of length `r` is presented by an ideal `P` over the variables
//! `x_i^ξ`, `ξ ∈ Γ(r)`; the kernel field is the fraction field of the
//! quotient by `P`, and the derivations act by `D_k x_i^ξ = x_i^{ξ+𝐤}` for
//! `deg ξ < r`. `P` is assumed prime. Nothing here checks that, and a
//! `prolonged` verdict is only meaningful under that assumption; an
//! obstruction is sound regardless.
//!
//! Prolonging by one step asks for images of the top-level variables. Each
//! generator `g` of `P` and each `k` gives the condition `τ_k(g) = 0`, which
//! is linear in the new unknowns `x_i^η` (`deg η = r + 1`). The joint system
//! is solved over the kernel field by fraction-free Gauss–Jordan
//! elimination, with zero tests done by normal forms modulo `P`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bounds::{self, BigNat, BitBudget};
use crate::coeff::Coefficient;
use crate::dpoly::{Context, DiffVar, Polynomial, Var};
use crate::error::{Error, Result};
use crate::groebner::{self, IdealPresentation};
use crate::indexcomb::gamma_set;
use crate::prolong::tau_condition;

/// Cap on the number of unknowns introduced by a single prolongation step.
pub const MAX_UNKNOWNS: usize = 4096;

#[derive(Debug, Clone)]
pub struct KernelPresentation {
    pub ctx: Context,
    pub r: u32,
    pub ideal: IdealPresentation,
    /// Pivots inverted by earlier prolongation steps.
    pub inverted: Vec<Polynomial>,
}

/// All `x_i^ξ` with `deg ξ ≤ level`.
pub fn level_vars(ctx: &Context, level: u32) -> Result<BTreeSet<Var>> {
    let gamma = gamma_set(ctx.m, level)?;
    Ok(gamma
        .iter()
        .flat_map(|xi| (1..=ctx.n as u32).map(move |i| Var::X(DiffVar::new(i, xi.clone()))))
        .collect())
}

/// The unknowns `x_i^η`, `deg η = level`, in canonical order.
fn top_vars(ctx: &Context, level: u32) -> Result<Vec<DiffVar>> {
    let gamma = gamma_set(ctx.m, level)?;
    let out: Vec<DiffVar> = gamma
        .iter()
        .filter(|xi| xi.degree() == level)
        .flat_map(|xi| (1..=ctx.n as u32).map(move |i| DiffVar::new(i, xi.clone())))
        .collect();
    if out.len() > MAX_UNKNOWNS {
        return Err(Error::Resource(format!(
            "{} unknowns at level {level}, limit is {MAX_UNKNOWNS}",
            out.len()
        )));
    }
    Ok(out)
}

impl KernelPresentation {
    pub fn new(ctx: Context, r: u32, generators: Vec<Polynomial>) -> Result<Self> {
        for g in &generators {
            ctx.check(g)?;
            if let Some(d) = g
                .vars()
                .iter()
                .filter_map(Var::as_diff)
                .find(|d| d.level() > r)
            {
                return Err(Error::IndexOutOfRange(format!(
                    "{d} lies above the kernel length {r}"
                )));
            }
        }
        Ok(KernelPresentation {
            ctx,
            r,
            ideal: IdealPresentation::from_generators(generators),
            inverted: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.ctx.n
    }

    pub fn m(&self) -> usize {
        self.ctx.m
    }
}

/// A failed derivation-extension condition.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub generator: Polynomial,
    pub k: usize,
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub normal_form: Polynomial,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub length: u32,
    /// The ideal contains 1, so there is no kernel field at all.
    pub unit_ideal: bool,
    /// Basis of `P ∩ K[x_{Γ(r-1)}]`, the polynomials whose conditions are checked.
    #[serde(serialize_with = "crate::report::ser_polys")]
    pub lower_generators: Vec<Polynomial>,
    pub violations: Vec<Violation>,
}

/// Checks that the prescribed images define derivations `D_k` on the field
/// generated by the levels below the top: for every `g` in a basis of
/// `P ∩ K[x_{Γ(r-1)}]` and every `k`, `τ_k(g)` must vanish modulo `P`.
pub fn kernel_validate(kp: &KernelPresentation) -> Result<ValidationReport> {
    if kp.ideal.is_unit() {
        return Ok(ValidationReport {
            valid: false,
            length: kp.r,
            unit_ideal: true,
            lower_generators: Vec::new(),
            violations: Vec::new(),
        });
    }
    if kp.r == 0 {
        return Ok(ValidationReport {
            valid: true,
            length: 0,
            unit_ideal: false,
            lower_generators: Vec::new(),
            violations: Vec::new(),
        });
    }
    let lower = level_vars(&kp.ctx, kp.r - 1)?;
    let lower_ideal = groebner::elimination_ideal(&kp.ideal, &lower);
    let mut violations = Vec::new();
    for g in lower_ideal.reduced_gb() {
        for k in 1..=kp.ctx.m {
            let nf = kp.ideal.normal_form(&tau_condition(g, k, &kp.ctx));
            if !nf.is_zero() {
                violations.push(Violation {
                    generator: g.clone(),
                    k,
                    normal_form: nf,
                });
            }
        }
    }
    Ok(ValidationReport {
        valid: violations.is_empty(),
        length: kp.r,
        unit_ideal: false,
        lower_generators: lower_ideal.reduced_gb().to_vec(),
        violations,
    })
}

/// One condition `τ_k(g) = 0` of the prolongation system.
#[derive(Debug, Clone, Serialize)]
pub struct Constraint {
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub generator: Polynomial,
    pub k: usize,
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub condition: Polynomial,
}

/// The linear system of one prolongation step.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub unknowns: Vec<DiffVar>,
    pub constraints: Vec<Constraint>,
}

pub fn prolongation_system(kp: &KernelPresentation) -> Result<LinearSystem> {
    let unknowns = top_vars(&kp.ctx, kp.r + 1)?;
    let mut constraints = Vec::new();
    for g in kp.ideal.reduced_gb() {
        for k in 1..=kp.ctx.m {
            constraints.push(Constraint {
                generator: g.clone(),
                k,
                condition: tau_condition(g, k, &kp.ctx),
            });
        }
    }
    Ok(LinearSystem {
        unknowns,
        constraints,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintUse {
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub generator: Polynomial,
    pub k: usize,
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub multiplier: Polynomial,
}

/// `Σ multiplier · τ_k(generator) ≡ residual (mod P)` with the unknowns
/// cancelling and `residual ∉ P`: the system forces `residual = 0` in a
/// field where it is invertible.
#[derive(Debug, Clone, Serialize)]
pub struct Obstruction {
    /// Length of the kernel whose prolongation failed.
    pub length: u32,
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub residual: Polynomial,
    /// True when `residual` is an element of `K`.
    pub constant: bool,
    pub combination: Vec<ConstraintUse>,
}

impl Obstruction {
    /// Re-derives the residual from the combination, independently of the
    /// elimination that produced it.
    pub fn verify(&self, kp: &KernelPresentation) -> bool {
        let mut total = Polynomial::zero();
        for u in &self.combination {
            total = &total + &(&u.multiplier * &tau_condition(&u.generator, u.k, &kp.ctx));
        }
        let nf = kp.ideal.normal_form(&total);
        !kp.ideal.normal_form(&self.residual).is_zero()
            && kp.ideal.normal_form(&(&nf - &self.residual)).is_zero()
    }

    pub fn relation(&self) -> String {
        format!("{} = 0", crate::dpoly::print_poly(&self.residual))
    }
}

#[derive(Debug, Clone)]
pub struct Prolongation {
    pub next: KernelPresentation,
    /// `d u - (…)` relations adjoined for the pivot unknowns.
    pub relations: Vec<Polynomial>,
    /// Unknowns left unconstrained, adjoined as transcendentals.
    pub free_unknowns: Vec<DiffVar>,
}

#[derive(Debug, Clone)]
pub enum ProlongResult {
    Prolonged(Box<Prolongation>),
    Obstructed(Obstruction),
}

impl ProlongResult {
    pub fn is_prolonged(&self) -> bool {
        matches!(self, ProlongResult::Prolonged(_))
    }
}

struct Row {
    coeffs: Vec<Polynomial>,
    rhs: Polynomial,
    combo: Vec<Polynomial>,
}

impl Row {
    fn combine(
        &self,
        a: &Polynomial,
        other: &Row,
        b: &Polynomial,
        ideal: &IdealPresentation,
    ) -> Row {
        let mix = |x: &Polynomial, y: &Polynomial| ideal.normal_form(&(&(a * x) - &(b * y)));
        Row {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| mix(x, y))
                .collect(),
            rhs: mix(&self.rhs, &other.rhs),
            combo: self
                .combo
                .iter()
                .zip(&other.combo)
                .map(|(x, y)| mix(x, y))
                .collect(),
        }
    }

    fn scale(&mut self, c: &Coefficient) {
        for p in self
            .coeffs
            .iter_mut()
            .chain([&mut self.rhs])
            .chain(self.combo.iter_mut())
        {
            *p = p.scale(c);
        }
    }
}

fn pivot_cost(p: &Polynomial) -> (bool, usize, u32) {
    (p.as_constant().is_none(), p.len(), p.total_degree())
}

/// One prolongation step, from length `r` to `r + 1`.
pub fn kernel_prolong_once(kp: &KernelPresentation) -> Result<ProlongResult> {
    let report = kernel_validate(kp)?;
    if !report.valid {
        return Err(Error::Validation(format!(
            "kernel of length {} is not valid ({} violated conditions{})",
            kp.r,
            report.violations.len(),
            if report.unit_ideal {
                ", unit ideal"
            } else {
                ""
            }
        )));
    }
    let system = prolongation_system(kp)?;
    let nu = system.unknowns.len();
    let nc = system.constraints.len();
    let unknown_vars: Vec<Var> = system.unknowns.iter().cloned().map(Var::X).collect();
    let zero_u: std::collections::BTreeMap<Var, Polynomial> = unknown_vars
        .iter()
        .map(|v| (v.clone(), Polynomial::zero()))
        .collect();

    let mut rows: Vec<Row> = system
        .constraints
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let coeffs = unknown_vars
                .iter()
                .map(|u| kp.ideal.normal_form(&c.condition.partial_derivative(u)))
                .collect();
            let rhs = kp.ideal.normal_form(&c.condition.substitute(&zero_u));
            let mut combo = vec![Polynomial::zero(); nc];
            combo[j] = Polynomial::one();
            Row { coeffs, rhs, combo }
        })
        .collect();

    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows.len()];
    for col in 0..nu {
        let best = rows
            .iter()
            .enumerate()
            .filter(|(j, r)| pivot_of_row[*j].is_none() && !r.coeffs[col].is_zero())
            .min_by_key(|(j, r)| (pivot_cost(&r.coeffs[col]), *j))
            .map(|(j, _)| j);
        let Some(p) = best else { continue };
        if let Some(c) = rows[p].coeffs[col].as_constant() {
            rows[p].scale(&c.inv().expect("nonzero pivot"));
        }
        pivot_of_row[p] = Some(col);
        let pivot = rows[p].coeffs[col].clone();
        for q in 0..rows.len() {
            if q == p || rows[q].coeffs[col].is_zero() {
                continue;
            }
            let a = rows[q].coeffs[col].clone();
            rows[q] = rows[q].combine(&pivot, &rows[p], &a, &kp.ideal);
        }
    }

    for (j, row) in rows.iter().enumerate() {
        if pivot_of_row[j].is_some() || row.rhs.is_zero() {
            continue;
        }
        debug_assert!(row.coeffs.iter().all(Polynomial::is_zero));
        let mut row = Row {
            coeffs: row.coeffs.clone(),
            rhs: row.rhs.clone(),
            combo: row.combo.clone(),
        };
        let constant = row.rhs.as_constant();
        if let Some(c) = &constant {
            row.scale(&c.inv().expect("nonzero residual"));
        }
        let combination = row
            .combo
            .iter()
            .zip(&system.constraints)
            .filter(|(mult, _)| !mult.is_zero())
            .map(|(mult, c)| ConstraintUse {
                generator: c.generator.clone(),
                k: c.k,
                multiplier: mult.clone(),
            })
            .collect();
        return Ok(ProlongResult::Obstructed(Obstruction {
            length: kp.r,
            residual: row.rhs,
            constant: constant.is_some(),
            combination,
        }));
    }

    let mut relations = Vec::new();
    let mut pivots = Vec::new();
    let mut pivot_cols = BTreeSet::new();
    for (j, row) in rows.iter().enumerate() {
        let Some(col) = pivot_of_row[j] else { continue };
        pivot_cols.insert(col);
        let mut rel = row.rhs.clone();
        for (u, a) in unknown_vars.iter().zip(&row.coeffs) {
            rel = &rel + &(a * &Polynomial::var(u.clone()));
        }
        relations.push(rel);
        let d = &row.coeffs[col];
        if d.as_constant().is_none() {
            pivots.push(d.clone());
        }
    }
    let free_unknowns = system
        .unknowns
        .iter()
        .enumerate()
        .filter(|(c, _)| !pivot_cols.contains(c))
        .map(|(_, u)| u.clone())
        .collect();

    let extended = kp.ideal.extended(relations.iter().cloned());
    let ideal = match pivots.iter().cloned().reduce(|a, b| &a * &b) {
        Some(h) => groebner::saturate(&extended, &h),
        None => extended,
    };
    let mut inverted = kp.inverted.clone();
    inverted.extend(pivots);
    Ok(ProlongResult::Prolonged(Box::new(Prolongation {
        next: KernelPresentation {
            ctx: kp.ctx,
            r: kp.r + 1,
            ideal,
            inverted,
        },
        relations,
        free_unknowns,
    })))
}

/// Outcome of prolonging up to a target length.
#[derive(Debug, Clone)]
pub struct ProlongToResult {
    pub target: u32,
    /// The last kernel reached (the input when the first step obstructs).
    pub last: KernelPresentation,
    pub obstruction: Option<Obstruction>,
    /// `C(r, m, n)` for the input kernel, when it fits the budget.
    pub bound: Option<BigNat>,
    /// Prolonged all the way to a length at least the realization bound.
    pub realization_certified: bool,
}

impl ProlongToResult {
    pub fn is_prolonged(&self) -> bool {
        self.obstruction.is_none()
    }
}

/// Iterates [`kernel_prolong_once`] until length `s` or the first obstruction.
pub fn kernel_prolong_to(
    kp: &KernelPresentation,
    s: u32,
    budget: BitBudget,
) -> Result<ProlongToResult> {
    if s < kp.r {
        return Err(Error::InvalidDimension(format!(
            "target length {s} is below the kernel length {}",
            kp.r
        )));
    }
    let bound = realization_bound(kp, budget).ok();
    let mut current = kp.clone();
    let mut obstruction = None;
    while current.r < s {
        match kernel_prolong_once(&current)? {
            ProlongResult::Prolonged(p) => current = p.next,
            ProlongResult::Obstructed(o) => {
                obstruction = Some(o);
                break;
            }
        }
    }
    let realization_certified =
        obstruction.is_none() && bound.as_ref().is_some_and(|b| BigNat::from(s) >= *b);
    Ok(ProlongToResult {
        target: s,
        last: current,
        obstruction,
        bound,
        realization_certified,
    })
}

/// `C(r, m, n)` for the kernel's data.
pub fn realization_bound(kp: &KernelPresentation, budget: BitBudget) -> Result<BigNat> {
    bounds::bound_c(kp.r as u64, kp.ctx.m as u64, kp.ctx.n as u64, budget)
}
