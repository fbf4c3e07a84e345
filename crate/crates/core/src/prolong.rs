//! Prolongation varieties `τ_{δ_k} X` and `τ_Δ X`.
//!
//! For `X ⊆ K^n` with ideal `I(X)` in the level-0 coordinates `x_i^0`, the
//! `k`-th block of fibre coordinates `y_{i,k}` is spelled `x_i^{𝐤}`. With
//! that convention the condition attached to `g ∈ I(X)` is the same
//! polynomial that the kernel and axiom checks use:
//!
//! ```text
//! τ_k(g) = Σ_v ∂g/∂v · shift_k(v) + g^{δ_k},   shift_k(x_i^ξ) = x_i^{ξ+𝐤}
//! ```

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::Coefficient;
use crate::dpoly::{Context, Polynomial, Var};
use crate::error::{Error, Result};
use crate::groebner::IdealPresentation;
use crate::indexcomb::MultiIndex;

/// `Σ_v ∂g/∂v · x^{ξ_v + 𝐤} + g^{δ_k}` over the `x` variables `v` of `g`.
pub fn tau_condition(g: &Polynomial, k: usize, ctx: &Context) -> Polynomial {
    let mut out = g.coeff_derivative(k, ctx.mode);
    for v in g.vars() {
        let Var::X(d) = &v else { continue };
        let image = Polynomial::var(Var::X(d.shifted(k)));
        out = &out + &(&g.partial_derivative(&v) * &image);
    }
    out
}

/// One added condition of a prolongation system.
#[derive(Debug, Clone, Serialize)]
pub struct TauCondition {
    pub k: usize,
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub source: Polynomial,
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub condition: Polynomial,
}

#[derive(Debug, Clone)]
pub struct ProlongationSystem {
    pub ctx: Context,
    pub base: IdealPresentation,
    pub ks: Vec<usize>,
    pub conditions: Vec<TauCondition>,
}

impl ProlongationSystem {
    /// The base basis followed by the added conditions.
    pub fn generators(&self) -> Vec<Polynomial> {
        self.base
            .reduced_gb()
            .iter()
            .cloned()
            .chain(self.conditions.iter().map(|c| c.condition.clone()))
            .collect()
    }

    /// Ambient dimension `n (1 + #ks)`.
    pub fn ambient_dimension(&self) -> usize {
        self.ctx.n * (1 + self.ks.len())
    }

    pub fn conditions_for(&self, k: usize) -> impl Iterator<Item = &TauCondition> {
        self.conditions.iter().filter(move |c| c.k == k)
    }
}

fn check_level_zero(ideal: &IdealPresentation, ctx: &Context) -> Result<()> {
    for g in ideal.generators() {
        ctx.check(g)?;
        if let Some(v) = g
            .vars()
            .iter()
            .find(|v| v.as_diff().is_none_or(|d| d.level() > 0))
        {
            let name = v.as_diff().map(|d| d.to_string()).unwrap_or_default();
            return Err(Error::ShapeMismatch(format!(
                "prolongation base must use level-0 coordinates only, found {name}"
            )));
        }
    }
    Ok(())
}

fn build(ideal: &IdealPresentation, ks: Vec<usize>, ctx: &Context) -> Result<ProlongationSystem> {
    check_level_zero(ideal, ctx)?;
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > ctx.m) {
        return Err(Error::IndexOutOfRange(format!(
            "derivation {k} outside 1..={}",
            ctx.m
        )));
    }
    let mut conditions = Vec::new();
    for &k in &ks {
        for g in ideal.reduced_gb() {
            conditions.push(TauCondition {
                k,
                source: g.clone(),
                condition: tau_condition(g, k, ctx),
            });
        }
    }
    Ok(ProlongationSystem {
        ctx: *ctx,
        base: ideal.clone(),
        ks,
        conditions,
    })
}

/// `τ_{δ_k} X` from the reduced basis of `I(X)`.
pub fn prolong_one(
    ideal: &IdealPresentation,
    k: usize,
    ctx: &Context,
) -> Result<ProlongationSystem> {
    build(ideal, vec![k], ctx)
}

/// `τ_Δ X = τ_{δ_1} X ×_X ⋯ ×_X τ_{δ_m} X`.
pub fn prolong_delta(ideal: &IdealPresentation, ctx: &Context) -> Result<ProlongationSystem> {
    build(ideal, (1..=ctx.m).collect(), ctx)
}

/// A point of `K^n` together with its derivative data `δ_k a`.
#[derive(Debug, Clone)]
pub struct DiffPoint {
    pub values: Vec<Coefficient>,
    /// `derivatives[k - 1][i - 1] = δ_k a_i`
    pub derivatives: Vec<Vec<Coefficient>>,
}

impl DiffPoint {
    /// Derivative data computed from the derivations of `K`.
    pub fn from_base(values: Vec<Coefficient>, ctx: &Context) -> Self {
        let derivatives = (1..=ctx.m)
            .map(|k| values.iter().map(|a| a.derive_base(k, ctx.mode)).collect())
            .collect();
        DiffPoint {
            values,
            derivatives,
        }
    }

    fn assignment(&self, ctx: &Context) -> BTreeMap<Var, Polynomial> {
        let mut out = BTreeMap::new();
        for (i, a) in self.values.iter().enumerate() {
            out.insert(
                Var::X(crate::dpoly::DiffVar::new(
                    i as u32 + 1,
                    MultiIndex::zero(ctx.m),
                )),
                Polynomial::constant(a.clone()),
            );
        }
        for (k, block) in self.derivatives.iter().enumerate() {
            for (i, d) in block.iter().enumerate() {
                out.insert(
                    Var::X(crate::dpoly::DiffVar::new(
                        i as u32 + 1,
                        MultiIndex::unit(ctx.m, k + 1),
                    )),
                    Polynomial::constant(d.clone()),
                );
            }
        }
        out
    }
}

/// Whether `(a, δ_1 a, …, δ_m a)` satisfies every generator of `system`.
pub fn point_in_prolongation(point: &DiffPoint, system: &ProlongationSystem) -> Result<bool> {
    let ctx = &system.ctx;
    if point.values.len() != ctx.n {
        return Err(Error::ShapeMismatch(format!(
            "point has {} coordinates, expected {}",
            point.values.len(),
            ctx.n
        )));
    }
    if point.derivatives.len() != ctx.m || point.derivatives.iter().any(|b| b.len() != ctx.n) {
        return Err(Error::ShapeMismatch(format!(
            "derivative data must be {} blocks of {} values",
            ctx.m, ctx.n
        )));
    }
    let assignment = point.assignment(ctx);
    Ok(system
        .generators()
        .iter()
        .all(|g| g.substitute(&assignment).is_zero()))
}
