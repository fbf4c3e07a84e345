//! Geometric axiom conditions.
//!
//! Both containment checks have the same ideal-theoretic core. Let `W` live
//! over the coordinates `x_i^ξ`, `ξ ∈ Γ(L)`, and let `J` be the elimination
//! ideal of `I(W)` to `Γ(L-1)`, the ideal of the closure of `π(W)`. Then
//! `φ(W) ⊆ τ_Δ(π(W))` exactly when `τ_k(g) ∈ I(W)` for every `g` in a basis
//! of `J` and every `k`, because `φ` sends the fibre coordinate of
//! `x_i^ξ` in block `k` to `x_i^{ξ+𝐤}`.
//!
//! * naive shape: `L = 1`, i.e. `W ⊆ K^{n(m+1)}` in the `(x, y)` layout;
//! * sharp shape: `L = C(1, m, n)`, `W ⊆ K^{α(n,m)}`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::bounds::{self, BigNat, BitBudget};
use crate::coeff::FieldMode;
use crate::dpoly::{print_poly_with, Context, Parser, Polynomial, Syntax, Token, Var};
use crate::error::{Error, Result};
use crate::groebner::{self, IdealPresentation};
use crate::indexcomb::{coordinate_maps, CoordinateMaps};
use crate::kernels::{self, KernelPresentation, ProlongResult};
use crate::prolong::tau_condition;

/// Parameters of one instance of the axiom scheme.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomShape {
    pub n: usize,
    pub m: usize,
    #[serde(serialize_with = "crate::report::ser_bignat")]
    pub c: BigNat,
    #[serde(serialize_with = "crate::report::ser_bignat")]
    pub alpha: BigNat,
    #[serde(serialize_with = "crate::report::ser_bignat")]
    pub beta: BigNat,
    /// Present when the layout is small enough to enumerate.
    #[serde(skip)]
    pub maps: Option<CoordinateMaps>,
}

pub fn axiom_shape(n: usize, m: usize, budget: BitBudget) -> Result<AxiomShape> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidDimension("n and m must be at least 1".into()));
    }
    let (c, alpha, beta) = bounds::shape_dimensions(n as u64, m as u64, budget)?;
    let maps = coordinate_maps(n, m, budget).ok();
    Ok(AxiomShape {
        n,
        m,
        c,
        alpha,
        beta,
        maps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// `W ⊆ τ_Δ(π(W))` with `W ⊆ K^{n(m+1)}`.
    Naive { m: usize, n: usize },
    /// `φ(W) ⊆ τ_Δ(π(W))` with `W ⊆ K^{α(n,m)}`.
    Sharp { n: usize, m: usize },
}

impl Shape {
    pub fn n(&self) -> usize {
        match *self {
            Shape::Naive { n, .. } | Shape::Sharp { n, .. } => n,
        }
    }

    pub fn m(&self) -> usize {
        match *self {
            Shape::Naive { m, .. } | Shape::Sharp { m, .. } => m,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Shape::Naive { .. } => "naive",
            Shape::Sharp { .. } => "sharp",
        }
    }

    /// Top level `L` of the layout.
    pub fn level(&self, budget: BitBudget) -> Result<u32> {
        match *self {
            Shape::Naive { .. } => Ok(1),
            Shape::Sharp { n, m } => Ok(coordinate_maps(n, m, budget)?.c),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentWitness {
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub generator: Polynomial,
    pub k: usize,
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub normal_form: Polynomial,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentVerdict {
    pub holds: bool,
    pub shape: &'static str,
    pub level: u32,
    pub witnesses: Vec<ContainmentWitness>,
    #[serde(serialize_with = "crate::report::ser_polys")]
    pub elimination_generators: Vec<Polynomial>,
    pub note: String,
}

const CLOSURE_NOTE: &str = "pi(W) is replaced by its Zariski closure, the elimination ideal; \
the base condition x in pi(W) holds automatically for projections of points of W";

fn check_layout(w: &IdealPresentation, ctx: &Context, level: u32) -> Result<()> {
    for g in w.generators() {
        ctx.check(g)?;
        for v in g.vars() {
            let d = v.as_diff().expect("checked by the context");
            if d.level() > level {
                return Err(Error::ShapeMismatch(format!(
                    "{d} lies outside the layout of level {level}"
                )));
            }
        }
    }
    Ok(())
}

fn all_vars(ctx: &Context, level: u32) -> Result<BTreeSet<Var>> {
    kernels::level_vars(ctx, level)
}

/// Checks the containment hypothesis of the axiom of the given shape.
pub fn containment_check(
    w: &IdealPresentation,
    ctx: &Context,
    shape: Shape,
    budget: BitBudget,
) -> Result<ContainmentVerdict> {
    if shape.n() != ctx.n || shape.m() != ctx.m {
        return Err(Error::ShapeMismatch(format!(
            "{} shape with n={} m={} does not match the ideal's n={} m={}",
            shape.name(),
            shape.n(),
            shape.m(),
            ctx.n,
            ctx.m
        )));
    }
    let level = shape.level(budget)?;
    check_layout(w, ctx, level)?;
    let j = groebner::elimination_ideal(w, &all_vars(ctx, level - 1)?);
    let mut witnesses = Vec::new();
    for g in j.reduced_gb() {
        for k in 1..=ctx.m {
            let nf = w.normal_form(&tau_condition(g, k, ctx));
            if !nf.is_zero() {
                witnesses.push(ContainmentWitness {
                    generator: g.clone(),
                    k,
                    normal_form: nf,
                });
            }
        }
    }
    Ok(ContainmentVerdict {
        holds: witnesses.is_empty(),
        shape: shape.name(),
        level,
        witnesses,
        elimination_generators: j.reduced_gb().to_vec(),
        note: CLOSURE_NOTE.to_string(),
    })
}

/// The length-`r` kernel cut out by `W ∩ K[x_{Γ(r)}]`.
pub fn truncated_kernel(
    w: &IdealPresentation,
    ctx: &Context,
    r: u32,
) -> Result<KernelPresentation> {
    let trunc = groebner::elimination_ideal(w, &all_vars(ctx, r)?);
    KernelPresentation::new(*ctx, r, trunc.reduced_gb().to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Neq,
}

/// Quantifier-free formula over polynomial atoms `f = 0` / `f != 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Atom(Polynomial, Relation),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn atoms(&self) -> Vec<(&Polynomial, Relation)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<(&'a Polynomial, Relation)>) {
        match self {
            Formula::Atom(p, rel) => out.push((p, *rel)),
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.atoms()
            .into_iter()
            .flat_map(|(p, _)| p.vars())
            .collect()
    }

    pub fn to_text(&self, syntax: Syntax) -> String {
        self.render(syntax, 0)
    }

    // 0: top, 1: inside `or`, 2: inside `and`, 3: under `not`
    fn render(&self, syntax: Syntax, ctx: u8) -> String {
        let wrap = |s: String, need: bool| if need { format!("({s})") } else { s };
        match self {
            Formula::Atom(p, rel) => {
                let op = match rel {
                    Relation::Eq => "=",
                    Relation::Neq => "!=",
                };
                format!("{} {op} 0", print_poly_with(p, syntax))
            }
            Formula::Not(f) => format!("!{}", f.render(syntax, 3)),
            Formula::And(fs) => wrap(
                fs.iter()
                    .map(|f| f.render(syntax, 2))
                    .collect::<Vec<_>>()
                    .join(" & "),
                ctx > 2,
            ),
            Formula::Or(fs) => wrap(
                fs.iter()
                    .map(|f| f.render(syntax, 1))
                    .collect::<Vec<_>>()
                    .join(" | "),
                ctx > 1,
            ),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(Syntax::Algebraic))
    }
}

struct FormulaParser {
    p: Parser,
}

impl FormulaParser {
    fn disjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conjunction()?];
        while *self.p.peek() == Token::Or {
            self.p.advance();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.negation()?];
        while *self.p.peek() == Token::And {
            self.p.advance();
            parts.push(self.negation()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn negation(&mut self) -> Result<Formula> {
        match self.p.peek() {
            Token::Not => {
                self.p.advance();
                Ok(Formula::Not(Box::new(self.negation()?)))
            }
            Token::LParen => {
                // `(` opens either a subformula or a polynomial
                let mark = self.p.checkpoint();
                match self.atom() {
                    Ok(a) => Ok(a),
                    Err(atom_err) => {
                        self.p.restore(mark);
                        self.p.advance();
                        let inner = self.disjunction().map_err(|_| atom_err)?;
                        self.p.expect(Token::RParen, "`)`")?;
                        Ok(inner)
                    }
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let lhs = self.p.expr()?;
        let rel = match self.p.advance() {
            Token::Eq => Relation::Eq,
            Token::Neq => Relation::Neq,
            _ => {
                return Err(Error::syntax(
                    self.p.pos(),
                    "expected `=` or `!=` after a polynomial",
                ))
            }
        };
        let rhs = self.p.expr()?;
        Ok(Formula::Atom(&lhs - &rhs, rel))
    }
}

/// Parses a formula in the differential syntax (`d[..]xI`, bare `xI`).
pub fn parse_formula(text: &str, m: usize, mode: FieldMode) -> Result<Formula> {
    let mut fp = FormulaParser {
        p: Parser::new(text, Syntax::Differential, m, mode, None)?,
    };
    let f = fp.disjunction()?;
    fp.p.expect_end()?;
    Ok(f)
}

/// `ρ(x) = γ(δ^ξ x : ξ ∈ Γ(r))` together with the axiom instance witnessing it.
#[derive(Debug, Clone)]
pub struct DiffFormula {
    pub m: usize,
    /// Number of differential variables (largest index `i` of an `x_i`).
    pub t: usize,
    pub r: u32,
    /// `γ`, over the algebraic variables `x_i^ξ`.
    pub gamma: Formula,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompiledFormula {
    pub m: usize,
    pub t: usize,
    pub r: u32,
    /// `γ` in the algebraic syntax.
    pub gamma: String,
    /// `γ` with `x_i^ξ` read back as `δ^ξ x_i`.
    pub rho: String,
    pub algebraically_closed_case: bool,
    #[serde(serialize_with = "crate::report::ser_opt_bignat")]
    pub n: Option<BigNat>,
    #[serde(serialize_with = "crate::report::ser_opt_bignat")]
    pub alpha: Option<BigNat>,
    #[serde(serialize_with = "crate::report::ser_opt_bignat")]
    pub beta: Option<BigNat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub formula: DiffFormula,
}

pub fn compile_formula(
    text: &str,
    m: usize,
    mode: FieldMode,
    budget: BitBudget,
) -> Result<CompiledFormula> {
    if m == 0 {
        return Err(Error::InvalidDimension("m must be at least 1".into()));
    }
    let gamma = parse_formula(text, m, mode)?;
    let vars = gamma.vars();
    let diff = vars.iter().filter_map(Var::as_diff);
    let t = diff.clone().map(|d| d.i as usize).max().unwrap_or(0);
    let r = diff.map(|d| d.level()).max().unwrap_or(0);
    let formula = DiffFormula { m, t, r, gamma };

    let mut out = CompiledFormula {
        m,
        t,
        r,
        gamma: formula.gamma.to_text(Syntax::Algebraic),
        rho: formula.gamma.to_text(Syntax::Differential),
        algebraically_closed_case: r == 0,
        n: None,
        alpha: None,
        beta: None,
        note: None,
        formula,
    };
    if r == 0 {
        out.note = Some("algebraically closed case: rho is realized in K itself".into());
        return Ok(out);
    }
    let n = bounds::binomial(&BigNat::from(r - 1 + m as u32), m as u64) * t;
    out.n = Some(n.clone());
    let dims = u64::try_from(n.clone())
        .map_err(|_| Error::Resource(format!("n = {n} is too large")))
        .and_then(|n| bounds::shape_dimensions(n, m as u64, budget));
    match dims {
        Ok((_, alpha, beta)) => {
            out.alpha = Some(alpha);
            out.beta = Some(beta);
        }
        Err(Error::Resource(msg)) => out.note = Some(format!("alpha and beta not computed: {msg}")),
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// Both halves of the two-derivation counterexample `W = V(y - 1, z - x)`.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub mode: FieldMode,
    #[serde(serialize_with = "crate::report::ser_polys")]
    pub w: Vec<Polynomial>,
    pub containment: ContainmentVerdict,
    pub kernel_valid: bool,
    pub kernel_status: &'static str,
    #[serde(serialize_with = "crate::report::ser_opt_poly")]
    pub witness_residual: Option<Polynomial>,
    pub witness_constant: bool,
    pub witness_verified: bool,
    pub narrative: Vec<String>,
}

pub fn counterexample_demo(mode: FieldMode) -> Result<CounterexampleReport> {
    let ctx = Context::new(1, 2, mode)?;
    let x = Polynomial::var(Var::x(1, &[0, 0]));
    let y = Polynomial::var(Var::x(1, &[1, 0]));
    let z = Polynomial::var(Var::x(1, &[0, 1]));
    let w = vec![&y - &Polynomial::one(), &z - &x];
    let ideal = IdealPresentation::from_generators(w.clone());
    let containment = containment_check(
        &ideal,
        &ctx,
        Shape::Naive { m: 2, n: 1 },
        BitBudget::default(),
    )?;

    let kp = KernelPresentation::new(ctx, 1, w.clone())?;
    let kernel_valid = kernels::kernel_validate(&kp)?.valid;
    let outcome = kernels::kernel_prolong_once(&kp)?;

    let mut narrative = vec![
        "W = V(y - 1, z - x) in K^3 with y, z in the fibre blocks of delta_1, delta_2".to_string(),
        format!(
            "pi(W) = K, so the elimination ideal is zero and W is contained in tau_Delta(pi(W)): holds = {}",
            containment.holds
        ),
        "a point a of W with delta_1 a = 1 and delta_2 a = a gives a length-1 kernel".to_string(),
    ];
    let (status, residual, constant, verified) = match &outcome {
        ProlongResult::Prolonged(_) => ("prolonged", None, false, false),
        ProlongResult::Obstructed(o) => {
            narrative.push(
                "its prolongation needs delta_2 delta_1 a = delta_2(1) = 0 and delta_1 delta_2 a = delta_1 a = 1"
                    .to_string(),
            );
            narrative.push(format!(
                "commuting the derivations forces {}, so no differential point exists",
                o.relation()
            ));
            (
                "obstructed",
                Some(o.residual.clone()),
                o.constant,
                o.verify(&kp),
            )
        }
    };
    Ok(CounterexampleReport {
        mode,
        w,
        containment,
        kernel_valid,
        kernel_status: status,
        witness_residual: residual,
        witness_constant: constant,
        witness_verified: verified,
        narrative,
    })
}
