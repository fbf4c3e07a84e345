//! Reduced Gröbner bases over `K` and the ideal computations built on them:
//! normal forms, membership, elimination and radical membership.
//!
//! Buchberger's algorithm with the Gebauer–Möller update (coprime leading
//! monomials and the chain criterion) and the normal selection strategy.
//! Internally each computation fixes a finite ring: the variables involved,
//! sorted by significance, with dense exponent vectors.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use crate::coeff::Coefficient;
use crate::dpoly::{Monomial, Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
    /// Grevlex on the `eliminate` block, ties broken by grevlex on the rest.
    /// Every monomial involving an eliminated variable beats every monomial
    /// without one.
    Block {
        eliminate: BTreeSet<Var>,
    },
}

#[derive(Debug, Clone, Copy)]
enum DenseOrder {
    Lex,
    Grevlex,
    Block(usize),
}

fn grevlex_dense(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for j in (0..a.len()).rev() {
        if a[j] != b[j] {
            return b[j].cmp(&a[j]);
        }
    }
    Ordering::Equal
}

impl DenseOrder {
    fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            DenseOrder::Lex => a.cmp(b),
            DenseOrder::Grevlex => grevlex_dense(a, b),
            DenseOrder::Block(s) => {
                grevlex_dense(&a[..s], &b[..s]).then_with(|| grevlex_dense(&a[s..], &b[s..]))
            }
        }
    }
}

/// A finite polynomial ring with a fixed variable layout and order.
struct Ring {
    vars: Vec<Var>,
    index: HashMap<Var, usize>,
    order: DenseOrder,
}

impl Ring {
    fn new(vars: BTreeSet<Var>, order: &MonomialOrder) -> Ring {
        let (vars, dense) = match order {
            MonomialOrder::Lex => (vars.into_iter().collect::<Vec<_>>(), DenseOrder::Lex),
            MonomialOrder::Grevlex => (vars.into_iter().collect(), DenseOrder::Grevlex),
            MonomialOrder::Block { eliminate } => {
                let (mut first, rest): (Vec<_>, Vec<_>) =
                    vars.into_iter().partition(|v| eliminate.contains(v));
                let split = first.len();
                first.extend(rest);
                (first, DenseOrder::Block(split))
            }
        };
        let index = vars
            .iter()
            .enumerate()
            .map(|(j, v)| (v.clone(), j))
            .collect();
        Ring {
            vars,
            index,
            order: dense,
        }
    }

    fn for_polys<'a>(
        polys: impl IntoIterator<Item = &'a Polynomial>,
        order: &MonomialOrder,
    ) -> Ring {
        let mut vars = BTreeSet::new();
        for p in polys {
            vars.extend(p.vars());
        }
        Ring::new(vars, order)
    }

    fn import(&self, f: &Polynomial) -> DPoly {
        let mut terms: Vec<(Vec<u32>, Coefficient)> = f
            .terms()
            .map(|(m, c)| {
                let mut exp = vec![0u32; self.vars.len()];
                for (v, e) in m.factors() {
                    exp[self.index[v]] = *e;
                }
                (exp, c.clone())
            })
            .collect();
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        DPoly { terms }
    }

    fn export(&self, f: &DPoly) -> Polynomial {
        Polynomial::from_terms(f.terms.iter().map(|(exp, c)| {
            let mono = Monomial::from_factors(
                exp.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| (self.vars[j].clone(), e)),
            );
            (mono, c.clone())
        }))
    }
}

/// Dense polynomial, terms sorted descending in the ring order.
#[derive(Debug, Clone)]
struct DPoly {
    terms: Vec<(Vec<u32>, Coefficient)>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn sub_exp(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl DPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &[u32] {
        &self.terms[0].0
    }

    fn make_monic(&mut self) {
        let inv = self.terms[0]
            .1
            .inv()
            .expect("leading coefficient is nonzero");
        if inv.is_one() {
            return;
        }
        for (_, c) in &mut self.terms {
            *c = &*c * &inv;
        }
    }

    /// `terms - c * x^shift * g`.
    fn sub_scaled(
        terms: &[(Vec<u32>, Coefficient)],
        c: &Coefficient,
        shift: &[u32],
        g: &[(Vec<u32>, Coefficient)],
        order: DenseOrder,
    ) -> Vec<(Vec<u32>, Coefficient)> {
        let mut out = Vec::with_capacity(terms.len() + g.len());
        let mut a = terms.iter().peekable();
        let mut b = g
            .iter()
            .map(|(e, gc)| {
                (
                    e.iter().zip(shift).map(|(x, y)| x + y).collect::<Vec<_>>(),
                    gc,
                )
            })
            .peekable();
        loop {
            let which = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => break,
            };
            match which {
                Ordering::Greater => out.push(a.next().expect("peeked").clone()),
                Ordering::Less => {
                    let (e, gc) = b.next().expect("peeked");
                    out.push((e, -&(c * gc)));
                }
                Ordering::Equal => {
                    let (e, ac) = a.next().expect("peeked");
                    let (_, gc) = b.next().expect("peeked");
                    let v = ac - &(c * gc);
                    if !v.is_zero() {
                        out.push((e.clone(), v));
                    }
                }
            }
        }
        out
    }
}

/// Full reduction of `f` by the monic polynomials `basis`.
fn reduce(f: &DPoly, basis: &[&DPoly], order: DenseOrder) -> DPoly {
    let mut rest = f.terms.clone();
    let mut done = Vec::new();
    while let Some((lead, c)) = rest.first() {
        match basis.iter().find(|g| divides(g.lm(), lead)) {
            Some(g) => {
                let shift = sub_exp(lead, g.lm());
                let c = c.clone();
                // the leading terms cancel exactly
                rest = DPoly::sub_scaled(&rest[1..], &c, &shift, &g.terms[1..], order);
            }
            None => {
                done.push(rest.remove(0));
            }
        }
    }
    DPoly { terms: done }
}

struct Engine {
    order: DenseOrder,
    polys: Vec<DPoly>,
    active: Vec<bool>,
    pairs: Vec<(usize, usize, Vec<u32>)>,
}

impl Engine {
    fn active_basis(&self) -> Vec<&DPoly> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect()
    }

    /// Adds the monic polynomial `h`, updating pairs and the active set.
    fn update(&mut self, h: DPoly) {
        let hi = self.polys.len();
        let lm_h = h.lm().to_vec();
        let olds: Vec<usize> = (0..hi).filter(|&g| self.active[g]).collect();

        let cands: Vec<(usize, Vec<u32>)> = olds
            .iter()
            .map(|&g| (g, lcm(&lm_h, self.polys[g].lm())))
            .collect();
        let mut kept: Vec<(usize, Vec<u32>)> = Vec::new();
        for (j, (g1, l1)) in cands.iter().enumerate() {
            let disjoint = coprime(&lm_h, self.polys[*g1].lm());
            let in_rest = cands[j + 1..].iter().any(|(_, l2)| divides(l2, l1));
            let in_kept = kept.iter().any(|(_, l2)| divides(l2, l1));
            if disjoint || (!in_rest && !in_kept) {
                kept.push((*g1, l1.clone()));
            }
        }
        let new_pairs: Vec<(usize, usize, Vec<u32>)> = kept
            .into_iter()
            .filter(|(g, _)| !coprime(&lm_h, self.polys[*g].lm()))
            .map(|(g, l)| (g, hi, l))
            .collect();

        let polys = &self.polys;
        self.pairs.retain(|(g1, g2, l)| {
            !divides(&lm_h, l)
                || lcm(polys[*g1].lm(), &lm_h) == *l
                || lcm(&lm_h, polys[*g2].lm()) == *l
        });
        self.pairs.extend(new_pairs);

        for g in olds {
            if divides(&lm_h, self.polys[g].lm()) {
                self.active[g] = false;
            }
        }
        self.polys.push(h);
        self.active.push(true);
    }

    fn s_poly(&self, i: usize, j: usize, l: &[u32]) -> DPoly {
        let (f, g) = (&self.polys[i], &self.polys[j]);
        let sf = sub_exp(l, f.lm());
        let sg = sub_exp(l, g.lm());
        let shifted_f: Vec<_> = f.terms[1..]
            .iter()
            .map(|(e, c)| (e.iter().zip(&sf).map(|(x, y)| x + y).collect(), c.clone()))
            .collect();
        DPoly {
            terms: DPoly::sub_scaled(
                &shifted_f,
                &Coefficient::one(),
                &sg,
                &g.terms[1..],
                self.order,
            ),
        }
    }
}

fn groebner_dense(input: Vec<DPoly>, order: DenseOrder) -> Vec<DPoly> {
    let mut eng = Engine {
        order,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for f in input {
        let mut h = reduce(&f, &eng.active_basis(), order);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        if h.lm().iter().all(|&e| e == 0) {
            return vec![h];
        }
        eng.update(h);
    }
    while !eng.pairs.is_empty() {
        let best = (0..eng.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&eng.pairs[a], &eng.pairs[b]);
                order
                    .cmp(&pa.2, &pb.2)
                    .then_with(|| (pa.0, pa.1).cmp(&(pb.0, pb.1)))
            })
            .expect("nonempty");
        let (i, j, l) = eng.pairs.swap_remove(best);
        let s = eng.s_poly(i, j, &l);
        let mut h = reduce(&s, &eng.active_basis(), order);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        if h.lm().iter().all(|&e| e == 0) {
            return vec![h];
        }
        eng.update(h);
    }

    // minimal basis, then inter-reduce
    let active: Vec<DPoly> = eng
        .polys
        .into_iter()
        .zip(eng.active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    let mut minimal: Vec<DPoly> = Vec::new();
    for (j, p) in active.iter().enumerate() {
        let redundant = active
            .iter()
            .enumerate()
            .any(|(k, q)| k != j && divides(q.lm(), p.lm()) && (q.lm() != p.lm() || k < j));
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut reduced: Vec<DPoly> = (0..minimal.len())
        .map(|j| {
            let others: Vec<&DPoly> = minimal
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, q)| q)
                .collect();
            let mut r = reduce(&minimal[j], &others, order);
            r.make_monic();
            r
        })
        .collect();
    reduced.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    reduced
}

/// The reduced Gröbner basis of the ideal generated by `gens`.
///
/// The result is monic, sorted by descending leading monomial and depends
/// only on the ideal and the order. The zero ideal gives an empty basis and
/// the unit ideal gives `[1]`.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> Vec<Polynomial> {
    let ring = Ring::for_polys(gens, order);
    let input = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ring.import(g))
        .collect();
    groebner_dense(input, ring.order)
        .iter()
        .map(|p| ring.export(p))
        .collect()
}

/// A finitely generated ideal together with its (lazily computed) reduced
/// Gröbner basis.
#[derive(Debug, Clone)]
pub struct IdealPresentation {
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    gb: OnceLock<Vec<Polynomial>>,
}

impl IdealPresentation {
    pub fn new(generators: Vec<Polynomial>, order: MonomialOrder) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        IdealPresentation {
            generators,
            order,
            gb: OnceLock::new(),
        }
    }

    /// Grevlex presentation.
    pub fn from_generators(generators: Vec<Polynomial>) -> Self {
        IdealPresentation::new(generators, MonomialOrder::Grevlex)
    }

    pub fn zero() -> Self {
        IdealPresentation::from_generators(Vec::new())
    }

    /// A presentation whose generators are already the reduced basis for
    /// `order`.
    fn from_reduced_basis(basis: Vec<Polynomial>, order: MonomialOrder) -> Self {
        let gb = OnceLock::new();
        gb.set(basis.clone()).expect("fresh cell");
        IdealPresentation {
            generators: basis,
            order,
            gb,
        }
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn reduced_gb(&self) -> &[Polynomial] {
        self.gb
            .get_or_init(|| buchberger(&self.generators, &self.order))
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.reduced_gb().is_empty()
    }

    pub fn is_unit(&self) -> bool {
        let gb = self.reduced_gb();
        gb.len() == 1 && gb[0].as_constant().is_some_and(|c| !c.is_zero())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.generators.iter().flat_map(|g| g.vars()).collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, self)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// The ideal with `extra` generators adjoined.
    pub fn extended(&self, extra: impl IntoIterator<Item = Polynomial>) -> IdealPresentation {
        let mut gens = self.reduced_gb().to_vec();
        gens.extend(extra);
        IdealPresentation::new(gens, self.order.clone())
    }
}

/// Remainder of `f` on division by the reduced basis of `ideal`; zero iff
/// `f` lies in the ideal.
pub fn normal_form(f: &Polynomial, ideal: &IdealPresentation) -> Polynomial {
    let gb = ideal.reduced_gb();
    if gb.is_empty() || f.is_zero() {
        return f.clone();
    }
    let ring = Ring::for_polys(gb.iter().chain(std::iter::once(f)), &ideal.order);
    let basis: Vec<DPoly> = gb.iter().map(|g| ring.import(g)).collect();
    let refs: Vec<&DPoly> = basis.iter().collect();
    ring.export(&reduce(&ring.import(f), &refs, ring.order))
}

/// `I ∩ K[keep]`, presented by its reduced grevlex basis.
pub fn elimination_ideal(ideal: &IdealPresentation, keep: &BTreeSet<Var>) -> IdealPresentation {
    let eliminate: BTreeSet<Var> = ideal
        .vars()
        .into_iter()
        .filter(|v| !keep.contains(v))
        .collect();
    if eliminate.is_empty() && ideal.order == MonomialOrder::Grevlex {
        return IdealPresentation::from_reduced_basis(
            ideal.reduced_gb().to_vec(),
            MonomialOrder::Grevlex,
        );
    }
    let order = MonomialOrder::Block { eliminate };
    let gb = buchberger(ideal.reduced_gb(), &order);
    let kept = gb
        .into_iter()
        .filter(|g| g.vars().iter().all(|v| keep.contains(v)))
        .collect();
    IdealPresentation::from_reduced_basis(kept, MonomialOrder::Grevlex)
}

fn fresh_aux(vars: &BTreeSet<Var>) -> Var {
    let next = vars
        .iter()
        .filter_map(|v| match v {
            Var::Aux(j) => Some(j + 1),
            Var::X(_) => None,
        })
        .max()
        .unwrap_or(0);
    Var::Aux(next)
}

/// `f ∈ √I`, decided by `1 ∈ I + (z f - 1)` for a fresh variable `z`.
pub fn radical_member(f: &Polynomial, ideal: &IdealPresentation) -> bool {
    if f.is_zero() {
        return true;
    }
    let mut vars = ideal.vars();
    vars.extend(f.vars());
    let z = fresh_aux(&vars);
    let mut gens = ideal.reduced_gb().to_vec();
    gens.push(&(&Polynomial::var(z) * f) - &Polynomial::one());
    IdealPresentation::new(gens, MonomialOrder::Grevlex).is_unit()
}

/// The saturation `I : h^∞`, computed as `(I + (1 - z h)) ∩ K[x]`.
pub fn saturate(ideal: &IdealPresentation, h: &Polynomial) -> IdealPresentation {
    let mut vars = ideal.vars();
    vars.extend(h.vars());
    let z = fresh_aux(&vars);
    let keep = vars;
    let mut gens = ideal.reduced_gb().to_vec();
    gens.push(&Polynomial::one() - &(&Polynomial::var(z) * h));
    elimination_ideal(&IdealPresentation::from_generators(gens), &keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldMode;
    use crate::dpoly::{parse_poly, Context};

    fn ctx() -> Context {
        Context::new(3, 1, FieldMode::Constants).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        // x = x1, y = x2, z = x3
        let s = s
            .replace('x', "x1_[0]")
            .replace('y', "x2_[0]")
            .replace('z', "x3_[0]");
        parse_poly(&s, &ctx()).unwrap()
    }

    fn ideal(gens: &[&str]) -> IdealPresentation {
        IdealPresentation::from_generators(gens.iter().map(|g| p(g)).collect())
    }

    #[test]
    fn already_reduced_basis() {
        let gb = buchberger(&[p("x - 1"), p("y - 2")], &MonomialOrder::Lex);
        assert_eq!(gb, vec![p("x - 1"), p("y - 2")]);
    }

    #[test]
    fn small_closure() {
        let i = ideal(&["x^2", "x*y"]);
        assert_eq!(i.reduced_gb(), &[p("x^2"), p("x*y")]);
        assert_eq!(i.normal_form(&p("x^2*y + x + y^3")), p("x + y^3"));
    }

    #[test]
    fn twisted_cubic() {
        let gb = buchberger(&[p("y - x^2"), p("z - x^3")], &MonomialOrder::Lex);
        let target = p("z^2 - y^3");
        let elim: Vec<_> = gb
            .iter()
            .filter(|g| !g.vars().contains(&Var::x(1, &[0])))
            .collect();
        let lex_elim =
            IdealPresentation::new(elim.into_iter().cloned().collect(), MonomialOrder::Lex);
        assert!(lex_elim.contains(&target));
    }

    #[test]
    fn normal_form_examples() {
        let i = ideal(&["x - 1", "y - 2"]);
        assert_eq!(i.normal_form(&p("x*y")), p("2"));
        assert!(i.normal_form(&p("y - 2")).is_zero());
        assert_eq!(
            IdealPresentation::zero().normal_form(&Polynomial::one()),
            Polynomial::one()
        );
    }

    #[test]
    fn elimination_examples() {
        let i = ideal(&["y - x^2", "z - x^3"]);
        let keep: BTreeSet<Var> = [Var::x(2, &[0]), Var::x(3, &[0])].into();
        let j = elimination_ideal(&i, &keep);
        let expected = ideal(&["z^2 - y^3"]);
        assert_eq!(j.reduced_gb(), expected.reduced_gb());

        let z = elimination_ideal(&IdealPresentation::zero(), &keep);
        assert!(z.is_zero_ideal());
    }

    #[test]
    fn radical_examples() {
        let i = ideal(&["x^2"]);
        assert!(radical_member(&p("x"), &i));
        assert!(!radical_member(&p("x + 1"), &i));
        assert!(radical_member(&Polynomial::zero(), &i));
        assert!(!i.contains(&p("x")));
    }

    #[test]
    fn unit_ideal() {
        let i = ideal(&["x*y - 1", "x"]);
        assert!(i.is_unit());
        assert_eq!(i.reduced_gb(), &[Polynomial::one()]);
    }

    #[test]
    fn saturation_removes_component() {
        // (x y) : x^∞ = (y)
        let s = saturate(&ideal(&["x*y"]), &p("x"));
        assert_eq!(s.reduced_gb(), &[p("y")]);
    }

    #[test]
    fn rational_mode_basis() {
        let c = Context::new(2, 1, FieldMode::Rational).unwrap();
        let f = parse_poly("t1*x1_[0]^2 - 1", &c).unwrap();
        let g = parse_poly("x1_[0]*x2_[0] - t1", &c).unwrap();
        let i = IdealPresentation::from_generators(vec![f.clone(), g.clone()]);
        assert!(i.contains(&f) && i.contains(&g));
        let expected = parse_poly("x2_[0]^2 - t1^3", &c).unwrap();
        assert!(i.contains(&expected));
    }
}
