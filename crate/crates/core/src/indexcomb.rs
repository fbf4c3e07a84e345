//! Multi-indices `ξ ∈ ℕ^m`, the sets `Γ(r) = {ξ : deg ξ ≤ r}` and the
//! coordinate maps π, ψ, φ on `K^alpha`.
//!
//! The canonical order on multi-indices is by degree, then by descending
//! lexicographic order of the entries, so for `m = 2` the first elements are
//! `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2)`. Coordinates on `K^{n |Γ(r)|}`
//! are laid out multi-index major: position `rank(ξ) * n + (i - 1)` holds
//! `x_i^ξ`. Because `Γ(r - 1)` is an initial segment of `Γ(r)` in this
//! order, π and ψ are projections onto leading coordinates.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bounds::{self, BitBudget};
use crate::error::{Error, Result};

/// Largest Γ set or coordinate layout that will be materialized.
pub const MAX_MATERIALIZED: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    /// The unit index with a one in (1-based) position `k`.
    pub fn unit(m: usize, k: usize) -> Self {
        let mut v = vec![0; m];
        v[k - 1] = 1;
        MultiIndex(v)
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `ξ + 𝐤` for 1-based `k`.
    pub fn shifted(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v[k - 1] += 1;
        MultiIndex(v)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, e) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// The materialized set `Γ(r) ⊂ ℕ^m` in canonical order.
#[derive(Debug, Clone)]
pub struct GammaSet {
    m: usize,
    r: u32,
    elements: Vec<MultiIndex>,
    rank: HashMap<MultiIndex, usize>,
}

pub fn gamma_set(m: usize, r: u32) -> Result<GammaSet> {
    if m == 0 {
        return Err(Error::InvalidDimension("m must be at least 1".into()));
    }
    let size = bounds::binomial(&(r as u64 + m as u64).into(), m as u64);
    let size = size
        .to_usize()
        .filter(|&s| s <= MAX_MATERIALIZED)
        .ok_or_else(|| Error::Resource(format!("Γ({r}) in ℕ^{m} has {size} elements")))?;
    let mut elements = Vec::with_capacity(size);
    let mut scratch = vec![0u32; m];
    for d in 0..=r {
        push_degree(&mut elements, &mut scratch, 0, d);
    }
    let rank = elements
        .iter()
        .enumerate()
        .map(|(j, xi)| (xi.clone(), j))
        .collect();
    Ok(GammaSet {
        m,
        r,
        elements,
        rank,
    })
}

/// Appends every index of degree `remaining` over positions `pos..` in
/// descending lexicographic order.
fn push_degree(out: &mut Vec<MultiIndex>, scratch: &mut [u32], pos: usize, remaining: u32) {
    if pos + 1 == scratch.len() {
        scratch[pos] = remaining;
        out.push(MultiIndex(scratch.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        scratch[pos] = e;
        push_degree(out, scratch, pos + 1, remaining - e);
    }
    scratch[pos] = 0;
}

impl GammaSet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[MultiIndex] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &MultiIndex> {
        self.elements.iter()
    }

    pub fn position(&self, xi: &MultiIndex) -> Option<usize> {
        self.rank.get(xi).copied()
    }

    pub fn contains(&self, xi: &MultiIndex) -> bool {
        self.rank.contains_key(xi)
    }
}

/// Coordinate bookkeeping for the axiom instance in `n` coordinates with `m`
/// derivations, with `C = C(1, m, n)`.
#[derive(Debug, Clone, Serialize)]
pub struct CoordinateMaps {
    pub n: usize,
    pub m: usize,
    pub c: u32,
    pub alpha: usize,
    pub beta: usize,
    /// π: positions of the `Γ(C - 1)` coordinates (the first `beta`).
    pub pi_indices: Vec<usize>,
    /// ψ: positions of the `Γ(1)` coordinates (the first `n (m + 1)`).
    pub psi_indices: Vec<usize>,
    /// φ: block 0 is π; block k sends `x_i^ξ` to the position of `x_i^{ξ+𝐤}`.
    pub phi_blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    layout: GammaSet,
}

pub fn coordinate_maps(n: usize, m: usize, budget: BitBudget) -> Result<CoordinateMaps> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidDimension("n and m must be at least 1".into()));
    }
    let c = bounds::bound_c(1, m as u64, n as u64, budget)?;
    let c = c
        .to_u32()
        .ok_or_else(|| Error::Resource(format!("C(1, {m}, {n}) = {c} is too large to lay out")))?;
    let layout = gamma_set(m, c)?;
    let lower = gamma_set(m, c - 1)?;
    let alpha = n
        .checked_mul(layout.len())
        .filter(|&a| a <= MAX_MATERIALIZED)
        .ok_or_else(|| Error::Resource(format!("alpha({n}, {m}) is too large to lay out")))?;
    let beta = n * lower.len();
    let pos = |i: usize, xi: &MultiIndex| layout.position(xi).expect("index in layout") * n + i;

    let pi_indices: Vec<usize> = (0..beta).collect();
    let psi_indices: Vec<usize> = (0..n * (m + 1)).collect();
    let mut phi_blocks = vec![pi_indices.clone()];
    for k in 1..=m {
        let block = lower
            .iter()
            .flat_map(|xi| {
                let shifted = xi.shifted(k);
                (0..n).map(move |i| (i, shifted.clone()))
            })
            .map(|(i, xi)| pos(i, &xi))
            .collect();
        phi_blocks.push(block);
    }
    Ok(CoordinateMaps {
        n,
        m,
        c,
        alpha,
        beta,
        pi_indices,
        psi_indices,
        phi_blocks,
        layout,
    })
}

impl CoordinateMaps {
    /// Position of `x_i^ξ` (1-based `i`) in the `K^alpha` layout.
    pub fn position(&self, i: usize, xi: &MultiIndex) -> Option<usize> {
        if i == 0 || i > self.n {
            return None;
        }
        self.layout.position(xi).map(|p| p * self.n + (i - 1))
    }

    /// The `(i, ξ)` label of a coordinate position.
    pub fn label(&self, position: usize) -> Option<(usize, &MultiIndex)> {
        let xi = self.layout.elements().get(position / self.n)?;
        Some((position % self.n + 1, xi))
    }

    pub fn layout(&self) -> &GammaSet {
        &self.layout
    }

    pub fn apply_pi<T: Clone>(&self, point: &[T]) -> Vec<T> {
        self.pi_indices.iter().map(|&p| point[p].clone()).collect()
    }

    pub fn apply_psi<T: Clone>(&self, point: &[T]) -> Vec<T> {
        self.psi_indices.iter().map(|&p| point[p].clone()).collect()
    }

    /// φ as a map `K^alpha → K^{beta (m + 1)}`.
    pub fn apply_phi<T: Clone>(&self, point: &[T]) -> Vec<T> {
        self.phi_blocks
            .iter()
            .flat_map(|b| b.iter().map(|&p| point[p].clone()))
            .collect()
    }
}
