//! Exact computations for differentially closed fields with `m` commuting
//! derivations: prolongation varieties, differential kernels and their
//! prolongations, Ackermann-type realization bounds, and checkers for the
//! geometric axiom conditions.
//!
//! Coefficients come from `K = ℚ` with trivial derivations or from
//! `K = ℚ(t_1, …, t_m)` with `δ_k = ∂/∂t_k`, see [`FieldMode`].

pub mod axioms;
pub mod bounds;
pub mod coeff;
pub mod dpoly;
pub mod error;
pub mod groebner;
pub mod indexcomb;
pub mod io;
pub mod kernels;
pub mod prolong;
pub mod report;

pub use axioms::{
    axiom_shape, compile_formula, containment_check, counterexample_demo, AxiomShape,
    CompiledFormula, ContainmentVerdict, CounterexampleReport, DiffFormula, Formula, Shape,
};
pub use bounds::{ackermann, bound_c, closed_form, BigNat, BitBudget};
pub use coeff::{Coefficient, FieldMode};
pub use dpoly::{
    parse_poly, parse_poly_with, print_poly, print_poly_with, Context, DiffVar, Monomial,
    Polynomial, Syntax, Var,
};
pub use error::{Error, Result};
pub use groebner::{
    elimination_ideal, normal_form, radical_member, saturate, IdealPresentation, MonomialOrder,
};
pub use indexcomb::{coordinate_maps, gamma_set, CoordinateMaps, GammaSet, MultiIndex};
pub use io::{parse_ideal_file, write_ideal_file, IdealFile};
pub use kernels::{
    kernel_prolong_once, kernel_prolong_to, kernel_validate, realization_bound, KernelPresentation,
    Obstruction, ProlongResult, ProlongToResult, ValidationReport,
};
pub use prolong::{
    point_in_prolongation, prolong_delta, prolong_one, tau_condition, DiffPoint, ProlongationSystem,
};
