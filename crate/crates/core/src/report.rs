//! Serde helpers: polynomials serialize as strings in the algebraic grammar
//! and big naturals as decimal strings.

use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::bounds::BigNat;
use crate::dpoly::{print_poly, Polynomial};

pub fn ser_poly<S: Serializer>(p: &Polynomial, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&print_poly(p))
}

pub fn ser_polys<S: Serializer>(ps: &[Polynomial], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(ps.len()))?;
    for p in ps {
        seq.serialize_element(&print_poly(p))?;
    }
    seq.end()
}

pub fn ser_bignat<S: Serializer>(v: &BigNat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

pub fn ser_opt_bignat<S: Serializer>(v: &Option<BigNat>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_str_radix(10)),
        None => s.serialize_none(),
    }
}

pub fn ser_opt_poly<S: Serializer>(p: &Option<Polynomial>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_some(&print_poly(p)),
        None => s.serialize_none(),
    }
}
