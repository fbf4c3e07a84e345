//! Ideal and kernel files.
//!
//! ```text
//! # comment
//! m=2 n=1 gamma=1 mode=constants length=1
//! x1_[1,0] - 1
//! x1_[0,1] - x1_[0,0]
//! ```
//!
//! The first non-comment line is the header. `mode` defaults to
//! `constants`; `length` is only read for kernel files and defaults to
//! `gamma`. Every following line holds one polynomial.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::coeff::FieldMode;
use crate::dpoly::{parse_poly, print_poly, Context, Polynomial};
use crate::error::{Error, Result};
use crate::groebner::IdealPresentation;
use crate::kernels::KernelPresentation;

#[derive(Debug, Clone)]
pub struct IdealFile {
    pub ctx: Context,
    /// All variables lie in `Γ(gamma)`.
    pub gamma: u32,
    pub length: Option<u32>,
    pub generators: Vec<Polynomial>,
}

impl IdealFile {
    pub fn ideal(&self) -> IdealPresentation {
        IdealPresentation::from_generators(self.generators.clone())
    }

    pub fn kernel(&self) -> Result<KernelPresentation> {
        KernelPresentation::new(
            self.ctx,
            self.length.unwrap_or(self.gamma),
            self.generators.clone(),
        )
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn line_error(line: usize, e: Error) -> Error {
    match e {
        Error::Syntax { pos, msg } => Error::syntax(pos, format!("line {line}: {msg}")),
        other => other,
    }
}

fn header_field<T: std::str::FromStr>(
    fields: &BTreeMap<&str, &str>,
    key: &str,
    line: usize,
) -> Result<Option<T>> {
    fields
        .get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| Error::syntax(0, format!("line {line}: bad value `{v}` for `{key}`")))
        })
        .transpose()
}

pub fn parse_ideal_file(text: &str) -> Result<IdealFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(j, l)| (j + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::syntax(0, "missing header line `m=.. n=.. gamma=..`"))?;

    let mut fields = BTreeMap::new();
    for item in header.split_whitespace() {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            Error::syntax(
                0,
                format!("line {hline}: expected key=value, found `{item}`"),
            )
        })?;
        if !matches!(k, "m" | "n" | "gamma" | "mode" | "length") {
            return Err(Error::syntax(
                0,
                format!("line {hline}: unknown header field `{k}`"),
            ));
        }
        if fields.insert(k, v).is_some() {
            return Err(Error::syntax(
                0,
                format!("line {hline}: repeated header field `{k}`"),
            ));
        }
    }
    let require = |key: &str| -> Result<usize> {
        header_field(&fields, key, hline)?
            .ok_or_else(|| Error::syntax(0, format!("line {hline}: header needs `{key}=`")))
    };
    let m = require("m")?;
    let n = require("n")?;
    let gamma = require("gamma")? as u32;
    let mode: FieldMode = header_field(&fields, "mode", hline)?.unwrap_or(FieldMode::Constants);
    let length: Option<u32> = header_field(&fields, "length", hline)?;
    let ctx = Context::new(n, m, mode)?;

    let mut generators = Vec::new();
    for (line, src) in lines {
        let g = parse_poly(src, &ctx).map_err(|e| line_error(line, e))?;
        if let Some(d) = g
            .vars()
            .iter()
            .filter_map(|v| v.as_diff())
            .find(|d| d.level() > gamma)
        {
            return Err(Error::IndexOutOfRange(format!(
                "line {line}: {d} lies outside Γ({gamma})"
            )));
        }
        generators.push(g);
    }
    Ok(IdealFile {
        ctx,
        gamma,
        length,
        generators,
    })
}

pub fn write_ideal_file(file: &IdealFile) -> String {
    let mut out = format!(
        "m={} n={} gamma={} mode={}",
        file.ctx.m,
        file.ctx.n,
        file.gamma,
        file.ctx.mode.as_str()
    );
    if let Some(r) = file.length {
        let _ = write!(out, " length={r}");
    }
    out.push('\n');
    for g in &file.generators {
        out.push_str(&print_poly(g));
        out.push('\n');
    }
    out
}

/// Formula files: the text with `#` comments removed and lines joined.
pub fn read_formula_text(text: &str) -> String {
    text.lines()
        .map(strip_comment)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}
