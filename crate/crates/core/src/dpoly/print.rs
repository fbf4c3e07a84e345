use super::{grevlex_cmp, Polynomial, Syntax, Var};
use crate::coeff::Coefficient;

fn var_name(v: &Var, syntax: Syntax) -> String {
    match (v, syntax) {
        (Var::X(d), Syntax::Algebraic) => format!("x{}_{}", d.i, d.xi),
        (Var::X(d), Syntax::Differential) => {
            if d.xi.degree() == 0 {
                format!("x{}", d.i)
            } else {
                format!("d{}x{}", d.xi, d.i)
            }
        }
        (Var::Aux(j), _) => format!("_z{j}"),
    }
}

/// Absolute value of a coefficient when its sign can be pulled out in front
/// of the term. Multi-term numerators keep their sign inside parentheses.
fn split_sign(c: &Coefficient) -> (bool, Coefficient) {
    let single = c.as_rational().is_some() || c.numerator().len() == 1;
    if single && c.is_negative() {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

fn coefficient_text(c: &Coefficient) -> String {
    if c.as_rational().is_some() {
        return c.to_string();
    }
    let num = c.numerator();
    let den = c.denominator();
    if den.as_constant().is_some_and(|d| d == 1.into()) && num.len() > 1 {
        format!("({num})")
    } else {
        c.to_string()
    }
}

/// Prints `f` in the algebraic grammar, terms in descending grevlex order.
pub fn print_poly(f: &Polynomial) -> String {
    print_poly_with(f, Syntax::Algebraic)
}

pub fn print_poly_with(f: &Polynomial, syntax: Syntax) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<_> = f.terms().collect();
    terms.sort_by(|a, b| grevlex_cmp(b.0, a.0));
    let mut out = String::new();
    for (j, (mono, c)) in terms.into_iter().enumerate() {
        let (negative, abs) = split_sign(c);
        out.push_str(match (j, negative) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let factors: Vec<String> = mono
            .factors()
            .map(|(v, e)| {
                let name = var_name(v, syntax);
                if *e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if factors.is_empty() {
            out.push_str(&coefficient_text(&abs));
        } else if abs.is_one() {
            out.push_str(&factors.join("*"));
        } else {
            out.push_str(&coefficient_text(&abs));
            out.push('*');
            out.push_str(&factors.join("*"));
        }
    }
    out
}
