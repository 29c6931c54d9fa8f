//! Rendering of canonical expressions in the input grammar.

use crate::algebra::{Atom, Coefficient, Expr, JetVar, MultiIndex, Term};
use crate::jetcalc::BvModel;

fn derivspec(model: &BvModel, m: &MultiIndex) -> String {
    if model.dim() == 1 {
        "x".repeat(m.0[0] as usize)
    } else {
        let words: Vec<String> = m.directions().iter().map(|d| format!("x{}", d + 1)).collect();
        if words.len() == 1 {
            words[0].clone()
        } else {
            format!("{{{}}}", words.join(" "))
        }
    }
}

pub fn print_jet(model: &BvModel, v: &JetVar) -> String {
    let mut s = model.field_name(v.field).to_string();
    if v.dagger {
        s.push('†');
    }
    if !v.index.is_zero() {
        s.push('_');
        s.push_str(&derivspec(model, &v.index));
    }
    s
}

fn print_atom(model: &BvModel, a: &Atom) -> String {
    match a {
        Atom::Base(j) => {
            if model.dim() == 1 {
                "x".to_string()
            } else {
                format!("x{}", j + 1)
            }
        }
        Atom::Jet(v) => print_jet(model, v),
        Atom::Trans(f, v) => format!("{}({})", f.name(), print_jet(model, v)),
        Atom::Frozen(fr) => {
            let ch: Vec<String> =
                fr.channels.iter().map(|(l, m)| format!("{}:{}", l, derivspec(model, m))).collect();
            format!("fd[{}]({})", ch.join(","), print_term(model, &fr.inner))
        }
    }
}

/// A monic term as a `*`-separated product in canonical order.
pub fn print_term(model: &BvModel, t: &Term) -> String {
    if t.is_one() {
        return "1".to_string();
    }
    let parts: Vec<String> = t
        .raw()
        .map(|(f, k)| {
            let mut s = print_atom(model, &f.atom);
            if f.site != 0 {
                s.push_str(&format!("@{}", f.site));
            }
            if k > 1 {
                s.push_str(&format!("^{k}"));
            }
            s
        })
        .collect();
    parts.join("*")
}

/// Splits a coefficient into a sign and a printable magnitude.
pub fn signed_coefficient(c: &Coefficient) -> (bool, String) {
    let s = c.to_string();
    if c.terms().count() == 1 {
        if let Some(rest) = s.strip_prefix('-') {
            return (true, rest.to_string());
        }
        (false, s)
    } else {
        (false, format!("({s})"))
    }
}

/// `c·body` with the sign pulled out, e.g. `(true, "3/2*q")`.
pub fn scaled(c: &Coefficient, body: &str, body_is_one: bool) -> (bool, String) {
    let (neg, mag) = signed_coefficient(c);
    let text = if body_is_one {
        mag
    } else if mag == "1" {
        body.to_string()
    } else {
        format!("{mag}*{body}")
    };
    (neg, text)
}

/// Joins signed summands as `a - b + c`.
pub fn join_signed(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (k, (neg, s)) in parts.into_iter().enumerate() {
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&s);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_expr(model: &BvModel, e: &Expr) -> String {
    join_signed(e.iter().map(|(t, c)| scaled(c, &print_term(model, t), t.is_one())))
}
