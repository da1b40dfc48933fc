//! Line-oriented algebra definition files.
//!
//! ```text
//! algebra tri2
//! basis e11:0 e22:0 e12:1
//! unit e11 + e22
//! product e11*e12 = e12
//! delta e22 -> e12
//! pairing e11.e12 = 1
//! end
//! ```
//!
//! `#` starts a comment. Unlisted products, images and pairings are zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::basis::{Element, GradedBasis};
use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::scalar::{format_scalar, parse_scalar, Scalar};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Parses `k*name` terms joined by `+` and `-`, or the literal `0`.
pub fn parse_element(basis: &GradedBasis, text: &str) -> std::result::Result<Element, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty element".into());
    }
    if s == "0" {
        return Ok(Element::zero());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut out = Element::zero();
    for t in terms {
        let (neg, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (coef, name) = match body.split_once('*') {
            Some((c, n)) => {
                let c = parse_scalar(c).ok_or_else(|| format!("bad scalar `{c}`"))?;
                (c, n)
            }
            None => (crate::scalar::one(), body),
        };
        let idx = basis
            .index_of(name)
            .ok_or_else(|| format!("unknown basis vector `{name}`"))?;
        out.add_term(idx, if neg { -coef } else { coef });
    }
    Ok(out)
}

pub fn parse_algebra_file(text: &str) -> Result<GradedAlgebra> {
    let mut name: Option<String> = None;
    let mut basis_entries: Vec<(String, i64)> = Vec::new();
    let mut unit_line: Option<(usize, String)> = None;
    let mut products: Vec<(usize, String)> = Vec::new();
    let mut deltas: Vec<(usize, String)> = Vec::new();
    let mut pairings: Vec<(usize, String)> = Vec::new();
    let mut ended = false;
    let mut last_line = 0;

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if ended {
            return Err(err(line_no, "content after `end`"));
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        if name.is_none() && kw != "algebra" {
            return Err(err(line_no, "file must start with `algebra <name>`"));
        }
        match kw {
            "algebra" => {
                if name.is_some() {
                    return Err(err(line_no, "duplicate `algebra` line"));
                }
                if !valid_name(rest) {
                    return Err(err(line_no, format!("invalid algebra name `{rest}`")));
                }
                name = Some(rest.to_string());
            }
            "basis" => {
                if !products.is_empty()
                    || !deltas.is_empty()
                    || !pairings.is_empty()
                    || unit_line.is_some()
                {
                    return Err(err(line_no, "`basis` must precede all other sections"));
                }
                if rest.is_empty() {
                    return Err(err(line_no, "empty basis line"));
                }
                for tok in rest.split_whitespace() {
                    let (nm, deg) = tok.split_once(':').ok_or_else(|| {
                        err(line_no, format!("expected name:degree, got `{tok}`"))
                    })?;
                    if !valid_name(nm) {
                        return Err(err(line_no, format!("invalid basis name `{nm}`")));
                    }
                    let deg: i64 = deg
                        .parse()
                        .map_err(|_| err(line_no, format!("invalid degree `{deg}` for `{nm}`")))?;
                    if basis_entries.iter().any(|(x, _)| x == nm) {
                        return Err(err(line_no, format!("duplicate basis name `{nm}`")));
                    }
                    basis_entries.push((nm.to_string(), deg));
                }
            }
            "unit" => {
                if unit_line.is_some() {
                    return Err(err(line_no, "duplicate `unit` line"));
                }
                unit_line = Some((line_no, rest.to_string()));
            }
            "product" => products.push((line_no, rest.to_string())),
            "delta" => deltas.push((line_no, rest.to_string())),
            "pairing" => pairings.push((line_no, rest.to_string())),
            "end" => {
                if !rest.is_empty() {
                    return Err(err(line_no, "unexpected text after `end`"));
                }
                ended = true;
            }
            other => return Err(err(line_no, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| err(last_line.max(1), "missing `algebra` line"))?;
    if !ended {
        return Err(err(last_line.max(1), "missing `end`"));
    }
    if basis_entries.is_empty() {
        return Err(err(last_line, "missing `basis` line"));
    }
    let b = Arc::new(GradedBasis::new(basis_entries).map_err(|e| err(1, e.to_string()))?);
    let elem = |line: usize, s: &str| parse_element(&b, s).map_err(|m| err(line, m));
    let index = |line: usize, s: &str| {
        b.index_of(s.trim())
            .ok_or_else(|| err(line, format!("unknown basis vector `{}`", s.trim())))
    };

    let mut table: BTreeMap<(usize, usize), Element> = BTreeMap::new();
    for (line, p) in &products {
        let (lhs, rhs) = p
            .split_once('=')
            .ok_or_else(|| err(*line, "expected `a*b = element`"))?;
        let (x, y) = lhs
            .split_once('*')
            .ok_or_else(|| err(*line, "expected `a*b` on the left"))?;
        let key = (index(*line, x)?, index(*line, y)?);
        if table.insert(key, elem(*line, rhs)?).is_some() {
            return Err(err(*line, "duplicate product"));
        }
    }
    let mut alg = GradedAlgebra::new(name, b.clone(), table).map_err(|e| err(1, e.to_string()))?;
    if let Some((line, u)) = unit_line {
        alg = alg
            .with_unit(elem(line, &u)?)
            .map_err(|e| err(line, e.to_string()))?;
    }
    if !deltas.is_empty() {
        let mut images: BTreeMap<usize, Element> = BTreeMap::new();
        for (line, d) in &deltas {
            let (lhs, rhs) = d
                .split_once("->")
                .ok_or_else(|| err(*line, "expected `a -> element`"))?;
            if images
                .insert(index(*line, lhs)?, elem(*line, rhs)?)
                .is_some()
            {
                return Err(err(*line, "duplicate delta image"));
            }
        }
        let op = LinearOperator::new(b.clone(), 1, images).map_err(|e| err(1, e.to_string()))?;
        alg = alg.with_delta(op).map_err(|e| err(1, e.to_string()))?;
    }
    if !pairings.is_empty() {
        let mut entries: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (line, p) in &pairings {
            let (lhs, rhs) = p
                .split_once('=')
                .ok_or_else(|| err(*line, "expected `a.b = scalar`"))?;
            let (x, y) = lhs
                .split_once('.')
                .ok_or_else(|| err(*line, "expected `a.b` on the left"))?;
            let (i, j) = (index(*line, x)?, index(*line, y)?);
            let c = parse_scalar(rhs)
                .ok_or_else(|| err(*line, format!("bad scalar `{}`", rhs.trim())))?;
            for key in [(i, j), (j, i)] {
                if let Some(prev) = entries.get(&key) {
                    if *prev != c {
                        return Err(err(*line, "conflicting pairing entries"));
                    }
                }
            }
            entries.insert((i, j), c);
        }
        alg = alg
            .with_pairing(entries)
            .map_err(|e| err(1, e.to_string()))?;
    }
    Ok(alg)
}

/// Canonical text form; parsing it back yields an equal algebra.
pub fn serialize_algebra(alg: &GradedAlgebra) -> String {
    let b = alg.basis();
    let mut out = String::new();
    let _ = writeln!(out, "algebra {}", alg.name());
    let entries: Vec<String> = (0..b.dim())
        .map(|i| format!("{}:{}", b.name(i), b.degree(i)))
        .collect();
    let _ = writeln!(out, "basis {}", entries.join(" "));
    if let Some(u) = alg.unit() {
        let _ = writeln!(out, "unit {}", b.display(u));
    }
    for ((i, j), p) in alg.products() {
        let _ = writeln!(
            out,
            "product {}*{} = {}",
            b.name(i),
            b.name(j),
            b.display(p)
        );
    }
    if let Some(d) = alg.delta() {
        for (i, img) in d.images() {
            let _ = writeln!(out, "delta {} -> {}", b.name(i), b.display(img));
        }
    }
    if let Some(p) = alg.pairing() {
        for (&(i, j), c) in p {
            if i <= j {
                let _ = writeln!(
                    out,
                    "pairing {}.{} = {}",
                    b.name(i),
                    b.name(j),
                    format_scalar(c)
                );
            }
        }
    }
    out.push_str("end\n");
    out
}
