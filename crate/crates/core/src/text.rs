//! Text formats for series, polyvectors, forms and matrices.
//!
//! A series is a `+`-separated sum of terms `coeff*x^2*y`; complex
//! coefficients are parenthesised. Polyvector and form terms carry one more
//! factor naming the frame, such as `Lx^dy`: `Lx` is the log slot `x d/dx`
//! (or `dx/x`) of a log coordinate, `dy` is `d/dy` (or `dy`). Writing `dx`
//! for a log coordinate means the coordinate frame and is converted.

use crate::error::{Error, ParseError, Result};
use crate::linalg::Matrix;
use crate::poisson::{LogForm, Polyvector};
use crate::scalar::Scalar;
use crate::series::{LaurentPoly, MultiIndex, Ring};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::new(msg))
}

/// Splits on `sep` outside brackets and parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Terms of a signed sum; a `-` starts a new term unless it follows an
/// operator.
fn split_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut prev: Option<char> = None;
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && c == '+' {
            out.push(std::mem::take(&mut cur));
        } else if depth == 0 && c == '-' && !cur.is_empty() && !matches!(prev, Some('+' | '*' | '^' | '(')) {
            out.push(std::mem::take(&mut cur));
            cur.push('-');
        } else {
            cur.push(c);
        }
        prev = Some(c);
    }
    out.push(cur);
    out
}

fn compact(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn label_index(labels: &[String], name: &str) -> Option<usize> {
    labels.iter().position(|l| l == name)
}

/// Parsed term: coefficient, exponent, frame slots (index, coordinate frame).
struct Term {
    coeff: Scalar,
    mono: MultiIndex,
    frame: Vec<(usize, bool)>,
}

fn parse_term(t: &str, labels: &[String], allow_frame: bool) -> Result<Term> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    if body.is_empty() {
        return Err(perr(format!("empty term in `{t}`")));
    }
    let mut coeff = Scalar::ONE;
    let mut exps = [0i32; crate::series::MAX_COORDS];
    let mut frame: Option<Vec<(usize, bool)>> = None;
    for f in split_top(body, '*') {
        if f.is_empty() {
            return Err(perr(format!("empty factor in `{t}`")));
        }
        if f.starts_with('L') || f.starts_with('d') {
            if !allow_frame {
                return Err(perr(format!("frame factor `{f}` is not allowed here")));
            }
            if frame.is_some() {
                return Err(perr(format!("term `{t}` has two frame factors")));
            }
            let mut slots = Vec::new();
            for tok in f.split('^') {
                let (std, name) = if let Some(n) = tok.strip_prefix('L') {
                    (false, n)
                } else if let Some(n) = tok.strip_prefix('d') {
                    (true, n)
                } else {
                    return Err(perr(format!("bad frame token `{tok}`")));
                };
                let k = label_index(labels, name).ok_or_else(|| perr(format!("unknown coordinate `{name}`")))?;
                slots.push((k, std));
            }
            frame = Some(slots);
            continue;
        }
        let (base, exp) = match f.split_once('^') {
            Some((b, e)) => (b, Some(e)),
            None => (f, None),
        };
        if let Some(k) = label_index(labels, base) {
            let e: i32 = match exp {
                Some(e) => e.parse().map_err(|_| perr(format!("bad exponent in `{f}`")))?,
                None => 1,
            };
            exps[k] += e;
        } else {
            if exp.is_some() {
                return Err(perr(format!("unknown coordinate `{base}`")));
            }
            let c: Scalar = f.parse().map_err(|e: ParseError| {
                if f.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
                    perr(format!("unknown coordinate `{f}`"))
                } else {
                    Error::Parse(e)
                }
            })?;
            coeff = &coeff * &c;
        }
    }
    if exps.iter().any(|&e| e.abs() > i8::MAX as i32) {
        return Err(perr(format!("exponent out of range in `{t}`")));
    }
    if neg {
        coeff = -coeff;
    }
    Ok(Term { coeff, mono: MultiIndex::from_slice(&exps[..labels.len()]), frame: frame.unwrap_or_default() })
}

fn check_labels(ring: Ring, labels: &[String]) -> Result<()> {
    if labels.len() != ring.n() {
        return Err(Error::InvalidArgument(format!("{} labels for {} coordinates", labels.len(), ring.n())));
    }
    Ok(())
}

pub fn parse_poly(s: &str, ring: Ring, labels: &[String]) -> Result<LaurentPoly> {
    check_labels(ring, labels)?;
    let s = compact(s);
    if s.is_empty() {
        return Err(perr("empty series"));
    }
    let mut terms = Vec::new();
    for t in split_terms(&s) {
        let term = parse_term(&t, labels, false)?;
        terms.push((term.mono, term.coeff));
    }
    LaurentPoly::try_from_terms(ring, terms)
}

/// Terms with frame slots, the coordinate-frame slots already converted;
/// `shift` is the exponent change per converted log slot.
fn parse_graded_terms(s: &str, ring: Ring, labels: &[String], grade: usize, shift: i32) -> Result<Vec<(Vec<usize>, LaurentPoly)>> {
    check_labels(ring, labels)?;
    let s = compact(s);
    if s.is_empty() {
        return Err(perr("empty expression"));
    }
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for t in split_terms(&s) {
        let term = parse_term(&t, labels, true)?;
        if term.frame.len() != grade {
            return Err(perr(format!("term `{t}` has grade {}, expected {grade}", term.frame.len())));
        }
        let mut mono = term.mono;
        for &(k, std) in &term.frame {
            if !std && !ring.is_log(k) {
                return Err(perr(format!("`L{}` names a coordinate outside the divisor", labels[k])));
            }
            if std && ring.is_log(k) {
                mono = mono.with(k, mono.get(k) + shift);
            }
        }
        let idx: Vec<usize> = term.frame.iter().map(|&(k, _)| k).collect();
        let f = LaurentPoly::try_from_terms(ring, [(mono, term.coeff)])?;
        out.push((idx, f));
    }
    Ok(out)
}

pub fn parse_polyvector(s: &str, ring: Ring, labels: &[String], grade: usize) -> Result<Polyvector> {
    let mut p = Polyvector::zero(ring, grade);
    for (idx, f) in parse_graded_terms(s, ring, labels, grade, -1)? {
        p.add_term(&idx, &f);
    }
    Ok(p)
}

pub fn parse_form(s: &str, ring: Ring, labels: &[String], grade: usize) -> Result<LogForm> {
    let mut p = LogForm::zero(ring, grade);
    for (idx, f) in parse_graded_terms(s, ring, labels, grade, 1)? {
        p.add_term(&idx, &f);
    }
    Ok(p)
}

/// Items of `[a,b,...]` (or `(a,b,...)`), split at top level.
pub fn parse_list(s: &str) -> Result<Vec<String>> {
    let s = compact(s);
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .or_else(|| s.strip_prefix('(').and_then(|t| t.strip_suffix(')')))
        .ok_or_else(|| perr(format!("expected a bracketed list, got `{s}`")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    Ok(split_top(inner, ',').into_iter().map(str::to_string).collect())
}

/// `[[a,b],[c,d]]` over Q(i).
pub fn parse_matrix(s: &str) -> Result<Matrix> {
    let rows = parse_list(s)?;
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let vals = parse_list(&r)?.iter().map(|x| x.parse::<Scalar>().map_err(Error::Parse)).collect::<Result<Vec<_>>>()?;
        out.push(vals);
    }
    let c = out.first().map_or(0, |r| r.len());
    if out.iter().any(|r| r.len() != c) {
        return Err(perr("matrix rows have different lengths"));
    }
    Ok(Matrix::from_rows(out))
}

pub fn parse_scalar_list(s: &str) -> Result<Vec<Scalar>> {
    parse_list(s)?.iter().map(|x| x.parse::<Scalar>().map_err(Error::Parse)).collect()
}

pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    parse_list(s)?
        .iter()
        .map(|x| x.parse::<i64>().map_err(|_| perr(format!("`{x}` is not an integer"))))
        .collect()
}

/// Square matrix of entries, each parsed by `f`.
pub fn parse_entry_matrix<T>(s: &str, mut f: impl FnMut(&str) -> Result<T>) -> Result<(usize, Vec<T>)> {
    let rows = parse_list(s)?;
    let e = rows.len();
    let mut out = Vec::with_capacity(e * e);
    for r in rows {
        let cells = parse_list(&r)?;
        if cells.len() != e {
            return Err(perr("entry matrix must be square"));
        }
        for c in cells {
            out.push(f(&c)?);
        }
    }
    Ok((e, out))
}
