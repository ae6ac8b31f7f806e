//! Text formats used on the command line.
//!
//! Weights are in fundamental-weight coordinates: `"1/2,3"` is the weight
//! with `<lambda, alpha_1^vee> = 1/2` and `<lambda, alpha_2^vee> = 3`.

use crate::error::{Error, Result};
use crate::rational::parse_q;
use crate::root_datum::Weight;
use crate::trunc_weights::TruncatedWeight;

pub fn parse_weight(s: &str) -> Result<Weight> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.trim().is_empty() {
        return Err(Error::Parse("empty weight".into()));
    }
    s.split(',').map(|x| parse_q(x.trim())).collect::<Result<Vec<_>>>().map(Weight)
}

/// `"[3],[0]"` or `"[[3],[0]]"`: one bracketed group per component.
pub fn parse_truncated_weight(s: &str) -> Result<TruncatedWeight> {
    let mut t = s.trim();
    if t.starts_with("[[") && t.ends_with("]]") {
        t = &t[1..t.len() - 1];
    }
    let mut parts = Vec::new();
    let mut rest = t;
    loop {
        rest = rest.trim_start();
        let Some(body) = rest.strip_prefix('[') else {
            return Err(Error::Parse(format!("expected '[' in {s:?}")));
        };
        let Some(end) = body.find(']') else {
            return Err(Error::Parse(format!("unclosed '[' in {s:?}")));
        };
        parts.push(parse_weight(&body[..end])?);
        rest = body[end + 1..].trim_start();
        match rest.strip_prefix(',') {
            Some(r) => rest = r,
            None if rest.is_empty() => break,
            None => return Err(Error::Parse(format!("unexpected {rest:?} in {s:?}"))),
        }
    }
    TruncatedWeight::new(parts)
}

/// `"2,1,3,2"` (1-based simple reflections) to a 0-based word. `""` and
/// `"e"` are the identity.
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| match x.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Error::Parse(format!("bad simple reflection {x:?} (indices start at 1)"))),
        })
        .collect()
}

/// `"1,1"`: coordinates over the simple roots.
pub fn parse_beta(s: &str) -> Result<Vec<i64>> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad root coordinate {x:?}"))))
        .collect()
}
