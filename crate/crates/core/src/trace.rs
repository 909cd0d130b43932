//! Line-oriented trace files: one header record, then one request per line.
//!
//! Grammar (exactly one space between tokens, no trailing spaces):
//!
//! ```text
//! model=<tag> n=<n> k=<k> b=<b> eps=<p>/<q> w=<w0,...,w(n-1)> c0=<c0,...>
//! <u> <v>
//! <u> <v>
//! ...
//! ```
//!
//! `model` is one of `online2`, `fully_dynamic2`, `delta`; vertex ids are
//! 0-based and must differ within a request. The writer emits this exact
//! canonical form, so `write(read(s)) == s` for any canonical `s`, and
//! `read(write(t)) == t` for any valid trace `t`. All header fields are
//! re-validated through the instance constructor; `b` must match the
//! derived capacity.

use crate::instance::{Instance, Model, Request};
use crate::ratio::Ratio;
use crate::{Color, Error, Result, Vertex, Weight};

/// Serializes an instance plus request list in canonical form.
pub fn write_trace(inst: &Instance, requests: &[Request]) -> String {
    let w: Vec<String> = inst.w.iter().map(|x| x.to_string()).collect();
    let c0: Vec<String> = inst.c0.iter().map(|x| x.to_string()).collect();
    let mut out = format!(
        "model={} n={} k={} b={} eps={}/{} w={} c0={}\n",
        inst.model.tag(),
        inst.n,
        inst.k,
        inst.b,
        inst.eps.num(),
        inst.eps.den(),
        w.join(","),
        c0.join(","),
    );
    for r in requests {
        out.push_str(&format!("{} {}\n", r.u, r.v));
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field<'a>(tokens: &[(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    tokens
        .iter()
        .find(|(k, _)| *k == key)
        .map(|&(_, v)| v)
        .ok_or_else(|| parse_err(1, format!("missing header field `{key}=`")))
}

fn parse_num<T: std::str::FromStr>(line: usize, what: &str, s: &str) -> Result<T> {
    s.parse::<T>().map_err(|_| parse_err(line, format!("invalid {what} `{s}`")))
}

/// Parses a trace. Header problems report line 1; request problems report
/// their own line number. Instance-level invariant violations (odd total
/// weight, unbalanced initial coloring, ...) surface as instance errors.
pub fn read_trace(text: &str) -> Result<(Instance, Vec<Request>)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty trace"))?;

    let tokens: Vec<(&str, &str)> = header
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(|t| t.split_once('=').ok_or_else(|| parse_err(1, format!("malformed token `{t}`"))))
        .collect::<Result<_>>()?;

    let model_tag = field(&tokens, "model")?;
    let model = Model::from_tag(model_tag)
        .ok_or_else(|| parse_err(1, format!("unknown model tag `{model_tag}`")))?;
    let n: usize = parse_num(1, "vertex count", field(&tokens, "n")?)?;
    let k: Color = parse_num(1, "color count", field(&tokens, "k")?)?;
    let b: Weight = parse_num(1, "base capacity", field(&tokens, "b")?)?;
    let eps_s = field(&tokens, "eps")?;
    let (p_s, q_s) = eps_s
        .split_once('/')
        .ok_or_else(|| parse_err(1, format!("epsilon `{eps_s}` must be of the form p/q")))?;
    let eps = Ratio::new(parse_num(1, "epsilon numerator", p_s)?, parse_num(1, "epsilon denominator", q_s)?);
    let w: Vec<Weight> = field(&tokens, "w")?
        .split(',')
        .map(|s| parse_num(1, "weight", s))
        .collect::<Result<_>>()?;
    let c0: Vec<Color> = field(&tokens, "c0")?
        .split(',')
        .map(|s| parse_num(1, "color", s))
        .collect::<Result<_>>()?;
    if w.len() != n {
        return Err(parse_err(1, format!("expected {n} weights, found {}", w.len())));
    }
    if c0.len() != n {
        return Err(parse_err(1, format!("expected {n} initial colors, found {}", c0.len())));
    }

    let inst = Instance::new(model, k, w, c0, eps)?;
    if inst.b != b {
        return Err(parse_err(1, format!("header claims b = {b}, instance derives b = {}", inst.b)));
    }

    let mut requests = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        if line.trim().is_empty() {
            return Err(parse_err(lineno, "blank line inside request list"));
        }
        let mut it = line.split(' ').filter(|t| !t.is_empty());
        let u: Vertex = parse_num(lineno, "vertex id", it.next().ok_or_else(|| parse_err(lineno, "empty request line"))?)?;
        let v: Vertex = parse_num(lineno, "vertex id", it.next().ok_or_else(|| parse_err(lineno, "request needs two vertex ids"))?)?;
        if it.next().is_some() {
            return Err(parse_err(lineno, "request line has trailing tokens"));
        }
        if u == v {
            return Err(parse_err(lineno, format!("request endpoints coincide ({u} {u})")));
        }
        if (u as usize) >= inst.n || (v as usize) >= inst.n {
            return Err(parse_err(lineno, format!("vertex id out of range 0..{} in ({u} {v})", inst.n)));
        }
        requests.push(Request::new(u, v, requests.len()));
    }
    Ok((inst, requests))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Instance, Vec<Request>) {
        let inst = Instance::unit_two_cluster(Model::Online2, 6, Ratio::new(1, 2)).unwrap();
        let reqs = vec![Request::new(0, 1, 0), Request::new(2, 5, 1)];
        (inst, reqs)
    }

    #[test]
    fn round_trip_is_identity_both_ways() {
        let (inst, reqs) = sample();
        let text = write_trace(&inst, &reqs);
        let (inst2, reqs2) = read_trace(&text).unwrap();
        assert_eq!(inst, inst2);
        assert_eq!(reqs, reqs2);
        assert_eq!(write_trace(&inst2, &reqs2), text, "writer must be canonical");
    }

    #[test]
    fn delta_trace_round_trips() {
        let inst = Instance::delta_uniform(12, 3, Ratio::new(1, 3)).unwrap();
        let reqs = vec![Request::new(0, 1, 0)];
        let text = write_trace(&inst, &reqs);
        let (inst2, reqs2) = read_trace(&text).unwrap();
        assert_eq!((inst, reqs), (inst2, reqs2));
    }

    #[test]
    fn rejects_equal_endpoints_with_line_number() {
        let (inst, _) = sample();
        let text = format!("{}3 3\n", write_trace(&inst, &[]));
        match read_trace(&text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_range_vertex() {
        let (inst, _) = sample();
        let text = format!("{}0 6\n", write_trace(&inst, &[]));
        assert!(matches!(read_trace(&text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn rejects_odd_total_weight_for_two_clusters() {
        let text = "model=online2 n=3 k=2 b=1 eps=1/2 w=1,1,1 c0=1,2,1\n";
        assert!(matches!(read_trace(text), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn rejects_header_capacity_mismatch() {
        let text = "model=online2 n=2 k=2 b=7 eps=1/2 w=1,1 c0=1,2\n";
        assert!(matches!(read_trace(text), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn rejects_unknown_model_and_malformed_tokens() {
        assert!(matches!(
            read_trace("model=three n=2 k=2 b=1 eps=1/2 w=1,1 c0=1,2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_trace("model online2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(read_trace(""), Err(Error::Parse { line: 1, .. })));
    }
}
