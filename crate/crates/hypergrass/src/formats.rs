//! File formats: GP vectors and set values as JSON, point streams as JSONL,
//! Hasse diagrams as DOT, numeric grids as CSV.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use hypergrass_core::combin::{binom, fmt_subset, parse_subset};
use hypergrass_core::hyperfield::{Check, Part};
use hypergrass_core::num::{fmt_rational, parse_rational, Q};
use hypergrass_core::plucker::{GPFailure, GPVector};
use hypergrass_core::poset::Poset;
use hypergrass_core::{Element, Field, SetValue};

/// `{"field":"TR","r":2,"n":4,"coords":{"12":"3",...}}`; absent keys are zero.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct GpJson {
    pub field: String,
    pub r: usize,
    pub n: usize,
    pub coords: Map<String, Value>,
}

pub fn gp_to_json(v: &GPVector) -> GpJson {
    let coords = v.nonzero_entries().into_iter().map(|(k, p)| (k, Value::String(p))).collect();
    GpJson { field: v.field().to_string(), r: v.rank(), n: v.ground(), coords }
}

pub fn gp_from_json(j: &GpJson) -> Result<GPVector> {
    let field: Field = j.field.parse()?;
    let entries = j
        .coords
        .iter()
        .map(|(k, v)| {
            let p = match v {
                Value::String(s) => s.clone(),
                Value::Number(x) => x.to_string(),
                other => bail!("coordinate {k} has non-scalar value {other}"),
            };
            Ok((k.clone(), p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GPVector::from_entries(field, j.r, j.n, &entries)?)
}

pub fn parse_gp_json(s: &str) -> Result<GPVector> {
    let j: GpJson = serde_json::from_str(s).context("GP vector JSON")?;
    gp_from_json(&j)
}

/// `12:3,13:-2` style coordinates.
pub fn parse_coords(field: Field, r: usize, n: usize, s: &str) -> Result<GPVector> {
    let entries = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (k, v) = t.split_once(':').with_context(|| format!("`{t}` is not key:value"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GPVector::from_entries(field, r, n, &entries)?)
}

/// Keys such as `12` (or `1,10` when `n > 9`) mapped to rationals; accepts
/// `12:0;13:1`, `12:0,13:1` for `n <= 9`, or a JSON object.
pub fn parse_values(s: &str, n: usize) -> Result<Vec<(Vec<usize>, Q)>> {
    let s = s.trim();
    let pairs: Vec<(String, String)> = if s.starts_with('{') {
        let m: Map<String, Value> = serde_json::from_str(s).context("values JSON")?;
        m.into_iter()
            .map(|(k, v)| match v {
                Value::String(x) => Ok((k, x)),
                Value::Number(x) => Ok((k, x.to_string())),
                other => bail!("value for {k} is {other}"),
            })
            .collect::<Result<_>>()?
    } else {
        let sep = if s.contains(';') { ';' } else { ',' };
        s.split(sep)
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                let (k, v) = t.split_once(':').with_context(|| format!("`{t}` is not key:value"))?;
                Ok((k.trim().to_string(), v.trim().to_string()))
            })
            .collect::<Result<_>>()?
    };
    pairs
        .into_iter()
        .map(|(k, v)| {
            let mut key = parse_subset(&k, n)?;
            key.sort_unstable();
            let x = parse_rational(&v).with_context(|| format!("`{v}` is not a rational"))?;
            Ok((key, x))
        })
        .collect()
}

pub fn set_value_json(s: &SetValue) -> Value {
    let parts: Vec<Value> = s
        .parts()
        .into_iter()
        .map(|p| match p {
            Part::Points(xs) => json!({"kind": "points", "elements": xs.iter().map(|x| x.to_string()).collect::<Vec<_>>()}),
            Part::Interval { lo, hi, lo_closed, hi_closed } => json!({
                "kind": "interval", "lo": fmt_rational(&lo), "hi": fmt_rational(&hi),
                "loClosed": lo_closed, "hiClosed": hi_closed
            }),
            Part::Arc { start, end, start_closed, end_closed, modulus } => json!({
                "kind": "arc", "start": fmt_rational(&start), "end": fmt_rational(&end),
                "startClosed": start_closed, "endClosed": end_closed, "modulus": fmt_rational(&modulus)
            }),
            Part::Disk { radius } => json!({"kind": "disk", "radius": fmt_rational(&radius)}),
            Part::Circle { modulus } => json!({"kind": "circle", "modulus": fmt_rational(&modulus)}),
        })
        .collect();
    json!({"field": s.field().to_string(), "includesZero": s.contains_zero(), "parts": parts})
}

pub fn check_json(c: &Check) -> Value {
    let mut m = Map::new();
    m.insert("axiom".into(), c.axiom.into());
    m.insert("status".into(), c.status.as_str().into());
    if let Some(w) = &c.witness {
        m.insert("witness".into(), w.clone().into());
    }
    Value::Object(m)
}

pub fn failure_json(f: &GPFailure, n: usize) -> Value {
    match f {
        GPFailure::Relation { i, j } => json!({
            "type": "relation", "I": i, "J": j, "text": f.to_string(),
            "key": format!("{}|{}", fmt_subset(i, n), fmt_subset(j, n))
        }),
        GPFailure::Exchange { b1, b2, x } => json!({"type": "exchange", "B1": b1, "B2": b2, "x": x, "text": f.to_string()}),
    }
}

/// One JSON string per line.
pub fn write_jsonl<W: Write>(mut w: W, lines: &[String]) -> io::Result<()> {
    for l in lines {
        serde_json::to_writer(&mut w, l)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Reads a point stream; each line is a JSON string or a bare chirotope.
pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (no, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('"') {
            out.push(serde_json::from_str::<String>(t).with_context(|| format!("line {}", no + 1))?);
        } else {
            out.push(t.to_string());
        }
    }
    Ok(out)
}

/// Field of a point stream read off the alphabet: `+` or `-` anywhere means S.
pub fn infer_field(lines: &[String]) -> Result<Field> {
    let mut signs = false;
    for l in lines {
        for c in l.chars() {
            match c {
                '+' | '-' => signs = true,
                '0' | '1' => {}
                _ => bail!("unexpected character `{c}` in chirotope `{l}`"),
            }
        }
    }
    if signs {
        return Ok(Field::S);
    }
    if lines.iter().any(|l| l.contains('1')) {
        return Ok(Field::K);
    }
    bail!("cannot tell the field of an empty or all-zero stream")
}

/// Converts chirotope strings to sign vectors.
pub fn sign_vectors(lines: &[String]) -> Result<Vec<Vec<i8>>> {
    let len = lines.first().map(|l| l.len()).unwrap_or(0);
    lines
        .iter()
        .map(|l| {
            if l.len() != len {
                bail!("chirotopes of different lengths: `{}` and `{l}`", lines[0]);
            }
            Ok(l.chars().map(|c| match c {
                '+' | '1' => 1,
                '-' => -1,
                _ => 0,
            }).collect())
        })
        .collect()
}

/// `(r, n)` pairs with `C(n, r) = len`, smallest `n` first.
pub fn shapes_for(len: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 1..=64usize {
        for r in 1..=n {
            if binom(n, r) == len as u64 {
                out.push((r, n));
            }
        }
    }
    out
}

/// Hasse diagram with nodes labelled by chirotope string, edges upward.
pub fn hasse_dot(p: &Poset) -> String {
    let mut s = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
    for (i, l) in p.labels().iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{l}\"];");
    }
    for (a, b) in p.hasse_edges() {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    s.push_str("}\n");
    s
}

pub fn write_csv<W: Write>(mut w: W, rows: &[[String; 3]]) -> io::Result<()> {
    w.write_all(b"x,y,z\n")?;
    for [x, y, z] in rows {
        writeln!(w, "{x},{y},{z}")?;
    }
    w.flush()
}

pub fn parse_element_list(s: &str) -> Result<Vec<Element>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| Ok(t.trim().parse::<Element>()?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypergrass_core::hyperfield::hypersum;

    #[test]
    fn gp_json_round_trip() {
        let v = parse_coords(Field::TR, 2, 3, "12:3,13:-2,23:1").unwrap();
        let j = serde_json::to_string(&gp_to_json(&v)).unwrap();
        assert_eq!(j, r#"{"field":"TR","r":2,"n":3,"coords":{"12":"3","13":"-2","23":"1"}}"#);
        assert_eq!(parse_gp_json(&j).unwrap(), v);
    }

    #[test]
    fn set_values() {
        let s = hypersum(&"TR:2".parse().unwrap(), &"TR:-2".parse().unwrap()).unwrap();
        let j = set_value_json(&s);
        assert_eq!(j["includesZero"], true);
        assert_eq!(j["parts"][0]["kind"], "interval");
        let p = hypersum(&"P:@0".parse().unwrap(), &"P:@1/4".parse().unwrap()).unwrap();
        assert_eq!(set_value_json(&p)["parts"][0]["kind"], "arc");
    }

    #[test]
    fn jsonl_and_inference() {
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &["+0-".to_string(), "0++".to_string()]).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "\"+0-\"\n\"0++\"\n");
        let back = read_jsonl(&buf[..]).unwrap();
        assert_eq!(back, ["+0-", "0++"]);
        assert_eq!(read_jsonl(&b"011\n\n110\n"[..]).unwrap(), ["011", "110"]);
        assert_eq!(infer_field(&back).unwrap(), Field::S);
        assert_eq!(infer_field(&["011".to_string()]).unwrap(), Field::K);
        assert_eq!(shapes_for(6), [(2, 4), (1, 6), (5, 6)]);
    }

    #[test]
    fn values_syntax() {
        let v = parse_values("12:0,13:1/2,34:-1", 4).unwrap();
        assert_eq!(v[1].0, [1, 3]);
        let j = parse_values(r#"{"12": 0, "21": "3"}"#, 4).unwrap();
        assert_eq!(j[1].0, [1, 2]);
        assert!(parse_values("12=3", 4).is_err());
    }
}
