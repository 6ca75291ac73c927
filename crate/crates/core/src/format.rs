//! Reading and writing relations, maps and admissible pairs, plus DOT
//! export of Hasse diagrams.
//!
//! The text format holds one relation per blank-line-separated block: a
//! header line `n=<count>` followed by lines `i j` meaning `i <= j`. Lines
//! starting with `#` are ignored. The JSON form is `{"n": 3, "rel": [[0,1],
//! [1,2]]}`, or an array of such objects. Inputs are closed transitively on
//! load.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::maps::OrderMap;
use crate::relation::Relation;

/// What a loaded relation must be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Load {
    Poset,
    Preorder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Text,
    Json,
}

/// JSON when the first non-blank byte opens an object or array.
pub fn sniff(input: &str) -> InputFormat {
    match input.trim_start().bytes().next() {
        Some(b'{') | Some(b'[') => InputFormat::Json,
        _ => InputFormat::Text,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationJson {
    pub n: usize,
    pub rel: Vec<[usize; 2]>,
}

impl RelationJson {
    pub fn from_relation(rel: &Relation) -> Self {
        RelationJson { n: rel.n(), rel: rel.pairs().map(|(i, j)| [i, j]).collect() }
    }
}

fn build(n: usize, pairs: &[(usize, usize)], load: Load) -> Result<Relation> {
    if n > crate::relation::MAX_ELEMENTS {
        return Err(Error::SizeBound { size: n, bound: crate::relation::MAX_ELEMENTS });
    }
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= n || j >= n) {
        return Err(Error::Parse(format!("pair {i} {j} out of range for n={n}")));
    }
    let rel = Relation::from_pairs(n, pairs)?.transitive_closure();
    if load == Load::Poset {
        rel.require_poset()?;
    }
    Ok(rel)
}

fn from_json_value(v: Value, load: Load) -> Result<Relation> {
    let r: RelationJson = serde_json::from_value(v)?;
    let pairs: Vec<(usize, usize)> = r.rel.iter().map(|p| (p[0], p[1])).collect();
    build(r.n, &pairs, load)
}

fn parse_text_block(lines: &[&str], load: Load) -> Result<Relation> {
    let header = lines[0].trim();
    let n = header
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::Parse(format!("expected `n=<count>`, found `{header}`")))?;
    let mut pairs = Vec::new();
    for line in &lines[1..] {
        let nums: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<Vec<usize>> = nums.iter().map(|s| s.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[i, j]) => pairs.push((i, j)),
            _ => return Err(Error::Parse(format!("expected `<i> <j>`, found `{}`", line.trim()))),
        }
    }
    build(n, &pairs, load)
}

fn parse_text(input: &str, load: Load) -> Result<Vec<Relation>> {
    let mut blocks: Vec<Vec<&str>> = vec![Vec::new()];
    for line in input.lines() {
        let t = line.trim();
        if t.starts_with('#') {
            continue;
        }
        if t.is_empty() {
            if !blocks.last().expect("nonempty").is_empty() {
                blocks.push(Vec::new());
            }
        } else {
            blocks.last_mut().expect("nonempty").push(t);
        }
    }
    blocks.retain(|b| !b.is_empty());
    blocks.iter().map(|b| parse_text_block(b, load)).collect()
}

/// Every relation in the input, in order.
pub fn parse_relations(input: &str, load: Load) -> Result<Vec<Relation>> {
    let rels = match sniff(input) {
        InputFormat::Text => parse_text(input, load)?,
        InputFormat::Json => match serde_json::from_str::<Value>(input)? {
            Value::Array(items) => items.into_iter().map(|v| from_json_value(v, load)).collect::<Result<_>>()?,
            v => vec![from_json_value(v, load)?],
        },
    };
    if rels.is_empty() {
        return Err(Error::Parse("no relation found".into()));
    }
    Ok(rels)
}

/// Exactly one relation.
pub fn parse_relation(input: &str, load: Load) -> Result<Relation> {
    let mut rels = parse_relations(input, load)?;
    if rels.len() != 1 {
        return Err(Error::Parse(format!("expected one relation, found {}", rels.len())));
    }
    Ok(rels.remove(0))
}

pub fn to_text(rel: &Relation) -> String {
    let mut s = format!("n={}\n", rel.n());
    for (i, j) in rel.pairs() {
        let _ = writeln!(s, "{i} {j}");
    }
    s
}

pub fn to_json(rel: &Relation) -> Value {
    serde_json::to_value(RelationJson::from_relation(rel)).expect("plain data")
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    src: RelationJson,
    tgt: RelationJson,
    f: Vec<usize>,
}

/// A map `{"src": …, "tgt": …, "f": [images]}`; source and target are read
/// as preorders.
pub fn parse_map(input: &str) -> Result<OrderMap> {
    let m: MapJson = serde_json::from_str(input)?;
    let src = from_json_value(serde_json::to_value(m.src)?, Load::Preorder)?;
    let tgt = from_json_value(serde_json::to_value(m.tgt)?, Load::Preorder)?;
    OrderMap::new(src, tgt, m.f)
}

pub fn map_to_json(f: &OrderMap) -> Value {
    serde_json::to_value(MapJson {
        src: RelationJson::from_relation(f.source()),
        tgt: RelationJson::from_relation(f.target()),
        f: f.images().to_vec(),
    })
    .expect("plain data")
}

#[derive(Serialize, Deserialize)]
struct AdmissibleJson {
    amb: RelationJson,
    sub_pairs: Vec<[usize; 2]>,
}

/// An ambient preorder with a sub-relation `{"amb": …, "sub_pairs": […]}`.
/// The sub-relation is closed transitively.
pub fn parse_admissible(input: &str) -> Result<(Relation, Relation)> {
    let a: AdmissibleJson = serde_json::from_str(input)?;
    let amb = from_json_value(serde_json::to_value(a.amb)?, Load::Preorder)?;
    let pairs: Vec<(usize, usize)> = a.sub_pairs.iter().map(|p| (p[0], p[1])).collect();
    let sub = build(amb.n(), &pairs, Load::Preorder)?;
    Ok((amb, sub))
}

pub fn admissible_to_json(amb: &Relation, sub: &Relation) -> Value {
    serde_json::to_value(AdmissibleJson {
        amb: RelationJson::from_relation(amb),
        sub_pairs: sub.pairs().map(|(i, j)| [i, j]).collect(),
    })
    .expect("plain data")
}

/// The Hasse diagram in DOT. Nodes are the `≃`-classes, edges run from the
/// lower to the upper end of each cover.
pub fn to_dot(rel: &Relation) -> Result<String> {
    rel.require_preorder()?;
    let (poset, classes) = rel.posetify();
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
    for (b, block) in classes.blocks().iter().enumerate() {
        let label: Vec<String> = block.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  n{b} [label=\"{}\"];", label.join(","));
    }
    for c in poset.strict_covers() {
        let _ = writeln!(out, "  n{} -> n{};", c.lower, c.upper);
    }
    out.push_str("}\n");
    Ok(out)
}
