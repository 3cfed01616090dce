//! JSON map and poset specifications.
//!
//! A self-map spec lists window images and optional tail rules:
//!
//! ```json
//! { "window": [-3, 3], "values": { "-3": 3, "0": 0 },
//!   "rules": [ { "to": "-i" } ],
//!   "left_tail": { "kind": "mirror" }, "right_tail": { "kind": "mirror" } }
//! ```
//!
//! A multimap spec gives each value as an index or a list of indices. Rules
//! fill every window point their range and parity select; explicit values
//! win over rules. Multimap rule values are clipped to the window.
//!
//! ```json
//! { "window": [-10, 10],
//!   "rules": [ { "range": [null, -8], "to": "i+2" },
//!              { "range": [-4, -2], "kind": "interval", "from": "i", "to": "i+1" } ],
//!   "values": { "0": [0] } }
//! ```
//!
//! Rule expressions are integer-linear in `i`: `"i"`, `"-i+1"`, `"2*i-3"`, `"0"`.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::line::{LineWindow, TailRule};
use crate::multi::MultiMap;
use crate::poset::Poset;
use crate::single::SelfMap;

/// `coef * i + constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearExpr {
    pub coef: i64,
    pub constant: i64,
}

impl LinearExpr {
    pub fn eval(&self, i: i64) -> i64 {
        self.coef * i + self.constant
    }
}

impl FromStr for LinearExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad expression {s:?}: expected terms like 2*i-1"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut expr = LinearExpr { coef: 0, constant: 0 };
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term == "i" {
                expr.coef += sign;
            } else if let Some(k) = term.strip_suffix("*i") {
                expr.coef += sign * k.parse::<i64>().map_err(|_| bad())?;
            } else {
                expr.constant += sign * term.parse::<i64>().map_err(|_| bad())?;
            }
        }
        Ok(expr)
    }
}

impl<'de> Deserialize<'de> for LinearExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(c) => Ok(LinearExpr { coef: 0, constant: c }),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RuleKind {
    #[default]
    Point,
    Interval,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Rule {
    #[serde(default)]
    range: Option<[Option<i64>; 2]>,
    #[serde(default)]
    parity: Option<Parity>,
    #[serde(default)]
    kind: RuleKind,
    #[serde(default)]
    from: Option<LinearExpr>,
    to: LinearExpr,
}

impl Rule {
    fn selects(&self, i: i64) -> bool {
        let in_range = match self.range {
            None => true,
            Some([lo, hi]) => lo.is_none_or(|lo| lo <= i) && hi.is_none_or(|hi| i <= hi),
        };
        let parity = match self.parity {
            None => true,
            Some(Parity::Odd) => i.rem_euclid(2) == 1,
            Some(Parity::Even) => i.rem_euclid(2) == 0,
        };
        in_range && parity
    }

    fn values(&self, i: i64) -> Result<Vec<i64>> {
        match self.kind {
            RuleKind::Point => Ok(vec![self.to.eval(i)]),
            RuleKind::Interval => {
                let from = self
                    .from
                    .ok_or_else(|| Error::Parse("interval rule needs \"from\"".into()))?
                    .eval(i);
                let to = self.to.eval(i);
                Ok((from.min(to)..=from.max(to)).collect())
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(i64),
    Many(Vec<i64>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SelfMapSpec {
    // Free text for readers of the spec file; read back by `description`.
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    window: [i64; 2],
    #[serde(default)]
    values: BTreeMap<String, i64>,
    #[serde(default)]
    rules: Vec<Rule>,
    #[serde(default)]
    left_tail: TailRule,
    #[serde(default)]
    right_tail: TailRule,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MultiMapSpec {
    // Free text for readers of the spec file; read back by `description`.
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    window: [i64; 2],
    #[serde(default)]
    values: BTreeMap<String, OneOrMany>,
    #[serde(default)]
    rules: Vec<Rule>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_key(key: &str, window: &LineWindow) -> Result<usize> {
    let i: i64 = key
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("value key {key:?} is not an integer")))?;
    window.pos(i)
}

/// Values for every window point from explicit entries, falling back to the
/// first rule that selects the point.
fn resolve<T>(
    window: &LineWindow,
    explicit: Vec<(String, T)>,
    rules: &[Rule],
    from_rule: impl Fn(&Rule, i64) -> Result<T>,
) -> Result<Vec<T>> {
    let mut slots: Vec<Option<T>> = (0..window.len()).map(|_| None).collect();
    for (k, v) in explicit {
        let pos = parse_key(&k, window)?;
        slots[pos] = Some(v);
    }
    window
        .indices()
        .zip(slots)
        .map(|(i, slot)| match slot {
            Some(v) => Ok(v),
            None => match rules.iter().find(|r| r.selects(i)) {
                Some(r) => from_rule(r, i),
                None => Err(Error::Parse(format!("no value or rule covers x{i}"))),
            },
        })
        .collect()
}

pub fn parse_selfmap(text: &str) -> Result<SelfMap> {
    let spec: SelfMapSpec = parse_json(text)?;
    let window =
        LineWindow::new(spec.window[0], spec.window[1])?.with_tails(spec.left_tail, spec.right_tail)?;
    let values = resolve(&window, spec.values.into_iter().collect(), &spec.rules, |r, i| {
        if r.kind == RuleKind::Interval {
            return Err(Error::Parse("interval rules need a multimap spec".into()));
        }
        Ok(r.to.eval(i))
    })?;
    SelfMap::new(window, values)
}

pub fn parse_multimap(text: &str) -> Result<MultiMap> {
    let spec: MultiMapSpec = parse_json(text)?;
    let window = LineWindow::new(spec.window[0], spec.window[1])?;
    let explicit = spec
        .values
        .into_iter()
        .map(|(k, v)| {
            let set = match v {
                OneOrMany::One(j) => vec![j],
                OneOrMany::Many(js) => js,
            };
            (k, set)
        })
        .collect();
    let values = resolve(&window, explicit, &spec.rules, |r, i| {
        let clipped: Vec<i64> = r.values(i)?.into_iter().filter(|&j| window.contains(j)).collect();
        if clipped.is_empty() {
            return Err(Error::InvalidMultiMap(format!(
                "rule value for x{i} lies outside the window"
            )));
        }
        Ok(clipped)
    })?;
    MultiMap::new(window, values)
}

/// Spec description text, if any; works for both map kinds.
pub fn description(text: &str) -> Option<String> {
    let v: Value = serde_json::from_str(text).ok()?;
    v.get("description")?.as_str().map(str::to_string)
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct PosetSpec {
    elements: Vec<String>,
    #[serde(default)]
    less_than: Vec<[String; 2]>,
}

/// `{"elements": ["a", "b"], "less_than": [["a", "b"]]}`; the relation may be
/// redundant.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let spec: PosetSpec = parse_json(text)?;
    let index: BTreeMap<&str, usize> = spec
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_str(), i))
        .collect();
    if index.len() != spec.elements.len() {
        return Err(Error::Parse("duplicate element names".into()));
    }
    let find = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown element {name:?}")))
    };
    let pairs = spec
        .less_than
        .iter()
        .map(|[a, b]| Ok((find(a)?, find(b)?)))
        .collect::<Result<Vec<_>>>()?;
    Poset::from_relation(spec.elements.clone(), pairs)
}

pub fn selfmap_to_json(f: &SelfMap) -> Value {
    let w = f.window();
    let values: BTreeMap<String, i64> = w
        .indices()
        .zip(f.values())
        .map(|(i, &v)| (i.to_string(), v))
        .collect();
    json!({
        "window": [w.lo(), w.hi()],
        "values": values,
        "left_tail": w.left_tail,
        "right_tail": w.right_tail,
    })
}

pub fn multimap_to_json(f: &MultiMap) -> Value {
    let w = f.window();
    let values: BTreeMap<String, &Vec<i64>> = w
        .indices()
        .zip(f.values())
        .map(|(i, v)| (i.to_string(), v))
        .collect();
    json!({ "window": [w.lo(), w.hi()], "values": values })
}
