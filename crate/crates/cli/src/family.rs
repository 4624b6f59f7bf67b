//! Family description files.
//!
//! Line oriented, UTF-8, `#` starts a comment. Lists are comma separated.
//!
//! ```text
//! family NAME
//! base VAR...            chart VAR...          fiber VAR...
//! relations POLY, ...    ideal POLY, ...       params VAR...
//! uniformize POLY, ...   complete-intersection POLY, ...
//! stratum NAME           (then) on POLY, ...   sample Q, ...
//! component [weight N] [over NAME]
//!                        (then) branch RATFUN, ...   equations POLY, ...
//! group N N ...          point Q, ...
//! cycle [weight N]       (then) on POLY, ...   sample Q, ...
//! origin published|derived|direct
//! expect ...
//! ```
//!
//! Expectations: `trace H = V`, `form W = V`, `class H = V`,
//! `verdict NAME`, `witness R`, `relation S` (in the variable `s`),
//! `exit COMMAND N`, `weights N... | absent`, `weight-degree N`,
//! `degree N`, `distinct P = N`, `multiplicity P = N`, `pullback P = N`.
//! Points `P` are written `q, q, ...` over base and chart.

use std::collections::HashMap;
use std::str::FromStr;

use cycletrace::covering::{Branch, Scale, Uniformization};
use cycletrace::flatness::{BaseCycle, ComponentData, FamilyComponent, Stratum, WeightedFamily};
use cycletrace::poly::{parse_poly, parse_ratfun, Poly, Var, VarTable, Q};
use cycletrace::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Published,
    Derived,
    Direct,
}

impl Origin {
    pub fn as_str(&self) -> &'static str {
        match self {
            Origin::Published => "published",
            Origin::Derived => "derived",
            Origin::Direct => "direct",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpectKind {
    Trace { h: String, value: String },
    Form { w: String, value: String },
    Class { h: String, value: String },
    Verdict(String),
    Witness(String),
    Relation(String),
    Exit { command: String, code: i32 },
    Weights(Option<Vec<u32>>),
    WeightDegree(usize),
    Degree(usize),
    Distinct { point: String, count: usize },
    Multiplicity { point: String, count: usize },
    Pullback { point: String, count: usize },
}

#[derive(Clone, Debug)]
pub struct Expectation {
    pub line: usize,
    pub origin: Origin,
    pub kind: ExpectKind,
}

#[derive(Clone, Debug)]
pub struct Family {
    pub name: String,
    pub vars: VarTable,
    pub family: WeightedFamily,
    /// Equations of the whole family, when given.
    pub ideal: Option<Vec<Poly>>,
    pub complete_intersection: Option<Vec<Poly>>,
    pub points: Vec<Vec<Q>>,
    pub cycles: Vec<BaseCycle>,
    pub expectations: Vec<Expectation>,
}

impl Family {
    pub fn scale(&self) -> &Scale {
        &self.family.scale
    }

    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        parse_poly(s, &self.vars)
    }

    /// Point text `q, q, ...` over base and chart.
    pub fn parse_point(&self, s: &str) -> Result<Vec<Q>> {
        let p = parse_rationals(s, 1, 1)?;
        let n = self.scale().base_and_chart().len();
        if p.len() != n {
            return Err(Error::DimensionMismatch(format!("point has {} coordinates, expected {n}", p.len())));
        }
        Ok(p)
    }
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Re-anchors an expression error at its place in the file.
fn located<T>(r: Result<T>, line: usize, col: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { col: c, msg, .. } => perr(line, col + c.saturating_sub(1), msg),
        other => other,
    })
}

fn parse_rationals(s: &str, line: usize, col: usize) -> Result<Vec<Q>> {
    split_list(s, col)
        .into_iter()
        .map(|(c, item)| Q::from_str(item).map_err(|_| perr(line, c, format!("`{item}` is not a rational number"))))
        .collect()
}

/// Comma separated items with their columns.
fn split_list(s: &str, col: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices().chain(std::iter::once((s.len(), ','))) {
        if ch == ',' {
            let raw = &s[start..i];
            let lead = raw.len() - raw.trim_start().len();
            if !raw.trim().is_empty() {
                out.push((col + start + lead, raw.trim()));
            }
            start = i + 1;
        }
    }
    out
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    rest: &'a str,
    /// Column of `rest`.
    col: usize,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = body.len() - trimmed.len();
        let (key, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let lead = rest.len() - rest.trim_start().len();
        let col = indent + key.len() + 1 + lead + 1;
        out.push(Line { no: i + 1, key, rest: rest.trim(), col });
    }
    out
}

enum Block {
    None,
    Component(usize),
    Stratum(usize),
    Cycle(usize),
}

struct RawComponent {
    line: usize,
    weight: u32,
    over: Option<(String, usize)>,
    branches: Vec<(usize, usize, String)>,
    equations: Vec<(usize, usize, String)>,
}

struct RawRegion {
    line: usize,
    name: String,
    weight: u32,
    on: Vec<(usize, usize, String)>,
    samples: Vec<(usize, usize, String)>,
}

pub fn parse_family(text: &str) -> Result<Family> {
    let ls = lines(text);
    if ls.is_empty() {
        return Err(perr(1, 1, "empty family description"));
    }
    let mut vars = VarTable::new();
    let mut decl: HashMap<&str, (usize, Vec<String>)> = HashMap::new();
    for l in &ls {
        if matches!(l.key, "base" | "chart" | "fiber" | "params") {
            if decl.contains_key(l.key) {
                return Err(perr(l.no, 1, format!("`{}` declared twice", l.key)));
            }
            decl.insert(l.key, (l.no, l.rest.split_whitespace().map(str::to_string).collect()));
        }
    }
    let mut blocks: HashMap<&str, Vec<Var>> = HashMap::new();
    for key in ["base", "chart", "fiber", "params"] {
        let mut vs = Vec::new();
        if let Some((no, names)) = decl.get(key) {
            for n in names {
                if !n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                    || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    return Err(perr(*no, 1, format!("`{n}` is not a variable name")));
                }
                vs.push(
                    vars.declare(n).map_err(|_| Error::Invalid(format!("line {no}: variable `{n}` declared twice")))?,
                );
            }
        }
        blocks.insert(key, vs);
    }
    if blocks["fiber"].is_empty() {
        return Err(perr(1, 1, "no fiber variables declared"));
    }
    for name in vars.names() {
        if name.starts_with('d') && vars.get(&name[1..]).is_some() {
            return Err(Error::Invalid(format!("variable `{name}` clashes with the differential of `{}`", &name[1..])));
        }
    }

    let poly_list = |s: &str, no: usize, col: usize| -> Result<Vec<Poly>> {
        split_list(s, col).into_iter().map(|(c, item)| located(parse_poly(item, &vars), no, c)).collect()
    };

    let mut name = String::from("family");
    let mut relations = Vec::new();
    let mut ideal: Option<Vec<Poly>> = None;
    let mut uniformize: Option<(usize, Vec<Poly>)> = None;
    let mut ci: Option<Vec<Poly>> = None;
    let mut comps: Vec<RawComponent> = Vec::new();
    let mut strata: Vec<RawRegion> = Vec::new();
    let mut cycles: Vec<RawRegion> = Vec::new();
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut points = Vec::new();
    let mut expectations = Vec::new();
    let mut origin = Origin::Direct;
    let mut block = Block::None;

    for l in &ls {
        match l.key {
            "base" | "chart" | "fiber" | "params" => {}
            "family" => name = l.rest.to_string(),
            "relations" => relations.extend(poly_list(l.rest, l.no, l.col)?),
            "ideal" => ideal.get_or_insert_with(Vec::new).extend(poly_list(l.rest, l.no, l.col)?),
            "uniformize" => uniformize = Some((l.no, poly_list(l.rest, l.no, l.col)?)),
            "complete-intersection" => ci = Some(poly_list(l.rest, l.no, l.col)?),
            "component" => {
                let (weight, over) = parse_header(l, true)?;
                comps.push(RawComponent { line: l.no, weight, over, branches: Vec::new(), equations: Vec::new() });
                block = Block::Component(comps.len() - 1);
            }
            "stratum" => {
                if l.rest.is_empty() {
                    return Err(perr(l.no, l.col, "stratum needs a name"));
                }
                strata.push(RawRegion {
                    line: l.no,
                    name: l.rest.to_string(),
                    weight: 1,
                    on: Vec::new(),
                    samples: Vec::new(),
                });
                block = Block::Stratum(strata.len() - 1);
            }
            "cycle" => {
                let (weight, _) = parse_header(l, false)?;
                cycles.push(RawRegion { line: l.no, name: String::new(), weight, on: Vec::new(), samples: Vec::new() });
                block = Block::Cycle(cycles.len() - 1);
            }
            "branch" | "equations" => match block {
                Block::Component(i) => {
                    let item = (l.no, l.col, l.rest.to_string());
                    if l.key == "branch" {
                        comps[i].branches.push(item);
                    } else {
                        comps[i].equations.push(item);
                    }
                }
                _ => return Err(perr(l.no, 1, format!("`{}` outside a component", l.key))),
            },
            "on" | "sample" => {
                let region = match block {
                    Block::Stratum(i) => &mut strata[i],
                    Block::Cycle(i) => &mut cycles[i],
                    _ => return Err(perr(l.no, 1, format!("`{}` outside a stratum or cycle", l.key))),
                };
                let item = (l.no, l.col, l.rest.to_string());
                if l.key == "on" {
                    region.on.push(item);
                } else {
                    region.samples.push(item);
                }
            }
            "group" => {
                let mut g = Vec::new();
                for tok in l.rest.split_whitespace() {
                    let n: usize =
                        tok.parse().map_err(|_| perr(l.no, l.col, format!("`{tok}` is not a component number")))?;
                    if n == 0 {
                        return Err(perr(l.no, l.col, "components are numbered from 1"));
                    }
                    g.push(n - 1);
                }
                groups.push((l.no, g));
            }
            "point" => points.push(parse_rationals(l.rest, l.no, l.col)?),
            "origin" => {
                origin = match l.rest {
                    "published" => Origin::Published,
                    "derived" => Origin::Derived,
                    "direct" => Origin::Direct,
                    other => return Err(perr(l.no, l.col, format!("unknown origin `{other}`"))),
                }
            }
            "expect" => expectations.push(Expectation { line: l.no, origin, kind: parse_expect(l)? }),
            other => return Err(perr(l.no, 1, format!("unknown keyword `{other}`"))),
        }
    }

    let scale = Scale::new(blocks["base"].clone(), blocks["chart"].clone(), blocks["fiber"].clone(), relations)?;
    let params = blocks["params"].clone();
    let uniformization = match uniformize {
        Some((no, images)) => {
            Some(Uniformization::new(params, scale.base.clone(), images).map_err(|e| perr(no, 1, e.to_string()))?)
        }
        None if !params.is_empty() => return Err(Error::Invalid("parameters declared without `uniformize`".into())),
        None => None,
    };

    let mut stratum_list = Vec::new();
    let mut stratum_index: HashMap<String, usize> = HashMap::new();
    for s in &strata {
        if stratum_index.insert(s.name.clone(), stratum_list.len()).is_some() {
            return Err(perr(s.line, 1, format!("stratum `{}` declared twice", s.name)));
        }
        stratum_list.push(region(s, &vars, scale.base_and_chart().len())?);
    }

    let mut components = Vec::new();
    for c in &comps {
        let stratum = match &c.over {
            Some((n, col)) => {
                Some(*stratum_index.get(n).ok_or_else(|| perr(c.line, *col, format!("unknown stratum `{n}`")))?)
            }
            None => None,
        };
        let data = match (c.branches.is_empty(), c.equations.is_empty()) {
            (false, true) => {
                let mut bs = Vec::new();
                for (no, col, text) in &c.branches {
                    let vals = split_list(text, *col)
                        .into_iter()
                        .map(|(cc, item)| located(parse_ratfun(item, &vars), *no, cc))
                        .collect::<Result<Vec<_>>>()?;
                    if vals.len() != scale.fiber.len() {
                        return Err(perr(
                            *no,
                            *col,
                            format!("branch has {} values for {} fiber variables", vals.len(), scale.fiber.len()),
                        ));
                    }
                    bs.push(Branch(vals));
                }
                ComponentData::Parametric(bs)
            }
            (true, false) => {
                let mut eqs = Vec::new();
                for (no, col, text) in &c.equations {
                    eqs.extend(poly_list(text, *no, *col)?);
                }
                ComponentData::Implicit(eqs)
            }
            _ => return Err(perr(c.line, 1, "a component needs either branches or equations")),
        };
        components.push(FamilyComponent { weight: c.weight, stratum, data });
    }
    if components.is_empty() {
        match &ideal {
            Some(g) => {
                components.push(FamilyComponent { weight: 1, stratum: None, data: ComponentData::Implicit(g.clone()) })
            }
            None => return Err(Error::Invalid("family has neither components nor an ideal".into())),
        }
    }
    let mut group_list = Vec::new();
    for (no, g) in groups {
        if let Some(&bad) = g.iter().find(|&&i| i >= components.len()) {
            return Err(perr(no, 1, format!("no component {}", bad + 1)));
        }
        group_list.push(g);
    }
    let n = scale.base_and_chart().len();
    for p in &points {
        if p.len() != n {
            return Err(Error::DimensionMismatch(format!("point has {} coordinates, expected {n}", p.len())));
        }
    }
    let cycles = cycles
        .iter()
        .map(|c| {
            let r = region(c, &vars, n)?;
            Ok(BaseCycle { weight: c.weight, gens: r.gens, samples: r.samples })
        })
        .collect::<Result<Vec<_>>>()?;

    let family = WeightedFamily { scale, components, strata: stratum_list, groups: group_list, uniformization };
    Ok(Family { name, vars, family, ideal, complete_intersection: ci, points, cycles, expectations })
}

fn region(r: &RawRegion, vars: &VarTable, n: usize) -> Result<Stratum> {
    let mut gens = Vec::new();
    for (no, col, text) in &r.on {
        for (c, item) in split_list(text, *col) {
            gens.push(located(parse_poly(item, vars), *no, c)?);
        }
    }
    let mut samples = Vec::new();
    for (no, col, text) in &r.samples {
        let p = parse_rationals(text, *no, *col)?;
        if p.len() != n {
            return Err(perr(*no, *col, format!("sample has {} coordinates, expected {n}", p.len())));
        }
        samples.push(p);
    }
    Ok(Stratum { gens, samples })
}

/// `[weight N] [over NAME]`.
fn parse_header(l: &Line, allow_over: bool) -> Result<(u32, Option<(String, usize)>)> {
    let mut weight = 1;
    let mut over = None;
    let toks: Vec<&str> = l.rest.split_whitespace().collect();
    let mut i = 0;
    while i < toks.len() {
        match (toks[i], toks.get(i + 1)) {
            ("weight", Some(w)) => {
                weight = w
                    .parse::<i64>()
                    .map_err(|_| perr(l.no, l.col, format!("`{w}` is not a weight")))?
                    .try_into()
                    .unwrap_or(0);
                if weight == 0 {
                    return Err(Error::Invalid(format!("line {}: weights must be positive", l.no)));
                }
            }
            ("over", Some(s)) if allow_over => over = Some((s.to_string(), l.col)),
            (t, _) => return Err(perr(l.no, l.col, format!("unexpected `{t}`"))),
        }
        i += 2;
    }
    Ok((weight, over))
}

fn parse_expect(l: &Line) -> Result<ExpectKind> {
    let (what, rest) = l.rest.split_once(char::is_whitespace).unwrap_or((l.rest, ""));
    let rest = rest.trim();
    let eq = |s: &str| -> Result<(String, String)> {
        s.split_once('=')
            .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
            .ok_or_else(|| perr(l.no, l.col, "expected `lhs = value`"))
    };
    let num =
        |s: &str| -> Result<usize> { s.trim().parse().map_err(|_| perr(l.no, l.col, format!("`{s}` is not a count"))) };
    Ok(match what {
        "trace" => {
            let (h, value) = eq(rest)?;
            ExpectKind::Trace { h, value }
        }
        "form" => {
            let (w, value) = eq(rest)?;
            ExpectKind::Form { w, value }
        }
        "class" => {
            let (h, value) = eq(rest)?;
            ExpectKind::Class { h, value }
        }
        "verdict" => ExpectKind::Verdict(rest.to_string()),
        "witness" => ExpectKind::Witness(rest.to_string()),
        "relation" => ExpectKind::Relation(rest.to_string()),
        "exit" => {
            let (command, code) =
                rest.split_once(char::is_whitespace).ok_or_else(|| perr(l.no, l.col, "expected `exit COMMAND N`"))?;
            ExpectKind::Exit { command: command.to_string(), code: num(code)? as i32 }
        }
        "weights" if rest == "absent" => ExpectKind::Weights(None),
        "weights" => ExpectKind::Weights(Some(
            rest.split_whitespace()
                .map(|t| t.parse().map_err(|_| perr(l.no, l.col, format!("`{t}` is not a weight"))))
                .collect::<Result<Vec<u32>>>()?,
        )),
        "degree" => ExpectKind::Degree(num(rest)?),
        "weight-degree" => ExpectKind::WeightDegree(num(rest)?),
        "distinct" => {
            let (point, count) = eq(rest)?;
            ExpectKind::Distinct { point, count: num(&count)? }
        }
        "multiplicity" => {
            let (point, count) = eq(rest)?;
            ExpectKind::Multiplicity { point, count: num(&count)? }
        }
        "pullback" => {
            let (point, count) = eq(rest)?;
            ExpectKind::Pullback { point, count: num(&count)? }
        }
        other => return Err(perr(l.no, l.col, format!("unknown expectation `{other}`"))),
    })
}
