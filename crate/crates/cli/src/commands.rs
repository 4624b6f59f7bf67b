//! Subcommands over a parsed family.

use std::cell::OnceCell;
use std::collections::BTreeSet;

use serde_json::{json, Value};

use cycletrace::covering::{
    classifying_map, fiber_count, fiber_monomials, multiplicity_of_point, Covering, ImplicitCovering, WeightedComponent,
};
use cycletrace::flatness::{
    certify_agf, cycle_pullback, weight_search, Bounds, ComponentData, FamilyComponent, PulledComponent, Traced,
    Verdict, VerdictKind, WeightAssignment, WeightedFamily,
};
use cycletrace::fundclass::{grothendieck_residue, trace_via_class, ResidueProblem};
use cycletrace::poly::{parse_poly, parse_ratfun, IntegralRelation, Poly, RationalFunction, Var, Q};
use cycletrace::traceforms::{parse_form, trace_form, RelativeForm};
use cycletrace::{Error, Result};

use crate::family::{parse_family, ExpectKind, Expectation, Family};
use crate::report::{Record, Report};

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub form_degree: Option<usize>,
    pub monomial_degree: Option<u32>,
    pub max_weight: u32,
    pub trials: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, form_degree: None, monomial_degree: None, max_weight: 8, trials: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    /// Functions or forms; every fiber monomial up to the monomial degree when empty.
    Trace(Vec<String>),
    Classify,
    Check,
    Weights,
    /// Extra points besides the `point` lines of the file.
    Fibers(Vec<String>),
    Residue(Vec<String>),
    Pullback,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Trace(_) => "trace",
            Command::Classify => "classify",
            Command::Check => "check",
            Command::Weights => "weights",
            Command::Fibers(_) => "fibers",
            Command::Residue(_) => "residue",
            Command::Pullback => "pullback",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Some(match name {
            "trace" => Command::Trace(Vec::new()),
            "classify" => Command::Classify,
            "check" => Command::Check,
            "weights" => Command::Weights,
            "fibers" => Command::Fibers(Vec::new()),
            "residue" => Command::Residue(Vec::new()),
            "pullback" => Command::Pullback,
            _ => return None,
        })
    }
}

/// Error text, with `input:line:col` for positioned errors.
pub fn describe(e: &Error, input: &str) -> String {
    match e {
        Error::Parse { line, col, msg } => format!("{input}:{line}:{col}: {msg}"),
        Error::Invalid(m) => format!("{input}: semantic error: {m}"),
        other => format!("{input}: {other}"),
    }
}

fn error_record(e: &Error, input: &str) -> Record {
    let text = describe(e, input);
    let mut r = Record::new("error", format!("error: {text}")).with("message", text);
    if let Error::Parse { line, col, .. } = e {
        r = r.with("line", *line).with("column", *col);
    }
    r
}

/// Family with lazily computed shared results.
pub struct Session<'a> {
    pub fam: &'a Family,
    pub opts: &'a Options,
    covering: OnceCell<std::result::Result<Covering, Error>>,
    verdict: OnceCell<std::result::Result<Verdict, Error>>,
    weights: OnceCell<std::result::Result<Option<WeightAssignment>, Error>>,
    pulled: OnceCell<std::result::Result<Vec<PulledComponent>, Error>>,
}

impl<'a> Session<'a> {
    pub fn new(fam: &'a Family, opts: &'a Options) -> Self {
        Session {
            fam,
            opts,
            covering: OnceCell::new(),
            verdict: OnceCell::new(),
            weights: OnceCell::new(),
            pulled: OnceCell::new(),
        }
    }

    fn s(&self, r: &RationalFunction) -> String {
        self.fam.vars.ratfun(r)
    }

    fn p(&self, r: &Poly) -> String {
        self.fam.vars.poly(r)
    }

    pub fn covering(&self) -> Result<&Covering> {
        self.covering.get_or_init(|| self.fam.family.covering()).as_ref().map_err(Clone::clone)
    }

    /// Every available route to `trace0`, labelled.
    pub fn routes(&self) -> Result<Vec<(&'static str, Covering)>> {
        let c = self.covering()?.clone();
        let mut out = Vec::new();
        match &c {
            Covering::Parametric(_) => {
                out.push(("branches", c.clone()));
                if let Some(g) = &self.fam.ideal {
                    out.push((
                        "multiplication",
                        Covering::Implicit(ImplicitCovering::new(self.fam.scale().clone(), g.clone())?),
                    ));
                }
            }
            Covering::Implicit(_) => out.push(("multiplication", c.clone())),
        }
        Ok(out)
    }

    fn implicit(&self) -> Result<ImplicitCovering> {
        if let Ok(Covering::Implicit(c)) = self.covering() {
            return Ok(c.clone());
        }
        match &self.fam.ideal {
            Some(g) => ImplicitCovering::new(self.fam.scale().clone(), g.clone()),
            None => Err(Error::Invalid("family has no equations (`ideal`)".into())),
        }
    }

    fn complete_intersection(&self) -> Result<ImplicitCovering> {
        match &self.fam.complete_intersection {
            Some(g) => ImplicitCovering::new(self.fam.scale().clone(), g.clone()),
            None => Err(Error::Invalid("family has no `complete-intersection`".into())),
        }
    }

    pub fn bounds(&self) -> Result<Bounds> {
        let d = Bounds::defaults(self.covering()?);
        Ok(Bounds {
            form_degree: self.opts.form_degree.unwrap_or(d.form_degree),
            monomial_degree: self.opts.monomial_degree.unwrap_or(d.monomial_degree),
        })
    }

    pub fn verdict(&self) -> Result<&Verdict> {
        self.verdict
            .get_or_init(|| {
                let bounds = match self.covering() {
                    Ok(_) => self.bounds()?,
                    // a stratified family only reaches the degree check
                    Err(_) => Bounds { form_degree: 0, monomial_degree: 0 },
                };
                certify_agf(&self.fam.family, bounds)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn weights(&self) -> Result<&Option<WeightAssignment>> {
        self.weights
            .get_or_init(|| weight_search(&self.fam.family, self.opts.max_weight, self.opts.seed))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn pulled(&self) -> Result<&Vec<PulledComponent>> {
        self.pulled
            .get_or_init(|| {
                if self.fam.cycles.is_empty() {
                    return Err(Error::Invalid("family declares no `cycle`".into()));
                }
                let fam = &self.fam.family;
                let parametric = fam.components.iter().any(|c| matches!(c.data, ComponentData::Parametric(_)));
                match (&self.fam.ideal, parametric) {
                    (Some(g), true) => {
                        let comp =
                            FamilyComponent { weight: 1, stratum: None, data: ComponentData::Implicit(g.clone()) };
                        let implicit = WeightedFamily::new(fam.scale.clone(), vec![comp]);
                        cycle_pullback(&implicit, &self.fam.cycles, self.opts.seed)
                    }
                    _ => cycle_pullback(fam, &self.fam.cycles, self.opts.seed),
                }
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn equal(&self, a: &RationalFunction, b: &RationalFunction) -> bool {
        self.fam.scale().base_field().equal(a, b)
    }

    fn forms_equal(&self, a: &RelativeForm, b: &RelativeForm) -> bool {
        let keys: BTreeSet<Vec<Var>> = a.terms().chain(b.terms()).map(|(k, _)| k.clone()).collect();
        keys.iter().all(|k| self.equal(&a.coefficient(k), &b.coefficient(k)))
    }

    fn default_items(&self) -> Vec<String> {
        let d = self.opts.monomial_degree.unwrap_or(2);
        fiber_monomials(&self.fam.scale().fiber, d).iter().map(|m| self.fam.vars.monomial(m)).collect()
    }

    fn function(&self, h: &str) -> Result<Poly> {
        parse_poly(h, &self.fam.vars)
    }

    /// `trace0(h)` on every route, with agreement.
    pub fn trace_function(&self, h: &Poly) -> Result<(Vec<(&'static str, RationalFunction)>, bool)> {
        let values = self.routes()?.into_iter().map(|(n, c)| Ok((n, c.trace0(h)?))).collect::<Result<Vec<_>>>()?;
        let agree = values.windows(2).all(|w| self.equal(&w[0].1, &w[1].1));
        Ok((values, agree))
    }

    pub fn trace_form(&self, w: &RelativeForm) -> Result<RelativeForm> {
        match self.covering()? {
            Covering::Parametric(c) => trace_form(c, w),
            Covering::Implicit(_) => Err(Error::Invalid("forms are traced through explicit branches only".into())),
        }
    }

    pub fn base_multiplicity(&self, point: &[Q]) -> Result<usize> {
        let scale = self.fam.scale();
        let gens = scale.base_ideal.gens().to_vec();
        if gens.is_empty() {
            return Ok(1);
        }
        // the chart is a smooth factor, so the base coordinates suffice
        let ambient = scale.base.clone();
        let n = ambient.len().saturating_sub(gens.len());
        let comps = [WeightedComponent { weight: 1, gens }];
        multiplicity_of_point(&point[..ambient.len()], &comps, &ambient, n, self.opts.trials, self.opts.seed)
    }

    pub fn distinct(&self, point: &[Q]) -> Result<usize> {
        Ok(fiber_count(&self.implicit()?, point, self.opts.seed)?.distinct)
    }

    fn point_text(&self, p: &[Q]) -> String {
        p.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")
    }

    fn verdict_records(&self, v: &Verdict) -> Vec<Record> {
        let mut r = Record::new("verdict", format!("verdict {} ({} items traced)", v.kind.name(), v.checked))
            .with("verdict", v.kind.name())
            .with("checked", v.checked);
        if let VerdictKind::AgfCertified { form_degree, monomial_degree } = v.kind {
            r = r.with("form_degree", form_degree).with("monomial_degree", monomial_degree);
        }
        let mut out = vec![r];
        if let Some(w) = &v.witness {
            let vars = &self.fam.vars;
            let item = match &w.item {
                Traced::Function(m) => vars.monomial(m),
                Traced::Form(f) => f.display(vars),
                Traced::Degrees(t) => {
                    let ds: Vec<String> = t.rows.iter().map(|r| r.degree.to_string()).collect();
                    format!("fiber degrees {}", ds.join(" "))
                }
            };
            let relation = w.relation.as_ref().map(|r| r.display("s", vars));
            let mut text = format!("witness {} in trace of {}", self.s(&w.coefficient), item);
            if let Some(rel) = &relation {
                text.push_str(&format!(", integral: {rel} = 0"));
            }
            if let Some(n) = &w.note {
                text.push_str(&format!(" ({n})"));
            }
            let diffs: Vec<String> = w.differentials.iter().map(|&d| format!("d{}", vars.name(d))).collect();
            out.push(
                Record::new("witness", text)
                    .with("item", item)
                    .with("trace", w.trace.display(vars))
                    .with("differentials", diffs)
                    .with("chart_monomial", vars.monomial(&w.chart_monomial))
                    .with("coefficient", self.s(&w.coefficient))
                    .with("relation", relation.map_or(Value::Null, Value::from))
                    .with("note", w.note.clone().map_or(Value::Null, Value::from)),
            );
        }
        out
    }

    fn weights_record(&self, w: &Option<WeightAssignment>) -> Record {
        match w {
            Some(a) => {
                let ws: Vec<String> = a.weights.iter().map(|w| w.to_string()).collect();
                Record::new("weights", format!("weights {} (degree {})", ws.join(" "), a.degree))
                    .with("weights", a.weights.clone())
                    .with("degree", a.degree)
            }
            None => Record::new("weights", format!("weights absent (max weight {})", self.opts.max_weight))
                .with("weights", Value::Null)
                .with("degree", Value::Null),
        }
    }

    pub fn execute(&self, cmd: &Command, report: &mut Report) -> Result<()> {
        match cmd {
            Command::Trace(items) => {
                let items = if items.is_empty() { self.default_items() } else { items.clone() };
                for item in &items {
                    let w = parse_form(item, &self.fam.vars)?;
                    if w.degree() == 0 && w.coefficient(&[]).is_polynomial() {
                        let h = self.function(item)?;
                        let (values, agree) = self.trace_function(&h)?;
                        let first = self.s(&values[0].1);
                        let mut r = Record::new("trace", format!("trace {item} = {first}"))
                            .with("item", item.as_str())
                            .with("value", first.as_str())
                            .with("agree", agree);
                        for (n, v) in &values {
                            r = r.with(n, self.s(v));
                        }
                        if !agree {
                            r.text.push_str("  (routes disagree)");
                            report.fail(1);
                        }
                        report.push(r);
                    } else {
                        let t = self.trace_form(&w)?;
                        let shown = t.display(&self.fam.vars);
                        report.push(
                            Record::new("form", format!("trace {item} = {shown}"))
                                .with("item", item.as_str())
                                .with("value", shown),
                        );
                    }
                }
            }
            Command::Classify => {
                let c = self.covering()?;
                let d = self.opts.monomial_degree.unwrap_or(c.degree() as u32);
                report.monomial_degree = Some(d);
                let map = classifying_map(c, d)?;
                report.push(Record::new("degree", format!("degree {}", map.degree)).with("degree", map.degree));
                for e in &map.entries {
                    let m = self.fam.vars.monomial(&e.monomial);
                    let v = self.s(&e.value);
                    let tag = if e.regular.is_some() { "regular" } else { "not regular" };
                    report.push(
                        Record::new("entry", format!("N[{m}] = {v}  {tag}"))
                            .with("monomial", m)
                            .with("value", v)
                            .with("regular", e.regular.is_some())
                            .with("regular_value", e.regular.as_ref().map_or(Value::Null, |p| self.p(p).into())),
                    );
                }
            }
            Command::Check => {
                if self.covering().is_ok() {
                    let b = self.bounds()?;
                    report.form_degree = Some(b.form_degree);
                    report.monomial_degree = Some(b.monomial_degree);
                }
                let v = self.verdict()?;
                for r in self.verdict_records(v) {
                    report.push(r);
                }
                if !matches!(v.kind, VerdictKind::AgfCertified { .. }) {
                    report.fail(1);
                }
            }
            Command::Weights => {
                let w = self.weights()?;
                report.push(self.weights_record(w));
                if w.is_none() {
                    report.fail(1);
                }
            }
            Command::Fibers(extra) => {
                let mut points = self.fam.points.clone();
                for p in extra {
                    points.push(self.fam.parse_point(p)?);
                }
                if points.is_empty() {
                    return Err(Error::Invalid("no points given (`point` lines or --point)".into()));
                }
                let implicit = self.implicit().ok();
                for p in &points {
                    let mu = self.base_multiplicity(p)?;
                    let pt = self.point_text(p);
                    let mut r = Record::new("fiber", format!("point {pt}: base multiplicity {mu}"))
                        .with("point", p.iter().map(|q| q.to_string()).collect::<Vec<_>>())
                        .with("base_multiplicity", mu);
                    match &implicit {
                        Some(c) => {
                            let n = fiber_count(c, p, self.opts.seed)?;
                            r.text
                                .push_str(&format!(", fiber {} points, {} distinct", n.with_multiplicity, n.distinct));
                            r = r.with("with_multiplicity", n.with_multiplicity).with("distinct", n.distinct);
                        }
                        None => r = r.with("with_multiplicity", Value::Null).with("distinct", Value::Null),
                    }
                    report.push(r);
                }
            }
            Command::Residue(items) => {
                let ci = self.complete_intersection()?;
                let items = if items.is_empty() { self.default_items() } else { items.clone() };
                let fiber = self.fam.scale().fiber.clone();
                for item in &items {
                    let h = self.function(item)?;
                    let rp = ResidueProblem {
                        h: h.clone(),
                        denominators: ci.gens().to_vec(),
                        fiber: fiber.clone(),
                        base: self.fam.scale().base_field(),
                    };
                    let res = grothendieck_residue(&rp)?;
                    let class = trace_via_class(&ci, &h)?;
                    let mut r = Record::new(
                        "residue",
                        format!("res {item} = {}, class trace = {}", self.s(&res), self.s(&class)),
                    )
                    .with("item", item.as_str())
                    .with("residue", self.s(&res))
                    .with("class_trace", self.s(&class));
                    if let Ok(c) = self.covering() {
                        let t = c.trace0(&h)?;
                        let agree = self.equal(&t, &class);
                        r = r.with("trace", self.s(&t)).with("agree", agree);
                        if !agree {
                            r.text.push_str(&format!("  (trace0 gives {})", self.s(&t)));
                            report.fail(1);
                        }
                    }
                    report.push(r);
                }
            }
            Command::Pullback => {
                for (i, comp) in self.pulled()?.iter().enumerate() {
                    for s in &comp.samples {
                        let pt = self.point_text(&s.point);
                        let groups: Vec<String> =
                            s.groups.iter().map(|g| format!("{}x{}", g.points, g.multiplicity)).collect();
                        let data: Vec<Value> = s
                            .groups
                            .iter()
                            .map(|g| json!({ "points": g.points, "multiplicity": g.multiplicity }))
                            .collect();
                        report.push(
                            Record::new(
                                "pullback",
                                format!("cycle {} at {pt}: degree {} [{}]", i + 1, s.degree, groups.join(", ")),
                            )
                            .with("cycle", i + 1)
                            .with("weight", comp.weight)
                            .with("point", s.point.iter().map(|q| q.to_string()).collect::<Vec<_>>())
                            .with("degree", s.degree)
                            .with("groups", data),
                        );
                    }
                }
            }
        }
        Ok(())
    }

    /// Exit code the named command would give.
    fn exit_of(&self, command: &str) -> Result<i32> {
        match command {
            "check" => Ok(match self.verdict() {
                Ok(v) if matches!(v.kind, VerdictKind::AgfCertified { .. }) => 0,
                Ok(_) => 1,
                Err(_) => 2,
            }),
            "weights" => Ok(match self.weights() {
                Ok(Some(_)) => 0,
                Ok(None) => 1,
                Err(_) => 2,
            }),
            other => {
                let cmd =
                    Command::from_name(other).ok_or_else(|| Error::Invalid(format!("unknown command `{other}`")))?;
                let mut r = Report::new(other, "", "", self.opts.seed);
                if self.execute(&cmd, &mut r).is_err() {
                    r.fail(2);
                }
                Ok(r.exit)
            }
        }
    }

    /// Checks one expectation: `(passed, what was found)`.
    pub fn expectation(&self, e: &Expectation) -> Result<(bool, String)> {
        let vars = &self.fam.vars;
        Ok(match &e.kind {
            ExpectKind::Trace { h, value } => {
                let want = parse_ratfun(value, vars)?;
                let (values, agree) = self.trace_function(&self.function(h)?)?;
                let ok = agree && values.iter().all(|(_, v)| self.equal(v, &want));
                let got: Vec<String> = values.iter().map(|(n, v)| format!("{n}: {}", self.s(v))).collect();
                (ok, got.join("; "))
            }
            ExpectKind::Form { w, value } => {
                let got = self.trace_form(&parse_form(w, vars)?)?;
                (self.forms_equal(&got, &parse_form(value, vars)?), got.display(vars))
            }
            ExpectKind::Class { h, value } => {
                let got = trace_via_class(&self.complete_intersection()?, &self.function(h)?)?;
                (self.equal(&got, &parse_ratfun(value, vars)?), self.s(&got))
            }
            ExpectKind::Verdict(name) => {
                let got = self.verdict()?.kind.name();
                (got == name, got.to_string())
            }
            ExpectKind::Witness(r) => match &self.verdict()?.witness {
                Some(w) => (self.equal(&w.coefficient, &parse_ratfun(r, vars)?), self.s(&w.coefficient)),
                None => (false, "no witness".into()),
            },
            ExpectKind::Relation(text) => match &self.verdict()?.witness {
                Some(w) => {
                    let found = w.relation.as_ref().map_or("none".to_string(), |r| r.display("s", vars));
                    (relation_holds(self.fam, text, &w.coefficient)?, found)
                }
                None => (false, "no witness".into()),
            },
            ExpectKind::Exit { command, code } => {
                let got = self.exit_of(command)?;
                (got == *code, got.to_string())
            }
            ExpectKind::Weights(want) => {
                let got = self.weights()?;
                let shown = match got {
                    Some(a) => a.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" "),
                    None => "absent".into(),
                };
                (got.as_ref().map(|a| &a.weights) == want.as_ref(), shown)
            }
            ExpectKind::WeightDegree(n) => match self.weights()? {
                Some(a) => (a.degree == *n, a.degree.to_string()),
                None => (false, "absent".into()),
            },
            ExpectKind::Degree(n) => {
                let d = self.covering()?.degree();
                (d == *n, d.to_string())
            }
            ExpectKind::Distinct { point, count } => {
                let d = self.distinct(&self.fam.parse_point(point)?)?;
                (d == *count, d.to_string())
            }
            ExpectKind::Multiplicity { point, count } => {
                let m = self.base_multiplicity(&self.fam.parse_point(point)?)?;
                (m == *count, m.to_string())
            }
            ExpectKind::Pullback { point, count } => {
                let p = self.fam.parse_point(point)?;
                let found: Vec<usize> =
                    self.pulled()?.iter().flat_map(|c| &c.samples).filter(|s| s.point == p).map(|s| s.degree).collect();
                match found.as_slice() {
                    [d] => (d == count, d.to_string()),
                    [] => (false, "no cycle sampled there".into()),
                    many => (false, format!("{} samples there", many.len())),
                }
            }
        })
    }
}

/// Does the monic polynomial `text` in `s` vanish at `value` on the base?
pub fn relation_holds(fam: &Family, text: &str, value: &RationalFunction) -> Result<bool> {
    let mut vars = fam.vars.clone();
    let s = match vars.get("s") {
        Some(_) => return Err(Error::Invalid("`s` is a family variable; relations are written in `s`".into())),
        None => vars.intern("s"),
    };
    let p = parse_poly(text, &vars)?;
    let coeffs = p.univariate_coeffs(s);
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 || !coeffs[degree].is_one() {
        return Err(Error::Invalid(format!("relation `{text}` is not monic in s")));
    }
    let rel = IntegralRelation { degree, coeffs: coeffs[..degree].to_vec() };
    Ok(rel.holds(value.num(), value.den(), &fam.scale().base_ideal))
}

pub fn run(cmd: &Command, input: &str, text: &str, opts: &Options) -> Report {
    let mut report = Report::new(cmd.name(), input, text, opts.seed);
    report.form_degree = opts.form_degree;
    report.monomial_degree = opts.monomial_degree;
    let result = parse_family(text).and_then(|fam| Session::new(&fam, opts).execute(cmd, &mut report));
    if let Err(e) = result {
        report.push(error_record(&e, input));
        report.fail(2);
    }
    report
}

/// Outcome of one corpus file.
pub struct ItemOutcome {
    pub records: Vec<Record>,
    pub failures: usize,
    pub errored: bool,
}

pub fn check_item(name: &str, text: &str, opts: &Options) -> ItemOutcome {
    let digest = crate::report::sha256_hex(text.as_bytes());
    let fam = match parse_family(text) {
        Ok(f) => f,
        Err(e) => {
            return ItemOutcome {
                records: vec![
                    Record::new("item", format!("{name}: unreadable")).with("item", name).with("sha256", digest),
                    error_record(&e, name),
                ],
                failures: 0,
                errored: true,
            }
        }
    };
    let session = Session::new(&fam, opts);
    let mut records = Vec::new();
    let mut failures = 0;
    let mut errored = false;
    for e in &fam.expectations {
        let (pass, got) = match session.expectation(e) {
            Ok(r) => r,
            Err(err) => {
                errored = true;
                (false, format!("error: {}", describe(&err, name)))
            }
        };
        if !pass {
            failures += 1;
        }
        let what = expectation_text(&e.kind);
        let mark = if pass { "ok  " } else { "FAIL" };
        records.push(
            Record::new("expectation", format!("  {mark} {name}:{} {what} [{}] got {got}", e.line, e.origin.as_str()))
                .with("item", name)
                .with("line", e.line)
                .with("origin", e.origin.as_str())
                .with("expect", what)
                .with("got", got)
                .with("pass", pass),
        );
    }
    let total = fam.expectations.len();
    let head = Record::new("item", format!("{name}: {}/{} expectations met", total - failures, total))
        .with("item", name)
        .with("family", fam.name.as_str())
        .with("sha256", digest)
        .with("expectations", total)
        .with("failures", failures);
    records.insert(0, head);
    ItemOutcome { records, failures, errored }
}

fn expectation_text(k: &ExpectKind) -> String {
    match k {
        ExpectKind::Trace { h, value } => format!("trace {h} = {value}"),
        ExpectKind::Form { w, value } => format!("form {w} = {value}"),
        ExpectKind::Class { h, value } => format!("class {h} = {value}"),
        ExpectKind::Verdict(v) => format!("verdict {v}"),
        ExpectKind::Witness(w) => format!("witness {w}"),
        ExpectKind::Relation(r) => format!("relation {r}"),
        ExpectKind::Exit { command, code } => format!("exit {command} {code}"),
        ExpectKind::Weights(Some(w)) => {
            format!("weights {}", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        }
        ExpectKind::Weights(None) => "weights absent".into(),
        ExpectKind::WeightDegree(n) => format!("weight-degree {n}"),
        ExpectKind::Degree(n) => format!("degree {n}"),
        ExpectKind::Distinct { point, count } => format!("distinct {point} = {count}"),
        ExpectKind::Multiplicity { point, count } => format!("multiplicity {point} = {count}"),
        ExpectKind::Pullback { point, count } => format!("pullback {point} = {count}"),
    }
}

/// Runs every item, in parallel, reporting in the given order.
pub fn run_corpus(items: &[(String, String)], opts: &Options) -> Report {
    let all: String = items.iter().map(|(n, t)| format!("{n}\n{t}")).collect();
    let mut report = Report::new("corpus", &format!("{} items", items.len()), &all, opts.seed);
    report.form_degree = opts.form_degree;
    report.monomial_degree = opts.monomial_degree;
    let outcomes: Vec<ItemOutcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = items.iter().map(|(n, t)| scope.spawn(move || check_item(n, t, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("corpus worker panicked")).collect()
    });
    for o in outcomes {
        if o.errored {
            report.fail(2);
        } else if o.failures > 0 {
            report.fail(1);
        }
        for r in o.records {
            report.push(r);
        }
    }
    report
}
