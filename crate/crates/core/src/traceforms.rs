//! Relative differential forms in `dt, dx`, their pullback along branches,
//! traces over parametric coverings, and Newton forms.
//!
//! A form is a map from sorted lists of differentiated variables to
//! coefficients. Variables are ordered by id, so when chart variables are
//! declared before fiber variables every `dt` precedes every `dx`.

use std::collections::{BTreeMap, HashMap};

use crate::covering::{regular_value, ParametricCovering};
use crate::error::{Error, Result};
use crate::poly::{parse_expr, Expr, Ideal, Monomial, Poly, RationalFunction, Var, VarTable, Q};

#[derive(Clone, Debug, PartialEq, Default)]
pub struct RelativeForm {
    terms: BTreeMap<Vec<Var>, RationalFunction>,
}

/// Traces land in forms with only chart differentials.
pub type TracedForm = RelativeForm;

/// Sorts differentials, returning the sign of the permutation, or `None` on a repeat.
fn normalize(mut d: Vec<Var>) -> Option<(Vec<Var>, bool)> {
    let mut neg = false;
    for i in 1..d.len() {
        let mut j = i;
        while j > 0 && d[j - 1] > d[j] {
            d.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if d.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((d, neg))
}

impl RelativeForm {
    pub fn zero() -> Self {
        RelativeForm::default()
    }

    pub fn function(f: RationalFunction) -> Self {
        RelativeForm::term(f, Vec::new())
    }

    pub fn from_poly(p: Poly) -> Self {
        RelativeForm::function(RationalFunction::from_poly(p))
    }

    pub fn differential(v: Var) -> Self {
        RelativeForm::term(RationalFunction::one(), vec![v])
    }

    /// `c * d(v_1) ^ ... ^ d(v_r)` in any order.
    pub fn term(c: RationalFunction, diffs: Vec<Var>) -> Self {
        let mut f = RelativeForm::zero();
        if let Some((d, neg)) = normalize(diffs) {
            f.add_term(d, if neg { -&c } else { c });
        }
        f
    }

    fn add_term(&mut self, d: Vec<Var>, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&d) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(d, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Var>, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, diffs: &[Var]) -> RationalFunction {
        self.terms.get(diffs).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest number of differentials in a term.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &RelativeForm) -> RelativeForm {
        let mut out = self.clone();
        for (d, c) in &o.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &RelativeForm) -> RelativeForm {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RelativeForm {
        RelativeForm { terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect() }
    }

    pub fn scale(&self, f: &RationalFunction) -> RelativeForm {
        let mut out = RelativeForm::zero();
        for (d, c) in &self.terms {
            out.add_term(d.clone(), c * f);
        }
        out
    }

    pub fn wedge(&self, o: &RelativeForm) -> RelativeForm {
        let mut out = RelativeForm::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &o.terms {
                let mut d = d1.clone();
                d.extend(d2.iter().copied());
                if let Some((d, neg)) = normalize(d) {
                    let c = c1 * c2;
                    out.add_term(d, if neg { -&c } else { c });
                }
            }
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients<F: FnMut(&RationalFunction) -> Result<RationalFunction>>(&self, mut f: F) -> Result<Self> {
        let mut out = RelativeForm::zero();
        for (d, c) in &self.terms {
            out.add_term(d.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Exterior derivative in the variables `vars`; all others are constants.
    pub fn d_relative(&self, vars: &[Var]) -> RelativeForm {
        let mut out = RelativeForm::zero();
        for (d, c) in &self.terms {
            for &v in vars {
                let dc = c.derivative(v);
                if dc.is_zero() {
                    continue;
                }
                let mut k = vec![v];
                k.extend(d.iter().copied());
                if let Some((k, neg)) = normalize(k) {
                    out.add_term(k, if neg { -&dc } else { dc });
                }
            }
        }
        out
    }

    /// Substitutes a branch `x = f(s, t)`: coefficients are composed and each
    /// `dx_j` becomes `sum_i df_j/dt_i dt_i`. Differentials of other variables stay.
    pub fn pullback(&self, branch: &HashMap<Var, RationalFunction>, chart: &[Var]) -> RelativeForm {
        let images: HashMap<Var, RelativeForm> = branch
            .iter()
            .map(|(&x, f)| {
                let mut img = RelativeForm::zero();
                for &t in chart {
                    img.add_term(vec![t], f.derivative(t));
                }
                (x, img)
            })
            .collect();
        let mut out = RelativeForm::zero();
        for (d, c) in &self.terms {
            let mut acc = RelativeForm::function(c.substitute(branch));
            for v in d {
                let piece = images.get(v).cloned().unwrap_or_else(|| RelativeForm::differential(*v));
                acc = acc.wedge(&piece);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Variables appearing in coefficients or differentials.
    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut s = std::collections::BTreeSet::new();
        for (d, c) in &self.terms {
            s.extend(d.iter().copied());
            s.extend(c.vars());
        }
        s
    }

    /// Text form such as `u*du + 3/2*t*dv`, wedge written `^`.
    pub fn display(&self, vars: &VarTable) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let diff: Vec<String> = d.iter().map(|&v| format!("d{}", vars.name(v))).collect();
            let diff = diff.join("^");
            let mut coef = vars.ratfun(c);
            let neg = coef.starts_with('-') && (c.num().len() == 1);
            if neg {
                coef.remove(0);
            }
            let needs_paren = !c.is_polynomial() || c.num().len() > 1;
            let body = match (diff.is_empty(), coef.as_str()) {
                (true, _) => coef.clone(),
                (false, "1") => diff.clone(),
                (false, _) if needs_paren => format!("({coef})*{diff}"),
                (false, _) => format!("{coef}*{diff}"),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn form_err(col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line: 1, col, msg: msg.into() }
}

fn eval_form(e: &Expr, vars: &VarTable) -> Result<RelativeForm> {
    Ok(match e {
        Expr::Num(n) => RelativeForm::function(RationalFunction::constant(Q::from_integer(n.clone()))),
        Expr::Ident { name, col } => match vars.get(name) {
            Some(v) => RelativeForm::from_poly(Poly::var(v)),
            None => match name.strip_prefix('d').and_then(|n| vars.get(n)) {
                Some(v) => RelativeForm::differential(v),
                None => return Err(form_err(*col, format!("unknown variable `{name}`"))),
            },
        },
        Expr::Neg(a) => eval_form(a, vars)?.neg(),
        Expr::Add(a, b) => eval_form(a, vars)?.add(&eval_form(b, vars)?),
        Expr::Sub(a, b) => eval_form(a, vars)?.sub(&eval_form(b, vars)?),
        Expr::Mul(a, b) | Expr::Wedge(a, b) => eval_form(a, vars)?.wedge(&eval_form(b, vars)?),
        Expr::Div(a, b) => {
            let d = eval_form(b, vars)?;
            let f = match (d.degree(), d.terms.get(&Vec::new())) {
                (0, Some(f)) if d.terms.len() == 1 => f.clone(),
                _ => return Err(form_err(1, "division by a form or by zero")),
            };
            eval_form(a, vars)?.scale(&f.recip())
        }
        Expr::Pow(a, k) => {
            let base = eval_form(a, vars)?;
            if base.degree() > 0 {
                return Err(form_err(1, "power of a form of positive degree"));
            }
            let f = base.coefficient(&[]);
            RelativeForm::function(f.pow(*k))
        }
    })
}

/// Parses `u*du + 3/2*t*dv`; `d<var>` is a differential and `^` between differentials is the wedge.
pub fn parse_form(s: &str, vars: &VarTable) -> Result<RelativeForm> {
    eval_form(&parse_expr(s)?, vars)
}

/// Weighted branch sum of pullbacks, descended to the base chart.
pub fn trace_form(c: &ParametricCovering, omega: &RelativeForm) -> Result<TracedForm> {
    let scale = c.scale();
    let lifted = match c.uniformization() {
        Some(u) => omega.map_coefficients(|f| Ok(u.pull(f)))?,
        None => omega.clone(),
    };
    let mut acc = RelativeForm::zero();
    for comp in c.components() {
        let w = RationalFunction::constant(Q::from_integer(comp.weight.into()));
        for b in &comp.branches {
            let m: HashMap<Var, RationalFunction> = scale.fiber.iter().copied().zip(b.0.iter().cloned()).collect();
            acc = acc.add(&lifted.pullback(&m, &scale.chart).scale(&w));
        }
    }
    if let Some((d, _)) = acc.terms().find(|(d, _)| d.iter().any(|v| !scale.chart.contains(v))) {
        return Err(Error::Invalid(format!("differential of variable {} survives the trace", d[0])));
    }
    acc.map_coefficients(|f| c.descend(f))
}

/// Multi-indices for a Newton form `w_{I,J}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonIndices {
    /// Exponent of each fiber coordinate.
    pub i: Vec<u32>,
    /// Differentiated fiber coordinates, by position.
    pub j: Vec<usize>,
}

/// `w_{I,J} = sum_j x^(j)^I dx^(j)^J` on the product of `k` labelled copies;
/// `copies[j][a]` is the variable of coordinate `a` in copy `j`.
pub fn newton_form(idx: &NewtonIndices, copies: &[Vec<Var>]) -> Result<RelativeForm> {
    let p = idx.i.len();
    let mut out = RelativeForm::zero();
    for c in copies {
        if c.len() != p || idx.j.iter().any(|&a| a >= p) {
            return Err(Error::DimensionMismatch("newton form indices do not match the copies".into()));
        }
        let m = Monomial::from_pairs(c.iter().copied().zip(idx.i.iter().copied()));
        let diffs: Vec<Var> = idx.j.iter().map(|&a| c[a]).collect();
        out = out.add(&RelativeForm::term(RationalFunction::from_poly(Poly::monomial(m)), diffs));
    }
    Ok(out)
}

/// A traced coefficient broken into pieces: by chart monomial when the
/// denominator does not involve the chart, otherwise whole.
pub fn split_coefficient(r: &RationalFunction, chart: &[Var]) -> Vec<(Monomial, RationalFunction)> {
    if r.den().involves_any(chart) || chart.is_empty() {
        return vec![(Monomial::one(), r.clone())];
    }
    r.num().coefficients_in(chart).into_iter().map(|(m, c)| (m, RationalFunction::new(c, r.den().clone()))).collect()
}

/// First piece of a traced form that does not extend regularly over the base.
pub fn first_irregular(
    form: &TracedForm,
    chart: &[Var],
    base_ideal: &Ideal,
) -> Option<(Vec<Var>, Monomial, RationalFunction)> {
    for (d, c) in form.terms() {
        for (m, piece) in split_coefficient(c, chart) {
            if regular_value(&piece, base_ideal).is_none() {
                return Some((d.clone(), m, piece));
            }
        }
    }
    None
}

/// Monomial forms `x^I dx^J` with `|I| + |J| <= bound`, smaller total first,
/// then larger `I` lexicographically, then `J`.
pub fn monomial_forms(fiber: &[Var], bound: u32, max_form_degree: usize) -> Vec<(Vec<u32>, Vec<usize>)> {
    let p = fiber.len();
    let mut out = Vec::new();
    for total in 0..=bound {
        let mut batch = Vec::new();
        for jd in 0..=max_form_degree.min(p).min(total as usize) {
            let ideg = total - jd as u32;
            for m in Monomial::all_of_degree(fiber, ideg) {
                let i: Vec<u32> = fiber.iter().map(|&v| m.exp(v)).collect();
                for j in subsets(p, jd) {
                    batch.push((i.clone(), j));
                }
            }
        }
        batch.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        out.extend(batch);
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in subsets(n, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
    }
    out
}

pub fn monomial_form(fiber: &[Var], i: &[u32], j: &[usize]) -> RelativeForm {
    let m = Monomial::from_pairs(fiber.iter().copied().zip(i.iter().copied()));
    RelativeForm::term(RationalFunction::from_poly(Poly::monomial(m)), j.iter().map(|&a| fiber[a]).collect())
}

/// Outcome of testing regularity of `trace(xi ^ alpha)` over monomial forms `alpha`.
#[derive(Clone, Debug)]
pub struct TracePropertyReport {
    pub checked: usize,
    pub failure: Option<TraceFailure>,
}

#[derive(Clone, Debug)]
pub struct TraceFailure {
    pub alpha: RelativeForm,
    pub trace: TracedForm,
    pub differentials: Vec<Var>,
    pub chart_monomial: Monomial,
    pub coefficient: RationalFunction,
}

impl TracePropertyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn trace_property_check(
    c: &ParametricCovering,
    xi: &RelativeForm,
    alpha_degree_bound: u32,
) -> Result<TracePropertyReport> {
    let scale = c.scale();
    let mut checked = 0;
    if xi.is_zero() {
        return Ok(TracePropertyReport { checked, failure: None });
    }
    let room = scale.chart.len().saturating_sub(xi.degree());
    for (i, j) in monomial_forms(&scale.fiber, alpha_degree_bound, room) {
        let alpha = monomial_form(&scale.fiber, &i, &j);
        let prod = xi.wedge(&alpha);
        if prod.is_zero() {
            continue;
        }
        let tr = trace_form(c, &prod)?;
        checked += 1;
        if let Some((differentials, chart_monomial, coefficient)) =
            first_irregular(&tr, &scale.chart, &scale.base_ideal)
        {
            let failure = TraceFailure { alpha, trace: tr, differentials, chart_monomial, coefficient };
            return Ok(TracePropertyReport { checked, failure: Some(failure) });
        }
    }
    Ok(TracePropertyReport { checked, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{Branch, Component, Scale};
    use crate::poly::parse_ratfun;

    fn whitney() -> (VarTable, ParametricCovering) {
        let t = VarTable::from_names(&["a", "b", "c", "t", "u", "v"]).unwrap();
        let r = |s: &str| parse_ratfun(s, &t).unwrap();
        let scale = Scale::new(vec![0, 1, 2], vec![3], vec![4, 5], vec![r("a^2 - c*b^2").num().clone()]).unwrap();
        let comp = Component {
            weight: 1,
            base_ideal: scale.base_ideal.clone(),
            branches: vec![Branch(vec![r("a*t/b"), r("b")]), Branch(vec![r("-a*t/b"), r("-b")])],
        };
        (t, ParametricCovering::new(scale, vec![comp]).unwrap())
    }

    #[test]
    fn wedge_signs() {
        let du = RelativeForm::differential(4);
        let dv = RelativeForm::differential(5);
        assert_eq!(du.wedge(&dv), dv.wedge(&du).neg());
        assert!(du.wedge(&du).is_zero());
    }

    #[test]
    fn exterior_derivative() {
        let t = VarTable::from_names(&["a", "c", "t", "x", "u", "v"]).unwrap();
        let f = |s: &str| parse_form(s, &t).unwrap();
        let rel = [2, 3, 4, 5];
        assert_eq!(f("u*v").d_relative(&rel), f("u*dv + v*du"));
        assert!(f("c*t^2*dt").d_relative(&rel).is_zero());
        assert_eq!(f("a*t*dx").d_relative(&rel), f("a*dt^dx"));
        let w = f("u^2*v*dt + t*u*dv");
        assert!(w.d_relative(&rel).d_relative(&rel).is_zero());
    }

    #[test]
    fn pullbacks() {
        let t = VarTable::from_names(&["a", "b", "t", "x", "u"]).unwrap();
        let x_sq: HashMap<Var, RationalFunction> = [(3, parse_ratfun("t^2", &t).unwrap())].into();
        assert_eq!(parse_form("dx", &t).unwrap().pullback(&x_sq, &[2]), parse_form("2*t*dt", &t).unwrap());
        let lin: HashMap<Var, RationalFunction> = [(4, parse_ratfun("a*t/b", &t).unwrap())].into();
        assert_eq!(parse_form("du", &t).unwrap().pullback(&lin, &[2]), parse_form("a/b*dt", &t).unwrap());
        let plain = parse_form("a*t*dt", &t).unwrap();
        assert_eq!(plain.pullback(&lin, &[2]), plain);
    }

    #[test]
    fn whitney_form_traces() {
        let (t, c) = whitney();
        let f = |s: &str| parse_form(s, &t).unwrap();
        assert_eq!(trace_form(&c, &f("u*du")).unwrap(), f("2*c*t*dt"));
        assert!(trace_form(&c, &f("v*dv")).unwrap().is_zero());
        assert_eq!(trace_form(&c, &f("u*dv - v*du")).unwrap(), f("-2*a*dt"));
        assert_eq!(trace_form(&c, &f("a*t^2*dt")).unwrap(), f("2*a*t^2*dt"));
        assert!(trace_property_check(&c, &f("du"), 3).unwrap().passed());
        assert!(trace_property_check(&c, &RelativeForm::zero(), 3).unwrap().passed());
    }

    #[test]
    fn newton_forms_and_relation() {
        let s1 = NewtonIndices { i: vec![0], j: vec![0] };
        let w = newton_form(&s1, &[vec![0], vec![1]]).unwrap();
        assert_eq!(w, RelativeForm::differential(0).add(&RelativeForm::differential(1)));
        // sum_h (-1)^h S_{k-h} w_{m+h} vanishes for k = 2
        let e1 = &Poly::var(0) + &Poly::var(1);
        let e2 = &Poly::var(0) * &Poly::var(1);
        let s = [Poly::one(), e1, e2];
        for m in 0..3 {
            let mut acc = RelativeForm::zero();
            for h in 0..=2usize {
                let idx = NewtonIndices { i: vec![m + h as u32], j: vec![0] };
                let term = newton_form(&idx, &[vec![0], vec![1]]).unwrap();
                let coef = RationalFunction::from_poly(s[2 - h].clone());
                let term = term.scale(&coef);
                acc = if h % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            assert!(acc.is_zero());
        }
        // the other index placement does not vanish
        let mut other = RelativeForm::zero();
        for h in 0..=2usize {
            let idx = NewtonIndices { i: vec![h as u32], j: vec![0] };
            let term =
                newton_form(&idx, &[vec![0], vec![1]]).unwrap().scale(&RationalFunction::from_poly(s[h].clone()));
            other = if h % 2 == 0 { other.add(&term) } else { other.sub(&term) };
        }
        assert!(!other.is_zero());
    }

    #[test]
    fn form_text() {
        let t = VarTable::from_names(&["t", "u", "v"]).unwrap();
        for s in ["u*du + 3/2*t*dv", "-2*dt", "du^dv", "(t + 1)*dt"] {
            let f = parse_form(s, &t).unwrap();
            assert_eq!(parse_form(&f.display(&t), &t).unwrap(), f);
        }
        assert_eq!(parse_form("u*du + 3/2*t*dv", &t).unwrap().display(&t), "u*du + 3/2*t*dv");
        assert!(parse_form("dq", &t).is_err());
    }

    #[test]
    fn enumeration_order() {
        let forms = monomial_forms(&[4, 5], 1, 1);
        assert_eq!(forms[0], (vec![0, 0], vec![]));
        assert_eq!(forms[1], (vec![1, 0], vec![]));
        assert_eq!(forms[2], (vec![0, 1], vec![]));
        assert_eq!(forms[3], (vec![0, 0], vec![0]));
    }
}
