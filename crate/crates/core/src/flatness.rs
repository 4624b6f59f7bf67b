//! Flatness certificates for weighted families: degree constancy, traced
//! Newton data, weight search and cycle pullback.
//!
//! Verdicts are evidence. Regular traces certify analytic flatness up to the
//! chosen bounds; a coefficient that is irregular but integral over the base
//! is evidence of a family that is only continuous.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::covering::{
    fiber_algebra, fiber_monomials, random_linear_form, regular_value, Branch, Component, Covering, ImplicitCovering,
    ParametricCovering, Scale, Uniformization,
};
use crate::error::{Error, Result};
use crate::poly::{
    integral_dependence, quotient_algebra, univariate, BaseField, Ideal, IntegralRelation, Monomial, Poly,
    RationalFunction, Var, Q,
};
use crate::symprod::elem_from_power;
use crate::traceforms::{monomial_form, monomial_forms, split_coefficient, trace_form, RelativeForm};

/// Equations or explicit branches of one component.
#[derive(Clone, Debug)]
pub enum ComponentData {
    Implicit(Vec<Poly>),
    Parametric(Vec<Branch>),
}

#[derive(Clone, Debug)]
pub struct FamilyComponent {
    pub weight: u32,
    /// Index of the base stratum the component lies over; `None` for the whole base.
    pub stratum: Option<usize>,
    pub data: ComponentData,
}

/// A closed piece of the base with sample points on it.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub gens: Vec<Poly>,
    pub samples: Vec<Vec<Q>>,
}

impl Stratum {
    fn contains(&self, scale: &Scale, point: &[Q]) -> bool {
        let vals: HashMap<Var, Q> = scale.base_and_chart().into_iter().zip(point.iter().cloned()).collect();
        self.gens.iter().all(|g| g.eval_partial(&vals).is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct WeightedFamily {
    pub scale: Scale,
    pub components: Vec<FamilyComponent>,
    pub strata: Vec<Stratum>,
    /// Components forced to share a weight.
    pub groups: Vec<Vec<usize>>,
    pub uniformization: Option<Uniformization>,
}

impl WeightedFamily {
    pub fn new(scale: Scale, components: Vec<FamilyComponent>) -> Self {
        WeightedFamily { scale, components, strata: Vec::new(), groups: Vec::new(), uniformization: None }
    }

    pub fn weights(&self) -> Vec<u32> {
        self.components.iter().map(|c| c.weight).collect()
    }

    pub fn with_weights(&self, w: &[u32]) -> Result<Self> {
        if w.len() != self.components.len() {
            return Err(Error::DimensionMismatch("one weight per component expected".into()));
        }
        if w.contains(&0) {
            return Err(Error::Invalid("weights must be positive".into()));
        }
        let mut out = self.clone();
        for (c, &n) in out.components.iter_mut().zip(w) {
            c.weight = n;
        }
        Ok(out)
    }

    /// The family as one covering of the whole base.
    pub fn covering(&self) -> Result<Covering> {
        let all_parametric = self.components.iter().all(|c| matches!(c.data, ComponentData::Parametric(_)));
        if all_parametric && !self.components.is_empty() {
            let comps = self
                .components
                .iter()
                .map(|c| {
                    let base_ideal = match c.stratum {
                        Some(i) => self.scale.base_ideal.extend(&self.strata[i].gens)?,
                        None => self.scale.base_ideal.clone(),
                    };
                    let ComponentData::Parametric(b) = &c.data else { unreachable!() };
                    Ok(Component { weight: c.weight, base_ideal, branches: b.clone() })
                })
                .collect::<Result<Vec<_>>>()?;
            let pc = match &self.uniformization {
                Some(u) => ParametricCovering::uniformized(self.scale.clone(), comps, u.clone())?,
                None => ParametricCovering::new(self.scale.clone(), comps)?,
            };
            return Ok(Covering::Parametric(pc));
        }
        match self.components.as_slice() {
            [FamilyComponent { weight, stratum: None, data: ComponentData::Implicit(g) }] => {
                Ok(Covering::Implicit(ImplicitCovering::weighted(self.scale.clone(), g.clone(), *weight)?))
            }
            _ => Err(Error::Invalid("family is not a single covering of the base".into())),
        }
    }

    fn on_stratum(&self, comp: &FamilyComponent, stratum: Option<usize>) -> bool {
        comp.stratum.is_none() || comp.stratum == stratum
    }

    /// Strata to evaluate: the declared ones, or the whole base.
    fn stratum_list(&self) -> Result<Vec<(Option<usize>, &[Vec<Q>])>> {
        if self.strata.is_empty() {
            return Ok(vec![(None, &[][..])]);
        }
        let mut out = Vec::new();
        for (i, s) in self.strata.iter().enumerate() {
            if s.samples.is_empty() {
                return Err(Error::Invalid(format!("stratum {} has no sample points", i + 1)));
            }
            out.push((Some(i), s.samples.as_slice()));
        }
        Ok(out)
    }
}

/// Characteristic polynomial of `l` on the generic fiber over the
/// component's stratum, specialized at `point`. This is the limit of nearby
/// fibers. `None` when a coefficient is not regular on the stratum.
fn limit_cycle(
    f: &WeightedFamily,
    comp: &FamilyComponent,
    gens: &[Poly],
    point: &[Q],
    l: &Poly,
) -> Result<Option<Vec<Q>>> {
    let scale = &f.scale;
    let mut base_gens: Vec<Poly> = scale.base_ideal.gens().to_vec();
    if let Some(s) = comp.stratum {
        base_gens.extend(f.strata[s].gens.iter().cloned());
    }
    let vars = scale.base_and_chart();
    let field = BaseField::fractions(vars.clone(), base_gens)?;
    let alg = match quotient_algebra(gens, &scale.fiber, &field) {
        Ok(a) => a,
        Err(Error::NotFinite) | Err(Error::NotZeroDimensional) | Err(Error::SpecializationUnstable) => return Ok(None),
        Err(e) => return Err(e),
    };
    let k = alg.dim();
    let mut power = Poly::one();
    let mut sums = Vec::with_capacity(k);
    for _ in 0..k {
        power = &power * l;
        sums.push(alg.trace(&power));
    }
    let elem = elem_from_power(&sums);
    let ideal = field.ideal().cloned().unwrap_or_else(Ideal::zero);
    let vals: HashMap<Var, Q> = vars.into_iter().zip(point.iter().cloned()).collect();
    let mut chi = vec![Q::zero(); k + 1];
    chi[k] = Q::one();
    for (h, e) in elem.iter().enumerate() {
        let Some(v) = regular_value(e, &ideal).and_then(|p| p.eval(&vals)) else { return Ok(None) };
        chi[k - h - 1] = if h % 2 == 0 { -v } else { v };
    }
    Ok(Some(chi))
}

/// Unweighted fiber cycle of one component at a point, as the characteristic
/// polynomial of a linear form on its points.
fn fiber_cycle(f: &WeightedFamily, comp: &FamilyComponent, point: &[Q], l: &Poly) -> Result<Vec<Q>> {
    let scale = &f.scale;
    match &comp.data {
        ComponentData::Implicit(g) => {
            if let Some(chi) = limit_cycle(f, comp, g, point, l)? {
                return Ok(chi);
            }
            let alg = fiber_algebra(g, scale, point)?;
            alg.char_poly_of(l).ok_or_else(|| Error::Invalid("fiber algebra is not over the rationals".into()))
        }
        ComponentData::Parametric(branches) => {
            if !scale.chart.is_empty() {
                return Err(Error::Invalid("point cycles of branches need a chart-free scale".into()));
            }
            let vals: HashMap<Var, Q> = scale.base.iter().copied().zip(point.iter().cloned()).collect();
            let mut chi = univariate::one();
            for b in branches {
                let mut lv = Q::zero();
                for (&x, f) in scale.fiber.iter().zip(&b.0) {
                    let den = f.den().eval(&vals).filter(|d| !d.is_zero());
                    let (Some(n), Some(d)) = (f.num().eval(&vals), den) else {
                        return Err(Error::BranchUndefined("branch is not defined at a sample point".into()));
                    };
                    let c = l.coeff(&Monomial::var(x));
                    lv += c * n / d;
                }
                chi = univariate::mul(&chi, &[-lv, Q::one()]);
            }
            Ok(chi)
        }
    }
}

/// Cycle degree of a component at a point.
fn component_degree(f: &WeightedFamily, comp: &FamilyComponent, point: &[Q]) -> Result<usize> {
    let l = f.scale.fiber.iter().fold(Poly::zero(), |acc, &v| &acc + &Poly::var(v));
    Ok(fiber_cycle(f, comp, point, &l)?.len() - 1)
}

/// Weighted fiber degree of a stratum at one sample point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRow {
    pub stratum: Option<usize>,
    pub point: Vec<Q>,
    pub degree: usize,
}

#[derive(Clone, Debug)]
pub struct DegreeTable {
    pub constant: bool,
    pub rows: Vec<DegreeRow>,
}

/// Per-component fiber degrees at every (stratum, sample point).
fn raw_degrees(f: &WeightedFamily) -> Result<Vec<(Option<usize>, Vec<Q>, Vec<Option<usize>>)>> {
    let mut out = Vec::new();
    let strata = f.stratum_list()?;
    for (s, samples) in strata {
        let pts: Vec<Vec<Q>> = if s.is_none() {
            vec![vec![Q::from_integer(0.into()); f.scale.base_and_chart().len()]]
        } else {
            samples.to_vec()
        };
        for p in pts {
            let mut degs = Vec::new();
            for c in &f.components {
                if f.on_stratum(c, s) {
                    degs.push(Some(component_degree(f, c, &p)?));
                } else {
                    degs.push(None);
                }
            }
            out.push((s, p, degs));
        }
    }
    Ok(out)
}

pub fn check_degree_constancy(f: &WeightedFamily) -> Result<DegreeTable> {
    if f.strata.is_empty() {
        return Ok(DegreeTable { constant: true, rows: Vec::new() });
    }
    let rows: Vec<DegreeRow> = raw_degrees(f)?
        .into_iter()
        .map(|(stratum, point, degs)| {
            let degree = degs.iter().zip(&f.components).filter_map(|(d, c)| d.map(|d| d * c.weight as usize)).sum();
            DegreeRow { stratum, point, degree }
        })
        .collect();
    let constant = rows.windows(2).all(|w| w[0].degree == w[1].degree);
    Ok(DegreeTable { constant, rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    AgfCertified { form_degree: usize, monomial_degree: u32 },
    ContinuousOnlyEvidence,
    NotCgfEvidence,
    Undetermined,
}

impl VerdictKind {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictKind::AgfCertified { .. } => "AGF_certified",
            VerdictKind::ContinuousOnlyEvidence => "ContinuousOnly_evidence",
            VerdictKind::NotCgfEvidence => "NotCGF_evidence",
            VerdictKind::Undetermined => "Undetermined",
        }
    }

    fn severity(&self) -> u8 {
        match self {
            VerdictKind::AgfCertified { .. } => 0,
            VerdictKind::ContinuousOnlyEvidence => 1,
            VerdictKind::Undetermined => 2,
            VerdictKind::NotCgfEvidence => 3,
        }
    }
}

/// What was traced.
#[derive(Clone, Debug)]
pub enum Traced {
    Function(Monomial),
    Form(RelativeForm),
    Degrees(DegreeTable),
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub item: Traced,
    pub trace: RelativeForm,
    /// Differentials of the offending coefficient.
    pub differentials: Vec<Var>,
    pub chart_monomial: Monomial,
    pub coefficient: RationalFunction,
    /// Set when the coefficient is integral over the base.
    pub relation: Option<IntegralRelation>,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
    /// Number of traced items.
    pub checked: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub form_degree: usize,
    pub monomial_degree: u32,
}

impl Bounds {
    /// Forms of degree up to the chart dimension, monomials up to twice the covering degree.
    pub fn defaults(c: &Covering) -> Bounds {
        Bounds { form_degree: c.scale().chart.len(), monomial_degree: 2 * c.degree() as u32 }
    }
}

fn classify_piece(r: &RationalFunction, scale: &Scale, k: usize) -> (VerdictKind, Option<IntegralRelation>) {
    if regular_value(r, &scale.base_ideal).is_some() {
        return (VerdictKind::AgfCertified { form_degree: 0, monomial_degree: 0 }, None);
    }
    let max_degree = k.max(2);
    let coef = max_degree as u32 * r.num().total_degree().max(r.den().total_degree()).max(1);
    match integral_dependence(r.num(), r.den(), &scale.base_ideal, max_degree, coef) {
        Some(rel) => (VerdictKind::ContinuousOnlyEvidence, Some(rel)),
        None => (VerdictKind::NotCgfEvidence, None),
    }
}

/// Traces every fiber monomial and every monomial form within the bounds and
/// grades the coefficients. The most severe finding wins; its first
/// occurrence in enumeration order is the witness.
pub fn certify_agf(f: &WeightedFamily, bounds: Bounds) -> Result<Verdict> {
    let table = check_degree_constancy(f)?;
    if !table.constant {
        let w = Witness {
            item: Traced::Degrees(table),
            trace: RelativeForm::zero(),
            differentials: Vec::new(),
            chart_monomial: Monomial::one(),
            coefficient: RationalFunction::zero(),
            relation: None,
            note: Some("weighted fiber degree is not constant".into()),
        };
        return Ok(Verdict { kind: VerdictKind::NotCgfEvidence, witness: Some(w), checked: 0 });
    }
    certify_covering(&f.covering()?, bounds)
}

pub fn certify_covering(c: &Covering, bounds: Bounds) -> Result<Verdict> {
    let scale = c.scale();
    let k = c.degree();
    let mut items: Vec<Traced> =
        fiber_monomials(&scale.fiber, bounds.monomial_degree).into_iter().map(Traced::Function).collect();
    if let Covering::Parametric(_) = c {
        for (i, j) in monomial_forms(&scale.fiber, bounds.monomial_degree, bounds.form_degree) {
            if !j.is_empty() {
                items.push(Traced::Form(monomial_form(&scale.fiber, &i, &j)));
            }
        }
    }
    let mut worst: Option<Witness> = None;
    let mut worst_kind =
        VerdictKind::AgfCertified { form_degree: bounds.form_degree, monomial_degree: bounds.monomial_degree };
    let mut checked = 0;
    for item in items {
        let traced = match (&item, c) {
            (Traced::Function(m), _) => c.trace0(&Poly::monomial(m.clone())).map(RelativeForm::function),
            (Traced::Form(w), Covering::Parametric(p)) => trace_form(p, w),
            _ => unreachable!(),
        };
        checked += 1;
        let traced = match traced {
            Ok(t) => t,
            Err(Error::Descent(msg)) => {
                if worst_kind.severity() < VerdictKind::Undetermined.severity() {
                    worst_kind = VerdictKind::Undetermined;
                    worst = Some(Witness {
                        item,
                        trace: RelativeForm::zero(),
                        differentials: Vec::new(),
                        chart_monomial: Monomial::one(),
                        coefficient: RationalFunction::zero(),
                        relation: None,
                        note: Some(msg),
                    });
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        for (d, coef) in traced.terms() {
            for (m, piece) in split_coefficient(coef, &scale.chart) {
                let (kind, relation) = classify_piece(&piece, scale, k);
                if kind.severity() > worst_kind.severity() {
                    worst_kind = kind;
                    worst = Some(Witness {
                        item: item.clone(),
                        trace: traced.clone(),
                        differentials: d.clone(),
                        chart_monomial: m,
                        coefficient: piece,
                        relation,
                        note: None,
                    });
                }
            }
        }
        if worst_kind == VerdictKind::NotCgfEvidence {
            break;
        }
    }
    Ok(Verdict { kind: worst_kind, witness: worst, checked })
}

/// Weights making the family's fiber cycles agree across strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    pub weights: Vec<u32>,
    pub degree: usize,
}

/// Integer rows `r` with `sum r_i n_i = 0` required of the weights `n`.
fn weight_constraints(
    f: &WeightedFamily,
    seed: u64,
) -> Result<(Vec<Vec<i64>>, Vec<(Option<usize>, Vec<Option<usize>>)>)> {
    let raw = raw_degrees(f)?;
    let ncomp = f.components.len();
    let mut rows = Vec::new();
    let deg_rows: Vec<Vec<i64>> =
        raw.iter().map(|(_, _, d)| d.iter().map(|x| x.unwrap_or(0) as i64).collect()).collect();
    for r in deg_rows.iter().skip(1) {
        rows.push(r.iter().zip(&deg_rows[0]).map(|(a, b)| a - b).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = random_linear_form(&f.scale.fiber, &mut rng);
    let mut points: Vec<Vec<Q>> = Vec::new();
    for s in &f.strata {
        for p in &s.samples {
            if !points.contains(p) {
                points.push(p.clone());
            }
        }
    }
    for p in &points {
        let here: Vec<usize> = (0..f.strata.len()).filter(|&i| f.strata[i].contains(&f.scale, p)).collect();
        if here.len() < 2 {
            continue;
        }
        let mut cycles: Vec<Vec<Q>> = Vec::new();
        let mut owner: Vec<usize> = Vec::new();
        for (i, c) in f.components.iter().enumerate() {
            if c.stratum.is_none() || here.contains(&c.stratum.unwrap()) {
                cycles.push(fiber_cycle(f, c, p, &l)?);
                owner.push(i);
            }
        }
        let (basis, exps) = univariate::coprime_basis(&cycles);
        let side = |s: usize| -> Vec<Vec<i64>> {
            (0..basis.len())
                .map(|b| {
                    let mut r = vec![0i64; ncomp];
                    for (ci, &i) in owner.iter().enumerate() {
                        if f.on_stratum(&f.components[i], Some(s)) {
                            r[i] += exps[ci][b] as i64;
                        }
                    }
                    r
                })
                .collect()
        };
        let first = side(here[0]);
        for &s in &here[1..] {
            for (a, b) in side(s).iter().zip(&first) {
                rows.push(a.iter().zip(b).map(|(x, y)| x - y).collect());
            }
        }
    }
    let degs = raw.into_iter().map(|(s, _, d)| (s, d)).collect();
    Ok((rows, degs))
}

/// Tuples of length `n` in `1..=max`, by total then lexicographically.
fn ordered_tuples(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..n {
        all = all.into_iter().flat_map(|t| (1..=max).map(move |w| [t.clone(), vec![w]].concat())).collect();
    }
    all.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum()).then_with(|| a.cmp(b)));
    all
}

/// Least positive weights, at most `max_weight`, whose weighted fibers glue
/// across strata: smallest total first, then lexicographic.
pub fn weight_search(f: &WeightedFamily, max_weight: u32, seed: u64) -> Result<Option<WeightAssignment>> {
    let n = f.components.len();
    let mut group_of: Vec<usize> = (0..n).collect();
    for g in &f.groups {
        if let Some(&lead) = g.first() {
            for &i in g {
                if i >= n {
                    return Err(Error::Invalid(format!("weight group names component {}", i + 1)));
                }
                group_of[i] = lead;
            }
        }
    }
    let leads: Vec<usize> = (0..n).filter(|&i| group_of[i] == i).collect();
    let (rows, degs) = weight_constraints(f, seed)?;
    for free in ordered_tuples(leads.len(), max_weight) {
        let w: Vec<u32> = (0..n).map(|i| free[leads.iter().position(|&l| l == group_of[i]).unwrap()]).collect();
        let ok = rows.iter().all(|r| r.iter().zip(&w).map(|(a, &b)| a * b as i64).sum::<i64>() == 0);
        if ok {
            let degree = degs
                .first()
                .map(|(_, d)| d.iter().zip(&w).map(|(x, &b)| x.unwrap_or(0) * b as usize).sum())
                .unwrap_or(0);
            return Ok(Some(WeightAssignment { weights: w, degree }));
        }
    }
    Ok(None)
}

/// Points of one sample fiber sharing a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointGroup {
    /// Characteristic factor of the linear form on these points.
    pub factor: Vec<Q>,
    pub points: usize,
    pub multiplicity: usize,
}

/// A base cycle component `weight * [Y]` with the sample points used.
#[derive(Clone, Debug)]
pub struct BaseCycle {
    pub weight: u32,
    pub gens: Vec<Poly>,
    pub samples: Vec<Vec<Q>>,
}

#[derive(Clone, Debug)]
pub struct PulledSample {
    pub point: Vec<Q>,
    pub groups: Vec<PointGroup>,
    pub degree: usize,
}

#[derive(Clone, Debug)]
pub struct PulledComponent {
    pub weight: u32,
    pub samples: Vec<PulledSample>,
}

/// Pullback of `sum m_j [Y_j]` read off at sample points of each `Y_j`:
/// the weighted fiber cycle there, grouped by multiplicity.
pub fn cycle_pullback(f: &WeightedFamily, ys: &[BaseCycle], seed: u64) -> Result<Vec<PulledComponent>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = random_linear_form(&f.scale.fiber, &mut rng);
    let mut out = Vec::new();
    for y in ys {
        if y.samples.is_empty() {
            return Err(Error::Invalid("base cycle has no sample points".into()));
        }
        let mut samples = Vec::new();
        for p in &y.samples {
            let vals: HashMap<Var, Q> = f.scale.base_and_chart().into_iter().zip(p.iter().cloned()).collect();
            if y.gens.iter().any(|g| !g.eval_partial(&vals).is_zero()) {
                return Err(Error::Invalid("sample point is not on its base cycle".into()));
            }
            let mut chi = univariate::one();
            for c in &f.components {
                let on = match c.stratum {
                    None => true,
                    Some(s) => f.strata[s].contains(&f.scale, p),
                };
                if on {
                    let z = fiber_cycle(f, c, p, &l)?;
                    for _ in 0..c.weight * y.weight {
                        chi = univariate::mul(&chi, &z);
                    }
                }
            }
            let mut groups: Vec<PointGroup> = univariate::squarefree_decomposition(&chi)
                .into_iter()
                .map(|(b, e)| PointGroup {
                    points: univariate::degree(&b).unwrap_or(0),
                    factor: b,
                    multiplicity: e as usize,
                })
                .collect();
            groups.sort_by(|a, b| a.multiplicity.cmp(&b.multiplicity).then_with(|| a.factor.cmp(&b.factor)));
            samples.push(PulledSample { point: p.clone(), groups, degree: univariate::degree(&chi).unwrap_or(0) });
        }
        out.push(PulledComponent { weight: y.weight, samples });
    }
    Ok(out)
}
