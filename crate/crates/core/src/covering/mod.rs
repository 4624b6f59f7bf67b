//! Finite branched coverings `X -> S x U -> S`: parametric (explicit branches)
//! and implicit (an ideal finite over the base), with degrees and traces.

mod descent;
mod fibers;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poly::{
    is_regular_on, quotient_algebra, BaseField, Ideal, Monomial, Poly, QuotientAlgebra, RationalFunction, Var, Q,
};

pub use descent::Uniformization;
pub use fibers::{
    fiber_algebra, fiber_count, generic_projection_degree, local_degree, multiplicity_of_point, random_linear_form,
    FiberCount, WeightedComponent,
};

/// Variable split into base `s`, chart `t` and fiber `x`, with the base ideal.
#[derive(Clone, Debug)]
pub struct Scale {
    pub base: Vec<Var>,
    pub chart: Vec<Var>,
    pub fiber: Vec<Var>,
    pub base_ideal: Ideal,
}

impl Scale {
    pub fn new(base: Vec<Var>, chart: Vec<Var>, fiber: Vec<Var>, base_gens: Vec<Poly>) -> Result<Scale> {
        let mut all: Vec<Var> = base.iter().chain(&chart).chain(&fiber).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("variable blocks overlap".into()));
        }
        if base_gens.iter().any(|g| !g.involves_only(&base)) {
            return Err(Error::Invalid("base ideal involves non-base variables".into()));
        }
        Ok(Scale { base, chart, fiber, base_ideal: Ideal::grevlex(base_gens)? })
    }

    /// Base and chart variables together, the coordinates of `S x U`.
    pub fn base_and_chart(&self) -> Vec<Var> {
        self.base.iter().chain(&self.chart).copied().collect()
    }

    pub fn base_field(&self) -> BaseField {
        BaseField::Fractions { vars: self.base_and_chart(), ideal: self.base_ideal.clone() }
    }
}

/// One local branch: a value for every fiber variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch(pub Vec<RationalFunction>);

impl Branch {
    pub fn from_polys(p: Vec<Poly>) -> Branch {
        Branch(p.into_iter().map(RationalFunction::from_poly).collect())
    }

    fn map(&self, fiber: &[Var]) -> HashMap<Var, RationalFunction> {
        fiber.iter().copied().zip(self.0.iter().cloned()).collect()
    }
}

/// A weighted irreducible component with its branches.
#[derive(Clone, Debug)]
pub struct Component {
    pub weight: u32,
    pub base_ideal: Ideal,
    pub branches: Vec<Branch>,
}

/// Covering given by explicit branches over `S x U`, or over a uniformizing
/// parameter space mapping onto `S`.
#[derive(Clone, Debug)]
pub struct ParametricCovering {
    scale: Scale,
    components: Vec<Component>,
    uniformization: Option<Uniformization>,
}

/// Values of the branch-sum before descent to the base.
fn branch_sum<F>(components: &[Component], mut f: F) -> RationalFunction
where
    F: FnMut(&Branch) -> RationalFunction,
{
    let mut acc = RationalFunction::zero();
    for c in components {
        let mut part = RationalFunction::zero();
        for b in &c.branches {
            part = &part + &f(b);
        }
        acc = &acc + &part.scale(&Q::from_integer(c.weight.into()));
    }
    acc
}

impl ParametricCovering {
    pub fn new(scale: Scale, components: Vec<Component>) -> Result<Self> {
        ParametricCovering::build(scale, components, None)
    }

    pub fn uniformized(scale: Scale, components: Vec<Component>, u: Uniformization) -> Result<Self> {
        ParametricCovering::build(scale, components, Some(u))
    }

    fn build(scale: Scale, components: Vec<Component>, uniformization: Option<Uniformization>) -> Result<Self> {
        for c in &components {
            if c.weight == 0 {
                return Err(Error::Invalid("component weight must be positive".into()));
            }
            if let Some(b) = c.branches.iter().find(|b| b.0.len() != scale.fiber.len()) {
                return Err(Error::DimensionMismatch(format!(
                    "branch has {} values for {} fiber variables",
                    b.0.len(),
                    scale.fiber.len()
                )));
            }
        }
        if let Some(u) = &uniformization {
            u.check(&scale)?;
        }
        Ok(ParametricCovering { scale, components, uniformization })
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn uniformization(&self) -> Option<&Uniformization> {
        self.uniformization.as_ref()
    }

    /// Weighted sheet count.
    pub fn degree(&self) -> usize {
        self.components.iter().map(|c| c.weight as usize * c.branches.len()).sum()
    }

    /// Variables the branches are written in: base (or uniformizing parameters) and chart.
    pub fn source_vars(&self) -> Vec<Var> {
        match &self.uniformization {
            Some(u) => u.params.iter().chain(&self.scale.chart).copied().collect(),
            None => self.scale.base_and_chart(),
        }
    }

    /// `sum_i n_i sum_j h(s, t, f_ij(s, t))` before descent.
    pub fn raw_trace0(&self, h: &RationalFunction) -> RationalFunction {
        let fiber = &self.scale.fiber;
        let lifted = match &self.uniformization {
            Some(u) => u.pull(h),
            None => h.clone(),
        };
        branch_sum(&self.components, |b| lifted.substitute(&b.map(fiber)))
    }

    /// Expresses a function on the source as a function on the base chart.
    pub fn descend(&self, r: &RationalFunction) -> Result<RationalFunction> {
        let r = match &self.uniformization {
            Some(u) => u.descend(r, &self.scale)?,
            None => r.clone(),
        };
        Ok(self.scale.base_field().simplify(&r))
    }

    pub fn trace0(&self, h: &Poly) -> Result<RationalFunction> {
        self.trace0_rational(&RationalFunction::from_poly(h.clone()))
    }

    pub fn trace0_rational(&self, h: &RationalFunction) -> Result<RationalFunction> {
        self.descend(&self.raw_trace0(h))
    }

    /// Weights `w_i` in place of the current ones.
    pub fn reweighted(&self, weights: &[u32]) -> Result<Self> {
        if weights.len() != self.components.len() {
            return Err(Error::DimensionMismatch("one weight per component expected".into()));
        }
        let mut c = self.clone();
        for (comp, &w) in c.components.iter_mut().zip(weights) {
            comp.weight = w;
        }
        ParametricCovering::build(c.scale, c.components, c.uniformization)
    }

    /// Formal sum of two coverings over the same scale.
    pub fn sum(&self, other: &ParametricCovering) -> Result<Self> {
        if self.scale.fiber != other.scale.fiber || self.scale.base_and_chart() != other.scale.base_and_chart() {
            return Err(Error::Invalid("coverings live on different scales".into()));
        }
        if self.uniformization.is_some() || other.uniformization.is_some() {
            return Err(Error::Invalid("sums of uniformized coverings are not supported".into()));
        }
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        ParametricCovering::new(self.scale.clone(), comps)
    }

    /// Pulls the covering back along `s = gamma(tau)`; `gamma` has one entry per base variable.
    pub fn base_change(&self, new_base: Vec<Var>, new_base_gens: Vec<Poly>, gamma: &[Poly]) -> Result<Self> {
        if self.uniformization.is_some() {
            return Err(Error::Invalid("base change of a uniformized covering".into()));
        }
        if gamma.len() != self.scale.base.len() {
            return Err(Error::DimensionMismatch("one image per base variable expected".into()));
        }
        let scale = Scale::new(new_base, self.scale.chart.clone(), self.scale.fiber.clone(), new_base_gens)?;
        let pmap: HashMap<Var, Poly> = self.scale.base.iter().copied().zip(gamma.iter().cloned()).collect();
        let rmap: HashMap<Var, RationalFunction> =
            pmap.iter().map(|(v, p)| (*v, RationalFunction::from_poly(p.clone()))).collect();
        for g in self.scale.base_ideal.gens() {
            if !scale.base_ideal.contains(&g.substitute(&pmap)) {
                return Err(Error::Invalid("arc does not lie on the base".into()));
            }
        }
        let mut comps = Vec::new();
        for c in &self.components {
            let mut gens: Vec<Poly> = c.base_ideal.gens().iter().map(|g| g.substitute(&pmap)).collect();
            gens.extend(scale.base_ideal.gens().iter().cloned());
            let mut branches = Vec::new();
            for b in &c.branches {
                let mut vals = Vec::new();
                for f in &b.0 {
                    let den = f.den().substitute(&pmap);
                    if den.is_zero() {
                        return Err(Error::BranchUndefined("branch denominator vanishes on the arc".into()));
                    }
                    vals.push(f.substitute(&rmap));
                }
                branches.push(Branch(vals));
            }
            comps.push(Component { weight: c.weight, base_ideal: Ideal::grevlex(gens)?, branches });
        }
        ParametricCovering::new(scale, comps)
    }

    /// Composite of `self` (over `lower`'s fiber space) with `lower`.
    pub fn compose(&self, lower: &ParametricCovering) -> Result<Self> {
        if self.uniformization.is_some() || lower.uniformization.is_some() {
            return Err(Error::Invalid("composition of uniformized coverings".into()));
        }
        if !self.scale.chart.is_empty() || self.scale.base != lower.scale.fiber {
            return Err(Error::Invalid("upper covering must sit over the lower fiber space".into()));
        }
        let mut comps = Vec::new();
        for lc in &lower.components {
            for uc in &self.components {
                let mut branches = Vec::new();
                for lb in &lc.branches {
                    let m = lb.map(&lower.scale.fiber);
                    for ub in &uc.branches {
                        branches.push(Branch(ub.0.iter().map(|f| f.substitute(&m)).collect()));
                    }
                }
                comps.push(Component { weight: lc.weight * uc.weight, base_ideal: lc.base_ideal.clone(), branches });
            }
        }
        let scale = Scale {
            base: lower.scale.base.clone(),
            chart: lower.scale.chart.clone(),
            fiber: self.scale.fiber.clone(),
            base_ideal: lower.scale.base_ideal.clone(),
        };
        ParametricCovering::new(scale, comps)
    }

    /// Checks that every branch satisfies the family equations modulo its component ideal.
    pub fn check_branches(&self, family: &[Poly]) -> Result<()> {
        for c in &self.components {
            for b in &c.branches {
                let m = b.map(&self.scale.fiber);
                for g in family {
                    let mut v = RationalFunction::from_poly(g.clone());
                    if let Some(u) = &self.uniformization {
                        v = u.pull(&v);
                    }
                    let v = v.substitute(&m);
                    let ok = match &self.uniformization {
                        Some(u) => u.vanishes(v.num(), &self.scale),
                        None => c.base_ideal.contains(v.num()),
                    };
                    if !ok {
                        return Err(Error::Invalid("a branch does not satisfy the family equations".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Covering presented by equations, finite over the generic point of the base.
#[derive(Clone, Debug)]
pub struct ImplicitCovering {
    scale: Scale,
    gens: Vec<Poly>,
    weight: u32,
    algebra: QuotientAlgebra,
}

impl ImplicitCovering {
    pub fn new(scale: Scale, gens: Vec<Poly>) -> Result<Self> {
        ImplicitCovering::weighted(scale, gens, 1)
    }

    pub fn weighted(scale: Scale, gens: Vec<Poly>, weight: u32) -> Result<Self> {
        if weight == 0 {
            return Err(Error::Invalid("component weight must be positive".into()));
        }
        let algebra = quotient_algebra(&gens, &scale.fiber, &scale.base_field())?;
        Ok(ImplicitCovering { scale, gens, weight, algebra })
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn algebra(&self) -> &QuotientAlgebra {
        &self.algebra
    }

    /// Algebraic degree times the weight.
    pub fn degree(&self) -> usize {
        self.weight as usize * self.algebra.dim()
    }

    pub fn trace0(&self, h: &Poly) -> Result<RationalFunction> {
        Ok(self.algebra.trace(h).scale(&Q::from_integer(self.weight.into())))
    }
}

/// Either presentation.
#[derive(Clone, Debug)]
pub enum Covering {
    Parametric(ParametricCovering),
    Implicit(ImplicitCovering),
}

impl Covering {
    pub fn scale(&self) -> &Scale {
        match self {
            Covering::Parametric(c) => c.scale(),
            Covering::Implicit(c) => c.scale(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Covering::Parametric(c) => c.degree(),
            Covering::Implicit(c) => c.degree(),
        }
    }

    pub fn trace0(&self, h: &Poly) -> Result<RationalFunction> {
        match self {
            Covering::Parametric(c) => c.trace0(h),
            Covering::Implicit(c) => c.trace0(h),
        }
    }
}

/// Polynomial on the base equal to `r` modulo the ideal, if there is one of degree at most `deg num`.
pub fn regular_value(r: &RationalFunction, ideal: &Ideal) -> Option<Poly> {
    if r.is_polynomial() {
        return Some(ideal.normal_form(r.num()));
    }
    let bound = r.num().total_degree().max(r.den().total_degree());
    is_regular_on(r.num(), r.den(), ideal, bound)
}

/// Traced Newton function of one fiber monomial.
#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub monomial: Monomial,
    pub value: RationalFunction,
    pub regular: Option<Poly>,
}

/// The classifying map through its traced Newton functions.
#[derive(Clone, Debug)]
pub struct ClassifyingMap {
    pub degree: usize,
    pub entries: Vec<ClassEntry>,
}

/// Fiber monomials of degree `1..=d`, higher exponents on earlier variables first.
pub fn fiber_monomials(fiber: &[Var], d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for l in 1..=d {
        let mut ms = Monomial::all_of_degree(fiber, l);
        ms.sort_by(|a, b| {
            let ea: Vec<u32> = fiber.iter().map(|&v| a.exp(v)).collect();
            let eb: Vec<u32> = fiber.iter().map(|&v| b.exp(v)).collect();
            eb.cmp(&ea)
        });
        out.extend(ms);
    }
    out
}

pub fn classifying_map(c: &Covering, up_to_degree: u32) -> Result<ClassifyingMap> {
    let scale = c.scale();
    let mut entries = Vec::new();
    for m in fiber_monomials(&scale.fiber, up_to_degree) {
        let value = c.trace0(&Poly::monomial(m.clone()))?;
        let regular = regular_value(&value, &scale.base_ideal);
        entries.push(ClassEntry { monomial: m, value, regular });
    }
    Ok(ClassifyingMap { degree: c.degree(), entries })
}
