use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use super::groebner::{self, Terms};
use super::linsolve::LinearSystem;
use super::monomial::{Monomial, Var};
use super::order::MonomialOrder;
use super::polynomial::Poly;
use super::Q;
use crate::error::Result;

/// Polynomial ideal with its reduced Gröbner basis computed up front.
#[derive(Clone, Debug)]
pub struct Ideal {
    gens: Vec<Poly>,
    order: MonomialOrder,
    basis: Vec<Poly>,
    sorted: Vec<Terms>,
}

impl PartialEq for Ideal {
    fn eq(&self, o: &Self) -> bool {
        self.order == o.order && self.basis == o.basis
    }
}

impl Ideal {
    pub fn new(gens: Vec<Poly>, order: MonomialOrder) -> Result<Self> {
        let gens: Vec<Poly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let basis = groebner::groebner(&gens, &order)?;
        Ok(Ideal::from_basis(gens, order, basis))
    }

    pub fn grevlex(gens: Vec<Poly>) -> Result<Self> {
        Ideal::new(gens, MonomialOrder::GrevLex)
    }

    /// Wraps a basis already known to be a reduced Gröbner basis in `order`.
    pub fn from_basis(gens: Vec<Poly>, order: MonomialOrder, basis: Vec<Poly>) -> Self {
        let sorted = basis.iter().map(|b| groebner::to_terms(b, &order)).collect();
        Ideal { gens, order, basis, sorted }
    }

    pub fn zero() -> Self {
        Ideal { gens: Vec::new(), order: MonomialOrder::GrevLex, basis: Vec::new(), sorted: Vec::new() }
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|b| b.is_constant() && !b.is_zero())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.gens.iter().flat_map(|g| g.vars()).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.sorted.iter().map(|t| t[0].0.clone()).collect()
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        if self.sorted.is_empty() || p.is_zero() {
            return p.clone();
        }
        let refs: Vec<&Terms> = self.sorted.iter().collect();
        let r = groebner::reduce_terms(groebner::to_terms(p, &self.order), &refs, &self.order);
        groebner::from_terms(r)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Same ideal with extra generators.
    pub fn extend(&self, more: &[Poly]) -> Result<Ideal> {
        let mut g = self.gens.clone();
        g.extend(more.iter().cloned());
        Ideal::new(g, self.order.clone())
    }

    /// Same generators, recomputed in another order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Ideal> {
        Ideal::new(self.gens.clone(), order)
    }

    /// Standard monomials of degree `d` in `vars`: monomials not divisible by any leading monomial.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.sorted.iter().any(|t| t[0].0.divides(m))
    }
}

pub fn normal_form(p: &Poly, ideal: &Ideal) -> Poly {
    ideal.normal_form(p)
}

fn to_sparse(p: &Poly) -> BTreeMap<Monomial, Q> {
    p.terms().iter().cloned().collect()
}

/// Normal forms of `m * base` for monomials `m`, built by multiplying one variable at a time.
struct ShiftCache<'a> {
    ideal: &'a Ideal,
    cache: HashMap<Monomial, Poly>,
}

impl<'a> ShiftCache<'a> {
    fn new(ideal: &'a Ideal, base: &Poly) -> Self {
        let mut cache = HashMap::new();
        cache.insert(Monomial::one(), ideal.normal_form(base));
        ShiftCache { ideal, cache }
    }

    fn get(&mut self, m: &Monomial) -> Poly {
        if let Some(p) = self.cache.get(m) {
            return p.clone();
        }
        let (v, _) = m.pairs()[0];
        let prev = m.without(v).mul(&Monomial::var_pow(v, m.exp(v) - 1));
        let p = self.get(&prev);
        let r = self.ideal.normal_form(&p.mul_monomial(&Monomial::var(v)));
        self.cache.insert(m.clone(), r.clone());
        r
    }
}

fn ring_vars(ps: &[&Poly], ideal: &Ideal) -> Vec<Var> {
    let mut s: BTreeSet<Var> = ideal.vars();
    for p in ps {
        s.extend(p.vars());
    }
    s.into_iter().collect()
}

/// Finds `q` of least degree (at most `degree_bound`) with `num - q*den` in the ideal.
pub fn is_regular_on(num: &Poly, den: &Poly, ideal: &Ideal, degree_bound: u32) -> Option<Poly> {
    let vars = ring_vars(&[num, den], ideal);
    let target = to_sparse(&ideal.normal_form(num));
    if target.is_empty() {
        return Some(Poly::zero());
    }
    let mut sys = LinearSystem::new();
    let mut cols: Vec<Monomial> = Vec::new();
    let mut shifts = ShiftCache::new(ideal, den);
    for d in 0..=degree_bound {
        for m in Monomial::all_of_degree(&vars, d) {
            let col = to_sparse(&shifts.get(&m));
            sys.push_column(col);
            cols.push(m);
        }
        if let Some(x) = sys.solve(&target) {
            let q = Poly::from_terms(cols.iter().cloned().zip(x).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m, c)));
            let r = ideal.normal_form(&q);
            return Some(if r.total_degree() <= q.total_degree() { r } else { q });
        }
    }
    None
}

/// Monic relation `s^d + a_{d-1} s^{d-1} + ... + a_0 = 0` satisfied by `s = num/den` modulo an ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralRelation {
    pub degree: usize,
    /// `coeffs[j]` multiplies `s^j`, for `j < degree`.
    pub coeffs: Vec<Poly>,
}

impl IntegralRelation {
    /// Clears denominators and tests membership.
    pub fn holds(&self, num: &Poly, den: &Poly, ideal: &Ideal) -> bool {
        let d = self.degree as u32;
        let mut acc = num.pow(d);
        for (j, a) in self.coeffs.iter().enumerate() {
            let j = j as u32;
            acc = &acc + &(&(a * &num.pow(j)) * &den.pow(d - j));
        }
        ideal.contains(&acc)
    }

    /// Text form in a named variable, highest power first.
    pub fn display(&self, sigma: &str, vars: &super::VarTable) -> String {
        let mut s = if self.degree == 1 { sigma.to_string() } else { format!("{sigma}^{}", self.degree) };
        for j in (0..self.degree).rev() {
            let a = &self.coeffs[j];
            if a.is_zero() {
                continue;
            }
            let txt = vars.poly(a);
            let body = if a.len() > 1 { format!("({txt})") } else { txt };
            let pw = match j {
                0 => String::new(),
                1 => format!("*{sigma}"),
                _ => format!("*{sigma}^{j}"),
            };
            if let Some(rest) = body.strip_prefix('-') {
                s.push_str(&format!(" - {rest}{pw}"));
            } else {
                s.push_str(&format!(" + {body}{pw}"));
            }
        }
        s
    }
}

/// A scalar times a monomial congruent to `p`, when one of the same degree exists.
fn single_term(p: &Poly, ideal: &Ideal, vars: &[Var]) -> Poly {
    if p.len() <= 1 {
        return p.clone();
    }
    for m in Monomial::all_of_degree(vars, p.total_degree()) {
        let nf = ideal.normal_form(&Poly::monomial(m.clone()));
        if nf.is_zero() {
            continue;
        }
        let c = &p.terms()[0].1 / &nf.terms()[0].1;
        if nf.scale(&c) == *p {
            return Poly::term(c, m);
        }
    }
    p.clone()
}

/// Searches for a monic relation of degree at most `max_degree` whose
/// coefficients have degree at most `coef_degree`.
pub fn integral_dependence(
    num: &Poly,
    den: &Poly,
    ideal: &Ideal,
    max_degree: usize,
    coef_degree: u32,
) -> Option<IntegralRelation> {
    let vars = ring_vars(&[num, den], ideal);
    for d in 1..=max_degree {
        let du = d as u32;
        let target = to_sparse(&-&ideal.normal_form(&num.pow(du)));
        let mut shifts: Vec<ShiftCache> = (0..d)
            .map(|j| {
                let j = j as u32;
                let base = &num.pow(j) * &den.pow(du - j);
                ShiftCache::new(ideal, &base)
            })
            .collect();
        let mut sys = LinearSystem::new();
        for cd in 0..=coef_degree {
            let monos = Monomial::all_of_degree(&vars, cd);
            for shift in shifts.iter_mut() {
                for m in &monos {
                    sys.push_column(to_sparse(&shift.get(m)));
                }
            }
            if sys.solve(&target).is_none() {
                continue;
            }
            // Re-solve with lower powers of `s` first so they absorb as much as possible.
            let monos = Monomial::all_up_to_degree(&vars, cd);
            let mut ordered = LinearSystem::new();
            let mut cols: Vec<(usize, Monomial)> = Vec::new();
            for (j, shift) in shifts.iter_mut().enumerate() {
                for m in &monos {
                    ordered.push_column(to_sparse(&shift.get(m)));
                    cols.push((j, m.clone()));
                }
            }
            let x = ordered.solve(&target).expect("same column span");
            let mut coeffs = vec![Vec::new(); d];
            for ((j, m), c) in cols.iter().zip(x) {
                if !c.is_zero() {
                    coeffs[*j].push((m.clone(), c));
                }
            }
            let coeffs = coeffs
                .into_iter()
                .map(|t| single_term(&ideal.normal_form(&Poly::from_terms(t)), ideal, &vars))
                .collect();
            return Some(IntegralRelation { degree: d, coeffs });
        }
    }
    None
}
