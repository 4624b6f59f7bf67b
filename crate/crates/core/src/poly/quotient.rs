use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::groebner::groebner;
use super::ideal::{is_regular_on, Ideal};
use super::monomial::{Monomial, Var};
use super::order::MonomialOrder;
use super::polynomial::Poly;
use super::ratfun::RationalFunction;
use super::Q;
use crate::error::{Error, Result};

/// Coefficient field of a quotient algebra: the rationals, or the fraction
/// field of `Q[vars]/ideal` for a prime ideal (the generic point of a base).
#[derive(Clone, Debug, PartialEq)]
pub enum BaseField {
    Rationals,
    Fractions { vars: Vec<Var>, ideal: Ideal },
}

impl BaseField {
    pub fn fractions(vars: Vec<Var>, gens: Vec<Poly>) -> Result<Self> {
        Ok(BaseField::Fractions { vars, ideal: Ideal::grevlex(gens)? })
    }

    pub fn vars(&self) -> &[Var] {
        match self {
            BaseField::Rationals => &[],
            BaseField::Fractions { vars, .. } => vars,
        }
    }

    pub fn ideal(&self) -> Option<&Ideal> {
        match self {
            BaseField::Rationals => None,
            BaseField::Fractions { ideal, .. } => Some(ideal),
        }
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        match self.ideal() {
            Some(i) => i.normal_form(p),
            None => p.clone(),
        }
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Canonical representative: a reduced polynomial when the fraction
    /// extends regularly over the base, otherwise reduced numerator and denominator.
    pub fn simplify(&self, r: &RationalFunction) -> RationalFunction {
        let ideal = match self.ideal() {
            Some(i) if !i.is_zero() => i,
            _ => return r.reduce_full(),
        };
        if r.is_polynomial() {
            return RationalFunction::from_poly(ideal.normal_form(r.num()));
        }
        let bound = r.num().total_degree().max(r.den().total_degree());
        if let Some(q) = is_regular_on(r.num(), r.den(), ideal, bound) {
            return RationalFunction::from_poly(q);
        }
        RationalFunction::new(ideal.normal_form(r.num()), ideal.normal_form(r.den()))
    }

    /// Equality in the field.
    pub fn equal(&self, a: &RationalFunction, b: &RationalFunction) -> bool {
        let d = &(a.num() * b.den()) - &(b.num() * a.den());
        self.is_zero(&d)
    }
}

/// Finite algebra `K[x]/I` given by standard monomials and multiplication matrices.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    fiber: Vec<Var>,
    base: BaseField,
    order: MonomialOrder,
    generic: Vec<(Monomial, Poly, Poly)>,
    basis: Vec<Monomial>,
    mult: Vec<Vec<Vec<RationalFunction>>>,
}

fn fiber_lead(g: &Poly, fiber: &[Var]) -> (Monomial, Poly) {
    let groups = g.coefficients_in(fiber);
    groups.into_iter().max_by(|a, b| MonomialOrder::GrevLex.cmp(&a.0, &b.0)).expect("nonzero polynomial")
}

/// Builds `K[fiber]/I` from generators in the fiber and base variables.
pub fn quotient_algebra(gens: &[Poly], fiber: &[Var], base: &BaseField) -> Result<QuotientAlgebra> {
    let bvars = base.vars();
    for g in gens {
        if let Some(v) = g.vars().into_iter().find(|v| !fiber.contains(v) && !bvars.contains(v)) {
            return Err(Error::Invalid(format!("generator involves variable {v} outside fiber and base")));
        }
    }
    let order = MonomialOrder::block(vec![fiber.to_vec()]);
    let mut all: Vec<Poly> = gens.to_vec();
    if let Some(i) = base.ideal() {
        all.extend(i.gens().iter().cloned());
    }
    let g = groebner(&all, &order)?;

    let mut generic = Vec::new();
    let mut unstable = Vec::new();
    for p in g {
        let (lm, lc) = fiber_lead(&p, fiber);
        if base.is_zero(&lc) {
            unstable.push(p);
        } else {
            let tail = &p - &lc.mul_monomial(&lm);
            generic.push((lm, lc, tail));
        }
    }
    // constant leading coefficients first so reductions avoid multipliers
    generic.sort_by_key(|(_, lc, _)| !lc.is_constant());

    let mut qa = QuotientAlgebra {
        fiber: fiber.to_vec(),
        base: base.clone(),
        order,
        generic,
        basis: Vec::new(),
        mult: Vec::new(),
    };
    for p in &unstable {
        let (_, r) = qa.pseudo_reduce(p);
        if !r.is_zero() {
            return Err(Error::SpecializationUnstable);
        }
    }
    if qa.generic.iter().any(|(lm, _, _)| lm.is_one()) {
        qa.mult = vec![Vec::new(); fiber.len()];
        return Ok(qa);
    }
    for &v in fiber {
        let pure = qa.generic.iter().any(|(lm, _, _)| lm.pairs().len() == 1 && lm.pairs()[0].0 == v);
        if !pure {
            return Err(Error::NotFinite);
        }
    }
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut stack = vec![Monomial::one()];
    while let Some(m) = stack.pop() {
        if !seen.insert(m.clone()) {
            continue;
        }
        for &v in fiber {
            let n = m.mul(&Monomial::var(v));
            if !seen.contains(&n) && !qa.generic.iter().any(|(lm, _, _)| lm.divides(&n)) {
                stack.push(n);
            }
        }
    }
    let mut basis: Vec<Monomial> = seen.into_iter().collect();
    basis.sort_by(|a, b| MonomialOrder::GrevLex.cmp(a, b));
    qa.basis = basis;
    qa.mult = fiber.iter().map(|&v| qa.matrix_of(&Poly::var(v))).collect();
    Ok(qa)
}

impl QuotientAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn fiber_vars(&self) -> &[Var] {
        &self.fiber
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Multiplication matrix of the `i`-th fiber variable; `m[r][c]` is the
    /// coordinate on `basis[r]` of `x_i * basis[c]`.
    pub fn mult_matrix(&self, i: usize) -> &[Vec<RationalFunction>] {
        &self.mult[i]
    }

    /// Pseudo-reduction: returns `(d, r)` with `d * p ≡ r` modulo the ideal,
    /// `d` a nonzero base element and `r` supported on standard monomials.
    pub fn pseudo_reduce(&self, p: &Poly) -> (Poly, Poly) {
        let mut work = p.clone();
        let mut rem = Poly::zero();
        let mut d = Poly::one();
        while !work.is_zero() {
            let (mu, c0) = fiber_lead(&work, &self.fiber);
            work = &work - &c0.mul_monomial(&mu);
            let c = self.base.reduce(&c0);
            if c.is_zero() {
                continue;
            }
            match self.generic.iter().find(|(lm, _, _)| lm.divides(&mu)) {
                None => rem = &rem + &c.mul_monomial(&mu),
                Some((lm, lc, tail)) => {
                    let q = lm.quotient_of(&mu).unwrap();
                    if let Some(k) = lc.as_constant() {
                        let f = c.scale(&k.recip());
                        work = &work - &(&f * &tail.mul_monomial(&q));
                    } else {
                        work = &(lc * &work) - &(&c * &tail.mul_monomial(&q));
                        rem = lc * &rem;
                        d = &d * lc;
                    }
                }
            }
        }
        let rem = Poly::from_terms(
            rem.coefficients_in(&self.fiber)
                .into_iter()
                .flat_map(|(m, c)| self.base.reduce(&c).mul_monomial(&m).into_terms()),
        );
        (self.base.reduce(&d), rem)
    }

    /// Coordinates of `p` in the monomial basis.
    pub fn coords(&self, p: &Poly) -> Vec<RationalFunction> {
        let (d, r) = self.pseudo_reduce(p);
        let groups = r.coefficients_in(&self.fiber);
        self.basis
            .iter()
            .map(|b| match groups.get(b) {
                Some(c) => self.base.simplify(&RationalFunction::new(c.clone(), d.clone())),
                None => RationalFunction::zero(),
            })
            .collect()
    }

    /// Matrix of multiplication by `h`.
    pub fn matrix_of(&self, h: &Poly) -> Vec<Vec<RationalFunction>> {
        let n = self.dim();
        let mut m = vec![vec![RationalFunction::zero(); n]; n];
        for (c, b) in self.basis.iter().enumerate() {
            let col = self.coords(&h.mul_monomial(b));
            for (r, v) in col.into_iter().enumerate() {
                m[r][c] = v;
            }
        }
        m
    }

    /// Matrix over the rationals; `None` if some entry is not constant.
    pub fn rational_matrix(&self, h: &Poly) -> Option<Vec<Vec<Q>>> {
        self.matrix_of(h)
            .into_iter()
            .map(|row| row.into_iter().map(|e| e.as_poly().and_then(|p| p.as_constant())).collect())
            .collect()
    }

    /// Trace of multiplication by `h`, simplified in the base field.
    pub fn trace(&self, h: &Poly) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for b in &self.basis {
            let (d, r) = self.pseudo_reduce(&h.mul_monomial(b));
            let c = r.coefficients_in(&self.fiber).remove(b).unwrap_or_else(Poly::zero);
            if !c.is_zero() {
                acc = &acc + &RationalFunction::new(c, d);
            }
        }
        self.base.simplify(&acc)
    }

    /// `p` is zero in the algebra.
    pub fn is_zero(&self, p: &Poly) -> bool {
        self.pseudo_reduce(p).1.is_zero()
    }

    /// Every fiber variable has a pure-power reducer with constant leading
    /// coefficient, so the algebra is integral over the base ring.
    pub fn is_integral(&self) -> bool {
        self.fiber.iter().all(|&v| {
            self.generic.iter().any(|(lm, lc, _)| lc.is_constant() && lm.pairs().len() == 1 && lm.pairs()[0].0 == v)
        })
    }

    /// Characteristic polynomial of multiplication by `h` over the rationals.
    pub fn char_poly_of(&self, h: &Poly) -> Option<Vec<Q>> {
        self.rational_matrix(h).map(|m| char_poly(&m))
    }
}

/// Characteristic polynomial `det(T - M)`, coefficients by increasing power.
pub fn char_poly(m: &[Vec<Q>]) -> Vec<Q> {
    let n = m.len();
    // Faddeev–LeVerrier
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut a: Vec<Vec<Q>> = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // a = m * (a + c_{n-k+1} I)
        let mut b = a.clone();
        for (i, row) in b.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        a = matmul(m, &b);
        let tr: Q = (0..n).map(|i| a[i][i].clone()).sum();
        coeffs[n - k] = -tr / Q::from_integer(k.into());
    }
    coeffs
}

pub fn matmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let p = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![Q::zero(); p]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += &a[i][k] * &bk[j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, q, VarTable};

    #[test]
    fn nilpotent_algebra() {
        let t = VarTable::from_names(&["x"]).unwrap();
        let a = quotient_algebra(&[parse_poly("x^2", &t).unwrap()], &[0], &BaseField::Rationals).unwrap();
        assert_eq!(a.basis(), &[Monomial::one(), Monomial::var(0)]);
        let m = a.rational_matrix(&Poly::var(0)).unwrap();
        assert_eq!(m, vec![vec![q(0), q(0)], vec![q(1), q(0)]]);
    }

    #[test]
    fn unit_ideal_is_empty() {
        let a = quotient_algebra(&[Poly::one()], &[0], &BaseField::Rationals).unwrap();
        assert_eq!(a.dim(), 0);
    }

    #[test]
    fn not_finite() {
        let t = VarTable::from_names(&["x", "y"]).unwrap();
        let r = quotient_algebra(&[parse_poly("x*y", &t).unwrap()], &[0, 1], &BaseField::Rationals);
        assert!(matches!(r, Err(Error::NotFinite)));
    }

    #[test]
    fn cone_over_generic_point() {
        let t = VarTable::from_names(&["u", "v", "x", "y", "z"]).unwrap();
        let p = |s: &str| parse_poly(s, &t).unwrap();
        let base = BaseField::fractions(vec![2, 3, 4], vec![p("x*y - z^2")]).unwrap();
        let a = quotient_algebra(&[p("u^2 - x"), p("v^2 - y"), p("u*v - z")], &[0, 1], &base).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.trace(&p("u^2")).as_poly().unwrap(), &p("2*x"));
        assert_eq!(a.trace(&p("u*v")).as_poly().unwrap(), &p("2*z"));
        assert!(a.trace(&p("u")).is_zero());
    }

    #[test]
    fn faddeev() {
        let m = vec![vec![q(2), q(1)], vec![q(0), q(3)]];
        assert_eq!(char_poly(&m), vec![q(6), q(-5), q(1)]);
    }
}
