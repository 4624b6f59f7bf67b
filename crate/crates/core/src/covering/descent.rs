use std::collections::HashMap;

use super::Scale;
use crate::error::{Error, Result};
use crate::poly::{Ideal, Monomial, MonomialOrder, Poly, RationalFunction, Var};

/// Polynomial map from a parameter space onto the base, `s_i = phi_i(w)`.
///
/// Branches of a uniformized covering are written in `(w, t)`; traces are
/// symmetric in the branches and descend to `(s, t)` by elimination.
#[derive(Clone, Debug)]
pub struct Uniformization {
    pub params: Vec<Var>,
    pub base: Vec<Var>,
    pub images: Vec<Poly>,
    graph: Ideal,
}

/// Largest base-monomial degree tried as a denominator during descent.
const DENOMINATOR_DEGREE: u32 = 2;

impl Uniformization {
    pub fn new(params: Vec<Var>, base: Vec<Var>, images: Vec<Poly>) -> Result<Self> {
        if images.len() != base.len() {
            return Err(Error::DimensionMismatch("one image per base variable expected".into()));
        }
        if images.iter().any(|p| !p.involves_only(&params)) {
            return Err(Error::Invalid("uniformizing map must be written in its parameters".into()));
        }
        let gens: Vec<Poly> = base.iter().zip(&images).map(|(&s, p)| &Poly::var(s) - p).collect();
        let graph = Ideal::new(gens, MonomialOrder::block(vec![params.clone()]))?;
        Ok(Uniformization { params, base, images, graph })
    }

    pub(super) fn check(&self, scale: &Scale) -> Result<()> {
        if self.base != scale.base {
            return Err(Error::Invalid("uniformization does not cover the base variables".into()));
        }
        let scale_vars = scale.base_and_chart();
        if self.params.iter().any(|v| scale_vars.contains(v) || scale.fiber.contains(v)) {
            return Err(Error::Invalid("uniformizing parameters clash with scale variables".into()));
        }
        for g in scale.base_ideal.gens() {
            if !self.pull_poly(g).is_zero() {
                return Err(Error::Invalid("uniformization does not land in the base".into()));
            }
        }
        Ok(())
    }

    pub fn pull_poly(&self, p: &Poly) -> Poly {
        let m: HashMap<Var, Poly> = self.base.iter().copied().zip(self.images.iter().cloned()).collect();
        p.substitute(&m)
    }

    /// Composition with the uniformizing map.
    pub fn pull(&self, h: &RationalFunction) -> RationalFunction {
        RationalFunction::new(self.pull_poly(h.num()), self.pull_poly(h.den()))
    }

    pub(super) fn vanishes(&self, p: &Poly, _scale: &Scale) -> bool {
        p.is_zero()
    }

    fn descend_poly(&self, p: &Poly, scale: &Scale) -> Option<Poly> {
        let r = self.graph.normal_form(p);
        if r.involves_any(&self.params) {
            return None;
        }
        Some(scale.base_ideal.normal_form(&r))
    }

    /// A function of `(s, t)` whose pullback is `r`.
    pub fn descend(&self, r: &RationalFunction, scale: &Scale) -> Result<RationalFunction> {
        if let (Some(n), Some(d)) = (self.descend_poly(r.num(), scale), self.descend_poly(r.den(), scale)) {
            if !scale.base_ideal.contains(&d) {
                return Ok(RationalFunction::new(n, d));
            }
        }
        for deg in 1..=DENOMINATOR_DEGREE {
            for m in Monomial::all_of_degree(&self.base, deg) {
                let b = Poly::monomial(m);
                let lifted = &r.num().clone() * &self.pull_poly(&b);
                let Some(q) = lifted.div_exact(r.den()) else { continue };
                if let Some(n) = self.descend_poly(&q, scale) {
                    return Ok(RationalFunction::new(n, b));
                }
            }
        }
        Err(Error::Descent("trace is not a rational function on the base".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, VarTable};

    #[test]
    fn cone_descent() {
        let t = VarTable::from_names(&["x", "y", "z", "p", "q"]).unwrap();
        let p = |s: &str| parse_poly(s, &t).unwrap();
        let scale = Scale::new(vec![0, 1, 2], vec![], vec![], vec![p("x*y - z^2")]).unwrap();
        let u = Uniformization::new(vec![3, 4], vec![0, 1, 2], vec![p("p^2"), p("q^2"), p("p*q")]).unwrap();
        u.check(&scale).unwrap();
        let d = u.descend(&RationalFunction::from_poly(p("2*p^3*q + 6*q^2")), &scale).unwrap();
        assert_eq!(d.as_poly().unwrap(), &p("2*x*z + 6*y"));
        assert!(u.descend(&RationalFunction::from_poly(p("p")), &scale).is_err());
    }
}
