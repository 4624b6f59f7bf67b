use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::Var;
use super::polynomial::Poly;
use super::Q;

/// Quotient of polynomials, kept with a normalized denominator.
///
/// Normalization cancels integer content, common monomial factors and exact
/// polynomial quotients; [`RationalFunction::reduce_full`] runs a full gcd.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RationalFunction { num, den };
        r.normalize();
        r
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn zero() -> Self {
        RationalFunction::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Poly::one())
    }

    pub fn constant(c: Q) -> Self {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn recip(&self) -> RationalFunction {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Q) -> RationalFunction {
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> RationalFunction {
        RationalFunction::new(self.num.pow(e), self.den.pow(e))
    }

    /// Equality by cross multiplication.
    pub fn equals(&self, o: &RationalFunction) -> bool {
        (&self.num * &o.den) == (&o.num * &self.den)
    }

    pub fn derivative(&self, v: Var) -> RationalFunction {
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        RationalFunction::new(n, &self.den * &self.den)
    }

    pub fn substitute(&self, map: &std::collections::HashMap<Var, RationalFunction>) -> RationalFunction {
        fn sub_poly(p: &Poly, map: &std::collections::HashMap<Var, RationalFunction>) -> RationalFunction {
            let mut acc = RationalFunction::zero();
            for (m, c) in p.terms() {
                let mut t = RationalFunction::constant(c.clone());
                let mut keep = Vec::new();
                for &(v, e) in m.pairs() {
                    match map.get(&v) {
                        Some(r) => t = &t * &r.pow(e),
                        None => keep.push((v, e)),
                    }
                }
                let km = super::Monomial::from_pairs(keep);
                t = &t * &RationalFunction::from_poly(Poly::term(Q::one(), km));
                acc = &acc + &t;
            }
            acc
        }
        &sub_poly(&self.num, map) / &sub_poly(&self.den, map)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    /// Cancels the full polynomial gcd of numerator and denominator.
    pub fn reduce_full(&self) -> RationalFunction {
        if self.den.is_constant() || self.num.is_zero() {
            return self.clone();
        }
        match super::gcd::poly_gcd(&self.num, &self.den) {
            Some(g) if !g.is_constant() => RationalFunction::new(
                self.num.div_exact(&g).expect("gcd divides"),
                self.den.div_exact(&g).expect("gcd divides"),
            ),
            _ => self.clone(),
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        if let Some(c) = self.den.as_constant() {
            self.num = self.num.scale(&c.recip());
            self.den = Poly::one();
            return;
        }
        let g = self.num.content_gcd_monomial().gcd(&self.den.content_gcd_monomial());
        if !g.is_one() {
            self.num = self.num.div_monomial(&g);
            self.den = self.den.div_monomial(&g);
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = Poly::one();
            return;
        }
        if let Some(q) = self.den.div_exact(&self.num) {
            if !q.is_constant() {
                self.num = Poly::one();
                self.den = q;
            }
        }
        // primitive denominator with positive leading coefficient
        let p = self.den.primitive();
        let lead_old = self.den.terms()[0].1.clone();
        let lead_new = p.terms()[0].1.clone();
        let f = &lead_new / &lead_old;
        self.num = self.num.scale(&f);
        self.den = p;
        if let Some(c) = self.den.as_constant() {
            self.num = self.num.scale(&c.recip());
            self.den = Poly::one();
        }
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RationalFunction::new(&self.num + &o.num, self.den.clone());
        }
        RationalFunction::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        if self.num.is_zero() || o.num.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, o: &RationalFunction) -> RationalFunction {
        assert!(!o.num.is_zero(), "division by zero rational function");
        RationalFunction::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: RationalFunction) -> RationalFunction {
        &self + &o
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: RationalFunction) -> RationalFunction {
        &self * &o
    }
}
