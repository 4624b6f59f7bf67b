use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Var};
use super::order::MonomialOrder;
use super::Q;

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are kept sorted in descending grevlex order with no zero coefficients,
/// so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Q)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(Q::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        Poly { terms: vec![(Monomial::var(v), Q::one())] }
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly { terms: vec![(m, Q::one())] }
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Collects terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(it: I) -> Self {
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in it {
            *acc.entry(m).or_insert_with(Q::zero) += c;
        }
        let mut terms: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| MonomialOrder::GrevLex.cmp(&b.0, &a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Q)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.iter().find(|(n, _)| n == m).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, vars: &[Var]) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(vars)).max().unwrap_or(0)
    }

    pub fn degree_in_var(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }

    pub fn involves_only(&self, vars: &[Var]) -> bool {
        self.terms.iter().all(|(m, _)| m.vars().all(|v| vars.contains(&v)))
    }

    pub fn involves_any(&self, vars: &[Var]) -> bool {
        self.terms.iter().any(|(m, _)| m.vars().any(|v| vars.contains(&v)))
    }

    /// Leading term with respect to `order`.
    pub fn leading(&self, order: &MonomialOrder) -> Option<&(Monomial, Q)> {
        if matches!(order, MonomialOrder::GrevLex) {
            return self.terms.first();
        }
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    /// Terms sorted in descending `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, Q)> {
        let mut t = self.terms.clone();
        if !matches!(order, MonomialOrder::GrevLex) {
            t.sort_by(|a, b| order.cmp(&b.0, &a.0));
        }
        t
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        // grevlex is compatible with multiplication, so order is preserved
        Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect() }
    }

    pub fn mul_term(&self, c: &Q, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Makes the leading (grevlex) coefficient one.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            Some((_, c)) => self.scale(&c.recip()),
            None => Poly::zero(),
        }
    }

    /// Monic with respect to `order`.
    pub fn monic_in(&self, order: &MonomialOrder) -> Poly {
        match self.leading(order) {
            Some((_, c)) => self.scale(&c.recip()),
            None => Poly::zero(),
        }
    }

    /// Scales to coprime integer coefficients with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        use num_integer::Integer;
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den = num_bigint::BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let mut num = num_bigint::BigInt::zero();
        for (_, c) in &self.terms {
            let v = c.numer() * (&den / c.denom());
            num = num.gcd(&v);
        }
        let mut f = Q::new(den, num);
        if self.terms[0].1.is_negative() {
            f = -f;
        }
        self.scale(&f)
    }

    pub fn derivative(&self, v: Var) -> Poly {
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            (e > 0).then(|| {
                let rest = m.without(v).mul(&Monomial::var_pow(v, e - 1));
                (rest, c * Q::from_integer(e.into()))
            })
        }))
    }

    /// Substitutes polynomials for variables; unmapped variables stay.
    pub fn substitute(&self, map: &HashMap<Var, Poly>) -> Poly {
        let mut cache: HashMap<(Var, u32), Poly> = HashMap::new();
        let mut out: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut keep = Vec::new();
            for &(v, e) in m.pairs() {
                match map.get(&v) {
                    Some(p) => {
                        let pe = cache.entry((v, e)).or_insert_with(|| p.pow(e)).clone();
                        acc = &acc * &pe;
                    }
                    None => keep.push((v, e)),
                }
            }
            let km = Monomial::from_pairs(keep);
            for (n, d) in acc.terms {
                *out.entry(n.mul(&km)).or_insert_with(Q::zero) += d;
            }
        }
        Poly::from_terms(out)
    }

    /// Evaluates the listed variables at rational values.
    pub fn eval_partial(&self, vals: &HashMap<Var, Q>) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut c = c.clone();
            let mut keep = Vec::new();
            for &(v, e) in m.pairs() {
                match vals.get(&v) {
                    Some(x) => c *= num_traits::pow(x.clone(), e as usize),
                    None => keep.push((v, e)),
                }
            }
            (Monomial::from_pairs(keep), c)
        }))
    }

    /// Evaluates all variables; missing ones are an error.
    pub fn eval(&self, vals: &HashMap<Var, Q>) -> Option<Q> {
        self.eval_partial(vals).as_constant()
    }

    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.rename(map), c.clone())))
    }

    /// Groups terms by their monomial in `vars`; coefficients live in the other variables.
    pub fn coefficients_in(&self, vars: &[Var]) -> BTreeMap<Monomial, Poly> {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Q)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split(vars);
            groups.entry(inside).or_default().push((outside, c.clone()));
        }
        groups.into_iter().map(|(k, v)| (k, Poly::from_terms(v))).collect()
    }

    /// Univariate coefficient list in `v` (index = power), coefficients in other variables.
    pub fn univariate_coeffs(&self, v: Var) -> Vec<Poly> {
        let d = self.degree_in_var(v) as usize;
        let mut out = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            out[m.exp(v) as usize].push((m.without(v), c.clone()));
        }
        out.into_iter().map(Poly::from_terms).collect()
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = d.terms[0].clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let q = lm.quotient_of(&m)?;
            let k = &c / &lc;
            rem = &rem - &d.mul_term(&k, &q);
            quot.push((q, k));
        }
        Some(Poly::from_terms(quot))
    }

    pub fn content_gcd_monomial(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            Some((m, _)) => it.fold(m.clone(), |acc, (n, _)| acc.gcd(n)),
            None => Monomial::one(),
        }
    }

    /// Divides every term by a monomial that divides all of them.
    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, c)| (m.quotient_of(n).expect("monomial divides"), c.clone())).collect(),
        }
    }

    fn merge(&self, other: &Poly, sign: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match MonomialOrder::GrevLex.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if sign { b[j].1.clone() } else { -b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if sign { &a[i].1 + &b[j].1 } else { &a[i].1 - &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if sign { t.1.clone() } else { -t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.merge(o, true)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.merge(o, false)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].1, &self.terms[0].0);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].1, &o.terms[0].0);
        }
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                *acc.entry(m.mul(n)).or_insert_with(Q::zero) += c * d;
            }
        }
        Poly::from_terms(acc)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: &Poly) -> Poly {
                (&self).$f(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn ring_ops() {
        let p = &x() + &y();
        let sq = &p * &p;
        let expect = &(&x().pow(2) + &(&x() * &y()).scale(&Q::from_integer(2.into()))) + &y().pow(2);
        assert_eq!(sq, expect);
        assert!((&sq - &sq).is_zero());
        assert_eq!(p.pow(3), &sq * &p);
    }

    #[test]
    fn exact_division() {
        let a = &x().pow(2) - &y().pow(2);
        let b = &x() - &y();
        assert_eq!(a.div_exact(&b).unwrap(), &x() + &y());
        assert!(a.div_exact(&(&x() + &Poly::one())).is_none());
    }

    #[test]
    fn substitution_and_derivative() {
        let p = &x().pow(3) + &(&x() * &y());
        let mut map = HashMap::new();
        map.insert(0, &y() + &Poly::one());
        let s = p.substitute(&map);
        let y1 = &y() + &Poly::one();
        assert_eq!(s, &y1.pow(3) + &(&y1 * &y()));
        assert_eq!(p.derivative(0), &x().pow(2).scale(&Q::from_integer(3.into())) + &y());
    }

    #[test]
    fn primitive_part() {
        let p = &x().scale(&Q::new(4.into(), 6.into())) - &Poly::from_int(2);
        assert_eq!(p.primitive(), &x() - &Poly::from_int(3));
    }
}
