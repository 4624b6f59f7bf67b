//! Symmetric products `Sym^k(Q^p)`: elementary symmetric and Newton
//! coordinates, vector Newton relations, discriminants and multiplicity strata.
//!
//! Points of `Q^p` act as linear forms on a dual space whose coordinates are
//! caller-chosen variables, so `S_h(Q^p)` is a space of homogeneous degree-`h`
//! polynomials in those variables.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, RationalFunction, Var, Q};

/// Minimal ring interface for Newton's identities.
pub trait SymRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
}

impl SymRing for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: &Q) -> Self {
        self * c
    }
}

impl SymRing for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: &Q) -> Self {
        Poly::scale(self, c)
    }
}

impl SymRing for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: &Q) -> Self {
        RationalFunction::scale(self, c)
    }
}

/// An ordered `k`-tuple of points of `Q^p`; entries may be symbolic.
#[derive(Clone, Debug, PartialEq)]
pub struct PointTuple {
    dim: usize,
    points: Vec<Vec<Poly>>,
}

impl PointTuple {
    pub fn new(points: Vec<Vec<Q>>) -> Result<Self> {
        PointTuple::symbolic(points.into_iter().map(|p| p.into_iter().map(Poly::constant).collect()).collect())
    }

    pub fn symbolic(points: Vec<Vec<Poly>>) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).unwrap_or(0);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch("points of different dimensions".into()));
        }
        Ok(PointTuple { dim, points })
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<Poly>] {
        &self.points
    }

    /// Each point as the linear form `sum_i x_i * dual_i`.
    pub fn linear_forms(&self, dual: &[Var]) -> Result<Vec<Poly>> {
        if dual.len() != self.dim && self.k() > 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} dual variables for points of dimension {}",
                dual.len(),
                self.dim
            )));
        }
        Ok(self
            .points
            .iter()
            .map(|p| p.iter().zip(dual).fold(Poly::zero(), |acc, (c, &v)| &acc + &(c * &Poly::var(v))))
            .collect())
    }
}

/// Components `s_1..s_k` of the symmetric-product embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct SymCoords {
    pub k: usize,
    pub p: usize,
    pub components: Vec<Poly>,
}

impl SymCoords {
    pub fn get(&self, h: usize) -> Poly {
        match h {
            0 => Poly::one(),
            h if h <= self.k => self.components[h - 1].clone(),
            _ => Poly::zero(),
        }
    }
}

/// Elementary symmetric functions of a family of ring elements, `e_0..e_n`.
pub fn elementary<R: SymRing>(xs: &[R]) -> Vec<R> {
    let mut e = vec![R::one()];
    for x in xs {
        e.push(R::zero());
        for h in (1..e.len()).rev() {
            e[h] = e[h].add(&x.mul(&e[h - 1]));
        }
    }
    e
}

pub fn elementary_symmetric(t: &PointTuple, dual: &[Var]) -> Result<SymCoords> {
    let forms = t.linear_forms(dual)?;
    let e = elementary(&forms);
    Ok(SymCoords { k: t.k(), p: t.dim(), components: e[1..].to_vec() })
}

/// Power sums `sum_j l_j^h` for `h = 0..=upto`.
pub fn power_sums(t: &PointTuple, upto: usize, dual: &[Var]) -> Result<Vec<Poly>> {
    let forms = t.linear_forms(dual)?;
    Ok((0..=upto).map(|h| forms.iter().fold(Poly::zero(), |acc, f| &acc + &f.pow(h as u32))).collect())
}

/// Weighted Newton function `N_l(x, y) = sum_j y_j (x)^l`, one entry per coordinate of `y`.
pub fn newton_weighted(x: &PointTuple, y: &[Vec<Poly>], l: usize, dual: &[Var]) -> Result<Vec<Poly>> {
    if y.len() != x.k() {
        return Err(Error::DimensionMismatch(format!("{} weights for {} points", y.len(), x.k())));
    }
    let q = y.first().map(|v| v.len()).unwrap_or(0);
    if y.iter().any(|v| v.len() != q) {
        return Err(Error::DimensionMismatch("weights of different dimensions".into()));
    }
    let forms = x.linear_forms(dual)?;
    let mut out = vec![Poly::zero(); q];
    for (f, yj) in forms.iter().zip(y) {
        let fl = f.pow(l as u32);
        for (o, c) in out.iter_mut().zip(yj) {
            *o = &*o + &(c * &fl);
        }
    }
    Ok(out)
}

/// Left side of `sum_{h=0}^{k} (-1)^h N_{l-h}(x, y) S_h(x)`, with `N` of negative index zero.
/// It vanishes identically once `l >= k`.
pub fn verify_newton_relation(x: &PointTuple, y: &[Vec<Poly>], l: usize, dual: &[Var]) -> Result<Vec<Poly>> {
    let s = elementary_symmetric(x, dual)?;
    let q = y.first().map(|v| v.len()).unwrap_or(0);
    let mut acc = vec![Poly::zero(); q];
    for h in 0..=x.k().min(l) {
        let n = newton_weighted(x, y, l - h, dual)?;
        let sh = s.get(h);
        for (a, v) in acc.iter_mut().zip(n) {
            let t = &v * &sh;
            *a = if h % 2 == 0 { &*a + &t } else { &*a - &t };
        }
    }
    Ok(acc)
}

/// Elementary symmetric values `e_1..e_k` from power sums `p_1..p_k`.
pub fn elem_from_power<R: SymRing>(p: &[R]) -> Vec<R> {
    let k = p.len();
    let mut e = vec![R::one()];
    for h in 1..=k {
        let mut acc = R::zero();
        for i in 1..=h {
            let t = e[h - i].mul(&p[i - 1]);
            acc = if i % 2 == 1 { acc.add(&t) } else { acc.sub(&t) };
        }
        e.push(acc.scale(&Q::new(1.into(), (h as i64).into())));
    }
    e[1..].to_vec()
}

/// Power sums `p_1..p_n` from elementary values `e_1..e_k` (`e_h = 0` past `k`).
pub fn power_from_elem<R: SymRing>(e: &[R], n: usize) -> Vec<R> {
    let k = e.len();
    let eh = |h: usize| {
        if h == 0 {
            R::one()
        } else if h <= k {
            e[h - 1].clone()
        } else {
            R::zero()
        }
    };
    let mut p: Vec<R> = Vec::with_capacity(n);
    for l in 1..=n {
        // p_l = sum_{i=1}^{l-1} (-1)^{i-1} e_i p_{l-i} + (-1)^{l-1} l e_l
        let mut acc = eh(l).scale(&Q::from_integer((l as i64).into()));
        if l % 2 == 0 {
            acc = R::zero().sub(&acc);
        }
        for i in 1..l {
            let t = eh(i).mul(&p[l - i - 1]);
            acc = if i % 2 == 1 { acc.add(&t) } else { acc.sub(&t) };
        }
        p.push(acc);
    }
    p
}

/// Number of entries of `t` equal to `x`.
pub fn multiplicity_in_tuple(x: &[Q], t: &PointTuple) -> Result<usize> {
    if x.len() != t.dim() && t.k() > 0 {
        return Err(Error::DimensionMismatch("point and tuple dimensions differ".into()));
    }
    let xp: Vec<Poly> = x.iter().cloned().map(Poly::constant).collect();
    Ok(t.points().iter().filter(|p| **p == xp).count())
}

/// Coefficients `D_h`, `h = 0..=N` with `N = k(k-1)/2`, of
/// `prod_{i<j} (T^2 - (X_i - X_j)^2) = sum_h (-1)^(N-h) D_h T^(2h)`.
/// `D_h` is homogeneous of degree `k(k-1) - 2h` in the dual variables.
pub fn discriminant_coeffs(t: &PointTuple, dual: &[Var]) -> Result<Vec<Poly>> {
    if t.k() < 2 {
        return Err(Error::Invalid("discriminant needs at least two points".into()));
    }
    let f = t.linear_forms(dual)?;
    let mut sq = Vec::new();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            sq.push((&f[i] - &f[j]).pow(2));
        }
    }
    let e = elementary(&sq);
    let n = sq.len();
    Ok((0..=n).map(|h| e[n - h].clone()).collect())
}

/// Weakly decreasing repetition counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(pub Vec<usize>);

impl Partition {
    pub fn mu(&self) -> usize {
        self.0.iter().map(|n| n * (n.saturating_sub(1)) / 2).sum()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Repetition pattern of the tuple and its coincidence number `mu`.
pub fn stratum(t: &PointTuple) -> (usize, Partition) {
    let mut counts: Vec<(Vec<Poly>, usize)> = Vec::new();
    for p in t.points() {
        match counts.iter_mut().find(|(q, _)| q == p) {
            Some((_, n)) => *n += 1,
            None => counts.push((p.clone(), 1)),
        }
    }
    let mut parts: Vec<usize> = counts.into_iter().map(|(_, n)| n).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    let part = Partition(parts);
    (part.mu(), part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qf};

    fn tuple(pts: &[&[i64]]) -> PointTuple {
        PointTuple::new(pts.iter().map(|p| p.iter().map(|&c| q(c)).collect()).collect()).unwrap()
    }

    #[test]
    fn scalar_elementary() {
        let s = elementary_symmetric(&tuple(&[&[2], &[3]]), &[0]).unwrap();
        assert_eq!(s.components[0], Poly::var(0).scale(&q(5)));
        assert_eq!(s.components[1], Poly::var(0).pow(2).scale(&q(6)));
    }

    #[test]
    fn plane_pair_gives_product() {
        let s = elementary_symmetric(&tuple(&[&[1, 0], &[0, 1]]), &[0, 1]).unwrap();
        assert_eq!(s.components[1], &Poly::var(0) * &Poly::var(1));
    }

    #[test]
    fn single_point_is_its_linear_form() {
        let s = elementary_symmetric(&tuple(&[&[4, -1]]), &[0, 1]).unwrap();
        assert_eq!(s.components[0], &Poly::var(0).scale(&q(4)) - &Poly::var(1));
    }

    #[test]
    fn newton_scalar_cases() {
        let x = tuple(&[&[2], &[5]]);
        let ones = vec![vec![Poly::one()]; 2];
        let n2 = newton_weighted(&x, &ones, 2, &[0]).unwrap();
        assert_eq!(n2[0], Poly::var(0).pow(2).scale(&q(29)));
        let n0 = newton_weighted(&x, &ones, 0, &[0]).unwrap();
        assert_eq!(n0[0], Poly::from_int(2));
        assert!(verify_newton_relation(&x, &ones, 2, &[0]).unwrap()[0].is_zero());
        // below k the displayed sum is not an identity
        assert!(!verify_newton_relation(&x, &ones, 1, &[0]).unwrap()[0].is_zero());
        let single = tuple(&[&[7]]);
        for l in 1..5 {
            assert!(verify_newton_relation(&single, &[vec![Poly::one()]], l, &[0]).unwrap()[0].is_zero());
        }
    }

    #[test]
    fn waring_conversion() {
        assert_eq!(elem_from_power(&[q(5), q(13)]), vec![q(5), q(6)]);
        assert_eq!(elem_from_power(&[q(0), q(0)]), vec![q(0), q(0)]);
        assert_eq!(elem_from_power(&vec![q(4); 4]), vec![q(4), q(6), q(4), q(1)]);
        assert_eq!(power_from_elem(&[q(5), q(6)], 3), vec![q(5), q(13), q(35)]);
    }

    #[test]
    fn multiplicities() {
        let t = tuple(&[&[1, 2], &[0, 0], &[1, 2]]);
        assert_eq!(multiplicity_in_tuple(&[q(1), q(2)], &t).unwrap(), 2);
        assert_eq!(multiplicity_in_tuple(&[q(3), q(2)], &t).unwrap(), 0);
    }

    #[test]
    fn discriminant_pair() {
        let d = discriminant_coeffs(&tuple(&[&[3], &[-2]]), &[0]).unwrap();
        assert_eq!(d, vec![Poly::var(0).pow(2).scale(&q(25)), Poly::one()]);
        let rep = discriminant_coeffs(&tuple(&[&[1], &[4], &[1]]), &[0]).unwrap();
        assert!(rep[0].is_zero());
    }

    #[test]
    fn strata() {
        assert_eq!(stratum(&tuple(&[&[1], &[2], &[3]])), (0, Partition(vec![1, 1, 1])));
        assert_eq!(stratum(&tuple(&[&[1], &[1], &[1]])), (3, Partition(vec![3])));
        assert_eq!(stratum(&tuple(&[&[1], &[2], &[1], &[2]])).0, 2);
        let half = PointTuple::new(vec![vec![qf(1, 2)], vec![qf(1, 2)]]).unwrap();
        assert_eq!(stratum(&half).1, Partition(vec![2]));
    }
}
