//! Dense univariate helpers over the rationals.

use num_traits::{One, Zero};

use super::monomial::{Monomial, Var};
use super::polynomial::Poly;
use super::Q;

/// Coefficients by increasing power. Panics if `p` involves another variable.
pub fn coeffs(p: &Poly, v: Var) -> Vec<Q> {
    let d = p.degree_in_var(v) as usize;
    let mut out = vec![Q::zero(); d + 1];
    for (m, c) in p.terms() {
        assert!(m.vars().all(|w| w == v), "not univariate in the requested variable");
        out[m.exp(v) as usize] = c.clone();
    }
    trim(&mut out);
    out
}

pub fn from_coeffs(c: &[Q], v: Var) -> Poly {
    Poly::from_terms(c.iter().enumerate().map(|(k, a)| (Monomial::var_pow(v, k as u32), a.clone())))
}

fn trim(c: &mut Vec<Q>) {
    while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() == 1 && c[0].is_zero() {
        c.clear();
    }
}

pub fn degree(c: &[Q]) -> Option<usize> {
    c.iter().rposition(|x| !x.is_zero())
}

/// Quotient and remainder of dense polynomials.
pub fn div_rem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Q::zero(); r.len() - db];
    let inv = b[db].recip();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let k = &r[dr] * &inv;
        for (i, bi) in b.iter().enumerate().take(db + 1) {
            r[dr - db + i] -= &k * bi;
        }
        q[dr - db] = k;
        r.truncate(dr);
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn gcd_dense(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

pub fn monic(a: &[Q]) -> Vec<Q> {
    match degree(a) {
        Some(d) => {
            let inv = a[d].recip();
            a[..=d].iter().map(|x| x * &inv).collect()
        }
        None => Vec::new(),
    }
}

pub fn derivative(a: &[Q]) -> Vec<Q> {
    let mut d: Vec<Q> = a.iter().enumerate().skip(1).map(|(k, c)| c * Q::from_integer(k.into())).collect();
    trim(&mut d);
    d
}

pub fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Monic squarefree part.
pub fn squarefree(a: &[Q]) -> Vec<Q> {
    let g = gcd_dense(a, &derivative(a));
    let (q, _) = div_rem(a, &g);
    monic(&q)
}

/// Yun's decomposition: monic squarefree, pairwise coprime `f_e` with `a = lc * prod f_e^e`.
pub fn squarefree_decomposition(a: &[Q]) -> Vec<(Vec<Q>, u32)> {
    let mut out = Vec::new();
    if degree(a).unwrap_or(0) == 0 {
        return out;
    }
    let a = monic(a);
    let da = derivative(&a);
    let g = gcd_dense(&a, &da);
    let mut b = div_rem(&a, &g).0;
    let mut c = div_rem(&da, &g).0;
    let mut e = 1;
    loop {
        let d = {
            let mut t = c.clone();
            let db = derivative(&b);
            let n = t.len().max(db.len());
            t.resize(n, Q::zero());
            for (i, x) in db.into_iter().enumerate() {
                t[i] -= x;
            }
            trim(&mut t);
            t
        };
        if degree(&b).unwrap_or(0) == 0 {
            break;
        }
        let f = gcd_dense(&b, &d);
        if degree(&f).unwrap_or(0) > 0 {
            out.push((f.clone(), e));
        }
        b = div_rem(&b, &f).0;
        c = div_rem(&d, &f).0;
        e += 1;
    }
    out
}

pub fn gcd(a: &Poly, b: &Poly, v: Var) -> Poly {
    from_coeffs(&gcd_dense(&coeffs(a, v), &coeffs(b, v)), v)
}

/// Factors a family of monic polynomials over a pairwise coprime basis:
/// returns the basis and, for each input, its exponent vector.
pub fn coprime_basis(polys: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<Vec<u32>>) {
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for p in polys {
        let mut pending = vec![monic(p)];
        while let Some(f) = pending.pop() {
            if degree(&f).unwrap_or(0) == 0 {
                continue;
            }
            let mut placed = false;
            for k in 0..basis.len() {
                let g = gcd_dense(&f, &basis[k]);
                if degree(&g).unwrap_or(0) == 0 {
                    continue;
                }
                let b = basis.remove(k);
                let (b1, _) = div_rem(&b, &g);
                let (f1, _) = div_rem(&f, &g);
                pending.push(monic(&b1));
                pending.push(monic(&f1));
                pending.push(g.clone());
                placed = true;
                break;
            }
            if !placed {
                basis.push(f);
            }
        }
    }
    basis.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| cmp_coeffs(a, b)));
    let exps = polys
        .iter()
        .map(|p| {
            basis
                .iter()
                .map(|b| {
                    let mut e = 0;
                    let mut cur = p.clone();
                    loop {
                        let (q, r) = div_rem(&cur, b);
                        if !r.is_empty() {
                            break;
                        }
                        e += 1;
                        cur = q;
                    }
                    e
                })
                .collect()
        })
        .collect();
    (basis, exps)
}

fn cmp_coeffs(a: &[Q], b: &[Q]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

pub fn one() -> Vec<Q> {
    vec![Q::one()]
}

#[cfg(test)]
mod tests {
    #[test]
    fn yun() {
        use crate::poly::q;
        // (T - 1)^2 (T + 2)^3 T
        let mut p = vec![q(1)];
        for r in [q(1), q(1), q(-2), q(-2), q(-2), q(0)] {
            p = super::mul(&p, &[-r, q(1)]);
        }
        let d = super::squarefree_decomposition(&p);
        assert_eq!(d, vec![(vec![q(0), q(1)], 1), (vec![q(-1), q(1)], 2), (vec![q(2), q(1)], 3)]);
    }

    use super::*;
    use crate::poly::q;

    fn v(c: &[i64]) -> Vec<Q> {
        c.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = v(&[2, -3, 1]);
        let b = v(&[-3, 2, 1]);
        assert_eq!(gcd_dense(&a, &b), v(&[-1, 1]));
        let (qq, r) = div_rem(&a, &v(&[-1, 1]));
        assert_eq!(qq, v(&[-2, 1]));
        assert!(r.is_empty());
    }

    #[test]
    fn squarefree_part() {
        // (x-1)^2 (x+1)
        let a = mul(&mul(&v(&[-1, 1]), &v(&[-1, 1])), &v(&[1, 1]));
        assert_eq!(squarefree(&a), v(&[-1, 0, 1]));
    }

    #[test]
    fn coprime_factoring() {
        let a = mul(&v(&[-1, 1]), &v(&[-1, 1]));
        let b = mul(&v(&[-1, 1]), &v(&[1, 1]));
        let (basis, e) = coprime_basis(&[a, b]);
        assert_eq!(basis.len(), 2);
        let sum: Vec<u32> = e.iter().map(|x| x.iter().sum()).collect();
        assert_eq!(sum, vec![2, 2]);
    }
}
