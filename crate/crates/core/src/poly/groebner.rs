//! Buchberger completion with the sugar strategy and Gebauer–Möller pair pruning.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::polynomial::Poly;
use super::Q;
use crate::error::{Error, Result};

/// Caps on completion work. Defaults can be overridden through
/// `CYCLETRACE_MAX_BASIS` and `CYCLETRACE_MAX_PAIRS`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_basis: usize,
    pub max_pairs: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_basis: 5_000, max_pairs: 500_000 }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let d = Limits::default();
        let read = |k: &str, dflt: usize| std::env::var(k).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(dflt);
        Limits {
            max_basis: read("CYCLETRACE_MAX_BASIS", d.max_basis),
            max_pairs: read("CYCLETRACE_MAX_PAIRS", d.max_pairs),
        }
    }
}

/// Terms sorted descending in a fixed order.
pub(crate) type Terms = Vec<(Monomial, Q)>;

pub(crate) fn to_terms(p: &Poly, order: &MonomialOrder) -> Terms {
    p.sorted_terms(order)
}

pub(crate) fn from_terms(t: Terms) -> Poly {
    Poly::from_terms(t)
}

/// `f - c * m * g`, all sorted in `order`.
pub(crate) fn sub_mul(f: &[(Monomial, Q)], c: &Q, m: &Monomial, g: &[(Monomial, Q)], order: &MonomialOrder) -> Terms {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut i = 0;
    let mut gi = g.iter().map(|(n, d)| (n.mul(m), d * c)).peekable();
    while i < f.len() {
        match gi.peek() {
            None => break,
            Some((n, d)) => match order.cmp(&f[i].0, n) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((n.clone(), -d.clone()));
                    gi.next();
                }
                Ordering::Equal => {
                    let v = &f[i].1 - d;
                    if !v.is_zero() {
                        out.push((f[i].0.clone(), v));
                    }
                    i += 1;
                    gi.next();
                }
            },
        }
    }
    out.extend(f[i..].iter().cloned());
    for (n, d) in gi {
        out.push((n, -d));
    }
    out
}

pub(crate) fn make_monic(t: &mut Terms) -> Q {
    if t.is_empty() {
        return Q::one();
    }
    let lc = t[0].1.clone();
    if !lc.is_one() {
        let inv = lc.recip();
        for (_, c) in t.iter_mut() {
            *c *= &inv;
        }
    }
    lc
}

/// Fully reduces `f` by monic `basis` (all sorted in `order`).
pub(crate) fn reduce_terms(f: Terms, basis: &[&Terms], order: &MonomialOrder) -> Terms {
    let mut rem: Terms = Vec::new();
    let mut f = f;
    while !f.is_empty() {
        let (m, c) = f[0].clone();
        match basis.iter().find(|g| g[0].0.divides(&m)) {
            Some(g) => {
                let q = g[0].0.quotient_of(&m).unwrap();
                f = sub_mul(&f, &c, &q, g, order);
            }
            None => {
                rem.push(f.remove(0));
            }
        }
    }
    rem
}

#[derive(Clone)]
struct Elem {
    terms: Terms,
    sugar: u32,
    cof: Vec<Poly>,
    active: bool,
}

impl Elem {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Result of a completion: reduced basis plus, when requested, cofactors
/// expressing each basis element in the input generators.
#[derive(Clone, Debug)]
pub struct Completion {
    pub basis: Vec<Poly>,
    pub cofactors: Option<Vec<Vec<Poly>>>,
}

/// Reduced Gröbner basis of `gens` in `order`.
pub fn groebner(gens: &[Poly], order: &MonomialOrder) -> Result<Vec<Poly>> {
    Ok(complete(gens, order, false, Limits::from_env())?.basis)
}

/// Like [`groebner`] but tracks how each basis element is built from `gens`.
pub fn groebner_with_cofactors(gens: &[Poly], order: &MonomialOrder) -> Result<Completion> {
    complete(gens, order, true, Limits::from_env())
}

pub fn complete(gens: &[Poly], order: &MonomialOrder, track: bool, limits: Limits) -> Result<Completion> {
    let n = gens.len();
    let mut elems: Vec<Elem> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let unit_cof = |k: usize| -> Vec<Poly> {
        if !track {
            return Vec::new();
        }
        (0..n).map(|i| if i == k { Poly::one() } else { Poly::zero() }).collect()
    };

    let mut input: Vec<(Terms, Vec<Poly>, u32)> = gens
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_zero())
        .map(|(k, g)| (to_terms(g, order), unit_cof(k), g.total_degree()))
        .collect();
    input.sort_by(|a, b| order.cmp(&a.0[0].0, &b.0[0].0));

    for (t, cof, sugar) in input {
        let (t, cof) = reduce_tracked(t, cof, &elems, order, track);
        if t.is_empty() {
            continue;
        }
        insert(&mut elems, &mut pairs, t, cof, sugar, order, track);
        check_limits(&elems, &pairs, limits)?;
    }

    while !pairs.is_empty() {
        let k = select_pair(&pairs, order);
        let p = pairs.swap_remove(k);
        let (s, scof) = spoly(&elems[p.i], &elems[p.j], &p.lcm, order, track);
        let (r, rcof) = reduce_tracked(s, scof, &elems, order, track);
        if r.is_empty() {
            continue;
        }
        insert(&mut elems, &mut pairs, r, rcof, p.sugar, order, track);
        check_limits(&elems, &pairs, limits)?;
    }

    finish(elems, order, track)
}

fn check_limits(elems: &[Elem], pairs: &[Pair], limits: Limits) -> Result<()> {
    if elems.len() > limits.max_basis {
        return Err(Error::ResourceLimit(format!("basis exceeded {} elements", limits.max_basis)));
    }
    if pairs.len() > limits.max_pairs {
        return Err(Error::ResourceLimit(format!("pair queue exceeded {} entries", limits.max_pairs)));
    }
    Ok(())
}

fn select_pair(pairs: &[Pair], order: &MonomialOrder) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let (a, b) = (&pairs[k], &pairs[best]);
        let better = match a.sugar.cmp(&b.sugar) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => match order.cmp(&a.lcm, &b.lcm) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => (a.i, a.j) < (b.i, b.j),
            },
        };
        if better {
            best = k;
        }
    }
    best
}

fn spoly(f: &Elem, g: &Elem, lcm: &Monomial, order: &MonomialOrder, track: bool) -> (Terms, Vec<Poly>) {
    let mf = f.lm().quotient_of(lcm).unwrap();
    let mg = g.lm().quotient_of(lcm).unwrap();
    let scaled: Terms = f.terms.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    let s = sub_mul(&scaled, &Q::one(), &mg, &g.terms, order);
    let cof = if track {
        f.cof.iter().zip(&g.cof).map(|(a, b)| &a.mul_monomial(&mf) - &b.mul_monomial(&mg)).collect()
    } else {
        Vec::new()
    };
    (s, cof)
}

fn reduce_tracked(
    f: Terms,
    mut cof: Vec<Poly>,
    elems: &[Elem],
    order: &MonomialOrder,
    track: bool,
) -> (Terms, Vec<Poly>) {
    let mut rem: Terms = Vec::new();
    let mut f = f;
    while !f.is_empty() {
        let (m, c) = f[0].clone();
        match elems.iter().find(|g| g.active && g.lm().divides(&m)) {
            Some(g) => {
                let q = g.lm().quotient_of(&m).unwrap();
                f = sub_mul(&f, &c, &q, &g.terms, order);
                if track {
                    for (a, b) in cof.iter_mut().zip(&g.cof) {
                        *a = &*a - &b.mul_term(&c, &q);
                    }
                }
            }
            None => rem.push(f.remove(0)),
        }
    }
    if track && !rem.is_empty() {
        let lc = rem[0].1.recip();
        for a in cof.iter_mut() {
            *a = a.scale(&lc);
        }
    }
    make_monic(&mut rem);
    (rem, cof)
}

fn insert(
    elems: &mut Vec<Elem>,
    pairs: &mut Vec<Pair>,
    t: Terms,
    cof: Vec<Poly>,
    sugar: u32,
    _order: &MonomialOrder,
    _track: bool,
) {
    let h = elems.len();
    let hlm = t[0].0.clone();

    // Gebauer–Möller: new pairs (h, g)
    let mut cands: Vec<(usize, Monomial, bool)> = elems
        .iter()
        .enumerate()
        .filter(|(_, g)| g.active)
        .map(|(k, g)| (k, hlm.lcm(g.lm()), hlm.coprime(g.lm())))
        .collect();
    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    while let Some((k, l, cop)) = cands.pop() {
        let dominated =
            !cop && (cands.iter().any(|(_, l2, _)| l2.divides(&l)) || kept.iter().any(|(_, l2, _)| l2.divides(&l)));
        if !dominated {
            kept.push((k, l, cop));
        }
    }
    // old pairs made redundant by h
    pairs.retain(|p| {
        let li = hlm.lcm(elems[p.i].lm());
        let lj = hlm.lcm(elems[p.j].lm());
        !(hlm.divides(&p.lcm) && li != p.lcm && lj != p.lcm)
    });
    for (k, l, cop) in kept {
        if cop {
            continue;
        }
        let g = &elems[k];
        let s = (sugar + l.degree() - hlm.degree()).max(g.sugar + l.degree() - g.lm().degree());
        pairs.push(Pair { i: k, j: h, lcm: l, sugar: s });
    }
    for g in elems.iter_mut() {
        if g.active && hlm.divides(g.lm()) {
            g.active = false;
        }
    }
    elems.push(Elem { terms: t, sugar, cof, active: true });
}

fn finish(elems: Vec<Elem>, order: &MonomialOrder, track: bool) -> Result<Completion> {
    let mut act: Vec<Elem> = elems.into_iter().filter(|e| e.active).collect();
    // minimal basis
    let mut minimal: Vec<Elem> = Vec::new();
    act.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for e in act {
        if !minimal.iter().any(|g| g.lm().divides(e.lm())) {
            minimal.push(e);
        }
    }
    // interreduce tails
    let mut out: Vec<Elem> = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Elem> = minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, e)| e.clone()).collect();
        let e = &minimal[k];
        let head = e.terms[0].clone();
        let tail: Terms = e.terms[1..].to_vec();
        let (t, cof) = reduce_tail(tail, e.cof.clone(), &others, order, track);
        let mut terms = vec![head];
        terms.extend(t);
        out.push(Elem { terms, sugar: e.sugar, cof, active: true });
    }
    let basis: Vec<Poly> = out.iter().map(|e| from_terms(e.terms.clone())).collect();
    let cofactors = track.then(|| out.iter().map(|e| e.cof.clone()).collect());
    Ok(Completion { basis, cofactors })
}

fn reduce_tail(f: Terms, mut cof: Vec<Poly>, elems: &[Elem], order: &MonomialOrder, track: bool) -> (Terms, Vec<Poly>) {
    let mut rem: Terms = Vec::new();
    let mut f = f;
    while !f.is_empty() {
        let (m, c) = f[0].clone();
        match elems.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = g.lm().quotient_of(&m).unwrap();
                f = sub_mul(&f, &c, &q, &g.terms, order);
                if track {
                    for (a, b) in cof.iter_mut().zip(&g.cof) {
                        *a = &*a - &b.mul_term(&c, &q);
                    }
                }
            }
            None => rem.push(f.remove(0)),
        }
    }
    (rem, cof)
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
    fn small_lex_basis() {
        let g = groebner(&[&x().pow(2) - &y(), y().pow(2)], &MonomialOrder::Lex).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.contains(&y().pow(2)));
        assert!(g.contains(&(&x().pow(2) - &y())));
    }

    #[test]
    fn unit_ideal() {
        let g = groebner(&[x(), &x() + &Poly::one()], &MonomialOrder::GrevLex).unwrap();
        assert_eq!(g, vec![Poly::one()]);
    }

    #[test]
    fn principal_is_monic() {
        let g = groebner(&[&x().scale(&Q::from_integer(3.into())) - &y()], &MonomialOrder::GrevLex).unwrap();
        assert_eq!(g, vec![&x() - &y().scale(&Q::new(1.into(), 3.into()))]);
    }

    #[test]
    fn cofactors_reconstruct_basis() {
        let gens = vec![&x().pow(2) - &y(), &(&x() * &y()) - &Poly::one()];
        let c = groebner_with_cofactors(&gens, &MonomialOrder::Lex).unwrap();
        let cof = c.cofactors.unwrap();
        for (g, row) in c.basis.iter().zip(&cof) {
            let mut s = Poly::zero();
            for (a, f) in row.iter().zip(&gens) {
                s = &s + &(a * f);
            }
            assert_eq!(&s, g);
        }
    }

    #[test]
    fn limits_are_enforced() {
        let gens = vec![&x().pow(3) - &y(), &(&x() * &y()) - &Poly::one()];
        let tight = Limits { max_basis: 1, max_pairs: 100 };
        assert!(matches!(complete(&gens, &MonomialOrder::GrevLex, false, tight), Err(Error::ResourceLimit(_))));
    }
}
