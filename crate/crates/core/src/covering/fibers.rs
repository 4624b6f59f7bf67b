use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ImplicitCovering, Scale};
use crate::error::{Error, Result};
use crate::poly::{quotient_algebra, univariate, BaseField, Ideal, Monomial, Poly, QuotientAlgebra, Var, Q};

/// Fiber cardinalities at a base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberCount {
    pub with_multiplicity: usize,
    pub distinct: usize,
}

const SEPARATION_ATTEMPTS: usize = 4;

fn specialize(gens: &[Poly], scale: &Scale, point: &[Q]) -> Result<Vec<Poly>> {
    let vars = scale.base_and_chart();
    if point.len() != vars.len() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, base and chart have {}",
            point.len(),
            vars.len()
        )));
    }
    let vals: HashMap<Var, Q> = vars.into_iter().zip(point.iter().cloned()).collect();
    for g in scale.base_ideal.gens() {
        if !g.eval_partial(&vals).is_zero() {
            return Err(Error::Invalid("point does not lie on the base".into()));
        }
    }
    Ok(gens.iter().map(|g| g.eval_partial(&vals)).filter(|g| !g.is_zero()).collect())
}

/// The fiber over a point of `S x U` as a finite algebra over the rationals.
pub fn fiber_algebra(gens: &[Poly], scale: &Scale, point: &[Q]) -> Result<QuotientAlgebra> {
    let specialized = specialize(gens, scale, point)?;
    quotient_algebra(&specialized, &scale.fiber, &BaseField::Rationals)
}

/// Linear form with small nonzero integer coefficients.
pub fn random_linear_form(vars: &[Var], rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let cs: Vec<i64> = vars.iter().map(|_| rng.gen_range(-9..=9)).collect();
        if cs.iter().all(|&c| c == 0) {
            continue;
        }
        return vars
            .iter()
            .zip(cs)
            .fold(Poly::zero(), |acc, (&v, c)| &acc + &Poly::var(v).scale(&Q::from_integer(c.into())));
    }
}

fn radical_dim(specialized: &[Poly], alg: &QuotientAlgebra, fiber: &[Var]) -> Result<usize> {
    let mut gens = specialized.to_vec();
    for &v in fiber {
        let chi = alg
            .char_poly_of(&Poly::var(v))
            .ok_or_else(|| Error::Invalid("fiber algebra is not over the rationals".into()))?;
        gens.push(univariate::from_coeffs(&univariate::squarefree(&chi), v));
    }
    Ok(quotient_algebra(&gens, fiber, &BaseField::Rationals)?.dim())
}

/// Points of the fiber with and without multiplicity.
pub fn fiber_count(c: &ImplicitCovering, point: &[Q], seed: u64) -> Result<FiberCount> {
    let scale = c.scale();
    let specialized = specialize(c.gens(), scale, point)?;
    let alg = quotient_algebra(&specialized, &scale.fiber, &BaseField::Rationals)?;
    let n = alg.dim();
    if n == 0 {
        return Ok(FiberCount { with_multiplicity: 0, distinct: 0 });
    }
    let rad = radical_dim(&specialized, &alg, &scale.fiber)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SEPARATION_ATTEMPTS {
        let l = random_linear_form(&scale.fiber, &mut rng);
        let chi = alg.char_poly_of(&l).expect("rational fiber algebra");
        let distinct = univariate::degree(&univariate::squarefree(&chi)).unwrap_or(0);
        if distinct == rad {
            return Ok(FiberCount { with_multiplicity: n, distinct });
        }
    }
    Err(Error::EliminantDegenerate(SEPARATION_ATTEMPTS))
}

fn next_var(gens: &[Poly], ambient: &[Var]) -> Var {
    gens.iter().flat_map(|g| g.vars()).chain(ambient.iter().copied()).max().map_or(0, |v| v + 1)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Coordinate projections onto `n` coordinates, then `trials` random ones.
fn projections(ambient: &[Var], n: usize, trials: usize, seed: u64) -> Vec<Vec<Poly>> {
    let mut out: Vec<Vec<Poly>> = combinations(ambient.len(), n)
        .into_iter()
        .map(|c| c.into_iter().map(|i| Poly::var(ambient[i])).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        out.push((0..n).map(|_| random_linear_form(ambient, &mut rng)).collect());
    }
    out
}

/// Degree of `X -> Q^n` for the linear map `proj`, or `None` when it is not finite.
fn projection_degree(gens: &[Poly], ambient: &[Var], proj: &[Poly]) -> Result<Option<usize>> {
    let start = next_var(gens, ambient);
    let taus: Vec<Var> = (0..proj.len() as Var).map(|i| start + i).collect();
    let mut all = gens.to_vec();
    for (&tv, l) in taus.iter().zip(proj) {
        all.push(&Poly::var(tv) - l);
    }
    let base = BaseField::Fractions { vars: taus, ideal: Ideal::zero() };
    match quotient_algebra(&all, ambient, &base) {
        Ok(a) if a.is_integral() && a.dim() > 0 => Ok(Some(a.dim())),
        Ok(_) | Err(Error::NotFinite) | Err(Error::SpecializationUnstable) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Least covering degree over coordinate and random linear projections of
/// the pure `n`-dimensional variety cut out by `gens` in the `ambient` space.
pub fn generic_projection_degree(gens: &[Poly], ambient: &[Var], n: usize, trials: usize, seed: u64) -> Result<usize> {
    let projs = projections(ambient, n, trials, seed);
    let count = projs.len();
    let mut best: Option<usize> = None;
    for p in projs {
        if let Some(d) = projection_degree(gens, ambient, &p)? {
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best.ok_or(Error::AllProjectionsDegenerate(count))
}

/// Largest power of the maximal ideal tried before a projection is declared non-finite at a point.
const LOCAL_POWER_CAP: u32 = 64;

/// Local degree at `point` of the linear projection `proj` restricted to the
/// variety of `gens`: the length of the fiber through `point`, localized there.
/// `None` when the projection is not finite near the point.
pub fn local_degree(gens: &[Poly], ambient: &[Var], point: &[Q], proj: &[Poly]) -> Result<Option<usize>> {
    if point.len() != ambient.len() {
        return Err(Error::DimensionMismatch("point and ambient dimensions differ".into()));
    }
    let shift: HashMap<Var, Poly> =
        ambient.iter().zip(point).map(|(&v, c)| (v, &Poly::var(v) + &Poly::constant(c.clone()))).collect();
    let mut local: Vec<Poly> = gens.iter().map(|g| g.substitute(&shift)).collect();
    local.extend(proj.iter().cloned());
    let reduced = Ideal::grevlex(local)?;
    let mut prev: Option<usize> = None;
    for n in 1..=LOCAL_POWER_CAP {
        let mut g = reduced.basis().to_vec();
        g.extend(Monomial::all_of_degree(ambient, n).into_iter().map(|m| Poly::monomial(m)));
        let d = quotient_algebra(&g, ambient, &BaseField::Rationals)?.dim();
        if prev == Some(d) {
            return Ok(Some(d));
        }
        prev = Some(d);
    }
    Ok(None)
}

/// A weighted component given by its ideal.
#[derive(Clone, Debug)]
pub struct WeightedComponent {
    pub weight: u32,
    pub gens: Vec<Poly>,
}

/// `sum_i n_i * min over projections of the local degree of z on component i`.
pub fn multiplicity_of_point(
    z: &[Q],
    comps: &[WeightedComponent],
    ambient: &[Var],
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<usize> {
    let projs = projections(ambient, n, trials, seed);
    let mut total = 0;
    for c in comps {
        let mut best: Option<usize> = None;
        for p in &projs {
            if let Some(d) = local_degree(&c.gens, ambient, z, p)? {
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        let m = best.ok_or(Error::AllProjectionsDegenerate(projs.len()))?;
        total += c.weight as usize * m;
    }
    Ok(total)
}
