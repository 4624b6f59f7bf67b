//! Čech–Leray cocycles of complete intersections and traces computed as
//! Grothendieck residues.
//!
//! Residues are algebraic: a regular sequence `f` is traded for univariate
//! eliminants `E_i(z_i) = sum_j A_ij f_j` and then
//! `Res_f[h] = Res_E[h det A]`, which separates into univariate pieces.
//! No `(2 pi i)^p` factor appears, so `Res[dz / z] = 1`.

use std::collections::HashMap;

use crate::covering::ImplicitCovering;
use crate::error::{Error, Result};
use crate::poly::{groebner_with_cofactors, BaseField, Monomial, MonomialOrder, Poly, RationalFunction, Var, Q};
use crate::traceforms::RelativeForm;

/// `df_1 ^ ... ^ df_p / (f_1 ... f_p)`, differentials taken along the fiber.
#[derive(Clone, Debug)]
pub struct CechCocycle {
    pub numerator: RelativeForm,
    pub denominators: Vec<Poly>,
}

pub fn cech_leray(f: &[Poly], fiber: &[Var]) -> Result<CechCocycle> {
    if f.is_empty() {
        return Err(Error::Invalid("a cocycle needs at least one function".into()));
    }
    let numerator = f.iter().fold(RelativeForm::from_poly(Poly::one()), |acc, g| {
        acc.wedge(&RelativeForm::from_poly(g.clone()).d_relative(fiber))
    });
    Ok(CechCocycle { numerator, denominators: f.to_vec() })
}

/// `Res[h dz / (f_1 ... f_p)]` in the fiber variables, coefficients living in `base`.
#[derive(Clone, Debug)]
pub struct ResidueProblem {
    pub h: Poly,
    pub denominators: Vec<Poly>,
    pub fiber: Vec<Var>,
    pub base: BaseField,
}

/// Univariate eliminants `E_i(z_i)` together with `E = A f`.
#[derive(Clone, Debug)]
pub struct Lift {
    pub eliminants: Vec<Poly>,
    pub matrix: Vec<Vec<Poly>>,
}

impl Lift {
    pub fn holds(&self, f: &[Poly]) -> bool {
        self.eliminants.iter().zip(&self.matrix).all(|(e, row)| {
            let s = row.iter().zip(f).fold(Poly::zero(), |acc, (a, g)| &acc + &(a * g));
            &s == e
        })
    }
}

pub fn determinant(m: &[Vec<Poly>]) -> Poly {
    match m.len() {
        0 => Poly::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect())
                    .collect();
                let t = &m[0][c] * &determinant(&minor);
                acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

/// `None` when `f` generates the unit ideal.
fn eliminant_lift(f: &[Poly], fiber: &[Var]) -> Result<Option<Lift>> {
    let mut eliminants = Vec::new();
    let mut matrix = Vec::new();
    for &z in fiber {
        let others: Vec<Var> = fiber.iter().copied().filter(|&v| v != z).collect();
        let order = MonomialOrder::block(vec![others.clone(), vec![z]]);
        let comp = groebner_with_cofactors(f, &order)?;
        let cof = comp.cofactors.expect("tracked completion");
        if comp.basis.iter().any(|g| g.is_constant()) {
            return Ok(None);
        }
        let best = comp
            .basis
            .iter()
            .zip(cof)
            .filter(|(g, _)| !g.involves_any(&others) && g.degree_in_var(z) > 0)
            .min_by_key(|(g, _)| g.degree_in_var(z))
            .ok_or(Error::NotZeroDimensional)?;
        eliminants.push(best.0.clone());
        matrix.push(best.1);
    }
    Ok(Some(Lift { eliminants, matrix }))
}

/// `Res[z^a dz / E]` for a univariate `E` in `z` with coefficients off `z`.
struct Univariate {
    /// `E / lc`, low degree first.
    monic: Vec<RationalFunction>,
    lc: RationalFunction,
    /// Remainder of `z^a` modulo `E`, indexed by `a`.
    powers: Vec<Vec<RationalFunction>>,
}

impl Univariate {
    fn new(e: &Poly, z: Var) -> Self {
        let cs = e.univariate_coeffs(z);
        let lc = RationalFunction::from_poly(cs.last().expect("nonconstant eliminant").clone());
        let inv = lc.recip();
        let monic: Vec<RationalFunction> = cs.iter().map(|c| &RationalFunction::from_poly(c.clone()) * &inv).collect();
        let m = monic.len() - 1;
        let mut start = vec![RationalFunction::zero(); m];
        if m > 0 {
            start[0] = RationalFunction::one();
        }
        Univariate { monic, lc, powers: vec![start] }
    }

    fn residue(&mut self, a: usize) -> RationalFunction {
        let m = self.monic.len() - 1;
        if m == 0 {
            return RationalFunction::zero();
        }
        while self.powers.len() <= a {
            let prev = self.powers.last().unwrap();
            let top = prev[m - 1].clone();
            let mut next = vec![RationalFunction::zero(); m];
            for i in 1..m {
                next[i] = prev[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, slot) in next.iter_mut().enumerate() {
                    *slot = &*slot - &(&top * &self.monic[i]);
                }
            }
            self.powers.push(next);
        }
        &self.powers[a][m - 1] * &self.lc.recip()
    }
}

fn residue_separated(g: &Poly, eliminants: &[Poly], fiber: &[Var]) -> RationalFunction {
    let mut unis: Vec<Univariate> = eliminants.iter().zip(fiber).map(|(e, &z)| Univariate::new(e, z)).collect();
    let mut cache: HashMap<(usize, u32), RationalFunction> = HashMap::new();
    let mut acc = RationalFunction::zero();
    for (m, c) in g.coefficients_in(fiber) {
        let mut r = RationalFunction::from_poly(c);
        for (i, &z) in fiber.iter().enumerate() {
            let a = m.exp(z);
            let v = cache.entry((i, a)).or_insert_with(|| unis[i].residue(a as usize)).clone();
            r = &r * &v;
            if r.is_zero() {
                break;
            }
        }
        acc = &acc + &r;
    }
    acc
}

/// Residue through a caller-supplied lift `E = A f`.
pub fn residue_with_lift(rp: &ResidueProblem, lift: &Lift) -> Result<RationalFunction> {
    if lift.eliminants.len() != rp.fiber.len() || lift.matrix.len() != rp.fiber.len() {
        return Err(Error::DimensionMismatch("one eliminant per fiber variable expected".into()));
    }
    if !lift.holds(&rp.denominators) {
        return Err(Error::LiftFailure("eliminants are not the stated combinations".into()));
    }
    for (e, &z) in lift.eliminants.iter().zip(&rp.fiber) {
        let others: Vec<Var> = rp.fiber.iter().copied().filter(|&v| v != z).collect();
        if e.involves_any(&others) || e.degree_in_var(z) == 0 {
            return Err(Error::LiftFailure("eliminant is not univariate in its fiber variable".into()));
        }
    }
    let g = &rp.h * &determinant(&lift.matrix);
    Ok(rp.base.simplify(&residue_separated(&g, &lift.eliminants, &rp.fiber)))
}

pub fn grothendieck_residue(rp: &ResidueProblem) -> Result<RationalFunction> {
    if rp.denominators.len() != rp.fiber.len() {
        return Err(Error::DimensionMismatch("need as many functions as fiber variables".into()));
    }
    match eliminant_lift(&rp.denominators, &rp.fiber)? {
        None => Ok(RationalFunction::zero()),
        Some(lift) => residue_with_lift(rp, &lift),
    }
}

pub fn jacobian(f: &[Poly], fiber: &[Var]) -> Poly {
    let m: Vec<Vec<Poly>> = f.iter().map(|g| fiber.iter().map(|&z| g.derivative(z)).collect()).collect();
    determinant(&m)
}

/// Trace of `h` as the residue of `h * Jac(f)` against the fundamental class.
pub fn trace_via_class(c: &ImplicitCovering, h: &Poly) -> Result<RationalFunction> {
    let scale = c.scale();
    if c.gens().len() != scale.fiber.len() {
        return Err(Error::DimensionMismatch("covering is not a complete intersection in its fiber".into()));
    }
    let rp = ResidueProblem {
        h: h * &jacobian(c.gens(), &scale.fiber),
        denominators: c.gens().to_vec(),
        fiber: scale.fiber.clone(),
        base: scale.base_field(),
    };
    let r = grothendieck_residue(&rp)?;
    Ok(r.scale(&Q::from_integer(c.weight().into())))
}

/// Residue of a monomial against pure powers, by coefficient extraction.
pub fn monomial_residue(h: &Poly, exponents: &[(Var, u32)]) -> Poly {
    let m = Monomial::from_pairs(exponents.iter().map(|&(v, a)| (v, a - 1)));
    let vars: Vec<Var> = exponents.iter().map(|p| p.0).collect();
    h.coefficients_in(&vars).remove(&m).unwrap_or_else(Poly::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::Scale;
    use crate::poly::{parse_poly, VarTable};

    fn problem(t: &VarTable, h: &str, f: &[&str], fiber: &[Var]) -> ResidueProblem {
        ResidueProblem {
            h: parse_poly(h, t).unwrap(),
            denominators: f.iter().map(|s| parse_poly(s, t).unwrap()).collect(),
            fiber: fiber.to_vec(),
            base: BaseField::Rationals,
        }
    }

    #[test]
    fn cocycles() {
        let t = VarTable::from_names(&["x", "y", "u", "v"]).unwrap();
        let p = |s: &str| parse_poly(s, &t).unwrap();
        let c = cech_leray(&[p("u^2 - x"), p("v^2 - y")], &[2, 3]).unwrap();
        assert_eq!(c.numerator, RelativeForm::term(RationalFunction::from_poly(p("4*u*v")), vec![2, 3]));
        let c = cech_leray(&[p("u^2 - x")], &[2]).unwrap();
        assert_eq!(c.numerator, RelativeForm::term(RationalFunction::from_poly(p("2*u")), vec![2]));
        assert!(cech_leray(&[], &[2]).is_err());
    }

    #[test]
    fn residues() {
        let t = VarTable::from_names(&["t", "z", "u", "v"]).unwrap();
        let r = |h: &str, f: &[&str], fib: &[Var]| grothendieck_residue(&problem(&t, h, f, fib)).unwrap();
        assert_eq!(r("3*z + 5", &["z^2"], &[1]), RationalFunction::constant(Q::from_integer(3.into())));
        assert_eq!(r("z", &["z^2 - t"], &[1]), RationalFunction::one());
        assert!(r("2*z^2 + 4", &["z^2 - t"], &[1]).is_zero());
        assert_eq!(r("u*v", &["u^2", "v^2"], &[2, 3]), RationalFunction::one());
        assert!(r("u*v", &["u^2 + 1", "3"], &[2, 3]).is_zero());
        let h = parse_poly("u^3*v + 7*u", &t).unwrap();
        assert_eq!(monomial_residue(&h, &[(2, 4), (3, 2)]), Poly::one());
    }

    #[test]
    fn residue_as_root_sum() {
        // sum over roots of h / f' for f = z^2 - t, h = z: both roots give 1/2
        let t = VarTable::from_names(&["t", "z"]).unwrap();
        let rp = problem(&t, "z", &["z^2 - t"], &[1]);
        let via_jac = ResidueProblem { h: &rp.h * &jacobian(&rp.denominators, &rp.fiber), ..rp.clone() };
        assert_eq!(grothendieck_residue(&via_jac).unwrap(), RationalFunction::zero());
        let one = problem(&t, "1", &["z^2 - t"], &[1]);
        let via_jac = ResidueProblem { h: jacobian(&one.denominators, &one.fiber), ..one };
        assert_eq!(grothendieck_residue(&via_jac).unwrap(), RationalFunction::constant(Q::from_integer(2.into())));
    }

    #[test]
    fn lift_independence() {
        let t = VarTable::from_names(&["u", "v"]).unwrap();
        let p = |s: &str| parse_poly(s, &t).unwrap();
        let rp = problem(&t, "u*v + 2*u^3*v", &["u^2 - v", "v^2"], &[0, 1]);
        let auto = grothendieck_residue(&rp).unwrap();
        // u^4 = (u^2 + v) f1 + f2 and v^2 = f2
        let manual = Lift {
            eliminants: vec![p("u^4"), p("v^2")],
            matrix: vec![vec![p("u^2 + v"), p("1")], vec![p("0"), p("1")]],
        };
        assert_eq!(residue_with_lift(&rp, &manual).unwrap(), auto);
        let bad =
            Lift { eliminants: vec![p("u^4"), p("v^2")], matrix: vec![vec![p("1"), p("0")], vec![p("0"), p("1")]] };
        assert!(residue_with_lift(&rp, &bad).is_err());
    }

    #[test]
    fn cone_class_traces() {
        let t = VarTable::from_names(&["x", "y", "z", "u", "v"]).unwrap();
        let p = |s: &str| parse_poly(s, &t).unwrap();
        let scale = Scale::new(vec![0, 1, 2], vec![], vec![3, 4], vec![p("x*y - z^2")]).unwrap();
        let c = ImplicitCovering::new(scale, vec![p("u^2 - x"), p("x*v - z*u")]).unwrap();
        for (h, want) in [("1", "2"), ("u", "0"), ("v", "0"), ("u^2", "2*x"), ("v^2", "2*y"), ("u*v", "2*z")] {
            assert_eq!(trace_via_class(&c, &p(h)).unwrap(), RationalFunction::from_poly(p(want)), "{h}");
        }
    }
}
