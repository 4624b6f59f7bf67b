use super::groebner::groebner;
use super::monomial::Var;
use super::order::MonomialOrder;
use super::polynomial::Poly;

/// Multivariate gcd through the lcm `<t*a, (1-t)*b> ∩ Q[x]`.
/// Returns `None` when either input is zero or the basis computation fails.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    if a.is_constant() || b.is_constant() {
        return Some(Poly::one());
    }
    let vars: std::collections::BTreeSet<Var> = a.vars().union(&b.vars()).copied().collect();
    if vars.len() == 1 {
        let v = *vars.iter().next().unwrap();
        return Some(super::univariate::gcd(a, b, v));
    }
    let t = vars.iter().max().unwrap() + 1;
    let tp = Poly::var(t);
    let one_minus_t = &Poly::one() - &tp;
    let gens = vec![&tp * a, &one_minus_t * b];
    let basis = groebner(&gens, &MonomialOrder::block(vec![vec![t]])).ok()?;
    let lcm = basis.into_iter().filter(|g| g.degree_in_var(t) == 0).min_by_key(|g| g.total_degree())?;
    let g = (a * b).div_exact(&lcm)?;
    Some(g.primitive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, VarTable};

    #[test]
    fn bivariate_gcd() {
        let t = VarTable::from_names(&["x", "y"]).unwrap();
        let p = |s: &str| parse_poly(s, &t).unwrap();
        let g = poly_gcd(&p("(x + y)^2*(x - 2)"), &p("(x + y)*(y + 3)")).unwrap();
        assert_eq!(g, p("x + y"));
        assert_eq!(poly_gcd(&p("x"), &p("y")).unwrap(), Poly::one());
    }
}
