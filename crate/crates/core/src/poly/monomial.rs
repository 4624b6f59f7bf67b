use std::fmt;

/// Variable identifier. Names live in a [`super::VarTable`].
pub type Var = u32;

/// Sparse exponent vector: `(var, exp)` pairs sorted by variable, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs; repeated variables add up.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(Var, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable_by_key(|&(x, _)| x);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(v.len());
        for (x, e) in v {
            match out.last_mut() {
                Some((y, f)) if *y == x => *f += e,
                _ => out.push((x, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        match self.0.binary_search_by_key(&v, |&(x, _)| x) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn degree_in(&self, vars: &[Var]) -> u32 {
        self.0.iter().filter(|(x, _)| vars.contains(x)).map(|&(_, e)| e).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(x, _)| x)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(x, f)| (x, f * e)).collect())
    }

    /// True if `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        let b = &other.0;
        let mut j = 0;
        for &(x, e) in &self.0 {
            while j < b.len() && b[j].0 < x {
                j += 1;
            }
            if j == b.len() || b[j].0 != x || b[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut out = Vec::with_capacity(other.0.len());
        for &(x, e) in &other.0 {
            let f = e - self.exp(x);
            if f > 0 {
                out.push((x, f));
            }
        }
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1.max(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|&(x, e)| {
                    let f = other.exp(x).min(e);
                    (f > 0).then_some((x, f))
                })
                .collect(),
        )
    }

    /// Coprime monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(x, _)| other.exp(x) == 0)
    }

    /// Splits into the part supported on `vars` and the rest.
    pub fn split(&self, vars: &[Var]) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|(x, _)| vars.contains(x));
        (Monomial(a), Monomial(b))
    }

    pub fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(x, _)| x != v).collect())
    }

    /// Renames variables through `map`; unmapped variables are kept.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(x, e)| (map(x), e)))
    }

    /// All monomials of total degree exactly `d` in `vars`.
    pub fn all_of_degree(vars: &[Var], d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(vars: &[Var], d: u32, cur: &mut Vec<(Var, u32)>, out: &mut Vec<Monomial>) {
            if vars.is_empty() {
                if d == 0 {
                    out.push(Monomial::from_pairs(cur.iter().copied()));
                }
                return;
            }
            if vars.len() == 1 {
                cur.push((vars[0], d));
                out.push(Monomial::from_pairs(cur.iter().copied()));
                cur.pop();
                return;
            }
            for e in (0..=d).rev() {
                cur.push((vars[0], e));
                rec(&vars[1..], d - e, cur, out);
                cur.pop();
            }
        }
        rec(vars, d, &mut cur, &mut out);
        out
    }

    /// All monomials of total degree at most `d` in `vars`, by increasing degree.
    pub fn all_up_to_degree(vars: &[Var], d: u32) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Monomial::all_of_degree(vars, k)).collect()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|&(x, e)| if e == 1 { format!("v{x}") } else { format!("v{x}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}
