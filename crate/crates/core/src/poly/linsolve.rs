use std::collections::BTreeMap;

use num_traits::Zero;

use super::monomial::Monomial;
use super::Q;

type SparseVec = BTreeMap<Monomial, Q>;

#[derive(Clone, Debug)]
struct Row {
    pivot: Monomial,
    vec: SparseVec,
    comb: BTreeMap<usize, Q>,
}

/// Incremental sparse elimination over the rationals.
///
/// Unknowns are added one column at a time; [`LinearSystem::solve`] finds a
/// combination of the columns equal to a target, with dependent columns set
/// to zero. Earlier columns are preferred.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    rows: Vec<Row>,
    unknowns: usize,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a column; returns its index.
    pub fn push_column(&mut self, col: SparseVec) -> usize {
        let idx = self.unknowns;
        self.unknowns += 1;
        let mut comb = BTreeMap::new();
        comb.insert(idx, Q::from_integer(1.into()));
        let (vec, comb) = self.reduce(col, comb);
        if let Some((pivot, c)) = vec.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
            let inv = c.recip();
            let vec = vec.into_iter().map(|(k, v)| (k, v * &inv)).collect();
            let comb = comb.into_iter().map(|(k, v)| (k, v * &inv)).collect();
            self.rows.push(Row { pivot, vec, comb });
        }
        idx
    }

    fn reduce(&self, mut vec: SparseVec, mut comb: BTreeMap<usize, Q>) -> (SparseVec, BTreeMap<usize, Q>) {
        for row in &self.rows {
            let c = match vec.get(&row.pivot) {
                Some(c) => c.clone(),
                None => continue,
            };
            axpy(&mut vec, &-c.clone(), &row.vec);
            axpy(&mut comb, &-c, &row.comb);
        }
        (vec, comb)
    }

    /// Coefficients `x` with `sum x_i col_i = target`, or `None`.
    pub fn solve(&self, target: &SparseVec) -> Option<Vec<Q>> {
        let (rest, comb) = self.reduce(target.clone(), BTreeMap::new());
        if !rest.is_empty() {
            return None;
        }
        let mut x = vec![Q::zero(); self.unknowns];
        for (k, v) in comb {
            x[k] = -v;
        }
        Some(x)
    }
}

fn axpy<K: Ord + Clone>(y: &mut BTreeMap<K, Q>, a: &Q, x: &BTreeMap<K, Q>) {
    for (k, v) in x {
        let e = y.entry(k.clone()).or_insert_with(Q::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn v(items: &[(u32, i64)]) -> SparseVec {
        items.iter().map(|&(k, c)| (Monomial::var(k), q(c))).collect()
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let mut s = LinearSystem::new();
        s.push_column(v(&[(0, 1), (1, 1)]));
        s.push_column(v(&[(1, 1), (2, 1)]));
        s.push_column(v(&[(0, 1), (2, -1)])); // dependent
        let x = s.solve(&v(&[(0, 2), (1, 5), (2, 3)])).unwrap();
        assert_eq!(x, vec![q(2), q(3), q(0)]);
        assert!(s.solve(&v(&[(0, 1)])).is_none());
        assert_eq!(s.rank(), 2);
    }
}
