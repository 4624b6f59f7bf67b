use std::cmp::Ordering;

use super::monomial::{Monomial, Var};

/// Monomial orders. Within any block, variables with smaller ids rank higher.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    GrevLex,
    Lex,
    /// Elimination order: earlier blocks dominate, grevlex inside each block.
    /// Variables not listed fall into an implicit last block.
    Block(Vec<Vec<Var>>),
}

impl MonomialOrder {
    pub fn block(blocks: Vec<Vec<Var>>) -> Self {
        MonomialOrder::Block(blocks)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex(a.pairs(), b.pairs()),
            MonomialOrder::Lex => lex(a.pairs(), b.pairs()),
            MonomialOrder::Block(blocks) => {
                for blk in blocks {
                    let pa: Vec<(Var, u32)> = a.pairs().iter().copied().filter(|(x, _)| blk.contains(x)).collect();
                    let pb: Vec<(Var, u32)> = b.pairs().iter().copied().filter(|(x, _)| blk.contains(x)).collect();
                    match grevlex(&pa, &pb) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                let rest = |m: &Monomial| -> Vec<(Var, u32)> {
                    m.pairs().iter().copied().filter(|(x, _)| !blocks.iter().any(|b| b.contains(x))).collect()
                };
                grevlex(&rest(a), &rest(b))
            }
        }
    }

    /// Variables of the leading block, if this is a block order.
    pub fn first_block(&self) -> Option<&[Var]> {
        match self {
            MonomialOrder::Block(b) => b.first().map(|v| v.as_slice()),
            _ => None,
        }
    }
}

fn grevlex(a: &[(Var, u32)], b: &[(Var, u32)]) -> Ordering {
    let da: u32 = a.iter().map(|p| p.1).sum();
    let db: u32 = b.iter().map(|p| p.1).sum();
    if da != db {
        return da.cmp(&db);
    }
    let (mut i, mut j) = (a.len(), b.len());
    loop {
        match (i.checked_sub(1).map(|k| a[k]), j.checked_sub(1).map(|k| b[k])) {
            (Some((x, e)), Some((y, f))) => {
                if x == y {
                    if e != f {
                        return f.cmp(&e);
                    }
                    i -= 1;
                    j -= 1;
                } else if x > y {
                    return Ordering::Less;
                } else {
                    return Ordering::Greater;
                }
            }
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (None, None) => return Ordering::Equal,
        }
    }
}

fn lex(a: &[(Var, u32)], b: &[(Var, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (Some(&(x, e)), Some(&(y, f))) => {
                if x == y {
                    if e != f {
                        return e.cmp(&f);
                    }
                    i += 1;
                    j += 1;
                } else if x < y {
                    return Ordering::Greater;
                } else {
                    return Ordering::Less;
                }
            }
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (None, None) => return Ordering::Equal,
        }
    }
}
