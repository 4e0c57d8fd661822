//! Backtracking search for block collections 𝒟 satisfying (Q) and (P).

use super::construction::BlockCollection;
use super::DesignError;
use crate::sl2::{Sl2, Sl2Error, Subgroup};

pub const DEFAULT_SEARCH_BOUND: usize = 5;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub max_q: usize,
    /// Stop after this many collections.
    pub limit: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_q: DEFAULT_SEARCH_BOUND, limit: None }
    }
}

struct Search<'a> {
    sl2: &'a Sl2,
    q: usize,
    covered: Vec<bool>,
    current: Vec<Vec<usize>>,
    out: Vec<BlockCollection>,
    limit: Option<usize>,
}

/// Every collection 𝒟 whose quotient sets tile the leftover set
/// L = SL(2,q) ∖ ({1} ∪ S ∪ Sylows). Each D contains the smallest element
/// of L not yet covered, so every collection is produced once.
pub fn search_block_collections(sl2: &Sl2, s: &Subgroup, opts: SearchOptions) -> Result<Vec<BlockCollection>, DesignError> {
    let q = sl2.q();
    if q > opts.max_q {
        return Err(DesignError::SearchBound { q, bound: opts.max_q });
    }
    if s.order() != q + 1 {
        return Err(Sl2Error::WrongOrder { expected: q + 1, found: s.order() }.into());
    }
    let mut covered = vec![false; sl2.order()];
    covered[sl2.identity()] = true;
    for &x in &s.elements {
        covered[x] = true;
    }
    for t in sl2.sylow_subgroups() {
        for &x in &t.elements {
            if covered[x] && x != sl2.identity() {
                // S meets a Sylow subgroup, so (P) cannot hold
                return Ok(Vec::new());
            }
            covered[x] = true;
        }
    }
    let mut search = Search { sl2, q, covered, current: Vec::new(), out: Vec::new(), limit: opts.limit };
    search.run();
    Ok(search.out)
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.out.len() >= l)
    }

    fn run(&mut self) {
        let Some(l) = self.covered.iter().position(|&c| !c) else {
            self.out.push(BlockCollection::new(self.current.clone()));
            return;
        };
        let li = self.sl2.inv(l);
        if li == l || self.covered[li] {
            return;
        }
        let one = self.sl2.identity();
        self.covered[l] = true;
        self.covered[li] = true;
        let mut d = vec![one, l];
        let cands = self.candidates(&d, l + 1..self.sl2.order());
        self.grow(&mut d, cands);
        self.covered[l] = false;
        self.covered[li] = false;
    }

    fn candidates(&self, d: &[usize], from: impl Iterator<Item = usize>) -> Vec<usize> {
        from.filter(|&x| !self.covered[x] && self.new_quotients(d, x).is_some()).collect()
    }

    /// Completes `d` to q+1 members from `cands`, every one of which is
    /// compatible with the current `d`.
    fn grow(&mut self, d: &mut Vec<usize>, cands: Vec<usize>) {
        if self.done() {
            return;
        }
        if d.len() == self.q + 1 {
            self.current.push(d.clone());
            self.run();
            self.current.pop();
            return;
        }
        let need = self.q + 1 - d.len();
        for (i, &x) in cands.iter().enumerate() {
            if cands.len() - i < need || self.done() {
                return;
            }
            let new = self.new_quotients(d, x).expect("candidates are compatible");
            for &z in &new {
                self.covered[z] = true;
            }
            d.push(x);
            let next = if need > 1 { self.candidates(d, cands[i + 1..].iter().copied()) } else { Vec::new() };
            self.grow(d, next);
            d.pop();
            for &z in &new {
                self.covered[z] = false;
            }
        }
    }

    /// The quotients x d⁻¹ and d x⁻¹ for d ∈ D, if all are uncovered and
    /// pairwise distinct.
    fn new_quotients(&self, d: &[usize], x: usize) -> Option<Vec<usize>> {
        let mut new = Vec::with_capacity(2 * d.len());
        for &y in d {
            for z in [self.sl2.quotient(x, y), self.sl2.quotient(y, x)] {
                if self.covered[z] || new.contains(&z) {
                    return None;
                }
                new.push(z);
            }
        }
        Some(new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::construction::{check_condition_p, check_condition_q};

    #[test]
    fn q2_has_only_the_empty_collection() {
        let g = Sl2::of_order(2).unwrap();
        let found = search_block_collections(&g, &g.cyclic_subgroup_c(), SearchOptions::default()).unwrap();
        assert_eq!(found, vec![BlockCollection::default()]);
    }

    #[test]
    fn q3_collections_satisfy_conditions() {
        let g = Sl2::of_order(3).unwrap();
        let c = g.cyclic_subgroup_c();
        let found = search_block_collections(&g, &c, SearchOptions::default()).unwrap();
        assert!(!found.is_empty());
        for coll in &found {
            assert_eq!(coll.len(), 1);
            for d in &coll.sets {
                let r = check_condition_q(&g, d).unwrap();
                assert!(r.holds);
                assert_eq!(r.quotients, 12);
            }
            assert!(check_condition_p(&g, &c, coll).unwrap().holds);
        }
    }

    #[test]
    fn search_bound() {
        let g = Sl2::of_order(7).unwrap();
        let s = g.cyclic_subgroup_c();
        assert!(matches!(
            search_block_collections(&g, &s, SearchOptions::default()),
            Err(DesignError::SearchBound { q: 7, bound: 5 })
        ));
    }
}
