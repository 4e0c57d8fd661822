//! Parallelisms of affine unitals: spreads and their exact covers.

use std::cell::OnceCell;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::exact_cover::ExactCover;
use super::{affine_order, DesignError, IncidenceStructure};
use crate::perm::Permutation;

/// Upper bound on the number of spreads kept in memory.
pub const SPREAD_CAP: usize = 5_000_000;

/// A partition of short-block positions into parallel classes, stored with
/// each class sorted and the classes sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Parallelism {
    classes: Vec<Vec<usize>>,
}

impl Parallelism {
    pub fn new(mut classes: Vec<Vec<usize>>) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort();
        Parallelism { classes }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Class index of each short-block position.
    pub fn class_map(&self, num_short: usize) -> Vec<usize> {
        let mut map = vec![usize::MAX; num_short];
        for (i, c) in self.classes.iter().enumerate() {
            for &b in c {
                map[b] = i;
            }
        }
        map
    }

    pub fn validate(&self, u: &IncidenceStructure) -> Result<(), DesignError> {
        let bad = |m: String| Err(DesignError::InvalidParallelism(m));
        let Some(n) = affine_order(u.num_points()) else {
            return bad("point count is not n^3 - n".into());
        };
        if self.classes.len() != n + 1 {
            return bad(format!("{} classes, expected {}", self.classes.len(), n + 1));
        }
        let mut used = vec![false; u.num_short()];
        for c in &self.classes {
            if c.len() != n * n - 1 {
                return bad(format!("class of size {}, expected {}", c.len(), n * n - 1));
            }
            let mut covered = vec![false; u.num_points()];
            for &b in c {
                if b >= used.len() || used[b] {
                    return bad(format!("short block {b} missing or used twice"));
                }
                used[b] = true;
                for &p in u.short_block(b) {
                    if covered[p] {
                        return bad(format!("blocks in a class meet at point {p}"));
                    }
                    covered[p] = true;
                }
            }
        }
        if let Some(b) = used.iter().position(|&x| !x) {
            return bad(format!("short block {b} is in no class"));
        }
        Ok(())
    }

    /// Image under a permutation of short-block positions.
    pub fn permuted(&self, short_perm: &[usize]) -> Parallelism {
        Parallelism::new(self.classes.iter().map(|c| c.iter().map(|&b| short_perm[b]).collect()).collect())
    }
}

/// How a point permutation moves short-block positions, if it maps short
/// blocks onto short blocks.
pub fn short_permutation(u: &IncidenceStructure, g: &Permutation) -> Option<Vec<usize>> {
    let mut pos_of = std::collections::HashMap::new();
    for pos in 0..u.num_short() {
        pos_of.insert(u.short_block(pos).to_vec(), pos);
    }
    (0..u.num_short()).map(|pos| pos_of.get(&g.map_set(u.short_block(pos))).copied()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub parallelisms: Vec<Parallelism>,
    pub exhaustive: bool,
}

/// Spread enumeration for one structure, memoized.
pub struct SpreadSearch<'a> {
    u: &'a IncidenceStructure,
    spreads: OnceCell<Vec<Vec<usize>>>,
}

impl<'a> SpreadSearch<'a> {
    pub fn new(u: &'a IncidenceStructure) -> Self {
        SpreadSearch { u, spreads: OnceCell::new() }
    }

    fn cover_problem(&self) -> ExactCover {
        let mut ec = ExactCover::new(self.u.num_points());
        for pos in 0..self.u.num_short() {
            ec.add_option(self.u.short_block(pos));
        }
        ec
    }

    /// All sets of pairwise disjoint short blocks covering every point.
    pub fn spreads(&self) -> Result<&[Vec<usize>], DesignError> {
        if let Some(s) = self.spreads.get() {
            return Ok(s);
        }
        let found = self.cover_problem().solutions(Some(SPREAD_CAP));
        if !found.exhaustive {
            return Err(DesignError::CapExceeded(SPREAD_CAP));
        }
        Ok(self.spreads.get_or_init(|| found.solutions))
    }

    /// Parallelisms as exact covers of the short blocks by spreads, sorted.
    pub fn enumerate(&self, cap: Option<usize>) -> Result<Enumeration, DesignError> {
        let spreads = self.spreads()?;
        let mut ec = ExactCover::new(self.u.num_short());
        for s in spreads {
            ec.add_option(s);
        }
        let found = ec.solutions(cap);
        let mut parallelisms: Vec<Parallelism> = found
            .solutions
            .iter()
            .map(|sol| Parallelism::new(sol.iter().map(|&i| spreads[i].clone()).collect()))
            .collect();
        parallelisms.sort();
        Ok(Enumeration { parallelisms, exhaustive: found.exhaustive })
    }

    /// One parallelism, built class by class without listing all spreads.
    pub fn first(&self) -> Option<Parallelism> {
        let mut used = vec![false; self.u.num_short()];
        let mut classes = Vec::new();
        self.extend(&mut used, &mut classes).then(|| Parallelism::new(classes))
    }

    fn extend(&self, used: &mut Vec<bool>, classes: &mut Vec<Vec<usize>>) -> bool {
        let Some(b) = used.iter().position(|&x| !x) else {
            return true;
        };
        let positions: Vec<usize> = (b..used.len()).filter(|&p| !used[p]).collect();
        let mut ec = ExactCover::new(self.u.num_points());
        for &p in &positions {
            ec.add_option(self.u.short_block(p));
        }
        let finished = ec.solve_with(&[0], |sol| {
            let class: Vec<usize> = sol.iter().map(|&i| positions[i]).collect();
            for &p in &class {
                used[p] = true;
            }
            classes.push(class);
            if self.extend(used, classes) {
                return ControlFlow::Break(());
            }
            for &p in &classes.pop().unwrap() {
                used[p] = false;
            }
            ControlFlow::Continue(())
        });
        !finished
    }
}

/// Checks the short blocks have size `n` and counts match before searching.
fn short_shape_ok(u: &IncidenceStructure, n: usize) -> bool {
    u.num_short() == (n + 1) * (n * n - 1) && (0..u.num_short()).all(|p| u.short_block(p).len() == n)
}

pub fn find_parallelism(u: &IncidenceStructure, n: usize) -> Result<Option<Parallelism>, DesignError> {
    if !short_shape_ok(u, n) {
        return Ok(None);
    }
    Ok(SpreadSearch::new(u).first())
}

pub fn enumerate_parallelisms(u: &IncidenceStructure, cap: Option<usize>) -> Result<Enumeration, DesignError> {
    match affine_order(u.num_points()) {
        Some(n) if short_shape_ok(u, n) => SpreadSearch::new(u).enumerate(cap),
        _ => Ok(Enumeration { parallelisms: Vec::new(), exhaustive: true }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::construction::{build_affine_unital, flat_parallelism, natural_parallelism, BlockCollection};
    use crate::sl2::Sl2;

    fn q2_unital() -> (Sl2, IncidenceStructure) {
        let g = Sl2::of_order(2).unwrap();
        let c = g.cyclic_subgroup_c();
        let u = build_affine_unital(&g, &c, &BlockCollection::default()).unwrap();
        (g, u)
    }

    /// Every partition of the short blocks into classes of disjoint blocks,
    /// by trying all class assignments.
    fn brute_force_parallelisms(u: &IncidenceStructure, n: usize) -> Vec<Parallelism> {
        let m = u.num_short();
        let mut out = std::collections::BTreeSet::new();
        let mut assign = vec![0usize; m];
        loop {
            let mut classes = vec![Vec::new(); n + 1];
            for (b, &c) in assign.iter().enumerate() {
                classes[c].push(b);
            }
            let p = Parallelism::new(classes);
            if p.validate(u).is_ok() {
                out.insert(p);
            }
            let mut i = 0;
            while i < m {
                assign[i] += 1;
                if assign[i] <= n {
                    break;
                }
                assign[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn q2_enumeration_matches_brute_force() {
        let (g, u) = q2_unital();
        let all = enumerate_parallelisms(&u, None).unwrap();
        assert!(all.exhaustive);
        assert_eq!(all.parallelisms, brute_force_parallelisms(&u, 2));
        assert!(all.parallelisms.contains(&flat_parallelism(&g)));
        assert!(all.parallelisms.contains(&natural_parallelism(&g)));
        let first = find_parallelism(&u, 2).unwrap().unwrap();
        first.validate(&u).unwrap();
    }

    #[test]
    fn validation_errors() {
        let (g, u) = q2_unital();
        let flat = flat_parallelism(&g);
        flat.validate(&u).unwrap();
        let mut classes = flat.classes().to_vec();
        let moved = classes[0].pop().unwrap();
        classes[1].push(moved);
        assert!(Parallelism::new(classes).validate(&u).is_err());
        assert!(Parallelism::new(flat.classes()[..2].to_vec()).validate(&u).is_err());
    }

    #[test]
    fn capped_enumeration_is_flagged() {
        let (_, u) = q2_unital();
        let total = enumerate_parallelisms(&u, None).unwrap().parallelisms.len();
        assert!(total >= 2);
        let capped = enumerate_parallelisms(&u, Some(1)).unwrap();
        assert_eq!(capped.parallelisms.len(), 1);
        assert!(!capped.exhaustive);
    }
}
