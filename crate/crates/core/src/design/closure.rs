//! The π-closure of an affine unital.

use serde::Serialize;

use super::{affine_order, DesignError, IncidenceStructure, Parallelism};

/// A unital obtained by adding one point per parallel class and the block
/// [∞] through the new points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedUnital {
    structure: IncidenceStructure,
    affine_points: usize,
    infinity_block: usize,
    parallelism: Parallelism,
}

impl ClosedUnital {
    pub fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }

    pub fn parallelism(&self) -> &Parallelism {
        &self.parallelism
    }

    pub fn infinity_block(&self) -> usize {
        self.infinity_block
    }

    /// The new point added for class `i`.
    pub fn class_point(&self, i: usize) -> usize {
        self.affine_points + i
    }

    pub fn infinity_points(&self) -> std::ops::Range<usize> {
        self.affine_points..self.structure.num_points()
    }

    pub fn affine_points(&self) -> usize {
        self.affine_points
    }
}

/// Blocks keep their order in `u`; short blocks gain the point of their
/// class and [∞] comes last.
pub fn closure(u: &IncidenceStructure, pi: &Parallelism) -> Result<ClosedUnital, DesignError> {
    pi.validate(u)?;
    let v = u.num_points();
    let class = pi.class_map(u.num_short());
    let mut pos_of = vec![usize::MAX; u.num_blocks()];
    for (pos, &b) in u.short_block_indices().iter().enumerate() {
        pos_of[b] = pos;
    }
    let mut blocks: Vec<Vec<usize>> = (0..u.num_blocks())
        .map(|b| {
            let mut block = u.block(b).to_vec();
            if u.is_short(b) {
                block.push(v + class[pos_of[b]]);
            }
            block
        })
        .collect();
    let classes = pi.classes().len();
    blocks.push((v..v + classes).collect());
    let infinity_block = blocks.len() - 1;
    let structure = IncidenceStructure::plain(v + classes, blocks)?;
    Ok(ClosedUnital { structure, affine_points: v, infinity_block, parallelism: pi.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitalReport {
    pub order: Option<usize>,
    pub points_ok: bool,
    pub block_sizes_ok: bool,
    pub pairs_ok: bool,
    pub failures: Vec<String>,
}

impl UnitalReport {
    pub fn is_unital(&self) -> bool {
        self.points_ok && self.block_sizes_ok && self.pairs_ok
    }
}

/// Checks the 2-(n³+1, n+1, 1) design conditions by counting every pair.
pub fn verify_unital(u: &IncidenceStructure) -> UnitalReport {
    let v = u.num_points();
    let order = v.checked_sub(1).and_then(|w| (2..).take_while(|n| n * n * n <= w).find(|n| n * n * n == w));
    let mut r = UnitalReport { order, points_ok: order.is_some(), block_sizes_ok: false, pairs_ok: false, failures: vec![] };
    let Some(n) = order else {
        r.failures.push(format!("{v} is not of the form n^3 + 1"));
        return r;
    };
    match u.blocks().iter().position(|b| b.len() != n + 1) {
        Some(i) => r.failures.push(format!("block {i} has {} points", u.block(i).len())),
        None => r.block_sizes_ok = true,
    }
    let counts = u.pair_counts();
    match (0..v * v).find(|&k| k / v < k % v && counts[k] != 1) {
        Some(k) => r.failures.push(format!("points {} and {} share {} blocks", k / v, k % v, counts[k])),
        None => r.pairs_ok = true,
    }
    r
}

/// Order of the affine unital underlying a closure of `v` points.
pub fn closure_order(v: usize) -> Option<usize> {
    affine_order(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::construction::{build_affine_unital, flat_parallelism, natural_parallelism, BlockCollection};
    use crate::sl2::Sl2;

    #[test]
    fn q2_closures_are_unitals() {
        let g = Sl2::of_order(2).unwrap();
        let u = build_affine_unital(&g, &g.cyclic_subgroup_c(), &BlockCollection::default()).unwrap();
        for pi in [flat_parallelism(&g), natural_parallelism(&g)] {
            let c = closure(&u, &pi).unwrap();
            let s = c.structure();
            assert_eq!(s.num_points(), 9);
            assert_eq!(s.num_blocks(), 12);
            assert!(verify_unital(s).is_unital());
            assert_eq!(s.block(c.infinity_block()), &[6, 7, 8]);
            // each new point lies on [∞] and the n²−1 blocks of its class
            let through = s.point_blocks();
            for i in 0..3 {
                assert_eq!(through[c.class_point(i)].len(), 4);
            }
        }
    }

    #[test]
    fn broken_design_detected() {
        let s = IncidenceStructure::plain(9, vec![vec![0, 1, 2]]).unwrap();
        let r = verify_unital(&s);
        assert_eq!(r.order, Some(2));
        assert!(r.block_sizes_ok);
        assert!(!r.pairs_ok);
        assert!(!verify_unital(&IncidenceStructure::plain(10, vec![]).unwrap()).points_ok);
    }
}
