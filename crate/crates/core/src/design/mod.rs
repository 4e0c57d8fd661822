//! Incidence structures, the affine SL(2,q) construction and its closures.

pub mod closure;
pub mod construction;
pub mod exact_cover;
pub mod fixture;
pub mod parallelism;
pub mod search;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;
use crate::sl2::Sl2Error;

pub use closure::{closure, verify_unital, ClosedUnital, UnitalReport};
pub use construction::{
    build_affine_unital, check_condition_p, check_condition_q, flat_parallelism, natural_parallelism,
    short_block_geometry, short_blocks, BlockCollection, ConditionP, ConditionQ,
};
pub use parallelism::{enumerate_parallelisms, find_parallelism, Enumeration, Parallelism, SpreadSearch};
pub use search::{search_block_collections, SearchOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("point {point} out of range for {num_points} points")]
    PointOutOfRange { point: usize, num_points: usize },
    #[error("block {0} repeats a point")]
    RepeatedPoint(usize),
    #[error("block {0} occurs twice")]
    DuplicateBlock(usize),
    #[error("short block index {0} out of range")]
    BadShortIndex(usize),
    #[error("malformed block set: {0}")]
    MalformedSet(String),
    #[error("condition (Q) fails for set {index}")]
    ConditionQ { index: usize },
    #[error("condition (P) fails: {overlaps} overlaps, {gaps} gaps")]
    ConditionP { overlaps: usize, gaps: usize },
    #[error("invalid parallelism: {0}")]
    InvalidParallelism(String),
    #[error("q = {q} exceeds the search bound {bound}")]
    SearchBound { q: usize, bound: usize },
    #[error("cap of {0} exceeded")]
    CapExceeded(usize),
    #[error(transparent)]
    Group(#[from] Sl2Error),
}

/// Points `0..num_points` and blocks as sorted point lists. Blocks listed in
/// `short` are the short blocks of an affine structure, in short-block order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    num_points: usize,
    blocks: Vec<Vec<usize>>,
    short: Vec<usize>,
    is_short: Vec<bool>,
}

impl IncidenceStructure {
    pub fn new(num_points: usize, blocks: Vec<Vec<usize>>, short: Vec<usize>) -> Result<Self, DesignError> {
        let mut sorted = Vec::with_capacity(blocks.len());
        let mut seen = HashMap::new();
        for (i, mut b) in blocks.into_iter().enumerate() {
            b.sort_unstable();
            if let Some(&p) = b.iter().find(|&&p| p >= num_points) {
                return Err(DesignError::PointOutOfRange { point: p, num_points });
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(DesignError::RepeatedPoint(i));
            }
            if seen.insert(b.clone(), i).is_some() {
                return Err(DesignError::DuplicateBlock(i));
            }
            sorted.push(b);
        }
        let mut is_short = vec![false; sorted.len()];
        for &s in &short {
            if s >= sorted.len() || is_short[s] {
                return Err(DesignError::BadShortIndex(s));
            }
            is_short[s] = true;
        }
        Ok(IncidenceStructure { num_points, blocks: sorted, short, is_short })
    }

    /// Long blocks first, then short blocks.
    pub fn affine(num_points: usize, long: Vec<Vec<usize>>, short: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        let offset = long.len();
        let short_idx = (offset..offset + short.len()).collect();
        let mut blocks = long;
        blocks.extend(short);
        Self::new(num_points, blocks, short_idx)
    }

    pub fn plain(num_points: usize, blocks: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        Self::new(num_points, blocks, Vec::new())
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// Block indices of the short blocks, in short-block order.
    pub fn short_block_indices(&self) -> &[usize] {
        &self.short
    }

    pub fn is_short(&self, block: usize) -> bool {
        self.is_short[block]
    }

    pub fn short_block(&self, pos: usize) -> &[usize] {
        &self.blocks[self.short[pos]]
    }

    pub fn num_short(&self) -> usize {
        self.short.len()
    }

    pub fn long_block_indices(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&i| !self.is_short[i]).collect()
    }

    /// For each point, the indices of the blocks through it.
    pub fn point_blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_points];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                out[p].push(i);
            }
        }
        out
    }

    pub fn block_index(&self) -> HashMap<Vec<usize>, usize> {
        self.blocks.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect()
    }

    /// The block permutation induced by a point permutation, if `g` maps
    /// blocks to blocks and short blocks to short blocks.
    pub fn induced_block_permutation(&self, g: &Permutation) -> Option<Vec<usize>> {
        if g.degree() != self.num_points {
            return None;
        }
        let index = self.block_index();
        let mut out = Vec::with_capacity(self.blocks.len());
        for (i, b) in self.blocks.iter().enumerate() {
            let j = *index.get(&g.map_set(b))?;
            if self.is_short[i] != self.is_short[j] {
                return None;
            }
            out.push(j);
        }
        Some(out)
    }

    pub fn is_automorphism(&self, g: &Permutation) -> bool {
        self.induced_block_permutation(g).is_some()
    }

    /// Image structure with point `p` renamed `g(p)`; block order is kept.
    pub fn relabel(&self, g: &Permutation) -> IncidenceStructure {
        let blocks = self.blocks.iter().map(|b| g.map_set(b)).collect();
        IncidenceStructure { num_points: self.num_points, blocks, short: self.short.clone(), is_short: self.is_short.clone() }
    }

    /// Same block set in sorted order (short blocks after long ones).
    pub fn canonical_order(&self) -> IncidenceStructure {
        let mut long: Vec<_> = self.long_block_indices().into_iter().map(|i| self.blocks[i].clone()).collect();
        let mut short: Vec<_> = self.short.iter().map(|&i| self.blocks[i].clone()).collect();
        long.sort();
        short.sort();
        IncidenceStructure::affine(self.num_points, long, short).expect("already valid")
    }

    /// Same structure with one block removed.
    pub fn without_block(&self, block: usize) -> IncidenceStructure {
        let blocks: Vec<_> = self.blocks.iter().enumerate().filter(|&(i, _)| i != block).map(|(_, b)| b.clone()).collect();
        let short = self.short.iter().filter(|&&s| s != block).map(|&s| if s > block { s - 1 } else { s }).collect();
        IncidenceStructure::new(self.num_points, blocks, short).expect("subset of a valid structure")
    }

    /// Number of blocks through each pair, as a dense `v × v` table.
    pub fn pair_counts(&self) -> Vec<u16> {
        let v = self.num_points;
        let mut counts = vec![0u16; v * v];
        for b in &self.blocks {
            for (i, &x) in b.iter().enumerate() {
                for &y in &b[i + 1..] {
                    counts[x * v + y] += 1;
                    counts[y * v + x] += 1;
                }
            }
        }
        counts
    }

    pub fn to_file(&self, q: usize) -> StructureFile {
        let long = self.long_block_indices().into_iter().map(|i| self.blocks[i].clone()).collect();
        let short = self.short.iter().map(|&i| self.blocks[i].clone()).collect();
        StructureFile { q, num_points: self.num_points, long_blocks: long, short_blocks: short, infinity_block: None }
    }
}

/// JSON form of a structure. Closed unitals carry every block in
/// `long_blocks` and may name the block `[∞]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    pub q: usize,
    pub num_points: usize,
    pub long_blocks: Vec<Vec<usize>>,
    pub short_blocks: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinity_block: Option<usize>,
}

impl StructureFile {
    pub fn to_structure(&self) -> Result<IncidenceStructure, DesignError> {
        IncidenceStructure::affine(self.num_points, self.long_blocks.clone(), self.short_blocks.clone())
    }
}

/// Outcome of checking (AU1)–(AU5).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub order: Option<usize>,
    pub au1: bool,
    pub au2: bool,
    pub au3: bool,
    pub au4: bool,
    pub au5: bool,
    pub parallelism: Option<Parallelism>,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.au1 && self.au2 && self.au3 && self.au4 && self.au5
    }
}

/// n with n³ − n = v.
pub fn affine_order(v: usize) -> Option<usize> {
    (2..).take_while(|n| n * n * n - n <= v).find(|n| n * n * n - n == v)
}

pub fn verify_affine_axioms(u: &IncidenceStructure) -> AxiomReport {
    let mut r = AxiomReport {
        order: affine_order(u.num_points()),
        au1: false,
        au2: false,
        au3: false,
        au4: false,
        au5: false,
        parallelism: None,
        failures: Vec::new(),
    };
    let Some(n) = r.order else {
        r.failures.push(format!("AU1: {} is not of the form n^3 - n", u.num_points()));
        return r;
    };
    r.au1 = true;

    let bad_size = u.blocks().iter().position(|b| b.len() != n && b.len() != n + 1);
    let mismatch = (0..u.num_blocks()).find(|&i| u.is_short(i) != (u.block(i).len() == n));
    match (bad_size, mismatch) {
        (Some(i), _) => r.failures.push(format!("AU2: block {i} has {} points", u.block(i).len())),
        (None, Some(i)) => r.failures.push(format!("AU2: block {i} is mislabelled as short or long")),
        (None, None) => r.au2 = true,
    }

    let degrees = u.point_blocks();
    match degrees.iter().position(|b| b.len() != n * n) {
        Some(p) => r.failures.push(format!("AU3: point {p} lies on {} blocks", degrees[p].len())),
        None => r.au3 = true,
    }

    let v = u.num_points();
    let counts = u.pair_counts();
    match (0..v * v).find(|&k| k / v < k % v && counts[k] != 1) {
        Some(k) => r.failures.push(format!("AU4: points {} and {} share {} blocks", k / v, k % v, counts[k])),
        None => r.au4 = true,
    }

    if r.au2 {
        match find_parallelism(u, n) {
            Ok(Some(p)) => {
                r.au5 = true;
                r.parallelism = Some(p);
            }
            Ok(None) => r.failures.push("AU5: no parallelism exists".into()),
            Err(e) => r.failures.push(format!("AU5: {e}")),
        }
    } else {
        r.failures.push("AU5: skipped because AU2 failed".into());
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            IncidenceStructure::plain(3, vec![vec![0, 3]]),
            Err(DesignError::PointOutOfRange { point: 3, .. })
        ));
        assert_eq!(IncidenceStructure::plain(3, vec![vec![0, 0]]), Err(DesignError::RepeatedPoint(0)));
        assert_eq!(IncidenceStructure::plain(3, vec![vec![0, 1], vec![1, 0]]), Err(DesignError::DuplicateBlock(1)));
        assert_eq!(IncidenceStructure::new(3, vec![vec![0, 1]], vec![1]), Err(DesignError::BadShortIndex(1)));
    }

    #[test]
    fn affine_orders() {
        assert_eq!(affine_order(6), Some(2));
        assert_eq!(affine_order(24), Some(3));
        assert_eq!(affine_order(60), Some(4));
        assert_eq!(affine_order(25), None);
    }

    #[test]
    fn relabel_and_automorphism() {
        let s = IncidenceStructure::plain(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let g = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        assert!(s.is_automorphism(&g));
        let t = IncidenceStructure::plain(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(!t.is_automorphism(&g));
        assert_eq!(t.relabel(&g).blocks(), &[vec![1, 2], vec![0, 2]]);
    }
}
