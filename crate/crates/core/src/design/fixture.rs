//! The 24-point affine unital of order 3 with two inequivalent parallelisms
//! whose closures are isomorphic. Points are numbered from 1 in the source
//! table and shifted to 0-based on load.

use super::{IncidenceStructure, Parallelism};
use crate::perm::Permutation;

#[rustfmt::skip]
const LONG: [[usize; 4]; 30] = [
    [1, 4, 5, 6], [1, 7, 8, 9], [1, 12, 13, 14], [1, 15, 16, 17], [1, 22, 23, 24], [2, 4, 13, 15],
    [2, 8, 10, 23], [2, 11, 18, 21], [2, 12, 19, 22], [2, 16, 20, 24], [3, 5, 14, 17],
    [3, 6, 9, 18], [3, 7, 12, 21], [3, 8, 11, 16], [3, 10, 19, 20], [4, 8, 18, 24], [4, 9, 12, 23],
    [4, 14, 16, 21], [5, 10, 16, 18], [5, 13, 20, 22], [5, 15, 19, 21], [6, 7, 19, 24],
    [6, 8, 17, 20], [6, 10, 15, 22], [7, 11, 17, 22], [7, 14, 20, 23], [9, 10, 13, 21],
    [9, 11, 14, 19], [11, 12, 15, 24], [13, 17, 18, 23],
];

// listed by column, so that consecutive runs form the parallel classes
#[rustfmt::skip]
const SHORT: [[usize; 3]; 32] = [
    [1, 2, 3], [4, 7, 10], [9, 15, 20], [14, 18, 22], [17, 21, 24], [5, 11, 23], [6, 12, 16],
    [8, 13, 19], [1, 20, 21], [2, 9, 17], [3, 4, 22], [7, 15, 18], [10, 14, 24], [5, 8, 12],
    [6, 11, 13], [16, 19, 23], [2, 6, 14], [3, 15, 23], [5, 9, 24], [7, 13, 16], [8, 21, 22],
    [1, 10, 11], [4, 17, 19], [12, 18, 20], [2, 5, 7], [3, 13, 24], [6, 21, 23], [8, 14, 15],
    [9, 16, 22], [1, 18, 19], [4, 11, 20], [10, 12, 17],
];

const ISO_CYCLES: [&[usize]; 6] =
    [&[1, 16, 23, 10], &[2, 11, 15, 19], &[4, 9, 13, 14], &[5, 22, 18, 24], &[6, 27, 20, 25, 8, 26, 17, 28], &[12, 21]];

pub struct Figure1 {
    pub structure: IncidenceStructure,
    pub pi: Parallelism,
    pub pi_prime: Parallelism,
    /// Point permutation of the 28-point closures, carrying the π′-closure
    /// onto the π-closure once the added points are named as below.
    pub iso: Permutation,
    /// 0-based name of the point added for each class of π (classes in
    /// sorted order).
    pub pi_points: [usize; 4],
    pub pi_prime_points: [usize; 4],
}

impl Figure1 {
    /// Closure of the fixture by `pi` with the added points renamed.
    pub fn named_closure(&self, pi: &Parallelism, names: &[usize; 4]) -> IncidenceStructure {
        let c = super::closure(&self.structure, pi).expect("fixture parallelisms are valid");
        let mut images: Vec<usize> = (0..24).collect();
        images.extend(names);
        c.structure().relabel(&Permutation::from_images(images).expect("names are a bijection"))
    }
}

fn shifted(block: &[usize]) -> Vec<usize> {
    block.iter().map(|&p| p - 1).collect()
}

fn runs(ranges: &[&[std::ops::RangeInclusive<usize>]]) -> Parallelism {
    Parallelism::new(ranges.iter().map(|class| class.iter().flat_map(|r| r.clone()).collect()).collect())
}

pub fn figure1_fixture() -> Figure1 {
    let long = LONG.iter().map(|b| shifted(b)).collect();
    let short = SHORT.iter().map(|b| shifted(b)).collect();
    let structure = IncidenceStructure::affine(24, long, short).expect("fixture data is valid");
    let pi = runs(&[&[0..=7], &[8..=15], &[16..=23], &[24..=31]]);
    let pi_prime = runs(&[&[0..=4, 13..=15], &[5..=12], &[16..=20, 29..=31], &[21..=28]]);
    let cycles: Vec<Vec<usize>> = ISO_CYCLES.iter().map(|c| shifted(c)).collect();
    let iso = Permutation::from_cycles(28, &cycles).expect("fixture cycles are disjoint");
    Figure1 { structure, pi, pi_prime, iso, pi_points: [24, 27, 25, 26], pi_prime_points: [24, 27, 26, 25] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_one_neighbourhood() {
        let f = figure1_fixture();
        let through: Vec<Vec<usize>> =
            f.structure.point_blocks()[0].iter().map(|&b| f.structure.block(b).iter().map(|p| p + 1).collect()).collect();
        assert_eq!(through.len(), 9);
        for b in [vec![1, 4, 5, 6], vec![1, 7, 8, 9], vec![1, 12, 13, 14], vec![1, 15, 16, 17], vec![1, 22, 23, 24]] {
            assert!(through.contains(&b));
        }
        for b in [vec![1, 2, 3], vec![1, 10, 11], vec![1, 18, 19], vec![1, 20, 21]] {
            assert!(through.contains(&b));
        }
    }

    #[test]
    fn iso_fixes_the_naming_of_added_points() {
        let f = figure1_fixture();
        let a = f.named_closure(&f.pi, &f.pi_points);
        let b = f.named_closure(&f.pi_prime, &f.pi_prime_points);
        let blocks: std::collections::BTreeSet<Vec<usize>> = a.blocks().iter().cloned().collect();
        let image: std::collections::BTreeSet<Vec<usize>> = b.blocks().iter().map(|x| f.iso.map_set(x)).collect();
        assert_eq!(blocks, image);
    }

    #[test]
    fn parallelisms_are_valid() {
        let f = figure1_fixture();
        f.pi.validate(&f.structure).unwrap();
        f.pi_prime.validate(&f.structure).unwrap();
        assert_ne!(f.pi, f.pi_prime);
        assert!(f.pi.classes().iter().chain(f.pi_prime.classes()).all(|c| c.len() == 8));
    }
}
