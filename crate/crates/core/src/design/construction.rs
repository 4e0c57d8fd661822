//! The affine unitals U_{S,𝒟} with point set SL(2,q).

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{DesignError, IncidenceStructure, Parallelism};
use crate::sl2::{Sl2, Sl2Error, Subgroup};

/// Sets D ⊂ SL(2,q), each containing the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockCollection {
    pub sets: Vec<Vec<usize>>,
}

impl BlockCollection {
    pub fn new(mut sets: Vec<Vec<usize>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
        }
        BlockCollection { sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionQ {
    pub holds: bool,
    pub quotients: usize,
    /// Two ordered pairs (x, y), (x', y') with x y⁻¹ = x' y'⁻¹.
    pub witness: Option<[(usize, usize); 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionP {
    pub holds: bool,
    /// Elements covered more than once.
    pub overlaps: Vec<usize>,
    /// Non-identity elements covered by nothing.
    pub gaps: Vec<usize>,
}

fn validate_set(sl2: &Sl2, d: &[usize]) -> Result<(), DesignError> {
    let q = sl2.q();
    let distinct: BTreeSet<_> = d.iter().collect();
    if d.iter().any(|&x| x >= sl2.order()) {
        return Err(DesignError::MalformedSet("element index out of range".into()));
    }
    if distinct.len() != d.len() || d.len() != q + 1 {
        return Err(DesignError::MalformedSet(format!("expected {} distinct elements, got {:?}", q + 1, d)));
    }
    if !d.contains(&sl2.identity()) {
        return Err(DesignError::MalformedSet("set does not contain the identity".into()));
    }
    Ok(())
}

/// D* = { x y⁻¹ : x ≠ y in D } as a sorted set.
pub fn quotient_set(sl2: &Sl2, d: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> =
        d.iter().flat_map(|&x| d.iter().filter(move |&&y| y != x).map(move |&y| sl2.quotient(x, y))).collect();
    set.into_iter().collect()
}

pub fn check_condition_q(sl2: &Sl2, d: &[usize]) -> Result<ConditionQ, DesignError> {
    validate_set(sl2, d)?;
    let mut seen: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut witness = None;
    for &x in d {
        for &y in d {
            if x == y {
                continue;
            }
            let z = sl2.quotient(x, y);
            match seen.get(&z) {
                Some(&first) if witness.is_none() => witness = Some([first, (x, y)]),
                Some(_) => {}
                None => {
                    seen.insert(z, (x, y));
                }
            }
        }
    }
    let q = sl2.q();
    Ok(ConditionQ { holds: seen.len() == q * (q + 1), quotients: seen.len(), witness })
}

pub fn check_condition_p(sl2: &Sl2, s: &Subgroup, coll: &BlockCollection) -> Result<ConditionP, DesignError> {
    if s.order() != sl2.q() + 1 {
        return Err(Sl2Error::WrongOrder { expected: sl2.q() + 1, found: s.order() }.into());
    }
    for d in &coll.sets {
        validate_set(sl2, d)?;
    }
    let one = sl2.identity();
    let mut count = vec![0usize; sl2.order()];
    let mut cover = |xs: &[usize]| {
        for &x in xs {
            if x != one {
                count[x] += 1;
            }
        }
    };
    cover(&s.elements);
    for t in sl2.sylow_subgroups() {
        cover(&t.elements);
    }
    for d in &coll.sets {
        cover(&quotient_set(sl2, d));
    }
    let overlaps: Vec<usize> = (0..count.len()).filter(|&x| count[x] > 1).collect();
    let gaps: Vec<usize> = (0..count.len()).filter(|&x| x != one && count[x] == 0).collect();
    Ok(ConditionP { holds: overlaps.is_empty() && gaps.is_empty(), overlaps, gaps })
}

fn right_translate(sl2: &Sl2, set: &[usize], g: usize) -> Vec<usize> {
    let mut out: Vec<usize> = set.iter().map(|&x| sl2.mul(x, g)).collect();
    out.sort_unstable();
    out
}

/// All right cosets of Sylow p-subgroups, sorted.
pub fn short_blocks(sl2: &Sl2) -> Vec<Vec<usize>> {
    let mut blocks = BTreeSet::new();
    for t in sl2.sylow_subgroups() {
        for g in 0..sl2.order() {
            blocks.insert(right_translate(sl2, &t.elements, g));
        }
    }
    blocks.into_iter().collect()
}

/// The geometry 𝔖 of short blocks on the point set SL(2,q).
pub fn short_block_geometry(sl2: &Sl2) -> IncidenceStructure {
    IncidenceStructure::plain(sl2.order(), short_blocks(sl2)).expect("cosets are valid blocks")
}

pub fn build_affine_unital(sl2: &Sl2, s: &Subgroup, coll: &BlockCollection) -> Result<IncidenceStructure, DesignError> {
    for (index, d) in coll.sets.iter().enumerate() {
        if !check_condition_q(sl2, d)?.holds {
            return Err(DesignError::ConditionQ { index });
        }
    }
    let p = check_condition_p(sl2, s, coll)?;
    if !p.holds {
        return Err(DesignError::ConditionP { overlaps: p.overlaps.len(), gaps: p.gaps.len() });
    }
    let mut long = BTreeSet::new();
    for g in 0..sl2.order() {
        long.insert(right_translate(sl2, &s.elements, g));
        for d in &coll.sets {
            long.insert(right_translate(sl2, d, g));
        }
    }
    IncidenceStructure::affine(sl2.order(), long.into_iter().collect(), short_blocks(sl2))
}

/// Parallelism on `short_blocks(sl2)` assigning each block to the Sylow
/// subgroup `key(block, x)` for a point x on it.
fn sylow_parallelism(sl2: &Sl2, key: impl Fn(&[usize], usize) -> Vec<usize>) -> Parallelism {
    let sylows: HashMap<Vec<usize>, usize> =
        sl2.sylow_subgroups().into_iter().enumerate().map(|(i, t)| (t.elements, i)).collect();
    let mut classes = vec![Vec::new(); sylows.len()];
    for (pos, b) in short_blocks(sl2).iter().enumerate() {
        classes[sylows[&key(b, b[0])]].push(pos);
    }
    Parallelism::new(classes)
}

/// ♭: the block T g lies in the class of T.
pub fn flat_parallelism(sl2: &Sl2) -> Parallelism {
    sylow_parallelism(sl2, |b, x| right_translate(sl2, b, sl2.inv(x)))
}

/// ♮: the block T g = g T^g lies in the class of T^g.
pub fn natural_parallelism(sl2: &Sl2) -> Parallelism {
    let xinv_b = |b: &[usize], x: usize| {
        let xi = sl2.inv(x);
        let mut out: Vec<usize> = b.iter().map(|&y| sl2.mul(xi, y)).collect();
        out.sort_unstable();
        out
    };
    sylow_parallelism(sl2, xinv_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q2_trivial_collection() {
        let g = Sl2::of_order(2).unwrap();
        let c = g.cyclic_subgroup_c();
        let empty = BlockCollection::default();
        let p = check_condition_p(&g, &c, &empty).unwrap();
        assert!(p.holds);
        let u = build_affine_unital(&g, &c, &empty).unwrap();
        assert_eq!(u.num_points(), 6);
        let mut sizes: Vec<usize> = u.blocks().iter().map(Vec::len).collect();
        sizes.dedup();
        assert_eq!(sizes, vec![3, 2]);
        assert_eq!(u.num_short(), 9);
        assert_eq!(u.num_blocks() - u.num_short(), 2);
    }

    #[test]
    fn subgroup_fails_q() {
        for q in [3, 4, 5] {
            let g = Sl2::of_order(q).unwrap();
            let c = g.cyclic_subgroup_c();
            let r = check_condition_q(&g, &c.elements).unwrap();
            assert!(!r.holds);
            assert!(r.quotients <= q as usize);
            assert!(r.witness.is_some());
        }
    }

    #[test]
    fn malformed_sets() {
        let g = Sl2::of_order(3).unwrap();
        let id = g.identity();
        let other: Vec<usize> = (0..g.order()).filter(|&x| x != id).take(4).collect();
        assert!(matches!(check_condition_q(&g, &other), Err(DesignError::MalformedSet(_))));
        assert!(matches!(check_condition_q(&g, &[id, id, other[0], other[1]]), Err(DesignError::MalformedSet(_))));
        let t = g.sylow_subgroups().remove(0);
        assert!(matches!(check_condition_p(&g, &t, &BlockCollection::default()), Err(DesignError::Group(_))));
    }

    #[test]
    fn short_block_counts() {
        for q in [2u32, 3, 4, 5] {
            let g = Sl2::of_order(q).unwrap();
            let q = q as usize;
            let blocks = short_blocks(&g);
            assert_eq!(blocks.len(), (q + 1) * (q * q - 1));
            assert!(blocks.iter().all(|b| b.len() == q));
        }
    }

    #[test]
    fn flat_and_natural_are_parallelisms() {
        for q in [2u32, 3, 4, 5] {
            let g = Sl2::of_order(q).unwrap();
            let geom = short_block_geometry(&g);
            let q = q as usize;
            let flat = flat_parallelism(&g);
            let nat = natural_parallelism(&g);
            for p in [&flat, &nat] {
                assert_eq!(p.classes().len(), q + 1);
                for class in p.classes() {
                    assert_eq!(class.len(), q * q - 1);
                    let mut pts: Vec<usize> = class.iter().flat_map(|&b| geom.block(b).to_vec()).collect();
                    pts.sort_unstable();
                    assert_eq!(pts, (0..g.order()).collect::<Vec<_>>());
                }
            }
            assert_ne!(flat, nat);
        }
    }

    #[test]
    fn inversion_swaps_flat_and_natural() {
        for q in [2u32, 3, 4] {
            let g = Sl2::of_order(q).unwrap();
            let blocks = short_blocks(&g);
            let index: HashMap<&Vec<usize>, usize> = blocks.iter().enumerate().map(|(i, b)| (b, i)).collect();
            let inv = g.inversion_permutation();
            let image = |p: &Parallelism| {
                let classes =
                    p.classes().iter().map(|c| c.iter().map(|&b| index[&inv.map_set(&blocks[b])]).collect()).collect();
                Parallelism::new(classes)
            };
            assert_eq!(image(&flat_parallelism(&g)), natural_parallelism(&g));
            assert_eq!(image(&natural_parallelism(&g)), flat_parallelism(&g));
        }
    }

    #[test]
    fn right_multiplication_preserves_flat_classes() {
        let g = Sl2::of_order(3).unwrap();
        let blocks = short_blocks(&g);
        let index: HashMap<&Vec<usize>, usize> = blocks.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let flat = flat_parallelism(&g);
        let nat = natural_parallelism(&g);
        let (x, y) = g.generating_pair();
        for h in [x, y] {
            let rho = g.right_multiplication(h);
            let map = |c: &Vec<usize>| {
                let mut v: Vec<usize> = c.iter().map(|&b| index[&rho.map_set(&blocks[b])]).collect();
                v.sort_unstable();
                v
            };
            // ♭ classes are fixed one by one, ♮ classes are permuted
            for c in flat.classes() {
                assert_eq!(&map(c), c);
            }
            for c in nat.classes() {
                assert!(nat.classes().contains(&map(c)));
            }
        }
    }
}
