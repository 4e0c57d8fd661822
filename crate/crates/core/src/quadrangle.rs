//! The parabolic quadric Q(4,q), its hyperplane section H ≅ Q(3,q), and the
//! complement geometry Q(4,q) ∖ H.

use std::collections::{BTreeSet, HashMap};

use crate::aut::{are_isomorphic, AutError, AutOptions};
use crate::design::{short_block_geometry, IncidenceStructure};
use crate::gf::{Field, FieldElement};
use crate::perm::Permutation;
use crate::sl2::Sl2;

/// Quadrics handled here, both with the form x1x3 + x2x4 (+ x5²).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quadric {
    /// x1x3 + x2x4 + x5² = 0 in PG(4,q).
    Parabolic,
    /// x1x3 + x2x4 = 0 in PG(3,q).
    Hyperbolic,
}

impl Quadric {
    fn dim(self) -> usize {
        match self {
            Quadric::Parabolic => 5,
            Quadric::Hyperbolic => 4,
        }
    }

    fn value(self, f: &Field, x: &[FieldElement]) -> FieldElement {
        let mut v = f.add(f.mul(x[0], x[2]), f.mul(x[1], x[3]));
        if self == Quadric::Parabolic {
            v = f.add(v, f.mul(x[4], x[4]));
        }
        v
    }
}

/// Points of a quadric with first nonzero coordinate 1, and its lines.
#[derive(Clone, Debug)]
pub struct PolarSpace {
    field: Field,
    quadric: Quadric,
    points: Vec<Vec<FieldElement>>,
    index: HashMap<Vec<FieldElement>, usize>,
    lines: Vec<Vec<usize>>,
}

impl PolarSpace {
    pub fn new(field: Field, quadric: Quadric) -> PolarSpace {
        let q = field.order();
        let dim = quadric.dim();
        let mut points = Vec::new();
        for n in 0..q.pow(dim as u32) {
            let x: Vec<FieldElement> =
                (0..dim).map(|i| field.element(n / q.pow(i as u32) % q).expect("in range")).collect();
            let lead = x.iter().find(|c| !c.is_zero());
            if lead == Some(&field.one()) && quadric.value(&field, &x).is_zero() {
                points.push(x);
            }
        }
        points.sort();
        let index = points.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        let mut space = PolarSpace { field, quadric, points, index, lines: Vec::new() };
        space.lines = space.find_lines();
        space
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn quadric(&self) -> Quadric {
        self.quadric
    }

    pub fn points(&self) -> &[Vec<FieldElement>] {
        &self.points
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    /// Polar form B(x,y) = Q(x+y) − Q(x) − Q(y).
    fn polar(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let sum: Vec<FieldElement> = x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect();
        let q = |v: &[FieldElement]| self.quadric.value(f, v);
        f.sub(f.sub(q(&sum), q(x)), q(y))
    }

    pub fn collinear(&self, a: usize, b: usize) -> bool {
        self.polar(&self.points[a], &self.points[b]).is_zero()
    }

    fn normalize(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        let f = &self.field;
        let lead = *x.iter().find(|c| !c.is_zero()).expect("nonzero vector");
        let s = f.inv(lead).expect("nonzero");
        x.iter().map(|&c| f.mul(c, s)).collect()
    }

    /// Points on the projective line through two distinct points.
    fn span(&self, a: usize, b: usize) -> Vec<usize> {
        let f = &self.field;
        let (x, y) = (&self.points[a], &self.points[b]);
        let mut line = vec![a];
        for t in f.elements() {
            let v: Vec<FieldElement> = x.iter().zip(y).map(|(&u, &w)| f.add(f.mul(t, u), w)).collect();
            line.push(self.index[&self.normalize(&v)]);
        }
        line.sort_unstable();
        line
    }

    fn find_lines(&self) -> Vec<Vec<usize>> {
        let mut lines = BTreeSet::new();
        for a in 0..self.points.len() {
            for b in a + 1..self.points.len() {
                if self.collinear(a, b) {
                    lines.insert(self.span(a, b));
                }
            }
        }
        lines.into_iter().collect()
    }

    pub fn to_structure(&self) -> IncidenceStructure {
        IncidenceStructure::plain(self.points.len(), self.lines.clone()).expect("lines are distinct point sets")
    }

    /// For every point p and line L not through p, exactly one point of L is
    /// collinear with p.
    pub fn satisfies_gq_axiom(&self) -> bool {
        self.lines.iter().all(|line| {
            (0..self.points.len())
                .filter(|p| !line.contains(p))
                .all(|p| line.iter().filter(|&&x| self.collinear(p, x)).count() == 1)
        })
    }
}

pub fn build_q4(field: Field) -> PolarSpace {
    PolarSpace::new(field, Quadric::Parabolic)
}

/// The section x5 = 0 of Q(4,q): its points and the lines inside it.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    pub points: Vec<usize>,
    pub lines: Vec<usize>,
}

pub fn hyperplane_h(q4: &PolarSpace) -> Hyperplane {
    let zero = q4.field().zero();
    let in_h: Vec<bool> = q4.points().iter().map(|x| x[4] == zero).collect();
    let points = (0..in_h.len()).filter(|&i| in_h[i]).collect();
    let lines = (0..q4.lines().len()).filter(|&l| q4.lines()[l].iter().all(|&p| in_h[p])).collect();
    Hyperplane { points, lines }
}

/// Whether every line of Q(4,q) meets H.
pub fn is_geometric_hyperplane(q4: &PolarSpace, h: &Hyperplane) -> bool {
    let set: BTreeSet<usize> = h.points.iter().copied().collect();
    q4.lines().iter().all(|l| l.iter().any(|p| set.contains(p)))
}

/// The section H as a structure on its own points, renumbered in order.
pub fn hyperplane_structure(q4: &PolarSpace, h: &Hyperplane) -> IncidenceStructure {
    let rank: HashMap<usize, usize> = h.points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let lines = h.lines.iter().map(|&l| q4.lines()[l].iter().map(|p| rank[p]).collect()).collect();
    IncidenceStructure::plain(h.points.len(), lines).expect("sub-geometry is valid")
}

/// Points off H, renumbered in order, with the traces of lines not in H.
pub fn complement_geometry(q4: &PolarSpace, h: &Hyperplane) -> IncidenceStructure {
    let in_h: BTreeSet<usize> = h.points.iter().copied().collect();
    let outside: Vec<usize> = (0..q4.points().len()).filter(|p| !in_h.contains(p)).collect();
    let rank: HashMap<usize, usize> = outside.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let blocks = q4
        .lines()
        .iter()
        .map(|l| l.iter().filter_map(|p| rank.get(p).copied()).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect();
    IncidenceStructure::plain(outside.len(), blocks).expect("traces of distinct lines are distinct")
}

/// An explicit isomorphism from the short-block geometry of SL(2,q) onto
/// Q(4,q) ∖ H, if one exists.
pub fn verify_short_block_model(sl2: &Sl2, opts: AutOptions) -> Result<Option<Permutation>, AutError> {
    let q4 = build_q4(sl2.field().clone());
    let h = hyperplane_h(&q4);
    are_isomorphic(&short_block_geometry(sl2), &complement_geometry(&q4, &h), opts)
}

/// 2e(q−1)²q²(q+1)².
pub fn short_geometry_aut_order(q: u128, e: u128) -> u128 {
    2 * e * (q - 1).pow(2) * q.pow(2) * (q + 1).pow(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for q in [2u64, 3, 4, 5] {
            let q4 = build_q4(Field::of_order(q).unwrap());
            let q = q as usize;
            assert_eq!(q4.points().len(), (q * q + 1) * (q + 1));
            assert!(q4.lines().iter().all(|l| l.len() == q + 1));
            let through = q4.to_structure().point_blocks();
            assert!(through.iter().all(|b| b.len() == q + 1));
            let h = hyperplane_h(&q4);
            assert_eq!(h.points.len(), (q + 1) * (q + 1));
            assert_eq!(h.lines.len(), 2 * (q + 1));
            assert!(is_geometric_hyperplane(&q4, &h));
            let c = complement_geometry(&q4, &h);
            assert_eq!(c.num_points(), q * q * q - q);
            assert_eq!(c.num_blocks(), (q + 1) * (q * q - 1));
            assert!(c.blocks().iter().all(|b| b.len() == q));
        }
    }

    #[test]
    fn gq_axiom() {
        for q in [2u64, 3] {
            assert!(build_q4(Field::of_order(q).unwrap()).satisfies_gq_axiom());
        }
    }

    #[test]
    fn section_is_q3() {
        for q in [2u64, 3] {
            let f = Field::of_order(q).unwrap();
            let q4 = build_q4(f.clone());
            let h = hyperplane_structure(&q4, &hyperplane_h(&q4));
            let q3 = PolarSpace::new(f, Quadric::Hyperbolic).to_structure();
            assert!(are_isomorphic(&h, &q3, AutOptions::default()).unwrap().is_some());
        }
    }

    #[test]
    fn aut_order_formula() {
        assert_eq!(short_geometry_aut_order(2, 1), 72);
        assert_eq!(short_geometry_aut_order(3, 1), 1152);
    }
}
