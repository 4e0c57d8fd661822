//! SL(2,q) as an explicit finite group.
//!
//! Elements are numbered by their position in the canonical order of
//! `(a, b, c, d)` field-index tuples; every other module works with these
//! indices. Multiplication and inversion are table lookups.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};
use crate::perm::{PermGroup, Permutation};

/// Largest `q` accepted by [`Sl2::new`].
pub const DEFAULT_Q_BOUND: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Sl2Error {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("q = {q} exceeds the SL(2,q) bound {bound}")]
    TooLarge { q: u32, bound: u32 },
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("subgroup has order {found}, expected {expected}")]
    WrongOrder { expected: usize, found: usize },
    #[error("matrix is not in SL(2,q)")]
    NotInGroup,
}

/// A 2×2 matrix `(a b; c d)` over GF(q).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl Mat2 {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn entries(&self) -> [FieldElement; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn identity() -> Self {
        Mat2::new(FieldElement::ONE, FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE)
    }

    pub fn mul(&self, other: &Mat2, f: &Field) -> Mat2 {
        let dot = |x: FieldElement, y: FieldElement, z: FieldElement, w: FieldElement| f.add(f.mul(x, y), f.mul(z, w));
        Mat2::new(
            dot(self.a, other.a, self.b, other.c),
            dot(self.a, other.b, self.b, other.d),
            dot(self.c, other.a, self.d, other.c),
            dot(self.c, other.b, self.d, other.d),
        )
    }

    pub fn det(&self, f: &Field) -> FieldElement {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    /// Inverse in GL(2,q); `None` for singular matrices.
    pub fn inverse(&self, f: &Field) -> Option<Mat2> {
        let di = f.inv(self.det(f)).ok()?;
        Some(Mat2::new(f.mul(self.d, di), f.neg(f.mul(self.b, di)), f.neg(f.mul(self.c, di)), f.mul(self.a, di)))
    }

    pub fn map_entries(&self, g: impl Fn(FieldElement) -> FieldElement) -> Mat2 {
        Mat2::new(g(self.a), g(self.b), g(self.c), g(self.d))
    }

    /// Scalar multiple whose first nonzero entry (row-major) is 1.
    pub fn normalized(&self, f: &Field) -> Mat2 {
        let lead = self.entries().into_iter().find(|x| !x.is_zero()).expect("nonzero matrix");
        let s = f.inv(lead).expect("nonzero");
        self.map_entries(|x| f.mul(x, s))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupClass {
    Cyclic,
    GeneralizedQuaternion,
    Exceptional,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupKind {
    SylowP,
    OrderQPlusOne(SubgroupClass),
    Other,
}

/// A subgroup stored as its sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub kind: SubgroupKind,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn class(&self) -> Option<SubgroupClass> {
        match self.kind {
            SubgroupKind::OrderQPlusOne(c) => Some(c),
            _ => None,
        }
    }
}

/// SL(2,q) with precomputed multiplication and inversion tables.
#[derive(Clone, Debug)]
pub struct Sl2 {
    field: Field,
    elements: Vec<Mat2>,
    index: HashMap<Mat2, usize>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    identity: usize,
}

impl Sl2 {
    pub fn new(field: Field) -> Result<Sl2, Sl2Error> {
        Self::with_bound(field, DEFAULT_Q_BOUND)
    }

    pub fn of_order(q: u32) -> Result<Sl2, Sl2Error> {
        Self::new(Field::of_order(q as u64)?)
    }

    pub fn with_bound(field: Field, bound: u32) -> Result<Sl2, Sl2Error> {
        let q = field.order();
        if q > bound {
            return Err(Sl2Error::TooLarge { q, bound });
        }
        let mut elements = Vec::new();
        for a in field.elements() {
            for b in field.elements() {
                for c in field.elements() {
                    for d in field.elements() {
                        let m = Mat2::new(a, b, c, d);
                        if m.det(&field) == FieldElement::ONE {
                            elements.push(m);
                        }
                    }
                }
            }
        }
        let n = elements.len();
        let index: HashMap<Mat2, usize> = elements.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut mul = vec![0u16; n * n];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                mul[i * n + j] = index[&x.mul(y, &field)] as u16;
            }
        }
        let inv = elements.iter().map(|x| index[&x.inverse(&field).unwrap()] as u16).collect();
        let identity = index[&Mat2::identity()];
        Ok(Sl2 { field, elements, index, mul, inv, identity })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.field.order() as usize
    }

    /// Number of group elements, `(q-1)q(q+1)`.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> Mat2 {
        self.elements[i]
    }

    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.elements.len() + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    /// `x y^-1`.
    #[inline]
    pub fn quotient(&self, x: usize, y: usize) -> usize {
        self.mul(x, self.inv(y))
    }

    /// `h^-1 x h`.
    pub fn conjugate(&self, x: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(h), x), h)
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`, or `None` once it exceeds `limit` elements.
    pub fn closure(&self, gens: &[usize], limit: usize) -> Option<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[self.identity] = true;
        let mut members = vec![self.identity];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    if members.len() > limit {
                        return None;
                    }
                }
            }
            i += 1;
        }
        members.sort_unstable();
        Some(members)
    }

    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        self.closure(gens, usize::MAX).unwrap()
    }

    fn is_subgroup(&self, set: &[usize]) -> bool {
        let members: HashSet<usize> = set.iter().copied().collect();
        members.contains(&self.identity)
            && set.iter().all(|&x| members.contains(&self.inv(x)))
            && set.iter().all(|&x| set.iter().all(|&y| members.contains(&self.mul(x, y))))
    }

    /// Validates a user-supplied element set as a subgroup and tags it.
    pub fn subgroup(&self, elements: Vec<usize>) -> Result<Subgroup, Sl2Error> {
        let mut elements = elements;
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&x| x >= self.order()) || !self.is_subgroup(&elements) {
            return Err(Sl2Error::NotSubgroup);
        }
        let q = self.q();
        let kind = if elements.len() == q + 1 {
            SubgroupKind::OrderQPlusOne(self.classify(&elements))
        } else if elements.len() == q && self.sylow_subgroups().iter().any(|t| t.elements == elements) {
            SubgroupKind::SylowP
        } else {
            SubgroupKind::Other
        };
        Ok(Subgroup { elements, kind })
    }

    /// The `q + 1` Sylow p-subgroups, sorted by element lists.
    pub fn sylow_subgroups(&self) -> Vec<Subgroup> {
        let f = &self.field;
        let base: Vec<usize> = f
            .elements()
            .map(|b| self.index[&Mat2::new(f.one(), b, f.zero(), f.one())])
            .collect();
        let mut all = BTreeSet::new();
        for h in 0..self.order() {
            let mut conj: Vec<usize> = base.iter().map(|&t| self.conjugate(t, h)).collect();
            conj.sort_unstable();
            all.insert(conj);
        }
        all.into_iter().map(|elements| Subgroup { elements, kind: SubgroupKind::SylowP }).collect()
    }

    fn classify(&self, elements: &[usize]) -> SubgroupClass {
        let n = elements.len();
        let orders: Vec<usize> = elements.iter().map(|&x| self.element_order(x)).collect();
        if orders.contains(&n) {
            SubgroupClass::Cyclic
        } else if n % 2 == 0 && orders.contains(&(n / 2)) && orders.iter().filter(|&&o| o == 2).count() == 1 {
            SubgroupClass::GeneralizedQuaternion
        } else {
            SubgroupClass::Exceptional
        }
    }

    /// Every subgroup of order `q + 1`, found by closing single elements and
    /// pairs of elements whose orders divide `q + 1`.
    pub fn subgroups_order_qplus1(&self) -> Vec<Subgroup> {
        let target = self.q() + 1;
        let candidates: Vec<usize> = (0..self.order())
            .filter(|&x| x != self.identity && target % self.element_order(x) == 0)
            .collect();
        let mut found = BTreeSet::new();
        for (i, &x) in candidates.iter().enumerate() {
            let cyclic = self.closure(&[x], target).unwrap();
            if cyclic.len() == target {
                found.insert(cyclic.clone());
                continue;
            }
            for &y in &candidates[i + 1..] {
                if cyclic.binary_search(&y).is_ok() {
                    continue;
                }
                if let Some(s) = self.closure(&[x, y], target) {
                    if s.len() == target {
                        found.insert(s);
                    }
                }
            }
        }
        found
            .into_iter()
            .map(|elements| {
                let kind = SubgroupKind::OrderQPlusOne(self.classify(&elements));
                Subgroup { elements, kind }
            })
            .collect()
    }

    /// Cyclic subgroup generated by the first element of order `q + 1`.
    pub fn cyclic_subgroup_c(&self) -> Subgroup {
        let target = self.q() + 1;
        let g = (0..self.order())
            .find(|&x| self.element_order(x) == target)
            .expect("SL(2,q) contains elements of order q+1");
        Subgroup {
            elements: self.generate(&[g]),
            kind: SubgroupKind::OrderQPlusOne(SubgroupClass::Cyclic),
        }
    }

    /// Generator of [`Sl2::cyclic_subgroup_c`].
    pub fn cyclic_generator(&self) -> usize {
        let target = self.q() + 1;
        (0..self.order()).find(|&x| self.element_order(x) == target).unwrap()
    }

    /// Two elements generating the whole group.
    pub fn generating_pair(&self) -> (usize, usize) {
        let n = self.order();
        for x in 0..n {
            if self.element_order(x) < 3 {
                continue;
            }
            for y in x + 1..n {
                if self.closure(&[x, y], n).map(|s| s.len()) == Some(n) {
                    return (x, y);
                }
            }
        }
        unreachable!("SL(2,q) is 2-generated")
    }

    /// `x -> x^-1` on element indices.
    pub fn inversion_permutation(&self) -> Permutation {
        Permutation::from_images((0..self.order()).map(|x| self.inv(x)).collect()).unwrap()
    }

    /// Right multiplication `x -> x h`.
    pub fn right_multiplication(&self, h: usize) -> Permutation {
        Permutation::from_images((0..self.order()).map(|x| self.mul(x, h)).collect()).unwrap()
    }

    /// The regular group R of right multiplications.
    pub fn right_regular_group(&self) -> PermGroup {
        let (x, y) = self.generating_pair();
        PermGroup::new(self.order(), [self.right_multiplication(x), self.right_multiplication(y)]).unwrap()
    }

    /// `x -> frob^k(a^-1 x a)` as a point permutation.
    pub fn apply_action(&self, action: &AutomorphismAction, x: usize) -> usize {
        let f = &self.field;
        let a = action.matrix;
        let ai = a.inverse(f).expect("invertible");
        let y = ai.mul(&self.elements[x], f).mul(&a, f);
        let y = y.map_entries(|v| f.frobenius(v, action.frobenius));
        self.index[&y]
    }

    pub fn action_permutation(&self, action: &AutomorphismAction) -> Permutation {
        Permutation::from_images((0..self.order()).map(|x| self.apply_action(action, x)).collect()).unwrap()
    }

    /// The automorphism group 𝔄 ≅ PΓL(2,q) acting on the elements.
    pub fn automorphism_group_a(&self) -> AutomorphismGroupA {
        let f = &self.field;
        let mut pgl = BTreeSet::new();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    for d in f.elements() {
                        let m = Mat2::new(a, b, c, d);
                        if !m.det(f).is_zero() {
                            pgl.insert(m.normalized(f));
                        }
                    }
                }
            }
        }
        let mut actions = Vec::new();
        for k in 0..f.degree() {
            for &m in &pgl {
                actions.push(AutomorphismAction { matrix: m, frobenius: k });
            }
        }
        let perms: Vec<Permutation> = actions.iter().map(|a| self.action_permutation(a)).collect();
        let lookup = perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let group = PermGroup::from_elements_greedy(self.order(), perms.iter()).unwrap();
        AutomorphismGroupA { actions, perms, lookup, group }
    }
}

/// Automorphism of SL(2,q) given by conjugation with a matrix in GL(2,q)
/// (modulo scalars) followed by an entrywise Frobenius power.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AutomorphismAction {
    pub matrix: Mat2,
    pub frobenius: u32,
}

impl AutomorphismAction {
    pub fn identity() -> Self {
        AutomorphismAction { matrix: Mat2::identity(), frobenius: 0 }
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &AutomorphismAction, f: &Field) -> AutomorphismAction {
        let e = f.degree();
        let back = (e - self.frobenius) % e;
        let b = other.matrix.map_entries(|x| f.frobenius(x, back));
        AutomorphismAction { matrix: self.matrix.mul(&b, f).normalized(f), frobenius: (self.frobenius + other.frobenius) % e }
    }
}

/// 𝔄 as explicit permutations of SL(2,q), decodable back to actions.
#[derive(Clone, Debug)]
pub struct AutomorphismGroupA {
    actions: Vec<AutomorphismAction>,
    perms: Vec<Permutation>,
    lookup: HashMap<Permutation, usize>,
    group: PermGroup,
}

impl AutomorphismGroupA {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn actions(&self) -> &[AutomorphismAction] {
        &self.actions
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn decode(&self, perm: &Permutation) -> Option<AutomorphismAction> {
        self.lookup.get(perm).map(|&i| self.actions[i])
    }

    /// Elements of 𝔄 mapping `s` onto itself.
    pub fn stabilizer_elements(&self, s: &Subgroup) -> Vec<(AutomorphismAction, Permutation)> {
        self.actions
            .iter()
            .zip(&self.perms)
            .filter(|(_, p)| p.map_set(&s.elements) == s.elements)
            .map(|(a, p)| (*a, p.clone()))
            .collect()
    }

    /// The stabilizer 𝔄_S of a subgroup of order `q + 1`.
    pub fn stabilizer(&self, sl2: &Sl2, s: &Subgroup) -> Result<PermGroup, Sl2Error> {
        if s.order() != sl2.q() + 1 {
            return Err(Sl2Error::WrongOrder { expected: sl2.q() + 1, found: s.order() });
        }
        if !sl2.is_subgroup(&s.elements) {
            return Err(Sl2Error::NotSubgroup);
        }
        let elems = self.stabilizer_elements(s);
        Ok(PermGroup::from_elements_greedy(sl2.order(), elems.iter().map(|(_, p)| p)).unwrap())
    }
}
