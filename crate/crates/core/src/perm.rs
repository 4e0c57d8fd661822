//! Permutations and permutation groups with a stabilizer chain.
//!
//! Permutations act on the right: `g.apply(x)` is the image of `x`, and
//! `g.then(h)` applies `g` first and `h` second.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image list is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("permutation degree {found} does not match group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Permutation(images.into_iter().map(|x| x as u32).collect()))
    }

    /// Builds a permutation from disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if x >= n || y >= n {
                    return Err(PermError::NotBijection(n));
                }
                images[x] = y;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&x| x as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.images().collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    /// `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    pub fn pow(&self, k: usize) -> Permutation {
        (0..k).fold(Permutation::identity(self.degree()), |acc, _| acc.then(self))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().position(|(i, &x)| i as u32 != x)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.0[x] as usize == x
    }

    /// Sorted image of a point set.
    pub fn map_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&x| self.apply(x)).collect();
        out.sort_unstable();
        out
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.fixes(start) {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Restriction to `0..n`, provided that range is invariant.
    pub fn restrict(&self, n: usize) -> Option<Permutation> {
        let img: Vec<u32> = self.0[..n].to_vec();
        img.iter().all(|&x| (x as usize) < n).then_some(Permutation(img))
    }

    /// Extension to `0..n` fixing the new points.
    pub fn extend(&self, n: usize) -> Permutation {
        let mut img = self.0.clone();
        img.extend(self.0.len() as u32..n as u32);
        Permutation(img)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Permutation::identity(degree));
        Level { base, gens: Vec::new(), orbit: vec![base], transversal }
    }
}

/// Permutation group given by generators, with a stabilizer chain built by
/// the incremental Schreier–Sims method.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), levels: Vec::new() }
    }

    pub fn new(degree: usize, generators: impl IntoIterator<Item = Permutation>) -> Result<Self, PermError> {
        let mut g = Self::trivial(degree);
        for p in generators {
            g.add_generator(p)?;
        }
        Ok(g)
    }

    /// Builds the group generated by `elements`, keeping only those
    /// elements that enlarge the group generated so far.
    pub fn from_elements_greedy<'a>(degree: usize, elements: impl IntoIterator<Item = &'a Permutation>) -> Result<Self, PermError> {
        let mut g = Self::trivial(degree);
        for p in elements {
            if !g.contains(p) {
                g.add_generator(p.clone())?;
            }
        }
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn add_generator(&mut self, g: Permutation) -> Result<(), PermError> {
        if g.degree() != self.degree {
            return Err(PermError::DegreeMismatch { expected: self.degree, found: g.degree() });
        }
        if g.is_identity() {
            return Ok(());
        }
        self.generators.push(g.clone());
        self.insert(0, g);
        Ok(())
    }

    fn sift(&self, from: usize, g: &Permutation) -> Permutation {
        let mut h = g.clone();
        for level in &self.levels[from..] {
            let b = h.apply(level.base);
            match &level.transversal[b] {
                Some(u) => h = h.then(&u.inverse()),
                None => return h,
            }
        }
        h
    }

    fn contains_from(&self, k: usize, g: &Permutation) -> bool {
        self.sift(k, g).is_identity()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.contains_from(0, g)
    }

    fn insert(&mut self, k: usize, g: Permutation) {
        if self.contains_from(k, &g) {
            return;
        }
        if k == self.levels.len() {
            let base = g.first_moved().expect("non-identity element");
            self.levels.push(Level::new(base, self.degree));
        }
        self.levels[k].gens.push(g);
        let new_gen = self.levels[k].gens.len() - 1;
        let mut work: Vec<(usize, usize)> = self.levels[k].orbit.iter().map(|&b| (b, new_gen)).collect();
        while let Some((b, s)) = work.pop() {
            let level = &self.levels[k];
            let gen = &level.gens[s];
            let c = gen.apply(b);
            let ubs = level.transversal[b].as_ref().unwrap().then(gen);
            match &level.transversal[c] {
                None => {
                    let level = &mut self.levels[k];
                    level.transversal[c] = Some(ubs);
                    level.orbit.push(c);
                    work.extend((0..level.gens.len()).map(|t| (c, t)));
                }
                Some(uc) => {
                    let schreier = ubs.then(&uc.inverse());
                    if !schreier.is_identity() {
                        self.insert(k + 1, schreier);
                    }
                }
            }
        }
    }

    /// All elements, in a deterministic order. Intended for small groups.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let reps: Vec<&Permutation> = level.orbit.iter().map(|&b| level.transversal[b].as_ref().unwrap()).collect();
            out = out.iter().flat_map(|x| reps.iter().map(move |u| x.then(u))).collect();
        }
        out
    }

    /// Orbits on `0..degree`, each sorted, listed by smallest element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    /// Orbit of `start` under an arbitrary right action, together with a
    /// group element carrying `start` to each orbit member.
    pub fn orbit_with_transversal<T, F>(&self, start: T, act: F) -> (Vec<T>, Vec<Permutation>)
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &Permutation) -> T,
    {
        let mut orbit = vec![start.clone()];
        let mut reps = vec![Permutation::identity(self.degree)];
        let mut index = HashMap::from([(start, 0usize)]);
        let mut i = 0;
        while i < orbit.len() {
            for g in &self.generators {
                let image = act(&orbit[i], g);
                if !index.contains_key(&image) {
                    index.insert(image.clone(), orbit.len());
                    reps.push(reps[i].then(g));
                    orbit.push(image);
                }
            }
            i += 1;
        }
        (orbit, reps)
    }

    /// Stabilizer of `start` under a right action, by Schreier generators.
    pub fn stabilizer<T, F>(&self, start: T, act: F) -> PermGroup
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &Permutation) -> T,
    {
        let (orbit, reps) = self.orbit_with_transversal(start, &act);
        let target = self.order() / orbit.len() as u128;
        let index: HashMap<&T, usize> = orbit.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut stab = PermGroup::trivial(self.degree);
        'outer: for (i, t) in orbit.iter().enumerate() {
            for g in &self.generators {
                if stab.order() == target {
                    break 'outer;
                }
                let j = index[&act(t, g)];
                let s = reps[i].then(g).then(&reps[j].inverse());
                if !stab.contains(&s) {
                    stab.add_generator(s).expect("degree matches");
                }
            }
        }
        stab
    }

    pub fn point_stabilizer(&self, point: usize) -> PermGroup {
        self.stabilizer(point, |&x, g| g.apply(x))
    }

    /// Setwise stabilizer of a point set.
    pub fn set_stabilizer(&self, set: &[usize]) -> PermGroup {
        let mut start = set.to_vec();
        start.sort_unstable();
        self.stabilizer(start, |s, g| g.map_set(s))
    }

    pub fn derived_subgroup(&self) -> PermGroup {
        let mut derived = PermGroup::trivial(self.degree);
        let mut queue = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.commutator(b);
                if !derived.contains(&c) {
                    derived.add_generator(c.clone()).expect("degree matches");
                    queue.push(c);
                }
            }
        }
        while let Some(x) = queue.pop() {
            for g in &self.generators {
                let y = x.conjugate_by(g);
                if !derived.contains(&y) {
                    derived.add_generator(y.clone()).expect("degree matches");
                    queue.push(y);
                }
            }
        }
        derived
    }

    /// Orders of the derived series, ending at its stable term.
    pub fn derived_series_orders(&self) -> Vec<u128> {
        let mut orders = vec![self.order()];
        let mut current = self.clone();
        loop {
            let next = current.derived_subgroup();
            if next.order() == current.order() {
                return orders;
            }
            orders.push(next.order());
            current = next;
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series_orders().last() == Some(&1)
    }

    /// Histogram of element orders. Enumerates the group.
    pub fn element_order_profile(&self) -> std::collections::BTreeMap<u64, usize> {
        let mut profile = std::collections::BTreeMap::new();
        for g in self.elements() {
            *profile.entry(g.order()).or_insert(0) += 1;
        }
        profile
    }

    /// Is `self` a subgroup of `other`?
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }
}

/// Orbits of the group generated by `gens` on `0..n`.
pub fn orbits_of(n: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for g in gens {
        for x in 0..n {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for x in 0..n {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym_gens(n: usize) -> Vec<Permutation> {
        let cycle: Vec<usize> = (1..n).chain([0]).collect();
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        vec![Permutation::from_images(cycle).unwrap(), Permutation::from_images(swap).unwrap()]
    }

    #[test]
    fn symmetric_group_orders() {
        for (n, fact) in [(2, 2u128), (3, 6), (4, 24), (5, 120), (7, 5040), (10, 3628800)] {
            assert_eq!(PermGroup::new(n, sym_gens(n)).unwrap().order(), fact);
        }
    }

    #[test]
    fn alternating_and_cyclic() {
        let three_cycle = |a, b, c| Permutation::from_cycles(6, &[vec![a, b, c]]).unwrap();
        let a6 = PermGroup::new(6, (0..4).map(|i| three_cycle(i, i + 1, i + 2))).unwrap();
        assert_eq!(a6.order(), 360);
        assert!(!a6.is_solvable());
        let c = Permutation::from_cycles(6, &[vec![0, 1, 2, 3, 4, 5]]).unwrap();
        let c6 = PermGroup::new(6, [c]).unwrap();
        assert_eq!(c6.order(), 6);
        assert!(c6.is_solvable());
        assert_eq!(c6.derived_series_orders(), vec![6, 1]);
    }

    #[test]
    fn s4_is_solvable_with_profile() {
        let s4 = PermGroup::new(4, sym_gens(4)).unwrap();
        assert!(s4.is_solvable());
        assert_eq!(s4.derived_series_orders(), vec![24, 12, 4, 1]);
        let profile: Vec<(u64, usize)> = s4.element_order_profile().into_iter().collect();
        assert_eq!(profile, vec![(1, 1), (2, 9), (3, 8), (4, 6)]);
        assert_eq!(s4.elements().len(), 24);
    }

    #[test]
    fn stabilizers_by_orbit() {
        let s5 = PermGroup::new(5, sym_gens(5)).unwrap();
        assert_eq!(s5.point_stabilizer(3).order(), 24);
        assert_eq!(s5.set_stabilizer(&[0, 2]).order(), 12);
        assert!(s5.set_stabilizer(&[0, 2]).is_subgroup_of(&s5));
    }

    #[test]
    fn membership_and_errors() {
        let c = Permutation::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
        let g = PermGroup::new(5, [c.clone()]).unwrap();
        assert!(g.contains(&c.inverse()));
        assert!(!g.contains(&Permutation::from_cycles(5, &[vec![0, 1]]).unwrap()));
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(PermGroup::new(4, [c]).is_err());
    }

    #[test]
    fn cycle_roundtrip() {
        let p = Permutation::from_cycles(8, &[vec![0, 5, 2], vec![3, 7]]).unwrap();
        assert_eq!(Permutation::from_cycles(8, &p.cycles()).unwrap(), p);
        assert_eq!(p.order(), 6);
        assert_eq!(format!("{p:?}"), "(0,5,2)(3,7)");
    }
}
