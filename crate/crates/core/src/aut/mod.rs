//! Automorphisms and isomorphisms of incidence structures, and the group
//! computations on SL(2,q)-unitals built from them.

pub mod canon;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::design::parallelism::short_permutation;
use crate::design::search::SearchOptions;
use crate::design::{
    build_affine_unital, enumerate_parallelisms, search_block_collections, BlockCollection, ClosedUnital, DesignError,
    IncidenceStructure, Parallelism,
};
use crate::perm::{PermError, PermGroup, Permutation};
use crate::sl2::{AutomorphismAction, AutomorphismGroupA, Sl2, Sl2Error, Subgroup};
use canon::{canonical_labeling, Graph, DEFAULT_NODE_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("canonical labeling exceeded its budget of {0} nodes")]
    Budget(usize),
    #[error("permutation is not an automorphism of the structure")]
    NotAutomorphism,
    #[error("automorphism has an inversion component")]
    InversionComponent,
    #[error("automorphism does not factor through Aut(SL(2,q)) and right multiplication")]
    NotFactorizable,
    #[error("parallelism enumeration was capped")]
    Incomplete,
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] Sl2Error),
}

#[derive(Clone, Copy, Debug)]
pub struct AutOptions {
    pub budget: usize,
}

impl Default for AutOptions {
    fn default() -> Self {
        AutOptions { budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// Hex encoding of the relabelled structure.
    pub certificate: String,
    /// Point `p` receives canonical label `labeling(p)`.
    pub labeling: Permutation,
    pub automorphisms: Vec<Permutation>,
    pub nodes: usize,
}

/// Incidence graph: points first, then blocks. Points get colour
/// `point_colours[p]`; blocks are coloured after all points by (short, size).
fn incidence_graph(u: &IncidenceStructure, point_colours: Option<&[u32]>) -> (Graph, Vec<u32>, Vec<u32>) {
    let v = u.num_points();
    let mut g = Graph::new(v + u.num_blocks());
    for (i, b) in u.blocks().iter().enumerate() {
        for &p in b {
            g.add_edge(p, v + i);
        }
    }
    let mut colours: Vec<u32> = match point_colours {
        Some(c) => c.to_vec(),
        None => vec![0; v],
    };
    let top = colours.iter().max().map_or(0, |m| m + 1);
    let keys: Vec<(bool, usize)> = (0..u.num_blocks()).map(|i| (u.is_short(i), u.block(i).len())).collect();
    let mut distinct = keys.clone();
    distinct.sort_unstable();
    distinct.dedup();
    colours.extend(keys.iter().map(|k| top + distinct.binary_search(k).unwrap() as u32));
    let mut header: Vec<u32> = vec![v as u32, u.num_blocks() as u32];
    let mut point_sizes = BTreeMap::new();
    for &c in &colours[..v] {
        *point_sizes.entry(c).or_insert(0u32) += 1;
    }
    header.extend(point_sizes.into_iter().flat_map(|(c, n)| [c, n]));
    header.extend(distinct.iter().flat_map(|&(s, l)| [s as u32, l as u32]));
    (g, colours, header)
}

pub fn canonical_form_coloured(
    u: &IncidenceStructure,
    point_colours: Option<&[u32]>,
    opts: AutOptions,
) -> Result<CanonicalForm, AutError> {
    let v = u.num_points();
    let (g, colours, header) = incidence_graph(u, point_colours);
    let l = canonical_labeling(&g, &colours, opts.budget).map_err(|e| AutError::Budget(e.0))?;
    let mut bytes = Vec::with_capacity(4 * (header.len() + l.certificate.len()));
    for x in header.iter().chain(&l.certificate) {
        bytes.extend_from_slice(&x.to_be_bytes());
    }
    let labeling = Permutation::from_images(l.position[..v].iter().map(|&x| x as usize).collect())?;
    let automorphisms = l
        .automorphisms
        .iter()
        .map(|a| Permutation::from_images(a[..v].iter().map(|&x| x as usize).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CanonicalForm { certificate: hex::encode(bytes), labeling, automorphisms, nodes: l.nodes })
}

pub fn canonical_form(u: &IncidenceStructure, opts: AutOptions) -> Result<CanonicalForm, AutError> {
    canonical_form_coloured(u, None, opts)
}

pub fn automorphism_group(u: &IncidenceStructure, opts: AutOptions) -> Result<PermGroup, AutError> {
    let c = canonical_form(u, opts)?;
    Ok(PermGroup::new(u.num_points(), c.automorphisms)?)
}

/// A point bijection carrying the blocks of `a` onto those of `b`, or `None`.
pub fn are_isomorphic(a: &IncidenceStructure, b: &IncidenceStructure, opts: AutOptions) -> Result<Option<Permutation>, AutError> {
    if a.num_points() != b.num_points() || a.num_blocks() != b.num_blocks() || a.num_short() != b.num_short() {
        return Ok(None);
    }
    let (ca, cb) = (canonical_form(a, opts)?, canonical_form(b, opts)?);
    if ca.certificate != cb.certificate {
        return Ok(None);
    }
    let iso = ca.labeling.then(&cb.labeling.inverse());
    debug_assert!(is_isomorphism(a, b, &iso));
    Ok(Some(iso))
}

/// Whether `g` maps the blocks of `a` onto the blocks of `b`, short onto short.
pub fn is_isomorphism(a: &IncidenceStructure, b: &IncidenceStructure, g: &Permutation) -> bool {
    if g.degree() != a.num_points() || a.num_points() != b.num_points() || a.num_blocks() != b.num_blocks() {
        return false;
    }
    let index = b.block_index();
    let mut hit = vec![false; b.num_blocks()];
    for i in 0..a.num_blocks() {
        match index.get(&g.map_set(a.block(i))) {
            Some(&j) if !hit[j] && a.is_short(i) == b.is_short(j) => hit[j] = true,
            _ => return false,
        }
    }
    true
}

/// ψ = α·ρ_h with α ∈ 𝔄.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub action: AutomorphismAction,
    pub h: usize,
}

pub fn factor_automorphism(
    sl2: &Sl2,
    a: &AutomorphismGroupA,
    psi: &Permutation,
    u: &IncidenceStructure,
) -> Result<Factorization, AutError> {
    if !u.is_automorphism(psi) {
        return Err(AutError::NotAutomorphism);
    }
    let h = psi.apply(sl2.identity());
    let alpha = psi.then(&sl2.right_multiplication(sl2.inv(h)));
    let n = sl2.order();
    let multiplicative = |f: &dyn Fn(usize) -> usize| {
        (0..n).all(|x| (0..n).all(|y| f(sl2.mul(x, y)) == sl2.mul(f(x), f(y))))
    };
    if multiplicative(&|x| alpha.apply(x)) {
        return match a.decode(&alpha) {
            Some(action) => Ok(Factorization { action, h }),
            None => Err(AutError::NotFactorizable),
        };
    }
    if multiplicative(&|x| sl2.inv(alpha.apply(x))) {
        return Err(AutError::InversionComponent);
    }
    Err(AutError::NotFactorizable)
}

/// An automorphism of `u` carrying `p1` onto `p2`, searched over the orbit
/// of `p1` under `aut`.
pub fn are_parallelisms_equivalent(
    u: &IncidenceStructure,
    aut: &PermGroup,
    p1: &Parallelism,
    p2: &Parallelism,
) -> Option<Permutation> {
    let moves: HashMap<Permutation, Vec<usize>> =
        aut.generators().iter().map(|g| (g.clone(), short_permutation(u, g).expect("generator is an automorphism"))).collect();
    let (orbit, reps) = aut.orbit_with_transversal(p1.clone(), |p, g| p.permuted(&moves[g]));
    orbit.iter().position(|p| p == p2).map(|i| reps[i].clone())
}

/// Automorphisms of `u` that map `pi` onto itself.
pub fn parallelism_stabilizer(u: &IncidenceStructure, aut: &PermGroup, pi: &Parallelism) -> PermGroup {
    let moves: HashMap<Permutation, Vec<usize>> =
        aut.generators().iter().map(|g| (g.clone(), short_permutation(u, g).expect("generator is an automorphism"))).collect();
    aut.stabilizer(pi.clone(), |p, g| p.permuted(&moves[g]))
}

/// Setwise stabilizer of a block.
pub fn block_stabilizer(aut: &PermGroup, u: &IncidenceStructure, block: usize) -> PermGroup {
    aut.set_stabilizer(u.block(block))
}

/// Parallelisms of an affine SL(2,q)-unital invariant under right
/// multiplication.
pub fn r_invariant_parallelisms(sl2: &Sl2, u: &IncidenceStructure, cap: Option<usize>) -> Result<Vec<Parallelism>, AutError> {
    let all = enumerate_parallelisms(u, cap)?;
    if !all.exhaustive {
        return Err(AutError::Incomplete);
    }
    let r = sl2.right_regular_group();
    let moves: Vec<Vec<usize>> = r.generators().iter().map(|g| short_permutation(u, g).ok_or(AutError::NotAutomorphism)).collect::<Result<_, _>>()?;
    Ok(all.parallelisms.into_iter().filter(|p| moves.iter().all(|m| &p.permuted(m) == p)).collect())
}

/// Extension of a π-preserving automorphism of the affine part to the
/// closure, moving the class points along with their classes.
pub fn extend_to_closure(closed: &ClosedUnital, base: &IncidenceStructure, g: &Permutation) -> Option<Permutation> {
    let moves = short_permutation(base, g)?;
    let pi = closed.parallelism();
    let class = pi.class_map(base.num_short());
    let mut images = g.to_vec();
    for c in pi.classes() {
        let target = class[moves[c[0]]];
        if c.iter().any(|&b| class[moves[b]] != target) {
            return None;
        }
        images.push(closed.class_point(target));
    }
    Permutation::from_images(images).ok()
}

/// G_[c]: automorphisms fixing c and every block through c.
pub fn translations_with_center(aut: &PermGroup, u: &IncidenceStructure, c: usize) -> PermGroup {
    let mut g = aut.point_stabilizer(c);
    for b in u.blocks().iter().filter(|b| b.contains(&c)) {
        g = g.set_stabilizer(b);
    }
    g
}

/// Whether every orbit of `g` outside `fixed` has size |g|.
pub fn is_semiregular_off(g: &PermGroup, fixed: &[usize]) -> bool {
    let order = g.order();
    g.orbits().iter().filter(|o| !(o.len() == 1 && fixed.contains(&o[0]))).all(|o| o.len() as u128 == order)
}

/// Order-(q+1) subgroups up to conjugation in Aut(SL(2,q)).
pub fn subgroup_representatives(sl2: &Sl2, a: &AutomorphismGroupA) -> Vec<Subgroup> {
    let all = sl2.subgroups_order_qplus1();
    let mut seen: Vec<bool> = vec![false; all.len()];
    let index: HashMap<&Vec<usize>, usize> = all.iter().enumerate().map(|(i, s)| (&s.elements, i)).collect();
    let mut reps = Vec::new();
    for i in 0..all.len() {
        if seen[i] {
            continue;
        }
        reps.push(all[i].clone());
        let (orbit, _) = a.group().orbit_with_transversal(all[i].elements.clone(), |s, g| g.map_set(s));
        for s in orbit {
            seen[index[&s]] = true;
        }
    }
    reps
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitalClass {
    pub subgroup: Vec<usize>,
    pub collection: BlockCollection,
    pub certificate: String,
    #[serde(skip)]
    pub structure: IncidenceStructure,
}

/// Isomorphism classes of affine SL(2,q)-unitals, one representative each,
/// sorted by certificate. Subgroups conjugate under Aut(SL(2,q)) give
/// isomorphic unitals, so one subgroup per class is searched.
pub fn classify_affine_unitals(sl2: &Sl2, search: SearchOptions, opts: AutOptions) -> Result<Vec<UnitalClass>, AutError> {
    let a = sl2.automorphism_group_a();
    let mut classes: BTreeMap<String, UnitalClass> = BTreeMap::new();
    for s in subgroup_representatives(sl2, &a) {
        for collection in search_block_collections(sl2, &s, search)? {
            let structure = build_affine_unital(sl2, &s, &collection)?;
            let certificate = canonical_form(&structure, opts)?.certificate;
            classes.entry(certificate.clone()).or_insert(UnitalClass {
                subgroup: s.elements.clone(),
                collection,
                certificate,
                structure,
            });
        }
    }
    Ok(classes.into_values().collect())
}
