//! Structural checks on the ♭- and ♮-closures of every affine
//! SL(2,q)-unital of a given order.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::aut::{
    automorphism_group, block_stabilizer, classify_affine_unitals, extend_to_closure, factor_automorphism,
    is_semiregular_off, parallelism_stabilizer, r_invariant_parallelisms, translations_with_center, AutError, AutOptions,
    UnitalClass,
};
use crate::design::search::SearchOptions;
use crate::design::{closure, flat_parallelism, natural_parallelism, IncidenceStructure, Parallelism};
use crate::perm::PermGroup;
use crate::sl2::Sl2;

/// |PΓU(3,q)| = 2e·q³(q³+1)(q²−1).
pub fn classical_unital_aut_order(q: u128, e: u128) -> u128 {
    2 * e * q.pow(3) * (q.pow(3) + 1) * (q * q - 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureCheck {
    pub aut_order: u128,
    pub infinity_stabilizer_order: u128,
    /// Order of the automorphisms of the affine unital preserving π.
    pub preserving_order: u128,
    pub infinity_fixed: bool,
    pub corollary_holds: bool,
    /// |G_[c]| for the points c of [∞].
    pub infinity_translation_orders: Vec<u128>,
    /// G_[T] = R_T at every point T of [∞].
    pub translations_match_r: bool,
    pub semiregular_everywhere: bool,
    pub max_translation_order: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassCheck {
    pub certificate: String,
    pub aut_order: u128,
    pub bound_divisible: bool,
    pub generators_factor: bool,
    pub classical: bool,
    pub classical_order_matches: bool,
    pub r_invariant_is_flat_and_natural: bool,
    pub r_invariant_count: usize,
    pub flat: ClosureCheck,
    pub natural: ClosureCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub q: usize,
    pub classes: Vec<ClassCheck>,
    pub failures: Vec<String>,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn natural_sylow(sl2: &Sl2, block: &[usize]) -> Vec<usize> {
    let xi = sl2.inv(block[0]);
    let mut t: Vec<usize> = block.iter().map(|&y| sl2.mul(xi, y)).collect();
    t.sort_unstable();
    t
}

fn check_closure(
    sl2: &Sl2,
    u: &IncidenceStructure,
    aut_u: &PermGroup,
    pi: &Parallelism,
    natural: bool,
    opts: AutOptions,
) -> Result<ClosureCheck, AutError> {
    let q = sl2.q() as u128;
    let c = closure(u, pi)?;
    let s = c.structure();
    let aut = automorphism_group(s, opts)?;
    let stab = block_stabilizer(&aut, s, c.infinity_block());
    let preserving = parallelism_stabilizer(u, aut_u, pi);
    let mut orders = Vec::new();
    let mut semiregular = true;
    let mut max_order = 0;
    let mut match_r = true;
    for p in 0..s.num_points() {
        let g = translations_with_center(&aut, s, p);
        semiregular &= is_semiregular_off(&g, &[p]);
        max_order = max_order.max(g.order());
        if c.infinity_points().contains(&p) {
            orders.push(g.order());
            if natural {
                let class = &pi.classes()[p - c.affine_points()];
                let t = natural_sylow(sl2, u.short_block(class[0]));
                let gens = t
                    .iter()
                    .map(|&h| extend_to_closure(&c, u, &sl2.right_multiplication(h)).ok_or(AutError::NotAutomorphism))
                    .collect::<Result<Vec<_>, _>>()?;
                let r_t = PermGroup::new(s.num_points(), gens)?;
                match_r &= r_t.order() == g.order() && r_t.is_subgroup_of(&g);
            }
        }
    }
    Ok(ClosureCheck {
        aut_order: aut.order(),
        infinity_stabilizer_order: stab.order(),
        preserving_order: preserving.order(),
        infinity_fixed: stab.order() == aut.order(),
        corollary_holds: stab.order() == preserving.order(),
        infinity_translation_orders: orders,
        translations_match_r: natural && match_r && max_order <= q,
        semiregular_everywhere: semiregular,
        max_translation_order: max_order,
    })
}

pub fn check_class(sl2: &Sl2, class: &UnitalClass, cap: Option<usize>, opts: AutOptions) -> Result<ClassCheck, AutError> {
    let u = &class.structure;
    let a = sl2.automorphism_group_a();
    let s = sl2.subgroup(class.subgroup.clone())?;
    let aut_u = automorphism_group(u, opts)?;
    let bound = a.stabilizer(sl2, &s)?.order() * sl2.order() as u128;
    let generators_factor = aut_u.generators().iter().all(|g| factor_automorphism(sl2, &a, g, u).is_ok());
    let (flat, nat) = (flat_parallelism(sl2), natural_parallelism(sl2));
    let invariant = r_invariant_parallelisms(sl2, u, cap)?;
    let expected: BTreeSet<&Parallelism> = [&flat, &nat].into_iter().collect();
    let found: BTreeSet<&Parallelism> = invariant.iter().collect();
    let flat_check = check_closure(sl2, u, &aut_u, &flat, false, opts)?;
    let nat_check = check_closure(sl2, u, &aut_u, &nat, true, opts)?;
    let classical = !nat_check.infinity_fixed;
    let e = sl2.field().degree() as u128;
    Ok(ClassCheck {
        certificate: class.certificate.clone(),
        aut_order: aut_u.order(),
        bound_divisible: bound % aut_u.order() == 0,
        generators_factor,
        classical,
        classical_order_matches: !classical || nat_check.aut_order == classical_unital_aut_order(sl2.q() as u128, e),
        r_invariant_is_flat_and_natural: found == expected && invariant.len() == 2,
        r_invariant_count: invariant.len(),
        flat: flat_check,
        natural: nat_check,
    })
}

pub fn run_theorems(sl2: &Sl2, cap: Option<usize>, opts: AutOptions) -> Result<TheoremReport, AutError> {
    let classes = classify_affine_unitals(sl2, SearchOptions::default(), opts)?;
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    for (i, class) in classes.iter().enumerate() {
        let c = check_class(sl2, class, cap, opts)?;
        let mut fail = |ok: bool, what: &str| {
            if !ok {
                failures.push(format!("class {i}: {what}"));
            }
        };
        fail(c.bound_divisible, "|Aut(U)| does not divide |A_S|·|SL(2,q)|");
        fail(c.generators_factor, "an automorphism does not factor as α·ρ_h");
        fail(c.r_invariant_is_flat_and_natural, "R-invariant parallelisms differ from {♭, ♮}");
        fail(c.flat.infinity_fixed, "Aut(U^♭) moves [∞]");
        fail(c.classical_order_matches, "classical closure has the wrong group order");
        fail(c.flat.corollary_holds && c.natural.corollary_holds, "[∞]-stabilizer differs from Aut_π(U)");
        fail(c.natural.translations_match_r, "a point T of [∞] has G_[T] ≠ R_T");
        fail(
            c.natural.infinity_translation_orders.iter().all(|&o| o == sl2.q() as u128),
            "a point of [∞] in U^♮ is not a translation center",
        );
        fail(c.flat.semiregular_everywhere && c.natural.semiregular_everywhere, "a translation group is not semiregular");
        fail(
            c.flat.max_translation_order <= sl2.q() as u128 && c.natural.max_translation_order <= sl2.q() as u128,
            "a translation group exceeds q",
        );
        checks.push(c);
    }
    if checks.iter().filter(|c| c.classical).count() > 1 {
        failures.push("more than one classical class".into());
    }
    Ok(TheoremReport { q: sl2.q(), classes: checks, failures })
}
