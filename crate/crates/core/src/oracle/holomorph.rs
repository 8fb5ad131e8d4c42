use std::ops::ControlFlow;

use crate::group::GroupShape;

use super::aut::for_each_automorphism;
use super::finite::FiniteGroup;
use super::perm::{Perm, PermGroup};
use super::OracleError;

/// Default ceiling on `|Hol(G)|` for literal closure.
pub const DEFAULT_HOL_LIMIT: u128 = 1 << 16;
/// Default ceiling on `|G|` for scans of the full symmetric group.
pub const DEFAULT_SYM_LIMIT: usize = 8;

/// The right regular image `x -> x + h`.
pub fn rho(g: &FiniteGroup, h: usize) -> Perm {
    Perm::from_images_unchecked((0..g.len()).map(|x| g.add(x, h) as u16).collect())
}

/// A generating set of `Aut(G)` read off the stream: for each generator position `k` and each
/// admissible image of `x_k`, the first automorphism fixing `x_1..x_{k-1}`. These are coset
/// representatives along the pointwise stabilizer chain, so together they generate the group.
pub(crate) struct AutData {
    pub order: u64,
    pub chain: Vec<Perm>,
}

pub(crate) fn aut_data(g: &FiniteGroup, limit: u64) -> Result<AutData, OracleError> {
    let gens: Vec<usize> = g.generators().iter().map(|&x| x as usize).collect();
    let mut seen = std::collections::HashSet::new();
    let mut chain = Vec::new();
    let order = for_each_automorphism(g, limit, |t| {
        if let Some(k) = gens.iter().position(|&x| t[x] as usize != x) {
            if seen.insert((k, t[gens[k]])) {
                chain.push(Perm::from_images_unchecked(t.to_vec()));
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(AutData { order, chain })
}

/// Generators of `Hol(G)`: `rho` of the group generators followed by a generating set of `Aut(G)`.
pub fn holomorph_generators(g: &FiniteGroup, aut_limit: u64) -> Result<Vec<Perm>, OracleError> {
    let mut gens: Vec<Perm> = g.generators().iter().map(|&x| rho(g, x as usize)).collect();
    gens.extend(aut_data(g, aut_limit)?.chain);
    Ok(gens)
}

pub(crate) fn holomorph_of(
    g: &FiniteGroup,
    aut: &AutData,
    hol_limit: u128,
) -> Result<PermGroup, OracleError> {
    let order = g.len() as u128 * aut.order as u128;
    if order > hol_limit {
        return Err(OracleError::HolBound {
            order,
            limit: hol_limit,
        });
    }
    let mut gens: Vec<Perm> = g.generators().iter().map(|&x| rho(g, x as usize)).collect();
    gens.extend(aut.chain.iter().cloned());
    let hol = PermGroup::generated_by(g.len(), gens, order as usize)?;
    if hol.order() as u128 != order {
        return Err(OracleError::Inconsistent(format!(
            "|Hol| = {} but |G||Aut| = {order}",
            hol.order()
        )));
    }
    Ok(hol)
}

/// `Hol(G) = Aut(G) rho(G)` as a permutation group on the element indices of `G`.
pub fn enumerate_holomorph(
    shape: &GroupShape,
    max_order: usize,
    hol_limit: u128,
) -> Result<PermGroup, OracleError> {
    let g = FiniteGroup::new(shape, max_order)?;
    let aut_limit = u64::try_from(hol_limit / g.len() as u128).unwrap_or(u64::MAX);
    let aut = aut_data(&g, aut_limit).map_err(|e| match e {
        OracleError::AutBound { .. } => OracleError::HolBound {
            order: g.len() as u128 * (aut_limit as u128 + 1),
            limit: hol_limit,
        },
        e => e,
    })?;
    holomorph_of(&g, &aut, hol_limit)
}

/// Result of scanning every permutation of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizerReport {
    pub group_order: usize,
    pub hol_order: usize,
    /// `|N_S(G)(Hol(G))|`.
    pub normalizer_order: usize,
    pub t_order: usize,
    /// Every element of the normalizer squares into `Hol(G)`.
    pub elementary_abelian: bool,
    /// The scan found exactly `Hol(G)` as the normalizer of `rho(G)`.
    pub hol_is_rho_normalizer: bool,
    /// `|N_S(G)(N)|` for each extra group supplied to the scan.
    pub member_normalizer_orders: Vec<usize>,
    /// Whether `N_S(G)(N) = Hol(G)` for each extra group.
    pub member_normalizer_is_hol: Vec<bool>,
}

fn normalizes(t: &Perm, t_inv: &Perm, group: &PermGroup) -> bool {
    group
        .generators()
        .iter()
        .all(|s| group.contains(&t_inv.then(s).then(t)))
}

/// Exact `N_S(G)(Hol(G))` by scanning all `|G|!` permutations.
pub fn full_symmetric_normalizer(
    shape: &GroupShape,
    sym_limit: usize,
    hol_limit: u128,
) -> Result<NormalizerReport, OracleError> {
    let g = FiniteGroup::new(shape, sym_limit.max(1)).map_err(|_| OracleError::SymBound {
        order: shape.torsion_order() as usize,
        limit: sym_limit,
    })?;
    let aut = aut_data(&g, u64::MAX)?;
    let hol = holomorph_of(&g, &aut, hol_limit)?;
    symmetric_scan(&g, &hol, &[], sym_limit)
}

pub(crate) fn symmetric_scan(
    g: &FiniteGroup,
    hol: &PermGroup,
    members: &[&PermGroup],
    sym_limit: usize,
) -> Result<NormalizerReport, OracleError> {
    let n = g.len();
    if n > sym_limit {
        return Err(OracleError::SymBound {
            order: n,
            limit: sym_limit,
        });
    }
    let regular = PermGroup::generated_by(
        n,
        g.generators().iter().map(|&x| rho(g, x as usize)).collect(),
        n,
    )?;
    let mut normalizer_order = 0usize;
    let mut elementary_abelian = true;
    let mut rho_normalizer = 0usize;
    let mut rho_normalizer_in_hol = true;
    let mut member_orders = vec![0usize; members.len()];
    let mut member_in_hol = vec![true; members.len()];
    let mut images: Vec<u16> = (0..n as u16).collect();
    loop {
        let t = Perm::from_images_unchecked(images.clone());
        let t_inv = t.inverse();
        let in_hol = hol.contains(&t);
        if normalizes(&t, &t_inv, hol) {
            normalizer_order += 1;
            if !hol.contains(&t.then(&t)) {
                elementary_abelian = false;
            }
        }
        if normalizes(&t, &t_inv, &regular) {
            rho_normalizer += 1;
            rho_normalizer_in_hol &= in_hol;
        }
        for (k, m) in members.iter().enumerate() {
            if normalizes(&t, &t_inv, m) {
                member_orders[k] += 1;
                member_in_hol[k] &= in_hol;
            }
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    let member_normalizer_is_hol = member_orders
        .iter()
        .zip(&member_in_hol)
        .map(|(&o, &inside)| inside && o == hol.order())
        .collect();
    Ok(NormalizerReport {
        group_order: n,
        hol_order: hol.order(),
        normalizer_order,
        t_order: normalizer_order / hol.order(),
        elementary_abelian,
        hol_is_rho_normalizer: rho_normalizer_in_hol && rho_normalizer == hol.order(),
        member_normalizer_orders: member_orders,
        member_normalizer_is_hol,
    })
}

fn next_permutation(v: &mut [u16]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
