use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::ops::ControlFlow;

use crate::group::GroupShape;

use super::aut::{for_each_automorphism, DEFAULT_AUT_LIMIT};
use super::finite::FiniteGroup;
use super::holomorph::{
    aut_data, holomorph_of, rho, symmetric_scan, AutData, DEFAULT_HOL_LIMIT, DEFAULT_SYM_LIMIT,
};
use super::perm::{Perm, PermGroup};
use super::OracleError;

/// Bounds for oracle runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest `|G|` accepted.
    pub max_order: usize,
    /// Largest `|Hol(G)|` for which the holomorph is closed literally.
    pub hol_limit: u128,
    /// Largest `|Aut(G)|` that will be streamed.
    pub aut_limit: u64,
    /// Largest `|G|` for scans of the full symmetric group.
    pub sym_limit: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_order: 64,
            hol_limit: DEFAULT_HOL_LIMIT,
            aut_limit: DEFAULT_AUT_LIMIT,
            sym_limit: DEFAULT_SYM_LIMIT,
        }
    }
}

/// A regular subgroup `N` of `S(G)`, with `nu(g)` the member sending `0` to `g`.
#[derive(Clone, Debug)]
pub struct RegularSubgroup {
    nu: Vec<Perm>,
    group: PermGroup,
}

impl RegularSubgroup {
    fn from_group(group: PermGroup) -> Self {
        let mut nu = vec![Perm::identity(group.degree()); group.degree()];
        for e in group.elements() {
            nu[e.apply(0)] = e.clone();
        }
        RegularSubgroup { nu, group }
    }

    pub fn nu(&self, g: usize) -> &Perm {
        &self.nu[g]
    }

    /// Members indexed by the image of `0`.
    pub fn members(&self) -> &[Perm] {
        &self.nu
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.nu.len()
    }

    fn key(&self) -> Vec<u16> {
        self.nu
            .iter()
            .flat_map(|p| p.images().iter().copied())
            .collect()
    }

    /// `t^{-1} nu(g) t` lies in `N` for every `g`.
    fn normalized_by(&self, t: &Perm) -> bool {
        let t_inv = t.inverse();
        self.nu.iter().all(|p| {
            let c = t_inv.then(p).then(t);
            c == self.nu[c.apply(0)]
        })
    }

    fn is_closed(&self) -> bool {
        self.nu.iter().all(|a| {
            self.nu
                .iter()
                .all(|b| a.then(b) == self.nu[b.apply(a.apply(0))])
        })
    }
}

/// `K(G)`: the abelian regular subgroups normal in `Hol(G)`, choosing the literal or
/// equivariant search by size.
pub fn enumerate_k(
    shape: &GroupShape,
    cfg: &OracleConfig,
) -> Result<Vec<RegularSubgroup>, OracleError> {
    let mut all = enumerate_normal_regular(shape, cfg)?;
    all.retain(|k| k.group().is_abelian());
    Ok(all)
}

/// Every regular subgroup normal in `Hol(G)`, abelian or not.
pub fn enumerate_normal_regular(
    shape: &GroupShape,
    cfg: &OracleConfig,
) -> Result<Vec<RegularSubgroup>, OracleError> {
    let g = FiniteGroup::new(shape, cfg.max_order)?;
    let aut = aut_data(&g, cfg.aut_limit)?;
    enumerate_k_with(&g, &aut, cfg).map(|(k, _)| k)
}

fn enumerate_k_with(
    g: &FiniteGroup,
    aut: &AutData,
    cfg: &OracleConfig,
) -> Result<(Vec<RegularSubgroup>, SearchPath), OracleError> {
    if g.len() == 1 {
        let trivial = PermGroup::generated_by(1, Vec::new(), 1)?;
        return Ok((
            vec![RegularSubgroup::from_group(trivial)],
            SearchPath::Literal,
        ));
    }
    if g.len() as u128 * aut.order as u128 <= cfg.hol_limit {
        let hol = holomorph_of(g, aut, cfg.hol_limit)?;
        Ok((literal_search(g, &hol)?, SearchPath::Literal))
    } else {
        Ok((
            equivariant_search(g, aut, cfg.aut_limit)?,
            SearchPath::Equivariant,
        ))
    }
}

/// Literal search inside the closed holomorph: normal regular subgroups are unions of
/// conjugacy classes of fixed-point-free elements, so they are reached by adjoining
/// such classes one at a time. Returns abelian and non-abelian subgroups alike.
pub fn enumerate_k_literal(
    shape: &GroupShape,
    cfg: &OracleConfig,
) -> Result<Vec<RegularSubgroup>, OracleError> {
    let g = FiniteGroup::new(shape, cfg.max_order)?;
    let aut = aut_data(&g, cfg.aut_limit)?;
    let hol = holomorph_of(&g, &aut, cfg.hol_limit)?;
    literal_search(&g, &hol)
}

/// Search over equivariant maps `G -> Aut(G)`, never closing the holomorph.
/// Returns abelian and non-abelian subgroups alike.
pub fn enumerate_k_equivariant(
    shape: &GroupShape,
    cfg: &OracleConfig,
) -> Result<Vec<RegularSubgroup>, OracleError> {
    let g = FiniteGroup::new(shape, cfg.max_order)?;
    let aut = aut_data(&g, cfg.aut_limit)?;
    equivariant_search(&g, &aut, cfg.aut_limit)
}

fn literal_search(g: &FiniteGroup, hol: &PermGroup) -> Result<Vec<RegularSubgroup>, OracleError> {
    let n = g.len();
    let elems = hol.elements();
    let mut class_of = vec![usize::MAX; elems.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..elems.len() {
        if class_of[start] != usize::MAX || !elems[start].is_derangement() {
            continue;
        }
        let id = classes.len();
        let mut class = vec![start];
        class_of[start] = id;
        let mut head = 0;
        while head < class.len() {
            let x = &elems[class[head]];
            head += 1;
            for t in hol.generators() {
                let y = hol
                    .position(&x.conjugate_by(t))
                    .expect("holomorph is closed");
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    class.push(y);
                }
            }
        }
        classes.push(class);
    }
    let eligible: Vec<&Vec<usize>> = classes.iter().filter(|c| c.len() < n).collect();

    let mut found: Vec<RegularSubgroup> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let trivial = PermGroup::generated_by(n, Vec::new(), n)?;
    let mut frontier = VecDeque::from([trivial]);
    while let Some(sub) = frontier.pop_front() {
        for class in &eligible {
            if sub.contains(&elems[class[0]]) {
                continue;
            }
            let mut next = sub.clone();
            let mut fits = true;
            for &c in class.iter() {
                if next.extend(elems[c].clone(), n).is_err() {
                    fits = false;
                    break;
                }
            }
            if !fits || !n.is_multiple_of(next.order()) || !next.is_semiregular() {
                continue;
            }
            let mut key: Vec<usize> = next
                .elements()
                .iter()
                .map(|e| hol.position(e).expect("inside the holomorph"))
                .collect();
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            if next.order() == n {
                if !next.is_regular() || !hol.generators().iter().all(|t| next.is_normalized_by(t))
                {
                    return Err(OracleError::Inconsistent(
                        "class union is not a normal regular subgroup".into(),
                    ));
                }
                found.push(RegularSubgroup::from_group(next));
            } else {
                frontier.push_back(next);
            }
        }
    }
    if !found
        .iter()
        .any(|k| k.members().iter().enumerate().all(|(h, p)| *p == rho(g, h)))
    {
        return Err(OracleError::Inconsistent("rho(G) missing from K(G)".into()));
    }
    found.sort_by_key(RegularSubgroup::key);
    Ok(found)
}

struct Orbit {
    rep: usize,
    points: Vec<usize>,
}

fn equivariant_search(
    g: &FiniteGroup,
    aut: &AutData,
    aut_limit: u64,
) -> Result<Vec<RegularSubgroup>, OracleError> {
    let n = g.len();
    let id = Perm::identity(n);
    // orbits of Aut(G) with transversal elements alpha[x]: rep -> x
    let mut alpha: Vec<Option<Perm>> = vec![None; n];
    let mut orbits: Vec<Orbit> = Vec::new();
    for rep in 0..n {
        if alpha[rep].is_some() {
            continue;
        }
        alpha[rep] = Some(id.clone());
        let mut points = vec![rep];
        let mut head = 0;
        while head < points.len() {
            let y = points[head];
            head += 1;
            for s in &aut.chain {
                let z = s.apply(y);
                if alpha[z].is_none() {
                    alpha[z] = Some(alpha[y].as_ref().expect("visited").then(s));
                    points.push(z);
                }
            }
        }
        orbits.push(Orbit { rep, points });
    }
    let alpha: Vec<Perm> = alpha
        .into_iter()
        .map(|a| a.expect("every point lies in an orbit"))
        .collect();
    let alpha_inv: Vec<Perm> = alpha.iter().map(Perm::inverse).collect();

    // Schreier generators of each point stabilizer
    let stabilizers: Vec<Vec<Perm>> = orbits
        .iter()
        .map(|o| {
            let mut gens: BTreeSet<Perm> = BTreeSet::new();
            for &y in &o.points {
                for s in &aut.chain {
                    let z = s.apply(y);
                    let sg = alpha[y].then(s).then(&alpha_inv[z]);
                    if !sg.is_identity() {
                        gens.insert(sg);
                    }
                }
            }
            gens.into_iter().collect()
        })
        .collect();

    // candidates for gamma(rep): automorphisms centralizing Stab(rep) with nu(rep) fixed-point-free
    let mut candidates: Vec<Vec<Perm>> = vec![Vec::new(); orbits.len()];
    for_each_automorphism(g, aut_limit, |t| {
        for (k, o) in orbits.iter().enumerate() {
            let r = o.rep;
            if r == 0 {
                continue;
            }
            if (0..n).any(|x| g.add(t[x] as usize, r) == x) {
                continue;
            }
            let commutes = stabilizers[k]
                .iter()
                .all(|s| (0..n).all(|x| t[s.apply(x)] as usize == s.apply(t[x] as usize)));
            if commutes {
                candidates[k].push(Perm::from_images_unchecked(t.to_vec()));
            }
        }
        ControlFlow::Continue(())
    })?;

    let mut order: Vec<usize> = (0..orbits.len()).filter(|&k| orbits[k].rep != 0).collect();
    order.sort_by_key(|&k| (g.order(orbits[k].rep), orbits[k].rep));

    let mut state = Backtrack {
        g,
        gamma: vec![None; n],
        orbits: &orbits,
        alpha: &alpha,
        alpha_inv: &alpha_inv,
        candidates: &candidates,
        order: &order,
        leaves: Vec::new(),
    };
    state.gamma[0] = Some(id);
    state.run(0);

    let rho_gens: Vec<Perm> = g.generators().iter().map(|&x| rho(g, x as usize)).collect();
    let mut found = Vec::new();
    for gamma in std::mem::take(&mut state.leaves) {
        let nu: Vec<Perm> = gamma
            .iter()
            .enumerate()
            .map(|(h, c)| c.then(&rho(g, h)))
            .collect();
        let sub = RegularSubgroup {
            nu: nu.clone(),
            group: PermGroup::from_closed_elements(n, nu),
        };
        if !sub.is_closed()
            || !rho_gens
                .iter()
                .chain(&aut.chain)
                .all(|t| sub.normalized_by(t))
        {
            return Err(OracleError::Inconsistent(
                "equivariant candidate is not normal and regular".into(),
            ));
        }
        found.push(sub);
    }
    found.sort_by_key(RegularSubgroup::key);
    Ok(found)
}

struct Backtrack<'a> {
    g: &'a FiniteGroup,
    gamma: Vec<Option<Perm>>,
    orbits: &'a [Orbit],
    alpha: &'a [Perm],
    alpha_inv: &'a [Perm],
    candidates: &'a [Vec<Perm>],
    order: &'a [usize],
    leaves: Vec<Vec<Perm>>,
}

impl Backtrack<'_> {
    fn run(&mut self, level: usize) {
        if level == self.order.len() {
            self.leaves.push(
                self.gamma
                    .iter()
                    .map(|c| c.clone().expect("complete"))
                    .collect(),
            );
            return;
        }
        let k = self.order[level];
        let points = &self.orbits[k].points;
        for c in &self.candidates[k] {
            for &x in points {
                self.gamma[x] = Some(self.alpha_inv[x].then(c).then(&self.alpha[x]));
            }
            if self.consistent(points) {
                self.run(level + 1);
            }
        }
        for &x in points {
            self.gamma[x] = None;
        }
    }

    /// `gamma(g) gamma(h) = gamma(g^gamma(h) + h)` wherever all three are assigned
    /// and one of them was just added.
    fn consistent(&self, fresh: &[usize]) -> bool {
        let n = self.g.len();
        let mut is_fresh = vec![false; n];
        for &x in fresh {
            is_fresh[x] = true;
        }
        for a in 0..n {
            let Some(ga) = &self.gamma[a] else { continue };
            for b in 0..n {
                let Some(gb) = &self.gamma[b] else { continue };
                let k = self.g.add(gb.apply(a), b);
                let Some(gk) = &self.gamma[k] else { continue };
                if !(is_fresh[a] || is_fresh[b] || is_fresh[k]) {
                    continue;
                }
                if (0..n).any(|x| gb.apply(ga.apply(x)) != gk.apply(x)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Invariant factors `d1 | d2 | ...` (ascending) of a finite abelian permutation group,
/// by repeatedly splitting off an element of maximal order modulo what has been split so far.
pub fn abelian_invariant_factors(group: &PermGroup) -> Result<Vec<u128>, OracleError> {
    if !group.is_abelian() {
        return Err(OracleError::NonAbelian(format!(
            "group of order {}",
            group.order()
        )));
    }
    let elems = group.elements();
    let index: HashMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mul = |a: usize, b: usize| index[&elems[a].then(&elems[b])];
    let mut inside = vec![false; elems.len()];
    inside[0] = true;
    let mut members = vec![0usize];
    let mut factors = Vec::new();
    while members.len() < elems.len() {
        // order of each element modulo the current subgroup
        let (best, d) = (0..elems.len())
            .map(|a| {
                let mut x = a;
                let mut k = 1u128;
                while !inside[x] {
                    x = mul(x, a);
                    k += 1;
                }
                (a, k)
            })
            .max_by_key(|&(a, k)| (k, std::cmp::Reverse(a)))
            .expect("nonempty");
        factors.push(d);
        let mut next = Vec::with_capacity(members.len() * d as usize);
        let mut power = 0usize;
        for _ in 0..d {
            for &s in &members {
                let x = mul(s, power);
                if !inside[x] {
                    inside[x] = true;
                }
                next.push(x);
            }
            power = mul(power, best);
        }
        members = next;
    }
    factors.reverse();
    Ok(factors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchPath {
    Literal,
    Equivariant,
}

/// One member of `K(G)` with its isomorphism type.
#[derive(Clone, Debug)]
pub struct KMember {
    pub subgroup: RegularSubgroup,
    pub invariant_factors: Vec<u128>,
    pub in_h: bool,
    /// `N_S(G)(N) = Hol(G)`, checked by a full scan when `|G|` is small enough.
    pub normalizer_is_hol: Option<bool>,
}

/// Partition of `K(G)` into `H(G)` and the rest.
#[derive(Clone, Debug)]
pub struct HtReport {
    pub group_order: usize,
    pub aut_order: u64,
    pub hol_order: u128,
    pub path: SearchPath,
    pub k_count: usize,
    pub h_count: usize,
    pub members: Vec<KMember>,
    /// Regular subgroups normal in `Hol(G)` that are not abelian, so outside `K(G)`.
    pub nonabelian: Vec<RegularSubgroup>,
    /// Distinct invariant-factor lists among members, sorted.
    pub iso_types: Vec<Vec<u128>>,
}

pub fn compute_h_and_t(shape: &GroupShape, cfg: &OracleConfig) -> Result<HtReport, OracleError> {
    let g = FiniteGroup::new(shape, cfg.max_order)?;
    let aut = aut_data(&g, cfg.aut_limit)?;
    let (all, path) = enumerate_k_with(&g, &aut, cfg)?;
    let (k, nonabelian): (Vec<_>, Vec<_>) = all.into_iter().partition(|k| k.group().is_abelian());
    let target = shape.invariant_factors().torsion;
    let mut members = Vec::with_capacity(k.len());
    for sub in k {
        let invariant_factors = abelian_invariant_factors(sub.group())?;
        let in_h = invariant_factors == target;
        members.push(KMember {
            subgroup: sub,
            invariant_factors,
            in_h,
            normalizer_is_hol: None,
        });
    }
    if g.len() <= cfg.sym_limit {
        let hol = holomorph_of(
            &g,
            &aut,
            cfg.hol_limit.max(g.len() as u128 * aut.order as u128),
        )?;
        let groups: Vec<&PermGroup> = members.iter().map(|m| m.subgroup.group()).collect();
        let scan = symmetric_scan(&g, &hol, &groups, cfg.sym_limit)?;
        for (m, &eq) in members.iter_mut().zip(&scan.member_normalizer_is_hol) {
            m.normalizer_is_hol = Some(eq);
        }
    }
    let iso_types: Vec<Vec<u128>> = members
        .iter()
        .map(|m| m.invariant_factors.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(HtReport {
        group_order: g.len(),
        aut_order: aut.order,
        hol_order: g.len() as u128 * aut.order as u128,
        path,
        k_count: members.len(),
        h_count: members.iter().filter(|m| m.in_h).count(),
        members,
        nonabelian,
        iso_types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &str) -> GroupShape {
        s.parse().unwrap()
    }

    fn keys(v: &[RegularSubgroup]) -> Vec<Vec<u16>> {
        v.iter().map(RegularSubgroup::key).collect()
    }

    #[test]
    fn k_counts() {
        let cfg = OracleConfig::default();
        assert_eq!(enumerate_k(&shape("Z4"), &cfg).unwrap().len(), 2);
        assert_eq!(enumerate_k(&shape("Z2 x Z2"), &cfg).unwrap().len(), 1);
        assert_eq!(enumerate_k(&shape("Z8"), &cfg).unwrap().len(), 2);
    }

    #[test]
    fn search_paths_agree() {
        let cfg = OracleConfig::default();
        assert_eq!(
            enumerate_k(&GroupShape::new(0, vec![], vec![]).unwrap(), &cfg)
                .unwrap()
                .len(),
            1
        );
        for d in [
            "Z4",
            "Z8",
            "Z2 x Z2",
            "Z4 x Z2",
            "Z8 x Z2",
            "Z6",
            "Z2 x Z2 x Z2",
            "Z16",
            "Z12",
            "Z4 x Z4",
        ] {
            let a = enumerate_k_literal(&shape(d), &cfg).unwrap();
            let b = enumerate_k_equivariant(&shape(d), &cfg).unwrap();
            assert_eq!(keys(&a), keys(&b), "{d}");
        }
    }

    #[test]
    fn h_and_t() {
        let cfg = OracleConfig::default();
        let z4 = compute_h_and_t(&shape("Z4"), &cfg).unwrap();
        assert_eq!((z4.k_count, z4.h_count), (2, 1));
        assert!(z4.iso_types.contains(&vec![2, 2]));
        for m in &z4.members {
            assert_eq!(m.normalizer_is_hol, Some(m.in_h));
        }
        let z8 = compute_h_and_t(&shape("Z8"), &cfg).unwrap();
        assert_eq!((z8.k_count, z8.h_count), (2, 2));
        // gamma(g) = (-1)^g gives a dihedral member, normal but not abelian
        assert_eq!(z8.nonabelian.len(), 2);
        let big = compute_h_and_t(&shape("Z16 x Z2"), &cfg).unwrap();
        assert_eq!(big.h_count, 4);
    }

    #[test]
    fn invariant_factors_by_peeling() {
        let g = FiniteGroup::new(&shape("Z4 x Z2"), 64).unwrap();
        let regular = PermGroup::generated_by(
            8,
            g.generators()
                .iter()
                .map(|&x| rho(&g, x as usize))
                .collect(),
            8,
        )
        .unwrap();
        assert_eq!(abelian_invariant_factors(&regular).unwrap(), vec![2, 4]);
        let g = FiniteGroup::new(&shape("Z8"), 64).unwrap();
        let regular = PermGroup::generated_by(8, vec![rho(&g, 1)], 8).unwrap();
        assert_eq!(abelian_invariant_factors(&regular).unwrap(), vec![8]);
        let s3 = PermGroup::generated_by(
            3,
            vec![
                Perm::from_images(vec![1, 2, 0]).unwrap(),
                Perm::from_images(vec![1, 0, 2]).unwrap(),
            ],
            6,
        )
        .unwrap();
        assert!(matches!(
            abelian_invariant_factors(&s3),
            Err(OracleError::NonAbelian(_))
        ));
    }
}
