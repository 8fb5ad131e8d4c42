//! The dictionary between admissible rings and regular subgroups: `gamma(g): h -> h + hg`,
//! `nu(g) = gamma(g) rho(g)`, and the involution `theta(u) = u + f(u)` conjugating
//! `rho(G)` onto `N`.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{AutLabel, AutMap, Element, Generator, GroupShape, Torsion2Vector};
use crate::oracle::{
    for_each_automorphism, holomorph_generators, FiniteGroup, Perm, DEFAULT_AUT_LIMIT,
};
use crate::ring::{binomial2_is_odd, circle_invariant_factors, RingError, RingStructure};

/// `gamma(g)`, the automorphism `h -> h + h.g`.
pub fn gamma_of(r: &RingStructure, g: &Element) -> Result<AutMap, RingError> {
    let shape = r.shape();
    let images = shape
        .generators()
        .map(|h| {
            let h = shape.generator(h);
            Ok(shape.add_unchecked(&h, &shape.embed(r.multiply(&h, g)?)))
        })
        .collect::<Result<Vec<_>, RingError>>()?;
    Ok(AutMap::new(shape, images, AutLabel::Anonymous)?)
}

/// `nu(g)`: the permutation `x -> x o g` of the element indices.
pub fn nu_permutation(r: &RingStructure, g: &Element, bound: usize) -> Result<Perm, RingError> {
    let fg = FiniteGroup::new(r.shape(), bound)?;
    let images = (0..fg.len())
        .map(|x| Ok(fg.index(&r.circle(&fg.element(x), g)?) as u16))
        .collect::<Result<Vec<_>, RingError>>()?;
    Ok(Perm::from_images(images).expect("nu(g) is a bijection"))
}

/// `f(u)` by the closed form `sum_{i<j} a_i a_j g_i g_j + sum_i C(a_i, 2) g_i^2` (coefficients mod 2),
/// with torsion coordinates taken as their stored residues.
pub fn f_value(r: &RingStructure, a: &Element) -> Result<Torsion2Vector, RingError> {
    let shape = r.shape();
    if !shape.conforms(a) {
        return Err(crate::group::GroupError::ShapeMismatch.into());
    }
    let coeffs = table_coeffs(shape, a);
    let mut acc = Torsion2Vector::zero();
    for (i, ci) in coeffs.iter().enumerate() {
        if binomial2_is_odd(ci) {
            acc += r.entry(i, i);
        }
        if ci.is_odd() {
            for (j, cj) in coeffs.iter().enumerate().skip(i + 1) {
                if cj.is_odd() {
                    acc += r.entry(i, j);
                }
            }
        }
    }
    Ok(acc)
}

/// `f(u)` evaluated only through `f(generator) = 0`, `f(u + v) = f(u) + f(v) + uv`
/// and `f(2u) = 2f(u) + u^2`.
pub fn f_by_recurrence(r: &RingStructure, a: &Element) -> Result<Torsion2Vector, RingError> {
    let shape = r.shape();
    if !shape.conforms(a) {
        return Err(crate::group::GroupError::ShapeMismatch.into());
    }
    let mut partial = shape.zero();
    let mut f_partial = Torsion2Vector::zero();
    for g in shape.generators() {
        let c = a.coeff(g);
        if c.is_zero() {
            continue;
        }
        let gen = shape.generator(g);
        let v = shape.scale_unchecked(&gen, &c);
        let f_v = f_of_multiple(r, &gen, &c)?;
        f_partial = f_partial + f_v + r.multiply(&partial, &v)?;
        partial = shape.add_unchecked(&partial, &v);
    }
    Ok(f_partial)
}

/// `f(c g)` for a generator `g`.
fn f_of_multiple(r: &RingStructure, g: &Element, c: &BigInt) -> Result<Torsion2Vector, RingError> {
    let shape = r.shape();
    if c.is_negative() {
        // 0 = f(w + (-w)) = f(w) + f(-w) + w(-w)
        let w = shape.scale_unchecked(g, &-c);
        return Ok(f_of_multiple(r, g, &-c)? + r.multiply(&w, &w)?);
    }
    if c.is_zero() || *c == BigInt::from(1) {
        return Ok(Torsion2Vector::zero());
    }
    let (half, bit) = c.div_rem(&BigInt::from(2));
    let w = shape.scale_unchecked(g, &half);
    // f(2w) = 2 f(w) + w^2, and 2 f(w) = 0 in Omega(H)
    let doubled = r.multiply(&w, &w)?;
    if bit.is_zero() {
        Ok(doubled)
    } else {
        let two_w = shape.scale_unchecked(&w, &BigInt::from(2));
        Ok(doubled + r.multiply(&two_w, g)?)
    }
}

/// `theta(a) = a + f(a)`.
pub fn theta(r: &RingStructure, a: &Element) -> Result<Element, RingError> {
    let f = f_value(r, a)?;
    Ok(r.shape().add_unchecked(a, &r.shape().embed(f)))
}

/// `theta` as a permutation of the element indices.
pub fn theta_permutation(r: &RingStructure, bound: usize) -> Result<Option<Perm>, RingError> {
    let fg = FiniteGroup::new(r.shape(), bound)?;
    let images = (0..fg.len())
        .map(|x| Ok(fg.index(&theta(r, &fg.element(x))?) as u16))
        .collect::<Result<Vec<_>, RingError>>()?;
    Ok(Perm::from_images(images))
}

/// Recovers the ring from a regular subgroup, `g.h = -g + g^gamma(h) = nu(h)(g) - h - g`,
/// and checks that it reproduces every member.
pub fn ring_from_nu(
    shape: &GroupShape,
    nu: &[Perm],
    bound: usize,
) -> Result<RingStructure, RingError> {
    let fg = FiniteGroup::new(shape, bound)?;
    if nu.len() != fg.len() {
        return Err(RingError::Dimension);
    }
    let m = shape.two_rank();
    let gens = fg.generators().to_vec();
    let mut pairs = Vec::new();
    for p in 0..m {
        for q in p..m {
            let (xp, xq) = (gens[p] as usize, gens[q] as usize);
            let raw = fg.sub(fg.sub(nu[xq].apply(xp), xq), xp);
            let v = fg.omega(raw).ok_or_else(|| {
                RingError::Parse(format!(
                    "{}*{} is not an involution",
                    Generator::Two(p),
                    Generator::Two(q)
                ))
            })?;
            pairs.push((Generator::Two(p), Generator::Two(q), v));
        }
    }
    let r = RingStructure::from_pairs(shape, &pairs)?;
    for b in 0..fg.len() {
        for a in 0..fg.len() {
            if fg.index(&r.circle(&fg.element(a), &fg.element(b))?) != nu[b].apply(a) {
                return Err(RingError::Parse(
                    "regular subgroup is not given by a ring".into(),
                ));
            }
        }
    }
    Ok(r)
}

/// `gamma(g)` for each generator `g`, as generator-image rows.
pub fn gamma_table(r: &RingStructure) -> Result<Vec<(String, Vec<(String, String)>)>, RingError> {
    let shape = r.shape();
    shape
        .generators()
        .map(|g| {
            let map = gamma_of(r, &shape.generator(g))?;
            let rows = shape
                .generators()
                .zip(map.images())
                .map(|(h, img)| (h.to_string(), shape.format_element(img)))
                .collect();
            Ok((g.to_string(), rows))
        })
        .collect()
}

/// `theta` on the generators, their doubles and the sums of two distinct generators;
/// every other value follows from `theta(a + b) = theta(a) o theta(b)`.
pub fn theta_table(r: &RingStructure) -> Result<Vec<(String, String)>, RingError> {
    let shape = r.shape();
    let gens: Vec<Element> = (0..shape.table_dim())
        .map(|i| shape.generator(shape.table_generator(i)))
        .collect();
    let mut points = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        points.push(a.clone());
        points.push(shape.scale_small(a, 2));
        for b in &gens[i + 1..] {
            points.push(shape.add_unchecked(a, b));
        }
    }
    points
        .iter()
        .map(|p| Ok((shape.format_element(p), shape.format_element(&theta(r, p)?))))
        .collect()
}

fn rows_to_json(rows: &[(String, String)]) -> serde_json::Value {
    serde_json::Value::Object(
        rows.iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect(),
    )
}

pub fn gamma_table_json(r: &RingStructure) -> Result<serde_json::Value, RingError> {
    Ok(serde_json::Value::Object(
        gamma_table(r)?
            .into_iter()
            .map(|(g, rows)| (g, rows_to_json(&rows)))
            .collect(),
    ))
}

pub fn theta_table_json(r: &RingStructure) -> Result<serde_json::Value, RingError> {
    Ok(rows_to_json(&theta_table(r)?))
}

fn table_coeffs(shape: &GroupShape, a: &Element) -> Vec<BigInt> {
    (0..shape.table_dim())
        .map(|i| a.coeff(shape.table_generator(i)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Passed,
    Failed(String),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
}

pub const CHECK_NAMES: [&str; 5] = [
    "gamma-homomorphism",
    "gamma-equivariance",
    "theta-involution",
    "theta-conjugation",
    "nu-normal-subgroup",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub checks: Vec<Check>,
    /// Whether `(G, o)` is isomorphic to `G`; `None` when the torsion subgroup is too large to decide.
    pub in_h: Option<bool>,
}

impl CorrespondenceReport {
    /// No check failed.
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !matches!(c.status, CheckStatus::Failed(_)))
    }

    pub fn status(&self, name: &str) -> Option<&CheckStatus> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.status)
    }

    /// Names of the checks that ran and passed.
    pub fn passed_checks(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Passed)
            .map(|c| c.name)
            .collect()
    }
}

impl fmt::Display for CorrespondenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.status {
                CheckStatus::Passed => writeln!(f, "{}: passed", c.name)?,
                CheckStatus::Failed(why) => writeln!(f, "{}: FAILED ({why})", c.name)?,
                CheckStatus::Skipped(why) => writeln!(f, "{}: skipped ({why})", c.name)?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorrespondenceOptions {
    /// Largest `|G|` for the permutation checks.
    pub bound: usize,
    pub aut_limit: u64,
    /// Largest number of box points for the involution check on large or infinite groups;
    /// beyond it a seeded sample of this size is drawn from the box.
    pub box_limit: usize,
}

impl Default for CorrespondenceOptions {
    fn default() -> Self {
        CorrespondenceOptions {
            bound: 64,
            aut_limit: DEFAULT_AUT_LIMIT,
            box_limit: 1 << 15,
        }
    }
}

/// Runs the five checks of the ring / regular subgroup dictionary.
///
/// The theta checks only make sense when `(G, o)` is isomorphic to `G`; otherwise they are skipped.
pub fn verify_correspondence(
    r: &RingStructure,
    opts: &CorrespondenceOptions,
) -> CorrespondenceReport {
    let shape = r.shape();
    let in_h = circle_invariant_factors(r)
        .ok()
        .map(|f| f == shape.invariant_factors());
    let finite = FiniteGroup::new(shape, opts.bound).ok();
    let mut checks = Vec::with_capacity(5);
    let not_iso = || CheckStatus::Skipped("(G, o) is not isomorphic to G".into());
    match &finite {
        Some(fg) => {
            let t = Tables::new(r, fg);
            checks.push(t.homomorphism());
            checks.push(t.equivariance(opts.aut_limit));
            if in_h == Some(false) {
                checks.push(Check {
                    name: CHECK_NAMES[2],
                    status: not_iso(),
                });
                checks.push(Check {
                    name: CHECK_NAMES[3],
                    status: not_iso(),
                });
            } else {
                checks.push(t.involution());
                checks.push(t.conjugation());
            }
            checks.push(t.normality(opts.aut_limit));
        }
        None => {
            let too_big = || {
                CheckStatus::Skipped(format!(
                    "needs a finite group of order at most {}",
                    opts.bound
                ))
            };
            checks.push(symbolic_homomorphism(r));
            checks.push(symbolic_equivariance(r));
            if in_h == Some(false) {
                checks.push(Check {
                    name: CHECK_NAMES[2],
                    status: not_iso(),
                });
            } else {
                checks.push(box_involution(r, opts.box_limit));
            }
            checks.push(Check {
                name: CHECK_NAMES[3],
                status: too_big(),
            });
            checks.push(Check {
                name: CHECK_NAMES[4],
                status: too_big(),
            });
        }
    }
    CorrespondenceReport { checks, in_h }
}

fn verdict(name: &'static str, failure: Option<String>) -> Check {
    Check {
        name,
        status: failure.map_or(CheckStatus::Passed, CheckStatus::Failed),
    }
}

/// Index-level tables for a finite group.
struct Tables<'a> {
    ring: &'a RingStructure,
    g: &'a FiniteGroup,
    /// `gamma[h][x] = x + x.h`
    gamma: Vec<Vec<u16>>,
    /// `circ[a][b] = a o b`
    circ: Vec<Vec<u16>>,
}

impl<'a> Tables<'a> {
    fn new(ring: &'a RingStructure, g: &'a FiniteGroup) -> Self {
        let n = g.len();
        let m = ring.shape().two_rank();
        let support: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..m).filter(|&l| g.mod2_bits(a) >> l & 1 == 1).collect())
            .collect();
        let mut embed: HashMap<Torsion2Vector, usize> = HashMap::new();
        let mut product = |a: usize, b: usize| -> usize {
            let v = ring.multiply_support(&support[a], &support[b]);
            *embed.entry(v).or_insert_with(|| g.embed(v))
        };
        let mut circ = vec![vec![0u16; n]; n];
        let mut gamma = vec![vec![0u16; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p = product(a, b);
                circ[a][b] = g.add(g.add(a, b), p) as u16;
                gamma[b][a] = g.add(a, p) as u16;
            }
        }
        Tables {
            ring,
            g,
            gamma,
            circ,
        }
    }

    fn nu(&self, k: usize) -> Perm {
        Perm::from_images((0..self.g.len()).map(|x| self.circ[x][k]).collect())
            .expect("nu(k) is a bijection")
    }

    fn homomorphism(&self) -> Check {
        let n = self.g.len();
        for a in 0..n {
            for b in 0..n {
                let ab = self.g.add(a, b);
                if (0..n).any(|x| self.gamma[ab][x] != self.gamma[b][self.gamma[a][x] as usize]) {
                    return verdict(
                        CHECK_NAMES[0],
                        Some(format!("gamma({ab}) != gamma({a}) gamma({b})")),
                    );
                }
            }
        }
        verdict(CHECK_NAMES[0], None)
    }

    /// `gamma(beta(g))(beta(y)) = beta(gamma(g)(y))` for a full table `beta`.
    fn preserved_by(&self, beta: &[u16], points: &[usize]) -> bool {
        let n = self.g.len();
        points.iter().all(|&k| {
            let bk = beta[k] as usize;
            (0..n).all(|y| self.gamma[bk][beta[y] as usize] == beta[self.gamma[k][y] as usize])
        })
    }

    fn equivariance(&self, aut_limit: u64) -> Check {
        let shape = self.ring.shape();
        let g = self.g;
        let all: Vec<usize> = (0..g.len()).collect();
        for beta in shape.standard_automorphisms() {
            let images: Vec<u16> = g
                .generators()
                .iter()
                .map(|&x| g.index(&shape.apply_unchecked(&beta, &g.element(x as usize))) as u16)
                .collect();
            if !self.preserved_by(&g.extend_images(&images), &all) {
                return verdict(
                    CHECK_NAMES[1],
                    Some(format!("not preserved by {}", beta.label())),
                );
            }
        }
        if self.ring.is_trivial() {
            return verdict(CHECK_NAMES[1], None);
        }
        let gens: Vec<usize> = g.generators().iter().map(|&x| x as usize).collect();
        let mut bad = None;
        let streamed = for_each_automorphism(g, aut_limit, |t| {
            if self.preserved_by(t, &gens) {
                ControlFlow::Continue(())
            } else {
                bad = Some(
                    gens.iter()
                        .map(|&x| shape.format_element(&g.element(t[x] as usize)))
                        .collect::<Vec<_>>(),
                );
                ControlFlow::Break(())
            }
        });
        match (streamed, bad) {
            (_, Some(images)) => verdict(
                CHECK_NAMES[1],
                Some(format!("not preserved by [{}]", images.join(", "))),
            ),
            (Ok(_), None) => verdict(CHECK_NAMES[1], None),
            (Err(e), None) => Check {
                name: CHECK_NAMES[1],
                status: CheckStatus::Skipped(format!(
                    "standard family passed; full Aut(G) not streamed: {e}"
                )),
            },
        }
    }

    fn theta_table(&self) -> Result<Vec<u16>, RingError> {
        (0..self.g.len())
            .map(|x| Ok(self.g.index(&theta(self.ring, &self.g.element(x))?) as u16))
            .collect()
    }

    fn involution(&self) -> Check {
        let th = match self.theta_table() {
            Ok(t) => t,
            Err(e) => return verdict(CHECK_NAMES[2], Some(e.to_string())),
        };
        let bad = (0..th.len()).find(|&x| th[th[x] as usize] as usize != x);
        verdict(
            CHECK_NAMES[2],
            bad.map(|x| format!("theta(theta({})) != {}", self.fmt(x), self.fmt(x))),
        )
    }

    fn conjugation(&self) -> Check {
        let th = match self.theta_table().map(Perm::from_images) {
            Ok(Some(t)) => t,
            Ok(None) => return verdict(CHECK_NAMES[3], Some("theta is not a bijection".into())),
            Err(e) => return verdict(CHECK_NAMES[3], Some(e.to_string())),
        };
        let th_inv = th.inverse();
        for h in 0..self.g.len() {
            let rho =
                Perm::from_images((0..self.g.len()).map(|x| self.g.add(x, h) as u16).collect())
                    .expect("bijection");
            if th_inv.then(&rho).then(&th) != self.nu(th.apply(h)) {
                return verdict(
                    CHECK_NAMES[3],
                    Some(format!(
                        "theta^-1 rho({}) theta != nu(theta(h))",
                        self.fmt(h)
                    )),
                );
            }
        }
        verdict(CHECK_NAMES[3], None)
    }

    fn normality(&self, aut_limit: u64) -> Check {
        let n = self.g.len();
        for a in 0..n {
            for b in 0..n {
                let ab = self.circ[a][b] as usize;
                if (0..n).any(|x| self.circ[self.circ[x][a] as usize][b] != self.circ[x][ab]) {
                    return verdict(
                        CHECK_NAMES[4],
                        Some(format!(
                            "nu({}) nu({}) != nu(a o b)",
                            self.fmt(a),
                            self.fmt(b)
                        )),
                    );
                }
            }
        }
        let hol_gens = match holomorph_generators(self.g, aut_limit) {
            Ok(c) => c,
            Err(e) => {
                return Check {
                    name: CHECK_NAMES[4],
                    status: CheckStatus::Skipped(format!(
                        "closure holds; Aut(G) not streamed: {e}"
                    )),
                }
            }
        };
        let nus: Vec<Perm> = (0..n).map(|k| self.nu(k)).collect();
        for t in hol_gens {
            let t_inv = t.inverse();
            for p in &nus {
                let c = t_inv.then(p).then(&t);
                if c != nus[c.apply(0)] {
                    return verdict(CHECK_NAMES[4], Some("N is not normalized by Hol(G)".into()));
                }
            }
        }
        verdict(CHECK_NAMES[4], None)
    }

    fn fmt(&self, x: usize) -> String {
        self.ring.shape().format_element(&self.g.element(x))
    }
}

fn symbolic_homomorphism(r: &RingStructure) -> Check {
    let shape = r.shape();
    let gens: Vec<Element> = shape.generators().map(|g| shape.generator(g)).collect();
    for a in &gens {
        for b in &gens {
            let run = || -> Result<bool, RingError> {
                let ab = gamma_of(r, &shape.add_unchecked(a, b))?;
                let composed = shape.compose(&gamma_of(r, a)?, &gamma_of(r, b)?);
                Ok(ab.images() == composed.images())
            };
            match run() {
                Ok(true) => {}
                Ok(false) => {
                    return verdict(
                        CHECK_NAMES[0],
                        Some(format!(
                            "gamma({}+{})",
                            shape.format_element(a),
                            shape.format_element(b)
                        )),
                    )
                }
                Err(e) => return verdict(CHECK_NAMES[0], Some(e.to_string())),
            }
        }
    }
    verdict(CHECK_NAMES[0], None)
}

fn symbolic_equivariance(r: &RingStructure) -> Check {
    let shape = r.shape();
    let gens: Vec<Element> = shape.generators().map(|g| shape.generator(g)).collect();
    for beta in shape.standard_automorphisms() {
        for g in &gens {
            let run = || -> Result<bool, RingError> {
                let lhs = gamma_of(r, &shape.apply_unchecked(&beta, g))?;
                let rhs = gamma_of(r, g)?;
                Ok(gens.iter().all(|y| {
                    shape.apply_unchecked(&lhs, &shape.apply_unchecked(&beta, y))
                        == shape.apply_unchecked(&beta, &shape.apply_unchecked(&rhs, y))
                }))
            };
            match run() {
                Ok(true) => {}
                Ok(false) => {
                    return verdict(
                        CHECK_NAMES[1],
                        Some(format!("not preserved by {}", beta.label())),
                    )
                }
                Err(e) => return verdict(CHECK_NAMES[1], Some(e.to_string())),
            }
        }
    }
    verdict(CHECK_NAMES[1], None)
}

/// `theta(theta(a)) = a` for every `a` with coordinates in `0..8`, or a seeded sample of that box.
fn box_involution(r: &RingStructure, box_limit: usize) -> Check {
    let shape = r.shape();
    let k = shape.generator_count();
    let total = 8u128.checked_pow(k as u32).unwrap_or(u128::MAX);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e7a);
    let points = if total <= box_limit as u128 {
        total as usize
    } else {
        box_limit
    };
    for idx in 0..points {
        let digits: Vec<i128> = if total <= box_limit as u128 {
            (0..k).map(|j| ((idx >> (3 * j)) & 7) as i128).collect()
        } else {
            (0..k).map(|_| rng.gen_range(0..8)).collect()
        };
        let n = shape.rank();
        let m = shape.two_rank();
        let a = shape
            .element(
                digits[..n].iter().map(|&d| BigInt::from(d)).collect(),
                &digits[n..n + m],
                &digits[n + m..],
            )
            .expect("box point conforms");
        let back = theta(r, &a).and_then(|t| theta(r, &t));
        match back {
            Ok(b) if b == a => {}
            Ok(_) => {
                return verdict(
                    CHECK_NAMES[2],
                    Some(format!(
                        "theta(theta({})) differs",
                        shape.format_element(&a)
                    )),
                )
            }
            Err(e) => return verdict(CHECK_NAMES[2], Some(e.to_string())),
        }
    }
    verdict(CHECK_NAMES[2], None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Torsion2Vector {
        s.parse().unwrap()
    }

    fn square(desc: &str) -> RingStructure {
        let shape: GroupShape = desc.parse().unwrap();
        let x = Generator::Two(0);
        RingStructure::from_pairs(&shape, &[(x, x, t("t1"))]).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let r = square("Z8");
        let x = r.shape().generator(Generator::Two(0));
        let g = gamma_of(&r, &x).unwrap();
        assert_eq!(g.images()[0].two_coords(), &[5]);
        let triv = RingStructure::trivial(r.shape());
        assert_eq!(
            gamma_of(&triv, &x).unwrap().images(),
            AutMap::identity(r.shape()).images()
        );

        let shape: GroupShape = "Z^1 x Z4".parse().unwrap();
        let r =
            RingStructure::from_pairs(&shape, &[(Generator::Free(0), Generator::Two(0), t("t1"))])
                .unwrap();
        let g = gamma_of(&r, &shape.generator(Generator::Two(0))).unwrap();
        assert_eq!(shape.format_element(&g.images()[0]), "z1+2*x1");
        assert_eq!(shape.format_element(&g.images()[1]), "x1");
    }

    #[test]
    fn nu_examples() {
        let r = square("Z4");
        let x = r.shape().generator(Generator::Two(0));
        assert_eq!(nu_permutation(&r, &x, 64).unwrap().images(), &[1, 0, 3, 2]);
        let r = square("Z8");
        assert_eq!(
            nu_permutation(&r, &r.shape().generator(Generator::Two(0)), 64)
                .unwrap()
                .order(),
            8
        );
    }

    #[test]
    fn theta_examples() {
        let r = square("Z8");
        let s = r.shape();
        let x = s.generator(Generator::Two(0));
        assert_eq!(theta(&r, &x).unwrap(), x);
        let two = s.torsion_element(&[2], &[]).unwrap();
        let six = s.torsion_element(&[6], &[]).unwrap();
        assert_eq!(theta(&r, &two).unwrap(), six);
        assert_eq!(theta(&r, &six).unwrap(), two);
    }

    #[test]
    fn correspondence_on_z8_and_z4() {
        let rep = verify_correspondence(&square("Z8"), &CorrespondenceOptions::default());
        assert!(
            rep.checks.iter().all(|c| c.status == CheckStatus::Passed),
            "{rep}"
        );
        let rep = verify_correspondence(&square("Z4"), &CorrespondenceOptions::default());
        assert_eq!(rep.in_h, Some(false));
        assert_eq!(
            rep.passed_checks(),
            vec![CHECK_NAMES[0], CHECK_NAMES[1], CHECK_NAMES[4]]
        );
    }

    #[test]
    fn ring_recovered_from_nu() {
        let r = square("Z8");
        let nus: Vec<Perm> = FiniteGroup::new(r.shape(), 64)
            .unwrap()
            .indexer()
            .elements()
            .map(|g| nu_permutation(&r, &g, 64).unwrap())
            .collect();
        assert_eq!(ring_from_nu(r.shape(), &nus, 64).unwrap(), r);
    }
}
