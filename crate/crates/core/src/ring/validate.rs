use std::fmt;
use std::ops::ControlFlow;

use crate::group::{AutMap, Generator, GroupShape, InvariantFactors, Torsion2Vector};
use crate::oracle::{for_each_automorphism, FiniteGroup, OracleError, DEFAULT_AUT_LIMIT};

use super::{circle_invariant_factors, RingStructure};

/// A labelled failure found by [`validate_ring`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingViolation {
    Symmetry {
        a: Generator,
        b: Generator,
    },
    TripleProduct {
        a: Generator,
        b: Generator,
        c: Generator,
    },
    OddAnnihilation {
        odd: Generator,
        other: Generator,
    },
    WellDefinedness {
        a: Generator,
        b: Generator,
        value: Torsion2Vector,
    },
    Equivariance {
        automorphism: String,
        a: Generator,
        b: Generator,
    },
    FullEquivariance {
        images: Vec<String>,
        a: Generator,
        b: Generator,
    },
    CircleIsomorphism {
        expected: InvariantFactors,
        found: InvariantFactors,
    },
}

impl RingViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            RingViolation::Symmetry { .. } => "symmetry",
            RingViolation::TripleProduct { .. } => "triple-product",
            RingViolation::OddAnnihilation { .. } => "odd-annihilation",
            RingViolation::WellDefinedness { .. } => "well-definedness",
            RingViolation::Equivariance { .. } => "equivariance",
            RingViolation::FullEquivariance { .. } => "full-equivariance",
            RingViolation::CircleIsomorphism { .. } => "circle-isomorphism",
        }
    }
}

impl fmt::Display for RingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingViolation::Symmetry { a, b } => write!(f, "symmetry: {a}*{b} != {b}*{a}"),
            RingViolation::TripleProduct { a, b, c } => {
                write!(f, "triple-product: ({a}*{b})*{c} != 0")
            }
            RingViolation::OddAnnihilation { odd, other } => {
                write!(f, "odd-annihilation: {odd}*{other} != 0")
            }
            RingViolation::WellDefinedness { a, b, value } => {
                write!(f, "well-definedness: {a}*{b} = {value} is not in Omega(H)")
            }
            RingViolation::Equivariance { automorphism, a, b } => {
                write!(f, "equivariance: {automorphism} does not preserve {a}*{b}")
            }
            RingViolation::FullEquivariance { images, a, b } => {
                write!(
                    f,
                    "full-equivariance: automorphism [{}] does not preserve {a}*{b}",
                    images.join(", ")
                )
            }
            RingViolation::CircleIsomorphism { expected, found } => {
                write!(f, "circle-isomorphism: expected {expected}, found {found}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingValidationReport {
    pub ok: bool,
    pub failures: Vec<RingViolation>,
    /// Whether equivariance under all of `Aut(G)` was checked by the oracle.
    pub full_aut_checked: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Largest finite `|G|` for which full `Aut(G)` equivariance is checked.
    pub oracle_bound: usize,
    pub aut_limit: u64,
    /// Also require `(G, o)` to be isomorphic to `G`.
    pub expect_circle_iso: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            oracle_bound: 64,
            aut_limit: DEFAULT_AUT_LIMIT,
            expect_circle_iso: false,
        }
    }
}

pub fn validate_ring(r: &RingStructure) -> RingValidationReport {
    validate_ring_with(r, &ValidationOptions::default())
}

pub fn validate_ring_with(r: &RingStructure, opts: &ValidationOptions) -> RingValidationReport {
    let mut failures = symbolic_violations(r, false);
    let mut full_aut_checked = false;
    if failures.is_empty() && r.shape().is_finite() {
        if let Ok(v) = full_aut_violations(&[r], opts.oracle_bound, opts.aut_limit) {
            full_aut_checked = true;
            failures.extend(v.into_iter().flatten());
        }
    }
    if opts.expect_circle_iso && failures.is_empty() {
        let expected = r.shape().invariant_factors();
        if let Ok(found) = circle_invariant_factors(r) {
            if found != expected {
                failures.push(RingViolation::CircleIsomorphism { expected, found });
            }
        }
    }
    RingValidationReport {
        ok: failures.is_empty(),
        failures,
        full_aut_checked,
    }
}

/// Symmetry, Omega-values, odd annihilation, triple products and standard equivariance.
/// With `first_only`, stops at the first failure.
pub(crate) fn symbolic_violations(r: &RingStructure, first_only: bool) -> Vec<RingViolation> {
    symbolic_violations_with(r, &standard_actions(r.shape()), first_only)
}

pub(crate) fn standard_actions(shape: &GroupShape) -> Vec<(String, StandardAction)> {
    shape
        .standard_automorphisms()
        .iter()
        .map(|b| (b.label().to_string(), StandardAction::new(shape, b)))
        .collect()
}

pub(crate) fn symbolic_violations_with(
    r: &RingStructure,
    actions: &[(String, StandardAction)],
    first_only: bool,
) -> Vec<RingViolation> {
    let shape = r.shape();
    let d = r.dim();
    let gen = |i: usize| shape.table_generator(i);
    let mut out = Vec::new();
    macro_rules! push {
        ($v:expr) => {{
            out.push($v);
            if first_only {
                return out;
            }
        }};
    }
    let m = shape.two_rank();
    for i in 0..d {
        for j in 0..d {
            let v = r.entry(i, j);
            if i < j && v != r.entry(j, i) {
                push!(RingViolation::Symmetry {
                    a: gen(i),
                    b: gen(j)
                });
            }
            if m < 64 && v.bits() >> m != 0 {
                push!(RingViolation::WellDefinedness {
                    a: gen(i),
                    b: gen(j),
                    value: v
                });
            }
        }
    }
    for k in 0..shape.odd_part().len() {
        let y = shape.generator(Generator::Odd(k));
        for g in shape.generators() {
            if !r
                .multiply(&y, &shape.generator(g))
                .map_or(true, |p| p.is_zero())
            {
                push!(RingViolation::OddAnnihilation {
                    odd: Generator::Odd(k),
                    other: g
                });
            }
        }
    }
    // t_l reduces to a nonzero class mod 2 only when e_l = 1
    let embed_support = |v: Torsion2Vector| -> Vec<usize> {
        v.ones()
            .filter(|&l| l < m && shape.two_part()[l] == 1)
            .map(|l| shape.rank() + l)
            .collect()
    };
    for i in 0..d {
        for j in 0..d {
            let ab = embed_support(r.entry(i, j));
            if ab.is_empty() {
                continue;
            }
            for c in 0..d {
                if !r.multiply_support(&ab, &[c]).is_zero() {
                    push!(RingViolation::TripleProduct {
                        a: gen(i),
                        b: gen(j),
                        c: gen(c)
                    });
                }
            }
        }
    }
    for (label, action) in actions {
        for i in 0..d {
            for j in i..d {
                if !action.preserves(r, i, j) {
                    push!(RingViolation::Equivariance {
                        automorphism: label.clone(),
                        a: gen(i),
                        b: gen(j)
                    });
                }
            }
        }
    }
    out
}

/// An automorphism reduced to what the ring sees: images of the table generators mod 2
/// and the induced linear map on `Omega(H)`.
pub(crate) struct StandardAction {
    support: Vec<Vec<usize>>,
    omega: Vec<Torsion2Vector>,
}

impl StandardAction {
    pub(crate) fn new(shape: &GroupShape, beta: &AutMap) -> Self {
        let probe = RingStructure::trivial(shape);
        let support = (0..shape.table_dim())
            .map(|i| {
                probe.odd_support(
                    &shape.apply_unchecked(beta, &shape.generator(shape.table_generator(i))),
                )
            })
            .collect();
        let omega = (0..shape.two_rank())
            .map(|l| {
                let img = shape.apply_unchecked(beta, &shape.embed(Torsion2Vector::basis(l)));
                shape
                    .omega_coords(&img)
                    .expect("automorphisms preserve Omega(H)")
            })
            .collect();
        StandardAction { support, omega }
    }

    pub(crate) fn support(&self, i: usize) -> &[usize] {
        &self.support[i]
    }

    pub(crate) fn map_omega(&self, v: Torsion2Vector) -> Torsion2Vector {
        v.ones()
            .fold(Torsion2Vector::zero(), |acc, l| acc + self.omega[l])
    }

    pub(crate) fn preserves(&self, r: &RingStructure, i: usize, j: usize) -> bool {
        r.multiply_support(&self.support[i], &self.support[j]) == self.map_omega(r.entry(i, j))
    }
}

/// Streams `Aut(G)` once and reports, per ring, the first pair whose product is not preserved.
pub(crate) fn full_aut_violations(
    rings: &[&RingStructure],
    bound: usize,
    aut_limit: u64,
) -> Result<Vec<Option<RingViolation>>, OracleError> {
    let Some(first) = rings.first() else {
        return Ok(Vec::new());
    };
    let shape = first.shape();
    let g = FiniteGroup::new(shape, bound)?;
    let m = shape.two_rank();
    let gens: Vec<usize> = g.generators()[..m].iter().map(|&x| x as usize).collect();
    let support =
        |a: usize| -> Vec<usize> { (0..m).filter(|&l| g.mod2_bits(a) >> l & 1 == 1).collect() };
    let mut verdict: Vec<Option<RingViolation>> = vec![None; rings.len()];
    let mut open = rings.iter().filter(|r| !r.is_trivial()).count();
    if open == 0 {
        return Ok(verdict);
    }
    let embedded: Vec<Vec<usize>> = rings
        .iter()
        .map(|r| (0..m * m).map(|k| g.embed(r.entry(k / m, k % m))).collect())
        .collect();
    for_each_automorphism(&g, aut_limit, |t| {
        let sup: Vec<Vec<usize>> = gens.iter().map(|&x| support(t[x] as usize)).collect();
        for (k, r) in rings.iter().enumerate() {
            if verdict[k].is_some() || r.is_trivial() {
                continue;
            }
            'pairs: for p in 0..m {
                for q in p..m {
                    let lhs = r.multiply_support(&sup[p], &sup[q]);
                    let rhs = g
                        .omega(t[embedded[k][p * m + q]] as usize)
                        .expect("automorphisms preserve Omega(H)");
                    if lhs != rhs {
                        let images = gens
                            .iter()
                            .map(|&x| shape.format_element(&g.element(t[x] as usize)))
                            .collect();
                        verdict[k] = Some(RingViolation::FullEquivariance {
                            images,
                            a: Generator::Two(p),
                            b: Generator::Two(q),
                        });
                        open -= 1;
                        break 'pairs;
                    }
                }
            }
        }
        if open == 0 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(verdict)
}
