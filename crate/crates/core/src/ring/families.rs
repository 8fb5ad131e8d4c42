use crate::group::{Generator, GroupShape, Torsion2Vector};
use crate::oracle::{DEFAULT_AUT_LIMIT, HARD_MAX_ORDER};

use super::validate::{
    full_aut_violations, standard_actions, symbolic_violations_with, StandardAction,
};
use super::{RingError, RingStructure};

/// Largest dimension of the equivariant table space searched for extra rings.
pub const DEFAULT_K_SUBSPACE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KSearchOptions {
    /// Largest dimension of the solution space that will be enumerated.
    pub subspace_limit: usize,
    /// Largest number of unknown table bits.
    pub unknown_limit: usize,
    /// Largest finite `|G|` for the full automorphism check.
    pub oracle_bound: usize,
    pub aut_limit: u64,
}

impl Default for KSearchOptions {
    fn default() -> Self {
        KSearchOptions {
            subspace_limit: DEFAULT_K_SUBSPACE_LIMIT,
            unknown_limit: 4096,
            oracle_bound: HARD_MAX_ORDER,
            aut_limit: DEFAULT_AUT_LIMIT,
        }
    }
}

/// Ring structures whose regular subgroup lies in `H(G)`, trivial ring first.
///
/// With `include_k`, also the remaining admissible rings (those with `(G, o)` not isomorphic
/// to `G`), merged into the same ordering. Without it this never fails.
pub fn enumerate_rings(
    shape: &GroupShape,
    include_k: bool,
) -> Result<Vec<RingStructure>, RingError> {
    let mut out = h_rings(shape);
    if include_k {
        out.extend(k_extras(shape, &KSearchOptions::default())?);
        out.sort();
    }
    Ok(out)
}

/// The explicit families. The odd part plays no role.
pub fn h_rings(shape: &GroupShape) -> Vec<RingStructure> {
    let n = shape.rank();
    let e = shape.two_part();
    let m = e.len();
    let t = Torsion2Vector::basis;
    let z = Generator::Free;
    let x = Generator::Two;
    let e_at = |i: usize| e.get(i).copied().unwrap_or(0);
    let tail_drops = m == 2 || e_at(1) > e_at(2);
    type Pair = (Generator, Generator, Torsion2Vector);
    let mut pair_sets: Vec<Vec<Pair>> = vec![Vec::new()];
    // each choice doubles the list: with and without the product
    let choose = |sets: &mut Vec<Vec<Pair>>, p: Pair| {
        let with: Vec<_> = sets
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.push(p);
                s
            })
            .collect();
        sets.extend(with);
    };
    match n {
        0 if m == 1 => {
            if e[0] >= 3 {
                choose(&mut pair_sets, (x(0), x(0), t(0)));
            }
        }
        0 if m >= 2 && e[0] > e[1] => {
            if e[0] >= 3 {
                choose(&mut pair_sets, (x(0), x(0), t(0)));
            }
            if tail_drops {
                choose(&mut pair_sets, (x(0), x(1), t(0)));
            }
        }
        0 if m >= 2 && e[0] == e[1] && e[0] >= 3 && tail_drops => {
            pair_sets.push(vec![
                (x(0), x(0), t(0)),
                (x(1), x(1), t(1)),
                (x(0), x(1), t(0) + t(1)),
            ]);
        }
        1 if m >= 1 => {
            let k = shape.homogeneous_components()[0].len();
            if k == 1 && e[0] >= 2 {
                choose(&mut pair_sets, (z(0), z(0), t(0)));
                choose(&mut pair_sets, (z(0), x(0), t(0)));
            } else if m == 1 && e[0] == 1 {
                choose(&mut pair_sets, (z(0), z(0), t(0)));
            } else if k >= 2 && e[0] >= 2 {
                pair_sets.push((0..k).map(|i| (z(0), x(i), t(i))).collect());
            }
        }
        2 if m >= 1 && (m == 1 || e[0] > e[1]) => {
            choose(&mut pair_sets, (z(0), z(1), t(0)));
        }
        _ => {}
    }
    let mut rings: Vec<RingStructure> = pair_sets
        .iter()
        .map(|pairs| {
            RingStructure::from_pairs(shape, pairs).expect("family products are well formed")
        })
        .collect();
    rings.sort();
    rings
}

/// Admissible rings outside [`h_rings`].
///
/// Standard equivariance is linear in the table bits, so its solution space is computed by
/// elimination over GF(2) and then enumerated; survivors must have vanishing triple products
/// and, on finite shapes, be preserved by every automorphism found by the oracle.
pub fn k_extras(
    shape: &GroupShape,
    opts: &KSearchOptions,
) -> Result<Vec<RingStructure>, RingError> {
    let d = shape.table_dim();
    let m = shape.two_rank();
    let pairs = d * (d + 1) / 2;
    let unknowns = pairs * m;
    if unknowns > opts.unknown_limit {
        return Err(RingError::SearchSpace {
            bits: unknowns,
            limit: opts.unknown_limit,
        });
    }
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let mut pair_index = vec![0usize; d * d];
    let mut k = 0;
    for i in 0..d {
        for j in i..d {
            pair_index[i * d + j] = k;
            pair_index[j * d + i] = k;
            k += 1;
        }
    }
    let var = |i: usize, j: usize, bit: usize| pair_index[i * d + j] * m + bit;

    let mut system = Gf2System::new(unknowns);
    for beta in shape.standard_automorphisms() {
        let action = StandardAction::new(shape, &beta);
        for a in 0..d {
            for b in a..d {
                for bit in 0..m {
                    let mut row = system.empty_row();
                    for &i in action.support(a) {
                        for &j in action.support(b) {
                            toggle(&mut row, var(i, j, bit));
                        }
                    }
                    for l in 0..m {
                        if action.map_omega(Torsion2Vector::basis(l)).contains(bit) {
                            toggle(&mut row, var(a, b, l));
                        }
                    }
                    system.add(row);
                }
            }
        }
    }
    let basis = system.nullspace();
    if basis.len() > opts.subspace_limit {
        return Err(RingError::SearchSpace {
            bits: basis.len(),
            limit: opts.subspace_limit,
        });
    }

    let h = h_rings(shape);
    let actions = standard_actions(shape);
    let mut found = Vec::new();
    let mut current = system.empty_row();
    for step in 0u64..(1u64 << basis.len()) {
        if step > 0 {
            let flip = step.trailing_zeros() as usize;
            for (w, &v) in current.iter_mut().zip(&basis[flip]) {
                *w ^= v;
            }
        }
        let upper: Vec<Torsion2Vector> = (0..pairs)
            .map(|p| {
                let bits =
                    (0..m).filter(|&b| current[(p * m + b) / 64] >> ((p * m + b) % 64) & 1 == 1);
                Torsion2Vector::from_bits(bits.fold(0u64, |acc, b| acc | 1 << b))
            })
            .collect();
        let r = RingStructure::from_upper(shape, &upper);
        if !h.contains(&r) && symbolic_violations_with(&r, &actions, true).is_empty() {
            found.push(r);
        }
    }
    if shape.is_finite() && !found.is_empty() {
        let refs: Vec<&RingStructure> = found.iter().collect();
        let verdict = full_aut_violations(&refs, opts.oracle_bound, opts.aut_limit)?;
        found = found
            .into_iter()
            .zip(verdict)
            .filter(|(_, v)| v.is_none())
            .map(|(r, _)| r)
            .collect();
    }
    found.sort();
    Ok(found)
}

fn toggle(row: &mut [u64], v: usize) {
    row[v / 64] ^= 1 << (v % 64);
}

/// Homogeneous linear system over GF(2), kept in reduced row echelon form.
struct Gf2System {
    vars: usize,
    words: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Gf2System {
    fn new(vars: usize) -> Self {
        Gf2System {
            vars,
            words: vars.div_ceil(64),
            rows: Vec::new(),
        }
    }

    fn empty_row(&self) -> Vec<u64> {
        vec![0; self.words]
    }

    fn add(&mut self, mut row: Vec<u64>) {
        for (pivot, r) in &self.rows {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (w, &x) in row.iter_mut().zip(r) {
                    *w ^= x;
                }
            }
        }
        let Some(pivot) = (0..self.vars).find(|&v| row[v / 64] >> (v % 64) & 1 == 1) else {
            return;
        };
        for (_, r) in &mut self.rows {
            if r[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (w, &x) in r.iter_mut().zip(&row) {
                    *w ^= x;
                }
            }
        }
        self.rows.push((pivot, row));
    }

    fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut is_pivot = vec![false; self.vars];
        for (p, _) in &self.rows {
            is_pivot[*p] = true;
        }
        (0..self.vars)
            .filter(|&v| !is_pivot[v])
            .map(|free| {
                let mut x = self.empty_row();
                toggle(&mut x, free);
                for (p, r) in &self.rows {
                    if r[free / 64] >> (free % 64) & 1 == 1 {
                        toggle(&mut x, *p);
                    }
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(d: &str) -> usize {
        h_rings(&d.parse().unwrap()).len()
    }

    #[test]
    fn family_counts() {
        assert_eq!(count("Z8"), 2);
        assert_eq!(count("Z16 x Z2"), 4);
        assert_eq!(count("Z8 x Z8"), 2);
        assert_eq!(count("Z4"), 1);
        assert_eq!(count("Z^1 x Z4"), 4);
        assert_eq!(count("Z^2 x Z8"), 2);
        assert_eq!(count("Z^1 x Z2"), 2);
        assert_eq!(count("Z^1 x Z4 x Z4"), 2);
        assert_eq!(count("Z^3 x Z8"), 1);
        assert_eq!(count("Z8 x Z2 x Z2"), 2);
        assert_eq!(count("Z4 x Z2"), 2);
    }

    #[test]
    fn trivial_ring_comes_first() {
        let rings = h_rings(&"Z16 x Z2".parse().unwrap());
        assert!(rings[0].is_trivial());
        assert!(rings.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn extras_for_z4() {
        let shape: GroupShape = "Z4".parse().unwrap();
        let all = enumerate_rings(&shape, true).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(enumerate_rings(&shape, false).unwrap().len(), 1);
    }

    #[test]
    fn elimination_finds_the_nullspace() {
        // x0 + x1 = 0, x1 + x2 = 0 over three unknowns
        let mut s = Gf2System::new(3);
        s.add(vec![0b011]);
        s.add(vec![0b110]);
        s.add(vec![0b101]);
        assert_eq!(s.nullspace(), vec![vec![0b111]]);
    }
}
