use crate::group::{GroupShape, Torsion2Vector};
use crate::oracle::{DEFAULT_AUT_LIMIT, HARD_MAX_ORDER};

use super::validate::{full_aut_violations, standard_actions, symbolic_violations_with};
use super::{RingError, RingStructure};

/// Default search budget in table bits.
pub const DEFAULT_BRUTE_LIMIT: usize = 20;

pub fn brute_enumerate_tables(
    shape: &GroupShape,
    limit: usize,
) -> Result<Vec<RingStructure>, RingError> {
    brute_enumerate_tables_with(shape, limit, HARD_MAX_ORDER, DEFAULT_AUT_LIMIT)
}

/// Every symmetric table with entries in `Omega(H)` that passes validation, tried one by one.
///
/// Finite shapes are additionally filtered by equivariance under the whole automorphism group.
pub fn brute_enumerate_tables_with(
    shape: &GroupShape,
    limit: usize,
    oracle_bound: usize,
    aut_limit: u64,
) -> Result<Vec<RingStructure>, RingError> {
    let d = shape.table_dim();
    let m = shape.two_rank();
    let pairs = d * (d + 1) / 2;
    let bits = pairs * m;
    if bits > limit || bits >= 64 {
        return Err(RingError::SearchSpace { bits, limit });
    }
    let actions = standard_actions(shape);
    let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut found = Vec::new();
    for code in 0u64..(1u64 << bits) {
        let upper: Vec<Torsion2Vector> = (0..pairs)
            .map(|p| Torsion2Vector::from_bits((code >> (p * m)) & mask))
            .collect();
        let r = RingStructure::from_upper(shape, &upper);
        if symbolic_violations_with(&r, &actions, true).is_empty() {
            found.push(r);
        }
    }
    if shape.is_finite() {
        let refs: Vec<&RingStructure> = found.iter().collect();
        let verdict = full_aut_violations(&refs, oracle_bound, aut_limit)?;
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
