//! Commutative ring structures `(G, +, .)` with products in `Omega(H)`, `ghk = 0`, and
//! every automorphism of `G` a ring automorphism.
//!
//! Products factor through `G/2G x G/2G`, so a ring is a symmetric table on the free and
//! 2-primary generators; odd generators annihilate everything.

mod circle;
mod families;
mod search;
mod validate;

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::group::{Element, Generator, GroupError, GroupShape, Torsion2Vector};
use crate::oracle::OracleError;

pub use circle::{circle_invariant_factors, circle_invariant_factors_with, DEFAULT_CIRCLE_LIMIT};
pub use families::{enumerate_rings, h_rings, k_extras, KSearchOptions, DEFAULT_K_SUBSPACE_LIMIT};
pub use search::{brute_enumerate_tables, brute_enumerate_tables_with, DEFAULT_BRUTE_LIMIT};
pub use validate::{
    validate_ring, validate_ring_with, RingValidationReport, RingViolation, ValidationOptions,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("odd generator {0} cannot carry a product")]
    OddGenerator(Generator),
    #[error("product value {0} lies outside Omega(H)")]
    OutsideOmega(Torsion2Vector),
    #[error("table has the wrong dimension")]
    Dimension,
    #[error("search space of {bits} bits exceeds the limit of {limit}")]
    SearchSpace { bits: usize, limit: usize },
    #[error("torsion subgroup of order {order} exceeds the limit {limit}")]
    TorsionBound { order: u128, limit: u128 },
    #[error("malformed ring description: {0}")]
    Parse(String),
}

/// Symmetric table of products of the generators `z1..zn, x1..xm`, extended bilinearly mod 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingStructure {
    shape: GroupShape,
    dim: usize,
    table: Vec<Torsion2Vector>,
}

impl RingStructure {
    pub fn trivial(shape: &GroupShape) -> Self {
        let dim = shape.table_dim();
        RingStructure {
            shape: shape.clone(),
            dim,
            table: vec![Torsion2Vector::zero(); dim * dim],
        }
    }

    /// Builds a symmetric table from products of generator pairs; unlisted pairs are zero.
    pub fn from_pairs(
        shape: &GroupShape,
        pairs: &[(Generator, Generator, Torsion2Vector)],
    ) -> Result<Self, RingError> {
        let mut r = RingStructure::trivial(shape);
        for &(a, b, v) in pairs {
            let i = r.slot(a)?;
            let j = r.slot(b)?;
            r.check_value(v)?;
            r.table[i * r.dim + j] = v;
            r.table[j * r.dim + i] = v;
        }
        Ok(r)
    }

    /// Builds a table row by row without symmetrizing, so that malformed input can be validated.
    pub fn from_rows(
        shape: &GroupShape,
        rows: Vec<Vec<Torsion2Vector>>,
    ) -> Result<Self, RingError> {
        let dim = shape.table_dim();
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(RingError::Dimension);
        }
        let r = RingStructure {
            shape: shape.clone(),
            dim,
            table: rows.into_iter().flatten().collect(),
        };
        for &v in &r.table {
            r.check_value(v)?;
        }
        Ok(r)
    }

    /// Symmetric table from the upper-triangle entries in row-major order.
    pub(crate) fn from_upper(shape: &GroupShape, upper: &[Torsion2Vector]) -> Self {
        let mut r = RingStructure::trivial(shape);
        let mut k = 0;
        for i in 0..r.dim {
            for j in i..r.dim {
                r.table[i * r.dim + j] = upper[k];
                r.table[j * r.dim + i] = upper[k];
                k += 1;
            }
        }
        r
    }

    fn slot(&self, g: Generator) -> Result<usize, RingError> {
        match g {
            Generator::Free(i) if i < self.shape.rank() => Ok(i),
            Generator::Two(i) if i < self.shape.two_rank() => Ok(self.shape.rank() + i),
            Generator::Odd(_) => Err(RingError::OddGenerator(g)),
            _ => Err(GroupError::ShapeMismatch.into()),
        }
    }

    fn check_value(&self, v: Torsion2Vector) -> Result<(), RingError> {
        let m = self.shape.two_rank();
        if m < 64 && v.bits() >> m != 0 {
            return Err(RingError::OutsideOmega(v));
        }
        Ok(())
    }

    pub fn shape(&self) -> &GroupShape {
        &self.shape
    }

    /// Number `n + m` of table generators.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry for table positions `i`, `j` (free generators first).
    pub fn entry(&self, i: usize, j: usize) -> Torsion2Vector {
        self.table[i * self.dim + j]
    }

    /// Product of two canonical generators.
    pub fn product(&self, a: Generator, b: Generator) -> Torsion2Vector {
        match (self.slot(a), self.slot(b)) {
            (Ok(i), Ok(j)) => self.entry(i, j),
            _ => Torsion2Vector::zero(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|v| v.is_zero())
    }

    /// Upper-triangle entries in row-major order; rings are ordered by this key.
    pub fn upper(&self) -> Vec<Torsion2Vector> {
        let mut out = Vec::with_capacity(self.dim * (self.dim + 1) / 2);
        for i in 0..self.dim {
            for j in i..self.dim {
                out.push(self.entry(i, j));
            }
        }
        out
    }

    /// Positions (in table order) of the generators with odd coefficient in `a`.
    pub(crate) fn odd_support(&self, a: &Element) -> Vec<usize> {
        self.shape
            .mod2_coords(a)
            .into_iter()
            .enumerate()
            .filter_map(|(i, b)| b.then_some(i))
            .collect()
    }

    pub(crate) fn multiply_support(&self, a: &[usize], b: &[usize]) -> Torsion2Vector {
        let mut acc = Torsion2Vector::zero();
        for &i in a {
            for &j in b {
                acc += self.table[i * self.dim + j];
            }
        }
        acc
    }

    /// `a . b`, an element of `Omega(H)`.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Torsion2Vector, RingError> {
        if !self.shape.conforms(a) || !self.shape.conforms(b) {
            return Err(GroupError::ShapeMismatch.into());
        }
        Ok(self.multiply_support(&self.odd_support(a), &self.odd_support(b)))
    }

    /// `a o b = a + b + a.b`.
    pub fn circle(&self, a: &Element, b: &Element) -> Result<Element, RingError> {
        let p = self.multiply(a, b)?;
        Ok(self
            .shape
            .add_unchecked(&self.shape.add_unchecked(a, b), &self.shape.embed(p)))
    }

    /// Pair keys such as `z1*x1` with their values, zero entries omitted, in table order.
    pub fn nonzero_products(&self) -> Vec<(String, Torsion2Vector)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.entry(i, j);
                if !v.is_zero() {
                    out.push((
                        format!(
                            "{}*{}",
                            self.shape.table_generator(i),
                            self.shape.table_generator(j)
                        ),
                        v,
                    ));
                }
            }
        }
        out
    }

    /// JSON object mapping `gi*gj` to `t1+t2`-style sums.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in self.nonzero_products() {
            map.insert(k, Value::String(v.to_string()));
        }
        Value::Object(map)
    }

    pub fn from_json(shape: &GroupShape, value: &Value) -> Result<Self, RingError> {
        let obj = value
            .as_object()
            .ok_or_else(|| RingError::Parse("expected an object".into()))?;
        let mut pairs = Vec::new();
        for (k, v) in obj {
            let (a, b) = k
                .split_once('*')
                .ok_or_else(|| RingError::Parse(k.clone()))?;
            let v = v
                .as_str()
                .ok_or_else(|| RingError::Parse(format!("value of {k}")))?;
            pairs.push((a.trim().parse()?, b.trim().parse()?, v.parse()?));
        }
        RingStructure::from_pairs(shape, &pairs)
    }
}

impl PartialOrd for RingStructure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RingStructure {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shape
            .cmp(&other.shape)
            .then_with(|| self.upper().cmp(&other.upper()))
    }
}

impl fmt::Display for RingStructure {
    /// One line per nonzero product, `x1*x1 = t1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let products = self.nonzero_products();
        if products.is_empty() {
            return f.write_str("all products zero");
        }
        let lines: Vec<String> = products
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}"))
            .collect();
        f.write_str(&lines.join("\n"))
    }
}

/// Parity of `a(a-1)/2`, the coefficient of `g^2` in `f(a g)`.
pub(crate) fn binomial2_is_odd(a: &num_bigint::BigInt) -> bool {
    let r = a.mod_floor(&num_bigint::BigInt::from(4u8));
    r == num_bigint::BigInt::from(2u8) || r == num_bigint::BigInt::from(3u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn t(s: &str) -> Torsion2Vector {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_on_rank_one() {
        let shape: GroupShape = "Z^1 x Z4".parse().unwrap();
        let z = Generator::Free(0);
        let x = Generator::Two(0);
        let r = RingStructure::from_pairs(&shape, &[(z, z, t("t1")), (z, x, t("t1"))]).unwrap();
        let zx = shape.add(&shape.generator(z), &shape.generator(x)).unwrap();
        assert_eq!(r.multiply(&zx, &shape.generator(x)).unwrap(), t("t1"));
        let two_z = shape.scale(&shape.generator(z), &BigInt::from(2)).unwrap();
        assert!(r.multiply(&two_z, &shape.generator(z)).unwrap().is_zero());
    }

    #[test]
    fn circle_examples() {
        let z4: GroupShape = "Z4".parse().unwrap();
        let x = Generator::Two(0);
        let r = RingStructure::from_pairs(&z4, &[(x, x, t("t1"))]).unwrap();
        assert!(r
            .circle(&z4.generator(x), &z4.generator(x))
            .unwrap()
            .is_zero());
        let z8: GroupShape = "Z8".parse().unwrap();
        let r = RingStructure::from_pairs(&z8, &[(x, x, t("t1"))]).unwrap();
        assert_eq!(
            r.circle(&z8.generator(x), &z8.generator(x))
                .unwrap()
                .two_coords(),
            &[6]
        );
        let triv = RingStructure::trivial(&z8);
        let a = z8.torsion_element(&[3], &[]).unwrap();
        let b = z8.torsion_element(&[6], &[]).unwrap();
        assert_eq!(triv.circle(&a, &b).unwrap(), z8.add(&a, &b).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let shape: GroupShape = "Z8 x Z8".parse().unwrap();
        let (x1, x2) = (Generator::Two(0), Generator::Two(1));
        let r = RingStructure::from_pairs(
            &shape,
            &[(x1, x1, t("t1")), (x2, x2, t("t2")), (x1, x2, t("t1+t2"))],
        )
        .unwrap();
        let j = r.to_json();
        assert_eq!(
            j.to_string(),
            r#"{"x1*x1":"t1","x1*x2":"t1+t2","x2*x2":"t2"}"#
        );
        assert_eq!(RingStructure::from_json(&shape, &j).unwrap(), r);
        assert_eq!(r.to_string(), "x1*x1 = t1\nx1*x2 = t1+t2\nx2*x2 = t2");
    }

    #[test]
    fn rejects_bad_pairs() {
        let shape: GroupShape = "Z8 x Z3".parse().unwrap();
        assert!(matches!(
            RingStructure::from_pairs(&shape, &[(Generator::Odd(0), Generator::Two(0), t("t1"))]),
            Err(RingError::OddGenerator(_))
        ));
        assert!(matches!(
            RingStructure::from_pairs(&shape, &[(Generator::Two(0), Generator::Two(0), t("t2"))]),
            Err(RingError::OutsideOmega(_))
        ));
    }
}
