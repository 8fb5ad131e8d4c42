//! Finitely generated abelian groups `Z^n x H x K` with `H` a 2-group and `K` of odd order.
//!
//! A [`GroupShape`] stores normalized invariants. Generators are ordered as
//! `z1..zn` (free), `x1..xm` (2-primary, orders non-increasing), then `y1..yk`
//! (odd primary factors, grouped by ascending prime, descending power).

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest supported 2-primary exponent (`x_i` of order at most `2^63`).
pub const MAX_TWO_EXPONENT: u32 = 63;
/// Largest supported number of 2-primary factors.
pub const MAX_TWO_FACTORS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed group descriptor term `{0}`")]
    Syntax(String),
    #[error("cyclic factor of order {0} is not allowed (order must be at least 2)")]
    Domain(u64),
    #[error("element does not conform to the group shape")]
    ShapeMismatch,
    #[error("at most {MAX_TWO_FACTORS} 2-primary factors are supported, got {0}")]
    TooManyTwoFactors(usize),
    #[error("2-primary exponent {0} exceeds the supported maximum {MAX_TWO_EXPONENT}")]
    ExponentTooLarge(u32),
    #[error("torsion subgroup order exceeds 2^127")]
    TorsionTooLarge,
    #[error("group of order {order} exceeds the bound {limit}")]
    OrderBound { order: String, limit: usize },
    #[error("operation requires a finite group")]
    Infinite,
}

/// Normalized invariants of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupShape {
    rank: usize,
    two_part: Vec<u32>,
    odd_part: Vec<u64>,
}

impl GroupShape {
    /// Builds a normalized shape. `odd_factors` may hold arbitrary odd cyclic orders;
    /// they are split into prime powers.
    pub fn new(
        rank: usize,
        mut two_part: Vec<u32>,
        odd_factors: Vec<u64>,
    ) -> Result<Self, GroupError> {
        if let Some(&e) = two_part.iter().find(|&&e| e == 0) {
            return Err(GroupError::Domain(1u64 << e));
        }
        if let Some(&e) = two_part.iter().find(|&&e| e > MAX_TWO_EXPONENT) {
            return Err(GroupError::ExponentTooLarge(e));
        }
        if two_part.len() > MAX_TWO_FACTORS {
            return Err(GroupError::TooManyTwoFactors(two_part.len()));
        }
        two_part.sort_unstable_by(|a, b| b.cmp(a));
        let mut powers: Vec<(u64, u64)> = Vec::new();
        for q in odd_factors {
            if q < 2 {
                return Err(GroupError::Domain(q));
            }
            if q % 2 == 0 {
                return Err(GroupError::Syntax(format!("odd factor {q}")));
            }
            powers.extend(prime_power_factors(q));
        }
        powers.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let odd_part: Vec<u64> = powers.into_iter().map(|(_, q)| q).collect();
        let shape = GroupShape {
            rank,
            two_part,
            odd_part,
        };
        let bits: u32 = shape.two_part.iter().sum::<u32>()
            + shape
                .odd_part
                .iter()
                .map(|&q| 64 - q.leading_zeros())
                .sum::<u32>();
        if bits > 127 && shape.checked_torsion_order().is_none() {
            return Err(GroupError::TorsionTooLarge);
        }
        Ok(shape)
    }

    /// Group of the form `Z^rank x Z_{2^e1} x ...` with no odd part.
    pub fn from_parts(rank: usize, two_part: &[u32]) -> Result<Self, GroupError> {
        Self::new(rank, two_part.to_vec(), Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Exponents `e1 >= e2 >= ... >= em`; `x_i` has order `2^{e_i}`.
    pub fn two_part(&self) -> &[u32] {
        &self.two_part
    }

    /// Odd primary components as prime powers.
    pub fn odd_part(&self) -> &[u64] {
        &self.odd_part
    }

    /// Number `m` of 2-primary cyclic factors.
    pub fn two_rank(&self) -> usize {
        self.two_part.len()
    }

    /// Number of free plus 2-primary generators, i.e. the dimension of `G/2G`.
    pub fn table_dim(&self) -> usize {
        self.rank + self.two_part.len()
    }

    pub fn generator_count(&self) -> usize {
        self.rank + self.two_part.len() + self.odd_part.len()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn two_order(&self, i: usize) -> u64 {
        1u64 << self.two_part[i]
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u128 {
        self.checked_torsion_order()
            .expect("checked at construction")
    }

    fn checked_torsion_order(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for &e in &self.two_part {
            acc = acc.checked_mul(1u128 << e)?;
        }
        for &q in &self.odd_part {
            acc = acc.checked_mul(q as u128)?;
        }
        Some(acc)
    }

    /// Group order, `None` for infinite groups.
    pub fn order(&self) -> Option<u128> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Same group with the odd part dropped.
    pub fn without_odd_part(&self) -> GroupShape {
        GroupShape {
            rank: self.rank,
            two_part: self.two_part.clone(),
            odd_part: Vec::new(),
        }
    }

    /// Torsion subgroup as a finite shape.
    pub fn torsion_shape(&self) -> GroupShape {
        GroupShape {
            rank: 0,
            two_part: self.two_part.clone(),
            odd_part: self.odd_part.clone(),
        }
    }

    /// Cyclic orders of all torsion generators in coordinate order (2-part, then odd part).
    pub fn torsion_orders(&self) -> Vec<u64> {
        self.two_part
            .iter()
            .map(|&e| 1u64 << e)
            .chain(self.odd_part.iter().copied())
            .collect()
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (0..self.rank)
            .map(Generator::Free)
            .chain((0..self.two_part.len()).map(Generator::Two))
            .chain((0..self.odd_part.len()).map(Generator::Odd))
    }

    /// Generator at position `k` of the `G/2G` basis (free generators first).
    pub fn table_generator(&self, k: usize) -> Generator {
        if k < self.rank {
            Generator::Free(k)
        } else {
            Generator::Two(k - self.rank)
        }
    }

    /// Invariant factors `d1 | d2 | ...` of the torsion part, together with the rank.
    pub fn invariant_factors(&self) -> InvariantFactors {
        let mut by_prime: Vec<(u64, Vec<u128>)> = Vec::new();
        if !self.two_part.is_empty() {
            by_prime.push((2, self.two_part.iter().map(|&e| 1u128 << e).collect()));
        }
        for &q in &self.odd_part {
            let p = smallest_prime_factor(q);
            match by_prime.iter_mut().find(|(pp, _)| *pp == p) {
                Some((_, v)) => v.push(q as u128),
                None => by_prime.push((p, vec![q as u128])),
            }
        }
        InvariantFactors::from_prime_powers(
            self.rank,
            by_prime.into_iter().map(|(_, v)| v).collect(),
        )
    }

    // ---- elements -------------------------------------------------------

    pub fn zero(&self) -> Element {
        Element {
            free: vec![BigInt::zero(); self.rank],
            two: vec![0; self.two_part.len()],
            odd: vec![0; self.odd_part.len()],
        }
    }

    /// Element with the given coordinates; torsion coordinates are reduced.
    pub fn element(
        &self,
        free: Vec<BigInt>,
        two: &[i128],
        odd: &[i128],
    ) -> Result<Element, GroupError> {
        if free.len() != self.rank
            || two.len() != self.two_part.len()
            || odd.len() != self.odd_part.len()
        {
            return Err(GroupError::ShapeMismatch);
        }
        let two = two
            .iter()
            .zip(&self.two_part)
            .map(|(&c, &e)| c.rem_euclid(1i128 << e) as u64)
            .collect();
        let odd = odd
            .iter()
            .zip(&self.odd_part)
            .map(|(&c, &q)| c.rem_euclid(q as i128) as u64)
            .collect();
        Ok(Element { free, two, odd })
    }

    /// Finite-group element from torsion coordinates.
    pub fn torsion_element(&self, two: &[i128], odd: &[i128]) -> Result<Element, GroupError> {
        self.element(vec![BigInt::zero(); self.rank], two, odd)
    }

    pub fn generator(&self, g: Generator) -> Element {
        let mut e = self.zero();
        match g {
            Generator::Free(i) => e.free[i] = BigInt::one(),
            Generator::Two(i) => e.two[i] = 1 % self.two_order(i),
            Generator::Odd(i) => e.odd[i] = 1,
        }
        e
    }

    /// The involution `t_i = 2^{e_i - 1} x_i` (0-based `i`).
    pub fn involution(&self, i: usize) -> Element {
        let mut e = self.zero();
        e.two[i] = 1u64 << (self.two_part[i] - 1);
        e
    }

    pub fn conforms(&self, a: &Element) -> bool {
        a.free.len() == self.rank
            && a.two.len() == self.two_part.len()
            && a.odd.len() == self.odd_part.len()
            && a.two
                .iter()
                .zip(&self.two_part)
                .all(|(&c, &e)| (c as u128) < (1u128 << e))
            && a.odd.iter().zip(&self.odd_part).all(|(&c, &q)| c < q)
    }

    fn check(&self, a: &Element) -> Result<(), GroupError> {
        if self.conforms(a) {
            Ok(())
        } else {
            Err(GroupError::ShapeMismatch)
        }
    }

    /// Componentwise sum with torsion coordinates reduced.
    pub fn add(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn neg(&self, a: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, &self.neg_unchecked(b)))
    }

    /// `k * a`, the `|k|`-fold sum of `a` (or of `-a` for negative `k`).
    pub fn scale(&self, a: &Element, k: &BigInt) -> Result<Element, GroupError> {
        self.check(a)?;
        Ok(self.scale_unchecked(a, k))
    }

    pub(crate) fn add_unchecked(&self, a: &Element, b: &Element) -> Element {
        Element {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            two: a
                .two
                .iter()
                .zip(&b.two)
                .zip(&self.two_part)
                .map(|((&x, &y), &e)| ((x as u128 + y as u128) % (1u128 << e)) as u64)
                .collect(),
            odd: a
                .odd
                .iter()
                .zip(&b.odd)
                .zip(&self.odd_part)
                .map(|((&x, &y), &q)| ((x as u128 + y as u128) % q as u128) as u64)
                .collect(),
        }
    }

    pub(crate) fn neg_unchecked(&self, a: &Element) -> Element {
        Element {
            free: a.free.iter().map(|x| -x).collect(),
            two: a
                .two
                .iter()
                .zip(&self.two_part)
                .map(|(&x, &e)| (((1u128 << e) - x as u128) % (1u128 << e)) as u64)
                .collect(),
            odd: a
                .odd
                .iter()
                .zip(&self.odd_part)
                .map(|(&x, &q)| (q - x) % q)
                .collect(),
        }
    }

    pub(crate) fn scale_unchecked(&self, a: &Element, k: &BigInt) -> Element {
        Element {
            free: a.free.iter().map(|x| x * k).collect(),
            two: a
                .two
                .iter()
                .zip(&self.two_part)
                .map(|(&x, &e)| mul_mod(x, k, 1u64 << e))
                .collect(),
            odd: a
                .odd
                .iter()
                .zip(&self.odd_part)
                .map(|(&x, &q)| mul_mod(x, k, q))
                .collect(),
        }
    }

    pub(crate) fn scale_small(&self, a: &Element, k: i64) -> Element {
        self.scale_unchecked(a, &BigInt::from(k))
    }

    /// Least `k >= 1` with `k * a = 0`.
    pub fn element_order(&self, a: &Element) -> Result<ElementOrder, GroupError> {
        self.check(a)?;
        if a.free.iter().any(|x| !x.is_zero()) {
            return Ok(ElementOrder::Infinite);
        }
        let mut acc: u128 = 1;
        for (&c, &e) in a.two.iter().zip(&self.two_part) {
            acc = acc.lcm(&cyclic_order(c as u128, 1u128 << e));
        }
        for (&c, &q) in a.odd.iter().zip(&self.odd_part) {
            acc = acc.lcm(&cyclic_order(c as u128, q as u128));
        }
        Ok(ElementOrder::Finite(acc))
    }

    /// Embeds a sum `sum eta_i t_i` of involutions into the group.
    pub fn embed(&self, t: Torsion2Vector) -> Element {
        let mut e = self.zero();
        for i in t.ones() {
            e.two[i] = 1u64 << (self.two_part[i] - 1);
        }
        e
    }

    /// Inverse of [`embed`](Self::embed): `Some` iff `a` lies in `Omega(H)`.
    pub fn omega_coords(&self, a: &Element) -> Option<Torsion2Vector> {
        if a.free.iter().any(|x| !x.is_zero()) || a.odd.iter().any(|&x| x != 0) {
            return None;
        }
        let mut t = Torsion2Vector::zero();
        for (i, (&c, &e)) in a.two.iter().zip(&self.two_part).enumerate() {
            if c == 1u64 << (e - 1) {
                t.set(i);
            } else if c != 0 {
                return None;
            }
        }
        Some(t)
    }

    /// Coordinates modulo 2 on the `G/2G` basis (free generators first).
    pub fn mod2_coords(&self, a: &Element) -> Vec<bool> {
        a.free
            .iter()
            .map(|x| x.is_odd())
            .chain(a.two.iter().map(|&c| c & 1 == 1))
            .collect()
    }

    /// Renders an element as `z1+6*x1`, with `0` for the identity.
    pub fn format_element(&self, a: &Element) -> String {
        let mut terms: Vec<String> = Vec::new();
        let mut push = |c: String, name: String| {
            if c == "1" {
                terms.push(name);
            } else if c == "-1" {
                terms.push(format!("-{name}"));
            } else {
                terms.push(format!("{c}*{name}"));
            }
        };
        for (i, x) in a.free.iter().enumerate() {
            if !x.is_zero() {
                push(x.to_string(), Generator::Free(i).to_string());
            }
        }
        for (i, &x) in a.two.iter().enumerate() {
            if x != 0 {
                push(x.to_string(), Generator::Two(i).to_string());
            }
        }
        for (i, &x) in a.odd.iter().enumerate() {
            if x != 0 {
                push(x.to_string(), Generator::Odd(i).to_string());
            }
        }
        if terms.is_empty() {
            return "0".to_owned();
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            if !t.starts_with('-') {
                out.push('+');
            }
            out.push_str(t);
        }
        out
    }

    // ---- automorphisms --------------------------------------------------

    /// Image of `a` under the homomorphic extension of `f`'s generator images.
    pub fn apply(&self, f: &AutMap, a: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        if f.images.len() != self.generator_count() || !f.images.iter().all(|x| self.conforms(x)) {
            return Err(GroupError::ShapeMismatch);
        }
        Ok(self.apply_unchecked(f, a))
    }

    pub(crate) fn apply_unchecked(&self, f: &AutMap, a: &Element) -> Element {
        let mut acc = self.zero();
        let coeffs = a
            .free
            .iter()
            .cloned()
            .chain(a.two.iter().map(|&c| BigInt::from(c)))
            .chain(a.odd.iter().map(|&c| BigInt::from(c)));
        for (c, img) in coeffs.zip(&f.images) {
            if !c.is_zero() {
                acc = self.add_unchecked(&acc, &self.scale_unchecked(img, &c));
            }
        }
        acc
    }

    /// `f` then `g`, i.e. `a -> g(f(a))`.
    pub fn compose(&self, f: &AutMap, g: &AutMap) -> AutMap {
        AutMap {
            images: f
                .images
                .iter()
                .map(|x| self.apply_unchecked(g, x))
                .collect(),
            label: AutLabel::Anonymous,
        }
    }

    /// Maximal runs of equal `e_i`, as 0-based index ranges into `x1..xm`.
    pub fn homogeneous_components(&self) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.two_part.len() {
            if i == self.two_part.len() || self.two_part[i] != self.two_part[start] {
                out.push(start..i);
                start = i;
            }
        }
        out
    }

    /// The generating family `xi_ij`, `gamma_ij`, `beta_ij`, `Xi_ij`, `Gamma_ij`, `zeta_{i,x_j}`.
    pub fn standard_automorphisms(&self) -> Vec<AutMap> {
        let m = self.two_part.len();
        let n = self.rank;
        let mut out = Vec::new();
        let with = |changes: &[(Generator, Element)], label: AutLabel| {
            let mut f = AutMap::identity(self);
            f.label = label;
            for (g, img) in changes {
                f.images[self.position(*g)] = img.clone();
            }
            f
        };
        for block in self.homogeneous_components() {
            for i in block.clone() {
                for j in (i + 1)..block.end {
                    out.push(with(
                        &[
                            (Generator::Two(i), self.generator(Generator::Two(j))),
                            (Generator::Two(j), self.generator(Generator::Two(i))),
                        ],
                        AutLabel::Exchange(i, j),
                    ));
                }
            }
        }
        for i in 0..m {
            for j in (i + 1)..m {
                let img = self.add_unchecked(
                    &self.generator(Generator::Two(i)),
                    &self.generator(Generator::Two(j)),
                );
                out.push(with(&[(Generator::Two(i), img)], AutLabel::Shear(i, j)));
            }
        }
        for i in 0..m {
            for j in 0..i {
                let lift = self.scale_unchecked(
                    &self.generator(Generator::Two(j)),
                    &BigInt::from(1u64 << (self.two_part[j] - self.two_part[i])),
                );
                let img = self.add_unchecked(&self.generator(Generator::Two(i)), &lift);
                out.push(with(&[(Generator::Two(i), img)], AutLabel::Lift(i, j)));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(with(
                    &[
                        (Generator::Free(i), self.generator(Generator::Free(j))),
                        (Generator::Free(j), self.generator(Generator::Free(i))),
                    ],
                    AutLabel::FreeExchange(i, j),
                ));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let img = self.add_unchecked(
                        &self.generator(Generator::Free(i)),
                        &self.generator(Generator::Free(j)),
                    );
                    out.push(with(
                        &[(Generator::Free(i), img)],
                        AutLabel::FreeShear(i, j),
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..m {
                let img = self.add_unchecked(
                    &self.generator(Generator::Free(i)),
                    &self.generator(Generator::Two(j)),
                );
                out.push(with(
                    &[(Generator::Free(i), img)],
                    AutLabel::FreeTwist(i, j),
                ));
            }
        }
        out
    }

    /// Position of a generator in the canonical ordering.
    pub fn position(&self, g: Generator) -> usize {
        match g {
            Generator::Free(i) => i,
            Generator::Two(i) => self.rank + i,
            Generator::Odd(i) => self.rank + self.two_part.len() + i,
        }
    }

    /// Whether `f` is an automorphism: torsion images have dividing order, the free block
    /// is unimodular and the induced map on every socle is injective.
    pub fn is_automorphism(&self, f: &AutMap) -> bool {
        if f.images.len() != self.generator_count() || !f.images.iter().all(|x| self.conforms(x)) {
            return false;
        }
        let n = self.rank;
        let torsion = self.torsion_orders();
        for (k, &ord) in torsion.iter().enumerate() {
            match self.element_order(&f.images[n + k]) {
                Ok(ElementOrder::Finite(o)) if (ord as u128).is_multiple_of(o) => {}
                _ => return false,
            }
        }
        let free_block: Vec<Vec<BigInt>> =
            f.images[..n].iter().map(|img| img.free.clone()).collect();
        if !determinant(free_block).abs().is_one() && n > 0 {
            return false;
        }
        // socle injectivity, one prime at a time
        let mut primes: Vec<u64> = Vec::new();
        if !self.two_part.is_empty() {
            primes.push(2);
        }
        for &q in &self.odd_part {
            let p = smallest_prime_factor(q);
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        for p in primes {
            let factors: Vec<usize> = (0..torsion.len())
                .filter(|&k| torsion[k].is_multiple_of(p))
                .collect();
            let coords = |e: &Element, k: usize| -> u64 {
                if k < self.two_part.len() {
                    e.two[k]
                } else {
                    e.odd[k - self.two_part.len()]
                }
            };
            let mut rows: Vec<Vec<u64>> = Vec::new();
            for &k in &factors {
                let soc = BigInt::from(torsion[k] / p);
                let img = self.scale_unchecked(&f.images[n + k], &soc);
                let row = factors
                    .iter()
                    .map(|&l| {
                        let c = coords(&img, l);
                        let step = torsion[l] / p;
                        (c / step) % p
                    })
                    .collect();
                rows.push(row);
            }
            if rank_mod_p(rows, p) != factors.len() {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for GroupShape {
    /// Normalized descriptor, e.g. `Z^2 x Z8 x Z2 x Z3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        if self.rank > 0 {
            terms.push(format!("Z^{}", self.rank));
        }
        terms.extend(self.two_part.iter().map(|&e| format!("Z{}", 1u128 << e)));
        terms.extend(self.odd_part.iter().map(|q| format!("Z{q}")));
        if terms.is_empty() {
            return f.write_str("Z^0");
        }
        f.write_str(&terms.join(" x "))
    }
}

impl FromStr for GroupShape {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_group_descriptor(s)
    }
}

/// Parses `Group := Term (" x " Term)*`, `Term := "Z" | "Z^" NAT | "Z" NAT`.
pub fn parse_group_descriptor(text: &str) -> Result<GroupShape, GroupError> {
    let text = text.trim();
    let mut rank = 0usize;
    let mut two = Vec::new();
    let mut odd = Vec::new();
    for term in text.split(" x ") {
        let rest = term
            .strip_prefix('Z')
            .ok_or_else(|| GroupError::Syntax(term.to_owned()))?;
        if rest.is_empty() {
            rank += 1;
        } else if let Some(k) = rest.strip_prefix('^') {
            rank += parse_nat(k).ok_or_else(|| GroupError::Syntax(term.to_owned()))? as usize;
        } else {
            let q = parse_nat(rest).ok_or_else(|| GroupError::Syntax(term.to_owned()))?;
            if q < 2 {
                return Err(GroupError::Domain(q));
            }
            let e = q.trailing_zeros();
            if e > 0 {
                two.push(e);
            }
            if q >> e > 1 {
                odd.push(q >> e);
            }
        }
    }
    GroupShape::new(rank, two, odd)
}

fn parse_nat(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Invariant factor decomposition: free rank plus torsion factors `d1 | d2 | ...` (ascending).
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct InvariantFactors {
    pub rank: usize,
    pub torsion: Vec<u128>,
}

impl InvariantFactors {
    /// Combines per-prime lists of cyclic prime-power orders.
    pub fn from_prime_powers(rank: usize, mut per_prime: Vec<Vec<u128>>) -> Self {
        for v in &mut per_prime {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut torsion: Vec<u128> = (0..len)
            .map(|k| per_prime.iter().filter_map(|v| v.get(k)).product())
            .collect();
        torsion.reverse();
        InvariantFactors { rank, torsion }
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(u128::to_string).collect();
        write!(f, "rank {} torsion [{}]", self.rank, t.join(", "))
    }
}

/// Canonical generator names: `z{i+1}`, `x{i+1}`, `y{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Free(usize),
    Two(usize),
    Odd(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Free(i) => write!(f, "z{}", i + 1),
            Generator::Two(i) => write!(f, "x{}", i + 1),
            Generator::Odd(i) => write!(f, "y{}", i + 1),
        }
    }
}

impl FromStr for Generator {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::Syntax(s.to_owned());
        let (head, idx) = s.split_at(1.min(s.len()));
        let i = parse_nat(idx).filter(|&i| i >= 1).ok_or_else(bad)? as usize - 1;
        match head {
            "z" => Ok(Generator::Free(i)),
            "x" => Ok(Generator::Two(i)),
            "y" => Ok(Generator::Odd(i)),
            _ => Err(bad()),
        }
    }
}

/// Coordinates of a group element over the canonical generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    free: Vec<BigInt>,
    two: Vec<u64>,
    odd: Vec<u64>,
}

impl Element {
    pub fn free_coords(&self) -> &[BigInt] {
        &self.free
    }

    pub fn two_coords(&self) -> &[u64] {
        &self.two
    }

    pub fn odd_coords(&self) -> &[u64] {
        &self.odd
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero)
            && self.two.iter().all(|&c| c == 0)
            && self.odd.iter().all(|&c| c == 0)
    }

    pub fn is_torsion(&self) -> bool {
        self.free.iter().all(Zero::is_zero)
    }

    /// Coefficient on a generator, as an integer (torsion coefficients are the stored residues).
    pub fn coeff(&self, g: Generator) -> BigInt {
        match g {
            Generator::Free(i) => self.free[i].clone(),
            Generator::Two(i) => BigInt::from(self.two[i]),
            Generator::Odd(i) => BigInt::from(self.odd[i]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ElementOrder {
    Finite(u128),
    Infinite,
}

/// Element of `Omega(H)` written as `sum eta_i t_i`; bit `i` stands for `t_{i+1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Torsion2Vector(u64);

impl Torsion2Vector {
    pub const fn zero() -> Self {
        Torsion2Vector(0)
    }

    pub const fn from_bits(bits: u64) -> Self {
        Torsion2Vector(bits)
    }

    /// The single involution `t_{i+1}`.
    pub const fn basis(i: usize) -> Self {
        Torsion2Vector(1 << i)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn ones(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 >> i & 1 == 1)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for Torsion2Vector {
    type Output = Torsion2Vector;

    fn add(self, rhs: Self) -> Self {
        Torsion2Vector(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl std::ops::AddAssign for Torsion2Vector {
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for Torsion2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.ones().map(|i| format!("t{}", i + 1)).collect();
        f.write_str(&terms.join("+"))
    }
}

impl FromStr for Torsion2Vector {
    type Err = GroupError;

    /// Parses `0`, `t1`, `t1+t3`, ... (repeated terms cancel in pairs).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Torsion2Vector(0));
        }
        let mut v = Torsion2Vector(0);
        for term in s.split('+') {
            let term = term.trim();
            let i = term
                .strip_prefix('t')
                .and_then(parse_nat)
                .filter(|&i| (1..=64).contains(&i))
                .ok_or_else(|| GroupError::Syntax(term.to_owned()))?;
            v += Torsion2Vector::basis(i as usize - 1);
        }
        Ok(v)
    }
}

/// Which member of the standard family an [`AutMap`] is (indices 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AutLabel {
    /// `xi_ij`: swap `x_i`, `x_j` in one homogeneous component.
    Exchange(usize, usize),
    /// `gamma_ij` (`i < j`): `x_i -> x_i + x_j`.
    Shear(usize, usize),
    /// `beta_ij` (`i > j`): `x_i -> x_i + 2^{e_j - e_i} x_j`.
    Lift(usize, usize),
    /// `Xi_ij`: swap `z_i`, `z_j`.
    FreeExchange(usize, usize),
    /// `Gamma_ij`: `z_i -> z_i + z_j`.
    FreeShear(usize, usize),
    /// `zeta_{i,x_j}`: `z_i -> z_i + x_j`.
    FreeTwist(usize, usize),
    Anonymous,
}

impl fmt::Display for AutLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AutLabel::Exchange(i, j) => write!(f, "xi_{}{}", i + 1, j + 1),
            AutLabel::Shear(i, j) => write!(f, "gamma_{}{}", i + 1, j + 1),
            AutLabel::Lift(i, j) => write!(f, "beta_{}{}", i + 1, j + 1),
            AutLabel::FreeExchange(i, j) => write!(f, "Xi_{}{}", i + 1, j + 1),
            AutLabel::FreeShear(i, j) => write!(f, "Gamma_{}{}", i + 1, j + 1),
            AutLabel::FreeTwist(i, j) => write!(f, "zeta_{},x{}", i + 1, j + 1),
            AutLabel::Anonymous => f.write_str("anonymous"),
        }
    }
}

/// A group endomorphism given by the images of the canonical generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutMap {
    images: Vec<Element>,
    label: AutLabel,
}

impl AutMap {
    pub fn new(
        shape: &GroupShape,
        images: Vec<Element>,
        label: AutLabel,
    ) -> Result<Self, GroupError> {
        if images.len() != shape.generator_count() || !images.iter().all(|x| shape.conforms(x)) {
            return Err(GroupError::ShapeMismatch);
        }
        Ok(AutMap { images, label })
    }

    pub fn identity(shape: &GroupShape) -> Self {
        AutMap {
            images: shape.generators().map(|g| shape.generator(g)).collect(),
            label: AutLabel::Anonymous,
        }
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn label(&self) -> AutLabel {
        self.label
    }

    pub fn image_of(&self, shape: &GroupShape, g: Generator) -> &Element {
        &self.images[shape.position(g)]
    }
}

fn mul_mod(x: u64, k: &BigInt, modulus: u64) -> u64 {
    let k = k
        .mod_floor(&BigInt::from(modulus))
        .to_u64()
        .expect("residue fits");
    ((x as u128 * k as u128) % modulus as u128) as u64
}

fn cyclic_order(c: u128, n: u128) -> u128 {
    n / c.gcd(&n)
}

pub(crate) fn smallest_prime_factor(q: u64) -> u64 {
    if q.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= q {
        if q.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    q
}

/// Splits `q` into `(prime, prime power)` pairs.
fn prime_power_factors(mut q: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    while q > 1 {
        let p = smallest_prime_factor(q);
        let mut pk = 1u64;
        while q.is_multiple_of(p) {
            q /= p;
            pk *= p;
        }
        out.push((p, pk));
    }
    out
}

/// Fraction-free (Bareiss) determinant.
fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let factor = (rows[r][c] as u128 * inv as u128 % p as u128) as u64;
                for cc in 0..cols {
                    let sub = (factor as u128 * rows[rank][cc] as u128 % p as u128) as u64;
                    rows[r][cc] = (rows[r][cc] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = b as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Bijection between a finite group and `0..|G|`, lexicographic in the torsion coordinates
/// (first coordinate most significant). Index 0 is the identity.
#[derive(Clone, Debug)]
pub struct ElementIndexer {
    shape: GroupShape,
    radices: Vec<u64>,
    size: usize,
}

impl ElementIndexer {
    pub fn new(shape: &GroupShape, limit: usize) -> Result<Self, GroupError> {
        if !shape.is_finite() {
            return Err(GroupError::Infinite);
        }
        let order = shape.torsion_order();
        if order > limit as u128 {
            return Err(GroupError::OrderBound {
                order: order.to_string(),
                limit,
            });
        }
        Ok(ElementIndexer {
            shape: shape.clone(),
            radices: shape.torsion_orders(),
            size: order as usize,
        })
    }

    pub fn shape(&self) -> &GroupShape {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, a: &Element) -> usize {
        a.two
            .iter()
            .chain(&a.odd)
            .zip(&self.radices)
            .fold(0usize, |acc, (&c, &r)| acc * r as usize + c as usize)
    }

    pub fn element(&self, mut idx: usize) -> Element {
        let mut coords = vec![0u64; self.radices.len()];
        for (slot, &r) in coords.iter_mut().zip(&self.radices).rev() {
            *slot = (idx % r as usize) as u64;
            idx /= r as usize;
        }
        let m = self.shape.two_rank();
        Element {
            free: Vec::new(),
            two: coords[..m].to_vec(),
            odd: coords[m..].to_vec(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size).map(|i| self.element(i))
    }
}
