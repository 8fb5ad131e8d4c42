use crate::group::{smallest_prime_factor, InvariantFactors};

use super::{RingError, RingStructure};

/// Largest torsion subgroup exhausted by [`circle_invariant_factors`].
pub const DEFAULT_CIRCLE_LIMIT: u128 = 1 << 20;

pub fn circle_invariant_factors(r: &RingStructure) -> Result<InvariantFactors, RingError> {
    circle_invariant_factors_with(r, DEFAULT_CIRCLE_LIMIT)
}

/// Invariant factors of `(G, o)`: the free rank together with the structure of the torsion
/// subgroup under `o`, read off from how many elements each `o`-power `a -> a^{o p^k}` kills.
pub fn circle_invariant_factors_with(
    r: &RingStructure,
    limit: u128,
) -> Result<InvariantFactors, RingError> {
    let shape = r.shape();
    let order = shape.torsion_order();
    if order > limit {
        return Err(RingError::TorsionBound { order, limit });
    }
    let arith = TorsionCircle::new(r);
    let mut primes: Vec<u64> = Vec::new();
    if shape.two_rank() > 0 {
        primes.push(2);
    }
    for &q in shape.odd_part() {
        let p = smallest_prime_factor(q);
        if !primes.contains(&p) {
            primes.push(p);
        }
    }
    let mut per_prime = Vec::new();
    for p in primes {
        let mut v = 0u32;
        let mut rest = order;
        while rest.is_multiple_of(p as u128) {
            rest /= p as u128;
            v += 1;
        }
        let mut killed = vec![0u128; v as usize + 1];
        let mut a = vec![0u64; arith.radices.len()];
        loop {
            let mut x = a.clone();
            for k in 0..=v as usize {
                if x.iter().all(|&c| c == 0) {
                    for slot in &mut killed[k..] {
                        *slot += 1;
                    }
                    break;
                }
                x = arith.power(&x, p);
            }
            if !arith.step(&mut a) {
                break;
            }
        }
        // log_p |{a : a^{o p^k} = 0}| = sum_i min(k, a_i)
        let logs: Vec<u32> = killed
            .iter()
            .map(|&c| exact_log(c, p))
            .collect::<Option<_>>()
            .ok_or_else(|| {
                RingError::Parse(format!(
                    "circle operation does not define an abelian group (counts {killed:?})"
                ))
            })?;
        let at_least: Vec<u32> = (1..logs.len()).map(|k| logs[k] - logs[k - 1]).collect();
        let mut powers = Vec::new();
        for k in 0..at_least.len() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..at_least[k] - next {
                powers.push((p as u128).pow(k as u32 + 1));
            }
        }
        per_prime.push(powers);
    }
    Ok(InvariantFactors::from_prime_powers(shape.rank(), per_prime))
}

fn exact_log(mut c: u128, p: u64) -> Option<u32> {
    let mut k = 0;
    while c > 1 {
        if !c.is_multiple_of(p as u128) {
            return None;
        }
        c /= p as u128;
        k += 1;
    }
    (c == 1).then_some(k)
}

/// `o` on the torsion subgroup in plain residue coordinates.
struct TorsionCircle<'a> {
    ring: &'a RingStructure,
    radices: Vec<u64>,
    halves: Vec<u64>,
    offset: usize,
}

impl<'a> TorsionCircle<'a> {
    fn new(ring: &'a RingStructure) -> Self {
        let shape = ring.shape();
        TorsionCircle {
            ring,
            radices: shape.torsion_orders(),
            halves: shape.two_part().iter().map(|&e| 1u64 << (e - 1)).collect(),
            offset: shape.rank(),
        }
    }

    fn circle(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.halves.len();
        let sa: Vec<usize> = (0..m)
            .filter(|&l| a[l] & 1 == 1)
            .map(|l| l + self.offset)
            .collect();
        let sb: Vec<usize> = (0..m)
            .filter(|&l| b[l] & 1 == 1)
            .map(|l| l + self.offset)
            .collect();
        let p = self.ring.multiply_support(&sa, &sb);
        let mut c: Vec<u64> = a
            .iter()
            .zip(b)
            .zip(&self.radices)
            .map(|((&x, &y), &q)| ((x as u128 + y as u128) % q as u128) as u64)
            .collect();
        for l in p.ones() {
            c[l] = ((c[l] as u128 + self.halves[l] as u128) % self.radices[l] as u128) as u64;
        }
        c
    }

    fn power(&self, a: &[u64], mut k: u64) -> Vec<u64> {
        let mut acc = vec![0u64; a.len()];
        let mut base = a.to_vec();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.circle(&acc, &base);
            }
            base = self.circle(&base, &base);
            k >>= 1;
        }
        acc
    }

    fn step(&self, a: &mut [u64]) -> bool {
        for (c, &q) in a.iter_mut().zip(&self.radices).rev() {
            *c += 1;
            if *c < q {
                return true;
            }
            *c = 0;
        }
        false
    }
}
