use crate::group::{Element, ElementIndexer, GroupShape, Torsion2Vector};

use super::OracleError;

/// Hard ceiling on `|G|` for any table-driven computation.
pub const HARD_MAX_ORDER: usize = 1024;

/// Cayley table of a small finite abelian group, with elements numbered by [`ElementIndexer`].
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    indexer: ElementIndexer,
    n: usize,
    add: Vec<u16>,
    neg: Vec<u16>,
    orders: Vec<u32>,
    gens: Vec<u16>,
    gen_orders: Vec<u32>,
    strides: Vec<usize>,
    last_nonzero: Vec<u8>,
    mod2: Vec<u64>,
    omega: Vec<Option<Torsion2Vector>>,
}

impl FiniteGroup {
    pub fn new(shape: &GroupShape, max_order: usize) -> Result<Self, OracleError> {
        let limit = max_order.min(HARD_MAX_ORDER);
        let indexer = ElementIndexer::new(shape, limit)?;
        let n = indexer.len();
        let radices = shape.torsion_orders();
        let r = radices.len();
        let mut strides = vec![1usize; r];
        for k in (0..r.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * radices[k + 1] as usize;
        }
        let coords: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                radices
                    .iter()
                    .zip(&strides)
                    .map(|(&q, &s)| (i / s) as u64 % q)
                    .collect()
            })
            .collect();
        let index_of = |c: &[u64]| {
            c.iter()
                .zip(&strides)
                .map(|(&x, &s)| x as usize * s)
                .sum::<usize>()
        };

        let mut add = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let sum: Vec<u64> = coords[a]
                    .iter()
                    .zip(&coords[b])
                    .zip(&radices)
                    .map(|((&x, &y), &q)| (x + y) % q)
                    .collect();
                add[a * n + b] = index_of(&sum) as u16;
            }
        }
        let neg: Vec<u16> = (0..n)
            .map(|a| {
                let c: Vec<u64> = coords[a]
                    .iter()
                    .zip(&radices)
                    .map(|(&x, &q)| (q - x) % q)
                    .collect();
                index_of(&c) as u16
            })
            .collect();
        let mut orders = vec![1u32; n];
        for (a, slot) in orders.iter_mut().enumerate() {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = add[x * n + a] as usize;
                k += 1;
            }
            *slot = if a == 0 { 1 } else { k };
        }
        let gens: Vec<u16> = strides.iter().map(|&s| s as u16).collect();
        let gen_orders = radices.iter().map(|&q| q as u32).collect();
        let last_nonzero = coords
            .iter()
            .map(|c| c.iter().rposition(|&x| x != 0).map_or(u8::MAX, |k| k as u8))
            .collect();
        let m = shape.two_rank();
        let mod2 = coords
            .iter()
            .map(|c| {
                c[..m]
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &x)| acc | ((x & 1) << i))
            })
            .collect();
        let omega = (0..n)
            .map(|i| shape.omega_coords(&indexer.element(i)))
            .collect();
        Ok(FiniteGroup {
            indexer,
            n,
            add,
            neg,
            orders,
            gens,
            gen_orders,
            strides,
            last_nonzero,
            mod2,
            omega,
        })
    }

    pub fn shape(&self) -> &GroupShape {
        self.indexer.shape()
    }

    pub fn indexer(&self) -> &ElementIndexer {
        &self.indexer
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn order(&self, a: usize) -> u32 {
        self.orders[a]
    }

    pub fn multiple(&self, a: usize, mut k: u64) -> usize {
        let mut acc = 0;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element(&self, i: usize) -> Element {
        self.indexer.element(i)
    }

    pub fn index(&self, a: &Element) -> usize {
        self.indexer.index(a)
    }

    /// Indices of the canonical torsion generators (2-part, then odd part).
    pub fn generators(&self) -> &[u16] {
        &self.gens
    }

    pub fn generator_orders(&self) -> &[u32] {
        &self.gen_orders
    }

    /// Coordinates of `x1..xm` modulo 2 as a bit mask.
    pub fn mod2_bits(&self, a: usize) -> u64 {
        self.mod2[a]
    }

    /// `Some` iff `a` lies in `Omega(H)`.
    pub fn omega(&self, a: usize) -> Option<Torsion2Vector> {
        self.omega[a]
    }

    pub fn embed(&self, t: Torsion2Vector) -> usize {
        self.index(&self.shape().embed(t))
    }

    /// Tabulates the endomorphism sending the canonical generators to `images`.
    pub fn extend_images(&self, images: &[u16]) -> Vec<u16> {
        let mut out = vec![0u16; self.n];
        for idx in 1..self.n {
            let k = self.last_nonzero[idx] as usize;
            out[idx] = self.add(out[idx - self.strides[k]] as usize, images[k] as usize) as u16;
        }
        out
    }
}
