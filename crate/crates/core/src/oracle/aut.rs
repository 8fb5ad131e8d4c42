use std::ops::ControlFlow;

use crate::group::{AutLabel, AutMap};

use super::finite::FiniteGroup;
use super::OracleError;

/// Default ceiling on `|Aut(G)|` for streamed enumeration.
pub const DEFAULT_AUT_LIMIT: u64 = 1 << 24;

struct Level {
    span: Vec<u16>,
    member: Vec<bool>,
}

/// Streams every automorphism of `g` as a full image table (`table[i]` is the image of element `i`).
///
/// Images of the canonical generators are chosen among elements of the same order, keeping the
/// generated subgroups independent. Returns the number of automorphisms visited; fails once
/// more than `limit` have been produced.
pub fn for_each_automorphism<F>(
    g: &FiniteGroup,
    limit: u64,
    mut visit: F,
) -> Result<u64, OracleError>
where
    F: FnMut(&[u16]) -> ControlFlow<()>,
{
    let n = g.len();
    let orders = g.generator_orders().to_vec();
    let r = orders.len();
    // elements of each required order, with the order-p multiple used for the independence test
    let by_order: Vec<Vec<(u16, u16)>> = orders
        .iter()
        .map(|&o| {
            let p = crate::group::smallest_prime_factor(o as u64);
            (0..n)
                .filter(|&a| g.order(a) == o)
                .map(|a| (a as u16, g.multiple(a, (o as u64) / p) as u16))
                .collect()
        })
        .collect();

    let mut levels = vec![Level {
        span: vec![0],
        member: single(n),
    }];
    let mut cursor = vec![0usize; r];
    let mut images = vec![0u16; r];
    let mut count = 0u64;
    let mut k = 0usize;
    if r == 0 {
        count += 1;
        let _ = visit(&g.extend_images(&images));
        return Ok(count);
    }
    loop {
        if cursor[k] == by_order[k].len() {
            if k == 0 {
                return Ok(count);
            }
            cursor[k] = 0;
            levels.pop();
            k -= 1;
            continue;
        }
        let (a, socle) = by_order[k][cursor[k]];
        cursor[k] += 1;
        let top = levels.last().expect("base level");
        if top.member[socle as usize] {
            continue;
        }
        images[k] = a;
        if k + 1 == r {
            count += 1;
            if count > limit {
                return Err(OracleError::AutBound { limit });
            }
            if visit(&g.extend_images(&images)).is_break() {
                return Ok(count);
            }
            continue;
        }
        let mut span = Vec::with_capacity(top.span.len() * orders[k] as usize);
        let mut member = vec![false; n];
        let mut shift = 0usize;
        for _ in 0..orders[k] {
            for &s in &top.span {
                let x = g.add(s as usize, shift);
                member[x] = true;
                span.push(x as u16);
            }
            shift = g.add(shift, a as usize);
        }
        levels.push(Level { span, member });
        k += 1;
    }
}

fn single(n: usize) -> Vec<bool> {
    let mut v = vec![false; n];
    v[0] = true;
    v
}

pub fn automorphism_count(g: &FiniteGroup, limit: u64) -> Result<u64, OracleError> {
    for_each_automorphism(g, limit, |_| ControlFlow::Continue(()))
}

/// All automorphisms as generator-image maps.
pub fn automorphism_maps(g: &FiniteGroup, limit: u64) -> Result<Vec<AutMap>, OracleError> {
    let shape = g.shape().clone();
    let gens = g.generators().to_vec();
    let mut out = Vec::new();
    for_each_automorphism(g, limit, |t| {
        let images = gens
            .iter()
            .map(|&x| g.element(t[x as usize] as usize))
            .collect();
        out.push(AutMap::new(&shape, images, AutLabel::Anonymous).expect("images conform"));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupShape;

    fn count(desc: &str) -> u64 {
        let shape: GroupShape = desc.parse().unwrap();
        automorphism_count(&FiniteGroup::new(&shape, 1024).unwrap(), DEFAULT_AUT_LIMIT).unwrap()
    }

    #[test]
    fn known_orders() {
        assert_eq!(count("Z8"), 4);
        assert_eq!(count("Z2 x Z2"), 6);
        assert_eq!(count("Z4 x Z2"), 8);
        assert_eq!(count("Z2 x Z2 x Z2"), 168);
        assert_eq!(count("Z6"), 2);
        assert_eq!(count("Z9 x Z3"), 108);
        assert_eq!(count("Z4 x Z4"), 96);
        assert_eq!(count("Z2 x Z2 x Z2 x Z2"), 20160);
    }

    #[test]
    fn tables_are_automorphisms() {
        let shape: GroupShape = "Z4 x Z2 x Z3".parse().unwrap();
        let g = FiniteGroup::new(&shape, 64).unwrap();
        let mut seen = std::collections::HashSet::new();
        for_each_automorphism(&g, 1000, |t| {
            for a in 0..g.len() {
                for b in 0..g.len() {
                    assert_eq!(t[g.add(a, b)] as usize, g.add(t[a] as usize, t[b] as usize));
                }
            }
            let mut sorted = t.to_vec();
            sorted.sort_unstable();
            assert!(sorted.iter().enumerate().all(|(i, &x)| i == x as usize));
            assert!(seen.insert(t.to_vec()));
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn standard_automorphisms_appear() {
        for desc in ["Z8 x Z2", "Z4 x Z4 x Z2", "Z8 x Z8", "Z2 x Z2 x Z2"] {
            let shape: GroupShape = desc.parse().unwrap();
            let g = FiniteGroup::new(&shape, 1024).unwrap();
            let all = automorphism_maps(&g, DEFAULT_AUT_LIMIT).unwrap();
            for f in shape.standard_automorphisms() {
                assert!(
                    all.iter().any(|a| a.images() == f.images()),
                    "{desc}: {} missing",
                    f.label()
                );
            }
        }
    }

    #[test]
    fn limit_is_enforced() {
        let shape: GroupShape = "Z2 x Z2 x Z2".parse().unwrap();
        let g = FiniteGroup::new(&shape, 64).unwrap();
        assert_eq!(
            automorphism_count(&g, 100),
            Err(OracleError::AutBound { limit: 100 })
        );
    }
}
