#![allow(dead_code)]

use multiholo::group::GroupShape;

fn partitions(total: u32, largest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if total == 0 {
        out.push(cur.clone());
        return;
    }
    for part in (1..=largest.min(total)).rev() {
        cur.push(part);
        partitions(total - part, part, cur, out);
        cur.pop();
    }
}

/// Non-increasing exponent lists with at most `max_len` parts, each at most `max_part`.
pub fn two_parts(max_len: usize, max_part: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for total in 1..=(max_len as u32 * max_part) {
        let mut all = Vec::new();
        partitions(total, max_part, &mut Vec::new(), &mut all);
        out.extend(all.into_iter().filter(|p| p.len() <= max_len));
    }
    out
}

/// Every finite abelian group of order at most `max`, one shape per isomorphism type.
pub fn finite_shapes(max: u64) -> Vec<GroupShape> {
    let mut shapes = Vec::new();
    for order in 1..=max {
        let mut factors = Vec::new();
        let (mut rest, mut p) = (order, 2u64);
        while rest > 1 {
            let mut k = 0;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            if k > 0 {
                factors.push((p, k));
            }
            p += 1;
        }
        let mut combos: Vec<(Vec<u32>, Vec<u64>)> = vec![(vec![], vec![])];
        for &(p, k) in &factors {
            let mut parts = Vec::new();
            partitions(k, k, &mut Vec::new(), &mut parts);
            let mut next = Vec::new();
            for (two, odd) in &combos {
                for part in &parts {
                    let (mut two, mut odd) = (two.clone(), odd.clone());
                    if p == 2 {
                        two.extend(part);
                    } else {
                        odd.extend(part.iter().map(|&e| p.pow(e)));
                    }
                    next.push((two, odd));
                }
            }
            combos = next;
        }
        for (two, odd) in combos {
            shapes.push(GroupShape::new(0, two, odd).unwrap());
        }
    }
    shapes
}

/// Free ranks 1..=3 paired with the 2-groups of order at most 16.
pub fn infinite_shapes() -> Vec<GroupShape> {
    let mut out = Vec::new();
    for rank in 1..=3 {
        for two in two_parts(4, 4) {
            if two.iter().sum::<u32>() <= 4 {
                out.push(GroupShape::new(rank, two, vec![]).unwrap());
            }
        }
    }
    out
}

pub fn shape(desc: &str) -> GroupShape {
    desc.parse().unwrap()
}
