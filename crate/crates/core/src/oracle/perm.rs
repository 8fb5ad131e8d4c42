use std::collections::{HashMap, VecDeque};

use super::OracleError;

/// A permutation of `0..degree`. Products act on the right: `p.then(q)` applies `p` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u16>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u16).collect())
    }

    /// Wraps an image sequence; `None` unless it is a bijection.
    pub fn from_images(images: Vec<u16>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Perm(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<u16>) -> Self {
        debug_assert!(Perm::from_images(images.clone()).is_some());
        Perm(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.0
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        Perm(inv)
    }

    /// `t^{-1} self t`.
    pub fn conjugate_by(&self, t: &Perm) -> Perm {
        let mut out = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[t.0[i] as usize] = t.0[j as usize];
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn is_derangement(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i != j as usize)
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.0.len()];
        let mut acc = 1usize;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            acc = num_integer::lcm(acc, len);
        }
        acc
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &j)| other.0[j as usize] == self.0[other.0[i] as usize])
    }
}

/// A permutation group with its full element list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    lookup: HashMap<Perm, usize>,
}

impl PermGroup {
    /// Closes `generators` under composition; fails once more than `limit` elements appear.
    pub fn generated_by(
        degree: usize,
        generators: Vec<Perm>,
        limit: usize,
    ) -> Result<Self, OracleError> {
        let mut group = PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Perm::identity(degree)],
            lookup: HashMap::new(),
        };
        group.lookup.insert(Perm::identity(degree), 0);
        for g in generators {
            group.extend(g, limit)?;
        }
        Ok(group)
    }

    /// Adds a generator and re-closes. No-op if `g` is already a member.
    pub fn extend(&mut self, g: Perm, limit: usize) -> Result<bool, OracleError> {
        if self.contains(&g) {
            return Ok(false);
        }
        self.generators.push(g);
        let mut queue: VecDeque<usize> = (0..self.elements.len()).collect();
        while let Some(i) = queue.pop_front() {
            for k in 0..self.generators.len() {
                let h = self.elements[i].then(&self.generators[k]);
                if !self.lookup.contains_key(&h) {
                    if self.elements.len() >= limit {
                        return Err(OracleError::ClosureBound { limit });
                    }
                    self.lookup.insert(h.clone(), self.elements.len());
                    queue.push_back(self.elements.len());
                    self.elements.push(h);
                }
            }
        }
        Ok(true)
    }

    /// Group whose element list is known to be closed. Generators are chosen greedily.
    pub fn from_closed_elements(degree: usize, elements: Vec<Perm>) -> Self {
        let mut group = PermGroup::generated_by(degree, Vec::new(), usize::MAX).expect("unbounded");
        for e in &elements {
            group.extend(e.clone(), usize::MAX).expect("unbounded");
        }
        debug_assert_eq!(group.order(), elements.len());
        group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.lookup.contains_key(p)
    }

    pub fn position(&self, p: &Perm) -> Option<usize> {
        self.lookup.get(p).copied()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        for e in &self.elements {
            seen[e.apply(0)] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Transitive with trivial point stabilizers.
    pub fn is_regular(&self) -> bool {
        self.order() == self.degree && self.is_transitive()
    }

    pub fn is_semiregular(&self) -> bool {
        self.elements
            .iter()
            .all(|e| e.is_identity() || e.is_derangement())
    }

    /// `t^{-1} N t = N`, checked on generators.
    pub fn is_normalized_by(&self, t: &Perm) -> bool {
        self.generators
            .iter()
            .all(|g| self.contains(&g.conjugate_by(t)))
    }

    /// Elements sorted; two groups are equal iff their keys are.
    pub fn sorted_elements(&self) -> Vec<Perm> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u16]) -> Perm {
        Perm::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn composition_acts_on_the_right() {
        let a = p(&[1, 2, 0]);
        let b = p(&[1, 0, 2]);
        // 0 -a-> 1 -b-> 0
        assert_eq!(a.then(&b).apply(0), 0);
        assert_eq!(a.then(&a.inverse()), Perm::identity(3));
        assert_eq!(a.order(), 3);
        assert_eq!(b.conjugate_by(&a), a.inverse().then(&b).then(&a));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_none());
        assert!(Perm::from_images(vec![0, 3, 1]).is_none());
    }

    #[test]
    fn symmetric_group_closure() {
        let s4 = PermGroup::generated_by(4, vec![p(&[1, 2, 3, 0]), p(&[1, 0, 2, 3])], 100).unwrap();
        assert_eq!(s4.order(), 24);
        assert!(!s4.is_abelian());
        assert!(s4.is_transitive());
        assert!(!s4.is_regular());
        assert!(PermGroup::generated_by(4, vec![p(&[1, 2, 3, 0]), p(&[1, 0, 2, 3])], 10).is_err());
        let c4 = PermGroup::generated_by(4, vec![p(&[1, 2, 3, 0])], 100).unwrap();
        assert!(c4.is_regular() && c4.is_abelian() && c4.is_semiregular());
        assert!(!c4.is_normalized_by(&p(&[1, 0, 2, 3])));
        assert!(c4.is_normalized_by(&p(&[0, 3, 2, 1])));
    }
}
