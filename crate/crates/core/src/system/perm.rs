use std::collections::{HashSet, VecDeque};

use serde::Serialize;

/// A permutation of `{0, .., n-1}` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// `None` unless `images` is a bijection of `{0, .., len-1}`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `x -> other(self(x))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Order of a generated group, or a lower bound when the element cap was hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupOrder {
    Exact(usize),
    AtLeast(usize),
}

impl GroupOrder {
    pub fn exact(self) -> Option<usize> {
        match self {
            GroupOrder::Exact(n) => Some(n),
            GroupOrder::AtLeast(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupClosure {
    pub order: GroupOrder,
    /// Sorted elements; complete only when `order` is exact.
    pub elements: Vec<Permutation>,
}

pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// Breadth-first closure of the group generated by `generators` on `degree` points.
pub fn generate(degree: usize, generators: &[Permutation], cap: usize) -> GroupClosure {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let mut capped = false;
    'bfs: while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = g.then(s);
            if !seen.contains(&h) {
                if seen.len() >= cap {
                    capped = true;
                    break 'bfs;
                }
                seen.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort();
    let order = if capped { GroupOrder::AtLeast(cap) } else { GroupOrder::Exact(elements.len()) };
    GroupClosure { order, elements }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_from_transposition_and_cycle() {
        let t = Permutation::from_images(vec![1, 0, 2, 3]).unwrap();
        let c = Permutation::from_images(vec![1, 2, 3, 0]).unwrap();
        let g = generate(4, &[t, c], 1000);
        assert_eq!(g.order, GroupOrder::Exact(24));
    }

    #[test]
    fn cap_is_reported() {
        let t = Permutation::from_images(vec![1, 0, 2, 3]).unwrap();
        let c = Permutation::from_images(vec![1, 2, 3, 0]).unwrap();
        let g = generate(4, &[t, c], 10);
        assert_eq!(g.order, GroupOrder::AtLeast(10));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_none());
        assert!(Permutation::from_images(vec![0, 2]).is_none());
    }

    #[test]
    fn inverse_and_composition() {
        let c = Permutation::from_images(vec![1, 2, 0]).unwrap();
        assert!(c.then(&c.inverse()).is_identity());
        assert_eq!(c.then(&c).images(), &[2, 0, 1]);
    }
}
