use serde::{Deserialize, Serialize};

use super::ActionError;
use crate::models::Isometry;

/// Default cap on the number of enumerated elements.
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;
/// Relative max-norm tolerance for identifying two products.
pub const DEDUP_TOL: f64 = 1e-9;

/// A group element with one reduced word producing it. Letters are
/// `+k` for generator `k` (1-based) and `−k` for its inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub word: Vec<i32>,
    pub isometry: Isometry,
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

/// Products of generators up to a word length, deduplicated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElementSet {
    pub generators: Vec<Isometry>,
    pub word_length: usize,
    pub elements: Vec<GroupElement>,
}

impl GroupElementSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].isometry.dim()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    /// Elements other than the identity word.
    pub fn nontrivial(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter().filter(|e| !e.is_identity())
    }

    /// Adds elements given directly (e.g. an inverse already present),
    /// keeping deduplication.
    pub fn with_extra(mut self, extra: impl IntoIterator<Item = GroupElement>) -> Self {
        let mut index = DedupIndex::default();
        for (i, e) in self.elements.iter().enumerate() {
            index.insert(&e.isometry, i);
        }
        for e in extra {
            if index.find(&e.isometry, &self.elements).is_none() {
                index.insert(&e.isometry, self.elements.len());
                self.elements.push(e);
            }
        }
        self
    }
}

/// Lookup of near-equal matrices, bucketed by the `(0, 0)` entry.
#[derive(Default)]
struct DedupIndex {
    keys: std::collections::BTreeMap<i64, Vec<usize>>,
}

impl DedupIndex {
    fn key(g: &Isometry) -> i64 {
        // m₀₀ = cosh of the displacement of e₀, always ≥ 1; bucket its log.
        (g.matrix()[(0, 0)].max(1.0).ln() * 1e6).floor() as i64
    }

    fn insert(&mut self, g: &Isometry, idx: usize) {
        self.keys.entry(Self::key(g)).or_default().push(idx);
    }

    fn find(&self, g: &Isometry, elems: &[GroupElement]) -> Option<usize> {
        let k = Self::key(g);
        let exact = g.is_integral();
        (k - 1..=k + 1)
            .filter_map(|b| self.keys.get(&b))
            .flatten()
            .copied()
            .find(|&i| {
                let other = &elems[i].isometry;
                if exact && other.is_integral() {
                    other.matrix() == g.matrix()
                } else {
                    g.relative_gap(other) <= DEDUP_TOL
                }
            })
    }
}

/// All products of reduced words of length `≤ max_len` in the generators
/// and their inverses, deduplicated. Always contains the identity and is
/// closed under inverses.
pub fn word_ball(generators: &[Isometry], max_len: usize) -> Result<GroupElementSet, ActionError> {
    word_ball_capped(generators, max_len, DEFAULT_ELEMENT_CAP)
}

pub fn word_ball_capped(generators: &[Isometry], max_len: usize, cap: usize) -> Result<GroupElementSet, ActionError> {
    let n = generators.first().map(Isometry::dim).ok_or(ActionError::NoGenerators)?;
    if let Some(g) = generators.iter().find(|g| g.dim() != n) {
        return Err(ActionError::DimensionMismatch {
            expected: n,
            got: g.dim(),
        });
    }
    let letters: Vec<(i32, Isometry)> = generators
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [((i + 1) as i32, g.clone()), (-((i + 1) as i32), g.inverse())])
        .collect();

    let mut elements = vec![GroupElement {
        word: Vec::new(),
        isometry: Isometry::identity(n),
    }];
    let mut index = DedupIndex::default();
    index.insert(&elements[0].isometry, 0);
    // Frontier keeps every reduced word of the current length, including
    // ones whose product was already seen, so that the enumeration is over
    // reduced words rather than over a Cayley-graph ball.
    let mut frontier: Vec<(Vec<i32>, Isometry)> = vec![(Vec::new(), Isometry::identity(n))];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for (word, g) in &frontier {
            for (letter, h) in &letters {
                if word.last() == Some(&-letter) {
                    continue;
                }
                let mut w = word.clone();
                w.push(*letter);
                let prod = g.compose(h);
                if index.find(&prod, &elements).is_none() {
                    index.insert(&prod, elements.len());
                    elements.push(GroupElement {
                        word: w.clone(),
                        isometry: prod.clone(),
                    });
                    if elements.len() > cap {
                        return Err(ActionError::ElementCap { cap });
                    }
                }
                next.push((w, prod));
            }
        }
        frontier = next;
        if frontier.len() > cap.saturating_mul(4) {
            return Err(ActionError::ElementCap { cap });
        }
    }
    Ok(GroupElementSet {
        generators: generators.to_vec(),
        word_length: max_len,
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_length_is_identity() {
        let s = word_ball(&[Isometry::boost(2, 1, 2.0)], 0).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.elements[0].is_identity());
    }

    #[test]
    fn cyclic_ball() {
        let s = word_ball(&[Isometry::boost(2, 1, 2.0)], 3).unwrap();
        assert_eq!(s.len(), 7);
        let mut lens: Vec<i32> = s.iter().map(|e| e.word.iter().sum()).collect();
        lens.sort();
        assert_eq!(lens, vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn free_pair_counts() {
        let a = Isometry::boost(2, 1, 2.0);
        let b = Isometry::boost(2, 2, 2.0);
        assert_eq!(word_ball(&[a.clone(), b.clone()], 2).unwrap().len(), 17);
        assert_eq!(word_ball(&[a, b], 3).unwrap().len(), 53);
    }

    #[test]
    fn finite_group_collapses() {
        let r = Isometry::rotation(2, 1, 2, std::f64::consts::FRAC_PI_2);
        let s = word_ball(&[r], 6).unwrap();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn inverse_closed() {
        let a = Isometry::boost(2, 1, 1.0).compose(&Isometry::rotation(2, 1, 2, 0.5));
        let b = Isometry::boost(2, 2, 1.5);
        let s = word_ball(&[a, b], 3).unwrap();
        for e in s.iter() {
            let inv = e.isometry.inverse();
            assert!(s.iter().any(|f| f.isometry.relative_gap(&inv) < 1e-9));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let a = Isometry::boost(2, 1, 2.0);
        let b = Isometry::boost(2, 2, 2.0);
        assert_eq!(word_ball_capped(&[a, b], 6, 100), Err(ActionError::ElementCap { cap: 100 }));
        assert_eq!(word_ball(&[], 2), Err(ActionError::NoGenerators));
    }
}
