use std::collections::{HashMap, VecDeque};

use super::{FiniteLieRing, RingElement};
use crate::error::{Error, Result};

/// The additive span of some ring elements, required to be closed under the bracket.
#[derive(Debug, Clone)]
pub struct Subring {
    generators: Vec<RingElement>,
    /// Element indices in the ambient ring, sorted.
    elements: Vec<usize>,
    local: HashMap<usize, usize>,
}

impl Subring {
    pub fn span(ring: &FiniteLieRing, generators: &[RingElement]) -> Result<Subring> {
        let zero = ring.index_of(&ring.zero());
        let mut seen = HashMap::from([(zero, ())]);
        let mut queue = VecDeque::from([ring.zero()]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = ring.add(&x, g);
                if seen.insert(ring.index_of(&y), ()).is_none() {
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<usize> = seen.into_keys().collect();
        elements.sort_unstable();
        let local = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let sub = Subring { generators: generators.to_vec(), elements, local };
        for a in generators {
            for b in generators {
                let c = ring.bracket(a, b);
                if !sub.contains(ring.index_of(&c)) {
                    return Err(Error::SubringNotClosed(format!("[{a:?}, {b:?}] = {c:?}")));
                }
            }
        }
        Ok(sub)
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, ambient_index: usize) -> bool {
        self.local.contains_key(&ambient_index)
    }

    /// Position of an ambient element inside the subring's element list.
    pub fn local_index(&self, ambient_index: usize) -> Option<usize> {
        self.local.get(&ambient_index).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::{make_ring, Bracket};

    #[test]
    fn center_and_closure() {
        let g = make_ring(3, &[1, 1, 1], &[Bracket { i: 0, j: 1, m: 2, c: 1 }]).unwrap();
        let z = Subring::span(&g, &[vec![0, 0, 1]]).unwrap();
        assert_eq!(z.order(), 3);
        let err = Subring::span(&g, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap_err();
        assert!(matches!(err, Error::SubringNotClosed(_)));
        let h = Subring::span(&g, &[vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(h.order(), 9);
    }
}
