use std::sync::{Arc, OnceLock};

use super::{FiniteLieRing, RingElement};
use crate::error::{Error, Result};

/// Groups small enough to cache a full multiplication table.
const TABLE_CAP: usize = 1024;

/// `log(u v)` computed by the truncated CH series.
pub fn ch_multiply(ring: &FiniteLieRing, u: &[u64], v: &[u64]) -> Result<RingElement> {
    ring.ch_plan().evaluate(ring, u, v)
}

/// The group `exp g`: same underlying set, multiplication by `CH`.
#[derive(Debug, Clone)]
pub struct LazardGroup {
    ring: Arc<FiniteLieRing>,
    table: Arc<OnceLock<Vec<u32>>>,
}

impl LazardGroup {
    pub fn new(ring: FiniteLieRing) -> LazardGroup {
        LazardGroup::from_arc(Arc::new(ring))
    }

    pub fn from_arc(ring: Arc<FiniteLieRing>) -> LazardGroup {
        LazardGroup { ring, table: Arc::new(OnceLock::new()) }
    }

    pub fn ring(&self) -> &FiniteLieRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FiniteLieRing> {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.ring.order()
    }

    pub fn multiply(&self, u: &[u64], v: &[u64]) -> RingElement {
        ch_multiply(&self.ring, u, v).expect("CH is evaluable in an admissible ring")
    }

    /// Product of elements given by index; uses a cached table for small groups.
    pub fn mul_index(&self, a: usize, b: usize) -> usize {
        let n = self.order();
        if n <= TABLE_CAP {
            let table = self.table.get_or_init(|| {
                let elems: Vec<RingElement> = self.ring.elements().collect();
                let mut t = Vec::with_capacity(n * n);
                for x in &elems {
                    for y in &elems {
                        t.push(self.ring.index_of(&self.multiply(x, y)) as u32);
                    }
                }
                t
            });
            return table[a * n + b] as usize;
        }
        let r = &self.ring;
        r.index_of(&self.multiply(&r.element(a), &r.element(b)))
    }

    /// Inverse is negation of coordinates.
    pub fn inv_index(&self, a: usize) -> usize {
        let r = &self.ring;
        r.index_of(&r.neg(&r.element(a)))
    }

    /// `g x g^{-1}`.
    pub fn conjugate(&self, g: &[u64], x: &[u64]) -> RingElement {
        self.multiply(&self.multiply(g, x), &self.ring.neg(g))
    }

    /// Indices of `exp(e_i)`.
    pub fn generators(&self) -> Vec<usize> {
        (0..self.ring.rank()).map(|i| self.ring.index_of(&self.ring.basis_vector(i))).collect()
    }
}

/// `Ad(g)` as an additive map, stored by the images of the basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdMatrix {
    pub images: Vec<RingElement>,
}

impl AdMatrix {
    pub fn apply(&self, ring: &FiniteLieRing, x: &[u64]) -> RingElement {
        let mut out = ring.zero();
        for (j, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (m, &v) in self.images[j].iter().enumerate() {
                let r = ring.radix()[m];
                out[m] = (out[m] + super::mulmod(c, v, r)) % r;
            }
        }
        out
    }

    pub fn is_identity(&self, ring: &FiniteLieRing) -> bool {
        self.images.iter().enumerate().all(|(i, v)| *v == ring.basis_vector(i))
    }

    pub fn compose(&self, ring: &FiniteLieRing, other: &AdMatrix) -> AdMatrix {
        AdMatrix { images: other.images.iter().map(|v| self.apply(ring, v)).collect() }
    }
}

/// `x -> log(g e^x g^{-1})`, checked against `e^{ad log g}` and for being an
/// additive and bracket-preserving map.
pub fn ad_action(ring: &FiniteLieRing, g: &[u64]) -> Result<AdMatrix> {
    let d = ring.rank();
    let ginv = ring.neg(g);
    let conj = |x: &[u64]| -> Result<RingElement> {
        let gx = ch_multiply(ring, g, x)?;
        ch_multiply(ring, &gx, &ginv)
    };
    let mut images = Vec::with_capacity(d);
    for j in 0..d {
        let e = ring.basis_vector(j);
        let via_group = conj(&e)?;
        let via_series = ring.exp_ad_plan().evaluate(ring, g, &e)?;
        if via_group != via_series {
            return Err(Error::AutomorphismCheckFailed(format!(
                "Ad({g:?}) e{}: conjugation gives {via_group:?}, e^ad gives {via_series:?}",
                j + 1
            )));
        }
        images.push(via_group);
    }
    let ad = AdMatrix { images };
    for i in 0..d {
        for j in (i + 1)..d {
            let (ei, ej) = (ring.basis_vector(i), ring.basis_vector(j));
            let sum = ring.add(&ei, &ej);
            if conj(&sum)? != ring.add(&ad.images[i], &ad.images[j]) {
                return Err(Error::AutomorphismCheckFailed(format!(
                    "Ad({g:?}) is not additive on e{} + e{}",
                    i + 1,
                    j + 1
                )));
            }
            let br = ring.bracket(&ei, &ej);
            if ad.apply(ring, &br) != ring.bracket(&ad.images[i], &ad.images[j]) {
                return Err(Error::AutomorphismCheckFailed(format!(
                    "Ad({g:?}) does not preserve [e{}, e{}]",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(ad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::{make_ring, Bracket};
    use rand::{Rng, SeedableRng};

    fn heis(p: u64, k: u32) -> FiniteLieRing {
        make_ring(p, &[k, k, k], &[Bracket { i: 0, j: 1, m: 2, c: 1 }]).unwrap()
    }

    #[test]
    fn heisenberg_product_example() {
        let g = heis(3, 1);
        assert_eq!(ch_multiply(&g, &[1, 0, 0], &[0, 1, 0]).unwrap(), vec![1, 1, 2]);
        let x = vec![2, 1, 1];
        assert_eq!(ch_multiply(&g, &x, &g.zero()).unwrap(), x);
        assert_eq!(ch_multiply(&g, &x, &g.neg(&x)).unwrap(), g.zero());
    }

    #[test]
    fn group_axioms_exhaustive_small() {
        for ring in [heis(3, 1), heis(3, 2), make_ring(5, &[1, 2], &[]).unwrap()] {
            let group = LazardGroup::new(ring);
            let n = group.order();
            let step = if n > 100 { 7 } else { 1 };
            for a in (0..n).step_by(step) {
                assert_eq!(group.mul_index(a, 0), a);
                assert_eq!(group.mul_index(a, group.inv_index(a)), 0);
                for b in (0..n).step_by(step) {
                    let ab = group.mul_index(a, b);
                    for c in (0..n).step_by(step * 3) {
                        assert_eq!(group.mul_index(ab, c), group.mul_index(a, group.mul_index(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn ad_examples() {
        let g = heis(3, 1);
        assert!(ad_action(&g, &g.zero()).unwrap().is_identity(&g));
        let ad = ad_action(&g, &[1, 0, 0]).unwrap();
        assert_eq!(ad.images[1], vec![0, 1, 1]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x: Vec<u64> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let a = ad_action(&g, &x).unwrap();
            let b = ad_action(&g, &g.neg(&x)).unwrap();
            assert!(a.compose(&g, &b).is_identity(&g));
        }
    }

    #[test]
    fn uniform_p2_multiplication_is_associative() {
        let ring = make_ring(2, &[3, 3, 3], &[Bracket { i: 0, j: 1, m: 2, c: 4 }]).unwrap();
        let group = LazardGroup::new(ring);
        // e1 e2 = e1 + e2 + (1/2)·4 e3
        let r = group.ring();
        assert_eq!(group.multiply(&[1, 0, 0], &[0, 1, 0]), vec![1, 1, 2]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let [a, b, c]: [usize; 3] = std::array::from_fn(|_| rng.gen_range(0..r.order()));
            assert_eq!(group.mul_index(group.mul_index(a, b), c), group.mul_index(a, group.mul_index(b, c)));
        }
    }
}
