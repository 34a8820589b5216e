//! Pontryagin duality for the additive group of a ring, the two convolutions
//! (additive on `g`, CH on `G`), the Fourier transform and inner products.
//!
//! Character values are exact residues modulo `p^K`; complex numbers appear
//! only when functions are materialized. Haar measures have total mass 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liering::{mulmod, pow, FiniteLieRing, LazardGroup};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// An element of `g*`: `x -> ζ^{Σ a_i x_i p^{K - k_i}}` with `ζ = e^{2πi/p^K}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualCharacter {
    pub exponents: Vec<u64>,
}

/// `ζ^k` for `k` modulo `p^K`.
#[derive(Debug, Clone)]
pub struct RootTable {
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(ring: &FiniteLieRing) -> RootTable {
        let n = pow(ring.p(), ring.max_exponent());
        let roots =
            (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
        RootTable { roots }
    }

    pub fn modulus(&self) -> u64 {
        self.roots.len() as u64
    }

    pub fn root(&self, k: u64) -> Complex64 {
        self.roots[k as usize]
    }
}

/// Exact pairing exponent `Σ a_i x_i p^{K - k_i}` modulo `p^K`.
pub fn pairing_exponent(ring: &FiniteLieRing, a: &[u64], x: &[u64]) -> u64 {
    let big = pow(ring.p(), ring.max_exponent());
    let mut e = 0u64;
    for ((&ai, &xi), &k) in a.iter().zip(x).zip(ring.moduli()) {
        if ai == 0 || xi == 0 {
            continue;
        }
        let w = pow(ring.p(), ring.max_exponent() - k);
        e = (e + mulmod(mulmod(ai, xi, big), w, big)) % big;
    }
    e
}

/// All characters of `g`, indexed like ring elements.
pub fn enumerate_dual(ring: &FiniteLieRing) -> Vec<DualCharacter> {
    ring.elements().map(|exponents| DualCharacter { exponents }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Group,
    Ring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Domain {
    pub kind: DomainKind,
    pub order: usize,
    pub fingerprint: u64,
}

impl Domain {
    pub fn group(ring: &FiniteLieRing) -> Domain {
        Domain { kind: DomainKind::Group, order: ring.order(), fingerprint: ring.fingerprint() }
    }

    pub fn ring(ring: &FiniteLieRing) -> Domain {
        Domain { kind: DomainKind::Ring, order: ring.order(), fingerprint: ring.fingerprint() }
    }
}

/// A complex function on `G` or on `g`, stored densely in element order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    pub domain: Domain,
    pub values: Vec<Complex64>,
    pub tolerance: f64,
}

impl ClassFunction {
    pub fn new(domain: Domain, values: Vec<Complex64>) -> ClassFunction {
        assert_eq!(values.len(), domain.order);
        ClassFunction { domain, values, tolerance: DEFAULT_TOLERANCE }
    }

    pub fn zero(domain: Domain) -> ClassFunction {
        ClassFunction::new(domain, vec![Complex64::new(0.0, 0.0); domain.order])
    }

    pub fn constant(domain: Domain, c: Complex64) -> ClassFunction {
        ClassFunction::new(domain, vec![c; domain.order])
    }

    /// `|domain| δ_0`, the unit for convolution.
    pub fn unit(domain: Domain) -> ClassFunction {
        let mut f = ClassFunction::zero(domain);
        f.values[0] = Complex64::new(domain.order as f64, 0.0);
        f
    }

    /// Indicator of a set of element indices.
    pub fn indicator(domain: Domain, support: &[usize]) -> ClassFunction {
        let mut f = ClassFunction::zero(domain);
        for &i in support {
            f.values[i] = Complex64::new(1.0, 0.0);
        }
        f
    }

    /// A dual character viewed as a function on `g`.
    pub fn from_character(ring: &FiniteLieRing, roots: &RootTable, f: &DualCharacter) -> ClassFunction {
        let values = ring.elements().map(|x| roots.root(pairing_exponent(ring, &f.exponents, &x))).collect();
        ClassFunction::new(Domain::ring(ring), values)
    }

    /// `exp^*`: the same values read on `g` through the coordinate identification.
    pub fn pull_to_ring(&self) -> ClassFunction {
        let mut f = self.clone();
        f.domain.kind = DomainKind::Ring;
        f
    }

    pub fn push_to_group(&self) -> ClassFunction {
        let mut f = self.clone();
        f.domain.kind = DomainKind::Group;
        f
    }

    pub fn scale(&self, c: Complex64) -> ClassFunction {
        let mut f = self.clone();
        f.values.iter_mut().for_each(|v| *v *= c);
        f
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        same_domain(self, other)?;
        let mut f = self.clone();
        f.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a += b);
        Ok(f)
    }

    /// Largest pointwise distance.
    pub fn max_deviation(&self, other: &ClassFunction) -> Result<f64> {
        same_domain(self, other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn support(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, v)| v.norm() > 0.0).map(|(i, _)| i).collect()
    }

    /// Constant on each part of a labelled partition, within tolerance.
    pub fn is_constant_on(&self, labels: &[usize]) -> bool {
        let parts = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut first: Vec<Option<Complex64>> = vec![None; parts];
        self.values.iter().zip(labels).all(|(v, &l)| match first[l] {
            None => {
                first[l] = Some(*v);
                true
            }
            Some(w) => (v - w).norm() <= self.tolerance,
        })
    }
}

fn same_domain(a: &ClassFunction, b: &ClassFunction) -> Result<()> {
    if a.domain != b.domain {
        return Err(Error::DomainMismatch(format!("{:?} vs {:?}", a.domain, b.domain)));
    }
    Ok(())
}

/// A function on `g*`, indexed like [`enumerate_dual`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualFunction {
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Additive,
    Group,
}

/// `(f1 * f2)(γ) = (1/|Π|) Σ_h f1(h) f2(h^{-1} γ)`; the law must match the domain.
pub fn convolve(group: &LazardGroup, f1: &ClassFunction, f2: &ClassFunction, law: Law) -> Result<ClassFunction> {
    same_domain(f1, f2)?;
    let ring = group.ring();
    let expected = match law {
        Law::Additive => Domain::ring(ring),
        Law::Group => Domain::group(ring),
    };
    if f1.domain != expected {
        return Err(Error::DomainMismatch(format!("{law:?} convolution on {:?}", f1.domain)));
    }
    let n = ring.order();
    let mut out = ClassFunction::zero(f1.domain);
    let s1 = f1.support();
    let s2 = f2.support();
    let elems: Vec<Vec<u64>> = if law == Law::Additive { ring.elements().collect() } else { Vec::new() };
    for &h in &s1 {
        let a = f1.values[h];
        for &k in &s2 {
            let target = match law {
                Law::Group => group.mul_index(h, k),
                Law::Additive => ring.index_of(&ring.add(&elems[h], &elems[k])),
            };
            out.values[target] += a * f2.values[k];
        }
    }
    let inv = 1.0 / n as f64;
    out.values.iter_mut().for_each(|v| *v *= inv);
    Ok(out)
}

/// Convolution of functions constant on the parts of a partition (conjugacy
/// classes, or adjoint orbits for the additive law). The result is again
/// constant on the parts, so only one value per part is computed. The table
/// of `label(h^{-1} z)` for every element `h` and part representative `z` is
/// built once, which makes repeated convolutions cheap.
pub struct ClassConvolver {
    domain: Domain,
    labels: Vec<usize>,
    representatives: Vec<usize>,
    table: Vec<u32>,
}

impl ClassConvolver {
    pub fn new(group: &LazardGroup, law: Law, labels: &[usize]) -> Result<ClassConvolver> {
        let ring = group.ring();
        let n = ring.order();
        if labels.len() != n {
            return Err(Error::DomainMismatch(format!("{} labels for {} elements", labels.len(), n)));
        }
        let parts = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut representatives = vec![usize::MAX; parts];
        for (x, &l) in labels.iter().enumerate() {
            if representatives[l] == usize::MAX {
                representatives[l] = x;
            }
        }
        let elems: Vec<Vec<u64>> = ring.elements().collect();
        let inverse: Vec<usize> = elems.iter().map(|x| ring.index_of(&ring.neg(x))).collect();
        let mut table = Vec::with_capacity(parts * n);
        for &z in &representatives {
            for h in 0..n {
                let k = match law {
                    Law::Group => group.mul_index(inverse[h], z),
                    Law::Additive => ring.index_of(&ring.add(&elems[inverse[h]], &elems[z])),
                };
                table.push(labels[k] as u32);
            }
        }
        let domain = match law {
            Law::Additive => Domain::ring(ring),
            Law::Group => Domain::group(ring),
        };
        Ok(ClassConvolver { domain, labels: labels.to_vec(), representatives, table })
    }

    pub fn parts(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    /// Values of `f` at the part representatives; errors unless `f` is constant on parts.
    pub fn restrict(&self, f: &ClassFunction) -> Result<Vec<Complex64>> {
        if f.domain != self.domain {
            return Err(Error::DomainMismatch(format!("{:?} vs {:?}", f.domain, self.domain)));
        }
        if !f.is_constant_on(&self.labels) {
            return Err(Error::NotInvariant("function is not constant on the given classes".into()));
        }
        Ok(self.representatives.iter().map(|&z| f.values[z]).collect())
    }

    pub fn expand(&self, per_part: &[Complex64]) -> ClassFunction {
        ClassFunction::new(self.domain, self.labels.iter().map(|&l| per_part[l]).collect())
    }

    /// Convolution on per-part values.
    pub fn convolve_parts(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let n = self.labels.len();
        let inv = 1.0 / n as f64;
        let weights: Vec<Complex64> = self.labels.iter().map(|&l| a[l]).collect();
        self.table
            .chunks(n)
            .map(|row| {
                let s: Complex64 =
                    weights.iter().zip(row).filter(|(w, _)| w.norm_sqr() > 0.0).map(|(w, &k)| w * b[k as usize]).sum();
                s * inv
            })
            .collect()
    }

    pub fn convolve(&self, f1: &ClassFunction, f2: &ClassFunction) -> Result<ClassFunction> {
        let a = self.restrict(f1)?;
        let b = self.restrict(f2)?;
        Ok(self.expand(&self.convolve_parts(&a, &b)))
    }
}

/// One-off [`ClassConvolver`] convolution.
pub fn convolve_invariant(
    group: &LazardGroup,
    f1: &ClassFunction,
    f2: &ClassFunction,
    law: Law,
    labels: &[usize],
) -> Result<ClassFunction> {
    same_domain(f1, f2)?;
    ClassConvolver::new(group, law, labels)?.convolve(f1, f2)
}

/// `(F f)(φ) = (1/|g|) Σ_h f(h) conj(φ(h))`.
pub fn fourier(ring: &FiniteLieRing, roots: &RootTable, f: &ClassFunction) -> Result<DualFunction> {
    if f.domain != Domain::ring(ring) {
        return Err(Error::DomainMismatch("fourier expects a function on g".into()));
    }
    let elems: Vec<Vec<u64>> = ring.elements().collect();
    let m = roots.modulus();
    let support = f.support();
    let inv = 1.0 / ring.order() as f64;
    let values = elems
        .iter()
        .map(|a| {
            support
                .iter()
                .map(|&h| f.values[h] * roots.root((m - pairing_exponent(ring, a, &elems[h])) % m))
                .sum::<Complex64>()
                * inv
        })
        .collect();
    Ok(DualFunction { values })
}

/// `f(h) = Σ_φ F(φ) φ(h)`.
pub fn inverse_fourier(ring: &FiniteLieRing, roots: &RootTable, big_f: &DualFunction) -> ClassFunction {
    let elems: Vec<Vec<u64>> = ring.elements().collect();
    let support: Vec<usize> = big_f.values.iter().enumerate().filter(|(_, v)| v.norm() > 0.0).map(|(i, _)| i).collect();
    let values = elems
        .iter()
        .map(|h| support.iter().map(|&a| big_f.values[a] * roots.root(pairing_exponent(ring, &elems[a], h))).sum())
        .collect();
    ClassFunction::new(Domain::ring(ring), values)
}

/// `(1/|domain|) Σ f1 conj(f2)`.
pub fn inner(f1: &ClassFunction, f2: &ClassFunction) -> Result<Complex64> {
    same_domain(f1, f2)?;
    let s: Complex64 = f1.values.iter().zip(&f2.values).map(|(a, b)| a * b.conj()).sum();
    Ok(s / f1.domain.order as f64)
}

/// `Σ F1 conj(F2)` with counting measure on `g*`.
pub fn dual_inner(f1: &DualFunction, f2: &DualFunction) -> Complex64 {
    f1.values.iter().zip(&f2.values).map(|(a, b)| a * b.conj()).sum()
}
