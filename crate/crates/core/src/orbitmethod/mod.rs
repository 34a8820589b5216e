//! Coadjoint orbits, Kirillov characters and the identities linking them to
//! the group: idempotents, the `exp^*` convolution homomorphism, and the
//! `p = 2` partition of irreducibles by orbits of `(2g)*`.

mod p2;

use std::collections::VecDeque;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::harmonic::{pairing_exponent, ClassConvolver, ClassFunction, Domain, Law, RootTable};
use crate::liering::{ad_action, AdMatrix, FiniteLieRing, LazardGroup, RingElement};

pub use p2::{p2_convolution_check, p2_orbit_partition, P2Cell, P2ConvolutionReport};

const AUDIT_SAMPLES: usize = 50;
const MAX_ESCALATIONS: usize = 8;

/// `(g·f)(x) = f(Ad(g^{-1}) x)` for `f` with exponent vector `a`, where
/// `ad_inv` is `Ad(g^{-1})`.
pub fn coadjoint_apply(ring: &FiniteLieRing, ad_inv: &AdMatrix, a: &[u64]) -> RingElement {
    let big_k = ring.max_exponent();
    (0..ring.rank())
        .map(|j| {
            let e = pairing_exponent(ring, a, &ad_inv.images[j]);
            let w = crate::liering::pow(ring.p(), big_k - ring.moduli()[j]);
            debug_assert_eq!(e % w, 0);
            e / w
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoadjointOrbit {
    /// Indices into [`crate::harmonic::enumerate_dual`], ascending.
    pub members: Vec<usize>,
}

impl CoadjointOrbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn sqrt_size(&self) -> Option<usize> {
        let r = (self.size() as f64).sqrt().round() as usize;
        (r * r == self.size()).then_some(r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub orbits: Vec<CoadjointOrbit>,
    pub orbit_of: Vec<usize>,
}

impl OrbitPartition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(CoadjointOrbit::size).collect()
    }
}

/// Orbits on `g*` of the group generated by `generators` (elements of `g`
/// read as group elements), audited against random elements from `sample`.
pub fn coadjoint_orbits_under(
    ring: &FiniteLieRing,
    generators: &[RingElement],
    mut sample: impl FnMut() -> RingElement,
) -> Result<OrbitPartition> {
    let mut mats: Vec<AdMatrix> = generators.iter().map(|g| ad_action(ring, &ring.neg(g))).collect::<Result<_>>()?;
    let n = ring.order();
    for _ in 0..=MAX_ESCALATIONS {
        let mut label = vec![usize::MAX; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            label[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let a = ring.element(u);
                for m in &mats {
                    let v = ring.index_of(&coadjoint_apply(ring, m, &a));
                    if label[v] == usize::MAX {
                        label[v] = id;
                        members.push(v);
                        queue.push_back(v);
                    }
                }
            }
            members.sort_unstable();
            orbits.push(CoadjointOrbit { members });
        }
        let mut escaped = None;
        'audit: for _ in 0..AUDIT_SAMPLES {
            let g = sample();
            let m = ad_action(ring, &ring.neg(&g))?;
            for u in 0..n {
                let v = ring.index_of(&coadjoint_apply(ring, &m, &ring.element(u)));
                if label[v] != label[u] {
                    escaped = Some(m);
                    break 'audit;
                }
            }
        }
        match escaped {
            None => return Ok(OrbitPartition { orbits, orbit_of: label }),
            Some(m) => mats.push(m),
        }
    }
    Err(Error::StabilityCheckFailed(format!("orbits still unstable after {MAX_ESCALATIONS} added generators")))
}

/// Orbits of `G` on `g*`, generated by `Ad*(exp e_i)`.
pub fn coadjoint_orbits<R: Rng>(ring: &FiniteLieRing, rng: &mut R) -> Result<OrbitPartition> {
    let gens: Vec<RingElement> = (0..ring.rank()).map(|i| ring.basis_vector(i)).collect();
    let n = ring.order();
    coadjoint_orbits_under(ring, &gens, || ring.element(rng.gen_range(0..n)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct KirillovCharacter {
    pub orbit: usize,
    pub size: usize,
    pub values: ClassFunction,
}

/// `|Ω|^{-1/2} Σ_{f ∈ Ω} f(x)` at the given elements.
pub fn kirillov_values(
    ring: &FiniteLieRing,
    roots: &RootTable,
    orbit: &CoadjointOrbit,
    points: &[usize],
) -> Vec<Complex64> {
    let members: Vec<RingElement> = orbit.members.iter().map(|&i| ring.element(i)).collect();
    let scale = 1.0 / (orbit.size() as f64).sqrt();
    points
        .iter()
        .map(|&x| {
            let x = ring.element(x);
            members.iter().map(|a| roots.root(pairing_exponent(ring, a, &x))).sum::<Complex64>() * scale
        })
        .collect()
}

/// The Kirillov character of an orbit on all of `G`, checked to be constant on
/// the conjugacy classes given by `class_labels`.
pub fn kirillov_character(
    ring: &FiniteLieRing,
    roots: &RootTable,
    orbits: &OrbitPartition,
    orbit: usize,
    class_labels: &[usize],
) -> Result<KirillovCharacter> {
    let o = &orbits.orbits[orbit];
    let all: Vec<usize> = (0..ring.order()).collect();
    let values = ClassFunction::new(Domain::group(ring), kirillov_values(ring, roots, o, &all));
    if !values.is_constant_on(class_labels) {
        return Err(Error::NotInvariant(format!("Kirillov character of orbit {orbit}")));
    }
    Ok(KirillovCharacter { orbit, size: o.size(), values })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdempotentReport {
    pub idempotents: usize,
    pub pairs_checked: usize,
    pub max_deviation: f64,
}

/// For every orbit: `F(|Ω|^{1/2} χ_Ω)` is the indicator of `Ω`, `e_Ω` is
/// idempotent, distinct `e_Ω` are orthogonal, and `Σ e_Ω = |G| δ`.
///
/// Everything is a class function, so values are kept per conjugacy class and
/// the Fourier transform is read at one point of each coadjoint orbit.
/// Orthogonality is checked on all pairs when there are at most `max_pairs`
/// of them, otherwise on every diagonal pair plus random off-diagonal ones.
pub fn verify_idempotents<R: Rng>(
    group: &LazardGroup,
    roots: &RootTable,
    orbits: &OrbitPartition,
    tol: f64,
    max_pairs: usize,
    rng: &mut R,
) -> Result<IdempotentReport> {
    let ring = group.ring();
    let labels = ring.adjoint_orbits()?;
    let conv = ClassConvolver::new(group, Law::Group, &labels)?;
    let reps = conv.representatives().to_vec();
    let parts = reps.len();
    let n = ring.order() as f64;
    // dual[j][c] = Σ_{h in class c} conj(φ_j(h)) for a point φ_j of orbit j
    let points: Vec<RingElement> = orbits.orbits.iter().map(|o| ring.element(o.members[0])).collect();
    let mut dual = vec![vec![Complex64::new(0.0, 0.0); parts]; points.len()];
    for (h, x) in ring.elements().enumerate() {
        for (j, phi) in points.iter().enumerate() {
            dual[j][labels[h]] += roots.root(pairing_exponent(ring, phi, &x)).conj();
        }
    }
    let mut max_dev: f64 = 0.0;
    let mut fail = |dev: f64, property: &str, witness: String| -> Result<()> {
        max_dev = max_dev.max(dev);
        if dev > tol {
            return Err(Error::PropertyFailed { property: property.into(), witness });
        }
        Ok(())
    };
    let mut idem = Vec::with_capacity(orbits.len());
    for (k, o) in orbits.orbits.iter().enumerate() {
        let scale = (o.size() as f64).sqrt();
        let e: Vec<Complex64> = kirillov_values(ring, roots, o, &reps).into_iter().map(|v| v * scale).collect();
        for (j, row) in dual.iter().enumerate() {
            let ft: Complex64 = row.iter().zip(&e).map(|(d, v)| d * v).sum::<Complex64>() / n;
            let target = if j == k { 1.0 } else { 0.0 };
            fail(
                (ft - Complex64::new(target, 0.0)).norm(),
                "Fourier transform of e_Ω is the orbit indicator",
                format!("orbit {k}, character {:?}", points[j]),
            )?;
        }
        idem.push(e);
    }
    let m = idem.len();
    let mut pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a..m).map(move |b| (a, b))).collect();
    if pairs.len() > max_pairs {
        let mut chosen: Vec<(usize, usize)> = (0..m).map(|a| (a, a)).collect();
        while chosen.len() < max_pairs && m > 1 {
            let a = rng.gen_range(0..m);
            let b = rng.gen_range(0..m);
            if a != b {
                chosen.push((a.min(b), a.max(b)));
            }
        }
        pairs = chosen;
    }
    let zero = vec![Complex64::new(0.0, 0.0); parts];
    for &(a, b) in &pairs {
        let c = conv.convolve_parts(&idem[a], &idem[b]);
        let target = if a == b { &idem[a] } else { &zero };
        let dev = c.iter().zip(target).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        fail(
            dev,
            if a == b { "idempotency" } else { "orthogonality" },
            format!("orbits {a} and {b}, deviation {dev:e}"),
        )?;
    }
    let mut total = zero.clone();
    for e in &idem {
        total.iter_mut().zip(e).for_each(|(t, v)| *t += v);
    }
    let dev = total
        .iter()
        .enumerate()
        .map(|(c, v)| (v - Complex64::new(if reps[c] == 0 { n } else { 0.0 }, 0.0)).norm())
        .fold(0.0, f64::max);
    fail(dev, "completeness Σ e_Ω = |G| δ", format!("deviation {dev:e}"))?;
    Ok(IdempotentReport { idempotents: m, pairs_checked: pairs.len(), max_deviation: max_dev })
}

/// `exp^*(f1 *_G f2) - exp^* f1 *_g exp^* f2`, maximal entry. Both inputs must be
/// constant on the classes given by `class_labels`.
pub fn exp_star_deviation(
    group: &LazardGroup,
    f1: &ClassFunction,
    f2: &ClassFunction,
    class_labels: &[usize],
) -> Result<f64> {
    let pair = ExpStarConvolvers::new(group, class_labels)?;
    pair.deviation(f1, f2)
}

pub(crate) struct ExpStarConvolvers {
    group: ClassConvolver,
    additive: ClassConvolver,
}

impl ExpStarConvolvers {
    pub(crate) fn new(group: &LazardGroup, class_labels: &[usize]) -> Result<Self> {
        Ok(ExpStarConvolvers {
            group: ClassConvolver::new(group, Law::Group, class_labels)?,
            additive: ClassConvolver::new(group, Law::Additive, class_labels)?,
        })
    }

    pub(crate) fn deviation(&self, f1: &ClassFunction, f2: &ClassFunction) -> Result<f64> {
        let a = self.group.restrict(f1)?;
        let b = self.group.restrict(f2)?;
        let lhs = self.group.convolve_parts(&a, &b);
        let rhs = self.additive.convolve_parts(&a, &b);
        Ok(lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpStarReport {
    pub random_trials: usize,
    pub exhaustive_pairs: usize,
    pub max_deviation: f64,
}

/// Groups up to this order also get the exhaustive check on class indicators.
pub const EXP_STAR_EXHAUSTIVE: usize = 1000;

pub fn random_class_function<R: Rng>(dom: Domain, class_labels: &[usize], rng: &mut R) -> ClassFunction {
    let classes = class_labels.iter().copied().max().map_or(0, |m| m + 1);
    let per: Vec<Complex64> =
        (0..classes).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ClassFunction::new(dom, class_labels.iter().map(|&l| per[l]).collect())
}

pub fn verify_exp_star<R: Rng>(
    group: &LazardGroup,
    class_labels: &[usize],
    trials: usize,
    tol: f64,
    rng: &mut R,
) -> Result<ExpStarReport> {
    let ring = group.ring();
    let dom = Domain::group(ring);
    let conv = ExpStarConvolvers::new(group, class_labels)?;
    let mut max_dev: f64 = 0.0;
    let check = |dev: f64, what: String| -> Result<()> {
        if dev > tol {
            return Err(Error::PropertyFailed { property: "exp* homomorphism".into(), witness: what });
        }
        Ok(())
    };
    for t in 0..trials {
        let f1 = random_class_function(dom, class_labels, rng);
        let f2 = random_class_function(dom, class_labels, rng);
        let dev = conv.deviation(&f1, &f2)?;
        max_dev = max_dev.max(dev);
        check(dev, format!("random trial {t}, deviation {dev:e}"))?;
    }
    let mut exhaustive = 0;
    if ring.order() <= EXP_STAR_EXHAUSTIVE {
        let classes = ConjClassesView::new(class_labels);
        let ind: Vec<ClassFunction> = classes.members.iter().map(|m| ClassFunction::indicator(dom, m)).collect();
        for a in 0..ind.len() {
            for b in 0..ind.len() {
                let dev = conv.deviation(&ind[a], &ind[b])?;
                max_dev = max_dev.max(dev);
                check(
                    dev,
                    format!(
                        "class indicators of {:?} and {:?}",
                        ring.element(classes.members[a][0]),
                        ring.element(classes.members[b][0])
                    ),
                )?;
                exhaustive += 1;
            }
        }
    }
    Ok(ExpStarReport { random_trials: trials, exhaustive_pairs: exhaustive, max_deviation: max_dev })
}

struct ConjClassesView {
    members: Vec<Vec<usize>>,
}

impl ConjClassesView {
    fn new(labels: &[usize]) -> Self {
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut members = vec![Vec::new(); k];
        for (x, &l) in labels.iter().enumerate() {
            members[l].push(x);
        }
        ConjClassesView { members }
    }
}

/// Kirillov characters of all orbits evaluated at class representatives.
pub fn kirillov_table(
    ring: &FiniteLieRing,
    roots: &RootTable,
    orbits: &OrbitPartition,
    representatives: &[usize],
) -> Vec<Vec<Complex64>> {
    orbits.orbits.iter().map(|o| kirillov_values(ring, roots, o, representatives)).collect()
}

/// Gram matrix deviation from the identity for `<χ_Ω, χ_Ω'>`, computed from
/// class representatives weighted by class sizes.
pub fn orthogonality_deviation(table: &[Vec<Complex64>], class_sizes: &[usize]) -> f64 {
    let n: usize = class_sizes.iter().sum();
    let mut worst: f64 = 0.0;
    for (a, ra) in table.iter().enumerate() {
        for (b, rb) in table.iter().enumerate() {
            let s: Complex64 =
                ra.iter().zip(rb).zip(class_sizes).map(|((x, y), &c)| x * y.conj() * c as f64).sum::<Complex64>()
                    / n as f64;
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((s - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::inner;
    use crate::liering::{make_ring, Bracket};
    use rand::SeedableRng;

    fn heis(p: u64) -> FiniteLieRing {
        make_ring(p, &[1, 1, 1], &[Bracket { i: 0, j: 1, m: 2, c: 1 }]).unwrap()
    }

    fn rng() -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(17)
    }

    #[test]
    fn orbit_sizes() {
        let ab = make_ring(3, &[1, 1], &[]).unwrap();
        assert_eq!(coadjoint_orbits(&ab, &mut rng()).unwrap().len(), 9);
        for p in [3, 5] {
            let o = coadjoint_orbits(&heis(p), &mut rng()).unwrap();
            let mut sizes = o.sizes();
            sizes.sort();
            let expected = [vec![1; (p * p) as usize], vec![(p * p) as usize; (p - 1) as usize]].concat();
            assert_eq!(sizes, expected);
        }
    }

    #[test]
    fn kirillov_degree_and_support() {
        let g = heis(3);
        let roots = RootTable::new(&g);
        let orbits = coadjoint_orbits(&g, &mut rng()).unwrap();
        let labels = g.adjoint_orbits().unwrap();
        let big = orbits.orbits.iter().position(|o| o.size() == 9).unwrap();
        let chi = kirillov_character(&g, &roots, &orbits, big, &labels).unwrap();
        assert!((chi.values.values[0] - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        for (i, x) in g.elements().enumerate() {
            let central = x[0] == 0 && x[1] == 0;
            if central {
                assert!((chi.values.values[i].norm() - 3.0).abs() < 1e-12);
            } else {
                assert!(chi.values.values[i].norm() < 1e-12);
            }
        }
        assert!((inner(&chi.values, &chi.values).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn linear_characters_from_singletons() {
        let g = heis(3);
        let roots = RootTable::new(&g);
        let orbits = coadjoint_orbits(&g, &mut rng()).unwrap();
        let labels = g.adjoint_orbits().unwrap();
        let group = LazardGroup::new(g.clone());
        for (k, o) in orbits.orbits.iter().enumerate().filter(|(_, o)| o.size() == 1) {
            let chi = kirillov_character(&g, &roots, &orbits, k, &labels).unwrap();
            // multiplicative on the group
            for a in (0..27).step_by(4) {
                for b in (0..27).step_by(5) {
                    let ab = group.mul_index(a, b);
                    let lhs = chi.values.values[ab];
                    let rhs = chi.values.values[a] * chi.values.values[b];
                    assert!((lhs - rhs).norm() < 1e-12, "orbit {:?}", o.members);
                }
            }
        }
    }

    #[test]
    fn idempotents_heisenberg() {
        for (p, count) in [(3u64, 11usize), (5, 29)] {
            let g = heis(p);
            let roots = RootTable::new(&g);
            let orbits = coadjoint_orbits(&g, &mut rng()).unwrap();
            let group = LazardGroup::new(g);
            let r = verify_idempotents(&group, &roots, &orbits, 1e-9, usize::MAX, &mut rng()).unwrap();
            assert_eq!(r.idempotents, count);
        }
    }

    #[test]
    fn exp_star_heisenberg_and_refusal() {
        let g = heis(3);
        let labels = g.adjoint_orbits().unwrap();
        let group = LazardGroup::new(g.clone());
        let r = verify_exp_star(&group, &labels, 5, 1e-10, &mut rng()).unwrap();
        assert_eq!(r.exhaustive_pairs, 121);
        let dom = Domain::group(&g);
        let point = ClassFunction::indicator(dom, &[g.index_of(&[1, 0, 0])]);
        let one = ClassFunction::constant(dom, Complex64::new(1.0, 0.0));
        assert!(matches!(exp_star_deviation(&group, &point, &one, &labels), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn abelian_exp_star_is_exact() {
        let g = make_ring(5, &[1, 1], &[]).unwrap();
        let labels = g.adjoint_orbits().unwrap();
        let group = LazardGroup::new(g);
        let r = verify_exp_star(&group, &labels, 3, 1e-12, &mut rng()).unwrap();
        assert!(r.max_deviation < 1e-12);
    }
}
