use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use super::{coadjoint_orbits, random_class_function, ExpStarConvolvers};
use crate::error::{Error, Result};
use crate::harmonic::{pairing_exponent, ClassFunction, Domain, RootTable};
use crate::liering::{FiniteLieRing, LazardGroup, RingElement, RingRegime, Subring};
use crate::oracle::{CharTable, ConjClassPartition};

const MEMBERSHIP_THRESHOLD: f64 = 1e-6;
const MULTIPLE_TOLERANCE: f64 = 1e-8;
const COUNTEREXAMPLE_PAIRS: usize = 2000;

/// One orbit of `G` on `(2g)*` together with the irreducibles it labels.
#[derive(Debug, Clone, PartialEq)]
pub struct P2Cell {
    /// Characters of `2g`, each given by its values on the generators `2 e_i`.
    pub orbit: Vec<Vec<u64>>,
    /// Rows of the oracle table.
    pub characters: Vec<usize>,
    /// Worst distance of `χ_ρ|G²` from the nearest multiple of `e_Ω`, relative to `max |χ_ρ|`.
    pub max_multiple_deviation: f64,
}

fn check_p2(ring: &FiniteLieRing) -> Result<()> {
    if ring.p() != 2 {
        return Err(Error::RegimeViolation(format!("p = {} but this check is for p = 2", ring.p())));
    }
    match ring.regime() {
        RingRegime::Uniform { .. } => Ok(()),
        _ if ring.class() <= 1 => Ok(()),
        r => Err(Error::RegimeViolation(format!("p = 2 needs a uniform ring, got {r:?}"))),
    }
}

fn doubled(ring: &FiniteLieRing) -> Result<(Vec<RingElement>, Subring)> {
    let gens: Vec<RingElement> = (0..ring.rank()).map(|i| ring.scale(2, &ring.basis_vector(i))).collect();
    let sub = Subring::span(ring, &gens)?;
    Ok((gens, sub))
}

/// `e_Ω` on `G`, supported on `G² = exp(2g)`, as a dense function together
/// with the orbit signatures.
fn cell_functions<R: Rng>(group: &LazardGroup, rng: &mut R) -> Result<Vec<(Vec<Vec<u64>>, ClassFunction)>> {
    let ring = group.ring();
    let (gens, sub) = doubled(ring)?;
    let roots = RootTable::new(ring);
    let orbits = coadjoint_orbits(ring, rng)?;
    // orbits on (2g)* are images of orbits on g*; keep one lift per restricted character
    let mut cells: BTreeMap<Vec<Vec<u64>>, BTreeMap<Vec<u64>, RingElement>> = BTreeMap::new();
    for o in &orbits.orbits {
        let mut image: BTreeMap<Vec<u64>, RingElement> = BTreeMap::new();
        for &f in &o.members {
            let a = ring.element(f);
            let sig: Vec<u64> = gens.iter().map(|s| pairing_exponent(ring, &a, s)).collect();
            image.entry(sig).or_insert(a);
        }
        let key: Vec<Vec<u64>> = image.keys().cloned().collect();
        cells.entry(key).or_insert(image);
    }
    let dom = Domain::group(ring);
    let mut out = Vec::with_capacity(cells.len());
    for (key, lifts) in cells {
        let mut values = vec![Complex64::new(0.0, 0.0); ring.order()];
        for &y in sub.elements() {
            let y_el = ring.element(y);
            values[y] = lifts.values().map(|a| roots.root(pairing_exponent(ring, a, &y_el))).sum();
        }
        out.push((key, ClassFunction::new(dom, values)));
    }
    Ok(out)
}

/// Partitions the irreducibles of `G` by the orbit of `(2g)*` they meet:
/// `ρ` lies over `Ω` when `<χ_ρ, e_Ω> ≠ 0`. Each `ρ` must lie over exactly one
/// orbit and its character on `G²` must be a multiple of `e_Ω`.
pub fn p2_orbit_partition<R: Rng>(
    group: &LazardGroup,
    classes: &ConjClassPartition,
    table: &CharTable,
    rng: &mut R,
) -> Result<Vec<P2Cell>> {
    let ring = group.ring();
    check_p2(ring)?;
    let dom = Domain::group(ring);
    let (_, sub) = doubled(ring)?;
    let funcs = cell_functions(group, rng)?;
    let mut cells: Vec<P2Cell> = funcs
        .iter()
        .map(|(orbit, _)| P2Cell { orbit: orbit.clone(), characters: Vec::new(), max_multiple_deviation: 0.0 })
        .collect();
    let n = ring.order() as f64;
    for rho in 0..table.len() {
        let chi = table.as_function(rho, classes, dom);
        let over: Vec<usize> = funcs
            .iter()
            .enumerate()
            .filter(|(_, (_, e))| {
                let t: Complex64 = chi.values.iter().zip(&e.values).map(|(a, b)| a * b.conj()).sum::<Complex64>() / n;
                t.norm() > MEMBERSHIP_THRESHOLD
            })
            .map(|(k, _)| k)
            .collect();
        let k = match over.as_slice() {
            [k] => *k,
            _ => {
                return Err(Error::PartitionFailure(format!(
                    "character {rho} (degree {}) lies over {} orbits",
                    table.degrees[rho],
                    over.len()
                )))
            }
        };
        let e = &funcs[k].1;
        let pick = |f: &ClassFunction| -> Vec<Complex64> { sub.elements().iter().map(|&y| f.values[y]).collect() };
        let v = pick(&chi);
        let w = pick(e);
        let (i, _) =
            w.iter().enumerate().fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
        let lambda = v[i] / w[i];
        let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let dev = v.iter().zip(&w).map(|(a, b)| (a - lambda * b).norm()).fold(0.0, f64::max) / scale;
        if dev > MULTIPLE_TOLERANCE {
            return Err(Error::PartitionFailure(format!(
                "character {rho} restricted to G² is not a multiple of e_Ω (deviation {dev:e})"
            )));
        }
        let cell = &mut cells[k];
        cell.characters.push(rho);
        cell.max_multiple_deviation = cell.max_multiple_deviation.max(dev);
    }
    if let Some(empty) = cells.iter().position(|c| c.characters.is_empty()) {
        return Err(Error::PartitionFailure(format!("orbit {:?} carries no character", cells[empty].orbit)));
    }
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq)]
pub struct P2ConvolutionReport {
    pub trials: usize,
    /// Both functions supported on `G²`.
    pub both_supported_deviation: f64,
    /// One function supported on `G²`; only checked when brackets lie in `8g`.
    pub one_supported_deviation: Option<f64>,
    /// A pair of class indicators, not both on `G²`, for which `exp^*` fails to
    /// intertwine the convolutions.
    pub counterexample: Option<String>,
}

/// `exp^*` on invariant functions supported on `G²`, plus a search for a
/// failure once that support condition is dropped.
pub fn p2_convolution_check<R: Rng>(
    group: &LazardGroup,
    trials: usize,
    tol: f64,
    rng: &mut R,
) -> Result<P2ConvolutionReport> {
    let ring = group.ring();
    check_p2(ring)?;
    let (_, sub) = doubled(ring)?;
    let labels = ring.adjoint_orbits()?;
    let dom = Domain::group(ring);
    let conv = ExpStarConvolvers::new(group, &labels)?;
    let on_square = |f: ClassFunction| -> ClassFunction {
        let mut f = f;
        for (x, v) in f.values.iter_mut().enumerate() {
            if !sub.contains(x) {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        f
    };
    let mut both: f64 = 0.0;
    let mut one: Option<f64> = (ring.uniform_depth() >= 3).then_some(0.0);
    for t in 0..trials {
        let f1 = on_square(random_class_function(dom, &labels, rng));
        let f2 = on_square(random_class_function(dom, &labels, rng));
        let dev = conv.deviation(&f1, &f2)?;
        both = both.max(dev);
        if dev > tol {
            return Err(Error::PropertyFailed {
                property: "exp* on functions supported on G²".into(),
                witness: format!("trial {t}, deviation {dev:e}"),
            });
        }
        if let Some(worst) = one.as_mut() {
            let g = random_class_function(dom, &labels, rng);
            let dev = conv.deviation(&f1, &g)?;
            *worst = worst.max(dev);
            if dev > tol {
                return Err(Error::PropertyFailed {
                    property: "exp* with one function supported on G²".into(),
                    witness: format!("trial {t}, deviation {dev:e}"),
                });
            }
        }
    }
    let classes = ConjClassPartition::from_labels(&labels);
    let mut counterexample = None;
    let mut tried = 0;
    'search: for a in &classes.classes {
        for b in &classes.classes {
            if sub.contains(a[0]) && sub.contains(b[0]) {
                continue;
            }
            if tried == COUNTEREXAMPLE_PAIRS {
                break 'search;
            }
            tried += 1;
            let f1 = ClassFunction::indicator(dom, a);
            let f2 = ClassFunction::indicator(dom, b);
            let dev = conv.deviation(&f1, &f2)?;
            if dev > 1e-6 {
                counterexample = Some(format!(
                    "indicators of the classes of {:?} and {:?}, deviation {dev:.3e}",
                    ring.element(a[0]),
                    ring.element(b[0])
                ));
                break 'search;
            }
        }
    }
    Ok(P2ConvolutionReport { trials, both_supported_deviation: both, one_supported_deviation: one, counterexample })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::{make_ring, Bracket};
    use crate::oracle::{character_table, conjugacy_classes, TableOptions, DEFAULT_ORDER_CAP};
    use rand::SeedableRng;

    fn rng() -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(5)
    }

    #[test]
    fn abelian_z4_squared() {
        let g = LazardGroup::new(make_ring(2, &[2, 2], &[]).unwrap());
        let c = conjugacy_classes(&g, DEFAULT_ORDER_CAP, &mut rng()).unwrap();
        let t = character_table(&g, &c, TableOptions::default()).unwrap();
        let cells = p2_orbit_partition(&g, &c, &t, &mut rng()).unwrap();
        assert_eq!(cells.len(), 4);
        assert!(cells.iter().all(|c| c.characters.len() == 4));
    }

    #[test]
    fn odd_prime_rejected() {
        let g = LazardGroup::new(make_ring(3, &[1], &[]).unwrap());
        assert!(matches!(p2_convolution_check(&g, 1, 1e-10, &mut rng()), Err(Error::RegimeViolation(_))));
    }

    #[test]
    fn z4_heisenberg_type() {
        // [a, b] = 4c over Z/8 with a smaller rank-3 cousin over Z/4 would not be uniform;
        // use Z/8 with the bracket in 4g
        let ring = make_ring(2, &[3, 3, 3], &[Bracket { i: 0, j: 1, m: 2, c: 4 }]).unwrap();
        let g = LazardGroup::new(ring);
        let r = p2_convolution_check(&g, 3, 1e-10, &mut rng()).unwrap();
        assert!(r.one_supported_deviation.is_none());
    }
}
