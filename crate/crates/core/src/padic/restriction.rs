use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::harmonic::{pairing_exponent, Domain, RootTable};
use crate::liering::{LazardGroup, RingElement, Subring};
use crate::oracle::{
    character_table, conjugacy_classes, match_tables, restriction_multiplicity, SubgroupView, TableOptions,
    DEFAULT_ORDER_CAP,
};
use crate::orbitmethod::{coadjoint_orbits, coadjoint_orbits_under, kirillov_table};

const MATCH_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictionReport {
    pub orbits: usize,
    pub suborbits: usize,
    /// `contained[Ω][Ω₀]`: `Ω₀ ⊆ res(Ω)`, decided on sets.
    pub contained: Vec<Vec<bool>>,
    /// `<π_Ω|_K, π_{Ω₀}>` from the oracle tables.
    pub multiplicities: Vec<Vec<f64>>,
    /// Largest distance of a multiplicity from the nearest integer.
    pub max_integrality_error: f64,
    pub max_match_deviation: f64,
}

/// Compares, for every `G`-orbit `Ω` on `g*` and `K`-orbit `Ω₀` on `(αk)*`,
/// whether `Ω₀ ⊆ res(Ω)` with whether `π_{Ω₀}` occurs in `π_Ω|_K`.
///
/// The subring `k` is the span of `k_generators`; `K = exp(α k)`. Only odd `p`
/// is handled: for `p = 2` the irreducibles over one orbit need not be unique.
pub fn restriction_harness<R: Rng>(
    group: &LazardGroup,
    k_generators: &[RingElement],
    alpha: u64,
    rng: &mut R,
) -> Result<RestrictionReport> {
    let ring = group.ring();
    if ring.p() == 2 {
        return Err(Error::RegimeViolation("restriction harness requires an odd prime".into()));
    }
    if alpha != 1 && alpha != 2 {
        return Err(Error::InvalidInput(format!("alpha must be 1 or 2, got {alpha}")));
    }
    let gens: Vec<RingElement> = k_generators.iter().map(|g| ring.scale(alpha, g)).collect();
    let sub = Subring::span(ring, &gens)?;
    let roots = RootTable::new(ring);

    let g_orbits = coadjoint_orbits(ring, rng)?;
    let k_elems = sub.elements().to_vec();
    let k_on_dual = coadjoint_orbits_under(ring, &gens, || ring.element(k_elems[rng.gen_range(0..k_elems.len())]))?;
    let signature = |f: usize| -> Vec<u64> {
        let a = ring.element(f);
        gens.iter().map(|s| pairing_exponent(ring, &a, s)).collect()
    };
    // K-orbits on (αk)* as images of K-orbits on g*, with one lift per character
    let mut lifts: BTreeMap<Vec<u64>, RingElement> = BTreeMap::new();
    let mut suborbit_sets: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    for o in &k_on_dual.orbits {
        let mut image = BTreeSet::new();
        for &f in &o.members {
            let sig = signature(f);
            lifts.entry(sig.clone()).or_insert_with(|| ring.element(f));
            image.insert(sig);
        }
        suborbit_sets.insert(image.into_iter().collect());
    }
    let suborbits: Vec<Vec<Vec<u64>>> = suborbit_sets.into_iter().collect();
    let res_images: Vec<BTreeSet<Vec<u64>>> =
        g_orbits.orbits.iter().map(|o| o.members.iter().map(|&f| signature(f)).collect()).collect();
    let contained: Vec<Vec<bool>> =
        res_images.iter().map(|img| suborbits.iter().map(|o0| o0.iter().all(|s| img.contains(s))).collect()).collect();

    // oracle side for G
    let seed = rng.next_u64();
    let g_classes = conjugacy_classes(group, DEFAULT_ORDER_CAP, rng)?;
    let g_table = character_table(group, &g_classes, TableOptions { seed, ..TableOptions::default() })?;
    let g_kirillov = kirillov_table(ring, &roots, &g_orbits, &g_classes.representatives());
    let g_match = match_tables(&g_kirillov, &g_table, MATCH_TOLERANCE)?;

    // oracle side for K, Kirillov characters of K evaluated through the lifts
    let view = SubgroupView::new(group, &sub);
    let k_classes = conjugacy_classes(&view, DEFAULT_ORDER_CAP, rng)?;
    let k_table = character_table(&view, &k_classes, TableOptions { seed, ..TableOptions::default() })?;
    let k_reps: Vec<RingElement> = k_classes.representatives().iter().map(|&l| ring.element(view.ambient(l))).collect();
    let k_kirillov: Vec<Vec<Complex64>> = suborbits
        .iter()
        .map(|o0| {
            let scale = 1.0 / (o0.len() as f64).sqrt();
            k_reps
                .iter()
                .map(|y| o0.iter().map(|s| roots.root(pairing_exponent(ring, &lifts[s], y))).sum::<Complex64>() * scale)
                .collect()
        })
        .collect();
    let k_match = match_tables(&k_kirillov, &k_table, MATCH_TOLERANCE)?;

    let dom = Domain::group(ring);
    let mut multiplicities = vec![vec![0.0; suborbits.len()]; g_orbits.len()];
    let mut worst_int: f64 = 0.0;
    for (a, &row_g) in g_match.assignment.iter().enumerate() {
        let chi_g = g_table.as_function(row_g, &g_classes, dom);
        for (b, &row_k) in k_match.assignment.iter().enumerate() {
            let chi_k: Vec<Complex64> = k_classes.class_of.iter().map(|&c| k_table.rows[row_k][c]).collect();
            let m = restriction_multiplicity(&sub, &chi_g, &chi_k)?;
            worst_int = worst_int.max((m - Complex64::new(m.re.round(), 0.0)).norm());
            multiplicities[a][b] = m.re;
            let occurs = m.re > 0.5;
            if occurs != contained[a][b] {
                return Err(Error::EquivalenceFailed { orbit: a, suborbit: b });
            }
        }
    }
    if worst_int > MATCH_TOLERANCE {
        return Err(Error::PropertyFailed {
            property: "restriction multiplicities are integers".into(),
            witness: format!("distance {worst_int:e}"),
        });
    }
    Ok(RestrictionReport {
        orbits: g_orbits.len(),
        suborbits: suborbits.len(),
        contained,
        multiplicities,
        max_integrality_error: worst_int,
        max_match_deviation: g_match.max_deviation.max(k_match.max_deviation),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::{make_ring, Bracket};
    use rand::SeedableRng;

    fn heis(p: u64, k: u32) -> LazardGroup {
        LazardGroup::new(make_ring(p, &[k, k, k], &[Bracket { i: 0, j: 1, m: 2, c: 1 }]).unwrap())
    }

    #[test]
    fn heisenberg_f3_center() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let r = restriction_harness(&heis(3, 1), &[vec![0, 0, 1]], 1, &mut rng).unwrap();
        assert_eq!((r.orbits, r.suborbits), (11, 3));
        let big_rows: Vec<&Vec<f64>> = r.multiplicities.iter().filter(|m| m.iter().sum::<f64>() > 2.5).collect();
        assert_eq!(big_rows.len(), 2);
        for row in big_rows {
            assert_eq!(row.iter().filter(|&&m| (m - 3.0).abs() < 1e-8).count(), 1);
        }
    }

    #[test]
    fn whole_ring_is_bijection() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = heis(3, 1);
        let gens: Vec<RingElement> = (0..3).map(|i| g.ring().basis_vector(i)).collect();
        let r = restriction_harness(&g, &gens, 1, &mut rng).unwrap();
        assert_eq!(r.orbits, r.suborbits);
        for row in &r.contained {
            assert_eq!(row.iter().filter(|&&c| c).count(), 1);
        }
    }

    #[test]
    fn p2_rejected() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = LazardGroup::new(make_ring(2, &[2], &[]).unwrap());
        assert!(matches!(restriction_harness(&g, &[vec![1]], 2, &mut rng), Err(Error::RegimeViolation(_))));
    }
}
