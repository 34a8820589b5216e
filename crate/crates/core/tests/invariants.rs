use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbitkit::freelie::bch;
use orbitkit::harmonic::Domain;
use orbitkit::liering::{make_ring, Bracket, FiniteLieRing, LazardGroup};
use orbitkit::orbitmethod::{coadjoint_orbits, exp_star_deviation, random_class_function};
use orbitkit::padic::{PLattice, QpVector};
use orbitkit::scalar::{rat, rat_int};
use orbitkit::spec::RingSpec;

fn heisenberg(p: u64, k: u32) -> FiniteLieRing {
    make_ring(p, &[k, k, k], &[Bracket { i: 0, j: 1, m: 2, c: 1 }]).unwrap()
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bch_valuation_bound(p in prime(), n in 1usize..=7) {
        let v = bch(n).component_valuation(n, p);
        prop_assert!(v.at_least(Ratio::new(-(n as i64 - 1), p as i64 - 1)));
    }

    #[test]
    fn lattice_basis_is_canonical(
        p in prime(),
        entries in prop::collection::vec(-20i64..20, 9),
        scales in prop::collection::vec(0u32..3, 3),
        shear in -5i64..5,
    ) {
        let mut gens: Vec<QpVector> = entries.chunks(3).map(|c| c.iter().map(|&x| rat(x, 1)).collect()).collect();
        for (i, &s) in scales.iter().enumerate() {
            let mut e = vec![rat_int(0); 3];
            e[i] = rat_int((p as i64).pow(s));
            gens.push(e);
        }
        let a = PLattice::span(p, 3, gens.clone()).unwrap();
        // same lattice from a unimodular change of generators
        let mut other = gens.clone();
        let moved: QpVector = other[0].iter().zip(&other[1]).map(|(x, y)| x + rat_int(shear) * y).collect();
        other[0] = moved;
        other.reverse();
        let b = PLattice::span(p, 3, other).unwrap();
        prop_assert_eq!(a.basis(), b.basis());
        for g in &gens {
            prop_assert!(a.contains(g));
        }
        prop_assert!(a.is_sublattice_of(&b) && b.is_sublattice_of(&a));
    }

    #[test]
    fn lazard_group_axioms(p in prop::sample::select(vec![3u64, 5]), a in 0usize..729, b in 0usize..729, c in 0usize..729) {
        let ring = heisenberg(p, 2);
        let n = ring.order();
        let (a, b, c) = (a % n, b % n, c % n);
        let g = LazardGroup::new(ring);
        prop_assert_eq!(g.mul_index(g.mul_index(a, b), c), g.mul_index(a, g.mul_index(b, c)));
        prop_assert_eq!(g.mul_index(a, g.inv_index(a)), 0);
        prop_assert_eq!(g.mul_index(0, b), b);
    }

    #[test]
    fn ring_spec_round_trip(p in prime(), k in 1u32..3, c in 1i64..4) {
        let mut spec = RingSpec::heisenberg(p, k);
        spec.brackets.get_mut("(1,2)").unwrap().insert("3".into(), c);
        let text = serde_json::to_string(&spec).unwrap();
        let back = RingSpec::from_json(&text).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(back.build().map(|r| r.order()).ok(), spec.build().map(|r| r.order()).ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn orbit_sizes_are_squares_summing_to_the_order(p in prop::sample::select(vec![3u64, 5]), k in 1u32..=2, seed in 0u64..1000) {
        let ring = heisenberg(p, k);
        let orbits = coadjoint_orbits(&ring, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(orbits.sizes().iter().sum::<usize>(), ring.order());
        prop_assert!(orbits.orbits.iter().all(|o| o.sqrt_size().is_some()));
        // as many orbits as conjugacy classes
        let classes = ring.adjoint_orbits().unwrap().into_iter().max().unwrap() + 1;
        prop_assert_eq!(orbits.len(), classes);
    }

    #[test]
    fn exp_star_is_exact_below_the_prime(p in prop::sample::select(vec![3u64, 5]), seed in 0u64..1000) {
        let ring = heisenberg(p, 1);
        let labels = ring.adjoint_orbits().unwrap();
        let group = LazardGroup::new(ring.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f1 = random_class_function(Domain::group(&ring), &labels, &mut rng);
        let f2 = random_class_function(Domain::group(&ring), &labels, &mut rng);
        prop_assert!(exp_star_deviation(&group, &f1, &f2, &labels).unwrap() < 1e-10);
    }
}
