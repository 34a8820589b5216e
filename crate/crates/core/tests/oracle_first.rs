//! Orbit method output against brute-force character tables.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbitkit::harmonic::RootTable;
use orbitkit::liering::{make_ring, Bracket, FiniteLieRing, LazardGroup};
use orbitkit::oracle::{character_table, conjugacy_classes, match_tables, TableOptions, DEFAULT_ORDER_CAP};
use orbitkit::orbitmethod::{coadjoint_orbits, kirillov_table, orthogonality_deviation, p2_orbit_partition};

const TOL: f64 = 1e-8;

fn b(i: usize, j: usize, m: usize, c: i64) -> Bracket {
    Bracket { i, j, m, c }
}

fn check_against_oracle(ring: FiniteLieRing) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let group = LazardGroup::new(ring.clone());
    let classes = conjugacy_classes(&group, DEFAULT_ORDER_CAP, &mut rng).unwrap();
    let table = character_table(&group, &classes, TableOptions { seed: 11, ..TableOptions::default() }).unwrap();
    let orbits = coadjoint_orbits(&ring, &mut rng).unwrap();
    assert_eq!(orbits.len(), table.len());
    let kir = kirillov_table(&ring, &RootTable::new(&ring), &orbits, &classes.representatives());
    let m = match_tables(&kir, &table, TOL).unwrap();
    assert!(m.max_deviation < TOL, "{}", m.max_deviation);
    let mut seen = m.assignment.clone();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), table.len());
    assert!(orthogonality_deviation(&kir, &classes.sizes()) < 1e-9);
}

#[test]
fn abelian() {
    check_against_oracle(make_ring(3, &[2, 1], &[]).unwrap());
}

#[test]
fn heisenberg_twisted_bracket() {
    check_against_oracle(make_ring(5, &[1, 1, 1], &[b(0, 1, 2, 2)]).unwrap());
}

#[test]
fn filiform_class_three() {
    check_against_oracle(make_ring(5, &[1, 1, 1, 1], &[b(0, 1, 2, 1), b(0, 2, 3, 1)]).unwrap());
}

#[test]
fn mixed_moduli() {
    // [e1, e2] = 3 e3 inside Z/9 x Z/9 x Z/9
    check_against_oracle(make_ring(3, &[2, 2, 2], &[b(0, 1, 2, 3)]).unwrap());
}

#[test]
fn p2_cells_cover_every_irreducible() {
    let ring = make_ring(2, &[2, 2, 2], &[b(0, 1, 2, 4)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let group = LazardGroup::new(ring);
    let classes = conjugacy_classes(&group, DEFAULT_ORDER_CAP, &mut rng).unwrap();
    let table = character_table(&group, &classes, TableOptions::default()).unwrap();
    let cells = p2_orbit_partition(&group, &classes, &table, &mut rng).unwrap();
    let mut all: Vec<usize> = cells.iter().flat_map(|c| c.characters.iter().copied()).collect();
    all.sort();
    assert_eq!(all, (0..table.len()).collect::<Vec<_>>());
    assert!(cells.iter().all(|c| c.max_multiple_deviation < TOL));
}
