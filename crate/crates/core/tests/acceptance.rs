//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Runs without the libtest harness so the lines show up in `cargo test` output.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbitkit::chsolver::{check_identity, solve_phi_psi, substituted_series, ValuationRegime};
use orbitkit::freelie::{bch_associative, bch_dynkin};
use orbitkit::harmonic::RootTable;
use orbitkit::liering::{make_ring, twist_map, Bracket, FiniteLieRing, LazardGroup};
use orbitkit::oracle::{
    character_table, conjugacy_classes, match_tables, ConjClassPartition, TableOptions, DEFAULT_ORDER_CAP,
};
use orbitkit::orbitmethod::{
    coadjoint_orbits, kirillov_table, orthogonality_deviation, p2_orbit_partition, verify_exp_star,
};
use orbitkit::padic::{restriction_harness, uniform_chain, QpLieAlgebra};
use orbitkit::scalar::rat_int;

const SEED: u64 = 20240917;
const MATCH_TOL: f64 = 1e-8;
const EXP_STAR_TOL: f64 = 1e-10;
const ORTHO_TOL: f64 = 1e-9;
const P2_TOL: f64 = 1e-8;

type Outcome = Result<String, String>;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

fn heisenberg(p: u64, k: u32) -> FiniteLieRing {
    make_ring(p, &[k, k, k], &[Bracket { i: 0, j: 1, m: 2, c: 1 }]).unwrap()
}

fn ut4(p: u64) -> FiniteLieRing {
    // e12, e23, e34, e13, e24, e14
    let b = |i, j, m| Bracket { i, j, m, c: 1 };
    make_ring(p, &[1; 6], &[b(0, 1, 3), b(1, 2, 4), b(0, 4, 5), b(3, 2, 5)]).unwrap()
}

fn z8_p2() -> FiniteLieRing {
    make_ring(2, &[3, 3, 3], &[Bracket { i: 0, j: 1, m: 2, c: 4 }]).unwrap()
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn c1() -> Outcome {
    let n = 8;
    let a = bch_associative(n);
    let b = bch_dynkin(n);
    if a != b {
        return Err("associative and Dynkin routes disagree".into());
    }
    for p in [2u64, 3, 5, 7] {
        for d in 1..=n {
            let bound = Ratio::new(-(d as i64 - 1), p as i64 - 1);
            let v = a.component_valuation(d, p);
            if !v.at_least(bound) {
                return Err(format!("v_{p}(CH_{d}) = {v:?} below {bound}"));
            }
        }
    }
    Ok(format!("N={n}, p in {{2,3,5,7}}, routes agree"))
}

fn c2() -> Outcome {
    let n = 6;
    let regimes = [
        ValuationRegime::Generic(3),
        ValuationRegime::Generic(5),
        ValuationRegime::SqrtP(5),
        ValuationRegime::P3Uniform,
        ValuationRegime::P2Half,
        ValuationRegime::P2Quarter,
    ];
    for regime in regimes {
        let h = substituted_series(regime, n).map_err(e)?;
        let pair = solve_phi_psi(&h, regime, n).map_err(e)?;
        if !check_identity(&h, &pair, n) {
            return Err(format!("{regime}: identity fails"));
        }
        let p = regime.prime();
        for d in 1..n {
            let bound = regime.output_bound(d);
            for s in [&pair.phi, &pair.psi] {
                if !s.component_valuation(d, p).at_least(bound) {
                    return Err(format!("{regime}: degree {d} below output bound {bound}"));
                }
            }
        }
        if let ValuationRegime::SqrtP(_) = regime {
            let (phi, psi) = pair.unscaled();
            if !phi.is_rational() || !psi.is_rational() {
                return Err(format!("{regime}: back-substituted pair has a surd part"));
            }
        }
    }
    Ok(format!("{} regimes to degree {n}", regimes.len()))
}

fn kirillov_match(ring: &FiniteLieRing) -> Result<f64, String> {
    let group = LazardGroup::new(ring.clone());
    let mut r = rng();
    let classes = conjugacy_classes(&group, DEFAULT_ORDER_CAP, &mut r).map_err(e)?;
    let table = character_table(&group, &classes, TableOptions { seed: SEED, ..TableOptions::default() }).map_err(e)?;
    let orbits = coadjoint_orbits(ring, &mut r).map_err(e)?;
    let roots = RootTable::new(ring);
    let kir = kirillov_table(ring, &roots, &orbits, &classes.representatives());
    let m = match_tables(&kir, &table, MATCH_TOL).map_err(e)?;
    Ok(m.max_deviation)
}

fn c3() -> Outcome {
    let mut worst: f64 = 0.0;
    for (p, k) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
        let ring = heisenberg(p, k);
        let dev = kirillov_match(&ring)?;
        worst = worst.max(dev);
        if k == 1 {
            let orbits = coadjoint_orbits(&ring, &mut rng()).map_err(e)?;
            let mut sizes = orbits.sizes();
            sizes.sort();
            let pp = (p * p) as usize;
            let expected = [vec![1; pp], vec![pp; p as usize - 1]].concat();
            if sizes != expected {
                return Err(format!("F_{p}: orbit sizes {sizes:?}"));
            }
        }
    }
    Ok(format!("F3, F5, F7, Z/9 matched; max deviation {worst:.1e}"))
}

fn c4() -> Outcome {
    let ring = ut4(5);
    let group = LazardGroup::new(ring.clone());
    let mut r = rng();
    let classes = conjugacy_classes(&group, DEFAULT_ORDER_CAP, &mut r).map_err(e)?;
    let table = character_table(&group, &classes, TableOptions { seed: SEED, ..TableOptions::default() }).map_err(e)?;
    let orbits = coadjoint_orbits(&ring, &mut r).map_err(e)?;
    if orbits.len() != classes.len() {
        return Err(format!("{} orbits vs {} classes", orbits.len(), classes.len()));
    }
    let total: usize = orbits.sizes().iter().sum();
    if total != ring.order() {
        return Err(format!("orbit sizes sum to {total}"));
    }
    let mut degrees = table.degrees.clone();
    degrees.sort();
    let mut roots_of_sizes = Vec::new();
    for o in &orbits.orbits {
        roots_of_sizes.push(o.sqrt_size().ok_or_else(|| format!("orbit size {} is not a square", o.size()))?);
    }
    roots_of_sizes.sort();
    if roots_of_sizes != degrees {
        return Err("orbit size roots differ from oracle degrees".into());
    }
    Ok(format!("{} orbits = {} classes", orbits.len(), classes.len()))
}

fn c5() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [3u64, 5] {
        let ring = heisenberg(p, 1);
        let labels = ring.adjoint_orbits().map_err(e)?;
        let group = LazardGroup::new(ring.clone());
        let rep = verify_exp_star(&group, &labels, 10, EXP_STAR_TOL, &mut rng()).map_err(e)?;
        if rep.exhaustive_pairs == 0 {
            return Err(format!("F_{p}: exhaustive pass skipped"));
        }
        worst = worst.max(rep.max_deviation);
        let regime = ValuationRegime::Generic(p);
        let h = substituted_series(regime, 4).map_err(e)?;
        let pair = solve_phi_psi(&h, regime, 4).map_err(e)?;
        let tw = twist_map(&ring, &pair, &mut rng()).map_err(e)?;
        if !(tw.exhaustive && tw.bijective && tw.conjugate && tw.sum_identity) {
            return Err(format!("F_{p}: twist map {tw:?}"));
        }
    }
    Ok(format!("exp* deviation {worst:.1e}; twist map bijective"))
}

fn c6() -> Outcome {
    let ring = z8_p2();
    let group = LazardGroup::new(ring.clone());
    let mut r = rng();
    let classes = conjugacy_classes(&group, DEFAULT_ORDER_CAP, &mut r).map_err(e)?;
    let table = character_table(&group, &classes, TableOptions { seed: SEED, ..TableOptions::default() }).map_err(e)?;
    let cells = p2_orbit_partition(&group, &classes, &table, &mut r).map_err(e)?;
    let covered: usize = cells.iter().map(|c| c.characters.len()).sum();
    if covered != table.len() {
        return Err(format!("{covered} of {} characters covered", table.len()));
    }
    let worst = cells.iter().map(|c| c.max_multiple_deviation).fold(0.0, f64::max);
    if worst > P2_TOL {
        return Err(format!("multiple deviation {worst:e}"));
    }
    Ok(format!("{} cells cover {} irreducibles; deviation {worst:.1e}", cells.len(), table.len()))
}

fn c7() -> Outcome {
    for p in [3u64, 2] {
        let alg = QpLieAlgebra::new(p, 3, &[(0, 1, 2, rat_int(1))]).map_err(e)?;
        let chain = uniform_chain(&alg, None, 4).map_err(e)?;
        if chain.len() != 4 || chain.iter().any(|l| l.properties != [true; 5]) {
            return Err(format!("Q_{p}: chain incomplete"));
        }
    }
    Ok("Heisenberg over Q_3 and Q_2, j = 1..4".into())
}

fn c8() -> Outcome {
    let f3 = LazardGroup::new(heisenberg(3, 1));
    let a = restriction_harness(&f3, &[vec![0, 0, 1]], 1, &mut rng()).map_err(e)?;
    let z9 = LazardGroup::new(heisenberg(3, 2));
    let pg: Vec<Vec<u64>> = (0..3).map(|i| z9.ring().scale(3, &z9.ring().basis_vector(i))).collect();
    let b = restriction_harness(&z9, &pg, 1, &mut rng()).map_err(e)?;
    let dev = a.max_integrality_error.max(b.max_integrality_error);
    Ok(format!("{}x{} and {}x{} pairs agree; integrality {dev:.1e}", a.orbits, a.suborbits, b.orbits, b.suborbits))
}

fn c9() -> Outcome {
    let groups = [heisenberg(3, 1), heisenberg(5, 1), heisenberg(7, 1), heisenberg(3, 2), ut4(5), z8_p2()];
    let mut worst: f64 = 0.0;
    for ring in &groups {
        let classes = ConjClassPartition::from_labels(&ring.adjoint_orbits().map_err(e)?);
        let orbits = coadjoint_orbits(ring, &mut rng()).map_err(e)?;
        let kir = kirillov_table(ring, &RootTable::new(ring), &orbits, &classes.representatives());
        let dev = orthogonality_deviation(&kir, &classes.sizes());
        worst = worst.max(dev);
        if dev > ORTHO_TOL {
            return Err(format!("order {}: deviation {dev:e}", ring.order()));
        }
    }
    Ok(format!("{} groups; max deviation {worst:.1e}", groups.len()))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome, Duration); 9] = [
        (1, c1, Duration::from_secs(10)),
        (2, c2, Duration::from_secs(30)),
        (3, c3, Duration::from_secs(60)),
        (4, c4, Duration::from_secs(15 * 60)),
        (5, c5, Duration::from_secs(5 * 60)),
        (6, c6, Duration::from_secs(60)),
        (7, c7, Duration::from_secs(60)),
        (8, c8, Duration::from_secs(5 * 60)),
        (9, c9, Duration::from_secs(5 * 60)),
    ];
    let results: Vec<(usize, Outcome, Duration, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(n, f, limit)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (n, out, t.elapsed(), limit)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (n, out, took, limit) in results {
        let (status, detail) = match out {
            Ok(d) if took <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took {took:.1?}, limit {limit:?}")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {n}: {status} [{:.2}s] {detail}", took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
