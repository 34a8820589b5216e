//! wasm-bindgen bindings behind `www/index.html`. Every export takes plain
//! values or a JSON ring spec and returns a JSON string.

use num_complex::Complex64;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use orbitkit::chsolver::{solve_phi_psi, substituted_series, ValuationRegime};
use orbitkit::freelie::{bch, bracketing, LiePoly, LieTables, TABLE_DEGREE};
use orbitkit::harmonic::RootTable;
use orbitkit::oracle::ConjClassPartition;
use orbitkit::orbitmethod::{coadjoint_orbits, kirillov_table, orthogonality_deviation};
use orbitkit::scalar::Valuation;
use orbitkit::spec::RingSpec;

const SEED: u64 = 1;
/// Keeps the page responsive; larger rings belong to the CLI.
const MAX_ORDER: usize = 3125;

fn terms(poly: &LiePoly, degree: usize) -> Value {
    let tables = LieTables::global();
    poly.terms()
        .filter(|(d, _, _)| *d == degree)
        .map(|(d, k, c)| json!({"basis": bracketing(&tables.basis(d)[k].word), "coefficient": c.to_string()}))
        .collect()
}

fn val(v: Valuation) -> String {
    match v {
        Valuation::Finite(r) => r.to_string(),
        Valuation::Infinite => "inf".into(),
    }
}

fn degree_ok(degree: usize) -> Result<(), String> {
    if degree == 0 || degree > TABLE_DEGREE {
        return Err(format!("degree must be between 1 and {TABLE_DEGREE}"));
    }
    Ok(())
}

pub fn bch_table_json(prime: u64, degree: usize) -> Result<String, String> {
    degree_ok(degree)?;
    if !orbitkit::liering::is_prime(prime) {
        return Err(format!("{prime} is not prime"));
    }
    let series = bch(degree);
    let rows: Vec<Value> = (1..=degree)
        .map(|n| {
            json!({
                "n": n,
                "valuation": val(series.component_valuation(n, prime)),
                "bound": Ratio::new(-(n as i64 - 1), prime as i64 - 1).to_string(),
                "terms": terms(series.as_poly(), n),
            })
        })
        .collect();
    Ok(json!({"prime": prime, "degrees": rows}).to_string())
}

pub fn solve_json(regime: &str, degree: usize) -> Result<String, String> {
    degree_ok(degree)?;
    let regime = ValuationRegime::parse(regime).map_err(|e| e.to_string())?;
    let h = substituted_series(regime, degree).map_err(|e| e.to_string())?;
    let pair = solve_phi_psi(&h, regime, degree).map_err(|e| e.to_string())?;
    let p = regime.prime();
    let rows: Vec<Value> = (1..pair.certified_to)
        .map(|n| {
            json!({
                "n": n,
                "bound": regime.output_bound(n).to_string(),
                "phi": {"valuation": val(pair.phi.component_valuation(n, p)), "terms": terms(pair.phi.as_poly(), n)},
                "psi": {"valuation": val(pair.psi.component_valuation(n, p)), "terms": terms(pair.psi.as_poly(), n)},
            })
        })
        .collect();
    Ok(json!({"regime": regime.to_string(), "degrees": rows}).to_string())
}

fn round(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn cx(z: Complex64) -> Value {
    json!([round(z.re), round(z.im)])
}

pub fn orbit_table_json(spec: &str) -> Result<String, String> {
    let spec = RingSpec::from_json(spec).map_err(|e| e.to_string())?;
    let ring = spec.build().map_err(|e| e.to_string())?;
    if ring.p() == 2 {
        return Err("the orbit method table needs an odd prime".into());
    }
    if ring.order() > MAX_ORDER {
        return Err(format!("order {} is above the demo limit {MAX_ORDER}", ring.order()));
    }
    let labels = ring.adjoint_orbits().map_err(|e| e.to_string())?;
    let classes = ConjClassPartition::from_labels(&labels);
    let reps = classes.representatives();
    let roots = RootTable::new(&ring);
    let orbits = coadjoint_orbits(&ring, &mut ChaCha8Rng::seed_from_u64(SEED)).map_err(|e| e.to_string())?;
    let table = kirillov_table(&ring, &roots, &orbits, &reps);
    let deviation = orthogonality_deviation(&table, &classes.sizes());
    Ok(json!({
        "order": ring.order(),
        "classes": reps.iter().zip(classes.sizes()).map(|(&r, s)| json!({"representative": ring.element(r), "size": s})).collect::<Vec<_>>(),
        "orbits": orbits.orbits.iter().map(|o| json!({"representative": ring.element(o.members[0]), "size": o.size()})).collect::<Vec<_>>(),
        "characters": table.iter().map(|row| row.iter().copied().map(cx).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "orthogonality_deviation": deviation,
    })
    .to_string())
}

/// BCH components up to `degree` with their p-adic valuations.
#[wasm_bindgen]
pub fn bch_table(prime: u32, degree: u32) -> Result<String, JsError> {
    bch_table_json(prime as u64, degree as usize).map_err(|e| JsError::new(&e))
}

/// φ and ψ for a regime such as `generic:3` or `sqrtp:5`.
#[wasm_bindgen]
pub fn solve(regime: &str, degree: u32) -> Result<String, JsError> {
    solve_json(regime, degree as usize).map_err(|e| JsError::new(&e))
}

/// Coadjoint orbits and their Kirillov characters on conjugacy classes.
#[wasm_bindgen]
pub fn orbit_table(spec: &str) -> Result<String, JsError> {
    orbit_table_json(spec).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bch_at_two_has_the_expected_valuations() {
        let v: Value = serde_json::from_str(&bch_table_json(2, 4).unwrap()).unwrap();
        let vals: Vec<&str> =
            v["degrees"].as_array().unwrap().iter().map(|d| d["valuation"].as_str().unwrap()).collect();
        assert_eq!(vals, ["0", "-1", "-2", "-3"]);
        assert!(bch_table_json(6, 3).is_err());
        assert!(bch_table_json(3, 0).is_err());
    }

    #[test]
    fn heisenberg_orbit_table() {
        let spec = r#"{"p": 3, "moduli": [1, 1, 1], "brackets": {"(1,2)": {"3": 1}}}"#;
        let v: Value = serde_json::from_str(&orbit_table_json(spec).unwrap()).unwrap();
        assert_eq!(v["orbits"].as_array().unwrap().len(), 11);
        assert_eq!(v["classes"].as_array().unwrap().len(), 11);
        assert!(v["orthogonality_deviation"].as_f64().unwrap() < 1e-9);
        let even = r#"{"p": 2, "moduli": [1, 1], "brackets": {}}"#;
        assert!(orbit_table_json(even).is_err());
        assert!(orbit_table_json("{").is_err());
    }

    #[test]
    fn solve_reports_phi_and_psi() {
        let v: Value = serde_json::from_str(&solve_json("generic:3", 4).unwrap()).unwrap();
        assert!(!v["degrees"].as_array().unwrap().is_empty());
        assert!(solve_json("bogus", 4).is_err());
    }
}
