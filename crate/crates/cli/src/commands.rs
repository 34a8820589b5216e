use std::path::Path;

use clap::ValueEnum;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use orbitkit::chsolver::{check_identity, solve_phi_psi_with, substituted_series, SolveStrategy, ValuationRegime};
use orbitkit::freelie::{bch as bch_series, bracketing, LiePoly, LieTables, TABLE_DEGREE};
use orbitkit::harmonic::RootTable;
use orbitkit::liering::{twist_map, FiniteLieRing, LazardGroup, RingRegime};
use orbitkit::oracle::{
    character_table, conjugacy_classes, match_tables, CharTable, ConjClassPartition, TableOptions, DEFAULT_ORDER_CAP,
};
use orbitkit::orbitmethod::{
    coadjoint_orbits, kirillov_table, orthogonality_deviation, p2_convolution_check, p2_orbit_partition,
    verify_exp_star, verify_idempotents, OrbitPartition,
};
use orbitkit::padic::{restriction_harness, show, uniform_chain};
use orbitkit::report::{Check, Report};
use orbitkit::scalar::Valuation;
use orbitkit::spec::{QpAlgebraSpec, RingSpec, SubringSpec};
use orbitkit::{Error, Result};

use crate::{Method, Strategy};

const EXP_STAR_TRIALS: usize = 20;
const P2_TRIALS: usize = 10;
const MAX_IDEMPOTENT_PAIRS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Idempotents,
    Expstar,
    Twist,
    Orthogonality,
    P2,
}

impl CheckName {
    pub fn all() -> Vec<CheckName> {
        CheckName::value_variants().to_vec()
    }

    fn label(self) -> &'static str {
        match self {
            CheckName::Idempotents => "idempotents",
            CheckName::Expstar => "expstar",
            CheckName::Twist => "twist",
            CheckName::Orthogonality => "orthogonality",
            CheckName::P2 => "p2",
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn load_ring(path: &Path) -> Result<(RingSpec, FiniteLieRing)> {
    let spec = RingSpec::from_json(&read(path)?)?;
    let ring = spec.build()?;
    Ok((spec, ring))
}

/// Rounded to 12 decimals so that reports do not carry last-bit noise.
fn num(x: f64) -> Value {
    let r = (x * 1e12).round() / 1e12;
    json!(if r == 0.0 { 0.0 } else { r })
}

fn cx(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn val(v: Valuation) -> String {
    match v {
        Valuation::Finite(r) => r.to_string(),
        Valuation::Infinite => "inf".into(),
    }
}

/// Pass, fail with the error as witness, or propagate errors that are not
/// verification outcomes.
fn record<T>(report: &mut Report, name: &str, r: Result<T>, detail: impl FnOnce(&T) -> Value) -> Result<Option<T>> {
    match r {
        Ok(t) => {
            report.push(Check::pass(name, detail(&t)));
            Ok(Some(t))
        }
        Err(e) if e.is_verification_failure() => {
            report.push(Check::fail(name, e.to_string(), Value::Null));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn terms(poly: &LiePoly, degree: usize) -> Value {
    let tables = LieTables::global();
    let list: Vec<Value> = poly
        .terms()
        .filter(|(d, _, _)| *d == degree)
        .map(|(d, k, c)| json!({"basis": bracketing(&tables.basis(d)[k].word), "coefficient": c.to_string()}))
        .collect();
    Value::Array(list)
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > TABLE_DEGREE {
        return Err(Error::DegreeCap { requested: n, cap: TABLE_DEGREE });
    }
    Ok(())
}

pub fn bch(prime: Option<u64>, degree: usize, regime: Option<&str>, seed: u64) -> Result<Report> {
    check_degree(degree)?;
    let regime = regime.map(ValuationRegime::parse).transpose()?;
    let p = match (prime, regime) {
        (Some(p), Some(r)) if p != r.prime() => return Err(Error::PrimeContextMismatch(Some(p), Some(r.prime()))),
        (Some(p), _) => p,
        (None, Some(r)) => r.prime(),
        (None, None) => return Err(Error::InvalidInput("give --prime or --regime".into())),
    };
    if !orbitkit::liering::is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let series = match regime {
        Some(r) => substituted_series(r, degree)?,
        None => bch_series(degree),
    };
    let mut report =
        Report::new("bch", json!({"prime": p, "degree": degree, "regime": regime.map(|r| r.to_string())}), seed);
    let mut rows = Vec::new();
    let mut worst: Option<String> = None;
    for n in 1..=degree {
        let v = series.component_valuation(n, p);
        let bound = match regime {
            Some(r) if n >= 2 => r.input_bound(n),
            Some(_) => num_rational::Ratio::from_integer(0),
            None => num_rational::Ratio::new(-(n as i64 - 1), p as i64 - 1),
        };
        let margin = v.as_ratio().map(|x| (x - bound).to_string()).unwrap_or_else(|| "inf".into());
        if !v.at_least(bound) && worst.is_none() {
            worst = Some(format!("degree {n}: valuation {} below {bound}", val(v)));
        }
        rows.push(json!({
            "n": n,
            "valuation": val(v),
            "bound": bound.to_string(),
            "margin": margin,
            "terms": terms(series.as_poly(), n),
        }));
    }
    report.result = json!({ "degrees": rows });
    match worst {
        None => report.push(Check::pass("valuation bound", Value::Null)),
        Some(w) => report.push(Check::fail("valuation bound", w, Value::Null)),
    }
    Ok(report)
}

pub fn solve(regime: &str, degree: usize, strategy: Strategy, seed: u64) -> Result<Report> {
    check_degree(degree)?;
    let regime = ValuationRegime::parse(regime)?;
    let strategy = match strategy {
        Strategy::Fixed => SolveStrategy::FixedOrder,
        Strategy::Plocal => SolveStrategy::PLocal,
    };
    let h = substituted_series(regime, degree)?;
    let mut report = Report::new(
        "solve",
        json!({"regime": regime.to_string(), "degree": degree, "strategy": format!("{strategy:?}")}),
        seed,
    );
    let Some(pair) = record(
        &mut report,
        "solve",
        solve_phi_psi_with(&h, regime, degree, strategy),
        |pair| json!({"certified_to": pair.certified_to, "fallback_degrees": pair.fallback_degrees}),
    )?
    else {
        return Ok(report);
    };
    let p = regime.prime();
    let mut rows = Vec::new();
    let mut below = None;
    for n in 1..pair.certified_to {
        let bound = regime.output_bound(n);
        let vphi = pair.phi.component_valuation(n, p);
        let vpsi = pair.psi.component_valuation(n, p);
        if (!vphi.at_least(bound) || !vpsi.at_least(bound)) && below.is_none() {
            below = Some(format!("degree {n}: v(phi) = {}, v(psi) = {}, bound {bound}", val(vphi), val(vpsi)));
        }
        rows.push(json!({
            "n": n,
            "bound": bound.to_string(),
            "phi": {"valuation": val(vphi), "terms": terms(pair.phi.as_poly(), n)},
            "psi": {"valuation": val(vpsi), "terms": terms(pair.psi.as_poly(), n)},
        }));
    }
    report.result = json!({ "degrees": rows });
    if check_identity(&h, &pair, degree) {
        report.push(Check::pass("identity", Value::Null));
    } else {
        report.push(Check::fail(
            "identity",
            format!("e^ad(phi) x + e^ad(psi) y differs from H below degree {degree}"),
            Value::Null,
        ));
    }
    match below {
        None => report.push(Check::pass("output bound", Value::Null)),
        Some(w) => report.push(Check::fail("output bound", w, Value::Null)),
    }
    if let ValuationRegime::SqrtP(_) = regime {
        let (phi, psi) = pair.unscaled();
        if phi.is_rational() && psi.is_rational() {
            report.push(Check::pass("rational after back-substitution", Value::Null));
        } else {
            report.push(Check::fail("rational after back-substitution", "nonzero surd part", Value::Null));
        }
    }
    Ok(report)
}

fn require_odd(ring: &FiniteLieRing, what: &str) -> Result<()> {
    if ring.p() == 2 {
        return Err(Error::RegimeViolation(format!("{what} needs an odd prime")));
    }
    Ok(())
}

struct Orbits {
    roots: RootTable,
    orbits: OrbitPartition,
}

fn orbit_data(ring: &FiniteLieRing, rng: &mut ChaCha8Rng) -> Result<Orbits> {
    Ok(Orbits { roots: RootTable::new(ring), orbits: coadjoint_orbits(ring, rng)? })
}

fn table_json(rows: &[Vec<Complex64>]) -> Value {
    rows.iter().map(|r| Value::Array(r.iter().copied().map(cx).collect())).collect()
}

fn oracle_table(group: &LazardGroup, classes: &ConjClassPartition, seed: u64) -> Result<CharTable> {
    character_table(group, classes, TableOptions { seed, ..TableOptions::default() })
}

pub fn chartable(input: &Path, method: Method, tolerance: f64, seed: u64) -> Result<Report> {
    let (spec, ring) = load_ring(input)?;
    if method != Method::Oracle {
        require_odd(&ring, "the orbit method bijection")?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = LazardGroup::new(ring.clone());
    let classes = conjugacy_classes(&group, DEFAULT_ORDER_CAP, &mut rng)?;
    let reps = classes.representatives();
    let mut report =
        Report::new("chartable", json!({"ring": spec, "method": method_name(method), "tolerance": tolerance}), seed);
    let mut result = serde_json::Map::new();
    result.insert("order".into(), json!(ring.order()));
    result.insert(
        "classes".into(),
        reps.iter().zip(classes.sizes()).map(|(&r, s)| json!({"representative": ring.element(r), "size": s})).collect(),
    );
    let mut kir = None;
    if method != Method::Oracle {
        let o = orbit_data(&ring, &mut rng)?;
        let values = kirillov_table(&ring, &o.roots, &o.orbits, &reps);
        result.insert(
            "kirillov".into(),
            json!({
                "orbits": o.orbits.orbits.iter().map(|orb| json!({
                    "size": orb.size(),
                    "degree": orb.sqrt_size(),
                    "representative": ring.element(orb.members[0]),
                })).collect::<Vec<_>>(),
                "characters": table_json(&values),
            }),
        );
        kir = Some(values);
    }
    let mut table = None;
    if method != Method::Kirillov {
        let t = oracle_table(&group, &classes, seed)?;
        result.insert(
            "oracle".into(),
            json!({"degrees": t.degrees, "characters": table_json(&t.rows), "attempts": t.attempts}),
        );
        table = Some(t);
    }
    if let (Some(k), Some(t)) = (&kir, &table) {
        record(
            &mut report,
            "kirillov matches oracle",
            match_tables(k, t, tolerance),
            |m| json!({"characters": m.assignment.len(), "max_deviation": m.max_deviation}),
        )?
        .map(|m| result.insert("assignment".into(), json!(m.assignment)));
    }
    if let Some(k) = &kir {
        let dev = orthogonality_deviation(k, &classes.sizes());
        if dev <= tolerance {
            report.push(Check::pass("orbit characters orthonormal", json!({"max_deviation": dev})));
        } else {
            report.push(Check::fail(
                "orbit characters orthonormal",
                format!("Gram matrix deviation {dev:e}"),
                Value::Null,
            ));
        }
    }
    report.result = Value::Object(result);
    Ok(report)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Kirillov => "kirillov",
        Method::Oracle => "oracle",
        Method::Both => "both",
    }
}

pub fn verify(input: &Path, checks: &[CheckName], tolerance: f64, seed: u64) -> Result<Report> {
    let (spec, ring) = load_ring(input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = LazardGroup::new(ring.clone());
    let labels = ring.adjoint_orbits()?;
    let names: Vec<&str> = checks.iter().map(|c| c.label()).collect();
    let mut report = Report::new("verify", json!({"ring": spec, "checks": names, "tolerance": tolerance}), seed);
    let odd = ring.p() != 2;
    let mut orbits: Option<Orbits> = None;
    for &check in checks {
        let name = check.label();
        match check {
            CheckName::Idempotents | CheckName::Expstar if !odd => {
                report.push(Check::skipped(name, "stated for odd p; see the p2 check"));
            }
            CheckName::Twist if !odd || ring.regime() != RingRegime::FiniteClass => {
                report.push(Check::skipped(name, "evaluated for odd p and class below p"));
            }
            CheckName::P2 if odd => report.push(Check::skipped(name, "p = 2 only")),
            CheckName::Idempotents => {
                if orbits.is_none() {
                    orbits = Some(orbit_data(&ring, &mut rng)?);
                }
                let o = orbits.as_ref().unwrap();
                let r = verify_idempotents(&group, &o.roots, &o.orbits, tolerance, MAX_IDEMPOTENT_PAIRS, &mut rng);
                record(
                    &mut report,
                    name,
                    r,
                    |r| json!({"idempotents": r.idempotents, "pairs": r.pairs_checked, "max_deviation": r.max_deviation}),
                )?;
            }
            CheckName::Expstar => {
                let r = verify_exp_star(&group, &labels, EXP_STAR_TRIALS, tolerance, &mut rng);
                record(
                    &mut report,
                    name,
                    r,
                    |r| json!({"random_trials": r.random_trials, "exhaustive_pairs": r.exhaustive_pairs, "max_deviation": r.max_deviation}),
                )?;
            }
            CheckName::Twist => {
                let regime = ValuationRegime::Generic(ring.p());
                let n = ring.class().max(2);
                let h = substituted_series(regime, n)?;
                let pair = solve_phi_psi_with(&h, regime, n, SolveStrategy::FixedOrder)?;
                record(
                    &mut report,
                    name,
                    twist_map(&ring, &pair, &mut rng),
                    |t| json!({"pairs": t.pairs_checked, "exhaustive": t.exhaustive}),
                )?;
            }
            CheckName::Orthogonality => {
                if orbits.is_none() {
                    orbits = Some(orbit_data(&ring, &mut rng)?);
                }
                let o = orbits.as_ref().unwrap();
                let classes = ConjClassPartition::from_labels(&labels);
                let values = kirillov_table(&ring, &o.roots, &o.orbits, &classes.representatives());
                let dev = orthogonality_deviation(&values, &classes.sizes());
                if dev <= tolerance {
                    report.push(Check::pass(name, json!({"orbits": o.orbits.len(), "max_deviation": dev})));
                } else {
                    report.push(Check::fail(name, format!("Gram matrix deviation {dev:e}"), Value::Null));
                }
            }
            CheckName::P2 => {
                let classes = conjugacy_classes(&group, DEFAULT_ORDER_CAP, &mut rng)?;
                let table = oracle_table(&group, &classes, seed)?;
                record(&mut report, "p2 partition", p2_orbit_partition(&group, &classes, &table, &mut rng), |cells| {
                    json!({
                        "cells": cells.len(),
                        "characters": table.len(),
                        "max_multiple_deviation": cells.iter().map(|c| c.max_multiple_deviation).fold(0.0, f64::max),
                    })
                })?;
                record(
                    &mut report,
                    "p2 convolution",
                    p2_convolution_check(&group, P2_TRIALS, tolerance, &mut rng),
                    |r| {
                        json!({
                            "trials": r.trials,
                            "both_supported_deviation": r.both_supported_deviation,
                            "one_supported_deviation": r.one_supported_deviation,
                            "counterexample_without_support": r.counterexample,
                        })
                    },
                )?;
            }
        }
    }
    Ok(report)
}

pub fn chain(input: &Path, levels: usize, seed: u64) -> Result<Report> {
    if levels == 0 {
        return Err(Error::InvalidInput("levels must be positive".into()));
    }
    let spec = QpAlgebraSpec::from_json(&read(input)?)?;
    let (alg, basis) = spec.build()?;
    let mut report = Report::new("chain", json!({"algebra": spec, "levels": levels}), seed);
    let names = ["bracket-closed", "commutator in scale times lattice", "nested", "full rank", "contains scaled basis"];
    match uniform_chain(&alg, basis.as_deref(), levels) {
        Ok(chain) => {
            for level in &chain {
                for (letter, name) in ('a'..='e').zip(names) {
                    report.push(Check::pass(format!("k_{} ({letter}) {name}", level.j), Value::Null));
                }
            }
            report.result = json!({
                "class": alg.class(),
                "levels": chain.iter().map(|l| json!({
                    "j": l.j,
                    "basis": l.lattice.basis().iter().map(|v| show(v)).collect::<Vec<_>>(),
                    "covolume_exponent": l.lattice.covolume_exponent(),
                })).collect::<Vec<_>>(),
            });
        }
        Err(Error::ChainAssertion { property, level, witness }) => {
            let idx = (property as u8).wrapping_sub(b'a') as usize;
            let name = names.get(idx).copied().unwrap_or("property");
            report.push(Check::fail(format!("k_{level} ({property}) {name}"), witness, Value::Null));
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

pub fn restrict(input: &Path, subring: &Path, alpha: u64, seed: u64) -> Result<Report> {
    let (spec, ring) = load_ring(input)?;
    let sub = SubringSpec::from_json(&read(subring)?)?;
    let gens = sub.elements(&ring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = LazardGroup::new(ring);
    let mut report = Report::new("restrict", json!({"ring": spec, "subring": sub, "alpha": alpha}), seed);
    let r = restriction_harness(&group, &gens, alpha, &mut rng);
    if let Some(r) = record(
        &mut report,
        "restriction equivalence",
        r,
        |r| json!({"pairs": r.orbits * r.suborbits, "max_integrality_error": r.max_integrality_error}),
    )? {
        report.result = json!({
            "orbits": r.orbits,
            "suborbits": r.suborbits,
            "contained": r.contained,
            "multiplicities": r.multiplicities.iter().map(|row| row.iter().map(|m| num(*m)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "note": "restriction multiplicities of finite groups stand in for supports of restricted representations",
        });
    }
    Ok(report)
}
