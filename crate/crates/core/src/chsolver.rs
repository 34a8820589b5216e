//! Degree-by-degree construction of Lie series `phi`, `psi` with
//! `H(x, y) = e^{ad phi}(x) + e^{ad psi}(y)`, together with the valuation
//! certificates that make them evaluable on uniform and finite Lie rings.
//!
//! At degree `n` the unknowns `(phi_n, psi_n)` enter the degree `n + 1`
//! comparison only through the linear term `[phi_n, x] + [psi_n, y]`; everything
//! else is already known from lower degrees. Each step is an exact linear solve
//! over `Q` or `Q(sqrt p)`.

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::freelie::{bch, exp_ad_apply, Generator, GradedSeries, LiePoly, LieTables};
use crate::scalar::{rat_int, Scalar, Valuation};

/// The valuation regimes in which the decomposition is certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValuationRegime {
    /// `v_p(H_n) >= -(n-2)/(p-1)` in, `-(n-1)/(p-1)` out.
    Generic(u64),
    /// `p = 3`, `v_3(H_n) >= -(6n-10)/7` in, `-(6n-4)/7` out.
    P3Uniform,
    /// `H = (1/sqrt p) CH(sqrt p x, sqrt p y)` for `p >= 5`, with even solutions.
    SqrtP(u64),
    /// `H = (1/2) CH(2x, 2y)` with the degree-one choice `phi_1 = 0`.
    P2Half,
    /// `H = (1/2) CH(2x, 2y)`, i.e. `CH` with both variables in `2g`.
    P2Quarter,
}

impl ValuationRegime {
    pub fn prime(&self) -> u64 {
        match *self {
            ValuationRegime::Generic(p) | ValuationRegime::SqrtP(p) => p,
            ValuationRegime::P3Uniform => 3,
            ValuationRegime::P2Half | ValuationRegime::P2Quarter => 2,
        }
    }

    /// Required lower bound on `v_p(H_n)`, `n >= 2`.
    pub fn input_bound(&self, n: usize) -> Ratio<i64> {
        let n = n as i64;
        match *self {
            ValuationRegime::Generic(p) => Ratio::new(-(n - 2), p as i64 - 1),
            ValuationRegime::P3Uniform => Ratio::new(-(6 * n - 10), 7),
            ValuationRegime::SqrtP(_) | ValuationRegime::P2Half | ValuationRegime::P2Quarter => Ratio::from_integer(0),
        }
    }

    /// Guaranteed lower bound on `v_p(phi_n)`, `v_p(psi_n)`.
    pub fn output_bound(&self, n: usize) -> Ratio<i64> {
        let n = n as i64;
        match *self {
            ValuationRegime::Generic(p) | ValuationRegime::SqrtP(p) => Ratio::new(-(n - 1), p as i64 - 1),
            ValuationRegime::P3Uniform => Ratio::new(-(6 * n - 4), 7),
            ValuationRegime::P2Half | ValuationRegime::P2Quarter => Ratio::from_integer(-(n - 1)),
        }
    }

    /// Parses `generic:5`, `p3`, `sqrtp:5`, `p2half`, `p2quarter`.
    pub fn parse(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let (tag, arg) = match lower.split_once(':') {
            Some((t, a)) => (t.to_string(), Some(a.to_string())),
            None => (lower.clone(), None),
        };
        let prime = |a: Option<String>| -> Result<u64> {
            a.ok_or_else(|| Error::InvalidInput(format!("regime {s} needs a prime")))?
                .parse::<u64>()
                .map_err(|e| Error::InvalidInput(e.to_string()))
        };
        let r = match tag.as_str() {
            "generic" => ValuationRegime::Generic(prime(arg)?),
            "p3" | "p3_uniform" | "p3uniform" => ValuationRegime::P3Uniform,
            "sqrtp" => ValuationRegime::SqrtP(prime(arg)?),
            "p2half" | "p2_half" => ValuationRegime::P2Half,
            "p2quarter" | "p2_quarter" => ValuationRegime::P2Quarter,
            _ => return Err(Error::InvalidInput(format!("unknown regime {s}"))),
        };
        match r {
            ValuationRegime::Generic(p) if !crate::liering::is_prime(p) => {
                Err(Error::InvalidInput(format!("{p} is not prime")))
            }
            ValuationRegime::SqrtP(p) if p < 5 || !crate::liering::is_prime(p) => {
                Err(Error::InvalidInput(format!("sqrtp regime needs a prime >= 5, got {p}")))
            }
            r => Ok(r),
        }
    }
}

impl std::fmt::Display for ValuationRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValuationRegime::Generic(p) => write!(f, "generic:{p}"),
            ValuationRegime::P3Uniform => write!(f, "p3"),
            ValuationRegime::SqrtP(p) => write!(f, "sqrtp:{p}"),
            ValuationRegime::P2Half => write!(f, "p2half"),
            ValuationRegime::P2Quarter => write!(f, "p2quarter"),
        }
    }
}

/// How each degree's linear system is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStrategy {
    /// Fixed column order (phi block, then psi block, Lyndon order), free
    /// variables zero; falls back to [`SolveStrategy::PLocal`] when the result
    /// misses the certified bound.
    FixedOrder,
    /// Full pivoting on the entry of least p-adic valuation. The bracket map
    /// `(a, b) -> [a, x] + [b, y]` is surjective over `Z`, so with integral
    /// multipliers the solution is no worse than the right-hand side.
    PLocal,
}

/// A certified solution of `H = e^{ad phi}(x) + e^{ad psi}(y)` through degree `certified_to`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiPsiPair {
    pub phi: GradedSeries,
    pub psi: GradedSeries,
    pub regime: ValuationRegime,
    pub certified_to: usize,
    /// Degrees at which the fixed-order solution missed the bound.
    pub fallback_degrees: Vec<usize>,
}

impl PhiPsiPair {
    /// The pair rewritten in the original variables of `CH`: for the
    /// substituted regimes `phi(z, w) = phi'(z/s, w/s)` with `s = sqrt p` or `2`.
    pub fn unscaled(&self) -> (LiePoly, LiePoly) {
        let f = |n: usize| inverse_substitution_factor(self.regime, n);
        (self.phi.as_poly().scale_by_degree(f), self.psi.as_poly().scale_by_degree(f))
    }
}

/// `s^{-n}`: the factor multiplying degree-`n` coefficients under `x -> x/s`.
fn inverse_substitution_factor(regime: ValuationRegime, n: usize) -> Scalar {
    match regime {
        ValuationRegime::SqrtP(p) => {
            let half = (n / 2) as u32;
            let pow = rat_int(p as i64).pow(half as i32);
            if n % 2 == 0 {
                Scalar::from_rational(pow.recip())
            } else {
                // p^{-n/2} = sqrt(p) / p^{(n+1)/2}
                let denom = pow * rat_int(p as i64);
                Scalar::new(num_rational::BigRational::zero(), denom.recip(), p)
            }
        }
        ValuationRegime::P2Half | ValuationRegime::P2Quarter => Scalar::from_rational(rat_int(2).pow(n as i32).recip()),
        _ => Scalar::one(),
    }
}

/// `s^{n-1}`: `H_n = s^{n-1} CH_n` for `H = (1/s) CH(s x, s y)`.
fn substitution_factor(regime: ValuationRegime, n: usize) -> Scalar {
    match regime {
        ValuationRegime::SqrtP(p) => {
            let k = n - 1;
            let pow = rat_int(p as i64).pow((k / 2) as i32);
            if k % 2 == 0 {
                Scalar::from_rational(pow)
            } else {
                Scalar::new(num_rational::BigRational::zero(), pow, p)
            }
        }
        ValuationRegime::P2Half | ValuationRegime::P2Quarter => Scalar::from_rational(rat_int(2).pow((n - 1) as i32)),
        _ => Scalar::one(),
    }
}

fn check_input(h: &GradedSeries, regime: ValuationRegime, n: usize) -> Result<()> {
    let p = regime.prime();
    for d in 2..=n.min(h.degree()) {
        let v = h.component_valuation(d, p);
        let bound = regime.input_bound(d);
        if !v.at_least(bound) {
            return Err(Error::InputBoundViolation { degree: d, valuation: v.to_string(), bound: bound.to_string() });
        }
    }
    Ok(())
}

/// The input series of a regime: `CH` truncated below `p` (generic), `CH`
/// (`p = 3` uniform), `(1/sqrt p) CH(sqrt p x, sqrt p y)`, or `(1/2) CH(2x, 2y)`.
pub fn substituted_series(regime: ValuationRegime, n: usize) -> Result<GradedSeries> {
    let ch = bch(n);
    let h = match regime {
        ValuationRegime::Generic(p) => ch.as_poly().discard_from(p as usize),
        ValuationRegime::P3Uniform => ch.as_poly().clone(),
        _ => ch.as_poly().scale_by_degree(|d| substitution_factor(regime, d)),
    };
    let h = GradedSeries::new(h);
    check_input(&h, regime, n)?;
    Ok(h)
}

/// Solves for `phi`, `psi` through degree `n - 1` so that the identity holds
/// through degree `n`.
pub fn solve_phi_psi(h: &GradedSeries, regime: ValuationRegime, n: usize) -> Result<PhiPsiPair> {
    solve_phi_psi_with(h, regime, n, SolveStrategy::FixedOrder)
}

pub fn solve_phi_psi_with(
    h: &GradedSeries,
    regime: ValuationRegime,
    n: usize,
    strategy: SolveStrategy,
) -> Result<PhiPsiPair> {
    let tables = LieTables::global();
    if n > tables.max_degree() || n > h.degree() {
        return Err(Error::DegreeCap { requested: n, cap: h.degree().min(tables.max_degree()) });
    }
    let p = regime.prime();
    let x = LiePoly::x(n);
    let y = LiePoly::y(n);
    if h.component(1) != x.add(&y) {
        return Err(Error::InvalidInput("H_1 must equal x + y".into()));
    }
    check_input(h, regime, n)?;
    let context = h.as_poly().prime();
    let mut phi = LiePoly::zero_with_prime(n, context);
    let mut psi = LiePoly::zero_with_prime(n, context);
    let mut fallback_degrees = Vec::new();

    for d in 1..n {
        let known = exp_ad_apply(&phi, Generator::X, d + 1)
            .add(&exp_ad_apply(&psi, Generator::Y, d + 1))
            .with_max_degree(n)
            .component(d + 1);
        let rhs = h.component(d + 1).sub(&known);
        let rhs_coords = rhs.degree_coefficients(d + 1).to_vec();

        // Unknown coefficients t; phi_d = Σ t_b s b. In the sqrt p regime s = sqrt p
        // for odd d keeps phi purely even; otherwise s = 1.
        let s = match regime {
            ValuationRegime::SqrtP(p) if d % 2 == 1 => Scalar::sqrt_p(p),
            _ => Scalar::one(),
        };
        let dim = tables.dim(d);
        let only_psi = regime == ValuationRegime::P2Half && d == 1;
        let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(2 * dim);
        for gen in [Generator::X, Generator::Y] {
            let g = LiePoly::generator(gen, d + 1);
            for k in 0..dim {
                let b = LiePoly::basis_element(&tables.basis(d)[k].word, s.clone(), d + 1);
                let col = b.bracket(&g)?;
                let mut v = col.degree_coefficients(d + 1).to_vec();
                if only_psi && gen == Generator::X {
                    v.iter_mut().for_each(|c| *c = Scalar::zero());
                }
                columns.push(v);
            }
        }

        let bound = regime.output_bound(d);
        let assemble = |sol: &[Scalar]| -> (LiePoly, LiePoly) {
            let mut a = LiePoly::zero_with_prime(n, context);
            let mut b = LiePoly::zero_with_prime(n, context);
            for k in 0..dim {
                a.set_coefficient(d, k, &sol[k] * &s);
                b.set_coefficient(d, k, &sol[dim + k] * &s);
            }
            (a, b)
        };
        let meets = |a: &LiePoly, b: &LiePoly| {
            a.degree_valuation(d, p).at_least(bound) && b.degree_valuation(d, p).at_least(bound)
        };

        let first = match strategy {
            SolveStrategy::FixedOrder => solve_fixed_order(&columns, &rhs_coords),
            SolveStrategy::PLocal => solve_p_local(&columns, &rhs_coords, p),
        }
        .ok_or(Error::LinearSystemInconsistent(d))?;
        let (mut a, mut b) = assemble(&first);
        if !meets(&a, &b) && strategy == SolveStrategy::FixedOrder {
            fallback_degrees.push(d);
            let second = solve_p_local(&columns, &rhs_coords, p).ok_or(Error::LinearSystemInconsistent(d))?;
            (a, b) = assemble(&second);
        }
        if !meets(&a, &b) {
            let v = a.degree_valuation(d, p).min(b.degree_valuation(d, p));
            return Err(Error::OutputBoundViolation { degree: d, valuation: v.to_string(), bound: bound.to_string() });
        }
        phi = phi.add(&a);
        psi = psi.add(&b);
    }

    let pair = PhiPsiPair {
        phi: GradedSeries::new(phi),
        psi: GradedSeries::new(psi),
        regime,
        certified_to: n,
        fallback_degrees,
    };
    if !check_identity(h, &pair, n) {
        return Err(Error::LinearSystemInconsistent(n));
    }
    Ok(pair)
}

/// `e^{ad phi}(x) + e^{ad psi}(y) == H` through degree `n`, exactly.
pub fn check_identity(h: &GradedSeries, pair: &PhiPsiPair, n: usize) -> bool {
    let n = n.min(h.degree()).min(pair.phi.degree()).min(pair.psi.degree());
    let lhs = exp_ad_apply(pair.phi.as_poly(), Generator::X, n).add(&exp_ad_apply(pair.psi.as_poly(), Generator::Y, n));
    lhs == h.as_poly().truncate(n)
}

/// Gauss–Jordan elimination with columns taken in the given order and free
/// variables set to zero.
fn solve_fixed_order(columns: &[Vec<Scalar>], rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    let order: Vec<usize> = (0..columns.len()).collect();
    eliminate(columns, rhs, |m, row, _cols_left| {
        // first column (in order) with a nonzero entry at or below `row`
        order.iter().find_map(|&c| {
            if m.pivot_cols.contains(&c) {
                return None;
            }
            (row..m.rows).find(|&r| !m.a[r][c].is_zero()).map(|r| (r, c))
        })
    })
}

/// Elimination with full pivoting on the entry of least p-adic valuation;
/// ties go to the earliest row, then column.
fn solve_p_local(columns: &[Vec<Scalar>], rhs: &[Scalar], p: u64) -> Option<Vec<Scalar>> {
    eliminate(columns, rhs, |m, row, _| {
        let mut best: Option<(Valuation, usize, usize)> = None;
        for r in row..m.rows {
            for c in 0..m.cols {
                if m.pivot_cols.contains(&c) || m.a[r][c].is_zero() {
                    continue;
                }
                let v = m.a[r][c].valuation(p);
                if best.as_ref().map_or(true, |(bv, _, _)| v < *bv) {
                    best = Some((v, r, c));
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    })
}

struct Matrix {
    a: Vec<Vec<Scalar>>,
    b: Vec<Scalar>,
    rows: usize,
    cols: usize,
    pivot_cols: Vec<usize>,
}

fn eliminate(
    columns: &[Vec<Scalar>],
    rhs: &[Scalar],
    choose: impl Fn(&Matrix, usize, usize) -> Option<(usize, usize)>,
) -> Option<Vec<Scalar>> {
    let rows = rhs.len();
    let cols = columns.len();
    let a: Vec<Vec<Scalar>> = (0..rows).map(|r| (0..cols).map(|c| columns[c][r].clone()).collect()).collect();
    let mut m = Matrix { a, b: rhs.to_vec(), rows, cols, pivot_cols: Vec::new() };
    let mut row = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    while row < rows {
        let Some((pr, pc)) = choose(&m, row, cols - m.pivot_cols.len()) else { break };
        m.a.swap(row, pr);
        m.b.swap(row, pr);
        let inv = m.a[row][pc].inverse().expect("pivot is nonzero");
        for c in 0..cols {
            m.a[row][c] = &m.a[row][c] * &inv;
        }
        m.b[row] = &m.b[row] * &inv;
        for r in 0..rows {
            if r == row || m.a[r][pc].is_zero() {
                continue;
            }
            let f = m.a[r][pc].clone();
            for c in 0..cols {
                if !m.a[row][c].is_zero() {
                    let delta = &f * &m.a[row][c];
                    m.a[r][c] -= &delta;
                }
            }
            let delta = &f * &m.b[row];
            m.b[r] -= &delta;
        }
        m.pivot_cols.push(pc);
        pivots.push((row, pc));
        row += 1;
    }
    if m.b[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut sol = vec![Scalar::zero(); cols];
    for (r, c) in pivots {
        sol[c] = m.b[r].clone();
    }
    Some(sol)
}
