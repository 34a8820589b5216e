//! Evaluation of Lie polynomials on ring elements.
//!
//! Basis brackets are computed recursively along standard factorizations. A
//! coefficient `p^{-t} a/u` is applied by dividing the bracket value by `p^t`,
//! which in the uniform regime requires computing brackets at the working
//! precision `p^{k_m + s}` with the lifted constants.

use num_traits::Zero;

use super::{mulmod, pow, val_u64, FiniteLieRing, RingElement, RingRegime};
use crate::error::{Error, Result};
use crate::freelie::{LiePoly, LieTables};
use crate::scalar::{rational_mod, split_denominator};

#[derive(Debug, Clone)]
struct Term {
    degree: usize,
    index: usize,
    /// exponent of `p` in the denominator
    t: u32,
    /// `a/u` reduced modulo `p^K`
    unit: u64,
}

/// A Lie polynomial prepared for repeated evaluation on one ring.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    terms: Vec<Term>,
    /// Basis elements to compute, in dependency order: `(degree, index)`.
    order: Vec<(usize, usize)>,
    max_degree: usize,
    /// Per-coordinate working moduli `p^{k_m + s}`.
    work_mod: Vec<u64>,
    /// Structure constants reduced to the working moduli.
    work_constants: Vec<Vec<Vec<(usize, u64)>>>,
}

impl CompiledPoly {
    pub fn compile(ring: &FiniteLieRing, poly: &LiePoly) -> Result<CompiledPoly> {
        let p = ring.p();
        let tables = LieTables::global();
        let class = ring.class();
        let big = pow(p, ring.max_exponent());
        let mut terms = Vec::new();
        for (degree, index, c) in poly.terms() {
            if degree > class.max(1) {
                continue;
            }
            if !c.surd_part().is_zero() {
                return Err(Error::EvaluationNotIntegral(format!(
                    "coefficient {c} of degree {degree} is not rational"
                )));
            }
            let (t, a, u) = split_denominator(c.rat_part(), p);
            let reduced = num_rational::BigRational::new(a, u);
            let unit = rational_mod(&reduced, big).expect("unit denominator");
            if let RingRegime::Uniform { r, depth } = ring.regime() {
                // the bracket lies in p^{depth (n-1)} g; skip terms that vanish mod p^r
                let gain = depth as i64 * (degree as i64 - 1) - t as i64;
                if gain < 0 {
                    return Err(Error::EvaluationNotIntegral(format!(
                        "coefficient {c} of degree {degree} exceeds the bracket divisibility"
                    )));
                }
                if gain >= r as i64 {
                    continue;
                }
            } else if t > 0 {
                return Err(Error::EvaluationNotIntegral(format!(
                    "coefficient {c} of degree {degree} is not {p}-integral"
                )));
            }
            terms.push(Term { degree, index, t, unit });
        }
        let s = terms.iter().map(|t| t.t).max().unwrap_or(0);
        let max_degree = terms.iter().map(|t| t.degree).max().unwrap_or(0);

        let mut needed = vec![Vec::new(); max_degree + 1];
        for d in 0..=max_degree {
            needed[d] = vec![false; if d == 0 { 0 } else { tables.dim(d) }];
        }
        fn mark(tables: &LieTables, needed: &mut [Vec<bool>], d: usize, k: usize) {
            if needed[d][k] {
                return;
            }
            needed[d][k] = true;
            if let Some(((du, iu), (dv, iv))) = tables.basis(d)[k].factors {
                mark(tables, needed, du, iu);
                mark(tables, needed, dv, iv);
            }
        }
        for t in &terms {
            mark(tables, &mut needed, t.degree, t.index);
        }
        let mut order = Vec::new();
        for (d, row) in needed.iter().enumerate() {
            for (k, &n) in row.iter().enumerate() {
                if n {
                    order.push((d, k));
                }
            }
        }

        let work_mod: Vec<u64> = ring.moduli().iter().map(|&k| pow(p, k + s)).collect();
        let source = match ring.regime() {
            RingRegime::FiniteClass => &ring.constants,
            RingRegime::Uniform { .. } => &ring.lift,
        };
        let work_constants = source
            .iter()
            .map(|row| {
                row.iter()
                    .map(|list| list.iter().map(|&(m, c)| (m, c % work_mod[m])).filter(|&(_, c)| c != 0).collect())
                    .collect()
            })
            .collect();
        Ok(CompiledPoly { terms, order, max_degree, work_mod, work_constants })
    }

    fn bracket(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; x.len()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let xy = xi as u128 * yj as u128;
                for &(m, c) in &self.work_constants[i][j] {
                    let r = self.work_mod[m] as u128;
                    out[m] = ((out[m] as u128 + xy % r * c as u128) % r) as u64;
                }
            }
        }
        out
    }

    pub fn evaluate(&self, ring: &FiniteLieRing, x: &[u64], y: &[u64]) -> Result<RingElement> {
        let p = ring.p();
        let tables = LieTables::global();
        let mut values: Vec<Vec<Option<Vec<u64>>>> =
            (0..=self.max_degree).map(|d| vec![None; if d == 0 { 0 } else { tables.dim(d) }]).collect();
        for &(d, k) in &self.order {
            let v = match tables.basis(d)[k].factors {
                None => {
                    if k == 0 {
                        x.to_vec()
                    } else {
                        y.to_vec()
                    }
                }
                Some(((du, iu), (dv, iv))) => {
                    let a = values[du][iu].as_ref().expect("dependency order");
                    let b = values[dv][iv].as_ref().expect("dependency order");
                    self.bracket(a, b)
                }
            };
            values[d][k] = Some(v);
        }
        let mut out = ring.zero();
        for term in &self.terms {
            let v = values[term.degree][term.index].as_ref().expect("computed");
            let pt = pow(p, term.t);
            for (m, &c) in v.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                if term.t > 0 && val_u64(c, p, ring.moduli()[m] + term.t) < term.t {
                    return Err(Error::NonIntegralCoefficient(format!(
                        "degree {} term is not divisible by {p}^{} at coordinate {}",
                        term.degree,
                        term.t,
                        m + 1
                    )));
                }
                let r = ring.radix()[m];
                let q = (c / pt) % r;
                out[m] = (out[m] + mulmod(q, term.unit % r, r)) % r;
            }
        }
        Ok(out)
    }
}
