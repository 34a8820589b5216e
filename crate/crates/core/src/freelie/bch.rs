//! The Campbell–Hausdorff series `CH(x, y) = log(e^x e^y)`, computed by two
//! independent routes:
//!
//! * [`bch_associative`] expands `log(e^x e^y)` in the truncated free associative
//!   algebra and rewrites each homogeneous part into the Lyndon basis;
//! * [`bch_dynkin`] evaluates Dynkin's formula, applying right-normed Lie
//!   brackets to the combinatorial word coefficients.
//!
//! [`bch`] runs both, asserts they agree, and caches the result.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::basis::LieTables;
use super::{GradedSeries, LiePoly};
use crate::scalar::{rat, rat_int, Scalar};

/// Homogeneous components `0..=n` of a truncated associative polynomial;
/// `comps[d]` is indexed by word bits of length `d`.
#[derive(Clone, Debug)]
struct AssocPoly {
    comps: Vec<Vec<BigRational>>,
}

impl AssocPoly {
    fn zero(n: usize) -> Self {
        AssocPoly { comps: (0..=n).map(|d| vec![BigRational::zero(); 1 << d]).collect() }
    }

    fn degree(&self) -> usize {
        self.comps.len() - 1
    }

    fn mul(&self, other: &AssocPoly) -> AssocPoly {
        let n = self.degree();
        let mut out = AssocPoly::zero(n);
        for (da, a) in self.comps.iter().enumerate() {
            for (db, b) in other.comps.iter().enumerate().take(n - da + 1) {
                let target = &mut out.comps[da + db];
                for (i, ca) in a.iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    for (j, cb) in b.iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        target[(i << db) | j] += ca * cb;
                    }
                }
            }
        }
        out
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Associative-algebra route: `log(1 + Z)` with `Z = e^x e^y - 1`.
pub fn bch_associative(n: usize) -> GradedSeries {
    // e^x e^y = Σ x^a y^b / (a! b!)
    let mut z = AssocPoly::zero(n);
    for a in 0..=n {
        for b in 0..=(n - a) {
            if a + b == 0 {
                continue;
            }
            // word x^a y^b: a zeros followed by b ones
            let bits = (1usize << b) - 1;
            z.comps[a + b][bits] = BigRational::new(BigInt::one(), factorial(a) * factorial(b));
        }
    }
    let mut log = AssocPoly::zero(n);
    let mut power = z.clone();
    for k in 1..=n {
        let c = rat(if k % 2 == 1 { 1 } else { -1 }, k as i64);
        for (d, row) in power.comps.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    log.comps[d][i] += v * &c;
                }
            }
        }
        power = power.mul(&z);
    }
    let tables = LieTables::global();
    let mut out = LiePoly::zero(n);
    for d in 1..=n {
        let coords = rewrite_rational(tables, log.comps[d].clone(), d).expect("log(e^x e^y) is a Lie series");
        for (k, c) in coords.into_iter().enumerate() {
            out.set_coefficient(d, k, Scalar::from_rational(c));
        }
    }
    GradedSeries::new(out)
}

fn rewrite_rational(tables: &LieTables, mut v: Vec<BigRational>, d: usize) -> Option<Vec<BigRational>> {
    let mut coords = vec![BigRational::zero(); tables.dim(d)];
    while let Some(bits) = v.iter().position(|c| !c.is_zero()) {
        let k = tables.index_of(&super::Word { len: d, bits })?;
        let c = v[bits].clone();
        for (slot, e) in v.iter_mut().zip(&tables.basis(d)[k].expansion) {
            if *e != 0 {
                *slot -= &c * rat_int(*e);
            }
        }
        coords[k] += c;
    }
    Some(coords)
}

/// Dynkin route: `CH_n = (1/n) Σ_w c_w [w_1,[w_2,...,w_n]]`, where `c_w` sums
/// `(-1)^{k-1}/k · Π 1/(r_i! s_i!)` over factorizations
/// `w = x^{r_1} y^{s_1} ... x^{r_k} y^{s_k}` with `r_i + s_i ≥ 1`.
pub fn bch_dynkin(n: usize) -> GradedSeries {
    let tables = LieTables::global();
    let mut out = LiePoly::zero(n);
    // right-normed brackets of all words of the current length, integer coordinates
    let mut theta: Vec<Vec<i64>> = vec![vec![1, 0], vec![0, 1]];
    for d in 1..=n {
        if d > 1 {
            let block_x = tables.bracket_block(1, d - 1);
            let dim_prev = tables.dim(d - 1);
            let mut next = Vec::with_capacity(1 << d);
            for bits in 0..(1usize << d) {
                let first = bits >> (d - 1);
                let rest = &theta[bits & ((1 << (d - 1)) - 1)];
                let mut v = vec![0i64; tables.dim(d)];
                for (j, &c) in rest.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for &(k, s) in &block_x[first * dim_prev + j] {
                        v[k] += c * s;
                    }
                }
                next.push(v);
            }
            theta = next;
        }
        let mut acc = vec![BigRational::zero(); tables.dim(d)];
        for bits in 0..(1usize << d) {
            let c = dynkin_coefficient(bits, d);
            if c.is_zero() {
                continue;
            }
            for (k, &t) in theta[bits].iter().enumerate() {
                if t != 0 {
                    acc[k] += &c * rat_int(t);
                }
            }
        }
        let inv_d = rat(1, d as i64);
        for (k, c) in acc.into_iter().enumerate() {
            out.set_coefficient(d, k, Scalar::from_rational(c * &inv_d));
        }
    }
    GradedSeries::new(out)
}

/// Coefficient of the word in `log(e^x e^y)` by direct enumeration of its
/// factorizations into blocks `x^r y^s`.
fn dynkin_coefficient(bits: usize, d: usize) -> BigRational {
    let letters: Vec<u8> = (0..d).map(|i| ((bits >> (d - 1 - i)) & 1) as u8).collect();
    // ways[pos][k]: weighted count of factorizations of letters[..pos] into k blocks
    let mut ways = vec![vec![BigRational::zero(); d + 1]; d + 1];
    ways[0][0] = BigRational::one();
    for start in 0..d {
        for k in 0..d {
            if ways[start][k].is_zero() {
                continue;
            }
            let base = ways[start][k].clone();
            // block = x^r y^s starting at `start`
            let mut r = 0;
            while start + r < d && letters[start + r] == 0 {
                r += 1;
            }
            for rr in 0..=r {
                // take rr x's; if rr < r the block cannot continue with y's
                let after_x = start + rr;
                let max_s = if rr < r {
                    0
                } else {
                    let mut s = 0;
                    while after_x + s < d && letters[after_x + s] == 1 {
                        s += 1;
                    }
                    s
                };
                for s in 0..=max_s {
                    if rr + s == 0 {
                        continue;
                    }
                    let weight = BigRational::new(BigInt::one(), factorial(rr) * factorial(s));
                    let end = after_x + s;
                    let add = &base * &weight;
                    ways[end][k + 1] += add;
                }
            }
        }
    }
    let mut total = BigRational::zero();
    for k in 1..=d {
        if !ways[d][k].is_zero() {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += &ways[d][k] * rat(sign, k as i64);
        }
    }
    total
}

/// `CH_1, ..., CH_n`, computed by both routes and cross-checked.
pub fn bch(n: usize) -> GradedSeries {
    static CACHE: OnceLock<Mutex<HashMap<usize, GradedSeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&n) {
        return s.clone();
    }
    let a = bch_associative(n);
    let b = bch_dynkin(n);
    assert_eq!(a, b, "BCH routes disagree at truncation {n}");
    cache.lock().unwrap().insert(n, a.clone());
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::{valuation_of, Word};
    use crate::scalar::Valuation;

    fn w(s: &str) -> Word {
        Word::from_letters(&s.bytes().map(|b| (b == b'y') as u8).collect::<Vec<_>>())
    }

    #[test]
    fn low_degree_terms() {
        let ch = bch(4);
        let x = LiePoly::x(4);
        let y = LiePoly::y(4);
        assert_eq!(ch.component(1), x.add(&y));
        assert_eq!(ch.component(2), LiePoly::basis_element(&w("xy"), Scalar::from_ratio(1, 2), 4));
        // (1/12)[x,[x,y]] + (1/12)[y,[y,x]] ; [y,[y,x]] = [[x,y],y]
        let expected = LiePoly::basis_element(&w("xxy"), Scalar::from_ratio(1, 12), 4).add(&LiePoly::basis_element(
            &w("xyy"),
            Scalar::from_ratio(1, 12),
            4,
        ));
        assert_eq!(ch.component(3), expected);
        assert_eq!(valuation_of(&ch.component(4), 2), Valuation::finite(-3));
    }

    #[test]
    fn routes_agree_to_degree_eight() {
        assert_eq!(bch_associative(8), bch_dynkin(8));
    }

    #[test]
    fn dynkin_word_coefficients() {
        // CH_2 = (xy - yx)/2
        assert_eq!(dynkin_coefficient(0b01, 2), rat(1, 2));
        assert_eq!(dynkin_coefficient(0b10, 2), rat(-1, 2));
        assert_eq!(dynkin_coefficient(0b00, 2), BigRational::zero());
    }
}
