//! Finite nilpotent Lie rings on `⊕ Z/p^{k_i}` and the groups they define
//! through the Lazard correspondence.
//!
//! Elements are coordinate vectors; coordinate `i` is a residue in `[0, p^{k_i})`.
//! Elements are indexed lexicographically with the first coordinate most significant.

mod eval;
mod group;
mod subring;
mod twist;
mod uniform;

use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::freelie::{bch, exp_ad_apply, Generator, LiePoly, TABLE_DEGREE};

pub use eval::CompiledPoly;
pub use group::{ad_action, ch_multiply, AdMatrix, LazardGroup};
pub use subring::Subring;
pub use twist::{twist_map, TwistReport};
pub use uniform::uniform_quotient;

pub type RingElement = Vec<u64>;

/// Largest exponent `L` with `p^L < 2^62`; lifted constants live modulo `p^L`.
pub(crate) fn lift_precision(p: u64) -> u32 {
    let mut l = 0;
    let mut acc: u128 = 1;
    while acc * p as u128 <= (1u128 << 62) {
        acc *= p as u128;
        l += 1;
    }
    l
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

pub fn pow(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("modulus overflow")
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Exponent of `p` in `x`, capped at `cap` (used for `x = 0`).
pub(crate) fn val_u64(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(t.rem_euclid(m as i128) as u64)
}

/// How CH and other Lie series are evaluated on the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingRegime {
    /// Nilpotence class below `p`: every relevant coefficient is p-integral.
    FiniteClass,
    /// `g = L / p^r L` for a uniform lattice `L` with `[L, L] ⊆ p^depth L`.
    Uniform { r: u32, depth: u32 },
}

/// Sparse antisymmetric structure constants: `table[i][j]` lists `(m, c)`.
type SparseConstants = Vec<Vec<Vec<(usize, u64)>>>;

/// A nilpotent Lie ring on `⊕_i Z/p^{k_i}` given by structure constants.
#[derive(Debug)]
pub struct FiniteLieRing {
    p: u64,
    moduli: Vec<u32>,
    radix: Vec<u64>,
    big_k: u32,
    constants: SparseConstants,
    /// Constants modulo `p^lift_precision(p)`; used by the uniform regime.
    lift: SparseConstants,
    class: usize,
    uniform_depth: u32,
    regime: RingRegime,
    label: Option<String>,
    ch_plan: OnceLock<CompiledPoly>,
    exp_ad_plan: OnceLock<CompiledPoly>,
}

impl Clone for FiniteLieRing {
    fn clone(&self) -> Self {
        FiniteLieRing {
            p: self.p,
            moduli: self.moduli.clone(),
            radix: self.radix.clone(),
            big_k: self.big_k,
            constants: self.constants.clone(),
            lift: self.lift.clone(),
            class: self.class,
            uniform_depth: self.uniform_depth,
            regime: self.regime,
            label: self.label.clone(),
            ch_plan: OnceLock::new(),
            exp_ad_plan: OnceLock::new(),
        }
    }
}

/// One structure constant `[e_i, e_j] ∋ c · e_m` with 0-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub m: usize,
    pub c: i64,
}

/// Validates constants and builds the ring. Indices in `brackets` are 0-based;
/// entries with `i > j` are read through antisymmetry and repeated entries add up.
pub fn make_ring(p: u64, moduli: &[u32], brackets: &[Bracket]) -> Result<FiniteLieRing> {
    make_ring_labeled(p, moduli, brackets, None)
}

pub fn make_ring_labeled(p: u64, moduli: &[u32], brackets: &[Bracket], label: Option<String>) -> Result<FiniteLieRing> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let d = moduli.len();
    if moduli.iter().any(|&k| k == 0) {
        return Err(Error::InvalidInput("moduli exponents must be positive".into()));
    }
    let lp = lift_precision(p);
    let big_k = moduli.iter().copied().max().unwrap_or(0);
    if big_k > lp / 2 {
        return Err(Error::InvalidInput(format!("modulus {p}^{big_k} is too large")));
    }
    let lift_mod = pow(p, lp) as i128;
    let mut dense = vec![vec![vec![0i128; d]; d]; d];
    for b in brackets {
        if b.i >= d || b.j >= d || b.m >= d {
            return Err(Error::InvalidInput(format!(
                "bracket index out of range in ({},{}) -> {}",
                b.i + 1,
                b.j + 1,
                b.m + 1
            )));
        }
        if b.i == b.j {
            return Err(Error::InvalidInput(format!("[e{0}, e{0}] is zero by definition", b.i + 1)));
        }
        let (i, j, c) = if b.i < b.j { (b.i, b.j, b.c as i128) } else { (b.j, b.i, -(b.c as i128)) };
        dense[i][j][b.m] = (dense[i][j][b.m] + c).rem_euclid(lift_mod);
    }
    for i in 0..d {
        for j in 0..i {
            for m in 0..d {
                dense[i][j][m] = (-dense[j][i][m]).rem_euclid(lift_mod);
            }
        }
    }

    let radix: Vec<u64> = moduli.iter().map(|&k| pow(p, k)).collect();
    let mut constants: SparseConstants = vec![vec![Vec::new(); d]; d];
    let mut lift: SparseConstants = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            for m in 0..d {
                let raw = dense[i][j][m] as u64;
                if raw != 0 {
                    lift[i][j].push((m, raw));
                }
                let c = raw % radix[m];
                if c == 0 {
                    continue;
                }
                // p^{min(k_i, k_j)} c must vanish mod p^{k_m}
                let k_min = moduli[i].min(moduli[j]);
                if val_u64(c, p, moduli[m]) + k_min < moduli[m] {
                    return Err(Error::WellDefinednessViolation { i: i + 1, j: j + 1, m: m + 1 });
                }
                constants[i][j].push((m, c));
            }
        }
    }

    let mut ring = FiniteLieRing {
        p,
        moduli: moduli.to_vec(),
        radix,
        big_k,
        constants,
        lift,
        class: 0,
        uniform_depth: 0,
        regime: RingRegime::FiniteClass,
        label,
        ch_plan: OnceLock::new(),
        exp_ad_plan: OnceLock::new(),
    };
    if let Some((i, j, l)) = ring.jacobi_witness() {
        return Err(Error::JacobiViolation(i + 1, j + 1, l + 1));
    }
    ring.class = ring.lower_central_series()?.len();
    ring.uniform_depth = ring.compute_uniform_depth();
    ring.regime = ring.select_regime()?;
    Ok(ring)
}

impl FiniteLieRing {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    /// `p^{k_i}` for each coordinate.
    pub fn radix(&self) -> &[u64] {
        &self.radix
    }

    /// `K = max k_i`.
    pub fn max_exponent(&self) -> u32 {
        self.big_k
    }

    pub fn class(&self) -> usize {
        self.class
    }

    /// Largest `e ≤ K` with `[g, g] ⊆ p^e g`.
    pub fn uniform_depth(&self) -> u32 {
        self.uniform_depth
    }

    pub fn regime(&self) -> RingRegime {
        self.regime
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn order(&self) -> usize {
        self.radix.iter().map(|&r| r as usize).product()
    }

    /// Structure constants `(m, c)` of `[e_i, e_j]`, reduced mod `p^{k_m}`.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, u64)] {
        &self.constants[i][j]
    }

    pub fn zero(&self) -> RingElement {
        vec![0; self.rank()]
    }

    pub fn basis_vector(&self, i: usize) -> RingElement {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    pub fn index_of(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.radix).fold(0usize, |acc, (&c, &r)| acc * r as usize + c as usize)
    }

    pub fn element(&self, mut index: usize) -> RingElement {
        let mut out = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let r = self.radix[i] as usize;
            out[i] = (index % r) as u64;
            index /= r;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// Reduces arbitrary integer coordinates into canonical residues.
    pub fn reduce(&self, coords: &[i64]) -> RingElement {
        coords.iter().zip(&self.radix).map(|(&c, &r)| c.rem_euclid(r as i64) as u64).collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> RingElement {
        x.iter().zip(y).zip(&self.radix).map(|((a, b), r)| (a + b) % r).collect()
    }

    pub fn neg(&self, x: &[u64]) -> RingElement {
        x.iter().zip(&self.radix).map(|(a, r)| (r - a) % r).collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> RingElement {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, c: u64, x: &[u64]) -> RingElement {
        x.iter().zip(&self.radix).map(|(a, &r)| mulmod(c % r, *a, r)).collect()
    }

    pub fn bracket(&self, x: &[u64], y: &[u64]) -> RingElement {
        let mut out = vec![0u64; self.rank()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let xy = xi as u128 * yj as u128;
                for &(m, c) in &self.constants[i][j] {
                    let r = self.radix[m] as u128;
                    out[m] = ((out[m] as u128 + xy % r * c as u128) % r) as u64;
                }
            }
        }
        out
    }

    /// Whether `x ∈ p^e g`.
    pub fn divisible_by(&self, x: &[u64], e: u32) -> bool {
        x.iter().zip(&self.moduli).all(|(&c, &k)| c % pow(self.p, e.min(k)) == 0)
    }

    fn jacobi_witness(&self) -> Option<(usize, usize, usize)> {
        let d = self.rank();
        let e: Vec<RingElement> = (0..d).map(|i| self.basis_vector(i)).collect();
        for i in 0..d {
            for j in (i + 1)..d {
                for l in (j + 1)..d {
                    let a = self.bracket(&e[i], &self.bracket(&e[j], &e[l]));
                    let b = self.bracket(&e[j], &self.bracket(&e[l], &e[i]));
                    let c = self.bracket(&e[l], &self.bracket(&e[i], &e[j]));
                    if self.add(&self.add(&a, &b), &c).iter().any(|&v| v != 0) {
                        return Some((i, j, l));
                    }
                }
            }
        }
        None
    }

    /// Jacobi identity for the lifted constants modulo `p^modulus_exp`.
    fn lift_jacobi_holds(&self, modulus_exp: u32) -> bool {
        let d = self.rank();
        let m = pow(self.p, modulus_exp);
        let br = |x: &[u64], y: &[u64]| -> Vec<u64> {
            let mut out = vec![0u64; d];
            for i in 0..d {
                for j in 0..d {
                    let xy = mulmod(x[i], y[j], m);
                    if xy == 0 {
                        continue;
                    }
                    for &(k, c) in &self.lift[i][j] {
                        out[k] = (out[k] + mulmod(xy, c % m, m)) % m;
                    }
                }
            }
            out
        };
        let e: Vec<Vec<u64>> = (0..d).map(|i| self.basis_vector(i)).collect();
        for i in 0..d {
            for j in (i + 1)..d {
                for l in (j + 1)..d {
                    let a = br(&e[i], &br(&e[j], &e[l]));
                    let b = br(&e[j], &br(&e[l], &e[i]));
                    let c = br(&e[l], &br(&e[i], &e[j]));
                    if (0..d).any(|k| (a[k] + b[k] + c[k]) % m != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Generators of `γ_2, γ_3, ...` down to the last nonzero term.
    fn lower_central_series(&self) -> Result<Vec<Vec<RingElement>>> {
        let d = self.rank();
        let mut out = Vec::new();
        let mut current: Vec<RingElement> = (0..d).map(|i| self.basis_vector(i)).collect();
        current = self.echelon(current);
        let mut prev_order = self.span_order(&current);
        while !current.is_empty() {
            out.push(current.clone());
            let mut next = Vec::new();
            for i in 0..d {
                let e = self.basis_vector(i);
                for y in &current {
                    next.push(self.bracket(&e, y));
                }
            }
            let next = self.echelon(next);
            let order = self.span_order(&next);
            if !next.is_empty() && order == prev_order {
                return Err(Error::NotNilpotent);
            }
            prev_order = order;
            current = next;
        }
        Ok(out)
    }

    /// Echelon generating set of the subgroup spanned by `rows`, computed in
    /// the embedding `x_i -> x_i p^{K - k_i}` into `(Z/p^K)^d`.
    pub(crate) fn echelon(&self, rows: Vec<RingElement>) -> Vec<RingElement> {
        let big = pow(self.p, self.big_k);
        let shift: Vec<u64> = self.moduli.iter().map(|&k| pow(self.p, self.big_k - k)).collect();
        let mut work: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| r.iter().zip(&shift).map(|(&c, &s)| mulmod(c, s, big)).collect())
            .filter(|r: &Vec<u64>| r.iter().any(|&c| c != 0))
            .collect();
        let mut result: Vec<Vec<u64>> = Vec::new();
        for col in 0..self.rank() {
            let Some((pi, v)) = work
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .map(|(i, r)| (i, val_u64(r[col], self.p, self.big_k)))
                .min_by_key(|&(i, v)| (v, i))
            else {
                continue;
            };
            let mut pivot = work.swap_remove(pi);
            let pv = pow(self.p, v);
            let unit_inv = inv_mod(pivot[col] / pv, big).expect("unit");
            pivot.iter_mut().for_each(|c| *c = mulmod(*c, unit_inv, big));
            for r in work.iter_mut() {
                if r[col] == 0 {
                    continue;
                }
                let f = r[col] / pv;
                for (c, &pc) in r.iter_mut().zip(&pivot) {
                    *c = (*c + big - mulmod(f, pc, big)) % big;
                }
            }
            let extra: Vec<u64> = pivot.iter().map(|&c| mulmod(c, big / pv, big)).collect();
            if extra.iter().any(|&c| c != 0) {
                work.push(extra);
            }
            work.retain(|r| r.iter().any(|&c| c != 0));
            result.push(pivot);
        }
        result.into_iter().map(|r| r.iter().zip(&shift).map(|(&c, &s)| c / s).collect()).collect()
    }

    /// Order of the subgroup spanned by an echelon set.
    fn span_order(&self, rows: &[RingElement]) -> u64 {
        rows.iter()
            .map(|r| {
                let v = r
                    .iter()
                    .zip(&self.moduli)
                    .map(|(&c, &k)| val_u64(c, self.p, k) + (self.big_k - k))
                    .min()
                    .unwrap_or(self.big_k);
                pow(self.p, self.big_k - v)
            })
            .product()
    }

    fn compute_uniform_depth(&self) -> u32 {
        let d = self.rank();
        let mut depth = self.big_k;
        for i in 0..d {
            for j in (i + 1)..d {
                let b = self.bracket(&self.basis_vector(i), &self.basis_vector(j));
                while depth > 0 && !self.divisible_by(&b, depth) {
                    depth -= 1;
                }
            }
        }
        depth
    }

    fn select_regime(&self) -> Result<RingRegime> {
        let p = self.p;
        if (self.class as u64) < p {
            return Ok(RingRegime::FiniteClass);
        }
        let needed = if p == 2 { 2 } else { 1 };
        let homocyclic = self.moduli.windows(2).all(|w| w[0] == w[1]);
        if !homocyclic {
            return Err(Error::RegimeViolation(format!(
                "class {} is not below p = {p} and the moduli are not homocyclic",
                self.class
            )));
        }
        if self.uniform_depth < needed {
            return Err(Error::RegimeViolation(format!(
                "class {} is not below p = {p} and [g,g] ⊆ p^{} g only (need exponent {needed})",
                self.class, self.uniform_depth
            )));
        }
        let r = self.big_k;
        let regime = RingRegime::Uniform { r, depth: self.uniform_depth };
        let (n, s) = uniform_truncation(p, r, self.uniform_depth, self.class);
        if n > TABLE_DEGREE {
            return Err(Error::DegreeCap { requested: n, cap: TABLE_DEGREE });
        }
        // the lifted lattice must itself satisfy Jacobi at working precision
        let lp = lift_precision(p);
        if !self.lift_jacobi_holds((r + s + 2).min(lp)) {
            return Err(Error::RegimeViolation(
                "lifted constants fail the Jacobi identity beyond the ring precision".into(),
            ));
        }
        Ok(regime)
    }

    /// Degree through which Lie series must be evaluated.
    pub fn series_degree(&self) -> usize {
        match self.regime {
            RingRegime::FiniteClass => self.class.max(1),
            RingRegime::Uniform { r, depth } => uniform_truncation(self.p, r, depth, self.class).0,
        }
    }

    /// `CH` truncated for this ring, compiled for evaluation.
    pub fn ch_plan(&self) -> &CompiledPoly {
        self.ch_plan.get_or_init(|| {
            let n = self.series_degree();
            CompiledPoly::compile(self, bch(n).as_poly()).expect("CH is evaluable in an admissible ring")
        })
    }

    /// `e^{ad x}(y)` compiled for evaluation.
    pub fn exp_ad_plan(&self) -> &CompiledPoly {
        self.exp_ad_plan.get_or_init(|| {
            let n = self.series_degree();
            let poly = exp_ad_apply(&LiePoly::x(n), Generator::Y, n);
            CompiledPoly::compile(self, &poly).expect("e^{ad x} is evaluable in an admissible ring")
        })
    }

    /// Evaluates a Lie polynomial at `(x, y)`.
    pub fn evaluate(&self, poly: &LiePoly, x: &[u64], y: &[u64]) -> Result<RingElement> {
        CompiledPoly::compile(self, poly)?.evaluate(self, x, y)
    }

    /// Labels of the orbits of `Ad(G)` on `g` (the conjugacy classes of `G`,
    /// read through the coordinate map), numbered in order of first element.
    pub fn adjoint_orbits(&self) -> Result<Vec<usize>> {
        let gens: Vec<AdMatrix> =
            (0..self.rank()).map(|i| group::ad_action(self, &self.basis_vector(i))).collect::<Result<_>>()?;
        let n = self.order();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let x = self.element(u);
                for a in &gens {
                    let v = self.index_of(&a.apply(self, &x));
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        Ok(label)
    }

    /// Fingerprint distinguishing rings in domain checks.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.p.hash(&mut h);
        self.moduli.hash(&mut h);
        self.constants.hash(&mut h);
        h.finish()
    }
}

/// `(N, s)`: series degree and working-precision exponent for a uniform ring.
/// Terms of degree `n > N` lie in `p^r g` because
/// `(n - 1) depth - floor((n - 1)/(p - 1)) ≥ r`.
fn uniform_truncation(p: u64, r: u32, depth: u32, class: usize) -> (usize, u32) {
    let gain = |n: usize| -> i64 {
        let k = (n - 1) as i64;
        k * depth as i64 - k / (p as i64 - 1)
    };
    let mut n = 1;
    while gain(n + 1) < r as i64 {
        n += 1;
    }
    let n = n.min(class.max(1));
    let s = ((n as u64 - 1) / (p - 1)) as u32;
    (n, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn heisenberg(p: u64, k: u32) -> FiniteLieRing {
        make_ring(p, &[k, k, k], &[Bracket { i: 0, j: 1, m: 2, c: 1 }]).unwrap()
    }

    #[test]
    fn heisenberg_class_and_depth() {
        let g = heisenberg(3, 1);
        assert_eq!(g.class(), 2);
        assert_eq!(g.uniform_depth(), 0);
        assert_eq!(g.regime(), RingRegime::FiniteClass);
        assert_eq!(g.order(), 27);
    }

    #[test]
    fn abelian_ring_has_class_one() {
        let g = make_ring(5, &[1, 2], &[]).unwrap();
        assert_eq!(g.class(), 1);
        let trivial = make_ring(3, &[], &[]).unwrap();
        assert_eq!(trivial.class(), 0);
        assert_eq!(trivial.order(), 1);
    }

    #[test]
    fn jacobi_violation_detected() {
        // [e1,e2] = e3, [e2,e3] = e1 and nothing else: J(e1,e2,e3) = [e2,[e3,e1]] + [e1,[e2,e3]] + ... ≠ 0
        let err = make_ring(3, &[1, 1, 1], &[Bracket { i: 0, j: 1, m: 2, c: 1 }, Bracket { i: 1, j: 2, m: 1, c: 1 }])
            .unwrap_err();
        assert_eq!(err, Error::JacobiViolation(1, 2, 3));
    }

    #[test]
    fn well_definedness_violation_detected() {
        // e1 has order 3 but [e1, e2] = e3 with e3 of order 9
        let err = make_ring(3, &[1, 2, 2], &[Bracket { i: 0, j: 1, m: 2, c: 1 }]).unwrap_err();
        assert_eq!(err, Error::WellDefinednessViolation { i: 1, j: 2, m: 3 });
        assert!(make_ring(3, &[1, 2, 2], &[Bracket { i: 0, j: 1, m: 2, c: 3 }]).is_ok());
    }

    #[test]
    fn regime_violation_for_class_p() {
        // unitriangular 4x4 over F_3 has class 3
        let err = make_ring(3, &[1; 6], &ut4_brackets()).unwrap_err();
        assert!(matches!(err, Error::RegimeViolation(_)));
        let ok = make_ring(5, &[1; 6], &ut4_brackets()).unwrap();
        assert_eq!(ok.class(), 3);
    }

    fn ut4_brackets() -> Vec<Bracket> {
        // e12, e23, e34, e13, e24, e14
        let b = |i, j, m| Bracket { i, j, m, c: 1 };
        vec![b(0, 1, 3), b(1, 2, 4), b(0, 4, 5), b(3, 2, 5)]
    }

    #[test]
    fn indexing_round_trip() {
        let g = make_ring(3, &[1, 2], &[]).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.index_of(&g.element(i)), i);
        }
        assert_eq!(g.element(1), vec![0, 1]);
        assert_eq!(g.element(9), vec![1, 0]);
    }

    #[test]
    fn echelon_counts_subgroups() {
        let g = make_ring(3, &[2, 1], &[]).unwrap();
        let rows = g.echelon(vec![vec![3, 0], vec![6, 0]]);
        assert_eq!(g.span_order(&rows), 3);
        let rows = g.echelon(vec![vec![1, 1]]);
        assert_eq!(g.span_order(&rows), 9);
        let rows = g.echelon(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(g.span_order(&rows), 27);
    }

    #[test]
    fn uniform_p2_ring() {
        let g = make_ring(2, &[3, 3, 3], &[Bracket { i: 0, j: 1, m: 2, c: 4 }]).unwrap();
        assert_eq!(g.regime(), RingRegime::Uniform { r: 3, depth: 2 });
        let bad = make_ring(2, &[3, 3, 3], &[Bracket { i: 0, j: 1, m: 2, c: 2 }]).unwrap_err();
        assert!(matches!(bad, Error::RegimeViolation(_)));
    }
}
