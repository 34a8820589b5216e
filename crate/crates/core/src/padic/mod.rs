//! Nilpotent Lie algebras over `Q_p` with exact rational structure constants,
//! `Z_(p)`-lattices inside them, and the increasing chain of uniform lattices
//! built from right-normed brackets.

mod restriction;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::liering::{is_prime, uniform_quotient, FiniteLieRing};
use crate::scalar::{rat_int, rat_valuation, split_denominator, Valuation};

pub use restriction::{restriction_harness, RestrictionReport};

pub type QpVector = Vec<BigRational>;

fn pow_rat(p: u64, e: i64) -> BigRational {
    let base = rat_int(p as i64);
    let mut out = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    if e < 0 {
        out.recip()
    } else {
        out
    }
}

fn valuation(q: &BigRational, p: u64) -> Option<i64> {
    match rat_valuation(q, p) {
        Valuation::Infinite => None,
        Valuation::Finite(v) => Some(v.to_integer()),
    }
}

fn axpy(y: &mut [BigRational], a: &BigRational, x: &[BigRational]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += a * xi;
        }
    }
}

fn scaled(a: &BigRational, x: &[BigRational]) -> QpVector {
    x.iter().map(|xi| a * xi).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpLieAlgebra {
    p: u64,
    dim: usize,
    /// `table[i][j]` is `[x_i, x_j]` in coordinates.
    table: Vec<Vec<QpVector>>,
    class: usize,
}

impl QpLieAlgebra {
    /// Structure constants `(i, j, k, c)` meaning `[x_i, x_j]` has `x_k`
    /// coefficient `c`; 0-based, the `(j, i)` entry is implied.
    pub fn new(p: u64, dim: usize, constants: &[(usize, usize, usize, BigRational)]) -> Result<QpLieAlgebra> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let zero = vec![BigRational::zero(); dim];
        let mut table = vec![vec![zero.clone(); dim]; dim];
        let mut set = vec![vec![vec![false; dim]; dim]; dim];
        for (i, j, k, c) in constants {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidInput(format!("index out of range for dimension {dim}")));
            }
            if i == j {
                if !c.is_zero() {
                    return Err(Error::InvalidInput(format!("[x{0}, x{0}] must vanish", i + 1)));
                }
                continue;
            }
            if set[i][j][k] || set[j][i][k] {
                return Err(Error::InvalidInput(format!(
                    "constant for [x{}, x{}] at x{} given twice",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            set[i][j][k] = true;
            table[i][j][k] = c.clone();
            table[j][i][k] = -c.clone();
        }
        let mut alg = QpLieAlgebra { p, dim, table, class: 0 };
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let s1 = alg.bracket(&alg.basis_vector(i), &alg.table[j][k]);
                    let s2 = alg.bracket(&alg.basis_vector(j), &alg.table[k][i]);
                    let s3 = alg.bracket(&alg.basis_vector(k), &alg.table[i][j]);
                    if s1.iter().zip(&s2).zip(&s3).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return Err(Error::JacobiViolation(i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        alg.class = alg.compute_class()?;
        Ok(alg)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn basis_vector(&self, i: usize) -> QpVector {
        let mut v = vec![BigRational::zero(); self.dim];
        v[i] = BigRational::one();
        v
    }

    pub fn bracket(&self, x: &[BigRational], y: &[BigRational]) -> QpVector {
        let mut out = vec![BigRational::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                axpy(&mut out, &(xi * yj), &self.table[i][j]);
            }
        }
        out
    }

    fn compute_class(&self) -> Result<usize> {
        let basis: Vec<QpVector> = (0..self.dim).map(|i| self.basis_vector(i)).collect();
        let mut current = basis.clone();
        let mut class = 0;
        let mut prev_rank = self.dim;
        while !current.is_empty() {
            class += 1;
            let mut next = Vec::new();
            for x in &basis {
                for y in &current {
                    let b = self.bracket(x, y);
                    if b.iter().any(|c| !c.is_zero()) {
                        next.push(b);
                    }
                }
            }
            current = rational_row_basis(next);
            if !current.is_empty() && current.len() == prev_rank {
                return Err(Error::NotNilpotent);
            }
            prev_rank = current.len();
        }
        Ok(class)
    }
}

/// Row basis over `Q` by Gaussian elimination.
fn rational_row_basis(mut rows: Vec<QpVector>) -> Vec<QpVector> {
    let mut out: Vec<QpVector> = Vec::new();
    let dim = rows.first().map_or(0, Vec::len);
    for c in 0..dim {
        let Some(k) = rows.iter().position(|r| !r[c].is_zero()) else { continue };
        let piv = rows.swap_remove(k);
        for r in rows.iter_mut() {
            if !r[c].is_zero() {
                let f = -(&r[c] / &piv[c]);
                axpy(r, &f, &piv);
            }
        }
        out.push(piv);
    }
    out
}

/// `p`-local Hermite echelon of the `Z_(p)`-span of `rows`: returns rows in
/// increasing pivot column with pivot entries powers of `p`, entries above a
/// pivot reduced to canonical residues.
fn plocal_echelon(p: u64, dim: usize, mut rows: Vec<QpVector>) -> Vec<(usize, QpVector)> {
    rows.retain(|r| r.iter().any(|c| !c.is_zero()));
    let mut out: Vec<(usize, QpVector)> = Vec::new();
    for c in 0..dim {
        let best = rows.iter().enumerate().filter_map(|(k, r)| valuation(&r[c], p).map(|v| (v, k))).min();
        let Some((v, k)) = best else { continue };
        let mut piv = rows.swap_remove(k);
        let unit = &piv[c] / pow_rat(p, v);
        piv = scaled(&unit.recip(), &piv);
        for r in rows.iter_mut() {
            if !r[c].is_zero() {
                let f = -(&r[c] / &piv[c]);
                axpy(r, &f, &piv);
            }
        }
        rows.retain(|r| r.iter().any(|c| !c.is_zero()));
        // canonical residues above the new pivot
        for (_, upper) in out.iter_mut() {
            let e = upper[c].clone();
            let Some(w) = valuation(&e, p) else { continue };
            let target = if w >= v { BigRational::zero() } else { canonical_residue(&e, p, w, v) };
            let f = (target - e) / &piv[c];
            axpy(upper, &f, &piv);
        }
        out.push((c, piv));
    }
    out
}

/// For `e` of valuation `w < v`, the representative `p^w n` with
/// `0 <= n < p^{v-w}` of `e` modulo `p^v Z_(p)`.
fn canonical_residue(e: &BigRational, p: u64, w: i64, v: i64) -> BigRational {
    let unit = e / pow_rat(p, w);
    let m = pow_rat(p, v - w).to_integer();
    let (_, num, den) = split_denominator(&unit, p);
    let inv = num_integer::Integer::extended_gcd(&den, &m).x;
    let mut n = (num * inv) % &m;
    if n.is_negative() {
        n += &m;
    }
    BigRational::from_integer(n) * pow_rat(p, w)
}

/// A full-rank `Z_(p)`-lattice in `Q^N`, kept in canonical echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLattice {
    p: u64,
    rows: Vec<QpVector>,
}

impl PLattice {
    pub fn span(p: u64, dim: usize, generators: Vec<QpVector>) -> Result<PLattice> {
        let ech = plocal_echelon(p, dim, generators);
        if ech.len() != dim {
            return Err(Error::InvalidInput(format!("generators span rank {} < {dim}", ech.len())));
        }
        Ok(PLattice { p, rows: ech.into_iter().map(|(_, r)| r).collect() })
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[QpVector] {
        &self.rows
    }

    /// Coordinates of `x` in the lattice basis, if all are `p`-integral.
    pub fn coordinates(&self, x: &[BigRational]) -> Option<Vec<BigRational>> {
        let mut rest = x.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (c, row) in self.rows.iter().enumerate() {
            let f = &rest[c] / &row[c];
            if valuation(&f, self.p).is_some_and(|v| v < 0) {
                return None;
            }
            axpy(&mut rest, &-f.clone(), row);
            coords.push(f);
        }
        Some(coords)
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn is_sublattice_of(&self, other: &PLattice) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// `log_p [Z_(p)^N : L]`, negative when `L` is larger than the standard lattice.
    pub fn covolume_exponent(&self) -> i64 {
        self.rows.iter().enumerate().map(|(c, r)| valuation(&r[c], self.p).unwrap()).sum()
    }
}

pub fn uniform_scale(p: u64) -> u64 {
    if p == 2 {
        4
    } else {
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainLevel {
    pub j: usize,
    pub lattice: PLattice,
    /// Properties `a..e` in order, all true when returned.
    pub properties: [bool; 5],
}

/// `k_j = s·k'_j` for `j = 1..=j_max`, where `k'_j` is spanned by right-normed
/// brackets of `p^{-j} x_k` and `s = p` (`4` when `p = 2`). Each level is
/// checked for (a) closure, (b) `[k_j, k_j] ⊆ s·k_j`, (c) `k_j ⊆ k_{j+1}`,
/// (d) full rank and (e) `s p^{-j} x_m ∈ k_j`.
pub fn uniform_chain(alg: &QpLieAlgebra, basis: Option<&[QpVector]>, j_max: usize) -> Result<Vec<ChainLevel>> {
    let p = alg.p();
    let dim = alg.dimension();
    let xs: Vec<QpVector> = match basis {
        Some(b) => {
            if b.len() != dim || b.iter().any(|v| v.len() != dim) || rational_row_basis(b.to_vec()).len() != dim {
                return Err(Error::InvalidInput("basis_choice must be a basis of the algebra".into()));
            }
            b.to_vec()
        }
        None => (0..dim).map(|i| alg.basis_vector(i)).collect(),
    };
    let s = rat_int(uniform_scale(p) as i64);
    let mut levels: Vec<ChainLevel> = Vec::with_capacity(j_max);
    for j in 1..=j_max {
        let ys: Vec<QpVector> = xs.iter().map(|x| scaled(&pow_rat(p, -(j as i64)), x)).collect();
        let mut spanning = ys.clone();
        let mut layer = ys.clone();
        for _ in 1..alg.class().max(1) {
            let mut next = Vec::new();
            for y in &ys {
                for w in &layer {
                    next.push(alg.bracket(y, w));
                }
            }
            layer = plocal_echelon(p, dim, next).into_iter().map(|(_, r)| r).collect();
            if layer.is_empty() {
                break;
            }
            spanning.extend(layer.iter().cloned());
        }
        let k_prime = PLattice::span(p, dim, spanning).map_err(|e| Error::ChainAssertion {
            property: 'd',
            level: j,
            witness: e.to_string(),
        })?;
        let lattice = PLattice::span(p, dim, k_prime.basis().iter().map(|r| scaled(&s, r)).collect())?;
        let fail = |property: char, witness: String| Error::ChainAssertion { property, level: j, witness };
        let rows = lattice.basis();
        for (a, u) in rows.iter().enumerate() {
            for v in &rows[a + 1..] {
                let b = alg.bracket(u, v);
                if !lattice.contains(&b) {
                    return Err(fail('a', format!("bracket {} not in k_{j}", show(&b))));
                }
                if !lattice.contains(&scaled(&s.recip(), &b)) {
                    return Err(fail('b', format!("bracket {} not in {}·k_{j}", show(&b), s)));
                }
            }
        }
        for y in &ys {
            let t = scaled(&s, y);
            if !lattice.contains(&t) {
                return Err(fail('e', format!("{} not in k_{j}", show(&t))));
            }
        }
        if let Some(prev) = levels.last() {
            if !prev.lattice.is_sublattice_of(&lattice) {
                return Err(Error::ChainAssertion {
                    property: 'c',
                    level: j - 1,
                    witness: format!("k_{} not inside k_{j}", j - 1),
                });
            }
        }
        levels.push(ChainLevel { j, lattice, properties: [true; 5] });
    }
    Ok(levels)
}

pub fn show(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// `k / p^r k` as a finite ring, using the structure constants of the bracket
/// in the lattice basis of `k`.
pub fn quotient_to_finite(k: &PLattice, alg: &QpLieAlgebra, r: u32) -> Result<FiniteLieRing> {
    let rows = k.basis();
    let mut constants = Vec::new();
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            let br = alg.bracket(&rows[a], &rows[b]);
            let coords = k.coordinates(&br).ok_or_else(|| {
                Error::RegimeViolation(format!("lattice is not closed under the bracket: {}", show(&br)))
            })?;
            for (m, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    constants.push((a, b, m, c));
                }
            }
        }
    }
    uniform_quotient(alg.p(), rows.len(), &constants, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn heisenberg(p: u64) -> QpLieAlgebra {
        QpLieAlgebra::new(p, 3, &[(0, 1, 2, rat_int(1))]).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(heisenberg(3).class(), 2);
        assert_eq!(QpLieAlgebra::new(3, 2, &[]).unwrap().class(), 1);
        let nn = QpLieAlgebra::new(3, 2, &[(0, 1, 1, rat_int(1))]).unwrap_err();
        assert_eq!(nn, Error::NotNilpotent);
        // [x1,x2]=x3, [x2,x3]=x1, [x3,x1]=x2 is so(3): Jacobi holds, not nilpotent
        let so3 = QpLieAlgebra::new(5, 3, &[(0, 1, 2, rat_int(1)), (1, 2, 0, rat_int(1)), (2, 0, 1, rat_int(1))]);
        assert_eq!(so3.unwrap_err(), Error::NotNilpotent);
        let bad = QpLieAlgebra::new(5, 4, &[(0, 1, 2, rat_int(1)), (2, 3, 0, rat_int(1))]);
        assert!(matches!(bad, Err(Error::JacobiViolation(..))));
    }

    #[test]
    fn echelon_is_canonical() {
        let a = PLattice::span(3, 2, vec![vec![rat_int(1), rat_int(5)], vec![rat_int(0), rat_int(9)]]).unwrap();
        let b = PLattice::span(3, 2, vec![vec![rat_int(1), rat_int(-4)], vec![rat_int(2), rat_int(10)]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.covolume_exponent(), 2);
        assert!(a.contains(&[rat_int(1), rat(19, 2)]));
        assert!(!a.contains(&[rat_int(0), rat_int(3)]));
    }

    #[test]
    fn abelian_chain() {
        let alg = QpLieAlgebra::new(3, 3, &[]).unwrap();
        let chain = uniform_chain(&alg, None, 3).unwrap();
        for level in &chain {
            let expected = PLattice::span(
                3,
                3,
                (0..3).map(|i| scaled(&pow_rat(3, 1 - level.j as i64), &alg.basis_vector(i))).collect(),
            )
            .unwrap();
            assert_eq!(level.lattice, expected);
        }
        assert_eq!(chain[0].lattice.covolume_exponent() - chain[1].lattice.covolume_exponent(), 3);
    }

    #[test]
    fn heisenberg_chain_and_quotient() {
        for p in [2, 3] {
            let alg = heisenberg(p);
            let chain = uniform_chain(&alg, None, 4).unwrap();
            assert_eq!(chain.len(), 4);
            let ring = quotient_to_finite(&chain[0].lattice, &alg, if p == 2 { 3 } else { 2 }).unwrap();
            assert_eq!(ring.order() as u64, if p == 2 { 512 } else { 729 });
            assert!(ring.uniform_depth() >= if p == 2 { 2 } else { 1 });
        }
    }

    #[test]
    fn custom_basis() {
        let alg = heisenberg(3);
        let basis = vec![
            vec![rat_int(1), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat(1, 3)],
        ];
        assert_eq!(uniform_chain(&alg, Some(&basis), 2).unwrap().len(), 2);
        assert!(uniform_chain(&alg, Some(&basis[..2]), 2).is_err());
    }
}
