//! Exact arithmetic in the free Lie algebra on two generators `x`, `y`,
//! truncated at a fixed degree and written in the Lyndon basis.

pub mod basis;
pub mod bch;

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Valuation};

pub use basis::{necklace_count, LieTables, Word, DEFAULT_DEGREE, TABLE_DEGREE};
pub use bch::{bch, bch_associative, bch_dynkin};

/// One of the two free generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    X,
    Y,
}

/// Returns the standard-bracketed Lyndon words of the given degree, in
/// lexicographic order (`x < y`).
pub fn lyndon_basis(degree: usize) -> Result<Vec<Word>> {
    let tables = LieTables::global();
    if degree == 0 || degree > tables.max_degree() {
        return Err(Error::DegreeCap { requested: degree, cap: tables.max_degree() });
    }
    Ok(tables.basis(degree).iter().map(|b| b.word).collect())
}

/// Renders the standard bracketing of a Lyndon word, e.g. `[x,[x,y]]`.
pub fn bracketing(word: &Word) -> String {
    let letters = word.letters();
    fn go(l: &[u8]) -> String {
        if l.len() == 1 {
            return if l[0] == 0 { "x".into() } else { "y".into() };
        }
        let (u, v) = basis::standard_factorization(l);
        format!("[{},{}]", go(&u), go(&v))
    }
    go(&letters)
}

/// A truncated element of the free Lie algebra with coefficients in `Q` or `Q(sqrt p)`.
///
/// `components[d - 1][k]` is the coefficient of the `k`-th Lyndon basis element
/// of degree `d`.
#[derive(Clone, Debug)]
pub struct LiePoly {
    max_degree: usize,
    prime: Option<u64>,
    components: Vec<Vec<Scalar>>,
}

impl LiePoly {
    pub fn zero(max_degree: usize) -> LiePoly {
        let tables = LieTables::global();
        assert!(max_degree <= tables.max_degree(), "truncation degree beyond table cap");
        let components = (1..=max_degree).map(|d| vec![Scalar::zero(); tables.dim(d)]).collect();
        LiePoly { max_degree, prime: None, components }
    }

    /// Same as [`LiePoly::zero`] but tagged with a `sqrt p` context.
    pub fn zero_with_prime(max_degree: usize, prime: Option<u64>) -> LiePoly {
        let mut z = LiePoly::zero(max_degree);
        z.prime = prime;
        z
    }

    pub fn generator(g: Generator, max_degree: usize) -> LiePoly {
        let mut z = LiePoly::zero(max_degree);
        if max_degree >= 1 {
            z.components[0][g as usize] = Scalar::one();
        }
        z
    }

    pub fn x(max_degree: usize) -> LiePoly {
        LiePoly::generator(Generator::X, max_degree)
    }

    pub fn y(max_degree: usize) -> LiePoly {
        LiePoly::generator(Generator::Y, max_degree)
    }

    /// The basis element of the given Lyndon word with coefficient `c`.
    pub fn basis_element(word: &Word, c: Scalar, max_degree: usize) -> LiePoly {
        let k = LieTables::global().index_of(word).expect("not a Lyndon word");
        let mut z = LiePoly::zero_with_prime(max_degree, c.prime());
        if word.len <= max_degree {
            z.components[word.len - 1][k] = c;
        }
        z
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime.or_else(|| self.components.iter().flatten().find_map(|c| c.prime()))
    }

    pub fn coefficient(&self, degree: usize, index: usize) -> &Scalar {
        &self.components[degree - 1][index]
    }

    pub fn set_coefficient(&mut self, degree: usize, index: usize, c: Scalar) {
        if c.prime().is_some() {
            self.prime = c.prime();
        }
        self.components[degree - 1][index] = c;
    }

    /// Coefficients of the homogeneous degree-`d` part (empty beyond truncation).
    pub fn degree_coefficients(&self, degree: usize) -> &[Scalar] {
        if degree == 0 || degree > self.max_degree {
            &[]
        } else {
            &self.components[degree - 1]
        }
    }

    /// Iterator over nonzero `(degree, index, coefficient)` triples.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(d, row)| row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (d + 1, k, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(Scalar::is_zero)
    }

    /// Homogeneous component of degree `d` as a polynomial with the same truncation.
    pub fn component(&self, degree: usize) -> LiePoly {
        let mut z = LiePoly::zero_with_prime(self.max_degree, self.prime);
        if degree >= 1 && degree <= self.max_degree {
            z.components[degree - 1] = self.components[degree - 1].clone();
        }
        z
    }

    /// Largest degree with a nonzero coefficient (0 for the zero polynomial).
    pub fn top_degree(&self) -> usize {
        (1..=self.max_degree).rev().find(|&d| self.components[d - 1].iter().any(|c| !c.is_zero())).unwrap_or(0)
    }

    /// Drops components of degree above `n` and lowers the truncation accordingly.
    pub fn truncate(&self, n: usize) -> LiePoly {
        let n = n.min(self.max_degree);
        LiePoly { max_degree: n, prime: self.prime, components: self.components[..n].to_vec() }
    }

    /// Zeroes components of degree `>= n` while keeping the truncation degree.
    pub fn discard_from(&self, n: usize) -> LiePoly {
        let mut z = self.clone();
        for d in n.max(1)..=self.max_degree {
            z.components[d - 1].iter_mut().for_each(|c| *c = Scalar::zero());
        }
        z
    }

    /// Re-truncates at a (possibly larger) degree, padding with zeros.
    pub fn with_max_degree(&self, n: usize) -> LiePoly {
        let mut z = LiePoly::zero_with_prime(n, self.prime);
        for d in 1..=n.min(self.max_degree) {
            z.components[d - 1] = self.components[d - 1].clone();
        }
        z
    }

    pub fn scale(&self, c: &Scalar) -> LiePoly {
        let mut z = self.clone();
        z.components.iter_mut().flatten().for_each(|v| *v = &*v * c);
        if c.prime().is_some() {
            z.prime = c.prime();
        }
        z
    }

    /// Multiplies the degree-`d` component by `f(d)`.
    pub fn scale_by_degree(&self, f: impl Fn(usize) -> Scalar) -> LiePoly {
        let mut z = self.clone();
        for (d, row) in z.components.iter_mut().enumerate() {
            let s = f(d + 1);
            if s.prime().is_some() {
                z.prime = s.prime();
            }
            row.iter_mut().for_each(|v| *v = &*v * &s);
        }
        z
    }

    fn check_context(&self, other: &LiePoly) -> Result<Option<u64>> {
        match (self.prime(), other.prime()) {
            (Some(a), Some(b)) if a != b => Err(Error::PrimeContextMismatch(Some(a), Some(b))),
            (a, b) => Ok(a.or(b)),
        }
    }

    pub fn try_add(&self, other: &LiePoly) -> Result<LiePoly> {
        let prime = self.check_context(other)?;
        let n = self.max_degree.min(other.max_degree);
        let mut z = self.truncate(n);
        z.prime = prime;
        for (zr, or) in z.components.iter_mut().zip(&other.components) {
            for (a, b) in zr.iter_mut().zip(or) {
                *a += b;
            }
        }
        Ok(z)
    }

    pub fn try_sub(&self, other: &LiePoly) -> Result<LiePoly> {
        self.try_add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Sum; panics on mismatched prime contexts.
    pub fn add(&self, other: &LiePoly) -> LiePoly {
        self.try_add(other).expect("prime contexts differ")
    }

    pub fn sub(&self, other: &LiePoly) -> LiePoly {
        self.try_sub(other).expect("prime contexts differ")
    }

    /// Lie bracket, truncated at the smaller of the two truncation degrees.
    pub fn bracket(&self, other: &LiePoly) -> Result<LiePoly> {
        let prime = self.check_context(other)?;
        let n = self.max_degree.min(other.max_degree);
        let tables = LieTables::global();
        let mut z = LiePoly::zero_with_prime(n, prime);
        for da in 1..n {
            let a = &self.components[da - 1];
            if a.iter().all(Scalar::is_zero) {
                continue;
            }
            for db in 1..=(n - da) {
                let b = &other.components[db - 1];
                if b.iter().all(Scalar::is_zero) {
                    continue;
                }
                let block = tables.bracket_block(da, db);
                let nb = b.len();
                let target = &mut z.components[da + db - 1];
                for (i, ca) in a.iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    for (j, cb) in b.iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        let prod = ca * cb;
                        for &(k, s) in &block[i * nb + j] {
                            target[k] += &prod.scale_rational(&crate::scalar::rat_int(s));
                        }
                    }
                }
            }
        }
        Ok(z)
    }

    /// `v_p(h)`: minimum valuation over all coefficients, `+∞` for zero.
    pub fn valuation(&self, p: u64) -> Valuation {
        self.components.iter().flatten().map(|c| c.valuation(p)).min().unwrap_or(Valuation::Infinite)
    }

    /// Valuation of the homogeneous degree-`d` component.
    pub fn degree_valuation(&self, degree: usize, p: u64) -> Valuation {
        self.degree_coefficients(degree).iter().map(|c| c.valuation(p)).min().unwrap_or(Valuation::Infinite)
    }

    /// Whether every coefficient lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.components.iter().flatten().all(Scalar::is_rational)
    }
}

impl PartialEq for LiePoly {
    fn eq(&self, other: &Self) -> bool {
        let n = self.max_degree.max(other.max_degree);
        (1..=n).all(|d| {
            let a = self.degree_coefficients(d);
            let b = other.degree_coefficients(d);
            let dim = LieTables::global().dim(d);
            (0..dim).all(|k| match (a.get(k), b.get(k)) {
                (Some(x), Some(y)) => x == y,
                (Some(c), None) | (None, Some(c)) => c.is_zero(),
                (None, None) => true,
            })
        })
    }
}

impl fmt::Display for LiePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tables = LieTables::global();
        let mut first = true;
        for (d, k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let word = &tables.basis(d)[k].word;
            write!(f, "({c}){}", bracketing(word))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The homogeneous components `1..=N` of a formal Lie series.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSeries {
    poly: LiePoly,
}

impl GradedSeries {
    pub fn new(poly: LiePoly) -> Self {
        GradedSeries { poly }
    }

    pub fn zero(n: usize) -> Self {
        GradedSeries { poly: LiePoly::zero(n) }
    }

    pub fn degree(&self) -> usize {
        self.poly.max_degree()
    }

    pub fn component(&self, n: usize) -> LiePoly {
        self.poly.component(n)
    }

    pub fn as_poly(&self) -> &LiePoly {
        &self.poly
    }

    pub fn into_poly(self) -> LiePoly {
        self.poly
    }

    pub fn component_valuation(&self, n: usize, p: u64) -> Valuation {
        self.poly.degree_valuation(n, p)
    }
}

/// `v_p(h)` for a Lie polynomial.
pub fn valuation_of(h: &LiePoly, p: u64) -> Valuation {
    h.valuation(p)
}

/// `Σ_k (1/k!) (ad phi)^k (target)` truncated beyond degree `n`.
///
/// `phi` must have no constant term (guaranteed: the free Lie algebra starts in degree 1).
pub fn exp_ad_apply(phi: &LiePoly, target: Generator, n: usize) -> LiePoly {
    let phi = phi.with_max_degree(n);
    let mut term = LiePoly::generator(target, n);
    let mut total = term.clone();
    for k in 1..=n {
        if phi.is_zero() {
            break;
        }
        term = phi.bracket(&term).expect("contexts agree").scale(&Scalar::from_ratio(1, k as i64));
        if term.is_zero() {
            break;
        }
        total = total.add(&term);
    }
    total
}

/// `e^{ad phi}` applied to an arbitrary polynomial.
pub fn exp_ad_apply_poly(phi: &LiePoly, target: &LiePoly, n: usize) -> LiePoly {
    let phi = phi.with_max_degree(n);
    let mut term = target.with_max_degree(n);
    let mut total = term.clone();
    for k in 1..=n {
        term = phi.bracket(&term).expect("contexts agree").scale(&Scalar::from_ratio(1, k as i64));
        if term.is_zero() {
            break;
        }
        total = total.add(&term);
    }
    total
}

#[cfg(test)]
impl LiePoly {
    /// Checks that no stored coefficient is nonzero outside the valid Lyndon index range.
    pub(crate) fn is_well_formed(&self) -> bool {
        let t = LieTables::global();
        self.components.iter().enumerate().all(|(d, row)| row.len() == t.dim(d + 1))
            && self.components.len() == self.max_degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::basis::{commutator, TABLE_DEGREE};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::from_letters(&s.bytes().map(|b| (b == b'y') as u8).collect::<Vec<_>>())
    }

    #[test]
    fn lyndon_basis_examples() {
        assert_eq!(lyndon_basis(1).unwrap(), vec![w("x"), w("y")]);
        assert_eq!(lyndon_basis(2).unwrap(), vec![w("xy")]);
        assert_eq!(lyndon_basis(6).unwrap().len(), 9);
        assert!(lyndon_basis(0).is_err());
        assert_eq!(bracketing(&w("xxy")), "[x,[x,y]]");
        assert_eq!(bracketing(&w("xyy")), "[[x,y],y]");
    }

    #[test]
    fn bracket_basics() {
        let x = LiePoly::x(4);
        let y = LiePoly::y(4);
        assert!(x.bracket(&x).unwrap().is_zero());
        let xy = x.bracket(&y).unwrap();
        assert_eq!(xy, LiePoly::basis_element(&w("xy"), Scalar::one(), 4));
        // [[x,y],x] = -[x,[x,y]]
        let lhs = xy.bracket(&x).unwrap();
        assert_eq!(lhs, LiePoly::basis_element(&w("xxy"), Scalar::from_int(-1), 4));
    }

    /// Independent check of a bracket through the associative embedding: expand
    /// both sides as words and compare.
    #[test]
    fn bracket_matches_associative_commutator() {
        let t = LieTables::global();
        // [[x,y],x] in words: (xy - yx)x - x(xy - yx) = xyx - yxx - xxy + xyx
        let xy = &t.basis(2)[0].expansion;
        let x = &t.basis(1)[0].expansion;
        let c = commutator(xy, 2, x, 1);
        let mut expected = vec![0i64; 8];
        expected[0b010] = 2;
        expected[0b100] = -1;
        expected[0b001] = -1;
        assert_eq!(c, expected);
        assert_eq!(t.rewrite_integer(c, 3).unwrap(), vec![-1, 0]);
    }

    #[test]
    fn prime_context_mismatch_is_an_error() {
        let a = LiePoly::x(3).scale(&Scalar::sqrt_p(3));
        let b = LiePoly::y(3).scale(&Scalar::sqrt_p(5));
        assert!(matches!(a.bracket(&b), Err(Error::PrimeContextMismatch(..))));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation_of(&LiePoly::zero(3), 5), Valuation::Infinite);
        for p in [2u64, 3, 5, 7] {
            let h = LiePoly::basis_element(&w("xy"), Scalar::sqrt_p(p).inverse().unwrap(), 3);
            assert_eq!(valuation_of(&h, p), Valuation::Finite(num_rational::Ratio::new(-1, 2)));
        }
    }

    #[test]
    fn exp_ad_examples() {
        let x = LiePoly::x(3);
        let y = LiePoly::y(3);
        assert_eq!(exp_ad_apply(&LiePoly::zero(3), Generator::X, 3), x);
        let yx = y.bracket(&x).unwrap();
        assert_eq!(exp_ad_apply(&y, Generator::X, 2), x.add(&yx).truncate(2));
        let yyx = y.bracket(&yx).unwrap().scale(&Scalar::from_ratio(1, 2));
        assert_eq!(exp_ad_apply(&y, Generator::X, 3), x.add(&yx).add(&yyx));
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = LiePoly> {
        let total: usize = (1..=n).map(|d| LieTables::global().dim(d)).sum();
        proptest::collection::vec(-3i64..=3, total).prop_map(move |coefs| {
            let mut p = LiePoly::zero(n);
            let mut it = coefs.into_iter();
            for d in 1..=n {
                for k in 0..LieTables::global().dim(d) {
                    // keep polynomials sparse so brackets stay cheap
                    let c = it.next().unwrap();
                    if c.abs() == 3 {
                        p.set_coefficient(d, k, Scalar::from_int(c.signum()));
                    }
                }
            }
            assert!(p.is_well_formed());
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn antisymmetry_and_jacobi(a in arb_poly(6), b in arb_poly(6), c in arb_poly(6)) {
            let ab = a.bracket(&b).unwrap();
            let ba = b.bracket(&a).unwrap();
            prop_assert!(ab.add(&ba).is_zero());
            let j = a.bracket(&b.bracket(&c).unwrap()).unwrap()
                .add(&b.bracket(&c.bracket(&a).unwrap()).unwrap())
                .add(&c.bracket(&a.bracket(&b).unwrap()).unwrap());
            prop_assert!(j.is_zero());
        }
    }

    #[test]
    fn table_cap() {
        assert_eq!(LieTables::global().max_degree(), TABLE_DEGREE);
    }
}
