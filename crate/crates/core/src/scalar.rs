//! Exact scalars in `Q(sqrt p)` and p-adic valuations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A p-adic valuation taking values in `(1/2)Z ∪ {+∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Ratio<i64>),
    Infinite,
}

impl Valuation {
    pub fn finite(n: i64) -> Self {
        Valuation::Finite(Ratio::from_integer(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// `self >= bound`, treating `+∞` as larger than everything.
    pub fn at_least(&self, bound: Ratio<i64>) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => *v >= bound,
        }
    }

    pub fn as_ratio(&self) -> Option<Ratio<i64>> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Infinite => write!(f, "+inf"),
            Valuation::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational number.
pub fn rat_valuation(q: &BigRational, p: u64) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::finite(int_valuation(q.numer(), p) - int_valuation(q.denom(), p))
}

/// Splits `q = p^t * a / u` with `p ∤ u`, returning `(t, a, u)` where `t` is the
/// exponent of `p` in the denominator (0 if `q` is p-integral).
pub fn split_denominator(q: &BigRational, p: u64) -> (u32, BigInt, BigInt) {
    let pb = BigInt::from(p);
    let mut den = q.denom().clone();
    let mut t = 0u32;
    while (&den % &pb).is_zero() {
        den /= &pb;
        t += 1;
    }
    (t, q.numer().clone(), den)
}

/// Reduces a p-integral rational modulo `modulus` (a power of `p`).
pub fn rational_mod(q: &BigRational, modulus: u64) -> Option<u64> {
    let m = BigInt::from(modulus);
    let den = q.denom().mod_floor(&m);
    let inv = mod_inverse_big(&den, &m)?;
    let r = (q.numer().mod_floor(&m) * inv).mod_floor(&m);
    r.to_u64()
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element `rat + surd * sqrt(p)` of `Q(sqrt p)`.
///
/// `prime` is the context `p`; it is `None` for plain rationals, in which case
/// `surd` is always zero. Mixing two different prime contexts is a logic error
/// and panics; callers that accept user data check contexts up front.
#[derive(Clone, Debug)]
pub struct Scalar {
    rat: BigRational,
    surd: BigRational,
    prime: Option<u64>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { rat: BigRational::zero(), surd: BigRational::zero(), prime: None }
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar { rat: q, surd: BigRational::zero(), prime: None }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(rat_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(rat(n, d))
    }

    /// `rat + surd * sqrt(p)`.
    pub fn new(rat: BigRational, surd: BigRational, p: u64) -> Self {
        Scalar { rat, surd, prime: Some(p) }
    }

    pub fn sqrt_p(p: u64) -> Self {
        Scalar::new(BigRational::zero(), BigRational::one(), p)
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    fn merge(a: Option<u64>, b: Option<u64>) -> Option<u64> {
        match (a, b) {
            (Some(x), Some(y)) if x != y => {
                panic!("scalar prime contexts differ: {x} vs {y}")
            }
            (Some(x), _) | (_, Some(x)) => Some(x),
            _ => None,
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Scalar {
        Scalar { rat: &self.rat * q, surd: &self.surd * q, prime: self.prime }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        if self.surd.is_zero() {
            return Some(Scalar { rat: self.rat.recip(), surd: BigRational::zero(), prime: self.prime });
        }
        let p = BigRational::from_integer(BigInt::from(self.prime.expect("surd needs a prime")));
        // (a + b√p)^{-1} = (a - b√p) / (a² - p b²); the norm is nonzero since √p ∉ Q.
        let norm = &self.rat * &self.rat - &p * &self.surd * &self.surd;
        Some(Scalar { rat: &self.rat / &norm, surd: -&self.surd / &norm, prime: self.prime })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inverse().map(|inv| self * &inv)
    }

    /// `v_p`, normalized by `v_p(p) = 1`.
    ///
    /// The two parts have valuations in `Z` and `Z + 1/2` respectively, so they
    /// never cancel and the valuation is the minimum of the two.
    pub fn valuation(&self, p: u64) -> Valuation {
        if !self.surd.is_zero() {
            assert_eq!(self.prime, Some(p), "valuation prime differs from the surd context");
        }
        let a = rat_valuation(&self.rat, p);
        let b = match rat_valuation(&self.surd, p) {
            Valuation::Finite(v) => Valuation::Finite(v + Ratio::new(1, 2)),
            Valuation::Infinite => Valuation::Infinite,
        };
        a.min(b)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.rat == other.rat && self.surd == other.surd
    }
}

impl Eq for Scalar {}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { rat: &self.rat + &rhs.rat, surd: &self.surd + &rhs.surd, prime: Scalar::merge(self.prime, rhs.prime) }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { rat: &self.rat - &rhs.rat, surd: &self.surd - &rhs.surd, prime: Scalar::merge(self.prime, rhs.prime) }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let prime = Scalar::merge(self.prime, rhs.prime);
        let mut rat = &self.rat * &rhs.rat;
        if !self.surd.is_zero() && !rhs.surd.is_zero() {
            let p = BigRational::from_integer(BigInt::from(prime.unwrap()));
            rat += &self.surd * &rhs.surd * p;
        }
        let surd = &self.rat * &rhs.surd + &self.surd * &rhs.rat;
        Scalar { rat, surd, prime }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.rat += &rhs.rat;
        self.surd += &rhs.surd;
        self.prime = Scalar::merge(self.prime, rhs.prime);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.rat -= &rhs.rat;
        self.surd -= &rhs.surd;
        self.prime = Scalar::merge(self.prime, rhs.prime);
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -self.rat, surd: -self.surd, prime: self.prime }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -&self.rat, surd: -&self.surd, prime: self.prime }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.surd.is_zero()) {
            (_, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "{}*sqrt({})", self.surd, self.prime.unwrap()),
            (false, false) => {
                let sign = if self.surd.sign_is_negative() { "-" } else { "+" };
                write!(f, "{} {} {}*sqrt({})", self.rat, sign, self.surd.abs(), self.prime.unwrap())
            }
        }
    }
}

trait SignNeg {
    fn sign_is_negative(&self) -> bool;
}

impl SignNeg for BigRational {
    fn sign_is_negative(&self) -> bool {
        self.numer().sign() == Sign::Minus
    }
}

/// Total order on valuations compared with rational bounds, used in reports.
pub fn compare_with_bound(v: Valuation, bound: Ratio<i64>) -> Ordering {
    match v {
        Valuation::Infinite => Ordering::Greater,
        Valuation::Finite(x) => x.cmp(&bound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_p_squares_to_p() {
        let s = Scalar::sqrt_p(5);
        let sq = &s * &s;
        assert_eq!(sq, Scalar::from_int(5));
        assert!(sq.is_rational());
    }

    #[test]
    fn inverse_of_quadratic_element() {
        let a = Scalar::new(rat(3, 2), rat(-1, 7), 3);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Scalar::one());
        assert!(Scalar::zero().inverse().is_none());
    }

    #[test]
    fn valuations() {
        assert_eq!(Scalar::zero().valuation(3), Valuation::Infinite);
        assert_eq!(Scalar::sqrt_p(7).valuation(7), Valuation::Finite(Ratio::new(1, 2)));
        assert_eq!(Scalar::from_ratio(1, 12).valuation(2), Valuation::finite(-2));
        assert_eq!(Scalar::from_ratio(1, 12).valuation(3), Valuation::finite(-1));
        let inv_sqrt = Scalar::sqrt_p(5).inverse().unwrap();
        assert_eq!(inv_sqrt.valuation(5), Valuation::Finite(Ratio::new(-1, 2)));
        // mixed: 5 + sqrt5 has valuation 1/2
        let m = Scalar::new(rat_int(5), rat_int(1), 5);
        assert_eq!(m.valuation(5), Valuation::Finite(Ratio::new(1, 2)));
    }

    #[test]
    fn rational_reduction() {
        assert_eq!(rational_mod(&rat(1, 2), 3), Some(2));
        assert_eq!(rational_mod(&rat(-1, 12), 25), Some(2));
        assert_eq!(rational_mod(&rat(1, 3), 9), None);
        let (t, a, u) = split_denominator(&rat(5, 24), 2);
        assert_eq!((t, a, u), (3, BigInt::from(5), BigInt::from(3)));
    }

    proptest::proptest! {
        #[test]
        fn valuation_is_additive(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50,
                                 e in -20i64..20, f in -20i64..20) {
            let x = Scalar::new(rat(a, b), rat(e, 3), 3);
            let y = Scalar::new(rat(c, d), rat(f, 5), 3);
            let prod = &x * &y;
            proptest::prop_assert_eq!(prod.valuation(3), x.valuation(3) + y.valuation(3));
        }
    }
}
