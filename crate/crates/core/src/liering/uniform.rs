use num_rational::BigRational;

use super::{lift_precision, make_ring_labeled, pow, Bracket, FiniteLieRing};
use crate::error::{Error, Result};
use crate::scalar::{rat_valuation, rational_mod, Valuation};

/// `g / p^r g` for the `Z_p`-lattice `g = ⊕ Z_p e_i` with the given exact
/// structure constants `(i, j, m, c)` (0-based, `i < j` or antisymmetric).
///
/// The constants must be p-integral with `[g, g] ⊆ p g` (`⊆ 4 g` when `p = 2`).
/// They are kept modulo a large power of `p` so that CH can be evaluated at
/// working precision beyond `p^r`.
pub fn uniform_quotient(
    p: u64,
    rank: usize,
    constants: &[(usize, usize, usize, BigRational)],
    r: u32,
) -> Result<FiniteLieRing> {
    if r == 0 {
        return Err(Error::InvalidInput("quotient exponent r must be positive".into()));
    }
    let needed = if p == 2 { 2 } else { 1 };
    let lp = lift_precision(p);
    let mut brackets = Vec::new();
    for (i, j, m, c) in constants {
        if *i >= rank || *j >= rank || *m >= rank {
            return Err(Error::InvalidInput(format!("bracket index out of range for rank {rank}")));
        }
        match rat_valuation(c, p) {
            Valuation::Infinite => continue,
            Valuation::Finite(v) if v >= (needed as i64).into() => {}
            Valuation::Finite(v) => {
                return Err(Error::RegimeViolation(format!(
                    "constant {c} of [e{}, e{}] has {p}-adic valuation {v}; a uniform algebra needs at least {needed}",
                    i + 1,
                    j + 1
                )))
            }
        }
        let lifted = rational_mod(c, pow(p, lp)).expect("p-integral constant");
        brackets.push(Bracket { i: *i, j: *j, m: *m, c: lifted as i64 });
    }
    make_ring_labeled(p, &vec![r; rank], &brackets, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::RingRegime;
    use crate::scalar::rat_int;

    #[test]
    fn heisenberg_lattice_mod_nine() {
        let g = uniform_quotient(3, 3, &[(0, 1, 2, rat_int(3))], 2).unwrap();
        assert_eq!(g.rank(), 3);
        assert_eq!(g.order(), 729);
        assert!(g.uniform_depth() >= 1);
    }

    #[test]
    fn abelian_lattice() {
        let g = uniform_quotient(5, 3, &[], 1).unwrap();
        assert_eq!(g.order(), 125);
        assert_eq!(g.class(), 1);
    }

    #[test]
    fn p2_needs_four() {
        let err = uniform_quotient(2, 3, &[(0, 1, 2, rat_int(2))], 3).unwrap_err();
        assert!(matches!(err, Error::RegimeViolation(_)));
        let g = uniform_quotient(2, 3, &[(0, 1, 2, rat_int(4))], 3).unwrap();
        assert_eq!(g.regime(), RingRegime::Uniform { r: 3, depth: 2 });
    }

    #[test]
    fn further_reduction_commutes() {
        // (g / p^3) / p^2 and g / p^2 share constants coordinate-wise
        let c = [(0, 1, 2, rat_int(3)), (0, 2, 3, rat_int(-6))];
        let big = uniform_quotient(3, 4, &c, 3).unwrap();
        let small = uniform_quotient(3, 4, &c, 2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let reduced: Vec<(usize, u64)> =
                    big.structure(i, j).iter().map(|&(m, v)| (m, v % 9)).filter(|&(_, v)| v != 0).collect();
                assert_eq!(reduced, small.structure(i, j));
            }
        }
    }

    #[test]
    fn non_nilpotent_class_growth() {
        // [a, b] = 3b: the quotient mod 3^r has class r
        let g = uniform_quotient(3, 2, &[(0, 1, 1, rat_int(3))], 3).unwrap();
        assert_eq!(g.class(), 3);
        assert_eq!(g.regime(), RingRegime::Uniform { r: 3, depth: 1 });
    }
}
