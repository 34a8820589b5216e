use rand::Rng;

use super::{ch_multiply, CompiledPoly, FiniteLieRing, RingElement};
use crate::chsolver::PhiPsiPair;
use crate::error::{Error, Result};
use crate::freelie::{exp_ad_apply, Generator};

/// Rings up to this order are checked on all of `g × g`.
pub const EXHAUSTIVE_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistReport {
    pub pairs_checked: usize,
    pub exhaustive: bool,
    /// `x~ + y~ = log(e^x e^y)` on every checked pair.
    pub sum_identity: bool,
    /// Bijective on `g × g` when exhaustive; injective on the sample otherwise.
    pub bijective: bool,
    /// `x~` is Ad-conjugate to `x` and `y~` to `y`.
    pub conjugate: bool,
}

/// Evaluates `(x, y) -> (e^{ad phi(x,y)} x, e^{ad psi(x,y)} y)` on the ring.
///
/// Every failed property is returned as [`Error::PropertyFailed`] with the
/// first witness pair.
pub fn twist_map<R: Rng>(ring: &FiniteLieRing, pair: &PhiPsiPair, rng: &mut R) -> Result<TwistReport> {
    let needed = ring.class();
    if pair.certified_to < needed {
        return Err(Error::InvalidInput(format!(
            "pair certified to degree {} but the ring has class {needed}",
            pair.certified_to
        )));
    }
    let n = pair.certified_to;
    let (phi, psi) = pair.unscaled();
    let x_tilde = CompiledPoly::compile(ring, &exp_ad_apply(&phi, Generator::X, n))?;
    let y_tilde = CompiledPoly::compile(ring, &exp_ad_apply(&psi, Generator::Y, n))?;
    let orbit = ring.adjoint_orbits()?;
    let order = ring.order();

    let exhaustive = order <= EXHAUSTIVE_LIMIT;
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..order).flat_map(|a| (0..order).map(move |b| (a, b))).collect()
    } else {
        (0..EXHAUSTIVE_LIMIT).map(|_| (rng.gen_range(0..order), rng.gen_range(0..order))).collect()
    };

    let mut seen = std::collections::HashSet::with_capacity(pairs.len());
    let witness = |property: &str, x: &RingElement, y: &RingElement| Error::PropertyFailed {
        property: property.to_string(),
        witness: format!("x = {x:?}, y = {y:?}"),
    };
    for &(a, b) in &pairs {
        let x = ring.element(a);
        let y = ring.element(b);
        let xt = x_tilde.evaluate(ring, &x, &y)?;
        let yt = y_tilde.evaluate(ring, &x, &y)?;
        if ring.add(&xt, &yt) != ch_multiply(ring, &x, &y)? {
            return Err(witness("sum identity", &x, &y));
        }
        if orbit[ring.index_of(&xt)] != orbit[a] || orbit[ring.index_of(&yt)] != orbit[b] {
            return Err(witness("conjugacy", &x, &y));
        }
        if !seen.insert((ring.index_of(&xt), ring.index_of(&yt))) && exhaustive {
            return Err(witness("bijectivity", &x, &y));
        }
    }
    // with random sampling repeated input pairs may collide legitimately
    let distinct_inputs: std::collections::HashSet<_> = pairs.iter().collect();
    let bijective = seen.len() == distinct_inputs.len();
    if !bijective {
        return Err(Error::PropertyFailed {
            property: "injectivity on sample".into(),
            witness: format!("{} images for {} inputs", seen.len(), distinct_inputs.len()),
        });
    }
    Ok(TwistReport { pairs_checked: pairs.len(), exhaustive, sum_identity: true, bijective, conjugate: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsolver::{solve_phi_psi, substituted_series, ValuationRegime};
    use crate::liering::{make_ring, Bracket};
    use rand::SeedableRng;

    #[test]
    fn abelian_twist_is_identity() {
        let ring = make_ring(3, &[1, 1], &[]).unwrap();
        let regime = ValuationRegime::Generic(3);
        let h = substituted_series(regime, 3).unwrap();
        let pair = solve_phi_psi(&h, regime, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let report = twist_map(&ring, &pair, &mut rng).unwrap();
        assert!(report.exhaustive && report.bijective);
        assert_eq!(report.pairs_checked, 81);
    }

    #[test]
    fn heisenberg_f3_twist() {
        let ring = make_ring(3, &[1, 1, 1], &[Bracket { i: 0, j: 1, m: 2, c: 1 }]).unwrap();
        let regime = ValuationRegime::Generic(3);
        let h = substituted_series(regime, 3).unwrap();
        let pair = solve_phi_psi(&h, regime, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let report = twist_map(&ring, &pair, &mut rng).unwrap();
        assert_eq!(report.pairs_checked, 27 * 27);
        assert!(report.sum_identity && report.bijective && report.conjugate);
    }
}
