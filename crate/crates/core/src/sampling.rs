//! Seeded random simplex points for experiments and tests.

use num_bigint::BigInt;
use rand::Rng;

use crate::abelian::GroupSpec;
use crate::scalar::Rational;
use crate::simplex::SimplexPoint;

/// A point uniform on the simplex (symmetric Dirichlet with all-ones
/// parameter), via normalized exponentials.
pub fn uniform_simplex_point(spec: &GroupSpec, rng: &mut impl Rng) -> SimplexPoint<f64> {
    let m = spec.order() as usize;
    let mut weights: Vec<f64> = (0..m)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            -u.ln()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let sum: f64 = weights.iter().sum();
    if sum != 1.0 {
        for w in &mut weights {
            *w /= sum;
        }
    }
    SimplexPoint::from_weights(spec.clone(), weights).expect("normalized weights form a point")
}

/// A random exact-rational point: each coordinate is zeroed with
/// probability `zero_percent`/100, the rest get numerators in
/// `1..=max_numerator`, and the vector is normalized. At least one
/// coordinate is always positive, so varied supports come out naturally.
pub fn random_rational_point(
    spec: &GroupSpec,
    rng: &mut impl Rng,
    max_numerator: u64,
    zero_percent: u32,
) -> SimplexPoint<Rational> {
    let m = spec.order() as usize;
    loop {
        let nums: Vec<u64> = (0..m)
            .map(|_| {
                if rng.gen_range(0..100) < zero_percent {
                    0
                } else {
                    rng.gen_range(1..=max_numerator)
                }
            })
            .collect();
        let total: u64 = nums.iter().sum();
        if total == 0 {
            continue;
        }
        let weights = nums
            .iter()
            .map(|&n| Rational::new(BigInt::from(n), BigInt::from(total)))
            .collect();
        return SimplexPoint::from_weights(spec.clone(), weights)
            .expect("normalized weights form a point");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn float_samples_are_valid_and_deterministic() {
        let spec = GroupSpec::new(vec![2, 3]).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let x = uniform_simplex_point(&spec, &mut a);
            let y = uniform_simplex_point(&spec, &mut b);
            assert_eq!(x.weights(), y.weights());
            assert_eq!(x.support().len(), 6);
        }
    }

    #[test]
    fn rational_samples_have_varied_supports() {
        let spec = GroupSpec::cyclic(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut sizes = std::collections::HashSet::new();
        for _ in 0..40 {
            let x = random_rational_point(&spec, &mut rng, 1000, 25);
            sizes.insert(x.support().len());
        }
        assert!(sizes.len() > 1);
    }
}
