//! Seeded generators for rational data vectors, interior points and positive
//! torus points. Every draw is a function of the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polyalg::{rat, ratio, Rational};
use crate::polytope::LatticePolytope;

/// Denominator of sampled rationals; numerators are uniform in `1..=100`.
pub const SAMPLE_DENOMINATOR: i64 = 101;

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A rational `k / 101` with `k` uniform in `1..=100`.
    pub fn rational(&mut self) -> Rational {
        ratio(self.rng.gen_range(1..=100), SAMPLE_DENOMINATOR)
    }

    pub fn rational_vec(&mut self, n: usize) -> Vec<Rational> {
        (0..n).map(|_| self.rational()).collect()
    }

    /// A positive data vector rescaled so its entries sum to one.
    pub fn normalized_data(&mut self, n: usize) -> Vec<Rational> {
        let u = self.rational_vec(n);
        let total = u.iter().fold(rat(0), |acc, x| acc + x);
        u.into_iter().map(|x| x / &total).collect()
    }

    /// A strictly positive convex combination of all lattice points, which is
    /// an interior point of the polytope.
    pub fn interior_point(&mut self, p: &LatticePolytope) -> Vec<Rational> {
        let coeffs = self.normalized_data(p.num_points());
        (0..p.dim())
            .map(|k| {
                p.lattice_points()
                    .iter()
                    .zip(&coeffs)
                    .fold(rat(0), |acc, (m, c)| acc + c * rat(m[k]))
            })
            .collect()
    }

    /// A point of `[lo, hi]^d` drawn log-uniformly per coordinate.
    pub fn log_uniform(&mut self, d: usize, lo: f64, hi: f64) -> Vec<f64> {
        let (a, b) = (lo.ln(), hi.ln());
        (0..d).map(|_| self.rng.gen_range(a..=b).exp()).collect()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::make_trapezoid;
    use num_traits::One;

    #[test]
    fn same_seed_same_draws() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        assert_eq!(a.rational_vec(10), b.rational_vec(10));
        assert_eq!(a.log_uniform(3, 0.125, 8.0), b.log_uniform(3, 0.125, 8.0));
    }

    #[test]
    fn rationals_have_expected_shape() {
        let mut s = Sampler::new(1);
        for x in s.rational_vec(200) {
            assert!(x > rat(0) && x < rat(1));
            assert!((x.clone() * rat(SAMPLE_DENOMINATOR)).is_integer());
        }
        let u = s.normalized_data(5);
        assert!(u.iter().fold(rat(0), |a, x| a + x).is_one());
    }

    #[test]
    fn interior_points_are_interior() {
        let p = make_trapezoid(1, 1, 1).unwrap();
        let mut s = Sampler::new(3);
        for _ in 0..20 {
            assert!(p.is_interior(&s.interior_point(&p)));
        }
    }

    #[test]
    fn log_uniform_stays_in_box() {
        let mut s = Sampler::new(5);
        for _ in 0..100 {
            for x in s.log_uniform(2, 0.125, 8.0) {
                assert!((0.125..=8.0).contains(&x));
            }
        }
    }
}
