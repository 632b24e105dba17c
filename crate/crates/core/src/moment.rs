//! Weighted Fubini-Study and quotient moment maps on the positive part of the
//! torus, in binary64.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyalg::{rat, Rational, Scalar};
use crate::polytope::LatticePolytope;
use crate::precision::{check_slp, k_w_eval};
use crate::sampling::Sampler;
use crate::statistics::{monomial_param, tau_a};

/// Newton tolerance for inverting `K_w`.
pub const QUOT_TOL: f64 = 1e-12;
/// Max-norm gap under which the two moment maps count as equal.
pub const EQUALITY_TOL: f64 = 1e-9;
/// Sampling box `[1/8, 8]^d` for torus moduli.
pub const Q_RANGE: (f64, f64) = (0.125, 8.0);

const MAX_ITERS: usize = 200;
const FD_STEP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentComparison {
    pub sample_points: Vec<Vec<f64>>,
    /// `max_k |mu_quot(q)_k - mu_FS(q)_k|` per sample.
    pub gaps: Vec<f64>,
    pub max_gap: f64,
    pub slp_verdict: bool,
    pub tol: f64,
    pub maps_agree: bool,
}

fn check_positive(q: &[f64]) -> Result<()> {
    if q.iter().all(|x| *x > 0.0 && x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidData(
            "torus moduli must be positive and finite".into(),
        ))
    }
}

/// `mu_FS,w(q) = tau_A((w_j q^{m_j})_j)`.
pub fn mu_fs(p: &LatticePolytope, w: &[Rational], q: &[f64]) -> Result<Vec<f64>> {
    check_positive(q)?;
    tau_a(p, &monomial_param(p, w, q)?)
}

/// Weights `2^{<m_j, n_P>}` whose `K` map links the two moment maps.
pub fn quotient_weights(p: &LatticePolytope) -> Vec<Rational> {
    let n_p = p.facet_normal_sum();
    p.lattice_points()
        .iter()
        .map(|m| {
            let e: i64 = m.iter().zip(&n_p).map(|(a, b)| a * b).sum();
            rat(2).powi_exact(e)
        })
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The quotient moment map at `q`: the interior point `p` with
/// `K_w'(p) = mu_FS,1(q)` for `w' = quotient_weights(P)`, found by damped
/// Newton from the lattice-point centroid with a central-difference Jacobian.
pub fn mu_quot(p: &LatticePolytope, q: &[f64], tol: f64) -> Result<Vec<f64>> {
    let ones = vec![rat(1); p.num_points()];
    let target = mu_fs(p, &ones, q)?;
    let bw = quotient_weights(p);
    let d = p.dim();
    let residual = |x: &[f64]| -> Result<Vec<f64>> {
        let k = k_w_eval(p, &bw, x)?;
        Ok(k.iter().zip(&target).map(|(a, b)| a - b).collect())
    };

    let mut x: Vec<f64> = p.centroid().iter().map(Scalar::as_f64).collect();
    let mut r = residual(&x)?;
    let mut norm = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut iters = 0;
    while norm > tol {
        if iters == MAX_ITERS {
            return Err(Error::NoConvergence(MAX_ITERS));
        }
        iters += 1;
        let mut jac = DMatrix::<f64>::zeros(d, d);
        for k in 0..d {
            let mut hi = x.clone();
            let mut lo = x.clone();
            hi[k] += FD_STEP;
            lo[k] -= FD_STEP;
            let (rh, rl) = (k_w_eval(p, &bw, &hi)?, k_w_eval(p, &bw, &lo)?);
            for i in 0..d {
                jac[(i, k)] = (rh[i] - rl[i]) / (2.0 * FD_STEP);
            }
        }
        let rhs = DVector::from_iterator(d, r.iter().map(|v| -v));
        let step = jac.lu().solve(&rhs).ok_or(Error::NoConvergence(iters))?;

        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = x
                .iter()
                .zip(step.iter())
                .map(|(a, s)| a + alpha * s)
                .collect();
            if p.is_interior(&cand) {
                let cr = residual(&cand)?;
                let cn = cr.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if cn < norm {
                    x = cand;
                    r = cr;
                    norm = cn;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence(iters));
        }
    }
    Ok(x)
}

/// `(2 h_i(p))_i`, the squared moduli `|z_i|^2` over an interior point.
pub fn lattice_distance_lift<T: Scalar>(p: &LatticePolytope, x: &[T]) -> Result<Vec<T>> {
    p.check_dim(x.len())?;
    if !p.is_interior(x) {
        return Err(Error::NotInterior);
    }
    Ok(p.distances_at(x)
        .into_iter()
        .map(|h| h.clone() + h)
        .collect())
}

/// Evaluates both moment maps at `samples` log-uniform points of
/// `[1/8, 8]^d` and records the largest gap.
pub fn compare_moment_maps(
    p: &LatticePolytope,
    w: &[Rational],
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<MomentComparison> {
    let slp_verdict = check_slp(p, w)?.verdict;
    let mut sampler = Sampler::new(seed);
    let mut sample_points = Vec::with_capacity(samples);
    let mut gaps = Vec::with_capacity(samples);
    for _ in 0..samples {
        let q = sampler.log_uniform(p.dim(), Q_RANGE.0, Q_RANGE.1);
        let quot = mu_quot(p, &q, QUOT_TOL)?;
        let fs = mu_fs(p, w, &q)?;
        gaps.push(max_abs_diff(&quot, &fs));
        sample_points.push(q);
    }
    let max_gap = gaps.iter().cloned().fold(0.0, f64::max);
    Ok(MomentComparison {
        sample_points,
        gaps,
        max_gap,
        slp_verdict,
        tol,
        maps_agree: max_gap <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::polyalg::ratio;

    fn p1_fs(q: f64) -> f64 {
        (q + 2.0 * q * q) / (1.0 + q + q * q)
    }

    fn p1_quot(q: f64) -> f64 {
        (2.0 * q + 2.0 * q * q) / (1.0 + 2.0 * q + q * q)
    }

    #[test]
    fn segment_closed_forms() {
        let f = catalog::p1_segment();
        for q in [0.25, 1.0, 4.0, 0.01, 37.0] {
            let fs = mu_fs(&f.polytope, &f.weights, &[q]).unwrap();
            let quot = mu_quot(&f.polytope, &[q], QUOT_TOL).unwrap();
            assert!((fs[0] - p1_fs(q)).abs() < 1e-12);
            assert!((quot[0] - p1_quot(q)).abs() < 1e-10);
        }
    }

    #[test]
    fn square_fixed_point() {
        let f = catalog::square();
        let fs = mu_fs(&f.polytope, &f.weights, &[1.0, 1.0]).unwrap();
        let quot = mu_quot(&f.polytope, &[1.0, 1.0], QUOT_TOL).unwrap();
        assert!(max_abs_diff(&fs, &[0.5, 0.5]) < 1e-15);
        assert!(max_abs_diff(&quot, &[0.5, 0.5]) < 1e-12);
    }

    #[test]
    fn uniform_q_gives_centroid_for_symmetric_sets() {
        let g = catalog::graphical();
        let fs = mu_fs(&g.polytope, &g.weights, &[1.0; 5]).unwrap();
        let c: Vec<f64> = g.polytope.centroid().iter().map(Scalar::as_f64).collect();
        assert!(max_abs_diff(&fs, &c) < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_q() {
        let f = catalog::square();
        assert!(mu_fs(&f.polytope, &f.weights, &[0.0, 1.0]).is_err());
        assert!(mu_quot(&f.polytope, &[1.0, -1.0], QUOT_TOL).is_err());
    }

    #[test]
    fn lift_examples() {
        let seg = catalog::p1_segment().polytope;
        assert_eq!(
            lattice_distance_lift(&seg, &[rat(1)]).unwrap(),
            vec![rat(2), rat(2)]
        );
        let d1 = catalog::simplex(1, 1).unwrap().polytope;
        assert_eq!(
            lattice_distance_lift(&d1, &[ratio(1, 2)]).unwrap(),
            vec![rat(1), rat(1)]
        );
        let two = catalog::simplex(2, 1).unwrap().polytope;
        assert_eq!(
            lattice_distance_lift(&two, &[rat(0)]),
            Err(Error::NotInterior)
        );
    }

    #[test]
    fn quotient_weights_reduce_to_ones_when_normals_cancel() {
        for f in [
            catalog::square(),
            catalog::graphical(),
            catalog::simplex(2, 2).unwrap(),
        ] {
            assert_eq!(
                quotient_weights(&f.polytope),
                vec![rat(1); f.polytope.num_points()]
            );
        }
        let t = catalog::trapezoid(1, 1, 1).unwrap();
        assert_eq!(
            quotient_weights(&t.polytope),
            vec![rat(1), rat(1), rat(1), ratio(1, 2), ratio(1, 2)]
        );
    }

    #[test]
    fn slp_pairs_have_equal_moment_maps() {
        for f in [catalog::square(), catalog::simplex(2, 1).unwrap()] {
            let c = compare_moment_maps(&f.polytope, &f.weights, 25, EQUALITY_TOL, 1).unwrap();
            assert!(
                c.slp_verdict && c.maps_agree,
                "{} gap {}",
                f.name,
                c.max_gap
            );
        }
    }

    #[test]
    fn trapezoid_moment_maps_differ() {
        let f = catalog::trapezoid(1, 1, 1).unwrap();
        let c = compare_moment_maps(&f.polytope, &f.weights, 25, EQUALITY_TOL, 1).unwrap();
        assert!(!c.slp_verdict && c.max_gap >= 1e-2);
    }

    #[test]
    fn quotient_map_inverts_k() {
        let t = catalog::trapezoid(1, 1, 1).unwrap();
        let bw = quotient_weights(&t.polytope);
        let ones = vec![rat(1); 5];
        let mut s = Sampler::new(3);
        for _ in 0..20 {
            let q = s.log_uniform(2, Q_RANGE.0, Q_RANGE.1);
            let x = mu_quot(&t.polytope, &q, QUOT_TOL).unwrap();
            assert!(t.polytope.is_interior(&x));
            let k = k_w_eval(&t.polytope, &bw, &x).unwrap();
            assert!(max_abs_diff(&k, &mu_fs(&t.polytope, &ones, &q).unwrap()) <= QUOT_TOL);
            assert!(t
                .polytope
                .is_interior(&mu_fs(&t.polytope, &t.weights, &q).unwrap()));
        }
    }

    #[test]
    fn segment_map_is_monotone_with_endpoint_limits() {
        let f = catalog::p1_segment();
        let mut prev = 0.0;
        for k in -20..=20 {
            let q = 2f64.powi(k);
            let v = mu_fs(&f.polytope, &f.weights, &[q]).unwrap()[0];
            assert!(v > prev && v < 2.0);
            prev = v;
        }
        assert!(mu_fs(&f.polytope, &f.weights, &[1e-9]).unwrap()[0] < 1e-8);
        assert!(mu_fs(&f.polytope, &f.weights, &[1e9]).unwrap()[0] > 2.0 - 1e-8);
    }
}
