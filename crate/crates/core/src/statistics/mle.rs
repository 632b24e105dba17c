use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{check_data, tau_a};
use crate::error::{Error, Result};
use crate::polyalg::{Rational, Scalar};
use crate::polytope::LatticePolytope;
use crate::precision::{check_slp, check_weights, normalized_blending};

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITERS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MleMethod {
    ClosedForm,
    Newton,
}

/// A maximum-likelihood estimate with its sufficient statistic `tau_A(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MleResult<T> {
    pub estimate: Vec<T>,
    pub sufficient_statistic: Vec<T>,
    /// `max_k |tau_A(estimate)_k - tau_A(u)_k|`.
    pub residual: T,
    pub method: MleMethod,
    pub iterations: usize,
}

pub(crate) fn closed_form_unchecked(
    p: &LatticePolytope,
    w: &[Rational],
    u: &[Rational],
) -> Result<MleResult<Rational>> {
    check_data(p, u)?;
    let stat = tau_a(p, u)?;
    let estimate = normalized_blending(p, w, &stat)?;
    let back = tau_a(p, &estimate)?;
    let residual = back
        .iter()
        .zip(&stat)
        .map(|(a, b)| (a - b).abs_val())
        .fold(Rational::from_int(0), |m, x| if x > m { x } else { m });
    Ok(MleResult {
        estimate,
        sufficient_statistic: stat,
        residual,
        method: MleMethod::ClosedForm,
        iterations: 0,
    })
}

/// Exact estimate `L(u) = blending(tau_A(u))`, valid under strict linear
/// precision.
pub fn mle_closed_form(
    p: &LatticePolytope,
    w: &[Rational],
    u: &[Rational],
) -> Result<MleResult<Rational>> {
    if !check_slp(p, w)?.verdict {
        return Err(Error::NotSlp);
    }
    closed_form_unchecked(p, w, u)
}

struct Model<'a> {
    points: &'a [Vec<i64>],
    log_w: Vec<f64>,
    dim: usize,
}

impl Model<'_> {
    /// Model probabilities at `theta` and `log Z(theta)`.
    fn probs(&self, theta: &[f64]) -> (Vec<f64>, f64) {
        let logits: Vec<f64> = self
            .points
            .iter()
            .zip(&self.log_w)
            .map(|(m, lw)| lw + m.iter().zip(theta).map(|(&a, t)| a as f64 * t).sum::<f64>())
            .collect();
        let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
        let z: f64 = exps.iter().sum();
        (exps.iter().map(|e| e / z).collect(), top + z.ln())
    }

    fn mean(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|k| {
                self.points
                    .iter()
                    .zip(x)
                    .map(|(m, xj)| m[k] as f64 * xj)
                    .sum()
            })
            .collect()
    }

    fn loglik(&self, theta: &[f64], stat: &[f64]) -> f64 {
        let (_, log_z) = self.probs(theta);
        stat.iter().zip(theta).map(|(a, b)| a * b).sum::<f64>() - log_z
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Damped Newton on the concave log-likelihood in `theta = log t`, from
/// `theta = 0`, until `tau_A` of the model point matches `tau_A(u)` to `tol`.
pub fn mle_newton<T: Scalar>(
    p: &LatticePolytope,
    w: &[Rational],
    u: &[T],
    tol: f64,
) -> Result<MleResult<f64>> {
    check_weights(p, w)?;
    check_data(p, u)?;
    let exact_stat = tau_a(p, u)?;
    if !p.is_interior(&exact_stat) {
        return Err(Error::NotInterior);
    }
    let stat: Vec<f64> = exact_stat.iter().map(Scalar::as_f64).collect();
    let d = p.dim();
    let model = Model {
        points: p.lattice_points(),
        log_w: w.iter().map(|x| x.as_f64().ln()).collect(),
        dim: d,
    };

    let mut theta = vec![0.0; d];
    let (mut x, _) = model.probs(&theta);
    let mut mean = model.mean(&x);
    let mut res = max_abs_diff(&mean, &stat);
    let mut ll = model.loglik(&theta, &stat);
    let mut iters = 0;
    while res > tol {
        if iters == NEWTON_MAX_ITERS {
            return Err(Error::NoConvergence(NEWTON_MAX_ITERS));
        }
        iters += 1;
        let grad = DVector::from_iterator(d, stat.iter().zip(&mean).map(|(a, b)| a - b));
        let mut cov = DMatrix::<f64>::zeros(d, d);
        for (m, xj) in model.points.iter().zip(&x) {
            for a in 0..d {
                for b in 0..d {
                    cov[(a, b)] += xj * (m[a] as f64 - mean[a]) * (m[b] as f64 - mean[b]);
                }
            }
        }
        let step = match cov.clone().cholesky() {
            Some(ch) => ch.solve(&grad),
            None => cov.lu().solve(&grad).ok_or(Error::NoConvergence(iters))?,
        };

        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = theta
                .iter()
                .zip(step.iter())
                .map(|(t, s)| t + alpha * s)
                .collect();
            let (cx, _) = model.probs(&cand);
            let cmean = model.mean(&cx);
            let cres = max_abs_diff(&cmean, &stat);
            let cll = model.loglik(&cand, &stat);
            if cll > ll || cres < res {
                theta = cand;
                x = cx;
                mean = cmean;
                res = cres;
                ll = cll;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence(iters));
        }
    }

    Ok(MleResult {
        estimate: x,
        sufficient_statistic: stat,
        residual: res,
        method: MleMethod::Newton,
        iterations: iters,
    })
}
