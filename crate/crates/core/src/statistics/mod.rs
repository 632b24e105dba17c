//! The tautological map, maximum-likelihood estimation for scaled toric
//! models, and Horn parametrizations.

mod horn;
mod mle;

use crate::error::{Error, Result};
use crate::polyalg::{rat, Rational, RationalMatrix, Scalar};
use crate::polytope::LatticePolytope;
use crate::precision::{check_weights, convex_combination};

pub use horn::{
    horn_eval, horn_matrix_slp, horn_structure_report, minimal_horn, verify_horn,
    CollectionRowMatch, HornMatrix, HornStructureReport, HornTrial, HornVerification, VerifyMode,
};
pub use mle::{mle_closed_form, mle_newton, MleMethod, MleResult, NEWTON_MAX_ITERS, NEWTON_TOL};

/// Checks a data vector: one strictly positive entry per lattice point.
pub fn check_data<T: Scalar>(p: &LatticePolytope, u: &[T]) -> Result<()> {
    if u.len() != p.num_points() {
        return Err(Error::InvalidData(format!(
            "expected {} entries, found {}",
            p.num_points(),
            u.len()
        )));
    }
    if let Some(j) = u.iter().position(|x| *x <= T::zero()) {
        return Err(Error::InvalidData(format!("entry {j} is not positive")));
    }
    Ok(())
}

/// `tau_A(x) = sum_j (x_j / x_+) m_j`.
pub fn tau_a<T: Scalar>(p: &LatticePolytope, x: &[T]) -> Result<Vec<T>> {
    if x.len() != p.num_points() {
        return Err(Error::DimensionMismatch {
            expected: p.num_points(),
            found: x.len(),
        });
    }
    let mut total = T::zero();
    for v in x {
        total += v;
    }
    if total.is_zero() {
        return Err(Error::ZeroSum);
    }
    let c: Vec<T> = x.iter().map(|v| v.clone() / total.clone()).collect();
    Ok(convex_combination(p, &c))
}

/// `(w_j t^{m_j} / sum_k w_k t^{m_k})_j` for strictly positive `t`.
pub fn monomial_param<T: Scalar>(p: &LatticePolytope, w: &[Rational], t: &[T]) -> Result<Vec<T>> {
    check_weights(p, w)?;
    p.check_dim(t.len())?;
    if t.iter().any(|x| *x <= T::zero()) {
        return Err(Error::InvalidData(
            "torus point must be strictly positive".into(),
        ));
    }
    let mut vals: Vec<T> = p
        .lattice_points()
        .iter()
        .zip(w)
        .map(|(m, wj)| {
            let mut v = T::from_rational(wj);
            for (tk, &mk) in t.iter().zip(m) {
                v *= &tk.powi_exact(mk);
            }
            v
        })
        .collect();
    let mut total = T::zero();
    for v in &vals {
        total += v;
    }
    for v in vals.iter_mut() {
        *v = v.clone() / total.clone();
    }
    Ok(vals)
}

/// Integer basis of `{v : sum_j v_j = 0, sum_j v_j m_j = 0}`, the affine
/// relations among the lattice points.
pub fn affine_relations(p: &LatticePolytope) -> Vec<Vec<i64>> {
    let s = p.num_points();
    let mut rows = vec![vec![1i64; s]];
    for k in 0..p.dim() {
        rows.push(p.lattice_points().iter().map(|m| m[k]).collect());
    }
    RationalMatrix::from_i64_rows(s, &rows)
        .kernel_basis()
        .into_iter()
        .map(|v| {
            crate::polyalg::primitive_integer(&v)
                .into_iter()
                .map(|x| i64::try_from(x).expect("relation entries fit in i64"))
                .collect()
        })
        .collect()
}

/// Exact check that `prod_j (x_j / w_j)^{v_j} = 1` for every affine relation.
pub fn satisfies_model_exact(p: &LatticePolytope, w: &[Rational], x: &[Rational]) -> bool {
    affine_relations(p).iter().all(|v| {
        let mut acc = rat(1);
        for ((xj, wj), &vj) in x.iter().zip(w).zip(v) {
            acc *= (xj / wj).powi_exact(vj);
        }
        acc == rat(1)
    })
}

/// Largest `|sum_j v_j log(x_j / w_j)|` over the affine relations.
pub fn model_membership_residual(p: &LatticePolytope, w: &[Rational], x: &[f64]) -> f64 {
    affine_relations(p)
        .iter()
        .map(|v| {
            x.iter()
                .zip(w)
                .zip(v)
                .map(|((xj, wj), &vj)| vj as f64 * (xj / wj.as_f64()).ln())
                .sum::<f64>()
                .abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests;
