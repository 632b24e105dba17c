//! Toric blending functions `beta_j = prod_i h_i^{h_i(m_j)}`, the map `K_w`
//! and the exact strict-linear-precision decision and weight solver.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyalg::{
    positive_kernel_point, rat, serde_rational_opt, Exponent, MultiPoly, Rational, RationalMatrix,
    Scalar,
};
use crate::polytope::LatticePolytope;

/// Outcome of the exact strict-linear-precision test for a weighted polytope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlpReport {
    pub n_p: Vec<i64>,
    pub beta_w: MultiPoly,
    pub is_constant: bool,
    #[serde(with = "serde_rational_opt")]
    pub constant_c: Option<Rational>,
    pub verdict: bool,
}

/// Result of searching for weights with strict linear precision.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSolution {
    /// Primitive positive integer weights.
    Found(Vec<Rational>),
    /// The facet normals do not sum to zero, so no weights exist.
    NormalSumNonzero(Vec<i64>),
    /// `{M w = 0, w >= 1}` is infeasible for the non-constant coefficient system.
    Infeasible,
}

impl WeightSolution {
    pub fn weights(&self) -> Option<&[Rational]> {
        match self {
            WeightSolution::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Checks that `w` has one strictly positive entry per lattice point.
pub fn check_weights(p: &LatticePolytope, w: &[Rational]) -> Result<()> {
    if w.len() != p.num_points() {
        return Err(Error::InvalidWeights(format!(
            "expected {} weights, found {}",
            p.num_points(),
            w.len()
        )));
    }
    if let Some(j) = w.iter().position(|x| !x.is_positive()) {
        return Err(Error::InvalidWeights(format!("weight {j} is not positive")));
    }
    Ok(())
}

/// Exact `<p, n_i> + a_i`.
pub fn lattice_distance(p: &LatticePolytope, i: usize, x: &[Rational]) -> Result<Rational> {
    p.lattice_distance(i, x)
}

fn facet_forms(p: &LatticePolytope) -> Vec<MultiPoly> {
    p.facets()
        .iter()
        .map(|f| {
            let coeffs: Vec<Rational> = f.normal.iter().map(|&n| rat(n)).collect();
            MultiPoly::affine(&coeffs, rat(f.offset))
        })
        .collect()
}

fn beta_from_forms(p: &LatticePolytope, forms: &[MultiPoly], j: usize) -> MultiPoly {
    let dist = p.distance_matrix();
    forms
        .iter()
        .enumerate()
        .fold(MultiPoly::one(p.dim()), |acc, (i, h)| {
            &acc * &h.pow(dist[i][j])
        })
}

/// The expanded blending polynomial `beta_j`.
pub fn beta_poly(p: &LatticePolytope, j: usize) -> Result<MultiPoly> {
    if j >= p.num_points() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: p.num_points(),
        });
    }
    Ok(beta_from_forms(p, &facet_forms(p), j))
}

/// All `beta_j` in lattice-point order.
pub fn beta_polys(p: &LatticePolytope) -> Vec<MultiPoly> {
    let forms = facet_forms(p);
    (0..p.num_points())
        .map(|j| beta_from_forms(p, &forms, j))
        .collect()
}

/// The expanded `beta_w = sum_j w_j beta_j`.
pub fn beta_w_poly(p: &LatticePolytope, w: &[Rational]) -> Result<MultiPoly> {
    check_weights(p, w)?;
    Ok(beta_polys(p)
        .iter()
        .zip(w)
        .fold(MultiPoly::zero(p.dim()), |acc, (b, wj)| &acc + &b.scale(wj)))
}

/// `beta_j(x)` evaluated as a product of lattice distances, with `0^0 = 1`.
pub fn beta_eval<T: Scalar>(p: &LatticePolytope, j: usize, x: &[T]) -> T {
    let dist = p.distance_matrix();
    p.facets()
        .iter()
        .enumerate()
        .fold(T::one(), |mut acc, (i, f)| {
            acc *= &f.distance(x).powi_exact(dist[i][j] as i64);
            acc
        })
}

/// `(w_j beta_j(x) / beta_w(x))_j`, a partition of unity on the polytope.
pub fn normalized_blending<T: Scalar>(
    p: &LatticePolytope,
    w: &[Rational],
    x: &[T],
) -> Result<Vec<T>> {
    check_weights(p, w)?;
    p.check_dim(x.len())?;
    let mut vals: Vec<T> = (0..p.num_points())
        .map(|j| {
            let mut v = beta_eval(p, j, x);
            v *= &T::from_rational(&w[j]);
            v
        })
        .collect();
    let mut total = T::zero();
    for v in &vals {
        total += v;
    }
    if total.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    for v in vals.iter_mut() {
        *v = v.clone() / total.clone();
    }
    Ok(vals)
}

/// `K_w(x) = sum_j w_j beta_j(x) m_j / beta_w(x)`.
pub fn k_w_eval<T: Scalar>(p: &LatticePolytope, w: &[Rational], x: &[T]) -> Result<Vec<T>> {
    let b = normalized_blending(p, w, x)?;
    Ok(convex_combination(p, &b))
}

/// `sum_j c_j m_j`.
pub(crate) fn convex_combination<T: Scalar>(p: &LatticePolytope, c: &[T]) -> Vec<T> {
    (0..p.dim())
        .map(|k| {
            let mut acc = T::zero();
            for (m, cj) in p.lattice_points().iter().zip(c) {
                if m[k] != 0 {
                    let mut t = T::from_int(m[k]);
                    t *= cj;
                    acc += &t;
                }
            }
            acc
        })
        .collect()
}

/// Decides strict linear precision exactly: `n_P = 0` and `beta_w` expands to
/// a nonzero constant.
pub fn check_slp(p: &LatticePolytope, w: &[Rational]) -> Result<SlpReport> {
    let n_p = p.facet_normal_sum();
    let beta_w = beta_w_poly(p, w)?;
    let is_constant = beta_w.is_constant() && !beta_w.is_zero();
    let constant_c = is_constant.then(|| beta_w.constant_term());
    let verdict = is_constant && n_p.iter().all(|&x| x == 0);
    Ok(SlpReport {
        n_p,
        beta_w,
        is_constant,
        constant_c,
        verdict,
    })
}

/// The linear system whose kernel vectors are weights making `beta_w`
/// constant: one row per non-constant monomial of some `beta_j`.
pub fn nonconstant_system(p: &LatticePolytope) -> RationalMatrix {
    let betas = beta_polys(p);
    let mut rows: BTreeMap<Exponent, Vec<Rational>> = BTreeMap::new();
    for (j, b) in betas.iter().enumerate() {
        for (e, c) in b.terms() {
            if e.is_constant() {
                continue;
            }
            rows.entry(e.clone())
                .or_insert_with(|| vec![Rational::zero(); betas.len()])[j] = c.clone();
        }
    }
    RationalMatrix::from_rows(betas.len(), rows.into_values().collect())
}

/// Finds weights with strict linear precision, or certifies that none exist.
pub fn solve_slp_weights(p: &LatticePolytope) -> WeightSolution {
    let n_p = p.facet_normal_sum();
    if n_p.iter().any(|&x| x != 0) {
        return WeightSolution::NormalSumNonzero(n_p);
    }
    match positive_kernel_point(&nonconstant_system(p)) {
        Some(w) => WeightSolution::Found(w),
        None => WeightSolution::Infeasible,
    }
}
