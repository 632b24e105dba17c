use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::mle::{closed_form_unchecked, mle_newton, NEWTON_TOL};
use crate::error::{Error, Result};
use crate::polyalg::{format_rational, rat, serde_rational_vec, Rational, Scalar};
use crate::polytope::LatticePolytope;
use crate::precision::{check_slp, check_weights};
use crate::sampling::Sampler;

/// Integer matrix with zero column sums and one nonzero constant per column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHorn")]
pub struct HornMatrix {
    rows: Vec<Vec<i64>>,
    #[serde(with = "serde_rational_vec")]
    constants: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawHorn {
    rows: Vec<Vec<i64>>,
    #[serde(with = "serde_rational_vec")]
    constants: Vec<Rational>,
}

impl TryFrom<RawHorn> for HornMatrix {
    type Error = Error;
    fn try_from(r: RawHorn) -> Result<Self> {
        HornMatrix::new(r.rows, r.constants)
    }
}

impl HornMatrix {
    /// Validates shape, zero column sums and nonzero constants; zero rows are
    /// dropped.
    pub fn new(rows: Vec<Vec<i64>>, constants: Vec<Rational>) -> Result<Self> {
        let s = constants.len();
        for r in &rows {
            if r.len() != s {
                return Err(Error::DimensionMismatch {
                    expected: s,
                    found: r.len(),
                });
            }
        }
        if (0..s).any(|j| rows.iter().map(|r| r[j]).sum::<i64>() != 0) {
            return Err(Error::NonHorn);
        }
        if constants.iter().any(Zero::is_zero) {
            return Err(Error::InvalidParameters(
                "Horn constants must be nonzero".into(),
            ));
        }
        let rows = rows
            .into_iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect();
        Ok(HornMatrix { rows, constants })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn constants(&self) -> &[Rational] {
        &self.constants
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.constants.len()
    }

    /// True when no two rows are proportional.
    pub fn is_minimal(&self) -> bool {
        let dirs: Vec<Vec<i64>> = self.rows.iter().map(|r| primitive_direction(r).0).collect();
        (0..dirs.len()).all(|a| (a + 1..dirs.len()).all(|b| dirs[a] != dirs[b]))
    }
}

/// Splits a nonzero row as `lambda * dir` with `dir` primitive and its first
/// nonzero entry positive.
fn primitive_direction(row: &[i64]) -> (Vec<i64>, i64) {
    let g = row.iter().fold(0i64, |g, &x| g.gcd(&x));
    let lead = row.iter().find(|&&x| x != 0).copied().unwrap_or(1);
    let lambda = if lead < 0 { -g } else { g };
    (row.iter().map(|&x| x / lambda).collect(), lambda)
}

/// The Horn matrix of a pair with strict linear precision: the lattice-distance
/// rows, a last row of `-a_P`, and constants `(w_j / c)(-a_P)^{a_P}`.
pub fn horn_matrix_slp(p: &LatticePolytope, w: &[Rational]) -> Result<HornMatrix> {
    if p.facet_normal_sum().iter().any(|&x| x != 0) {
        return Err(Error::NormalSumNonzero);
    }
    let report = check_slp(p, w)?;
    let c = report
        .constant_c
        .filter(|_| report.verdict)
        .ok_or(Error::NotSlp)?;
    let a_p = p.offset_sum();
    let s = p.num_points();
    let mut rows: Vec<Vec<i64>> = p
        .distance_matrix()
        .iter()
        .map(|r| r.iter().map(|&x| x as i64).collect())
        .collect();
    rows.push(vec![-a_p; s]);
    let scale = rat(-a_p).powi_exact(a_p) / c;
    let constants = w.iter().map(|wj| wj * &scale).collect();
    HornMatrix::new(rows, constants)
}

/// Merges proportional rows into one row per line and rescales the constants
/// so that the parametrization is unchanged.
///
/// Rows `lambda_b * r` on a common primitive line `r` become the single row
/// `Lambda * r` with `Lambda = sum_b lambda_b`, and column `j` gains the
/// factor `prod_b lambda_b^{lambda_b r_j} / Lambda^{Lambda r_j}`. A line with
/// `Lambda = 0` contributes only the first factor and no row.
pub fn minimal_horn(h: &HornMatrix) -> Result<HornMatrix> {
    let s = h.num_cols();
    if (0..s).any(|j| h.rows.iter().map(|r| r[j]).sum::<i64>() != 0) {
        return Err(Error::NonHorn);
    }
    let mut groups: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for row in &h.rows {
        let (dir, lambda) = primitive_direction(row);
        match groups.iter_mut().find(|(d, _)| *d == dir) {
            Some((_, ls)) => ls.push(lambda),
            None => groups.push((dir, vec![lambda])),
        }
    }
    let mut constants = h.constants.clone();
    let mut rows = Vec::with_capacity(groups.len());
    for (dir, lambdas) in groups {
        if lambdas.len() == 1 {
            rows.push(dir.iter().map(|x| x * lambdas[0]).collect());
            continue;
        }
        let total: i64 = lambdas.iter().sum();
        for (j, dj) in constants.iter_mut().enumerate() {
            for &l in &lambdas {
                *dj *= rat(l).powi_exact(l * dir[j]);
            }
            if total != 0 {
                *dj /= rat(total).powi_exact(total * dir[j]);
            }
        }
        if total != 0 {
            rows.push(dir.iter().map(|x| x * total).collect());
        }
    }
    HornMatrix::new(rows, constants)
}

/// `H(u)_j = d_j prod_k l_k(u)^{b_kj}` with `l_k(u) = sum_j b_kj u_j` and
/// `0^0 = 1`.
pub fn horn_eval<T: Scalar>(h: &HornMatrix, u: &[T]) -> Result<Vec<T>> {
    if u.len() != h.num_cols() {
        return Err(Error::DimensionMismatch {
            expected: h.num_cols(),
            found: u.len(),
        });
    }
    let forms: Vec<T> = h
        .rows
        .iter()
        .map(|r| {
            let mut acc = T::zero();
            for (&b, x) in r.iter().zip(u) {
                if b != 0 {
                    let mut t = T::from_int(b);
                    t *= x;
                    acc += &t;
                }
            }
            acc
        })
        .collect();
    (0..h.num_cols())
        .map(|j| {
            let mut v = T::from_rational(&h.constants[j]);
            for (k, (r, l)) in h.rows.iter().zip(&forms).enumerate() {
                let b = r[j];
                if b < 0 && l.is_zero() {
                    return Err(Error::PoleAtInput(k));
                }
                v *= &l.powi_exact(b);
            }
            Ok(v)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    /// Compared exactly with the closed-form estimate.
    Exact,
    /// Compared with the Newton estimate within a tolerance.
    Newton,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HornTrial {
    #[serde(with = "serde_rational_vec")]
    pub u: Vec<Rational>,
    /// Max-norm distance to the estimate; `0` means exact agreement.
    pub residual: f64,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HornVerification {
    pub mode: VerifyMode,
    pub tol: f64,
    pub trials: Vec<HornTrial>,
    pub max_residual: f64,
    pub passed: bool,
}

/// Compares `horn_eval(h, u)` with the maximum-likelihood estimate at
/// `trials` seeded random data vectors.
pub fn verify_horn(
    h: &HornMatrix,
    p: &LatticePolytope,
    w: &[Rational],
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<HornVerification> {
    check_weights(p, w)?;
    if h.num_cols() != p.num_points() {
        return Err(Error::DimensionMismatch {
            expected: p.num_points(),
            found: h.num_cols(),
        });
    }
    let exact = check_slp(p, w)?.verdict;
    let mut sampler = Sampler::new(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let u = sampler.rational_vec(p.num_points());
        let trial = if exact {
            match (horn_eval(h, &u), closed_form_unchecked(p, w, &u)) {
                (Ok(hv), Ok(m)) => {
                    let residual = hv
                        .iter()
                        .zip(&m.estimate)
                        .map(|(a, b)| (a - b).abs().as_f64())
                        .fold(0.0, f64::max);
                    HornTrial {
                        passed: hv == m.estimate,
                        residual,
                        u,
                        error: None,
                    }
                }
                (Err(e), _) | (_, Err(e)) => failed_trial(u, e),
            }
        } else {
            let uf: Vec<f64> = u.iter().map(Scalar::as_f64).collect();
            match (horn_eval(h, &u), mle_newton(p, w, &uf, NEWTON_TOL)) {
                (Ok(hv), Ok(m)) => {
                    let residual = hv
                        .iter()
                        .zip(&m.estimate)
                        .map(|(a, b)| (a.as_f64() - b).abs())
                        .fold(0.0, f64::max);
                    HornTrial {
                        passed: residual <= tol,
                        residual,
                        u,
                        error: None,
                    }
                }
                (Err(e), _) | (_, Err(e)) => failed_trial(u, e),
            }
        };
        out.push(trial);
    }
    let max_residual = out.iter().map(|t| t.residual).fold(0.0, f64::max);
    let passed = out.iter().all(|t| t.passed);
    Ok(HornVerification {
        mode: if exact {
            VerifyMode::Exact
        } else {
            VerifyMode::Newton
        },
        tol,
        trials: out,
        max_residual,
        passed,
    })
}

fn failed_trial(u: Vec<Rational>, e: Error) -> HornTrial {
    HornTrial {
        u,
        residual: f64::INFINITY,
        passed: false,
        error: Some(e.to_string()),
    }
}

/// How one primitive collection's summed distance row relates to the
/// negative rows of a Horn matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollectionRowMatch {
    pub collection: Vec<usize>,
    /// `-(sum_{i in S} h_i(m_j))_j`.
    pub negated_sum: Vec<i64>,
    /// Index into `negative_rows` of an equal row, if any.
    pub matching_row: Option<usize>,
    /// Index into `negative_rows` of a positive multiple of `negated_sum`.
    pub proportional_row: Option<usize>,
}

/// Side-by-side comparison of a Horn matrix with the lattice-distance matrix
/// and the primitive collections of a polytope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HornStructureReport {
    pub nonnegative_rows: Vec<Vec<i64>>,
    pub negative_rows: Vec<Vec<i64>>,
    pub mixed_rows: Vec<Vec<i64>>,
    /// Nonnegative rows equal the lattice-distance rows as a multiset.
    pub nonnegative_block_is_distance_matrix: bool,
    pub collections: Vec<CollectionRowMatch>,
    pub constants: Vec<String>,
}

/// `row = lambda * v` for some integer `lambda >= 1`.
fn is_positive_multiple(row: &[i64], v: &[i64]) -> bool {
    let Some(k) = v.iter().position(|&x| x != 0) else {
        return false;
    };
    if row[k] % v[k] != 0 || row[k] / v[k] < 1 {
        return false;
    }
    let lambda = row[k] / v[k];
    row.iter().zip(v).all(|(r, x)| *r == lambda * x)
}

pub fn horn_structure_report(h: &HornMatrix, p: &LatticePolytope) -> Result<HornStructureReport> {
    if h.num_cols() != p.num_points() {
        return Err(Error::DimensionMismatch {
            expected: p.num_points(),
            found: h.num_cols(),
        });
    }
    let mut nonneg = Vec::new();
    let mut neg = Vec::new();
    let mut mixed = Vec::new();
    for r in &h.rows {
        if r.iter().all(|&x| x >= 0) {
            nonneg.push(r.clone());
        } else if r.iter().all(|&x| x <= 0) {
            neg.push(r.clone());
        } else {
            mixed.push(r.clone());
        }
    }
    let dist: Vec<Vec<i64>> = p
        .distance_matrix()
        .iter()
        .map(|r| r.iter().map(|&x| x as i64).collect())
        .collect();
    let mut a = nonneg.clone();
    let mut b = dist.clone();
    a.sort();
    b.sort();
    let collections = p
        .primitive_collections()
        .into_iter()
        .map(|c| {
            let negated_sum: Vec<i64> = (0..p.num_points())
                .map(|j| -c.iter().map(|&i| dist[i][j]).sum::<i64>())
                .collect();
            let matching_row = neg.iter().position(|r| *r == negated_sum);
            let proportional_row = neg
                .iter()
                .position(|r| is_positive_multiple(r, &negated_sum));
            CollectionRowMatch {
                collection: c,
                negated_sum,
                matching_row,
                proportional_row,
            }
        })
        .collect();
    Ok(HornStructureReport {
        nonnegative_block_is_distance_matrix: a == b,
        nonnegative_rows: nonneg,
        negative_rows: neg,
        mixed_rows: mixed,
        collections,
        constants: h.constants.iter().map(format_rational).collect(),
    })
}
