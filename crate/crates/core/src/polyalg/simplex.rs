//! Exact phase-1 simplex for the feasibility problem `{M v = 0, v >= 1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::RationalMatrix;
use super::rational::Rational;

/// Finds `v` with `M v = 0` and every coordinate `>= 1`, or `None` when the
/// system is infeasible.
///
/// Substitutes `v = 1 + x` and runs phase 1 with one artificial per row under
/// Bland's rule, so the search terminates and the answer is a certificate in
/// both directions. A returned vector is rescaled to the primitive positive
/// integer vector on its ray.
pub fn positive_kernel_point(m: &RationalMatrix) -> Option<Vec<Rational>> {
    let n = m.cols();
    // Same kernel with at most `n` rows, which keeps the tableau small.
    let (r, pivots) = m.rref();
    let m = &RationalMatrix::from_rows(n, (0..pivots.len()).map(|i| r.row(i).to_vec()).collect());
    let ones = vec![Rational::one(); n];
    let rhs: Vec<Rational> = m.mul_vec(&ones).into_iter().map(|x| -x).collect();
    let x = phase_one(m, &rhs)?;
    let v: Vec<Rational> = x.into_iter().map(|xi| xi + Rational::one()).collect();
    Some(primitive_positive(&v))
}

/// Returns some `x >= 0` with `A x = b`, or `None` if none exists.
fn phase_one(a: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let (rows, n) = (a.rows(), a.cols());
    let width = n + rows;
    // Tableau rows: [A | I | b] with b made non-negative.
    let mut t: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut r = Vec::with_capacity(width + 1);
            for j in 0..n {
                let v = a[(i, j)].clone();
                r.push(if flip { -v } else { v });
            }
            for k in 0..rows {
                r.push(if k == i {
                    Rational::one()
                } else {
                    Rational::zero()
                });
            }
            r.push(if flip { -b[i].clone() } else { b[i].clone() });
            r
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();

    // Reduced costs of the phase-1 objective sum(artificials); last entry holds
    // minus the objective value.
    let mut cost = vec![Rational::zero(); width + 1];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width] -= &row[width];
    }

    // Bland: lowest-index column with negative reduced cost enters.
    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // The phase-1 objective is bounded below by zero, so a pivot row exists.
        let (pr, _) = leave.expect("phase-1 objective cannot be unbounded");
        pivot(&mut t, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    if !cost[width].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], cost: &mut [Rational], pr: usize, pc: usize) {
    let inv = Rational::one() / &t[pr][pc];
    for v in t[pr].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = t[pr].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, p) in row.iter_mut().zip(&pivot_row) {
            *v -= p * &f;
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            *v -= p * &f;
        }
    }
}

/// Scales a strictly positive rational vector to the primitive integer vector
/// on the same ray.
pub fn primitive_positive(v: &[Rational]) -> Vec<Rational> {
    primitive_integer(v)
        .into_iter()
        .map(Rational::from_integer)
        .collect()
}

/// Clears denominators and divides by the content; the zero vector maps to
/// itself.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &gcd).collect()
}
