use super::*;
use crate::catalog;
use crate::polyalg::ratio;
use crate::sampling::Sampler;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

fn sum(v: &[Rational]) -> Rational {
    v.iter().fold(rat(0), |a, x| a + x)
}

/// Products of marginals for the unit square, data normalized to sum 1.
fn square_oracle(u: &[Rational]) -> Vec<Rational> {
    let (u1, u2, u3, u4) = (&u[0], &u[1], &u[2], &u[3]);
    vec![
        (u1 + u3) * (u1 + u2),
        (u2 + u4) * (u1 + u2),
        (u3 + u4) * (u1 + u3),
        (u2 + u4) * (u3 + u4),
    ]
}

/// Closed-form estimate for the (1,1,1) trapezoid with weights (1,2,1,1,1).
fn trapezoid_oracle(u: &[f64]) -> Vec<f64> {
    let up: f64 = u.iter().sum();
    let (u1, u2, u3, u4, u5) = (u[0], u[1], u[2], u[3], u[4]);
    let x = 2.0 * u1 + 2.0 * u2 + 2.0 * u3 + u4 + u5;
    let a = 2.0 * u1 + u2 + u4;
    let b = u2 + 2.0 * u3 + u5;
    let c = u1 + u2 + u3;
    vec![
        a * a * c / (up * x * x),
        2.0 * b * a * c / (up * x * x),
        b * b * c / (up * x * x),
        (u4 + u5) * a / (up * x),
        b * (u4 + u5) / (up * x),
    ]
}

/// Closed-form estimate for the graphical model, data normalized to sum 1.
fn graphical_oracle(u: &[f64]) -> Vec<f64> {
    let up: f64 = u.iter().sum();
    let u: Vec<f64> = u.iter().map(|x| x / up).collect();
    let s12 = u[0] + u[1] + u[4] + u[5];
    let s34 = u[2] + u[3] + u[6] + u[7];
    vec![
        (u[0] + u[1]) * (u[0] + u[4]) / s12,
        (u[0] + u[1]) * (u[1] + u[5]) / s12,
        (u[2] + u[3]) * (u[2] + u[6]) / s34,
        (u[2] + u[3]) * (u[3] + u[7]) / s34,
        (u[0] + u[4]) * (u[4] + u[5]) / s12,
        (u[1] + u[5]) * (u[4] + u[5]) / s12,
        (u[2] + u[6]) * (u[6] + u[7]) / s34,
        (u[3] + u[7]) * (u[6] + u[7]) / s34,
    ]
}

pub(crate) fn square_horn() -> HornMatrix {
    HornMatrix::new(
        vec![
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 1],
            vec![1, 0, 1, 0],
            vec![1, 1, 0, 0],
            vec![-2, -2, -2, -2],
        ],
        ints(&[4, 4, 4, 4]),
    )
    .unwrap()
}

fn trapezoid_horn() -> HornMatrix {
    HornMatrix::new(
        vec![
            vec![0, 1, 2, 0, 1],
            vec![0, 0, 0, 1, 1],
            vec![2, 1, 0, 1, 0],
            vec![1, 1, 1, 0, 0],
            vec![-1, -1, -1, -1, -1],
            vec![-2, -2, -2, -1, -1],
        ],
        ints(&[-1, -2, -1, 1, 1]),
    )
    .unwrap()
}

fn graphical_horn() -> HornMatrix {
    let mut rows: Vec<Vec<i64>> = catalog::graphical()
        .polytope
        .distance_matrix()
        .iter()
        .map(|r| r.iter().map(|&x| x as i64).collect())
        .collect();
    rows.push(vec![-1; 8]);
    rows.push(vec![-1, -1, 0, 0, -1, -1, 0, 0]);
    rows.push(vec![0, 0, -1, -1, 0, 0, -1, -1]);
    HornMatrix::new(rows, ints(&[1; 8])).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(Scalar::as_f64).collect()
}

#[test]
fn tau_on_square() {
    let sq = catalog::square().polytope;
    let u = [ratio(1, 10), ratio(2, 10), ratio(3, 10), ratio(4, 10)];
    assert_eq!(tau_a(&sq, &u).unwrap(), vec![ratio(6, 10), ratio(7, 10)]);
    assert_eq!(tau_a(&sq, &ints(&[0, 0, 0, 0])), Err(Error::ZeroSum));
    assert!(tau_a(&sq, &ints(&[1, 1])).is_err());
}

#[test]
fn tau_of_unit_vectors_and_uniform() {
    let f = catalog::simplex(2, 2).unwrap();
    let p = &f.polytope;
    for j in 0..p.num_points() {
        let mut e = ints(&vec![0; p.num_points()]);
        e[j] = rat(1);
        let m: Vec<Rational> = p.lattice_points()[j].iter().map(|&x| rat(x)).collect();
        assert_eq!(tau_a(p, &e).unwrap(), m);
    }
    let uniform = ints(&vec![1; p.num_points()]);
    assert_eq!(tau_a(p, &uniform).unwrap(), vec![ratio(2, 3), ratio(2, 3)]);
}

#[test]
fn monomial_param_examples() {
    let sq = catalog::square().polytope;
    let (s, t) = (ratio(2, 3), ratio(5, 7));
    let got = monomial_param(&sq, &ints(&[1; 4]), &[s.clone(), t.clone()]).unwrap();
    let z = rat(1) + &s + &t + &s * &t;
    assert_eq!(got, vec![rat(1) / &z, &s / &z, &t / &z, &s * &t / &z]);

    let g = catalog::graphical();
    let ones = monomial_param(&g.polytope, &g.weights, &[1.0; 5]).unwrap();
    assert!(ones.iter().all(|x| (x - 0.125).abs() < 1e-15));

    // (1, t1, t5, t3t5, t2, t1t2, t4t5, t3t4t5), normalized
    let t = [1.5, 0.5, 2.0, 3.0, 0.25];
    let raw = [
        1.0,
        t[0],
        t[4],
        t[2] * t[4],
        t[1],
        t[0] * t[1],
        t[3] * t[4],
        t[2] * t[3] * t[4],
    ];
    let z: f64 = raw.iter().sum();
    let want: Vec<f64> = raw.iter().map(|x| x / z).collect();
    assert!(max_diff(&monomial_param(&g.polytope, &g.weights, &t).unwrap(), &want) < 1e-15);
    assert!(monomial_param(&g.polytope, &g.weights, &[1.0, 0.0, 1.0, 1.0, 1.0]).is_err());
}

#[test]
fn square_closed_form_matches_marginal_products() {
    let f = catalog::square();
    let mut s = Sampler::new(2);
    for _ in 0..20 {
        let u = s.normalized_data(4);
        let r = mle_closed_form(&f.polytope, &f.weights, &u).unwrap();
        assert_eq!(r.estimate, square_oracle(&u));
        assert!(r.residual.is_zero());
        assert_eq!(r.method, MleMethod::ClosedForm);
    }
}

#[test]
fn closed_form_edge_cases() {
    let f = catalog::simplex(2, 1).unwrap();
    let r = mle_closed_form(&f.polytope, &f.weights, &ints(&[1, 1, 1])).unwrap();
    assert_eq!(r.estimate, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]);
    let t = catalog::trapezoid(1, 1, 1).unwrap();
    assert_eq!(
        mle_closed_form(&t.polytope, &t.weights, &ints(&[1; 5])),
        Err(Error::NotSlp)
    );
    // Data must be strictly positive.
    assert!(mle_closed_form(&f.polytope, &f.weights, &ints(&[3, 0, 0])).is_err());
}

#[test]
fn vertex_blending_is_unit_vector() {
    let f = catalog::square();
    let one = ints(&[1, 0]);
    let b = crate::precision::normalized_blending(&f.polytope, &f.weights, &one).unwrap();
    assert_eq!(b, ints(&[0, 1, 0, 0]));
}

#[test]
fn trapezoid_newton_matches_closed_form() {
    let f = catalog::trapezoid(1, 1, 1).unwrap();
    let mut s = Sampler::new(4);
    for _ in 0..20 {
        let u = s.rational_vec(5);
        let r = mle_newton(&f.polytope, &f.weights, &u, NEWTON_TOL).unwrap();
        assert!(max_diff(&r.estimate, &trapezoid_oracle(&to_f64(&u))) < 1e-10);
        assert!(r.residual <= NEWTON_TOL);
    }
}

#[test]
fn graphical_newton_matches_closed_form() {
    let f = catalog::graphical();
    let mut s = Sampler::new(5);
    for _ in 0..20 {
        let u = to_f64(&s.rational_vec(8));
        let r = mle_newton(&f.polytope, &f.weights, &u, NEWTON_TOL).unwrap();
        assert!(max_diff(&r.estimate, &graphical_oracle(&u)) < 1e-10);
    }
}

#[test]
fn newton_agrees_with_closed_form_under_slp() {
    for f in [catalog::square(), catalog::simplex(2, 2).unwrap()] {
        let mut s = Sampler::new(6);
        for _ in 0..10 {
            let u = s.rational_vec(f.polytope.num_points());
            let exact = mle_closed_form(&f.polytope, &f.weights, &u).unwrap();
            let newton = mle_newton(&f.polytope, &f.weights, &u, NEWTON_TOL).unwrap();
            assert!(max_diff(&to_f64(&exact.estimate), &newton.estimate) < 1e-10);
        }
    }
}

#[test]
fn newton_rejects_bad_data() {
    let f = catalog::square();
    assert!(matches!(
        mle_newton(&f.polytope, &f.weights, &[1.0, 0.0, 1.0], 1e-12),
        Err(Error::InvalidData(_))
    ));
    assert!(matches!(
        mle_newton(&f.polytope, &f.weights, &[1.0, -1.0, 1.0, 1.0], 1e-12),
        Err(Error::InvalidData(_))
    ));
}

#[test]
fn affine_relations_of_graphical_model() {
    let g = catalog::graphical().polytope;
    let rels = affine_relations(&g);
    assert_eq!(rels.len(), 2);
    // m2 + m5 = m1 + m6 and m4 + m7 = m3 + m8 span the same lattice.
    let b1 = [-1i64, 1, 0, 0, 1, -1, 0, 0];
    let b2 = [0i64, 0, -1, 1, 0, 0, 1, -1];
    let in_span = |v: &[i64]| {
        let m = crate::polyalg::RationalMatrix::from_i64_rows(
            8,
            &[rels[0].clone(), rels[1].clone(), v.to_vec()],
        );
        m.rank() == 2
    };
    assert!(in_span(&b1) && in_span(&b2));
}

#[test]
fn horn_matrix_for_slp_pairs() {
    let sq = catalog::square();
    assert_eq!(
        horn_matrix_slp(&sq.polytope, &sq.weights).unwrap(),
        square_horn()
    );
    let seg = catalog::simplex(2, 1).unwrap();
    let h = horn_matrix_slp(&seg.polytope, &seg.weights).unwrap();
    assert_eq!(h.rows(), &[vec![2, 1, 0], vec![0, 1, 2], vec![-2, -2, -2]]);
    assert_eq!(h.constants(), ints(&[1, 2, 1]).as_slice());
    let t = catalog::trapezoid(1, 1, 1).unwrap();
    assert_eq!(
        horn_matrix_slp(&t.polytope, &t.weights),
        Err(Error::NormalSumNonzero)
    );
    let g = catalog::graphical();
    assert_eq!(horn_matrix_slp(&g.polytope, &g.weights), Err(Error::NotSlp));
}

#[test]
fn horn_matrix_slp_constants_formula() {
    for f in [
        catalog::simplex(3, 1).unwrap(),
        catalog::simplex(2, 2).unwrap(),
        catalog::simplex(1, 3).unwrap(),
    ] {
        let h = horn_matrix_slp(&f.polytope, &f.weights).unwrap();
        let c = crate::precision::check_slp(&f.polytope, &f.weights)
            .unwrap()
            .constant_c
            .unwrap();
        let a = f.polytope.offset_sum();
        for (d, w) in h.constants().iter().zip(&f.weights) {
            assert_eq!(*d, w / &c * rat(-a).powi_exact(a));
        }
        for j in 0..h.num_cols() {
            assert_eq!(h.rows().iter().map(|r| r[j]).sum::<i64>(), 0);
        }
    }
}

#[test]
fn square_horn_reproduces_estimate() {
    let h = square_horn();
    let mut s = Sampler::new(8);
    for _ in 0..20 {
        let u = s.normalized_data(4);
        assert_eq!(horn_eval(&h, &u).unwrap(), square_oracle(&u));
    }
}

#[test]
fn trapezoid_horn_reproduces_closed_form() {
    let h = trapezoid_horn();
    let mut s = Sampler::new(9);
    for _ in 0..20 {
        let u = s.rational_vec(5);
        let got = to_f64(&horn_eval(&h, &u).unwrap());
        assert!(max_diff(&got, &trapezoid_oracle(&to_f64(&u))) < 1e-14);
    }
    assert!(h.is_minimal());
}

#[test]
fn verify_horn_on_fixtures() {
    let sq = catalog::square();
    let v = verify_horn(&square_horn(), &sq.polytope, &sq.weights, 20, 1e-9, 1).unwrap();
    assert!(v.passed && v.mode == VerifyMode::Exact && v.max_residual == 0.0);

    let t = catalog::trapezoid(1, 1, 1).unwrap();
    let v = verify_horn(&trapezoid_horn(), &t.polytope, &t.weights, 20, 1e-9, 1).unwrap();
    assert!(v.passed && v.mode == VerifyMode::Newton);

    let g = catalog::graphical();
    let v = verify_horn(&graphical_horn(), &g.polytope, &g.weights, 20, 1e-9, 1).unwrap();
    assert!(v.passed, "max residual {}", v.max_residual);

    // A wrong constant is caught.
    let bad = HornMatrix::new(square_horn().rows().to_vec(), ints(&[4, 4, 4, 5])).unwrap();
    assert!(
        !verify_horn(&bad, &sq.polytope, &sq.weights, 5, 1e-9, 1)
            .unwrap()
            .passed
    );
}

#[test]
fn horn_validation() {
    assert_eq!(
        HornMatrix::new(vec![vec![1, 1]], ints(&[1, 1])),
        Err(Error::NonHorn)
    );
    assert!(HornMatrix::new(vec![vec![1]], ints(&[1, 1])).is_err());
    assert!(HornMatrix::new(vec![vec![1, -1], vec![-1, 1]], ints(&[1, 0])).is_err());
    let h = HornMatrix::new(vec![vec![0, 0], vec![1, -1], vec![-1, 1]], ints(&[1, 1])).unwrap();
    assert_eq!(h.num_rows(), 2);
}

#[test]
fn horn_eval_pole_and_homogeneity() {
    let h = HornMatrix::new(vec![vec![1, -1], vec![-1, 1]], ints(&[1, 1])).unwrap();
    assert_eq!(horn_eval(&h, &ints(&[1, 1])), Err(Error::PoleAtInput(1)));
    let t = trapezoid_horn();
    let u = ints(&[3, 1, 4, 1, 5]);
    let scaled: Vec<Rational> = u.iter().map(|x| x * ratio(3, 7)).collect();
    assert_eq!(horn_eval(&t, &u).unwrap(), horn_eval(&t, &scaled).unwrap());
}

#[test]
fn minimal_horn_duplicated_row() {
    let h = HornMatrix::new(
        vec![
            vec![1, 0, 1],
            vec![1, 0, 1],
            vec![0, 1, -2],
            vec![-2, -1, 0],
        ],
        ints(&[1, 1, 1]),
    )
    .unwrap();
    let m = minimal_horn(&h).unwrap();
    assert_eq!(m.rows(), &[vec![2, 0, 2], vec![0, 1, -2], vec![-2, -1, 0]]);
    // l^b l^b = (2l)^{2b} / 2^{2b}
    assert_eq!(m.constants(), &[ratio(1, 4), rat(1), ratio(1, 4)]);
    let u = ints(&[2, 3, 5]);
    assert_eq!(horn_eval(&h, &u).unwrap(), horn_eval(&m, &u).unwrap());

    let vanishing =
        HornMatrix::new(vec![vec![1, -1], vec![1, -1], vec![-2, 2]], ints(&[1, 1])).unwrap();
    let m = minimal_horn(&vanishing).unwrap();
    assert_eq!(m.num_rows(), 0);
    let u = ints(&[2, 3]);
    assert_eq!(
        horn_eval(&vanishing, &u).unwrap(),
        horn_eval(&m, &u).unwrap()
    );
}

#[test]
fn minimal_horn_opposite_rows_flip_signs() {
    let sq = square_horn();
    let mut rows = sq.rows().to_vec();
    rows.push(vec![0, 1, 0, 1]);
    rows.push(vec![0, -1, 0, -1]);
    let h = HornMatrix::new(rows, sq.constants().to_vec()).unwrap();
    let m = minimal_horn(&h).unwrap();
    assert_eq!(m.rows(), sq.rows());
    assert_eq!(m.constants(), ints(&[4, -4, 4, -4]).as_slice());
    let u = ints(&[2, 3, 5, 7]);
    assert_eq!(horn_eval(&h, &u).unwrap(), horn_eval(&m, &u).unwrap());
}

#[test]
fn minimal_horn_split_last_row() {
    let sq = square_horn();
    let mut rows = sq.rows()[..4].to_vec();
    rows.push(vec![-1; 4]);
    rows.push(vec![-1; 4]);
    let h = HornMatrix::new(rows, ints(&[1; 4])).unwrap();
    let m = minimal_horn(&h).unwrap();
    assert_eq!(m, sq);
    let mut s = Sampler::new(10);
    for _ in 0..20 {
        let u = s.rational_vec(4);
        assert_eq!(horn_eval(&h, &u).unwrap(), horn_eval(&m, &u).unwrap());
    }
    assert_eq!(minimal_horn(&sq).unwrap(), sq);
}

#[test]
fn structure_report_on_catalog() {
    let t = catalog::trapezoid(1, 1, 1).unwrap();
    let r = horn_structure_report(&trapezoid_horn(), &t.polytope).unwrap();
    assert!(r.nonnegative_block_is_distance_matrix);
    assert!(r.collections.iter().all(|c| c.matching_row.is_some()));
    let g = catalog::graphical();
    let r = horn_structure_report(&graphical_horn(), &g.polytope).unwrap();
    assert!(r.nonnegative_block_is_distance_matrix);
    assert_eq!(r.negative_rows.len(), 3);
    assert_eq!(r.collections.len(), 4);
    let sq = catalog::square();
    let r = horn_structure_report(&square_horn(), &sq.polytope).unwrap();
    assert_eq!(r.collections.len(), 2);
    for c in &r.collections {
        assert_eq!(c.matching_row, None);
        assert_eq!(c.proportional_row, Some(0));
    }
}

#[test]
fn weight_action_leaves_estimates_unchanged() {
    let f = catalog::trapezoid(1, 1, 1).unwrap();
    // w_j -> lambda * t^{m_j} w_j with lambda = 3, t = (2, 1/3)
    let t = [rat(2), ratio(1, 3)];
    let scaled: Vec<Rational> = f
        .polytope
        .lattice_points()
        .iter()
        .zip(&f.weights)
        .map(|(m, w)| w * rat(3) * t[0].powi_exact(m[0]) * t[1].powi_exact(m[1]))
        .collect();
    let mut s = Sampler::new(12);
    for _ in 0..10 {
        let u = s.rational_vec(5);
        let a = mle_newton(&f.polytope, &f.weights, &u, NEWTON_TOL).unwrap();
        let b = mle_newton(&f.polytope, &scaled, &u, NEWTON_TOL).unwrap();
        assert!(max_diff(&a.estimate, &b.estimate) < 1e-10);
    }
    let sq = catalog::square();
    let w3 = ints(&[3; 4]);
    let u = ints(&[1, 2, 3, 4]);
    assert_eq!(
        mle_closed_form(&sq.polytope, &sq.weights, &u)
            .unwrap()
            .estimate,
        mle_closed_form(&sq.polytope, &w3, &u).unwrap().estimate
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn estimate_matches_statistic_and_lies_on_model(seed in 0u64..500) {
        let mut s = Sampler::new(seed);
        for f in [catalog::square(), catalog::simplex(2, 1).unwrap()] {
            let u = s.rational_vec(f.polytope.num_points());
            let r = mle_closed_form(&f.polytope, &f.weights, &u).unwrap();
            prop_assert_eq!(tau_a(&f.polytope, &r.estimate).unwrap(), tau_a(&f.polytope, &u).unwrap());
            prop_assert!(sum(&r.estimate).is_one());
            prop_assert!(satisfies_model_exact(&f.polytope, &f.weights, &r.estimate));
        }
        for f in [catalog::trapezoid(1, 1, 1).unwrap(), catalog::graphical()] {
            let u = s.rational_vec(f.polytope.num_points());
            let r = mle_newton(&f.polytope, &f.weights, &u, NEWTON_TOL).unwrap();
            let stat = to_f64(&tau_a(&f.polytope, &u).unwrap());
            prop_assert!(max_diff(&tau_a(&f.polytope, &r.estimate).unwrap(), &stat) <= 1e-10);
            prop_assert!(r.estimate.iter().all(|x| *x > 0.0));
            prop_assert!((r.estimate.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(model_membership_residual(&f.polytope, &f.weights, &r.estimate) <= 1e-10);
        }
    }

    #[test]
    fn slp_horn_matches_closed_form(seed in 0u64..200) {
        let f = catalog::simplex(2, 2).unwrap();
        let h = horn_matrix_slp(&f.polytope, &f.weights).unwrap();
        let u = Sampler::new(seed).rational_vec(f.polytope.num_points());
        prop_assert_eq!(horn_eval(&h, &u).unwrap(), mle_closed_form(&f.polytope, &f.weights, &u).unwrap().estimate);
    }

    #[test]
    fn minimal_horn_is_idempotent(seed in 0u64..300) {
        let mut s = Sampler::new(seed);
        let base = trapezoid_horn();
        let mut rows = Vec::new();
        for r in base.rows() {
            // split each row into k copies scaled by small positive integers summing to k'
            let k = s.int_in(1, 3);
            for _ in 0..k {
                let c = s.int_in(1, 3);
                rows.push(r.iter().map(|x| x * c).collect::<Vec<i64>>());
            }
        }
        // restore zero column sums with a balancing row
        let s_cols: Vec<i64> = (0..5).map(|j| rows.iter().map(|r: &Vec<i64>| r[j]).sum()).collect();
        rows.push(s_cols.iter().map(|x| -x).collect());
        let h = HornMatrix::new(rows, base.constants().to_vec()).unwrap();
        let m = minimal_horn(&h).unwrap();
        prop_assert!(m.is_minimal());
        prop_assert_eq!(minimal_horn(&m).unwrap(), m.clone());
        for _ in 0..5 {
            let u = s.rational_vec(5);
            if let (Ok(a), Ok(b)) = (horn_eval(&h, &u), horn_eval(&m, &u)) {
                prop_assert_eq!(a, b);
            }
        }
    }
}
