//! Named weighted polytopes with fixed lattice-point labelings.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::polyalg::{rat, Rational};
use crate::polytope::{
    make_graphical_model, make_product, make_segment, make_simplex, make_trapezoid,
    make_unit_square, LatticePolytope,
};

/// A polytope together with its standard weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub polytope: LatticePolytope,
    pub weights: Vec<Rational>,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn binomial(n: i64, k: i64) -> Rational {
    let (n, k) = (n as u64, k as u64);
    Rational::from_integer(factorial(n) / (factorial(k) * factorial(n - k)))
}

/// Multinomial weights `k! / ((k - |m|)! m_1! ... m_d!)` on `k * Delta_d`.
pub fn multinomial_weights(p: &LatticePolytope, k: i64) -> Vec<Rational> {
    p.lattice_points()
        .iter()
        .map(|m| {
            let rest = k - m.iter().sum::<i64>();
            let denom = m
                .iter()
                .fold(factorial(rest as u64), |acc, &x| acc * factorial(x as u64));
            Rational::from_integer(factorial(k as u64) / denom)
        })
        .collect()
}

/// `k * Delta_d` with multinomial weights.
pub fn simplex(k: i64, d: usize) -> Result<Fixture> {
    let polytope = make_simplex(k, d)?;
    let weights = multinomial_weights(&polytope, k);
    Ok(Fixture {
        name: format!("simplex({k},{d})"),
        polytope,
        weights,
    })
}

/// The segment `[0, 2]` with unit weights.
pub fn p1_segment() -> Fixture {
    let polytope = make_segment(2).expect("segment is valid");
    Fixture {
        name: "p1_segment".into(),
        weights: vec![rat(1); polytope.num_points()],
        polytope,
    }
}

/// The unit square with unit weights.
pub fn square() -> Fixture {
    Fixture {
        name: "square".into(),
        polytope: make_unit_square(),
        weights: vec![rat(1); 4],
    }
}

/// The trapezoid `Conv(0, (a+dd*b) e_1, b e_2, a e_1 + b e_2)` with weights
/// `C(b, t) C(a + dd(b - t), s)` on the point `(s, t)`.
pub fn trapezoid(a: i64, b: i64, dd: i64) -> Result<Fixture> {
    let polytope = make_trapezoid(a, b, dd)?;
    let weights = polytope
        .lattice_points()
        .iter()
        .map(|m| binomial(b, m[1]) * binomial(a + dd * (b - m[1]), m[0]))
        .collect();
    Ok(Fixture {
        name: format!("trapezoid({a},{b},{dd})"),
        polytope,
        weights,
    })
}

/// The five-dimensional graphical-model polytope with unit weights.
pub fn graphical() -> Fixture {
    Fixture {
        name: "graphical".into(),
        polytope: make_graphical_model(),
        weights: vec![rat(1); 8],
    }
}

/// Product with weights `w_j w'_{j'}` in the product's lattice-point order.
pub fn product(a: &Fixture, b: &Fixture) -> Result<Fixture> {
    let polytope = make_product(&a.polytope, &b.polytope)?;
    let mut weights = Vec::with_capacity(polytope.num_points());
    for wb in &b.weights {
        for wa in &a.weights {
            weights.push(wa * wb);
        }
    }
    Ok(Fixture {
        name: format!("{}x{}", a.name, b.name),
        polytope,
        weights,
    })
}

/// `k_1 Delta_{d_1} x ... x k_n Delta_{d_n}` with product multinomial weights.
pub fn simploid(factors: &[(i64, usize)]) -> Result<Fixture> {
    let Some((&(k, d), rest)) = factors.split_first() else {
        return Err(Error::InvalidParameters(
            "simploid needs at least one factor".into(),
        ));
    };
    let mut acc = simplex(k, d)?;
    for &(k, d) in rest {
        acc = product(&acc, &simplex(k, d)?)?;
    }
    Ok(acc)
}

fn int_params(params: &[&str], n: usize, usage: &str) -> Result<Vec<i64>> {
    if params.len() != n {
        return Err(Error::InvalidParameters(format!("usage: {usage}")));
    }
    params
        .iter()
        .map(|s| {
            s.parse::<i64>()
                .map_err(|_| Error::InvalidParameters(format!("not an integer: {s:?}")))
        })
        .collect()
}

/// Looks up a fixture by name: `p1_segment`, `square`, `graphical`,
/// `simplex K D`, `trapezoid A B DD` or `simploid K:D ...`.
pub fn by_name(name: &str, params: &[&str]) -> Result<Fixture> {
    match name {
        "p1_segment" => int_params(params, 0, "p1_segment").map(|_| p1_segment()),
        "square" => int_params(params, 0, "square").map(|_| square()),
        "graphical" => int_params(params, 0, "graphical").map(|_| graphical()),
        "simplex" => {
            let v = int_params(params, 2, "simplex K D")?;
            let d = usize::try_from(v[1])
                .map_err(|_| Error::InvalidParameters("dimension must be positive".into()))?;
            simplex(v[0], d)
        }
        "trapezoid" => {
            let v = int_params(params, 3, "trapezoid A B DD")?;
            trapezoid(v[0], v[1], v[2])
        }
        "simploid" => {
            let factors = params
                .iter()
                .map(|p| {
                    let bad = || Error::InvalidParameters(format!("simploid factors are K:D, got {p:?}"));
                    let (k, d) = p.split_once(':').ok_or_else(bad)?;
                    Ok((k.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?))
                })
                .collect::<Result<Vec<_>>>()?;
            simploid(&factors)
        }
        other => Err(Error::InvalidParameters(format!(
            "unknown fixture {other:?}; expected p1_segment, simplex, square, simploid, trapezoid or graphical"
        ))),
    }
}
