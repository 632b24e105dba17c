use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, serde_rational, Rational, Scalar};
use crate::error::{Error, Result};

/// Dense exponent vector of a monomial.
///
/// Ordered graded-lex: lower total degree first, then the vector with the
/// larger leading exponent first (so `s` precedes `t`, and `s^2` precedes `st`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders integer points graded-lex, matching [`Exponent`]'s monomial order.
pub fn graded_lex_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

/// Multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

/// One `{exponents, coeff}` record of the serialized term list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exponents: Vec<u32>,
    #[serde(with = "serde_rational")]
    pub coeff: Rational,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Exponent::zero(num_vars), c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rational::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars, "variable index out of range");
        let mut e = vec![0; num_vars];
        e[i] = 1;
        let mut p = Self::zero(num_vars);
        p.add_term(Exponent(e), Rational::one());
        p
    }

    /// The affine form `<coeffs, x> + constant`.
    pub fn affine(coeffs: &[Rational], constant: Rational) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, constant);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(Exponent(e), c.clone());
        }
        p
    }

    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = PolyTerm>) -> Result<Self> {
        let mut p = Self::zero(num_vars);
        for t in terms {
            if t.exponents.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    found: t.exponents.len(),
                });
            }
            p.add_term(Exponent(t.exponents), t.coeff);
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Exponent::is_constant)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Exponent::zero(self.num_vars))
    }

    pub fn coeff(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn to_terms(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .map(|(e, c)| PolyTerm {
                exponents: e.0.clone(),
                coeff: c.clone(),
            })
            .collect()
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Power by repeated multiplication; `p^0 = 1` even for `p = 0`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.num_vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Reinterprets the polynomial inside a ring with `total_vars` variables,
    /// placing its variables at positions `offset..offset + num_vars`.
    pub fn embed(&self, total_vars: usize, offset: usize) -> Self {
        assert!(offset + self.num_vars <= total_vars);
        let mut p = Self::zero(total_vars);
        for (e, c) in &self.terms {
            let mut v = vec![0; total_vars];
            v[offset..offset + self.num_vars].copy_from_slice(&e.0);
            p.add_term(Exponent(v), c.clone());
        }
        p
    }

    pub fn eval<T: Scalar>(&self, x: &[T]) -> Result<T> {
        if x.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: x.len(),
            });
        }
        let mut total = T::zero();
        for (e, c) in &self.terms {
            let mut term = T::from_rational(c);
            for (xi, &k) in x.iter().zip(&e.0) {
                for _ in 0..k {
                    term *= xi;
                }
            }
            total += &term;
        }
        Ok(total)
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(
            self.num_vars, other.num_vars,
            "polynomials live in different rings"
        );
    }
}

/// Exact value of `p` at `x`.
pub fn poly_eval(p: &MultiPoly, x: &[Rational]) -> Result<Rational> {
    p.eval(x)
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    // exponents add under multiplication
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_same_ring(rhs);
        let mut out = MultiPoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect();
                out.add_term(Exponent(e), ca * cb);
            }
        }
        out
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.to_terms())
    }
}

impl fmt::Display for MultiPoly {
    /// Highest-degree terms first, variables named `t1..td`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors = Vec::new();
            if e.is_constant() || !mag.is_one() {
                factors.push(format_rational(&mag));
            }
            for (v, &k) in e.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("t{}", v + 1)),
                    _ => factors.push(format!("t{}^{}", v + 1, k)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
