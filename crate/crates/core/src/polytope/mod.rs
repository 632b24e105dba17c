//! Full-dimensional lattice polytopes given by facet presentations
//! `h_i(p) = <p, n_i> + a_i >= 0`.

mod constructors;

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{
    graded_lex_cmp, positive_kernel_point, rat, Rational, RationalMatrix, Scalar,
};

pub use constructors::{
    make_graphical_model, make_product, make_segment, make_simplex, make_trapezoid,
    make_unit_square,
};

/// One inequality `<p, normal> + offset >= 0` with a primitive inward normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn new(normal: Vec<i64>, offset: i64) -> Self {
        Facet { normal, offset }
    }

    /// Lattice distance of an integer point.
    pub fn distance_int(&self, p: &[i64]) -> i64 {
        self.normal.iter().zip(p).map(|(n, x)| n * x).sum::<i64>() + self.offset
    }

    pub fn distance<T: Scalar>(&self, p: &[T]) -> T {
        let mut acc = T::from_int(self.offset);
        for (n, x) in self.normal.iter().zip(p) {
            let mut term = T::from_int(*n);
            term *= x;
            acc += &term;
        }
        acc
    }

    fn is_primitive(&self) -> bool {
        self.normal.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
    }
}

/// Facets incident to each vertex: the generators of the vertex's normal cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFanIncidence {
    pub per_vertex: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    facets: Vec<Facet>,
    vertices: Vec<Vec<i64>>,
    lattice_points: Vec<Vec<i64>>,
    /// `distances[i][j] = h_i(m_j)`.
    distances: Vec<Vec<u32>>,
}

/// Builds a polytope from its facets, with lattice points in graded-lex order.
pub fn polytope_from_facets(facets: Vec<Facet>) -> Result<LatticePolytope> {
    LatticePolytope::from_facets(facets)
}

impl LatticePolytope {
    pub fn from_facets(facets: Vec<Facet>) -> Result<Self> {
        Self::build(facets, None)
    }

    /// Like [`from_facets`](Self::from_facets) but with lattice points listed in
    /// the caller's order, which must be a permutation of the enumerated set.
    pub fn with_point_order(facets: Vec<Facet>, order: Vec<Vec<i64>>) -> Result<Self> {
        Self::build(facets, Some(order))
    }

    fn build(facets: Vec<Facet>, order: Option<Vec<Vec<i64>>>) -> Result<Self> {
        let Some(first) = facets.first() else {
            return Err(Error::NoFacets);
        };
        let dim = first.normal.len();
        if dim == 0 {
            return Err(Error::NotFullDimensional);
        }
        for (i, f) in facets.iter().enumerate() {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.normal.len(),
                });
            }
            if f.normal.iter().all(|&x| x == 0) {
                return Err(Error::ZeroNormal(i));
            }
            if !f.is_primitive() {
                return Err(Error::NonPrimitiveNormal(i));
            }
            if facets[..i].contains(f) {
                return Err(Error::RedundantFacet(i));
            }
        }

        // Bounded iff the normals span R^d and admit a strictly positive
        // linear relation (Stiemke).
        let normals = RationalMatrix::from_i64_rows(
            dim,
            &facets.iter().map(|f| f.normal.clone()).collect::<Vec<_>>(),
        );
        if normals.rank() < dim || positive_kernel_point(&normals.transpose()).is_none() {
            return Err(Error::Unbounded);
        }

        let vertices = enumerate_vertices(dim, &facets)?;
        if vertices.is_empty() || affine_rank(&vertices) < dim {
            return Err(Error::NotFullDimensional);
        }
        for (i, f) in facets.iter().enumerate() {
            let on: Vec<Vec<i64>> = vertices
                .iter()
                .filter(|v| f.distance_int(v) == 0)
                .cloned()
                .collect();
            if on.is_empty() || affine_rank(&on) + 1 < dim {
                return Err(Error::RedundantFacet(i));
            }
        }

        let mut points = enumerate_lattice_points(dim, &facets, &vertices);
        if let Some(order) = order {
            let expected: BTreeSet<&Vec<i64>> = points.iter().collect();
            let given: BTreeSet<&Vec<i64>> = order.iter().collect();
            if order.len() != points.len() || expected != given {
                return Err(Error::InvalidLabels(
                    "labels must list every lattice point exactly once".into(),
                ));
            }
            points = order;
        }

        let distances = facets
            .iter()
            .map(|f| points.iter().map(|m| f.distance_int(m) as u32).collect())
            .collect();
        Ok(LatticePolytope {
            dim,
            facets,
            vertices,
            lattice_points: points,
            distances,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// Vertices in graded-lex order.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn lattice_points(&self) -> &[Vec<i64>] {
        &self.lattice_points
    }

    pub fn num_points(&self) -> usize {
        self.lattice_points.len()
    }

    /// The lattice-distance matrix `(h_i(m_j))`, facets by lattice points.
    pub fn distance_matrix(&self) -> &[Vec<u32>] {
        &self.distances
    }

    pub fn lattice_distance<T: Scalar>(&self, i: usize, p: &[T]) -> Result<T> {
        let f = self.facets.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.facets.len(),
        })?;
        self.check_dim(p.len())?;
        Ok(f.distance(p))
    }

    /// All lattice distances `(h_1(p), ..., h_r(p))`.
    pub fn distances_at<T: Scalar>(&self, p: &[T]) -> Vec<T> {
        self.facets.iter().map(|f| f.distance(p)).collect()
    }

    pub fn is_interior<T: Scalar>(&self, p: &[T]) -> bool {
        p.len() == self.dim && self.facets.iter().all(|f| f.distance(p) > T::zero())
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if n == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n,
            })
        }
    }

    /// `n_P`, the sum of the primitive inward facet normals.
    pub fn facet_normal_sum(&self) -> Vec<i64> {
        let mut s = vec![0; self.dim];
        for f in &self.facets {
            for (acc, n) in s.iter_mut().zip(&f.normal) {
                *acc += n;
            }
        }
        s
    }

    /// `a_P`, the sum of the facet offsets.
    pub fn offset_sum(&self) -> i64 {
        self.facets.iter().map(|f| f.offset).sum()
    }

    /// Average of the lattice points; always an interior point.
    pub fn centroid(&self) -> Vec<Rational> {
        let s = rat(self.num_points() as i64);
        (0..self.dim)
            .map(|k| {
                let total: i64 = self.lattice_points.iter().map(|m| m[k]).sum();
                rat(total) / &s
            })
            .collect()
    }

    pub fn incidence(&self) -> NormalFanIncidence {
        NormalFanIncidence {
            per_vertex: self
                .vertices
                .iter()
                .map(|v| {
                    (0..self.facets.len())
                        .filter(|&i| self.facets[i].distance_int(v) == 0)
                        .collect()
                })
                .collect(),
        }
    }

    /// Inclusion-minimal facet sets not contained in any vertex's incident set,
    /// ordered by size then lexicographically.
    pub fn primitive_collections(&self) -> Vec<Vec<usize>> {
        let r = self.facets.len();
        assert!(r < 64, "too many facets for subset enumeration");
        let cones: Vec<u64> = self
            .incidence()
            .per_vertex
            .iter()
            .map(|fs| fs.iter().fold(0u64, |m, &i| m | (1 << i)))
            .collect();
        let in_some_cone = |mask: u64| cones.iter().any(|&c| mask & !c == 0);
        let mut out: Vec<Vec<usize>> = Vec::new();
        for mask in 1u64..(1u64 << r) {
            if in_some_cone(mask) {
                continue;
            }
            let minimal = (0..r)
                .filter(|i| mask & (1 << i) != 0)
                .all(|i| in_some_cone(mask & !(1 << i)));
            if minimal {
                out.push((0..r).filter(|i| mask & (1 << i) != 0).collect());
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

/// Free-function form of [`LatticePolytope::facet_normal_sum`].
pub fn facet_normal_sum(p: &LatticePolytope) -> Vec<i64> {
    p.facet_normal_sum()
}

/// Free-function form of [`LatticePolytope::primitive_collections`].
pub fn primitive_collections(p: &LatticePolytope) -> Vec<Vec<usize>> {
    p.primitive_collections()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Solves every `d`-subset of facet equalities exactly and keeps the feasible
/// solutions.
fn enumerate_vertices(dim: usize, facets: &[Facet]) -> Result<Vec<Vec<i64>>> {
    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for subset in combinations(facets.len(), dim) {
        let a = RationalMatrix::from_i64_rows(
            dim,
            &subset
                .iter()
                .map(|&i| facets[i].normal.clone())
                .collect::<Vec<_>>(),
        );
        let b: Vec<Rational> = subset.iter().map(|&i| rat(-facets[i].offset)).collect();
        let Some(x) = a.solve(&b) else { continue };
        if facets.iter().all(|f| !f.distance(&x).is_negative()) {
            found.insert(x);
        }
    }
    let mut vertices = Vec::with_capacity(found.len());
    for v in found {
        if !v.iter().all(|x| x.denom().is_one()) {
            return Err(Error::NonLatticeVertex);
        }
        vertices.push(
            v.iter()
                .map(|x| i64::try_from(x.numer()).map_err(|_| Error::NonLatticeVertex))
                .collect::<Result<Vec<i64>>>()?,
        );
    }
    vertices.sort_by(|a, b| graded_lex_cmp(a, b));
    Ok(vertices)
}

fn enumerate_lattice_points(dim: usize, facets: &[Facet], vertices: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let lo: Vec<i64> = (0..dim)
        .map(|k| vertices.iter().map(|v| v[k]).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..dim)
        .map(|k| vertices.iter().map(|v| v[k]).max().unwrap())
        .collect();
    let mut points = Vec::new();
    let mut cur = lo.clone();
    'outer: loop {
        if facets.iter().all(|f| f.distance_int(&cur) >= 0) {
            points.push(cur.clone());
        }
        for k in 0..dim {
            if cur[k] < hi[k] {
                cur[k] += 1;
                continue 'outer;
            }
            cur[k] = lo[k];
        }
        break;
    }
    points.sort_by(|a, b| graded_lex_cmp(a, b));
    points
}

/// Dimension of the affine span of a nonempty point set.
fn affine_rank(points: &[Vec<i64>]) -> usize {
    let Some(base) = points.first() else { return 0 };
    if points.len() == 1 {
        return 0;
    }
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    RationalMatrix::from_i64_rows(base.len(), &diffs).rank()
}

impl LatticePolytope {
    pub fn is_vertex(&self, v: &[i64]) -> bool {
        self.vertices.iter().any(|x| x == v)
    }
}

#[cfg(test)]
mod tests;
