//! Exhaustive search of lattice polygons in a box for strict linear precision.
//!
//! Polygons are enumerated up to translation only, so unimodularly equivalent
//! polygons appear once per distinct position in the box.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyalg::format_rational;
use crate::polytope::{Facet, LatticePolytope};
use crate::precision::{solve_slp_weights, WeightSolution};

/// Largest box side accepted by [`search_polygons`].
pub const MAX_SEARCH_COORD: i64 = 6;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolygonShape {
    /// Normal fan of `k * Delta_2`.
    Triangle { k: i64 },
    /// Normal fan of `k Delta_1 x l Delta_1`, with `k <= l`.
    Rectangle { k: i64, l: i64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolygonRecord {
    /// Vertices in counterclockwise order starting at the lowest-leftmost one.
    pub vertices: Vec<[i64; 2]>,
    pub facets: Vec<Facet>,
    pub weights: Vec<String>,
    pub shape: Option<PolygonShape>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrapezoidCheck {
    pub a: i64,
    pub b: i64,
    pub dd: i64,
    pub found: bool,
    pub slp: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub max_coord: i64,
    pub polygons: usize,
    pub normal_sum_zero: usize,
    pub slp_positive: Vec<PolygonRecord>,
    /// SLP-positive polygons per normal-fan type.
    pub shape_counts: BTreeMap<String, usize>,
    pub all_positive_classified: bool,
    pub trapezoids: Vec<TrapezoidCheck>,
    pub all_trapezoids_negative: bool,
}

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Every strictly convex lattice polygon with vertices in `[0, n]^2` touching
/// both coordinate axes, as counterclockwise vertex lists.
pub fn enumerate_polygons(n: i64) -> Vec<Vec<[i64; 2]>> {
    fn extend(path: &mut Vec<[i64; 2]>, pts: &[[i64; 2]], out: &mut Vec<Vec<[i64; 2]>>) {
        let v0 = path[0];
        let k = path.len();
        if k >= 3 {
            let (prev, last) = (path[k - 2], path[k - 1]);
            if cross(prev, last, v0) > 0
                && cross(last, v0, path[1]) > 0
                && path.iter().map(|p| p[0]).min() == Some(0)
            {
                out.push(path.clone());
            }
        }
        let last = path[k - 1];
        for &w in pts {
            if w == v0 || path.contains(&w) {
                continue;
            }
            let below = w[1] < v0[1] || (w[1] == v0[1] && w[0] < v0[0]);
            if below {
                continue;
            }
            if k >= 2 && (cross(path[k - 2], last, w) <= 0 || cross(v0, last, w) <= 0) {
                continue;
            }
            path.push(w);
            extend(path, pts, out);
            path.pop();
        }
    }
    let pts: Vec<[i64; 2]> = (0..=n).flat_map(|y| (0..=n).map(move |x| [x, y])).collect();
    let mut out = Vec::new();
    for x0 in 0..=n {
        extend(&mut vec![[x0, 0]], &pts, &mut out);
    }
    out
}

/// Facets of a counterclockwise polygon: inward primitive normal of each edge.
pub fn polygon_facets(vertices: &[[i64; 2]]) -> Vec<Facet> {
    let k = vertices.len();
    (0..k)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % k]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let g = dx.gcd(&dy);
            let n = vec![-dy / g, dx / g];
            let offset = -(n[0] * a[0] + n[1] * a[1]);
            Facet::new(n, offset)
        })
        .collect()
}

fn edge_length(vertices: &[[i64; 2]], i: usize) -> i64 {
    let (a, b) = (vertices[i], vertices[(i + 1) % vertices.len()]);
    (b[0] - a[0]).gcd(&(b[1] - a[1]))
}

fn det(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Matches the facet normals against the normal fans of `k Delta_2` and of
/// `k Delta_1 x l Delta_1` up to `GL_2(Z)`.
pub fn classify_polygon(vertices: &[[i64; 2]], facets: &[Facet]) -> Option<PolygonShape> {
    let n: Vec<&[i64]> = facets.iter().map(|f| f.normal.as_slice()).collect();
    match n.len() {
        3 => {
            let sums_to_zero = (0..2).all(|c| n.iter().map(|v| v[c]).sum::<i64>() == 0);
            let k = edge_length(vertices, 0);
            let equal_edges = (1..3).all(|i| edge_length(vertices, i) == k);
            (sums_to_zero && det(n[0], n[1]).abs() == 1 && equal_edges)
                .then_some(PolygonShape::Triangle { k })
        }
        4 => {
            let opposite = |a: &[i64], b: &[i64]| a[0] == -b[0] && a[1] == -b[1];
            let ok = opposite(n[0], n[2]) && opposite(n[1], n[3]) && det(n[0], n[1]).abs() == 1;
            let (k, l) = (edge_length(vertices, 0), edge_length(vertices, 1));
            ok.then_some(PolygonShape::Rectangle {
                k: k.min(l),
                l: k.max(l),
            })
        }
        _ => None,
    }
}

fn shape_key(s: &Option<PolygonShape>) -> String {
    match s {
        Some(PolygonShape::Triangle { k }) => format!("triangle {k}"),
        Some(PolygonShape::Rectangle { k, l }) => format!("rectangle {k}x{l}"),
        None => "unclassified".into(),
    }
}

/// Runs the weight solver on every polygon in `[0, max_coord]^2` and checks
/// the trapezoid family `Conv(0, (a+dd*b) e_1, b e_2, a e_1 + b e_2)` in range.
pub fn search_polygons(max_coord: i64) -> Result<SearchReport> {
    if !(1..=MAX_SEARCH_COORD).contains(&max_coord) {
        return Err(Error::InvalidParameters(format!(
            "max coordinate must be in 1..={MAX_SEARCH_COORD}, got {max_coord}"
        )));
    }
    let polygons = enumerate_polygons(max_coord);
    let mut normal_sum_zero = 0;
    let mut slp_positive = Vec::new();
    let mut slp_vertex_sets: Vec<Vec<[i64; 2]>> = Vec::new();
    for vertices in &polygons {
        let facets = polygon_facets(vertices);
        let n_sum = facets.iter().fold([0i64; 2], |acc, f| {
            [acc[0] + f.normal[0], acc[1] + f.normal[1]]
        });
        if n_sum != [0, 0] {
            continue;
        }
        normal_sum_zero += 1;
        let p = LatticePolytope::from_facets(facets.clone())?;
        if let WeightSolution::Found(w) = solve_slp_weights(&p) {
            let mut sorted = vertices.clone();
            sorted.sort();
            slp_vertex_sets.push(sorted);
            slp_positive.push(PolygonRecord {
                shape: classify_polygon(vertices, &facets),
                vertices: vertices.clone(),
                facets,
                weights: w.iter().map(format_rational).collect(),
            });
        }
    }

    let mut shape_counts = BTreeMap::new();
    for r in &slp_positive {
        *shape_counts.entry(shape_key(&r.shape)).or_insert(0) += 1;
    }
    let all_positive_classified = slp_positive.iter().all(|r| r.shape.is_some());

    let mut all_sets: Vec<Vec<[i64; 2]>> = polygons
        .iter()
        .map(|v| {
            let mut s = v.clone();
            s.sort();
            s
        })
        .collect();
    all_sets.sort();
    let mut trapezoids = Vec::new();
    for b in 1..=max_coord {
        for dd in 1..=max_coord {
            for a in 1..=max_coord {
                if a + dd * b > max_coord {
                    break;
                }
                let mut verts = vec![[0, 0], [a + dd * b, 0], [0, b], [a, b]];
                verts.sort();
                trapezoids.push(TrapezoidCheck {
                    a,
                    b,
                    dd,
                    found: all_sets.binary_search(&verts).is_ok(),
                    slp: slp_vertex_sets.contains(&verts),
                });
            }
        }
    }
    let all_trapezoids_negative = trapezoids.iter().all(|t| t.found && !t.slp);
    Ok(SearchReport {
        max_coord,
        polygons: polygons.len(),
        normal_sum_zero,
        slp_positive,
        shape_counts,
        all_positive_classified,
        trapezoids,
        all_trapezoids_negative,
    })
}
