use super::{Facet, LatticePolytope};
use crate::error::{Error, Result};

/// `k * Delta_d`: facet `n_0 = -(e_1 + ... + e_d)` with offset `k`, then the
/// coordinate facets `n_i = e_i`.
pub fn make_simplex(k: i64, d: usize) -> Result<LatticePolytope> {
    if k < 1 || d < 1 {
        return Err(Error::InvalidParameters(format!(
            "simplex needs k >= 1 and d >= 1, got k={k}, d={d}"
        )));
    }
    let mut facets = vec![Facet::new(vec![-1; d], k)];
    for i in 0..d {
        let mut n = vec![0; d];
        n[i] = 1;
        facets.push(Facet::new(n, 0));
    }
    LatticePolytope::from_facets(facets)
}

/// The segment `[0, k]` with facets `t >= 0` then `k - t >= 0`.
pub fn make_segment(k: i64) -> Result<LatticePolytope> {
    if k < 1 {
        return Err(Error::InvalidParameters(format!("segment length {k} < 1")));
    }
    LatticePolytope::with_point_order(
        vec![Facet::new(vec![1], 0), Facet::new(vec![-1], k)],
        (0..=k).map(|x| vec![x]).collect(),
    )
}

/// Unit square with facets `s, t, 1-s, 1-t` and points `(0,0),(1,0),(0,1),(1,1)`.
pub fn make_unit_square() -> LatticePolytope {
    LatticePolytope::with_point_order(
        vec![
            Facet::new(vec![1, 0], 0),
            Facet::new(vec![0, 1], 0),
            Facet::new(vec![-1, 0], 1),
            Facet::new(vec![0, -1], 1),
        ],
        vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
    )
    .expect("unit square is valid")
}

/// `P x Q`. Facets of `P` come first; lattice points run over `P` fastest,
/// so `(m, m')` sits at index `j' * |P| + j`.
pub fn make_product(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    let (dp, dq) = (p.dim(), q.dim());
    let mut facets = Vec::with_capacity(p.num_facets() + q.num_facets());
    for f in p.facets() {
        let mut n = f.normal.clone();
        n.extend(std::iter::repeat_n(0, dq));
        facets.push(Facet::new(n, f.offset));
    }
    for f in q.facets() {
        let mut n = vec![0; dp];
        n.extend(f.normal.iter().copied());
        facets.push(Facet::new(n, f.offset));
    }
    let mut order = Vec::with_capacity(p.num_points() * q.num_points());
    for mq in q.lattice_points() {
        for mp in p.lattice_points() {
            let mut m = mp.clone();
            m.extend(mq.iter().copied());
            order.push(m);
        }
    }
    LatticePolytope::with_point_order(facets, order)
}

/// `Conv(0, (a + dd*b) e_1, b e_2, a e_1 + b e_2)` with facets
/// `s, t, a + dd*b - s - dd*t, b - t` and points ordered row by row.
pub fn make_trapezoid(a: i64, b: i64, dd: i64) -> Result<LatticePolytope> {
    if a < 1 || b < 1 || dd < 1 {
        return Err(Error::InvalidParameters(format!(
            "trapezoid needs a, b, dd >= 1, got ({a}, {b}, {dd})"
        )));
    }
    let facets = vec![
        Facet::new(vec![1, 0], 0),
        Facet::new(vec![0, 1], 0),
        Facet::new(vec![-1, -dd], a + dd * b),
        Facet::new(vec![0, -1], b),
    ];
    let mut order = Vec::new();
    for t in 0..=b {
        for s in 0..=(a + dd * (b - t)) {
            order.push(vec![s, t]);
        }
    }
    LatticePolytope::with_point_order(facets, order)
}

/// The five-dimensional polytope of the path graphical model on three binary
/// variables, labelled so `(h_i(m_j))` is its monomial exponent matrix.
pub fn make_graphical_model() -> LatticePolytope {
    let e = |i: usize| {
        let mut v = vec![0i64; 5];
        v[i - 1] = 1;
        v
    };
    let add = |a: Vec<i64>, b: Vec<i64>| a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>();
    let facets = vec![
        Facet::new(vec![0, -1, 0, 0, -1], 1),
        Facet::new(vec![0, 0, 0, -1, 1], 0),
        Facet::new(e(2), 0),
        Facet::new(e(4), 0),
        Facet::new(vec![-1, 0, 0, 0, -1], 1),
        Facet::new(e(1), 0),
        Facet::new(vec![0, 0, -1, 0, 1], 0),
        Facet::new(e(3), 0),
    ];
    let order = vec![
        vec![0; 5],
        e(1),
        e(5),
        add(e(3), e(5)),
        e(2),
        add(e(1), e(2)),
        add(e(4), e(5)),
        add(add(e(3), e(4)), e(5)),
    ];
    LatticePolytope::with_point_order(facets, order).expect("graphical-model polytope is valid")
}
