use super::*;
use proptest::prelude::*;

fn pts(v: &[&[i64]]) -> Vec<Vec<i64>> {
    v.iter().map(|p| p.to_vec()).collect()
}

#[test]
fn unit_square_points_and_vertices() {
    let sq = make_unit_square();
    assert_eq!(sq.vertices().len(), 4);
    assert_eq!(
        sq.lattice_points(),
        pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).as_slice()
    );
    assert_eq!(sq.facet_normal_sum(), vec![0, 0]);
}

#[test]
fn graded_lex_default_order_for_square() {
    let sq = LatticePolytope::from_facets(make_unit_square().facets().to_vec()).unwrap();
    assert_eq!(sq.lattice_points(), make_unit_square().lattice_points());
}

#[test]
fn trapezoid_fixture() {
    let t = make_trapezoid(1, 1, 1).unwrap();
    assert_eq!(
        t.lattice_points(),
        pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1]]).as_slice()
    );
    assert_eq!(t.facet_normal_sum(), vec![0, -1]);
    assert_eq!(t.primitive_collections(), vec![vec![0, 2], vec![1, 3]]);
    let p = [rat(1), rat(0)];
    assert_eq!(t.lattice_distance(2, &p).unwrap(), rat(1));
    assert_eq!(t.lattice_distance(3, &p).unwrap(), rat(1));
    assert!(t.lattice_distance(4, &p).is_err());
}

#[test]
fn trapezoid_vertices_general() {
    let t = make_trapezoid(2, 1, 1).unwrap();
    let mut v = t.vertices().to_vec();
    v.sort();
    assert_eq!(v, pts(&[&[0, 0], &[0, 1], &[2, 1], &[3, 0]]));
}

#[test]
fn segment_points() {
    let s = make_segment(2).unwrap();
    assert_eq!(s.lattice_points(), pts(&[&[0], &[1], &[2]]).as_slice());
    assert_eq!(s.offset_sum(), 2);
}

#[test]
fn simplex_point_counts() {
    let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    for (k, d) in [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (1, 3), (3, 3)] {
        let p = make_simplex(k, d).unwrap();
        assert_eq!(p.num_points() as u64, binom(k as u64 + d as u64, d as u64));
        assert!(p.facet_normal_sum().iter().all(|&x| x == 0));
    }
    assert!(make_simplex(0, 2).is_err());
}

#[test]
fn product_of_segments_is_square() {
    let s = make_simplex(1, 1).unwrap();
    let sq = make_product(&s, &s).unwrap();
    assert_eq!(sq.lattice_points(), make_unit_square().lattice_points());
    let p = make_product(&make_simplex(2, 1).unwrap(), &s).unwrap();
    assert_eq!(p.num_points(), 6);
}

#[test]
fn graphical_model_matrix() {
    let g = make_graphical_model();
    assert_eq!(g.num_points(), 8);
    assert_eq!(g.num_facets(), 8);
    assert_eq!(g.facet_normal_sum(), vec![0; 5]);
    let expected: Vec<Vec<u32>> = vec![
        vec![1, 1, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 1, 1, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 1, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 1, 1],
        vec![1, 0, 0, 0, 1, 0, 0, 0],
        vec![0, 1, 0, 0, 0, 1, 0, 0],
        vec![0, 0, 1, 0, 0, 0, 1, 0],
        vec![0, 0, 0, 1, 0, 0, 0, 1],
    ];
    assert_eq!(g.distance_matrix(), expected.as_slice());
    assert_eq!(
        g.primitive_collections(),
        vec![
            vec![0, 1, 2, 3],
            vec![0, 2, 6, 7],
            vec![1, 3, 4, 5],
            vec![4, 5, 6, 7]
        ]
    );
    assert!(g.incidence().per_vertex.iter().all(|f| f.len() == 6));
}

#[test]
fn rejects_bad_presentations() {
    let f = |n: Vec<i64>, a: i64| Facet::new(n, a);
    assert_eq!(LatticePolytope::from_facets(vec![]), Err(Error::NoFacets));
    assert_eq!(
        LatticePolytope::from_facets(vec![f(vec![1, 0], 0), f(vec![0, 1], 0)]),
        Err(Error::Unbounded)
    );
    assert_eq!(
        LatticePolytope::from_facets(vec![f(vec![2], 0), f(vec![-1], 2)]),
        Err(Error::NonPrimitiveNormal(0))
    );
    assert_eq!(
        LatticePolytope::from_facets(vec![f(vec![1], 0), f(vec![-1], 0)]),
        Err(Error::NotFullDimensional)
    );
    assert_eq!(
        LatticePolytope::from_facets(vec![f(vec![1], 0), f(vec![-1], 2), f(vec![-1], 3)]),
        Err(Error::RedundantFacet(2))
    );
    assert_eq!(
        LatticePolytope::from_facets(vec![f(vec![1], 0), f(vec![-1], 2), f(vec![1], 0)]),
        Err(Error::RedundantFacet(2))
    );
    assert_eq!(
        LatticePolytope::from_facets(vec![f(vec![1, 0], 0), f(vec![0, 1], 0), f(vec![-1, -2], 1)]),
        Err(Error::NonLatticeVertex)
    );
    assert!(matches!(
        LatticePolytope::with_point_order(vec![f(vec![1], 0), f(vec![-1], 1)], vec![vec![0]]),
        Err(Error::InvalidLabels(_))
    ));
}

fn subset_of(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

proptest! {
    #[test]
    fn rectangles_enumerate_exhaustively(w in 1i64..4, h in 1i64..4, dx in -2i64..3, dy in -2i64..3) {
        let p = LatticePolytope::from_facets(vec![
            Facet::new(vec![1, 0], -dx),
            Facet::new(vec![0, 1], -dy),
            Facet::new(vec![-1, 0], dx + w),
            Facet::new(vec![0, -1], dy + h),
        ]).unwrap();
        prop_assert_eq!(p.num_points() as i64, (w + 1) * (h + 1));
        for x in dx - 2..=dx + w + 2 {
            for y in dy - 2..=dy + h + 2 {
                let inside = p.facets().iter().all(|f| f.distance_int(&[x, y]) >= 0);
                prop_assert_eq!(inside, p.lattice_points().contains(&vec![x, y]));
            }
        }
    }

    #[test]
    fn vertices_are_tight_on_spanning_facets(k in 1i64..4, d in 1usize..4) {
        let p = make_simplex(k, d).unwrap();
        for v in p.vertices() {
            let tight: Vec<Vec<i64>> = p.facets().iter()
                .filter(|f| f.distance_int(v) == 0)
                .map(|f| f.normal.clone())
                .collect();
            prop_assert!(p.facets().iter().all(|f| f.distance_int(v) >= 0));
            prop_assert_eq!(RationalMatrix::from_i64_rows(d, &tight).rank(), d);
        }
    }

    #[test]
    fn primitive_collections_are_minimal(a in 1i64..3, b in 1i64..3, dd in 1i64..3) {
        let p = make_trapezoid(a, b, dd).unwrap();
        let cones = p.incidence().per_vertex;
        for s in p.primitive_collections() {
            prop_assert!(!cones.iter().any(|c| subset_of(&s, c)));
            for skip in 0..s.len() {
                let sub: Vec<usize> = s.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, x)| *x).collect();
                prop_assert!(cones.iter().any(|c| subset_of(&sub, c)));
            }
        }
    }

    #[test]
    fn product_counts_multiply(k1 in 1i64..3, d1 in 1usize..3, k2 in 1i64..3, d2 in 1usize..3) {
        let p = make_simplex(k1, d1).unwrap();
        let q = make_simplex(k2, d2).unwrap();
        let pq = make_product(&p, &q).unwrap();
        prop_assert_eq!(pq.num_points(), p.num_points() * q.num_points());
    }
}
