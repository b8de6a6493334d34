use std::collections::BTreeSet;

use cyclotomic::linalg::{q, Rational};
use cyclotomic::modular::{standard_basis, IntVector};
use cyclotomic::voronoi::*;
use num_traits::One;
use proptest::prelude::*;

fn e() -> Vec<IntVector> {
    standard_basis(3)
}

fn add(a: &[i64], b: &[i64]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[i64]) -> IntVector {
    a.iter().map(|x| -x).collect()
}

fn cell(vs: &[IntVector]) -> VCell {
    VCell::new(vs).unwrap()
}

fn up_to_sign(vs: &[IntVector]) -> BTreeSet<IntVector> {
    vs.iter().map(|v| normalize(v).unwrap()).collect()
}

#[test]
fn minimal_vector_counts() {
    let a2 = QuadForm::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
    assert_eq!(minimal_vectors(&a2, 2).unwrap().len(), 6);
    assert_eq!(minimal_vectors(&QuadForm::identity(2), 1).unwrap().len(), 4);
    assert_eq!(minimal_vectors(&QuadForm::a_m(3), 2).unwrap().len(), 12);
}

#[test]
fn small_bound_is_rejected() {
    // x² + 10y²-type forms need a wide box in the second coordinate only after scaling.
    let f = QuadForm::new(vec![vec![10, 9], vec![9, 10]]).unwrap();
    assert!(matches!(minimal_vectors(&f, 1), Err(VoronoiError::BoundTooSmall { .. })));
    assert_eq!(minimal_vectors(&f, 4).unwrap().len(), 2);
}

#[test]
fn a_m_forms_are_perfect() {
    for m in 2..=3 {
        let f = QuadForm::a_m(m);
        let mins = minimal_vectors(&f, 2).unwrap();
        assert!(mins.len() / 2 >= m * (m + 1) / 2);
        assert!(is_perfect(&f, 2).unwrap());
    }
    assert!(!is_perfect(&QuadForm::identity(2), 1).unwrap());
}

#[test]
fn a2_form_is_constant_on_the_facet() {
    let triangle = am_cell(&standard_basis(2)).unwrap();
    let f = QuadForm::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
    assert_eq!(form_value_on(&f, &triangle), Some(2));
    let mins = up_to_sign(&minimal_vectors(&f, 2).unwrap());
    assert_eq!(mins, triangle.vertex_set());
}

#[test]
fn am_cell_vertices() {
    let t = am_cell(&standard_basis(2)).unwrap();
    assert_eq!(t.vertex_set(), up_to_sign(&[vec![1, 0], vec![0, 1], vec![-1, -1]]));
    let e = e();
    let s = am_cell(&e).unwrap();
    assert_eq!(s.vertices().len(), 6);
    assert_eq!(s.dim(), 5);
    let v4 = neg(&add(&add(&e[0], &e[1]), &e[2]));
    let expected = cell(&[e[0].clone(), e[1].clone(), e[2].clone(), v4, add(&e[0], &e[1]), add(&e[1], &e[2])]);
    assert_eq!(s, expected);
    assert!(s.is_simplicial());
    assert_eq!(s.rank(), 3);
}

#[test]
fn triangle_boundary_has_three_edges() {
    let t = am_cell(&standard_basis(2)).unwrap();
    let d = boundary(&CellChain::cell(&t)).unwrap();
    assert_eq!(d.len(), 3);
    assert!(boundary(&d).unwrap().is_zero());
}

#[test]
fn five_simplex_boundary_matches_display() {
    let e = e();
    let (v1, v2, v3) = (e[0].clone(), e[1].clone(), e[2].clone());
    let v4 = neg(&add(&add(&v1, &v2), &v3));
    let (v12, v23) = (add(&v1, &v2), add(&v2, &v3));
    let s = am_cell(&e).unwrap();
    let d = boundary(&CellChain::cell(&s)).unwrap();
    assert_eq!(d.len(), 6);
    assert!(boundary(&d).unwrap().is_zero());

    let mut display = CellChain::zero();
    for (vs, c) in [
        (vec![v1.clone(), v2.clone(), v3.clone(), v4.clone(), v12.clone()], 1),
        (vec![v1.clone(), v2.clone(), v3.clone(), v4.clone(), v23.clone()], -1),
        (vec![v1.clone(), v12.clone(), v3.clone(), v23.clone(), v2.clone()], 1),
        (vec![v1.clone(), v12.clone(), v3.clone(), v23.clone(), v4.clone()], -1),
        (vec![v2.clone(), v12.clone(), v4.clone(), v23.clone(), v1.clone()], 1),
        (vec![v2.clone(), v12.clone(), v4.clone(), v23.clone(), v3.clone()], -1),
    ] {
        display.add_cell(&cell(&vs), &q(c));
    }
    assert_eq!(display, d);
    assert_eq!(second_shuffle_sign(), 1);
}

#[test]
fn non_simplicial_cell_is_rejected() {
    let c = cell(&[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]]);
    assert_eq!(boundary(&CellChain::cell(&c)), Err(VoronoiError::NotSimplicial(4)));
}

#[test]
fn psi_displays() {
    let e2 = standard_basis(2);
    let b = |v: &IntVector| vec![v.clone()];
    assert_eq!(psi2(&[b(&e2[0]), b(&e2[1])]).unwrap(), CellChain::cell(&cell(&e2)));
    assert_eq!(psi2(&[e2.clone()]).unwrap(), CellChain::cell(&am_cell(&e2).unwrap()));

    let e = e();
    let img = psi3(&[vec![e[0].clone(), e[1].clone()], b(&e[2])]).unwrap();
    let v12 = add(&e[0], &e[1]);
    assert_eq!(img, CellChain::cell(&cell(&[e[0].clone(), e[1].clone(), neg(&v12), e[2].clone()])));
    assert_eq!(psi3(&[b(&e[0]), b(&e[1]), b(&e[2])]).unwrap(), CellChain::cell(&cell(&e)));
    assert_eq!(psi3(&[e.clone()]).unwrap().len(), 2);
    assert_eq!(psi2(&[e.clone()]), Err(VoronoiError::UnsupportedRank(3)));
    assert_eq!(psi(&[standard_basis(4)]), Err(VoronoiError::UnsupportedRank(4)));
}

#[test]
fn first_shuffle_vanishes_and_second_is_a_boundary() {
    let e = e();
    assert!(psi_sum(&first_shuffle_terms(&e)).unwrap().is_zero());
    let second = second_shuffle_terms(&e);
    // [v₁,v₂,v₃] + [−v₁,v₁₂,v₃] + [v₂,−v₁₂,−v₄]
    let v12 = add(&e[0], &e[1]);
    let v4 = neg(&add(&v12, &e[2]));
    let expected = vec![
        vec![e[0].clone(), e[1].clone(), e[2].clone()],
        vec![neg(&e[0]), v12.clone(), e[2].clone()],
        vec![e[1].clone(), neg(&v12), neg(&v4)],
    ];
    assert_eq!(second.iter().map(|(w, _)| w[0].clone()).collect::<Vec<_>>(), expected);
    let img = psi_sum(&second).unwrap();
    assert_eq!(img, boundary(&CellChain::cell(&am_cell(&e).unwrap())).unwrap().scaled(&q(second_shuffle_sign())));
    assert!(matches!(classify_relation_image(&img).unwrap(), RelationImage::SimplexBoundary(_)));
}

#[test]
fn psi_identities_rank_two() {
    let r = verify_psi(2, 2).unwrap();
    assert!(r.bases > 0);
    assert!(r.holds(), "{r:?}");
}

#[test]
fn psi_identities_rank_three() {
    let r = verify_psi(3, 1).unwrap();
    assert!(r.holds(), "{r:?}");
}

#[test]
fn coker_observations_small_box() {
    let r = coker_observations(1);
    assert!(r.holds(), "{r:?}");
    assert!(r.special_cells > 0);
}

#[test]
fn three_cell_classification() {
    let e = e();
    let v12 = add(&e[0], &e[1]);
    let v4 = neg(&add(&v12, &e[2]));
    assert_eq!(classify_three_cell(&[e[0].clone(), e[1].clone(), neg(&v12), e[2].clone()]), ThreeCell::Special);
    assert_eq!(classify_three_cell(&[e[0].clone(), e[1].clone(), e[2].clone(), v4]), ThreeCell::Generic);
    assert_eq!(classify_three_cell(&[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![1, -1, 0]]), ThreeCell::Neither);
}

proptest! {
    #[test]
    fn normalization_idempotent(v in prop::collection::vec(-5i64..=5, 3)) {
        if let Ok(n) = normalize(&v) {
            prop_assert_eq!(normalize(&n).unwrap(), n.clone());
            prop_assert_eq!(normalize(&neg(&v)).unwrap(), n);
        }
    }

    #[test]
    fn odd_permutations_merge_with_opposite_sign(i in 0usize..6, j in 0usize..6) {
        prop_assume!(i != j);
        let s = am_cell(&e()).unwrap();
        let mut vs = s.vertices().to_vec();
        vs.swap(i, j);
        let mut c = CellChain::cell(&s);
        c.add_cell(&cell(&vs), &Rational::one());
        prop_assert!(c.is_zero());
    }

    #[test]
    fn boundary_squares_to_zero(k in 3usize..=6, perm in Just(()).prop_perturb(|_, mut rng| {
        let mut p: Vec<usize> = (0..6).collect();
        for i in (1..6).rev() { p.swap(i, (rng.next_u32() as usize) % (i + 1)); }
        p
    })) {
        let s = am_cell(&e()).unwrap();
        let vs: Vec<IntVector> = perm[..k].iter().map(|&i| s.vertices()[i].clone()).collect();
        let c = CellChain::cell(&cell(&vs));
        prop_assert!(boundary(&boundary(&c).unwrap()).unwrap().is_zero());
    }
}
