use std::time::Instant;

use cyclotomic::modular::{
    basis_to_colon, colon_to_basis, cosets, dihedral_from_shuffle_check, differential, mc_complex, notation_convert,
    shuffle_rows, verify_mu, IntVector, ModularComplex, ModularError, Notation, ShuffleKind,
};

fn v(x: &[i64]) -> IntVector {
    x.to_vec()
}

#[test]
fn notations() {
    let (v1, v2) = (v(&[1, 0]), v(&[0, 1]));
    assert_eq!(notation_convert(&Notation::Colon(vec![v1.clone(), v2.clone()])).unwrap(), vec![v(&[-1, 1]), v(&[0, -1])]);
    let v0 = v(&[-1, -1]);
    assert_eq!(
        notation_convert(&Notation::Angle(vec![v0, v1.clone(), v2.clone()])).unwrap(),
        vec![v1.clone(), v2.clone()]
    );
    assert_eq!(notation_convert(&Notation::Basis(vec![v(&[2, 0]), v2])), Err(ModularError::NotABasis));
    let b = vec![v(&[1, 2, 0]), v(&[0, 1, 3]), v(&[1, 2, 1])];
    assert_eq!(colon_to_basis(&basis_to_colon(&b)), b);
}

#[test]
fn shuffle_families() {
    let fams = shuffle_rows(2);
    assert_eq!(fams.len(), 2);
    assert_eq!(fams[0].kind, ShuffleKind::Stuffle);
    assert_eq!(fams[0].terms, vec![vec![v(&[1, 0]), v(&[0, 1])], vec![v(&[0, 1]), v(&[1, 0])]]);
    // [v1:v2] + [v2:v1] in basis notation
    assert_eq!(fams[1].terms, vec![vec![v(&[-1, 1]), v(&[0, -1])], vec![v(&[1, -1]), v(&[-1, 0])]]);
    let m3 = shuffle_rows(3);
    assert!(m3.iter().filter(|f| f.k == 1).all(|f| f.terms.len() == 3));
}

#[test]
fn rank_two_boundary_formula() {
    // ∂<v0,v1,v2> = −[v1]∧[v2] − [v2]∧[v0] − [v0]∧[v1]
    let (v1, v2) = (v(&[1, 0]), v(&[0, 1]));
    let v0 = v(&[-1, -1]);
    let mut d = differential(&[vec![v1.clone(), v2.clone()]]);
    d.sort();
    let mut expect = vec![
        (vec![vec![v1.clone()], vec![v2.clone()]], -1),
        (vec![vec![v2.clone()], vec![v0.clone()]], -1),
        (vec![vec![v0.clone()], vec![v1.clone()]], -1),
    ];
    expect.sort();
    assert_eq!(d, expect);
    assert!(differential(&[vec![v1.clone()], vec![v2.clone()]]).is_empty());
}

#[test]
fn rank_three_boundary_has_eight_terms() {
    let e = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
    let d = differential(&[e.clone()]);
    assert_eq!(d.len(), 8);
    assert!(d.iter().all(|(_, c)| *c == -1));
    // ∂([v1,v2]∧[v3]) = −([v1]∧[v2] + [v2]∧[−v1−v2] + [−v1−v2]∧[v1])∧[v3]
    let d2 = differential(&[e[..2].to_vec(), vec![e[2].clone()]]);
    assert_eq!(d2.len(), 3);
    assert!(d2.iter().all(|(b, c)| *c == -1 && b[2] == vec![e[2].clone()]));
}

#[test]
fn coset_counts() {
    assert_eq!(cosets(5, 2).len(), 24);
    assert_eq!(cosets(1, 3).len(), 1);
    // Jordan totient J_2(6) = 36·(1−1/4)(1−1/9) = 24
    assert_eq!(cosets(6, 2).len(), 24);
    assert_eq!(cosets(4, 3).len(), 64 - 8);
}

#[test]
fn boundary_squared_and_well_defined() {
    let t = Instant::now();
    for n in [1, 2, 3] {
        for w in 3..=6 {
            let cx = mc_complex(n, w, 3).unwrap();
            assert!(cx.boundary_squared_vanishes(), "N={n} w={w}");
            assert!(cx.boundary_well_defined(), "N={n} w={w}");
        }
    }
    eprintln!("rank-3 boundary checks: {:?}", t.elapsed());
}

#[test]
fn mu_is_an_isomorphism_at_level_one() {
    for (w, m) in [(2, 2), (4, 2), (6, 2), (8, 2), (3, 3), (5, 3), (6, 3)] {
        let r = verify_mu(1, w, m).unwrap();
        assert!(r.kills_relations && r.chain_map, "w={w} m={m} {r:?}");
        assert!(r.bijective(), "w={w} m={m} {r:?}");
    }
}

#[test]
fn mu_degree_one_for_prime_levels() {
    for (n, w, m) in [(2, 2, 2), (3, 2, 2), (5, 2, 2), (2, 3, 3)] {
        let r = verify_mu(n, w, m).unwrap();
        assert!(r.kills_relations && r.chain_map && r.surjective(), "{n} {w} {m} {r:?}");
        assert_eq!(r.source_dims[0], r.target_dims[0], "{n} {w} {m} {r:?}");
    }
}

#[test]
fn unsupported_rank() {
    assert_eq!(ModularComplex::new(1, 5, 4).err(), Some(ModularError::UnsupportedRank(4)));
}

#[test]
fn dihedral_symmetry_from_shuffles() {
    assert!(dihedral_from_shuffle_check(2, 2).all());
    assert!(dihedral_from_shuffle_check(3, 3).all());
}
