use std::time::Instant;

use cyclotomic::dihedral::{dimension, divisors_above_one, Coalgebra, Family, Piece};
use cyclotomic::linalg::{rank, rank_with, Echelon, Pivoting};

#[test]
fn depth_one_level_one() {
    let c = Coalgebra::new(1);
    for w in 1..=17 {
        assert_eq!(c.dimension(w, 1), (w % 2) as usize, "w={w}");
    }
}

#[test]
fn depth_two_level_one() {
    let c = Coalgebra::new(1);
    let t = Instant::now();
    for w in 2..=20u32 {
        let expect = if w % 2 == 1 { 0 } else { ((w - 2) / 6) as usize };
        assert_eq!(c.dimension(w, 2), expect, "w={w}");
    }
    eprintln!("depth 2 table: {:?}", t.elapsed());
}

#[test]
fn depth_three_small() {
    let c = Coalgebra::new(1);
    for w in 3..=11u32 {
        // integer part, truncating toward zero: w = 3 gives [−1/48] = 0
        let x = (w as i64 - 3).pow(2) - 1;
        let expect = if w % 2 == 0 { 0 } else { (x / 48) as usize };
        assert_eq!(c.dimension(w, 3), expect, "w={w}");
    }
}

#[test]
fn higher_levels_depth_one() {
    // N=2: {0}_1, {1}_1 survive at w=1; {1}_w alone for w>1 with parity pattern
    assert_eq!(dimension(2, 1, 1), 2);
    assert_eq!(dimension(3, 1, 1), 2);
    assert_eq!(dimension(5, 1, 1), 3);
    assert_eq!(dimension(3, 4, 1), 1);
    assert_eq!(dimension(5, 3, 1), 2);
}

#[test]
fn two_pivoting_strategies_agree_on_relation_matrices() {
    for (n, w, m) in [(1, 8, 2), (1, 9, 3), (2, 4, 2), (3, 3, 2)] {
        let p = Piece::build(n, w, m);
        assert_eq!(rank_with(&p.relations, Pivoting::LeftmostColumn), rank(&p.relations), "{n} {w} {m}");
        assert_eq!(p.ngens() - rank(&p.relations), p.dim());
    }
}

#[test]
fn inversion_rows_are_redundant_at_level_one() {
    let shuffles_only = vec![
        (Family::Dihedral, vec![]),
        (Family::NonhomogeneousShuffle, vec![]),
        (Family::HomogeneousShuffle, vec![]),
    ];
    for (w, m) in [(6, 2), (8, 2), (9, 3), (7, 3)] {
        let a = Piece::build_with(1, w, m, &shuffles_only);
        let b = Piece::build(1, w, m);
        assert_eq!(a.dim(), b.dim(), "w={w} m={m}");
    }
}

#[test]
fn negative_composite_distribution_rows_are_implied() {
    for (n, w, m) in [(4, 2, 1), (4, 3, 2), (6, 2, 1), (6, 2, 2), (6, 3, 2), (4, 3, 3)] {
        let p = Piece::build(n, w, m);
        let span = Echelon::from_matrix(&p.relations);
        for l in divisors_above_one(n) {
            for row in p.family_rows(Family::Distribution, &[-l]) {
                assert!(span.contains(&row), "N={n} w={w} m={m} l=-{l}");
            }
        }
    }
}
