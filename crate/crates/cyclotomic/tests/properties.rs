use cyclotomic::dihedral::{canonicalize, circle_of, orbit, wedge_sort, BasisKey};
use cyclotomic::linalg::*;
use cyclotomic::words::*;
use num_traits::Zero;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn key(i: usize) -> BasisKey {
    BasisKey { weight: 1, depth: 1, idx: i }
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(rows in matrix()) {
        let m = SparseMatrix::from_dense(&rows);
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert_eq!(rank(&m), rank_with(&m, Pivoting::SmallestEntry));
    }

    #[test]
    fn nullspace_is_killed_and_complements_rank(rows in matrix()) {
        let m = SparseMatrix::from_dense(&rows);
        let ns = nullspace_basis(&m);
        prop_assert_eq!(ns.len() + rank(&m), m.ncols);
        for v in &ns {
            for r in &m.rows {
                prop_assert!(r.dot(v).is_zero());
            }
        }
        prop_assert_eq!(quotient_dim(m.ncols, &m), m.ncols - rank(&m));
    }

    #[test]
    fn rows_lie_in_their_span(rows in matrix(), i in 0usize..6) {
        let m = SparseMatrix::from_dense(&rows);
        let r = &m.rows[i % m.rows.len()];
        prop_assert!(in_span(r, &m));
        prop_assert!(Quotient::new(m.ncols, &m).is_zero(r));
    }

    #[test]
    fn composition_count(w in 1u32..12, m in 1usize..5) {
        prop_assume!(m as u32 <= w);
        let cs = compositions(w, m);
        prop_assert_eq!(cs.len() as u64, binomial(u64::from(w) - 1, m as u64 - 1));
        prop_assert!(cs.iter().all(|c| c.iter().sum::<u32>() == w && c.iter().all(|&n| n >= 1)));
    }

    #[test]
    fn shuffle_count(k in 0usize..5, l in 0usize..5) {
        let s = shuffles(k, l);
        prop_assert_eq!(s.len() as u64, binomial((k + l) as u64, k as u64));
        prop_assert!(s.iter().all(ShufflePermutation::is_shuffle));
    }

    #[test]
    fn quasi_shuffle_count_and_commutativity(a in 0usize..4, b in 0usize..4) {
        let u: Vec<Letter<i64>> = (0..a).map(|i| (i as i64 + 1, 1)).collect();
        let v: Vec<Letter<i64>> = (0..b).map(|i| (10 * (i as i64 + 1), 2)).collect();
        let add = |x: &i64, y: &i64| x + y;
        let terms = quasi_shuffle(&u, &v, &add);
        // Σ_k (a+b−k)! / (k!(a−k)!(b−k)!)
        let expected: u64 = (0..=a.min(b) as u64)
            .map(|k| factorial(a as u64 + b as u64 - k) / (factorial(k) * factorial(a as u64 - k) * factorial(b as u64 - k)))
            .sum();
        prop_assert_eq!(terms.len() as u64, expected);
        prop_assert_eq!(quasi_shuffle_counted(&u, &v, &add), quasi_shuffle_counted(&v, &u, &add));
    }

    #[test]
    fn word_round_trip_rotates(n in 1i64..6, m in 1usize..4, gs in prop::collection::vec(0i64..6, 4)) {
        let nv = m + 1;
        let mut g: Vec<i64> = gs[..m].iter().map(|x| x % n).collect();
        g.push((-g.iter().sum::<i64>()).rem_euclid(n));
        let t: Vec<LinearForm> = (0..nv).map(|i| var(i, nv)).collect();
        let word = NonhomogeneousWord { n, g: g.clone(), t: t.clone() };
        let back = to_nonhomogeneous(&to_homogeneous(&word).unwrap()).unwrap();
        for i in 0..nv {
            prop_assert_eq!(back.g[i], g[(i + 1) % nv]);
            prop_assert_eq!(&back.t[i], &lf_sub(&t[(i + 1) % nv], &t[0]));
        }
    }

    #[test]
    fn canonical_form_is_an_orbit_invariant(n in 1i64..5, alphas in prop::collection::vec(0i64..5, 1..4), r in 0usize..8) {
        let c = circle_of(&alphas, n);
        let orb = orbit(&c);
        prop_assert_eq!(orb.len(), 2 * c.len());
        let other = &orb[r % orb.len()];
        let a = canonicalize(&c);
        let b = canonicalize(&other.image);
        prop_assert_eq!(&a.image, &b.image);
        prop_assert_eq!(other.perm.iter().map(|&j| c[j]).collect::<Vec<_>>(), other.image.clone());
    }

    #[test]
    fn wedge_sort_sign_is_the_permutation_parity(perm in Just(()).prop_perturb(|_, mut rng| {
        let mut p: Vec<usize> = (0..5).collect();
        for i in (1..5).rev() { p.swap(i, (rng.next_u32() as usize) % (i + 1)); }
        p
    })) {
        let keys: Vec<BasisKey> = perm.iter().map(|&i| key(i)).collect();
        let (sorted, sign) = wedge_sort(&keys).unwrap();
        prop_assert_eq!(sorted, (0..5).map(key).collect::<Vec<_>>());
        let inversions = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        prop_assert_eq!(sign, if inversions % 2 == 0 { 1 } else { -1 });
        let mut repeated = keys.clone();
        repeated[0] = repeated[1];
        prop_assert!(wedge_sort(&repeated).is_none());
    }
}
