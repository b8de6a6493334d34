//! Compositions, shuffles, quasi-shuffles and polynomials in t₀,…,tₘ.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{q, Rational, SparseVector};

pub type Composition = Vec<u32>;

/// All compositions of `w` into exactly `m` positive parts, lexicographically.
pub fn compositions(w: u32, m: usize) -> Vec<Composition> {
    fn rec(w: u32, m: usize, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if m == 0 {
            if w == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if (w as usize) < m {
            return;
        }
        for a in 1..=(w - (m as u32 - 1)) {
            prefix.push(a);
            rec(w - a, m - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 1 {
        rec(w, m, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

/// Weak compositions: exponent vectors of all monomials of total degree `deg` in `n` variables,
/// ordered with the first exponent decreasing.
pub fn monomials(deg: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(deg: u32, n: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            if deg == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for a in (0..=deg).rev() {
            if n == 1 && a != deg {
                continue;
            }
            prefix.push(a);
            rec(deg - a, n - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(deg, n, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// A (k,l)-shuffle, stored as `sigma[position] = letter`. Letters 0..k come from the
/// first word, k..k+l from the second; both keep their relative order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShufflePermutation {
    pub k: usize,
    pub sigma: Vec<usize>,
}

impl ShufflePermutation {
    pub fn is_shuffle(&self) -> bool {
        let m = self.sigma.len();
        let mut seen = vec![false; m];
        for &s in &self.sigma {
            if s >= m || seen[s] {
                return false;
            }
            seen[s] = true;
        }
        let first: Vec<usize> = self.sigma.iter().copied().filter(|&s| s < self.k).collect();
        let second: Vec<usize> = self.sigma.iter().copied().filter(|&s| s >= self.k).collect();
        first.windows(2).all(|p| p[0] < p[1]) && second.windows(2).all(|p| p[0] < p[1])
    }

    pub fn apply<T: Clone>(&self, letters: &[T]) -> Vec<T> {
        self.sigma.iter().map(|&s| letters[s].clone()).collect()
    }
}

/// Shuffles in the order of `k`-subsets of positions (lexicographic).
pub fn shuffles(k: usize, l: usize) -> Vec<ShufflePermutation> {
    let m = k + l;
    let mut out = Vec::new();
    let mut pos: Vec<usize> = (0..k).collect();
    loop {
        let mut a = 0;
        let mut b = k;
        let sigma = (0..m)
            .map(|i| {
                if pos.contains(&i) {
                    a += 1;
                    a - 1
                } else {
                    b += 1;
                    b - 1
                }
            })
            .collect();
        out.push(ShufflePermutation { k, sigma });
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pos[i] < m - k + i {
                pos[i] += 1;
                for j in i + 1..k {
                    pos[j] = pos[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A letter (argument, exponent) of an indexed word; the summation index is implicit.
pub type Letter<A> = (A, u32);

/// Quasi-shuffle product of nested-sum words. Words are read with the innermost
/// (smallest) summation index first; coincident indices merge arguments via `merge`
/// and add exponents. Returns the terms with multiplicity (each coefficient 1).
pub fn quasi_shuffle<A: Clone>(
    u: &[Letter<A>],
    v: &[Letter<A>],
    merge: &impl Fn(&A, &A) -> A,
) -> Vec<Vec<Letter<A>>> {
    if u.is_empty() {
        return vec![v.to_vec()];
    }
    if v.is_empty() {
        return vec![u.to_vec()];
    }
    let (ua, a) = (&u[..u.len() - 1], &u[u.len() - 1]);
    let (vb, b) = (&v[..v.len() - 1], &v[v.len() - 1]);
    let mut out = Vec::new();
    for mut t in quasi_shuffle(ua, v, merge) {
        t.push(a.clone());
        out.push(t);
    }
    for mut t in quasi_shuffle(u, vb, merge) {
        t.push(b.clone());
        out.push(t);
    }
    for mut t in quasi_shuffle(ua, vb, merge) {
        t.push((merge(&a.0, &b.0), a.1 + b.1));
        out.push(t);
    }
    out
}

/// Quasi-shuffle with multiplicities collected, for ordered argument types.
pub fn quasi_shuffle_counted<A: Clone + Ord>(
    u: &[Letter<A>],
    v: &[Letter<A>],
    merge: &impl Fn(&A, &A) -> A,
) -> BTreeMap<Vec<Letter<A>>, i64> {
    let mut out = BTreeMap::new();
    for t in quasi_shuffle(u, v, merge) {
        *out.entry(t).or_insert(0) += 1;
    }
    out
}

/// Polynomial in `nvars` variables with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TPolynomial {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

pub type LinearForm = Vec<i64>;

/// The linear form t_i in `n` variables.
pub fn var(i: usize, n: usize) -> LinearForm {
    let mut f = vec![0; n];
    f[i] = 1;
    f
}

pub fn lf_add(a: &LinearForm, b: &LinearForm) -> LinearForm {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn lf_sub(a: &LinearForm, b: &LinearForm) -> LinearForm {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn lf_scale(a: &LinearForm, c: i64) -> LinearForm {
    a.iter().map(|x| x * c).collect()
}

impl TPolynomial {
    pub fn zero(nvars: usize) -> Self {
        TPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, q(1))
    }

    pub fn linear(f: &LinearForm) -> Self {
        let n = f.len();
        let mut p = Self::zero(n);
        for (i, &c) in f.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, q(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TPolynomial, c: &Rational) {
        for (e, x) in &other.terms {
            self.add_term(e.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> TPolynomial {
        let mut p = TPolynomial::zero(self.nvars);
        p.add_scaled(self, c);
        p
    }

    pub fn mul(&self, other: &TPolynomial) -> TPolynomial {
        let mut p = TPolynomial::zero(self.nvars);
        for (e1, x1) in &self.terms {
            for (e2, x2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, x1 * x2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> TPolynomial {
        let mut r = TPolynomial::one(self.nvars);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// (linear form)^k expanded by the multinomial theorem.
    pub fn linear_pow(f: &LinearForm, k: u32) -> TPolynomial {
        let n = f.len();
        let support: Vec<usize> = (0..n).filter(|&i| f[i] != 0).collect();
        let mut p = TPolynomial::zero(n);
        for ex in monomials(k, support.len()) {
            let mut coeff = num_bigint::BigInt::one();
            let mut rest = k as u64;
            for (j, &a) in ex.iter().enumerate() {
                coeff *= binomial(rest, a as u64);
                rest -= a as u64;
                coeff *= num_bigint::BigInt::from(f[support[j]]).pow(a);
            }
            let mut e = vec![0; n];
            for (j, &a) in ex.iter().enumerate() {
                e[support[j]] = a;
            }
            p.add_term(e, Rational::from_integer(coeff));
        }
        if support.is_empty() && k == 0 {
            p = TPolynomial::one(n);
        }
        p
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Substitutes t_i ↦ forms[i] (forms are linear in the target variables).
    pub fn substitute(&self, forms: &[LinearForm]) -> TPolynomial {
        let n = forms.first().map_or(0, |f| f.len());
        let mut out = TPolynomial::zero(n);
        for (e, x) in &self.terms {
            let mut t = TPolynomial::constant(n, x.clone());
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    t = t.mul(&TPolynomial::linear_pow(&forms[i], a));
                }
            }
            out.add_scaled(&t, &q(1));
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("group elements do not multiply to one (sum {0} mod {1})")]
    GroupConstraint(i64, i64),
    #[error("t-variables do not sum to zero")]
    SumConstraint,
    #[error("length mismatch between group elements and t-variables")]
    Shape,
    #[error("monomial of degree {0} exceeds the budget {1}")]
    DegreeOverflow(u32, u32),
}

/// Extended nonhomogeneous word {g₀,…,gₘ | t₀:…:tₘ}: residues mod N summing to 0,
/// positions given as integer linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonhomogeneousWord {
    pub n: i64,
    pub g: Vec<i64>,
    pub t: Vec<LinearForm>,
}

/// Extended homogeneous word {h₀:…:hₘ | u₀,…,uₘ}: the u's sum to zero,
/// and the h's are defined up to a common translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousWord {
    pub n: i64,
    pub h: Vec<i64>,
    pub u: Vec<LinearForm>,
}

fn modn(x: i64, n: i64) -> i64 {
    x.rem_euclid(n)
}

pub fn to_nonhomogeneous(word: &HomogeneousWord) -> Result<NonhomogeneousWord, WordError> {
    let m1 = word.h.len();
    if m1 != word.u.len() || m1 == 0 {
        return Err(WordError::Shape);
    }
    let nv = word.u[0].len();
    if word.u.iter().fold(vec![0; nv], |a, b| lf_add(&a, b)).iter().any(|&c| c != 0) {
        return Err(WordError::SumConstraint);
    }
    let n = word.n;
    let g = (0..m1).map(|i| modn(word.h[(i + 1) % m1] - word.h[i], n)).collect();
    let mut acc = vec![0; nv];
    let t = word
        .u
        .iter()
        .map(|ui| {
            acc = lf_add(&acc, ui);
            acc.clone()
        })
        .collect();
    Ok(NonhomogeneousWord { n, g, t })
}

pub fn to_homogeneous(word: &NonhomogeneousWord) -> Result<HomogeneousWord, WordError> {
    let m1 = word.g.len();
    if m1 != word.t.len() || m1 == 0 {
        return Err(WordError::Shape);
    }
    let n = word.n;
    let s = word.g.iter().sum::<i64>();
    if modn(s, n) != 0 {
        return Err(WordError::GroupConstraint(modn(s, n), n));
    }
    let mut acc = 0;
    let h = word
        .g
        .iter()
        .map(|gi| {
            acc += gi;
            modn(acc, n)
        })
        .collect();
    let u = (0..m1).map(|i| lf_sub(&word.t[(i + 1) % m1], &word.t[i])).collect();
    Ok(HomogeneousWord { n, h, u })
}

/// Turns an identity Σ_gen gen·p_gen = 0 into one linear relation per monomial,
/// after fixing the gauge variable to zero. Monomials of degree above `budget`
/// are an error.
pub fn extract_coefficients(
    identity: &BTreeMap<usize, TPolynomial>,
    gauge: usize,
    budget: u32,
) -> Result<Vec<SparseVector>, WordError> {
    let mut by_mono: BTreeMap<&Vec<u32>, SparseVector> = BTreeMap::new();
    for (&gen, p) in identity {
        for (e, x) in &p.terms {
            let d: u32 = e.iter().sum();
            if d > budget {
                return Err(WordError::DegreeOverflow(d, budget));
            }
            if e[gauge] > 0 {
                continue;
            }
            by_mono.entry(e).or_default().add_at(gen, x);
        }
    }
    Ok(by_mono.into_values().filter(|r| !r.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_compositions() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(compositions(3, 3), vec![vec![1, 1, 1]]);
        assert_eq!(compositions(11, 3).len(), 45);
        assert!(compositions(2, 3).is_empty());
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(1, 1).len(), 2);
        assert_eq!(shuffles(1, 2).len(), 3);
        assert_eq!(shuffles(2, 2).len(), 6);
        assert!(shuffles(2, 2).iter().all(|s| s.is_shuffle()));
    }

    #[test]
    fn depth_one_stuffle() {
        let t = quasi_shuffle_counted(&[(2i64, 5)], &[(3i64, 7)], &|a, b| a * b);
        let expect: BTreeMap<_, _> =
            [(vec![(2, 5), (3, 7)], 1), (vec![(3, 7), (2, 5)], 1), (vec![(6, 12)], 1)].into_iter().collect();
        assert_eq!(t, expect);
        let unit = quasi_shuffle(&[(2i64, 1)], &[], &|a, b| a * b);
        assert_eq!(unit, vec![vec![(2, 1)]]);
    }

    #[test]
    fn multinomial_power() {
        // (t0 - 2 t1)^2 = t0^2 - 4 t0 t1 + 4 t1^2
        let p = TPolynomial::linear_pow(&vec![1, -2], 2);
        let r = TPolynomial::linear(&vec![1, -2]).pow(2);
        assert_eq!(p, r);
        assert_eq!(p.coefficient(&[1, 1]), q(-4));
    }

    #[test]
    fn duality_formula() {
        // {g0:g1 | t0,-t0} -> {g1-g0, g0-g1 | t0 : 0}
        let w = HomogeneousWord { n: 5, h: vec![1, 3], u: vec![vec![1], vec![-1]] };
        let nh = to_nonhomogeneous(&w).unwrap();
        assert_eq!(nh.g, vec![2, 3]);
        assert_eq!(nh.t, vec![vec![1], vec![0]]);
        let bad = HomogeneousWord { n: 5, h: vec![1, 3], u: vec![vec![1], vec![1]] };
        assert_eq!(to_nonhomogeneous(&bad), Err(WordError::SumConstraint));
    }

    #[test]
    fn empty_identity() {
        assert!(extract_coefficients(&BTreeMap::new(), 0, 3).unwrap().is_empty());
    }
}
