//! Exact sparse linear algebra over Q.
//!
//! Everything here works on `BTreeMap`-backed sparse rows with `BigRational`
//! entries. The input matrices are never mutated; elimination always runs on a
//! working copy.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVector {
    entries: BTreeMap<usize, Rational>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::new();
        v.add_at(i, &q(1));
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Rational)>>(pairs: I) -> Self {
        let mut v = Self::new();
        for (i, x) in pairs {
            v.add_at(i, &x);
        }
        v
    }

    pub fn from_dense(xs: &[i64]) -> Self {
        Self::from_pairs(xs.iter().enumerate().map(|(i, &x)| (i, q(x))))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Rational> {
        self.entries.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(&i, x)| (i, x))
    }

    pub fn first(&self) -> Option<(usize, &Rational)> {
        self.entries.iter().next().map(|(&i, x)| (i, x))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn add_at(&mut self, i: usize, x: &Rational) {
        if x.is_zero() {
            return;
        }
        match self.entries.get_mut(&i) {
            Some(y) => {
                *y += x;
                if y.is_zero() {
                    self.entries.remove(&i);
                }
            }
            None => {
                self.entries.insert(i, x.clone());
            }
        }
    }

    /// self += c * other
    pub fn axpy(&mut self, c: &Rational, other: &SparseVector) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_at(i, &(c * x));
        }
    }

    pub fn scaled(&self, c: &Rational) -> SparseVector {
        if c.is_zero() {
            return SparseVector::new();
        }
        SparseVector { entries: self.entries.iter().map(|(&i, x)| (i, x * c)).collect() }
    }

    pub fn dot(&self, other: &SparseVector) -> Rational {
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = Rational::zero();
        for (i, x) in small.iter() {
            if let Some(y) = big.get(i) {
                acc += x * y;
            }
        }
        acc
    }

    pub fn remap(&self, f: impl Fn(usize) -> usize) -> SparseVector {
        let mut v = SparseVector::new();
        for (i, x) in self.iter() {
            v.add_at(f(i), x);
        }
        v
    }
}

impl FromIterator<(usize, Rational)> for SparseVector {
    fn from_iter<T: IntoIterator<Item = (usize, Rational)>>(iter: T) -> Self {
        SparseVector::from_pairs(iter)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: Vec<SparseVector>,
    pub ncols: usize,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { rows: Vec::new(), ncols }
    }

    pub fn from_rows(rows: Vec<SparseVector>, ncols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.max_index().is_none_or(|c| c < ncols)));
        SparseMatrix { rows, ncols }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        SparseMatrix::from_rows(rows.iter().map(|r| SparseVector::from_dense(r)).collect(), ncols)
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix::from_rows((0..n).map(SparseVector::unit).collect(), n)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn push(&mut self, row: SparseVector) {
        debug_assert!(row.max_index().is_none_or(|c| c < self.ncols));
        self.rows.push(row);
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols = vec![SparseVector::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, x) in row.iter() {
                cols[c].add_at(r, x);
            }
        }
        SparseMatrix::from_rows(cols, self.rows.len())
    }

    /// Row vector times matrix: Σ v_r · row_r.
    pub fn left_apply(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (r, x) in v.iter() {
            out.axpy(x, &self.rows[r]);
        }
        out
    }

    /// Matrix product where `self` maps row-index space into `other`'s row-index space.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix::from_rows(self.rows.iter().map(|r| other.left_apply(r)).collect(), other.ncols)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pivoting {
    /// Leftmost column, first row: the incremental echelon form.
    LeftmostColumn,
    /// Entry of smallest bit size over the whole remaining block.
    SmallestEntry,
}

/// Fully reduced row echelon form built incrementally; pivot rows are monic.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVector>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_matrix(m: &SparseMatrix) -> Self {
        let mut e = Echelon::new();
        for r in &m.rows {
            e.insert(r.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivots.contains_key(&c)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn pivot_row(&self, c: usize) -> Option<&SparseVector> {
        self.pivots.get(&c)
    }

    pub fn reduce(&self, v: &SparseVector) -> SparseVector {
        let mut v = v.clone();
        let hits: Vec<(usize, Rational)> =
            v.iter().filter(|(c, _)| self.pivots.contains_key(c)).map(|(c, x)| (c, x.clone())).collect();
        // pivot rows are zero on other pivot columns, so the hits stay valid
        for (c, x) in hits {
            v.axpy(&-x, &self.pivots[&c]);
        }
        v
    }

    /// Inserts a row; returns true if the rank grew.
    pub fn insert(&mut self, row: SparseVector) -> bool {
        let r = self.reduce(&row);
        let Some((c, lead)) = r.first() else { return false };
        let r = r.scaled(&lead.recip());
        for p in self.pivots.values_mut() {
            if let Some(x) = p.get(c).cloned() {
                p.axpy(&-x, &r);
            }
        }
        self.pivots.insert(c, r);
        true
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).is_zero()
    }
}

fn entry_size(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

pub fn rank_with(m: &SparseMatrix, pivoting: Pivoting) -> usize {
    match pivoting {
        Pivoting::LeftmostColumn => Echelon::from_matrix(m).rank(),
        Pivoting::SmallestEntry => {
            let mut work: Vec<SparseVector> = m.rows.iter().filter(|r| !r.is_zero()).cloned().collect();
            let mut rank = 0;
            loop {
                work.retain(|r| !r.is_zero());
                let mut best: Option<(u64, usize, usize)> = None;
                for (ri, r) in work.iter().enumerate() {
                    for (c, x) in r.iter() {
                        let s = entry_size(x);
                        if best.is_none_or(|(bs, _, _)| s < bs) {
                            best = Some((s, ri, c));
                        }
                    }
                }
                let Some((_, ri, c)) = best else { break };
                let prow = work.swap_remove(ri);
                let inv = prow.get(c).expect("pivot entry").recip();
                for r in work.iter_mut() {
                    if let Some(x) = r.get(c).cloned() {
                        r.axpy(&-(x * &inv), &prow);
                    }
                }
                rank += 1;
            }
            rank
        }
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    rank_with(m, Pivoting::SmallestEntry)
}

pub fn nullspace_basis(m: &SparseMatrix) -> Vec<SparseVector> {
    let e = Echelon::from_matrix(m);
    (0..m.ncols)
        .filter(|&f| !e.is_pivot(f))
        .map(|f| {
            let mut v = SparseVector::unit(f);
            for (p, row) in &e.pivots {
                if let Some(x) = row.get(f) {
                    v.add_at(*p, &-x.clone());
                }
            }
            v
        })
        .collect()
}

pub fn in_span(v: &SparseVector, rows: &SparseMatrix) -> bool {
    Echelon::from_matrix(rows).contains(v)
}

pub fn quotient_dim(ngens: usize, relations: &SparseMatrix) -> usize {
    assert_eq!(relations.ncols, ngens, "relation matrix width must equal the generator count");
    ngens - rank(relations)
}

/// A quotient space F/R with F free on `ngens` columns: free columns of the
/// echelon form give the basis, and `coords` writes any vector in it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ngens: usize,
    echelon: Echelon,
    basis: Vec<usize>,
    position: BTreeMap<usize, usize>,
}

impl Quotient {
    pub fn new(ngens: usize, relations: &SparseMatrix) -> Self {
        Self::from_echelon(ngens, Echelon::from_matrix(relations))
    }

    pub fn from_echelon(ngens: usize, echelon: Echelon) -> Self {
        let basis: Vec<usize> = (0..ngens).filter(|&c| !echelon.is_pivot(c)).collect();
        let position = basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Quotient { ngens, echelon, basis, position }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_columns(&self) -> &[usize] {
        &self.basis
    }

    pub fn coords(&self, v: &SparseVector) -> SparseVector {
        self.echelon.reduce(v).remap(|c| self.position[&c])
    }

    pub fn is_zero(&self, v: &SparseVector) -> bool {
        self.echelon.contains(v)
    }
}

/// Rank of a set of rows, forced through the exact elimination.
pub fn rank_of_rows(rows: &[SparseVector]) -> usize {
    let mut e = Echelon::new();
    rows.iter().filter(|r| e.insert((*r).clone())).count()
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_proportional() {
        assert_eq!(rank(&SparseMatrix::identity(2)), 2);
        let m = SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(rank(&m), 1);
        assert_eq!(rank_with(&m, Pivoting::LeftmostColumn), 1);
    }

    #[test]
    fn nullspace_small() {
        let m = SparseMatrix::from_dense(&[vec![1, -1]]);
        let ns = nullspace_basis(&m);
        assert_eq!(ns, vec![SparseVector::from_dense(&[1, 1])]);
        assert!(nullspace_basis(&SparseMatrix::from_dense(&[vec![2, 1], vec![1, 1]])).is_empty());
    }

    #[test]
    fn span_membership() {
        let m = SparseMatrix::from_dense(&[vec![1, 0, 2], vec![0, 3, 1]]);
        let mut v = m.rows[0].clone();
        v.axpy(&q(1), &m.rows[1]);
        assert!(in_span(&v, &m));
        assert!(!in_span(&SparseVector::unit(0), &SparseMatrix::new(3)));
        assert!(in_span(&SparseVector::new(), &SparseMatrix::new(3)));
    }

    #[test]
    fn quotients() {
        assert_eq!(quotient_dim(5, &SparseMatrix::new(5)), 5);
        assert_eq!(quotient_dim(3, &SparseMatrix::identity(3)), 0);
        let m = SparseMatrix::from_dense(&[vec![1, 1, 0]]);
        let qt = Quotient::new(3, &m);
        assert_eq!(qt.dim(), 2);
        // e0 = -e1 in the quotient
        assert_eq!(qt.coords(&SparseVector::unit(0)), SparseVector::from_pairs([(0, q(-1))]));
    }

    #[test]
    fn fractions_reduce() {
        let x = q_frac(6, -4);
        assert_eq!(x, q_frac(-3, 2));
        assert!(x.denom() > &BigInt::zero());
    }
}
