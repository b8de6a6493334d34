//! Voronoi cells of type A_m as formal oriented symbols, their boundary maps, and the
//! maps ψ from the rank-2 and rank-3 modular complexes.
//!
//! A cell φ(l₁,…,lₙ) is the convex hull of the rank-one forms (lᵢ, x)². Since
//! φ(l) = φ(−l), vertices are stored up to sign (first nonzero entry positive) and the
//! orientation is carried by the order in which they are listed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{q, rank, Rational, SparseMatrix};
use crate::modular::{basis_to_colon, cols_to_mat, determinant, differential, shuffle_terms, IntVector, ShuffleKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VoronoiError {
    #[error("quadratic form is not symmetric")]
    NotSymmetric,
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("enumeration bound {bound} cannot certify the minimal shell (need {needed})")]
    BoundTooSmall { bound: i64, needed: i64 },
    #[error("vertex {0:?} is not a primitive vector")]
    NotPrimitive(IntVector),
    #[error("vertex {0:?} repeats up to sign")]
    RepeatedVertex(IntVector),
    #[error("cell on {0} vertices is not a simplex")]
    NotSimplicial(usize),
    #[error("vectors do not form a basis of the lattice")]
    NotABasis,
    #[error("rank {0} is not supported (only 2 and 3)")]
    UnsupportedRank(usize),
}

/// A symmetric integer Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    gram: Vec<Vec<i64>>,
}

impl QuadForm {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, VoronoiError> {
        let m = gram.len();
        if gram.iter().any(|r| r.len() != m) || (0..m).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(VoronoiError::NotSymmetric);
        }
        Ok(QuadForm { gram })
    }

    /// Gram matrix of the root lattice A_m in a basis of simple roots.
    pub fn a_m(m: usize) -> Self {
        let gram = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
            .collect();
        QuadForm { gram }
    }

    pub fn identity(m: usize) -> Self {
        QuadForm { gram: (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect() }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn eval(&self, x: &[i64]) -> i64 {
        let m = self.rank();
        (0..m).map(|i| (0..m).map(|j| self.gram[i][j] * x[i] * x[j]).sum::<i64>()).sum()
    }

    /// Gauss–Jordan over Q; returns the inverse if all pivots are positive.
    fn positive_inverse(&self) -> Option<Vec<Vec<Rational>>> {
        let m = self.rank();
        let mut a: Vec<Vec<Rational>> = self
            .gram
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().map(|&x| q(x)).chain((0..m).map(|j| q(i64::from(i == j)))).collect())
            .collect();
        // Symmetric elimination without row swaps: the pivots are ratios of leading minors.
        for c in 0..m {
            if !a[c][c].is_positive() {
                return None;
            }
            let p = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x /= &p;
            }
            let pivot_row = a[c].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != c && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Some(a.into_iter().map(|r| r[m..].to_vec()).collect())
    }

    pub fn is_positive_definite(&self) -> bool {
        self.positive_inverse().is_some()
    }
}

fn box_vectors(m: usize, bound: i64) -> Vec<IntVector> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// All nonzero lattice vectors attaining min q on L∖0, found in the box |xᵢ| ≤ bound.
///
/// A vector with q(x) ≤ μ satisfies xᵢ² ≤ μ·(Q⁻¹)ᵢᵢ, so the box certifies the shell once
/// bound² ≥ μ·(Q⁻¹)ᵢᵢ for every i.
pub fn minimal_vectors(q_form: &QuadForm, bound: i64) -> Result<Vec<IntVector>, VoronoiError> {
    let inv = q_form.positive_inverse().ok_or(VoronoiError::NotPositiveDefinite)?;
    let m = q_form.rank();
    let candidates: Vec<IntVector> = box_vectors(m, bound).into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
    let mu = candidates.iter().map(|v| q_form.eval(v)).min().unwrap_or(0);
    let worst = (0..m).map(|i| q(mu) * &inv[i][i]).max().unwrap_or_else(Rational::zero);
    if q(bound * bound) < worst {
        let needed = (bound..).find(|b| q(b * b) >= worst).expect("finite bound");
        return Err(VoronoiError::BoundTooSmall { bound, needed });
    }
    Ok(candidates.into_iter().filter(|v| q_form.eval(v) == mu).collect())
}

/// Upper triangle of l·lᵀ: coordinates of φ(l) in Q(V_m).
fn rank_one(l: &[i64]) -> Vec<i64> {
    let m = l.len();
    (0..m).flat_map(|i| (i..m).map(move |j| l[i] * l[j])).collect()
}

fn int_rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rank(&SparseMatrix::from_dense(rows))
}

/// The minimal vectors determine the form: their rank-one forms span Q(V_m).
pub fn is_perfect(q_form: &QuadForm, bound: i64) -> Result<bool, VoronoiError> {
    let mins = minimal_vectors(q_form, bound)?;
    let m = q_form.rank();
    let rows: Vec<Vec<i64>> = mins.iter().map(|l| rank_one(l)).collect();
    Ok(int_rank(&rows) == m * (m + 1) / 2)
}

/// The common value of the form on the vertices of a cell, if there is one.
pub fn form_value_on(q_form: &QuadForm, cell: &VCell) -> Option<i64> {
    let vals: BTreeSet<i64> = cell.vertices().iter().map(|l| q_form.eval(l)).collect();
    (vals.len() == 1).then(|| *vals.iter().next().expect("one value"))
}

/// Sign normalization: first nonzero entry positive.
pub fn normalize(v: &[i64]) -> Result<IntVector, VoronoiError> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g != 1 {
        return Err(VoronoiError::NotPrimitive(v.to_vec()));
    }
    let first = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
    Ok(if first < 0 { v.iter().map(|x| -x).collect() } else { v.to_vec() })
}

fn perm_sign<T: Ord + Clone>(xs: &[T]) -> (Vec<T>, i64) {
    let mut v = xs.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len().saturating_sub(1 + i) {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (v, sign)
}

/// φ(l₁,…,lₙ) with the orientation given by the vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VCell {
    order: Vec<IntVector>,
}

impl VCell {
    pub fn new(vertices: &[IntVector]) -> Result<Self, VoronoiError> {
        let mut order = Vec::with_capacity(vertices.len());
        let mut seen = BTreeSet::new();
        for v in vertices {
            let n = normalize(v)?;
            if !seen.insert(n.clone()) {
                return Err(VoronoiError::RepeatedVertex(v.clone()));
            }
            order.push(n);
        }
        Ok(VCell { order })
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.order
    }

    pub fn vertex_set(&self) -> BTreeSet<IntVector> {
        self.order.iter().cloned().collect()
    }

    /// Dimension of the cell in the projectivized cone: #vertices − 1 for a simplex.
    pub fn dim(&self) -> usize {
        self.order.len().saturating_sub(1)
    }

    /// Rank of the sublattice spanned by the vertices.
    pub fn rank(&self) -> usize {
        int_rank(&self.order)
    }

    pub fn ambient_rank(&self) -> usize {
        self.order.first().map_or(0, |v| v.len())
    }

    pub fn is_simplicial(&self) -> bool {
        let rows: Vec<Vec<i64>> = self.order.iter().map(|l| rank_one(l)).collect();
        int_rank(&rows) == self.order.len()
    }

    /// Sorted vertices together with the sign of the sorting permutation.
    pub fn canonical(&self) -> (Vec<IntVector>, i64) {
        perm_sign(&self.order)
    }

    /// Facets with the signs (−1)^{i+1}, i counted from 0.
    pub fn facets(&self) -> Vec<(VCell, i64)> {
        (0..self.order.len())
            .map(|i| {
                let mut o = self.order.clone();
                o.remove(i);
                (VCell { order: o }, if i % 2 == 0 { -1 } else { 1 })
            })
            .collect()
    }
}

/// Finite chain Σ cᵢ φᵢ keyed by sorted vertex lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellChain {
    pub terms: BTreeMap<Vec<IntVector>, Rational>,
}

impl CellChain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn cell(c: &VCell) -> Self {
        let mut out = Self::zero();
        out.add_cell(c, &Rational::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_cell(&mut self, c: &VCell, x: &Rational) {
        let (key, s) = c.canonical();
        self.add_key(key, &(x * q(s)));
    }

    fn add_key(&mut self, key: Vec<IntVector>, x: &Rational) {
        if x.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += x;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &CellChain, x: &Rational) {
        for (k, c) in &other.terms {
            self.add_key(k.clone(), &(c * x));
        }
    }

    pub fn scaled(&self, x: &Rational) -> CellChain {
        let mut out = Self::zero();
        out.add_scaled(self, x);
        out
    }

    pub fn cells(&self) -> impl Iterator<Item = (VCell, &Rational)> {
        self.terms.iter().map(|(k, c)| (VCell { order: k.clone() }, c))
    }

    /// Union of all vertices in the support.
    pub fn support_vertices(&self) -> BTreeSet<IntVector> {
        self.terms.keys().flatten().cloned().collect()
    }
}

/// d: alternating sum of facets, first facet (omitting the first vertex) with sign −1.
/// This orientation makes d φ(v₁,v₂,v₃,v₄,v₁₂,v₂₃) start with +φ(v₁,v₂,v₃,v₄,v₁₂) and
/// makes ψ commute with the differentials on the nose. Faces whose vertices span less than the full lattice
/// lie at infinity of the symmetric space and are not cells, so they are dropped.
pub fn boundary(c: &CellChain) -> Result<CellChain, VoronoiError> {
    let mut out = CellChain::zero();
    for (cell, x) in c.cells() {
        if !cell.is_simplicial() {
            return Err(VoronoiError::NotSimplicial(cell.order.len()));
        }
        let m = cell.ambient_rank();
        for (f, s) in cell.facets() {
            if f.rank() == m {
                out.add_cell(&f, &(x * q(s)));
            }
        }
    }
    Ok(out)
}

fn add(a: &[i64], b: &[i64]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg_sum(vs: &[IntVector]) -> IntVector {
    let d = vs[0].len();
    (0..d).map(|c| -vs.iter().map(|v| v[c]).sum::<i64>()).collect()
}

fn is_basis(vs: &[IntVector]) -> bool {
    vs.len() == vs[0].len() && determinant(&cols_to_mat(vs)).abs() == 1
}

/// The cell of type A_m on the vectors v_{i,j} = vᵢ + … + v_j (indices mod m+1,
/// v_{m+1} = −Σvᵢ, the full cyclic sum excluded). Each ±-class is listed once, by
/// increasing length and then starting index.
pub fn am_cell(basis: &[IntVector]) -> Result<VCell, VoronoiError> {
    if basis.is_empty() || !is_basis(basis) {
        return Err(VoronoiError::NotABasis);
    }
    let m = basis.len();
    let mut v = basis.to_vec();
    v.push(neg_sum(basis));
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    for len in 1..=m {
        for i in 0..=m {
            let s = (1..len).fold(v[i].clone(), |acc, k| add(&acc, &v[(i + k) % (m + 1)]));
            let n = normalize(&s)?;
            if seen.insert(n) {
                order.push(s);
            }
        }
    }
    VCell::new(&order)
}

/// ψ on a wedge of blocks whose columns form a basis of Z^m, m ∈ {2, 3}:
/// [a,b] ↦ φ(a,b,−a−b), [a]∧[b] ↦ φ(a,b),
/// [a,b,c] ↦ φ(a,b,c,d,a+b) − φ(a,b,c,d,b+c) with d = −a−b−c,
/// [a,b]∧[c] ↦ φ(a,b,−a−b,c), [a]∧[b]∧[c] ↦ φ(a,b,c).
/// Other block orders follow by concatenation, consistent with anticommutation.
pub fn psi(blocks: &[Vec<IntVector>]) -> Result<CellChain, VoronoiError> {
    let cols: Vec<IntVector> = blocks.iter().flatten().cloned().collect();
    let m = cols.first().map_or(0, |v| v.len());
    if !(2..=3).contains(&m) {
        return Err(VoronoiError::UnsupportedRank(m));
    }
    if !is_basis(&cols) {
        return Err(VoronoiError::NotABasis);
    }
    if blocks.len() == 1 && m == 3 {
        let [a, b, c] = [&cols[0], &cols[1], &cols[2]];
        let d = neg_sum(&cols);
        let mut out = CellChain::cell(&VCell::new(&[a.clone(), b.clone(), c.clone(), d.clone(), add(a, b)])?);
        out.add_cell(&VCell::new(&[a.clone(), b.clone(), c.clone(), d, add(b, c)])?, &-Rational::one());
        return Ok(out);
    }
    let mut verts = Vec::new();
    for b in blocks {
        match b.len() {
            1 => verts.push(b[0].clone()),
            2 => {
                verts.extend(b.iter().cloned());
                verts.push(neg_sum(b));
            }
            k => return Err(VoronoiError::UnsupportedRank(k)),
        }
    }
    Ok(CellChain::cell(&VCell::new(&verts)?))
}

pub fn psi2(blocks: &[Vec<IntVector>]) -> Result<CellChain, VoronoiError> {
    match blocks.iter().map(Vec::len).sum::<usize>() {
        2 => psi(blocks),
        m => Err(VoronoiError::UnsupportedRank(m)),
    }
}

pub fn psi3(blocks: &[Vec<IntVector>]) -> Result<CellChain, VoronoiError> {
    match blocks.iter().map(Vec::len).sum::<usize>() {
        3 => psi(blocks),
        m => Err(VoronoiError::UnsupportedRank(m)),
    }
}

/// ψ extended linearly to a formal sum of wedges.
pub fn psi_sum(terms: &[(Vec<Vec<IntVector>>, i64)]) -> Result<CellChain, VoronoiError> {
    let mut out = CellChain::zero();
    for (blocks, c) in terms {
        out.add_scaled(&psi(blocks)?, &q(*c));
    }
    Ok(out)
}

/// ψ∂x − dψx.
pub fn chain_defect(blocks: &[Vec<IntVector>]) -> Result<CellChain, VoronoiError> {
    let mut out = psi_sum(&differential(blocks))?;
    out.add_scaled(&boundary(&psi(blocks)?)?, &-Rational::one());
    Ok(out)
}

/// How the ψ-image of a relation sits in the Voronoi complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationImage {
    Zero,
    /// ± d of the 5-simplex spanned by the support, listed in sorted vertex order.
    SimplexBoundary(i64),
    Other,
}

/// Classifies a chain as 0, ±d(simplex on its support), or neither.
pub fn classify_relation_image(c: &CellChain) -> Result<RelationImage, VoronoiError> {
    if c.is_zero() {
        return Ok(RelationImage::Zero);
    }
    let verts: Vec<IntVector> = c.support_vertices().into_iter().collect();
    let m = verts[0].len();
    if verts.len() != m * (m + 1) / 2 {
        return Ok(RelationImage::Other);
    }
    let cell = VCell::new(&verts)?;
    if !cell.is_simplicial() {
        return Ok(RelationImage::Other);
    }
    let d = boundary(&CellChain::cell(&cell))?;
    for s in [1, -1] {
        if d.scaled(&q(s)) == *c {
            return Ok(RelationImage::SimplexBoundary(s));
        }
    }
    Ok(RelationImage::Other)
}

/// The second shuffle relation s(u₁|u₂:u₃) in basis notation for v = [u₁:u₂:u₃].
pub fn second_shuffle_terms(v: &[IntVector]) -> Vec<(Vec<Vec<IntVector>>, i64)> {
    shuffle_terms(&basis_to_colon(v), 1, ShuffleKind::Colon).into_iter().map(|a| (vec![a], 1)).collect()
}

/// The first shuffle relation s(v₁|v₂,v₃).
pub fn first_shuffle_terms(v: &[IntVector]) -> Vec<(Vec<Vec<IntVector>>, i64)> {
    shuffle_terms(v, 1, ShuffleKind::Stuffle).into_iter().map(|a| (vec![a], 1)).collect()
}

/// The sign ε in ψ⁽³⁾(s(u₁|u₂:u₃)) = ε·dφ(v₁,v₂,v₃,v₄,v₁₂,v₂₃), read off at the
/// standard basis once and then frozen.
pub fn second_shuffle_sign() -> i64 {
    static SIGN: OnceLock<i64> = OnceLock::new();
    *SIGN.get_or_init(|| {
        let e = crate::modular::standard_basis(3);
        let img = psi_sum(&second_shuffle_terms(&e)).expect("standard basis");
        let d = boundary(&CellChain::cell(&am_cell(&e).expect("standard basis"))).expect("simplex");
        if img == d {
            1
        } else {
            -1
        }
    })
}

/// Bases of Z^m with all entries in [−bound, bound].
pub fn bases(m: usize, bound: i64) -> Vec<Vec<IntVector>> {
    let vs: Vec<IntVector> = box_vectors(m, bound).into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
    let mut frames: Vec<Vec<IntVector>> = vec![vec![]];
    for _ in 0..m {
        frames = frames
            .into_par_iter()
            .flat_map_iter(|f| {
                vs.iter().filter_map(move |v| {
                    let mut g = f.clone();
                    g.push(v.clone());
                    (int_rank(&g) == g.len()).then_some(g)
                })
            })
            .collect();
    }
    frames.retain(|f| is_basis(f));
    frames
}

/// Results of checking ψ on all generators built from bases with bounded entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PsiReport {
    pub rank: usize,
    pub bases: usize,
    /// ψ∂ = dψ on every generator.
    pub chain_map: bool,
    /// Shuffle relations inside rank-two blocks map to 0.
    pub block_shuffles_vanish: bool,
    /// s(v₁|v₂,v₃) ↦ 0 exactly.
    pub first_shuffle_zero: bool,
    /// s(u₁|u₂:u₃) ↦ ε·d(5-simplex) with the frozen ε.
    pub second_shuffle_boundary: bool,
    /// The remaining rank-three shuffles land in 0 or the span of 5-simplex boundaries.
    pub other_shuffles_exact: bool,
}

impl PsiReport {
    pub fn holds(&self) -> bool {
        self.chain_map
            && self.block_shuffles_vanish
            && self.first_shuffle_zero
            && self.second_shuffle_boundary
            && self.other_shuffles_exact
    }
}

fn two_block_shuffles(a: &IntVector, b: &IntVector, rest: &[Vec<IntVector>]) -> [Vec<(Vec<Vec<IntVector>>, i64)>; 2] {
    let pair = vec![a.clone(), b.clone()];
    [ShuffleKind::Stuffle, ShuffleKind::Colon].map(|kind| {
        let src = if kind == ShuffleKind::Colon { basis_to_colon(&pair) } else { pair.clone() };
        shuffle_terms(&src, 1, kind)
            .into_iter()
            .map(|blk| {
                let mut w = vec![blk];
                w.extend(rest.iter().cloned());
                (w, 1)
            })
            .collect()
    })
}

/// Checks every ψ identity on generators over bases of Z^m with entries ≤ bound.
pub fn verify_psi(m: usize, bound: i64) -> Result<PsiReport, VoronoiError> {
    if !(2..=3).contains(&m) {
        return Err(VoronoiError::UnsupportedRank(m));
    }
    let frames = bases(m, bound);
    let eps = second_shuffle_sign();
    let results: Vec<Result<[bool; 5], VoronoiError>> = frames
        .par_iter()
        .map(|f| {
            let mut ok = [true; 5];
            let wedges: Vec<Vec<Vec<IntVector>>> = if m == 2 {
                vec![vec![f.clone()], vec![vec![f[0].clone()], vec![f[1].clone()]]]
            } else {
                vec![
                    vec![f.clone()],
                    vec![vec![f[0].clone(), f[1].clone()], vec![f[2].clone()]],
                    vec![vec![f[0].clone()], vec![f[1].clone(), f[2].clone()]],
                    vec![vec![f[0].clone()], vec![f[1].clone()], vec![f[2].clone()]],
                ]
            };
            for w in &wedges {
                ok[0] &= chain_defect(w)?.is_zero();
            }
            let rest: Vec<Vec<IntVector>> = if m == 2 { vec![] } else { vec![vec![f[2].clone()]] };
            for rel in two_block_shuffles(&f[0], &f[1], &rest) {
                ok[1] &= psi_sum(&rel)?.is_zero();
            }
            if m == 3 {
                ok[2] = psi_sum(&first_shuffle_terms(f))?.is_zero();
                let second = psi_sum(&second_shuffle_terms(f))?;
                let d = boundary(&CellChain::cell(&am_cell(f)?))?;
                ok[3] = second == d.scaled(&q(eps));
                for (k, kind) in [(2, ShuffleKind::Stuffle), (2, ShuffleKind::Colon)] {
                    let src = if kind == ShuffleKind::Colon { basis_to_colon(f) } else { f.clone() };
                    let rel: Vec<_> = shuffle_terms(&src, k, kind).into_iter().map(|a| (vec![a], 1)).collect();
                    ok[4] &= classify_relation_image(&psi_sum(&rel)?)? != RelationImage::Other;
                }
            }
            Ok(ok)
        })
        .collect();
    let mut report = PsiReport {
        rank: m,
        bases: frames.len(),
        chain_map: true,
        block_shuffles_vanish: true,
        first_shuffle_zero: true,
        second_shuffle_boundary: true,
        other_shuffles_exact: true,
    };
    for r in results {
        let ok = r?;
        report.chain_map &= ok[0];
        report.block_shuffles_vanish &= ok[1];
        report.first_shuffle_zero &= ok[2];
        report.second_shuffle_boundary &= ok[3];
        report.other_shuffles_exact &= ok[4];
    }
    Ok(report)
}

/// Kind of a 3-cell on four vertices of a rank-3 lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeCell {
    /// Three of the vertices have a signed zero sum, as in φ(v₁,v₂,−v₁₂,v₃).
    Special,
    /// ±v₁±v₂±v₃±v₄ = 0 with any three a basis, as in φ(v₁,v₂,v₃,v₄).
    Generic,
    Neither,
}

fn signed_zero_sum(vs: &[&IntVector]) -> bool {
    let n = vs.len();
    (0..1u32 << (n - 1)).any(|mask| {
        let d = vs[0].len();
        (0..d).all(|c| {
            vs[0][c]
                + (1..n).map(|i| if mask >> (i - 1) & 1 == 1 { -vs[i][c] } else { vs[i][c] }).sum::<i64>()
                == 0
        })
    })
}

pub fn classify_three_cell(vs: &[IntVector]) -> ThreeCell {
    if vs.len() != 4 || int_rank(vs) != 3 {
        return ThreeCell::Neither;
    }
    for skip in 0..4 {
        let tri: Vec<&IntVector> = (0..4).filter(|&i| i != skip).map(|i| &vs[i]).collect();
        if signed_zero_sum(&tri) {
            return ThreeCell::Special;
        }
    }
    let all: Vec<&IntVector> = vs.iter().collect();
    if signed_zero_sum(&all) && is_basis(&vs[..3]) {
        ThreeCell::Generic
    } else {
        ThreeCell::Neither
    }
}

fn vertex_key(vs: &[IntVector]) -> Vec<IntVector> {
    let mut k: Vec<IntVector> = vs.iter().map(|v| normalize(v).expect("primitive")).collect();
    k.sort();
    k
}

/// Incidences between generic 3-cells and 5-simplices of type A₃.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CokerReport {
    pub bound: i64,
    pub configurations: usize,
    pub simplices: usize,
    pub generic_cells: usize,
    pub special_cells: usize,
    /// 3-faces of some simplex that are neither special nor generic.
    pub unclassified_faces: usize,
    /// Histogram: number of generic 3-cells per simplex → how many simplices.
    pub generic_per_simplex: BTreeMap<usize, usize>,
    /// Histogram over generic cells inside the box: containing simplices → how many cells.
    pub simplices_per_generic: BTreeMap<usize, usize>,
    /// The three simplices through φ(v₁,v₂,v₃,v₄) are those of the dihedral orders.
    pub standard_simplices_match: bool,
    /// The generic 3-cells of φ(v₁,v₂,v₃,v₄,v₁₂,v₂₃) are the three listed ones.
    pub standard_generic_match: bool,
    pub special_example_classified: bool,
}

impl CokerReport {
    pub fn holds(&self) -> bool {
        self.unclassified_faces == 0
            && self.generic_per_simplex.keys().eq([3].iter())
            && self.simplices_per_generic.keys().eq([3].iter())
            && self.standard_simplices_match
            && self.standard_generic_match
            && self.special_example_classified
    }
}

/// The generic 3-cells among the faces of a simplex.
fn generic_faces(simplex: &[IntVector]) -> (Vec<Vec<IntVector>>, usize, usize) {
    let n = simplex.len();
    let (mut generic, mut special, mut neither) = (Vec::new(), 0, 0);
    for skip1 in 0..n {
        for skip2 in skip1 + 1..n {
            let face: Vec<IntVector> =
                (0..n).filter(|&i| i != skip1 && i != skip2).map(|i| simplex[i].clone()).collect();
            match classify_three_cell(&face) {
                ThreeCell::Generic => generic.push(vertex_key(&face)),
                ThreeCell::Special => special += 1,
                ThreeCell::Neither => neither += 1,
            }
        }
    }
    (generic, special, neither)
}

/// Enumerates all A₃ configurations from bases with entries ≤ bound and checks the
/// incidence observations behind the acyclicity of Coker ψ⁽³⁾.
pub fn coker_observations(bound: i64) -> CokerReport {
    let frames = bases(3, bound);
    let simplices: BTreeSet<Vec<IntVector>> =
        frames.par_iter().map(|f| vertex_key(am_cell(f).expect("basis").vertices())).collect();
    let faces: Vec<(Vec<Vec<IntVector>>, usize, usize)> = simplices.par_iter().map(|s| generic_faces(s)).collect();
    let mut report = CokerReport { bound, configurations: frames.len(), simplices: simplices.len(), ..Default::default() };
    let mut incidence: HashMap<Vec<IntVector>, usize> = HashMap::new();
    let mut specials = BTreeSet::new();
    for (s, (generic, special, neither)) in simplices.iter().zip(&faces) {
        *report.generic_per_simplex.entry(generic.len()).or_default() += 1;
        report.unclassified_faces += neither;
        for g in generic {
            *incidence.entry(g.clone()).or_default() += 1;
        }
        if *special > 0 {
            for i in 0..6 {
                for j in i + 1..6 {
                    let face: Vec<IntVector> = (0..6).filter(|&k| k != i && k != j).map(|k| s[k].clone()).collect();
                    if classify_three_cell(&face) == ThreeCell::Special {
                        specials.insert(face);
                    }
                }
            }
        }
    }
    report.generic_cells = incidence.len();
    report.special_cells = specials.len();
    for (cell, count) in &incidence {
        if cell.iter().flatten().all(|x| x.abs() <= bound) {
            *report.simplices_per_generic.entry(*count).or_default() += 1;
        }
    }

    let e = crate::modular::standard_basis(3);
    let (v1, v2, v3) = (e[0].clone(), e[1].clone(), e[2].clone());
    let v4 = neg_sum(&e);
    let v12 = add(&v1, &v2);
    let v23 = add(&v2, &v3);
    let v13 = add(&v1, &v3);
    let generic = vertex_key(&[v1.clone(), v2.clone(), v3.clone(), v4.clone()]);
    let listed: BTreeSet<Vec<IntVector>> = [
        vec![v1.clone(), v2.clone(), v3.clone(), v4.clone(), v12.clone(), v23.clone()],
        vec![v2.clone(), v1.clone(), v3.clone(), v4.clone(), v12.clone(), v13.clone()],
        vec![v2.clone(), v3.clone(), v1.clone(), v4.clone(), v23.clone(), v13.clone()],
    ]
    .iter()
    .map(|s| vertex_key(s))
    .collect();
    let containing: BTreeSet<Vec<IntVector>> =
        simplices.iter().filter(|s| generic.iter().all(|v| s.contains(v))).cloned().collect();
    report.standard_simplices_match = containing == listed;

    let neg = |v: &IntVector| v.iter().map(|x| -x).collect::<IntVector>();
    let listed_generic: BTreeSet<Vec<IntVector>> = [
        vec![v1.clone(), v2.clone(), v3.clone(), v4.clone()],
        vec![v12.clone(), v4.clone(), v23.clone(), neg(&v2)],
        vec![v12.clone(), v3.clone(), neg(&v23), neg(&v1)],
    ]
    .iter()
    .map(|s| vertex_key(s))
    .collect();
    let standard = vertex_key(am_cell(&e).expect("basis").vertices());
    report.standard_generic_match = generic_faces(&standard).0.into_iter().collect::<BTreeSet<_>>() == listed_generic;
    report.special_example_classified = classify_three_cell(&[v1.clone(), v2.clone(), neg(&v12), v3.clone()]) == ThreeCell::Special;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_idempotent() {
        let v = normalize(&[0, -2, 3]).unwrap();
        assert_eq!(v, vec![0, 2, -3]);
        assert_eq!(normalize(&v).unwrap(), v);
        assert!(normalize(&[2, 4]).is_err());
    }

    #[test]
    fn odd_permutation_cancels() {
        let a = VCell::new(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let b = VCell::new(&[vec![0, 1], vec![1, 0], vec![-1, -1]]).unwrap();
        let mut c = CellChain::cell(&a);
        c.add_cell(&b, &Rational::one());
        assert!(c.is_zero());
    }

    #[test]
    fn positive_definiteness() {
        assert!(QuadForm::a_m(3).is_positive_definite());
        assert!(!QuadForm::new(vec![vec![1, 2], vec![2, 1]]).unwrap().is_positive_definite());
        assert_eq!(QuadForm::new(vec![vec![1, 2], vec![0, 1]]), Err(VoronoiError::NotSymmetric));
    }
}
