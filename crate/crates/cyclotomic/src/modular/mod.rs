//! The rank-m modular complex, tensored down to coset coinvariants, and the map μ(N)
//! into the dihedral cochain complex.
//!
//! A degree-l generator is (coset α, divided power t^{[e]}) ⊗ [B₁]∧…∧[B_l] where the
//! blocks partition a frame g of column vectors. Generators are stored over standard
//! frames: x ⊗ g·[std] is rewritten through the right action α ↦ α·g and
//! t^{[f]} ↦ Σ_e coeff_{τ^f}((g⁻¹τ)^e) t^{[e]}.

mod d3;
mod lattice;

use std::collections::HashMap;
use std::sync::Mutex;

use num_integer::Integer;
use thiserror::Error;

use crate::dihedral::{circle_of, BasisKey, Coalgebra, WedgeElement};
use crate::linalg::{q, rank_of_rows, Echelon, Quotient, Rational, SparseMatrix, SparseVector};
use crate::words::{compositions, monomials, shuffles, var, LinearForm, TPolynomial};

pub use d3::{dihedral_from_shuffle_check, D3Report};
pub use lattice::{cols_to_mat, determinant, inverse, mat_mul, IntMatrix, IntVector};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModularError {
    #[error("vectors do not form a basis of the lattice")]
    NotABasis,
    #[error("angle notation needs Σvᵢ = 0")]
    NotClosed,
    #[error("rank {0} outside the supported range")]
    UnsupportedRank(usize),
}

/// The three notations for generators of the modular complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Notation {
    /// [v₁,…,vₘ]
    Basis(Vec<IntVector>),
    /// ⟨v₀,…,vₘ⟩ with Σvᵢ = 0, equal to [v₁,…,vₘ]
    Angle(Vec<IntVector>),
    /// [v₁:…:vₘ] := [v₂−v₁, …, vₘ−vₘ₋₁, −vₘ]
    Colon(Vec<IntVector>),
}

pub fn colon_to_basis(vs: &[IntVector]) -> Vec<IntVector> {
    let d = vs[0].len();
    let mut out: Vec<IntVector> = vs.windows(2).map(|p| (0..d).map(|c| p[1][c] - p[0][c]).collect()).collect();
    out.push(vs[vs.len() - 1].iter().map(|x| -x).collect());
    out
}

/// Inverse of `colon_to_basis`.
pub fn basis_to_colon(xs: &[IntVector]) -> Vec<IntVector> {
    let m = xs.len();
    let d = xs[0].len();
    let mut us = vec![vec![0; d]; m];
    us[m - 1] = xs[m - 1].iter().map(|x| -x).collect();
    for i in (0..m - 1).rev() {
        us[i] = (0..d).map(|c| us[i + 1][c] - xs[i][c]).collect();
    }
    us
}

pub fn notation_convert(g: &Notation) -> Result<Vec<IntVector>, ModularError> {
    let vs = match g {
        Notation::Basis(v) => v.clone(),
        Notation::Angle(v) => {
            let d = v[0].len();
            if (0..d).any(|c| v.iter().map(|x| x[c]).sum::<i64>() != 0) {
                return Err(ModularError::NotClosed);
            }
            v[1..].to_vec()
        }
        Notation::Colon(v) => colon_to_basis(v),
    };
    if vs.len() != vs[0].len() || determinant(&cols_to_mat(&vs)).abs() != 1 {
        return Err(ModularError::NotABasis);
    }
    Ok(vs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShuffleKind {
    /// s(v₁,…,v_k | v_{k+1},…,vₘ)
    Stuffle,
    /// s(v₁:…:v_k | v_{k+1}:…:vₘ)
    Colon,
}

/// One formal shuffle relation over the standard basis: each term is an arrangement
/// (list of column vectors) with coefficient +1.
#[derive(Clone, Debug)]
pub struct ShuffleFamily {
    pub kind: ShuffleKind,
    pub k: usize,
    pub terms: Vec<Vec<IntVector>>,
}

pub fn standard_basis(m: usize) -> Vec<IntVector> {
    (0..m).map(|j| (0..m).map(|i| i64::from(i == j)).collect()).collect()
}

/// The shuffle relations applied to arbitrary vectors `vs`.
pub fn shuffle_terms(vs: &[IntVector], k: usize, kind: ShuffleKind) -> Vec<Vec<IntVector>> {
    shuffles(k, vs.len() - k)
        .iter()
        .map(|s| {
            let arr = s.apply(vs);
            match kind {
                ShuffleKind::Stuffle => arr,
                ShuffleKind::Colon => colon_to_basis(&arr),
            }
        })
        .collect()
}

pub fn shuffle_rows(m: usize) -> Vec<ShuffleFamily> {
    let e = standard_basis(m);
    let mut out = Vec::new();
    for k in 1..m {
        for kind in [ShuffleKind::Stuffle, ShuffleKind::Colon] {
            out.push(ShuffleFamily { kind, k, terms: shuffle_terms(&e, k, kind) });
        }
    }
    out
}

/// ∂ of a single block [w₁,…,w_k]: with w₀ = −Σwᵢ,
/// −Σ_{cyclic} Σ_{j=1}^{k−1} [u₁,…,u_j]∧[u_{j+1},…,u_k].
pub fn block_boundary(block: &[IntVector]) -> Vec<(Vec<Vec<IntVector>>, i64)> {
    let k = block.len();
    if k < 2 {
        return Vec::new();
    }
    let d = block[0].len();
    let w0: IntVector = (0..d).map(|c| -block.iter().map(|v| v[c]).sum::<i64>()).collect();
    let mut v = vec![w0];
    v.extend(block.iter().cloned());
    let mut out = Vec::new();
    for i in 0..=k {
        let u: Vec<IntVector> = (0..k).map(|r| v[(i + r) % (k + 1)].clone()).collect();
        for j in 1..k {
            out.push((vec![u[..j].to_vec(), u[j..].to_vec()], -1));
        }
    }
    out
}

/// ∂ on a wedge of blocks, extended by the Leibniz rule with sign (−1)^i on the
/// i-th block counted from 0, so that a single block gets exactly the cyclic formula.
pub fn differential(blocks: &[Vec<IntVector>]) -> Vec<(Vec<Vec<IntVector>>, i64)> {
    let mut out = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        let s = if i % 2 == 0 { 1 } else { -1 };
        for (nb, c) in block_boundary(b) {
            let mut new = blocks[..i].to_vec();
            new.extend(nb);
            new.extend_from_slice(&blocks[i + 1..]);
            out.push((new, s * c));
        }
    }
    out
}

/// Stable sort of blocks by size; returns (shape, concatenated frame columns, sign of the
/// block permutation).
pub fn canon_shape_blocks(blocks: &[Vec<IntVector>]) -> (Vec<usize>, Vec<IntVector>, i64) {
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| blocks[i].len());
    let mut inv = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] {
                inv += 1;
            }
        }
    }
    let shape = order.iter().map(|&i| blocks[i].len()).collect();
    let cols = order.iter().flat_map(|&i| blocks[i].iter().cloned()).collect();
    (shape, cols, if inv % 2 == 0 { 1 } else { -1 })
}

/// Residue vectors α mod N with gcd(α₁,…,αₘ,N) = 1.
pub fn cosets(n: i64, m: usize) -> Vec<Vec<i64>> {
    crate::dihedral::all_alphas(n, m).into_iter().filter(|a| a.iter().fold(n, |g, x| g.gcd(x)) == 1).collect()
}

type Table = HashMap<Vec<u32>, Vec<(Vec<u32>, Rational)>>;

/// MC*(Γ₁(N; m), S^{w−m}) as a finite complex of free modules with relation rows.
#[derive(Debug)]
pub struct ModularComplex {
    pub level: i64,
    pub weight: u32,
    pub rank: usize,
    pub cosets: Vec<Vec<i64>>,
    pub monos: Vec<Vec<u32>>,
    /// shapes[l-1]: sorted block sizes of degree-l generators.
    pub shapes: Vec<Vec<Vec<usize>>>,
    coset_pos: HashMap<Vec<i64>, usize>,
    mono_pos: HashMap<Vec<u32>, usize>,
    tables: Mutex<HashMap<IntMatrix, std::sync::Arc<Table>>>,
}

impl ModularComplex {
    pub fn new(level: i64, weight: u32, rank: usize) -> Result<Self, ModularError> {
        if !(1..=3).contains(&rank) {
            return Err(ModularError::UnsupportedRank(rank));
        }
        assert!(weight as usize >= rank);
        let cosets = cosets(level, rank);
        let monos = monomials(weight - rank as u32, rank);
        let shapes = (1..=rank)
            .map(|l| {
                let mut s: Vec<Vec<usize>> = compositions(rank as u32, l)
                    .into_iter()
                    .map(|c| {
                        let mut v: Vec<usize> = c.into_iter().map(|x| x as usize).collect();
                        v.sort();
                        v
                    })
                    .collect();
                s.sort();
                s.dedup();
                s
            })
            .collect();
        let coset_pos = cosets.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let mono_pos = monos.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Ok(ModularComplex {
            level,
            weight,
            rank,
            cosets,
            monos,
            shapes,
            coset_pos,
            mono_pos,
            tables: Mutex::default(),
        })
    }

    pub fn ngens(&self, l: usize) -> usize {
        self.shapes[l - 1].len() * self.cosets.len() * self.monos.len()
    }

    pub fn index(&self, l: usize, shape: &[usize], coset: &[i64], mono: &[u32]) -> usize {
        let s = self.shapes[l - 1].iter().position(|x| x == shape).expect("shape");
        (s * self.cosets.len() + self.coset_pos[coset]) * self.monos.len() + self.mono_pos[mono]
    }

    pub fn generator(&self, l: usize, idx: usize) -> (&[usize], &[i64], &[u32]) {
        let nm = self.monos.len();
        let nc = self.cosets.len();
        (&self.shapes[l - 1][idx / (nc * nm)], &self.cosets[(idx / nm) % nc], &self.monos[idx % nm])
    }

    /// f ↦ [(e, coeff of τ^f in (g⁻¹τ)^e)] for the frame g.
    fn table(&self, g: &IntMatrix) -> std::sync::Arc<Table> {
        if let Some(t) = self.tables.lock().expect("table cache").get(g) {
            return t.clone();
        }
        let a = inverse(g).expect("unimodular frame");
        let forms: Vec<LinearForm> = a.clone();
        let mut tab: Table = HashMap::new();
        for e in &self.monos {
            let mut p = TPolynomial::one(self.rank);
            p.terms.clear();
            p.add_term(e.clone(), q(1));
            for (f, v) in p.substitute(&forms).terms {
                tab.entry(f).or_default().push((e.clone(), v));
            }
        }
        let t = std::sync::Arc::new(tab);
        self.tables.lock().expect("table cache").entry(g.clone()).or_insert(t).clone()
    }

    /// (α, t^{[f]}) ⊗ g·[standard blocks of `shape`], in degree-l coordinates.
    pub fn element(&self, l: usize, shape: &[usize], coset: &[i64], f: &[u32], g: &IntMatrix, coef: i64) -> SparseVector {
        let m = self.rank;
        let a2: Vec<i64> =
            (0..m).map(|j| (0..m).map(|i| coset[i] * g[i][j]).sum::<i64>().rem_euclid(self.level)).collect();
        let mut out = SparseVector::new();
        if let Some(list) = self.table(g).get(f) {
            for (e, v) in list {
                out.add_at(self.index(l, shape, &a2, e), &(v * q(coef)));
            }
        }
        out
    }

    /// (α, t^{[f]}) ⊗ (an arbitrary arrangement of blocks).
    pub fn arrangement(&self, l: usize, coset: &[i64], f: &[u32], blocks: &[Vec<IntVector>], coef: i64) -> SparseVector {
        let (shape, cols, s) = canon_shape_blocks(blocks);
        self.element(l, &shape, coset, f, &cols_to_mat(&cols), coef * s)
    }

    pub fn standard_blocks(&self, shape: &[usize]) -> Vec<Vec<IntVector>> {
        let e = standard_basis(self.rank);
        let mut out = Vec::new();
        let mut p = 0;
        for &k in shape {
            out.push(e[p..p + k].to_vec());
            p += k;
        }
        out
    }

    /// Relation rows in degree l: shuffles inside each block, [v] = [−v] for
    /// rank-one blocks, and anticommutation of adjacent blocks.
    pub fn relations(&self, l: usize) -> SparseMatrix {
        let mut rows = Vec::new();
        for shape in &self.shapes[l - 1] {
            let bl = self.standard_blocks(shape);
            for a in &self.cosets {
                for f in &self.monos {
                    for (bi, b) in bl.iter().enumerate() {
                        let k = b.len();
                        let mut fams: Vec<Vec<(Vec<IntVector>, i64)>> = Vec::new();
                        if k == 1 {
                            fams.push(vec![(vec![b[0].clone()], 1), (vec![b[0].iter().map(|x| -x).collect()], -1)]);
                        }
                        for kk in 1..k {
                            for kind in [ShuffleKind::Stuffle, ShuffleKind::Colon] {
                                fams.push(shuffle_terms(b, kk, kind).into_iter().map(|t| (t, 1)).collect());
                            }
                        }
                        for fam in fams {
                            let mut row = SparseVector::new();
                            for (nb, c) in fam {
                                let mut blocks = bl.clone();
                                blocks[bi] = nb;
                                row.axpy(&q(1), &self.arrangement(l, a, f, &blocks, c));
                            }
                            if !row.is_zero() {
                                rows.push(row);
                            }
                        }
                    }
                    for i in 0..bl.len().saturating_sub(1) {
                        let mut swapped = bl.clone();
                        swapped.swap(i, i + 1);
                        let mut row = self.arrangement(l, a, f, &bl, 1);
                        row.axpy(&q(1), &self.arrangement(l, a, f, &swapped, 1));
                        if !row.is_zero() {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        SparseMatrix::from_rows(rows, self.ngens(l))
    }

    /// ∂: degree l → degree l+1 on free generators.
    pub fn boundary(&self, l: usize) -> SparseMatrix {
        let rows = (0..self.ngens(l))
            .map(|idx| {
                let (shape, a, f) = self.generator(l, idx);
                let bl = self.standard_blocks(shape);
                let mut v = SparseVector::new();
                for (blocks, c) in differential(&bl) {
                    v.axpy(&q(1), &self.arrangement(l + 1, a, f, &blocks, c));
                }
                v
            })
            .collect();
        SparseMatrix::from_rows(rows, self.ngens(l + 1))
    }

    /// All differentials together with the relation matrices in each degree.
    pub fn complex(&self) -> McComplex {
        McComplex {
            relations: (1..=self.rank).map(|l| self.relations(l)).collect(),
            differentials: (1..self.rank).map(|l| self.boundary(l)).collect(),
        }
    }

    /// μ^l from degree-l free generators to Λ^l𝒟 in bidegree (w, m).
    pub fn mu(&self, coalgebra: &Coalgebra, l: usize) -> (SparseMatrix, Vec<Vec<BasisKey>>) {
        assert_eq!(coalgebra.level, self.level);
        let basis = coalgebra.wedge_basis(self.weight, self.rank, l);
        let target: HashMap<&Vec<BasisKey>, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut factor_cache: HashMap<(Vec<i64>, Vec<u32>), Vec<(BasisKey, Rational)>> = HashMap::new();
        let rows = (0..self.ngens(l))
            .map(|idx| {
                let (shape, a, e) = self.generator(l, idx);
                let mut acc: Vec<(Vec<BasisKey>, Rational)> = vec![(vec![], q(1))];
                let mut p = 0;
                for &k in shape {
                    let key = (a[p..p + k].to_vec(), e[p..p + k].to_vec());
                    p += k;
                    let fct = factor_cache.entry(key.clone()).or_insert_with(|| mu_factor(coalgebra, &key.0, &key.1));
                    let mut next = Vec::new();
                    for (ks, c) in &acc {
                        for (b, x) in fct.iter() {
                            let mut nk = ks.clone();
                            nk.push(*b);
                            next.push((nk, c * x));
                        }
                    }
                    acc = next;
                }
                let mut w = WedgeElement::default();
                for (ks, c) in acc {
                    w.add_monomial(&ks, &c);
                }
                w.terms.iter().map(|(k, x)| (target[k], x.clone())).collect()
            })
            .collect();
        (SparseMatrix::from_rows(rows, basis.len()), basis)
    }
}

/// Depth-k dihedral coordinates of the coefficient of t^{e} in {−Σα, α | 0:t₁:…:t_k}.
fn mu_factor(coalgebra: &Coalgebra, a: &[i64], e: &[u32]) -> Vec<(BasisKey, Rational)> {
    let k = a.len();
    let w = e.iter().sum::<u32>() + k as u32;
    let piece = coalgebra.piece(w, k);
    let mut pos: Vec<LinearForm> = vec![vec![0; k + 1]];
    pos.extend((1..=k).map(|i| var(i, k + 1)));
    let mut ee = vec![0u32];
    ee.extend_from_slice(e);
    let v: SparseVector =
        piece.genfun(&circle_of(a, coalgebra.level), &pos).into_iter().map(|(g, p)| (g, p.coefficient(&ee))).collect();
    piece.coords(&v).iter().map(|(i, x)| (BasisKey { weight: w, depth: k, idx: i }, x.clone())).collect()
}

#[derive(Clone, Debug)]
pub struct McComplex {
    pub relations: Vec<SparseMatrix>,
    pub differentials: Vec<SparseMatrix>,
}

impl McComplex {
    pub fn quotients(&self) -> Vec<Quotient> {
        self.relations.iter().map(|r| Quotient::new(r.ncols, r)).collect()
    }

    /// ∂∘∂ lands in the relation span two degrees up.
    pub fn boundary_squared_vanishes(&self) -> bool {
        self.differentials.windows(2).enumerate().all(|(i, p)| {
            let e = Echelon::from_matrix(&self.relations[i + 2]);
            p[0].compose(&p[1]).rows.iter().all(|r| e.contains(r))
        })
    }

    /// ∂ maps relation rows into the relation span of the next degree.
    pub fn boundary_well_defined(&self) -> bool {
        self.differentials.iter().enumerate().all(|(i, d)| {
            let e = Echelon::from_matrix(&self.relations[i + 1]);
            self.relations[i].rows.iter().all(|r| e.contains(&d.left_apply(r)))
        })
    }
}

/// Verification record for μ(N) in bidegree (w, m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuReport {
    pub source_dims: Vec<usize>,
    pub target_dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub kills_relations: bool,
    pub chain_map: bool,
}

impl MuReport {
    pub fn surjective(&self) -> bool {
        self.ranks == self.target_dims
    }

    pub fn bijective(&self) -> bool {
        self.surjective() && self.source_dims == self.target_dims
    }
}

pub fn mu_map(n: i64, w: u32, m: usize) -> Result<Vec<SparseMatrix>, ModularError> {
    let mc = ModularComplex::new(n, w, m)?;
    let c = Coalgebra::new(n);
    Ok((1..=m).map(|l| mc.mu(&c, l).0).collect())
}

pub fn mc_complex(n: i64, w: u32, m: usize) -> Result<McComplex, ModularError> {
    Ok(ModularComplex::new(n, w, m)?.complex())
}

/// Builds both complexes and checks that μ(N) is a well-defined surjective chain map.
pub fn verify_mu(n: i64, w: u32, m: usize) -> Result<MuReport, ModularError> {
    let mc = ModularComplex::new(n, w, m)?;
    let c = Coalgebra::new(n);
    let cx = mc.complex();
    let dih = c.cochain_complex(w, m);
    let mus: Vec<SparseMatrix> = (1..=m).map(|l| mc.mu(&c, l).0).collect();
    let kills_relations =
        cx.relations.iter().zip(&mus).all(|(rel, mu)| rel.rows.iter().all(|r| mu.left_apply(r).is_zero()));
    let chain_map = (0..m - 1).all(|l| {
        let lhs = cx.differentials[l].compose(&mus[l + 1]);
        let rhs = mus[l].compose(&dih.differentials[l]);
        lhs == rhs
    });
    let source_dims = cx.quotients().iter().map(|q| q.dim()).collect();
    let ranks = mus.iter().map(|mu| rank_of_rows(&mu.rows)).collect();
    Ok(MuReport { source_dims, target_dims: dih.dims(), ranks, kills_relations, chain_map })
}
