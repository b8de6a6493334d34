//! The bigraded dihedral coalgebra 𝒟_{w,m}(μ_N).
//!
//! μ_N is written additively: a circle is a tuple (g₀,…,gₘ) of residues mod N
//! with Σg ≡ 0, and the generator {g₁,…,gₘ}_{n₁,…,nₘ} has g₀ implicit. The free
//! basis of a piece is (canonical circle, composition); rotations of the circle
//! mix compositions and therefore enter as relation rows rather than as a
//! normal form.

mod cobracket;
mod complex;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_integer::Integer;

use crate::linalg::{q, Quotient, Rational, SparseMatrix, SparseVector};
use crate::words::{
    compositions, extract_coefficients, lf_add, lf_scale, lf_sub, shuffles, var, Composition, LinearForm,
    TPolynomial,
};

pub use cobracket::{wedge_sort, BasisKey, DihedralElement, WedgeElement};
pub use complex::{euler_characteristic, CochainComplex};

pub type Circle = Vec<i64>;

/// A generator {α₁,…,αₘ}_{n₁,…,nₘ} of 𝒟_{w,m}(μ_N); α₀ = −Σαᵢ is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralWord {
    pub level: i64,
    pub alphas: Vec<i64>,
    pub exps: Composition,
}

impl DihedralWord {
    pub fn new(level: i64, alphas: Vec<i64>, exps: Composition) -> Self {
        assert_eq!(alphas.len(), exps.len(), "depth mismatch");
        assert!(!exps.is_empty() && exps.iter().all(|&n| n >= 1));
        let alphas = alphas.into_iter().map(|a| a.rem_euclid(level)).collect();
        DihedralWord { level, alphas, exps }
    }

    pub fn depth(&self) -> usize {
        self.exps.len()
    }

    pub fn weight(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn circle(&self) -> Circle {
        circle_of(&self.alphas, self.level)
    }
}

/// (−Σα, α₁, …, αₘ) mod N.
pub fn circle_of(alphas: &[i64], n: i64) -> Circle {
    let s: i64 = alphas.iter().sum();
    std::iter::once((-s).rem_euclid(n)).chain(alphas.iter().map(|a| a.rem_euclid(n))).collect()
}

/// An element of the dihedral group acting on circle positions: the image
/// circle is `c[perm[i]]`, with the sign character (−1)^{m+1} on reflections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitElement {
    pub image: Circle,
    pub perm: Vec<usize>,
    pub sign: i64,
}

pub fn orbit(c: &[i64]) -> Vec<OrbitElement> {
    let len = c.len();
    let m = len - 1;
    let refl_sign = if m % 2 == 1 { 1 } else { -1 };
    let mut out = Vec::with_capacity(2 * len);
    for r in 0..len {
        let p: Vec<usize> = (0..len).map(|i| (i + r) % len).collect();
        out.push(OrbitElement { image: p.iter().map(|&j| c[j]).collect(), perm: p, sign: 1 });
        let p: Vec<usize> = (0..len).map(|i| (r + len - i) % len).collect();
        out.push(OrbitElement { image: p.iter().map(|&j| c[j]).collect(), perm: p, sign: refl_sign });
    }
    out
}

/// Lexicographic orbit minimum of a circle with the transporting permutation and sign:
/// {c | s₀:…:sₘ} = sign · {image | s_{perm(0)}:…:s_{perm(m)}}.
pub fn canonicalize(c: &[i64]) -> OrbitElement {
    orbit(c).into_iter().min_by(|a, b| a.image.cmp(&b.image)).expect("nonempty orbit")
}

/// One bigraded piece 𝒟_{w,m}(μ_N): free generators, relations and the quotient.
#[derive(Debug)]
pub struct Piece {
    pub level: i64,
    pub weight: u32,
    pub depth: usize,
    pub comps: Vec<Composition>,
    pub reps: Vec<Circle>,
    index: HashMap<(Circle, Composition), usize>,
    rep_pos: HashMap<Circle, usize>,
    pub relations: SparseMatrix,
    pub quotient: Quotient,
}

/// Relation families, in the fixed emission order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Dihedral,
    NonhomogeneousShuffle,
    HomogeneousShuffle,
    Distribution,
}

impl Piece {
    pub fn build(level: i64, weight: u32, depth: usize) -> Piece {
        Self::build_with(level, weight, depth, &Self::default_families(level))
    }

    fn default_families(level: i64) -> Vec<(Family, Vec<i64>)> {
        let mut ls: Vec<i64> = (2..=level).filter(|d| level % d == 0).collect();
        ls.push(-1);
        vec![
            (Family::Dihedral, vec![]),
            (Family::NonhomogeneousShuffle, vec![]),
            (Family::HomogeneousShuffle, vec![]),
            (Family::Distribution, ls),
        ]
    }

    /// Builds with an explicit list of relation families; the distribution family
    /// carries the list of l's to impose.
    pub fn build_with(level: i64, weight: u32, depth: usize, families: &[(Family, Vec<i64>)]) -> Piece {
        let mut piece = Self::skeleton(level, weight, depth);
        let mut rows = Vec::new();
        for (fam, ls) in families {
            rows.extend(piece.family_rows(*fam, ls));
        }
        piece.relations = SparseMatrix::from_rows(rows, piece.ngens());
        piece.quotient = Quotient::new(piece.ngens(), &piece.relations);
        piece
    }

    fn skeleton(level: i64, weight: u32, depth: usize) -> Piece {
        assert!(level >= 1 && depth >= 1 && weight as usize >= depth);
        let comps = compositions(weight, depth);
        let mut reps: Vec<Circle> =
            all_alphas(level, depth).iter().map(|a| canonicalize(&circle_of(a, level)).image).collect();
        reps.sort();
        reps.dedup();
        let mut index = HashMap::new();
        for r in &reps {
            for n in &comps {
                let k = index.len();
                index.insert((r.clone(), n.clone()), k);
            }
        }
        let rep_pos = reps.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let ngens = index.len();
        Piece {
            level,
            weight,
            depth,
            comps,
            reps,
            index,
            rep_pos,
            relations: SparseMatrix::new(ngens),
            quotient: Quotient::new(ngens, &SparseMatrix::new(ngens)),
        }
    }

    pub fn ngens(&self) -> usize {
        self.reps.len() * self.comps.len()
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn generator_index(&self, rep: &[i64], n: &[u32]) -> usize {
        self.rep_pos[rep] * self.comps.len() + self.comps.iter().position(|c| c == n).expect("composition")
    }

    pub fn generator(&self, idx: usize) -> DihedralWord {
        let rep = &self.reps[idx / self.comps.len()];
        DihedralWord::new(self.level, rep[1..].to_vec(), self.comps[idx % self.comps.len()].clone())
    }

    pub fn try_index(&self, rep: &Circle, n: &Composition) -> Option<usize> {
        self.index.get(&(rep.clone(), n.clone())).copied()
    }

    /// Expands {c | s₀:…:sₘ} = Σₙ {c}ₙ Π(sᵢ−s₀)^{nᵢ−1} over the canonical generators.
    pub fn genfun(&self, c: &[i64], s: &[LinearForm]) -> BTreeMap<usize, TPolynomial> {
        let nv = s[0].len();
        let c: Circle = c.iter().map(|x| x.rem_euclid(self.level)).collect();
        let oe = canonicalize(&c);
        let sp: Vec<&LinearForm> = oe.perm.iter().map(|&j| &s[j]).collect();
        let top = self.weight as usize - self.depth;
        let powers: Vec<Vec<TPolynomial>> = (1..=self.depth)
            .map(|i| {
                let d = lf_sub(sp[i], sp[0]);
                let base = TPolynomial::linear(&d);
                let mut v = vec![TPolynomial::one(nv)];
                for k in 1..=top {
                    let next = v[k - 1].mul(&base);
                    v.push(next);
                }
                v
            })
            .collect();
        let r0 = self.rep_pos[&oe.image] * self.comps.len();
        let mut out = BTreeMap::new();
        for (ci, n) in self.comps.iter().enumerate() {
            let mut term = TPolynomial::constant(nv, q(oe.sign));
            for (i, &ni) in n.iter().enumerate() {
                if ni > 1 {
                    term = term.mul(&powers[i][ni as usize - 1]);
                }
            }
            out.insert(r0 + ci, term);
        }
        out
    }

    /// The coefficient relations of an identity Σ ± genfun = 0 in the gauge t₀ = 0.
    fn extract(&self, identity: &BTreeMap<usize, TPolynomial>) -> Vec<SparseVector> {
        extract_coefficients(identity, 0, self.weight - self.depth as u32).expect("degree within budget")
    }

    pub fn family_rows(&self, fam: Family, ls: &[i64]) -> Vec<SparseVector> {
        let n = self.level;
        let m = self.depth;
        let nv = m + 1;
        let t: Vec<LinearForm> = (0..nv).map(|i| var(i, nv)).collect();
        let mut rows = Vec::new();
        let alphas = all_alphas(n, m);
        match fam {
            Family::Dihedral => {
                for a in &alphas {
                    let c = circle_of(a, n);
                    for oe in orbit(&c) {
                        let mut d = self.genfun(&c, &t);
                        let tp: Vec<LinearForm> = oe.perm.iter().map(|&j| t[j].clone()).collect();
                        add_into(&mut d, &self.genfun(&oe.image, &tp), &q(-oe.sign));
                        rows.extend(self.extract(&d));
                    }
                }
            }
            Family::NonhomogeneousShuffle => {
                for k in 1..m {
                    let sh = shuffles(k, m - k);
                    for a in &alphas {
                        let mut d = BTreeMap::new();
                        for s in &sh {
                            let aa = s.apply(a);
                            let pos: Vec<LinearForm> =
                                std::iter::once(t[0].clone()).chain(s.sigma.iter().map(|&i| t[1 + i].clone())).collect();
                            add_into(&mut d, &self.genfun(&circle_of(&aa, n), &pos), &q(1));
                        }
                        rows.extend(self.extract(&d));
                    }
                }
            }
            Family::HomogeneousShuffle => {
                for k in 1..m {
                    let sh = shuffles(k, m - k);
                    for a in &alphas {
                        let mut d = BTreeMap::new();
                        for s in &sh {
                            let (c, pos) = homogeneous_term(a, &s.sigma, n, &t);
                            add_into(&mut d, &self.genfun(&c, &pos), &q(1));
                        }
                        rows.extend(self.extract(&d));
                    }
                }
            }
            Family::Distribution => {
                for &l in ls {
                    let big_l = l.abs();
                    assert!(n % big_l == 0, "|l| must divide N");
                    let step = n / big_l;
                    let lt: Vec<LinearForm> = t.iter().map(|f| lf_scale(f, l)).collect();
                    for a in &alphas {
                        let c = circle_of(a, n);
                        let lc: Circle = c.iter().map(|x| (l * x).rem_euclid(n)).collect();
                        // {1}_1 = Σ_{y^l=1} {y}_1 is excluded
                        if self.weight == 1 && m == 1 && l != -1 && lc.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let mut d = self.genfun(&lc, &t);
                        for ks in all_alphas(big_l, m) {
                            let beta: Vec<i64> = a.iter().zip(&ks).map(|(x, k)| x + k * step).collect();
                            add_into(&mut d, &self.genfun(&circle_of(&beta, n), &lt), &q(-1));
                        }
                        rows.extend(self.extract(&d));
                    }
                }
            }
        }
        rows
    }

    /// Writes a free-generator combination in quotient coordinates.
    pub fn coords(&self, v: &SparseVector) -> SparseVector {
        self.quotient.coords(v)
    }

    /// Canonical-basis expansion of an arbitrary word {α}_n: the coefficient of
    /// Π tᵢ^{nᵢ−1} in its generating function, gauge t₀ = 0.
    pub fn expand_word(&self, word: &DihedralWord) -> SparseVector {
        assert_eq!((word.level, word.weight(), word.depth()), (self.level, self.weight, self.depth));
        let nv = self.depth + 1;
        let t: Vec<LinearForm> = (0..nv).map(|i| var(i, nv)).collect();
        let mut e = vec![0u32];
        e.extend(word.exps.iter().map(|x| x - 1));
        self.genfun(&word.circle(), &t).into_iter().map(|(g, p)| (g, p.coefficient(&e))).collect()
    }
}

/// Term of the homogeneous shuffle for the shuffle σ, translated to nonhomogeneous
/// coordinates: returns the circle and its positions.
pub fn homogeneous_term(alphas: &[i64], sigma: &[usize], n: i64, t: &[LinearForm]) -> (Circle, Vec<LinearForm>) {
    let m = alphas.len();
    let nv = t[0].len();
    let mut gg = vec![0i64];
    gg.extend(sigma.iter().map(|&i| alphas[i]));
    let mut tt: Vec<LinearForm> = Vec::with_capacity(m + 1);
    let total = (1..=m).fold(vec![0; nv], |acc, i| lf_add(&acc, &t[i]));
    tt.push(lf_scale(&total, -1));
    tt.extend(sigma.iter().map(|&i| t[1 + i].clone()));
    let c: Circle = (0..=m).map(|i| (gg[(i + 1) % (m + 1)] - gg[i]).rem_euclid(n)).collect();
    let mut acc = vec![0; nv];
    let pos = tt
        .iter()
        .map(|x| {
            acc = lf_add(&acc, x);
            acc.clone()
        })
        .collect();
    (c, pos)
}

pub(crate) fn add_into(d: &mut BTreeMap<usize, TPolynomial>, other: &BTreeMap<usize, TPolynomial>, c: &Rational) {
    for (k, p) in other {
        let e = d.entry(*k).or_insert_with(|| TPolynomial::zero(p.nvars));
        e.add_scaled(p, c);
    }
}

/// All residue tuples in (ℤ/N)^m.
pub fn all_alphas(n: i64, m: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..n).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn divisors_above_one(n: i64) -> Vec<i64> {
    (2..=n).filter(|d| n.is_multiple_of(d)).collect()
}

/// Memoized pieces for a fixed level N.
#[derive(Debug)]
pub struct Coalgebra {
    pub level: i64,
    pieces: Mutex<HashMap<(u32, usize), Arc<Piece>>>,
    deltas: cobracket::DeltaCache,
    basis_deltas: cobracket::DeltaCache,
}

impl Coalgebra {
    pub fn new(level: i64) -> Self {
        Coalgebra { level, pieces: Mutex::default(), deltas: Mutex::default(), basis_deltas: Mutex::default() }
    }

    pub fn piece(&self, w: u32, m: usize) -> Arc<Piece> {
        if let Some(p) = self.pieces.lock().expect("piece cache").get(&(w, m)) {
            return p.clone();
        }
        let p = Arc::new(Piece::build(self.level, w, m));
        self.pieces.lock().expect("piece cache").entry((w, m)).or_insert(p).clone()
    }

    pub fn dimension(&self, w: u32, m: usize) -> usize {
        if (w as usize) < m || m == 0 {
            return 0;
        }
        self.piece(w, m).dim()
    }
}

pub fn relation_matrix(n: i64, w: u32, m: usize) -> SparseMatrix {
    Piece::build(n, w, m).relations
}

pub fn dimension(n: i64, w: u32, m: usize) -> usize {
    Piece::build(n, w, m).dim()
}
