use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::{Coalgebra, DihedralWord, Piece};
use crate::linalg::{q, Rational, SparseVector};
use crate::words::{var, LinearForm, TPolynomial};

/// Quotient basis vector `idx` of the piece (w, m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKey {
    pub weight: u32,
    pub depth: usize,
    pub idx: usize,
}

/// Element of Λ^r 𝒟: sorted tuples of distinct basis keys.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WedgeElement {
    pub terms: BTreeMap<Vec<BasisKey>, Rational>,
}

/// Sorts a wedge monomial, returning the sign of the permutation, or None if a factor repeats.
pub fn wedge_sort(keys: &[BasisKey]) -> Option<(Vec<BasisKey>, i64)> {
    let mut v = keys.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((v, sign))
}

impl WedgeElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds c · (k₁ ∧ … ∧ k_r), normalizing the order.
    pub fn add_monomial(&mut self, keys: &[BasisKey], c: &Rational) {
        if c.is_zero() {
            return;
        }
        let Some((k, s)) = wedge_sort(keys) else { return };
        let e = self.terms.entry(k.clone()).or_insert_with(Rational::zero);
        *e += c * q(s);
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_scaled(&mut self, other: &WedgeElement, c: &Rational) {
        for (k, x) in &other.terms {
            self.add_monomial(k, &(x * c));
        }
    }

    pub fn arity(&self) -> Option<usize> {
        self.terms.keys().next().map(|k| k.len())
    }

    /// Every term has factor weights and depths summing to (w, m).
    pub fn is_bigraded(&self, w: u32, m: usize) -> bool {
        self.terms.keys().all(|k| {
            k.iter().map(|b| b.weight).sum::<u32>() == w && k.iter().map(|b| b.depth).sum::<usize>() == m
        })
    }
}

/// A linear combination of generators of one piece.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DihedralElement {
    pub combo: BTreeMap<DihedralWord, Rational>,
}

pub(super) type DeltaCache = Mutex<HashMap<(u32, usize), Arc<Vec<WedgeElement>>>>;

impl Coalgebra {
    /// Generating function of a factor circle, in quotient coordinates of (w, d).
    fn factor_gf(&self, piece: &Piece, circle: &[i64], pos: &[LinearForm]) -> BTreeMap<usize, TPolynomial> {
        let mut out: BTreeMap<usize, TPolynomial> = BTreeMap::new();
        for (g, p) in piece.genfun(circle, pos) {
            for (b, x) in piece.coords(&SparseVector::unit(g)).iter() {
                out.entry(b).or_insert_with(|| TPolynomial::zero(p.nvars)).add_scaled(&p, x);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// δ on every free generator of (w, m), as wedges of quotient basis vectors.
    pub fn delta_free(&self, w: u32, m: usize) -> Arc<Vec<WedgeElement>> {
        let key = (w, m);
        if let Some(d) = self.deltas.lock().expect("delta cache").get(&key) {
            return d.clone();
        }
        let d = Arc::new(self.compute_delta_free(w, m));
        self.deltas.lock().expect("delta cache").entry(key).or_insert(d).clone()
    }

    fn compute_delta_free(&self, w: u32, m: usize) -> Vec<WedgeElement> {
        let piece = self.piece(w, m);
        let mut res = vec![WedgeElement::default(); piece.ngens()];
        if m < 2 {
            return res;
        }
        let n = self.level;
        let len = m + 1;
        let t: Vec<LinearForm> = (0..len).map(|i| var(i, len)).collect();
        for rep in &piece.reps {
            let mut tot: BTreeMap<(BasisKey, BasisKey), TPolynomial> = BTreeMap::new();
            for i in 1..m {
                for j in 0..=m {
                    let a: Vec<i64> = (i + 1..=m).map(|k| rep[(j + k) % len]).collect();
                    let y = (-a.iter().sum::<i64>()).rem_euclid(n);
                    let mut c1 = a.clone();
                    c1.push(y);
                    let s1: Vec<LinearForm> = (i + 1..=m + 1).map(|k| t[(j + k) % len].clone()).collect();
                    let b: Vec<i64> = (1..=i).map(|k| rep[(j + k) % len]).collect();
                    let x = (-b.iter().sum::<i64>()).rem_euclid(n);
                    let mut c2 = vec![x];
                    c2.extend(&b);
                    let s2: Vec<LinearForm> = (0..=i).map(|k| t[(j + k) % len].clone()).collect();
                    let (d1, d2) = (m - i, i);
                    for w1 in d1 as u32..=(w - m as u32 + d1 as u32) {
                        let w2 = w - w1;
                        if (w2 as usize) < d2 {
                            continue;
                        }
                        let f1 = self.factor_gf(&self.piece(w1, d1), &c1, &s1);
                        let f2 = self.factor_gf(&self.piece(w2, d2), &c2, &s2);
                        for (&ia, pa) in &f1 {
                            for (&ib, pb) in &f2 {
                                let ka = BasisKey { weight: w1, depth: d1, idx: ia };
                                let kb = BasisKey { weight: w2, depth: d2, idx: ib };
                                if ka == kb {
                                    continue;
                                }
                                let (key, s) = if ka < kb { ((ka, kb), 1) } else { ((kb, ka), -1) };
                                tot.entry(key)
                                    .or_insert_with(|| TPolynomial::zero(len))
                                    .add_scaled(&pa.mul(pb), &q(s));
                            }
                        }
                    }
                }
            }
            for ((ka, kb), p) in tot {
                for (e, v) in &p.terms {
                    if e[0] > 0 {
                        continue;
                    }
                    let comp: Vec<u32> = e[1..].iter().map(|x| x + 1).collect();
                    let g = piece.generator_index(rep, &comp);
                    res[g].add_monomial(&[ka, kb], v);
                }
            }
        }
        res
    }

    /// δ on the quotient basis of (w, m).
    pub fn cobracket_basis(&self, w: u32, m: usize) -> Arc<Vec<WedgeElement>> {
        let key = (w, m);
        if let Some(d) = self.basis_deltas.lock().expect("delta cache").get(&key) {
            return d.clone();
        }
        let piece = self.piece(w, m);
        let free = self.delta_free(w, m);
        let d = Arc::new(piece.quotient.basis_columns().iter().map(|&c| free[c].clone()).collect());
        self.basis_deltas.lock().expect("delta cache").entry(key).or_insert(d).clone()
    }

    /// δ of a combination of free generators of (w, m).
    pub fn cobracket_vector(&self, w: u32, m: usize, v: &SparseVector) -> WedgeElement {
        let free = self.delta_free(w, m);
        let mut out = WedgeElement::default();
        for (g, x) in v.iter() {
            out.add_scaled(&free[g], x);
        }
        out
    }

    /// δ of an element given by arbitrary (not necessarily canonical) words.
    pub fn cobracket(&self, e: &DihedralElement) -> WedgeElement {
        let mut out = WedgeElement::default();
        for (word, x) in &e.combo {
            let piece = self.piece(word.weight(), word.depth());
            let v = piece.expand_word(word);
            out.add_scaled(&self.cobracket_vector(word.weight(), word.depth(), &v), x);
        }
        out
    }

    /// Leibniz extension: d(a₁∧…∧a_r) = Σ (−1)^pos a₁∧…∧δa_pos∧…∧a_r.
    pub fn wedge_differential(&self, keys: &[BasisKey]) -> WedgeElement {
        let mut out = WedgeElement::default();
        for (pos, k) in keys.iter().enumerate() {
            if k.depth < 2 {
                continue;
            }
            let d = &self.cobracket_basis(k.weight, k.depth)[k.idx];
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            for (pair, c) in &d.terms {
                let mut new = keys[..pos].to_vec();
                new.extend_from_slice(pair);
                new.extend_from_slice(&keys[pos + 1..]);
                out.add_monomial(&new, &(c * q(sign)));
            }
        }
        out
    }

    pub fn wedge_differential_element(&self, e: &WedgeElement) -> WedgeElement {
        let mut out = WedgeElement::default();
        for (k, c) in &e.terms {
            out.add_scaled(&self.wedge_differential(k), c);
        }
        out
    }
}
