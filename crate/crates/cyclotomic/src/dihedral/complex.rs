use std::collections::HashMap;

use super::{BasisKey, Coalgebra, WedgeElement};
use crate::linalg::{rank, SparseMatrix, SparseVector};

/// The complex 𝒟 → Λ²𝒟 → … → Λ^m𝒟 in bidegree (w, m).
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub weight: u32,
    pub depth: usize,
    /// bases[r-1] lists the sorted wedge monomials of Λ^r in bidegree (w, m).
    pub bases: Vec<Vec<Vec<BasisKey>>>,
    /// differentials[r-1]: Λ^r → Λ^{r+1}, one row per source basis element.
    pub differentials: Vec<SparseMatrix>,
}

impl Coalgebra {
    /// Sorted tuples of r distinct basis keys with total bidegree (w, m).
    pub fn wedge_basis(&self, w: u32, m: usize, r: usize) -> Vec<Vec<BasisKey>> {
        let mut keys = Vec::new();
        for d in 1..=m {
            for wt in d as u32..=w {
                for idx in 0..self.dimension(wt, d) {
                    keys.push(BasisKey { weight: wt, depth: d, idx });
                }
            }
        }
        keys.sort();
        let mut out = Vec::new();
        fn rec(
            keys: &[BasisKey],
            start: usize,
            r: usize,
            w: u32,
            m: usize,
            cur: &mut Vec<BasisKey>,
            out: &mut Vec<Vec<BasisKey>>,
        ) {
            if r == 0 {
                if w == 0 && m == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for i in start..keys.len() {
                let k = keys[i];
                if k.weight > w || k.depth > m {
                    continue;
                }
                cur.push(k);
                rec(keys, i + 1, r - 1, w - k.weight, m - k.depth, cur, out);
                cur.pop();
            }
        }
        rec(&keys, 0, r, w, m, &mut Vec::new(), &mut out);
        out
    }

    pub fn cochain_complex(&self, w: u32, m: usize) -> CochainComplex {
        let bases: Vec<Vec<Vec<BasisKey>>> = (1..=m).map(|r| self.wedge_basis(w, m, r)).collect();
        let mut differentials = Vec::new();
        for r in 1..m {
            let target: HashMap<&Vec<BasisKey>, usize> = bases[r].iter().enumerate().map(|(i, k)| (k, i)).collect();
            let rows = bases[r - 1]
                .iter()
                .map(|k| wedge_to_vector(&self.wedge_differential(k), &target))
                .collect();
            differentials.push(SparseMatrix::from_rows(rows, bases[r].len()));
        }
        CochainComplex { weight: w, depth: m, bases, differentials }
    }

    pub fn cohomology_dims(&self, w: u32, m: usize) -> Vec<usize> {
        self.cochain_complex(w, m).cohomology_dims()
    }
}

pub(crate) fn wedge_to_vector(e: &WedgeElement, target: &HashMap<&Vec<BasisKey>, usize>) -> SparseVector {
    e.terms.iter().map(|(k, x)| (target[k], x.clone())).collect()
}

impl CochainComplex {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims().iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    /// Consecutive differentials compose to zero.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|p| p[0].compose(&p[1]).is_zero())
    }

    /// dim H^r for r = 1..m.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let dims = self.dims();
        let ranks: Vec<usize> = self.differentials.iter().map(rank).collect();
        (0..dims.len())
            .map(|i| {
                let out = if i < ranks.len() { ranks[i] } else { 0 };
                let inc = if i > 0 { ranks[i - 1] } else { 0 };
                dims[i] - out - inc
            })
            .collect()
    }
}

/// Minus the t^w coefficient of 1/((1−t⁴)(1−t⁶)) − 1.
pub fn euler_characteristic(w: u32) -> i64 {
    if w == 0 {
        return 0;
    }
    let count = (0..=w / 4).filter(|a| (w - 4 * a) % 6 == 0).count() as i64;
    -count
}
