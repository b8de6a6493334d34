//! Formal check that the shuffle relations imply the dihedral symmetries, in the free
//! module on arrangement symbols [v₁,…,vₘ].

use std::collections::{BTreeSet, HashMap};

use super::{basis_to_colon, colon_to_basis, standard_basis, IntVector};
use crate::linalg::{q, Echelon, SparseVector};
use crate::words::shuffles;

type Symbol = Vec<IntVector>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D3Report {
    pub rank: usize,
    pub levels: usize,
    pub relations: usize,
    pub symbols: usize,
    pub cyclic: bool,
    pub reflection: bool,
    pub negation: bool,
}

impl D3Report {
    pub fn all(&self) -> bool {
        self.cyclic && self.reflection && self.negation
    }
}

/// Every stuffle and colon shuffle relation in which `x` occurs as a term.
fn relations_containing(x: &Symbol) -> Vec<Vec<Symbol>> {
    let m = x.len();
    let u = basis_to_colon(x);
    let mut out = Vec::new();
    for k in 1..m {
        let sh = shuffles(k, m - k);
        for s in &sh {
            let mut v = vec![Vec::new(); m];
            let mut uu = vec![Vec::new(); m];
            for (i, &j) in s.sigma.iter().enumerate() {
                v[j] = x[i].clone();
                uu[j] = u[i].clone();
            }
            out.push(sh.iter().map(|t| t.apply(&v)).collect());
            out.push(sh.iter().map(|t| colon_to_basis(&t.apply(&uu))).collect());
        }
    }
    out
}

/// Explores relations outward from the target symbols for `levels` rounds and tests
/// whether the cyclic, reflection and negation differences lie in their span.
pub fn dihedral_from_shuffle_check(m: usize, levels: usize) -> D3Report {
    let e = standard_basis(m);
    let v0: IntVector = vec![-1; m];
    let neg = |v: &IntVector| -> IntVector { v.iter().map(|x| -x).collect() };
    let mut rotated: Symbol = e[1..].to_vec();
    rotated.push(v0.clone());
    let mut reflected: Symbol = e[..m - 1].iter().rev().cloned().collect();
    reflected.push(v0.clone());
    let negated: Symbol = e.iter().map(neg).collect();
    let refl_sign = if m % 2 == 1 { 1 } else { -1 };
    let targets: Vec<Vec<(Symbol, i64)>> = vec![
        vec![(e.clone(), 1), (rotated, -1)],
        vec![(e.clone(), 1), (reflected, -refl_sign)],
        vec![(e.clone(), 1), (negated, -1)],
    ];

    let mut frontier: BTreeSet<Symbol> = targets.iter().flatten().map(|(s, _)| s.clone()).collect();
    let mut seen: BTreeSet<Symbol> = BTreeSet::new();
    let mut rels: BTreeSet<Vec<Symbol>> = BTreeSet::new();
    for _ in 0..levels {
        let mut next = BTreeSet::new();
        for s in &frontier {
            if !seen.insert(s.clone()) {
                continue;
            }
            for r in relations_containing(s) {
                next.extend(r.iter().cloned());
                rels.insert(r);
            }
        }
        frontier = next.difference(&seen).cloned().collect();
    }

    let mut ids: HashMap<Symbol, usize> = HashMap::new();
    let mut id = |s: &Symbol| -> usize {
        let n = ids.len();
        *ids.entry(s.clone()).or_insert(n)
    };
    let mut ech = Echelon::new();
    for r in &rels {
        let mut row = SparseVector::new();
        for s in r {
            row.add_at(id(s), &q(1));
        }
        ech.insert(row);
    }
    let results: Vec<bool> = targets
        .iter()
        .map(|t| {
            let mut v = SparseVector::new();
            for (s, c) in t {
                v.add_at(id(s), &q(*c));
            }
            ech.contains(&v)
        })
        .collect();
    D3Report {
        rank: m,
        levels,
        relations: rels.len(),
        symbols: ids.len(),
        cyclic: results[0],
        reflection: results[1],
        negation: results[2],
    }
}
