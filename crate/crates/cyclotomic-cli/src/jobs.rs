use cyclotomic::dihedral::{dimension, Coalgebra};
use cyclotomic::modular::{dihedral_from_shuffle_check, mc_complex, verify_mu};
use cyclotomic::numeric::{
    distribution_check, eval_with, stuffle_check, EvalOptions, HPComplex, Method, NumericError, PolylogWord,
};
use cyclotomic::voronoi::{coker_observations, verify_psi};
use rayon::prelude::*;

use crate::cache::{Cache, Stats};
use crate::report::{CheckRecord, DimRecord, EvalRecord};
use crate::word::ParsedWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Cobracket,
    Modular,
    Mu,
    D3,
    Voronoi,
    Numeric,
    All,
}

#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub levels: Vec<i64>,
    pub w_max: u32,
    pub m_max: usize,
    pub bound: i64,
    pub prec: usize,
}

fn rec(suite: &str, identity: &str, n: i64, w: u32, m: usize, passed: bool, detail: String) -> CheckRecord {
    CheckRecord { suite: suite.into(), identity: identity.into(), level: n, weight: w, depth: m, passed, detail }
}

pub fn dims(levels: &[i64], ws: &[u32], ms: &[usize], cache: &Cache) -> std::io::Result<(Vec<DimRecord>, Stats)> {
    let jobs: Vec<(i64, u32, usize)> = levels
        .iter()
        .flat_map(|&n| ms.iter().flat_map(move |&m| ws.iter().filter(move |&&w| w as usize >= m).map(move |&w| (n, w, m))))
        .collect();
    let out: Vec<std::io::Result<(DimRecord, Stats)>> = jobs
        .par_iter()
        .map(|&(n, w, m)| {
            let mut st = Stats::default();
            let dim = cache.fetch(&format!("dim/{n}/{w}/{m}"), &mut st, || dimension(n, w, m))?;
            Ok((DimRecord { level: n, weight: w, depth: m, dim }, st))
        })
        .collect();
    collect(out)
}

fn collect<T>(out: Vec<std::io::Result<(T, Stats)>>) -> std::io::Result<(Vec<T>, Stats)> {
    let mut total = Stats::default();
    let mut items = Vec::with_capacity(out.len());
    for r in out {
        let (x, st) = r?;
        total.hits += st.hits;
        total.misses += st.misses;
        total.corrupt += st.corrupt;
        items.push(x);
    }
    Ok((items, total))
}

fn cobracket_checks(n: i64, w: u32, m: usize) -> Vec<CheckRecord> {
    let c = Coalgebra::new(n);
    let deltas = c.cobracket_basis(w, m);
    let anti = deltas.iter().all(|d| d.is_bigraded(w, m) && d.terms.keys().all(|k| k.len() == 2 && k[0] < k[1]));
    let jacobi = deltas.iter().all(|d| c.wedge_differential_element(d).is_zero());
    let p = c.piece(w, m);
    let kills = p.relations.rows.iter().all(|r| c.cobracket_vector(w, m, r).is_zero());
    let detail = format!("{} basis vectors", deltas.len());
    vec![
        rec("cobracket", "co-antisymmetry", n, w, m, anti, detail.clone()),
        rec("cobracket", "co-Jacobi", n, w, m, jacobi, detail),
        rec("cobracket", "relations killed", n, w, m, kills, format!("{} relations", p.relations.rows.len())),
    ]
}

fn modular_checks(n: i64, w: u32, m: usize) -> Vec<CheckRecord> {
    match mc_complex(n, w, m) {
        Ok(cx) => vec![
            rec("modular", "boundary squared vanishes", n, w, m, cx.boundary_squared_vanishes(), String::new()),
            rec("modular", "boundary respects relations", n, w, m, cx.boundary_well_defined(), String::new()),
        ],
        Err(e) => vec![rec("modular", "construction", n, w, m, false, e.to_string())],
    }
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn mu_checks(n: i64, w: u32, m: usize) -> Vec<CheckRecord> {
    let r = match verify_mu(n, w, m) {
        Ok(r) => r,
        Err(e) => return vec![rec("mu", "construction", n, w, m, false, e.to_string())],
    };
    let detail = format!("source {:?} target {:?} ranks {:?}", r.source_dims, r.target_dims, r.ranks);
    let mut out = vec![
        rec("mu", "kills relations", n, w, m, r.kills_relations, String::new()),
        rec("mu", "chain map", n, w, m, r.chain_map, String::new()),
        rec("mu", "surjective", n, w, m, r.surjective(), detail.clone()),
    ];
    if n == 1 {
        out.push(rec("mu", "bijective", n, w, m, r.bijective(), detail));
    } else if is_prime(n) && w as usize == m {
        out.push(rec("mu", "degree-one dimensions equal", n, w, m, r.source_dims[0] == r.target_dims[0], detail));
    }
    out
}

fn d3_checks(m: usize) -> Vec<CheckRecord> {
    let r = dihedral_from_shuffle_check(m, m);
    let detail = format!("{} relations over {} symbols", r.relations, r.symbols);
    vec![
        rec("d3", "cyclic symmetry from shuffles", 1, 0, m, r.cyclic, detail.clone()),
        rec("d3", "reflection symmetry from shuffles", 1, 0, m, r.reflection, detail.clone()),
        rec("d3", "negation symmetry from shuffles", 1, 0, m, r.negation, detail),
    ]
}

fn voronoi_checks(bound: i64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for m in 2..=3 {
        match verify_psi(m, bound) {
            Ok(r) => {
                let d = format!("{} bases, entries <= {bound}", r.bases);
                out.push(rec("voronoi", "psi is a chain map", 1, m as u32, m, r.chain_map, d.clone()));
                out.push(rec("voronoi", "block shuffles vanish", 1, m as u32, m, r.block_shuffles_vanish, d.clone()));
                if m == 3 {
                    out.push(rec("voronoi", "first shuffle maps to zero", 1, 3, 3, r.first_shuffle_zero, d.clone()));
                    out.push(rec("voronoi", "second shuffle maps to a simplex boundary", 1, 3, 3, r.second_shuffle_boundary, d.clone()));
                    out.push(rec("voronoi", "other shuffles map to boundaries", 1, 3, 3, r.other_shuffles_exact, d));
                }
            }
            Err(e) => out.push(rec("voronoi", "psi", 1, m as u32, m, false, e.to_string())),
        }
    }
    let c = coker_observations(bound);
    let d = format!(
        "{} simplices, generic per simplex {:?}, simplices per generic {:?}",
        c.simplices, c.generic_per_simplex, c.simplices_per_generic
    );
    out.push(rec("voronoi", "generic 3-cell incidences are 3 and 3", 1, 3, 3, c.holds(), d));
    out
}

fn numeric_checks(prec: usize) -> Vec<CheckRecord> {
    let run = || -> Result<Vec<(String, f64, f64)>, NumericError> {
        let ex = EvalOptions { method: Method::Extrapolate { period: 1 }, ..EvalOptions::default() };
        let z21 = eval_with(&PolylogWord::zeta(vec![1, 2], prec)?, 1e-15, &ex)?;
        let z3 = eval_with(&PolylogWord::zeta(vec![3], prec)?, 1e-15, &ex)?;
        let half = HPComplex::from_rational(&cyclotomic::linalg::q_frac(1, 2), prec);
        let quarter = HPComplex::from_rational(&cyclotomic::linalg::q_frac(1, 4), prec);
        let li2 = PolylogWord::new(vec![2], vec![half], prec)?;
        let eps = 2f64.powi(-(prec as i32) + 12);
        let s = stuffle_check(&li2, &li2, eps)?;
        let d = distribution_check(&PolylogWord::new(vec![2], vec![quarter], prec)?, 2, eps)?;
        Ok(vec![
            ("zeta(2,1) = zeta(3)".into(), z21.value.sub(&z3.value).abs_f64(), 1e-6),
            ("stuffle Li2(1/2)^2".into(), s.abs(), 1e3 * eps),
            ("distribution Li2(1/4), l = 2".into(), d.abs(), 1e3 * eps),
        ])
    };
    match run() {
        Ok(rows) => rows
            .into_iter()
            .map(|(id, r, tol)| rec("numeric", &id, 1, 0, 0, r < tol, format!("residual {r:e} < {tol:e}")))
            .collect(),
        Err(e) => vec![rec("numeric", "evaluation", 1, 0, 0, false, e.to_string())],
    }
}

#[derive(Clone, Debug)]
enum Job {
    Cobracket(i64, u32, usize),
    Modular(i64, u32, usize),
    Mu(i64, u32, usize),
    D3(usize),
    Voronoi(i64),
    Numeric(usize),
}

impl Job {
    fn key(&self) -> String {
        format!("verify/{self:?}")
    }

    fn run(&self) -> Vec<CheckRecord> {
        match *self {
            Job::Cobracket(n, w, m) => cobracket_checks(n, w, m),
            Job::Modular(n, w, m) => modular_checks(n, w, m),
            Job::Mu(n, w, m) => mu_checks(n, w, m),
            Job::D3(m) => d3_checks(m),
            Job::Voronoi(b) => voronoi_checks(b),
            Job::Numeric(p) => numeric_checks(p),
        }
    }
}

fn jobs(suite: Suite, p: &VerifyParams) -> Vec<Job> {
    let all = suite == Suite::All;
    let mut out = Vec::new();
    let grid = |m_lo: usize, m_hi: usize| {
        let ms: Vec<usize> = (m_lo..=m_hi.min(p.m_max)).collect();
        p.levels
            .iter()
            .flat_map(move |&n| ms.clone().into_iter().flat_map(move |m| (m as u32..=p.w_max).map(move |w| (n, w, m))))
            .collect::<Vec<_>>()
    };
    if all || suite == Suite::Cobracket {
        out.extend(grid(2, 3).into_iter().map(|(n, w, m)| Job::Cobracket(n, w, m)));
    }
    if all || suite == Suite::Modular {
        out.extend(grid(2, 3).into_iter().map(|(n, w, m)| Job::Modular(n, w, m)));
    }
    if all || suite == Suite::Mu {
        out.extend(grid(2, 3).into_iter().map(|(n, w, m)| Job::Mu(n, w, m)));
    }
    if all || suite == Suite::D3 {
        out.extend((2..=p.m_max.min(4)).map(Job::D3));
    }
    if all || suite == Suite::Voronoi {
        out.push(Job::Voronoi(p.bound));
    }
    if all || suite == Suite::Numeric {
        out.push(Job::Numeric(p.prec));
    }
    out
}

pub fn verify(suite: Suite, p: &VerifyParams, cache: &Cache) -> std::io::Result<(Vec<CheckRecord>, Stats)> {
    let out: Vec<std::io::Result<(Vec<CheckRecord>, Stats)>> = jobs(suite, p)
        .par_iter()
        .map(|job| {
            let mut st = Stats::default();
            let r = cache.fetch(&job.key(), &mut st, || job.run())?;
            Ok((r, st))
        })
        .collect();
    let (nested, st) = collect(out)?;
    Ok((nested.into_iter().flatten().collect(), st))
}

/// δ of every quotient basis vector of 𝒟_{w,m}, one row per wedge term.
pub fn cobracket_rows(n: i64, w: u32, m: usize) -> String {
    let c = Coalgebra::new(n);
    let mut s = String::from("basis,left_weight,left_depth,left_index,right_weight,right_depth,right_index,coefficient\n");
    for (i, d) in c.cobracket_basis(w, m).iter().enumerate() {
        for (k, x) in &d.terms {
            let (a, b) = (k[0], k[1]);
            s.push_str(&format!(
                "{i},{},{},{},{},{},{},{x}\n",
                a.weight, a.depth, a.idx, b.weight, b.depth, b.idx
            ));
        }
    }
    s
}

pub fn evaluate(
    word: &ParsedWord,
    prec: usize,
    tol: f64,
    method: Method,
    max_terms: u64,
) -> Result<(EvalRecord, HPComplex), NumericError> {
    let method = match method {
        Method::Extrapolate { .. } => Method::Extrapolate { period: word.period() },
        m => m,
    };
    let e = eval_with(&word.to_polylog(prec)?, tol, &EvalOptions { max_terms, method })?;
    let (re, im) = e.value.render_parts();
    Ok((EvalRecord { word: word.to_string(), precision: prec, re, im, tail: e.tail, terms: e.terms }, e.value))
}
