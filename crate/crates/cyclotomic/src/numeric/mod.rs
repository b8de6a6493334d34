//! Multiple polylogarithms
//! Li_{n₁,…,nₘ}(x₁,…,xₘ) = Σ_{0<k₁<…<kₘ} x₁^{k₁}⋯xₘ^{kₘ} / (k₁^{n₁}⋯kₘ^{nₘ})
//! by nested partial sums, with tail control, and numerical checks of the relations
//! between them.

mod relations;
mod scalar;

use std::cmp::Ordering;

use astro_float::BigFloat;
use thiserror::Error;
use twofloat::TwoFloat;

pub use relations::{
    all_ones_expansion, distribution_check, eval_iterated, regularize, regularize_all_ones, stuffle_check,
    stuffle_check_with, stuffle_terms, Residual, Deformation, LogPolynomial, Regularization,
};
pub use scalar::{BigReal, Complex, ExactArg, Field, HPComplex, Real, DOUBLE_DOUBLE_BITS};

use scalar::{consts, RM};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 106;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("divergent word: last letter has exponent 1 and argument 1")]
    Divergent,
    #[error("argument {0} lies outside the closed unit disk")]
    OutsideDisk(usize),
    #[error("{exps} exponents but {args} arguments")]
    LengthMismatch { exps: usize, args: usize },
    #[error("exponents must be positive")]
    ZeroExponent,
    #[error("precision {0} bits is below the 64-bit minimum")]
    PrecisionTooLow(usize),
    #[error("tolerance unreachable: best tail estimate {achieved:e} after {terms} terms")]
    Unreachable { achieved: f64, terms: u64 },
    #[error("ill-conditioned ε grid: {0}")]
    IllConditionedGrid(String),
}

/// Exponents and arguments of Li; the summation runs innermost letter first.
#[derive(Clone, Debug)]
pub struct PolylogWord {
    pub exps: Vec<u32>,
    pub args: Vec<HPComplex>,
    pub prec: usize,
}

impl PolylogWord {
    pub fn new(exps: Vec<u32>, args: Vec<HPComplex>, prec: usize) -> Result<Self, NumericError> {
        if prec < 64 {
            return Err(NumericError::PrecisionTooLow(prec));
        }
        if exps.len() != args.len() {
            return Err(NumericError::LengthMismatch { exps: exps.len(), args: args.len() });
        }
        if exps.contains(&0) {
            return Err(NumericError::ZeroExponent);
        }
        if let Some(i) = args.iter().position(|x| x.modulus_cmp_one() == Ordering::Greater) {
            return Err(NumericError::OutsideDisk(i));
        }
        Ok(PolylogWord { exps, args, prec })
    }

    pub fn from_exact(exps: Vec<u32>, args: &[ExactArg], prec: usize) -> Result<Self, NumericError> {
        let hp = args.iter().map(|a| a.to_hp(prec)).collect();
        Self::new(exps, hp, prec)
    }

    /// ζ(n₁,…,nₘ) = Li_{n₁,…,nₘ}(1,…,1).
    pub fn zeta(exps: Vec<u32>, prec: usize) -> Result<Self, NumericError> {
        let args = vec![HPComplex::one(prec); exps.len()];
        Self::new(exps, args, prec)
    }

    pub fn empty(prec: usize) -> Self {
        PolylogWord { exps: vec![], args: vec![], prec }
    }

    pub fn weight(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.exps.len()
    }

    pub fn is_convergent(&self) -> bool {
        match (self.exps.last(), self.args.last()) {
            (Some(&1), Some(x)) => !x.is_one(),
            _ => true,
        }
    }
}

/// How the summation cutoff is chosen when the outermost argument is unimodular.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Double K until successive partial sums stabilize; the estimate is twice the last
    /// change, rescaled by 2^{n−1} − 1 when the outermost argument is 1.
    Partial,
    /// Richardson extrapolation in K over cutoffs that are multiples of `period`, the
    /// common order of the unimodular arguments (all must be roots of unity).
    Extrapolate { period: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub max_terms: u64,
    pub method: Method,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { max_terms: 1 << 31, method: Method::Partial }
    }
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: HPComplex,
    /// Estimated (geometric regime: rigorous) bound on |value − Li|.
    pub tail: f64,
    /// Summation cutoff K actually used (largest one for extrapolation).
    pub terms: u64,
}

/// Running nested partial sums S_j(k) = S_j(k−1) + x_j^k/k^{n_j}·S_{j−1}(k−1).
pub(crate) struct Nested<F> {
    xs: Vec<F>,
    unit: Vec<bool>,
    exps: Vec<u32>,
    pows: Vec<F>,
    s: Vec<F>,
    k: u64,
}

impl<F: Field> Nested<F> {
    pub(crate) fn new(xs: Vec<F>, unit: Vec<bool>, exps: Vec<u32>, one: F) -> Self {
        let m = exps.len();
        let mut s = vec![one.zero_like(); m + 1];
        s[0] = one.clone();
        Nested { pows: vec![one; m], xs, unit, exps, s, k: 0 }
    }

    pub(crate) fn advance(&mut self, to: u64) {
        let m = self.exps.len();
        while self.k < to {
            self.k += 1;
            let k = self.k;
            for j in (0..m).rev() {
                if !self.unit[j] {
                    self.pows[j] = self.pows[j].mul(&self.xs[j]);
                }
                let mut t = self.pows[j].div_u64(k);
                for _ in 1..self.exps[j] {
                    t = t.div_u64(k);
                }
                self.s[j + 1] = self.s[j + 1].add(&t.mul(&self.s[j]));
            }
        }
    }

    pub(crate) fn value(&self) -> &F {
        &self.s[self.exps.len()]
    }
}

/// Rigorous bound on Σ_{k>K} of the outermost summand when |x_m| = r < 1: the inner nested
/// sum is at most a product of depth-one sums, each either bounded or ≤ 1 + log k.
pub(crate) fn geometric_tail(r: f64, n_last: u32, inner: &[(f64, u32)], big_k: u64) -> f64 {
    let mut c = 1.0;
    let mut p = 0i32;
    for &(a, n) in inner {
        if n >= 2 {
            c *= 1.0 + 1.0 / f64::from(n - 1);
        } else if a < 1.0 {
            c *= -(1.0 - a).ln();
        } else {
            p += 1;
        }
    }
    let k1 = (big_k + 1) as f64;
    let rho = r * (1.0 + 1.0 / k1).powi(p);
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    let log_first = k1 * r.ln() - f64::from(n_last) * k1.ln() + f64::from(p) * (1.0 + k1.ln()).ln() + c.ln();
    log_first.exp() / (1.0 - rho)
}

fn smallest_cutoff(bound: impl Fn(u64) -> f64, eps: f64, max_terms: u64) -> Option<u64> {
    let mut hi = 16u64;
    while bound(hi) > eps {
        if hi >= max_terms {
            return None;
        }
        hi = (hi * 2).min(max_terms);
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid) > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

/// Gaussian elimination with partial pivoting on a square real system.
pub(crate) fn solve_big(mut a: Vec<Vec<BigFloat>>, mut b: Vec<BigFloat>, p: usize) -> Option<Vec<BigFloat>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()).unwrap_or(0).cmp(&0))?;
        if a[piv][c].is_zero() {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..n {
            let f = a[r][c].div(&a[c][c], p, RM);
            for k in c..n {
                let t = f.mul(&a[c][k], p, RM);
                a[r][k] = a[r][k].sub(&t, p, RM);
            }
            let t = f.mul(&b[c], p, RM);
            b[r] = b[r].sub(&t, p, RM);
        }
    }
    let mut x = vec![BigFloat::new(p); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for k in r + 1..n {
            s = s.sub(&a[r][k].mul(&x[k], p, RM), p, RM);
        }
        x[r] = s.div(&a[r][r], p, RM);
    }
    Some(x)
}

/// Weights w with Σ wᵢ P(Kᵢ) = the constant term of the fit
/// P(K) = L + Σ_{p≤r, q≤logs} c_{pq} K^{−p} (log K)^q through the given cutoffs.
fn extrapolation_weights(cutoffs: &[u64], logs: usize, p: usize) -> Option<Vec<BigFloat>> {
    let n = cutoffs.len();
    let mut cc = consts();
    let rows: Vec<Vec<BigFloat>> = cutoffs
        .iter()
        .map(|&k| {
            let kb = BigFloat::from_u64(k, p);
            let inv = BigFloat::from_u8(1, p).div(&kb, p, RM);
            let lg = kb.ln(p, RM, &mut cc);
            let mut row = vec![BigFloat::from_u8(1, p)];
            let mut ip = BigFloat::from_u8(1, p);
            while row.len() < n {
                ip = ip.mul(&inv, p, RM);
                let mut t = ip.clone();
                for _ in 0..=logs {
                    if row.len() < n {
                        row.push(t.clone());
                    }
                    t = t.mul(&lg, p, RM);
                }
            }
            row
        })
        .collect();
    // Solve Mᵀ w = e₀.
    let mt: Vec<Vec<BigFloat>> = (0..n).map(|i| (0..n).map(|j| rows[j][i].clone()).collect()).collect();
    let mut e0 = vec![BigFloat::new(p); n];
    e0[0] = BigFloat::from_u8(1, p);
    solve_big(mt, e0, p)
}

fn eval_generic<F: Field>(w: &PolylogWord, eps: f64, opts: &EvalOptions) -> Result<Evaluation, NumericError> {
    let prec = w.prec;
    let m = w.depth();
    let one = F::from_hp(&HPComplex::one(prec));
    if m == 0 {
        return Ok(Evaluation { value: HPComplex::one(prec), tail: 0.0, terms: 0 });
    }
    let xs: Vec<F> = w.args.iter().map(F::from_hp).collect();
    let unit: Vec<bool> = w.args.iter().map(HPComplex::is_one).collect();
    let fresh = || Nested::new(xs.clone(), unit.clone(), w.exps.clone(), one.clone());
    let floor = 2f64.powi(-(prec as i32) + 4);
    if eps < floor {
        return Err(NumericError::Unreachable { achieved: floor, terms: 0 });
    }
    let last = &w.args[m - 1];
    let n_last = w.exps[m - 1];
    if last.modulus_cmp_one() == Ordering::Less {
        let r = last.abs_f64();
        let inner: Vec<(f64, u32)> = w.args[..m - 1]
            .iter()
            .zip(&w.exps)
            .map(|(x, &n)| (if x.modulus_cmp_one() == Ordering::Equal { 1.0 } else { x.abs_f64() }, n))
            .collect();
        let bound = |k: u64| geometric_tail(r, n_last, &inner, k);
        let Some(k) = smallest_cutoff(bound, eps, opts.max_terms) else {
            return Err(NumericError::Unreachable { achieved: bound(opts.max_terms), terms: opts.max_terms });
        };
        let mut s = fresh();
        s.advance(k);
        return Ok(Evaluation { value: s.value().to_hp(prec), tail: bound(k), terms: k });
    }
    match opts.method {
        Method::Partial => {
            let mut s = fresh();
            let mut k = 1024u64;
            s.advance(k);
            let mut prev = s.value().clone();
            let damp = if last.is_one() { (2f64.powi(n_last as i32 - 1) - 1.0).max(1.0) } else { 1.0 };
            let mut est = f64::INFINITY;
            loop {
                if 2 * k > opts.max_terms {
                    return Err(NumericError::Unreachable { achieved: est, terms: k });
                }
                k *= 2;
                s.advance(k);
                est = 2.0 * s.value().sub(&prev).abs_f64() / damp;
                if est <= eps {
                    return Ok(Evaluation { value: s.value().to_hp(prec), tail: est, terms: k });
                }
                prev = s.value().clone();
            }
        }
        Method::Extrapolate { period } => {
            let logs = w.args[..m - 1].iter().zip(&w.exps).filter(|(x, &n)| n == 1 && x.is_one()).count();
            let orders = 6;
            let npts = 1 + orders * (logs + 1);
            let wp = prec.max(DOUBLE_DOUBLE_BITS) + 64;
            let mut base = period.max(1) * 256;
            loop {
                let cutoffs: Vec<u64> = (1..=npts as u64 + 1).map(|i| base * i).collect();
                let top = *cutoffs.last().expect("cutoffs");
                if top > opts.max_terms {
                    return Err(NumericError::Unreachable { achieved: f64::INFINITY, terms: top });
                }
                let mut s = fresh();
                let mut samples = Vec::with_capacity(cutoffs.len());
                for &k in &cutoffs {
                    s.advance(k);
                    samples.push(s.value().clone());
                }
                let combine = |idx: std::ops::Range<usize>| -> Option<F> {
                    let wts = extrapolation_weights(&cutoffs[idx.clone()], logs, wp)?;
                    let mut acc = one.zero_like();
                    for (wt, v) in wts.iter().zip(&samples[idx]) {
                        let c = F::from_hp(&HPComplex { re: wt.clone(), im: BigFloat::new(wp), prec: wp });
                        acc = acc.add(&c.mul(v));
                    }
                    Some(acc)
                };
                let (Some(a), Some(b)) = (combine(1..npts + 1), combine(0..npts)) else {
                    return Err(NumericError::Unreachable { achieved: f64::INFINITY, terms: top });
                };
                let est = a.sub(&b).abs_f64();
                if est <= eps {
                    return Ok(Evaluation { value: a.to_hp(prec), tail: est, terms: top });
                }
                base *= 2;
            }
        }
    }
}

/// Li of a convergent word, with a tail estimate not exceeding `eps_tail`.
pub fn eval(word: &PolylogWord, eps_tail: f64) -> Result<Evaluation, NumericError> {
    eval_with(word, eps_tail, &EvalOptions::default())
}

pub fn eval_with(word: &PolylogWord, eps_tail: f64, opts: &EvalOptions) -> Result<Evaluation, NumericError> {
    if !word.is_convergent() {
        return Err(NumericError::Divergent);
    }
    let real = word.args.iter().all(HPComplex::is_real);
    match (word.prec <= DOUBLE_DOUBLE_BITS, real) {
        (true, true) => eval_generic::<TwoFloat>(word, eps_tail, opts),
        (true, false) => eval_generic::<Complex<TwoFloat>>(word, eps_tail, opts),
        (false, true) => eval_generic::<BigReal>(word, eps_tail, opts),
        (false, false) => eval_generic::<Complex<BigReal>>(word, eps_tail, opts),
    }
}
