use astro_float::BigFloat;
use num_traits::{One, Signed, ToPrimitive};
use twofloat::TwoFloat;

use super::scalar::{consts, rational_to_big, RM};
use super::*;
use crate::linalg::Rational;
use crate::words::quasi_shuffle;

/// |Li_u·Li_v − Σ Li_t| over the quasi-shuffle terms t, with the summed tail estimates.
#[derive(Clone, Debug)]
pub struct Residual {
    pub value: HPComplex,
    pub tail: f64,
}

impl Residual {
    pub fn abs(&self) -> f64 {
        self.value.abs_f64()
    }
}

/// The words of the quasi-shuffle expansion of Li_u·Li_v.
pub fn stuffle_terms(u: &PolylogWord, v: &PolylogWord) -> Vec<PolylogWord> {
    let prec = u.prec.max(v.prec);
    let lu: Vec<(HPComplex, u32)> = u.args.iter().cloned().zip(u.exps.iter().copied()).collect();
    let lv: Vec<(HPComplex, u32)> = v.args.iter().cloned().zip(v.exps.iter().copied()).collect();
    quasi_shuffle(&lu, &lv, &|a: &HPComplex, b: &HPComplex| a.mul(b))
        .into_iter()
        .map(|t| {
            let (args, exps): (Vec<HPComplex>, Vec<u32>) = t.into_iter().unzip();
            PolylogWord { exps, args, prec }
        })
        .collect()
}

pub fn stuffle_check(u: &PolylogWord, v: &PolylogWord, eps_tail: f64) -> Result<Residual, NumericError> {
    stuffle_check_with(u, v, eps_tail, &EvalOptions::default())
}

pub fn stuffle_check_with(
    u: &PolylogWord,
    v: &PolylogWord,
    eps_tail: f64,
    opts: &EvalOptions,
) -> Result<Residual, NumericError> {
    let a = eval_with(u, eps_tail, opts)?;
    let b = eval_with(v, eps_tail, opts)?;
    let mut value = a.value.mul(&b.value);
    let mut tail = a.tail * b.value.abs_f64() + b.tail * a.value.abs_f64();
    for t in stuffle_terms(u, v) {
        let e = eval_with(&t, eps_tail, opts)?;
        value = value.sub(&e.value);
        tail += e.tail;
    }
    Ok(Residual { value, tail })
}

/// Li(x) − l^{w−m} Σ_{yᵢ^l = xᵢ} Li(y), for |xᵢ| < 1 and l ≥ 1.
pub fn distribution_check(word: &PolylogWord, l: u32, eps_tail: f64) -> Result<Residual, NumericError> {
    if let Some(i) = word.args.iter().position(|x| x.modulus_cmp_one() != Ordering::Less) {
        return Err(NumericError::OutsideDisk(i));
    }
    let lhs = eval(word, eps_tail)?;
    let roots: Vec<Vec<HPComplex>> = word.args.iter().map(|x| x.roots(l)).collect();
    let m = word.depth();
    let mut total = HPComplex::zero(word.prec);
    let mut tail = 0.0;
    let count = (l as usize).pow(m as u32);
    for idx in 0..count {
        let mut r = idx;
        let args: Vec<HPComplex> = (0..m)
            .map(|i| {
                let c = roots[i][r % l as usize].clone();
                r /= l as usize;
                c
            })
            .collect();
        let e = eval(&PolylogWord { exps: word.exps.clone(), args, prec: word.prec }, eps_tail)?;
        total = total.add(&e.value);
        tail += e.tail;
    }
    let scale = Rational::from_integer(l.into()).pow((word.weight() as usize - m) as i32);
    let tail = lhs.tail + tail * scale.to_f64().unwrap_or(f64::INFINITY);
    Ok(Residual { value: lhs.value.sub(&total.scale(&scale)), tail })
}

/// I_{n₁,…,nₘ}(a₁:…:aₘ:aₘ₊₁) = Li_{n₁,…,nₘ}(a₂/a₁, …, aₘ₊₁/aₘ).
pub fn eval_iterated(
    exps: &[u32],
    a: &[HPComplex],
    eps_tail: f64,
    opts: &EvalOptions,
) -> Result<Evaluation, NumericError> {
    if a.len() != exps.len() + 1 {
        return Err(NumericError::LengthMismatch { exps: exps.len(), args: a.len().saturating_sub(1) });
    }
    let prec = a.iter().map(|z| z.prec).max().unwrap_or(DEFAULT_PRECISION);
    let args = a.windows(2).map(|p| p[1].div(&p[0])).collect();
    eval_with(&PolylogWord::new(exps.to_vec(), args, prec)?, eps_tail, opts)
}

/// Which letters of the word are moved to 1 − ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Deformation {
    /// Every trailing (1; 1) letter: Li_{…,1,…,1}(x, 1−ε, …, 1−ε).
    Series,
    /// Only the last argument: Li_{…,1,…,1}(x, 1, …, 1, 1−ε), the iterated-integral form.
    Trailing,
}

/// c₀ + c₁L + … + c_d L^d in L = log ε.
#[derive(Clone, Debug)]
pub struct LogPolynomial {
    pub coeffs: Vec<HPComplex>,
}

impl LogPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff_f64(&self, i: usize) -> f64 {
        self.coeffs.get(i).map_or(0.0, HPComplex::re_f64)
    }

    /// Largest coefficient difference in absolute value.
    pub fn max_diff(&self, other: &LogPolynomial) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let prec = self.coeffs.first().or(other.coeffs.first()).map_or(DEFAULT_PRECISION, |c| c.prec);
        let zero = HPComplex::zero(prec);
        (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero).sub(other.coeffs.get(i).unwrap_or(&zero)).abs_f64())
            .fold(0.0, f64::max)
    }
}

/// (−log ε)^m / m!, the exact value of Li_{1,…,1}(1, …, 1, 1−ε).
pub fn all_ones_expansion(m: usize, prec: usize) -> LogPolynomial {
    let mut coeffs = vec![HPComplex::zero(prec); m + 1];
    let fact: i64 = (1..=m as i64).product();
    let sign = if m % 2 == 0 { 1 } else { -1 };
    coeffs[m] = HPComplex::from_rational(&Rational::new(sign.into(), fact.into()), prec);
    LogPolynomial { coeffs }
}

#[derive(Clone, Debug)]
pub struct Regularization {
    pub route: Deformation,
    pub poly: LogPolynomial,
    /// Deformed values on the grid, in grid order.
    pub values: Vec<Evaluation>,
    /// (−log ε)^m/m! when the word is 1,…,1 at 1,…,1 and the route is `Trailing`.
    pub closed_form: Option<LogPolynomial>,
}

fn trailing_divergent(word: &PolylogWord) -> usize {
    word.exps.iter().zip(&word.args).rev().take_while(|(&n, x)| n == 1 && x.is_one()).count()
}

fn check_grid(grid: &[Rational], degree: usize) -> Result<Vec<f64>, NumericError> {
    if grid.len() < degree + 1 {
        return Err(NumericError::IllConditionedGrid(format!("{} points for degree {degree}", grid.len())));
    }
    if grid.iter().any(|e| !e.is_positive() || *e >= Rational::one()) {
        return Err(NumericError::IllConditionedGrid("ε must lie in (0, 1)".into()));
    }
    let logs: Vec<f64> = grid.iter().map(|e| e.to_f64().unwrap_or(f64::NAN).ln()).collect();
    for i in 0..logs.len() {
        for j in 0..i {
            if (logs[i] - logs[j]).abs() < 1e-2 {
                return Err(NumericError::IllConditionedGrid(format!("points {j} and {i} too close")));
            }
        }
    }
    Ok(logs)
}

/// Least-squares fit of a degree-d polynomial in log ε through the values.
fn fit(grid: &[Rational], values: &[HPComplex], degree: usize, prec: usize) -> Result<LogPolynomial, NumericError> {
    let wp = prec + 64;
    let mut cc = consts();
    let logs: Vec<BigFloat> = grid.iter().map(|e| rational_to_big(e, wp).ln(wp, RM, &mut cc)).collect();
    let v: Vec<Vec<BigFloat>> = logs
        .iter()
        .map(|l| {
            let mut row = vec![BigFloat::from_u8(1, wp)];
            for i in 1..=degree {
                row.push(row[i - 1].mul(l, wp, RM));
            }
            row
        })
        .collect();
    let n = degree + 1;
    let normal: Vec<Vec<BigFloat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| v.iter().fold(BigFloat::new(wp), |acc, r| acc.add(&r[i].mul(&r[j], wp, RM), wp, RM)))
                .collect()
        })
        .collect();
    let mut coeffs = vec![HPComplex::zero(prec); n];
    for (j, y) in values.iter().enumerate() {
        let rhs: Vec<BigFloat> = (0..n).map(|i| v[j][i].clone()).collect();
        let g = super::solve_big(normal.clone(), rhs, wp)
            .ok_or_else(|| NumericError::IllConditionedGrid("singular normal equations".into()))?;
        for i in 0..n {
            let wgt = HPComplex { re: g[i].clone(), im: BigFloat::new(wp), prec: wp };
            coeffs[i] = coeffs[i].add(&wgt.mul(y));
        }
    }
    for c in &mut coeffs {
        c.prec = prec;
    }
    Ok(LogPolynomial { coeffs })
}

fn is_all_ones(word: &PolylogWord) -> bool {
    word.exps.iter().all(|&n| n == 1) && word.args.iter().all(HPComplex::is_one)
}

/// Fits the log ε expansion of the (1−ε)-deformed word on the grid.
pub fn regularize(
    word: &PolylogWord,
    eps_grid: &[Rational],
    route: Deformation,
    eps_tail: f64,
) -> Result<Regularization, NumericError> {
    let d = trailing_divergent(word);
    check_grid(eps_grid, d)?;
    let m = word.depth();
    let mut values = Vec::with_capacity(eps_grid.len());
    for e in eps_grid {
        let x = HPComplex::from_rational(&(Rational::one() - e), word.prec);
        let mut args = word.args.clone();
        let moved = match route {
            Deformation::Series => m - d..m,
            Deformation::Trailing => m - d.min(1)..m,
        };
        for a in &mut args[moved] {
            *a = x.clone();
        }
        values.push(eval(&PolylogWord { exps: word.exps.clone(), args, prec: word.prec }, eps_tail)?);
    }
    let ys: Vec<HPComplex> = values.iter().map(|v| v.value.clone()).collect();
    let poly = fit(eps_grid, &ys, d, word.prec)?;
    let closed_form = (route == Deformation::Trailing && is_all_ones(word)).then(|| all_ones_expansion(m, word.prec));
    Ok(Regularization { route, poly, values, closed_form })
}

/// Li_{1,…,1}(1, …, 1, 1−ε) for depths 1..=max_depth in one pass over k.
fn all_ones_pass<R: Real>(eps: &Rational, max_depth: usize, big_k: u64, prec: usize) -> Vec<R> {
    let one = R::from_hp(&HPComplex::one(prec));
    let r = R::from_hp(&HPComplex::from_rational(&(Rational::one() - eps), prec));
    let mut h = vec![one.zero_like(); max_depth];
    h[0] = one.clone();
    let mut acc = vec![one.zero_like(); max_depth];
    let mut pw = one.clone();
    for k in 1..=big_k {
        pw = pw.mul(&r);
        let t = pw.div_u64(k);
        for j in 0..max_depth {
            acc[j] = acc[j].add(&t.mul(&h[j]));
        }
        let inv = one.div_u64(k);
        for j in (1..max_depth).rev() {
            h[j] = h[j].add(&inv.mul(&h[j - 1]));
        }
    }
    acc
}

/// `regularize` with the trailing deformation for the all-ones words of depth
/// 1..=max_depth, sharing one summation per grid point.
pub fn regularize_all_ones(
    max_depth: usize,
    eps_grid: &[Rational],
    prec: usize,
    eps_tail: f64,
    max_terms: u64,
) -> Result<Vec<Regularization>, NumericError> {
    check_grid(eps_grid, max_depth)?;
    let mut per_depth: Vec<Vec<Evaluation>> = vec![Vec::new(); max_depth];
    for e in eps_grid {
        let r = 1.0 - e.to_f64().unwrap_or(f64::NAN);
        let inner = vec![(1.0, 1); max_depth - 1];
        let bound = |k: u64| geometric_tail(r, 1, &inner, k);
        let k = super::smallest_cutoff(bound, eps_tail, max_terms)
            .ok_or(NumericError::Unreachable { achieved: bound(max_terms), terms: max_terms })?;
        let vals: Vec<HPComplex> = if prec <= DOUBLE_DOUBLE_BITS {
            all_ones_pass::<TwoFloat>(e, max_depth, k, prec).iter().map(|v| v.to_hp(prec)).collect()
        } else {
            all_ones_pass::<BigReal>(e, max_depth, k, prec).iter().map(|v| v.to_hp(prec)).collect()
        };
        for (j, v) in vals.into_iter().enumerate() {
            per_depth[j].push(Evaluation { value: v, tail: bound(k), terms: k });
        }
    }
    per_depth
        .into_iter()
        .enumerate()
        .map(|(j, values)| {
            let ys: Vec<HPComplex> = values.iter().map(|v| v.value.clone()).collect();
            let poly = fit(eps_grid, &ys, j + 1, prec)?;
            Ok(Regularization {
                route: Deformation::Trailing,
                poly,
                values,
                closed_form: Some(all_ones_expansion(j + 1, prec)),
            })
        })
        .collect()
}
