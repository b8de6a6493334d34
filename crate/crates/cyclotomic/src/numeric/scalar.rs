//! Scalars for the series: double-double (about 106 bits) for speed, astro-float
//! beyond that. Values cross the public API as [`HPComplex`].

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use twofloat::TwoFloat;

use crate::linalg::Rational;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Largest precision served by the double-double backend.
pub const DOUBLE_DOUBLE_BITS: usize = 106;

pub(crate) fn consts() -> Consts {
    Consts::new().expect("astro-float constants cache")
}

pub(crate) fn big_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let mut cc = consts();
    x.format(Radix::Dec, RM, &mut cc).ok().and_then(|s| s.parse().ok()).unwrap_or(f64::NAN)
}

fn bigint_to_big(n: &BigInt, p: usize) -> BigFloat {
    let mut cc = consts();
    BigFloat::parse(&n.to_string(), Radix::Dec, p, RM, &mut cc)
}

pub(crate) fn rational_to_big(r: &Rational, p: usize) -> BigFloat {
    bigint_to_big(r.numer(), p + 64).div(&bigint_to_big(r.denom(), p + 64), p, RM)
}

/// Operations used by the nested-sum recursion and the extrapolation weights.
pub trait Field: Clone + Send + Sync {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div_u64(&self, k: u64) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn abs_f64(&self) -> f64;
    /// Reads the real part only when `Self` is real.
    fn from_hp(z: &HPComplex) -> Self;
    fn to_hp(&self, prec: usize) -> HPComplex;
}

/// Real scalars that can be converted to and from astro-float.
pub trait Real: Field {
    fn from_big(x: &BigFloat, p: usize) -> Self;
    fn to_big(&self, p: usize) -> BigFloat;
    fn div(&self, o: &Self) -> Self;
    fn from_f64_p(x: f64, p: usize) -> Self;
}

impl Field for TwoFloat {
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn div_u64(&self, k: u64) -> Self {
        *self / (k as f64)
    }
    fn zero_like(&self) -> Self {
        TwoFloat::from(0.0)
    }
    fn one_like(&self) -> Self {
        TwoFloat::from(1.0)
    }
    fn abs_f64(&self) -> f64 {
        self.hi().abs()
    }
    fn from_hp(z: &HPComplex) -> Self {
        Self::from_big(&z.re, z.prec)
    }
    fn to_hp(&self, prec: usize) -> HPComplex {
        HPComplex { re: self.to_big(prec), im: BigFloat::new(prec), prec }
    }
}

impl Real for TwoFloat {
    fn from_big(x: &BigFloat, p: usize) -> Self {
        let hi = big_to_f64(x);
        let lo = big_to_f64(&x.sub(&BigFloat::from_f64(hi, p + 64), p + 64, RM));
        TwoFloat::new_add(hi, lo)
    }
    fn to_big(&self, p: usize) -> BigFloat {
        BigFloat::from_f64(self.hi(), p).add(&BigFloat::from_f64(self.lo(), p), p, RM)
    }
    fn div(&self, o: &Self) -> Self {
        *self / *o
    }
    fn from_f64_p(x: f64, _p: usize) -> Self {
        TwoFloat::from(x)
    }
}

/// An astro-float number together with its working precision.
#[derive(Clone, Debug)]
pub struct BigReal {
    pub v: BigFloat,
    pub p: usize,
}

impl Field for BigReal {
    fn add(&self, o: &Self) -> Self {
        BigReal { v: self.v.add(&o.v, self.p, RM), p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        BigReal { v: self.v.sub(&o.v, self.p, RM), p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        BigReal { v: self.v.mul(&o.v, self.p, RM), p: self.p }
    }
    fn div_u64(&self, k: u64) -> Self {
        BigReal { v: self.v.div(&BigFloat::from_u64(k, 64), self.p, RM), p: self.p }
    }
    fn zero_like(&self) -> Self {
        BigReal { v: BigFloat::new(self.p), p: self.p }
    }
    fn one_like(&self) -> Self {
        BigReal { v: BigFloat::from_u8(1, self.p), p: self.p }
    }
    fn abs_f64(&self) -> f64 {
        big_to_f64(&self.v).abs()
    }
    fn from_hp(z: &HPComplex) -> Self {
        Self::from_big(&z.re, z.prec)
    }
    fn to_hp(&self, prec: usize) -> HPComplex {
        HPComplex { re: self.v.clone(), im: BigFloat::new(prec), prec }
    }
}

impl Real for BigReal {
    fn from_big(x: &BigFloat, p: usize) -> Self {
        let mut v = x.clone();
        v.set_precision(p, RM).expect("precision");
        BigReal { v, p }
    }
    fn to_big(&self, _p: usize) -> BigFloat {
        self.v.clone()
    }
    fn div(&self, o: &Self) -> Self {
        BigReal { v: self.v.div(&o.v, self.p, RM), p: self.p }
    }
    fn from_f64_p(x: f64, p: usize) -> Self {
        BigReal { v: BigFloat::from_f64(x, p), p }
    }
}

#[derive(Clone, Debug)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Field for Complex<R> {
    fn add(&self, o: &Self) -> Self {
        Complex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
    fn sub(&self, o: &Self) -> Self {
        Complex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
    fn mul(&self, o: &Self) -> Self {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    fn div_u64(&self, k: u64) -> Self {
        Complex { re: self.re.div_u64(k), im: self.im.div_u64(k) }
    }
    fn zero_like(&self) -> Self {
        Complex { re: self.re.zero_like(), im: self.re.zero_like() }
    }
    fn one_like(&self) -> Self {
        Complex { re: self.re.one_like(), im: self.re.zero_like() }
    }
    fn abs_f64(&self) -> f64 {
        self.re.abs_f64().hypot(self.im.abs_f64())
    }
    fn from_hp(z: &HPComplex) -> Self {
        z.to_field()
    }
    fn to_hp(&self, prec: usize) -> HPComplex {
        HPComplex::from_field(self, prec)
    }
}

/// A complex number with astro-float parts at a fixed working precision (bits).
#[derive(Clone, Debug)]
pub struct HPComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: usize,
}

impl HPComplex {
    pub fn zero(prec: usize) -> Self {
        HPComplex { re: BigFloat::new(prec), im: BigFloat::new(prec), prec }
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        HPComplex { re: BigFloat::from_i64(x, prec), im: BigFloat::new(prec), prec }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        HPComplex { re: BigFloat::from_f64(re, prec), im: BigFloat::from_f64(im, prec), prec }
    }

    pub fn from_rational(r: &Rational, prec: usize) -> Self {
        HPComplex { re: rational_to_big(r, prec), im: BigFloat::new(prec), prec }
    }

    /// e^{2πik/n}.
    pub fn root_of_unity(k: i64, n: u64, prec: usize) -> Self {
        let n = n as i64;
        let k = k.rem_euclid(n);
        // Exact values on the axes avoid a spurious |x| > 1 from rounding.
        if (4 * k) % n == 0 {
            return match 4 * k / n {
                0 => Self::from_i64(1, prec),
                1 => HPComplex { re: BigFloat::new(prec), im: BigFloat::from_i64(1, prec), prec },
                2 => Self::from_i64(-1, prec),
                _ => HPComplex { re: BigFloat::new(prec), im: BigFloat::from_i64(-1, prec), prec },
            };
        }
        let g = k.gcd(&n);
        let (k, n) = (k / g, n / g);
        let mut cc = consts();
        let wp = prec + 64;
        let theta = cc.pi(wp, RM).mul(&BigFloat::from_i64(2 * k, wp), wp, RM).div(&BigFloat::from_i64(n, wp), wp, RM);
        let re = theta.cos(prec, RM, &mut cc);
        let im = theta.sin(prec, RM, &mut cc);
        HPComplex { re, im, prec }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        HPComplex { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM), prec: p }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        HPComplex { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM), prec: p }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        HPComplex { re, im, prec: p }
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        let d = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let re = self.re.mul(&o.re, p, RM).add(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.im.mul(&o.re, p, RM).sub(&self.re.mul(&o.im, p, RM), p, RM);
        HPComplex { re: re.div(&d, p, RM), im: im.div(&d, p, RM), prec: p }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.mul(&Self::from_rational(r, self.prec))
    }

    pub fn neg(&self) -> Self {
        HPComplex { re: self.re.neg(), im: self.im.neg(), prec: self.prec }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs_f64(&self) -> f64 {
        big_to_f64(&self.norm_sqr()).sqrt()
    }

    pub fn re_f64(&self) -> f64 {
        big_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        big_to_f64(&self.im)
    }

    /// |z|² compared with 1 up to a few ulps of the working precision.
    pub fn modulus_cmp_one(&self) -> std::cmp::Ordering {
        let d = big_to_f64(&self.norm_sqr().sub(&BigFloat::from_u8(1, self.prec), self.prec, RM));
        let tol = 2f64.powi(-(self.prec as i32) + 8);
        if d.abs() <= tol {
            std::cmp::Ordering::Equal
        } else if d < 0.0 {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    }

    pub fn is_one(&self) -> bool {
        let tol = 2f64.powi(-(self.prec as i32) + 8);
        self.sub(&Self::one(self.prec)).abs_f64() <= tol
    }

    /// All l-th roots, starting from the principal one.
    pub fn roots(&self, l: u32) -> Vec<HPComplex> {
        let p = self.prec;
        let wp = p + 64;
        let mut cc = consts();
        if self.re.is_zero() && self.im.is_zero() {
            return vec![Self::zero(p); l as usize];
        }
        let r = self.norm_sqr().sqrt(wp, RM);
        let lb = BigFloat::from_u64(u64::from(l), wp);
        let rl = r.ln(wp, RM, &mut cc).div(&lb, wp, RM).exp(wp, RM, &mut cc);
        let pi = cc.pi(wp, RM);
        let theta = atan2(&self.im, &self.re, wp, &mut cc);
        (0..l)
            .map(|j| {
                let a = theta
                    .add(&pi.mul(&BigFloat::from_u64(2 * u64::from(j), wp), wp, RM), wp, RM)
                    .div(&lb, wp, RM);
                let re = rl.mul(&a.cos(wp, RM, &mut cc), p, RM);
                let im = rl.mul(&a.sin(wp, RM, &mut cc), p, RM);
                HPComplex { re, im, prec: p }
            })
            .collect()
    }

    pub fn to_field<R: Real>(&self) -> Complex<R> {
        Complex { re: R::from_big(&self.re, self.prec), im: R::from_big(&self.im, self.prec) }
    }

    pub fn from_field<R: Real>(z: &Complex<R>, prec: usize) -> Self {
        HPComplex { re: z.re.to_big(prec), im: z.im.to_big(prec), prec }
    }

    /// Decimal renderings of the real and imaginary parts, deterministic for a given precision.
    pub fn render_parts(&self) -> (String, String) {
        let mut cc = consts();
        let mut f = |x: &BigFloat| {
            if x.is_zero() {
                "0".to_string()
            } else {
                x.format(Radix::Dec, RM, &mut cc).unwrap_or_else(|_| "nan".into())
            }
        };
        (f(&self.re), f(&self.im))
    }

    /// `re` or `re+im i`.
    pub fn render(&self) -> String {
        let (re, im) = self.render_parts();
        if self.im.is_zero() {
            re
        } else {
            let sep = if im.starts_with('-') { "" } else { "+" };
            format!("{re}{sep}{im}i")
        }
    }
}

impl fmt::Display for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn atan2(y: &BigFloat, x: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    let pi = cc.pi(p, RM);
    if x.is_zero() {
        let half = pi.div(&BigFloat::from_u8(2, p), p, RM);
        return if y.is_negative() { half.neg() } else { half };
    }
    let base = y.div(x, p, RM).atan(p, RM, cc);
    if x.is_positive() {
        base
    } else if y.is_negative() {
        base.sub(&pi, p, RM)
    } else {
        base.add(&pi, p, RM)
    }
}

/// An exactly specified argument r·e^{2πik/n} with r ≥ 0 rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactArg {
    pub modulus: Rational,
    pub k: i64,
    pub n: u64,
}

impl ExactArg {
    pub fn rational(r: Rational) -> Self {
        if r.is_negative() {
            ExactArg { modulus: -r, k: 1, n: 2 }.reduced()
        } else {
            ExactArg { modulus: r, k: 0, n: 1 }
        }
    }

    pub fn root_of_unity(k: i64, n: u64) -> Self {
        ExactArg { modulus: Rational::from_integer(1.into()), k, n }.reduced()
    }

    fn reduced(self) -> Self {
        let n = self.n as i64;
        let k = self.k.rem_euclid(n);
        let g = if k == 0 { n } else { k.gcd(&n) };
        ExactArg { modulus: self.modulus, k: k / g, n: (n / g) as u64 }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n.lcm(&o.n);
        let k = self.k * (n / self.n) as i64 + o.k * (n / o.n) as i64;
        ExactArg { modulus: &self.modulus * &o.modulus, k, n }.reduced()
    }

    pub fn div(&self, o: &Self) -> Self {
        let inv = ExactArg { modulus: o.modulus.recip(), k: -o.k, n: o.n };
        self.mul(&inv)
    }

    pub fn is_unimodular(&self) -> bool {
        self.modulus == Rational::from_integer(1.into())
    }

    /// Multiplicative order of the angular part.
    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.modulus.is_zero()
    }

    pub fn to_hp(&self, prec: usize) -> HPComplex {
        let w = HPComplex::root_of_unity(self.k, self.n, prec);
        if self.is_unimodular() {
            w
        } else {
            w.scale(&self.modulus)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q_frac;

    #[test]
    fn double_double_round_trip() {
        let x = HPComplex::from_rational(&q_frac(1, 3), 128);
        let t = TwoFloat::from_big(&x.re, 128);
        let back = t.to_big(128);
        let err = big_to_f64(&back.sub(&x.re, 128, RM)).abs();
        assert!(err < 1e-31, "{err}");
    }

    #[test]
    fn roots_multiply_back() {
        let x = HPComplex::from_f64(0.3, -0.4, 128);
        for r in x.roots(3) {
            let c = r.mul(&r).mul(&r);
            assert!(c.sub(&x).abs_f64() < 1e-35);
        }
    }

    #[test]
    fn exact_args_compose() {
        let a = ExactArg::root_of_unity(1, 6);
        let b = ExactArg::root_of_unity(1, 3);
        assert_eq!(a.mul(&a), b);
        assert_eq!(a.div(&a), ExactArg::rational(Rational::from_integer(1.into())));
        assert_eq!(ExactArg::rational(q_frac(-1, 2)), ExactArg { modulus: q_frac(1, 2), k: 1, n: 2 });
        let w = ExactArg::root_of_unity(1, 4).to_hp(128);
        assert!(w.re.is_zero());
        assert_eq!(w.modulus_cmp_one(), std::cmp::Ordering::Equal);
    }
}
