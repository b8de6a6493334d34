//! Textual polylogarithm words:
//!
//! ```text
//! word   := "zeta(" ints ")" | "Li(" ints ";" args ")"
//! arg    := factor ("*" factor)*
//! factor := ["-"] int ["/" int] | "w{" int "/" int "}"
//! ```
//!
//! `w{k/N}` is e^{2πik/N}. Whitespace is ignored. `Li` lists letters innermost
//! (smallest summation index) first; `zeta(n₁,…,nₘ)` uses the customary order
//! Σ_{k₁>…>kₘ}, so `zeta(2,1)` is `Li(1,2; 1,1)`.

use std::fmt;

use cyclotomic::linalg::Rational;
use cyclotomic::numeric::{ExactArg, NumericError, PolylogWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedWord {
    pub exps: Vec<u32>,
    pub args: Vec<ExactArg>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad word: {}", self.0)
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

fn int<T: std::str::FromStr>(s: &str) -> Result<T, ParseError> {
    s.parse().map_err(|_| ParseError(format!("not an integer: {s:?}")))
}

fn factor(s: &str) -> Result<ExactArg, ParseError> {
    if let Some(inner) = s.strip_prefix("w{").and_then(|r| r.strip_suffix('}')) {
        let (k, n) = inner.split_once('/').ok_or_else(|| ParseError(format!("expected w{{k/N}}: {s:?}")))?;
        let n: u64 = int(n)?;
        if n == 0 {
            return err("root of unity of order 0");
        }
        return Ok(ExactArg::root_of_unity(int(k)?, n));
    }
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let q: i64 = int(q)?;
            if q == 0 {
                return err("zero denominator");
            }
            Rational::new(int::<i64>(p)?.into(), q.into())
        }
        None => Rational::from_integer(int::<i64>(s)?.into()),
    };
    Ok(ExactArg::rational(r))
}

fn arg(s: &str) -> Result<ExactArg, ParseError> {
    let mut parts = s.split('*');
    let first = factor(parts.next().unwrap_or(""))?;
    parts.try_fold(first, |acc, p| Ok(acc.mul(&factor(p)?)))
}

fn ints(s: &str) -> Result<Vec<u32>, ParseError> {
    if s.is_empty() {
        return err("empty exponent list");
    }
    s.split(',').map(int).collect()
}

impl std::str::FromStr for ParsedWord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(body) = s.strip_prefix("zeta(").and_then(|r| r.strip_suffix(')')) {
            let mut exps = ints(body)?;
            exps.reverse();
            let args = vec![ExactArg::rational(Rational::from_integer(1.into())); exps.len()];
            return Ok(ParsedWord { exps, args });
        }
        if let Some(body) = s.strip_prefix("Li(").and_then(|r| r.strip_suffix(')')) {
            let (e, a) = body.split_once(';').ok_or_else(|| ParseError("Li(...) needs ';'".into()))?;
            let exps = ints(e)?;
            let args = a.split(',').map(arg).collect::<Result<Vec<_>, _>>()?;
            if exps.len() != args.len() {
                return err(format!("{} exponents but {} arguments", exps.len(), args.len()));
            }
            return Ok(ParsedWord { exps, args });
        }
        err(format!("expected zeta(...) or Li(...;...), got {s:?}"))
    }
}

impl ParsedWord {
    pub fn to_polylog(&self, prec: usize) -> Result<PolylogWord, NumericError> {
        PolylogWord::from_exact(self.exps.clone(), &self.args, prec)
    }

    /// Least common order of the arguments on the unit circle (1 if none).
    pub fn period(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.args.iter().filter(|a| a.is_unimodular()).fold(1, |l, a| l / gcd(l, a.order()) * a.order())
    }
}

fn show_arg(a: &ExactArg) -> String {
    let r = if a.modulus.is_integer() { a.modulus.numer().to_string() } else { a.modulus.to_string() };
    match (a.is_unimodular(), a.n) {
        (_, 1) => r,
        (true, _) => format!("w{{{}/{}}}", a.k, a.n),
        (false, _) => format!("{r}*w{{{}/{}}}", a.k, a.n),
    }
}

impl fmt::Display for ParsedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exps.iter().map(u32::to_string).collect();
        let a: Vec<String> = self.args.iter().map(show_arg).collect();
        write!(f, "Li({}; {})", e.join(","), a.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let z: ParsedWord = "zeta(2, 1)".parse().unwrap();
        assert_eq!(z.exps, vec![1, 2]);
        assert!(z.args.iter().all(ExactArg::is_unimodular));
        let w: ParsedWord = "Li(2,1; 1/2, -1/3*w{1/4})".parse().unwrap();
        assert_eq!(w.args[1], ExactArg::root_of_unity(3, 4).mul(&ExactArg::rational(Rational::new(1.into(), 3.into()))));
        assert_eq!(w.to_string(), "Li(2,1; 1/2,1/3*w{3/4})");
        assert_eq!(w.to_string().parse::<ParsedWord>().unwrap(), w);
    }

    #[test]
    fn period_is_the_lcm() {
        let w: ParsedWord = "Li(1,1; w{1/4}, w{1/6})".parse().unwrap();
        assert_eq!(w.period(), 12);
        assert_eq!("Li(2; 1/2)".parse::<ParsedWord>().unwrap().period(), 1);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["Li(2; 1/0)", "Li(2,1; 1/2)", "zeta()", "Li(2 1/2)", "w{1/4}", "Li(2; w{1/0})", "Li(2; x)"] {
            assert!(s.parse::<ParsedWord>().is_err(), "{s}");
        }
    }
}
