//! Exact exponent calculus for Bochner spaces L^p(0,T; L^q(Omega)).
//!
//! All integrability exponents are carried as [`ExtRational`]: an
//! arbitrary-precision rational extended by `+inf`. Bootstrap iterations
//! compose Hoelder and Sobolev steps many times over, so numerators and
//! denominators grow quickly and nothing in this module touches floating
//! point.
//!
//! Conventions are those of a bounded domain and a finite time interval:
//! a larger exponent means a smaller space, so `(p_a, q_a)` embeds into
//! `(p_b, q_b)` whenever both exponents are at least as large.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::error::{ExponentError, Result};

/// A rational number or `+inf`.
///
/// Finite values are kept in lowest terms with a positive denominator
/// (guaranteed by [`BigRational`]). Every finite value orders below
/// `Infinity`. Indeterminate forms (`inf - inf`, `0 * inf`, any operation
/// that would produce `-inf`) panic: they never arise from well-formed
/// exponent arithmetic and silently producing a value would hide a bug.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRational {
    Finite(BigRational),
    Infinity,
}

impl ExtRational {
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator in ExtRational::ratio");
        ExtRational::Finite(BigRational::new(numer.into(), denom.into()))
    }

    pub fn int(n: i64) -> Self {
        ExtRational::Finite(BigRational::from_integer(n.into()))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        assert!(
            !denom.is_zero(),
            "zero denominator in ExtRational::from_big"
        );
        ExtRational::Finite(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        ExtRational::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        ExtRational::Finite(BigRational::one())
    }

    pub fn infinity() -> Self {
        ExtRational::Infinity
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRational::Finite(r) if r.is_zero())
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinity => None,
        }
    }

    /// `1/x`, with `1/inf = 0` and `1/0 = inf`.
    pub fn recip(&self) -> Self {
        match self {
            ExtRational::Infinity => ExtRational::zero(),
            ExtRational::Finite(r) if r.is_zero() => ExtRational::Infinity,
            ExtRational::Finite(r) => ExtRational::Finite(r.recip()),
        }
    }

    /// Smallest integer `>= self`; `None` for `+inf`.
    pub fn ceil(&self) -> Option<BigInt> {
        self.as_finite().map(|r| r.ceil().to_integer())
    }

    /// Largest integer `<= self`; `None` for `+inf`.
    pub fn floor(&self) -> Option<BigInt> {
        self.as_finite().map(|r| r.floor().to_integer())
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, ExtRational::Finite(r) if r.is_integer())
    }

    /// Nearest `f64` (`+inf` maps to `f64::INFINITY`). Only for display and
    /// for handing exponents to numerical code.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Infinity => f64::INFINITY,
            ExtRational::Finite(r) => {
                let n = r.numer().to_f64().unwrap_or(f64::NAN);
                let d = r.denom().to_f64().unwrap_or(f64::NAN);
                if n.is_finite() && d.is_finite() {
                    n / d
                } else {
                    // Huge numerator/denominator: divide in big integers first.
                    let (q, rem) = r.numer().div_rem(r.denom());
                    let frac = BigRational::new(rem, r.denom().clone());
                    q.to_f64().unwrap_or(f64::NAN)
                        + frac
                            .numer()
                            .to_f64()
                            .zip(frac.denom().to_f64())
                            .map(|(a, b)| a / b)
                            .unwrap_or(0.0)
                }
            }
        }
    }

    pub fn min<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl From<i64> for ExtRational {
    fn from(n: i64) -> Self {
        ExtRational::int(n)
    }
}

impl From<BigRational> for ExtRational {
    fn from(r: BigRational) -> Self {
        ExtRational::Finite(r)
    }
}

impl From<BigInt> for ExtRational {
    fn from(n: BigInt) -> Self {
        ExtRational::Finite(BigRational::from_integer(n))
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Infinity => f.write_str("inf"),
            ExtRational::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            ExtRational::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseExtRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}: expected \"a/b\", \"a\" or \"inf\"")]
    Syntax(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

impl FromStr for ExtRational {
    type Err = ParseExtRationalError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseExtRationalError::Empty);
        }
        if matches!(t, "inf" | "+inf") {
            return Ok(ExtRational::Infinity);
        }
        let parse_int = |part: &str| -> std::result::Result<BigInt, ParseExtRationalError> {
            let p = part.trim();
            let digits = p.strip_prefix(['+', '-']).unwrap_or(p);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ParseExtRationalError::Syntax(s.to_string()));
            }
            p.parse::<BigInt>()
                .map_err(|_| ParseExtRationalError::Syntax(s.to_string()))
        };
        match t.split_once('/') {
            Some((n, d)) => {
                let numer = parse_int(n)?;
                let denom = parse_int(d)?;
                if denom.is_zero() {
                    return Err(ParseExtRationalError::ZeroDenominator(s.to_string()));
                }
                Ok(ExtRational::from_big(numer, denom))
            }
            None => Ok(ExtRational::from(parse_int(t)?)),
        }
    }
}

impl Add<&ExtRational> for &ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }
}

impl Sub<&ExtRational> for &ExtRational {
    type Output = ExtRational;
    fn sub(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a - b),
            (ExtRational::Infinity, ExtRational::Finite(_)) => ExtRational::Infinity,
            _ => panic!("indeterminate or negative-infinite difference {self} - {rhs}"),
        }
    }
}

impl Mul<&ExtRational> for &ExtRational {
    type Output = ExtRational;
    fn mul(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a * b),
            (ExtRational::Infinity, ExtRational::Infinity) => ExtRational::Infinity,
            (ExtRational::Infinity, ExtRational::Finite(x))
            | (ExtRational::Finite(x), ExtRational::Infinity) => {
                assert!(x.is_positive(), "indeterminate product {self} * {rhs}");
                ExtRational::Infinity
            }
        }
    }
}

impl Div<&ExtRational> for &ExtRational {
    type Output = ExtRational;
    fn div(self, rhs: &ExtRational) -> ExtRational {
        if self.is_zero() {
            assert!(!rhs.is_zero(), "indeterminate quotient 0/0");
            return ExtRational::zero();
        }
        if let (ExtRational::Infinity, ExtRational::Infinity) = (self, rhs) {
            panic!("indeterminate quotient inf/inf");
        }
        self * &rhs.recip()
    }
}

impl Neg for &ExtRational {
    type Output = ExtRational;
    fn neg(self) -> ExtRational {
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(-a),
            ExtRational::Infinity => panic!("negating +inf"),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<ExtRational> for ExtRational {
            type Output = ExtRational;
            fn $m(self, rhs: ExtRational) -> ExtRational { (&self).$m(&rhs) }
        }
        impl $tr<&ExtRational> for ExtRational {
            type Output = ExtRational;
            fn $m(self, rhs: &ExtRational) -> ExtRational { (&self).$m(rhs) }
        }
        impl $tr<ExtRational> for &ExtRational {
            type Output = ExtRational;
            fn $m(self, rhs: ExtRational) -> ExtRational { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for ExtRational {
    type Output = ExtRational;
    fn neg(self) -> ExtRational {
        -&self
    }
}

/// Shorthand for a finite exponent `n/d`.
pub fn rat(n: i64, d: i64) -> ExtRational {
    ExtRational::ratio(n, d)
}

/// Membership class L^time(0,T; L^space(Omega)).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BochnerSpec {
    pub time_exp: ExtRational,
    pub space_exp: ExtRational,
}

impl BochnerSpec {
    pub fn new(time_exp: ExtRational, space_exp: ExtRational) -> Self {
        BochnerSpec {
            time_exp,
            space_exp,
        }
    }

    /// `L^inf(L^inf)`, the identity of [`holder_combine`].
    pub fn bounded() -> Self {
        BochnerSpec::new(ExtRational::Infinity, ExtRational::Infinity)
    }

    /// Both exponents at least 1, i.e. an honest Banach-valued Lebesgue space.
    pub fn is_admissible(&self) -> bool {
        let one = ExtRational::one();
        self.time_exp >= one && self.space_exp >= one
    }
}

impl fmt::Display for BochnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.time_exp, self.space_exp)
    }
}

/// Hoelder product rule: `1/p = 1/p_a + 1/p_b`, `1/q = 1/q_a + 1/q_b`.
///
/// Results below 1 are returned as-is; use
/// [`BochnerSpec::is_admissible`] to reject them.
pub fn holder_combine(a: &BochnerSpec, b: &BochnerSpec) -> BochnerSpec {
    let combine = |x: &ExtRational, y: &ExtRational| (x.recip() + y.recip()).recip();
    BochnerSpec::new(
        combine(&a.time_exp, &b.time_exp),
        combine(&a.space_exp, &b.space_exp),
    )
}

/// Space exponent of `u` given `grad u` in `L^q`: `3q/(3-q)` below the
/// critical exponent, `+inf` (Morrey) above it.
pub fn sobolev_lift(q: &ExtRational) -> Result<ExtRational> {
    let three = ExtRational::int(3);
    if *q < ExtRational::one() {
        return Err(ExponentError::out_of_range(
            "q",
            q,
            "q >= 1",
            "Sobolev embedding",
        ));
    }
    match q.cmp(&three) {
        Ordering::Less => Ok(&three * q / (&three - q)),
        Ordering::Equal => Err(ExponentError::CriticalExponent {
            criterion: "Sobolev embedding",
        }),
        Ordering::Greater => Ok(ExtRational::Infinity),
    }
}

/// `true` iff `a` is contained in `b` (finite time interval, bounded domain).
pub fn embeds(a: &BochnerSpec, b: &BochnerSpec) -> bool {
    a.time_exp >= b.time_exp && a.space_exp >= b.space_exp
}

/// The parabolic scaling level `2/p + 3/q`.
pub fn scaling_level(s: &BochnerSpec) -> ExtRational {
    ExtRational::int(2) * s.time_exp.recip() + ExtRational::int(3) * s.space_exp.recip()
}
