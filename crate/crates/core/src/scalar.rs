//! Exact scalars: arbitrary-precision rationals and Gaussian rationals.
//!
//! `Q(i)` stands in for the complex numbers everywhere: all constructions in
//! this crate are linear-algebraic and the shipped fixtures are definable
//! over `Q(i)`, so exactness of subspace equality is never lost to rounding.
//! Genuine transcendental periods are out of reach by design; see the crate
//! docs.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exact rational number.
pub type Rat = BigRational;

/// Exact Gaussian rational `a + b i`.
pub type GaussRat = Complex<BigRational>;

/// Runtime tag for the two coefficient fields.
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum Field {
    Q,
    Qi,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Q => "Q",
            Field::Qi => "Qi",
        }
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A field element the rest of the crate can compute with exactly.
pub trait Scalar: Clone + PartialEq + Eq + std::fmt::Debug + 'static {
    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` on zero.
    fn inv(&self) -> Option<Self>;
    /// Complex conjugation; the identity on `Q`.
    fn conj(&self) -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rat(r: &Rat) -> Self;

    /// Canonical JSON form: `"a/b"` for rationals, `{"re","im"}` for
    /// Gaussian rationals.
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
    /// Short human-readable form for text tables.
    fn render(&self) -> String;
}

/// Renders a rational as the canonical `a/b` string (denominator always
/// present and positive).
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"a/b"` or the integer shorthand `"a"`; also accepts JSON
/// integers. Normalization (gcd reduction, positive denominator) is
/// performed by construction.
pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => rat_from_str(s),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::parse("", format!("non-integer number {n}")))?;
            Ok(Rat::from_integer(BigInt::from(i)))
        }
        other => Err(Error::parse("", format!("expected rational string, got {other}"))),
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::parse("", format!("bad integer {num:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::parse("", format!("bad integer {den:?}")))?;
    if den.is_zero() {
        return Err(Error::parse("", "zero denominator"));
    }
    Ok(Rat::new(num, den))
}

pub fn rat_from_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact integer power with negative exponents allowed (base must be
/// nonzero when `exp < 0`).
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num_traits::pow::Pow::pow(base.clone(), exp as u64)
    } else {
        let positive = num_traits::pow::Pow::pow(base.clone(), (-exp) as u64);
        <Rat as One>::one() / positive
    }
}

/// Smallest integer `>= x`.
pub fn rat_ceil(x: &Rat) -> i64 {
    let c = x.ceil();
    let n = c.to_integer();
    // fits desk-scale indices
    let digits = n.to_string();
    digits.parse::<i64>().expect("index overflow")
}

impl Scalar for Rat {
    const FIELD: Field = Field::Q;

    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn is_zero(&self) -> bool {
        <Rat as Zero>::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(<Rat as One>::one() / self)
        }
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_int(n: i64) -> Self {
        rat_from_i64(n)
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn to_json(&self) -> Value {
        Value::String(rat_to_string(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        rat_from_json(v)
    }
    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            rat_to_string(self)
        }
    }
}

impl Scalar for GaussRat {
    const FIELD: Field = Field::Qi;

    fn zero() -> Self {
        Complex::new(<Rat as Zero>::zero(), <Rat as Zero>::zero())
    }
    fn one() -> Self {
        Complex::new(<Rat as One>::one(), <Rat as Zero>::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            let norm = &self.re * &self.re + &self.im * &self.im;
            Some(Complex::new(&self.re / &norm, -(&self.im / &norm)))
        }
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn from_int(n: i64) -> Self {
        Complex::new(rat_from_i64(n), <Rat as Zero>::zero())
    }
    fn from_rat(r: &Rat) -> Self {
        Complex::new(r.clone(), <Rat as Zero>::zero())
    }

    fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        map.insert("re".into(), Value::String(rat_to_string(&self.re)));
        map.insert("im".into(), Value::String(rat_to_string(&self.im)));
        Value::Object(map)
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(map) => {
                let re = map
                    .get("re")
                    .map(rat_from_json)
                    .transpose()?
                    .unwrap_or_else(|| <Rat as Zero>::zero());
                let im = map
                    .get("im")
                    .map(rat_from_json)
                    .transpose()?
                    .unwrap_or_else(|| <Rat as Zero>::zero());
                for key in map.keys() {
                    if key != "re" && key != "im" {
                        return Err(Error::parse("", format!("unknown scalar key {key:?}")));
                    }
                }
                Ok(Complex::new(re, im))
            }
            // purely real shorthand
            Value::String(_) | Value::Number(_) => Ok(Complex::new(rat_from_json(v)?, <Rat as Zero>::zero())),
            other => Err(Error::parse("", format!("expected gaussian rational, got {other}"))),
        }
    }
    fn render(&self) -> String {
        if Zero::is_zero(&self.im) {
            Scalar::render(&self.re)
        } else if Zero::is_zero(&self.re) {
            format!("{}i", Scalar::render(&self.im))
        } else if self.im.is_negative() {
            format!("{}{}i", Scalar::render(&self.re), Scalar::render(&self.im))
        } else {
            format!("{}+{}i", Scalar::render(&self.re), Scalar::render(&self.im))
        }
    }
}

/// The imaginary unit of `Q(i)`.
pub fn gauss_i() -> GaussRat {
    Complex::new(<Rat as Zero>::zero(), <Rat as One>::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normalization() {
        let r = rat_from_str("4/-6").unwrap();
        assert_eq!(rat_to_string(&r), "-2/3");
        let r = rat_from_str("3").unwrap();
        assert_eq!(rat_to_string(&r), "3/1");
        assert!(rat_from_str("1/0").is_err());
    }

    #[test]
    fn rational_ceiling() {
        assert_eq!(rat_ceil(&rat_from_str("3/1").unwrap()), 3);
        assert_eq!(rat_ceil(&rat_from_str("7/2").unwrap()), 4);
        assert_eq!(rat_ceil(&rat_from_str("-7/2").unwrap()), -3);
        // p / alpha with alpha = 4/3, p = 4 gives exactly 3
        let p = rat_from_i64(4);
        let alpha = rat_from_str("4/3").unwrap();
        assert_eq!(rat_ceil(&(p / alpha)), 3);
    }

    #[test]
    fn gaussian_field_ops() {
        let i = gauss_i();
        let m1 = Scalar::mul(&i, &i);
        assert_eq!(m1, Scalar::neg(&<GaussRat as Scalar>::one()));
        let inv = Scalar::inv(&i).unwrap();
        assert_eq!(Scalar::mul(&i, &inv), <GaussRat as Scalar>::one());
        assert_eq!(Scalar::conj(&Scalar::conj(&i)), i);
    }

    #[test]
    fn gaussian_json_round_trip() {
        let z = GaussRat::from_json(&serde_json::json!({"re": "1/2", "im": "-3"})).unwrap();
        let back = z.to_json();
        assert_eq!(back, serde_json::json!({"re": "1/2", "im": "-3/1"}));
        let real = GaussRat::from_json(&serde_json::json!("5")).unwrap();
        assert_eq!(real, GaussRat::from_int(5));
    }
}
