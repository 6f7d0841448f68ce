//! Complex arithmetic at a caller-chosen number of decimal digits.
//!
//! All values carry their own binary precision. Binary operations produce a
//! result at the larger of the two operand precisions so mixing a freshly
//! built constant with an existing value never silently loses digits.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Complex, Float};

use crate::error::{Error, Result};

/// Extra decimal digits carried beyond the requested precision.
pub const GUARD_DIGITS: u32 = 20;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    pub digits: u32,
    /// Fixed number of product factors. `None` picks the count from `|q|`.
    pub product_order: Option<usize>,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            digits: 60,
            product_order: None,
        }
    }
}

impl PrecisionConfig {
    pub fn new(digits: u32) -> Result<Self> {
        if digits == 0 {
            return Err(Error::Input("precision must be at least one digit".into()));
        }
        Ok(PrecisionConfig {
            digits,
            product_order: None,
        })
    }

    pub fn with_product_order(mut self, n: usize) -> Self {
        self.product_order = Some(n);
        self
    }

    pub fn bits(&self) -> u32 {
        ((self.digits + GUARD_DIGITS) as f64 * LOG2_10).ceil() as u32
    }

    /// Pass threshold for identity checks: `10^-(digits - headroom)`.
    pub fn tolerance(&self, headroom: u32) -> f64 {
        10f64.powi(-(self.digits.saturating_sub(headroom) as i32))
    }
}

#[derive(Clone, PartialEq)]
pub struct PrecisionComplex(Complex);

impl PrecisionComplex {
    pub fn from_rug(c: Complex) -> Self {
        PrecisionComplex(c)
    }

    pub fn zero(prec: u32) -> Self {
        PrecisionComplex(Complex::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        PrecisionComplex(Complex::with_val(prec, 1))
    }

    pub fn i(prec: u32) -> Self {
        PrecisionComplex(Complex::with_val(prec, (0, 1)))
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        PrecisionComplex(Complex::with_val(prec, n))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        PrecisionComplex(Complex::with_val(prec, (re, im)))
    }

    pub fn from_rational(num: i64, den: i64, prec: u32) -> Self {
        let mut c = Complex::with_val(prec, num);
        c /= den;
        PrecisionComplex(c)
    }

    pub fn pi(prec: u32) -> Self {
        PrecisionComplex(Complex::with_val(prec, Constant::Pi))
    }

    /// `2 pi i`.
    pub fn two_pi_i(prec: u32) -> Self {
        let pi = Float::with_val(prec, Constant::Pi);
        PrecisionComplex(Complex::with_val(prec, (0, pi * 2u32)))
    }

    /// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with decimal or exponent
    /// notation in each part.
    pub fn parse(text: &str, prec: u32) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Input("empty number".into()));
        }
        let parse_real = |part: &str| -> Result<Float> {
            Float::parse(part)
                .map(|p| Float::with_val(prec, p))
                .map_err(|_| Error::Input(format!("cannot parse number '{text}'")))
        };
        if let Some(body) = s.strip_suffix('i') {
            let bytes = body.as_bytes();
            let mut split = None;
            for idx in (1..bytes.len()).rev() {
                let c = bytes[idx];
                if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                    split = Some(idx);
                    break;
                }
            }
            let (re_part, im_part) = match split {
                Some(idx) => (&body[..idx], &body[idx..]),
                None => ("", body),
            };
            let im = match im_part {
                "" | "+" => Float::with_val(prec, 1),
                "-" => Float::with_val(prec, -1),
                p => parse_real(p)?,
            };
            let re = if re_part.is_empty() {
                Float::new(prec)
            } else {
                parse_real(re_part)?
            };
            Ok(PrecisionComplex(Complex::with_val(prec, (re, im))))
        } else {
            Ok(PrecisionComplex(Complex::with_val(prec, parse_real(&s)?)))
        }
    }

    pub fn prec(&self) -> u32 {
        let (a, b) = self.0.prec();
        a.max(b)
    }

    pub fn inner(&self) -> &Complex {
        &self.0
    }

    pub fn re_f64(&self) -> f64 {
        self.0.real().to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.0.imag().to_f64()
    }

    pub fn re(&self) -> Float {
        self.0.real().clone()
    }

    pub fn im(&self) -> Float {
        self.0.imag().clone()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.0.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.real().is_finite() && self.0.imag().is_finite()
    }

    pub fn conj(&self) -> Self {
        PrecisionComplex(Complex::with_val(self.prec(), self.0.conj_ref()))
    }

    pub fn exp(&self) -> Self {
        PrecisionComplex(Complex::with_val(self.prec(), self.0.exp_ref()))
    }

    pub fn sin(&self) -> Self {
        PrecisionComplex(Complex::with_val(self.prec(), self.0.sin_ref()))
    }

    pub fn cos(&self) -> Self {
        PrecisionComplex(Complex::with_val(self.prec(), self.0.cos_ref()))
    }

    /// Principal branch.
    pub fn sqrt(&self) -> Self {
        PrecisionComplex(Complex::with_val(self.prec(), self.0.sqrt_ref()))
    }

    /// Principal branch.
    pub fn ln(&self) -> Self {
        PrecisionComplex(Complex::with_val(self.prec(), self.0.ln_ref()))
    }

    pub fn recip(&self) -> Self {
        PrecisionComplex(Complex::with_val(self.prec(), self.0.recip_ref()))
    }

    pub fn powi(&self, n: i32) -> Self {
        PrecisionComplex(Complex::with_val(self.prec(), (&self.0).pow(n)))
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        let mut c = self.0.clone();
        c *= n;
        PrecisionComplex(c)
    }

    pub fn div_i64(&self, n: i64) -> Self {
        let mut c = self.0.clone();
        c /= n;
        PrecisionComplex(c)
    }

    pub fn mul_i(&self) -> Self {
        let mut c = self.0.clone();
        c.mul_i_mut(false);
        PrecisionComplex(c)
    }

    /// Same value, rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        let mut c = Complex::new(prec);
        c.assign(&self.0);
        PrecisionComplex(c)
    }

    /// `re+imi` with `digits` significant digits in each part.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = fmt_float(self.0.real(), digits);
        let im = self.0.imag();
        let sign = if im.is_sign_negative() { '-' } else { '+' };
        let im_abs = Float::with_val(im.prec(), im.abs_ref());
        format!("{re}{sign}{}i", fmt_float(&im_abs, digits))
    }

    /// Real and imaginary parts as separate decimal strings.
    pub fn parts_decimal(&self, digits: usize) -> (String, String) {
        (fmt_float(self.0.real(), digits), fmt_float(self.0.imag(), digits))
    }
}

fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

impl fmt::Debug for PrecisionComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(25))
    }
}

impl fmt::Display for PrecisionComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_decimal(digits))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $tr_assign:ident, $method_assign:ident, $op:tt) => {
        impl $tr<&PrecisionComplex> for &PrecisionComplex {
            type Output = PrecisionComplex;
            fn $method(self, rhs: &PrecisionComplex) -> PrecisionComplex {
                let prec = self.prec().max(rhs.prec());
                PrecisionComplex(Complex::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl $tr<PrecisionComplex> for PrecisionComplex {
            type Output = PrecisionComplex;
            fn $method(self, rhs: PrecisionComplex) -> PrecisionComplex {
                &self $op &rhs
            }
        }
        impl $tr<&PrecisionComplex> for PrecisionComplex {
            type Output = PrecisionComplex;
            fn $method(self, rhs: &PrecisionComplex) -> PrecisionComplex {
                &self $op rhs
            }
        }
        impl $tr<PrecisionComplex> for &PrecisionComplex {
            type Output = PrecisionComplex;
            fn $method(self, rhs: PrecisionComplex) -> PrecisionComplex {
                self $op &rhs
            }
        }
        impl $tr_assign<&PrecisionComplex> for PrecisionComplex {
            fn $method_assign(&mut self, rhs: &PrecisionComplex) {
                *self = &*self $op rhs;
            }
        }
        impl $tr_assign<PrecisionComplex> for PrecisionComplex {
            fn $method_assign(&mut self, rhs: PrecisionComplex) {
                *self = &*self $op &rhs;
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +);
binop!(Sub, sub, SubAssign, sub_assign, -);
binop!(Mul, mul, MulAssign, mul_assign, *);

impl Div<&PrecisionComplex> for &PrecisionComplex {
    type Output = PrecisionComplex;
    fn div(self, rhs: &PrecisionComplex) -> PrecisionComplex {
        let prec = self.prec().max(rhs.prec());
        PrecisionComplex(Complex::with_val(prec, &self.0 / &rhs.0))
    }
}

impl Div<PrecisionComplex> for PrecisionComplex {
    type Output = PrecisionComplex;
    fn div(self, rhs: PrecisionComplex) -> PrecisionComplex {
        &self / &rhs
    }
}

impl Neg for &PrecisionComplex {
    type Output = PrecisionComplex;
    fn neg(self) -> PrecisionComplex {
        PrecisionComplex(Complex::with_val(self.prec(), -&self.0))
    }
}

impl Neg for PrecisionComplex {
    type Output = PrecisionComplex;
    fn neg(self) -> PrecisionComplex {
        PrecisionComplex(-self.0)
    }
}

/// `n!` as a complex number.
pub fn factorial(n: usize, prec: u32) -> PrecisionComplex {
    let mut f = Float::with_val(prec, 1);
    for k in 2..=n {
        f *= k as u32;
    }
    PrecisionComplex(Complex::with_val(prec, f))
}
