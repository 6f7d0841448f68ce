//! Truncated series in the nome with exponents on the grid `(1/8)·Z≥0`.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Algebra, Ring};
use crate::error::{Error, Result};
use crate::precision::PrecisionComplex;
use crate::theta::Tau;

/// Safety net for schedules that never leave the truncation window.
const MAX_FACTORS: usize = 1_000_000;

/// Exponent of `q` in units of 1/8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QExponent(pub u32);

impl QExponent {
    pub fn eighths(self) -> u32 {
        self.0
    }

    pub fn integer(n: u32) -> Self {
        QExponent(8 * n)
    }

    /// `n - 1/2` for `n ≥ 1`.
    pub fn half(n: u32) -> Self {
        assert!(n >= 1, "n - 1/2 needs n >= 1");
        QExponent(8 * n - 4)
    }
}

impl fmt::Display for QExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = gcd(self.0, 8);
        let (num, den) = (self.0 / g, 8 / g);
        if den == 1 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, PartialEq)]
pub struct QSeries<C> {
    truncation: u32,
    coeffs: BTreeMap<u32, C>,
    /// Zero of the coefficient ring, used to build constants.
    proto: C,
}

impl<C: Ring> QSeries<C> {
    pub fn zero(proto: &C, truncation: QExponent) -> Self {
        QSeries {
            truncation: truncation.0,
            coeffs: BTreeMap::new(),
            proto: proto.zero_like(),
        }
    }

    pub fn constant(c: C, truncation: QExponent) -> Self {
        QSeries::monomial(QExponent(0), c, truncation)
    }

    pub fn one(proto: &C, truncation: QExponent) -> Self {
        QSeries::constant(proto.one_like(), truncation)
    }

    pub fn monomial(e: QExponent, c: C, truncation: QExponent) -> Self {
        let mut s = QSeries::zero(&c, truncation);
        s.add_term(e, c);
        s
    }

    /// `1 + c·q^e`.
    pub fn binomial(e: QExponent, c: C, truncation: QExponent) -> Self {
        let mut s = QSeries::one(&c, truncation);
        s.add_term(e, c);
        s
    }

    pub fn add_term(&mut self, e: QExponent, c: C) {
        if e.0 > self.truncation || c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&e.0) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.coeffs.remove(&e.0);
                }
            }
            None => {
                self.coeffs.insert(e.0, c);
            }
        }
    }

    pub fn truncation(&self) -> QExponent {
        QExponent(self.truncation)
    }

    pub fn proto(&self) -> &C {
        &self.proto
    }

    pub fn coefficient(&self, e: QExponent) -> Option<&C> {
        self.coeffs.get(&e.0)
    }

    pub fn coefficient_or_zero(&self, e: QExponent) -> C {
        self.coeffs.get(&e.0).cloned().unwrap_or_else(|| self.proto.clone())
    }

    pub fn terms(&self) -> impl Iterator<Item = (QExponent, &C)> {
        self.coeffs.iter().map(|(e, c)| (QExponent(*e), c))
    }

    pub fn map<D: Ring>(&self, proto: &D, f: impl Fn(&C) -> D) -> QSeries<D> {
        let mut out = QSeries::zero(proto, self.truncation());
        for (e, c) in &self.coeffs {
            out.add_term(QExponent(*e), f(c));
        }
        out
    }

    pub fn try_map<D: Ring>(&self, proto: &D, f: impl Fn(&C) -> Result<D>) -> Result<QSeries<D>> {
        let mut out = QSeries::zero(proto, self.truncation());
        for (e, c) in &self.coeffs {
            out.add_term(QExponent(*e), f(c)?);
        }
        Ok(out)
    }

    pub fn with_truncation(&self, truncation: QExponent) -> Self {
        let mut out = QSeries::zero(&self.proto, truncation);
        for (e, c) in &self.coeffs {
            out.add_term(QExponent(*e), c.clone());
        }
        out
    }

    /// Product where coefficient products may fail.
    pub fn try_mul(&self, rhs: &Self, mul: impl Fn(&C, &C) -> Result<C>) -> Result<Self> {
        let trunc = self.truncation.min(rhs.truncation);
        let mut out = QSeries::zero(&self.proto, QExponent(trunc));
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                if ea + eb > trunc {
                    break;
                }
                out.add_term(QExponent(ea + eb), mul(ca, cb)?);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse modulo the truncation.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.coefficient(QExponent(0)).ok_or(Error::Inversion)?;
        let b0 = c0.try_inverse().ok_or(Error::Inversion)?;
        let mut out = QSeries::zero(&self.proto, self.truncation());
        out.coeffs.insert(0, b0.clone());
        for e in 1..=self.truncation {
            let mut s: Option<C> = None;
            for (ea, ca) in self.coeffs.range(1..=e) {
                if let Some(b) = out.coeffs.get(&(e - ea)) {
                    let term = ca.mul(b);
                    s = Some(match s {
                        Some(acc) => acc.add(&term),
                        None => term,
                    });
                }
            }
            if let Some(s) = s {
                let be = b0.mul(&s).neg();
                if !be.is_zero() {
                    out.coeffs.insert(e, be);
                }
            }
        }
        Ok(out)
    }
}

/// `qs_invert`.
pub fn qs_invert<C: Ring>(series: &QSeries<C>) -> Result<QSeries<C>> {
    series.invert()
}

/// `∏_{j≥1} factor_at(j)` modulo the truncation. Factors whose deviation
/// from 1 starts above the truncation are never built.
pub fn product_expand<C: Ring>(
    mut factor_at: impl FnMut(usize) -> Result<QSeries<C>>,
    min_exponent_of: impl Fn(usize) -> QExponent,
    one: &C,
    truncation: QExponent,
) -> Result<QSeries<C>> {
    let mut acc = QSeries::one(one, truncation);
    let mut previous = QExponent(0);
    for j in 1..=MAX_FACTORS {
        let e = min_exponent_of(j);
        if e < previous {
            return Err(Error::Divergence(format!(
                "factor {j} starts at q^{e}, below factor {}'s q^{previous}",
                j - 1
            )));
        }
        if e.0 == 0 {
            return Err(Error::Divergence(format!("factor {j} deviates from 1 at q^0")));
        }
        if e > truncation {
            return Ok(acc);
        }
        previous = e;
        acc = acc.mul(&factor_at(j)?.with_truncation(truncation));
    }
    Err(Error::Divergence("factor schedule never leaves the truncation window".into()))
}

impl<C: Ring> Ring for QSeries<C> {
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.with_truncation(QExponent(self.truncation.min(rhs.truncation)));
        for (e, c) in &rhs.coeffs {
            out.add_term(QExponent(*e), c.clone());
        }
        out
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs, |a, b| Ok(a.mul(b))).expect("infallible")
    }

    fn neg(&self) -> Self {
        self.map(&self.proto, |c| c.neg())
    }

    fn zero_like(&self) -> Self {
        QSeries::zero(&self.proto, self.truncation())
    }

    fn one_like(&self) -> Self {
        QSeries::one(&self.proto, self.truncation())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn try_inverse(&self) -> Option<Self> {
        self.invert().ok()
    }
}

impl<C: Algebra> Algebra for QSeries<C> {
    fn scale(&self, c: &PrecisionComplex) -> Self {
        self.map(&self.proto, |x| x.scale(c))
    }
}

impl<C: Algebra> QSeries<C> {
    /// Sums the series at `q = e^{2πiτ}`.
    pub fn evaluate(&self, tau: &Tau) -> C {
        let q8 = tau.q_eighth();
        let mut acc = self.proto.clone();
        for (e, c) in &self.coeffs {
            acc = acc.add(&c.scale(&q8.powi(*e as i32)));
        }
        acc
    }
}

impl QSeries<PrecisionComplex> {
    /// Largest coefficient difference, with absent coefficients read as zero.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).terms().map(|(_, c)| c.abs_f64()).fold(0.0, f64::max)
    }

    /// Largest difference relative to `max(1, |other coefficient|)`.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let trunc = self.truncation.min(other.truncation);
        (0..=trunc)
            .map(|e| {
                let a = self.coefficient_or_zero(QExponent(e));
                let b = other.coefficient_or_zero(QExponent(e));
                (&a - &b).abs_f64() / b.abs_f64().max(1.0)
            })
            .fold(0.0, f64::max)
    }

    /// Coefficients with magnitude below `eps` dropped.
    pub fn chop(&self, eps: f64) -> Self {
        let mut out = QSeries::zero(&self.proto, self.truncation());
        for (e, c) in &self.coeffs {
            if c.abs_f64() >= eps {
                out.add_term(QExponent(*e), c.clone());
            }
        }
        out
    }
}

impl<C: fmt::Display> QSeries<C> {
    /// `c₀ + c₁·q^{1/8} + …` with `digits` significant digits.
    pub fn render(&self, digits: usize) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(e, c)| {
                let coeff = format!("({c:.digits$})");
                match *e {
                    0 => coeff,
                    8 => format!("{coeff}·q"),
                    e if e % 8 == 0 => format!("{coeff}·q^{}", e / 8),
                    e => format!("{coeff}·q^{{{}}}", QExponent(e)),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<C: fmt::Display> fmt::Display for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(f.precision().unwrap_or(20)))
    }
}

impl<C: fmt::Display> fmt::Debug for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(q^{})", self.render(12), QExponent(self.truncation + 1))
    }
}
