//! The odd Chern-character factor `ch(Q_j(E))` of a map into the unitary
//! group, modeled by trace components `w_i f((ū²-ū)a_i)`.
//!
//! Three evaluations: Gauss–Legendre quadrature of theta log-derivatives at
//! a point `τ`, the same quadrature on formal theta series, and an oracle
//! that expands the log-derivatives directly in `q` and integrates the
//! moments of `ū²-ū` exactly.

use crate::algebra::{Algebra, Ring};
use crate::error::{Error, Result};
use crate::jet::{FormVariable, Jet};
use crate::precision::{factorial, PrecisionComplex, PrecisionConfig};
use crate::qseries::{QExponent, QSeries};
use crate::quadrature::gauss_legendre;
use crate::theta::{theta_taylor, Tau, ThetaKind};

use super::backend::formal_theta;
use super::{Lambda, OddEData};

/// `-2^{N/2}/(8π²)` when the bundle carries the spinor factor, else `-1/(8π²)`.
pub fn odd_factor_prefactor(lambda: Lambda, n: u32, prec: u32) -> PrecisionComplex {
    let pi = PrecisionComplex::pi(prec);
    let base = -(&(&pi * &pi).mul_i64(8)).recip();
    if lambda.has_spinor() {
        &base * &PrecisionComplex::from_i64(2, prec).powi((n / 2) as i32)
    } else {
        base
    }
}

impl OddEData {
    /// Common degree cap of the trace jets.
    pub fn cap(&self) -> u32 {
        self.trace_components
            .iter()
            .flat_map(|tc| [tc.w.cap(), tc.a.cap()])
            .max()
            .unwrap_or(0)
    }
}

/// Power series of `f'/f` from the Taylor coefficients of `f`.
fn log_derivative(c: &[PrecisionComplex]) -> Vec<PrecisionComplex> {
    let len = c.len() - 1;
    let d: Vec<PrecisionComplex> = (0..len).map(|k| c[k + 1].mul_i64(k as i64 + 1)).collect();
    let inv = c[0].recip();
    let mut f: Vec<PrecisionComplex> = Vec::with_capacity(len);
    for k in 0..len {
        let mut s = d[k].clone();
        for i in 1..=k {
            s -= &c[i] * &f[k - i];
        }
        f.push(&s * &inv);
    }
    f
}

/// Factor at `τ` with a doubling check on the number of quadrature points.
pub fn odd_chern_factor(
    lambda: Lambda,
    e: &OddEData,
    tau: &Tau,
    points: usize,
    cfg: &PrecisionConfig,
) -> Result<Jet> {
    let coarse = odd_factor_quadrature(lambda, e, tau, points, cfg)?;
    let fine = odd_factor_quadrature(lambda, e, tau, 2 * points, cfg)?;
    let change = coarse.distance(&fine);
    if change > cfg.tolerance(10) {
        return Err(Error::Quadrature(change));
    }
    Ok(coarse)
}

/// Factor at `τ` with a fixed number of Gauss–Legendre points.
pub fn odd_factor_quadrature(
    lambda: Lambda,
    e: &OddEData,
    tau: &Tau,
    points: usize,
    cfg: &PrecisionConfig,
) -> Result<Jet> {
    let prec = cfg.bits();
    let cap = e.cap();
    let order = (cap / 2) as usize + 1;
    let zero = PrecisionComplex::zero(prec);
    let mut f = vec![PrecisionComplex::zero(prec); order + 1];
    for &kind in lambda.kinds() {
        let c = theta_taylor(kind, &zero, order + 1, tau, cfg)?;
        for (acc, x) in f.iter_mut().zip(log_derivative(&c)) {
            *acc += &x;
        }
    }
    let rule = gauss_legendre(points, prec);
    let mut total = Jet::zero(cap, prec);
    for tc in &e.trace_components {
        let mut inner = Jet::zero(cap, prec);
        for (u, w) in &rule {
            let arg = tc.a.scale(&(&(u * u) - u));
            inner = inner.add(&Jet::compose_taylor(&f, &arg)?.scale(w));
        }
        total = total.add(&tc.w.try_mul(&inner)?);
    }
    Ok(total.scale(&odd_factor_prefactor(lambda, e.n, prec)))
}

/// Keeps the terms of `j` free of the variable `name`.
fn at_zero(j: &Jet, name: &str, cap: u32) -> Jet {
    Jet::from_terms(
        j.terms().filter(|(m, _)| m.exponent(name) == 0).map(|(m, c)| (m.clone(), c.clone())),
        cap,
        j.prec(),
    )
}

/// The factor as a q-series, from formal theta series at `A + ∂`.
///
/// The integrand is a polynomial in `ū` of degree at most the cap, so a rule
/// with `cap/2 + 1` points is exact.
pub fn odd_chern_factor_formal(
    lambda: Lambda,
    e: &OddEData,
    truncation: QExponent,
    cfg: &PrecisionConfig,
) -> Result<QSeries<Jet>> {
    let prec = cfg.bits();
    let cap = e.cap();
    let proto = Jet::zero(cap, prec);
    let aux = FormVariable::new("_d", 2);
    let d = Jet::variable(aux.clone(), cap + 2, prec);
    let rule = gauss_legendre((cap / 2) as usize + 1, prec);
    let mut total = QSeries::zero(&proto, truncation);
    for tc in &e.trace_components {
        let mut inner = QSeries::zero(&proto, truncation);
        for (u, w) in &rule {
            let arg = tc.a.with_cap(cap + 2).scale(&(&(u * u) - u));
            let shifted = arg.add(&d);
            for &kind in lambda.kinds() {
                let th = formal_theta(kind, &shifted, truncation)?;
                let deriv = th.map(&proto, |c| c.linear_coefficient(&aux).with_cap(cap));
                let value = th.map(&proto, |c| at_zero(c, &aux.name, cap));
                let ratio = deriv.mul(&value.invert()?);
                inner = inner.add(&ratio.scale(w));
            }
        }
        total = total.add(&inner.try_map(&proto, |c| tc.w.try_mul(c))?);
    }
    Ok(total.scale(&odd_factor_prefactor(lambda, e.n, prec)))
}

/// Taylor coefficients of `tan x`.
fn tan_coefficients(order: usize, prec: u32) -> Vec<PrecisionComplex> {
    let sign = |k: usize| if (k / 2) % 2 == 0 { 1 } else { -1 };
    let sin: Vec<PrecisionComplex> = (0..=order)
        .map(|k| {
            if k % 2 == 1 {
                &PrecisionComplex::from_i64(sign(k - 1), prec) / &factorial(k, prec)
            } else {
                PrecisionComplex::zero(prec)
            }
        })
        .collect();
    let cos: Vec<PrecisionComplex> = (0..=order)
        .map(|k| {
            if k % 2 == 0 {
                &PrecisionComplex::from_i64(sign(k), prec) / &factorial(k, prec)
            } else {
                PrecisionComplex::zero(prec)
            }
        })
        .collect();
    let mut t: Vec<PrecisionComplex> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut s = sin[k].clone();
        for i in 1..=k {
            s -= &cos[i] * &t[k - i];
        }
        t.push(s);
    }
    t
}

/// `∫_0^1 (ū²-ū)^p dū = (-1)^p p!² / (2p+1)!`.
fn beta_moment(p: usize, prec: u32) -> PrecisionComplex {
    let f = factorial(p, prec);
    let m = &(&f * &f) / &factorial(2 * p + 1, prec);
    if p % 2 == 1 {
        -m
    } else {
        m
    }
}

/// Coefficients `F_p` (q-series) of `Σ_p F_p v^p` for the log-derivative of
/// one theta function, from its product expansion.
fn log_derivative_series(kind: ThetaKind, order: usize, truncation: QExponent, prec: u32) -> Vec<QSeries<PrecisionComplex>> {
    let zero = PrecisionComplex::zero(prec);
    let mut out = vec![QSeries::zero(&zero, truncation); order + 1];
    let pi = PrecisionComplex::pi(prec);
    let two_pi_i = PrecisionComplex::two_pi_i(prec);
    if kind == ThetaKind::Theta1 {
        // -π tan(πv)
        for (p, c) in tan_coefficients(order, prec).into_iter().enumerate() {
            let term = -(&c * &pi.powi(p as i32 + 1));
            out[p].add_term(QExponent(0), term);
        }
    }
    // Σ_n Σ_k coeff(k) (e^k - e^{-k}) q^{k·step(n)}, e = e^{2πiv}
    let step = |n: u32| if kind.half_integer() { 8 * n - 4 } else { 8 * n };
    let trunc = truncation.eighths();
    let mut n = 1;
    while step(n) <= trunc {
        let mut k = 1u32;
        while k * step(n) <= trunc {
            let sign = match kind {
                ThetaKind::Theta2 => -1,
                _ => {
                    if k % 2 == 1 {
                        1
                    } else {
                        -1
                    }
                }
            };
            let x = two_pi_i.mul_i64(k as i64);
            // e^k - e^{-k} = 2 Σ_{p odd} (2πik v)^p / p!
            for p in (1..=order).step_by(2) {
                let c = (&x.powi(p as i32) / &factorial(p, prec)).mul_i64(2 * sign);
                out[p].add_term(QExponent(k * step(n)), &two_pi_i * &c);
            }
            k += 1;
        }
        n += 1;
    }
    out
}

/// The factor from q-expansions of the log-derivatives with exact moments.
pub fn odd_chern_factor_oracle(lambda: Lambda, e: &OddEData, truncation: QExponent, prec: u32) -> Result<QSeries<Jet>> {
    let cap = e.cap();
    let order = (cap / 2) as usize + 1;
    let zero = PrecisionComplex::zero(prec);
    let mut f = vec![QSeries::zero(&zero, truncation); order + 1];
    for &kind in lambda.kinds() {
        for (acc, s) in f.iter_mut().zip(log_derivative_series(kind, order, truncation, prec)) {
            *acc = acc.add(&s);
        }
    }
    let proto = Jet::zero(cap, prec);
    let mut total = QSeries::zero(&proto, truncation);
    for tc in &e.trace_components {
        let mut power = Jet::one(cap, prec);
        for (p, fp) in f.iter().enumerate() {
            if p > 0 {
                power = power.mul(&tc.a);
            }
            if power.is_zero() {
                break;
            }
            let term = tc.w.try_mul(&power)?.scale(&beta_moment(p, prec));
            total = total.add(&fp.map(&proto, |c| term.scale(c)));
        }
    }
    Ok(total.scale(&odd_factor_prefactor(lambda, e.n, prec)))
}
