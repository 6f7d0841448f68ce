//! The four Jacobi theta functions as truncated infinite products.
//!
//! With `q = e^{2πiτ}` and `e = e^{2πiv}`:
//!
//! ```text
//! θ(v,τ)  = 2q^{1/8} sin(πv) ∏ (1-q^j)(1-e q^j)(1-e^{-1}q^j)
//! θ1(v,τ) = 2q^{1/8} cos(πv) ∏ (1-q^j)(1+e q^j)(1+e^{-1}q^j)
//! θ2(v,τ) =                  ∏ (1-q^j)(1-e q^{j-1/2})(1-e^{-1}q^{j-1/2})
//! θ3(v,τ) =                  ∏ (1-q^j)(1+e q^{j-1/2})(1+e^{-1}q^{j-1/2})
//! ```
//!
//! In classical notation these are ϑ1, ϑ2, ϑ4 and ϑ3. Every formula in this
//! module, including the quasi-periodicity multipliers, is written in the
//! full nome `q_full = e^{2πiτ}`; `q_half = e^{πiτ}` is its square root.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{factorial, PrecisionComplex, PrecisionConfig};

/// Largest product order accepted before giving up on a nome too close to 1.
pub const MAX_PRODUCT_ORDER: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaKind {
    Theta,
    Theta1,
    Theta2,
    Theta3,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 4] = [
        ThetaKind::Theta,
        ThetaKind::Theta1,
        ThetaKind::Theta2,
        ThetaKind::Theta3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ThetaKind::Theta => "theta",
            ThetaKind::Theta1 => "theta1",
            ThetaKind::Theta2 => "theta2",
            ThetaKind::Theta3 => "theta3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        ThetaKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown theta kind '{s}'")))
    }

    pub fn is_odd(self) -> bool {
        self == ThetaKind::Theta
    }

    /// Factors use `q^{j-1/2}` instead of `q^j`.
    pub fn half_integer(self) -> bool {
        matches!(self, ThetaKind::Theta2 | ThetaKind::Theta3)
    }

    /// Sign in front of `e q^j` inside the product.
    pub fn product_sign(self) -> i64 {
        match self {
            ThetaKind::Theta | ThetaKind::Theta2 => -1,
            ThetaKind::Theta1 | ThetaKind::Theta3 => 1,
        }
    }
}

impl std::fmt::Display for ThetaKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A point of the upper half plane together with its nomes.
#[derive(Clone, Debug)]
pub struct Tau {
    value: PrecisionComplex,
    q_full: PrecisionComplex,
    q_half: PrecisionComplex,
    q_eighth: PrecisionComplex,
}

impl Tau {
    pub fn new(value: PrecisionComplex) -> Result<Self> {
        if value.im().is_nan() || value.im() <= 0 {
            return Err(Error::Domain(format!(
                "tau must lie in the upper half plane, got {}",
                value.to_decimal(12)
            )));
        }
        let prec = value.prec();
        let pi_i = PrecisionComplex::pi(prec).mul_i();
        let q_half = (&pi_i * &value).exp();
        let q_full = &q_half * &q_half;
        let q_eighth = (&pi_i * &value).div_i64(4).exp();
        Ok(Tau {
            value,
            q_full,
            q_half,
            q_eighth,
        })
    }

    pub fn parse(text: &str, prec: u32) -> Result<Self> {
        Tau::new(PrecisionComplex::parse(text, prec)?)
    }

    pub fn value(&self) -> &PrecisionComplex {
        &self.value
    }

    /// `e^{2πiτ}`.
    pub fn q_full(&self) -> &PrecisionComplex {
        &self.q_full
    }

    /// `e^{πiτ}`.
    pub fn q_half(&self) -> &PrecisionComplex {
        &self.q_half
    }

    /// `e^{πiτ/4}`, the `q^{1/8}` prefactor.
    pub fn q_eighth(&self) -> &PrecisionComplex {
        &self.q_eighth
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    /// `-1/τ`.
    pub fn s_image(&self) -> Tau {
        Tau::new(-self.value.recip()).expect("S preserves the upper half plane")
    }

    /// `τ + 1`.
    pub fn t_image(&self) -> Tau {
        let one = PrecisionComplex::one(self.prec());
        Tau::new(&self.value + &one).expect("T preserves the upper half plane")
    }

    pub fn with_prec(&self, prec: u32) -> Tau {
        Tau::new(self.value.with_prec(prec)).expect("valid tau")
    }
}

/// Number of product factors needed at `v = a`.
pub fn product_order(kind: ThetaKind, a: &PrecisionComplex, tau: &Tau, cfg: &PrecisionConfig) -> Result<usize> {
    if let Some(n) = cfg.product_order {
        return Ok(n.max(1));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let decay = two_pi * tau.value().im_f64();
    if !(decay > 0.0) {
        return Err(Error::Domain("tau must lie in the upper half plane".into()));
    }
    let target = (cfg.digits as f64 + 10.0) * std::f64::consts::LN_10;
    let growth = two_pi * a.im_f64().abs();
    let mut n = ((target + growth) / decay).ceil() + 1.0;
    if kind.half_integer() {
        n += 1.0;
    }
    if !n.is_finite() || n > MAX_PRODUCT_ORDER as f64 {
        return Err(Error::Precision(format!(
            "nome too close to the unit circle: would need {n} product factors"
        )));
    }
    Ok(n as usize)
}

fn mul_trunc(a: &[PrecisionComplex], b: &[PrecisionComplex], len: usize) -> Vec<PrecisionComplex> {
    let prec = a[0].prec().max(b[0].prec());
    let mut out = vec![PrecisionComplex::zero(prec); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Taylor coefficients `θ_kind^{(m)}(a,τ)/m!` for `m = 0..=order`, obtained by
/// multiplying the truncated Taylor series of every product factor.
pub fn theta_taylor(
    kind: ThetaKind,
    a: &PrecisionComplex,
    order: usize,
    tau: &Tau,
    cfg: &PrecisionConfig,
) -> Result<Vec<PrecisionComplex>> {
    let prec = cfg.bits();
    let len = order + 1;
    let a = a.with_prec(prec);
    let tau = if tau.prec() < prec { tau.with_prec(prec) } else { tau.clone() };
    let n_terms = product_order(kind, &a, &tau, cfg)?;

    let pi = PrecisionComplex::pi(prec);
    let two_pi_i = PrecisionComplex::two_pi_i(prec);
    let e0 = (&two_pi_i * &a).exp();
    let e0_inv = e0.recip();

    // exp(±2πiδ) scaled by e^{±2πia}
    let mut e_plus = Vec::with_capacity(len);
    let mut e_minus = Vec::with_capacity(len);
    let mut c = PrecisionComplex::one(prec);
    for m in 0..len {
        if m > 0 {
            c = (&c * &two_pi_i).div_i64(m as i64);
        }
        e_plus.push(&c * &e0);
        let signed = if m % 2 == 0 { c.clone() } else { -&c };
        e_minus.push(&signed * &e0_inv);
    }

    let mut acc: Vec<PrecisionComplex> = match kind {
        ThetaKind::Theta | ThetaKind::Theta1 => {
            let pa = &pi * &a;
            let (s, co) = (pa.sin(), pa.cos());
            // derivatives of sin: sin, cos, -sin, -cos; cos shifts by one
            let cycle = if kind == ThetaKind::Theta {
                [s.clone(), co.clone(), -&s, -&co]
            } else {
                [co.clone(), -&s, -&co, s.clone()]
            };
            let lead = tau.q_eighth().mul_i64(2);
            let mut scale = PrecisionComplex::one(prec);
            (0..len)
                .map(|m| {
                    if m > 0 {
                        scale = (&scale * &pi).div_i64(m as i64);
                    }
                    &(&cycle[m % 4] * &scale) * &lead
                })
                .collect()
        }
        ThetaKind::Theta2 | ThetaKind::Theta3 => {
            let mut v = vec![PrecisionComplex::zero(prec); len];
            v[0] = PrecisionComplex::one(prec);
            v
        }
    };

    let sign = kind.product_sign();
    let q = tau.q_full();
    let q_half_inv = tau.q_half().recip();
    let one = PrecisionComplex::one(prec);
    let mut qj = PrecisionComplex::one(prec);
    for _ in 1..=n_terms {
        qj = &qj * q;
        let qe = if kind.half_integer() {
            &qj * &q_half_inv
        } else {
            qj.clone()
        };
        let coeff = qe.mul_i64(sign);
        let mut p1: Vec<PrecisionComplex> = e_plus.iter().map(|x| x * &coeff).collect();
        let mut p2: Vec<PrecisionComplex> = e_minus.iter().map(|x| x * &coeff).collect();
        p1[0] += &one;
        p2[0] += &one;
        let one_minus = &one - &qj;
        let f: Vec<PrecisionComplex> = mul_trunc(&p1, &p2, len)
            .into_iter()
            .map(|x| x * &one_minus)
            .collect();
        acc = mul_trunc(&acc, &f, len);
    }
    if acc.iter().any(|c| !c.is_finite()) {
        return Err(Error::Precision("theta product overflowed".into()));
    }
    Ok(acc)
}

pub fn theta_eval(kind: ThetaKind, v: &PrecisionComplex, tau: &Tau, cfg: &PrecisionConfig) -> Result<PrecisionComplex> {
    Ok(theta_taylor(kind, v, 0, tau, cfg)?.remove(0))
}

/// `k`-th derivative in `v`.
pub fn theta_v_deriv(
    kind: ThetaKind,
    v: &PrecisionComplex,
    tau: &Tau,
    k: usize,
    cfg: &PrecisionConfig,
) -> Result<PrecisionComplex> {
    let coeffs = theta_taylor(kind, v, k, tau, cfg)?;
    Ok(&coeffs[k] * &factorial(k, cfg.bits()))
}

/// `θ'(0,τ)`.
pub fn theta_prime_zero(tau: &Tau, cfg: &PrecisionConfig) -> Result<PrecisionComplex> {
    let zero = PrecisionComplex::zero(cfg.bits());
    Ok(theta_taylor(ThetaKind::Theta, &zero, 1, tau, cfg)?.remove(1))
}

/// `θ1(0,τ)θ2(0,τ)θ3(0,τ)`.
pub fn theta123_zero(tau: &Tau, cfg: &PrecisionConfig) -> Result<PrecisionComplex> {
    let zero = PrecisionComplex::zero(cfg.bits());
    let mut p = PrecisionComplex::one(cfg.bits());
    for k in [ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3] {
        p *= theta_eval(k, &zero, tau, cfg)?;
    }
    Ok(p)
}

/// `|θ'(0,τ) - π θ1(0,τ)θ2(0,τ)θ3(0,τ)|`.
pub fn jacobi_identity_residual(tau: &Tau, cfg: &PrecisionConfig) -> Result<f64> {
    let lhs = theta_prime_zero(tau, cfg)?;
    let rhs = &PrecisionComplex::pi(cfg.bits()) * &theta123_zero(tau, cfg)?;
    Ok((&lhs - &rhs).abs_f64())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuasiShift {
    One,
    Tau,
}

/// Multiplier `c` with `θ_kind(v+shift,τ) = c·θ_kind(v,τ)`.
pub fn quasi_period_factor(kind: ThetaKind, shift: QuasiShift, v: &PrecisionComplex, tau: &Tau) -> PrecisionComplex {
    let prec = v.prec().max(tau.prec());
    match shift {
        QuasiShift::One => {
            let s = if matches!(kind, ThetaKind::Theta | ThetaKind::Theta1) { -1 } else { 1 };
            PrecisionComplex::from_i64(s, prec)
        }
        QuasiShift::Tau => {
            // q^{-1/2} e^{-2πiv} with q = e^{2πiτ}
            let base = (&tau.q_half().recip() * &(&PrecisionComplex::two_pi_i(prec) * v).exp().recip()).with_prec(prec);
            match kind {
                ThetaKind::Theta | ThetaKind::Theta2 => -base,
                ThetaKind::Theta1 | ThetaKind::Theta3 => base,
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    S,
    T,
}

#[derive(Clone, Debug)]
pub struct ModularImage {
    pub kind: ThetaKind,
    pub prefactor: PrecisionComplex,
    pub v: PrecisionComplex,
    pub tau: Tau,
}

/// The image point of `(v,τ)` under a generator: `(v/τ, -1/τ)` or `(v, τ+1)`.
pub fn act(gen: Generator, v: &PrecisionComplex, tau: &Tau) -> (PrecisionComplex, Tau) {
    match gen {
        Generator::S => (v / tau.value(), tau.s_image()),
        Generator::T => (v.clone(), tau.t_image()),
    }
}

/// Returns `(kind', c, v, τ)` with `θ_kind(act(gen, v, τ)) = c·θ_kind'(v,τ)`.
pub fn modular_image(kind: ThetaKind, gen: Generator, v: &PrecisionComplex, tau: &Tau) -> ModularImage {
    let prec = v.prec().max(tau.prec());
    let (image, prefactor) = match gen {
        Generator::S => {
            let i = PrecisionComplex::i(prec);
            let root = (tau.value() / &i).sqrt();
            let gauss = (&(&PrecisionComplex::pi(prec).mul_i() * &(v * v)) / tau.value()).exp();
            let common = &root * &gauss;
            match kind {
                ThetaKind::Theta => (ThetaKind::Theta, &common / &i),
                ThetaKind::Theta1 => (ThetaKind::Theta2, common),
                ThetaKind::Theta2 => (ThetaKind::Theta1, common),
                ThetaKind::Theta3 => (ThetaKind::Theta3, common),
            }
        }
        Generator::T => {
            let eighth_turn = (&PrecisionComplex::pi(prec).mul_i()).div_i64(4).exp();
            match kind {
                ThetaKind::Theta => (ThetaKind::Theta, eighth_turn),
                ThetaKind::Theta1 => (ThetaKind::Theta1, eighth_turn),
                ThetaKind::Theta2 => (ThetaKind::Theta3, PrecisionComplex::one(prec)),
                ThetaKind::Theta3 => (ThetaKind::Theta2, PrecisionComplex::one(prec)),
            }
        }
    };
    ModularImage {
        kind: image,
        prefactor,
        v: v.clone(),
        tau: tau.clone(),
    }
}

/// Multiplier `c` with `θ'(0, gen·τ) = c·θ'(0,τ)`.
pub fn theta_prime_zero_factor(gen: Generator, tau: &Tau) -> PrecisionComplex {
    let prec = tau.prec();
    match gen {
        Generator::S => {
            let r = (tau.value() / &PrecisionComplex::i(prec)).sqrt();
            &(&r * &r) * &r
        }
        Generator::T => (&PrecisionComplex::pi(prec).mul_i()).div_i64(4).exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::new(60).unwrap()
    }

    fn c(s: &str) -> PrecisionComplex {
        PrecisionComplex::parse(s, cfg().bits()).unwrap()
    }

    fn tau(s: &str) -> Tau {
        Tau::parse(s, cfg().bits()).unwrap()
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(matches!(Tau::parse("0.5-0.1i", 200), Err(Error::Domain(_))));
        assert!(matches!(Tau::parse("0.5", 200), Err(Error::Domain(_))));
    }

    #[test]
    fn trivial_zeros() {
        let t = tau("i");
        assert!(theta_eval(ThetaKind::Theta, &c("0"), &t, &cfg()).unwrap().abs_f64() < 1e-70);
        assert!(theta_eval(ThetaKind::Theta1, &c("0.5"), &t, &cfg()).unwrap().abs_f64() < 1e-70);
    }

    #[test]
    fn theta3_at_i_matches_gamma_closed_form() {
        // ϑ3(0|i) = π^{1/4} / Γ(3/4); ϑ2(0|i) = ϑ4(0|i) = 2^{-1/4} ϑ3(0|i)
        let prec = cfg().bits();
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        let quarter = Float::with_val(prec, 0.25);
        let gamma = Float::with_val(prec, Float::with_val(prec, 0.75).gamma_ref());
        let expected = Float::with_val(prec, rug::ops::Pow::pow(&pi, &quarter)) / gamma;
        let expected = PrecisionComplex::from_rug(rug::Complex::with_val(prec, expected));
        let t = tau("i");
        let th3 = theta_eval(ThetaKind::Theta3, &c("0"), &t, &cfg()).unwrap();
        assert!((&th3 - &expected).abs_f64() < 1e-58);
        let two_q = PrecisionComplex::from_i64(2, prec).sqrt().sqrt();
        for k in [ThetaKind::Theta1, ThetaKind::Theta2] {
            let v = theta_eval(k, &c("0"), &t, &cfg()).unwrap();
            assert!((&(&v * &two_q) - &expected).abs_f64() < 1e-58, "{k}");
        }
    }

    #[test]
    fn truncation_doubling_agrees() {
        let t = tau("0.3+0.8i");
        let n = product_order(ThetaKind::Theta2, &c("0"), &t, &cfg()).unwrap();
        let a = theta_eval(ThetaKind::Theta2, &c("0"), &t, &cfg().with_product_order(n)).unwrap();
        let b = theta_eval(ThetaKind::Theta2, &c("0"), &t, &cfg().with_product_order(2 * n)).unwrap();
        assert!((&a - &b).abs_f64() < 1e-60);
    }

    #[test]
    fn even_derivative_of_odd_theta_vanishes() {
        let t = tau("0.3+0.8i");
        for k in [0, 2, 4] {
            assert!(theta_v_deriv(ThetaKind::Theta, &c("0"), &t, k, &cfg()).unwrap().abs_f64() < 1e-70);
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let t = tau("i");
        let v = c("0.2");
        let h = c("1e-10");
        let d = theta_v_deriv(ThetaKind::Theta3, &v, &t, 1, &cfg()).unwrap();
        let plus = theta_eval(ThetaKind::Theta3, &(&v + &h), &t, &cfg()).unwrap();
        let minus = theta_eval(ThetaKind::Theta3, &(&v - &h), &t, &cfg()).unwrap();
        let fd = &(&plus - &minus) / &h.mul_i64(2);
        assert!((&d - &fd).abs_f64() < 1e-15);
    }

    #[test]
    fn jacobi_identity_at_sample_taus() {
        for s in ["i", "0.3+0.8i"] {
            assert!(jacobi_identity_residual(&tau(s), &cfg()).unwrap() < 1e-50, "{s}");
        }
    }

    #[test]
    fn jacobi_residual_shrinks_with_order() {
        let t = tau("0.3+0.8i");
        let mut last = f64::INFINITY;
        for n in [2, 4, 8, 16] {
            let r = jacobi_identity_residual(&t, &cfg().with_product_order(n)).unwrap();
            assert!(r < last, "order {n}: {r} !< {last}");
            last = r;
        }
    }

    #[test]
    fn quasi_period_table_examples() {
        let t = tau("i");
        assert_eq!(quasi_period_factor(ThetaKind::Theta, QuasiShift::One, &c("0.1"), &t).re_f64(), -1.0);
        assert_eq!(quasi_period_factor(ThetaKind::Theta2, QuasiShift::One, &c("0.1"), &t).re_f64(), 1.0);
        let v = c("0.1");
        let shifted = theta_eval(ThetaKind::Theta1, &(&v + t.value()), &t, &cfg()).unwrap();
        let base = theta_eval(ThetaKind::Theta1, &v, &t, &cfg()).unwrap();
        let f = quasi_period_factor(ThetaKind::Theta1, QuasiShift::Tau, &v, &t);
        assert!((&(&shifted / &base) - &f).abs_f64() < 1e-50);
    }

    #[test]
    fn half_nome_reading_of_quasi_periods_fails() {
        // with q = e^{πiτ} the τ-shift multiplier would be e^{-πiτ/2}e^{-2πiv}
        let t = tau("i");
        let v = c("0.1");
        let prec = cfg().bits();
        let shifted = theta_eval(ThetaKind::Theta, &(&v + t.value()), &t, &cfg()).unwrap();
        let base = theta_eval(ThetaKind::Theta, &v, &t, &cfg()).unwrap();
        let quarter = (&PrecisionComplex::pi(prec).mul_i() * t.value()).div_i64(2).exp().recip();
        let wrong = -(&quarter * &(&PrecisionComplex::two_pi_i(prec) * &v).exp().recip());
        assert!((&(&shifted / &base) - &wrong).abs_f64() > 1e-3);
    }

    #[test]
    fn t_law_for_theta() {
        let t = tau("i");
        let v = c("0.2");
        let img = modular_image(ThetaKind::Theta, Generator::T, &v, &t);
        assert_eq!(img.kind, ThetaKind::Theta);
        let lhs = theta_eval(ThetaKind::Theta, &v, &t.t_image(), &cfg()).unwrap();
        let rhs = &img.prefactor * &theta_eval(img.kind, &v, &t, &cfg()).unwrap();
        assert!((&lhs - &rhs).abs_f64() < 1e-50);
    }

    #[test]
    fn theta2_t_image_is_theta3() {
        let img = modular_image(ThetaKind::Theta2, Generator::T, &c("0.1"), &tau("i"));
        assert_eq!(img.kind, ThetaKind::Theta3);
        assert!((&img.prefactor - &c("1")).abs_f64() == 0.0);
    }

    #[test]
    fn even_s_law_carries_no_extra_i() {
        // θ3(0,-1/τ) at τ=i is real positive, so a 1/i in front cannot hold
        let t = tau("i");
        let v = c("0");
        let img = modular_image(ThetaKind::Theta1, Generator::S, &v, &t);
        let lhs = theta_eval(ThetaKind::Theta1, &v, &t.s_image(), &cfg()).unwrap();
        let rhs = &img.prefactor * &theta_eval(img.kind, &v, &t, &cfg()).unwrap();
        assert!((&lhs - &rhs).abs_f64() < 1e-50);
        let with_i = &rhs / &PrecisionComplex::i(cfg().bits());
        assert!((&lhs - &with_i).abs_f64() > 0.1);
    }

    #[test]
    fn s_twice_is_parity() {
        // θ_k'(-v,τ) = θ_k'(S(v/τ,-1/τ)) = c2·θ_k(v/τ,-1/τ) = c2·c1·θ_k'(v,τ)
        let t = tau("0.2+1.1i");
        let v = c("0.13-0.05i");
        for kind in ThetaKind::ALL {
            let first = modular_image(kind, Generator::S, &v, &t);
            let (v1, t1) = act(Generator::S, &v, &t);
            let second = modular_image(first.kind, Generator::S, &v1, &t1);
            assert_eq!(second.kind, kind);
            let product = &first.prefactor * &second.prefactor;
            let lhs = theta_eval(first.kind, &(-&v), &t, &cfg()).unwrap();
            let rhs = &product * &theta_eval(first.kind, &v, &t, &cfg()).unwrap();
            assert!((&lhs - &rhs).abs_f64() < 1e-50, "{kind}");
            let parity = if first.kind.is_odd() { -1.0 } else { 1.0 };
            assert!((product.re_f64() - parity).abs() < 1e-50 && product.im_f64().abs() < 1e-50);
        }
    }

    #[test]
    fn theta_prime_s_law() {
        let t = tau("0.3+0.8i");
        let lhs = theta_prime_zero(&t.s_image(), &cfg()).unwrap();
        let rhs = &theta_prime_zero_factor(Generator::S, &t) * &theta_prime_zero(&t, &cfg()).unwrap();
        assert!((&lhs - &rhs).abs_f64() < 1e-50);
    }
}
