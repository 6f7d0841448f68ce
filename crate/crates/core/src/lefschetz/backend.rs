use std::cell::RefCell;
use std::collections::HashMap;

use crate::algebra::{Algebra, Ring};
use crate::bundles::RootForm;
use crate::error::{Error, Result};
use crate::jet::{integrate as integrate_jet, IntegrationFunctional, Jet};
use crate::precision::{factorial, PrecisionComplex, PrecisionConfig};
use crate::qseries::{product_expand, QExponent, QSeries};
use crate::theta::{theta_taylor, Tau, ThetaKind};

use super::odd::{odd_chern_factor, odd_chern_factor_formal};
use super::{CaseSelector, FixedComponent, OddEData, DEFAULT_QUADRATURE_POINTS};

/// Arithmetic of the integrand, at a point or as a q-series.
pub(crate) trait ThetaBackend {
    type Value: Clone;
    type Output;

    fn cap(&self) -> u32;
    fn prec(&self) -> u32;
    fn one(&self) -> Self::Value;
    fn scale(&self, v: &Self::Value, c: &PrecisionComplex) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    /// `θ_kind(root + rot·t)`.
    fn theta(&self, kind: ThetaKind, root: &Jet, rot: i64) -> Result<Self::Value>;
    /// `θ'(0)` for the odd theta, `θ_kind(0)` otherwise.
    fn theta_zero(&self, kind: ThetaKind) -> Result<Self::Value>;
    /// `y θ'(0)/θ(y)`.
    fn tangent(&self, y: &Jet) -> Result<Self::Value>;
    fn invert(&self, v: &Self::Value, kind: ThetaKind, argument: String) -> Result<Self::Value>;
    fn odd_factor(&self, lambda: super::Lambda, e: &OddEData) -> Result<Self::Value>;
    fn integrate(&self, v: &Self::Value, f: &IntegrationFunctional) -> Result<Self::Output>;
}

fn describe(root: &RootForm, rot: i64) -> String {
    match (root.is_zero(), rot) {
        (true, r) => format!("{r}t"),
        (false, 0) => root.to_string(),
        (false, r) => format!("{root} + {r}t"),
    }
}

/// The theta-quotient integrand of one component, before integration and
/// without the overall constant.
pub(crate) fn integrand<B: ThetaBackend>(
    b: &B,
    case: &CaseSelector,
    comp: &FixedComponent,
    e: Option<&OddEData>,
) -> Result<B::Value> {
    let (cap, prec) = (b.cap(), b.prec());
    let jet = |r: &RootForm| r.to_jet(&PrecisionComplex::one(prec), cap, prec);
    let mut acc = b.one();

    for y in &comp.tangent_roots {
        acc = b.mul(&acc, &b.tangent(&jet(y))?)?;
    }

    if !comp.normal.is_empty() {
        let tp0 = b.theta_zero(ThetaKind::Theta)?;
        for ns in &comp.normal {
            for x in &ns.roots {
                let den = b.theta(ThetaKind::Theta, &jet(x), ns.m)?;
                let inv = b.invert(&den, ThetaKind::Theta, describe(x, ns.m))?;
                acc = b.mul(&acc, &b.mul(&tp0, &inv)?)?;
            }
        }
    }

    let even = [ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3];
    let mut z123 = b.one();
    for k in even {
        z123 = b.mul(&z123, &b.theta_zero(k)?)?;
    }
    let u = jet(&comp.u);
    let num = if case.dimension_class.is_star() {
        b.scale(&b.theta(ThetaKind::Theta, &u, comp.sigma)?, &PrecisionComplex::i(prec))
    } else {
        let mut p = b.one();
        for k in even {
            p = b.mul(&p, &b.theta(k, &u, comp.sigma)?)?;
        }
        p
    };
    let z123_inv = b.invert(&z123, ThetaKind::Theta1, "0".into())?;
    acc = b.mul(&acc, &b.mul(&num, &z123_inv)?)?;

    for &kind in case.lambda.kinds() {
        if comp.v_parts.iter().all(|v| v.roots.is_empty()) {
            break;
        }
        let z0_inv = b.invert(&b.theta_zero(kind)?, kind, "0".into())?;
        for vs in &comp.v_parts {
            for z in &vs.roots {
                let th = b.theta(kind, &jet(z), vs.n)?;
                acc = b.mul(&acc, &b.mul(&th, &z0_inv)?)?;
            }
        }
    }

    if case.dimension_class.is_odd() {
        let e = e.ok_or_else(|| Error::Case("odd dimension classes need E data".into()))?;
        acc = b.mul(&acc, &b.odd_factor(case.lambda, &e.with_cap(cap))?)?;
    }
    Ok(acc)
}

pub(crate) struct NumericBackend<'a> {
    t: PrecisionComplex,
    tau: Tau,
    cap: u32,
    cfg: &'a PrecisionConfig,
    theta_prime: PrecisionComplex,
    pole_threshold: f64,
    taylor: RefCell<HashMap<(ThetaKind, i64), Vec<PrecisionComplex>>>,
}

impl<'a> NumericBackend<'a> {
    pub(crate) fn new(t: &PrecisionComplex, tau: &Tau, cap: u32, cfg: &'a PrecisionConfig) -> Result<Self> {
        let prec = cfg.bits();
        let tau = tau.with_prec(prec);
        let zero = PrecisionComplex::zero(prec);
        let theta_prime = theta_taylor(ThetaKind::Theta, &zero, 1, &tau, cfg)?.remove(1);
        let pole_threshold = 10f64.powi(-(cfg.digits as i32 - 10)) * theta_prime.abs_f64().max(1.0);
        Ok(NumericBackend {
            t: t.with_prec(prec),
            tau,
            cap,
            cfg,
            theta_prime,
            pole_threshold,
            taylor: RefCell::new(HashMap::new()),
        })
    }

    fn coeffs(&self, kind: ThetaKind, rot: i64) -> Result<Vec<PrecisionComplex>> {
        if let Some(c) = self.taylor.borrow().get(&(kind, rot)) {
            return Ok(c.clone());
        }
        let a = self.t.mul_i64(rot);
        let c = theta_taylor(kind, &a, (self.cap / 2) as usize, &self.tau, self.cfg)?;
        self.taylor.borrow_mut().insert((kind, rot), c.clone());
        Ok(c)
    }
}

impl ThetaBackend for NumericBackend<'_> {
    type Value = Jet;
    type Output = PrecisionComplex;

    fn cap(&self) -> u32 {
        self.cap
    }

    fn prec(&self) -> u32 {
        self.cfg.bits()
    }

    fn one(&self) -> Jet {
        Jet::one(self.cap, self.prec())
    }

    fn scale(&self, v: &Jet, c: &PrecisionComplex) -> Jet {
        v.scale(c)
    }

    fn mul(&self, a: &Jet, b: &Jet) -> Result<Jet> {
        a.try_mul(b)
    }

    fn theta(&self, kind: ThetaKind, root: &Jet, rot: i64) -> Result<Jet> {
        Jet::compose_taylor(&self.coeffs(kind, rot)?, root)
    }

    fn theta_zero(&self, kind: ThetaKind) -> Result<Jet> {
        let c = match kind {
            ThetaKind::Theta => self.theta_prime.clone(),
            k => self.coeffs(k, 0)?.remove(0),
        };
        Ok(Jet::constant(c, self.cap))
    }

    fn tangent(&self, y: &Jet) -> Result<Jet> {
        let zero = PrecisionComplex::zero(self.prec());
        let c = theta_taylor(ThetaKind::Theta, &zero, (self.cap / 2) as usize + 1, &self.tau, self.cfg)?;
        // θ(y)/y
        let quotient = Jet::compose_taylor(&c[1..], y)?;
        let inv = quotient.inverse().ok_or(Error::Inversion)?;
        Ok(inv.scale(&self.theta_prime))
    }

    fn invert(&self, v: &Jet, kind: ThetaKind, argument: String) -> Result<Jet> {
        let c0 = v.constant_term();
        if c0.abs_f64() < self.pole_threshold {
            return Err(Error::Pole {
                kind: kind.name().into(),
                argument: format!("{argument} at t = {}", self.t.to_decimal(12)),
                component: None,
            });
        }
        v.inverse().ok_or(Error::Inversion)
    }

    fn odd_factor(&self, lambda: super::Lambda, e: &OddEData) -> Result<Jet> {
        Ok(odd_chern_factor(lambda, e, &self.tau, DEFAULT_QUADRATURE_POINTS, self.cfg)?.with_cap(self.cap))
    }

    fn integrate(&self, v: &Jet, f: &IntegrationFunctional) -> Result<PrecisionComplex> {
        integrate_jet(v, f)
    }
}

/// `∏_j (1-q^j)(1 + s·e q^{j'})(1 + s·e^{-1} q^{j'})` with `e = e^{2πiv}`,
/// where `j' = j` or `j - 1/2` and `s` is the product sign of `kind`.
pub(crate) fn formal_product(kind: ThetaKind, v: &Jet, truncation: QExponent) -> Result<QSeries<Jet>> {
    let (cap, prec) = (v.cap(), v.prec());
    let phase = v.scale(&PrecisionComplex::two_pi_i(prec));
    let e = phase.exp().scale(&PrecisionComplex::from_i64(kind.product_sign(), prec));
    let e_inv = phase.neg().exp().scale(&PrecisionComplex::from_i64(kind.product_sign(), prec));
    let minus_one = Jet::constant(PrecisionComplex::from_i64(-1, prec), cap);
    let shift = |j: usize| {
        if kind.half_integer() {
            QExponent::half(j as u32)
        } else {
            QExponent::integer(j as u32)
        }
    };
    product_expand(
        |j| {
            let base = QSeries::binomial(QExponent::integer(j as u32), minus_one.clone(), truncation);
            let a = QSeries::binomial(shift(j), e.clone(), truncation);
            let b = QSeries::binomial(shift(j), e_inv.clone(), truncation);
            Ok(base.mul(&a).mul(&b))
        },
        shift,
        &Jet::zero(cap, prec),
        truncation,
    )
}

/// Theta function at a jet argument with the `q^{1/8}` prefactor dropped.
pub(crate) fn formal_theta(kind: ThetaKind, v: &Jet, truncation: QExponent) -> Result<QSeries<Jet>> {
    let prec = v.prec();
    let product = formal_product(kind, v, truncation)?;
    let arg = v.scale(&PrecisionComplex::pi(prec));
    let two = PrecisionComplex::from_i64(2, prec);
    let lead = match kind {
        ThetaKind::Theta => arg.sin().scale(&two),
        ThetaKind::Theta1 => arg.cos().scale(&two),
        ThetaKind::Theta2 | ThetaKind::Theta3 => return Ok(product),
    };
    Ok(product.map(&Jet::zero(v.cap(), prec), |c| c.mul(&lead)))
}

/// Taylor coefficients of `sin(πy)/(πy)` in `y`.
pub(crate) fn sinc_coefficients(order: usize, prec: u32) -> Vec<PrecisionComplex> {
    let pi = PrecisionComplex::pi(prec);
    (0..=order)
        .map(|p| {
            if p % 2 == 1 {
                return PrecisionComplex::zero(prec);
            }
            let c = &pi.powi(p as i32) / &factorial(p + 1, prec);
            if (p / 2) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

pub(crate) struct FormalBackend<'a> {
    t: PrecisionComplex,
    cap: u32,
    truncation: QExponent,
    cfg: &'a PrecisionConfig,
}

impl<'a> FormalBackend<'a> {
    pub(crate) fn new(t: &PrecisionComplex, cap: u32, truncation: QExponent, cfg: &'a PrecisionConfig) -> Self {
        FormalBackend {
            t: t.with_prec(cfg.bits()),
            cap,
            truncation,
            cfg,
        }
    }

    fn lift(&self, j: Jet) -> QSeries<Jet> {
        QSeries::constant(j, self.truncation)
    }

    fn argument(&self, root: &Jet, rot: i64) -> Jet {
        root.add(&Jet::constant(self.t.mul_i64(rot), self.cap))
    }
}

impl ThetaBackend for FormalBackend<'_> {
    type Value = QSeries<Jet>;
    type Output = QSeries<PrecisionComplex>;

    fn cap(&self) -> u32 {
        self.cap
    }

    fn prec(&self) -> u32 {
        self.cfg.bits()
    }

    fn one(&self) -> QSeries<Jet> {
        self.lift(Jet::one(self.cap, self.prec()))
    }

    fn scale(&self, v: &QSeries<Jet>, c: &PrecisionComplex) -> QSeries<Jet> {
        v.scale(c)
    }

    fn mul(&self, a: &QSeries<Jet>, b: &QSeries<Jet>) -> Result<QSeries<Jet>> {
        a.try_mul(b, Jet::try_mul)
    }

    fn theta(&self, kind: ThetaKind, root: &Jet, rot: i64) -> Result<QSeries<Jet>> {
        formal_theta(kind, &self.argument(root, rot), self.truncation)
    }

    fn theta_zero(&self, kind: ThetaKind) -> Result<QSeries<Jet>> {
        let zero = Jet::zero(self.cap, self.prec());
        match kind {
            ThetaKind::Theta => {
                let p = formal_product(ThetaKind::Theta, &zero, self.truncation)?;
                Ok(p.scale(&PrecisionComplex::pi(self.prec()).mul_i64(2)))
            }
            k => formal_theta(k, &zero, self.truncation),
        }
    }

    fn tangent(&self, y: &Jet) -> Result<QSeries<Jet>> {
        let prec = self.prec();
        let zero = Jet::zero(self.cap, prec);
        let sinc = Jet::compose_taylor(&sinc_coefficients((self.cap / 2) as usize, prec), y)?;
        let lead = sinc.inverse().ok_or(Error::Inversion)?;
        let p0 = formal_product(ThetaKind::Theta, &zero, self.truncation)?;
        let py = formal_product(ThetaKind::Theta, y, self.truncation)?;
        let ratio = p0.try_mul(&py.invert()?, Jet::try_mul)?;
        Ok(ratio.map(&zero, |c| c.mul(&lead)))
    }

    fn invert(&self, v: &QSeries<Jet>, kind: ThetaKind, argument: String) -> Result<QSeries<Jet>> {
        let c0 = v.coefficient(QExponent(0)).map(Jet::constant_term);
        let threshold = 10f64.powi(-(self.cfg.digits as i32 - 10));
        if c0.as_ref().map_or(true, |c| c.abs_f64() < threshold) {
            return Err(Error::Pole {
                kind: kind.name().into(),
                argument: format!("{argument} at t = {}", self.t.to_decimal(12)),
                component: None,
            });
        }
        v.invert()
    }

    fn odd_factor(&self, lambda: super::Lambda, e: &OddEData) -> Result<QSeries<Jet>> {
        let factor = odd_chern_factor_formal(lambda, e, self.truncation, self.cfg)?;
        Ok(factor.map(&Jet::zero(self.cap, self.prec()), |c| c.with_cap(self.cap)))
    }

    fn integrate(&self, v: &QSeries<Jet>, f: &IntegrationFunctional) -> Result<QSeries<PrecisionComplex>> {
        v.try_map(&PrecisionComplex::zero(self.prec()), |j| integrate_jet(j, f))
    }
}
