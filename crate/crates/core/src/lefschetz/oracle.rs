use crate::algebra::{Algebra, Ring};
use crate::bundles::{
    ch_equivariant, witten_bundle, ChernNormalization, EquivariantBundle, Reality, RootForm, WeightedSummand, WittenCase,
};
use crate::error::{Error, Result};
use crate::jet::{integrate, Jet};
use crate::precision::{PrecisionComplex, PrecisionConfig};
use crate::qseries::{QExponent, QSeries};

use super::backend::sinc_coefficients;
use super::odd::odd_chern_factor_oracle;
use super::{CaseSelector, FixedComponent, Lambda, OddEData};

fn q_case(lambda: Lambda) -> WittenCase {
    match lambda {
        Lambda::One => WittenCase::Q1,
        Lambda::Two => WittenCase::Q2,
        Lambda::Three => WittenCase::Q3,
        Lambda::All => WittenCase::QAll,
    }
}

/// The localized index of one component from sine factors and the Chern
/// characters of the Witten bundles, as a q-series at fixed `t`.
pub fn lefschetz_oracle(
    case: &CaseSelector,
    comp: &FixedComponent,
    e: Option<&OddEData>,
    t: &PrecisionComplex,
    truncation: QExponent,
    cfg: &PrecisionConfig,
) -> Result<QSeries<PrecisionComplex>> {
    comp.validate(case)?;
    let prec = cfg.bits();
    let cap = comp.cap(case.dimension_class);
    let t = t.with_prec(prec);
    let pi = PrecisionComplex::pi(prec);
    let one = PrecisionComplex::one(prec);
    let jet = |r: &RootForm| r.to_jet(&one, cap, prec);
    let threshold = 10f64.powi(-(cfg.digits as i32 - 10));

    // πy/sin(πy)
    let mut scalar = Jet::one(cap, prec);
    for y in &comp.tangent_roots {
        let sinc = Jet::compose_taylor(&sinc_coefficients((cap / 2) as usize, prec), &jet(y))?;
        scalar = scalar.mul(&sinc.inverse().ok_or(Error::Inversion)?);
    }
    // 1/(2i sin(π(x + m t)))
    for ns in &comp.normal {
        for x in &ns.roots {
            let arg = jet(x).add(&Jet::constant(t.mul_i64(ns.m), cap)).scale(&pi);
            let s = arg.sin().scale(&PrecisionComplex::i(prec).mul_i64(2));
            if s.constant_term().abs_f64() < threshold {
                return Err(Error::Pole {
                    kind: "sin".into(),
                    argument: format!("{x} + {}t at t = {}", ns.m, t.to_decimal(12)),
                    component: None,
                });
            }
            scalar = scalar.mul(&s.inverse().ok_or(Error::Inversion)?);
        }
    }
    // ½(e^{πiw} ± e^{-πiw}), w = u + σt
    let w = jet(&comp.u).add(&Jet::constant(t.mul_i64(comp.sigma), cap));
    let pi_i_w = w.scale(&pi.mul_i());
    let plus = pi_i_w.exp();
    let minus = pi_i_w.neg().exp();
    let twist = if case.dimension_class.is_star() {
        plus.sub(&minus)
    } else {
        plus.add(&minus)
    };
    scalar = scalar.mul(&twist.scale(&PrecisionComplex::from_rational(1, 2, prec)));

    let mut tangent = Vec::new();
    for y in &comp.tangent_roots {
        tangent.push(WeightedSummand::new(y.clone(), 0, 1));
    }
    for ns in &comp.normal {
        for x in &ns.roots {
            tangent.push(WeightedSummand::new(x.clone(), ns.m, 1));
        }
    }
    let tangent = EquivariantBundle::new(tangent, Reality::RealPair);
    let line = WeightedSummand::new(comp.u.clone(), comp.sigma, 1);
    let mut v = Vec::new();
    for vs in &comp.v_parts {
        for z in &vs.roots {
            v.push(WeightedSummand::new(z.clone(), vs.n, 1));
        }
    }
    let v = EquivariantBundle::new(v, Reality::RealPair);

    let theta_case = if case.dimension_class.is_star() {
        WittenCase::ThetaStar
    } else {
        WittenCase::Theta
    };
    let norm = ChernNormalization::equivariant(t.clone(), cap, prec);
    let ch_theta = ch_equivariant(&witten_bundle(theta_case, &tangent, &line, &v, truncation)?, &norm)?;
    let ch_q = ch_equivariant(&witten_bundle(q_case(case.lambda), &tangent, &line, &v, truncation)?, &norm)?;
    let mut series = ch_theta.try_mul(&ch_q, Jet::try_mul)?;
    series = series.map(&Jet::zero(cap, prec), |c| c.mul(&scalar));

    if case.dimension_class.is_odd() {
        let e = e.ok_or_else(|| Error::Case("odd dimension classes need E data".into()))?;
        let odd = odd_chern_factor_oracle(case.lambda, &e.with_cap(cap), truncation, prec)?;
        series = series.try_mul(&odd, Jet::try_mul)?;
    }
    series.try_map(&PrecisionComplex::zero(prec), |j| integrate(j, &comp.functional))
}
