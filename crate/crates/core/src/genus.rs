//! Generalized Witten genera as q-series from Chern-root data.
//!
//! Roots are used as they are: `ch(L) = e^u`, `Â = ∏ (y/2)/sinh(y/2)` and
//! the twist is `e^{u/2}`.

use crate::algebra::Ring;
use crate::bundles::{
    ch_equivariant, witten_bundle, ChernNormalization, EquivariantBundle, Reality, RootForm, WeightedSummand, WittenCase,
};
use crate::error::{Error, Result};
use crate::jet::{integrate, IntegrationFunctional, Jet};
use crate::lefschetz::{odd_chern_factor_formal, DimensionClass, Lambda, OddEData};
use crate::precision::{factorial, PrecisionComplex, PrecisionConfig};
use crate::qseries::{QExponent, QSeries};

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldData {
    pub dim: u32,
    /// One root per `±` pair of the complexified tangent bundle.
    pub tangent_roots: Vec<RootForm>,
    pub line_root: RootForm,
    /// One root per `±` pair of `V`.
    pub v_roots: Vec<RootForm>,
    pub e: Option<OddEData>,
    pub functional: IntegrationFunctional,
}

impl ManifoldData {
    /// The class of `dim` modulo 4 and the matching `k`.
    pub fn dimension_class(&self) -> Result<(DimensionClass, u32)> {
        let d = self.dim;
        match d % 4 {
            0 if d > 0 => Ok((DimensionClass::FourK, d / 4)),
            2 => Ok((DimensionClass::FourKPlusTwo, d / 4)),
            3 => Ok((DimensionClass::FourKMinusOne, d / 4 + 1)),
            1 => Ok((DimensionClass::FourKPlusOne, d / 4)),
            _ => Err(Error::Input("manifold dimension must be positive".into())),
        }
    }
}

/// Taylor coefficients of `sinh(x)/x`.
fn shc_coefficients(order: usize, prec: u32) -> Vec<PrecisionComplex> {
    (0..=order)
        .map(|p| {
            if p % 2 == 1 {
                PrecisionComplex::zero(prec)
            } else {
                factorial(p + 1, prec).recip()
            }
        })
        .collect()
}

/// `∏ (y/2)/sinh(y/2)`.
pub fn a_hat(roots: &[RootForm], cap: u32, prec: u32) -> Result<Jet> {
    let half = PrecisionComplex::from_rational(1, 2, prec);
    let coeffs = shc_coefficients((cap / 2) as usize, prec);
    let mut acc = Jet::one(cap, prec);
    for y in roots {
        let arg = y.to_jet(&half, cap, prec);
        let shc = Jet::compose_taylor(&coeffs, &arg)?;
        acc = acc.mul(&shc.inverse().ok_or(Error::Inversion)?);
    }
    Ok(acc)
}

fn pairs(roots: &[RootForm]) -> EquivariantBundle {
    EquivariantBundle::new(
        roots.iter().map(|r| WeightedSummand::new(r.clone(), 0, 1)).collect(),
        Reality::RealPair,
    )
}

/// `∫_M Â(TM) e^{c/2} ch(Θ or Θ*) ch(Q_λ(V))`, times the odd factor in odd
/// dimensions.
pub fn witten_genus(
    class: DimensionClass,
    lambda: Lambda,
    data: &ManifoldData,
    truncation: QExponent,
    cfg: &PrecisionConfig,
) -> Result<QSeries<PrecisionComplex>> {
    let (actual, _) = data.dimension_class()?;
    if actual != class {
        return Err(Error::Case(format!(
            "a genus for class {class} was requested on a manifold of dimension {} (class {actual})",
            data.dim
        )));
    }
    if data.functional.top_degree != data.dim {
        return Err(Error::Input(format!(
            "functional has top degree {}, manifold has dimension {}",
            data.functional.top_degree, data.dim
        )));
    }
    let prec = cfg.bits();
    let cap = data.dim;
    let mut scalar = a_hat(&data.tangent_roots, cap, prec)?;
    scalar = scalar.mul(&data.line_root.to_jet(&PrecisionComplex::from_rational(1, 2, prec), cap, prec).exp());

    let tangent = pairs(&data.tangent_roots);
    let v = pairs(&data.v_roots);
    let line = WeightedSummand::new(data.line_root.clone(), 0, 1);
    let theta_case = if class.is_star() {
        WittenCase::ThetaStar
    } else {
        WittenCase::Theta
    };
    let q_case = match lambda {
        Lambda::One => WittenCase::Q1,
        Lambda::Two => WittenCase::Q2,
        Lambda::Three => WittenCase::Q3,
        Lambda::All => WittenCase::QAll,
    };
    let norm = ChernNormalization::plain(cap, prec);
    let ch_theta = ch_equivariant(&witten_bundle(theta_case, &tangent, &line, &v, truncation)?, &norm)?;
    let ch_q = ch_equivariant(&witten_bundle(q_case, &tangent, &line, &v, truncation)?, &norm)?;
    let mut series = ch_theta.try_mul(&ch_q, Jet::try_mul)?;
    series = series.map(&Jet::zero(cap, prec), |c| c.mul(&scalar));
    if class.is_odd() {
        let e = data
            .e
            .as_ref()
            .ok_or_else(|| Error::Case("odd-dimensional genera need E data".into()))?;
        e.validate()?;
        let odd = odd_chern_factor_formal(lambda, &e.with_cap(cap), truncation, cfg)?;
        series = series.try_mul(&odd, Jet::try_mul)?;
    }
    series.try_map(&PrecisionComplex::zero(prec), |j| integrate(j, &data.functional))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::jet::{FormVariable, Monomial};

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::new(60).unwrap()
    }

    fn cp1(prec: u32) -> ManifoldData {
        let mut pairings = BTreeMap::new();
        pairings.insert(Monomial::var(FormVariable::root("y")), PrecisionComplex::from_i64(2, prec));
        ManifoldData {
            dim: 2,
            tangent_roots: vec![RootForm::var("y")],
            line_root: RootForm::var("y"),
            v_roots: Vec::new(),
            e: None,
            functional: IntegrationFunctional::new(2, pairings),
        }
    }

    #[test]
    fn a_hat_low_order() {
        // (y/2)/sinh(y/2) = 1 - y²/24 + 7y⁴/5760
        let prec = 200;
        let a = a_hat(&[RootForm::var("y")], 8, prec).unwrap();
        let y = FormVariable::root("y");
        let c2 = a.coefficient(&Monomial::from_powers(vec![(y.clone(), 2)]));
        let c4 = a.coefficient(&Monomial::from_powers(vec![(y, 4)]));
        assert!((&c2 - &PrecisionComplex::from_rational(-1, 24, prec)).abs_f64() < 1e-50);
        assert!((&c4 - &PrecisionComplex::from_rational(7, 5760, prec)).abs_f64() < 1e-50);
    }

    #[test]
    fn cp1_star_genus_is_one() {
        let cfg = cfg();
        let g = witten_genus(DimensionClass::FourKPlusTwo, Lambda::Two, &cp1(cfg.bits()), QExponent::integer(5), &cfg)
            .unwrap();
        let one = QSeries::one(&PrecisionComplex::zero(cfg.bits()), QExponent::integer(5));
        assert!(g.distance(&one) < 1e-50, "{g:?}");
    }

    #[test]
    fn wrong_class_is_a_case_error() {
        let cfg = cfg();
        let r = witten_genus(DimensionClass::FourK, Lambda::Two, &cp1(cfg.bits()), QExponent::integer(2), &cfg);
        assert!(matches!(r, Err(Error::Case(_))));
    }

    #[test]
    fn chern_character_of_q_is_the_product_of_the_three() {
        let prec = 200;
        let v = pairs(&[RootForm::var("z1"), RootForm::var("z2")]);
        let empty = pairs(&[]);
        let line = WeightedSummand::new(RootForm::zero(), 0, 1);
        let trunc = QExponent::integer(3);
        let norm = ChernNormalization::plain(6, prec);
        let ch = |c| ch_equivariant(&witten_bundle(c, &empty, &line, &v, trunc).unwrap(), &norm).unwrap();
        let product = ch(WittenCase::Q1).mul(&ch(WittenCase::Q2)).mul(&ch(WittenCase::Q3));
        let all = ch(WittenCase::QAll);
        for (e, c) in all.terms() {
            assert!(c.distance(&product.coefficient_or_zero(e)) < 1e-50);
        }
        assert_eq!(all.terms().count(), product.terms().count());
    }
}
