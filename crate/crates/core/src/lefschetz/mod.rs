//! Lefschetz numbers of circle actions as theta-quotient integrals over
//! fixed components.
//!
//! Two evaluators share one integrand assembly: a numeric one at a point
//! `(t, τ)` and a formal one producing a q-series at fixed `t`. An
//! independent oracle works from the Witten bundles and sine factors.

mod backend;
pub mod odd;
mod oracle;

use std::fmt;

use rayon::prelude::*;

use crate::algebra::Ring;
use crate::bundles::RootForm;
use crate::error::{Error, Result};
use crate::jet::{FormVariable, IntegrationFunctional, Jet};
use crate::precision::{PrecisionComplex, PrecisionConfig};
use crate::qseries::{QExponent, QSeries};
use crate::theta::{Tau, ThetaKind};

use backend::{integrand, FormalBackend, NumericBackend, ThetaBackend};

pub use odd::{odd_chern_factor, odd_chern_factor_formal, odd_chern_factor_oracle, odd_factor_prefactor};
pub use oracle::lefschetz_oracle;

/// Default number of Gauss–Legendre points for the odd factor.
pub const DEFAULT_QUADRATURE_POINTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DimensionClass {
    FourK,
    FourKPlusTwo,
    FourKMinusOne,
    FourKPlusOne,
}

impl DimensionClass {
    pub const ALL: [DimensionClass; 4] = [
        DimensionClass::FourK,
        DimensionClass::FourKPlusTwo,
        DimensionClass::FourKMinusOne,
        DimensionClass::FourKPlusOne,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "4k" => Ok(DimensionClass::FourK),
            "4k+2" => Ok(DimensionClass::FourKPlusTwo),
            "4k-1" => Ok(DimensionClass::FourKMinusOne),
            "4k+1" => Ok(DimensionClass::FourKPlusOne),
            other => Err(Error::Input(format!("unknown dimension class '{other}'"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DimensionClass::FourK => "4k",
            DimensionClass::FourKPlusTwo => "4k+2",
            DimensionClass::FourKMinusOne => "4k-1",
            DimensionClass::FourKPlusOne => "4k+1",
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, DimensionClass::FourKMinusOne | DimensionClass::FourKPlusOne)
    }

    /// Whether the line factor is the `Θ*` one.
    pub fn is_star(self) -> bool {
        matches!(self, DimensionClass::FourKPlusTwo | DimensionClass::FourKPlusOne)
    }

    pub fn dimension(self, k: u32) -> Result<u32> {
        let k = 4 * k as i64;
        let d = match self {
            DimensionClass::FourK => k,
            DimensionClass::FourKPlusTwo => k + 2,
            DimensionClass::FourKMinusOne => k - 1,
            DimensionClass::FourKPlusOne => k + 1,
        };
        if d <= 0 {
            return Err(Error::Case(format!("class {} with k = {} has no positive dimension", self.as_str(), k / 4)));
        }
        Ok(d as u32)
    }
}

impl fmt::Display for DimensionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lambda {
    One,
    Two,
    Three,
    All,
}

impl Lambda {
    pub const ALL: [Lambda; 4] = [Lambda::One, Lambda::Two, Lambda::Three, Lambda::All];

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Lambda::One),
            "2" => Ok(Lambda::Two),
            "3" => Ok(Lambda::Three),
            "all" => Ok(Lambda::All),
            other => Err(Error::Input(format!("unknown lambda '{other}'"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Lambda::One => "1",
            Lambda::Two => "2",
            Lambda::Three => "3",
            Lambda::All => "all",
        }
    }

    /// Theta functions in the `V` factor.
    pub fn kinds(self) -> &'static [ThetaKind] {
        match self {
            Lambda::One => &[ThetaKind::Theta1],
            Lambda::Two => &[ThetaKind::Theta2],
            Lambda::Three => &[ThetaKind::Theta3],
            Lambda::All => &[ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3],
        }
    }

    /// Whether the bundle carries the spinor factor `Δ(V)`.
    pub fn has_spinor(self) -> bool {
        matches!(self, Lambda::One | Lambda::All)
    }

    /// Image under `τ ↦ -1/τ`.
    pub fn s_image(self) -> Lambda {
        match self {
            Lambda::One => Lambda::Two,
            Lambda::Two => Lambda::One,
            other => other,
        }
    }

    /// Image under `τ ↦ τ+1`.
    pub fn t_image(self) -> Lambda {
        match self {
            Lambda::Two => Lambda::Three,
            Lambda::Three => Lambda::Two,
            other => other,
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseSelector {
    pub dimension_class: DimensionClass,
    pub lambda: Lambda,
    pub k: u32,
}

impl CaseSelector {
    pub fn new(dimension_class: DimensionClass, lambda: Lambda, k: u32) -> Self {
        CaseSelector {
            dimension_class,
            lambda,
            k,
        }
    }

    pub fn dimension(&self) -> Result<u32> {
        self.dimension_class.dimension(self.k)
    }

    pub fn with_lambda(&self, lambda: Lambda) -> Self {
        CaseSelector { lambda, ..*self }
    }
}

/// Normal summand `N_β`: one root per complex line, all rotated by `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalSummand {
    pub m: i64,
    pub roots: Vec<RootForm>,
}

impl NormalSummand {
    pub fn isolated(m: i64, mult: usize) -> Self {
        NormalSummand {
            m,
            roots: vec![RootForm::zero(); mult],
        }
    }
}

/// `V` summand: one root per `±` pair, rotated by `n` (0 for `V_0`).
#[derive(Clone, Debug, PartialEq)]
pub struct VSummand {
    pub n: i64,
    pub roots: Vec<RootForm>,
}

impl VSummand {
    pub fn isolated(n: i64, pairs: usize) -> Self {
        VSummand {
            n,
            roots: vec![RootForm::zero(); pairs],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedComponent {
    pub s: u32,
    pub tangent_roots: Vec<RootForm>,
    pub normal: Vec<NormalSummand>,
    pub v_parts: Vec<VSummand>,
    pub u: RootForm,
    pub sigma: i64,
    pub functional: IntegrationFunctional,
}

impl FixedComponent {
    /// An isolated fixed point with the given rotations.
    pub fn isolated(normal: &[i64], v: &[i64], sigma: i64, prec: u32) -> Self {
        FixedComponent {
            s: 0,
            tangent_roots: Vec::new(),
            normal: normal.iter().map(|m| NormalSummand::isolated(*m, 1)).collect(),
            v_parts: v.iter().map(|n| VSummand::isolated(*n, 1)).collect(),
            u: RootForm::zero(),
            sigma,
            functional: IntegrationFunctional::point(prec),
        }
    }

    /// `r̄_α`: complex rank of the normal bundle.
    pub fn r_bar(&self) -> u32 {
        self.normal.iter().map(|n| n.roots.len() as u32).sum()
    }

    /// `l̄`: number of `±` pairs in `V`.
    pub fn l_bar(&self) -> u32 {
        self.v_parts.iter().map(|v| v.roots.len() as u32).sum()
    }

    /// Degree cap of the integrand jets.
    pub fn cap(&self, class: DimensionClass) -> u32 {
        2 * self.s + u32::from(class.is_odd())
    }

    pub fn validate(&self, case: &CaseSelector) -> Result<()> {
        let dim = case.dimension()?;
        let odd = u32::from(case.dimension_class.is_odd());
        if self.tangent_roots.len() != self.s as usize {
            return Err(Error::Input(format!(
                "component with s = {} lists {} tangent roots",
                self.s,
                self.tangent_roots.len()
            )));
        }
        if 2 * self.s + 2 * self.r_bar() + odd != dim {
            return Err(Error::Input(format!(
                "2s + 2r = {} does not match dimension {dim}",
                2 * self.s + 2 * self.r_bar() + odd
            )));
        }
        if let Some(n) = self.normal.iter().find(|n| n.m == 0) {
            return Err(Error::Input(format!("normal rotation must be nonzero, got {}", n.m)));
        }
        if self.functional.top_degree != self.cap(case.dimension_class) {
            return Err(Error::Input(format!(
                "functional has top degree {}, expected {}",
                self.functional.top_degree,
                self.cap(case.dimension_class)
            )));
        }
        Ok(())
    }
}

/// One term `w·f((ū²-ū)a)` of the modeled trace.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceComponent {
    pub w: Jet,
    pub a: Jet,
}

/// Model of the map into the unitary group entering odd-dimensional cases.
#[derive(Clone, Debug, PartialEq)]
pub struct OddEData {
    pub n: u32,
    pub odd_variable: FormVariable,
    pub trace_components: Vec<TraceComponent>,
    pub c3_is_zero: bool,
}

impl OddEData {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n % 2 == 1 {
            return Err(Error::Input(format!("rank N must be even and positive, got {}", self.n)));
        }
        if !self.odd_variable.is_odd() {
            return Err(Error::Input(format!("odd variable '{}' has even degree", self.odd_variable.name)));
        }
        for (i, tc) in self.trace_components.iter().enumerate() {
            let w_ok = tc.w.terms().all(|(m, _)| m.odd_factors() == 1 && m.degree() % 2 == 1);
            if !w_ok {
                return Err(Error::Input(format!("trace component {i}: w must be odd with one odd factor")));
            }
            if tc.a.has_odd_terms() || tc.a.terms().any(|(m, _)| m.degree() % 2 == 1) {
                return Err(Error::Input(format!("trace component {i}: a must be even")));
            }
            if !tc.a.constant_term().is_zero() {
                return Err(Error::Input(format!("trace component {i}: a must be nilpotent")));
            }
        }
        if self.c3_is_zero && self.c3_residual()? > 0.0 {
            return Err(Error::Input("c3_is_zero is asserted but Σ w·a does not vanish".into()));
        }
        Ok(())
    }

    /// Largest coefficient of `Σ w_i a_i`, the degree-3 obstruction.
    pub fn c3_residual(&self) -> Result<f64> {
        let mut acc: Option<Jet> = None;
        for tc in &self.trace_components {
            let p = tc.w.try_mul(&tc.a)?;
            acc = Some(match acc {
                Some(a) => a.add(&p),
                None => p,
            });
        }
        Ok(acc.map_or(0.0, |j| j.max_abs()))
    }

    pub fn with_cap(&self, cap: u32) -> OddEData {
        OddEData {
            trace_components: self
                .trace_components
                .iter()
                .map(|tc| TraceComponent {
                    w: tc.w.with_cap(cap),
                    a: tc.a.with_cap(cap),
                })
                .collect(),
            ..self.clone()
        }
    }
}

/// Which constant multiplies each component's integral.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PrefactorConvention {
    /// `(2πi)^{-r̄}`, times `2^{l̄}` when `V` carries the spinor factor.
    #[default]
    Consistent,
    /// `2^{l̄-r̄}(-i/π)^{r̄}` for λ = 1 and all, `-(i/2π)^{r̄}` for λ = 2, 3.
    AsPrinted,
}

pub fn prefactor(convention: PrefactorConvention, lambda: Lambda, l_bar: u32, r_bar: u32, prec: u32) -> PrecisionComplex {
    let two = PrecisionComplex::from_i64(2, prec);
    let pi = PrecisionComplex::pi(prec);
    match convention {
        PrefactorConvention::Consistent => {
            let base = PrecisionComplex::two_pi_i(prec).recip().powi(r_bar as i32);
            if lambda.has_spinor() {
                &base * &two.powi(l_bar as i32)
            } else {
                base
            }
        }
        PrefactorConvention::AsPrinted => {
            if lambda.has_spinor() {
                let ratio = -(&PrecisionComplex::i(prec) / &pi);
                &two.powi(l_bar as i32 - r_bar as i32) * &ratio.powi(r_bar as i32)
            } else {
                let ratio = &PrecisionComplex::i(prec) / &pi.mul_i64(2);
                -ratio.powi(r_bar as i32)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantData {
    pub case: CaseSelector,
    pub components: Vec<FixedComponent>,
    pub e: Option<OddEData>,
    pub convention: PrefactorConvention,
}

impl EquivariantData {
    pub fn new(case: CaseSelector, components: Vec<FixedComponent>, e: Option<OddEData>) -> Self {
        EquivariantData {
            case,
            components,
            e,
            convention: PrefactorConvention::default(),
        }
    }

    /// Number of `±` pairs in `V`, common to all components.
    pub fn l_bar(&self) -> u32 {
        self.components.first().map_or(0, FixedComponent::l_bar)
    }

    /// Normal rank of component `i`.
    pub fn r_bar(&self, i: usize) -> u32 {
        self.components[i].r_bar()
    }

    pub fn with_lambda(&self, lambda: Lambda) -> Self {
        EquivariantData {
            case: self.case.with_lambda(lambda),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.case.dimension()?;
        if self.components.is_empty() {
            return Err(Error::Input("no fixed components".into()));
        }
        let l = self.l_bar();
        for (i, c) in self.components.iter().enumerate() {
            c.validate(&self.case)
                .map_err(|e| Error::Input(format!("component {i}: {}", strip_prefix(&e))))?;
            if c.l_bar() != l {
                return Err(Error::Input(format!("component {i} has {} V pairs, component 0 has {l}", c.l_bar())));
            }
        }
        match (&self.e, self.case.dimension_class.is_odd()) {
            (None, true) => Err(Error::Case("odd dimension classes need E data".into())),
            (Some(_), false) => Err(Error::Case("E data only applies to odd dimension classes".into())),
            (Some(e), true) => e.validate(),
            (None, false) => Ok(()),
        }
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Input(s) => s.clone(),
        other => other.to_string(),
    }
}

fn tag_component(e: Error, i: usize) -> Error {
    match e {
        Error::Pole { kind, argument, .. } => Error::Pole {
            kind,
            argument,
            component: Some(i),
        },
        other => other,
    }
}

/// Lefschetz number of one component at `(t, τ)`.
pub fn lefschetz_component(
    case: &CaseSelector,
    comp: &FixedComponent,
    e: Option<&OddEData>,
    t: &PrecisionComplex,
    tau: &Tau,
    cfg: &PrecisionConfig,
) -> Result<PrecisionComplex> {
    lefschetz_component_with(PrefactorConvention::default(), case, comp, e, t, tau, cfg)
}

pub fn lefschetz_component_with(
    convention: PrefactorConvention,
    case: &CaseSelector,
    comp: &FixedComponent,
    e: Option<&OddEData>,
    t: &PrecisionComplex,
    tau: &Tau,
    cfg: &PrecisionConfig,
) -> Result<PrecisionComplex> {
    comp.validate(case)?;
    let backend = NumericBackend::new(t, tau, comp.cap(case.dimension_class), cfg)?;
    let value = integrand(&backend, case, comp, e)?;
    let integral = backend.integrate(&value, &comp.functional)?;
    let pre = prefactor(convention, case.lambda, comp.l_bar(), comp.r_bar(), cfg.bits());
    Ok(&pre * &integral)
}

/// Sum over all components; pole errors name the component.
pub fn lefschetz_total(
    data: &EquivariantData,
    t: &PrecisionComplex,
    tau: &Tau,
    cfg: &PrecisionConfig,
) -> Result<PrecisionComplex> {
    Ok(lefschetz_parts(data, t, tau, cfg)?
        .into_iter()
        .fold(PrecisionComplex::zero(cfg.bits()), |acc, v| &acc + &v))
}

/// Per-component values, in component order.
pub fn lefschetz_parts(
    data: &EquivariantData,
    t: &PrecisionComplex,
    tau: &Tau,
    cfg: &PrecisionConfig,
) -> Result<Vec<PrecisionComplex>> {
    data.components
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            lefschetz_component_with(data.convention, &data.case, c, data.e.as_ref(), t, tau, cfg)
                .map_err(|e| tag_component(e, i))
        })
        .collect()
}

/// The theta path as a q-series at fixed `t`, prefactor included.
pub fn lefschetz_series(
    case: &CaseSelector,
    comp: &FixedComponent,
    e: Option<&OddEData>,
    t: &PrecisionComplex,
    truncation: QExponent,
    cfg: &PrecisionConfig,
) -> Result<QSeries<PrecisionComplex>> {
    lefschetz_series_with(PrefactorConvention::default(), case, comp, e, t, truncation, cfg)
}

pub fn lefschetz_series_with(
    convention: PrefactorConvention,
    case: &CaseSelector,
    comp: &FixedComponent,
    e: Option<&OddEData>,
    t: &PrecisionComplex,
    truncation: QExponent,
    cfg: &PrecisionConfig,
) -> Result<QSeries<PrecisionComplex>> {
    comp.validate(case)?;
    let backend = FormalBackend::new(t, comp.cap(case.dimension_class), truncation, cfg);
    let value = integrand(&backend, case, comp, e)?;
    let integral = backend.integrate(&value, &comp.functional)?;
    let pre = prefactor(convention, case.lambda, comp.l_bar(), comp.r_bar(), cfg.bits());
    Ok(integral.map(&PrecisionComplex::zero(cfg.bits()), |c| c * &pre))
}

#[cfg(test)]
mod tests;
