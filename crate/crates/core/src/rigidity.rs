//! Numerical checks of the modular structure of Lefschetz numbers:
//! anomaly identities, quasi-periodicity, S/T relations, t-independence
//! scans and pole-lattice prediction.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bundles::RootForm;
use crate::error::{Error, Result};
use crate::lefschetz::{lefschetz_parts, DimensionClass, EquivariantData, FixedComponent, Lambda};
use crate::precision::{PrecisionComplex, PrecisionConfig};
use crate::theta::Tau;

pub const THREADS_ENV: &str = "THETA_RIGIDITY_THREADS";

/// Negative controls must exceed this.
pub const CONTROL_THRESHOLD: f64 = 1e-3;

/// Runs `f` on a pool capped by `THETA_RIGIDITY_THREADS` when it is set.
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok());
    match cap.filter(|n| *n > 0) {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

/// Coefficients `(α, β)` in `α p₁(L) + β p₁(V) = p₁(TM)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AnomalyCondition {
    pub alpha: i64,
    pub beta: i64,
}

impl AnomalyCondition {
    pub fn new(alpha: i64, beta: i64) -> Result<Self> {
        if ![1, 3].contains(&alpha) || ![1, 3].contains(&beta) {
            return Err(Error::Input(format!(
                "anomaly coefficients must be 1 or 3, got ({alpha}, {beta})"
            )));
        }
        Ok(AnomalyCondition { alpha, beta })
    }

    /// The condition under which the case is expected to be rigid.
    pub fn default_for(class: DimensionClass, lambda: Lambda) -> Self {
        let alpha = if class.is_star() { 1 } else { 3 };
        let beta = if lambda == Lambda::All { 3 } else { 1 };
        AnomalyCondition { alpha, beta }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("anomaly condition must look like '3,1', got '{s}'"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        AnomalyCondition::new(a, b)
    }
}

impl fmt::Display for AnomalyCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.alpha, self.beta)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetailEntry {
    pub label: String,
    pub residual: f64,
}

impl DetailEntry {
    fn new(label: impl Into<String>, residual: f64) -> Self {
        DetailEntry {
            label: label.into(),
            residual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: Vec<DetailEntry>,
    /// Reported but never part of the verdict.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub informational: Vec<DetailEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(check: impl Into<String>, detail: Vec<DetailEntry>, tolerance: f64) -> Self {
        let residual = detail.iter().map(|d| d.residual).fold(0.0, f64::max);
        let residual = if detail.iter().any(|d| d.residual.is_nan()) {
            f64::NAN
        } else {
            residual
        };
        CheckReport {
            check: check.into(),
            residual,
            tolerance,
            pass: residual < tolerance,
            detail,
            informational: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{}: {} (residual {:.3e}, tolerance {:.1e})\n",
            self.check,
            if self.pass { "pass" } else { "fail" },
            self.residual,
            self.tolerance
        );
        for d in &self.detail {
            out.push_str(&format!("  {}: {:.3e}\n", d.label, d.residual));
        }
        for d in &self.informational {
            out.push_str(&format!("  [info] {}: {:.3e}\n", d.label, d.residual));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

type Quadratic = BTreeMap<(String, String), i64>;

fn square_into(acc: &mut Quadratic, r: &RootForm, k: i64) {
    for (a, ca) in r.terms() {
        for (b, cb) in r.terms() {
            let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
            *acc.entry(key).or_insert(0) += k * ca * cb;
        }
    }
}

fn max_abs<'a>(it: impl Iterator<Item = &'a i64>) -> f64 {
    it.map(|c| c.unsigned_abs() as f64).fold(0.0, f64::max)
}

/// Scalar, mixed and quadratic parts of `α p₁(L) + β p₁(V) − p₁(TM)` on one
/// component, as integer residuals.
pub fn anomaly_residuals(comp: &FixedComponent, cond: AnomalyCondition) -> [f64; 3] {
    let (al, be) = (cond.alpha, cond.beta);
    let mut scalar = al * comp.sigma * comp.sigma;
    let mut mixed = comp.u.scaled(al * comp.sigma);
    let mut quad = Quadratic::new();
    square_into(&mut quad, &comp.u, al);
    for v in &comp.v_parts {
        for z in &v.roots {
            scalar += be * v.n * v.n;
            mixed = mixed.add(&z.scaled(be * v.n));
            square_into(&mut quad, z, be);
        }
    }
    for y in &comp.tangent_roots {
        square_into(&mut quad, y, -1);
    }
    for ns in &comp.normal {
        for x in &ns.roots {
            scalar -= ns.m * ns.m;
            mixed = mixed.add(&x.scaled(-ns.m));
            square_into(&mut quad, x, -1);
        }
    }
    [
        scalar.unsigned_abs() as f64,
        max_abs(mixed.terms().map(|(_, c)| c)),
        max_abs(quad.values()),
    ]
}

/// Integer identities; any nonzero residual fails.
pub fn anomaly_check(data: &EquivariantData, cond: AnomalyCondition) -> CheckReport {
    let mut detail = Vec::new();
    for (i, c) in data.components.iter().enumerate() {
        let [s, m, q] = anomaly_residuals(c, cond);
        detail.push(DetailEntry::new(format!("component {i} scalar"), s));
        detail.push(DetailEntry::new(format!("component {i} mixed"), m));
        detail.push(DetailEntry::new(format!("component {i} quadratic"), q));
    }
    CheckReport::new(format!("anomaly {cond}"), detail, 0.5)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    Two,
    TwoTau,
}

impl Shift {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(Shift::Two),
            "2tau" | "2τ" => Ok(Shift::TwoTau),
            other => Err(Error::Input(format!("shift must be '2' or '2tau', got '{other}'"))),
        }
    }

    fn amount(self, tau: &Tau) -> PrecisionComplex {
        match self {
            Shift::Two => PrecisionComplex::from_i64(2, tau.prec()),
            Shift::TwoTau => tau.value().mul_i64(2),
        }
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shift::Two => "2",
            Shift::TwoTau => "2tau",
        })
    }
}

fn sum(values: &[PrecisionComplex], prec: u32) -> PrecisionComplex {
    values.iter().fold(PrecisionComplex::zero(prec), |acc, v| &acc + v)
}

/// `|L(t0 + shift) − L(t0)|` per component and for the total.
pub fn periodicity_check(
    data: &EquivariantData,
    cond: AnomalyCondition,
    tau: &Tau,
    t0: &PrecisionComplex,
    shift: Shift,
    cfg: &PrecisionConfig,
) -> Result<CheckReport> {
    data.validate()?;
    let prec = cfg.bits();
    let tau = tau.with_prec(prec);
    let t0 = t0.with_prec(prec);
    let t1 = &t0 + &shift.amount(&tau);
    let (a, b) = with_thread_cap(|| {
        (lefschetz_parts(data, &t0, &tau, cfg), lefschetz_parts(data, &t1, &tau, cfg))
    });
    let (a, b) = (a?, b?);
    let mut detail: Vec<DetailEntry> = a
        .iter()
        .zip(&b)
        .enumerate()
        .map(|(i, (x, y))| DetailEntry::new(format!("component {i}"), (y - x).abs_f64()))
        .collect();
    detail.push(DetailEntry::new("total", (&sum(&b, prec) - &sum(&a, prec)).abs_f64()));
    let mut report = CheckReport::new(format!("periodicity shift {shift}"), detail, cfg.tolerance(20));
    if shift == Shift::TwoTau {
        let anomaly = anomaly_check(data, cond);
        report.notes.push(format!(
            "depends on anomaly condition {cond}, which {}",
            if anomaly.pass { "holds" } else { "fails" }
        ));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `L_λ(t/τ, −1/τ)` against `L_{S(λ)}(t, τ)`.
    S,
    /// `L_λ(t, τ+1)` against `L_{T(λ)}(t, τ)`.
    T,
}

impl Relation {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "S" | "s" => Ok(Relation::S),
            "T" | "t" => Ok(Relation::T),
            other => Err(Error::Input(format!("relation must be S or T, got '{other}'"))),
        }
    }

    pub fn image(self, lambda: Lambda) -> Lambda {
        match self {
            Relation::S => lambda.s_image(),
            Relation::T => lambda.t_image(),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::S => "S",
            Relation::T => "T",
        })
    }
}

/// Five points around `t0` for ratio-constancy checks.
pub fn t_sample(t0: &PrecisionComplex) -> Vec<PrecisionComplex> {
    let prec = t0.prec();
    [(0, 0), (3, 0), (0, 5), (7, 2), (-4, 3)]
        .iter()
        .map(|(re, im)| {
            let d = &PrecisionComplex::from_rational(*re, 100, prec)
                + &PrecisionComplex::from_rational(*im, 100, prec).mul_i();
            t0 + &d
        })
        .collect()
}

fn power_of_two(e: i64, prec: u32) -> PrecisionComplex {
    PrecisionComplex::from_i64(2, prec).powi(e as i32)
}

/// The constant the relation should produce for a component with normal
/// rank `r_bar` and `s` tangent pairs: `(printed, derived)`. `printed` is
/// `None` where no printed form exists.
pub fn relation_constants(
    data: &EquivariantData,
    relation: Relation,
    r_bar: u32,
    s: u32,
    tau: &Tau,
) -> (Option<PrecisionComplex>, PrecisionComplex) {
    let prec = tau.prec();
    let one = PrecisionComplex::one(prec);
    if relation == Relation::T {
        return (Some(one.clone()), one);
    }
    let lambda = data.case.lambda;
    let class = data.case.dimension_class;
    let k = data.case.k as i32;
    let l = data.l_bar() as i64;
    let r = r_bar as i64;
    let half_n = data.e.as_ref().map_or(0, |e| e.n as i64 / 2);
    let sign = match lambda {
        Lambda::One => 1,
        Lambda::Two => -1,
        _ => 0,
    };
    let tau_2k = tau.value().powi(2 * k);
    let derived = &power_of_two(sign * (l + half_n), prec) * &tau_2k;
    let printed = match (class, lambda) {
        (_, Lambda::All) => None,
        (DimensionClass::FourK, _) => Some(&power_of_two(sign * (l - r), prec) * &tau_2k),
        (DimensionClass::FourKPlusTwo, _) => {
            Some(&power_of_two(sign * (l - r), prec) * &tau.value().powi(s as i32 + l as i32 - 1))
        }
        _ => Some(&power_of_two(sign * (l - r + half_n), prec) * &tau_2k),
    };
    (printed, derived)
}

/// Ratio-constancy of an S or T relation over `ts`, per component and for
/// the total. Constant-match residuals are informational.
pub fn st_relation_check(
    data: &EquivariantData,
    relation: Relation,
    ts: &[PrecisionComplex],
    tau: &Tau,
    cfg: &PrecisionConfig,
) -> Result<CheckReport> {
    data.validate()?;
    if ts.is_empty() {
        return Err(Error::Input("t-sample is empty".into()));
    }
    let prec = cfg.bits();
    let tau = tau.with_prec(prec);
    let left_data = data.clone();
    let right_data = data.with_lambda(relation.image(data.case.lambda));
    let left_tau = match relation {
        Relation::S => tau.s_image(),
        Relation::T => tau.t_image(),
    };
    let evaluations: Vec<Result<(Vec<PrecisionComplex>, Vec<PrecisionComplex>)>> = with_thread_cap(|| {
        ts.par_iter()
            .map(|t| {
                let t = t.with_prec(prec);
                let lt = match relation {
                    Relation::S => &t / tau.value(),
                    Relation::T => t.clone(),
                };
                Ok((
                    lefschetz_parts(&left_data, &lt, &left_tau, cfg)?,
                    lefschetz_parts(&right_data, &t, &tau, cfg)?,
                ))
            })
            .collect()
    });
    let evaluations = evaluations.into_iter().collect::<Result<Vec<_>>>()?;

    let n = data.components.len();
    let mut detail = Vec::new();
    let mut informational = Vec::new();
    let mut notes = Vec::new();
    let mut uniform_r = true;
    for i in 0..=n {
        let label = if i < n { format!("component {i}") } else { "total".to_string() };
        let ratios: Vec<PrecisionComplex> = evaluations
            .iter()
            .map(|(l, r)| {
                if i < n {
                    &l[i] / &r[i]
                } else {
                    &sum(l, prec) / &sum(r, prec)
                }
            })
            .collect();
        let base = &ratios[0];
        let scale = base.abs_f64();
        let spread = ratios
            .iter()
            .map(|r| (r - base).abs_f64() / scale)
            .fold(0.0, f64::max);
        detail.push(DetailEntry::new(format!("{label} ratio"), if scale > 0.0 { spread } else { f64::NAN }));

        let (r_bar, s) = if i < n {
            (data.components[i].r_bar(), data.components[i].s)
        } else {
            let r0 = data.components[0].r_bar();
            let s0 = data.components[0].s;
            uniform_r = data.components.iter().all(|c| c.r_bar() == r0 && c.s == s0);
            (r0, s0)
        };
        if i == n && !uniform_r {
            continue;
        }
        let (printed, derived) = relation_constants(data, relation, r_bar, s, &tau);
        if let Some(p) = printed {
            informational.push(DetailEntry::new(format!("{label} printed constant"), (base - &p).abs_f64() / p.abs_f64()));
        }
        informational.push(DetailEntry::new(format!("{label} derived constant"), (base - &derived).abs_f64() / derived.abs_f64()));
        if i == 0 {
            notes.push(format!("ratio at first sample point: {}", base.to_decimal(20)));
        }
    }
    let name = format!(
        "{relation} relation {} -> {}",
        data.case.lambda,
        relation.image(data.case.lambda)
    );
    let mut report = CheckReport::new(name, detail, cfg.tolerance(20));
    report.informational = informational;
    report.notes = notes;
    Ok(report)
}

/// `n × n` grid over `[0.05, 0.45] + i[0.05, 0.45]`.
pub fn default_grid(n: usize, prec: u32) -> Vec<PrecisionComplex> {
    let coord = |j: usize| {
        if n <= 1 {
            PrecisionComplex::from_rational(1, 4, prec)
        } else {
            let d = (n - 1) as i64;
            PrecisionComplex::from_rational(d + 8 * j as i64, 20 * d, prec)
        }
    };
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            out.push(&coord(a) + &coord(b).mul_i());
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanPoint {
    pub t: String,
    pub value: Option<String>,
    pub deviation: Option<f64>,
    pub error: Option<String>,
    #[serde(skip)]
    pub t_value: PrecisionComplex,
    #[serde(skip)]
    pub value_exact: Option<PrecisionComplex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub max_deviation: f64,
    pub mean_value: String,
    #[serde(skip)]
    pub mean_exact: PrecisionComplex,
    pub points: Vec<ScanPoint>,
    pub warnings: Vec<String>,
}

/// Evaluates the total on `grid`; pole hits are excluded with a warning.
pub fn rigidity_scan(
    data: &EquivariantData,
    tau: &Tau,
    grid: &[PrecisionComplex],
    cfg: &PrecisionConfig,
) -> Result<RigidityReport> {
    data.validate()?;
    let prec = cfg.bits();
    let tau = tau.with_prec(prec);
    let values: Vec<Result<PrecisionComplex>> = with_thread_cap(|| {
        grid.par_iter()
            .map(|t| lefschetz_parts(data, &t.with_prec(prec), &tau, cfg).map(|p| sum(&p, prec)))
            .collect()
    });
    let mut warnings = Vec::new();
    let mut good = Vec::new();
    for (t, v) in grid.iter().zip(&values) {
        match v {
            Ok(v) => good.push(v.clone()),
            Err(e @ Error::Pole { .. }) => warnings.push(format!("t = {}: {e}, excluded", t.to_decimal(12))),
            Err(e) => return Err(e.clone()),
        }
    }
    if good.is_empty() {
        return Err(Error::Pole {
            kind: "grid".into(),
            argument: "every grid point".into(),
            component: None,
        });
    }
    let mean = sum(&good, prec).div_i64(good.len() as i64);
    let mut max_deviation: f64 = 0.0;
    let points = grid
        .iter()
        .zip(values)
        .map(|(t, v)| match v {
            Ok(v) => {
                let d = (&v - &mean).abs_f64();
                max_deviation = max_deviation.max(d);
                ScanPoint {
                    t: t.to_decimal(12),
                    value: Some(v.to_decimal(cfg.digits as usize)),
                    deviation: Some(d),
                    error: None,
                    t_value: t.clone(),
                    value_exact: Some(v),
                }
            }
            Err(e) => ScanPoint {
                t: t.to_decimal(12),
                value: None,
                deviation: None,
                error: Some(e.to_string()),
                t_value: t.clone(),
                value_exact: None,
            },
        })
        .collect();
    Ok(RigidityReport {
        max_deviation,
        mean_value: mean.to_decimal(cfg.digits as usize),
        mean_exact: mean,
        points,
        warnings,
    })
}

/// Rectangle in the t-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchBox {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox {
            re: (0.0, 1.0),
            im: (0.0, 1.0),
        }
    }
}

impl SearchBox {
    fn contains(&self, t: &PrecisionComplex) -> bool {
        let (x, y) = (t.re_f64(), t.im_f64());
        let eps = 1e-12;
        x >= self.re.0 - eps && x <= self.re.1 + eps && y >= self.im.0 - eps && y <= self.im.1 + eps
    }
}

/// A lattice point `(a + bτ)/m` where some `θ(x + mt)` can vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolePoint {
    pub m: i64,
    pub a: i64,
    pub b: i64,
    pub t: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Probe {
    pub t: String,
    pub magnitude: f64,
    pub blowup: bool,
    pub explained: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleReport {
    pub predicted: Vec<PolePoint>,
    pub probes: Vec<Probe>,
    pub blowups: usize,
    pub unexplained: usize,
}

pub const BLOWUP_THRESHOLD: f64 = 1e10;
const EXPLAIN_RADIUS: f64 = 1e-4;
const PROBE_DENOMINATORS: i64 = 6;

/// Points `(a + bτ)/m` in the box for `m` in `1..=m_max`.
fn lattice_points(m: i64, tau: &Tau, bx: &SearchBox, prec: u32) -> Vec<(i64, i64, PrecisionComplex)> {
    let m = m.abs();
    let (tr, ti) = (tau.value().re_f64(), tau.value().im_f64());
    let b_lo = (bx.im.0 * m as f64 / ti).floor() as i64 - 1;
    let b_hi = (bx.im.1 * m as f64 / ti).ceil() as i64 + 1;
    let mut out = Vec::new();
    for b in b_lo..=b_hi {
        let a_lo = (bx.re.0 * m as f64 - b as f64 * tr).floor() as i64 - 1;
        let a_hi = (bx.re.1 * m as f64 - b as f64 * tr).ceil() as i64 + 1;
        for a in a_lo..=a_hi {
            let t = (&PrecisionComplex::from_i64(a, prec) + &tau.value().mul_i64(b)).div_i64(m);
            if bx.contains(&t) {
                out.push((a, b, t));
            }
        }
    }
    out
}

/// Predicted pole points from the normal rotations, cross-checked by
/// evaluating `|L|` just off every point `(a + bτ)/M`, `M ≤ 6`.
/// Needs at least 30 digits.
pub fn pole_scan(data: &EquivariantData, tau: &Tau, bx: &SearchBox, cfg: &PrecisionConfig) -> Result<PoleReport> {
    data.validate()?;
    let prec = cfg.bits();
    let tau = tau.with_prec(prec);
    let mut rotations: Vec<i64> = data
        .components
        .iter()
        .flat_map(|c| c.normal.iter().map(|n| n.m.abs()))
        .collect();
    rotations.sort_unstable();
    rotations.dedup();

    let mut predicted = Vec::new();
    let mut predicted_t = Vec::new();
    for &m in &rotations {
        for (a, b, t) in lattice_points(m, &tau, bx, prec) {
            predicted.push(PolePoint {
                m,
                a,
                b,
                t: t.to_decimal(12),
            });
            predicted_t.push(t);
        }
    }

    let mut candidates: Vec<PrecisionComplex> = Vec::new();
    for big_m in 1..=PROBE_DENOMINATORS {
        for (_, _, t) in lattice_points(big_m, &tau, bx, prec) {
            if !candidates.iter().any(|c| (c - &t).abs_f64() < 1e-12) {
                candidates.push(t);
            }
        }
    }
    // Half the working digits: far enough in to expose simple poles, far
    // enough out that cancelling poles still sum accurately.
    let step = PrecisionComplex::from_i64(10, prec).powi(-(cfg.digits as i32 / 2));
    let offset = &step * &(&PrecisionComplex::from_rational(10, 7, prec) + &PrecisionComplex::from_rational(5, 7, prec).mul_i());
    let probes: Vec<Probe> = with_thread_cap(|| {
        candidates
            .par_iter()
            .map(|c| {
                let t = c + &offset;
                let magnitude = match lefschetz_parts(data, &t, &tau, cfg) {
                    Ok(p) => sum(&p, prec).abs_f64(),
                    Err(_) => f64::INFINITY,
                };
                let blowup = !(magnitude <= BLOWUP_THRESHOLD);
                let explained = predicted_t.iter().any(|p| (p - c).abs_f64() < EXPLAIN_RADIUS);
                Probe {
                    t: c.to_decimal(12),
                    magnitude,
                    blowup,
                    explained,
                }
            })
            .collect()
    });
    let blowups = probes.iter().filter(|p| p.blowup).count();
    let unexplained = probes.iter().filter(|p| p.blowup && !p.explained).count();
    Ok(PoleReport {
        predicted,
        probes,
        blowups,
        unexplained,
    })
}
