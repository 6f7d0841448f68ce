//! Witten bundles as q-series of virtual torus representations.
//!
//! A bundle is a list of weighted line summands. Exterior and symmetric power
//! operations are expanded eagerly into multisets of weights, so every
//! q-coefficient is an integer combination of characters. Chern characters
//! are taken only at the very end. Nothing here touches theta functions.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{Algebra, Ring};
use crate::error::{Error, Result};
use crate::jet::{FormVariable, Jet, Monomial};
use crate::precision::PrecisionComplex;
use crate::qseries::{product_expand, QExponent, QSeries};

/// Integer combination of degree-2 Chern-root variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootForm(BTreeMap<String, i64>);

impl RootForm {
    pub fn zero() -> Self {
        RootForm(BTreeMap::new())
    }

    pub fn var(name: impl Into<String>) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.into(), 1);
        RootForm(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&String, &i64)> {
        self.0.iter()
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut out = BTreeMap::new();
        if k != 0 {
            for (v, c) in &self.0 {
                out.insert(v.clone(), c * k);
            }
        }
        RootForm(out)
    }

    pub fn add(&self, other: &RootForm) -> Self {
        let mut out = self.0.clone();
        for (v, c) in &other.0 {
            let e = out.entry(v.clone()).or_insert(0);
            *e += c;
            if *e == 0 {
                out.remove(v);
            }
        }
        RootForm(out)
    }

    /// `scale · Σ c_v v` as a jet.
    pub fn to_jet(&self, scale: &PrecisionComplex, cap: u32, prec: u32) -> Jet {
        Jet::from_terms(
            self.0
                .iter()
                .map(|(v, c)| (Monomial::var(FormVariable::root(v.clone())), scale.mul_i64(*c))),
            cap,
            prec,
        )
    }
}

impl RootForm {
    /// Parses forms such as `y`, `-x1`, `2*y+x1` or `0`.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Input(format!("bad root form '{text}'"));
        if s.is_empty() {
            return Err(bad());
        }
        if s == "0" {
            return Ok(RootForm::zero());
        }
        let mut out = RootForm::zero();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let (coeff, name) = match term.split_once('*') {
                Some((c, n)) => (c.parse::<i64>().map_err(|_| bad())?, n),
                None => (1, term),
            };
            let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(bad());
            }
            out = out.add(&RootForm::var(name).scaled(sign * coeff));
        }
        Ok(out)
    }
}

impl std::fmt::Display for RootForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (v, c)) in self.0.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            match c.abs() {
                1 => write!(f, "{sign}{v}")?,
                a => write!(f, "{sign}{a}*{v}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSummand {
    pub root: RootForm,
    pub rotation: i64,
    pub multiplicity: u32,
}

impl WeightedSummand {
    pub fn new(root: RootForm, rotation: i64, multiplicity: u32) -> Self {
        WeightedSummand {
            root,
            rotation,
            multiplicity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reality {
    Complex,
    /// Each summand stands for a `±` pair of complex lines.
    RealPair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantBundle {
    pub summands: Vec<WeightedSummand>,
    pub reality: Reality,
}

impl EquivariantBundle {
    pub fn new(summands: Vec<WeightedSummand>, reality: Reality) -> Self {
        EquivariantBundle { summands, reality }
    }

    pub fn empty(reality: Reality) -> Self {
        EquivariantBundle::new(Vec::new(), reality)
    }

    /// Complex rank (twice the pair count for real-pair bundles).
    pub fn rank(&self) -> u32 {
        let r: u32 = self.summands.iter().map(|s| s.multiplicity).sum();
        match self.reality {
            Reality::Complex => r,
            Reality::RealPair => 2 * r,
        }
    }

    pub fn pair_count(&self) -> u32 {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    /// Weights of the complex lines, with multiplicity.
    pub fn letters(&self) -> Vec<Weight> {
        let mut out = Vec::new();
        for s in &self.summands {
            let w = Weight::of(&s.root, s.rotation);
            for _ in 0..s.multiplicity {
                out.push(w.clone());
                if self.reality == Reality::RealPair {
                    out.push(w.neg());
                }
            }
        }
        out
    }
}

/// A torus weight `(root form, rotation)` stored in half units, so that
/// spinor weights `±w/2` are representable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub roots: RootForm,
    pub rotation: i64,
}

impl Weight {
    pub fn zero() -> Self {
        Weight::default()
    }

    /// The weight of a line with the given root and rotation.
    pub fn of(root: &RootForm, rotation: i64) -> Self {
        Weight {
            roots: root.scaled(2),
            rotation: 2 * rotation,
        }
    }

    /// Half of the weight of a line.
    pub fn half_of(root: &RootForm, rotation: i64) -> Self {
        Weight {
            roots: root.clone(),
            rotation,
        }
    }

    pub fn add(&self, other: &Weight) -> Self {
        Weight {
            roots: self.roots.add(&other.roots),
            rotation: self.rotation + other.rotation,
        }
    }

    pub fn neg(&self) -> Self {
        Weight {
            roots: self.roots.scaled(-1),
            rotation: -self.rotation,
        }
    }

    pub fn times(&self, k: i64) -> Self {
        Weight {
            roots: self.roots.scaled(k),
            rotation: self.rotation * k,
        }
    }
}

/// Integer combination of weights: an element of the representation ring.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Character(BTreeMap<Weight, i64>);

impl Character {
    pub fn zero() -> Self {
        Character(BTreeMap::new())
    }

    pub fn one() -> Self {
        Character::weight(Weight::zero(), 1)
    }

    pub fn weight(w: Weight, count: i64) -> Self {
        let mut c = Character::zero();
        c.add_weight(w, count);
        c
    }

    pub fn integer(n: i64) -> Self {
        Character::weight(Weight::zero(), n)
    }

    pub fn add_weight(&mut self, w: Weight, count: i64) {
        if count == 0 {
            return;
        }
        let e = self.0.entry(w.clone()).or_insert(0);
        *e += count;
        if *e == 0 {
            self.0.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &i64)> {
        self.0.iter()
    }

    /// Virtual dimension: the sum of all multiplicities.
    pub fn rank(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut out = Character::zero();
        for (w, c) in &self.0 {
            out.add_weight(w.clone(), c * k);
        }
        out
    }
}

impl Ring for Character {
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.0 {
            out.add_weight(w.clone(), *c);
        }
        out
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scaled(-1))
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Character::zero();
        for (wa, ca) in &self.0 {
            for (wb, cb) in &rhs.0 {
                out.add_weight(wa.add(wb), ca * cb);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        self.scaled(-1)
    }

    fn zero_like(&self) -> Self {
        Character::zero()
    }

    fn one_like(&self) -> Self {
        Character::one()
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Only `±e^w` is invertible.
    fn try_inverse(&self) -> Option<Self> {
        if self.0.len() != 1 {
            return None;
        }
        let (w, c) = self.0.iter().next().expect("one term");
        match c {
            1 | -1 => Some(Character::weight(w.neg(), *c)),
            _ => None,
        }
    }
}

pub type VirtualBundleSeries = QSeries<Character>;

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `∧^k(E)` for `k = 0..=max_k`, one subset of lines at a time.
fn exterior_powers(letters: &[Weight], max_k: usize) -> Vec<Character> {
    let mut powers = vec![Character::zero(); max_k + 1];
    powers[0] = Character::one();
    for w in letters {
        let line = Character::weight(w.clone(), 1);
        for k in (1..=max_k).rev() {
            let add = powers[k - 1].mul(&line);
            powers[k] = powers[k].add(&add);
        }
    }
    powers
}

/// `S^k(E)` for `k = 0..=max_k`, one multiset of lines at a time.
fn symmetric_powers(letters: &[Weight], max_k: usize) -> Vec<Character> {
    let mut powers = vec![Character::zero(); max_k + 1];
    powers[0] = Character::one();
    for w in letters {
        let mut next = vec![Character::zero(); max_k + 1];
        for k in 0..=max_k {
            for j in 0..=k {
                if powers[k - j].is_zero() {
                    continue;
                }
                let term = powers[k - j].mul(&Character::weight(w.times(j as i64), 1));
                next[k] = next[k].add(&term);
            }
        }
        powers = next;
    }
    powers
}

/// Coefficients of `(1 + t)^{-r}` or `(1 - t)^{r}` up to `t^max_k`.
fn rank_correction(rank: i64, exterior: bool, max_k: usize) -> Vec<i64> {
    (0..=max_k as i64)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            if !exterior {
                sign * binomial(rank, k)
            } else if rank == 0 {
                i64::from(k == 0)
            } else {
                sign * binomial(rank + k - 1, k)
            }
        })
        .collect()
}

fn reduced_operation(
    letters: &[Weight],
    exterior: bool,
    sign: i64,
    shift: QExponent,
    truncation: QExponent,
) -> VirtualBundleSeries {
    assert!(shift.0 > 0, "operation variable must have positive q-order");
    let max_k = (truncation.0 / shift.0) as usize;
    let powers = if exterior {
        exterior_powers(letters, max_k)
    } else {
        symmetric_powers(letters, max_k)
    };
    let correction = rank_correction(letters.len() as i64, exterior, max_k);
    let mut out = QSeries::zero(&Character::zero(), truncation);
    for k in 0..=max_k {
        let mut coeff = Character::zero();
        for j in 0..=k {
            if correction[k - j] != 0 {
                coeff = coeff.add(&powers[j].scaled(correction[k - j]));
            }
        }
        let s = if k % 2 == 1 { sign } else { 1 };
        out.add_term(QExponent(k as u32 * shift.0), coeff.scaled(s));
    }
    out
}

/// `∧_{±q^shift}(Ẽ)` with `Ẽ = E - rank E`.
pub fn lambda_series(bundle: &EquivariantBundle, sign: i64, shift: QExponent, truncation: QExponent) -> VirtualBundleSeries {
    reduced_operation(&bundle.letters(), true, sign, shift, truncation)
}

/// `S_{±q^shift}(Ẽ)` with `Ẽ = E - rank E`.
pub fn symmetric_series(bundle: &EquivariantBundle, sign: i64, shift: QExponent, truncation: QExponent) -> VirtualBundleSeries {
    reduced_operation(&bundle.letters(), false, sign, shift, truncation)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WittenCase {
    Theta,
    ThetaStar,
    Q1,
    Q2,
    Q3,
    QAll,
}

fn tensor_over_n(
    letters: &[Weight],
    exterior: bool,
    sign: i64,
    half: bool,
    truncation: QExponent,
) -> Result<VirtualBundleSeries> {
    let shift = |n: usize| {
        if half {
            QExponent::half(n as u32)
        } else {
            QExponent::integer(n as u32)
        }
    };
    product_expand(
        |n| Ok(reduced_operation(letters, exterior, sign, shift(n), truncation)),
        shift,
        &Character::zero(),
        truncation,
    )
}

/// `Δ(V)` as `∏_pairs (e^{z/2} + e^{-z/2})`.
pub fn spinor_character(v: &EquivariantBundle) -> Character {
    let mut acc = Character::one();
    for s in &v.summands {
        let half = Weight::half_of(&s.root, s.rotation);
        let pair = Character::weight(half.clone(), 1).add(&Character::weight(half.neg(), 1));
        for _ in 0..s.multiplicity {
            acc = acc.mul(&pair);
        }
    }
    acc
}

/// Θ, Θ*, Q1, Q2, Q3 or Q1⊗Q2⊗Q3 from tangent, line and `V` data.
pub fn witten_bundle(
    case: WittenCase,
    tangent: &EquivariantBundle,
    line: &WeightedSummand,
    v: &EquivariantBundle,
    truncation: QExponent,
) -> Result<VirtualBundleSeries> {
    let complexified = |b: &EquivariantBundle, what: &str| -> Result<Vec<Weight>> {
        if b.reality != Reality::RealPair {
            return Err(Error::Case(format!("{what} must be given as real root pairs")));
        }
        Ok(b.letters())
    };
    let line_letters = EquivariantBundle::new(vec![WeightedSummand::new(line.root.clone(), line.rotation, 1)], Reality::RealPair)
        .letters();
    match case {
        WittenCase::Theta => {
            if line.multiplicity != 1 {
                return Err(Error::Case("the spin^c line must have multiplicity 1".into()));
            }
            let t = complexified(tangent, "tangent bundle")?;
            let mut acc = tensor_over_n(&t, false, 1, false, truncation)?;
            acc = acc.mul(&tensor_over_n(&line_letters, true, 1, false, truncation)?);
            acc = acc.mul(&tensor_over_n(&line_letters, true, -1, true, truncation)?);
            acc = acc.mul(&tensor_over_n(&line_letters, true, 1, true, truncation)?);
            Ok(acc)
        }
        WittenCase::ThetaStar => {
            if line.multiplicity != 1 {
                return Err(Error::Case("the spin^c line must have multiplicity 1".into()));
            }
            let t = complexified(tangent, "tangent bundle")?;
            let acc = tensor_over_n(&t, false, 1, false, truncation)?;
            Ok(acc.mul(&tensor_over_n(&line_letters, true, -1, false, truncation)?))
        }
        WittenCase::Q1 => {
            let vl = complexified(v, "V")?;
            let delta = QSeries::constant(spinor_character(v), truncation);
            Ok(delta.mul(&tensor_over_n(&vl, true, 1, false, truncation)?))
        }
        WittenCase::Q2 => {
            let vl = complexified(v, "V")?;
            tensor_over_n(&vl, true, -1, true, truncation)
        }
        WittenCase::Q3 => {
            let vl = complexified(v, "V")?;
            tensor_over_n(&vl, true, 1, true, truncation)
        }
        WittenCase::QAll => {
            let q1 = witten_bundle(WittenCase::Q1, tangent, line, v, truncation)?;
            let q2 = witten_bundle(WittenCase::Q2, tangent, line, v, truncation)?;
            let q3 = witten_bundle(WittenCase::Q3, tangent, line, v, truncation)?;
            Ok(q1.mul(&q2).mul(&q3))
        }
    }
}

/// How weights become Chern characters: `e^{root_scale·root + 2πi·rotation·t}`.
#[derive(Clone, Debug)]
pub struct ChernNormalization {
    pub root_scale: PrecisionComplex,
    pub t: Option<PrecisionComplex>,
    pub cap: u32,
    pub prec: u32,
}

impl ChernNormalization {
    /// Roots normalized so that `ch = e^{2πi(x + m t)}`.
    pub fn equivariant(t: PrecisionComplex, cap: u32, prec: u32) -> Self {
        ChernNormalization {
            root_scale: PrecisionComplex::two_pi_i(prec),
            t: Some(t),
            cap,
            prec,
        }
    }

    /// Roots are the Chern roots themselves; rotations must vanish.
    pub fn plain(cap: u32, prec: u32) -> Self {
        ChernNormalization {
            root_scale: PrecisionComplex::one(prec),
            t: None,
            cap,
            prec,
        }
    }
}

/// Chern character of a single character.
pub fn ch_character(c: &Character, norm: &ChernNormalization, cache: &mut HashMap<Weight, Jet>) -> Result<Jet> {
    let mut acc = Jet::zero(norm.cap, norm.prec);
    for (w, count) in c.terms() {
        let jet = match cache.get(w) {
            Some(j) => j.clone(),
            None => {
                let j = weight_ch(w, norm)?;
                cache.insert(w.clone(), j.clone());
                j
            }
        };
        acc = acc.add(&jet.scale(&PrecisionComplex::from_i64(*count, norm.prec)));
    }
    Ok(acc)
}

fn weight_ch(w: &Weight, norm: &ChernNormalization) -> Result<Jet> {
    let half_scale = norm.root_scale.div_i64(2);
    let mut exponent = w.roots.to_jet(&half_scale, norm.cap, norm.prec);
    if w.rotation != 0 {
        let t = norm
            .t
            .as_ref()
            .ok_or_else(|| Error::Case("nonzero rotation in a non-equivariant Chern character".into()))?;
        let phase = (&(&PrecisionComplex::pi(norm.prec).mul_i() * t)).mul_i64(w.rotation);
        exponent = exponent.add(&Jet::constant(phase, norm.cap));
    }
    Ok(exponent.exp())
}

/// `ch_g` of every q-coefficient.
pub fn ch_equivariant(series: &VirtualBundleSeries, norm: &ChernNormalization) -> Result<QSeries<Jet>> {
    let mut cache = HashMap::new();
    let proto = Jet::zero(norm.cap, norm.prec);
    let mut out = QSeries::zero(&proto, series.truncation());
    for (e, c) in series.terms() {
        out.add_term(e, ch_character(c, norm, &mut cache)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn line(rot: i64) -> EquivariantBundle {
        EquivariantBundle::new(vec![WeightedSummand::new(RootForm::zero(), rot, 1)], Reality::Complex)
    }

    fn scalar_ch(series: &VirtualBundleSeries, t: &str) -> QSeries<PrecisionComplex> {
        let norm = ChernNormalization::equivariant(PrecisionComplex::parse(t, P).unwrap(), 0, P);
        ch_equivariant(series, &norm)
            .unwrap()
            .map(&PrecisionComplex::zero(P), |j| j.constant_term())
    }

    #[test]
    fn root_forms_round_trip() {
        for text in ["0", "y", "-x1", "2*y+x1", "x-3*z_2"] {
            let r = RootForm::parse(text).unwrap();
            assert_eq!(RootForm::parse(&r.to_string()).unwrap(), r);
        }
        assert_eq!(RootForm::parse("y-y").unwrap(), RootForm::zero());
        assert!(RootForm::parse("2y").is_err());
        assert!(RootForm::parse("").is_err());
    }

    #[test]
    fn reduced_operations_start_at_one() {
        let b = EquivariantBundle::new(
            vec![WeightedSummand::new(RootForm::var("x"), 2, 2), WeightedSummand::new(RootForm::zero(), -1, 1)],
            Reality::RealPair,
        );
        let trunc = QExponent::integer(3);
        for s in [
            lambda_series(&b, 1, QExponent::integer(1), trunc),
            lambda_series(&b, -1, QExponent::half(1), trunc),
            symmetric_series(&b, 1, QExponent::integer(2), trunc),
        ] {
            assert_eq!(s.coefficient(QExponent(0)), Some(&Character::one()));
            // rank reduction: every higher coefficient has virtual rank 0
            for (e, c) in s.terms() {
                if e.0 > 0 {
                    assert_eq!(c.rank(), 0);
                }
            }
        }
    }

    #[test]
    fn lambda_of_line_against_generating_function() {
        // ∧_q(L - 1) = (1 + e q)/(1 + q) = 1 + (e-1)q - (e-1)q^2 + (e-1)q^3
        let l = line(1);
        let trunc = QExponent::integer(3);
        let s = lambda_series(&l, 1, QExponent::integer(1), trunc);
        let e_minus_1 = Character::weight(Weight::of(&RootForm::zero(), 1), 1).sub(&Character::one());
        let mut expected = QSeries::one(&Character::zero(), trunc);
        for (k, sign) in [(1, 1), (2, -1), (3, 1)] {
            expected.add_term(QExponent::integer(k), e_minus_1.scaled(sign));
        }
        assert!(s == expected);
    }

    #[test]
    fn symmetric_inverts_exterior() {
        let b = EquivariantBundle::new(
            vec![WeightedSummand::new(RootForm::zero(), 1, 1), WeightedSummand::new(RootForm::var("x"), -2, 1)],
            Reality::Complex,
        );
        let trunc = QExponent::integer(5);
        let s = symmetric_series(&b, 1, QExponent::integer(1), trunc);
        let l = lambda_series(&b, -1, QExponent::integer(1), trunc);
        assert!(s.mul(&l) == QSeries::one(&Character::zero(), trunc));
        assert!(l.invert().unwrap() == s);
    }

    #[test]
    fn half_shift_pair_gives_minus_q_squared() {
        // ∧_{-q^{1/2}}(E) ∧_{q^{1/2}}(E) = ∧_{-q}(E ⊗ E-squared-line)? check on a line:
        // (1 - e s)(1 + e s) = 1 - e^2 s^2 with s = q^{1/2}; tilde factors give (1 - q)
        let l = line(2);
        let trunc = QExponent::integer(2);
        let a = lambda_series(&l, -1, QExponent::half(1), trunc);
        let b = lambda_series(&l, 1, QExponent::half(1), trunc);
        let e2 = EquivariantBundle::new(vec![WeightedSummand::new(RootForm::zero(), 4, 1)], Reality::Complex);
        let expected = lambda_series(&e2, -1, QExponent::integer(1), trunc);
        assert!(a.mul(&b) == expected);
    }

    #[test]
    fn theta_at_q0_is_trivial() {
        let tangent = EquivariantBundle::new(vec![WeightedSummand::new(RootForm::var("y"), 0, 1)], Reality::RealPair);
        let l = WeightedSummand::new(RootForm::var("y"), 0, 1);
        for case in [WittenCase::Theta, WittenCase::ThetaStar] {
            let s = witten_bundle(case, &tangent, &l, &EquivariantBundle::empty(Reality::RealPair), QExponent::integer(2))
                .unwrap();
            assert_eq!(s.coefficient(QExponent(0)), Some(&Character::one()));
        }
        let q1 = witten_bundle(
            WittenCase::Q1,
            &tangent,
            &l,
            &EquivariantBundle::empty(Reality::RealPair),
            QExponent::integer(3),
        )
        .unwrap();
        assert!(q1 == QSeries::one(&Character::zero(), QExponent::integer(3)));
    }

    #[test]
    fn complex_v_is_case_error() {
        let l = WeightedSummand::new(RootForm::zero(), 1, 1);
        let r = witten_bundle(
            WittenCase::Q2,
            &EquivariantBundle::empty(Reality::RealPair),
            &l,
            &EquivariantBundle::empty(Reality::Complex),
            QExponent::integer(1),
        );
        assert!(matches!(r, Err(Error::Case(_))));
    }

    #[test]
    fn ch_of_lambda_line_matches_scalar_expansion() {
        // ch ∧_q(L-1) with L of rotation m: (1 + E q)/(1 + q) with E = e^{2πimt}
        let m = 2;
        let t = "0.13+0.07i";
        let trunc = QExponent::integer(2);
        let got = scalar_ch(&lambda_series(&line(m), 1, QExponent::integer(1), trunc), t);
        let tt = PrecisionComplex::parse(t, P).unwrap();
        let e = (&PrecisionComplex::two_pi_i(P) * &tt.mul_i64(m)).exp();
        let one = PrecisionComplex::one(P);
        let d = &e - &one;
        let mut expected = QSeries::constant(one.clone(), trunc);
        expected.add_term(QExponent::integer(1), d.clone());
        expected.add_term(QExponent::integer(2), -&d);
        assert!(got.distance(&expected) < 1e-55);
    }

    #[test]
    fn spinor_character_of_one_pair() {
        // e^{πint}e^{z/2} + e^{-πint}e^{-z/2} with z normalized as 2πi·z
        let v = EquivariantBundle::new(vec![WeightedSummand::new(RootForm::zero(), 3, 1)], Reality::RealPair);
        let c = spinor_character(&v);
        let t = PrecisionComplex::parse("0.21+0.1i", P).unwrap();
        let norm = ChernNormalization::equivariant(t.clone(), 0, P);
        let val = ch_character(&c, &norm, &mut HashMap::new()).unwrap().constant_term();
        let phase = (&PrecisionComplex::pi(P).mul_i() * &t).mul_i64(3);
        let expected = &phase.exp() + &(-&phase).exp();
        assert!((&val - &expected).abs_f64() < 1e-55);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(rank_correction(2, true, 3), vec![1, -2, 3, -4]);
        assert_eq!(rank_correction(2, false, 3), vec![1, -2, 1, 0]);
        assert_eq!(rank_correction(0, true, 2), vec![1, 0, 0]);
    }
}
