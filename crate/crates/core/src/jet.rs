//! Truncated graded-commutative polynomials in named form variables.
//!
//! A [`Jet`] models a cohomology class on a fixed component: every variable
//! carries a cohomological degree and terms above the cap are dropped. Even
//! variables commute; at most one odd factor may appear in any monomial, so
//! anticommutation signs never arise.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Algebra, Ring};
use crate::error::{Error, Result};
use crate::precision::{factorial, PrecisionComplex};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormVariable {
    pub name: String,
    pub degree: u32,
}

impl FormVariable {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        FormVariable {
            name: name.into(),
            degree,
        }
    }

    /// A Chern root: degree 2.
    pub fn root(name: impl Into<String>) -> Self {
        FormVariable::new(name, 2)
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Product of variables with positive exponents, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(FormVariable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: FormVariable) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(mut powers: Vec<(FormVariable, u32)>) -> Self {
        powers.retain(|(_, e)| *e > 0);
        powers.sort();
        let mut out: Vec<(FormVariable, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match out.last_mut() {
                Some((last, le)) if *last == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.degree * e).sum()
    }

    pub fn odd_factors(&self) -> u32 {
        self.0.iter().filter(|(v, _)| v.is_odd()).map(|(_, e)| *e).sum()
    }

    pub fn powers(&self) -> &[(FormVariable, u32)] {
        &self.0
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0.iter().find(|(v, _)| v.name == name).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (&self.0[i], &other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0.clone(), a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes one power of `name`, if present.
    pub fn divide_by(&self, name: &str) -> Option<Monomial> {
        let idx = self.0.iter().position(|(v, _)| v.name == name)?;
        let mut out = self.0.clone();
        if out[idx].1 == 1 {
            out.remove(idx);
        } else {
            out[idx].1 -= 1;
        }
        Some(Monomial(out))
    }

    /// Parses `1`, `y`, `y^2`, `xi*y^2*x1`; `degree_of` supplies variable degrees.
    pub fn parse(text: &str, degree_of: impl Fn(&str) -> u32) -> Result<Monomial> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut powers = Vec::new();
        for factor in s.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<u32>()
                        .map_err(|_| Error::Input(format!("bad exponent in monomial '{text}'")))?,
                ),
                None => (factor, 1),
            };
            let valid = !name.is_empty()
                && name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid || exp == 0 {
                return Err(Error::Input(format!("bad monomial '{text}'")));
            }
            powers.push((FormVariable::new(name, degree_of(name)), exp));
        }
        Ok(Monomial::from_powers(powers))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.name.clone() } else { format!("{}^{e}", v.name) })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[derive(Clone, PartialEq)]
pub struct Jet {
    cap: u32,
    prec: u32,
    terms: BTreeMap<Monomial, PrecisionComplex>,
}

impl Jet {
    pub fn zero(cap: u32, prec: u32) -> Self {
        Jet {
            cap,
            prec,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: PrecisionComplex, cap: u32) -> Self {
        let prec = c.prec();
        let mut j = Jet::zero(cap, prec);
        j.insert(Monomial::one(), c);
        j
    }

    pub fn one(cap: u32, prec: u32) -> Self {
        Jet::constant(PrecisionComplex::one(prec), cap)
    }

    pub fn variable(v: FormVariable, cap: u32, prec: u32) -> Self {
        Jet::monomial(Monomial::var(v), PrecisionComplex::one(prec), cap)
    }

    pub fn monomial(m: Monomial, c: PrecisionComplex, cap: u32) -> Self {
        let mut j = Jet::zero(cap, c.prec());
        j.insert(m, c);
        j
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, PrecisionComplex)>, cap: u32, prec: u32) -> Self {
        let mut j = Jet::zero(cap, prec);
        for (m, c) in terms {
            j.insert(m, c);
        }
        j
    }

    fn insert(&mut self, m: Monomial, c: PrecisionComplex) {
        if m.degree() > self.cap || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &PrecisionComplex)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> PrecisionComplex {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| PrecisionComplex::zero(self.prec))
    }

    pub fn constant_term(&self) -> PrecisionComplex {
        self.coefficient(&Monomial::one())
    }

    pub fn nilpotent_part(&self) -> Jet {
        let mut j = self.clone();
        j.terms.remove(&Monomial::one());
        j
    }

    /// Part of pure degree `d`.
    pub fn degree_part(&self, d: u32) -> Jet {
        Jet {
            cap: self.cap,
            prec: self.prec,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn has_odd_terms(&self) -> bool {
        self.terms.keys().any(|m| m.odd_factors() > 0)
    }

    /// Every term contains exactly one odd factor.
    pub fn is_purely_odd(&self) -> bool {
        self.terms.keys().all(|m| m.odd_factors() == 1)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference against `other`.
    pub fn distance(&self, other: &Jet) -> f64 {
        Ring::sub(self, other).max_abs()
    }

    pub fn with_cap(&self, cap: u32) -> Jet {
        let mut j = Jet::zero(cap, self.prec);
        for (m, c) in &self.terms {
            j.insert(m.clone(), c.clone());
        }
        j
    }

    pub fn map_coefficients(&self, f: impl Fn(&PrecisionComplex) -> PrecisionComplex) -> Jet {
        Jet::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))), self.cap, self.prec)
    }

    /// Product; fails if a monomial would contain two odd factors.
    pub fn try_mul(&self, rhs: &Jet) -> Result<Jet> {
        let cap = self.cap.min(rhs.cap);
        let mut out = Jet::zero(cap, self.prec.max(rhs.prec));
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > cap {
                continue;
            }
            for (mb, cb) in &rhs.terms {
                if da + mb.degree() > cap {
                    continue;
                }
                if ma.odd_factors() + mb.odd_factors() > 1 {
                    return Err(Error::Grading(format!("product of two odd factors {ma} and {mb}")));
                }
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Jet {
        let mut acc = Jet::one(self.cap, self.prec);
        for _ in 0..k {
            acc = Ring::mul(&acc, self);
        }
        acc
    }

    /// Smallest degree among non-constant terms.
    pub fn min_positive_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).filter(|d| *d > 0).min()
    }

    /// Largest `k` with `n^k` possibly nonzero, for the nilpotent part `n`.
    pub fn nilpotency_order(&self) -> usize {
        match self.nilpotent_part().min_positive_degree() {
            Some(d) => (self.cap / d) as usize,
            None => 0,
        }
    }

    /// `Σ_k coeffs[k] · n^k` for a jet `n` without constant term.
    pub fn compose_taylor(coeffs: &[PrecisionComplex], n: &Jet) -> Result<Jet> {
        let order = n.nilpotency_order();
        if coeffs.len() < order + 1 {
            return Err(Error::Arity {
                needed: order + 1,
                got: coeffs.len(),
            });
        }
        let prec = coeffs.first().map_or(n.prec, |c| c.prec()).max(n.prec);
        // Horner
        let mut acc = Jet::constant(coeffs[order].clone(), n.cap).with_prec_floor(prec);
        for k in (0..order).rev() {
            acc = Ring::mul(&acc, n);
            acc.insert(Monomial::one(), coeffs[k].clone());
        }
        Ok(acc)
    }

    fn with_prec_floor(mut self, prec: u32) -> Jet {
        self.prec = self.prec.max(prec);
        self
    }

    /// `f(self)` for `f` given by its Taylor coefficients at the constant term,
    /// produced by `taylor(a, order)`.
    pub fn apply(&self, taylor: impl Fn(&PrecisionComplex, usize) -> Vec<PrecisionComplex>) -> Jet {
        let n = self.nilpotent_part();
        let coeffs = taylor(&self.constant_term(), n.nilpotency_order());
        Jet::compose_taylor(&coeffs, &n).expect("taylor closure returned enough coefficients")
    }

    pub fn exp(&self) -> Jet {
        self.apply(|a, order| {
            let ea = a.exp();
            (0..=order).map(|k| &ea / &factorial(k, a.prec())).collect()
        })
    }

    pub fn sin(&self) -> Jet {
        self.apply(|a, order| trig_taylor(a, order, false))
    }

    pub fn cos(&self) -> Jet {
        self.apply(|a, order| trig_taylor(a, order, true))
    }

    /// `1/self`, if the constant term is nonzero.
    pub fn inverse(&self) -> Option<Jet> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return None;
        }
        let inv = c0.recip();
        let order = self.nilpotency_order();
        // 1/(c0 + n) = Σ (-1)^k n^k / c0^{k+1}
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut p = inv.clone();
        for k in 0..=order {
            coeffs.push(if k % 2 == 0 { p.clone() } else { -&p });
            p = &p * &inv;
        }
        Some(Jet::compose_taylor(&coeffs, &self.nilpotent_part()).expect("enough coefficients"))
    }

    /// Coefficient of the first power of `var`: terms linear in `var` with
    /// that factor removed, at cap reduced by its degree.
    pub fn linear_coefficient(&self, var: &FormVariable) -> Jet {
        let cap = self.cap.saturating_sub(var.degree);
        Jet::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exponent(&var.name) == 1)
                .map(|(m, c)| (m.divide_by(&var.name).expect("contains var"), c.clone())),
            cap,
            self.prec,
        )
    }
}

fn trig_taylor(a: &PrecisionComplex, order: usize, cosine: bool) -> Vec<PrecisionComplex> {
    let (s, c) = (a.sin(), a.cos());
    let cycle = if cosine {
        [c.clone(), -&s, -&c, s.clone()]
    } else {
        [s.clone(), c.clone(), -&s, -&c]
    };
    (0..=order).map(|k| &cycle[k % 4] / &factorial(k, a.prec())).collect()
}

/// `Σ_k f^{(k)}(a)/k! · jet^k` from the derivative list `f(a), f'(a), …`.
pub fn compose_analytic(derivatives: &[PrecisionComplex], jet: &Jet) -> Result<Jet> {
    if !jet.constant_term().is_zero() {
        return Err(Error::Domain("compose_analytic needs a jet without constant term".into()));
    }
    let needed = 1 + (jet.cap() / 2) as usize;
    let needed = needed.max(jet.nilpotency_order() + 1);
    if derivatives.len() < needed {
        return Err(Error::Arity {
            needed,
            got: derivatives.len(),
        });
    }
    let coeffs: Vec<PrecisionComplex> = derivatives
        .iter()
        .enumerate()
        .map(|(k, d)| d / &factorial(k, d.prec()))
        .collect();
    Jet::compose_taylor(&coeffs, jet)
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let digits = f.precision().unwrap_or(20);
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("({})", c.to_decimal(digits))
                } else {
                    format!("({})·{m}", c.to_decimal(digits))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Ring for Jet {
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.with_cap(self.cap.min(rhs.cap));
        out.prec = self.prec.max(rhs.prec);
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    fn sub(&self, rhs: &Self) -> Self {
        Ring::add(self, &Ring::neg(rhs))
    }

    /// Panics on a product of two odd factors; use [`Jet::try_mul`] where
    /// odd data may meet.
    fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }

    fn neg(&self) -> Self {
        self.map_coefficients(|c| -c)
    }

    fn zero_like(&self) -> Self {
        Jet::zero(self.cap, self.prec)
    }

    fn one_like(&self) -> Self {
        Jet::one(self.cap, self.prec)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }
}

impl Algebra for Jet {
    fn scale(&self, c: &PrecisionComplex) -> Self {
        self.map_coefficients(|x| x * c)
    }
}

/// Integration over a fixed component: pairs top-degree monomials with
/// intersection numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationFunctional {
    pub top_degree: u32,
    pub pairings: BTreeMap<Monomial, PrecisionComplex>,
}

impl IntegrationFunctional {
    /// Evaluation at an isolated point.
    pub fn point(prec: u32) -> Self {
        let mut pairings = BTreeMap::new();
        pairings.insert(Monomial::one(), PrecisionComplex::one(prec));
        IntegrationFunctional { top_degree: 0, pairings }
    }

    pub fn new(top_degree: u32, pairings: BTreeMap<Monomial, PrecisionComplex>) -> Self {
        IntegrationFunctional { top_degree, pairings }
    }
}

/// Top-degree part of `jet` paired with `functional`; missing pairings read
/// as zero.
pub fn integrate(jet: &Jet, functional: &IntegrationFunctional) -> Result<PrecisionComplex> {
    if jet.cap() < functional.top_degree {
        return Err(Error::Grading(format!(
            "jet truncated at degree {} cannot be integrated in degree {}",
            jet.cap(),
            functional.top_degree
        )));
    }
    let mut acc = PrecisionComplex::zero(jet.prec());
    for (m, c) in jet.terms() {
        if m.degree() != functional.top_degree {
            continue;
        }
        if let Some(p) = functional.pairings.get(m) {
            acc += c * p;
        }
    }
    Ok(acc)
}
