use std::collections::BTreeMap;

use super::*;
use crate::algebra::Algebra;
use crate::jet::Monomial;

fn cfg() -> PrecisionConfig {
    PrecisionConfig::new(60).unwrap()
}

fn pc(s: &str) -> PrecisionComplex {
    PrecisionComplex::parse(s, cfg().bits()).unwrap()
}

fn cp1_point(m: i64, prec: u32) -> FixedComponent {
    FixedComponent::isolated(&[m], &[], m, prec)
}

fn odd_data(cap: u32, prec: u32) -> OddEData {
    let xi = FormVariable::new("xi", 1);
    let var = |n: &str| Jet::variable(FormVariable::root(n), cap, prec);
    let w = Jet::variable(xi.clone(), cap, prec);
    OddEData {
        n: 4,
        odd_variable: xi,
        trace_components: vec![
            TraceComponent { w: w.clone(), a: var("y") },
            TraceComponent {
                w: w.scale(&PrecisionComplex::from_i64(2, prec)),
                a: var("x1").add(&var("y")),
            },
        ],
        c3_is_zero: false,
    }
}

/// One tangent root `y`, normal roots `x1, x2, …`, odd top degree 3.
fn odd_component(normal: &[i64], v: &[i64], sigma: i64, prec: u32) -> FixedComponent {
    let degree = |n: &str| if n == "xi" { 1 } else { 2 };
    let mut pairings = BTreeMap::new();
    for (m, c) in [("xi*y", "1"), ("xi*x1", "0.5"), ("u*xi", "-0.25")] {
        pairings.insert(Monomial::parse(m, degree).unwrap(), PrecisionComplex::parse(c, prec).unwrap());
    }
    FixedComponent {
        s: 1,
        tangent_roots: vec![RootForm::var("y")],
        normal: normal
            .iter()
            .enumerate()
            .map(|(i, m)| NormalSummand {
                m: *m,
                roots: vec![RootForm::var(format!("x{}", i + 1))],
            })
            .collect(),
        v_parts: v
            .iter()
            .enumerate()
            .map(|(i, n)| VSummand {
                n: *n,
                roots: vec![RootForm::var(format!("z{}", i + 1))],
            })
            .collect(),
        u: RootForm::var("u"),
        sigma,
        functional: IntegrationFunctional::new(3, pairings),
    }
}

#[test]
fn cp1_fixed_point_contributes_one_half() {
    let cfg = cfg();
    let case = CaseSelector::new(DimensionClass::FourKPlusTwo, Lambda::Two, 0);
    let tau = Tau::parse("0.3+0.8i", cfg.bits()).unwrap();
    let half = PrecisionComplex::from_rational(1, 2, cfg.bits());
    for t in ["0.2+0.1i", "0.37+0.05i"] {
        for m in [1, -1] {
            let v = lefschetz_component(&case, &cp1_point(m, cfg.bits()), None, &pc(t), &tau, &cfg).unwrap();
            assert!((&v - &half).abs_f64() < 1e-45, "m = {m}: {v}");
        }
    }
}

#[test]
fn cp1_total_is_one() {
    let cfg = cfg();
    let p = cfg.bits();
    let data = EquivariantData::new(
        CaseSelector::new(DimensionClass::FourKPlusTwo, Lambda::One, 0),
        vec![cp1_point(1, p), cp1_point(-1, p)],
        None,
    );
    data.validate().unwrap();
    let tau = Tau::parse("i", p).unwrap();
    let v = lefschetz_total(&data, &pc("0.11+0.23i"), &tau, &cfg).unwrap();
    assert!((&v - &PrecisionComplex::one(p)).abs_f64() < 1e-45);
}

#[test]
fn pole_names_the_vanishing_theta() {
    let cfg = cfg();
    let p = cfg.bits();
    let data = EquivariantData::new(
        CaseSelector::new(DimensionClass::FourK, Lambda::Two, 1),
        vec![FixedComponent::isolated(&[1, 2], &[1, 1], 1, p)],
        None,
    );
    let tau = Tau::parse("i", p).unwrap();
    let err = lefschetz_total(&data, &pc("0.5"), &tau, &cfg).unwrap_err();
    match err {
        Error::Pole { kind, component, .. } => {
            assert_eq!(kind, "theta");
            assert_eq!(component, Some(0));
        }
        other => panic!("{other}"),
    }
}

#[test]
fn printed_and_consistent_prefactors() {
    let p = 200;
    for r in 0..5 {
        let a = prefactor(PrefactorConvention::Consistent, Lambda::One, 2, r, p);
        let b = prefactor(PrefactorConvention::AsPrinted, Lambda::One, 2, r, p);
        assert!((&a - &b).abs_f64() < 1e-50);
        let a = prefactor(PrefactorConvention::Consistent, Lambda::Two, 2, r, p);
        let b = prefactor(PrefactorConvention::AsPrinted, Lambda::Two, 2, r, p);
        let agree = (&a - &b).abs_f64() < 1e-50;
        assert_eq!(agree, r % 2 == 1, "r = {r}");
    }
}

fn even_cases() -> Vec<(CaseSelector, FixedComponent)> {
    let p = cfg().bits();
    vec![
        (
            CaseSelector::new(DimensionClass::FourK, Lambda::One, 1),
            FixedComponent::isolated(&[1, -2], &[1, 3], 2, p),
        ),
        (
            CaseSelector::new(DimensionClass::FourKPlusTwo, Lambda::All, 1),
            FixedComponent::isolated(&[2, 1, -3], &[2], -1, p),
        ),
    ]
}

#[test]
fn theta_path_matches_oracle_on_isolated_points() {
    let cfg = cfg();
    let t = pc("0.21+0.13i");
    let trunc = QExponent::integer(4);
    for (case, comp) in even_cases() {
        for lambda in Lambda::ALL {
            let case = case.with_lambda(lambda);
            let a = lefschetz_series(&case, &comp, None, &t, trunc, &cfg).unwrap();
            let b = lefschetz_oracle(&case, &comp, None, &t, trunc, &cfg).unwrap();
            assert!(a.relative_distance(&b) < 1e-45, "{:?}: {a:?} vs {b:?}", case);
        }
    }
}

#[test]
fn theta_path_matches_oracle_on_odd_components() {
    let cfg = cfg();
    let p = cfg.bits();
    let t = pc("0.17+0.09i");
    let trunc = QExponent::integer(3);
    let cases = [
        (CaseSelector::new(DimensionClass::FourKMinusOne, Lambda::Two, 2), odd_component(&[1, -2], &[1], 1, p)),
        (CaseSelector::new(DimensionClass::FourKPlusOne, Lambda::One, 1), odd_component(&[3], &[2, 1], -2, p)),
    ];
    for (case, comp) in cases {
        for lambda in Lambda::ALL {
            let case = case.with_lambda(lambda);
            let e = odd_data(3, p);
            let a = lefschetz_series(&case, &comp, Some(&e), &t, trunc, &cfg).unwrap();
            let b = lefschetz_oracle(&case, &comp, Some(&e), &t, trunc, &cfg).unwrap();
            assert!(a.relative_distance(&b) < 1e-45, "{case:?}: {a:?} vs {b:?}");
            assert!(b.terms().any(|(_, c)| c.abs_f64() > 1e-8));
        }
    }
}

#[test]
fn numeric_value_is_the_summed_series() {
    let cfg = PrecisionConfig::new(30).unwrap();
    let p = cfg.bits();
    let tau = Tau::parse("0.1+1.3i", p).unwrap();
    let t = PrecisionComplex::parse("0.23+0.11i", p).unwrap();
    let trunc = QExponent::integer(12);
    for (case, comp) in even_cases() {
        let series = lefschetz_series(&case, &comp, None, &t, trunc, &cfg).unwrap();
        let value = lefschetz_component(&case, &comp, None, &t, &tau, &cfg).unwrap();
        assert!((&series.evaluate(&tau) - &value).abs_f64() < 1e-25);
    }
    let case = CaseSelector::new(DimensionClass::FourKMinusOne, Lambda::Three, 2);
    let comp = odd_component(&[1, 2], &[3], 1, p);
    let e = odd_data(3, p);
    let series = lefschetz_series(&case, &comp, Some(&e), &t, trunc, &cfg).unwrap();
    let value = lefschetz_component(&case, &comp, Some(&e), &t, &tau, &cfg).unwrap();
    assert!((&series.evaluate(&tau) - &value).abs_f64() < 1e-25);
}

#[test]
fn validation_rejects_bad_components() {
    let p = 100;
    let case = CaseSelector::new(DimensionClass::FourK, Lambda::Two, 1);
    assert!(FixedComponent::isolated(&[1], &[], 1, p).validate(&case).is_err());
    assert!(FixedComponent::isolated(&[1, 0], &[], 1, p).validate(&case).is_err());
    assert!(FixedComponent::isolated(&[1, 2], &[], 1, p).validate(&case).is_ok());
    let odd = EquivariantData::new(
        CaseSelector::new(DimensionClass::FourKMinusOne, Lambda::Two, 2),
        vec![odd_component(&[1, 2], &[], 1, p)],
        None,
    );
    assert!(matches!(odd.validate(), Err(Error::Case(_))));
}
