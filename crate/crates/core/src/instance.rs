//! JSON problem instances: equivariant fixed-point data, optional odd data
//! and optional manifold data for genus runs.
//!
//! Real numbers are decimal strings parsed at the configured precision.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bundles::RootForm;
use crate::error::{Error, Result};
use crate::genus::ManifoldData;
use crate::jet::{FormVariable, IntegrationFunctional, Jet, Monomial};
use crate::lefschetz::{
    CaseSelector, DimensionClass, EquivariantData, FixedComponent, Lambda, NormalSummand, OddEData,
    PrefactorConvention, TraceComponent, VSummand,
};
use crate::precision::{PrecisionComplex, PrecisionConfig};
use crate::qseries::QExponent;

pub const DEFAULT_DIGITS: u32 = 60;
pub const DEFAULT_Q_ORDER: u32 = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub case: CaseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<PrecisionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefactor: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentSpec>,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<ESpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<ManifoldSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub dimension_class: String,
    pub lambda: String,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecisionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
    /// In units of `q^{1/8}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub s: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tangent_roots: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub normal: Vec<NormalSpec>,
    #[serde(rename = "V", default, skip_serializing_if = "Vec::is_empty")]
    pub v: Vec<VSpec>,
    pub sigma: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_name: Option<String>,
    /// Absent means evaluation at a point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functional: Option<FunctionalSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalSpec {
    pub m: i64,
    pub mult: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub root_names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VSpec {
    pub n: i64,
    pub pairs: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub root_names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalSpec {
    pub top_degree: u32,
    pub pairings: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ESpec {
    #[serde(rename = "N")]
    pub n: u32,
    pub odd_variable: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_degree: Option<u32>,
    #[serde(default)]
    pub c3_is_zero: bool,
    pub trace_components: Vec<TraceSpec>,
}

/// Jets as monomial → decimal string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSpec {
    pub w: BTreeMap<String, String>,
    pub a: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub dim: u32,
    pub tangent_roots: Vec<String>,
    pub line_root: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v_roots: Vec<String>,
    pub functional: FunctionalSpec,
}

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Input(s) => Error::Input(format!("{path}: {s}")),
        other => Error::Input(format!("{path}: {other}")),
    }
}

fn parse_roots(names: &[String], count: usize, path: &str) -> Result<Vec<RootForm>> {
    if names.is_empty() {
        return Ok(vec![RootForm::zero(); count]);
    }
    if names.len() != count {
        return Err(Error::Input(format!(
            "{path}: {} root names given for multiplicity {count}",
            names.len()
        )));
    }
    names
        .iter()
        .enumerate()
        .map(|(i, n)| RootForm::parse(n).map_err(|e| at(&format!("{path}.root_names[{i}]"), e)))
        .collect()
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("schema: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instances serialize");
        s.push('\n');
        s
    }

    pub fn case(&self) -> Result<CaseSelector> {
        let class = DimensionClass::parse(&self.case.dimension_class).map_err(|e| at("case.dimension_class", e))?;
        let lambda = Lambda::parse(&self.case.lambda).map_err(|e| at("case.lambda", e))?;
        Ok(CaseSelector::new(class, lambda, self.case.k))
    }

    pub fn precision_config(&self) -> Result<PrecisionConfig> {
        let digits = self.precision.as_ref().and_then(|p| p.digits).unwrap_or(DEFAULT_DIGITS);
        PrecisionConfig::new(digits).map_err(|e| at("precision.digits", e))
    }

    pub fn truncation(&self) -> QExponent {
        QExponent(self.precision.as_ref().and_then(|p| p.q_order).unwrap_or(DEFAULT_Q_ORDER))
    }

    fn odd_name(&self) -> Option<(&str, u32)> {
        self.e.as_ref().map(|e| (e.odd_variable.as_str(), e.odd_degree.unwrap_or(1)))
    }

    fn degree_of(&self) -> impl Fn(&str) -> u32 + '_ {
        move |name: &str| match self.odd_name() {
            Some((odd, d)) if odd == name => d,
            _ => 2,
        }
    }

    fn functional(&self, spec: &FunctionalSpec, prec: u32, path: &str) -> Result<IntegrationFunctional> {
        let mut pairings = BTreeMap::new();
        for (m, v) in &spec.pairings {
            let mono = Monomial::parse(m, self.degree_of()).map_err(|e| at(&format!("{path}.pairings"), e))?;
            if mono.degree() != spec.top_degree {
                return Err(Error::Input(format!(
                    "{path}.pairings: monomial '{m}' has degree {}, top degree is {}",
                    mono.degree(),
                    spec.top_degree
                )));
            }
            let value = PrecisionComplex::parse(v, prec).map_err(|e| at(&format!("{path}.pairings[{m}]"), e))?;
            pairings.insert(mono, value);
        }
        Ok(IntegrationFunctional::new(spec.top_degree, pairings))
    }

    fn jet(&self, terms: &BTreeMap<String, String>, cap: u32, prec: u32, path: &str) -> Result<Jet> {
        let mut out = Vec::new();
        for (m, v) in terms {
            let mono = Monomial::parse(m, self.degree_of()).map_err(|e| at(path, e))?;
            let value = PrecisionComplex::parse(v, prec).map_err(|e| at(&format!("{path}[{m}]"), e))?;
            out.push((mono, value));
        }
        Ok(Jet::from_terms(out, cap, prec))
    }

    fn component(&self, i: usize, spec: &ComponentSpec, prec: u32) -> Result<FixedComponent> {
        let path = format!("components[{i}]");
        let tangent_roots = parse_roots(&spec.tangent_roots, spec.s as usize, &format!("{path}.tangent_roots"))?;
        let normal = spec
            .normal
            .iter()
            .enumerate()
            .map(|(j, n)| {
                let p = format!("{path}.normal[{j}]");
                if n.m == 0 {
                    return Err(Error::Input(format!("{p}.m: rotation must be nonzero")));
                }
                Ok(NormalSummand {
                    m: n.m,
                    roots: parse_roots(&n.root_names, n.mult, &p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let v_parts = spec
            .v
            .iter()
            .enumerate()
            .map(|(j, v)| {
                Ok(VSummand {
                    n: v.n,
                    roots: parse_roots(&v.root_names, v.pairs, &format!("{path}.V[{j}]"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let u = match &spec.u_name {
            Some(u) => RootForm::parse(u).map_err(|e| at(&format!("{path}.u_name"), e))?,
            None => RootForm::zero(),
        };
        let functional = match &spec.functional {
            Some(f) => self.functional(f, prec, &format!("{path}.functional"))?,
            None => IntegrationFunctional::point(prec),
        };
        Ok(FixedComponent {
            s: spec.s,
            tangent_roots,
            normal,
            v_parts,
            u,
            sigma: spec.sigma,
            functional,
        })
    }

    pub fn odd_data(&self, cap: u32, prec: u32) -> Result<Option<OddEData>> {
        let Some(e) = &self.e else { return Ok(None) };
        let (name, degree) = self.odd_name().expect("E present");
        let trace_components = e
            .trace_components
            .iter()
            .enumerate()
            .map(|(i, tc)| {
                let p = format!("E.trace_components[{i}]");
                Ok(TraceComponent {
                    w: self.jet(&tc.w, cap, prec, &format!("{p}.w"))?,
                    a: self.jet(&tc.a, cap, prec, &format!("{p}.a"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let data = OddEData {
            n: e.n,
            odd_variable: FormVariable::new(name, degree),
            trace_components,
            c3_is_zero: e.c3_is_zero,
        };
        data.validate().map_err(|err| at("E", err))?;
        Ok(Some(data))
    }

    /// Validated equivariant data; needs at least one component.
    pub fn equivariant_data(&self, cfg: &PrecisionConfig) -> Result<EquivariantData> {
        let prec = cfg.bits();
        let case = self.case()?;
        let dim = case.dimension().map_err(|e| at("case", e))?;
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| self.component(i, c, prec))
            .collect::<Result<Vec<_>>>()?;
        let mut data = EquivariantData::new(case, components, self.odd_data(dim, prec)?);
        data.convention = match self.prefactor.as_deref() {
            None | Some("consistent") => PrefactorConvention::Consistent,
            Some("as-printed") => PrefactorConvention::AsPrinted,
            Some(other) => {
                return Err(Error::Input(format!(
                    "prefactor: expected 'consistent' or 'as-printed', got '{other}'"
                )))
            }
        };
        data.validate()?;
        Ok(data)
    }

    pub fn manifold_data(&self, cfg: &PrecisionConfig) -> Result<ManifoldData> {
        let m = self
            .manifold
            .as_ref()
            .ok_or_else(|| Error::Input("manifold: section missing".into()))?;
        let prec = cfg.bits();
        let roots = |names: &[String], path: &str| parse_roots(names, names.len(), path);
        Ok(ManifoldData {
            dim: m.dim,
            tangent_roots: roots(&m.tangent_roots, "manifold.tangent_roots")?,
            line_root: RootForm::parse(&m.line_root).map_err(|e| at("manifold.line_root", e))?,
            v_roots: roots(&m.v_roots, "manifold.v_roots")?,
            e: self.odd_data(m.dim, prec)?,
            functional: self.functional(&m.functional, prec, "manifold.functional")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CP1: &str = r#"{
      "case": {"dimension_class": "4k+2", "lambda": "2", "k": 0},
      "precision": {"digits": 40},
      "components": [
        {"s": 0, "normal": [{"m": 1, "mult": 1}], "sigma": 1},
        {"s": 0, "normal": [{"m": -1, "mult": 1}], "sigma": -1}
      ],
      "manifold": {"dim": 2, "tangent_roots": ["y"], "line_root": "y", "functional": {"top_degree": 2, "pairings": {"y": "2"}}}
    }"#;

    #[test]
    fn parses_and_validates() {
        let inst = Instance::from_json(CP1).unwrap();
        let cfg = inst.precision_config().unwrap();
        assert_eq!(cfg.digits, 40);
        assert_eq!(inst.truncation(), QExponent(DEFAULT_Q_ORDER));
        let data = inst.equivariant_data(&cfg).unwrap();
        assert_eq!(data.components.len(), 2);
        assert_eq!(data.components[1].sigma, -1);
        let m = inst.manifold_data(&cfg).unwrap();
        assert_eq!(m.tangent_roots, vec![RootForm::var("y")]);
    }

    #[test]
    fn round_trip_is_idempotent() {
        let once = Instance::from_json(CP1).unwrap().to_json();
        let twice = Instance::from_json(&once).unwrap().to_json();
        assert_eq!(once, twice);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = CP1.replace("\"sigma\": 1}", "\"sigma\": 1, \"colour\": 3}");
        let err = Instance::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("colour") && err.contains("line"), "{err}");
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = CP1.replace("\"m\": -1", "\"m\": 0");
        let inst = Instance::from_json(&bad).unwrap();
        let err = inst.equivariant_data(&inst.precision_config().unwrap()).unwrap_err().to_string();
        assert!(err.contains("components[1].normal[0].m"), "{err}");
        let bad = CP1.replace("{\"y\": \"2\"}", "{\"y\": \"two\"}");
        let inst = Instance::from_json(&bad).unwrap();
        let err = inst.manifold_data(&inst.precision_config().unwrap()).unwrap_err().to_string();
        assert!(err.contains("manifold.functional.pairings[y]"), "{err}");
    }

    #[test]
    fn root_name_counts_must_match() {
        let bad = CP1.replace("{\"m\": 1, \"mult\": 1}", "{\"m\": 1, \"mult\": 1, \"root_names\": [\"x\", \"w\"]}");
        let inst = Instance::from_json(&bad).unwrap();
        assert!(inst.equivariant_data(&inst.precision_config().unwrap()).is_err());
    }
}
