//! Experiment configuration (`schema: 1`).

use std::io::Write;

use diophantine::auxpoly::{AuxOptions, WeightSystem};
use diophantine::blowup::{choose_e0, CertifyConfig};
use diophantine::field::FieldPoint;
use diophantine::heights::{PhiWeights, Place};
use diophantine::numbers::{AlgebraicNumber, AlgebraicSpec, ProjPoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: u32 = 1;
/// Degrees used by the `auto` policy.
pub const AUTO_DEGREE: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Degrees {
    pub d1: usize,
    pub d2: usize,
    #[serde(with = "diophantine::serde_util::rational")]
    pub delta: BigRational,
}

/// `"auto"` or explicit degrees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DegreePolicy {
    Auto(AutoTag),
    Explicit(Degrees),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum AutoTag {
    #[serde(rename = "auto")]
    Auto,
}

impl Default for DegreePolicy {
    fn default() -> Self {
        DegreePolicy::Auto(AutoTag::Auto)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointPair {
    pub p1: ProjPoint,
    pub p2: ProjPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HuntSettings {
    pub kappa: f64,
    pub q_max: u64,
}

/// File names inside `--out`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub polynomial: String,
    pub report: String,
    pub hunt: String,
    pub certificate: String,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            polynomial: "aux_poly.json".into(),
            report: "construction_report.json".into(),
            hunt: "hunt.csv".into(),
            certificate: "certificate.json".into(),
        }
    }
}

fn default_places() -> Vec<Place> {
    vec![Place::Archimedean]
}

fn default_seed() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub alpha: AlgebraicSpec,
    /// Second coordinate; defaults to `alpha`.
    #[serde(default)]
    pub alpha2: Option<AlgebraicSpec>,
    #[serde(with = "diophantine::serde_util::rational")]
    pub theta1: BigRational,
    #[serde(with = "diophantine::serde_util::rational")]
    pub theta2: BigRational,
    #[serde(with = "diophantine::serde_util::rational")]
    pub epsilon: BigRational,
    #[serde(default = "default_places")]
    pub places: Vec<Place>,
    /// Defaults to weight 1 at the archimedean place.
    #[serde(default)]
    pub phi: Option<PhiWeights>,
    #[serde(default)]
    pub degrees: DegreePolicy,
    #[serde(default)]
    pub points: Option<PointPair>,
    #[serde(default)]
    pub hunt: Option<HuntSettings>,
    #[serde(default)]
    pub construction: AuxOptions,
    #[serde(default)]
    pub certify: CertifyConfig,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let c: Self = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("config: {e}")))?;
        if c.schema != SCHEMA {
            return Err(CliError::Parse(format!("config schema {} is not supported (expected {SCHEMA})", c.schema)));
        }
        Ok(c)
    }

    pub fn alpha1(&self) -> Result<AlgebraicNumber, CliError> {
        Ok(self.alpha.build()?)
    }

    pub fn alpha2_spec(&self) -> AlgebraicSpec {
        self.alpha2.clone().unwrap_or_else(|| self.alpha.clone())
    }

    pub fn alpha2(&self) -> Result<AlgebraicNumber, CliError> {
        Ok(self.alpha2_spec().build()?)
    }

    pub fn phi(&self) -> Result<PhiWeights, CliError> {
        let phi = match &self.phi {
            Some(p) => p.clone(),
            None if self.places == [Place::Archimedean] => PhiWeights::archimedean_only(),
            None => return Err(CliError::Parse("phi is required when places is not [inf]".into())),
        };
        phi.validate()?;
        if !phi.places().eq(sorted_places(&self.places).iter()) {
            return Err(CliError::Parse("phi must list exactly the configured places".into()));
        }
        Ok(phi)
    }

    /// `[L:Q]` for the pair of coordinates.
    pub fn field_degree(&self) -> Result<usize, CliError> {
        Ok(FieldPoint::from_pair(&self.alpha1()?, &self.alpha2()?)?.degree())
    }

    /// Checks the config; soft conditions become warnings on `warn`.
    pub fn validate(&self, warn: &mut dyn Write) -> Result<(), CliError> {
        self.phi()?;
        let n = self.field_degree()?;
        let lhs = &self.theta1 * &self.theta2;
        let rhs = BigRational::from_integer(BigInt::from(2 * n)) + &self.epsilon;
        if lhs < rhs {
            let _ = writeln!(warn, "warning: theta1 theta2 = {lhs} is below 2n + epsilon = {rhs}");
        }
        Ok(())
    }

    /// Weight system from explicit degrees, or `d1 = d2 = 40` with
    /// `delta = 2 + e0` under the `auto` policy.
    pub fn weights(&self) -> Result<WeightSystem, CliError> {
        let (d1, d2, delta) = match &self.degrees {
            DegreePolicy::Explicit(d) => (d.d1, d.d2, d.delta.clone()),
            DegreePolicy::Auto(_) => {
                let e0 = choose_e0(&self.theta1, &self.theta2, self.field_degree()?)?;
                (AUTO_DEGREE, AUTO_DEGREE, BigRational::from_integer(BigInt::from(2)) + e0)
            }
        };
        Ok(WeightSystem::new(self.theta1.clone(), self.theta2.clone(), d1, d2, delta)?)
    }
}

fn sorted_places(p: &[Place]) -> Vec<Place> {
    let mut v = p.to_vec();
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: &str = r#"{
        "schema": 1,
        "alpha": {"minpoly": ["-2", "0", "1"], "root": 1},
        "theta1": "21/10", "theta2": "21/10", "epsilon": "1/10",
        "degrees": {"d1": 40, "d2": 40, "delta": "41/20"}
    }"#;

    #[test]
    fn parses_minimal() {
        let c = ExperimentConfig::from_json(SQRT2).unwrap();
        assert_eq!(c.seed, 1);
        assert_eq!(c.places, vec![Place::Archimedean]);
        let w = c.weights().unwrap();
        assert_eq!((w.d1, w.d2), (40, 40));
        let mut warn = vec![];
        c.validate(&mut warn).unwrap();
        // 4.41 >= 4.1: no warning.
        assert!(warn.is_empty());
    }

    #[test]
    fn auto_degrees_and_warning() {
        let t = SQRT2.replace(r#"{"d1": 40, "d2": 40, "delta": "41/20"}"#, r#""auto""#).replace("\"1/10\"", "\"1\"");
        let c = ExperimentConfig::from_json(&t).unwrap();
        let w = c.weights().unwrap();
        assert_eq!(w.d1, 40);
        // 2 * 4.41 > 2 * (2 + 1/20)^2.
        assert_eq!(w.delta, BigRational::new(41.into(), 20.into()));
        let mut warn = vec![];
        c.validate(&mut warn).unwrap();
        assert!(String::from_utf8(warn).unwrap().contains("warning"));
    }

    #[test]
    fn rejects_bad_schema_and_phi() {
        assert!(ExperimentConfig::from_json(&SQRT2.replace("\"schema\": 1", "\"schema\": 2")).is_err());
        let t = SQRT2.replace("\"schema\": 1,", "\"schema\": 1, \"places\": [\"inf\", \"7\"],");
        let c = ExperimentConfig::from_json(&t).unwrap();
        assert!(c.phi().is_err());
    }
}
