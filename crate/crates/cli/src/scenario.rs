//! Scenario documents and their merge with command-line flags.
//!
//! A scenario is a single JSON object:
//!
//! ```json
//! {
//!   "group": [2, 3],
//!   "mu": {"[0,0]": "1/2", "[1,0]": "1/2"},
//!   "backend": "rational",
//!   "initial_points": [{"[0,0]": 1}],
//!   "sample": {"count": 5, "seed": 42},
//!   "n": 100,
//!   "tol": 1e-10,
//!   "budget": 200
//! }
//! ```
//!
//! Flags override scenario fields. Sampling always requires a seed so that
//! identical inputs reproduce byte-identical reports.

use std::fs;
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use gqso::codec;
use gqso::sampling::{random_rational_point, uniform_simplex_point};
use gqso::{GroupSpec, QsoOperator, Rational, Scalar, SimplexPoint};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Rational,
    Float,
}

impl Backend {
    fn parse(s: &str) -> Result<Self, Failure> {
        match s {
            "rational" | "exact" => Ok(Backend::Rational),
            "float" | "f64" => Ok(Backend::Float),
            other => Err(Failure::usage(format!(
                "unknown backend {other:?}; expected \"rational\" or \"float\""
            ))),
        }
    }
}

/// Where the initial points come from.
#[derive(Clone, Debug)]
pub enum PointSource {
    Explicit(Vec<Value>),
    Sample { count: usize, seed: Option<u64> },
}

/// A fully merged scenario, with weights still in JSON form so each
/// backend can parse them exactly.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub group: GroupSpec,
    pub mu: Option<Value>,
    pub backend: Backend,
    pub points: Option<PointSource>,
    pub n: Option<usize>,
    pub tol: Option<f64>,
    pub budget: Option<usize>,
}

/// Reads a flag value that is either inline JSON or a path to a JSON file.
pub fn json_arg(raw: &str) -> Result<Value, Failure> {
    let trimmed = raw.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        raw.to_string()
    } else {
        fs::read_to_string(raw)
            .map_err(|e| Failure::usage(format!("cannot read {raw}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid JSON in {raw}: {e}")))
}

fn scenario_field<'v>(doc: &'v Value, key: &str) -> Option<&'v Value> {
    doc.get(key).filter(|v| !v.is_null())
}

impl Scenario {
    /// Builds a scenario from an optional scenario file plus flag overrides.
    #[allow(clippy::too_many_arguments)]
    pub fn resolve(
        scenario_path: Option<&Path>,
        group: Option<&str>,
        mu: Option<&str>,
        backend: Option<&str>,
        points: Option<&str>,
        seed: Option<u64>,
        n: Option<usize>,
        tol: Option<f64>,
        budget: Option<usize>,
    ) -> Result<Self, Failure> {
        let doc: Value = match scenario_path {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    Failure::usage(format!("cannot read scenario {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    Failure::usage(format!("invalid scenario {}: {e}", path.display()))
                })?
            }
            None => Value::Null,
        };

        let group_value = match group {
            Some(raw) => Some(json_arg(raw)?),
            None => scenario_field(&doc, "group").cloned(),
        };
        let group = match group_value {
            Some(v) => codec::group_from_json(&v).map_err(Failure::Core)?,
            None => return Err(Failure::usage("a group is required (--group or scenario)")),
        };

        let mu = match mu {
            Some(raw) => Some(json_arg(raw)?),
            None => scenario_field(&doc, "mu").cloned(),
        };

        let backend = match backend {
            Some(raw) => Backend::parse(raw)?,
            None => match scenario_field(&doc, "backend").and_then(Value::as_str) {
                Some(raw) => Backend::parse(raw)?,
                None => Backend::Float,
            },
        };

        let mut points = match points {
            Some(raw) => Some(Self::parse_points_flag(raw)?),
            None => {
                if let Some(list) = scenario_field(&doc, "initial_points") {
                    let list = list.as_array().ok_or_else(|| {
                        Failure::usage("scenario initial_points must be an array")
                    })?;
                    Some(PointSource::Explicit(list.clone()))
                } else if let Some(sample) = scenario_field(&doc, "sample") {
                    let count = sample
                        .get("count")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| Failure::usage("sample needs an integer count"))?;
                    let seed = sample.get("seed").and_then(Value::as_u64);
                    Some(PointSource::Sample {
                        count: count as usize,
                        seed,
                    })
                } else {
                    None
                }
            }
        };
        if let (Some(PointSource::Sample { seed: s, .. }), Some(flag_seed)) =
            (points.as_mut(), seed)
        {
            *s = Some(flag_seed);
        }

        let read_usize = |key: &str| scenario_field(&doc, key).and_then(Value::as_u64);
        Ok(Scenario {
            group,
            mu,
            backend,
            points,
            n: n.or(read_usize("n").map(|v| v as usize)),
            tol: tol.or(scenario_field(&doc, "tol").and_then(Value::as_f64)),
            budget: budget.or(read_usize("budget").map(|v| v as usize)),
        })
    }

    fn parse_points_flag(raw: &str) -> Result<PointSource, Failure> {
        if let Ok(count) = raw.trim().parse::<usize>() {
            return Ok(PointSource::Sample { count, seed: None });
        }
        let value = json_arg(raw)?;
        let list = value
            .as_array()
            .ok_or_else(|| Failure::usage("--points must be a count or a JSON array of points"))?;
        Ok(PointSource::Explicit(list.clone()))
    }

    pub fn operator<W: Scalar>(&self) -> Result<QsoOperator<W>, Failure> {
        let mu = self
            .mu
            .as_ref()
            .ok_or_else(|| Failure::usage("a measure is required (--mu or scenario)"))?;
        let mu = codec::point_from_json::<W>(&self.group, mu).map_err(Failure::Core)?;
        Ok(QsoOperator::new(mu))
    }

    /// Materializes the initial points for the rational backend.
    pub fn rational_points(&self) -> Result<Vec<SimplexPoint<Rational>>, Failure> {
        self.points_impl(
            |v| codec::point_from_json::<Rational>(&self.group, v).map_err(Failure::Core),
            |rng, spec| random_rational_point(spec, rng, 1000, 25),
        )
    }

    /// Materializes the initial points for the float backend.
    pub fn float_points(&self) -> Result<Vec<SimplexPoint<f64>>, Failure> {
        self.points_impl(
            |v| codec::point_from_json::<f64>(&self.group, v).map_err(Failure::Core),
            |rng, spec| uniform_simplex_point(spec, rng),
        )
    }

    fn points_impl<W: Scalar>(
        &self,
        parse: impl Fn(&Value) -> Result<SimplexPoint<W>, Failure>,
        sample: impl Fn(&mut ChaCha8Rng, &GroupSpec) -> SimplexPoint<W>,
    ) -> Result<Vec<SimplexPoint<W>>, Failure> {
        match &self.points {
            Some(PointSource::Explicit(values)) => values.iter().map(parse).collect(),
            Some(PointSource::Sample { count, seed }) => {
                let seed = seed.ok_or_else(|| {
                    Failure::usage("sampling initial points requires --seed (reproducibility)")
                })?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..*count).map(|_| sample(&mut rng, &self.group)).collect())
            }
            None => Err(Failure::usage(
                "no initial points: pass --points or a scenario with initial_points/sample",
            )),
        }
    }
}
