//! JSON and CSV wire formats.
//!
//! Groups serialize as arrays of cyclic orders (`[2,3]`), elements as
//! residue arrays (`[1,2]`), and points as objects keyed by the canonical
//! stringified element (`{"[1,2]": "1/3", ...}`) with weights as JSON
//! numbers (float backend) or `"p/q"` strings (rational backend).
//! serde_json's default map preserves sorted keys, so every emitted
//! document is byte-deterministic.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::abelian::{Coset, GroupElement, GroupSpec, Subgroup};
use crate::analysis::{ClassificationReport, PeriodicOrbit, RatePoint};
use crate::error::{Error, Result};
use crate::qso::{QsoOperator, Trajectory};
use crate::scalar::Scalar;
use crate::simplex::SimplexPoint;

pub fn group_to_json(spec: &GroupSpec) -> Value {
    Value::Array(
        spec.cyclic_orders()
            .iter()
            .map(|&n| Value::from(n))
            .collect(),
    )
}

pub fn group_from_json(value: &Value) -> Result<GroupSpec> {
    let arr = value.as_array().ok_or_else(|| Error::MalformedDocument {
        details: "group must be a JSON array of cyclic orders".into(),
    })?;
    let orders = arr
        .iter()
        .map(|v| {
            v.as_u64().ok_or_else(|| Error::MalformedDocument {
                details: format!("cyclic order {v} is not a nonnegative integer"),
            })
        })
        .collect::<Result<Vec<u64>>>()?;
    GroupSpec::new(orders)
}

/// Canonical string form of an element: its residue array without spaces.
pub fn element_key(g: &GroupElement) -> String {
    let mut s = String::from("[");
    for (i, r) in g.residues().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{r}");
    }
    s.push(']');
    s
}

pub fn element_to_json(g: &GroupElement) -> Value {
    Value::Array(g.residues().iter().map(|&r| Value::from(r)).collect())
}

pub fn element_from_json(spec: &GroupSpec, value: &Value) -> Result<GroupElement> {
    let arr = value.as_array().ok_or_else(|| Error::MalformedDocument {
        details: format!("element {value} must be a JSON array of residues"),
    })?;
    let residues = arr
        .iter()
        .map(|v| {
            v.as_u64().ok_or_else(|| Error::MalformedDocument {
                details: format!("residue {v} is not a nonnegative integer"),
            })
        })
        .collect::<Result<Vec<u64>>>()?;
    spec.element(residues)
}

pub fn parse_element_key(spec: &GroupSpec, key: &str) -> Result<GroupElement> {
    let value: Value = serde_json::from_str(key).map_err(|_| Error::UnknownElementKey {
        key: key.to_string(),
    })?;
    element_from_json(spec, &value).map_err(|_| Error::UnknownElementKey {
        key: key.to_string(),
    })
}

pub fn point_to_json<W: Scalar>(point: &SimplexPoint<W>) -> Value {
    let mut map = Map::new();
    for (g, w) in point.iter() {
        if !w.is_zero() {
            map.insert(element_key(&g), w.to_json());
        }
    }
    Value::Object(map)
}

pub fn point_from_json<W: Scalar>(spec: &GroupSpec, value: &Value) -> Result<SimplexPoint<W>> {
    let obj = value.as_object().ok_or_else(|| Error::MalformedDocument {
        details: "a point must be a JSON object keyed by elements".into(),
    })?;
    let mut pairs = Vec::with_capacity(obj.len());
    for (key, raw) in obj {
        let g = parse_element_key(spec, key)?;
        let w = W::from_json(raw).ok_or_else(|| Error::MalformedWeight {
            value: raw.to_string(),
        })?;
        pairs.push((g, w));
    }
    SimplexPoint::from_pairs(spec.clone(), pairs)
}

pub fn operator_to_json<W: Scalar>(op: &QsoOperator<W>) -> Value {
    json!({
        "group": group_to_json(op.spec()),
        "mu": point_to_json(op.mu()),
    })
}

pub fn operator_from_json<W: Scalar>(value: &Value) -> Result<QsoOperator<W>> {
    let group = value.get("group").ok_or_else(|| Error::MalformedDocument {
        details: "operator document needs a \"group\" field".into(),
    })?;
    let spec = group_from_json(group)?;
    let mu = value.get("mu").ok_or_else(|| Error::MalformedDocument {
        details: "operator document needs a \"mu\" field".into(),
    })?;
    Ok(QsoOperator::new(point_from_json(&spec, mu)?))
}

fn subgroup_to_json(u: &Subgroup) -> Value {
    Value::Array(u.members().iter().map(element_to_json).collect())
}

fn coset_to_json(c: &Coset) -> Value {
    Value::Array(c.element_set().iter().map(element_to_json).collect())
}

fn orbit_to_json(orbit: &PeriodicOrbit) -> Value {
    json!({
        "subgroup": subgroup_to_json(&orbit.subgroup),
        "cosets": orbit.cosets.iter().map(coset_to_json).collect::<Vec<_>>(),
        "minimal_period": orbit.minimal_period,
    })
}

/// The classification report, shaped as
/// `{regular, witness, invariant_subgroups, periodic_orbits, fixed_points}`.
pub fn report_to_json(spec: &GroupSpec, report: &ClassificationReport) -> Value {
    let witness = match &report.regularity.witness {
        Some(w) => json!({
            "subgroup": subgroup_to_json(&w.subgroup),
            "element": element_to_json(&w.element),
        }),
        None => Value::Null,
    };
    json!({
        "group": group_to_json(spec),
        "regular": report.regularity.regular,
        "witness": witness,
        "invariant_subgroups": report
            .invariant_subgroups
            .iter()
            .map(subgroup_to_json)
            .collect::<Vec<_>>(),
        "periodic_orbits": report
            .periodic_orbits
            .iter()
            .map(orbit_to_json)
            .collect::<Vec<_>>(),
        "fixed_points": report
            .fixed_points
            .iter()
            .map(coset_to_json)
            .collect::<Vec<_>>(),
    })
}

/// One row per (step, element): `step,g0,...,g{r-1},weight`.
pub fn trajectory_to_csv<W: Scalar>(trajectory: &Trajectory<W>) -> String {
    let spec = trajectory.operator().spec();
    let mut out = String::from("step");
    for i in 0..spec.rank() {
        let _ = write!(out, ",g{i}");
    }
    out.push_str(",weight\n");
    for (step, state) in trajectory.states().iter().enumerate() {
        for (g, w) in state.iter() {
            let _ = write!(out, "{step}");
            for r in g.residues() {
                let _ = write!(out, ",{r}");
            }
            let _ = writeln!(out, ",{w}");
        }
    }
    out
}

pub fn trajectory_to_json<W: Scalar>(trajectory: &Trajectory<W>) -> Value {
    json!({
        "group": group_to_json(trajectory.operator().spec()),
        "mu": point_to_json(trajectory.operator().mu()),
        "states": trajectory
            .states()
            .iter()
            .map(point_to_json)
            .collect::<Vec<_>>(),
    })
}

/// Plot-ready rate series: `n,d_n,r_n` with an empty rate cell where no
/// estimate exists. A leading comment line flags series that never produce
/// a rate (starts on a limit cycle).
pub fn rate_to_csv(series: &[RatePoint]) -> String {
    let mut out = String::new();
    if series.iter().all(|p| p.rate.is_none()) {
        out.push_str("# no rate estimates: trajectory started on its limit cycle\n");
    }
    out.push_str("n,d_n,r_n\n");
    for p in series {
        match p.rate {
            Some(r) => {
                let _ = writeln!(out, "{},{},{}", p.step, p.distance, r);
            }
            None => {
                let _ = writeln!(out, "{},{},", p.step, p.distance);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qso::iterate;
    use crate::scalar::Rational;

    #[test]
    fn group_roundtrip() {
        let spec = GroupSpec::new(vec![2, 3]).unwrap();
        let v = group_to_json(&spec);
        assert_eq!(v, json!([2, 3]));
        assert_eq!(group_from_json(&v).unwrap(), spec);
        assert!(group_from_json(&json!("Z6")).is_err());
        assert!(group_from_json(&json!([2, 0])).is_err());
    }

    #[test]
    fn element_keys() {
        let spec = GroupSpec::new(vec![2, 3]).unwrap();
        let g = spec.element(vec![1, 2]).unwrap();
        assert_eq!(element_key(&g), "[1,2]");
        assert_eq!(parse_element_key(&spec, "[1,2]").unwrap(), g);
        assert!(matches!(
            parse_element_key(&spec, "[9,9]"),
            Err(Error::UnknownElementKey { .. })
        ));
    }

    #[test]
    fn point_roundtrip_rational() {
        let spec = GroupSpec::cyclic(3).unwrap();
        let x = SimplexPoint::from_weights(
            spec.clone(),
            vec![
                Rational::from_ratio(1, 3),
                Rational::from_ratio(2, 3),
                Rational::from_ratio(0, 1),
            ],
        )
        .unwrap();
        let v = point_to_json(&x);
        assert_eq!(v, json!({"[0]": "1/3", "[1]": "2/3"}));
        assert_eq!(point_from_json::<Rational>(&spec, &v).unwrap(), x);
    }

    #[test]
    fn point_roundtrip_float() {
        let spec = GroupSpec::cyclic(2).unwrap();
        let x = SimplexPoint::from_weights(spec.clone(), vec![0.9, 0.1]).unwrap();
        let v = point_to_json(&x);
        assert_eq!(point_from_json::<f64>(&spec, &v).unwrap(), x);
    }

    #[test]
    fn malformed_points_are_rejected() {
        let spec = GroupSpec::cyclic(2).unwrap();
        assert!(matches!(
            point_from_json::<f64>(&spec, &json!({"[0]": 0.4, "[1]": 0.4})),
            Err(Error::WeightSum { .. })
        ));
        assert!(matches!(
            point_from_json::<f64>(&spec, &json!({"[0]": "x", "[1]": 1.0})),
            Err(Error::MalformedWeight { .. })
        ));
        assert!(matches!(
            point_from_json::<f64>(&spec, &json!([0.5, 0.5])),
            Err(Error::MalformedDocument { .. })
        ));
    }

    #[test]
    fn operator_roundtrip() {
        let spec = GroupSpec::cyclic(3).unwrap();
        let mu = SimplexPoint::point_mass(&spec, &spec.identity()).unwrap();
        let op = QsoOperator::<Rational>::new(mu);
        let v = operator_to_json(&op);
        let back = operator_from_json::<Rational>(&v).unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn trajectory_csv_shape() {
        let spec = GroupSpec::cyclic(3).unwrap();
        let mu = SimplexPoint::point_mass(&spec, &spec.identity()).unwrap();
        let op = QsoOperator::<Rational>::new(mu);
        let d1 =
            SimplexPoint::point_mass(&spec, &spec.element(vec![1]).unwrap()).unwrap();
        let traj = iterate(&op, &d1, 2).unwrap();
        let csv = trajectory_to_csv(&traj);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("step,g0,weight"));
        assert_eq!(csv.lines().count(), 1 + 3 * 3);
        assert!(csv.contains("1,2,1\n"));
    }

    #[test]
    fn rate_csv_notes_empty_series() {
        let series = vec![RatePoint {
            step: 0,
            distance: 0.0,
            rate: None,
            terminal: true,
        }];
        let csv = rate_to_csv(&series);
        assert!(csv.starts_with("# no rate estimates"));
        assert!(csv.contains("n,d_n,r_n"));
    }
}
