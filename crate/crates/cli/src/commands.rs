//! Subcommand implementations, generic over the numeric backend.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use gqso::codec;
use gqso::{
    classify as classify_op, convergence_rate, enumerate_subgroups_bounded, ergodic_average,
    invariant_subgroups, iterate, limit_profile, ElementSet, Error, GroupSpec, LimitKind,
    LimitProfile, Rational, RatePoint, Scalar, SimplexPoint, Trajectory, DEFAULT_BUDGET,
};

use crate::output::Sink;
use crate::scenario::{Backend, Scenario};
use crate::{Failure, Format};

pub fn simulate(sc: &Scenario, format: Format, sink: &Sink) -> Result<(), Failure> {
    match sc.backend {
        Backend::Rational => simulate_impl::<Rational>(sc, sc.rational_points()?, format, sink),
        Backend::Float => simulate_impl::<f64>(sc, sc.float_points()?, format, sink),
    }
}

fn simulate_impl<W: Scalar>(
    sc: &Scenario,
    points: Vec<SimplexPoint<W>>,
    format: Format,
    sink: &Sink,
) -> Result<(), Failure> {
    let op = sc.operator::<W>()?;
    let n = sc.n.unwrap_or(10);

    let trajectories: Vec<Trajectory<W>> = points
        .par_iter()
        .map(|x| iterate(&op, x, n))
        .collect::<Result<_, Error>>()
        .map_err(Failure::Core)?;

    // With a tolerance the run also classifies each trajectory's limit;
    // points that miss the tolerance within the budget are reported and
    // turn into a non-convergence exit after all artifacts are written.
    let profiles: Option<Vec<Result<LimitProfile<W>, Error>>> = sc.tol.map(|tol| {
        let budget = sc.budget.unwrap_or(DEFAULT_BUDGET);
        points
            .par_iter()
            .map(|x| limit_profile(&op, x, tol, budget))
            .collect()
    });
    if let Some(results) = &profiles {
        for r in results {
            match r {
                Ok(_) | Err(Error::NonConvergence { .. }) => {}
                Err(other) => return Err(Failure::Core(other.clone())),
            }
        }
    }

    let mut summary_points = Vec::new();
    for i in 0..trajectories.len() {
        let mut entry = Map::new();
        entry.insert("index".into(), json!(i));
        if let Some(results) = &profiles {
            match &results[i] {
                Ok(profile) => {
                    entry.insert("converged".into(), json!(true));
                    entry.insert("n0".into(), json!(profile.forecast.n0));
                    entry.insert("period".into(), json!(profile.period));
                    entry.insert(
                        "kind".into(),
                        json!(match profile.kind {
                            LimitKind::FixedPoint => "fixed-point",
                            LimitKind::Periodic => "periodic",
                        }),
                    );
                    entry.insert(
                        "subgroup".into(),
                        Value::Array(
                            profile
                                .forecast
                                .stabilized_subgroup
                                .members()
                                .iter()
                                .map(codec::element_to_json)
                                .collect(),
                        ),
                    );
                    entry.insert(
                        "steps_to_tolerance".into(),
                        json!(profile.distance_series.len() - 1),
                    );
                    entry.insert("distance_series".into(), json!(profile.distance_series));
                }
                Err(Error::NonConvergence { distances, .. }) => {
                    entry.insert("converged".into(), json!(false));
                    entry.insert("distance_series".into(), json!(distances));
                }
                Err(_) => unreachable!("filtered above"),
            }
        }
        summary_points.push(Value::Object(entry));
    }
    let summary = json!({
        "group": codec::group_to_json(&op.spec().clone()),
        "mu": codec::point_to_json(op.mu()),
        "n": n,
        "points": summary_points,
    });

    match format {
        Format::Csv => {
            for (i, traj) in trajectories.iter().enumerate() {
                sink.emit_text(&format!("point_{i:03}.csv"), &codec::trajectory_to_csv(traj))?;
            }
            sink.emit_json("summary.json", &summary)?;
        }
        Format::Json => {
            let doc = json!({
                "trajectories": trajectories
                    .iter()
                    .map(codec::trajectory_to_json)
                    .collect::<Vec<_>>(),
                "summary": summary,
            });
            sink.emit_json("trajectories.json", &doc)?;
        }
    }

    if let Some(results) = profiles {
        for r in results {
            if let Err(e @ Error::NonConvergence { .. }) = r {
                return Err(Failure::Core(e));
            }
        }
    }
    Ok(())
}

pub fn classify(sc: &Scenario, sink: &Sink) -> Result<(), Failure> {
    let report = match sc.backend {
        Backend::Rational => {
            let op = sc.operator::<Rational>()?;
            codec::report_to_json(op.spec(), &classify_op(&op).map_err(Failure::Core)?)
        }
        Backend::Float => {
            let op = sc.operator::<f64>()?;
            codec::report_to_json(op.spec(), &classify_op(&op).map_err(Failure::Core)?)
        }
    };
    sink.emit_json("report.json", &report)
}

pub fn subgroups(group: &GroupSpec, bound: u64, sink: &Sink) -> Result<(), Failure> {
    let subs = enumerate_subgroups_bounded(group, bound).map_err(Failure::Core)?;
    let doc = json!({
        "group": codec::group_to_json(group),
        "count": subs.len(),
        "subgroups": subs
            .iter()
            .map(|u| Value::Array(u.members().iter().map(codec::element_to_json).collect()))
            .collect::<Vec<_>>(),
    });
    sink.emit_json("subgroups.json", &doc)
}

pub fn invariance(sc: &Scenario, set: Option<&str>, sink: &Sink) -> Result<(), Failure> {
    let spec = sc.group.clone();
    let a: ElementSet = match set {
        Some(raw) => {
            let value = crate::scenario::json_arg(raw)?;
            let arr = value
                .as_array()
                .ok_or_else(|| Failure::usage("--set must be a JSON array of elements"))?;
            let members = arr
                .iter()
                .map(|v| codec::element_from_json(&spec, v))
                .collect::<gqso::Result<Vec<_>>>()
                .map_err(Failure::Core)?;
            ElementSet::new(spec.clone(), members).map_err(Failure::Core)?
        }
        None => match sc.backend {
            Backend::Rational => sc.operator::<Rational>()?.mu().support(),
            Backend::Float => sc.operator::<f64>()?.mu().support(),
        },
    };
    let subs = invariant_subgroups(&spec, &a).map_err(Failure::Core)?;
    let doc = json!({
        "group": codec::group_to_json(&spec),
        "set": a.iter().map(codec::element_to_json).collect::<Vec<_>>(),
        "invariant_subgroups": subs
            .iter()
            .map(|u| Value::Array(u.members().iter().map(codec::element_to_json).collect()))
            .collect::<Vec<_>>(),
    });
    sink.emit_json("invariance.json", &doc)
}

pub fn rate(sc: &Scenario, format: Format, sink: &Sink) -> Result<(), Failure> {
    if sc.backend != Backend::Float {
        return Err(Failure::usage(
            "rate measurement runs on the float backend (long runs); pass --backend float",
        ));
    }
    let op = sc.operator::<f64>()?;
    let points = sc.float_points()?;
    let n_max = sc.n.unwrap_or(50);
    let series: Vec<Vec<RatePoint>> = points
        .par_iter()
        .map(|x| convergence_rate(&op, x, n_max))
        .collect::<Result<_, Error>>()
        .map_err(Failure::Core)?;
    match format {
        Format::Csv => {
            for (i, s) in series.iter().enumerate() {
                sink.emit_text(&format!("rate_{i:03}.csv"), &codec::rate_to_csv(s))?;
            }
        }
        Format::Json => {
            let doc = json!({
                "group": codec::group_to_json(op.spec()),
                "n_max": n_max,
                "series": series
                    .iter()
                    .map(|s| {
                        s.iter()
                            .map(|p| {
                                json!({
                                    "n": p.step,
                                    "d": p.distance,
                                    "r": p.rate,
                                    "terminal": p.terminal,
                                })
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            });
            sink.emit_json("rate.json", &doc)?;
        }
    }
    Ok(())
}

pub fn ergodic(sc: &Scenario, format: Format, sink: &Sink) -> Result<(), Failure> {
    match sc.backend {
        Backend::Rational => ergodic_impl::<Rational>(sc, sc.rational_points()?, format, sink),
        Backend::Float => ergodic_impl::<f64>(sc, sc.float_points()?, format, sink),
    }
}

fn ergodic_impl<W: Scalar>(
    sc: &Scenario,
    points: Vec<SimplexPoint<W>>,
    format: Format,
    sink: &Sink,
) -> Result<(), Failure> {
    let op = sc.operator::<W>()?;
    let n = sc.n.unwrap_or(100);
    let averages: Vec<SimplexPoint<W>> = points
        .par_iter()
        .map(|x| ergodic_average(&op, x, n))
        .collect::<Result<_, Error>>()
        .map_err(Failure::Core)?;
    match format {
        Format::Json => {
            let doc = json!({
                "group": codec::group_to_json(op.spec()),
                "n": n,
                "averages": averages.iter().map(codec::point_to_json).collect::<Vec<_>>(),
            });
            sink.emit_json("ergodic.json", &doc)?;
        }
        Format::Csv => {
            for (i, avg) in averages.iter().enumerate() {
                let mut csv = String::new();
                for r in 0..op.spec().rank() {
                    csv.push_str(&format!("g{r},"));
                }
                csv.push_str("weight\n");
                for (g, w) in avg.iter() {
                    for r in g.residues() {
                        csv.push_str(&format!("{r},"));
                    }
                    csv.push_str(&format!("{w}\n"));
                }
                sink.emit_text(&format!("average_{i:03}.csv"), &csv)?;
            }
        }
    }
    Ok(())
}
