//! Structural theory of the operators: invariance predicates, support
//! dynamics, limit classification, periodic orbits, regularity, rate and
//! ergodicity measurement.
//!
//! Set-level computations (supports, cosets, forecasts) are exact for both
//! backends; distances are reported as `f64`.

use std::collections::HashMap;

use crate::abelian::{
    enumerate_subgroups, Coset, ElementSet, GroupElement, GroupSpec, Subgroup,
};
use crate::error::{Error, Result};
use crate::qso::{IterationLimits, QsoOperator};
use crate::scalar::Scalar;
use crate::simplex::{Norm, SimplexPoint};

/// Default convergence tolerance for [`limit_profile`].
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Default iteration budget for [`limit_profile`].
pub const DEFAULT_BUDGET: usize = 200;

/// Whether `u` absorbs translation by `a`: `|U + A| = |U|`.
///
/// Computed two ways — the sumset cardinality from the definition, and the
/// equivalent "A lies inside a single coset of U" test — and cross-checked.
pub fn is_invariant(u: &Subgroup, a: &ElementSet) -> Result<bool> {
    if a.is_empty() {
        return Err(Error::EmptySet {
            operation: "is_invariant",
        });
    }
    let by_sumset = u.members().sumset(a)?.len() == u.order();
    let spec = u.spec();
    let base = a.min_member().expect("nonempty");
    let by_coset = a
        .iter()
        .map(|g| spec.sub(g, base))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|d| u.contains(d));
    assert_eq!(by_sumset, by_coset, "invariance routes disagree");
    Ok(by_sumset)
}

/// All subgroups `U` with `|U + A| = |U|`, in enumeration order.
pub fn invariant_subgroups(spec: &GroupSpec, a: &ElementSet) -> Result<Vec<Subgroup>> {
    if a.spec() != spec {
        return Err(Error::SpecMismatch {
            left: spec.cyclic_orders().to_vec(),
            right: a.spec().cyclic_orders().to_vec(),
        });
    }
    let mut out = Vec::new();
    for u in enumerate_subgroups(spec)? {
        if is_invariant(&u, a)? {
            out.push(u);
        }
    }
    Ok(out)
}

/// Decides whether `b` is a coset: `|B + B| = |B|` iff it is, in which case
/// the subgroup is `B` translated by the negation of its least member.
pub fn is_coset(b: &ElementSet) -> Result<Option<Coset>> {
    if b.is_empty() {
        return Err(Error::EmptySet { operation: "is_coset" });
    }
    if b.sumset(b)?.len() != b.len() {
        return Ok(None);
    }
    let rep = b.min_member().expect("nonempty").clone();
    let spec = b.spec().clone();
    let shifted = b.translate(&spec.neg(&rep)?)?;
    let subgroup = Subgroup::from_set(shifted)
        .expect("translate of a coset by its representative is a subgroup");
    Ok(Some(subgroup.coset(&rep)?))
}

/// The exact support sequence of a trajectory, derived from the initial
/// support and the measure's support alone: a growth phase of strictly
/// increasing sizes, then cosets of one fixed invariant subgroup, settling
/// into a cycle.
#[derive(Clone, Debug)]
pub struct SupportForecast {
    /// First step at which the support size stops growing.
    pub n0: usize,
    /// The invariant subgroup whose cosets carry the stabilized supports.
    pub stabilized_subgroup: Subgroup,
    /// Supports at steps `0..n0` (sizes strictly increasing).
    pub growth_supports: Vec<ElementSet>,
    /// Cosets at steps `n0..` that precede the cycle (often empty).
    pub coset_preperiod: Vec<Coset>,
    /// One minimal period of the limiting coset cycle.
    pub coset_cycle: Vec<Coset>,
}

impl SupportForecast {
    /// Length of the limiting cycle.
    pub fn period(&self) -> usize {
        self.coset_cycle.len()
    }

    /// Step index at which the cycle begins.
    pub fn cycle_start(&self) -> usize {
        self.n0 + self.coset_preperiod.len()
    }

    /// The forecast support at any step.
    pub fn support_at(&self, n: usize) -> ElementSet {
        if n < self.n0 {
            return self.growth_supports[n].clone();
        }
        let k = n - self.n0;
        if k < self.coset_preperiod.len() {
            self.coset_preperiod[k].element_set()
        } else {
            let idx = (k - self.coset_preperiod.len()) % self.coset_cycle.len();
            self.coset_cycle[idx].element_set()
        }
    }
}

/// Iterates `S -> S + S + s_mu` until the size stabilizes, then tracks the
/// coset sequence until it closes into a cycle.
pub fn predict_support_dynamics(s_x: &ElementSet, s_mu: &ElementSet) -> Result<SupportForecast> {
    if s_x.is_empty() || s_mu.is_empty() {
        return Err(Error::EmptySet {
            operation: "predict_support_dynamics",
        });
    }
    let step = |s: &ElementSet| -> Result<ElementSet> { s.sumset(s)?.sumset(s_mu) };

    let mut growth_supports = Vec::new();
    let mut current = s_x.clone();
    loop {
        let next = step(&current)?;
        debug_assert!(next.len() >= current.len());
        if next.len() == current.len() {
            break;
        }
        growth_supports.push(current);
        current = next;
    }
    let n0 = growth_supports.len();

    let stabilized = is_coset(&current)?
        .expect("a support whose size is stable under the dynamics is a coset");
    let stabilized_subgroup = stabilized.subgroup().clone();

    let mut seen: HashMap<ElementSet, usize> = HashMap::new();
    let mut tail: Vec<ElementSet> = Vec::new();
    let mut set = current;
    let cycle_offset = loop {
        if let Some(&pos) = seen.get(&set) {
            break pos;
        }
        seen.insert(set.clone(), tail.len());
        tail.push(set.clone());
        set = step(&set)?;
    };
    let to_coset = |s: &ElementSet| -> Coset {
        let c = is_coset(s)
            .expect("nonempty")
            .expect("stabilized supports are cosets");
        assert_eq!(
            c.subgroup(),
            &stabilized_subgroup,
            "stabilized supports share one subgroup"
        );
        c
    };
    let coset_preperiod = tail[..cycle_offset].iter().map(to_coset).collect();
    let coset_cycle = tail[cycle_offset..].iter().map(to_coset).collect();

    Ok(SupportForecast {
        n0,
        stabilized_subgroup,
        growth_supports,
        coset_preperiod,
        coset_cycle,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    FixedPoint,
    Periodic,
}

/// Classification of a trajectory's limit, with the measured approach.
#[derive(Clone, Debug)]
pub struct LimitProfile<W: Scalar> {
    pub kind: LimitKind,
    pub period: usize,
    /// Uniform distributions on the limiting coset cycle, aligned so that
    /// `limit_states[i]` is the limit along steps `cycle_start + i (mod period)`.
    pub limit_states: Vec<SimplexPoint<W>>,
    /// `d_n = || V^n x - u(s(V^n x)) ||_max` until tolerance or budget.
    pub distance_series: Vec<f64>,
    pub forecast: SupportForecast,
}

/// Iterates from `x0` until the distance to the forecast uniform falls
/// below `tol`, classifying the limit from the support forecast.
///
/// Fails with a non-convergence report (carrying the distance series) if
/// the budget runs out first, or with a capacity error if rational
/// denominators outgrow the default iteration limits.
pub fn limit_profile<W: Scalar>(
    op: &QsoOperator<W>,
    x0: &SimplexPoint<W>,
    tol: f64,
    budget: usize,
) -> Result<LimitProfile<W>> {
    limit_profile_with(op, x0, tol, budget, &IterationLimits::default())
}

pub fn limit_profile_with<W: Scalar>(
    op: &QsoOperator<W>,
    x0: &SimplexPoint<W>,
    tol: f64,
    budget: usize,
    limits: &IterationLimits,
) -> Result<LimitProfile<W>> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter {
            what: "tolerance must be positive".into(),
        });
    }
    let forecast = predict_support_dynamics(&x0.support(), &op.mu().support())?;
    let mut distance_series = Vec::new();
    let mut state = x0.clone();
    let mut n = 0;
    loop {
        let target = SimplexPoint::<W>::uniform(&forecast.support_at(n))?;
        let d = state.distance(&target, Norm::Max)?.to_f64();
        distance_series.push(d);
        if d <= tol {
            break;
        }
        if n == budget {
            let last = distance_series.last().copied();
            return Err(Error::NonConvergence {
                tolerance: tol,
                budget,
                distances: distance_series,
                last,
            });
        }
        state = op.apply(&state)?;
        let bits = state.max_denominator_bits();
        if bits > limits.max_denominator_bits {
            return Err(Error::DenominatorBlowup {
                step: n + 1,
                bits,
                bound: limits.max_denominator_bits,
            });
        }
        n += 1;
    }
    let limit_states = forecast
        .coset_cycle
        .iter()
        .map(|c| SimplexPoint::uniform(&c.element_set()))
        .collect::<Result<Vec<_>>>()?;
    let period = forecast.period();
    Ok(LimitProfile {
        kind: if period == 1 {
            LimitKind::FixedPoint
        } else {
            LimitKind::Periodic
        },
        period,
        limit_states,
        distance_series,
        forecast,
    })
}

/// A periodic orbit of uniform distributions on the cosets of an invariant
/// subgroup, listed in dynamical order starting from the coset with the
/// least canonical representative.
#[derive(Clone, Debug)]
pub struct PeriodicOrbit {
    pub subgroup: Subgroup,
    pub cosets: Vec<Coset>,
    pub minimal_period: usize,
}

impl PeriodicOrbit {
    /// The orbit as simplex points.
    pub fn uniform_states<W: Scalar>(&self) -> Vec<SimplexPoint<W>> {
        self.cosets
            .iter()
            .map(|c| SimplexPoint::uniform(&c.element_set()).expect("cosets are nonempty"))
            .collect()
    }

    pub fn is_fixed_point(&self) -> bool {
        self.minimal_period == 1
    }
}

/// Enumerates every periodic orbit of uniforms: for each invariant
/// subgroup `U`, each `a` in the measure's support, and each `g` whose
/// doubling orbit is purely periodic, the coset cycle of `2^n g - a + U`.
/// Distinct `(g, a)` choices that trace the same cycle are deduplicated.
pub fn periodic_orbits<W: Scalar>(op: &QsoOperator<W>) -> Result<Vec<PeriodicOrbit>> {
    let spec = op.spec().clone();
    let smu = op.mu().support();
    let subgroups = invariant_subgroups(&spec, &smu)?;
    let mut seen: HashMap<(Vec<GroupElement>, Vec<GroupElement>), ()> = HashMap::new();
    let mut orbits = Vec::new();
    for u in subgroups {
        // The invariant subgroup confines s(mu) to one coset, so the coset
        // successor C -> 2C + a + U is the same map for every a in s(mu).
        let a = smu.min_member().expect("measure support is nonempty");
        for g in spec.elements() {
            if !spec.doubling_orbit(&g)?.is_purely_periodic() {
                continue;
            }
            let start = u.coset(&spec.sub(&g, a)?)?;
            let mut cycle = vec![start.clone()];
            loop {
                let prev = cycle.last().expect("nonempty");
                let next_rep = spec.add(&spec.double(prev.representative())?, a)?;
                let next = u.coset(&next_rep)?;
                if next == start {
                    break;
                }
                cycle.push(next);
            }
            // canonical rotation: start the listing at the least representative
            let min_idx = cycle
                .iter()
                .enumerate()
                .min_by_key(|(_, c)| c.representative())
                .map(|(i, _)| i)
                .expect("nonempty");
            cycle.rotate_left(min_idx);

            let mut reps: Vec<GroupElement> =
                cycle.iter().map(|c| c.representative().clone()).collect();
            let key_members = u.members().members().to_vec();
            reps.sort();
            if seen.insert((key_members, reps), ()).is_none() {
                let minimal_period = cycle.len();
                orbits.push(PeriodicOrbit {
                    subgroup: u.clone(),
                    cosets: cycle,
                    minimal_period,
                });
            }
        }
    }
    orbits.sort_by(|x, y| {
        let kx = (
            x.subgroup.order(),
            x.subgroup.members().members().to_vec(),
            x.minimal_period,
            x.cosets[0].representative().clone(),
        );
        let ky = (
            y.subgroup.order(),
            y.subgroup.members().members().to_vec(),
            y.minimal_period,
            y.cosets[0].representative().clone(),
        );
        kx.cmp(&ky)
    });
    Ok(orbits)
}

#[derive(Clone, Debug)]
pub struct RegularityWitness {
    pub subgroup: Subgroup,
    pub element: GroupElement,
}

/// Outcome of the regularity decision. A negative verdict carries a
/// witness pair `(U, g)` whose doubling orbit never enters `U`.
#[derive(Clone, Debug)]
pub struct RegularityVerdict {
    pub regular: bool,
    pub witness: Option<RegularityWitness>,
}

/// Decides regularity: every trajectory converges iff for each invariant
/// subgroup `U` and every `g`, some doubling iterate `2^n g` lands in `U`.
/// Searching `n <= m` suffices because the doubling orbit visits at most
/// `m` distinct elements.
pub fn is_regular<W: Scalar>(op: &QsoOperator<W>) -> Result<RegularityVerdict> {
    let spec = op.spec().clone();
    let smu = op.mu().support();
    let m = spec.order();
    for u in invariant_subgroups(&spec, &smu)? {
        for g in spec.elements() {
            let mut t = g.clone();
            let mut enters = false;
            for _ in 0..=m {
                if u.contains(&t) {
                    enters = true;
                    break;
                }
                t = spec.double(&t)?;
            }
            if !enters {
                return Ok(RegularityVerdict {
                    regular: false,
                    witness: Some(RegularityWitness {
                        subgroup: u,
                        element: g,
                    }),
                });
            }
        }
    }
    Ok(RegularityVerdict {
        regular: true,
        witness: None,
    })
}

/// One row of a convergence-rate series.
#[derive(Clone, Copy, Debug)]
pub struct RatePoint {
    pub step: usize,
    /// `d_n = || V^n x - u(s(V^n x)) ||_max`.
    pub distance: f64,
    /// Order-of-convergence estimate
    /// `r_n = log(log(1/d_n) / log(1/d_{n-1}))`, which tends to `log 2`
    /// from below on double-exponentially converging runs. Absent where a
    /// neighbouring distance is 0 or at least 1.
    pub rate: Option<f64>,
    /// Set when `d_n` reached exactly 0 (exact hit or float underflow);
    /// the series stops here.
    pub terminal: bool,
}

/// Measures `d_n` and the rate estimate for `n <= n_max`, stopping early
/// only if the distance hits exactly zero.
pub fn convergence_rate<W: Scalar>(
    op: &QsoOperator<W>,
    x0: &SimplexPoint<W>,
    n_max: usize,
) -> Result<Vec<RatePoint>> {
    convergence_rate_with(op, x0, n_max, &IterationLimits::default())
}

pub fn convergence_rate_with<W: Scalar>(
    op: &QsoOperator<W>,
    x0: &SimplexPoint<W>,
    n_max: usize,
    limits: &IterationLimits,
) -> Result<Vec<RatePoint>> {
    if n_max < 2 {
        return Err(Error::InvalidParameter {
            what: "rate measurement needs n_max >= 2".into(),
        });
    }
    let forecast = predict_support_dynamics(&x0.support(), &op.mu().support())?;
    let mut series: Vec<RatePoint> = Vec::new();
    let mut state = x0.clone();
    for n in 0..=n_max {
        let target = SimplexPoint::<W>::uniform(&forecast.support_at(n))?;
        let d = state.distance(&target, Norm::Max)?.to_f64();
        let rate = series.last().and_then(|prev| {
            let (dp, dn) = (prev.distance, d);
            if dp > 0.0 && dp < 1.0 && dn > 0.0 && dn < 1.0 {
                Some(((1.0 / dn).ln() / (1.0 / dp).ln()).ln())
            } else {
                None
            }
        });
        let terminal = d == 0.0;
        series.push(RatePoint {
            step: n,
            distance: d,
            rate,
            terminal,
        });
        if terminal || n == n_max {
            break;
        }
        state = op.apply(&state)?;
        let bits = state.max_denominator_bits();
        if bits > limits.max_denominator_bits {
            return Err(Error::DenominatorBlowup {
                step: n + 1,
                bits,
                bound: limits.max_denominator_bits,
            });
        }
    }
    Ok(series)
}

/// The Cesàro average `(1/n) * sum_{k=0}^{n-1} V^k x0`.
pub fn ergodic_average<W: Scalar>(
    op: &QsoOperator<W>,
    x0: &SimplexPoint<W>,
    n: usize,
) -> Result<SimplexPoint<W>> {
    ergodic_average_with(op, x0, n, &IterationLimits::default())
}

pub fn ergodic_average_with<W: Scalar>(
    op: &QsoOperator<W>,
    x0: &SimplexPoint<W>,
    n: usize,
    limits: &IterationLimits,
) -> Result<SimplexPoint<W>> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            what: "ergodic average needs n >= 1".into(),
        });
    }
    let mut acc: Vec<W> = x0.weights().to_vec();
    let mut state = x0.clone();
    for step in 1..n {
        state = op.apply(&state)?;
        let bits = state.max_denominator_bits();
        if bits > limits.max_denominator_bits {
            return Err(Error::DenominatorBlowup {
                step,
                bits,
                bound: limits.max_denominator_bits,
            });
        }
        for (a, w) in acc.iter_mut().zip(state.weights()) {
            *a = a.add(w);
        }
    }
    let share = W::from_ratio(1, n as u64);
    let weights = acc.iter().map(|a| a.mul(&share)).collect();
    SimplexPoint::from_weights(x0.spec().clone(), weights)
}

/// Everything the structural theory says about one operator.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub regularity: RegularityVerdict,
    /// Subgroups invariant for the measure's support.
    pub invariant_subgroups: Vec<Subgroup>,
    pub periodic_orbits: Vec<PeriodicOrbit>,
    /// Cosets whose uniforms are fixed points (the period-1 orbits).
    pub fixed_points: Vec<Coset>,
}

pub fn classify<W: Scalar>(op: &QsoOperator<W>) -> Result<ClassificationReport> {
    let smu = op.mu().support();
    let invariant = invariant_subgroups(op.spec(), &smu)?;
    let orbits = periodic_orbits(op)?;
    let fixed_points = orbits
        .iter()
        .filter(|o| o.is_fixed_point())
        .map(|o| o.cosets[0].clone())
        .collect();
    Ok(ClassificationReport {
        regularity: is_regular(op)?,
        invariant_subgroups: invariant,
        periodic_orbits: orbits,
        fixed_points,
    })
}
