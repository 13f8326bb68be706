//! Operators `V(x) = mu (*) x (*) x` built from a heredity measure `mu`,
//! where `(*)` is additive convolution over the group.
//!
//! `apply` factors the update into two convolutions (`O(m^2)` per step);
//! `apply_oracle` evaluates the defining triple sum over the coefficient
//! table (`O(m^3)`) and exists to cross-check the fast path.

use crate::abelian::{GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::simplex::{SimplexPoint, FLOAT_SUM_TOLERANCE};

/// Resource limits for trajectory iteration.
#[derive(Clone, Copy, Debug)]
pub struct IterationLimits {
    /// Largest number of steps a single call may take.
    pub max_steps: usize,
    /// Rational-backend guard: iteration stops with a capacity error once
    /// any weight's denominator exceeds this bit size (denominators double
    /// under each squaring step). Never trips for floats.
    pub max_denominator_bits: u64,
}

impl Default for IterationLimits {
    fn default() -> Self {
        Self {
            max_steps: 10_000,
            max_denominator_bits: 4096,
        }
    }
}

/// Result of a coefficient-table audit.
#[derive(Clone, Copy, Debug)]
pub struct StochasticityReport {
    pub pairs_checked: usize,
    /// Largest observed `|sum_k p_{ij,k} - 1|` (always 0 exactly in the
    /// rational backend).
    pub max_row_sum_deviation: f64,
}

/// A quadratic operator determined by a group and a heredity measure.
#[derive(Clone, Debug, PartialEq)]
pub struct QsoOperator<W: Scalar> {
    mu: SimplexPoint<W>,
}

impl<W: Scalar> QsoOperator<W> {
    pub fn new(mu: SimplexPoint<W>) -> Self {
        Self { mu }
    }

    pub fn spec(&self) -> &GroupSpec {
        self.mu.spec()
    }

    pub fn mu(&self) -> &SimplexPoint<W> {
        &self.mu
    }

    /// The heredity coefficient `p_{ij,k} = mu_{k-i-j}`.
    pub fn coefficient(
        &self,
        i: &GroupElement,
        j: &GroupElement,
        k: &GroupElement,
    ) -> Result<&W> {
        let spec = self.spec();
        let idx = spec.sub(&spec.sub(k, i)?, j)?;
        self.mu.weight(&idx)
    }

    /// Audits the induced coefficient table: symmetry `p_{ij,k} = p_{ji,k}`
    /// and row sums `sum_k p_{ij,k} = 1`, for every pair `(i, j)`.
    pub fn check_stochasticity(&self) -> Result<StochasticityReport> {
        let spec = self.spec();
        let elements: Vec<GroupElement> = spec.elements().collect();
        let mut bad_pairs = Vec::new();
        let mut max_dev = 0.0f64;
        let mut pairs = 0;
        for i in &elements {
            for j in &elements {
                pairs += 1;
                let mut row_sum = W::zero();
                let mut symmetric = true;
                for k in &elements {
                    let p = self.coefficient(i, j, k)?;
                    symmetric &= p == self.coefficient(j, i, k)?;
                    row_sum = row_sum.add(p);
                }
                let dev = row_sum.sub(&W::one()).abs().to_f64();
                max_dev = max_dev.max(dev);
                let row_ok = if W::EXACT {
                    row_sum == W::one()
                } else {
                    dev <= FLOAT_SUM_TOLERANCE
                };
                if !symmetric || !row_ok {
                    bad_pairs.push((i.residues().to_vec(), j.residues().to_vec()));
                }
            }
        }
        if bad_pairs.is_empty() {
            Ok(StochasticityReport {
                pairs_checked: pairs,
                max_row_sum_deviation: max_dev,
            })
        } else {
            Err(Error::Stochasticity { pairs: bad_pairs })
        }
    }

    /// One step of the dynamics: `mu (*) x (*) x`.
    pub fn apply(&self, x: &SimplexPoint<W>) -> Result<SimplexPoint<W>> {
        let squared = convolve(x, x)?;
        convolve(&self.mu, &squared)
    }

    /// Reference implementation: `x'_k = sum_{i,j} p_{ij,k} x_i x_j`
    /// evaluated directly over the coefficient table, independent of the
    /// convolution path.
    pub fn apply_oracle(&self, x: &SimplexPoint<W>) -> Result<SimplexPoint<W>> {
        let spec = self.spec();
        if spec != x.spec() {
            return Err(Error::SpecMismatch {
                left: spec.cyclic_orders().to_vec(),
                right: x.spec().cyclic_orders().to_vec(),
            });
        }
        let elements: Vec<GroupElement> = spec.elements().collect();
        let mut out = Vec::with_capacity(elements.len());
        for k in &elements {
            let mut acc = W::zero();
            for i in &elements {
                let xi = x.weight(i)?;
                if xi.is_zero() {
                    continue;
                }
                for j in &elements {
                    let term = self.coefficient(i, j, k)?.mul(xi).mul(x.weight(j)?);
                    acc = acc.add(&term);
                }
            }
            out.push(acc);
        }
        SimplexPoint::from_weights(spec.clone(), out)
    }
}

/// Additive group convolution of two distributions:
/// `(a (*) b)_k = sum_i a_i b_{k-i}`.
///
/// Exact inputs give an exact distribution; float results are renormalized
/// by the computed total so that long iterations stay on the simplex.
pub fn convolve<W: Scalar>(a: &SimplexPoint<W>, b: &SimplexPoint<W>) -> Result<SimplexPoint<W>> {
    let spec = a.spec();
    if spec != b.spec() {
        return Err(Error::SpecMismatch {
            left: spec.cyclic_orders().to_vec(),
            right: b.spec().cyclic_orders().to_vec(),
        });
    }
    let m = spec.order() as usize;
    let mut out = vec![W::zero(); m];
    for (i, wa) in a.weights().iter().enumerate() {
        if wa.is_zero() {
            continue;
        }
        let gi = spec.element_at(i as u64);
        for (j, wb) in b.weights().iter().enumerate() {
            if wb.is_zero() {
                continue;
            }
            let gj = spec.element_at(j as u64);
            let k = spec.index_of(&spec.add(&gi, &gj)?)? as usize;
            out[k] = out[k].add(&wa.mul(wb));
        }
    }
    let sum = out.iter().fold(W::zero(), |acc, w| acc.add(w));
    if sum != W::one() {
        for w in &mut out {
            *w = w.div(&sum);
        }
    }
    Ok(SimplexPoint::from_weights_unchecked(spec.clone(), out))
}

/// A recorded orbit segment `x0, Vx0, ..., V^n x0`.
#[derive(Clone, Debug)]
pub struct Trajectory<W: Scalar> {
    operator: QsoOperator<W>,
    states: Vec<SimplexPoint<W>>,
}

impl<W: Scalar> Trajectory<W> {
    pub fn operator(&self) -> &QsoOperator<W> {
        &self.operator
    }

    pub fn initial(&self) -> &SimplexPoint<W> {
        &self.states[0]
    }

    pub fn states(&self) -> &[SimplexPoint<W>] {
        &self.states
    }

    /// Number of applied steps (states minus one).
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }
}

/// Iterates the operator `n` times from `x0`, recording every state, under
/// the default limits.
pub fn iterate<W: Scalar>(
    op: &QsoOperator<W>,
    x0: &SimplexPoint<W>,
    n: usize,
) -> Result<Trajectory<W>> {
    iterate_with(op, x0, n, &IterationLimits::default())
}

pub fn iterate_with<W: Scalar>(
    op: &QsoOperator<W>,
    x0: &SimplexPoint<W>,
    n: usize,
    limits: &IterationLimits,
) -> Result<Trajectory<W>> {
    if n > limits.max_steps {
        return Err(Error::IterationBudget {
            requested: n,
            budget: limits.max_steps,
        });
    }
    let mut states = Vec::with_capacity(n + 1);
    states.push(x0.clone());
    for step in 1..=n {
        let next = op.apply(states.last().expect("nonempty"))?;
        let bits = next.max_denominator_bits();
        if bits > limits.max_denominator_bits {
            return Err(Error::DenominatorBlowup {
                step,
                bits,
                bound: limits.max_denominator_bits,
            });
        }
        states.push(next);
    }
    Ok(Trajectory {
        operator: op.clone(),
        states,
    })
}

/// Streaming variant of [`iterate`]: keeps only the final state. Intended
/// for long float runs where the full history is not needed.
pub fn nth_iterate<W: Scalar>(
    op: &QsoOperator<W>,
    x0: &SimplexPoint<W>,
    n: usize,
) -> Result<SimplexPoint<W>> {
    nth_iterate_with(op, x0, n, &IterationLimits::default())
}

pub fn nth_iterate_with<W: Scalar>(
    op: &QsoOperator<W>,
    x0: &SimplexPoint<W>,
    n: usize,
    limits: &IterationLimits,
) -> Result<SimplexPoint<W>> {
    if n > limits.max_steps {
        return Err(Error::IterationBudget {
            requested: n,
            budget: limits.max_steps,
        });
    }
    let mut state = x0.clone();
    for step in 1..=n {
        state = op.apply(&state)?;
        let bits = state.max_denominator_bits();
        if bits > limits.max_denominator_bits {
            return Err(Error::DenominatorBlowup {
                step,
                bits,
                bound: limits.max_denominator_bits,
            });
        }
    }
    Ok(state)
}
