//! Probability vectors over a group.
//!
//! A [`SimplexPoint`] stores one weight per group element (dense, in the
//! canonical element order). The support map is exact in the rational
//! backend; the float backend applies a strict positivity threshold.

use crate::abelian::{ElementSet, GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Float-backend support threshold: below every convergence tolerance used
/// in practice, above accumulated rounding noise at desk-scale group orders.
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-12;

/// Tolerated deviation of a float weight vector's total mass from 1.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

/// The support of a point: its set of strictly positive coordinates.
pub type Support = ElementSet;

/// Distance norms on weight vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    /// Max-norm: largest coordinate deviation.
    Max,
    /// Sum-norm: total variation times two.
    Sum,
}

/// A probability distribution on a finite Abelian group.
#[derive(Clone, PartialEq)]
pub struct SimplexPoint<W: Scalar> {
    spec: GroupSpec,
    weights: Vec<W>,
}

impl<W: Scalar> std::fmt::Debug for SimplexPoint<W> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut map = f.debug_map();
        for (g, w) in self.iter() {
            map.entry(&g, &format_args!("{w}"));
        }
        map.finish()
    }
}

impl<W: Scalar> SimplexPoint<W> {
    /// Builds a point from dense weights in canonical element order,
    /// validating nonnegativity and total mass.
    pub fn from_weights(spec: GroupSpec, weights: Vec<W>) -> Result<Self> {
        let m = spec.order() as usize;
        if weights.len() != m {
            return Err(Error::WeightCount {
                expected: m,
                got: weights.len(),
            });
        }
        let zero = W::zero();
        for (i, w) in weights.iter().enumerate() {
            if *w < zero {
                return Err(Error::NegativeWeight {
                    element: spec.element_at(i as u64).residues().to_vec(),
                });
            }
        }
        let sum = weights.iter().fold(W::zero(), |acc, w| acc.add(w));
        let ok = if W::EXACT {
            sum == W::one()
        } else {
            sum.sub(&W::one()).abs().to_f64() <= FLOAT_SUM_TOLERANCE
        };
        if !ok {
            return Err(Error::WeightSum {
                sum: sum.to_string(),
            });
        }
        Ok(Self { spec, weights })
    }

    /// Builds a point from (element, weight) pairs; omitted elements get
    /// weight zero, repeated elements are rejected.
    pub fn from_pairs(
        spec: GroupSpec,
        pairs: impl IntoIterator<Item = (GroupElement, W)>,
    ) -> Result<Self> {
        let m = spec.order() as usize;
        let mut weights = vec![W::zero(); m];
        let mut filled = vec![false; m];
        for (g, w) in pairs {
            let idx = spec.index_of(&g)? as usize;
            if filled[idx] {
                return Err(Error::DuplicateElement {
                    element: g.residues().to_vec(),
                });
            }
            filled[idx] = true;
            weights[idx] = w;
        }
        Self::from_weights(spec, weights)
    }

    pub(crate) fn from_weights_unchecked(spec: GroupSpec, weights: Vec<W>) -> Self {
        debug_assert_eq!(spec.order() as usize, weights.len());
        Self { spec, weights }
    }

    /// The uniform distribution on a nonempty element set.
    pub fn uniform(set: &ElementSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySet {
                operation: "uniform",
            });
        }
        let spec = set.spec().clone();
        let share = W::from_ratio(1, set.len() as u64);
        let mut weights = vec![W::zero(); spec.order() as usize];
        for g in set.iter() {
            let idx = spec.index_of(g)? as usize;
            weights[idx] = share.clone();
        }
        Ok(Self { spec, weights })
    }

    /// The center of the simplex: uniform on the whole group.
    pub fn uniform_on_group(spec: &GroupSpec) -> Self {
        Self::uniform(&ElementSet::full(spec.clone())).expect("group is nonempty")
    }

    /// The point mass at `g`.
    pub fn point_mass(spec: &GroupSpec, g: &GroupElement) -> Result<Self> {
        let set = ElementSet::singleton(spec.clone(), g.clone())?;
        Self::uniform(&set)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Dense weights in canonical element order.
    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn weight(&self, g: &GroupElement) -> Result<&W> {
        Ok(&self.weights[self.spec.index_of(g)? as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (GroupElement, &W)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(|(i, w)| (self.spec.element_at(i as u64), w))
    }

    /// Support under the default float threshold (exact in the rational
    /// backend, where the threshold is ignored).
    pub fn support(&self) -> Support {
        self.support_with_threshold(DEFAULT_SUPPORT_THRESHOLD)
    }

    pub fn support_with_threshold(&self, threshold: f64) -> Support {
        let members = self
            .iter()
            .filter(|(_, w)| w.in_support(threshold))
            .map(|(g, _)| g);
        ElementSet::new(self.spec.clone(), members).expect("elements come from the spec")
    }

    /// `||self - other||` under the chosen norm.
    pub fn distance(&self, other: &Self, norm: Norm) -> Result<W> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                left: self.spec.cyclic_orders().to_vec(),
                right: other.spec.cyclic_orders().to_vec(),
            });
        }
        let mut acc = W::zero();
        for (a, b) in self.weights.iter().zip(&other.weights) {
            let diff = a.sub(b).abs();
            match norm {
                Norm::Max => {
                    if diff > acc {
                        acc = diff;
                    }
                }
                Norm::Sum => acc = acc.add(&diff),
            }
        }
        Ok(acc)
    }

    /// Smallest weight attained on the support, if the point has one.
    pub fn min_support_weight(&self) -> Option<&W> {
        self.weights
            .iter()
            .filter(|w| !w.is_zero())
            .min_by(|a, b| a.partial_cmp(b).expect("weights are comparable"))
    }

    /// Largest denominator bit-size over all weights (0 for floats).
    pub fn max_denominator_bits(&self) -> u64 {
        self.weights
            .iter()
            .map(Scalar::denominator_bits)
            .max()
            .unwrap_or(0)
    }

    /// Converts to the float backend.
    pub fn to_float(&self) -> SimplexPoint<f64> {
        let weights: Vec<f64> = self.weights.iter().map(Scalar::to_f64).collect();
        SimplexPoint::from_weights_unchecked(self.spec.clone(), weights)
    }
}
