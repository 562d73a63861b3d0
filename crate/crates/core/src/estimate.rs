//! Sampled K-function estimates.

use crate::error::{invalid, Result};

/// One sample `(r, K(r))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KSample {
    pub r: f64,
    pub value: f64,
}

/// A K-function estimate sampled at strictly increasing radii (possibly non-uniformly).
///
/// Read as a right-continuous step function with an implicit `(0, 0)` start, see
/// [`EstimateCurve::value_at`].
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EstimateCurve {
    samples: Vec<KSample>,
}

impl EstimateCurve {
    pub fn new(samples: Vec<KSample>) -> Result<Self> {
        for (k, s) in samples.iter().enumerate() {
            if !(s.r >= 0.0) || !s.r.is_finite() || !s.value.is_finite() {
                return Err(invalid(format!("sample {k} is not finite and non-negative: {s:?}")));
            }
            if k > 0 && samples[k - 1].r >= s.r {
                return Err(invalid(format!("radii must strictly increase at sample {k}")));
            }
        }
        Ok(EstimateCurve { samples })
    }

    pub(crate) fn from_parts(radii: &[f64], values: impl IntoIterator<Item = f64>) -> Result<Self> {
        EstimateCurve::new(radii.iter().zip(values).map(|(&r, value)| KSample { r, value }).collect())
    }

    pub fn samples(&self) -> &[KSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.r)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.value)
    }

    pub fn last(&self) -> Option<KSample> {
        self.samples.last().copied()
    }

    /// Value of the last sample with radius `<= r`, or 0 before the first sample.
    pub fn value_at(&self, r: f64) -> f64 {
        let k = self.samples.partition_point(|s| s.r <= r);
        if k == 0 {
            0.0
        } else {
            self.samples[k - 1].value
        }
    }

    /// `true` when values never decrease.
    pub fn is_monotone(&self) -> bool {
        self.samples.windows(2).all(|w| w[0].value <= w[1].value)
    }
}

/// Cumulative ordered-pair counts `#{pairs with distance <= r_k}` at every distinct pair
/// distance `r_k`: the raw output of the sorting estimator before normalization.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StepCounts {
    radii: Vec<u64>,
    counts: Vec<u64>,
}

impl StepCounts {
    /// Builds the step function from an ascending-sorted list of pair distances: equal
    /// radii collapse onto the largest cumulative index (exact float equality).
    pub fn from_sorted(distances: &[f64]) -> Self {
        let mut radii = Vec::new();
        let mut counts = Vec::new();
        for (k, &d) in distances.iter().enumerate() {
            debug_assert!(k == 0 || distances[k - 1] <= d);
            let is_last_of_run = distances.get(k + 1) != Some(&d);
            if is_last_of_run {
                radii.push(d.to_bits());
                counts.push(k as u64 + 1);
            }
        }
        StepCounts { radii, counts }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn radii(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.radii.iter().map(|&b| f64::from_bits(b))
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of pairs at distance `<= r`.
    pub fn count_at(&self, r: f64) -> u64 {
        let k = self.radii.partition_point(|&b| f64::from_bits(b) <= r);
        if k == 0 {
            0
        } else {
            self.counts[k - 1]
        }
    }

    /// `(r_k, count_k · norm)` for every step.
    pub fn scaled(&self, norm: f64) -> EstimateCurve {
        EstimateCurve {
            samples: self.radii().zip(&self.counts).map(|(r, &c)| KSample { r, value: c as f64 * norm }).collect(),
        }
    }
}
