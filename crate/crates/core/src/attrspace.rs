//! Attribute spaces, categorical distributions over their outcomes, and the
//! extreme-point sweep used by the trend-line experiments.
//!
//! An [`AttributeSpace`] is an ordered list of categorical attributes. Its
//! outcomes are the Cartesian product of the attribute values, enumerated in
//! lexicographic order of attribute index (the first attribute varies
//! slowest). A compound attribute such as (gender, hair colour) therefore has
//! `k = 2 * 2 = 4` outcomes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-entry tolerance used when comparing distributions and checking sums.
pub const DIST_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct AttributeSpace {
    attributes: Vec<Attribute>,
    k: usize,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    attributes: Vec<Attribute>,
}

impl TryFrom<RawSpace> for AttributeSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        AttributeSpace::new(raw.attributes)
    }
}

impl From<AttributeSpace> for RawSpace {
    fn from(space: AttributeSpace) -> Self {
        RawSpace {
            attributes: space.attributes,
        }
    }
}

impl AttributeSpace {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::InvalidSpace("no attributes".into()));
        }
        let mut k: usize = 1;
        for attr in &attributes {
            if attr.values.is_empty() {
                return Err(Error::InvalidSpace(format!(
                    "attribute `{}` has no values",
                    attr.name
                )));
            }
            let mut seen = std::collections::HashSet::new();
            for v in &attr.values {
                if !seen.insert(v.as_str()) {
                    return Err(Error::InvalidSpace(format!(
                        "attribute `{}` repeats value `{v}`",
                        attr.name
                    )));
                }
            }
            k = k
                .checked_mul(attr.values.len())
                .ok_or_else(|| Error::InvalidSpace("cardinality overflows".into()))?;
        }
        if k < 2 {
            return Err(Error::InvalidSpace(format!(
                "cardinality k={k}, need k >= 2"
            )));
        }
        Ok(AttributeSpace { attributes, k })
    }

    /// A single anonymous attribute `u` with outcomes labelled `0..k`.
    pub fn with_cardinality(k: usize) -> Result<Self> {
        AttributeSpace::new(vec![Attribute {
            name: "u".into(),
            values: (0..k).map(|i| i.to_string()).collect(),
        }])
    }

    /// `count` binary attributes, giving `k = 2^count`.
    pub fn binary(count: usize) -> Result<Self> {
        AttributeSpace::new(
            (0..count)
                .map(|i| Attribute {
                    name: format!("a{i}"),
                    values: vec!["0".into(), "1".into()],
                })
                .collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    /// Attribute values making up outcome `index`.
    pub fn outcome(&self, index: usize) -> Option<Vec<&str>> {
        if index >= self.k {
            return None;
        }
        let mut rem = index;
        let mut stride = self.k;
        let mut out = Vec::with_capacity(self.attributes.len());
        for attr in &self.attributes {
            stride /= attr.values.len();
            out.push(attr.values[rem / stride].as_str());
            rem %= stride;
        }
        Some(out)
    }

    /// Human-readable label such as `male/black`.
    pub fn label(&self, index: usize) -> Option<String> {
        self.outcome(index).map(|vals| vals.join("/"))
    }

    pub fn index_of(&self, values: &[&str]) -> Option<usize> {
        if values.len() != self.attributes.len() {
            return None;
        }
        let mut index = 0;
        for (attr, v) in self.attributes.iter().zip(values) {
            let pos = attr.values.iter().position(|x| x == v)?;
            index = index * attr.values.len() + pos;
        }
        Some(index)
    }

    pub fn one_hot(&self, index: usize) -> Option<Vec<f64>> {
        (index < self.k).then(|| {
            let mut v = vec![0.0; self.k];
            v[index] = 1.0;
            v
        })
    }

    /// Inverse of [`one_hot`](Self::one_hot); `None` unless `v` is exactly
    /// one-hot of length `k`.
    pub fn index_of_one_hot(&self, v: &[f64]) -> Option<usize> {
        if v.len() != self.k {
            return None;
        }
        let mut hit = None;
        for (i, &x) in v.iter().enumerate() {
            if x == 1.0 {
                if hit.is_some() {
                    return None;
                }
                hit = Some(i);
            } else if x != 0.0 {
                return None;
            }
        }
        hit
    }
}

/// A probability vector over the `k` outcomes of an attribute space.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CategoricalDistribution {
    p: Vec<f64>,
}

impl CategoricalDistribution {
    /// Validates and renormalizes `p`. Entries must be finite and
    /// non-negative and sum to one within [`DIST_TOL`].
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "need at least 2 outcomes, got {}",
                p.len()
            )));
        }
        if let Some((i, x)) = p
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_finite() || **x < 0.0)
        {
            return Err(Error::InvalidDistribution(format!("entry {i} is {x}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > DIST_TOL {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self::renormalized(p))
    }

    /// Like [`new`](Self::new), but checks the length against `space`.
    pub fn on(space: &AttributeSpace, p: Vec<f64>) -> Result<Self> {
        if p.len() != space.k() {
            return Err(Error::DimensionMismatch {
                expected: space.k(),
                found: p.len(),
            });
        }
        Self::new(p)
    }

    fn renormalized(mut p: Vec<f64>) -> Self {
        let sum: f64 = p.iter().sum();
        if sum != 1.0 {
            p.iter_mut().for_each(|x| *x /= sum);
        }
        CategoricalDistribution { p }
    }

    /// The fair reference: every entry is `1/k`.
    pub fn uniform(space: &AttributeSpace) -> Self {
        Self::uniform_k(space.k())
    }

    pub(crate) fn uniform_k(k: usize) -> Self {
        CategoricalDistribution {
            p: vec![1.0 / k as f64; k],
        }
    }

    /// All mass on outcome `index`.
    pub fn indicator(space: &AttributeSpace, index: usize) -> Result<Self> {
        Self::indicator_k(space.k(), index)
    }

    pub(crate) fn indicator_k(k: usize, index: usize) -> Result<Self> {
        if index >= k {
            return Err(Error::param("index", format!("{index} >= k={k}")));
        }
        let mut p = vec![0.0; k];
        p[index] = 1.0;
        Ok(CategoricalDistribution { p })
    }

    pub fn from_counts(space: &AttributeSpace, counts: &[f64]) -> Result<Self> {
        if counts.len() != space.k() {
            return Err(Error::DimensionMismatch {
                expected: space.k(),
                found: counts.len(),
            });
        }
        if let Some(c) = counts.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::param("counts", format!("invalid count {c}")));
        }
        let total: f64 = counts.iter().sum();
        if total <= 0.0 {
            return Err(Error::param("counts", "all counts are zero"));
        }
        Ok(Self::renormalized(
            counts.iter().map(|c| c / total).collect(),
        ))
    }

    pub fn k(&self) -> usize {
        self.p.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.p
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.k() as f64;
        self.p.iter().all(|x| (x - u).abs() <= DIST_TOL)
    }

    /// Entry-wise equality within [`DIST_TOL`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.k() == other.k()
            && self
                .p
                .iter()
                .zip(&other.p)
                .all(|(a, b)| (a - b).abs() <= DIST_TOL)
    }

    /// Reorders outcomes so that entry `i` of the result is entry `perm[i]`
    /// of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                found: perm.len(),
            });
        }
        let mut seen = vec![false; self.k()];
        for &j in perm {
            if j >= self.k() || std::mem::replace(&mut seen[j], true) {
                return Err(Error::param("perm", "not a permutation"));
            }
        }
        Ok(CategoricalDistribution {
            p: perm.iter().map(|&j| self.p[j]).collect(),
        })
    }

    pub(crate) fn check_same_k(&self, other: &Self) -> Result<()> {
        if self.k() != other.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                found: other.k(),
            });
        }
        Ok(())
    }

    /// Wraps an already-valid vector without renormalizing.
    pub(crate) fn from_valid(p: Vec<f64>) -> Self {
        debug_assert!((p.iter().sum::<f64>() - 1.0).abs() <= DIST_TOL);
        CategoricalDistribution { p }
    }
}

impl<'de> Deserialize<'de> for CategoricalDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = Vec::<f64>::deserialize(d)?;
        CategoricalDistribution::new(p).map_err(serde::de::Error::custom)
    }
}

/// One AB-EP (absolutely biased extreme point) per outcome: the `i`-th result
/// puts all mass on outcome `i`.
pub fn ab_extreme_points(space: &AttributeSpace) -> Vec<CategoricalDistribution> {
    (0..space.k())
        .map(|i| CategoricalDistribution::indicator_k(space.k(), i).expect("index < k"))
        .collect()
}

/// Sweep from the AB-EP on outcome 0 to the uniform distribution.
pub fn sweep(space: &AttributeSpace, step: f64) -> Result<Vec<CategoricalDistribution>> {
    sweep_from(space, 0, step)
}

/// Stepwise interpolation from the AB-EP on outcome `start` to the uniform
/// distribution.
///
/// Each epoch moves `step` of probability mass from `start` into the
/// lowest-index other outcome that is still below `1/k`. The last transfer
/// into each outcome is clamped so it lands exactly on `1/k`, which makes the
/// uniform endpoint reachable for any `k` and step. The first element is the
/// AB-EP itself and the last is exactly uniform.
pub fn sweep_from(
    space: &AttributeSpace,
    start: usize,
    step: f64,
) -> Result<Vec<CategoricalDistribution>> {
    let k = space.k();
    let target = 1.0 / k as f64;
    if step.is_nan() || step <= 0.0 || step > target * (1.0 + 1e-12) {
        return Err(Error::param(
            "step",
            format!("{step} outside (0, 1/k] for k={k}"),
        ));
    }
    if start >= k {
        return Err(Error::param("start", format!("{start} >= k={k}")));
    }

    let mut filled = vec![0.0; k];
    let mut out = vec![CategoricalDistribution::indicator_k(k, start)?];
    for bin in (0..k).filter(|&i| i != start) {
        let mut transfers = 0u32;
        loop {
            transfers += 1;
            let next = f64::from(transfers) * step;
            let full = next >= target - 1e-12;
            filled[bin] = if full { target } else { next };
            let mut p = filled.clone();
            p[start] = 1.0 - filled.iter().sum::<f64>();
            out.push(CategoricalDistribution::from_valid(p));
            if full {
                break;
            }
        }
    }
    // 1 - (k-1)/k is not always exactly 1/k in floating point.
    *out.last_mut().expect("at least one transfer") = CategoricalDistribution::uniform_k(k);
    Ok(out)
}
