//! Lipschitz functions vanishing at the base point: norms, the de Leeuw
//! transform, and McShane-type extensions of partially defined functions.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::metric::{same_space, FiniteMetricSpace, PointSubset};
use crate::Q;

/// An element of `Lip_0(M)`: one exact value per point, zero at the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzFunction {
    space: Arc<FiniteMetricSpace>,
    values: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionError {
    ValueCountMismatch { expected: usize, got: usize },
    NonzeroAtBase,
}

impl core::fmt::Display for FunctionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FunctionError::ValueCountMismatch { expected, got } => {
                write!(f, "expected {expected} values, got {got}")
            }
            FunctionError::NonzeroAtBase => write!(f, "function value at the base point must be 0"),
        }
    }
}

impl LipschitzFunction {
    pub fn new(space: Arc<FiniteMetricSpace>, values: Vec<Q>) -> Result<Self, FunctionError> {
        if values.len() != space.len() {
            return Err(FunctionError::ValueCountMismatch {
                expected: space.len(),
                got: values.len(),
            });
        }
        if !values[space.base()].is_zero() {
            return Err(FunctionError::NonzeroAtBase);
        }
        Ok(LipschitzFunction { space, values })
    }

    pub fn zero(space: Arc<FiniteMetricSpace>) -> Self {
        let values = alloc::vec![Q::zero(); space.len()];
        LipschitzFunction { space, values }
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn value(&self, i: usize) -> &Q {
        &self.values[i]
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    /// The Lipschitz constant: max slope over point pairs.
    pub fn lip_norm(&self) -> Q {
        let n = self.space.len();
        let mut best = Q::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                let slope = self.slope_abs(i, j);
                if slope > best {
                    best = slope;
                }
            }
        }
        best
    }

    /// `|f(i) - f(j)| / d(i,j)`.
    pub fn slope_abs(&self, i: usize, j: usize) -> Q {
        ((&self.values[i] - &self.values[j]) / self.space.dist(i, j)).abs()
    }

    /// Signed slope `(f(i) - f(j)) / d(i,j)`.
    pub fn slope(&self, i: usize, j: usize) -> Q {
        (&self.values[i] - &self.values[j]) / self.space.dist(i, j)
    }

    /// The de Leeuw transform: slopes indexed over the off-diagonal pair
    /// set. Its sup norm equals the Lipschitz norm.
    pub fn de_leeuw(&self) -> DeLeeuwVector {
        let idx = PairIndexer::new(self.space.len());
        let mut values = Vec::with_capacity(idx.count());
        for (i, j) in idx.iter() {
            values.push(self.slope(i, j));
        }
        DeLeeuwVector { space: self.space.clone(), values }
    }

    pub fn scale(&self, c: &Q) -> Self {
        LipschitzFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

impl core::ops::Add for &LipschitzFunction {
    type Output = LipschitzFunction;
    fn add(self, rhs: &LipschitzFunction) -> LipschitzFunction {
        assert!(same_space(&self.space, &rhs.space), "functions on different spaces");
        LipschitzFunction {
            space: self.space.clone(),
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect(),
        }
    }
}

impl core::ops::Sub for &LipschitzFunction {
    type Output = LipschitzFunction;
    fn sub(self, rhs: &LipschitzFunction) -> LipschitzFunction {
        assert!(same_space(&self.space, &rhs.space), "functions on different spaces");
        LipschitzFunction {
            space: self.space.clone(),
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Canonical indexing of the off-diagonal pair set: ordered pairs `(i, j)`,
/// `i != j`, in row-major order with the diagonal skipped.
#[derive(Debug, Clone, Copy)]
pub struct PairIndexer {
    n: usize,
}

impl PairIndexer {
    pub fn new(n: usize) -> Self {
        PairIndexer { n }
    }

    pub fn count(&self) -> usize {
        self.n * (self.n - 1)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i != j && i < self.n && j < self.n);
        i * (self.n - 1) + if j < i { j } else { j - 1 }
    }

    pub fn pair(&self, idx: usize) -> (usize, usize) {
        let i = idx / (self.n - 1);
        let r = idx % (self.n - 1);
        let j = if r < i { r } else { r + 1 };
        (i, j)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.count()).map(|k| self.pair(k))
    }
}

/// A function on the off-diagonal pair set, e.g. a transformed Lipschitz
/// function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeLeeuwVector {
    space: Arc<FiniteMetricSpace>,
    values: Vec<Q>,
}

impl DeLeeuwVector {
    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn get(&self, x: usize, y: usize) -> &Q {
        &self.values[PairIndexer::new(self.space.len()).index(x, y)]
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn sup_norm(&self) -> Q {
        let mut best = Q::zero();
        for v in &self.values {
            let a = v.abs();
            if a > best {
                best = a;
            }
        }
        best
    }
}

/// A function defined on a subset `L` of the space, with one value per
/// member of `L` (in subset order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFunction {
    space: Arc<FiniteMetricSpace>,
    domain: PointSubset,
    values: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartialFunctionError {
    ValueCountMismatch { expected: usize, got: usize },
    NonzeroAtBase,
}

impl core::fmt::Display for PartialFunctionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PartialFunctionError::ValueCountMismatch { expected, got } => {
                write!(f, "expected {expected} values, got {got}")
            }
            PartialFunctionError::NonzeroAtBase => {
                write!(f, "a partial function containing the base point must vanish there")
            }
        }
    }
}

impl PartialFunction {
    pub fn new(
        space: Arc<FiniteMetricSpace>,
        domain: PointSubset,
        values: Vec<Q>,
    ) -> Result<Self, PartialFunctionError> {
        if values.len() != domain.len() {
            return Err(PartialFunctionError::ValueCountMismatch {
                expected: domain.len(),
                got: values.len(),
            });
        }
        if let Some(pos) = domain.members().iter().position(|&i| i == space.base()) {
            if !values[pos].is_zero() {
                return Err(PartialFunctionError::NonzeroAtBase);
            }
        }
        Ok(PartialFunction { space, domain, values })
    }

    /// Restriction of a total function to a subset.
    pub fn restrict(f: &LipschitzFunction, domain: PointSubset) -> Self {
        let values = domain.members().iter().map(|&i| f.value(i).clone()).collect();
        PartialFunction { space: f.space().clone(), domain, values }
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn domain(&self) -> &PointSubset {
        &self.domain
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn contains_base(&self) -> bool {
        self.domain.contains(self.space.base())
    }

    fn entries(&self) -> impl Iterator<Item = (usize, &Q)> + '_ {
        self.domain.members().iter().copied().zip(self.values.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendDirection {
    /// `f(y) = max_x (pf(x) - slope d(x,y))`.
    Sup,
    /// `f(y) = min_x (pf(x) + slope d(x,y))`.
    Inf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendError {
    BaseNotInDomain,
    EmptyDomain,
    NonpositiveSlope,
    /// The partial function is not slope-Lipschitz on its domain.
    NotSlopeLipschitz { x: usize, y: usize },
    /// Weighted extension: no admissible value exists at `y`; the pair of
    /// domain points gives the crossing interval endpoints.
    EmptyInterval { y: usize, lower_from: usize, upper_from: usize },
}

impl core::fmt::Display for ExtendError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ExtendError::BaseNotInDomain => {
                write!(f, "extension domain must contain the base point")
            }
            ExtendError::EmptyDomain => write!(f, "extension domain is empty"),
            ExtendError::NonpositiveSlope => write!(f, "extension slope must be positive"),
            ExtendError::NotSlopeLipschitz { x, y } => {
                write!(f, "partial function violates the slope bound on pair ({x},{y})")
            }
            ExtendError::EmptyInterval { y, lower_from, upper_from } => write!(
                f,
                "no admissible extension value at point {y}: lower bound from {lower_from} exceeds upper bound from {upper_from}"
            ),
        }
    }
}

/// McShane extension of a partial function to the whole space, without
/// increasing the Lipschitz constant. The sup variant is the least such
/// extension, the inf variant the greatest; both agree with the input on
/// its domain.
pub fn mcshane_extend(
    pf: &PartialFunction,
    slope: &Q,
    direction: ExtendDirection,
) -> Result<LipschitzFunction, ExtendError> {
    if !slope.is_positive() {
        return Err(ExtendError::NonpositiveSlope);
    }
    if pf.domain.is_empty() {
        return Err(ExtendError::EmptyDomain);
    }
    if !pf.contains_base() {
        return Err(ExtendError::BaseNotInDomain);
    }
    check_slope_lipschitz(pf, slope)?;
    let space = &pf.space;
    let mut values = Vec::with_capacity(space.len());
    for y in 0..space.len() {
        let mut best: Option<Q> = None;
        for (x, v) in pf.entries() {
            let cand = match direction {
                ExtendDirection::Sup => v - &(slope * space.dist(x, y)),
                ExtendDirection::Inf => v + &(slope * space.dist(x, y)),
            };
            let better = match (&best, direction) {
                (None, _) => true,
                (Some(b), ExtendDirection::Sup) => cand > *b,
                (Some(b), ExtendDirection::Inf) => cand < *b,
            };
            if better {
                best = Some(cand);
            }
        }
        values.push(best.expect("domain checked nonempty"));
    }
    Ok(LipschitzFunction { space: space.clone(), values })
}

fn check_slope_lipschitz(pf: &PartialFunction, slope: &Q) -> Result<(), ExtendError> {
    for (ai, (x, vx)) in pf.entries().enumerate() {
        for (y, vy) in pf.entries().skip(ai + 1) {
            if (vx - vy).abs() > slope * pf.space.dist(x, y) {
                return Err(ExtendError::NotSlopeLipschitz { x, y });
            }
        }
    }
    Ok(())
}

/// Weighted sup-extension `f(y) = max_{x in L} (pf(x) + w(x) - d(x,y))` for
/// `y` outside `L`, keeping `pf` on `L`. This extends jointly with a bump
/// function whose modulus on `L` is `w`: admissibility requires, for every
/// target `y`, that
/// `max_x (pf(x) + w(x) - d(x,y)) <= min_x (pf(x) - w(x) + d(x,y))`,
/// which is exactly what is checked here.
pub fn weighted_mcshane_extend(
    pf: &PartialFunction,
    weights: &[Q],
) -> Result<LipschitzFunction, ExtendError> {
    if pf.domain.is_empty() {
        return Err(ExtendError::EmptyDomain);
    }
    if !pf.contains_base() {
        return Err(ExtendError::BaseNotInDomain);
    }
    assert_eq!(weights.len(), pf.domain.len(), "one weight per domain point");
    let space = &pf.space;
    let mut values = alloc::vec![Q::zero(); space.len()];
    for (x, v) in pf.entries() {
        values[x] = v.clone();
    }
    for y in 0..space.len() {
        if pf.domain.contains(y) {
            continue;
        }
        let mut lower: Option<(Q, usize)> = None;
        let mut upper: Option<(Q, usize)> = None;
        for (k, (x, v)) in pf.entries().enumerate() {
            let w = &weights[k];
            let d = space.dist(x, y);
            let lo = &(v + w) - d;
            let hi = &(v - w) + d;
            if lower.as_ref().map_or(true, |(b, _)| lo > *b) {
                lower = Some((lo, x));
            }
            if upper.as_ref().map_or(true, |(b, _)| hi < *b) {
                upper = Some((hi, x));
            }
        }
        let (lo, lo_from) = lower.expect("domain checked nonempty");
        let (hi, hi_from) = upper.expect("domain checked nonempty");
        if lo > hi {
            return Err(ExtendError::EmptyInterval { y, lower_from: lo_from, upper_from: hi_from });
        }
        values[y] = lo;
    }
    Ok(LipschitzFunction { space: space.clone(), values })
}
