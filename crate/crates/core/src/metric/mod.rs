//! Finite pointed metric spaces: validation, balls, subsets, generators.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::format_rational;
use crate::Q;

mod gen;

pub use gen::{
    gen_example_d2p_not_ltp, gen_example_seqltp_not_sltp, gen_example_sltp_not_seq, gen_family,
    gen_kn, BaseMode, FamilyKind, GenError, DEFAULT_POINT_CAP,
};

/// A finite metric space with a distinguished base point.
///
/// Distances are exact rationals. Construction checks shape only; metric
/// axioms are checked separately by [`FiniteMetricSpace::validate`] so that
/// untrusted input can be loaded first and reported on afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    points: Vec<String>,
    base: usize,
    dist: Vec<Vec<Q>>,
}

/// Structural problems that make a distance matrix unusable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    TooFewPoints { got: usize },
    BaseOutOfRange { base: usize, points: usize },
    DimensionMismatch { expected: usize, row: usize, got: usize },
    RowCountMismatch { expected: usize, got: usize },
    DuplicatePointName { name: String },
}

impl core::fmt::Display for SpaceError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SpaceError::TooFewPoints { got } => {
                write!(f, "a metric space needs at least 2 points, got {got}")
            }
            SpaceError::BaseOutOfRange { base, points } => {
                write!(f, "base index {base} out of range for {points} points")
            }
            SpaceError::DimensionMismatch { expected, row, got } => {
                write!(f, "distance row {row} has {got} entries, expected {expected}")
            }
            SpaceError::RowCountMismatch { expected, got } => {
                write!(f, "distance matrix has {got} rows, expected {expected}")
            }
            SpaceError::DuplicatePointName { name } => {
                write!(f, "duplicate point name {name:?}")
            }
        }
    }
}

/// One violated metric axiom, with the offending indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricAxiomViolation {
    NonzeroDiagonal { i: usize },
    NonpositiveDistance { i: usize, j: usize },
    Asymmetric { i: usize, j: usize },
    /// `d(x,y) > d(x,via) + d(via,y)`.
    Triangle { x: usize, via: usize, y: usize, lhs: Q, rhs: Q },
}

/// Outcome of a full axiom check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationReport {
    Pass,
    Violation(MetricAxiomViolation),
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, ValidationReport::Pass)
    }
}

impl core::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ValidationReport::Pass => write!(f, "pass"),
            ValidationReport::Violation(v) => match v {
                MetricAxiomViolation::NonzeroDiagonal { i } => {
                    write!(f, "d({i},{i}) is nonzero")
                }
                MetricAxiomViolation::NonpositiveDistance { i, j } => {
                    write!(f, "d({i},{j}) is not positive")
                }
                MetricAxiomViolation::Asymmetric { i, j } => {
                    write!(f, "d({i},{j}) differs from d({j},{i})")
                }
                MetricAxiomViolation::Triangle { x, via, y, lhs, rhs } => write!(
                    f,
                    "triangle violation ({x},{via},{y}): {} > {}",
                    format_rational(lhs),
                    format_rational(rhs)
                ),
            },
        }
    }
}

impl FiniteMetricSpace {
    /// Builds a space after checking the matrix shape (not the axioms).
    pub fn new(points: Vec<String>, base: usize, dist: Vec<Vec<Q>>) -> Result<Self, SpaceError> {
        let n = points.len();
        if n < 2 {
            return Err(SpaceError::TooFewPoints { got: n });
        }
        if base >= n {
            return Err(SpaceError::BaseOutOfRange { base, points: n });
        }
        if dist.len() != n {
            return Err(SpaceError::RowCountMismatch { expected: n, got: dist.len() });
        }
        for (row, r) in dist.iter().enumerate() {
            if r.len() != n {
                return Err(SpaceError::DimensionMismatch { expected: n, row, got: r.len() });
            }
        }
        for (i, a) in points.iter().enumerate() {
            if points[..i].iter().any(|b| b == a) {
                return Err(SpaceError::DuplicatePointName { name: a.clone() });
            }
        }
        Ok(FiniteMetricSpace { points, base, dist })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn point_name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn point_names(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn dist(&self, i: usize, j: usize) -> &Q {
        &self.dist[i][j]
    }

    pub fn dist_matrix(&self) -> &[Vec<Q>] {
        &self.dist
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> Q {
        let mut best = Q::zero();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if self.dist[i][j] > best {
                    best = self.dist[i][j].clone();
                }
            }
        }
        best
    }

    /// Smallest positive pairwise distance.
    pub fn min_positive_distance(&self) -> Q {
        let mut best: Option<Q> = None;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let d = &self.dist[i][j];
                if d.is_positive() && best.as_ref().map_or(true, |b| d < b) {
                    best = Some(d.clone());
                }
            }
        }
        best.expect("space has at least two points")
    }

    /// Checks every metric axiom; returns the first violation in scan order
    /// (diagonal, positivity, symmetry, then triangles by (x, y, via)).
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        for i in 0..n {
            if !self.dist[i][i].is_zero() {
                return ValidationReport::Violation(MetricAxiomViolation::NonzeroDiagonal { i });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if !self.dist[i][j].is_positive() {
                    return ValidationReport::Violation(MetricAxiomViolation::NonpositiveDistance {
                        i,
                        j,
                    });
                }
                if self.dist[i][j] != self.dist[j][i] {
                    return ValidationReport::Violation(MetricAxiomViolation::Asymmetric { i, j });
                }
            }
        }
        if let Some(v) = self.check_triangles() {
            return ValidationReport::Violation(v);
        }
        ValidationReport::Pass
    }

    fn check_triangles(&self) -> Option<MetricAxiomViolation> {
        let n = self.len();
        if let Some(scaled) = self.scaled_i128() {
            for x in 0..n {
                for y in (x + 1)..n {
                    let dxy = scaled[x * n + y];
                    for via in 0..n {
                        if via == x || via == y {
                            continue;
                        }
                        if dxy > scaled[x * n + via] + scaled[via * n + y] {
                            return Some(self.triangle_violation(x, via, y));
                        }
                    }
                }
            }
            return None;
        }
        for x in 0..n {
            for y in (x + 1)..n {
                for via in 0..n {
                    if via == x || via == y {
                        continue;
                    }
                    if self.dist[x][y] > &self.dist[x][via] + &self.dist[via][y] {
                        return Some(self.triangle_violation(x, via, y));
                    }
                }
            }
        }
        None
    }

    fn triangle_violation(&self, x: usize, via: usize, y: usize) -> MetricAxiomViolation {
        MetricAxiomViolation::Triangle {
            x,
            via,
            y,
            lhs: self.dist[x][y].clone(),
            rhs: &self.dist[x][via] + &self.dist[via][y],
        }
    }

    /// Integer view of the matrix over a common denominator, when every
    /// scaled entry fits comfortably in i128. Cuts the O(n^3) triangle scan
    /// from bignum to machine arithmetic for the usual dyadic examples.
    fn scaled_i128(&self) -> Option<Vec<i128>> {
        let n = self.len();
        let mut lcm = num_bigint::BigInt::from(1u8);
        for row in &self.dist {
            for d in row {
                lcm = num_integer::lcm(lcm, d.denom().clone());
                if lcm.bits() > 32 {
                    return None;
                }
            }
        }
        let mut out = Vec::with_capacity(n * n);
        for row in &self.dist {
            for d in row {
                let scaled = d.numer() * (&lcm / d.denom());
                let v = scaled.to_i128()?;
                if v.abs() > i128::MAX / 4 {
                    return None;
                }
                out.push(v);
            }
        }
        Some(out)
    }

    /// Open or closed metric ball around `center`.
    pub fn ball(&self, center: usize, radius: &Q, closed: bool) -> PointSubset {
        let mut members = Vec::new();
        for i in 0..self.len() {
            let d = &self.dist[i][center];
            let inside = if closed { d <= radius } else { d < radius };
            if inside {
                members.push(i);
            }
        }
        PointSubset::from_sorted(members)
    }

    /// Shared handle used by functions and functionals defined on the space.
    pub fn into_shared(self) -> Arc<FiniteMetricSpace> {
        Arc::new(self)
    }
}

/// Checks that two handles denote the same space.
pub fn same_space(a: &Arc<FiniteMetricSpace>, b: &Arc<FiniteMetricSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A duplicate-free set of point indices into one space, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSubset {
    members: Vec<usize>,
}

/// Error for subsets referring to out-of-range or repeated indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetError {
    IndexOutOfRange { index: usize, points: usize },
    Duplicate { index: usize },
}

impl core::fmt::Display for SubsetError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SubsetError::IndexOutOfRange { index, points } => {
                write!(f, "point index {index} out of range for {points} points")
            }
            SubsetError::Duplicate { index } => write!(f, "duplicate point index {index}"),
        }
    }
}

impl PointSubset {
    pub fn new(space: &FiniteMetricSpace, mut members: Vec<usize>) -> Result<Self, SubsetError> {
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(SubsetError::Duplicate { index: w[0] });
            }
        }
        if let Some(&bad) = members.iter().find(|&&i| i >= space.len()) {
            return Err(SubsetError::IndexOutOfRange { index: bad, points: space.len() });
        }
        Ok(PointSubset { members })
    }

    pub fn empty() -> Self {
        PointSubset { members: Vec::new() }
    }

    /// Builds from indices already known to be sorted, deduplicated, valid.
    pub fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        PointSubset { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_disjoint(&self, other: &PointSubset) -> bool {
        self.members.iter().all(|i| !other.contains(*i))
    }

    /// Indices of the ambient space not in this subset.
    pub fn complement(&self, space: &FiniteMetricSpace) -> Vec<usize> {
        (0..space.len()).filter(|i| !self.contains(*i)).collect()
    }
}
