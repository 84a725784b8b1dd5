//! Diameters of slices of the `Lip_0(M)` unit ball, convex combinations of
//! slices, symmetric-witness optima, and Daugavet gaps.
//!
//! A norm `||h||` over the ball is the maximum over point pairs of a linear
//! functional of `h`, so each diameter decomposes exactly into one LP per
//! point pair followed by an exhaustive outer maximum; no approximation is
//! involved. Per-pair programs share their constraint skeleton and differ
//! only in the objective.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::freespace::{free_norm_dual, FreeVector};
use crate::linprog::{self, Cmp, LinearProgram, LpError, LpScalar, Mode, Sense};
use crate::lipspace::LipschitzFunction;
use crate::metric::FiniteMetricSpace;
use crate::Q;

/// A slice of the unit ball: the part where a norm-one functional exceeds
/// `1 - alpha`. The functional is renormalized to norm one on construction;
/// the solver side uses the closed version (`>= 1 - alpha`), whose sup
/// matches the open slice by continuity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceSpec {
    functional: FreeVector,
    alpha: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceError {
    AlphaOutOfRange,
    ZeroFunctional,
}

impl core::fmt::Display for SliceError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SliceError::AlphaOutOfRange => write!(f, "slice depth must lie in (0, 2]"),
            SliceError::ZeroFunctional => write!(f, "slice functional must be nonzero"),
        }
    }
}

impl SliceSpec {
    pub fn new(functional: FreeVector, alpha: Q) -> Result<Self, SliceError> {
        if !alpha.is_positive() || alpha > Q::one() + Q::one() {
            return Err(SliceError::AlphaOutOfRange);
        }
        let norm = free_norm_dual::<Q>(&functional)
            .expect("exact dual norm is always solvable")
            .value;
        if norm.is_zero() {
            return Err(SliceError::ZeroFunctional);
        }
        let scaled = functional.scale(&(Q::one() / norm));
        Ok(SliceSpec { functional: scaled, alpha })
    }

    pub fn functional(&self) -> &FreeVector {
        &self.functional
    }

    pub fn alpha(&self) -> &Q {
        &self.alpha
    }

    /// Whether a function lies in the closed slice, in exact arithmetic.
    pub fn contains(&self, f: &LipschitzFunction) -> bool {
        f.lip_norm() <= Q::one() && self.functional.apply(f) >= Q::one() - self.alpha.clone()
    }
}

/// A diameter value with the achieving pair of functions and point pair.
#[derive(Debug, Clone)]
pub struct DiameterResult<S> {
    pub value: S,
    /// Values of the two achieving functions, one entry per point.
    pub f: Vec<S>,
    pub g: Vec<S>,
    pub pair: (usize, usize),
    pub mode: Mode,
}

/// Best symmetric witness: the bump norm together with the functions.
#[derive(Debug, Clone)]
pub struct SymmetricWitnessValue<S> {
    pub value: S,
    pub g: Vec<S>,
    pub f: Vec<Vec<S>>,
    pub pair: (usize, usize),
    pub mode: Mode,
}

#[derive(Debug, Clone)]
pub enum GeometryError {
    Lp(LpError),
    EmptySliceList,
    WeightCountMismatch,
    WeightsNotConvex,
    NormPrecondition { norm: Q },
    DegeneratePair,
}

impl core::fmt::Display for GeometryError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GeometryError::Lp(e) => write!(f, "{e}"),
            GeometryError::EmptySliceList => write!(f, "need at least one slice"),
            GeometryError::WeightCountMismatch => write!(f, "one convex weight per slice required"),
            GeometryError::WeightsNotConvex => {
                write!(f, "weights must be nonnegative and sum to 1")
            }
            GeometryError::NormPrecondition { norm } => {
                write!(f, "expected a norm-one input, got norm {norm}")
            }
            GeometryError::DegeneratePair => write!(f, "pair endpoints must differ"),
        }
    }
}

impl From<LpError> for GeometryError {
    fn from(e: LpError) -> Self {
        GeometryError::Lp(e)
    }
}

fn scalar_mode<S: LpScalar>() -> Mode {
    if S::EXACT {
        Mode::ExactRational
    } else {
        Mode::Float
    }
}

// Variable layout: several function blocks, each with one variable per
// non-base point in point order.
struct BlockLayout {
    var_of_point: Vec<Option<usize>>,
    block_size: usize,
    blocks: usize,
}

impl BlockLayout {
    fn new(space: &FiniteMetricSpace, blocks: usize) -> Self {
        let mut var_of_point = alloc::vec![None; space.len()];
        let mut rank = 0;
        for p in 0..space.len() {
            if p != space.base() {
                var_of_point[p] = Some(rank);
                rank += 1;
            }
        }
        BlockLayout { var_of_point, block_size: rank, blocks }
    }

    fn nvars(&self) -> usize {
        self.block_size * self.blocks
    }

    fn col(&self, block: usize, point: usize) -> Option<usize> {
        self.var_of_point[point].map(|r| block * self.block_size + r)
    }

    /// Adds `coef` at the column of (block, point); the base contributes
    /// nothing.
    fn bump<S: LpScalar>(&self, row: &mut [S], block: usize, point: usize, coef: S) {
        if let Some(c) = self.col(block, point) {
            row[c] = row[c].clone() + coef;
        }
    }

    fn extract<S: LpScalar>(&self, primal: &[S], block: usize, n: usize) -> Vec<S> {
        let mut out = alloc::vec![S::zero(); n];
        for (p, slot) in self.var_of_point.iter().enumerate() {
            if let Some(r) = slot {
                out[p] = primal[block * self.block_size + r].clone();
            }
        }
        out
    }
}

/// Unit-ball rows for a signed combination of blocks: for every point pair,
/// `|sum_k sign_k x_k(p) - sum_k sign_k x_k(q)| <= d(p,q)`.
fn add_ball_rows<S: LpScalar>(
    lp: &mut LinearProgram<S>,
    space: &FiniteMetricSpace,
    layout: &BlockLayout,
    combo: &[(usize, S)],
) {
    let n = space.len();
    for p in 0..n {
        for q in (p + 1)..n {
            let mut row = alloc::vec![S::zero(); layout.nvars()];
            for (block, sign) in combo {
                layout.bump(&mut row, *block, p, sign.clone());
                layout.bump(&mut row, *block, q, S::zero() - sign.clone());
            }
            let d = S::from_rational(space.dist(p, q));
            let neg: Vec<S> = row.iter().map(|v| S::zero() - v.clone()).collect();
            lp.add_constraint(row, Cmp::Le, d.clone());
            lp.add_constraint(neg, Cmp::Le, d);
        }
    }
}

/// Slice row `F(sum_k sign_k x_k) >= 1 - alpha`.
fn add_slice_row<S: LpScalar>(
    lp: &mut LinearProgram<S>,
    space: &FiniteMetricSpace,
    layout: &BlockLayout,
    slice: &SliceSpec,
    combo: &[(usize, S)],
) {
    let mut row = alloc::vec![S::zero(); layout.nvars()];
    for p in 0..space.len() {
        let w = S::from_rational(slice.functional.weight(p));
        if w.is_zero() {
            continue;
        }
        for (block, sign) in combo {
            layout.bump(&mut row, *block, p, sign.clone() * w.clone());
        }
    }
    let rhs = S::from_rational(&(Q::one() - slice.alpha.clone()));
    lp.add_constraint(row, Cmp::Ge, rhs);
}

/// Maximizes a per-pair slope objective over point pairs, reusing one
/// constraint skeleton. Ties go to the first pair in scan order.
fn maximize_over_pairs<S: LpScalar>(
    space: &FiniteMetricSpace,
    lp: &mut LinearProgram<S>,
    layout: &BlockLayout,
    objective_blocks: &[(usize, S)],
    ordered: bool,
) -> Result<(S, Vec<S>, (usize, usize)), LpError> {
    let n = space.len();
    let mut best: Option<(S, Vec<S>, (usize, usize))> = None;
    for p in 0..n {
        let q_start = if ordered { 0 } else { p + 1 };
        for q in q_start..n {
            if p == q {
                continue;
            }
            let inv_d = S::one() / S::from_rational(space.dist(p, q));
            for v in lp.objective.iter_mut() {
                *v = S::zero();
            }
            for (block, coef) in objective_blocks {
                layout.bump(&mut lp.objective, *block, p, coef.clone() * inv_d.clone());
                layout.bump(
                    &mut lp.objective,
                    *block,
                    q,
                    S::zero() - coef.clone() * inv_d.clone(),
                );
            }
            let out = linprog::solve(lp)?;
            let opt = out.expect_optimal();
            if best.as_ref().map_or(true, |(b, _, _)| opt.value > *b) {
                best = Some((opt.value.clone(), opt.primal.clone(), (p, q)));
            }
        }
    }
    Ok(best.expect("a metric space has at least one pair"))
}

/// Diameter of one closed slice: sup of `||f - g||` over functions in the
/// slice, decomposed into per-pair LPs.
pub fn slice_diameter<S: LpScalar>(
    space: &Arc<FiniteMetricSpace>,
    slice: &SliceSpec,
) -> Result<DiameterResult<S>, GeometryError> {
    let layout = BlockLayout::new(space, 2);
    let mut lp = LinearProgram::<S>::new(Sense::Maximize, layout.nvars());
    for block in 0..2 {
        add_ball_rows(&mut lp, space, &layout, &[(block, S::one())]);
        add_slice_row(&mut lp, space, &layout, slice, &[(block, S::one())]);
    }
    // Swapping f and g realizes the reversed pair, so unordered pairs
    // suffice.
    let (value, primal, pair) = maximize_over_pairs(
        space,
        &mut lp,
        &layout,
        &[(0, S::one()), (1, S::zero() - S::one())],
        false,
    )?;
    Ok(DiameterResult {
        value,
        f: layout.extract(&primal, 0, space.len()),
        g: layout.extract(&primal, 1, space.len()),
        pair,
        mode: scalar_mode::<S>(),
    })
}

/// Diameter of a convex combination of closed slices: sup of
/// `||sum lambda_i f_i - sum lambda_i g_i||` with `f_i, g_i` in slice `i`.
/// Returns the aggregated pair of functions.
pub fn combo_diameter<S: LpScalar>(
    space: &Arc<FiniteMetricSpace>,
    slices: &[SliceSpec],
    lambdas: &[Q],
) -> Result<DiameterResult<S>, GeometryError> {
    if slices.is_empty() {
        return Err(GeometryError::EmptySliceList);
    }
    if slices.len() != lambdas.len() {
        return Err(GeometryError::WeightCountMismatch);
    }
    let total: Q = lambdas.iter().sum();
    if lambdas.iter().any(|l| l.is_negative()) || total != Q::one() {
        return Err(GeometryError::WeightsNotConvex);
    }
    let k = slices.len();
    let layout = BlockLayout::new(space, 2 * k);
    let mut lp = LinearProgram::<S>::new(Sense::Maximize, layout.nvars());
    for (i, slice) in slices.iter().enumerate() {
        for half in 0..2 {
            let block = 2 * i + half;
            add_ball_rows(&mut lp, space, &layout, &[(block, S::one())]);
            add_slice_row(&mut lp, space, &layout, slice, &[(block, S::one())]);
        }
    }
    let mut objective_blocks = Vec::with_capacity(2 * k);
    for (i, lambda) in lambdas.iter().enumerate() {
        let l = S::from_rational(lambda);
        objective_blocks.push((2 * i, l.clone()));
        objective_blocks.push((2 * i + 1, S::zero() - l));
    }
    let (value, primal, pair) =
        maximize_over_pairs(space, &mut lp, &layout, &objective_blocks, false)?;
    let n = space.len();
    let mut f_sum = alloc::vec![S::zero(); n];
    let mut g_sum = alloc::vec![S::zero(); n];
    for (i, lambda) in lambdas.iter().enumerate() {
        let l = S::from_rational(lambda);
        let fi = layout.extract(&primal, 2 * i, n);
        let gi = layout.extract(&primal, 2 * i + 1, n);
        for p in 0..n {
            f_sum[p] = f_sum[p].clone() + l.clone() * fi[p].clone();
            g_sum[p] = g_sum[p].clone() + l.clone() * gi[p].clone();
        }
    }
    Ok(DiameterResult { value, f: f_sum, g: g_sum, pair, mode: scalar_mode::<S>() })
}

/// Best symmetric witness for a family of closed slices: maximizes `||g||`
/// subject to `f_i` and `f_i +- g` lying in slice `i` for every `i`.
/// `g = 0` with dual-norm maximizers is always feasible, so the value is
/// well defined and nonnegative.
pub fn ssd2p_witness_value<S: LpScalar>(
    space: &Arc<FiniteMetricSpace>,
    slices: &[SliceSpec],
) -> Result<SymmetricWitnessValue<S>, GeometryError> {
    if slices.is_empty() {
        return Err(GeometryError::EmptySliceList);
    }
    let k = slices.len();
    // Block 0 holds g; block 1 + i holds f_i.
    let layout = BlockLayout::new(space, 1 + k);
    let mut lp = LinearProgram::<S>::new(Sense::Maximize, layout.nvars());
    let one = S::one();
    let neg_one = S::zero() - S::one();
    for (i, slice) in slices.iter().enumerate() {
        let fi = 1 + i;
        // Ball rows for f_i + g and f_i - g; the ball rows for f_i alone
        // follow by averaging. The three slice rows are kept literal.
        add_ball_rows(&mut lp, space, &layout, &[(fi, one.clone()), (0, one.clone())]);
        add_ball_rows(&mut lp, space, &layout, &[(fi, one.clone()), (0, neg_one.clone())]);
        add_slice_row(&mut lp, space, &layout, slice, &[(fi, one.clone())]);
        add_slice_row(&mut lp, space, &layout, slice, &[(fi, one.clone()), (0, one.clone())]);
        add_slice_row(&mut lp, space, &layout, slice, &[(fi, one.clone()), (0, neg_one.clone())]);
    }
    // g and -g are interchangeable, so unordered pairs suffice.
    let (value, primal, pair) =
        maximize_over_pairs(space, &mut lp, &layout, &[(0, S::one())], false)?;
    let n = space.len();
    Ok(SymmetricWitnessValue {
        value,
        g: layout.extract(&primal, 0, n),
        f: (0..k).map(|i| layout.extract(&primal, 1 + i, n)).collect(),
        pair,
        mode: scalar_mode::<S>(),
    })
}

/// Sup of `||f - g||` over `g` in a closed slice, for a fixed norm-one `f`.
pub fn daugavet_gap<S: LpScalar>(
    space: &Arc<FiniteMetricSpace>,
    f: &LipschitzFunction,
    slice: &SliceSpec,
) -> Result<DiameterResult<S>, GeometryError> {
    let norm = f.lip_norm();
    if norm != Q::one() {
        return Err(GeometryError::NormPrecondition { norm });
    }
    let layout = BlockLayout::new(space, 1);
    let mut lp = LinearProgram::<S>::new(Sense::Maximize, layout.nvars());
    add_ball_rows(&mut lp, space, &layout, &[(0, S::one())]);
    add_slice_row(&mut lp, space, &layout, slice, &[(0, S::one())]);

    // The fixed function contributes a constant per ordered pair, so both
    // orders are scanned.
    let n = space.len();
    let mut best: Option<(S, Vec<S>, (usize, usize))> = None;
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            let inv_d = S::one() / S::from_rational(space.dist(p, q));
            let constant = S::from_rational(&(f.value(p) - f.value(q))) * inv_d.clone();
            for v in lp.objective.iter_mut() {
                *v = S::zero();
            }
            layout.bump(&mut lp.objective, 0, p, S::zero() - inv_d.clone());
            layout.bump(&mut lp.objective, 0, q, inv_d.clone());
            let out = linprog::solve(&lp).map_err(GeometryError::Lp)?;
            let opt = out.expect_optimal();
            let total = constant + opt.value.clone();
            if best.as_ref().map_or(true, |(b, _, _)| total > *b) {
                best = Some((total, opt.primal.clone(), (p, q)));
            }
        }
    }
    let (value, primal, pair) = best.expect("at least one ordered pair");
    Ok(DiameterResult {
        value,
        f: f.values().iter().map(S::from_rational).collect(),
        g: layout.extract(&primal, 0, n),
        pair,
        mode: scalar_mode::<S>(),
    })
}

/// `||F + m_{u,v}||` for each pair, sorted by `d(u,v)` descending, for
/// trend inspection against the Daugavet estimates. `F` must be norm one.
pub fn molecule_gap_sequence<S: LpScalar>(
    space: &Arc<FiniteMetricSpace>,
    functional: &FreeVector,
    pairs: &[(usize, usize)],
) -> Result<Vec<(usize, usize, S)>, GeometryError> {
    if pairs.iter().any(|(u, v)| u == v) {
        return Err(GeometryError::DegeneratePair);
    }
    let norm = free_norm_dual::<Q>(functional).map_err(GeometryError::Lp)?.value;
    if norm != Q::one() {
        return Err(GeometryError::NormPrecondition { norm });
    }
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by(|&a, &b| {
        let da = space.dist(pairs[a].0, pairs[a].1);
        let db = space.dist(pairs[b].0, pairs[b].1);
        db.cmp(da).then(a.cmp(&b))
    });
    let mut out = Vec::with_capacity(pairs.len());
    for k in order {
        let (u, v) = pairs[k];
        let value =
            crate::freespace::pair_with_molecule::<S>(functional, u, v).map_err(|e| match e {
                crate::freespace::PairingError::Vector(_) => GeometryError::DegeneratePair,
                crate::freespace::PairingError::Lp(e) => GeometryError::Lp(e),
            })?;
        out.push((u, v, value));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::string::ToString;
    use alloc::vec;

    fn two_point() -> Arc<FiniteMetricSpace> {
        FiniteMetricSpace::new(
            vec!["0".to_string(), "p".to_string()],
            0,
            vec![vec![int(0), int(1)], vec![int(1), int(0)]],
        )
        .unwrap()
        .into_shared()
    }

    fn tripod() -> Arc<FiniteMetricSpace> {
        FiniteMetricSpace::new(
            vec!["0".to_string(), "a".to_string(), "b".to_string()],
            0,
            vec![
                vec![int(0), int(1), int(1)],
                vec![int(1), int(0), int(2)],
                vec![int(1), int(2), int(0)],
            ],
        )
        .unwrap()
        .into_shared()
    }

    #[test]
    fn slice_diameter_two_point_equals_alpha() {
        let s = two_point();
        let f = FreeVector::molecule(s.clone(), 1, 0).unwrap();
        for alpha in [ratio(1, 10), ratio(1, 2), int(1)] {
            let slice = SliceSpec::new(f.clone(), alpha.clone()).unwrap();
            let d = slice_diameter::<Q>(&s, &slice).unwrap();
            assert_eq!(d.value, alpha);
        }
        let slice = SliceSpec::new(f, int(2)).unwrap();
        let d = slice_diameter::<Q>(&s, &slice).unwrap();
        assert_eq!(d.value, int(2));
    }

    #[test]
    fn slice_invariants() {
        let s = two_point();
        let f = FreeVector::molecule(s.clone(), 1, 0).unwrap();
        assert!(matches!(SliceSpec::new(f.clone(), int(0)), Err(SliceError::AlphaOutOfRange)));
        assert!(matches!(SliceSpec::new(f.clone(), int(3)), Err(SliceError::AlphaOutOfRange)));
        assert!(matches!(
            SliceSpec::new(FreeVector::zero(s.clone()), int(1)),
            Err(SliceError::ZeroFunctional)
        ));
        // Renormalization: 5F defines the same slice as F.
        let big = f.scale(&int(5));
        let slice = SliceSpec::new(big, ratio(1, 4)).unwrap();
        let d = slice_diameter::<Q>(&s, &slice).unwrap();
        assert_eq!(d.value, ratio(1, 4));
    }

    #[test]
    fn ssd2p_value_two_point() {
        let s = two_point();
        let f = FreeVector::molecule(s.clone(), 1, 0).unwrap();
        let slice = SliceSpec::new(f.clone(), ratio(1, 10)).unwrap();
        let w = ssd2p_witness_value::<Q>(&s, &[slice]).unwrap();
        assert_eq!(w.value, ratio(1, 20));
        let slice = SliceSpec::new(f, int(2)).unwrap();
        let w = ssd2p_witness_value::<Q>(&s, &[slice]).unwrap();
        assert_eq!(w.value, int(1));
    }

    #[test]
    fn combo_single_slice_collapses_to_slice_diameter() {
        let s = tripod();
        let f = FreeVector::molecule(s.clone(), 1, 2).unwrap();
        let slice = SliceSpec::new(f, ratio(1, 4)).unwrap();
        let single = slice_diameter::<Q>(&s, &slice).unwrap();
        let combo = combo_diameter::<Q>(&s, &[slice], &[int(1)]).unwrap();
        assert_eq!(single.value, combo.value);
    }

    #[test]
    fn combo_weight_validation() {
        let s = two_point();
        let f = FreeVector::molecule(s.clone(), 1, 0).unwrap();
        let slice = SliceSpec::new(f, ratio(1, 4)).unwrap();
        assert!(matches!(combo_diameter::<Q>(&s, &[], &[]), Err(GeometryError::EmptySliceList)));
        assert!(matches!(
            combo_diameter::<Q>(&s, &[slice.clone()], &[ratio(1, 2)]),
            Err(GeometryError::WeightsNotConvex)
        ));
        assert!(matches!(
            combo_diameter::<Q>(&s, &[slice], &[ratio(1, 2), ratio(1, 2)]),
            Err(GeometryError::WeightCountMismatch)
        ));
    }

    #[test]
    fn combo_antipodal_slices_shrink() {
        let s = two_point();
        let f = FreeVector::molecule(s.clone(), 1, 0).unwrap();
        let neg = f.scale(&int(-1));
        let alpha = ratio(1, 5);
        let slices =
            [SliceSpec::new(f, alpha.clone()).unwrap(), SliceSpec::new(neg, alpha.clone()).unwrap()];
        let combo = combo_diameter::<Q>(&s, &slices, &[ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(combo.value, alpha);
    }

    #[test]
    fn combo_value_bounded_by_two_and_above_samples() {
        // Grid-sampling oracle on the tripod: any feasible assignment is a
        // lower bound for the combo diameter.
        let s = tripod();
        let f1 = FreeVector::molecule(s.clone(), 1, 0).unwrap();
        let f2 = FreeVector::molecule(s.clone(), 2, 0).unwrap();
        let alpha = ratio(1, 2);
        let slices = [
            SliceSpec::new(f1, alpha.clone()).unwrap(),
            SliceSpec::new(f2, alpha.clone()).unwrap(),
        ];
        let lambdas = [ratio(1, 2), ratio(1, 2)];
        let combo = combo_diameter::<Q>(&s, &slices, &lambdas).unwrap();
        assert!(combo.value <= int(2));

        let grid = [int(-1), ratio(-1, 2), int(0), ratio(1, 2), int(1)];
        let mut best = int(0);
        let feasible = |va: &Q, vb: &Q, slice: &SliceSpec| -> Option<LipschitzFunction> {
            let f =
                LipschitzFunction::new(s.clone(), vec![int(0), va.clone(), vb.clone()]).unwrap();
            slice.contains(&f).then_some(f)
        };
        for fa in &grid {
            for fb in &grid {
                let Some(c1) = feasible(fa, fb, &slices[0]) else { continue };
                for ga in &grid {
                    for gb in &grid {
                        let Some(c2) = feasible(ga, gb, &slices[1]) else { continue };
                        // Assign (c1, c2) to the f halves and (c2, c1) to
                        // the g halves: the aggregate difference is
                        // (c1 - c2) so its norm bounds the combo from below.
                        let d = (&c1 - &c2).scale(&ratio(1, 2)).lip_norm();
                        if d > best {
                            best = d;
                        }
                    }
                }
            }
        }
        assert!(combo.value >= best, "{} < {}", combo.value, best);
    }

    #[test]
    fn daugavet_gap_two_point() {
        let s = two_point();
        let f = LipschitzFunction::new(s.clone(), vec![int(0), int(1)]).unwrap();
        // Slice around the antipode: -f itself is in the slice, so the
        // sup is exactly 2.
        let anti = FreeVector::molecule(s.clone(), 0, 1).unwrap();
        let slice = SliceSpec::new(anti, ratio(1, 10)).unwrap();
        let gap = daugavet_gap::<Q>(&s, &f, &slice).unwrap();
        assert_eq!(gap.value, int(2));
        // Slice around f itself: the sup is still alpha, not zero.
        let own = FreeVector::molecule(s.clone(), 1, 0).unwrap();
        let slice = SliceSpec::new(own, ratio(1, 10)).unwrap();
        let gap = daugavet_gap::<Q>(&s, &f, &slice).unwrap();
        assert_eq!(gap.value, ratio(1, 10));
        // Norm precondition.
        let half = LipschitzFunction::new(s.clone(), vec![int(0), ratio(1, 2)]).unwrap();
        assert!(matches!(
            daugavet_gap::<Q>(&s, &half, &slice),
            Err(GeometryError::NormPrecondition { .. })
        ));
    }

    #[test]
    fn molecule_gap_extremes_and_order() {
        let s = tripod();
        let m = FreeVector::molecule(s.clone(), 1, 2).unwrap();
        let vals = molecule_gap_sequence::<Q>(&s, &m, &[(1, 2)]).unwrap();
        assert_eq!(vals, vec![(1, 2, int(2))]);
        let neg = m.scale(&int(-1));
        let vals = molecule_gap_sequence::<Q>(&s, &neg, &[(1, 2)]).unwrap();
        assert_eq!(vals[0].2, int(0));
        // Sorted by distance descending: (1,2) has d = 2, (0,1) has d = 1.
        let vals = molecule_gap_sequence::<Q>(&s, &m, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!((vals[0].0, vals[0].1), (1, 2));
        assert_eq!((vals[1].0, vals[1].1), (0, 1));
        assert!(matches!(
            molecule_gap_sequence::<Q>(&s, &m, &[(1, 1)]),
            Err(GeometryError::DegeneratePair)
        ));
    }

    #[test]
    fn float_mode_matches_exact_on_slice() {
        let s = tripod();
        let f = FreeVector::molecule(s.clone(), 1, 2).unwrap();
        let slice = SliceSpec::new(f, ratio(1, 3)).unwrap();
        let exact = slice_diameter::<Q>(&s, &slice).unwrap();
        let float = slice_diameter::<f64>(&s, &slice).unwrap();
        assert!(
            (crate::rational::to_f64(&exact.value) - float.value).abs() < 1e-7,
            "{} vs {}",
            exact.value,
            float.value
        );
    }
}
