//! Trapezoid-property inequality checks: pairwise and quadruple
//! inequalities relative to an excluded witness set, finite-subset witness
//! searches, disjoint witness families, and the annulus lemma that feeds
//! them. Witness-function builders live in [`builders`].
//!
//! All checks run in exact rational arithmetic; strict inequalities carry a
//! zero strictness margin.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::linprog::Mode;
use crate::lipspace::LipschitzFunction;
use crate::metric::{FiniteMetricSpace, PointSubset};
use crate::Q;

mod builders;

pub use builders::{
    build_d2p_pair_example, build_daugavet_function, build_sd2p_witness, build_ssd2p_witness,
    BuildError, D2pBranch, D2pPair, DaugavetBuild, DaugavetCase, WitnessBuildTrace,
};

/// A witness for the trapezoid inequalities: an excluded set `A`, a pair
/// `u != v` inside it, and a defect `eps >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrapezoidWitness {
    pub a: PointSubset,
    pub u: usize,
    pub v: usize,
    pub eps: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessError {
    PairNotInSet,
    DegeneratePair,
    NegativeEpsilon,
    MixedEpsilons,
}

impl core::fmt::Display for WitnessError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            WitnessError::PairNotInSet => write!(f, "witness points must belong to the excluded set"),
            WitnessError::DegeneratePair => write!(f, "witness points must differ"),
            WitnessError::NegativeEpsilon => write!(f, "epsilon must be nonnegative"),
            WitnessError::MixedEpsilons => write!(f, "family members must share one epsilon"),
        }
    }
}

impl TrapezoidWitness {
    pub fn new(a: PointSubset, u: usize, v: usize, eps: Q) -> Result<Self, WitnessError> {
        if u == v {
            return Err(WitnessError::DegeneratePair);
        }
        if !a.contains(u) || !a.contains(v) {
            return Err(WitnessError::PairNotInSet);
        }
        if eps.is_negative() {
            return Err(WitnessError::NegativeEpsilon);
        }
        Ok(TrapezoidWitness { a, u, v, eps })
    }

    /// The common witness shape `A = {u, v}`.
    pub fn pair(u: usize, v: usize, eps: Q) -> Result<Self, WitnessError> {
        let mut m = alloc::vec![u, v];
        m.sort_unstable();
        Self::new(PointSubset::from_sorted(m), u, v, eps)
    }
}

/// An ordered list of witnesses sharing one epsilon; the excluded sets are
/// meant to be pairwise disjoint, which [`check_family`] verifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFamily {
    members: Vec<TrapezoidWitness>,
}

impl WitnessFamily {
    pub fn new(members: Vec<TrapezoidWitness>) -> Result<Self, WitnessError> {
        if let Some(first) = members.first() {
            if members.iter().any(|m| m.eps != first.eps) {
                return Err(WitnessError::MixedEpsilons);
            }
        }
        Ok(WitnessFamily { members })
    }

    pub fn members(&self) -> &[TrapezoidWitness] {
        &self.members
    }
}

/// One failed inequality instance: the quantified points and both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub points: Vec<usize>,
    pub lhs: Q,
    pub rhs: Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    LtpInequality,
    SltpInequality,
    LtpFinite,
    SltpFinite,
    Family,
    BallsLemma,
    Local,
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::LtpInequality => "ltp-inequality",
            CheckKind::SltpInequality => "sltp-inequality",
            CheckKind::LtpFinite => "ltp-finite",
            CheckKind::SltpFinite => "sltp-finite",
            CheckKind::Family => "family",
            CheckKind::BallsLemma => "balls-lemma",
            CheckKind::Local => "local",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
}

impl CheckStatus {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckStatus::Pass)
    }
}

/// Outcome of a single inequality check or witness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub check: CheckKind,
    pub status: CheckStatus,
    /// First violation in lexicographic scan order, if any.
    pub violation: Option<Violation>,
    /// Witness pair found by the finite searches.
    pub witness: Option<(usize, usize)>,
    pub mode: Mode,
}

impl PropertyReport {
    fn pass(check: CheckKind) -> Self {
        PropertyReport {
            check,
            status: CheckStatus::Pass,
            violation: None,
            witness: None,
            mode: Mode::ExactRational,
        }
    }

    fn fail(check: CheckKind, violation: Violation) -> Self {
        PropertyReport {
            check,
            status: CheckStatus::Fail,
            violation: Some(violation),
            witness: None,
            mode: Mode::ExactRational,
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status.is_pass()
    }
}

/// The pairwise inequality at a single `(x, y)`, or `None` if satisfied:
/// `(1-eps)(d(x,y) + d(u,v)) <= d(x,u) + d(y,v)`.
pub fn ltp_violation_at(
    space: &FiniteMetricSpace,
    w: &TrapezoidWitness,
    x: usize,
    y: usize,
) -> Option<Violation> {
    let one_minus = Q::one() - w.eps.clone();
    let lhs = &one_minus * &(space.dist(x, y) + space.dist(w.u, w.v));
    let rhs = space.dist(x, w.u) + space.dist(y, w.v);
    if lhs > rhs {
        Some(Violation { points: alloc::vec![x, y], lhs, rhs })
    } else {
        None
    }
}

/// The quadruple inequality at `(x, y, z, t)`, or `None` if satisfied:
/// `(1-eps)(d(x,y) + d(z,t) + 2 d(u,v))
///      <= d(x,u) + d(y,u) + d(z,v) + d(t,v)`.
pub fn sltp_violation_at(
    space: &FiniteMetricSpace,
    w: &TrapezoidWitness,
    x: usize,
    y: usize,
    z: usize,
    t: usize,
) -> Option<Violation> {
    let one_minus = Q::one() - w.eps.clone();
    let duv = space.dist(w.u, w.v);
    let lhs = &one_minus * &(&(space.dist(x, y) + space.dist(z, t)) + &(duv + duv));
    let rhs = &(space.dist(x, w.u) + space.dist(y, w.u))
        + &(space.dist(z, w.v) + space.dist(t, w.v));
    if lhs > rhs {
        Some(Violation { points: alloc::vec![x, y, z, t], lhs, rhs })
    } else {
        None
    }
}

/// Checks the pairwise trapezoid inequality over all ordered pairs from
/// the complement of the excluded set. Vacuously passes on an empty
/// complement.
pub fn check_ltp_inequality(space: &FiniteMetricSpace, w: &TrapezoidWitness) -> PropertyReport {
    let comp = w.a.complement(space);
    for &x in &comp {
        for &y in &comp {
            if let Some(v) = ltp_violation_at(space, w, x, y) {
                return PropertyReport::fail(CheckKind::LtpInequality, v);
            }
        }
    }
    PropertyReport::pass(CheckKind::LtpInequality)
}

/// Least defect `d(x,anchor) + d(y,anchor) - (1-eps) d(x,y)` over ordered
/// pairs from `points`, with the lexicographically first minimizer.
/// The quadruple inequality decomposes into two such minima, one per
/// witness endpoint, which turns the quartic scan into a quadratic one.
pub(crate) fn min_anchor_defect(
    space: &FiniteMetricSpace,
    points: &[usize],
    anchor: usize,
    one_minus_eps: &Q,
) -> Option<(Q, (usize, usize))> {
    let mut best: Option<(Q, (usize, usize))> = None;
    for &x in points {
        for &y in points {
            let defect =
                &(space.dist(x, anchor) + space.dist(y, anchor)) - &(one_minus_eps * space.dist(x, y));
            if best.as_ref().map_or(true, |(b, _)| defect < *b) {
                best = Some((defect, (x, y)));
            }
        }
    }
    best
}

/// Checks the quadruple trapezoid inequality over all ordered quadruples
/// from the complement, via the two-minimum decomposition. The reported
/// violation combines the minimizing pair at `u` with the minimizing pair
/// at `v`.
pub fn check_sltp_inequality(space: &FiniteMetricSpace, w: &TrapezoidWitness) -> PropertyReport {
    let comp = w.a.complement(space);
    let one_minus = Q::one() - w.eps.clone();
    let (Some((min_u, (x, y))), Some((min_v, (z, t)))) = (
        min_anchor_defect(space, &comp, w.u, &one_minus),
        min_anchor_defect(space, &comp, w.v, &one_minus),
    ) else {
        return PropertyReport::pass(CheckKind::SltpInequality);
    };
    let duv = space.dist(w.u, w.v);
    let target = &(&one_minus * duv) + &(&one_minus * duv);
    if min_u + min_v < target {
        let v = sltp_violation_at(space, w, x, y, z, t)
            .expect("decomposition minimizers violate the quadruple inequality");
        return PropertyReport::fail(CheckKind::SltpInequality, v);
    }
    PropertyReport::pass(CheckKind::SltpInequality)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    EpsilonOutOfRange,
}

impl core::fmt::Display for SearchError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "epsilon must lie in [0, 1) for witness searches")
    }
}

/// Whether the pair `(u, v)` satisfies the pairwise inequality against
/// every ordered pair from `n_points`.
pub fn ltp_holds_for_pair(
    space: &FiniteMetricSpace,
    n_points: &[usize],
    u: usize,
    v: usize,
    eps: &Q,
) -> bool {
    let one_minus = Q::one() - eps.clone();
    for &x in n_points {
        for &y in n_points {
            let lhs = &one_minus * &(space.dist(x, y) + space.dist(u, v));
            if lhs > space.dist(x, u) + space.dist(y, v) {
                return false;
            }
        }
    }
    true
}

/// Whether `(u, v)` additionally satisfies the quadruple inequality over
/// `n_points`, via the decomposition.
pub fn sltp_holds_for_pair(
    space: &FiniteMetricSpace,
    n_points: &[usize],
    u: usize,
    v: usize,
    eps: &Q,
) -> bool {
    if !ltp_holds_for_pair(space, n_points, u, v, eps) {
        return false;
    }
    let one_minus = Q::one() - eps.clone();
    match (
        min_anchor_defect(space, n_points, u, &one_minus),
        min_anchor_defect(space, n_points, v, &one_minus),
    ) {
        (Some((mu, _)), Some((mv, _))) => {
            let duv = space.dist(u, v);
            mu + mv >= &(&one_minus * duv) + &(&one_minus * duv)
        }
        _ => true,
    }
}

/// Searches all ordered pairs `(u, v)` of distinct points for one whose
/// pairwise inequality holds over the subset `N`; reports the first such
/// witness or exhaustive failure.
pub fn check_ltp_finite(
    space: &FiniteMetricSpace,
    n_subset: &PointSubset,
    eps: &Q,
) -> Result<PropertyReport, SearchError> {
    search_finite(space, n_subset, eps, CheckKind::LtpFinite, ltp_holds_for_pair)
}

/// As [`check_ltp_finite`], with the quadruple inequality required too.
pub fn check_sltp_finite(
    space: &FiniteMetricSpace,
    n_subset: &PointSubset,
    eps: &Q,
) -> Result<PropertyReport, SearchError> {
    search_finite(space, n_subset, eps, CheckKind::SltpFinite, sltp_holds_for_pair)
}

fn search_finite(
    space: &FiniteMetricSpace,
    n_subset: &PointSubset,
    eps: &Q,
    kind: CheckKind,
    holds: impl Fn(&FiniteMetricSpace, &[usize], usize, usize, &Q) -> bool,
) -> Result<PropertyReport, SearchError> {
    if eps.is_negative() || *eps >= Q::one() {
        return Err(SearchError::EpsilonOutOfRange);
    }
    let pts = n_subset.members();
    for u in 0..space.len() {
        for v in 0..space.len() {
            if u == v {
                continue;
            }
            if holds(space, pts, u, v, eps) {
                let mut report = PropertyReport::pass(kind);
                report.witness = Some((u, v));
                return Ok(report);
            }
        }
    }
    Ok(PropertyReport {
        check: kind,
        status: CheckStatus::Fail,
        violation: None,
        witness: None,
        mode: Mode::ExactRational,
    })
}

/// Family-level report: set disjointness plus both inequalities per member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    /// Two member indices and a shared point, when the sets overlap.
    pub overlap: Option<(usize, usize, usize)>,
    /// Per-member (pairwise, quadruple) reports; empty if overlap found.
    pub members: Vec<(PropertyReport, PropertyReport)>,
    pub status: CheckStatus,
    pub mode: Mode,
}

impl FamilyReport {
    pub fn is_pass(&self) -> bool {
        self.status.is_pass()
    }
}

/// Verifies pairwise disjointness of the excluded sets, then both
/// inequalities for every member. This is the finite-truncation surrogate
/// for the sequential trapezoid properties: the artifact certifies the
/// per-member inequalities, never that a finite space "has" the sequential
/// property.
pub fn check_family(space: &FiniteMetricSpace, fam: &WitnessFamily) -> FamilyReport {
    for (i, wi) in fam.members().iter().enumerate() {
        for (j, wj) in fam.members().iter().enumerate().skip(i + 1) {
            if let Some(&shared) = wi.a.members().iter().find(|&&p| wj.a.contains(p)) {
                return FamilyReport {
                    overlap: Some((i, j, shared)),
                    members: Vec::new(),
                    status: CheckStatus::Fail,
                    mode: Mode::ExactRational,
                };
            }
        }
    }
    let mut members = Vec::with_capacity(fam.members().len());
    let mut all_pass = true;
    for w in fam.members() {
        let ltp = check_ltp_inequality(space, w);
        let sltp = check_sltp_inequality(space, w);
        all_pass &= ltp.is_pass() && sltp.is_pass();
        members.push((ltp, sltp));
    }
    FamilyReport {
        overlap: None,
        members,
        status: if all_pass { CheckStatus::Pass } else { CheckStatus::Fail },
        mode: Mode::ExactRational,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BallsLemmaError {
    RadiiOutOfOrder,
    PairOutsideAnnulus { point: usize },
    DegeneratePair,
    NonpositiveEpsilon,
}

impl core::fmt::Display for BallsLemmaError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BallsLemmaError::RadiiOutOfOrder => write!(f, "need 0 <= s < r"),
            BallsLemmaError::PairOutsideAnnulus { point } => {
                write!(f, "witness point {point} not in B(p,r) minus B(p,s)")
            }
            BallsLemmaError::DegeneratePair => write!(f, "witness points must differ"),
            BallsLemmaError::NonpositiveEpsilon => write!(f, "epsilon must be positive"),
        }
    }
}

/// Hypothesis side of the annulus lemma check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallsLemmaHypotheses {
    /// `4 s <= eps d(u,v)`.
    pub small_inner: bool,
    /// `2 d(u,v) <= eps min(d(x,u), d(x,v))` for all `x` outside `B(p,r)`;
    /// carries the first violating `x` otherwise.
    pub far_outside: Result<(), usize>,
}

impl BallsLemmaHypotheses {
    pub fn hold(&self) -> bool {
        self.small_inner && self.far_outside.is_ok()
    }
}

/// Full annulus-lemma report: hypothesis and conclusion status, separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallsLemmaReport {
    pub hypotheses: BallsLemmaHypotheses,
    /// Present only when the hypotheses hold.
    pub conclusions: Option<(PropertyReport, PropertyReport)>,
    pub annulus: PointSubset,
    pub mode: Mode,
}

impl BallsLemmaReport {
    /// Pass means: hypotheses hold and both concluded inequalities hold.
    pub fn is_pass(&self) -> bool {
        self.hypotheses.hold()
            && self
                .conclusions
                .as_ref()
                .map_or(false, |(l, s)| l.is_pass() && s.is_pass())
    }
}

/// Checks the hypotheses of the annulus lemma for
/// `A = B(p,r) minus B(p,s)`; when they hold, also checks both concluded
/// trapezoid inequalities over the complement of `A`.
pub fn check_balls_lemma(
    space: &FiniteMetricSpace,
    p: usize,
    r: &Q,
    s: &Q,
    u: usize,
    v: usize,
    eps: &Q,
) -> Result<BallsLemmaReport, BallsLemmaError> {
    if s.is_negative() || s >= r {
        return Err(BallsLemmaError::RadiiOutOfOrder);
    }
    if u == v {
        return Err(BallsLemmaError::DegeneratePair);
    }
    if !eps.is_positive() {
        return Err(BallsLemmaError::NonpositiveEpsilon);
    }
    let outer = space.ball(p, r, false);
    let inner = space.ball(p, s, false);
    for &w in &[u, v] {
        if !outer.contains(w) || inner.contains(w) {
            return Err(BallsLemmaError::PairOutsideAnnulus { point: w });
        }
    }
    let annulus = PointSubset::from_sorted(
        outer.members().iter().copied().filter(|&i| !inner.contains(i)).collect(),
    );

    let duv = space.dist(u, v);
    let four_s = &(s + s) + &(s + s);
    let small_inner = four_s <= eps * duv;
    let two_duv = duv + duv;
    let mut far_outside = Ok(());
    for x in 0..space.len() {
        if outer.contains(x) {
            continue;
        }
        let min_dist = space.dist(x, u).min(space.dist(x, v));
        if two_duv > eps * min_dist {
            far_outside = Err(x);
            break;
        }
    }

    let hypotheses = BallsLemmaHypotheses { small_inner, far_outside };
    let conclusions = if hypotheses.hold() {
        let w = TrapezoidWitness::new(annulus.clone(), u, v, eps.clone())
            .expect("u, v lie in the annulus by the checks above");
        Some((check_ltp_inequality(space, &w), check_sltp_inequality(space, &w)))
    } else {
        None
    };
    Ok(BallsLemmaReport { hypotheses, conclusions, annulus, mode: Mode::ExactRational })
}

/// Report for the local-function search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalReport {
    pub norm: Q,
    /// Best `(u, v, slope)` among pairs with `d(u,v) < eps`.
    pub best: Option<(usize, usize, Q)>,
    /// No pair is closer than `eps`: the space is uniformly discrete at
    /// this scale, so the search fails vacuously.
    pub vacuous: bool,
    pub status: CheckStatus,
    pub mode: Mode,
}

/// Searches ordered pairs with `d(u,v) < eps` for a slope exceeding
/// `lip_norm(f) - eps`. Finite spaces fail vacuously once `eps` drops
/// below the minimum positive distance.
pub fn check_local(space: &FiniteMetricSpace, f: &LipschitzFunction, eps: &Q) -> LocalReport {
    assert!(eps.is_positive(), "check_local needs eps > 0");
    let norm = f.lip_norm();
    let threshold = &norm - eps;
    let mut best: Option<(usize, usize, Q)> = None;
    for u in 0..space.len() {
        for v in 0..space.len() {
            if u == v || space.dist(u, v) >= eps {
                continue;
            }
            let slope = f.slope(u, v);
            if best.as_ref().map_or(true, |(_, _, b)| slope > *b) {
                best = Some((u, v, slope));
            }
        }
    }
    let vacuous = best.is_none();
    let status = match &best {
        Some((_, _, slope)) if *slope > threshold => CheckStatus::Pass,
        _ => CheckStatus::Fail,
    };
    LocalReport { norm, best, vacuous, status, mode: Mode::ExactRational }
}

/// The witness set used for the max-metric cube spaces: all points whose
/// largest coordinate equals `n`, with every coordinate outside the
/// `m`-th coordinate pair below `n`; the witness pair differs by one in
/// those two coordinates. Point names are parsed back into tuples, so this
/// works on any truncation that contains the pair.
pub fn kn_coordinate_witness(
    space: &Arc<FiniteMetricSpace>,
    n: u32,
    m: u32,
    eps: Q,
) -> Result<TrapezoidWitness, KnWitnessError> {
    let coords = |name: &str| -> Option<Vec<u32>> {
        name.split('.').map(|c| c.parse::<u32>().ok()).collect()
    };
    let dims = coords(space.point_name(0)).ok_or(KnWitnessError::NotKnSpace)?.len();
    let hi = 2 * m as usize - 1; // 1-based coordinates 2m-1, 2m
    let lo = 2 * m as usize;
    if lo > dims {
        return Err(KnWitnessError::CoordinatePairOutOfRange);
    }
    let mut members = Vec::new();
    let mut u_idx = None;
    let mut v_idx = None;
    for i in 0..space.len() {
        let t = coords(space.point_name(i)).ok_or(KnWitnessError::NotKnSpace)?;
        let max = t.iter().copied().max().unwrap_or(0);
        let outside_ok = t
            .iter()
            .enumerate()
            .all(|(j, &c)| j + 1 == hi || j + 1 == lo || c < n);
        if max == n && outside_ok {
            members.push(i);
        }
        let is_u = t.iter().enumerate().all(|(j, &c)| {
            if j + 1 == hi {
                c == n
            } else if j + 1 == lo {
                c + 1 == n
            } else {
                c == 0
            }
        });
        let is_v = t.iter().enumerate().all(|(j, &c)| {
            if j + 1 == hi {
                c + 1 == n
            } else if j + 1 == lo {
                c == n
            } else {
                c == 0
            }
        });
        if is_u {
            u_idx = Some(i);
        }
        if is_v {
            v_idx = Some(i);
        }
    }
    let (u, v) = match (u_idx, v_idx) {
        (Some(u), Some(v)) => (u, v),
        _ => return Err(KnWitnessError::PairNotInSpace),
    };
    TrapezoidWitness::new(PointSubset::from_sorted(members), u, v, eps)
        .map_err(KnWitnessError::Witness)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KnWitnessError {
    NotKnSpace,
    CoordinatePairOutOfRange,
    PairNotInSpace,
    Witness(WitnessError),
}

impl core::fmt::Display for KnWitnessError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            KnWitnessError::NotKnSpace => write!(f, "point names are not coordinate tuples"),
            KnWitnessError::CoordinatePairOutOfRange => {
                write!(f, "coordinate pair index exceeds the tuple length")
            }
            KnWitnessError::PairNotInSpace => {
                write!(f, "the witness pair is not present in this truncation")
            }
            KnWitnessError::Witness(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{
        gen_example_d2p_not_ltp, gen_example_seqltp_not_sltp, gen_example_sltp_not_seq, gen_kn,
        BaseMode,
    };
    use crate::rational::{int, ratio};
    use alloc::vec;

    fn idx(space: &FiniteMetricSpace, name: &str) -> usize {
        space.index_of(name).unwrap_or_else(|| panic!("point {name}"))
    }

    #[test]
    fn ltp_passes_on_seqltp_example_members() {
        let s = gen_example_seqltp_not_sltp(6, BaseMode::FirstPoint).unwrap();
        for m in 1..=6 {
            let u = idx(&s, &alloc::format!("u{m}"));
            let v = idx(&s, &alloc::format!("v{m}"));
            let w = TrapezoidWitness::pair(u, v, int(0)).unwrap();
            let rep = check_ltp_inequality(&s, &w);
            assert!(rep.is_pass(), "member {m}: {:?}", rep.violation);
        }
    }

    #[test]
    fn ltp_fails_on_sltp_example_with_low_witnesses() {
        let s = gen_example_sltp_not_seq(5, BaseMode::FirstPoint).unwrap();
        let u = idx(&s, "b1");
        let v = idx(&s, "b2");
        let w = TrapezoidWitness::pair(u, v, ratio(3, 10)).unwrap();
        let rep = check_ltp_inequality(&s, &w);
        assert!(!rep.is_pass());
        // The canonical violator: the top-level distance-2 pair.
        let a5 = idx(&s, "a5");
        let c5 = idx(&s, "c5");
        let viol = ltp_violation_at(&s, &w, a5, c5).expect("(a5, c5) violates");
        assert_eq!(viol.lhs, ratio(7, 10) * int(4));
        assert_eq!(viol.rhs, int(2));
    }

    #[test]
    fn ltp_vacuous_on_empty_complement() {
        let s = gen_example_seqltp_not_sltp(1, BaseMode::FirstPoint).unwrap();
        let all = PointSubset::from_sorted((0..s.len()).collect());
        let w = TrapezoidWitness::new(all, 0, 1, int(0)).unwrap();
        assert!(check_ltp_inequality(&s, &w).is_pass());
        assert!(check_sltp_inequality(&s, &w).is_pass());
    }

    #[test]
    fn sltp_passes_on_top_level_pair_of_sltp_example() {
        let s = gen_example_sltp_not_seq(6, BaseMode::FirstPoint).unwrap();
        // Exclude both top levels; quantified points keep index < K-1.
        let members: Vec<usize> = (0..s.len())
            .filter(|&i| {
                let name = s.point_name(i);
                name.ends_with('5') || name.ends_with('6')
            })
            .collect();
        let u = idx(&s, "b5");
        let v = idx(&s, "b6");
        let w = TrapezoidWitness::new(PointSubset::from_sorted(members), u, v, int(0)).unwrap();
        assert!(check_ltp_inequality(&s, &w).is_pass());
        assert!(check_sltp_inequality(&s, &w).is_pass());
    }

    #[test]
    fn sltp_decomposition_matches_bruteforce() {
        // Cross-check the decomposed quadruple check against direct
        // enumeration on a small space.
        let s = gen_example_seqltp_not_sltp(2, BaseMode::FirstPoint).unwrap();
        for (u_name, v_name, eps) in
            [("u1", "v1", int(0)), ("u1", "v1", ratio(1, 4)), ("u2", "v2", ratio(1, 2))]
        {
            let u = idx(&s, u_name);
            let v = idx(&s, v_name);
            let w = TrapezoidWitness::pair(u, v, eps).unwrap();
            let fast = check_sltp_inequality(&s, &w).is_pass();
            let comp = w.a.complement(&s);
            let mut slow = true;
            'outer: for &x in &comp {
                for &y in &comp {
                    for &z in &comp {
                        for &t in &comp {
                            if sltp_violation_at(&s, &w, x, y, z, t).is_some() {
                                slow = false;
                                break 'outer;
                            }
                        }
                    }
                }
            }
            assert_eq!(fast, slow, "({u_name},{v_name})");
        }
    }

    #[test]
    fn sltp_fails_on_seqltp_example_below_one_third() {
        // The quadruple inequality needs eps >= 1/3 on this space.
        let s = gen_example_seqltp_not_sltp(3, BaseMode::FirstPoint).unwrap();
        let u = idx(&s, "u1");
        let v = idx(&s, "v1");
        let w = TrapezoidWitness::pair(u, v, ratio(1, 4)).unwrap();
        assert!(!check_sltp_inequality(&s, &w).is_pass());
        let w = TrapezoidWitness::pair(u, v, ratio(1, 3)).unwrap();
        assert!(check_sltp_inequality(&s, &w).is_pass());
    }

    #[test]
    fn singleton_complement_passes() {
        let s = gen_example_seqltp_not_sltp(1, BaseMode::FirstPoint).unwrap();
        let members: Vec<usize> = (1..s.len()).collect();
        let u = idx(&s, "u1");
        let v = idx(&s, "v1");
        let w = TrapezoidWitness::new(PointSubset::from_sorted(members), u, v, int(0)).unwrap();
        assert!(check_sltp_inequality(&s, &w).is_pass());
    }

    #[test]
    fn finite_search_on_d2p_example_fails() {
        let s = gen_example_d2p_not_ltp(2, BaseMode::FirstPoint).unwrap();
        let n = PointSubset::from_sorted(vec![
            idx(&s, "a1"),
            idx(&s, "a2"),
            idx(&s, "a3"),
        ]);
        let rep = check_ltp_finite(&s, &n, &ratio(1, 4)).unwrap();
        assert!(!rep.is_pass());
        assert!(rep.witness.is_none());
    }

    #[test]
    fn finite_search_on_sltp_example_passes() {
        let s = gen_example_sltp_not_seq(4, BaseMode::FirstPoint).unwrap();
        let n: Vec<usize> = (0..s.len())
            .filter(|&i| !s.point_name(i).ends_with('4') && !s.point_name(i).ends_with('3'))
            .collect();
        let nsub = PointSubset::from_sorted(n.clone());
        let rep = check_sltp_finite(&s, &nsub, &int(0)).unwrap();
        assert!(rep.is_pass());
        assert!(rep.witness.is_some());
        // The canonical witness: both top-level b points.
        assert!(sltp_holds_for_pair(&s, &n, idx(&s, "b3"), idx(&s, "b4"), &int(0)));
    }

    #[test]
    fn finite_search_empty_subset_any_pair() {
        let s = gen_example_sltp_not_seq(2, BaseMode::FirstPoint).unwrap();
        let rep = check_ltp_finite(&s, &PointSubset::empty(), &int(0)).unwrap();
        assert!(rep.is_pass());
        assert_eq!(rep.witness, Some((0, 1)));
    }

    #[test]
    fn finite_search_rejects_bad_epsilon() {
        let s = gen_example_sltp_not_seq(2, BaseMode::FirstPoint).unwrap();
        assert!(check_ltp_finite(&s, &PointSubset::empty(), &int(1)).is_err());
        assert!(check_ltp_finite(&s, &PointSubset::empty(), &int(-1)).is_err());
    }

    #[test]
    fn family_overlap_is_structural_failure() {
        let s = gen_example_seqltp_not_sltp(3, BaseMode::FirstPoint).unwrap();
        let u1 = idx(&s, "u1");
        let v1 = idx(&s, "v1");
        let u2 = idx(&s, "u2");
        let fam = WitnessFamily::new(vec![
            TrapezoidWitness::pair(u1, v1, int(0)).unwrap(),
            TrapezoidWitness::pair(u1, u2, int(0)).unwrap(),
        ])
        .unwrap();
        let rep = check_family(&s, &fam);
        assert!(!rep.is_pass());
        assert_eq!(rep.overlap, Some((0, 1, u1)));
        assert!(rep.members.is_empty());
    }

    #[test]
    fn family_of_seqltp_members_passes_ltp_but_family_check_uses_both() {
        let s = gen_example_seqltp_not_sltp(3, BaseMode::FirstPoint).unwrap();
        let members: Vec<TrapezoidWitness> = (1..=3)
            .map(|m| {
                TrapezoidWitness::pair(
                    idx(&s, &alloc::format!("u{m}")),
                    idx(&s, &alloc::format!("v{m}")),
                    ratio(1, 3),
                )
                .unwrap()
            })
            .collect();
        let fam = WitnessFamily::new(members).unwrap();
        let rep = check_family(&s, &fam);
        assert!(rep.is_pass(), "{rep:?}");
    }

    #[test]
    fn empty_family_passes() {
        let s = gen_example_seqltp_not_sltp(2, BaseMode::FirstPoint).unwrap();
        let fam = WitnessFamily::new(vec![]).unwrap();
        assert!(check_family(&s, &fam).is_pass());
    }

    #[test]
    fn mixed_epsilons_rejected() {
        let s = gen_example_seqltp_not_sltp(2, BaseMode::FirstPoint).unwrap();
        let u1 = idx(&s, "u1");
        let v1 = idx(&s, "v1");
        let u2 = idx(&s, "u2");
        let v2 = idx(&s, "v2");
        let err = WitnessFamily::new(vec![
            TrapezoidWitness::pair(u1, v1, int(0)).unwrap(),
            TrapezoidWitness::pair(u2, v2, ratio(1, 2)).unwrap(),
        ])
        .unwrap_err();
        assert_eq!(err, WitnessError::MixedEpsilons);
    }

    #[test]
    fn kn_family_passes_at_eps_zero() {
        let space = gen_kn(2, 4, Some(2), None).unwrap().into_shared();
        let w = kn_coordinate_witness(&space, 2, 1, int(0)).unwrap();
        assert_eq!(space.point_name(w.u), "2.1.0.0");
        assert_eq!(space.point_name(w.v), "1.2.0.0");
        assert_eq!(*space.dist(w.u, w.v), int(1));
        assert!(check_ltp_inequality(&space, &w).is_pass());
        assert!(check_sltp_inequality(&space, &w).is_pass());
    }

    #[test]
    fn kn_witness_needs_the_pair_in_space() {
        let space = gen_kn(2, 4, Some(1), None).unwrap().into_shared();
        assert!(matches!(
            kn_coordinate_witness(&space, 2, 1, int(0)),
            Err(KnWitnessError::PairNotInSpace)
        ));
    }

    #[test]
    fn balls_lemma_hypotheses_and_conclusions() {
        use crate::metric::{gen_family, FamilyKind};
        // Unbounded family, K = 6: annulus around the base.
        let s = gen_family(FamilyKind::Unbounded, 6).unwrap();
        let u = s.index_of("8").unwrap();
        let v = s.index_of("16").unwrap();
        let rep =
            check_balls_lemma(&s, 0, &int(33), &int(1), u, v, &ratio(1, 2)).unwrap();
        assert!(rep.hypotheses.hold());
        assert!(rep.is_pass(), "{rep:?}");

        // Shrinking pairs, K = 8: balls around each left endpoint.
        let s = gen_family(FamilyKind::ShrinkingPairs, 8).unwrap();
        for m in [5u32, 6, 7, 8] {
            let u = s.index_of(&alloc::format!("{m}")).unwrap();
            let name_v = crate::rational::format_rational(&(int(m as i64) + crate::rational::pow2(-(m as i64))));
            let v = s.index_of(&name_v).unwrap();
            let rep =
                check_balls_lemma(&s, u, &ratio(1, 2), &int(0), u, v, &ratio(1, 4)).unwrap();
            assert!(rep.hypotheses.hold(), "m={m}");
            assert!(rep.is_pass(), "m={m}: {rep:?}");
        }
    }

    #[test]
    fn balls_lemma_hypothesis_failure_not_asserted() {
        use crate::metric::{gen_family, FamilyKind};
        let s = gen_family(FamilyKind::Unbounded, 6).unwrap();
        let u = s.index_of("8").unwrap();
        let v = s.index_of("16").unwrap();
        // s = 20 makes 4s > eps d(u,v) = 4 and pushes u out of the annulus.
        let err = check_balls_lemma(&s, 0, &int(33), &int(20), u, v, &ratio(1, 2));
        assert!(matches!(err, Err(BallsLemmaError::PairOutsideAnnulus { .. })));
        // Keep the pair inside but break the inner-radius hypothesis.
        let rep = check_balls_lemma(&s, 0, &int(33), &int(3), u, v, &ratio(1, 2)).unwrap();
        assert!(!rep.hypotheses.small_inner);
        assert!(rep.conclusions.is_none());
        assert!(!rep.is_pass());
    }

    #[test]
    fn balls_lemma_rejects_bad_radii() {
        use crate::metric::{gen_family, FamilyKind};
        let s = gen_family(FamilyKind::Unbounded, 4).unwrap();
        assert!(matches!(
            check_balls_lemma(&s, 0, &int(1), &int(1), 1, 2, &ratio(1, 2)),
            Err(BallsLemmaError::RadiiOutOfOrder)
        ));
        assert!(matches!(
            check_balls_lemma(&s, 0, &int(5), &int(0), 1, 1, &ratio(1, 2)),
            Err(BallsLemmaError::DegeneratePair)
        ));
        assert!(matches!(
            check_balls_lemma(&s, 0, &int(5), &int(0), 1, 2, &int(0)),
            Err(BallsLemmaError::NonpositiveEpsilon)
        ));
    }

    #[test]
    fn local_search_on_limit_point_family() {
        use crate::metric::{gen_family, FamilyKind};
        let s = gen_family(FamilyKind::LimitPoint, 10).unwrap().into_shared();
        // Identity on the real line: every slope is 1.
        let values: Vec<Q> = s
            .point_names()
            .iter()
            .map(|n| crate::rational::parse_rational(n).unwrap())
            .collect();
        let f = LipschitzFunction::new(s.clone(), values).unwrap();
        assert_eq!(f.lip_norm(), int(1));
        let rep = check_local(&s, &f, &ratio(1, 10));
        assert!(rep.status.is_pass());
        let (u, v, slope) = rep.best.unwrap();
        assert_eq!(slope, int(1));
        assert!(*s.dist(u, v) < ratio(1, 10));
    }

    #[test]
    fn local_vacuous_below_min_distance() {
        use crate::metric::{gen_family, FamilyKind};
        let s = gen_family(FamilyKind::DaugavetRemark, 4).unwrap().into_shared();
        let mut values = alloc::vec![int(1); s.len()];
        values[0] = int(0);
        let f = LipschitzFunction::new(s.clone(), values).unwrap();
        let rep = check_local(&s, &f, &ratio(1, 2));
        assert!(rep.vacuous);
        assert!(!rep.status.is_pass());
    }

    #[test]
    fn local_fails_on_uniformly_discrete_daugavet_space() {
        use crate::metric::{gen_family, FamilyKind};
        let s = gen_family(FamilyKind::DaugavetRemark, 5).unwrap().into_shared();
        let mut values = alloc::vec![int(1); s.len()];
        values[0] = int(0);
        let f = LipschitzFunction::new(s.clone(), values).unwrap();
        // eps = 1/2 is below every distance; the norm-one function is not
        // local on this space.
        let rep = check_local(&s, &f, &ratio(1, 2));
        assert!(!rep.status.is_pass());
    }
}
