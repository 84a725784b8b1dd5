//! Builders replaying the explicit witness-function constructions behind
//! the symmetric-strong, strong, and plain diameter-two sufficient
//! conditions, and the molecule-pairing estimate for Daugavet points.
//!
//! Every builder validates its preconditions, constructs the functions by
//! the stated formulas in exact arithmetic, then verifies the promised
//! postconditions before returning.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::lipspace::{
    mcshane_extend, weighted_mcshane_extend, ExtendDirection, ExtendError, LipschitzFunction,
    PartialFunction,
};
use crate::metric::{same_space, FiniteMetricSpace, PointSubset};
use crate::rational::ratio;
use crate::Q;

use super::{
    check_ltp_inequality, check_sltp_inequality, min_anchor_defect, CheckKind, TrapezoidWitness,
    Violation, WitnessError,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    Witness(WitnessError),
    SpaceMismatch,
    BaseInsideExcludedSet,
    DeltaOutOfRange,
    FunctionNormTooLarge { index: usize, norm: Q, limit: Q },
    /// One of the required trapezoid inequalities fails for `(A, u, v)` at
    /// the requested defect.
    PreconditionInequality { kind: CheckKind, violation: Violation },
    /// The admissible interval for the plateau constant is empty; indicates
    /// a precondition inequality failure.
    EmptyInterval { index: usize, lower: Q, upper: Q },
    Extension(ExtendError),
    GeometricPrecondition { requirement: &'static str },
    MissingCenter,
    NotExampleFamily { missing: alloc::string::String },
    /// A verified-by-construction property failed; indicates a bug rather
    /// than bad input.
    PostconditionFailed { what: &'static str },
}

impl core::fmt::Display for BuildError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BuildError::Witness(e) => write!(f, "{e}"),
            BuildError::SpaceMismatch => write!(f, "function defined on a different space"),
            BuildError::BaseInsideExcludedSet => {
                write!(f, "the excluded set must not contain the base point")
            }
            BuildError::DeltaOutOfRange => write!(f, "delta must lie in (0, 1)"),
            BuildError::FunctionNormTooLarge { index, norm, limit } => write!(
                f,
                "input function {index} has norm {norm} exceeding the limit {limit}"
            ),
            BuildError::PreconditionInequality { kind, violation } => write!(
                f,
                "{} fails at {:?}: {} > {}",
                kind.name(),
                violation.points,
                violation.lhs,
                violation.rhs
            ),
            BuildError::EmptyInterval { index, lower, upper } => write!(
                f,
                "empty plateau interval for function {index}: [{lower}, {upper}]"
            ),
            BuildError::Extension(e) => write!(f, "{e}"),
            BuildError::GeometricPrecondition { requirement } => {
                write!(f, "geometric precondition violated: {requirement}")
            }
            BuildError::MissingCenter => {
                write!(f, "the converging case needs an accumulation-point parameter")
            }
            BuildError::NotExampleFamily { missing } => {
                write!(f, "space is missing expected point {missing}")
            }
            BuildError::PostconditionFailed { what } => {
                write!(f, "internal postcondition failed: {what}")
            }
        }
    }
}

impl From<ExtendError> for BuildError {
    fn from(e: ExtendError) -> Self {
        BuildError::Extension(e)
    }
}

/// Endpoint data for one plateau-constant interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalTrace {
    pub a_lo: Q,
    pub a_hi: Q,
    pub b_lo: Q,
    pub b_hi: Q,
    pub lower: Q,
    pub upper: Q,
    pub c: Q,
}

/// Full trace of a symmetric-witness build: radii, plateau constants, and
/// the built functions, with the verified norm of the bump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessBuildTrace {
    /// Roles of `u` and `v` after the positivity tie rule.
    pub u: usize,
    pub v: usize,
    pub swapped: bool,
    pub r0: Q,
    pub s0: Q,
    pub r: Q,
    pub s: Q,
    pub intervals: Vec<IntervalTrace>,
    pub g: LipschitzFunction,
    pub f: Vec<LipschitzFunction>,
    pub g_norm: Q,
}

fn validate_common(
    space: &Arc<FiniteMetricSpace>,
    a: &PointSubset,
    u: usize,
    v: usize,
    delta: &Q,
    hs: &[LipschitzFunction],
) -> Result<(), BuildError> {
    if !delta.is_positive() || *delta >= Q::one() {
        return Err(BuildError::DeltaOutOfRange);
    }
    if u == v {
        return Err(BuildError::Witness(WitnessError::DegeneratePair));
    }
    if !a.contains(u) || !a.contains(v) {
        return Err(BuildError::Witness(WitnessError::PairNotInSet));
    }
    if a.contains(space.base()) {
        return Err(BuildError::BaseInsideExcludedSet);
    }
    let limit = Q::one() - delta.clone();
    for (i, h) in hs.iter().enumerate() {
        if !same_space(h.space(), space) {
            return Err(BuildError::SpaceMismatch);
        }
        let norm = h.lip_norm();
        if norm > limit {
            return Err(BuildError::FunctionNormTooLarge { index: i, norm, limit });
        }
    }
    Ok(())
}

/// Builds the symmetric witness configuration for an excluded set `A` with
/// pair `u, v`: a bump `g` supported on two balls inside `A` with
/// `1 - delta <= ||g|| <= 1`, and for every input `h_i` a function `f_i`
/// that agrees with `h_i` off `A`, is constant on the bump support, and
/// satisfies `||f_i +- g|| <= 1`. Requires both trapezoid inequalities for
/// `(A, u, v)` at defect `delta`.
pub fn build_ssd2p_witness(
    space: &Arc<FiniteMetricSpace>,
    a: &PointSubset,
    u: usize,
    v: usize,
    delta: &Q,
    hs: &[LipschitzFunction],
) -> Result<WitnessBuildTrace, BuildError> {
    validate_common(space, a, u, v, delta, hs)?;
    let witness = TrapezoidWitness::new(a.clone(), u, v, delta.clone())
        .map_err(BuildError::Witness)?;
    let ltp = check_ltp_inequality(space, &witness);
    if let Some(violation) = ltp.violation {
        return Err(BuildError::PreconditionInequality { kind: CheckKind::LtpInequality, violation });
    }
    let sltp = check_sltp_inequality(space, &witness);
    if let Some(violation) = sltp.violation {
        return Err(BuildError::PreconditionInequality {
            kind: CheckKind::SltpInequality,
            violation,
        });
    }

    let comp = a.complement(space);
    let one_minus = Q::one() - delta.clone();
    let half = ratio(1, 2);
    let defect = |anchor: usize| -> Q {
        let (m, _) = min_anchor_defect(space, &comp, anchor, &one_minus)
            .expect("complement contains the base point");
        m * half.clone()
    };
    let mut r0 = defect(u);
    let mut s0 = defect(v);
    let target = &one_minus * space.dist(u, v);
    let mut uu = u;
    let mut vv = v;
    let mut swapped = false;
    let mut r = r0.clone().min(target.clone());
    // On a finite space both defects are strictly positive, so the swap is
    // a formality retained for the stated tie rule.
    if r.is_zero() {
        core::mem::swap(&mut r0, &mut s0);
        core::mem::swap(&mut uu, &mut vv);
        swapped = true;
        r = r0.clone().min(target.clone());
        if r.is_zero() {
            return Err(BuildError::PostconditionFailed { what: "both endpoint defects vanish" });
        }
    }
    let s = &target - &r;

    let ball_u = space.ball(uu, &r, false);
    let ball_v = space.ball(vv, &s, false);
    if !ball_u.members().iter().all(|&p| a.contains(p))
        || !ball_v.members().iter().all(|&p| a.contains(p))
        || !ball_u.is_disjoint(&ball_v)
    {
        return Err(BuildError::PostconditionFailed { what: "bump support escapes the excluded set" });
    }

    let mut g_values = alloc::vec![Q::zero(); space.len()];
    for &x in ball_u.members() {
        g_values[x] = &r - space.dist(x, uu);
    }
    for &x in ball_v.members() {
        g_values[x] = space.dist(x, vv) - &s;
    }
    let g = LipschitzFunction::new(space.clone(), g_values)
        .map_err(|_| BuildError::PostconditionFailed { what: "bump is nonzero at the base" })?;
    let g_norm = g.lip_norm();
    if g_norm > Q::one() || g_norm < one_minus {
        return Err(BuildError::PostconditionFailed { what: "bump norm outside [1-delta, 1]" });
    }

    // Joint domain: the complement plus the bump support.
    let mut l_members: Vec<usize> = comp.clone();
    l_members.extend(ball_u.members().iter().copied());
    l_members.extend(ball_v.members().iter().copied());
    l_members.sort_unstable();
    let l_set = PointSubset::from_sorted(l_members);
    let weights: Vec<Q> = l_set.members().iter().map(|&x| g.value(x).abs()).collect();

    let mut intervals = Vec::with_capacity(hs.len());
    let mut fs = Vec::with_capacity(hs.len());
    for (i, h) in hs.iter().enumerate() {
        let mut a_lo: Option<Q> = None;
        let mut a_hi: Option<Q> = None;
        let mut b_lo: Option<Q> = None;
        let mut b_hi: Option<Q> = None;
        for &x in &comp {
            let hv = h.value(x);
            let du = space.dist(x, uu);
            let dv = space.dist(x, vv);
            let cand = hv - du;
            if a_lo.as_ref().map_or(true, |b| cand > *b) {
                a_lo = Some(cand);
            }
            let cand = hv + du;
            if a_hi.as_ref().map_or(true, |b| cand < *b) {
                a_hi = Some(cand);
            }
            let cand = hv - dv;
            if b_lo.as_ref().map_or(true, |b| cand > *b) {
                b_lo = Some(cand);
            }
            let cand = hv + dv;
            if b_hi.as_ref().map_or(true, |b| cand < *b) {
                b_hi = Some(cand);
            }
        }
        let (a_lo, a_hi) = (a_lo.unwrap(), a_hi.unwrap());
        let (b_lo, b_hi) = (b_lo.unwrap(), b_hi.unwrap());
        let lower = (&a_lo + &r).max(&b_lo + &s);
        let upper = (&a_hi - &r).min(&b_hi - &s);
        if lower > upper {
            return Err(BuildError::EmptyInterval { index: i, lower, upper });
        }
        let c = (&lower + &upper) * ratio(1, 2);
        intervals.push(IntervalTrace {
            a_lo,
            a_hi,
            b_lo,
            b_hi,
            lower,
            upper,
            c: c.clone(),
        });

        let values: Vec<Q> = l_set
            .members()
            .iter()
            .map(|&x| if a.contains(x) { c.clone() } else { h.value(x).clone() })
            .collect();
        let pf = PartialFunction::new(space.clone(), l_set.clone(), values)
            .map_err(|_| BuildError::PostconditionFailed { what: "plateau breaks the base value" })?;
        let f = weighted_mcshane_extend(&pf, &weights)?;
        let plus = &f + &g;
        let minus = &f - &g;
        if plus.lip_norm() > Q::one() || minus.lip_norm() > Q::one() {
            return Err(BuildError::PostconditionFailed { what: "f +- g leaves the unit ball" });
        }
        for &x in &comp {
            if f.value(x) != h.value(x) {
                return Err(BuildError::PostconditionFailed {
                    what: "f does not restrict to h off the excluded set",
                });
            }
        }
        fs.push(f);
    }

    Ok(WitnessBuildTrace {
        u: uu,
        v: vv,
        swapped,
        r0,
        s0,
        r,
        s,
        intervals,
        g,
        f: fs,
        g_norm,
    })
}

/// Builds, for each `h_i`, a function `f_i` in the unit ball agreeing with
/// `h_i` off `A` and separating the pair: `f_i(u) - f_i(v) >=
/// (1 - delta) d(u,v)`. Only the pairwise trapezoid inequality is required.
/// The extension follows the two-step recipe: an inf formula at `u`, then
/// a sup extension from `{u}` and the complement.
pub fn build_sd2p_witness(
    space: &Arc<FiniteMetricSpace>,
    a: &PointSubset,
    u: usize,
    v: usize,
    delta: &Q,
    hs: &[LipschitzFunction],
) -> Result<Vec<LipschitzFunction>, BuildError> {
    validate_common(space, a, u, v, delta, hs)?;
    let witness = TrapezoidWitness::new(a.clone(), u, v, delta.clone())
        .map_err(BuildError::Witness)?;
    let ltp = check_ltp_inequality(space, &witness);
    if let Some(violation) = ltp.violation {
        return Err(BuildError::PreconditionInequality { kind: CheckKind::LtpInequality, violation });
    }

    let comp = a.complement(space);
    let threshold = &(Q::one() - delta.clone()) * space.dist(u, v);
    let mut out = Vec::with_capacity(hs.len());
    for h in hs {
        let mut val_u: Option<Q> = None;
        for &x in &comp {
            let cand = h.value(x) + space.dist(x, u);
            if val_u.as_ref().map_or(true, |b| cand < *b) {
                val_u = Some(cand);
            }
        }
        let val_u = val_u.expect("complement contains the base point");

        let mut domain: Vec<usize> = comp.clone();
        domain.push(u);
        domain.sort_unstable();
        let dom = PointSubset::from_sorted(domain);
        let values: Vec<Q> = dom
            .members()
            .iter()
            .map(|&x| if x == u { val_u.clone() } else { h.value(x).clone() })
            .collect();
        let pf = PartialFunction::new(space.clone(), dom, values)
            .map_err(|_| BuildError::PostconditionFailed { what: "inf value breaks the base" })?;
        let f = mcshane_extend(&pf, &Q::one(), ExtendDirection::Sup)?;

        if f.lip_norm() > Q::one() {
            return Err(BuildError::PostconditionFailed { what: "extension leaves the unit ball" });
        }
        if &(f.value(u) - f.value(v)) < &threshold {
            return Err(BuildError::PostconditionFailed { what: "pair separation below target" });
        }
        for &x in &comp {
            if f.value(x) != h.value(x) {
                return Err(BuildError::PostconditionFailed {
                    what: "f does not restrict to h off the excluded set",
                });
            }
        }
        out.push(f);
    }
    Ok(out)
}

/// Which branch of the plateau selection rule fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum D2pBranch {
    /// Middle hub value within 1 of the minimum: anchor at the hub with the
    /// largest value, plateau at the minimum.
    MaxFamily,
    /// Otherwise: anchor at the hub with the smallest value, plateau one
    /// above the minimum.
    MinFamily,
}

/// Result of the paired-function construction on the three-hub example
/// family: `f` and `g` swap their values on the chosen pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D2pPair {
    pub f: LipschitzFunction,
    pub g: LipschitzFunction,
    pub u: usize,
    pub v: usize,
    pub a: PointSubset,
    pub branch: D2pBranch,
    pub family: u32,
    pub plateau: Q,
}

/// On a space from the three-hub example family, builds norm-one `f, g`
/// agreeing with `h` off a two-point witness set and satisfying
/// `f(u) - f(v) = g(v) - g(u) = 1 = d(u,v)`.
///
/// The selection rule sorts the hub values, sets `L = min h`, and anchors
/// at the top hub with plateau `L` when the middle hub is within 1 of `L`,
/// otherwise at the bottom hub with plateau `L + 1`. `m` selects which
/// witness pair of the chosen hub family is modified.
pub fn build_d2p_pair_example(
    space: &Arc<FiniteMetricSpace>,
    delta: &Q,
    h: &LipschitzFunction,
    m: u32,
) -> Result<D2pPair, BuildError> {
    if !delta.is_positive() || *delta >= Q::one() {
        return Err(BuildError::DeltaOutOfRange);
    }
    if !same_space(h.space(), space) {
        return Err(BuildError::SpaceMismatch);
    }
    let norm = h.lip_norm();
    if norm > Q::one() {
        return Err(BuildError::FunctionNormTooLarge { index: 0, norm, limit: Q::one() });
    }
    let hub = |i: u32| -> Result<usize, BuildError> {
        let name = alloc::format!("a{i}");
        space.index_of(&name).ok_or(BuildError::NotExampleFamily { missing: name })
    };
    let hubs = [hub(1)?, hub(2)?, hub(3)?];

    let mut order = [0u32, 1, 2];
    order.sort_by(|&a, &b| {
        h.value(hubs[a as usize])
            .cmp(h.value(hubs[b as usize]))
            .then(a.cmp(&b))
    });
    let min_h = (0..space.len())
        .map(|i| h.value(i).clone())
        .min()
        .expect("nonempty space");

    let middle = h.value(hubs[order[1] as usize]);
    let (branch, family, plateau) = if *middle <= &min_h + &Q::one() {
        (D2pBranch::MaxFamily, order[2] + 1, min_h.clone())
    } else {
        (D2pBranch::MinFamily, order[0] + 1, &min_h + &Q::one())
    };

    let find = |name: alloc::string::String| -> Result<usize, BuildError> {
        space.index_of(&name).ok_or(BuildError::NotExampleFamily { missing: name })
    };
    let u = find(alloc::format!("u{family}_{m}"))?;
    let v = find(alloc::format!("v{family}_{m}"))?;

    let mut f_values = h.values().to_vec();
    let mut g_values = h.values().to_vec();
    f_values[u] = &plateau + &Q::one();
    f_values[v] = plateau.clone();
    g_values[u] = plateau.clone();
    g_values[v] = &plateau + &Q::one();
    let f = LipschitzFunction::new(space.clone(), f_values)
        .map_err(|_| BuildError::PostconditionFailed { what: "pair construction hit the base" })?;
    let g = LipschitzFunction::new(space.clone(), g_values)
        .map_err(|_| BuildError::PostconditionFailed { what: "pair construction hit the base" })?;

    if f.lip_norm() != Q::one() || g.lip_norm() != Q::one() {
        return Err(BuildError::PostconditionFailed { what: "pair functions are not norm one" });
    }
    if &(f.value(u) - f.value(v)) != space.dist(u, v)
        || &(g.value(v) - g.value(u)) != space.dist(u, v)
    {
        return Err(BuildError::PostconditionFailed { what: "pair separation is not d(u,v)" });
    }

    let mut members = alloc::vec![u, v];
    members.sort_unstable();
    Ok(D2pPair {
        f,
        g,
        u,
        v,
        a: PointSubset::from_sorted(members),
        branch,
        family,
        plateau,
    })
}

/// Geometric case of the Daugavet-point function builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DaugavetCase {
    /// The pair sits in its own ball, far from the functional support.
    DisjointBalls,
    /// `u` is fixed; the excluded set is an annulus around it.
    FixedU,
    /// Both points converge to a separate accumulation point (`center`).
    Converging,
}

/// A built Daugavet-estimate function and the excluded set it modifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaugavetBuild {
    pub f: LipschitzFunction,
    pub a: PointSubset,
    pub case: DaugavetCase,
    pub theta: Q,
    pub r: Q,
    pub s: Q,
}

/// Largest `1/k` with `theta / (1 - theta) < delta / 2`.
pub fn largest_theta(delta: &Q) -> Q {
    let t = (Q::one() + Q::one()) / delta.clone();
    let k = t.floor() + Q::one() + Q::one();
    Q::one() / k
}

/// Builds `f` with `||f|| <= 1`, `f = h` outside a ball or annulus `A`
/// avoiding the base point and the given functional support, and
/// `f(u) - f(v) >= (1 - delta) d(u,v)`. The case selects the geometry; the
/// `center` parameter names the accumulation point for
/// [`DaugavetCase::Converging`] and is ignored otherwise.
pub fn build_daugavet_function(
    space: &Arc<FiniteMetricSpace>,
    f_support: &PointSubset,
    h: &LipschitzFunction,
    u: usize,
    v: usize,
    delta: &Q,
    case: DaugavetCase,
    center: Option<usize>,
) -> Result<DaugavetBuild, BuildError> {
    if !delta.is_positive() || *delta >= Q::one() {
        return Err(BuildError::DeltaOutOfRange);
    }
    if u == v {
        return Err(BuildError::Witness(WitnessError::DegeneratePair));
    }
    if !same_space(h.space(), space) {
        return Err(BuildError::SpaceMismatch);
    }
    let limit = Q::one() - delta.clone();
    let norm = h.lip_norm();
    if norm > limit {
        return Err(BuildError::FunctionNormTooLarge { index: 0, norm, limit });
    }
    let theta = largest_theta(delta);
    let base = space.base();

    let anchor = match case {
        DaugavetCase::DisjointBalls => {
            if u == base {
                return Err(BuildError::GeometricPrecondition {
                    requirement: "the moving pair must avoid the base point",
                });
            }
            u
        }
        DaugavetCase::FixedU => u,
        DaugavetCase::Converging => {
            let c = center.ok_or(BuildError::MissingCenter)?;
            if c == u || c == v {
                return Err(BuildError::GeometricPrecondition {
                    requirement: "the accumulation point must differ from the pair",
                });
            }
            c
        }
    };

    // Largest safe outer radius: distance from the anchor to the nearest
    // point that must stay outside (functional support and base).
    let mut r: Option<Q> = None;
    for &x in f_support.members().iter().chain(core::iter::once(&base)) {
        if x == anchor {
            continue;
        }
        let d = space.dist(anchor, x).clone();
        if r.as_ref().map_or(true, |b| d < *b) {
            r = Some(d);
        }
    }
    let r = r.unwrap_or_else(|| space.diameter() + Q::one());
    let theta_r = &theta * &r;

    let (s, pair_requirement): (Q, &'static str) = match case {
        DaugavetCase::DisjointBalls => {
            if space.dist(u, v) >= &theta_r {
                return Err(BuildError::GeometricPrecondition {
                    requirement: "d(u,v) < theta r for the ball around u",
                });
            }
            (Q::zero(), "")
        }
        DaugavetCase::FixedU => {
            if space.dist(u, v) >= &theta_r {
                return Err(BuildError::GeometricPrecondition {
                    requirement: "d(u,v) < theta r for the annulus around u",
                });
            }
            ((&theta * space.dist(u, v)) * ratio(1, 2), "")
        }
        DaugavetCase::Converging => {
            let du = space.dist(anchor, u);
            let dv = space.dist(anchor, v);
            if du.max(dv) >= &theta_r {
                return Err(BuildError::GeometricPrecondition {
                    requirement: "max(d(c,u), d(c,v)) < theta r for the annulus around c",
                });
            }
            ((&theta * du.min(dv)) * ratio(1, 2), "")
        }
    };
    let _ = pair_requirement;

    let outer = space.ball(anchor, &r, false);
    let inner = if s.is_zero() {
        PointSubset::empty()
    } else {
        space.ball(anchor, &s, false)
    };
    let a_set = PointSubset::from_sorted(
        outer.members().iter().copied().filter(|&i| !inner.contains(i)).collect(),
    );
    if a_set.contains(base) {
        return Err(BuildError::PostconditionFailed { what: "excluded set caught the base point" });
    }
    if f_support.members().iter().any(|&x| a_set.contains(x)) {
        return Err(BuildError::PostconditionFailed {
            what: "excluded set caught the functional support",
        });
    }
    if !a_set.contains(v) {
        return Err(BuildError::GeometricPrecondition {
            requirement: "v must land in the excluded set",
        });
    }

    // Replay of the distance lemma used in the norm argument: points deep
    // inside the ball are proportionally closer to the anchor than to any
    // point outside.
    let theta_ratio = &theta / &(Q::one() - theta.clone());
    for y in 0..space.len() {
        if *space.dist(y, anchor) >= theta_r {
            continue;
        }
        for x in 0..space.len() {
            if outer.contains(x) {
                continue;
            }
            if space.dist(y, anchor) > &(&theta_ratio * space.dist(x, y)) {
                return Err(BuildError::PostconditionFailed {
                    what: "distance lemma replay failed",
                });
            }
        }
    }

    // Assemble the partial function on the kept set plus the pair.
    let one_minus = Q::one() - delta.clone();
    let mut domain: Vec<usize> = a_set.complement(space);
    let mut vals: Vec<(usize, Q)> = domain.iter().map(|&x| (x, h.value(x).clone())).collect();
    let mut push_pair = |point: usize, value: Q, domain: &mut Vec<usize>| {
        if !domain.contains(&point) {
            domain.push(point);
            vals.push((point, value));
        } else if let Some(slot) = vals.iter_mut().find(|(p, _)| *p == point) {
            slot.1 = value;
        }
    };
    match case {
        DaugavetCase::DisjointBalls => {
            let fu = h.value(u).clone();
            let fv = &fu - &(&one_minus * space.dist(u, v));
            push_pair(u, fu, &mut domain);
            push_pair(v, fv, &mut domain);
        }
        DaugavetCase::FixedU => {
            // u stays inside the inner ball, so it already carries h(u).
            let fv = h.value(u) - &(&one_minus * space.dist(u, v));
            push_pair(v, fv, &mut domain);
        }
        DaugavetCase::Converging => {
            let fu = h.value(anchor) + &(&one_minus * space.dist(anchor, u));
            let fv = &fu - &(&one_minus * space.dist(u, v));
            push_pair(u, fu, &mut domain);
            push_pair(v, fv, &mut domain);
        }
    }
    let mut order: Vec<usize> = (0..domain.len()).collect();
    order.sort_by_key(|&k| domain[k]);
    let sorted_domain: Vec<usize> = order.iter().map(|&k| domain[k]).collect();
    let sorted_vals: Vec<Q> = order.iter().map(|&k| vals[k].1.clone()).collect();
    let pf = PartialFunction::new(
        space.clone(),
        PointSubset::from_sorted(sorted_domain),
        sorted_vals,
    )
    .map_err(|_| BuildError::PostconditionFailed { what: "pair values break the base" })?;
    let f = mcshane_extend(&pf, &Q::one(), ExtendDirection::Sup)?;

    if f.lip_norm() > Q::one() {
        return Err(BuildError::PostconditionFailed { what: "extension leaves the unit ball" });
    }
    if &(f.value(u) - f.value(v)) < &(&one_minus * space.dist(u, v)) {
        return Err(BuildError::PostconditionFailed { what: "pair separation below target" });
    }
    for x in 0..space.len() {
        if !a_set.contains(x) && f.value(x) != h.value(x) {
            return Err(BuildError::PostconditionFailed {
                what: "f does not restrict to h off the excluded set",
            });
        }
    }

    Ok(DaugavetBuild { f, a: a_set, case, theta, r, s })
}
