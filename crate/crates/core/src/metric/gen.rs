//! Deterministic generators for the example spaces exercised by the
//! property checks: the max-metric cubes `K_n`, three bespoke {1,2}-valued
//! families, and small real-line families.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::rational::{format_rational, int, pow2};
use crate::Q;

use super::FiniteMetricSpace;

/// Default limit on generated point counts; downstream LP sizes grow
/// quadratically in the number of points.
pub const DEFAULT_POINT_CAP: usize = 4096;

/// Generator failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    CapExceeded { points: u128, cap: usize },
    BadParameter { what: &'static str },
}

impl core::fmt::Display for GenError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GenError::CapExceeded { points, cap } => {
                write!(f, "generator would produce {points} points, cap is {cap}")
            }
            GenError::BadParameter { what } => write!(f, "bad generator parameter: {what}"),
        }
    }
}

/// Base-point policy for the bespoke example families, which the underlying
/// constructions leave without a distinguished point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaseMode {
    /// Use the first listed point as base.
    #[default]
    FirstPoint,
    /// Adjoin a fresh point named "0" at distance 1 from every other point.
    Adjoin,
}

/// Real-line and uniformly discrete families used by the ball-lemma and
/// Daugavet-point checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// `{0, 2, 4, ..., 2^K}` on the real line.
    Unbounded,
    /// `{0} ∪ {2^-k : k ≤ K}` on the real line.
    LimitPoint,
    /// `{0} ∪ {k, k + 2^-k : k ≤ K}` on the real line.
    ShrinkingPairs,
    /// Base plus `K` points: distance 1 to base, 2 between the others.
    DaugavetRemark,
}

fn finish(points: Vec<String>, base: usize, dist: Vec<Vec<Q>>) -> FiniteMetricSpace {
    FiniteMetricSpace::new(points, base, dist).expect("generator output is structurally sound")
}

fn matrix_by<F: FnMut(usize, usize) -> Q>(n: usize, mut d: F) -> Vec<Vec<Q>> {
    let mut m = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(if i == j { Q::zero() } else { d(i, j) });
        }
        m.push(row);
    }
    m
}

fn line_space(values: Vec<Q>) -> FiniteMetricSpace {
    let names = values.iter().map(format_rational).collect();
    let dist = matrix_by(values.len(), |i, j| {
        let diff = &values[i] - &values[j];
        if diff < Q::zero() {
            -diff
        } else {
            diff
        }
    });
    finish(names, 0, dist)
}

fn binom(n: u128, k: u128) -> u128 {
    let mut out = 1u128;
    for i in 0..k {
        out = out.saturating_mul(n - i) / (i + 1);
    }
    out
}

/// The metric subspace of `ℓ_∞` with coordinates in `{0, ..., n}`,
/// truncated to `dims` coordinates. `level_cap` keeps only tuples with at
/// most that many nonzero coordinates. The base point is the zero tuple.
pub fn gen_kn(
    n: u32,
    dims: u32,
    level_cap: Option<u32>,
    cap: Option<usize>,
) -> Result<FiniteMetricSpace, GenError> {
    if n < 1 || dims < 1 {
        return Err(GenError::BadParameter { what: "gen_kn needs n >= 1 and dims >= 1" });
    }
    let cap = cap.unwrap_or(DEFAULT_POINT_CAP);
    let count: u128 = match level_cap {
        None => (0..dims).try_fold(1u128, |acc, _| acc.checked_mul((n + 1) as u128))
            .unwrap_or(u128::MAX),
        Some(lc) => (0..=lc.min(dims))
            .map(|j| binom(dims as u128, j as u128).saturating_mul((n as u128).pow(j)))
            .fold(0u128, u128::saturating_add),
    };
    if count > cap as u128 {
        return Err(GenError::CapExceeded { points: count, cap });
    }

    // Lexicographic enumeration of tuples keeps the zero tuple first.
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    let mut cur = alloc::vec![0u32; dims as usize];
    loop {
        let nonzero = cur.iter().filter(|&&c| c != 0).count() as u32;
        if level_cap.map_or(true, |lc| nonzero <= lc) {
            tuples.push(cur.clone());
        }
        let mut pos = dims as usize;
        while pos > 0 {
            pos -= 1;
            if cur[pos] < n {
                cur[pos] += 1;
                for c in cur.iter_mut().skip(pos + 1) {
                    *c = 0;
                }
                break;
            }
            if pos == 0 {
                let names = tuples
                    .iter()
                    .map(|t| {
                        t.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(".")
                    })
                    .collect();
                let dist = matrix_by(tuples.len(), |i, j| {
                    let m = tuples[i]
                        .iter()
                        .zip(&tuples[j])
                        .map(|(&a, &b)| a.abs_diff(b))
                        .max()
                        .unwrap_or(0);
                    int(m as i64)
                });
                return Ok(finish(names, 0, dist));
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Letter {
    A,
    B,
    C,
}

/// The space `{a_k, b_k, c_k : k ≤ K}` where `d(a_k, c_k) = 2`, pairs whose
/// second element is a `b` with strictly larger index are at distance 2, and
/// every other pair of distinct points is at distance 1. Has the strong long
/// trapezoid property but no disjoint witness families.
pub fn gen_example_sltp_not_seq(k: u32, base: BaseMode) -> Result<FiniteMetricSpace, GenError> {
    if k < 2 {
        return Err(GenError::BadParameter { what: "gen_example_sltp_not_seq needs K >= 2" });
    }
    let mut tags: Vec<(Letter, u32)> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for lvl in 1..=k {
        for (letter, ch) in [(Letter::A, 'a'), (Letter::B, 'b'), (Letter::C, 'c')] {
            tags.push((letter, lvl));
            names.push(format!("{ch}{lvl}"));
        }
    }
    let d = |p: (Letter, u32), q: (Letter, u32)| -> Q {
        let two = (p.0 == Letter::A && q.0 == Letter::C && p.1 == q.1)
            || (p.0 == Letter::C && q.0 == Letter::A && p.1 == q.1)
            || (q.0 == Letter::B && p.1 < q.1)
            || (p.0 == Letter::B && q.1 < p.1);
        if two {
            int(2)
        } else {
            int(1)
        }
    };
    Ok(with_base_mode(names, base, |i, j| d(tags[i], tags[j])))
}

/// The space `{a_1, a_2, b_1, b_2} ∪ {u_m, v_m : m ≤ K}` where
/// `d(a_i, b_j) = d(a_i, u_m) = d(b_i, v_m) = d(u_m, v_m) = 1` and every
/// other pair of distinct points is at distance 2. Supports disjoint long
/// trapezoid witnesses but not the strong variant.
pub fn gen_example_seqltp_not_sltp(k: u32, base: BaseMode) -> Result<FiniteMetricSpace, GenError> {
    if k < 1 {
        return Err(GenError::BadParameter { what: "gen_example_seqltp_not_sltp needs K >= 1" });
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Tag {
        A,
        B,
        U(u32),
        V(u32),
    }
    let mut tags = alloc::vec![Tag::A, Tag::A, Tag::B, Tag::B];
    let mut names = alloc::vec![
        "a1".to_string(),
        "a2".to_string(),
        "b1".to_string(),
        "b2".to_string(),
    ];
    for m in 1..=k {
        tags.push(Tag::U(m));
        names.push(format!("u{m}"));
        tags.push(Tag::V(m));
        names.push(format!("v{m}"));
    }
    let d = |p: Tag, q: Tag| -> Q {
        let one = matches!(
            (p, q),
            (Tag::A, Tag::B) | (Tag::B, Tag::A) | (Tag::A, Tag::U(_)) | (Tag::U(_), Tag::A)
                | (Tag::B, Tag::V(_)) | (Tag::V(_), Tag::B)
        ) || matches!((p, q), (Tag::U(m), Tag::V(l)) | (Tag::V(l), Tag::U(m)) if m == l);
        if one {
            int(1)
        } else {
            int(2)
        }
    };
    Ok(with_base_mode(names, base, |i, j| d(tags[i], tags[j])))
}

/// The space `{a_i, u^i_m, v^i_m : i ∈ {1,2,3}, m ≤ K}` where
/// `d(a_i, u^j_m) = d(a_i, v^j_m) = 1` for `i ≠ j`, `d(u^j_m, v^j_m) = 1`,
/// and every other pair of distinct points is at distance 2.
pub fn gen_example_d2p_not_ltp(k: u32, base: BaseMode) -> Result<FiniteMetricSpace, GenError> {
    if k < 1 {
        return Err(GenError::BadParameter { what: "gen_example_d2p_not_ltp needs K >= 1" });
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Tag {
        A(u32),
        U(u32, u32),
        V(u32, u32),
    }
    let mut tags = alloc::vec![Tag::A(1), Tag::A(2), Tag::A(3)];
    let mut names = alloc::vec!["a1".to_string(), "a2".to_string(), "a3".to_string()];
    for m in 1..=k {
        for i in 1..=3u32 {
            tags.push(Tag::U(i, m));
            names.push(format!("u{i}_{m}"));
            tags.push(Tag::V(i, m));
            names.push(format!("v{i}_{m}"));
        }
    }
    let d = |p: Tag, q: Tag| -> Q {
        let one = match (p, q) {
            (Tag::A(i), Tag::U(j, _)) | (Tag::U(j, _), Tag::A(i)) => i != j,
            (Tag::A(i), Tag::V(j, _)) | (Tag::V(j, _), Tag::A(i)) => i != j,
            (Tag::U(j, m), Tag::V(l, t)) | (Tag::V(l, t), Tag::U(j, m)) => j == l && m == t,
            _ => false,
        };
        if one {
            int(1)
        } else {
            int(2)
        }
    };
    Ok(with_base_mode(names, base, |i, j| d(tags[i], tags[j])))
}

fn with_base_mode<F: FnMut(usize, usize) -> Q>(
    names: Vec<String>,
    base: BaseMode,
    mut d: F,
) -> FiniteMetricSpace {
    match base {
        BaseMode::FirstPoint => {
            let n = names.len();
            finish(names, 0, matrix_by(n, |i, j| d(i, j)))
        }
        BaseMode::Adjoin => {
            let mut all = Vec::with_capacity(names.len() + 1);
            all.push("0".to_string());
            all.extend(names);
            let n = all.len();
            let dist = matrix_by(n, |i, j| {
                if i == 0 || j == 0 {
                    Q::one()
                } else {
                    d(i - 1, j - 1)
                }
            });
            finish(all, 0, dist)
        }
    }
}

/// Concrete finite realizations of the unbounded / non-uniformly-discrete
/// constructions, plus the uniformly discrete Daugavet-point space.
pub fn gen_family(kind: FamilyKind, k: u32) -> Result<FiniteMetricSpace, GenError> {
    if k < 2 {
        return Err(GenError::BadParameter { what: "gen_family needs K >= 2" });
    }
    match kind {
        FamilyKind::Unbounded => {
            let mut vals = alloc::vec![Q::zero()];
            vals.extend((1..=k).map(|i| pow2(i as i64)));
            Ok(line_space(vals))
        }
        FamilyKind::LimitPoint => {
            let mut vals = alloc::vec![Q::zero()];
            vals.extend((1..=k).map(|i| pow2(-(i as i64))));
            Ok(line_space(vals))
        }
        FamilyKind::ShrinkingPairs => {
            let mut vals = alloc::vec![Q::zero()];
            for i in 1..=k {
                vals.push(int(i as i64));
                vals.push(int(i as i64) + pow2(-(i as i64)));
            }
            Ok(line_space(vals))
        }
        FamilyKind::DaugavetRemark => {
            let mut names = alloc::vec!["0".to_string()];
            names.extend((1..=k).map(|i| format!("p{i}")));
            let n = names.len();
            let dist = matrix_by(n, |i, j| if i == 0 || j == 0 { int(1) } else { int(2) });
            Ok(finish(names, 0, dist))
        }
    }
}
