//! Dense linear programming with primal and dual certificates.
//!
//! The solver is a two-phase tableau simplex over a generic scalar. Two
//! instantiations are used: exact rationals (Bland's rule, guaranteed
//! termination, zero tolerances) and `f64` (Dantzig's rule with a Bland
//! fallback and explicit tolerances). Problems here are small and dense, so
//! a tableau beats factorized variants and the vertex solutions double as
//! witness functions for the callers.
//!
//! Certificate conventions, stated for the original program
//! `opt c'x  s.t.  a_i'x {<=,=,>=} b_i,  l <= x <= u`:
//!
//! * optimal: `row_duals` y and `bound_duals` (lo_j, up_j) satisfy
//!   stationarity `c_j = sum_i y_i a_ij + lo_j + up_j` for every variable,
//!   with sign pattern (minimize) y_i >= 0 on `>=` rows, y_i <= 0 on `<=`
//!   rows, lo_j >= 0, up_j <= 0; all signs flip for maximize. The reported
//!   `dual_objective = y'b + sum_j (lo_j l_j + up_j u_j)` equals the primal
//!   objective, exactly in rational mode and within [`GAP_TOL`] in float
//!   mode.
//! * infeasible: a Farkas certificate with the minimize sign pattern,
//!   `sum_i y_i a_ij + lo_j + up_j = 0` for every j, and
//!   `y'b + lo'l + up'u > 0`.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rational::to_f64;
use crate::Q;

/// Feasibility tolerance for float mode; exact mode uses zero.
pub const FEAS_TOL: f64 = 1e-9;
/// Duality-gap tolerance for float mode; exact mode uses zero.
pub const GAP_TOL: f64 = 1e-7;

/// Scalar the simplex can pivot over.
pub trait LpScalar:
    Clone + PartialOrd + core::fmt::Debug + Zero + One + Signed + 'static
{
    /// Whether arithmetic is exact; controls tolerances and pivot rules.
    const EXACT: bool;
    fn from_rational(q: &Q) -> Self;
    fn to_f64_lossy(&self) -> f64;
    /// Magnitude at or below which a value is treated as zero.
    fn tol() -> Self;
    fn feas_tol() -> Self;
    fn gap_tol() -> Self;
}

impl LpScalar for Q {
    const EXACT: bool = true;
    fn from_rational(q: &Q) -> Self {
        q.clone()
    }
    fn to_f64_lossy(&self) -> f64 {
        to_f64(self)
    }
    fn tol() -> Self {
        Q::zero()
    }
    fn feas_tol() -> Self {
        Q::zero()
    }
    fn gap_tol() -> Self {
        Q::zero()
    }
}

impl LpScalar for f64 {
    const EXACT: bool = false;
    fn from_rational(q: &Q) -> Self {
        to_f64(q)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
    fn tol() -> Self {
        1e-9
    }
    fn feas_tol() -> Self {
        FEAS_TOL
    }
    fn gap_tol() -> Self {
        GAP_TOL
    }
}

/// Arithmetic mode selector, mirrored into reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Float,
    #[default]
    ExactRational,
}

impl core::fmt::Display for Mode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Mode::Float => write!(f, "float"),
            Mode::ExactRational => write!(f, "exact"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub cmp: Cmp,
    pub rhs: S,
}

/// Dense LP in natural form: objective, tagged rows, per-variable bounds.
#[derive(Debug, Clone)]
pub struct LinearProgram<S> {
    pub sense: Sense,
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
    pub bounds: Vec<(Option<S>, Option<S>)>,
}

impl<S: LpScalar> LinearProgram<S> {
    pub fn new(sense: Sense, nvars: usize) -> Self {
        LinearProgram {
            sense,
            objective: alloc::vec![S::zero(); nvars],
            constraints: Vec::new(),
            bounds: alloc::vec![(None, None); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<S>, cmp: Cmp, rhs: S) {
        self.constraints.push(Constraint { coeffs, cmp, rhs });
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<S>, upper: Option<S>) {
        self.bounds[var] = (lower, upper);
    }

    fn check_shape(&self) -> Result<(), LpError> {
        let n = self.nvars();
        if self.bounds.len() != n {
            return Err(LpError::Structural("bounds length differs from variable count"));
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(LpError::Structural(
                    "constraint row length differs from variable count",
                ));
            }
        }
        for (l, u) in &self.bounds {
            if let (Some(l), Some(u)) = (l, u) {
                if l > u {
                    return Err(LpError::Structural("variable lower bound exceeds upper bound"));
                }
            }
        }
        Ok(())
    }
}

/// Float copy of an exact program, for float-mode solves.
pub fn to_float(lp: &LinearProgram<Q>) -> LinearProgram<f64> {
    LinearProgram {
        sense: lp.sense,
        objective: lp.objective.iter().map(to_f64).collect(),
        constraints: lp
            .constraints
            .iter()
            .map(|c| Constraint {
                coeffs: c.coeffs.iter().map(to_f64).collect(),
                cmp: c.cmp,
                rhs: to_f64(&c.rhs),
            })
            .collect(),
        bounds: lp
            .bounds
            .iter()
            .map(|(l, u)| (l.as_ref().map(to_f64), u.as_ref().map(to_f64)))
            .collect(),
    }
}

impl<S: LpScalar + core::fmt::Display> core::fmt::Display for LinearProgram<S> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let sense = match self.sense {
            Sense::Minimize => "min",
            Sense::Maximize => "max",
        };
        write!(f, "{sense}")?;
        for (j, c) in self.objective.iter().enumerate() {
            write!(f, " {c}*x{j}")?;
        }
        writeln!(f)?;
        for row in &self.constraints {
            write!(f, " ")?;
            for (j, c) in row.coeffs.iter().enumerate() {
                write!(f, " {c}*x{j}")?;
            }
            let op = match row.cmp {
                Cmp::Le => "<=",
                Cmp::Eq => "=",
                Cmp::Ge => ">=",
            };
            writeln!(f, " {op} {}", row.rhs)?;
        }
        for (j, (l, u)) in self.bounds.iter().enumerate() {
            if l.is_some() || u.is_some() {
                match l {
                    Some(l) => write!(f, "  {l} <= x{j}")?,
                    None => write!(f, "  x{j}")?,
                }
                match u {
                    Some(u) => writeln!(f, " <= {u}")?,
                    None => writeln!(f)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    Structural(&'static str),
    /// Float-mode pivoting failed to converge or the result failed its
    /// self-check; retry in exact mode.
    NumericBreakdown { detail: String },
}

impl core::fmt::Display for LpError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LpError::Structural(s) => write!(f, "malformed program: {s}"),
            LpError::NumericBreakdown { detail } => {
                write!(f, "numeric breakdown in float mode ({detail}); retry in exact mode")
            }
        }
    }
}

/// Optimal solution with its dual certificate.
#[derive(Debug, Clone)]
pub struct LpOptimal<S> {
    pub value: S,
    pub primal: Vec<S>,
    pub row_duals: Vec<S>,
    /// Per-variable (lower, upper) bound multipliers.
    pub bound_duals: Vec<(S, S)>,
    pub dual_objective: S,
}

/// Infeasibility certificate: Farkas multipliers over rows and bounds.
#[derive(Debug, Clone)]
pub struct FarkasCertificate<S> {
    pub row_duals: Vec<S>,
    pub bound_duals: Vec<(S, S)>,
}

#[derive(Debug, Clone)]
pub enum LpOutcome<S> {
    Optimal(LpOptimal<S>),
    Infeasible(FarkasCertificate<S>),
    Unbounded,
}

impl<S> LpOutcome<S> {
    pub fn optimal(&self) -> Option<&LpOptimal<S>> {
        match self {
            LpOutcome::Optimal(o) => Some(o),
            _ => None,
        }
    }

    pub fn expect_optimal(&self) -> &LpOptimal<S> {
        self.optimal().expect("expected optimal LP outcome")
    }
}

// Internal column bookkeeping for the standard-form conversion.
#[derive(Debug, Clone, Copy)]
enum ColKind {
    /// x_j = offset + t, offset from a finite lower bound (or zero).
    Shifted { var: usize },
    /// x_j = upper - t.
    UpperShifted { var: usize },
    /// Positive part of a free variable.
    SplitPos { var: usize },
    /// Negative part of a free variable.
    SplitNeg { var: usize },
    Slack,
}

#[derive(Debug, Clone, Copy)]
enum RowKind {
    Constraint(usize),
    /// Added row `t_j <= u_j - l_j` for a two-sided bounded variable.
    UpperBound(usize),
}

struct Standardized<S> {
    a: Vec<Vec<S>>, // m x (structural + slack)
    b: Vec<S>,
    cost: Vec<S>, // phase-2 costs, minimize orientation
    col_kinds: Vec<ColKind>,
    row_kinds: Vec<RowKind>,
    row_flips: Vec<bool>,
    /// Slack column of each row and whether it enters with +1 (usable as
    /// an initial basis column).
    slack_of_row: Vec<Option<(usize, bool)>>,
    offsets: Vec<S>,
    art_start: usize,
}

fn neg<S: LpScalar>(x: &S) -> S {
    S::zero() - x.clone()
}

fn standardize<S: LpScalar>(lp: &LinearProgram<S>) -> Standardized<S> {
    let n = lp.nvars();
    let minimize = matches!(lp.sense, Sense::Minimize);

    let mut var_cols: Vec<Vec<(usize, bool)>> = alloc::vec![Vec::new(); n]; // (col, negated)
    let mut col_kinds: Vec<ColKind> = Vec::new();
    let mut offsets: Vec<S> = alloc::vec![S::zero(); n];
    let mut upper_rows: Vec<(usize, S)> = Vec::new();
    for j in 0..n {
        match &lp.bounds[j] {
            (None, None) => {
                col_kinds.push(ColKind::SplitPos { var: j });
                var_cols[j].push((col_kinds.len() - 1, false));
                col_kinds.push(ColKind::SplitNeg { var: j });
                var_cols[j].push((col_kinds.len() - 1, true));
            }
            (Some(l), None) => {
                offsets[j] = l.clone();
                col_kinds.push(ColKind::Shifted { var: j });
                var_cols[j].push((col_kinds.len() - 1, false));
            }
            (None, Some(u)) => {
                offsets[j] = u.clone();
                col_kinds.push(ColKind::UpperShifted { var: j });
                var_cols[j].push((col_kinds.len() - 1, true));
            }
            (Some(l), Some(u)) => {
                offsets[j] = l.clone();
                col_kinds.push(ColKind::Shifted { var: j });
                var_cols[j].push((col_kinds.len() - 1, false));
                upper_rows.push((j, u.clone() - l.clone()));
            }
        }
    }
    let n_struct = col_kinds.len();

    let mut rows: Vec<(Vec<S>, Cmp, S, RowKind)> = Vec::new();
    for (i, c) in lp.constraints.iter().enumerate() {
        let mut coeffs = alloc::vec![S::zero(); n_struct];
        let mut rhs = c.rhs.clone();
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            rhs = rhs - a.clone() * offsets[j].clone();
            for &(col, negated) in &var_cols[j] {
                coeffs[col] = if negated { neg(a) } else { a.clone() };
            }
        }
        rows.push((coeffs, c.cmp, rhs, RowKind::Constraint(i)));
    }
    for (var, rhs) in upper_rows {
        let mut coeffs = alloc::vec![S::zero(); n_struct];
        let (col, _) = var_cols[var][0];
        coeffs[col] = S::one();
        rows.push((coeffs, Cmp::Le, rhs, RowKind::UpperBound(var)));
    }

    // Equality rows with nonnegative rhs plus slack/surplus columns.
    let m = rows.len();
    let n_slacks = rows.iter().filter(|(_, cmp, _, _)| !matches!(cmp, Cmp::Eq)).count();
    let total_cols = n_struct + n_slacks;
    let mut a: Vec<Vec<S>> = Vec::with_capacity(m);
    let mut b: Vec<S> = Vec::with_capacity(m);
    let mut row_kinds = Vec::with_capacity(m);
    let mut row_flips = Vec::with_capacity(m);
    let mut slack_of_row = Vec::with_capacity(m);
    let mut next_slack = n_struct;
    for (coeffs, cmp, rhs, kind) in rows {
        let flip = rhs < S::zero();
        let mut row = alloc::vec![S::zero(); total_cols];
        for (j, v) in coeffs.into_iter().enumerate() {
            row[j] = if flip { neg(&v) } else { v };
        }
        let rhs = if flip { neg(&rhs) } else { rhs };
        let eff_cmp = match (cmp, flip) {
            (Cmp::Eq, _) => Cmp::Eq,
            (Cmp::Le, false) | (Cmp::Ge, true) => Cmp::Le,
            (Cmp::Ge, false) | (Cmp::Le, true) => Cmp::Ge,
        };
        match eff_cmp {
            Cmp::Le => {
                row[next_slack] = S::one();
                slack_of_row.push(Some((next_slack, true)));
                next_slack += 1;
            }
            Cmp::Ge => {
                row[next_slack] = neg(&S::one());
                slack_of_row.push(Some((next_slack, false)));
                next_slack += 1;
            }
            Cmp::Eq => slack_of_row.push(None),
        }
        a.push(row);
        b.push(rhs);
        row_kinds.push(kind);
        row_flips.push(flip);
    }
    for _ in n_struct..total_cols {
        col_kinds.push(ColKind::Slack);
    }

    let mut cost = alloc::vec![S::zero(); total_cols];
    for j in 0..n {
        let c = if minimize { lp.objective[j].clone() } else { neg(&lp.objective[j]) };
        for &(col, negated) in &var_cols[j] {
            cost[col] = if negated { neg(&c) } else { c.clone() };
        }
    }

    Standardized {
        a,
        b,
        cost,
        col_kinds,
        row_kinds,
        row_flips,
        slack_of_row,
        offsets,
        art_start: total_cols,
    }
}

struct Tableau<S> {
    // Rows are (width + 1) wide: structural+slack, artificials, then rhs.
    rows: Vec<Vec<S>>,
    cost: Vec<S>, // reduced-cost row; last entry is -objective
    basis: Vec<usize>,
    /// Original internal row index of each surviving tableau row.
    row_ids: Vec<usize>,
    /// Initial unit column of each internal row (its slack, or an
    /// artificial); tracks B^{-1} for dual extraction.
    init_col: Vec<usize>,
    /// Whether the initial column is an artificial (phase-1 cost one).
    init_is_artificial: Vec<bool>,
    art_start: usize,
    iterations: usize,
}

enum PivotRule {
    Bland,
    Dantzig,
}

impl<S: LpScalar> Tableau<S> {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.cost.len();
        let pivot = self.rows[row][col].clone();
        if !pivot.is_one() {
            for v in self.rows[row].iter_mut() {
                if !v.is_zero() {
                    *v = v.clone() / pivot.clone();
                }
            }
        }
        // Touch only the nonzero entries of the pivot row; the tableaus
        // here are wide and stay fairly sparse.
        let nz: Vec<usize> = (0..w).filter(|&k| !self.rows[row][k].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for &k in &nz {
                let delta = factor.clone() * self.rows[row][k].clone();
                self.rows[i][k] = self.rows[i][k].clone() - delta;
            }
        }
        let factor = self.cost[col].clone();
        if !factor.is_zero() {
            for &k in &nz {
                let delta = factor.clone() * self.rows[row][k].clone();
                self.cost[k] = self.cost[k].clone() - delta;
            }
        }
        self.basis[row] = col;
        self.iterations += 1;
    }

    fn entering(&self, rule: &PivotRule, allow_artificial: bool) -> Option<usize> {
        let tol = S::tol();
        let limit = if allow_artificial { self.width() } else { self.art_start };
        match rule {
            PivotRule::Bland => (0..limit).find(|&j| self.cost[j] < neg(&tol)),
            PivotRule::Dantzig => {
                let mut best: Option<usize> = None;
                for j in 0..limit {
                    if self.cost[j] < neg(&tol)
                        && best.map_or(true, |b| self.cost[j] < self.cost[b])
                    {
                        best = Some(j);
                    }
                }
                best
            }
        }
    }

    /// Leaving row by minimum ratio, ties to the smallest basis index;
    /// `None` means the entering column is unbounded.
    fn leaving(&self, col: usize) -> Option<usize> {
        let tol = S::tol();
        let rhs = self.width();
        let mut best: Option<(usize, S)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][col];
            if *a <= tol {
                continue;
            }
            let ratio = self.rows[i][rhs].clone() / a.clone();
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Runs to optimality (Ok(true)) or unboundedness (Ok(false)).
    fn run(&mut self, allow_artificial: bool, max_iters: usize) -> Result<bool, LpError> {
        let dantzig_budget = if S::EXACT { 0 } else { max_iters / 2 };
        loop {
            let rule = if self.iterations < dantzig_budget {
                PivotRule::Dantzig
            } else {
                PivotRule::Bland
            };
            let Some(col) = self.entering(&rule, allow_artificial) else {
                return Ok(true);
            };
            let Some(row) = self.leaving(col) else {
                return Ok(false);
            };
            self.pivot(row, col);
            if self.iterations > max_iters {
                return Err(LpError::NumericBreakdown {
                    detail: alloc::format!("no convergence after {max_iters} pivots"),
                });
            }
        }
    }

    fn objective(&self) -> S {
        neg(&self.cost[self.width()])
    }

    /// y = c_B B^{-1} for the surviving rows. Each row's initial unit
    /// column carries B^{-1} e_i, so its reduced cost recovers the dual:
    /// y_i = c_init - rc(init col), where c_init is 1 only for artificials
    /// in phase 1.
    fn duals(&self, m_original: usize, phase_one: bool) -> Vec<S> {
        let mut y = alloc::vec![S::zero(); m_original];
        for &rid in self.row_ids.iter() {
            let rc = self.cost[self.init_col[rid]].clone();
            y[rid] = if phase_one && self.init_is_artificial[rid] {
                S::one() - rc
            } else {
                neg(&rc)
            };
        }
        y
    }
}

/// Solves a dense LP. Exact mode terminates unconditionally (Bland's
/// rule); float mode self-checks feasibility and the duality gap and
/// reports a numeric breakdown rather than a silently wrong answer.
pub fn solve<S: LpScalar>(lp: &LinearProgram<S>) -> Result<LpOutcome<S>, LpError> {
    lp.check_shape()?;
    let minimize = matches!(lp.sense, Sense::Minimize);
    let std_form = standardize(lp);
    let m = std_form.a.len();

    // Rows whose slack enters positively start basic on it; only the
    // remaining rows get an artificial column. All-inequality programs
    // then skip phase 1 outright.
    let mut art_of_row: Vec<Option<usize>> = alloc::vec![None; m];
    let mut n_art = 0;
    for (i, slot) in art_of_row.iter_mut().enumerate() {
        if !matches!(std_form.slack_of_row[i], Some((_, true))) {
            *slot = Some(std_form.art_start + n_art);
            n_art += 1;
        }
    }
    let width = std_form.art_start + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut init_col = Vec::with_capacity(m);
    let mut init_is_artificial = Vec::with_capacity(m);
    for (i, mut row) in std_form.a.clone().into_iter().enumerate() {
        row.resize(width + 1, S::zero());
        row[width] = std_form.b[i].clone();
        match art_of_row[i] {
            Some(col) => {
                row[col] = S::one();
                basis.push(col);
                init_col.push(col);
                init_is_artificial.push(true);
            }
            None => {
                let (slack, _) = std_form.slack_of_row[i].expect("slack-basic row");
                basis.push(slack);
                init_col.push(slack);
                init_is_artificial.push(false);
            }
        }
        rows.push(row);
    }

    // Phase-1 reduced costs: minimize the artificial sum from the mixed
    // slack/artificial starting basis.
    let mut cost = alloc::vec![S::zero(); width + 1];
    for (j, slot) in cost.iter_mut().enumerate().take(std_form.art_start) {
        let mut s = S::zero();
        for (i, row) in rows.iter().enumerate() {
            if art_of_row[i].is_some() {
                s = s + row[j].clone();
            }
        }
        *slot = neg(&s);
    }
    let mut rhs_sum = S::zero();
    for (i, row) in rows.iter().enumerate() {
        if art_of_row[i].is_some() {
            rhs_sum = rhs_sum + row[width].clone();
        }
    }
    cost[width] = neg(&rhs_sum);

    let mut tab = Tableau {
        rows,
        cost,
        basis,
        row_ids: (0..m).collect(),
        init_col,
        init_is_artificial,
        art_start: std_form.art_start,
        iterations: 0,
    };
    let max_iters = 2000 + 200 * (m + width);

    let phase1_done = tab.run(true, max_iters)?;
    debug_assert!(phase1_done, "phase 1 is bounded below by zero");
    let mut feas_threshold = S::feas_tol();
    if !S::EXACT {
        let mut scale = S::one();
        for b in &std_form.b {
            if b.abs() > scale {
                scale = b.abs();
            }
        }
        feas_threshold = feas_threshold * scale;
    }
    if tab.objective() > feas_threshold {
        let duals = tab.duals(m, true);
        let cert = map_certificate::<S>(&std_form, lp, &duals, None, true);
        return Ok(LpOutcome::Infeasible(cert));
    }

    // Drive leftover artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= tab.art_start {
            let col = (0..tab.art_start).find(|&j| tab.rows[i][j].abs() > S::tol());
            match col {
                Some(col) => tab.pivot(i, col),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    tab.row_ids.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase 2: rebuild the reduced-cost row from the real objective.
    let w = tab.cost.len();
    let mut cost = alloc::vec![S::zero(); w];
    cost[..std_form.art_start].clone_from_slice(&std_form.cost);
    for (i, &bv) in tab.basis.iter().enumerate() {
        let cb = cost[bv].clone();
        if cb.is_zero() {
            continue;
        }
        for k in 0..w {
            let delta = cb.clone() * tab.rows[i][k].clone();
            cost[k] = cost[k].clone() - delta;
        }
    }
    tab.cost = cost;
    tab.iterations = 0;

    if !tab.run(false, max_iters)? {
        return Ok(LpOutcome::Unbounded);
    }

    // Primal point in original variables.
    let mut x_std = alloc::vec![S::zero(); std_form.art_start];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < std_form.art_start {
            x_std[bv] = tab.rows[i][w - 1].clone();
        }
    }
    let n = lp.nvars();
    let mut primal = alloc::vec![S::zero(); n];
    for (col, kind) in std_form.col_kinds.iter().enumerate().take(std_form.art_start) {
        match *kind {
            ColKind::Shifted { var } => {
                primal[var] = std_form.offsets[var].clone() + x_std[col].clone()
            }
            ColKind::UpperShifted { var } => {
                primal[var] = std_form.offsets[var].clone() - x_std[col].clone()
            }
            ColKind::SplitPos { var } => primal[var] = primal[var].clone() + x_std[col].clone(),
            ColKind::SplitNeg { var } => primal[var] = primal[var].clone() - x_std[col].clone(),
            ColKind::Slack => {}
        }
    }
    let mut value = S::zero();
    for j in 0..n {
        value = value + lp.objective[j].clone() * primal[j].clone();
    }

    let duals = tab.duals(m, false);
    let cert = map_certificate::<S>(&std_form, lp, &duals, Some(&tab.cost), minimize);
    let mut dual_objective = S::zero();
    for (i, c) in lp.constraints.iter().enumerate() {
        dual_objective = dual_objective + cert.row_duals[i].clone() * c.rhs.clone();
    }
    for (j, (lo, up)) in cert.bound_duals.iter().enumerate() {
        if let Some(l) = &lp.bounds[j].0 {
            dual_objective = dual_objective + lo.clone() * l.clone();
        }
        if let Some(u) = &lp.bounds[j].1 {
            dual_objective = dual_objective + up.clone() * u.clone();
        }
    }

    let opt = LpOptimal {
        value,
        primal,
        row_duals: cert.row_duals,
        bound_duals: cert.bound_duals,
        dual_objective,
    };
    if !S::EXACT {
        float_self_check(lp, &opt)?;
    }
    Ok(LpOutcome::Optimal(opt))
}

/// Maps internal duals and reduced costs back to original rows and bounds.
/// Internally the solver always minimizes; `for_min` selects the exposed
/// sign convention (Farkas certificates always use the minimize pattern).
fn map_certificate<S: LpScalar>(
    std_form: &Standardized<S>,
    lp: &LinearProgram<S>,
    internal_duals: &[S],
    reduced_costs: Option<&[S]>,
    for_min: bool,
) -> FarkasCertificate<S> {
    let sign_flip = !for_min;
    let n = lp.nvars();
    let mut row_duals = alloc::vec![S::zero(); lp.constraints.len()];
    let mut bound_duals = alloc::vec![(S::zero(), S::zero()); n];

    for (i, kind) in std_form.row_kinds.iter().enumerate() {
        let mut y = internal_duals[i].clone();
        if std_form.row_flips[i] {
            y = neg(&y);
        }
        if sign_flip {
            y = neg(&y);
        }
        match *kind {
            RowKind::Constraint(r) => row_duals[r] = y,
            RowKind::UpperBound(var) => bound_duals[var].1 = y,
        }
    }

    match reduced_costs {
        Some(rc) => {
            // Structural reduced costs yield the bound multipliers: for a
            // lower-shifted column rc is the lower multiplier, for an
            // upper-shifted column -rc is the upper multiplier.
            for (col, kind) in std_form.col_kinds.iter().enumerate().take(std_form.art_start) {
                let r = rc[col].clone();
                match *kind {
                    ColKind::Shifted { var } => {
                        bound_duals[var].0 = if sign_flip { neg(&r) } else { r };
                    }
                    ColKind::UpperShifted { var } => {
                        bound_duals[var].1 = if sign_flip { r } else { neg(&r) };
                    }
                    _ => {}
                }
            }
        }
        None => {
            // Farkas case: no reduced costs are available, so assign each
            // variable's stationarity residue to a bound of matching sign.
            for j in 0..n {
                let has_lower = lp.bounds[j].0.is_some();
                let has_upper = lp.bounds[j].1.is_some();
                if !has_lower && !has_upper {
                    continue;
                }
                let mut resid = S::zero();
                for (i, c) in lp.constraints.iter().enumerate() {
                    resid = resid + row_duals[i].clone() * c.coeffs[j].clone();
                }
                resid = resid + bound_duals[j].0.clone() + bound_duals[j].1.clone();
                let lam = neg(&resid);
                if lam >= S::zero() && has_lower {
                    bound_duals[j].0 = bound_duals[j].0.clone() + lam;
                } else {
                    bound_duals[j].1 = bound_duals[j].1.clone() + lam;
                }
            }
        }
    }

    FarkasCertificate { row_duals, bound_duals }
}

fn float_self_check<S: LpScalar>(lp: &LinearProgram<S>, opt: &LpOptimal<S>) -> Result<(), LpError> {
    let mut scale = 1.0f64;
    for c in &lp.constraints {
        for a in &c.coeffs {
            scale = scale.max(a.to_f64_lossy().abs());
        }
        scale = scale.max(c.rhs.to_f64_lossy().abs());
    }
    let feas = FEAS_TOL * scale * 100.0;
    for c in &lp.constraints {
        let lhs: f64 = c
            .coeffs
            .iter()
            .zip(&opt.primal)
            .map(|(a, x)| a.to_f64_lossy() * x.to_f64_lossy())
            .sum();
        let rhs = c.rhs.to_f64_lossy();
        let ok = match c.cmp {
            Cmp::Le => lhs <= rhs + feas,
            Cmp::Ge => lhs >= rhs - feas,
            Cmp::Eq => (lhs - rhs).abs() <= feas,
        };
        if !ok {
            return Err(LpError::NumericBreakdown {
                detail: alloc::format!("primal residual {:.3e} beyond tolerance", (lhs - rhs).abs()),
            });
        }
    }
    for (j, (l, u)) in lp.bounds.iter().enumerate() {
        let x = opt.primal[j].to_f64_lossy();
        if let Some(l) = l {
            if x < l.to_f64_lossy() - feas {
                return Err(LpError::NumericBreakdown {
                    detail: String::from("lower bound violated"),
                });
            }
        }
        if let Some(u) = u {
            if x > u.to_f64_lossy() + feas {
                return Err(LpError::NumericBreakdown {
                    detail: String::from("upper bound violated"),
                });
            }
        }
    }
    let gap = (opt.value.to_f64_lossy() - opt.dual_objective.to_f64_lossy()).abs();
    if gap > GAP_TOL * scale * 100.0 {
        return Err(LpError::NumericBreakdown {
            detail: alloc::format!("duality gap {gap:.3e} beyond tolerance"),
        });
    }
    Ok(())
}

/// Checks a Farkas certificate against its definition, within `tol`.
pub fn verify_farkas<S: LpScalar>(
    lp: &LinearProgram<S>,
    cert: &FarkasCertificate<S>,
    tol: &S,
) -> bool {
    for (i, c) in lp.constraints.iter().enumerate() {
        let y = &cert.row_duals[i];
        let ok = match c.cmp {
            Cmp::Ge => *y >= neg(tol),
            Cmp::Le => *y <= tol.clone(),
            Cmp::Eq => true,
        };
        if !ok {
            return false;
        }
    }
    let n = lp.nvars();
    let mut payoff = S::zero();
    for (i, c) in lp.constraints.iter().enumerate() {
        payoff = payoff + cert.row_duals[i].clone() * c.rhs.clone();
    }
    for j in 0..n {
        let (lo, up) = &cert.bound_duals[j];
        if *lo < neg(tol) || *up > tol.clone() {
            return false;
        }
        if !lo.is_zero() && lp.bounds[j].0.is_none() {
            return false;
        }
        if !up.is_zero() && lp.bounds[j].1.is_none() {
            return false;
        }
        let mut station = lo.clone() + up.clone();
        for (i, c) in lp.constraints.iter().enumerate() {
            station = station + cert.row_duals[i].clone() * c.coeffs[j].clone();
        }
        if station.abs() > tol.clone() {
            return false;
        }
        if let Some(l) = &lp.bounds[j].0 {
            payoff = payoff + lo.clone() * l.clone();
        }
        if let Some(u) = &lp.bounds[j].1 {
            payoff = payoff + up.clone() * u.clone();
        }
    }
    payoff > tol.clone()
}

/// Checks the dual certificate of an optimal solution: sign pattern,
/// stationarity, and the duality gap, all within `tol`.
pub fn verify_optimal_certificate<S: LpScalar>(
    lp: &LinearProgram<S>,
    opt: &LpOptimal<S>,
    tol: &S,
) -> bool {
    let minimize = matches!(lp.sense, Sense::Minimize);
    for (i, c) in lp.constraints.iter().enumerate() {
        let y = &opt.row_duals[i];
        let ok = match (c.cmp, minimize) {
            (Cmp::Ge, true) | (Cmp::Le, false) => *y >= neg(tol),
            (Cmp::Le, true) | (Cmp::Ge, false) => *y <= tol.clone(),
            (Cmp::Eq, _) => true,
        };
        if !ok {
            return false;
        }
    }
    for j in 0..lp.nvars() {
        let (lo, up) = &opt.bound_duals[j];
        let signs_ok = if minimize {
            *lo >= neg(tol) && *up <= tol.clone()
        } else {
            *lo <= tol.clone() && *up >= neg(tol)
        };
        if !signs_ok {
            return false;
        }
        let mut station = lo.clone() + up.clone();
        for (i, c) in lp.constraints.iter().enumerate() {
            station = station + opt.row_duals[i].clone() * c.coeffs[j].clone();
        }
        if (station - lp.objective[j].clone()).abs() > tol.clone() {
            return false;
        }
    }
    (opt.value.clone() - opt.dual_objective.clone()).abs() <= tol.clone()
}
