//! Functionals on `Lip_0(M)` for finite `M`: free-space vectors, their
//! Kantorovich–Rubinstein norm by dual and primal linear programs, and
//! minimal total-variation representations over the off-diagonal pair set.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::linprog::{self, Cmp, LinearProgram, LpError, LpScalar, Sense};
use crate::lipspace::{LipschitzFunction, PairIndexer};
use crate::metric::{FiniteMetricSpace, PointSubset};
use crate::Q;

/// A finitely supported functional `sum_p w_p delta_p`, canonicalized so
/// the weights sum to zero by adjusting the base weight (the base
/// evaluation acts as zero on `Lip_0(M)`, so norms are unaffected).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeVector {
    space: Arc<FiniteMetricSpace>,
    weights: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreeVectorError {
    WeightCountMismatch { expected: usize, got: usize },
    DegeneratePair,
}

impl core::fmt::Display for FreeVectorError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FreeVectorError::WeightCountMismatch { expected, got } => {
                write!(f, "expected {expected} weights, got {got}")
            }
            FreeVectorError::DegeneratePair => write!(f, "molecule endpoints must differ"),
        }
    }
}

impl FreeVector {
    /// Builds from one weight per point; the base weight is recomputed so
    /// the total is zero.
    pub fn new(space: Arc<FiniteMetricSpace>, weights: Vec<Q>) -> Result<Self, FreeVectorError> {
        if weights.len() != space.len() {
            return Err(FreeVectorError::WeightCountMismatch {
                expected: space.len(),
                got: weights.len(),
            });
        }
        let mut v = FreeVector { space, weights };
        v.canonicalize();
        Ok(v)
    }

    pub fn zero(space: Arc<FiniteMetricSpace>) -> Self {
        let weights = alloc::vec![Q::zero(); space.len()];
        FreeVector { space, weights }
    }

    /// The evaluation functional `delta_p`.
    pub fn delta(space: Arc<FiniteMetricSpace>, p: usize) -> Self {
        let mut weights = alloc::vec![Q::zero(); space.len()];
        weights[p] = Q::one();
        let mut v = FreeVector { space, weights };
        v.canonicalize();
        v
    }

    /// The molecule `(delta_u - delta_v) / d(u,v)`, a norm-one element.
    pub fn molecule(
        space: Arc<FiniteMetricSpace>,
        u: usize,
        v: usize,
    ) -> Result<Self, FreeVectorError> {
        if u == v {
            return Err(FreeVectorError::DegeneratePair);
        }
        let d = space.dist(u, v).clone();
        let mut weights = alloc::vec![Q::zero(); space.len()];
        weights[u] = Q::one() / d.clone();
        weights[v] = -(Q::one() / d);
        let mut out = FreeVector { space, weights };
        out.canonicalize();
        Ok(out)
    }

    fn canonicalize(&mut self) {
        let base = self.space.base();
        let mut sum = Q::zero();
        for (i, w) in self.weights.iter().enumerate() {
            if i != base {
                sum += w;
            }
        }
        self.weights[base] = -sum;
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn weight(&self, p: usize) -> &Q {
        &self.weights[p]
    }

    /// Point indices with nonzero weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| !self.weights[i].is_zero()).collect()
    }

    /// `F(f) = sum_p w_p f(p)`.
    pub fn apply(&self, f: &LipschitzFunction) -> Q {
        let mut out = Q::zero();
        for (w, v) in self.weights.iter().zip(f.values()) {
            out += w * v;
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        FreeVector {
            space: self.space.clone(),
            weights: self.weights.iter().map(|w| w * c).collect(),
        }
    }
}

impl core::ops::Add for &FreeVector {
    type Output = FreeVector;
    fn add(self, rhs: &FreeVector) -> FreeVector {
        assert!(
            crate::metric::same_space(&self.space, &rhs.space),
            "free vectors on different spaces"
        );
        FreeVector {
            space: self.space.clone(),
            weights: self.weights.iter().zip(&rhs.weights).map(|(a, b)| a + b).collect(),
        }
    }
}

impl core::ops::Sub for &FreeVector {
    type Output = FreeVector;
    fn sub(self, rhs: &FreeVector) -> FreeVector {
        assert!(
            crate::metric::same_space(&self.space, &rhs.space),
            "free vectors on different spaces"
        );
        FreeVector {
            space: self.space.clone(),
            weights: self.weights.iter().zip(&rhs.weights).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Dual-side norm computation: value plus a norm-one maximizer.
#[derive(Debug, Clone)]
pub struct DualNorm<S> {
    pub value: S,
    /// Maximizing function values, one per point (zero at base).
    pub witness: Vec<S>,
}

/// Nonnegative mass moved between ordered point pairs; net outflow at each
/// point matches the free vector weight.
#[derive(Debug, Clone)]
pub struct TransportPlan<S> {
    pub flows: Vec<(usize, usize, S)>,
    pub cost: S,
}

/// A signed measure on the off-diagonal pair set, acting on a function
/// through its de Leeuw transform.
#[derive(Debug, Clone)]
pub struct DeLeeuwMeasure<S> {
    atoms: Vec<((usize, usize), S)>,
}

impl<S: LpScalar> DeLeeuwMeasure<S> {
    pub fn from_atoms(atoms: Vec<((usize, usize), S)>) -> Self {
        DeLeeuwMeasure { atoms }
    }

    pub fn atoms(&self) -> &[((usize, usize), S)] {
        &self.atoms
    }

    pub fn total_variation(&self) -> S {
        let mut tv = S::zero();
        for (_, w) in &self.atoms {
            tv = tv + w.abs();
        }
        tv
    }
}

impl DeLeeuwMeasure<Q> {
    /// `mu(f~) = sum mu(x,y) (f(x)-f(y))/d(x,y)`.
    pub fn apply(&self, f: &LipschitzFunction) -> Q {
        let mut out = Q::zero();
        for ((x, y), w) in &self.atoms {
            out += w * &f.slope(*x, *y);
        }
        out
    }
}

/// Which coordinate of a pair must land in the subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaSide {
    First,
    Second,
    Union,
}

/// Total-variation mass of the measure restricted to the pairs whose
/// chosen coordinate lies in `A`.
pub fn gamma_mass<S: LpScalar>(mu: &DeLeeuwMeasure<S>, a: &PointSubset, side: GammaSide) -> S {
    let mut out = S::zero();
    for ((x, y), w) in mu.atoms() {
        let hit = match side {
            GammaSide::First => a.contains(*x),
            GammaSide::Second => a.contains(*y),
            GammaSide::Union => a.contains(*x) || a.contains(*y),
        };
        if hit {
            out = out + w.abs();
        }
    }
    out
}

/// Free norm by the dual program: maximize `F(f)` over the unit ball of
/// `Lip_0(M)`. Always feasible and bounded.
pub fn free_norm_dual<S: LpScalar>(fv: &FreeVector) -> Result<DualNorm<S>, LpError> {
    let space = fv.space();
    let n = space.len();
    let base = space.base();
    // One variable per non-base point, in point order.
    let vars: Vec<usize> = (0..n).filter(|&p| p != base).collect();
    let mut lp = LinearProgram::<S>::new(Sense::Maximize, vars.len());
    for (k, &p) in vars.iter().enumerate() {
        lp.objective[k] = S::from_rational(fv.weight(p));
    }
    let var_of: Vec<Option<usize>> = {
        let mut map = alloc::vec![None; n];
        for (k, &p) in vars.iter().enumerate() {
            map[p] = Some(k);
        }
        map
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let d = S::from_rational(space.dist(i, j));
            let mut row = alloc::vec![S::zero(); vars.len()];
            if let Some(k) = var_of[i] {
                row[k] = S::one();
            }
            if let Some(k) = var_of[j] {
                row[k] = S::zero() - S::one();
            }
            lp.add_constraint(row.clone(), Cmp::Le, d.clone());
            let neg_row: Vec<S> = row.iter().map(|v| S::zero() - v.clone()).collect();
            lp.add_constraint(neg_row, Cmp::Le, d);
        }
    }
    let out = linprog::solve(&lp)?;
    let opt = out.expect_optimal();
    let mut witness = alloc::vec![S::zero(); n];
    for (k, &p) in vars.iter().enumerate() {
        witness[p] = opt.primal[k].clone();
    }
    Ok(DualNorm { value: opt.value.clone(), witness })
}

/// Free norm by the primal program: cheapest flow realizing the weights.
/// Equals the dual value (exactly in rational mode).
pub fn free_norm_primal<S: LpScalar>(fv: &FreeVector) -> Result<TransportPlan<S>, LpError> {
    let space = fv.space();
    let n = space.len();
    let idx = PairIndexer::new(n);
    let mut lp = LinearProgram::<S>::new(Sense::Minimize, idx.count());
    for k in 0..idx.count() {
        let (i, j) = idx.pair(k);
        lp.objective[k] = S::from_rational(space.dist(i, j));
        lp.set_bounds(k, Some(S::zero()), None);
    }
    for p in 0..n {
        let mut row = alloc::vec![S::zero(); idx.count()];
        for q in 0..n {
            if q == p {
                continue;
            }
            row[idx.index(p, q)] = S::one();
            row[idx.index(q, p)] = S::zero() - S::one();
        }
        lp.add_constraint(row, Cmp::Eq, S::from_rational(fv.weight(p)));
    }
    let out = linprog::solve(&lp)?;
    let opt = out.expect_optimal();
    let mut flows = Vec::new();
    for k in 0..idx.count() {
        if opt.primal[k] > S::tol() {
            let (i, j) = idx.pair(k);
            flows.push((i, j, opt.primal[k].clone()));
        }
    }
    Ok(TransportPlan { flows, cost: opt.value.clone() })
}

/// Minimal total-variation measure on the off-diagonal pair set whose
/// action agrees with `F` on the point-indicator basis of `Lip_0(M)`. The
/// achieved minimum equals the free norm.
pub fn min_tv_representation<S: LpScalar>(fv: &FreeVector) -> Result<DeLeeuwMeasure<S>, LpError> {
    let space = fv.space();
    let n = space.len();
    let base = space.base();
    let idx = PairIndexer::new(n);
    let np = idx.count();
    // Variables: mu = pos - neg per ordered pair.
    let mut lp = LinearProgram::<S>::new(Sense::Minimize, 2 * np);
    for k in 0..2 * np {
        lp.objective[k] = S::one();
        lp.set_bounds(k, Some(S::zero()), None);
    }
    // For the indicator e_p of a non-base point p:
    //   e_p~(x,y) = [x=p]/d(p,y) - [y=p]/d(x,p).
    for p in 0..n {
        if p == base {
            continue;
        }
        let mut row = alloc::vec![S::zero(); 2 * np];
        for q in 0..n {
            if q == p {
                continue;
            }
            let inv = S::one() / S::from_rational(space.dist(p, q));
            let k_out = idx.index(p, q);
            row[k_out] = inv.clone();
            row[np + k_out] = S::zero() - inv.clone();
            let k_in = idx.index(q, p);
            row[k_in] = S::zero() - inv.clone();
            row[np + k_in] = inv;
        }
        lp.add_constraint(row, Cmp::Eq, S::from_rational(fv.weight(p)));
    }
    let out = linprog::solve(&lp)?;
    let opt = out.expect_optimal();
    let mut atoms = Vec::new();
    for k in 0..np {
        let w = opt.primal[k].clone() - opt.primal[np + k].clone();
        if w.abs() > S::tol() {
            atoms.push((idx.pair(k), w));
        }
    }
    Ok(DeLeeuwMeasure { atoms })
}

/// `||F + m_{u,v}||` via the dual program.
pub fn pair_with_molecule<S: LpScalar>(
    fv: &FreeVector,
    u: usize,
    v: usize,
) -> Result<S, PairingError> {
    let m = FreeVector::molecule(fv.space().clone(), u, v).map_err(PairingError::Vector)?;
    let sum = fv + &m;
    free_norm_dual::<S>(&sum).map(|d| d.value).map_err(PairingError::Lp)
}

#[derive(Debug, Clone)]
pub enum PairingError {
    Vector(FreeVectorError),
    Lp(LpError),
}

impl core::fmt::Display for PairingError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PairingError::Vector(e) => write!(f, "{e}"),
            PairingError::Lp(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use alloc::string::ToString;
    use alloc::vec;

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
    fn canonicalization_zeroes_total_mass() {
        let s = tripod();
        let f = FreeVector::new(s, vec![int(7), int(2), int(3)]).unwrap();
        let total: Q = f.weights().iter().sum();
        assert_eq!(total, int(0));
        assert_eq!(*f.weight(0), int(-5));
    }

    #[test]
    fn molecule_has_norm_one() {
        let s = tripod();
        let m = FreeVector::molecule(s, 1, 2).unwrap();
        let dual = free_norm_dual::<Q>(&m).unwrap();
        assert_eq!(dual.value, int(1));
        let primal = free_norm_primal::<Q>(&m).unwrap();
        assert_eq!(primal.cost, int(1));
        let tv = min_tv_representation::<Q>(&m).unwrap();
        assert_eq!(tv.total_variation(), int(1));
    }

    #[test]
    fn molecule_rejects_equal_endpoints() {
        let s = tripod();
        assert!(matches!(
            FreeVector::molecule(s, 1, 1),
            Err(FreeVectorError::DegeneratePair)
        ));
    }

    #[test]
    fn delta_sum_norms() {
        // F = delta_a + delta_b on the tripod: norm 2 (route both to base).
        let s = tripod();
        let f =
            &FreeVector::delta(s.clone(), 1) + &FreeVector::delta(s.clone(), 2);
        let dual = free_norm_dual::<Q>(&f).unwrap();
        assert_eq!(dual.value, int(2));
        let primal = free_norm_primal::<Q>(&f).unwrap();
        assert_eq!(primal.cost, int(2));
        let tv = min_tv_representation::<Q>(&f).unwrap();
        assert_eq!(tv.total_variation(), int(2));
    }

    #[test]
    fn zero_vector_everything_zero() {
        let s = tripod();
        let z = FreeVector::zero(s);
        assert_eq!(free_norm_dual::<Q>(&z).unwrap().value, int(0));
        let plan = free_norm_primal::<Q>(&z).unwrap();
        assert_eq!(plan.cost, int(0));
        assert!(plan.flows.is_empty());
    }

    #[test]
    fn molecule_plan_is_single_edge() {
        // Strict triangle: rerouting a->b through the base is more
        // expensive, so the optimal plan is forced onto the direct edge.
        let s = FiniteMetricSpace::new(
            vec!["0".to_string(), "a".to_string(), "b".to_string()],
            0,
            vec![
                vec![int(0), int(1), int(1)],
                vec![int(1), int(0), crate::rational::ratio(3, 2)],
                vec![int(1), crate::rational::ratio(3, 2), int(0)],
            ],
        )
        .unwrap()
        .into_shared();
        let m = FreeVector::molecule(s, 1, 2).unwrap();
        let plan = free_norm_primal::<Q>(&m).unwrap();
        assert_eq!(plan.cost, int(1));
        assert_eq!(plan.flows.len(), 1);
        let (from, to, amount) = plan.flows[0].clone();
        assert_eq!((from, to), (1, 2));
        assert_eq!(amount, crate::rational::ratio(2, 3));
    }

    #[test]
    fn min_tv_atom_for_molecule() {
        let s = tripod();
        let m = FreeVector::molecule(s.clone(), 1, 2).unwrap();
        let mu = min_tv_representation::<Q>(&m).unwrap();
        // The measure acts like the functional on arbitrary functions.
        let f = LipschitzFunction::new(s, vec![int(0), int(1), int(-1)]).unwrap();
        assert_eq!(mu.apply(&f), m.apply(&f));
        // Homogeneity: 2 m has TV 2.
        let two_m = m.scale(&int(2));
        let mu2 = min_tv_representation::<Q>(&two_m).unwrap();
        assert_eq!(mu2.total_variation(), int(2));
    }

    #[test]
    fn gamma_masses() {
        let s = tripod();
        let space = s.clone();
        let mu = DeLeeuwMeasure::from_atoms(vec![((1, 2), int(1))]);
        let a_empty = PointSubset::empty();
        assert_eq!(gamma_mass(&mu, &a_empty, GammaSide::First), int(0));
        let a_all = PointSubset::from_sorted((0..space.len()).collect());
        assert_eq!(gamma_mass(&mu, &a_all, GammaSide::First), int(1));
        let a_y = PointSubset::from_sorted(vec![2]);
        assert_eq!(gamma_mass(&mu, &a_y, GammaSide::First), int(0));
        assert_eq!(gamma_mass(&mu, &a_y, GammaSide::Second), int(1));
        assert_eq!(gamma_mass(&mu, &a_y, GammaSide::Union), int(1));
    }

    #[test]
    fn pair_with_molecule_extremes() {
        let s = tripod();
        let m = FreeVector::molecule(s.clone(), 1, 2).unwrap();
        assert_eq!(pair_with_molecule::<Q>(&m, 1, 2).unwrap(), int(2));
        let neg = m.scale(&int(-1));
        assert_eq!(pair_with_molecule::<Q>(&neg, 1, 2).unwrap(), int(0));
        assert!(matches!(
            pair_with_molecule::<Q>(&m, 1, 1),
            Err(PairingError::Vector(FreeVectorError::DegeneratePair))
        ));
    }

    #[test]
    fn transport_plan_conserves_flow() {
        let s = tripod();
        let f = FreeVector::new(s.clone(), vec![int(0), int(2), int(-1)]).unwrap();
        let plan = free_norm_primal::<Q>(&f).unwrap();
        for p in 0..s.len() {
            let mut net = Q::zero();
            for (from, to, amt) in &plan.flows {
                if *from == p {
                    net += amt;
                }
                if *to == p {
                    net -= amt;
                }
            }
            assert_eq!(net, *f.weight(p), "net outflow at {p}");
        }
    }
}
