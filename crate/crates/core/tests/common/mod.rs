//! Shared generators for randomized suites: metric spaces by shortest-path
//! closure over random rational weights, plus random functions and
//! functionals on them.

use lipdiam_core::lipspace::LipschitzFunction;
use lipdiam_core::freespace::FreeVector;
use lipdiam_core::metric::FiniteMetricSpace;
use lipdiam_core::rational::ratio;
use lipdiam_core::Q;
use rand::Rng;

/// Random rational in `[1, 8]` with denominator 1, 2, or 4.
fn random_weight<R: Rng>(rng: &mut R) -> Q {
    let num = rng.gen_range(1..=32i64);
    let den = [1i64, 2, 4][rng.gen_range(0..3)];
    ratio(num, den)
}

/// A valid random metric space: symmetric positive weights tightened into
/// a metric by min-plus (shortest path) closure.
pub fn random_metric_space<R: Rng>(rng: &mut R, min_points: usize, max_points: usize) -> FiniteMetricSpace {
    let n = rng.gen_range(min_points..=max_points);
    let mut d = vec![vec![Q::from_integer(0.into()); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = random_weight(rng);
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for via in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let alt = &d[i][via] + &d[via][j];
                if i != via && j != via && alt < d[i][j] {
                    d[i][j] = alt;
                }
            }
        }
    }
    let names = (0..n).map(|i| format!("p{i}")).collect();
    let space = FiniteMetricSpace::new(names, 0, d).expect("structure is sound");
    debug_assert!(space.validate().is_pass());
    space
}

/// Random rational in `[-4, 4]` with small denominator.
pub fn random_value<R: Rng>(rng: &mut R) -> Q {
    let num = rng.gen_range(-16..=16i64);
    let den = [1i64, 2, 4][rng.gen_range(0..3)];
    ratio(num, den)
}

pub fn random_function<R: Rng>(
    rng: &mut R,
    space: &std::sync::Arc<FiniteMetricSpace>,
) -> LipschitzFunction {
    let mut values: Vec<Q> = (0..space.len()).map(|_| random_value(rng)).collect();
    values[space.base()] = Q::from_integer(0.into());
    LipschitzFunction::new(space.clone(), values).expect("base value is zero")
}

pub fn random_free_vector<R: Rng>(
    rng: &mut R,
    space: &std::sync::Arc<FiniteMetricSpace>,
) -> FreeVector {
    let weights: Vec<Q> = (0..space.len()).map(|_| random_value(rng)).collect();
    FreeVector::new(space.clone(), weights).expect("weight count matches")
}
