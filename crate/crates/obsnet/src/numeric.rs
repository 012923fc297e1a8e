//! Numeric cross-validation of structural verdicts: random weight
//! realizations on the graph's zero/nonzero pattern, observability-matrix
//! rank, and a windowed open-loop least-squares Monte-Carlo estimation.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use thiserror::Error;

use crate::graph::DiGraph;
use crate::observability;

pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("observer index {0} is not a node of the graph")]
    UnknownObserver(usize),
    #[error("matrix powers overflowed despite rescaling")]
    NumericOverflow,
    #[error("realization is not numerically observable (rank {rank} of {n})")]
    NotNumericallyObservable { rank: usize, n: usize },
    #[error("estimation error exceeded the overflow guard at step {step}")]
    DivergedEstimate { step: usize },
}

/// A real matrix pair (A, C) conforming to the graph's structure.
///
/// Nonzero entries of A sit exactly on the adjacency pattern (edge a -> b
/// puts a nonzero at row b, column a); each row of C selects one observer.
#[derive(Clone, Debug)]
pub struct WeightedRealization {
    pub a_matrix: DMatrix<f64>,
    pub c_matrix: DMatrix<f64>,
    pub observers: Vec<usize>,
    pub seed: u64,
    pub spectral_radius: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimationTrace {
    pub msee: Vec<f64>,
    pub trials: usize,
    pub steps: usize,
    pub noise_std_process: f64,
    pub noise_std_measurement: f64,
}

/// Draw nonzero weights independently uniform on [-1, -0.1] u [0.1, 1]
/// (bounded away from zero so the pattern survives in finite precision).
/// With `scale_unstable`, A is rescaled so the spectral radius exceeds 1.
/// Deterministic given `seed`.
pub fn realize_weights(
    g: &DiGraph,
    observers: &[usize],
    seed: u64,
    scale_unstable: bool,
) -> Result<WeightedRealization, NumericError> {
    let n = g.n();
    let mut obs: Vec<usize> = observers.to_vec();
    obs.sort_unstable();
    obs.dedup();
    if let Some(&o) = obs.iter().find(|&&o| o >= n) {
        return Err(NumericError::UnknownObserver(o));
    }
    let pattern = g.adjacency_pattern();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if pattern[i][j] {
                let magnitude: f64 = rng.gen_range(0.1..=1.0);
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                a[(i, j)] = sign * magnitude;
            }
        }
    }
    let mut warnings = Vec::new();
    let mut rho = spectral_radius(&a);
    if g.edge_count() == 0 {
        warnings.push("graph has no edges; A is the zero matrix".to_owned());
    }
    if scale_unstable {
        if rho == 0.0 {
            warnings.push("spectral radius is zero; cannot rescale to unstable".to_owned());
        } else if rho <= 1.0 {
            a *= 1.1 / rho;
            rho = spectral_radius(&a);
        }
    }
    let mut c = DMatrix::zeros(obs.len(), n);
    for (row, &o) in obs.iter().enumerate() {
        c[(row, o)] = 1.0;
    }
    Ok(WeightedRealization {
        a_matrix: a,
        c_matrix: c,
        observers: obs,
        seed,
        spectral_radius: rho,
        warnings,
    })
}

fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Stack O = [C; CA; ...; CA^(n-1)] and return its numeric rank (singular
/// values >= tolerance * sigma_max) and condition number sigma_max/sigma_min
/// (infinite when rank deficient).
///
/// Each power block is rescaled to unit max entry when it grows past 1e100;
/// row scaling leaves the rank unchanged, so the rank verdict is exact even
/// for strongly unstable A.
pub fn observability_rank(
    r: &WeightedRealization,
    tolerance: f64,
) -> Result<(usize, f64), NumericError> {
    let n = r.a_matrix.ncols();
    let p = r.c_matrix.nrows();
    let mut stacked = DMatrix::zeros(p * n, n);
    let mut power = DMatrix::identity(n, n);
    for k in 0..n {
        let block = &r.c_matrix * &power;
        stacked.view_mut((k * p, 0), (p, n)).copy_from(&block);
        if k + 1 < n {
            power = &power * &r.a_matrix;
            let m = power.amax();
            if !m.is_finite() {
                return Err(NumericError::NumericOverflow);
            }
            if m > 1e100 {
                power /= m;
            }
        }
    }
    if p == 0 {
        return Ok((0, f64::INFINITY));
    }
    let sv = stacked.svd(false, false).singular_values;
    let smax = sv.max();
    if !smax.is_finite() {
        return Err(NumericError::NumericOverflow);
    }
    let rank = sv.iter().filter(|&&s| s >= tolerance * smax).count();
    let cond = if rank == n {
        let smin = sv.min();
        smax / smin
    } else {
        f64::INFINITY
    };
    Ok((rank, cond))
}

/// Windowed open-loop least-squares estimation driven by the stable-step
/// discretization A_d = I + hA with ||hA|| <= 0.5.
///
/// Each trial simulates x_{k+1} = A_d x_k + v_k with measurements
/// y_k = C x_k + r_k; at every step the last n measurements are inverted
/// through the stacked observability map of A_d and the window estimate is
/// propagated to the current step. `msee[j]` averages the squared per-state
/// error at step j over all trials. Trial t derives its own RNG stream, so
/// results do not depend on execution order.
#[allow(clippy::too_many_arguments)]
pub fn simulate_estimation(
    r: &WeightedRealization,
    trials: usize,
    steps: usize,
    x0_range: f64,
    process_std: f64,
    meas_std: f64,
    seed: u64,
) -> Result<EstimationTrace, NumericError> {
    let n = r.a_matrix.ncols();
    let p = r.c_matrix.nrows();
    let (rank, _) = observability_rank(r, DEFAULT_RANK_TOLERANCE)?;
    if rank < n {
        return Err(NumericError::NotNumericallyObservable { rank, n });
    }
    let sigma_max = r.a_matrix.clone().svd(false, false).singular_values.max();
    let h = if sigma_max > 0.0 { 0.5 / sigma_max } else { 1.0 };
    let a_d = DMatrix::identity(n, n) + h * &r.a_matrix;

    // stacked observability map of the discretized system
    let mut obs_map = DMatrix::zeros(p * n, n);
    let mut power = DMatrix::identity(n, n);
    for k in 0..n {
        obs_map
            .view_mut((k * p, 0), (p, n))
            .copy_from(&(&r.c_matrix * &power));
        power = &power * &a_d;
    }
    let svd = obs_map.svd(true, true);
    // estimate refers to the start of the window; propagate n-1 steps forward
    let mut propagate = DMatrix::identity(n, n);
    for _ in 0..n - 1 {
        propagate = &propagate * &a_d;
    }

    let process = Normal::new(0.0, process_std).expect("std must be finite and nonnegative");
    let meas = Normal::new(0.0, meas_std).expect("std must be finite and nonnegative");
    let mut msee = vec![0.0; steps];
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64 + 1);
        let mut x = DVector::from_fn(n, |_, _| rng.gen_range(-x0_range..=x0_range));
        let mut window: Vec<DVector<f64>> = Vec::with_capacity(n);
        for t in 0..(n - 1 + steps) {
            let y = &r.c_matrix * &x + DVector::from_fn(p, |_, _| meas.sample(&mut rng));
            window.push(y);
            if window.len() == n {
                let mut stacked_y = DVector::zeros(p * n);
                for (k, yk) in window.iter().enumerate() {
                    stacked_y.rows_mut(k * p, p).copy_from(yk);
                }
                let x0_hat = svd
                    .solve(&stacked_y, 0.0)
                    .map_err(|_| NumericError::NumericOverflow)?;
                let x_hat = &propagate * &x0_hat;
                let err = (&x_hat - &x).norm_squared() / n as f64;
                let step = t - (n - 1);
                if !err.is_finite() || err > 1e12 {
                    return Err(NumericError::DivergedEstimate { step });
                }
                msee[step] += err;
                window.remove(0);
            }
            let noise = DVector::from_fn(n, |_, _| process.sample(&mut rng));
            x = &a_d * &x + noise;
        }
    }
    for v in msee.iter_mut() {
        *v /= trials as f64;
    }
    Ok(EstimationTrace {
        msee,
        trials,
        steps,
        noise_std_process: process_std,
        noise_std_measurement: meas_std,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossValidationEntry {
    pub seed: u64,
    pub structural_observable: bool,
    pub numeric_rank: usize,
    pub numeric_full_rank: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossValidationReport {
    pub n: usize,
    pub entries: Vec<CrossValidationEntry>,
    pub agreements: usize,
    pub disagreements: usize,
}

/// Compare the structural verdict with the numeric rank test over several
/// random realizations. Disagreement indicates a tolerance pathology and is
/// flagged, not fatal.
pub fn cross_validate(
    g: &DiGraph,
    observers: &[usize],
    seeds: &[u64],
    tolerance: f64,
) -> Result<CrossValidationReport, NumericError> {
    let n = g.n();
    let structural = observability::check_observable(g, observers)
        .map_err(|observability::ObservabilityError::UnknownObserver(o)| {
            NumericError::UnknownObserver(o)
        })?
        .observable;
    let mut entries = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let r = realize_weights(g, observers, seed, false)?;
        let (rank, _) = observability_rank(&r, tolerance)?;
        entries.push(CrossValidationEntry {
            seed,
            structural_observable: structural,
            numeric_rank: rank,
            numeric_full_rank: rank == n,
            agree: structural == (rank == n),
        });
    }
    let agreements = entries.iter().filter(|e| e.agree).count();
    Ok(CrossValidationReport {
        n,
        disagreements: entries.len() - agreements,
        agreements,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DiGraph;
    use crate::product::cartesian_product;

    fn g1() -> DiGraph {
        DiGraph::build(&["1", "2", "3"], &[("1", "2"), ("3", "2")]).unwrap()
    }

    fn g2() -> DiGraph {
        DiGraph::build(
            &["1", "2", "3", "4", "5", "6"],
            &[
                ("1", "1"),
                ("2", "2"),
                ("5", "5"),
                ("6", "6"),
                ("3", "4"),
                ("4", "3"),
                ("2", "1"),
                ("2", "3"),
                ("5", "4"),
                ("5", "6"),
            ],
        )
        .unwrap()
    }

    fn gc_with_observers() -> (DiGraph, Vec<usize>) {
        let g = cartesian_product(&g1(), &g2()).unwrap().graph;
        let obs = ["2|1", "2|3", "2|6"]
            .iter()
            .map(|l| g.node_by_label(l).unwrap())
            .collect();
        (g, obs)
    }

    #[test]
    fn realization_matches_pattern() {
        let (g, obs) = gc_with_observers();
        let r = realize_weights(&g, &obs, 7, false).unwrap();
        let pattern = g.adjacency_pattern();
        for i in 0..g.n() {
            for j in 0..g.n() {
                assert_eq!(r.a_matrix[(i, j)] != 0.0, pattern[i][j]);
                if pattern[i][j] {
                    assert!(r.a_matrix[(i, j)].abs() >= 0.1);
                }
            }
        }
        assert_eq!(r.c_matrix.nrows(), 3);
    }

    #[test]
    fn realization_is_deterministic() {
        let (g, obs) = gc_with_observers();
        let r1 = realize_weights(&g, &obs, 42, true).unwrap();
        let r2 = realize_weights(&g, &obs, 42, true).unwrap();
        assert_eq!(r1.a_matrix, r2.a_matrix);
        assert!(r1.spectral_radius > 1.0);
    }

    #[test]
    fn no_edges_warns() {
        let g = DiGraph::build::<_, &str>(&["a", "b"], &[]).unwrap();
        let r = realize_weights(&g, &[0], 1, false).unwrap();
        assert!(!r.warnings.is_empty());
        assert_eq!(r.spectral_radius, 0.0);
    }

    #[test]
    fn paper_rank_is_18() {
        let (g, obs) = gc_with_observers();
        let r = realize_weights(&g, &obs, 3, true).unwrap();
        let (rank, cond) = observability_rank(&r, DEFAULT_RANK_TOLERANCE).unwrap();
        assert_eq!(rank, 18);
        assert!(cond.is_finite());
    }

    #[test]
    fn single_observer_rank_deficient() {
        let (g, _) = gc_with_observers();
        let o = g.node_by_label("2|1").unwrap();
        let r = realize_weights(&g, &[o], 3, false).unwrap();
        let (rank, cond) = observability_rank(&r, DEFAULT_RANK_TOLERANCE).unwrap();
        assert!(rank < 18);
        assert!(cond.is_infinite());
    }

    #[test]
    fn one_node_self_loop_rank() {
        let g = DiGraph::build(&["a"], &[("a", "a")]).unwrap();
        let r = realize_weights(&g, &[0], 1, false).unwrap();
        let (rank, cond) = observability_rank(&r, DEFAULT_RANK_TOLERANCE).unwrap();
        assert_eq!(rank, 1);
        assert!((cond - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noiseless_estimation_is_exact() {
        let (g, obs) = gc_with_observers();
        let r = realize_weights(&g, &obs, 5, true).unwrap();
        let trace = simulate_estimation(&r, 3, 10, 5.0, 0.0, 0.0, 11).unwrap();
        assert!(trace.msee.iter().all(|&e| e < 1e-12));
    }

    #[test]
    fn unobservable_realization_rejected() {
        let g = g1();
        let o = g.node_by_label("2").unwrap();
        let r = realize_weights(&g, &[o], 1, false).unwrap();
        let err = simulate_estimation(&r, 1, 5, 5.0, 0.05, 0.05, 1).unwrap_err();
        assert!(matches!(err, NumericError::NotNumericallyObservable { .. }));
    }

    #[test]
    fn cross_validation_agrees_both_ways() {
        let (g, obs) = gc_with_observers();
        let seeds: Vec<u64> = (0..5).collect();
        let rep = cross_validate(&g, &obs, &seeds, DEFAULT_RANK_TOLERANCE).unwrap();
        assert_eq!(rep.agreements, 5);
        let g1 = g1();
        let rep = cross_validate(&g1, &[1], &seeds, DEFAULT_RANK_TOLERANCE).unwrap();
        assert_eq!(rep.agreements, 5);
        assert!(rep.entries.iter().all(|e| !e.structural_observable));
    }

    #[test]
    fn empty_observer_set_trivially_unobservable() {
        let rep = cross_validate(&g1(), &[], &[1], DEFAULT_RANK_TOLERANCE).unwrap();
        assert_eq!(rep.agreements, 1);
        assert_eq!(rep.entries[0].numeric_rank, 0);
    }
}
