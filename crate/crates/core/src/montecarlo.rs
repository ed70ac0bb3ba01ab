//! Sampling estimate of the coverage probability.
//!
//! Each sample draws the link state, then a Gaussian excess loss for that
//! state, and tests the received power against `P_min`. Interference enters
//! only through the mean value inside `P_min`, as in the analytic expression.
//!
//! Samples are split into fixed-size batches; batch `b` draws from stream `b`
//! of a ChaCha generator keyed by the seed, so the estimate does not depend on
//! how batches are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::LinkState;
use crate::coverage::{CoverageQuery, LinkBudget};
use crate::error::{ensure, Result};

const BATCH: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimResult {
    pub empirical_pcov: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl SimResult {
    fn from_hits(hits: u64, n_samples: u64, seed: u64) -> Self {
        let p = hits as f64 / n_samples as f64;
        Self {
            empirical_pcov: p,
            std_error: (p * (1.0 - p) / n_samples as f64).sqrt(),
            n_samples,
            seed,
        }
    }

    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.empirical_pcov - value).abs() <= k * self.std_error
    }
}

fn covered(budget: &LinkBudget, rng: &mut ChaCha8Rng) -> bool {
    let state = if rng.random::<f64>() < budget.p_los {
        LinkState::Los
    } else {
        LinkState::Nlos
    };
    let (mu, sigma) = match state {
        LinkState::Los => (budget.mu_los_db, budget.sigma_los_db),
        LinkState::Nlos => (budget.mu_nlos_db, budget.sigma_nlos_db),
    };
    let z: f64 = rng.sample(StandardNormal);
    let shadowing_db = mu + sigma * z;
    let received_dbm = budget.tx_power_dbm + budget.gain_db - budget.path_loss_db - shadowing_db;
    received_dbm >= budget.p_min_dbm
}

fn batch_hits(budget: &LinkBudget, seed: u64, batch: u64, len: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    (0..len).filter(|_| covered(budget, &mut rng)).count() as u64
}

/// Empirical coverage probability from `n_samples` draws.
pub fn simulate_coverage(query: &CoverageQuery, n_samples: u64, seed: u64) -> Result<SimResult> {
    ensure(
        n_samples >= 1,
        "n_samples",
        n_samples as f64,
        "must be >= 1",
    )?;
    let budget = LinkBudget::evaluate(query)?;
    let batches = n_samples.div_ceil(BATCH);
    let hits: u64 = (0..batches)
        .into_par_iter()
        .map(|b| {
            let len = BATCH.min(n_samples - b * BATCH);
            batch_hits(&budget, seed, b, len)
        })
        .sum();
    Ok(SimResult::from_hits(hits, n_samples, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{EnvironmentParams, LinkGeometry, RadioConfig};
    use crate::coverage::coverage_probability;

    fn query(r: f64, h: f64, pt: f64) -> CoverageQuery {
        CoverageQuery::new(
            LinkGeometry::new(r, h).unwrap(),
            EnvironmentParams::urban(),
            RadioConfig::default().with_tx_power(pt),
        )
    }

    #[test]
    fn deterministic_success_without_shadowing() {
        let env = EnvironmentParams {
            mu_los_db: 5.0,
            mu_nlos_db: 5.0,
            k2: 1e6,
            g2: 1e6,
            ..EnvironmentParams::urban()
        };
        let q = CoverageQuery {
            env,
            ..query(1000.0, 2000.0, 40.0)
        };
        let res = simulate_coverage(&q, 10_000, 3).unwrap();
        assert_eq!(res.empirical_pcov, 1.0);
        assert_eq!(res.std_error, 0.0);
    }

    #[test]
    fn same_seed_same_result() {
        let q = query(1500.0, 2000.0, 20.0);
        let a = simulate_coverage(&q, 50_001, 42).unwrap();
        let b = simulate_coverage(&q, 50_001, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate_coverage(&q, 50_001, 43).unwrap();
        assert_ne!(a.empirical_pcov, c.empirical_pcov);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let q = query(2500.0, 3000.0, 20.0);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_coverage(&q, 100_000, 7).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn std_error_formula_and_scaling() {
        let q = query(2500.0, 3000.0, 20.0);
        let small = simulate_coverage(&q, 1_000, 11).unwrap();
        let large = simulate_coverage(&q, 100_000, 11).unwrap();
        for r in [small, large] {
            let p = r.empirical_pcov;
            assert!((0.0..=1.0).contains(&p));
            assert!((r.std_error - (p * (1.0 - p) / r.n_samples as f64).sqrt()).abs() < 1e-15);
        }
        // 100x the samples shrinks the error about tenfold.
        let ratio = small.std_error / large.std_error;
        assert!((7.0..14.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn agrees_with_analytic_value() {
        let q = query(1500.0, 2000.0, 20.0);
        let exact = coverage_probability(&q).unwrap();
        let sim = simulate_coverage(&q, 100_000, 5).unwrap();
        assert!(sim.agrees_with(exact, 3.0), "{exact} vs {sim:?}");
    }

    #[test]
    fn rejects_zero_samples_and_footprint() {
        assert!(simulate_coverage(&query(100.0, 200.0, 20.0), 0, 1).is_err());
        assert!(simulate_coverage(&query(10_000.0, 200.0, 20.0), 10, 1).is_err());
    }
}
