//! Forward simulation of the urn process.
//!
//! Replication `i` of a batch draws from ChaCha8 keyed by the batch seed
//! with `i` as the stream id, so counts are a pure function of the config
//! no matter how replications are scheduled across threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, UrnError};
use crate::urn::{State, UrnSpec};

/// Step budget for urns without a termination certificate.
pub const UNCERTIFIED_STEP_BUDGET: u64 = 1_000_000;

/// Two-sided 99% normal quantile.
const Z_99: f64 = 2.575_829_303_548_900_4;

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub spec: UrnSpec,
    pub start: State,
    pub replications: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    counts: BTreeMap<State, u64>,
    replications: u64,
}

impl EmpiricalDistribution {
    pub fn counts(&self) -> &BTreeMap<State, u64> {
        &self.counts
    }

    pub fn replications(&self) -> u64 {
        self.replications
    }

    pub fn count(&self, state: &State) -> u64 {
        self.counts.get(state).copied().unwrap_or(0)
    }

    pub fn frequency(&self, state: &State) -> f64 {
        self.count(state) as f64 / self.replications as f64
    }

    /// Half-width of the 99% normal-approximation binomial interval around
    /// the frequency of `state`.
    pub fn half_width_99(&self, state: &State) -> f64 {
        let f = self.frequency(state);
        Z_99 * (f * (1.0 - f) / self.replications as f64).sqrt()
    }

    fn merge(mut self, other: Self) -> Self {
        for (state, c) in other.counts {
            *self.counts.entry(state).or_insert(0) += c;
        }
        self.replications += other.replications;
        self
    }
}

/// Generator for replication `index` of a batch seeded with `seed`.
pub fn replication_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs the urn from `start` until it is absorbed and returns the absorbing state.
pub fn simulate_one<R: Rng + ?Sized>(spec: &UrnSpec, start: &State, rng: &mut R) -> Result<State> {
    let budget = spec
        .draw_bound(start)
        .map_or(UNCERTIFIED_STEP_BUDGET, |b| b + 1);
    let mut state = start.clone();
    for _ in 0..=budget {
        if spec.is_absorbing(&state) {
            return Ok(state);
        }
        let (draws, total) = spec.draws(&state)?;
        let mut u = rng.random_range(0..total);
        let mut chosen = draws.len() - 1;
        for (i, d) in draws.iter().enumerate() {
            if u < d.weight {
                chosen = i;
                break;
            }
            u -= d.weight;
        }
        state = draws.into_iter().nth(chosen).expect("index within draws").next;
    }
    Err(UrnError::NonTerminating {
        start: start.clone(),
        reason: format!("not absorbed after {budget} draws"),
    })
}

pub fn run_batch(cfg: &SimConfig) -> Result<EmpiricalDistribution> {
    if cfg.replications == 0 {
        return Err(UrnError::InvalidArgument("replications must be at least 1".into()));
    }
    (0..cfg.replications)
        .into_par_iter()
        .map(|i| {
            let mut rng = replication_rng(cfg.seed, i);
            simulate_one(&cfg.spec, &cfg.start, &mut rng).map(|s| EmpiricalDistribution {
                counts: BTreeMap::from([(s, 1)]),
                replications: 1,
            })
        })
        .try_reduce(
            || EmpiricalDistribution { counts: BTreeMap::new(), replications: 0 },
            |a, b| Ok(a.merge(b)),
        )
}
