//! Brute-force references for [`crate::dp`]: absorption probabilities as sums
//! of lattice-path weights, computed without the backward recursion.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::dp::AbsorptionDistribution;
use crate::error::{Result, UrnError};
use crate::rational::ExactRational;
use crate::urn::{State, UrnSpec};

/// Draw-count limit for urns without a termination certificate.
const MAX_LAYERS: u64 = 1_000_000;

/// Sums the weights of all paths from `start`, grouping paths by their
/// length and current state: after `t` draws, the mass sitting on each
/// non-absorbing state is the total weight of the length-`t` path prefixes
/// ending there. Absorbed mass is collected until nothing is left in flight.
///
/// `weight_cap` bounds the ball total of `start`.
pub fn enumerate_paths_oracle(
    spec: &UrnSpec,
    start: &State,
    weight_cap: u64,
) -> Result<AbsorptionDistribution> {
    if start.total() > weight_cap {
        return Err(UrnError::CapExceeded { total: start.total(), cap: weight_cap });
    }
    let mut absorbed: BTreeMap<State, ExactRational> = BTreeMap::new();
    let mut layer: BTreeMap<State, ExactRational> = BTreeMap::new();
    layer.insert(start.clone(), ExactRational::one());
    let limit = spec.draw_bound(start).unwrap_or(MAX_LAYERS);

    for _ in 0..=limit {
        let mut next: BTreeMap<State, ExactRational> = BTreeMap::new();
        for (state, mass) in layer {
            if spec.is_absorbing(&state) {
                *absorbed.entry(state).or_insert_with(ExactRational::zero) += mass;
                continue;
            }
            for (succ, w) in spec.step_outcomes(&state)? {
                *next.entry(succ).or_insert_with(ExactRational::zero) += &mass * w;
            }
        }
        if next.is_empty() {
            return Ok(AbsorptionDistribution::from_entries(start.clone(), absorbed));
        }
        layer = next;
    }
    Err(UrnError::NonTerminating {
        start: start.clone(),
        reason: format!("mass still in flight after {limit} draws"),
    })
}

/// Literal depth-first enumeration of every path from `start` to the wall,
/// adding each path's weight to its endpoint. Fails with
/// [`UrnError::CapExceeded`] once more than `max_paths` paths are seen.
pub fn enumerate_paths_exhaustive(
    spec: &UrnSpec,
    start: &State,
    max_paths: u64,
) -> Result<AbsorptionDistribution> {
    let mut absorbed: BTreeMap<State, ExactRational> = BTreeMap::new();
    let mut paths = 0u64;
    let depth_limit = spec.draw_bound(start).unwrap_or(MAX_LAYERS);
    let mut stack = vec![(start.clone(), ExactRational::one(), 0u64)];
    while let Some((state, weight, depth)) = stack.pop() {
        if spec.is_absorbing(&state) {
            paths += 1;
            if paths > max_paths {
                return Err(UrnError::CapExceeded { total: paths, cap: max_paths });
            }
            *absorbed.entry(state).or_insert_with(ExactRational::zero) += weight;
            continue;
        }
        if depth >= depth_limit {
            return Err(UrnError::NonTerminating {
                start: start.clone(),
                reason: format!("path longer than {depth_limit} draws"),
            });
        }
        for (succ, w) in spec.step_outcomes(&state)? {
            stack.push((succ, &weight * w, depth + 1));
        }
    }
    Ok(AbsorptionDistribution::from_entries(start.clone(), absorbed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::absorption_distribution;
    use crate::presets::ModelPreset;

    #[test]
    fn pills_one_one_matches_dp() {
        let spec = ModelPreset::Pills.spec();
        let start = State::pair(1, 1);
        let dp = absorption_distribution(&spec, &start).unwrap();
        assert_eq!(enumerate_paths_oracle(&spec, &start, 10).unwrap(), dp);
        assert_eq!(enumerate_paths_exhaustive(&spec, &start, 10).unwrap(), dp);
    }

    #[test]
    fn absorbing_start_is_point_mass() {
        for preset in ModelPreset::catalogue(3) {
            let spec = preset.spec();
            let start = if spec.colors() == 2 {
                State::pair(0, 4)
            } else {
                State::new(vec![2, 1, 0])
            };
            assert_eq!(
                enumerate_paths_oracle(&spec, &start, 10).unwrap(),
                AbsorptionDistribution::point_mass(start)
            );
        }
    }

    #[test]
    fn cannibal_two_zero() {
        let spec = ModelPreset::Cannibal.spec();
        let start = State::pair(2, 0);
        let oracle = enumerate_paths_oracle(&spec, &start, 10).unwrap();
        assert!(oracle.total().is_one());
        assert!(oracle.iter().all(|(s, _)| s.black() <= 1));
        assert_eq!(oracle, absorption_distribution(&spec, &start).unwrap());
    }

    #[test]
    fn caps() {
        let spec = ModelPreset::Pills.spec();
        let err = enumerate_paths_oracle(&spec, &State::pair(6, 6), 10).unwrap_err();
        assert_eq!(err, UrnError::CapExceeded { total: 12, cap: 10 });
        let err = enumerate_paths_exhaustive(&spec, &State::pair(6, 6), 100).unwrap_err();
        assert!(matches!(err, UrnError::CapExceeded { .. }));
    }
}
