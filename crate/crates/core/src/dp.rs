//! Exact law of the absorbing state by memoized first-draw recursion.
//!
//! For a non-absorbing state `s` the absorption law is the draw-weighted
//! mixture of the laws of its successors; absorbing states are point masses.
//! The solver evaluates this on demand with an explicit stack (depth is
//! bounded only by the number of draws), detects cycles, and shares its memo
//! across starts.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Result, UrnError};
use crate::rational::{self, ExactRational};
use crate::urn::{Draw, State, UrnSpec};

/// Number type the solver accumulates probabilities in.
pub trait Weight: Clone + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn ratio(num: u64, den: u64) -> Self;
    /// `self += a * b`
    fn add_product(&mut self, a: &Self, b: &Self);
    fn to_f64(&self) -> f64;
}

impl Weight for ExactRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn ratio(num: u64, den: u64) -> Self {
        rational::ratio(num, den)
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn to_f64(&self) -> f64 {
        rational::to_f64(self)
    }
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Probability of each absorbing state reachable from `start`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsorptionDistribution<P = ExactRational> {
    start: State,
    entries: BTreeMap<State, P>,
}

impl<P: Weight> AbsorptionDistribution<P> {
    /// Builds a distribution from raw entries; the caller guarantees they
    /// form a probability law.
    pub fn from_entries(start: State, entries: BTreeMap<State, P>) -> Self {
        AbsorptionDistribution { start, entries }
    }

    pub fn point_mass(state: State) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(state.clone(), P::one());
        AbsorptionDistribution { start: state, entries }
    }

    pub fn start(&self) -> &State {
        &self.start
    }

    pub fn entries(&self) -> &BTreeMap<State, P> {
        &self.entries
    }

    pub fn get(&self, state: &State) -> Option<&P> {
        self.entries.get(state)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&State, &P)> {
        self.entries.iter()
    }

    pub fn total(&self) -> P {
        let one = P::one();
        self.entries.values().fold(P::zero(), |mut acc, p| {
            acc.add_product(p, &one);
            acc
        })
    }

    /// Law of the white count (color 0), the coordinate `X_{n,m}`.
    pub fn white_marginal(&self) -> BTreeMap<u32, P> {
        let one = P::one();
        let mut out: BTreeMap<u32, P> = BTreeMap::new();
        for (state, p) in &self.entries {
            out.entry(state.white()).or_insert_with(P::zero).add_product(p, &one);
        }
        out
    }

    /// Probability that the black coordinate (the last color) is exhausted.
    pub fn black_exhausted(&self) -> P {
        let one = P::one();
        self.entries
            .iter()
            .filter(|(s, _)| s.black() == 0)
            .fold(P::zero(), |mut acc, (_, p)| {
                acc.add_product(p, &one);
                acc
            })
    }

    pub fn to_f64(&self) -> AbsorptionDistribution<f64> {
        AbsorptionDistribution {
            start: self.start.clone(),
            entries: self.entries.iter().map(|(s, p)| (s.clone(), p.to_f64())).collect(),
        }
    }
}

/// Memoizing solver for one urn. Reuse it across starts of the same urn:
/// every state it has visited stays solved.
pub struct Solver<'a, P: Weight = ExactRational> {
    spec: &'a UrnSpec,
    absorbing: Vec<State>,
    absorbing_ids: HashMap<State, u32>,
    memo: HashMap<State, Vec<(u32, P)>>,
    max_states: usize,
}

/// Default cap on memoized states when no termination certificate bounds the search.
pub const DEFAULT_MAX_STATES: usize = 5_000_000;

impl<'a, P: Weight> Solver<'a, P> {
    pub fn new(spec: &'a UrnSpec) -> Self {
        Solver {
            spec,
            absorbing: Vec::new(),
            absorbing_ids: HashMap::new(),
            memo: HashMap::new(),
            max_states: DEFAULT_MAX_STATES,
        }
    }

    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }

    pub fn spec(&self) -> &UrnSpec {
        self.spec
    }

    /// Number of states solved so far.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn solve(&mut self, start: &State) -> Result<AbsorptionDistribution<P>> {
        if start.colors() != self.spec.colors() {
            return Err(UrnError::DimensionMismatch(
                start.clone(),
                start.colors(),
                self.spec.colors(),
            ));
        }
        self.fill(start)?;
        let entries = self.memo[start]
            .iter()
            .map(|(id, p)| (self.absorbing[*id as usize].clone(), p.clone()))
            .collect();
        Ok(AbsorptionDistribution { start: start.clone(), entries })
    }

    fn absorbing_id(&mut self, state: &State) -> u32 {
        if let Some(&id) = self.absorbing_ids.get(state) {
            return id;
        }
        let id = self.absorbing.len() as u32;
        self.absorbing.push(state.clone());
        self.absorbing_ids.insert(state.clone(), id);
        id
    }

    fn fill(&mut self, start: &State) -> Result<()> {
        enum Frame {
            Enter(State),
            Exit(State, Vec<Draw>, u64),
        }
        let mut stack = vec![Frame::Enter(start.clone())];
        let mut in_progress: HashSet<State> = HashSet::new();

        while let Some(frame) = stack.pop() {
            match frame {
                Frame::Enter(state) => {
                    if self.memo.contains_key(&state) {
                        continue;
                    }
                    if in_progress.contains(&state) {
                        return Err(UrnError::NonTerminating {
                            start: start.clone(),
                            reason: format!("state {state} is revisited"),
                        });
                    }
                    if self.spec.is_absorbing(&state) {
                        let id = self.absorbing_id(&state);
                        self.memo.insert(state, vec![(id, P::one())]);
                        continue;
                    }
                    if self.memo.len() + in_progress.len() >= self.max_states {
                        return Err(UrnError::NonTerminating {
                            start: start.clone(),
                            reason: format!("more than {} reachable states", self.max_states),
                        });
                    }
                    let (draws, total) = self.spec.draws(&state)?;
                    let pending: Vec<State> = draws
                        .iter()
                        .filter(|d| !self.memo.contains_key(&d.next))
                        .map(|d| d.next.clone())
                        .collect();
                    in_progress.insert(state.clone());
                    stack.push(Frame::Exit(state, draws, total));
                    stack.extend(pending.into_iter().map(Frame::Enter));
                }
                Frame::Exit(state, draws, total) => {
                    let mut mix: BTreeMap<u32, P> = BTreeMap::new();
                    for draw in &draws {
                        let w = P::ratio(draw.weight, total);
                        for (id, p) in &self.memo[&draw.next] {
                            mix.entry(*id).or_insert_with(P::zero).add_product(&w, p);
                        }
                    }
                    in_progress.remove(&state);
                    self.memo.insert(state, mix.into_iter().collect());
                }
            }
        }
        Ok(())
    }
}

/// Exact absorption law from `start`.
pub fn absorption_distribution(spec: &UrnSpec, start: &State) -> Result<AbsorptionDistribution> {
    Solver::new(spec).solve(start)
}

/// Same recursion in `f64`, for sizes where exact rationals are too slow.
pub fn absorption_distribution_f64(
    spec: &UrnSpec,
    start: &State,
) -> Result<AbsorptionDistribution<f64>> {
    Solver::new(spec).solve(start)
}

/// Exact `h(v1, v2) = sum P{(j, k)} v1^j v2^k` with `j` the black (last)
/// count and `k` the white (first) count.
pub fn pgf_eval_exact(
    dist: &AbsorptionDistribution,
    v1: &ExactRational,
    v2: &ExactRational,
) -> ExactRational {
    dist.iter().fold(<ExactRational as Zero>::zero(), |acc, (s, p)| {
        acc + p * pow(v1, s.black()) * pow(v2, s.white())
    })
}

/// [`pgf_eval_exact`] at the exact values of `v1` and `v2`, rounded once at
/// the end, so `pgf_eval(d, 1.0, 1.0)` is exactly `1.0`.
pub fn pgf_eval(dist: &AbsorptionDistribution, v1: f64, v2: f64) -> f64 {
    match (rational::from_f64(v1), rational::from_f64(v2)) {
        (Some(a), Some(b)) => rational::to_f64(&pgf_eval_exact(dist, &a, &b)),
        _ => f64::NAN,
    }
}

/// Single-variable pgf `h(v) = sum P{X = k} v^k` of the white count.
pub fn white_pgf_eval(dist: &AbsorptionDistribution, v: f64) -> f64 {
    pgf_eval(dist, 1.0, v)
}

fn pow(base: &ExactRational, exp: u32) -> ExactRational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Factorial moments `E(X)`, `E(X(X-1))`, ... of the white count, with mean
/// and variance.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub factorial_moments: Vec<ExactRational>,
    pub mean: ExactRational,
    pub variance: ExactRational,
}

pub fn white_marginal_moments(dist: &AbsorptionDistribution, order: usize) -> Result<MomentReport> {
    if order == 0 {
        return Err(UrnError::InvalidArgument("moment order must be at least 1".into()));
    }
    let marginal = dist.white_marginal();
    let factorial_moments = (1..=order as u64)
        .map(|r| {
            marginal.iter().fold(<ExactRational as Zero>::zero(), |acc, (&k, p)| {
                let k = u64::from(k);
                if k < r {
                    return acc;
                }
                let falling = ((k - r + 1)..=k).fold(<ExactRational as One>::one(), |f, i| {
                    f * rational::integer(i as i64)
                });
                acc + falling * p
            })
        })
        .collect();
    let mean = marginal
        .iter()
        .fold(<ExactRational as Zero>::zero(), |acc, (&k, p)| acc + rational::integer(i64::from(k)) * p);
    let second = marginal.iter().fold(<ExactRational as Zero>::zero(), |acc, (&k, p)| {
        let k = rational::integer(i64::from(k));
        acc + &k * &k * p
    });
    let variance = second - &mean * &mean;
    Ok(MomentReport { factorial_moments, mean, variance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::ModelPreset;
    use crate::rational::{harmonic, ratio};
    use crate::urn::{AbsorbingSet, TransitionMatrix, WeightMode};

    fn dist(preset: ModelPreset, black: u32, white: u32) -> AbsorptionDistribution {
        absorption_distribution(&preset.spec(), &State::pair(black, white)).unwrap()
    }

    fn entries(pairs: &[((u32, u32), ExactRational)]) -> BTreeMap<State, ExactRational> {
        pairs.iter().map(|((m, n), p)| (State::pair(*m, *n), p.clone())).collect()
    }

    #[test]
    fn pills_one_one() {
        let d = dist(ModelPreset::Pills, 1, 1);
        assert_eq!(d.entries(), &entries(&[((0, 1), ratio(1, 2)), ((0, 2), ratio(1, 2))]));
    }

    #[test]
    fn sampling_one_one() {
        let d = dist(ModelPreset::Sampling, 1, 1);
        assert_eq!(d.entries(), &entries(&[((0, 1), ratio(1, 2)), ((1, 0), ratio(1, 2))]));
    }

    #[test]
    fn okcorral_one_two() {
        let d = dist(ModelPreset::OkCorral, 1, 2);
        assert_eq!(
            d.entries(),
            &entries(&[((0, 2), ratio(2, 3)), ((0, 1), ratio(1, 6)), ((1, 0), ratio(1, 6))])
        );
    }

    #[test]
    fn absorbing_start_is_point_mass() {
        let d = dist(ModelPreset::Pills, 0, 0);
        assert_eq!(d, AbsorptionDistribution::point_mass(State::pair(0, 0)));
    }

    #[test]
    fn pgf_values() {
        let d = dist(ModelPreset::Pills, 1, 1);
        assert_eq!(pgf_eval(&d, 1.0, 1.0), 1.0);
        assert_eq!(pgf_eval(&d, 1.0, 0.5), 0.375);
        assert_eq!(white_pgf_eval(&d, 0.5), 0.375);
        let d = dist(ModelPreset::OkCorral, 1, 1);
        assert_eq!(pgf_eval(&d, 0.0, 1.0), 0.5);
        for preset in ModelPreset::catalogue(3).into_iter().filter(|p| p.spec().colors() == 2) {
            assert_eq!(pgf_eval(&dist(preset, 5, 4), 1.0, 1.0), 1.0, "{preset}");
        }
    }

    #[test]
    fn moments() {
        let m = white_marginal_moments(&dist(ModelPreset::Pills, 1, 1), 1).unwrap();
        assert_eq!(m.factorial_moments, vec![ratio(3, 2)]);
        for black in 1..8 {
            let m = white_marginal_moments(&dist(ModelPreset::Pills, black, 0), 1).unwrap();
            assert_eq!(m.mean, harmonic(u64::from(black)));
        }
        let point = AbsorptionDistribution::point_mass(State::pair(0, 5));
        let m = white_marginal_moments(&point, 2).unwrap();
        assert_eq!(m.factorial_moments, vec![ratio(5, 1), ratio(20, 1)]);
        assert!(m.variance.is_zero());
        assert!(white_marginal_moments(&point, 0).is_err());
    }

    #[test]
    fn solver_memo_is_shared_across_starts() {
        let spec = ModelPreset::Pills.spec();
        let mut solver: Solver = Solver::new(&spec);
        let big = solver.solve(&State::pair(6, 6)).unwrap();
        let seen = solver.memo_len();
        let small = solver.solve(&State::pair(3, 2)).unwrap();
        assert_eq!(solver.memo_len(), seen);
        assert_eq!(small, absorption_distribution(&spec, &State::pair(3, 2)).unwrap());
        assert!(big.total().is_one());
    }

    #[test]
    fn f64_solver_matches_exact() {
        let spec = ModelPreset::Cannibal.spec();
        let exact = absorption_distribution(&spec, &State::pair(9, 7)).unwrap();
        let float = absorption_distribution_f64(&spec, &State::pair(9, 7)).unwrap();
        for (s, p) in exact.iter() {
            assert!((rational::to_f64(p) - float.get(s).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn cycles_are_detected() {
        // every draw moves one ball between colors: (1,1) -> (2,0) -> (1,1)
        let spec = UrnSpec::new(
            TransitionMatrix::two_color(-1, 1, 1, -1),
            AbsorbingSet::new(vec![None, Some(0)]).unwrap(),
            WeightMode::Standard,
        )
        .unwrap();
        let err = absorption_distribution(&spec, &State::pair(1, 1)).unwrap_err();
        assert!(matches!(err, UrnError::NonTerminating { .. }), "{err}");
    }

    #[test]
    fn runaway_growth_hits_state_budget() {
        let spec = UrnSpec::new(
            TransitionMatrix::two_color(1, 0, 0, 0),
            AbsorbingSet::new(vec![None, Some(0)]).unwrap(),
            WeightMode::Standard,
        )
        .unwrap();
        let err = Solver::<f64>::new(&spec)
            .with_max_states(1000)
            .solve(&State::pair(1, 1))
            .unwrap_err();
        assert!(matches!(err, UrnError::NonTerminating { .. }));
    }

    #[test]
    fn rpills_boundary_is_v_to_the_single_count() {
        let spec = ModelPreset::RPills(3).spec();
        for n1 in 0..4 {
            for n2 in 0..4 {
                let start = State::new(vec![n1, n2, 0]);
                let d = absorption_distribution(&spec, &start).unwrap();
                assert_eq!(d, AbsorptionDistribution::point_mass(start));
                assert_eq!(white_pgf_eval(&d, 0.5), 0.5f64.powi(n1 as i32));
            }
        }
    }
}
