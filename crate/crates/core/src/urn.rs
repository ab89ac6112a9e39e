//! Urn models: transition matrix, absorbing walls, draw weights and the
//! single-step semantics every other module builds on.
//!
//! Colors are indexed in matrix-row order. For two colors that is
//! `(white, black)`: the matrix `[[a, b], [c, d]]` sends a white
//! draw `(n, m) -> (n + a, m + b)` and a black draw `(n, m) -> (n + c, m + d)`.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Result, UrnError};
use crate::rational::{self, ExactRational};

/// Ball counts per color, in matrix-row order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State(Vec<u32>);

impl State {
    pub fn new(counts: Vec<u32>) -> Self {
        State(counts)
    }

    /// Two-color state with `black` (m) black balls and `white` (n) white balls.
    pub fn pair(black: u32, white: u32) -> Self {
        State(vec![white, black])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn colors(&self) -> usize {
        self.0.len()
    }

    /// Count of color 0: the white balls of a two-color urn, the single-unit
    /// pills of the r-pills urn. This is the coordinate the limit theorems
    /// are about.
    pub fn white(&self) -> u32 {
        self.0[0]
    }

    /// Count of the last color (the black balls of a two-color urn).
    pub fn black(&self) -> u32 {
        self.0[self.0.len() - 1]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| u64::from(c)).sum()
    }

    /// Counts in the order users write them: `(black, white)` for two colors,
    /// `(n_1, ..., n_r)` otherwise.
    pub fn display_counts(&self) -> Vec<u32> {
        if self.0.len() == 2 {
            vec![self.0[1], self.0[0]]
        } else {
            self.0.clone()
        }
    }

    /// Inverse of [`State::display_counts`].
    pub fn from_display_counts(counts: Vec<u32>) -> Self {
        if counts.len() == 2 {
            State::pair(counts[0], counts[1])
        } else {
            State(counts)
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.display_counts().iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Square integer matrix; row `i` is added to the counts when color `i` is drawn.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    rows: Vec<Vec<i64>>,
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.len();
        if r < 2 {
            return Err(UrnError::InvalidSpec(format!("need at least 2 colors, got {r}")));
        }
        if let Some(bad) = rows.iter().position(|row| row.len() != r) {
            return Err(UrnError::InvalidSpec(format!(
                "row {bad} has {} entries, expected {r}",
                rows[bad].len()
            )));
        }
        Ok(TransitionMatrix { rows })
    }

    /// The two-color matrix `[[a, b], [c, d]]`.
    pub fn two_color(a: i64, b: i64, c: i64, d: i64) -> Self {
        TransitionMatrix { rows: vec![vec![a, b], vec![c, d]] }
    }

    pub fn colors(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, color: usize) -> &[i64] {
        &self.rows[color]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }
}

/// Absorbing walls: a state is absorbing as soon as some capped color has at
/// most `cap` balls.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbsorbingSet {
    caps: Vec<Option<u32>>,
}

impl AbsorbingSet {
    pub fn new(caps: Vec<Option<u32>>) -> Result<Self> {
        if caps.iter().all(Option::is_none) {
            return Err(UrnError::InvalidSpec("at least one absorbing wall is required".into()));
        }
        Ok(AbsorbingSet { caps })
    }

    pub fn caps(&self) -> &[Option<u32>] {
        &self.caps
    }

    pub fn contains(&self, state: &State) -> bool {
        self.caps
            .iter()
            .zip(state.counts())
            .any(|(cap, &count)| matches!(cap, Some(c) if count <= *c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// Color `i` is drawn with probability `count_i / total`.
    Standard,
    /// Two colors only: white with weight `n / (m - 1 + n)`, black with
    /// weight `(m - 1) / (m - 1 + n)`.
    CannibalShifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeLabel {
    TypeA,
    TypeB,
    Other,
}

/// One possible draw from a state: which color, where it leads, and its
/// integer weight (the probability is `weight / total`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Draw {
    pub color: usize,
    pub next: State,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UrnSpec {
    matrix: TransitionMatrix,
    absorbing: AbsorbingSet,
    weight_mode: WeightMode,
    certificate: Option<Vec<u32>>,
}

/// Largest potential component tried when searching for a termination certificate.
const CERTIFICATE_MAX: u32 = 10;
const CERTIFICATE_MAX_COLORS: usize = 6;

impl UrnSpec {
    pub fn new(
        matrix: TransitionMatrix,
        absorbing: AbsorbingSet,
        weight_mode: WeightMode,
    ) -> Result<Self> {
        let r = matrix.colors();
        if absorbing.caps().len() != r {
            return Err(UrnError::InvalidSpec(format!(
                "{} absorbing caps for {r} colors",
                absorbing.caps().len()
            )));
        }
        if weight_mode == WeightMode::CannibalShifted {
            if r != 2 {
                return Err(UrnError::InvalidSpec(
                    "cannibal_shifted weights need exactly 2 colors".into(),
                ));
            }
            // m - 1 must stay positive at every evaluated state
            if !matches!(absorbing.caps()[1], Some(cap) if cap >= 1) {
                return Err(UrnError::InvalidSpec(
                    "cannibal_shifted weights need a black wall with cap >= 1".into(),
                ));
            }
        }
        let certificate = find_certificate(&matrix);
        Ok(UrnSpec { matrix, absorbing, weight_mode, certificate })
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn absorbing(&self) -> &AbsorbingSet {
        &self.absorbing
    }

    pub fn weight_mode(&self) -> WeightMode {
        self.weight_mode
    }

    pub fn colors(&self) -> usize {
        self.matrix.colors()
    }

    /// Positive integer vector `alpha` with `alpha . row < 0` for every row,
    /// if one with components in `1..=10` exists. `alpha . state` then
    /// strictly decreases with every draw.
    pub fn termination_certificate(&self) -> Option<&[u32]> {
        self.certificate.as_deref()
    }

    /// Upper bound on the number of draws from `start`, when a certificate exists.
    pub fn draw_bound(&self, start: &State) -> Option<u64> {
        let alpha = self.certificate.as_ref()?;
        Some(alpha.iter().zip(start.counts()).map(|(&a, &c)| u64::from(a) * u64::from(c)).sum())
    }

    fn check_dims(&self, state: &State) -> Result<()> {
        if state.colors() != self.colors() {
            return Err(UrnError::DimensionMismatch(state.clone(), state.colors(), self.colors()));
        }
        Ok(())
    }

    pub fn is_absorbing(&self, state: &State) -> bool {
        self.absorbing.contains(state)
    }

    /// Integer draw weights at a non-absorbing state, with their sum.
    /// Colors with zero weight are omitted.
    pub fn draws(&self, state: &State) -> Result<(Vec<Draw>, u64)> {
        self.check_dims(state)?;
        if self.is_absorbing(state) {
            return Err(UrnError::AbsorbingState(state.clone()));
        }
        let mut draws = Vec::with_capacity(self.colors());
        let mut total = 0u64;
        for color in 0..self.colors() {
            let weight = self.draw_weight(state, color);
            if weight == 0 {
                continue;
            }
            total += weight;
            draws.push(Draw { color, next: self.apply(state, color)?, weight });
        }
        if total == 0 {
            return Err(UrnError::NoDrawableBall(state.clone()));
        }
        Ok((draws, total))
    }

    fn draw_weight(&self, state: &State, color: usize) -> u64 {
        let count = u64::from(state.counts()[color]);
        match self.weight_mode {
            WeightMode::Standard => count,
            // only reached with m >= 2 thanks to the wall checked in `new`
            WeightMode::CannibalShifted if color == 1 => count.saturating_sub(1),
            WeightMode::CannibalShifted => count,
        }
    }

    fn apply(&self, state: &State, color: usize) -> Result<State> {
        let counts = state
            .counts()
            .iter()
            .zip(self.matrix.row(color))
            .map(|(&c, &delta)| {
                let next = i64::from(c) + delta;
                if next < 0 {
                    Err(UrnError::NegativeCount { state: state.clone(), color })
                } else {
                    u32::try_from(next)
                        .map_err(|_| UrnError::CountOverflow { state: state.clone(), color })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(State(counts))
    }

    /// Successor states of one draw with their exact probabilities.
    pub fn step_outcomes(&self, state: &State) -> Result<Vec<(State, ExactRational)>> {
        let (draws, total) = self.draws(state)?;
        Ok(draws
            .into_iter()
            .map(|d| (d.next, rational::ratio(d.weight, total)))
            .collect())
    }

    /// Product of the step probabilities along `path`.
    pub fn path_weight(&self, path: &[State]) -> Result<ExactRational> {
        let mut weight = ExactRational::one();
        for pair in path.windows(2) {
            let (from, to) = (&pair[0], &pair[1]);
            self.check_dims(to)?;
            let (draws, total) = self.draws(from)?;
            let step: u64 = draws.iter().filter(|d| &d.next == to).map(|d| d.weight).sum();
            if step == 0 {
                return Err(UrnError::IllegalStep { from: from.clone(), to: to.clone() });
            }
            weight *= rational::ratio(step, total);
        }
        Ok(weight)
    }

    /// Type A / Type B classification by the sign pattern of the matrix and
    /// the shape of the walls.
    pub fn validate(&self) -> TypeLabel {
        let caps = self.absorbing.caps();
        let m = &self.matrix;
        if m.colors() == 2 {
            let (a, b, c, d) = (m.row(0)[0], m.row(0)[1], m.row(1)[0], m.row(1)[1]);
            let white_walled = caps[0].is_some();
            let black_walled = caps[1].is_some();
            if a <= 0 && b <= 0 && (a, b) != (0, 0) && d < 0 && c > 0 && black_walled && !white_walled
            {
                return TypeLabel::TypeA;
            }
            if a <= 0
                && b <= 0
                && c <= 0
                && d <= 0
                && (a, b) != (0, 0)
                && (c, d) != (0, 0)
                && black_walled
                && white_walled
            {
                return TypeLabel::TypeB;
            }
            return TypeLabel::Other;
        }

        let walled: Vec<usize> = (0..m.colors()).filter(|&i| caps[i].is_some()).collect();
        let every_row_removes = m.rows().iter().all(|row| row.iter().any(|&x| x < 0));
        if let [w] = walled[..] {
            let diminishing_column = m.rows().iter().all(|row| row[w] <= 0);
            let feeds_others = m.row(w).iter().any(|&x| x > 0);
            if m.row(w)[w] < 0 && diminishing_column && feeds_others && every_row_removes {
                return TypeLabel::TypeA;
            }
        }
        let all_nonpositive = m.rows().iter().flatten().all(|&x| x <= 0);
        if all_nonpositive && every_row_removes && walled.len() == m.colors() {
            return TypeLabel::TypeB;
        }
        TypeLabel::Other
    }
}

fn find_certificate(matrix: &TransitionMatrix) -> Option<Vec<u32>> {
    let r = matrix.colors();
    if r > CERTIFICATE_MAX_COLORS {
        return None;
    }
    let mut alpha = vec![1u32; r];
    loop {
        let decreasing = matrix.rows().iter().all(|row| {
            row.iter().zip(&alpha).map(|(&x, &a)| x * i64::from(a)).sum::<i64>() < 0
        });
        if decreasing {
            return Some(alpha);
        }
        // odometer over {1..=CERTIFICATE_MAX}^r, last component fastest
        let mut i = r;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if alpha[i] < CERTIFICATE_MAX {
                alpha[i] += 1;
                alpha[i + 1..].iter_mut().for_each(|a| *a = 1);
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::ModelPreset;
    use crate::rational::ratio;
    use num_traits::Zero;

    fn pills() -> UrnSpec {
        ModelPreset::Pills.spec()
    }

    #[test]
    fn pills_step_from_fig_one_start() {
        let out = pills().step_outcomes(&State::pair(6, 1)).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.contains(&(State::pair(5, 2), ratio(6, 7))));
        assert!(out.contains(&(State::pair(6, 0), ratio(1, 7))));
    }

    #[test]
    fn step_from_absorbing_state_is_an_error() {
        let err = pills().step_outcomes(&State::pair(0, 5)).unwrap_err();
        assert_eq!(err, UrnError::AbsorbingState(State::pair(0, 5)));
    }

    #[test]
    fn cannibal_shifted_weights() {
        let out = ModelPreset::Cannibal.spec().step_outcomes(&State::pair(2, 1)).unwrap();
        assert_eq!(out, vec![(State::pair(1, 1), ratio(1, 2)), (State::pair(0, 2), ratio(1, 2))]);
    }

    #[test]
    fn absorbing_walls() {
        assert!(ModelPreset::OkCorral.spec().is_absorbing(&State::pair(0, 3)));
        assert!(ModelPreset::OkCorral.spec().is_absorbing(&State::pair(3, 0)));
        assert!(!pills().is_absorbing(&State::pair(2, 0)));
        assert!(ModelPreset::PillsVariant.spec().is_absorbing(&State::pair(1, 4)));
        assert!(!ModelPreset::PillsVariant.spec().is_absorbing(&State::pair(2, 4)));
    }

    #[test]
    fn eleven_step_path_weight() {
        let path: Vec<State> = [
            (6, 1),
            (5, 2),
            (5, 1),
            (5, 0),
            (4, 1),
            (4, 0),
            (3, 1),
            (2, 2),
            (1, 3),
            (1, 2),
            (1, 1),
            (0, 2),
        ]
        .iter()
        .map(|&(m, n)| State::pair(m, n))
        .collect();
        assert_eq!(pills().path_weight(&path).unwrap(), ratio(3, 3920));
    }

    #[test]
    fn short_path_weights() {
        let spec = pills();
        assert_eq!(spec.path_weight(&[State::pair(1, 0), State::pair(0, 1)]).unwrap(), ratio(1, 1));
        let a = [State::pair(1, 1), State::pair(1, 0), State::pair(0, 1)];
        let b = [State::pair(1, 1), State::pair(0, 2)];
        assert_eq!(spec.path_weight(&a).unwrap(), ratio(1, 2));
        assert_eq!(spec.path_weight(&b).unwrap(), ratio(1, 2));
        assert_eq!(spec.path_weight(&[State::pair(3, 3)]).unwrap(), ratio(1, 1));
    }

    #[test]
    fn illegal_step_rejected() {
        let err = pills().path_weight(&[State::pair(2, 2), State::pair(2, 3)]).unwrap_err();
        assert!(matches!(err, UrnError::IllegalStep { .. }));
        // passing through the wall is not a legal path either
        let err = pills()
            .path_weight(&[State::pair(1, 0), State::pair(0, 1), State::pair(0, 0)])
            .unwrap_err();
        assert_eq!(err, UrnError::AbsorbingState(State::pair(0, 1)));
    }

    #[test]
    fn negative_counts_are_hard_errors() {
        // b = -2: a white draw with one black ball left goes below zero
        let spec = UrnSpec::new(
            TransitionMatrix::two_color(-1, -2, 1, -1),
            AbsorbingSet::new(vec![None, Some(0)]).unwrap(),
            WeightMode::Standard,
        )
        .unwrap();
        let err = spec.step_outcomes(&State::pair(1, 3)).unwrap_err();
        assert_eq!(err, UrnError::NegativeCount { state: State::pair(1, 3), color: 0 });
    }

    #[test]
    fn classification() {
        let no_wall_b = |a, b, c, d, caps| {
            UrnSpec::new(
                TransitionMatrix::two_color(a, b, c, d),
                AbsorbingSet::new(caps).unwrap(),
                WeightMode::Standard,
            )
            .unwrap()
            .validate()
        };
        assert_eq!(no_wall_b(-1, 0, 1, -1, vec![None, Some(0)]), TypeLabel::TypeA);
        assert_eq!(no_wall_b(0, -1, -1, 0, vec![Some(0), Some(0)]), TypeLabel::TypeB);
        assert_eq!(no_wall_b(1, 0, 0, -1, vec![None, Some(0)]), TypeLabel::Other);
        assert_eq!(no_wall_b(1, 0, 0, -1, vec![Some(0), Some(0)]), TypeLabel::Other);
        for preset in ModelPreset::catalogue(3) {
            assert_eq!(preset.spec().validate(), preset.expected_type(), "{preset}");
        }
    }

    #[test]
    fn certificates() {
        assert_eq!(pills().termination_certificate(), Some(&[1, 2][..]));
        assert_eq!(
            ModelPreset::RPills(3).spec().termination_certificate(),
            Some(&[1, 2, 3][..])
        );
        let tenable = UrnSpec::new(
            TransitionMatrix::two_color(1, 0, 0, 1),
            AbsorbingSet::new(vec![None, Some(0)]).unwrap(),
            WeightMode::Standard,
        )
        .unwrap();
        assert_eq!(tenable.termination_certificate(), None);
        assert_eq!(pills().draw_bound(&State::pair(6, 1)), Some(13));
    }

    #[test]
    fn spec_construction_errors() {
        assert!(TransitionMatrix::new(vec![vec![-1]]).is_err());
        assert!(TransitionMatrix::new(vec![vec![-1, 0], vec![1]]).is_err());
        assert!(AbsorbingSet::new(vec![None, None]).is_err());
        let m = TransitionMatrix::two_color(0, -1, 1, -2);
        let shifted_without_wall = UrnSpec::new(
            m.clone(),
            AbsorbingSet::new(vec![None, Some(0)]).unwrap(),
            WeightMode::CannibalShifted,
        );
        assert!(shifted_without_wall.is_err());
        let wrong_caps = UrnSpec::new(
            m,
            AbsorbingSet::new(vec![Some(0)]).unwrap(),
            WeightMode::Standard,
        );
        assert!(wrong_caps.is_err());
    }

    #[test]
    fn display_order_round_trip() {
        let s = State::pair(6, 1);
        assert_eq!(s.counts(), &[1, 6]);
        assert_eq!(s.display_counts(), vec![6, 1]);
        assert_eq!(State::from_display_counts(vec![6, 1]), s);
        assert_eq!(s.to_string(), "(6,1)");
        assert_eq!(State::new(vec![1, 2, 3]).to_string(), "(1,2,3)");
    }

    #[test]
    fn weights_sum_to_one_on_a_grid() {
        for preset in ModelPreset::catalogue(3) {
            let spec = preset.spec();
            for m in 0..6u32 {
                for n in 0..6u32 {
                    let s = if spec.colors() == 2 {
                        State::pair(m, n)
                    } else {
                        State::new(vec![n, m, 2])
                    };
                    if spec.is_absorbing(&s) {
                        continue;
                    }
                    let out = spec.step_outcomes(&s).unwrap();
                    let total = out.iter().fold(ExactRational::zero(), |acc, (_, w)| acc + w);
                    assert!(total.is_one(), "{preset} at {s}");
                }
            }
        }
    }
}
