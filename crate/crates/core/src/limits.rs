//! Limiting laws of the white count and Kolmogorov–Smirnov distances between
//! scaled exact distributions and those laws.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dp::{self, AbsorptionDistribution, Weight};
use crate::error::{Result, UrnError};
use crate::presets::ModelPreset;
use crate::rational;
use crate::urn::State;

/// Anything with a cumulative distribution function.
pub trait Cdf {
    fn cdf(&self, x: f64) -> f64;

    /// `lim_{y -> x-} F(y)`; equal to `cdf(x)` for continuous laws.
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }

    /// Points where the CDF jumps.
    fn jumps(&self) -> &[f64] {
        &[]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum LimitLaw {
    /// density `e^{-x}`, `x >= 0`
    Exponential1,
    /// density `2x e^{-x^2}`, `x >= 0`
    Rayleigh,
    /// Beta(1, m): density `m (1-x)^{m-1}` on `[0, 1]`
    Beta1m(u32),
    /// square root of Beta(1, m): density `2 m x (1-x^2)^{m-1}` on `[0, 1]`
    SqrtBeta(u32),
    StdNormal,
}

impl LimitLaw {
    pub fn density(&self, x: f64) -> f64 {
        match *self {
            LimitLaw::Exponential1 if x >= 0.0 => (-x).exp(),
            LimitLaw::Rayleigh if x >= 0.0 => 2.0 * x * (-x * x).exp(),
            LimitLaw::Beta1m(m) if (0.0..=1.0).contains(&x) => {
                f64::from(m) * (1.0 - x).powi(m as i32 - 1)
            }
            LimitLaw::SqrtBeta(m) if (0.0..=1.0).contains(&x) => {
                2.0 * f64::from(m) * x * (1.0 - x * x).powi(m as i32 - 1)
            }
            LimitLaw::StdNormal => (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            _ => 0.0,
        }
    }

    /// Support interval, with infinite ends where unbounded.
    pub fn support(&self) -> (f64, f64) {
        match self {
            LimitLaw::Exponential1 | LimitLaw::Rayleigh => (0.0, f64::INFINITY),
            LimitLaw::Beta1m(_) | LimitLaw::SqrtBeta(_) => (0.0, 1.0),
            LimitLaw::StdNormal => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn quantile(&self, p: f64) -> f64 {
        match *self {
            LimitLaw::Exponential1 => -(1.0 - p).ln(),
            LimitLaw::Rayleigh => (-(1.0 - p).ln()).sqrt(),
            LimitLaw::Beta1m(m) => 1.0 - (1.0 - p).powf(1.0 / f64::from(m)),
            LimitLaw::SqrtBeta(m) => (1.0 - (1.0 - p).powf(1.0 / f64::from(m))).sqrt(),
            LimitLaw::StdNormal => {
                let (mut lo, mut hi) = (-40.0, 40.0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.cdf(mid) < p {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

impl Cdf for LimitLaw {
    fn cdf(&self, x: f64) -> f64 {
        match *self {
            LimitLaw::StdNormal => 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2),
            _ if x <= 0.0 => 0.0,
            LimitLaw::Exponential1 => -(-x).exp_m1(),
            LimitLaw::Rayleigh => -(-x * x).exp_m1(),
            _ if x >= 1.0 => 1.0,
            LimitLaw::Beta1m(m) => 1.0 - (1.0 - x).powi(m as i32),
            LimitLaw::SqrtBeta(m) => 1.0 - (1.0 - x * x).powi(m as i32),
        }
    }
}

impl fmt::Display for LimitLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitLaw::Exponential1 => f.write_str("Exponential(1)"),
            LimitLaw::Rayleigh => f.write_str("Rayleigh"),
            LimitLaw::Beta1m(m) => write!(f, "Beta(1,{m})"),
            LimitLaw::SqrtBeta(m) => write!(f, "sqrt(Beta(1,{m}))"),
            LimitLaw::StdNormal => f.write_str("N(0,1)"),
        }
    }
}

/// Affine map `x -> (x - shift) / scale` applied to the white count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingMap {
    shift: f64,
    scale: f64,
}

impl ScalingMap {
    pub fn new(shift: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite() && shift.is_finite()) {
            return Err(UrnError::InvalidArgument(format!(
                "scaling needs finite shift and positive scale, got ({shift}, {scale})"
            )));
        }
        Ok(ScalingMap { shift, scale })
    }

    pub fn identity() -> Self {
        ScalingMap { shift: 0.0, scale: 1.0 }
    }

    /// Pills urn, `m` large: `X / (n/m + log m)`.
    pub fn pills_exponential(n: u32, m: u32) -> Result<Self> {
        let m = f64::from(m);
        ScalingMap::new(0.0, f64::from(n) / m + m.ln())
    }

    /// `X / n` (pills with `m` fixed, or the variant urn with `2m` fixed).
    pub fn by_white(n: u32) -> Result<Self> {
        ScalingMap::new(0.0, f64::from(n))
    }

    /// Pills variant started with `2m` black balls, `m` large: `X / (n/sqrt(m) + 2 sqrt(m))`.
    pub fn variant_rayleigh(n: u32, m: u32) -> Result<Self> {
        let root = f64::from(m).sqrt();
        ScalingMap::new(0.0, f64::from(n) / root + 2.0 * root)
    }

    pub fn standardize(mean: f64, std_dev: f64) -> Result<Self> {
        ScalingMap::new(mean, std_dev)
    }

    pub fn apply(&self, x: f64) -> f64 {
        (x - self.shift) / self.scale
    }
}

/// Right-continuous step CDF with jumps at `points`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepCdf {
    points: Vec<f64>,
    cumulative: Vec<f64>,
}

impl StepCdf {
    /// From `(location, mass)` atoms in any order; masses at equal locations merge.
    pub fn from_atoms(mut atoms: Vec<(f64, f64)>) -> Self {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut points: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut cumulative: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for (x, p) in atoms {
            acc += p;
            if points.last() == Some(&x) {
                *cumulative.last_mut().unwrap() = acc;
            } else {
                points.push(x);
                cumulative.push(acc);
            }
        }
        StepCdf { points, cumulative }
    }

    /// Equal-mass atoms at the `(i - 1/2)/n` quantiles of `law`.
    pub fn discretize(law: &LimitLaw, n: usize) -> Self {
        let mass = 1.0 / n as f64;
        StepCdf::from_atoms(
            (0..n).map(|i| (law.quantile((i as f64 + 0.5) * mass), mass)).collect(),
        )
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

impl Cdf for StepCdf {
    fn cdf(&self, x: f64) -> f64 {
        match self.points.partition_point(|&p| p <= x) {
            0 => 0.0,
            i => self.cumulative[i - 1],
        }
    }

    fn cdf_left(&self, x: f64) -> f64 {
        match self.points.partition_point(|&p| p < x) {
            0 => 0.0,
            i => self.cumulative[i - 1],
        }
    }

    fn jumps(&self) -> &[f64] {
        &self.points
    }
}

/// Step CDF of the mapped white marginal of `dist`.
pub fn scaled_cdf<P: Weight>(dist: &AbsorptionDistribution<P>, map: &ScalingMap) -> StepCdf {
    StepCdf::from_atoms(
        dist.white_marginal()
            .into_iter()
            .map(|(k, p)| (map.apply(f64::from(k)), p.to_f64()))
            .collect(),
    )
}

/// `sup_x |F(x) - G(x)|`, evaluated on both sides of every jump of either CDF.
pub fn ks_distance<G: Cdf + ?Sized>(step: &StepCdf, law: &G) -> f64 {
    step.points()
        .iter()
        .chain(law.jumps())
        .map(|&x| {
            let right = (step.cdf(x) - law.cdf(x)).abs();
            let left = (step.cdf_left(x) - law.cdf_left(x)).abs();
            right.max(left)
        })
        .fold(0.0, f64::max)
}

/// A family of urn starts indexed by one growing size, with the law its
/// scaled white count approaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceCase {
    /// Pills with `white` single-unit pills and `size` double-unit pills; Exponential(1).
    PillsExponential { white: u32 },
    /// Pills with `black` double-unit pills and `size` single-unit pills; Beta(1, black).
    PillsBeta { black: u32 },
    /// Pills variant with `white` white and `2 * size` black balls; Rayleigh.
    VariantRayleigh { white: u32 },
    /// Pills variant with `2 * half_black` black and `size` white balls; sqrt Beta(1, half_black).
    VariantSqrtBeta { half_black: u32 },
    /// Cannibal urn with `size / 2` cannibals and `size - size / 2`
    /// non-cannibals, standardized by its exact mean and variance; N(0, 1).
    CannibalNormal,
}

impl ConvergenceCase {
    pub fn preset(&self) -> ModelPreset {
        match self {
            ConvergenceCase::PillsExponential { .. } | ConvergenceCase::PillsBeta { .. } => {
                ModelPreset::Pills
            }
            ConvergenceCase::VariantRayleigh { .. } | ConvergenceCase::VariantSqrtBeta { .. } => {
                ModelPreset::PillsVariant
            }
            ConvergenceCase::CannibalNormal => ModelPreset::Cannibal,
        }
    }

    pub fn law(&self) -> LimitLaw {
        match *self {
            ConvergenceCase::PillsExponential { .. } => LimitLaw::Exponential1,
            ConvergenceCase::PillsBeta { black } => LimitLaw::Beta1m(black),
            ConvergenceCase::VariantRayleigh { .. } => LimitLaw::Rayleigh,
            ConvergenceCase::VariantSqrtBeta { half_black } => LimitLaw::SqrtBeta(half_black),
            ConvergenceCase::CannibalNormal => LimitLaw::StdNormal,
        }
    }

    /// Start state `(black, white)` at `size`.
    pub fn start(&self, size: u32) -> State {
        match *self {
            ConvergenceCase::PillsExponential { white } => State::pair(size, white),
            ConvergenceCase::PillsBeta { black } => State::pair(black, size),
            ConvergenceCase::VariantRayleigh { white } => State::pair(2 * size, white),
            ConvergenceCase::VariantSqrtBeta { half_black } => State::pair(2 * half_black, size),
            ConvergenceCase::CannibalNormal => State::pair(size - size / 2, size / 2),
        }
    }

    /// Scaled step CDF of the white count at `size`.
    pub fn scaled_cdf_at(&self, size: u32) -> Result<StepCdf> {
        let spec = self.preset().spec();
        let start = self.start(size);
        let dist = dp::absorption_distribution_f64(&spec, &start)?;
        let map = match *self {
            ConvergenceCase::PillsExponential { white } => ScalingMap::pills_exponential(white, size)?,
            ConvergenceCase::PillsBeta { .. } | ConvergenceCase::VariantSqrtBeta { .. } => {
                ScalingMap::by_white(size)?
            }
            ConvergenceCase::VariantRayleigh { white } => ScalingMap::variant_rayleigh(white, size)?,
            ConvergenceCase::CannibalNormal => {
                let exact = dp::absorption_distribution(&spec, &start)?;
                let moments = dp::white_marginal_moments(&exact, 1)?;
                let sd = rational::to_f64(&moments.variance).sqrt();
                ScalingMap::standardize(rational::to_f64(&moments.mean), sd)?
            }
        };
        Ok(scaled_cdf(&dist, &map))
    }

    pub fn ks_at(&self, size: u32) -> Result<f64> {
        Ok(ks_distance(&self.scaled_cdf_at(size)?, &self.law()))
    }
}
