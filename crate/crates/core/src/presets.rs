//! The named diminishing urns.

use std::fmt;
use std::str::FromStr;

use crate::error::UrnError;
use crate::urn::{AbsorbingSet, TransitionMatrix, TypeLabel, UrnSpec, WeightMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelPreset {
    /// Single- and double-unit pills; stop when the double-unit pills are gone.
    Pills,
    /// Pills of `1..=r` units; stop when the `r`-unit pills are gone.
    RPills(usize),
    /// `[[-1, 0], [1, -2]]` with the wall `m <= 1`.
    PillsVariant,
    /// `[[0, -1], [1, -2]]`, wall `m <= 1`, victim-first shifted weights.
    Cannibal,
    /// Same matrix and wall as the cannibal urn with ordinary draw weights.
    CannibalUnmodified,
    /// Two gunfighter groups; both axes absorb.
    OkCorral,
    /// Drawing without replacement; both axes absorb.
    Sampling,
}

impl ModelPreset {
    /// Every preset, with the r-pills urn at `r` colors.
    pub fn catalogue(r: usize) -> Vec<ModelPreset> {
        vec![
            ModelPreset::Pills,
            ModelPreset::RPills(r),
            ModelPreset::PillsVariant,
            ModelPreset::Cannibal,
            ModelPreset::CannibalUnmodified,
            ModelPreset::OkCorral,
            ModelPreset::Sampling,
        ]
    }

    pub fn spec(&self) -> UrnSpec {
        let vertical = |cap| AbsorbingSet::new(vec![None, Some(cap)]).unwrap();
        let both_axes = || AbsorbingSet::new(vec![Some(0), Some(0)]).unwrap();
        let (matrix, walls, mode) = match *self {
            ModelPreset::Pills => {
                (TransitionMatrix::two_color(-1, 0, 1, -1), vertical(0), WeightMode::Standard)
            }
            ModelPreset::RPills(r) => {
                let rows = (0..r)
                    .map(|i| {
                        let mut row = vec![0i64; r];
                        row[i] = -1;
                        if i > 0 {
                            row[i - 1] = 1;
                        }
                        row
                    })
                    .collect();
                let mut caps = vec![None; r];
                caps[r - 1] = Some(0);
                (
                    TransitionMatrix::new(rows).expect("r >= 2 checked on parse"),
                    AbsorbingSet::new(caps).unwrap(),
                    WeightMode::Standard,
                )
            }
            ModelPreset::PillsVariant => {
                (TransitionMatrix::two_color(-1, 0, 1, -2), vertical(1), WeightMode::Standard)
            }
            ModelPreset::Cannibal => (
                TransitionMatrix::two_color(0, -1, 1, -2),
                vertical(1),
                WeightMode::CannibalShifted,
            ),
            ModelPreset::CannibalUnmodified => {
                (TransitionMatrix::two_color(0, -1, 1, -2), vertical(1), WeightMode::Standard)
            }
            ModelPreset::OkCorral => {
                (TransitionMatrix::two_color(0, -1, -1, 0), both_axes(), WeightMode::Standard)
            }
            ModelPreset::Sampling => {
                (TransitionMatrix::two_color(-1, 0, 0, -1), both_axes(), WeightMode::Standard)
            }
        };
        UrnSpec::new(matrix, walls, mode).expect("presets are well formed")
    }

    pub fn expected_type(&self) -> TypeLabel {
        match self {
            ModelPreset::OkCorral | ModelPreset::Sampling => TypeLabel::TypeB,
            _ => TypeLabel::TypeA,
        }
    }
}

impl fmt::Display for ModelPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelPreset::Pills => f.write_str("pills"),
            ModelPreset::RPills(r) => write!(f, "rpills:{r}"),
            ModelPreset::PillsVariant => f.write_str("pills-variant"),
            ModelPreset::Cannibal => f.write_str("cannibal"),
            ModelPreset::CannibalUnmodified => f.write_str("cannibal-unmodified"),
            ModelPreset::OkCorral => f.write_str("okcorral"),
            ModelPreset::Sampling => f.write_str("sampling"),
        }
    }
}

impl FromStr for ModelPreset {
    type Err = UrnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let preset = match s {
            "pills" => ModelPreset::Pills,
            "pills-variant" => ModelPreset::PillsVariant,
            "cannibal" => ModelPreset::Cannibal,
            "cannibal-unmodified" => ModelPreset::CannibalUnmodified,
            "okcorral" => ModelPreset::OkCorral,
            "sampling" => ModelPreset::Sampling,
            _ => {
                let r = s
                    .strip_prefix("rpills:")
                    .and_then(|r| r.parse::<usize>().ok())
                    .ok_or_else(|| UrnError::InvalidSpec(format!("unknown model `{s}`")))?;
                if r < 2 {
                    return Err(UrnError::InvalidSpec(format!("rpills needs r >= 2, got {r}")));
                }
                ModelPreset::RPills(r)
            }
        };
        Ok(preset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for preset in ModelPreset::catalogue(4) {
            assert_eq!(preset.to_string().parse::<ModelPreset>().unwrap(), preset);
        }
        assert!("rpills:1".parse::<ModelPreset>().is_err());
        assert!("rpills:x".parse::<ModelPreset>().is_err());
        assert!("polya".parse::<ModelPreset>().is_err());
    }

    #[test]
    fn rpills_two_is_the_pills_urn() {
        assert_eq!(ModelPreset::RPills(2).spec(), ModelPreset::Pills.spec());
    }

    #[test]
    fn rpills_matrix_shape() {
        let spec = ModelPreset::RPills(4).spec();
        assert_eq!(
            spec.matrix().rows(),
            &[vec![-1, 0, 0, 0], vec![1, -1, 0, 0], vec![0, 1, -1, 0], vec![0, 0, 1, -1]]
        );
        assert_eq!(spec.absorbing().caps(), &[None, None, None, Some(0)]);
    }
}
