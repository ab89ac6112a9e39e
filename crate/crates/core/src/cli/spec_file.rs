//! JSON description of a custom urn.

use serde::{Deserialize, Serialize};

use crate::error::{Result, UrnError};
use crate::urn::{AbsorbingSet, TransitionMatrix, UrnSpec, WeightMode};

/// Rows and caps are in color-index order: for two colors, index 0 is white
/// and index 1 is black, so `[[a, b], [c, d]]` adds `(a, b)` to `(white, black)`
/// after a white draw.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub colors: usize,
    pub matrix: Vec<Vec<i64>>,
    pub absorbing_caps: Vec<Option<u32>>,
    #[serde(default = "standard")]
    pub weight_mode: WeightMode,
}

fn standard() -> WeightMode {
    WeightMode::Standard
}

impl SpecFile {
    pub fn from_spec(spec: &UrnSpec) -> Self {
        SpecFile {
            colors: spec.colors(),
            matrix: spec.matrix().rows().to_vec(),
            absorbing_caps: spec.absorbing().caps().to_vec(),
            weight_mode: spec.weight_mode(),
        }
    }

    pub fn to_spec(&self) -> Result<UrnSpec> {
        if self.matrix.len() != self.colors {
            return Err(UrnError::InvalidSpec(format!(
                "`colors` is {} but the matrix has {} rows",
                self.colors,
                self.matrix.len()
            )));
        }
        UrnSpec::new(
            TransitionMatrix::new(self.matrix.clone())?,
            AbsorbingSet::new(self.absorbing_caps.clone())?,
            self.weight_mode,
        )
    }

    pub fn parse(text: &str) -> Result<UrnSpec> {
        let file: SpecFile = serde_json::from_str(text)
            .map_err(|e| UrnError::InvalidSpec(format!("spec file: {e}")))?;
        file.to_spec()
    }

    pub fn render(spec: &UrnSpec) -> String {
        serde_json::to_string_pretty(&SpecFile::from_spec(spec)).expect("spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::ModelPreset;

    #[test]
    fn presets_round_trip() {
        for preset in ModelPreset::catalogue(4) {
            let spec = preset.spec();
            assert_eq!(SpecFile::parse(&SpecFile::render(&spec)).unwrap(), spec, "{preset}");
        }
    }

    #[test]
    fn parses_documented_form() {
        let text = r#"{"colors": 2, "matrix": [[0, -1], [1, -2]],
                       "absorbing_caps": [null, 1], "weight_mode": "cannibal_shifted"}"#;
        assert_eq!(SpecFile::parse(text).unwrap(), ModelPreset::Cannibal.spec());
    }

    #[test]
    fn rejects_malformed() {
        for text in [
            r#"{"colors": 3, "matrix": [[-1, 0], [1, -1]], "absorbing_caps": [null, 0]}"#,
            r#"{"colors": 2, "matrix": [[-1, 0], [1, -1]], "absorbing_caps": [0]}"#,
            r#"{"colors": 2, "matrix": [[-1, 0], [1]], "absorbing_caps": [null, 0]}"#,
            r#"{"colors": 2, "matrix": [[-1, 0], [1, -1]], "absorbing_caps": [null, 0], "extra": 1}"#,
            r#"{"colors": 2, "matrix": [[-1, 0], [1, -1]], "absorbing_caps": [null, 0], "weight_mode": "odd"}"#,
            "not json",
        ] {
            assert!(matches!(SpecFile::parse(text), Err(UrnError::InvalidSpec(_))), "{text}");
        }
    }
}
