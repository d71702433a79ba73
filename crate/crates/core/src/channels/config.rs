//! JSON channel descriptions: the two named channels by their parameters, or
//! explicit Kraus matrices for anything else.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::{amplitude_damping_channel, dephasing_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Which channel family a spec describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Dephasing,
    Damping,
    Custom,
}

/// Serialized channel description. Named channels read their constants from
/// `params`; custom channels list explicit matrices in `kraus`, each entry a
/// row-major grid of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    #[serde(rename = "type")]
    pub kind: ChannelKind,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel specs always serialize")
    }

    /// Instantiates the channel at time `t` (ignored for custom matrices,
    /// which are instants by definition).
    pub fn build(&self, t: f64) -> Result<KrausChannel> {
        match self.kind {
            ChannelKind::Dephasing => dephasing_channel(
                self.param("theta")?,
                self.param("lambda0")?,
                self.param("lambda1")?,
                t,
            ),
            ChannelKind::Damping => amplitude_damping_channel(self.param("gamma")?, t),
            ChannelKind::Custom => {
                let mut operators = Vec::with_capacity(self.kraus.len());
                for rows in &self.kraus {
                    operators.push(matrix_from_pairs(rows)?);
                }
                KrausChannel::new(operators, "custom")
            }
        }
    }

    fn param(&self, name: &str) -> Result<f64> {
        self.params.get(name).copied().ok_or_else(|| {
            Error::Argument(format!("channel description is missing parameter '{name}'"))
        })
    }
}

fn matrix_from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let complex_rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&complex_rows)
}
