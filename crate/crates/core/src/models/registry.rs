//! String-addressable model registry used by the CLI and the sweep harness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::charts::{ChartField, ChartId};
use super::{
    BiophysicalXy, DimensionlessXy, Fullflux, PerturbedXy, Regime2Uz, Regime3Xv, SurrogateXz, VectorField,
};
use crate::error::{Error, Result};
use crate::params::{nondimensionalise, BiophysicalParams, DimensionlessParams, EpsilonParams, SmolenParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelId {
    BiophysicalXy,
    Fullflux,
    DimensionlessXy,
    PerturbedXy,
    SurrogateXz,
    Regime2Uz,
    Regime3Xv,
    ChartK1,
    ChartK2,
    ChartK3,
    ChartK4,
}

impl ModelId {
    pub const ALL: [ModelId; 11] = [
        ModelId::BiophysicalXy,
        ModelId::Fullflux,
        ModelId::DimensionlessXy,
        ModelId::PerturbedXy,
        ModelId::SurrogateXz,
        ModelId::Regime2Uz,
        ModelId::Regime3Xv,
        ModelId::ChartK1,
        ModelId::ChartK2,
        ModelId::ChartK3,
        ModelId::ChartK4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::BiophysicalXy => "biophysical-xy",
            ModelId::Fullflux => "fullflux",
            ModelId::DimensionlessXy => "dimensionless-xy",
            ModelId::PerturbedXy => "perturbed-xy",
            ModelId::SurrogateXz => "surrogate-xz",
            ModelId::Regime2Uz => "regime2-uz",
            ModelId::Regime3Xv => "regime3-xv",
            ModelId::ChartK1 => "chart-k1",
            ModelId::ChartK2 => "chart-k2",
            ModelId::ChartK3 => "chart-k3",
            ModelId::ChartK4 => "chart-k4",
        }
    }

    /// Whether the time unit is milliseconds (dimensional models).
    pub fn is_dimensional(self) -> bool {
        matches!(self, ModelId::BiophysicalXy | ModelId::Fullflux)
    }

    pub fn valid_ids() -> String {
        Self::ALL.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelId::ALL
            .iter()
            .copied()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownId {
                kind: "model",
                id: s.into(),
                valid: ModelId::valid_ids(),
            })
    }
}

/// Everything a model may need; each model reads only its own part.
#[derive(Clone, Debug)]
pub struct ModelContext {
    pub biophysical: BiophysicalParams,
    pub smolen: SmolenParams,
    pub dimensionless: DimensionlessParams,
    pub eps: EpsilonParams,
}

impl Default for ModelContext {
    fn default() -> Self {
        let biophysical = BiophysicalParams::default();
        Self {
            biophysical,
            smolen: SmolenParams::default(),
            dimensionless: nondimensionalise(&biophysical).expect("defaults are valid"),
            eps: EpsilonParams::default(),
        }
    }
}

impl ModelContext {
    /// Context whose scaled parameters follow the hierarchy at `epsilon`.
    pub fn at_epsilon(epsilon: f64) -> Self {
        let mut c = Self::default();
        c.eps = c.eps.with_epsilon(epsilon);
        c.dimensionless = c.eps.to_dimensionless();
        c
    }
}

pub fn build_model(id: ModelId, ctx: &ModelContext) -> Result<Box<dyn VectorField>> {
    Ok(match id {
        ModelId::BiophysicalXy => Box::new(BiophysicalXy::new(ctx.biophysical)),
        ModelId::Fullflux => Box::new(Fullflux::new(ctx.smolen)?),
        ModelId::DimensionlessXy => Box::new(DimensionlessXy { d: ctx.dimensionless }),
        ModelId::PerturbedXy => Box::new(PerturbedXy { e: ctx.eps }),
        ModelId::SurrogateXz => Box::new(SurrogateXz::new(ctx.eps)),
        ModelId::Regime2Uz => Box::new(Regime2Uz::new(ctx.eps)),
        ModelId::Regime3Xv => Box::new(Regime3Xv::new(ctx.eps)),
        ModelId::ChartK1 => Box::new(ChartField { chart: ChartId::K1, e: ctx.eps }),
        ModelId::ChartK2 => Box::new(ChartField { chart: ChartId::K2, e: ctx.eps }),
        ModelId::ChartK3 => Box::new(ChartField { chart: ChartId::K3, e: ctx.eps }),
        ModelId::ChartK4 => Box::new(ChartField { chart: ChartId::K4, e: ctx.eps }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for m in ModelId::ALL {
            assert_eq!(m.as_str().parse::<ModelId>().unwrap(), m);
            let model = build_model(m, &ModelContext::default()).unwrap();
            assert_eq!(model.id(), m.as_str());
        }
    }

    #[test]
    fn unknown_id_lists_valid_ones() {
        let err = "chart-k9".parse::<ModelId>().unwrap_err().to_string();
        assert!(err.contains("surrogate-xz"), "{err}");
    }
}
