use std::path::Path;

use affrep::bridge::{algebra_from_surface, surface_proxy, OrderingSpec, SurfaceSpec};
use affrep::classify::{classify_surface, SurfaceClass};
use affrep::AlgebraParams;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceBlock {
    pub alpha0: f64,
    pub alpha1: f64,
    pub c0: f64,
    pub hbar: f64,
    pub beta1t: Option<f64>,
    pub gamma1t: Option<f64>,
    pub delta1t: Option<f64>,
}

impl SurfaceBlock {
    pub fn surface(&self) -> SurfaceSpec {
        SurfaceSpec::new(self.alpha0, self.alpha1, self.c0)
    }

    /// Missing ordering keys take the symmetric values.
    pub fn ordering(&self) -> OrderingSpec {
        let sym = OrderingSpec::symmetric(self.alpha1, self.hbar);
        OrderingSpec {
            hbar: self.hbar,
            beta1t: self.beta1t.unwrap_or(sym.beta1t),
            gamma1t: self.gamma1t.unwrap_or(sym.gamma1t),
            delta1t: self.delta1t.unwrap_or(sym.delta1t),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBlock {
    #[serde(rename = "trA")]
    pub tr_a: f64,
    #[serde(rename = "detA")]
    pub det_a: f64,
    pub a: f64,
    pub chat1: Option<f64>,
    /// Alternative to `chat1` through `ĉ = μ² + ĉ₁/Δ`.
    pub chat: Option<f64>,
}

impl AlgebraBlock {
    pub fn params(&self) -> Result<AlgebraParams, CliError> {
        let p = AlgebraParams::new(self.tr_a, self.det_a, self.a);
        match (self.chat1, self.chat) {
            (Some(c), None) => Ok(p.with_chat1(c)),
            (None, Some(c)) => p.with_chat(c).map_err(|e| CliError::parse(e.to_string())),
            (None, None) => Ok(p),
            (Some(_), Some(_)) => Err(CliError::parse(
                "give at most one of \"chat1\" and \"chat\"",
            )),
        }
    }
}

/// Per-scenario defaults for `build`; command-line flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub x0: Option<[f64; 2]>,
    pub near: Option<[f64; 2]>,
    pub beta: Option<f64>,
    pub nmax: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub surface: Option<SurfaceBlock>,
    pub algebra: Option<AlgebraBlock>,
    #[serde(default)]
    pub options: Options,
}

/// A scenario after validation: algebra parameters plus, when known, the
/// surface they quantize.
pub struct Resolved {
    pub params: AlgebraParams,
    pub surface: Option<(SurfaceSpec, OrderingSpec)>,
    pub options: Options,
}

impl Resolved {
    pub fn class(&self) -> Result<SurfaceClass, CliError> {
        let s = match &self.surface {
            Some((s, _)) => *s,
            None => surface_proxy(&self.params),
        };
        classify_surface(&s).map_err(CliError::from)
    }

    pub fn ordering(&self) -> Option<&OrderingSpec> {
        self.surface.as_ref().map(|(_, o)| o)
    }
}

pub fn parse(text: &str) -> Result<Scenario, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(format!("malformed scenario: {e}")))
}

pub fn load(path: &Path) -> Result<Resolved, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    resolve(parse(&text)?)
}

pub fn resolve(scenario: Scenario) -> Result<Resolved, CliError> {
    match (scenario.surface, scenario.algebra) {
        (Some(block), None) => {
            let (s, o) = (block.surface(), block.ordering());
            let params =
                algebra_from_surface(&s, &o).map_err(|e| CliError::parse(e.to_string()))?;
            Ok(Resolved {
                params,
                surface: Some((s, o)),
                options: scenario.options,
            })
        }
        (None, Some(block)) => {
            let params = block.params()?;
            params
                .validate()
                .map_err(|e| CliError::parse(e.to_string()))?;
            Ok(Resolved {
                params,
                surface: None,
                options: scenario.options,
            })
        }
        _ => Err(CliError::parse(
            "a scenario needs exactly one of the blocks \"surface\" and \"algebra\"",
        )),
    }
}
