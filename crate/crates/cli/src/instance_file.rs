//! Instance files: one JSON object with `start`, `goal`, `a` and optional
//! `solver` overrides. Headings are given in degrees or radians.

use std::path::Path;

use anyhow::{bail, Context, Result};
use markov_dubins::{Instance, OrientedPoint, SolverConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_degrees: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_radians: Option<f64>,
}

impl PointSpec {
    pub fn radians(p: OrientedPoint) -> Self {
        Self {
            x: p.x,
            y: p.y,
            theta_degrees: None,
            theta_radians: Some(p.theta),
        }
    }

    fn to_point(self, field: &str) -> Result<OrientedPoint> {
        let theta = match (self.theta_degrees, self.theta_radians) {
            (Some(d), None) => d.to_radians(),
            (None, Some(r)) => r,
            (Some(_), Some(_)) => bail!(
                "`{field}`: give exactly one of `theta_degrees` and `theta_radians`, not both"
            ),
            (None, None) => {
                bail!("`{field}`: missing heading, expected `theta_degrees` or `theta_radians`")
            }
        };
        for (name, v) in [("x", self.x), ("y", self.y), ("theta", theta)] {
            if !v.is_finite() {
                bail!("`{field}.{name}` must be finite");
            }
        }
        Ok(OrientedPoint::new(self.x, self.y, theta))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub start: PointSpec,
    pub goal: PointSpec,
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverConfig>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid instance file {}", path.display()))
    }

    pub fn from_instance(instance: &Instance) -> Self {
        Self {
            start: PointSpec::radians(instance.start),
            goal: PointSpec::radians(instance.goal),
            a: instance.curvature,
            solver: None,
        }
    }

    pub fn instance(&self) -> Result<Instance> {
        if !(self.a.is_finite() && self.a > 0.0) {
            bail!(
                "`a`: curvature bound must be a positive number, got {}",
                self.a
            );
        }
        Ok(Instance::new(
            self.start.to_point("start")?,
            self.goal.to_point("goal")?,
            self.a,
        )?)
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let config = self.solver.unwrap_or_default();
        config.validate().context("`solver`")?;
        Ok(config)
    }
}
