//! Problem-file schema and grid parsing.

use std::path::Path;

use anyhow::{bail, Context, Result};
use lipbelief::beliefs::{Belief, ThetaFamily};
use lipbelief::svmaps::{linspace, logspace, MapSpec};
use lipbelief::Tolerances;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    pub map: MapSpec,
    #[serde(default = "neutral")]
    pub belief: Belief,
    /// Defaults to `θ(x, y) = y_1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Anchor `x̄` for the sandwich suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<f64>>,
    /// Leader objective `g·x + E[h·y]` for `bilevel`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leader: Option<Leader>,
    /// Cell width of the W1 grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    /// Optional claimed W1 modulus checked by `verify w1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w1_bound: Option<f64>,
}

fn neutral() -> Belief {
    Belief::Neutral
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Leader {
    pub g: Vec<f64>,
    pub h: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub log: bool,
}

impl GridSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let (log, rest) = match parts.as_slice() {
            ["log", rest @ ..] => (true, rest),
            rest => (false, rest),
        };
        let [start, stop, count] = rest else {
            bail!("grid must be start:stop:count or log:start:stop:count, got {s:?}");
        };
        let g = GridSpec {
            start: start.parse().with_context(|| format!("bad grid start {start:?}"))?,
            stop: stop.parse().with_context(|| format!("bad grid stop {stop:?}"))?,
            count: count.parse().with_context(|| format!("bad grid count {count:?}"))?,
            log,
        };
        g.points().map(|_| g)
    }

    pub fn points(&self) -> Result<Vec<Vec<f64>>> {
        if self.count == 0 {
            bail!("empty grid");
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            bail!("grid endpoints must be finite");
        }
        if self.log && !(self.start > 0.0 && self.stop > 0.0) {
            bail!("log grid needs positive endpoints");
        }
        let v = if self.log {
            logspace(self.start, self.stop, self.count)
        } else {
            linspace(self.start, self.stop, self.count)
        };
        Ok(v.into_iter().map(|x| vec![x]).collect())
    }
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: ProblemFile = serde_json::from_str(text)?;
        if p.version != SCHEMA_VERSION {
            bail!("unsupported schema version {} (expected {SCHEMA_VERSION})", p.version);
        }
        p.tolerances.validate()?;
        p.map.validate()?;
        Ok(p)
    }

    pub fn theta(&self) -> ThetaFamily {
        self.theta
            .clone()
            .unwrap_or_else(|| ThetaFamily::coordinate(self.map.domain.dim(), self.map.outcome_dim(), 0))
    }

    /// `--grid` wins over the file; every point must lie in the map domain.
    pub fn grid(&self, cli: Option<GridSpec>) -> Result<Vec<Vec<f64>>> {
        let spec = cli.or(self.grid).context("no grid given (use --grid or a \"grid\" entry)")?;
        if self.map.domain.dim() != 1 {
            bail!("grids are one-dimensional but the map domain has dimension {}", self.map.domain.dim());
        }
        let pts = spec.points()?;
        if let Some(x) = pts.iter().find(|x| !self.map.domain.contains(x)) {
            bail!("grid point {x:?} lies outside the map domain");
        }
        Ok(pts)
    }
}
