use std::path::PathBuf;
use std::str::FromStr;

use gtorsion_core::{FrameKind, LieAlgebra};

use crate::error::{RunError, RunResult};
use crate::spec::load_algebra;

#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraSource {
    Named(String),
    Spec(PathBuf),
}

impl AlgebraSource {
    pub fn load(&self) -> RunResult<LieAlgebra> {
        match self {
            AlgebraSource::Named(name) => LieAlgebra::named(name).map_err(|e| RunError::Spec(e.to_string())),
            AlgebraSource::Spec(path) => load_algebra(path),
        }
    }
}

/// Frame family as written on the command line. Random frames take their seed
/// from the run seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameChoice {
    Identity,
    ExpChart,
    RandomSmooth,
    Scaled(f64),
}

impl FrameChoice {
    pub fn kind(self, seed: u64) -> FrameKind {
        match self {
            FrameChoice::Identity => FrameKind::Identity,
            FrameChoice::ExpChart => FrameKind::ExpChart,
            FrameChoice::RandomSmooth => FrameKind::RandomSmooth { seed, scale: 1.0 },
            FrameChoice::Scaled(s) => FrameKind::Scaled(s),
        }
    }
}

impl FromStr for FrameChoice {
    type Err = String;

    /// `identity`, `exp_chart`, `random_smooth` or `scaled:<factor>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(FrameChoice::Identity),
            "exp_chart" => Ok(FrameChoice::ExpChart),
            "random_smooth" => Ok(FrameChoice::RandomSmooth),
            _ => match s.strip_prefix("scaled:").map(str::parse::<f64>) {
                Some(Ok(v)) => Ok(FrameChoice::Scaled(v)),
                _ => Err(format!(
                    "unknown frame `{s}` (expected identity, exp_chart, random_smooth or scaled:<factor>)"
                )),
            },
        }
    }
}

/// Parameters shared by `field` and `converge`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algebra: AlgebraSource,
    pub frame: FrameChoice,
    pub step: f64,
    /// Chart radius; `None` selects `0.4/ρ`.
    pub radius: Option<f64>,
    pub samples: usize,
    pub seed: u64,
    pub levels: usize,
    pub parallel: bool,
}

impl RunConfig {
    pub fn new(algebra: AlgebraSource, frame: FrameChoice) -> Self {
        Self {
            algebra,
            frame,
            step: 0.02,
            radius: None,
            samples: 100,
            seed: 7,
            levels: 3,
            parallel: false,
        }
    }

    pub fn validate(&self) -> RunResult<()> {
        if self.samples < 1 {
            return Err(RunError::Config("sample count must be at least 1".into()));
        }
        if !(2..=4).contains(&self.levels) {
            return Err(RunError::Config("refinement levels must be between 2 and 4".into()));
        }
        if !self.step.is_finite() || self.step <= 0.0 {
            return Err(RunError::Config("h must be positive".into()));
        }
        if let Some(r) = self.radius {
            if !r.is_finite() || r <= self.step {
                return Err(RunError::Config("radius must exceed h".into()));
            }
        }
        Ok(())
    }
}
