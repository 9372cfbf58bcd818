//! Run configuration: a flat `key = value` file with `#` comments.
//!
//! Recognized keys:
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `seed` | seed of every sample sequence | 1 |
//! | `samples` | sample points per identity | 100 |
//! | `margin` | pairwise separation of suite sample points | 0.1 |
//! | `quad.nodes` | trapezoid nodes for smooth integrands | 256 |
//! | `quad.or_nodes` | trapezoid nodes for `or`-derived integrands | 1024 |
//! | `fd.h` | suite-level finite-difference step, `0 < h < 1` | 1e-4 |
//! | `staircase.margin` | separation of staircase residual points | 0.15 |
//! | `sup.margin` | separation of boundedness-witness points | 0.05 |
//! | `staircase.quad.nodes` | arc-Gauss node budget of every `I` layer | per cocycle |
//! | `staircase.fd.h` | step of `Q` and the `L` probes, `0 < h < 0.1` | per cocycle |
//! | `staircase.tail.t_max` | truncation time of `S` | per cocycle |
//! | `staircase.tail.nodes` | tail nodes of `S` | per cocycle |
//! | `staircase.tail.panel_order` | Gauss order per tail panel | per cocycle |
//! | `staircase.line.nodes_per_unit` | line nodes of `R_B` per unit time | per cocycle |
//! | `staircase.line.min_nodes` | minimum line nodes of `R_B` | per cocycle |
//! | `staircase.table_nodes` | Chebyshev nodes of the `ψ` table | per cocycle |
//! | `basepoint.margin` | leading-triple margin of the basepoint scheme | 1e-6 |
//! | `convergence.nodes` | comma-separated ladder of node counts | per target |
//! | `output` | report path (standard output when absent) | none |
//! | `csv` | CSV path for sampled primitive values | none |
//!
//! The staircase block starts from the default configuration for `or ∪ or`
//! and from [`degree_six_config`] for `or ∪ or ∪ or`; keys present in the
//! file override either.

use std::path::{Path, PathBuf};

use staircase_core::staircase::ConfigEcho;
use staircase_core::suites::{degree_six_config, or_cup_or, or_cup_or_cup_or, SuiteParams};
use staircase_core::{BoundaryFunction, StaircaseConfig};

use crate::error::{CliError, Result};

/// Optional overrides of the staircase configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StaircaseOverrides {
    /// `staircase.quad.nodes`.
    pub quad_nodes: Option<usize>,
    /// `staircase.fd.h`.
    pub fd_h: Option<f64>,
    /// `staircase.tail.t_max`.
    pub tail_t_max: Option<f64>,
    /// `staircase.tail.nodes`.
    pub tail_nodes: Option<usize>,
    /// `staircase.tail.panel_order`.
    pub tail_panel_order: Option<usize>,
    /// `staircase.line.nodes_per_unit`.
    pub line_nodes_per_unit: Option<f64>,
    /// `staircase.line.min_nodes`.
    pub line_min_nodes: Option<usize>,
    /// `staircase.table_nodes`.
    pub table_nodes: Option<usize>,
    /// `basepoint.margin`.
    pub basepoint_margin: Option<f64>,
}

impl StaircaseOverrides {
    /// Applies the present overrides to `base`.
    pub fn apply(&self, mut base: StaircaseConfig) -> StaircaseConfig {
        if let Some(n) = self.quad_nodes {
            base.quad.circle_nodes = n;
        }
        if let Some(h) = self.fd_h {
            base.fd.h = h;
        }
        if let Some(t) = self.tail_t_max {
            base.tail.t_max = t;
        }
        if let Some(n) = self.tail_nodes {
            base.tail.nodes = n;
        }
        if let Some(n) = self.tail_panel_order {
            base.tail.panel_order = n;
        }
        if let Some(r) = self.line_nodes_per_unit {
            base.line.nodes_per_unit = r;
        }
        if let Some(n) = self.line_min_nodes {
            base.line.min_nodes = n;
        }
        if let Some(n) = self.table_nodes {
            base.table_nodes = n;
        }
        if let Some(m) = self.basepoint_margin {
            base.scheme.margin = m;
        }
        base
    }
}

/// The cocycles accepted by `primitive`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cocycle {
    /// `or ∪ or`, degree 4.
    OrCupOr,
    /// `or ∪ or ∪ or`, degree 6.
    OrCupOrCupOr,
}

impl Cocycle {
    /// Parses `or_cup_or` or `or_cup_or_cup_or`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "or_cup_or" => Ok(Cocycle::OrCupOr),
            "or_cup_or_cup_or" => Ok(Cocycle::OrCupOrCupOr),
            other => Err(CliError::Config(format!("unknown cocycle {other:?}; expected or_cup_or or or_cup_or_cup_or"))),
        }
    }

    /// Command-line name.
    pub fn name(&self) -> &'static str {
        match self {
            Cocycle::OrCupOr => "or_cup_or",
            Cocycle::OrCupOrCupOr => "or_cup_or_cup_or",
        }
    }

    /// The cocycle itself.
    pub fn function(&self) -> BoundaryFunction {
        match self {
            Cocycle::OrCupOr => or_cup_or(),
            Cocycle::OrCupOrCupOr => or_cup_or_cup_or(),
        }
    }

    /// Staircase configuration before overrides.
    pub fn base_config(&self) -> StaircaseConfig {
        match self {
            Cocycle::OrCupOr => StaircaseConfig::default(),
            Cocycle::OrCupOrCupOr => degree_six_config(),
        }
    }

    /// Budget of `|δp − c|` and `|L p|`.
    pub fn budget(&self) -> f64 {
        match self {
            Cocycle::OrCupOr => 0.05,
            Cocycle::OrCupOrCupOr => 0.1,
        }
    }
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Seed of every sample sequence.
    pub seed: u64,
    /// Sample points per identity.
    pub samples: usize,
    /// Pairwise separation of suite sample points.
    pub margin: f64,
    /// Trapezoid nodes for smooth integrands.
    pub quad_nodes: usize,
    /// Trapezoid nodes for `or`-derived integrands.
    pub or_quad_nodes: usize,
    /// Suite-level finite-difference step.
    pub h: f64,
    /// Separation of staircase residual points.
    pub staircase_margin: f64,
    /// Separation of boundedness-witness points.
    pub sup_margin: f64,
    /// Staircase overrides.
    pub staircase: StaircaseOverrides,
    /// Ladder of node counts for `convergence`.
    pub ladder: Option<Vec<usize>>,
    /// Report destination.
    pub output_path: Option<PathBuf>,
    /// CSV destination of `primitive`.
    pub csv_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = SuiteParams::default();
        Self {
            seed: p.seed,
            samples: p.samples,
            margin: p.margin,
            quad_nodes: p.quad_nodes,
            or_quad_nodes: p.or_quad_nodes,
            h: p.h,
            staircase_margin: p.staircase_margin,
            sup_margin: p.sup_margin,
            staircase: StaircaseOverrides::default(),
            ladder: None,
            output_path: None,
            csv_path: None,
        }
    }
}

fn parse_value<V: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<V> {
    value.parse().map_err(|_| CliError::Config(format!("line {line}: cannot parse {key} = {value:?}")))
}

impl RunConfig {
    /// Parses and validates the text of a configuration file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| CliError::Config(format!("line {line}: expected `key = value`, got {content:?}")))?;
            let st = &mut cfg.staircase;
            match key {
                "seed" => cfg.seed = parse_value(line, key, value)?,
                "samples" => cfg.samples = parse_value(line, key, value)?,
                "margin" => cfg.margin = parse_value(line, key, value)?,
                "quad.nodes" => cfg.quad_nodes = parse_value(line, key, value)?,
                "quad.or_nodes" => cfg.or_quad_nodes = parse_value(line, key, value)?,
                "fd.h" => cfg.h = parse_value(line, key, value)?,
                "staircase.margin" => cfg.staircase_margin = parse_value(line, key, value)?,
                "sup.margin" => cfg.sup_margin = parse_value(line, key, value)?,
                "staircase.quad.nodes" => st.quad_nodes = Some(parse_value(line, key, value)?),
                "staircase.fd.h" => st.fd_h = Some(parse_value(line, key, value)?),
                "staircase.tail.t_max" => st.tail_t_max = Some(parse_value(line, key, value)?),
                "staircase.tail.nodes" => st.tail_nodes = Some(parse_value(line, key, value)?),
                "staircase.tail.panel_order" => st.tail_panel_order = Some(parse_value(line, key, value)?),
                "staircase.line.nodes_per_unit" => st.line_nodes_per_unit = Some(parse_value(line, key, value)?),
                "staircase.line.min_nodes" => st.line_min_nodes = Some(parse_value(line, key, value)?),
                "staircase.table_nodes" => st.table_nodes = Some(parse_value(line, key, value)?),
                "basepoint.margin" => st.basepoint_margin = Some(parse_value(line, key, value)?),
                "convergence.nodes" => {
                    let nodes = value
                        .split(',')
                        .map(|v| parse_value(line, key, v.trim()))
                        .collect::<Result<Vec<usize>>>()?;
                    cfg.ladder = Some(nodes);
                }
                "output" => cfg.output_path = Some(PathBuf::from(value)),
                "csv" => cfg.csv_path = Some(PathBuf::from(value)),
                other => return Err(CliError::Config(format!("line {line}: unknown key {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a configuration file and validates it.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    /// Checks every numeric range, including both staircase configurations.
    pub fn validate(&self) -> Result<()> {
        let config = |e: staircase_core::Error| CliError::Config(e.to_string());
        for cocycle in [Cocycle::OrCupOr, Cocycle::OrCupOrCupOr] {
            self.suite_params(cocycle).validate().map_err(config)?;
        }
        if let Some(ladder) = &self.ladder {
            if ladder.is_empty() || ladder.iter().any(|&n| n < 8) {
                return Err(CliError::Config(format!("convergence.nodes = {ladder:?} must be non-empty with entries at least 8")));
            }
        }
        Ok(())
    }

    /// Suite parameters, with the staircase block for `cocycle`.
    pub fn suite_params(&self, cocycle: Cocycle) -> SuiteParams {
        SuiteParams {
            seed: self.seed,
            samples: self.samples,
            margin: self.margin,
            quad_nodes: self.quad_nodes,
            or_quad_nodes: self.or_quad_nodes,
            h: self.h,
            staircase: self.staircase_config(cocycle),
            staircase_margin: self.staircase_margin,
            sup_margin: self.sup_margin,
        }
    }

    /// Staircase configuration for `cocycle` after overrides.
    pub fn staircase_config(&self, cocycle: Cocycle) -> StaircaseConfig {
        self.staircase.apply(cocycle.base_config())
    }

    /// Every effective setting, with the staircase block for `cocycle`.
    pub fn echo(&self, cocycle: Cocycle) -> ConfigEcho {
        let mut echo: ConfigEcho = [
            ("seed", self.seed.to_string()),
            ("samples", self.samples.to_string()),
            ("margin", self.margin.to_string()),
            ("quad.nodes", self.quad_nodes.to_string()),
            ("quad.or_nodes", self.or_quad_nodes.to_string()),
            ("fd.h", format!("{:e}", self.h)),
            ("staircase.margin", self.staircase_margin.to_string()),
            ("sup.margin", self.sup_margin.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        for (k, v) in self.staircase_config(cocycle).echo() {
            echo.insert(format!("staircase.{k}"), v);
        }
        if let Some(ladder) = &self.ladder {
            let list: Vec<String> = ladder.iter().map(|n| n.to_string()).collect();
            echo.insert("convergence.nodes".into(), list.join(","));
        }
        echo
    }
}
