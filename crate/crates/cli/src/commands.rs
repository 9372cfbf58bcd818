//! The four commands: `verify`, `ili-or`, `primitive` and `convergence`.

use std::io::Write;

use serde::Serialize;
use staircase_core::cochain::coboundary;
use staircase_core::sampling::configuration_points;
use staircase_core::staircase::{estimate_sup_prefixes, map_points, verify_primitive_with, ConfigEcho};
use staircase_core::suites::{
    contraction_ladder, empirical_orders, ili_or_ladder, ili_or_report, primitive_ladder, primitive_ladder_configs,
    run_all, run_suite, LadderRow, Suite,
};
use staircase_core::{Staircase, VerificationReport};

use crate::config::{Cocycle, RunConfig};
use crate::error::{CliError, Result};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// The JSON document written by `verify`, `ili-or` and `primitive`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    /// Layout version, [`SCHEMA_VERSION`].
    pub schema: u32,
    /// Command line that produced the document, e.g. `verify commutators`.
    pub command: String,
    /// Every effective setting.
    pub config_echo: ConfigEcho,
    /// One report per checked identity.
    pub reports: Vec<VerificationReport>,
}

impl ReportDocument {
    fn new(command: String, config_echo: ConfigEcho, reports: Vec<VerificationReport>) -> Self {
        Self { schema: SCHEMA_VERSION, command, config_echo, reports }
    }

    /// True when every report is within its budget.
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::within_budget)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Runs one suite, or every suite for `all`.
pub fn verify(suite: &str, cfg: &RunConfig) -> Result<ReportDocument> {
    let params = cfg.suite_params(Cocycle::OrCupOr);
    let reports = if suite == "all" {
        run_all(&params)?
    } else {
        let s = Suite::from_name(suite).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(Suite::name).collect();
            CliError::Config(format!("unknown suite {suite:?}; expected one of {} or all", names.join(", ")))
        })?;
        run_suite(s, &params)?
    };
    Ok(ReportDocument::new(format!("verify {suite}"), cfg.echo(Cocycle::OrCupOr), reports))
}

/// Closed-form check of `I L I or` at `samples` angles on `quad.or_nodes` trapezoid nodes.
pub fn ili_or(cfg: &RunConfig) -> Result<ReportDocument> {
    let report = ili_or_report(&cfg.suite_params(Cocycle::OrCupOr))?;
    Ok(ReportDocument::new("ili-or".into(), cfg.echo(Cocycle::OrCupOr), vec![report]))
}

/// One sampled value of the primitive.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveSample {
    /// The configuration point, of the cocycle's arity.
    pub angles: Vec<f64>,
    /// `p` at the leading angles.
    pub p: f64,
    /// `|δp − c|` at the point.
    pub residual: f64,
}

/// Output of `primitive`: the report document and the sampled values.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveRun {
    /// Reports of `δp = c` and `L p = 0`, followed by the boundedness witness.
    pub document: ReportDocument,
    /// One row per sample point, in sample order.
    pub samples: Vec<PrimitiveSample>,
}

/// Builds `P c`, checks `δp = c` and `L p = 0`, and estimates `sup |p|` at
/// `samples` and twice as many points.
pub fn primitive(cocycle: Cocycle, cfg: &RunConfig) -> Result<PrimitiveRun> {
    let c = cocycle.function();
    let st_cfg = cfg.staircase_config(cocycle);
    let st = Staircase::build(&c, &st_cfg)?;
    let echo = cfg.echo(cocycle);
    let budget = cocycle.budget();
    let mut coboundary_report = verify_primitive_with(&c, &st.p, cfg.samples, cfg.seed, cfg.staircase_margin, &st_cfg.fd)?
        .with_budget(budget);
    coboundary_report.config_echo = echo.clone();
    let cauchy = VerificationReport {
        identity_name: "cauchy_of_primitive".into(),
        sup_residual: coboundary_report.details["sup_cauchy_l"],
        mean_residual: coboundary_report.details["mean_cauchy_l"],
        ..coboundary_report.clone()
    };
    let sups = estimate_sup_prefixes(&st.p, &[cfg.samples, 2 * cfg.samples], cfg.seed, cfg.sup_margin)?;
    let growth = if sups[0] > 0.0 { (sups[1] - sups[0]) / sups[0] } else { 0.0 };
    let mut sup_report = VerificationReport::from_residuals("boundedness_witness", &[growth], cfg.seed, echo.clone())
        .with_detail("sup_at_samples", sups[0])
        .with_detail("sup_at_double_samples", sups[1]);
    sup_report.samples = 2 * cfg.samples;

    let points = configuration_points::<f64>(cfg.seed, cfg.samples, c.arity(), cfg.staircase_margin)?;
    let dp = coboundary(&st.p)?;
    let n = st.p.arity();
    let samples = map_points(&points, |z| {
        Ok(PrimitiveSample {
            angles: z.to_vec(),
            p: st.p.eval_real(&z[..n])?,
            residual: (dp.eval(z)? - c.eval(z)?).norm(),
        })
    })?;
    let document = ReportDocument::new(
        format!("primitive {}", cocycle.name()),
        echo,
        vec![coboundary_report, cauchy.with_budget(budget), sup_report],
    );
    Ok(PrimitiveRun { document, samples })
}

/// Writes primitive samples as CSV with header `z0,…,zn,p,residual`.
pub fn write_primitive_csv<W: Write>(samples: &[PrimitiveSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let arity = samples.first().map_or(0, |s| s.angles.len());
    let mut header: Vec<String> = (0..arity).map(|j| format!("z{j}")).collect();
    header.extend(["p".to_string(), "residual".to_string()]);
    w.write_record(&header)?;
    for s in samples {
        let mut row: Vec<String> = s.angles.iter().map(|a| a.to_string()).collect();
        row.push(s.p.to_string());
        row.push(s.residual.to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(CliError::Stdout)?;
    Ok(())
}

/// Targets of `convergence`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Trapezoid error of `I or`, with the contraction identity residual.
    Contraction,
    /// Closed-form error of `I L I or`.
    IliOr,
    /// Staircase residual of `or ∪ or` from coarse to default resolution.
    Primitive,
}

impl Target {
    /// Parses `contraction`, `ili_or` or `primitive`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "contraction" => Ok(Target::Contraction),
            "ili_or" => Ok(Target::IliOr),
            "primitive" => Ok(Target::Primitive),
            other => Err(CliError::Config(format!("unknown target {other:?}; expected contraction, ili_or or primitive"))),
        }
    }

    /// Node ladder used when the configuration does not set `convergence.nodes`.
    pub fn default_ladder(&self) -> Vec<usize> {
        match self {
            Target::Contraction => vec![64, 128, 256, 512],
            Target::IliOr => vec![128, 256, 512, 1024],
            Target::Primitive => primitive_ladder_configs().iter().map(|c| c.quad.circle_nodes).collect(),
        }
    }
}

/// Runs a convergence ladder. For `primitive`, a node count off the default
/// ladder takes its line and table resolution from the next finer default rung;
/// `staircase.*` keys apply to every rung except the node count.
pub fn convergence(target: Target, cfg: &RunConfig) -> Result<Vec<LadderRow>> {
    let params = cfg.suite_params(Cocycle::OrCupOr);
    let nodes = cfg.ladder.clone().unwrap_or_else(|| target.default_ladder());
    Ok(match target {
        Target::Contraction => contraction_ladder(&params, &nodes)?,
        Target::IliOr => ili_or_ladder(&params, &nodes)?,
        Target::Primitive => {
            let base = primitive_ladder_configs();
            let configs: Vec<_> = nodes
                .iter()
                .map(|&n| {
                    let rung = base.iter().find(|c| c.quad.circle_nodes >= n).copied().unwrap_or(base[base.len() - 1]);
                    let mut c = cfg.staircase.apply(rung);
                    c.quad.circle_nodes = n;
                    c
                })
                .collect();
            primitive_ladder(&params, &configs)?
        }
    })
}

/// Writes ladder rows as CSV: the refined parameter, the residual columns,
/// the empirical order against the previous rung, and every detail column.
pub fn write_ladder_csv<W: Write>(rows: &[LadderRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let parameter = rows.first().map_or("value", |r| r.parameter.as_str());
    let detail_keys: Vec<String> = rows.first().map(|r| r.details.keys().cloned().collect()).unwrap_or_default();
    let mut header = vec![parameter.to_string(), "sup_residual".into(), "mean_residual".into(), "order".into()];
    header.extend(detail_keys.iter().cloned());
    w.write_record(&header)?;
    let orders = empirical_orders(rows);
    for (i, r) in rows.iter().enumerate() {
        let order = if i == 0 { String::new() } else { orders[i - 1].to_string() };
        let mut row = vec![r.value.to_string(), r.sup_residual.to_string(), r.mean_residual.to_string(), order];
        row.extend(detail_keys.iter().map(|k| r.details.get(k).map_or(String::new(), |v| v.to_string())));
        w.write_record(&row)?;
    }
    w.flush().map_err(CliError::Stdout)?;
    Ok(())
}
