//! The analysis report printed by `compute`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::checks::{run_checks, CheckResult};
use crate::graph::ReductionGraph;
use crate::jumps::{compute_jumps, tame_base_change_conductor, unipotent_rank, JumpError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpEntry {
    pub value: String,
    pub multiplicity: u64,
}

/// Sizes of the input graph and of its minimal model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimizationSummary {
    pub input_vertices: usize,
    pub input_edges: usize,
    pub minimal_vertices: usize,
    pub minimal_edges: usize,
    pub contractions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub genus: u64,
    pub jumps: Vec<JumpEntry>,
    /// `None` when the analysed graph is not minimal.
    pub stabilization_index: Option<u64>,
    pub tame_base_change_conductor: String,
    pub unipotent_rank: u64,
    pub principal_components: Vec<String>,
    pub minimal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimization: Option<MinimizationSummary>,
    pub checks: Vec<CheckResult>,
}

/// Lowest-terms `p/q`, or plain `p` for integers.
pub fn fraction_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_string(x: Rational64) -> String {
    fraction_string(&BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom())))
}

/// Inverse of [`fraction_string`]; rejects non-canonical spellings.
pub fn parse_fraction(s: &str) -> Option<BigRational> {
    let x = match s.split_once('/') {
        None => BigRational::from_integer(s.parse().ok()?),
        Some((p, q)) => {
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            BigRational::new(p.parse().ok()?, q)
        }
    };
    (fraction_string(&x) == s).then_some(x)
}

pub struct ReportOptions {
    pub checks: bool,
    pub minimize: bool,
}

/// Analyses `input`, or its minimal model when `opts.minimize` is set.
pub fn build_report(input: &ReductionGraph, opts: &ReportOptions) -> Result<AnalysisReport, JumpError> {
    let (g, minimization) = if opts.minimize {
        let m = input.minimize();
        let summary = MinimizationSummary {
            input_vertices: input.vertex_count(),
            input_edges: input.edge_count(),
            minimal_vertices: m.vertex_count(),
            minimal_edges: m.edge_count(),
            contractions: input.vertex_count() - m.vertex_count(),
        };
        (m, Some(summary))
    } else {
        (input.clone(), None)
    };
    let spectrum = compute_jumps(&g)?;
    let checks = if opts.checks { run_checks(&g)? } else { Vec::new() };
    Ok(AnalysisReport {
        name: g.name().map(str::to_string),
        genus: g.genus(),
        jumps: spectrum
            .entries()
            .iter()
            .map(|&(x, multiplicity)| JumpEntry {
                value: rational_string(x),
                multiplicity,
            })
            .collect(),
        stabilization_index: g.stabilization_index().ok(),
        tame_base_change_conductor: fraction_string(&tame_base_change_conductor(&spectrum)),
        unipotent_rank: unipotent_rank(&g)?,
        principal_components: g.principal_components(),
        minimal: g.is_minimal(),
        minimization,
        checks,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Fixed-layout text rendering: one `key: value` line per scalar field in
    /// declaration order, then the jump table, then the checks.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let or_dash = |s: Option<String>| s.unwrap_or_else(|| "-".to_string());
        let _ = writeln!(out, "name: {}", or_dash(self.name.clone()));
        let _ = writeln!(out, "genus: {}", self.genus);
        let _ = writeln!(out, "minimal: {}", if self.minimal { "yes" } else { "no" });
        let _ = writeln!(
            out,
            "stabilization_index: {}",
            or_dash(self.stabilization_index.map(|n| n.to_string()))
        );
        let _ = writeln!(out, "tame_base_change_conductor: {}", self.tame_base_change_conductor);
        let _ = writeln!(out, "unipotent_rank: {}", self.unipotent_rank);
        let principal = if self.principal_components.is_empty() {
            "-".to_string()
        } else {
            self.principal_components.join(" ")
        };
        let _ = writeln!(out, "principal_components: {principal}");
        if let Some(m) = &self.minimization {
            let _ = writeln!(
                out,
                "minimized: {} vertices / {} edges -> {} vertices / {} edges ({} contractions)",
                m.input_vertices, m.input_edges, m.minimal_vertices, m.minimal_edges, m.contractions
            );
        }
        let _ = writeln!(out, "jumps:");
        let _ = writeln!(out, "  {:<12} multiplicity", "value");
        for j in &self.jumps {
            let _ = writeln!(out, "  {:<12} {}", j.value, j.multiplicity);
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            for c in &self.checks {
                let _ = write!(out, "  {:<28} {}", c.name, if c.pass { "pass" } else { "FAIL" });
                if let Some(d) = &c.detail {
                    let _ = write!(out, "  ({d})");
                }
                out.push('\n');
            }
        }
        out
    }
}
