//! Consistency checks relating a graph's jump spectrum to its geometry.
//!
//! Each check is evaluated on the graph as given; checks that refer to the
//! minimal model minimize first.

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::graph::ReductionGraph;
use crate::jumps::{
    candidate_levels, compute_jumps, jump_multiplicity, jump_multiplicity_at,
    jump_multiplicity_via_euler, jump_multiplicity_via_euler_at, lcm_multiplicity,
    lemma_integer_violations, lower_bound_at, unipotent_rank, JumpError, JumpSpectrum,
};

/// Above this `m` the dual-route comparison is restricted to the candidate
/// levels; every other level has an empty index set on both routes.
pub const FULL_SCAN_LIMIT: u64 = 5000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    fn new(name: &str, failure: Option<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: failure.is_none(),
            detail: failure,
        }
    }
}

pub const CHECK_NAMES: [&str; 12] = [
    "sum_equals_genus",
    "zero_jump_equals_g_minus_u",
    "nonzero_jumps_equal_u",
    "lower_bound",
    "denominator_lcm",
    "principal_denominators",
    "principal_witnessed",
    "positive_genus_levels",
    "dual_route",
    "lemma_integer",
    "chain_contraction",
    "minimal_model_spectrum",
];

/// Runs every check. Errors are reserved for failures to evaluate the
/// formula at all (overflow, negative multiplicities).
pub fn run_checks(g: &ReductionGraph) -> Result<Vec<CheckResult>, JumpError> {
    let spectrum = compute_jumps(g)?;
    let minimal = g.minimize();
    let u = unipotent_rank(g)?;
    let genus = g.genus();

    let total: u64 = spectrum.entries().iter().map(|e| e.1).sum();
    let zero = spectrum.multiplicity_of(Rational64::zero());
    let mut out = vec![
        CheckResult::new(
            "sum_equals_genus",
            (total != genus).then(|| format!("multiplicities sum to {total}, genus is {genus}")),
        ),
        CheckResult::new(
            "zero_jump_equals_g_minus_u",
            (zero + u != genus).then(|| format!("mult(0) = {zero}, g - u = {}", genus - u)),
        ),
        CheckResult::new(
            "nonzero_jumps_equal_u",
            (spectrum.nonzero_count() != u)
                .then(|| format!("{} non-zero jumps, u = {u}", spectrum.nonzero_count())),
        ),
        CheckResult::new("lower_bound", lower_bound_failure(g)?),
    ];

    let stab = minimal
        .stabilization_index()
        .map_err(|e| JumpError::InternalInconsistency(e.to_string()))?;
    let lcm = spectrum.denominator_lcm();
    out.push(CheckResult::new(
        "denominator_lcm",
        (lcm != stab).then(|| format!("lcm of denominators {lcm}, stabilization index {stab}")),
    ));

    let principal: Vec<u64> = minimal
        .principal_components()
        .iter()
        .map(|id| minimal.vertex(id).expect("listed id").multiplicity)
        .collect();
    out.push(CheckResult::new(
        "principal_denominators",
        principal_denominator_failure(&spectrum, &principal),
    ));
    out.push(CheckResult::new(
        "principal_witnessed",
        principal_witness_failure(&spectrum, &minimal),
    ));
    out.push(CheckResult::new(
        "positive_genus_levels",
        positive_genus_failure(g, &spectrum),
    ));
    out.push(CheckResult::new("dual_route", dual_route_failure(g)?));
    out.push(CheckResult::new(
        "lemma_integer",
        lemma_integer_violations(g)
            .first()
            .map(|(x, v)| format!("`{v}` meets the complement of I at level {x} exactly once")),
    ));

    let contraction = minimal
        .contract_chains()
        .map_err(|e| JumpError::InternalInconsistency(e.to_string()))?;
    out.push(CheckResult::new(
        "chain_contraction",
        (contraction.saturation_index != stab).then(|| {
            format!(
                "contracted model has saturation index {}, stabilization index {stab}",
                contraction.saturation_index
            )
        }),
    ));
    let minimal_spectrum = compute_jumps(&minimal)?;
    out.push(CheckResult::new(
        "minimal_model_spectrum",
        (minimal_spectrum != spectrum)
            .then(|| format!("minimal model gives {minimal_spectrum}, input gives {spectrum}")),
    ));
    debug_assert_eq!(out.len(), CHECK_NAMES.len());
    Ok(out)
}

fn lower_bound_failure(g: &ReductionGraph) -> Result<Option<String>, JumpError> {
    for x in candidate_levels(g) {
        if x.is_zero() {
            continue;
        }
        let (mult, bound) = (jump_multiplicity_at(g, x)?, lower_bound_at(g, x)?);
        if mult < bound {
            return Ok(Some(format!("level {x}: multiplicity {mult} below bound {bound}")));
        }
    }
    Ok(None)
}

fn principal_denominator_failure(s: &JumpSpectrum, principal: &[u64]) -> Option<String> {
    s.entries()
        .iter()
        .filter(|e| !e.0.is_zero())
        .find(|e| !principal.iter().any(|n| n % (*e.0.denom() as u64) == 0))
        .map(|e| format!("jump {} has a denominator dividing no principal multiplicity", e.0))
}

fn principal_witness_failure(s: &JumpSpectrum, minimal: &ReductionGraph) -> Option<String> {
    minimal.principal_components().into_iter().find_map(|id| {
        let n = minimal.vertex(&id).expect("listed id").multiplicity;
        let witnessed = s
            .entries()
            .iter()
            .any(|e| (*e.0.denom() as u64) % n == 0);
        (!witnessed).then(|| format!("no jump a/N' with {n} | N' for principal `{id}`"))
    })
}

fn positive_genus_failure(g: &ReductionGraph, s: &JumpSpectrum) -> Option<String> {
    g.vertices()
        .iter()
        .filter(|v| v.genus >= 1)
        .find_map(|v| {
            let n = v.multiplicity as i64;
            (1..n)
                .map(|a| Rational64::new(a, n))
                .find(|&x| s.multiplicity_of(x) == 0)
                .map(|x| format!("`{}` has genus {} but {x} is not a jump", v.id, v.genus))
        })
}

fn dual_route_failure(g: &ReductionGraph) -> Result<Option<String>, JumpError> {
    let m = lcm_multiplicity(g)?;
    if m <= FULL_SCAN_LIMIT {
        for j in 0..m {
            let (a, b) = (jump_multiplicity(g, j)?, jump_multiplicity_via_euler(g, j)?);
            if a as i64 != b {
                return Ok(Some(format!("j = {j}: formula {a}, Euler route {b}")));
            }
        }
    } else {
        for x in candidate_levels(g) {
            let (a, b) = (jump_multiplicity_at(g, x)?, jump_multiplicity_via_euler_at(g, x)?);
            if a as i64 != b {
                return Ok(Some(format!("level {x}: formula {a}, Euler route {b}")));
            }
        }
    }
    Ok(None)
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}
