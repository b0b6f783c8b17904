//! Edixhoven jumps of the Jacobian from reduction data.
//!
//! For `m = lcm(N_i)` and `j` in `0..m`, the multiplicity of `j/m` as a jump is
//!
//! ```text
//!   sum_{i in I_j} E_i . floor((j/m) C_k) + sum_{i in I_j} g(E_i) - |I_j| + sigma_j + delta_{j,0}
//! ```
//!
//! where `I_j = { i : (m / N_i) | j }` and `sigma_j` counts intersection points
//! lying on at least one component indexed by `I_j`.
//!
//! Internally everything is keyed by the level `x = j/m` as a reduced rational,
//! so spectra never need to enumerate all of `0..m` (which is astronomically
//! large after a few blow-ups). The `j`-indexed functions are thin wrappers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{GraphError, ReductionGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JumpError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("index j = {j} outside 0..{m}")]
    IndexOutOfRange { j: u64, m: u64 },
    #[error("level {0} outside [0, 1)")]
    LevelOutOfRange(Rational64),
    #[error("lcm of multiplicities does not fit in 64 bits")]
    Overflow,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// Divisor on the special fiber with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalDivisor {
    pub coefficients: BTreeMap<String, Rational64>,
}

impl RationalDivisor {
    /// `x * C_k = sum x N_i E_i`.
    pub fn scaled_fiber(g: &ReductionGraph, x: Rational64) -> Self {
        RationalDivisor {
            coefficients: g
                .vertices()
                .iter()
                .map(|v| (v.id.clone(), x * Rational64::from_integer(v.multiplicity as i64)))
                .collect(),
        }
    }

    /// Integral part: coefficients rounded down.
    pub fn floor(&self) -> IntegralDivisor {
        IntegralDivisor {
            coefficients: self
                .coefficients
                .iter()
                .map(|(k, c)| (k.clone(), c.floor().to_integer()))
                .collect(),
        }
    }

    /// Fractional part `D - floor(D)`.
    pub fn fractional(&self) -> Self {
        RationalDivisor {
            coefficients: self
                .coefficients
                .iter()
                .map(|(k, c)| (k.clone(), c - c.floor()))
                .collect(),
        }
    }

    /// `<D>`: non-integral coefficients set to zero.
    pub fn integral_support(&self) -> Self {
        RationalDivisor {
            coefficients: self
                .coefficients
                .iter()
                .map(|(k, c)| {
                    let c = if c.is_integer() { *c } else { Rational64::zero() };
                    (k.clone(), c)
                })
                .collect(),
        }
    }
}

/// Divisor on the special fiber with integer coefficients, keyed by vertex id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegralDivisor {
    pub coefficients: BTreeMap<String, i64>,
}

impl IntegralDivisor {
    pub fn zero(g: &ReductionGraph) -> Self {
        IntegralDivisor {
            coefficients: g.vertices().iter().map(|v| (v.id.clone(), 0)).collect(),
        }
    }

    pub fn get(&self, id: &str) -> i64 {
        self.coefficients.get(id).copied().unwrap_or(0)
    }

    fn dense(&self, g: &ReductionGraph) -> Vec<i64> {
        g.vertices().iter().map(|v| self.get(&v.id)).collect()
    }
}

/// Jump values with multiplicities. Only positive multiplicities are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpSpectrum {
    entries: Vec<(Rational64, u64)>,
    genus: u64,
}

impl JumpSpectrum {
    /// Builds a spectrum, checking the ordering, range and total.
    pub fn new(entries: Vec<(Rational64, u64)>, genus: u64) -> Result<Self, JumpError> {
        let bad = |msg: String| Err(JumpError::InternalInconsistency(msg));
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return bad("jump values not strictly increasing".into());
            }
        }
        for &(x, mult) in &entries {
            if x < Rational64::zero() || x >= Rational64::from_integer(1) {
                return bad(format!("jump {x} outside [0,1)"));
            }
            if mult == 0 {
                return bad(format!("jump {x} stored with multiplicity 0"));
            }
        }
        let total: u64 = entries.iter().map(|e| e.1).sum();
        if total != genus {
            return bad(format!("multiplicities sum to {total}, genus is {genus}"));
        }
        Ok(JumpSpectrum { entries, genus })
    }

    pub fn entries(&self) -> &[(Rational64, u64)] {
        &self.entries
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn multiplicity_of(&self, x: Rational64) -> u64 {
        self.entries
            .iter()
            .find(|e| e.0 == x)
            .map_or(0, |e| e.1)
    }

    /// Number of non-zero jumps counted with multiplicity.
    pub fn nonzero_count(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| !e.0.is_zero())
            .map(|e| e.1)
            .sum()
    }

    /// lcm of the reduced denominators of the jumps (1 if all jumps vanish).
    pub fn denominator_lcm(&self) -> u64 {
        self.entries
            .iter()
            .fold(1u64, |acc, e| acc.lcm(&(*e.0.denom() as u64)))
    }
}

impl fmt::Display for JumpSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (x, mult)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}: {mult}")?;
        }
        f.write_str("}")
    }
}

/// `m = lcm(N_1, ..., N_r)`.
pub fn lcm_multiplicity(g: &ReductionGraph) -> Result<u64, JumpError> {
    g.multiplicities().try_fold(1u64, |acc, n| {
        let d = acc.gcd(&n);
        (acc / d).checked_mul(n).ok_or(JumpError::Overflow)
    })
}

/// The level `j/m` in lowest terms.
pub fn level(g: &ReductionGraph, j: u64) -> Result<Rational64, JumpError> {
    let m = lcm_multiplicity(g)?;
    if j >= m {
        return Err(JumpError::IndexOutOfRange { j, m });
    }
    let d = j.gcd(&m).max(1);
    let (num, den) = (j / d, m / d);
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(n), Ok(d)) => Ok(Rational64::new(n, d)),
        _ => Err(JumpError::Overflow),
    }
}

fn check_level(x: Rational64) -> Result<(), JumpError> {
    if x < Rational64::zero() || x >= Rational64::from_integer(1) {
        return Err(JumpError::LevelOutOfRange(x));
    }
    Ok(())
}

/// Positions `i` with `N_i * x` integral.
fn index_positions(g: &ReductionGraph, x: Rational64) -> Vec<bool> {
    let den = *x.denom() as u64;
    g.multiplicities().map(|n| n % den == 0).collect()
}

fn floor_coefficients(g: &ReductionGraph, x: Rational64) -> Vec<i64> {
    let (num, den) = (*x.numer() as i128, *x.denom() as i128);
    g.multiplicities()
        .map(|n| Integer::div_floor(&(n as i128 * num), &den) as i64)
        .collect()
}

/// `E_k . D = D_k E_k^2 + sum over incident edges of D_opposite`.
fn intersect_dense(g: &ReductionGraph, d: &[i64], k: usize) -> i64 {
    let own = d[k] as i128 * g.self_intersection_at(k) as i128;
    let rest: i128 = g.neighbours(k).map(|w| d[w] as i128).sum();
    (own + rest) as i64
}

fn ids_of(g: &ReductionGraph, mask: &[bool]) -> BTreeSet<String> {
    mask.iter()
        .zip(g.vertices())
        .filter(|(m, _)| **m)
        .map(|(_, v)| v.id.clone())
        .collect()
}

/// `I_j`: components whose multiplicity `N_i` satisfies `(m / N_i) | j`.
pub fn index_set(g: &ReductionGraph, j: u64) -> Result<BTreeSet<String>, JumpError> {
    index_set_at(g, level(g, j)?)
}

pub fn index_set_at(g: &ReductionGraph, x: Rational64) -> Result<BTreeSet<String>, JumpError> {
    check_level(x)?;
    Ok(ids_of(g, &index_positions(g, x)))
}

fn sigma_mask(g: &ReductionGraph, mask: &[bool]) -> u64 {
    g.edge_indices()
        .iter()
        .filter(|&&(a, b)| mask[a] || mask[b])
        .count() as u64
}

/// Number of intersection points on at least one component of `I_j`.
pub fn sigma(g: &ReductionGraph, j: u64) -> Result<u64, JumpError> {
    sigma_at(g, level(g, j)?)
}

pub fn sigma_at(g: &ReductionGraph, x: Rational64) -> Result<u64, JumpError> {
    check_level(x)?;
    Ok(sigma_mask(g, &index_positions(g, x)))
}

/// `floor((j/m) C_k)`.
pub fn floor_divisor(g: &ReductionGraph, j: u64) -> Result<IntegralDivisor, JumpError> {
    floor_divisor_at(g, level(g, j)?)
}

pub fn floor_divisor_at(g: &ReductionGraph, x: Rational64) -> Result<IntegralDivisor, JumpError> {
    check_level(x)?;
    let coeffs = floor_coefficients(g, x);
    Ok(IntegralDivisor {
        coefficients: g
            .vertices()
            .iter()
            .zip(coeffs)
            .map(|(v, c)| (v.id.clone(), c))
            .collect(),
    })
}

/// Intersection number `E_v . D`.
pub fn intersect(g: &ReductionGraph, d: &IntegralDivisor, v: &str) -> Result<i64, JumpError> {
    let k = g.position(v)?;
    Ok(intersect_dense(g, &d.dense(g), k))
}

fn multiplicity_signed(g: &ReductionGraph, x: Rational64) -> i64 {
    let mask = index_positions(g, x);
    let d = floor_coefficients(g, x);
    let mut total: i64 = 0;
    let mut size: i64 = 0;
    for (k, v) in g.vertices().iter().enumerate() {
        if mask[k] {
            total += intersect_dense(g, &d, k) + v.genus as i64;
            size += 1;
        }
    }
    total - size + sigma_mask(g, &mask) as i64 + i64::from(x.is_zero())
}

/// Multiplicity of `j/m` as a jump.
pub fn jump_multiplicity(g: &ReductionGraph, j: u64) -> Result<u64, JumpError> {
    jump_multiplicity_at(g, level(g, j)?)
}

pub fn jump_multiplicity_at(g: &ReductionGraph, x: Rational64) -> Result<u64, JumpError> {
    check_level(x)?;
    let value = multiplicity_signed(g, x);
    u64::try_from(value).map_err(|_| {
        JumpError::InternalInconsistency(format!("negative multiplicity {value} at level {x}"))
    })
}

/// Second route: Euler characteristics of the twisted line bundle on each
/// component of `I_j`, glued along the `|Sigma_j|` points where two such
/// components meet.
pub fn jump_multiplicity_via_euler(g: &ReductionGraph, j: u64) -> Result<i64, JumpError> {
    jump_multiplicity_via_euler_at(g, level(g, j)?)
}

pub fn jump_multiplicity_via_euler_at(g: &ReductionGraph, x: Rational64) -> Result<i64, JumpError> {
    check_level(x)?;
    let mask = index_positions(g, x);
    let d = floor_coefficients(g, x);
    let local: i64 = g
        .vertices()
        .iter()
        .enumerate()
        .filter(|(k, _)| mask[*k])
        .map(|(k, v)| v.genus as i64 - 1 + g.degree_at(k) as i64 + intersect_dense(g, &d, k))
        .sum();
    let internal = g
        .edge_indices()
        .iter()
        .filter(|&&(a, b)| mask[a] && mask[b])
        .count() as i64;
    Ok(local - internal + i64::from(x.is_zero()))
}

/// Levels that can carry a jump: `0` and every `a / N_i`.
pub fn candidate_levels(g: &ReductionGraph) -> BTreeSet<Rational64> {
    let mut out = BTreeSet::from([Rational64::zero()]);
    for n in g.multiplicities() {
        for a in 1..n {
            out.insert(Rational64::new(a as i64, n as i64));
        }
    }
    out
}

pub fn compute_jumps(g: &ReductionGraph) -> Result<JumpSpectrum, JumpError> {
    let mut entries = Vec::new();
    for x in candidate_levels(g) {
        let mult = jump_multiplicity_at(g, x)?;
        if mult > 0 {
            entries.push((x, mult));
        }
    }
    JumpSpectrum::new(entries, g.genus())
}

/// Sum of the jumps counted with multiplicity.
pub fn tame_base_change_conductor(s: &JumpSpectrum) -> BigRational {
    s.entries().iter().fold(BigRational::zero(), |acc, (x, mult)| {
        let x = BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()));
        acc + x * BigInt::from(*mult)
    })
}

/// `u = g - sum g(E_i) - beta(Gamma)`.
pub fn unipotent_rank(g: &ReductionGraph) -> Result<u64, JumpError> {
    let u = g.genus() as i64 - g.genus_sum() as i64 - g.first_betti() as i64;
    u64::try_from(u)
        .map_err(|_| JumpError::InternalInconsistency(format!("negative unipotent rank {u}")))
}

/// `beta(Gamma_j) + sum_{i in I_j} g(E_i)`, with `Gamma_j` the induced
/// sub-multigraph on `I_j`.
pub fn lower_bound(g: &ReductionGraph, j: u64) -> Result<u64, JumpError> {
    lower_bound_at(g, level(g, j)?)
}

pub fn lower_bound_at(g: &ReductionGraph, x: Rational64) -> Result<u64, JumpError> {
    check_level(x)?;
    let mask = index_positions(g, x);
    let members: Vec<usize> = (0..mask.len()).filter(|&k| mask[k]).collect();
    let internal: Vec<(usize, usize)> = g
        .edge_indices()
        .iter()
        .copied()
        .filter(|&(a, b)| mask[a] && mask[b])
        .collect();
    let components = count_components(g.vertex_count(), &members, &internal);
    let betti = internal.len() + components - members.len();
    let genera: u64 = members.iter().map(|&k| g.vertices()[k].genus).sum();
    Ok(betti as u64 + genera)
}

fn count_components(n: usize, members: &[usize], edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let roots: BTreeSet<usize> = members.iter().map(|&k| find(&mut parent, k)).collect();
    roots.len()
}

/// Number of edges from `k` to components outside the mask.
pub(crate) fn edges_leaving(g: &ReductionGraph, mask: &[bool], k: usize) -> usize {
    g.neighbours(k).filter(|&w| !mask[w]).count()
}

/// Checks that no component of `I_x` (for `x` in `(0,1)`) meets the
/// complement of `I_x` in exactly one point. Returns the offending
/// `(level, vertex id)` pairs.
pub fn lemma_integer_violations(g: &ReductionGraph) -> Vec<(Rational64, String)> {
    let mut out = Vec::new();
    for x in candidate_levels(g) {
        if x.is_zero() {
            continue;
        }
        let mask = index_positions(g, x);
        for k in 0..mask.len() {
            if mask[k] && edges_leaving(g, &mask, k) == 1 {
                out.push((x, g.vertices()[k].id.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn graph(vs: &[(&str, u64, u64)], es: &[(&str, &str)]) -> ReductionGraph {
        ReductionGraph::new(
            vs.iter().map(|&(id, n, g)| Vertex::new(id, n, g)).collect(),
            es.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect(),
        )
        .unwrap()
    }

    fn kodaira_ii() -> ReductionGraph {
        graph(
            &[("c", 6, 0), ("t3", 3, 0), ("t2", 2, 0), ("t1", 1, 0)],
            &[("c", "t3"), ("c", "t2"), ("c", "t1")],
        )
    }

    fn i0_star() -> ReductionGraph {
        graph(
            &[("c", 2, 0), ("a", 1, 0), ("b", 1, 0), ("d", 1, 0), ("e", 1, 0)],
            &[("c", "a"), ("c", "b"), ("c", "d"), ("c", "e")],
        )
    }

    fn genus2() -> ReductionGraph {
        graph(
            &[("c", 2, 1), ("a", 1, 0), ("b", 1, 0)],
            &[("c", "a"), ("c", "b")],
        )
    }

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    fn set(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_multiplicity(&kodaira_ii()).unwrap(), 6);
        assert_eq!(lcm_multiplicity(&graph(&[("a", 1, 2)], &[])).unwrap(), 1);
        assert_eq!(lcm_multiplicity(&i0_star()).unwrap(), 2);
    }

    #[test]
    fn index_set_examples() {
        let g = kodaira_ii();
        assert_eq!(index_set(&g, 1).unwrap(), set(&["c"]));
        assert_eq!(index_set(&g, 0).unwrap(), set(&["c", "t1", "t2", "t3"]));
        assert_eq!(index_set(&g, 2).unwrap(), set(&["c", "t3"]));
        assert_eq!(
            index_set(&g, 6),
            Err(JumpError::IndexOutOfRange { j: 6, m: 6 })
        );
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&kodaira_ii(), 1).unwrap(), 3);
        assert_eq!(sigma(&kodaira_ii(), 0).unwrap(), 3);
        assert_eq!(sigma(&i0_star(), 1).unwrap(), 4);
    }

    #[test]
    fn floor_divisor_examples() {
        let g = kodaira_ii();
        let d = floor_divisor(&g, 1).unwrap();
        assert_eq!((d.get("c"), d.get("t3"), d.get("t2"), d.get("t1")), (1, 0, 0, 0));
        assert_eq!(floor_divisor(&g, 0).unwrap(), IntegralDivisor::zero(&g));
        let d = floor_divisor(&g, 3).unwrap();
        assert_eq!((d.get("c"), d.get("t3"), d.get("t2"), d.get("t1")), (3, 1, 1, 0));
    }

    #[test]
    fn rational_divisor_parts() {
        let g = kodaira_ii();
        let d = RationalDivisor::scaled_fiber(&g, r(1, 2));
        assert_eq!(d.floor(), floor_divisor_at(&g, r(1, 2)).unwrap());
        let frac = d.fractional();
        assert_eq!(frac.coefficients["t1"], r(1, 2));
        assert_eq!(frac.coefficients["c"], r(0, 1));
        let support = d.integral_support();
        assert_eq!(support.coefficients["c"], r(3, 1));
        assert_eq!(support.coefficients["t3"], r(0, 1));
    }

    #[test]
    fn intersect_examples() {
        let g = kodaira_ii();
        assert_eq!(intersect(&g, &floor_divisor(&g, 1).unwrap(), "c").unwrap(), -1);
        assert_eq!(intersect(&g, &IntegralDivisor::zero(&g), "t2").unwrap(), 0);
        assert_eq!(intersect(&g, &floor_divisor(&g, 2).unwrap(), "t3").unwrap(), 0);
    }

    #[test]
    fn jump_multiplicity_examples() {
        let g = kodaira_ii();
        assert_eq!(jump_multiplicity(&g, 1).unwrap(), 1);
        assert_eq!(jump_multiplicity(&g, 2).unwrap(), 0);
        let single = graph(&[("a", 1, 4)], &[]);
        assert_eq!(jump_multiplicity(&single, 0).unwrap(), 4);
    }

    #[test]
    fn compute_jumps_examples() {
        let s = compute_jumps(&i0_star()).unwrap();
        assert_eq!(s.entries(), &[(r(1, 2), 1)]);
        let s = compute_jumps(&genus2()).unwrap();
        assert_eq!(s.entries(), &[(r(0, 1), 1), (r(1, 2), 1)]);
        let s = compute_jumps(&graph(&[("a", 1, 3)], &[])).unwrap();
        assert_eq!(s.entries(), &[(r(0, 1), 3)]);
    }

    #[test]
    fn conductor_examples() {
        let half = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let s = compute_jumps(&kodaira_ii()).unwrap();
        assert_eq!(tame_base_change_conductor(&s), half(1, 6));
        let s = compute_jumps(&graph(&[("a", 1, 3)], &[])).unwrap();
        assert!(tame_base_change_conductor(&s).is_zero());
        let s = compute_jumps(&genus2()).unwrap();
        assert_eq!(tame_base_change_conductor(&s), half(1, 2));
    }

    #[test]
    fn unipotent_rank_examples() {
        assert_eq!(unipotent_rank(&kodaira_ii()).unwrap(), 1);
        let cyc = graph(
            &[("a", 1, 0), ("b", 1, 0), ("c", 1, 0)],
            &[("a", "b"), ("b", "c"), ("c", "a")],
        );
        assert_eq!(unipotent_rank(&cyc).unwrap(), 0);
        assert_eq!(unipotent_rank(&graph(&[("a", 1, 4)], &[])).unwrap(), 0);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&kodaira_ii(), 1).unwrap(), 0);
        assert_eq!(lower_bound(&genus2(), 1).unwrap(), 1);
        // level 1/4 on Kodaira II: no multiplicity divisible by 4
        assert_eq!(lower_bound_at(&kodaira_ii(), r(1, 4)).unwrap(), 0);
        assert!(index_set_at(&kodaira_ii(), r(1, 4)).unwrap().is_empty());
    }

    #[test]
    fn euler_route_examples() {
        let g = kodaira_ii();
        assert_eq!(jump_multiplicity_via_euler(&g, 1).unwrap(), 1);
        assert_eq!(jump_multiplicity_via_euler_at(&g, r(1, 5)).unwrap(), 0);
        for j in 0..6 {
            assert_eq!(
                jump_multiplicity_via_euler(&g, j).unwrap(),
                jump_multiplicity(&g, j).unwrap() as i64
            );
        }
    }

    #[test]
    fn empty_index_set_gives_zero() {
        let g = kodaira_ii();
        assert_eq!(jump_multiplicity_at(&g, r(1, 4)).unwrap(), 0);
        assert_eq!(sigma_at(&g, r(1, 4)).unwrap(), 0);
    }

    #[test]
    fn level_range_checked() {
        let g = kodaira_ii();
        assert!(matches!(
            jump_multiplicity_at(&g, r(1, 1)),
            Err(JumpError::LevelOutOfRange(_))
        ));
    }

    #[test]
    fn spectrum_rejects_bad_totals() {
        assert!(JumpSpectrum::new(vec![(r(1, 2), 1)], 2).is_err());
        assert!(JumpSpectrum::new(vec![(r(1, 2), 1), (r(1, 3), 1)], 2).is_err());
        assert!(JumpSpectrum::new(vec![(r(0, 1), 0), (r(1, 3), 1)], 1).is_err());
    }

    #[test]
    fn lemma_integer_on_examples() {
        assert!(lemma_integer_violations(&kodaira_ii()).is_empty());
        assert!(lemma_integer_violations(&i0_star()).is_empty());
    }
}
