//! Local charts of a base-changed sncd-model and their saturations.
//!
//! Elements of `Q^gp` are stored with denominators cleared: the Case 1 element
//! `(u, v/a, w/m)` is the triple `(u, v, w)` modulo `(1, a, -m)`, and the Case 2
//! element `(t, u/a, v/b, w/m)` is the quadruple `(t, u, v, w)` modulo
//! `(1, a, b, -m)`.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use super::MonoidError;

/// Chart at a smooth point of the reduced fiber, where the fiber has
/// multiplicity `a`, after a base extension of degree `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SaturationChartCase1 {
    a: i64,
    m: i64,
}

/// Chart at a node where branches of multiplicities `a` and `b` meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SaturationChartCase2 {
    a: i64,
    b: i64,
    m: i64,
}

fn check_divides(x: i64, m: i64, name: &str) -> Result<(), MonoidError> {
    if x < 1 || m < 1 {
        return Err(MonoidError::InvalidChart(format!(
            "{name} = {x} and m = {m} must be positive"
        )));
    }
    if m % x != 0 {
        return Err(MonoidError::InvalidChart(format!("{name} = {x} does not divide m = {m}")));
    }
    Ok(())
}

impl SaturationChartCase1 {
    pub fn new(a: i64, m: i64) -> Result<Self, MonoidError> {
        check_divides(a, m, "a")?;
        Ok(SaturationChartCase1 { a, m })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Every Case 1 chart with `m <= max_m`.
    pub fn all_up_to(max_m: i64) -> Vec<Self> {
        (1..=max_m)
            .flat_map(|m| (1..=m).filter(move |a| m % a == 0).map(move |a| Self { a, m }))
            .collect()
    }
}

impl SaturationChartCase2 {
    pub fn new(a: i64, b: i64, m: i64) -> Result<Self, MonoidError> {
        check_divides(a, m, "a")?;
        check_divides(b, m, "b")?;
        Ok(SaturationChartCase2 { a, b, m })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn all_up_to(max_m: i64) -> Vec<Self> {
        let mut out = Vec::new();
        for m in 1..=max_m {
            let divs: Vec<i64> = (1..=m).filter(|d| m % d == 0).collect();
            for &a in &divs {
                for &b in &divs {
                    out.push(Self { a, b, m });
                }
            }
        }
        out
    }
}

pub fn sat_member_case1(c: &SaturationChartCase1, _u: i64, v: i64, w: i64) -> bool {
    c.m * v + c.a * w >= 0
}

pub fn sat_member_case2(c: &SaturationChartCase2, _t: i64, u: i64, v: i64, w: i64) -> bool {
    c.m * u + c.a * w >= 0 && c.m * v + c.b * w >= 0
}

/// Generators `(0, -⌊ja/m⌋, j)` of `Z[Q^sat] / Z[Q]`, as pairs `(j, ⌊ja/m⌋)`.
pub fn cokernel_generators_case1(c: &SaturationChartCase1) -> Vec<(i64, i64)> {
    (1..c.m).map(|j| (j, Integer::div_floor(&(j * c.a), &c.m))).collect()
}

/// Generators `(0, -⌊ja/m⌋, -⌊jb/m⌋, j)` for `j >= min(m/a, m/b)`, as triples
/// `(j, ⌊ja/m⌋, ⌊jb/m⌋)`.
pub fn cokernel_generators_case2(c: &SaturationChartCase2) -> Vec<(i64, i64, i64)> {
    let cutoff = (c.m / c.a).min(c.m / c.b);
    (1..c.m)
        .filter(|&j| j >= cutoff)
        .map(|j| (j, Integer::div_floor(&(j * c.a), &c.m), Integer::div_floor(&(j * c.b), &c.m)))
        .collect()
}

/// Whether `(π')^s / f^t` is divisible by `(π')^i` in the stalk.
pub fn divisible_case1(c: &SaturationChartCase1, s: i64, t: i64, i: i64) -> Result<bool, MonoidError> {
    if s < 0 || i < 0 {
        return Err(MonoidError::Precondition(format!(
            "s = {s} and i = {i} must be non-negative"
        )));
    }
    Ok(c.a * (s - i) - c.m * t >= 0)
}

/// Twist indices `j` of the summands `J((j/m) C_k)` of the graded piece `F_i`.
pub fn filtration_summands(m: i64, i: i64) -> Result<Vec<i64>, MonoidError> {
    if m < 1 || !(0..m).contains(&i) {
        return Err(MonoidError::Precondition(format!("need 0 <= i < m, got i = {i}, m = {m}")));
    }
    Ok((1..m - i).collect())
}

/// Multiplicity of the image of the base generator along a facet, given the
/// values the facet coordinate takes on generators of the group.
///
/// The coordinate's value group is cyclic, generated by `g`; the result is
/// `e_value / g`.
fn facet_multiplicity(values: &[Rational64], e_value: Rational64) -> Rational64 {
    let l = values.iter().fold(1i64, |acc, v| acc.lcm(v.denom()));
    let g = values
        .iter()
        .fold(0i64, |acc, v| acc.gcd(&(v.numer() * (l / v.denom()))));
    assert!(!g.is_zero(), "degenerate facet coordinate");
    e_value / Rational64::new(g, l)
}

/// Smallest degree `d` of a base extension after which the morphism from the
/// base to the fs pushout is saturated, searched in `1..=limit`.
///
/// The pushout's sharp part is cut out by one facet per branch; the morphism is
/// saturated exactly when the base generator `1/d` has multiplicity one along
/// every facet.
pub fn saturation_index(branch_multiplicities: &[i64], limit: i64) -> Option<i64> {
    (1..=limit).find(|&d| {
        branch_multiplicities.iter().all(|&a| {
            // facet coordinate v/a + w/d on the generators (1/a, 1/d)
            let values = [Rational64::new(1, a), Rational64::new(1, d)];
            facet_multiplicity(&values, Rational64::new(1, d)) == Rational64::from_integer(1)
        })
    })
}

pub fn saturation_index_case1(c: &SaturationChartCase1) -> Option<i64> {
    saturation_index(&[c.a], c.m * c.m)
}

pub fn saturation_index_case2(c: &SaturationChartCase2) -> Option<i64> {
    saturation_index(&[c.a, c.b], c.m * c.m)
}
