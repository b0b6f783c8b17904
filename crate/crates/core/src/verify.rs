//! Seeded property suites over random lattices, chart monoids and graphs.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::random_valid_graph;
use crate::checks::run_checks;
use crate::graph::{EdgeId, ReductionGraph};
use crate::jumps::compute_jumps;
use crate::lattice::sample::{
    outer_type, random_module_chain, random_sandwich, random_unimodular,
};
use crate::lattice::{
    chain_complement, check_sandwich, elementary_divisors, smith_form, IntMatrix,
};
use crate::monoid::affine::random_lemm_coker_instance;
use crate::monoid::brute::{in_q_case1, in_q_case2, in_sat_case1, in_sat_case2};
use crate::monoid::chart::{saturation_index_case1, saturation_index_case2};
use crate::monoid::{
    cokernel_generators_case1, cokernel_generators_case2, divisible_case1, filtration_summands,
    sat_member_case1, sat_member_case2, verify_lemm_coker, SaturationChartCase1,
    SaturationChartCase2,
};

pub const PRIMES: [u64; 3] = [2, 3, 5];
/// Largest base-extension degree of the exhaustive chart sweeps.
pub const MAX_CHART_DEGREE: i64 = 12;
/// Coordinates of the exhaustive chart sweeps lie in `[-CHART_BOX, CHART_BOX]`.
pub const CHART_BOX: i64 = 12;
/// Largest number of blow-ups applied to a catalog seed in the graph corpus.
pub const MAX_MOVES: u64 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lattices,
    Monoids,
    Graphs,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Lattices => "lattices",
            Suite::Monoids => "monoids",
            Suite::Graphs => "graphs",
        })
    }
}

/// Pass/fail count of one property, with the first counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.passed + self.failed
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub tallies: Vec<Tally>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0 && t.passed > 0)
    }

    pub fn tally(&self, name: &str) -> Option<&Tally> {
        self.tallies.iter().find(|t| t.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tallies {
            writeln!(
                f,
                "{:<9} {:<34} {:>9} passed {:>6} failed",
                self.suite.to_string(),
                t.name,
                t.passed,
                t.failed
            )?;
            if let Some(msg) = &t.first_failure {
                writeln!(f, "          first failure: {msg}")?;
            }
        }
        Ok(())
    }
}

/// Instance counts of the lattice suite.
#[derive(Clone, Copy, Debug)]
pub struct LatticeConfig {
    pub snf: u64,
    pub invariance: u64,
    pub sandwich: u64,
    pub module_chains: u64,
}

impl LatticeConfig {
    pub fn uniform(count: u64) -> Self {
        LatticeConfig {
            snf: count,
            invariance: count,
            sandwich: count,
            module_chains: count,
        }
    }
}

pub fn run_lattice_suite(seed: u64, cfg: LatticeConfig) -> SuiteReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut snf = Tally::new("snf_divisibility_and_determinant");
    for _ in 0..cfg.snf {
        let n = rng.gen_range(1..=6);
        let cols = if rng.gen_bool(0.8) { n } else { rng.gen_range(1..=6) };
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..cols).map(|_| rng.gen_range(-50..=50)).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows);
        snf.record(snf_is_consistent(&m), || format!("{m:?}"));
    }

    let mut inv = Tally::new("elementary_divisors_basis_invariance");
    for _ in 0..cfg.invariance {
        let inst = random_sandwich(&mut rng, 4, &PRIMES, 3);
        let g = inst.l0.rank();
        let before = elementary_divisors(&inst.l0, &inst.l2, inst.p).expect("chain");
        let u = random_unimodular(&mut rng, g, 3 * g);
        let v = random_unimodular(&mut rng, g, 3 * g);
        let l0 = inst.l0.sublattice(&u).expect("unimodular");
        let l2 = inst.l2.sublattice(&v).expect("unimodular");
        let after = elementary_divisors(&l0, &l2, inst.p).expect("chain");
        inv.record(before == after, || format!("{before} vs {after} at p = {}", inst.p));
    }

    let mut sandwich = Tally::new("sandwich_inequalities");
    for _ in 0..cfg.sandwich {
        let inst = random_sandwich(&mut rng, 4, &PRIMES, 3);
        let ok = check_sandwich(&inst.l0, &inst.l1, &inst.l2, inst.p, inst.n);
        sandwich.record(matches!(ok, Ok(true)), || {
            format!("{inst:?}: {ok:?}")
        });
    }

    let mut chains = Tally::new("chain_complement_prediction");
    for _ in 0..cfg.module_chains {
        let c = random_module_chain(&mut rng, 4, &PRIMES, 4);
        let w = elementary_divisors(&c.omega1, &c.omega2, c.p).expect("Ω1 ⊆ Ω2");
        let direct = elementary_divisors(&c.omega2, &c.omega3, c.p).expect("Ω2 ⊆ Ω3");
        let predicted = chain_complement(&c.v, &w);
        let ok = outer_type(&c) == c.v
            && w.values().iter().zip(c.v.values()).all(|(a, b)| a <= b)
            && predicted.as_ref() == Ok(&direct);
        chains.record(ok, || {
            format!("v = {}, w = {w}, direct {direct}, predicted {predicted:?}", c.v)
        });
    }

    SuiteReport {
        suite: Suite::Lattices,
        tallies: vec![snf, inv, sandwich, chains],
        elapsed: start.elapsed(),
    }
}

/// `U M V = D`, `U U^{-1} = 1`, `d_i | d_{i+1}`, and `|det M| = prod d_i`
/// for square `M`.
fn snf_is_consistent(m: &IntMatrix) -> bool {
    let s = smith_form(m);
    if &(&s.left * m) * &s.right != s.diagonal_matrix() {
        return false;
    }
    if &s.left * &s.left_inverse != IntMatrix::identity(m.rows()) {
        return false;
    }
    if s.diagonal.iter().any(|d| d.is_negative()) {
        return false;
    }
    let chain_ok = s.diagonal.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    });
    if !chain_ok {
        return false;
    }
    if m.is_square() {
        let prod = s.diagonal.iter().fold(BigInt::from(1), |acc, d| acc * d);
        if m.determinant().abs() != prod {
            return false;
        }
    }
    true
}

/// Instance counts of the monoid suite. The chart sweeps are exhaustive and
/// not controlled by a count.
#[derive(Clone, Copy, Debug)]
pub struct MonoidConfig {
    pub lemm_coker: u64,
    /// Half-width of the boxes used for the (costlier) generation checks.
    pub generation_box: i64,
}

impl MonoidConfig {
    pub fn with_count(count: u64) -> Self {
        MonoidConfig {
            lemm_coker: count,
            generation_box: 5,
        }
    }
}

pub fn run_monoid_suite(seed: u64, cfg: MonoidConfig) -> SuiteReport {
    let start = Instant::now();
    let charts1 = SaturationChartCase1::all_up_to(MAX_CHART_DEGREE);
    let charts2 = SaturationChartCase2::all_up_to(MAX_CHART_DEGREE);
    let b = CHART_BOX;

    let mut case1 = Tally::new("case1_matches_brute_force");
    for c in &charts1 {
        let k = c.m() * b;
        for u in -b..=b {
            for v in -b..=b {
                for w in -b..=b {
                    let (fast, slow) = (sat_member_case1(c, u, v, w), in_sat_case1(c, u, v, w, k));
                    case1.record(fast == slow, || format!("{c:?} at ({u}, {v}, {w})"));
                }
            }
        }
    }

    let mut case2 = Tally::new("case2_matches_brute_force");
    for c in &charts2 {
        let k = c.m();
        for t in -b..=b {
            for u in -b..=b {
                for v in -b..=b {
                    for w in -b..=b {
                        let fast = sat_member_case2(c, t, u, v, w);
                        let slow = in_sat_case2(c, t, u, v, w, k);
                        case2.record(fast == slow, || format!("{c:?} at ({t}, {u}, {v}, {w})"));
                    }
                }
            }
        }
    }

    let gb = cfg.generation_box;
    let mut gens1 = Tally::new("case1_generators");
    for c in &charts1 {
        let gens = cokernel_generators_case1(c);
        let placed = gens.iter().all(|&(j, f)| {
            sat_member_case1(c, 0, -f, j)
                && in_sat_case1(c, 0, -f, j, c.m())
                && in_q_case1(c, 0, -f, j) == (f == 0)
        });
        let mut generated = true;
        for u in -gb..=gb {
            for v in -gb..=gb {
                for w in -gb..=gb {
                    if !sat_member_case1(c, u, v, w) || in_q_case1(c, u, v, w) {
                        continue;
                    }
                    generated &= gens.iter().any(|&(j, f)| in_q_case1(c, u, v + f, w - j));
                }
            }
        }
        gens1.record(placed && generated, || {
            format!("{c:?}: in saturation {placed}, generate {generated}")
        });
    }

    let mut gens2 = Tally::new("case2_generators");
    for c in &charts2 {
        let gens = cokernel_generators_case2(c);
        let placed = gens.iter().all(|&(j, f, g)| {
            sat_member_case2(c, 0, -f, -g, j)
                && in_sat_case2(c, 0, -f, -g, j, c.m())
                && !in_q_case2(c, 0, -f, -g, j)
        });
        let mut generated = true;
        for u in -gb..=gb {
            for v in -gb..=gb {
                for w in -gb..=gb {
                    if !sat_member_case2(c, 0, u, v, w) || in_q_case2(c, 0, u, v, w) {
                        continue;
                    }
                    generated &= gens
                        .iter()
                        .any(|&(j, f, g)| in_q_case2(c, 0, u + f, v + g, w - j));
                }
            }
        }
        gens2.record(placed && generated, || {
            format!("{c:?}: in saturation {placed}, generate {generated}")
        });
    }

    let mut sat_index = Tally::new("chart_saturation_index");
    for c in &charts1 {
        sat_index.record(saturation_index_case1(c) == Some(c.a()), || format!("{c:?}"));
    }
    for c in &charts2 {
        let expected = c.a().lcm(&c.b());
        sat_index.record(saturation_index_case2(c) == Some(expected), || format!("{c:?}"));
    }

    let mut monotone = Tally::new("divisibility_monotone");
    for c in &charts1 {
        let m = c.m();
        for s in 0..=2 * m {
            for i in 0..=2 * m {
                for t in -2 * m..=2 * m {
                    if divisible_case1(c, s, t, i).expect("non-negative") {
                        let next = divisible_case1(c, s, t - 1, i + 1).expect("non-negative");
                        monotone.record(next, || format!("{c:?} at s = {s}, t = {t}, i = {i}"));
                    }
                }
            }
        }
    }

    let mut summands = Tally::new("filtration_summands");
    for m in 1..=MAX_CHART_DEGREE {
        for i in 0..m {
            let js = filtration_summands(m, i).expect("in range");
            let ok = js.len() as i64 == m - i - 1 && js.iter().copied().eq(1..m - i);
            summands.record(ok, || format!("m = {m}, i = {i}: {js:?}"));
        }
    }

    let mut coker = Tally::new("lemm_coker_bounded");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cfg.lemm_coker {
        let inst = random_lemm_coker_instance(&mut rng, 2, 6, 5, 10);
        let r = verify_lemm_coker(&inst.p, &inst.e, inst.d, inst.bound);
        coker.record(matches!(&r, Ok(rep) if rep.holds()), || format!("{inst:?}: {r:?}"));
    }

    SuiteReport {
        suite: Suite::Monoids,
        tallies: vec![case1, case2, gens1, gens2, sat_index, monotone, summands, coker],
        elapsed: start.elapsed(),
    }
}

/// The `k`-th corpus graph for a suite seed.
pub fn corpus_graph(seed: u64, k: u64) -> crate::catalog::RandomGraph {
    random_valid_graph(
        seed.wrapping_mul(1_000_003).wrapping_add(k),
        (k % (MAX_MOVES + 1)) as usize,
    )
}

pub fn run_graph_suite(seed: u64, count: u64) -> SuiteReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut tallies: Vec<Tally> = crate::checks::CHECK_NAMES.iter().map(|n| Tally::new(n)).collect();
    let mut evaluated = Tally::new("checks_evaluate");
    let mut free_point = Tally::new("blow_up_free_point_invariance");
    let mut edge = Tally::new("blow_up_edge_invariance");
    let mut seed_spectrum = Tally::new("seed_spectrum_invariance");
    let mut recovers = Tally::new("minimize_recovers_seed");

    for k in 0..count {
        let rg = corpus_graph(seed, k);
        let g = &rg.graph;
        let describe = || format!("corpus graph {k} ({} + {} moves)", rg.seed_entry.tag(), rg.moves.len());
        match run_checks(g) {
            Ok(results) => {
                evaluated.record(true, String::new);
                for (t, r) in tallies.iter_mut().zip(&results) {
                    t.record(r.pass, || format!("{}: {}", describe(), r.detail.clone().unwrap_or_default()));
                }
            }
            Err(e) => evaluated.record(false, || format!("{}: {e}", describe())),
        }
        let spectrum = compute_jumps(g).ok();
        let seed_spec = compute_jumps(&rg.seed_graph).ok();
        seed_spectrum.record(spectrum.is_some() && spectrum == seed_spec, describe);

        let v = rng.gen_range(0..g.vertex_count());
        let id = g.vertices()[v].id.clone();
        let blown = g.blow_up_free_point(&id).ok();
        free_point.record(same_spectrum(blown.as_ref(), spectrum.as_ref()), || {
            format!("{} at `{id}`", describe())
        });
        if g.edge_count() > 0 {
            let e = rng.gen_range(0..g.edge_count());
            let blown = g.blow_up_edge(EdgeId(e)).ok();
            edge.record(same_spectrum(blown.as_ref(), spectrum.as_ref()), || {
                format!("{} at edge {e}", describe())
            });
        }
        recovers.record(g.minimize().is_isomorphic(&rg.seed_graph), describe);
    }
    tallies.extend([evaluated, seed_spectrum, free_point, edge, recovers]);
    SuiteReport {
        suite: Suite::Graphs,
        tallies,
        elapsed: start.elapsed(),
    }
}

fn same_spectrum(
    g: Option<&ReductionGraph>,
    expected: Option<&crate::jumps::JumpSpectrum>,
) -> bool {
    match (g, expected) {
        (Some(g), Some(s)) => compute_jumps(g).ok().as_ref() == Some(s),
        _ => false,
    }
}
