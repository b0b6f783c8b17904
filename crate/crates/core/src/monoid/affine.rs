//! Finitely generated submonoids of `N^r` and a bounded check of the cokernel
//! lemma for `Q = P ⊕_N (1/d)N`.
//!
//! An element of `Q^gp = P^gp ⊕_Z (1/d)Z` (with `1 ~ e`) has a unique normal
//! form `(x, r)` with `x ∈ P^gp` and `0 <= r < d`. `N·(x, r)` has normal form
//! `(N x + ⌊N r / d⌋ e, N r mod d)`, and `(x, r) ∈ Q` iff `x ∈ P`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;

use super::MonoidError;
use crate::lattice::{smith_form, IntMatrix, SmithForm};

/// Multiplier bound for the bounded saturation test of `P`.
pub const SATURATION_MULTIPLIER: i64 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMonoid {
    rank: usize,
    generators: Vec<Vec<i64>>,
}

impl AffineMonoid {
    /// Generators must be non-zero vectors in `N^rank`, which makes the monoid
    /// sharp.
    pub fn new(rank: usize, generators: Vec<Vec<i64>>) -> Result<Self, MonoidError> {
        if rank == 0 {
            return Err(MonoidError::InvalidMonoid("rank must be positive".into()));
        }
        for g in &generators {
            if g.len() != rank {
                return Err(MonoidError::InvalidMonoid(format!("{g:?} has wrong length")));
            }
            if g.iter().any(|&c| c < 0) || g.iter().all(|&c| c == 0) {
                return Err(MonoidError::InvalidMonoid(format!(
                    "{g:?} is not a non-zero vector of N^{rank}"
                )));
            }
        }
        Ok(AffineMonoid { rank, generators })
    }

    /// `N^rank` with its standard basis.
    pub fn free(rank: usize) -> Self {
        let generators = (0..rank)
            .map(|k| (0..rank).map(|c| i64::from(c == k)).collect())
            .collect();
        AffineMonoid { rank, generators }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Membership table for all points of `[0, side]^rank`.
    pub fn table(&self, side: i64) -> MembershipTable {
        MembershipTable::build(self, side)
    }

    pub fn group(&self) -> GroupLattice {
        GroupLattice::new(self.rank, &self.generators)
    }

    /// Bounded saturation test: no `x ∈ P^gp ∩ [0, box]^rank` outside `P` has a
    /// multiple `k x ∈ P` with `k <= SATURATION_MULTIPLIER`.
    pub fn is_saturated_on_box(&self, bound: i64) -> bool {
        self.saturation_witness(bound).is_none()
    }

    pub fn saturation_witness(&self, bound: i64) -> Option<Vec<i64>> {
        let table = self.table(SATURATION_MULTIPLIER * bound);
        let gp = self.group();
        box_points(self.rank, 0, bound).find(|x| {
            gp.contains(x)
                && !table.contains(x)
                && (2..=SATURATION_MULTIPLIER).any(|k| {
                    let kx: Vec<i64> = x.iter().map(|c| k * c).collect();
                    table.contains(&kx)
                })
        })
    }
}

/// Reachability table of `P` on `[0, side]^rank`.
pub struct MembershipTable {
    rank: usize,
    side: i64,
    reachable: Vec<bool>,
}

impl MembershipTable {
    fn build(p: &AffineMonoid, side: i64) -> Self {
        let rank = p.rank;
        let width = (side + 1) as usize;
        let len = width.pow(rank as u32);
        let mut reachable = vec![false; len];
        reachable[0] = true;
        // Lexicographic order visits x - g before x for every generator g >= 0.
        for idx in 1..len {
            let x = unflatten(idx, rank, width);
            reachable[idx] = p.generators.iter().any(|g| {
                let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
                y.iter().all(|&c| c >= 0) && reachable[flatten(&y, width)]
            });
        }
        MembershipTable { rank, side, reachable }
    }

    pub fn side(&self) -> i64 {
        self.side
    }

    /// Points with a negative coordinate are never in `P`. Points beyond the
    /// table are a caller bug.
    pub fn contains(&self, x: &[i64]) -> bool {
        assert_eq!(x.len(), self.rank, "dimension mismatch");
        if x.iter().any(|&c| c < 0) {
            return false;
        }
        assert!(
            x.iter().all(|&c| c <= self.side),
            "{x:?} lies outside the membership table of side {}",
            self.side
        );
        self.reachable[flatten(x, (self.side + 1) as usize)]
    }
}

fn flatten(x: &[i64], width: usize) -> usize {
    x.iter().fold(0, |acc, &c| acc * width + c as usize)
}

fn unflatten(mut idx: usize, rank: usize, width: usize) -> Vec<i64> {
    let mut x = vec![0; rank];
    for k in (0..rank).rev() {
        x[k] = (idx % width) as i64;
        idx /= width;
    }
    x
}

fn box_points(rank: usize, lo: i64, hi: i64) -> impl Iterator<Item = Vec<i64>> {
    let width = (hi - lo + 1) as usize;
    (0..width.pow(rank as u32)).map(move |idx| {
        unflatten(idx, rank, width)
            .into_iter()
            .map(|c| c + lo)
            .collect()
    })
}

/// The subgroup of `Z^rank` generated by a finite set, with a membership test
/// through the Smith form `U G V = D`: `x = G y` iff `(U x)_i` is divisible by
/// `d_i` below the rank and vanishes above it.
pub struct GroupLattice {
    snf: SmithForm,
}

impl GroupLattice {
    pub fn new(rank: usize, generators: &[Vec<i64>]) -> Self {
        let cols: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| g.iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        let m = if cols.is_empty() {
            IntMatrix::zeros(rank, 1)
        } else {
            IntMatrix::from_columns(&cols)
        };
        GroupLattice { snf: smith_form(&m) }
    }

    pub fn rank(&self) -> usize {
        self.snf.rank
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let col = IntMatrix::from_columns(&[x.iter().map(|&c| BigInt::from(c)).collect()]);
        let ux = &self.snf.left * &col;
        (0..ux.rows()).all(|i| {
            let v = &ux[(i, 0)];
            if i < self.snf.rank {
                v.is_multiple_of(&self.snf.diagonal[i])
            } else {
                v.is_zero()
            }
        })
    }
}

/// Input of the cokernel check: `P`, the image `e` of `1 ∈ N`, the
/// denominator `d` and the half-width of the certified box.
#[derive(Clone, Debug)]
pub struct LemmCokerInstance {
    pub p: AffineMonoid,
    pub e: Vec<i64>,
    pub d: i64,
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmCokerReport {
    /// Elements `x` of the certified region have `|x_i| <= bound`.
    pub bound: i64,
    /// Multiplier bound used to decide membership in `Q^sat`.
    pub max_multiplier: i64,
    /// Number of normal forms `(x, r)` found in `Q^sat`.
    pub checked: usize,
    /// Normal forms `(x, r) ∈ Q^sat` with `(x, r) + (0, 1) ∉ Q`.
    pub failures: Vec<(Vec<i64>, i64)>,
}

impl LemmCokerReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `q + (0, 1)` lies in `Q` for every `q ∈ Q^sat` whose normal form
/// `(x, r)` has `|x_i| <= bound`. Membership in `Q^sat` is decided by
/// searching multipliers `N <= 2d`.
pub fn verify_lemm_coker(
    p: &AffineMonoid,
    e: &[i64],
    d: i64,
    bound: i64,
) -> Result<LemmCokerReport, MonoidError> {
    if d < 1 || bound < 0 {
        return Err(MonoidError::Precondition(format!(
            "need d >= 1 and bound >= 0, got d = {d}, bound = {bound}"
        )));
    }
    if e.len() != p.rank() {
        return Err(MonoidError::Precondition(format!("{e:?} has wrong length")));
    }
    let e_max = e.iter().copied().max().unwrap_or(0);
    let max_multiplier = 2 * d;
    let side = (max_multiplier * (bound + e_max)).max(SATURATION_MULTIPLIER * bound);
    let table = p.table(side);
    if !table.contains(e) || e.iter().all(|&c| c == 0) {
        return Err(MonoidError::Precondition(format!("{e:?} is not a non-zero element of P")));
    }
    if let Some(w) = p.saturation_witness(bound) {
        return Err(MonoidError::NotSaturatedInput(w));
    }
    let gp = p.group();
    let mut report = LemmCokerReport {
        bound,
        max_multiplier,
        checked: 0,
        failures: Vec::new(),
    };
    for x in box_points(p.rank(), -bound, bound).filter(|x| gp.contains(x)) {
        for r in 0..d {
            let in_sat = (1..=max_multiplier).any(|n| {
                let shift = Integer::div_floor(&(n * r), &d);
                let y: Vec<i64> = x.iter().zip(e).map(|(xi, ei)| n * xi + shift * ei).collect();
                table.contains(&y)
            });
            if !in_sat {
                continue;
            }
            report.checked += 1;
            let shifted: Vec<i64> = x.iter().zip(e).map(|(xi, ei)| xi + ei).collect();
            if !table.contains(&shifted) {
                report.failures.push((x.clone(), r));
            }
        }
    }
    Ok(report)
}

/// A random saturated monoid of rank `<= max_rank` built from seed generators
/// in `[0, coord_max]^rank`: its generators are all non-zero points of that
/// box lying in the bounded saturation of the seeds. Draws are repeated until
/// the bounded saturation test passes on `[0, bound]^rank`.
pub fn random_saturated_monoid<R: Rng>(
    rng: &mut R,
    max_rank: usize,
    coord_max: i64,
    bound: i64,
) -> AffineMonoid {
    loop {
        let rank = rng.gen_range(1..=max_rank);
        let seed_count = rng.gen_range(1..=3);
        let seeds: Vec<Vec<i64>> = (0..seed_count)
            .map(|_| loop {
                let v: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..=coord_max)).collect();
                if v.iter().any(|&c| c != 0) {
                    break v;
                }
            })
            .collect();
        let seed_monoid = AffineMonoid::new(rank, seeds.clone()).expect("non-zero seeds");
        let table = seed_monoid.table(SATURATION_MULTIPLIER * coord_max);
        let gp = seed_monoid.group();
        let generators: Vec<Vec<i64>> = box_points(rank, 0, coord_max)
            .filter(|x| x.iter().any(|&c| c != 0) && gp.contains(x))
            .filter(|x| {
                (1..=SATURATION_MULTIPLIER).any(|k| {
                    let kx: Vec<i64> = x.iter().map(|c| k * c).collect();
                    table.contains(&kx)
                })
            })
            .collect();
        let p = AffineMonoid::new(rank, generators).expect("non-zero points of N^rank");
        if p.is_saturated_on_box(bound) {
            return p;
        }
    }
}

/// A full random instance: saturated `P`, `e` a sum of one or two generators,
/// `d <= max_d`, `bound <= max_bound`.
pub fn random_lemm_coker_instance<R: Rng>(
    rng: &mut R,
    max_rank: usize,
    coord_max: i64,
    max_d: i64,
    max_bound: i64,
) -> LemmCokerInstance {
    let bound = rng.gen_range(1..=max_bound);
    let p = random_saturated_monoid(rng, max_rank, coord_max, bound);
    let gens = p.generators();
    let mut e = gens[rng.gen_range(0..gens.len())].clone();
    if rng.gen_bool(0.5) {
        let extra = &gens[rng.gen_range(0..gens.len())];
        for (a, b) in e.iter_mut().zip(extra) {
            *a += b;
        }
    }
    LemmCokerInstance {
        d: rng.gen_range(1..=max_d),
        e,
        p,
        bound,
    }
}
