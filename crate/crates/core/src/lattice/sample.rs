//! Random lattice instances for property suites.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use super::matrix::IntMatrix;
use super::snf::column_span_basis;
use super::{elementary_divisors, DivisorTuple, Lattice};

/// Product of random elementary row operations; determinant ±1.
pub fn random_unimodular<R: Rng>(rng: &mut R, rank: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(rank);
    if rank < 2 {
        if rng.gen_bool(0.5) {
            m.negate_row(0);
        }
        return m;
    }
    for _ in 0..steps {
        let a = rng.gen_range(0..rank);
        let mut b = rng.gen_range(0..rank - 1);
        if b >= a {
            b += 1;
        }
        match rng.gen_range(0..4) {
            0 => m.swap_rows(a, b),
            1 => m.negate_row(a),
            _ => {
                let k = BigInt::from(rng.gen_range(-2i64..=2));
                m.add_row_multiple(a, b, &k);
            }
        }
    }
    m
}

/// Random nonsingular matrix with entries in `[-bound, bound]`.
pub fn random_nonsingular<R: Rng>(rng: &mut R, rank: usize, bound: i64) -> IntMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..rank)
            .map(|_| (0..rank).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// `U * diag * V` with random unimodular `U`, `V`.
pub fn conjugated_diagonal<R: Rng>(rng: &mut R, diag: &[BigInt]) -> IntMatrix {
    let g = diag.len();
    let u = random_unimodular(rng, g, 3 * g);
    let v = random_unimodular(rng, g, 3 * g);
    &(&u * &IntMatrix::diagonal(diag)) * &v
}

/// Transition matrix whose elementary divisors at `p` are exactly `exps`
/// (sorted), possibly with extra prime-to-`p` factors.
pub fn transition_with_exponents<R: Rng>(rng: &mut R, p: u64, exps: &[u64]) -> IntMatrix {
    let noise = [1u64, 1, 1, 7, 11];
    let diag: Vec<BigInt> = exps
        .iter()
        .map(|&e| {
            let unit = noise[rng.gen_range(0..noise.len())];
            let unit = if unit % p == 0 { 1 } else { unit };
            BigInt::from(p).pow(e as u32) * unit
        })
        .collect();
    conjugated_diagonal(rng, &diag)
}

/// A chain `L0 ⊆ L1 ⊆ L2` and an exponent `n` with `p^n L1 ⊆ L0`.
#[derive(Clone, Debug)]
pub struct SandwichInstance {
    pub l0: Lattice,
    pub l1: Lattice,
    pub l2: Lattice,
    pub p: u64,
    pub n: u64,
}

pub fn random_sandwich<R: Rng>(rng: &mut R, max_rank: usize, primes: &[u64], max_n: u64) -> SandwichInstance {
    let g = rng.gen_range(1..=max_rank);
    let p = primes[rng.gen_range(0..primes.len())];
    let l2 = Lattice::new(random_unimodular(rng, g, 2 * g))
        .expect("unimodular basis")
        .sublattice(&if rng.gen_bool(0.3) {
            random_nonsingular(rng, g, 3)
        } else {
            IntMatrix::identity(g)
        })
        .expect("nonsingular");
    let exps12: Vec<u64> = sorted((0..g).map(|_| rng.gen_range(0..=3)).collect());
    let l1 = l2
        .sublattice(&transition_with_exponents(rng, p, &exps12))
        .expect("nonsingular");
    let exps01: Vec<u64> = sorted((0..g).map(|_| rng.gen_range(0..=max_n)).collect());
    let l0 = l1
        .sublattice(&transition_with_exponents(rng, p, &exps01))
        .expect("nonsingular");
    let n = exps01.last().copied().unwrap_or(0) + u64::from(rng.gen_bool(0.2));
    SandwichInstance { l0, l1, l2, p, n }
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

/// A chain `Ω1 ⊆ Ω2 ⊆ Ω3` where `Ω1 ⊆ Ω3` has type `(0,..,0,a,..,a)` and `Ω2`
/// is generated by `Ω1` and random vectors of `Ω3`.
#[derive(Clone, Debug)]
pub struct ModuleChain {
    pub omega1: Lattice,
    pub omega2: Lattice,
    pub omega3: Lattice,
    pub p: u64,
    pub v: DivisorTuple,
}

pub fn random_module_chain<R: Rng>(rng: &mut R, max_rank: usize, primes: &[u64], max_a: u64) -> ModuleChain {
    let g = rng.gen_range(1..=max_rank);
    let p = primes[rng.gen_range(0..primes.len())];
    let zeros = rng.gen_range(0..g);
    let a = rng.gen_range(1..=max_a);
    let omega3 = Lattice::new(random_unimodular(rng, g, 2 * g)).expect("unimodular basis");
    let mut exps = vec![0; zeros];
    exps.extend(std::iter::repeat(a).take(g - zeros));
    let diag: Vec<BigInt> = exps.iter().map(|&e| BigInt::from(p).pow(e as u32)).collect();
    let omega1 = omega3
        .sublattice(&conjugated_diagonal(rng, &diag))
        .expect("nonsingular");

    // Ω2 = Ω1 + span of a few random vectors p^k x, x ∈ Ω3.
    let extra = rng.gen_range(0..=g);
    let mut cols: Vec<Vec<BigInt>> = (0..g).map(|c| omega1.basis().column(c)).collect();
    for _ in 0..extra {
        let coeffs: Vec<BigInt> = (0..g).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
        let scale = BigInt::from(p).pow(rng.gen_range(0..=a) as u32);
        let x = IntMatrix::from_columns(&[coeffs]);
        let y = omega3.basis() * &x;
        cols.push(y.column(0).into_iter().map(|c| c * &scale).collect());
    }
    let span = column_span_basis(&IntMatrix::from_columns(&cols));
    let omega2 = Lattice::new(span).expect("contains Ω1, so full rank");
    ModuleChain {
        omega1,
        omega2,
        omega3,
        p,
        v: DivisorTuple::new(exps).expect("sorted"),
    }
}

/// Recomputes `v` from the lattices; used to assert the construction.
pub fn outer_type(chain: &ModuleChain) -> DivisorTuple {
    elementary_divisors(&chain.omega1, &chain.omega3, chain.p).expect("Ω1 ⊆ Ω3")
}

/// `|det|` of a nonsingular matrix.
pub fn abs_det(m: &IntMatrix) -> BigInt {
    let d = m.determinant();
    if d < BigInt::zero() {
        -d
    } else {
        d
    }
}

/// Product of a slice of integers.
pub fn product(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::one(), |acc, x| acc * x)
}
