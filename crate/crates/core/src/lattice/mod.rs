//! Elementary divisors of lattice pairs over a discrete valuation ring.
//!
//! The ring is realized as the integers localized at a prime `p`: a lattice is
//! a full-rank sublattice of `Z^g` given by a basis matrix (columns), and the
//! elementary divisors of `inner ⊆ outer` are the `p`-adic valuations of the
//! Smith invariants of the transition matrix `outer^{-1} * inner`.

pub mod matrix;
pub mod sample;
pub mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use matrix::IntMatrix;
pub use snf::{column_span_basis, smith_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix must be square")]
    NotSquare,
    #[error("inner lattice is not contained in the outer lattice")]
    NotASublattice,
    #[error("lattices have different ranks ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Invariant factors `d_1 | d_2 | ... | d_g` of a nonsingular square matrix,
/// with the unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm, LatticeError> {
    if !m.is_square() {
        return Err(LatticeError::NotSquare);
    }
    let s = smith_form(m);
    if s.rank < m.rows() {
        return Err(LatticeError::SingularMatrix);
    }
    Ok(s)
}

/// Full-rank sublattice of `Z^g`, spanned by the columns of `basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: IntMatrix,
}

impl Lattice {
    pub fn new(basis: IntMatrix) -> Result<Self, LatticeError> {
        if !basis.is_square() {
            return Err(LatticeError::NotSquare);
        }
        if basis.determinant().is_zero() {
            return Err(LatticeError::SingularMatrix);
        }
        Ok(Lattice { basis })
    }

    /// `Z^g` itself.
    pub fn standard(rank: usize) -> Self {
        Lattice {
            basis: IntMatrix::identity(rank),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// The lattice spanned by `basis * transition`.
    pub fn sublattice(&self, transition: &IntMatrix) -> Result<Self, LatticeError> {
        Lattice::new(&self.basis * transition)
    }

    /// `k * self`.
    pub fn scaled(&self, k: &BigInt) -> Self {
        Lattice {
            basis: self.basis.scale(k),
        }
    }

    /// Transition matrix `self^{-1} * inner`, if `inner ⊆ self`.
    pub fn transition_from(&self, inner: &Lattice) -> Result<IntMatrix, LatticeError> {
        if inner.rank() != self.rank() {
            return Err(LatticeError::RankMismatch(inner.rank(), self.rank()));
        }
        self.basis
            .integral_solve(&inner.basis)
            .ok_or(LatticeError::NotASublattice)
    }

    pub fn contains(&self, inner: &Lattice) -> bool {
        self.transition_from(inner).is_ok()
    }
}

/// Non-decreasing tuple of elementary divisors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorTuple(Vec<u64>);

impl DivisorTuple {
    pub fn new(values: Vec<u64>) -> Result<Self, LatticeError> {
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(LatticeError::ShapeMismatch(format!(
                "{values:?} is not non-decreasing"
            )));
        }
        Ok(DivisorTuple(values))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> u64 {
        self.0.last().copied().unwrap_or(0)
    }

    /// Divisors over a ramified extension of degree `e`, brought back to the
    /// base ring: every entry divided by `e`.
    pub fn normalized(&self, ramification: u64) -> Vec<Rational64> {
        assert!(ramification > 0, "ramification degree must be positive");
        self.0
            .iter()
            .map(|&c| Rational64::new(c as i64, ramification as i64))
            .collect()
    }
}

impl fmt::Display for DivisorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `v_p(x)` for non-zero `x`.
pub fn valuation(x: &BigInt, p: u64) -> u64 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// Elementary divisors of `inner ⊆ outer` at `p`.
pub fn elementary_divisors(
    inner: &Lattice,
    outer: &Lattice,
    p: u64,
) -> Result<DivisorTuple, LatticeError> {
    if !is_prime(p) {
        return Err(LatticeError::NotPrime(p));
    }
    let t = outer.transition_from(inner)?;
    let snf = smith_normal_form(&t)?;
    DivisorTuple::new(snf.diagonal.iter().map(|d| valuation(d, p)).collect())
}

/// Length of `outer / inner` at `p`: the sum of the elementary divisors.
pub fn conductor(t: &DivisorTuple) -> u64 {
    t.values().iter().sum()
}

/// Checks `c_i(L2/L1) <= c_i(L2/L0) <= c_i(L2/L1) + n` for every `i`, for a
/// chain `L0 ⊆ L1 ⊆ L2` with `L1/L0` killed by `p^n`.
pub fn check_sandwich(
    l0: &Lattice,
    l1: &Lattice,
    l2: &Lattice,
    p: u64,
    n: u64,
) -> Result<bool, LatticeError> {
    let killed = elementary_divisors(l0, l1, p)
        .map_err(|e| LatticeError::PreconditionFailed(format!("L0 ⊆ L1: {e}")))?;
    if killed.largest() > n {
        return Err(LatticeError::PreconditionFailed(format!(
            "L1/L0 has exponent {} > {n}",
            killed.largest()
        )));
    }
    let c12 = elementary_divisors(l1, l2, p)
        .map_err(|e| LatticeError::PreconditionFailed(format!("L1 ⊆ L2: {e}")))?;
    let c02 = elementary_divisors(l0, l2, p)?;
    Ok(c12
        .values()
        .iter()
        .zip(c02.values())
        .all(|(&lo, &mid)| lo <= mid && mid <= lo + n))
}

/// For `Ω1 ⊆ Ω2 ⊆ Ω3` with `Ω1 ⊆ Ω3` of type `v = (0,..,0,a,..,a)` and
/// `Ω1 ⊆ Ω2` of type `w`, the predicted type of `Ω2 ⊆ Ω3`:
/// `(0,..,0, a - w_g, .., a - w_{n+1})`.
pub fn chain_complement(v: &DivisorTuple, w: &DivisorTuple) -> Result<DivisorTuple, LatticeError> {
    let g = v.len();
    if w.len() != g {
        return Err(LatticeError::ShapeMismatch(format!(
            "lengths {} and {}",
            g,
            w.len()
        )));
    }
    let zeros = v.values().iter().take_while(|&&x| x == 0).count();
    let a = v.largest();
    if v.values()[zeros..].iter().any(|&x| x != a) {
        return Err(LatticeError::ShapeMismatch(format!(
            "{v} is not of the form (0,..,0,a,..,a)"
        )));
    }
    if let Some(i) = (0..g).find(|&i| w.values()[i] > v.values()[i]) {
        return Err(LatticeError::ShapeMismatch(format!(
            "w_{} = {} exceeds v_{} = {}",
            i + 1,
            w.values()[i],
            i + 1,
            v.values()[i]
        )));
    }
    let mut out = vec![0; zeros];
    out.extend(w.values()[zeros..].iter().rev().map(|&x| a - x));
    DivisorTuple::new(out)
}
