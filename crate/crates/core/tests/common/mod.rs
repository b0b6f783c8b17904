//! Independent oracles, recomputed from vertex labels and edge lists only.
#![allow(dead_code)]

use std::collections::BTreeMap;

use jumpcalc::graph::ReductionGraph;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

pub struct Plain {
    pub mult: Vec<i64>,
    pub genus: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
}

impl Plain {
    pub fn of(g: &ReductionGraph) -> Self {
        let raw = g.to_raw();
        let index: BTreeMap<&str, usize> = raw
            .vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (v.id.as_str(), k))
            .collect();
        Plain {
            mult: raw.vertices.iter().map(|v| v.multiplicity).collect(),
            genus: raw.vertices.iter().map(|v| v.genus).collect(),
            edges: raw
                .edges
                .iter()
                .map(|(a, b)| (index[a.as_str()], index[b.as_str()]))
                .collect(),
        }
    }

    pub fn degree(&self, k: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == k || b == k).count()
    }

    /// `E_k^2 = -(1/N_k) sum over edges at k of N_neighbour`.
    pub fn self_intersection(&self, k: usize) -> i64 {
        let s: i64 = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (a == k, b == k) {
                (true, _) => Some(self.mult[b]),
                (_, true) => Some(self.mult[a]),
                _ => None,
            })
            .sum();
        assert_eq!(s % self.mult[k], 0, "fiber is not numerically trivial");
        -s / self.mult[k]
    }

    /// Adjunction: `2g - 2 = K.F = sum N_k (2 g_k - 2 - E_k^2)`.
    pub fn genus_by_adjunction(&self) -> i64 {
        let twice: i64 = (0..self.mult.len())
            .map(|k| self.mult[k] * (2 * self.genus[k] - 2 - self.self_intersection(k)))
            .sum();
        assert_eq!(twice % 2, 0);
        twice / 2 + 1
    }

    /// `b_1` of the subgraph induced on `keep`.
    pub fn betti(&self, keep: &[bool]) -> i64 {
        let mut parent: Vec<usize> = (0..self.mult.len()).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut e = 0;
        let mut comps = keep.iter().filter(|&&b| b).count() as i64;
        for &(a, b) in &self.edges {
            if keep[a] && keep[b] {
                e += 1;
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    comps -= 1;
                }
            }
        }
        e - keep.iter().filter(|&&b| b).count() as i64 + comps
    }

    pub fn unipotent_rank(&self) -> i64 {
        let all = vec![true; self.mult.len()];
        self.genus_by_adjunction() - self.genus.iter().sum::<i64>() - self.betti(&all)
    }

    pub fn principal(&self) -> Vec<usize> {
        (0..self.mult.len())
            .filter(|&k| self.genus[k] >= 1 || self.degree(k) >= 3)
            .collect()
    }

    pub fn principal_lcm(&self) -> i64 {
        self.principal().iter().fold(1, |acc, &k| acc.lcm(&self.mult[k]))
    }

    /// Components whose multiplicity makes `x` an integral coefficient.
    pub fn index_set(&self, x: Rational64) -> Vec<bool> {
        self.mult
            .iter()
            .map(|&n| (x * Rational64::from_integer(n)).is_integer())
            .collect()
    }

    /// `b_1(Gamma_x) + sum of genera over the index set of x`.
    pub fn lower_bound(&self, x: Rational64) -> i64 {
        let keep = self.index_set(x);
        let genera: i64 = (0..keep.len()).filter(|&k| keep[k]).map(|k| self.genus[k]).sum();
        self.betti(&keep) + genera
    }
}

pub fn denominator_lcm(levels: impl IntoIterator<Item = Rational64>) -> i64 {
    levels.into_iter().fold(1, |acc, x| acc.lcm(x.denom()))
}

/// Fraction-free elimination, kept separate from the library's determinant.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
