//! Bounded complexes of finite free ℤ-modules.

use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

use super::matrix::IntMatrix;
use super::module::FgZModule;
use super::snf::{rank_mod_p, smith_normal_form};
use crate::error::{Error, Result};

/// `diffs[k]` maps the term in degree `min_deg + k` to the next one and is a
/// `ranks[k+1] × ranks[k]` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    min_deg: i64,
    ranks: Vec<usize>,
    diffs: Vec<IntMatrix>,
}

impl FreeComplex {
    pub fn new(min_deg: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<FreeComplex> {
        if ranks.is_empty() {
            if diffs.is_empty() {
                return Ok(FreeComplex { min_deg, ranks, diffs });
            }
            return Err(Error::InvalidComplex("differentials without terms".into()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::InvalidComplex(format!(
                "{} terms need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != ranks[k + 1] || d.cols() != ranks[k] {
                return Err(Error::InvalidComplex(format!(
                    "differential from degree {} is {}x{}, expected {}x{}",
                    min_deg + k as i64,
                    d.rows(),
                    d.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].mul(&diffs[k - 1]).is_zero() {
                return Err(Error::InvalidComplex(format!(
                    "d∘d ≠ 0 at degree {}",
                    min_deg + k as i64 - 1
                )));
            }
        }
        Ok(FreeComplex { min_deg, ranks, diffs })
    }

    pub fn zero() -> FreeComplex {
        FreeComplex { min_deg: 0, ranks: vec![], diffs: vec![] }
    }

    /// ℤ^rank concentrated in degree `deg`.
    pub fn stalk(rank: usize, deg: i64) -> FreeComplex {
        FreeComplex { min_deg: deg, ranks: vec![rank], diffs: vec![] }
    }

    /// The Koszul complex of a sequence, in degrees -r..0 (cohomological).
    pub fn koszul(seq: &[i64]) -> FreeComplex {
        let r = seq.len();
        // Term in degree -k is Λ^k ℤ^r with basis the k-subsets.
        let subsets_of = |k: usize| -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for i in start..n {
                    cur.push(i);
                    rec(i + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, r, k, &mut cur, &mut out);
            out
        };
        let bases: Vec<Vec<Vec<usize>>> = (0..=r).map(subsets_of).collect();
        let mut ranks = Vec::new();
        let mut diffs = Vec::new();
        for k in (0..=r).rev() {
            ranks.push(bases[k].len());
        }
        for k in (1..=r).rev() {
            // d: Λ^k → Λ^{k-1}, e_S ↦ Σ_i (-1)^pos a_i e_{S∖i}
            let src = &bases[k];
            let dst = &bases[k - 1];
            let mut d = IntMatrix::zeros(dst.len(), src.len());
            for (c, s) in src.iter().enumerate() {
                for (pos, &i) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&x| x != i).collect();
                    let row = dst.iter().position(|t| *t == rest).expect("face exists");
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    d[(row, c)] = BigInt::from(sign * seq[i]);
                }
            }
            diffs.push(d);
        }
        FreeComplex { min_deg: -(r as i64), ranks, diffs }
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    /// Degree of the last term (min_deg - 1 for the zero complex).
    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.ranks.len() as i64 - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn diffs(&self) -> &[IntMatrix] {
        &self.diffs
    }

    pub fn rank_at(&self, deg: i64) -> usize {
        let k = deg - self.min_deg;
        if k < 0 || k >= self.ranks.len() as i64 {
            0
        } else {
            self.ranks[k as usize]
        }
    }

    /// The differential leaving degree `deg` (possibly an empty matrix).
    pub fn diff_at(&self, deg: i64) -> IntMatrix {
        let k = deg - self.min_deg;
        if k >= 0 && (k as usize) < self.diffs.len() {
            self.diffs[k as usize].clone()
        } else {
            IntMatrix::zeros(self.rank_at(deg + 1), self.rank_at(deg))
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.min_deg..=self.max_deg())
            .map(|d| if d.rem_euclid(2) == 0 { self.rank_at(d) as i64 } else { -(self.rank_at(d) as i64) })
            .sum()
    }

    /// X[k]: the term of X[k] in degree j is the term of X in degree j + k.
    /// Differentials pick up the sign (-1)^k.
    pub fn shift(&self, k: i64) -> FreeComplex {
        let sign = if k.rem_euclid(2) == 0 { BigInt::from(1) } else { BigInt::from(-1) };
        FreeComplex {
            min_deg: self.min_deg - k,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&sign)).collect(),
        }
    }

    /// Hom(X, ℤ) as a complex: degree n holds the dual of degree -n.
    pub fn dual(&self) -> FreeComplex {
        if self.ranks.is_empty() {
            return FreeComplex::zero();
        }
        let ranks: Vec<usize> = self.ranks.iter().rev().copied().collect();
        let diffs: Vec<IntMatrix> = self.diffs.iter().rev().map(|d| d.transpose()).collect();
        FreeComplex { min_deg: -self.max_deg(), ranks, diffs }
    }

    pub fn direct_sum(&self, other: &FreeComplex) -> FreeComplex {
        if self.ranks.is_empty() {
            return other.clone();
        }
        if other.ranks.is_empty() {
            return self.clone();
        }
        let lo = self.min_deg.min(other.min_deg);
        let hi = self.max_deg().max(other.max_deg());
        let ranks: Vec<usize> = (lo..=hi).map(|d| self.rank_at(d) + other.rank_at(d)).collect();
        let diffs = (lo..hi).map(|d| self.diff_at(d).block_diag(&other.diff_at(d))).collect();
        FreeComplex { min_deg: lo, ranks, diffs }
    }

    /// H^i for every degree of the complex.
    pub fn homology(&self) -> BTreeMap<i64, FgZModule> {
        let mut out = BTreeMap::new();
        let mut incoming_rank = 0usize;
        let mut incoming_torsion: Vec<BigInt> = Vec::new();
        for (k, &n) in self.ranks.iter().enumerate() {
            let deg = self.min_deg + k as i64;
            let (out_rank, next_torsion) = match self.diffs.get(k) {
                Some(d) => {
                    let s = smith_normal_form(d);
                    let tors = s.torsion_invariants();
                    (s.rank, tors)
                }
                None => (0, vec![]),
            };
            let free = n - out_rank - incoming_rank;
            out.insert(deg, FgZModule::from_invariants(free as u32, &incoming_torsion));
            incoming_rank = out_rank;
            incoming_torsion = next_torsion;
        }
        out
    }

    /// Dimension of H^i(X ⊗ F_p) in every degree.
    pub fn homology_mod_p(&self, p: u64) -> BTreeMap<i64, usize> {
        let rk: Vec<usize> = self.diffs.iter().map(|d| rank_mod_p(d, p)).collect();
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let out = rk.get(k).copied().unwrap_or(0);
                let inc = if k > 0 { rk[k - 1] } else { 0 };
                (self.min_deg + k as i64, n - out - inc)
            })
            .collect()
    }

    /// Dimension of H^i(X ⊗ ℚ) in every degree.
    pub fn homology_rational(&self) -> BTreeMap<i64, usize> {
        let rk: Vec<usize> = self.diffs.iter().map(|d| smith_normal_form(d).rank).collect();
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let out = rk.get(k).copied().unwrap_or(0);
                let inc = if k > 0 { rk[k - 1] } else { 0 };
                (self.min_deg + k as i64, n - out - inc)
            })
            .collect()
    }

    /// Largest absolute value of a differential entry.
    pub fn max_entry(&self) -> BigInt {
        self.diffs
            .iter()
            .flat_map(|d| (0..d.rows()).flat_map(move |i| d.row(i).iter().map(|x| x.magnitude().clone())))
            .map(BigInt::from)
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_of_two() {
        let k = FreeComplex::koszul(&[2]);
        assert_eq!(k.min_deg(), -1);
        let h = k.homology();
        assert_eq!(h[&0], FgZModule::cyclic(2));
        assert!(h[&-1].is_zero());
    }

    #[test]
    fn stalk_and_zero_map() {
        assert_eq!(FreeComplex::stalk(1, 0).homology()[&0], FgZModule::free(1));
        let z = FreeComplex::new(0, vec![1, 1], vec![IntMatrix::zeros(1, 1)]).unwrap();
        let h = z.homology();
        assert_eq!(h[&0], FgZModule::free(1));
        assert_eq!(h[&1], FgZModule::free(1));
    }

    #[test]
    fn rejects_nonzero_square() {
        let d = IntMatrix::from_rows(&[vec![1]]);
        assert!(FreeComplex::new(0, vec![1, 1, 1], vec![d.clone(), d]).is_err());
    }

    #[test]
    fn koszul_two_elements() {
        let k = FreeComplex::koszul(&[4, 6]);
        let h = k.homology();
        assert_eq!(h[&0], FgZModule::cyclic(2));
        assert_eq!(h[&-1], FgZModule::cyclic(2));
        assert!(h[&-2].is_zero());
    }

    #[test]
    fn dual_is_involutive() {
        let k = FreeComplex::koszul(&[4, 6, 9]);
        assert_eq!(k.dual().dual(), k);
    }
}
