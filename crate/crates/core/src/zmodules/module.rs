//! Finitely generated abelian groups in normal form.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use std::collections::BTreeMap;
use std::fmt;

use super::primes::{factor, Prime};
use crate::spectrum::specz::{PrimeSet, ZSubset};

/// rank + primary torsion, `torsion` keyed by (p, e) with multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgZModule {
    pub rank: u32,
    pub torsion: BTreeMap<(Prime, u32), u32>,
}

impl FgZModule {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: u32) -> Self {
        FgZModule { rank, torsion: BTreeMap::new() }
    }

    /// ℤ/n for n ≥ 1.
    pub fn cyclic(n: u64) -> Self {
        let mut m = Self::zero();
        for (p, e) in factor(n) {
            m.add_torsion(p, e, 1);
        }
        m
    }

    pub fn add_torsion(&mut self, p: Prime, e: u32, mult: u32) {
        if e > 0 && mult > 0 {
            *self.torsion.entry((p, e)).or_insert(0) += mult;
        }
    }

    /// Module ℤ^rank ⊕ ⊕ ℤ/d_i from invariant factors (non-zero, units ignored).
    pub fn from_invariants(rank: u32, invariants: &[BigInt]) -> Self {
        let mut m = Self::free(rank);
        for d in invariants {
            let d = d.abs();
            if d.is_one() {
                continue;
            }
            let n = d.to_u64().expect("torsion invariant exceeds 64 bits");
            for (p, e) in factor(n) {
                m.add_torsion(p, e, 1);
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.rank == 0
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = self.clone();
        m.rank += other.rank;
        for (&(p, e), &k) in &other.torsion {
            m.add_torsion(p, e, k);
        }
        m
    }

    pub fn torsion_part(&self) -> Self {
        FgZModule { rank: 0, torsion: self.torsion.clone() }
    }

    pub fn torsion_primes(&self) -> Vec<Prime> {
        let mut v: Vec<Prime> = self.torsion.keys().map(|(p, _)| *p).collect();
        v.dedup();
        v
    }

    /// The p-primary part as a sorted list of exponents with multiplicity.
    pub fn p_part(&self, p: Prime) -> Vec<(u32, u32)> {
        self.torsion.iter().filter(|((q, _), _)| *q == p).map(|(&(_, e), &m)| (e, m)).collect()
    }

    /// Order of the torsion subgroup, if it fits.
    pub fn torsion_order(&self) -> Option<u128> {
        let mut n: u128 = 1;
        for (&(p, e), &m) in &self.torsion {
            let pe = (p.get() as u128).checked_pow(e)?;
            n = n.checked_mul(pe.checked_pow(m)?)?;
        }
        Some(n)
    }

    /// supp(M): Whole when rank > 0, else the finite set of torsion primes.
    pub fn support(&self) -> ZSubset {
        if self.rank > 0 {
            ZSubset::Whole
        } else {
            ZSubset::Maximals(PrimeSet::finite(self.torsion_primes()))
        }
    }

    /// Associated primes: torsion primes, plus the generic point when rank > 0.
    /// Returns (generic, maximal primes).
    pub fn ass(&self) -> (bool, Vec<Prime>) {
        (self.rank > 0, self.torsion_primes())
    }
}

impl fmt::Display for FgZModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        for (&(p, e), &m) in &self.torsion {
            let base = if e == 1 { format!("Z/{p}") } else { format!("Z/{p}^{e}") };
            parts.push(if m == 1 { base } else { format!("({base})^{m}") });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn invariants_normalize() {
        let a = FgZModule::from_invariants(0, &[BigInt::from(12)]);
        let b = FgZModule::from_invariants(0, &[BigInt::from(4), BigInt::from(3)]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "Z/2^2 + Z/3");
    }

    #[test]
    fn supports() {
        let m = FgZModule::cyclic(4).direct_sum(&FgZModule::cyclic(3));
        assert_eq!(m.support(), ZSubset::Maximals(PrimeSet::finite([p(2), p(3)])));
        assert_eq!(FgZModule::free(1).direct_sum(&FgZModule::cyclic(2)).support(), ZSubset::Whole);
        assert_eq!(FgZModule::zero().support(), ZSubset::empty());
    }
}
