//! Elementary modules: finite direct sums of Free, Localized, Torsion and
//! Prüfer atoms, in a canonical form that decides isomorphism.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::spectrum::specz::{PrimeSet, ZSubset};
use crate::zmodules::module::FgZModule;
use crate::zmodules::primes::Prime;

/// One summand descriptor, as used for input and output.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Free { rank: u32 },
    /// ℤ[S^{-1}]^rank, the primes of `inverted` made invertible.
    Localized { inverted: PrimeSet, rank: u32 },
    /// (ℤ/p^e)^mult.
    Torsion { prime: Prime, exponent: u32, mult: u32 },
    /// ⊕_{p ∈ primes} ℤ(p^∞)^mult.
    Prufer { primes: PrimeSet, mult: u32 },
}

/// The Prüfer part as a multiplicity function on primes: `default` on all
/// primes except the exceptions.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PruferProfile {
    default: u32,
    exceptions: BTreeMap<Prime, u32>,
}

impl PruferProfile {
    pub fn get(&self, p: Prime) -> u32 {
        *self.exceptions.get(&p).unwrap_or(&self.default)
    }

    pub fn is_zero(&self) -> bool {
        self.default == 0 && self.exceptions.is_empty()
    }

    fn normalize(mut self) -> Self {
        let d = self.default;
        self.exceptions.retain(|_, v| *v != d);
        self
    }

    /// Profile of ⊕_{p ∈ set} ℤ(p^∞)^mult.
    pub fn uniform(set: &PrimeSet, mult: u32) -> Self {
        match set {
            PrimeSet::Finite(s) => PruferProfile { default: 0, exceptions: s.iter().map(|p| (*p, mult)).collect() },
            PrimeSet::Cofinite(s) => PruferProfile { default: mult, exceptions: s.iter().map(|p| (*p, 0)).collect() },
        }
        .normalize()
    }

    pub fn add(&self, other: &Self) -> Self {
        let keys: BTreeSet<Prime> = self.exceptions.keys().chain(other.exceptions.keys()).copied().collect();
        PruferProfile {
            default: self.default + other.default,
            exceptions: keys.into_iter().map(|p| (p, self.get(p) + other.get(p))).collect(),
        }
        .normalize()
    }

    pub fn scale(&self, k: u32) -> Self {
        PruferProfile {
            default: self.default * k,
            exceptions: self.exceptions.iter().map(|(p, v)| (*p, v * k)).collect(),
        }
        .normalize()
    }

    /// Multiplicities outside `set` set to zero.
    pub fn restrict(&self, set: &PrimeSet) -> Self {
        match set {
            PrimeSet::Finite(s) => PruferProfile { default: 0, exceptions: s.iter().map(|p| (*p, self.get(*p))).collect() },
            PrimeSet::Cofinite(s) => {
                let mut ex = self.exceptions.clone();
                for p in s {
                    ex.insert(*p, 0);
                }
                PruferProfile { default: self.default, exceptions: ex }
            }
        }
        .normalize()
    }

    /// The primes with positive multiplicity.
    pub fn support(&self) -> PrimeSet {
        if self.default > 0 {
            PrimeSet::Cofinite(self.exceptions.iter().filter(|(_, v)| **v == 0).map(|(p, _)| *p).collect())
        } else {
            PrimeSet::Finite(self.exceptions.iter().filter(|(_, v)| **v > 0).map(|(p, _)| *p).collect())
        }
    }

    pub fn mentioned(&self) -> impl Iterator<Item = Prime> + '_ {
        self.exceptions.keys().copied()
    }

    /// Canonical atom decomposition.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        let mut by_mult: BTreeMap<u32, BTreeSet<Prime>> = BTreeMap::new();
        if self.default > 0 {
            out.push(Atom::Prufer {
                primes: PrimeSet::Cofinite(self.exceptions.keys().copied().collect()),
                mult: self.default,
            });
        }
        for (p, v) in &self.exceptions {
            if *v > 0 {
                by_mult.entry(*v).or_default().insert(*p);
            }
        }
        for (m, ps) in by_mult {
            out.push(Atom::Prufer { primes: PrimeSet::Finite(ps), mult: m });
        }
        out
    }
}

/// A module over ℤ presented as a sum of atoms, kept in canonical form:
/// localized ranks keyed by the inverted set (the empty set being free),
/// torsion keyed by (p, e), and the Prüfer multiplicity function.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryModule {
    localized: BTreeMap<PrimeSet, u32>,
    torsion: BTreeMap<(Prime, u32), u32>,
    prufer: PruferProfile,
}

impl ElementaryModule {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: u32) -> Self {
        Self::localized(PrimeSet::empty(), rank)
    }

    pub fn localized(inverted: PrimeSet, rank: u32) -> Self {
        let mut m = Self::zero();
        m.add_localized(inverted, rank);
        m
    }

    pub fn torsion(p: Prime, e: u32, mult: u32) -> Self {
        let mut m = Self::zero();
        m.add_torsion(p, e, mult);
        m
    }

    pub fn prufer(primes: PrimeSet, mult: u32) -> Self {
        ElementaryModule { prufer: PruferProfile::uniform(&primes, mult), ..Self::zero() }
    }

    pub fn from_atoms(atoms: &[Atom]) -> Self {
        atoms.iter().fold(Self::zero(), |acc, a| acc.direct_sum(&Self::from_atom(a)))
    }

    pub fn from_atom(a: &Atom) -> Self {
        match a {
            Atom::Free { rank } => Self::free(*rank),
            Atom::Localized { inverted, rank } => Self::localized(inverted.clone(), *rank),
            Atom::Torsion { prime, exponent, mult } => Self::torsion(*prime, *exponent, *mult),
            Atom::Prufer { primes, mult } => Self::prufer(primes.clone(), *mult),
        }
    }

    pub fn from_fg(m: &FgZModule) -> Self {
        let mut out = Self::free(m.rank);
        for (&(p, e), &k) in &m.torsion {
            out.add_torsion(p, e, k);
        }
        out
    }

    fn add_localized(&mut self, inverted: PrimeSet, rank: u32) {
        if rank > 0 {
            *self.localized.entry(inverted).or_insert(0) += rank;
        }
    }

    fn add_torsion(&mut self, p: Prime, e: u32, mult: u32) {
        if e > 0 && mult > 0 {
            *self.torsion.entry((p, e)).or_insert(0) += mult;
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (s, r) in &other.localized {
            m.add_localized(s.clone(), *r);
        }
        for (&(p, e), &k) in &other.torsion {
            m.add_torsion(p, e, k);
        }
        m.prufer = m.prufer.add(&other.prufer);
        m
    }

    /// M^k.
    pub fn power(&self, k: u32) -> Self {
        ElementaryModule {
            localized: self.localized.iter().filter(|_| k > 0).map(|(s, r)| (s.clone(), r * k)).collect(),
            torsion: self.torsion.iter().filter(|_| k > 0).map(|(pe, m)| (*pe, m * k)).collect(),
            prufer: self.prufer.scale(k),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.localized.is_empty() && self.torsion.is_empty() && self.prufer.is_zero()
    }

    /// Finitely generated iff only free and finite torsion atoms occur.
    pub fn is_fg(&self) -> bool {
        self.prufer.is_zero() && self.localized.keys().all(PrimeSet::is_empty)
    }

    /// The non-finitely-generated atoms.
    pub fn non_fg_atoms(&self) -> Vec<Atom> {
        self.atoms()
            .into_iter()
            .filter(|a| matches!(a, Atom::Localized { .. } | Atom::Prufer { .. }))
            .collect()
    }

    /// Torsion-free rank (free plus localized summands).
    pub fn rank(&self) -> u32 {
        self.localized.values().sum()
    }

    pub fn localized_parts(&self) -> &BTreeMap<PrimeSet, u32> {
        &self.localized
    }

    pub fn torsion_parts(&self) -> &BTreeMap<(Prime, u32), u32> {
        &self.torsion
    }

    pub fn prufer_profile(&self) -> &PruferProfile {
        &self.prufer
    }

    /// The finite p-primary part as (exponent, multiplicity).
    pub fn p_part(&self, p: Prime) -> Vec<(u32, u32)> {
        self.torsion.iter().filter(|((q, _), _)| *q == p).map(|(&(_, e), &m)| (e, m)).collect()
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty() || !self.prufer.is_zero()
    }

    /// The finitely generated module, when the module is one.
    pub fn to_fg(&self) -> Option<FgZModule> {
        if !self.is_fg() {
            return None;
        }
        Some(FgZModule { rank: self.rank(), torsion: self.torsion.clone() })
    }

    /// The torsion-free part (free and localized atoms).
    pub fn torsion_free_part(&self) -> Self {
        ElementaryModule { localized: self.localized.clone(), ..Self::zero() }
    }

    /// The finite torsion atoms.
    pub fn finite_torsion_part(&self) -> Self {
        ElementaryModule { torsion: self.torsion.clone(), ..Self::zero() }
    }

    pub fn support(&self) -> ZSubset {
        if self.rank() > 0 {
            return ZSubset::Whole;
        }
        let finite = PrimeSet::finite(self.torsion.keys().map(|(p, _)| *p));
        ZSubset::Maximals(finite.union(&self.prufer.support()))
    }

    /// Primes named anywhere in the descriptor.
    pub fn mentioned_primes(&self) -> BTreeSet<Prime> {
        let mut s: BTreeSet<Prime> = self.torsion.keys().map(|(p, _)| *p).collect();
        for set in self.localized.keys() {
            s.extend(set.mentioned());
        }
        s.extend(self.prufer.mentioned());
        s
    }

    /// Applies one function per kind of summand and sums the results.
    pub fn map_parts(
        &self,
        localized: impl Fn(&PrimeSet, u32) -> ElementaryModule,
        torsion: impl Fn(Prime, u32, u32) -> ElementaryModule,
        prufer: impl Fn(&PruferProfile) -> ElementaryModule,
    ) -> ElementaryModule {
        let mut out = prufer(&self.prufer);
        for (s, r) in &self.localized {
            out = out.direct_sum(&localized(s, *r));
        }
        for (&(p, e), &m) in &self.torsion {
            out = out.direct_sum(&torsion(p, e, m));
        }
        out
    }

    pub fn localized_ref(inverted: &PrimeSet, rank: u32) -> Self {
        Self::localized(inverted.clone(), rank)
    }

    pub fn with_prufer(profile: PruferProfile) -> Self {
        ElementaryModule { prufer: profile, ..Self::zero() }
    }

    /// Canonical atom list.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for (s, r) in &self.localized {
            out.push(if s.is_empty() {
                Atom::Free { rank: *r }
            } else {
                Atom::Localized { inverted: s.clone(), rank: *r }
            });
        }
        for (&(p, e), &m) in &self.torsion {
            out.push(Atom::Torsion { prime: p, exponent: e, mult: m });
        }
        out.extend(self.prufer.atoms());
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = |base: String, k: u32| if k == 1 { base } else { format!("({base})^{k}") };
        match self {
            Atom::Free { rank } => write!(f, "{}", pow("Z".into(), *rank)),
            Atom::Localized { inverted, rank } => write!(f, "{}", pow(format!("Z[1/{inverted}]"), *rank)),
            Atom::Torsion { prime, exponent, mult } => {
                let base = if *exponent == 1 { format!("Z/{prime}") } else { format!("Z/{prime}^{exponent}") };
                write!(f, "{}", pow(base, *mult))
            }
            Atom::Prufer { primes, mult } => write!(f, "{}", pow(format!("Prufer{primes}"), *mult)),
        }
    }
}

impl fmt::Display for ElementaryModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms = self.atoms();
        if atoms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn localized_empty_is_free() {
        assert_eq!(ElementaryModule::localized(PrimeSet::empty(), 2), ElementaryModule::free(2));
        assert!(ElementaryModule::free(2).is_fg());
        assert!(!ElementaryModule::localized(PrimeSet::single(p(2)), 1).is_fg());
    }

    #[test]
    fn prufer_profiles_add_canonically() {
        let a = ElementaryModule::prufer(PrimeSet::all(), 1);
        let b = ElementaryModule::prufer(PrimeSet::single(p(2)), 1);
        let sum = a.direct_sum(&b);
        assert_eq!(sum.prufer_profile().get(p(2)), 2);
        assert_eq!(sum.prufer_profile().get(p(3)), 1);
        let again = ElementaryModule::from_atoms(&sum.atoms());
        assert_eq!(again, sum);
        assert_eq!(ElementaryModule::prufer(PrimeSet::empty(), 3), ElementaryModule::zero());
    }

    #[test]
    fn support_of_parts() {
        let m = ElementaryModule::torsion(p(3), 2, 1).direct_sum(&ElementaryModule::prufer(PrimeSet::single(p(5)), 1));
        assert_eq!(m.support(), ZSubset::primes(&[3, 5]).unwrap());
        assert_eq!(ElementaryModule::free(1).support(), ZSubset::Whole);
    }

    #[test]
    fn restriction() {
        let pr = PruferProfile::uniform(&PrimeSet::cofinite([p(3)]), 2);
        assert_eq!(pr.restrict(&PrimeSet::finite([p(2), p(3)])).support(), PrimeSet::single(p(2)));
        assert_eq!(pr.restrict(&PrimeSet::cofinite([p(2)])).support(), PrimeSet::cofinite([p(2), p(3)]));
    }
}
