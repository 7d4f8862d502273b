//! Objects of D(ℤ) as graded elementary modules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::elementary::{Atom, ElementaryModule};
use crate::error::{Error, Result};
use crate::spectrum::specz::{PrimeSet, ZPoint, ZSubset};
use crate::zmodules::{FgZModule, FreeComplex, Prime};

/// An extension 0 → sub → E → quot → 0 in one degree whose middle term is not
/// determined by the engine's rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCertificate {
    pub degree: i64,
    pub sub: ElementaryModule,
    pub quot: ElementaryModule,
    pub resolved: Option<ElementaryModule>,
}

/// ⊕_j H^j[-j]: `degrees[j]` is the cohomology in degree j. Over ℤ every
/// complex is isomorphic to the sum of its shifted cohomology modules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalObject {
    degrees: BTreeMap<i64, ElementaryModule>,
    certificates: Vec<ExtensionCertificate>,
}

impl FormalObject {
    pub fn zero() -> Self {
        Self::default()
    }

    /// M placed in degree `deg`, i.e. M[-deg].
    pub fn stalk(m: ElementaryModule, deg: i64) -> Self {
        let mut x = Self::zero();
        x.add(deg, &m);
        x
    }

    pub fn from_degrees(parts: impl IntoIterator<Item = (i64, ElementaryModule)>) -> Self {
        let mut x = Self::zero();
        for (j, m) in parts {
            x.add(j, &m);
        }
        x
    }

    pub fn from_homology(h: &BTreeMap<i64, FgZModule>) -> Self {
        Self::from_degrees(h.iter().map(|(j, m)| (*j, ElementaryModule::from_fg(m))))
    }

    pub fn from_free_complex(x: &FreeComplex) -> Self {
        Self::from_homology(&x.homology())
    }

    pub fn with_certificate(mut self, c: ExtensionCertificate) -> Self {
        self.certificates.push(c);
        self
    }

    pub fn certificates(&self) -> &[ExtensionCertificate] {
        &self.certificates
    }

    /// Fails if some extension is unresolved.
    pub fn check_determinate(&self) -> Result<()> {
        match self.certificates.iter().find(|c| c.resolved.is_none()) {
            Some(c) => Err(Error::UnresolvedCertificate(c.degree)),
            None => Ok(()),
        }
    }

    pub fn add(&mut self, deg: i64, m: &ElementaryModule) {
        if m.is_zero() {
            return;
        }
        let slot = self.degrees.entry(deg).or_default();
        *slot = slot.direct_sum(m);
    }

    pub fn get(&self, deg: i64) -> ElementaryModule {
        self.degrees.get(&deg).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &ElementaryModule)> {
        self.degrees.iter().map(|(j, m)| (*j, m))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.degrees.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty() && self.certificates.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for (j, m) in other.iter() {
            x.add(j, m);
        }
        x.certificates.extend(other.certificates.iter().cloned());
        x
    }

    /// X[k]: the module in degree j moves to degree j - k.
    pub fn shift(&self, k: i64) -> Self {
        FormalObject {
            degrees: self.degrees.iter().map(|(j, m)| (j - k, m.clone())).collect(),
            certificates: self
                .certificates
                .iter()
                .map(|c| ExtensionCertificate { degree: c.degree - k, ..c.clone() })
                .collect(),
        }
    }

    /// Applies `f` to each degree's module.
    pub fn map(&self, f: impl Fn(&ElementaryModule) -> ElementaryModule) -> Self {
        Self::from_degrees(self.iter().map(|(j, m)| (j, f(m))))
    }

    /// Keeps degrees in [lo, hi].
    pub fn restrict_degrees(&self, lo: i64, hi: i64) -> Self {
        Self::from_degrees(self.iter().filter(|(j, _)| (lo..=hi).contains(j)).map(|(j, m)| (j, m.clone())))
    }

    pub fn is_fg(&self) -> bool {
        self.degrees.values().all(ElementaryModule::is_fg)
    }

    pub fn non_fg_atoms(&self) -> Vec<(i64, Atom)> {
        self.iter().flat_map(|(j, m)| m.non_fg_atoms().into_iter().map(move |a| (j, a))).collect()
    }

    pub fn support(&self, deg: i64) -> ZSubset {
        self.get(deg).support()
    }

    /// Whether all cohomology sits in degrees within [lo, hi].
    pub fn concentrated_in(&self, lo: i64, hi: i64) -> bool {
        self.degrees().all(|j| lo <= j && j <= hi)
    }

    pub fn mentioned_primes(&self) -> BTreeSet<Prime> {
        self.degrees.values().flat_map(|m| m.mentioned_primes()).collect()
    }

    pub fn mentioned_points(&self) -> Vec<ZPoint> {
        self.mentioned_primes().into_iter().map(ZPoint::Maximal).collect()
    }

    /// The finitely generated cohomology, when every degree is finitely generated.
    pub fn to_fg(&self) -> Option<BTreeMap<i64, FgZModule>> {
        self.iter().map(|(j, m)| m.to_fg().map(|f| (j, f))).collect()
    }

    /// X ⊗ ℤ_(q) as an object (for q generic: X ⊗ ℚ).
    pub fn localize(&self, q: &ZPoint) -> Self {
        let keep = match q {
            ZPoint::Generic => PrimeSet::all(),
            ZPoint::Maximal(p) => PrimeSet::cofinite([*p]),
        };
        super::functors::rq(&ZSubset::Maximals(keep), self).expect("localization of a split object")
    }
}

impl fmt::Display for FormalObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degrees.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(j, m)| format!("{j}: {m}")).collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_complexes() {
        let k = FreeComplex::koszul(&[2]);
        let x = FormalObject::from_free_complex(&k);
        assert_eq!(x, FormalObject::stalk(ElementaryModule::torsion(Prime::new(2).unwrap(), 1, 1), 0));
        let s = FormalObject::from_free_complex(&FreeComplex::stalk(1, 0));
        assert_eq!(s, FormalObject::stalk(ElementaryModule::free(1), 0));
        let id = FreeComplex::new(0, vec![1, 1], vec![crate::IntMatrix::identity(1)]).unwrap();
        assert!(FormalObject::from_free_complex(&id).is_zero());
    }

    #[test]
    fn shift_moves_degrees() {
        let x = FormalObject::stalk(ElementaryModule::free(1), 0);
        assert_eq!(x.shift(1).min_degree(), Some(-1));
        assert_eq!(x.shift(-2).min_degree(), Some(2));
    }
}
