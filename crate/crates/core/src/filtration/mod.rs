//! Sp-filtrations: decreasing, eventually constant maps from ℤ to
//! specialization-stable subsets, stored on a finite window.

pub mod census;
pub mod dual;

use crate::error::{Error, Result};
use crate::spectrum::{FinPoset, Spectrum};

pub use census::{enumerate_filtrations, CensusFilter};
pub use dual::{cm_filtration, dual_filtration};

/// φ(j) = `tail` for j < start, `levels[j - start]` on the window and `head`
/// beyond it. The window is minimal: its first level differs from the tail and
/// its last level differs from the head. Constant filtrations have an empty
/// window starting at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SpFiltration<S: Spectrum> {
    spectrum: S,
    start: i64,
    tail: S::Subset,
    levels: Vec<S::Subset>,
    head: S::Subset,
}

/// Outcome of a Cousin check. Witnesses are (j, q, p) with p an immediate
/// generalization of q violating the condition between φ(j) and φ(j-1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CousinReport<P> {
    pub holds: bool,
    pub witnesses: Vec<(i64, P, P)>,
}

impl<P> CousinReport<P> {
    fn from_witnesses(witnesses: Vec<(i64, P, P)>) -> Self {
        CousinReport { holds: witnesses.is_empty(), witnesses }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizationReport<Z> {
    /// φ(j) = φ(j0) for every j ≤ j0.
    pub j0: i64,
    pub top: Z,
    pub top_open_closed: bool,
    /// ∩ φ(j), the value for large j.
    pub bottom: Z,
    pub bottom_open_closed: bool,
    pub separated: bool,
    pub eventually_empty: bool,
    pub constant: bool,
    pub weak_cousin: bool,
    /// On a connected spectrum, for a nonconstant weak-Cousin filtration:
    /// whether it starts at the whole spectrum and ends empty.
    pub discreteness: Option<bool>,
}

impl<S: Spectrum> SpFiltration<S> {
    /// Validates and canonicalizes: `tail` for j < start, `levels` from
    /// `start` on, `head` afterwards.
    pub fn new(spectrum: S, tail: S::Subset, start: i64, levels: Vec<S::Subset>, head: S::Subset) -> Result<Self> {
        spectrum.validate_subset(&tail)?;
        spectrum.validate_subset(&head)?;
        for l in &levels {
            spectrum.validate_subset(l)?;
        }
        let mut prev = &tail;
        for (k, l) in levels.iter().chain(std::iter::once(&head)).enumerate() {
            if !spectrum.is_subset(l, prev) {
                return Err(Error::NotDecreasing(start + k as i64));
            }
            prev = l;
        }
        let mut levels = levels;
        let mut start = start;
        let lead = levels.iter().take_while(|l| **l == tail).count();
        levels.drain(..lead);
        start += lead as i64;
        while levels.last() == Some(&head) {
            levels.pop();
        }
        if levels.is_empty() && tail == head {
            start = 0;
        }
        Ok(SpFiltration { spectrum, start, tail, levels, head })
    }

    pub fn constant(spectrum: S, z: S::Subset) -> Result<Self> {
        Self::new(spectrum, z.clone(), 0, vec![], z)
    }

    /// φ(j) = Whole for j ≤ n, empty afterwards: the aisle D^{≤n}.
    pub fn standard(spectrum: S, n: i64) -> Self {
        let whole = spectrum.whole();
        let empty = spectrum.empty();
        Self::new(spectrum, whole, n + 1, vec![], empty).expect("standard filtration is valid")
    }

    pub fn spectrum(&self) -> &S {
        &self.spectrum
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last degree of the window (start - 1 when the window is empty).
    pub fn end(&self) -> i64 {
        self.start + self.levels.len() as i64 - 1
    }

    pub fn tail(&self) -> &S::Subset {
        &self.tail
    }

    pub fn head(&self) -> &S::Subset {
        &self.head
    }

    pub fn levels(&self) -> &[S::Subset] {
        &self.levels
    }

    pub fn value(&self, j: i64) -> &S::Subset {
        if j < self.start {
            &self.tail
        } else if j > self.end() {
            &self.head
        } else {
            &self.levels[(j - self.start) as usize]
        }
    }

    pub fn is_constant(&self) -> bool {
        self.levels.is_empty() && self.tail == self.head
    }

    /// Finite: constant, or empty from some degree on.
    pub fn is_finite(&self) -> bool {
        self.is_constant() || self.head == self.spectrum.empty()
    }

    /// Length of the interval on which a finite filtration is determined.
    pub fn length(&self) -> usize {
        if self.is_constant() {
            0
        } else {
            self.levels.len()
        }
    }

    /// The degrees i with their values φ(i), from the last tail degree to the
    /// end of the window, for a nonconstant finite filtration.
    pub fn steps(&self) -> Result<Vec<(i64, S::Subset)>> {
        if !self.is_finite() {
            return Err(Error::NonFinite(format!("head {}", self.spectrum.describe_subset(&self.head))));
        }
        if self.is_constant() {
            return Err(Error::NonFinite("constant filtrations have no steps".into()));
        }
        let mut out = vec![(self.start - 1, self.tail.clone())];
        out.extend(self.levels.iter().enumerate().map(|(k, l)| (self.start + k as i64, l.clone())));
        Ok(out)
    }

    /// Every distinct value, for representative selection.
    pub fn subsets(&self) -> Vec<&S::Subset> {
        std::iter::once(&self.tail).chain(self.levels.iter()).chain(std::iter::once(&self.head)).collect()
    }

    /// Degrees at which the condition between φ(j) and φ(j-1) needs checking.
    fn check_range(&self) -> std::ops::RangeInclusive<i64> {
        if self.is_constant() {
            0..=0
        } else {
            self.start - 1..=self.end() + 1
        }
    }

    pub fn weak_cousin(&self) -> CousinReport<S::Point> {
        let sp = &self.spectrum;
        let reps = sp.representatives(&self.subsets(), &[]);
        let mut w = Vec::new();
        for j in self.check_range() {
            let (cur, prev) = (self.value(j), self.value(j - 1));
            for q in reps.iter().filter(|q| sp.contains(cur, q)) {
                for p in sp.immediate_generalizations(q).expect("representative point") {
                    if !sp.contains(prev, &p) {
                        w.push((j, q.clone(), p));
                    }
                }
            }
        }
        CousinReport::from_witnesses(w)
    }

    /// Weak Cousin plus its converse: p ∈ φ(j-1) forces every immediate
    /// specialization q of p into φ(j).
    pub fn strong_cousin(&self) -> CousinReport<S::Point> {
        let sp = &self.spectrum;
        let reps = sp.representatives(&self.subsets(), &[]);
        let mut w = self.weak_cousin().witnesses;
        for j in self.check_range() {
            let (cur, prev) = (self.value(j), self.value(j - 1));
            for p in reps.iter().filter(|p| sp.contains(prev, p)) {
                for q in sp.immediate_specializations(p, &reps) {
                    if !sp.contains(cur, &q) {
                        w.push((j, q, p.clone()));
                    }
                }
            }
        }
        CousinReport::from_witnesses(w)
    }

    /// φ_q(i) = φ(i) ∩ {generalizations of q}, on the local poset.
    pub fn localize(&self, q: &S::Point) -> Result<SpFiltration<FinPoset>> {
        let (local, emb) = self.spectrum.local_spectrum(q)?;
        let restrict = |z: &S::Subset| -> crate::spectrum::poset::PointSet {
            (0..emb.len()).filter(|&i| self.spectrum.contains(z, &emb[i])).collect()
        };
        let levels = self.levels.iter().map(restrict).collect();
        SpFiltration::new(local, restrict(&self.tail), self.start, levels, restrict(&self.head))
    }

    /// φ(i - k): the filtration of the aisle shifted by k.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        if !out.is_constant() {
            out.start += k;
        }
        out
    }

    /// Pointwise intersection.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        if self.spectrum != other.spectrum {
            return Err(Error::SpectrumMismatch);
        }
        let sp = &self.spectrum;
        let (a, b) = match (self.is_constant(), other.is_constant()) {
            (true, true) => (0, -1),
            (true, false) => (other.start, other.end()),
            (false, true) => (self.start, self.end()),
            (false, false) => (self.start.min(other.start), self.end().max(other.end())),
        };
        let levels = (a..=b).map(|j| sp.intersection(self.value(j), other.value(j))).collect();
        Self::new(
            sp.clone(),
            sp.intersection(&self.tail, &other.tail),
            a,
            levels,
            sp.intersection(&self.head, &other.head),
        )
    }

    pub fn stabilization_report(&self) -> StabilizationReport<S::Subset> {
        let sp = &self.spectrum;
        let constant = self.is_constant();
        let weak = self.weak_cousin().holds;
        let eventually_empty = self.head == sp.empty();
        let discreteness = (weak && !constant && sp.is_connected())
            .then(|| self.tail == sp.whole() && eventually_empty);
        StabilizationReport {
            j0: if constant { 0 } else { self.start - 1 },
            top: self.tail.clone(),
            top_open_closed: sp.is_open_closed(&self.tail).is_ok(),
            bottom: self.head.clone(),
            bottom_open_closed: sp.is_open_closed(&self.head).is_ok(),
            separated: eventually_empty,
            eventually_empty,
            constant,
            weak_cousin: weak,
            discreteness,
        }
    }

    /// For a constant filtration with value Z: Z and whether it is open and closed.
    pub fn bousfield_class(&self) -> Option<(S::Subset, bool)> {
        self.is_constant().then(|| (self.tail.clone(), self.spectrum.is_open_closed(&self.tail).is_ok()))
    }

    pub fn describe(&self) -> String {
        let sp = &self.spectrum;
        if self.is_constant() {
            return format!("const {}", sp.describe_subset(&self.tail));
        }
        let mut parts = vec![format!("{} for j<{}", sp.describe_subset(&self.tail), self.start)];
        for (k, l) in self.levels.iter().enumerate() {
            parts.push(format!("{}@{}", sp.describe_subset(l), self.start + k as i64));
        }
        parts.push(format!("{} for j>{}", sp.describe_subset(&self.head), self.end()));
        parts.join(", ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::specz::{PrimeSet, SpecZ, ZPoint, ZSubset};
    use crate::zmodules::Prime;

    fn pz(ps: &[u64]) -> ZSubset {
        ZSubset::primes(ps).unwrap()
    }

    fn zf(tail: ZSubset, start: i64, levels: Vec<ZSubset>, head: ZSubset) -> SpFiltration<SpecZ> {
        SpFiltration::new(SpecZ, tail, start, levels, head).unwrap()
    }

    #[test]
    fn canonicalization() {
        let f = zf(ZSubset::Whole, -2, vec![ZSubset::Whole, ZSubset::Whole, ZSubset::empty()], ZSubset::empty());
        assert_eq!(f, SpFiltration::standard(SpecZ, -1));
        assert_eq!(f.start(), 0);
        assert!(f.levels().is_empty());
        let c = SpFiltration::constant(SpecZ, ZSubset::Whole).unwrap();
        assert!(c.is_constant());
        assert_eq!(c.length(), 0);
    }

    #[test]
    fn not_decreasing() {
        let e = SpFiltration::new(SpecZ, ZSubset::Whole, 0, vec![pz(&[2]), pz(&[2, 3])], ZSubset::empty());
        assert_eq!(e.unwrap_err(), Error::NotDecreasing(1));
    }

    #[test]
    fn weak_cousin_examples() {
        let ok = zf(ZSubset::Whole, 1, vec![pz(&[2, 3])], ZSubset::empty());
        assert!(ok.weak_cousin().holds);
        let bad = zf(ZSubset::Whole, 0, vec![pz(&[2]), pz(&[2])], ZSubset::empty());
        let r = bad.weak_cousin();
        assert!(!r.holds);
        let two = ZPoint::Maximal(Prime::new(2).unwrap());
        assert_eq!(r.witnesses, vec![(1, two, ZPoint::Generic)]);
    }

    #[test]
    fn localize_examples() {
        let f = zf(ZSubset::Whole, 1, vec![pz(&[3])], ZSubset::empty());
        let two = ZPoint::Maximal(Prime::new(2).unwrap());
        let l = f.localize(&two).unwrap();
        assert_eq!(l.value(1), &Default::default());
        assert_eq!(l.value(0).len(), 2);
        let c = SpFiltration::constant(SpecZ, ZSubset::Whole).unwrap().localize(&two).unwrap();
        assert!(c.is_constant());
        assert_eq!(c.tail().len(), 2);
    }

    #[test]
    fn meet_examples() {
        let can = SpFiltration::standard(SpecZ, 0);
        assert_eq!(can.meet(&can).unwrap(), can);
        let sh = can.shift(-1);
        assert_eq!(can.meet(&sh).unwrap(), sh);
        let a = zf(pz(&[2]), 0, vec![], ZSubset::empty());
        let b = zf(pz(&[3]), 0, vec![], ZSubset::empty());
        let m = a.meet(&b).unwrap();
        assert_eq!(m.value(-1), &ZSubset::empty());
    }

    #[test]
    fn stabilization_examples() {
        let f = zf(ZSubset::Whole, 1, vec![pz(&[2, 3])], ZSubset::empty());
        let r = f.stabilization_report();
        assert_eq!(r.discreteness, Some(true));
        assert_eq!(r.j0, 0);
        let c = SpFiltration::constant(SpecZ, pz(&[2])).unwrap();
        let r = c.stabilization_report();
        assert!(!r.bottom_open_closed && !r.weak_cousin);
        let w = SpFiltration::constant(SpecZ, ZSubset::Whole).unwrap().stabilization_report();
        assert!(w.bottom_open_closed && !w.separated);
    }

    #[test]
    fn bousfield_examples() {
        let w = SpFiltration::constant(SpecZ, ZSubset::Whole).unwrap();
        assert_eq!(w.bousfield_class(), Some((ZSubset::Whole, true)));
        let t = SpFiltration::constant(SpecZ, pz(&[2])).unwrap();
        assert_eq!(t.bousfield_class(), Some((pz(&[2]), false)));
        assert_eq!(SpFiltration::standard(SpecZ, 0).bousfield_class(), None);
    }

    #[test]
    fn cofinite_levels() {
        let f = zf(ZSubset::Whole, 0, vec![ZSubset::Maximals(PrimeSet::all())], ZSubset::empty());
        assert!(f.strong_cousin().holds);
    }
}
