//! The spectrum of ℤ: the generic point 0 and one closed point (p) per prime.

use std::collections::BTreeSet;
use std::fmt;

use super::{FinPoset, Spectrum};
use crate::error::{Error, Result};
use crate::zmodules::primes::Prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ZPoint {
    Generic,
    Maximal(Prime),
}

impl fmt::Display for ZPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZPoint::Generic => write!(f, "0"),
            ZPoint::Maximal(p) => write!(f, "({p})"),
        }
    }
}

impl std::str::FromStr for ZPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<ZPoint> {
        let t = s.trim();
        if t == "0" || t.eq_ignore_ascii_case("generic") {
            return Ok(ZPoint::Generic);
        }
        let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
        let n: u64 = inner.trim().parse().map_err(|_| Error::UnknownPoint(s.to_string()))?;
        Ok(ZPoint::Maximal(Prime::new(n)?))
    }
}

/// A finite or cofinite set of primes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimeSet {
    Finite(BTreeSet<Prime>),
    /// All primes except the listed ones.
    Cofinite(BTreeSet<Prime>),
}

impl PrimeSet {
    pub fn empty() -> Self {
        PrimeSet::Finite(BTreeSet::new())
    }

    pub fn all() -> Self {
        PrimeSet::Cofinite(BTreeSet::new())
    }

    pub fn finite(ps: impl IntoIterator<Item = Prime>) -> Self {
        PrimeSet::Finite(ps.into_iter().collect())
    }

    pub fn cofinite(ps: impl IntoIterator<Item = Prime>) -> Self {
        PrimeSet::Cofinite(ps.into_iter().collect())
    }

    pub fn single(p: Prime) -> Self {
        PrimeSet::finite([p])
    }

    pub fn contains(&self, p: Prime) -> bool {
        match self {
            PrimeSet::Finite(s) => s.contains(&p),
            PrimeSet::Cofinite(s) => !s.contains(&p),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, PrimeSet::Finite(s) if s.is_empty())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PrimeSet::Finite(_))
    }

    /// Primes listed explicitly by the descriptor.
    pub fn mentioned(&self) -> &BTreeSet<Prime> {
        match self {
            PrimeSet::Finite(s) | PrimeSet::Cofinite(s) => s,
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            PrimeSet::Finite(s) => PrimeSet::Cofinite(s.clone()),
            PrimeSet::Cofinite(s) => PrimeSet::Finite(s.clone()),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        use PrimeSet::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a | b),
            (Finite(a), Cofinite(b)) | (Cofinite(b), Finite(a)) => Cofinite(b - a),
            (Cofinite(a), Cofinite(b)) => Cofinite(a & b),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<Prime>| s.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        match self {
            PrimeSet::Finite(s) => write!(f, "{{{}}}", list(s)),
            PrimeSet::Cofinite(s) if s.is_empty() => write!(f, "all"),
            PrimeSet::Cofinite(s) => write!(f, "all\\{{{}}}", list(s)),
        }
    }
}

/// A specialization-stable subset of Spec(ℤ).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ZSubset {
    Whole,
    Maximals(PrimeSet),
}

impl ZSubset {
    pub fn empty() -> Self {
        ZSubset::Maximals(PrimeSet::empty())
    }

    pub fn primes(ps: &[u64]) -> Result<Self> {
        let set = ps.iter().map(|&p| Prime::new(p)).collect::<Result<BTreeSet<_>>>()?;
        Ok(ZSubset::Maximals(PrimeSet::Finite(set)))
    }

    pub fn contains(&self, p: &ZPoint) -> bool {
        match (self, p) {
            (ZSubset::Whole, _) => true,
            (ZSubset::Maximals(_), ZPoint::Generic) => false,
            (ZSubset::Maximals(s), ZPoint::Maximal(q)) => s.contains(*q),
        }
    }

    pub fn contains_prime(&self, p: Prime) -> bool {
        self.contains(&ZPoint::Maximal(p))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ZSubset::Maximals(s) if s.is_empty())
    }

    pub fn is_whole(&self) -> bool {
        matches!(self, ZSubset::Whole)
    }

    /// The closed points of the subset.
    pub fn maximal_part(&self) -> PrimeSet {
        match self {
            ZSubset::Whole => PrimeSet::all(),
            ZSubset::Maximals(s) => s.clone(),
        }
    }

    pub fn mentioned(&self) -> BTreeSet<Prime> {
        match self {
            ZSubset::Whole => BTreeSet::new(),
            ZSubset::Maximals(s) => s.mentioned().clone(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        match (self, other) {
            (ZSubset::Maximals(a), ZSubset::Maximals(b)) => ZSubset::Maximals(a.union(b)),
            _ => ZSubset::Whole,
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        match (self, other) {
            (ZSubset::Whole, x) | (x, ZSubset::Whole) => x.clone(),
            (ZSubset::Maximals(a), ZSubset::Maximals(b)) => ZSubset::Maximals(a.intersection(b)),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        match (self, other) {
            (_, ZSubset::Whole) => true,
            (ZSubset::Whole, ZSubset::Maximals(_)) => false,
            (ZSubset::Maximals(a), ZSubset::Maximals(b)) => a.is_subset(b),
        }
    }
}

impl fmt::Display for ZSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZSubset::Whole => write!(f, "Spec Z"),
            ZSubset::Maximals(s) => write!(f, "{s}"),
        }
    }
}

/// Codimension function on Spec(ℤ): d(0) = `generic`, d((p)) = `maximal`
/// except at the listed primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZCodim {
    pub generic: i64,
    pub maximal: i64,
    pub exceptions: std::collections::BTreeMap<Prime, i64>,
}

impl ZCodim {
    /// The codimension function of the dualizing complex ℤ[0].
    pub fn standard() -> Self {
        ZCodim { generic: 0, maximal: 1, exceptions: Default::default() }
    }

    pub fn value(&self, p: &ZPoint) -> i64 {
        match p {
            ZPoint::Generic => self.generic,
            ZPoint::Maximal(q) => *self.exceptions.get(q).unwrap_or(&self.maximal),
        }
    }
}

/// The spectrum of ℤ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SpecZ;

impl SpecZ {
    fn fresh_prime(mentioned: &BTreeSet<Prime>) -> Prime {
        Prime::next_after(mentioned.iter().next_back().map_or(1, |p| p.get()))
    }

    fn mentioned_of(context: &[&ZSubset], extra: &[ZPoint]) -> BTreeSet<Prime> {
        let mut all = BTreeSet::new();
        for z in context {
            all.extend(z.mentioned());
        }
        for p in extra {
            if let ZPoint::Maximal(q) = p {
                all.insert(*q);
            }
        }
        all
    }
}

impl Spectrum for SpecZ {
    type Point = ZPoint;
    type Subset = ZSubset;
    type Codim = ZCodim;

    fn point_name(&self, p: &ZPoint) -> String {
        p.to_string()
    }

    fn parse_point(&self, s: &str) -> Result<ZPoint> {
        s.parse()
    }

    fn check_point(&self, _p: &ZPoint) -> Result<()> {
        Ok(())
    }

    fn empty(&self) -> ZSubset {
        ZSubset::empty()
    }

    fn whole(&self) -> ZSubset {
        ZSubset::Whole
    }

    fn contains(&self, z: &ZSubset, p: &ZPoint) -> bool {
        z.contains(p)
    }

    fn is_subset(&self, a: &ZSubset, b: &ZSubset) -> bool {
        a.is_subset(b)
    }

    fn union(&self, a: &ZSubset, b: &ZSubset) -> ZSubset {
        a.union(b)
    }

    fn intersection(&self, a: &ZSubset, b: &ZSubset) -> ZSubset {
        a.intersection(b)
    }

    fn validate_subset(&self, _z: &ZSubset) -> Result<()> {
        Ok(())
    }

    fn describe_subset(&self, z: &ZSubset) -> String {
        z.to_string()
    }

    fn closure_of_point(&self, q: &ZPoint) -> ZSubset {
        match q {
            ZPoint::Generic => ZSubset::Whole,
            ZPoint::Maximal(p) => ZSubset::Maximals(PrimeSet::single(*p)),
        }
    }

    fn specialization_closure(&self, points: &[ZPoint]) -> Result<ZSubset> {
        Ok(points.iter().fold(ZSubset::empty(), |acc, q| acc.union(&self.closure_of_point(q))))
    }

    fn immediate_generalizations(&self, q: &ZPoint) -> Result<Vec<ZPoint>> {
        Ok(match q {
            ZPoint::Generic => vec![],
            ZPoint::Maximal(_) => vec![ZPoint::Generic],
        })
    }

    fn immediate_specializations(&self, p: &ZPoint, candidates: &[ZPoint]) -> Vec<ZPoint> {
        match p {
            ZPoint::Generic => candidates.iter().filter(|c| **c != ZPoint::Generic).cloned().collect(),
            ZPoint::Maximal(_) => vec![],
        }
    }

    /// Generic point, every mentioned prime, then one fresh prime (always last).
    fn representatives(&self, context: &[&ZSubset], extra: &[ZPoint]) -> Vec<ZPoint> {
        let mentioned = Self::mentioned_of(context, extra);
        let fresh = Self::fresh_prime(&mentioned);
        std::iter::once(ZPoint::Generic)
            .chain(mentioned.into_iter().map(ZPoint::Maximal))
            .chain(std::iter::once(ZPoint::Maximal(fresh)))
            .collect()
    }

    fn subset_where(
        &self,
        context: &[&ZSubset],
        extra: &[ZPoint],
        pred: &dyn Fn(&ZPoint) -> bool,
    ) -> Result<ZSubset> {
        let mentioned = Self::mentioned_of(context, extra);
        let fresh = Self::fresh_prime(&mentioned);
        let generic = pred(&ZPoint::Generic);
        let fresh_in = pred(&ZPoint::Maximal(fresh));
        let (inside, outside): (BTreeSet<Prime>, BTreeSet<Prime>) =
            mentioned.iter().partition(|p| pred(&ZPoint::Maximal(**p)));
        if generic {
            if !fresh_in || !outside.is_empty() {
                return Err(Error::NotSpStable("contains the generic point but not every prime".into()));
            }
            return Ok(ZSubset::Whole);
        }
        Ok(ZSubset::Maximals(if fresh_in { PrimeSet::Cofinite(outside) } else { PrimeSet::Finite(inside) }))
    }

    fn connected_components(&self) -> Vec<ZSubset> {
        vec![ZSubset::Whole]
    }

    fn krull_dimension(&self) -> usize {
        1
    }

    fn minimal_points(&self) -> Vec<ZPoint> {
        vec![ZPoint::Generic]
    }

    fn local_spectrum(&self, q: &ZPoint) -> Result<(FinPoset, Vec<ZPoint>)> {
        Ok(match q {
            ZPoint::Generic => (FinPoset::new(&["0"], &[])?, vec![ZPoint::Generic]),
            ZPoint::Maximal(_) => {
                let name = q.to_string();
                (FinPoset::new(&["0", &name], &[("0", &name)])?, vec![ZPoint::Generic, *q])
            }
        })
    }

    fn codim_value(&self, d: &ZCodim, p: &ZPoint) -> i64 {
        d.value(p)
    }

    fn codim_points(&self, d: &ZCodim) -> Vec<ZPoint> {
        d.exceptions.keys().map(|p| ZPoint::Maximal(*p)).collect()
    }

    fn codim_range(&self, d: &ZCodim) -> (i64, i64) {
        let vals = std::iter::once(d.generic).chain(std::iter::once(d.maximal)).chain(d.exceptions.values().copied());
        let (lo, hi) = vals.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
        (lo, hi)
    }

    fn validate_codim_fn(&self, d: &ZCodim) -> std::result::Result<(), (ZPoint, ZPoint)> {
        if let Some((p, _)) = d.exceptions.iter().find(|(_, v)| **v != d.generic + 1) {
            return Err((ZPoint::Generic, ZPoint::Maximal(*p)));
        }
        if d.maximal != d.generic + 1 {
            let mentioned: BTreeSet<Prime> = d.exceptions.keys().copied().collect();
            return Err((ZPoint::Generic, ZPoint::Maximal(Self::fresh_prime(&mentioned))));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn prime_set_algebra() {
        let a = PrimeSet::finite([pr(2), pr(3)]);
        let b = PrimeSet::cofinite([pr(3), pr(5)]);
        assert_eq!(a.union(&b), PrimeSet::cofinite([pr(5)]));
        assert_eq!(a.intersection(&b), PrimeSet::finite([pr(2)]));
        assert_eq!(b.difference(&a), PrimeSet::cofinite([pr(2), pr(3), pr(5)]));
        assert!(a.intersection(&b).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert!(PrimeSet::empty().is_subset(&a));
    }

    #[test]
    fn closures_and_generalizations() {
        let z = SpecZ;
        assert_eq!(z.specialization_closure(&[ZPoint::Generic]).unwrap(), ZSubset::Whole);
        assert_eq!(
            z.specialization_closure(&[ZPoint::Maximal(pr(2)), ZPoint::Maximal(pr(5))]).unwrap(),
            ZSubset::primes(&[2, 5]).unwrap()
        );
        assert_eq!(z.immediate_generalizations(&ZPoint::Maximal(pr(2))).unwrap(), vec![ZPoint::Generic]);
        assert!(z.immediate_generalizations(&ZPoint::Generic).unwrap().is_empty());
    }

    #[test]
    fn open_closed() {
        let z = SpecZ;
        assert!(z.is_open_closed(&ZSubset::Whole).is_ok());
        assert!(z.is_open_closed(&ZSubset::empty()).is_ok());
        let w = z.is_open_closed(&ZSubset::primes(&[2]).unwrap()).unwrap_err();
        assert_eq!((w.inside, w.outside), (ZPoint::Maximal(pr(2)), ZPoint::Generic));
        assert!(z.is_open_closed(&ZSubset::Maximals(PrimeSet::all())).is_err());
    }

    #[test]
    fn subset_where_roundtrip() {
        let z = SpecZ;
        for s in [
            ZSubset::Whole,
            ZSubset::empty(),
            ZSubset::primes(&[3, 7]).unwrap(),
            ZSubset::Maximals(PrimeSet::cofinite([pr(2)])),
        ] {
            let back = z.subset_where(&[&s], &[], &|p| s.contains(p)).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn codim_validation() {
        let z = SpecZ;
        assert!(z.validate_codim_fn(&ZCodim::standard()).is_ok());
        let mut bad = ZCodim::standard();
        bad.exceptions.insert(pr(7), 3);
        assert_eq!(z.validate_codim_fn(&bad), Err((ZPoint::Generic, ZPoint::Maximal(pr(7)))));
        assert_eq!(z.krull_dimension(), 1);
        assert_eq!(z.minimal_points(), vec![ZPoint::Generic]);
        assert_eq!(z.connected_components().len(), 1);
    }

    #[test]
    fn point_parsing() {
        assert_eq!("0".parse::<ZPoint>().unwrap(), ZPoint::Generic);
        assert_eq!("(2)".parse::<ZPoint>().unwrap(), ZPoint::Maximal(pr(2)));
        assert!("(4)".parse::<ZPoint>().is_err());
        assert_eq!(ZPoint::Maximal(pr(2)).to_string(), "(2)");
    }
}
