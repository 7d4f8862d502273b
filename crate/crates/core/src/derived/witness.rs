//! Failure of finite generation for filtrations violating the weak Cousin
//! condition.

use super::elementary::Atom;
use super::object::FormalObject;
use super::truncation::{residue_module, tau_filtration, TruncationResult};
use crate::error::{Error, Result};
use crate::filtration::SpFiltration;
use crate::spectrum::specz::{SpecZ, ZPoint};
use crate::spectrum::Spectrum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem55Report {
    /// The truncated object R/p[-j+1].
    pub object: FormalObject,
    pub truncation: TruncationResult,
    /// Non finitely generated summands of the lower and upper vertices.
    pub lower_atoms: Vec<(i64, Atom)>,
    pub upper_atoms: Vec<(i64, Atom)>,
}

impl Theorem55Report {
    /// Neither vertex is finitely generated.
    pub fn holds(&self) -> bool {
        !self.lower_atoms.is_empty() && !self.upper_atoms.is_empty()
    }
}

/// For q ∈ φ(j) with an immediate generalization p ∉ φ(j-1), truncates
/// R/p[-j+1] and reports the non finitely generated summands of both vertices.
pub fn theorem55_witness(p: &ZPoint, q: &ZPoint, j: i64, phi: &SpFiltration<SpecZ>) -> Result<Theorem55Report> {
    let sp = SpecZ;
    sp.check_point(p)?;
    sp.check_point(q)?;
    if !sp.immediate_generalizations(q)?.contains(p) {
        return Err(Error::Hypothesis(format!("{p} is not maximal under {q}")));
    }
    if !sp.contains(phi.value(j), q) {
        return Err(Error::Hypothesis(format!("{q} is not in φ({j})")));
    }
    if sp.contains(phi.value(j - 1), p) {
        return Err(Error::Hypothesis(format!("{p} is in φ({})", j - 1)));
    }
    let object = FormalObject::stalk(residue_module(p), j - 1);
    let truncation = tau_filtration(phi, &object)?;
    Ok(Theorem55Report {
        lower_atoms: truncation.lower.non_fg_atoms(),
        upper_atoms: truncation.upper.non_fg_atoms(),
        object,
        truncation,
    })
}

/// The witness for the first violation of the weak Cousin condition, if any.
pub fn first_violation_witness(phi: &SpFiltration<SpecZ>) -> Result<Option<Theorem55Report>> {
    match phi.weak_cousin().witnesses.first() {
        Some((j, q, p)) => theorem55_witness(p, q, *j, phi).map(Some),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::ElementaryModule;
    use crate::spectrum::specz::{PrimeSet, ZSubset};
    use crate::zmodules::Prime;

    fn z(ps: &[u64]) -> ZSubset {
        ZSubset::primes(ps).unwrap()
    }

    fn mq(n: u64) -> ZPoint {
        ZPoint::Maximal(Prime::new(n).unwrap())
    }

    #[test]
    fn scenario_at_two() {
        let f = SpFiltration::new(SpecZ, z(&[2]), 2, vec![], ZSubset::empty()).unwrap();
        let r = theorem55_witness(&ZPoint::Generic, &mq(2), 1, &f).unwrap();
        assert!(r.holds());
        let two = Prime::new(2).unwrap();
        assert_eq!(r.lower_atoms, vec![(1, Atom::Prufer { primes: PrimeSet::single(two), mult: 1 })]);
        assert_eq!(r.upper_atoms, vec![(0, Atom::Localized { inverted: PrimeSet::single(two), rank: 1 })]);
        assert_eq!(r.object, FormalObject::stalk(ElementaryModule::free(1), 0));
    }

    #[test]
    fn scenario_at_three_one_degree_lower() {
        let f = SpFiltration::new(SpecZ, z(&[3]), 1, vec![], ZSubset::empty()).unwrap();
        let r = theorem55_witness(&ZPoint::Generic, &mq(3), 0, &f).unwrap();
        assert!(r.holds());
        assert_eq!(r.lower_atoms[0].0, 0);
        assert_eq!(r.upper_atoms[0].0, -1);
    }

    #[test]
    fn hypotheses_are_checked() {
        let f = SpFiltration::new(SpecZ, z(&[2]), 2, vec![], ZSubset::empty()).unwrap();
        assert!(matches!(theorem55_witness(&ZPoint::Generic, &mq(3), 1, &f), Err(Error::Hypothesis(_))));
        assert!(matches!(theorem55_witness(&mq(2), &mq(2), 1, &f), Err(Error::Hypothesis(_))));
        let g = SpFiltration::standard(SpecZ, 0);
        assert!(matches!(theorem55_witness(&ZPoint::Generic, &mq(2), 0, &g), Err(Error::Hypothesis(_))));
    }
}
