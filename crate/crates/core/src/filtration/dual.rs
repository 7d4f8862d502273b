//! Cohen-Macaulay filtrations of codimension functions and dual filtrations.

use super::SpFiltration;
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

fn check_codim<S: Spectrum>(sp: &S, d: &S::Codim) -> Result<()> {
    sp.validate_codim_fn(d).map_err(|(p, q)| Error::InvalidCodim { p: sp.point_name(&p), q: sp.point_name(&q) })
}

/// φ_CM(i) = {p : d(p) > i}.
pub fn cm_filtration<S: Spectrum>(sp: &S, d: &S::Codim) -> Result<SpFiltration<S>> {
    check_codim(sp, d)?;
    let (lo, hi) = sp.codim_range(d);
    let extra = sp.codim_points(d);
    let levels = (lo..hi)
        .map(|i| sp.subset_where(&[], &extra, &|p| sp.codim_value(d, p) > i))
        .collect::<Result<Vec<_>>>()?;
    SpFiltration::new(sp.clone(), sp.whole(), lo, levels, sp.empty())
}

/// φ^d(k) = {q : V(q) ∩ φ(i) ⊆ φ_CM(k + i) for every i}.
pub fn dual_filtration<S: Spectrum>(phi: &SpFiltration<S>, d: &S::Codim) -> Result<SpFiltration<S>> {
    let sp = phi.spectrum();
    let cm = cm_filtration(sp, d)?;
    let extra = sp.codim_points(d);
    let context = phi.subsets();
    let disjoint = |z: &S::Subset| {
        sp.subset_where(&context, &extra, &|q| sp.intersection(&sp.closure_of_point(q), z) == sp.empty())
    };
    if phi.is_constant() {
        return SpFiltration::constant(sp.clone(), disjoint(phi.tail())?);
    }
    let steps = phi.steps()?;
    let (dlo, dhi) = sp.codim_range(d);
    let first = steps.first().expect("nonconstant filtration has steps").0;
    let last = steps.last().expect("nonconstant filtration has steps").0;
    let (klo, khi) = (dlo - last - 1, dhi - first + 1);
    let levels = (klo..=khi)
        .map(|k| {
            sp.subset_where(&context, &extra, &|q| {
                let v = sp.closure_of_point(q);
                steps.iter().all(|(i, z)| sp.is_subset(&sp.intersection(&v, z), cm.value(k + i)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SpFiltration::new(sp.clone(), sp.whole(), klo, levels, disjoint(phi.tail())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::specz::{PrimeSet, SpecZ, ZCodim, ZSubset};
    use crate::spectrum::FinPoset;

    #[test]
    fn cm_over_z() {
        let cm = cm_filtration(&SpecZ, &ZCodim::standard()).unwrap();
        assert_eq!(cm.value(-1), &ZSubset::Whole);
        assert_eq!(cm.value(0), &ZSubset::Maximals(PrimeSet::all()));
        assert_eq!(cm.value(1), &ZSubset::empty());
        assert!(cm.strong_cousin().holds);
    }

    #[test]
    fn cm_over_chain() {
        let c = FinPoset::chain(2);
        let cm = cm_filtration(&c, &vec![0, 1]).unwrap();
        assert_eq!(cm.value(-1).len(), 2);
        assert_eq!(cm.value(0).iter().copied().collect::<Vec<_>>(), vec![1]);
        assert!(cm.value(1).is_empty());
        let one = FinPoset::chain(1);
        let cm = cm_filtration(&one, &vec![5]).unwrap();
        assert_eq!(cm.value(4).len(), 1);
        assert!(cm.value(5).is_empty());
    }

    #[test]
    fn dual_of_canonical_is_cm() {
        let d = ZCodim::standard();
        let can = SpFiltration::standard(SpecZ, 0);
        assert_eq!(dual_filtration(&can, &d).unwrap(), cm_filtration(&SpecZ, &d).unwrap());
    }

    #[test]
    fn dual_of_empty_is_whole() {
        let d = ZCodim::standard();
        let zero = SpFiltration::constant(SpecZ, ZSubset::empty()).unwrap();
        let du = dual_filtration(&zero, &d).unwrap();
        assert!(du.is_constant());
        assert_eq!(du.tail(), &ZSubset::Whole);
    }

    #[test]
    fn dual_is_involutive_on_example() {
        let d = ZCodim::standard();
        let phi = SpFiltration::new(SpecZ, ZSubset::Whole, 0, vec![ZSubset::primes(&[2]).unwrap()], ZSubset::empty())
            .unwrap();
        let du = dual_filtration(&phi, &d).unwrap();
        assert_eq!(du.value(0), &ZSubset::Whole);
        assert_eq!(du.value(1), &ZSubset::Maximals(PrimeSet::cofinite([crate::Prime::new(2).unwrap()])));
        assert_eq!(du.value(2), &ZSubset::empty());
        assert_eq!(dual_filtration(&du, &d).unwrap(), phi);
    }
}
