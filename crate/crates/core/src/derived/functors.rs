//! Local cohomology and localization with respect to sp-subsets of Spec(ℤ).

use super::elementary::ElementaryModule;
use super::object::FormalObject;
use crate::error::Result;
use crate::spectrum::specz::ZSubset;

/// (Γ_Z E, R¹Γ_Z E).
pub fn gamma_and_r1(z: &ZSubset, e: &ElementaryModule) -> (ElementaryModule, ElementaryModule) {
    let p = match z {
        ZSubset::Whole => return (e.clone(), ElementaryModule::zero()),
        ZSubset::Maximals(p) => p,
    };
    let gamma = e.map_parts(
        |_, _| ElementaryModule::zero(),
        |q, f, m| if p.contains(q) { ElementaryModule::torsion(q, f, m) } else { ElementaryModule::zero() },
        |pr| ElementaryModule::with_prufer(pr.restrict(p)),
    );
    let r1 = e.map_parts(
        |s, r| ElementaryModule::prufer(p.difference(s), r),
        |_, _, _| ElementaryModule::zero(),
        |_| ElementaryModule::zero(),
    );
    (gamma, r1)
}

/// Q_Z E = H⁰(RQ_Z E): the primes of Z inverted.
pub fn q_part(z: &ZSubset, e: &ElementaryModule) -> ElementaryModule {
    let p = match z {
        ZSubset::Whole => return ElementaryModule::zero(),
        ZSubset::Maximals(p) => p,
    };
    e.map_parts(
        |s, r| ElementaryModule::localized(s.union(p), r),
        |q, f, m| if p.contains(q) { ElementaryModule::zero() } else { ElementaryModule::torsion(q, f, m) },
        |pr| ElementaryModule::with_prufer(pr.restrict(&p.complement())),
    )
}

/// E / Γ_Z E.
pub fn quotient_by_gamma(z: &ZSubset, e: &ElementaryModule) -> ElementaryModule {
    let p = match z {
        ZSubset::Whole => return ElementaryModule::zero(),
        ZSubset::Maximals(p) => p,
    };
    e.map_parts(
        ElementaryModule::localized_ref,
        |q, f, m| if p.contains(q) { ElementaryModule::zero() } else { ElementaryModule::torsion(q, f, m) },
        |pr| ElementaryModule::with_prufer(pr.restrict(&p.complement())),
    )
}

/// RΓ_Z X: degree i holds Γ_Z(H^i X) ⊕ R¹Γ_Z(H^{i-1} X).
pub fn rgamma(z: &ZSubset, x: &FormalObject) -> Result<FormalObject> {
    x.check_determinate()?;
    let mut out = FormalObject::zero();
    for (j, m) in x.iter() {
        let (g, r1) = gamma_and_r1(z, m);
        out.add(j, &g);
        out.add(j + 1, &r1);
    }
    Ok(out)
}

/// RQ_Z X, the cone of RΓ_Z X → X.
pub fn rq(z: &ZSubset, x: &FormalObject) -> Result<FormalObject> {
    x.check_determinate()?;
    Ok(x.map(|m| q_part(z, m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::specz::PrimeSet;
    use crate::zmodules::Prime;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn two() -> ZSubset {
        ZSubset::primes(&[2]).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let (g, r) = gamma_and_r1(&two(), &ElementaryModule::free(1));
        assert!(g.is_zero());
        assert_eq!(r, ElementaryModule::prufer(PrimeSet::single(p(2)), 1));
        let t = ElementaryModule::torsion(p(2), 2, 1);
        assert_eq!(gamma_and_r1(&two(), &t), (t.clone(), ElementaryModule::zero()));
        assert_eq!(gamma_and_r1(&ZSubset::Whole, &t), (t, ElementaryModule::zero()));
    }

    #[test]
    fn rgamma_examples() {
        let z0 = FormalObject::stalk(ElementaryModule::free(1), 0);
        let g = rgamma(&two(), &z0).unwrap();
        assert_eq!(g, FormalObject::stalk(ElementaryModule::prufer(PrimeSet::single(p(2)), 1), 1));
        let six = FormalObject::from_free_complex(&crate::FreeComplex::koszul(&[6]));
        assert_eq!(rgamma(&ZSubset::primes(&[2, 3]).unwrap(), &six).unwrap(), six);
        assert!(rgamma(&ZSubset::empty(), &z0).unwrap().is_zero());
    }

    #[test]
    fn rq_examples() {
        let z0 = FormalObject::stalk(ElementaryModule::free(1), 0);
        assert_eq!(
            rq(&two(), &z0).unwrap(),
            FormalObject::stalk(ElementaryModule::localized(PrimeSet::single(p(2)), 1), 0)
        );
        let t = FormalObject::stalk(ElementaryModule::torsion(p(2), 1, 1), 0);
        assert!(rq(&two(), &t).unwrap().is_zero());
        assert_eq!(rq(&ZSubset::empty(), &z0).unwrap(), z0);
    }
}
