//! Truncation functors of sp-filtrations of Spec(ℤ), aisle and co-aisle
//! membership, and orthogonality against the stalk generators.

use super::elementary::ElementaryModule;
use super::functors::{gamma_and_r1, q_part, quotient_by_gamma, rgamma, rq};
use super::object::FormalObject;
use crate::error::{Error, Result};
use crate::filtration::SpFiltration;
use crate::spectrum::specz::{SpecZ, ZPoint, ZSubset};
use crate::spectrum::Spectrum;
use crate::zmodules::hom_ext_tables;

/// The triangle lower → X → upper → with lower in the aisle and upper in the
/// co-aisle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationResult {
    pub lower: FormalObject,
    pub upper: FormalObject,
    pub determinate: bool,
}

/// Truncation for the filtration equal to Z up to degree i and empty after:
/// lower = τ≤i RΓ_Z X.
pub fn tau_single(i: i64, z: &ZSubset, x: &FormalObject) -> Result<TruncationResult> {
    x.check_determinate()?;
    let mut lower = FormalObject::zero();
    let mut upper = FormalObject::zero();
    for (j, m) in x.iter() {
        if j > i {
            upper.add(j, m);
        } else if j == i {
            let (g, _) = gamma_and_r1(z, m);
            lower.add(j, &g);
            upper.add(j, &quotient_by_gamma(z, m));
        } else {
            let (g, r1) = gamma_and_r1(z, m);
            lower.add(j, &g);
            lower.add(j + 1, &r1);
            upper.add(j, &q_part(z, m));
        }
    }
    Ok(TruncationResult { lower, upper, determinate: true })
}

/// Truncation for a finite filtration, composing the single-level
/// truncations over the degrees where the filtration changes.
pub fn tau_filtration(phi: &SpFiltration<SpecZ>, x: &FormalObject) -> Result<TruncationResult> {
    x.check_determinate()?;
    if phi.is_constant() {
        return Ok(TruncationResult { lower: rgamma(phi.tail(), x)?, upper: rq(phi.tail(), x)?, determinate: true });
    }
    let steps = phi.steps()?;
    let mut lower = FormalObject::zero();
    let mut upper = x.clone();
    let mut determinate = true;
    for (k, (i, z)) in steps.iter().enumerate() {
        let t = tau_single(*i, z, &upper)?;
        determinate &= t.determinate;
        if k > 0 && !t.lower.concentrated_in(*i, *i) {
            return Err(Error::Inconsistent(format!(
                "step {i} of the composition produced cohomology outside degree {i}: {}",
                t.lower
            )));
        }
        lower = lower.direct_sum(&t.lower);
        upper = t.upper;
    }
    Ok(TruncationResult { lower, upper, determinate })
}

/// supp H^j(X) ⊆ φ(j) for every j.
pub fn in_aisle(phi: &SpFiltration<SpecZ>, x: &FormalObject) -> Result<bool> {
    x.check_determinate()?;
    Ok(x.iter().all(|(j, m)| m.support().is_subset(phi.value(j))))
}

/// RΓ_{φ(j)} Y ∈ D^{>j} for every j.
pub fn in_coaisle(phi: &SpFiltration<SpecZ>, y: &FormalObject) -> Result<bool> {
    y.check_determinate()?;
    let vanishes_upto = |z: &ZSubset, j: i64| -> Result<bool> {
        let g = rgamma(z, y)?;
        let ok = g.degrees().all(|d| d > j);
        Ok(ok)
    };
    if phi.is_constant() || !phi.head().is_empty() {
        if !rgamma(phi.head(), y)?.is_zero() {
            return Ok(false);
        }
        if phi.is_constant() {
            return Ok(true);
        }
    }
    for j in phi.start() - 1..=phi.end() {
        if !vanishes_upto(phi.value(j), j)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomKind {
    Hom,
    Ext1,
}

/// A nonzero Hom_D(ℤ/p[-i], Y[m]) (ℤ[-i] for the generic point) with m ≤ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityWitness {
    pub point: ZPoint,
    pub degree: i64,
    pub shift: i64,
    pub kind: HomKind,
    pub class: ElementaryModule,
}

/// The stalk R/p for a point p of Spec(ℤ).
pub fn residue_module(p: &ZPoint) -> ElementaryModule {
    match p {
        ZPoint::Generic => ElementaryModule::free(1),
        ZPoint::Maximal(q) => ElementaryModule::torsion(*q, 1, 1),
    }
}

/// First nonzero Hom_D(R/p[-i], Y[m]) with m ≤ 0, if any.
pub fn generator_witness(p: &ZPoint, i: i64, y: &FormalObject) -> Result<Option<OrthogonalityWitness>> {
    let a = residue_module(p);
    for (b, m) in y.iter() {
        if b > i {
            continue;
        }
        let (hom, ext) = hom_ext_tables(&a, m)?;
        if !hom.is_zero() {
            return Ok(Some(OrthogonalityWitness { point: *p, degree: i, shift: b - i, kind: HomKind::Hom, class: hom }));
        }
        if b < i && !ext.is_zero() {
            return Ok(Some(OrthogonalityWitness {
                point: *p,
                degree: i,
                shift: b - i + 1,
                kind: HomKind::Ext1,
                class: ext,
            }));
        }
    }
    Ok(None)
}

/// Checks Hom_D(R/p[-i], Y[m]) = 0 for p ∈ φ(i), i in `window` and m ≤ 0.
pub fn orthogonality_check(
    phi: &SpFiltration<SpecZ>,
    y: &FormalObject,
    window: (i64, i64),
) -> Result<Option<OrthogonalityWitness>> {
    y.check_determinate()?;
    let reps = SpecZ.representatives(&phi.subsets(), &y.mentioned_points());
    for i in window.0..=window.1 {
        for p in reps.iter().filter(|p| phi.value(i).contains(p)) {
            if let Some(w) = generator_witness(p, i, y)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::specz::PrimeSet;
    use crate::zmodules::Prime;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn z(ps: &[u64]) -> ZSubset {
        ZSubset::primes(ps).unwrap()
    }

    fn free0() -> FormalObject {
        FormalObject::stalk(ElementaryModule::free(1), 0)
    }

    fn prufer2() -> ElementaryModule {
        ElementaryModule::prufer(PrimeSet::single(p(2)), 1)
    }

    fn loc2() -> ElementaryModule {
        ElementaryModule::localized(PrimeSet::single(p(2)), 1)
    }

    #[test]
    fn single_step_examples() {
        let t = tau_single(0, &z(&[2]), &free0()).unwrap();
        assert!(t.lower.is_zero());
        assert_eq!(t.upper, free0());
        let t = tau_single(1, &z(&[2]), &free0()).unwrap();
        assert_eq!(t.lower, FormalObject::stalk(prufer2(), 1));
        assert_eq!(t.upper, FormalObject::stalk(loc2(), 0));
        let x = FormalObject::stalk(ElementaryModule::torsion(p(2), 3, 1), -1);
        let t = tau_single(0, &z(&[2]), &x).unwrap();
        assert_eq!((t.lower, t.upper.is_zero()), (x, true));
    }

    #[test]
    fn filtration_examples() {
        let f = SpFiltration::new(SpecZ, ZSubset::Whole, 1, vec![z(&[2, 3])], ZSubset::empty()).unwrap();
        let t = tau_filtration(&f, &free0()).unwrap();
        assert_eq!(t.lower, free0());
        assert!(t.upper.is_zero());
        let g = SpFiltration::new(SpecZ, ZSubset::Whole, 0, vec![z(&[2]), z(&[2])], ZSubset::empty()).unwrap();
        let t = tau_filtration(&g, &free0()).unwrap();
        assert_eq!(t.lower, FormalObject::stalk(prufer2(), 1));
        assert!(!t.lower.is_fg());
        assert_eq!(t.upper, FormalObject::stalk(loc2(), 0));
    }

    #[test]
    fn membership_examples() {
        let f = SpFiltration::new(SpecZ, ZSubset::Whole, 1, vec![z(&[2])], ZSubset::empty()).unwrap();
        let x = FormalObject::stalk(ElementaryModule::torsion(p(2), 1, 1), 1);
        assert!(in_aisle(&f, &x).unwrap());
        let can = SpFiltration::standard(SpecZ, 0);
        assert!(in_aisle(&can, &free0()).unwrap());
        let z1 = free0().shift(-1);
        assert!(!in_aisle(&can, &z1).unwrap());
        assert!(in_coaisle(&can, &z1).unwrap());
        assert!(in_aisle(&can, &FormalObject::zero()).unwrap());
        assert!(in_coaisle(&can, &FormalObject::zero()).unwrap());
    }

    #[test]
    fn orthogonality_examples() {
        let f = SpFiltration::new(SpecZ, z(&[2]), 1, vec![z(&[2])], ZSubset::empty()).unwrap();
        let y = FormalObject::stalk(loc2(), 0);
        assert_eq!(orthogonality_check(&f, &y, (-4, 4)).unwrap(), None);
        let can = SpFiltration::standard(SpecZ, 0);
        let w = orthogonality_check(&can, &free0(), (-4, 4)).unwrap().unwrap();
        assert_eq!((w.point, w.shift, w.kind, w.class), (ZPoint::Generic, 0, HomKind::Hom, ElementaryModule::free(1)));
        assert_eq!(orthogonality_check(&can, &FormalObject::zero(), (-4, 4)).unwrap(), None);
    }
}
