//! Duality over ℤ with respect to the dualizing complex ℤ[0].

use crate::derived::{in_aisle, in_coaisle, rgamma, tau_single, ElementaryModule, FormalObject};
use crate::error::{Error, Result};
use crate::filtration::{cm_filtration, dual_filtration, SpFiltration};
use crate::spectrum::specz::{SpecZ, ZCodim, ZPoint, ZSubset};
use crate::spectrum::Spectrum;
use crate::zmodules::{hom_ext_tables, tor, FgZModule};

/// The codimension function of ℤ[0]: 0 at the generic point, 1 elsewhere.
pub fn dualizing_codim() -> ZCodim {
    ZCodim::standard()
}

/// φ_CM(i) = {p : d(p) > i} for the dualizing complex ℤ[0].
pub fn cm_filtration_z() -> SpFiltration<SpecZ> {
    cm_filtration(&SpecZ, &dualizing_codim()).expect("the standard codimension function is valid")
}

fn fg_part(x: &FormalObject) -> Result<Vec<(i64, FgZModule)>> {
    x.iter()
        .map(|(j, m)| {
            m.to_fg().map(|f| (j, f)).ok_or_else(|| Error::NotFinitelyGenerated(format!("{m} in degree {j}")))
        })
        .collect()
}

/// RHom(X, ℤ): M in degree i contributes Hom(M, ℤ) in degree -i and
/// Ext¹(M, ℤ) in degree 1 - i.
pub fn dualize(x: &FormalObject) -> Result<FormalObject> {
    x.check_determinate()?;
    let z = ElementaryModule::free(1);
    let mut out = FormalObject::zero();
    for (j, m) in fg_part(x)? {
        let (hom, ext) = hom_ext_tables(&ElementaryModule::from_fg(&m), &z)?;
        out.add(-j, &hom);
        out.add(1 - j, &ext);
    }
    Ok(out)
}

/// The least degree in which RΓ_{V(p)} ℤ[0] is nonzero.
pub fn codim_from_dualizing(p: &ZPoint) -> Result<i64> {
    SpecZ.check_point(p)?;
    let v = SpecZ.closure_of_point(p);
    let g = rgamma(&v, &FormalObject::stalk(ElementaryModule::free(1), 0))?;
    g.min_degree().ok_or_else(|| Error::Inconsistent(format!("RΓ_V({p}) of the dualizing complex vanishes")))
}

/// Both evaluations of membership in the Cohen-Macaulay aisle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CmMembership {
    /// Hom_D(X[i], ℤ) = 0 for every i ≥ 0.
    pub by_duality: bool,
    /// supp H^j(X) ⊆ φ_CM(j) for every j.
    pub by_supports: bool,
}

pub fn cm_membership_ways(x: &FormalObject) -> Result<CmMembership> {
    let z = ElementaryModule::free(1);
    let mut by_duality = true;
    // Hom_D(M[i-j], ℤ) = Ext^{j-i}(M, ℤ), nonzero only for j - i ∈ {0, 1}.
    for (j, m) in fg_part(x)? {
        let (hom, ext) = hom_ext_tables(&ElementaryModule::from_fg(&m), &z)?;
        if (j >= 0 && !hom.is_zero()) || (j >= 1 && !ext.is_zero()) {
            by_duality = false;
        }
    }
    let by_supports = in_aisle(&cm_filtration_z(), x)?;
    Ok(CmMembership { by_duality, by_supports })
}

/// Membership in the Cohen-Macaulay aisle; both evaluations must agree.
pub fn cm_membership(x: &FormalObject) -> Result<bool> {
    let w = cm_membership_ways(x)?;
    if w.by_duality != w.by_supports {
        return Err(Error::Inconsistent(format!("Cohen-Macaulay membership of {x}: {w:?}")));
    }
    Ok(w.by_duality)
}

/// The three conditions of the first local-cohomology lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Kashiwara1 {
    /// RΓ_Z X ∈ D^{>n}.
    pub c1: bool,
    /// supp Tor_i(R/q, R/p) ⊆ φ_CM(k+n-i) for q ∈ supp H^k(X^∨), p ∈ Z, i ∈ {0, 1}.
    pub c2: bool,
    /// Z ∩ supp H^k(X^∨) ⊆ φ_CM(k+n).
    pub c3: bool,
}

impl Kashiwara1 {
    pub fn equivalent(&self) -> bool {
        self.c1 == self.c2 && self.c2 == self.c3
    }
}

/// The two conditions of the second local-cohomology lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Kashiwara2 {
    /// τ≤n RΓ_Z X is finitely generated.
    pub c1: bool,
    /// For q ∈ supp H^k(X^∨): q ∈ Z or Z ∩ V(q) ⊆ φ_CM(k+n).
    pub c2: bool,
}

impl Kashiwara2 {
    pub fn equivalent(&self) -> bool {
        self.c1 == self.c2
    }
}

fn residue_fg(p: &ZPoint) -> FgZModule {
    match p {
        ZPoint::Generic => FgZModule::free(1),
        ZPoint::Maximal(q) => FgZModule::cyclic(q.get()),
    }
}

/// (k, supp H^k(X^∨)) for the nonzero cohomology of the dual.
fn dual_supports(x: &FormalObject) -> Result<Vec<(i64, ZSubset)>> {
    let d = dualize(x)?;
    Ok(d.degrees().map(|k| (k, d.support(k))).collect())
}

pub fn kashiwara1_conditions(z: &ZSubset, x: &FormalObject, n: i64) -> Result<Kashiwara1> {
    let sp = SpecZ;
    let cm = cm_filtration_z();
    let c1 = rgamma(z, x)?.degrees().all(|d| d > n);
    let supports = dual_supports(x)?;
    let context: Vec<&ZSubset> = std::iter::once(z).chain(supports.iter().map(|(_, s)| s)).collect();
    let reps = sp.representatives(&context, &x.mentioned_points());
    let mut c2 = true;
    let mut c3 = true;
    for (k, supp) in &supports {
        for q in reps.iter().filter(|q| sp.contains(supp, q)) {
            for p in reps.iter().filter(|p| sp.contains(z, p)) {
                let (t0, t1) = tor(&residue_fg(q), &residue_fg(p));
                for (i, t) in [(0, t0), (1, t1)] {
                    if !sp.is_subset(&t.support(), cm.value(k + n - i)) {
                        c2 = false;
                    }
                }
            }
        }
        if !sp.is_subset(&sp.intersection(z, supp), cm.value(k + n)) {
            c3 = false;
        }
    }
    Ok(Kashiwara1 { c1, c2, c3 })
}

/// The conditions of the first lemma, which must be equivalent.
pub fn kashiwara1_predicate(z: &ZSubset, x: &FormalObject, n: i64) -> Result<Kashiwara1> {
    let r = kashiwara1_conditions(z, x, n)?;
    if !r.equivalent() {
        return Err(Error::Inconsistent(format!("first lemma for Z = {z}, X = {x}, n = {n}: {r:?}")));
    }
    Ok(r)
}

pub fn kashiwara2_conditions(z: &ZSubset, x: &FormalObject, n: i64) -> Result<Kashiwara2> {
    let sp = SpecZ;
    let cm = cm_filtration_z();
    let c1 = tau_single(n, z, x)?.lower.is_fg();
    let supports = dual_supports(x)?;
    let context: Vec<&ZSubset> = std::iter::once(z).chain(supports.iter().map(|(_, s)| s)).collect();
    let reps = sp.representatives(&context, &x.mentioned_points());
    let mut c2 = true;
    for (k, supp) in &supports {
        for q in reps.iter().filter(|q| sp.contains(supp, q)) {
            let near = sp.intersection(z, &sp.closure_of_point(q));
            if !sp.contains(z, q) && !sp.is_subset(&near, cm.value(k + n)) {
                c2 = false;
            }
        }
    }
    Ok(Kashiwara2 { c1, c2 })
}

/// The conditions of the second lemma, which must be equivalent.
pub fn kashiwara2_predicate(z: &ZSubset, x: &FormalObject, n: i64) -> Result<Kashiwara2> {
    let r = kashiwara2_conditions(z, x, n)?;
    if !r.equivalent() {
        return Err(Error::Inconsistent(format!("second lemma for Z = {z}, X = {x}, n = {n}: {r:?}")));
    }
    Ok(r)
}

/// An object on which co-aisle membership for φ and aisle membership of its
/// dual for φ^d differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualMismatch {
    pub object: FormalObject,
    pub in_coaisle: bool,
    pub dual_in_aisle: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualValidation {
    pub dual: SpFiltration<SpecZ>,
    pub trials: usize,
    pub mismatches: Vec<DualMismatch>,
}

impl DualValidation {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks X ∈ U_φ^⊥ ⇔ RHom(X, ℤ) ∈ U_{φ^d} on the given finitely generated
/// objects.
pub fn dual_filtration_validate(phi: &SpFiltration<SpecZ>, samples: &[FormalObject]) -> Result<DualValidation> {
    let dual = dual_filtration(phi, &dualizing_codim())?;
    let mut mismatches = Vec::new();
    for x in samples {
        let a = in_coaisle(phi, x)?;
        let b = in_aisle(&dual, &dualize(x)?)?;
        if a != b {
            mismatches.push(DualMismatch { object: x.clone(), in_coaisle: a, dual_in_aisle: b });
        }
    }
    Ok(DualValidation { dual, trials: samples.len(), mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmodules::Prime;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn tors(n: u64, e: u32, deg: i64) -> FormalObject {
        FormalObject::stalk(ElementaryModule::torsion(p(n), e, 1), deg)
    }

    fn free(deg: i64) -> FormalObject {
        FormalObject::stalk(ElementaryModule::free(1), deg)
    }

    #[test]
    fn dualize_examples() {
        assert_eq!(dualize(&tors(2, 1, 0)).unwrap(), tors(2, 1, 1));
        assert_eq!(dualize(&free(0)).unwrap(), free(0));
        let x = tors(2, 2, 0).direct_sum(&free(2));
        assert_eq!(dualize(&dualize(&x).unwrap()).unwrap(), x);
        let pr = FormalObject::stalk(ElementaryModule::prufer(crate::spectrum::PrimeSet::single(p(2)), 1), 0);
        assert!(matches!(dualize(&pr), Err(Error::NotFinitelyGenerated(_))));
    }

    #[test]
    fn codimension_from_dualizing() {
        assert_eq!(codim_from_dualizing(&ZPoint::Generic).unwrap(), 0);
        assert_eq!(codim_from_dualizing(&ZPoint::Maximal(p(2))).unwrap(), 1);
        assert_eq!(codim_from_dualizing(&ZPoint::Maximal(p(97))).unwrap(), 1);
    }

    #[test]
    fn cm_examples() {
        assert!(!cm_membership(&tors(2, 1, 1)).unwrap());
        assert!(!cm_membership(&free(0)).unwrap());
        assert!(cm_membership(&free(-1)).unwrap());
        assert!(cm_membership(&tors(2, 1, 0)).unwrap());
        assert!(cm_membership(&FormalObject::zero()).unwrap());
    }

    #[test]
    fn first_lemma_examples() {
        let two = ZSubset::primes(&[2]).unwrap();
        let k = kashiwara1_predicate(&two, &free(0), 0).unwrap();
        assert!(k.c1 && k.c2 && k.c3);
        let k = kashiwara1_predicate(&two, &free(0), 1).unwrap();
        assert!(!k.c1 && !k.c2 && !k.c3);
        let k = kashiwara1_predicate(&ZSubset::empty(), &free(0), 5).unwrap();
        assert!(k.c1 && k.c2 && k.c3);
    }

    #[test]
    fn second_lemma_examples() {
        let two = ZSubset::primes(&[2]).unwrap();
        let k = kashiwara2_predicate(&two, &free(0), 0).unwrap();
        assert!(k.c1 && k.c2);
        let k = kashiwara2_predicate(&two, &free(0), 1).unwrap();
        assert!(!k.c1 && !k.c2);
        let k = kashiwara2_predicate(&two, &tors(2, 3, 0), 4).unwrap();
        assert!(k.c1 && k.c2);
    }

    #[test]
    fn dual_validation_examples() {
        let can = SpFiltration::standard(SpecZ, 0);
        let v = dual_filtration_validate(&can, &[free(0), free(1), tors(2, 1, 1), FormalObject::zero()]).unwrap();
        assert!(v.passed());
        assert_eq!(v.dual, cm_filtration_z());
        let f = SpFiltration::new(SpecZ, ZSubset::Whole, 1, vec![ZSubset::primes(&[2]).unwrap()], ZSubset::empty())
            .unwrap();
        let x = tors(2, 1, 1);
        assert!(!in_coaisle(&f, &x).unwrap());
        let v = dual_filtration_validate(&f, &[x]).unwrap();
        assert!(v.passed());
    }
}
