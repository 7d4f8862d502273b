//! Hom, Ext¹ and Tor over ℤ for elementary modules.

use std::collections::BTreeSet;

use super::module::FgZModule;
use super::primes::Prime;
use crate::derived::elementary::{ElementaryModule, PruferProfile};
use crate::error::{Error, Result};
use crate::spectrum::specz::PrimeSet;

/// Kernel of multiplication by p^e on `b`.
pub fn mul_kernel(p: Prime, e: u32, b: &ElementaryModule) -> ElementaryModule {
    if e == 0 {
        return ElementaryModule::zero();
    }
    b.map_parts(
        |_, _| ElementaryModule::zero(),
        |q, f, m| if q == p { ElementaryModule::torsion(p, e.min(f), m) } else { ElementaryModule::zero() },
        |pr| ElementaryModule::torsion(p, e, pr.get(p)),
    )
}

/// Cokernel of multiplication by p^e on `b`.
pub fn mul_cokernel(p: Prime, e: u32, b: &ElementaryModule) -> ElementaryModule {
    if e == 0 {
        return ElementaryModule::zero();
    }
    b.map_parts(
        |s, r| if s.contains(p) { ElementaryModule::zero() } else { ElementaryModule::torsion(p, e, r) },
        |q, f, m| if q == p { ElementaryModule::torsion(p, e.min(f), m) } else { ElementaryModule::zero() },
        |_| ElementaryModule::zero(),
    )
}

/// M ⊗ B for finitely generated M.
pub fn tensor_with(m: &FgZModule, b: &ElementaryModule) -> ElementaryModule {
    let mut out = b.power(m.rank);
    for (&(p, e), &k) in &m.torsion {
        out = out.direct_sum(&mul_cokernel(p, e, b).power(k));
    }
    out
}

/// Tor₁(M, B) for finitely generated M.
pub fn tor1_with(m: &FgZModule, b: &ElementaryModule) -> ElementaryModule {
    let mut out = ElementaryModule::zero();
    for (&(p, e), &k) in &m.torsion {
        out = out.direct_sum(&mul_kernel(p, e, b).power(k));
    }
    out
}

fn unsupported(a: &ElementaryModule, b: &ElementaryModule) -> Error {
    Error::Unsupported(format!("Hom/Ext({a}, {b})"))
}

/// (Hom(A, B), Ext¹(A, B)).
///
/// Supported: every pair with A finitely generated; A localized at a set S
/// against targets on which the primes of S act invertibly or that are torsion;
/// A Prüfer with finite support against torsion targets and targets in which
/// its primes are inverted.
pub fn hom_ext_tables(a: &ElementaryModule, b: &ElementaryModule) -> Result<(ElementaryModule, ElementaryModule)> {
    let mut hom = ElementaryModule::zero();
    let mut ext = ElementaryModule::zero();
    let mut add = |h: ElementaryModule, x: ElementaryModule| {
        hom = hom.direct_sum(&h);
        ext = ext.direct_sum(&x);
    };
    for (s, &r) in a.localized_parts() {
        if s.is_empty() {
            add(b.power(r), ElementaryModule::zero());
            continue;
        }
        // Hom and Ext from ℤ[S^{-1}] into each part of B.
        for (t, &r2) in b.localized_parts() {
            if s.is_subset(t) {
                add(ElementaryModule::localized(t.clone(), r * r2), ElementaryModule::zero());
            } else {
                return Err(unsupported(a, b));
            }
        }
        for (&(q, f), &m) in b.torsion_parts() {
            if !s.contains(q) {
                add(ElementaryModule::torsion(q, f, m * r), ElementaryModule::zero());
            }
        }
        let pr = b.prufer_profile();
        if !pr.restrict(s).is_zero() {
            return Err(unsupported(a, b));
        }
        add(ElementaryModule::with_prufer(pr.scale(r)), ElementaryModule::zero());
    }
    for (&(p, e), &m) in a.torsion_parts() {
        add(mul_kernel(p, e, b).power(m), mul_cokernel(p, e, b).power(m));
    }
    let src = a.prufer_profile();
    if !src.is_zero() {
        let PrimeSet::Finite(ps) = src.support() else {
            return Err(unsupported(a, b));
        };
        for p in ps {
            let mu = src.get(p);
            for (t, _) in b.localized_parts() {
                if !t.contains(p) {
                    return Err(unsupported(a, b));
                }
            }
            for (&(q, f), &m) in b.torsion_parts() {
                if q == p {
                    add(ElementaryModule::zero(), ElementaryModule::torsion(p, f, m * mu));
                }
            }
            if b.prufer_profile().get(p) > 0 {
                return Err(unsupported(a, b));
            }
        }
    }
    Ok((hom, ext))
}

/// (Tor₀(A, B), Tor₁(A, B)) by the cyclic rule Tor_i(ℤ/a, ℤ/b) = ℤ/gcd(a, b).
pub fn tor(a: &FgZModule, b: &FgZModule) -> (FgZModule, FgZModule) {
    let mut t0 = FgZModule::free(a.rank * b.rank);
    let mut t1 = FgZModule::zero();
    for (&(p, e), &m) in &a.torsion {
        t0.add_torsion(p, e, m * b.rank);
    }
    for (&(p, e), &m) in &b.torsion {
        t0.add_torsion(p, e, m * a.rank);
    }
    for (&(p, e), &m) in &a.torsion {
        for (&(q, f), &n) in &b.torsion {
            if p == q {
                t0.add_torsion(p, e.min(f), m * n);
                t1.add_torsion(p, e.min(f), m * n);
            }
        }
    }
    (t0, t1)
}

/// Primes at which `m` has Prüfer summands, restricted to `among`.
pub fn prufer_primes(m: &PruferProfile, among: &BTreeSet<Prime>) -> Vec<Prime> {
    among.iter().copied().filter(|p| m.get(*p) > 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn two_into_localization() {
        let a = ElementaryModule::torsion(p(2), 1, 1);
        let b = ElementaryModule::localized(PrimeSet::single(p(2)), 1);
        let (h, x) = hom_ext_tables(&a, &b).unwrap();
        assert!(h.is_zero() && x.is_zero());
    }

    #[test]
    fn ext_of_cyclic_into_z() {
        for k in 1..8 {
            let a = ElementaryModule::torsion(p(2), k, 1);
            let (h, x) = hom_ext_tables(&a, &ElementaryModule::free(1)).unwrap();
            assert!(h.is_zero());
            assert_eq!(x, a);
        }
    }

    #[test]
    fn hom_from_z() {
        let b = ElementaryModule::prufer(PrimeSet::single(p(3)), 2).direct_sum(&ElementaryModule::free(1));
        let (h, x) = hom_ext_tables(&ElementaryModule::free(1), &b).unwrap();
        assert_eq!(h, b);
        assert!(x.is_zero());
    }

    #[test]
    fn hom_into_prufer() {
        let a = ElementaryModule::torsion(p(5), 3, 1);
        let b = ElementaryModule::prufer(PrimeSet::all(), 1);
        let (h, x) = hom_ext_tables(&a, &b).unwrap();
        assert_eq!(h, a);
        assert!(x.is_zero());
    }

    #[test]
    fn tor_examples() {
        let (t0, t1) = tor(&FgZModule::cyclic(4), &FgZModule::cyclic(6));
        assert_eq!(t0, FgZModule::cyclic(2));
        assert_eq!(t1, FgZModule::cyclic(2));
        let m = FgZModule::cyclic(12).direct_sum(&FgZModule::free(1));
        assert_eq!(tor(&FgZModule::free(1), &m), (m.clone(), FgZModule::zero()));
        let (t0, t1) = tor(&FgZModule::cyclic(2), &FgZModule::cyclic(3));
        assert!(t0.is_zero() && t1.is_zero());
    }

    #[test]
    fn unsupported_pairs() {
        let a = ElementaryModule::localized(PrimeSet::single(p(2)), 1);
        assert!(hom_ext_tables(&a, &ElementaryModule::free(1)).is_err());
        let pr = ElementaryModule::prufer(PrimeSet::single(p(2)), 1);
        assert!(hom_ext_tables(&pr, &pr).is_err());
    }
}
