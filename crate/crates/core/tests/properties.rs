use proptest::prelude::*;

use tstruct_core::corpus::{random_complex, random_object, rng, ComplexShape};
use tstruct_core::derived::{in_aisle, in_coaisle, tau_filtration};
use tstruct_core::duality::dualize;
use tstruct_core::zmodules::smith_normal_form;
use tstruct_core::{IntMatrix, Prime, SpFiltration, SpecZ, ZPoint, ZSubset};

const PRIMES: [u64; 3] = [2, 3, 5];

fn probes() -> Vec<ZPoint> {
    let mut ps = vec![ZPoint::Generic];
    ps.extend([2u64, 3, 5, 7].iter().map(|p| ZPoint::Maximal(Prime::new(*p).unwrap())));
    ps
}

fn subset(code: u8) -> ZSubset {
    if code >= 8 {
        return ZSubset::Whole;
    }
    let ps: Vec<u64> = PRIMES.iter().enumerate().filter(|(i, _)| code & (1 << i) != 0).map(|(_, p)| *p).collect();
    ZSubset::primes(&ps).unwrap()
}

fn meet_subsets(a: &ZSubset, b: &ZSubset) -> ZSubset {
    match (a, b) {
        (ZSubset::Whole, z) | (z, ZSubset::Whole) => z.clone(),
        _ => {
            let ps: Vec<u64> =
                PRIMES.iter().copied().filter(|p| a.contains_prime(Prime::new(*p).unwrap()) && b.contains_prime(Prime::new(*p).unwrap())).collect();
            ZSubset::primes(&ps).unwrap()
        }
    }
}

/// A finite filtration with whole tail, empty head and levels built from
/// decreasing codes (9 = Whole, otherwise a bit mask over 2, 3, 5).
fn filtration() -> impl Strategy<Value = SpFiltration<SpecZ>> {
    (-3i64..3, prop::collection::vec(0u8..10, 1..5)).prop_map(|(start, codes)| {
        let mut levels: Vec<ZSubset> = Vec::new();
        for c in codes {
            let z = subset(c);
            let next = match levels.last() {
                Some(prev) => meet_subsets(prev, &z),
                None => z,
            };
            levels.push(next);
        }
        SpFiltration::new(SpecZ, ZSubset::Whole, start, levels, ZSubset::empty()).unwrap()
    })
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(-30i64..30, r * c).prop_map(move |e| IntMatrix::from_i64(r, c, &e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_diagonal_factorization(m in small_matrix()) {
        let s = smith_normal_form(&m);
        let d = s.u.mul(&m).mul(&s.v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let want = if i == j { s.diag[i].clone() } else { 0.into() };
                prop_assert_eq!(d.row(i)[j].clone(), want);
            }
        }
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        for w in s.diag.windows(2) {
            if w[0] != 0.into() {
                prop_assert!((&w[1] % &w[0]) == 0.into(), "{} does not divide {}", w[0], w[1]);
            } else {
                prop_assert!(w[1] == 0.into());
            }
        }
    }

    #[test]
    fn homology_satisfies_universal_coefficients(seed in any::<u64>()) {
        let x = random_complex(&mut rng(seed), &ComplexShape::default());
        let h = x.homology();
        let rational = x.homology_rational();
        for p in PRIMES {
            let prime = Prime::new(p).unwrap();
            let mod_p = x.homology_mod_p(p);
            let tors = |j: i64| -> usize {
                h.get(&j).map_or(0, |m| {
                    m.torsion.iter().filter(|((q, _), _)| *q == prime).map(|(_, k)| *k as usize).sum()
                })
            };
            for j in x.min_deg() - 1..=x.max_deg() + 1 {
                let rank = h.get(&j).map_or(0, |m| m.rank as usize);
                prop_assert_eq!(rational.get(&j).copied().unwrap_or(0), rank);
                prop_assert_eq!(mod_p.get(&j).copied().unwrap_or(0), rank + tors(j) + tors(j + 1), "degree {} mod {}", j, p);
            }
        }
    }

    #[test]
    fn shift_and_meet_laws(a in filtration(), b in filtration(), c in filtration(), k in -4i64..4) {
        let s = a.shift(k);
        for j in -10..10 {
            prop_assert_eq!(s.value(j), a.value(j - k));
        }
        prop_assert_eq!(s.shift(-k), a.clone());
        prop_assert_eq!(a.meet(&a).unwrap(), a.clone());
        let ab = a.meet(&b).unwrap();
        prop_assert_eq!(&ab, &b.meet(&a).unwrap());
        prop_assert_eq!(ab.meet(&c).unwrap(), a.meet(&b.meet(&c).unwrap()).unwrap());
        for j in -10..10 {
            for p in probes() {
                prop_assert_eq!(ab.value(j).contains(&p), a.value(j).contains(&p) && b.value(j).contains(&p));
            }
        }
    }

    #[test]
    fn weak_cousin_matches_its_definition(f in filtration()) {
        // Over Z the only generalization of a closed point is the generic one.
        let brute = (f.start() - 2..=f.end() + 2).all(|j| {
            let has_closed = probes().iter().any(|p| *p != ZPoint::Generic && f.value(j).contains(p));
            !has_closed || f.value(j - 1).contains(&ZPoint::Generic)
        });
        prop_assert_eq!(f.weak_cousin().holds, brute);
    }

    #[test]
    fn dualize_is_an_involution(seed in any::<u64>()) {
        let x = random_object(&mut rng(seed), true, (-3, 3));
        prop_assert_eq!(dualize(&dualize(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn truncations_land_in_their_classes(f in filtration(), seed in any::<u64>()) {
        let x = random_object(&mut rng(seed), false, (-3, 3));
        let t = tau_filtration(&f, &x).unwrap();
        prop_assert!(in_aisle(&f, &t.lower).unwrap());
        prop_assert!(in_coaisle(&f, &t.upper).unwrap());
    }
}
