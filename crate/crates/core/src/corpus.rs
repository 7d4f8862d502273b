//! Seeded corpora of complexes, objects and filtrations.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derived::{tau_filtration, ElementaryModule, FormalObject};
use crate::error::Result;
use crate::filtration::{enumerate_filtrations, CensusFilter, SpFiltration};
use crate::spectrum::poset::PointSet;
use crate::spectrum::{FinPoset, PrimeSet, SpecZ, ZSubset};
use crate::zmodules::{smith_normal_form, FreeComplex, IntMatrix, Prime};

pub const DEFAULT_SEED: u64 = 0x7357_2024;

/// Shape of random complexes.
#[derive(Clone, Copy, Debug)]
pub struct ComplexShape {
    pub max_terms: usize,
    pub max_rank: usize,
    pub max_entry: i64,
    /// Degrees in which terms may sit.
    pub degrees: (i64, i64),
}

impl Default for ComplexShape {
    fn default() -> Self {
        ComplexShape { max_terms: 6, max_rank: 3, max_entry: 20, degrees: (-3, 3) }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| {
        // Sparse-ish entries keep cohomology varied.
        if rng.gen_bool(0.35) {
            BigInt::zero()
        } else {
            BigInt::from(rng.gen_range(-bound..=bound))
        }
    })
}

/// A matrix whose rows are small combinations of a basis of the left kernel
/// of `prev`, so that the product with `prev` vanishes.
fn matrix_after(rng: &mut ChaCha8Rng, prev: &IntMatrix, rows: usize, bound: i64) -> IntMatrix {
    let basis = smith_normal_form(&prev.transpose()).kernel_basis();
    let n = prev.rows();
    let mut out = Vec::with_capacity(rows * n);
    for _ in 0..rows {
        let mut row = vec![BigInt::zero(); n];
        for _attempt in 0..8 {
            let coeffs: Vec<i64> =
                (0..basis.cols()).map(|_| if rng.gen_bool(0.5) { 0 } else { rng.gen_range(-2i64..=2) }).collect();
            let cand: Vec<BigInt> = (0..n)
                .map(|i| coeffs.iter().enumerate().fold(BigInt::zero(), |acc, (k, c)| acc + &basis[(i, k)] * *c))
                .collect();
            if cand.iter().all(|x| x.abs() <= BigInt::from(bound)) {
                row = cand;
                break;
            }
        }
        out.extend(row);
    }
    IntMatrix::from_fn(rows, n, |i, j| out[i * n + j].clone())
}

pub fn random_complex(rng: &mut ChaCha8Rng, shape: &ComplexShape) -> FreeComplex {
    let span = (shape.degrees.1 - shape.degrees.0 + 1) as usize;
    let terms = rng.gen_range(1..=shape.max_terms.min(span));
    let min_deg = rng.gen_range(shape.degrees.0..=shape.degrees.1 - terms as i64 + 1);
    let ranks: Vec<usize> = (0..terms).map(|_| rng.gen_range(0..=shape.max_rank)).collect();
    let mut diffs: Vec<IntMatrix> = Vec::new();
    for k in 0..terms.saturating_sub(1) {
        let d = match diffs.last() {
            None => random_matrix(rng, ranks[k + 1], ranks[k], shape.max_entry),
            Some(prev) => matrix_after(rng, prev, ranks[k + 1], shape.max_entry),
        };
        diffs.push(d);
    }
    FreeComplex::new(min_deg, ranks, diffs).expect("differentials compose to zero by construction")
}

/// Fixed small complexes followed by seeded random ones, `n` in total.
pub fn complex_corpus(seed: u64, n: usize) -> Vec<FreeComplex> {
    let mut out = vec![
        FreeComplex::stalk(1, 0),
        FreeComplex::koszul(&[2]),
        FreeComplex::koszul(&[4, 6]),
        FreeComplex::koszul(&[12]).shift(-1),
        FreeComplex::stalk(2, -1).direct_sum(&FreeComplex::koszul(&[15])),
        FreeComplex::koszul(&[1]),
    ];
    out.truncate(n);
    let mut r = rng(seed);
    let shape = ComplexShape::default();
    while out.len() < n {
        out.push(random_complex(&mut r, &shape));
    }
    out
}

const SMALL_PRIMES: [u64; 4] = [2, 3, 5, 7];

fn small_prime(rng: &mut ChaCha8Rng) -> Prime {
    Prime::new(*SMALL_PRIMES.choose(rng).expect("nonempty")).expect("prime")
}

fn random_prime_set(rng: &mut ChaCha8Rng) -> PrimeSet {
    let mut ps: Vec<Prime> = (0..rng.gen_range(1..=2)).map(|_| small_prime(rng)).collect();
    ps.dedup();
    if rng.gen_bool(0.2) {
        PrimeSet::cofinite(ps)
    } else {
        PrimeSet::finite(ps)
    }
}

/// A random elementary module, possibly not finitely generated.
pub fn random_module(rng: &mut ChaCha8Rng, fg_only: bool) -> ElementaryModule {
    let mut m = ElementaryModule::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let kind = if fg_only { rng.gen_range(0..2) } else { rng.gen_range(0..4) };
        let part = match kind {
            0 => ElementaryModule::free(rng.gen_range(1..=2)),
            1 => ElementaryModule::torsion(small_prime(rng), rng.gen_range(1..=3), 1),
            2 => ElementaryModule::localized(random_prime_set(rng), 1),
            _ => {
                let p = small_prime(rng);
                ElementaryModule::prufer(PrimeSet::single(p), 1)
            }
        };
        m = m.direct_sum(&part);
    }
    m
}

pub fn random_object(rng: &mut ChaCha8Rng, fg_only: bool, degrees: (i64, i64)) -> FormalObject {
    let mut x = FormalObject::zero();
    for _ in 0..rng.gen_range(1..=3) {
        x.add(rng.gen_range(degrees.0..=degrees.1), &random_module(rng, fg_only));
    }
    x
}

/// Finitely generated objects: cohomology of corpus complexes and random
/// graded sums.
pub fn fg_object_corpus(seed: u64, n: usize) -> Vec<FormalObject> {
    let mut r = rng(seed ^ 0x0b1e);
    let complexes = complex_corpus(seed, n / 2);
    let mut out: Vec<FormalObject> = complexes.iter().map(FormalObject::from_free_complex).collect();
    while out.len() < n {
        out.push(random_object(&mut r, true, (-3, 3)));
    }
    out
}

/// φ_X(i) = ⋃_{j ≥ i} supp H^j(X).
pub fn support_filtration(x: &FormalObject) -> SpFiltration<SpecZ> {
    let (Some(lo), Some(hi)) = (x.min_degree(), x.max_degree()) else {
        return SpFiltration::constant(SpecZ, ZSubset::empty()).expect("valid");
    };
    let mut acc = ZSubset::empty();
    let mut levels = Vec::new();
    for j in (lo..=hi).rev() {
        acc = acc.union(&x.support(j));
        levels.push(acc.clone());
    }
    levels.reverse();
    SpFiltration::new(SpecZ, acc, lo, levels, ZSubset::empty()).expect("decreasing by construction")
}

/// Pairs (X, Y): half with Y random, half with Y the co-aisle truncation of a
/// random object for the filtration generated by X.
pub fn prop47_corpus(seed: u64, n: usize) -> Result<Vec<(FreeComplex, FormalObject)>> {
    let mut r = rng(seed ^ 0x47);
    let complexes = complex_corpus(seed ^ 0x4700, n);
    let mut out = Vec::with_capacity(n);
    for (k, x) in complexes.into_iter().enumerate() {
        let y = if k % 2 == 0 {
            random_object(&mut r, false, (-3, 3))
        } else {
            let phi = support_filtration(&FormalObject::from_free_complex(&x));
            let z = random_object(&mut r, k % 4 == 1, (-3, 3));
            tau_filtration(&phi, &z)?.upper
        };
        out.push((x, y));
    }
    Ok(out)
}

/// Whole together with every subset of `primes`.
pub fn finite_universe(primes: &[u64]) -> Vec<ZSubset> {
    let mut out = vec![ZSubset::Whole];
    for mask in 0..(1u32 << primes.len()) {
        let ps: Vec<u64> = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
        out.push(ZSubset::primes(&ps).expect("primes"));
    }
    out
}

/// The finite universe together with the cofinite sets excluding subsets of
/// `primes`.
pub fn cofinite_universe(primes: &[u64]) -> Vec<ZSubset> {
    let mut out = finite_universe(primes);
    for mask in 0..(1u32 << primes.len()) {
        let ps: Vec<Prime> = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| Prime::new(*p).expect("prime"))
            .collect();
        out.push(ZSubset::Maximals(PrimeSet::cofinite(ps)));
    }
    out
}

pub const CENSUS_PRIMES: [u64; 3] = [2, 3, 5];
pub const CENSUS_WINDOW: (i64, i64) = (-3, 3);
pub const CENSUS_CAP: u128 = 1 << 32;

pub fn z_census(filter: CensusFilter) -> Result<Vec<SpFiltration<SpecZ>>> {
    enumerate_filtrations(&SpecZ, &finite_universe(&CENSUS_PRIMES), CENSUS_WINDOW, filter, CENSUS_CAP)
}

pub fn z_cofinite_census(filter: CensusFilter) -> Result<Vec<SpFiltration<SpecZ>>> {
    enumerate_filtrations(&SpecZ, &cofinite_universe(&CENSUS_PRIMES), (-1, 1), filter, CENSUS_CAP)
}

/// The chain p0 < p1.
pub fn two_chain() -> FinPoset {
    FinPoset::chain(2)
}

/// {a < b} together with an isolated point c.
pub fn split_poset() -> FinPoset {
    FinPoset::new(&["a", "b", "c"], &[("a", "b")]).expect("valid poset")
}

/// {m1 > p < m2} with a second component {q < n}.
pub fn vee_poset() -> FinPoset {
    FinPoset::new(&["p", "m1", "m2", "q", "n"], &[("p", "m1"), ("p", "m2"), ("q", "n")]).expect("valid poset")
}

pub fn poset_census(sp: &FinPoset, window: (i64, i64), filter: CensusFilter) -> Result<Vec<SpFiltration<FinPoset>>> {
    let ups: Vec<PointSet> = sp.up_sets(1 << 12)?;
    enumerate_filtrations(sp, &ups, window, filter, CENSUS_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(complex_corpus(7, 40), complex_corpus(7, 40));
        assert_ne!(complex_corpus(7, 40), complex_corpus(8, 40));
    }

    #[test]
    fn random_complexes_respect_shape() {
        let shape = ComplexShape::default();
        let mut r = rng(1);
        for _ in 0..200 {
            let x = random_complex(&mut r, &shape);
            assert!(x.ranks().len() <= 6);
            assert!(x.ranks().iter().all(|&k| k <= 3));
            assert!(x.max_entry() <= BigInt::from(20));
            assert!(x.min_deg() >= -3 && x.max_deg() <= 3);
        }
    }

    #[test]
    fn support_filtration_of_koszul() {
        let x = FormalObject::from_free_complex(&FreeComplex::koszul(&[6]).direct_sum(&FreeComplex::stalk(1, -2)));
        let f = support_filtration(&x);
        assert_eq!(f.value(-2), &ZSubset::Whole);
        assert_eq!(f.value(0), &ZSubset::primes(&[2, 3]).unwrap());
        assert_eq!(f.value(1), &ZSubset::empty());
    }

    #[test]
    fn census_sizes() {
        let all = z_census(CensusFilter::All).unwrap();
        let weak = z_census(CensusFilter::WeakCousin).unwrap();
        let bad = z_census(CensusFilter::ViolatesWeakCousin).unwrap();
        assert_eq!(all.len(), weak.len() + bad.len());
        assert!(weak.iter().all(|f| f.weak_cousin().holds));
    }
}
