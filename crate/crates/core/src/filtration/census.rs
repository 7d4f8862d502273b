//! Exhaustive enumeration of sp-filtrations on a window.

use rayon::prelude::*;
use std::collections::BTreeSet;

use super::SpFiltration;
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusFilter {
    All,
    WeakCousin,
    ViolatesWeakCousin,
}

/// Every filtration with levels drawn from `universe` on the window [a, b],
/// with tail equal to the level at a and empty afterwards, together with the
/// constant filtrations, deduplicated after canonicalization.
///
/// Errors when |universe|^(b-a+1) exceeds `cap`.
pub fn enumerate_filtrations<S: Spectrum>(
    sp: &S,
    universe: &[S::Subset],
    window: (i64, i64),
    filter: CensusFilter,
    cap: u128,
) -> Result<Vec<SpFiltration<S>>> {
    let (a, b) = window;
    let width = (b - a + 1).max(0) as u32;
    let count = (universe.len() as u128).checked_pow(width).unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::WindowTooLarge { count, cap });
    }
    let keep = |f: &SpFiltration<S>| match filter {
        CensusFilter::All => true,
        CensusFilter::WeakCousin => f.weak_cousin().holds,
        CensusFilter::ViolatesWeakCousin => !f.weak_cousin().holds,
    };
    let firsts = if width == 0 { &universe[..0] } else { universe };
    let per_first: Vec<Vec<SpFiltration<S>>> = firsts
        .par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut levels = vec![first.clone()];
            extend(sp, universe, a, width as usize, &mut levels, &mut out);
            out.into_iter().filter(|f| keep(f)).collect()
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut result = Vec::new();
    let constants = universe.iter().map(|z| SpFiltration::constant(sp.clone(), z.clone()).expect("valid subset"));
    for f in per_first.into_iter().flatten().chain(constants.filter(|f| keep(f))) {
        let key = (f.start(), f.tail().clone(), f.levels().to_vec(), f.head().clone());
        if seen.insert(key) {
            result.push(f);
        }
    }
    Ok(result)
}

fn extend<S: Spectrum>(
    sp: &S,
    universe: &[S::Subset],
    a: i64,
    width: usize,
    levels: &mut Vec<S::Subset>,
    out: &mut Vec<SpFiltration<S>>,
) {
    if levels.len() == width {
        let f = SpFiltration::new(sp.clone(), levels[0].clone(), a, levels.clone(), sp.empty());
        out.push(f.expect("decreasing by construction"));
        return;
    }
    let prev = levels.last().expect("first level is set").clone();
    for z in universe.iter().filter(|z| sp.is_subset(z, &prev)) {
        levels.push(z.clone());
        extend(sp, universe, a, width, levels, out);
        levels.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::FinPoset;

    #[test]
    fn two_chain_excludes_constant_top() {
        let c = FinPoset::chain(2);
        let ups = c.up_sets(16).unwrap();
        let all = enumerate_filtrations(&c, &ups, (0, 1), CensusFilter::WeakCousin, 1 << 20).unwrap();
        let top: crate::spectrum::poset::PointSet = [1].into_iter().collect();
        assert!(all.iter().all(|f| f.weak_cousin().holds));
        assert!(!all.iter().any(|f| f.is_constant() && f.tail() == &top));
    }

    #[test]
    fn empty_window_gives_constants() {
        let c = FinPoset::chain(2);
        let ups = c.up_sets(16).unwrap();
        let all = enumerate_filtrations(&c, &ups, (1, 0), CensusFilter::All, 1 << 20).unwrap();
        assert_eq!(all.len(), ups.len());
        assert!(all.iter().all(|f| f.is_constant()));
    }

    #[test]
    fn cap_is_enforced() {
        let c = FinPoset::chain(3);
        let ups = c.up_sets(16).unwrap();
        assert!(matches!(
            enumerate_filtrations(&c, &ups, (0, 9), CensusFilter::All, 1000),
            Err(Error::WindowTooLarge { .. })
        ));
    }
}
