//! Fixed inputs shared by the benchmarks.

use tstruct_core::corpus::{complex_corpus, z_census, DEFAULT_SEED};
use tstruct_core::filtration::CensusFilter;
use tstruct_core::{FormalObject, FreeComplex, IntMatrix, SpFiltration, SpecZ};

pub struct Inputs {
    pub complexes: Vec<FreeComplex>,
    pub objects: Vec<FormalObject>,
    pub matrices: Vec<IntMatrix>,
    pub filtrations: Vec<SpFiltration<SpecZ>>,
}

impl Inputs {
    /// `n` seeded complexes, their homology objects and differentials, and the
    /// first `m` weak-Cousin filtrations of the census over Z.
    pub fn new(n: usize, m: usize) -> Self {
        let complexes = complex_corpus(DEFAULT_SEED, n);
        let objects = complexes.iter().map(FormalObject::from_free_complex).collect();
        let matrices = complexes.iter().flat_map(|x| x.diffs().iter().cloned()).collect();
        let filtrations = z_census(CensusFilter::WeakCousin)
            .expect("census fits its cap")
            .into_iter()
            .filter(|f| f.is_finite() && !f.is_constant())
            .take(m)
            .collect();
        Inputs { complexes, objects, matrices, filtrations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_nonempty() {
        let inp = Inputs::new(20, 5);
        assert_eq!(inp.complexes.len(), 20);
        assert_eq!(inp.objects.len(), 20);
        assert!(!inp.matrices.is_empty());
        assert_eq!(inp.filtrations.len(), 5);
    }
}
