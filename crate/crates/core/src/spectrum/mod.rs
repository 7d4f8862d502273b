//! Models of Spec(R): finite posets of primes and the spectrum of ℤ.

pub mod poset;
pub mod specz;

use std::fmt;

use crate::error::Result;
pub use poset::FinPoset;
pub use specz::{PrimeSet, SpecZ, ZCodim, ZPoint, ZSubset};

/// A point witnessing that `z` is not stable under generalization:
/// `inside ∈ z` and its generalization `outside ∉ z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenClosedWitness<P> {
    pub inside: P,
    pub outside: P,
}

/// Common interface of the two spectrum models.
///
/// Subsets are always stable under specialization. Infinite spectra are
/// handled through finite sets of representative points: every predicate used
/// by the engines is uniform in the points not mentioned by its inputs, so a
/// single fresh point stands in for all of them.
pub trait Spectrum: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Point: Clone + Ord + fmt::Debug + Send + Sync;
    type Subset: Clone + Ord + fmt::Debug + Send + Sync;
    type Codim: Clone + fmt::Debug + Send + Sync;

    fn point_name(&self, p: &Self::Point) -> String;
    fn parse_point(&self, s: &str) -> Result<Self::Point>;
    fn check_point(&self, p: &Self::Point) -> Result<()>;

    fn empty(&self) -> Self::Subset;
    fn whole(&self) -> Self::Subset;
    fn contains(&self, z: &Self::Subset, p: &Self::Point) -> bool;
    fn is_subset(&self, a: &Self::Subset, b: &Self::Subset) -> bool;
    fn union(&self, a: &Self::Subset, b: &Self::Subset) -> Self::Subset;
    fn intersection(&self, a: &Self::Subset, b: &Self::Subset) -> Self::Subset;
    fn validate_subset(&self, z: &Self::Subset) -> Result<()>;
    fn describe_subset(&self, z: &Self::Subset) -> String;

    /// V(q): the closure of a point.
    fn closure_of_point(&self, q: &Self::Point) -> Self::Subset;
    fn specialization_closure(&self, points: &[Self::Point]) -> Result<Self::Subset>;
    fn immediate_generalizations(&self, q: &Self::Point) -> Result<Vec<Self::Point>>;
    /// Immediate specializations of `p`, restricted to `candidates` on infinite spectra.
    fn immediate_specializations(&self, p: &Self::Point, candidates: &[Self::Point]) -> Vec<Self::Point>;

    /// A finite set of points such that membership in any subset built from
    /// `context` and `extra` is decided uniformly outside of it.
    fn representatives(&self, context: &[&Self::Subset], extra: &[Self::Point]) -> Vec<Self::Point>;
    /// The subset whose membership agrees with `pred` on the representatives.
    fn subset_where(
        &self,
        context: &[&Self::Subset],
        extra: &[Self::Point],
        pred: &dyn Fn(&Self::Point) -> bool,
    ) -> Result<Self::Subset>;

    /// Components of the comparability graph, each as a subset.
    fn connected_components(&self) -> Vec<Self::Subset>;
    fn krull_dimension(&self) -> usize;
    fn minimal_points(&self) -> Vec<Self::Point>;
    /// The poset of generalizations of `q` and the embedding of its points.
    fn local_spectrum(&self, q: &Self::Point) -> Result<(FinPoset, Vec<Self::Point>)>;

    fn codim_value(&self, d: &Self::Codim, p: &Self::Point) -> i64;
    /// Points mentioned by the codimension data.
    fn codim_points(&self, d: &Self::Codim) -> Vec<Self::Point>;
    /// Smallest and largest values of `d`.
    fn codim_range(&self, d: &Self::Codim) -> (i64, i64);
    /// Ok if d(q) = d(p) + 1 on every covering pair; otherwise a failing pair (p, q).
    fn validate_codim_fn(&self, d: &Self::Codim) -> std::result::Result<(), (Self::Point, Self::Point)>;

    /// Stable under generalization as well, i.e. a union of components.
    fn is_open_closed(&self, z: &Self::Subset) -> std::result::Result<(), OpenClosedWitness<Self::Point>> {
        let reps = self.representatives(&[z], &[]);
        for q in reps.iter().filter(|q| self.contains(z, q)) {
            let gens = self.immediate_generalizations(q).expect("representative is a point");
            if let Some(p) = gens.into_iter().find(|p| !self.contains(z, p)) {
                return Err(OpenClosedWitness { inside: q.clone(), outside: p });
            }
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }
}
