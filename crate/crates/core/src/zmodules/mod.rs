//! Exact linear algebra over ℤ.

pub mod complex;
pub mod matrix;
pub mod module;
pub mod primes;
pub mod snf;
pub mod tables;

pub use complex::FreeComplex;
pub use matrix::IntMatrix;
pub use module::FgZModule;
pub use primes::{is_prime, Prime};
pub use snf::{smith_normal_form, Smith};
pub use tables::{hom_ext_tables, tor};

use crate::error::{Error, Result};
use crate::spectrum::specz::ZPoint;

/// Top indices of `x` at `p`, with `None` standing for −∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TopIndices {
    /// max{j : p ∈ supp H^j(X)}
    pub m: Option<i64>,
    /// max{j : H^j(X ⊗ k(p)) ≠ 0}
    pub h: Option<i64>,
}

/// Computes both top indices independently and checks that they agree.
pub fn top_indices(x: &FreeComplex, p: &ZPoint) -> Result<TopIndices> {
    let m = x
        .homology()
        .into_iter()
        .filter(|(_, h)| h.support().contains(p))
        .map(|(j, _)| j)
        .max();
    let dims = match p {
        ZPoint::Generic => x.homology_rational(),
        ZPoint::Maximal(q) => x.homology_mod_p(q.get()),
    };
    let h = dims.into_iter().filter(|(_, d)| *d > 0).map(|(j, _)| j).max();
    let out = TopIndices { m, h };
    if m != h {
        return Err(Error::Inconsistent(format!("top indices at {p} disagree: {out:?}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_top_indices() {
        let k = FreeComplex::koszul(&[2]);
        let two = ZPoint::Maximal(Prime::new(2).unwrap());
        let three = ZPoint::Maximal(Prime::new(3).unwrap());
        assert_eq!(top_indices(&k, &two).unwrap(), TopIndices { m: Some(0), h: Some(0) });
        assert_eq!(top_indices(&k, &three).unwrap(), TopIndices { m: None, h: None });
        assert_eq!(top_indices(&k, &ZPoint::Generic).unwrap(), TopIndices { m: None, h: None });
    }
}
