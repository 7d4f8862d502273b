//! Chain-level cross-check for local cohomology, localization and truncations.
//!
//! ℤ[1/m] is the colimit of ℤ --m--> ℤ --m--> ⋯; a complex built from such
//! terms is sampled at three levels N < N' < N'' of that system, and the
//! cohomology of the colimit is read off from the images H(level N) → H(level N').
//! Finite torsion is stable in N, while a Prüfer summand ℤ(p^∞) shows up as a
//! cyclic p-group whose exponent grows with N.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::elementary::ElementaryModule;
use super::object::FormalObject;
use crate::error::{Error, Result};
use crate::filtration::SpFiltration;
use crate::spectrum::specz::{PrimeSet, SpecZ, ZSubset};
use crate::zmodules::primes::factor;
use crate::zmodules::{smith_normal_form, FreeComplex, IntMatrix, Prime};

/// Invariants of one cohomology group: rational rank, finite torsion as
/// (p, e) ↦ multiplicity, and Prüfer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleDegree {
    pub rank: u32,
    pub torsion: BTreeMap<(Prime, u32), u32>,
    pub prufer: BTreeMap<Prime, u32>,
}

impl OracleDegree {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty() && self.prufer.is_empty()
    }

    /// The same invariants read from an elementary module. Localized and free
    /// summands both count towards the rank.
    pub fn of_module(e: &ElementaryModule) -> Result<OracleDegree> {
        let PrimeSet::Finite(ps) = e.prufer_profile().support() else {
            return Err(Error::Unsupported(format!("Prüfer summands at infinitely many primes in {e}")));
        };
        Ok(OracleDegree {
            rank: e.rank(),
            torsion: e.torsion_parts().clone(),
            prufer: ps.iter().map(|p| (*p, e.prufer_profile().get(*p))).collect(),
        })
    }
}

/// Nonzero cohomology degrees with their invariants.
pub type OracleReport = BTreeMap<i64, OracleDegree>;

/// The invariants of every cohomology group of an engine object.
pub fn engine_report(x: &FormalObject) -> Result<OracleReport> {
    x.iter().map(|(j, m)| Ok((j, OracleDegree::of_module(m)?))).collect()
}

/// Level schedule: the first sampled level starts at `start_level` and doubles
/// until the reading stabilizes or exceeds `max_level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CechOracle {
    pub start_level: u32,
    pub max_level: u32,
}

impl Default for CechOracle {
    fn default() -> Self {
        CechOracle { start_level: 12, max_level: 48 }
    }
}

#[derive(Clone, Debug)]
struct Cx {
    ranks: Vec<usize>,
    /// diffs[k] maps degree k to degree k + 1 of the frame.
    diffs: Vec<IntMatrix>,
}

/// One matrix per degree of the frame.
type Maps = Vec<IntMatrix>;
/// One `Maps` per sampled level.
type Mor = Vec<Maps>;

/// A morphism of systems commuting with the transitions up to the given
/// homotopies: g_{l+1} f_l - f'_l g_l = d H_l + H_l d, where H_l[k] maps
/// degree k of level l to degree k - 1 of level l + 1.
#[derive(Clone, Debug)]
struct HMor {
    maps: Mor,
    homs: Mor,
}

/// A directed system sampled at consecutive levels, with the transition
/// chain maps between them.
#[derive(Clone, Debug)]
struct Sys {
    cx: Vec<Cx>,
    trans: Vec<Maps>,
}

/// Degrees base..base+len, shared by every complex of one computation.
#[derive(Clone, Copy, Debug)]
struct Frame {
    base: i64,
    len: usize,
}

impl Cx {
    fn zero(len: usize) -> Cx {
        Cx { ranks: vec![0; len], diffs: (1..len).map(|_| IntMatrix::zeros(0, 0)).collect() }
    }

    fn len(&self) -> usize {
        self.ranks.len()
    }

    fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    /// The differential leaving degree k (zero outside the frame).
    fn d(&self, k: usize) -> IntMatrix {
        match self.diffs.get(k) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(self.rank(k + 1), self.rank(k)),
        }
    }
}

fn identity_maps(c: &Cx) -> Maps {
    c.ranks.iter().map(|&r| IntMatrix::identity(r)).collect()
}

fn zero_maps(a: &Cx, b: &Cx) -> Maps {
    (0..a.len()).map(|k| IntMatrix::zeros(b.rank(k), a.rank(k))).collect()
}

/// g ∘ f, levelwise and degreewise.
fn compose(f: &Mor, g: &Mor) -> Mor {
    f.iter().zip(g).map(|(fl, gl)| fl.iter().zip(gl).map(|(a, b)| b.mul(a)).collect()).collect()
}

fn blocks(tl: &IntMatrix, tr: &IntMatrix, bl: &IntMatrix, br: &IntMatrix) -> IntMatrix {
    tl.hcat(tr).vcat(&bl.hcat(br))
}

fn constant_sys(c: Cx, levels: usize) -> Sys {
    let trans = (1..levels).map(|_| identity_maps(&c)).collect();
    Sys { cx: vec![c; levels], trans }
}

fn zero_homs(a: &Sys, b: &Sys) -> Mor {
    (0..a.cx.len().saturating_sub(1))
        .map(|l| {
            (0..a.cx[l].len())
                .map(|k| IntMatrix::zeros(if k == 0 { 0 } else { b.cx[l + 1].rank(k - 1) }, a.cx[l].rank(k)))
                .collect()
        })
        .collect()
}

fn strict(maps: Mor, a: &Sys, b: &Sys) -> HMor {
    HMor { maps, homs: zero_homs(a, b) }
}

fn identity_mor(s: &Sys) -> HMor {
    strict(s.cx.iter().map(identity_maps).collect(), s, s)
}

fn zero_mor(a: &Sys, b: &Sys) -> HMor {
    strict(a.cx.iter().zip(&b.cx).map(|(x, y)| zero_maps(x, y)).collect(), a, b)
}

/// g ∘ f with the homotopy g_{l+1} H^f_l + H^g_l f_l.
fn hcompose(f: &HMor, g: &HMor) -> HMor {
    let maps = compose(&f.maps, &g.maps);
    let homs = f
        .homs
        .iter()
        .enumerate()
        .map(|(l, hf)| {
            (0..hf.len())
                .map(|k| {
                    let second = g.homs[l][k].mul(&f.maps[l][k]);
                    if k == 0 {
                        second
                    } else {
                        let first = g.maps[l + 1][k - 1].mul(&hf[k]);
                        IntMatrix::from_fn(first.rows(), first.cols(), |i, j| &first[(i, j)] + &second[(i, j)])
                    }
                })
                .collect()
        })
        .collect();
    HMor { maps, homs }
}

fn from_free(x: &FreeComplex, frame: Frame, levels: usize) -> Cx {
    let mut c = Cx::zero(frame.len);
    for k in 0..frame.len {
        c.ranks[k] = x.rank_at(frame.base + k as i64);
    }
    for k in 0..frame.len - 1 {
        c.diffs[k] = x.diff_at(frame.base + k as i64);
        if c.diffs[k].rows() != c.ranks[k + 1] || c.diffs[k].cols() != c.ranks[k] {
            c.diffs[k] = IntMatrix::zeros(c.ranks[k + 1], c.ranks[k]);
        }
    }
    let _ = levels;
    c
}

/// Y ⊗ [ℤ --m^N--> ℤ[1/m]] in degrees 0, 1, with the augmentation to Y.
/// Degree n holds Y^n ⊕ Y^{n-1}.
fn tensor_cech(frame: Frame, y: &Sys, m: &BigInt, ns: &[u32]) -> (Sys, HMor) {
    let len = frame.len;
    let mut cx = Vec::new();
    let mut aug = Vec::new();
    for (c, &n) in y.cx.iter().zip(ns) {
        debug_assert_eq!(c.rank(len - 1), 0, "frame too small for the tensor product");
        let cn = m.pow(n);
        let prev = |k: usize| if k == 0 { 0 } else { c.rank(k - 1) };
        let ranks: Vec<usize> = (0..len).map(|k| c.rank(k) + prev(k)).collect();
        let diffs = (0..len - 1)
            .map(|k| {
                let sign = if (frame.base + k as i64).rem_euclid(2) == 0 { cn.clone() } else { -cn.clone() };
                let dprev =
                    if k == 0 { IntMatrix::zeros(c.rank(0), 0) } else { c.d(k - 1) };
                blocks(
                    &c.d(k),
                    &IntMatrix::zeros(c.rank(k + 1), prev(k)),
                    &IntMatrix::identity(c.rank(k)).scale(&sign),
                    &dprev,
                )
            })
            .collect();
        aug.push(
            (0..len).map(|k| IntMatrix::identity(c.rank(k)).hcat(&IntMatrix::zeros(c.rank(k), prev(k)))).collect(),
        );
        cx.push(Cx { ranks, diffs });
    }
    let trans = y
        .trans
        .iter()
        .enumerate()
        .map(|(l, f)| {
            let step = m.pow(ns[l + 1] - ns[l]);
            (0..len)
                .map(|k| {
                    let lower = if k == 0 { IntMatrix::zeros(0, 0) } else { f[k - 1].scale(&step) };
                    f[k].block_diag(&lower)
                })
                .collect()
        })
        .collect();
    let w = Sys { cx, trans };
    let aug = strict(aug, &w, y);
    (w, aug)
}

/// The smart truncation τ≤t (t a frame index) with its inclusion.
fn truncate(y: &Sys, t: i64) -> (Sys, HMor) {
    let len = y.cx[0].len();
    if t < 0 {
        let z = constant_sys(Cx::zero(len), y.cx.len());
        let incl = zero_mor(&z, y);
        return (z, incl);
    }
    if t as usize >= len - 1 {
        return (y.clone(), identity_mor(y));
    }
    let t = t as usize;
    let mut cx = Vec::new();
    let mut incl = Vec::new();
    let mut kers = Vec::new();
    for c in &y.cx {
        let s = smith_normal_form(&c.d(t));
        let (kb, kc) = (s.kernel_basis(), s.kernel_coordinates());
        let kdim = kb.cols();
        let ranks: Vec<usize> = (0..len).map(|k| if k < t { c.rank(k) } else if k == t { kdim } else { 0 }).collect();
        let diffs = (0..len - 1)
            .map(|k| {
                if k + 1 < t {
                    c.d(k)
                } else if k + 1 == t {
                    kc.mul(&c.d(k))
                } else {
                    IntMatrix::zeros(ranks[k + 1], ranks[k])
                }
            })
            .collect();
        incl.push(
            (0..len)
                .map(|k| {
                    if k < t {
                        IntMatrix::identity(c.rank(k))
                    } else if k == t {
                        kb.clone()
                    } else {
                        IntMatrix::zeros(c.rank(k), 0)
                    }
                })
                .collect(),
        );
        cx.push(Cx { ranks, diffs });
        kers.push((kb, kc));
    }
    let trans = y
        .trans
        .iter()
        .enumerate()
        .map(|(l, f)| {
            (0..len)
                .map(|k| {
                    if k < t {
                        f[k].clone()
                    } else if k == t {
                        kers[l + 1].1.mul(&f[k]).mul(&kers[l].0)
                    } else {
                        IntMatrix::zeros(0, 0)
                    }
                })
                .collect()
        })
        .collect();
    let tr = Sys { cx, trans };
    let incl = strict(incl, &tr, y);
    (tr, incl)
}

/// cone(g: A → B): degree n holds A^{n+1} ⊕ B^n, with transitions
/// [[f_A, 0], [-H, f_B]]. Returns the cone and the inclusion of B.
fn cone(a: &Sys, b: &Sys, g: &HMor) -> (Sys, HMor) {
    let len = b.cx[0].len();
    let mut cx = Vec::new();
    let mut incl = Vec::new();
    for ((ca, cb), gl) in a.cx.iter().zip(&b.cx).zip(&g.maps) {
        debug_assert_eq!(ca.rank(0), 0, "frame too small for the cone");
        let ranks: Vec<usize> = (0..len).map(|k| ca.rank(k + 1) + cb.rank(k)).collect();
        let gk = |k: usize| match gl.get(k) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(cb.rank(k), ca.rank(k)),
        };
        let diffs = (0..len - 1)
            .map(|k| {
                blocks(
                    &ca.d(k + 1).neg(),
                    &IntMatrix::zeros(ca.rank(k + 2), cb.rank(k)),
                    &gk(k + 1),
                    &cb.d(k),
                )
            })
            .collect();
        incl.push(
            (0..len).map(|k| IntMatrix::zeros(ca.rank(k + 1), cb.rank(k)).vcat(&IntMatrix::identity(cb.rank(k)))).collect(),
        );
        cx.push(Cx { ranks, diffs });
    }
    let trans = a
        .trans
        .iter()
        .zip(&b.trans)
        .enumerate()
        .map(|(l, (fa, fb))| {
            (0..len)
                .map(|k| {
                    let (top, h) = match (fa.get(k + 1), g.homs[l].get(k + 1)) {
                        (Some(m), Some(h)) => (m.clone(), h.neg()),
                        _ => (IntMatrix::zeros(0, 0), IntMatrix::zeros(b.cx[l + 1].rank(k), 0)),
                    };
                    blocks(&top, &IntMatrix::zeros(top.rows(), fb[k].cols()), &h, &fb[k])
                })
                .collect()
        })
        .collect();
    let c = Sys { cx, trans };
    let incl = strict(incl, b, &c);
    (c, incl)
}

/// Cancels unit entries of the differentials (Gaussian elimination of chain
/// complexes), returning the reduced complex with the homotopy equivalences
/// `proj` (original → reduced) and `incl` (reduced → original), and a
/// homotopy h (h[k] from degree k to k - 1) with 1 - incl∘proj = dh + hd.
fn reduce_cx(c: &Cx) -> (Cx, Maps, Maps, Maps) {
    let len = c.len();
    let mut c = c.clone();
    let mut proj: Maps = c.ranks.iter().map(|&r| IntMatrix::identity(r)).collect();
    let mut incl: Maps = proj.clone();
    let mut h: Maps =
        (0..len).map(|k| IntMatrix::zeros(if k == 0 { 0 } else { c.rank(k - 1) }, c.rank(k))).collect();
    while let Some((n, r, col)) = find_unit(&c) {
        let d = &c.diffs[n];
        let phi = d[(r, col)].clone();
        // h += incl^n e_col φ e_r^T proj^{n+1}
        let (ic, pr) = (&incl[n], &proj[n + 1]);
        let add = IntMatrix::from_fn(ic.rows(), pr.cols(), |i, j| &ic[(i, col)] * &phi * &pr[(r, j)]);
        h[n + 1] = IntMatrix::from_fn(add.rows(), add.cols(), |i, j| &h[n + 1][(i, j)] + &add[(i, j)]);
        let rows: Vec<usize> = (0..d.rows()).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..d.cols()).filter(|&j| j != col).collect();
        // d' = ε - γ φ δ   (φ = φ^{-1} for a unit)
        let new_d = IntMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            let (ri, cj) = (rows[i], cols[j]);
            &d[(ri, cj)] - &d[(ri, col)] * &phi * &d[(r, cj)]
        });
        // π^{n+1} = [-γφ, 1] on the target of d^n.
        let p_next = &proj[n + 1];
        let new_p_next = IntMatrix::from_fn(rows.len(), p_next.cols(), |i, j| {
            let ri = rows[i];
            &p_next[(ri, j)] - &d[(ri, col)] * &phi * &p_next[(r, j)]
        });
        // ι^n = [-φδ; 1] on the source of d^n.
        let i_cur = &incl[n];
        let new_i_cur = IntMatrix::from_fn(i_cur.rows(), cols.len(), |i, j| {
            let cj = cols[j];
            &i_cur[(i, cj)] - &i_cur[(i, col)] * &phi * &d[(r, cj)]
        });
        proj[n] = proj[n].select_rows(&cols);
        proj[n + 1] = new_p_next;
        incl[n] = new_i_cur;
        incl[n + 1] = incl[n + 1].select_cols(&rows);
        if n > 0 {
            c.diffs[n - 1] = c.diffs[n - 1].select_rows(&cols);
        }
        if n + 1 < len - 1 {
            c.diffs[n + 1] = c.diffs[n + 1].select_cols(&rows);
        }
        c.diffs[n] = new_d;
        c.ranks[n] -= 1;
        c.ranks[n + 1] -= 1;
    }
    (c, proj, incl, h)
}

fn find_unit(c: &Cx) -> Option<(usize, usize, usize)> {
    for (n, d) in c.diffs.iter().enumerate() {
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if d[(i, j)].abs().is_one() {
                    return Some((n, i, j));
                }
            }
        }
    }
    None
}

/// Reduces every level, transporting the transitions. Returns the reduced
/// system with the projection onto it and the inclusion back.
///
/// With f' = π f ι, the projection commutes with the transitions up to
/// π_{l+1} f h_l and the inclusion up to -h_{l+1} f ι_l.
fn reduce(s: &Sys) -> (Sys, HMor, HMor) {
    let parts: Vec<(Cx, Maps, Maps, Maps)> = s.cx.iter().map(reduce_cx).collect();
    let trans = s
        .trans
        .iter()
        .enumerate()
        .map(|(l, f)| f.iter().enumerate().map(|(k, m)| parts[l + 1].1[k].mul(m).mul(&parts[l].2[k])).collect())
        .collect();
    let proj_homs: Mor = s
        .trans
        .iter()
        .enumerate()
        .map(|(l, f)| {
            (0..f.len())
                .map(|k| {
                    if k == 0 {
                        IntMatrix::zeros(0, s.cx[l].rank(0))
                    } else {
                        parts[l + 1].1[k - 1].mul(&f[k - 1]).mul(&parts[l].3[k])
                    }
                })
                .collect()
        })
        .collect();
    let incl_homs: Mor = s
        .trans
        .iter()
        .enumerate()
        .map(|(l, f)| (0..f.len()).map(|k| parts[l + 1].3[k].mul(&f[k]).mul(&parts[l].2[k]).neg()).collect())
        .collect();
    let mut cx = Vec::new();
    let mut proj = Vec::new();
    let mut incl = Vec::new();
    for (c, p, i, _) in parts {
        cx.push(c);
        proj.push(p);
        incl.push(i);
    }
    (Sys { cx, trans }, HMor { maps: proj, homs: proj_homs }, HMor { maps: incl, homs: incl_homs })
}

/// Rank and torsion invariants of the image of H^k(level l) in H^k(level l+1).
fn image_invariants(s: &Sys, l: usize, k: usize) -> (u32, Vec<BigInt>) {
    let (lo, hi) = (&s.cx[l], &s.cx[l + 1]);
    if lo.rank(k) == 0 || hi.rank(k) == 0 {
        return (0, vec![]);
    }
    let kb = smith_normal_form(&lo.d(k)).kernel_basis();
    if kb.cols() == 0 {
        return (0, vec![]);
    }
    let fk = s.trans[l][k].mul(&kb);
    let b = if k == 0 { IntMatrix::zeros(hi.rank(0), 0) } else { hi.d(k - 1) };
    let g = fk.hcat(&b);
    let sg = smith_normal_form(&g);
    let r = sg.rank;
    if r == 0 {
        return (0, vec![]);
    }
    let ub = sg.u.mul(&b);
    let coords = IntMatrix::from_fn(r, b.cols(), |i, j| {
        let q = &ub[(i, j)] / &sg.diag[i];
        debug_assert!((&ub[(i, j)] % &sg.diag[i]).is_zero());
        q
    });
    let sc = smith_normal_form(&coords);
    ((r - sc.rank) as u32, sc.torsion_invariants())
}

/// Raw reading of one image: rank, exponents at the primes that may carry
/// Prüfer summands, and the remaining torsion.
#[derive(Debug, PartialEq, Eq)]
struct Raw {
    rank: u32,
    special: BTreeMap<Prime, Vec<u32>>,
    other: BTreeMap<(Prime, u32), u32>,
}

fn raw_reading(rank: u32, invariants: &[BigInt], special: &BTreeSet<Prime>) -> Result<Raw> {
    let mut raw = Raw { rank, special: BTreeMap::new(), other: BTreeMap::new() };
    for d in invariants {
        let mut n = d.abs();
        for p in special {
            let pb = BigInt::from(p.get());
            let mut e = 0;
            while (&n % &pb).is_zero() {
                n /= &pb;
                e += 1;
            }
            if e > 0 {
                raw.special.entry(*p).or_default().push(e);
            }
        }
        let rest = n.to_u64().ok_or_else(|| Error::Unsupported(format!("torsion invariant {d} too large to factor")))?;
        for (p, e) in factor(rest) {
            *raw.other.entry((p, e)).or_default() += 1;
        }
    }
    for v in raw.special.values_mut() {
        v.sort_unstable();
    }
    Ok(raw)
}

/// Splits exponents at level n into finite (below n/2) and growing ones.
fn split(raw: &Raw, n: u32) -> BTreeMap<Prime, (Vec<u32>, u32)> {
    raw.special
        .iter()
        .map(|(p, es)| {
            let small: Vec<u32> = es.iter().copied().filter(|&e| 2 * e < n).collect();
            let large = (es.len() - small.len()) as u32;
            (*p, (small, large))
        })
        .filter(|(_, (s, l))| !s.is_empty() || *l > 0)
        .collect()
}

fn classify(a: &Raw, na: u32, b: &Raw, nb: u32) -> Option<OracleDegree> {
    if a.rank != b.rank || a.other != b.other {
        return None;
    }
    let (sa, sb) = (split(a, na), split(b, nb));
    if sa != sb {
        return None;
    }
    let mut out = OracleDegree { rank: a.rank, torsion: a.other.clone(), prufer: BTreeMap::new() };
    for (p, (small, large)) in sa {
        for e in small {
            *out.torsion.entry((p, e)).or_default() += 1;
        }
        if large > 0 {
            out.prufer.insert(p, large);
        }
    }
    Some(out)
}

/// Objects to read, each with the offset between frame index and degree.
type Built = Vec<(Sys, i64)>;

fn product(ps: &BTreeSet<Prime>) -> BigInt {
    ps.iter().fold(BigInt::one(), |acc, p| acc * BigInt::from(p.get()))
}

enum Level {
    Whole,
    Empty,
    Primes(BTreeSet<Prime>),
}

fn level_of(z: &ZSubset) -> Result<Level> {
    match z {
        ZSubset::Whole => Ok(Level::Whole),
        ZSubset::Maximals(PrimeSet::Finite(ps)) if ps.is_empty() => Ok(Level::Empty),
        ZSubset::Maximals(PrimeSet::Finite(ps)) => Ok(Level::Primes(ps.clone())),
        ZSubset::Maximals(PrimeSet::Cofinite(_)) => {
            Err(Error::Unsupported(format!("the Čech oracle needs finite levels, got {z}")))
        }
    }
}

/// Y ⊗ Č_Z with its augmentation Y ⊗ Č_Z → Y, reduced.
fn local_cohomology(frame: Frame, y: &Sys, z: &Level, ns: &[u32]) -> (Sys, HMor) {
    let (w, aug) = match z {
        Level::Whole => (y.clone(), identity_mor(y)),
        Level::Empty => {
            let w = constant_sys(Cx::zero(frame.len), y.cx.len());
            let aug = zero_mor(&w, y);
            (w, aug)
        }
        Level::Primes(ps) => tensor_cech(frame, y, &product(ps), ns),
    };
    let (w, _, back) = reduce(&w);
    let aug = hcompose(&back, &aug);
    (w, aug)
}

/// One truncation step of the composition: returns (τ≤i RΓ_Z Y, upper, Y → upper).
fn step(frame: Frame, y: &Sys, i: i64, z: &Level, ns: &[u32]) -> (Sys, Sys, HMor) {
    let (w, aug) = local_cohomology(frame, y, z, ns);
    let (tr, incl) = truncate(&w, i - frame.base);
    let g = hcompose(&incl, &aug);
    let (c, inc) = cone(&tr, y, &g);
    let (c, proj, _) = reduce(&c);
    (tr, c, hcompose(&inc, &proj))
}

impl CechOracle {
    fn frame(x: &FreeComplex, steps: usize) -> Frame {
        let margin = 2 * steps as i64 + 3;
        let base = x.min_deg() - margin;
        let len = (x.max_deg() - x.min_deg() + 1 + 2 * margin) as usize;
        Frame { base, len }
    }

    fn read(&self, special: &BTreeSet<Prime>, build: impl Fn(&[u32]) -> Result<Built>) -> Result<Vec<OracleReport>> {
        let mut t = self.start_level.max(2);
        loop {
            let ns = [t, 2 * t, 3 * t];
            let built = build(&ns)?;
            let mut out = Vec::new();
            let mut stable = true;
            'objects: for (s, offset) in &built {
                let mut report = OracleReport::new();
                for k in 0..s.cx[0].len() {
                    let (ra, ia) = image_invariants(s, 0, k);
                    let (rb, ib) = image_invariants(s, 1, k);
                    let a = raw_reading(ra, &ia, special)?;
                    let b = raw_reading(rb, &ib, special)?;
                    match classify(&a, t, &b, 2 * t) {
                        Some(d) if d.is_zero() => {}
                        Some(d) => {
                            report.insert(k as i64 + offset, d);
                        }
                        None => {
                            stable = false;
                            break 'objects;
                        }
                    }
                }
                out.push(report);
            }
            if stable {
                return Ok(out);
            }
            if 2 * t > self.max_level {
                return Err(Error::NotStabilized(t));
            }
            t *= 2;
        }
    }

    fn primes_of(levels: &[&Level]) -> BTreeSet<Prime> {
        levels
            .iter()
            .flat_map(|l| match l {
                Level::Primes(ps) => ps.clone(),
                _ => BTreeSet::new(),
            })
            .collect()
    }

    /// Cohomology of X itself.
    pub fn homology(&self, x: &FreeComplex) -> Result<OracleReport> {
        let frame = Self::frame(x, 0);
        let c = from_free(x, frame, 3);
        let out = self.read(&BTreeSet::new(), |_| Ok(vec![(constant_sys(c.clone(), 3), frame.base)]))?;
        Ok(out.into_iter().next().expect("one object"))
    }

    /// Cohomology of RΓ_Z X.
    pub fn rgamma(&self, z: &ZSubset, x: &FreeComplex) -> Result<OracleReport> {
        let lv = level_of(z)?;
        let frame = Self::frame(x, 1);
        let out = self.read(&Self::primes_of(&[&lv]), |ns| {
            let xs = constant_sys(from_free(x, frame, 3), 3);
            let (w, _) = local_cohomology(frame, &xs, &lv, ns);
            Ok(vec![(w, frame.base)])
        })?;
        Ok(out.into_iter().next().expect("one object"))
    }

    /// Cohomology of RQ_Z X = cone(RΓ_Z X → X).
    pub fn rq(&self, z: &ZSubset, x: &FreeComplex) -> Result<OracleReport> {
        let lv = level_of(z)?;
        let frame = Self::frame(x, 1);
        let out = self.read(&Self::primes_of(&[&lv]), |ns| {
            let xs = constant_sys(from_free(x, frame, 3), 3);
            let (w, aug) = local_cohomology(frame, &xs, &lv, ns);
            let (c, _) = cone(&w, &xs, &aug);
            Ok(vec![(reduce(&c).0, frame.base)])
        })?;
        Ok(out.into_iter().next().expect("one object"))
    }

    /// (lower, upper) of the single-level truncation at degree i for Z.
    pub fn tau_single(&self, i: i64, z: &ZSubset, x: &FreeComplex) -> Result<(OracleReport, OracleReport)> {
        let lv = level_of(z)?;
        let frame = Self::frame(x, 1);
        let mut out = self.read(&Self::primes_of(&[&lv]), |ns| {
            let xs = constant_sys(from_free(x, frame, 3), 3);
            let (tr, up, _) = step(frame, &xs, i, &lv, ns);
            Ok(vec![(reduce(&tr).0, frame.base), (up, frame.base)])
        })?;
        let upper = out.pop().expect("two objects");
        Ok((out.pop().expect("two objects"), upper))
    }

    /// (lower, upper) of the truncation of a finite filtration, composing the
    /// single-level truncations; lower is the fibre of X → upper.
    pub fn tau_filtration(&self, phi: &SpFiltration<SpecZ>, x: &FreeComplex) -> Result<(OracleReport, OracleReport)> {
        if phi.is_constant() {
            return Ok((self.rgamma(phi.tail(), x)?, self.rq(phi.tail(), x)?));
        }
        let steps: Vec<(i64, Level)> =
            phi.steps()?.iter().map(|(i, z)| Ok((*i, level_of(z)?))).collect::<Result<_>>()?;
        let frame = Self::frame(x, steps.len());
        let levels: Vec<&Level> = steps.iter().map(|(_, l)| l).collect();
        let mut out = self.read(&Self::primes_of(&levels), |ns| {
            let xs = constant_sys(from_free(x, frame, 3), 3);
            let mut y = xs.clone();
            let mut to_y = identity_mor(&xs);
            for (i, lv) in &steps {
                let (_, up, map) = step(frame, &y, *i, lv, ns);
                to_y = hcompose(&to_y, &map);
                y = up;
            }
            let (fib, _) = cone(&xs, &y, &to_y);
            Ok(vec![(reduce(&fib).0, frame.base + 1), (y, frame.base)])
        })?;
        let upper = out.pop().expect("two objects");
        Ok((out.pop().expect("two objects"), upper))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::{rgamma, rq, tau_filtration, tau_single};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn z(ps: &[u64]) -> ZSubset {
        ZSubset::primes(ps).unwrap()
    }

    fn engine(x: &FreeComplex) -> FormalObject {
        FormalObject::from_free_complex(x)
    }

    fn prufer(pr: u64, deg: i64) -> OracleReport {
        let d = OracleDegree { prufer: [(p(pr), 1)].into_iter().collect(), ..Default::default() };
        [(deg, d)].into_iter().collect()
    }

    #[test]
    fn prufer_from_z() {
        let x = FreeComplex::stalk(1, 0);
        let o = CechOracle::default();
        assert_eq!(o.rgamma(&z(&[2]), &x).unwrap(), prufer(2, 1));
        let rank1: OracleReport = [(0, OracleDegree { rank: 1, ..Default::default() })].into_iter().collect();
        assert_eq!(o.rq(&z(&[2]), &x).unwrap(), rank1);
        assert_eq!(o.rgamma(&ZSubset::Whole, &x).unwrap(), rank1);
        assert!(o.rgamma(&ZSubset::empty(), &x).unwrap().is_empty());
    }

    #[test]
    fn torsion_is_stable() {
        let x = FreeComplex::koszul(&[4]);
        let o = CechOracle::default();
        let r = o.rgamma(&z(&[2]), &x).unwrap();
        assert_eq!(r, engine_report(&rgamma(&z(&[2]), &engine(&x)).unwrap()).unwrap());
        assert!(o.rq(&z(&[2]), &x).unwrap().is_empty());
        let r = o.rq(&z(&[3]), &x).unwrap();
        assert_eq!(r, engine_report(&engine(&x)).unwrap());
    }

    #[test]
    fn matches_engine_on_mixed_complex() {
        let x = FreeComplex::koszul(&[6]).direct_sum(&FreeComplex::stalk(2, 1)).direct_sum(&FreeComplex::koszul(&[4, 10]));
        let o = CechOracle::default();
        for zz in [z(&[2]), z(&[3]), z(&[2, 5]), ZSubset::Whole, ZSubset::empty()] {
            let ex = engine(&x);
            assert_eq!(o.rgamma(&zz, &x).unwrap(), engine_report(&rgamma(&zz, &ex).unwrap()).unwrap(), "{zz}");
            assert_eq!(o.rq(&zz, &x).unwrap(), engine_report(&rq(&zz, &ex).unwrap()).unwrap(), "{zz}");
            for i in -2..=2 {
                let t = tau_single(i, &zz, &ex).unwrap();
                let (lo, up) = o.tau_single(i, &zz, &x).unwrap();
                assert_eq!(lo, engine_report(&t.lower).unwrap(), "{zz} {i}");
                assert_eq!(up, engine_report(&t.upper).unwrap(), "{zz} {i}");
            }
        }
    }

    #[test]
    fn filtration_scenario() {
        let f = SpFiltration::new(SpecZ, ZSubset::Whole, 0, vec![z(&[2]), z(&[2])], ZSubset::empty()).unwrap();
        let x = FreeComplex::stalk(1, 0);
        let (lo, up) = CechOracle::default().tau_filtration(&f, &x).unwrap();
        assert_eq!(lo, prufer(2, 1));
        let t = tau_filtration(&f, &engine(&x)).unwrap();
        assert_eq!(up, engine_report(&t.upper).unwrap());
        let g = SpFiltration::new(SpecZ, ZSubset::Whole, 1, vec![z(&[2, 3])], ZSubset::empty()).unwrap();
        let (lo, up) = CechOracle::default().tau_filtration(&g, &x).unwrap();
        assert_eq!(lo, engine_report(&engine(&x)).unwrap());
        assert!(up.is_empty());
    }

    #[test]
    fn composite_with_reduced_intermediates() {
        let x = FreeComplex::new(
            -3,
            vec![3, 3, 1, 1, 3],
            vec![
                IntMatrix::from_rows(&[vec![18, 16, 2], vec![20, -2, 0], vec![0, 9, 14]]),
                IntMatrix::from_rows(&[vec![0, 0, 0]]),
                IntMatrix::from_rows(&[vec![0]]),
                IntMatrix::from_rows(&[vec![0], vec![0], vec![-1]]),
            ],
        )
        .unwrap();
        let phi = SpFiltration::new(SpecZ, ZSubset::Whole, -2, vec![z(&[2, 3])], ZSubset::empty()).unwrap();
        let (lower, upper) = CechOracle::default().tau_filtration(&phi, &x).unwrap();
        let t = tau_filtration(&phi, &engine(&x)).unwrap();
        assert_eq!(lower, engine_report(&t.lower).unwrap());
        assert_eq!(upper, engine_report(&t.upper).unwrap());
    }

    #[test]
    fn cofinite_levels_are_rejected() {
        let zc = ZSubset::Maximals(PrimeSet::Cofinite(BTreeSet::new()));
        assert!(matches!(CechOracle::default().rgamma(&zc, &FreeComplex::stalk(1, 0)), Err(Error::Unsupported(_))));
    }
}
