//! Smith normal form with unimodular transforms.
//!
//! The elimination runs on `i128` with checked arithmetic and restarts on
//! `BigInt` as soon as an intermediate value overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use super::matrix::{IntMatrix, Matrix};

trait SnfInt: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    /// `self + c * other`
    fn add_mul(&self, c: &Self, other: &Self) -> Option<Self>;
    fn div_floor(&self, other: &Self) -> Self;
    fn divides(&self, other: &Self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn to_big(&self) -> BigInt;
}

impl SnfInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn add_mul(&self, c: &Self, other: &Self) -> Option<Self> {
        c.checked_mul(*other).and_then(|p| self.checked_add(p))
    }
    fn div_floor(&self, other: &Self) -> Self {
        Integer::div_floor(self, other)
    }
    fn divides(&self, other: &Self) -> bool {
        other % self == 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn add_mul(&self, c: &Self, other: &Self) -> Option<Self> {
        Some(self + c * other)
    }
    fn div_floor(&self, other: &Self) -> Self {
        Integer::div_floor(self, other)
    }
    fn divides(&self, other: &Self) -> bool {
        Zero::is_zero(&(other % self))
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// `u * m * v = d`, with `u_inv`, `v_inv` the inverses of the transforms.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal entries d_1 | d_2 | ... (length min(rows, cols), trailing zeros).
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    /// Invariant factors different from 1 (the torsion of the cokernel).
    pub fn torsion_invariants(&self) -> Vec<BigInt> {
        self.diag[..self.rank].iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// Columns of `v` spanning the kernel of the matrix (a saturated basis).
    pub fn kernel_basis(&self) -> IntMatrix {
        let idx: Vec<usize> = (self.rank..self.v.cols()).collect();
        self.v.select_cols(&idx)
    }

    /// Rows of `v_inv` giving coordinates with respect to `kernel_basis` for
    /// vectors that lie in the kernel.
    pub fn kernel_coordinates(&self) -> IntMatrix {
        let idx: Vec<usize> = (self.rank..self.v_inv.rows()).collect();
        self.v_inv.select_rows(&idx)
    }
}

struct Work<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
    v_inv: Matrix<T>,
}

fn ident<T: SnfInt>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
}

impl<T: SnfInt> Work<T> {
    /// row_i += c * row_t on `a` and `u`; the inverse column operation on `u_inv`.
    fn row_add(&mut self, i: usize, t: usize, c: &T) -> Option<()> {
        for j in 0..self.a.cols() {
            let x = self.a[(i, j)].add_mul(c, &self.a[(t, j)])?;
            self.a[(i, j)] = x;
        }
        for j in 0..self.u.cols() {
            let x = self.u[(i, j)].add_mul(c, &self.u[(t, j)])?;
            self.u[(i, j)] = x;
        }
        let nc = c.neg()?;
        for k in 0..self.u_inv.rows() {
            let x = self.u_inv[(k, t)].add_mul(&nc, &self.u_inv[(k, i)])?;
            self.u_inv[(k, t)] = x;
        }
        Some(())
    }

    /// col_j += c * col_t on `a` and `v`; the inverse row operation on `v_inv`.
    fn col_add(&mut self, j: usize, t: usize, c: &T) -> Option<()> {
        for i in 0..self.a.rows() {
            let x = self.a[(i, j)].add_mul(c, &self.a[(i, t)])?;
            self.a[(i, j)] = x;
        }
        for i in 0..self.v.rows() {
            let x = self.v[(i, j)].add_mul(c, &self.v[(i, t)])?;
            self.v[(i, j)] = x;
        }
        let nc = c.neg()?;
        for k in 0..self.v_inv.cols() {
            let x = self.v_inv[(t, k)].add_mul(&nc, &self.v_inv[(j, k)])?;
            self.v_inv[(t, k)] = x;
        }
        Some(())
    }

    fn swap_rows(&mut self, i: usize, t: usize) {
        self.a.swap_rows(i, t);
        self.u.swap_rows(i, t);
        self.u_inv.swap_cols(i, t);
    }

    fn swap_cols(&mut self, j: usize, t: usize) {
        self.a.swap_cols(j, t);
        self.v.swap_cols(j, t);
        self.v_inv.swap_rows(j, t);
    }

    fn negate_row(&mut self, t: usize) -> Option<()> {
        for j in 0..self.a.cols() {
            self.a[(t, j)] = self.a[(t, j)].neg()?;
        }
        for j in 0..self.u.cols() {
            self.u[(t, j)] = self.u[(t, j)].neg()?;
        }
        for k in 0..self.u_inv.rows() {
            self.u_inv[(k, t)] = self.u_inv[(k, t)].neg()?;
        }
        Some(())
    }

    fn run(mut self) -> Option<(Vec<T>, usize, Work<T>)> {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut diag = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &self.a[(i, j)];
                    if !x.is_zero()
                        && best.map_or(true, |(bi, bj)| x.cmp_abs(&self.a[(bi, bj)]) == Ordering::Less)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    if !self.a[(i, t)].is_zero() {
                        let q = self.a[(i, t)].div_floor(&self.a[(t, t)]).neg()?;
                        self.row_add(i, t, &q)?;
                        dirty |= !self.a[(i, t)].is_zero();
                    }
                }
                for j in t + 1..n {
                    if !self.a[(t, j)].is_zero() {
                        let q = self.a[(t, j)].div_floor(&self.a[(t, t)]).neg()?;
                        self.col_add(j, t, &q)?;
                        dirty |= !self.a[(t, j)].is_zero();
                    }
                }
                if dirty {
                    let mut best = (t, t);
                    for i in t + 1..m {
                        let x = &self.a[(i, t)];
                        if !x.is_zero() && x.cmp_abs(&self.a[best]) == Ordering::Less {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..n {
                        let x = &self.a[(t, j)];
                        if !x.is_zero() && x.cmp_abs(&self.a[best]) == Ordering::Less {
                            best = (t, j);
                        }
                    }
                    if best.0 != t {
                        self.swap_rows(t, best.0);
                    }
                    if best.1 != t {
                        self.swap_cols(t, best.1);
                    }
                    continue;
                }
                let mut offender = None;
                'search: for i in t + 1..m {
                    for j in t + 1..n {
                        if !self.a[(t, t)].divides(&self.a[(i, j)]) {
                            offender = Some(i);
                            break 'search;
                        }
                    }
                }
                match offender {
                    Some(i) => self.row_add(t, i, &T::one())?,
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t)?;
            }
            diag.push(self.a[(t, t)].clone());
            t += 1;
        }
        let rank = diag.len();
        diag.resize(m.min(n), T::zero());
        Some((diag, rank, self))
    }
}

fn snf_in<T: SnfInt>(a: Matrix<T>) -> Option<Smith> {
    let (m, n) = (a.rows(), a.cols());
    let work = Work { a, u: ident(m), u_inv: ident(m), v: ident(n), v_inv: ident(n) };
    let (diag, rank, w) = work.run()?;
    Some(Smith {
        diag: diag.iter().map(SnfInt::to_big).collect(),
        rank,
        u: w.u.map(SnfInt::to_big),
        u_inv: w.u_inv.map(SnfInt::to_big),
        v: w.v.map(SnfInt::to_big),
        v_inv: w.v_inv.map(SnfInt::to_big),
    })
}

/// Smith normal form of an integer matrix.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let small = m.max_abs_bits() <= 40;
    if small {
        let narrow = m.map(|x| x.to_i128().expect("fits"));
        if let Some(s) = snf_in(narrow) {
            return s;
        }
    }
    snf_in(m.clone()).expect("big integer elimination cannot overflow")
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank
}

/// Rank over the prime field F_p.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m[(i, j)].mod_floor(&pb).to_u64().expect("residue fits"))
                .collect()
        })
        .collect();
    let inv = |x: u64| -> u64 {
        let (mut r, mut b, mut e) = (1u128, x as u128 % p as u128, p as u128 - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u128;
            }
            b = b * b % p as u128;
            e >>= 1;
        }
        r as u64
    };
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let s = inv(a[r][c]);
        for j in c..cols {
            a[r][j] = (a[r][j] as u128 * s as u128 % p as u128) as u64;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in c..cols {
                    let sub = (f as u128 * a[r][j] as u128 % p as u128) as u64;
                    a[i][j] = ((a[i][j] as u128 + p as u128 - sub as u128) % p as u128) as u64;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith_normal_form(m);
        let d = s.u.mul(m).mul(&s.v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j { s.diag[i].clone() } else { BigInt::from(0) };
                assert_eq!(d[(i, j)], expect);
            }
        }
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        for w in s.diag[..s.rank].windows(2) {
            assert!(num_traits::Zero::is_zero(&(&w[1] % &w[0])));
        }
        assert!(s.diag[..s.rank].iter().all(|x| x.is_positive()));
        s
    }

    #[test]
    fn diagonal_two_three() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_and_identity() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert_eq!(s.rank, 0);
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.diag, vec![BigInt::from(1); 3]);
    }

    #[test]
    fn big_entries_fall_back() {
        let big = BigInt::from(1u64 << 62);
        let m = IntMatrix::from_fn(2, 2, |i, j| &big * (i + 2 * j + 1) + i);
        check(&m);
        let huge = IntMatrix::from_fn(3, 3, |i, j| BigInt::from(30).pow(40 + (i * 3 + j) as u32) + i);
        check(&huge);
    }

    #[test]
    fn rank_mod_p_detects_torsion() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank_mod_p(&m, 2), 0);
        assert_eq!(rank_mod_p(&m, 3), 2);
    }
}
