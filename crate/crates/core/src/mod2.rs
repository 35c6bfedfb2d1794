//! Reductions modulo 2.
//!
//! For an even lattice `M`, the space `M/2M` carries the reduced pairing and
//! the quadratic refinement `q(m) = m~^2 / 2 mod 2`, where `m~` is any
//! integral lift. The refinement is stored on the basis and extended by
//! polarization, `q(x + y) = q(x) + q(y) + x.y`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::IntegerMatrix;
use crate::lattice::Lattice;

/// Dense matrix over F2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix({}x{})", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = self.row(i).iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![false; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged F2 rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    /// Reduction of an integer matrix.
    pub fn reduce(m: &IntegerMatrix) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, m.get(i, j).is_odd());
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.data[i * self.cols + j] = b;
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<bool> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "F2 product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for j in 0..other.cols {
                        if other.get(k, j) {
                            let v = out.get(i, j);
                            out.set(i, j, !v);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        assert_eq!(v.len(), self.cols, "F2 vector length");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, b)| **a && **b).count() % 2 == 1)
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Reduced row echelon form and pivot columns.
    fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            let Some(p) = (r..a.rows).find(|&i| a.get(i, c)) else {
                continue;
            };
            for j in 0..a.cols {
                a.data.swap(r * a.cols + j, p * a.cols + j);
            }
            for i in 0..a.rows {
                if i != r && a.get(i, c) {
                    for j in 0..a.cols {
                        let v = a.get(i, j) ^ a.get(r, j);
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == a.rows {
                break;
            }
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows) of `{x : A x = 0}`.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, true);
            for (row, &p) in pivots.iter().enumerate() {
                if r.get(row, f) {
                    out.set(k, p, true);
                }
            }
        }
        out
    }

    /// Inverse of a square matrix, if it is invertible.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, true);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Whether the row spans of `self` and `other` coincide.
    pub fn same_row_span(&self, other: &Self) -> bool {
        let (a, pa) = self.rref();
        let (b, pb) = other.rref();
        pa == pb && (0..pa.len()).all(|i| a.row(i) == b.row(i))
    }

    /// Whether `v` lies in the row span.
    pub fn row_span_contains(&self, v: &[bool]) -> bool {
        let mut ext = self.data.clone();
        ext.extend_from_slice(v);
        let ext = Self {
            rows: self.rows + 1,
            cols: self.cols,
            data: ext,
        };
        ext.rank() == self.rank()
    }
}

/// Iterates all `2^dim` vectors of `F2^dim` in binary counting order.
pub fn all_vectors(dim: usize) -> impl Iterator<Item = Vec<bool>> {
    assert!(dim < 64, "exhaustive F2 iteration limited to dim < 64");
    (0u64..(1u64 << dim)).map(move |mask| (0..dim).map(|i| mask >> i & 1 == 1).collect())
}

pub fn f2_dot(pairing: &F2Matrix, x: &[bool], y: &[bool]) -> bool {
    let py = pairing.mul_vec(y);
    x.iter().zip(&py).filter(|(a, b)| **a && **b).count() % 2 == 1
}

/// Canonical 0/1 lift of a mod-2 class.
pub fn standard_lift(x: &[bool]) -> Vec<BigInt> {
    x.iter().map(|&b| BigInt::from(u8::from(b))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2QuadraticSpace {
    pairing: F2Matrix,
    q_basis: Option<Vec<bool>>,
}

impl Mod2QuadraticSpace {
    /// Builds a space directly; `q_basis` must have length `dim` when present.
    pub fn new(pairing: F2Matrix, q_basis: Option<Vec<bool>>) -> Result<Self> {
        if !pairing.is_symmetric() {
            return Err(Error::InvalidArgument("F2 pairing must be symmetric".into()));
        }
        if let Some(q) = &q_basis {
            if q.len() != pairing.rows() {
                return Err(Error::DimensionMismatch {
                    op: "Mod2QuadraticSpace::new",
                    expected: pairing.rows(),
                    found: q.len(),
                });
            }
            // a quadratic refinement of b needs b(x, x) = 0 for all x
            if (0..q.len()).any(|i| pairing.get(i, i)) {
                return Err(Error::InvalidArgument(
                    "pairing is not alternating; no quadratic refinement".into(),
                ));
            }
        }
        Ok(Self { pairing, q_basis })
    }

    pub fn dimension(&self) -> usize {
        self.pairing.rows()
    }

    pub fn pairing(&self) -> &F2Matrix {
        &self.pairing
    }

    pub fn q_on_basis(&self) -> Option<&[bool]> {
        self.q_basis.as_deref()
    }

    pub fn dot(&self, x: &[bool], y: &[bool]) -> bool {
        f2_dot(&self.pairing, x, y)
    }

    pub fn q_value(&self, x: &[bool]) -> Result<bool> {
        let q = self.q_basis.as_ref().ok_or(Error::QuadraticFormAbsent)?;
        if x.len() != q.len() {
            return Err(Error::DimensionMismatch {
                op: "q_value",
                expected: q.len(),
                found: x.len(),
            });
        }
        let mut acc = false;
        for i in 0..x.len() {
            if !x[i] {
                continue;
            }
            acc ^= q[i];
            for j in i + 1..x.len() {
                if x[j] && self.pairing.get(i, j) {
                    acc = !acc;
                }
            }
        }
        Ok(acc)
    }

    /// A class with `q = 1`, if one exists. Since `q` is determined by its
    /// basis values and the pairing, `q` vanishes identically exactly when
    /// both do; otherwise the first violation gives a witness.
    pub fn find_q_one_witness(&self) -> Result<Option<Vec<bool>>> {
        let q = self.q_basis.as_ref().ok_or(Error::QuadraticFormAbsent)?;
        let n = q.len();
        if let Some(i) = q.iter().position(|&b| b) {
            let mut x = vec![false; n];
            x[i] = true;
            return Ok(Some(x));
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.pairing.get(i, j) {
                    let mut x = vec![false; n];
                    x[i] = true;
                    x[j] = true;
                    return Ok(Some(x));
                }
            }
        }
        Ok(None)
    }
}

/// `L/2L` with the reduced pairing and, for even `L`, the quadratic refinement.
pub fn reduce_mod2(lattice: &Lattice) -> Result<Mod2QuadraticSpace> {
    if let Some(index) = lattice.first_odd_diagonal() {
        return Err(Error::OddLattice { index });
    }
    let g = lattice.gram();
    let q: Vec<bool> = (0..lattice.rank())
        .map(|i| (g.get(i, i) / BigInt::from(2)).is_odd())
        .collect();
    Mod2QuadraticSpace::new(F2Matrix::reduce(g), Some(q))
}

/// Reduced pairing only; works for odd lattices too.
pub fn reduce_pairing_mod2(lattice: &Lattice) -> Mod2QuadraticSpace {
    Mod2QuadraticSpace {
        pairing: F2Matrix::reduce(lattice.gram()),
        q_basis: None,
    }
}

/// `m~^2 mod 4` for a lift of `x`; well defined on `L/2L` when `L` is even.
pub fn pontryagin_even(lattice: &Lattice, x: &[bool]) -> Result<u8> {
    if let Some(index) = lattice.first_odd_diagonal() {
        return Err(Error::OddLattice { index });
    }
    pontryagin_of_lift(lattice, &standard_lift(x))
}

/// `v^2 mod 4` for an integral vector.
pub fn pontryagin_of_lift(lattice: &Lattice, lift: &[BigInt]) -> Result<u8> {
    let n = lattice.norm(lift)?;
    Ok(n.mod_floor(&BigInt::from(4)).to_u8().expect("residue < 4"))
}

/// `(v^2 / 2) mod 2` computed from an integral vector of an even lattice.
pub fn q_of_lift(lattice: &Lattice, lift: &[BigInt]) -> Result<bool> {
    let n = lattice.norm(lift)?;
    debug_assert!((&n % BigInt::from(2)).is_zero());
    Ok((n / BigInt::from(2)).is_odd())
}
