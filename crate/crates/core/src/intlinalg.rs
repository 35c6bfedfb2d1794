//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Sublattices of
//! `Z^n` are always carried as matrices of generator rows in the ambient
//! coordinates; canonical bases are produced with the row Hermite normal
//! form so that outputs are reproducible.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Converts a slice of machine integers into a big-integer vector.
pub fn ivec(values: &[i64]) -> Vec<BigInt> {
    values.iter().map(|&x| BigInt::from(x)).collect()
}

/// Dot product of two equal-length integer vectors.
pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// gcd of all entries; zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntegerMatrix({}x{}) [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "IntegerMatrix::new",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in entries.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    /// Builds a matrix from machine-integer rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| ivec(r.as_ref())).collect();
        Self::from_big_rows(big, rows.first().map_or(0, |r| r.as_ref().len()))
    }

    /// Builds a matrix from big-integer rows; `cols` is used when `rows` is empty.
    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let cols = rows.first().map_or(cols, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "IntegerMatrix::from_big_rows",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub(crate) fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                op: "vector-matrix product",
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.row(i)) {
                *o += c * x;
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "elementwise matrix operation",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.rows > 0 && other.rows > 0 && self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Self {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    /// Block-diagonal sum.
    pub fn block_diagonal(blocks: &[&IntegerMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "determinant",
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Integer rank (equals the rational rank).
    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            if !s.is_zero() {
                self.data[target * self.cols + j] += factor * s;
            }
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + source].clone();
            if !s.is_zero() {
                self.data[i * self.cols + target] += factor * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -x;
        }
    }

    fn select_rows(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            rows: range.len(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    /// Inverse of `v`, tracked alongside it.
    pub v_inv: IntegerMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries `d_0 | d_1 | ...`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

fn min_abs_position(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form with pivots of minimal absolute value (row-major
/// lowest index on ties). Deterministic for a fixed input.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut v = IntegerMatrix::identity(c);
    let mut v_inv = IntegerMatrix::identity(c);

    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = min_abs_position(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                let nq = -q;
                a.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                let nq = -&q;
                a.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
                v_inv.add_row_multiple(t, j, &q);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a smaller remainder appeared: move it to the pivot slot
                let (pi, pj) = min_abs_position(&a, t).expect("nonzero entry exists");
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                v_inv.swap_rows(t, pj);
                continue;
            }
            let pivot = a.get(t, t).clone();
            let offender = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let rank = (0..r.min(c)).take_while(|&i| !a.get(i, i).is_zero()).count();
    SmithDecomposition {
        u,
        d: a,
        v,
        v_inv,
        rank,
    }
}

/// Canonical basis of the row span: row Hermite normal form with zero rows
/// dropped. Pivots are positive and entries above a pivot lie in `[0, pivot)`.
pub fn hermite_rows(m: &IntegerMatrix) -> IntegerMatrix {
    let mut a = m.clone();
    let (r, c) = (a.rows(), a.cols());
    let mut p = 0;
    for col in 0..c {
        if p == r {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in p..r {
                if a.get(i, col).is_zero() {
                    continue;
                }
                if best.is_none_or(|b| a.get(i, col).abs() < a.get(b, col).abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(p, b);
            let mut done = true;
            for i in p + 1..r {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let q = -a.get(i, col).div_floor(a.get(p, col));
                a.add_row_multiple(i, p, &q);
                if !a.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(p, col).is_zero() {
            continue;
        }
        if a.get(p, col).is_negative() {
            a.negate_row(p);
        }
        for k in 0..p {
            let q = -a.get(k, col).div_floor(a.get(p, col));
            a.add_row_multiple(k, p, &q);
        }
        p += 1;
    }
    a.select_rows(0..p)
}

/// Saturated basis (as rows) of the right kernel `{x : A x = 0}`.
pub fn kernel(a: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(a);
    let n = a.cols();
    let cols: Vec<Vec<BigInt>> = (snf.rank..n).map(|j| snf.v.column(j)).collect();
    hermite_rows(&IntegerMatrix::from_big_rows(cols, n).expect("uniform length"))
}

/// Why `A x = b` has no integral solution, read off the Smith form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    /// Index into the transformed right-hand side `U b`.
    pub index: usize,
    /// The entry `(U b)[index]`.
    #[serde(with = "crate::json::bigint")]
    pub value: BigInt,
    /// The diagonal entry it fails to be divisible by (zero past the rank).
    #[serde(with = "crate::json::bigint")]
    pub divisor: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Vec<BigInt>),
    Unsolvable(Obstruction),
}

/// Reusable solver for `A x = b` over the integers.
#[derive(Clone, Debug)]
pub struct IntegralSolver {
    snf: SmithDecomposition,
}

impl IntegralSolver {
    pub fn new(a: &IntegerMatrix) -> Self {
        Self {
            snf: smith_normal_form(a),
        }
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.snf
    }

    pub fn solve(&self, b: &[BigInt]) -> Result<SolveOutcome> {
        let snf = &self.snf;
        let c = snf.u.mul_vec(b).map_err(|_| Error::DimensionMismatch {
            op: "solve_integral",
            expected: snf.u.cols(),
            found: b.len(),
        })?;
        let mut y = vec![BigInt::zero(); snf.v.rows()];
        for (i, ci) in c.iter().enumerate() {
            if i < snf.rank {
                let d = snf.d.get(i, i);
                let (q, rem) = ci.div_rem(d);
                if !rem.is_zero() {
                    return Ok(SolveOutcome::Unsolvable(Obstruction {
                        index: i,
                        value: ci.clone(),
                        divisor: d.clone(),
                    }));
                }
                y[i] = q;
            } else if !ci.is_zero() {
                return Ok(SolveOutcome::Unsolvable(Obstruction {
                    index: i,
                    value: ci.clone(),
                    divisor: BigInt::zero(),
                }));
            }
        }
        Ok(SolveOutcome::Solution(snf.v.mul_vec(&y)?))
    }
}

/// Solves `A x = b` over the integers; `None` when no integral solution exists.
pub fn solve_integral(a: &IntegerMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    match IntegralSolver::new(a).solve(b)? {
        SolveOutcome::Solution(x) => Ok(Some(x)),
        SolveOutcome::Unsolvable(_) => Ok(None),
    }
}

/// Smallest direct summand of `Z^n` containing the row span, as HNF rows.
pub fn saturation(s: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(s);
    hermite_rows(&snf.v_inv.select_rows(0..snf.rank))
}

/// Whether the row span of `s` is already saturated in `Z^n`.
pub fn is_saturated(s: &IntegerMatrix) -> bool {
    let snf = smith_normal_form(s);
    snf.diagonal()[..snf.rank].iter().all(One::is_one)
}

/// Coordinates of `v` in the row basis `basis` (rows linearly independent).
pub fn coordinates_in(basis: &IntegerMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    solve_integral(&basis.transpose(), v)
}

/// Intersection of the row span of `s` with `Z^n`-kernel of `a`:
/// `{ x in span(s) : A x = 0 }`, returned as HNF rows.
pub fn span_intersect_kernel(s: &IntegerMatrix, a: &IntegerMatrix) -> Result<IntegerMatrix> {
    let basis = hermite_rows(s);
    if basis.rows() == 0 {
        return Ok(IntegerMatrix::zeros(0, s.cols()));
    }
    // A * B^T c = 0
    let image = a.checked_mul(&basis.transpose())?;
    let coeffs = kernel(&image);
    Ok(hermite_rows(&coeffs.checked_mul(&basis)?))
}

/// Finite abelian group in invariant-factor form `Z/d_1 x ... x Z/d_k`, `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    #[serde(with = "crate::json::bigint_vec")]
    invariant_factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self {
            invariant_factors: Vec::new(),
        }
    }

    /// `(Z/n)^k`
    pub fn elementary(n: u64, k: usize) -> Self {
        if n <= 1 {
            return Self::trivial();
        }
        Self {
            invariant_factors: vec![BigInt::from(n); k],
        }
    }

    /// Group `Z/a_1 x ... x Z/a_k` for arbitrary orders; zero entries are rejected.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Result<Self> {
        if orders.iter().any(|o| o.is_zero()) {
            return Err(Error::InvalidArgument(
                "cyclic factor of order zero is not finite".into(),
            ));
        }
        let snf = smith_normal_form(&IntegerMatrix::diagonal(orders));
        Ok(Self::from_smith_diagonal(&snf.diagonal()))
    }

    pub(crate) fn from_smith_diagonal(diag: &[BigInt]) -> Self {
        Self {
            invariant_factors: diag
                .iter()
                .filter(|d| !d.is_zero() && !d.is_one())
                .cloned()
                .collect(),
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// The `n`-torsion subgroup `G[n]`.
    pub fn torsion_subgroup(&self, n: &BigInt) -> Self {
        let orders: Vec<BigInt> = self.invariant_factors.iter().map(|d| d.gcd(n)).collect();
        Self::from_cyclic_orders(&orders).expect("gcd with positive n is positive")
    }

    /// Whether every element is killed by `n`.
    pub fn annihilated_by(&self, n: &BigInt) -> bool {
        self.invariant_factors.iter().all(|d| n.is_multiple_of(d))
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finitely generated quotient: torsion part plus free rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientGroup {
    pub torsion: FiniteAbelianGroup,
    pub free_rank: usize,
}

/// Structure of `span(numerator) / span(denominator)` inside `Z^ambient_rank`.
pub fn quotient_invariants(
    ambient_rank: usize,
    numerator: &IntegerMatrix,
    denominator: &IntegerMatrix,
) -> Result<QuotientGroup> {
    for m in [numerator, denominator] {
        if m.rows() > 0 && m.cols() != ambient_rank {
            return Err(Error::DimensionMismatch {
                op: "quotient_invariants",
                expected: ambient_rank,
                found: m.cols(),
            });
        }
    }
    let basis = hermite_rows(numerator);
    let r = basis.rows();
    let solver = IntegralSolver::new(&basis.transpose());
    let mut coords = Vec::with_capacity(denominator.rows());
    for i in 0..denominator.rows() {
        match solver.solve(denominator.row(i))? {
            SolveOutcome::Solution(c) => coords.push(c),
            SolveOutcome::Unsolvable(_) => return Err(Error::ContainmentViolated { index: i }),
        }
    }
    if coords.is_empty() {
        return Ok(QuotientGroup {
            torsion: FiniteAbelianGroup::trivial(),
            free_rank: r,
        });
    }
    let snf = smith_normal_form(&IntegerMatrix::from_big_rows(coords, r)?);
    Ok(QuotientGroup {
        torsion: FiniteAbelianGroup::from_smith_diagonal(&snf.diagonal()),
        free_rank: r - snf.rank,
    })
}

/// Whether `v` is primitive in `Z^n` (when `basis` is `None`) or in the
/// sublattice spanned by the rows of `basis`.
pub fn is_primitive_vector(v: &[BigInt], basis: Option<&IntegerMatrix>) -> Result<bool> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector("is_primitive_vector"));
    }
    let coords = match basis {
        None => v.to_vec(),
        Some(b) => {
            let b = hermite_rows(b);
            coordinates_in(&b, v)?.ok_or(Error::NotInLattice)?
        }
    };
    Ok(content(&coords).is_one())
}
