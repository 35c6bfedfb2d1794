//! Integral lattices given by a symmetric Gram matrix.
//!
//! The negative-definite `E8` used throughout is fixed in the Dynkin basis
//! with Bourbaki labelling: simple roots `a1..a8`, chain
//! `a1-a3-a4-a5-a6-a7-a8` and `a2` attached to `a4`. Its Gram matrix has
//! `-2` on the diagonal and `+1` for every edge. All `E8` coordinates in
//! reports refer to this basis (index `i` is `a_{i+1}`).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{
    dot, kernel, smith_normal_form, FiniteAbelianGroup, IntegerMatrix,
};

/// Edges of the E8 Dynkin diagram (zero-based Bourbaki labels).
pub const E8_DYNKIN_EDGES: [(usize, usize); 7] =
    [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, null: usize) -> Self {
        Self {
            positive,
            negative,
            null,
        }
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative + self.null
    }
}

impl std::ops::Add for Signature {
    type Output = Signature;
    fn add(self, o: Signature) -> Signature {
        Signature::new(
            self.positive + o.positive,
            self.negative + o.negative,
            self.null + o.null,
        )
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.null == 0 {
            write!(f, "({},{})", self.positive, self.negative)
        } else {
            write!(f, "({},{},{})", self.positive, self.negative, self.null)
        }
    }
}

/// Recipe for the standard building blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardKind {
    E8Negative,
    Hyperbolic,
    DirectSum(Vec<StandardKind>),
    Twist(Box<StandardKind>, u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    name: String,
    gram: IntegerMatrix,
}

/// JSON form `{"name": ..., "gram": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeDescriptor {
    pub name: String,
    #[serde(with = "crate::json::matrix")]
    pub gram: IntegerMatrix,
}

impl TryFrom<LatticeDescriptor> for Lattice {
    type Error = Error;
    fn try_from(d: LatticeDescriptor) -> Result<Self> {
        Lattice::new(d.name, d.gram)
    }
}

impl From<&Lattice> for LatticeDescriptor {
    fn from(l: &Lattice) -> Self {
        Self {
            name: l.name.clone(),
            gram: l.gram.clone(),
        }
    }
}

pub fn build_standard(kind: &StandardKind) -> Result<Lattice> {
    match kind {
        StandardKind::E8Negative => Ok(Lattice::e8_negative()),
        StandardKind::Hyperbolic => Ok(Lattice::hyperbolic()),
        StandardKind::DirectSum(parts) => {
            let built = parts.iter().map(build_standard).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&Lattice> = built.iter().collect();
            Ok(Lattice::direct_sum(&refs))
        }
        StandardKind::Twist(inner, n) => build_standard(inner)?.twist(*n),
    }
}

impl Lattice {
    pub fn new(name: impl Into<String>, gram: IntegerMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch {
                op: "Lattice::new",
                expected: gram.rows(),
                found: gram.cols(),
            });
        }
        if let Some((row, col)) = gram.first_asymmetry() {
            return Err(Error::AsymmetricGram { row, col });
        }
        Ok(Self {
            name: name.into(),
            gram,
        })
    }

    pub fn e8_negative() -> Self {
        let mut g = IntegerMatrix::zeros(8, 8);
        for i in 0..8 {
            g.set(i, i, BigInt::from(-2));
        }
        for &(a, b) in &E8_DYNKIN_EDGES {
            g.set(a, b, BigInt::one());
            g.set(b, a, BigInt::one());
        }
        Self {
            name: "-E8".into(),
            gram: g,
        }
    }

    pub fn hyperbolic() -> Self {
        Self {
            name: "H".into(),
            gram: IntegerMatrix::from_rows(&[[0, 1], [1, 0]]).expect("2x2"),
        }
    }

    pub fn direct_sum(parts: &[&Lattice]) -> Self {
        let grams: Vec<&IntegerMatrix> = parts.iter().map(|l| &l.gram).collect();
        let name = parts
            .iter()
            .map(|l| l.name.as_str())
            .collect::<Vec<_>>()
            .join("+");
        Self {
            name: if name.is_empty() { "0".into() } else { name },
            gram: IntegerMatrix::block_diagonal(&grams),
        }
    }

    /// Same module with the form multiplied by `n`.
    pub fn twist(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("twist factor must be >= 1".into()));
        }
        Ok(Self {
            name: format!("{}({n})", self.name),
            gram: self.gram.scaled(&BigInt::from(n)),
        })
    }

    /// Lattice spanned by `rows` (ambient coordinates) with the restricted form.
    pub fn sublattice(&self, name: impl Into<String>, rows: &IntegerMatrix) -> Result<Self> {
        let g = rows
            .checked_mul(&self.gram)?
            .checked_mul(&rows.transpose())?;
        Lattice::new(name, g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gram(&self) -> &IntegerMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_even(&self) -> bool {
        self.first_odd_diagonal().is_none()
    }

    pub(crate) fn first_odd_diagonal(&self) -> Option<usize> {
        (0..self.rank()).find(|&i| self.gram.get(i, i).is_odd())
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant().expect("square")
    }

    pub fn inner(&self, v: &[BigInt], w: &[BigInt]) -> Result<BigInt> {
        for x in [v, w] {
            if x.len() != self.rank() {
                return Err(Error::DimensionMismatch {
                    op: "inner",
                    expected: self.rank(),
                    found: x.len(),
                });
            }
        }
        Ok(dot(v, &self.gram.mul_vec(w)?))
    }

    pub fn norm(&self, v: &[BigInt]) -> Result<BigInt> {
        self.inner(v, v)
    }

    pub fn signature(&self) -> Signature {
        inertia(&self.gram)
    }

    /// Saturated basis of `{v : v.s = 0 for all rows s}`.
    pub fn orthogonal_complement(&self, s: &IntegerMatrix) -> Result<IntegerMatrix> {
        if s.rows() == 0 {
            return Ok(IntegerMatrix::identity(self.rank()));
        }
        if s.cols() != self.rank() {
            return Err(Error::DimensionMismatch {
                op: "orthogonal_complement",
                expected: self.rank(),
                found: s.cols(),
            });
        }
        Ok(kernel(&s.checked_mul(&self.gram)?))
    }

    /// `Z^n / G Z^n` for the Gram matrix `G`.
    pub fn discriminant_group(&self) -> Result<FiniteAbelianGroup> {
        let snf = smith_normal_form(&self.gram);
        if snf.rank < self.rank() {
            return Err(Error::Degenerate);
        }
        Ok(FiniteAbelianGroup::from_smith_diagonal(&snf.diagonal()))
    }

    /// All vectors of norm `target` in a definite lattice, in ascending
    /// lexicographic order of coordinates, truncated to `limit` if given.
    pub fn vectors_of_norm(&self, target: &BigInt, limit: Option<usize>) -> Result<Vec<Vec<BigInt>>> {
        let n = self.rank();
        let sig = self.signature();
        let sign = if sig.positive == n {
            BigInt::one()
        } else if sig.negative == n {
            -BigInt::one()
        } else {
            return Err(Error::Indefinite);
        };
        let bound = target * &sign;
        if bound.is_negative() {
            return Err(Error::WrongSignTarget(target.to_string()));
        }
        let cap = limit.unwrap_or(usize::MAX);
        if cap == 0 {
            return Ok(Vec::new());
        }
        if bound.is_zero() {
            return Ok(vec![vec![BigInt::zero(); n]]);
        }
        let q = FinckePohst::new(&self.gram.scaled(&sign));
        let mut out = Vec::new();
        let mut y = vec![BigInt::zero(); n];
        q.descend(n, &BigRational::from_integer(bound), &mut y, &mut |y| {
            let x: Vec<BigInt> = y.iter().rev().cloned().collect();
            if &self.norm(&x).expect("rank matches") == target {
                out.push(x);
            }
            out.len() < cap
        });
        Ok(out)
    }
}

/// Exact Fincke-Pohst data for a positive definite form, built on the
/// coordinate-reversed Gram so that the outermost search level is
/// coordinate 0 of the original basis.
struct FinckePohst {
    n: usize,
    q: Vec<Vec<BigRational>>,
}

impl FinckePohst {
    fn new(gram: &IntegerMatrix) -> Self {
        let n = gram.rows();
        let mut q: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(gram.get(n - 1 - i, n - 1 - j).clone()))
                    .collect()
            })
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                let v = q[i][j].clone() / &q[i][i];
                q[j][i] = q[i][j].clone();
                q[i][j] = v;
            }
            for k in i + 1..n {
                for l in k..n {
                    let d = q[k][i].clone() * &q[i][l];
                    q[k][l] -= d;
                }
            }
        }
        Self { n, q }
    }

    /// Assigns `y[level-1]` and recurses; returns false once `visit` asks to stop.
    fn descend(
        &self,
        level: usize,
        budget: &BigRational,
        y: &mut Vec<BigInt>,
        visit: &mut dyn FnMut(&[BigInt]) -> bool,
    ) -> bool {
        if level == 0 {
            return visit(y);
        }
        let i = level - 1;
        let mut center = BigRational::zero();
        for j in i + 1..self.n {
            center -= self.q[i][j].clone() * BigRational::from_integer(y[j].clone());
        }
        let radius_sq = budget / &self.q[i][i];
        let r = radius_sq.floor().to_integer().sqrt();
        let fits = |t: &BigInt| {
            let d = BigRational::from_integer(t.clone()) - &center;
            &d * &d <= radius_sq
        };
        let mut lo = center.floor().to_integer() - &r - 1;
        let mut hi = center.ceil().to_integer() + &r + 1;
        while lo <= hi && !fits(&lo) {
            lo += 1;
        }
        while hi >= lo && !fits(&hi) {
            hi -= 1;
        }
        let mut t = lo;
        while t <= hi {
            let d = BigRational::from_integer(t.clone()) - &center;
            let rest = budget - &self.q[i][i] * &d * &d;
            y[i] = t.clone();
            if !self.descend(i, &rest, y, visit) {
                return false;
            }
            t += 1;
        }
        y[i] = BigInt::zero();
        true
    }
}

/// Inertia of a symmetric integer matrix by exact congruence diagonalization.
pub fn inertia(gram: &IntegerMatrix) -> Signature {
    let n = gram.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(gram.get(i, j).clone()))
                .collect()
        })
        .collect();
    let mut sig = Signature::new(0, 0, 0);
    for k in 0..n {
        if let Some(p) = (k..n).find(|&i| !a[i][i].is_zero()) {
            sym_swap(&mut a, k, p);
        } else {
            // zero diagonal: fold a partner into the first row with a nonzero off-diagonal
            let pair = (k..n).find_map(|i| (i + 1..n).find(|&j| !a[i][j].is_zero()).map(|j| (i, j)));
            match pair {
                Some((i, j)) => {
                    sym_add(&mut a, i, j);
                    sym_swap(&mut a, k, i);
                }
                None => {
                    sig.null += n - k;
                    break;
                }
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone() / &pivot;
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
        for i in k + 1..n {
            a[k][i] = BigRational::zero();
        }
    }
    sig
}

fn sym_swap(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Basis change `b_i <- b_i + b_j`.
fn sym_add(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    let n = a.len();
    for k in 0..n {
        let v = a[j][k].clone();
        a[i][k] += v;
    }
    for row in a.iter_mut().take(n) {
        let v = row[j].clone();
        row[i] += v;
    }
}
