//! Lattices with an isometry of finite order, their eigenlattices and the
//! Tate cohomology of the induced cyclic action.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{
    kernel, quotient_invariants, FiniteAbelianGroup, IntegerMatrix, IntegralSolver, Obstruction,
    QuotientGroup, SolveOutcome,
};
use crate::lattice::{Lattice, LatticeDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eigensign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeParity {
    /// `Ker(Norm) / Im(1 - sigma)`
    Odd,
    /// `Ker(1 - sigma) / Im(Norm)`
    Even,
}

/// A lattice with an isometry `sigma` acting on coordinate columns, of exact order `order`.
#[derive(Clone, Debug)]
pub struct InvolutiveLattice {
    base: Lattice,
    sigma: IntegerMatrix,
    order: usize,
    one_minus_sigma: IntegralSolver,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvolutiveDescriptor {
    pub lattice: LatticeDescriptor,
    #[serde(with = "crate::json::matrix")]
    pub sigma: IntegerMatrix,
    pub order: usize,
}

impl TryFrom<InvolutiveDescriptor> for InvolutiveLattice {
    type Error = Error;
    fn try_from(d: InvolutiveDescriptor) -> Result<Self> {
        InvolutiveLattice::new(Lattice::try_from(d.lattice)?, d.sigma, d.order)
    }
}

/// Membership verdict for `v in (1 - sigma) L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImageMembership {
    /// `(1 - sigma) mu = v`
    Member { mu: Vec<BigInt> },
    NotMember(Obstruction),
}

impl ImageMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, ImageMembership::Member { .. })
    }
}

impl InvolutiveLattice {
    pub fn new(base: Lattice, sigma: IntegerMatrix, order: usize) -> Result<Self> {
        let n = base.rank();
        if sigma.rows() != n || sigma.cols() != n {
            return Err(Error::DimensionMismatch {
                op: "InvolutiveLattice::new",
                expected: n,
                found: sigma.rows(),
            });
        }
        if order < 2 {
            return Err(Error::InvalidArgument("isometry order must be >= 2".into()));
        }
        let pulled = sigma
            .transpose()
            .checked_mul(base.gram())?
            .checked_mul(&sigma)?;
        if &pulled != base.gram() {
            return Err(Error::NotIsometry);
        }
        let id = IntegerMatrix::identity(n);
        let mut power = sigma.clone();
        for _ in 1..order {
            power = power.checked_mul(&sigma)?;
        }
        if power != id {
            return Err(Error::WrongOrder(order));
        }
        let one_minus_sigma = IntegralSolver::new(&id.checked_sub(&sigma)?);
        Ok(Self {
            base,
            sigma,
            order,
            one_minus_sigma,
        })
    }

    pub fn base(&self) -> &Lattice {
        &self.base
    }

    pub fn sigma(&self) -> &IntegerMatrix {
        &self.sigma
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.sigma.mul_vec(v)
    }

    /// `1 + sigma + ... + sigma^(n-1)`
    pub fn norm_map(&self) -> IntegerMatrix {
        let n = self.base.rank();
        let mut total = IntegerMatrix::identity(n);
        let mut power = IntegerMatrix::identity(n);
        for _ in 1..self.order {
            power = power.checked_mul(&self.sigma).expect("square");
            total = total.checked_add(&power).expect("same shape");
        }
        total
    }

    pub fn one_minus_sigma(&self) -> IntegerMatrix {
        IntegerMatrix::identity(self.base.rank())
            .checked_sub(&self.sigma)
            .expect("same shape")
    }

    /// Saturated basis of `Ker(sigma - sign)`.
    pub fn eigenlattice(&self, sign: Eigensign) -> IntegerMatrix {
        let n = self.base.rank();
        let s = match sign {
            Eigensign::Plus => BigInt::from(1),
            Eigensign::Minus => BigInt::from(-1),
        };
        let shifted = self
            .sigma
            .checked_sub(&IntegerMatrix::identity(n).scaled(&s))
            .expect("same shape");
        kernel(&shifted)
    }

    /// Tate cohomology of the cyclic group generated by `sigma`, with free rank.
    pub fn tate_cohomology_with_rank(&self, parity: DegreeParity) -> QuotientGroup {
        let n = self.base.rank();
        let (num, den) = match parity {
            DegreeParity::Odd => (kernel(&self.norm_map()), self.one_minus_sigma()),
            DegreeParity::Even => (kernel(&self.one_minus_sigma()), self.norm_map()),
        };
        // images are column spans
        quotient_invariants(n, &num, &den.transpose())
            .expect("image lies in kernel for a cyclic action")
    }

    pub fn tate_cohomology(&self, parity: DegreeParity) -> FiniteAbelianGroup {
        let q = self.tate_cohomology_with_rank(parity);
        debug_assert_eq!(q.free_rank, 0);
        q.torsion
    }

    /// Decides `v in (1 - sigma) L`, with a preimage when it is.
    pub fn in_image_one_minus_sigma(&self, v: &[BigInt]) -> Result<ImageMembership> {
        Ok(match self.one_minus_sigma.solve(v)? {
            SolveOutcome::Solution(mu) => {
                if self.order == 2 {
                    // (1 + sigma)(1 - sigma) = 0 for an involution
                    let w = self.sigma.mul_vec(v)?;
                    assert!(v.iter().zip(&w).all(|(a, b)| (a + b).is_zero()));
                }
                ImageMembership::Member { mu }
            }
            SolveOutcome::Unsolvable(o) => ImageMembership::NotMember(o),
        })
    }

    /// Index group `L / (L^+ + L^-)` for an involution.
    pub fn eigen_index(&self) -> Result<FiniteAbelianGroup> {
        let plus = self.eigenlattice(Eigensign::Plus);
        let minus = self.eigenlattice(Eigensign::Minus);
        let n = self.base.rank();
        let q = quotient_invariants(n, &IntegerMatrix::identity(n), &plus.vstack(&minus)?)?;
        if q.free_rank != 0 {
            return Err(Error::InvalidArgument(
                "eigenlattices do not span a finite-index sublattice".into(),
            ));
        }
        Ok(q.torsion)
    }
}
