//! Hypersurfaces `H_lambda = {(lambda . omega) = 0}` of the period domain of
//! marked Enriques surfaces, and exact membership tests for rational periods.
//!
//! Period points are written in the fixed basis of `L^-` exposed by
//! [`EnriquesModel::anti_invariant_basis`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enriques::{hyperbolic_vector, EnriquesModel, K3_RANK};
use crate::error::{Error, Result};
use crate::intlinalg::{coordinates_in, content, is_primitive_vector, kernel, IntegerMatrix};
use crate::lattice::{inertia, Lattice, Signature};

pub const ANTI_RANK: usize = 12;

/// Caveat attached to every census: the certified condition is the weaker one.
pub const NONEMPTY_NOTE: &str = "H_lambda meets the period domain iff norm < -2; only the existence of a positive 2-plane in lambda^perp (norm < 0) is certified here";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceRecord {
    pub k: u64,
    #[serde(with = "crate::json::bigint")]
    pub norm: BigInt,
    /// In L-coordinates.
    #[serde(with = "crate::json::bigint_vec")]
    pub witness: Vec<BigInt>,
    /// In the fixed `L^-` basis.
    #[serde(with = "crate::json::bigint_vec")]
    pub anti_coordinates: Vec<BigInt>,
    #[serde(with = "crate::json::bigint")]
    pub divisibility: BigInt,
    pub complement_signature: Signature,
    pub primitive: bool,
    pub anti_invariant: bool,
    /// Records sharing a class index have equal norm; distinct norms give distinct hypersurfaces.
    pub hypersurface_class: usize,
}

/// `omega = re + i im` in the fixed `L^-` basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodPoint {
    #[serde(with = "crate::json::rational_vec")]
    pub re: Vec<BigRational>,
    #[serde(with = "crate::json::rational_vec")]
    pub im: Vec<BigRational>,
}

impl PeriodPoint {
    pub fn from_integers(re: &[i64], im: &[i64]) -> Self {
        let conv = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        Self {
            re: conv(re),
            im: conv(im),
        }
    }

    fn validate(&self) -> Result<()> {
        for part in [&self.re, &self.im] {
            if part.len() != ANTI_RANK {
                return Err(Error::DimensionMismatch {
                    op: "period point",
                    expected: ANTI_RANK,
                    found: part.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaVerdict {
    InOmega,
    NotInOmega,
    /// `N` is not negative definite, so the root condition has no finite certificate.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceCheck {
    #[serde(with = "crate::json::bigint_vec")]
    pub lambda: Vec<BigInt>,
    pub pairing_re: String,
    pub pairing_im: String,
    pub on_hypersurface: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub verdict: OmegaVerdict,
    pub failed_checks: Vec<String>,
    pub re_square: String,
    pub im_square: String,
    pub re_dot_im: String,
    pub isotropic: bool,
    pub positive: bool,
    /// Rank and signature of `N = {v in L^- : v . re = v . im = 0}`.
    pub orthogonal_rank: Option<usize>,
    pub orthogonal_signature: Option<Signature>,
    /// Norm -2 vectors of `N`, in the fixed `L^-` basis.
    #[serde(with = "crate::json::vec_of_bigint_vec")]
    pub roots: Vec<Vec<BigInt>>,
    pub hypersurface_check: Option<HypersurfaceCheck>,
}

fn anti_lattice(model: &EnriquesModel) -> Lattice {
    model.anti_invariant_lattice()
}

/// Coordinates of an anti-invariant L-vector in the fixed `L^-` basis.
pub fn anti_coordinates(model: &EnriquesModel, lambda: &[BigInt]) -> Result<Vec<BigInt>> {
    if lambda.len() != K3_RANK {
        return Err(Error::DimensionMismatch {
            op: "K3 lattice vector",
            expected: K3_RANK,
            found: lambda.len(),
        });
    }
    coordinates_in(model.anti_invariant_basis(), lambda)?.ok_or(Error::NotInLattice)
}

/// `gcd |lambda . mu|` over the basis of `L^-`.
pub fn divisibility(model: &EnriquesModel, lambda: &[BigInt]) -> Result<BigInt> {
    if lambda.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector("divisibility"));
    }
    let c = anti_coordinates(model, lambda)?;
    let pairings = anti_lattice(model).gram().vec_mul(&c)?;
    Ok(content(&pairings))
}

/// Signature of the saturated complement of `lambda` inside `L^-`.
pub fn orthogonal_signature_in_anti(model: &EnriquesModel, lambda: &[BigInt]) -> Result<Signature> {
    if lambda.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector("orthogonal signature"));
    }
    let anti = anti_lattice(model);
    let c = anti_coordinates(model, lambda)?;
    let functional = IntegerMatrix::from_big_rows(vec![anti.gram().vec_mul(&c)?], ANTI_RANK)?;
    let perp = kernel(&functional);
    Ok(anti.sublattice("lambda-perp", &perp)?.signature())
}

fn census_record(model: &EnriquesModel, k: u64) -> Result<HypersurfaceRecord> {
    let witness = hyperbolic_vector(1, -(k as i64));
    let norm = model.k3_lattice().norm(&witness)?;
    let divisibility = divisibility(model, &witness)?;
    Ok(HypersurfaceRecord {
        k,
        anti_coordinates: anti_coordinates(model, &witness)?,
        divisibility,
        complement_signature: orthogonal_signature_in_anti(model, &witness)?,
        primitive: is_primitive_vector(&witness, None)?,
        anti_invariant: model.is_anti_invariant(&witness)?,
        hypersurface_class: 0,
        norm,
        witness,
    })
}

/// One record per odd `k` in `3..=k_max`, witness `(0, 0, e - k f)`.
pub fn hypersurface_census(model: &EnriquesModel, k_max: u64) -> Result<Vec<HypersurfaceRecord>> {
    if k_max < 3 {
        return Err(Error::InvalidArgument(format!("k_max must be >= 3, got {k_max}")));
    }
    let ks: Vec<u64> = (3..=k_max).step_by(2).collect();
    let mut records: Vec<HypersurfaceRecord> = ks
        .par_iter()
        .map(|&k| census_record(model, k))
        .collect::<Result<_>>()?;
    let mut norms: Vec<BigInt> = Vec::new();
    for r in &mut records {
        r.hypersurface_class = match norms.iter().position(|n| n == &r.norm) {
            Some(i) => i,
            None => {
                norms.push(r.norm.clone());
                norms.len() - 1
            }
        };
    }
    Ok(records)
}

/// Re-checks the stored invariants of a record.
pub fn verify_record(model: &EnriquesModel, r: &HypersurfaceRecord) -> Result<bool> {
    let four = BigInt::from(4);
    Ok(is_primitive_vector(&r.witness, None)?
        && model.is_anti_invariant(&r.witness)?
        && model.k3_lattice().norm(&r.witness)? == r.norm
        && r.norm.mod_floor(&four) == BigInt::from(2)
        && divisibility(model, &r.witness)? == r.divisibility
        && (&r.norm % &r.divisibility).is_zero())
}

fn rational_form(gram: &IntegerMatrix, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let mut total = BigRational::zero();
    for i in 0..gram.rows() {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..gram.cols() {
            let g = gram.get(i, j);
            if !g.is_zero() && !y[j].is_zero() {
                total += &x[i] * BigRational::from_integer(g.clone()) * &y[j];
            }
        }
    }
    total
}

/// Integer multiple of `gram * x` with the same kernel.
fn cleared_functional(gram: &IntegerMatrix, x: &[BigRational]) -> Vec<BigInt> {
    let values: Vec<BigRational> = (0..gram.rows())
        .map(|i| {
            (0..gram.cols()).fold(BigRational::zero(), |acc, j| {
                acc + BigRational::from_integer(gram.get(i, j).clone()) * &x[j]
            })
        })
        .collect();
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    values
        .iter()
        .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer())
        .collect()
}

/// Exact membership of `[omega]` in the period domain.
pub fn omega_membership(
    model: &EnriquesModel,
    omega: &PeriodPoint,
    lambda_check: Option<&[BigInt]>,
) -> Result<OmegaReport> {
    omega.validate()?;
    let anti = anti_lattice(model);
    let g = anti.gram();
    let re2 = rational_form(g, &omega.re, &omega.re);
    let im2 = rational_form(g, &omega.im, &omega.im);
    let reim = rational_form(g, &omega.re, &omega.im);
    let isotropic = re2 == im2 && reim.is_zero();
    let positive = re2.is_positive();

    let hypersurface_check = match lambda_check {
        None => None,
        Some(lambda) => {
            let c = anti_coordinates(model, lambda)?;
            let c: Vec<BigRational> = c.into_iter().map(BigRational::from_integer).collect();
            let pr = rational_form(g, &c, &omega.re);
            let pi = rational_form(g, &c, &omega.im);
            Some(HypersurfaceCheck {
                lambda: lambda.to_vec(),
                on_hypersurface: pr.is_zero() && pi.is_zero(),
                pairing_re: crate::json::format_rational(&pr),
                pairing_im: crate::json::format_rational(&pi),
            })
        }
    };

    let mut failed_checks = Vec::new();
    if !isotropic {
        failed_checks.push("isotropy: omega.omega = 0".to_string());
    }
    if !positive {
        failed_checks.push("positivity: omega.conj(omega) > 0".to_string());
    }
    let mut report = OmegaReport {
        verdict: OmegaVerdict::NotInOmega,
        failed_checks,
        re_square: crate::json::format_rational(&re2),
        im_square: crate::json::format_rational(&im2),
        re_dot_im: crate::json::format_rational(&reim),
        isotropic,
        positive,
        orthogonal_rank: None,
        orthogonal_signature: None,
        roots: Vec::new(),
        hypersurface_check,
    };
    if !report.failed_checks.is_empty() {
        return Ok(report);
    }

    let constraints = IntegerMatrix::from_big_rows(
        vec![cleared_functional(g, &omega.re), cleared_functional(g, &omega.im)],
        ANTI_RANK,
    )?;
    let n_basis = kernel(&constraints);
    let n_gram = n_basis.checked_mul(g)?.checked_mul(&n_basis.transpose())?;
    let sig = inertia(&n_gram);
    report.orthogonal_rank = Some(n_basis.rows());
    report.orthogonal_signature = Some(sig);
    if sig.negative != n_basis.rows() {
        report.verdict = OmegaVerdict::Indeterminate;
        return Ok(report);
    }
    if n_basis.rows() > 0 {
        let n = Lattice::new("N", n_gram)?;
        for r in n.vectors_of_norm(&BigInt::from(-2), None)? {
            report.roots.push(n_basis.vec_mul(&r)?);
        }
    }
    if report.roots.is_empty() {
        report.verdict = OmegaVerdict::InOmega;
    } else {
        report
            .failed_checks
            .push("roots: omega is orthogonal to a norm -2 vector of L^-".to_string());
    }
    Ok(report)
}

/// Period point in `Omega` with `N = (-E8)(2) + <-4> + <-4>`.
pub fn golden_period_point() -> PeriodPoint {
    let mut re = [0i64; ANTI_RANK];
    let mut im = [0i64; ANTI_RANK];
    re[8] = 1;
    re[9] = 1;
    im[10] = 1;
    im[11] = 2;
    PeriodPoint::from_integers(&re, &im)
}

/// Period point orthogonal to the root `(0, 0, e - f)`.
pub fn root_period_point() -> PeriodPoint {
    let mut re = [0i64; ANTI_RANK];
    re[8] = 1;
    re[9] = 1;
    let mut im = [0i64; ANTI_RANK];
    im[8] = 1;
    im[9] = -1;
    im[10] = 2;
    im[11] = 2;
    PeriodPoint::from_integers(&re, &im)
}
