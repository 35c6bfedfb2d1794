//! The K3 lattice `L = E + E + H` of an Enriques double cover.
//!
//! Coordinates: `E = (-E8) + H` has rank 10 (eight Dynkin coordinates, then
//! its own hyperbolic pair). A vector of `L` is `(alpha, alpha', beta)` with
//! `alpha` in positions `0..10`, `alpha'` in `10..20` and `beta` in the last
//! hyperbolic plane at positions 20 (`e`) and 21 (`f`).
//!
//! The involution is `rho(alpha, alpha', beta) = (alpha', alpha, -beta)`;
//! pull-back from the surface is the diagonal `delta(alpha) = (alpha, alpha, 0)`
//! and push-forward is its adjoint `(alpha, alpha', beta) -> alpha + alpha'`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{
    coordinates_in, hermite_rows, ivec, saturation, span_intersect_kernel, FiniteAbelianGroup,
    IntegerMatrix, IntegralSolver, SolveOutcome,
};
use crate::involution::{DegreeParity, Eigensign, ImageMembership, InvolutiveLattice};
use crate::lattice::Lattice;
use crate::mod2::{all_vectors, f2_dot, reduce_mod2, standard_lift, F2Matrix};

pub const K3_RANK: usize = 22;
pub const SURFACE_RANK: usize = 10;
/// Position of `e` in the last hyperbolic summand.
pub const E_INDEX: usize = 20;
/// Position of `f` in the last hyperbolic summand.
pub const F_INDEX: usize = 21;
/// Position of `k_S` in the mod-2 surface basis.
pub const KS_INDEX: usize = 10;
/// Position of `beta_0` in the mod-2 surface basis.
pub const BETA_INDEX: usize = 11;
pub const SURFACE_MOD2_DIM: usize = 12;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 1729;

/// Assembles `(alpha, alpha', beta)` into L-coordinates.
pub fn compose(alpha: &[i64], alpha2: &[i64], beta: [i64; 2]) -> Vec<BigInt> {
    assert_eq!(alpha.len(), SURFACE_RANK);
    assert_eq!(alpha2.len(), SURFACE_RANK);
    let mut v = ivec(alpha);
    v.extend(ivec(alpha2));
    v.extend(ivec(&beta));
    v
}

/// `(0, 0, a e + b f)`
pub fn hyperbolic_vector(a: i64, b: i64) -> Vec<BigInt> {
    compose(&[0; SURFACE_RANK], &[0; SURFACE_RANK], [a, b])
}

/// Integral lift `(0, 0, e + f)` of the class with `q = 1` in `H/2H`.
pub fn epsilon_lift() -> Vec<BigInt> {
    hyperbolic_vector(1, 1)
}

/// Mod-2 model of `H^2(S, Z/2)` with basis `x_1..x_10, k_S, beta_0` and the
/// pull-back to `L/2L`.
///
/// `beta_0` is normalized by a choice of its pairings with the `x_i`; the
/// default choice is zero, and `beta_shift` records any other one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceMod2Model {
    pairing: F2Matrix,
    /// Columns are the images of the surface basis in `L/2L` (22 x 12).
    pi_star: F2Matrix,
    /// Pairing-adjoint of `pi_star` (12 x 22).
    pi_lower_star: F2Matrix,
    beta_shift: Vec<bool>,
}

impl SurfaceMod2Model {
    pub fn pairing(&self) -> &F2Matrix {
        &self.pairing
    }

    pub fn pi_star_matrix(&self) -> &F2Matrix {
        &self.pi_star
    }

    pub fn pi_lower_star_matrix(&self) -> &F2Matrix {
        &self.pi_lower_star
    }

    pub fn beta_shift(&self) -> &[bool] {
        &self.beta_shift
    }

    pub fn dot(&self, a: &[bool], b: &[bool]) -> bool {
        f2_dot(&self.pairing, a, b)
    }

    pub fn square(&self, a: &[bool]) -> bool {
        self.dot(a, a)
    }

    pub fn pi_star(&self, a: &[bool]) -> Vec<bool> {
        self.pi_star.mul_vec(a)
    }

    pub fn pi_lower_star(&self, v: &[bool]) -> Vec<bool> {
        self.pi_lower_star.mul_vec(v)
    }

    pub fn basis_vector(i: usize) -> Vec<bool> {
        let mut v = vec![false; SURFACE_MOD2_DIM];
        v[i] = true;
        v
    }

    /// Image of `beta_0` in `L/2L`.
    pub fn beta_image(&self) -> Vec<bool> {
        self.pi_star(&Self::basis_vector(BETA_INDEX))
    }

    /// Flips the self-pairing of `beta_0`; only for exercising failure paths.
    #[doc(hidden)]
    pub fn corrupted(&self) -> Self {
        let mut out = self.clone();
        let b = out.pairing.get(BETA_INDEX, BETA_INDEX);
        out.pairing.set(BETA_INDEX, BETA_INDEX, !b);
        out
    }
}

/// Push-forward to `H^2(S, Z) = E + Z/2 K_S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushforward {
    /// Torsion-free part, in E-coordinates.
    pub free: Vec<BigInt>,
    /// Coefficient of the torsion class `K_S`.
    pub torsion: bool,
}

impl Pushforward {
    pub fn is_zero(&self) -> bool {
        !self.torsion && self.free.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct EnriquesModel {
    k3: Lattice,
    surface: Lattice,
    rho: InvolutiveLattice,
    delta: IntegerMatrix,
    pi_lower: IntegerMatrix,
    anti_basis: IntegerMatrix,
    mod2: SurfaceMod2Model,
}

/// Picard data: generator rows in L-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardSpec {
    pub label: String,
    #[serde(with = "crate::json::matrix")]
    pub generators: IntegerMatrix,
}

impl PicardSpec {
    pub fn new(label: impl Into<String>, generators: IntegerMatrix) -> Self {
        Self {
            label: label.into(),
            generators,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PicardWitness,
    TranscendentalForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "crate::json::bigint_vec")]
    pub vector: Vec<BigInt>,
    #[serde(with = "crate::json::bigint")]
    pub norm: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Consistency {
    pub other_method: Method,
    pub other_vanishes: bool,
    pub agree: bool,
}

/// Outcome of one vanishing test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub label: String,
    pub vanishes: bool,
    pub method: Method,
    pub witness: Option<Witness>,
    /// Values of the mod-2 form on the basis of `T`.
    pub form_values: Option<Vec<u8>>,
    pub consistency: Option<Consistency>,
    /// The criterion the decision instantiates.
    pub criterion: String,
    pub picard_rank: usize,
    pub saturated: bool,
    /// Pairings of `beta_0` with `x_1..x_10` in the mod-2 surface model.
    pub beta_normalization: Vec<u8>,
    pub warnings: Vec<String>,
}

const PICARD_CRITERION: &str =
    "vanishes iff the saturated Picard lattice has an anti-invariant class with square = 2 mod 4";
const FORM_CRITERION: &str =
    "vanishes iff tau -> (pi^* beta . tau) mod 2 is zero on the transcendental lattice";

/// Saturated, validated Picard sublattice.
struct PreparedPicard {
    basis: IntegerMatrix,
    contains_pullback: bool,
}

impl EnriquesModel {
    pub fn build() -> Self {
        Self::build_with_beta_shift(&[false; SURFACE_RANK])
    }

    /// Model whose mod-2 class `beta_0` pairs with `x_i` as `shift[i]`.
    pub fn build_with_beta_shift(shift: &[bool]) -> Self {
        assert_eq!(shift.len(), SURFACE_RANK);
        let e8 = Lattice::e8_negative();
        let h = Lattice::hyperbolic();
        let surface = Lattice::direct_sum(&[&e8, &h]);
        let k3 = Lattice::direct_sum(&[&surface, &surface, &h]);

        let mut sigma = IntegerMatrix::zeros(K3_RANK, K3_RANK);
        for i in 0..SURFACE_RANK {
            sigma.set(i, SURFACE_RANK + i, BigInt::one());
            sigma.set(SURFACE_RANK + i, i, BigInt::one());
        }
        sigma.set(E_INDEX, E_INDEX, BigInt::from(-1));
        sigma.set(F_INDEX, F_INDEX, BigInt::from(-1));
        let rho = InvolutiveLattice::new(k3.clone(), sigma, 2).expect("rho is an involutive isometry");

        let mut delta = IntegerMatrix::zeros(K3_RANK, SURFACE_RANK);
        let mut pi_lower = IntegerMatrix::zeros(SURFACE_RANK, K3_RANK);
        for i in 0..SURFACE_RANK {
            delta.set(i, i, BigInt::one());
            delta.set(SURFACE_RANK + i, i, BigInt::one());
            pi_lower.set(i, i, BigInt::one());
            pi_lower.set(i, SURFACE_RANK + i, BigInt::one());
        }

        let mut anti = IntegerMatrix::zeros(12, K3_RANK);
        for i in 0..SURFACE_RANK {
            anti.set(i, i, BigInt::one());
            anti.set(i, SURFACE_RANK + i, BigInt::from(-1));
        }
        anti.set(10, E_INDEX, BigInt::one());
        anti.set(11, F_INDEX, BigInt::one());

        let mod2 = build_surface_mod2_model(&surface, &k3, &delta, shift);
        let model = Self {
            k3,
            surface,
            rho,
            delta,
            pi_lower,
            anti_basis: anti,
            mod2,
        };
        model.verify().expect("model invariants");
        model
    }

    fn verify(&self) -> Result<()> {
        let g = self.k3.gram();
        let ge = self.surface.gram();
        let two = BigInt::from(2);
        let fail = |what: &str| Err(Error::InvalidArgument(format!("model invariant failed: {what}")));
        // (delta a)^2 = 2 a^2
        let pulled = self.delta.transpose().checked_mul(g)?.checked_mul(&self.delta)?;
        if pulled != ge.scaled(&two) {
            return fail("delta scales the form by 2");
        }
        if &self.rho.sigma().checked_mul(&self.delta)? != &self.delta {
            return fail("rho fixes delta(E)");
        }
        if self.pi_lower.checked_mul(&self.delta)? != IntegerMatrix::identity(SURFACE_RANK).scaled(&two) {
            return fail("pi_* pi^* = 2");
        }
        // pi_* is the adjoint of delta
        if ge.checked_mul(&self.pi_lower)? != self.delta.transpose().checked_mul(g)? {
            return fail("pi_* adjoint to delta");
        }
        let minus = self.rho.eigenlattice(Eigensign::Minus);
        if hermite_rows(&self.anti_basis) != minus {
            return fail("fixed anti-invariant basis spans L^-");
        }
        Ok(())
    }

    pub fn k3_lattice(&self) -> &Lattice {
        &self.k3
    }

    /// `E = (-E8) + H`, the torsion-free part of `H^2(S, Z)`.
    pub fn surface_lattice(&self) -> &Lattice {
        &self.surface
    }

    pub fn rho(&self) -> &InvolutiveLattice {
        &self.rho
    }

    /// Columns are `delta(x_i)`.
    pub fn delta(&self) -> &IntegerMatrix {
        &self.delta
    }

    /// Rows `delta(x_i)` in L-coordinates.
    pub fn pullback_rows(&self) -> IntegerMatrix {
        self.delta.transpose()
    }

    /// The fixed basis of `L^-`: `(x_i, -x_i, 0)` for `i < 10`, then `(0,0,e)`, `(0,0,f)`.
    pub fn anti_invariant_basis(&self) -> &IntegerMatrix {
        &self.anti_basis
    }

    pub fn anti_invariant_lattice(&self) -> Lattice {
        self.k3
            .sublattice("L-", &self.anti_basis)
            .expect("basis has rank-22 rows")
    }

    pub fn surface_mod2(&self) -> &SurfaceMod2Model {
        &self.mod2
    }

    pub fn tate_h1(&self) -> FiniteAbelianGroup {
        self.rho.tate_cohomology(DegreeParity::Odd)
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != K3_RANK {
            return Err(Error::DimensionMismatch {
                op: "K3 lattice vector",
                expected: K3_RANK,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `(alpha, alpha', beta) -> alpha + alpha'`
    pub fn pi_lower_star_integral(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(v)?;
        self.pi_lower.mul_vec(v)
    }

    /// Push-forward including the `K_S` component, read off the mod-2 model.
    pub fn pi_lower_star(&self, v: &[BigInt]) -> Result<Pushforward> {
        let free = self.pi_lower_star_integral(v)?;
        let reduced: Vec<bool> = v.iter().map(Integer::is_odd).collect();
        let image = self.mod2.pi_lower_star(&reduced);
        Ok(Pushforward {
            free,
            torsion: image[KS_INDEX],
        })
    }

    pub fn pi_star(&self, alpha: &[BigInt]) -> Result<Vec<BigInt>> {
        self.delta.mul_vec(alpha)
    }

    pub fn is_anti_invariant(&self, v: &[BigInt]) -> Result<bool> {
        self.check_len(v)?;
        let w = self.rho.apply(v)?;
        Ok(v.iter().zip(&w).all(|(a, b)| (a + b).is_zero()))
    }

    pub fn in_image_one_minus_rho(&self, v: &[BigInt]) -> Result<ImageMembership> {
        self.check_len(v)?;
        self.rho.in_image_one_minus_sigma(v)
    }

    /// `pi_* lambda = 0` in `H^2(S, Z)` and `lambda` not in `(1 - rho) L`.
    pub fn cor56_condition_i(&self, lambda: &[BigInt]) -> Result<bool> {
        if !self.pi_lower_star(lambda)?.is_zero() {
            return Ok(false);
        }
        Ok(!self.in_image_one_minus_rho(lambda)?.is_member())
    }

    /// `rho lambda = -lambda` and `lambda^2 = 2 mod 4`.
    pub fn cor56_condition_ii(&self, lambda: &[BigInt]) -> Result<bool> {
        if !self.is_anti_invariant(lambda)? {
            return Ok(false);
        }
        Ok(self.k3.norm(lambda)?.mod_floor(&BigInt::from(4)) == BigInt::from(2))
    }

    fn prepare(&self, pic: &PicardSpec, saturate: bool) -> Result<PreparedPicard> {
        let gens = &pic.generators;
        if gens.rows() > 0 && gens.cols() != K3_RANK {
            return Err(Error::DimensionMismatch {
                op: "Picard generators",
                expected: K3_RANK,
                found: gens.cols(),
            });
        }
        let gens = if gens.rows() == 0 {
            IntegerMatrix::zeros(0, K3_RANK)
        } else {
            gens.clone()
        };
        let basis = if saturate {
            saturation(&gens)
        } else {
            hermite_rows(&gens)
        };
        // rho-stability of the rational span, reported against the input rows
        let sat = if saturate { basis.clone() } else { saturation(&gens) };
        let solver = IntegralSolver::new(&sat.transpose());
        for row in 0..gens.rows() {
            let image = self.rho.apply(gens.row(row))?;
            if let SolveOutcome::Unsolvable(_) = solver.solve(&image)? {
                return Err(Error::NotInvariant { row });
            }
        }
        let delta_rows = self.pullback_rows();
        let contains_pullback = (0..SURFACE_RANK).all(|i| {
            matches!(solver.solve(delta_rows.row(i)), Ok(SolveOutcome::Solution(_)))
        });
        Ok(PreparedPicard {
            basis,
            contains_pullback,
        })
    }

    /// Saturated basis of the Picard span.
    pub fn saturated_picard(&self, pic: &PicardSpec) -> Result<IntegerMatrix> {
        Ok(self.prepare(pic, true)?.basis)
    }

    pub fn brauer_vanishes_by_picard(&self, pic: &PicardSpec) -> Result<DecisionReport> {
        self.decide_by_picard(pic, true)
    }

    /// Same test on the raw generator span, skipping saturation. Only for
    /// demonstrating why saturation matters.
    #[doc(hidden)]
    pub fn brauer_vanishes_by_picard_unsaturated(&self, pic: &PicardSpec) -> Result<DecisionReport> {
        self.decide_by_picard(pic, false)
    }

    fn decide_by_picard(&self, pic: &PicardSpec, saturate: bool) -> Result<DecisionReport> {
        let prepared = self.prepare(pic, saturate)?;
        let mut warnings = Vec::new();
        if !prepared.contains_pullback {
            warnings.push("saturated Picard lattice does not contain delta(E)".to_string());
        }
        let one_plus_rho = IntegerMatrix::identity(K3_RANK).checked_add(self.rho.sigma())?;
        let anti = span_intersect_kernel(&prepared.basis, &one_plus_rho)?;
        let anti_lattice = self.k3.sublattice("P-", &anti)?;
        let space = reduce_mod2(&anti_lattice)?;
        let witness = match space.find_q_one_witness()? {
            None => None,
            Some(x) => {
                let vector = anti.vec_mul(&standard_lift(&x))?;
                let norm = self.k3.norm(&vector)?;
                self.check_witness(&prepared.basis, &vector, &norm)?;
                Some(Witness { vector, norm })
            }
        };
        Ok(DecisionReport {
            label: pic.label.clone(),
            vanishes: witness.is_some(),
            method: Method::PicardWitness,
            witness,
            form_values: None,
            consistency: None,
            criterion: PICARD_CRITERION.into(),
            picard_rank: prepared.basis.rows(),
            saturated: saturate,
            beta_normalization: self.normalization_bits(),
            warnings,
        })
    }

    fn check_witness(&self, basis: &IntegerMatrix, v: &[BigInt], norm: &BigInt) -> Result<()> {
        let broken = |what: &str| Err(Error::InvalidArgument(format!("witness failed re-check: {what}")));
        if !self.is_anti_invariant(v)? {
            return broken("anti-invariance");
        }
        if coordinates_in(basis, v)?.is_none() {
            return broken("membership");
        }
        if norm.mod_floor(&BigInt::from(4)) != BigInt::from(2) {
            return broken("square mod 4");
        }
        Ok(())
    }

    /// Saturated orthogonal complement of the saturated Picard lattice.
    pub fn transcendental_complement(&self, pic: &PicardSpec) -> Result<IntegerMatrix> {
        let prepared = self.prepare(pic, true)?;
        let gram = self.k3.sublattice("P", &prepared.basis)?;
        if gram.determinant().is_zero() {
            return Err(Error::DegeneratePicard);
        }
        self.k3.orthogonal_complement(&prepared.basis)
    }

    pub fn brauer_vanishes_by_form(&self, pic: &PicardSpec) -> Result<DecisionReport> {
        let prepared = self.prepare(pic, true)?;
        if !prepared.contains_pullback {
            return Err(Error::MissingPullback(
                "the mod-2 form is only well defined when pi^* H^2(S,Z) lies in the Picard lattice"
                    .into(),
            ));
        }
        // no nondegeneracy gate: for a primitive P, (P^perp)^perp = P regardless
        let t = self.k3.orthogonal_complement(&prepared.basis)?;
        let beta = standard_lift(&self.mod2.beta_image());
        let form_values: Vec<u8> = (0..t.rows())
            .map(|i| {
                let v = self.k3.inner(&beta, t.row(i)).expect("rank 22");
                u8::from(v.is_odd())
            })
            .collect();
        Ok(DecisionReport {
            label: pic.label.clone(),
            vanishes: form_values.iter().all(|&b| b == 0),
            method: Method::TranscendentalForm,
            witness: None,
            form_values: Some(form_values),
            consistency: None,
            criterion: FORM_CRITERION.into(),
            picard_rank: prepared.basis.rows(),
            saturated: true,
            beta_normalization: self.normalization_bits(),
            warnings: Vec::new(),
        })
    }

    /// Runs both tests and cross-links their reports.
    pub fn brauer_decide_both(&self, pic: &PicardSpec) -> Result<(DecisionReport, DecisionReport)> {
        let mut p = self.brauer_vanishes_by_picard(pic)?;
        let mut f = self.brauer_vanishes_by_form(pic)?;
        let agree = p.vanishes == f.vanishes;
        p.consistency = Some(Consistency {
            other_method: Method::TranscendentalForm,
            other_vanishes: f.vanishes,
            agree,
        });
        f.consistency = Some(Consistency {
            other_method: Method::PicardWitness,
            other_vanishes: p.vanishes,
            agree,
        });
        Ok((p, f))
    }

    fn normalization_bits(&self) -> Vec<u8> {
        self.mod2.beta_shift.iter().map(|&b| u8::from(b)).collect()
    }

    /// Torsion profile of `Br(X)[n]` for the K3 cover with the given Picard lattice.
    pub fn k3_torsion_profile(
        &self,
        pic: &PicardSpec,
        n: u64,
        h3_torsion: &FiniteAbelianGroup,
    ) -> Result<TorsionProfile> {
        let sat = self.saturated_picard(pic)?;
        let t = self.k3.orthogonal_complement(&sat)?;
        brauer_torsion_profile(t.rows(), n, h3_torsion)
    }
}

fn build_surface_mod2_model(
    surface: &Lattice,
    k3: &Lattice,
    delta: &IntegerMatrix,
    shift: &[bool],
) -> SurfaceMod2Model {
    let ge = F2Matrix::reduce(surface.gram());
    let n = SURFACE_MOD2_DIM;
    let mut pairing = F2Matrix::zeros(n, n);
    for i in 0..SURFACE_RANK {
        for j in 0..SURFACE_RANK {
            pairing.set(i, j, ge.get(i, j));
        }
    }
    // beta_0 . x_j = (G c)_j for the shift c
    let shift_pairs = ge.mul_vec(shift);
    for j in 0..SURFACE_RANK {
        pairing.set(BETA_INDEX, j, shift_pairs[j]);
        pairing.set(j, BETA_INDEX, shift_pairs[j]);
    }
    pairing.set(KS_INDEX, BETA_INDEX, true);
    pairing.set(BETA_INDEX, KS_INDEX, true);
    pairing.set(BETA_INDEX, BETA_INDEX, true);

    let delta2 = F2Matrix::reduce(delta);
    let mut pi_star = F2Matrix::zeros(K3_RANK, n);
    for i in 0..SURFACE_RANK {
        for r in 0..K3_RANK {
            pi_star.set(r, i, delta2.get(r, i));
        }
    }
    // beta_0 -> epsilon + delta(c)
    let dc = delta2.mul_vec(shift);
    for r in 0..K3_RANK {
        pi_star.set(r, BETA_INDEX, dc[r]);
    }
    let b = pi_star.get(E_INDEX, BETA_INDEX);
    pi_star.set(E_INDEX, BETA_INDEX, !b);
    let b = pi_star.get(F_INDEX, BETA_INDEX);
    pi_star.set(F_INDEX, BETA_INDEX, !b);

    // (pi_* y) . s = y . pi^* s  =>  pi_* = B_S^{-1} Pi^T B_X
    let bx = F2Matrix::reduce(k3.gram());
    let inv = pairing.inverse().expect("surface pairing is nondegenerate");
    let pi_lower_star = inv.mul(&pi_star.transpose()).mul(&bx);
    SurfaceMod2Model {
        pairing,
        pi_star,
        pi_lower_star,
        beta_shift: shift.to_vec(),
    }
}

/// Structure of `0 -> Hom(T, Z/n) -> Br[n] -> H^3(Z)[n] -> 0` for free `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionProfile {
    pub n: u64,
    pub transcendental_rank: usize,
    /// `Hom(T, Z/n) = (Z/n)^rank T`
    pub hom_t: FiniteAbelianGroup,
    /// `Tors H^3(Z)[n]`
    pub h3_part: FiniteAbelianGroup,
    #[serde(with = "crate::json::bigint")]
    pub order: BigInt,
    /// The group itself when the extension is forced (one side trivial).
    pub group: Option<FiniteAbelianGroup>,
}

pub fn brauer_torsion_profile(
    transcendental_rank: usize,
    n: u64,
    h3_torsion: &FiniteAbelianGroup,
) -> Result<TorsionProfile> {
    if n < 2 {
        return Err(Error::InvalidArgument("torsion level n must be >= 2".into()));
    }
    let hom_t = FiniteAbelianGroup::elementary(n, transcendental_rank);
    let h3_part = h3_torsion.torsion_subgroup(&BigInt::from(n));
    let order = hom_t.order() * h3_part.order();
    let group = if h3_part.is_trivial() {
        Some(hom_t.clone())
    } else if hom_t.is_trivial() {
        Some(h3_part.clone())
    } else {
        None
    };
    Ok(TorsionProfile {
        n,
        transcendental_rank,
        hom_t,
        h3_part,
        order,
        group,
    })
}

/// For an Enriques surface `c_1` is onto, so `T_S = 0` and `Tors H^3 = Z/2`.
pub fn enriques_surface_torsion_profile(n: u64) -> Result<TorsionProfile> {
    brauer_torsion_profile(0, n, &FiniteAbelianGroup::elementary(2, 1))
}

/// Results of the mod-2 surface checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceChecks {
    pub wu_identity: bool,
    pub wu_failures: usize,
    pub pullback_kernel_is_ks: bool,
    pub pullback_image_dimension: usize,
    pub pullback_image_is_delta_plus_epsilon: bool,
    pub pushforward_kernel_on_h2_is_epsilon: bool,
    pub pushforward_of_e_is_ks: bool,
    pub q_of_pullback_is_square: bool,
    pub q_failures: usize,
    pub pushforward_pullback_is_zero: bool,
}

impl SurfaceChecks {
    pub fn all_pass(&self) -> bool {
        self.wu_identity
            && self.pullback_kernel_is_ks
            && self.pullback_image_dimension == 11
            && self.pullback_image_is_delta_plus_epsilon
            && self.pushforward_kernel_on_h2_is_epsilon
            && self.pushforward_of_e_is_ks
            && self.q_of_pullback_is_square
            && self.pushforward_pullback_is_zero
    }
}

/// Exhaustive verification of the mod-2 surface model against `L/2L`.
pub fn check_surface_model(model: &EnriquesModel, surface: &SurfaceMod2Model) -> SurfaceChecks {
    let k3_space = reduce_mod2(model.k3_lattice()).expect("K3 lattice is even");
    let ks = SurfaceMod2Model::basis_vector(KS_INDEX);

    let mut wu_failures = 0;
    let mut q_failures = 0;
    for a in all_vectors(SURFACE_MOD2_DIM) {
        let sq = surface.square(&a);
        if surface.dot(&ks, &a) != sq {
            wu_failures += 1;
        }
        let q = k3_space.q_value(&surface.pi_star(&a)).expect("even");
        if q != sq {
            q_failures += 1;
        }
    }

    let kernel = surface.pi_star.kernel();
    let pullback_kernel_is_ks = kernel.rows() == 1 && kernel.row(0) == ks.as_slice();

    let image = surface.pi_star.transpose();
    let mut expected_rows: Vec<Vec<bool>> = (0..SURFACE_RANK)
        .map(|i| {
            let col = model.delta().column(i);
            col.iter().map(Integer::is_odd).collect()
        })
        .collect();
    expected_rows.push(epsilon_lift().iter().map(Integer::is_odd).collect());
    let expected = F2Matrix::from_rows(&expected_rows, K3_RANK);

    let h2 = |a: bool, b: bool| {
        let mut v = vec![false; K3_RANK];
        v[E_INDEX] = a;
        v[F_INDEX] = b;
        v
    };
    let h2_kernel: Vec<(bool, bool)> = [(false, false), (true, false), (false, true), (true, true)]
        .into_iter()
        .filter(|&(a, b)| surface.pi_lower_star(&h2(a, b)).iter().all(|&x| !x))
        .collect();

    let composite = surface.pi_lower_star.mul(&surface.pi_star);
    SurfaceChecks {
        wu_identity: wu_failures == 0,
        wu_failures,
        pullback_kernel_is_ks,
        pullback_image_dimension: image.rank(),
        pullback_image_is_delta_plus_epsilon: image.same_row_span(&expected),
        pushforward_kernel_on_h2_is_epsilon: h2_kernel == vec![(false, false), (true, true)],
        pushforward_of_e_is_ks: surface.pi_lower_star(&h2(true, false)) == ks,
        q_of_pullback_is_square: q_failures == 0,
        q_failures,
        pushforward_pullback_is_zero: composite == F2Matrix::zeros(SURFACE_MOD2_DIM, SURFACE_MOD2_DIM),
    }
}

/// Agreement counts between the two equivalent conditions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementSummary {
    pub checked: usize,
    pub agreements: usize,
    pub both_true: usize,
    #[serde(with = "crate::json::vec_of_bigint_vec")]
    pub disagreements: Vec<Vec<BigInt>>,
}

impl AgreementSummary {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty() && self.checked == self.agreements
    }

    fn record(&mut self, lambda: Vec<BigInt>, a: bool, b: bool) {
        self.checked += 1;
        if a == b {
            self.agreements += 1;
            if a {
                self.both_true += 1;
            }
        } else {
            self.disagreements.push(lambda);
        }
    }
}

/// Random vectors of L with coordinates in `[-bound, bound]`.
pub fn random_k3_vectors(seed: u64, count: usize, bound: i64) -> Vec<Vec<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..K3_RANK)
                .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                .collect()
        })
        .collect()
}

/// Agreement of the two conditions on three families of vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionAgreement {
    /// Uniform vectors of L with coordinates in `[-2, 2]`.
    pub uniform: AgreementSummary,
    /// Vectors of `L^-` with coordinates in `[-2, 2]` on the fixed basis.
    pub anti_invariant: AgreementSummary,
    /// Every vector of the last hyperbolic summand with coordinates in `[-5, 5]`.
    pub hyperbolic_box: AgreementSummary,
}

impl CriterionAgreement {
    pub fn all_agree(&self) -> bool {
        self.uniform.all_agree() && self.anti_invariant.all_agree() && self.hyperbolic_box.all_agree()
    }
}

fn agreement_on(model: &EnriquesModel, vectors: Vec<Vec<BigInt>>) -> Result<AgreementSummary> {
    let results: Vec<(bool, bool)> = vectors
        .par_iter()
        .map(|v| Ok((model.cor56_condition_i(v)?, model.cor56_condition_ii(v)?)))
        .collect::<Result<_>>()?;
    let mut summary = AgreementSummary::default();
    for (v, (a, b)) in vectors.into_iter().zip(results) {
        summary.record(v, a, b);
    }
    Ok(summary)
}

/// Compares the two anti-invariant criteria; `samples` vectors in each random family.
pub fn cor56_agreement(model: &EnriquesModel, seed: u64, samples: usize) -> Result<CriterionAgreement> {
    let uniform = random_k3_vectors(seed, samples, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let basis = model.anti_invariant_basis();
    let anti: Vec<Vec<BigInt>> = (0..samples)
        .map(|_| {
            let c: Vec<BigInt> = (0..basis.rows()).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
            basis.vec_mul(&c).expect("12 coefficients")
        })
        .collect();
    let mut boxed = Vec::new();
    for a in -5..=5 {
        for b in -5..=5 {
            boxed.push(hyperbolic_vector(a, b));
        }
    }
    Ok(CriterionAgreement {
        uniform: agreement_on(model, uniform)?,
        anti_invariant: agreement_on(model, anti)?,
        hyperbolic_box: agreement_on(model, boxed)?,
    })
}

/// Picard specs `delta(E) + Z lambda_0` with random `lambda_0` in `L^-`,
/// coordinates in `[-4, 4]` on the fixed anti-invariant basis.
pub fn random_picard_specs(model: &EnriquesModel, seed: u64, count: usize) -> Vec<PicardSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = model.anti_invariant_basis();
    (0..count)
        .map(|k| {
            let coeffs: Vec<BigInt> = (0..basis.rows())
                .map(|_| BigInt::from(rng.gen_range(-4i64..=4)))
                .collect();
            let lambda = basis.vec_mul(&coeffs).expect("12 coefficients");
            let gens = model
                .pullback_rows()
                .vstack(&IntegerMatrix::from_big_rows(vec![lambda], K3_RANK).expect("one row"))
                .expect("same width");
            PicardSpec::new(format!("random-{seed}-{k}"), gens)
        })
        .collect()
}

/// One row of a cross-method comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossMethodRow {
    pub label: String,
    pub by_picard: bool,
    pub by_form: bool,
}

/// Decides every spec by both methods; results are in input order.
pub fn cross_method_batch(model: &EnriquesModel, specs: &[PicardSpec]) -> Result<Vec<CrossMethodRow>> {
    specs
        .par_iter()
        .map(|s| {
            let (p, f) = model.brauer_decide_both(s)?;
            Ok(CrossMethodRow {
                label: s.label.clone(),
                by_picard: p.vanishes,
                by_form: f.vanishes,
            })
        })
        .collect()
}

/// The documented Picard fixtures: `delta(E)`, `delta(E) + Z(e - 3f)`,
/// `delta(E) + Z(2e + 2f)` and `delta(E) + Z(e - 2f)`.
pub fn documented_fixtures(model: &EnriquesModel) -> Vec<(PicardSpec, bool)> {
    let with = |label: &str, extra: Option<Vec<BigInt>>| {
        let mut gens = model.pullback_rows();
        if let Some(v) = extra {
            gens = gens
                .vstack(&IntegerMatrix::from_big_rows(vec![v], K3_RANK).expect("row"))
                .expect("width");
        }
        PicardSpec::new(label, gens)
    };
    vec![
        (with("pullback-only", None), false),
        (with("pullback+e-3f", Some(hyperbolic_vector(1, -3))), true),
        (with("pullback+2e+2f", Some(hyperbolic_vector(2, 2))), true),
        (with("pullback+e-2f", Some(hyperbolic_vector(1, -2))), false),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Signature;

    fn model() -> EnriquesModel {
        EnriquesModel::build()
    }

    fn fixture(m: &EnriquesModel, i: usize) -> PicardSpec {
        documented_fixtures(m).swap_remove(i).0
    }

    #[test]
    fn structure() {
        let m = model();
        assert_eq!(m.k3_lattice().signature(), Signature::new(3, 19, 0));
        let minus = m.rho().eigenlattice(Eigensign::Minus);
        assert_eq!(minus.rows(), 12);
        assert_eq!(m.k3_lattice().sublattice("L-", &minus).unwrap().signature(), Signature::new(2, 10, 0));
        assert_eq!(m.tate_h1(), FiniteAbelianGroup::elementary(2, 2));
        // L^+ + L^- has index 2^10 in L
        assert_eq!(m.rho().eigen_index().unwrap(), FiniteAbelianGroup::elementary(2, 10));
    }

    #[test]
    fn pullback_scales_form() {
        let m = model();
        let e = m.surface_lattice();
        for alpha in random_k3_vectors(7, 100, 3) {
            let a = &alpha[..SURFACE_RANK];
            let d = m.pi_star(a).unwrap();
            assert_eq!(m.k3_lattice().norm(&d).unwrap(), BigInt::from(2) * e.norm(a).unwrap());
            let back = m.pi_lower_star_integral(&d).unwrap();
            assert_eq!(back, a.iter().map(|x| x * 2).collect::<Vec<_>>());
        }
    }

    #[test]
    fn pushforward_examples() {
        let m = model();
        let anti = compose(&[1, 0, 2, 0, 0, 0, 0, -1, 3, 0], &[-1, 0, -2, 0, 0, 0, 0, 1, -3, 0], [4, 5]);
        assert!(m.pi_lower_star_integral(&anti).unwrap().iter().all(Zero::is_zero));
        for i in 0..SURFACE_RANK {
            let mut a = [0i64; SURFACE_RANK];
            a[i] = 1;
            let v = compose(&a, &[0; SURFACE_RANK], [0, 0]);
            assert_eq!(m.pi_lower_star_integral(&v).unwrap(), ivec(&a));
        }
        assert!(m.pi_lower_star(&hyperbolic_vector(1, 0)).unwrap().torsion);
        assert!(!m.pi_lower_star(&hyperbolic_vector(1, 1)).unwrap().torsion);
    }

    #[test]
    fn image_membership_examples() {
        let m = model();
        let alpha = [1, -2, 0, 0, 3, 0, 0, 0, 1, 1];
        let neg: Vec<i64> = alpha.iter().map(|x| -x).collect();
        let v = compose(&alpha, &neg, [0, 0]);
        let ImageMembership::Member { mu } = m.in_image_one_minus_rho(&v).unwrap() else {
            panic!("(a,-a,0) is an image")
        };
        assert_eq!(m.rho().one_minus_sigma().mul_vec(&mu).unwrap(), v);
        let ImageMembership::Member { mu } = m.in_image_one_minus_rho(&hyperbolic_vector(2, -4)).unwrap() else {
            panic!("2 beta is an image")
        };
        assert_eq!(m.rho().one_minus_sigma().mul_vec(&mu).unwrap(), hyperbolic_vector(2, -4));
        assert!(!m.in_image_one_minus_rho(&epsilon_lift()).unwrap().is_member());
    }

    #[test]
    fn condition_examples() {
        let m = model();
        assert!(m.cor56_condition_i(&epsilon_lift()).unwrap());
        assert!(m.cor56_condition_ii(&epsilon_lift()).unwrap());
        let a = [0, 1, 0, 0, 0, 0, 0, 0, 0, 0];
        let v = compose(&a, &[0, -1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0]);
        assert!(!m.cor56_condition_i(&v).unwrap());
        assert!(!m.cor56_condition_i(&hyperbolic_vector(2, 0)).unwrap());
        assert!(m.cor56_condition_ii(&hyperbolic_vector(1, -3)).unwrap());
        assert!(!m.cor56_condition_ii(&hyperbolic_vector(1, -2)).unwrap());
        // isotropic e: integral push-forward vanishes but the K_S part does not
        let e = hyperbolic_vector(1, 0);
        assert!(m.pi_lower_star_integral(&e).unwrap().iter().all(Zero::is_zero));
        assert!(!m.cor56_condition_i(&e).unwrap());
        assert!(!m.cor56_condition_ii(&e).unwrap());
    }

    #[test]
    fn picard_fixtures() {
        let m = model();
        let r = m.brauer_vanishes_by_picard(&fixture(&m, 0)).unwrap();
        assert!(!r.vanishes);
        assert!(r.warnings.is_empty());

        let r = m.brauer_vanishes_by_picard(&fixture(&m, 1)).unwrap();
        assert!(r.vanishes);
        let w = r.witness.unwrap();
        assert_eq!(w.norm, BigInt::from(-6));
        assert!(m.cor56_condition_ii(&w.vector).unwrap());

        let pic = fixture(&m, 2);
        let r = m.brauer_vanishes_by_picard(&pic).unwrap();
        assert!(r.vanishes);
        assert_eq!(r.witness.unwrap().vector, epsilon_lift());
        let raw = m.brauer_vanishes_by_picard_unsaturated(&pic).unwrap();
        assert!(!raw.vanishes);
    }

    #[test]
    fn transcendental_fixtures() {
        let m = model();
        let t = m.transcendental_complement(&fixture(&m, 0)).unwrap();
        assert_eq!(t, m.rho().eigenlattice(Eigensign::Minus));
        let t = m.transcendental_complement(&fixture(&m, 1)).unwrap();
        assert_eq!(t.rows(), 11);
        let mut expected = m.anti_invariant_basis().to_rows()[..10].to_vec();
        expected.push(hyperbolic_vector(1, 3));
        assert_eq!(t, hermite_rows(&IntegerMatrix::from_big_rows(expected, K3_RANK).unwrap()));
        let all = PicardSpec::new("all", IntegerMatrix::identity(K3_RANK));
        assert_eq!(m.transcendental_complement(&all).unwrap().rows(), 0);
    }

    #[test]
    fn form_fixtures() {
        let m = model();
        assert!(m.brauer_vanishes_by_form(&fixture(&m, 1)).unwrap().vanishes);
        assert!(!m.brauer_vanishes_by_form(&fixture(&m, 3)).unwrap().vanishes);
        let r = m.brauer_vanishes_by_form(&fixture(&m, 0)).unwrap();
        assert!(!r.vanishes);
        assert!(r.form_values.unwrap().contains(&1));
    }

    #[test]
    fn form_requires_pullback() {
        let m = model();
        let pic = PicardSpec::new("bare", IntegerMatrix::from_big_rows(vec![hyperbolic_vector(1, -3)], K3_RANK).unwrap());
        assert!(matches!(m.brauer_vanishes_by_form(&pic), Err(Error::MissingPullback(_))));
        let r = m.brauer_vanishes_by_picard(&pic).unwrap();
        assert!(r.vanishes);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn rejects_non_invariant_generators() {
        let m = model();
        let mut a = [0i64; SURFACE_RANK];
        a[0] = 1;
        let pic = PicardSpec::new("bad", IntegerMatrix::from_big_rows(vec![hyperbolic_vector(1, 1), compose(&a, &[0; 10], [0, 0])], K3_RANK).unwrap());
        assert_eq!(m.brauer_vanishes_by_picard(&pic).unwrap_err(), Error::NotInvariant { row: 1 });
    }

    #[test]
    fn surface_model_checks_pass() {
        let m = model();
        let checks = check_surface_model(&m, m.surface_mod2());
        assert!(checks.all_pass(), "{checks:?}");
        let bad = check_surface_model(&m, &m.surface_mod2().corrupted());
        assert!(!bad.wu_identity);
    }

    #[test]
    fn decisions_do_not_depend_on_beta_normalization() {
        let base = model();
        let specs: Vec<PicardSpec> = documented_fixtures(&base)
            .into_iter()
            .map(|(s, _)| s)
            .chain(random_picard_specs(&base, 11, 12))
            .collect();
        let shifts = [
            [true, false, false, false, false, false, false, false, false, false],
            [false, true, true, false, false, false, true, false, true, true],
        ];
        for shift in shifts {
            let shifted = EnriquesModel::build_with_beta_shift(&shift);
            assert!(check_surface_model(&shifted, shifted.surface_mod2()).all_pass());
            for s in &specs {
                assert_eq!(
                    shifted.brauer_vanishes_by_form(s).unwrap().vanishes,
                    base.brauer_vanishes_by_form(s).unwrap().vanishes
                );
            }
            for v in random_k3_vectors(3, 50, 2) {
                assert_eq!(shifted.cor56_condition_i(&v).unwrap(), base.cor56_condition_i(&v).unwrap());
            }
        }
    }

    #[test]
    fn torsion_profiles() {
        let p = enriques_surface_torsion_profile(2).unwrap();
        assert_eq!(p.group, Some(FiniteAbelianGroup::elementary(2, 1)));
        assert_eq!(p.order, BigInt::from(2));
        let p = enriques_surface_torsion_profile(3).unwrap();
        assert_eq!(p.group, Some(FiniteAbelianGroup::trivial()));
        let m = model();
        let p = m.k3_torsion_profile(&fixture(&m, 1), 2, &FiniteAbelianGroup::trivial()).unwrap();
        assert_eq!(p.hom_t, FiniteAbelianGroup::elementary(2, 11));
        assert_eq!(p.group, Some(FiniteAbelianGroup::elementary(2, 11)));
        assert!(brauer_torsion_profile(0, 1, &FiniteAbelianGroup::trivial()).is_err());
        let mixed = brauer_torsion_profile(3, 2, &FiniteAbelianGroup::elementary(2, 1)).unwrap();
        assert_eq!(mixed.group, None);
        assert_eq!(mixed.order, BigInt::from(16));
    }
}
