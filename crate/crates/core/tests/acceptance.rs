//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use enriques_core::census::hypersurface_census;
use enriques_core::enriques::{
    check_surface_model, cor56_agreement, cross_method_batch, documented_fixtures,
    enriques_surface_torsion_profile, random_k3_vectors, random_picard_specs, EnriquesModel,
    PicardSpec, BETA_INDEX, DEFAULT_SEED, E_INDEX, F_INDEX, KS_INDEX, K3_RANK,
};
use enriques_core::intlinalg::{FiniteAbelianGroup, IntegerMatrix};
use enriques_core::involution::Eigensign;
use enriques_core::lattice::{Lattice, Signature};
use enriques_core::mod2::{pontryagin_even, pontryagin_of_lift, q_of_lift, reduce_mod2};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn structural(model: &EnriquesModel) -> Outcome {
    let g = to_i64_rows(model.k3_lattice().gram());
    let sig = model.k3_lattice().signature();
    ensure(sig == Signature::new(3, 19, 0), format!("L signature {sig}"))?;
    ensure(float_signature(&g) == (3, 19, 0), "float oracle disagrees on L")?;

    let minus = model.rho().eigenlattice(Eigensign::Minus);
    ensure(minus.rows() == 12, format!("L^- rank {}", minus.rows()))?;
    let anti = model.k3_lattice().sublattice("L-", &minus).map_err(|e| e.to_string())?;
    ensure(anti.signature() == Signature::new(2, 10, 0), format!("L^- signature {}", anti.signature()))?;
    ensure(float_signature(&to_i64_rows(anti.gram())) == (2, 10, 0), "float oracle disagrees on L^-")?;

    let h1 = model.tate_h1();
    ensure(h1 == FiniteAbelianGroup::elementary(2, 2), format!("H^1 = {h1}"))?;
    // oracle: 2 L^- lies in (1 - rho)L, so H^1 = F2^12 / image of (1 - rho) in L^-/2L^-,
    // with (1-rho)(a, a', b) = sum (a - a')_i mu_i + 2 b_e mu_10 + 2 b_f mu_11
    let mut images = Vec::new();
    for j in 0..K3_RANK {
        let mut mask = 0u64;
        if j < 10 || (10..20).contains(&j) {
            mask |= 1 << (j % 10);
        }
        images.push(mask);
    }
    let dim = 12 - f2_rank(images);
    ensure(dim == 2, format!("oracle H^1 dimension {dim}"))?;
    Ok(format!("L {sig}, L^- rank 12 {}, H^1 = {h1}", anti.signature()))
}

fn equivalence(model: &EnriquesModel) -> Outcome {
    let a = cor56_agreement(model, DEFAULT_SEED, 10_000).map_err(|e| e.to_string())?;
    ensure(a.uniform.checked == 10_000, "sample count")?;
    ensure(a.hyperbolic_box.checked == 121, "box count")?;
    ensure(a.all_agree(), format!("disagreements: {:?}", a.uniform.disagreements.len() + a.anti_invariant.disagreements.len() + a.hyperbolic_box.disagreements.len()))?;
    // oracle for the second condition with i64 arithmetic
    let g = to_i64_rows(model.k3_lattice().gram());
    let mut both = 0;
    for v in random_k3_vectors(DEFAULT_SEED, 10_000, 2) {
        let x: Vec<i64> = v.iter().map(|t| t.to_i64().unwrap()).collect();
        let anti = (0..10).all(|i| x[i] + x[10 + i] == 0) && x[20] == 0 && x[21] == 0;
        let ii = anti && form_i64(&g, &x, &x).rem_euclid(4) == 2;
        ensure(ii == model.cor56_condition_ii(&v).unwrap(), "condition (ii) oracle")?;
        both += usize::from(ii);
    }
    ensure(both == a.uniform.both_true, "oracle count")?;
    Ok(format!(
        "{}/{} uniform, {}/{} in L^- ({} satisfy both), {}/{} box ({} satisfy both)",
        a.uniform.agreements,
        a.uniform.checked,
        a.anti_invariant.agreements,
        a.anti_invariant.checked,
        a.anti_invariant.both_true,
        a.hyperbolic_box.agreements,
        a.hyperbolic_box.checked,
        a.hyperbolic_box.both_true
    ))
}

fn surface_model(model: &EnriquesModel) -> Outcome {
    let s = model.surface_mod2();
    let checks = check_surface_model(model, s);
    ensure(checks.all_pass(), format!("{checks:?}"))?;

    // oracle pairing: E mod 2 on x_1..x_10, k_S . beta_0 = 1, beta_0^2 = 1
    let e = to_i64_rows(model.surface_lattice().gram());
    let mut b = vec![vec![0u8; 12]; 12];
    for i in 0..10 {
        for j in 0..10 {
            b[i][j] = e[i][j].rem_euclid(2) as u8;
        }
    }
    b[KS_INDEX][BETA_INDEX] = 1;
    b[BETA_INDEX][KS_INDEX] = 1;
    b[BETA_INDEX][BETA_INDEX] = 1;
    for i in 0..12 {
        for j in 0..12 {
            ensure(s.pairing().get(i, j) == (b[i][j] == 1), format!("pairing entry ({i},{j})"))?;
        }
    }
    let dot = |x: &[bool], y: &[bool]| -> bool {
        let mut t = 0u8;
        for i in 0..12 {
            for j in 0..12 {
                t ^= u8::from(x[i]) & b[i][j] & u8::from(y[j]);
            }
        }
        t == 1
    };
    let ks = mask_to_bits(1 << KS_INDEX, 12);
    let g = to_i64_rows(model.k3_lattice().gram());
    let mut kernel = Vec::new();
    let mut images = HashSet::new();
    for m in 0u64..4096 {
        let a = mask_to_bits(m, 12);
        ensure(dot(&ks, &a) == dot(&a, &a), format!("Wu fails at {m:#x}"))?;
        let img = s.pi_star(&a);
        if img.iter().all(|&t| !t) {
            kernel.push(m);
        }
        // image has the shape (x, x, b) with b in {00, 11}
        ensure((0..10).all(|i| img[i] == img[10 + i]) && img[E_INDEX] == img[F_INDEX], "image outside delta(E/2) + <eps>")?;
        images.insert(bits_to_mask(&img));
        let lift: Vec<i64> = img.iter().map(|&t| i64::from(t)).collect();
        let q = (form_i64(&g, &lift, &lift) / 2).rem_euclid(2) == 1;
        ensure(q == dot(&a, &a), format!("q(pi^* a) != a^2 at {m:#x}"))?;
    }
    ensure(kernel == vec![0, 1 << KS_INDEX], format!("kernel of pi^* = {kernel:?}"))?;
    ensure(images.len() == 2048, format!("image has {} elements", images.len()))?;
    let mut h_kernel = Vec::new();
    for (be, bf) in [(false, false), (true, false), (false, true), (true, true)] {
        let mut v = vec![false; K3_RANK];
        v[E_INDEX] = be;
        v[F_INDEX] = bf;
        if s.pi_lower_star(&v).iter().all(|&t| !t) {
            h_kernel.push((be, bf));
        }
    }
    ensure(h_kernel == vec![(false, false), (true, true)], format!("kernel of pi_* on H/2H = {h_kernel:?}"))?;
    Ok("Wu 4096/4096, ker pi^* = {0,k_S}, im pi^* dim 11, ker pi_*|H = {0,eps}, q(pi^* a) = a^2 4096/4096".into())
}

fn cross_method(model: &EnriquesModel) -> Outcome {
    let mut specs: Vec<PicardSpec> = Vec::new();
    for (spec, expected) in documented_fixtures(model) {
        let (p, f) = model.brauer_decide_both(&spec).map_err(|e| e.to_string())?;
        ensure(p.vanishes == expected && f.vanishes == expected, format!("fixture {} decided {}/{}", spec.label, p.vanishes, f.vanishes))?;
        specs.push(spec);
    }
    let random = random_picard_specs(model, DEFAULT_SEED, 128);
    let rows = cross_method_batch(model, &random).map_err(|e| e.to_string())?;
    let disagreements: Vec<&str> = rows.iter().filter(|r| r.by_picard != r.by_form).map(|r| r.label.as_str()).collect();
    ensure(disagreements.is_empty(), format!("disagreements: {disagreements:?}"))?;
    let vanishing = rows.iter().filter(|r| r.by_picard).count();
    Ok(format!("{} fixtures + {} random specs agree ({} vanishing)", specs.len(), rows.len(), vanishing))
}

fn saturation_regression(model: &EnriquesModel) -> Outcome {
    let mut gens = model.pullback_rows();
    let mut v = vec![BigInt::from(0); K3_RANK];
    v[E_INDEX] = BigInt::from(2);
    v[F_INDEX] = BigInt::from(2);
    gens = gens.vstack(&IntegerMatrix::from_big_rows(vec![v], K3_RANK).unwrap()).unwrap();
    let spec = PicardSpec::new("pullback+2(e+f)", gens);
    let sat = model.brauer_vanishes_by_picard(&spec).map_err(|e| e.to_string())?;
    let raw = model.brauer_vanishes_by_picard_unsaturated(&spec).map_err(|e| e.to_string())?;
    let form = model.brauer_vanishes_by_form(&spec).map_err(|e| e.to_string())?;
    ensure(sat.vanishes && form.vanishes, "saturated path must vanish")?;
    ensure(!raw.vanishes, "unsaturated path should miss the witness")?;
    Ok("saturated: vanishes, unsaturated: does not (discrepancy caught)".into())
}

fn census(model: &EnriquesModel) -> Outcome {
    let records = hypersurface_census(model, 11).map_err(|e| e.to_string())?;
    let norms: Vec<i64> = records.iter().map(|r| r.norm.to_i64().unwrap()).collect();
    ensure(norms == vec![-6, -10, -14, -18, -22], format!("norms {norms:?}"))?;
    for r in &records {
        let w: Vec<i64> = r.witness.iter().map(|x| x.to_i64().unwrap()).collect();
        let gcd = w.iter().fold(0i64, |a, &b| num_integer::gcd(a, b));
        ensure(gcd == 1 && r.primitive, format!("k={} not primitive", r.k))?;
        ensure(r.complement_signature == Signature::new(2, 9, 0), format!("k={} signature {}", r.k, r.complement_signature))?;
    }
    let a = serde_json::to_string(&records).unwrap();
    let b = serde_json::to_string(&hypersurface_census(model, 11).unwrap()).unwrap();
    ensure(a == b, "library output differs across runs")?;
    let run = || Command::new(env!("CARGO_BIN_EXE_enriques")).args(["census", "--k-max", "11"]).output().unwrap();
    let (x, y) = (run(), run());
    ensure(x.status.success() && x.stdout == y.stdout, "CLI output differs across runs")?;
    Ok(format!("5 records, norms {norms:?}, complement (2,9), byte-identical"))
}

fn e8_roots() -> Outcome {
    let lattice = Lattice::e8_negative();
    let found = lattice.vectors_of_norm(&BigInt::from(-2), None).map_err(|e| e.to_string())?;
    let simple = e8_simple_roots_doubled();
    // Euclidean Gram of the simple roots (doubled coordinates give 4x) must be minus the fixed Gram
    let g = to_i64_rows(lattice.gram());
    for i in 0..8 {
        for j in 0..8 {
            let d: i64 = (0..8).map(|k| simple[i][k] * simple[j][k]).sum();
            ensure(d == -4 * g[i][j], "simple roots do not realize the fixed Gram")?;
        }
    }
    let mapped: BTreeSet<[i64; 8]> = found
        .iter()
        .map(|c| {
            let mut v = [0i64; 8];
            for (i, ci) in c.iter().enumerate() {
                let ci = ci.to_i64().unwrap();
                for k in 0..8 {
                    v[k] += ci * simple[i][k];
                }
            }
            v
        })
        .collect();
    let oracle: BTreeSet<[i64; 8]> = e8_roots_doubled().into_iter().collect();
    ensure(found.len() == 240, format!("{} vectors", found.len()))?;
    ensure(oracle.len() == 240, format!("oracle found {}", oracle.len()))?;
    ensure(mapped == oracle, "root sets differ")?;
    Ok("240 roots, equal to the brute-force box enumeration".into())
}

fn torsion(model: &EnriquesModel) -> Outcome {
    let p = enriques_surface_torsion_profile(2).map_err(|e| e.to_string())?;
    ensure(p.group == Some(FiniteAbelianGroup::elementary(2, 1)), format!("Enriques Br[2] = {:?}", p.group))?;
    let spec = documented_fixtures(model).swap_remove(1).0;
    let k3 = model.k3_torsion_profile(&spec, 2, &FiniteAbelianGroup::trivial()).map_err(|e| e.to_string())?;
    ensure(k3.transcendental_rank == 11, format!("rank T = {}", k3.transcendental_rank))?;
    ensure(k3.hom_t == FiniteAbelianGroup::elementary(2, 11), format!("Hom(T,Z/2) = {}", k3.hom_t))?;
    ensure(k3.group == Some(FiniteAbelianGroup::elementary(2, 11)), "K3 Br[2]")?;
    Ok(format!("Enriques Br[2] = {}, K3 Hom(T,Z/2) = (Z/2)^11", p.group.unwrap()))
}

fn lift_checks(g: &[Vec<i64>], classes: &[u64], lifts: &[Vec<i64>], pairs: &[(u64, u64)]) -> Result<(), String> {
    let n = g.len();
    let lattice = Lattice::new("even", matrix(g)).unwrap();
    let space = reduce_mod2(&lattice).map_err(|e| e.to_string())?;
    for &m in classes {
        let x = mask_to_bits(m, n);
        let q = space.q_value(&x).unwrap();
        let p = pontryagin_even(&lattice, &x).unwrap();
        ensure(p == 2 * u8::from(q), "pontryagin != 2q")?;
        let base: Vec<i64> = x.iter().map(|&b| i64::from(b)).collect();
        for y in lifts {
            let lift: Vec<i64> = base.iter().zip(y).map(|(a, b)| a + 2 * b).collect();
            let norm = form_i64(g, &lift, &lift);
            ensure(((norm / 2).rem_euclid(2) == 1) == q, format!("q depends on the lift for {g:?}"))?;
            ensure(norm.rem_euclid(4) as u8 == p, "pontryagin value depends on the lift")?;
        }
        let far: Vec<BigInt> = base.iter().enumerate().map(|(i, a)| BigInt::from(a + 2 * (i as i64 + 1))).collect();
        ensure(q_of_lift(&lattice, &far).unwrap() == q, "library lift q")?;
        ensure(pontryagin_of_lift(&lattice, &far).unwrap() == p, "library lift pontryagin")?;
    }
    for &(a, b) in pairs {
        let (x, y) = (mask_to_bits(a, n), mask_to_bits(b, n));
        let sum = mask_to_bits(a ^ b, n);
        let lhs = space.q_value(&sum).unwrap() ^ space.q_value(&x).unwrap() ^ space.q_value(&y).unwrap();
        ensure(lhs == space.dot(&x, &y), "polarization")?;
    }
    Ok(())
}

fn well_definedness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut exhaustive = 0;
    for n in 1..=6usize {
        let mut family: Vec<Vec<Vec<i64>>> = (0..12).map(|_| random_even_gram(&mut rng, n, 8)).collect();
        // A_n root lattice
        family.push((0..n).map(|i| (0..n).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect()).collect());
        let lifts: Vec<Vec<i64>> = (0..3usize.pow(n as u32))
            .map(|mut k| {
                (0..n)
                    .map(|_| {
                        let d = (k % 3) as i64 - 1;
                        k /= 3;
                        d
                    })
                    .collect()
            })
            .collect();
        let classes: Vec<u64> = (0..1u64 << n).collect();
        let pairs: Vec<(u64, u64)> = classes.iter().flat_map(|&a| classes.iter().map(move |&b| (a, b))).collect();
        for g in &family {
            lift_checks(g, &classes, &lifts, &pairs)?;
            exhaustive += 1;
        }
    }
    for _ in 0..1000 {
        let n = rng.gen_range(1..=10usize);
        let g = random_even_gram(&mut rng, n, 8);
        let classes: Vec<u64> = (0..16).map(|_| rng.gen_range(0..1u64 << n)).collect();
        let lifts: Vec<Vec<i64>> = (0..6).map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let pairs: Vec<(u64, u64)> = (0..16).map(|_| (rng.gen_range(0..1u64 << n), rng.gen_range(0..1u64 << n))).collect();
        lift_checks(&g, &classes, &lifts, &pairs)?;
    }
    Ok(format!("{exhaustive} lattices of rank <= 6 exhaustively, 1000 random even lattices, 0 failures"))
}

fn main() -> ExitCode {
    let model = EnriquesModel::build();
    let criteria: Vec<(&str, Option<u64>, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("structural model checks", Some(5), Box::new(|| structural(&model))),
        ("anti-invariant criterion equivalence", Some(60), Box::new(|| equivalence(&model))),
        ("mod-2 surface model", Some(10), Box::new(|| surface_model(&model))),
        ("cross-method Brauer decision", Some(60), Box::new(|| cross_method(&model))),
        ("saturation regression", None, Box::new(|| saturation_regression(&model))),
        ("hypersurface census", None, Box::new(|| census(&model))),
        ("E8 root enumeration oracle", Some(30), Box::new(e8_roots)),
        ("Brauer torsion profile", None, Box::new(|| torsion(&model))),
        ("mod-2 well-definedness", None, Box::new(well_definedness)),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(d), Some(l)) if elapsed > Duration::from_secs(*l) => Err(format!("{d}; exceeded {l} s")),
            (o, _) => o,
        };
        let budget = limit.map(|l| format!(" / {l} s")).unwrap_or_default();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({:.2} s{budget}) {detail}", i + 1, elapsed.as_secs_f64()),
            Err(detail) => {
                failures += 1;
                println!("criterion {} [{name}]: FAIL ({:.2} s{budget}) {detail}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
