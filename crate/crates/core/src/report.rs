//! Report envelopes and the verification battery behind `check-lemmas`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::enriques::{
    check_surface_model, cor56_agreement, documented_fixtures, EnriquesModel, SurfaceMod2Model,
};
use crate::error::Result;
use crate::intlinalg::FiniteAbelianGroup;
use crate::involution::Eigensign;
use crate::lattice::Signature;
use crate::mod2::{all_vectors, pontryagin_even, reduce_mod2};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub k_max: Option<u64>,
    pub method: Option<String>,
    pub inputs: Vec<String>,
}

impl ReportHeader {
    pub fn new(command: &str) -> Self {
        Self {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    /// The statement being checked.
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: &str, claim: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            claim: claim.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub header: ReportHeader,
    pub checks: Vec<CheckLine>,
    pub body: Value,
}

impl Report {
    pub fn new(header: ReportHeader, checks: Vec<CheckLine>, body: impl Serialize) -> Self {
        Self {
            header,
            checks,
            body: serde_json::to_value(body).expect("report bodies serialize"),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_table(&self) -> String {
        let h = &self.header;
        let mut out = format!("{} {} :: {}\n", h.tool, h.version, h.command);
        let opt = |name: &str, v: Option<String>, out: &mut String| {
            if let Some(v) = v {
                out.push_str(&format!("  {name:<10} {v}\n"));
            }
        };
        opt("seed", h.seed.map(|s| s.to_string()), &mut out);
        opt("samples", h.samples.map(|s| s.to_string()), &mut out);
        opt("k_max", h.k_max.map(|s| s.to_string()), &mut out);
        opt("method", h.method.clone(), &mut out);
        for i in &h.inputs {
            out.push_str(&format!("  {:<10} {i}\n", "input"));
        }
        if !self.checks.is_empty() {
            out.push('\n');
            for c in &self.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("[{mark}] {:<28} {}", c.name, c.claim));
                if !c.detail.is_empty() {
                    out.push_str(&format!("  ({})", c.detail));
                }
                out.push('\n');
            }
        }
        out.push('\n');
        render_value(&self.body, 0, &mut out);
        out
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(x, indent + 2, out);
                    }
                    Value::Array(items) if items.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(x, indent + 2, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", compact(x))),
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                out.push_str(&format!("{pad}- [{i}]\n"));
                render_value(x, indent + 4, out);
            }
        }
        other => out.push_str(&format!("{pad}{}\n", compact(other))),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub k3_signature: Signature,
    pub anti_rank: usize,
    pub anti_signature: Signature,
    pub tate_h1: String,
    pub sampled_checked: usize,
    pub sampled_both_true: usize,
    pub anti_sampled_checked: usize,
    pub anti_sampled_both_true: usize,
    pub box_checked: usize,
    pub box_both_true: usize,
    pub beta_normalization: Vec<u8>,
}

/// Every lattice-level statement about the double cover, checked exactly.
/// `corrupt` swaps in a deliberately broken mod-2 surface model.
pub fn run_lemma_checks(
    model: &EnriquesModel,
    seed: u64,
    samples: usize,
    corrupt: bool,
) -> Result<(Vec<CheckLine>, LemmaSummary)> {
    let mut checks = Vec::new();
    let k3 = model.k3_lattice().signature();
    checks.push(CheckLine::new(
        "k3-signature",
        "L = E + E + H has signature (3,19)",
        k3 == Signature::new(3, 19, 0),
        k3.to_string(),
    ));
    let minus = model.rho().eigenlattice(Eigensign::Minus);
    let anti_sig = model.k3_lattice().sublattice("L-", &minus)?.signature();
    checks.push(CheckLine::new(
        "anti-invariant-lattice",
        "L^- has rank 12 and signature (2,10)",
        minus.rows() == 12 && anti_sig == Signature::new(2, 10, 0),
        format!("rank {}, signature {}", minus.rows(), anti_sig),
    ));
    let h1 = model.tate_h1();
    checks.push(CheckLine::new(
        "tate-h1",
        "H^1(Z/2, L) = (Z/2)^2",
        h1 == FiniteAbelianGroup::elementary(2, 2),
        h1.to_string(),
    ));

    let surface: SurfaceMod2Model = if corrupt {
        model.surface_mod2().corrupted()
    } else {
        model.surface_mod2().clone()
    };
    let s = check_surface_model(model, &surface);
    checks.push(CheckLine::new(
        "wu-identity",
        "k_S . a = a . a for every class of H^2(S, Z/2)",
        s.wu_identity,
        format!("{} failures of 4096", s.wu_failures),
    ));
    checks.push(CheckLine::new(
        "pullback-kernel",
        "kernel of pi^* mod 2 is {0, k_S}",
        s.pullback_kernel_is_ks,
        "",
    ));
    checks.push(CheckLine::new(
        "pullback-image",
        "image of pi^* mod 2 is delta(E/2E) + <epsilon>, dimension 11",
        s.pullback_image_is_delta_plus_epsilon && s.pullback_image_dimension == 11,
        format!("dimension {}", s.pullback_image_dimension),
    ));
    checks.push(CheckLine::new(
        "pushforward-kernel-on-h",
        "kernel of pi_* on H/2H is {0, epsilon}",
        s.pushforward_kernel_on_h2_is_epsilon,
        "",
    ));
    checks.push(CheckLine::new(
        "pushforward-of-e",
        "pi_* e = k_S",
        s.pushforward_of_e_is_ks,
        "",
    ));
    checks.push(CheckLine::new(
        "quadratic-pullback",
        "q(pi^* a) = a . a for every class",
        s.q_of_pullback_is_square,
        format!("{} failures of 4096", s.q_failures),
    ));
    checks.push(CheckLine::new(
        "projection-formula",
        "pi_* pi^* = 0 mod 2",
        s.pushforward_pullback_is_zero,
        "",
    ));

    let anti = model.anti_invariant_lattice();
    let space = reduce_mod2(&anti)?;
    let mut shadow_failures = 0usize;
    for x in all_vectors(anti.rank()) {
        if pontryagin_even(&anti, &x)? != 2 * u8::from(space.q_value(&x)?) {
            shadow_failures += 1;
        }
    }
    checks.push(CheckLine::new(
        "pontryagin-shadow",
        "m^2 mod 4 = 2 q(m) on L^-/2L^-",
        shadow_failures == 0,
        format!("{shadow_failures} failures of 4096"),
    ));

    let agreement = cor56_agreement(model, seed, samples)?;
    let (sampled, anti_sampled, exhaustive) =
        (&agreement.uniform, &agreement.anti_invariant, &agreement.hyperbolic_box);
    checks.push(CheckLine::new(
        "anti-invariant-criterion",
        "pi_* l = 0 and l not in (1 - rho)L  iff  rho l = -l and l^2 = 2 mod 4 (random l)",
        sampled.all_agree(),
        format!("{} of {} agree", sampled.agreements, sampled.checked),
    ));
    checks.push(CheckLine::new(
        "anti-invariant-criterion-l-minus",
        "same equivalence on random l in L^-",
        anti_sampled.all_agree(),
        format!("{} of {} agree, {} satisfy both", anti_sampled.agreements, anti_sampled.checked, anti_sampled.both_true),
    ));
    checks.push(CheckLine::new(
        "anti-invariant-criterion-box",
        "same equivalence on every l in H with coordinates in [-5,5]",
        exhaustive.all_agree(),
        format!("{} of {} agree", exhaustive.agreements, exhaustive.checked),
    ));

    let mut fixture_ok = true;
    for (spec, expected) in documented_fixtures(model) {
        let (p, f) = model.brauer_decide_both(&spec)?;
        fixture_ok &= p.vanishes == expected && f.vanishes == expected;
    }
    checks.push(CheckLine::new(
        "brauer-fixtures",
        "both vanishing tests give the documented outcome on the fixtures",
        fixture_ok,
        "",
    ));

    let summary = LemmaSummary {
        k3_signature: k3,
        anti_rank: minus.rows(),
        anti_signature: anti_sig,
        tate_h1: h1.to_string(),
        sampled_checked: sampled.checked,
        sampled_both_true: sampled.both_true,
        anti_sampled_checked: anti_sampled.checked,
        anti_sampled_both_true: anti_sampled.both_true,
        box_checked: exhaustive.checked,
        box_both_true: exhaustive.both_true,
        beta_normalization: surface.beta_shift().iter().map(|&b| u8::from(b)).collect(),
    };
    Ok((checks, summary))
}
