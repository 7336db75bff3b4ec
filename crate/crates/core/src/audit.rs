//! The verification suite. Every check is an independent job over a shared
//! immutable context; failures are reported as data with a witness.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{binomial, format_rational, lcm_upto, ln_bigint};
use crate::ball::{self, CBall};
use crate::bounds::{log_alpha, log_beta};
use crate::characters::DirichletCharacter;
use crate::coeffs::{
    enumerate_compositions, is_integral_after, p0_families, p_family_by_recurrence, phi_of_composition, theta0_bound,
    theta_bound, within_bound, ThetaTable,
};
use crate::cyclo::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::forms::{
    eval_laurent, lambda_row_rational, lambda_table, lambda_value_direct, lambda_value_via_zeta, pk_window,
    q_families, q_initial, q_mod_decompose, s_series, to_rational, v_polynomials, LValueVector,
    LinearFormTable, QFamily, SeriesKind,
};
use crate::linalg::rref;
use crate::polylog::{digits_to_bits, l_chi, l_chi_fourier, minus_one_relation, polylog_root_of_unity};
use crate::siegel::{frak_a_by_series, FnRepresentation, Parameters};
use crate::{Int, Rat, ZLaurent};

/// Identifiers of the check catalogue, in report order.
pub const CHECK_IDS: [&str; 18] = [
    "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11", "A12", "A13", "A14", "A15", "A16", "A17", "A18",
];

/// One-line description per check.
pub fn check_title(id: &str) -> &'static str {
    match id {
        "A1" => "composition-sum recurrence",
        "A2" => "theta formula vs P-recurrence",
        "A3" => "theta0 formulas vs P0-recurrences",
        "A4" => "theta/theta0 bounds and integrality",
        "A5" => "Taylor vanishing <=> P_{n,k,1}(1) = 0",
        "A6" => "formal-series identity for R_n",
        "A7" => "S-series = V + sum Q Li at k = 1",
        "A8" => "derivative series = Q_0 + sum Q_i Li",
        "A9" => "structure of the Q-families",
        "A10" => "Fourier inversion formulas",
        "A11" => "reassembly of lambda from Q at z = -1",
        "A12" => "integrality of lambda",
        "A13" => "coefficient and value envelopes",
        "A14" => "two-path agreement of Lambda",
        "A15" => "kernel property of L_n",
        "A16" => "Gauss sums",
        "A17" => "L(chi,i,-1) vs L(chi,i,1)",
        "A18" => "lcm of binomial rows",
        _ => "unknown check",
    }
}

/// Parses `"all"` or a comma-separated list such as `"A1,A14"` or `"1,14"`.
pub fn parse_checks(s: &str) -> Result<Vec<String>> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("all") {
        return Ok(CHECK_IDS.iter().map(|c| c.to_string()).collect());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let p = part.trim().to_ascii_uppercase();
        let id = if p.starts_with('A') { p } else { format!("A{p}") };
        if !CHECK_IDS.contains(&id.as_str()) {
            return Err(Error::Parse(format!("unknown check id {part:?}")));
        }
        if !out.contains(&id) {
            out.push(id);
        }
    }
    Ok(out)
}

fn check_index(id: &str) -> usize {
    CHECK_IDS.iter().position(|c| *c == id).unwrap_or(usize::MAX)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Measured,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Measured => "measured",
        }
    }
}

/// Result of a single check, before it is tagged with its context.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    /// First counterexample for a failure, extremal ratio for a measurement.
    pub witness: Option<String>,
    /// Envelope formula used by a measurement.
    pub envelope: Option<String>,
    pub detail: Value,
}

impl Outcome {
    pub fn pass(detail: Value) -> Self {
        Outcome { status: Status::Pass, witness: None, envelope: None, detail }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Outcome { status: Status::Fail, witness: Some(witness.into()), envelope: None, detail: Value::Null }
    }

    pub fn measured(envelope: impl Into<String>, witness: impl Into<String>, detail: Value) -> Self {
        Outcome { status: Status::Measured, witness: Some(witness.into()), envelope: Some(envelope.into()), detail }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    fn from_result(r: Result<Outcome>) -> Outcome {
        r.unwrap_or_else(|e| Outcome::fail(format!("error {}: {e}", e.code())))
    }
}

#[derive(Clone, Debug)]
pub struct AuditEntry {
    pub check_id: String,
    pub config_id: String,
    /// A single `n`, a comma-separated list, or `-` for configuration-wide checks.
    pub n: String,
    pub status: Status,
    pub witness: Option<String>,
    pub envelope: Option<String>,
    pub detail: Value,
    pub runtime: Duration,
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub config_id: String,
    pub character: String,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn has_fail(&self) -> bool {
        self.entries.iter().any(|e| e.status == Status::Fail)
    }

    pub fn count(&self, s: Status) -> usize {
        self.entries.iter().filter(|e| e.status == s).count()
    }

    pub fn entry(&self, check_id: &str, n: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.check_id == check_id && e.n == n)
    }

    fn sort(&mut self) {
        self.entries.sort_by(|a, b| {
            (check_index(&a.check_id), n_key(&a.n)).cmp(&(check_index(&b.check_id), n_key(&b.n)))
        });
    }

    /// Runtimes live in the header so that the entries are reproducible.
    pub fn to_json(&self) -> Value {
        let runtimes: Vec<Value> = self
            .entries
            .iter()
            .map(|e| json!({"check_id": e.check_id, "n": e.n, "ms": e.runtime.as_secs_f64() * 1e3}))
            .collect();
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "check_id": e.check_id,
                    "config_id": e.config_id,
                    "n": e.n,
                    "status": e.status.as_str(),
                    "witness": e.witness,
                    "envelope": e.envelope,
                    "detail": e.detail,
                })
            })
            .collect();
        json!({
            "schema_version": 1,
            "header": {"runtime_ms": runtimes},
            "config_id": self.config_id,
            "character": self.character,
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "measured": self.count(Status::Measured),
            },
            "entries": entries,
        })
    }

    /// Plain-text table, one line per entry.
    pub fn render_table(&self) -> String {
        let mut out = format!("{:<5} {:<8} {:<9} {:<42} {}\n", "check", "n", "status", "title", "witness");
        for e in &self.entries {
            out.push_str(&format!(
                "{:<5} {:<8} {:<9} {:<42} {}\n",
                e.check_id,
                e.n,
                e.status.as_str(),
                check_title(&e.check_id),
                e.witness.as_deref().unwrap_or("")
            ));
        }
        out
    }
}

fn n_key(n: &str) -> u64 {
    n.split(',').next().and_then(|s| s.parse().ok()).unwrap_or(0)
}

// ---------------------------------------------------------------------------
// Small exact helpers

fn rat_pow(z: &Rat, e: i64) -> Rat {
    let p = num_traits::pow(z.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

fn eval_int_laurent(l: &ZLaurent, z: &Rat) -> Rat {
    l.terms().fold(Rat::zero(), |acc, (e, c)| acc + rat_pow(z, e) * Rat::from_integer(c.clone()))
}

/// `Σ_t s_t (μ^ℓ z)^t` in the ambient field of `chi`.
fn eval_at_mu(chi: &DirichletCharacter, l: &ZLaurent, ell: i64, z: &Rat) -> CyclotomicNumber {
    let step = (chi.ambient_order() / chi.modulus()) as i64;
    CyclotomicNumber::from_terms(
        chi.ambient_order(),
        l.terms().map(|(e, c)| (ell * e * step, rat_pow(z, e) * Rat::from_integer(c.clone()))),
    )
}

fn to_rat_matrix(c: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    c.iter().map(|r| r.iter().cloned().map(Rat::from_integer).collect()).collect()
}

/// `count` rationals `p/q` with `|p| <= 50`, `1 <= q <= 20`, from a fixed seed.
pub fn random_rationals(count: usize, seed: u64) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p: i64 = rng.gen_range(-50..=50);
            let q: i64 = rng.gen_range(1..=20);
            Rat::new(BigInt::from(p), BigInt::from(q))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Coefficient-level checks (A1-A6, A18)

fn composition_sum(ell: i64, k: i64, x: &Rat) -> Rat {
    enumerate_compositions(ell, k).fold(Rat::zero(), |acc, h| acc + phi_of_composition(&h, x))
}

/// A1: `Σ_{H_{ℓ,k+1}} φ = (X-k+1) Σ_{H_{ℓ,k}} φ + Σ_{H_{ℓ-1,k}} φ` for `k <= k_max`, `ℓ ∈ [0,k]`.
pub fn combinatorial_identity(k_max: i64, points: &[Rat]) -> Outcome {
    let bad = points.par_iter().find_map_first(|x| {
        for k in 1..=k_max {
            let mut prev_row: Vec<Rat> = (-1..=k).map(|ell| composition_sum(ell, k, x)).collect();
            let next: Vec<Rat> = (0..=k).map(|ell| composition_sum(ell, k + 1, x)).collect();
            for ell in 0..=k {
                let rhs = (x - Rat::from_integer(BigInt::from(k - 1))) * &prev_row[(ell + 1) as usize]
                    + &prev_row[ell as usize];
                if next[ell as usize] != rhs {
                    return Some(format!("k={k}, l={ell}, X={}", format_rational(x)));
                }
            }
            prev_row.clear();
        }
        None
    });
    match bad {
        Some(w) => Outcome::fail(w),
        None => Outcome::pass(json!({"k_max": k_max, "points": points.len()})),
    }
}

/// A2: `z^{k-1} P_{n,k,i} = Σ_j (Σ_ℓ θ_{k,i,j,ℓ} c_{i+ℓ,j}) z^{Nj}` for `k <= k_max`.
pub fn theta_oracle(a: u64, n: u64, modulus: u64, c: &[Vec<Rat>], k_max: usize) -> Result<Outcome> {
    let fam = p_family_by_recurrence(c, n, modulus, k_max)?;
    let table = ThetaTable::new(a, n, modulus)?;
    let cols = (n / modulus + 1) as usize;
    for k in 1..=k_max {
        for i in 1..=a as usize {
            let shifted = fam[k][i].shift(k as i64 - 1);
            for j in 0..cols {
                let mut s = Rat::zero();
                for ell in 0..=(a as usize - i) {
                    s += table.theta(k as u64, i as u64, j as u64, ell as u64)? * &c[i - 1 + ell][j];
                }
                let e = (modulus as usize * j) as i64;
                if shifted.coeff(e) != s {
                    return Ok(Outcome::fail(format!("(a,n,N)=({a},{n},{modulus}) k={k} i={i} j={j}")));
                }
            }
            if shifted.terms().any(|(e, _)| e < 0 || e % modulus as i64 != 0 || e > n as i64) {
                return Ok(Outcome::fail(format!("(a,n,N)=({a},{n},{modulus}) k={k} i={i}: support")));
            }
        }
    }
    Ok(Outcome::pass(json!({"a": a, "n": n, "N": modulus, "k_max": k_max})))
}

/// A3: cleared `P_{n,k,0}`, `P̄_{n,k,0}` against `Σ ϑ c` and `Σ ϑ̄ c`.
pub fn theta0_oracle(a: u64, n: u64, modulus: u64, c: &[Vec<Rat>], k_max: usize) -> Result<Outcome> {
    let (r, rb) = p0_families(c, n, modulus, k_max)?;
    let table = ThetaTable::new(a, n, modulus)?;
    let cols = (n / modulus + 1) as usize;
    let bad = (1..=k_max).into_par_iter().find_map_first(|k| {
        if r[k].high().map_or(false, |h| h > n as i64 + k as i64 - 1) || r[k].low().map_or(false, |l| l < 0) {
            return Some(format!("k={k}: degree"));
        }
        for t in 0..(n as usize + k) {
            let mut s = Rat::zero();
            let mut sb = Rat::zero();
            for ell in 0..a as usize {
                for j in 0..cols {
                    let cc = &c[ell][j];
                    if cc.is_zero() {
                        continue;
                    }
                    s += table.theta0(k as u64, j as u64, ell as u64, t as u64).ok()? * cc;
                    sb += table.theta0bar(k as u64, j as u64, ell as u64, t as u64).ok()? * cc;
                }
            }
            if r[k].coeff(t as i64) != s {
                return Some(format!("(a,n,N)=({a},{n},{modulus}) k={k} t={t}"));
            }
            if rb[k].coeff(t as i64) != sb {
                return Some(format!("(a,n,N)=({a},{n},{modulus}) bar k={k} t={t}"));
            }
        }
        None
    });
    Ok(match bad {
        Some(w) => Outcome::fail(w),
        None => Outcome::pass(json!({"a": a, "n": n, "N": modulus, "k_max": k_max})),
    })
}

/// A4: size bounds and integrality after clearing for `θ` (`k <= k_max`) and `ϑ, ϑ̄`
/// (`k <= k0_max`), every `j` and `ℓ`.
pub fn coefficient_bounds(a: u64, n: u64, modulus: u64, k_max: u64, k0_max: u64) -> Result<Outcome> {
    let table = ThetaTable::new(a, n, modulus)?;
    let jmax = n / modulus;
    for k in 1..=k_max {
        let bound = theta_bound(a, n, k);
        let clear = table.theta_clearing(k)?;
        for j in 0..=jmax {
            for ell in 0..a {
                let th = table.theta(k, 1, j, ell)?;
                if !within_bound(&th, &bound) {
                    return Ok(Outcome::fail(format!("theta bound: k={k} j={j} l={ell}")));
                }
                if !is_integral_after(&clear, &th) {
                    return Ok(Outcome::fail(format!("theta integrality: k={k} j={j} l={ell}")));
                }
            }
        }
    }
    let bad = (1..=k0_max).into_par_iter().find_map_first(|k| {
        let bound = theta0_bound(a, n, k);
        let clear = table.theta0_clearing(k).ok()?;
        for j in 0..=jmax {
            for ell in 0..a {
                for t in 0..n + k {
                    for (bar, v) in [(false, table.theta0(k, j, ell, t)), (true, table.theta0bar(k, j, ell, t))] {
                        let v = v.ok()?;
                        let tag = if bar { "theta0bar" } else { "theta0" };
                        if !within_bound(&v, &bound) {
                            return Some(format!("{tag} bound: k={k} j={j} l={ell} t={t}"));
                        }
                        if !is_integral_after(&clear, &v) {
                            return Some(format!("{tag} integrality: k={k} j={j} l={ell} t={t}"));
                        }
                    }
                }
            }
        }
        None
    });
    Ok(match bad {
        Some(w) => Outcome::fail(w),
        None => Outcome::pass(json!({"a": a, "n": n, "N": modulus, "k_max": k_max, "k0_max": k0_max})),
    })
}

/// A5: for every prefix `k < K`, the `𝔄_{n,k}` vanish exactly when the `P_{n,k,1}(1)` do;
/// the two computations of `𝔄` agree, and `𝔄_{n,k} = 0` for all `k < ωn`.
pub fn frak_a_equivalence(f: &FnRepresentation) -> Result<Outcome> {
    let kmax = f.frak_a.len();
    let p1 = f.p_k1_at_one(kmax)?;
    let mut all_a = true;
    let mut all_p = true;
    for k in 1..=kmax {
        all_a &= f.frak_a[k - 1].is_zero();
        all_p &= p1[k - 1].is_zero();
        if all_a != all_p {
            return Ok(Outcome::fail(format!("prefix through k={k}: A-vanishing {all_a}, P(1)-vanishing {all_p}")));
        }
        if f.frak_a[k - 1] != f.frak_a_formula(k as u64) {
            return Ok(Outcome::fail(format!("A_(n,{k}): series and closed formula differ")));
        }
    }
    let onset = f.frak_a.iter().position(|v| !v.is_zero()).map(|k| k + 1);
    let wn = Parameters::times_n(&f.params.omega, f.n) as usize;
    if let Some(k) = onset.filter(|&k| k < wn) {
        return Ok(Outcome::fail(format!("A_(n,{k}) != 0 below omega*n = {wn}")));
    }
    Ok(Outcome::pass(json!({"k_max": kmax, "first_nonzero_k": onset})))
}

/// A6: `Σ_i P_{n,i}(e^x)(-x)^{i-1}/(i-1)! = Σ_k 𝔄_{n,k}(-x)^{k-1}/(k-1)!` through `x^order`.
pub fn formal_series_identity(f: &FnRepresentation, order: usize) -> Outcome {
    let nn = f.params.modulus;
    let frak = frak_a_by_series(&f.c, nn, order + 1);
    let fact: Vec<BigInt> = (0..=order as u64).map(crate::arith::factorial).collect();
    for t in 0..=order {
        let mut lhs = Rat::zero();
        for (i0, row) in f.c.iter().enumerate() {
            if i0 > t {
                break;
            }
            let u = t - i0;
            // [x^u] P_{n,i}(e^x) = Σ_j c_{i,j} (Nj)^u / u!
            let mut s = BigInt::zero();
            for (j, cij) in row.iter().enumerate() {
                if !cij.is_zero() {
                    s += cij * num_traits::pow(BigInt::from(nn * j as u64), u);
                }
            }
            let sign = if i0 % 2 == 0 { 1 } else { -1 };
            lhs += Rat::new(s * sign, &fact[u] * &fact[i0]);
        }
        let sign = if t % 2 == 0 { 1 } else { -1 };
        let rhs = Rat::new(&frak[t] * sign, fact[t].clone());
        if lhs != rhs {
            return Outcome::fail(format!("coefficient of x^{t}"));
        }
    }
    Outcome::pass(json!({"order": order}))
}

/// A18: `(k-1) lcm_j C(k-2, j) = d_{k-1}` for `2 <= k <= k_max`.
pub fn farhi_identity(k_max: u64) -> Result<Outcome> {
    for k in 2..=k_max {
        let l = (0..=k as i64 - 2).fold(BigInt::one(), |acc, j| acc.lcm(&binomial(k as i64 - 2, j)));
        if l * BigInt::from(k - 1) != lcm_upto(k - 1)? {
            return Ok(Outcome::fail(format!("k={k}")));
        }
    }
    Ok(Outcome::pass(json!({"k_max": k_max})))
}

// ---------------------------------------------------------------------------
// Character-level checks (A10 parts, A16, A17)

/// Fourier inversion for `chi` alone: `Σ_ℓ χ̂(ℓ) μ^{ℓm} = χ(m)`.
pub fn fourier_exact(chi: &DirichletCharacter) -> Outcome {
    let nn = chi.modulus() as i64;
    for m in 0..2 * nn {
        let mut s = CyclotomicNumber::zero(chi.ambient_order());
        for ell in 0..nn {
            s = s.add(&chi.chi_hat(ell).mul(&chi.mu_power(ell * m)));
        }
        if &s != chi.value(m) {
            return Outcome::fail(format!("{}: m={m}", chi.selector()));
        }
    }
    Outcome::pass(json!({"character": chi.selector()}))
}

/// `Σ_ℓ χ̂(ℓ) Li_i(μ^ℓ z) = L(χ,i,z)` at `z = -1` and `z = 1/2`, `1 <= i <= i_max`.
pub fn fourier_balls(chi: &DirichletCharacter, i_max: u32, prec: u32) -> Result<Outcome> {
    let points = [("-1", CBall::from_real(ball::Ball::from_i64(-1, prec))), ("1/2", CBall::from_rational(&crate::arith::rat(1, 2), prec))];
    let mut worst = f64::NEG_INFINITY;
    for i in 1..=i_max {
        for (name, z) in &points {
            let a = l_chi(chi, i, z, prec)?;
            let b = l_chi_fourier(chi, i, z, prec)?;
            if !a.overlaps(&b) {
                return Ok(Outcome::fail(format!("{}: i={i}, z={name}", chi.selector())));
            }
            worst = worst.max(a.radius_upper_log2().max(b.radius_upper_log2()));
        }
    }
    Ok(Outcome::pass(json!({"i_max": i_max, "max_radius_log10": worst * std::f64::consts::LOG10_2})))
}

/// A16: `τ τ̄ = N`, `τ(χ,ℓ) = χ̄(ℓ) τ(χ,1)`, and `τ(ℓ) ∓ τ(-ℓ) = 2τ(ℓ) ≠ 0` for `ℓ` prime to `N`.
pub fn gauss_suite(chi: &DirichletCharacter) -> Outcome {
    let nn = chi.modulus() as i64;
    if !chi.is_primitive() {
        return Outcome::fail(format!("{} is not primitive", chi.selector()));
    }
    let tau = chi.gauss_sum(1);
    let norm = tau.mul(&tau.conj());
    if norm.as_rational() != Some(Rat::from_integer(BigInt::from(nn))) {
        return Outcome::fail(format!("{}: tau * conj(tau) != N", chi.selector()));
    }
    let odd = chi.parity_eps_chi() == 1;
    for ell in 0..nn {
        let t = chi.gauss_sum(ell);
        if t != chi.conj_value(ell).mul(&tau) {
            return Outcome::fail(format!("{}: translation law at l={ell}", chi.selector()));
        }
        if ell.gcd(&nn) == 1 {
            let other = chi.gauss_sum(-ell);
            let s = if odd { t.sub(&other) } else { t.add(&other) };
            if s.is_zero() || s != t.add(&t) {
                return Outcome::fail(format!("{}: trigonometric sum at l={ell}", chi.selector()));
            }
        }
    }
    Outcome::pass(json!({"character": chi.selector()}))
}

/// A17: `|L(χ,i,-1) - (2^{1-i}χ(2)-1) L(χ,i,1)| < 10^{tol_log10}` with overlapping balls.
pub fn minus_one_check(chi: &DirichletCharacter, i_range: std::ops::RangeInclusive<u32>, prec: u32, tol_log10: f64) -> Result<Outcome> {
    let mut worst = f64::NEG_INFINITY;
    for i in i_range.clone() {
        let (lhs, rhs) = minus_one_relation(chi, i, prec)?;
        let d = lhs.sub(&rhs);
        let mag = d.log2_abs_upper() * std::f64::consts::LOG10_2;
        worst = worst.max(mag);
        if !lhs.overlaps(&rhs) || mag >= tol_log10 {
            return Ok(Outcome::fail(format!("{}: i={i}, log10|diff| <= {mag:.1}", chi.selector())));
        }
    }
    Ok(Outcome::pass(json!({
        "i_range": [i_range.start(), i_range.end()],
        "max_log10_diff": worst,
        "tolerance_log10": tol_log10,
    })))
}

// ---------------------------------------------------------------------------
// Form-level checks (A7-A15)

/// A7: `S^{[∞]}(z) = V^{[∞]}(z) + Σ Q_i(z) Li_i(1/z)` and
/// `S^{[0]}(z) = V^{[0]}(z) + Σ (-1)^i Q_i(z) Li_i(z)` at `z = e(a/q)`, every `p`.
pub fn v_identity(f: &FnRepresentation, points: &[(i64, u64)], prec: u32) -> Result<Outcome> {
    let bad = (0..=f.params.h)
        .into_par_iter()
        .map(|p| -> Result<Option<String>> {
            let (vinf, vzero) = v_polynomials(f, p)?;
            let fam = q_initial(f, p)?;
            for &(a, q) in points {
                let z = ball::root_of_unity(a, q, prec);
                let lhs_inf = s_series(f, p, 1, SeriesKind::Infinity, &z, prec)?;
                let lhs_zero = s_series(f, p, 1, SeriesKind::Zero, &z, prec)?;
                let (rhs_inf, rhs_zero) = q_combination(&fam, &eval_laurent(&vinf, &z), &eval_laurent(&vzero, &z), a, q, prec)?;
                if !lhs_inf.overlaps(&rhs_inf) {
                    return Ok(Some(format!("S_inf, p={p}, z=e({a}/{q})")));
                }
                if !lhs_zero.overlaps(&rhs_zero) {
                    return Ok(Some(format!("S_0, p={p}, z=e({a}/{q})")));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match bad.into_iter().flatten().next() {
        Some(w) => Outcome::fail(w),
        None => Outcome::pass(json!({"points": points.iter().map(|(a, q)| format!("e({a}/{q})")).collect::<Vec<_>>()})),
    })
}

fn q_combination(fam: &QFamily, base_inf: &CBall, base_zero: &CBall, a: i64, q: u64, prec: u32) -> Result<(CBall, CBall)> {
    let z = ball::root_of_unity(a, q, prec);
    let mut r_inf = base_inf.clone();
    let mut r_zero = base_zero.clone();
    for i in 1..=fam.width() {
        if fam.q[i].is_zero() {
            continue;
        }
        let qz = eval_laurent(&to_rational(&fam.q[i]), &z);
        r_inf = r_inf.add(&qz.mul(&polylog_root_of_unity(i as u32, -a, q, prec)?));
        let t = qz.mul(&polylog_root_of_unity(i as u32, a, q, prec)?);
        r_zero = if i % 2 == 0 { r_zero.add(&t) } else { r_zero.sub(&t) };
    }
    Ok((r_inf, r_zero))
}

/// A8: the `(k-1)`-th derivative series against `Q_0 + Σ Q_i Li_i(1/z)` and
/// `Q̄_0 + Σ (-1)^i Q_i Li_i(z)` at `z = e(a/q)` for sampled `(p,k)`.
pub fn derivative_identity(f: &FnRepresentation, samples: &[(u64, u64)], point: (i64, u64), prec: u32) -> Result<Outcome> {
    let (a, q) = point;
    let z = ball::root_of_unity(a, q, prec);
    let bad = samples
        .par_iter()
        .map(|&(p, k)| -> Result<Option<String>> {
            let fams = q_families(f, p, k)?;
            let fam = fams.last().unwrap();
            let missing = || Error::Domain(format!("Q_0 keeps a pole at z = 1 for (p,k)=({p},{k})"));
            let q0 = eval_laurent(&to_rational(&fam.q0().ok_or_else(missing)?), &z);
            let q0b = eval_laurent(&to_rational(&fam.q0bar().ok_or_else(missing)?), &z);
            let (r_inf, r_zero) = q_combination(fam, &q0, &q0b, a, q, prec)?;
            let s_inf = s_series(f, p, k, SeriesKind::Infinity, &z, prec)?;
            let s_zero = s_series(f, p, k, SeriesKind::Zero, &z, prec)?;
            if !s_inf.overlaps(&r_inf) {
                return Ok(Some(format!("infinity series, (p,k)=({p},{k})")));
            }
            if !s_zero.overlaps(&r_zero) {
                return Ok(Some(format!("zero series, (p,k)=({p},{k})")));
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match bad.into_iter().flatten().next() {
        Some(w) => Outcome::fail(w),
        None => Outcome::pass(json!({"samples": samples, "point": format!("e({a}/{q})")})),
    })
}

/// Default `(p, k)` samples: the corners and the middle of the window.
pub fn window_samples(params: &Parameters, n: u64) -> Vec<(u64, u64)> {
    let w = pk_window(params, n);
    if w.is_empty() {
        return w;
    }
    let mut s = vec![w[0], w[w.len() / 2], w[w.len() - 1]];
    s.dedup();
    s
}

/// A9: `z^{k-1}Q_i ∈ Q[z^N]` for every `k`; on the window `Q_1(1) = 0`, `Q_0` and `Q̄_0`
/// have no pole at 1 and `0 <= deg <= (r+1)n` after scaling; `Q_i = 0` for `i > b_n + p`.
pub fn q_structure(f: &FnRepresentation) -> Result<Outcome> {
    let par = &f.params;
    let lo = 2 * par.rn(f.n) as u64 + 2;
    let hi = Parameters::times_n(&par.kappa, f.n) as u64;
    let r1n = Parameters::times_n(&(&par.r + Rat::one()), f.n);
    let nn = par.modulus as i64;
    let bad = (0..=par.h)
        .into_par_iter()
        .map(|p| -> Result<Option<String>> {
            for fam in q_families(f, p, hi)? {
                let k = fam.k;
                for i in 1..=fam.width() {
                    if !fam.q[i].shift(k as i64 - 1).exponents_divisible_by(nn) {
                        return Ok(Some(format!("(p,k)=({p},{k}): z^(k-1) Q_{i} not in Q[z^N]")));
                    }
                    if i as u64 > f.bn + p && !fam.q[i].is_zero() {
                        return Ok(Some(format!("(p,k)=({p},{k}): Q_{i} nonzero beyond b_n + p")));
                    }
                }
                if k < lo {
                    continue;
                }
                if !fam.q[1].eval_one().is_zero() {
                    return Ok(Some(format!("(p,k)=({p},{k}): Q_1(1) != 0")));
                }
                for (name, l) in [("Q_0", fam.q0_scaled()), ("Qbar_0", fam.q0bar_scaled())] {
                    let Some(l) = l else {
                        return Ok(Some(format!("(p,k)=({p},{k}): {name} has a pole at 1")));
                    };
                    if l.low().map_or(false, |v| v < 0) || l.high().map_or(false, |v| v > r1n) {
                        return Ok(Some(format!("(p,k)=({p},{k}): degree of z^(k-1) {name}")));
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match bad.into_iter().flatten().next() {
        Some(w) => Outcome::fail(w),
        None => Outcome::pass(json!({"k_range": [lo, hi], "p_range": [0, par.h]})),
    })
}

/// A10 (iii.a), (iii.b) for `Q_0` and `Q̄_0` at `z = -1` and `z = 2`, every `(p,k)` of the window.
pub fn fourier_polynomial_identities(f: &FnRepresentation, chi: &DirichletCharacter) -> Result<Outcome> {
    let par = &f.params;
    let nn = par.modulus as i64;
    let lo = 2 * par.rn(f.n) as u64 + 2;
    let hi = Parameters::times_n(&par.kappa, f.n) as u64;
    let order = chi.ambient_order();
    let zs = [Rat::from_integer(BigInt::from(-1)), Rat::from_integer(BigInt::from(2))];
    let bad = (0..=par.h)
        .into_par_iter()
        .map(|p| -> Result<Option<String>> {
            for fam in q_families(f, p, hi)?.into_iter().filter(|fam| fam.k >= lo) {
                let k = fam.k;
                for (name, s) in [("Q", fam.q0_scaled()), ("Qbar", fam.q0bar_scaled())] {
                    let s = s.ok_or_else(|| Error::Domain(format!("pole at 1 for (p,k)=({p},{k})")))?;
                    let parts = q_mod_decompose(&s, nn as u64);
                    for z in &zs {
                        let at_ell: Vec<CyclotomicNumber> = (0..nn).map(|ell| eval_at_mu(chi, &s, ell, z)).collect();
                        let pieces: Vec<Rat> =
                            parts.iter().enumerate().map(|(m, q)| rat_pow(z, m as i64) * eval_int_laurent(q, z)).collect();
                        for ell in 0..nn {
                            let lhs = CyclotomicNumber::from_terms(
                                order,
                                pieces.iter().enumerate().map(|(m, v)| (ell * m as i64 * (order as i64 / nn), v.clone())),
                            );
                            if lhs != at_ell[ell as usize] {
                                return Ok(Some(format!("(iii.a) {name}, (p,k)=({p},{k}), l={ell}, z={z}")));
                            }
                        }
                        for (m, piece) in pieces.iter().enumerate() {
                            let mut acc = CyclotomicNumber::zero(order);
                            for ell in 0..nn {
                                acc = acc.add(&chi.mu_power(-ell * m as i64).mul(&at_ell[ell as usize]));
                            }
                            let acc = acc.scale(&Rat::new(BigInt::one(), BigInt::from(nn)));
                            if acc.as_rational().as_ref() != Some(piece) {
                                return Ok(Some(format!("(iii.b) {name}, (p,k)=({p},{k}), m={m}, z={z}")));
                            }
                        }
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match bad.into_iter().flatten().next() {
        Some(w) => Outcome::fail(w),
        None => Outcome::pass(json!({"points": ["-1", "2"]})),
    })
}

/// A11: each row of `L_n` equals the corresponding row of `Q_n M_n`, with
/// `Q^{{ℓ}}_0(-1) = (-1)^{k-1} (z^{k-1}Q_0)(-μ^ℓ)` evaluated in the cyclotomic field.
pub fn reassembly(f: &FnRepresentation, table: &LinearFormTable, chi: &DirichletCharacter) -> Result<Outcome> {
    let par = &f.params;
    let nn = par.modulus as i64;
    let hi = Parameters::times_n(&par.kappa, f.n) as u64;
    let eps_sign = Rat::from_integer(BigInt::from(if chi.epsilon() % 2 == 0 { 1 } else { -1 }));
    let minus_one = Rat::from_integer(BigInt::from(-1));
    let bad = (0..=par.h)
        .into_par_iter()
        .map(|p| -> Result<Option<String>> {
            for fam in q_families(f, p, hi)? {
                let k = fam.k;
                let Some(row) = table.row(p, k) else { continue };
                let scale = Rat::new(table.delta[&k].clone(), crate::arith::factorial(k - 1));
                let ksign = Rat::from_integer(BigInt::from(if (k - 1) % 2 == 0 { 1 } else { -1 }));
                let pole = || Error::Domain(format!("pole at 1 for (p,k)=({p},{k})"));
                let s = fam.q0_scaled().ok_or_else(pole)?;
                let sb = fam.q0bar_scaled().ok_or_else(pole)?;
                let q_ell: Vec<CyclotomicNumber> =
                    (0..nn).map(|ell| eval_at_mu(chi, &s, ell, &minus_one).scale(&ksign)).collect();
                let qb_ell: Vec<CyclotomicNumber> =
                    (0..nn).map(|ell| eval_at_mu(chi, &sb, ell, &minus_one).scale(&ksign)).collect();
                for m in 0..nn {
                    let mut acc = CyclotomicNumber::zero(chi.ambient_order());
                    for ell in 0..nn {
                        acc = acc.add(&chi.mu_power(ell * m).mul(&q_ell[ell as usize]));
                        acc = acc.add(&chi.mu_power(-ell * m).mul(&qb_ell[ell as usize]).scale(&eps_sign));
                    }
                    let want = acc.scale(&(&scale / Rat::from_integer(BigInt::from(nn))));
                    if want.as_rational() != Some(Rat::from_integer(row.lambda0[m as usize].clone())) {
                        return Ok(Some(format!("(p,k,i)=({p},{k},0<{m}>)")));
                    }
                }
                for i in 1..=fam.width() {
                    let v = Rat::from_integer(fam.q[i].eval_minus_one()) * &scale;
                    if v != Rat::from_integer(row.lambda[i - 1].clone()) {
                        return Ok(Some(format!("(p,k,i)=({p},{k},{i})")));
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match bad.into_iter().flatten().next() {
        Some(w) => Outcome::fail(w),
        None => Outcome::pass(json!({"rows": table.rows.len()})),
    })
}

/// A12: every rational `λ` has denominator 1 and equals the stored integer; `λ_i = 0`
/// for `i > b_n + h`.
pub fn integrality(f: &FnRepresentation, table: &LinearFormTable) -> Result<Outcome> {
    let par = &f.params;
    let hi = Parameters::times_n(&par.kappa, f.n) as u64;
    let cut = (f.bn + par.h) as usize;
    let bad = (0..=par.h)
        .into_par_iter()
        .map(|p| -> Result<Option<String>> {
            for fam in q_families(f, p, hi)? {
                let k = fam.k;
                let Some(row) = table.row(p, k) else { continue };
                let (l0, l) = lambda_row_rational(&fam, &table.delta[&k], table.epsilon)?;
                for (m, v) in l0.iter().enumerate() {
                    if !v.is_integer() {
                        return Ok(Some(format!("(p,k,i)=({p},{k},0<{m}>): denominator {}", v.denom())));
                    }
                    if v.numer() != &row.lambda0[m] {
                        return Ok(Some(format!("(p,k,i)=({p},{k},0<{m}>): stored value differs")));
                    }
                }
                for (i0, v) in l.iter().enumerate() {
                    if !v.is_integer() {
                        return Ok(Some(format!("(p,k,i)=({p},{k},{}): denominator {}", i0 + 1, v.denom())));
                    }
                    if v.numer() != &row.lambda[i0] {
                        return Ok(Some(format!("(p,k,i)=({p},{k},{}): stored value differs", i0 + 1)));
                    }
                    if i0 >= cut && !v.is_zero() {
                        return Ok(Some(format!("(p,k,i)=({p},{k},{}): nonzero beyond b_n + h", i0 + 1)));
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match bad.into_iter().flatten().next() {
        Some(w) => Outcome::fail(w),
        None => Outcome::pass(json!({"rows": table.rows.len(), "max_abs_lambda": table.max_abs().to_string()})),
    })
}

/// Ratios `max log|λ| / (n log β)` and `max log|Λ| / (n log α)`.
#[derive(Clone, Debug)]
pub struct EnvelopeMeasurement {
    pub n: u64,
    pub lambda_ratio: f64,
    pub value_ratio: f64,
    pub log_beta: f64,
    pub log_alpha: f64,
    pub max_log_lambda: f64,
    pub max_log_value: f64,
}

impl EnvelopeMeasurement {
    /// `|λ| <= β^{n(1+s)}`.
    pub fn lambda_within(&self, s: f64) -> bool {
        self.max_log_lambda <= (1.0 + s) * self.n as f64 * self.log_beta
    }

    /// `|Λ| <= α^{n(1+s)}`.
    pub fn value_within(&self, s: f64) -> bool {
        self.max_log_value <= (1.0 + s) * self.n as f64 * self.log_alpha
    }
}

/// A13 data: envelope ratios for one table, given the values `Λ_{n,(p,k)}`.
pub fn measure_envelopes(table: &LinearFormTable, values: &[CBall]) -> EnvelopeMeasurement {
    let lb = log_beta(&table.params, 128).to_f64();
    let la = log_alpha(&table.params, 128).to_f64();
    let max_l = table
        .rows
        .iter()
        .flat_map(|r| r.lambda0.iter().chain(r.lambda.iter()))
        .filter(|v| !v.is_zero())
        .map(|v| ln_bigint(&v.abs()))
        .fold(f64::NEG_INFINITY, f64::max);
    let max_v = values
        .iter()
        .map(|b| b.log2_abs_upper() * std::f64::consts::LN_2)
        .fold(f64::NEG_INFINITY, f64::max);
    let n = table.n as f64;
    EnvelopeMeasurement {
        n: table.n,
        lambda_ratio: max_l / (n * lb),
        value_ratio: max_v / (n * la),
        log_beta: lb,
        log_alpha: la,
        max_log_lambda: max_l,
        max_log_value: max_v,
    }
}

fn envelope_outcome(m: &EnvelopeMeasurement) -> Outcome {
    Outcome::measured(
        "|lambda| <= beta^(n(1+s)), |Lambda| <= alpha^(n(1+s))",
        format!("log|lambda|/(n log beta) = {:.4}, log|Lambda|/(n log alpha) = {:.4}", m.lambda_ratio, m.value_ratio),
        json!({
            "lambda_ratio": m.lambda_ratio,
            "value_ratio": m.value_ratio,
            "lambda_slack": m.lambda_ratio - 1.0,
            "value_slack": m.value_ratio - 1.0,
            "log_beta": m.log_beta,
            "log_alpha": m.log_alpha,
            "max_log_lambda": m.max_log_lambda,
            "max_log_value": m.max_log_value,
            "lambda_within_1.05": m.lambda_within(0.05),
            "value_within_1.05": m.value_within(0.05),
        }),
    )
}

/// A14: `Λ` from the L-values and from the derivative series overlap, for every `(p,k)`.
pub fn two_path(f: &FnRepresentation, chi: &DirichletCharacter, table: &LinearFormTable, lv: &LValueVector) -> Result<Outcome> {
    let prec = lv.prec;
    let pairs = pk_window(&f.params, f.n);
    let res = pairs
        .par_iter()
        .map(|&(p, k)| -> Result<(u64, u64, bool, f64)> {
            let a = lambda_value_via_zeta(table, lv, p, k)?;
            let b = lambda_value_direct(f, chi, p, k, prec)?;
            Ok((p, k, a.overlaps(&b), a.radius_upper_log2().max(b.radius_upper_log2())))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some((p, k, _, _)) = res.iter().find(|r| !r.2) {
        return Ok(Outcome::fail(format!("(p,k)=({p},{k})")));
    }
    let worst = res.iter().map(|r| r.3).fold(f64::NEG_INFINITY, f64::max);
    Ok(Outcome::pass(json!({"pairs": res.len(), "max_radius_log10": worst * std::f64::consts::LOG10_2})))
}

// ---------------------------------------------------------------------------
// The matrix L_n and the kernel property (A15)

/// Rows `(p,k)`; columns `λ_0^{<0..N-1>}` then `λ_1..λ_{b+h}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LnMatrix {
    pub modulus: u64,
    pub b: u64,
    pub h: u64,
    pub row_index: Vec<(u64, u64)>,
    pub rows: Vec<Vec<Int>>,
}

impl LnMatrix {
    pub fn from_table(table: &LinearFormTable) -> Self {
        let width = (table.bn + table.params.h) as usize;
        let rows = table
            .rows
            .iter()
            .map(|r| r.lambda0.iter().chain(r.lambda.iter().take(width)).cloned().collect())
            .collect();
        LnMatrix {
            modulus: table.params.modulus,
            b: table.bn,
            h: table.params.h,
            row_index: table.rows.iter().map(|r| (r.p, r.k)).collect(),
            rows,
        }
    }

    pub fn ncols(&self) -> usize {
        (self.b + self.h + self.modulus) as usize
    }

    /// Basis of the right kernel over `Q`, each vector scaled to a primitive integer vector.
    pub fn kernel(&self) -> Vec<Vec<Int>> {
        let ncols = self.ncols();
        let q: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.iter().cloned().map(Rat::from_integer).collect()).collect();
        let (red, pivots) = rref(&q, ncols);
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|c| !pivots.contains(c)) {
            let mut x = vec![Rat::zero(); ncols];
            x[free] = Rat::one();
            for (row, &pc) in red.iter().zip(&pivots) {
                x[pc] = -row[free].clone();
            }
            let den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let ints: Vec<Int> = x.iter().map(|v| (v * Rat::from_integer(den.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            basis.push(ints.into_iter().map(|v| v / &g).collect());
        }
        basis
    }
}

/// Kernel-property data for one `n`.
#[derive(Clone, Debug)]
pub struct KernelReport {
    pub n: u64,
    pub bn: u64,
    pub shape: (usize, usize),
    pub kernel_dim: usize,
    /// `(basis vector, ℓ)` pairs with `φ_ℓ(x_0) ≠ 0`.
    pub violations: Vec<(usize, i64)>,
    /// `φ_ℓ` values per basis vector, rendered exactly.
    pub phi_values: Vec<Vec<String>>,
}

impl KernelReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn render_cyclo(c: &CyclotomicNumber) -> String {
    match c.as_rational() {
        Some(q) => format_rational(&q),
        None => format!("[{}]", c.coords().iter().map(format_rational).collect::<Vec<_>>().join(", ")),
    }
}

/// Exact kernel of `L_n` and the values `φ_ℓ(x_0)` for `ℓ` prime to `N`.
pub fn kernel_report(table: &LinearFormTable, chi: &DirichletCharacter) -> Result<KernelReport> {
    let ln = LnMatrix::from_table(table);
    let basis = ln.kernel();
    let nn = ln.modulus as i64;
    let ells: Vec<i64> = (0..nn).filter(|l| l.gcd(&nn) == 1).collect();
    let mut violations = Vec::new();
    let mut phi_values = Vec::new();
    for (v, x) in basis.iter().enumerate() {
        let x0: Vec<Rat> = x[..nn as usize].iter().cloned().map(Rat::from_integer).collect();
        let mut vals = Vec::new();
        for &ell in &ells {
            let phi = chi.phi_ell_pairing(ell, &x0)?;
            if !phi.is_zero() {
                violations.push((v, ell));
            }
            vals.push(render_cyclo(&phi));
        }
        phi_values.push(vals);
    }
    Ok(KernelReport {
        n: table.n,
        bn: table.bn,
        shape: (ln.rows.len(), ln.ncols()),
        kernel_dim: basis.len(),
        violations,
        phi_values,
    })
}

/// A15 over several `n`, grouped by `b_n`. A violation is a failure only at the largest
/// tested `n`; below it the entry is a measurement recording the violating `n`.
pub fn kernel_property_check(tables: &[&LinearFormTable], chi: &DirichletCharacter) -> Result<Vec<(String, Outcome)>> {
    let Some(first) = tables.first() else {
        return Ok(Vec::new());
    };
    let n_max = tables.iter().map(|t| t.n).max().unwrap();
    let reports = tables.iter().map(|t| kernel_report(t, chi)).collect::<Result<Vec<_>>>()?;
    let mut groups: BTreeMap<u64, Vec<&KernelReport>> = BTreeMap::new();
    for r in &reports {
        groups.entry(r.bn).or_default().push(r);
    }
    let precondition = first.params.kernel_property_ok();
    let mut out = Vec::new();
    for (bn, mut group) in groups {
        group.sort_by_key(|r| r.n);
        let ns = group.iter().map(|r| r.n.to_string()).collect::<Vec<_>>().join(",");
        let detail = json!({
            "b_n": bn,
            "precondition_ok": precondition,
            "per_n": group.iter().map(|r| json!({
                "n": r.n,
                "shape": [r.shape.0, r.shape.1],
                "kernel_dim": r.kernel_dim,
                "violations": r.violations.iter().map(|(v, l)| json!({"vector": v, "l": l})).collect::<Vec<_>>(),
                "phi_values": r.phi_values,
            })).collect::<Vec<_>>(),
        });
        let violating: Vec<u64> = group.iter().filter(|r| !r.holds()).map(|r| r.n).collect();
        let outcome = if violating.is_empty() {
            Outcome::pass(detail)
        } else if violating.contains(&n_max) && precondition {
            let r = group.iter().find(|r| r.n == n_max).unwrap();
            let (v, l) = r.violations[0];
            Outcome { detail, ..Outcome::fail(format!("n={n_max}: kernel vector {v}, l={l}")) }
        } else {
            let why = if precondition { "below onset" } else { "precondition (h+1)(kappa-2r)N + omega > a fails" };
            Outcome::measured(
                "phi_l(x_0) = 0 for n large enough",
                format!("violations at n = {violating:?} ({why})"),
                detail,
            )
        };
        out.push((ns, outcome));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Orchestration

#[derive(Clone, Debug)]
pub struct AuditOptions {
    pub config_id: String,
    /// Decimal digits for ball checks; a 20-digit guard is added internally.
    pub precision_digits: u32,
    /// Largest `k` for the `ϑ` checks A3/A4 (the `θ` checks run to `κn`).
    pub theta0_k_max: u64,
    pub seed: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { config_id: "config".into(), precision_digits: 200, theta0_k_max: 20, seed: 20240601 }
    }
}

impl AuditOptions {
    pub fn prec_bits(&self) -> u32 {
        digits_to_bits(self.precision_digits + 20)
    }
}

/// Shared immutable inputs of an audit run.
pub struct AuditContext {
    pub fns: Vec<FnRepresentation>,
    pub chi: DirichletCharacter,
    pub options: AuditOptions,
    /// One table per `F_n`, or the error that prevented building it.
    pub tables: Vec<std::result::Result<LinearFormTable, String>>,
    lvalues: OnceLock<std::result::Result<LValueVector, String>>,
}

impl AuditContext {
    pub fn new(fns: Vec<FnRepresentation>, chi: DirichletCharacter, options: AuditOptions) -> Self {
        let tables = fns.par_iter().map(|f| lambda_table(f, &chi).map_err(|e| e.to_string())).collect();
        AuditContext { fns, chi, options, tables, lvalues: OnceLock::new() }
    }

    fn lvalues(&self) -> Result<&LValueVector> {
        let width = self.fns.iter().map(|f| (f.params.a + f.params.h) as usize).max().unwrap_or(1);
        self.lvalues
            .get_or_init(|| LValueVector::new(&self.chi, width, self.options.prec_bits()).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Domain(e.clone()))
    }

    fn table(&self, idx: usize) -> Result<&LinearFormTable> {
        self.tables[idx].as_ref().map_err(|e| Error::NonIntegralLambda(e.clone()))
    }

    fn per_n(&self, id: &str, idx: usize) -> Result<Outcome> {
        let f = &self.fns[idx];
        let par = &f.params;
        let prec = self.options.prec_bits();
        let kappa_n = Parameters::times_n(&par.kappa, f.n) as u64;
        match id {
            "A2" => theta_oracle(par.a, f.n, par.modulus, &to_rat_matrix(&f.c), kappa_n as usize),
            "A3" => theta0_oracle(par.a, f.n, par.modulus, &to_rat_matrix(&f.c), self.options.theta0_k_max.min(kappa_n) as usize),
            "A4" => coefficient_bounds(par.a, f.n, par.modulus, kappa_n, self.options.theta0_k_max.min(kappa_n)),
            "A5" => frak_a_equivalence(f),
            "A6" => Ok(formal_series_identity(f, kappa_n as usize + 5)),
            "A7" => v_identity(f, &[(1, 2), (3, 8)], prec),
            "A8" => derivative_identity(f, &window_samples(par, f.n), (3, 8), prec),
            "A9" => q_structure(f),
            "A10" => {
                let poly = fourier_polynomial_identities(f, &self.chi)?;
                if !poly.is_pass() {
                    return Ok(poly);
                }
                Ok(Outcome::pass(json!({"iii": poly.detail})))
            }
            "A11" => reassembly(f, self.table(idx)?, &self.chi),
            "A12" => integrality(f, self.table(idx)?),
            "A13" => {
                let t = self.table(idx)?;
                let lv = self.lvalues()?;
                let values = pk_window(par, f.n)
                    .iter()
                    .map(|&(p, k)| lambda_value_via_zeta(t, lv, p, k))
                    .collect::<Result<Vec<_>>>()?;
                Ok(envelope_outcome(&measure_envelopes(t, &values)))
            }
            "A14" => two_path(f, &self.chi, self.table(idx)?, self.lvalues()?),
            _ => Err(Error::InvalidArgument(format!("{id} is not a per-n check"))),
        }
    }

    fn global(&self, id: &str) -> Result<Outcome> {
        let prec = self.options.prec_bits();
        match id {
            "A1" => Ok(combinatorial_identity(12, &random_rationals(20, self.options.seed))),
            "A10" => {
                let ex = fourier_exact(&self.chi);
                if !ex.is_pass() {
                    return Ok(ex);
                }
                let balls = fourier_balls(&self.chi, 4, prec)?;
                if !balls.is_pass() {
                    return Ok(balls);
                }
                Ok(Outcome::pass(json!({"i": ex.detail, "ii": balls.detail})))
            }
            "A16" => Ok(gauss_suite(&self.chi)),
            "A17" => minus_one_check(&self.chi, 2..=10, prec, -0.75 * self.options.precision_digits as f64),
            "A18" => farhi_identity(40),
            _ => Err(Error::InvalidArgument(format!("{id} is not a configuration-wide check"))),
        }
    }

    /// Runs the selected checks and returns a report sorted by check id and `n`.
    pub fn run(&self, selection: &[String]) -> AuditReport {
        enum Job<'a> {
            Global(&'a str),
            PerN(&'a str, usize),
            Kernel,
        }
        let mut jobs = Vec::new();
        for id in selection {
            let id = id.as_str();
            match id {
                "A1" | "A16" | "A17" | "A18" => jobs.push(Job::Global(id)),
                "A15" => jobs.push(Job::Kernel),
                "A10" => {
                    jobs.push(Job::Global(id));
                    jobs.extend((0..self.fns.len()).map(|i| Job::PerN(id, i)));
                }
                _ => jobs.extend((0..self.fns.len()).map(|i| Job::PerN(id, i))),
            }
        }
        let entry = |id: &str, n: String, o: Outcome, runtime: Duration| AuditEntry {
            check_id: id.to_string(),
            config_id: self.options.config_id.clone(),
            n,
            status: o.status,
            witness: o.witness,
            envelope: o.envelope,
            detail: o.detail,
            runtime,
        };
        let entries: Vec<Vec<AuditEntry>> = jobs
            .par_iter()
            .map(|job| {
                let t = Instant::now();
                match job {
                    Job::Global(id) => vec![entry(id, "-".into(), Outcome::from_result(self.global(id)), t.elapsed())],
                    Job::PerN(id, i) => {
                        let o = Outcome::from_result(self.per_n(id, *i));
                        vec![entry(id, self.fns[*i].n.to_string(), o, t.elapsed())]
                    }
                    Job::Kernel => {
                        let tables: std::result::Result<Vec<&LinearFormTable>, String> =
                            self.tables.iter().map(|t| t.as_ref().map_err(|e| e.clone())).collect();
                        let all_n = self.fns.iter().map(|f| f.n.to_string()).collect::<Vec<_>>().join(",");
                        let res = tables
                            .map_err(Error::NonIntegralLambda)
                            .and_then(|ts| kernel_property_check(&ts, &self.chi));
                        match res {
                            Ok(v) if v.is_empty() => {
                                vec![entry("A15", all_n, Outcome::pass(json!({"note": "no tables"})), t.elapsed())]
                            }
                            Ok(v) => v.into_iter().map(|(ns, o)| entry("A15", ns, o, t.elapsed())).collect(),
                            Err(e) => vec![entry("A15", all_n, Outcome::from_result(Err(e)), t.elapsed())],
                        }
                    }
                }
            })
            .collect();
        let mut report = AuditReport {
            config_id: self.options.config_id.clone(),
            character: self.chi.selector(),
            entries: entries.into_iter().flatten().collect(),
        };
        report.sort();
        report
    }
}

/// Builds the context and runs `selection` (see [`parse_checks`]).
pub fn run_audit(fns: &[FnRepresentation], chi: &DirichletCharacter, selection: &[String], options: &AuditOptions) -> AuditReport {
    if selection.is_empty() {
        return AuditReport { config_id: options.config_id.clone(), character: chi.selector(), entries: Vec::new() };
    }
    AuditContext::new(fns.to_vec(), chi.clone(), options.clone()).run(selection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::parse_selector;

    #[test]
    fn parse_check_lists() {
        assert_eq!(parse_checks("all").unwrap().len(), 18);
        assert_eq!(parse_checks("a1, 14").unwrap(), vec!["A1".to_string(), "A14".to_string()]);
        assert!(parse_checks("A19").is_err());
    }

    #[test]
    fn farhi_small() {
        assert!(farhi_identity(40).unwrap().is_pass());
    }

    #[test]
    fn gauss_and_fourier_mod_5() {
        for chi in crate::characters::enumerate_characters(5).into_iter().filter(|c| c.is_primitive()) {
            assert!(gauss_suite(&chi).is_pass());
            assert!(fourier_exact(&chi).is_pass());
        }
    }

    #[test]
    fn trivial_kernel_is_vacuous() {
        let chi = parse_selector("3:1").unwrap();
        assert!(kernel_property_check(&[], &chi).unwrap().is_empty());
    }

    #[test]
    fn empty_selection_gives_empty_report() {
        let chi = parse_selector("3:1").unwrap();
        let r = run_audit(&[], &chi, &[], &AuditOptions::default());
        assert!(r.entries.is_empty());
        assert!(!r.has_fail());
    }

    #[test]
    fn lemma_on_a_few_points() {
        assert!(combinatorial_identity(8, &random_rationals(3, 1)).is_pass());
    }
}
