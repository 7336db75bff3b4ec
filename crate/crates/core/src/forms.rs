//! Q-families from the derivation recurrence, the integer coefficients of the linear
//! forms `Λ_{n,(p,k)}` in `χ(0..N-1)` and `ζ_i = 2 L(χ, i, -1)`, and two independent
//! evaluations of `Λ_{n,(p,k)}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{binomial, delta_lcm_at_most, factorial, format_rational, lcm_upto, pochhammer_int};
use crate::ball::{self, Ball, CBall};
use crate::characters::DirichletCharacter;
use crate::cyclo::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::poly::Laurent;
use crate::polylog::{abel_sum, l_chi_root_of_unity, PartialFractions, PoleBlock};
use crate::siegel::{FnRepresentation, Parameters};
use crate::{QLaurent, ZLaurent};

/// `Q_{n,i,(p,k)}` for `1 <= i <= a+h` together with the cleared forms
/// `z^{k-1}(1-z)^{k-1} Q_{n,0,(p,k)}` and the same for `Q̄_{n,0,(p,k)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QFamily {
    pub p: u64,
    pub k: u64,
    pub modulus: u64,
    /// `Q_i` at index `i`; index 0 holds the zero polynomial.
    pub q: Vec<ZLaurent>,
    pub cleared0: ZLaurent,
    pub cleared0bar: ZLaurent,
}

impl QFamily {
    /// Number of polylogarithm indices `a + h`.
    pub fn width(&self) -> usize {
        self.q.len() - 1
    }

    fn uncleared(&self, cleared: &ZLaurent) -> Option<ZLaurent> {
        cleared.div_one_minus_z_pow(self.k as usize - 1)
    }

    /// `z^{k-1} Q_{n,0,(p,k)}`; `None` if `Q_0` keeps a pole at `z = 1`.
    pub fn q0_scaled(&self) -> Option<ZLaurent> {
        self.uncleared(&self.cleared0)
    }

    /// `z^{k-1} Q̄_{n,0,(p,k)}`.
    pub fn q0bar_scaled(&self) -> Option<ZLaurent> {
        self.uncleared(&self.cleared0bar)
    }

    pub fn q0(&self) -> Option<ZLaurent> {
        self.q0_scaled().map(|l| l.shift(1 - self.k as i64))
    }

    pub fn q0bar(&self) -> Option<ZLaurent> {
        self.q0bar_scaled().map(|l| l.shift(1 - self.k as i64))
    }
}

/// Family at `k = 1`: `Q_{i+p,(p,1)} = (-1)^p (i)_p z^{rn} P_{n,i}` and zero elsewhere.
pub fn q_initial(f: &FnRepresentation, p: u64) -> Result<QFamily> {
    let par = &f.params;
    if p > par.h {
        return Err(Error::InvalidArgument(format!("p = {p} exceeds h = {}", par.h)));
    }
    let width = (par.a + par.h) as usize;
    let rn = par.rn(f.n);
    let nn = par.modulus as i64;
    let mut q = vec![Laurent::zero(); width + 1];
    for i in 1..=par.a as usize {
        let mut scale = pochhammer_int(i as i64, p as usize);
        if p % 2 == 1 {
            scale = -scale;
        }
        q[i + p as usize] = Laurent::from_terms(
            f.c[i - 1].iter().enumerate().map(|(j, v)| (rn + nn * j as i64, v * &scale)),
        );
    }
    Ok(QFamily { p, k: 1, modulus: par.modulus, q, cleared0: Laurent::zero(), cleared0bar: Laurent::zero() })
}

/// One derivation step `k -> k+1`.
pub fn q_step(fam: &QFamily) -> QFamily {
    let width = fam.width();
    let mut q = vec![Laurent::zero(); width + 1];
    for i in 1..=width {
        let d = fam.q[i].derivative();
        q[i] = if i < width { &d - &fam.q[i + 1].shift(-1) } else { d };
    }
    let k = fam.k;
    let src = fam.q[1].shift(k as i64 - 1).mul_one_minus_z_pow(k as usize - 1);
    let (c0, c0b) = crate::coeffs::cleared_zero_step(&fam.cleared0, &fam.cleared0bar, &src, k);
    QFamily { p: fam.p, k: k + 1, modulus: fam.modulus, q, cleared0: c0, cleared0bar: c0b }
}

/// Families for `k = 1..=k_max` (index `k - 1`).
pub fn q_families(f: &FnRepresentation, p: u64, k_max: u64) -> Result<Vec<QFamily>> {
    let mut out = vec![q_initial(f, p)?];
    while (out.len() as u64) < k_max {
        let next = q_step(out.last().unwrap());
        out.push(next);
    }
    Ok(out)
}

/// Split `P = Σ_{m<N} z^m P^{<m>}` with each `P^{<m>}` supported on multiples of `N`.
pub fn q_mod_decompose(poly: &ZLaurent, modulus: u64) -> Vec<ZLaurent> {
    poly.residue_split(modulus as usize)
}

/// `δ_{n,k} = d_k^2 Δ_{a+h, max(k, (r+1)n)}` with `Δ` over at most `a+h` factors.
pub fn delta_nk(params: &Parameters, n: u64, k: u64) -> Result<BigInt> {
    let r1n = Parameters::times_n(&(&params.r + BigRational::one()), n) as u64;
    let dk = lcm_upto(k)?;
    Ok(&dk * &dk * delta_lcm_at_most(params.a + params.h, k.max(r1n))?)
}

/// The `(p, k)` window `[0, h] × [2rn+2, κn]`.
pub fn pk_window(params: &Parameters, n: u64) -> Vec<(u64, u64)> {
    let lo = 2 * params.rn(n) + 2;
    let hi = Parameters::times_n(&params.kappa, n);
    let mut out = Vec::new();
    for p in 0..=params.h {
        for k in lo..=hi {
            out.push((p, k as u64));
        }
    }
    out
}

/// Integer coefficients of one linear form.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaRow {
    pub p: u64,
    pub k: u64,
    /// `λ_0^{<m>}` for `0 <= m < N`.
    pub lambda0: Vec<BigInt>,
    /// `λ_i` at index `i - 1`, `1 <= i <= a+h`.
    pub lambda: Vec<BigInt>,
}

/// All coefficients `λ` of the forms `Λ_{n,(p,k)}` for one `F_n` and one character.
#[derive(Clone, Debug)]
pub struct LinearFormTable {
    pub params: Parameters,
    pub n: u64,
    pub bn: u64,
    pub character: String,
    pub epsilon: u8,
    pub delta: BTreeMap<u64, BigInt>,
    pub rows: Vec<LambdaRow>,
}

impl LinearFormTable {
    pub fn row(&self, p: u64, k: u64) -> Option<&LambdaRow> {
        self.rows.iter().find(|r| r.p == p && r.k == k)
    }

    pub fn max_abs(&self) -> BigInt {
        self.rows
            .iter()
            .flat_map(|r| r.lambda0.iter().chain(r.lambda.iter()))
            .map(|v| v.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "p": r.p,
                    "k": r.k,
                    "delta": self.delta[&r.k].to_string(),
                    "lambda0": r.lambda0.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "lambda": r.lambda.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "schema_version": 1,
            "params": self.params.to_json(),
            "n": self.n,
            "bn": self.bn,
            "character": self.character,
            "epsilon": self.epsilon,
            "rows": rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let nn = self.params.modulus as usize;
        let width = (self.params.a + self.params.h) as usize;
        let mut out = String::from("p,k,delta");
        for m in 0..nn {
            out.push_str(&format!(",lambda0_{m}"));
        }
        for i in 1..=width {
            out.push_str(&format!(",lambda_{i}"));
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{}", r.p, r.k, self.delta[&r.k]));
            for v in r.lambda0.iter().chain(r.lambda.iter()) {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

fn check_character(f: &FnRepresentation, chi: &DirichletCharacter) -> Result<()> {
    if chi.modulus() != f.params.modulus {
        return Err(Error::InvalidArgument(format!(
            "character modulus {} does not match N = {}",
            chi.modulus(),
            f.params.modulus
        )));
    }
    if !chi.is_primitive() || chi.modulus() % 2 == 0 {
        return Err(Error::UnsupportedForPipeline(format!("{} is not primitive of odd conductor", chi.selector())));
    }
    Ok(())
}

fn to_integer(x: BigRational, what: impl Fn() -> String) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::NonIntegralLambda(format!("{} = {}", what(), format_rational(&x))))
    }
}

/// `Q^{<m>}(-1)` for `0 <= m <= N`, where `<N>` stands for the `m = 0` class
/// read with the factor `z^{-N}` instead of `z^0`: at `z = -1` it is `-Q^{<0>}(-1)`.
fn residue_values(poly: &ZLaurent, modulus: u64) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = q_mod_decompose(poly, modulus).iter().map(|l| l.eval_minus_one()).collect();
    v.push(-v[0].clone());
    v
}

/// Rational coefficients `(λ_0^{<m>}, λ_i)` of one family, before the integrality check.
pub fn lambda_row_rational(fam: &QFamily, delta: &BigInt, epsilon: u8) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let (p, k) = (fam.p, fam.k);
    let nn = fam.modulus as usize;
    let scale = BigRational::new(delta.clone(), factorial(k - 1));
    let lambda =
        (1..=fam.width()).map(|i| BigRational::from_integer(fam.q[i].eval_minus_one()) * &scale).collect();
    let missing = || Error::NonIntegralLambda(format!("Q_0 keeps a pole at z = 1 for (p,k)=({p},{k})"));
    let q0 = residue_values(&fam.q0_scaled().ok_or_else(missing)?, fam.modulus);
    let q0b = residue_values(&fam.q0bar_scaled().ok_or_else(missing)?, fam.modulus);
    let eps_sign = if epsilon % 2 == 0 { 1 } else { -1 };
    let lambda0 = (0..nn)
        .map(|m| {
            let inner = &q0[nn - m] - &q0b[m] * eps_sign;
            let sign = if (k as usize + m) % 2 == 0 { 1 } else { -1 };
            BigRational::from_integer(inner * sign) * &scale
        })
        .collect();
    Ok((lambda0, lambda))
}

fn lambda_row(fam: &QFamily, delta: &BigInt, epsilon: u8) -> Result<LambdaRow> {
    let (p, k) = (fam.p, fam.k);
    let (l0, l) = lambda_row_rational(fam, delta, epsilon)?;
    let lambda0 = l0
        .into_iter()
        .enumerate()
        .map(|(m, v)| to_integer(v, || format!("lambda_0^<{m}> at (p,k)=({p},{k})")))
        .collect::<Result<Vec<_>>>()?;
    let lambda = l
        .into_iter()
        .enumerate()
        .map(|(i, v)| to_integer(v, || format!("lambda_{} at (p,k)=({p},{k})", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LambdaRow { p, k, lambda0, lambda })
}

/// Builds every `λ` for `(p, k) ∈ [0,h] × [2rn+2, κn]`, failing on a non-integer entry.
pub fn lambda_table(f: &FnRepresentation, chi: &DirichletCharacter) -> Result<LinearFormTable> {
    check_character(f, chi)?;
    let par = &f.params;
    let lo = 2 * par.rn(f.n) as u64 + 2;
    let hi = Parameters::times_n(&par.kappa, f.n) as u64;
    let delta: BTreeMap<u64, BigInt> =
        (lo..=hi).into_par_iter().map(|k| delta_nk(par, f.n, k).map(|d| (k, d))).collect::<Result<_>>()?;
    let eps = chi.epsilon();
    let per_p: Vec<Vec<LambdaRow>> = (0..=par.h)
        .into_par_iter()
        .map(|p| {
            let mut fam = q_initial(f, p)?;
            let mut rows = Vec::new();
            while fam.k < hi {
                fam = q_step(&fam);
                if fam.k >= lo {
                    rows.push(lambda_row(&fam, &delta[&fam.k], eps)?);
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(LinearFormTable {
        params: par.clone(),
        n: f.n,
        bn: f.bn,
        character: chi.selector(),
        epsilon: eps,
        delta,
        rows: per_p.into_iter().flatten().collect(),
    })
}

/// `ζ_0^{<m>} = χ(m)` and `ζ_i = 2 L(χ, i, -1)` for `i ≡ ε (mod 2)`, zero otherwise.
#[derive(Clone, Debug)]
pub struct LValueVector {
    pub character: String,
    pub epsilon: u8,
    pub prec: u32,
    pub zeta0: Vec<CyclotomicNumber>,
    /// `ζ_i` at index `i - 1`.
    pub zeta: Vec<CBall>,
}

impl LValueVector {
    pub fn new(chi: &DirichletCharacter, width: usize, prec: u32) -> Result<Self> {
        let eps = chi.epsilon();
        let zeta = (1..=width as u32)
            .into_par_iter()
            .map(|i| {
                if i % 2 != eps as u32 % 2 {
                    return Ok(CBall::zero(prec));
                }
                Ok(l_chi_root_of_unity(chi, i, 1, 2, prec)?.mul_i64(2))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LValueVector {
            character: chi.selector(),
            epsilon: eps,
            prec,
            zeta0: (0..chi.modulus() as i64).map(|m| chi.value(m).clone()).collect(),
            zeta,
        })
    }
}

/// `Λ_{n,(p,k)} = Σ_m λ_0^{<m>} ζ_0^{<m>} + Σ_i λ_i ζ_i`.
pub fn lambda_value_via_zeta(table: &LinearFormTable, lv: &LValueVector, p: u64, k: u64) -> Result<CBall> {
    let row = table
        .row(p, k)
        .ok_or_else(|| Error::InvalidArgument(format!("(p,k)=({p},{k}) outside the table")))?;
    let prec = lv.prec;
    let mut acc = CBall::zero(prec);
    for (m, l) in row.lambda0.iter().enumerate() {
        if !l.is_zero() {
            acc = acc.add(&lv.zeta0[m].to_cball(prec).mul_int(l));
        }
    }
    for (i, l) in row.lambda.iter().enumerate() {
        if !l.is_zero() {
            acc = acc.add(&lv.zeta[i].mul_int(l));
        }
    }
    Ok(acc)
}

/// Which derivative series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    /// `S^{[∞](k-1)}`: terms `F^{(p)}(t) (-1)^{k-1} (t-rn)_{k-1}`.
    Infinity,
    /// `S^{[0](k-1)}`: terms `F^{(p)}(-t) (rn+t-k+2)_{k-1}`.
    Zero,
}

/// Coefficients of `(x)_m` in increasing degree.
fn rising_poly(m: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for j in 0..m {
        // multiply by (x + j)
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (d, v) in c.iter().enumerate() {
            next[d + 1] += v;
            next[d] += v * BigInt::from(j);
        }
        c = next;
    }
    c
}

/// Coefficients of `P(u + s)` from those of `P`.
fn taylor_shift(p: &[BigInt], s: i64) -> Vec<BigInt> {
    let mut c = p.to_vec();
    let s = BigInt::from(s);
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &c[j + 1] * &s;
            c[j] += t;
        }
    }
    c
}

/// The summand `g(s)` of the derivative series written at `t = rn + s`, `s >= 1`, in
/// partial-fraction form.
pub fn derivative_series(f: &FnRepresentation, p: u64, k: u64, kind: SeriesKind) -> Result<PartialFractions> {
    let par = &f.params;
    if k == 0 || p > par.h {
        return Err(Error::InvalidArgument(format!("(p,k)=({p},{k}) out of range")));
    }
    let omega_n = Parameters::times_n(&par.omega, f.n);
    if omega_n + p as i64 - k as i64 + 1 < 2 {
        return Err(Error::TailNotDominated(format!(
            "summand degree k-1-ωn-p = {} is not <= -2",
            k as i64 - 1 - omega_n - p as i64
        )));
    }
    let rn = par.rn(f.n);
    let nn = par.modulus as i64;
    let km1 = (k - 1) as usize;
    let base = rising_poly(km1);
    let (sigma, sign) = match kind {
        SeriesKind::Infinity => (0i64, if km1 % 2 == 0 { 1 } else { -1 }),
        SeriesKind::Zero => (2 * rn - k as i64 + 2, 1),
    };
    let mut blocks: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
    let mut polypart = vec![BigInt::zero(); km1 + 1];
    for (j, _) in f.c[0].iter().enumerate() {
        let b = match kind {
            SeriesKind::Infinity => rn + nn * j as i64,
            SeriesKind::Zero => rn - nn * j as i64,
        };
        let shifted = taylor_shift(&base, sigma - b);
        for i in 1..=par.a as usize {
            let cij = &f.c[i - 1][j];
            if cij.is_zero() {
                continue;
            }
            let e = i + p as usize;
            let mut coef: BigInt = cij * pochhammer_int(i as i64, p as usize) * BigInt::from(sign);
            if p % 2 == 1 {
                coef = -coef;
            }
            if kind == SeriesKind::Zero && e % 2 == 1 {
                coef = -coef;
            }
            let blk = blocks.entry(b).or_insert_with(Vec::new);
            if blk.len() < e {
                blk.resize(e, BigInt::zero());
            }
            for (d, a) in shifted.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                if d < e {
                    blk[e - d - 1] += &coef * a;
                } else {
                    // (s + b)^{d-e} expanded in s
                    let m = d - e;
                    let mut bp = BigInt::one();
                    for l in (0..=m).rev() {
                        polypart[l] += &coef * a * binomial(m as i64, l as i64) * &bp;
                        bp *= BigInt::from(b);
                    }
                }
            }
        }
    }
    if polypart.iter().any(|v| !v.is_zero()) {
        return Err(Error::TailNotDominated("summand has a nonvanishing polynomial part".into()));
    }
    Ok(PartialFractions {
        alpha: 1,
        denom: BigInt::one(),
        blocks: blocks.into_iter().map(|(b, coeffs)| PoleBlock { b, coeffs }).collect(),
    })
}

fn pow_signed(z: &CBall, e: i64) -> CBall {
    if e >= 0 {
        z.pow_u(e as u64)
    } else {
        z.inv().pow_u((-e) as u64)
    }
}

/// `S^{[∞](k-1)}_{n,p}(z)` for `|z| = 1`, `z != 1`, and `S^{[0](k-1)}_{n,p}(z)` for the
/// same `z`, by summation of the defining series (`k = 1` gives the series themselves).
pub fn s_series(f: &FnRepresentation, p: u64, k: u64, kind: SeriesKind, z: &CBall, prec: u32) -> Result<CBall> {
    let g = derivative_series(f, p, k, kind)?;
    let wp = prec + 32;
    let z = z.with_prec(wp);
    let rn = f.params.rn(f.n);
    let v = match kind {
        SeriesKind::Infinity => {
            let s = abel_sum(&g, &[z.inv()], 1, wp)?.remove(0);
            s.mul(&pow_signed(&z, 1 - k as i64))
        }
        SeriesKind::Zero => {
            let s = abel_sum(&g, std::slice::from_ref(&z), 1, wp)?.remove(0);
            s.mul(&pow_signed(&z, 2 * rn - k as i64 + 1))
        }
    };
    Ok(v.with_prec(prec))
}

/// `Λ_{n,(p,k)}` by direct summation of the two derivative series at `-μ^ℓ`.
pub fn lambda_value_direct(f: &FnRepresentation, chi: &DirichletCharacter, p: u64, k: u64, prec: u32) -> Result<CBall> {
    check_character(f, chi)?;
    let par = &f.params;
    let lo = 2 * par.rn(f.n) as u64 + 2;
    let hi = Parameters::times_n(&par.kappa, f.n) as u64;
    let g_inf = derivative_series(f, p, k, SeriesKind::Infinity)?;
    let g_zero = derivative_series(f, p, k, SeriesKind::Zero)?;
    if k < lo || k > hi || p > par.h {
        return Err(Error::InvalidArgument(format!("(p,k)=({p},{k}) outside [0,h]x[2rn+2, κn]")));
    }
    let scale = BigRational::new(delta_nk(par, f.n, k)?, factorial(k - 1));
    let extra = (ball::log2_bigint(scale.numer()) - ball::log2_bigint(scale.denom())).max(0.0).ceil() as u32;
    // the partial-fraction coefficients are far larger than the sum; cover the cancellation
    let cancel = [&g_inf, &g_zero]
        .iter()
        .flat_map(|g| g.blocks.iter().flat_map(|b| b.coeffs.iter()))
        .map(|c| c.bits())
        .max()
        .unwrap_or(0) as u32;
    let wp = prec + extra + cancel + 32;
    let nn = chi.modulus();
    let rn = par.rn(f.n);
    let mut idx = Vec::new();
    let mut points = Vec::new();
    for ell in 0..nn as i64 {
        let hat = chi.chi_hat(ell);
        if hat.is_zero() {
            continue;
        }
        idx.push((ell, hat));
        points.push(ball::root_of_unity(ell, nn, wp).neg());
    }
    let s_inf = abel_sum(&g_inf, &points, 1, wp)?;
    let s_zero = abel_sum(&g_zero, &points, 1, wp)?;
    let eps_sign = if chi.epsilon() % 2 == 0 { 1 } else { -1 };
    let mut acc = CBall::zero(wp);
    for (t, (_, hat)) in idx.iter().enumerate() {
        let second = points[t].pow_u(2 * rn as u64).mul(&s_zero[t]).mul_i64(eps_sign);
        acc = acc.add(&hat.to_cball(wp).mul(&s_inf[t].add(&second)));
    }
    let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
    Ok(acc.mul_rational(&scale).mul_i64(sign).with_prec(prec))
}

/// `V^{[∞]}_{n,p}` and `V^{[0]}_{n,p}`.
pub fn v_polynomials(f: &FnRepresentation, p: u64) -> Result<(QLaurent, QLaurent)> {
    let par = &f.params;
    if p > par.h {
        return Err(Error::InvalidArgument(format!("p = {p} exceeds h = {}", par.h)));
    }
    let rn = par.rn(f.n);
    let nn = par.modulus as i64;
    let mut vinf: BTreeMap<i64, BigRational> = BTreeMap::new();
    let mut vzero: BTreeMap<i64, BigRational> = BTreeMap::new();
    for i in 1..=par.a as usize {
        let e = i + p as usize;
        let mut scale = pochhammer_int(i as i64, p as usize);
        if p % 2 == 0 {
            scale = -scale;
        }
        for (j, cij) in f.c[i - 1].iter().enumerate() {
            if cij.is_zero() {
                continue;
            }
            let top = rn + nn * j as i64;
            let coef = BigRational::from_integer(cij * &scale);
            for t in 0..top {
                let den = num_traits::pow(BigInt::from(top - t), e);
                *vinf.entry(t).or_insert_with(BigRational::zero) += &coef / BigRational::from_integer(den);
            }
            for t in top + 1..=2 * rn {
                let den = num_traits::pow(BigInt::from(top - t), e);
                *vzero.entry(t).or_insert_with(BigRational::zero) += &coef / BigRational::from_integer(den);
            }
        }
    }
    Ok((Laurent::from_terms(vinf), Laurent::from_terms(vzero)))
}

/// Evaluates a Laurent polynomial at a complex ball.
pub fn eval_laurent(l: &QLaurent, z: &CBall) -> CBall {
    let prec = z.prec();
    let (lo, hi) = match (l.low(), l.high()) {
        (Some(a), Some(b)) => (a, b),
        _ => return CBall::zero(prec),
    };
    let mut acc = CBall::zero(prec);
    for e in (lo..=hi).rev() {
        acc = acc.mul(z).add(&CBall::from_rational(&l.coeff(e), prec));
    }
    acc.mul(&pow_signed(z, lo))
}

/// Integer Laurent polynomial as a rational one.
pub fn to_rational(l: &ZLaurent) -> QLaurent {
    l.map(|v| BigRational::from_integer(v.clone()))
}

/// Ball summary used in reports.
pub fn ball_json(b: &CBall, digits: usize) -> Value {
    let rad = b.re.rad_raw().max(b.im.rad_raw()).clone();
    let radius = Ball::from_raw(BigInt::zero(), rad, b.prec()).rad_sci(4);
    json!({
        "midpoint_re": b.re.mid_sci(digits),
        "midpoint_im": b.im.mid_sci(digits),
        "radius": radius,
        "log10_abs": b.log10_abs_mid(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rising_and_shift() {
        // (x)_3 = x^3 + 3x^2 + 2x
        let r = rising_poly(3);
        assert_eq!(r, vec![0, 2, 3, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
        // (u+2)_3 at u = 1 equals 3*4*5
        let s = taylor_shift(&r, 2);
        let v: BigInt = s.iter().fold(BigInt::zero(), |a, c| a + c);
        assert_eq!(v, BigInt::from(60));
    }

    #[test]
    fn residue_values_convention() {
        // P = 1 + 2z + 3z^3, N = 3: P^<0> = 1 + 3z^3, P^<1> = 2, P^<2> = 0
        let p = Laurent::from_terms([(0, BigInt::from(1)), (1, BigInt::from(2)), (3, BigInt::from(3))]);
        let v = residue_values(&p, 3);
        assert_eq!(v, vec![BigInt::from(-2), BigInt::from(2), BigInt::zero(), BigInt::from(2)]);
    }
}
