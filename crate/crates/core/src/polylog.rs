//! Polylogarithms `Li_i(z)`, twisted polylogarithms `L(χ, i, z)` and Hurwitz zeta
//! values as balls.
//!
//! Three evaluation routes are provided and kept independent:
//! * Hurwitz zeta / digamma by Euler–Maclaurin, for arguments that are roots of unity;
//! * summation by parts ("Abel summation") of `Σ g(t) z^t` for `|z| <= 1`, `z != 1`,
//!   with a rigorous remainder obtained from a partial-fraction form of `g`;
//! * the Fourier reconstruction `L(χ, i, z) = Σ_ℓ χ̂(ℓ) Li_i(μ^ℓ z)`.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::arith::pochhammer_int;
use crate::ball::{self, Ball, CBall};
use crate::characters::DirichletCharacter;
use crate::cyclo::CyclotomicNumber;
use crate::error::{Error, Result};

/// Extra bits carried internally by every routine.
const GUARD: u32 = 24;

/// Bits of working precision for a request of `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

// ---------------------------------------------------------------------------
// Bernoulli numbers

static BERNOULLI: Lazy<Mutex<Arc<Vec<BigRational>>>> = Lazy::new(|| Mutex::new(Arc::new(Vec::new())));

/// `B_2, B_4, ..., B_{2n}` from the tangent numbers (Brent–Harvey recurrence).
fn bernoulli_via_tangent(n: usize) -> Vec<BigRational> {
    let mut t = vec![BigInt::zero(); n + 1];
    if n == 0 {
        return Vec::new();
    }
    t[1] = BigInt::one();
    for k in 2..=n {
        t[k] = &t[k - 1] * BigInt::from(k - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
        }
    }
    (1..=n)
        .map(|k| {
            let num = &t[k] * BigInt::from(2 * k);
            let four_k = BigInt::one() << (2 * k);
            let den = &four_k * (&four_k - 1u32);
            let b = BigRational::new(num, den);
            if k % 2 == 0 {
                -b
            } else {
                b
            }
        })
        .collect()
}

/// `B_{2j}` for `1 <= j <= n`, as a shared table (index `j - 1`).
pub fn bernoulli_even_table(n: usize) -> Arc<Vec<BigRational>> {
    let mut guard = BERNOULLI.lock().unwrap();
    if guard.len() < n {
        let target = n.max(2 * guard.len()).max(32);
        *guard = Arc::new(bernoulli_via_tangent(target));
    }
    guard.clone()
}

/// The Bernoulli number `B_{2j}`, `j >= 1`.
pub fn bernoulli_even(j: usize) -> BigRational {
    assert!(j >= 1);
    bernoulli_even_table(j)[j - 1].clone()
}

fn log2_rational_abs(num: &BigInt, den: &BigInt) -> f64 {
    ball::log2_bigint(num) - ball::log2_bigint(den)
}

/// Euler–Maclaurin split point for a target of `prec` bits.
fn em_split(prec: u32, s: u32) -> u64 {
    (prec as u64 * 10) / 24 + s as u64 + 8
}

// ---------------------------------------------------------------------------
// Hurwitz zeta and digamma

/// `ζ(s, x) = Σ_{k>=0} (x+k)^{-s}` for an integer `s >= 2` and rational `x > 0`.
pub fn hurwitz_zeta(s: u32, x: &BigRational, prec: u32) -> Result<Ball> {
    if s < 2 {
        return Err(Error::Domain(format!("hurwitz zeta needs s >= 2, got {s}")));
    }
    if !x.is_positive() {
        return Err(Error::Domain("hurwitz zeta needs x > 0".into()));
    }
    let wp = prec + GUARD;
    let mut m = em_split(wp, s);
    loop {
        if let Some(b) = hurwitz_em(s, x, m, wp) {
            return Ok(b.with_prec(prec));
        }
        m *= 2;
    }
}

fn hurwitz_em(s: u32, x: &BigRational, m: u64, wp: u32) -> Option<Ball> {
    let (p, q) = (x.numer().clone(), x.denom().clone());
    let qs = num_traits::pow(q.clone(), s as usize);
    let mut acc = Ball::zero(wp);
    for k in 0..m {
        let u = &p + &q * BigInt::from(k);
        let den = num_traits::pow(u, s as usize);
        acc = acc.add(&Ball::from_rational(&BigRational::new_raw(qs.clone(), den), wp));
    }
    // y = x + M = u/q
    let u = &p + &q * BigInt::from(m);
    let y = BigRational::new(u.clone(), q.clone());
    let y1s = num_traits::pow(y.recip(), s as usize - 1);
    acc = acc.add(&Ball::from_rational(&(&y1s / BigRational::from_integer(BigInt::from(s - 1))), wp));
    let ys = &y1s / &y;
    acc = acc.add(&Ball::from_rational(&(&ys / BigRational::from_integer(BigInt::from(2))), wp));
    // T_j = B_{2j}/(2j)! (s)_{2j-1} y^{-s-2j+1}
    let target = -(wp as f64) - 4.0;
    let mut prev = f64::INFINITY;
    let mut qpow = num_traits::pow(q.clone(), s as usize + 1);
    let mut upow = num_traits::pow(u.clone(), s as usize + 1);
    let (q2, u2) = (&q * &q, &u * &u);
    let mut fact = BigInt::one(); // (2j)!
    let mut j = 1usize;
    loop {
        fact *= BigInt::from(2 * j - 1) * BigInt::from(2 * j);
        let table = bernoulli_even_table(j);
        let b = &table[j - 1];
        let num = b.numer() * pochhammer_int(s as i64, 2 * j - 1) * &qpow;
        let den = b.denom() * &fact * &upow;
        let size = log2_rational_abs(&num, &den);
        if size < target {
            return Some(acc.add_error_log2(size + 1.0));
        }
        if size > prev {
            return None;
        }
        prev = size;
        acc = acc.add(&Ball::from_rational(&BigRational::new_raw(num, den), wp));
        qpow *= &q2;
        upow *= &u2;
        j += 1;
    }
}

/// Digamma `ψ(x)` for rational `x > 0`.
pub fn digamma(x: &BigRational, prec: u32) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::Domain("digamma needs x > 0".into()));
    }
    let wp = prec + GUARD;
    let mut m = em_split(wp, 1);
    loop {
        if let Some(b) = digamma_em(x, m, wp) {
            return Ok(b.with_prec(prec));
        }
        m *= 2;
    }
}

fn digamma_em(x: &BigRational, m: u64, wp: u32) -> Option<Ball> {
    let (p, q) = (x.numer().clone(), x.denom().clone());
    let mut acc = Ball::zero(wp);
    for k in 0..m {
        let u = &p + &q * BigInt::from(k);
        acc = acc.sub(&Ball::from_rational(&BigRational::new_raw(q.clone(), u), wp));
    }
    let u = &p + &q * BigInt::from(m);
    let y = BigRational::new(u.clone(), q.clone());
    acc = acc.add(&ball::log(&Ball::from_rational(&y, wp)));
    acc = acc.sub(&Ball::from_rational(&(y.recip() / BigRational::from_integer(BigInt::from(2))), wp));
    // T_j = B_{2j} / (2j y^{2j})
    let target = -(wp as f64) - 4.0;
    let mut prev = f64::INFINITY;
    let (q2, u2) = (&q * &q, &u * &u);
    let (mut qpow, mut upow) = (q2.clone(), u2.clone());
    let mut j = 1usize;
    loop {
        let table = bernoulli_even_table(j);
        let b = &table[j - 1];
        let num = b.numer() * &qpow;
        let den = b.denom() * BigInt::from(2 * j) * &upow;
        let size = log2_rational_abs(&num, &den);
        if size < target {
            return Some(acc.add_error_log2(size + 1.0));
        }
        if size > prev {
            return None;
        }
        prev = size;
        acc = acc.sub(&Ball::from_rational(&BigRational::new_raw(num, den), wp));
        qpow *= &q2;
        upow *= &u2;
        j += 1;
    }
}

// ---------------------------------------------------------------------------
// Periodic Dirichlet series at roots of unity

/// `Σ_{m>=1} c(m) m^{-i}` for an `M`-periodic cyclotomic coefficient `c`, given
/// `c(1..=M)`. For `i = 1` the coefficients must sum to zero.
pub fn periodic_series(coeffs: &[CyclotomicNumber], i: u32, prec: u32) -> Result<CBall> {
    let m = coeffs.len() as i64;
    if m == 0 || i == 0 {
        return Err(Error::Domain("empty period or i = 0".into()));
    }
    let wp = prec + GUARD;
    if i == 1 {
        let total = coeffs.iter().skip(1).fold(coeffs[0].clone(), |acc, c| acc.add(c));
        if !total.is_zero() {
            return Err(Error::Domain("divergent series: i = 1 with nonzero mean coefficient".into()));
        }
    }
    let mut acc = CBall::zero(wp);
    for (idx, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let x = BigRational::new(BigInt::from(idx as i64 + 1), BigInt::from(m));
        let v = if i == 1 { digamma(&x, wp)?.neg() } else { hurwitz_zeta(i, &x, wp)? };
        acc = acc.add(&c.to_cball(wp).mul_real(&v));
    }
    // ζ(i, r/M) summed with weight M^{-i}; for i = 1, -ψ(r/M)/M
    let scale = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(m), i as usize));
    Ok(acc.mul_rational(&scale).with_prec(prec))
}

fn root_coeffs(
    chi: Option<&DirichletCharacter>,
    a: i64,
    q: u64,
) -> Vec<CyclotomicNumber> {
    let (nmod, amb) = match chi {
        Some(c) => (c.modulus(), c.ambient_order()),
        None => (1, 1),
    };
    let period = nmod.lcm(&q);
    let order = amb.lcm(&q);
    (1..=period as i64)
        .map(|r| {
            let chi_exp = match chi {
                Some(c) => c.value_exponent(r).map(|e| e as i64 * (order / amb) as i64),
                None => Some(0),
            };
            match chi_exp {
                None => CyclotomicNumber::zero(order),
                Some(e) => CyclotomicNumber::root(order, e + a * r * (order / q) as i64),
            }
        })
        .collect()
}

/// `Li_i(e^{2πi a/q})` through Hurwitz zeta values.
pub fn polylog_root_of_unity(i: u32, a: i64, q: u64, prec: u32) -> Result<CBall> {
    if q == 0 {
        return Err(Error::Domain("q must be positive".into()));
    }
    periodic_series(&root_coeffs(None, a, q), i, prec)
}

/// `L(χ, i, e^{2πi a/q})` through Hurwitz zeta values.
pub fn l_chi_root_of_unity(chi: &DirichletCharacter, i: u32, a: i64, q: u64, prec: u32) -> Result<CBall> {
    if q == 0 {
        return Err(Error::Domain("q must be positive".into()));
    }
    periodic_series(&root_coeffs(Some(chi), a, q), i, prec)
}

// ---------------------------------------------------------------------------
// Abel summation

/// One pole block `(1/D) Σ_{e=1}^{E} A_e (α t + b)^{-e}` of a partial-fraction sum.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleBlock {
    pub b: i64,
    /// `A_1, ..., A_E`.
    pub coeffs: Vec<BigInt>,
}

/// `g(t) = (1/D) Σ_blocks Σ_e A_{b,e} (α t + b)^{-e}` with integer data.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    pub alpha: i64,
    pub denom: BigInt,
    pub blocks: Vec<PoleBlock>,
}

impl PartialFractions {
    /// `t ↦ (t + b)^{-e}`.
    pub fn power(e: u32, b: i64) -> Self {
        let mut coeffs = vec![BigInt::zero(); e as usize];
        coeffs[e as usize - 1] = BigInt::one();
        PartialFractions { alpha: 1, denom: BigInt::one(), blocks: vec![PoleBlock { b, coeffs }] }
    }

    pub fn max_exponent(&self) -> usize {
        self.blocks.iter().map(|b| b.coeffs.len()).max().unwrap_or(0)
    }

    fn first_valid(&self) -> i64 {
        // smallest t with α t + b > 0 for every block
        self.blocks
            .iter()
            .map(|bl| Integer::div_floor(&(-bl.b), &self.alpha) + 1)
            .max()
            .unwrap_or(i64::MIN)
    }

    fn block_fraction(&self, bl: &PoleBlock, t: i64) -> (BigInt, BigInt) {
        let u = BigInt::from(self.alpha) * BigInt::from(t) + BigInt::from(bl.b);
        let mut acc = BigInt::zero();
        for c in &bl.coeffs {
            acc = acc * &u + c;
        }
        let den = num_traits::pow(u, bl.coeffs.len()) * &self.denom;
        (acc, den)
    }

    /// Exact value `g(t)`.
    pub fn exact(&self, t: i64) -> BigRational {
        self.blocks
            .iter()
            .map(|bl| {
                let (n, d) = self.block_fraction(bl, t);
                BigRational::new(n, d)
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `g(t)` as a ball.
    pub fn value(&self, t: i64, prec: u32) -> Ball {
        let mut acc = Ball::zero(prec);
        for bl in &self.blocks {
            let (n, d) = self.block_fraction(bl, t);
            acc = acc.add(&Ball::from_rational(&BigRational::new_raw(n, d), prec));
        }
        acc
    }

    /// Upper bound for `log2 Σ_{t>=T} |Δ^K g(t)|`, with one bit of slack.
    ///
    /// Each pole term satisfies `|Δ^K (αt+b)^{-e}| <= α^K (e)_K (αt+b)^{-e-K}`, and the
    /// sum over `t >= T` is at most the first term plus the comparison integral.
    pub fn diff_tail_log2(&self, k: u64, t: i64) -> f64 {
        let alpha = self.alpha as f64;
        let mut terms: Vec<f64> = Vec::new();
        for bl in &self.blocks {
            let u = alpha * t as f64 + bl.b as f64;
            for (idx, c) in bl.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let e = (idx + 1) as f64;
                let log_poch: f64 = (0..k).map(|j| (e + j as f64).log2()).sum();
                let first = -(e + k as f64) * u.log2();
                let integral = (1.0 + u / (alpha * (e + k as f64 - 1.0))).log2();
                terms.push(ball::log2_bigint(c) + k as f64 * alpha.log2() + log_poch + first + integral);
            }
        }
        if terms.is_empty() {
            return f64::NEG_INFINITY;
        }
        let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = terms.iter().map(|x| (x - mx).exp2()).sum();
        mx + s.log2() - ball::log2_bigint(&self.denom) + 1.0
    }
}

/// Summation plan chosen for a set of evaluation points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AbelPlan {
    /// Terms summed directly: `start <= t < split`.
    pub split: i64,
    /// Number of finite differences.
    pub order: u64,
}

fn plan(g: &PartialFractions, log2_w: f64, start: i64, prec: u32) -> Result<AbelPlan> {
    let emax = g.max_exponent() as f64;
    let target = -(prec as f64) - 8.0;
    if log2_w == f64::NEG_INFINITY {
        return Ok(AbelPlan { split: start.max(g.first_valid()), order: 1 });
    }
    let c = 3.0 * log2_w.exp2().max(1.0);
    let mut k: u64 = 8;
    while k <= 200_000 {
        let split = start.max(g.first_valid()) + (c * (k as f64 + emax)).ceil() as i64;
        if k as f64 * log2_w + g.diff_tail_log2(k, split) <= target {
            return Ok(AbelPlan { split, order: k });
        }
        k += 8;
    }
    Err(Error::TailNotDominated("summation by parts does not converge".into()))
}

/// `Σ_m c_m x^m`. Chained products of rectangular balls inflate the radius by up to
/// `|Re x| + |Im x|` per step, so the powers are recomputed every few terms.
fn power_sum(c: &[Ball], x: &CBall, wp: u32) -> CBall {
    const REFRESH: usize = 16;
    let mut acc = CBall::zero(wp);
    let mut pw = CBall::one(wp);
    for (m, v) in c.iter().enumerate() {
        if m > 0 {
            pw = if m % REFRESH == 0 { x.pow_u(m as u64) } else { pw.mul(x) };
        }
        acc = acc.add(&pw.mul_real(v));
    }
    acc
}

/// `Σ_{t >= start} g(t) z^t` for every `z` in `zs` (`|z| <= 1`, `z != 1`).
///
/// Uses `Σ_{t>=T} g(t) z^t = z^T/(1-z) Σ_{m<K} w^m Δ^m g(T) + w^K Σ_{t>=T} Δ^K g(t) z^t`
/// with `w = z/(1-z)`.
pub fn abel_sum(g: &PartialFractions, zs: &[CBall], start: i64, prec: u32) -> Result<Vec<CBall>> {
    if start < g.first_valid() {
        return Err(Error::Domain("series starts at or before a pole".into()));
    }
    let wp = prec + GUARD;
    let mut ws = Vec::with_capacity(zs.len());
    let mut log2_w = f64::NEG_INFINITY;
    for z in zs {
        let z = z.with_prec(wp);
        if z.log2_abs_lower() > 1e-9 {
            return Err(Error::Domain("|z| > 1".into()));
        }
        let omz = CBall::one(wp).sub(&z);
        if omz.contains_zero() {
            return Err(Error::Domain("summation point too close to z = 1".into()));
        }
        let inv = omz.inv();
        let w = z.mul(&inv);
        if !z.contains_zero() {
            log2_w = log2_w.max(w.log2_abs_upper());
        }
        ws.push((z, inv, w));
    }
    let pl = plan(g, log2_w, start, prec)?;
    let k = pl.order as usize;
    // head
    let head_vals: Vec<Ball> = (start..pl.split).map(|t| g.value(t, wp)).collect();
    // finite differences at T with K extra bits
    let dp = wp + k as u32 + 8;
    let mut row: Vec<Ball> = (0..k as i64).map(|j| g.value(pl.split + j, dp)).collect();
    let mut diffs = Vec::with_capacity(k);
    for _ in 0..k {
        diffs.push(row[0].with_prec(wp));
        row = row.windows(2).map(|p| p[1].sub(&p[0])).collect();
    }
    let err = pl.order as f64 * log2_w + g.diff_tail_log2(pl.order, pl.split);
    let mut out = Vec::with_capacity(zs.len());
    for (z, inv, w) in &ws {
        let mut pw = z.pow_u(start.max(0) as u64);
        if start < 0 {
            pw = pw.mul(&z.inv().pow_u((-start) as u64));
        }
        let head = power_sum(&head_vals, z, wp).mul(&pw);
        let pw_split = pw.mul(&z.pow_u(head_vals.len() as u64));
        let tail = power_sum(&diffs, w, wp).mul(&pw_split).mul(inv);
        let total = head.add(&tail);
        let total = if z.contains_zero() { total } else { total.add_error_log2(err) };
        out.push(total.with_prec(prec));
    }
    Ok(out)
}

fn is_exactly(z: &CBall, re: i64) -> bool {
    z.re.is_exact() && z.im.is_exact() && z.im.mid_raw().is_zero() && z.re.mid_rational() == BigRational::from_integer(BigInt::from(re))
}

/// `Li_i(z) = Σ_{m>=1} z^m / m^i` for `|z| <= 1`, `(i, z) != (1, 1)`.
pub fn polylog(i: u32, z: &CBall, prec: u32) -> Result<CBall> {
    if i == 0 {
        return Err(Error::Domain("polylog order must be >= 1".into()));
    }
    if is_exactly(z, 1) {
        if i == 1 {
            return Err(Error::Domain("Li_1 diverges at z = 1".into()));
        }
        return Ok(CBall::from_real(hurwitz_zeta(i, &BigRational::one(), prec)?));
    }
    if z.contains_zero() && z.re.is_exact() && z.im.is_exact() {
        return Ok(CBall::zero(prec));
    }
    Ok(abel_sum(&PartialFractions::power(i, 0), std::slice::from_ref(z), 1, prec)?.remove(0))
}

/// `L(χ, i, z) = Σ_{m>=1} χ(m) z^m / m^i`, summed directly by residue classes
/// `m = Nq + r` in the variable `z^N`.
pub fn l_chi(chi: &DirichletCharacter, i: u32, z: &CBall, prec: u32) -> Result<CBall> {
    if i == 0 {
        return Err(Error::Domain("order must be >= 1".into()));
    }
    if is_exactly(z, 1) {
        return l_chi_root_of_unity(chi, i, 0, 1, prec);
    }
    let n = chi.modulus() as i64;
    let wp = prec + GUARD;
    let z = z.with_prec(wp);
    let zn = z.pow_u(n as u64);
    let mut acc = CBall::zero(wp);
    let mut zr = CBall::one(wp);
    for r in 1..=n {
        zr = zr.mul(&z);
        if chi.value_exponent(r).is_none() {
            continue;
        }
        let mut coeffs = vec![BigInt::zero(); i as usize];
        coeffs[i as usize - 1] = BigInt::one();
        let g = PartialFractions { alpha: n, denom: BigInt::one(), blocks: vec![PoleBlock { b: r, coeffs }] };
        let inner = abel_sum(&g, std::slice::from_ref(&zn), 0, wp)?.remove(0);
        acc = acc.add(&chi.value(r).to_cball(wp).mul(&zr).mul(&inner));
    }
    Ok(acc.with_prec(prec))
}

/// `L(χ, i, z)` through `Σ_ℓ χ̂(ℓ) Li_i(μ^ℓ z)`.
pub fn l_chi_fourier(chi: &DirichletCharacter, i: u32, z: &CBall, prec: u32) -> Result<CBall> {
    let n = chi.modulus();
    let wp = prec + GUARD;
    let z = z.with_prec(wp);
    let mut acc = CBall::zero(wp);
    for ell in 0..n as i64 {
        let hat = chi.chi_hat(ell);
        if hat.is_zero() {
            continue;
        }
        let point = ball::root_of_unity(ell, n, wp).mul(&z);
        acc = acc.add(&hat.to_cball(wp).mul(&polylog(i, &point, wp)?));
    }
    Ok(acc.with_prec(prec))
}

/// Both sides of `L(χ, i, -1) = (2^{1-i} χ(2) - 1) L(χ, i, 1)`: the left side by
/// direct summation, the right side through Hurwitz zeta values.
pub fn minus_one_relation(chi: &DirichletCharacter, i: u32, prec: u32) -> Result<(CBall, CBall)> {
    if i < 2 {
        return Err(Error::Domain("the relation is checked for i >= 2".into()));
    }
    let wp = prec + GUARD;
    let lhs = l_chi(chi, i, &CBall::from_real(Ball::from_i64(-1, wp)), wp)?;
    let at_one = l_chi_root_of_unity(chi, i, 0, 1, wp)?;
    let two_pow = BigRational::new(BigInt::one(), BigInt::one() << (i - 1));
    let factor = chi.value(2).to_cball(wp).mul_rational(&two_pow).sub(&CBall::one(wp));
    Ok((lhs.with_prec(prec), factor.mul(&at_one).with_prec(prec)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::characters::{enumerate_characters, parse_selector};

    const P: u32 = 300;

    fn real(x: i64) -> CBall {
        CBall::from_real(Ball::from_i64(x, P))
    }

    #[test]
    fn bernoulli_small() {
        assert_eq!(bernoulli_even(1), rat(1, 6));
        assert_eq!(bernoulli_even(2), rat(-1, 30));
        assert_eq!(bernoulli_even(3), rat(1, 42));
        assert_eq!(bernoulli_even(6), rat(691, -2730));
        assert_eq!(bernoulli_even(10), BigRational::new(BigInt::from(-174611), BigInt::from(330)));
    }

    #[test]
    fn zeta_two_is_basel() {
        let z2 = hurwitz_zeta(2, &BigRational::one(), P).unwrap();
        let pi = ball::pi(P);
        let basel = pi.square().div_i64(6);
        assert!(z2.overlaps(&basel));
        assert!(z2.log2_rad() < -(P as f64) + 8.0);
    }

    #[test]
    fn hurwitz_half_relation() {
        // ζ(s, 1/2) = (2^s - 1) ζ(s)
        for s in [2u32, 3, 7] {
            let h = hurwitz_zeta(s, &rat(1, 2), P).unwrap();
            let z = hurwitz_zeta(s, &BigRational::one(), P).unwrap();
            assert!(h.overlaps(&z.mul_i64((1 << s) - 1)));
        }
    }

    #[test]
    fn digamma_values() {
        // ψ(1/2) - ψ(1) = -2 ln 2
        let a = digamma(&rat(1, 2), P).unwrap();
        let b = digamma(&rat(1, 1), P).unwrap();
        assert!(a.sub(&b).overlaps(&ball::ln2(P).mul_i64(-2)));
        // ψ(x+1) = ψ(x) + 1/x
        let c = digamma(&rat(5, 3), P).unwrap();
        let d = digamma(&rat(2, 3), P).unwrap();
        assert!(c.overlaps(&d.add(&Ball::from_rational(&rat(3, 2), P))));
    }

    #[test]
    fn polylog_at_zero_and_half() {
        assert!(polylog(3, &CBall::zero(P), P).unwrap().contains_zero());
        let half = CBall::from_rational(&rat(1, 2), P);
        let l1 = polylog(1, &half, P).unwrap();
        assert!(l1.overlaps(&CBall::from_real(ball::ln2(P))));
        assert!(l1.radius_upper_log2() < -(P as f64) + 8.0);
    }

    #[test]
    fn polylog_at_one_and_minus_one() {
        let l2 = polylog(2, &real(1), P).unwrap();
        let pi2 = ball::pi(P).square();
        assert!(l2.re.overlaps(&pi2.div_i64(6)));
        let lm = polylog(2, &real(-1), P).unwrap();
        assert!(lm.re.overlaps(&pi2.div_i64(-12)));
        let lm1 = polylog(1, &real(-1), P).unwrap();
        assert!(lm1.re.overlaps(&ball::ln2(P).neg()));
        assert!(polylog(1, &real(1), P).is_err());
    }

    #[test]
    fn abel_route_matches_hurwitz_route_on_circle() {
        for (a, q) in [(3i64, 8u64), (1, 3), (2, 5), (1, 2)] {
            for i in [1u32, 2, 5] {
                let z = ball::root_of_unity(a, q, P);
                let x = polylog(i, &z, P).unwrap();
                let y = polylog_root_of_unity(i, a, q, P).unwrap();
                assert!(x.overlaps(&y), "Li_{i}(e(a/q)) a={a} q={q}");
            }
        }
    }

    #[test]
    fn l_chi_trivial_at_minus_one() {
        let chi = parse_selector("1:0").unwrap();
        let v = l_chi(&chi, 2, &real(-1), P).unwrap();
        assert!(v.re.overlaps(&ball::pi(P).square().div_i64(-12)));
    }

    #[test]
    fn l_chi_routes_agree() {
        for n in [3u64, 5, 7] {
            for chi in enumerate_characters(n) {
                for i in [1u32, 2, 3] {
                    let z = CBall::from_real(Ball::from_i64(-1, P));
                    let d = l_chi(&chi, i, &z, P).unwrap();
                    let f = l_chi_fourier(&chi, i, &z, P).unwrap();
                    assert!(d.overlaps(&f), "{} i={i}", chi.selector());
                    if i >= 2 || !chi.is_principal() {
                        let h = l_chi_root_of_unity(&chi, i, 1, 2, P).unwrap();
                        assert!(d.overlaps(&h), "{} i={i}", chi.selector());
                    }
                }
            }
        }
    }

    #[test]
    fn unit_circle_keeps_precision() {
        // many head terms on |z| = 1 must not inflate the radius
        let z = ball::root_of_unity(5, 6, P);
        let v = polylog(3, &z, P).unwrap();
        assert!(v.radius_upper_log2() < -(P as f64) + 48.0, "{}", v.radius_upper_log2());
    }

    #[test]
    fn interior_point() {
        // Li_2 at 0.3 + 0.4 i against a direct series with a geometric tail
        let z = CBall::new(Ball::from_rational(&rat(3, 10), P), Ball::from_rational(&rat(2, 5), P));
        let v = polylog(2, &z, P).unwrap();
        let mut acc = CBall::zero(P);
        let mut pw = CBall::one(P);
        for m in 1..700i64 {
            pw = pw.mul(&z);
            acc = acc.add(&pw.mul_rational(&rat(1, m * m)));
        }
        // |z| = 1/2: tail below 2^{-699}
        let acc = acc.add_error_log2(-(P as f64) - 10.0);
        assert!(v.overlaps(&acc));
    }

    #[test]
    fn minus_one_relation_holds() {
        let chi = parse_selector("3:1").unwrap();
        for i in 2..6 {
            let (l, r) = minus_one_relation(&chi, i, P).unwrap();
            assert!(l.overlaps(&r));
        }
    }
}
