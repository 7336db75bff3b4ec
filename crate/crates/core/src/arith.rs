//! Integers, rationals and the lcm quantities `d_k` and `Δ_{a,k}`.

use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest `k` for which `lcm_upto` returns the exact integer.
pub const EXACT_LCM_LIMIT: u64 = 10_000;

/// Primes `<= k` by a plain sieve.
pub fn primes_upto(k: u64) -> Vec<u64> {
    if k < 2 {
        return Vec::new();
    }
    let k = k as usize;
    let mut sieve = vec![true; k + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= k {
        if sieve[i] {
            let mut j = i * i;
            while j <= k {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(p, &is)| if is { Some(p as u64) } else { None })
        .collect()
}

/// Largest `e` with `p^e <= k`.
fn max_power_exponent(p: u64, k: u64) -> u32 {
    let mut e = 0;
    let mut q = p;
    while q <= k {
        e += 1;
        match q.checked_mul(p) {
            Some(v) => q = v,
            None => break,
        }
    }
    e
}

/// `d_k = lcm(1, ..., k)`, exact for `k <= EXACT_LCM_LIMIT`.
pub fn lcm_upto(k: u64) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::InvalidArgument("lcm_upto requires k >= 1".into()));
    }
    if k > EXACT_LCM_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "exact d_k only for k <= {EXACT_LCM_LIMIT}; use log_lcm_upto"
        )));
    }
    let mut acc = BigInt::one();
    for p in primes_upto(k) {
        acc *= BigInt::from(p).pow(max_power_exponent(p, k));
    }
    Ok(acc)
}

/// `log d_k = Σ_{p ≤ k} ⌊log k / log p⌋ log p`, with the floor taken exactly.
pub fn log_lcm_upto(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("log_lcm_upto requires k >= 1".into()));
    }
    Ok(primes_upto(k)
        .into_iter()
        .map(|p| max_power_exponent(p, k) as f64 * (p as f64).ln())
        .sum())
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: i64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut x = x.unsigned_abs();
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// `Δ_{a,k}`: lcm of `|x_1 ⋯ x_a|` over distinct nonzero integers taken from an
/// interval of length at most `k` inside `[-k, k]`. Returns 1 if no product exists.
pub fn delta_lcm(a: u64, k: u64) -> Result<BigInt> {
    delta_lcm_impl(a, k, false)
}

/// Variant of [`delta_lcm`] over products of at most `a` factors. It agrees with
/// `Δ_{a,k}` whenever `a <= k`, and is the quantity the denominator-clearing
/// arguments need when `a > k` (there the literal `Δ_{a,k}` collapses to 1).
pub fn delta_lcm_at_most(a: u64, k: u64) -> Result<BigInt> {
    delta_lcm_impl(a, k, true)
}

fn delta_lcm_impl(a: u64, k: u64, at_most: bool) -> Result<BigInt> {
    if a == 0 || k == 0 {
        return Err(Error::InvalidArgument("delta_lcm requires a, k >= 1".into()));
    }
    let k_i = k as i64;
    let a_us = a as usize;
    // Maximal windows [lo, lo + k] suffice: any shorter interval sits inside one.
    let windows: Vec<(i64, i64)> = (-k_i..=0).map(|lo| (lo, lo + k_i)).collect();
    let feasible = windows
        .iter()
        .any(|&(lo, hi)| (lo..=hi).filter(|&x| x != 0).count() >= a_us);
    if !feasible && !at_most {
        return Ok(BigInt::one());
    }
    let mut acc = BigInt::one();
    for p in primes_upto(k) {
        let mut best = 0u32;
        for &(lo, hi) in &windows {
            let mut vals: Vec<u32> = (lo..=hi)
                .filter(|&x| x != 0)
                .map(|x| valuation(x, p))
                .collect();
            if vals.len() < a_us && !at_most {
                continue;
            }
            vals.sort_unstable_by(|x, y| y.cmp(x));
            let s: u32 = vals.iter().take(a_us).sum();
            best = best.max(s);
        }
        if best > 0 {
            acc *= BigInt::from(p).pow(best);
        }
    }
    Ok(acc)
}

/// Rising factorial `(x)_j = x (x+1) ⋯ (x+j-1)`.
pub fn pochhammer<T>(x: &T, j: usize) -> T
where
    T: Clone + One + Add<Output = T> + Mul<Output = T>,
{
    let mut acc = T::one();
    let mut cur = x.clone();
    for _ in 0..j {
        acc = acc * cur.clone();
        cur = cur + T::one();
    }
    acc
}

/// Rising factorial of an integer argument.
pub fn pochhammer_int(x: i64, j: usize) -> BigInt {
    pochhammer(&BigInt::from(x), j)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, m| acc * BigInt::from(m))
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for m in 0..k {
        acc = acc * BigInt::from(n - m) / BigInt::from(m + 1);
    }
    acc
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"3.9"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        if !ip_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: BigInt = format!("{}{}", if ip_digits.is_empty() { "0" } else { ip_digits }, fp)
            .parse()
            .map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        let v = BigRational::new(whole, den);
        return Ok(if neg { -v } else { v });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Canonical `"p/q"` (or `"p"` when integral) rendering.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Smallest integer `>= x`.
pub fn ceil_rat(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

pub fn floor_rat(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// `lcm` of the denominators, i.e. the smallest positive `n` with `n x ∈ ℤ` for all `x`.
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Natural log of a positive big integer, as f64 (for sizing decisions only).
pub fn ln_bigint(x: &BigInt) -> f64 {
    let x = x.abs();
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 60;
    let top: BigInt = &x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_rational(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    let s = if x.is_negative() { -1.0 } else { 1.0 };
    if x.is_zero() {
        return 0.0;
    }
    s * ln_rational(&x.abs()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcm_brute(k: u64) -> BigInt {
        (1..=k).fold(BigInt::one(), |acc, m| acc.lcm(&BigInt::from(m)))
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_upto(1).unwrap(), BigInt::from(1));
        assert_eq!(lcm_upto(4).unwrap(), BigInt::from(12));
        assert_eq!(lcm_upto(10).unwrap(), BigInt::from(2520));
        assert!(lcm_upto(0).is_err());
        for k in 1..60 {
            assert_eq!(lcm_upto(k).unwrap(), lcm_brute(k));
            let l = log_lcm_upto(k).unwrap();
            assert!((l - ln_bigint(&lcm_brute(k))).abs() < 1e-9);
        }
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_int(7, 0), BigInt::from(1));
        assert_eq!(pochhammer_int(2, 3), BigInt::from(24));
        assert_eq!(pochhammer_int(-3, 2), BigInt::from(6));
        for x in -6i64..6 {
            for j in 0..6usize {
                let lhs = pochhammer_int(x, j);
                let rhs = pochhammer_int(-x - j as i64 + 1, j) * if j % 2 == 0 { 1 } else { -1 };
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn delta_small_examples() {
        assert_eq!(delta_lcm(2, 3).unwrap(), BigInt::from(6));
        for k in 1..=10 {
            assert_eq!(delta_lcm(1, k).unwrap(), lcm_upto(k).unwrap());
            assert_eq!(delta_lcm(k + 2, k).unwrap(), BigInt::from(1));
            assert_eq!(delta_lcm_at_most(k, k).unwrap(), delta_lcm(k, k).unwrap());
            assert_eq!(delta_lcm_at_most(k + 2, k).unwrap(), delta_lcm(k, k).unwrap());
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("39/10").unwrap(), rat(39, 10));
        assert_eq!(parse_rational("3.9").unwrap(), rat(39, 10));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("12").unwrap(), rat(12, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1e3").is_err());
        assert_eq!(format_rational(&rat(529, 50)), "529/50");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }

    #[test]
    fn binomial_row() {
        let row: Vec<BigInt> = (0..=5).map(|k| binomial(5, k)).collect();
        let want: Vec<BigInt> = [1, 5, 10, 10, 5, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(row, want);
        assert!(binomial(3, 4).is_zero());
    }
}
