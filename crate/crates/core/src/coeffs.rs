//! Compositions `H_{ℓ,k}`, the polynomials `φ(h̄, X)`, the coefficients `θ`,
//! `ϑ`, `ϑ̄`, and the recurrences they describe.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{binomial, delta_lcm_at_most, factorial, lcm_upto, pochhammer_int};
use crate::error::{Error, Result};
use crate::poly::{Laurent, Ring};

/// An element `(h_0, ..., h_ℓ)` of some `H_{ℓ,k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    pub parts: Vec<u64>,
}

impl Composition {
    pub fn ell(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }
}

/// Streams `H_{ℓ,k}` in lexicographic order.
pub struct Compositions {
    next: Option<Vec<u64>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let cur = self.next.take()?;
        let m = cur.len();
        // rightmost non-final position whose suffix can spare one unit
        let mut succ = None;
        let mut suffix: u64 = cur[m - 1];
        for i in (0..m.saturating_sub(1)).rev() {
            if suffix > (m - 1 - i) as u64 {
                let mut v = cur[..=i].to_vec();
                v[i] += 1;
                let rest = suffix - 1;
                let ones = m - 2 - i;
                v.extend(std::iter::repeat(1).take(ones));
                v.push(rest - ones as u64);
                succ = Some(v);
                break;
            }
            suffix += cur[i];
        }
        self.next = succ;
        Some(Composition { parts: cur })
    }
}

/// `H_{ℓ,k}`: (ℓ+1)-tuples of positive integers summing to `k`; empty unless `0 <= ℓ <= k-1`.
pub fn enumerate_compositions(ell: i64, k: i64) -> Compositions {
    if k < 1 || ell < 0 || ell > k - 1 {
        return Compositions { next: None };
    }
    let m = ell as usize + 1;
    let mut first = vec![1u64; m];
    first[m - 1] = (k - ell) as u64;
    Compositions { next: Some(first) }
}

/// `φ(h̄, x)`. The denominator factor `X + 1 - (h_0 + ... + h_u)` is cancelled
/// against the numerator factor with the same `m` before evaluating.
pub fn phi_of_composition<T: Ring>(h: &Composition, x: &T) -> T {
    let k = h.total();
    let ell = h.ell();
    let mut cancelled = vec![false; k as usize];
    let mut s = 0;
    for u in 0..ell {
        s += h.parts[u];
        cancelled[s as usize] = true;
    }
    let mut acc = T::one();
    for m in 1..k {
        if !cancelled[m as usize] {
            acc = acc * (x.clone() + T::from_i64(1 - m as i64).unwrap());
        }
    }
    acc
}

/// `(-1)^ℓ Σ_{h̄ ∈ H_{ℓ,k}} φ(h̄, x)` by explicit enumeration.
pub fn theta_by_compositions<T: Ring>(k: i64, ell: i64, x: &T) -> T {
    let s = enumerate_compositions(ell, k).fold(T::zero(), |acc, h| acc + phi_of_composition(&h, x));
    if ell % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `S[k][ℓ] = Σ_{H_{ℓ,k}} φ(·, x)` for `1 <= k <= k_max`, `0 <= ℓ <= ell_max`,
/// by `S_{ℓ,k+1} = (x-k+1) S_{ℓ,k} + S_{ℓ-1,k}`, `S_{0,1} = 1`. Index 0 in `k` is unused.
pub fn composition_sums<T: Ring>(k_max: usize, ell_max: usize, x: &T) -> Vec<Vec<T>> {
    let mut s = vec![vec![T::zero(); ell_max + 1]; k_max + 1];
    if k_max == 0 {
        return s;
    }
    s[1][0] = T::one();
    for k in 1..k_max {
        let f = x.clone() + T::from_i64(1 - k as i64).unwrap();
        for l in 0..=ell_max {
            let mut v = f.clone() * s[k][l].clone();
            if l > 0 {
                v = v + s[k][l - 1].clone();
            }
            s[k + 1][l] = v;
        }
    }
    s
}

/// Upper bound `k^a 2^n (k-1)!` on `|θ|`.
pub fn theta_bound(a: u64, n: u64, k: u64) -> BigInt {
    BigInt::from(k).pow(a as u32) * (BigInt::one() << n) * factorial(k - 1)
}

/// Upper bound `k^{a+1} 8^{max(k,n)} (k-1)!` on `|ϑ|, |ϑ̄|`.
pub fn theta0_bound(a: u64, n: u64, k: u64) -> BigInt {
    BigInt::from(k).pow(a as u32 + 1) * (BigInt::one() << (3 * k.max(n))) * factorial(k - 1)
}

/// Exact coefficient tables for fixed `(a, n, N)`, memoized per `j`.
pub struct ThetaTable {
    pub a: u64,
    pub n: u64,
    pub modulus: u64,
    cache: Mutex<HashMap<u64, std::sync::Arc<Vec<Vec<BigInt>>>>>,
}

impl ThetaTable {
    pub fn new(a: u64, n: u64, modulus: u64) -> Result<ThetaTable> {
        if a == 0 || modulus == 0 || n % modulus != 0 {
            return Err(Error::InvalidArgument(format!(
                "theta table needs a >= 1 and N | n (a={a}, n={n}, N={modulus})"
            )));
        }
        Ok(ThetaTable { a, n, modulus, cache: Mutex::new(HashMap::new()) })
    }

    pub fn jmax(&self) -> u64 {
        self.n / self.modulus
    }

    fn sums(&self, j: u64, k: u64) -> std::sync::Arc<Vec<Vec<BigInt>>> {
        let mut guard = self.cache.lock().unwrap();
        if let Some(t) = guard.get(&j) {
            if t.len() as u64 > k {
                return t.clone();
            }
        }
        let k_max = (k as usize + 1).max(64).next_power_of_two();
        let x = BigInt::from(self.modulus * j);
        let t = std::sync::Arc::new(composition_sums(k_max, self.a as usize, &x));
        guard.insert(j, t.clone());
        t
    }

    /// `θ_{a,n,k,i,j,ℓ}`; independent of `i` beyond the range check.
    pub fn theta(&self, k: u64, i: u64, j: u64, ell: u64) -> Result<BigRational> {
        if k < 1 || i < 1 || i > self.a || j > self.jmax() || ell > self.a - i {
            return Err(Error::InvalidArgument(format!(
                "theta index out of range: k={k}, i={i}, j={j}, l={ell}"
            )));
        }
        Ok(BigRational::from_integer(self.theta_int(k, j, ell)))
    }

    /// Integer value of `θ(k, j, ℓ)` (zero for `ℓ >= k`).
    pub fn theta_int(&self, k: u64, j: u64, ell: u64) -> BigInt {
        if ell >= k {
            return BigInt::zero();
        }
        let t = self.sums(j, k);
        let v = t[k as usize][ell as usize].clone();
        if ell % 2 == 0 {
            v
        } else {
            -v
        }
    }

    fn check0(&self, k: u64, j: u64, ell: u64, t: u64) -> Result<()> {
        if k < 1 || j > self.jmax() || ell > self.a - 1 || t > self.n + k - 1 {
            return Err(Error::InvalidArgument(format!(
                "theta0 index out of range: k={k}, j={j}, l={ell}, t={t}"
            )));
        }
        Ok(())
    }

    /// `ϑ_{a,n,k,0,j,ℓ,t}`.
    pub fn theta0(&self, k: u64, j: u64, ell: u64, t: u64) -> Result<BigRational> {
        self.check0(k, j, ell, t)?;
        let nj = (self.modulus * j) as i64;
        let (k, t) = (k as i64, t as i64);
        if nj > t || k < 2 {
            return Ok(BigRational::zero());
        }
        let mut acc = BigInt::zero();
        for u in 0..=(t - nj).min(k - 2) {
            let w = t - nj - u;
            let b = binomial(k - u - 2, w);
            if b.is_zero() {
                continue;
            }
            let sign = if w % 2 == 0 { 1 } else { -1 };
            for v in u..=k - 2 {
                let th = self.theta_int((k - v - 1) as u64, j, ell);
                if th.is_zero() {
                    continue;
                }
                let f = pochhammer_int(v - u + 1, u as usize) * pochhammer_int(nj - k + u + 2, (v - u) as usize);
                acc += th * &b * f * sign;
            }
        }
        Ok(BigRational::from_integer(acc))
    }

    /// `ϑ̄_{a,n,k,0,j,ℓ,t}`, including the overall minus sign carried by
    /// `-P_{n,k,1}/(1-z)` in the recurrence for `P̄`.
    pub fn theta0bar(&self, k: u64, j: u64, ell: u64, t: u64) -> Result<BigRational> {
        self.check0(k, j, ell, t)?;
        let nj = (self.modulus * j) as i64;
        let (k, t) = (k as i64, t as i64);
        if nj >= t || k < 2 {
            return Ok(BigRational::zero());
        }
        let mut acc = BigInt::zero();
        for u in 0..=(t - 1 - nj).min(k - 2) {
            let w = t - 1 - nj - u;
            let b = binomial(k - u - 2, w);
            if b.is_zero() {
                continue;
            }
            let sign = if w % 2 == 0 { 1 } else { -1 };
            for v in u..=k - 2 {
                let th = self.theta_int((k - v - 1) as u64, j, ell);
                if th.is_zero() {
                    continue;
                }
                let f = pochhammer_int(v - u + 1, u as usize) * pochhammer_int(nj - k + u + 3, (v - u) as usize);
                acc += th * &b * f * sign;
            }
        }
        Ok(BigRational::from_integer(-acc))
    }

    /// `d_k Δ_{a,max(k,n)} / (k-1)!`, with `Δ` taken over at most `a` factors.
    pub fn theta_clearing(&self, k: u64) -> Result<BigRational> {
        let d = lcm_upto(k)? * delta_lcm_at_most(self.a, k.max(self.n))?;
        Ok(BigRational::new(d, factorial(k - 1)))
    }

    /// `d_k^2 Δ_{a,max(k,n)} / (k-1)!`.
    pub fn theta0_clearing(&self, k: u64) -> Result<BigRational> {
        let dk = lcm_upto(k)?;
        let d = &dk * &dk * delta_lcm_at_most(self.a, k.max(self.n))?;
        Ok(BigRational::new(d, factorial(k - 1)))
    }
}

/// `P_{n,k,i}` for `1 <= k <= k_max`, `1 <= i <= a`, from
/// `P_{n,k+1,i} = P'_{n,k,i} - P_{n,k,i+1}/z` with `P_{n,1,i} = Σ_j c_{i,j} z^{Nj}`.
/// Result is indexed `[k][i]` with index 0 unused in both.
pub fn p_family_by_recurrence<T: Ring>(
    c: &[Vec<T>],
    n: u64,
    modulus: u64,
    k_max: usize,
) -> Result<Vec<Vec<Laurent<T>>>> {
    if modulus == 0 || n % modulus != 0 {
        return Err(Error::InvalidArgument(format!("N={modulus} must divide n={n}")));
    }
    let cols = (n / modulus + 1) as usize;
    if c.iter().any(|row| row.len() != cols) {
        return Err(Error::InvalidArgument("coefficient matrix has the wrong shape".into()));
    }
    let a = c.len();
    let mut fam = vec![vec![Laurent::zero(); a + 2]; k_max + 1];
    if k_max == 0 {
        return Ok(fam);
    }
    for i in 1..=a {
        fam[1][i] = Laurent::from_terms(
            c[i - 1]
                .iter()
                .enumerate()
                .map(|(j, v)| ((modulus as i64) * j as i64, v.clone())),
        );
    }
    for k in 1..k_max {
        for i in 1..=a {
            let d = fam[k][i].derivative();
            fam[k + 1][i] = &d - &fam[k][i + 1].shift(-1);
        }
    }
    for row in fam.iter_mut() {
        row.truncate(a + 1);
    }
    Ok(fam)
}

/// Cleared forms `R_k = z^{k-1}(1-z)^{k-1} X_{k,0}` and `R̄_k` of the two
/// recurrences `X_{k+1,0} = X'_{k,0} + X_{k,1}/(z(1-z))` and
/// `X̄_{k+1,0} = X̄'_{k,0} - X_{k,1}/(1-z)`, given `y_k = z^{k-1} X_{k,1}`.
/// Output indexed by `k` (index 0 unused).
pub fn cleared_zero_family<T: Ring>(y: &[Laurent<T>], k_max: usize) -> (Vec<Laurent<T>>, Vec<Laurent<T>>) {
    let mut r = vec![Laurent::zero(); k_max + 1];
    let mut rb = vec![Laurent::zero(); k_max + 1];
    let mut omz_pow = Laurent::constant(T::one()); // (1-z)^{k-1}
    for k in 1..k_max {
        let src = &omz_pow * &y[k];
        let (a, b) = cleared_zero_step(&r[k], &rb[k], &src, k as u64);
        r[k + 1] = a;
        rb[k + 1] = b;
        omz_pow = omz_pow.mul_one_minus_z_pow(1);
    }
    (r, rb)
}

/// One step `k -> k+1` of [`cleared_zero_family`], with `src = (1-z)^{k-1} y_k`.
pub fn cleared_zero_step<T: Ring>(
    r: &Laurent<T>,
    rb: &Laurent<T>,
    src: &Laurent<T>,
    k: u64,
) -> (Laurent<T>, Laurent<T>) {
    let dz = Laurent::new(1, vec![T::one(), -T::one()]); // z - z^2
    let one_minus_2z = Laurent::new(0, vec![T::one(), T::from_i64(-2).unwrap()]);
    let km1 = T::from_i64(k as i64 - 1).unwrap();
    let step = |prev: &Laurent<T>| {
        let a = &dz * &prev.derivative();
        let b = (&one_minus_2z * prev).scale(&km1);
        &a - &b
    };
    (&step(r) + src, &step(rb) - &src.shift(1))
}

/// Cleared `P_{n,k,0}` and `P̄_{n,k,0}` for `k <= k_max`.
pub fn p0_families<T: Ring>(
    c: &[Vec<T>],
    n: u64,
    modulus: u64,
    k_max: usize,
) -> Result<(Vec<Laurent<T>>, Vec<Laurent<T>>)> {
    let fam = p_family_by_recurrence(c, n, modulus, k_max)?;
    let y: Vec<Laurent<T>> = (0..=k_max)
        .map(|k| if k == 0 || c.is_empty() { Laurent::zero() } else { fam[k][1].shift(k as i64 - 1) })
        .collect();
    Ok(cleared_zero_family(&y, k_max))
}

/// True if `x` is an integer after multiplication by `f`.
pub fn is_integral_after(f: &BigRational, x: &BigRational) -> bool {
    (f * x).is_integer()
}

/// `|x| <= bound`.
pub fn within_bound(x: &BigRational, bound: &BigInt) -> bool {
    x.abs() <= BigRational::from_integer(bound.clone())
}
