//! Dense Laurent polynomials over an exact ring.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, One, Zero};

/// Scalar requirements for exact polynomial arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + FromPrimitive
    + Send
    + Sync
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + FromPrimitive
        + Send
        + Sync
{
}

/// `Σ_e c_e z^e` stored densely from the lowest nonzero exponent.
/// Canonical: the first and last stored coefficients are nonzero; zero is empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<T> {
    low: i64,
    coeffs: Vec<T>,
}

impl<T: Ring> Laurent<T> {
    pub fn zero() -> Self {
        Laurent { low: 0, coeffs: Vec::new() }
    }

    pub fn new(low: i64, coeffs: Vec<T>) -> Self {
        let mut p = Laurent { low, coeffs };
        p.normalize();
        p
    }

    pub fn constant(c: T) -> Self {
        Laurent::new(0, vec![c])
    }

    pub fn monomial(c: T, e: i64) -> Self {
        Laurent::new(e, vec![c])
    }

    /// Builds from (exponent, coefficient) pairs, summing repeats.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, T)>) -> Self {
        let terms: Vec<(i64, T)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![T::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = slot.clone() + c;
        }
        Laurent::new(lo, coeffs)
    }

    fn normalize(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.low)
        }
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.low + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, e: i64) -> T {
        if e < self.low {
            return T::zero();
        }
        self.coeffs.get((e - self.low) as usize).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        let low = self.low;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (low + i as i64, c))
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent::new(self.low, self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Laurent { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.clone() * T::from_i64(self.low + i as i64).unwrap())
            .collect();
        Laurent::new(self.low - 1, coeffs)
    }

    /// Value at `z = 1`.
    pub fn eval_one(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.clone())
    }

    /// Value at `z = -1`.
    pub fn eval_minus_one(&self) -> T {
        self.terms().fold(T::zero(), |acc, (e, c)| {
            if e.rem_euclid(2) == 0 {
                acc + c.clone()
            } else {
                acc - c.clone()
            }
        })
    }

    /// Horner evaluation at a ring element (nonnegative exponents only).
    pub fn eval_poly(&self, x: &T) -> T {
        assert!(self.is_zero() || self.low >= 0, "eval_poly on a Laurent polynomial");
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        let mut xp = T::one();
        for _ in 0..self.low {
            xp = xp * x.clone();
        }
        acc * xp
    }

    /// `P(1/z)`.
    pub fn reciprocal(&self) -> Self {
        match self.high() {
            None => Self::zero(),
            Some(h) => {
                let mut c = self.coeffs.clone();
                c.reverse();
                Laurent::new(-h, c)
            }
        }
    }

    /// Exact quotient by `(1 - z)^m`, or `None` if it does not divide.
    pub fn div_one_minus_z_pow(&self, m: usize) -> Option<Self> {
        let mut cur = self.clone();
        for _ in 0..m {
            if cur.is_zero() {
                return Some(cur);
            }
            // P = (1 - z) S  =>  s_e = p_e + s_{e-1}
            let n = cur.coeffs.len();
            let mut s = Vec::with_capacity(n);
            let mut acc = T::zero();
            for c in cur.coeffs.iter().take(n - 1) {
                acc = acc + c.clone();
                s.push(acc.clone());
            }
            // the top coefficient must equal -s_{deg-1}
            let top = cur.coeffs[n - 1].clone();
            if !(top + acc).is_zero() {
                return None;
            }
            cur = Laurent::new(cur.low, s);
        }
        Some(cur)
    }

    /// Multiplication by `(1 - z)^m`.
    pub fn mul_one_minus_z_pow(&self, m: usize) -> Self {
        let mut cur = self.clone();
        for _ in 0..m {
            cur = &cur - &cur.shift(1);
        }
        cur
    }

    /// True if every exponent is a multiple of `n`.
    pub fn exponents_divisible_by(&self, n: i64) -> bool {
        self.terms().all(|(e, _)| e.rem_euclid(n) == 0)
    }

    /// Split `P = Σ_{m<n} z^m P_m` with each `P_m` supported on multiples of `n`.
    pub fn residue_split(&self, n: usize) -> Vec<Self> {
        let mut parts: Vec<Vec<(i64, T)>> = vec![Vec::new(); n];
        for (e, c) in self.terms() {
            let m = e.rem_euclid(n as i64);
            parts[m as usize].push((e - m, c.clone()));
        }
        parts.into_iter().map(Laurent::from_terms).collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Laurent<U> {
        Laurent::new(self.low, self.coeffs.iter().map(f).collect())
    }

    pub fn num_terms(&self) -> usize {
        self.terms().count()
    }
}

impl<T: Ring> Add for &Laurent<T> {
    type Output = Laurent<T>;
    fn add(self, o: &Laurent<T>) -> Laurent<T> {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(o.low);
        let hi = self.high().unwrap().max(o.high().unwrap());
        let coeffs = (lo..=hi).map(|e| self.coeff(e) + o.coeff(e)).collect();
        Laurent::new(lo, coeffs)
    }
}

impl<T: Ring> Sub for &Laurent<T> {
    type Output = Laurent<T>;
    fn sub(self, o: &Laurent<T>) -> Laurent<T> {
        self + &(-o)
    }
}

impl<T: Ring> Neg for &Laurent<T> {
    type Output = Laurent<T>;
    fn neg(self) -> Laurent<T> {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<T: Ring> Mul for &Laurent<T> {
    type Output = Laurent<T>;
    fn mul(self, o: &Laurent<T>) -> Laurent<T> {
        if self.is_zero() || o.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Laurent::new(self.low + o.low, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn zl(low: i64, c: &[i64]) -> Laurent<BigInt> {
        Laurent::new(low, c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn canonical_form() {
        let p = zl(-2, &[0, 0, 1, 2, 0]);
        assert_eq!(p.low(), Some(0));
        assert_eq!(p.high(), Some(1));
        assert!(zl(3, &[0, 0]).is_zero());
        assert_eq!(zl(3, &[0]), Laurent::zero());
    }

    #[test]
    fn arithmetic_and_derivative() {
        let p = zl(-1, &[1, 0, 3]); // z^-1 + 3 z
        let q = zl(0, &[2, 1]); // 2 + z
        let prod = &p * &q;
        assert_eq!(prod, zl(-1, &[2, 1, 6, 3]));
        assert_eq!(p.derivative(), zl(-2, &[-1, 0, 3]));
        assert_eq!(p.eval_minus_one(), BigInt::from(-4));
        assert_eq!(p.eval_one(), BigInt::from(4));
        assert_eq!(p.reciprocal(), zl(-1, &[3, 0, 1]));
    }

    #[test]
    fn one_minus_z_division() {
        let s = zl(-3, &[5, -1, 0, 7]);
        let p = s.mul_one_minus_z_pow(4);
        assert_eq!(p.div_one_minus_z_pow(4), Some(s));
        assert_eq!(zl(0, &[1, 1]).div_one_minus_z_pow(1), None);
    }

    #[test]
    fn residue_split_reassembles() {
        let p = zl(-4, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let parts = p.residue_split(3);
        let mut acc = Laurent::zero();
        for (m, part) in parts.iter().enumerate() {
            assert!(part.exponents_divisible_by(3));
            acc = &acc + &part.shift(m as i64);
        }
        assert_eq!(acc, p);
    }
}
