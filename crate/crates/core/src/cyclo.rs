//! Exact arithmetic in the cyclotomic field `Q(ζ_M)` over the power basis.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::ball::{root_of_unity, CBall};

/// Precomputed data for one cyclotomic order.
#[derive(Debug)]
struct Field {
    degree: usize,
    /// `x^e mod Φ_M` for `0 <= e < M`, as integer coordinate vectors.
    powers: Vec<Vec<BigInt>>,
}

static FIELDS: Lazy<Mutex<HashMap<u64, Arc<Field>>>> = Lazy::new(|| Mutex::new(HashMap::new()));
static CYCLOTOMIC_POLYS: Lazy<Mutex<HashMap<u64, Vec<BigInt>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Coefficients (constant term first) of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    if let Some(p) = CYCLOTOMIC_POLYS.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = div_monic(&num, &phi_d);
        }
    }
    CYCLOTOMIC_POLYS.lock().unwrap().insert(m, num.clone());
    num
}

fn div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut q = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()), "non-exact cyclotomic division");
    q
}

fn field(order: u64) -> Arc<Field> {
    if let Some(f) = FIELDS.lock().unwrap().get(&order) {
        return f.clone();
    }
    let phi = cyclotomic_polynomial(order);
    let degree = phi.len() - 1;
    let mut powers = Vec::with_capacity(order as usize);
    let mut cur = vec![BigInt::zero(); degree];
    cur[0] = BigInt::one();
    for _ in 0..order {
        powers.push(cur.clone());
        // multiply by x and reduce with x^d = -(Φ - x^d)
        let top = cur[degree - 1].clone();
        let mut next = vec![BigInt::zero(); degree];
        for i in (1..degree).rev() {
            next[i] = cur[i - 1].clone();
        }
        if !top.is_zero() {
            for i in 0..degree {
                next[i] -= &top * &phi[i];
            }
        }
        cur = next;
    }
    let f = Arc::new(Field { degree, powers });
    FIELDS.lock().unwrap().insert(order, f.clone());
    f
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// An element of `Q(ζ_M)` in canonical reduced coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicNumber {
    order: u64,
    coords: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Self {
        let d = field(order).degree;
        CyclotomicNumber { order, coords: vec![BigRational::zero(); d] }
    }

    pub fn from_rational(order: u64, q: BigRational) -> Self {
        let mut z = Self::zero(order);
        z.coords[0] = q;
        z
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    /// `ζ_M^e`.
    pub fn root(order: u64, e: i64) -> Self {
        let mut v = vec![BigRational::zero(); order as usize];
        v[e.rem_euclid(order as i64) as usize] = BigRational::one();
        Self::from_exponent_coeffs(order, &v)
    }

    /// Reduces `Σ_e c_e ζ_M^e` given a length-`M` coefficient vector.
    pub fn from_exponent_coeffs(order: u64, c: &[BigRational]) -> Self {
        let f = field(order);
        assert_eq!(c.len(), order as usize);
        let mut coords = vec![BigRational::zero(); f.degree];
        for (e, ce) in c.iter().enumerate() {
            if ce.is_zero() {
                continue;
            }
            for (i, pi) in f.powers[e].iter().enumerate() {
                if !pi.is_zero() {
                    coords[i] += ce * BigRational::from_integer(pi.clone());
                }
            }
        }
        CyclotomicNumber { order, coords }
    }

    /// Builds from (exponent, rational) pairs.
    pub fn from_terms(order: u64, terms: impl IntoIterator<Item = (i64, BigRational)>) -> Self {
        let mut v = vec![BigRational::zero(); order as usize];
        for (e, c) in terms {
            let k = e.rem_euclid(order as i64) as usize;
            v[k] += c;
        }
        Self::from_exponent_coeffs(order, &v)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn same(&self, o: &Self) {
        assert_eq!(self.order, o.order, "cyclotomic order mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same(o);
        CyclotomicNumber {
            order: self.order,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber { order: self.order, coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CyclotomicNumber { order: self.order, coords: self.coords.iter().map(|a| a * q).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same(o);
        let m = self.order as usize;
        let mut v = vec![BigRational::zero(); m];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[(i + j) % m] += a * b;
            }
        }
        Self::from_exponent_coeffs(self.order, &v)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let terms = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (-(i as i64), c.clone()));
        Self::from_terms(self.order, terms)
    }

    /// Embedding `ζ_M ↦ e^{2πi/M}`.
    pub fn to_cball(&self, prec: u32) -> CBall {
        let mut acc = CBall::zero(prec);
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&root_of_unity(i as i64, self.order, prec).mul_rational(c));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn small_cyclotomic_polynomials() {
        let as_i = |v: Vec<BigInt>| v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(as_i(cyclotomic_polynomial(1)), "-1,1");
        assert_eq!(as_i(cyclotomic_polynomial(3)), "1,1,1");
        assert_eq!(as_i(cyclotomic_polynomial(4)), "1,0,1");
        assert_eq!(as_i(cyclotomic_polynomial(6)), "1,-1,1");
        assert_eq!(as_i(cyclotomic_polynomial(12)), "1,0,-1,0,1");
        for m in 1..40 {
            assert_eq!(cyclotomic_polynomial(m).len() as u64 - 1, euler_phi(m));
        }
    }

    #[test]
    fn root_sums_vanish() {
        for m in [3u64, 5, 6, 12, 15] {
            let mut acc = CyclotomicNumber::zero(m);
            for e in 0..m as i64 {
                acc = acc.add(&CyclotomicNumber::root(m, e));
            }
            assert!(acc.is_zero(), "order {m}");
            let z = CyclotomicNumber::root(m, 1);
            let mut p = CyclotomicNumber::one(m);
            for _ in 0..m {
                p = p.mul(&z);
            }
            assert_eq!(p, CyclotomicNumber::one(m));
            assert_eq!(z.mul(&z.conj()), CyclotomicNumber::one(m));
        }
    }

    #[test]
    fn embedding_matches() {
        let m = 12;
        let x = CyclotomicNumber::root(m, 1)
            .scale(&rat(3, 2))
            .add(&CyclotomicNumber::root(m, 7));
        let b = x.to_cball(200);
        let direct = root_of_unity(1, 12, 200)
            .mul_rational(&rat(3, 2))
            .add(&root_of_unity(7, 12, 200));
        assert!(b.overlaps(&direct));
    }
}
