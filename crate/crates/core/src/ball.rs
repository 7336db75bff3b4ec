//! Fixed-point ball arithmetic on `BigInt`.
//!
//! A [`Ball`] at precision `p` holds integers `mid` and `rad >= 0` and encloses the
//! real interval `[(mid - rad) / 2^p, (mid + rad) / 2^p]`. Every operation rounds so
//! that the enclosure is preserved. [`CBall`] is the rectangular complex analogue.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

const GUARD: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

fn ceil_shr(x: &BigInt, s: u32) -> BigInt {
    // ceil(x / 2^s) for x >= 0
    if s == 0 {
        return x.clone();
    }
    let q: BigInt = x >> s;
    if (&q << s) == *x {
        q
    } else {
        q + 1
    }
}

fn round_shr(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (s - 1);
    (x + half) >> s
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    // a >= 0, b > 0
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

impl Ball {
    pub fn zero(prec: u32) -> Ball {
        Ball { mid: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    pub fn one(prec: u32) -> Ball {
        Ball::from_int(&BigInt::one(), prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Ball {
        Ball { mid: n << prec, rad: BigInt::zero(), prec }
    }

    pub fn from_i64(n: i64, prec: u32) -> Ball {
        Ball::from_int(&BigInt::from(n), prec)
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Ball {
        let num = x.numer() << prec;
        let den = x.denom();
        let (q, r) = num.div_mod_floor(den);
        if r.is_zero() {
            Ball { mid: q, rad: BigInt::zero(), prec }
        } else {
            Ball { mid: q, rad: BigInt::one(), prec }
        }
    }

    /// Builds from raw parts: value `mid / 2^prec`, radius `rad / 2^prec`.
    pub fn from_raw(mid: BigInt, rad: BigInt, prec: u32) -> Ball {
        assert!(!rad.is_negative());
        Ball { mid, rad, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_raw(&self) -> &BigInt {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Changes the precision, rounding outward when bits are dropped.
    pub fn with_prec(&self, prec: u32) -> Ball {
        if prec >= self.prec {
            let s = prec - self.prec;
            Ball { mid: &self.mid << s, rad: &self.rad << s, prec }
        } else {
            let s = self.prec - prec;
            let mid = round_shr(&self.mid, s);
            let rad = ceil_shr(&self.rad, s) + 1;
            Ball { mid, rad, prec }
        }
    }

    fn check(&self, other: &Ball) {
        assert_eq!(self.prec, other.prec, "ball precision mismatch");
    }

    pub fn add(&self, o: &Ball) -> Ball {
        self.check(o);
        Ball { mid: &self.mid + &o.mid, rad: &self.rad + &o.rad, prec: self.prec }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.check(o);
        Ball { mid: &self.mid - &o.mid, rad: &self.rad + &o.rad, prec: self.prec }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: -&self.mid, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        self.check(o);
        let p = self.prec;
        let prod = &self.mid * &o.mid;
        let mid = round_shr(&prod, p);
        let exact_prod = self.rad.is_zero() && o.rad.is_zero();
        let mut err = BigInt::zero();
        if !exact_prod {
            err = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        }
        let rounding = if (&mid << p) == prod { 0 } else { 1 };
        let rad = ceil_shr(&err, p) + rounding;
        Ball { mid, rad, prec: p }
    }

    pub fn square(&self) -> Ball {
        self.mul(self)
    }

    pub fn mul_int(&self, k: &BigInt) -> Ball {
        Ball { mid: &self.mid * k, rad: &self.rad * k.abs(), prec: self.prec }
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul_int(&BigInt::from(k))
    }

    pub fn div_int(&self, k: &BigInt) -> Ball {
        assert!(!k.is_zero(), "division by zero");
        let ka = k.abs();
        let (q, r) = self.mid.div_mod_floor(k);
        let rad = ceil_div(&self.rad, &ka) + if r.is_zero() { 0 } else { 1 };
        Ball { mid: q, rad, prec: self.prec }
    }

    pub fn div_i64(&self, k: i64) -> Ball {
        self.div_int(&BigInt::from(k))
    }

    pub fn mul_rational(&self, x: &BigRational) -> Ball {
        self.mul_int(x.numer()).div_int(x.denom())
    }

    /// Multiplication by `2^e` (exact).
    pub fn mul_pow2(&self, e: i64) -> Ball {
        if e >= 0 {
            Ball { mid: &self.mid << e as u32, rad: &self.rad << e as u32, prec: self.prec }
        } else {
            let s = (-e) as u32;
            let mid = round_shr(&self.mid, s);
            let exact = (&mid << s) == self.mid;
            let rad = ceil_shr(&self.rad, s) + if exact { 0 } else { 1 };
            Ball { mid, rad, prec: self.prec }
        }
    }

    /// True if the ball contains zero.
    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    /// Upper bound on `|x|` in ulps.
    pub fn abs_upper_raw(&self) -> BigInt {
        self.mid.abs() + &self.rad
    }

    /// Lower bound on `|x|` in ulps (zero if the ball straddles zero).
    pub fn abs_lower_raw(&self) -> BigInt {
        let d = self.mid.abs() - &self.rad;
        if d.is_negative() {
            BigInt::zero()
        } else {
            d
        }
    }

    pub fn inv(&self) -> Ball {
        Ball::one(self.prec).div(self)
    }

    pub fn div(&self, o: &Ball) -> Ball {
        self.check(o);
        let p = self.prec;
        let bm = o.mid.abs();
        assert!(bm > o.rad, "division by a ball containing zero");
        let num = &self.mid << p;
        let (q, r) = num.div_mod_floor(&o.mid);
        let rounding = if r.is_zero() { 0 } else { 1 };
        let mut rad = BigInt::from(rounding);
        if !(self.rad.is_zero() && o.rad.is_zero()) {
            // |x/y - a/b| <= (ar*|b| + |a|*br) / (|b| (|b| - br)), scaled to ulps
            let numer = (&self.rad * &bm + self.mid.abs() * &o.rad) << p;
            let denom = &bm * (&bm - &o.rad);
            rad += ceil_div(&numer, &denom);
        }
        Ball { mid: q, rad, prec: p }
    }

    pub fn sqrt(&self) -> Ball {
        let p = self.prec;
        assert!(!self.mid.is_negative() && self.mid > self.rad, "sqrt of a nonpositive ball");
        let mid = (&self.mid << p).sqrt();
        let mut rad = BigInt::one();
        if !self.rad.is_zero() {
            let low = ((&self.mid - &self.rad) << p).sqrt();
            if low.is_zero() {
                panic!("sqrt radius too large");
            }
            rad += ceil_div(&(&self.rad << p), &(low * 2u32));
        }
        Ball { mid, rad: rad + 1, prec: p }
    }

    pub fn pow_u(&self, mut e: u64) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Adds `2^log2_bound` (as an absolute error) to the radius.
    pub fn add_error_log2(&self, log2_bound: f64) -> Ball {
        let mut b = self.clone();
        let e = log2_bound + self.prec as f64;
        if e < -1.0 {
            b.rad += 1;
        } else {
            b.rad += BigInt::one() << (e.ceil() as u64 + 1);
        }
        b
    }

    pub fn add_error_raw(&self, ulps: &BigInt) -> Ball {
        let mut b = self.clone();
        b.rad += ulps.abs();
        b
    }

    /// True if the two balls intersect.
    pub fn overlaps(&self, o: &Ball) -> bool {
        self.check(o);
        (&self.mid - &o.mid).abs() <= &self.rad + &o.rad
    }

    /// Midpoint as f64 (saturating; sizing and display only).
    pub fn to_f64(&self) -> f64 {
        let s = if self.mid.is_negative() { -1.0 } else { 1.0 };
        if self.mid.is_zero() {
            return 0.0;
        }
        s * (log2_bigint(&self.mid.abs()) - self.prec as f64).exp2()
    }

    /// log2 of the upper bound on |x|; -inf when the ball is exactly zero.
    pub fn log2_abs_upper(&self) -> f64 {
        log2_bigint(&self.abs_upper_raw()) - self.prec as f64
    }

    pub fn log2_rad(&self) -> f64 {
        log2_bigint(&self.rad) - self.prec as f64
    }

    pub fn log10_abs_mid(&self) -> f64 {
        if self.mid.is_zero() {
            return f64::NEG_INFINITY;
        }
        (log2_bigint(&self.mid.abs()) - self.prec as f64) * std::f64::consts::LOG10_2
    }

    /// Midpoint in scientific notation with `digits` significant digits.
    pub fn mid_sci(&self, digits: usize) -> String {
        sci_string(&self.mid, self.prec, digits, false)
    }

    /// Radius in scientific notation, rounded up.
    pub fn rad_sci(&self, digits: usize) -> String {
        sci_string(&self.rad, self.prec, digits, true)
    }

    /// Floor of the midpoint value.
    pub fn floor_mid(&self) -> BigInt {
        self.mid.div_floor(&(BigInt::one() << self.prec))
    }

    /// Exact rational enclosure endpoints.
    pub fn lower_rational(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, BigInt::one() << self.prec)
    }

    pub fn upper_rational(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, BigInt::one() << self.prec)
    }

    /// Certified comparison: `Some(true)` if the whole ball lies strictly below `x`.
    pub fn lt_rational(&self, x: &BigRational) -> Option<bool> {
        if self.upper_rational() < *x {
            Some(true)
        } else if self.lower_rational() >= *x {
            Some(false)
        } else {
            None
        }
    }

    pub fn mid_rational(&self) -> BigRational {
        BigRational::new(self.mid.clone(), BigInt::one() << self.prec)
    }
}

pub fn log2_bigint(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let x = x.abs();
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top: BigInt = &x >> shift;
    top.to_f64().unwrap().log2() + shift as f64
}

fn sci_string(raw: &BigInt, prec: u32, digits: usize, round_up: bool) -> String {
    let digits = digits.max(1);
    if raw.is_zero() {
        return "0".to_string();
    }
    let neg = raw.is_negative();
    let a = raw.abs();
    let mut e10 = ((log2_bigint(&a) - prec as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let ten = BigInt::from(10u32);
    let den0 = BigInt::one() << prec;
    for _ in 0..4 {
        let k = digits as i64 - 1 - e10;
        let (num, den) = if k >= 0 {
            (&a * ten.pow(k as u32), den0.clone())
        } else {
            (a.clone(), &den0 * ten.pow((-k) as u32))
        };
        let (q, r) = num.div_rem(&den);
        let q = if round_up {
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        } else if (&r << 1u32) >= den {
            q + 1
        } else {
            q
        };
        let lo = ten.pow(digits as u32 - 1);
        let hi = ten.pow(digits as u32);
        if q < lo {
            e10 -= 1;
            continue;
        }
        if q >= hi {
            e10 += 1;
            continue;
        }
        let s = q.to_string();
        let (head, tail) = s.split_at(1);
        let sign = if neg { "-" } else { "" };
        return if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        };
    }
    unreachable!("scientific formatting failed to converge")
}

// ---------------------------------------------------------------------------
// Constants and elementary functions.

static PI_CACHE: Lazy<Mutex<HashMap<u32, Ball>>> = Lazy::new(|| Mutex::new(HashMap::new()));
static LN2_CACHE: Lazy<Mutex<HashMap<u32, Ball>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// `Σ_k (±1)^k / ((2k+1) q^{2k+1})` in fixed point at `p` bits, returning (value, error in ulps).
fn arctan_like_inv(q: u64, p: u32, alternating: bool) -> (BigInt, BigInt) {
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let mut power = (BigInt::one() << p) / &q; // floor(2^p / q^{2k+1})
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    let mut err = BigInt::zero();
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if alternating && k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        err += 2;
        power = &power / &q2;
        k += 1;
    }
    // truncation tail is below one ulp once power has reached zero
    err += 1;
    (sum, err)
}

pub fn pi(prec: u32) -> Ball {
    if let Some(b) = PI_CACHE.lock().unwrap().get(&prec) {
        return b.clone();
    }
    let pp = prec + GUARD;
    let (a5, e5) = arctan_like_inv(5, pp, true);
    let (a239, e239) = arctan_like_inv(239, pp, true);
    let mid = a5 * 16 - a239 * 4;
    let rad = e5 * 16 + e239 * 4;
    let b = Ball::from_raw(mid, rad, pp).with_prec(prec);
    PI_CACHE.lock().unwrap().insert(prec, b.clone());
    b
}

pub fn ln2(prec: u32) -> Ball {
    if let Some(b) = LN2_CACHE.lock().unwrap().get(&prec) {
        return b.clone();
    }
    let pp = prec + GUARD;
    let (s, e) = arctan_like_inv(3, pp, false);
    let b = Ball::from_raw(s * 2, e * 2, pp).with_prec(prec);
    LN2_CACHE.lock().unwrap().insert(prec, b.clone());
    b
}

/// Natural logarithm of a positive ball.
pub fn log(x: &Ball) -> Ball {
    let p = x.prec;
    assert!(x.mid > x.rad, "log of a nonpositive ball");
    let pp = p + GUARD;
    // x = y * 2^e with y in [1, 2)
    let e = x.mid.bits() as i64 - 1 - p as i64;
    let y_raw: BigInt = if e >= 0 {
        (&x.mid << GUARD) >> (e as u32)
    } else {
        (&x.mid << GUARD) << ((-e) as u32)
    };
    let one = BigInt::one() << pp;
    // u = (y - 1) / (y + 1) in [0, 1/3)
    let u = ((&y_raw - &one) << pp) / (&y_raw + &one);
    let u2 = (&u * &u) >> pp;
    let mut power = u.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    let mut err = BigInt::from(8);
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * k + 1);
        power = (&power * &u2) >> pp;
        err += 3;
        k += 1;
    }
    let series = Ball::from_raw(sum * 2, err * 2 + 2, pp);
    let l2 = ln2(pp);
    let total = l2.mul_i64(e).add(&series).with_prec(p);
    // input radius: |log(x) - log(m)| <= r / (m - r)
    if x.rad.is_zero() {
        total
    } else {
        let extra = ceil_div(&(&x.rad << p), &(&x.mid - &x.rad));
        total.add_error_raw(&extra)
    }
}

/// Exponential of a ball with |x| below about 2^20.
pub fn exp(x: &Ball) -> Ball {
    let p = x.prec;
    let xf = x.to_f64();
    assert!(xf.abs() < 1.0e6, "exp argument out of supported range");
    let s: u32 = 12;
    let pp = p + GUARD + s + (xf.abs().max(1.0).log2().ceil() as u32) * 2 + 8;
    let m = Ball::from_raw(x.mid.clone() << (pp - p), BigInt::zero(), pp);
    let l2 = ln2(pp);
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let y = m.sub(&l2.mul_i64(k)).mul_pow2(-(s as i64));
    // Taylor series for |y| < 2^-12
    let mut term = Ball::one(pp);
    let mut sum = Ball::one(pp);
    let mut j: i64 = 1;
    loop {
        term = term.mul(&y).div_i64(j);
        sum = sum.add(&term);
        if term.abs_upper_raw().bits() < 2 {
            break;
        }
        j += 1;
    }
    // tail after the last term is bounded by twice that term
    sum = sum.add_error_raw(&(term.abs_upper_raw() * 2 + 1));
    for _ in 0..s {
        sum = sum.square();
    }
    let res = sum.mul_pow2(k).with_prec(p);
    if x.rad.is_zero() {
        res
    } else {
        // exp(m ± r) within exp(m) * (1 ± 2r) for r <= 1/2
        let r = Ball::from_raw(x.rad.clone(), BigInt::zero(), p);
        assert!(r.to_f64() <= 0.5, "exp input radius too large");
        let bound = res.abs_upper_raw() * &x.rad * 2;
        res.add_error_raw(&ceil_shr(&bound, p))
    }
}

/// (cos x, sin x) for |x| <= 8.
pub fn cos_sin(x: &Ball) -> (Ball, Ball) {
    let p = x.prec;
    assert!(x.to_f64().abs() <= 8.0, "cos_sin argument must be reduced");
    let pp = p + GUARD + 16;
    let y = Ball::from_raw(x.mid.clone() << (pp - p), BigInt::zero(), pp);
    let y2 = y.square();
    let mut c = Ball::one(pp);
    let mut s = y.clone();
    let mut tc = Ball::one(pp);
    let mut ts = y.clone();
    let mut j: i64 = 1;
    loop {
        tc = tc.mul(&y2).div_i64((2 * j - 1) * (2 * j)).neg();
        ts = ts.mul(&y2).div_i64((2 * j) * (2 * j + 1)).neg();
        c = c.add(&tc);
        s = s.add(&ts);
        if tc.abs_upper_raw().bits() < 2 && ts.abs_upper_raw().bits() < 2 && j > 4 {
            break;
        }
        j += 1;
    }
    // alternating series with decreasing terms: tail below the last term
    c = c.add_error_raw(&(tc.abs_upper_raw() + 1));
    s = s.add_error_raw(&(ts.abs_upper_raw() + 1));
    let (mut c, mut s) = (c.with_prec(p), s.with_prec(p));
    if !x.rad.is_zero() {
        c = c.add_error_raw(&x.rad);
        s = s.add_error_raw(&x.rad);
    }
    (c, s)
}

/// `e^{2πi k / m}` as a complex ball.
pub fn root_of_unity(k: i64, m: u64, prec: u32) -> CBall {
    let m_i = m as i64;
    let mut k = k.rem_euclid(m_i);
    // reduce to an angle in (-π, π]
    if 2 * k > m_i {
        k -= m_i;
    }
    if k == 0 {
        return CBall::from_real(Ball::one(prec));
    }
    if 2 * k == m_i {
        return CBall::from_real(Ball::one(prec).neg());
    }
    if 4 * k == m_i {
        return CBall::new(Ball::zero(prec), Ball::one(prec));
    }
    if 4 * k == -m_i {
        return CBall::new(Ball::zero(prec), Ball::one(prec).neg());
    }
    let pp = prec + 16;
    let angle = pi(pp).mul_i64(2 * k).div_i64(m_i);
    let (c, s) = cos_sin(&angle);
    CBall::new(c.with_prec(prec), s.with_prec(prec))
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> CBall {
        assert_eq!(re.prec, im.prec);
        CBall { re, im }
    }

    pub fn zero(prec: u32) -> CBall {
        CBall::new(Ball::zero(prec), Ball::zero(prec))
    }

    pub fn one(prec: u32) -> CBall {
        CBall::from_real(Ball::one(prec))
    }

    pub fn from_real(re: Ball) -> CBall {
        let p = re.prec;
        CBall { re, im: Ball::zero(p) }
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> CBall {
        CBall::from_real(Ball::from_rational(x, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec
    }

    pub fn with_prec(&self, prec: u32) -> CBall {
        CBall::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> CBall {
        CBall::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> CBall {
        CBall::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        CBall::new(re, im)
    }

    pub fn mul_real(&self, x: &Ball) -> CBall {
        CBall::new(self.re.mul(x), self.im.mul(x))
    }

    pub fn mul_int(&self, k: &BigInt) -> CBall {
        CBall::new(self.re.mul_int(k), self.im.mul_int(k))
    }

    pub fn mul_i64(&self, k: i64) -> CBall {
        self.mul_int(&BigInt::from(k))
    }

    pub fn div_int(&self, k: &BigInt) -> CBall {
        CBall::new(self.re.div_int(k), self.im.div_int(k))
    }

    pub fn mul_rational(&self, x: &BigRational) -> CBall {
        CBall::new(self.re.mul_rational(x), self.im.mul_rational(x))
    }

    pub fn mul_pow2(&self, e: i64) -> CBall {
        CBall::new(self.re.mul_pow2(e), self.im.mul_pow2(e))
    }

    /// `1 / self`, requiring |self| bounded away from zero.
    pub fn inv(&self) -> CBall {
        let n = self.re.square().add(&self.im.square());
        let c = self.conj();
        CBall::new(c.re.div(&n), c.im.div(&n))
    }

    pub fn div(&self, o: &CBall) -> CBall {
        self.mul(&o.inv())
    }

    pub fn pow_u(&self, mut e: u64) -> CBall {
        let mut base = self.clone();
        let mut acc = CBall::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn add_error_log2(&self, log2_bound: f64) -> CBall {
        CBall::new(self.re.add_error_log2(log2_bound), self.im.add_error_log2(log2_bound))
    }

    /// Rectangles intersect.
    pub fn overlaps(&self, o: &CBall) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    /// Upper bound on the Euclidean radius of the enclosure.
    pub fn radius_upper_log2(&self) -> f64 {
        let a = self.re.log2_rad();
        let b = self.im.log2_rad();
        a.max(b) + 0.5
    }

    /// log2 of an upper bound on |z|.
    pub fn log2_abs_upper(&self) -> f64 {
        let a = self.re.log2_abs_upper();
        let b = self.im.log2_abs_upper();
        a.max(b) + 0.5
    }

    /// log2 of a lower bound on |z| (or -inf).
    pub fn log2_abs_lower(&self) -> f64 {
        let a = log2_bigint(&self.re.abs_lower_raw());
        let b = log2_bigint(&self.im.abs_lower_raw());
        a.max(b) - self.prec() as f64
    }

    pub fn log10_abs_mid(&self) -> f64 {
        let a = self.re.to_f64();
        let b = self.im.to_f64();
        if a == 0.0 && b == 0.0 {
            let la = self.re.log10_abs_mid();
            let lb = self.im.log10_abs_mid();
            return la.max(lb);
        }
        let la = self.re.log10_abs_mid();
        let lb = self.im.log10_abs_mid();
        let m = la.max(lb);
        if m.is_infinite() {
            return m;
        }
        m + 0.5 * (10f64.powf(2.0 * (la - m)) + 10f64.powf(2.0 * (lb - m))).log10()
    }

    /// Contains zero in both coordinates.
    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }
}
