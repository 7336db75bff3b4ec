//! The linear system whose small integer solutions define `F_n`, and a
//! constructive solver for it (exact kernel, lattice reduction, exact checks).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{binomial, denominator_lcm, format_rational, parse_rational};
use crate::ball::{exp, log, Ball};
use crate::bounds::log_xi;
use crate::coeffs::{p_family_by_recurrence, ThetaTable};
use crate::error::{Error, Result};
use crate::linalg::{ceil_sqrt, enumerate_short, integer_kernel, lll_reduce, mat_vec, norm2};

const WORK_PREC: u32 = 256;
/// Fractional bits kept in the rational row-norm bounds `H_k`.
const NORM_FRAC_BITS: u32 = 32;
/// Kernel rank at or below which candidates come from exhaustive enumeration.
pub const ENUMERATION_RANK: usize = 4;
/// Scale applied to the kernel coordinates when inequality rows are adjoined.
const INEQ_SCALE_BITS: u32 = 64;

/// The tuple `(a, N, r, ω, Ω, κ, h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Parameters {
    pub a: u64,
    pub modulus: u64,
    pub r: BigRational,
    pub omega: BigRational,
    pub big_omega: BigRational,
    pub kappa: BigRational,
    pub h: u64,
}

impl Parameters {
    pub fn new(
        a: u64,
        modulus: u64,
        r: BigRational,
        omega: BigRational,
        big_omega: BigRational,
        kappa: BigRational,
        h: u64,
    ) -> Result<Parameters> {
        let p = Parameters { a, modulus, r, omega, big_omega, kappa, h };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("invalid parameters: {m}")));
        if self.modulus == 0 || self.modulus % 2 == 0 {
            return bad("N must be an odd positive integer");
        }
        if self.a < 3 * self.modulus {
            return bad("need a >= 3N");
        }
        let two = BigRational::from_integer(2.into());
        if self.r < two {
            return bad("need r >= 2");
        }
        if !(&self.r * &two < self.kappa) {
            return bad("need 2r < kappa");
        }
        if !(self.kappa < self.omega) {
            return bad("need kappa < omega");
        }
        if !(self.omega <= self.big_omega) {
            return bad("need omega <= Omega");
        }
        if !(self.big_omega < self.a_over_n()) {
            return bad("need Omega < a/N");
        }
        if self.h > self.a {
            return bad("need 0 <= h <= a");
        }
        Ok(())
    }

    pub fn a_over_n(&self) -> BigRational {
        BigRational::new(self.a.into(), self.modulus.into())
    }

    /// `(h+1)(κ-2r)N + ω > a`.
    pub fn kernel_property_ok(&self) -> bool {
        let lhs = BigRational::from_integer((self.h + 1).into())
            * (&self.kappa - &self.r * BigRational::from_integer(2.into()))
            * BigRational::from_integer(self.modulus.into())
            + &self.omega;
        lhs > BigRational::from_integer(self.a.into())
    }

    /// Smallest positive `n` with `n/N, rn/N, ωn, Ωn, κn` all integral.
    pub fn n_period(&self) -> u64 {
        let nn = BigRational::from_integer(self.modulus.into());
        let xs = [BigRational::one() / &nn, &self.r / &nn, self.omega.clone(), self.big_omega.clone(), self.kappa.clone()];
        denominator_lcm(xs.iter()).to_u64().expect("period fits in u64")
    }

    pub fn is_admissible(&self, n: u64) -> bool {
        n > 0 && n % self.n_period() == 0
    }

    /// `x·n` for an admissible `n`, as an integer.
    pub fn times_n(x: &BigRational, n: u64) -> i64 {
        let v = x * BigRational::from_integer(n.into());
        assert!(v.is_integer(), "non-integral parameter multiple");
        v.to_integer().to_i64().expect("parameter multiple fits in i64")
    }

    pub fn rn(&self, n: u64) -> i64 {
        Self::times_n(&self.r, n)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a,
            "N": self.modulus,
            "r": format_rational(&self.r),
            "omega": format_rational(&self.omega),
            "Omega": format_rational(&self.big_omega),
            "kappa": format_rational(&self.kappa),
            "h": self.h,
        })
    }

    pub fn from_json(v: &Value) -> Result<Parameters> {
        let int = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("parameter '{k}' must be a nonnegative integer")))
        };
        let ratf = |k: &str| {
            v.get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("parameter '{k}' must be a rational string")))
                .and_then(parse_rational)
        };
        Parameters::new(int("a")?, int("N")?, ratf("r")?, ratf("omega")?, ratf("Omega")?, ratf("kappa")?, int("h")?)
    }
}

/// The first `count` admissible values of `n`.
pub fn admissible_n(params: &Parameters, count: usize) -> Vec<u64> {
    let p = params.n_period();
    (1..=count as u64).map(|m| m * p).collect()
}

/// Integer equality and inequality rows plus the bound `X`.
#[derive(Clone, Debug)]
pub struct SiegelSystem {
    pub unknowns: usize,
    pub eq_rows: Vec<Vec<BigInt>>,
    /// `H_k` for the equality rows.
    pub eq_norms: Vec<BigRational>,
    pub ineq_rows: Vec<Vec<BigInt>>,
    pub ineq_norms: Vec<BigRational>,
    /// `G_k` for the inequality rows.
    pub ineq_weights: Vec<BigRational>,
    /// Rational upper estimate of `X`.
    pub x_upper: BigRational,
    pub log_x: f64,
}

/// Rational upper bound on the Euclidean norm of an integer row.
pub fn row_norm_upper(row: &[BigInt]) -> BigRational {
    let s = norm2(row) << (2 * NORM_FRAC_BITS);
    BigRational::new(ceil_sqrt(&s), BigInt::one() << NORM_FRAC_BITS)
}

fn log_rational(x: &BigRational) -> Ball {
    log(&Ball::from_rational(x, WORK_PREC))
}

impl SiegelSystem {
    /// Assembles a system from explicit rows; `X` follows the pigeonhole formula.
    pub fn from_rows(
        unknowns: usize,
        eq_rows: Vec<Vec<BigInt>>,
        ineq_rows: Vec<Vec<BigInt>>,
        ineq_weights: Vec<BigRational>,
    ) -> Result<SiegelSystem> {
        let k0 = eq_rows.len();
        if k0 >= unknowns {
            return Err(Error::InfeasibleShape(format!(
                "{k0} equations for {unknowns} unknowns leave no guaranteed nonzero solution"
            )));
        }
        if ineq_rows.len() != ineq_weights.len() {
            return Err(Error::InvalidArgument("one weight per inequality row".into()));
        }
        let eq_norms: Vec<BigRational> = eq_rows.iter().map(|r| row_norm_upper(r)).collect();
        let ineq_norms: Vec<BigRational> = ineq_rows.iter().map(|r| row_norm_upper(r)).collect();
        let mut acc = Ball::zero(WORK_PREC);
        for h in &eq_norms {
            if !h.is_zero() {
                acc = acc.add(&log_rational(h));
            }
        }
        for g in &ineq_weights {
            acc = acc.add(&log_rational(g));
        }
        let logx = log_rational(&BigRational::from_integer(unknowns.into()))
            .mul_pow2(-1)
            .add(&acc.div_i64((unknowns - k0) as i64));
        let x = exp(&logx);
        Ok(SiegelSystem {
            unknowns,
            eq_rows,
            eq_norms,
            ineq_rows,
            ineq_norms,
            ineq_weights,
            x_upper: x.upper_rational(),
            log_x: logx.to_f64(),
        })
    }

    /// Right-hand side `H_k X / G_k` of inequality row `idx`.
    pub fn ineq_bound(&self, idx: usize) -> BigRational {
        &self.ineq_norms[idx] * &self.x_upper / &self.ineq_weights[idx]
    }

    /// Exact check of every equality and inequality row.
    pub fn satisfied_by(&self, x: &[BigInt]) -> bool {
        if x.iter().all(|v| v.is_zero()) {
            return false;
        }
        if mat_vec(&self.eq_rows, x).iter().any(|v| !v.is_zero()) {
            return false;
        }
        mat_vec(&self.ineq_rows, x)
            .iter()
            .enumerate()
            .all(|(i, v)| BigRational::from_integer(v.abs()) <= self.ineq_bound(i))
    }
}

/// Column index of the unknown `c_{i,j}` (`i` from 1).
pub fn unknown_index(i: usize, j: usize, cols: usize) -> usize {
    (i - 1) * cols + j
}

/// The system for `F_n`: `P_{n,k,1}(1) = 0` for `k < ωn`, and `|𝔄_{n,k}|` bounds for `ωn <= k < Ωn`.
pub fn build_system(params: &Parameters, n: u64) -> Result<SiegelSystem> {
    if !params.is_admissible(n) {
        return Err(Error::InvalidArgument(format!("n={n} is not admissible (period {})", params.n_period())));
    }
    let a = params.a as usize;
    let nn = params.modulus;
    let cols = (n / nn + 1) as usize;
    let unknowns = a * cols;
    let wn = Parameters::times_n(&params.omega, n);
    let bign = Parameters::times_n(&params.big_omega, n);
    let k0 = (wn - 1) as usize;
    if k0 >= unknowns {
        return Err(Error::InfeasibleShape(format!(
            "omega*n - 1 = {k0} equations for L = {unknowns} unknowns"
        )));
    }
    let table = ThetaTable::new(params.a, n, nn)?;
    let eq_rows: Vec<Vec<BigInt>> = (1..=k0 as u64)
        .into_par_iter()
        .map(|k| -> Result<Vec<BigInt>> {
            let clear = table.theta_clearing(k)?;
            let mut row = vec![BigInt::zero(); unknowns];
            for j in 0..cols {
                for ell in 0..a {
                    let v = &clear * table.theta(k, 1, j as u64, ell as u64)?;
                    if !v.is_integer() {
                        return Err(Error::Domain(format!("non-integral equality entry at k={k}, j={j}, l={ell}")));
                    }
                    row[unknown_index(1 + ell, j, cols)] = v.to_integer();
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut ineq_rows = Vec::new();
    let mut weights = Vec::new();
    for k in wn..bign {
        ineq_rows.push(frak_a_row(params.a, nn, cols, k as u64));
        weights.push(pow_rational(&params.r, (bign - k) as u64));
    }
    SiegelSystem::from_rows(unknowns, eq_rows, ineq_rows, weights)
}

fn pow_rational(x: &BigRational, e: u64) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Coefficients of `𝔄_{n,k}` in the unknowns: `C(k-1,k-i)(-Nj)^{k-i}`.
pub fn frak_a_row(a: u64, modulus: u64, cols: usize, k: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); a as usize * cols];
    for i in 1..=a.min(k) {
        let b = binomial(k as i64 - 1, (k - i) as i64);
        for j in 0..cols {
            let base = -BigInt::from(modulus * j as u64);
            row[unknown_index(i as usize, j, cols)] = &b * base.pow((k - i) as u32);
        }
    }
    row
}

/// Result of [`solve_small`].
#[derive(Clone, Debug)]
pub struct Solution {
    pub x: Vec<BigInt>,
    pub kernel_rank: usize,
    /// True when the candidate set was exhaustive for the reduced lattice norm.
    pub enumerated: bool,
}

fn max_abs(x: &[BigInt]) -> BigInt {
    x.iter().map(|v| v.abs()).max().unwrap_or_default()
}

/// A nonzero integer vector satisfying every row of `sys` exactly.
pub fn solve_small(sys: &SiegelSystem) -> Result<Solution> {
    let l = sys.unknowns;
    let kernel = if sys.eq_rows.iter().all(|r| r.iter().all(|v| v.is_zero())) {
        (0..l)
            .map(|i| {
                let mut v = vec![BigInt::zero(); l];
                v[i] = BigInt::one();
                v
            })
            .collect()
    } else {
        integer_kernel(&sys.eq_rows, l)
    };
    let rank = kernel.len();
    if rank == 0 {
        return Err(Error::NoSolutionWithinBound("the equality block has a trivial kernel".into()));
    }
    // adjoin weighted inequality rows: coordinates (S x, W_k row_k·x), W_k ≈ S G_k / (H_k X)
    let scale = BigInt::one() << INEQ_SCALE_BITS;
    let weights: Vec<BigInt> = (0..sys.ineq_rows.len())
        .map(|i| {
            let w = BigRational::from_integer(scale.clone()) * &sys.ineq_weights[i] / (&sys.ineq_norms[i] * &sys.x_upper);
            w.round().to_integer()
        })
        .collect();
    let active: Vec<usize> = (0..weights.len()).filter(|&i| !weights[i].is_zero()).collect();
    let embed = |x: &Vec<BigInt>| -> Vec<BigInt> {
        if active.is_empty() {
            return x.clone();
        }
        let mut v: Vec<BigInt> = x.iter().map(|c| c * &scale).collect();
        for &i in &active {
            let dot = sys.ineq_rows[i].iter().zip(x).fold(BigInt::zero(), |acc, (p, q)| acc + p * q);
            v.push(dot * &weights[i]);
        }
        v
    };
    let mut basis: Vec<Vec<BigInt>> = kernel.iter().map(embed).collect();
    lll_reduce(&mut basis, 99, 100);
    let unembed = |v: &Vec<BigInt>| -> Vec<BigInt> {
        if active.is_empty() {
            v.clone()
        } else {
            v[..l].iter().map(|c| c / &scale).collect()
        }
    };
    let mut candidates: Vec<Vec<BigInt>> = basis.iter().map(unembed).collect();
    let mut enumerated = false;
    if rank <= ENUMERATION_RANK {
        let bound = basis.iter().map(|b| norm2(b)).min().unwrap();
        if let Some(all) = enumerate_short(&basis, &bound, 100_000) {
            candidates.extend(all.iter().map(unembed));
            enumerated = true;
        }
    }
    let best = candidates
        .into_iter()
        .filter(|x| sys.satisfied_by(x))
        .min_by(|p, q| max_abs(p).cmp(&max_abs(q)).then_with(|| norm2(p).cmp(&norm2(q))).then_with(|| p.cmp(q)));
    match best {
        Some(mut x) => {
            // sign normalization: first nonzero entry positive
            if x.iter().find(|v| !v.is_zero()).map_or(false, |v| v.is_negative()) {
                x.iter_mut().for_each(|v| *v = -&*v);
            }
            Ok(Solution { x, kernel_rank: rank, enumerated })
        }
        None => {
            let b = basis.first().map(unembed).unwrap_or_default();
            Err(Error::NoSolutionWithinBound(format!(
                "no reduced candidate satisfies the inequality block; best max|c| = {}",
                max_abs(&b)
            )))
        }
    }
}

/// Integer matrix `c_{n,i,j}` with the data derived from it.
#[derive(Clone, Debug)]
pub struct FnRepresentation {
    pub params: Parameters,
    pub n: u64,
    /// `c[i-1][j]`.
    pub c: Vec<Vec<BigInt>>,
    /// `𝔄_{n,k}` for `1 <= k <= frak_a.len()` (index `k-1`).
    pub frak_a: Vec<BigInt>,
    pub bn: u64,
    pub max_abs: BigInt,
    pub l2_squared: BigInt,
    pub log_x: f64,
    pub x_upper: BigRational,
    pub kernel_rank: usize,
    pub enumerated: bool,
}

impl FnRepresentation {
    /// Wraps a coefficient matrix, recomputing every derived quantity.
    pub fn from_coefficients(params: Parameters, n: u64, c: Vec<Vec<BigInt>>, log_x: f64, x_upper: BigRational) -> Result<Self> {
        let cols = (n / params.modulus + 1) as usize;
        if c.len() != params.a as usize || c.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("coefficient matrix has the wrong shape".into()));
        }
        let flat: Vec<BigInt> = c.iter().flatten().cloned().collect();
        if flat.iter().all(|v| v.is_zero()) {
            return Err(Error::InvalidArgument("coefficient matrix is zero".into()));
        }
        let bn = c.iter().rposition(|r| r.iter().any(|v| !v.is_zero())).unwrap() as u64 + 1;
        let kmax = Parameters::times_n(&params.big_omega, n).max(1) as usize;
        let frak_a = frak_a_by_series(&c, params.modulus, kmax);
        Ok(FnRepresentation {
            max_abs: max_abs(&flat),
            l2_squared: norm2(&flat),
            params,
            n,
            c,
            frak_a,
            bn,
            log_x,
            x_upper,
            kernel_rank: 0,
            enumerated: false,
        })
    }

    pub fn cols(&self) -> usize {
        (self.n / self.params.modulus + 1) as usize
    }

    pub fn flat(&self) -> Vec<BigInt> {
        self.c.iter().flatten().cloned().collect()
    }

    /// `𝔄_{n,k}` from the closed binomial formula.
    pub fn frak_a_formula(&self, k: u64) -> BigInt {
        let row = frak_a_row(self.params.a, self.params.modulus, self.cols(), k);
        row.iter().zip(self.flat()).fold(BigInt::zero(), |acc, (p, q)| acc + p * q)
    }

    /// `P_{n,k,1}(1)` for `1 <= k <= k_max` (index `k-1`).
    pub fn p_k1_at_one(&self, k_max: usize) -> Result<Vec<BigInt>> {
        let fam = p_family_by_recurrence(&self.c, self.n, self.params.modulus, k_max)?;
        Ok((1..=k_max).map(|k| fam[k][1].eval_one()).collect())
    }

    /// `log max|c| / (n log ξ)`; the envelope predicts a value at most `1 + o(1)`.
    pub fn xi_exponent_ratio(&self) -> f64 {
        let lm = crate::arith::ln_bigint(&self.max_abs);
        lm / (self.n as f64 * log_xi(&self.params, 128).to_f64())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": 1,
            "params": self.params.to_json(),
            "n": self.n,
            "c": self.c.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "bn": self.bn,
            "norms": {
                "max_abs": self.max_abs.to_string(),
                "l2_squared": self.l2_squared.to_string(),
                "log_max_abs": crate::arith::ln_bigint(&self.max_abs),
                "xi_exponent_ratio": self.xi_exponent_ratio(),
            },
            "X": {
                "log": self.log_x,
                "upper": format_rational(&self.x_upper),
            },
            "kernel_rank": self.kernel_rank,
            "enumerated": self.enumerated,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let params = Parameters::from_json(v.get("params").ok_or_else(|| Error::Parse("missing 'params'".into()))?)?;
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing 'n'".into()))?;
        let rows = v.get("c").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing 'c'".into()))?;
        let mut c = Vec::new();
        for r in rows {
            let r = r.as_array().ok_or_else(|| Error::Parse("'c' rows must be arrays".into()))?;
            let mut row = Vec::new();
            for e in r {
                let s = e.as_str().ok_or_else(|| Error::Parse("'c' entries must be strings".into()))?;
                row.push(s.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer '{s}'")))?);
            }
            c.push(row);
        }
        let x = v.get("X").ok_or_else(|| Error::Parse("missing 'X'".into()))?;
        let log_x = x.get("log").and_then(Value::as_f64).ok_or_else(|| Error::Parse("missing 'X.log'".into()))?;
        let x_upper = parse_rational(x.get("upper").and_then(Value::as_str).unwrap_or("0"))?;
        if !params.is_admissible(n) {
            return Err(Error::InvalidArgument(format!("n={n} is not admissible")));
        }
        let mut f = Self::from_coefficients(params, n, c, log_x, x_upper)?;
        f.kernel_rank = v.get("kernel_rank").and_then(Value::as_u64).unwrap_or(0) as usize;
        f.enumerated = v.get("enumerated").and_then(Value::as_bool).unwrap_or(false);
        Ok(f)
    }
}

/// Taylor coefficients of `Σ c_{i,j}/(t+Nj)^i` at `t = ∞`, by power-series
/// products in `u = 1/t` (independent of the binomial formula).
pub fn frak_a_by_series(c: &[Vec<BigInt>], modulus: u64, k_max: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); k_max];
    let cols = c.first().map_or(0, |r| r.len());
    for j in 0..cols {
        // geometric series of 1/(1 + Nj u)
        let nj = BigInt::from(modulus * j as u64);
        let mut g = vec![BigInt::zero(); k_max];
        let mut p = BigInt::one();
        for e in g.iter_mut() {
            *e = p.clone();
            p = -&p * &nj;
        }
        let mut power = vec![BigInt::zero(); k_max];
        if k_max > 0 {
            power[0] = BigInt::one();
        }
        for (i, row) in c.iter().enumerate() {
            let i = i + 1;
            power = series_mul(&power, &g);
            if row[j].is_zero() || i > k_max {
                continue;
            }
            // u^i (1 + Nj u)^{-i}: coefficient of u^k lands at index k-1
            for (e, coef) in power.iter().enumerate() {
                let k = e + i;
                if k > k_max {
                    break;
                }
                out[k - 1] += coef * &row[j];
            }
        }
    }
    out
}

fn series_mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let n = p.len();
    let mut out = vec![BigInt::zero(); n];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate().take(n - i) {
            out[i + j] += a * b;
        }
    }
    out
}

/// Builds the system, solves it and checks the vanishing of `𝔄_{n,k}`, `k < ωn`.
pub fn construct_fn(params: &Parameters, n: u64) -> Result<FnRepresentation> {
    let sys = build_system(params, n)?;
    let sol = solve_small(&sys)?;
    let cols = (n / params.modulus + 1) as usize;
    let c: Vec<Vec<BigInt>> = sol.x.chunks(cols).map(|r| r.to_vec()).collect();
    let mut f = FnRepresentation::from_coefficients(params.clone(), n, c, sys.log_x, sys.x_upper.clone())?;
    f.kernel_rank = sol.kernel_rank;
    f.enumerated = sol.enumerated;
    let wn = Parameters::times_n(&params.omega, n) as usize;
    if let Some(k) = (1..wn).find(|&k| !f.frak_a[k - 1].is_zero()) {
        return Err(Error::Domain(format!("constructed F_n has a nonzero Taylor coefficient at k={k}")));
    }
    Ok(f)
}

/// `gcd` of all entries; a primitive solution has content 1.
pub fn content(x: &[BigInt]) -> BigInt {
    x.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    pub(crate) fn c3() -> Parameters {
        Parameters::new(18, 3, rat(2, 1), rat(5, 1), rat(5, 1), rat(9, 2), 9).unwrap()
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(admissible_n(&c3(), 3), vec![6, 12, 18]);
        let p = Parameters::new(30, 1, rat(2, 1), rat(6, 1), rat(7, 1), rat(5, 1), 3).unwrap();
        assert_eq!(admissible_n(&p, 3), vec![1, 2, 3]);
        let p = Parameters::new(400, 1, rat(39, 10), rat(12, 1), rat(100, 1), rat(529, 50), 144).unwrap();
        assert_eq!(admissible_n(&p, 2), vec![50, 100]);
    }

    #[test]
    fn parameter_validation() {
        assert!(Parameters::new(18, 3, rat(2, 1), rat(5, 1), rat(5, 1), rat(9, 2), 9).is_ok());
        assert!(Parameters::new(18, 3, rat(2, 1), rat(5, 1), rat(6, 1), rat(9, 2), 9).is_err());
        assert!(Parameters::new(18, 2, rat(2, 1), rat(5, 1), rat(5, 1), rat(9, 2), 9).is_err());
        assert!(Parameters::new(18, 3, rat(3, 2), rat(5, 1), rat(5, 1), rat(9, 2), 9).is_err());
        assert!(c3().kernel_property_ok());
    }

    #[test]
    fn toy_system() {
        let sys = SiegelSystem::from_rows(2, vec![vec![1.into(), 2.into()]], vec![], vec![]).unwrap();
        let ten = rat(10, 1);
        assert!(&sys.x_upper * &sys.x_upper >= ten);
        assert!(&sys.x_upper * &sys.x_upper - ten < rat(1, 1_000_000));
        let s = solve_small(&sys).unwrap();
        assert_eq!(s.x, vec![BigInt::from(2), BigInt::from(-1)]);
        assert!(s.enumerated);
    }

    #[test]
    fn zero_equations_give_unit_vector() {
        let sys = SiegelSystem::from_rows(3, vec![vec![BigInt::zero(); 3]], vec![], vec![]).unwrap();
        let s = solve_small(&sys).unwrap();
        assert_eq!(norm2(&s.x), BigInt::one());
    }

    #[test]
    fn infeasible_shape() {
        let rows = vec![vec![BigInt::one(), BigInt::zero()], vec![BigInt::zero(), BigInt::one()]];
        assert!(matches!(SiegelSystem::from_rows(2, rows, vec![], vec![]), Err(Error::InfeasibleShape(_))));
    }

    #[test]
    fn series_matches_formula() {
        let c = vec![vec![BigInt::from(3), BigInt::from(-2), BigInt::from(7)], vec![BigInt::from(1), BigInt::from(5), BigInt::from(-4)]];
        let s = frak_a_by_series(&c, 3, 12);
        let flat: Vec<BigInt> = c.iter().flatten().cloned().collect();
        for k in 1..=12u64 {
            let row = frak_a_row(2, 3, 3, k);
            let f = row.iter().zip(&flat).fold(BigInt::zero(), |a, (p, q)| a + p * q);
            assert_eq!(s[k as usize - 1], f, "k={k}");
        }
    }
}
