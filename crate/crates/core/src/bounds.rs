//! Rates `ξ, α, β`, the dimension lower bound, the large-`a` parameter
//! schedule and a grid optimizer. Everything is evaluated in log space.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{format_rational, rat};
use crate::ball::{exp, log, Ball};
use crate::error::{Error, Result};
use crate::siegel::Parameters;

/// Default working precision (bits) for rate evaluation.
pub const RATE_PREC: u32 = 320;

fn b_rat(x: &BigRational, prec: u32) -> Ball {
    Ball::from_rational(x, prec)
}

fn b_int(x: u64, prec: u32) -> Ball {
    Ball::from_int(&BigInt::from(x), prec)
}

/// `e^l` in scientific notation, split as `10^e · e^{l - e log 10}` so huge rates stay in range.
fn exp_sci(l: &Ball, digits: usize) -> String {
    let ln10 = log(&b_int(10, l.prec()));
    let e = l.div(&ln10).floor_mid();
    let mant = exp(&l.sub(&ln10.mul_int(&e)));
    let s = mant.mid_sci(digits);
    let (m, k) = s.split_once('e').expect("scientific string has an exponent");
    let k: BigInt = k.parse::<BigInt>().expect("integral exponent") + e;
    format!("{m}e{k}")
}

/// `log ξ = (ω log 2 + 2ω² + ω² log(a+1) + Ω² log(r)/2) / (a/N - ω)`.
pub fn log_xi(p: &Parameters, prec: u32) -> Ball {
    let w = b_rat(&p.omega, prec);
    let bw = b_rat(&p.big_omega, prec);
    let w2 = w.square();
    let num = w
        .mul(&log(&b_int(2, prec)))
        .add(&w2.mul_i64(2))
        .add(&w2.mul(&log(&b_int(p.a + 1, prec))))
        .add(&bw.square().mul(&log(&b_rat(&p.r, prec))).mul_pow2(-1));
    num.div(&b_rat(&(p.a_over_n() - &p.omega), prec))
}

/// `log α = -Ω log r + κ (4 + log(2a+1)) + log ξ`.
pub fn log_alpha(p: &Parameters, prec: u32) -> Ball {
    let k = b_rat(&p.kappa, prec);
    let l = log(&b_int(2 * p.a + 1, prec)).add(&Ball::from_i64(4, prec));
    b_rat(&p.big_omega, prec)
        .mul(&log(&b_rat(&p.r, prec)))
        .neg()
        .add(&k.mul(&l))
        .add(&log_xi(p, prec))
}

/// `log β = κ (log 32 + 3 + log(2a+1)) + log ξ`.
pub fn log_beta(p: &Parameters, prec: u32) -> Ball {
    let k = b_rat(&p.kappa, prec);
    let l = log(&b_int(32, prec)).add(&Ball::from_i64(3, prec)).add(&log(&b_int(2 * p.a + 1, prec)));
    k.mul(&l).add(&log_xi(p, prec))
}

pub fn xi(p: &Parameters, prec: u32) -> Ball {
    exp(&log_xi(p, prec))
}

pub fn alpha(p: &Parameters, prec: u32) -> Ball {
    exp(&log_alpha(p, prec))
}

pub fn beta(p: &Parameters, prec: u32) -> Ball {
    exp(&log_beta(p, prec))
}

/// Rates and the dimension bound `(f/N)(τ + 1)` with `τ = -log α / log β`.
#[derive(Clone, Debug)]
pub struct RateReport {
    pub params: Parameters,
    pub log_xi: Ball,
    pub log_alpha: Ball,
    pub log_beta: Ball,
    pub tau: Ball,
    pub dim_bound: Ball,
    /// `[K_∞ : R]`: 1 when `N = 1`, 2 otherwise.
    pub infinity_degree_factor: u32,
    /// False when `α >= 1`, where the bound carries no information.
    pub informative: bool,
}

pub fn dim_bound(p: &Parameters, prec: u32) -> RateReport {
    let la = log_alpha(p, prec);
    let lb = log_beta(p, prec);
    let tau = la.neg().div(&lb);
    let factor = if p.modulus == 1 { 1 } else { 2 };
    let dim = tau.add(&Ball::one(prec)).mul_i64(factor as i64).div_i64(p.modulus as i64);
    let informative = la.lt_rational(&BigRational::zero()) == Some(true);
    RateReport { params: p.clone(), log_xi: log_xi(p, prec), log_alpha: la, log_beta: lb, tau, dim_bound: dim, infinity_degree_factor: factor, informative }
}

impl RateReport {
    pub fn to_json(&self) -> Value {
        let entry = |l: &Ball| json!({ "log": l.mid_sci(40), "value": exp_sci(l, 40) });
        json!({
            "params": self.params.to_json(),
            "xi": entry(&self.log_xi),
            "alpha": entry(&self.log_alpha),
            "beta": entry(&self.log_beta),
            "tau": self.tau.mid_sci(40),
            "dim_bound": self.dim_bound.mid_sci(40),
            "infinity_degree_factor": self.infinity_degree_factor,
            "informative": self.informative,
        })
    }
}

/// `⌊3.9 √(a log a / N)⌋` and the guard `3.6 √(a log a / N) < a/N`, certified by balls.
fn sqrt_a_log_a(a: u64, n: u64, prec: u32) -> Ball {
    let ab = b_int(a, prec);
    ab.mul(&log(&ab)).div_i64(n as i64).sqrt()
}

/// The large-`a` schedule: `r = 3.9, κ = 10.58, ω = 12, Ω = ⌊3.9√(a log a/N)⌋, h = 0.36a`.
pub fn large_a_schedule(a: u64, n: u64) -> Result<Parameters> {
    if a == 0 || a % 100 != 0 {
        return Err(Error::InvalidArgument(format!("a={a} must be a positive multiple of 100")));
    }
    let mut prec = 128;
    let big_omega = loop {
        let v = sqrt_a_log_a(a, n, prec).mul_rational(&rat(39, 10));
        let lo = v.lower_rational().floor().to_integer();
        let hi = v.upper_rational().floor().to_integer();
        if lo == hi {
            break lo;
        }
        prec *= 2;
        if prec > 1 << 14 {
            return Err(Error::Domain("cannot certify the floor defining Omega".into()));
        }
    };
    let guard = sqrt_a_log_a(a, n, 256).mul_rational(&rat(36, 10));
    if guard.lt_rational(&BigRational::new(a.into(), n.into())) != Some(true) {
        return Err(Error::GuardViolated(format!("3.6*sqrt(a log a/N) < a/N fails for a={a}, N={n}")));
    }
    let p = Parameters::new(
        a,
        n,
        rat(39, 10),
        rat(12, 1),
        BigRational::from_integer(big_omega),
        rat(529, 50),
        9 * a / 25,
    )
    .map_err(|e| Error::GuardViolated(format!("schedule violates the parameter constraints: {e}")))?;
    if !p.kernel_property_ok() {
        return Err(Error::GuardViolated("(h+1)(kappa-2r)N + omega > a fails".into()));
    }
    Ok(p)
}

/// Target dimension lower bound `0.42 N^{-3/2} √(s/log s)`, or `0.21 √(s/log s)` for `N = 1`.
pub fn theorem_constant(s: f64, n: u64) -> f64 {
    let c = if n == 1 { 0.21 } else { 0.42 / (n as f64).powf(1.5) };
    c * (s / s.ln()).sqrt()
}

/// One large-`a` comparison with its threshold.
#[derive(Clone, Debug)]
pub struct AsymptoticCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// True when the check wants `value <= threshold`.
    pub upper: bool,
}

impl AsymptoticCheck {
    pub fn pass(&self) -> bool {
        if self.upper {
            self.value <= self.threshold
        } else {
            self.value >= self.threshold
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "direction": if self.upper { "<=" } else { ">=" },
            "pass": self.pass(),
        })
    }
}

/// The asymptotic-constant comparisons for the schedule at `(a, N)`, 5% tolerance.
pub fn asymptotic_checks(a: u64, n: u64) -> Result<Vec<AsymptoticCheck>> {
    let p = large_a_schedule(a, n)?;
    let rep = dim_bound(&p, RATE_PREC);
    let la = (a as f64).ln();
    let lx = rep.log_xi.to_f64();
    let lb = rep.log_beta.to_f64();
    let lal = rep.log_alpha.to_f64();
    let nf = n as f64;
    let ah = (a + p.h) as f64;
    let one_minus = 1.0 - lal / lb;
    Ok(vec![
        AsymptoticCheck { name: "log_xi_over_log_a".into(), value: lx / la, threshold: 10.36 * 1.05, upper: true },
        AsymptoticCheck { name: "log_beta_over_log_a".into(), value: lb / la, threshold: 20.94 * 1.05, upper: true },
        AsymptoticCheck {
            name: "minus_log_alpha_scaled".into(),
            value: -lal / ((a as f64) * la).sqrt(),
            threshold: 5.3 / nf.sqrt() * 0.95,
            upper: false,
        },
        AsymptoticCheck {
            name: "one_minus_ratio_scaled".into(),
            value: one_minus * (nf * la / a as f64).sqrt(),
            threshold: 0.25 * 0.95,
            upper: false,
        },
        AsymptoticCheck {
            name: "final_chain".into(),
            value: rep.dim_bound.to_f64() / (ah / ah.ln()).sqrt(),
            threshold: 0.40 / nf.powf(1.5),
            upper: false,
        },
    ])
}

/// Finite grid for [`optimize`]; `Ω = ⌊m √(a log a / N)⌋` and `h = ⌊ρ a⌋`.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub r: Vec<BigRational>,
    pub kappa: Vec<BigRational>,
    pub omega: Vec<BigRational>,
    pub omega_multiplier: Vec<BigRational>,
    pub h_ratio: Vec<BigRational>,
}

impl GridSpec {
    /// A coarse grid around the large-`a` schedule.
    pub fn coarse() -> GridSpec {
        let v = |xs: &[(i64, i64)]| xs.iter().map(|&(p, q)| rat(p, q)).collect::<Vec<_>>();
        GridSpec {
            r: v(&[(3, 1), (35, 10), (39, 10), (45, 10)]),
            kappa: v(&[(9, 1), (10, 1), (529, 50), (11, 1)]),
            omega: v(&[(11, 1), (12, 1), (13, 1)]),
            omega_multiplier: v(&[(3, 1), (35, 10), (39, 10), (42, 10)]),
            h_ratio: v(&[(30, 100), (36, 100), (40, 100)]),
        }
    }
}

/// Best grid point together with the evaluated Pareto surface.
#[derive(Clone, Debug)]
pub struct OptimizeResult {
    pub best: RateReport,
    pub evaluated: usize,
    pub feasible: usize,
    /// Points not dominated in `(-log α, log β)` (larger `-log α`, smaller `log β`).
    pub pareto: Vec<RateReport>,
}

fn grid_point(a: u64, n: u64, r: &BigRational, k: &BigRational, w: &BigRational, m: &BigRational, hr: &BigRational) -> Option<Parameters> {
    let s = sqrt_a_log_a(a, n, 128).mul_rational(m);
    let lo = s.lower_rational().floor().to_integer();
    if lo != s.upper_rational().floor().to_integer() {
        return None;
    }
    let h = (hr * BigRational::from_integer(a.into())).floor().to_integer().to_u64()?;
    let p = Parameters::new(a, n, r.clone(), w.clone(), BigRational::from_integer(lo), k.clone(), h).ok()?;
    p.kernel_property_ok().then_some(p)
}

fn lex_key(p: &Parameters) -> (BigRational, BigRational, BigRational, BigRational, u64) {
    (p.r.clone(), p.kappa.clone(), p.omega.clone(), p.big_omega.clone(), p.h)
}

/// Maximizes the dimension bound over the grid; ties go to the lexicographically smallest `(r, κ, ω, Ω, h)`.
pub fn optimize(a: u64, n: u64, grid: &GridSpec) -> Result<OptimizeResult> {
    let mut points = Vec::new();
    for r in &grid.r {
        for k in &grid.kappa {
            for w in &grid.omega {
                for m in &grid.omega_multiplier {
                    for hr in &grid.h_ratio {
                        points.push((r, k, w, m, hr));
                    }
                }
            }
        }
    }
    let evaluated = points.len();
    let reports: Vec<RateReport> = points
        .par_iter()
        .filter_map(|&(r, k, w, m, hr)| grid_point(a, n, r, k, w, m, hr))
        .map(|p| dim_bound(&p, 192))
        .collect();
    if reports.is_empty() {
        return Err(Error::EmptyFeasibleSet(format!("no feasible grid point for a={a}, N={n}")));
    }
    let cmp = |x: &RateReport, y: &RateReport| {
        let (dx, dy) = (x.dim_bound.mid_rational(), y.dim_bound.mid_rational());
        dy.cmp(&dx).then_with(|| lex_key(&x.params).cmp(&lex_key(&y.params)))
    };
    let best = reports.iter().min_by(|x, y| cmp(x, y)).unwrap().clone();
    let mut pareto: Vec<RateReport> = Vec::new();
    for x in &reports {
        let (xa, xb) = (x.log_alpha.mid_rational(), x.log_beta.mid_rational());
        let dominated = reports.iter().any(|y| {
            let (ya, yb) = (y.log_alpha.mid_rational(), y.log_beta.mid_rational());
            ya <= xa && yb <= xb && (ya < xa || yb < xb)
        });
        if !dominated {
            pareto.push(x.clone());
        }
    }
    pareto.sort_by(|x, y| x.log_alpha.mid_rational().cmp(&y.log_alpha.mid_rational()).then_with(|| lex_key(&x.params).cmp(&lex_key(&y.params))));
    pareto.dedup_by(|x, y| x.params == y.params);
    Ok(OptimizeResult { best, evaluated, feasible: reports.len(), pareto })
}

impl OptimizeResult {
    pub fn pareto_csv(&self) -> String {
        let mut s = String::from("r,kappa,omega,Omega,h,minus_log_alpha,log_beta,dim_bound\n");
        for p in &self.pareto {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                format_rational(&p.params.r),
                format_rational(&p.params.kappa),
                format_rational(&p.params.omega),
                format_rational(&p.params.big_omega),
                p.params.h,
                p.log_alpha.neg().mid_sci(20),
                p.log_beta.mid_sci(20),
                p.dim_bound.mid_sci(20),
            ));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "best": self.best.to_json(),
            "evaluated": self.evaluated,
            "feasible": self.feasible,
            "pareto_size": self.pareto.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Parameters {
        Parameters::new(18, 3, rat(2, 1), rat(5, 1), rat(5, 1), rat(9, 2), 9).unwrap()
    }

    #[test]
    fn exp_sci_handles_huge_logs() {
        let l = log(&b_int(2500, 200));
        assert!(exp_sci(&l, 6).starts_with("2.5"), "{}", exp_sci(&l, 6));
        assert!(exp_sci(&l, 6).ends_with("e3"));
        // e^{10^7} = 10^{4342944.819...}
        let big = b_int(10_000_000, 200);
        assert!(exp_sci(&big, 6).ends_with("e4342944"));
        assert!(exp_sci(&big.neg(), 6).ends_with("e-4342945"));
    }

    #[test]
    fn rates_ordered() {
        let p = c3();
        let lx = log_xi(&p, 200);
        assert!(lx.lt_rational(&BigRational::zero()) == Some(false));
        let (la, lb) = (log_alpha(&p, 200), log_beta(&p, 200));
        assert!(la.sub(&lb).lt_rational(&BigRational::zero()) == Some(true));
        let rep = dim_bound(&p, 200);
        assert!(!rep.informative);
        assert!(rep.tau.lt_rational(&BigRational::zero()) == Some(true));
    }

    #[test]
    fn c3_xi_direct() {
        // (5 log 2 + 50 + 25 log 19 + 12.5 log 2) / 1
        let v = 17.5 * 2f64.ln() + 50.0 + 25.0 * 19f64.ln();
        assert!((log_xi(&c3(), 200).to_f64() - v).abs() < 1e-12);
    }

    #[test]
    fn schedule_examples() {
        let p = large_a_schedule(1_000_000, 1).unwrap();
        let expect = (3.9 * (1e6f64 * 1e6f64.ln()).sqrt()).floor();
        assert_eq!(p.big_omega, BigRational::from_integer(BigInt::from(expect as i64)));
        assert_eq!(p.h, 360_000);
        assert!(large_a_schedule(150, 1).is_err());
        // 3.6 sqrt(100 log 100) = 77.3 < 100, so a = 100 passes for N = 1 but not for N = 5
        assert_eq!(large_a_schedule(100, 1).unwrap().big_omega, rat(83, 1));
        assert!(matches!(large_a_schedule(100, 5), Err(Error::GuardViolated(_))));
    }

    #[test]
    fn theorem_constant_values() {
        let v = theorem_constant(1e6, 3);
        assert!((v - 0.42 / 3f64.powf(1.5) * (1e6 / 1e6f64.ln()).sqrt()).abs() < 1e-12);
        assert!(theorem_constant(10.0, 1) < theorem_constant(11.0, 1));
        assert!((theorem_constant(100.0, 1) / (100.0 / 100f64.ln()).sqrt() - 0.21).abs() < 1e-15);
    }

    #[test]
    fn precision_doubling_is_stable() {
        let p = c3();
        let a = dim_bound(&p, 256).dim_bound;
        let b = dim_bound(&p, 512).dim_bound;
        assert_eq!(a.mid_sci(30), b.mid_sci(30));
    }
}
