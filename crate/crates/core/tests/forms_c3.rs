use dirichlet_forms::arith::rat;
use dirichlet_forms::ball::{root_of_unity, Ball, CBall};
use dirichlet_forms::characters::parse_selector;
use dirichlet_forms::coeffs::ThetaTable;
use dirichlet_forms::forms::*;
use dirichlet_forms::poly::Laurent;
use dirichlet_forms::polylog::polylog_root_of_unity;
use dirichlet_forms::siegel::{construct_fn, FnRepresentation, Parameters};
use dirichlet_forms::{Int, Rat};
use num_traits::{One, Zero};
use std::sync::OnceLock;

const P: u32 = 400;

fn c3() -> Parameters {
    Parameters::new(18, 3, rat(2, 1), rat(5, 1), rat(5, 1), rat(9, 2), 9).unwrap()
}

fn c3_n6() -> &'static FnRepresentation {
    static F: OnceLock<FnRepresentation> = OnceLock::new();
    F.get_or_init(|| construct_fn(&c3(), 6).unwrap())
}

/// A small trivial-character configuration, so that the `χ(0)` column is live.
fn trivial_cfg() -> &'static FnRepresentation {
    static F: OnceLock<FnRepresentation> = OnceLock::new();
    F.get_or_init(|| {
        let p = Parameters::new(8, 1, rat(2, 1), rat(5, 1), rat(5, 1), rat(9, 2), 2).unwrap();
        construct_fn(&p, 6).unwrap()
    })
}

#[test]
fn lambda_table_is_integral_and_sparse() {
    let f = c3_n6();
    let chi = parse_selector("3:1").unwrap();
    let t = lambda_table(f, &chi).unwrap();
    assert_eq!(t.rows.len(), 20);
    let cut = (f.bn + f.params.h) as usize;
    for r in &t.rows {
        assert!(r.lambda[cut..].iter().all(|v| v.is_zero()), "(p,k)=({},{})", r.p, r.k);
        // i ≢ ε columns still exist; χ(0) = 0 so λ_0^{<0>} multiplies nothing
        assert_eq!(r.lambda0.len(), 3);
    }
    assert!(t.rows.iter().any(|r| r.lambda.iter().any(|v| !v.is_zero())));
}

#[test]
fn q_families_structure() {
    let f = c3_n6();
    let par = &f.params;
    let kn = Parameters::times_n(&par.kappa, f.n) as u64;
    let lo = 2 * par.rn(f.n) as u64 + 2;
    let r1n = Parameters::times_n(&(&par.r + Rat::one()), f.n);
    for p in [0u64, 4, 9] {
        let fams = q_families(f, p, kn).unwrap();
        for fam in &fams {
            let k = fam.k as i64;
            for i in 1..=fam.width() {
                assert!(fam.q[i].shift(k - 1).exponents_divisible_by(3));
            }
            let q0 = fam.q0_scaled().unwrap();
            let q0b = fam.q0bar_scaled().unwrap();
            for poly in [&q0, &q0b] {
                assert!(poly.low().map_or(true, |l| l >= 0));
                assert!(poly.high().map_or(true, |h| h <= r1n));
                let parts = q_mod_decompose(poly, 3);
                let mut back = Laurent::zero();
                for (m, part) in parts.iter().enumerate() {
                    assert!(part.exponents_divisible_by(3));
                    back = &back + &part.shift(m as i64);
                }
                assert_eq!(&back, poly);
            }
            if fam.k >= lo {
                assert!(fam.q[1].eval_one().is_zero());
            }
        }
    }
}

#[test]
fn cleared_zero_matches_theta0_oracle() {
    let f = c3_n6();
    let par = &f.params;
    let width = (par.a + par.h) as usize;
    let r1n = Parameters::times_n(&(&par.r + Rat::one()), f.n) as u64;
    let table = ThetaTable::new(par.a + par.h, r1n, par.modulus).unwrap();
    let cols = (r1n / par.modulus + 1) as usize;
    for p in [0u64, 3] {
        let fams = q_families(f, p, 16).unwrap();
        // γ_{i,j}: coefficient of z^{Nj} in Q_{i,(p,1)}
        let gamma: Vec<Vec<Int>> = (1..=width)
            .map(|i| (0..cols).map(|j| fams[0].q[i].coeff((par.modulus as usize * j) as i64)).collect())
            .collect();
        for fam in &fams {
            let k = fam.k;
            for t in 0..(r1n + k) {
                let mut s = Rat::zero();
                let mut sb = Rat::zero();
                for ell in 0..width {
                    for j in 0..cols {
                        let g = Rat::from_integer(gamma[ell][j].clone());
                        s += table.theta0(k, j as u64, ell as u64, t).unwrap() * &g;
                        sb += table.theta0bar(k, j as u64, ell as u64, t).unwrap() * &g;
                    }
                }
                assert_eq!(Rat::from_integer(fam.cleared0.coeff(t as i64)), s, "p={p} k={k} t={t}");
                assert_eq!(Rat::from_integer(fam.cleared0bar.coeff(t as i64)), sb, "bar p={p} k={k} t={t}");
            }
        }
    }
}

#[test]
fn v_polynomial_identity_on_circle() {
    let f = c3_n6();
    let par = &f.params;
    let rn = par.rn(f.n);
    for p in [0u64, 2] {
        let (vinf, vzero) = v_polynomials(f, p).unwrap();
        assert!(vinf.high().unwrap() <= Parameters::times_n(&(&par.r + Rat::one()), f.n) - 1);
        assert!(vzero.high().unwrap() <= 2 * rn);
        let fam = q_initial(f, p).unwrap();
        for (a, q) in [(1i64, 2u64), (3, 8)] {
            let z = root_of_unity(a, q, P);
            let s_inf = s_series(f, p, 1, SeriesKind::Infinity, &z, P).unwrap();
            let s_zero = s_series(f, p, 1, SeriesKind::Zero, &z, P).unwrap();
            let mut r_inf = eval_laurent(&vinf, &z);
            let mut r_zero = eval_laurent(&vzero, &z);
            for i in 1..=fam.width() {
                if fam.q[i].is_zero() {
                    continue;
                }
                let qz = eval_laurent(&to_rational(&fam.q[i]), &z);
                let li_inv = polylog_root_of_unity(i as u32, -a, q, P).unwrap();
                let li = polylog_root_of_unity(i as u32, a, q, P).unwrap();
                r_inf = r_inf.add(&qz.mul(&li_inv));
                let t = qz.mul(&li);
                r_zero = if i % 2 == 0 { r_zero.add(&t) } else { r_zero.sub(&t) };
            }
            assert!(s_inf.overlaps(&r_inf), "S_inf p={p} at e({a}/{q})");
            assert!(s_zero.overlaps(&r_zero), "S_0 p={p} at e({a}/{q})");
        }
    }
}

#[test]
fn derivative_identity_sampled() {
    let f = c3_n6();
    let z = root_of_unity(3, 8, P);
    for (p, k) in [(0u64, 26u64), (5, 27)] {
        let fams = q_families(f, p, k).unwrap();
        let fam = fams.last().unwrap();
        let s_inf = s_series(f, p, k, SeriesKind::Infinity, &z, P).unwrap();
        let s_zero = s_series(f, p, k, SeriesKind::Zero, &z, P).unwrap();
        let mut r_inf = eval_laurent(&to_rational(&fam.q0().unwrap()), &z);
        let mut r_zero = eval_laurent(&to_rational(&fam.q0bar().unwrap()), &z);
        for i in 1..=fam.width() {
            if fam.q[i].is_zero() {
                continue;
            }
            let qz = eval_laurent(&to_rational(&fam.q[i]), &z);
            r_inf = r_inf.add(&qz.mul(&polylog_root_of_unity(i as u32, -3, 8, P).unwrap()));
            let t = qz.mul(&polylog_root_of_unity(i as u32, 3, 8, P).unwrap());
            r_zero = if i % 2 == 0 { r_zero.add(&t) } else { r_zero.sub(&t) };
        }
        assert!(s_inf.overlaps(&r_inf), "(p,k)=({p},{k})");
        assert!(s_zero.overlaps(&r_zero), "(p,k)=({p},{k})");
    }
}

#[test]
fn two_paths_agree_sampled() {
    let f = c3_n6();
    let chi = parse_selector("3:1").unwrap();
    let t = lambda_table(f, &chi).unwrap();
    let lv = LValueVector::new(&chi, 27, P).unwrap();
    for (p, k) in [(0u64, 26u64), (9, 27)] {
        let a = lambda_value_via_zeta(&t, &lv, p, k).unwrap();
        let b = lambda_value_direct(f, &chi, p, k, P).unwrap();
        assert!(a.overlaps(&b), "(p,k)=({p},{k}): {} vs {}", a.re.mid_sci(20), b.re.mid_sci(20));
        assert!(a.radius_upper_log2() < -200.0);
    }
}

#[test]
fn two_paths_agree_with_trivial_character() {
    let f = trivial_cfg();
    let chi = parse_selector("1:0").unwrap();
    let t = lambda_table(f, &chi).unwrap();
    let lv = LValueVector::new(&chi, (f.params.a + f.params.h) as usize, P).unwrap();
    assert!(t.rows.iter().any(|r| !r.lambda0[0].is_zero()));
    for &(p, k) in pk_window(&f.params, f.n).iter() {
        let a = lambda_value_via_zeta(&t, &lv, p, k).unwrap();
        let b = lambda_value_direct(f, &chi, p, k, P).unwrap();
        assert!(a.overlaps(&b), "(p,k)=({p},{k})");
    }
}

#[test]
fn direct_rejects_outside_window() {
    let f = c3_n6();
    let chi = parse_selector("3:1").unwrap();
    assert!(lambda_value_direct(f, &chi, 0, 28, 64).is_err());
    assert!(matches!(
        lambda_value_direct(f, &chi, 0, 40, 64),
        Err(dirichlet_forms::Error::TailNotDominated(_))
    ));
    let zero = CBall::from_real(Ball::zero(64));
    assert!(zero.contains_zero());
}
