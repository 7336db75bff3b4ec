use dirichlet_forms::arith::rat;
use dirichlet_forms::siegel::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn c3() -> Parameters {
    Parameters::new(18, 3, rat(2, 1), rat(5, 1), rat(5, 1), rat(9, 2), 9).unwrap()
}

#[test]
fn c3_system_shape() {
    let sys = build_system(&c3(), 6).unwrap();
    assert_eq!(sys.unknowns, 54);
    assert_eq!(sys.eq_rows.len(), 29);
    assert!(sys.ineq_rows.is_empty());
}

#[test]
fn c3_construction_n6() {
    check_construction(6);
}

#[test]
fn c3_construction_n12() {
    check_construction(12);
}

fn check_construction(n: u64) {
    let t = std::time::Instant::now();
    let f = construct_fn(&c3(), n).unwrap();
    let wn = 5 * n as usize;
    // Taylor vanishing along both paths
    for k in 1..wn {
        assert!(f.frak_a[k - 1].is_zero());
        assert!(f.frak_a_formula(k as u64).is_zero());
    }
    // equivalent vanishing of P_{n,k,1}(1)
    assert!(f.p_k1_at_one(wn - 1).unwrap().iter().all(|v| v.is_zero()));
    assert!(BigRational::from_integer(f.max_abs.clone()) <= f.x_upper);
    assert!(f.bn <= 18 && f.bn >= 1);
    eprintln!(
        "n={}: rank {} max|c| = {} log X = {:.1} bn = {} A_30 = {} ({:?})",
        n,
        f.kernel_rank,
        f.max_abs,
        f.log_x,
        f.bn,
        f.frak_a[wn - 1],
        t.elapsed()
    );
    assert_eq!(f.frak_a[wn - 1], f.frak_a_formula(wn as u64));
    let back = FnRepresentation::from_json(&f.to_json()).unwrap();
    assert_eq!(back.c, f.c);
    assert!(f.c.iter().flatten().any(|v| *v != BigInt::zero()));
}
