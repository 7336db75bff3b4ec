//! Exact integer linear algebra: rational RREF, saturated integer kernels,
//! integral LLL and small-rank enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Reduced row echelon form over `Q`. Returns the reduced nonzero rows and pivot columns.
pub fn rref(rows: &[Vec<BigRational>], ncols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][col];
        for x in m[r].iter_mut().skip(col) {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Rank over `Q`.
pub fn rank(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    let q: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().cloned().map(BigRational::from_integer).collect()).collect();
    rref(&q, ncols).1.len()
}

/// A basis of the full integer kernel `{x ∈ Z^L : A x = 0}`, as rows.
pub fn integer_kernel(a: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let q: Vec<Vec<BigRational>> =
        a.iter().map(|r| r.iter().cloned().map(BigRational::from_integer).collect()).collect();
    let (red, pivots) = rref(&q, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let f = free.len();
    if f == 0 {
        return Vec::new();
    }
    // y ∈ Z^f (free coordinates); pivot coordinate x_p = -Σ R[p][f] y_f must be integral
    let mut basis: Vec<Vec<BigInt>> = (0..f)
        .map(|i| {
            let mut v = vec![BigInt::zero(); f];
            v[i] = BigInt::one();
            v
        })
        .collect();
    for row in &red {
        let coeffs: Vec<&BigRational> = free.iter().map(|&c| &row[c]).collect();
        let d = coeffs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        if d.is_one() {
            continue;
        }
        let c: Vec<BigInt> = coeffs.iter().map(|x| (*x * BigRational::from_integer(d.clone())).to_integer()).collect();
        impose_congruence(&mut basis, &c, &d);
        lll_reduce(&mut basis, 99, 100);
    }
    basis
        .into_iter()
        .map(|y| {
            let mut x = vec![BigInt::zero(); ncols];
            for (k, &fc) in free.iter().enumerate() {
                x[fc] = y[k].clone();
            }
            for (row, &pc) in red.iter().zip(&pivots) {
                let mut s = BigRational::zero();
                for (k, &fc) in free.iter().enumerate() {
                    if !row[fc].is_zero() && !y[k].is_zero() {
                        s -= &row[fc] * BigRational::from_integer(y[k].clone());
                    }
                }
                debug_assert!(s.is_integer());
                x[pc] = s.to_integer();
            }
            x
        })
        .collect()
}

/// Replaces the lattice spanned by `basis` with its sublattice `{y : c·y ≡ 0 (mod d)}`.
fn impose_congruence(basis: &mut [Vec<BigInt>], c: &[BigInt], d: &BigInt) {
    let dot = |b: &Vec<BigInt>| b.iter().zip(c).fold(BigInt::zero(), |acc, (x, y)| acc + x * y).mod_floor(d);
    let mut g: Vec<BigInt> = basis.iter().map(dot).collect();
    let Some(p) = g.iter().position(|x| !x.is_zero()) else { return };
    for i in p + 1..basis.len() {
        if g[i].is_zero() {
            continue;
        }
        let e = g[p].extended_gcd(&g[i]);
        let (s, t, dd) = (e.x, e.y, e.gcd);
        let (gi, gp) = (&g[i] / &dd, &g[p] / &dd);
        let bp = basis[p].clone();
        let bi = basis[i].clone();
        basis[p] = bp.iter().zip(&bi).map(|(x, y)| &s * x + &t * y).collect();
        basis[i] = bp.iter().zip(&bi).map(|(x, y)| &gi * x - &gp * y).collect();
        g[p] = dd;
        g[i] = BigInt::zero();
    }
    let m = d / g[p].gcd(d);
    for x in basis[p].iter_mut() {
        *x *= &m;
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Rounds `a / b` to the nearest integer (`b > 0`).
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// Exact integral LLL (de Weger's all-integer variant) with parameter `δ = num/den`.
/// Linearly dependent inputs are not supported; `basis` must be independent.
pub fn lll_reduce(basis: &mut Vec<Vec<BigInt>>, num: i64, den: i64) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let (num, den) = (BigInt::from(num), BigInt::from(den));
    // d[0] = 1, d[i+1] = Gram determinant of the first i+1 vectors
    let mut d = vec![BigInt::one(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut u = dot(&basis[i], &basis[j]);
            for l in 0..j {
                u = (&d[l + 1] * &u - &lam[i][l] * &lam[j][l]) / &d[l];
            }
            if j < i {
                lam[i][j] = u;
            } else {
                assert!(!u.is_zero(), "lll_reduce: dependent basis");
                d[i + 1] = u;
            }
        }
    }
    let size_reduce = |basis: &mut Vec<Vec<BigInt>>, lam: &mut Vec<Vec<BigInt>>, d: &[BigInt], k: usize, l: usize| {
        let two: BigInt = &lam[k][l] * 2;
        if two.abs() > d[l + 1] {
            let q = round_div(&lam[k][l], &d[l + 1]);
            let bl = basis[l].clone();
            for (x, y) in basis[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] -= &q * &d[l + 1];
            for i in 0..l {
                let v = &q * &lam[l][i];
                lam[k][i] -= v;
            }
        }
    };
    let mut k = 1;
    while k < n {
        size_reduce(basis, &mut lam, &d, k, k - 1);
        // Lovász: δ d_{k-1}... in integral form
        let lhs = &den * (&d[k + 1] * &d[k - 1]) + &den * (&lam[k][k - 1] * &lam[k][k - 1]);
        let rhs = &num * (&d[k] * &d[k]);
        if lhs < rhs {
            basis.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let b = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
            for i in k + 1..n {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k + 1];
            }
            d[k] = b;
            if k > 1 {
                k -= 1;
            }
        } else {
            for l in (0..k - 1).rev() {
                size_reduce(basis, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
}

/// Squared Euclidean norm.
pub fn norm2(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

/// All nonzero lattice vectors (up to sign) with squared norm at most `bound2`,
/// for a basis of small rank. Returns `None` if more than `limit` vectors qualify.
pub fn enumerate_short(basis: &[Vec<BigInt>], bound2: &BigInt, limit: usize) -> Option<Vec<Vec<BigInt>>> {
    let n = basis.len();
    if n == 0 {
        return Some(Vec::new());
    }
    // exact rational Gram-Schmidt, then f64 with a safety margin; every candidate is rechecked exactly
    let mut bstar2 = vec![BigRational::zero(); n];
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for i in 0..n {
        let bi: Vec<BigRational> = basis[i].iter().cloned().map(BigRational::from_integer).collect();
        let mut s = bi.clone();
        for j in 0..i {
            let m = bi.iter().zip(&star[j]).fold(BigRational::zero(), |a, (x, y)| a + x * y) / &bstar2[j];
            for (x, y) in s.iter_mut().zip(&star[j]) {
                *x -= &m * y;
            }
            mu[i][j] = m;
        }
        bstar2[i] = s.iter().fold(BigRational::zero(), |a, x| a + x * x);
        star.push(s);
    }
    let f = |q: &BigRational| q.to_f64().unwrap_or(f64::INFINITY);
    let b2: Vec<f64> = bstar2.iter().map(f).collect();
    let muf: Vec<Vec<f64>> = mu.iter().map(|r| r.iter().map(f).collect()).collect();
    let r2 = f(&BigRational::from_integer(bound2.clone())) * (1.0 + 1e-9) + 1e-9;
    let mut out = Vec::new();
    let mut coeffs = vec![0i64; n];
    let ok = enum_rec(n - 1, &b2, &muf, r2, 0.0, &mut coeffs, &mut |c: &[i64]| {
        if c.iter().all(|&x| x == 0) {
            return true;
        }
        // sign canonical: last nonzero coefficient positive
        if *c.iter().rev().find(|&&x| x != 0).unwrap() < 0 {
            return true;
        }
        let mut v = vec![BigInt::zero(); basis[0].len()];
        for (ci, b) in c.iter().zip(basis) {
            if *ci != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += y * *ci;
                }
            }
        }
        if norm2(&v) <= *bound2 {
            out.push(v);
        }
        out.len() <= limit
    });
    if ok {
        Some(out)
    } else {
        None
    }
}

fn enum_rec(
    level: usize,
    b2: &[f64],
    mu: &[Vec<f64>],
    r2: f64,
    partial: f64,
    coeffs: &mut [i64],
    visit: &mut dyn FnMut(&[i64]) -> bool,
) -> bool {
    let n = coeffs.len();
    let center: f64 = -(level + 1..n).map(|i| coeffs[i] as f64 * mu[i][level]).sum::<f64>();
    let room = r2 - partial;
    if room < 0.0 {
        return true;
    }
    let w = (room / b2[level]).sqrt();
    let lo = (center - w).ceil() as i64;
    let hi = (center + w).floor() as i64;
    for x in lo..=hi {
        coeffs[level] = x;
        let y = x as f64 - center;
        let p = partial + y * y * b2[level];
        if p > r2 {
            continue;
        }
        let cont = if level == 0 { visit(coeffs) } else { enum_rec(level - 1, b2, mu, r2, p, coeffs, visit) };
        if !cont {
            coeffs[level] = 0;
            return false;
        }
    }
    coeffs[level] = 0;
    true
}

/// `A x` for an integer matrix.
pub fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|r| dot(r, x)).collect()
}

/// Ceiling of the square root of a nonnegative integer.
pub fn ceil_sqrt(x: &BigInt) -> BigInt {
    let s = x.sqrt();
    if &(&s * &s) == x {
        s
    } else {
        s + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_single_equation() {
        let a = vec![zi(&[1, 2])];
        let k = integer_kernel(&a, 2);
        assert_eq!(k.len(), 1);
        assert!(k[0] == zi(&[-2, 1]) || k[0] == zi(&[2, -1]));
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y + 6z = 0 together with 3x - 3z = 0: kernel spanned by (1,-2,1)
        let a = vec![zi(&[2, 4, 6]), zi(&[3, 0, -3])];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(k[0] == zi(&[1, -2, 1]) || k[0] == zi(&[-1, 2, -1]));
        // 5x + 3y = 0 mod structure: (3,-5)
        let k = integer_kernel(&[zi(&[5, 3, 0])], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&[zi(&[5, 3, 0])], v)[0].is_zero());
        }
        let det2 = {
            let g = |i: usize, j: usize| dot(&k[i], &k[j]);
            g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1)
        };
        // Gram determinant of the saturated lattice is 5^2 + 3^2
        assert_eq!(det2, BigInt::from(34));
    }

    #[test]
    fn lll_finds_short_vectors() {
        let mut b = vec![zi(&[1, 0, 0, 12345]), zi(&[0, 1, 0, 23456]), zi(&[0, 0, 1, 34567])];
        lll_reduce(&mut b, 99, 100);
        assert!(norm2(&b[0]) < BigInt::from(10_000));
        let mut b = vec![zi(&[201, 37]), zi(&[1648, 297])];
        let orig = b.clone();
        lll_reduce(&mut b, 99, 100);
        let mut best = None::<BigInt>;
        for x in -400i64..=400 {
            for y in -400i64..=400 {
                if (x, y) == (0, 0) {
                    continue;
                }
                let v: Vec<BigInt> = (0..2).map(|i| &orig[0][i] * x + &orig[1][i] * y).collect();
                let n = norm2(&v);
                if best.as_ref().map_or(true, |b| &n < b) {
                    best = Some(n);
                }
            }
        }
        assert_eq!(norm2(&b[0]), best.unwrap());
    }

    #[test]
    fn enumeration_finds_all() {
        let b = vec![zi(&[1, 0]), zi(&[0, 2])];
        let v = enumerate_short(&b, &BigInt::from(4), 100).unwrap();
        // (1,0), (0,2), (2,0)
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn sqrt_ceiling() {
        assert_eq!(ceil_sqrt(&BigInt::from(16)), BigInt::from(4));
        assert_eq!(ceil_sqrt(&BigInt::from(17)), BigInt::from(5));
    }
}
