//! Dirichlet characters with exact cyclotomic values, Gauss sums and the
//! Fourier coefficients `χ̂(ℓ)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::primes_upto;
use crate::cyclo::{euler_phi, CyclotomicNumber};
use crate::error::{Error, Result};

/// A Dirichlet character modulo `N`. Values are stored as exponents of `ζ_M`
/// with `M = lcm(N, exponent of (Z/N)^*)`; non-units map to `None`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u64,
    ambient: u64,
    index: usize,
    label: Vec<u64>,
    exps: Vec<Option<u64>>,
    values: Vec<CyclotomicNumber>,
    order: u64,
    conductor: u64,
    primitive: bool,
    parity_eps_chi: u8,
    epsilon: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterSummary {
    pub selector: String,
    pub modulus: u64,
    pub index: usize,
    pub exponents: Vec<u64>,
    pub order: u64,
    pub conductor: u64,
    pub primitive: bool,
    pub parity: &'static str,
    pub epsilon: u8,
    pub pipeline_supported: bool,
}

/// Generators of `(Z/N)^*` lifted through the CRT, with their orders.
fn crt_generators(n: u64) -> Vec<(u64, u64)> {
    let mut gens = Vec::new();
    for p in primes_upto(n) {
        if n % p != 0 {
            continue;
        }
        let mut q = 1;
        while n % (q * p) == 0 {
            q *= p;
        }
        let rest = n / q;
        let lift = |g: u64| -> u64 {
            // x ≡ g (mod q), x ≡ 1 (mod rest)
            (0..n).find(|&x| x % q == g % q && x % rest == 1 % rest).unwrap()
        };
        if p == 2 {
            if q == 4 {
                gens.push((lift(3), 2));
            } else if q >= 8 {
                gens.push((lift(q - 1), 2));
                gens.push((lift(5), q / 4));
            }
        } else {
            let phi = euler_phi(q);
            let g = (2..q)
                .find(|&g| multiplicative_order(g, q) == phi)
                .expect("primitive root exists for odd prime powers");
            gens.push((lift(g), phi));
        }
    }
    gens
}

fn multiplicative_order(g: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut x = g % n;
    let mut k = 1;
    while x != 1 {
        x = x * g % n;
        k += 1;
    }
    k
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Discrete-log table: residue -> exponent vector on the generators.
fn log_table(n: u64, gens: &[(u64, u64)]) -> Vec<Option<Vec<u64>>> {
    let mut table: Vec<Option<Vec<u64>>> = vec![None; n as usize];
    let mut idx = vec![0u64; gens.len()];
    loop {
        let mut x = 1 % n;
        for (k, &(g, _)) in gens.iter().enumerate() {
            for _ in 0..idx[k] {
                x = x * g % n;
            }
        }
        table[x as usize] = Some(idx.clone());
        // odometer over the exponent box
        let mut k = gens.len();
        loop {
            if k == 0 {
                return table;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < gens[k].1 {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// The `φ(N)` characters modulo `N`, ordered lexicographically by exponent vector.
pub fn enumerate_characters(n: u64) -> Vec<DirichletCharacter> {
    assert!(n >= 1, "modulus must be positive");
    let gens = crt_generators(n);
    let exponent = gens.iter().fold(1, |acc, &(_, o)| lcm(acc, o));
    let ambient = lcm(n, exponent);
    let logs = log_table(n, &gens);
    let mut labels: Vec<Vec<u64>> = vec![Vec::new()];
    for &(_, o) in &gens {
        labels = labels
            .into_iter()
            .flat_map(|l| {
                (0..o).map(move |a| {
                    let mut v = l.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(index, label)| build_character(n, ambient, index, label, &gens, &logs))
        .collect()
}

fn build_character(
    n: u64,
    ambient: u64,
    index: usize,
    label: Vec<u64>,
    gens: &[(u64, u64)],
    logs: &[Option<Vec<u64>>],
) -> DirichletCharacter {
    let exps: Vec<Option<u64>> = (0..n as usize)
        .map(|r| {
            logs[r].as_ref().map(|lv| {
                lv.iter()
                    .zip(label.iter())
                    .zip(gens.iter())
                    .map(|((&l, &a), &(_, o))| l * a * (ambient / o))
                    .sum::<u64>()
                    % ambient
            })
        })
        .collect();
    let values = exps
        .iter()
        .map(|e| match e {
            Some(e) => CyclotomicNumber::root(ambient, *e as i64),
            None => CyclotomicNumber::zero(ambient),
        })
        .collect();
    let order = label
        .iter()
        .zip(gens.iter())
        .fold(1, |acc, (&a, &(_, o))| lcm(acc, o / gcd(a, o)));
    let conductor = (1..=n)
        .filter(|f| n % f == 0)
        .find(|&f| {
            (0..n).all(|m| gcd(m, n) != 1 || m % f != 1 % f || exps[m as usize] == Some(0))
        })
        .unwrap();
    let minus_one = exps[((n - 1) % n) as usize].expect("-1 is a unit");
    let parity_eps_chi = if minus_one == 0 { 0 } else { 1 };
    let ch = DirichletCharacter {
        modulus: n,
        ambient,
        index,
        label,
        exps,
        values,
        order,
        conductor,
        primitive: conductor == n,
        parity_eps_chi,
        epsilon: 1 - parity_eps_chi,
    };
    ch.validate();
    ch
}

impl DirichletCharacter {
    /// Exhaustive residue checks of the defining properties.
    fn validate(&self) {
        let n = self.modulus;
        let m = self.ambient;
        assert_eq!(self.exps[(1 % n) as usize], Some(0), "χ(1) = 1");
        for a in 0..n {
            assert_eq!(self.exps[a as usize].is_none(), gcd(a, n) != 1, "zero iff non-unit");
            for b in 0..n {
                let ab = (a * b % n) as usize;
                let want = match (self.exps[a as usize], self.exps[b as usize]) {
                    (Some(x), Some(y)) => Some((x + y) % m),
                    _ => None,
                };
                assert_eq!(self.exps[ab], want, "multiplicativity");
            }
        }
        if self.parity_eps_chi == 1 {
            assert_eq!(self.exps[((n - 1) % n) as usize], Some(m / 2));
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order `M` of the ambient cyclotomic field.
    pub fn ambient_order(&self) -> u64 {
        self.ambient
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn label(&self) -> &[u64] {
        &self.label
    }

    pub fn selector(&self) -> String {
        format!("{}:{}", self.modulus, self.index)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn parity_eps_chi(&self) -> u8 {
        self.parity_eps_chi
    }

    /// The opposite parity `ε = 1 - ε_χ`.
    pub fn epsilon(&self) -> u8 {
        self.epsilon
    }

    pub fn is_principal(&self) -> bool {
        self.label.iter().all(|&a| a == 0)
    }

    /// Characters of even conductor are outside the linear-form pipeline.
    pub fn pipeline_supported(&self) -> bool {
        self.conductor % 2 == 1
    }

    /// `χ(m)` for any integer `m`.
    pub fn value(&self, m: i64) -> &CyclotomicNumber {
        &self.values[m.rem_euclid(self.modulus as i64) as usize]
    }

    /// Exponent `e` with `χ(m) = ζ_M^e`, or `None` when `χ(m) = 0`.
    pub fn value_exponent(&self, m: i64) -> Option<u64> {
        self.exps[m.rem_euclid(self.modulus as i64) as usize]
    }

    /// `χ(m)` as a rational when the character is real-valued there.
    pub fn real_value(&self, m: i64) -> Option<i64> {
        match self.value_exponent(m) {
            None => Some(0),
            Some(0) => Some(1),
            Some(e) if 2 * e == self.ambient => Some(-1),
            _ => None,
        }
    }

    /// Exponent of `μ = e^{2πi/N}` inside `ζ_M`.
    fn mu_step(&self) -> i64 {
        (self.ambient / self.modulus) as i64
    }

    /// `μ^k` in the ambient field.
    pub fn mu_power(&self, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::root(self.ambient, k * self.mu_step())
    }

    /// `χ̂(ℓ) = (1/N) Σ_m χ(m) μ^{-ℓm}`.
    pub fn chi_hat(&self, ell: i64) -> CyclotomicNumber {
        let n = self.modulus as i64;
        let step = self.mu_step();
        let terms = (0..n).filter_map(|m| {
            self.value_exponent(m).map(|e| {
                (e as i64 - ell * m * step, BigRational::new(BigInt::one(), BigInt::from(n)))
            })
        });
        CyclotomicNumber::from_terms(self.ambient, terms)
    }

    /// `τ(χ, ℓ) = Σ_m χ(m) μ^{ℓm}`.
    pub fn gauss_sum(&self, ell: i64) -> CyclotomicNumber {
        let n = self.modulus as i64;
        let step = self.mu_step();
        let terms = (0..n).filter_map(|m| {
            self.value_exponent(m)
                .map(|e| (e as i64 + ell * m * step, BigRational::one()))
        });
        CyclotomicNumber::from_terms(self.ambient, terms)
    }

    /// Conjugate value `χ̄(m)`.
    pub fn conj_value(&self, m: i64) -> CyclotomicNumber {
        self.value(m).conj()
    }

    /// `Σ_m (μ^{ℓm} ∓ μ^{-ℓm}) x_m` with `-` when `ε = 0` and `+` when `ε = 1`.
    pub fn phi_ell_pairing(&self, ell: i64, x: &[BigRational]) -> Result<CyclotomicNumber> {
        let n = self.modulus as i64;
        if x.len() as i64 != n {
            return Err(Error::InvalidArgument(format!(
                "phi pairing expects {n} coordinates, got {}",
                x.len()
            )));
        }
        let step = self.mu_step();
        let sign = if self.epsilon == 0 { -1 } else { 1 };
        let mut terms = Vec::new();
        for (m, xm) in x.iter().enumerate() {
            if xm.is_zero() {
                continue;
            }
            let m = m as i64;
            terms.push((ell * m * step, xm.clone()));
            terms.push((-ell * m * step, xm * BigRational::from_integer(BigInt::from(sign))));
        }
        Ok(CyclotomicNumber::from_terms(self.ambient, terms))
    }

    /// The primitive character inducing `self`, with the primes dividing the
    /// modulus but not the conductor.
    pub fn reduce_to_primitive(&self) -> Result<(DirichletCharacter, Vec<u64>)> {
        let f = self.conductor;
        if f % 2 == 0 {
            return Err(Error::UnsupportedForPipeline(format!(
                "character {} has even conductor {f}",
                self.selector()
            )));
        }
        let n = self.modulus;
        let euler: Vec<u64> = primes_upto(n).into_iter().filter(|p| n % p == 0 && f % p != 0).collect();
        if self.primitive {
            return Ok((self.clone(), euler));
        }
        // compare values as fractions of a full turn
        let target: Vec<Option<BigRational>> = (0..f)
            .map(|m| {
                if gcd(m, f) != 1 {
                    return None;
                }
                let lift = (0..n).find(|&x| x % f == m % f && gcd(x, n) == 1).unwrap();
                let e = self.value_exponent(lift as i64).unwrap();
                Some(BigRational::new(BigInt::from(e), BigInt::from(self.ambient)))
            })
            .collect();
        let found = enumerate_characters(f).into_iter().find(|psi| {
            (0..f).all(|m| {
                let e = psi
                    .value_exponent(m as i64)
                    .map(|e| BigRational::new(BigInt::from(e), BigInt::from(psi.ambient)));
                e == target[m as usize]
            })
        });
        let psi = found.expect("inducing character exists");
        debug_assert!(psi.primitive);
        Ok((psi, euler))
    }

    pub fn summary(&self) -> CharacterSummary {
        CharacterSummary {
            selector: self.selector(),
            modulus: self.modulus,
            index: self.index,
            exponents: self.label.clone(),
            order: self.order,
            conductor: self.conductor,
            primitive: self.primitive,
            parity: if self.parity_eps_chi == 0 { "even" } else { "odd" },
            epsilon: self.epsilon,
            pipeline_supported: self.pipeline_supported(),
        }
    }
}

/// Parses a selector `"N:index"`.
pub fn parse_selector(s: &str) -> Result<DirichletCharacter> {
    let bad = || Error::Parse(format!("character selector must look like N:index, got {s:?}"));
    let (n, i) = s.split_once(':').ok_or_else(bad)?;
    let n: u64 = n.trim().parse().map_err(|_| bad())?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    let chars = enumerate_characters(n);
    chars
        .into_iter()
        .nth(i)
        .ok_or_else(|| Error::Parse(format!("modulus {n} has fewer than {} characters", i + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_primitivity() {
        assert_eq!(enumerate_characters(1).len(), 1);
        let c3 = enumerate_characters(3);
        assert_eq!(c3.len(), 2);
        assert!(c3[0].is_principal() && !c3[0].is_primitive());
        assert!(c3[1].is_primitive() && c3[1].parity_eps_chi() == 1 && c3[1].order() == 2);
        let c9 = enumerate_characters(9);
        assert_eq!(c9.len(), 6);
        assert_eq!(c9.iter().filter(|c| c.is_primitive()).count(), 4);
        for n in 1..=30u64 {
            let cs = enumerate_characters(n);
            assert_eq!(cs.len() as u64, euler_phi(n));
            let prim = cs.iter().filter(|c| c.is_primitive()).count();
            // number of primitive characters is the Dirichlet inverse of φ convolved with 1
            let expected: i64 = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| mobius(n / d) * euler_phi(d) as i64)
                .sum();
            assert_eq!(prim as i64, expected, "modulus {n}");
        }
    }

    fn mobius(mut n: u64) -> i64 {
        let mut m = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }

    #[test]
    fn reduction_examples() {
        let c3 = enumerate_characters(3);
        let (psi, primes) = c3[0].reduce_to_primitive().unwrap();
        assert_eq!(psi.modulus(), 1);
        assert_eq!(primes, vec![3]);
        let (psi, primes) = c3[1].reduce_to_primitive().unwrap();
        assert_eq!(psi.modulus(), 3);
        assert!(primes.is_empty());
        let c9 = enumerate_characters(9);
        let induced: Vec<_> = c9.iter().filter(|c| c.conductor() == 3).collect();
        assert_eq!(induced.len(), 1);
        let (psi, primes) = induced[0].reduce_to_primitive().unwrap();
        assert_eq!(psi.modulus(), 3);
        assert!(psi.is_primitive());
        assert!(primes.is_empty());
        let c4 = enumerate_characters(4);
        assert!(c4[1].reduce_to_primitive().is_err());
        assert!(!c4[1].pipeline_supported());
    }

    #[test]
    fn gauss_sum_mod3() {
        let chi = &enumerate_characters(3)[1];
        let tau = chi.gauss_sum(1);
        let mu = chi.mu_power(1);
        let mu2 = chi.mu_power(2);
        assert_eq!(tau, mu.sub(&mu2));
        let norm = tau.mul(&tau.conj());
        assert_eq!(norm.as_rational(), Some(BigRational::from_integer(3.into())));
        assert!(chi.chi_hat(0).is_zero());
    }

    #[test]
    fn selector_parsing() {
        let chi = parse_selector("3:1").unwrap();
        assert!(chi.is_primitive());
        assert!(parse_selector("3:2").is_err());
        assert!(parse_selector("x").is_err());
    }
}
