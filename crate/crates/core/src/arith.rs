//! Integer arithmetic: factorization, Kronecker symbols, discriminant
//! decomposition and the usual multiplicative functions.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted integer input.
pub const MAX_INPUT: u64 = i64::MAX as u64;

const TRIAL_LIMIT: u64 = 1_000_000;
const SPF_LIMIT: usize = 1 << 21;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn primes_to_trial_limit() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut comp = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if !comp[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    comp[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// Smallest-prime-factor table on `[0, SPF_LIMIT)`.
pub(crate) fn spf_table() -> &'static [u32] {
    static SPF: OnceLock<Vec<u32>> = OnceLock::new();
    SPF.get_or_init(|| {
        let mut spf = vec![0u32; SPF_LIMIT];
        for i in 2..SPF_LIMIT {
            if spf[i] == 0 {
                let mut j = i;
                while j < SPF_LIMIT {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        spf
    })
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin, valid for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Pollard–Brent; `n` must be an odd composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut y, m) = (2u64, 128u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let f = pollard_brent(n);
    split_large(f, out);
    split_large(n / f, out);
}

/// Canonical prime factorization of `1 ≤ n ≤ 2⁶³−1`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 || n > MAX_INPUT {
        return Err(Error::OutOfRange(format!("factorize({n})")));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    if (m as usize) < SPF_LIMIT {
        let spf = spf_table();
        while m > 1 {
            let p = spf[m as usize] as u64;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        return Ok(Factorization { value: n, factors });
    }
    for &p in primes_to_trial_limit() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        let mut rest = Vec::new();
        split_large(m, &mut rest);
        rest.sort_unstable();
        for p in rest {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    Ok(Factorization { value: n, factors })
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

/// `Some(√n)` when `n` is a perfect square.
pub fn exact_sqrt(n: i64) -> Option<u64> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u64);
    (r * r == n as u64).then_some(r)
}

fn jacobi_odd(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut k = 1;
    a %= n;
    while a != 0 {
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            k = -k;
        }
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        k
    } else {
        0
    }
}

fn kron2(a: i128) -> i32 {
    match a.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

/// Kronecker symbol `(a/n)` with `(a/0) = 1` iff `a = ±1`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    let a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return (a == 1 || a == -1) as i32;
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut k = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    let v = n.trailing_zeros();
    n >>= v;
    if v % 2 == 1 {
        k *= kron2(a);
    }
    let n = n as u64;
    k * jacobi_odd(a.rem_euclid(n as i128) as u64, n)
}

/// Squarefree part `s` and `f > 0` with `n = s·f²`, for nonzero `n`.
pub fn squarefree_decompose(n: i64) -> Result<(i64, u64)> {
    if n == 0 {
        return Err(Error::OutOfRange("squarefree_decompose(0)".into()));
    }
    let fac = factorize(n.unsigned_abs())?;
    let (mut s, mut f) = (1i64, 1u64);
    for &(p, e) in &fac.factors {
        if e % 2 == 1 {
            s *= p as i64;
        }
        f *= p.pow(e / 2);
    }
    Ok((s * n.signum(), f))
}

pub fn is_discriminant(d: i64) -> bool {
    d != 0 && matches!(d.rem_euclid(4), 0 | 1)
}

/// Fundamental discriminants, with 1 admitted.
pub fn is_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if !is_discriminant(d) {
        return false;
    }
    let Ok((s, f)) = squarefree_decompose(d) else {
        return false;
    };
    match d.rem_euclid(4) {
        1 => f == 1,
        _ => f == 2 && matches!(s.rem_euclid(4), 2 | 3),
    }
}

/// Field discriminant of `Q(√n)` for a nonzero integer `n` (1 for squares).
pub fn field_discriminant(n: i64) -> Result<i64> {
    let (s, _) = squarefree_decompose(n)?;
    Ok(if s.rem_euclid(4) == 1 { s } else { 4 * s })
}

/// `D = d·ℓ²` with `d` fundamental (or 1) and `ℓ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Discriminant {
    pub big_d: i64,
    pub d: i64,
    pub ell: u64,
}

impl Discriminant {
    /// `ψ_D(n) = (d / (n/gcd(n,ℓ)))`.
    pub fn psi(&self, n: u64) -> i32 {
        let m = n / gcd(n, self.ell);
        kronecker(self.d, m as i64)
    }

    pub fn is_square(&self) -> bool {
        self.d == 1
    }
}

pub fn decompose(big_d: i64) -> Result<Discriminant> {
    if !is_discriminant(big_d) {
        return Err(Error::NotDiscriminant(big_d));
    }
    if big_d == i64::MIN {
        return Err(Error::OutOfRange(format!("decompose({big_d})")));
    }
    let (s, f) = squarefree_decompose(big_d)?;
    let (d, ell) = if s.rem_euclid(4) == 1 {
        (s, f)
    } else {
        (4 * s, f / 2)
    };
    Ok(Discriminant { big_d, d, ell })
}

pub fn psi_d(big_d: i64, n: u64) -> Result<i32> {
    Ok(decompose(big_d)?.psi(n))
}

pub fn von_mangoldt(n: u64) -> f64 {
    match factorize(n) {
        Ok(f) if f.factors.len() == 1 => (f.factors[0].0 as f64).ln(),
        _ => 0.0,
    }
}

pub fn moebius(n: u64) -> i32 {
    match factorize(n) {
        Ok(f) if f.is_squarefree() => {
            if f.factors.len() % 2 == 0 {
                1
            } else {
                -1
            }
        }
        _ => 0,
    }
}

pub fn euler_phi(n: u64) -> u64 {
    let f = factorize(n).expect("n >= 1");
    f.factors
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// `σ_k(n) = Σ_{d|n} d^k` for complex `k`.
pub fn sigma(k: Complex64, n: u64) -> Complex64 {
    let f = factorize(n).expect("n >= 1");
    f.divisors()
        .into_iter()
        .map(|d| (k * (d as f64).ln()).exp())
        .sum()
}

pub fn sigma_real(k: f64, n: u64) -> f64 {
    let f = factorize(n).expect("n >= 1");
    f.divisors().into_iter().map(|d| (d as f64).powf(k)).sum()
}

pub fn num_divisors(n: u64) -> u64 {
    let f = factorize(n).expect("n >= 1");
    f.factors.iter().map(|&(_, e)| e as u64 + 1).product()
}

/// `(n, m^∞)`: the largest divisor of `n` supported on primes dividing `m`.
pub fn power_part(n: u64, m: u64) -> u64 {
    let mut n = n;
    let mut out = 1;
    let mut g = gcd(n, m);
    while g > 1 {
        n /= g;
        out *= g;
        g = gcd(n, g);
    }
    out
}
