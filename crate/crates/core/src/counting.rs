//! Representation counts for `x² + 4y²` and the divisor-pair identities that
//! evaluate `Σ_{m|N^∞} r^(N)(D/m²)`.

use serde::{Deserialize, Serialize};

use crate::arith::{self, exact_sqrt, field_discriminant, gcd, isqrt, kronecker, power_part};
use crate::coeffs::{c_n_circ, Level};
use crate::error::{Error, Result};

pub const COROLLARY_TOLERANCE: f64 = 1e-9;

/// `r^(M)(D)` stored as the integer `2·r^(M)(D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepCount {
    pub disc: u64,
    pub modulus: u64,
    pub twice: u64,
}

impl RepCount {
    pub fn half_count(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// `Some(r)` when the count is integral.
    pub fn integral(&self) -> Option<u64> {
        self.twice.is_multiple_of(2).then_some(self.twice / 2)
    }
}

/// `#{(x, y) ∈ ℤ²: D = x² + 4y², keep(y)}`, with `y` passed as `|y|`.
pub fn pair_count_by(big_d: u64, keep: impl Fn(u64) -> bool) -> u64 {
    let mut total = 0;
    for y in 0..=isqrt(big_d / 4) {
        let rem = big_d - 4 * y * y;
        let x = isqrt(rem);
        if x * x != rem || !keep(y) {
            continue;
        }
        let xs = if x == 0 { 1 } else { 2 };
        let ys = if y == 0 { 1 } else { 2 };
        total += xs * ys;
    }
    total
}

/// `r^(M)(D) = ½#{(x, y): D = x² + 4y², (y, M) = 1}`.
pub fn r_m(modulus: u64, big_d: u64) -> Result<RepCount> {
    if modulus == 0 {
        return Err(Error::Domain("r^(M) needs M >= 1".into()));
    }
    check_size(big_d)?;
    let twice = pair_count_by(big_d, |y| gcd(y, modulus) == 1);
    Ok(RepCount { disc: big_d, modulus, twice })
}

fn check_size(n: u64) -> Result<()> {
    if n > arith::MAX_INPUT {
        return Err(Error::OutOfRange(format!("{n} exceeds 2^63 - 1")));
    }
    Ok(())
}

/// `r(n) = (1 + cos(πn/2))·Σ_{d|n} ψ_{−4}(d)`.
pub fn r(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("r(n) needs n >= 1".into()));
    }
    check_size(n)?;
    let weight = match n % 4 {
        0 => 2,
        2 => return Ok(0),
        _ => 1,
    };
    let odd = n >> n.trailing_zeros();
    let fac = arith::factorize(odd)?;
    let mut chi_sum: i64 = 1;
    for &(p, e) in &fac.factors {
        chi_sum *= match p % 4 {
            1 => e as i64 + 1,
            _ => (e % 2 == 0) as i64,
        };
    }
    Ok(weight * chi_sum as u64)
}

/// `r(n)` by enumeration.
pub fn r_brute(n: u64) -> Result<u64> {
    let c = r_m(1, n)?;
    c.integral().ok_or_else(|| Error::Domain(format!("odd pair count at n = {n}")))
}

/// `#{(a, n) ∈ ℤ²_{>0}: a | n², keep(n), a + n²/a = ℓ}`.
pub fn divisor_pair_count_by(ell: u64, keep: impl Fn(u64) -> bool) -> u64 {
    let mut count = 0;
    for n in 1..ell {
        if !keep(n) {
            continue;
        }
        let n2 = n * n;
        let fac = arith::factorize(n).expect("n >= 1");
        let sq = arith::Factorization {
            value: n2,
            factors: fac.factors.iter().map(|&(p, e)| (p, 2 * e)).collect(),
        };
        count += sq.divisors().into_iter().filter(|&a| a + n2 / a == ell).count() as u64;
    }
    count
}

/// `#{(a, n): a | n², (n, M) = 1, a + n²/a = ℓ}`.
pub fn divisor_pair_count(ell: u64, modulus: u64) -> u64 {
    divisor_pair_count_by(ell, |n| gcd(n, modulus) == 1)
}

/// `r^(M)(ℓ²) = #{(a, n)} + [M = 1]`.
pub fn check_lemma_rnell2(modulus: u64, ell: u64) -> Result<bool> {
    let lhs = r_m(modulus, ell * ell)?.twice;
    let rhs = 2 * (divisor_pair_count(ell, modulus) + (modulus == 1) as u64);
    Ok(lhs == rhs)
}

fn check_squarefree_prime_divisor(modulus: u64, p: u64) -> Result<()> {
    let fac = arith::factorize(modulus)?;
    if !fac.is_squarefree() || !arith::is_prime(p) || !modulus.is_multiple_of(p) {
        return Err(Error::Precondition(format!(
            "need squarefree M with prime p | M (M = {modulus}, p = {p})"
        )));
    }
    Ok(())
}

/// Both conclusions of the telescoping lemma at `(M, p, D)`.
pub fn check_lemma_telescope(modulus: u64, p: u64, big_d: u64) -> Result<bool> {
    check_squarefree_prime_divisor(modulus, p)?;
    if big_d == 0 {
        return Err(Error::Domain("telescope lemma needs D >= 1".into()));
    }
    let mut lhs = 0;
    let mut reduced = big_d;
    loop {
        lhs += r_m(modulus, reduced)?.twice;
        if !reduced.is_multiple_of(p * p) {
            break;
        }
        reduced /= p * p;
    }
    let coarse = r_m(modulus / p, big_d)?.twice;
    // the defect keeps the coprimality to M/p; without it the identity fails for composite M
    let defect = pair_count_by(reduced, |y| y % p == 0 && gcd(y, modulus / p) == 1);
    if lhs + defect != coarse {
        return Ok(false);
    }
    let d = field_discriminant(big_d as i64)?;
    if kronecker(d, p as i64) != 1 && lhs != coarse {
        return Ok(false);
    }
    Ok(true)
}

/// `δ_{N,D}`: nonzero only for square `D = ℓ²`.
pub fn delta(level: Level, big_d: u64) -> f64 {
    let Some(ell) = exact_sqrt(big_d as i64).filter(|&l| l > 0) else {
        return 0.0;
    };
    let n = level.get();
    let part = power_part(ell, n);
    let pairs = divisor_pair_count_by(ell / part, |k| k % n == 0);
    level.lambda() / part as f64 * (1 + pairs) as f64
}

/// `(D/m²)` for every `m | N^∞` with `m² | D`.
fn level_power_quotients(level: Level, big_d: u64) -> Vec<u64> {
    let mut out = vec![big_d];
    for p in level.primes() {
        let mut next = Vec::new();
        for &q in &out {
            let mut q = q;
            while q % (p * p) == 0 {
                q /= p * p;
                next.push(q);
            }
        }
        out.extend(next);
    }
    out
}

/// `c_N°(D)·Σ_{m|N^∞} r^(N)(D/m²) = c_N°(D) r(D) − δ_{N,D}`.
pub fn check_corollary(level: Level, big_d: u64) -> Result<bool> {
    if big_d == 0 {
        return Err(Error::Domain("corollary needs D >= 1".into()));
    }
    let c = c_n_circ(level, big_d as i64)?;
    let mut twice = 0;
    for q in level_power_quotients(level, big_d) {
        twice += r_m(level.get(), q)?.twice;
    }
    let lhs = c * twice as f64 / 2.0;
    let rhs = c * r(big_d)? as f64 - delta(level, big_d);
    Ok((lhs - rhs).abs() <= COROLLARY_TOLERANCE * (1.0 + rhs.abs()))
}
