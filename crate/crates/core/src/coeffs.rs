//! Level-`N` weights `c_N`, `c_N°` and the `N = 2` coefficients `c⁺(n)`.

use serde::{Deserialize, Serialize};

use crate::arith::{self, decompose, euler_phi, exact_sqrt, power_part, von_mangoldt};
use crate::error::{Error, Result};
use crate::quadfields::l1_value;

/// A squarefree level `N > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Level(u64);

impl Level {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 || !arith::factorize(n)?.is_squarefree() {
            return Err(Error::Domain(format!("level N = {n} must be squarefree and > 1")));
        }
        Ok(Level(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn primes(self) -> Vec<u64> {
        arith::factorize(self.0).expect("validated level").primes().collect()
    }

    pub fn is_prime(self) -> bool {
        arith::is_prime(self.0)
    }

    /// `Λ(N)`: `log N` for prime `N`, otherwise 0.
    pub fn lambda(self) -> f64 {
        von_mangoldt(self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    NonsquareD,
    SquareD,
    ZeroD,
    ZeroByCongruence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientValue {
    pub level: Level,
    pub disc: i64,
    pub value: f64,
    pub branch: Branch,
}

fn zero_by_congruence(big_d: i64) -> bool {
    matches!(big_d.rem_euclid(4), 2 | 3)
}

/// `c_N(D)` with the branch taken.
pub fn c_n_detailed(level: Level, big_d: i64) -> Result<CoefficientValue> {
    if big_d == 0 {
        return Err(Error::Domain("c_N(D) is defined for D != 0 only".into()));
    }
    let mk = |value, branch| CoefficientValue { level, disc: big_d, value, branch };
    if zero_by_congruence(big_d) {
        return Ok(mk(0.0, Branch::ZeroByCongruence));
    }
    let disc = decompose(big_d)?;
    let m = power_part(disc.ell, level.get());
    if disc.d == 1 {
        let n = level.get() as f64;
        return Ok(mk(level.lambda() * (1.0 / m as f64 - 2.0 * n / (n + 1.0)), Branch::SquareD));
    }
    let reduced = decompose(big_d / (m * m) as i64)?;
    let local: f64 = level.primes().into_iter().map(|p| (reduced.psi(p) - 1) as f64).product();
    if local == 0.0 {
        return Ok(mk(0.0, Branch::NonsquareD));
    }
    let value = local * l1_value(reduced.big_d)? / m as f64;
    Ok(mk(value, Branch::NonsquareD))
}

pub fn c_n(level: Level, big_d: i64) -> Result<f64> {
    Ok(c_n_detailed(level, big_d)?.value)
}

/// `c_N°(D)`: `φ(N)/6` at `D = 0`, `Λ(N)/(ℓ,N^∞)` at `D = ℓ²`, else `c_N(D)`.
pub fn c_n_circ_detailed(level: Level, big_d: i64) -> Result<CoefficientValue> {
    if big_d == 0 {
        return Ok(CoefficientValue {
            level,
            disc: 0,
            value: euler_phi(level.get()) as f64 / 6.0,
            branch: Branch::ZeroD,
        });
    }
    if let Some(ell) = exact_sqrt(big_d) {
        return Ok(CoefficientValue {
            level,
            disc: big_d,
            value: level.lambda() / power_part(ell, level.get()) as f64,
            branch: Branch::SquareD,
        });
    }
    c_n_detailed(level, big_d)
}

pub fn c_n_circ(level: Level, big_d: i64) -> Result<f64> {
    Ok(c_n_circ_detailed(level, big_d)?.value)
}

/// `c⁺(n) = c_2(n)` for `n ≡ 0, 1 (mod 4)` and `2c_2(4n)` otherwise.
pub fn c_plus(n: u64) -> Result<f64> {
    if n == 0 || n > (i64::MAX / 4) as u64 {
        return Err(Error::OutOfRange(format!("c_plus({n})")));
    }
    let two = Level(2);
    match n % 4 {
        0 | 1 => c_n(two, n as i64),
        _ => Ok(2.0 * c_n(two, 4 * n as i64)?),
    }
}
