//! `L(1, ψ_D)` for every non-square discriminant.
//!
//! Fundamental values come from exact finite character sums (small `|d|`)
//! or a rapidly convergent erfc-smoothed series (large `|d|`), and can be
//! cross-checked against class numbers and regulators.  General `D = dℓ²`
//! values follow from the local Euler-factor correction at primes of `ℓ`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith::{self, decompose, gcd, isqrt, kronecker, power_part, spf_table, Discriminant};
use crate::error::{Error, Result};

/// Finite sums are the primary route up to this `|d|`.
pub const FINITE_SUM_LIMIT: u64 = 50_000;
/// Upper bound for the class-number routines.
pub const CLASS_NUMBER_LIMIT: u64 = 100_000_000;
const ROUTE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassData {
    pub d: i64,
    /// Narrow class number.
    pub h_plus: u64,
    /// `log ε⁺` for the smallest totally positive unit `ε⁺ > 1` (real fields).
    pub log_eps_plus: Option<f64>,
    /// Number of roots of unity (imaginary fields).
    pub w: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClassNumberFormula,
    FiniteSum,
    SmoothedSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LValue {
    pub disc: Discriminant,
    pub value: f64,
    pub route: Route,
    pub abs_error_est: f64,
}

fn check_fundamental(d: i64) -> Result<()> {
    if d == 1 || !arith::is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(())
}

/// `χ_d(n)` for `0 ≤ n < len`, filled multiplicatively from a prime sieve.
pub fn character_row(d: i64, len: usize) -> Vec<i8> {
    let mut row = vec![0i8; len];
    if len > 1 {
        row[1] = 1;
    }
    let spf = spf_table();
    if len <= spf.len() {
        for n in 2..len {
            let p = spf[n] as usize;
            row[n] = if p == n {
                kronecker(d, n as i64) as i8
            } else {
                row[p] * row[n / p]
            };
        }
    } else {
        for (n, v) in row.iter_mut().enumerate().skip(2) {
            *v = kronecker(d, n as i64) as i8;
        }
    }
    row
}

/// Exact finite sums: `−π|d|^{−3/2} Σ χ(a)a` for `d < 0`,
/// `−d^{−1/2} Σ χ(a) log sin(πa/d)` for `d > 0`.
pub fn l1_finite_sum(d: i64) -> Result<(f64, f64)> {
    check_fundamental(d)?;
    let q = d.unsigned_abs();
    let row = character_row(d, q as usize);
    let half = (q as usize).div_ceil(2);
    let value = if d < 0 {
        // χ(q−a) = −χ(a) pairs a with q−a; the sum stays an exact integer.
        let s: i64 = (1..half)
            .map(|a| row[a] as i64 * (2 * a as i64 - q as i64))
            .sum();
        -PI * s as f64 / (q as f64).powf(1.5)
    } else {
        let mut acc = crate::series::scan::Neumaier::default();
        for (a, &c) in row.iter().enumerate().take(half).skip(1) {
            if c != 0 {
                acc.add(c as f64 * (PI * a as f64 / q as f64).sin().ln());
            }
        }
        -2.0 * acc.total() / (q as f64).sqrt()
    };
    let err = 10.0 * f64::EPSILON * (q as f64).sqrt() * half as f64;
    Ok((value, err))
}

fn expint_e1(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    if x <= 1.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let t = -term / k as f64;
            sum += t;
            if t.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        -EULER - x.ln() + sum
    } else {
        // Modified Lentz on E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut dd = 1.0 / b;
        let mut h = dd;
        for i in 1..200 {
            let an = -((i * i) as f64);
            b += 2.0;
            dd = 1.0 / (an * dd + b);
            c = b + an / c;
            let del = c * dd;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// Smoothed series from the functional equation of `L(s, χ_d)`:
/// `Σ χ(n)[erfc(n√(π/q))/n + E1(πn²/q)/√q]` (even) and
/// `Σ χ(n)[exp(−πn²/q)/n + (π/√q) erfc(n√(π/q))]` (odd).
pub fn l1_smoothed(d: i64) -> Result<(f64, f64)> {
    check_fundamental(d)?;
    let q = d.unsigned_abs() as f64;
    let rq = q.sqrt();
    let scale = (PI / q).sqrt();
    let nmax = (6.2 / scale).ceil() as usize + 2;
    let row = character_row(d, nmax + 1);
    let mut acc = crate::series::scan::Neumaier::default();
    for (n, &c) in row.iter().enumerate().skip(1) {
        if c == 0 {
            continue;
        }
        let x = n as f64 * scale;
        let term = if d > 0 {
            libm::erfc(x) / n as f64 + expint_e1(x * x) / rq
        } else {
            (-x * x).exp() / n as f64 + PI / rq * libm::erfc(x)
        };
        acc.add(c as f64 * term);
    }
    let err = 10.0 * f64::EPSILON * nmax as f64;
    Ok((acc.total(), err))
}

fn reduced_form_count(d: i64) -> u64 {
    let q = d.unsigned_abs();
    let mut h = 0;
    let amax = isqrt(q / 3) + 1;
    for a in 1..=amax {
        let a = a as i64;
        let mut b = -a + 1;
        while b <= a {
            if (b - d).rem_euclid(2) == 0 {
                let num = b * b - d;
                if num % (4 * a) == 0 {
                    let c = num / (4 * a);
                    if c >= a && !(b < 0 && c == a) {
                        let g = gcd(gcd(a as u64, b.unsigned_abs()), c as u64);
                        if g == 1 {
                            h += 1;
                        }
                    }
                }
            }
            b += 1;
        }
    }
    h
}

/// Narrow class number of a real quadratic field: cycles of reduced forms.
fn narrow_class_number(delta: i64) -> u64 {
    let r0 = isqrt(delta as u64) as i64;
    let reduced = |a: i64, b: i64| -> bool {
        // √Δ − b < 2|a| < √Δ + b, exactly: for k = b ± 2|a| compare k² with Δ.
        let two_a = 2 * a.abs();
        b > 0 && b <= r0 && {
            let lo = two_a + b;
            let hi = two_a - b;
            lo * lo > delta && (hi <= 0 || hi * hi < delta)
        }
    };
    let mut forms = Vec::new();
    let mut b = 1 + (delta + 1) % 2;
    while b <= r0 {
        let ac = (b * b - delta) / 4;
        let m = -ac;
        let mut a = 1;
        while a * a <= m {
            if m % a == 0 {
                for (x, y) in [(a, m / a), (m / a, a)] {
                    for sign in [1i64, -1] {
                        let (fa, fc) = (sign * x, -sign * y);
                        if reduced(fa, b) {
                            forms.push((fa, b, fc));
                        }
                    }
                    if x == y {
                        break;
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    forms.sort_unstable();
    forms.dedup();
    let index: HashMap<(i64, i64, i64), usize> =
        forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut seen = vec![false; forms.len()];
    let mut cycles = 0;
    for start in 0..forms.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            let (_, b, c) = forms[cur];
            let m = 2 * c.abs();
            let r = r0 - (r0 + b).rem_euclid(m);
            let next = (c, r, (r * r - delta) / (4 * c));
            cur = match index.get(&next) {
                Some(&i) => i,
                None => break,
            };
        }
    }
    cycles
}

/// `log ε⁺` from one period of the continued fraction of `ω`, the generator
/// of the maximal order.
fn log_eps_plus(d: i64) -> f64 {
    let (big_d, mut p, mut q) = if d % 4 == 1 { (d, 1i64, 2i64) } else { (d / 4, 0, 1) };
    let rd = (big_d as f64).sqrt();
    let r0 = isqrt(big_d as u64) as i64;
    let mut a = (p + r0).div_euclid(q);
    let mut log_eps = 0.0;
    let mut period = 0u32;
    // One step so the expansion is purely periodic from here on.
    p = a * q - p;
    q = (big_d - p * p) / q;
    a = (p + r0).div_euclid(q);
    let start = (p, q);
    loop {
        log_eps += ((p as f64 + rd) / q as f64).ln();
        period += 1;
        p = a * q - p;
        q = (big_d - p * p) / q;
        a = (p + r0).div_euclid(q);
        if (p, q) == start {
            break;
        }
    }
    if period % 2 == 1 {
        2.0 * log_eps
    } else {
        log_eps
    }
}

pub fn class_data(d: i64) -> Result<ClassData> {
    check_fundamental(d)?;
    if d.unsigned_abs() > CLASS_NUMBER_LIMIT {
        return Err(Error::OutOfRange(format!("class_data({d}): |d| > 10^8")));
    }
    if d < 0 {
        let w = match d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        Ok(ClassData { d, h_plus: reduced_form_count(d), log_eps_plus: None, w: Some(w) })
    } else {
        Ok(ClassData {
            d,
            h_plus: narrow_class_number(d),
            log_eps_plus: Some(log_eps_plus(d)),
            w: None,
        })
    }
}

pub fn l1_from_class_data(c: &ClassData) -> f64 {
    let q = (c.d.unsigned_abs() as f64).sqrt();
    match (c.log_eps_plus, c.w) {
        (Some(le), _) => c.h_plus as f64 * le / q,
        (None, Some(w)) => 2.0 * PI * c.h_plus as f64 / (w as f64 * q),
        _ => unreachable!("class data carries exactly one of log ε⁺ or w"),
    }
}

/// Primary-route value: finite sum for `|d| ≤ 5·10⁴`, smoothed series above.
pub fn l1_primary(d: i64) -> Result<LValue> {
    let (value, abs_error_est, route) = if d.unsigned_abs() <= FINITE_SUM_LIMIT {
        let (v, e) = l1_finite_sum(d)?;
        (v, e, Route::FiniteSum)
    } else {
        let (v, e) = l1_smoothed(d)?;
        (v, e, Route::SmoothedSeries)
    };
    Ok(LValue { disc: decompose(d)?, value, route, abs_error_est })
}

/// `L(1, ψ_d)` by the primary route, checked against the class number formula.
pub fn l1_fundamental(d: i64) -> Result<LValue> {
    let primary = l1_primary(d)?;
    if d.unsigned_abs() <= CLASS_NUMBER_LIMIT {
        let cn = l1_from_class_data(&class_data(d)?);
        if (cn - primary.value).abs() > ROUTE_TOLERANCE.max(primary.abs_error_est) {
            return Err(Error::RouteDisagreement { d, finite_sum: primary.value, class_number: cn });
        }
    }
    Ok(primary)
}

/// `(1/ℓ)·∏_{p|ℓ}[1 + (p − ψ_d(p))·((ℓ,p^∞) − 1)/(p − 1)]`.
pub fn conductor_factor(d: i64, ell: u64) -> f64 {
    let fac = arith::factorize(ell).expect("ell >= 1");
    let mut f = 1.0 / ell as f64;
    for p in fac.primes() {
        let pk = power_part(ell, p) as f64;
        let pf = p as f64;
        f *= 1.0 + (pf - kronecker(d, p as i64) as f64) * (pk - 1.0) / (pf - 1.0);
    }
    f
}

fn general_from(disc: Discriminant, fundamental: LValue) -> LValue {
    let factor = conductor_factor(disc.d, disc.ell);
    LValue {
        disc,
        value: fundamental.value * factor,
        route: fundamental.route,
        abs_error_est: fundamental.abs_error_est * factor,
    }
}

fn check_nonsquare(big_d: i64) -> Result<Discriminant> {
    let disc = decompose(big_d)?;
    if disc.is_square() {
        return Err(Error::SquareDiscriminant(big_d));
    }
    Ok(disc)
}

/// `L(1, ψ_D)` for non-square `D`, with the fundamental value dual-checked.
pub fn l1_general(big_d: i64) -> Result<LValue> {
    let disc = check_nonsquare(big_d)?;
    Ok(general_from(disc, l1_fundamental(disc.d)?))
}

/// Memoized primary-route `L(1, ψ_D)`, for scans.
pub fn l1_value(big_d: i64) -> Result<f64> {
    let disc = check_nonsquare(big_d)?;
    Ok(L1Cache::global().value(disc.d)? * conductor_factor(disc.d, disc.ell))
}

/// Concurrent memo table `d ↦ L(1, ψ_d)`.  Concurrent misses may compute the
/// same entry twice; the first insertion wins.
#[derive(Debug, Default)]
pub struct L1Cache {
    map: RwLock<HashMap<i64, f64>>,
}

impl L1Cache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static L1Cache {
        static GLOBAL: OnceLock<L1Cache> = OnceLock::new();
        GLOBAL.get_or_init(L1Cache::new)
    }

    pub fn get(&self, d: i64) -> Option<f64> {
        self.map.read().expect("cache lock").get(&d).copied()
    }

    pub fn insert(&self, d: i64, value: f64) -> f64 {
        *self.map.write().expect("cache lock").entry(d).or_insert(value)
    }

    pub fn value(&self, d: i64) -> Result<f64> {
        if let Some(v) = self.get(d) {
            return Ok(v);
        }
        let v = l1_primary(d)?.value;
        Ok(self.insert(d, v))
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn merge(&self, other: HashMap<i64, f64>) {
        let mut map = self.map.write().expect("cache lock");
        for (d, v) in other {
            map.entry(d).or_insert(v);
        }
    }

    pub fn entries(&self) -> Vec<(i64, f64)> {
        let mut out: Vec<_> = self
            .map
            .read()
            .expect("cache lock")
            .iter()
            .map(|(&d, &v)| (d, v))
            .collect();
        out.sort_by_key(|&(d, _)| (d.unsigned_abs(), d.signum()));
        out
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (d, v) in self.entries() {
            writeln!(s, "{d},{v}").expect("write to string");
        }
        s
    }

    pub fn parse(text: &str) -> Result<HashMap<i64, f64>> {
        let mut out = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let (d, v) = line
                .split_once(',')
                .ok_or_else(|| err(format!("expected `d,value`, got {line:?}")))?;
            let d: i64 = d.trim().parse().map_err(|e| err(format!("bad d {d:?}: {e}")))?;
            let v: f64 = v.trim().parse().map_err(|e| err(format!("bad value {v:?}: {e}")))?;
            out.insert(d, v);
        }
        Ok(out)
    }
}

pub fn l1_cache_load(path: &Path) -> Result<L1Cache> {
    let cache = L1Cache::new();
    cache.merge(L1Cache::parse(&std::fs::read_to_string(path)?)?);
    Ok(cache)
}

pub fn l1_cache_store(cache: &L1Cache, path: &Path) -> Result<()> {
    std::fs::write(path, cache.render())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fundamentals(limit: i64) -> impl Iterator<Item = i64> {
        (-limit..=limit).filter(|&d| d != 1 && arith::is_fundamental(d))
    }

    #[test]
    fn class_data_examples() {
        let c = class_data(-3).unwrap();
        assert_eq!((c.h_plus, c.w), (1, Some(6)));
        let c = class_data(5).unwrap();
        assert_eq!(c.h_plus, 1);
        assert!((c.log_eps_plus.unwrap() - 0.962_423_650_1).abs() < 1e-9);
        let c = class_data(8).unwrap();
        assert_eq!(c.h_plus, 1);
        assert!((c.log_eps_plus.unwrap() - 1.762_747_174_0).abs() < 1e-9);
        let c = class_data(12).unwrap();
        assert_eq!(c.h_plus, 2);
        assert!((c.log_eps_plus.unwrap() - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-12);
        assert_eq!(class_data(-23).unwrap().h_plus, 3);
        assert_eq!(class_data(-4).unwrap().w, Some(4));
        assert!(class_data(9).is_err());
        assert!(class_data(1).is_err());
    }

    #[test]
    fn known_class_numbers() {
        for (d, h) in [(-20, 2), (-56, 4), (-84, 4), (-163, 1), (-71, 7), (-4027, 9)] {
            assert_eq!(class_data(d).unwrap().h_plus, h, "d={d}");
        }
        // Narrow class numbers: h⁺ = 2h when the fundamental unit has norm +1.
        for (d, h) in [(13, 1), (21, 2), (24, 2), (28, 2), (40, 2), (60, 4), (65, 2), (229, 3)] {
            assert_eq!(class_data(d).unwrap().h_plus, h, "d={d}");
        }
    }

    #[test]
    fn l1_examples() {
        assert!((l1_fundamental(-4).unwrap().value - PI / 4.0).abs() < 1e-13);
        assert!((l1_fundamental(-3).unwrap().value - PI / (3.0 * 3f64.sqrt())).abs() < 1e-13);
        let v5 = ((3.0 + 5f64.sqrt()) / 2.0).ln() / 5f64.sqrt();
        assert!((l1_fundamental(5).unwrap().value - v5).abs() < 1e-13);
        assert!((l1_general(45).unwrap().value - 5.0 / 3.0 * v5).abs() < 1e-13);
        assert!((l1_general(-16).unwrap().value - 3.0 * PI / 8.0).abs() < 1e-13);
        assert!(matches!(l1_general(9), Err(Error::SquareDiscriminant(9))));
        assert!(matches!(l1_fundamental(45), Err(Error::NotFundamental(45))));
    }

    #[test]
    fn routes_agree_small() {
        for d in fundamentals(1500) {
            let (fs, _) = l1_finite_sum(d).unwrap();
            let cn = l1_from_class_data(&class_data(d).unwrap());
            assert!((fs - cn).abs() < 1e-10, "d={d}: {fs} vs {cn}");
        }
    }

    #[test]
    fn smoothed_matches_finite_sum() {
        for d in fundamentals(3000).step_by(7) {
            let (fs, _) = l1_finite_sum(d).unwrap();
            let (sm, _) = l1_smoothed(d).unwrap();
            assert!((fs - sm).abs() < 1e-12, "d={d}: {fs} vs {sm}");
        }
        for d in [50_021i64, -50_023, 99_997, -99_995, 1_000_001] {
            if !arith::is_fundamental(d) {
                continue;
            }
            let (fs, _) = l1_finite_sum(d).unwrap();
            let (sm, _) = l1_smoothed(d).unwrap();
            assert!((fs - sm).abs() < 1e-11, "d={d}: {fs} vs {sm}");
        }
    }

    #[test]
    fn large_d_against_class_number() {
        for d in [1_000_001i64, -1_000_003, 4 * 250_003, 999_997 * 4] {
            if !arith::is_fundamental(d) {
                continue;
            }
            assert!(l1_fundamental(d).is_ok(), "d={d}");
        }
    }

    #[test]
    fn expint_reference_values() {
        assert!((expint_e1(0.5) - 0.559_773_594_776_160_8).abs() < 1e-15);
        assert!((expint_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((expint_e1(5.0) - 1.148_295_591_275_325_8e-3).abs() < 1e-17);
    }

    #[test]
    fn cache_round_trip() {
        let cache = L1Cache::new();
        for d in [-3, -4, 5] {
            cache.value(d).unwrap();
        }
        let text = cache.render();
        assert_eq!(text.lines().next().unwrap().split(',').next().unwrap(), "-3");
        let back = L1Cache::parse(&text).unwrap();
        for d in [-3, -4, 5] {
            assert_eq!(back[&d].to_bits(), cache.get(d).unwrap().to_bits());
        }
        assert!(L1Cache::parse("").unwrap().is_empty());
        assert!(L1Cache::parse("# comment\n\n-4,0.78").unwrap().contains_key(&-4));
        assert_eq!(
            L1Cache::parse("x,y"),
            Err(Error::Parse { line: 1, message: "bad d \"x\": invalid digit found in string".into() })
        );
        assert!(matches!(L1Cache::parse("-4,1\n5"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn cache_file_round_trip() {
        let cache = L1Cache::new();
        for d in [-3, -4, 5, 8, -7] {
            cache.value(d).unwrap();
        }
        let path = std::env::temp_dir().join(format!("l1cache-{}.txt", std::process::id()));
        l1_cache_store(&cache, &path).unwrap();
        let back = l1_cache_load(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(back.entries(), cache.entries());
    }
}
