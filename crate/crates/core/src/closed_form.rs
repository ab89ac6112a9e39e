//! Closed-form results for the named urns, computed independently of the
//! dynamic program: alternating sums in exact big-integer arithmetic (one
//! division at the end), integral representations by quadrature.
//!
//! Arguments follow the `(n, m)` convention of the formulas: `n` white
//! balls (single-unit pills, cannibals, group A), `m` black balls.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Result, UrnError};
use crate::quadrature::{self, Integral};
use crate::rational::{binomial, factorial, harmonic, ratio, ExactRational};

/// Error bound guaranteed by [`pills_pgf`].
pub const PILLS_PGF_TOL: f64 = 1e-10;
/// Error bound guaranteed by [`rpills_pgf`].
pub const RPILLS_PGF_TOL: f64 = 1e-8;

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(UrnError::InvalidArgument(msg()))
    }
}

fn check_v(v: f64) -> Result<()> {
    require((0.0..=1.0).contains(&v), || format!("v = {v} is outside [0, 1]"))
}

/// `q log^j q`, with its limit 0 at `q = 0`.
fn q_log_pow(q: f64, j: i32) -> f64 {
    if q <= 0.0 {
        0.0
    } else {
        q * q.ln().powi(j)
    }
}

/// Pills urn pgf of the remaining single-unit pills,
/// `h(v) = m v ∫_0^1 (1 + (v-1) q)^n (1 - q - (v-1) q log q)^(m-1) dq`.
pub fn pills_pgf(n: u32, m: u32, v: f64) -> Result<f64> {
    require(m >= 1, || "pills_pgf needs m >= 1".into())?;
    check_v(v)?;
    let integral = pills_pgf_integral(n, m, v)?;
    Ok(f64::from(m) * v * integral.value)
}

fn pills_pgf_integral(n: u32, m: u32, v: f64) -> Result<Integral> {
    let integrand = move |q: f64| {
        (1.0 + (v - 1.0) * q).powi(n as i32)
            * (1.0 - q - (v - 1.0) * q_log_pow(q, 1)).powi(m as i32 - 1)
    };
    quadrature::integrate_log_endpoint(integrand, PILLS_PGF_TOL)
}

/// `E(X_{n,m}) = n / (m + 1) + H_m` for the pills urn.
pub fn pills_expectation(n: u32, m: u32) -> Result<ExactRational> {
    require(m >= 1, || "pills_expectation needs m >= 1".into())?;
    Ok(ratio(u64::from(n), u64::from(m) + 1) + harmonic(u64::from(m)))
}

/// r-pills pgf of the remaining single-unit pills, `counts = (n_1, ..., n_r)`:
///
/// `n_r ∫_0^1 ∏_{j<r} (1 - (-1)^(j-1) (1-v) q log^(j-1) q / (j-1)!)^(n_j)
///   (1 - q - (-1)^(r-1) (1-v) q log^(r-1) q / (r-1)!)^(n_r - 1) dq`
pub fn rpills_pgf(counts: &[u32], v: f64) -> Result<f64> {
    let r = counts.len();
    require(r >= 3, || format!("rpills_pgf needs r >= 3 colors, got {r}"))?;
    let n_r = counts[r - 1];
    require(n_r >= 1, || "rpills_pgf needs n_r >= 1".into())?;
    check_v(v)?;

    let sign = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };
    let inv_fact: Vec<f64> = (0..r).map(|j| 1.0 / (1..=j).map(|i| i as f64).product::<f64>()).collect();
    let counts = counts.to_vec();
    let integrand = move |q: f64| {
        let mut value = 1.0;
        for (idx, &n_j) in counts[..r - 1].iter().enumerate() {
            // idx = j - 1
            let factor = 1.0 - sign(idx) * (1.0 - v) * q_log_pow(q, idx as i32) * inv_fact[idx];
            value *= factor.powi(n_j as i32);
        }
        let last = 1.0 - q - sign(r - 1) * (1.0 - v) * q_log_pow(q, r as i32 - 1) * inv_fact[r - 1];
        value * last.powi(n_r as i32 - 1)
    };
    let integral = quadrature::integrate_log_endpoint(integrand, RPILLS_PGF_TOL)?;
    Ok(f64::from(n_r) * integral.value)
}

/// Expected white count for the pills variant started with `2m` black balls:
/// `4^m n / ((2m+1) C(2m, m)) + 4^m / C(2m, m) - 1`.
pub fn variant_pills_expectation(n: u32, m: u32) -> Result<ExactRational> {
    require(m >= 1, || "variant_pills_expectation needs m >= 1".into())?;
    let four_m = BigInt::from(4u32).pow(m);
    let central = binomial(2 * u64::from(m), u64::from(m));
    let first = BigRational::new(&four_m * BigInt::from(n), BigInt::from(2 * m + 1) * &central);
    let second = BigRational::new(four_m, central);
    Ok(first + second - BigRational::one())
}

/// Probability that the cannibal urn started with `n` cannibals and `m`
/// non-cannibals ends with exactly `k` cannibals:
///
/// `(k-1)!/(n+m-1)! Σ_j (-1)^j/(k-n-j)! Σ_l C(m,l) (-1)^l (n+j)^(m-l)/(j-l)!`
///
/// with `0 <= j <= k - n`, `0 <= l <= min(j, m)` (reciprocal factorials of
/// negative integers vanish) and `0^0 = 1`.
pub fn cannibal_pmf(n: u32, m: u32, k: u32) -> Result<ExactRational> {
    require(m >= 2, || "cannibal_pmf needs m >= 2".into())?;
    require(k >= 1, || "cannibal_pmf needs k >= 1".into())?;
    let (n, m, k) = (u64::from(n), u64::from(m), u64::from(k));
    if k < n {
        return Ok(ExactRational::zero());
    }
    // common denominator D = (k-n)!^2 (every 1/(k-n-j)! and 1/(j-l)! divides into it)
    let span = k - n;
    let outer_den = factorial(span);
    let inner_den = factorial(span);
    let mut numerator = BigInt::zero();
    for j in 0..=span {
        let mut inner = BigInt::zero();
        for l in 0..=j.min(m) {
            let term = binomial(m, l) * BigInt::from(n + j).pow((m - l) as u32)
                * (&inner_den / factorial(j - l));
            if l % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        let term = inner * (&outer_den / factorial(span - j));
        if j % 2 == 0 {
            numerator += term;
        } else {
            numerator -= term;
        }
    }
    let scale = BigRational::new(factorial(k - 1), factorial(n + m - 1));
    Ok(scale * BigRational::new(numerator, outer_den * inner_den))
}

/// Probability that the OK Corral fight started with `n` white and `m` black
/// gunmen ends with every black gunman dead:
/// `1/(n+m)! Σ_{r=1}^{n} (-1)^(n-r) C(n+m, n-r) r^(n+m)`.
pub fn okcorral_survive_prob(n: u32, m: u32) -> Result<ExactRational> {
    require(n >= 1 && m >= 1, || "okcorral_survive_prob needs n, m >= 1".into())?;
    let (n, m) = (u64::from(n), u64::from(m));
    let sum = alternating(n, |r| binomial(n + m, n - r) * BigInt::from(r).pow((n + m) as u32));
    Ok(BigRational::new(sum, factorial(n + m)))
}

/// Probability that exactly `k` white gunmen survive:
/// `k!/(n+m)! Σ_{r=1}^{n} (-1)^(n-r) C(n+m, n-r) C(r-1, k-1) r^(n+m-k)`.
pub fn okcorral_survivor_pmf(n: u32, m: u32, k: u32) -> Result<ExactRational> {
    require(n >= 1 && m >= 1, || "okcorral_survivor_pmf needs n, m >= 1".into())?;
    require((1..=n).contains(&k), || format!("k = {k} outside 1..={n}"))?;
    let (n, m, k) = (u64::from(n), u64::from(m), u64::from(k));
    let sum = alternating(n, |r| {
        binomial(n + m, n - r) * binomial(r - 1, k - 1) * BigInt::from(r).pow((n + m - k) as u32)
    });
    Ok(BigRational::new(factorial(k) * sum, factorial(n + m)))
}

/// `Σ_{r=1}^{n} (-1)^(n-r) term(r)`
fn alternating(n: u64, term: impl Fn(u64) -> BigInt) -> BigInt {
    (1..=n).fold(BigInt::zero(), |acc, r| {
        if (n - r) % 2 == 0 {
            acc + term(r)
        } else {
            acc - term(r)
        }
    })
}

/// Probability that the black balls run out first when drawing without
/// replacement: `n / (m + n)`.
pub fn sampling_survive_prob(n: u32, m: u32) -> Result<ExactRational> {
    require(n >= 1 && m >= 1, || "sampling_survive_prob needs n, m >= 1".into())?;
    Ok(ratio(u64::from(n), u64::from(n) + u64::from(m)))
}

/// Probability that the black balls run out first with exactly `k` white
/// balls left: `C(m-1+n-k, m-1) / C(m+n, m)`.
pub fn sampling_pmf(n: u32, m: u32, k: u32) -> Result<ExactRational> {
    require(n >= 1 && m >= 1, || "sampling_pmf needs n, m >= 1".into())?;
    require((1..=n).contains(&k), || format!("k = {k} outside 1..={n}"))?;
    let (n, m, k) = (u64::from(n), u64::from(m), u64::from(k));
    Ok(BigRational::new(binomial(m - 1 + n - k, m - 1), binomial(m + n, m)))
}
