//! Integer-order Bessel functions of the first kind and the sideband
//! interference identities built from them.
//!
//! `bessel_j` is evaluated by downward (Miller) recurrence normalized with
//! the sum rule `J0 + 2*sum(J_{2k}) = 1`, which is stable over the whole
//! supported window `|n| <= 200`, `|x| <= 50`. A direct power series covers
//! tiny arguments where the recurrence ratio `2k/x` degenerates.
//!
//! The three identity checks quantify how sideband pairs interfere:
//! pure phase modulation carries no amplitude modulation, quadratic spectral
//! phase converts it with weight `J_k(2 z sin(phi))`, and an even-only
//! spectrum has closed-form power and pair sums. Every residual is returned
//! with the truncation order actually used so callers can assert tails.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported order magnitude.
pub const MAX_ORDER: i32 = 200;
/// Largest supported argument magnitude.
pub const MAX_ARGUMENT: f64 = 50.0;

const RESCALE_THRESHOLD: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;
/// Extra orders above `max(n, x)` for the downward recurrence start.
const MILLER_MARGIN: usize = 60;

/// Evaluates `J_n(x)` for integer `n`.
///
/// Absolute error is below 1e-12 over the supported window. Negative orders
/// and arguments map through `J_{-n}(x) = (-1)^n J_n(x)` and
/// `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j(order: i32, x: f64) -> Result<f64> {
    if order.abs() > MAX_ORDER {
        return Err(Error::Domain(format!(
            "Bessel order {order} outside supported |n| <= {MAX_ORDER}"
        )));
    }
    if !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "Bessel argument {x} outside supported |x| <= {MAX_ARGUMENT}"
        )));
    }
    let n = order.unsigned_abs() as usize;
    let mut sign = 1.0;
    if order < 0 && n % 2 == 1 {
        sign = -sign;
    }
    if x < 0.0 && n % 2 == 1 {
        sign = -sign;
    }
    Ok(sign * bessel_j_nonneg(n, x.abs()))
}

/// Evaluates `J_0(x) ..= J_{max_order}(x)` in one downward pass, `x >= 0`.
pub fn bessel_j_sequence(max_order: usize, x: f64) -> Result<Vec<f64>> {
    if max_order > MAX_ORDER as usize {
        return Err(Error::Domain(format!(
            "Bessel order {max_order} outside supported n <= {MAX_ORDER}"
        )));
    }
    if !x.is_finite() || !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::Domain(format!(
            "Bessel sequence argument {x} outside supported 0 <= x <= {MAX_ARGUMENT}"
        )));
    }
    if x < SERIES_CUTOFF {
        return Ok((0..=max_order).map(|n| series_j(n, x)).collect());
    }
    Ok(miller_sequence(max_order, x))
}

fn bessel_j_nonneg(n: usize, x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        series_j(n, x)
    } else {
        miller_sequence(n, x)[n]
    }
}

/// Below this argument the recurrence ratio `2k/x` is large enough that the
/// two-term power series is already exact to double precision.
const SERIES_CUTOFF: f64 = 1e-6;

fn series_j(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    // leading term (x/2)^n / n!, built factor by factor to dodge overflow
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let mut sum = term;
    let q = half * half;
    for m in 1..400 {
        term *= -q / (m as f64 * (m + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() + 1e-300 {
            break;
        }
    }
    sum
}

fn miller_sequence(n_max: usize, x: f64) -> Vec<f64> {
    let mut start = n_max.max(x.ceil() as usize) + MILLER_MARGIN;
    if start % 2 == 1 {
        start += 1;
    }
    let mut out = vec![0.0; n_max + 1];
    let mut above = 0.0_f64; // J_{k+1}
    let mut current = 1e-30_f64; // J_k, seeded at k = start
    let mut norm = 2.0 * current; // start is even and nonzero
    for k in (0..start).rev() {
        let below = (2.0 * (k as f64 + 1.0) / x) * current - above;
        above = current;
        current = below;
        if k <= n_max {
            out[k] = current;
        }
        if k == 0 {
            norm += current;
        } else if k % 2 == 0 {
            norm += 2.0 * current;
        }
        if current.abs() > RESCALE_THRESHOLD {
            above *= RESCALE_FACTOR;
            current *= RESCALE_FACTOR;
            norm *= RESCALE_FACTOR;
            for v in out.iter_mut() {
                *v *= RESCALE_FACTOR;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// Outcome of an identity check: both sides plus their absolute distance.
#[derive(Debug, Clone, Copy)]
pub struct IdentityResidual {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_error: f64,
    /// Truncation order actually used for the infinite sum.
    pub truncation_order: usize,
}

impl IdentityResidual {
    fn new(lhs: Complex64, rhs: Complex64, truncation_order: usize) -> Self {
        Self {
            lhs,
            rhs,
            abs_error: (lhs - rhs).norm(),
            truncation_order,
        }
    }
}

/// Signed lookup into a nonnegative-order table: `J_{-n} = (-1)^n J_n`.
fn j_signed(table: &[f64], n: i64) -> f64 {
    let idx = n.unsigned_abs() as usize;
    if n >= 0 || idx % 2 == 0 {
        table[idx]
    } else {
        -table[idx]
    }
}

fn check_beta_window(beta: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::TAU).contains(&beta) {
        return Err(Error::Domain(format!(
            "modulation depth {beta} outside [0, 2*pi]"
        )));
    }
    Ok(())
}

fn check_truncation(trunc: usize, arg: f64, extra: usize, k: i64) -> Result<()> {
    let min = arg.ceil() as usize + extra;
    if trunc < min {
        return Err(Error::Truncation { got: trunc, min });
    }
    if trunc as i64 + k.abs() > MAX_ORDER as i64 {
        return Err(Error::Domain(format!(
            "truncation {trunc} plus offset {k} exceeds supported Bessel order {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// Checks the pair sum of a pure phase-modulation spectrum:
/// `sum_n J_n(beta) J_{n+k}(beta)` equals 1 for `k = 0` and 0 otherwise.
pub fn identity_pure_pm(beta: f64, k: i32, trunc: usize) -> Result<IdentityResidual> {
    check_beta_window(beta)?;
    check_truncation(trunc, beta, 20, k as i64)?;
    let table = bessel_j_sequence(trunc + k.unsigned_abs() as usize, beta)?;
    let mut lhs = 0.0;
    for n in -(trunc as i64)..=trunc as i64 {
        lhs += j_signed(&table, n) * j_signed(&table, n + k as i64);
    }
    let rhs = if k == 0 { 1.0 } else { 0.0 };
    Ok(IdentityResidual::new(
        Complex64::new(lhs, 0.0),
        Complex64::new(rhs, 0.0),
        trunc,
    ))
}

/// Exact integer power of `-i`.
fn minus_i_pow(k: i32) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Checks the quadratic-phase conversion identity
/// `J_k(2 z sin(phi)) = (-i)^k e^{i k phi} sum_n J_n(z) J_{n+k}(z) e^{2 i n phi}`.
pub fn identity_quadratic(z: f64, phi: f64, k: i32, trunc: usize) -> Result<IdentityResidual> {
    if !(0.0..=6.0).contains(&z) {
        return Err(Error::Domain(format!("argument {z} outside [0, 6]")));
    }
    check_truncation(trunc, z, 30, k as i64)?;
    let lhs = Complex64::new(bessel_j(k, 2.0 * z * phi.sin())?, 0.0);
    let table = bessel_j_sequence(trunc + k.unsigned_abs() as usize, z)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -(trunc as i64)..=trunc as i64 {
        let weight = j_signed(&table, n) * j_signed(&table, n + k as i64);
        sum += weight * Complex64::from_polar(1.0, 2.0 * n as f64 * phi);
    }
    let rhs = minus_i_pow(k) * Complex64::from_polar(1.0, k as f64 * phi) * sum;
    Ok(IdentityResidual::new(lhs, rhs, trunc))
}

/// Checks the two even-sideband sums: total power
/// `sum_{n even} J_n(beta)^2 = (1 + J_0(2 beta)) / 2` and pair overlap
/// `sum_{n even} J_n(beta) J_{n+2}(beta) = J_2(2 beta) / 2`.
pub fn identity_even_sidebands(
    beta: f64,
    trunc: usize,
) -> Result<(IdentityResidual, IdentityResidual)> {
    check_beta_window(beta)?;
    check_truncation(trunc, beta, 20, 2)?;
    let table = bessel_j_sequence(trunc + 2, beta)?;
    let mut power = 0.0;
    let mut pairs = 0.0;
    let mut n = -(trunc as i64);
    if n % 2 != 0 {
        n += 1;
    }
    while n <= trunc as i64 {
        let jn = j_signed(&table, n);
        power += jn * jn;
        pairs += jn * j_signed(&table, n + 2);
        n += 2;
    }
    let power_rhs = 0.5 * (1.0 + bessel_j(0, 2.0 * beta)?);
    let pairs_rhs = 0.5 * bessel_j(2, 2.0 * beta)?;
    Ok((
        IdentityResidual::new(
            Complex64::new(power, 0.0),
            Complex64::new(power_rhs, 0.0),
            trunc,
        ),
        IdentityResidual::new(
            Complex64::new(pairs, 0.0),
            Complex64::new(pairs_rhs, 0.0),
            trunc,
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    /// Independent oracle: power series summed to machine convergence.
    /// Trustworthy for moderate arguments (peak term stays small).
    fn oracle_j(order: i32, x: f64) -> f64 {
        let n = order.unsigned_abs() as usize;
        let mut sign = 1.0;
        if order < 0 && n % 2 == 1 {
            sign = -sign;
        }
        if x < 0.0 && n % 2 == 1 {
            sign = -sign;
        }
        let half = 0.5 * x.abs();
        let mut term = 1.0_f64;
        for k in 1..=n {
            term *= half / k as f64;
        }
        let mut sum = term;
        let q = half * half;
        for m in 1..500 {
            term *= -q / (m as f64 * (m + n) as f64);
            sum += term;
            if term.abs() < 1e-20 * sum.abs().max(1e-30) {
                break;
            }
        }
        sign * sum
    }

    #[test]
    fn zero_argument_is_kronecker_delta() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(-7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn matches_series_oracle_on_grid() {
        for n in 0..=50 {
            for i in 1..=20 {
                let x = 0.5 * i as f64;
                let got = bessel_j(n, x).unwrap();
                let want = oracle_j(n, x);
                assert!(
                    (got - want).abs() <= 1e-12,
                    "J_{n}({x}): got {got}, oracle {want}"
                );
            }
        }
    }

    #[test]
    fn j1_near_its_maximum() {
        // oracle value at the first maximum of J1
        let want = oracle_j(1, 1.8412);
        assert!((want - 0.581865).abs() < 1e-5);
        assert!((bessel_j(1, 1.8412).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn first_zero_of_j0() {
        // bisection on the series oracle brackets the first zero of J0
        let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if oracle_j(0, lo) * oracle_j(0, mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let zero = 0.5 * (lo + hi);
        assert!((zero - 2.4048).abs() < 1e-4);
        assert!(bessel_j(0, 2.4048).unwrap().abs() < 1e-4);
        assert!(bessel_j(0, zero).unwrap().abs() < 1e-12);
    }

    #[test]
    fn large_order_and_argument_stay_accurate() {
        // spot checks near the window corners against the sum rule
        for &x in &[10.0, 25.0, 50.0] {
            let table = bessel_j_sequence(200, x).unwrap();
            let mut total = table[0] * table[0];
            for v in table.iter().skip(1) {
                total += 2.0 * v * v;
            }
            assert!(
                (total - 1.0).abs() < 1e-12,
                "power sum at x={x} off by {}",
                total - 1.0
            );
        }
    }

    #[test]
    fn rejects_out_of_window_inputs() {
        assert!(matches!(bessel_j(201, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(0, 50.5), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(0, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_j_sequence(10, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn pure_pm_identity_examples() {
        let r = identity_pure_pm(1.0, 0, 40).unwrap();
        assert!(r.abs_error < 1e-12, "k=0 residual {}", r.abs_error);
        let r = identity_pure_pm(2.5, 1, 40).unwrap();
        assert!(r.abs_error < 1e-12, "k=1 residual {}", r.abs_error);
        let r = identity_pure_pm(0.0, 3, 20).unwrap();
        assert_eq!(r.lhs, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pure_pm_rejects_small_truncation() {
        assert!(matches!(
            identity_pure_pm(2.0, 0, 10),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn quadratic_identity_examples() {
        let r = identity_quadratic(1.0, FRAC_PI_2, 0, 40).unwrap();
        assert!(r.abs_error < 1e-10);
        assert!((r.lhs.re - oracle_j(0, 2.0)).abs() < 1e-12);

        // sin(phi) = 0 collapses the left side to J_1(0) = 0 and the sum to
        // the pure-PM pair sum
        let r = identity_quadratic(1.7, 0.0, 1, 40).unwrap();
        assert_eq!(r.lhs, Complex64::new(0.0, 0.0));
        assert!(r.rhs.norm() < 1e-12);

        // the dispersive operating point
        let r = identity_quadratic(1.336, 0.76, 1, 40).unwrap();
        assert!((r.lhs.norm() - 0.582).abs() < 1e-3);
        assert!(r.abs_error < 1e-10);
    }

    #[test]
    fn even_sideband_identity_examples() {
        let (power, pairs) = identity_even_sidebands(0.0, 20).unwrap();
        assert!((power.lhs.re - 1.0).abs() < 1e-14);
        assert!((power.rhs.re - 1.0).abs() < 1e-14);
        assert!(pairs.abs_error < 1e-14);

        for &beta in &[1.664, 3.0] {
            let (power, pairs) = identity_even_sidebands(beta, 40).unwrap();
            assert!(power.abs_error < 1e-10);
            assert!(pairs.abs_error < 1e-10);
        }
    }

    #[test]
    fn identity_grid_stays_below_tolerance() {
        let phis = [0.0, 0.3, FRAC_PI_4, 0.76, FRAC_PI_2];
        let mut arg = 0.25;
        while arg <= 4.0 {
            for k in 0..=3 {
                let r = identity_pure_pm(arg, k, 40).unwrap();
                assert!(r.abs_error < 1e-10);
                for &phi in &phis {
                    let r = identity_quadratic(arg, phi, k, 40).unwrap();
                    assert!(
                        r.abs_error < 1e-10,
                        "quadratic residual {} at z={arg}, phi={phi}, k={k}",
                        r.abs_error
                    );
                }
            }
            let (power, pairs) = identity_even_sidebands(arg, 40).unwrap();
            assert!(power.abs_error < 1e-10);
            assert!(pairs.abs_error < 1e-10);
            arg += 0.25;
        }
    }

    #[test]
    fn quadratic_rejects_large_argument() {
        assert!(matches!(
            identity_quadratic(6.5, 0.3, 1, 40),
            Err(Error::Domain(_))
        ));
    }

    proptest! {
        #[test]
        fn reflection_symmetry(n in 0i32..=50, x in 0.1f64..10.0) {
            let plus = bessel_j(n, x).unwrap();
            let minus = bessel_j(-n, x).unwrap();
            let want = if n % 2 == 0 { plus } else { -plus };
            prop_assert!((minus - want).abs() < 1e-14);
        }

        #[test]
        fn three_term_recurrence(n in 1i32..=40, x in 0.5f64..30.0) {
            let jm = bessel_j(n - 1, x).unwrap();
            let jp = bessel_j(n + 1, x).unwrap();
            let jn = bessel_j(n, x).unwrap();
            prop_assert!((jm + jp - 2.0 * n as f64 / x * jn).abs() < 1e-10);
        }
    }

    #[test]
    fn recurrence_on_fixed_grid() {
        for n in 1..=40 {
            for i in 1..=30 {
                let x = 0.5 + i as f64;
                let lhs = bessel_j(n - 1, x).unwrap() + bessel_j(n + 1, x).unwrap();
                let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap();
                assert!((lhs - rhs).abs() < 1e-10, "recurrence at n={n}, x={x}");
            }
        }
    }
}
