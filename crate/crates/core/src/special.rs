//! Associated Laguerre polynomials and displaced-Fock matrix elements.

use crate::operator::{Operator, C64};

/// `L_n^k(x)` from the three-term recurrence
/// `(m+1) L_{m+1} = (2m + 1 + k - x) L_m - (m + k) L_{m-1}`.
pub fn laguerre_assoc(n: usize, k: usize, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0 + k - x) * cur - (m + k) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `⟨m|D(d)|n⟩` for a real displacement `d`, `D(d) = exp(d (a† - a))`.
///
/// For `n ≥ m`: `sqrt(m!/n!) e^{-d²/2} (-d)^{n-m} L_m^{n-m}(d²)`;
/// for `m > n`: `sqrt(n!/m!) e^{-d²/2} d^{m-n} L_n^{m-n}(d²)`.
pub fn displaced_overlap(m: usize, n: usize, d: f64) -> f64 {
    if d == 0.0 {
        return if m == n { 1.0 } else { 0.0 };
    }
    let x = d * d;
    let (lo, hi, base) = if n >= m { (m, n, -d) } else { (n, m, d) };
    let k = hi - lo;
    let log_mag = 0.5 * (ln_factorial(lo) - ln_factorial(hi)) - 0.5 * x + k as f64 * base.abs().ln();
    let sign = if base < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * log_mag.exp() * laguerre_assoc(lo, k, x)
}

const RESCALE: f64 = 1e150;

/// Full table `⟨m|D(β)|n⟩`, `m, n < dim`, for complex `β`, as an operator.
///
/// Uses the normalized functions `f_m^{(k)}(x) = sqrt(m!/(m+k)!) x^{k/2}
/// e^{-x/2} L_m^{(k)}(x)` (bounded by one), advanced by their own
/// recurrence with a running log scale so large `|β|` neither overflows nor
/// loses the leading underflowed terms.
pub fn displacement_elements(beta: C64, dim: usize) -> Operator {
    let mut out = Operator::zeros(dim);
    let x = beta.norm_sqr();
    if x == 0.0 {
        return Operator::identity(dim);
    }
    let unit = beta / beta.norm();
    let minus_unit_conj = -unit.conj();
    let ln_x = x.ln();
    let mut up_phase = C64::new(1.0, 0.0);
    let mut down_phase = C64::new(1.0, 0.0);
    for k in 0..dim {
        let kf = k as f64;
        let mut log_scale = 0.5 * kf * ln_x - 0.5 * x - 0.5 * ln_factorial(k);
        let mut prev = 0.0f64;
        let mut cur = 1.0f64;
        for m in 0..dim - k {
            let value = cur * log_scale.exp();
            out.set(m + k, m, up_phase * value);
            if k > 0 {
                out.set(m, m + k, down_phase * value);
            }
            let mf = m as f64;
            let next = ((2.0 * mf + kf + 1.0 - x) * cur - (mf * (mf + kf)).sqrt() * prev)
                / ((mf + 1.0) * (mf + kf + 1.0)).sqrt();
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE {
                cur /= RESCALE;
                prev /= RESCALE;
                log_scale += RESCALE.ln();
            }
        }
        up_phase *= unit;
        down_phase *= minus_unit_conj;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_low_orders() {
        for &x in &[0.0, 0.3, 2.5, 11.0] {
            for k in 0..5 {
                assert_eq!(laguerre_assoc(0, k, x), 1.0);
            }
            assert!((laguerre_assoc(1, 0, x) - (1.0 - x)).abs() < 1e-14);
            assert!((laguerre_assoc(1, 3, x) - (4.0 - x)).abs() < 1e-14);
            let l2 = 0.5 * (x * x - 4.0 * x + 2.0);
            assert!((laguerre_assoc(2, 0, x) - l2).abs() < 1e-12);
        }
    }

    /// Explicit coefficient sum `Σ_i (-1)^i C(n+k, n-i) x^i / i!`, evaluated in
    /// exact rationals for rational `x = p/q`.
    fn laguerre_exact(n: u64, k: u64, p: i128, q: i128) -> (i128, i128) {
        fn binom(a: u64, b: u64) -> i128 {
            let mut r: i128 = 1;
            for i in 0..b {
                r = r * (a - i) as i128 / (i + 1) as i128;
            }
            r
        }
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let (mut num, mut den) = (0i128, 1i128);
        let mut fact: i128 = 1;
        for i in 0..=n {
            if i > 0 {
                fact *= i as i128;
            }
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let tn = sign * binom(n + k, n - i) * p.pow(i as u32);
            let td = fact * q.pow(i as u32);
            num = num * td + tn * den;
            den *= td;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
        (num, den)
    }

    #[test]
    fn laguerre_against_exact_rationals() {
        // L_3^2(3/2)
        let (num, den) = laguerre_exact(3, 2, 3, 2);
        let exact = num as f64 / den as f64;
        assert!((laguerre_assoc(3, 2, 1.5) - exact).abs() < 1e-13, "{} vs {}", laguerre_assoc(3, 2, 1.5), exact);
        assert!((exact - 0.0625).abs() < 1e-15);

        for n in 0..9u64 {
            for k in 0..6u64 {
                for &(p, q) in &[(1i128, 3i128), (7, 2), (13, 1)] {
                    let (num, den) = laguerre_exact(n, k, p, q);
                    let exact = num as f64 / den as f64;
                    let got = laguerre_assoc(n as usize, k as usize, p as f64 / q as f64);
                    assert!((got - exact).abs() <= 1e-11 * exact.abs().max(1.0), "n={n} k={k} x={p}/{q}");
                }
            }
        }
    }

    #[test]
    fn overlap_vacuum_and_symmetry() {
        let d = 2.0 * 0.5;
        assert!((displaced_overlap(0, 0, d) - (-0.5f64).exp()).abs() < 1e-15);
        for m in 0..13 {
            for n in 0..13 {
                let sign = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
                let a = displaced_overlap(m, n, 1.3);
                let b = displaced_overlap(n, m, 1.3);
                assert!((a - sign * b).abs() < 1e-14);
            }
        }
        assert_eq!(displaced_overlap(3, 3, 0.0), 1.0);
        assert_eq!(displaced_overlap(2, 3, 0.0), 0.0);
    }

    #[test]
    fn table_matches_closed_form_for_real_beta() {
        for &d in &[-2.4, -0.4, 0.7, 3.0] {
            let t = displacement_elements(C64::new(d, 0.0), 25);
            for m in 0..25 {
                for n in 0..25 {
                    let e = t.get(m, n);
                    assert!(e.im.abs() < 1e-15);
                    assert!((e.re - displaced_overlap(m, n, d)).abs() < 1e-11, "m={m} n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn table_survives_large_displacement() {
        // e^{-x/2} underflows at |β|² = 1600; every entry must stay finite.
        let t = displacement_elements(C64::new(0.0, 40.0), 60);
        assert!((0..60).all(|m| (0..60).all(|n| t.get(m, n).norm().is_finite())));
        let t = displacement_elements(C64::new(3.0, -4.0), 200);
        for n in [0usize, 3, 8] {
            let col: f64 = (0..200).map(|m| t.get(m, n).norm_sqr()).sum();
            assert!((col - 1.0).abs() < 1e-10, "column {n} norm {col}");
        }
    }
}
