//! In-house Bessel functions J_m and I_m of integer order: power series for
//! small argument, Miller downward recurrence with normalization elsewhere,
//! and exponentially scaled I_m to keep large arguments representable.
//!
//! The complex-argument modified functions cover the factorization branch
//! where t² − αt − λ has a conjugate pair of roots; the principal square
//! root keeps Re z ≥ 0 there, which is the stable side for the scaled
//! recurrence.

use num_complex::Complex64;

/// Crossover between the power series and the Miller recurrence.
const SERIES_LIMIT: f64 = 8.0;
/// Series crossover for the modified functions (no cancellation, series is
/// accurate much further out).
const SERIES_LIMIT_I: f64 = 25.0;

/// J_0 .. J_{m_max} at real x ≥ 0.
pub fn bessel_j_all(m_max: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0, "bessel_j_all needs x >= 0, got {x}");
    if x == 0.0 {
        let mut v = vec![0.0; m_max + 1];
        v[0] = 1.0;
        return v;
    }
    if x <= SERIES_LIMIT {
        (0..=m_max).map(|m| j_series(m, x)).collect()
    } else {
        j_miller(m_max, x)
    }
}

pub fn bessel_j(m: usize, x: f64) -> f64 {
    bessel_j_all(m, x)[m]
}

/// d/dx J_m(x) from the exact recurrence J_m′ = J_{m−1} − (m/x) J_m.
pub fn bessel_j_prime(m: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 1 { 0.5 } else { 0.0 };
    }
    let j = bessel_j_all(m.max(1), x);
    if m == 0 {
        -j[1]
    } else {
        j[m - 1] - (m as f64 / x) * j[m]
    }
}

/// Scaled modified functions e^{-x} I_0..I_{m_max} at real x ≥ 0.
pub fn bessel_i_scaled_all(m_max: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0, "bessel_i_scaled_all needs x >= 0, got {x}");
    if x == 0.0 {
        let mut v = vec![0.0; m_max + 1];
        v[0] = 1.0;
        return v;
    }
    if x <= SERIES_LIMIT_I {
        let scale = (-x).exp();
        (0..=m_max).map(|m| i_series(m, x) * scale).collect()
    } else {
        i_miller_scaled(m_max, x)
    }
}

pub fn bessel_i_scaled(m: usize, x: f64) -> f64 {
    bessel_i_scaled_all(m, x)[m]
}

/// Scaled complex modified functions e^{-Re z} I_0..I_{m_max}(z), Re z ≥ 0.
pub fn bessel_i_scaled_complex_all(m_max: usize, z: Complex64) -> Vec<Complex64> {
    assert!(z.re >= -1e-12, "complex branch expects Re z >= 0, got {z}");
    let r = z.norm();
    if r == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); m_max + 1];
        v[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    if r <= SERIES_LIMIT {
        let scale = Complex64::new((-z.re).exp(), 0.0);
        (0..=m_max).map(|m| i_series_complex(m, z) * scale).collect()
    } else {
        i_miller_scaled_complex(m_max, z)
    }
}

/// Power series J_m(x) = Σ_k (−1)^k (x/2)^{m+2k} / (k! (m+k)!).
fn j_series(m: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / k as f64;
    }
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + m as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-280) || k > 400.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

fn i_series(m: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / k as f64;
    }
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + m as f64));
        sum += term;
        if term < 1e-18 * sum || k > 500.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

fn i_series_complex(m: usize, z: Complex64) -> Complex64 {
    let half = 0.5 * z;
    let q = half * half;
    let mut term = Complex64::new(1.0, 0.0);
    for k in 1..=m {
        term *= half / k as f64;
    }
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / Complex64::new(k * (k + m as f64), 0.0);
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-280) || k > 500.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Starting index for the downward recurrence: comfortably above both the
/// order and the turning point |z|, after which the wanted solution is
/// strongly minimal.
fn miller_start(m_max: usize, r: f64) -> usize {
    let base = r.max(m_max as f64);
    (base + 2.0 * base.sqrt() + 40.0).ceil() as usize
}

/// Downward recurrence for J with the normalization J_0 + 2 J_2 + 2 J_4 … = 1.
fn j_miller(m_max: usize, x: f64) -> Vec<f64> {
    let start = miller_start(m_max, x);
    let mut out = vec![0.0; m_max + 1];
    let mut fp = 0.0f64; // f_{n+1}
    let mut fc = 1e-280f64; // f_n
    let mut norm = 0.0f64;
    for n in (0..=start).rev() {
        let fm = (2.0 * (n as f64 + 1.0) / x) * fc - fp;
        fp = fc;
        fc = fm;
        // fc now holds f_n
        if n <= m_max {
            out[n] = fc;
        }
        if n > 0 && n % 2 == 0 {
            norm += 2.0 * fc;
        }
        if fc.abs() > 1e250 {
            fp /= 1e250;
            fc /= 1e250;
            norm /= 1e250;
            for v in out.iter_mut() {
                *v /= 1e250;
            }
        }
    }
    norm += fc; // f_0
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// Downward recurrence for e^{-x} I_n with normalization I_0 + 2ΣI_k = e^x.
fn i_miller_scaled(m_max: usize, x: f64) -> Vec<f64> {
    let start = miller_start(m_max, x);
    let mut out = vec![0.0; m_max + 1];
    let mut fp = 0.0f64;
    let mut fc = 1e-280f64;
    let mut norm = 0.0f64;
    for n in (0..=start).rev() {
        let fm = (2.0 * (n as f64 + 1.0) / x) * fc + fp;
        fp = fc;
        fc = fm;
        if n <= m_max {
            out[n] = fc;
        }
        if n > 0 {
            norm += 2.0 * fc;
        }
        if fc.abs() > 1e250 {
            fp /= 1e250;
            fc /= 1e250;
            norm /= 1e250;
            for v in out.iter_mut() {
                *v /= 1e250;
            }
        }
    }
    norm += fc;
    // Scaled: e^{-x} I_n = f_n / norm where norm corresponds to e^{x}.
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

fn i_miller_scaled_complex(m_max: usize, z: Complex64) -> Vec<Complex64> {
    let start = miller_start(m_max, z.norm());
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; m_max + 1];
    let mut fp = zero;
    let mut fc = Complex64::new(1e-280, 0.0);
    let mut norm = zero;
    for n in (0..=start).rev() {
        let fm = (2.0 * (n as f64 + 1.0)) / z * fc + fp;
        fp = fc;
        fc = fm;
        if n <= m_max {
            out[n] = fc;
        }
        if n > 0 {
            norm += 2.0 * fc;
        }
        if fc.norm() > 1e250 {
            fp /= 1e250;
            fc /= 1e250;
            norm /= 1e250;
            for v in out.iter_mut() {
                *v /= 1e250;
            }
        }
    }
    norm += fc;
    // The normalization sum equals e^z; the scaled target is e^{z - Re z},
    // a unit-modulus factor.
    let target = Complex64::new(0.0, z.im).exp();
    for v in out.iter_mut() {
        *v = *v / norm * target;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference values from standard tables of Bessel functions.
    #[test]
    fn tabulated_values() {
        let cases_j = [
            (0usize, 1.0, 0.7651976865579666),
            (1, 1.0, 0.44005058574493355),
            (0, 7.3, 0.28821694763501443),
            (3, 2.5, 0.21660039103911358),
            (5, 14.2, 0.21607021744678948),
            (2, 40.0, -0.0010649746823580396),
            (0, 0.05, 0.9993750976494685),
            (8, 3.7, 0.002308906794383349),
        ];
        for (m, x, want) in cases_j {
            let got = bessel_j(m, x);
            assert!(
                (got - want).abs() < 1e-13 * (1.0 + want.abs()),
                "J_{m}({x}) = {got:e}, want {want:e}"
            );
        }
        let cases_i_scaled = [
            (0usize, 1.0, 0.4657596075936404),
            (1, 1.0, 0.20791041534970842),
            (0, 7.3, 0.15041465295234574),
            (3, 2.5, 0.03893869435176338),
            (5, 14.2, 0.043308632123847786),
            (2, 40.0, 0.06015416842151322),
            (0, 0.05, 0.9518240357909766),
            (8, 3.7, 0.00012221164896096494),
            (0, 2000.0, 0.008921178276439672),
        ];
        for (m, x, want) in cases_i_scaled {
            let got = bessel_i_scaled(m, x);
            assert!(
                (got - want).abs() < 1e-12 * (1.0 + want.abs()),
                "e^-x I_{m}({x}) = {got:e}, want {want:e}"
            );
        }
    }

    /// The series and the recurrence must agree where both are accurate.
    #[test]
    fn series_recurrence_overlap() {
        for x in [8.5, 10.0, 12.0] {
            for m in 0..6 {
                let s = j_series(m, x);
                let r = j_miller(m, x)[m];
                assert!((s - r).abs() < 1e-10, "J_{m}({x}): series {s:e} vs miller {r:e}");
            }
        }
        for x in [26.0, 30.0, 34.0] {
            for m in 0..6 {
                let s = i_series(m, x) * (-x).exp();
                let r = i_miller_scaled(m, x)[m];
                assert!(
                    (s - r).abs() < 1e-12 * (s.abs() + 1e-30),
                    "I_{m}({x}): series {s:e} vs miller {r:e}"
                );
            }
        }
    }

    /// Parseval-type identity J_0² + 2 Σ J_k² = 1, independent of the
    /// normalization used inside the recurrence.
    #[test]
    fn sum_of_squares_identity() {
        for x in [0.7, 4.0, 11.0, 33.0] {
            let m_max = miller_start(0, x);
            let j = bessel_j_all(m_max, x);
            let total = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
            assert!((total - 1.0).abs() < 1e-12, "x={x}: {total}");
        }
    }

    /// I_m(iy) = i^m J_m(y) ties the complex branch to the real J path.
    #[test]
    fn complex_reduces_to_j_on_imaginary_axis() {
        for y in [0.9, 5.0, 17.0] {
            let z = Complex64::new(0.0, y);
            let iv = bessel_i_scaled_complex_all(6, z); // scale factor e^{-0} = 1
            let j = bessel_j_all(6, y);
            for m in 0..=6 {
                let expect = Complex64::i().powu(m as u32) * j[m];
                let got = iv[m];
                assert!(
                    (got - expect).norm() < 1e-12,
                    "m={m} y={y}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn complex_matches_real_on_real_axis() {
        for x in [0.4, 3.0, 20.0, 60.0] {
            let zv = bessel_i_scaled_complex_all(4, Complex64::new(x, 0.0));
            let rv = bessel_i_scaled_all(4, x);
            for m in 0..=4 {
                assert!((zv[m].re - rv[m]).abs() < 1e-12 && zv[m].im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_recurrence_against_central_difference() {
        for (m, x) in [(0usize, 2.2), (1, 6.0), (4, 9.5), (2, 30.0)] {
            let h = 1e-6;
            let fd = (bessel_j(m, x + h) - bessel_j(m, x - h)) / (2.0 * h);
            let got = bessel_j_prime(m, x);
            assert!((got - fd).abs() < 1e-8, "J'_{m}({x}): {got} vs fd {fd}");
        }
    }
}
