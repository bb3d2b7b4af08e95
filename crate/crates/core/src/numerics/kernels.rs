//! Cancellation-free special functions used by the closed-form dwell times
//! and by the interior wave functions.
//!
//! The `*_signed` variants take a signed squared argument `s = x²` and are
//! entire in `s`: for `s ≥ 0` they evaluate the hyperbolic function of
//! `√s`, for `s < 0` the trigonometric one of `√(−s)`. This is exactly the
//! substitution `κ → iκ'` that carries the under-barrier formulas over the
//! barrier top without a second formula set.

/// Below this |x| the two-term Taylor forms of `sinhc`/`sinc` are exact to
/// double precision.
pub const SERIES_THRESHOLD: f64 = 1e-3;

/// Below this |x| the odd remainders `sinh x − x` and `x − sin x` are summed
/// as series; above it the direct difference loses at most a factor ~7.
const REMAINDER_SERIES_LIMIT: f64 = 1.0;

/// sinh(x)/x.
pub fn sinhc(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 + x2 / 6.0 * (1.0 + x2 / 20.0)
    } else {
        x.sinh() / x
    }
}

/// sin(x)/x.
pub fn sinc(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// Sum of x³/3! · (1 + σ x²/(4·5) + x⁴/(4·5·6·7) …) with σ = +1 (sinh) or
/// −1 (sin), divided by x³. Valid for |x| ≤ 1.
fn odd_remainder_over_cube(x2: f64, sign: f64) -> f64 {
    let mut term = 1.0 / 6.0;
    let mut sum = term;
    let mut n = 3.0;
    loop {
        term *= sign * x2 / ((n + 1.0) * (n + 2.0));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        n += 2.0;
    }
    sum
}

/// sinh(x) − x without cancellation.
pub fn sinh_minus(x: f64) -> f64 {
    if x.abs() < REMAINDER_SERIES_LIMIT {
        x * x * x * odd_remainder_over_cube(x * x, 1.0)
    } else {
        x.sinh() - x
    }
}

/// x − sin(x) without cancellation.
pub fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < REMAINDER_SERIES_LIMIT {
        x * x * x * odd_remainder_over_cube(x * x, -1.0)
    } else {
        x - x.sin()
    }
}

/// cosh(√s), continued to cos(√−s) for negative `s`.
pub fn cosh_signed(s: f64) -> f64 {
    if s >= 0.0 {
        s.sqrt().cosh()
    } else {
        (-s).sqrt().cos()
    }
}

/// sinh(√s)/√s, continued to sin(√−s)/√−s.
pub fn sinhc_signed(s: f64) -> f64 {
    if s >= 0.0 {
        sinhc(s.sqrt())
    } else {
        sinc((-s).sqrt())
    }
}

/// (sinh x − x)/x³ with x = √s, continued to (x − sin x)/x³ for s < 0.
/// Equals 1/6 at s = 0.
pub fn sinh_minus_cubed_signed(s: f64) -> f64 {
    if s.abs() < REMAINDER_SERIES_LIMIT {
        return odd_remainder_over_cube(s.abs(), s.signum());
    }
    if s > 0.0 {
        let x = s.sqrt();
        sinh_minus(x) / (x * x * x)
    } else {
        let x = (-s).sqrt();
        x_minus_sin(x) / (x * x * x)
    }
}

/// Truncated series of [`sinh_minus_cubed_signed`] through s², i.e. through
/// (κd)⁴. Used for the degenerate E ≈ V₀ point.
pub fn sinh_minus_cubed_series(s: f64) -> f64 {
    1.0 / 6.0 + s / 120.0 + s * s / 5040.0
}

/// sinhc_signed through s²: 1 + s/6 + s²/120.
pub fn sinhc_series(s: f64) -> f64 {
    1.0 + s / 6.0 + s * s / 120.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Reference values from 40-digit arithmetic.
    const REFS: &[(f64, f64, f64, f64, f64)] = &[
        // x, sinh x / x, sin x / x, sinh x - x, x - sin x
        (1e-5, 1.0000000000166666667, 0.99999999998333333333, 1.666666666675e-16, 1.6666666666583333333e-16),
        (1e-3, 1.000000166666675, 0.99999983333334166667, 1.6666667500000019841e-10, 1.6666665833333353175e-10),
        (0.01, 1.0000166667500001984, 0.99998333341666646825, 1.6666750000198412974e-7, 1.6666583333531745756e-7),
        (0.3, 1.0150676448238087299, 0.98506735553779858368, 0.0045202934471426189584, 0.0044797933386604248947),
        (1.0, 1.1752011936438014569, 0.84147098480789650665, 0.17520119364380145688, 0.15852901519210349335),
        (2.5, 2.4200817924159149286, 0.23938885764158259762, 3.5502044810397873215, 1.9015278558960435059),
        (20.0, 12129129.885244756898, 0.045647262536381382719, 242582577.70489513795, 19.087054749272372346),
    ];

    #[test]
    fn reference_values() {
        for &(x, shc, sc, shm, xms) in REFS {
            assert!(rel(sinhc(x), shc) < 2e-15, "sinhc({x})");
            assert!(rel(sinc(x), sc) < 2e-15, "sinc({x})");
            assert!(rel(sinh_minus(x), shm) < 4e-15, "sinh_minus({x})");
            assert!(rel(x_minus_sin(x), xms) < 4e-15, "x_minus_sin({x})");
            // odd / even symmetry
            assert_eq!(sinhc(-x), sinhc(x));
            assert_eq!(sinh_minus(-x), -sinh_minus(x));
        }
    }

    #[test]
    fn small_argument_leading_terms() {
        assert_eq!(sinhc(0.0), 1.0);
        assert_eq!(sinc(0.0), 1.0);
        let x = 1e-5;
        assert!(rel(sinh_minus(x), x * x * x / 6.0) < 1e-9);
        assert!(rel(x_minus_sin(x), x * x * x / 6.0) < 1e-9);
        assert_eq!(sinh_minus_cubed_signed(0.0), 1.0 / 6.0);
    }

    #[test]
    fn matches_naive_forms_away_from_zero() {
        let mut x = 0.1;
        while x <= 20.0 {
            assert!(rel(sinhc(x), x.sinh() / x) < 1e-12);
            assert!(rel(sinc(x), x.sin() / x) < 1e-12 || (x.sin() / x).abs() < 1e-3);
            assert!(rel(sinh_minus(x), x.sinh() - x) < 1e-12);
            assert!(rel(x_minus_sin(x), x - x.sin()) < 1e-12);
            x += 0.0373;
        }
    }

    #[test]
    fn signed_forms_continue_across_zero() {
        for &s in &[1e-12, 1e-6, 0.5, 0.99, 1.01, 4.0, 50.0] {
            let x = f64::sqrt(s);
            assert!(rel(cosh_signed(s), x.cosh()) < 1e-15);
            assert!(rel(cosh_signed(-s), x.cos()) < 1e-15);
            assert!(rel(sinhc_signed(-s), sinc(x)) < 1e-15);
            assert!(rel(sinh_minus_cubed_signed(s), sinh_minus(x) / (x * x * x)) < 1e-14);
            assert!(rel(sinh_minus_cubed_signed(-s), x_minus_sin(x) / (x * x * x)) < 1e-14);
        }
        let lo = sinh_minus_cubed_signed(-1e-9);
        let hi = sinh_minus_cubed_signed(1e-9);
        assert!((hi - lo).abs() < 2e-11);
    }

    #[test]
    fn truncated_series_agree_near_zero() {
        for &s in &[-1e-6, -1e-9, 0.0, 1e-9, 1e-6] {
            assert!(rel(sinh_minus_cubed_series(s), sinh_minus_cubed_signed(s)) < 1e-16 + 1e-15);
            assert!(rel(sinhc_series(s), sinhc_signed(s)) < 1e-15);
        }
    }
}
