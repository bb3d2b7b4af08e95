/// Gregory end-correction coefficients |G_2|, |G_3|, ...
const GREGORY: [f64; 7] = [
    1.0 / 12.0,
    1.0 / 24.0,
    19.0 / 720.0,
    3.0 / 160.0,
    863.0 / 60480.0,
    275.0 / 24192.0,
    33953.0 / 3628800.0,
];

/// Highest difference order supported by [`gregory_weights`].
pub const MAX_ORDER: usize = GREGORY.len();

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Weights of the Gregory rule with differences up to `order` on `points`
/// equally spaced nodes of spacing `h`: the trapezoid rule plus end
/// corrections, exact for polynomials of degree ≤ `order`.
pub fn gregory_weights(points: usize, h: f64, order: usize) -> Vec<f64> {
    assert!(order <= MAX_ORDER, "Gregory order {order} not tabulated");
    assert!(points > 2 * order + 1, "too few points for Gregory order {order}");
    let n = points - 1;
    let mut w = vec![h; points];
    w[0] = 0.5 * h;
    w[n] = 0.5 * h;
    for k in 1..=order {
        let g = GREGORY[k - 1] * h;
        for i in 0..=k {
            let c = binomial(k, i);
            let alt = if i % 2 == 0 { 1.0 } else { -1.0 };
            // ∇^k f_n = Σ (−1)^i C(k,i) f_{n−i}
            w[n - i] -= g * alt * c;
            // (−1)^k Δ^k f_0 = Σ (−1)^i C(k,i) f_i
            w[i] -= g * alt * c;
        }
    }
    w
}
