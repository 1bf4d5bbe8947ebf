//! Independent reference calculations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const C: f64 = 299_792_458.0;
pub const K_B: f64 = 1.380_649e-23;

/// Perfect-mirror pressure at finite temperature by image-mode expansion.
///
/// With y = 2κa and both polarisations reflecting perfectly, each Matsubara
/// term is 2∫_{y0}^∞ y² Σ_j e^{-jy} dy = 2Σ_j e^{-j y0}(y0²/j + 2y0/j² + 2/j³),
/// y0 = n s with s = 2ξ₁a/c. The n-sum is geometric and done in closed form;
/// the j-sum is truncated at `j_max` (remainder ~ 2/(3 j_max³ s)).
pub fn ideal_pressure_image_sum(gap: f64, temperature: f64, j_max: usize) -> f64 {
    let xi1 = 2.0 * PI * K_B * temperature / HBAR;
    let s = 2.0 * xi1 * gap / C;
    let mut total = 0.0;
    for j in (1..=j_max).rev() {
        let jf = j as f64;
        let q = (-jf * s).exp();
        let one_minus_q = -(-jf * s).exp_m1();
        let sum0 = 1.0 / one_minus_q;
        let sum1 = q / (one_minus_q * one_minus_q);
        let sum2 = q * (1.0 + q) / (one_minus_q * one_minus_q * one_minus_q);
        let full = s * s / jf * sum2 + 2.0 * s / (jf * jf) * sum1 + 2.0 / (jf * jf * jf) * sum0;
        // the n = 0 term carries weight 1/2
        total += full - 1.0 / (jf * jf * jf);
    }
    K_B * temperature / PI / (8.0 * gap.powi(3)) * 2.0 * total
}

/// Taut-string deflection at the nodes of a uniform grid with `n` intervals:
/// −S w'' = q 𝟙[x1,x2], w(0) = w(L) = 0. The load vector integrates the
/// indicator against the hat functions exactly; the tridiagonal system is
/// solved with the Thomas algorithm. Returns (x, w) at the interior nodes.
pub fn string_deflection_fd(
    q: f64,
    x1: f64,
    x2: f64,
    length: f64,
    tension: f64,
    n: usize,
) -> Vec<(f64, f64)> {
    let h = length / n as f64;
    // ∫ hat_i(x) 𝟙[x1,x2] dx, by overlap of [x1,x2] with each half of the hat
    let hat_load = |i: usize| -> f64 {
        let xi = i as f64 * h;
        let rising = |a: f64, b: f64| {
            // ∫_a^b (x − (xi − h))/h dx on the left half
            let (a, b) = (a.max(xi - h), b.min(xi));
            if b <= a {
                0.0
            } else {
                ((b - xi + h).powi(2) - (a - xi + h).powi(2)) / (2.0 * h)
            }
        };
        let falling = |a: f64, b: f64| {
            let (a, b) = (a.max(xi), b.min(xi + h));
            if b <= a {
                0.0
            } else {
                ((xi + h - a).powi(2) - (xi + h - b).powi(2)) / (2.0 * h)
            }
        };
        q * (rising(x1, x2) + falling(x1, x2))
    };
    let m = n - 1;
    let diag = 2.0 * tension / h;
    let off = -tension / h;
    let mut c_prime = vec![0.0; m];
    let mut d_prime = vec![0.0; m];
    for k in 0..m {
        let rhs = hat_load(k + 1);
        if k == 0 {
            c_prime[k] = off / diag;
            d_prime[k] = rhs / diag;
        } else {
            let denom = diag - off * c_prime[k - 1];
            c_prime[k] = off / denom;
            d_prime[k] = (rhs - off * d_prime[k - 1]) / denom;
        }
    }
    let mut w = vec![0.0; m];
    w[m - 1] = d_prime[m - 1];
    for k in (0..m - 1).rev() {
        w[k] = d_prime[k] - c_prime[k] * w[k + 1];
    }
    w.into_iter()
        .enumerate()
        .map(|(k, v)| ((k + 1) as f64 * h, v))
        .collect()
}

/// Deterministic pseudo-random numbers in [0, 1) (SplitMix64).
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Maximum relative deviation between a closed-form profile and the FD nodes,
/// normalised by the largest deflection.
pub fn max_relative_deviation(nodes: &[(f64, f64)], exact: impl Fn(f64) -> f64) -> f64 {
    let scale = nodes.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    nodes
        .iter()
        .map(|&(x, w)| (exact(x) - w).abs() / scale)
        .fold(0.0, f64::max)
}

pub fn logistic(t: f64, mid: f64, width: f64) -> f64 {
    1.0 / (1.0 + (-(t - mid) / width).exp())
}

pub fn two_step_resistance(t: f64) -> f64 {
    1.0 + 19.0 * logistic(t, 0.9, 0.01) + 25.0 * logistic(t, 1.2, 0.01)
}

pub fn sample(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            (t, f(t))
        })
        .collect()
}
