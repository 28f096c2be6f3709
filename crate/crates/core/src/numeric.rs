//! Fixed-order finite-difference and quadrature rules on uniform grids.
//!
//! Derivatives and cumulative integrals are fourth order in the spacing once
//! the grid has five (four) points, quadrature is sixth order from twelve
//! points; smaller grids fall back to lower-order rules.

use std::ops::Range;

/// Weights of the trapezoid rule with Gregory end corrections.
///
/// Six corrected points per end (exact for quintics) from twelve points up,
/// `h * [3/8, 7/6, 23/24, 1, ..., 1, 23/24, 7/6, 3/8]` (exact for cubics)
/// from six, plain trapezoid below that.
pub fn quadrature_weights(n: usize, h: f64) -> Vec<f64> {
    const END4: [f64; 3] = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
    const END6: [f64; 6] = [
        19087.0 / 60480.0,
        84199.0 / 60480.0,
        18869.0 / 30240.0,
        37621.0 / 30240.0,
        55031.0 / 60480.0,
        61343.0 / 60480.0,
    ];
    let mut w = vec![h; n];
    let end: &[f64] = match n {
        0..=5 => &[0.5],
        6..=11 => &END4,
        _ => &END6,
    };
    for (j, c) in end.iter().enumerate() {
        w[j] = c * h;
        w[n - 1 - j] = c * h;
    }
    w
}

/// Indices read by [`derivative`] when estimating the slope at `i`.
pub fn derivative_stencil(i: usize, n: usize) -> Range<usize> {
    if n < 5 {
        return match i {
            0 => 0..3,
            i if i + 1 == n => n - 3..n,
            i => i - 1..i + 2,
        };
    }
    match i {
        0 | 1 => 0..5,
        i if i + 2 >= n => n - 5..n,
        i => i - 2..i + 3,
    }
}

/// First derivative of a uniformly sampled function.
///
/// Centered five-point differences in the interior, five-point one-sided
/// stencils for the two outermost points on each side.
pub fn derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3, "derivative needs at least 3 samples");
    (0..n).map(|i| derivative_at(f, i, h)).collect()
}

/// Slope at `i` using the stencil of [`derivative_stencil`]. Written in
/// differences, so constant samples give exactly zero.
pub fn derivative_at(f: &[f64], i: usize, h: f64) -> f64 {
    let n = f.len();
    if n < 5 {
        return if i == 0 {
            (4.0 * (f[1] - f[0]) - (f[2] - f[0])) / (2.0 * h)
        } else if i + 1 == n {
            (4.0 * (f[n - 1] - f[n - 2]) - (f[n - 1] - f[n - 3])) / (2.0 * h)
        } else {
            (f[i + 1] - f[i - 1]) / (2.0 * h)
        };
    }
    let d = 12.0 * h;
    let forward = |j: usize| {
        let g = |k: usize| f[k] - f[j];
        match j {
            0 => 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4),
            _ => -3.0 * g(0) + 18.0 * g(2) - 6.0 * g(3) + g(4),
        }
    };
    let backward = |j: usize| {
        let g = |k: usize| f[n - 1 - k] - f[n - 1 - j];
        match j {
            0 => 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4),
            _ => -3.0 * g(0) + 18.0 * g(2) - 6.0 * g(3) + g(4),
        }
    };
    match i {
        0 | 1 => forward(i) / d,
        i if i + 2 >= n => -backward(n - 1 - i) / d,
        i => (8.0 * (f[i + 1] - f[i - 1]) - (f[i + 2] - f[i - 2])) / d,
    }
}

/// Running integral `I_j = ∫_{x_0}^{x_j} f`, with `I_0 = 0`.
///
/// Each panel integrates the cubic through the four nearest samples.
pub fn cumulative_integral(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    let mut acc = 0.0;
    for i in 0..n - 1 {
        let panel = if n < 4 {
            0.5 * h * (f[i] + f[i + 1])
        } else if i == 0 {
            h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
        } else if i == n - 2 {
            h / 24.0 * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1])
        } else {
            h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2])
        };
        acc += panel;
        out.push(acc);
    }
    out
}
