//! Finite-difference machinery: 5-point central stencils on a callable, Richardson
//! extrapolation over those stencils, and Fornberg weights for sampled (possibly
//! non-uniform) data.

use crate::curve::Domain;
use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Highest derivative order the 5-point stencils support.
pub const MAX_STENCIL_ORDER: usize = 4;

/// Central 5-point weights on offsets `-2h, -h, 0, h, 2h`, indexed by derivative order.
/// Orders 1–2 are accurate to O(h⁴), orders 3–4 to O(h²).
const STENCIL_5: [[f64; 5]; 5] = [
    [0.0, 0.0, 1.0, 0.0, 0.0],
    [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0],
    [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
    [-0.5, 1.0, 0.0, -1.0, 0.5],
    [1.0, -4.0, 6.0, -4.0, 1.0],
];

/// Leading truncation order of the 5-point stencil for a derivative order.
fn truncation_order(order: usize) -> i32 {
    if order <= 2 {
        4
    } else {
        2
    }
}

fn check(order: usize, step: f64) -> Result<()> {
    if order > MAX_STENCIL_ORDER {
        return Err(Error::UnsupportedOrder {
            order,
            max: MAX_STENCIL_ORDER,
        });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidStep(step));
    }
    Ok(())
}

/// 5-point central-difference estimate of the `order`-th derivative of `f` at `s`.
///
/// No domain is checked; see [`finite_difference`] for the domain-aware variant.
pub fn central_difference<F>(f: F, s: f64, order: usize, step: f64) -> Result<Vec3>
where
    F: Fn(f64) -> Vec3,
{
    check(order, step)?;
    if order == 0 {
        return Ok(f(s));
    }
    let w = &STENCIL_5[order];
    let acc: Vec3 = (0..5)
        .filter(|&i| w[i] != 0.0)
        .map(|i| f(s + (i as f64 - 2.0) * step) * w[i])
        .sum();
    Ok(acc / step.powi(order as i32))
}

/// Domain-aware 5-point central difference. Every stencil node must lie inside `domain`.
pub fn finite_difference<F>(f: F, domain: Domain, s: f64, order: usize, step: f64) -> Result<Vec3>
where
    F: Fn(f64) -> Vec3,
{
    check(order, step)?;
    domain.require_stencil(s, 2.0 * step)?;
    central_difference(f, s, order, step)
}

/// Richardson-extrapolated 5-point estimate using steps `h, 2h, …, 2^levels·h`.
///
/// Each level removes the leading even-power error term, so `levels = 1` turns the O(h²)
/// third-derivative stencil into an O(h⁴) estimate. The outermost node sits at
/// `s ± 2^(levels+1)·h`.
pub fn richardson<F>(f: F, s: f64, order: usize, step: f64, levels: u32) -> Result<Vec3>
where
    F: Fn(f64) -> Vec3,
{
    check(order, step)?;
    let mut table: Vec<Vec3> = (0..=levels)
        .map(|j| central_difference(&f, s, order, step * f64::from(1u32 << j)))
        .collect::<Result<_>>()?;
    let mut p = truncation_order(order);
    while table.len() > 1 {
        let factor = 2f64.powi(p);
        table = table
            .windows(2)
            .map(|w| (w[0] * factor - w[1]) / (factor - 1.0))
            .collect();
        p += 2;
    }
    Ok(table[0])
}

/// Half-width of the interval touched by [`richardson`].
pub fn richardson_reach(step: f64, levels: u32) -> f64 {
    2.0 * step * f64::from(1u32 << levels)
}

/// Finite-difference weights for derivatives `0..=max_order` at `x0` over arbitrary
/// distinct `nodes` (Fornberg's recursion). Returns `weights[order][node]`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    if n == 0 {
        return c;
    }
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Start index of the `width`-node window used at sample `i` of `len` samples: centred
/// when possible, shifted inward at the ends.
pub fn window_start(i: usize, len: usize, width: usize) -> usize {
    debug_assert!(width <= len);
    let half = width / 2;
    i.saturating_sub(half).min(len - width)
}

/// Derivative estimates of orders `1..=max_order` at every sample of a sampled series,
/// using `width`-node Fornberg windows. Returns `out[i][order - 1]`.
pub fn sampled_derivatives<T>(
    s: &[f64],
    values: &[T],
    max_order: usize,
    width: usize,
) -> Result<Vec<Vec<T>>>
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    if s.len() != values.len() {
        return Err(Error::InvalidSamples(format!(
            "{} parameters but {} values",
            s.len(),
            values.len()
        )));
    }
    if s.len() < width {
        return Err(Error::InsufficientSamples {
            needed: width,
            got: s.len(),
        });
    }
    Ok((0..s.len())
        .map(|i| {
            let start = window_start(i, s.len(), width);
            let nodes = &s[start..start + width];
            let w = fornberg_weights(s[i], nodes, max_order);
            (1..=max_order)
                .map(|k| {
                    let mut acc = values[start] * w[k][0];
                    for j in 1..width {
                        acc = acc + values[start + j] * w[k][j];
                    }
                    acc
                })
                .collect()
        })
        .collect())
}

/// Weights for derivatives `0..=max_order` at `x0` of the degree-`degree` least-squares
/// polynomial through `(nodes_j, y_j)`. Returns `weights[order][node]`.
///
/// Built from polynomials orthogonal on the nodes (Stieltjes recurrence in coordinates
/// centred on `x0` and scaled to the window), which keeps the weights accurate for wide
/// windows. With `degree + 1 == nodes.len()` this reproduces the interpolating stencil.
pub fn least_squares_weights(x0: f64, nodes: &[f64], degree: usize, max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let scale = nodes
        .iter()
        .map(|x| (x - x0).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let u: Vec<f64> = nodes.iter().map(|x| (x - x0) / scale).collect();
    let degree = degree.min(n.saturating_sub(1));
    let mut w = vec![vec![0.0; n]; max_order + 1];
    // p_k at the nodes, and the derivatives of p_k at u = 0.
    let mut prev = vec![0.0; n];
    let mut cur = vec![1.0; n];
    let mut prev_at0 = vec![0.0; max_order + 1];
    let mut cur_at0 = vec![0.0; max_order + 1];
    cur_at0[0] = 1.0;
    let mut prev_norm = 1.0;
    for k in 0..=degree {
        let norm: f64 = cur.iter().map(|p| p * p).sum();
        if norm == 0.0 {
            break;
        }
        for (m, row) in w.iter_mut().enumerate() {
            for j in 0..n {
                row[j] += cur[j] * cur_at0[m] / norm;
            }
        }
        if k == degree {
            break;
        }
        let a = u.iter().zip(&cur).map(|(x, p)| x * p * p).sum::<f64>() / norm;
        let b = if k == 0 { 0.0 } else { norm / prev_norm };
        let next: Vec<f64> = (0..n)
            .map(|j| (u[j] - a) * cur[j] - b * prev[j])
            .collect();
        let next_at0: Vec<f64> = (0..=max_order)
            .map(|m| {
                let lower = if m == 0 { 0.0 } else { m as f64 * cur_at0[m - 1] };
                lower - a * cur_at0[m] - b * prev_at0[m]
            })
            .collect();
        prev = std::mem::replace(&mut cur, next);
        prev_at0 = std::mem::replace(&mut cur_at0, next_at0);
        prev_norm = norm;
    }
    for (m, row) in w.iter_mut().enumerate() {
        let f = scale.powi(m as i32);
        for x in row.iter_mut() {
            *x /= f;
        }
    }
    w
}

/// Derivative estimates of orders `1..=max_order` at every sample, from local
/// least-squares polynomials of degree `degree` over `width`-node windows.
/// Returns `out[i][order - 1]`.
pub fn smoothed_derivatives<T>(
    s: &[f64],
    values: &[T],
    max_order: usize,
    width: usize,
    degree: usize,
) -> Result<Vec<Vec<T>>>
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    if s.len() != values.len() {
        return Err(Error::InvalidSamples(format!(
            "{} parameters but {} values",
            s.len(),
            values.len()
        )));
    }
    if s.len() < width || width < 2 {
        return Err(Error::InsufficientSamples {
            needed: width.max(2),
            got: s.len(),
        });
    }
    Ok((0..s.len())
        .map(|i| {
            let start = window_start(i, s.len(), width);
            let w = least_squares_weights(s[i], &s[start..start + width], degree, max_order);
            // Differencing against the centre sample keeps constants exactly annihilated,
            // which the fitted weights only do up to rounding.
            let centre = values[i] * -1.0;
            (1..=max_order)
                .map(|k| {
                    let mut acc = (values[start] + centre) * w[k][0];
                    for j in 1..width {
                        acc = acc + (values[start + j] + centre) * w[k][j];
                    }
                    acc
                })
                .collect()
        })
        .collect())
}

/// First derivative of a sampled scalar series by local least-squares polynomials.
pub fn smoothed_slopes(s: &[f64], values: &[f64], width: usize, degree: usize) -> Result<Vec<f64>> {
    Ok(smoothed_derivatives(s, values, 1, width, degree)?
        .into_iter()
        .map(|d| d[0])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cubic(s: f64) -> Vec3 {
        Vec3::new(s, s * s, s * s * s)
    }

    #[test]
    fn polynomial_second_derivative() {
        let d = central_difference(cubic, 1.0, 2, 1e-3).unwrap();
        assert_abs_diff_eq!(d.x, 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(d.y, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(d.z, 6.0, epsilon = 1e-6);
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let f = |_s: f64| Vec3::new(3.0, -1.0, 2.5);
        for order in 1..=4 {
            let d = central_difference(f, 0.4, order, 1e-2).unwrap();
            assert!(d.max_abs() < 1e-12 / 1e-2f64.powi(order as i32), "order {order}");
        }
    }

    #[test]
    fn rejects_bad_order_and_step() {
        assert!(matches!(
            central_difference(cubic, 0.0, 5, 1e-3),
            Err(Error::UnsupportedOrder { order: 5, .. })
        ));
        assert!(matches!(
            central_difference(cubic, 0.0, 1, 0.0),
            Err(Error::InvalidStep(_))
        ));
        assert!(matches!(
            central_difference(cubic, 0.0, 1, f64::NAN),
            Err(Error::InvalidStep(_))
        ));
    }

    #[test]
    fn stencil_must_fit_domain() {
        let dom = Domain::new(0.0, 1.0).unwrap();
        assert!(finite_difference(cubic, dom, 0.5, 1, 0.1).is_ok());
        assert!(matches!(
            finite_difference(cubic, dom, 0.05, 1, 0.1),
            Err(Error::StencilOutOfDomain { .. })
        ));
    }

    #[test]
    fn convergence_orders_match_stencil_design() {
        // sin has all derivatives bounded; halving h should cut the error by 2^p.
        let f = |s: f64| Vec3::new(s.sin(), 0.0, 0.0);
        let exact = [0.7f64.cos(), -0.7f64.sin(), -0.7f64.cos(), 0.7f64.sin()];
        for (order, want_p) in [(1, 4.0), (2, 4.0), (3, 2.0), (4, 2.0)] {
            let e = |h: f64| (central_difference(f, 0.7, order, h).unwrap().x - exact[order - 1]).abs();
            let p = (e(0.1) / e(0.05)).log2();
            assert!((p - want_p).abs() < 0.2, "order {order}: observed {p}");
        }
    }

    #[test]
    fn richardson_raises_accuracy() {
        let f = |s: f64| Vec3::new(s.sin(), 0.0, 0.0);
        let exact = -(0.7f64.cos());
        let plain = (central_difference(f, 0.7, 3, 0.05).unwrap().x - exact).abs();
        let extrap = (richardson(f, 0.7, 3, 0.05, 2).unwrap().x - exact).abs();
        assert!(extrap < plain * 1e-3, "plain {plain:e} extrapolated {extrap:e}");
        assert_eq!(richardson_reach(0.05, 2), 0.4);
    }

    #[test]
    fn fornberg_reproduces_uniform_stencils() {
        let nodes = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let w = fornberg_weights(0.0, &nodes, 4);
        for order in 1..=4 {
            for j in 0..5 {
                assert_abs_diff_eq!(w[order][j], STENCIL_5[order][j], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn fornberg_is_exact_on_polynomials_nonuniform() {
        let nodes = [0.0, 0.13, 0.31, 0.5, 0.72, 0.9, 1.2];
        let x0 = 0.31;
        let w = fornberg_weights(x0, &nodes, 3);
        let p = |x: f64| 2.0 * x.powi(5) - x.powi(3) + 4.0 * x;
        let dp = [
            10.0 * x0.powi(4) - 3.0 * x0 * x0 + 4.0,
            40.0 * x0.powi(3) - 6.0 * x0,
            120.0 * x0 * x0 - 6.0,
        ];
        for k in 1..=3 {
            let est: f64 = nodes.iter().zip(&w[k]).map(|(x, c)| c * p(*x)).sum();
            assert_abs_diff_eq!(est, dp[k - 1], epsilon = 1e-8);
        }
    }

    #[test]
    fn sampled_windows_cover_edges() {
        assert_eq!(window_start(0, 10, 7), 0);
        assert_eq!(window_start(5, 10, 7), 2);
        assert_eq!(window_start(9, 10, 7), 3);
        let s: Vec<f64> = (0..9).map(|i| i as f64 * 0.1).collect();
        let v: Vec<f64> = s.iter().map(|x| x * x * x).collect();
        let d = sampled_derivatives(&s, &v, 3, 7).unwrap();
        for (i, x) in s.iter().enumerate() {
            assert_abs_diff_eq!(d[i][0], 3.0 * x * x, epsilon = 1e-10);
            assert_abs_diff_eq!(d[i][1], 6.0 * x, epsilon = 1e-8);
            assert_abs_diff_eq!(d[i][2], 6.0, epsilon = 1e-6);
        }
        assert!(matches!(
            sampled_derivatives(&s[..5], &v[..5], 3, 7),
            Err(Error::InsufficientSamples { needed: 7, got: 5 })
        ));
    }

    #[test]
    fn least_squares_slope_is_exact_on_low_degree() {
        let nodes: Vec<f64> = (0..15).map(|i| 0.1 * i as f64 + 0.003 * (i * i) as f64).collect();
        let x0 = nodes[4];
        let w = &least_squares_weights(x0, &nodes, 4, 1)[1];
        let slope: f64 = w
            .iter()
            .zip(&nodes)
            .map(|(w, x)| w * (2.0 - x + 0.5 * x.powi(3) - x.powi(4)))
            .sum();
        assert_abs_diff_eq!(slope, -1.0 + 1.5 * x0 * x0 - 4.0 * x0.powi(3), epsilon = 1e-11);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn least_squares_matches_interpolation_when_square() {
        let nodes = [0.0, 0.1, 0.25, 0.3, 0.5];
        let ls = least_squares_weights(0.25, &nodes, 4, 3);
        let fb = fornberg_weights(0.25, &nodes, 3);
        for k in 0..=3 {
            for (a, b) in ls[k].iter().zip(&fb[k]) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-8 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn smoothed_slopes_of_a_line() {
        let s: Vec<f64> = (0..30).map(|i| i as f64 * 0.2).collect();
        let y: Vec<f64> = s.iter().map(|x| 3.0 * x - 1.0).collect();
        for d in smoothed_slopes(&s, &y, 21, 3).unwrap() {
            assert_abs_diff_eq!(d, 3.0, epsilon = 1e-12);
        }
        assert!(smoothed_slopes(&s[..5], &y[..5], 21, 3).is_err());
    }
}
