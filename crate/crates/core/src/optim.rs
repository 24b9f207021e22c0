//! Derivative-free one-dimensional maximisation.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `tol`. Endpoints are also evaluated, so a
/// maximum sitting on the boundary is returned exactly.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Evaluates `f` on `grid` (sorted), then refines by golden section between
/// the neighbours of the best grid point. Does not assume unimodality
/// beyond that bracket.
pub fn grid_then_golden_max<F: FnMut(f64) -> f64>(mut f: F, grid: &[f64], tol: f64) -> (f64, f64) {
    assert!(!grid.is_empty(), "grid must be non-empty");
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let (best_i, _) =
        values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            });
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(grid.len() - 1)];
    let refined = golden_section_max(&mut f, lo, hi, tol);
    if refined.1 >= values[best_i] {
        refined
    } else {
        (grid[best_i], values[best_i])
    }
}

/// `n` points log-spaced on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (l, h) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                (l + (h - l) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2) + 2.0, -1.0, 4.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn returns_boundary_exactly() {
        let (x, _) = golden_section_max(|x| x, 0.0, 1.5, 1e-9);
        assert_eq!(x, 1.5);
    }

    #[test]
    fn grid_prescan_escapes_local_maximum() {
        // two bumps; the taller one is narrow and far from the middle
        let f = |x: f64| (-(x - 1.0).powi(2)).exp() + 2.0 * (-(x - 8.0).powi(2) * 20.0).exp();
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let (x, _) = grid_then_golden_max(f, &grid, 1e-10);
        assert!((x - 8.0).abs() < 1e-6);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(0.01, 100.0, 5);
        assert_eq!(g.len(), 5);
        assert!((g[0] - 0.01).abs() < 1e-15);
        assert_eq!(g[4], 100.0);
        assert!((g[2] - 1.0).abs() < 1e-12);
    }
}
