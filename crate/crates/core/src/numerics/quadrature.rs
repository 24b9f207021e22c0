//! One-dimensional quadrature.
//!
//! [`integrate`] is a globally adaptive scheme built on a fixed-order
//! Gauss–Legendre panel: every panel carries the difference between its
//! one-panel and two-half-panel estimates as its error, and the panel with
//! the largest error is bisected until the summed error meets the absolute
//! tolerance. [`CompositeRule`] is a fixed composite rule used where many
//! integrals must share one discretisation (the solver).

use crate::error::{Error, Result};
use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

const PANEL_ORDER: usize = 16;

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let rule = GaussLegendre::new(PANEL_ORDER).expect("valid Gauss-Legendre order");
        let mut pairs: Vec<(f64, f64)> =
            rule.nodes().copied().zip(rule.weights().copied()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.into_iter().unzip()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_subdivisions: 1 << 15,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 || self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(format!(
                "quadrature spec needs abs_tol > 0 and max_subdivisions > 0, got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

fn gauss_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = panel_rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, coarse: f64) -> Self {
        let m = 0.5 * (a + b);
        let left = gauss_panel(f, a, m);
        let right = gauss_panel(f, m, b);
        Self {
            a,
            b,
            left,
            right,
            err: (coarse - left - right).abs(),
        }
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integral of `f` over `[breakpoints[0], breakpoints[last]]`.
///
/// Interior breakpoints seed the initial panels; they should sit where the
/// integrand changes scale. Breakpoints must be sorted; duplicates are
/// ignored.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    if breakpoints.len() < 2 {
        return Err(Error::InvalidParameter(
            "integration needs at least two breakpoints".into(),
        ));
    }
    let mut heap = BinaryHeap::new();
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(a.is_finite() && b.is_finite()) || b < a {
            return Err(Error::InvalidParameter(format!(
                "breakpoints must be finite and sorted, got [{a}, {b}]"
            )));
        }
        if b > a {
            let coarse = gauss_panel(&f, a, b);
            heap.push(Panel::new(&f, a, b, coarse));
        }
    }
    if heap.is_empty() {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            subdivisions: 0,
        });
    }

    let totals = |heap: &BinaryHeap<Panel>| {
        heap.iter().fold((0.0, 0.0, 0.0), |(v, e, m), p| {
            (v + p.value(), e + p.err, m + p.value().abs())
        })
    };
    let (_, mut err, mut magnitude) = totals(&heap);
    let mut iterations = 0usize;
    loop {
        // Below this floor bisection only reshuffles rounding error.
        let floor = 64.0 * f64::EPSILON * magnitude;
        if err <= spec.abs_tol.max(floor) {
            break;
        }
        if heap.len() >= spec.max_subdivisions {
            return Err(Error::QuadratureFailure {
                abs_tol: spec.abs_tol,
                subdivisions: heap.len(),
                error_estimate: err,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        err -= worst.err;
        magnitude -= worst.value().abs();
        let m = 0.5 * (worst.a + worst.b);
        let children = if m <= worst.a || m >= worst.b {
            // Panel cannot be split further in floating point.
            vec![Panel { err: 0.0, ..worst }]
        } else {
            vec![
                Panel::new(&f, worst.a, m, worst.left),
                Panel::new(&f, m, worst.b, worst.right),
            ]
        };
        for c in children {
            err += c.err;
            magnitude += c.value().abs();
            heap.push(c);
        }
        iterations += 1;
        if iterations.is_multiple_of(64) {
            let (_, e, mg) = totals(&heap);
            err = e;
            magnitude = mg;
        }
    }
    let (value, abs_error, _) = totals(&heap);
    Ok(Integral {
        value,
        abs_error,
        subdivisions: heap.len(),
    })
}

/// Fixed composite Gauss–Legendre rule on `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    /// Uniform panels no wider than `max_panel_width`, each with the
    /// 16-point Gauss–Legendre rule.
    pub fn new(lo: f64, hi: f64, max_panel_width: f64, min_panels: usize) -> Self {
        let panels = (((hi - lo) / max_panel_width).ceil() as usize).max(min_panels.max(1));
        let width = (hi - lo) / panels as f64;
        let (gn, gw) = panel_rule();
        let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
        let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
        for p in 0..panels {
            let a = lo + width * p as f64;
            let mid = a + 0.5 * width;
            for (x, w) in gn.iter().zip(gw) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}
